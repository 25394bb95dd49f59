//! Frobenius solutions of `z y'' + β y' + (γ + δ z) y = 0` at the regular
//! singular point `z = 0`.
//!
//! Substituting `y = z^λ Σ c_n z^n` gives the indicial equation
//! `λ(λ + β - 1) = 0` and the three-term recurrence
//!
//! ```text
//! c_n (n+λ)(n+λ+β-1) + γ c_{n-1} + δ c_{n-2} = 0,    c_{-1} = 0.
//! ```
//!
//! Kummer's equation `x w'' + (b - x) w' - a w = 0` with `b = 2a + k`,
//! `x = 2z` and `w = e^z y` lands in this family with `(β, γ, δ) = (2a+k, k, -1)`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Scalar;

/// Shift `k` of the lower parameter in `₁F₁(a; 2a + k; 2z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Offset {
    #[serde(rename = "-1")]
    Minus,
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "+1")]
    Plus,
}

impl Offset {
    pub const ALL: [Offset; 3] = [Offset::Zero, Offset::Plus, Offset::Minus];

    pub fn value(self) -> i64 {
        match self {
            Offset::Minus => -1,
            Offset::Zero => 0,
            Offset::Plus => 1,
        }
    }
}

impl fmt::Display for Offset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Offset::Minus => "-1",
            Offset::Zero => "0",
            Offset::Plus => "+1",
        })
    }
}

impl FromStr for Offset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "-1" | "−1" | "minus" => Ok(Offset::Minus),
            "0" | "+0" | "-0" | "zero" => Ok(Offset::Zero),
            "1" | "+1" | "plus" => Ok(Offset::Plus),
            other => Err(Error::Parse(format!("offset must be -1, 0 or +1, got {other:?}"))),
        }
    }
}

/// `z y'' + beta y' + (gamma + delta z) y = 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OdeSpec<T> {
    pub beta: T,
    pub gamma: T,
    pub delta: T,
}

impl<T: Scalar> OdeSpec<T> {
    pub fn new(beta: T, gamma: T, delta: T) -> Self {
        OdeSpec { beta, gamma, delta }
    }

    /// `(n+λ)(n+λ+β-1)`, the factor multiplying `c_n`.
    fn leading_factor(&self, lambda: &T, n: usize) -> T {
        let s = T::from_i64(n as i64) + lambda.clone();
        s.clone() * (s + self.beta.clone() - T::one())
    }
}

/// The equation obtained from Kummer's equation with `b = 2a + offset`
/// under `x = 2z`, `w = e^z y`.
pub fn reduce_kummer<T: Scalar>(a: &T, offset: Offset) -> OdeSpec<T> {
    let k = T::from_i64(offset.value());
    OdeSpec {
        beta: T::from_i64(2) * a.clone() + k.clone(),
        gamma: k,
        delta: -T::one(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndicialRoots<T> {
    pub root_zero: T,
    pub root_other: T,
    /// `|root_other - root_zero|` when it is an integer.
    pub integer_gap: Option<u64>,
}

impl<T: Scalar> IndicialRoots<T> {
    /// The root with the larger real value (the one whose recurrence never
    /// resonates).
    pub fn upper(&self) -> &T {
        if self.root_other.to_f64() > self.root_zero.to_f64() {
            &self.root_other
        } else {
            &self.root_zero
        }
    }

    pub fn lower(&self) -> &T {
        if self.root_other.to_f64() > self.root_zero.to_f64() {
            &self.root_zero
        } else {
            &self.root_other
        }
    }
}

pub fn indicial_roots<T: Scalar>(ode: &OdeSpec<T>) -> IndicialRoots<T> {
    let root_other = T::one() - ode.beta.clone();
    let integer_gap = root_other.as_integer().map(|k| k.unsigned_abs());
    IndicialRoots {
        root_zero: T::zero(),
        root_other,
        integer_gap,
    }
}

/// `c_n = -(γ c_{n-1} + δ c_{n-2}) / ((n+λ)(n+λ+β-1))`.
///
/// For `n = 1` pass `c_prev2 = 0`.
pub fn recurrence_step<T: Scalar>(
    ode: &OdeSpec<T>,
    lambda: &T,
    n: usize,
    c_prev: &T,
    c_prev2: &T,
) -> Result<T> {
    let denom = ode.leading_factor(lambda, n);
    if denom.is_negligible() {
        return Err(Error::ResonantDenominator { n });
    }
    let numer = ode.gamma.clone() * c_prev.clone() + ode.delta.clone() * c_prev2.clone();
    Ok(-numer / denom)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrobeniusSolution<T> {
    pub lambda: T,
    /// `c_0 ..= c_N`, or fewer when the recurrence hit a resonance.
    pub coeffs: Vec<T>,
    pub c0: T,
    /// Set when the recurrence resonated (or the root is double and this is
    /// the second solution): the true solution may carry a `log z` term and
    /// is not constructed.
    pub log_case: bool,
    /// Requested truncation order `N`.
    pub order: usize,
}

fn is_root<T: Scalar>(ode: &OdeSpec<T>, lambda: &T) -> bool {
    (lambda.clone() * (lambda.clone() + ode.beta.clone() - T::one())).is_negligible()
}

/// Iterate the recurrence from `c_0` up to order `N`.
///
/// A vanishing denominator is reported through `log_case`, with the
/// coefficients truncated just before the resonant order.
pub fn solve_frobenius<T: Scalar>(
    ode: &OdeSpec<T>,
    lambda: &T,
    order: usize,
    c0: &T,
) -> Result<FrobeniusSolution<T>> {
    if order < 2 {
        return Err(Error::InvalidArgument(format!("order N must be at least 2, got {order}")));
    }
    if c0.is_negligible() {
        return Err(Error::InvalidArgument("c0 must be non-zero".into()));
    }
    if !is_root(ode, lambda) {
        return Err(Error::NotIndicialRoot {
            lambda: lambda.to_string(),
        });
    }
    let mut coeffs = Vec::with_capacity(order + 1);
    coeffs.push(c0.clone());
    let mut log_case = false;
    for n in 1..=order {
        let prev = &coeffs[n - 1];
        let zero = T::zero();
        let prev2 = if n >= 2 { &coeffs[n - 2] } else { &zero };
        match recurrence_step(ode, lambda, n, prev, prev2) {
            Ok(c) => coeffs.push(c),
            Err(Error::ResonantDenominator { .. }) => {
                log_case = true;
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(FrobeniusSolution {
        lambda: lambda.clone(),
        coeffs,
        c0: c0.clone(),
        log_case,
        order,
    })
}

/// Both Frobenius solutions, upper root first.
///
/// With a double root (`β = 1`) the second solution is logarithmic; it is
/// returned as `c_0` alone with `log_case` set.
pub fn frobenius_basis<T: Scalar>(
    ode: &OdeSpec<T>,
    order: usize,
    c0: &T,
) -> Result<[FrobeniusSolution<T>; 2]> {
    let roots = indicial_roots(ode);
    let first = solve_frobenius(ode, roots.upper(), order, c0)?;
    let second = if roots.integer_gap == Some(0) {
        FrobeniusSolution {
            lambda: roots.lower().clone(),
            coeffs: vec![c0.clone()],
            c0: c0.clone(),
            log_case: true,
            order,
        }
    } else {
        solve_frobenius(ode, roots.lower(), order, c0)?
    };
    Ok([first, second])
}

/// Coefficient of `z^{n+λ-1}` in `z y'' + β y' + (γ + δz) y` for the
/// truncated series, `n = 0 .. N-1` (or up to the resonance).
pub fn ode_residual<T: Scalar>(ode: &OdeSpec<T>, sol: &FrobeniusSolution<T>) -> Vec<T> {
    let len = if sol.log_case {
        sol.coeffs.len()
    } else {
        sol.order.min(sol.coeffs.len())
    };
    let zero = T::zero();
    (0..len)
        .map(|n| {
            let c = &sol.coeffs;
            let prev = if n >= 1 { &c[n - 1] } else { &zero };
            let prev2 = if n >= 2 { &c[n - 2] } else { &zero };
            ode.leading_factor(&sol.lambda, n) * c[n].clone()
                + ode.gamma.clone() * prev.clone()
                + ode.delta.clone() * prev2.clone()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{ratio, Rational};
    use num_traits::Zero;

    #[test]
    fn reduction_matches_the_three_equations() {
        let a = ratio(3, 4);
        let o0 = reduce_kummer(&a, Offset::Zero);
        assert_eq!(o0, OdeSpec::new(ratio(3, 2), ratio(0, 1), ratio(-1, 1)));
        let op = reduce_kummer(&a, Offset::Plus);
        assert_eq!(op, OdeSpec::new(ratio(5, 2), ratio(1, 1), ratio(-1, 1)));
        let om = reduce_kummer(&a, Offset::Minus);
        assert_eq!(om, OdeSpec::new(ratio(1, 2), ratio(-1, 1), ratio(-1, 1)));
        let f = reduce_kummer(&0.3f64, Offset::Plus);
        assert!((f.beta - 1.6).abs() < 1e-15 && f.gamma == 1.0 && f.delta == -1.0);
    }

    #[test]
    fn indicial_examples() {
        let r = indicial_roots(&reduce_kummer(&ratio(1, 1), Offset::Plus));
        assert_eq!(r.root_zero, ratio(0, 1));
        assert_eq!(r.root_other, ratio(-2, 1));
        assert_eq!(r.integer_gap, Some(2));
        assert_eq!(r.lower(), &ratio(-2, 1));

        let r = indicial_roots(&reduce_kummer(&ratio(3, 4), Offset::Minus));
        assert_eq!(r.root_other, ratio(1, 2));
        assert_eq!(r.integer_gap, None);

        let r = indicial_roots(&reduce_kummer(&ratio(1, 2), Offset::Zero));
        assert_eq!(r.root_other, ratio(0, 1));
        assert_eq!(r.integer_gap, Some(0));
    }

    #[test]
    fn recurrence_examples() {
        let plus = OdeSpec::new(ratio(3, 1), ratio(1, 1), ratio(-1, 1));
        let zero = Rational::zero();
        let c1 = recurrence_step(&plus, &zero, 1, &ratio(1, 1), &zero).unwrap();
        assert_eq!(c1, ratio(-1, 3));
        let c2 = recurrence_step(&plus, &zero, 2, &c1, &ratio(1, 1)).unwrap();
        assert_eq!(c2, ratio(1, 6));

        let minus = OdeSpec::new(ratio(1, 1), ratio(-1, 1), ratio(-1, 1));
        let c1 = recurrence_step(&minus, &zero, 1, &ratio(1, 1), &zero).unwrap();
        assert_eq!(c1, ratio(1, 1));
    }

    #[test]
    fn resonance_is_an_error_for_a_single_step() {
        let plus = OdeSpec::new(ratio(3, 1), ratio(1, 1), ratio(-1, 1));
        let err = recurrence_step(&plus, &ratio(-2, 1), 2, &ratio(1, 1), &ratio(1, 1));
        assert_eq!(err, Err(Error::ResonantDenominator { n: 2 }));
    }

    #[test]
    fn solve_examples() {
        let plus = OdeSpec::new(ratio(3, 1), ratio(1, 1), ratio(-1, 1));
        let s = solve_frobenius(&plus, &Rational::zero(), 4, &ratio(1, 1)).unwrap();
        assert_eq!(&s.coeffs[..3], &[ratio(1, 1), ratio(-1, 3), ratio(1, 6)]);
        assert_eq!(s.coeffs.len(), 5);
        assert!(!s.log_case);

        let lower = solve_frobenius(&plus, &ratio(-2, 1), 8, &ratio(1, 1)).unwrap();
        assert!(lower.log_case);
        assert_eq!(lower.coeffs.len(), 2);
    }

    #[test]
    fn even_equation_has_even_solution() {
        for a in [ratio(1, 3), ratio(3, 4), ratio(7, 5)] {
            let ode = reduce_kummer(&a, Offset::Zero);
            let s = solve_frobenius(&ode, &Rational::zero(), 20, &ratio(1, 1)).unwrap();
            assert!(s.coeffs.iter().skip(1).step_by(2).all(|c| c.is_zero()));
        }
    }

    #[test]
    fn preconditions() {
        let ode = reduce_kummer(&ratio(1, 3), Offset::Plus);
        assert!(matches!(
            solve_frobenius(&ode, &ratio(1, 2), 4, &ratio(1, 1)),
            Err(Error::NotIndicialRoot { .. })
        ));
        assert!(matches!(
            solve_frobenius(&ode, &Rational::zero(), 1, &ratio(1, 1)),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            solve_frobenius(&ode, &Rational::zero(), 4, &Rational::zero()),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn residual_vanishes_in_exact_mode() {
        let ode = OdeSpec::new(ratio(3, 1), ratio(1, 1), ratio(-1, 1));
        let s = solve_frobenius(&ode, &Rational::zero(), 16, &ratio(1, 1)).unwrap();
        let r = ode_residual(&ode, &s);
        assert_eq!(r.len(), 16);
        assert!(r.iter().all(|x| x.is_zero()));
    }

    #[test]
    fn float_residual_is_small() {
        let ode = OdeSpec::new(3.0f64, 1.0, -1.0);
        let s = solve_frobenius(&ode, &0.0, 16, &1.0).unwrap();
        for r in ode_residual(&ode, &s) {
            assert!(r.abs() <= 1e-12, "{r}");
        }
    }

    #[test]
    fn double_root_second_solution_is_flagged() {
        let ode = reduce_kummer(&ratio(1, 2), Offset::Zero);
        let [first, second] = frobenius_basis(&ode, 8, &ratio(1, 1)).unwrap();
        assert!(!first.log_case);
        assert!(second.log_case);
    }

    #[test]
    fn offset_parsing() {
        assert_eq!("+1".parse::<Offset>().unwrap(), Offset::Plus);
        assert_eq!("1".parse::<Offset>().unwrap(), Offset::Plus);
        assert_eq!("-1".parse::<Offset>().unwrap(), Offset::Minus);
        assert_eq!("0".parse::<Offset>().unwrap(), Offset::Zero);
        assert!("2".parse::<Offset>().is_err());
    }
}
