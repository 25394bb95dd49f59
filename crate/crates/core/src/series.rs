//! Pochhammer symbols and truncated ₁F₁ / ₀F₁ series.
//!
//! Float evaluation sums the power series directly and stops once three
//! consecutive terms are below `tol · |partial sum|`. When the series is
//! alternating enough that double precision cannot deliver `tol` (always for
//! arguments below `-X_SWITCH`), the inputs are converted to exact rationals
//! (every finite `f64` is one), the series is summed exactly and the result is
//! rounded once.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{from_f64_exact, Rational, Scalar};

/// Hard cap on the number of series terms.
pub const N_MAX: usize = 10_000;

/// Consecutive small terms required before the sum is accepted.
pub const STOP_STREAK: usize = 3;

/// Arguments below `-X_SWITCH` are always summed exactly.
pub const X_SWITCH: f64 = 10.0;

/// Safety factor on `eps · Σ|term| / |sum|` when deciding whether float
/// summation can meet the requested tolerance.
const CANCELLATION_FACTOR: f64 = 16.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvalMode {
    Float64,
    ExactThenRound,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalResult {
    pub value: f64,
    pub terms_used: usize,
    pub last_term_magnitude: f64,
    pub mode: EvalMode,
}

/// Result of an exact-mode series evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactEval {
    pub value: Rational,
    pub terms_used: usize,
    pub last_term: Rational,
}

impl ExactEval {
    pub fn rounded(&self) -> EvalResult {
        EvalResult {
            value: self.value.to_f64(),
            terms_used: self.terms_used,
            last_term_magnitude: self.last_term.abs().to_f64(),
            mode: EvalMode::ExactThenRound,
        }
    }
}

/// Rising factorial `x (x+1) ··· (x+n-1)`; `1` for `n = 0`.
pub fn pochhammer<T: Scalar>(x: &T, n: u32) -> T {
    (0..n).fold(T::one(), |acc, k| acc * (x.clone() + T::from_i64(k as i64)))
}

/// Coefficients `Π(upper)_n / ((lower)_n n!)` for `n = 0..=order`.
pub fn hypergeometric_coefficients<T: Scalar>(
    upper: &[T],
    lower: &T,
    order: usize,
) -> Result<Vec<T>> {
    check_lower(lower)?;
    let mut out = Vec::with_capacity(order + 1);
    let mut c = T::one();
    out.push(c.clone());
    for n in 0..order {
        let nn = T::from_i64(n as i64);
        let mut num = T::one();
        for u in upper {
            num = num * (u.clone() + nn.clone());
        }
        c = c * num / ((lower.clone() + nn) * T::from_i64(n as i64 + 1));
        out.push(c.clone());
    }
    Ok(out)
}

fn check_lower<T: Scalar>(b: &T) -> Result<()> {
    if b.is_nonpositive_integer() {
        Err(Error::PoleParameter {
            param: b.to_string(),
        })
    } else {
        Ok(())
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidTolerance(tol))
    }
}

fn check_finite(values: &[f64]) -> Result<()> {
    match values.iter().find(|v| !v.is_finite()) {
        Some(v) => Err(Error::DomainError(format!("non-finite input {v}"))),
        None => Ok(()),
    }
}

struct FloatSum {
    sum: f64,
    abs_sum: f64,
    terms_used: usize,
    last_term: f64,
}

fn sum_float(upper: Option<f64>, b: f64, x: f64, tol: f64) -> Result<FloatSum> {
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut abs_sum = 1.0f64;
    let mut streak = 0;
    for n in 0..N_MAX {
        let nf = n as f64;
        let up = upper.map_or(1.0, |a| a + nf);
        term *= up * x / ((b + nf) * (nf + 1.0));
        sum += term;
        abs_sum += term.abs();
        if !sum.is_finite() {
            return Err(Error::NoConvergence { terms: n + 2 });
        }
        if term.abs() <= tol * sum.abs() {
            streak += 1;
            if streak == STOP_STREAK {
                return Ok(FloatSum {
                    sum,
                    abs_sum,
                    terms_used: n + 2,
                    last_term: term.abs(),
                });
            }
        } else {
            streak = 0;
        }
    }
    Err(Error::NoConvergence { terms: N_MAX })
}

fn sum_exact(upper: Option<&Rational>, b: &Rational, x: &Rational, tol: f64) -> Result<ExactEval> {
    check_tol(tol)?;
    check_lower(b)?;
    if x.is_zero() {
        return Ok(ExactEval {
            value: Rational::one(),
            terms_used: 1,
            last_term: Rational::zero(),
        });
    }
    let tol = from_f64_exact(tol)?;
    let mut term = Rational::one();
    let mut sum = Rational::one();
    let mut streak = 0;
    for n in 0..N_MAX {
        let nn = Rational::from_i64(n as i64);
        let up = upper.map_or_else(Rational::one, |a| a + &nn);
        term = term * up * x / ((b + &nn) * (nn + Rational::one()));
        sum += &term;
        if term.abs() <= &tol * sum.abs() {
            streak += 1;
            if streak == STOP_STREAK {
                return Ok(ExactEval {
                    value: sum,
                    terms_used: n + 2,
                    last_term: term,
                });
            }
        } else {
            streak = 0;
        }
    }
    Err(Error::NoConvergence { terms: N_MAX })
}

fn eval_float(upper: Option<f64>, b: f64, x: f64, tol: f64) -> Result<EvalResult> {
    check_tol(tol)?;
    check_finite(&[upper.unwrap_or(0.0), b, x])?;
    check_lower(&b)?;
    if x == 0.0 {
        return Ok(EvalResult {
            value: 1.0,
            terms_used: 1,
            last_term_magnitude: 0.0,
            mode: EvalMode::Float64,
        });
    }
    if x >= -X_SWITCH {
        let s = sum_float(upper, b, x, tol)?;
        let condition = s.abs_sum / s.sum.abs();
        if condition * CANCELLATION_FACTOR * f64::EPSILON <= tol {
            return Ok(EvalResult {
                value: s.sum,
                terms_used: s.terms_used,
                last_term_magnitude: s.last_term,
                mode: EvalMode::Float64,
            });
        }
    }
    let a = upper.map(from_f64_exact).transpose()?;
    let exact = sum_exact(a.as_ref(), &from_f64_exact(b)?, &from_f64_exact(x)?, tol)?;
    Ok(exact.rounded())
}

/// `₀F₁(; b; x)` in double precision.
pub fn eval_0f1(b: f64, x: f64, tol: f64) -> Result<EvalResult> {
    eval_float(None, b, x, tol)
}

/// `₁F₁(a; b; x)` in double precision.
pub fn eval_1f1(a: f64, b: f64, x: f64, tol: f64) -> Result<EvalResult> {
    eval_float(Some(a), b, x, tol)
}

/// `₀F₁(; b; x)` summed in exact rationals with the same stopping rule.
pub fn eval_0f1_exact(b: &Rational, x: &Rational, tol: f64) -> Result<ExactEval> {
    sum_exact(None, b, x, tol)
}

/// `₁F₁(a; b; x)` summed in exact rationals with the same stopping rule.
pub fn eval_1f1_exact(a: &Rational, b: &Rational, x: &Rational, tol: f64) -> Result<ExactEval> {
    sum_exact(Some(a), b, x, tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArgumentMap {
    /// `x = z`
    Identity,
    /// `x = 2z`
    Double,
    /// `x = z²/4`
    QuarterSquare,
}

impl ArgumentMap {
    pub fn apply(self, z: f64) -> f64 {
        match self {
            ArgumentMap::Identity => z,
            ArgumentMap::Double => 2.0 * z,
            ArgumentMap::QuarterSquare => z * z / 4.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Prefactor {
    None,
    /// `e^{-z}`
    ExpNeg,
    /// `z^μ`
    Power(f64),
}

impl Prefactor {
    pub fn apply(self, z: f64) -> Result<f64> {
        match self {
            Prefactor::None => Ok(1.0),
            Prefactor::ExpNeg => Ok((-z).exp()),
            Prefactor::Power(mu) => {
                if z == 0.0 {
                    return match mu.partial_cmp(&0.0) {
                        Some(std::cmp::Ordering::Less) => Err(Error::DomainError(format!(
                            "z^{mu} is singular at z = 0"
                        ))),
                        Some(std::cmp::Ordering::Equal) => Ok(1.0),
                        _ => Ok(0.0),
                    };
                }
                if z < 0.0 {
                    if mu.fract() != 0.0 {
                        return Err(Error::DomainError(format!(
                            "z^{mu} is not real for z = {z}"
                        )));
                    }
                    return Ok(z.powi(mu as i32));
                }
                Ok(z.powf(mu))
            }
        }
    }
}

/// One `ₚF_q` instance with its argument transform and prefactor. Only
/// `₀F₁` and `₁F₁` are supported.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypergeometricSpec {
    pub upper: Vec<f64>,
    pub lower: Vec<f64>,
    pub argument_map: ArgumentMap,
    pub prefactor: Prefactor,
}

impl HypergeometricSpec {
    pub fn new(
        upper: Vec<f64>,
        lower: Vec<f64>,
        argument_map: ArgumentMap,
        prefactor: Prefactor,
    ) -> Result<Self> {
        let spec = HypergeometricSpec {
            upper,
            lower,
            argument_map,
            prefactor,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// `₀F₁(; b; map(z))` without prefactor.
    pub fn hyp0f1(b: f64, argument_map: ArgumentMap) -> Result<Self> {
        Self::new(vec![], vec![b], argument_map, Prefactor::None)
    }

    /// `₁F₁(a; b; map(z))` with the given prefactor.
    pub fn hyp1f1(a: f64, b: f64, argument_map: ArgumentMap, prefactor: Prefactor) -> Result<Self> {
        Self::new(vec![a], vec![b], argument_map, prefactor)
    }

    pub fn validate(&self) -> Result<()> {
        if self.lower.len() != 1 || self.upper.len() > 1 {
            return Err(Error::UnsupportedSpec(format!(
                "{}F{} (only 0F1 and 1F1 are supported)",
                self.upper.len(),
                self.lower.len()
            )));
        }
        check_finite(&self.upper)?;
        check_finite(&self.lower)?;
        if let Prefactor::Power(mu) = self.prefactor {
            check_finite(&[mu])?;
        }
        check_lower(&self.lower[0])
    }
}

/// `prefactor(z) · F(map(z))`.
pub fn eval_spec(spec: &HypergeometricSpec, z: f64, tol: f64) -> Result<EvalResult> {
    spec.validate()?;
    check_finite(&[z])?;
    let pre = spec.prefactor.apply(z)?;
    let x = spec.argument_map.apply(z);
    let mut r = match spec.upper.first() {
        None => eval_0f1(spec.lower[0], x, tol)?,
        Some(&a) => eval_1f1(a, spec.lower[0], x, tol)?,
    };
    r.value *= pre;
    r.last_term_magnitude *= pre.abs();
    Ok(r)
}

/// `coefficient · z^power · F(z)`; one summand of a [`Combination`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CombinationTerm {
    pub coefficient: f64,
    pub z_power: u32,
    pub spec: HypergeometricSpec,
}

/// `prefactor(z) · Σ coefficient · z^power · F(z)`, the shape of every
/// Frobenius-solution assembly in this crate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Combination {
    pub prefactor: Prefactor,
    pub terms: Vec<CombinationTerm>,
}

pub fn eval_combination(comb: &Combination, z: f64, tol: f64) -> Result<EvalResult> {
    check_finite(&[z])?;
    let pre = comb.prefactor.apply(z)?;
    let mut value = 0.0;
    let mut terms_used = 1;
    let mut last = 0.0;
    let mut mode = EvalMode::Float64;
    for t in &comb.terms {
        let r = eval_spec(&t.spec, z, tol)?;
        let scale = t.coefficient * z.powi(t.z_power as i32);
        value += scale * r.value;
        last += (scale * pre).abs() * r.last_term_magnitude;
        terms_used = terms_used.max(r.terms_used);
        if r.mode == EvalMode::ExactThenRound {
            mode = EvalMode::ExactThenRound;
        }
    }
    Ok(EvalResult {
        value: pre * value,
        terms_used,
        last_term_magnitude: last,
        mode,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(&7.5f64, 0), 1.0);
        assert_eq!(pochhammer(&ratio(5, 3), 0), ratio(1, 1));
        assert_eq!(pochhammer(&3.0f64, 4), 360.0);
        assert_eq!(pochhammer(&ratio(3, 1), 4), ratio(360, 1));
        assert_eq!(pochhammer(&ratio(1, 2), 2), ratio(3, 4));
        assert_eq!(pochhammer(&ratio(-2, 1), 3), ratio(0, 1));
    }

    #[test]
    fn zero_argument_is_one() {
        for b in [0.75, 1.5, 3.0, -0.5] {
            let r = eval_0f1(b, 0.0, 1e-12).unwrap();
            assert_eq!(r.value, 1.0);
            assert_eq!(r.terms_used, 1);
            let r = eval_1f1(0.3, b, 0.0, 1e-12).unwrap();
            assert_eq!(r.value, 1.0);
        }
    }

    #[test]
    fn hyperbolic_values() {
        let s = eval_0f1(1.5, 0.25, 1e-15).unwrap();
        assert!(rel(s.value, 1.1752011936438014) < 1e-15, "{}", s.value);
        let c = eval_0f1(0.5, 0.25, 1e-15).unwrap();
        assert!(rel(c.value, 1.5430806348152437) < 1e-15, "{}", c.value);
    }

    #[test]
    fn kummer_closed_forms() {
        let r = eval_1f1(1.0, 2.0, 2.0, 1e-15).unwrap();
        assert!(rel(r.value, (2f64.exp() - 1.0) / 2.0) < 1e-14);
        for x in [-3.0, -0.5, 0.7, 4.0, 12.0] {
            let r = eval_1f1(2.25, 2.25, x, 1e-14).unwrap();
            assert!(rel(r.value, f64::exp(x)) < 1e-13, "x={x}: {}", r.value);
        }
    }

    #[test]
    fn pole_guard() {
        for b in [0.0, -1.0, -3.0 + 5e-9] {
            assert!(matches!(eval_0f1(b, 1.0, 1e-10), Err(Error::PoleParameter { .. })));
            assert!(matches!(eval_1f1(1.0, b, 1.0, 1e-10), Err(Error::PoleParameter { .. })));
        }
        assert!(eval_0f1(-1.5, 1.0, 1e-10).is_ok());
        assert!(matches!(
            eval_0f1_exact(&ratio(-2, 1), &ratio(1, 1), 1e-10),
            Err(Error::PoleParameter { .. })
        ));
    }

    #[test]
    fn bad_tolerance() {
        assert!(matches!(eval_0f1(1.0, 1.0, 0.0), Err(Error::InvalidTolerance(_))));
        assert!(matches!(eval_1f1(1.0, 1.0, 1.0, -1.0), Err(Error::InvalidTolerance(_))));
        assert!(matches!(eval_0f1(1.0, 1.0, f64::NAN), Err(Error::InvalidTolerance(_))));
    }

    #[test]
    fn term_cap_reports_no_convergence() {
        // the 1F1 terms peak near n = x, beyond the cap
        assert!(matches!(
            eval_1f1(1.0, 1.5, 5.0e4, 1e-10),
            Err(Error::NoConvergence { .. })
        ));
    }

    #[test]
    fn large_negative_argument_is_promoted() {
        // 1F1(a; a; x) = e^x exercises the worst cancellation
        let r = eval_1f1(1.0, 1.0, -30.0, 1e-12).unwrap();
        assert_eq!(r.mode, EvalMode::ExactThenRound);
        assert!(rel(r.value, (-30f64).exp()) < 1e-12, "{}", r.value);
        // 0F1(1/2; -z²/4) = cos z
        let r = eval_0f1(0.5, -36.0, 1e-12).unwrap();
        assert!(rel(r.value, 12f64.cos()) < 1e-12, "{}", r.value);
    }

    #[test]
    fn strong_cancellation_above_switch_is_promoted() {
        // 1F1(3; 1; -10) = e^{-10} (1 - 20 + 50)
        let r = eval_1f1(3.0, 1.0, -10.0, 1e-12).unwrap();
        assert_eq!(r.mode, EvalMode::ExactThenRound);
        assert!(rel(r.value, 31.0 * (-10f64).exp()) < 1e-12, "{}", r.value);
    }

    #[test]
    fn spec_dispatch() {
        let s = HypergeometricSpec::hyp0f1(1.5, ArgumentMap::QuarterSquare).unwrap();
        assert!(rel(eval_spec(&s, 1.0, 1e-15).unwrap().value, 1f64.sinh()) < 1e-15);
        let k = HypergeometricSpec::hyp1f1(1.0, 2.0, ArgumentMap::Double, Prefactor::ExpNeg).unwrap();
        assert!(rel(eval_spec(&k, 1.0, 1e-15).unwrap().value, 1f64.sinh()) < 1e-14);
        assert_eq!(eval_spec(&k, 0.0, 1e-12).unwrap().value, 1.0);
        assert_eq!(eval_spec(&s, 0.0, 1e-12).unwrap().value, 1.0);
        let p = HypergeometricSpec::new(vec![], vec![1.25], ArgumentMap::QuarterSquare, Prefactor::Power(-0.5))
            .unwrap();
        assert!(matches!(eval_spec(&p, 0.0, 1e-10), Err(Error::DomainError(_))));
        assert!(matches!(eval_spec(&p, -1.0, 1e-10), Err(Error::DomainError(_))));
        assert!(eval_spec(&p, 1.0, 1e-10).is_ok());
    }

    #[test]
    fn spec_validation() {
        assert!(matches!(
            HypergeometricSpec::new(vec![1.0, 2.0], vec![3.0], ArgumentMap::Identity, Prefactor::None),
            Err(Error::UnsupportedSpec(_))
        ));
        assert!(matches!(
            HypergeometricSpec::new(vec![], vec![], ArgumentMap::Identity, Prefactor::None),
            Err(Error::UnsupportedSpec(_))
        ));
        assert!(matches!(
            HypergeometricSpec::hyp0f1(-2.0, ArgumentMap::Identity),
            Err(Error::PoleParameter { .. })
        ));
    }

    #[test]
    fn exact_matches_coefficients() {
        let b = ratio(3, 2);
        let x = ratio(1, 4);
        let coeffs = hypergeometric_coefficients::<Rational>(&[], &b, 24).unwrap();
        let partial: Rational = coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| c * num_traits::pow(x.clone(), n))
            .fold(Rational::zero(), |a, t| a + t);
        let e = eval_0f1_exact(&b, &x, 1e-30).unwrap();
        // both are truncations of the same series; they agree far below tol
        let diff = (partial - &e.value).abs().to_f64();
        assert!(diff < 1e-25, "{diff}");
    }
}
