//! Numerical and exact verification of Kummer's second transformation
//!
//! ```text
//! e^{-z} ₁F₁(a; 2a; 2z) = ₀F₁(; a+1/2; z²/4)
//! ```
//!
//! and its two contiguous relations with lower parameter `2a ± 1`, plus the
//! series-matching computation of the connection constants `A`, `B` in
//! `lhs = A y₁ + B y₂`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::closed_forms::{assemble_y1, FamilyId};
use crate::error::{Error, Result};
use crate::frobenius::{frobenius_basis, indicial_roots, reduce_kummer, Offset};
use crate::rational::{ratio, Rational, Scalar};
use crate::series::{
    eval_combination, eval_spec, hypergeometric_coefficients, ArgumentMap, Combination,
    HypergeometricSpec, Prefactor,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdentityId {
    /// Lower parameter `2a`.
    Kummer2,
    /// Lower parameter `2a + 1`.
    ContigPlus,
    /// Lower parameter `2a - 1`.
    ContigMinus,
}

impl IdentityId {
    pub const ALL: [IdentityId; 3] = [IdentityId::Kummer2, IdentityId::ContigPlus, IdentityId::ContigMinus];

    pub fn offset(self) -> Offset {
        match self {
            IdentityId::Kummer2 => Offset::Zero,
            IdentityId::ContigPlus => Offset::Plus,
            IdentityId::ContigMinus => Offset::Minus,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            IdentityId::Kummer2 => "kummer2",
            IdentityId::ContigPlus => "contig-plus",
            IdentityId::ContigMinus => "contig-minus",
        }
    }

    /// `2a + offset` must not be zero or a negative integer.
    pub fn check<T: Scalar>(self, a: &T) -> Result<()> {
        FamilyId::regular(self.offset()).check(a)
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "kummer2" | "kummer" | "k2" => Ok(IdentityId::Kummer2),
            "contig-plus" | "contigplus" | "plus" | "p1" => Ok(IdentityId::ContigPlus),
            "contig-minus" | "contigminus" | "minus" | "m1" => Ok(IdentityId::ContigMinus),
            _ => Err(Error::Parse(format!("unknown identity {s:?}"))),
        }
    }
}

/// `e^{-z} ₁F₁(a; 2a + offset; 2z)`.
pub fn lhs_spec(id: IdentityId, a: f64) -> Result<HypergeometricSpec> {
    id.check(&a)?;
    HypergeometricSpec::hyp1f1(
        a,
        2.0 * a + id.offset().value() as f64,
        ArgumentMap::Double,
        Prefactor::ExpNeg,
    )
}

/// The ₀F₁ combination on the right-hand side.
pub fn rhs_spec(id: IdentityId, a: f64) -> Result<Combination> {
    assemble_y1(id.offset(), a)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointResult {
    pub a: f64,
    pub z: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_residual: f64,
    pub rel_residual: f64,
    pub terms_used: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub identity: IdentityId,
    pub tol: f64,
    pub points: Vec<PointResult>,
    pub pass: bool,
}

impl IdentityReport {
    pub fn max_rel_residual(&self) -> f64 {
        self.points.iter().map(|p| p.rel_residual).fold(0.0, f64::max)
    }
}

fn verify_point(lhs: &HypergeometricSpec, rhs: &Combination, a: f64, z: f64, tol: f64) -> Result<PointResult> {
    let series_tol = tol / 10.0;
    let l = eval_spec(lhs, z, series_tol)?;
    let r = eval_combination(rhs, z, series_tol)?;
    let abs_residual = (l.value - r.value).abs();
    let rel_residual = if abs_residual == 0.0 {
        0.0
    } else {
        abs_residual / r.value.abs()
    };
    let metric = if r.value.abs() < 1.0 { abs_residual } else { rel_residual };
    Ok(PointResult {
        a,
        z,
        lhs: l.value,
        rhs: r.value,
        abs_residual,
        rel_residual,
        terms_used: l.terms_used.max(r.terms_used),
        pass: metric <= tol,
    })
}

/// Evaluate both sides on `a_grid × z_grid` (a-major order).
///
/// A point passes when its relative residual is within `tol`, or its
/// absolute residual is when `|rhs| < 1`. Both sides are summed to `tol/10`.
pub fn verify_identity(id: IdentityId, a_grid: &[f64], z_grid: &[f64], tol: f64) -> Result<IdentityReport> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidTolerance(tol));
    }
    if a_grid.is_empty() || z_grid.is_empty() {
        return Err(Error::InvalidArgument("grids must be non-empty".into()));
    }
    let sides = a_grid
        .iter()
        .map(|&a| Ok((a, lhs_spec(id, a)?, rhs_spec(id, a)?)))
        .collect::<Result<Vec<_>>>()?;
    let jobs: Vec<_> = sides
        .iter()
        .flat_map(|s| z_grid.iter().map(move |&z| (s, z)))
        .collect();
    let points = jobs
        .par_iter()
        .map(|((a, l, r), z)| verify_point(l, r, *a, *z, tol))
        .collect::<Result<Vec<_>>>()?;
    let pass = points.iter().all(|p| p.pass);
    Ok(IdentityReport {
        identity: id,
        tol,
        points,
        pass,
    })
}

/// Exact Taylor coefficients of `e^{-z} ₁F₁(a; 2a + offset; 2z)` for
/// `z^0 ..= z^N`.
pub fn lhs_series_exact(id: IdentityId, a: &Rational, order: usize) -> Result<Vec<Rational>> {
    id.check(a)?;
    let b = ratio(2, 1) * a + Rational::from_i64(id.offset().value());
    // ₁F₁(a; b; 2z) = Σ k_m 2^m z^m
    let mut f = hypergeometric_coefficients(std::slice::from_ref(a), &b, order)?;
    let mut pow2 = Rational::one();
    for c in f.iter_mut() {
        *c *= &pow2;
        pow2 *= ratio(2, 1);
    }
    // e^{-z} = Σ (-1)^k / k! z^k
    let mut e = Vec::with_capacity(order + 1);
    let mut t = Rational::one();
    for k in 0..=order {
        e.push(t.clone());
        t = -t / Rational::from_i64(k as i64 + 1);
    }
    Ok((0..=order)
        .map(|n| (0..=n).fold(Rational::zero(), |acc, k| acc + &e[k] * &f[n - k]))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConnectionMethod {
    SeriesMatching,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConnectionConstants {
    #[serde(rename = "A", serialize_with = "crate::report::ser_rational")]
    pub a: Rational,
    #[serde(rename = "B", serialize_with = "crate::report::ser_rational")]
    pub b: Rational,
    pub method: ConnectionMethod,
    pub order: usize,
}

/// Solve `lhs = A y₁ + B y₂` by matching generalized power series.
///
/// The left side and `y₁` only contain the exponents `0, 1, 2, ...`;
/// `y₂ = z^λ Σ d_n z^n` with non-integer `λ` only contains `λ, λ+1, ...`.
/// `B` is read off at the exponent `λ` and `A` at the exponent `0`; every
/// remaining exponent up to order `N` must then balance exactly.
pub fn connection_constants(id: IdentityId, a: &Rational, order: usize) -> Result<ConnectionConstants> {
    id.check(a)?;
    if order < 2 {
        return Err(Error::InvalidArgument(format!("order N must be at least 2, got {order}")));
    }
    let ode = reduce_kummer(a, id.offset());
    let roots = indicial_roots(&ode);
    if roots.integer_gap.is_some() {
        return Err(Error::ResonantParameter { a: a.to_string() });
    }
    let c0 = Rational::one();
    let [upper, lower] = frobenius_basis(&ode, order, &c0)?;
    // the analytic solution is the one with exponent 0
    let (y1, y2) = if upper.lambda.is_zero() { (upper, lower) } else { (lower, upper) };

    let lhs = lhs_series_exact(id, a, order)?;
    let left: BTreeMap<Rational, Rational> = lhs
        .into_iter()
        .enumerate()
        .map(|(n, c)| (Rational::from_i64(n as i64), c))
        .collect();
    let y2_terms: BTreeMap<Rational, Rational> = y2
        .coeffs
        .iter()
        .enumerate()
        .map(|(n, c)| (&y2.lambda + Rational::from_i64(n as i64), c.clone()))
        .collect();
    let at = |m: &BTreeMap<Rational, Rational>, k: &Rational| m.get(k).cloned().unwrap_or_else(Rational::zero);

    // y₁ has no term at the non-integer exponent λ, so B is fixed there alone
    let b = at(&left, &y2.lambda) / &y2.coeffs[0];
    let a_const = (at(&left, &Rational::zero()) - &b * at(&y2_terms, &Rational::zero())) / &y1.coeffs[0];

    let mut right: BTreeMap<Rational, Rational> = BTreeMap::new();
    for (n, c) in y1.coeffs.iter().enumerate() {
        *right.entry(Rational::from_i64(n as i64)).or_insert_with(Rational::zero) += &a_const * c;
    }
    for (k, c) in &y2_terms {
        *right.entry(k.clone()).or_insert_with(Rational::zero) += &b * c;
    }
    let limit = Rational::from_i64(order as i64);
    let exponents: Vec<Rational> = left
        .keys()
        .chain(right.keys())
        .filter(|k| **k <= limit)
        .cloned()
        .collect();
    for k in exponents {
        if at(&left, &k) != at(&right, &k) {
            let order = k.floor().to_integer().try_into().unwrap_or(usize::MAX);
            return Err(Error::ConnectionMismatch { order });
        }
    }
    Ok(ConnectionConstants {
        a: a_const,
        b,
        method: ConnectionMethod::SeriesMatching,
        order,
    })
}
