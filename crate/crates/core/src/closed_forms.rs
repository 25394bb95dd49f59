//! Closed-form Frobenius coefficients for the three reduced Kummer equations
//! and the ₀F₁ assemblies of the corresponding solutions.
//!
//! Every family has the shape
//!
//! ```text
//! c_{2n}   = 2^{-2n} c_0 / (n! (p)_n)
//! c_{2n+1} = 2^{-2n} c_1 / (n! (q)_n)
//! ```
//!
//! so that `z^λ Σ c_n z^n = c_0 z^λ { ₀F₁(; p; z²/4) + (c_1/c_0) z ₀F₁(; q; z²/4) }`.
//!
//! | family            | offset | λ      | c_1 / c_0   | p     | q     | excluded 2a     |
//! |-------------------|--------|--------|-------------|-------|-------|-----------------|
//! | `K2-even`         | 0      | 0      | 0           | a+1/2 | -     | 0, -1, -2, ...  |
//! | `K2-odd-exponent` | 0      | 1-2a   | 0           | 3/2-a | -     | 1, 2, 3, ...    |
//! | `P1-λ0`           | +1     | 0      | -1/(2a+1)   | a+1/2 | a+3/2 | -1, -2, ...     |
//! | `P1-λ−2a`         | +1     | -2a    | 1/(2a-1)    | 1/2-a | 3/2-a | 1, 2, 3, ...    |
//! | `M1-λ0`           | -1     | 0      | 1/(2a-1)    | a-1/2 | a+1/2 | 1, 0, -1, ...   |
//! | `M1-λ2−2a`        | -1     | 2-2a   | 1/(3-2a)    | 3/2-a | 5/2-a | 2, 3, 4, ...    |

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frobenius::{reduce_kummer, solve_frobenius, Offset};
use crate::rational::{ratio, twice_as_integer, Rational, Scalar};
use crate::series::{pochhammer, ArgumentMap, Combination, CombinationTerm, HypergeometricSpec, Prefactor};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum FamilyId {
    #[serde(rename = "K2-even")]
    KummerEven,
    #[serde(rename = "K2-odd-exponent")]
    KummerOddExponent,
    #[serde(rename = "P1-λ0")]
    PlusRegular,
    #[serde(rename = "P1-λ−2a")]
    PlusSingular,
    #[serde(rename = "M1-λ0")]
    MinusRegular,
    #[serde(rename = "M1-λ2−2a")]
    MinusSingular,
}

impl FamilyId {
    pub const ALL: [FamilyId; 6] = [
        FamilyId::KummerEven,
        FamilyId::KummerOddExponent,
        FamilyId::PlusRegular,
        FamilyId::PlusSingular,
        FamilyId::MinusRegular,
        FamilyId::MinusSingular,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FamilyId::KummerEven => "K2-even",
            FamilyId::KummerOddExponent => "K2-odd-exponent",
            FamilyId::PlusRegular => "P1-λ0",
            FamilyId::PlusSingular => "P1-λ−2a",
            FamilyId::MinusRegular => "M1-λ0",
            FamilyId::MinusSingular => "M1-λ2−2a",
        }
    }

    pub fn offset(self) -> Offset {
        match self {
            FamilyId::KummerEven | FamilyId::KummerOddExponent => Offset::Zero,
            FamilyId::PlusRegular | FamilyId::PlusSingular => Offset::Plus,
            FamilyId::MinusRegular | FamilyId::MinusSingular => Offset::Minus,
        }
    }

    /// The solution analytic at `z = 0` for this offset.
    pub fn regular(offset: Offset) -> FamilyId {
        match offset {
            Offset::Zero => FamilyId::KummerEven,
            Offset::Plus => FamilyId::PlusRegular,
            Offset::Minus => FamilyId::MinusRegular,
        }
    }

    /// The solution carrying the non-integer power `z^λ`.
    pub fn singular(offset: Offset) -> FamilyId {
        match offset {
            Offset::Zero => FamilyId::KummerOddExponent,
            Offset::Plus => FamilyId::PlusSingular,
            Offset::Minus => FamilyId::MinusSingular,
        }
    }

    /// Why `a` is excluded for this family, if it is.
    pub fn exclusion<T: Scalar>(self, a: &T) -> Option<&'static str> {
        let two_a = twice_as_integer(a)?;
        let hit = match self {
            FamilyId::KummerEven => two_a <= 0,
            FamilyId::KummerOddExponent | FamilyId::PlusSingular => two_a >= 1,
            FamilyId::PlusRegular => two_a <= -1,
            FamilyId::MinusRegular => two_a <= 1,
            FamilyId::MinusSingular => two_a >= 2,
        };
        hit.then_some(match self {
            FamilyId::KummerEven => "2a is zero or a negative integer",
            FamilyId::KummerOddExponent | FamilyId::PlusSingular => "2a is a positive integer",
            FamilyId::PlusRegular => "2a+1 is zero or a negative integer",
            FamilyId::MinusRegular => "2a-1 is zero or a negative integer",
            FamilyId::MinusSingular => "2a is an integer >= 2",
        })
    }

    pub(crate) fn check<T: Scalar>(self, a: &T) -> Result<()> {
        match self.exclusion(a) {
            Some(reason) => Err(Error::ExcludedParameter {
                a: a.to_string(),
                reason: format!("{reason} ({})", self.as_str()),
            }),
            None => Ok(()),
        }
    }

    /// `(λ, c_1/c_0, p, q)` for parameter `a`.
    fn params<T: Scalar>(self, a: &T) -> FamilyParams<T> {
        let one = T::one();
        let two_a = T::from_i64(2) * a.clone();
        let half = one.clone() / T::from_i64(2);
        let int = |k: i64| T::from_i64(k);
        let plus_half = |k: i64| T::from_i64(k) + half.clone();
        match self {
            FamilyId::KummerEven => FamilyParams {
                lambda: T::zero(),
                c1_ratio: T::zero(),
                even: a.clone() + half.clone(),
                odd: None,
            },
            FamilyId::KummerOddExponent => FamilyParams {
                lambda: one - two_a,
                c1_ratio: T::zero(),
                even: plus_half(1) - a.clone(),
                odd: None,
            },
            FamilyId::PlusRegular => FamilyParams {
                lambda: T::zero(),
                c1_ratio: -one.clone() / (two_a + one),
                even: a.clone() + half.clone(),
                odd: Some(a.clone() + plus_half(1)),
            },
            FamilyId::PlusSingular => FamilyParams {
                lambda: -two_a.clone(),
                c1_ratio: one.clone() / (two_a - one),
                even: half.clone() - a.clone(),
                odd: Some(plus_half(1) - a.clone()),
            },
            FamilyId::MinusRegular => FamilyParams {
                lambda: T::zero(),
                c1_ratio: one.clone() / (two_a - one),
                even: a.clone() - half.clone(),
                odd: Some(a.clone() + half.clone()),
            },
            FamilyId::MinusSingular => FamilyParams {
                lambda: int(2) - two_a.clone(),
                c1_ratio: one / (int(3) - two_a),
                even: plus_half(1) - a.clone(),
                odd: Some(plus_half(2) - a.clone()),
            },
        }
    }
}

struct FamilyParams<T> {
    lambda: T,
    c1_ratio: T,
    even: T,
    odd: Option<T>,
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    /// Accepts the canonical names plus ASCII spellings such as `P1-l0`,
    /// `P1-lambda-2a` or `M1-l2-2a`.
    fn from_str(s: &str) -> Result<Self> {
        let key = s
            .trim()
            .to_ascii_lowercase()
            .replace("lambda", "l")
            .replace('λ', "l")
            .replace(['−', '_'], "-");
        match key.as_str() {
            "k2-even" => Ok(FamilyId::KummerEven),
            "k2-odd" | "k2-odd-exponent" => Ok(FamilyId::KummerOddExponent),
            "p1-l0" => Ok(FamilyId::PlusRegular),
            "p1-l-2a" => Ok(FamilyId::PlusSingular),
            "m1-l0" => Ok(FamilyId::MinusRegular),
            "m1-l2-2a" => Ok(FamilyId::MinusSingular),
            _ => Err(Error::Parse(format!("unknown family {s:?}"))),
        }
    }
}

/// One closed-form coefficient family at an exact parameter `a`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormFamily {
    pub id: FamilyId,
    pub a: Rational,
    pub c0: Rational,
}

impl ClosedFormFamily {
    /// Fails with `ExcludedParameter` when `a` violates the family's proviso.
    pub fn new(id: FamilyId, a: Rational) -> Result<Self> {
        id.check(&a)?;
        Ok(ClosedFormFamily {
            id,
            a,
            c0: Rational::one(),
        })
    }

    pub fn with_c0(mut self, c0: Rational) -> Self {
        self.c0 = c0;
        self
    }

    pub fn lambda(&self) -> Rational {
        self.id.params(&self.a).lambda
    }

    pub fn c1(&self) -> Rational {
        &self.c0 * self.id.params(&self.a).c1_ratio
    }
}

/// `c_n` from the family's closed form.
pub fn closed_coeff(fam: &ClosedFormFamily, n: usize) -> Result<Rational> {
    fam.id.check(&fam.a)?;
    let p = fam.id.params(&fam.a);
    let m = n / 2;
    let (lead, param) = if n.is_multiple_of(2) {
        (fam.c0.clone(), p.even)
    } else {
        match p.odd {
            Some(q) => (&fam.c0 * p.c1_ratio, q),
            None => return Ok(Rational::zero()),
        }
    };
    let m_fact = pochhammer(&Rational::one(), m as u32);
    let four_m = num_traits::pow(ratio(4, 1), m);
    Ok(lead / (four_m * m_fact * pochhammer(&param, m as u32)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certification {
    pub family: FamilyId,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub a: Rational,
    pub order: usize,
    pub certified: bool,
    /// First `n` where the closed form and the recurrence disagree.
    pub first_mismatch: Option<usize>,
    pub mismatches: usize,
}

/// Compare the closed form against the exact recurrence for `n = 0..=N`.
pub fn certify_family(fam: &ClosedFormFamily, order: usize) -> Result<Certification> {
    certify_with(fam, order, |n| closed_coeff(fam, n))
}

fn certify_with<F>(fam: &ClosedFormFamily, order: usize, closed: F) -> Result<Certification>
where
    F: Fn(usize) -> Result<Rational>,
{
    fam.id.check(&fam.a)?;
    let ode = reduce_kummer(&fam.a, fam.id.offset());
    let sol = solve_frobenius(&ode, &fam.lambda(), order.max(2), &fam.c0)?;
    let mut first_mismatch = None;
    let mut mismatches = 0;
    for n in 0..=order {
        let ok = match sol.coeffs.get(n) {
            Some(c) => *c == closed(n)?,
            None => false,
        };
        if !ok {
            mismatches += 1;
            first_mismatch.get_or_insert(n);
        }
    }
    Ok(Certification {
        family: fam.id,
        a: fam.a.clone(),
        order,
        certified: mismatches == 0,
        first_mismatch,
        mismatches,
    })
}

fn assemble(id: FamilyId, a: f64) -> Result<Combination> {
    id.check(&a)?;
    let p = id.params(&a);
    let prefactor = if p.lambda == 0.0 {
        Prefactor::None
    } else {
        Prefactor::Power(p.lambda)
    };
    let mut terms = vec![CombinationTerm {
        coefficient: 1.0,
        z_power: 0,
        spec: HypergeometricSpec::hyp0f1(p.even, ArgumentMap::QuarterSquare)?,
    }];
    if let Some(q) = p.odd {
        terms.push(CombinationTerm {
            coefficient: p.c1_ratio,
            z_power: 1,
            spec: HypergeometricSpec::hyp0f1(q, ArgumentMap::QuarterSquare)?,
        });
    }
    Ok(Combination { prefactor, terms })
}

/// The solution analytic at `z = 0` (normalized `c_0 = 1`), which is the
/// right-hand side of the corresponding transformation.
pub fn assemble_y1(offset: Offset, a: f64) -> Result<Combination> {
    assemble(FamilyId::regular(offset), a)
}

/// The solution with the non-analytic prefactor `z^λ`.
pub fn assemble_y2(offset: Offset, a: f64) -> Result<Combination> {
    assemble(FamilyId::singular(offset), a)
}
