//! Constraint and verdict engine for ℤ_p actions on homotopy K3 surfaces.
//!
//! Every check produces a [`Reason`]: a stable anchor naming the statement
//! applied, a human-readable detail, and whether it held.

pub mod enumerate;
pub mod numeric;
pub mod prop41;
pub mod verdict;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclo::CyclotomicNumber;
use crate::dataset::DatasetError;
use crate::lefschetz::{synthesize, KVector, LefschetzError};
use crate::report::{de_rational_opt, ser_rational_opt};
use crate::repring::RepRingError;

pub use enumerate::enumerate_pseudofree_p3;
pub use prop41::{derive_parameters, verify_prop41, verify_prop41_with, Prop41Report};
pub use verdict::{
    quotient_invariants, verdict, verdict_with, Outcome, QuotientReport, RigidityVerdict,
    VerdictOptions,
};

/// Default working precision (bits) of the advisory numeric estimates.
pub const DEFAULT_PRECISION: usize = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RigidityError {
    #[error("spin number {0} is not real")]
    NotReal(String),
    #[error("quotient b₊ must be 1 or 3, got {0}")]
    UnsupportedQuotient(BigInt),
    #[error("enumeration needs non-negative invariants: {0}")]
    BadBound(String),
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error(transparent)]
    Lefschetz(#[from] LefschetzError),
    #[error(transparent)]
    RepRing(#[from] RepRingError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpinSign {
    Negative,
    Zero,
    Positive,
    UnknownIrrational,
}

impl fmt::Display for SpinSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpinSign::Negative => "negative",
            SpinSign::Zero => "zero",
            SpinSign::Positive => "positive",
            SpinSign::UnknownIrrational => "unknown-irrational",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpinClass {
    pub rational: bool,
    #[serde(
        serialize_with = "ser_rational_opt",
        deserialize_with = "de_rational_opt"
    )]
    pub value: Option<BigRational>,
    pub sign: SpinSign,
    /// Decimal estimate for irrational values; advisory only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub estimate: Option<String>,
}

impl SpinClass {
    fn unknown() -> Self {
        SpinClass {
            rational: false,
            value: None,
            sign: SpinSign::UnknownIrrational,
            estimate: None,
        }
    }

    pub fn is_rational_negative(&self) -> bool {
        self.sign == SpinSign::Negative
    }

    pub fn is_rational_nonnegative(&self) -> bool {
        matches!(self.sign, SpinSign::Zero | SpinSign::Positive)
    }
}

/// Exact rationality and sign; irrational values get a numeric estimate at
/// `precision` bits.
pub fn classify_spin(s: &CyclotomicNumber, precision: usize) -> Result<SpinClass, RigidityError> {
    if !s.is_real() {
        return Err(RigidityError::NotReal(s.to_string()));
    }
    match s.to_rational() {
        Ok(q) => {
            let sign = if q.is_zero() {
                SpinSign::Zero
            } else if q.is_negative() {
                SpinSign::Negative
            } else {
                SpinSign::Positive
            };
            Ok(SpinClass {
                rational: true,
                value: Some(q),
                sign,
                estimate: None,
            })
        }
        Err(_) => {
            let (text, _) = numeric::estimate(s, precision);
            Ok(SpinClass {
                rational: false,
                value: None,
                sign: SpinSign::UnknownIrrational,
                estimate: Some(text),
            })
        }
    }
}

/// Stable identifiers of the statements a verdict step applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Anchor {
    /// Spin numbers of every power are real.
    SpinReal,
    /// Spin(τ̂^j) = Spin(τ̂^{p−j}).
    PowerSymmetry,
    /// Fourier inversion yields integers kᵢ.
    KIntegrality,
    /// kᵢ ≤ 2, from the parity of the tom Dieck trace product over all lifts.
    KBound,
    /// Rational non-negative spin forces k = (2, 0, …, 0).
    NonnegativeSpinPattern,
    /// Rational negative spin forces k₀ ≤ 0 and k₁ = … = k_{p−1} ≥ 1.
    NegativeSpinPattern,
    /// Spin = (p·k₀ − 2)/(p − 1) cannot vanish for integer k₀.
    SpinNonzero,
    /// The same bounds for every lift e^{2πqi/p}τ̂.
    LiftSweep,
    /// σ(X/ℤ₃) from the G-signature theorem is an integer.
    QuotientSignature,
    /// χ(X/ℤ₃) from the Lefschetz count is an integer.
    QuotientEuler,
    /// χ = 2 + 2b₊ − σ on the quotient, b₋ ≥ 0.
    QuotientBetti,
    /// Trivial action: σ(X/ℤ₃) = σ(X).
    TrivialSignature,
    /// Trivial action: χ(X/ℤ₃) = χ(X).
    TrivialEuler,
    /// Fixed surfaces of a trivial action are spheres.
    FixedSpheres,
    /// Embedded spheres have non-positive self-intersection.
    Adjunction,
    /// The Adams kernel is spanned by σ(1−t)^{m−1}.
    AdamsKernel,
    /// The scalar step of the Adams identity forces a = 0, so SW = 0.
    SwVanishing,
    /// SW of the trivial spin^c structure on a homotopy K3 is odd.
    MorganSzabo,
    /// f₁ = f₂: k₀ = 2 against a non-positive spin number.
    EqualTypeCounts,
    /// f₁ ≠ f₂: k₀ = 2 + (f₁ − f₂)/4 < 2, so the spin number is negative.
    UnequalTypeCounts,
    /// The method needs a rational spin number (or a spin manifold).
    HypothesesNotMet,
    /// The quotient invariants show the action moves H².
    NontrivialAction,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Holds,
    Violated,
    Contradiction,
    Note,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reason {
    pub anchor: Anchor,
    pub status: Status,
    pub detail: String,
}

impl Reason {
    pub fn new(anchor: Anchor, status: Status, detail: impl Into<String>) -> Self {
        Reason {
            anchor,
            status,
            detail: detail.into(),
        }
    }

    fn check(anchor: Anchor, ok: bool, detail: impl Into<String>) -> Self {
        let status = if ok { Status::Holds } else { Status::Violated };
        Reason::new(anchor, status, detail)
    }
}

/// Violated k-vector constraints for a homotopy K3 with b₊(X/τ) = 3.
///
/// Other quotient ranks carry no constraints here and give an empty list.
pub fn check_k_constraints(k: &KVector, s: &SpinClass, quotient_b_plus: &BigInt) -> Vec<Reason> {
    let mut out = Vec::new();
    if *quotient_b_plus != BigInt::from(3) {
        return out;
    }
    let two = BigInt::from(2);
    for (i, ki) in k.k.iter().enumerate() {
        if *ki > two {
            out.push(Reason::new(
                Anchor::KBound,
                Status::Violated,
                format!("k{i} = {ki} > 2"),
            ));
        }
    }
    let p = k.p;
    if s.sign == SpinSign::Zero {
        out.push(Reason::new(
            Anchor::SpinNonzero,
            Status::Violated,
            format!("spin number 0 would need k0 = 2/{p}"),
        ));
    } else if s.is_rational_nonnegative() {
        let mut want = vec![BigInt::zero(); p as usize];
        want[0] = two.clone();
        if k.k != want {
            out.push(Reason::new(
                Anchor::NonnegativeSpinPattern,
                Status::Violated,
                format!("non-negative rational spin needs k = (2, 0, …, 0), got {k}"),
            ));
        }
    } else if s.is_rational_negative() {
        let k0 = &k.k[0];
        if k0.is_positive() {
            out.push(Reason::new(
                Anchor::NegativeSpinPattern,
                Status::Violated,
                format!("negative rational spin needs k0 ≤ 0, got k0 = {k0}"),
            ));
        }
        if !k.is_uniform() {
            out.push(Reason::new(
                Anchor::NegativeSpinPattern,
                Status::Violated,
                format!("negative rational spin needs k1 = … = k{} , got {k}", p - 1),
            ));
        } else if k.k[1] < BigInt::one() {
            out.push(Reason::new(
                Anchor::NegativeSpinPattern,
                Status::Violated,
                format!(
                    "negative rational spin needs k1 = (2 − k0)/(p − 1) ≥ 1, got k1 = {}",
                    k.k[1]
                ),
            ));
        }
        let head: BigInt = k.k[..p as usize - 1].iter().sum();
        if head.is_negative() {
            out.push(Reason::new(
                Anchor::NegativeSpinPattern,
                Status::Violated,
                format!("k0 + … + k{} = {head} must be non-negative", p - 2),
            ));
        }
    }
    out
}

/// One alternative lift e^{2πqi/p}τ̂ and the spin number its k-vector implies.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftEntry {
    pub q: usize,
    pub k_vector: KVector,
    /// Whether Σᵢ k_{i+q} νⁱ is real; the class is only meaningful then.
    pub real: bool,
    pub spin: SpinClass,
}

/// The p cyclic shifts kᵢ ↦ k_{i+q} with their implied spin classes.
pub fn lift_sweep(k: &KVector, precision: usize) -> Vec<LiftEntry> {
    (0..k.p as usize)
        .map(|q| {
            let shifted = k.shift(q);
            let spin = synthesize(&shifted).values[1].clone();
            let class = classify_spin(&spin, precision).ok();
            LiftEntry {
                q,
                real: class.is_some(),
                spin: class.unwrap_or_else(SpinClass::unknown),
                k_vector: shifted,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::half_angle_csc;

    fn int(n: i64) -> CyclotomicNumber {
        CyclotomicNumber::from_integer(3, n)
    }

    #[test]
    fn classify_examples() {
        let two = classify_spin(&int(2), 64).unwrap();
        assert!(two.rational && two.sign == SpinSign::Positive);
        let neg = classify_spin(&int(-16), 64).unwrap();
        assert_eq!(neg.sign, SpinSign::Negative);
        let x = &half_angle_csc(1, 5).unwrap() * &half_angle_csc(2, 5).unwrap();
        let irr = classify_spin(&x, 32).unwrap();
        assert_eq!(irr.sign, SpinSign::UnknownIrrational);
        assert!(irr.estimate.unwrap().starts_with("1.78885"));
        assert!(classify_spin(&CyclotomicNumber::zeta(3), 64).is_err());
    }

    fn class(v: i64) -> SpinClass {
        classify_spin(&int(v), 64).unwrap()
    }

    #[test]
    fn k_constraint_examples() {
        let three = BigInt::from(3);
        assert!(
            check_k_constraints(&KVector::from_i64(3, &[2, 0, 0]), &class(2), &three).is_empty()
        );
        let v = check_k_constraints(&KVector::from_i64(3, &[-10, 6, 6]), &class(-16), &three);
        assert!(v
            .iter()
            .any(|r| r.anchor == Anchor::KBound && r.detail == "k1 = 6 > 2"));
        assert!(
            check_k_constraints(&KVector::from_i64(3, &[0, 1, 1]), &class(-1), &three).is_empty()
        );
        assert!(check_k_constraints(
            &KVector::from_i64(3, &[-10, 6, 6]),
            &class(-16),
            &BigInt::one()
        )
        .is_empty());
    }

    #[test]
    fn patterns_are_exclusive() {
        let three = BigInt::from(3);
        let pos = KVector::from_i64(3, &[2, 0, 0]);
        let neg = KVector::from_i64(3, &[0, 1, 1]);
        assert!(!check_k_constraints(&pos, &class(-1), &three).is_empty());
        assert!(!check_k_constraints(&neg, &class(2), &three).is_empty());
        assert!(!check_k_constraints(&pos, &class(0), &three).is_empty());
    }

    #[test]
    fn sweep() {
        let s = lift_sweep(&KVector::from_i64(3, &[2, 0, 0]), 64);
        let ks: Vec<_> = s.iter().map(|e| e.k_vector.clone()).collect();
        assert_eq!(
            ks,
            [[2, 0, 0], [0, 0, 2], [0, 2, 0]]
                .map(|k| KVector::from_i64(3, &k))
                .to_vec()
        );
        assert!(s.iter().all(|e| e.k_vector.sum() == BigInt::from(2)));
        assert!(s[0].real && !s[1].real);
        let bad = lift_sweep(&KVector::from_i64(3, &[-10, 6, 6]), 64);
        let three = BigInt::from(3);
        for e in bad {
            let v = check_k_constraints(&e.k_vector, &SpinClass::unknown(), &three);
            assert!(v.iter().any(|r| r.anchor == Anchor::KBound));
        }
    }
}
