//! Candidate ℤ_p actions: manifold invariants, fixed-point data with spin
//! signs, validation, and the half-weight encoding used for evaluation.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::report::{de_bigint, ser_bigint};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldInvariants {
    #[serde(serialize_with = "ser_bigint", deserialize_with = "de_bigint")]
    pub b1: BigInt,
    #[serde(serialize_with = "ser_bigint", deserialize_with = "de_bigint")]
    pub b_plus: BigInt,
    #[serde(serialize_with = "ser_bigint", deserialize_with = "de_bigint")]
    pub signature: BigInt,
    #[serde(serialize_with = "ser_bigint", deserialize_with = "de_bigint")]
    pub euler: BigInt,
    pub is_spin: bool,
}

impl ManifoldInvariants {
    /// Homotopy K3: σ = −16, χ = 24, b₊ = 3, spin.
    pub fn k3() -> Self {
        ManifoldInvariants {
            b1: BigInt::zero(),
            b_plus: 3.into(),
            signature: (-16).into(),
            euler: 24.into(),
            is_spin: true,
        }
    }

    pub fn b_minus(&self) -> BigInt {
        &self.b_plus - &self.signature
    }

    pub fn is_homotopy_k3(&self) -> bool {
        *self == Self::k3()
    }

    fn violations(&self, out: &mut Vec<Violation>) {
        if !self.b1.is_zero() {
            out.push(Violation::new(
                "manifold.b1",
                "first Betti number must be 0",
            ));
        }
        if self.b_plus.is_negative() {
            out.push(Violation::new("manifold.b_plus", "b₊ must be non-negative"));
        }
        if self.b_minus().is_negative() {
            out.push(Violation::new(
                "manifold.signature",
                "b₋ = b₊ − σ is negative",
            ));
        }
        if self.is_spin && !self.signature.is_multiple_of(&BigInt::from(16)) {
            out.push(Violation::new(
                "manifold.signature",
                "spin manifold needs σ ≡ 0 mod 16 (Rochlin)",
            ));
        }
        let want = BigInt::from(2) + &self.b_plus * 2 - &self.signature;
        if self.euler != want {
            out.push(Violation::new(
                "manifold.euler",
                format!("χ = 2 + b₊ + b₋ requires χ = {want}, got {}", self.euler),
            ));
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IsolatedPoint {
    pub l_alpha: i64,
    pub l_beta: i64,
    pub epsilon: i8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixedSurface {
    #[serde(serialize_with = "ser_bigint", deserialize_with = "de_bigint")]
    pub self_intersection: BigInt,
    #[serde(serialize_with = "ser_bigint", deserialize_with = "de_bigint")]
    pub genus: BigInt,
    pub l_theta: i64,
    pub epsilon: i8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixedPointDataset {
    pub p: u64,
    pub manifold: ManifoldInvariants,
    #[serde(serialize_with = "ser_bigint", deserialize_with = "de_bigint")]
    pub quotient_b_plus: BigInt,
    pub homologically_trivial: bool,
    #[serde(default)]
    pub isolated: Vec<IsolatedPoint>,
    #[serde(default)]
    pub surfaces: Vec<FixedSurface>,
}

/// One failed invariant, located by a field path.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub field: String,
    pub message: String,
}

impl Violation {
    fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Violation {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DatasetError {
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("invalid dataset: {}", join(.0))]
    Invalid(Vec<Violation>),
    #[error("operation needs p = 3, dataset has p = {0}")]
    WrongPrime(u64),
}

fn join(vs: &[Violation]) -> String {
    vs.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

fn check_residue(l: i64, p: u64, field: String, out: &mut Vec<Violation>) {
    if l.rem_euclid(p as i64) == 0 {
        out.push(Violation::new(field, "rotation number divisible by p"));
    }
}

fn check_sign(e: i8, field: String, out: &mut Vec<Violation>) {
    if e != 1 && e != -1 {
        out.push(Violation::new(field, "spin sign must be +1 or -1"));
    }
}

impl FixedPointDataset {
    /// Every violated invariant, in document order.
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let p = self.p;
        let prime = p > 2 && crate::is_prime(p);
        if !prime {
            out.push(Violation::new("p", format!("{p} is not an odd prime")));
        }
        self.manifold.violations(&mut out);
        if self.quotient_b_plus.is_negative() {
            out.push(Violation::new("quotient_b_plus", "must be non-negative"));
        }
        if self.quotient_b_plus > self.manifold.b_plus {
            out.push(Violation::new(
                "quotient_b_plus",
                "exceeds b₊ of the manifold",
            ));
        }
        if self.homologically_trivial && self.quotient_b_plus != self.manifold.b_plus {
            out.push(Violation::new(
                "quotient_b_plus",
                "homologically trivial action needs quotient b₊ equal to b₊",
            ));
        }
        for (i, pt) in self.isolated.iter().enumerate() {
            if prime {
                check_residue(pt.l_alpha, p, format!("isolated[{i}].l_alpha"), &mut out);
                check_residue(pt.l_beta, p, format!("isolated[{i}].l_beta"), &mut out);
            }
            check_sign(pt.epsilon, format!("isolated[{i}].epsilon"), &mut out);
        }
        for (i, s) in self.surfaces.iter().enumerate() {
            if prime {
                check_residue(s.l_theta, p, format!("surfaces[{i}].l_theta"), &mut out);
            }
            check_sign(s.epsilon, format!("surfaces[{i}].epsilon"), &mut out);
            if s.genus.is_negative() {
                out.push(Violation::new(
                    format!("surfaces[{i}].genus"),
                    "genus must be non-negative",
                ));
            }
        }
        out
    }

    pub fn validate(&self) -> Result<(), DatasetError> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(DatasetError::Invalid(v))
        }
    }

    /// Rotation numbers reduced into 1..p−1. Call on valid data only.
    pub fn canonical(&self) -> Self {
        let p = self.p as i64;
        let mut out = self.clone();
        for pt in &mut out.isolated {
            pt.l_alpha = pt.l_alpha.rem_euclid(p);
            pt.l_beta = pt.l_beta.rem_euclid(p);
        }
        for s in &mut out.surfaces {
            s.l_theta = s.l_theta.rem_euclid(p);
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("dataset serializes")
    }

    /// χ of the fixed set: one per point plus 2 − 2g per surface.
    pub fn fixed_euler(&self) -> BigInt {
        let mut chi = BigInt::from(self.isolated.len());
        for s in &self.surfaces {
            chi += BigInt::from(2) - &s.genus * 2;
        }
        chi
    }

    pub fn is_pseudofree(&self) -> bool {
        self.surfaces.is_empty()
    }
}

/// Parses and validates a JSON document; rotation numbers come back reduced.
pub fn parse_dataset(document: &str) -> Result<FixedPointDataset, DatasetError> {
    let d: FixedPointDataset =
        serde_json::from_str(document).map_err(|e| DatasetError::Schema(e.to_string()))?;
    d.validate()?;
    Ok(d.canonical())
}

/// A fixed point with rotation data and spin sign merged into residues mod 2p.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HalfWeightPoint {
    pub a: u64,
    pub b: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HalfWeightSurface {
    pub c: u64,
    #[serde(serialize_with = "ser_bigint")]
    pub self_intersection: BigInt,
    #[serde(serialize_with = "ser_bigint")]
    pub genus: BigInt,
}

/// ε = −1 keeps (l_α, l_β), ε = +1 shifts l_α by p; surfaces shift l_θ by p
/// when ε = −1.
pub fn normalize_half_weights(
    d: &FixedPointDataset,
) -> (Vec<HalfWeightPoint>, Vec<HalfWeightSurface>) {
    let p = d.p as i64;
    let points = d
        .isolated
        .iter()
        .map(|pt| {
            let a = pt.l_alpha.rem_euclid(p) + if pt.epsilon == 1 { p } else { 0 };
            HalfWeightPoint {
                a: a as u64,
                b: pt.l_beta.rem_euclid(p) as u64,
            }
        })
        .collect();
    let surfaces = d
        .surfaces
        .iter()
        .map(|s| {
            let c = s.l_theta.rem_euclid(p) + if s.epsilon == -1 { p } else { 0 };
            HalfWeightSurface {
                c: c as u64,
                self_intersection: s.self_intersection.clone(),
                genus: s.genus.clone(),
            }
        })
        .collect();
    (points, surfaces)
}

/// (f₁, f₂): points of type (1,2) and of type (1,1) for p = 3.
pub fn count_p3_types(d: &FixedPointDataset) -> Result<(u64, u64), DatasetError> {
    if d.p != 3 {
        return Err(DatasetError::WrongPrime(d.p));
    }
    let mut f = (0, 0);
    for pt in &d.isolated {
        // (1,2) ~ (2,1); (1,1) ~ (2,2)
        if (pt.l_alpha - pt.l_beta).rem_euclid(3) == 0 {
            f.1 += 1;
        } else {
            f.0 += 1;
        }
    }
    Ok(f)
}

impl FixedPointDataset {
    /// The Fermat quartic with the cyclic permutation of three coordinates:
    /// six points of type (1,2), spin sign −1.
    pub fn fermat_quartic() -> Self {
        FixedPointDataset {
            p: 3,
            manifold: ManifoldInvariants::k3(),
            quotient_b_plus: 3.into(),
            homologically_trivial: false,
            isolated: vec![
                IsolatedPoint {
                    l_alpha: 1,
                    l_beta: 2,
                    epsilon: -1
                };
                6
            ],
            surfaces: Vec::new(),
        }
    }

    pub fn empty(p: u64, manifold: ManifoldInvariants) -> Self {
        let b = manifold.b_plus.clone();
        FixedPointDataset {
            p,
            manifold,
            quotient_b_plus: b,
            homologically_trivial: false,
            isolated: Vec::new(),
            surfaces: Vec::new(),
        }
    }
}

impl IsolatedPoint {
    pub fn new(l_alpha: i64, l_beta: i64, epsilon: i8) -> Self {
        IsolatedPoint {
            l_alpha,
            l_beta,
            epsilon,
        }
    }
}

impl FixedSurface {
    pub fn sphere(self_intersection: i64, l_theta: i64, epsilon: i8) -> Self {
        FixedSurface {
            self_intersection: self_intersection.into(),
            genus: BigInt::zero(),
            l_theta,
            epsilon,
        }
    }
}
