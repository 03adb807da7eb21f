//! The full constraint pipeline for one candidate action.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::prop41::{derive_parameters, verify_prop41_with, Prop41Report};
use super::{
    check_k_constraints, classify_spin, lift_sweep, Anchor, LiftEntry, Reason, RigidityError,
    SpinClass, SpinSign, Status, DEFAULT_PRECISION,
};
use crate::dataset::{count_p3_types, FixedPointDataset};
use crate::lefschetz::{
    euler_quotient_p3, k_vector, signature_quotient_p3, spin_number, spin_tuple, uniform_spin,
    KVector, LefschetzError,
};
use crate::report::{de_rational, de_rational_opt, ser_rational, ser_rational_opt};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    Contradiction,
    ConstraintViolation,
    NoObstruction,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        std::fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientReport {
    #[serde(serialize_with = "ser_rational", deserialize_with = "de_rational")]
    pub sigma: BigRational,
    #[serde(serialize_with = "ser_rational", deserialize_with = "de_rational")]
    pub euler: BigRational,
    pub integral: bool,
    #[serde(
        serialize_with = "ser_rational_opt",
        deserialize_with = "de_rational_opt"
    )]
    pub b_minus: Option<BigRational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RigidityVerdict {
    pub outcome: Outcome,
    pub p: u64,
    pub spin: SpinClass,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_vector: Option<KVector>,
    pub lift_sweep: Vec<LiftEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quotient: Option<QuotientReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prop41: Option<Prop41Report>,
    pub reasons: Vec<Reason>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerdictOptions {
    /// bits for advisory estimates of irrational spin numbers
    pub precision: usize,
    /// Adams operations used for the kernel
    pub qs: Vec<u64>,
}

impl Default for VerdictOptions {
    fn default() -> Self {
        VerdictOptions {
            precision: DEFAULT_PRECISION,
            qs: vec![2],
        }
    }
}

/// σ, χ and b₋ of X/ℤ₃ (b₋ only when σ and χ are integers).
pub fn quotient_invariants(d: &FixedPointDataset) -> Result<QuotientReport, RigidityError> {
    d.validate()?;
    let d = &d.canonical();
    let sigma = signature_quotient_p3(d)?;
    let euler = euler_quotient_p3(d)?;
    let integral = sigma.is_integer() && euler.is_integer();
    let b_minus = integral.then(|| ratio(&d.quotient_b_plus) - &sigma);
    Ok(QuotientReport {
        sigma,
        euler,
        integral,
        b_minus,
    })
}

pub fn verdict(d: &FixedPointDataset) -> Result<RigidityVerdict, RigidityError> {
    verdict_with(d, &VerdictOptions::default())
}

fn ratio(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

struct Pipeline<'a> {
    d: &'a FixedPointDataset,
    opts: &'a VerdictOptions,
    reasons: Vec<Reason>,
    prop41: Option<Prop41Report>,
}

impl Pipeline<'_> {
    fn push(&mut self, r: Reason) {
        self.reasons.push(r);
    }

    fn violated(&self) -> bool {
        self.reasons.iter().any(|r| r.status == Status::Violated)
    }

    fn quotient(&mut self) -> Result<QuotientReport, RigidityError> {
        let d = self.d;
        let q = quotient_invariants(d)?;
        let (sigma, euler) = (q.sigma.clone(), q.euler.clone());
        self.push(Reason::check(
            Anchor::QuotientSignature,
            sigma.is_integer(),
            format!("σ(X/ℤ₃) = {sigma}"),
        ));
        self.push(Reason::check(
            Anchor::QuotientEuler,
            euler.is_integer(),
            format!("χ(X/ℤ₃) = {euler}"),
        ));
        let b_minus = q.b_minus.clone();
        if let Some(bm) = &b_minus {
            let bp = ratio(&d.quotient_b_plus);
            let want = BigRational::from_integer(2.into()) + &bp + bm;
            let ok = euler == want && !bm.is_negative();
            self.push(Reason::check(
                Anchor::QuotientBetti,
                ok,
                format!("b₊ = {bp}, b₋ = {bm}; 2 + b₊ + b₋ = {want}, χ = {euler}"),
            ));
        }
        if d.homologically_trivial {
            let s = ratio(&d.manifold.signature);
            let e = ratio(&d.manifold.euler);
            self.push(Reason::check(
                Anchor::TrivialSignature,
                sigma == s,
                format!("σ(X/ℤ₃) = {sigma}, σ(X) = {s}"),
            ));
            self.push(Reason::check(
                Anchor::TrivialEuler,
                euler == e,
                format!("χ(X/ℤ₃) = {euler}, χ(X) = {e}"),
            ));
        } else if let Some(bm) = &b_minus {
            let moves =
                *bm != ratio(&d.manifold.b_minus()) || d.quotient_b_plus != d.manifold.b_plus;
            if moves {
                self.push(Reason::new(
                    Anchor::NontrivialAction,
                    Status::Note,
                    format!(
                        "b₊(X/ℤ₃) = {}, b₋(X/ℤ₃) = {bm} against b₊ = {}, b₋ = {}: the action is nontrivial on H²",
                        d.quotient_b_plus,
                        d.manifold.b_plus,
                        d.manifold.b_minus()
                    ),
                ));
            }
        }
        Ok(q)
    }

    fn surfaces(&mut self) {
        for (i, s) in self.d.surfaces.iter().enumerate() {
            if !s.genus.is_zero() {
                self.push(Reason::new(
                    Anchor::FixedSpheres,
                    Status::Violated,
                    format!("surface {i} has genus {}", s.genus),
                ));
            }
            if s.self_intersection.is_positive() {
                self.push(Reason::new(
                    Anchor::Adjunction,
                    Status::Violated,
                    format!("surface {i} has ⟨F, F⟩ = {} > 0", s.self_intersection),
                ));
            }
        }
    }

    /// Negative rational spin with k-vector `k`: Adams kernel, scalar step,
    /// SW = 0 against the odd SW invariant of a homotopy K3.
    fn vanishing_route(&mut self, k: &KVector) -> Result<(), RigidityError> {
        let l = 1; // ½(b₊ − 1) for K3
        let params = derive_parameters(k, l, 0)?;
        let report = verify_prop41_with(&params, &self.opts.qs)?;
        let rank = report.kernel_rank.unwrap_or(0);
        let detail = format!(
            "m = {:?}, n = {:?}, q ∈ {:?}: kernel rank {rank} in dimension {}, spanned by σ(1−t)^{}: {}",
            params.m_vector,
            params.n_vector,
            report.qs,
            report.ambient_dimension.unwrap_or(0),
            params.m() - 1,
            report.spanned_by_sigma.unwrap_or(false),
        );
        let spanned = report.spanned_by_sigma == Some(true);
        self.push(Reason::new(
            Anchor::AdamsKernel,
            if spanned { Status::Holds } else { Status::Note },
            detail,
        ));
        for n in &report.notes {
            self.push(Reason::new(Anchor::AdamsKernel, Status::Note, n.clone()));
        }
        if report.sw_vanishes() {
            let step = report
                .scalar_step
                .as_ref()
                .map(|s| s.obstruction.clone())
                .unwrap_or_default();
            self.push(Reason::new(
                Anchor::SwVanishing,
                Status::Holds,
                format!("a·p·({step}) = 0 forces a = 0, so SW(X, trivial spin^c) = 0"),
            ));
            self.push(Reason::new(
                Anchor::MorganSzabo,
                Status::Contradiction,
                "SW of the trivial spin^c structure on a homotopy K3 is ±1 mod 2, not 0",
            ));
        } else {
            self.push(Reason::new(
                Anchor::SwVanishing,
                Status::Note,
                "vanishing not established",
            ));
        }
        self.prop41 = Some(report);
        Ok(())
    }

    /// Case analysis on the type counts of a trivial ℤ₃ action.
    fn type_count_branches(&mut self, k: &KVector) -> Result<(), RigidityError> {
        let (f1, f2) = count_p3_types(self.d)?;
        if f1 == f2 {
            let f_sq: BigInt = self.d.surfaces.iter().map(|s| &s.self_intersection).sum();
            let spin = BigRational::new(f_sq, BigInt::from(6));
            self.push(Reason::new(
                Anchor::EqualTypeCounts,
                Status::Contradiction,
                format!(
                    "f1 = f2 = {f1}: k0 = 2 + (f1 − f2)/4 = 2 makes the spin number positive, \
                     while (1/6)Σ⟨F, F⟩ = {spin} ≤ 0"
                ),
            ));
            return Ok(());
        }
        let diff = f1 as i64 - f2 as i64;
        if diff % 4 != 0 {
            self.push(Reason::new(
                Anchor::UnequalTypeCounts,
                Status::Violated,
                format!("k0 = 2 + (f1 − f2)/4 = 2 + {diff}/4 is not an integer"),
            ));
            return Ok(());
        }
        let k0 = 2 + diff / 4;
        if k0 > 2 {
            self.push(Reason::new(
                Anchor::KBound,
                Status::Violated,
                format!("k0 = 2 + (f1 − f2)/4 = {k0} > 2"),
            ));
            return Ok(());
        }
        if (2 - k0) % 2 != 0 {
            self.push(Reason::new(
                Anchor::NegativeSpinPattern,
                Status::Violated,
                format!("k1 = k2 = (2 − k0)/2 = {}/2 is not an integer", 2 - k0),
            ));
            return Ok(());
        }
        let implied = KVector::from_i64(3, &[k0, (2 - k0) / 2, (2 - k0) / 2]);
        let spin = uniform_spin(3, &k0.into(), &2.into());
        self.push(Reason::new(
            Anchor::UnequalTypeCounts,
            Status::Holds,
            format!(
                "f1 = {f1}, f2 = {f2}: k0 = {k0} < 2, so the spin number is {spin} < 0 \
                 (implied k = {implied}; inversion of the dataset's own spin numbers gave {k})"
            ),
        ));
        let class = SpinClass {
            rational: true,
            value: Some(spin),
            sign: SpinSign::Negative,
            estimate: None,
        };
        let violations = check_k_constraints(&implied, &class, &BigInt::from(3));
        if !violations.is_empty() {
            self.reasons.extend(violations);
            return Ok(());
        }
        self.vanishing_route(&implied)
    }
}

pub fn verdict_with(
    d: &FixedPointDataset,
    opts: &VerdictOptions,
) -> Result<RigidityVerdict, RigidityError> {
    d.validate()?;
    let d = &d.canonical();
    let mut pipe = Pipeline {
        d,
        opts,
        reasons: Vec::new(),
        prop41: None,
    };
    let p = d.p;
    let k3 = d.manifold.is_homotopy_k3();
    let qbp3 = d.quotient_b_plus == BigInt::from(3);

    let first = spin_number(d, 1)?;
    if !d.manifold.is_spin {
        let spin = classify_spin(&first, opts.precision)?;
        pipe.push(Reason::new(
            Anchor::HypothesesNotMet,
            Status::Note,
            "manifold is not spin; the G-spin formula does not apply",
        ));
        return Ok(finish(pipe, spin, None, Vec::new(), None));
    }

    let tuple = spin_tuple(d)?;
    pipe.push(Reason::check(
        Anchor::SpinReal,
        tuple.is_real(),
        "Spin(τ̂^j) is real for every j",
    ));
    pipe.push(Reason::check(
        Anchor::PowerSymmetry,
        tuple.is_symmetric(),
        "Spin(τ̂^j) = Spin(τ̂^{p−j}) for every j",
    ));
    let spin = classify_spin(&tuple.values[1], opts.precision)?;

    let k = match k_vector(&tuple) {
        Ok(k) => {
            pipe.push(Reason::new(
                Anchor::KIntegrality,
                Status::Holds,
                format!("k = {k}"),
            ));
            Some(k)
        }
        Err(LefschetzError::NonIntegral { i, value }) => {
            pipe.push(Reason::new(
                Anchor::KIntegrality,
                Status::Violated,
                format!("k{i} = {value} is not an integer"),
            ));
            None
        }
        Err(e) => return Err(e.into()),
    };

    let mut sweep = Vec::new();
    if let Some(k) = &k {
        sweep = lift_sweep(k, opts.precision);
        if k3 && qbp3 {
            let v = check_k_constraints(k, &spin, &d.quotient_b_plus);
            if v.is_empty() {
                pipe.push(Reason::new(
                    Anchor::KBound,
                    Status::Holds,
                    format!("kᵢ ≤ 2 and the pattern for {} spin hold", spin.sign),
                ));
            }
            pipe.reasons.extend(v);
            for e in sweep.iter().skip(1) {
                if let Some((i, x)) = e
                    .k_vector
                    .k
                    .iter()
                    .enumerate()
                    .find(|(_, x)| **x > BigInt::from(2))
                {
                    pipe.push(Reason::new(
                        Anchor::LiftSweep,
                        Status::Violated,
                        format!("lift q = {}: k = {}, k{i} = {x} > 2", e.q, e.k_vector),
                    ));
                }
            }
        }
    }

    let quotient = if p == 3 { Some(pipe.quotient()?) } else { None };
    if d.homologically_trivial && k3 {
        pipe.surfaces();
    }

    if !pipe.violated() {
        if d.homologically_trivial && k3 && qbp3 {
            match &k {
                Some(k) if spin.is_rational_negative() => pipe.vanishing_route(k)?,
                Some(k) if p == 3 => pipe.type_count_branches(k)?,
                _ if spin.sign == SpinSign::UnknownIrrational => pipe.push(Reason::new(
                    Anchor::HypothesesNotMet,
                    Status::Note,
                    "spin number is irrational; the vanishing argument needs a rational spin number",
                )),
                _ => pipe.push(Reason::new(
                    Anchor::HypothesesNotMet,
                    Status::Note,
                    "k = (2, 0, …, 0) is the pattern of the trivial action; no conclusion",
                )),
            }
        } else if d.homologically_trivial {
            pipe.push(Reason::new(
                Anchor::HypothesesNotMet,
                Status::Note,
                "the contradiction needs homotopy K3 invariants",
            ));
        } else if spin.sign == SpinSign::UnknownIrrational {
            pipe.push(Reason::new(
                Anchor::HypothesesNotMet,
                Status::Note,
                "spin number is irrational; the vanishing argument needs a rational spin number",
            ));
        }
    }

    Ok(finish(pipe, spin, k, sweep, quotient))
}

fn finish(
    pipe: Pipeline<'_>,
    spin: SpinClass,
    k: Option<KVector>,
    sweep: Vec<LiftEntry>,
    quotient: Option<QuotientReport>,
) -> RigidityVerdict {
    let outcome = if pipe.violated() {
        Outcome::ConstraintViolation
    } else if pipe
        .reasons
        .iter()
        .any(|r| r.status == Status::Contradiction)
    {
        Outcome::Contradiction
    } else {
        Outcome::NoObstruction
    };
    RigidityVerdict {
        outcome,
        p: pipe.d.p,
        spin,
        k_vector: k,
        lift_sweep: sweep,
        quotient,
        prop41: pipe.prop41,
        reasons: pipe.reasons,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{FixedSurface, IsolatedPoint, ManifoldInvariants};

    fn trivial_k3() -> FixedPointDataset {
        let mut d = FixedPointDataset::empty(3, ManifoldInvariants::k3());
        d.homologically_trivial = true;
        d
    }

    #[test]
    fn fermat_has_no_obstruction() {
        let v = verdict(&FixedPointDataset::fermat_quartic()).unwrap();
        assert_eq!(v.outcome, Outcome::NoObstruction);
        assert_eq!(v.spin.value, Some(BigRational::from_integer(2.into())));
        assert_eq!(v.k_vector, Some(KVector::from_i64(3, &[2, 0, 0])));
        let q = v.quotient.unwrap();
        assert_eq!(q.sigma, BigRational::from_integer((-4).into()));
        assert_eq!(q.b_minus, Some(BigRational::from_integer(7.into())));
        assert!(v
            .reasons
            .iter()
            .any(|r| r.anchor == Anchor::NontrivialAction));
    }

    #[test]
    fn trivial_pseudofree_fermat_counts_violate() {
        let mut d = FixedPointDataset::fermat_quartic();
        d.homologically_trivial = true;
        let v = verdict(&d).unwrap();
        assert_eq!(v.outcome, Outcome::ConstraintViolation);
        assert!(v
            .reasons
            .iter()
            .any(|r| r.anchor == Anchor::TrivialSignature && r.status == Status::Violated));
    }

    /// 3 points of type (1,2), 11 of type (1,1) and five (−2)-spheres: every
    /// necessary condition holds, the spin number is −1 and k = (0, 1, 1).
    pub(crate) fn negative_spin_trivial() -> FixedPointDataset {
        let mut d = trivial_k3();
        d.isolated = vec![IsolatedPoint::new(1, 2, -1); 3];
        d.isolated.extend(vec![IsolatedPoint::new(1, 1, 1); 11]);
        d.surfaces = vec![FixedSurface::sphere(-2, 1, -1); 5];
        d
    }

    #[test]
    fn negative_spin_gives_contradiction() {
        let v = verdict(&negative_spin_trivial()).unwrap();
        assert_eq!(v.outcome, Outcome::Contradiction, "{:#?}", v.reasons);
        assert_eq!(v.spin.value, Some(BigRational::from_integer((-1).into())));
        assert_eq!(v.k_vector, Some(KVector::from_i64(3, &[0, 1, 1])));
        let r = v.prop41.unwrap();
        assert_eq!(r.kernel_rank, Some(1));
        assert_eq!(r.sw_value, Some(BigInt::zero()));
        assert!(v.reasons.iter().any(|r| r.anchor == Anchor::MorganSzabo));
    }

    #[test]
    fn free_trivial_action_violates() {
        let v = verdict(&trivial_k3()).unwrap();
        assert_eq!(v.outcome, Outcome::ConstraintViolation);
    }

    #[test]
    fn irrational_spin_is_not_obstructed() {
        let mut d = FixedPointDataset::empty(5, ManifoldInvariants::k3());
        d.isolated = vec![IsolatedPoint::new(1, 2, -1)];
        let v = verdict(&d).unwrap();
        assert_eq!(v.spin.sign, SpinSign::UnknownIrrational);
        assert!(v.spin.estimate.is_some());
        assert_ne!(v.outcome, Outcome::Contradiction);
    }

    #[test]
    fn deterministic_json() {
        let a = serde_json::to_string(&verdict(&negative_spin_trivial()).unwrap()).unwrap();
        let b = serde_json::to_string(&verdict(&negative_spin_trivial()).unwrap()).unwrap();
        assert_eq!(a, b);
        assert!(a.contains("\"outcome\":\"Contradiction\""));
    }
}
