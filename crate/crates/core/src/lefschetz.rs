//! Fixed-point formulas: spin numbers of all powers of the action, the
//! eigenspace defects kᵢ recovered from them, and the p = 3 quotient
//! signature and Euler characteristic.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclo::{half_angle_cos, half_angle_csc, CycloError, CyclotomicNumber};
use crate::dataset::{
    count_p3_types, normalize_half_weights, DatasetError, FixedPointDataset, ManifoldInvariants,
};
use crate::report::{de_bigint_vec, ser_bigint_vec};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LefschetzError {
    #[error("manifold is not spin")]
    NotSpin,
    #[error("signature {0} is not divisible by 8")]
    SignatureNotDivisible(BigInt),
    #[error("power {j} is divisible by p = {p}")]
    TrivialPower { j: i64, p: u64 },
    #[error("k{i} = {value} is not an integer")]
    NonIntegral { i: usize, value: String },
    #[error("spin tuple has {got} entries, expected p = {p}")]
    TupleLength { got: usize, p: u64 },
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error(transparent)]
    Cyclo(#[from] CycloError),
}

/// Eigenspace defects (k₀, …, k_{p−1}).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KVector {
    pub p: u64,
    #[serde(serialize_with = "ser_bigint_vec", deserialize_with = "de_bigint_vec")]
    pub k: Vec<BigInt>,
}

impl KVector {
    pub fn new(p: u64, k: Vec<BigInt>) -> Self {
        KVector { p, k }
    }

    pub fn from_i64(p: u64, k: &[i64]) -> Self {
        KVector {
            p,
            k: k.iter().map(|&x| BigInt::from(x)).collect(),
        }
    }

    pub fn sum(&self) -> BigInt {
        self.k.iter().sum()
    }

    /// The defects of the lift e^{2πqi/p}τ̂: kᵢ ↦ k_{i+q}.
    pub fn shift(&self, q: usize) -> Self {
        let p = self.k.len();
        KVector {
            p: self.p,
            k: (0..p).map(|i| self.k[(i + q) % p].clone()).collect(),
        }
    }

    /// k₁ = … = k_{p−1}
    pub fn is_uniform(&self) -> bool {
        self.k[1..].windows(2).all(|w| w[0] == w[1])
    }

    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.k.iter().map(|x| i64::try_from(x).ok()).collect()
    }
}

impl std::fmt::Display for KVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.k.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Spin(τ̂^j, X) for j = 0..p−1, all at conductor p; slot 0 is the index −σ/8.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpinNumberTuple {
    pub p: u64,
    pub values: Vec<CyclotomicNumber>,
}

impl SpinNumberTuple {
    pub fn is_real(&self) -> bool {
        self.values.iter().all(CyclotomicNumber::is_real)
    }

    /// Spin(τ̂^j) = Spin(τ̂^{p−j}) for every j ≥ 1.
    pub fn is_symmetric(&self) -> bool {
        let p = self.values.len();
        (1..p).all(|j| self.values[j] == self.values[p - j])
    }
}

/// −σ/8, the full index of the Dirac operator.
pub fn spin_index(m: &ManifoldInvariants) -> Result<BigRational, LefschetzError> {
    if !m.is_spin {
        return Err(LefschetzError::NotSpin);
    }
    let (q, r) = m.signature.div_rem(&BigInt::from(8));
    if !r.is_zero() {
        return Err(LefschetzError::SignatureNotDivisible(m.signature.clone()));
    }
    Ok(BigRational::from_integer(-q))
}

/// Odd representative of j mod p in [1, 2p).
///
/// ζ₂ₚ ↦ ζ₂ₚ^k with this k is the automorphism of ℚ(ζ₂ₚ) = ℚ(ζ_p) restricting
/// to ν ↦ ν^j, so evaluating at it is the same as conjugating Spin(τ̂) by
/// ν ↦ ν^j. Using j itself would break the j ↔ p−j symmetry whenever a half
/// weight has the wrong parity.
fn power_twist(j: i64, p: u64) -> i64 {
    let r = j.rem_euclid(p as i64);
    if r % 2 == 1 {
        r
    } else {
        r + p as i64
    }
}

/// Spin(τ̂^j, X) from the half-weight form of the G-spin formula.
pub fn spin_number(d: &FixedPointDataset, j: i64) -> Result<CyclotomicNumber, LefschetzError> {
    d.validate()?;
    let p = d.p;
    if j.rem_euclid(p as i64) == 0 {
        return Err(LefschetzError::TrivialPower { j, p });
    }
    let n = 2 * p;
    let k = power_twist(j, p);
    let (points, surfaces) = normalize_half_weights(d);

    let mut point_counts: BTreeMap<(u64, u64), i64> = BTreeMap::new();
    for pt in &points {
        let key = (pt.a.min(pt.b), pt.a.max(pt.b));
        *point_counts.entry(key).or_default() += 1;
    }
    let mut surface_weights: BTreeMap<u64, BigInt> = BTreeMap::new();
    for s in &surfaces {
        *surface_weights.entry(s.c).or_default() += &s.self_intersection;
    }

    let z = |e: i64| CyclotomicNumber::zeta_pow(n, e);
    let diff = |e: i64| &z(e) - &z(-e);
    let mut acc = CyclotomicNumber::zero(n);
    for ((a, b), count) in point_counts {
        let (a, b) = (k * a as i64, k * b as i64);
        let term = (&diff(a) * &diff(b)).inverse()?;
        acc = &acc - &term.scale(&BigRational::from_integer(count.into()));
    }
    for (c, f2) in surface_weights {
        if f2.is_zero() {
            continue;
        }
        let c = k * c as i64;
        let s = diff(c);
        let term = (&z(c) + &z(-c)).try_div(&(&s * &s))?;
        acc = &acc - &term.scale(&BigRational::new(f2, BigInt::from(2)));
    }
    Ok(acc.reduce_conductor().embed_conductor(p)?)
}

/// The G-spin formula at j = 1 written with explicit signs and half-angle
/// trigonometry:
/// `−¼ Σ ε csc(α/2) csc(β/2) + ¼ Σ ε cos(θ/2) csc²(θ/2) ⟨F, F⟩`.
pub fn spin_number_trigonometric(
    d: &FixedPointDataset,
) -> Result<CyclotomicNumber, LefschetzError> {
    d.validate()?;
    let p = d.p;
    let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
    let mut acc = CyclotomicNumber::zero(4 * p);
    for pt in &d.isolated {
        let v = &half_angle_csc(pt.l_alpha, p)? * &half_angle_csc(pt.l_beta, p)?;
        acc = &acc + &v.scale(&(&quarter * BigInt::from(-pt.epsilon)));
    }
    for s in &d.surfaces {
        let csc = half_angle_csc(s.l_theta, p)?;
        let v = &half_angle_cos(s.l_theta, p)? * &(&csc * &csc);
        let w = &s.self_intersection * BigInt::from(s.epsilon);
        acc = &acc + &v.scale(&(&quarter * w));
    }
    Ok(acc.reduce_conductor().embed_conductor(p)?)
}

pub fn spin_tuple(d: &FixedPointDataset) -> Result<SpinNumberTuple, LefschetzError> {
    let p = d.p;
    let mut values = vec![CyclotomicNumber::from_rational(p, spin_index(&d.manifold)?)];
    for j in 1..p as i64 {
        values.push(spin_number(d, j)?);
    }
    Ok(SpinNumberTuple { p, values })
}

/// Fourier inversion of Spin(τ̂^j) = Σᵢ kᵢ ν^{ij}.
pub fn k_vector(s: &SpinNumberTuple) -> Result<KVector, LefschetzError> {
    let p = s.p;
    if s.values.len() != p as usize {
        return Err(LefschetzError::TupleLength {
            got: s.values.len(),
            p,
        });
    }
    let values: Vec<CyclotomicNumber> = s
        .values
        .iter()
        .map(|v| v.embed_conductor(p))
        .collect::<Result<_, _>>()?;
    let inv_p = BigRational::new(BigInt::one(), BigInt::from(p));
    let mut k = Vec::with_capacity(p as usize);
    for i in 0..p as i64 {
        let mut acc = CyclotomicNumber::zero(p);
        for (j, v) in values.iter().enumerate() {
            acc = &acc + &(&CyclotomicNumber::zeta_pow(p, -i * j as i64) * v);
        }
        let acc = acc.scale(&inv_p);
        match acc.to_rational() {
            Ok(q) if q.is_integer() => k.push(q.to_integer()),
            _ => {
                return Err(LefschetzError::NonIntegral {
                    i: i as usize,
                    value: acc.to_string(),
                })
            }
        }
    }
    Ok(KVector { p, k })
}

/// Spin numbers implied by a k-vector: Spin(τ̂^j) = Σᵢ kᵢ ν^{ij}.
pub fn synthesize(k: &KVector) -> SpinNumberTuple {
    let p = k.p;
    let values = (0..p as i64)
        .map(|j| {
            let mut acc = CyclotomicNumber::zero(p);
            for (i, ki) in k.k.iter().enumerate() {
                let term = CyclotomicNumber::zeta_pow(p, i as i64 * j)
                    .scale(&BigRational::from_integer(ki.clone()));
                acc = &acc + &term;
            }
            acc
        })
        .collect();
    SpinNumberTuple { p, values }
}

/// Spin(τ̂) when k₁ = … = k_{p−1}: (p·k₀ − Σkᵢ)/(p − 1).
pub fn uniform_spin(p: u64, k0: &BigInt, index: &BigInt) -> BigRational {
    BigRational::new(BigInt::from(p) * k0 - index, BigInt::from(p - 1))
}

fn require_p3(d: &FixedPointDataset) -> Result<(), LefschetzError> {
    d.validate()?;
    if d.p != 3 {
        return Err(DatasetError::WrongPrime(d.p).into());
    }
    Ok(())
}

/// σ(X/ℤ₃) from the G-signature theorem:
/// `3σ(X/ℤ₃) = σ(X) + Σ_F Σ_l csc²(πl/3)⟨F, F⟩ + ⅔(f₁ − f₂)`.
pub fn signature_quotient_p3(d: &FixedPointDataset) -> Result<BigRational, LefschetzError> {
    require_p3(d)?;
    let (f1, f2) = count_p3_types(d)?;
    let mut csc_sq = CyclotomicNumber::zero(12);
    for l in 1..3 {
        let c = half_angle_csc(l, 3)?;
        csc_sq = &csc_sq + &(&c * &c);
    }
    let csc_sq = csc_sq.to_rational()?;
    let f_sq: BigInt = d.surfaces.iter().map(|s| &s.self_intersection).sum();
    let rhs = BigRational::from_integer(d.manifold.signature.clone())
        + csc_sq * f_sq
        + BigRational::new(
            BigInt::from(2) * (BigInt::from(f1) - BigInt::from(f2)),
            BigInt::from(3),
        );
    Ok(rhs / BigInt::from(3))
}

/// χ(X/ℤ₃) = (χ(X) + 2χ(X^τ))/3.
pub fn euler_quotient_p3(d: &FixedPointDataset) -> Result<BigRational, LefschetzError> {
    require_p3(d)?;
    let chi = &d.manifold.euler + BigInt::from(2) * d.fixed_euler();
    Ok(BigRational::new(chi, BigInt::from(3)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{FixedSurface, IsolatedPoint};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn k3(p: u64) -> FixedPointDataset {
        FixedPointDataset::empty(p, ManifoldInvariants::k3())
    }

    #[test]
    fn fermat() {
        let d = FixedPointDataset::fermat_quartic();
        assert_eq!(spin_number(&d, 1).unwrap().to_rational().unwrap(), q(2, 1));
        let s = spin_tuple(&d).unwrap();
        assert!(s.is_real() && s.is_symmetric());
        assert_eq!(k_vector(&s).unwrap(), KVector::from_i64(3, &[2, 0, 0]));
        assert_eq!(signature_quotient_p3(&d).unwrap(), q(-4, 1));
        assert_eq!(euler_quotient_p3(&d).unwrap(), q(12, 1));
    }

    #[test]
    fn empty_fixed_set() {
        assert!(spin_number(&k3(5), 2).unwrap().is_zero());
        assert_eq!(signature_quotient_p3(&k3(3)).unwrap(), q(-16, 3));
        assert_eq!(euler_quotient_p3(&k3(3)).unwrap(), q(8, 1));
    }

    #[test]
    fn single_sphere() {
        let mut d = k3(3);
        d.surfaces.push(FixedSurface::sphere(-2, 1, 1));
        assert_eq!(spin_number(&d, 1).unwrap().to_rational().unwrap(), q(-1, 3));
        assert_eq!(euler_quotient_p3(&d).unwrap(), q(28, 3));
        d.surfaces[0] = FixedSurface::sphere(6, 1, 1);
        assert_eq!(signature_quotient_p3(&d).unwrap(), q(0, 1));
    }

    #[test]
    fn agrees_with_trigonometric_form() {
        let mut d = k3(5);
        d.isolated = vec![IsolatedPoint::new(1, 2, 1), IsolatedPoint::new(3, 3, -1)];
        d.surfaces = vec![
            FixedSurface::sphere(-4, 2, -1),
            FixedSurface::sphere(-1, 4, 1),
        ];
        assert_eq!(
            spin_number(&d, 1).unwrap(),
            spin_number_trigonometric(&d).unwrap()
        );
    }

    #[test]
    fn index() {
        assert_eq!(spin_index(&ManifoldInvariants::k3()).unwrap(), q(2, 1));
        let mut m = ManifoldInvariants::k3();
        m.signature = BigInt::zero();
        assert_eq!(spin_index(&m).unwrap(), q(0, 1));
        m.signature = BigInt::from(-32);
        assert_eq!(spin_index(&m).unwrap(), q(4, 1));
        m.signature = BigInt::from(-4);
        assert!(matches!(
            spin_index(&m),
            Err(LefschetzError::SignatureNotDivisible(_))
        ));
        m.is_spin = false;
        assert_eq!(spin_index(&m), Err(LefschetzError::NotSpin));
    }

    fn rational_tuple(v: &[i64]) -> SpinNumberTuple {
        SpinNumberTuple {
            p: v.len() as u64,
            values: v
                .iter()
                .map(|&x| CyclotomicNumber::from_integer(v.len() as u64, x))
                .collect(),
        }
    }

    #[test]
    fn inversion_examples() {
        assert_eq!(
            k_vector(&rational_tuple(&[2, 2, 2])).unwrap(),
            KVector::from_i64(3, &[2, 0, 0])
        );
        assert_eq!(
            k_vector(&rational_tuple(&[2, -16, -16])).unwrap(),
            KVector::from_i64(3, &[-10, 6, 6])
        );
        assert!(matches!(
            k_vector(&rational_tuple(&[2, 1, 1])),
            Err(LefschetzError::NonIntegral { i: 0, .. })
        ));
    }

    #[test]
    fn synthesize_round_trip() {
        for k in [[0i64, 1, 1, 0, 0], [-3, 2, 2, 0, 1], [2, 0, 0, 0, 0]] {
            let kv = KVector::from_i64(5, &k);
            assert_eq!(k_vector(&synthesize(&kv)).unwrap(), kv);
        }
    }

    #[test]
    fn uniform_pattern_matches_closed_form() {
        for p in [3u64, 5, 7] {
            for k0 in -4i64..=2 {
                let mut k = vec![k0];
                k.extend(std::iter::repeat_n(0, p as usize - 1));
                let rest = 2 - k0;
                if rest % (p as i64 - 1) != 0 {
                    continue;
                }
                for x in &mut k[1..] {
                    *x = rest / (p as i64 - 1);
                }
                let s = synthesize(&KVector::from_i64(p, &k));
                let want = uniform_spin(p, &k0.into(), &2.into());
                assert_eq!(s.values[1].to_rational().unwrap(), want);
            }
        }
    }

    #[test]
    fn powers_are_galois_conjugates() {
        let mut d = k3(7);
        d.isolated = vec![
            IsolatedPoint::new(1, 3, 1),
            IsolatedPoint::new(2, 2, -1),
            IsolatedPoint::new(5, 1, 1),
        ];
        d.surfaces = vec![FixedSurface::sphere(-3, 3, 1)];
        let base = spin_number(&d, 1).unwrap();
        for j in 2..7 {
            assert_eq!(spin_number(&d, j).unwrap(), base.galois_apply(j).unwrap());
        }
        assert_eq!(
            spin_number(&d, 0),
            Err(LefschetzError::TrivialPower { j: 0, p: 7 })
        );
    }

    #[test]
    fn shift_moves_indices() {
        let k = KVector::from_i64(3, &[2, 0, 0]);
        assert_eq!(k.shift(1), KVector::from_i64(3, &[0, 0, 2]));
        assert_eq!(k.shift(2), KVector::from_i64(3, &[0, 2, 0]));
        assert_eq!(k.to_string(), "(2, 0, 0)");
    }
}
