//! The representation ring R(S¹×ℤ_p) = ℤ[ξ]/(ξ^p−1)[t, t⁻¹], its truncated
//! quotients, and the Adams-operation machinery used on K-theoretic degrees.

mod adams;
pub mod lattice;
mod trace;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::cyclo::CyclotomicNumber;

pub use adams::{
    adams_constraint_image, adams_constraint_matrix, solve_adams_kernel, solve_adams_kernel_multi,
    specialize_scalar_step, AdamsKernel, InstanceParameters, ScalarSpecialization,
};
pub use trace::{extract_sw, parity_check, tom_dieck_rhs, ExponentSchedule, ParityCheck};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepRingError {
    #[error("group order mismatch: {0} vs {1}")]
    PrimeMismatch(u64, u64),
    #[error("invalid instance parameters: {0}")]
    InvalidParameters(String),
    #[error("m₀ − d = {0} is negative")]
    NegativeTruncation(i64),
    #[error("β has support at T^{degree}, below the top degree {top}")]
    NotTopDegree { degree: usize, top: usize },
    #[error("truncation degree m − d = {0} must be positive")]
    EmptyTruncation(i64),
    #[error("vector length {got} does not match p = {p}")]
    Length { got: usize, p: u64 },
    #[error("{0}")]
    Cyclo(#[from] crate::cyclo::CycloError),
}

/// Element of R(S¹×ℤ_p): a finite ℤ-combination of monomials t^i ξ^j with
/// j taken mod p. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RepRingElement {
    p: u64,
    terms: BTreeMap<(i64, u64), BigInt>,
}

impl RepRingElement {
    pub fn zero(p: u64) -> Self {
        assert!(p >= 1);
        RepRingElement {
            p,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(p: u64) -> Self {
        Self::monomial(p, 0, 0, BigInt::one())
    }

    pub fn monomial(p: u64, t_exp: i64, xi_exp: i64, c: BigInt) -> Self {
        let mut e = Self::zero(p);
        e.add_term(t_exp, xi_exp, c);
        e
    }

    pub fn t(p: u64) -> Self {
        Self::monomial(p, 1, 0, BigInt::one())
    }

    pub fn xi(p: u64) -> Self {
        Self::monomial(p, 0, 1, BigInt::one())
    }

    pub fn integer(p: u64, c: i64) -> Self {
        Self::monomial(p, 0, 0, c.into())
    }

    /// σ = 1 + ξ + … + ξ^{p−1}, the regular representation.
    pub fn sigma(p: u64) -> Self {
        let mut e = Self::zero(p);
        for j in 0..p as i64 {
            e.add_term(0, j, BigInt::one());
        }
        e
    }

    /// `1 − t ξ^i`
    pub fn one_minus_t_xi(p: u64, i: i64) -> Self {
        let mut e = Self::one(p);
        e.add_term(1, i, BigInt::from(-1));
        e
    }

    /// `1 + tξ^i + t²ξ^{2i} + … + t^{q−1}ξ^{(q−1)i}`
    pub fn geometric(p: u64, i: i64, q: u64) -> Self {
        let mut e = Self::zero(p);
        for r in 0..q as i64 {
            e.add_term(r, r * i, BigInt::one());
        }
        e
    }

    pub fn add_term(&mut self, t_exp: i64, xi_exp: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let key = (t_exp, xi_exp.rem_euclid(self.p as i64) as u64);
        let slot = self.terms.entry(key).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, t_exp: i64, xi_exp: u64) -> BigInt {
        self.terms
            .get(&(t_exp, xi_exp % self.p))
            .cloned()
            .unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, u64, &BigInt)> {
        self.terms.iter().map(|(&(i, j), c)| (i, j, c))
    }

    /// Highest t-exponent present.
    pub fn t_degree(&self) -> Option<i64> {
        self.terms.keys().map(|k| k.0).max()
    }

    pub fn min_t_exponent(&self) -> Option<i64> {
        self.terms.keys().map(|k| k.0).min()
    }

    fn check_same(&self, other: &Self) -> Result<(), RepRingError> {
        if self.p != other.p {
            Err(RepRingError::PrimeMismatch(self.p, other.p))
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, RepRingError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (&(i, j), c) in &other.terms {
            out.add_term(i, j as i64, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, RepRingError> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, RepRingError> {
        self.check_same(other)?;
        let mut out = Self::zero(self.p);
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &other.terms {
                out.add_term(i1 + i2, (j1 + j2) as i64, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let mut out = Self::zero(self.p);
        for (&(i, j), x) in &self.terms {
            out.add_term(i, j as i64, x * c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.p);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// The Adams operation ψ^q: t ↦ t^q, ξ ↦ ξ^q.
    pub fn adams(&self, q: u64) -> Self {
        let mut out = Self::zero(self.p);
        for (&(i, j), c) in &self.terms {
            out.add_term(i * q as i64, (j * q) as i64, c.clone());
        }
        out
    }

    /// The augmentation ξ ↦ 1.
    pub fn specialize_xi_one(&self) -> Self {
        let mut out = Self::zero(self.p);
        for (&(i, _), c) in &self.terms {
            out.add_term(i, 0, c.clone());
        }
        out
    }

    /// Evaluates ξ ↦ ζ_p^j, returning the t-coefficients in ℚ(ζ_p).
    pub fn evaluate_xi(&self, j: i64) -> BTreeMap<i64, CyclotomicNumber> {
        let mut out: BTreeMap<i64, CyclotomicNumber> = BTreeMap::new();
        for (&(i, e), c) in &self.terms {
            let z = CyclotomicNumber::zeta_pow(self.p, j * e as i64)
                .scale(&num_rational::BigRational::from_integer(c.clone()));
            let slot = out
                .entry(i)
                .or_insert_with(|| CyclotomicNumber::zero(self.p));
            *slot = &*slot + &z;
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// Dense group-ring coefficient vector at t-exponent `i`.
    pub(crate) fn group_ring_coeff(&self, i: i64) -> Vec<BigInt> {
        (0..self.p).map(|j| self.coeff(i, j)).collect()
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<'a> $tr<&'a RepRingElement> for &'a RepRingElement {
            type Output = RepRingElement;
            fn $method(self, rhs: &'a RepRingElement) -> RepRingElement {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr for RepRingElement {
            type Output = RepRingElement;
            fn $method(self, rhs: RepRingElement) -> RepRingElement {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &RepRingElement {
    type Output = RepRingElement;
    fn neg(self) -> RepRingElement {
        self.scale(&BigInt::from(-1))
    }
}

impl fmt::Display for RepRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(i, j), c) in &self.terms {
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let mag = c.abs();
            let mono = match (i, j) {
                (0, 0) => String::new(),
                (0, _) => format!("ξ^{j}"),
                (_, 0) => format!("t^{i}"),
                _ => format!("t^{i}ξ^{j}"),
            };
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{mag}{mono}")?;
            }
        }
        Ok(())
    }
}

/// Multiplies two dense group-ring vectors of length p.
fn group_ring_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let p = a.len();
    let mut out = vec![BigInt::zero(); p];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[(i + j) % p] += x * y;
            }
        }
    }
    out
}

/// The principal ideal (1−t)^{m₀−d}(1−tξ)^{m₁}⋯(1−tξ^{p−1})^{m_{p−1}}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncationIdeal {
    p: u64,
    m_vector: Vec<u64>,
    d: i64,
    generator: RepRingElement,
    degree: usize,
    /// dense generator coefficients by t-degree
    dense: Vec<Vec<BigInt>>,
    /// inverse of the top coefficient ±ξ^s
    top_inverse: Vec<BigInt>,
}

impl TruncationIdeal {
    pub fn new(p: u64, m_vector: &[u64], d: i64) -> Result<Self, RepRingError> {
        if m_vector.len() != p as usize {
            return Err(RepRingError::Length {
                got: m_vector.len(),
                p,
            });
        }
        let first = m_vector[0] as i64 - d;
        if first < 0 {
            return Err(RepRingError::NegativeTruncation(first));
        }
        let exps: Vec<u64> = std::iter::once(first as u64)
            .chain(m_vector[1..].iter().copied())
            .collect();
        let mut generator = RepRingElement::one(p);
        let mut sign = 1i64;
        let mut s = 0u64;
        for (i, &e) in exps.iter().enumerate() {
            generator = &generator * &RepRingElement::one_minus_t_xi(p, i as i64).pow(e as u32);
            if e % 2 == 1 {
                sign = -sign;
            }
            s = (s + i as u64 * e) % p;
        }
        let degree = exps.iter().sum::<u64>() as usize;
        let dense = (0..=degree as i64)
            .map(|i| generator.group_ring_coeff(i))
            .collect();
        // (−ξ^s)^{-1} pattern: sign·ξ^{−s}
        let mut top_inverse = vec![BigInt::zero(); p as usize];
        top_inverse[((p - s) % p) as usize] = BigInt::from(sign);
        Ok(TruncationIdeal {
            p,
            m_vector: m_vector.to_vec(),
            d,
            generator,
            degree,
            dense,
            top_inverse,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m_vector(&self) -> &[u64] {
        &self.m_vector
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn generator(&self) -> &RepRingElement {
        &self.generator
    }

    /// t-degree of the generator; normal forms have t-degree below this.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Unique representative of `a` modulo the ideal with t-degree < `degree()`.
    pub fn normal_form(&self, a: &RepRingElement) -> Result<RepRingElement, RepRingError> {
        if a.p != self.p {
            return Err(RepRingError::PrimeMismatch(a.p, self.p));
        }
        if self.degree == 0 || a.is_zero() {
            return Ok(RepRingElement::zero(self.p));
        }
        let shift = a.min_t_exponent().unwrap().min(0);
        if shift < 0 {
            // t is a unit modulo the ideal since the generator has constant term 1.
            let lifted = &a.clone() * &RepRingElement::monomial(self.p, -shift, 0, BigInt::one());
            let mut acc = self.reduce_polynomial(&lifted);
            let t_inv = self.t_inverse();
            for _ in 0..(-shift) {
                acc = self.reduce_polynomial(&(&acc * &t_inv));
            }
            return Ok(acc);
        }
        Ok(self.reduce_polynomial(a))
    }

    /// Normal form of t⁻¹: writing g = 1 + t·h, t·(−h) ≡ 1.
    fn t_inverse(&self) -> RepRingElement {
        let mut h = RepRingElement::zero(self.p);
        for (i, c) in self.dense.iter().enumerate().skip(1) {
            for (j, x) in c.iter().enumerate() {
                h.add_term(i as i64 - 1, j as i64, -x.clone());
            }
        }
        self.reduce_polynomial(&h)
    }

    fn reduce_polynomial(&self, a: &RepRingElement) -> RepRingElement {
        let top = a.t_degree().unwrap_or(0).max(0) as usize;
        let p = self.p as usize;
        let mut dense: Vec<Vec<BigInt>> = (0..=top as i64).map(|i| a.group_ring_coeff(i)).collect();
        let m = self.degree;
        for k in (m..dense.len()).rev() {
            if dense[k].iter().all(Zero::is_zero) {
                continue;
            }
            let q = group_ring_mul(&dense[k], &self.top_inverse);
            for (i, g) in self.dense.iter().enumerate() {
                let prod = group_ring_mul(&q, g);
                for (slot, x) in dense[k - m + i].iter_mut().zip(prod) {
                    *slot -= x;
                }
            }
            debug_assert!(dense[k].iter().all(Zero::is_zero));
        }
        let mut out = RepRingElement::zero(self.p);
        for (i, row) in dense.iter().enumerate().take(m) {
            for (j, c) in row.iter().enumerate().take(p) {
                out.add_term(i as i64, j as i64, c.clone());
            }
        }
        out
    }

    /// Coordinates of a normal form in the basis t^i ξ^j (index i·p + j).
    pub fn coordinates(&self, a: &RepRingElement) -> Result<Vec<BigInt>, RepRingError> {
        let nf = self.normal_form(a)?;
        let p = self.p as usize;
        let mut v = vec![BigInt::zero(); p * self.degree];
        for (i, j, c) in nf.terms() {
            v[i as usize * p + j as usize] = c.clone();
        }
        Ok(v)
    }

    pub fn from_coordinates(&self, v: &[BigInt]) -> RepRingElement {
        let p = self.p as usize;
        let mut out = RepRingElement::zero(self.p);
        for (idx, c) in v.iter().enumerate() {
            out.add_term((idx / p) as i64, (idx % p) as i64, c.clone());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma_times(p: u64, k: i64) -> RepRingElement {
        &RepRingElement::sigma(p) * &RepRingElement::one_minus_t_xi(p, k)
    }

    #[test]
    fn sigma_absorbs_xi() {
        for p in [3u64, 5, 7] {
            let base = sigma_times(p, 0);
            for k in 0..p as i64 {
                assert_eq!(sigma_times(p, k), base);
            }
        }
    }

    #[test]
    fn basic_ring_ops() {
        let p = 3;
        let t = RepRingElement::t(p);
        let one = RepRingElement::one(p);
        assert_eq!(&(&one - &t) * &(&one + &t), &one - &t.pow(2));
        let a = &RepRingElement::xi(p) + &t;
        assert_eq!(&a * &one, a);
        assert_eq!(RepRingElement::xi(p).pow(3), one);
        assert!(RepRingElement::one(3)
            .try_add(&RepRingElement::one(5))
            .is_err());
    }

    #[test]
    fn adams_examples() {
        let p = 3;
        let t = RepRingElement::t(p);
        let one = RepRingElement::one(p);
        assert_eq!((&one - &t).adams(2), &one - &t.pow(2));
        let txi = RepRingElement::monomial(p, 1, 1, BigInt::one());
        assert_eq!(
            txi.adams(2),
            RepRingElement::monomial(p, 2, 2, BigInt::one())
        );
    }

    #[test]
    fn normal_form_basics() {
        let ideal = TruncationIdeal::new(3, &[2, 1, 1], 0).unwrap();
        assert_eq!(ideal.degree(), 4);
        assert!(ideal.normal_form(ideal.generator()).unwrap().is_zero());
        let small = &RepRingElement::t(3).pow(3) + &RepRingElement::xi(3);
        assert_eq!(ideal.normal_form(&small).unwrap(), small);

        let t_only = TruncationIdeal::new(3, &[1, 0, 0], 0).unwrap();
        let t = RepRingElement::t(3);
        assert_eq!(t_only.normal_form(&t).unwrap(), RepRingElement::one(3));
        assert!(t_only
            .normal_form(&(&RepRingElement::one(3) - &t))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn laurent_inputs() {
        let ideal = TruncationIdeal::new(3, &[1, 1, 1], 0).unwrap();
        let t = RepRingElement::t(3);
        let t_inv = RepRingElement::monomial(3, -1, 0, BigInt::one());
        let prod = ideal.normal_form(&(&t * &t_inv)).unwrap();
        assert_eq!(prod, RepRingElement::one(3));
        let x = ideal.normal_form(&t_inv).unwrap();
        assert_eq!(
            ideal.normal_form(&(&x * &t)).unwrap(),
            RepRingElement::one(3)
        );
    }

    #[test]
    fn virtual_dimension_shifts_first_factor() {
        let ideal = TruncationIdeal::new(3, &[3, 1, 0], 1).unwrap();
        let one = RepRingElement::one(3);
        let t = RepRingElement::t(3);
        let want = &(&one - &t).pow(2) * &RepRingElement::one_minus_t_xi(3, 1);
        assert_eq!(ideal.generator(), &want);
        assert_eq!(
            TruncationIdeal::new(3, &[0, 1, 1], 1),
            Err(RepRingError::NegativeTruncation(-1))
        );
    }

    #[test]
    fn evaluation_bridges() {
        let s = RepRingElement::sigma(5);
        assert_eq!(s.specialize_xi_one(), RepRingElement::integer(5, 5));
        assert!(s.evaluate_xi(1).is_empty());
        let e = RepRingElement::xi(5).evaluate_xi(2);
        assert_eq!(e[&0], CyclotomicNumber::zeta_pow(5, 2));
    }
}
