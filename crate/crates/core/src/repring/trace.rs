//! tom Dieck trace evaluation of the degree α and extraction of the
//! Seiberg–Witten invariant from β.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{RepRingElement, RepRingError};
use crate::cyclo::CyclotomicNumber;

/// Exponent of ν attached to the factor `(1 + ν^{e·j})^{−kᵢ}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExponentSchedule {
    /// k₁ ↦ 2j, k₂ ↦ 3j, …, k_{p−2} ↦ (p−1)j, and k_{p−1} ↦ p − 2j.
    #[default]
    AsPrinted,
    /// kᵢ ↦ 2ij throughout, from tr_{Jν^j}(1 + ξ^{2i} − ξ^i h) = 1 + ν^{2ij}.
    Doubled,
}

impl ExponentSchedule {
    /// ν-exponent for kᵢ (i ≥ 1) at power j.
    pub fn exponent(self, i: u64, j: i64, p: u64) -> i64 {
        let (i, p) = (i as i64, p as i64);
        match self {
            ExponentSchedule::AsPrinted if i == p - 1 => p - 2 * j,
            ExponentSchedule::AsPrinted => (i + 1) * j,
            ExponentSchedule::Doubled => 2 * i * j,
        }
    }

    /// Whether the two schedules agree for this p (true exactly for p = 3).
    pub fn schedules_agree(p: u64) -> bool {
        (1..p).all(|j| {
            (1..p).all(|i| {
                (Self::AsPrinted.exponent(i, j as i64, p) - Self::Doubled.exponent(i, j as i64, p))
                    .rem_euclid(p as i64)
                    == 0
            })
        })
    }
}

/// `2^{t₀−k₀} ∏ᵢ (1+ν^{ij})^{tᵢ} ∏ᵢ (1+ν^{e(i)j})^{−kᵢ}` with ν = ζ_p.
pub fn tom_dieck_rhs(
    t_vector: &[u64],
    k_vector: &[i64],
    j: i64,
    p: u64,
    schedule: ExponentSchedule,
) -> Result<CyclotomicNumber, RepRingError> {
    for v in [t_vector.len(), k_vector.len()] {
        if v != p as usize {
            return Err(RepRingError::Length { got: v, p });
        }
    }
    let one = CyclotomicNumber::one(p);
    let one_plus = |e: i64| &one + &CyclotomicNumber::zeta_pow(p, e);
    let two_power = t_vector[0] as i64 - k_vector[0];
    let mut acc = CyclotomicNumber::from_rational(
        p,
        BigRational::from_integer(BigInt::from(2).pow(two_power.unsigned_abs() as u32)),
    );
    if two_power < 0 {
        acc = acc.inverse()?;
    }
    for i in 1..p {
        let ti = t_vector[i as usize] as i64;
        if ti != 0 {
            acc = &acc * &one_plus(i as i64 * j).pow(ti)?;
        }
        let ki = k_vector[i as usize];
        if ki != 0 {
            acc = &acc * &one_plus(schedule.exponent(i, j, p)).pow(-ki)?;
        }
    }
    Ok(acc)
}

/// The product over all powers j of the trace identity, divided by 2^{p−1}.
///
/// It must equal the norm of an algebraic integer `Σ aᵢν^{ji}`, so a
/// non-integral value is a contradiction (the parity argument bounding k₀).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParityCheck {
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub normalized_product: BigRational,
    pub integral: bool,
}

pub fn parity_check(
    t_vector: &[u64],
    k_vector: &[i64],
    p: u64,
    schedule: ExponentSchedule,
) -> Result<ParityCheck, RepRingError> {
    let mut prod = CyclotomicNumber::one(p);
    for j in 1..p as i64 {
        prod = &prod * &tom_dieck_rhs(t_vector, k_vector, j, p, schedule)?;
    }
    let value = prod.to_rational()? / BigRational::from_integer(BigInt::from(2).pow(p as u32 - 1));
    let integral = value.is_integer();
    Ok(ParityCheck {
        normalized_product: value,
        integral,
    })
}

/// Coefficient of T^{m−d−1} in β|_{ξ=1}, expanded in T = 1 − t modulo T^{m−d}.
pub fn extract_sw(beta: &RepRingElement, m: i64, d: i64) -> Result<BigInt, RepRingError> {
    let n = m - d;
    if n <= 0 {
        return Err(RepRingError::EmptyTruncation(n));
    }
    let n = n as usize;
    let mut in_t = vec![BigInt::zero(); n];
    for (e, _, c) in beta.specialize_xi_one().terms() {
        for (k, b) in binomial_series(e, n).into_iter().enumerate() {
            in_t[k] += c * b;
        }
    }
    if let Some(low) = in_t[..n - 1].iter().position(|c| !c.is_zero()) {
        return Err(RepRingError::NotTopDegree {
            degree: low,
            top: n - 1,
        });
    }
    Ok(in_t[n - 1].clone())
}

/// First `len` coefficients of (1 − T)^e as a power series in T.
fn binomial_series(e: i64, len: usize) -> Vec<BigInt> {
    // coefficient of T^k is (−1)^k · C(e, k), with the generalized binomial for e < 0
    let mut out = Vec::with_capacity(len);
    let mut c = BigInt::one();
    for k in 0..len as i64 {
        out.push(if k % 2 == 0 { c.clone() } else { -c.clone() });
        c = c * BigInt::from(e - k) / BigInt::from(k + 1);
        if c.is_zero() && e >= 0 {
            out.resize(len, BigInt::zero());
            break;
        }
    }
    out.truncate(len);
    if out.len() < len {
        out.resize(len, BigInt::zero());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn trivial_pattern_gives_two() {
        let v = tom_dieck_rhs(&[3, 0, 0], &[2, 0, 0], 1, 3, ExponentSchedule::AsPrinted).unwrap();
        assert_eq!(v.to_rational().unwrap(), q(2));
    }

    #[test]
    fn negative_spin_pattern_gives_eight() {
        for s in [ExponentSchedule::AsPrinted, ExponentSchedule::Doubled] {
            let v = tom_dieck_rhs(&[3, 0, 0], &[0, 1, 1], 1, 3, s).unwrap();
            assert_eq!(v.to_rational().unwrap(), q(8));
        }
    }

    #[test]
    fn schedules() {
        assert!(ExponentSchedule::schedules_agree(3));
        assert!(!ExponentSchedule::schedules_agree(5));
        assert_eq!(ExponentSchedule::AsPrinted.exponent(4, 1, 5), 3);
        assert_eq!(ExponentSchedule::AsPrinted.exponent(2, 1, 5), 3);
        assert_eq!(ExponentSchedule::Doubled.exponent(2, 1, 5), 4);
    }

    #[test]
    fn parity_bound() {
        for p in [3u64, 5, 7] {
            let mut t = vec![0; p as usize];
            t[0] = 3;
            for k0 in -2i64..=5 {
                let mut k = vec![0; p as usize];
                k[0] = k0;
                k[1] = 2 - k0;
                let c = parity_check(&t, &k, p, ExponentSchedule::AsPrinted).unwrap();
                let want =
                    BigRational::new(2.into(), 1.into()).pow((p as i32 - 1) * (2 - k0 as i32));
                assert_eq!(c.normalized_product, want, "p={p} k0={k0}");
                assert_eq!(c.integral, k0 <= 2);
            }
        }
    }

    #[test]
    fn sw_extraction() {
        let p = 3;
        let big_t = RepRingElement::one_minus_t_xi(p, 0);
        let beta = big_t.pow(3).scale(&BigInt::from(3));
        assert_eq!(extract_sw(&beta, 4, 0).unwrap(), BigInt::from(3));
        assert_eq!(
            extract_sw(&RepRingElement::zero(p), 4, 0).unwrap(),
            BigInt::zero()
        );
        assert_eq!(
            extract_sw(&big_t, 4, 0),
            Err(RepRingError::NotTopDegree { degree: 1, top: 3 })
        );
        // σ specializes to p
        let s = &RepRingElement::sigma(p) * &big_t.pow(2);
        assert_eq!(extract_sw(&s, 3, 0).unwrap(), BigInt::from(3));
        // higher powers of T vanish in the quotient
        assert_eq!(extract_sw(&big_t.pow(5), 3, 0).unwrap(), BigInt::zero());
        assert_eq!(extract_sw(&s, 3, 1).unwrap(), BigInt::zero());
    }

    #[test]
    fn laurent_series() {
        // t^{-1} = 1/(1−T) = 1 + T + T² + …
        assert_eq!(binomial_series(-1, 4), vec![BigInt::one(); 4]);
        assert_eq!(
            binomial_series(2, 4),
            [1, -2, 1, 0].map(BigInt::from).to_vec()
        );
    }
}
