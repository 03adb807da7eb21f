//! The Adams-operation constraint on the K-theoretic degree β and its
//! integer kernel.
//!
//! For a degree β in the truncated ring the constraint reads
//!
//! ```text
//! ψ^q(β) = q^l · β · ∏ᵢ (1 + tξ^i + … + t^{q−1}ξ^{i(q−1)})^{nᵢ}
//! ```
//!
//! and is linear in β. On the coefficient space spanned by `t^i ξ^j`
//! (`i < Σmᵢ − d`, `j < p`) it becomes an integer matrix whose kernel holds
//! every admissible β.

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};

use super::lattice::{self, IntMatrix};
use super::{RepRingElement, RepRingError, TruncationIdeal};
use crate::cyclo::IntPolynomial;

/// Dimension data for one finite-dimensional approximation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceParameters {
    pub p: u64,
    pub m_vector: Vec<u64>,
    pub n_vector: Vec<u64>,
    /// ½(b₊ − 1)
    pub l: u64,
    /// virtual dimension of the moduli space
    #[serde(default)]
    pub d: i64,
    /// self-dual eigenspace dimensions, when known
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_vector: Option<Vec<u64>>,
}

impl InstanceParameters {
    pub fn new(p: u64, m_vector: Vec<u64>, n_vector: Vec<u64>, l: u64, d: i64) -> Self {
        InstanceParameters {
            p,
            m_vector,
            n_vector,
            l,
            d,
            t_vector: None,
        }
    }

    pub fn m(&self) -> u64 {
        self.m_vector.iter().sum()
    }

    pub fn n(&self) -> u64 {
        self.n_vector.iter().sum()
    }

    /// kᵢ = mᵢ − nᵢ
    pub fn k_vector(&self) -> Vec<i64> {
        self.m_vector
            .iter()
            .zip(&self.n_vector)
            .map(|(&m, &n)| m as i64 - n as i64)
            .collect()
    }

    /// Truncation degree Σmᵢ − d.
    pub fn truncation_degree(&self) -> i64 {
        self.m() as i64 - self.d
    }

    pub fn validate(&self) -> Result<(), RepRingError> {
        let bad = |msg: String| Err(RepRingError::InvalidParameters(msg));
        if self.p < 3 || !crate::is_prime(self.p) {
            return bad(format!("p = {} is not an odd prime", self.p));
        }
        for (name, v) in [("m_vector", &self.m_vector), ("n_vector", &self.n_vector)] {
            if v.len() != self.p as usize {
                return bad(format!(
                    "{name} has length {}, expected {}",
                    v.len(),
                    self.p
                ));
            }
        }
        let lhs = self.l as i64 + self.n() as i64;
        let rhs = self.m() as i64 - 1 - self.d;
        if lhs != rhs {
            return bad(format!("l + Σnᵢ = {lhs} but Σmᵢ − 1 − d = {rhs}"));
        }
        if (self.m_vector[0] as i64) < self.d {
            return bad(format!(
                "m₀ = {} is smaller than d = {}",
                self.m_vector[0], self.d
            ));
        }
        if let Some(t) = &self.t_vector {
            if t.len() != self.p as usize {
                return bad(format!(
                    "t_vector has length {}, expected {}",
                    t.len(),
                    self.p
                ));
            }
            let b_plus: u64 = t.iter().sum();
            if b_plus != 2 * self.l + 1 {
                return bad(format!("Σtᵢ = {b_plus} but 2l + 1 = {}", 2 * self.l + 1));
            }
        }
        Ok(())
    }

    pub fn ideal(&self) -> Result<TruncationIdeal, RepRingError> {
        TruncationIdeal::new(self.p, &self.m_vector, self.d)
    }

    /// σ·(1−t)^{Σmᵢ−d−1}, the candidate generator of the kernel.
    pub fn sigma_element(&self) -> RepRingElement {
        let p = self.p;
        let e = (self.truncation_degree() - 1).max(0) as u32;
        &RepRingElement::sigma(p) * &RepRingElement::one_minus_t_xi(p, 0).pow(e)
    }
}

/// q^l · ∏ᵢ (1 + tξ^i + … + t^{q−1}ξ^{i(q−1)})^{nᵢ}
fn right_factor(params: &InstanceParameters, q: u64) -> RepRingElement {
    let p = params.p;
    let mut f = RepRingElement::integer(p, 1).scale(&BigInt::from(q).pow(params.l as u32));
    for (i, &n) in params.n_vector.iter().enumerate() {
        f = &f * &RepRingElement::geometric(p, i as i64, q).pow(n as u32);
    }
    f
}

/// normal_form(ψ^q(β) − q^l·β·∏ᵢ(…)^{nᵢ}), evaluated directly in the ring.
pub fn adams_constraint_image(
    params: &InstanceParameters,
    q: u64,
    beta: &RepRingElement,
) -> Result<RepRingElement, RepRingError> {
    params.validate()?;
    let ideal = params.ideal()?;
    let rhs = beta.try_mul(&right_factor(params, q))?;
    ideal.normal_form(&beta.adams(q).try_sub(&rhs)?)
}

/// Integer matrix of the constraint map on the basis `t^i ξ^j`
/// (column index `i·p + j`).
pub fn adams_constraint_matrix(
    params: &InstanceParameters,
    q: u64,
) -> Result<IntMatrix, RepRingError> {
    params.validate()?;
    let ideal = params.ideal()?;
    let p = params.p;
    let dim = p as usize * ideal.degree();
    let factor = ideal.normal_form(&right_factor(params, q))?;
    let mut cols = Vec::with_capacity(dim);
    for idx in 0..dim {
        let b = RepRingElement::monomial(
            p,
            (idx / p as usize) as i64,
            (idx % p as usize) as i64,
            BigInt::one(),
        );
        let img = &b.adams(q) - &(&b * &factor);
        cols.push(ideal.coordinates(&img)?);
    }
    Ok((0..dim)
        .map(|r| cols.iter().map(|c| c[r].clone()).collect())
        .collect())
}

/// Integral kernel of the Adams constraint, as ring elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdamsKernel {
    pub qs: Vec<u64>,
    /// dimension of the coefficient space, p·(Σmᵢ − d)
    pub ambient_dimension: usize,
    /// Hermite-normal-form ℤ-basis in coordinates
    pub coordinates: IntMatrix,
    pub basis: Vec<RepRingElement>,
}

impl AdamsKernel {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Whether `x` lies in the ℤ-span of the basis.
    pub fn contains(
        &self,
        ideal: &TruncationIdeal,
        x: &RepRingElement,
    ) -> Result<bool, RepRingError> {
        let v = ideal.coordinates(x)?;
        Ok(lattice::hnf_coordinates(&self.coordinates, &v).is_some())
    }
}

/// Kernel of the constraint for a single q.
pub fn solve_adams_kernel(
    params: &InstanceParameters,
    q: u64,
) -> Result<AdamsKernel, RepRingError> {
    solve_adams_kernel_multi(params, &[q])
}

/// Intersection of the kernels over several q (matrices stacked).
pub fn solve_adams_kernel_multi(
    params: &InstanceParameters,
    qs: &[u64],
) -> Result<AdamsKernel, RepRingError> {
    params.validate()?;
    if qs.iter().any(|&q| q < 2) {
        return Err(RepRingError::InvalidParameters(
            "q must be at least 2".into(),
        ));
    }
    let ideal = params.ideal()?;
    let dim = params.p as usize * ideal.degree();
    let mut stacked = Vec::new();
    for &q in qs {
        stacked.extend(adams_constraint_matrix(params, q)?);
    }
    let coordinates = lattice::integer_kernel(&stacked, dim);
    let basis = coordinates
        .iter()
        .map(|v| ideal.from_coordinates(v))
        .collect();
    Ok(AdamsKernel {
        qs: qs.to_vec(),
        ambient_dimension: dim,
        coordinates,
        basis,
    })
}

/// The final scalar step applied to β = a·σ·∏(1−tξ^i)^{mᵢ}/(1−tξ^{p−1}).
///
/// Dividing the Adams identity by the common product and specializing ξ ↦ 1
/// leaves `ψ^q(γ)·P_q(t)^{Σkᵢ−1} = q^l·γ` with γ = a·p and
/// P_q = 1 + t + … + t^{q−1}; so `a·p·c(t) = 0` for the polynomial `c`
/// recorded here, and a nonzero `c` forces a = 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarSpecialization {
    pub q: u64,
    pub exponent: i64,
    /// c(t), lowest degree first
    pub obstruction: IntPolynomial,
    pub a_forced_zero: bool,
}

pub fn specialize_scalar_step(k_vector: &[i64], l: u64, q: u64) -> ScalarSpecialization {
    let exponent = k_vector.iter().sum::<i64>() - 1;
    let pq = IntPolynomial::new(vec![BigInt::one(); q as usize]);
    let power = |e: i64| (0..e).fold(IntPolynomial::one(), |acc, _| acc.mul(&pq));
    let ql = IntPolynomial::new(vec![BigInt::from(q).pow(l as u32)]);
    let (lhs, rhs) = if exponent >= 0 {
        (power(exponent), ql)
    } else {
        (IntPolynomial::one(), ql.mul(&power(-exponent)))
    };
    let n = lhs.coeffs().len().max(rhs.coeffs().len());
    let z = BigInt::zero();
    let diff: Vec<BigInt> = (0..n)
        .map(|i| lhs.coeffs().get(i).unwrap_or(&z) - rhs.coeffs().get(i).unwrap_or(&z))
        .collect();
    let obstruction = IntPolynomial::new(diff);
    let a_forced_zero = !obstruction.is_zero();
    ScalarSpecialization {
        q,
        exponent,
        obstruction,
        a_forced_zero,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn negative_spin_instance() -> InstanceParameters {
        InstanceParameters::new(3, vec![2, 2, 2], vec![2, 1, 1], 1, 0)
    }

    #[test]
    fn validation() {
        assert!(negative_spin_instance().validate().is_ok());
        let bad = InstanceParameters::new(3, vec![2, 2, 2], vec![2, 2, 1], 1, 0);
        assert!(matches!(
            bad.validate(),
            Err(RepRingError::InvalidParameters(_))
        ));
        let wrong_len = InstanceParameters::new(3, vec![2, 2], vec![2, 1], 1, 0);
        assert!(wrong_len.validate().is_err());
        let not_prime = InstanceParameters::new(9, vec![0; 9], vec![0; 9], 0, -1);
        assert!(not_prime.validate().is_err());
    }

    #[test]
    fn sigma_element_in_kernel() {
        let params = negative_spin_instance();
        let img = adams_constraint_image(&params, 2, &params.sigma_element()).unwrap();
        assert!(img.is_zero());
        assert!(adams_constraint_image(&params, 2, &RepRingElement::zero(3))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn matrix_agrees_with_direct_evaluation() {
        let params = negative_spin_instance();
        let ideal = params.ideal().unwrap();
        let a = adams_constraint_matrix(&params, 2).unwrap();
        assert_eq!(a.len(), 18);
        let beta = &(&RepRingElement::t(3).pow(2) * &RepRingElement::xi(3))
            - &RepRingElement::integer(3, 5);
        let v = ideal.coordinates(&beta).unwrap();
        let direct = ideal
            .coordinates(&adams_constraint_image(&params, 2, &beta).unwrap())
            .unwrap();
        assert_eq!(lattice::mat_vec(&a, &v), direct);
    }

    #[test]
    fn negative_spin_kernel_is_sigma_line() {
        let params = negative_spin_instance();
        let ker = solve_adams_kernel(&params, 2).unwrap();
        assert_eq!(ker.ambient_dimension, 18);
        assert_eq!(ker.rank(), 1);
        let s = params.sigma_element();
        assert!(ker.basis[0] == s || ker.basis[0] == -&s);
    }

    #[test]
    fn scalar_step_forces_zero_for_k3_pattern() {
        let s = specialize_scalar_step(&[0, 1, 1], 1, 3);
        assert_eq!(s.exponent, 1);
        // (1 + t + t²) − 3
        assert_eq!(s.obstruction, IntPolynomial::from_i64(&[-2, 1, 1]));
        assert!(s.a_forced_zero);
        // Σk − 1 = 0 and l = 0: identity holds, nothing forced.
        assert!(!specialize_scalar_step(&[1, 0, 0], 0, 3).a_forced_zero);
    }
}
