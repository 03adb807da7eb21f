//! The vanishing argument for negative spin numbers: the Adams kernel is the
//! line through σ(1−t)^{m−1}, and the scalar step kills its coefficient.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::RigidityError;
use crate::lefschetz::KVector;
use crate::report::{de_bigint_opt, ser_bigint_opt};
use crate::repring::{
    extract_sw, solve_adams_kernel_multi, specialize_scalar_step, InstanceParameters, RepRingError,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarStepReport {
    pub q: u64,
    /// a·p·c(t) = 0 must hold for this c
    pub obstruction: String,
    pub a_forced_zero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prop41Report {
    pub parameters: InstanceParameters,
    pub hypotheses_met: bool,
    pub qs: Vec<u64>,
    pub ambient_dimension: Option<usize>,
    pub kernel_rank: Option<usize>,
    pub sigma_in_kernel: Option<bool>,
    pub spanned_by_sigma: Option<bool>,
    pub scalar_step: Option<ScalarStepReport>,
    #[serde(serialize_with = "ser_bigint_opt", deserialize_with = "de_bigint_opt")]
    pub sw_value: Option<BigInt>,
    pub notes: Vec<String>,
}

impl Prop41Report {
    /// SW of the trivial spin^c structure is shown to vanish, either from the
    /// kernel computation or because the only other branch is excluded.
    pub fn sw_vanishes(&self) -> bool {
        self.sw_value.as_ref().is_some_and(Zero::is_zero) || self.k1_two_branch()
    }

    fn k1_two_branch(&self) -> bool {
        let k = self.parameters.k_vector();
        self.hypotheses_met && k.len() > 1 && k[1] == 2
    }
}

/// Minimal (mᵢ, nᵢ) with mᵢ − nᵢ = kᵢ, padded uniformly until the truncation
/// has degree at least 2 and m₀ ≥ d.
pub fn derive_parameters(k: &KVector, l: u64, d: i64) -> Result<InstanceParameters, RigidityError> {
    let ks = k.to_i64().ok_or_else(|| {
        RepRingError::InvalidParameters(format!("k-vector {k} out of machine range"))
    })?;
    let mut pad = 0u64;
    loop {
        let m: Vec<u64> = ks.iter().map(|&x| x.max(0) as u64 + pad).collect();
        let n: Vec<u64> = ks.iter().map(|&x| (-x).max(0) as u64 + pad).collect();
        let params = InstanceParameters::new(k.p, m, n, l, d);
        if params.truncation_degree() >= 2 && params.m_vector[0] as i64 >= d {
            params.validate()?;
            return Ok(params);
        }
        pad += 1;
    }
}

pub fn verify_prop41(params: &InstanceParameters) -> Result<Prop41Report, RigidityError> {
    verify_prop41_with(params, &[2])
}

/// Kernel of the Adams constraint over `qs`, the span check against
/// σ(1−t)^{m−1}, the scalar step at q = p and the resulting SW value.
pub fn verify_prop41_with(
    params: &InstanceParameters,
    qs: &[u64],
) -> Result<Prop41Report, RigidityError> {
    params.validate()?;
    let k = params.k_vector();
    let mut report = Prop41Report {
        parameters: params.clone(),
        hypotheses_met: false,
        qs: qs.to_vec(),
        ambient_dimension: None,
        kernel_rank: None,
        sigma_in_kernel: None,
        spanned_by_sigma: None,
        scalar_step: None,
        sw_value: None,
        notes: Vec::new(),
    };
    let uniform = k[1..].windows(2).all(|w| w[0] == w[1]);
    if k[0] > params.l as i64 || !uniform {
        report.notes.push(format!(
            "hypotheses not met: need k0 ≤ l = {} and k1 = … = k{}, got {:?}; no conclusion",
            params.l,
            params.p - 1,
            k
        ));
        return Ok(report);
    }
    report.hypotheses_met = true;

    let ideal = params.ideal()?;
    let kernel = solve_adams_kernel_multi(params, qs)?;
    let sigma = params.sigma_element();
    let sigma_coords = ideal.coordinates(&sigma)?;
    let neg: Vec<BigInt> = sigma_coords.iter().map(|x| -x).collect();
    let spanned = kernel.rank() == 1
        && (kernel.coordinates[0] == sigma_coords || kernel.coordinates[0] == neg);
    report.ambient_dimension = Some(kernel.ambient_dimension);
    report.kernel_rank = Some(kernel.rank());
    report.sigma_in_kernel = Some(kernel.contains(&ideal, &sigma)?);
    report.spanned_by_sigma = Some(spanned);

    let step = specialize_scalar_step(&k, params.l, params.p);
    report.scalar_step = Some(ScalarStepReport {
        q: step.q,
        obstruction: step.obstruction.to_string(),
        a_forced_zero: step.a_forced_zero,
    });

    // β = a·σ(1−t)^{m−1}; SW is the T^{m−d−1} coefficient of β at ξ = 1.
    let unit = extract_sw(&sigma, params.m() as i64, params.d)?;
    if spanned {
        if step.a_forced_zero {
            let a = BigInt::zero();
            report.sw_value = Some(a * &unit);
        } else {
            report
                .notes
                .push(format!("a is not determined; SW = a·{unit}"));
        }
    } else if k[1] == 2 {
        report.notes.push(format!(
            "k1 = 2: the kernel has rank {} here, but the lift e^{{2πi/p}}τ̂ then has k-vector \
             {:?} with non-negative spin number, which forces (2, 0, …, 0); this branch cannot occur",
            kernel.rank(),
            KVector::from_i64(params.p, &k).shift(1).k,
        ));
    } else {
        report.notes.push(format!(
            "kernel has rank {}, not spanned by σ(1−t)^{}; no conclusion",
            kernel.rank(),
            params.m() - 1
        ));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negative_spin_instance() {
        let p = InstanceParameters::new(3, vec![2, 2, 2], vec![2, 1, 1], 1, 0);
        let r = verify_prop41(&p).unwrap();
        assert!(r.hypotheses_met);
        assert_eq!(r.ambient_dimension, Some(18));
        assert_eq!(r.kernel_rank, Some(1));
        assert_eq!(r.sigma_in_kernel, Some(true));
        assert_eq!(r.spanned_by_sigma, Some(true));
        assert!(r.scalar_step.as_ref().unwrap().a_forced_zero);
        assert_eq!(r.sw_value, Some(BigInt::zero()));
        assert!(r.sw_vanishes());
    }

    #[test]
    fn broken_relation_is_an_error() {
        let p = InstanceParameters::new(3, vec![2, 2, 2], vec![2, 2, 1], 1, 0);
        assert!(matches!(verify_prop41(&p), Err(RigidityError::RepRing(_))));
    }

    #[test]
    fn trivial_pattern_is_out_of_scope() {
        let params = derive_parameters(&KVector::from_i64(3, &[2, 0, 0]), 1, 0).unwrap();
        let r = verify_prop41(&params).unwrap();
        assert!(!r.hypotheses_met);
        assert!(r.notes[0].starts_with("hypotheses not met"));
        assert_eq!(r.kernel_rank, None);
        assert!(!r.sw_vanishes());
    }

    #[test]
    fn derived_parameters() {
        let params = derive_parameters(&KVector::from_i64(3, &[0, 1, 1]), 1, 0).unwrap();
        assert_eq!(
            (params.m_vector.clone(), params.n_vector.clone()),
            (vec![0, 1, 1], vec![0, 0, 0])
        );
        let r = verify_prop41(&params).unwrap();
        assert_eq!(r.kernel_rank, Some(1));
        assert_eq!(r.sw_value, Some(BigInt::zero()));
        let p5 = derive_parameters(&KVector::from_i64(5, &[-2, 1, 1, 1, 1]), 1, 0).unwrap();
        assert_eq!(verify_prop41(&p5).unwrap().sw_value, Some(BigInt::zero()));
        assert!(derive_parameters(&KVector::from_i64(3, &[0, 1, 1]), 2, 0).is_err());
    }

    #[test]
    fn k1_two_branch_is_excluded() {
        let params = derive_parameters(&KVector::from_i64(3, &[-2, 2, 2]), 1, 0).unwrap();
        let r = verify_prop41(&params).unwrap();
        assert_eq!(r.kernel_rank, Some(3));
        assert_eq!(r.spanned_by_sigma, Some(false));
        assert_eq!(r.sigma_in_kernel, Some(true));
        assert_eq!(r.sw_value, None);
        assert!(r.sw_vanishes());
        assert!(r.notes.iter().any(|n| n.starts_with("k1 = 2")));
    }
}
