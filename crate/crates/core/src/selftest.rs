//! The self-test battery: headline values, enumeration, the Adams kernel
//! instance, a contradiction corpus, property checks, algebraic identities
//! and the brute-force kernel oracle.
//!
//! Failures are report content, never errors.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{random_corpus, trivial_k3_corpus};
use crate::cyclo::{cyclotomic_polynomial, half_angle_csc, CyclotomicNumber};
use crate::dataset::{FixedPointDataset, ManifoldInvariants};
use crate::lefschetz::{
    euler_quotient_p3, k_vector, signature_quotient_p3, spin_index, spin_tuple, synthesize,
    uniform_spin, KVector,
};
use crate::oracle::{check_kernel, small_instances};
use crate::repring::{InstanceParameters, RepRingElement};
use crate::rigidity::{enumerate_pseudofree_p3, verdict, verify_prop41, Outcome};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelftestOptions {
    /// Signature of the K3 preset behind the `spin_index` item.
    pub k3_signature: i64,
    pub corpus_size: usize,
    pub property_size: usize,
    /// Largest Σmᵢ of the oracle instances.
    pub oracle_max_m: u64,
    pub oracle_bound: i64,
    pub seed: u64,
}

impl Default for SelftestOptions {
    fn default() -> Self {
        SelftestOptions {
            k3_signature: -16,
            corpus_size: 150,
            property_size: 150,
            oracle_max_m: 3,
            oracle_bound: 3,
            seed: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelftestItem {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelftestReport {
    pub passed: bool,
    pub items: Vec<SelftestItem>,
}

fn item(name: &str, result: Result<String, String>) -> SelftestItem {
    let (passed, detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    SelftestItem {
        name: name.into(),
        passed,
        detail,
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

pub fn check_spin_index(signature: i64) -> Result<String, String> {
    let mut m = ManifoldInvariants::k3();
    m.signature = signature.into();
    let index = spin_index(&m).map_err(|e| e.to_string())?;
    ensure(index == int(2), || {
        format!("−σ/8 = {index} for the K3 preset, expected 2")
    })?;
    Ok("−σ/8 = 2 for K3".into())
}

pub fn check_fermat() -> Result<String, String> {
    let d = FixedPointDataset::fermat_quartic();
    let v = verdict(&d).map_err(|e| e.to_string())?;
    let spin = v.spin.value.clone();
    ensure(spin == Some(int(2)), || {
        format!("spin number {spin:?}, expected 2")
    })?;
    let sigma = signature_quotient_p3(&d).map_err(|e| e.to_string())?;
    ensure(sigma == int(-4), || {
        format!("σ(X/ℤ₃) = {sigma}, expected −4")
    })?;
    let euler = euler_quotient_p3(&d).map_err(|e| e.to_string())?;
    ensure(euler == int(12), || {
        format!("χ(X/ℤ₃) = {euler}, expected 12")
    })?;
    let bm = v.quotient.as_ref().and_then(|q| q.b_minus.clone());
    ensure(bm == Some(int(7)), || {
        format!("b₋(X/ℤ₃) = {bm:?}, expected 7")
    })?;
    let k = v.k_vector.clone();
    ensure(k == Some(KVector::from_i64(3, &[2, 0, 0])), || {
        format!("k = {k:?}, expected (2, 0, 0)")
    })?;
    ensure(v.outcome == Outcome::NoObstruction, || {
        format!("outcome {}", v.outcome)
    })?;
    Ok("spin 2, σ = −4, χ = 12, b₋ = 7, k = (2, 0, 0), NoObstruction".into())
}

pub fn check_enumeration() -> Result<String, String> {
    let k3 = ManifoldInvariants::k3();
    let run = |b: i64, trivial: bool| {
        enumerate_pseudofree_p3(&BigInt::from(b), trivial, &k3).map_err(|e| e.to_string())
    };
    let one = run(1, false)?;
    ensure(one == vec![(0, 3)], || format!("b₊ = 1 gives {one:?}"))?;
    let three = run(3, false)?;
    ensure(three == vec![(0, 12), (3, 6), (6, 0)], || {
        format!("b₊ = 3 gives {three:?}")
    })?;
    for b in [1, 3] {
        let t = run(b, true)?;
        ensure(t.is_empty(), || {
            format!("trivial action with b₊ = {b} gives {t:?}")
        })?;
    }
    Ok("{(0,3)}, {(0,12),(3,6),(6,0)}, and ∅ for trivial actions".into())
}

pub fn check_adams_kernel() -> Result<String, String> {
    let params = InstanceParameters::new(3, vec![2, 2, 2], vec![2, 1, 1], 1, 0);
    let r = verify_prop41(&params).map_err(|e| e.to_string())?;
    ensure(r.ambient_dimension == Some(18), || {
        format!("dimension {:?}", r.ambient_dimension)
    })?;
    ensure(r.sigma_in_kernel == Some(true), || {
        "σ(1−t)⁵ is not in the kernel".into()
    })?;
    ensure(r.kernel_rank == Some(1), || {
        format!("kernel rank {:?}", r.kernel_rank)
    })?;
    ensure(r.spanned_by_sigma == Some(true), || {
        "kernel is not spanned by σ(1−t)⁵".into()
    })?;
    let forced = r.scalar_step.as_ref().is_some_and(|s| s.a_forced_zero);
    ensure(forced, || "scalar step does not force a = 0".into())?;
    ensure(r.sw_value == Some(BigInt::zero()), || {
        format!("SW = {:?}", r.sw_value)
    })?;
    Ok("18×18, kernel = ℤ·σ(1−t)⁵, a = 0, SW = 0".into())
}

/// Verdict outcome counts over the trivial K3 corpus; fails if any dataset
/// comes out NoObstruction.
pub fn check_contradiction_corpus(seed: u64, count: usize) -> Result<String, String> {
    let (mut contradictions, mut violations) = (0, 0);
    for (i, d) in trivial_k3_corpus(seed, count).iter().enumerate() {
        let v = verdict(d).map_err(|e| format!("dataset {i}: {e}"))?;
        match v.outcome {
            Outcome::Contradiction => contradictions += 1,
            Outcome::ConstraintViolation => violations += 1,
            Outcome::NoObstruction => {
                return Err(format!(
                    "dataset {i} evaluates to NoObstruction: {}",
                    d.to_json()
                ))
            }
        }
    }
    Ok(format!(
        "{count} datasets: {contradictions} Contradiction, {violations} ConstraintViolation"
    ))
}

/// Realness, power symmetry, p = 3 rationality, exact inversion and the
/// uniform-k spin formula on random data.
pub fn check_properties(seed: u64, count: usize) -> Result<String, String> {
    for (i, d) in random_corpus(seed, count, &[3, 5, 7]).iter().enumerate() {
        let s = spin_tuple(d).map_err(|e| format!("dataset {i}: {e}"))?;
        ensure(s.is_real(), || {
            format!("dataset {i}: spin numbers not real")
        })?;
        ensure(s.is_symmetric(), || {
            format!("dataset {i}: Spin(τ̂^j) ≠ Spin(τ̂^{{p−j}})")
        })?;
        if d.p == 3 {
            ensure(s.values.iter().all(CyclotomicNumber::is_rational), || {
                format!("dataset {i}: irrational spin number at p = 3")
            })?;
        }
        if let Ok(k) = k_vector(&s) {
            ensure(synthesize(&k) == s, || {
                format!("dataset {i}: synthesis does not invert")
            })?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for round in 0..count {
        let p = [3u64, 5, 7][round % 3];
        let mut k: Vec<i64> = (1..p).map(|_| rng.gen_range(-4..=4)).collect();
        let rest: i64 = k.iter().sum();
        k.insert(0, 2 - rest);
        let kv = KVector::from_i64(p, &k);
        let back = k_vector(&synthesize(&kv)).map_err(|e| e.to_string())?;
        ensure(back == kv, || {
            format!("k_vector(synthesize({kv})) = {back}")
        })?;
        let uniform = KVector::from_i64(p, &{
            let k1 = rng.gen_range(-3..=3);
            let mut u = vec![k1; p as usize];
            u[0] = 2 - (p as i64 - 1) * k1;
            u
        });
        let s = synthesize(&uniform).values[1]
            .to_rational()
            .map_err(|e| e.to_string())?;
        let want = uniform_spin(p, &uniform.k[0], &uniform.sum());
        ensure(s == want, || {
            format!("uniform {uniform}: spin {s}, formula {want}")
        })?;
    }
    Ok(format!(
        "{count} datasets and {count} k-vectors over p ∈ {{3, 5, 7}}"
    ))
}

pub fn check_identities() -> Result<String, String> {
    for p in [3u64, 5, 7] {
        let one = CyclotomicNumber::one(p);
        let prod = (1..p as i64).fold(one.clone(), |acc, j| {
            &acc * &(&one + &CyclotomicNumber::zeta_pow(p, j))
        });
        ensure(prod == one, || format!("∏(1 + ζ^j) = {prod} for p = {p}"))?;
        let sigma = RepRingElement::sigma(p);
        let base = &sigma * &RepRingElement::one_minus_t_xi(p, 0);
        for k in 1..p as i64 {
            let lhs = &sigma * &RepRingElement::one_minus_t_xi(p, k);
            ensure(lhs == base, || {
                format!("σ(1 − tξ^{k}) ≠ σ(1 − t) for p = {p}")
            })?;
        }
    }
    let c = half_angle_csc(1, 3).map_err(|e| e.to_string())?;
    let csc_sq = (&c * &c).to_rational().map_err(|e| e.to_string())?;
    ensure(csc_sq == BigRational::new(4.into(), 3.into()), || {
        format!("csc²(π/3) = {csc_sq}")
    })?;
    for n in 1..=60u64 {
        // ζₙ = ζ_{2n}², so the evaluation reduces modulo Φ_{2n}, not Φₙ
        let z = CyclotomicNumber::zeta_pow(2 * n, 2);
        let mut acc = CyclotomicNumber::zero(2 * n);
        for c in cyclotomic_polynomial(n).coeffs().iter().rev() {
            acc = &(&acc * &z)
                + &CyclotomicNumber::from_rational(2 * n, BigRational::from_integer(c.clone()));
        }
        ensure(acc.is_zero(), || format!("Φ_{n}(ζ_{n}) = {acc}"))?;
    }
    Ok("∏(1 + ζ_p^j) = 1, σ(1 − tξ^k) = σ(1 − t), csc²(π/3) = 4/3, Φₙ(ζₙ) = 0 for n ≤ 60".into())
}

pub fn check_oracle(max_m: u64, bound: i64) -> Result<String, String> {
    let instances = small_instances(max_m);
    for params in &instances {
        let r = check_kernel(params, &[2], bound).map_err(|e| e.to_string())?;
        ensure(r.agrees(), || {
            format!(
                "m = {:?}, n = {:?}, l = {}: kernel rank {}, box rank {}, basis in kernel {}, box solutions in span {}",
                params.m_vector, params.n_vector, params.l, r.kernel_rank, r.box_rank, r.basis_in_kernel, r.solutions_in_span
            )
        })?;
    }
    Ok(format!(
        "{} instances with Σmᵢ ≤ {max_m}, box [−{bound}, {bound}]",
        instances.len()
    ))
}

pub fn run(opts: &SelftestOptions) -> SelftestReport {
    let items = vec![
        item("spin_index", check_spin_index(opts.k3_signature)),
        item("fermat_quartic", check_fermat()),
        item("pseudofree_enumeration", check_enumeration()),
        item("adams_kernel", check_adams_kernel()),
        item(
            "contradiction_pipeline",
            check_contradiction_corpus(opts.seed, opts.corpus_size),
        ),
        item(
            "spin_properties",
            check_properties(opts.seed, opts.property_size),
        ),
        item("algebraic_identities", check_identities()),
        item(
            "kernel_oracle",
            check_oracle(opts.oracle_max_m, opts.oracle_bound),
        ),
    ];
    SelftestReport {
        passed: items.iter().all(|i| i.passed),
        items,
    }
}
