//! Acceptance battery: one PASS/FAIL line per criterion, non-zero exit if
//! any fails. Runs without the libtest harness so the lines always print.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spinrigid::corpus::{random_corpus, trivial_k3_corpus};
use spinrigid::cyclo::{cyclotomic_polynomial, half_angle_csc, CyclotomicNumber};
use spinrigid::dataset::{FixedPointDataset, ManifoldInvariants};
use spinrigid::lefschetz::{
    euler_quotient_p3, k_vector, signature_quotient_p3, spin_number, spin_tuple, synthesize,
    uniform_spin, KVector,
};
use spinrigid::oracle::{check_kernel, small_instances};
use spinrigid::repring::{
    adams_constraint_matrix, solve_adams_kernel, InstanceParameters, RepRingElement,
};
use spinrigid::rigidity::{enumerate_pseudofree_p3, verdict, verify_prop41, Outcome};

type Check = Result<String, String>;

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

fn within(start: Instant, limit: Duration) -> Result<String, String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:?}, limit {limit:?}"))?;
    Ok(format!("{:.3}s", t.as_secs_f64()))
}

fn fermat_quartic() -> Check {
    let start = Instant::now();
    let d = FixedPointDataset::fermat_quartic();
    let spin = spin_number(&d, 1).map_err(|e| e.to_string())?;
    ensure(spin == CyclotomicNumber::from_integer(3, 2), || {
        format!("spin number {spin}")
    })?;
    let sigma = signature_quotient_p3(&d).map_err(|e| e.to_string())?;
    ensure(sigma == int(-4), || format!("σ(X/ℤ₃) = {sigma}"))?;
    let euler = euler_quotient_p3(&d).map_err(|e| e.to_string())?;
    ensure(euler == int(12), || format!("χ(X/ℤ₃) = {euler}"))?;
    let k = k_vector(&spin_tuple(&d).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    ensure(k == KVector::from_i64(3, &[2, 0, 0]), || format!("k = {k}"))?;
    let v = verdict(&d).map_err(|e| e.to_string())?;
    ensure(v.outcome == Outcome::NoObstruction, || {
        format!("outcome {}", v.outcome)
    })?;
    let bm = v.quotient.and_then(|q| q.b_minus);
    ensure(bm == Some(int(7)), || format!("b₋(X/ℤ₃) = {bm:?}"))?;
    let t = within(start, Duration::from_secs(1))?;
    Ok(format!(
        "spin 2, σ = −4, b₋ = 7, χ = 12, k = (2, 0, 0), NoObstruction in {t}"
    ))
}

fn enumeration() -> Check {
    let start = Instant::now();
    let k3 = ManifoldInvariants::k3();
    let run = |b: i64, trivial| {
        enumerate_pseudofree_p3(&BigInt::from(b), trivial, &k3).map_err(|e| e.to_string())
    };
    let one = run(1, false)?;
    ensure(one == [(0, 3)], || format!("b₊ = 1: {one:?}"))?;
    let three = run(3, false)?;
    ensure(three == [(0, 12), (3, 6), (6, 0)], || {
        format!("b₊ = 3: {three:?}")
    })?;
    let t1 = run(1, true)?;
    let t3 = run(3, true)?;
    ensure(t1.is_empty() && t3.is_empty(), || {
        format!("trivial: {t1:?}, {t3:?}")
    })?;
    let t = within(start, Duration::from_secs(1))?;
    Ok(format!(
        "{{(0,3)}}, {{(0,12),(3,6),(6,0)}}, ∅ when trivial, in {t}"
    ))
}

fn adams_kernel() -> Check {
    let start = Instant::now();
    let params = InstanceParameters::new(3, vec![2, 2, 2], vec![2, 1, 1], 1, 0);
    let a = adams_constraint_matrix(&params, 2).map_err(|e| e.to_string())?;
    ensure(a.len() == 18 && a.iter().all(|r| r.len() == 18), || {
        format!("matrix {}×{}", a.len(), a[0].len())
    })?;
    let ker = solve_adams_kernel(&params, 2).map_err(|e| e.to_string())?;
    let ideal = params.ideal().map_err(|e| e.to_string())?;
    let sigma5 = &RepRingElement::sigma(3) * &RepRingElement::one_minus_t_xi(3, 0).pow(5);
    let contains = ker.contains(&ideal, &sigma5).map_err(|e| e.to_string())?;
    ensure(contains, || "σ(1−t)⁵ is not in the kernel".into())?;
    ensure(ker.rank() == 1, || format!("kernel rank {}", ker.rank()))?;
    let coords = ideal.coordinates(&sigma5).map_err(|e| e.to_string())?;
    let spans = ker.coordinates[0] == coords
        || ker.coordinates[0] == coords.iter().map(|x| -x).collect::<Vec<_>>();
    ensure(spans, || "the kernel generator is not ±σ(1−t)⁵".into())?;
    let r = verify_prop41(&params).map_err(|e| e.to_string())?;
    let forced = r
        .scalar_step
        .as_ref()
        .is_some_and(|s| s.q == 3 && s.a_forced_zero);
    ensure(forced, || format!("scalar step {:?}", r.scalar_step))?;
    ensure(r.sw_value == Some(BigInt::zero()), || {
        format!("SW = {:?}", r.sw_value)
    })?;
    let t = within(start, Duration::from_secs(1))?;
    Ok(format!(
        "18×18, kernel = ℤ·σ(1−t)⁵, q = p step forces a = 0, SW = 0, in {t}"
    ))
}

fn contradiction_pipeline() -> Check {
    let corpus = trivial_k3_corpus(2024, 600);
    let (mut isolated, mut surfaces, mut mixed) = (0, 0, 0);
    let (mut contradictions, mut violations) = (0, 0);
    for (i, d) in corpus.iter().enumerate() {
        ensure(
            d.homologically_trivial && d.p == 3 && d.manifold.is_homotopy_k3(),
            || format!("dataset {i} is off-spec"),
        )?;
        ensure(
            d.surfaces
                .iter()
                .all(|s| s.genus.is_zero() && s.self_intersection <= BigInt::zero()),
            || format!("dataset {i} has a surface of positive genus or self-intersection"),
        )?;
        match (d.isolated.is_empty(), d.surfaces.is_empty()) {
            (false, true) => isolated += 1,
            (true, false) => surfaces += 1,
            (false, false) => mixed += 1,
            (true, true) => {}
        }
        let v = verdict(d).map_err(|e| format!("dataset {i}: {e}"))?;
        match v.outcome {
            Outcome::Contradiction => contradictions += 1,
            Outcome::ConstraintViolation => violations += 1,
            Outcome::NoObstruction => {
                return Err(format!("dataset {i} is NoObstruction: {}", d.to_json()))
            }
        }
    }
    ensure(isolated > 0 && surfaces > 0 && mixed > 0, || {
        format!("shapes {isolated}/{surfaces}/{mixed}")
    })?;
    ensure(contradictions > 0, || {
        "no dataset reached the contradiction".into()
    })?;
    Ok(format!(
        "{} datasets ({isolated} isolated-only, {surfaces} surfaces-only, {mixed} mixed): \
         {contradictions} Contradiction, {violations} ConstraintViolation, 0 NoObstruction",
        corpus.len()
    ))
}

fn properties() -> Check {
    let corpus = random_corpus(77, 1200, &[3, 5, 7]);
    let mut uniform_checked = 0;
    for (i, d) in corpus.iter().enumerate() {
        let s = spin_tuple(d).map_err(|e| format!("dataset {i}: {e}"))?;
        ensure(s.is_real(), || {
            format!("dataset {i}: a spin number is not real")
        })?;
        ensure(s.is_symmetric(), || {
            format!("dataset {i}: Spin(τ̂^j) ≠ Spin(τ̂^(p−j))")
        })?;
        if d.p == 3 {
            ensure(s.values.iter().all(CyclotomicNumber::is_rational), || {
                format!("dataset {i}: irrational at p = 3")
            })?;
        }
        if let Ok(k) = k_vector(&s) {
            if k.is_uniform() {
                let want = uniform_spin(d.p, &k.k[0], &k.sum());
                let got = s.values[1]
                    .to_rational()
                    .map_err(|e| format!("dataset {i}: {e}"))?;
                ensure(got == want, || {
                    format!("dataset {i}: uniform k {k} gives {got}, formula {want}")
                })?;
                uniform_checked += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(78);
    for round in 0..1200 {
        let p = [3u64, 5, 7][round % 3];
        let mut k: Vec<i64> = (1..p).map(|_| rng.gen_range(-5..=5)).collect();
        let head: i64 = k.iter().sum();
        k.insert(0, 2 - head);
        let kv = KVector::from_i64(p, &k);
        let back = k_vector(&synthesize(&kv)).map_err(|e| e.to_string())?;
        ensure(back == kv, || {
            format!("k_vector(synthesize({kv})) = {back}")
        })?;
        let k1 = rng.gen_range(-5..=5);
        let mut u = vec![k1; p as usize];
        u[0] = 2 - (p as i64 - 1) * k1;
        let uv = KVector::from_i64(p, &u);
        let got = synthesize(&uv).values[1]
            .to_rational()
            .map_err(|e| e.to_string())?;
        let want = uniform_spin(p, &uv.k[0], &uv.sum());
        ensure(got == want, || format!("uniform {uv}: {got} vs {want}"))?;
    }
    Ok(format!(
        "{} datasets (realness, symmetry, p = 3 rationality; {uniform_checked} with uniform k), \
         1200 inversion and 1200 uniform-formula k-vectors",
        corpus.len()
    ))
}

fn identities() -> Check {
    for p in [3u64, 5, 7] {
        let one = CyclotomicNumber::one(p);
        let mut prod = one.clone();
        for j in 1..p as i64 {
            prod = &prod * &(&one + &CyclotomicNumber::zeta_pow(p, j));
        }
        ensure(prod == one, || format!("∏(1 + ζ^j) = {prod} at p = {p}"))?;
        let sigma = RepRingElement::sigma(p);
        let base = &sigma * &RepRingElement::one_minus_t_xi(p, 0);
        for k in 0..p as i64 {
            ensure(
                &sigma * &RepRingElement::one_minus_t_xi(p, k) == base,
                || format!("σ(1 − tξ^{k}) at p = {p}"),
            )?;
        }
    }
    let c = half_angle_csc(1, 3).map_err(|e| e.to_string())?;
    let sq = (&c * &c).to_rational().map_err(|e| e.to_string())?;
    ensure(sq == BigRational::new(4.into(), 3.into()), || {
        format!("csc²(π/3) = {sq}")
    })?;
    for n in 1..=60u64 {
        for scale in [1u64, 2, 3] {
            // evaluate at ζₙ written inside Q(ζ_{scale·n})
            let m = scale * n;
            let z = CyclotomicNumber::zeta_pow(m, scale as i64);
            let mut acc = CyclotomicNumber::zero(m);
            for c in cyclotomic_polynomial(n).coeffs().iter().rev() {
                acc = &(&acc * &z)
                    + &CyclotomicNumber::from_rational(m, BigRational::from_integer(c.clone()));
            }
            ensure(acc.is_zero(), || format!("Φ_{n}(ζ_{n}) ≠ 0 in Q(ζ_{m})"))?;
        }
    }
    Ok("∏(1 + ζ_p^j) = 1, σ(1 − tξ^k) = σ(1 − t), csc²(π/3) = 4/3, Φₙ(ζₙ) = 0 for n ≤ 60".into())
}

fn oracle() -> Check {
    let start = Instant::now();
    let instances = small_instances(3);
    let mut nontrivial = 0;
    for params in &instances {
        let r = check_kernel(params, &[2], 3).map_err(|e| e.to_string())?;
        ensure(r.agrees(), || format!("disagreement: {r:?}"))?;
        if r.kernel_rank > 0 {
            nontrivial += 1;
        }
    }
    let t = within(start, Duration::from_secs(30))?;
    Ok(format!(
        "{} instances with p = 3, Σmᵢ ≤ 3 ({nontrivial} with nonzero kernel), box [−3, 3], in {t}",
        instances.len()
    ))
}

type CheckFn = fn() -> Check;

fn main() {
    let criteria: [(&str, CheckFn); 7] = [
        ("Fermat quartic regression", fermat_quartic),
        ("pseudofree enumeration", enumeration),
        ("Adams kernel and SW vanishing", adams_kernel),
        ("contradiction pipeline", contradiction_pipeline),
        ("property suites", properties),
        ("algebraic identities", identities),
        ("kernel oracle equivalence", oracle),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {detail}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
