//! Brute-force cross-check of the integer kernel solver.
//!
//! Every vector of the box [−b, b]ⁿ is considered; the ones with A·v = 0 must
//! lie in the ℤ-span of the solver's basis and must span a lattice of the
//! same rank.

use std::collections::HashMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::repring::{
    adams_constraint_matrix, lattice, solve_adams_kernel_multi, InstanceParameters, RepRingError,
};

/// Prime for the rank computation of the box solutions.
const MODULUS: i64 = 1_000_000_007;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub parameters: InstanceParameters,
    pub qs: Vec<u64>,
    pub dimension: usize,
    pub bound: i64,
    pub kernel_rank: usize,
    /// nonzero box vectors with A·v = 0
    pub box_solutions: u64,
    pub box_rank: usize,
    pub basis_in_kernel: bool,
    pub solutions_in_span: bool,
}

impl OracleReport {
    pub fn agrees(&self) -> bool {
        self.basis_in_kernel && self.solutions_in_span && self.box_rank == self.kernel_rank
    }
}

fn to_i64(rows: &[Vec<BigInt>]) -> Option<Vec<Vec<i64>>> {
    rows.iter()
        .map(|r| r.iter().map(|x| i64::try_from(x).ok()).collect())
        .collect()
}

/// Incremental row echelon form over 𝔽_MODULUS.
struct ModRank {
    rows: Vec<(usize, Vec<i64>)>,
}

fn inv_mod(a: i64) -> i64 {
    let (mut base, mut e, mut acc) = (a.rem_euclid(MODULUS), MODULUS - 2, 1i64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % MODULUS;
        }
        base = base * base % MODULUS;
        e >>= 1;
    }
    acc
}

impl ModRank {
    fn insert(&mut self, v: &[i64]) {
        let mut v: Vec<i64> = v.iter().map(|x| x.rem_euclid(MODULUS)).collect();
        for (pc, row) in &self.rows {
            let f = v[*pc];
            if f != 0 {
                for (x, y) in v.iter_mut().zip(row) {
                    *x = (*x - f * y).rem_euclid(MODULUS);
                }
            }
        }
        if let Some(pc) = v.iter().position(|&x| x != 0) {
            let inv = inv_mod(v[pc]);
            for x in v.iter_mut() {
                *x = *x * inv % MODULUS;
            }
            self.rows.push((pc, v));
        }
    }
}

/// Whether `x` is an integer combination of an echelon (HNF) basis.
fn in_hnf_span(basis: &[(usize, Vec<i64>)], x: &[i64]) -> bool {
    let mut rest = x.to_vec();
    for (pc, row) in basis {
        let piv = row[*pc];
        if rest[*pc] % piv != 0 {
            return false;
        }
        let q = rest[*pc] / piv;
        for (s, v) in rest.iter_mut().zip(row) {
            *s -= q * v;
        }
    }
    rest.iter().all(|&v| v == 0)
}

/// Compares the stacked Adams kernel for `qs` with the box [−bound, bound]ⁿ.
pub fn check_kernel(
    params: &InstanceParameters,
    qs: &[u64],
    bound: i64,
) -> Result<OracleReport, RepRingError> {
    let kernel = solve_adams_kernel_multi(params, qs)?;
    let mut a = Vec::new();
    for &q in qs {
        a.extend(adams_constraint_matrix(params, q)?);
    }
    let n = kernel.ambient_dimension;
    let basis_in_kernel = kernel.coordinates.iter().all(|b| {
        lattice::mat_vec(&a, b)
            .iter()
            .all(|x| x == &BigInt::from(0))
    });
    let too_big =
        || RepRingError::InvalidParameters("entries exceed the oracle's machine range".into());
    let a64 = to_i64(&a).ok_or_else(too_big)?;
    let basis: Vec<(usize, Vec<i64>)> = to_i64(&kernel.coordinates)
        .ok_or_else(too_big)?
        .into_iter()
        .map(|r| (r.iter().position(|&x| x != 0).unwrap_or(0), r))
        .collect();

    // Every box vector is a left half (first h coordinates) and a right half;
    // A·v = 0 exactly when A·left = −A·right, so the halves are matched
    // through a table instead of walking all (2b + 1)ⁿ vectors one by one.
    let h = n / 2 + n % 2;
    let cols: Vec<Vec<i64>> = (0..n).map(|j| a64.iter().map(|r| r[j]).collect()).collect();
    let mut table: HashMap<Vec<i64>, Vec<Vec<i64>>> = HashMap::new();
    for (v, av) in box_points(&cols[..h], a64.len(), bound) {
        table.entry(av).or_default().push(v);
    }
    let mut solutions = 0u64;
    let mut in_span = true;
    let mut rank = ModRank { rows: Vec::new() };
    for (right, av) in box_points(&cols[h..], a64.len(), bound) {
        let key: Vec<i64> = av.iter().map(|x| -x).collect();
        for left in table.get(&key).into_iter().flatten() {
            let v: Vec<i64> = left.iter().chain(&right).copied().collect();
            if v.iter().all(|&x| x == 0) {
                continue;
            }
            solutions += 1;
            in_span &= in_hnf_span(&basis, &v);
            if rank.rows.len() < n {
                rank.insert(&v);
            }
        }
    }
    Ok(OracleReport {
        parameters: params.clone(),
        qs: qs.to_vec(),
        dimension: n,
        bound,
        kernel_rank: kernel.rank(),
        box_solutions: solutions,
        box_rank: rank.rows.len(),
        basis_in_kernel,
        solutions_in_span: in_span,
    })
}

/// All v ∈ [−b, b]^k for the k given columns, each with Σ vⱼ·colⱼ.
fn box_points(cols: &[Vec<i64>], rows: usize, bound: i64) -> Vec<(Vec<i64>, Vec<i64>)> {
    let k = cols.len();
    let mut v = vec![-bound; k];
    let mut av = vec![0i64; rows];
    for c in cols {
        for (x, y) in av.iter_mut().zip(c) {
            *x -= bound * y;
        }
    }
    let mut out = Vec::new();
    loop {
        out.push((v.clone(), av.clone()));
        let mut j = 0;
        loop {
            if j == k {
                return out;
            }
            if v[j] < bound {
                v[j] += 1;
                for (x, c) in av.iter_mut().zip(&cols[j]) {
                    *x += c;
                }
                break;
            }
            v[j] = -bound;
            for (x, c) in av.iter_mut().zip(&cols[j]) {
                *x -= 2 * bound * c;
            }
            j += 1;
        }
    }
}

/// p = 3, d = 0 instances with 1 ≤ Σmᵢ ≤ `max_m`: every m-vector, every
/// l ≥ 0 and every n-vector with l + Σnᵢ = Σmᵢ − 1.
pub fn small_instances(max_m: u64) -> Vec<InstanceParameters> {
    let triples = |total: u64| {
        let mut out = Vec::new();
        for a in 0..=total {
            for b in 0..=total - a {
                out.push(vec![a, b, total - a - b]);
            }
        }
        out
    };
    let mut out = Vec::new();
    for m in 1..=max_m {
        for mv in triples(m) {
            for l in 0..m {
                for nv in triples(m - 1 - l) {
                    out.push(InstanceParameters::new(3, mv.clone(), nv, l, 0));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instance_count() {
        // Σm = 1: 3 m-vectors × (l = 0, n = 0); Σm = 2: 6 × (3 + 1)
        assert_eq!(small_instances(1).len(), 3);
        assert_eq!(small_instances(2).len(), 3 + 24);
        assert!(small_instances(2).iter().all(|p| p.validate().is_ok()));
    }

    #[test]
    fn small_instances_agree() {
        for params in small_instances(2) {
            let r = check_kernel(&params, &[2], 2).unwrap();
            assert!(r.agrees(), "{r:?}");
        }
    }

    #[test]
    fn box_points_cover_the_box() {
        let pts = box_points(&[vec![1], vec![10]], 1, 1);
        assert_eq!(pts.len(), 9);
        assert!(pts.iter().all(|(v, av)| av[0] == v[0] + 10 * v[1]));
    }

    #[test]
    fn mod_rank() {
        let mut r = ModRank { rows: Vec::new() };
        r.insert(&[2, 4]);
        r.insert(&[1, 2]);
        assert_eq!(r.rows.len(), 1);
        r.insert(&[0, 3]);
        assert_eq!(r.rows.len(), 2);
    }
}
