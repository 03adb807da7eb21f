//! Pseudofree ℤ₃ fixed-point counts compatible with the G-signature theorem.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::RigidityError;
use crate::dataset::ManifoldInvariants;

/// All (f₁, f₂) with f₁, f₂ ≤ χ(X) such that
///
/// * `8f₁ + 4f₂ = 18 + 18·b₊(X/ℤ₃) − 3σ(X) − 3χ(X)` (signature and Euler
///   relations combined; `4f₁ + 2f₂ = 9b₊(X/ℤ₃) − 3` for K3),
/// * σ(X/ℤ₃) = (σ(X) + ⅔(f₁ − f₂))/3 is an integer,
/// * and, for a homologically trivial action, f₁ − f₂ = 3σ(X).
pub fn enumerate_pseudofree_p3(
    quotient_b_plus: &BigInt,
    homologically_trivial: bool,
    manifold: &ManifoldInvariants,
) -> Result<Vec<(u64, u64)>, RigidityError> {
    if *quotient_b_plus != BigInt::from(1) && *quotient_b_plus != BigInt::from(3) {
        return Err(RigidityError::UnsupportedQuotient(quotient_b_plus.clone()));
    }
    if manifold.euler.is_negative() {
        return Err(RigidityError::BadBound(format!("χ = {}", manifold.euler)));
    }
    let bound = manifold
        .euler
        .to_u64()
        .ok_or_else(|| RigidityError::BadBound(format!("χ = {} is too large", manifold.euler)))?;
    let sigma = &manifold.signature;
    let rhs = BigInt::from(18) + quotient_b_plus * 18 - sigma * 3 - &manifold.euler * 3;
    let nine = BigInt::from(9);
    let mut out = Vec::new();
    for f1 in 0..=bound {
        for f2 in 0..=bound {
            let (a, b) = (BigInt::from(f1), BigInt::from(f2));
            if &a * 8 + &b * 4 != rhs {
                continue;
            }
            let diff = &a - &b;
            // 9σ(X/ℤ₃) = 3σ(X) + 2(f₁ − f₂)
            let nine_sigma_q: BigInt = sigma * 3 + &diff * 2;
            if !nine_sigma_q.mod_floor(&nine).is_zero() {
                continue;
            }
            if homologically_trivial && diff != sigma * 3 {
                continue;
            }
            out.push((f1, f2));
        }
    }
    Ok(out)
}
