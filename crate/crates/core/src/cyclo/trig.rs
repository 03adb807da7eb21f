//! Exact half-angle trigonometric values at conductor 4p.

use num_rational::BigRational;

use super::{CycloError, CyclotomicNumber};

fn working_conductor(p: u64) -> u64 {
    4 * p
}

/// `sin(πl/p) = (ζ₂ₚ^l − ζ₂ₚ^{-l}) / 2i`, at conductor 4p.
fn half_angle_sin(l: i64, p: u64) -> CyclotomicNumber {
    let n = working_conductor(p);
    // ζ₂ₚ = ζ₄ₚ², i = ζ₄ₚ^p
    let diff = &CyclotomicNumber::zeta_pow(n, 2 * l) - &CyclotomicNumber::zeta_pow(n, -2 * l);
    let two_i = CyclotomicNumber::zeta_pow(n, p as i64).scale(&BigRational::from_integer(2.into()));
    diff.try_div(&two_i).expect("2i is a unit")
}

/// `csc(πl/p)` for `l ≢ 0 (mod p)`.
pub fn half_angle_csc(l: i64, p: u64) -> Result<CyclotomicNumber, CycloError> {
    if l.rem_euclid(p as i64) == 0 {
        return Err(CycloError::Pole { l, p });
    }
    half_angle_sin(l, p).inverse()
}

/// `cos(πl/p)`.
pub fn half_angle_cos(l: i64, p: u64) -> Result<CyclotomicNumber, CycloError> {
    let n = working_conductor(p);
    let sum = &CyclotomicNumber::zeta_pow(n, 2 * l) + &CyclotomicNumber::zeta_pow(n, -2 * l);
    Ok(sum.scale(&BigRational::new(1.into(), 2.into())))
}
