//! Exact arithmetic in cyclotomic fields ℚ(ζₙ).
//!
//! Elements are stored in the power basis `1, ζ, …, ζ^{φ(n)-1}` with rational
//! coordinates, always reduced modulo Φₙ, so equality at a fixed conductor is
//! coordinate equality.

mod poly;
mod trig;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use poly::{cyclotomic_polynomial, IntPolynomial};
pub(crate) use poly::{divisors, euler_phi, RatPoly};
pub use trig::{half_angle_cos, half_angle_csc};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycloError {
    #[error("conductor mismatch: {0} vs {1}")]
    ConductorMismatch(u64, u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("exponent {k} is not coprime to conductor {n}")]
    NotCoprime { k: i64, n: u64 },
    #[error("value is not rational")]
    NotRational,
    #[error("{m} is not a multiple of conductor {n}")]
    NotMultiple { m: u64, n: u64 },
    #[error("csc(π·{l}/{p}) is a pole")]
    Pole { l: i64, p: u64 },
    #[error("conductor must be positive")]
    ZeroConductor,
}

/// An element of ℚ(ζₙ).
#[derive(Clone, Debug)]
pub struct CyclotomicNumber {
    conductor: u64,
    coeffs: Vec<BigRational>,
}

impl CyclotomicNumber {
    pub fn zero(n: u64) -> Self {
        assert!(n >= 1, "conductor must be positive");
        CyclotomicNumber {
            conductor: n,
            coeffs: vec![BigRational::zero(); euler_phi(n) as usize],
        }
    }

    pub fn one(n: u64) -> Self {
        Self::from_rational(n, BigRational::one())
    }

    pub fn from_rational(n: u64, q: BigRational) -> Self {
        let mut z = Self::zero(n);
        z.coeffs[0] = q;
        z
    }

    pub fn from_integer(n: u64, k: i64) -> Self {
        Self::from_rational(n, BigRational::from_integer(k.into()))
    }

    /// Builds an element from power-basis coordinates, padding with zeros.
    /// Longer inputs are reduced modulo Φₙ.
    pub fn from_coeffs(n: u64, coeffs: Vec<BigRational>) -> Result<Self, CycloError> {
        if n == 0 {
            return Err(CycloError::ZeroConductor);
        }
        Ok(Self::reduce(n, coeffs))
    }

    /// ζₙ^k for any integer k.
    pub fn zeta_pow(n: u64, k: i64) -> Self {
        let e = k.rem_euclid(n as i64) as usize;
        let mut v = vec![BigRational::zero(); e + 1];
        v[e] = BigRational::one();
        Self::reduce(n, v)
    }

    pub fn zeta(n: u64) -> Self {
        Self::zeta_pow(n, 1)
    }

    /// Reduces a coefficient vector of arbitrary length modulo Φₙ.
    fn reduce(n: u64, mut v: Vec<BigRational>) -> Self {
        let phi = cyclotomic_polynomial(n);
        let d = phi.degree().unwrap();
        if v.len() > d {
            // Φₙ is monic: eliminate from the top.
            for k in (d..v.len()).rev() {
                let c = std::mem::take(&mut v[k]);
                if c.is_zero() {
                    continue;
                }
                for (i, pc) in phi.coeffs()[..d].iter().enumerate() {
                    if !pc.is_zero() {
                        v[k - d + i] -= &c * BigRational::from_integer(pc.clone());
                    }
                }
            }
        }
        v.resize(d, BigRational::zero());
        CyclotomicNumber {
            conductor: n,
            coeffs: v,
        }
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn check_same(&self, other: &Self) -> Result<(), CycloError> {
        if self.conductor != other.conductor {
            Err(CycloError::ConductorMismatch(
                self.conductor,
                other.conductor,
            ))
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, CycloError> {
        self.check_same(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(CyclotomicNumber {
            conductor: self.conductor,
            coeffs,
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, CycloError> {
        self.check_same(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(CyclotomicNumber {
            conductor: self.conductor,
            coeffs,
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, CycloError> {
        self.check_same(other)?;
        let n = self.coeffs.len();
        let mut out = vec![BigRational::zero(); 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Ok(Self::reduce(self.conductor, out))
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        CyclotomicNumber {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against Φₙ.
    pub fn inverse(&self) -> Result<Self, CycloError> {
        if self.is_zero() {
            return Err(CycloError::DivisionByZero);
        }
        let modulus = RatPoly::from_int(&cyclotomic_polynomial(self.conductor));
        let a = RatPoly::trimmed(self.coeffs.clone());
        // invariant: s_i * a ≡ r_i (mod Φₙ)
        let (mut r0, mut r1) = (modulus, a);
        let (mut s0, mut s1) = (RatPoly(Vec::new()), RatPoly(vec![BigRational::one()]));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = s0.sub(&q.mul(&s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        // Φₙ is irreducible, so r0 is a nonzero constant.
        debug_assert_eq!(r0.degree(), 0);
        let c = r0.0[0].clone();
        let inv: Vec<BigRational> = s0.0.into_iter().map(|x| x / &c).collect();
        Ok(Self::reduce(self.conductor, inv))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, CycloError> {
        self.try_mul(&other.inverse()?)
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, e: i64) -> Result<Self, CycloError> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(self.conductor);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        Ok(acc)
    }

    /// The automorphism ζ ↦ ζ^k.
    pub fn galois_apply(&self, k: i64) -> Result<Self, CycloError> {
        let n = self.conductor;
        if BigInt::from(k).gcd(&BigInt::from(n)) != BigInt::one() {
            return Err(CycloError::NotCoprime { k, n });
        }
        let k = k.rem_euclid(n as i64) as u64;
        let mut v = vec![BigRational::zero(); n as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                v[((i as u64 * k) % n) as usize] += c;
            }
        }
        Ok(Self::reduce(n, v))
    }

    /// Complex conjugation, ζ ↦ ζ^{-1}.
    pub fn conjugate(&self) -> Self {
        self.galois_apply(-1)
            .expect("-1 is coprime to every conductor")
    }

    pub fn is_real(&self) -> bool {
        self.conjugate() == *self
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    pub fn to_rational(&self) -> Result<BigRational, CycloError> {
        if self.is_rational() {
            Ok(self.coeffs[0].clone())
        } else {
            Err(CycloError::NotRational)
        }
    }

    /// Field trace down to ℚ: the sum of all Galois conjugates.
    pub fn trace(&self) -> BigRational {
        let n = self.conductor;
        let mut acc = Self::zero(n);
        for k in 1..=n.max(1) {
            if k.gcd(&n) == 1 {
                acc = &acc + &self.galois_apply(k as i64).unwrap();
            }
        }
        acc.to_rational().expect("trace is rational")
    }

    /// Field norm down to ℚ: the product of all Galois conjugates.
    pub fn norm(&self) -> BigRational {
        let n = self.conductor;
        let mut acc = Self::one(n);
        for k in 1..=n.max(1) {
            if k.gcd(&n) == 1 {
                acc = &acc * &self.galois_apply(k as i64).unwrap();
            }
        }
        acc.to_rational().expect("norm is rational")
    }

    /// Value-preserving embedding ζₙ ↦ ζₘ^{m/n}.
    pub fn embed_conductor(&self, m: u64) -> Result<Self, CycloError> {
        let n = self.conductor;
        if m == 0 || !m.is_multiple_of(n) {
            return Err(CycloError::NotMultiple { m, n });
        }
        if m == n {
            return Ok(self.clone());
        }
        let step = (m / n) as usize;
        let mut v = vec![BigRational::zero(); (self.coeffs.len().max(1) - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * step] = c.clone();
        }
        Ok(Self::reduce(m, v))
    }

    /// Rewrites the value at the smallest conductor whose field contains it.
    pub fn reduce_conductor(&self) -> Self {
        let n = self.conductor;
        for d in divisors(n) {
            if d == n {
                return self.clone();
            }
            if d % 4 == 2 {
                // ℚ(ζ_d) = ℚ(ζ_{d/2}), already tried
                continue;
            }
            if let Some(r) = self.restrict_to(d) {
                return r;
            }
        }
        self.clone()
    }

    /// Coordinates at conductor `d | n` if the value lies in ℚ(ζ_d).
    fn restrict_to(&self, d: u64) -> Option<Self> {
        let n = self.conductor;
        // ℚ(ζ_d) is the fixed field of {k : k ≡ 1 mod d}.
        let mut k = 1 + d;
        while k < n + d {
            let kk = k % n;
            if kk != 1 && kk.gcd(&n) == 1 && self.galois_apply(kk as i64).ok()? != *self {
                return None;
            }
            k += d;
        }
        let phi_d = euler_phi(d) as usize;
        let basis: Vec<Self> = (0..phi_d)
            .map(|i| Self::zeta_pow(d, i as i64).embed_conductor(n).unwrap())
            .collect();
        let x = solve_coordinates(&basis, self)?;
        Some(CyclotomicNumber {
            conductor: d,
            coeffs: x,
        })
    }

    /// Numeric value, for advisory output and test oracles only.
    pub fn to_complex_f64(&self) -> (f64, f64) {
        let n = self.conductor as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (i, c) in self.coeffs.iter().enumerate() {
            let cf = c.to_f64().unwrap_or(f64::NAN);
            let ang = 2.0 * std::f64::consts::PI * i as f64 / n;
            re += cf * ang.cos();
            im += cf * ang.sin();
        }
        (re, im)
    }

    /// Rational sign of a rational value, `None` otherwise.
    pub fn rational_sign(&self) -> Option<std::cmp::Ordering> {
        let q = self.to_rational().ok()?;
        Some(q.cmp(&BigRational::zero()))
    }
}

/// Least-squares-free exact solve of `Σ xᵢ·basisᵢ = target` over ℚ.
fn solve_coordinates(
    basis: &[CyclotomicNumber],
    target: &CyclotomicNumber,
) -> Option<Vec<BigRational>> {
    let rows = target.coeffs.len();
    let cols = basis.len();
    let mut m: Vec<Vec<BigRational>> = (0..rows)
        .map(|r| {
            let mut row: Vec<BigRational> = basis.iter().map(|b| b.coeffs[r].clone()).collect();
            row.push(target.coeffs[r].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, piv);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..=cols {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][cols].clone();
    }
    Some(x)
}

fn lcm(a: u64, b: u64) -> u64 {
    a / a.gcd(&b) * b
}

/// Brings two values to a common conductor.
pub fn common_conductor(
    a: &CyclotomicNumber,
    b: &CyclotomicNumber,
) -> (CyclotomicNumber, CyclotomicNumber) {
    let m = lcm(a.conductor, b.conductor);
    (a.embed_conductor(m).unwrap(), b.embed_conductor(m).unwrap())
}

impl PartialEq for CyclotomicNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            self.coeffs == other.coeffs
        } else {
            let (a, b) = common_conductor(self, other);
            a.coeffs == b.coeffs
        }
    }
}

impl Eq for CyclotomicNumber {}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<'a> $tr<&'a CyclotomicNumber> for &'a CyclotomicNumber {
            type Output = CyclotomicNumber;
            fn $method(self, rhs: &'a CyclotomicNumber) -> CyclotomicNumber {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr for CyclotomicNumber {
            type Output = CyclotomicNumber;
            fn $method(self, rhs: CyclotomicNumber) -> CyclotomicNumber {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        CyclotomicNumber {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        -&self
    }
}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
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
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    write!(f, "z{}", self.conductor)?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl Serialize for CyclotomicNumber {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("CyclotomicNumber", 2)?;
        s.serialize_field("conductor", &self.conductor)?;
        let coeffs: Vec<String> = self.coeffs.iter().map(ToString::to_string).collect();
        s.serialize_field("coeffs", &coeffs)?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for CyclotomicNumber {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            conductor: u64,
            coeffs: Vec<String>,
        }
        use serde::de::Error as _;
        let raw = Raw::deserialize(deserializer)?;
        let coeffs = raw
            .coeffs
            .iter()
            .map(|c| {
                c.parse::<BigRational>()
                    .map_err(|_| D::Error::custom(format!("bad coefficient {c:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        CyclotomicNumber::from_coeffs(raw.conductor, coeffs).map_err(D::Error::custom)
    }
}
