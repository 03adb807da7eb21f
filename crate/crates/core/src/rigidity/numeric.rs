//! Advisory decimal estimates of real cyclotomic values.

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_rational::BigRational;

use crate::cyclo::CyclotomicNumber;

const RM: RoundingMode = RoundingMode::ToEven;

fn rational_to_float(q: &BigRational, prec: usize, cc: &mut Consts) -> BigFloat {
    let num = BigFloat::parse(&q.numer().to_string(), Radix::Dec, prec, RM, cc);
    let den = BigFloat::parse(&q.denom().to_string(), Radix::Dec, prec, RM, cc);
    num.div(&den, prec, RM)
}

/// Real part Σ cᵢ cos(2πi/n), evaluated with `bits` of working precision.
pub fn real_part(x: &CyclotomicNumber, bits: usize) -> BigFloat {
    let prec = bits.max(64) + 32;
    let mut cc = Consts::new().expect("constant cache");
    let two_pi = cc.pi(prec, RM).mul(&BigFloat::from_u8(2, prec), prec, RM);
    let n = BigFloat::from_u64(x.conductor(), prec);
    let mut acc = BigFloat::from_u8(0, prec);
    for (i, c) in x.coeffs().iter().enumerate() {
        if num_traits::Zero::is_zero(c) {
            continue;
        }
        let angle = two_pi
            .mul(&BigFloat::from_u64(i as u64, prec), prec, RM)
            .div(&n, prec, RM);
        let term = rational_to_float(c, prec, &mut cc).mul(&angle.cos(prec, RM, &mut cc), prec, RM);
        acc = acc.add(&term, prec, RM);
    }
    acc
}

/// Decimal estimate of the real part, truncated to about `bits·log₁₀2`
/// significant digits, with its sign (`None` when it evaluates to zero).
pub fn estimate(x: &CyclotomicNumber, bits: usize) -> (String, Option<std::cmp::Ordering>) {
    let v = real_part(x, bits);
    let mut cc = Consts::new().expect("constant cache");
    let sign = if v.is_zero() {
        None
    } else if v.is_negative() {
        Some(std::cmp::Ordering::Less)
    } else {
        Some(std::cmp::Ordering::Greater)
    };
    let text = v
        .format(Radix::Dec, RM, &mut cc)
        .unwrap_or_else(|_| "NaN".to_string());
    let digits = ((bits as f64 * std::f64::consts::LOG10_2).ceil() as usize).max(1);
    (truncate_mantissa(&text, digits), sign)
}

fn truncate_mantissa(text: &str, digits: usize) -> String {
    let (mantissa, exp) = text.split_once('e').unwrap_or((text, "+0"));
    let mut out = String::new();
    let mut kept = 0;
    for ch in mantissa.chars() {
        if ch.is_ascii_digit() {
            if kept == digits {
                break;
            }
            kept += 1;
        }
        out.push(ch);
    }
    let out = out.trim_end_matches('.');
    match exp.parse::<i32>() {
        Ok(e) if (-6..=20).contains(&e) => positional(out, e),
        _ => format!("{out}e{exp}"),
    }
}

/// `d.ddd × 10^e` written without an exponent.
fn positional(mantissa: &str, e: i32) -> String {
    let (sign, body) = match mantissa.strip_prefix('-') {
        Some(rest) => ("-", rest),
        None => ("", mantissa),
    };
    let digits: String = body.chars().filter(char::is_ascii_digit).collect();
    let point = e + 1;
    let n = digits.len() as i32;
    let text = if point <= 0 {
        format!("0.{}{digits}", "0".repeat(-point as usize))
    } else if point >= n {
        format!("{digits}{}", "0".repeat((point - n) as usize))
    } else {
        format!(
            "{}.{}",
            &digits[..point as usize],
            &digits[point as usize..]
        )
    };
    format!("{sign}{text}")
}
