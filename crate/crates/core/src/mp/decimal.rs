//! Decimal formatting and parsing for [`MpReal`].
//!
//! Dyadic rationals have finite decimal expansions, so the exact forms here
//! round-trip without loss; checkpoints rely on that.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};

use super::MpReal;
use crate::error::{Error, Result};

fn pow10(d: u64) -> BigUint {
    Pow::pow(BigUint::from(10u32), d)
}

fn pow5(d: u64) -> BigUint {
    Pow::pow(BigUint::from(5u32), d)
}

/// Exact decimal string of `man * 2^exp`, trailing fractional zeros trimmed.
fn dyadic_to_decimal(man: &BigInt, exp: i64) -> String {
    let neg = man.is_negative();
    let mag = man.magnitude();
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if exp >= 0 {
        out.push_str(&(mag << exp as u64).to_str_radix(10));
        return out;
    }
    let m = (-exp) as u64;
    let digits = (mag * pow5(m)).to_str_radix(10);
    out.push_str(&insert_point(&digits, m as usize));
    trim_fraction(out)
}

fn insert_point(digits: &str, frac: usize) -> String {
    if frac == 0 {
        return digits.to_string();
    }
    let padded = if digits.len() <= frac {
        format!("{}{}", "0".repeat(frac + 1 - digits.len()), digits)
    } else {
        digits.to_string()
    };
    let split = padded.len() - frac;
    format!("{}.{}", &padded[..split], &padded[split..])
}

fn trim_fraction(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    if t == "-0" {
        "0".to_string()
    } else {
        t.to_string()
    }
}

impl MpReal {
    /// Exact decimal expansion of the midpoint.
    pub fn to_decimal_exact(&self) -> String {
        dyadic_to_decimal(self.mantissa(), self.exponent())
    }

    /// Exact decimal expansion of the error bound.
    pub fn err_to_decimal_exact(&self) -> String {
        dyadic_to_decimal(&BigInt::from(self.radius().clone()), self.exponent())
    }

    /// Number of fractional decimal digits `d` with `err <= 0.5 * 10^-d`.
    pub fn guaranteed_decimals(&self) -> Option<u64> {
        if self.is_exact() {
            return None;
        }
        let e = self.exponent();
        if e >= 0 {
            return Some(0);
        }
        let m = (-e) as u64;
        let twice = self.radius() << 1u32;
        let denom = BigUint::one() << m;
        // 2 * rad * 10^d <= 2^m
        let ok = |d: u64| &twice * pow10(d) <= denom;
        let est = ((m as f64 - twice.bits() as f64) * std::f64::consts::LOG10_2).floor();
        let mut d = est.max(0.0) as u64;
        while d > 0 && !ok(d) {
            d -= 1;
        }
        if !ok(d) {
            return Some(0);
        }
        while ok(d + 1) {
            d += 1;
        }
        Some(d)
    }

    /// Midpoint printed only to the digits the error bound guarantees
    /// (rounded to nearest); exact values print in full.
    pub fn to_decimal_guaranteed(&self) -> String {
        let Some(d) = self.guaranteed_decimals() else {
            return self.to_decimal_exact();
        };
        let scaled: BigInt = if self.exponent() >= 0 {
            (self.mantissa() * BigInt::from(pow10(d))) << self.exponent() as u64
        } else {
            let m = (-self.exponent()) as u64;
            let num: BigInt = self.mantissa() * BigInt::from(pow10(d)) * 2 + (BigInt::one() << m);
            Integer::div_floor(&num, &(BigInt::one() << (m + 1)))
        };
        let neg = scaled.is_negative();
        let digits = insert_point(&scaled.magnitude().to_str_radix(10), d as usize);
        if neg {
            format!("-{digits}")
        } else {
            digits
        }
    }

    /// Error bound in scientific notation with `sig` significant digits,
    /// rounded upward.
    pub fn err_to_sci(&self) -> String {
        upper_sci(self.radius(), self.exponent(), 3)
    }

    /// Upper bound of `|x|` (midpoint magnitude plus error), scientific and
    /// rounded upward.
    pub fn upper_abs_to_sci(&self) -> String {
        let u = self.upper_abs();
        upper_sci(u.mantissa().magnitude(), u.exponent(), 3)
    }

    /// Parse a decimal literal that denotes an exact dyadic rational
    /// (as produced by [`MpReal::to_decimal_exact`]).
    pub fn from_decimal_exact(s: &str) -> Result<Self> {
        let (num, frac) = parse_decimal_parts(s)?;
        if frac == 0 {
            return Ok(MpReal::exact(num, 0));
        }
        let five = BigInt::from(pow5(frac));
        let (q, r) = num.div_rem(&five);
        if !r.is_zero() {
            return Err(Error::Parse(format!("'{s}' is not a dyadic rational")));
        }
        Ok(MpReal::exact(q, -(frac as i64)))
    }

    /// Parse any decimal literal, rounding to `prec` significant bits.
    pub fn from_decimal(s: &str, prec: u64) -> Result<Self> {
        let (num, frac) = parse_decimal_parts(s)?;
        let n = MpReal::from_int(num);
        if frac == 0 {
            return Ok(n.round_prec(prec));
        }
        n.div(&MpReal::from_int(BigInt::from(pow10(frac))), prec)
    }
}

/// Upward-rounded scientific rendering of `rad * 2^exp`.
fn upper_sci(rad: &BigUint, exp: i64, sig: usize) -> String {
    if rad.is_zero() {
        return "0".to_string();
    }
    // value = rad * 2^exp; find decimal exponent k with 10^k <= value < 10^(k+1)
    let approx = (rad.bits() as f64 - 1.0 + exp as f64) * std::f64::consts::LOG10_2;
    let mut k = approx.floor() as i64 - 1;
    // compare value against 10^k exactly: num/den form
    let ge = |k: i64| -> bool { cmp_pow10(rad, exp, k) != std::cmp::Ordering::Less };
    while !ge(k) {
        k -= 1;
    }
    while ge(k + 1) {
        k += 1;
    }
    // mantissa digits = ceil(value / 10^(k - sig + 1))
    let shift = k - sig as i64 + 1;
    let (mut num, mut den) = (rad.clone(), BigUint::one());
    if exp >= 0 {
        num <<= exp as u64;
    } else {
        den <<= (-exp) as u64;
    }
    if shift >= 0 {
        den *= pow10(shift as u64);
    } else {
        num *= pow10((-shift) as u64);
    }
    let mut digits = Integer::div_ceil(&num, &den);
    if digits.to_str_radix(10).len() > sig {
        digits = Integer::div_ceil(&digits, &BigUint::from(10u32));
        k += 1;
    }
    let ds = digits.to_str_radix(10);
    let (head, tail) = ds.split_at(1);
    if tail.is_empty() {
        format!("{head}e{k}")
    } else {
        format!("{head}.{tail}e{k}")
    }
}

fn cmp_pow10(rad: &BigUint, exp: i64, k: i64) -> std::cmp::Ordering {
    let (mut lhs, mut rhs) = (rad.clone(), BigUint::one());
    if exp >= 0 {
        lhs <<= exp as u64;
    } else {
        rhs <<= (-exp) as u64;
    }
    if k >= 0 {
        rhs *= pow10(k as u64);
    } else {
        lhs *= pow10((-k) as u64);
    }
    lhs.cmp(&rhs)
}

fn parse_decimal_parts(s: &str) -> Result<(BigInt, u64)> {
    let t = s.trim();
    let bad = || Error::Parse(format!("invalid decimal literal '{s}'"));
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (mantissa, exp10) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], body[i + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (body, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((a, b)) => (a, b),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut num = BigInt::parse_bytes(digits.as_bytes(), 10).ok_or_else(bad)?;
    let mut frac = frac_part.len() as i64 - exp10;
    if frac < 0 {
        num *= BigInt::from(pow10((-frac) as u64));
        frac = 0;
    }
    if neg {
        num = BigInt::from_biguint(Sign::Minus, num.magnitude().clone());
    }
    Ok((num, frac as u64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_decimal_roundtrip() {
        for (m, e) in [(5i64, -1), (-3, -4), (7, 3), (1, -60), (0, -5)] {
            let x = MpReal::exact(BigInt::from(m), e);
            let s = x.to_decimal_exact();
            let y = MpReal::from_decimal_exact(&s).unwrap();
            assert_eq!(x.cmp_mid(&y), std::cmp::Ordering::Equal, "{s}");
        }
        assert_eq!(MpReal::exact(BigInt::from(5), -1).to_decimal_exact(), "2.5");
        assert_eq!(MpReal::exact(BigInt::from(-1), -2).to_decimal_exact(), "-0.25");
        assert!(MpReal::from_decimal_exact("0.1").is_err());
    }

    #[test]
    fn guaranteed_digits_respect_error() {
        // 1/3 at 40 bits: err ~ 2^-40 ~ 9e-13 -> 11 or 12 decimals
        let x = MpReal::one().div(&MpReal::from_int(3), 40).unwrap();
        let s = x.to_decimal_guaranteed();
        assert!(s.starts_with("0.33333333333"), "{s}");
        let d = x.guaranteed_decimals().unwrap();
        assert!((10..=13).contains(&d));
    }

    #[test]
    fn sci_rounds_up() {
        let x = MpReal::from_parts(BigInt::zero(), -10, BigUint::from(3u32));
        // 3/1024 = 0.0029296875 -> 2.93e-3
        assert_eq!(x.err_to_sci(), "2.93e-3");
        let y = MpReal::from_parts(BigInt::zero(), 0, BigUint::from(1000u32));
        assert_eq!(y.err_to_sci(), "1.00e3");
    }

    #[test]
    fn parse_forms() {
        let x = MpReal::from_decimal("1e-3", 80).unwrap();
        assert!((x.to_f64() - 1e-3).abs() < 1e-18);
        let y = MpReal::from_decimal("-2.5E1", 80).unwrap();
        assert_eq!(y.to_f64(), -25.0);
        assert!(MpReal::from_decimal("abc", 10).is_err());
        assert!(MpReal::from_decimal(".", 10).is_err());
    }
}
