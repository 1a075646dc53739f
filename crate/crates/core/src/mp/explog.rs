use num_bigint::BigInt;
use num_traits::{Pow, ToPrimitive};

use super::consts::{check_bits, ln2_at};
use super::trig::bitlen;
use super::MpReal;
use crate::error::{Error, Result};

/// ln of an exact positive value on grid `2^-w`, via `x = f 2^m`,
/// `f` in [0.75, 1.5) and `ln f = 2 artanh((f-1)/(f+1))`.
fn ln_core(x: &MpReal, w: i64) -> Result<MpReal> {
    let man = x.mantissa();
    let t = man.bits() as i64;
    let mut m = t + x.exponent();
    let mut f = MpReal::exact(man.clone(), -t);
    if (man << 2u32) < (BigInt::from(3) << t as u64) {
        f = f.shl(1);
        m -= 1;
    }
    let e = -w - 4;
    let one = MpReal::one();
    let z = f.sub_exact(&one).div(&f.add_exact(&one), (w + 8) as u64)?.round_to_exp(e);
    let z2 = z.mul_exact(&z).round_to_exp(e);
    let mut pow = z.clone();
    let mut sum = z.clone();
    let mut k: u64 = 1;
    loop {
        pow = pow.mul_exact(&z2).round_to_exp(e);
        if pow.upper_abs_le_pow2(e + 2) {
            // |z| <= 1/5: the tail sum_{j>=k} z^(2j+1)/(2j+1) is below |z^(2k+1)|
            sum.add_err(&pow.upper_abs());
            break;
        }
        sum = sum.add_exact(&pow.div_u64_at(2 * k + 1, e));
        k += 1;
    }
    let ln_f = sum.shl(1);
    if m == 0 {
        return Ok(ln_f);
    }
    let l2 = ln2_at((w + 4) as u64 + bitlen(m.unsigned_abs()));
    Ok(ln_f.add_exact(&l2.mul_int(&BigInt::from(m))))
}

/// Natural logarithm of a positive value; absolute error at most `2^-bits`
/// plus the propagated input error.
pub fn ln_mp(x: &MpReal, bits: u64) -> Result<MpReal> {
    check_bits(bits)?;
    if x.sign() != Some(std::cmp::Ordering::Greater) {
        return Err(Error::Domain("logarithm of a value not definitely positive".into()));
    }
    let target = -(bits as i64);
    let mid = x.midpoint();
    let mut guard = 8 + bitlen(bits);
    loop {
        let v = ln_core(&mid, (bits + guard) as i64)?.round_to_exp(target - 2);
        if v.err_le_pow2(target) {
            let mut v = v;
            if !x.is_exact() {
                // |ln x - ln x0| <= rho / (x0 - rho)
                let bound = x.err().div(&x.lower_abs(), 32)?;
                v.add_err(&bound);
            }
            return Ok(v);
        }
        guard *= 2;
    }
}

/// `exp y` with relative error at most `2^-rel_bits` plus the propagated
/// input error.
pub fn exp_mp(y: &MpReal, rel_bits: u64) -> Result<MpReal> {
    check_bits(rel_bits)?;
    if !y.upper_abs_le_pow2(40) {
        return Err(Error::Domain("exponent argument too large".into()));
    }
    let ym = y.midpoint();
    let m = ym.div(&ln2_at(64), 80)?.round_mid_to_int();
    let m_i = m.to_i64().expect("bounded above");
    const HALVINGS: i64 = 8;
    let mut guard = 16 + bitlen(rel_bits);
    loop {
        let w = rel_bits + guard;
        let l2 = ln2_at(w + 8 + bitlen(m_i.unsigned_abs()));
        let r = ym.sub_exact(&l2.mul_int(&m)).round_to_exp(-(w as i64) - 8);
        let rh = r.shl(-HALVINGS);
        let e = -(w as i64) - HALVINGS - 8;
        let mut term = MpReal::one();
        let mut sum = MpReal::one();
        let mut k: u64 = 1;
        loop {
            term = term.mul_exact(&rh).round_to_exp(e).div_u64_at(k, e);
            if term.upper_abs_le_pow2(e + 2) {
                // Lagrange remainder with e^|rh| < 2
                sum.add_err(&term.upper_abs().shl(1));
                break;
            }
            sum = sum.add_exact(&term);
            k += 1;
        }
        for _ in 0..HALVINGS {
            sum = sum.sqr(w + 16);
        }
        let mut v = sum.shl(m_i);
        let mag = v.mag_log2().expect("exp is positive");
        if v.err_log2().is_none_or(|el| el <= mag - rel_bits as i64) {
            if !y.is_exact() {
                if !y.err_le_pow2(0) {
                    return Err(Error::Domain("exponent argument too uncertain".into()));
                }
                // e^(y0 + d) - e^y0 <= e^y0 * 2|d| for |d| <= 1
                let bound = v.upper_abs().mul_exact(&y.err()).shl(1);
                v.add_err(&bound);
            }
            return Ok(v);
        }
        guard *= 2;
    }
}

/// Whether an exact value is a non-negative integer small enough to use as a
/// machine exponent.
fn as_small_uint(x: &MpReal) -> Option<u64> {
    if !x.is_exact() {
        return None;
    }
    let man = x.mantissa();
    if x.exponent() >= 0 {
        return (man << x.exponent() as u64).to_u64();
    }
    let s = (-x.exponent()) as u64;
    if man.trailing_zeros().is_none_or(|tz| tz >= s) {
        (man >> s).to_u64()
    } else {
        None
    }
}

/// `n^p` for a positive integer `n` and real `p`: exact when `p` is a
/// non-negative integer, otherwise `exp(p ln n)` with relative error at most
/// `2^-rel_bits`.
pub fn pow_int_real(n: u64, p: &MpReal, rel_bits: u64) -> Result<MpReal> {
    if n == 0 {
        return Err(Error::InvalidArgument("base must be positive".into()));
    }
    if n == 1 {
        return Ok(MpReal::one());
    }
    if let Some(k) = as_small_uint(p) {
        if k <= u32::MAX as u64 {
            return Ok(MpReal::from_int(Pow::pow(BigInt::from(n), k as u32)));
        }
    }
    let scale = p.upper_abs().mag_log2().unwrap_or(0).max(0) as u64 + 1;
    let ln_n = ln_mp(&MpReal::from_int(n), rel_bits + 8 + scale)?;
    let y = ln_n.mul(p, rel_bits + 16 + scale + bitlen(n));
    exp_mp(&y, rel_bits)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_values() {
        let l = ln_mp(&MpReal::from_int(10), 120).unwrap();
        assert!(l.err_le_pow2(-120));
        assert!(l.to_decimal_guaranteed().starts_with("2.302585092994045684017991454684"));
        let one = ln_mp(&MpReal::one(), 64).unwrap();
        assert!(one.is_exact() && one.mantissa() == &BigInt::from(0));
        let half = ln_mp(&MpReal::from_f64(0.5).unwrap(), 80).unwrap();
        assert!((half.to_f64() + std::f64::consts::LN_2).abs() < 1e-16);
        assert!(ln_mp(&MpReal::zero(), 64).is_err());
    }

    #[test]
    fn exp_values() {
        let e = exp_mp(&MpReal::one(), 120).unwrap();
        assert!(e.to_decimal_guaranteed().starts_with("2.71828182845904523536028747135"));
        let small = exp_mp(&MpReal::from_int(-50), 80).unwrap();
        assert!((small.to_f64() / (-50f64).exp() - 1.0).abs() < 1e-14);
        let big = exp_mp(&MpReal::from_int(300), 80).unwrap();
        assert!((big.ln_abs_f64() - 300.0).abs() < 1e-12);
    }

    #[test]
    fn real_powers() {
        let p = pow_int_real(2, &MpReal::from_f64(3.9).unwrap(), 80).unwrap();
        assert!((p.to_f64() - 2f64.powf(3.9)).abs() < 1e-12);
        let q = pow_int_real(7, &MpReal::from_int(3), 80).unwrap();
        assert!(q.is_exact());
        assert_eq!(q.cmp_mid(&MpReal::from_int(343)), std::cmp::Ordering::Equal);
        let one = pow_int_real(1, &MpReal::from_f64(11.9).unwrap(), 80).unwrap();
        assert!(one.is_exact());
    }
}
