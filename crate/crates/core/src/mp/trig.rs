//! Sine and cosine with explicit error bounds, plus reduction modulo π.

use num_bigint::BigInt;
use num_integer::Integer;

use super::consts::{check_bits, pi_at};
use super::MpReal;
use crate::error::{Error, Result};

pub(crate) fn bitlen(x: u64) -> u64 {
    64 - x.leading_zeros() as u64
}

/// Taylor series on grid `2^-w`. The returned enclosure covers the
/// polynomial's rounding plus the Lagrange remainder, but not any error in
/// `x` itself (callers add that; both functions are 1-Lipschitz).
fn series(x: &MpReal, w: i64, odd: bool) -> MpReal {
    let e = -w;
    let x = x.midpoint().round_to_exp(e);
    let x2 = x.mul_exact(&x).round_to_exp(e);
    let mut term = if odd { x.clone() } else { MpReal::one() };
    let mut sum = term.clone();
    let mut k: u64 = 1;
    loop {
        let d = if odd { (2 * k) * (2 * k + 1) } else { (2 * k - 1) * (2 * k) };
        term = term.mul_exact(&x2).round_to_exp(e).div_u64_at(d, e).neg();
        if term.upper_abs_le_pow2(e + 2) {
            // first omitted term bounds the remainder
            sum.add_err(&term.upper_abs());
            break;
        }
        sum = sum.add_exact(&term);
        k += 1;
    }
    sum
}

fn eval_guarded(x: &MpReal, bits: u64, odd: bool) -> MpReal {
    let target = -(bits as i64);
    let mut guard = 8 + bitlen(bits);
    loop {
        let w = (bits + guard) as i64;
        let v = series(x, w, odd).round_to_exp(target - 2);
        if v.err_le_pow2(target) {
            let mut v = v;
            v.add_err(&x.err());
            return v;
        }
        guard *= 2;
    }
}

fn check_domain(x: &MpReal) -> Result<()> {
    let pi_hi = pi_at(32).upper_abs();
    if x.lower_abs().cmp_mid(&pi_hi) == std::cmp::Ordering::Greater {
        return Err(Error::Domain(format!(
            "trigonometric argument {} exceeds pi in magnitude; reduce it first",
            x.to_f64()
        )));
    }
    Ok(())
}

/// `sin x` for `|x| <= π`; error at most `2^-bits` plus the error of `x`.
pub fn sin_mp(x: &MpReal, bits: u64) -> Result<MpReal> {
    check_bits(bits)?;
    check_domain(x)?;
    Ok(eval_guarded(x, bits, true))
}

/// `cos x` for `|x| <= π`; error at most `2^-bits` plus the error of `x`.
pub fn cos_mp(x: &MpReal, bits: u64) -> Result<MpReal> {
    check_bits(bits)?;
    check_domain(x)?;
    Ok(eval_guarded(x, bits, false))
}

/// Split `x = kπ + r` with `k` the nearest integer to `x/π`.
fn reduce_real(x: &MpReal, bits: u64) -> Result<(BigInt, MpReal)> {
    let mag = x.mag_log2().unwrap_or(0).max(0) as u64;
    let pi_lo = pi_at(mag + 64);
    let k = x.midpoint().div(&pi_lo, mag + 16)?.round_mid_to_int();
    if k.bits() == 0 {
        return Ok((k, x.clone()));
    }
    let pi = pi_at(bits + k.bits() + 8);
    let r = x.sub_exact(&pi.mul_int(&k)).round_to_exp(-(bits as i64) - 8);
    Ok((k, r))
}

/// `sin x` for any real `x`, reducing modulo π first.
pub fn sin_any(x: &MpReal, bits: u64) -> Result<MpReal> {
    check_bits(bits)?;
    let (k, r) = reduce_real(x, bits + 4)?;
    let s = eval_guarded(&r, bits + 2, true);
    let s = if k.is_odd() { s.neg() } else { s };
    Ok(s.round_to_exp(-(bits as i64) - 2))
}

/// `cos x` for any real `x`, reducing modulo π first.
pub fn cos_any(x: &MpReal, bits: u64) -> Result<MpReal> {
    check_bits(bits)?;
    let (k, r) = reduce_real(x, bits + 4)?;
    let c = eval_guarded(&r, bits + 2, false);
    let c = if k.is_odd() { c.neg() } else { c };
    Ok(c.round_to_exp(-(bits as i64) - 2))
}

/// `n = kπ + r` with `r` in (−π/2, π/2] (up to its error) and
/// `err(r) <= 2^-bits`. Working precision is `bits + ceil(log2 n) + 32`.
pub fn reduce_mod_pi(n: u64, bits: u64) -> Result<(BigInt, MpReal)> {
    if n == 0 {
        return Err(Error::InvalidArgument("reduce_mod_pi needs n >= 1".into()));
    }
    check_bits(bits)?;
    let nb = bitlen(n);
    let work = bits + nb + 32;
    check_bits(work)?;
    let nn = MpReal::from_int(n);
    let pi = pi_at(work);
    let k = nn.div(&pi, nb + 16)?.round_mid_to_int();
    let r = nn.sub_exact(&pi.mul_int(&k)).round_to_exp(-(bits as i64) - 2);
    Ok((k, r))
}

/// `sin n` for a positive integer, absolute error at most `2^-bits`.
pub fn sin_int(n: u64, bits: u64) -> Result<MpReal> {
    check_bits(bits)?;
    let (k, r) = reduce_mod_pi(n, bits + 4)?;
    let s = eval_guarded(&r, bits + 3, true);
    let s = if k.is_odd() { s.neg() } else { s };
    let s = s.round_to_exp(-(bits as i64) - 3);
    debug_assert!(s.err_le_pow2(-(bits as i64)));
    Ok(s)
}

/// `sin n` with relative error at most `2^-rel_bits`; near-multiples of π
/// are recomputed with enough extra bits to cover the cancellation.
pub fn sin_int_rel(n: u64, rel_bits: u64) -> Result<MpReal> {
    let s = sin_int(n, rel_bits + 4)?;
    let mag = s.mag_log2().unwrap_or(i64::MIN / 2);
    if mag >= -4 && s.err_log2().is_none_or(|e| e <= mag - rel_bits as i64) {
        return Ok(s);
    }
    let mut extra = (-mag).max(8) as u64 + 8;
    loop {
        let s = sin_int(n, rel_bits + extra)?;
        let mag = s.mag_log2().unwrap_or(i64::MIN / 2);
        if s.err_log2().is_none_or(|e| e <= mag - rel_bits as i64) {
            return Ok(s);
        }
        extra *= 2;
    }
}
