//! π and ln 2 by binary splitting, behind shared precision caches.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::RwLock;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Pow};

use super::MpReal;
use crate::error::{Error, Result};

pub const DEFAULT_MAX_BITS: u64 = 10_000_000;
pub const MIN_BITS: u64 = 8;

static MAX_BITS: AtomicU64 = AtomicU64::new(DEFAULT_MAX_BITS);

/// Cached values always carry this many bits beyond any request served from them.
const CACHE_MARGIN: u64 = 64;

pub fn max_bits() -> u64 {
    MAX_BITS.load(Ordering::Relaxed)
}

pub fn set_max_bits(bits: u64) {
    MAX_BITS.store(bits, Ordering::Relaxed);
}

pub(crate) fn check_bits(bits: u64) -> Result<()> {
    if bits < MIN_BITS {
        return Err(Error::InvalidArgument(format!("precision must be at least {MIN_BITS} bits, got {bits}")));
    }
    let max = max_bits();
    if bits > max {
        return Err(Error::ResourceLimit { requested: bits, max });
    }
    Ok(())
}

struct Split {
    q: BigInt,
    b: BigInt,
    t: BigInt,
}

/// Binary splitting of `sum_{k in [lo, hi)} s_k / ((2k+1) x^(2(k-lo)+2))` with
/// `s_k = (-1)^k` when alternating, else 1. Returns Q, B, T with the block sum
/// equal to `T / (B Q)`.
fn split(lo: u64, hi: u64, x2: &BigInt, alternating: bool) -> Split {
    if hi - lo == 1 {
        let sign = if alternating && lo % 2 == 1 { -1 } else { 1 };
        return Split { q: x2.clone(), b: BigInt::from(2 * lo + 1), t: BigInt::from(sign) };
    }
    let mid = lo + (hi - lo) / 2;
    let l = split(lo, mid, x2, alternating);
    let r = split(mid, hi, x2, alternating);
    Split { t: &r.b * &r.q * &l.t + &l.b * &r.t, q: l.q * r.q, b: l.b * r.b }
}

/// `floor(coef * x * sum_{k<terms} s_k/((2k+1) x^(2k+2)) * 2^w)`, i.e. the
/// truncated arctan / artanh series of `1/x` scaled by `coef`.
fn inverse_series_fixed(x: u64, terms: u64, alternating: bool, coef: u64, w: u64) -> BigInt {
    let x2 = BigInt::from(x * x);
    let s = split(0, terms, &x2, alternating);
    let num = (s.t * BigInt::from(coef) * BigInt::from(x)) << w;
    let den = s.b * s.q;
    num_integer::Integer::div_floor(&num, &den)
}

/// Terms needed so that `x^-(2N+1) <= 2^-(target)`.
fn terms_for(x: u64, target: u64) -> u64 {
    let per = 2.0 * (x as f64).log2();
    ((target as f64 + 1.0) / per).ceil() as u64 + 1
}

/// π via `16 atan(1/5) - 4 atan(1/239)`, absolute error at most `2^-bits`.
pub(crate) fn machin_pi(bits: u64) -> MpReal {
    let w = bits + 8;
    // tails: 16 * 5^-(2N+1) and 4 * 239^-(2N+1), each pushed below 2^-(w+1)
    let n5 = terms_for(5, w + 5);
    let n239 = terms_for(239, w + 3);
    let a = inverse_series_fixed(5, n5, true, 16, w);
    let c = inverse_series_fixed(239, n239, true, 4, w);
    // two floor divisions plus both tails: under 4 ulps
    MpReal::from_parts(a - c, -(w as i64), BigUint::from(4u32))
}

/// ln 2 via `2 artanh(1/3)`, absolute error at most `2^-bits`.
pub(crate) fn series_ln2(bits: u64) -> MpReal {
    let w = bits + 8;
    // tail: sum_{k>=N} 2/((2k+1) 3^(2k+1)) <= (9/4) 3^-(2N+1) < 2^-(w+2)
    let n = terms_for(3, w + 3);
    let a = inverse_series_fixed(3, n, false, 2, w);
    MpReal::from_parts(a, -(w as i64), BigUint::from(3u32))
}

/// A constant computed once per precision tier, then served read-only.
pub(crate) struct ConstCache {
    compute: fn(u64) -> MpReal,
    slot: RwLock<Option<(u64, MpReal)>>,
}

impl ConstCache {
    pub(crate) const fn new(compute: fn(u64) -> MpReal) -> Self {
        ConstCache { compute, slot: RwLock::new(None) }
    }

    fn serve(v: &MpReal, bits: u64) -> MpReal {
        // cached err <= 2^-(bits+64): rounding to 2^-(bits+2) leaves rad <= 2
        let r = v.clone().round_to_exp(-(bits as i64) - 2);
        MpReal::from_parts(r.mantissa().clone(), r.exponent(), BigUint::from(2u32))
    }

    /// Value with absolute error at most `2^-(bits+1)`.
    pub(crate) fn get(&self, bits: u64) -> MpReal {
        {
            let guard = self.slot.read().unwrap_or_else(|e| e.into_inner());
            if let Some((have, v)) = guard.as_ref() {
                if *have >= bits + CACHE_MARGIN {
                    return Self::serve(v, bits);
                }
            }
        }
        let mut guard = self.slot.write().unwrap_or_else(|e| e.into_inner());
        if let Some((have, v)) = guard.as_ref() {
            if *have >= bits + CACHE_MARGIN {
                return Self::serve(v, bits);
            }
        }
        let current = guard.as_ref().map_or(0, |(b, _)| *b);
        let target = (bits + CACHE_MARGIN).max(2 * current).max(256);
        let v = (self.compute)(target);
        let out = Self::serve(&v, bits);
        *guard = Some((target, v));
        out
    }

    #[cfg(test)]
    pub(crate) fn cached_bits(&self) -> u64 {
        self.slot.read().unwrap().as_ref().map_or(0, |(b, _)| *b)
    }
}

pub(crate) static PI: ConstCache = ConstCache::new(machin_pi);
pub(crate) static LN2: ConstCache = ConstCache::new(series_ln2);

/// π with absolute error at most `2^-bits`.
pub fn compute_pi(bits: u64) -> Result<MpReal> {
    check_bits(bits)?;
    Ok(PI.get(bits))
}

/// ln 2 with absolute error at most `2^-bits`.
pub fn compute_ln2(bits: u64) -> Result<MpReal> {
    check_bits(bits)?;
    Ok(LN2.get(bits))
}

/// π without the public precision checks, for internal working precisions.
pub(crate) fn pi_at(bits: u64) -> MpReal {
    PI.get(bits.max(MIN_BITS))
}

pub(crate) fn ln2_at(bits: u64) -> MpReal {
    LN2.get(bits.max(MIN_BITS))
}

/// Digits of a `3.14159...` style fixture, keeping only the decimal digits.
pub fn read_pi_fixture(text: &str) -> Result<String> {
    let line = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("").trim();
    let digits: String = line.chars().filter(|c| *c != '.').collect();
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) || !line.starts_with("3.") {
        return Err(Error::Parse("pi fixture must be a single line like 3.14159...".into()));
    }
    Ok(digits)
}

/// Length of the longest prefix of `digits` (counting the leading `3`) that is
/// a valid truncation of some value inside the enclosure `pi`.
pub fn pi_digits_matching(pi: &MpReal, digits: &str) -> usize {
    let mut matched = 0;
    // consistency is monotone in prefix length
    let mut lo = 1usize;
    let mut hi = digits.len();
    while lo <= hi {
        let mid = (lo + hi) / 2;
        if prefix_consistent(pi, &digits[..mid]) {
            matched = mid;
            lo = mid + 1;
        } else {
            hi = mid - 1;
        }
    }
    matched
}

fn prefix_consistent(pi: &MpReal, prefix: &str) -> bool {
    let frac = prefix.len() as u64 - 1;
    let num = BigInt::parse_bytes(prefix.as_bytes(), 10).expect("digits");
    let scale = BigInt::from(Pow::pow(BigUint::from(10u32), frac));
    // truncated fixture t satisfies t <= pi < t + 10^-frac
    let lo = MpReal::from_int(num.clone());
    let hi = MpReal::from_int(num + BigInt::one());
    let scaled = pi.mul_int(&scale);
    let below = scaled.upper_abs().cmp_mid(&lo) == std::cmp::Ordering::Less;
    let above = scaled.lower_abs().cmp_mid(&hi) != std::cmp::Ordering::Less;
    !(below || above)
}
