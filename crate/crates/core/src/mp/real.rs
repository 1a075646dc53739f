use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Radius values wider than this many bits cause the mantissa to be shortened,
/// since everything below the radius is noise.
const RAD_BITS: u64 = 32;

/// A dyadic midpoint `man * 2^exp` with an absolute error radius `rad * 2^exp`.
///
/// The true value always lies in `[mid - err, mid + err]`. Every arithmetic
/// operation widens the radius by the worst-case propagated error plus its own
/// rounding, so the enclosure holds without any separate interval bookkeeping.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MpReal {
    man: BigInt,
    exp: i64,
    rad: BigUint,
}

pub(crate) fn ceil_shr(x: &BigUint, s: u64) -> BigUint {
    if x.is_zero() {
        BigUint::zero()
    } else {
        ((x - 1u32) >> s) + 1u32
    }
}

fn bits_i(x: &BigInt) -> i64 {
    x.bits() as i64
}

impl MpReal {
    pub fn zero() -> Self {
        Self::exact(BigInt::zero(), 0)
    }

    pub fn one() -> Self {
        Self::exact(BigInt::one(), 0)
    }

    pub fn exact(man: BigInt, exp: i64) -> Self {
        MpReal { man, exp, rad: BigUint::zero() }
    }

    pub fn from_parts(man: BigInt, exp: i64, rad: BigUint) -> Self {
        MpReal { man, exp, rad }
    }

    pub fn from_int<T: Into<BigInt>>(v: T) -> Self {
        Self::exact(v.into(), 0)
    }

    /// Exact conversion; every finite double is a dyadic rational.
    pub fn from_f64(x: f64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        if x == 0.0 {
            return Some(Self::zero());
        }
        let bits = x.to_bits();
        let sign = bits >> 63;
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        let mut man = BigInt::from(m);
        if sign == 1 {
            man = -man;
        }
        Some(Self::exact(man, e))
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.man
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn radius(&self) -> &BigUint {
        &self.rad
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    /// The midpoint with the radius dropped.
    pub fn midpoint(&self) -> MpReal {
        Self::exact(self.man.clone(), self.exp)
    }

    /// The error bound as an exact value.
    pub fn err(&self) -> MpReal {
        Self::exact(BigInt::from(self.rad.clone()), self.exp)
    }

    /// `|mid| + err` as an exact value.
    pub fn upper_abs(&self) -> MpReal {
        Self::exact(BigInt::from(self.man.magnitude() + &self.rad), self.exp)
    }

    /// `max(|mid| - err, 0)` as an exact value.
    pub fn lower_abs(&self) -> MpReal {
        let m = self.man.magnitude();
        if m > &self.rad {
            Self::exact(BigInt::from(m - &self.rad), self.exp)
        } else {
            Self::zero()
        }
    }

    /// True when the error bound is at most `2^e`. Sufficient, not necessary.
    pub fn err_le_pow2(&self, e: i64) -> bool {
        self.rad.is_zero() || self.rad.bits() as i64 + self.exp <= e
    }

    /// True when `|mid| + err <= 2^e`. Sufficient, not necessary.
    pub fn upper_abs_le_pow2(&self, e: i64) -> bool {
        let u = self.man.magnitude() + &self.rad;
        u.is_zero() || u.bits() as i64 + self.exp <= e
    }

    /// `ceil(log2(err))` upper estimate, `None` for exact values.
    pub fn err_log2(&self) -> Option<i64> {
        if self.rad.is_zero() {
            None
        } else {
            Some(self.rad.bits() as i64 + self.exp)
        }
    }

    /// `floor(log2 |mid|)`, `None` for a zero midpoint.
    pub fn mag_log2(&self) -> Option<i64> {
        if self.man.is_zero() {
            None
        } else {
            Some(bits_i(&self.man) - 1 + self.exp)
        }
    }

    /// Definite sign of every value in the enclosure, `None` if it straddles zero.
    pub fn sign(&self) -> Option<Ordering> {
        let m = self.man.magnitude();
        if self.man.is_zero() && self.rad.is_zero() {
            Some(Ordering::Equal)
        } else if m > &self.rad {
            Some(if self.man.is_positive() { Ordering::Greater } else { Ordering::Less })
        } else {
            None
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.man.magnitude() <= &self.rad
    }

    pub fn neg(&self) -> Self {
        MpReal { man: -&self.man, exp: self.exp, rad: self.rad.clone() }
    }

    pub fn abs(&self) -> Self {
        MpReal { man: self.man.abs(), exp: self.exp, rad: self.rad.clone() }
    }

    /// Multiply by `2^k` exactly.
    pub fn shl(&self, k: i64) -> Self {
        MpReal { man: self.man.clone(), exp: self.exp + k, rad: self.rad.clone() }
    }

    /// Widen the radius by an exact non-negative bound.
    pub fn add_err(&mut self, bound: &MpReal) {
        let ub = bound.man.magnitude() + &bound.rad;
        if ub.is_zero() {
            return;
        }
        if bound.exp >= self.exp {
            self.rad += ub << (bound.exp - self.exp) as u64;
        } else {
            self.rad += ceil_shr(&ub, (self.exp - bound.exp) as u64);
        }
    }

    /// Widen the radius by `2^e`.
    pub fn add_err_pow2(&mut self, e: i64) {
        if e >= self.exp {
            self.rad += BigUint::one() << (e - self.exp) as u64;
        } else {
            self.rad += 1u32;
        }
    }

    fn shift_right_round(&mut self, s: u64) {
        if s == 0 {
            return;
        }
        let neg = self.man.is_negative();
        let mag = self.man.magnitude();
        let inexact = mag.trailing_zeros().is_some_and(|tz| tz < s);
        let q: BigUint = (mag + (BigUint::one() << (s - 1))) >> s;
        self.man = BigInt::from_biguint(if neg { Sign::Minus } else { Sign::Plus }, q);
        self.rad = ceil_shr(&self.rad, s);
        if inexact {
            self.rad += 1u32;
        }
        self.exp += s as i64;
    }

    /// Round to at most `prec` significant mantissa bits. Also drops mantissa
    /// bits lying far below the error radius.
    pub fn round_prec(mut self, prec: u64) -> Self {
        let mut shift = self.man.bits().saturating_sub(prec);
        shift = shift.max(self.rad.bits().saturating_sub(RAD_BITS));
        self.shift_right_round(shift);
        self
    }

    /// Round so the exponent is at least `e` (fixed-point grid `2^e`).
    pub fn round_to_exp(mut self, e: i64) -> Self {
        if self.exp < e {
            self.shift_right_round((e - self.exp) as u64);
        }
        self
    }

    /// Represent exactly on grid `2^e`: rounds when finer, shifts left when coarser.
    pub fn align_to_exp(self, e: i64) -> Self {
        if self.exp < e {
            self.round_to_exp(e)
        } else {
            let s = (self.exp - e) as u64;
            MpReal { man: self.man << s, exp: e, rad: self.rad << s }
        }
    }

    fn top(&self) -> Option<i64> {
        let u = self.man.magnitude() + &self.rad;
        if u.is_zero() {
            None
        } else {
            Some(u.bits() as i64 + self.exp)
        }
    }

    pub fn add_exact(&self, o: &Self) -> Self {
        let e = self.exp.min(o.exp);
        let sa = (self.exp - e) as u64;
        let sb = (o.exp - e) as u64;
        MpReal {
            man: (&self.man << sa) + (&o.man << sb),
            exp: e,
            rad: (&self.rad << sa) + (&o.rad << sb),
        }
    }

    pub fn sub_exact(&self, o: &Self) -> Self {
        self.add_exact(&o.neg())
    }

    pub fn mul_exact(&self, o: &Self) -> Self {
        let am = self.man.magnitude();
        let bm = o.man.magnitude();
        let rad = am * &o.rad + bm * &self.rad + &self.rad * &o.rad;
        MpReal { man: &self.man * &o.man, exp: self.exp + o.exp, rad }
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        MpReal { man: &self.man * k, exp: self.exp, rad: &self.rad * k.magnitude() }
    }

    /// Sum rounded to `prec` bits relative to the larger operand.
    pub fn add(&self, o: &Self, prec: u64) -> Self {
        let top = match (self.top(), o.top()) {
            (Some(a), Some(b)) => a.max(b),
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (None, None) => return Self::zero(),
        };
        let e = top - prec as i64 - 4;
        let a = self.clone().round_to_exp(e);
        let b = o.clone().round_to_exp(e);
        a.add_exact(&b).round_prec(prec)
    }

    pub fn sub(&self, o: &Self, prec: u64) -> Self {
        self.add(&o.neg(), prec)
    }

    pub fn mul(&self, o: &Self, prec: u64) -> Self {
        self.mul_exact(o).round_prec(prec)
    }

    pub fn sqr(&self, prec: u64) -> Self {
        self.mul(self, prec)
    }

    /// Integer power by repeated squaring.
    pub fn powu(&self, k: u64, prec: u64) -> Self {
        let p = prec + 2 * (64 - k.leading_zeros() as u64) + 4;
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base, p);
            }
            k >>= 1;
            if k > 0 {
                base = base.sqr(p);
            }
        }
        acc.round_prec(prec)
    }

    /// Quotient with `prec` significant bits; fails when the divisor's
    /// enclosure contains zero.
    pub fn div(&self, o: &Self, prec: u64) -> Result<Self> {
        if o.contains_zero() {
            return Err(Error::Domain("division by an enclosure containing zero".into()));
        }
        let a = self.man.magnitude();
        let b = o.man.magnitude();
        let sh = (prec as i64 + 2 + b.bits() as i64 - a.bits() as i64).max(0) as u64;
        let (q, r) = (a << sh).div_rem(b);
        let num = a * &o.rad + b * &self.rad;
        let den = b * (b - &o.rad);
        let mut rad = if num.is_zero() {
            BigUint::zero()
        } else {
            let (qe, re) = (num << sh).div_rem(&den);
            if re.is_zero() {
                qe
            } else {
                qe + 1u32
            }
        };
        if !r.is_zero() {
            rad += 1u32;
        }
        let negative = self.man.is_negative() != o.man.is_negative() && !q.is_zero();
        let man = BigInt::from_biguint(if negative { Sign::Minus } else { Sign::Plus }, q);
        Ok(MpReal { man, exp: self.exp - o.exp - sh as i64, rad }.round_prec(prec))
    }

    /// Divide by a positive machine integer, result on grid `2^e`.
    pub fn div_u64_at(&self, d: u64, e: i64) -> Self {
        assert!(d > 0, "division by zero");
        let x = self.clone().align_to_exp(e);
        let (q, r) = x.man.magnitude().div_rem(&BigUint::from(d));
        let mut rad = Integer::div_ceil(&x.rad, &BigUint::from(d));
        if !r.is_zero() {
            rad += 1u32;
        }
        let man = BigInt::from_biguint(if x.man.is_negative() { Sign::Minus } else { Sign::Plus }, q);
        MpReal { man, exp: x.exp, rad }
    }

    /// Nearest integer to the midpoint (ties upward).
    pub fn round_mid_to_int(&self) -> BigInt {
        if self.exp >= 0 {
            &self.man << self.exp as u64
        } else {
            let s = (-self.exp) as u64;
            (&self.man + (BigInt::one() << (s - 1))) >> s
        }
    }

    /// Interval comparison: `Some` only when the enclosures are disjoint
    /// (or both exact and equal).
    pub fn cmp_interval(&self, o: &Self) -> Option<Ordering> {
        self.sub_exact(o).sign()
    }

    /// Exact comparison of midpoints.
    pub fn cmp_mid(&self, o: &Self) -> Ordering {
        let d = Self::exact(self.man.clone(), self.exp).sub_exact(&Self::exact(o.man.clone(), o.exp));
        d.man.sign().cmp_zero()
    }

    pub fn to_f64(&self) -> f64 {
        if self.man.is_zero() {
            return 0.0;
        }
        let mag = self.man.magnitude();
        let b = mag.bits();
        let (top, e) = if b > 64 {
            ((mag >> (b - 64)).to_u64().unwrap(), self.exp + (b - 64) as i64)
        } else {
            (mag.to_u64().unwrap(), self.exp)
        };
        let v = ldexp(top as f64, e);
        if self.man.is_negative() {
            -v
        } else {
            v
        }
    }

    /// Natural log of `|mid|` in double precision, finite even when the value
    /// itself would overflow an `f64`.
    pub fn ln_abs_f64(&self) -> f64 {
        if self.man.is_zero() {
            return f64::NEG_INFINITY;
        }
        let mag = self.man.magnitude();
        let b = mag.bits();
        let (top, e) = if b > 64 {
            ((mag >> (b - 64)).to_u64().unwrap(), self.exp + (b - 64) as i64)
        } else {
            (mag.to_u64().unwrap(), self.exp)
        };
        (top as f64).ln() + e as f64 * std::f64::consts::LN_2
    }
}

trait SignExt {
    fn cmp_zero(self) -> Ordering;
}

impl SignExt for Sign {
    fn cmp_zero(self) -> Ordering {
        match self {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }
}

fn ldexp(x: f64, mut e: i64) -> f64 {
    let mut v = x;
    while e > 1000 {
        v *= 2f64.powi(1000);
        e -= 1000;
        if v.is_infinite() {
            return v;
        }
    }
    while e < -1000 {
        v *= 2f64.powi(-1000);
        e += 1000;
        if v == 0.0 {
            return v;
        }
    }
    v * 2f64.powi(e as i32)
}

impl fmt::Display for MpReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ± {}", self.to_decimal_guaranteed(), self.err_to_sci())
    }
}
