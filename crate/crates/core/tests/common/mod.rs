//! Reference computations that share no code with the library: integer-only
//! spigot digits of π, Pascal rows, the Chebyshev U recurrence, and a decimal
//! fixed-point sine.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

pub const PI_FIXTURE: &str = include_str!("../fixtures/pi_1100.txt");

/// Gibbons' unbounded spigot: the first `count` decimal digits of π ("3" first).
pub fn pi_spigot(count: usize) -> String {
    let (mut q, mut r, mut t) = (BigInt::one(), BigInt::zero(), BigInt::one());
    let (mut k, mut n, mut l) = (BigInt::one(), BigInt::from(3), BigInt::from(3));
    let mut out = String::with_capacity(count);
    while out.len() < count {
        if &q * 4 + &r - &t < &n * &t {
            out.push_str(&n.to_string());
            let nr = (&r - &n * &t) * 10;
            let num: BigInt = (&q * 3 + &r) * 10;
            n = num.div_floor(&t) - &n * 10;
            q *= 10;
            r = nr;
        } else {
            let nr = (&q * 2 + &r) * &l;
            let num: BigInt = &q * (&k * 7 + 2) + &r * &l;
            let nn = num.div_floor(&(&t * &l));
            q *= &k;
            t *= &l;
            l += 2;
            k += 1;
            n = nn;
            r = nr;
        }
    }
    out
}

/// Digits of the fixture file with the decimal point removed.
pub fn fixture_digits() -> String {
    PI_FIXTURE.trim().replace('.', "")
}

pub fn pascal_rows(n_max: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
    for n in 1..=n_max {
        let prev = &rows[n - 1];
        let mut row = vec![BigInt::one(); n + 1];
        for k in 1..n {
            row[k] = &prev[k - 1] + &prev[k];
        }
        rows.push(row);
    }
    rows
}

/// U_{n−1}(1) by the three-term recurrence.
pub fn chebyshev_u_at_one(n: u64) -> BigInt {
    let (mut a, mut b) = (BigInt::one(), BigInt::from(2));
    if n == 1 {
        return a;
    }
    for _ in 2..n {
        let c = &b * 2 - &a;
        a = b;
        b = c;
    }
    b
}

/// Coefficients of U_{n−1}(x), index = power.
pub fn chebyshev_u_coeffs(n: u64) -> Vec<BigInt> {
    let mut a = vec![BigInt::one()];
    let mut b = vec![BigInt::zero(), BigInt::from(2)];
    if n == 1 {
        return a;
    }
    for _ in 2..n {
        let mut c = vec![BigInt::zero(); b.len() + 1];
        for (i, x) in b.iter().enumerate() {
            c[i + 1] += x * 2;
        }
        for (i, x) in a.iter().enumerate() {
            c[i] -= x;
        }
        a = b;
        b = c;
    }
    b
}

/// π truncated to `d` decimals, as an integer scaled by 10^d.
fn pi_scaled(d: usize) -> BigInt {
    let digits = fixture_digits();
    assert!(d < digits.len());
    BigInt::parse_bytes(&digits.as_bytes()[..d + 1], 10).unwrap()
}

/// sin n scaled by 10^d (d well below the fixture length), by reduction
/// against the decimal π and a fixed-point Taylor series.
pub fn sin_fixed(n: u64, d: usize) -> BigInt {
    let w = d + 20;
    let scale = BigInt::from(10u32).pow(w as u32);
    let pi = pi_scaled(w);
    let x = BigInt::from(n) * &scale;
    let twice: BigInt = &x * 2 + &pi;
    let k = twice.div_floor(&(&pi * 2));
    let r = &x - &k * &pi;
    let r2 = (&r * &r).div_floor(&scale);
    let mut term = r.clone();
    let mut sum = r.clone();
    let mut i: u64 = 1;
    while !term.is_zero() {
        term = -(&term * &r2).div_floor(&scale) / BigInt::from((2 * i) * (2 * i + 1));
        sum += &term;
        i += 1;
    }
    if k.is_odd() {
        sum = -sum;
    }
    sum / BigInt::from(10u32).pow(20u32)
}

pub fn sin_f64(n: u64) -> f64 {
    let v = sin_fixed(n, 40);
    v.to_f64().unwrap() / 1e40
}

/// Record minima of |sin n| on 1..=n_max by exhaustive scan.
pub fn spike_oracle(n_max: u64) -> Vec<u64> {
    let mut best: Option<BigInt> = None;
    let mut out = Vec::new();
    for n in 1..=n_max {
        let s = sin_fixed(n, 60).abs();
        if best.as_ref().is_none_or(|b| &s < b) {
            out.push(n);
            best = Some(s);
        }
    }
    out
}

/// Partial quotients shared by both ends of `[t, t + 1] / 10^d`, where `t` is
/// the truncated fixture.
pub fn pi_cf_from_digits(d: usize, count: usize) -> Vec<BigInt> {
    let t = pi_scaled(d);
    let den = BigInt::from(10u32).pow(d as u32);
    let (mut a1, mut b1) = (t.clone(), den.clone());
    let (mut a2, mut b2): (BigInt, BigInt) = (t + 1, den);
    let mut out = Vec::new();
    while out.len() < count {
        let (q1, r1) = a1.div_mod_floor(&b1);
        let (q2, r2) = a2.div_mod_floor(&b2);
        if q1 != q2 || r1.is_zero() || r2.is_zero() {
            break;
        }
        out.push(q1);
        (a1, b1, a2, b2) = (b1, r1, b2, r2);
    }
    out
}

pub fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn pow10(d: u32) -> BigInt {
    Pow::pow(BigInt::from(10u32), d)
}
