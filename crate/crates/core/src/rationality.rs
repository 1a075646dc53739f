//! Continued fractions of π, convergents, record minima of |sin n| and the
//! local exponent λ(n) = −ln|sin n| / ln n.

use std::cmp::Ordering;
use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::{map_chunks, Exec, DEFAULT_CHUNK};
use crate::mp::{compute_pi, sin_int, sin_int_rel, MpReal};
use crate::report::{ser_bigint, ser_opt_f64};

/// Precision ceiling for escalating comparisons.
pub const MAX_ESCALATION_BITS: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CfStatus {
    /// All requested terms were produced.
    Complete,
    /// The input is rational and its expansion ended early.
    Terminated,
    /// The enclosure does not pin down any further terms.
    PrecisionExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CfExpansion {
    #[serde(serialize_with = "ser_bigint_vec")]
    pub terms: Vec<BigInt>,
    pub status: CfStatus,
}

fn ser_bigint_vec<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_str_radix(10)))
}

/// Expand every value of `[a1/b1, a2/b2]` at once; a term is kept only when
/// both endpoints produce it (the reals sharing a prefix form an interval).
fn cf_interval(mut a1: BigInt, mut b1: BigInt, mut a2: BigInt, mut b2: BigInt, count: usize) -> CfExpansion {
    let mut terms = Vec::new();
    while terms.len() < count {
        let (q1, r1) = a1.div_mod_floor(&b1);
        let (q2, r2) = a2.div_mod_floor(&b2);
        if q1 != q2 {
            return CfExpansion { terms, status: CfStatus::PrecisionExhausted };
        }
        terms.push(q1);
        match (r1.is_zero(), r2.is_zero()) {
            (true, true) => {
                let status = if terms.len() == count { CfStatus::Complete } else { CfStatus::Terminated };
                return CfExpansion { terms, status };
            }
            (false, false) => {}
            _ => {
                let status = if terms.len() == count { CfStatus::Complete } else { CfStatus::PrecisionExhausted };
                return CfExpansion { terms, status };
            }
        }
        (a1, b1) = (b1, r1);
        (a2, b2) = (b2, r2);
    }
    CfExpansion { terms, status: CfStatus::Complete }
}

/// First `count` partial quotients shared by every value in the enclosure `x`.
pub fn cf_terms(x: &MpReal, count: usize) -> Result<CfExpansion> {
    if count == 0 {
        return Err(Error::InvalidArgument("count must be positive".into()));
    }
    if x.sign() != Some(Ordering::Greater) {
        return Err(Error::Domain("continued fraction input must be definitely positive".into()));
    }
    let e = x.exponent();
    let man = x.mantissa();
    let rad = BigInt::from(x.radius().clone());
    let (mut lo, mut hi) = (man - &rad, man + &rad);
    let mut den = BigInt::one();
    if e >= 0 {
        lo <<= e as u64;
        hi <<= e as u64;
    } else {
        den <<= (-e) as u64;
    }
    Ok(cf_interval(lo, den.clone(), hi, den, count))
}

/// Partial quotients of the positive rational `p/q`.
pub fn cf_terms_rational(p: &BigInt, q: &BigInt, count: usize) -> Result<CfExpansion> {
    if count == 0 {
        return Err(Error::InvalidArgument("count must be positive".into()));
    }
    if !p.is_positive() || !q.is_positive() {
        return Err(Error::Domain("rational must be positive".into()));
    }
    Ok(cf_interval(p.clone(), q.clone(), p.clone(), q.clone(), count))
}

/// Partial quotients of π, computed at `bits` and `2 bits` and cut at the
/// first disagreement.
pub fn pi_cf_terms(count: usize, bits: u64) -> Result<CfExpansion> {
    let a = cf_terms(&compute_pi(bits)?, count)?;
    let b = cf_terms(&compute_pi(2 * bits)?, count)?;
    let agree = a.terms.iter().zip(&b.terms).take_while(|(x, y)| x == y).count();
    let mut terms = a.terms;
    terms.truncate(agree);
    let status = if terms.len() == count { CfStatus::Complete } else { CfStatus::PrecisionExhausted };
    Ok(CfExpansion { terms, status })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Convergent {
    #[serde(serialize_with = "ser_bigint")]
    pub p: BigInt,
    #[serde(serialize_with = "ser_bigint")]
    pub q: BigInt,
    pub index: usize,
}

pub fn convergents(terms: &[BigInt]) -> Result<Vec<Convergent>> {
    if terms.is_empty() {
        return Err(Error::InvalidArgument("no partial quotients given".into()));
    }
    let (mut p0, mut q0) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    let mut out = Vec::with_capacity(terms.len());
    for (index, a) in terms.iter().enumerate() {
        let p = a * &p1 + &p0;
        let q = a * &q1 + &q0;
        out.push(Convergent { p: p.clone(), q: q.clone(), index });
        (p0, q0, p1, q1) = (p1, q1, p, q);
    }
    Ok(out)
}

/// Numerators of π's convergents not exceeding `limit`.
pub fn pi_convergent_numerators_up_to(limit: u64) -> Result<Vec<u64>> {
    let mut bits = 64 + 4 * (64 - limit.leading_zeros() as u64);
    loop {
        let cf = pi_cf_terms(usize::MAX, bits)?;
        let conv = convergents(&cf.terms)?;
        let last = conv.last().map(|c| c.p.clone()).unwrap_or_default();
        if last > BigInt::from(limit) {
            return Ok(conv.iter().filter_map(|c| c.p.to_u64()).filter(|&p| p <= limit).collect());
        }
        bits *= 2;
        if bits > MAX_ESCALATION_BITS {
            return Err(Error::ResourceLimit { requested: bits, max: MAX_ESCALATION_BITS });
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpikeRecord {
    pub n: u64,
    #[serde(serialize_with = "crate::report::ser_mp_value")]
    pub abs_sin: MpReal,
    #[serde(serialize_with = "ser_opt_f64")]
    pub lambda: Option<f64>,
}

/// `|sin a|` against `|sin b|`, raising precision until the enclosures separate.
pub fn cmp_abs_sin(a: u64, b: u64, bits: u64) -> Result<Ordering> {
    if a == b {
        return Ok(Ordering::Equal);
    }
    let mut p = bits;
    loop {
        let sa = sin_int(a, p)?.abs();
        let sb = sin_int(b, p)?.abs();
        if let Some(o) = sa.cmp_interval(&sb) {
            return Ok(o);
        }
        p *= 2;
        if p > MAX_ESCALATION_BITS {
            return Err(Error::Undecidable { what: format!("|sin {a}| vs |sin {b}|"), bits: p / 2 });
        }
    }
}

/// Record minima inside one block, relative to the block alone.
fn local_records(range: std::ops::RangeInclusive<u64>, bits: u64) -> Result<Vec<u64>> {
    let mut out: Vec<u64> = Vec::new();
    let mut best: Option<(u64, MpReal)> = None;
    for n in range {
        let s = sin_int(n, bits)?.abs();
        let smaller = match &best {
            None => true,
            Some((m, bs)) => match s.cmp_interval(bs) {
                Some(o) => o == Ordering::Less,
                None => cmp_abs_sin(n, *m, bits * 2)? == Ordering::Less,
            },
        };
        if smaller {
            out.push(n);
            best = Some((n, s));
        }
    }
    Ok(out)
}

/// Running record minima of `|sin n|` over `1..=n_max`, ascending.
pub fn spike_indices(n_max: u64, bits: u64) -> Result<Vec<SpikeRecord>> {
    spike_indices_with(n_max, bits, Exec::Sequential)
}

pub fn spike_indices_with(n_max: u64, bits: u64, exec: Exec) -> Result<Vec<SpikeRecord>> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be at least 1".into()));
    }
    let blocks = map_chunks(exec, 1..=n_max, DEFAULT_CHUNK, |r| local_records(r, bits))?;
    let mut records: Vec<u64> = Vec::new();
    for block in blocks {
        for n in block {
            let keep = match records.last() {
                None => true,
                Some(&m) => cmp_abs_sin(n, m, bits)? == Ordering::Less,
            };
            if keep {
                records.push(n);
            }
        }
    }
    records
        .into_iter()
        .map(|n| {
            let abs_sin = sin_int(n, bits)?.abs();
            let lambda = if n >= 2 { Some(local_exponent(n, bits)?) } else { None };
            Ok(SpikeRecord { n, abs_sin, lambda })
        })
        .collect()
}

/// λ(n) = −ln|sin n| / ln n in double precision.
pub fn local_exponent(n: u64, bits: u64) -> Result<f64> {
    if n < 2 {
        return Err(Error::Domain(format!("local exponent needs n >= 2, got {n}")));
    }
    let s = sin_int_rel(n, bits)?;
    Ok(-s.ln_abs_f64() / (n as f64).ln())
}

/// CSV with columns `n,abs_sin,lambda,is_convergent_numerator`.
pub fn spikes_csv(records: &[SpikeRecord]) -> Result<String> {
    let limit = records.iter().map(|r| r.n).max().unwrap_or(1);
    let numerators: HashSet<u64> = pi_convergent_numerators_up_to(limit)?.into_iter().collect();
    let mut out = String::from("n,abs_sin,lambda,is_convergent_numerator\n");
    for r in records {
        let lambda = r.lambda.map(|l| format!("{l}")).unwrap_or_default();
        let flag = u8::from(numerators.contains(&r.n));
        out.push_str(&format!("{},{},{},{}\n", r.n, r.abs_sin.to_decimal_guaranteed(), lambda, flag));
    }
    Ok(out)
}
