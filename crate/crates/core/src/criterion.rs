//! The sufficient condition `|G(n)|^{2s} <= sin² n · n^{2s+2−ε}`, checked per
//! `n` with rigorous enclosures, plus range scans and the λ profile.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::Pow;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{g_numerator, GSource};
use crate::exec::{map_chunks, Exec, DEFAULT_CHUNK};
use crate::mp::{check_bits, pow_int_real, sin_int_rel, MpReal};
use crate::rationality::{local_exponent, MAX_ESCALATION_BITS};
use crate::report::ser_mp_value;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionReport {
    pub n: u64,
    pub s: u32,
    /// Taken as the exact binary value of the double.
    pub epsilon: f64,
    #[serde(serialize_with = "ser_mp_value")]
    pub lhs: MpReal,
    #[serde(serialize_with = "ser_mp_value")]
    pub rhs: MpReal,
    pub satisfied: bool,
    pub ln_lhs: f64,
    pub ln_rhs: f64,
    /// `ln rhs − ln lhs`; negative exactly when violated.
    pub margin: f64,
    /// Precision at which the comparison separated.
    pub bits_used: u64,
    pub g_source: GSource,
}

fn validate(n: u64, s: u32, epsilon: f64, bits: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if s == 0 {
        return Err(Error::InvalidArgument("s must be at least 1".into()));
    }
    if !(epsilon > 0.0 && epsilon < 2.0) {
        return Err(Error::InvalidArgument(format!("epsilon must lie in (0, 2), got {epsilon}")));
    }
    check_bits(bits)
}

pub fn check_criterion(n: u64, s: u32, epsilon: f64, bits: u64) -> Result<CriterionReport> {
    validate(n, s, epsilon, bits)?;
    let (g, g_source) = g_numerator(n);
    let lhs = MpReal::from_int(Pow::pow(g, 2 * s));
    let power = MpReal::from_int(2 * s as u64 + 2).sub_exact(&MpReal::from_f64(epsilon).expect("finite"));
    let mut p = bits;
    loop {
        let sin = sin_int_rel(n, p + 8)?;
        let rhs = sin.sqr(p + 8).mul(&pow_int_real(n, &power, p + 8)?, p + 8);
        if let Some(o) = lhs.cmp_interval(&rhs) {
            let ln_lhs = lhs.ln_abs_f64();
            let ln_rhs = rhs.ln_abs_f64();
            return Ok(CriterionReport {
                n,
                s,
                epsilon,
                satisfied: o != Ordering::Greater,
                margin: ln_rhs - ln_lhs,
                ln_lhs,
                ln_rhs,
                lhs,
                rhs,
                bits_used: p,
                g_source,
            });
        }
        p *= 2;
        if p > MAX_ESCALATION_BITS {
            return Err(Error::Undecidable { what: format!("criterion at n={n}"), bits: p / 2 });
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ScanSummary {
    pub checked: u64,
    pub violations: u64,
    pub worst_margin_n: Option<u64>,
    pub worst_margin: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanResult {
    pub violations: Vec<CriterionReport>,
    pub summary: ScanSummary,
}

struct Block {
    violations: Vec<CriterionReport>,
    checked: u64,
    worst: Option<(u64, f64)>,
}

fn scan_block(range: std::ops::RangeInclusive<u64>, s: u32, epsilon: f64, bits: u64) -> Result<Block> {
    let mut b = Block { violations: Vec::new(), checked: 0, worst: None };
    for n in range {
        let r = check_criterion(n, s, epsilon, bits)?;
        b.checked += 1;
        if b.worst.is_none_or(|(_, m)| r.margin < m) {
            b.worst = Some((n, r.margin));
        }
        if !r.satisfied {
            b.violations.push(r);
        }
    }
    Ok(b)
}

/// Check every `n` in `from..=to`; violations come back ascending.
pub fn scan_criterion(from: u64, to: u64, s: u32, epsilon: f64, bits: u64, exec: Exec) -> Result<ScanResult> {
    if from == 0 || from > to {
        return Err(Error::InvalidArgument(format!("invalid range {from}..={to}")));
    }
    validate(from, s, epsilon, bits)?;
    let blocks = map_chunks(exec, from..=to, DEFAULT_CHUNK, |r| scan_block(r, s, epsilon, bits))?;
    let mut violations = Vec::new();
    let mut summary = ScanSummary::default();
    let mut worst: Option<(u64, f64)> = None;
    for b in blocks {
        summary.checked += b.checked;
        violations.extend(b.violations);
        if let Some((n, m)) = b.worst {
            if worst.is_none_or(|(_, w)| m < w) {
                worst = Some((n, m));
            }
        }
    }
    summary.violations = violations.len() as u64;
    summary.worst_margin_n = worst.map(|w| w.0);
    summary.worst_margin = worst.map(|w| w.1);
    Ok(ScanResult { violations, summary })
}

pub const VIOLATIONS_CSV_HEADER: &str = "n,s,epsilon,ln_lhs,ln_rhs,margin";

pub fn violations_csv(violations: &[CriterionReport]) -> String {
    let mut out = format!("{VIOLATIONS_CSV_HEADER}\n");
    for r in violations {
        out.push_str(&format!("{},{},{},{},{},{}\n", r.n, r.s, r.epsilon, r.ln_lhs, r.ln_rhs, r.margin));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProfileRow {
    pub n: u64,
    pub lambda: f64,
    pub running_max: f64,
}

/// λ(n) for `2..=n_max` with its running maximum.
pub fn exponent_profile(n_max: u64, bits: u64) -> Result<Vec<ProfileRow>> {
    if n_max < 2 {
        return Err(Error::InvalidArgument("n_max must be at least 2".into()));
    }
    let mut rows = Vec::with_capacity(n_max as usize - 1);
    let mut best = f64::NEG_INFINITY;
    for n in 2..=n_max {
        let lambda = local_exponent(n, bits)?;
        best = best.max(lambda);
        rows.push(ProfileRow { n, lambda, running_max: best });
    }
    Ok(rows)
}

/// `G(n)^{2s}` as used on the left-hand side.
pub fn lhs_value(n: u64, s: u32) -> BigInt {
    Pow::pow(g_numerator(n).0, 2 * s)
}
