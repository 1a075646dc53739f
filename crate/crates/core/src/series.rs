//! Partial sums of `Σ G(n)^{2s} / (|sin n|^u n^{v+2s})`.
//!
//! Every term is evaluated to a fixed absolute grid that depends only on the
//! target precision, then the grid integers are added exactly. The sum is
//! therefore independent of chunking, thread count, and where a run was
//! resumed from a checkpoint.

use num_bigint::{BigInt, BigUint};
use num_traits::{Pow, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{g_numerator, GSource};
use crate::exec::{map_chunks, Exec, DEFAULT_CHUNK};
use crate::mp::{check_bits, pow_int_real, sin_int_rel, MpReal};

/// Extra bits between the requested precision and the per-term grid. Covers
/// up to 2^62 terms each contributing at most one grid unit of error.
pub const GRID_GUARD: u64 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesSpec {
    pub s: u32,
    pub u: u32,
    pub v: f64,
    pub bits: u64,
}

impl Default for SeriesSpec {
    fn default() -> Self {
        SeriesSpec { s: 0, u: 2, v: 3.0, bits: 128 }
    }
}

impl SeriesSpec {
    pub fn new(s: u32, bits: u64) -> Self {
        SeriesSpec { s, bits, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.u == 0 {
            return Err(Error::InvalidArgument("sine exponent u must be at least 1".into()));
        }
        if !(self.v.is_finite() && self.v > 0.0) {
            return Err(Error::InvalidArgument("power v must be a positive finite number".into()));
        }
        check_bits(self.bits)
    }

    fn grid_bits(&self) -> u64 {
        self.bits + GRID_GUARD
    }

    /// `v + 2s` as an exact machine integer when it is one.
    fn int_power(&self) -> Option<u32> {
        let w = self.v + 2.0 * self.s as f64;
        (w.fract() == 0.0 && w <= u32::MAX as f64).then_some(w as u32)
    }
}

/// One term with absolute error at most `2^-g`, midpoint on grid `2^-(g+2)`.
fn term_at(n: u64, spec: &SeriesSpec, g: u64) -> Result<MpReal> {
    if n == 0 {
        return Err(Error::InvalidArgument("series index starts at 1".into()));
    }
    let num = if spec.s == 0 {
        BigInt::from(1)
    } else {
        Pow::pow(g_numerator(n).0, 2 * spec.s)
    };
    let grid = -(g as i64) - 2;
    // magnitude estimate fixes how much relative precision reaches 2^-g
    let rough = sin_int_rel(n, 24)?;
    let est = num.bits() as f64
        - spec.u as f64 * rough.ln_abs_f64() / std::f64::consts::LN_2
        - (spec.v + 2.0 * spec.s as f64) * (n as f64).log2();
    let mut rel = g + 8 + est.max(0.0).ceil() as u64;
    loop {
        let p = rel + 16 + 64 - (spec.u as u64).leading_zeros() as u64;
        let sin = sin_int_rel(n, p)?.abs();
        let power = match spec.int_power() {
            Some(w) => MpReal::from_int(Pow::pow(BigInt::from(n), w)),
            None => {
                let w = MpReal::from_f64(spec.v).expect("finite").add_exact(&MpReal::from_int(2 * spec.s));
                pow_int_real(n, &w, p)?
            }
        };
        let den = sin.powu(spec.u as u64, p).mul(&power, p);
        let t = MpReal::from_int(num.clone()).div(&den, rel + 4)?.align_to_exp(grid);
        if t.err_le_pow2(-(g as i64)) {
            return Ok(t);
        }
        rel += 32;
    }
}

/// The summand at index `n`, absolute error at most `2^-bits`.
pub fn term(n: u64, spec: &SeriesSpec) -> Result<MpReal> {
    spec.validate()?;
    term_at(n, spec, spec.bits)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PartialSumResult {
    pub spec: SeriesSpec,
    pub k: u64,
    /// Midpoint on the term grid with the accumulated error as its radius.
    pub value: MpReal,
    /// Whether any numerator past the direct-evaluation limit was taken as `n`.
    pub g_source: GSource,
}

impl PartialSumResult {
    pub fn err(&self) -> MpReal {
        self.value.err()
    }

    pub fn to_checkpoint(&self) -> Checkpoint {
        Checkpoint {
            version: CHECKPOINT_VERSION,
            spec: self.spec,
            k: self.k,
            value: self.value.to_decimal_exact(),
            err: self.value.err_to_decimal_exact(),
        }
    }

    pub fn from_checkpoint(c: &Checkpoint) -> Result<Self> {
        if c.version != CHECKPOINT_VERSION {
            return Err(Error::CheckpointMismatch(format!("unsupported checkpoint version {}", c.version)));
        }
        c.spec.validate()?;
        let grid = -(c.spec.grid_bits() as i64) - 2;
        let bad = |what: &str| Error::CheckpointMismatch(format!("{what} is not on the grid of the stored spec"));
        let mid = MpReal::from_decimal_exact(&c.value).map_err(|_| bad("value"))?;
        let err = MpReal::from_decimal_exact(&c.err).map_err(|_| bad("err"))?;
        if mid.exponent() < grid || err.exponent() < grid || err.mantissa().sign() == num_bigint::Sign::Minus {
            return Err(bad("value or err"));
        }
        let mid = mid.align_to_exp(grid);
        let err = err.align_to_exp(grid);
        let value = MpReal::from_parts(mid.mantissa().clone(), grid, err.mantissa().magnitude().clone());
        let g_source = if c.spec.s > 0 && c.k > crate::exact::DIRECT_G_LIMIT {
            GSource::Collapsed
        } else {
            GSource::DoubleSum
        };
        Ok(PartialSumResult { spec: c.spec, k: c.k, value, g_source })
    }
}

pub const CHECKPOINT_VERSION: u32 = 1;

/// On-disk form; decimal strings are exact.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub version: u32,
    pub spec: SeriesSpec,
    pub k: u64,
    pub value: String,
    pub err: String,
}

impl Checkpoint {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::CheckpointMismatch(format!("unreadable checkpoint: {e}")))
    }
}

fn sum_block(range: std::ops::RangeInclusive<u64>, spec: &SeriesSpec) -> Result<(BigInt, BigUint)> {
    let g = spec.grid_bits();
    let mut mid = BigInt::zero();
    let mut rad = BigUint::zero();
    for n in range {
        let t = term_at(n, spec, g)?;
        mid += t.mantissa();
        rad += t.radius();
    }
    Ok((mid, rad))
}

/// Sum of terms `1..=k`, or `checkpoint.k+1..=k` on top of a checkpoint.
pub fn partial_sum(k: u64, spec: &SeriesSpec, checkpoint: Option<&PartialSumResult>) -> Result<PartialSumResult> {
    partial_sum_with(k, spec, checkpoint, Exec::Sequential)
}

pub fn partial_sum_with(
    k: u64,
    spec: &SeriesSpec,
    checkpoint: Option<&PartialSumResult>,
    exec: Exec,
) -> Result<PartialSumResult> {
    spec.validate()?;
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let grid = -(spec.grid_bits() as i64) - 2;
    let (start, mut mid, mut rad) = match checkpoint {
        None => (1, BigInt::zero(), BigUint::zero()),
        Some(c) => {
            if c.spec != *spec {
                return Err(Error::CheckpointMismatch(format!(
                    "checkpoint spec {:?} differs from requested {:?}",
                    c.spec, spec
                )));
            }
            if c.k >= k {
                return Err(Error::CheckpointMismatch(format!("checkpoint already at k={}, asked for k={k}", c.k)));
            }
            let v = c.value.clone().align_to_exp(grid);
            (c.k + 1, v.mantissa().clone(), v.radius().clone())
        }
    };
    let blocks = map_chunks(exec, start..=k, DEFAULT_CHUNK, |r| sum_block(r, spec))?;
    for (m, r) in blocks {
        mid += m;
        rad += r;
    }
    let g_source = if spec.s > 0 && k > crate::exact::DIRECT_G_LIMIT {
        GSource::Collapsed
    } else {
        GSource::DoubleSum
    };
    Ok(PartialSumResult { spec: *spec, k, value: MpReal::from_parts(mid, grid, rad), g_source })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquivRow {
    pub s: u32,
    #[serde(serialize_with = "crate::report::ser_mp_value")]
    pub value: MpReal,
    #[serde(serialize_with = "crate::report::ser_mp_err")]
    pub err: MpReal,
    /// `|S_s(k) − S_0(k)|` between midpoints, exact.
    #[serde(serialize_with = "crate::report::ser_mp_upper")]
    pub delta_vs_s0: MpReal,
}

/// Partial sums for `s = 0..=s_max` at the same `k`.
pub fn equivalence_experiment(k: u64, s_max: u32, bits: u64, exec: Exec) -> Result<Vec<EquivRow>> {
    if s_max == 0 {
        return Err(Error::InvalidArgument("s_max must be at least 1".into()));
    }
    let base = partial_sum_with(k, &SeriesSpec::new(0, bits), None, exec)?;
    let mut rows = Vec::new();
    for s in 0..=s_max {
        let r = if s == 0 { base.clone() } else { partial_sum_with(k, &SeriesSpec::new(s, bits), None, exec)? };
        let delta = r.value.midpoint().sub_exact(&base.value.midpoint()).abs();
        rows.push(EquivRow { s, value: r.value.clone(), err: r.err(), delta_vs_s0: delta });
    }
    Ok(rows)
}

pub const SERIES_CSV_HEADER: &str = "k,s,u,v,value,err";

pub fn series_csv_row(r: &PartialSumResult) -> String {
    format!(
        "{},{},{},{},{},{}",
        r.k,
        r.spec.s,
        r.spec.u,
        r.spec.v,
        r.value.to_decimal_guaranteed(),
        r.value.err_to_sci()
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_terms() {
        let spec = SeriesSpec::new(0, 80);
        let t1 = term(1, &spec).unwrap();
        assert!((t1.to_f64() - 1.0 / 1f64.sin().powi(2)).abs() < 1e-14);
        let t1s = term(1, &SeriesSpec::new(3, 80)).unwrap();
        assert_eq!(t1.cmp_mid(&t1s), std::cmp::Ordering::Equal);
        let t355 = term(355, &spec).unwrap();
        assert!((t355.to_f64() - 24.6).abs() < 0.1, "{}", t355.to_f64());
    }

    #[test]
    fn two_term_sum() {
        let spec = SeriesSpec::new(0, 64);
        let s1 = partial_sum(1, &spec, None).unwrap();
        assert!((s1.value.to_f64() - 1.41228).abs() < 1e-5);
        let s2 = partial_sum(2, &spec, None).unwrap();
        assert!((s2.value.to_f64() - 1.56347).abs() < 1e-5);
    }

    #[test]
    fn resume_matches_fresh() {
        let spec = SeriesSpec::new(0, 64);
        let fresh = partial_sum(300, &spec, None).unwrap();
        let half = partial_sum(150, &spec, None).unwrap();
        let cp = PartialSumResult::from_checkpoint(&Checkpoint::from_json(&half.to_checkpoint().to_json().unwrap()).unwrap())
            .unwrap();
        assert_eq!(cp, half);
        let resumed = partial_sum(300, &spec, Some(&cp)).unwrap();
        assert_eq!(resumed, fresh);
    }

    #[test]
    fn checkpoint_checks() {
        let spec = SeriesSpec::new(0, 64);
        let half = partial_sum(10, &spec, None).unwrap();
        assert!(matches!(partial_sum(20, &SeriesSpec::new(1, 64), Some(&half)), Err(Error::CheckpointMismatch(_))));
        assert!(matches!(partial_sum(5, &spec, Some(&half)), Err(Error::CheckpointMismatch(_))));
        assert!(matches!(Checkpoint::from_json("{}"), Err(Error::CheckpointMismatch(_))));
    }

    #[test]
    fn real_power_family() {
        let spec = SeriesSpec { s: 0, u: 1, v: 2.5, bits: 64 };
        let t = term(2, &spec).unwrap();
        let want = 1.0 / (2f64.sin().abs() * 2f64.powf(2.5));
        assert!((t.to_f64() - want).abs() < 1e-15);
        assert!(SeriesSpec { u: 0, ..spec }.validate().is_err());
        assert!(SeriesSpec { v: -1.0, ..spec }.validate().is_err());
    }

    #[test]
    fn equivalence_small() {
        let rows = equivalence_experiment(1, 5, 64, Exec::Sequential).unwrap();
        assert!(rows.iter().all(|r| r.delta_vs_s0.mantissa().is_zero()));
    }
}
