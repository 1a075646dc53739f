//! Numerical checks of the multiple-angle identity, the sinc limit, the
//! angle-subtraction decomposition, and the ratio `S_s(k) / S_0(k)`.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{coefficient_abs_sum, g_numerator, multiple_angle_coefficients, DIRECT_G_LIMIT};
use crate::exec::Exec;
use crate::mp::{bitlen, check_bits, cos_any, sin_any, MpReal};
use crate::report::{ser_mp_upper, ser_mp_value};
use crate::series::{partial_sum_with, SeriesSpec};

/// Guard bits granted to the multiple-angle tolerance.
pub const MULTIPLE_ANGLE_GUARD: u64 = 32;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualReport {
    pub description: String,
    pub parameters: Vec<(String, String)>,
    #[serde(serialize_with = "ser_mp_upper")]
    pub residual: MpReal,
    #[serde(serialize_with = "ser_mp_upper")]
    pub tolerance: MpReal,
    pub pass: bool,
}

impl ResidualReport {
    fn new(description: &str, parameters: Vec<(String, String)>, residual: MpReal, tolerance: MpReal) -> Self {
        // judged on the upper end of the enclosure
        let pass = residual.upper_abs().cmp_mid(&tolerance) != std::cmp::Ordering::Greater;
        ResidualReport { description: description.to_string(), parameters, residual, tolerance, pass }
    }

    pub fn param(&self, key: &str) -> Option<&str> {
        self.parameters.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn to_json_line(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

fn kv(k: &str, v: impl ToString) -> (String, String) {
    (k.to_string(), v.to_string())
}

/// `|sin(nθ) − sin θ · Σ c_p cos^p θ|`, tolerance `2^(−bits+32)`.
pub fn verify_multiple_angle(n: u64, theta: &MpReal, bits: u64) -> Result<ResidualReport> {
    check_bits(bits)?;
    let coeffs = multiple_angle_coefficients(n)?;
    let scale = coefficient_abs_sum(&coeffs).bits();
    let w = bits + scale + bitlen(n) + 16;
    let th = theta.midpoint();
    let lhs = sin_any(&th.mul_int(&BigInt::from(n)), w)?;
    let c = cos_any(&th, w)?;
    let c2 = c.sqr(w + scale);
    // Horner in cos² from the top power down
    let mut acc = MpReal::zero();
    for (_, coef) in coeffs.iter().rev() {
        acc = acc.mul(&c2, w + scale).add_exact(&MpReal::from_int(coef.clone()));
    }
    if (n - 1) % 2 == 1 {
        acc = acc.mul(&c, w + scale);
    }
    let rhs = sin_any(&th, w)?.mul(&acc, w + scale);
    let residual = lhs.sub_exact(&rhs).abs().round_to_exp(-(w as i64));
    let tol = MpReal::exact(BigInt::from(1), -(bits as i64) + MULTIPLE_ANGLE_GUARD as i64);
    let params = vec![
        kv("n", n),
        kv("theta", th.to_decimal_exact()),
        kv("bits", bits),
        kv("guard_bits", MULTIPLE_ANGLE_GUARD),
        kv("working_bits", w),
    ];
    Ok(ResidualReport::new("multiple-angle identity", params, residual, tol))
}

/// Deterministic angles in (−π, π) drawn from a seeded ChaCha stream.
pub fn seeded_thetas(seed: u64, count: usize) -> Vec<MpReal> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = std::f64::consts::PI * (1.0 - 1e-9);
    (0..count)
        .map(|_| {
            let u: f64 = rng.gen_range(-b..b);
            MpReal::from_f64(u).expect("finite")
        })
        .collect()
}

/// Multiple-angle checks at `count` seeded angles, seed recorded in each report.
pub fn verify_multiple_angle_seeded(n: u64, seed: u64, count: usize, bits: u64) -> Result<Vec<ResidualReport>> {
    seeded_thetas(seed, count)
        .iter()
        .enumerate()
        .map(|(i, th)| {
            let mut r = verify_multiple_angle(n, th, bits)?;
            r.parameters.push(kv("seed", seed));
            r.parameters.push(kv("draw", i));
            Ok(r)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SincPoint {
    #[serde(serialize_with = "ser_mp_value")]
    pub m: MpReal,
    #[serde(serialize_with = "ser_mp_value")]
    pub ratio: MpReal,
    /// `|ratio − 1|` as an enclosure.
    #[serde(serialize_with = "ser_mp_upper")]
    pub distance: MpReal,
}

/// `sin m / m` for each `m`, at absolute precision `bits`.
pub fn verify_sinc_limit(ms: &[MpReal], bits: u64) -> Result<Vec<SincPoint>> {
    check_bits(bits)?;
    ms.iter()
        .map(|m| {
            if m.sign() != Some(std::cmp::Ordering::Greater) {
                return Err(Error::Domain("sinc limit points must be positive".into()));
            }
            let m = m.midpoint();
            let extra = (-m.mag_log2().unwrap_or(0)).max(0) as u64;
            let ratio = sin_any(&m, bits + extra + 8)?.div(&m, bits + 8)?;
            let distance = ratio.sub_exact(&MpReal::one()).abs();
            Ok(SincPoint { m, ratio, distance })
        })
        .collect()
}

/// Dyadic stand-ins for `10^-1, ..., 10^-count`.
pub fn decimal_powers(count: u32, bits: u64) -> Result<Vec<MpReal>> {
    (1..=count).map(|k| Ok(MpReal::from_decimal(&format!("1e-{k}"), bits)?.midpoint())).collect()
}

/// `|sin(n − a) − (sin n cos a − cos n sin a)|` at tolerance `4·2^-bits`.
/// Refuses inputs whose `sin n` enclosure reaches zero, where the division
/// form of the decomposition has no meaning.
pub fn verify_angle_difference(n: &MpReal, a: &MpReal, bits: u64) -> Result<ResidualReport> {
    check_bits(bits)?;
    let sin_n_check = sin_any(n, bits)?;
    let mut sn_enc = sin_n_check.clone();
    sn_enc.add_err(&n.err());
    if sn_enc.contains_zero() {
        return Err(Error::Degenerate(format!(
            "|sin n| = {} is within its error bound {}",
            sin_n_check.to_f64().abs(),
            sn_enc.err_to_sci()
        )));
    }
    let (nm, am) = (n.midpoint(), a.midpoint());
    let w = bits + 8;
    let lhs = sin_any(&nm.sub_exact(&am), w)?;
    let sn = sin_any(&nm, w)?;
    let cn = cos_any(&nm, w)?;
    let sa = sin_any(&am, w)?;
    let ca = cos_any(&am, w)?;
    let rhs = sn.mul(&ca, w + 8).sub(&cn.mul(&sa, w + 8), w + 8);
    let residual = lhs.sub_exact(&rhs).abs().round_to_exp(-(w as i64) - 4);
    let tol = MpReal::exact(BigInt::from(4), -(bits as i64));
    let params = vec![kv("n", nm.to_decimal_exact()), kv("a", am.to_decimal_exact()), kv("bits", bits)];
    Ok(ResidualReport::new("angle-subtraction decomposition", params, residual, tol))
}

/// `|S_s(k)/S_0(k) − 1|` with tolerance `2(err_s + err_0)/S_0 + 2^-bits`; also
/// records `max |G(n)/n − 1|` over the directly evaluated range.
pub fn verify_iteration_ratio(k: u64, s: u32, bits: u64, exec: Exec) -> Result<ResidualReport> {
    if s == 0 {
        return Err(Error::InvalidArgument("s must be at least 1".into()));
    }
    let s0 = partial_sum_with(k, &SeriesSpec::new(0, bits), None, exec)?;
    let ss = partial_sum_with(k, &SeriesSpec::new(s, bits), None, exec)?;
    let p = bits + 32;
    let residual = ss.value.sub_exact(&s0.value).div(&s0.value, p)?.abs();
    let tol = ss
        .err()
        .add_exact(&s0.err())
        .shl(1)
        .div(&s0.value.lower_abs(), 64)?
        .upper_abs()
        .add_exact(&MpReal::exact(BigInt::from(1), -(bits as i64)));
    let checked = k.min(DIRECT_G_LIMIT);
    let mut g_max = 0f64;
    for n in 1..=checked {
        let d = g_numerator(n).0 - BigInt::from(n);
        if !d.is_zero() {
            g_max = g_max.max((d.to_f64().unwrap_or(f64::INFINITY) / n as f64).abs());
        }
    }
    let params = vec![
        kv("k", k),
        kv("s", s),
        kv("bits", bits),
        kv("g_ratio_max", g_max),
        kv("g_checked_up_to", checked),
    ];
    Ok(ResidualReport::new("iteration ratio S_s/S_0", params, residual, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mp::compute_pi;

    #[test]
    fn multiple_angle_small() {
        let r = verify_multiple_angle(1, &MpReal::from_f64(0.7).unwrap(), 128).unwrap();
        assert!(r.pass);
        let r = verify_multiple_angle(2, &MpReal::from_f64(0.5).unwrap(), 128).unwrap();
        assert!(r.pass);
        let r = verify_multiple_angle(7, &MpReal::from_f64(0.3).unwrap(), 256).unwrap();
        assert!(r.residual.upper_abs_le_pow2(-200));
    }

    #[test]
    fn seeded_reports_carry_seed() {
        let rs = verify_multiple_angle_seeded(5, 42, 3, 128).unwrap();
        assert!(rs.iter().all(|r| r.pass && r.param("seed") == Some("42")));
        assert_eq!(seeded_thetas(42, 3), seeded_thetas(42, 3));
    }

    #[test]
    fn sinc_points() {
        let ms = decimal_powers(3, 128).unwrap();
        let pts = verify_sinc_limit(&ms, 128).unwrap();
        assert!((pts[2].ratio.to_f64() - (1.0 - 1.6667e-7)).abs() < 1e-11);
        assert!(verify_sinc_limit(&[MpReal::zero()], 64).is_err());
    }

    #[test]
    fn angle_difference_cases() {
        let r = verify_angle_difference(&MpReal::from_int(2), &MpReal::from_f64(0.5).unwrap(), 128).unwrap();
        assert!(r.pass);
        let a = MpReal::from_decimal("1e-6", 128).unwrap().midpoint();
        assert!(verify_angle_difference(&MpReal::from_int(355), &a, 128).unwrap().pass);
        let pi = compute_pi(128).unwrap();
        let err = verify_angle_difference(&pi, &MpReal::from_f64(0.1).unwrap(), 128);
        assert!(matches!(err, Err(Error::Degenerate(_))));
    }

    #[test]
    fn ratio_trivial() {
        let r = verify_iteration_ratio(1, 4, 64, Exec::Sequential).unwrap();
        assert!(r.pass && r.residual.mantissa().is_zero());
        let r = verify_iteration_ratio(10, 1, 64, Exec::Sequential).unwrap();
        assert!(r.pass);
        assert_eq!(r.param("g_ratio_max"), Some("0"));
    }
}
