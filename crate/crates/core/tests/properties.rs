mod common;

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use flintlab::criterion::{check_criterion, scan_criterion};
use flintlab::exact::{binomial, g_value, g_value_with, multiple_angle_coefficients, SummationOrder};
use flintlab::identity::{verify_iteration_ratio, verify_multiple_angle};
use flintlab::mp::{compute_pi, cos_mp, reduce_mod_pi, sin_int, sin_mp};
use flintlab::rationality::{
    cf_terms_rational, convergents, local_exponent, pi_cf_terms, pi_convergent_numerators_up_to, spike_indices,
    CfStatus,
};
use flintlab::series::{partial_sum, Checkpoint, PartialSumResult, SeriesSpec};
use flintlab::{Exec, MpReal};

fn pow2(e: i64) -> MpReal {
    MpReal::exact(BigInt::one(), e)
}

fn le(a: &MpReal, b: &MpReal) -> bool {
    a.cmp_mid(b) != Ordering::Greater
}

// exact combinatorics

#[test]
fn binomial_matches_pascal_rows() {
    let rows = common::pascal_rows(100);
    for (n, row) in rows.iter().enumerate() {
        for (k, c) in row.iter().enumerate() {
            assert_eq!(&binomial(n as u64, k as u64), c, "C({n},{k})");
        }
        assert!(binomial(n as u64, n as u64 + 1).is_zero());
    }
    assert_eq!(binomial(50, 25), rows[50][25]);
}

#[test]
fn g_equals_chebyshev_at_one() {
    for n in 1..=300 {
        assert_eq!(g_value(n).unwrap().value, common::chebyshev_u_at_one(n));
    }
}

#[test]
fn coefficients_match_chebyshev_and_sum_to_g() {
    for n in 1..=200u64 {
        let c = multiple_angle_coefficients(n).unwrap();
        let dense = common::chebyshev_u_coeffs(n);
        for (p, v) in &c {
            assert!(*p < n && p % 2 == (n - 1) % 2);
            assert_eq!(v, &dense[*p as usize], "n={n} power {p}");
        }
        let total: BigInt = c.iter().map(|(_, v)| v.clone()).sum();
        assert_eq!(total, g_value(n).unwrap().value);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn g_is_n(n in 1u64..=2000) {
        prop_assert_eq!(g_value(n).unwrap().value, BigInt::from(n));
    }

    #[test]
    fn pascal_rule(n in 1u64..=100, k in 1u64..=100) {
        prop_assert_eq!(binomial(n, k), binomial(n - 1, k - 1) + binomial(n - 1, k));
    }

    #[test]
    fn summation_order_irrelevant(n in 1u64..=60) {
        prop_assert_eq!(
            g_value_with(n, SummationOrder::RowMajor).unwrap(),
            g_value_with(n, SummationOrder::ColumnMajor).unwrap()
        );
    }

    #[test]
    fn bigint_decimal_roundtrip(v in any::<i128>()) {
        let b = BigInt::from(v);
        prop_assert_eq!(BigInt::parse_bytes(b.to_str_radix(10).as_bytes(), 10).unwrap(), b);
    }
}

// multiprecision reals

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sin_int_double_compute(n in 1u64..=1_000_000, p in 16u64..200) {
        let a = sin_int(n, p).unwrap();
        let b = sin_int(n, 2 * p).unwrap();
        let d = a.midpoint().sub_exact(&b.midpoint()).abs();
        prop_assert!(le(&d, &pow2(1 - p as i64)));
    }

    #[test]
    fn sin_int_bounded(n in 1u64..=1_000_000, p in 16u64..200) {
        let s = sin_int(n, p).unwrap();
        prop_assert!(le(&s.lower_abs(), &MpReal::one().add_exact(&pow2(-(p as i64)))));
        prop_assert!(s.err_le_pow2(-(p as i64)));
    }

    #[test]
    fn pythagorean(x in -3.1f64..3.1, bits in 32u64..300) {
        let x = MpReal::from_f64(x).unwrap();
        let s = sin_mp(&x, bits).unwrap();
        let c = cos_mp(&x, bits).unwrap();
        let one = s.mul_exact(&s).add_exact(&c.mul_exact(&c));
        let d = one.midpoint().sub_exact(&MpReal::one()).abs();
        prop_assert!(le(&d, &pow2(2 - bits as i64)));
    }

    #[test]
    fn reduction_reconstructs(n in 1u64..=1u64 << 40, bits in 16u64..200) {
        let (k, r) = reduce_mod_pi(n, bits).unwrap();
        prop_assert!(r.err_le_pow2(-(bits as i64)));
        let pi = compute_pi(bits + 64).unwrap();
        let back = pi.mul_int(&k).add_exact(&r).midpoint().sub_exact(&MpReal::from_int(n)).abs();
        let log2n = 64 - n.leading_zeros() as i64;
        prop_assert!(le(&back, &pow2(-(bits as i64) + log2n + 2)));
        // r inside (-pi/2, pi/2] up to its error
        prop_assert!(r.lower_abs().to_f64() <= std::f64::consts::FRAC_PI_2);
    }

    #[test]
    fn exact_decimal_roundtrip(m in any::<i64>(), e in -200i64..200) {
        let x = MpReal::exact(BigInt::from(m), e);
        let y = MpReal::from_decimal_exact(&x.to_decimal_exact()).unwrap();
        prop_assert_eq!(x.cmp_mid(&y), Ordering::Equal);
    }
}

// continued fractions and spikes

#[test]
fn spike_records_are_convergent_numerators() {
    let nums = pi_convergent_numerators_up_to(20_000).unwrap();
    for r in spike_indices(20_000, 64).unwrap() {
        if r.n >= 3 {
            assert!(nums.contains(&r.n), "record {} is not a numerator", r.n);
        }
    }
}

#[test]
fn convergent_properties() {
    let cf = pi_cf_terms(30, 512).unwrap();
    assert_eq!(cf.status, CfStatus::Complete);
    let conv = convergents(&cf.terms).unwrap();
    let pi = compute_pi(512).unwrap();
    for w in conv.windows(2) {
        assert!(w[1].q > w[0].q || w[0].index == 0);
    }
    for c in &conv {
        assert!(c.p.gcd(&c.q).is_one());
        // |pi - p/q| * q^2 < 1
        let gap = pi.mul_int(&c.q).sub_exact(&MpReal::from_int(c.p.clone())).abs().mul_int(&c.q);
        assert!(gap.upper_abs().to_f64() < 1.0, "{}/{}", c.p, c.q);
        if c.q <= BigInt::from(100_000) && c.p > BigInt::from(1) {
            let p: u64 = c.p.to_string().parse().unwrap();
            let q = c.q.to_string().parse::<f64>().unwrap();
            let s = sin_int(p, 64).unwrap().abs().to_f64();
            assert!(s <= 2.0 * std::f64::consts::PI / q, "|sin {p}| = {s}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_cf_roundtrip(p in 1i64..1_000_000_000, q in 1i64..1_000_000_000) {
        let (p, q) = (BigInt::from(p), BigInt::from(q));
        let cf = cf_terms_rational(&p, &q, 100).unwrap();
        prop_assert_eq!(cf.status, CfStatus::Terminated);
        let last = convergents(&cf.terms).unwrap().pop().unwrap();
        let g = p.gcd(&q);
        prop_assert_eq!((last.p, last.q), (&p / &g, &q / &g));
    }

    #[test]
    fn lambda_stable_across_precision(n in 2u64..=100_000) {
        let a = local_exponent(n, 64).unwrap();
        let b = local_exponent(n, 128).unwrap();
        prop_assert!((a - b).abs() < 1e-9);
    }
}

// series

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn partial_sums_increase(k in 1u64..200, s in 0u32..3, u in 1u32..4, bits in 32u64..160) {
        let spec = SeriesSpec { s, u, v: 3.0, bits };
        let a = partial_sum(k, &spec, None).unwrap();
        let b = partial_sum(k + 1, &spec, Some(&a)).unwrap();
        prop_assert!(b.value.cmp_mid(&a.value) != Ordering::Less);
        prop_assert!(b.err().cmp_mid(&a.err()) != Ordering::Less);
    }

    #[test]
    fn checkpoint_roundtrip(split in 1u64..300, extra in 1u64..300, s in 0u32..3) {
        let spec = SeriesSpec::new(s, 96);
        let head = partial_sum(split, &spec, None).unwrap();
        let json = head.to_checkpoint().to_json().unwrap();
        let back = PartialSumResult::from_checkpoint(&Checkpoint::from_json(&json).unwrap()).unwrap();
        prop_assert_eq!(&back, &head);
        let resumed = partial_sum(split + extra, &spec, Some(&back)).unwrap();
        prop_assert_eq!(resumed, partial_sum(split + extra, &spec, None).unwrap());
    }

    #[test]
    fn equivalence_within_error(k in 1u64..2000, s in 1u32..=3) {
        let a = partial_sum(k, &SeriesSpec::new(s, 96), None).unwrap();
        let b = partial_sum(k, &SeriesSpec::new(0, 96), None).unwrap();
        let d = a.value.midpoint().sub_exact(&b.value.midpoint()).abs();
        prop_assert!(le(&d, &a.err().add_exact(&b.err())));
    }

    #[test]
    fn precision_doubling(k in 1u64..300, bits in 32u64..128) {
        let a = partial_sum(k, &SeriesSpec::new(0, bits), None).unwrap();
        let b = partial_sum(k, &SeriesSpec::new(0, 2 * bits), None).unwrap();
        let d = a.value.midpoint().sub_exact(&b.value.midpoint()).abs();
        prop_assert!(le(&d, &a.err()));
    }
}

#[test]
fn equivalence_at_ten_thousand() {
    let a = partial_sum(10_000, &SeriesSpec::new(3, 64), None).unwrap();
    let b = partial_sum(10_000, &SeriesSpec::new(0, 64), None).unwrap();
    let d = a.value.midpoint().sub_exact(&b.value.midpoint()).abs();
    assert!(le(&d, &a.err().add_exact(&b.err())));
}

// criterion

#[test]
fn verdict_independent_of_s_and_matches_lambda() {
    let a = scan_criterion(1, 10_000, 1, 0.1, 64, Exec::Sequential).unwrap();
    let b = scan_criterion(1, 10_000, 5, 0.1, 64, Exec::Sequential).unwrap();
    let va: Vec<u64> = a.violations.iter().map(|r| r.n).collect();
    let vb: Vec<u64> = b.violations.iter().map(|r| r.n).collect();
    assert_eq!(va, vb);
    for n in 2..=10_000u64 {
        let l = local_exponent(n, 64).unwrap();
        if (l - 0.95).abs() > 1e-9 {
            assert_eq!(va.binary_search(&n).is_ok(), l > 0.95, "n={n} lambda={l}");
        }
    }
    assert_eq!(a, scan_criterion(1, 10_000, 1, 0.1, 64, Exec::Sequential).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn criterion_deterministic(n in 1u64..50_000, s in 1u32..4, eps in 0.01f64..1.9) {
        prop_assert_eq!(check_criterion(n, s, eps, 64).unwrap(), check_criterion(n, s, eps, 64).unwrap());
    }
}

// identities

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn multiple_angle_random(n in 1u64..=60, theta in -3.1f64..3.1) {
        let r = verify_multiple_angle(n, &MpReal::from_f64(theta).unwrap(), 192).unwrap();
        prop_assert!(r.pass);
    }

    #[test]
    fn residuals_shrink_with_bits(n in 1u64..=30, theta in -3.0f64..3.0) {
        let th = MpReal::from_f64(theta).unwrap();
        let lo = verify_multiple_angle(n, &th, 64).unwrap().residual.upper_abs();
        let hi = verify_multiple_angle(n, &th, 256).unwrap().residual.upper_abs();
        prop_assert!(le(&hi, &lo.shl(-64)));
    }
}

#[test]
fn iteration_ratio_g_component_is_zero() {
    for (k, s) in [(10, 1), (300, 2), (1000, 3)] {
        let r = verify_iteration_ratio(k, s, 96, Exec::Sequential).unwrap();
        assert!(r.pass);
        assert_eq!(r.param("g_ratio_max"), Some("0"));
    }
    let r = verify_iteration_ratio(1000, 2, 128, Exec::Sequential).unwrap();
    assert!(le(&r.residual.upper_abs(), &pow2(-100)));
    assert!(r.residual.mantissa().abs() < BigInt::from(u64::MAX));
}
