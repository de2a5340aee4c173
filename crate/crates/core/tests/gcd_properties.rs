use nilgrowth_core::gcdsum::{self, BallNorm, LatticeBallSpec};
use proptest::prelude::*;

fn ball(dim: usize, n: u64, offset: &[i64]) -> LatticeBallSpec {
    LatticeBallSpec::centred(dim, n, BallNorm::Cubical).with_offset(offset)
}

fn direct(b: &LatticeBallSpec) -> u128 {
    gcdsum::gcd_sum_direct(b, u128::MAX).unwrap()
}

#[test]
fn hand_counted_balls() {
    assert_eq!(direct(&ball(2, 1, &[0, 0])), 8);
    assert_eq!(direct(&ball(2, 2, &[0, 0])), 32);
    assert_eq!(direct(&ball(2, 1, &[1, 0])), 9);
    assert_eq!(gcdsum::expected_gcd(2, 1).unwrap(), 1.0);
}

#[test]
fn zeta_reference_values() {
    let pi = core::f64::consts::PI;
    let close = |a: f64, b: f64| (a - b).abs() < 1e-9;
    assert!(close(gcdsum::zeta(2.0).unwrap(), pi * pi / 6.0));
    assert!(close(gcdsum::zeta(3.0).unwrap(), 1.202_056_903_2));
    assert!(close(gcdsum::zeta(4.0).unwrap(), pi.powi(4) / 90.0));
}

#[test]
fn normalised_sums_settle() {
    let ratios: Vec<f64> = [200u64, 400, 800]
        .iter()
        .map(|&n| gcdsum::gcd_sum(&ball(3, n, &[0, 0, 0]), u128::MAX).unwrap() as f64 / (n as f64).powi(3))
        .collect();
    let (lo, hi) = (ratios.iter().cloned().fold(f64::MAX, f64::min), ratios.iter().cloned().fold(0.0, f64::max));
    assert!((hi - lo) / lo < 0.05, "{ratios:?}");
    assert!(ratios.windows(2).all(|w| w[0] <= w[1]) || ratios.windows(2).all(|w| w[0] >= w[1]));

    let scale = |n: u64| {
        let x = n as f64;
        gcdsum::gcd_sum(&ball(2, n, &[0, 0]), u128::MAX).unwrap() as f64 / (x * x * x.ln())
    };
    let (a, b) = (scale(1_000), scale(10_000));
    assert!((a - b).abs() / a.min(b) < 0.10, "{a} {b}");
}

#[test]
fn expected_gcd_is_cauchy_in_dim_three() {
    let values: Vec<f64> = (6..=11).map(|e| gcdsum::expected_gcd(3, 1 << e).unwrap()).collect();
    for (i, w) in values.windows(2).enumerate() {
        let n = (1u64 << (i + 6)) as f64;
        assert!((w[1] - w[0]).abs() <= 4.0 * n.ln() / n, "{values:?}");
    }
    assert!(values.iter().all(|&v| v < 2.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn offset_sum_is_sandwiched(n in 3u64..30, a in -3i64..=3, b in -3i64..=3) {
        let sup = a.unsigned_abs().max(b.unsigned_abs());
        let mid = direct(&ball(2, n, &[a, b]));
        let inner = direct(&ball(2, n.saturating_sub(sup), &[0, 0]));
        let outer = direct(&ball(2, n + sup, &[0, 0]));
        prop_assert!(inner <= mid && mid <= outer);
    }

    #[test]
    fn sums_invariant_under_signed_permutations(n in 1u64..12, a in -4i64..=4, b in -4i64..=4, c in -4i64..=4) {
        let base = direct(&ball(3, n, &[a, b, c]));
        prop_assert_eq!(base, direct(&ball(3, n, &[c, a, b])));
        prop_assert_eq!(base, direct(&ball(3, n, &[-a, b, -c])));
        prop_assert_eq!(base, gcdsum::gcd_sum_divisor(&ball(3, n, &[b, -a, c])).unwrap());
    }

    #[test]
    fn l1_routes_agree(dim in 2usize..=4, n in 0u64..12) {
        let b = LatticeBallSpec::centred(dim, n, BallNorm::L1);
        prop_assert_eq!(direct(&b), gcdsum::gcd_sum_divisor(&b).unwrap());
    }
}
