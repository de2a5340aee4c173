use nilgrowth::ball::{
    central_growth, enumerate_ball, growth_exponent_fit, word_length, GeneratingSet, DEFAULT_BUDGET,
};
use nilgrowth::conjugacy::{
    conjugacy_growth, conjugacy_growth_exact, conjugacy_growth_oracle, direct_product_inequality_check, Factor,
};
use nilgrowth::core::class::{central_growth_lower, central_growth_upper};
use nilgrowth::core::gcdsum::{self, BallNorm, LatticeBallSpec};
use nilgrowth::core::quasi::detect_quasi_polynomial;
use nilgrowth::core::{AbelianVector, GroupSpec};
use nilgrowth::embeddings::subgroup_growth_report;
use nilgrowth::io::builtin_spec;
use nilgrowth::series::{select_asymptotic_model, ModelFamily};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn h1() -> GroupSpec {
    builtin_spec("H1").unwrap()
}

#[test]
fn word_lengths_of_central_powers() {
    let g = h1();
    let gens = GeneratingSet::standard(&g);
    assert_eq!(word_length(&g, &gens, &g.identity(), 10, DEFAULT_BUDGET).unwrap(), Some(0));
    assert_eq!(word_length(&g, &gens, &g.central(1), 10, DEFAULT_BUDGET).unwrap(), Some(4));
    let c4 = word_length(&g, &gens, &g.central(4), 10, DEFAULT_BUDGET).unwrap().unwrap();
    assert!(c4 <= 8, "|c^4| = {c4}");
    assert_eq!(word_length(&g, &gens, &g.central(1), 3, DEFAULT_BUDGET).unwrap(), None);
}

#[test]
fn length_is_at_least_abelian_norm() {
    let g = h1();
    let table = enumerate_ball(&g, &GeneratingSet::standard(&g), 8, DEFAULT_BUDGET).unwrap();
    for (x, l) in table.entries() {
        assert!(x.abelian().l1_norm() <= l as u64, "{x:?} at length {l}");
    }
    let a3 = g.pow(&g.generator(0), 3).unwrap();
    assert_eq!(table.length_of(&a3), Some(3));
}

#[test]
fn central_growth_is_quadratic() {
    let g = h1();
    let table = enumerate_ball(&g, &GeneratingSet::standard(&g), 25, DEFAULT_BUDGET).unwrap();
    let central = central_growth(&table);
    assert_eq!(central[0], 1);
    assert!(central[4] >= 3);
    let slope = growth_exponent_fit(&central, 10..=25).unwrap();
    assert!((slope - 2.0).abs() <= 0.2, "slope {slope}");
    for (m, &v) in central.iter().enumerate() {
        assert!(central_growth_lower(m as u64) <= v as u128 && v as u128 <= central_growth_upper(&g, m as u64));
    }
}

#[test]
fn slope_examples() {
    let quartic: Vec<u64> = (0..40u64).map(|n| n.pow(4)).collect();
    assert!((growth_exponent_fit(&quartic, 5..=30).unwrap() - 4.0).abs() < 1e-6);
    let logish: Vec<u64> = (0..=100u64).map(|n| n * n * (n.max(1) as f64).ln().ceil() as u64).collect();
    let s = growth_exponent_fit(&logish, 10..=100).unwrap();
    assert!(s > 2.0 && s < 2.5, "{s}");
}

#[test]
fn enlarged_generating_set_is_comparable() {
    let g = h1();
    let s = GeneratingSet::standard(&g);
    let t = GeneratingSet::standard_with_central(&g);
    let bs = enumerate_ball(&g, &s, 24, DEFAULT_BUDGET).unwrap().cumulative();
    let bt = enumerate_ball(&g, &t, 6, DEFAULT_BUDGET).unwrap().cumulative();
    for n in 0..=6 {
        assert!(bs[n] <= bt[n] && bt[n] <= bs[4 * n], "n = {n}");
    }
    let cs = conjugacy_growth(&g, &s, 24, DEFAULT_BUDGET).unwrap();
    let ct = conjugacy_growth(&g, &t, 6, DEFAULT_BUDGET).unwrap();
    assert_eq!(ct, conjugacy_growth_oracle(&g, &t, 6, DEFAULT_BUDGET).unwrap());
    for n in 0..=6 {
        assert!(cs[n] <= ct[n] && ct[n] <= cs[4 * n], "n = {n}");
    }
}

#[test]
fn parity_cosets_grow_alike() {
    let g = h1();
    let table = enumerate_ball(&g, &GeneratingSet::standard(&g), 20, DEFAULT_BUDGET).unwrap();
    let count = |m: u32, even: bool| table.within(m).filter(|x| (x.coords()[0] % 2 == 0) == even).count();
    for m in 0..20 {
        assert!(count(m, true) <= count(m + 1, false), "m = {m}");
        assert!(count(m, false) <= count(m + 1, true), "m = {m}");
    }
}

#[test]
fn conjugacy_growth_is_monotone_and_below_ball() {
    for name in ["H1", "H2", "HD2", "ZxH1"] {
        let g = builtin_spec(name).unwrap();
        let table = enumerate_ball(&g, &GeneratingSet::standard(&g), 6, DEFAULT_BUDGET).unwrap();
        let c = conjugacy_growth_exact(&g, &table).unwrap();
        let b = table.cumulative();
        assert!(c.windows(2).all(|w| w[0] <= w[1]), "{name}");
        assert!(c.iter().zip(&b).all(|(x, y)| x <= y), "{name}");
    }
}

#[test]
fn weighted_modulus_matches_orbit() {
    let g = builtin_spec("HD2").unwrap();
    assert_eq!(g.class_modulus(&AbelianVector::new(&[0, 0, 1, 0])).unwrap(), 2);
    let gens = GeneratingSet::standard(&g);
    let ball = enumerate_ball(&g, &gens, 6, DEFAULT_BUDGET).unwrap();
    let a2 = g.generator(2);
    let mut ks: Vec<i64> = ball.within(6).map(|x| g.conjugate(x, &a2).unwrap().k()).collect();
    ks.sort();
    ks.dedup();
    assert!(ks.iter().all(|k| k % 2 == 0));
    assert!(ks.contains(&2) && ks.contains(&-2));
}

#[test]
fn direct_products() {
    let z = Factor::Lattice(1);
    let h = Factor::Group(h1());
    for (a, b, n) in [(&z, &z, 8), (&h, &z, 5), (&h, &h, 4)] {
        let report = direct_product_inequality_check(a, b, n, DEFAULT_BUDGET).unwrap();
        assert!(report.passed(), "{a} x {b}: {report:?}");
    }
    let zz = direct_product_inequality_check(&z, &z, 6, DEFAULT_BUDGET).unwrap();
    for m in 0..=6u64 {
        assert_eq!(zz.growth_a[m as usize], 2 * m + 1);
        assert_eq!(zz.growth_product[m as usize] as u128, gcdsum::l1_ball_count(2, m).unwrap());
    }
}

#[test]
fn subgroup_comparison_is_bounded() {
    let g = builtin_spec("HD2").unwrap();
    let report = subgroup_growth_report(&g, 5, DEFAULT_BUDGET).unwrap();
    assert_eq!(report.subgroup.len(), 6);
    assert!(report.max_ratio.is_finite() && report.max_ratio > 0.0);
}

#[test]
fn heisenberg_counts_are_not_quasi_polynomial() {
    let g = h1();
    let values: Vec<i128> = conjugacy_growth(&g, &GeneratingSet::standard(&g), 30, DEFAULT_BUDGET)
        .unwrap()
        .into_iter()
        .map(i128::from)
        .collect();
    for (period, degree) in [(1, 6), (2, 4), (3, 3)] {
        assert_eq!(detect_quasi_polynomial(&values, period, degree).unwrap(), None, "N={period} d={degree}");
    }
    let formula: Vec<f64> = (0..=1000u64)
        .map(|n| {
            let sum = gcdsum::gcd_sum_divisor(&LatticeBallSpec::centred(2, n, BallNorm::L1)).unwrap();
            (sum + central_growth_upper(&g, n)) as f64
        })
        .collect();
    let model = select_asymptotic_model(&formula, (100, 1000)).unwrap();
    assert_eq!((model.family, model.degree), (ModelFamily::PolyLog, 2));
}

#[test]
fn model_selection_survives_noise() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let windows = [(20u64, 100u64), (50, 400), (100, 1000), (30, 150)];
    for trial in 0..64 {
        let family = if trial % 2 == 0 { ModelFamily::Poly } else { ModelFamily::PolyLog };
        let degree = 1 + (trial / 2) % 4;
        let (lo, hi) = windows[trial % windows.len()];
        let constant = rng.gen_range(0.5..10.0);
        let values: Vec<f64> = (0..=hi)
            .map(|n| {
                let x = n.max(1) as f64;
                let shape = x.powi(degree as i32) * if family == ModelFamily::PolyLog { x.ln() } else { 1.0 };
                constant * shape * (1.0 + rng.gen_range(-0.02..=0.02))
            })
            .collect();
        let model = select_asymptotic_model(&values, (lo, hi)).unwrap();
        assert_eq!(
            (model.family, model.degree),
            (family, degree as u32),
            "trial {trial}: window {lo}:{hi}, residual {}",
            model.residual
        );
    }
}
