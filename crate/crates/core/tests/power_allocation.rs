use irs_mimo::transceiver::{equal_allocation, rate_from_gains, waterfilling};
use proptest::prelude::*;
use rand::Rng;

mod common;

fn gain_sets() -> impl Strategy<Value = Vec<f64>> {
    // gains spread over six decades, as stream gains of a real channel are
    prop::collection::vec((-3.0f64..3.0).prop_map(|e| 10f64.powf(e)), 1..=6)
}

/// Best rate over a uniform grid of feasible water levels.
fn grid_search_rate(gains: &[f64], total: f64, noise: f64, points: usize) -> f64 {
    let floors: Vec<f64> = gains.iter().map(|g| noise / g).collect();
    // the strongest stream alone bounds the level: μ − f_min ≤ P
    let lo = floors.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = lo + total;
    let mut best: f64 = 0.0;
    for i in 0..=points {
        let mu = lo + (hi - lo) * i as f64 / points as f64;
        let powers: Vec<f64> = floors.iter().map(|f| (mu - f).max(0.0)).collect();
        let used: f64 = powers.iter().sum();
        if used <= 0.0 || used > total {
            continue;
        }
        // pour what the level leaves unused evenly onto the active set
        let active = powers.iter().filter(|&&p| p > 0.0).count() as f64;
        let scaled: Vec<f64> = powers.iter().map(|&p| if p > 0.0 { p + (total - used) / active } else { 0.0 }).collect();
        best = best.max(rate_from_gains(gains, &scaled, noise));
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn kkt_conditions(gains in gain_sets(), total in 0.01f64..100.0) {
        let a = waterfilling(&gains, total, 1.0).unwrap();
        let mu = a.water_level.unwrap();
        prop_assert!((a.powers.iter().sum::<f64>() - total).abs() <= 1e-9 * total.max(1.0));
        for (p, g) in a.powers.iter().zip(&gains) {
            prop_assert!(*p >= 0.0);
            if *p > 0.0 {
                prop_assert!((p + 1.0 / g - mu).abs() <= 1e-9 * mu.max(1.0));
            } else {
                prop_assert!(1.0 / g >= mu - 1e-9 * mu.max(1.0));
            }
        }
    }

    #[test]
    fn beats_grid_search(gains in gain_sets(), total in 0.01f64..100.0) {
        let a = waterfilling(&gains, total, 1.0).unwrap();
        let r = rate_from_gains(&gains, &a.powers, 1.0);
        let grid = grid_search_rate(&gains, total, 1.0, 10_000);
        prop_assert!(r >= grid - 1e-9, "waterfilling {r} < grid {grid}");
        prop_assert!(r - grid <= 1e-6, "grid {grid} below {r}");
    }

    #[test]
    fn at_least_equal_split(gains in gain_sets(), total in 0.01f64..100.0) {
        let opa = rate_from_gains(&gains, &waterfilling(&gains, total, 1.0).unwrap().powers, 1.0);
        let epa = rate_from_gains(&gains, &equal_allocation(gains.len(), total, 1.0).powers, 1.0);
        prop_assert!(opa >= epa - 1e-12);
    }

    #[test]
    fn monotone_in_power_and_gains(gains in gain_sets(), total in 0.01f64..100.0, idx in 0usize..6, boost in 1.0f64..4.0) {
        let rate = |g: &[f64], p: f64| rate_from_gains(g, &waterfilling(g, p, 1.0).unwrap().powers, 1.0);
        let base = rate(&gains, total);
        prop_assert!(rate(&gains, total * boost) >= base - 1e-12);
        let mut g = gains.clone();
        let i = idx % g.len();
        g[i] *= boost;
        prop_assert!(rate(&g, total) >= base - 1e-12);
    }
}

#[test]
fn no_perturbation_improves() {
    let mut rng = common::rng(11, 0);
    for set in 0..20 {
        let m = 1 + set % 6;
        let gains: Vec<f64> = (0..m).map(|_| 10f64.powf(rng.random_range(-2.0..2.0))).collect();
        let total = 10f64.powf(rng.random_range(-1.0..1.5));
        let opt = waterfilling(&gains, total, 1.0).unwrap();
        let best = rate_from_gains(&gains, &opt.powers, 1.0);
        for _ in 0..5_000 {
            // move mass between two streams, staying feasible
            let (i, j) = (rng.random_range(0..m), rng.random_range(0..m));
            let mut p = opt.powers.clone();
            let delta = rng.random_range(0.0..1.0) * p[i] * 0.5 + rng.random_range(0.0..1e-3) * total;
            let delta = delta.min(p[i]);
            p[i] -= delta;
            p[j] += delta;
            let r = rate_from_gains(&gains, &p, 1.0);
            assert!(r <= best + 1e-9, "perturbation improved {best} to {r}");
        }
    }
}

#[test]
fn weak_stream_grid_oracle() {
    let gains = [1.0, 0.01];
    let a = waterfilling(&gains, 1.0, 1.0).unwrap();
    assert_eq!(a.powers[1], 0.0);
    let r = rate_from_gains(&gains, &a.powers, 1.0);
    assert!((r - grid_search_rate(&gains, 1.0, 1.0, 10_000)).abs() < 1e-6);
}
