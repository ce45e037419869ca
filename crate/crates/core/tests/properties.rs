mod common;

use crowdfund::asymptotics::{lambda_limit, limit_indices, penetration_max, theta_max};
use crowdfund::binomial::{tail_prob, truncated_mean};
use crowdfund::equilibrium::{low_type_payoff, solve, GameParams, Solver};
use crowdfund::indices::{evaluate, supply_probs};
use crowdfund::oracle::simulate;
use crowdfund::EquilibriumProfile;
use proptest::prelude::*;

fn game_strategy(max_n: u64) -> impl Strategy<Value = GameParams> {
    (1..=max_n, 0.501f64..0.999)
        .prop_flat_map(|(n, p)| (Just(n), 1..=n, Just(p)))
        .prop_map(|(n, b, p)| GameParams::new(n, b, p).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn tail_monotone_in_threshold_and_probability(
        m in 0u64..400, g in 0.0f64..=1.0, dg in 0.0f64..0.2, k in -3i64..405,
    ) {
        let here = tail_prob(m, g, k).unwrap();
        prop_assert!((0.0..=1.0).contains(&here));
        prop_assert!(tail_prob(m, g, k + 1).unwrap() <= here * (1.0 + 1e-13));
        let g2 = (g + dg).min(1.0);
        prop_assert!(tail_prob(m, g2, k).unwrap() >= here * (1.0 - 1e-13));
    }

    #[test]
    fn tail_plus_independent_lower_tail_is_one(
        m in 1u64..300, g in 0.001f64..0.999, k in 0i64..301,
    ) {
        let upper = tail_prob(m, g, k).unwrap();
        let lower = common::lower_tail_brute(m, g, k - 1);
        prop_assert!((upper + lower - 1.0).abs() < 1e-12, "{} + {}", upper, lower);
    }

    #[test]
    fn truncated_mean_identity(
        m in 1u64..20_000, g in 0.0f64..=1.0, frac in -0.05f64..1.05,
    ) {
        let b = (frac * m as f64).round() as i64;
        let direct = truncated_mean(m, g, b).unwrap() / m as f64;
        let via_tail = g * tail_prob(m - 1, g, b - 1).unwrap();
        prop_assert!((direct - via_tail).abs() < 1e-12, "{} vs {}", direct, via_tail);
    }

    #[test]
    fn single_crossing_of_low_type_payoff(params in game_strategy(120)) {
        let mut seen_negative = false;
        for i in 0..=1000 {
            let g = low_type_payoff(&params, i as f64 / 1000.0).unwrap();
            if g < 0.0 {
                seen_negative = true;
            }
            prop_assert!(!(seen_negative && g > 0.0), "sign returns positive at {}", i);
        }
    }

    #[test]
    fn equilibrium_invariants(params in game_strategy(300)) {
        let profile = solve(&params).unwrap();
        prop_assert!(profile.lambda >= 0.0 && profile.lambda < 1.0);
        prop_assert_eq!(profile.psi, 1.0);
        prop_assert!(profile.lambda_high > profile.lambda_low);
        if profile.lambda > 0.0 {
            prop_assert!(profile.residual.abs() < 1e-10);
        }
        // x > y holds exactly; in doubles both can round to 1 or underflow to 0
        let supply = supply_probs(&params, &profile);
        prop_assert!(supply.x >= supply.y);
        if params.b >= 2 && supply.x > 0.0 && supply.y < 1.0 - 1e-9 {
            prop_assert!(supply.x > supply.y);
        }
        let coarse = Solver::with_tolerance(1e-8).solve(&params).unwrap();
        prop_assert!((coarse.lambda - profile.lambda).abs() < 1e-7);
    }

    #[test]
    fn index_bounds(params in game_strategy(300)) {
        let idx = evaluate(&params).unwrap();
        prop_assert!((0.0..=1.0).contains(&idx.theta));
        prop_assert!((0.0..=1.0).contains(&idx.penetration));
        let s = idx.supply;
        prop_assert!(s.x >= s.supply_high && s.y >= s.supply_low);
        prop_assert!(idx.penetration <= 0.5 * s.supply_high + 0.5 * s.supply_low + 1e-12);
        prop_assert!((idx.theta - (0.5 * s.supply_high + 0.5 * (1.0 - s.supply_low))).abs() < 1e-15);
        if idx.profile.lambda > 0.0 {
            let p = params.p;
            prop_assert!(((1.0 - p) * s.x - p * s.y).abs() < 1e-10);
        }
    }

    #[test]
    fn lambda_limit_monotone_in_q(p in 0.501f64..0.999, q in 0.0f64..1.0, dq in 0.0f64..0.1) {
        let a = lambda_limit(q, p).unwrap();
        let b = lambda_limit((q + dq).min(1.0), p).unwrap();
        prop_assert!(b >= a);
        if q <= 1.0 - p {
            prop_assert_eq!(a, 0.0);
        }
    }

    #[test]
    fn limit_indifference(p in 0.501f64..0.999, t in 0.001f64..0.999) {
        let q = (1.0 - p) + t * p * 0.999;
        if q < 1.0 && q > 1.0 - p {
            let lim = limit_indices(q, p).unwrap();
            prop_assert!(((1.0 - p) * lim.x_star - p * lim.y_star).abs() < 1e-15);
            prop_assert!(lim.theta_inf >= 0.5 && lim.theta_inf <= theta_max(p).unwrap());
        }
    }
}

#[test]
fn closed_form_maxima_are_monotone_in_accuracy() {
    let mut prev_theta = 0.5;
    let mut prev_pen = 1.0;
    for i in 1..100 {
        let p = 0.5 + i as f64 * 0.005;
        let t = theta_max(p).unwrap();
        let r = penetration_max(p).unwrap();
        assert!(t > 0.5 && r > 0.5);
        assert!(t > prev_theta && r < prev_pen);
        prev_theta = t;
        prev_pen = r;
    }
}

#[test]
fn unit_threshold_zero_lambda_conditional_supply_is_certain() {
    for &(n, p) in &[(1u64, 0.6), (7, 0.9), (40, 0.55)] {
        let params = GameParams::new(n, 1, p).unwrap();
        let profile = EquilibriumProfile::from_lambda(&params, 0.0).unwrap();
        let s = supply_probs(&params, &profile);
        assert_eq!((s.x, s.y), (1.0, 1.0));
    }
}

#[test]
fn higher_threshold_fraction_raises_lambda_on_table_grid() {
    for &p in &[0.55, 0.75, 0.95] {
        for &n in &[5u64, 10, 100, 1000] {
            let lambdas: Vec<f64> = [(1, 3), (1, 2), (9, 10)]
                .iter()
                .map(|&(a, d)| {
                    let b = (a * n).div_ceil(d);
                    solve(&GameParams::new(n, b, p).unwrap()).unwrap().lambda
                })
                .collect();
            assert!(lambdas[0] <= lambdas[1] && lambdas[1] <= lambdas[2], "p={p} n={n}: {lambdas:?}");
        }
    }
}

#[test]
fn lambda_converges_along_half_threshold() {
    for &p in &[0.6, 0.75, 0.9] {
        let target = lambda_limit(0.5, p).unwrap();
        let gaps: Vec<f64> = [100u64, 1000, 10_000]
            .iter()
            .map(|&n| {
                let params = GameParams::new(n, n.div_ceil(2), p).unwrap();
                (solve(&params).unwrap().lambda - target).abs()
            })
            .collect();
        assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "p={p}: {gaps:?}");
    }
}

#[test]
fn doubling_trials_shrinks_standard_errors() {
    let params = GameParams::new(10, 5, 0.75).unwrap();
    let lambda = solve(&params).unwrap().lambda;
    let a = simulate(&params, lambda, 200_000, 11).unwrap();
    let b = simulate(&params, lambda, 400_000, 11).unwrap();
    for (sa, sb) in [
        (a.std_errors.theta, b.std_errors.theta),
        (a.std_errors.penetration, b.std_errors.penetration),
        (a.std_errors.x, b.std_errors.x),
        (a.std_errors.supply_low, b.std_errors.supply_low),
    ] {
        let ratio = sb / sa;
        let expected = std::f64::consts::FRAC_1_SQRT_2;
        assert!((ratio / expected - 1.0).abs() < 0.2, "ratio {ratio}");
    }
}

#[test]
fn simulation_is_independent_of_thread_count() {
    let params = GameParams::new(6, 3, 0.7).unwrap();
    let reference = simulate(&params, 0.2, 200_000, 5).unwrap();
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| simulate(&params, 0.2, 200_000, 5).unwrap());
    assert_eq!(format!("{reference:?}"), format!("{single:?}"));
}
