use std::f64::consts::PI;

use osccrit::coeff::{corollary3_test_function, CoefficientProfile};
use osccrit::criteria::{
    self, check_classical, check_corollary1, check_deng, Auxiliary, ClassicalCriterion,
    VerdictStatus,
};
use osccrit::quad::{
    self, estimate_asymptotic, integrate_split, CumulativeTable, LimitKind, WindowOptions,
};
use osccrit::{mathieu, prufer, riccati};
use proptest::prelude::*;

/// Composite midpoint rule with `n` cells: the independent oracle for adaptive quadrature.
fn midpoint(p: &CoefficientProfile, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    (0..n)
        .map(|i| p.eval(a + (i as f64 + 0.5) * h).unwrap())
        .sum::<f64>()
        * h
}

fn family(kind: u8, x: f64) -> CoefficientProfile {
    match kind % 4 {
        0 => CoefficientProfile::power_cosine(0.5 * x, 1.0, 1.0 + x, 1.0, 1.0).unwrap(),
        1 => CoefficientProfile::mathieu(x - 0.5, 1.0 + 3.0 * x, 0.0).unwrap(),
        2 => CoefficientProfile::log_stack(x, 1.0, 1.0 + x, 2, 3.0).unwrap(),
        _ => CoefficientProfile::power_cosine(0.3, 1.0, 1.0, 0.5 + x, 1.0).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn quadrature_matches_midpoint_oracle(kind in 0u8..4, x in 0.05f64..1.0, a in 0.0f64..40.0, len in 0.5f64..20.0) {
        let p = family(kind, x);
        let (a, b) = (p.t0() + a, p.t0() + a + len);
        let adaptive = integrate_split(|s| p.eval(s), a, b, &[], None, 1e-12).unwrap().value;
        // Midpoint error is O(h²) with h = (b - a)·1e-5.
        let oracle = midpoint(&p, a, b, 100_000);
        prop_assert!((adaptive - oracle).abs() <= 1e-7f64.max(1e-7 * oracle.abs()));
    }

    #[test]
    fn closed_forms_match_quadrature(alpha0 in 0.0f64..1.0, beta in 0.5f64..3.0, delta in -1.0f64..1.0, eps in 0.5f64..4.0) {
        for p in [
            CoefficientProfile::power_cosine(alpha0, 1.0, beta, 1.0, 1.0).unwrap(),
            CoefficientProfile::mathieu(delta, eps, 0.3).unwrap(),
        ] {
            let t0 = p.t0();
            let t = t0 + 50.0;
            let q1 = integrate_split(|s| p.eval(s), t0, t, &[], Some(1.0), 1e-13).unwrap().value;
            prop_assert!((p.cumulative_exact(t).unwrap() - q1).abs() < 1e-7);
            let q2 = integrate_split(|s| Ok((t - s) * p.eval(s)?), t0, t, &[], Some(1.0), 1e-13).unwrap().value;
            prop_assert!((p.iterated_exact(t).unwrap() - q2).abs() < 1e-7);
        }
    }

    #[test]
    fn periodic_cap_is_positive_and_periodic(mu in 0.01f64..50.0, t0 in 0.0f64..10.0) {
        let g = corollary3_test_function(mu).unwrap();
        prop_assert!(g.check_positive(t0, t0 + 100.0, 10_000).is_ok());
        for i in 0..200 {
            let t = t0 + i as f64 * 0.37;
            // Reducing t and t + π modulo π differs by an ulp, amplified by the slope 2μ.
            prop_assert!((g.eval_f(t) - g.eval_f(t + PI)).abs() < 1e-12 * (1.0 + mu));
        }
    }

    #[test]
    fn cesaro_identity_holds(kind in 0u8..4, x in 0.05f64..1.0, span in 5.0f64..150.0) {
        let p = family(kind, x);
        let t0 = p.t0();
        let t = t0 + span;
        let table = CumulativeTable::build(&p, t, 1e-11).unwrap();
        let moment = integrate_split(|s| Ok(s * p.eval(s)?), t0, t, &[], Some(1.0), 1e-12).unwrap().value;
        let rhs = table.q1_at(t).unwrap() - moment / t;
        let lhs = table.q2_at(t).unwrap() / t;
        prop_assert!((lhs - rhs).abs() < 1e-7, "{lhs} vs {rhs}");
    }

    #[test]
    fn weighted_average_of_order_one_is_cesaro_mean(kind in 0u8..4, x in 0.05f64..1.0, span in 5.0f64..150.0) {
        let p = family(kind, x);
        let t = p.t0() + span;
        let table = CumulativeTable::build(&p, t, 1e-12).unwrap();
        let w = quad::weighted_average(&p, 1.0, t, 1e-12).unwrap();
        prop_assert!((w - table.q2_at(t).unwrap() / t).abs() < 1e-9);
    }

    #[test]
    fn liminf_never_exceeds_limsup(kind in 0u8..4, x in 0.05f64..1.0) {
        let p = family(kind, x);
        let h = p.t0() + 400.0;
        let table = CumulativeTable::build(&p, h, 1e-10).unwrap();
        let q2 = table.q2_series();
        let opts = WindowOptions::default();
        let lo = estimate_asymptotic(|t| q2.eval(t) / t, LimitKind::LimInf, p.t0(), h, opts).unwrap();
        let hi = estimate_asymptotic(|t| q2.eval(t) / t, LimitKind::LimSup, p.t0(), h, opts).unwrap();
        prop_assert!(lo.value <= hi.value);
    }

    #[test]
    fn sturm_comparison_on_constants(w1 in 0.1f64..3.0, gap in 0.01f64..2.0, span in 10.0f64..60.0) {
        let lo = CoefficientProfile::constant(w1 * w1, 0.0).unwrap();
        let hi = CoefficientProfile::constant(w1 * w1 + gap, 0.0).unwrap();
        let a = prufer::count_zeros(&lo, 0.0, span, 0.0).unwrap().zero_count;
        let b = prufer::count_zeros(&hi, 0.0, span, 0.0).unwrap().zero_count;
        prop_assert!(b + 1 >= a);
    }

    #[test]
    fn phase_shift_changes_count_by_at_most_one(kind in 0u8..2, x in 0.05f64..1.0) {
        let p = if kind == 0 {
            CoefficientProfile::mathieu(0.2 + x, 1.0, 0.0).unwrap()
        } else {
            CoefficientProfile::constant(0.5 + x, 0.0).unwrap()
        };
        let a = prufer::count_zeros(&p, 0.0, 200.0, 0.0).unwrap().zero_count;
        let b = prufer::count_zeros(&p, 0.0, 200.0, PI / 2.0).unwrap().zero_count;
        prop_assert!(a.abs_diff(b) <= 1);
    }

    #[test]
    fn riccati_comparison(y0 in -0.9f64..2.0, dy in 0.01f64..1.0, kind in 0u8..3) {
        let p = CoefficientProfile::constant([0.0, -1.0, 0.25][kind as usize], 0.0).unwrap();
        let problem = riccati::RiccatiProblem::direct(&p);
        let a = riccati::integrate(&problem, y0, 0.0, 3.0, 1e-10).unwrap();
        let b = riccati::integrate(&problem, y0 + dy, 0.0, 3.0, 1e-10).unwrap();
        let end = a.end_time().min(b.end_time());
        let (sa, sb) = (a.y_series().unwrap(), b.y_series().unwrap());
        for i in 0..=50 {
            let t = end * i as f64 / 50.0;
            prop_assert!(sb.eval(t) >= sa.eval(t) - 1e-7);
        }
    }
}

#[test]
fn extremal_bracket_is_sound_and_grows_with_horizon() {
    for (v, h1, h2) in [(0.0, 50.0, 200.0), (-1.0, 10.0, 30.0), (-0.25, 40.0, 120.0)] {
        let p = CoefficientProfile::constant(v, 0.0).unwrap();
        let problem = riccati::RiccatiProblem::direct(&p);
        let e1 = *riccati::extremal_initial_value(&problem, 0.0, h1, 1e-8)
            .unwrap()
            .estimate()
            .unwrap();
        let e2 = *riccati::extremal_initial_value(&problem, 0.0, h2, 1e-8)
            .unwrap()
            .estimate()
            .unwrap();
        for e in [e1, e2] {
            let low = riccati::integrate(&problem, e.bracket_low, 0.0, e.horizon, 1e-10).unwrap();
            let high = riccati::integrate(&problem, e.bracket_high, 0.0, e.horizon, 1e-10).unwrap();
            assert!(low.blow_up.is_some() && high.blow_up.is_none());
        }
        // A longer horizon excludes more initial values.
        assert!(e2.bracket_high + 1e-8 >= e1.bracket_high, "{e1:?} {e2:?}");
    }
}

#[test]
fn normality_separates_extremal_solution() {
    use osccrit::quad::Convergence;
    for (v, h) in [(0.0, 400.0), (-1.0, 30.0)] {
        let p = CoefficientProfile::constant(v, 0.0).unwrap();
        let problem = riccati::RiccatiProblem::direct(&p);
        let e = *riccati::extremal_initial_value(&problem, 0.0, h, 1e-12)
            .unwrap()
            .estimate()
            .unwrap();
        let regular = riccati::integrate(&problem, e.bracket_high + 1.0, 0.0, h, 1e-11).unwrap();
        let n = riccati::normality_indicator(&regular, &problem, h).unwrap();
        assert_eq!(n.classification(), Convergence::ConvergesLikely, "q = {v}");
        let extremal = riccati::integrate(&problem, e.bracket_high, 0.0, h, 1e-11).unwrap();
        let n = riccati::normality_indicator(&extremal, &problem, h).unwrap();
        assert_eq!(n.classification(), Convergence::DivergesLikely, "q = {v}");
    }
}

#[test]
fn unit_frequency_counts_are_exact() {
    for omega in [0.5f64, 1.0, 2.0, 5.0] {
        let p = CoefficientProfile::constant(omega * omega, 0.0).unwrap();
        let n = prufer::count_zeros(&p, 0.0, 100.0, 0.0).unwrap().zero_count as i64;
        let expect = (100.0 * omega / PI).floor() as i64;
        assert!((n - expect).abs() <= 1, "ω = {omega}: {n} vs {expect}");
    }
}

#[test]
fn deng_is_monotone_in_threshold() {
    let p = CoefficientProfile::power_cosine(0.6, 0.0, 1.0, 1.0, 1.0).unwrap();
    let mut last = true;
    for a0 in [0.26, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8] {
        let ok = check_deng(&p, a0, 2000.0).unwrap().status == VerdictStatus::SatisfiedOnHorizon;
        assert!(last || !ok, "satisfied at {a0} after failing below it");
        last = ok;
    }
    assert!(!last);
}

#[test]
fn corollary1_excludes_hartman() {
    for (a0, c) in [(0.5, 2.0), (0.3, 2.0), (1.0, 3.0)] {
        let p = CoefficientProfile::power_cosine(a0, 1.0, 1.0, 1.0, 1.0).unwrap();
        let q0 = Auxiliary::Power {
            scale: 1.0,
            exponent: 4.0 * a0,
        };
        let v = check_corollary1(&p, &q0, &Auxiliary::Constant { value: c }, 5000.0).unwrap();
        let h = check_classical(&p, ClassicalCriterion::Hartman, 5000.0).unwrap();
        if v.status == VerdictStatus::SatisfiedOnHorizon {
            assert_eq!(h.status, VerdictStatus::FailedOnHorizon, "α0 = {a0}");
        }
    }
}

#[test]
fn verdicts_are_deterministic() {
    let p = CoefficientProfile::log_stack(1.0, 1.0, 1.0, 2, 3.0).unwrap();
    let run = || {
        let k = criteria::check_kong(&p, 2.0, &[], 2000.0).unwrap();
        let c = criteria::classify(&p, 2000.0).unwrap();
        serde_json::to_string(&(k.into_vec(), c)).unwrap()
    };
    assert_eq!(run(), run());
}

#[test]
fn mathieu_closed_form_grid() {
    for eps in [1.0, 4.0] {
        for mu in [0.0, 0.1, 0.5, 0.9, 0.999, 1.0, 1.001, 2.0, 10.0, 100.0] {
            let q = mathieu::functional(eps, mu, 1e-13).unwrap();
            let c = mathieu::functional_closed(eps, mu).unwrap();
            assert!((q - c).abs() < 1e-8, "ε = {eps}, μ = {mu}");
        }
    }
}

#[test]
fn mathieu_minimum_is_scan_robust() {
    for eps in [0.5, 1.0, 4.0, -2.0] {
        let a = mathieu::minimize_with(eps, 1e-10, 4).unwrap();
        let b = mathieu::minimize_with(eps, 1e-10, 8).unwrap();
        assert!((a.m_eps - b.m_eps).abs() < 1e-10);
        assert!(a.samples.iter().all(|&(_, f)| a.m_eps <= f + 1e-12));
    }
}

#[test]
fn inequality31_bridge_on_grid() {
    let pts =
        mathieu::bridge_report(&[-1.0, -0.5, 0.0, 0.3], &[1.0, 4.0], &[0.3, 1.0, 4.0]).unwrap();
    for p in &pts {
        assert!(p.identity_residual < 1e-8, "{p:?}");
        // Full-period margin and functional gap share their sign.
        assert_eq!(p.period_margin > 0.0, p.functional_gap > 0.0, "{p:?}");
    }
}
