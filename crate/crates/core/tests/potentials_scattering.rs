use std::f64::consts::PI;

use dilute_core::potentials::{RadialPotential, Shell};
use dilute_core::regularize::regularize;
use dilute_core::scattering::{solve, solve_scattering};
use proptest::prelude::*;

fn tanh_closed_form(k: f64, r: f64) -> f64 {
    let kappa = (k / 2.0).sqrt();
    r - (kappa * r).tanh() / kappa
}

fn decreasing_profile(levels: &[f64], widths: &[f64]) -> RadialPotential {
    let mut sorted = levels.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut r = 0.0;
    let shells = sorted
        .iter()
        .zip(widths)
        .map(|(&v, &w)| {
            let s = Shell::new(r, r + w, v);
            r += w;
            s
        })
        .collect();
    RadialPotential::piecewise(0.0, shells).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn square_well_matches_closed_form(k in 0.01f64..1e5, r in 0.1f64..3.0) {
        let sol = solve(&RadialPotential::square_well(k, r).unwrap()).unwrap();
        let expect = tanh_closed_form(k, r);
        prop_assert!(((sol.a - expect) / expect).abs() < 1e-9);
        prop_assert!(sol.a > 0.0 && sol.a < r);
    }

    #[test]
    fn born_identity_and_variational_energy(
        levels in prop::collection::vec(0.1f64..500.0, 1..5),
        widths in prop::collection::vec(0.05f64..0.8, 5),
    ) {
        let v = decreasing_profile(&levels, &widths);
        let sol = solve(&v).unwrap();
        let g0 = sol.fourier_hat(0.0).unwrap();
        prop_assert!(((g0 - 8.0 * PI * sol.a) / (8.0 * PI * sol.a)).abs() < 1e-8);
        let e = sol.variational_energy().unwrap();
        prop_assert!(((e - sol.a) / sol.a).abs() < 1e-8);
        prop_assert!(sol.g_omega_zero().unwrap() <= g0 * (1.0 + 1e-12));
    }

    #[test]
    fn monotone_in_the_potential(
        levels in prop::collection::vec(0.1f64..500.0, 1..5),
        widths in prop::collection::vec(0.05f64..0.8, 5),
        k in 1.0f64..200.0,
    ) {
        let v = decreasing_profile(&levels, &widths);
        let capped = v.min_cap(k).unwrap();
        let (sv, sc) = (solve(&v).unwrap(), solve(&capped).unwrap());
        prop_assert!(sc.a <= sv.a * (1.0 + 1e-12));
        let gap = sv.a - sc.a;
        prop_assert!(gap <= 2.0 * 2f64.sqrt() / k.sqrt());
        for i in 1..40 {
            let r = v.support_radius() * 1.5 * i as f64 / 40.0;
            prop_assert!(sv.phi_at(r) <= sc.phi_at(r) + 1e-12);
        }
    }

    #[test]
    fn cap_keeps_support_and_never_raises(
        levels in prop::collection::vec(0.1f64..500.0, 1..5),
        widths in prop::collection::vec(0.05f64..0.8, 5),
        k in 0.5f64..600.0,
    ) {
        let v = decreasing_profile(&levels, &widths);
        let capped = v.min_cap(k).unwrap();
        prop_assert!(capped.support_radius() <= v.support_radius());
        for i in 0..200 {
            let r = v.support_radius() * 1.1 * i as f64 / 200.0;
            let (orig, cap) = (v.evaluate(r).unwrap().as_f64(), capped.evaluate(r).unwrap().as_f64());
            prop_assert!(cap <= orig);
            if orig <= k {
                prop_assert_eq!(cap, orig);
            }
        }
    }

    #[test]
    fn truncation_hits_its_target(
        levels in prop::collection::vec(0.1f64..500.0, 1..5),
        widths in prop::collection::vec(0.05f64..0.8, 5),
        s in 0.01f64..5.0,
    ) {
        let v = decreasing_profile(&levels, &widths);
        let a_v = solve(&v).unwrap().a;
        let (t, _) = v.tail_truncate(s, a_v).unwrap();
        let target = v.integral().min(8.0 * PI * s * a_v);
        prop_assert!(((t.integral() - target) / target).abs() < 1e-10);
        prop_assert!(t.support_radius() <= v.support_radius());
    }
}

#[test]
fn difference_monotonicity_on_square_wells() {
    // a(v1) − a(v2) ≥ a(v1 + v') − a(v2 + v') for v1 ≥ v2
    let r = 1.0;
    for (k1, k2, kp) in [(10.0, 2.0, 1.0), (100.0, 5.0, 20.0), (3.0, 1.0, 0.5)] {
        let a = |k: f64| solve(&RadialPotential::square_well(k, r).unwrap()).unwrap().a;
        assert!(a(k1) - a(k2) >= a(k1 + kp) - a(k2 + kp) - 1e-14);
    }
}

#[test]
fn capped_hard_core_family_is_monotone() {
    let core = RadialPotential::hard_core(1.0).unwrap();
    let mut prev = 0.0;
    for k in [1.0, 10.0, 100.0, 1e3, 1e4, 1e6] {
        let a = solve(&core.min_cap(k).unwrap()).unwrap().a;
        assert!(a > prev && a < 1.0);
        prev = a;
    }
    assert!((1.0 - prev) < 2.0 * 2f64.sqrt() / 1e3);
}

#[test]
fn regularized_gap_shrinks_with_ell() {
    let core = RadialPotential::hard_core(1.0).unwrap();
    let mut last = f64::INFINITY;
    for y in [1e-3, 1e-4, 1e-5, 1e-6] {
        let out = regularize(&core, y, 0.05).unwrap();
        let c = &out.certificate;
        assert!(c.a_v <= c.a_big_v);
        assert!(c.a_gap < last);
        last = c.a_gap;
    }
}

#[test]
fn larger_outer_radius_gives_the_same_length() {
    let v = RadialPotential::square_well(50.0, 0.8).unwrap();
    let a = solve(&v).unwrap().a;
    let b = solve_scattering(&v, 6.0, 2048).unwrap().a;
    assert!(((a - b) / a).abs() < 1e-12);
}
