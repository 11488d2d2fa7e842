use std::f64::consts::PI;

use dilute_core::free_energy::{
    bog_sum_minus_integral, box_assembly, chemical_potential, f_bog, f_thermo, lhy_integral,
    thermal_sum_compare, BogEvaluator,
};
use dilute_core::potentials::RadialPotential;
use dilute_core::scattering::solve;
use dilute_core::spectral::{bogoliubov, build_lattice, MomentumClass, DEFAULT_BUDGET};
use proptest::prelude::*;

const ZETA_5_2: f64 = 1.341_487_257_250_917;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bogoliubov_coefficients(p in 1e-3f64..10.0, tau in 1e-6f64..100.0, c in 0.0f64..100.0, dc in 0.0f64..10.0) {
        let b = bogoliubov(p, tau, c).unwrap();
        prop_assert!(b.alpha >= 0.0 && b.alpha < 1.0);
        prop_assert!(b.d >= tau);
        prop_assert!(b.d - tau - c <= 1e-12 * (tau + c));
        let b2 = bogoliubov(p, tau, c + dc).unwrap();
        prop_assert!(b2.d >= b.d);
    }

    #[test]
    fn thermo_collapse(y in 1e-9f64..1e-3, t_ratio in 0.05f64..20.0, lambda in 0.1f64..10.0) {
        // f/(ρa)^{5/2} depends only on ρa³ and T/(ρa)
        let (a1, a2) = (1.0_f64, lambda);
        let rho1 = y / a1.powi(3);
        let rho2 = y / a2.powi(3);
        let f1 = f_thermo(rho1, t_ratio * rho1 * a1, a1).unwrap().value / (rho1 * a1).powf(2.5);
        let f2 = f_thermo(rho2, t_ratio * rho2 * a2, a2).unwrap().value / (rho2 * a2).powf(2.5);
        prop_assert!(((f1 - f2) / f1).abs() < 1e-9);
    }

    #[test]
    fn thermal_sum_increases_with_a(a in 0.1f64..3.0, da in 0.01f64..1.0) {
        let rho = 1e-3;
        let ell = 50.0;
        let t = 0.01;
        let lo = BogEvaluator::new(ell, a, t, DEFAULT_BUDGET).unwrap().thermal_sum(rho);
        let hi = BogEvaluator::new(ell, a + da, t, DEFAULT_BUDGET).unwrap().thermal_sum(rho);
        prop_assert!(hi >= lo);
        prop_assert!(lo <= 0.0);
    }
}

#[test]
fn free_gas_limit() {
    for t in [1e-3_f64, 0.5, 2.0] {
        let th = f_thermo(1.0, t, 0.0).unwrap();
        let expect = -PI.powf(1.5) * ZETA_5_2 * t.powf(2.5) / (2.0 * PI).powi(3);
        assert!(((th.thermal - expect) / expect).abs() < 1e-10, "T={t}");
        assert!(th.tail_bound < 1e-15 * expect.abs());
    }
}

#[test]
fn lhy_value() {
    let l = lhy_integral(1.0).unwrap();
    let magnitude = 64.0 * PI.powi(4) * 128.0 / (15.0 * PI.sqrt());
    assert!(((l.value - magnitude) / magnitude).abs() < 1e-10);
}

#[test]
fn f_bog_is_convex_in_n() {
    let eval = BogEvaluator::new(2e4, 1.0, 1e-6, DEFAULT_BUDGET).unwrap();
    let n0 = 1e-6 * 2e4f64.powi(3);
    for k in [-3.0, -1.0, 0.0, 2.0, 5.0] {
        let n = n0 * (1.0 + 0.1 * k);
        let d2 = eval.total(n + 1.0) - 2.0 * eval.total(n) + eval.total(n - 1.0);
        assert!(d2 >= -1e-10 * eval.total(n).abs(), "n={n}: {d2:e}");
    }
}

#[test]
fn f_bog_report_and_cutoff() {
    let r = f_bog(2e4, 8e6, 1.0, 1e-6).unwrap();
    assert!(r.shells > 0);
    assert!(r.sum_tail_bound < 1e-10 * r.thermal_sum.abs());
    assert!(((r.total - r.mean_field - r.lhy - r.thermal_sum) / r.total).abs() < 1e-15);
    let zero = f_bog(10.0, 0.0, 1.0, 0.1).unwrap();
    assert_eq!(zero.mean_field, 0.0);
}

#[test]
fn chemical_potential_matches_analytic() {
    let t = 1e-6_f64;
    let eval = BogEvaluator::new(20.0 / t.sqrt(), 1.0, t, DEFAULT_BUDGET).unwrap();
    let mu = chemical_potential(&eval, 1e-6).unwrap();
    assert!(((mu.mu - mu.analytic) / mu.mu).abs() < 1e-6);
    assert!(mu.mu > mu.mean_field);
}

#[test]
fn assembly_single_box_slack() {
    let eval = BogEvaluator::new(1000.0, 1.0, 1e-6, DEFAULT_BUDGET).unwrap();
    let r = box_assembly(&eval, 1000, 1).unwrap();
    assert_eq!(r.convexity_violation, 0.0);
    assert!(r.assembled <= r.reference * (1.0 + 1e-12));
    assert!(r.reference - r.assembled <= 1e-6 * 1001f64.ln() + 1e-12 * r.reference);
    assert!(r.summed_range.0 <= 1000 && r.summed_range.1 >= 1000);
}

#[test]
fn lattice_identity_deviation_shrinks() {
    let sol = solve(&RadialPotential::square_well(2.0, 1.0).unwrap()).unwrap();
    let rho = 1e-6 / sol.a.powi(3);
    let mut last = f64::INFINITY;
    for kl in [4.0_f64, 8.0, 16.0] {
        let ell = kl / (rho * sol.a).sqrt();
        let r = bog_sum_minus_integral(&sol, ell, rho, kl * kl, DEFAULT_BUDGET).unwrap();
        let rel = (r.deviation / r.lhy).abs();
        assert!(rel < last, "K_l={kl}: {rel}");
        assert!(r.min_g_summand >= 0.0);
        last = rel;
    }
}

#[test]
fn thermal_comparison_is_small_at_low_temperature() {
    let sol = solve(&RadialPotential::square_well(2.0, 1.0).unwrap()).unwrap();
    let rho = 1e-6 / sol.a.powi(3);
    let kl = 8.0;
    let ell = kl / (rho * sol.a).sqrt();
    let c = thermal_sum_compare(&sol, ell, rho, rho * sol.a, kl.powi(5), 1 << 24).unwrap();
    assert!(c.low_d <= 0.0 && c.low_omega <= 0.0);
    assert!(c.high_bound_d >= 0.0);
    assert!(c.dispersion_constant.is_finite());
}

#[test]
fn lattice_classes_partition() {
    let lat = build_lattice(10.0, 5.0, 3.0, DEFAULT_BUDGET).unwrap();
    let total = lat.count(MomentumClass::Zero) + lat.count(MomentumClass::Low) + lat.count(MomentumClass::High);
    assert_eq!(total, lat.points.len());
    assert_eq!(lat.count(MomentumClass::Zero), 1);
}
