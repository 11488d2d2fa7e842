use dilute_core::neumann::{mirror, symmetrized_kernel, NeumannBasis, RadialBump, RadialKernel};
use dilute_core::regimes::{check_constraints, exact_constraints, RegimeParams, ETA_MAX};
use dilute_core::verdict::VerdictKind;
use proptest::prelude::*;

fn dist(x: [f64; 3], y: [f64; 3]) -> f64 {
    ((x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2) + (x[2] - y[2]).powi(2)).sqrt()
}

fn point(ell: f64) -> impl Strategy<Value = [f64; 3]> {
    [0.0..ell, 0.0..ell, 0.0..ell]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn mirrors_move_points_away(x in point(1.3), y in point(1.3), z in [-1i32..=1, -1i32..=1, -1i32..=1]) {
        prop_assert!(dist(mirror(z, x, 1.3), y) >= dist(x, y) - 1e-12);
    }

    #[test]
    fn basis_is_mirror_invariant(x in point(2.0), z in [-1i32..=1, -1i32..=1, -1i32..=1], n in [0u32..4, 0u32..4, 0u32..4]) {
        let b = NeumannBasis::new(2.0).unwrap();
        prop_assert!((b.eval(n, mirror(z, x, 2.0)) - b.eval(n, x)).abs() < 1e-12);
    }

    #[test]
    fn kernel_is_symmetric(x in point(1.0), y in point(1.0), r in 0.05f64..0.5) {
        let f = RadialBump::new(r, 1.0).unwrap();
        let a = symmetrized_kernel(&f, x, y, 1.0).unwrap();
        let b = symmetrized_kernel(&f, y, x, 1.0).unwrap();
        prop_assert!((a - b).abs() <= 1e-14 * a.abs().max(1.0));
    }

    #[test]
    fn kernel_equals_f_away_from_faces(x in point(0.4), y in point(0.4)) {
        let f = RadialBump::new(0.3, 1.0).unwrap();
        let shift = |p: [f64; 3]| p.map(|c| c + 0.3);
        let (x, y) = (shift(x), shift(y));
        let direct = f.value(dist(x, y));
        prop_assert!((symmetrized_kernel(&f, x, y, 1.0).unwrap() - direct).abs() < 1e-15);
    }

    #[test]
    fn schedule_is_admissible_below_eta_max(t in 1e-7f64..1.0, y in 1e-30f64..1e-3) {
        let eta = ETA_MAX * t;
        let p = RegimeParams::new(y, 1.0, y, eta, eta / 4.0).unwrap();
        for v in exact_constraints(&p) {
            prop_assert!(v.passed, "{}", v);
        }
    }

    #[test]
    fn derived_quantities_follow_their_powers(y in 1e-12f64..1e-3, eta in 1e-5f64..9e-4) {
        let lo = RegimeParams::new(y, 1.0, y, eta, eta / 4.0).unwrap().derive();
        let hi = RegimeParams::new(y, 1.0, y, eta * 1.1, eta / 4.0).unwrap().derive();
        prop_assert!(hi.k_ell > lo.k_ell);
        prop_assert!(hi.ell > lo.ell);
        prop_assert!(hi.k_h > lo.k_h);
        prop_assert!(hi.log_m_cal < lo.log_m_cal);
        let denser = RegimeParams::new(y * 2.0, 1.0, y, eta, eta / 4.0).unwrap().derive();
        prop_assert!(denser.ell < lo.ell);
    }
}

#[test]
fn violations_outside_the_range() {
    let p = RegimeParams::new(1e-6, 1.0, 1e-6, 1e-3, 1e-4).unwrap();
    let failed: Vec<_> = check_constraints(&p).into_iter().filter(|v| v.is_failure()).collect();
    let names: Vec<&str> = failed.iter().map(|v| v.name.as_str()).collect();
    assert_eq!(failed.len(), 2, "{names:?}");
    assert!(names.iter().any(|n| n.contains("eta < 1/1026")));
    // 56η + ν > 1/18 just above the admissible range
    assert!(names.iter().any(|n| n.starts_with("error term")));
    assert!(failed.iter().all(|v| v.kind == VerdictKind::Exact));
}

#[test]
fn gamma_diagnostic_is_reported_not_counted() {
    let p = RegimeParams::new(1e-6, 1.0, 1e-6, 5e-4, 1e-4).unwrap();
    let v = check_constraints(&p);
    let diag = v.iter().find(|v| v.name.starts_with("gap estimate")).unwrap();
    assert_eq!(diag.kind, VerdictKind::Informational);
    assert!(!diag.passed && !diag.is_failure());
}
