//! The parameter schedule `K_H = K_ℓ⁵, γ = 20η, α = ¼ + η/2,
//! 𝓜 = ρℓ³K_ℓ⁻²¹, m = 10/η` and the scalar hypotheses of the lower-bound
//! theorems, evaluated in log space.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::verdict::{Verdict, VerdictKind};

/// The upper end of the admissible `η` range.
pub const ETA_MAX: f64 = 1.0 / 1026.0;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct RegimeParams {
    pub rho: f64,
    pub a: f64,
    pub temperature: f64,
    pub eta: f64,
    pub nu: f64,
}

/// Derived schedule quantities. Large powers are kept as logarithms.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Derived {
    /// `ln(ρa³)`.
    pub log_y: f64,
    pub log_k_ell: f64,
    pub k_ell: f64,
    pub ell: f64,
    pub log_k_h: f64,
    pub k_h: f64,
    pub gamma: f64,
    pub alpha: f64,
    /// `ln 𝓜`.
    pub log_m_cal: f64,
    pub m: f64,
}

impl RegimeParams {
    pub fn new(rho: f64, a: f64, temperature: f64, eta: f64, nu: f64) -> Result<Self> {
        let ok = rho > 0.0 && a > 0.0 && temperature >= 0.0 && eta > 0.0 && nu > 0.0;
        if !ok || ![rho, a, temperature, eta, nu].iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "regime needs rho, a, eta, nu > 0 and T >= 0; got rho={rho}, a={a}, T={temperature}, eta={eta}, nu={nu}"
            )));
        }
        Ok(Self {
            rho,
            a,
            temperature,
            eta,
            nu,
        })
    }

    pub fn derive(&self) -> Derived {
        let log_y = self.rho.ln() + 3.0 * self.a.ln();
        let log_k_ell = -self.eta * log_y;
        let log_ell = log_k_ell - 0.5 * (self.rho.ln() + self.a.ln());
        let log_k_h = 5.0 * log_k_ell;
        Derived {
            log_y,
            log_k_ell,
            k_ell: log_k_ell.exp(),
            ell: log_ell.exp(),
            log_k_h,
            k_h: log_k_h.exp(),
            gamma: 20.0 * self.eta,
            alpha: 0.25 + self.eta / 2.0,
            log_m_cal: self.rho.ln() + 3.0 * log_ell - 21.0 * log_k_ell,
            m: 10.0 / self.eta,
        }
    }
}

fn le(name: &str, kind: VerdictKind, lhs: f64, rhs: f64) -> Verdict {
    Verdict::new(name, kind, lhs <= rhs, lhs, rhs)
}

fn lt(name: &str, kind: VerdictKind, lhs: f64, rhs: f64) -> Verdict {
    Verdict::new(name, kind, lhs < rhs, lhs, rhs)
}

/// Every scalar hypothesis on the schedule. Inequalities with an unnamed
/// constant are evaluated at `C = 1` and marked structural. Comparisons of
/// powers are made between logarithms; `value`/`bound` hold those logs.
pub fn check_constraints(params: &RegimeParams) -> Vec<Verdict> {
    use VerdictKind::{Exact, Informational, Structural};
    let d = params.derive();
    let (eta, nu) = (params.eta, params.nu);
    let log_y = d.log_y;
    let lk = d.log_k_ell;
    let lh = d.log_k_h;
    let log_rho_ell3 = params.rho.ln() + 3.0 * d.ell.ln();
    let mut out = vec![
        lt("main theorem: eta < 1/1026", Exact, eta, ETA_MAX),
        lt("main theorem: nu < eta/3", Exact, nu, eta / 3.0),
        le(
            "main theorem: T <= rho a (rho a^3)^-nu [log]",
            Exact,
            if params.temperature > 0.0 { params.temperature.ln() } else { f64::NEG_INFINITY },
            (params.rho * params.a).ln() - nu * log_y,
        ),
        le("main theorem: rho a^3 <= C^-1 [log]", Structural, log_y, 0.0),
        Verdict::new("small-N case: alpha > 1/4", Exact, d.alpha > 0.25, d.alpha, 0.25),
        lt("a priori bound: alpha + 5nu/2 < 6/17", Exact, d.alpha + 2.5 * nu, 6.0 / 17.0),
        le("c-number substitution: C K_l^4 <= K_H [log]", Structural, 4.0 * lk, lh),
        le("c-number substitution: K_l K_H^3 <= (rho a^3)^-1/2 [log]", Exact, lk + 3.0 * lh, -0.5 * log_y),
        le(
            "c-number substitution: K_H <= sqrt(l/a) [log]",
            Exact,
            lh,
            0.5 * (d.ell / params.a).ln(),
        ),
        le(
            "c-number substitution: M <= C^-1 rho l^3 K_H^-3 K_l^-17/4 [log]",
            Structural,
            d.log_m_cal,
            log_rho_ell3 - 3.0 * lh - 4.25 * lk,
        ),
        le("cubic term: K_H >= K_l^4 [log]", Exact, 4.0 * lk, lh),
        le(
            "cubic term: K_l^5/4 K_H^2 <= C^-1 (rho a^3)^-1/2 [log]",
            Structural,
            1.25 * lk + 2.0 * lh,
            -0.5 * log_y,
        ),
        Verdict::new("large-|z| lemma: m > 2/eta + 14", Exact, d.m > 2.0 / eta + 14.0, d.m, 2.0 / eta + 14.0),
        le("large-|z| lemma: K_H <= K_l^((m+1)/12) [log]", Exact, lh, (d.m + 1.0) / 12.0 * lk),
        // (ρa³)^{1/18 − 2γ − ν} K_H³ ≤ K_ℓ⁻¹
        le(
            "error term: (rho a^3)^(1/18-2gamma-nu) K_H^3 <= K_l^-1 [log]",
            Exact,
            (1.0 / 18.0 - 2.0 * d.gamma - nu) * log_y + 3.0 * lh,
            -lk,
        ),
    ];
    out.push(
        Verdict::new(
            "gap estimate: M >= rho l^3 (rho a^3)^gamma with gamma = 20 eta [log]",
            Informational,
            d.log_m_cal >= log_rho_ell3 + d.gamma * log_y,
            d.log_m_cal,
            log_rho_ell3 + d.gamma * log_y,
        )
        .with_detail("K_l^-21 < K_l^-20: holds for gamma = 21 eta instead"),
    );
    out
}

/// The constant-free (exact) verdicts of [`check_constraints`].
pub fn exact_constraints(params: &RegimeParams) -> Vec<Verdict> {
    check_constraints(params)
        .into_iter()
        .filter(|v| v.kind == VerdictKind::Exact)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_examples() {
        let p = RegimeParams::new(1e-6, 1.0, 1e-6, 0.1, 0.01).unwrap();
        let d = p.derive();
        assert!((d.k_ell - 10f64.powf(0.6)).abs() < 1e-12);
        assert!((d.m - 100.0).abs() < 1e-12);
        assert!((d.gamma - 2.0).abs() < 1e-12);
        assert!((d.alpha - 0.3).abs() < 1e-12);
        assert!((d.ell * (p.rho * p.a).sqrt() - d.k_ell).abs() < 1e-9 * d.k_ell);
        assert!((d.k_h - d.k_ell.powi(5)).abs() < 1e-9 * d.k_h);
    }

    fn find<'a>(v: &'a [Verdict], prefix: &str) -> &'a Verdict {
        v.iter().find(|x| x.name.starts_with(prefix)).expect("verdict present")
    }

    #[test]
    fn eta_bound() {
        let bad = check_constraints(&RegimeParams::new(1e-6, 1.0, 1e-6, 1e-3, 1e-4).unwrap());
        assert!(!find(&bad, "main theorem: eta").passed);
        let good = check_constraints(&RegimeParams::new(1e-6, 1.0, 1e-6, 5e-4, 1e-4).unwrap());
        assert!(find(&good, "main theorem: eta").passed);
        assert!(find(&good, "main theorem: nu").passed);
    }

    #[test]
    fn m_condition_reduces_to_eta_below_four_sevenths() {
        for eta in [0.01, 0.3, 0.5, 0.57, 0.58, 0.7] {
            let v = check_constraints(&RegimeParams::new(1e-6, 1.0, 1e-6, eta, eta / 10.0).unwrap());
            assert_eq!(find(&v, "large-|z| lemma: m").passed, eta < 4.0 / 7.0, "eta={eta}");
        }
    }

    #[test]
    fn no_overflow_at_extremes() {
        let p = RegimeParams::new(1e-300, 1.0, 1e-300, 9e-4, 1e-5).unwrap();
        for v in check_constraints(&p) {
            assert!(v.value.is_finite() && v.bound.is_finite(), "{v}");
        }
    }
}
