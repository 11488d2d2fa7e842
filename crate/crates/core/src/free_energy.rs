//! Free-energy formulas: `F_Bog(ℓ, n)` on a Neumann box, the
//! thermodynamic-limit expression `f(ρ, T)`, the LHY integral, the chemical
//! potential, convexity of the thermal sum and the grand-canonical assembly
//! of boxes.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{compensated_sum, integrate, Tolerance};
use crate::scattering::ScatteringSolution;
use crate::spectral::{
    bogoliubov, classify, hybrid_sum, omega_disp, shell_table_to, tau, Domain, HybridOptions,
    HybridSum, MomentumClass, ShellTable, DEFAULT_BUDGET,
};
use crate::verdict::{Verdict, VerdictKind};

/// `128 / (15 √π)`.
pub fn lhy_constant() -> f64 {
    128.0 / (15.0 * PI.sqrt())
}

/// `ln(1 − e^{−x})` for `x > 0`.
pub fn log1mexp(x: f64) -> f64 {
    if x < std::f64::consts::LN_2 {
        (-(-x).exp_m1()).ln()
    } else {
        (-(-x).exp()).ln_1p()
    }
}

/// `G(t) = √(1+2t) − 1 − t + t²/2`, written as `t³(1 + 2/(s+1)) / (2(s+1+t))`
/// with `s = √(1+2t)` to avoid cancellation for small `t`.
pub fn lhy_g(t: f64) -> f64 {
    let s = (1.0 + 2.0 * t).sqrt();
    t.powi(3) * (1.0 + 2.0 / (s + 1.0)) / (2.0 * (s + 1.0 + t))
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct LhyIntegral {
    pub value: f64,
    /// `J = ∫₀^∞ q⁴ G(1/q²) dq`, so that `value = 4π (8πx)^{5/2} J`.
    pub j: f64,
    pub error: f64,
}

/// `J = ∫₀^∞ q⁴ G(1/q²) dq`, split at `q = 1` with `q = 1/s` on the outer part.
pub fn lhy_universal_constant() -> Result<(f64, f64)> {
    let tol = Tolerance::new(1e-16, 1e-14);
    let inner = integrate(|q| if q == 0.0 { 0.5 } else { q.powi(4) * lhy_g(1.0 / (q * q)) }, 0.0, 1.0, tol)?;
    let outer = integrate(
        |s| if s == 0.0 { 0.5 } else { lhy_g(s * s) / s.powi(6) },
        0.0,
        1.0,
        tol,
    )?;
    Ok((inner.value + outer.value, inner.error + outer.error))
}

/// `∫_{ℝ³} p² G(8πx/p²) dp` with `x = ρ_z a`, reduced to
/// `4π (8πx)^{5/2} J` by `p = √(8πx) q`.
pub fn lhy_integral(x: f64) -> Result<LhyIntegral> {
    if !(x >= 0.0) {
        return Err(Error::InvalidArgument(format!("rho_z a must be non-negative, got {x}")));
    }
    let (j, err) = lhy_universal_constant()?;
    let pre = 4.0 * PI * (8.0 * PI * x).powf(2.5);
    Ok(LhyIntegral {
        value: pre * j,
        j,
        error: pre * err,
    })
}

/// `∫_{ℝ³} ln(1 − e^{−√(q⁴ + b q²)}) dq` together with an upper bound on the
/// discarded part beyond `q² = 50`.
pub fn thermal_integral_rescaled(b: f64) -> Result<(f64, f64)> {
    let q_max = 50f64.sqrt();
    let f = |q: f64| {
        if q == 0.0 {
            return 0.0;
        }
        4.0 * PI * q * q * log1mexp(q * (q * q + b).sqrt())
    };
    let tol = Tolerance::new(1e-15, 1e-12);
    let mut cuts = vec![0.0];
    let crossover = b.sqrt();
    if crossover > 0.0 && crossover < q_max {
        cuts.push(crossover);
    }
    cuts.push(q_max);
    let mut parts = Vec::new();
    for w in cuts.windows(2) {
        parts.push(integrate(f, w[0], w[1], tol)?.value);
    }
    // |ln(1−x)| ≤ x/(1−x) and ∫_Q^∞ q² e^{−q²} dq ≤ (Q/2 + 1/(4Q)) e^{−Q²}
    let tail = 4.0 * PI * (q_max / 2.0 + 1.0 / (4.0 * q_max)) * (-50f64).exp() / (1.0 - (-50f64).exp());
    Ok((compensated_sum(parts), tail))
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ThermoValue {
    pub value: f64,
    pub mean_field: f64,
    pub lhy: f64,
    pub thermal: f64,
    pub tail_bound: f64,
}

/// `4πaρ²(1 + c√(ρa³)) + T^{5/2}(2π)^{−3} ∫ ln(1 − e^{−√(p⁴ + 16πρa p²/T)}) dp`.
pub fn f_thermo(rho: f64, temperature: f64, a: f64) -> Result<ThermoValue> {
    if !(rho >= 0.0 && temperature >= 0.0 && a >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "f_thermo needs rho, T, a >= 0; got rho={rho}, T={temperature}, a={a}"
        )));
    }
    let mean_field = 4.0 * PI * a * rho * rho;
    let lhy = mean_field * lhy_constant() * (rho * a.powi(3)).sqrt();
    let (thermal, tail_bound) = if temperature == 0.0 {
        (0.0, 0.0)
    } else {
        let (i, tail) = thermal_integral_rescaled(16.0 * PI * rho * a / temperature)?;
        let pre = temperature.powf(2.5) / (2.0 * PI).powi(3);
        (pre * i, pre * tail)
    };
    Ok(ThermoValue {
        value: mean_field + lhy + thermal,
        mean_field,
        lhy,
        thermal,
        tail_bound,
    })
}

/// Shell cutoff for thermal sums: `p_max² = 60 T`.
pub const THERMAL_CUTOFF: f64 = 60.0;

/// Evaluates `F_Bog(ℓ, n)` for many `n` on a fixed momentum cutoff, so that
/// finite differences in `n` see exactly the same lattice.
#[derive(Debug, Clone)]
pub struct BogEvaluator {
    pub ell: f64,
    pub a: f64,
    pub temperature: f64,
    pub p_max: f64,
    table: Option<ShellTable>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct FreeEnergyReport {
    pub ell: f64,
    pub n: f64,
    pub rho: f64,
    pub mean_field: f64,
    pub lhy: f64,
    pub thermal_sum: f64,
    /// `ℓ³ T^{5/2}(2π)^{−3}∫ ln(1 − e^{−…}) dp` at the same density.
    pub thermal_integral: f64,
    pub total: f64,
    pub p_max: f64,
    pub shells: usize,
    /// Bound on the thermal-sum terms beyond `p_max`.
    pub sum_tail_bound: f64,
    pub integral_tail_bound: f64,
}

impl BogEvaluator {
    pub fn new(ell: f64, a: f64, temperature: f64, budget: u64) -> Result<Self> {
        if !(ell > 0.0 && a >= 0.0 && temperature >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "need ell > 0, a >= 0, T >= 0; got ell={ell}, a={a}, T={temperature}"
            )));
        }
        let p_max = (THERMAL_CUTOFF * temperature).sqrt();
        let table = if temperature > 0.0 {
            Some(shell_table_to(ell, p_max, budget)?)
        } else {
            None
        };
        Ok(Self {
            ell,
            a,
            temperature,
            p_max,
            table,
        })
    }

    pub fn shells(&self) -> usize {
        self.table.as_ref().map_or(0, ShellTable::len)
    }

    /// `T Σ_{p ∈ Λ*₊, |p| ≤ p_max} ln(1 − e^{−ω_p/T})`.
    pub fn thermal_sum(&self, rho: f64) -> f64 {
        let Some(table) = &self.table else {
            return 0.0;
        };
        let t = self.temperature;
        let a = self.a;
        t * table.sum(Domain::Octant, |p| log1mexp(omega_disp(p, a, rho) / t))
    }

    /// `∂_ρ` of the thermal sum, `Σ n_B(ω_p) 8πap²/ω_p`.
    pub fn thermal_sum_drho(&self, rho: f64) -> f64 {
        let Some(table) = &self.table else {
            return 0.0;
        };
        let t = self.temperature;
        let a = self.a;
        table.sum(Domain::Octant, |p| {
            let w = omega_disp(p, a, rho);
            8.0 * PI * a * p * p / w / (w / t).exp_m1()
        })
    }

    /// Upper bound on `|T Σ_{|p| > p_max} ln(1 − e^{−ω/T})|`, using `ω ≥ p²`
    /// and `e^{−p²/T} ≤ e^{−P²/(2T)} e^{−p²/(2T)}` beyond `P`.
    pub fn sum_tail_bound(&self) -> f64 {
        let t = self.temperature;
        if t == 0.0 {
            return 0.0;
        }
        let h = PI / self.ell;
        let c = h * h / (2.0 * t);
        let per_axis = 1.0 + (PI / (4.0 * c)).sqrt();
        let p2 = self.p_max * self.p_max;
        t * (-p2 / (2.0 * t)).exp() * per_axis.powi(3) / (1.0 - (-p2 / t).exp())
    }

    pub fn f_bog(&self, n: f64) -> Result<FreeEnergyReport> {
        if !(n >= 0.0) {
            return Err(Error::InvalidArgument(format!("particle number must be non-negative, got {n}")));
        }
        let ell3 = self.ell.powi(3);
        let rho = n / ell3;
        let mean_field = 4.0 * PI * rho * rho * self.a * ell3;
        let lhy = mean_field * lhy_constant() * (rho * self.a.powi(3)).sqrt();
        let thermal_sum = self.thermal_sum(rho);
        let thermo = f_thermo(rho, self.temperature, self.a)?;
        Ok(FreeEnergyReport {
            ell: self.ell,
            n,
            rho,
            mean_field,
            lhy,
            thermal_sum,
            thermal_integral: thermo.thermal * ell3,
            total: mean_field + lhy + thermal_sum,
            p_max: self.p_max,
            shells: self.shells(),
            sum_tail_bound: self.sum_tail_bound(),
            integral_tail_bound: thermo.tail_bound * ell3,
        })
    }

    /// `F_Bog` only.
    pub fn total(&self, n: f64) -> f64 {
        let ell3 = self.ell.powi(3);
        let rho = n / ell3;
        let mean_field = 4.0 * PI * rho * rho * self.a * ell3;
        mean_field * (1.0 + lhy_constant() * (rho * self.a.powi(3)).sqrt()) + self.thermal_sum(rho)
    }
}

/// `F_Bog(ℓ, n) = 4πρ²aℓ³(1 + c√(ρa³)) + T Σ_{Λ*₊} ln(1 − e^{−ω_p/T})`,
/// `ρ = n/ℓ³`.
pub fn f_bog(ell: f64, n: f64, a: f64, temperature: f64) -> Result<FreeEnergyReport> {
    BogEvaluator::new(ell, a, temperature, DEFAULT_BUDGET)?.f_bog(n)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ChemicalPotential {
    /// Central difference with step 1 in `n`.
    pub mu: f64,
    /// Central difference with step ½.
    pub mu_half_step: f64,
    /// `8πaρ + 10πc a^{5/2}ρ^{3/2} + ℓ⁻³ Σ n_B(ω) 8πap²/ω`.
    pub analytic: f64,
    pub mean_field: f64,
}

/// `μ = ∂F_Bog/∂n` at `n = ρℓ³`. Fails when the two step sizes disagree by
/// more than 1% of `|μ − 8πaρ|` plus rounding.
pub fn chemical_potential(eval: &BogEvaluator, rho: f64) -> Result<ChemicalPotential> {
    let n = rho * eval.ell.powi(3);
    if n < 1.0 {
        return Err(Error::InvalidArgument(format!(
            "chemical potential by finite differences needs rho l^3 >= 1, got {n}"
        )));
    }
    let d = |h: f64| (eval.total(n + h) - eval.total(n - h)) / (2.0 * h);
    let mu = d(1.0);
    let mu_half_step = d(0.5);
    let a = eval.a;
    let mean_field = 8.0 * PI * a * rho;
    let analytic = mean_field
        + 10.0 * PI * lhy_constant() * a.powf(2.5) * rho.powf(1.5)
        + eval.thermal_sum_drho(rho) / eval.ell.powi(3);
    let scale = (mu - mean_field).abs();
    let rounding = 1e-9 * mu.abs();
    if (mu - mu_half_step).abs() > 0.01 * scale + rounding {
        return Err(Error::Resolution(format!(
            "mu(h=1)={mu:e}, mu(h=0.5)={mu_half_step:e}"
        )));
    }
    Ok(ChemicalPotential {
        mu,
        mu_half_step,
        analytic,
        mean_field,
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ConvexityRow {
    pub rho: f64,
    pub step: f64,
    pub d1: f64,
    pub d2: f64,
    pub d1_half_step: f64,
    pub d2_half_step: f64,
    /// `∂_ρ / (T^{5/2} ℓ³)`.
    pub c1_stated: f64,
    /// `−∂²_ρ / (T^{5/2} ℓ³)`.
    pub c2_stated: f64,
    /// `∂_ρ / (a T^{3/2} ℓ³)`.
    pub c1_scaled: f64,
    /// `−∂²_ρ / (a² T^{1/2} ℓ³)`.
    pub c2_scaled: f64,
}

/// Finite-difference `ρ`-derivatives of the thermal lattice sum at each
/// density. Steps are `0.01 · min(ρ, T/(16πa))` and half of that; a
/// disagreement above 1% between the two is a resolution failure.
pub fn convexity_check(eval: &BogEvaluator, rhos: &[f64]) -> Result<Vec<ConvexityRow>> {
    let t = eval.temperature;
    let a = eval.a;
    if !(t > 0.0 && a > 0.0) {
        return Err(Error::InvalidArgument("convexity check needs T > 0 and a > 0".into()));
    }
    let ell3 = eval.ell.powi(3);
    let mut rows = Vec::with_capacity(rhos.len());
    for &rho in rhos {
        let scale_rho = t / (16.0 * PI * a);
        let h = 0.01 * if rho > 0.0 { rho.min(scale_rho) } else { scale_rho };
        let derivs = |h: f64| {
            let lo = if rho - h < 0.0 { None } else { Some(eval.thermal_sum(rho - h)) };
            let mid = eval.thermal_sum(rho);
            let hi = eval.thermal_sum(rho + h);
            match lo {
                Some(lo) => ((hi - lo) / (2.0 * h), (hi - 2.0 * mid + lo) / (h * h)),
                None => {
                    let hi2 = eval.thermal_sum(rho + 2.0 * h);
                    ((hi - mid) / h, (hi2 - 2.0 * hi + mid) / (h * h))
                }
            }
        };
        let (d1, d2) = derivs(h);
        let (d1h, d2h) = derivs(0.5 * h);
        let gate = |x: f64, y: f64, floor: f64| (x - y).abs() <= 0.01 * x.abs().max(y.abs()) + floor;
        let s1 = a * t.powf(1.5) * ell3;
        let s2 = a * a * t.sqrt() * ell3;
        if !gate(d1, d1h, 1e-12 * s1) || !gate(d2, d2h, 1e-10 * s2) {
            return Err(Error::Resolution(format!(
                "rho={rho:e}: d1 {d1:e} vs {d1h:e}, d2 {d2:e} vs {d2h:e}"
            )));
        }
        let stated = t.powf(2.5) * ell3;
        rows.push(ConvexityRow {
            rho,
            step: h,
            d1: d1h,
            d2: d2h,
            d1_half_step: d1h,
            d2_half_step: d2h,
            c1_stated: d1h / stated,
            c2_stated: -d2h / stated,
            c1_scaled: d1h / s1,
            c2_scaled: -d2h / s2,
        });
        let last = rows.last_mut().expect("just pushed");
        last.d1 = d1;
        last.d2 = d2;
    }
    Ok(rows)
}

#[derive(Debug, Clone, Serialize)]
pub struct AssemblyReport {
    pub boxes: u64,
    pub n0: u64,
    pub mu: f64,
    pub assembled: f64,
    /// `M · F_Bog(ℓ, ρℓ³)`.
    pub reference: f64,
    /// Terms `n` actually summed and the bound on the rest, relative to the
    /// largest term.
    pub summed_range: (u64, u64),
    pub remainder_bound: f64,
    /// Largest violation of `F_Bog(n) − μn ≥ F_Bog(n₀) − μn₀` over
    /// `0 ≤ n ≤ 20 n₀` (zero when it holds everywhere).
    pub convexity_violation: f64,
    pub convexity_checked_upto: u64,
    /// `−T log(count of summed terms)`, the largest possible entropy slack.
    pub entropy_slack_bound: f64,
}

/// Grand-canonical assembly `−TM log Σ_{n=0}^{N} e^{−(F(n) − μn)/T} + μρL³`
/// with `N = M n₀`, `ρ = n₀/ℓ³`, `F = F_Bog`. The sum is evaluated with
/// max-factoring; terms are walked outward from the minimizer until they
/// drop below `e^{−60}` of the largest, and convexity bounds the rest by a
/// geometric series.
pub fn box_assembly(eval: &BogEvaluator, n0: u64, boxes: u64) -> Result<AssemblyReport> {
    if n0 < 1 || boxes < 1 {
        return Err(Error::InvalidArgument("box assembly needs n0 >= 1 and M >= 1".into()));
    }
    let t = eval.temperature;
    if !(t > 0.0) {
        return Err(Error::InvalidArgument("box assembly needs T > 0".into()));
    }
    let ell3 = eval.ell.powi(3);
    let rho = n0 as f64 / ell3;
    let mu = chemical_potential(eval, rho)?.mu;
    let energy = |n: u64| eval.total(n as f64) - mu * n as f64;
    let n_total = boxes.saturating_mul(n0);

    let e0 = energy(n0);
    let cutoff = 60.0 * t;
    let mut terms = vec![(n0, e0)];
    let mut remainder = 0.0;
    // upward
    let (mut n, mut prev) = (n0, e0);
    while n < n_total {
        n += 1;
        let e = energy(n);
        terms.push((n, e));
        if e - e0 > cutoff && e > prev {
            let rest = n_total - n;
            let step = e - prev;
            let geometric = (-(e - e0) / t).exp() / (1.0 - (-step / t).exp());
            remainder += if rest as f64 * (-(e - e0) / t).exp() < geometric {
                rest as f64 * (-(e - e0) / t).exp()
            } else {
                geometric
            };
            break;
        }
        prev = e;
    }
    let hi = n;
    // downward
    let (mut n, mut prev) = (n0, e0);
    while n > 0 {
        n -= 1;
        let e = energy(n);
        terms.push((n, e));
        if e - e0 > cutoff && e > prev {
            let rest = n;
            let step = e - prev;
            let geometric = (-(e - e0) / t).exp() / (1.0 - (-step / t).exp());
            remainder += (rest as f64 * (-(e - e0) / t).exp()).min(geometric);
            break;
        }
        prev = e;
    }
    let lo = n;
    let e_min = terms.iter().map(|x| x.1).fold(f64::INFINITY, f64::min);
    terms.sort_by_key(|x| x.0);
    let sum = compensated_sum(terms.iter().map(|&(_, e)| (-(e - e_min) / t).exp()));
    let log_sum = (sum + remainder).ln() - e_min / t;
    let m = boxes as f64;
    let assembled = -t * m * log_sum + mu * rho * m * ell3;
    let reference = m * eval.total(n0 as f64);

    let upto = 20 * n0;
    let mut violation = 0.0_f64;
    for k in 0..=upto {
        let e = if (lo..=hi).contains(&k) {
            terms[(k - lo) as usize].1
        } else {
            energy(k)
        };
        let tol = 1e-12 * e0.abs().max(e.abs());
        violation = violation.max(e0 - e - tol);
    }
    Ok(AssemblyReport {
        boxes,
        n0,
        mu,
        assembled,
        reference,
        summed_range: (lo, hi),
        remainder_bound: remainder,
        convexity_violation: violation.max(0.0),
        convexity_checked_upto: upto,
        entropy_slack_bound: t * m * ((hi - lo + 1) as f64 + remainder).ln(),
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ThermalComparison {
    /// `T Σ_{P_L} ln(1 − e^{−D_p/T})`.
    pub low_d: f64,
    /// `T Σ_{P_L} ln(1 − e^{−ω_p/T})`.
    pub low_omega: f64,
    /// Bounds on the magnitudes of everything not in `low_d`/`low_omega`:
    /// the exact `P_H` terms up to a cutoff plus Gaussian bounds beyond it.
    pub high_bound_d: f64,
    pub high_bound_omega: f64,
    /// Worst case of `D̃-sum − ω-sum`.
    pub gap_lower: f64,
    /// `max(0, −gap_lower) / (ℓ³ (ρ_z a)³)`.
    pub constant: f64,
    /// `max_{P_L} |D_p − ω_p| |p| ℓ² / √(ρ_z a)`.
    pub dispersion_constant: f64,
}

fn gaussian_octant_tail(ell: f64, p_min: f64, temperature: f64) -> f64 {
    let h = PI / ell;
    let c = h * h / (2.0 * temperature);
    let per_axis = 1.0 + (PI / (4.0 * c)).sqrt();
    (-p_min * p_min / (2.0 * temperature)).exp() * per_axis.powi(3)
}

/// Compares `T Σ ln(1 − e^{−D̃_p/T})` with `T Σ ln(1 − e^{−ω_p/T})` over
/// `Λ*₊`, where `D̃_p = D_p` on `P_L` and `D_p/K_H` on `P_H`. Terms are
/// summed exactly up to the radius where `e^{−D̃/T}` drops below `e^{−60}`
/// (or as far as the budget allows) and the rest is bounded using
/// `D_p ≥ τ`, `τ ≥ (1 − 1/2π)p²` on `P_L`, `τ ≥ (1 − 1/2π − 1/K_H)p²` on
/// `P_H` and `ω_p ≥ p²`.
pub fn thermal_sum_compare(
    sol: &ScatteringSolution,
    ell: f64,
    rho_z: f64,
    temperature: f64,
    k_h: f64,
    budget: u64,
) -> Result<ThermalComparison> {
    let t = temperature;
    if t == 0.0 {
        return Ok(ThermalComparison {
            low_d: 0.0,
            low_omega: 0.0,
            high_bound_d: 0.0,
            high_bound_omega: 0.0,
            gap_lower: 0.0,
            constant: 0.0,
            dispersion_constant: 0.0,
        });
    }
    let a = sol.a;
    let p_low = k_h / ell;
    // τ ≥ c_l p² on P_L and τ/K_H ≥ c_h p²/K_H on P_H
    let c_l = 1.0 - 1.0 / (2.0 * PI);
    let c_h = c_l - 1.0 / k_h;
    if !(c_h > 0.0) {
        return Err(Error::InvalidArgument(format!("thermal comparison needs K_H > 1.2, got {k_h}")));
    }
    let n_budget = (budget as f64).cbrt() - 1.0;
    let p_feasible = n_budget * PI / ell;
    let p_low_cut = (THERMAL_CUTOFF * t / c_l).sqrt().min(p_low);
    let p_high_cut = (p_low * p_low + 8.0 * THERMAL_CUTOFF * k_h * t / c_h).sqrt();
    let p_enum = if p_high_cut <= p_feasible {
        p_high_cut
    } else if p_low_cut <= p_feasible {
        p_low_cut
    } else {
        return Err(Error::LatticeBudget {
            requested: ((p_low_cut * ell / PI + 1.0).powi(3)) as u64,
            budget,
        });
    };
    let table = shell_table_to(ell, p_enum * (1.0 + 1e-12), budget)?;
    let ps = table.momenta();
    let ghat = sol.fourier_hat_many(&ps)?;
    let mut low_d = Vec::with_capacity(ps.len());
    let mut low_w = Vec::with_capacity(ps.len());
    let mut high_d = Vec::new();
    let mut high_w = Vec::new();
    let mut disp = 0.0_f64;
    for (i, (&p, &g)) in ps.iter().zip(&ghat).enumerate() {
        let w = table.octant[i] as f64;
        let d = bogoliubov(p, tau(p, ell, k_h), rho_z * g)?.d;
        let om = omega_disp(p, a, rho_z);
        match classify(p, ell, k_h) {
            MomentumClass::Zero => {}
            MomentumClass::Low => {
                low_d.push(w * t * log1mexp(d / t));
                low_w.push(w * t * log1mexp(om / t));
                if rho_z > 0.0 {
                    disp = disp.max((d - om).abs() * p * ell * ell / (rho_z * a).sqrt());
                }
            }
            MomentumClass::High => {
                high_d.push(w * t * log1mexp(d / (k_h * t)));
                high_w.push(w * t * log1mexp(om / t));
            }
        }
    }
    let low_d = compensated_sum(low_d);
    let low_omega = compensated_sum(low_w);
    let high_d = compensated_sum(high_d);
    let high_w = compensated_sum(high_w);
    // Gaussian bounds on everything beyond the enumerated radius
    let tail = |from: f64, temp: f64| {
        let x = (-(from * from) / temp).exp();
        t * gaussian_octant_tail(ell, from, temp) / (1.0 - x)
    };
    let low_tail_d = if p_enum < p_low { tail(p_enum, t / c_l) } else { 0.0 };
    let high_from = p_enum.max(p_low);
    let high_bound_d = low_tail_d - high_d + tail(high_from, k_h * t / c_h);
    let high_bound_omega = -high_w + tail(p_enum, t);
    let gap_lower = (low_d - high_bound_d) - (low_omega + high_w);
    let scale = ell.powi(3) * (rho_z * a).powi(3);
    Ok(ThermalComparison {
        low_d,
        low_omega,
        high_bound_d,
        high_bound_omega,
        gap_lower,
        constant: if scale > 0.0 { (-gap_lower).max(0.0) / scale } else { 0.0 },
        dispersion_constant: disp,
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct BogSumReport {
    /// `ρ_z² ĝω(0) + ℓ⁻³ Σ_{Λ*₊} (D_p − τ − ρ_zĝ)`.
    pub lhs: f64,
    /// `8π (ρ_z a)^{5/2} · 128/(15√π)`.
    pub lhy: f64,
    pub deviation: f64,
    pub sum: HybridSum,
    /// Smallest `D_p − τ − ρ_zĝ + (ρ_zĝ)²/(2τ)` over the exact head.
    pub min_g_summand: f64,
}

/// Evaluates the left side of the LHY lattice identity. The lattice sum is
/// exact up to `p1 = max(1.25 K_H/ℓ, 40π/ℓ)` and switched smoothly to its
/// integral over `[p1, 2p1]`.
pub fn bog_sum_minus_integral(
    sol: &ScatteringSolution,
    ell: f64,
    rho_z: f64,
    k_h: f64,
    budget: u64,
) -> Result<BogSumReport> {
    let x = rho_z * sol.a;
    let lhy = 8.0 * PI * x.powf(2.5) * lhy_constant();
    if rho_z == 0.0 {
        let empty = HybridSum {
            value: 0.0,
            head: 0.0,
            tail: 0.0,
            tail_error: 0.0,
            p1: 0.0,
            p2: 0.0,
            shells: 0,
        };
        return Ok(BogSumReport {
            lhs: 0.0,
            lhy,
            deviation: -lhy,
            sum: empty,
            min_g_summand: 0.0,
        });
    }
    let gw = sol.g_omega_zero()?;
    let summand = |p: f64| -> Result<f64> {
        let t = tau(p, ell, k_h);
        let c = rho_z * sol.fourier_hat(p)?;
        let d = bogoliubov(p, t, c)?.d;
        // D − τ − c = −c²/(τ + c + D)·… written without cancellation
        Ok(-(c * c) / (d + t + c))
    };
    let r = sol.support_radius;
    let p1 = (1.25 * k_h / ell).max(40.0 * PI / ell);
    let p2 = 2.0 * p1;
    // |summand| ≤ c²/τ ≤ 2(ρ_z C/k²)²/k² far out, C ≥ |ĝ(k)| k²
    let target = 1e-9 * (rho_z * rho_z * gw).abs() * ell.powi(3);
    let mut p_far = (200.0 / r).max(4.0 * p2);
    let far_bound = loop {
        let c_decay = (0..64)
            .map(|i| {
                let k = p_far * (0.9 + 0.1 * i as f64 / 63.0);
                Ok(sol.fourier_hat(k)?.abs() * k * k)
            })
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max)
            * 1.5;
        let bound = (ell / PI).powi(3) * PI * (rho_z * c_decay).powi(2) / (3.0 * p_far.powi(3));
        if bound <= target || p_far >= 1e6 / r {
            break bound;
        }
        p_far *= 4.0;
    };
    let sum = hybrid_sum(
        ell,
        Domain::Octant,
        |p| summand(p).unwrap_or(f64::NAN),
        HybridOptions {
            p1,
            p2,
            p_far,
            far_bound,
            chunk: PI / r,
            budget,
            tol: Tolerance::new(1e-300, 1e-11),
        },
    )?;
    if !sum.value.is_finite() {
        return Err(Error::Scattering("non-finite summand in Bogoliubov lattice sum".into()));
    }
    let table = shell_table_to(ell, p2, budget)?;
    let min_g_summand = table
        .momenta()
        .into_iter()
        .map(|p| {
            let t = tau(p, ell, k_h);
            let c = rho_z * sol.fourier_hat(p)?;
            let d = bogoliubov(p, t, c)?.d;
            Ok(d - t - c + c * c / (2.0 * t))
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    let lhs = rho_z * rho_z * gw + sum.value / ell.powi(3);
    Ok(BogSumReport {
        lhs,
        lhy,
        deviation: lhs - lhy,
        sum,
        min_g_summand,
    })
}

/// Checks on a convexity sweep: signs of both derivatives and, per the
/// stated bounds, constants relative to `T^{5/2}ℓ³`.
pub fn convexity_verdicts(eval: &BogEvaluator, rows: &[ConvexityRow]) -> Vec<Verdict> {
    let t = eval.temperature;
    let ell3 = eval.ell.powi(3);
    let s1 = eval.a * t.powf(1.5) * ell3;
    let s2 = eval.a * eval.a * t.sqrt() * ell3;
    let min_d1 = rows.iter().map(|r| r.d1).fold(f64::INFINITY, f64::min);
    let min_neg_d2 = rows.iter().map(|r| -r.d2).fold(f64::INFINITY, f64::min);
    vec![
        Verdict::new("d/drho thermal sum >= 0", VerdictKind::Exact, min_d1 >= -1e-12 * s1, min_d1, -1e-12 * s1),
        Verdict::new(
            "-d2/drho2 thermal sum >= 0",
            VerdictKind::Exact,
            min_neg_d2 >= -1e-10 * s2,
            min_neg_d2,
            -1e-10 * s2,
        ),
    ]
}
