//! Neumann momentum lattices `(π/ℓ)ℕ₀³`, the modified kinetic symbol, the
//! Bogoliubov coefficients and radial lattice sums.
//!
//! Every summand used here depends on `p` only through `|p|`, so sums are
//! taken over shells of constant `n² = |n|²` with integer multiplicities.
//! Shell values are computed in parallel and reduced sequentially in shell
//! order with compensated summation, which makes results independent of the
//! thread count.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{compensated_sum, integrate, Tolerance};
use crate::scattering::ScatteringSolution;

pub const DEFAULT_BUDGET: u64 = 2_000_000_000;
const CLASS_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MomentumClass {
    Zero,
    Low,
    High,
}

/// Class of a momentum of modulus `p`: low iff `0 < p ≤ K_H/ℓ`.
pub fn classify(p: f64, ell: f64, k_h: f64) -> MomentumClass {
    if p == 0.0 {
        MomentumClass::Zero
    } else if p <= k_h / ell * (1.0 + CLASS_SLACK) {
        MomentumClass::Low
    } else {
        MomentumClass::High
    }
}

/// `τ(p) = |p|² − π/(2ℓ²)·[p ≠ 0] − K_H/ℓ²·[p ∈ P_H]`.
pub fn tau(p: f64, ell: f64, k_h: f64) -> f64 {
    let l2 = ell * ell;
    match classify(p, ell, k_h) {
        MomentumClass::Zero => 0.0,
        MomentumClass::Low => p * p - PI / (2.0 * l2),
        MomentumClass::High => p * p - PI / (2.0 * l2) - k_h / l2,
    }
}

/// Bogoliubov dispersion `ω_p = √(p⁴ + 16πaρp²)`.
pub fn omega_disp(p: f64, a: f64, rho: f64) -> f64 {
    p * (p * p + 16.0 * PI * a * rho).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bogoliubov {
    pub d: f64,
    pub alpha: f64,
}

/// `D_p = √(τ² + 2τ ρ_z ĝ)` and `α_p = (τ + ρ_zĝ − D_p)/(ρ_zĝ)`, the latter in
/// the cancellation-free form `ρ_zĝ / (τ + ρ_zĝ + D_p)`.
pub fn bogoliubov(p: f64, tau: f64, coupling: f64) -> Result<Bogoliubov> {
    let radicand = tau * tau + 2.0 * tau * coupling;
    if radicand < 0.0 || tau < 0.0 {
        return Err(Error::NegativeRadicand { p, tau, coupling });
    }
    let d = radicand.sqrt();
    let alpha = if coupling == 0.0 { 0.0 } else { coupling / (tau + coupling + d) };
    Ok(Bogoliubov { d, alpha })
}

/// Normalizing factor `Π_i c_{k_i − p_i} / (c_{p_i} c_{k_i})` with `c_0 = 1`
/// and `c_j = √2` otherwise.
pub fn c_factor(p: [i64; 3], k: [i64; 3]) -> f64 {
    let c = |j: i64| if j == 0 { 1.0 } else { std::f64::consts::SQRT_2 };
    (0..3).map(|i| c(k[i] - p[i]) / (c(p[i]) * c(k[i]))).product()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LatticePoint {
    pub n: [u32; 3],
    pub p: f64,
    pub class: MomentumClass,
}

#[derive(Debug, Clone, Serialize)]
pub struct MomentumLattice {
    pub ell: f64,
    pub k_h: f64,
    pub p_max: f64,
    pub points: Vec<LatticePoint>,
}

fn check_budget(n_max: u64, budget: u64) -> Result<()> {
    let requested = n_max.saturating_add(1).saturating_pow(3);
    if requested > budget {
        return Err(Error::LatticeBudget { requested, budget });
    }
    Ok(())
}

/// Enumerates `p ∈ (π/ℓ)ℕ₀³` with `|p| ≤ p_max`, sorted by `|p|` then
/// lexicographically.
pub fn build_lattice(ell: f64, k_h: f64, p_max: f64, budget: u64) -> Result<MomentumLattice> {
    if !(ell > 0.0 && k_h >= 1.0 && p_max > k_h / ell) {
        return Err(Error::InvalidArgument(format!(
            "build_lattice needs ell > 0, K_H >= 1, p_max > K_H/ell; got ell={ell}, K_H={k_h}, p_max={p_max}"
        )));
    }
    let n_cut = p_max * ell / PI;
    let n_max = n_cut.floor() as u64;
    check_budget(n_max, budget)?;
    let n2_max = n_cut * n_cut;
    let mut points = Vec::new();
    for i in 0..=n_max {
        for j in 0..=n_max {
            for k in 0..=n_max {
                let n2 = (i * i + j * j + k * k) as f64;
                if n2 <= n2_max * (1.0 + 1e-15) {
                    let p = PI / ell * n2.sqrt();
                    points.push(LatticePoint {
                        n: [i as u32, j as u32, k as u32],
                        p,
                        class: classify(p, ell, k_h),
                    });
                }
            }
        }
    }
    points.sort_by(|x, y| x.p.total_cmp(&y.p).then(x.n.cmp(&y.n)));
    Ok(MomentumLattice {
        ell,
        k_h,
        p_max,
        points,
    })
}

impl MomentumLattice {
    pub fn count(&self, class: MomentumClass) -> usize {
        self.points.iter().filter(|p| p.class == class).count()
    }

    pub fn tau(&self, point: &LatticePoint) -> f64 {
        tau(point.p, self.ell, self.k_h)
    }

    /// Smallest `τ(p)/|p|²` over non-zero momenta.
    pub fn min_tau_ratio(&self) -> f64 {
        self.points
            .iter()
            .filter(|p| p.p > 0.0)
            .map(|p| self.tau(p) / (p.p * p.p))
            .fold(f64::INFINITY, f64::min)
    }

    /// Momenta with `τ(p) < 0`.
    pub fn negative_tau(&self) -> Vec<LatticePoint> {
        self.points.iter().copied().filter(|p| self.tau(p) < 0.0).collect()
    }

    /// Rows `(|p|, multiplicity, τ, D_p, α_p)` per distinct `|p|` for a given
    /// coupling `ρ_z ĝ(p)`.
    pub fn symbol_table<F: Fn(f64) -> f64>(&self, coupling: F) -> Result<Vec<[f64; 5]>> {
        let mut rows: Vec<[f64; 5]> = Vec::new();
        for pt in &self.points {
            match rows.last_mut() {
                Some(row) if row[0] == pt.p => row[1] += 1.0,
                _ => {
                    let t = self.tau(pt);
                    let b = bogoliubov(pt.p, t, coupling(pt.p))?;
                    rows.push([pt.p, 1.0, t, b.d, b.alpha]);
                }
            }
        }
        Ok(rows)
    }
}

/// Shells `n² = const` of the lattice `ℕ₀³ \ {0}` with their multiplicities
/// in `ℕ₀³` and in `ℤ³`.
#[derive(Debug, Clone, Serialize)]
pub struct ShellTable {
    pub ell: f64,
    pub n2: Vec<u64>,
    pub octant: Vec<u64>,
    pub full: Vec<u64>,
}

/// Enumerates all shells with `0 < n² ≤ n2_max`.
pub fn shell_table(ell: f64, n2_max: u64, budget: u64) -> Result<ShellTable> {
    if !(ell > 0.0) {
        return Err(Error::InvalidArgument(format!("ell must be positive, got {ell}")));
    }
    let n_max = (n2_max as f64).sqrt().floor() as u64;
    check_budget(n_max, budget)?;
    let size = n2_max as usize + 1;
    let (octant, full) = (0..=n_max)
        .into_par_iter()
        .fold(
            || (vec![0u64; size], vec![0u64; size]),
            |(mut oct, mut fl), i| {
                for j in i..=n_max {
                    let ij = i * i + j * j;
                    if ij > n2_max {
                        break;
                    }
                    for k in j..=n_max {
                        let m = ij + k * k;
                        if m > n2_max {
                            break;
                        }
                        let perms = if i == j && j == k {
                            1
                        } else if i == j || j == k {
                            3
                        } else {
                            6
                        };
                        let nonzero = [i, j, k].iter().filter(|&&x| x > 0).count() as u32;
                        oct[m as usize] += perms;
                        fl[m as usize] += perms << nonzero;
                    }
                }
                (oct, fl)
            },
        )
        .reduce(
            || (vec![0u64; size], vec![0u64; size]),
            |(mut a, mut b), (c, d)| {
                for (x, y) in a.iter_mut().zip(c) {
                    *x += y;
                }
                for (x, y) in b.iter_mut().zip(d) {
                    *x += y;
                }
                (a, b)
            },
        );
    let mut table = ShellTable {
        ell,
        n2: Vec::new(),
        octant: Vec::new(),
        full: Vec::new(),
    };
    for m in 1..size {
        if octant[m] > 0 {
            table.n2.push(m as u64);
            table.octant.push(octant[m]);
            table.full.push(full[m]);
        }
    }
    Ok(table)
}

/// Shell table covering `0 < |p| ≤ p_max`.
pub fn shell_table_to(ell: f64, p_max: f64, budget: u64) -> Result<ShellTable> {
    let n_cut = p_max * ell / PI;
    shell_table(ell, (n_cut * n_cut).floor() as u64, budget)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    /// `ℕ₀³ \ {0}`.
    Octant,
    /// `ℤ³ \ {0}`.
    Full,
}

impl ShellTable {
    pub fn len(&self) -> usize {
        self.n2.len()
    }

    pub fn is_empty(&self) -> bool {
        self.n2.is_empty()
    }

    pub fn momentum(&self, i: usize) -> f64 {
        PI / self.ell * (self.n2[i] as f64).sqrt()
    }

    pub fn momenta(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.momentum(i)).collect()
    }

    fn weight(&self, i: usize, domain: Domain) -> f64 {
        match domain {
            Domain::Octant => self.octant[i] as f64,
            Domain::Full => self.full[i] as f64,
        }
    }

    pub fn count(&self, domain: Domain) -> u64 {
        match domain {
            Domain::Octant => self.octant.iter().sum(),
            Domain::Full => self.full.iter().sum(),
        }
    }

    /// `Σ_p w(p) f(|p|)` over the domain, deterministic in shell order.
    pub fn sum<F: Fn(f64) -> f64 + Sync>(&self, domain: Domain, f: F) -> f64 {
        let terms: Vec<f64> = (0..self.len())
            .into_par_iter()
            .map(|i| self.weight(i, domain) * f(self.momentum(i)))
            .collect();
        compensated_sum(terms)
    }

    /// Like [`ShellTable::sum`] for fallible summands.
    pub fn try_sum<F: Fn(f64) -> Result<f64> + Sync>(&self, domain: Domain, f: F) -> Result<f64> {
        let terms: Vec<f64> = (0..self.len())
            .into_par_iter()
            .map(|i| Ok(self.weight(i, domain) * f(self.momentum(i))?))
            .collect::<Result<_>>()?;
        Ok(compensated_sum(terms))
    }
}

/// `C^∞` switch from 0 at `p1` to 1 at `p2`.
pub fn smooth_switch(p: f64, p1: f64, p2: f64) -> f64 {
    let t = (p - p1) / (p2 - p1);
    if t <= 0.0 {
        return 0.0;
    }
    if t >= 1.0 {
        return 1.0;
    }
    let a = (-1.0 / t).exp();
    let b = (-1.0 / (1.0 - t)).exp();
    a / (a + b)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct HybridSum {
    pub value: f64,
    pub head: f64,
    pub tail: f64,
    /// Quadrature error estimate plus any analytic remainder bound.
    pub tail_error: f64,
    pub p1: f64,
    pub p2: f64,
    pub shells: usize,
}

/// Settings for [`hybrid_sum`]. The summand must be smooth for `|p| ≥ p1`
/// and `p2 − p1` should span many lattice spacings `π/ℓ`.
#[derive(Debug, Clone, Copy)]
pub struct HybridOptions {
    pub p1: f64,
    pub p2: f64,
    /// Upper limit of the tail integrals.
    pub p_far: f64,
    /// Bound on `∫_{p_far}^∞` contributions, added to `tail_error`.
    pub far_bound: f64,
    /// Maximal panel length for the tail integrals; about half an
    /// oscillation period of the summand.
    pub chunk: f64,
    pub budget: u64,
    pub tol: Tolerance,
}

/// Integrates `f` on `[lo, hi]` in chunks of at most `chunk`, so that
/// oscillatory integrands do not alias.
fn chunked_integral<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, chunk: f64, tol: Tolerance) -> Result<(f64, f64)> {
    let n = ((hi - lo) / chunk).ceil().max(1.0) as usize;
    let h = (hi - lo) / n as f64;
    let mut vals = Vec::with_capacity(n);
    let mut err = 0.0;
    for i in 0..n {
        let a = lo + i as f64 * h;
        let b = if i + 1 == n { hi } else { a + h };
        let r = integrate(&f, a, b, tol)?;
        vals.push(r.value);
        err += r.error;
    }
    Ok((compensated_sum(vals), err))
}

/// Lattice sum of a radial function over `Domain` with a smooth split: the
/// head `Σ f (1 − χ)` is summed exactly and the tail `Σ f χ` is replaced by
/// its integral. For the octant the tail uses
/// `Σ_{ℕ₀³\{0}} h = ⅛ (S₃ + 3S₂ + 3S₁)` with `S_d` the sum over `ℤ^d \ {0}`.
pub fn hybrid_sum<F: Fn(f64) -> f64 + Sync>(
    ell: f64,
    domain: Domain,
    f: F,
    opts: HybridOptions,
) -> Result<HybridSum> {
    let HybridOptions {
        p1,
        p2,
        p_far,
        far_bound,
        chunk,
        budget,
        tol,
    } = opts;
    if !(0.0 < p1 && p1 < p2 && p2 <= p_far) {
        return Err(Error::InvalidArgument(format!(
            "hybrid sum needs 0 < p1 < p2 <= p_far, got {p1}, {p2}, {p_far}"
        )));
    }
    let table = shell_table_to(ell, p2, budget)?;
    let head = table.sum(domain, |p| f(p) * (1.0 - smooth_switch(p, p1, p2)));
    let chunk = chunk.min(p2 - p1);
    let scale = ell / PI;
    let radial = |power: i32| {
        chunked_integral(
            |p| f(p) * smooth_switch(p, p1, p2) * p.powi(power),
            p1,
            p_far,
            chunk,
            tol,
        )
    };
    let (i2, e2) = radial(2)?;
    let cube = scale.powi(3) * 4.0 * PI;
    let (tail, tail_error) = match domain {
        Domain::Full => (cube * i2, cube * e2 + far_bound),
        Domain::Octant => {
            let (i1, e1) = radial(1)?;
            let (i0, e0) = radial(0)?;
            let plane = 3.0 * scale * scale * 2.0 * PI;
            let line = 3.0 * scale * 2.0;
            (
                (cube * i2 + plane * i1 + line * i0) / 8.0,
                (cube * e2 + plane * e1 + line * e0) / 8.0 + far_bound,
            )
        }
    };
    Ok(HybridSum {
        value: head + tail,
        head,
        tail,
        tail_error,
        p1,
        p2,
        shells: table.len(),
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct GOmegaLatticeSum {
    /// `(1/(8ℓ³)) Σ_{k ∈ (π/ℓ)ℤ³ \ {0}} ĝ(k)²/(2k²)`.
    pub value: f64,
    pub tail_bound: f64,
    pub sum: HybridSum,
}

/// Head/tail split for [`g_omega_lattice_sum`]: the switch starts at
/// `max(6/R, 10π/ℓ)` and ends at twice that.
pub fn default_g_omega_split(sol: &ScatteringSolution, ell: f64) -> (f64, f64) {
    let p1 = (6.0 / sol.support_radius).max(10.0 * PI / ell);
    (p1, 2.0 * p1)
}

/// Lattice approximation of `ĝω(0)`. `ĝ` is evaluated once per shell; the
/// tail integral runs to `10⁵/R` and the remainder uses `|ĝ(k)| ≤ C/k²`
/// with `C` measured on the last stretch.
pub fn g_omega_lattice_sum(sol: &ScatteringSolution, ell: f64, budget: u64) -> Result<GOmegaLatticeSum> {
    if sol.is_hard_core() {
        return Err(Error::HardCoreTransform);
    }
    if sol.a == 0.0 {
        let zero = HybridSum {
            value: 0.0,
            head: 0.0,
            tail: 0.0,
            tail_error: 0.0,
            p1: 0.0,
            p2: 0.0,
            shells: 0,
        };
        return Ok(GOmegaLatticeSum {
            value: 0.0,
            tail_bound: 0.0,
            sum: zero,
        });
    }
    let r = sol.support_radius;
    let (p1, p2) = default_g_omega_split(sol, ell);
    let p_far = (1e5 / r).max(4.0 * p2);
    let probe: Vec<f64> = (0..64).map(|i| p_far * (0.9 + 0.1 * i as f64 / 63.0)).collect();
    let c = sol
        .fourier_hat_many(&probe)?
        .iter()
        .zip(&probe)
        .map(|(g, k)| g.abs() * k * k)
        .fold(0.0, f64::max)
        * 1.5;
    // (ℓ/π)³ 4π ∫_{p_far}^∞ C²/(2k⁴) k² dk
    let far_bound = (ell / PI).powi(3) * 4.0 * PI * c * c / (2.0 * p_far);
    let tol = Tolerance::new(1e-300, 1e-10);
    let ghat = |k: f64| sol.fourier_hat(k).unwrap_or(f64::NAN);
    let sum = hybrid_sum(
        ell,
        Domain::Full,
        |k| {
            let g = ghat(k);
            g * g / (2.0 * k * k)
        },
        HybridOptions {
            p1,
            p2,
            p_far,
            far_bound,
            chunk: PI / r,
            budget,
            tol,
        },
    )?;
    if !sum.value.is_finite() {
        return Err(Error::Scattering("non-finite transform in lattice sum".into()));
    }
    let norm = 1.0 / (8.0 * ell.powi(3));
    let tail_bound = sum.tail_error * norm;
    let value = sum.value * norm;
    if tail_bound > 1e-3 * value.abs() {
        return Err(Error::Truncation {
            tail: tail_bound,
            limit: 1e-3 * value.abs(),
        });
    }
    Ok(GOmegaLatticeSum {
        value,
        tail_bound,
        sum,
    })
}

/// `(1/(8ℓ³)) Σ_{k ∈ (π/ℓ)ℤ³, 0 < |k| ≤ K_H/ℓ} ĝ(k)²/(2k²)`.
pub fn low_momentum_g_sum(sol: &ScatteringSolution, ell: f64, k_h: f64, budget: u64) -> Result<f64> {
    let table = shell_table_to(ell, k_h / ell * (1.0 + CLASS_SLACK), budget)?;
    let s = table.try_sum(Domain::Full, |k| {
        let g = sol.fourier_hat(k)?;
        Ok(g * g / (2.0 * k * k))
    })?;
    Ok(s / (8.0 * ell.powi(3)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_lattice_low_count() {
        // with ℓ = π the lattice is ℕ₀³ itself and K_H/ℓ = 1/π < 1
        let lat = build_lattice(PI, 1.0, 1.5, DEFAULT_BUDGET).unwrap();
        assert_eq!(lat.count(MomentumClass::Low), 0);
        assert_eq!(lat.count(MomentumClass::High), 6);
        let lat = build_lattice(PI, PI, 1.5, DEFAULT_BUDGET).unwrap();
        assert_eq!(lat.count(MomentumClass::Low), 3);
        assert_eq!(lat.count(MomentumClass::Zero), 1);
    }

    #[test]
    fn boundary_momentum_is_low() {
        // |p| = √2 exactly at K_H/ℓ with ℓ = π
        let k_h = 2f64.sqrt() * PI;
        let lat = build_lattice(PI, k_h, 3.0, DEFAULT_BUDGET).unwrap();
        let on_edge = lat
            .points
            .iter()
            .find(|p| p.n == [1, 1, 0])
            .unwrap();
        assert_eq!(on_edge.class, MomentumClass::Low);
    }

    #[test]
    fn doubling_ell_gives_eightfold_points() {
        let a = build_lattice(10.0, 1.0, 30.0, DEFAULT_BUDGET).unwrap().points.len() as f64;
        let b = build_lattice(20.0, 1.0, 30.0, DEFAULT_BUDGET).unwrap().points.len() as f64;
        assert!((b / a - 8.0).abs() < 0.5);
    }

    #[test]
    fn budget_guard() {
        assert!(matches!(
            build_lattice(1000.0, 1.0, 10.0, 1000),
            Err(Error::LatticeBudget { .. })
        ));
    }

    #[test]
    fn shell_table_matches_brute_force() {
        let t = shell_table(1.0, 50, DEFAULT_BUDGET).unwrap();
        let mut oct = vec![0u64; 51];
        let mut full = vec![0u64; 51];
        for i in -8i64..=8 {
            for j in -8i64..=8 {
                for k in -8i64..=8 {
                    let m = (i * i + j * j + k * k) as usize;
                    if m <= 50 {
                        full[m] += 1;
                        if i >= 0 && j >= 0 && k >= 0 {
                            oct[m] += 1;
                        }
                    }
                }
            }
        }
        for (idx, &m) in t.n2.iter().enumerate() {
            assert_eq!(t.octant[idx], oct[m as usize], "n2={m}");
            assert_eq!(t.full[idx], full[m as usize], "n2={m}");
        }
        let nonempty = (1..=50).filter(|&m| oct[m] > 0).count();
        assert_eq!(t.len(), nonempty);
    }

    #[test]
    fn tau_values() {
        let ell = 10.0;
        assert_eq!(tau(0.0, ell, 5.0), 0.0);
        let p = 0.3;
        assert_eq!(tau(p, ell, 5.0), p * p - PI / 200.0);
        let p = 0.6;
        assert_eq!(tau(p, ell, 5.0), p * p - PI / 200.0 - 5.0 / 100.0);
    }

    #[test]
    fn bogoliubov_limits() {
        let b = bogoliubov(1.0, 2.0, 0.0).unwrap();
        assert_eq!(b, Bogoliubov { d: 2.0, alpha: 0.0 });
        let b = bogoliubov(1.0, 2.0, 0.5).unwrap();
        assert!((b.d * b.d - (4.0 + 2.0)).abs() < 1e-14);
        assert!(bogoliubov(1.0, -1.0, 0.1).is_err());
    }

    #[test]
    fn c_factor_cases() {
        let r8 = 8f64.sqrt();
        assert!((c_factor([1, 2, 3], [3, 5, 7]) - 1.0 / r8).abs() < 1e-15);
        assert!((c_factor([0, 0, 0], [1, 2, 3]) - 1.0).abs() < 1e-15);
        for pm in 0..8 {
            for km in 0..8 {
                let p: [i64; 3] = std::array::from_fn(|i| ((pm >> i) & 1) as i64);
                let k: [i64; 3] = std::array::from_fn(|i| 2 * ((km >> i) & 1) as i64);
                let c = c_factor(p, k);
                assert!(c >= 1.0 / r8 - 1e-15 && c <= r8 + 1e-15);
            }
        }
        // equal non-zero coordinates fall below 1/√8
        assert!((c_factor([1, 1, 1], [1, 1, 1]) - 0.125).abs() < 1e-15);
    }

    #[test]
    fn hybrid_sum_of_gaussian() {
        // Σ over ℤ³\{0} of e^{-p²} at spacing π/ℓ versus the exact theta value
        let ell = 20.0;
        let h = PI / ell;
        let theta: f64 = (-200i64..=200).map(|n| (-(h * n as f64).powi(2)).exp()).sum();
        let exact_full = theta.powi(3) - 1.0;
        let opts = HybridOptions {
            p1: 0.5,
            p2: 4.0,
            p_far: 12.0,
            far_bound: 0.0,
            chunk: 1.0,
            budget: DEFAULT_BUDGET,
            tol: Tolerance::new(1e-300, 1e-12),
        };
        let s = hybrid_sum(ell, Domain::Full, |p| (-p * p).exp(), opts).unwrap();
        assert!(((s.value - exact_full) / exact_full).abs() < 1e-9, "{} {} {}", s.value, exact_full, s.tail_error);
        let half: f64 = (0i64..=200).map(|n| (-(h * n as f64).powi(2)).exp()).sum();
        let exact_oct = half.powi(3) - 1.0;
        let s = hybrid_sum(ell, Domain::Octant, |p| (-p * p).exp(), opts).unwrap();
        assert!(((s.value - exact_oct) / exact_oct).abs() < 1e-8, "{} {}", s.value, exact_oct);
    }
}
