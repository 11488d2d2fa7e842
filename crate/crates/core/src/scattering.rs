//! Zero-energy scattering for radial potentials.
//!
//! With `u(r) = r φ(r)` the scattering equation becomes `u'' = ½ V u`. On
//! every constant piece of a shell potential this has the closed-form
//! solution `u = A e^{κs} + B e^{-κs}`, `κ = √(V/2)`, so the outward
//! propagation is exact. States carry a separate log-scale because `κ R`
//! easily exceeds the range of `f64` for capped hard cores.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{compensated_sum, integrate, Tolerance};
use crate::potentials::RadialPotential;

pub const DEFAULT_GRID_SIZE: usize = 1024;
pub const MIN_GRID_SIZE: usize = 64;

/// One constant piece of the propagated solution, stored already normalized
/// so that `u(r) = r - a` beyond the support.
#[derive(Debug, Clone, Copy, Serialize)]
struct Segment {
    r0: f64,
    r1: f64,
    value: f64,
    kappa: f64,
    u0: f64,
    du0: f64,
    log_scale: f64,
}

impl Segment {
    fn eval(&self, r: f64) -> (f64, f64) {
        let s = r - self.r0;
        if self.kappa == 0.0 {
            let scale = self.log_scale.exp();
            return (scale * (self.u0 + self.du0 * s), scale * self.du0);
        }
        let x = self.kappa * s;
        let b = 0.5 * (self.u0 - self.du0 / self.kappa);
        let em = (-2.0 * x).exp_m1();
        let scale = (self.log_scale + x).exp();
        (
            scale * (self.u0 + b * em),
            scale * (self.du0 - self.kappa * b * em),
        )
    }

    /// `∫ u(r) sin(pr) dr` over the segment in closed form, `p > 0`.
    fn sine_moment(&self, p: f64) -> f64 {
        let len = self.r1 - self.r0;
        if self.kappa == 0.0 {
            // u = e^L (u0 + du0 s)
            let scale = self.log_scale.exp();
            let (c0, c1) = ((p * self.r0).cos(), (p * self.r1).cos());
            let (s0, s1) = ((p * self.r0).sin(), (p * self.r1).sin());
            let u1 = self.u0 + self.du0 * len;
            return scale * ((self.u0 * c0 - u1 * c1) / p + self.du0 * (s1 - s0) / (p * p));
        }
        let a = 0.5 * (self.u0 + self.du0 / self.kappa);
        let b = 0.5 * (self.u0 - self.du0 / self.kappa);
        let z_plus = Complex64::new(self.kappa, p);
        let z_minus = Complex64::new(self.kappa, -p);
        let grow = Complex64::from_polar(1.0, p * self.r1) * one_minus_exp_neg(z_plus * len) / z_plus;
        let decay = Complex64::from_polar(1.0, p * self.r0) * one_minus_exp_neg(z_minus * len) / z_minus;
        (self.log_scale + self.kappa * len).exp() * a * grow.im + self.log_scale.exp() * b * decay.im
    }

    /// Propagates `(u0, du0)` across the segment; returns the end state and the
    /// log-scale increment.
    fn propagate(kappa: f64, len: f64, u0: f64, du0: f64) -> (f64, f64, f64) {
        if kappa == 0.0 {
            return (u0 + du0 * len, du0, 0.0);
        }
        let x = kappa * len;
        let b = 0.5 * (u0 - du0 / kappa);
        let em = (-2.0 * x).exp_m1();
        (u0 + b * em, du0 - kappa * b * em, x)
    }
}

/// `1 - e^{-z}` without cancellation for small `|z|`.
fn one_minus_exp_neg(z: Complex64) -> Complex64 {
    let (x, y) = (-z.re, -z.im);
    let half = (0.5 * y).sin();
    let re = x.exp_m1() * y.cos() - 2.0 * half * half;
    let im = x.exp() * y.sin();
    -Complex64::new(re, im)
}

#[derive(Debug, Clone, Serialize)]
pub struct ScatteringSolution {
    pub a: f64,
    pub core_radius: f64,
    pub support_radius: f64,
    pub r_out: f64,
    pub grid: Vec<f64>,
    pub phi: Vec<f64>,
    pub omega: Vec<f64>,
    pub g: Vec<f64>,
    /// Scattering length from the least-squares line through `r φ(r)` on
    /// `[1.2 R, R_out]`.
    pub a_fit: f64,
    /// RMS residual of that fit.
    pub fit_residual: f64,
    /// `u'(R)` before normalization, as `(mantissa, log_scale)`.
    pub derivative_at_support: (f64, f64),
    segments: Vec<Segment>,
}

fn build_segments(v: &RadialPotential) -> Vec<(f64, f64, f64)> {
    let mut out = Vec::new();
    let mut cursor = v.core_radius();
    for s in v.shells() {
        if s.r_lo > cursor {
            out.push((cursor, s.r_lo, 0.0));
        }
        out.push((s.r_lo, s.r_hi, s.value));
        cursor = s.r_hi;
    }
    out
}

/// Solves the zero-energy scattering equation with the exact per-shell
/// propagator and samples `φ`, `ω` and `g` on a uniform grid over
/// `[core_radius, r_out]`.
pub fn solve_scattering(v: &RadialPotential, r_out: f64, grid_size: usize) -> Result<ScatteringSolution> {
    let support = v.support_radius();
    if grid_size < MIN_GRID_SIZE {
        return Err(Error::InvalidArgument(format!(
            "grid_size must be at least {MIN_GRID_SIZE}, got {grid_size}"
        )));
    }
    if !(r_out.is_finite() && r_out >= 2.0 * support && r_out > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "r_out must be at least twice the support radius {support}, got {r_out}"
        )));
    }

    let pieces = build_segments(v);
    let mut segments = Vec::with_capacity(pieces.len() + 1);
    let (mut u, mut du, mut log_scale) = (0.0_f64, 1.0_f64, 0.0_f64);
    for (r0, r1, value) in pieces {
        let kappa = (0.5 * value).sqrt();
        segments.push(Segment {
            r0,
            r1,
            value,
            kappa,
            u0: u,
            du0: du,
            log_scale,
        });
        let (u1, du1, dlog) = Segment::propagate(kappa, r1 - r0, u, du);
        let norm = u1.abs().max(du1.abs());
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::Scattering(format!(
                "propagated state degenerate at r={r1}: u={u1:e}, u'={du1:e}"
            )));
        }
        u = u1 / norm;
        du = du1 / norm;
        log_scale += dlog + norm.ln();
    }
    if u < 0.0 || du <= 0.0 {
        return Err(Error::Scattering(format!(
            "negative φ at the support edge (u={u:e}, u'={du:e}); is V attractive?"
        )));
    }
    let a = if support > 0.0 { support - u / du } else { 0.0 };

    // Normalize every stored state by u'(R).
    let log_c = log_scale + du.ln();
    for seg in &mut segments {
        seg.log_scale -= log_c;
    }
    segments.push(Segment {
        r0: support,
        r1: f64::INFINITY,
        value: 0.0,
        kappa: 0.0,
        u0: u / du,
        du0: 1.0,
        log_scale: 0.0,
    });

    let mut sol = ScatteringSolution {
        a,
        core_radius: v.core_radius(),
        support_radius: support,
        r_out,
        grid: Vec::new(),
        phi: Vec::new(),
        omega: Vec::new(),
        g: Vec::new(),
        a_fit: a,
        fit_residual: 0.0,
        derivative_at_support: (du, log_scale),
        segments,
    };

    let r0 = v.core_radius();
    let h = (r_out - r0) / (grid_size - 1) as f64;
    sol.grid = (0..grid_size).map(|i| r0 + i as f64 * h).collect();
    sol.grid[grid_size - 1] = r_out;
    sol.phi = sol.grid.iter().map(|&r| sol.phi_at(r)).collect();
    sol.omega = sol.phi.iter().map(|p| 1.0 - p).collect();
    sol.g = sol.grid.iter().map(|&r| sol.g_at(r)).collect();
    for (i, &p) in sol.phi.iter().enumerate() {
        if p < -1e-12 {
            return Err(Error::Scattering(format!(
                "negative φ={p:e} at r={}",
                sol.grid[i]
            )));
        }
    }
    if support > 0.0 {
        let (a_fit, residual) = sol.affine_fit(1.2 * support, r_out);
        sol.a_fit = a_fit;
        sol.fit_residual = residual;
    }
    Ok(sol)
}

/// Solves with `r_out = 2R` (or 1 for `V ≡ 0`) and the default grid.
pub fn solve(v: &RadialPotential) -> Result<ScatteringSolution> {
    let r = v.support_radius();
    solve_scattering(v, if r > 0.0 { 2.0 * r } else { 1.0 }, DEFAULT_GRID_SIZE)
}

impl ScatteringSolution {
    pub fn is_hard_core(&self) -> bool {
        self.core_radius > 0.0
    }

    fn segment(&self, r: f64) -> Option<&Segment> {
        if r < self.core_radius {
            return None;
        }
        let idx = self.segments.partition_point(|s| s.r1 <= r);
        self.segments.get(idx.min(self.segments.len() - 1))
    }

    /// `u(r) / u'(R)`, equal to `r - a` beyond the support.
    pub fn u_normalized(&self, r: f64) -> f64 {
        self.segment(r).map_or(0.0, |s| s.eval(r).0)
    }

    pub fn phi_at(&self, r: f64) -> f64 {
        let Some(seg) = self.segment(r) else {
            return 0.0;
        };
        if r == 0.0 {
            return seg.eval(0.0).1;
        }
        seg.eval(r).0 / r
    }

    pub fn phi_prime_at(&self, r: f64) -> f64 {
        let Some(seg) = self.segment(r) else {
            return 0.0;
        };
        if r == 0.0 {
            return 0.0;
        }
        let (u, du) = seg.eval(r);
        (du * r - u) / (r * r)
    }

    pub fn omega_at(&self, r: f64) -> f64 {
        1.0 - self.phi_at(r)
    }

    /// `g = V φ` off the hard core; zero inside it.
    pub fn g_at(&self, r: f64) -> f64 {
        match self.segment(r) {
            Some(seg) if seg.value > 0.0 => seg.value * self.phi_at(r),
            _ => 0.0,
        }
    }

    fn affine_fit(&self, lo: f64, hi: f64) -> (f64, f64) {
        let pts: Vec<(f64, f64)> = self
            .grid
            .iter()
            .filter(|&&r| r >= lo && r <= hi)
            .map(|&r| (r, self.u_normalized(r)))
            .collect();
        if pts.len() < 2 {
            return (self.a, 0.0);
        }
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let slope = sxy / sxx;
        let intercept = my - slope * mx;
        let rss: f64 = pts
            .iter()
            .map(|p| (p.1 - slope * p.0 - intercept).powi(2))
            .sum();
        (-intercept / slope, (rss / n).sqrt() + (slope - 1.0).abs())
    }

    /// Integrates over a segment, splitting geometrically towards both ends
    /// so that boundary layers of width `1/κ` are resolved.
    fn integrate_segment<F: Fn(f64) -> f64>(seg: &Segment, f: F, tol: Tolerance) -> Result<f64> {
        let len = seg.r1 - seg.r0;
        let mut cuts = vec![seg.r0, seg.r1];
        if seg.kappa * len > 8.0 {
            let mut d = 1.0 / seg.kappa;
            while d < 0.5 * len {
                cuts.push(seg.r0 + d);
                cuts.push(seg.r1 - d);
                d *= 2.0;
            }
        }
        cuts.sort_by(f64::total_cmp);
        let mut parts = Vec::with_capacity(cuts.len());
        for w in cuts.windows(2) {
            parts.push(integrate(&f, w[0], w[1], tol)?.value);
        }
        Ok(compensated_sum(parts))
    }

    fn finite_segments(&self) -> impl Iterator<Item = &Segment> {
        self.segments.iter().filter(|s| s.r1.is_finite())
    }

    /// `ĝ(p) = 4π ∫ g(r) sinc(pr) r² dr`, in closed form per piece except
    /// very close to `p = 0`, where the quadrature route avoids cancellation.
    pub fn fourier_hat(&self, p: f64) -> Result<f64> {
        if self.is_hard_core() {
            return Err(Error::HardCoreTransform);
        }
        if !(p >= 0.0) {
            return Err(Error::InvalidArgument(format!("momentum must be non-negative, got {p}")));
        }
        if p * self.support_radius < 1e-3 {
            return self.fourier_hat_quadrature(p);
        }
        let parts = self
            .finite_segments()
            .filter(|s| s.value > 0.0)
            .map(|s| s.value * s.sine_moment(p));
        Ok(4.0 * PI * compensated_sum(parts) / p)
    }

    /// `ĝ(p)` by adaptive quadrature of `g(r) sin(pr) r / p`.
    pub fn fourier_hat_quadrature(&self, p: f64) -> Result<f64> {
        if self.is_hard_core() {
            return Err(Error::HardCoreTransform);
        }
        if !(p >= 0.0) {
            return Err(Error::InvalidArgument(format!("momentum must be non-negative, got {p}")));
        }
        let tol = Tolerance::new(1e-13 * 8.0 * PI * self.a.max(f64::MIN_POSITIVE), 1e-11);
        let mut parts = Vec::new();
        for seg in self.finite_segments().filter(|s| s.value > 0.0) {
            let f = |r: f64| {
                let u = seg.eval(r).0;
                let kernel = if p * r < 1e-4 {
                    let x2 = (p * r).powi(2);
                    r * (1.0 - x2 / 6.0 + x2 * x2 / 120.0)
                } else {
                    (p * r).sin() / p
                };
                seg.value * u * kernel
            };
            parts.push(Self::integrate_segment(seg, f, tol)?);
        }
        Ok(4.0 * PI * compensated_sum(parts))
    }

    /// `ĝ` evaluated at many momenta in parallel; order of the output matches
    /// the input.
    pub fn fourier_hat_many(&self, ps: &[f64]) -> Result<Vec<f64>> {
        ps.par_iter().map(|&p| self.fourier_hat(p)).collect()
    }

    /// `ĝω(0) = 4π ∫ g ω r² dr`.
    pub fn g_omega_zero(&self) -> Result<f64> {
        if self.is_hard_core() {
            return Err(Error::HardCoreTransform);
        }
        let tol = Tolerance::new(1e-13 * (8.0 * PI * self.a).powi(2).max(f64::MIN_POSITIVE), 1e-11);
        let mut parts = Vec::new();
        for seg in self.finite_segments().filter(|s| s.value > 0.0) {
            let f = |r: f64| {
                let u = seg.eval(r).0;
                seg.value * u * (r - u)
            };
            parts.push(Self::integrate_segment(seg, f, tol)?);
        }
        Ok(4.0 * PI * compensated_sum(parts))
    }

    /// `(1/4π) ∫ (|∇φ|² + ½ V φ²) dx` by radial quadrature, with the exterior
    /// `∫_R^∞ (a/r²)² r² dr = a²/R` added analytically.
    pub fn variational_energy(&self) -> Result<f64> {
        if self.support_radius == 0.0 {
            return Ok(0.0);
        }
        let tol = Tolerance::new(1e-15 * self.a.max(f64::MIN_POSITIVE), 1e-12);
        let mut parts = Vec::new();
        for seg in self.finite_segments() {
            let f = |r: f64| {
                let (u, du) = seg.eval(r);
                // r² φ'² = (u' - u/r)², r² φ² = u²
                let grad = if r > 0.0 { du - u / r } else { 0.0 };
                grad * grad + 0.5 * seg.value * u * u
            };
            parts.push(Self::integrate_segment(seg, f, tol)?);
        }
        parts.push(self.a * self.a / self.support_radius);
        Ok(compensated_sum(parts))
    }

    /// Two-column table `(r, φ(r))` on the solution grid.
    pub fn phi_table(&self) -> Vec<(f64, f64)> {
        self.grid.iter().copied().zip(self.phi.iter().copied()).collect()
    }

    /// Two-column table `(p, ĝ(p))`.
    pub fn ghat_table(&self, ps: &[f64]) -> Result<Vec<(f64, f64)>> {
        Ok(ps.iter().copied().zip(self.fourier_hat_many(ps)?).collect())
    }
}

/// Scattering length by adaptive RK4 integration with step-doubling error
/// control. Independent of the closed-form propagator and used to
/// cross-check it.
pub fn scattering_length_rk(v: &RadialPotential, rtol: f64) -> Result<f64> {
    if !(rtol > 0.0) {
        return Err(Error::InvalidArgument(format!("rtol must be positive, got {rtol}")));
    }
    let support = v.support_radius();
    if support == 0.0 {
        return Ok(0.0);
    }
    let rhs = |value: f64, (u, du): (f64, f64)| (du, 0.5 * value * u);
    let rk4 = |value: f64, y: (f64, f64), h: f64| {
        let k1 = rhs(value, y);
        let k2 = rhs(value, (y.0 + 0.5 * h * k1.0, y.1 + 0.5 * h * k1.1));
        let k3 = rhs(value, (y.0 + 0.5 * h * k2.0, y.1 + 0.5 * h * k2.1));
        let k4 = rhs(value, (y.0 + h * k3.0, y.1 + h * k3.1));
        (
            y.0 + h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
            y.1 + h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
        )
    };
    let mut y = (0.0_f64, 1.0_f64);
    for (r0, r1, value) in build_segments(v) {
        let kappa = (0.5 * value).sqrt();
        let mut r = r0;
        let mut h = if kappa > 0.0 { (0.1 / kappa).min(r1 - r0) } else { r1 - r0 };
        let mut steps = 0usize;
        while r < r1 {
            h = h.min(r1 - r);
            let full = rk4(value, y, h);
            let half = rk4(value, rk4(value, y, 0.5 * h), 0.5 * h);
            let scale = half.0.abs().max(half.1.abs()).max(f64::MIN_POSITIVE);
            let err = ((half.0 - full.0).abs().max((half.1 - full.1).abs())) / (15.0 * scale);
            if err <= rtol {
                // local extrapolation
                y = (
                    half.0 + (half.0 - full.0) / 15.0,
                    half.1 + (half.1 - full.1) / 15.0,
                );
                r += h;
                let norm = y.0.abs().max(y.1.abs());
                if norm > 1e100 {
                    y = (y.0 / norm, y.1 / norm);
                }
            }
            let factor = if err > 0.0 { 0.9 * (rtol / err).powf(0.2) } else { 4.0 };
            h *= factor.clamp(0.2, 4.0);
            steps += 1;
            if steps > 50_000_000 || h < 1e-300 {
                return Err(Error::Scattering(format!(
                    "adaptive stepper did not reach r={r1} (stopped at r={r})"
                )));
            }
        }
    }
    if y.0 < 0.0 || y.1 <= 0.0 {
        return Err(Error::Scattering("negative φ at the support edge".into()));
    }
    Ok(support - y.0 / y.1)
}
