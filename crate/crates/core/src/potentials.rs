//! Radial, non-negative, compactly supported pair potentials.
//!
//! The canonical representation is piecewise constant on spherical shells,
//! optionally with a hard core. Smooth profiles enter through
//! [`TabulatedProfile`] and are resampled onto shells before use.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{integrate, Tolerance};

pub const DEFAULT_RESAMPLE_SHELLS: usize = 4096;

/// A constant value on the radial interval `[r_lo, r_hi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Shell {
    pub r_lo: f64,
    pub r_hi: f64,
    pub value: f64,
}

impl Shell {
    pub fn new(r_lo: f64, r_hi: f64, value: f64) -> Self {
        Self { r_lo, r_hi, value }
    }

    /// `4π ∫ V r² dr` over the shell.
    pub fn integral(&self) -> f64 {
        4.0 * PI / 3.0 * (self.r_hi.powi(3) - self.r_lo.powi(3)) * self.value
    }

    fn contains(&self, r: f64) -> bool {
        self.r_lo <= r && r < self.r_hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PotentialValue {
    Finite(f64),
    HardCore,
}

impl PotentialValue {
    pub fn as_f64(self) -> f64 {
        match self {
            PotentialValue::Finite(v) => v,
            PotentialValue::HardCore => f64::INFINITY,
        }
    }

    pub fn is_hard_core(self) -> bool {
        matches!(self, PotentialValue::HardCore)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialPotential {
    core_radius: f64,
    shells: Vec<Shell>,
}

impl RadialPotential {
    pub fn zero() -> Self {
        Self {
            core_radius: 0.0,
            shells: Vec::new(),
        }
    }

    pub fn hard_core(radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidPotential(format!(
                "hard-core radius must be positive, got {radius}"
            )));
        }
        Self::piecewise(radius, Vec::new())
    }

    pub fn square_well(height: f64, radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidPotential(format!(
                "square-well radius must be positive, got {radius}"
            )));
        }
        Self::piecewise(0.0, vec![Shell::new(0.0, radius, height)])
    }

    /// Builds a potential from a hard-core radius and a list of shells.
    ///
    /// Shells must be disjoint, lie outside the core and carry finite
    /// non-negative values. Zero-valued shells are dropped and touching shells
    /// with equal values are merged.
    pub fn piecewise(core_radius: f64, mut shells: Vec<Shell>) -> Result<Self> {
        if !(core_radius.is_finite() && core_radius >= 0.0) {
            return Err(Error::InvalidPotential(format!(
                "core radius must be finite and non-negative, got {core_radius}"
            )));
        }
        for s in &shells {
            if !(s.r_lo.is_finite() && s.r_hi.is_finite() && s.r_lo < s.r_hi) {
                return Err(Error::InvalidPotential(format!(
                    "shell [{}, {}) is empty or not finite",
                    s.r_lo, s.r_hi
                )));
            }
            if !(s.value.is_finite() && s.value >= 0.0) {
                return Err(Error::InvalidPotential(format!(
                    "shell [{}, {}) has value {}; values must be finite and non-negative",
                    s.r_lo, s.r_hi, s.value
                )));
            }
            if s.r_lo < core_radius {
                return Err(Error::InvalidPotential(format!(
                    "shell [{}, {}) overlaps the hard core of radius {core_radius}",
                    s.r_lo, s.r_hi
                )));
            }
        }
        shells.sort_by(|x, y| x.r_lo.total_cmp(&y.r_lo));
        for w in shells.windows(2) {
            if w[1].r_lo < w[0].r_hi {
                return Err(Error::InvalidPotential(format!(
                    "shells [{}, {}) and [{}, {}) overlap",
                    w[0].r_lo, w[0].r_hi, w[1].r_lo, w[1].r_hi
                )));
            }
        }
        let mut merged: Vec<Shell> = Vec::with_capacity(shells.len());
        for s in shells.into_iter().filter(|s| s.value > 0.0) {
            match merged.last_mut() {
                Some(last) if last.r_hi == s.r_lo && last.value == s.value => last.r_hi = s.r_hi,
                _ => merged.push(s),
            }
        }
        Ok(Self {
            core_radius,
            shells: merged,
        })
    }

    pub fn core_radius(&self) -> f64 {
        self.core_radius
    }

    pub fn has_hard_core(&self) -> bool {
        self.core_radius > 0.0
    }

    pub fn shells(&self) -> &[Shell] {
        &self.shells
    }

    /// Smallest `R` with `V(r) = 0` for all `r > R`.
    pub fn support_radius(&self) -> f64 {
        self.shells
            .last()
            .map_or(self.core_radius, |s| s.r_hi.max(self.core_radius))
    }

    pub fn evaluate(&self, r: f64) -> Result<PotentialValue> {
        if !(r >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "radius must be non-negative, got {r}"
            )));
        }
        Ok(self.value_unchecked(r))
    }

    pub(crate) fn value_unchecked(&self, r: f64) -> PotentialValue {
        if r < self.core_radius {
            return PotentialValue::HardCore;
        }
        let idx = self.shells.partition_point(|s| s.r_hi <= r);
        match self.shells.get(idx) {
            Some(s) if s.contains(r) => PotentialValue::Finite(s.value),
            _ => PotentialValue::Finite(0.0),
        }
    }

    /// `∫ V dx`, infinite with a hard core.
    pub fn integral(&self) -> f64 {
        if self.has_hard_core() {
            return f64::INFINITY;
        }
        crate::numerics::compensated_sum(self.shells.iter().map(Shell::integral))
    }

    pub fn sup(&self) -> f64 {
        if self.has_hard_core() {
            return f64::INFINITY;
        }
        self.shells.iter().map(|s| s.value).fold(0.0, f64::max)
    }

    /// Radii where the profile may jump, including the core radius.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut pts = vec![self.core_radius];
        for s in &self.shells {
            pts.push(s.r_lo);
            pts.push(s.r_hi);
        }
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    pub fn is_non_increasing(&self) -> bool {
        let mut last = f64::INFINITY;
        let mut cursor = self.core_radius;
        for s in &self.shells {
            if s.r_lo > cursor {
                // a gap is a zero-valued stretch
                last = 0.0;
            }
            if s.value > last {
                return false;
            }
            last = s.value;
            cursor = s.r_hi;
        }
        true
    }

    /// `min(V, K)`. A hard core of radius `r_c` becomes a plateau of height
    /// `K` on `[0, r_c]`.
    pub fn min_cap(&self, cap: f64) -> Result<Self> {
        if !(cap.is_finite() && cap > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "cap must be positive and finite, got {cap}"
            )));
        }
        let mut shells = Vec::with_capacity(self.shells.len() + 1);
        if self.has_hard_core() {
            shells.push(Shell::new(0.0, self.core_radius, cap));
        }
        shells.extend(
            self.shells
                .iter()
                .map(|s| Shell::new(s.r_lo, s.r_hi, s.value.min(cap))),
        );
        Self::piecewise(0.0, shells)
    }

    /// Removes the inner part of the potential so that the remaining integral
    /// equals `8π S a_V`. Returns the truncated potential together with the
    /// cut radius `R_S`; when `∫V` is already below the threshold the
    /// potential is returned unchanged with `R_S` equal to the core radius.
    pub fn tail_truncate(&self, s: f64, a_v: f64) -> Result<(Self, f64)> {
        if !(s > 0.0 && a_v > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "tail truncation needs S > 0 and a_V > 0, got S={s}, a_V={a_v}"
            )));
        }
        let target = 8.0 * PI * s * a_v;
        if self.integral() <= target {
            return Ok((self.clone(), self.core_radius));
        }
        let mut remaining = target;
        for (i, shell) in self.shells.iter().enumerate().rev() {
            let content = shell.integral();
            if content >= remaining {
                let cubed = shell.r_hi.powi(3) - 3.0 * remaining / (4.0 * PI * shell.value);
                let r_s = cubed.max(0.0).cbrt().clamp(shell.r_lo, shell.r_hi);
                let mut kept = Vec::with_capacity(self.shells.len() - i);
                if r_s < shell.r_hi {
                    kept.push(Shell::new(r_s, shell.r_hi, shell.value));
                }
                kept.extend_from_slice(&self.shells[i + 1..]);
                return Ok((Self::piecewise(0.0, kept)?, r_s));
            }
            remaining -= content;
        }
        Err(Error::CoreNotIntegrable { remaining })
    }

    /// `true` when `self(r) ≥ other(r)` for every `r`.
    pub fn dominates(&self, other: &RadialPotential) -> bool {
        let mut pts = self.breakpoints();
        pts.extend(other.breakpoints());
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        let mut probes: Vec<f64> = pts.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        probes.extend(pts.iter().copied());
        probes.push(pts.last().copied().unwrap_or(0.0) + 1.0);
        probes.into_iter().all(|r| {
            let a = self.value_unchecked(r).as_f64();
            let b = other.value_unchecked(r).as_f64();
            a >= b
        })
    }
}

/// Sampled profile `(r_i, V_i)` with piecewise-linear interpolation; zero
/// beyond the last sample.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedProfile {
    r: Vec<f64>,
    v: Vec<f64>,
}

impl TabulatedProfile {
    pub fn new(r: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        if r.len() != v.len() || r.len() < 2 {
            return Err(Error::InvalidPotential(
                "tabulated profile needs at least two (r, V) samples".into(),
            ));
        }
        if r[0] < 0.0 || r.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidPotential(
                "tabulated radii must be non-negative and strictly increasing".into(),
            ));
        }
        if let Some(bad) = v.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
            return Err(Error::InvalidPotential(format!(
                "tabulated values must be finite and non-negative, found {bad}"
            )));
        }
        Ok(Self { r, v })
    }

    /// Parses two-column text (`r V` per line, whitespace or comma separated,
    /// `#` comments allowed).
    pub fn parse(text: &str) -> Result<Self> {
        let mut r = Vec::new();
        let mut v = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|c| !c.is_empty())
                .collect();
            let parse = |s: &str| {
                s.parse::<f64>().map_err(|e| {
                    Error::InvalidPotential(format!("line {}: cannot parse {s:?}: {e}", lineno + 1))
                })
            };
            if cols.len() != 2 {
                return Err(Error::InvalidPotential(format!(
                    "line {}: expected two columns, found {}",
                    lineno + 1,
                    cols.len()
                )));
            }
            r.push(parse(cols[0])?);
            v.push(parse(cols[1])?);
        }
        Self::new(r, v)
    }

    pub fn evaluate(&self, r: f64) -> f64 {
        let n = self.r.len();
        if r < self.r[0] || r > self.r[n - 1] {
            return 0.0;
        }
        let i = self.r.partition_point(|&x| x <= r).clamp(1, n - 1);
        let (r0, r1) = (self.r[i - 1], self.r[i]);
        let t = (r - r0) / (r1 - r0);
        self.v[i - 1] + t * (self.v[i] - self.v[i - 1])
    }

    pub fn support_radius(&self) -> f64 {
        self.r[self.r.len() - 1]
    }

    /// Resamples onto `n_shells` equal-width shells over `[0, R]`. Each shell
    /// carries the volume average of the interpolated profile, so the total
    /// integral is preserved up to quadrature error.
    pub fn resample(&self, n_shells: usize) -> Result<RadialPotential> {
        if n_shells == 0 {
            return Err(Error::InvalidArgument("n_shells must be positive".into()));
        }
        let outer = self.support_radius();
        let width = outer / n_shells as f64;
        let mut shells = Vec::with_capacity(n_shells);
        for k in 0..n_shells {
            let lo = k as f64 * width;
            let hi = if k + 1 == n_shells { outer } else { (k + 1) as f64 * width };
            let moment = integrate(|r| self.evaluate(r) * r * r, lo, hi, Tolerance::new(1e-300, 1e-12))?;
            let avg = 3.0 * moment.value / (hi.powi(3) - lo.powi(3));
            shells.push(Shell::new(lo, hi, avg.max(0.0)));
        }
        RadialPotential::piecewise(0.0, shells)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hard_core_evaluation() {
        let v = RadialPotential::hard_core(1.0).unwrap();
        assert_eq!(v.evaluate(0.5).unwrap(), PotentialValue::HardCore);
        assert_eq!(v.evaluate(2.0).unwrap(), PotentialValue::Finite(0.0));
        assert!(v.evaluate(-0.1).is_err());
        assert_eq!(v.support_radius(), 1.0);
    }

    #[test]
    fn square_well_evaluation() {
        let v = RadialPotential::square_well(8.0, 1.0).unwrap();
        assert_eq!(v.evaluate(0.5).unwrap(), PotentialValue::Finite(8.0));
        assert_eq!(v.evaluate(1.5).unwrap(), PotentialValue::Finite(0.0));
    }

    #[test]
    fn cap_examples() {
        let hc = RadialPotential::hard_core(1.0).unwrap();
        let capped = hc.min_cap(10.0).unwrap();
        assert_eq!(capped, RadialPotential::square_well(10.0, 1.0).unwrap());

        let well = RadialPotential::square_well(8.0, 1.0).unwrap();
        assert_eq!(well.min_cap(10.0).unwrap(), well);
        assert_eq!(well.min_cap(3.0).unwrap(), RadialPotential::square_well(3.0, 1.0).unwrap());
        assert!(well.min_cap(0.0).is_err());
    }

    #[test]
    fn truncation_no_op_when_threshold_large() {
        let well = RadialPotential::square_well(5.0, 1.0).unwrap();
        let (out, r_s) = well.tail_truncate(1e9, 1.0).unwrap();
        assert_eq!(out, well);
        assert_eq!(r_s, 0.0);
    }

    #[test]
    fn truncation_half_integral_square_well() {
        // (4π/3) K (1 - R_S³) = half of (4π/3) K  ⇒  R_S = 2^{-1/3}
        let well = RadialPotential::square_well(100.0, 1.0).unwrap();
        let half = 0.5 * well.integral();
        let s = half / (8.0 * PI);
        let (out, r_s) = well.tail_truncate(s, 1.0).unwrap();
        assert!((r_s - 2f64.powf(-1.0 / 3.0)).abs() < 1e-14);
        assert!(((out.integral() - half) / half).abs() < 1e-12);
        assert_eq!(out.support_radius(), 1.0);
    }

    #[test]
    fn truncation_spanning_several_shells() {
        let v = RadialPotential::piecewise(
            0.0,
            vec![
                Shell::new(0.0, 0.5, 40.0),
                Shell::new(0.5, 0.8, 10.0),
                Shell::new(0.9, 1.0, 2.0),
            ],
        )
        .unwrap();
        let target = 0.8 * v.integral();
        let (out, r_s) = v.tail_truncate(target / (8.0 * PI), 1.0).unwrap();
        assert!(r_s < 0.5);
        assert!(((out.integral() - target) / target).abs() < 1e-12);
    }

    #[test]
    fn truncation_into_core_fails() {
        let v = RadialPotential::piecewise(0.5, vec![Shell::new(0.5, 1.0, 1.0)]).unwrap();
        let err = v.tail_truncate(1e3, 1.0).unwrap_err();
        assert!(matches!(err, Error::CoreNotIntegrable { .. }));
    }

    #[test]
    fn rejects_invalid_shells() {
        assert!(RadialPotential::piecewise(0.0, vec![Shell::new(0.0, 1.0, -1.0)]).is_err());
        assert!(RadialPotential::piecewise(
            0.0,
            vec![Shell::new(0.0, 1.0, 1.0), Shell::new(0.5, 2.0, 1.0)]
        )
        .is_err());
        assert!(RadialPotential::piecewise(1.0, vec![Shell::new(0.5, 2.0, 1.0)]).is_err());
    }

    #[test]
    fn merges_touching_equal_shells() {
        let v = RadialPotential::piecewise(
            0.0,
            vec![Shell::new(0.0, 0.5, 3.0), Shell::new(0.5, 1.0, 3.0)],
        )
        .unwrap();
        assert_eq!(v.shells().len(), 1);
        assert!(v.is_non_increasing());
    }

    #[test]
    fn monotonicity_detection() {
        let up = RadialPotential::piecewise(
            0.0,
            vec![Shell::new(0.0, 0.5, 1.0), Shell::new(0.5, 1.0, 3.0)],
        )
        .unwrap();
        assert!(!up.is_non_increasing());
        let gap = RadialPotential::piecewise(
            0.0,
            vec![Shell::new(0.0, 0.5, 3.0), Shell::new(0.7, 1.0, 1.0)],
        )
        .unwrap();
        assert!(!gap.is_non_increasing());
    }

    #[test]
    fn tabulated_resample_preserves_integral() {
        let r: Vec<f64> = (0..=200).map(|i| i as f64 / 200.0).collect();
        let v: Vec<f64> = r.iter().map(|x| 5.0 * (1.0 - x)).collect();
        let tab = TabulatedProfile::new(r, v).unwrap();
        let pot = tab.resample(256).unwrap();
        // 4π ∫ 5(1-r) r² dr = 20π (1/3 - 1/4)
        let exact = 20.0 * PI / 12.0;
        assert!(((pot.integral() - exact) / exact).abs() < 1e-10);
        assert!(pot.is_non_increasing());
    }

    #[test]
    fn tabulated_parse() {
        let tab = TabulatedProfile::parse("# r V\n0 2\n0.5, 1\n1.0 0\n").unwrap();
        assert_eq!(tab.evaluate(0.25), 1.5);
        assert_eq!(tab.evaluate(2.0), 0.0);
        assert!(TabulatedProfile::parse("0 1 2\n").is_err());
        assert!(TabulatedProfile::parse("0 1\n0 2\n").is_err());
    }
}
