//! Mirror maps, symmetrized kernels and the Neumann cosine basis on the box
//! `Λ = [0, ℓ]³`, with a numerical check that symmetrized radial kernels are
//! diagonal in that basis.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{gauss_legendre, integrate, Tolerance};

/// `(p_z(x))_i = (−1)^{z_i}(x_i − ℓ/2) + ℓ/2 + ℓz_i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MirrorMap {
    pub z: [i32; 3],
    pub ell: f64,
}

impl MirrorMap {
    pub fn new(z: [i32; 3], ell: f64) -> Self {
        Self { z, ell }
    }

    pub fn apply(&self, x: [f64; 3]) -> [f64; 3] {
        mirror(self.z, x, self.ell)
    }

    pub fn inverse(&self, x: [f64; 3]) -> [f64; 3] {
        let l = self.ell;
        std::array::from_fn(|i| {
            let z = self.z[i];
            parity(z) * (x[i] - l / 2.0 - l * z as f64) + l / 2.0
        })
    }
}

fn parity(z: i32) -> f64 {
    if z.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

pub fn mirror(z: [i32; 3], x: [f64; 3], ell: f64) -> [f64; 3] {
    std::array::from_fn(|i| parity(z[i]) * (x[i] - ell / 2.0) + ell / 2.0 + ell * z[i] as f64)
}

/// Compactly supported radial function on `ℝ³`.
pub trait RadialKernel: Sync {
    fn value(&self, r: f64) -> f64;
    fn support_radius(&self) -> f64;

    /// `f̂(p) = 4π ∫₀^R f(r) r² sin(pr)/(pr) dr` by adaptive quadrature.
    fn fourier_radial(&self, p: f64) -> Result<f64> {
        let r_max = self.support_radius();
        let f = |r: f64| {
            let pr = p * r;
            let sinc = if pr.abs() < 1e-4 { 1.0 - pr * pr / 6.0 } else { pr.sin() / pr };
            4.0 * PI * self.value(r) * r * r * sinc
        };
        Ok(integrate(f, 0.0, r_max, Tolerance::new(1e-15, 1e-13))?.value)
    }
}

/// `A (1 − (r/R)²)³` for `r < R`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RadialBump {
    pub radius: f64,
    pub amplitude: f64,
}

impl RadialBump {
    pub fn new(radius: f64, amplitude: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite() && amplitude.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "bump needs a positive finite radius, got R={radius}, A={amplitude}"
            )));
        }
        Ok(Self { radius, amplitude })
    }
}

impl RadialKernel for RadialBump {
    fn value(&self, r: f64) -> f64 {
        if r >= self.radius {
            0.0
        } else {
            let s = 1.0 - (r / self.radius).powi(2);
            self.amplitude * s * s * s
        }
    }

    fn support_radius(&self) -> f64 {
        self.radius
    }
}

fn check_support<K: RadialKernel + ?Sized>(f: &K, ell: f64) -> Result<()> {
    if !(ell > 0.0) {
        return Err(Error::InvalidArgument(format!("box length must be positive, got {ell}")));
    }
    if f.support_radius() > ell / 2.0 {
        return Err(Error::InvalidArgument(format!(
            "kernel support radius {} exceeds half the box length {}",
            f.support_radius(),
            ell / 2.0
        )));
    }
    Ok(())
}

fn norm(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// `f^s(x, y) = Σ_{|z_i| ≤ 1} f(p_z(x) − y)`; terms with some `|z_i| ≥ 2`
/// vanish when the support radius is at most `ℓ/2`.
pub fn symmetrized_kernel<K: RadialKernel + ?Sized>(f: &K, x: [f64; 3], y: [f64; 3], ell: f64) -> Result<f64> {
    check_support(f, ell)?;
    let mut total = 0.0;
    for z0 in -1..=1 {
        for z1 in -1..=1 {
            for z2 in -1..=1 {
                let px = mirror([z0, z1, z2], x, ell);
                total += f.value(norm([px[0] - y[0], px[1] - y[1], px[2] - y[2]]));
            }
        }
    }
    Ok(total)
}

/// Normalized eigenbasis of the Neumann Laplacian on `[0, ℓ]³`,
/// `u_p(x) = ℓ^{−3/2} Π c_{p_i} cos(p_i x_i)` with `p = (π/ℓ) n`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct NeumannBasis {
    pub ell: f64,
}

impl NeumannBasis {
    pub fn new(ell: f64) -> Result<Self> {
        if !(ell > 0.0 && ell.is_finite()) {
            return Err(Error::InvalidArgument(format!("box length must be positive, got {ell}")));
        }
        Ok(Self { ell })
    }

    pub fn c(k: u32) -> f64 {
        if k == 0 {
            1.0
        } else {
            std::f64::consts::SQRT_2
        }
    }

    pub fn momentum(&self, n: [u32; 3]) -> [f64; 3] {
        n.map(|k| PI * k as f64 / self.ell)
    }

    pub fn eval(&self, n: [u32; 3], x: [f64; 3]) -> f64 {
        let p = self.momentum(n);
        (0..3).map(|i| Self::c(n[i]) * (p[i] * x[i]).cos()).product::<f64>() / self.ell.powf(1.5)
    }

    /// `−Δu_p(x)` from the second derivatives of the cosine factors.
    pub fn neg_laplacian(&self, n: [u32; 3], x: [f64; 3]) -> f64 {
        let p = self.momentum(n);
        let factor = |i: usize| Self::c(n[i]) * (p[i] * x[i]).cos();
        let d2 = |i: usize| -Self::c(n[i]) * p[i] * p[i] * (p[i] * x[i]).cos();
        let mut total = 0.0;
        for i in 0..3 {
            let mut term = -d2(i);
            for j in 0..3 {
                if j != i {
                    term *= factor(j);
                }
            }
            total += term;
        }
        total / self.ell.powf(1.5)
    }

    /// `∫_Λ u_n u_m` from exact one-dimensional cosine integrals.
    pub fn overlap(&self, n: [u32; 3], m: [u32; 3]) -> f64 {
        let l = self.ell;
        (0..3)
            .map(|i| {
                let (a, b) = (PI * n[i] as f64 / l, PI * m[i] as f64 / l);
                Self::c(n[i]) * Self::c(m[i]) * cos_cos_integral(a, 0.0, b, 0.0, l) / l
            })
            .product()
    }
}

/// `∫_lo^hi cos(k y + φ) dy`, written as `2 cos(k·mid + φ) sin(k·half)/k`.
fn cos_integral(k: f64, phi: f64, lo: f64, hi: f64) -> f64 {
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    if k == 0.0 {
        return 2.0 * half * phi.cos();
    }
    2.0 * (k * mid + phi).cos() * (k * half).sin() / k
}

/// `∫_lo^hi cos(s y + φ) cos(q y) dy`.
fn cos_cos_integral(s: f64, phi: f64, q: f64, lo: f64, hi: f64) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    0.5 * (cos_integral(s + q, phi, lo, hi) + cos_integral(s - q, phi, lo, hi))
}

/// One axis of the mirror-summed overlap:
/// `Σ_{z ∈ {−1,0,1}} ∫ cos(p·(p_z⁻¹(y + w))) cos(q y) dy` over the `y ∈ [0, ℓ]`
/// with `y + w` in the `z`-th cell.
fn axis_factor(p: f64, q: f64, w: f64, ell: f64) -> f64 {
    let mut total = 0.0;
    for z in -1..=1 {
        let sign = parity(z);
        let shift = ell * z as f64;
        let lo = (shift - w).max(0.0);
        let hi = (shift + ell - w).min(ell);
        if hi <= lo {
            continue;
        }
        // p · (sign (y + w − ℓ/2 − ℓz) + ℓ/2) = s y + φ
        let s = sign * p;
        let phi = p * (sign * (w - ell / 2.0 - shift) + ell / 2.0);
        total += cos_cos_integral(s, phi, q, lo, hi);
    }
    total
}

#[derive(Debug, Clone, Serialize)]
pub struct DiagonalizationReport {
    pub ell: f64,
    pub momenta: Vec<[u32; 3]>,
    /// `M_{pq} = ∫∫ f^s(x, y) u_p(x) u_q(y) dx dy`, row-major.
    pub matrix: Vec<f64>,
    /// `f̂(p)` by one-dimensional radial quadrature.
    pub fhat: Vec<f64>,
    pub fhat_zero: f64,
    /// `max_{p≠q} |M_{pq}|`.
    pub max_off_diagonal: f64,
    /// `max_p |M_pp − f̂(p)| / |f̂(p)|`.
    pub max_diagonal_rel_error: f64,
    /// Largest change of any entry between the two quadrature orders.
    pub refinement_change: f64,
    pub nodes: usize,
}

impl DiagonalizationReport {
    pub fn residual(&self, i: usize, j: usize) -> f64 {
        let n = self.momenta.len();
        let delta = if i == j { self.fhat[i] } else { 0.0 };
        self.matrix[i * n + j] - delta
    }
}

/// All `n ∈ ℕ₀³` with `|n|² ≤ n2_max`, ordered by `|n|²` then lexicographically.
pub fn momenta_up_to(n2_max: u32) -> Vec<[u32; 3]> {
    let k = (n2_max as f64).sqrt().floor() as u32;
    let mut out = Vec::new();
    for a in 0..=k {
        for b in 0..=k {
            for c in 0..=k {
                if a * a + b * b + c * c <= n2_max {
                    out.push([a, b, c]);
                }
            }
        }
    }
    out.sort_by_key(|n| (n[0] * n[0] + n[1] * n[1] + n[2] * n[2], *n));
    out
}

fn overlap_matrix<K: RadialKernel + ?Sized>(f: &K, ell: f64, momenta: &[[u32; 3]], nodes: usize) -> Vec<f64> {
    let r_max = f.support_radius();
    let (x, w) = gauss_legendre(nodes);
    let map = |t: f64, hi: f64| 0.5 * hi * (t + 1.0);
    // Quadrature points on the ball: each octant in spherical coordinates,
    // so that the integrand is smooth on every cell.
    let mut points = Vec::with_capacity(8 * nodes * nodes * nodes);
    for octant in 0..8u32 {
        let sg: [f64; 3] = std::array::from_fn(|i| if octant >> i & 1 == 1 { -1.0 } else { 1.0 });
        for (&xr, &wr) in x.iter().zip(&w) {
            let r = map(xr, r_max);
            let fr = f.value(r);
            if fr == 0.0 {
                continue;
            }
            for (&xt, &wt) in x.iter().zip(&w) {
                let th = map(xt, PI / 2.0);
                for (&xp, &wp) in x.iter().zip(&w) {
                    let ph = map(xp, PI / 2.0);
                    let weight = wr * wt * wp * (0.5 * r_max) * (PI / 4.0) * (PI / 4.0) * r * r * th.sin() * fr;
                    let v = [
                        sg[0] * r * th.sin() * ph.cos(),
                        sg[1] * r * th.sin() * ph.sin(),
                        sg[2] * r * th.cos(),
                    ];
                    points.push((v, weight));
                }
            }
        }
    }
    let kmax = momenta.iter().flat_map(|n| n.iter().copied()).max().unwrap_or(0) as usize;
    let nk = kmax + 1;
    // factors[pt][axis][kp * nk + kq]
    let factors: Vec<[Vec<f64>; 3]> = points
        .par_iter()
        .map(|(v, _)| {
            std::array::from_fn(|axis| {
                let mut t = vec![0.0; nk * nk];
                for kp in 0..nk {
                    for kq in 0..nk {
                        let p = PI * kp as f64 / ell;
                        let q = PI * kq as f64 / ell;
                        t[kp * nk + kq] = axis_factor(p, q, v[axis], ell);
                    }
                }
                t
            })
        })
        .collect();
    let nm = momenta.len();
    let norm = 1.0 / ell.powi(3);
    (0..nm * nm)
        .into_par_iter()
        .map(|idx| {
            let (np, nq) = (momenta[idx / nm], momenta[idx % nm]);
            let c: f64 = (0..3).map(|i| NeumannBasis::c(np[i]) * NeumannBasis::c(nq[i])).product();
            let slot: [usize; 3] = std::array::from_fn(|i| np[i] as usize * nk + nq[i] as usize);
            let mut acc = crate::numerics::CompensatedSum::new();
            for ((_, weight), fac) in points.iter().zip(&factors) {
                acc.add(weight * fac[0][slot[0]] * fac[1][slot[1]] * fac[2][slot[2]]);
            }
            acc.value() * c * norm
        })
        .collect()
}

/// Computes `M_{pq} = ∫_Λ∫_Λ f^s(x, y) u_p(x) u_q(y) dx dy`. Summing the
/// mirror images turns the `x`-integral into an integral over the translate
/// `w = p_z(x) − y` in the ball of radius `R`, and the `y`-integral is then a
/// product of exact cosine integrals. The ball integral uses Gauss–Legendre
/// with `nodes` and `3·nodes/2` points per direction; their difference is
/// reported and must stay below `1e−10·|f̂(0)|`.
pub fn verify_diagonalization<K: RadialKernel + ?Sized>(
    f: &K,
    ell: f64,
    momenta: &[[u32; 3]],
    nodes: usize,
) -> Result<DiagonalizationReport> {
    check_support(f, ell)?;
    if momenta.is_empty() || nodes < 4 {
        return Err(Error::InvalidArgument("need at least one momentum and four nodes".into()));
    }
    let coarse = overlap_matrix(f, ell, momenta, nodes);
    let fine_nodes = nodes + nodes / 2;
    let matrix = overlap_matrix(f, ell, momenta, fine_nodes);
    let refinement_change = coarse
        .iter()
        .zip(&matrix)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let basis = NeumannBasis::new(ell)?;
    let fhat = momenta
        .iter()
        .map(|&n| f.fourier_radial(norm(basis.momentum(n))))
        .collect::<Result<Vec<f64>>>()?;
    let fhat_zero = f.fourier_radial(0.0)?;
    if refinement_change > 1e-10 * fhat_zero.abs() {
        return Err(Error::Quadrature {
            a: 0.0,
            b: f.support_radius(),
            error: refinement_change,
            message: format!("ball quadrature not converged at {fine_nodes} nodes"),
        });
    }
    let n = momenta.len();
    let mut max_off = 0.0_f64;
    let mut max_diag = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            let m = matrix[i * n + j];
            if i == j {
                max_diag = max_diag.max(((m - fhat[i]) / fhat[i]).abs());
            } else {
                max_off = max_off.max(m.abs());
            }
        }
    }
    Ok(DiagonalizationReport {
        ell,
        momenta: momenta.to_vec(),
        matrix,
        fhat,
        fhat_zero,
        max_off_diagonal: max_off,
        max_diagonal_rel_error: max_diag,
        refinement_change,
        nodes: fine_nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mirror_examples() {
        let x = [0.3, 0.2, 0.9];
        assert_eq!(mirror([0, 0, 0], x, 1.0), x);
        let m = mirror([1, 0, 0], [0.0, 0.4, 0.7], 1.0);
        assert_eq!(m, [2.0, 0.4, 0.7]);
        let map = MirrorMap::new([-1, 1, 0], 2.0);
        let back = map.inverse(map.apply(x));
        for i in 0..3 {
            assert!((back[i] - x[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn basis_is_mirror_invariant_and_orthonormal() {
        let b = NeumannBasis::new(1.7).unwrap();
        let x = [0.3, 1.1, 0.05];
        for n in momenta_up_to(6) {
            for z in [[1, 0, -1], [-1, -1, 1], [0, 1, 0]] {
                let y = mirror(z, x, b.ell);
                assert!((b.eval(n, y) - b.eval(n, x)).abs() < 1e-12);
            }
            for m in momenta_up_to(6) {
                let expect = if n == m { 1.0 } else { 0.0 };
                assert!((b.overlap(n, m) - expect).abs() < 1e-12, "{n:?} {m:?}");
            }
        }
    }

    #[test]
    fn laplacian_eigenvalue() {
        let b = NeumannBasis::new(2.0).unwrap();
        let x = [0.37, 1.21, 0.66];
        for n in momenta_up_to(9) {
            let p = b.momentum(n);
            let p2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
            assert!((b.neg_laplacian(n, x) - p2 * b.eval(n, x)).abs() < 1e-12);
        }
    }

    #[test]
    fn momenta_count() {
        assert_eq!(momenta_up_to(0).len(), 1);
        assert_eq!(momenta_up_to(1).len(), 4);
        assert_eq!(momenta_up_to(9).len(), 29);
    }

    #[test]
    fn kernel_interior_and_symmetry() {
        let f = RadialBump::new(0.3, 1.0).unwrap();
        let x = [0.45, 0.5, 0.55];
        let y = [0.5, 0.42, 0.6];
        let direct = f.value(norm([x[0] - y[0], x[1] - y[1], x[2] - y[2]]));
        assert!((symmetrized_kernel(&f, x, y, 1.0).unwrap() - direct).abs() < 1e-15);
        let x = [0.05, 0.9, 0.1];
        let y = [0.12, 0.97, 0.02];
        let a = symmetrized_kernel(&f, x, y, 1.0).unwrap();
        let b = symmetrized_kernel(&f, y, x, 1.0).unwrap();
        assert!((a - b).abs() < 1e-14);
        assert!(symmetrized_kernel(&f, x, y, 0.5).is_err());
        assert_eq!(symmetrized_kernel(&RadialBump::new(0.3, 0.0).unwrap(), x, y, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn bump_transform_at_zero() {
        // 4π ∫₀^R (1 − r²/R²)³ r² dr = 4π R³ · 16/315
        let f = RadialBump::new(0.7, 2.0).unwrap();
        let expect = 2.0 * 4.0 * PI * 0.7f64.powi(3) * 16.0 / 315.0;
        assert!((f.fourier_radial(0.0).unwrap() - expect).abs() < 1e-14 * expect);
    }

    #[test]
    fn small_diagonalization() {
        let f = RadialBump::new(0.45, 1.0).unwrap();
        let r = verify_diagonalization(&f, 1.0, &momenta_up_to(2), 16).unwrap();
        assert!(r.max_off_diagonal < 1e-8 * r.fhat_zero);
        assert!(r.max_diagonal_rel_error < 1e-6);
    }
}
