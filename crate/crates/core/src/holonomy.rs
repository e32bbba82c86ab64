//! Geometric phases along closed loops and curvature fluxes through surfaces.
//!
//! Loop phases are discrete Pancharatnam products
//! `-arg prod_k <a; xi_k | a; xi_{k+1}>`, which need no gauge choice.
//! Fluxes integrate `V^(a)(d_u xi, d_v xi)` over the parameter domain.
//!
//! Orientation: for a patch whose boundary is traversed with increasing `u`
//! first, then increasing `v` (the induced orientation), the two quantities
//! obey `loop_phase(boundary) = -surface_flux(patch)` modulo `2 pi`. With the
//! outward normal, a small sphere around the upper degeneracy carries flux
//! `+2 pi` for level 1 and `-2 pi` for level 2.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen, Vector3};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::curvature::{curvature_pair_from_frame, Level};
use crate::error::{Error, Result};
use crate::spectrum::{classify, eigenframe, DEFAULT_TOL};
use crate::su3::OctetVector;

/// Minimum `|overlap|` between consecutive eigenvectors on a loop.
pub const OVERLAP_GUARD: f64 = 0.1;

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_angle(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` (Golub-Welsch).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0);
    let jacobi = DMatrix::from_fn(n, n, |i, j| {
        if i.abs_diff(j) == 1 {
            let k = i.max(j) as f64;
            k / (4.0 * k * k - 1.0).sqrt()
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(jacobi);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| (eig.eigenvalues[i], 2.0 * eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

fn require_generic(xi: &OctetVector) -> Result<()> {
    let class = classify(xi, DEFAULT_TOL);
    if class.is_generic() {
        Ok(())
    } else {
        Err(Error::DegenerateInput { class })
    }
}

/// Closed polygonal loop; the last sample connects back to the first.
#[derive(Clone, Debug, PartialEq)]
pub struct LoopPath {
    points: Vec<OctetVector>,
}

impl LoopPath {
    pub fn new(points: Vec<OctetVector>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInput("loop needs at least one sample".into()));
        }
        for p in &points {
            require_generic(p)?;
        }
        Ok(Self { points })
    }

    /// `center + radius (cos t u + sin t w)` at `samples` equally spaced `t`.
    pub fn circle(
        center: &OctetVector,
        u: &OctetVector,
        w: &OctetVector,
        radius: f64,
        samples: usize,
    ) -> Result<Self> {
        let points = (0..samples)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / samples as f64;
                *center + (*u * t.cos() + *w * t.sin()) * radius
            })
            .collect();
        Self::new(points)
    }

    pub fn points(&self) -> &[OctetVector] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Same loop traversed backwards from the same starting point.
    pub fn reversed(&self) -> Self {
        let mut points = self.points.clone();
        points[1..].reverse();
        Self { points }
    }
}

fn eigenvector(xi: &OctetVector, level: Level) -> Result<Vector3<Complex64>> {
    let (_, frame) = eigenframe(xi)?;
    Ok(frame.column(level.index()).into())
}

/// Discrete geometric phase of one level, in `(-pi, pi]`.
pub fn loop_phase(path: &LoopPath, level: Level) -> Result<f64> {
    let kets: Vec<Vector3<Complex64>> = path
        .points
        .par_iter()
        .map(|p| eigenvector(p, level))
        .collect::<Result<_>>()?;
    let n = kets.len();
    let overlaps: Vec<Complex64> = (0..n)
        .into_par_iter()
        .map(|k| kets[k].dotc(&kets[(k + 1) % n]))
        .collect();
    let mut product = Complex64::new(1.0, 0.0);
    for (step, z) in overlaps.into_iter().enumerate() {
        let size = z.norm();
        if size <= OVERLAP_GUARD {
            return Err(Error::UnderResolved { step, overlap: size });
        }
        product *= z / size;
        product /= product.norm();
    }
    Ok(wrap_angle(-product.arg()))
}

/// Phases of the three levels and their sum wrapped into `(-pi, pi]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhaseSum {
    pub phases: [f64; 3],
    pub sum: f64,
}

pub fn phase_sum_rule_check(path: &LoopPath) -> Result<PhaseSum> {
    let mut phases = [0.0; 3];
    for level in Level::ALL {
        phases[level.index()] = loop_phase(path, level)?;
    }
    Ok(PhaseSum {
        phases,
        sum: wrap_angle(phases.iter().sum()),
    })
}

/// A map `[0,1]^2 -> R^8` sampled on a grid and bilinearly interpolated.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfacePatch {
    /// `grid[i][j]` is the sample at `(u, v) = (i/nu, j/nv)`.
    grid: Vec<Vec<OctetVector>>,
}

impl SurfacePatch {
    pub fn new(grid: Vec<Vec<OctetVector>>) -> Result<Self> {
        let nv = grid.first().map_or(0, |row| row.len());
        if grid.len() < 2 || nv < 2 || grid.iter().any(|row| row.len() != nv) {
            return Err(Error::InvalidInput(
                "patch grid must be rectangular with at least 2×2 samples".into(),
            ));
        }
        for p in grid.iter().flatten() {
            require_generic(p)?;
        }
        Ok(Self { grid })
    }

    /// Samples `f` on an `(nu + 1) × (nv + 1)` grid.
    pub fn from_fn<F>(nu: usize, nv: usize, f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> OctetVector + Sync,
    {
        let grid = (0..=nu)
            .into_par_iter()
            .map(|i| {
                (0..=nv)
                    .map(|j| f(i as f64 / nu as f64, j as f64 / nv as f64))
                    .collect()
            })
            .collect();
        Self::new(grid)
    }

    /// Cap `center + radius (sin t cos p e1 + sin t sin p e2 + cos t e3)`
    /// with `t = theta_max u`, `p = 2 pi v`.
    pub fn spherical_cap(
        center: &OctetVector,
        frame: &[OctetVector; 3],
        radius: f64,
        theta_max: f64,
        grid: usize,
    ) -> Result<Self> {
        let [e1, e2, e3] = *frame;
        Self::from_fn(grid, grid, |u, v| {
            let (t, p) = (theta_max * u, 2.0 * PI * v);
            *center + (e1 * (t.sin() * p.cos()) + e2 * (t.sin() * p.sin()) + e3 * t.cos()) * radius
        })
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.grid.len() - 1, self.grid[0].len() - 1)
    }

    pub fn grid(&self) -> &[Vec<OctetVector>] {
        &self.grid
    }

    /// Bilinear interpolation at `(u, v)` in `[0,1]^2`.
    pub fn sample(&self, u: f64, v: f64) -> OctetVector {
        let (nu, nv) = self.shape();
        let (x, y) = (u.clamp(0.0, 1.0) * nu as f64, v.clamp(0.0, 1.0) * nv as f64);
        let i = (x.floor() as usize).min(nu - 1);
        let j = (y.floor() as usize).min(nv - 1);
        let (s, t) = (x - i as f64, y - j as f64);
        let g = &self.grid;
        g[i][j] * ((1.0 - s) * (1.0 - t))
            + g[i + 1][j] * (s * (1.0 - t))
            + g[i][j + 1] * ((1.0 - s) * t)
            + g[i + 1][j + 1] * (s * t)
    }

    /// Boundary loop in the induced orientation with `per_cell` samples on
    /// every grid edge.
    pub fn boundary(&self, per_cell: usize) -> Result<LoopPath> {
        let (nu, nv) = self.shape();
        let per_cell = per_cell.max(1);
        let mut points = Vec::with_capacity(2 * (nu + nv) * per_cell);
        let steps = |n: usize| (0..n * per_cell).map(move |k| k as f64 / (n * per_cell) as f64);
        points.extend(steps(nu).map(|s| self.sample(s, 0.0)));
        points.extend(steps(nv).map(|s| self.sample(1.0, s)));
        points.extend(steps(nu).map(|s| self.sample(1.0 - s, 1.0)));
        points.extend(steps(nv).map(|s| self.sample(0.0, 1.0 - s)));
        LoopPath::new(points)
    }
}

/// `∬ V^(a)(d_u xi, d_v xi) du dv` with 2×2 Gauss-Legendre per grid cell.
pub fn surface_flux(patch: &SurfacePatch, level: Level) -> Result<f64> {
    let (nu, nv) = patch.shape();
    let g = &patch.grid;
    let h = 0.5 / 3f64.sqrt();
    let nodes = [0.5 - h, 0.5 + h];
    let rows: Vec<f64> = (0..nu)
        .into_par_iter()
        .map(|i| {
            let mut row = 0.0;
            for j in 0..nv {
                let (p00, p10, p01, p11) = (g[i][j], g[i + 1][j], g[i][j + 1], g[i + 1][j + 1]);
                let mut cell = 0.0;
                for s in nodes {
                    for t in nodes {
                        let xi = p00 * ((1.0 - s) * (1.0 - t))
                            + p10 * (s * (1.0 - t))
                            + p01 * ((1.0 - s) * t)
                            + p11 * (s * t);
                        let du = (p10 - p00) * (1.0 - t) + (p11 - p01) * t;
                        let dv = (p01 - p00) * (1.0 - s) + (p11 - p10) * s;
                        let (spec, frame) = eigenframe(&xi)?;
                        cell += curvature_pair_from_frame(&spec, &frame, level, &du, &dv);
                    }
                }
                row += 0.25 * cell;
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    Ok(rows.iter().sum())
}

/// A round 2-sphere `center + radius (x e1 + y e2 + z e3)` in an orthonormal
/// 3-frame of `R^8`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sphere {
    pub center: OctetVector,
    pub frame: [OctetVector; 3],
    pub radius: f64,
}

/// Flux result with the quadrature order that produced it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FluxEstimate {
    pub flux: f64,
    /// Polar nodes; the azimuthal count is twice this.
    pub order: usize,
    pub change: f64,
}

const MIN_ORDER: usize = 8;
const MAX_ORDER: usize = 256;

fn sphere_quadrature(sphere: &Sphere, level: Level, n: usize) -> Result<f64> {
    let (xt, wt) = gauss_legendre(n);
    let (xp, wp) = gauss_legendre(2 * n);
    let [e1, e2, e3] = sphere.frame;
    let r = sphere.radius;
    let rows: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let t = 0.5 * PI * (xt[i] + 1.0);
            let (st, ct) = t.sin_cos();
            let mut row = 0.0;
            for (x, w) in xp.iter().zip(&wp) {
                let p = PI * (x + 1.0);
                let (sp, cp) = p.sin_cos();
                let xi = sphere.center + (e1 * (st * cp) + e2 * (st * sp) + e3 * ct) * r;
                let dt = (e1 * (ct * cp) + e2 * (ct * sp) - e3 * st) * r;
                let dp = (e1 * (-st * sp) + e2 * (st * cp)) * r;
                let (spec, frame) = eigenframe(&xi)?;
                row += w * curvature_pair_from_frame(&spec, &frame, level, &dt, &dp);
            }
            Ok(wt[i] * row)
        })
        .collect::<Result<_>>()?;
    // Jacobians of [-1,1] -> [0,pi] and [-1,1] -> [0,2pi]
    Ok(rows.iter().sum::<f64>() * 0.5 * PI * PI)
}

/// Outward flux of `V^(a)` through a sphere by product Gauss-Legendre,
/// doubling the order from 8 until successive values differ by less than
/// `tol`.
pub fn sphere_flux(sphere: &Sphere, level: Level, tol: f64) -> Result<FluxEstimate> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("flux tolerance must be positive, got {tol}")));
    }
    let mut n = MIN_ORDER;
    let mut previous = sphere_quadrature(sphere, level, n)?;
    let mut change = f64::INFINITY;
    while n < MAX_ORDER {
        n *= 2;
        let current = sphere_quadrature(sphere, level, n)?;
        change = (current - previous).abs();
        previous = current;
        if change < tol {
            return Ok(FluxEstimate { flux: current, order: n, change });
        }
    }
    Err(Error::NotConverged { order: n, change })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_exactness() {
        let (x, w) = gauss_legendre(6);
        let integral: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(10)).sum();
        assert!((integral - 2.0 / 11.0).abs() < 1e-14);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn wrapping() {
        assert_eq!(wrap_angle(-PI), PI);
        assert!((wrap_angle(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        assert_eq!(wrap_angle(0.0), 0.0);
    }

    #[test]
    fn constant_and_torus_loops() {
        let p = OctetVector::new([0.3, 0.1, 0.5, -0.2, 0.4, 0.0, 0.2, 0.8]);
        let path = LoopPath::new(vec![p; 5]).unwrap();
        assert_eq!(loop_phase(&path, Level::One).unwrap(), 0.0);
        let torus = LoopPath::circle(
            &OctetVector::diagonal(0.5, 1.0),
            &OctetVector::unit(3),
            &OctetVector::unit(8),
            0.1,
            50,
        )
        .unwrap();
        for level in Level::ALL {
            assert!(loop_phase(&torus, level).unwrap().abs() < 1e-14);
        }
    }

    #[test]
    fn degenerate_sample_rejected() {
        assert!(matches!(
            LoopPath::new(vec![OctetVector::unit(8)]),
            Err(Error::DegenerateInput { .. })
        ));
    }

    #[test]
    fn coarse_loop_is_under_resolved() {
        let c = OctetVector::unit(8);
        let path = LoopPath::circle(&c, &OctetVector::unit(1), &OctetVector::unit(2), 0.1, 2).unwrap();
        assert!(matches!(loop_phase(&path, Level::One), Err(Error::UnderResolved { .. })));
    }

    #[test]
    fn zero_area_patch() {
        let a = OctetVector::diagonal(0.5, 1.0);
        let b = OctetVector::new([0.2, 0.0, 0.5, 0.0, 0.1, 0.0, 0.0, 1.0]);
        let patch = SurfacePatch::from_fn(4, 4, |u, _| a * (1.0 - u) + b * u).unwrap();
        assert_eq!(surface_flux(&patch, Level::Two).unwrap(), 0.0);
    }

    #[test]
    fn bilinear_reproduces_grid() {
        let patch = SurfacePatch::from_fn(3, 5, |u, v| OctetVector::new([u, v, 1.0, 0.0, 0.0, 0.0, 0.0, 0.5])).unwrap();
        let s = patch.sample(1.0 / 3.0, 0.4);
        assert!((s[0] - 1.0 / 3.0).abs() < 1e-15 && (s[1] - 0.4).abs() < 1e-15);
    }
}
