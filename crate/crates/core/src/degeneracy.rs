//! Behavior near the double-degeneracy cones: asymptotic gaps, the leading
//! `1/eps^2` terms of the curvature parts, and monopole fluxes.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_6, PI};

use serde::Serialize;

use crate::curvature::Level;
use crate::error::{Error, Result};
use crate::holonomy::{sphere_flux, FluxEstimate, Sphere};
use crate::spectrum::{eigenvalues, null_vector, DegeneracyClass};
use crate::su3::{adjoint_matrix, structure_constants, CMat3, GroupElement, OctetVector, SQRT3};
use crate::tensor::{curvature_parts, CurvatureParts};

/// Maximum distance of `phi` from `pi/6` or `pi/2` accepted as "near".
pub const NEAR_ANGLE: f64 = 0.1;

/// Largest `eps / E13` accepted by [`singular_expansion`].
pub const SMALL_GAP_RATIO: f64 = 0.1;

/// Flux convergence tolerance for monopole spheres.
pub const FLUX_TOL: f64 = 1e-4 * 2.0 * PI;

/// Which double-degeneracy cone a point is close to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Surface {
    /// `E_1 = E_2`
    Upper,
    /// `E_2 = E_3`
    Lower,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GapAsymptotic {
    pub surface: Surface,
    pub predicted: f64,
    pub actual: f64,
}

impl GapAsymptotic {
    pub fn relative_error(&self) -> f64 {
        if self.actual == 0.0 {
            self.predicted.abs()
        } else {
            (self.predicted - self.actual).abs() / self.actual
        }
    }
}

/// Leading-order small gap from the two invariants:
/// `sqrt(2)/3 (|xi|^3 ± cubic)^(1/2) / |xi|^(1/2)`.
pub fn gap_asymptotic(xi: &OctetVector) -> Result<GapAsymptotic> {
    let spec = eigenvalues(xi);
    let phi = spec.phi.ok_or(Error::DegenerateInput {
        class: DegeneracyClass::TripleDegenerate,
    })?;
    let norm = xi.norm();
    let (_, cubic) = xi.invariants();
    let predict = |x: f64| 2f64.sqrt() / 3.0 * x.max(0.0).sqrt() / norm.sqrt();
    if (phi - FRAC_PI_6).abs() <= NEAR_ANGLE {
        Ok(GapAsymptotic {
            surface: Surface::Upper,
            predicted: predict(norm.powi(3) + cubic),
            actual: spec.e12,
        })
    } else if (phi - FRAC_PI_2).abs() <= NEAR_ANGLE {
        Ok(GapAsymptotic {
            surface: Surface::Lower,
            predicted: predict(norm.powi(3) - cubic),
            actual: spec.e23,
        })
    } else {
        Err(Error::NotNearDegeneracy { phi })
    }
}

/// Coefficients `c` of the `c / eps^2` terms at slots 12, 45, 67 of the rest
/// frame curvature near the upper cone, with `E12 = eps` small.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SingularExpansion {
    pub level: Level,
    pub epsilon: f64,
    pub e13: f64,
    pub octet: [f64; 3],
    pub decouplet: [f64; 3],
    pub total: [f64; 3],
}

/// Slot pairs (zero-based) carrying the rest-frame curvature.
pub const SLOTS: [(usize, usize); 3] = [(0, 1), (3, 4), (5, 6)];

impl SingularExpansion {
    /// Rest-frame point with `E12 = eps` and the given `E13`.
    pub fn rest_point(&self) -> OctetVector {
        rest_point(self.epsilon, self.e13)
    }

    /// Leading terms `c / eps^2` per slot for the octet, decouplet and total.
    pub fn leading_terms(&self) -> [[f64; 3]; 3] {
        let e2 = self.epsilon * self.epsilon;
        [self.octet, self.decouplet, self.total].map(|c| c.map(|x| x / e2))
    }

    /// The exact octet and decouplet parts at [`Self::rest_point`].
    pub fn exact_parts(&self) -> Result<CurvatureParts> {
        curvature_parts(&self.rest_point(), self.level)
    }
}

fn rest_point(eps: f64, e13: f64) -> OctetVector {
    let e23 = e13 - eps;
    OctetVector::diagonal(eps, (e13 + e23) / SQRT3)
}

/// Coefficient of `1/eps^2` in `X_3^(a)` and in `v^(a)`.
fn leading_strengths(level: Level) -> (f64, f64) {
    match level {
        Level::One => (-1.0, -1.0),
        Level::Two => (1.0, 1.0),
        Level::Three => (0.0, 0.0),
    }
}

pub fn singular_expansion(eps: f64, e13: f64, level: Level) -> Result<SingularExpansion> {
    if !(eps > 0.0) || !(e13 > 0.0) || eps > SMALL_GAP_RATIO * e13 {
        return Err(Error::InvalidInput(format!(
            "need 0 < eps <= {SMALL_GAP_RATIO} E13 (eps = {eps}, E13 = {e13})"
        )));
    }
    let (x3, v) = leading_strengths(level);
    let f = structure_constants();
    // Octet part -1/3 f_rs3 X_3 with X_3 ~ x3 / eps^2.
    let octet = SLOTS.map(|(r, s)| -f.f[r][s][2] * x3 / 3.0);
    // Unit rest-frame decouplet (W^123 = i) at the same slots.
    let unit = unit_decouplet_slots();
    let decouplet = unit.map(|c| c * v);
    let total = std::array::from_fn(|k| octet[k] + decouplet[k]);
    Ok(SingularExpansion { level, epsilon: eps, e13, octet, decouplet, total })
}

/// Rest-frame curvature contribution of `W^{123} = i`, `W̄_{123} = -i`.
fn unit_decouplet_slots() -> [f64; 3] {
    use crate::tensor::{reconstitute, IrreducibleParts};
    use num_complex::Complex64;
    let mut parts = IrreducibleParts::zero();
    for p in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
        parts.w[p[0]][p[1]][p[2]] = Complex64::new(0.0, 1.0);
        parts.w_bar[p[0]][p[1]][p[2]] = Complex64::new(0.0, -1.0);
    }
    let t = reconstitute(&parts).expect("unit decouplet is well formed");
    SLOTS.map(|(r, s)| t.components()[(r, s)])
}

/// Special-unitary `A` with `D(A) e8 = direction` for a unit direction on
/// the upper cone.
pub fn monopole_frame(direction: &OctetVector) -> Result<GroupElement> {
    let (quadratic, cubic) = direction.invariants();
    if (quadratic - 1.0).abs() > 1e-9 || (cubic + 1.0).abs() > 1e-9 {
        return Err(Error::InvalidInput(format!(
            "direction must be a unit vector with cubic invariant -1 (|n|^2 = {quadratic}, cubic = {cubic})"
        )));
    }
    let h = direction.hamiltonian();
    let u3 = null_vector(&h, -1.0 / SQRT3);
    let k = (0..3)
        .min_by(|&i, &j| u3[i].norm().total_cmp(&u3[j].norm()))
        .unwrap();
    let mut u1 = nalgebra::Vector3::zeros();
    u1[k] = num_complex::Complex64::new(1.0, 0.0);
    u1 -= u3 * u3.dotc(&u1);
    let n = u1.norm();
    u1 /= num_complex::Complex64::new(n, 0.0);
    let u2 = u3.cross(&u1).map(|z| z.conj());
    Ok(GroupElement::from_raw(CMat3::from_columns(&[u1, u2, u3])))
}

/// The sphere of `radius` in the `(xi_1, xi_2, xi_3)` unfolding directions
/// around `e8 + offset`, carried to `direction` by [`monopole_frame`].
pub fn monopole_sphere(direction: &OctetVector, radius: f64, offset: [f64; 3]) -> Result<Sphere> {
    let reach = radius + offset.iter().map(|x| x * x).sum::<f64>().sqrt();
    // In the unfolding subspace around e8 the lower cone is at distance sqrt(3).
    if !(radius > 0.0) || reach >= SQRT3 {
        return Err(Error::InvalidInput(format!(
            "sphere of radius {radius} at offset {offset:?} reaches the opposite degeneracy cone (radius + |offset| must be below sqrt(3))"
        )));
    }
    let d = adjoint_matrix(&monopole_frame(direction)?);
    let frame = [1, 2, 3].map(|r| OctetVector::unit(r).transformed(&d));
    let shift = OctetVector::new([offset[0], offset[1], offset[2], 0.0, 0.0, 0.0, 0.0, 0.0]);
    let center = (OctetVector::unit(8) + shift).transformed(&d);
    Ok(Sphere { center, frame, radius })
}

/// Outward flux of `V^(a)` through the monopole sphere centred on the cone.
pub fn monopole_flux(direction: &OctetVector, radius: f64, level: Level) -> Result<f64> {
    monopole_flux_offset(direction, radius, [0.0; 3], level).map(|e| e.flux)
}

/// As [`monopole_flux`] with the centre displaced in the unfolding subspace.
pub fn monopole_flux_offset(
    direction: &OctetVector,
    radius: f64,
    offset: [f64; 3],
    level: Level,
) -> Result<FluxEstimate> {
    let sphere = monopole_sphere(direction, radius, offset)?;
    sphere_flux(&sphere, level, FLUX_TOL)
}
