//! Closed-form spectral data of `H(0, xi)`.
//!
//! The invariant angle `phi` in `[pi/6, pi/2]` is fixed by
//! `(xi*xi)·xi = -|xi|^3 sin(3 phi)`, and
//! `E_a = |xi|/sqrt(3) sin(phi + 2 pi (a-1)/3)` in non-increasing order.
//! Eigenvectors are obtained from these eigenvalues by null-space
//! extraction; no iterative eigensolver is involved.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::Vector3;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::su3::{CMat3, GroupElement, OctetVector, SQRT3};

/// Default relative tolerance for degeneracy classification.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Relative tolerance under which two gauge-candidate components are tied.
const GAUGE_TIE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DegeneracyClass {
    Generic,
    /// `E_1 = E_2`, the region Σ12.
    UpperDegenerate,
    /// `E_2 = E_3`, the region Σ23.
    LowerDegenerate,
    /// `xi = 0`.
    TripleDegenerate,
}

impl DegeneracyClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Generic => "generic",
            Self::UpperDegenerate => "upper_degenerate",
            Self::LowerDegenerate => "lower_degenerate",
            Self::TripleDegenerate => "triple_degenerate",
        }
    }

    pub fn is_generic(&self) -> bool {
        matches!(self, Self::Generic)
    }
}

impl fmt::Display for DegeneracyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralData {
    /// `E_1 >= E_2 >= E_3`.
    pub energies: [f64; 3],
    /// `None` only for `xi = 0`.
    pub phi: Option<f64>,
    pub e12: f64,
    pub e23: f64,
    pub e13: f64,
    pub class: DegeneracyClass,
}

impl SpectralData {
    /// `E_a - E_b` for zero-based levels, built from the gap formulas rather
    /// than by subtracting energies.
    pub fn gap(&self, a: usize, b: usize) -> f64 {
        match (a, b) {
            (0, 1) => self.e12,
            (1, 2) => self.e23,
            (0, 2) => self.e13,
            (1, 0) => -self.e12,
            (2, 1) => -self.e23,
            (2, 0) => -self.e13,
            _ => 0.0,
        }
    }

    /// `(0, 0, E12, 0, 0, 0, 0, -sqrt(3) E3)`.
    pub fn rest_frame(&self) -> OctetVector {
        OctetVector::diagonal(self.e12, -SQRT3 * self.energies[2])
    }
}

/// `phi` in `[pi/6, pi/2]`; undefined at the origin.
pub fn phase_angle(xi: &OctetVector) -> Result<f64> {
    let norm = xi.norm();
    if norm == 0.0 {
        return Err(Error::DegenerateInput {
            class: DegeneracyClass::TripleDegenerate,
        });
    }
    let (_, cubic) = xi.invariants();
    Ok(angle_from_invariants(norm, cubic))
}

fn angle_from_invariants(norm: f64, cubic: f64) -> f64 {
    let s = (-cubic / (norm * norm * norm)).clamp(-1.0, 1.0);
    // 3 phi in [pi/2, 3 pi/2]
    (PI - s.asin()) / 3.0
}

fn classify_gaps(norm: f64, e12: f64, e23: f64, tau: f64) -> DegeneracyClass {
    if norm <= tau {
        DegeneracyClass::TripleDegenerate
    } else if e12 <= tau * norm {
        DegeneracyClass::UpperDegenerate
    } else if e23 <= tau * norm {
        DegeneracyClass::LowerDegenerate
    } else {
        DegeneracyClass::Generic
    }
}

fn spectral_data(xi: &OctetVector, tau: f64) -> SpectralData {
    let norm = xi.norm();
    if norm == 0.0 {
        return SpectralData {
            energies: [0.0; 3],
            phi: None,
            e12: 0.0,
            e23: 0.0,
            e13: 0.0,
            class: DegeneracyClass::TripleDegenerate,
        };
    }
    let (_, cubic) = xi.invariants();
    let phi = angle_from_invariants(norm, cubic);
    let scale = norm / SQRT3;
    let energies = [
        scale * phi.sin(),
        scale * (phi + 2.0 * PI / 3.0).sin(),
        scale * (phi + 4.0 * PI / 3.0).sin(),
    ];
    let e12 = (norm * (phi - PI / 6.0).sin()).max(0.0);
    let e23 = (norm * phi.cos()).max(0.0);
    SpectralData {
        energies,
        phi: Some(phi),
        e12,
        e23,
        e13: e12 + e23,
        class: classify_gaps(norm, e12, e23, tau),
    }
}

/// Ordered eigenvalues, gaps and the class at [`DEFAULT_TOL`].
pub fn eigenvalues(xi: &OctetVector) -> SpectralData {
    spectral_data(xi, DEFAULT_TOL)
}

/// Degeneracy class at relative tolerance `tau`.
pub fn classify(xi: &OctetVector, tau: f64) -> DegeneracyClass {
    spectral_data(xi, tau).class
}

/// The diagonal, eigenvalue-ordered representative of the orbit of `xi`.
pub fn rest_frame(xi: &OctetVector) -> OctetVector {
    eigenvalues(xi).rest_frame()
}

/// Null vector of `H - e I` from the largest cross product of two rows.
pub(crate) fn null_vector(h: &CMat3, e: f64) -> Vector3<Complex64> {
    let m = h - CMat3::identity() * Complex64::new(e, 0.0);
    let rows: [Vector3<Complex64>; 3] = [0, 1, 2].map(|i| m.row(i).transpose());
    let candidates = [
        rows[0].cross(&rows[1]),
        rows[0].cross(&rows[2]),
        rows[1].cross(&rows[2]),
    ];
    let best = candidates
        .into_iter()
        .max_by(|a, b| a.norm_squared().total_cmp(&b.norm_squared()))
        .unwrap();
    let n = best.norm();
    best / Complex64::new(n, 0.0)
}

fn fix_phase(v: &mut Vector3<Complex64>) {
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let k = v
        .iter()
        .position(|z| z.norm() >= max * (1.0 - GAUGE_TIE_TOL))
        .unwrap();
    let z = v[k];
    *v *= z.conj() / z.norm();
}

/// Gauge-fixed eigenvector matrix of a Generic `xi`.
///
/// Columns are eigenvectors in descending eigenvalue order. The first two
/// columns have their largest-magnitude component (lowest row on ties) real
/// and positive; the third column's phase makes `det A = 1`.
pub fn eigenframe(xi: &OctetVector) -> Result<(SpectralData, CMat3)> {
    let spec = eigenvalues(xi);
    if !spec.class.is_generic() {
        return Err(Error::DegenerateInput { class: spec.class });
    }
    let h = xi.hamiltonian();
    // Start from the extreme level with the larger gap, then the other
    // extreme level; the middle column follows from orthogonality.
    let (iso, other) = if spec.e12 < spec.e23 { (2, 0) } else { (0, 2) };
    let u_iso = null_vector(&h, spec.energies[iso]);
    let mut u_other = null_vector(&h, spec.energies[other]);
    let overlap = u_iso.dotc(&u_other);
    u_other -= u_iso * overlap;
    let n = u_other.norm();
    u_other /= Complex64::new(n, 0.0);
    let (mut u0, u2) = if iso == 0 { (u_iso, u_other) } else { (u_other, u_iso) };
    let mut u1 = u2.cross(&u0).map(|z| z.conj());
    fix_phase(&mut u0);
    fix_phase(&mut u1);
    let mut a = CMat3::from_columns(&[u0, u1, u2]);
    let det = a.determinant();
    let correction = det.conj() / det.norm();
    for i in 0..3 {
        a[(i, 2)] *= correction;
    }
    Ok((spec, a))
}

/// The special-unitary `A(xi)` with `A† H(xi) A = H(rest_frame(xi))`.
pub fn diagonalizer(xi: &OctetVector) -> Result<GroupElement> {
    eigenframe(xi).map(|(_, a)| GroupElement::from_raw(a))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn angles_on_special_directions() {
        assert!(close(phase_angle(&OctetVector::unit(8)).unwrap(), PI / 6.0, 1e-12));
        assert!(close(phase_angle(&OctetVector::unit(3)).unwrap(), PI / 3.0, 1e-12));
        let low = OctetVector::diagonal(SQRT3 / 2.0, 0.5);
        assert!(close(phase_angle(&low).unwrap(), PI / 2.0, 1e-7));
        assert!(phase_angle(&OctetVector::zeros()).is_err());
    }

    #[test]
    fn eigenvalues_of_diagonal_generators() {
        let s = eigenvalues(&OctetVector::unit(3));
        for (got, want) in s.energies.iter().zip([0.5, 0.0, -0.5]) {
            assert!(close(*got, want, 1e-14));
        }
        let s = eigenvalues(&OctetVector::unit(8));
        let want = [1.0 / (2.0 * SQRT3), 1.0 / (2.0 * SQRT3), -1.0 / SQRT3];
        for (got, want) in s.energies.iter().zip(want) {
            assert!(close(*got, want, 1e-14));
        }
        assert!(s.e12.abs() < 1e-15);
        let z = eigenvalues(&OctetVector::zeros());
        assert_eq!(z.energies, [0.0; 3]);
        assert_eq!(z.class, DegeneracyClass::TripleDegenerate);
    }

    #[test]
    fn classes() {
        assert_eq!(classify(&OctetVector::unit(8), DEFAULT_TOL), DegeneracyClass::UpperDegenerate);
        let low = OctetVector::diagonal(SQRT3 / 2.0, 0.5);
        assert_eq!(classify(&low, DEFAULT_TOL), DegeneracyClass::LowerDegenerate);
        assert_eq!(classify(&OctetVector::zeros(), DEFAULT_TOL), DegeneracyClass::TripleDegenerate);
        assert_eq!(classify(&OctetVector::unit(3), DEFAULT_TOL), DegeneracyClass::Generic);
    }

    #[test]
    fn rest_frame_fixed_point_and_e1() {
        let v = OctetVector::diagonal(1.0, 2.0);
        assert!(rest_frame(&v).max_abs_diff(&v) < 1e-14);
        let want = OctetVector::diagonal(0.5, SQRT3 / 2.0);
        assert!(rest_frame(&OctetVector::unit(1)).max_abs_diff(&want) < 1e-14);
    }

    #[test]
    fn diagonalizer_of_rest_frame_is_identity() {
        let a = diagonalizer(&OctetVector::diagonal(1.0, 2.0)).unwrap();
        assert!((a.matrix() - CMat3::identity()).camax() < 1e-14);
        assert!(matches!(
            diagonalizer(&OctetVector::unit(8)),
            Err(Error::DegenerateInput { class: DegeneracyClass::UpperDegenerate })
        ));
    }

    #[test]
    fn diagonalizer_of_e1() {
        let a = diagonalizer(&OctetVector::unit(1)).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let want = CMat3::new(
            Complex64::new(r, 0.0), Complex64::new(0.0, 0.0), Complex64::new(r, 0.0),
            Complex64::new(r, 0.0), Complex64::new(0.0, 0.0), Complex64::new(-r, 0.0),
            Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0),
        );
        assert!((a.matrix() - want).camax() < 1e-14, "{}", a.matrix());
    }
}
