//! Geometric-phase curvature two-forms `V^(a)`, one per energy level.
//!
//! The coefficients satisfy `V^(a) = 1/2 V^(a)_rs dxi_r ∧ dxi_s` with
//!
//! ```text
//! V^(a)_rs = 1/4 Im sum_{b != a} (<a|l_r|b><b|l_s|a> - (r <-> s)) / E_ab^2
//! ```
//!
//! Three routes are provided: direct spectral evaluation, the closed-form
//! rest-frame table transported by `D(A(xi))`, and (in [`crate::tensor`])
//! reassembly from irreducible parts. All agree to roundoff.
//!
//! Sign convention for the weighted sum: `sum_a E_a V^(a)` equals
//! `-Im Tr(H_0 A†dA ∧ A†dA)`, the imaginary part of the orbit symplectic
//! form `omega = -Tr(H_0 A†dA ∧ A†dA)`. This matches the rest-frame values
//! `1/(2 E12)`, `1/(2 E13)`, `1/(2 E23)` in slots 12, 45, 67.

use std::fmt;

use nalgebra::Vector3;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectrum::{eigenframe, eigenvalues, SpectralData};
use crate::su3::{adjoint_matrix, lambda, CMat3, GroupElement, Mat8, OctetVector};

/// Energy level, ordered by descending eigenvalue.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Level {
    One,
    Two,
    Three,
}

impl Level {
    pub const ALL: [Level; 3] = [Level::One, Level::Two, Level::Three];

    /// One-based constructor.
    pub fn new(a: usize) -> Result<Self> {
        match a {
            1 => Ok(Self::One),
            2 => Ok(Self::Two),
            3 => Ok(Self::Three),
            _ => Err(Error::IndexOutOfRange { index: a, min: 1, max: 3 }),
        }
    }

    /// Zero-based index.
    pub fn index(self) -> usize {
        match self {
            Self::One => 0,
            Self::Two => 1,
            Self::Three => 2,
        }
    }

    pub fn number(self) -> usize {
        self.index() + 1
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

/// Antisymmetric coefficient array of the curvature of one level.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvatureTwoForm {
    pub level: Level,
    pub v: Mat8,
}

impl CurvatureTwoForm {
    /// Stores the antisymmetric part of `m`.
    pub fn new(level: Level, m: Mat8) -> Self {
        Self {
            level,
            v: (m - m.transpose()) * 0.5,
        }
    }

    /// `V_rs` with one-based indices.
    pub fn get(&self, r: usize, s: usize) -> f64 {
        self.v[(r - 1, s - 1)]
    }

    /// `V(u, w) = V_rs u_r w_s`.
    pub fn pair(&self, u: &OctetVector, w: &OctetVector) -> f64 {
        u.0.dot(&(self.v * w.0))
    }

    pub fn max_abs(&self) -> f64 {
        self.v.amax()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.v - other.v).amax()
    }
}

/// Spectral evaluation from a given eigenvector frame.
///
/// `frame` columns must be orthonormal eigenvectors of `H(xi)` in the level
/// order of `spec`; their phases are irrelevant.
pub fn curvature_from_frame(spec: &SpectralData, frame: &CMat3, level: Level) -> CurvatureTwoForm {
    let a = level.index();
    let ket_a: Vector3<Complex64> = frame.column(a).into();
    let mut v = Mat8::zeros();
    for b in (0..3).filter(|&b| b != a) {
        let ket_b: Vector3<Complex64> = frame.column(b).into();
        let gap = spec.gap(a, b);
        let weight = 0.5 / (gap * gap);
        // m_r = <a|l_r|b>; the summand reduces to 2i Im(m_r conj(m_s)).
        let m: [Complex64; 8] = std::array::from_fn(|r| ket_a.dotc(&(lambda(r) * ket_b)));
        for r in 0..8 {
            for s in (r + 1)..8 {
                let x = weight * (m[r] * m[s].conj()).im;
                v[(r, s)] += x;
                v[(s, r)] -= x;
            }
        }
    }
    CurvatureTwoForm { level, v }
}

/// `V_rs u_r w_s` without forming the 8×8 array.
pub fn curvature_pair_from_frame(
    spec: &SpectralData,
    frame: &CMat3,
    level: Level,
    u: &OctetVector,
    w: &OctetVector,
) -> f64 {
    let a = level.index();
    let ket_a: Vector3<Complex64> = frame.column(a).into();
    // lambda·u = 2 H(u)
    let hu = u.hamiltonian() * Complex64::new(2.0, 0.0);
    let hw = w.hamiltonian() * Complex64::new(2.0, 0.0);
    let mut total = 0.0;
    for b in (0..3).filter(|&b| b != a) {
        let ket_b: Vector3<Complex64> = frame.column(b).into();
        let gap = spec.gap(a, b);
        let mu = ket_a.dotc(&(hu * ket_b));
        let mw = ket_a.dotc(&(hw * ket_b));
        total += 0.5 * (mu * mw.conj()).im / (gap * gap);
    }
    total
}

/// `V^(a)(xi)(u, w)` at a Generic point.
pub fn curvature_pair(xi: &OctetVector, level: Level, u: &OctetVector, w: &OctetVector) -> Result<f64> {
    let (spec, frame) = eigenframe(xi)?;
    Ok(curvature_pair_from_frame(&spec, &frame, level, u, w))
}

/// Direct spectral evaluation at a Generic point.
pub fn curvature_spectral(xi: &OctetVector, level: Level) -> Result<CurvatureTwoForm> {
    let (spec, frame) = eigenframe(xi)?;
    Ok(curvature_from_frame(&spec, &frame, level))
}

/// All three levels from a single eigenframe.
pub fn curvature_all_levels(xi: &OctetVector) -> Result<[CurvatureTwoForm; 3]> {
    let (spec, frame) = eigenframe(xi)?;
    Ok(Level::ALL.map(|l| curvature_from_frame(&spec, &frame, l)))
}

/// The closed-form rest-frame table: nonzero only in slots 12, 45, 67.
pub fn curvature_rest_frame(spec: &SpectralData, level: Level) -> Result<CurvatureTwoForm> {
    if !(spec.e12 > 0.0 && spec.e23 > 0.0) {
        return Err(Error::DegenerateInput { class: spec.class });
    }
    let h12 = 0.5 / (spec.e12 * spec.e12);
    let h13 = 0.5 / (spec.e13 * spec.e13);
    let h23 = 0.5 / (spec.e23 * spec.e23);
    let (v12, v45, v67) = match level {
        Level::One => (h12, h13, 0.0),
        Level::Two => (-h12, 0.0, h23),
        Level::Three => (0.0, -h13, -h23),
    };
    let mut v = Mat8::zeros();
    for ((r, s), x) in [((0, 1), v12), ((3, 4), v45), ((5, 6), v67)] {
        v[(r, s)] = x;
        v[(s, r)] = -x;
    }
    Ok(CurvatureTwoForm { level, v })
}

/// `D(A(xi)) V(xi^(0)) D(A(xi))ᵀ` from the rest-frame table.
pub fn curvature_transported(xi: &OctetVector, level: Level) -> Result<CurvatureTwoForm> {
    let (spec, frame) = eigenframe(xi)?;
    let d = adjoint_matrix(&GroupElement::from_raw(frame));
    let rest = curvature_rest_frame(&spec, level)?;
    Ok(CurvatureTwoForm::new(level, d.congruence(&rest.v)))
}

/// `sum_a E_a V^(a)(xi)`.
pub fn weighted_sum(xi: &OctetVector) -> Result<Mat8> {
    let (spec, frame) = eigenframe(xi)?;
    let mut out = Mat8::zeros();
    for level in Level::ALL {
        out += curvature_from_frame(&spec, &frame, level).v * spec.energies[level.index()];
    }
    Ok(out)
}

/// `-Im Tr(H_0 A†dA ∧ A†dA)` with `A = A(xi)` differentiated by central
/// differences of step `rel_step * |xi|` along each coordinate.
///
/// Relies on the gauge rule of [`eigenframe`] being constant within the
/// stencil, which holds away from ties in the largest eigenvector component.
pub fn sum_rule_finite_difference(xi: &OctetVector, rel_step: f64) -> Result<Mat8> {
    let (spec, a) = eigenframe(xi)?;
    let h = rel_step * xi.norm();
    let a_adj = a.adjoint();
    let mut forms: Vec<CMat3> = Vec::with_capacity(8);
    for r in 0..8 {
        let mut step = OctetVector::zeros();
        step.0[r] = h;
        let (_, plus) = eigenframe(&(*xi + step))?;
        let (_, minus) = eigenframe(&(*xi - step))?;
        let da = (plus - minus) / Complex64::new(2.0 * h, 0.0);
        forms.push(a_adj * da);
    }
    let h0 = CMat3::from_diagonal(&Vector3::from(spec.energies.map(|e| Complex64::new(e, 0.0))));
    Ok(Mat8::from_fn(|r, s| {
        let wedge = forms[r] * forms[s] - forms[s] * forms[r];
        -(h0 * wedge).trace().im
    }))
}

/// Spectral data and the curvature of all levels at a rest-frame point,
/// used where only the invariants matter.
pub fn rest_frame_table(xi: &OctetVector) -> Result<[CurvatureTwoForm; 3]> {
    let spec = eigenvalues(xi);
    let mut out = [CurvatureTwoForm::new(Level::One, Mat8::zeros()); 3];
    for level in Level::ALL {
        out[level.index()] = curvature_rest_frame(&spec, level)?;
    }
    Ok(out)
}
