//! Antisymmetric tensors over the octet in 4-index form, their split into
//! decouplet, antidecouplet and octet parts, and curvature reassembled from
//! those parts.
//!
//! Index convention: `t[a][b][c][d]` stores `T^{ab}_{cd}`, a 3-index
//! symmetric array `w[a][b][c]` stores `W^{abc}` or `W̄_{abc}`, and all
//! indices are zero-based.

use num_complex::Complex64;

use crate::curvature::{CurvatureTwoForm, Level};
use crate::error::{Error, Result};
use crate::spectrum::{eigenframe, eigenvalues, SpectralData};
use crate::su3::{hermitian_to_cmat3, lambda, structure_constants, CMat3, Mat8, OctetVector, SQRT3};
use crate::un_kinematics::HermitianMatrix;

pub type Tensor4 = [[[[Complex64; 3]; 3]; 3]; 3];
pub type Sym3 = [[[Complex64; 3]; 3]; 3];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

const ANTISYM_TOL: f64 = 1e-12;
const RESIDUE_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;

fn zero4() -> Tensor4 {
    [[[[ZERO; 3]; 3]; 3]; 3]
}

fn zero3() -> Sym3 {
    [[[ZERO; 3]; 3]; 3]
}

/// Levi-Civita symbol.
pub fn epsilon(a: usize, b: usize, c: usize) -> f64 {
    match (a, b, c) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// Largest deviation from full symmetry under index permutations.
pub fn symmetry_defect(w: &Sym3) -> f64 {
    let mut worst: f64 = 0.0;
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                let x = w[a][b][c];
                for y in [w[b][a][c], w[a][c][b], w[c][b][a]] {
                    worst = worst.max((x - y).norm());
                }
            }
        }
    }
    worst
}

fn max_norm3(w: &Sym3) -> f64 {
    w.iter().flatten().flatten().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `X^a_b = X_r (lambda_r)_{ab}`.
pub fn octet_matrix(x: &OctetVector) -> HermitianMatrix {
    crate::su3::cmat3_to_hermitian(&octet_cmat(x))
}

fn octet_cmat(x: &OctetVector) -> CMat3 {
    (0..8).fold(CMat3::zeros(), |acc, r| acc + lambda(r) * Complex64::new(x[r], 0.0))
}

/// `X_r = 1/2 Tr(X lambda_r)`; rejects a trace above `1e-10`.
pub fn octet_from_matrix(h: &HermitianMatrix) -> Result<OctetVector> {
    if h.dim() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: h.dim() });
    }
    let trace = h.trace();
    if trace.abs() > TRACE_TOL {
        return Err(Error::NotTraceless { trace: trace.abs() });
    }
    Ok(OctetVector::from_hamiltonian(&(hermitian_to_cmat3(h) * Complex64::new(0.5, 0.0))))
}

/// An antisymmetric `T_rs` together with its 4-index form.
#[derive(Clone, Debug, PartialEq)]
pub struct AntisymTensor {
    rs: Mat8,
    four: Tensor4,
}

impl AntisymTensor {
    pub fn components(&self) -> &Mat8 {
        &self.rs
    }

    pub fn four_index(&self) -> &Tensor4 {
        &self.four
    }

    /// `T^{ab}_{cd}`, zero-based.
    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> Complex64 {
        self.four[a][b][c][d]
    }
}

/// `T^{ab}_{cd} = (lambda_r)_{ac} (lambda_s)_{bd} T_rs`.
pub fn to_tensor_components(t: &Mat8) -> Result<AntisymTensor> {
    let deviation = (t + t.transpose()).amax();
    if deviation > ANTISYM_TOL * t.amax().max(1.0) {
        return Err(Error::NotAntisymmetric { deviation });
    }
    Ok(AntisymTensor { rs: *t, four: four_index(t) })
}

fn four_index(t: &Mat8) -> Tensor4 {
    // M_s = sum_r T_rs lambda_r
    let m: [CMat3; 8] = std::array::from_fn(|s| {
        (0..8).fold(CMat3::zeros(), |acc, r| acc + lambda(r) * Complex64::new(t[(r, s)], 0.0))
    });
    let mut out = zero4();
    for (s, ms) in m.iter().enumerate() {
        let ls = lambda(s);
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    for d in 0..3 {
                        out[a][b][c][d] += ms[(a, c)] * ls[(b, d)];
                    }
                }
            }
        }
    }
    out
}

/// `T_rs = 1/4 (lambda_r)_{ca} (lambda_s)_{db} T^{ab}_{cd}`; the result must be
/// real to `1e-10` relative.
pub fn from_tensor_components(t: &Tensor4) -> Result<Mat8> {
    let scale = t.iter().flatten().flatten().flatten().map(|z| z.norm()).fold(1.0, f64::max);
    let mut out = Mat8::zeros();
    let mut residue: f64 = 0.0;
    for r in 0..8 {
        let lr = lambda(r);
        for s in 0..8 {
            let ls = lambda(s);
            let mut acc = ZERO;
            for a in 0..3 {
                for b in 0..3 {
                    for c in 0..3 {
                        let x = lr[(c, a)];
                        if x == ZERO {
                            continue;
                        }
                        for d in 0..3 {
                            acc += x * ls[(d, b)] * t[a][b][c][d];
                        }
                    }
                }
            }
            acc *= 0.25;
            residue = residue.max(acc.im.abs());
            out[(r, s)] = acc.re;
        }
    }
    if residue > RESIDUE_TOL * scale {
        return Err(Error::ImaginaryResidue { residue });
    }
    Ok(out)
}

/// Decouplet `W`, antidecouplet `W̄` and octet `X` parts of an antisymmetric
/// tensor.
#[derive(Clone, Debug, PartialEq)]
pub struct IrreducibleParts {
    pub w: Sym3,
    pub w_bar: Sym3,
    pub x: OctetVector,
}

impl IrreducibleParts {
    pub fn zero() -> Self {
        Self { w: zero3(), w_bar: zero3(), x: OctetVector::zeros() }
    }

    /// `max |W̄_{abc} - conj(W^{abc})|`.
    pub fn reality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    worst = worst.max((self.w_bar[a][b][c] - self.w[a][b][c].conj()).norm());
                }
            }
        }
        worst
    }
}

/// Projection onto the irreducible parts; the octet comes from the trace
/// `X^a_b = i T^{ac}_{cb}`.
pub fn project_irreducible(t: &AntisymTensor) -> IrreducibleParts {
    let four = &t.four;
    let mut w = zero3();
    let mut w_bar = zero3();
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                let mut up = ZERO;
                let mut down = ZERO;
                for d in 0..3 {
                    for e in 0..3 {
                        up += epsilon(a, d, e) * four[b][c][d][e]
                            + epsilon(b, d, e) * four[c][a][d][e]
                            + epsilon(c, d, e) * four[a][b][d][e];
                        down += epsilon(a, d, e) * four[d][e][b][c]
                            + epsilon(b, d, e) * four[d][e][c][a]
                            + epsilon(c, d, e) * four[d][e][a][b];
                    }
                }
                w[a][b][c] = up;
                w_bar[a][b][c] = down;
            }
        }
    }
    let xm = CMat3::from_fn(|a, b| I * (0..3).map(|c| four[a][c][c][b]).sum::<Complex64>());
    let x = OctetVector::from_hamiltonian(&(xm * Complex64::new(0.5, 0.0)));
    IrreducibleParts { w, w_bar, x }
}

/// `X_r = -f_rst T_st`.
pub fn octet_part_shortcut(t: &Mat8) -> OctetVector {
    let f = structure_constants();
    let mut x = [0.0; 8];
    for (r, xr) in x.iter_mut().enumerate() {
        for s in 0..8 {
            for u in 0..8 {
                *xr -= f.f[r][s][u] * t[(s, u)];
            }
        }
    }
    OctetVector::new(x)
}

/// `1/6 eps_{cde} W^{abe} + 1/6 eps^{abe} W̄_{cde}`.
fn decouplet_four(w: &Sym3, w_bar: &Sym3) -> Tensor4 {
    let mut out = zero4();
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                for d in 0..3 {
                    let mut acc = ZERO;
                    for e in 0..3 {
                        acc += epsilon(c, d, e) * w[a][b][e] + epsilon(a, b, e) * w_bar[c][d][e];
                    }
                    out[a][b][c][d] = acc / 6.0;
                }
            }
        }
    }
    out
}

/// `i/3 (delta_ad X^b_c - delta_bc X^a_d)`.
fn octet_four(x: &OctetVector) -> Tensor4 {
    let xm = octet_cmat(x);
    let mut out = zero4();
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                for d in 0..3 {
                    let mut acc = ZERO;
                    if a == d {
                        acc += xm[(b, c)];
                    }
                    if b == c {
                        acc -= xm[(a, d)];
                    }
                    out[a][b][c][d] = acc * I / 3.0;
                }
            }
        }
    }
    out
}

fn add4(x: &Tensor4, y: &Tensor4) -> Tensor4 {
    let mut out = *x;
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                for d in 0..3 {
                    out[a][b][c][d] += y[a][b][c][d];
                }
            }
        }
    }
    out
}

/// Inverse of [`project_irreducible`].
pub fn reconstitute(parts: &IrreducibleParts) -> Result<AntisymTensor> {
    for w in [&parts.w, &parts.w_bar] {
        let deviation = symmetry_defect(w);
        if deviation > ANTISYM_TOL * max_norm3(w).max(1.0) {
            return Err(Error::NotSymmetric { deviation });
        }
    }
    let four = add4(&decouplet_four(&parts.w, &parts.w_bar), &octet_four(&parts.x));
    let rs = from_tensor_components(&four)?;
    Ok(AntisymTensor { rs, four })
}

fn check_rest_frame(xi0: &OctetVector) -> Result<SpectralData> {
    let off = (0..8)
        .filter(|r| *r != 2 && *r != 7)
        .map(|r| xi0[r].abs())
        .fold(0.0, f64::max);
    let spec = eigenvalues(xi0);
    if !spec.class.is_generic() {
        return Err(Error::DegenerateInput { class: spec.class });
    }
    let tol = 1e-12 * xi0.norm();
    if off > tol || spec.rest_frame().max_abs_diff(xi0) > 1e-10 * xi0.norm() {
        return Err(Error::InvalidInput(
            "expected a diagonal, eigenvalue-ordered octet vector".into(),
        ));
    }
    Ok(spec)
}

/// `[xi_3 (xi_3^2 - 3 xi_8^2)]^-1` of a rest-frame vector.
pub fn octet_prefactor(xi0: &OctetVector) -> Result<f64> {
    let spec = check_rest_frame(xi0)?;
    Ok(prefactor_raw(xi0, &spec))
}

fn prefactor_raw(xi0: &OctetVector, _spec: &SpectralData) -> f64 {
    let (x3, x8) = (xi0[2], xi0[7]);
    1.0 / (x3 * (x3 * x3 - 3.0 * x8 * x8))
}

/// Coefficients `(lambda, mu)` with
/// `X^(a)(xi0) = prefactor (lambda xi0 + mu (xi0 * xi0))`.
pub fn octet_coefficients(level: Level, xi0: &OctetVector) -> Result<(f64, f64)> {
    let spec = check_rest_frame(xi0)?;
    Ok(coefficients_raw(level, xi0, &spec))
}

fn coefficients_raw(level: Level, xi0: &OctetVector, spec: &SpectralData) -> (f64, f64) {
    let eta = xi0.star(xi0);
    let (x3, x8, e3, e8) = (xi0[2], xi0[7], eta[2], eta[7]);
    let q12 = 1.0 / (spec.e12 * spec.e12);
    let q13 = 1.0 / (spec.e13 * spec.e13);
    let q23 = 1.0 / (spec.e23 * spec.e23);
    match level {
        Level::One => (
            0.5 * (SQRT3 * e3 - e8) * q13 - e8 * q12,
            x8 * q12 + 0.5 * (x8 - SQRT3 * x3) * q13,
        ),
        Level::Two => (
            0.5 * (SQRT3 * e3 + e8) * q23 + e8 * q12,
            -x8 * q12 - 0.5 * (x8 + SQRT3 * x3) * q23,
        ),
        Level::Three => (
            0.5 * (e8 - SQRT3 * e3) * q13 - 0.5 * (e8 + SQRT3 * e3) * q23,
            0.5 * (SQRT3 * x3 - x8) * q13 + 0.5 * (SQRT3 * x3 + x8) * q23,
        ),
    }
}

/// Octet part `X^(a)(xi) = prefactor (lambda xi + mu xi*xi)` in a general
/// frame, with the scalar coefficients taken from the rest frame.
pub fn octet_part(xi: &OctetVector, level: Level) -> Result<OctetVector> {
    let spec = eigenvalues(xi);
    if !spec.class.is_generic() {
        return Err(Error::DegenerateInput { class: spec.class });
    }
    Ok(octet_part_raw(xi, &spec, level))
}

fn octet_part_raw(xi: &OctetVector, spec: &SpectralData, level: Level) -> OctetVector {
    let xi0 = spec.rest_frame();
    let pref = prefactor_raw(&xi0, spec);
    let (l, m) = coefficients_raw(level, &xi0, spec);
    (*xi * l + xi.star(xi) * m) * pref
}

/// Transported rest-frame decouplet `Δ^{abc}` and antidecouplet `Δ̄_{abc}`.
#[derive(Clone, Debug, PartialEq)]
pub struct DecoupletField {
    pub up: Sym3,
    pub down: Sym3,
}

/// `Δ^{abc} = A^a_d A^b_e A^c_f δ^{def}` with `A = A(xi)`.
pub fn delta_tensors(xi: &OctetVector) -> Result<DecoupletField> {
    let (_, a) = eigenframe(xi)?;
    Ok(delta_tensors_from_frame(&a))
}

/// As [`delta_tensors`] for an explicit frame.
pub fn delta_tensors_from_frame(a: &CMat3) -> DecoupletField {
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut up = zero3();
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                up[i][j][k] = PERMS
                    .iter()
                    .map(|p| a[(i, p[0])] * a[(j, p[1])] * a[(k, p[2])])
                    .sum();
            }
        }
    }
    let mut down = up;
    down.iter_mut().flatten().flatten().for_each(|z| *z = z.conj());
    DecoupletField { up, down }
}

/// Decouplet strength `v^(a)`: the rest-frame `W^{123} = i v^(a)`.
pub fn decouplet_strength(spec: &SpectralData, level: Level) -> f64 {
    let q12 = 1.0 / (spec.e12 * spec.e12);
    let q13 = 1.0 / (spec.e13 * spec.e13);
    let q23 = 1.0 / (spec.e23 * spec.e23);
    match level {
        Level::One => q13 - q12,
        Level::Two => q12 - q23,
        Level::Three => q23 - q13,
    }
}

/// Octet and decouplet contributions to `V^(a)(xi)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvatureParts {
    pub octet: CurvatureTwoForm,
    pub decouplet: CurvatureTwoForm,
}

impl CurvatureParts {
    pub fn total(&self) -> CurvatureTwoForm {
        CurvatureTwoForm {
            level: self.octet.level,
            v: self.octet.v + self.decouplet.v,
        }
    }
}

pub fn curvature_parts(xi: &OctetVector, level: Level) -> Result<CurvatureParts> {
    let (spec, a) = eigenframe(xi)?;
    let x = octet_part_raw(xi, &spec, level);
    let octet = from_tensor_components(&octet_four(&x))?;

    let delta = delta_tensors_from_frame(&a);
    let v = decouplet_strength(&spec, level);
    let mut w = delta.up;
    let mut w_bar = delta.down;
    w.iter_mut().flatten().flatten().for_each(|z| *z *= I * v);
    w_bar.iter_mut().flatten().flatten().for_each(|z| *z *= -I * v);
    let decouplet = from_tensor_components(&decouplet_four(&w, &w_bar))?;

    Ok(CurvatureParts {
        octet: CurvatureTwoForm::new(level, octet),
        decouplet: CurvatureTwoForm::new(level, decouplet),
    })
}

/// `V^(a)(xi)` reassembled from its octet and decouplet parts.
pub fn curvature_from_parts(xi: &OctetVector, level: Level) -> Result<CurvatureTwoForm> {
    curvature_parts(xi, level).map(|p| p.total())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::{curvature_rest_frame, curvature_spectral};

    fn basis(r: usize, s: usize) -> Mat8 {
        let mut t = Mat8::zeros();
        t[(r, s)] = 1.0;
        t[(s, r)] = -1.0;
        t
    }

    #[test]
    fn octet_matrix_basics() {
        let l3 = octet_matrix(&OctetVector::unit(3));
        assert!(l3.max_abs_diff(&crate::su3::gellmann(3).unwrap()) < 1e-15);
        assert!(octet_matrix(&OctetVector::zeros()).entries().iter().all(|z| *z == ZERO));
        assert!(matches!(
            octet_from_matrix(&HermitianMatrix::identity(3)),
            Err(Error::NotTraceless { .. })
        ));
        let x = OctetVector::new([0.3, -1.0, 0.2, 0.7, 0.0, 1.5, -0.4, 0.9]);
        assert!(octet_from_matrix(&octet_matrix(&x)).unwrap().max_abs_diff(&x) < 1e-14);
    }

    #[test]
    fn rejects_symmetric_input() {
        let mut t = Mat8::zeros();
        t[(0, 1)] = 1.0;
        assert!(matches!(to_tensor_components(&t), Err(Error::NotAntisymmetric { .. })));
    }

    #[test]
    fn block_12_against_contraction() {
        let t = to_tensor_components(&basis(0, 1)).unwrap();
        let (l1, l2) = (lambda(0), lambda(1));
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    for d in 0..3 {
                        let want = l1[(a, c)] * l2[(b, d)] - l2[(a, c)] * l1[(b, d)];
                        assert!((t.get(a, b, c, d) - want).norm() < 1e-15);
                    }
                }
            }
        }
    }

    #[test]
    fn basis_round_trips() {
        for r in 0..8 {
            for s in (r + 1)..8 {
                let t = basis(r, s);
                let four = to_tensor_components(&t).unwrap();
                assert!((from_tensor_components(four.four_index()).unwrap() - t).amax() < 1e-14);
                let parts = project_irreducible(&four);
                assert!(parts.x.max_abs_diff(&octet_part_shortcut(&t)) < 1e-14);
                assert!(symmetry_defect(&parts.w) < 1e-14);
                assert!(parts.reality_defect() < 1e-14);
                let back = reconstitute(&parts).unwrap();
                assert!((back.components() - t).amax() < 1e-13, "slot {r}{s}");
            }
        }
    }

    #[test]
    fn rest_frame_level_three_octet() {
        let spec = eigenvalues(&OctetVector::diagonal(0.4, 1.1));
        let v3 = curvature_rest_frame(&spec, Level::Three).unwrap();
        let parts = project_irreducible(&to_tensor_components(&v3.v).unwrap());
        let want = 0.5 / spec.e13.powi(2) - 0.5 / spec.e23.powi(2);
        assert!((parts.x[2] - want).abs() < 1e-12);
    }

    #[test]
    fn reconstitute_rejects_asymmetric_w() {
        let mut parts = IrreducibleParts::zero();
        parts.w[0][1][2] = Complex64::new(1.0, 0.0);
        assert!(matches!(reconstitute(&parts), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn delta_in_rest_frame() {
        let d = delta_tensors(&OctetVector::diagonal(0.5, 1.0)).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    let want = if epsilon(a, b, c) != 0.0 { 1.0 } else { 0.0 };
                    assert!((d.up[a][b][c] - want).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn parts_match_spectral_off_axis() {
        let xi = OctetVector::new([0.3, -0.2, 0.5, 0.1, 0.7, -0.4, 0.2, 0.6]);
        for level in Level::ALL {
            let a = curvature_from_parts(&xi, level).unwrap();
            let b = curvature_spectral(&xi, level).unwrap();
            assert!(a.max_abs_diff(&b) < 1e-9 * b.max_abs(), "level {level}");
        }
    }

    #[test]
    fn rest_frame_input_is_checked() {
        assert!(octet_coefficients(Level::One, &OctetVector::unit(1)).is_err());
        assert!(octet_prefactor(&OctetVector::unit(8)).is_err());
        let (l, m) = octet_coefficients(Level::Two, &OctetVector::diagonal(0.2, 0.9)).unwrap();
        assert!(l.is_finite() && m.is_finite());
    }
}
