//! The su(3) layer: Gell-Mann matrices, the `f` and `d` symbols, the
//! `(xi_0, xi)` chart on 3×3 Hermitian matrices, the octet products and the
//! adjoint representation.
//!
//! Octet indices are zero-based in code: component `r` of an
//! [`OctetVector`] multiplies `lambda_{r+1}`.

use std::ops::{Add, Index, Mul, Neg, Sub};
use std::sync::LazyLock;

use nalgebra::{DMatrix, Matrix3, SMatrix, SVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::un_kinematics::HermitianMatrix;

pub type CMat3 = Matrix3<Complex64>;
pub type Mat8 = SMatrix<f64, 8, 8>;

pub const SQRT3: f64 = 1.732_050_807_568_877_2;

const fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

static GELL_MANN: LazyLock<[CMat3; 8]> = LazyLock::new(|| {
    let o = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    let s = 1.0 / SQRT3;
    [
        CMat3::new(o, one, o, one, o, o, o, o, o),
        CMat3::new(o, -i, o, i, o, o, o, o, o),
        CMat3::new(one, o, o, o, -one, o, o, o, o),
        CMat3::new(o, o, one, o, o, o, one, o, o),
        CMat3::new(o, o, -i, o, o, o, i, o, o),
        CMat3::new(o, o, o, o, o, one, o, one, o),
        CMat3::new(o, o, o, o, o, -i, o, i, o),
        CMat3::new(c(s, 0.0), o, o, o, c(s, 0.0), o, o, o, c(-2.0 * s, 0.0)),
    ]
});

/// `lambda_{r+1}` for a zero-based octet index.
pub(crate) fn lambda(r: usize) -> &'static CMat3 {
    &GELL_MANN[r]
}

/// The Gell-Mann matrix `lambda_r`, `r` in `1..=8`.
pub fn gellmann(r: usize) -> Result<HermitianMatrix> {
    if !(1..=8).contains(&r) {
        return Err(Error::IndexOutOfRange { index: r, min: 1, max: 8 });
    }
    Ok(cmat3_to_hermitian(lambda(r - 1)))
}

/// Totally antisymmetric `f_rst` and totally symmetric `d_rst`, zero-based.
#[derive(Clone, Debug)]
pub struct StructureConstants {
    pub f: [[[f64; 8]; 8]; 8],
    pub d: [[[f64; 8]; 8]; 8],
}

static STRUCTURE: LazyLock<StructureConstants> = LazyLock::new(|| {
    let mut f = [[[0.0; 8]; 8]; 8];
    let mut d = [[[0.0; 8]; 8]; 8];
    for r in 0..8 {
        for s in 0..8 {
            let rs = lambda(r) * lambda(s);
            let sr = lambda(s) * lambda(r);
            let comm = rs - sr;
            let anti = rs + sr;
            for t in 0..8 {
                // f = Tr([l_r, l_s] l_t) / 4i, d = Tr({l_r, l_s} l_t) / 4
                f[r][s][t] = ((comm * lambda(t)).trace() / c(0.0, 4.0)).re;
                d[r][s][t] = (anti * lambda(t)).trace().re / 4.0;
            }
        }
    }
    // Exact zeros where roundoff left dust.
    for table in [&mut f, &mut d] {
        for x in table.iter_mut().flatten().flatten() {
            if x.abs() < 1e-15 {
                *x = 0.0;
            }
        }
    }
    StructureConstants { f, d }
});

/// The `f` and `d` tables, computed once from the Gell-Mann matrices.
pub fn structure_constants() -> &'static StructureConstants {
    &STRUCTURE
}

impl StructureConstants {
    /// `f_rst` with one-based indices.
    pub fn f1(&self, r: usize, s: usize, t: usize) -> f64 {
        self.f[r - 1][s - 1][t - 1]
    }

    /// `d_rst` with one-based indices.
    pub fn d1(&self, r: usize, s: usize, t: usize) -> f64 {
        self.d[r - 1][s - 1][t - 1]
    }
}

/// A real 8-vector of Gell-Mann coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 8]", into = "[f64; 8]")]
pub struct OctetVector(pub SVector<f64, 8>);

impl From<[f64; 8]> for OctetVector {
    fn from(a: [f64; 8]) -> Self {
        Self(SVector::from(a))
    }
}

impl From<OctetVector> for [f64; 8] {
    fn from(v: OctetVector) -> Self {
        v.0.into()
    }
}

impl OctetVector {
    pub fn new(a: [f64; 8]) -> Self {
        a.into()
    }

    pub fn zeros() -> Self {
        Self(SVector::zeros())
    }

    /// The unit vector `e_r`, one-based.
    pub fn unit(r: usize) -> Self {
        let mut v = Self::zeros();
        v.0[r - 1] = 1.0;
        v
    }

    /// `(0, 0, x3, 0, 0, 0, 0, x8)`.
    pub fn diagonal(x3: f64, x8: f64) -> Self {
        let mut v = Self::zeros();
        v.0[2] = x3;
        v.0[7] = x8;
        v
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self(SVector::from_fn(|_, _| rng.sample(StandardNormal)))
    }

    pub fn to_array(self) -> [f64; 8] {
        self.into()
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.0.dot(&other.0)
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn normalized(&self) -> Self {
        Self(self.0 / self.norm())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.0 - other.0).amax()
    }

    /// `(a ∧ b)_r = -1/2 f_rst a_s b_t`.
    pub fn wedge(&self, other: &Self) -> Self {
        let f = &structure_constants().f;
        let mut out = Self::zeros();
        for r in 0..8 {
            let mut acc = 0.0;
            for s in 0..8 {
                for t in 0..8 {
                    acc += f[r][s][t] * self.0[s] * other.0[t];
                }
            }
            out.0[r] = -0.5 * acc;
        }
        out
    }

    /// `(a * b)_r = sqrt(3) d_rst a_s b_t`.
    pub fn star(&self, other: &Self) -> Self {
        let d = &structure_constants().d;
        let mut out = Self::zeros();
        for r in 0..8 {
            let mut acc = 0.0;
            for s in 0..8 {
                for t in 0..8 {
                    acc += d[r][s][t] * self.0[s] * other.0[t];
                }
            }
            out.0[r] = SQRT3 * acc;
        }
        out
    }

    /// The quadratic `xi·xi` and cubic `(xi*xi)·xi` invariants.
    pub fn invariants(&self) -> (f64, f64) {
        (self.dot(self), self.star(self).dot(self))
    }

    /// `H(0, xi) = 1/2 xi·lambda`.
    pub fn hamiltonian(&self) -> CMat3 {
        let mut h = CMat3::zeros();
        for r in 0..8 {
            h += lambda(r) * c(0.5 * self.0[r], 0.0);
        }
        h
    }

    /// Inverse of [`OctetVector::hamiltonian`] for a traceless matrix; the
    /// trace part is dropped.
    pub fn from_hamiltonian(h: &CMat3) -> Self {
        Self(SVector::from_fn(|r, _| (h * lambda(r)).trace().re))
    }

    pub fn transformed(&self, d: &AdjointImage) -> Self {
        Self(d.0 * self.0)
    }
}

/// `(xi·xi, (xi*xi)·xi)`; the cubic lies in `[-|xi|^3, |xi|^3]`.
pub fn invariants(xi: &OctetVector) -> (f64, f64) {
    xi.invariants()
}

pub fn octet_wedge(a: &OctetVector, b: &OctetVector) -> OctetVector {
    a.wedge(b)
}

pub fn octet_star(a: &OctetVector, b: &OctetVector) -> OctetVector {
    a.star(b)
}

impl Index<usize> for OctetVector {
    type Output = f64;
    fn index(&self, r: usize) -> &f64 {
        &self.0[r]
    }
}

impl Add for OctetVector {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self(self.0 + rhs.0)
    }
}

impl Sub for OctetVector {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self(self.0 - rhs.0)
    }
}

impl Mul<f64> for OctetVector {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self(self.0 * rhs)
    }
}

impl Neg for OctetVector {
    type Output = Self;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

/// `H = xi_0 I + 1/2 xi·lambda`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoordinateForm {
    pub xi0: f64,
    pub xi: OctetVector,
}

pub fn to_coordinates(h: &HermitianMatrix) -> Result<CoordinateForm> {
    if h.dim() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: h.dim() });
    }
    let m = hermitian_to_cmat3(h);
    Ok(CoordinateForm {
        xi0: m.trace().re / 3.0,
        xi: OctetVector::from_hamiltonian(&m),
    })
}

pub fn from_coordinates(cf: &CoordinateForm) -> HermitianMatrix {
    let m = cf.xi.hamiltonian() + CMat3::identity() * c(cf.xi0, 0.0);
    cmat3_to_hermitian(&m)
}

pub(crate) fn cmat3_to_hermitian(m: &CMat3) -> HermitianMatrix {
    HermitianMatrix::from_raw(DMatrix::from_fn(3, 3, |i, j| m[(i, j)]))
}

pub(crate) fn hermitian_to_cmat3(h: &HermitianMatrix) -> CMat3 {
    let e = h.entries();
    CMat3::from_fn(|i, j| e[(i, j)])
}

const GROUP_TOL: f64 = 1e-8;

/// A 3×3 special-unitary matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroupElement(CMat3);

impl GroupElement {
    pub fn new(a: CMat3) -> Result<Self> {
        let unitarity = (a.adjoint() * a - CMat3::identity())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        let det = (a.determinant() - c(1.0, 0.0)).norm();
        if unitarity > GROUP_TOL || det > GROUP_TOL {
            return Err(Error::NotSpecialUnitary { unitarity, det });
        }
        Ok(Self(a))
    }

    pub(crate) fn from_raw(a: CMat3) -> Self {
        Self(a)
    }

    pub fn identity() -> Self {
        Self(CMat3::identity())
    }

    /// `exp(i H(0, xi))`, special unitary for every `xi`.
    pub fn exp_i(xi: &OctetVector) -> Self {
        Self((xi.hamiltonian() * c(0.0, 1.0)).exp())
    }

    /// `exp(i theta lambda_r)`, `r` one-based.
    pub fn exp_i_lambda(r: usize, theta: f64) -> Self {
        Self((lambda(r - 1) * c(0.0, theta)).exp())
    }

    /// A random element `exp(i H(0, xi))` with Gaussian `xi` of the given scale.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> Self {
        Self::exp_i(&(OctetVector::random(rng) * scale))
    }

    pub fn matrix(&self) -> &CMat3 {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self(self.0 * other.0)
    }

    /// `A H A†` in octet coordinates.
    pub fn act(&self, xi: &OctetVector) -> OctetVector {
        OctetVector::from_hamiltonian(&(self.0 * xi.hamiltonian() * self.0.adjoint()))
    }
}

/// The real orthogonal 8×8 image `D(A)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdjointImage(pub Mat8);

impl AdjointImage {
    pub fn matrix(&self) -> &Mat8 {
        &self.0
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    /// `D M Dᵀ` for a second-rank octet tensor.
    pub fn congruence(&self, m: &Mat8) -> Mat8 {
        self.0 * m * self.0.transpose()
    }
}

/// `D_rs(A) = 1/2 Tr(lambda_r A lambda_s A†)`.
pub fn adjoint_matrix(a: &GroupElement) -> AdjointImage {
    let m = a.matrix();
    let madj = m.adjoint();
    let conj: Vec<CMat3> = (0..8).map(|s| m * lambda(s) * madj).collect();
    AdjointImage(Mat8::from_fn(|r, s| 0.5 * (lambda(r) * conj[s]).trace().re))
}
