//! Independent oracles shared by the integration tests. Nothing here calls
//! the spectral, curvature or tensor code under test.
#![allow(dead_code)]

use nalgebra::{Matrix3, SMatrix, SymmetricEigen, Vector3};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use su3holo::su3::OctetVector;

pub type CMat3 = Matrix3<Complex64>;
pub type Mat8 = SMatrix<f64, 8, 8>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Gell-Mann matrices written out entry by entry.
pub fn gell_mann() -> [CMat3; 8] {
    let o = c(0.0, 0.0);
    let l = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    let s = c(1.0 / 3f64.sqrt(), 0.0);
    [
        CMat3::new(o, l, o, l, o, o, o, o, o),
        CMat3::new(o, -i, o, i, o, o, o, o, o),
        CMat3::new(l, o, o, o, -l, o, o, o, o),
        CMat3::new(o, o, l, o, o, o, l, o, o),
        CMat3::new(o, o, -i, o, o, o, i, o, o),
        CMat3::new(o, o, o, o, o, l, o, l, o),
        CMat3::new(o, o, o, o, o, -i, o, i, o),
        CMat3::new(s, o, o, o, s, o, o, o, -s * 2.0),
    ]
}

pub fn hamiltonian(xi: &OctetVector) -> CMat3 {
    let g = gell_mann();
    (0..8).fold(CMat3::zeros(), |acc, r| acc + g[r] * c(0.5 * xi[r], 0.0))
}

pub fn coordinates(h: &CMat3) -> OctetVector {
    let g = gell_mann();
    let mut x = [0.0; 8];
    for (r, xr) in x.iter_mut().enumerate() {
        *xr = (h * g[r]).trace().re;
    }
    OctetVector::new(x)
}

/// Dense Hermitian eigensolver, eigenvalues in descending order.
pub fn dense_eigen(xi: &OctetVector) -> ([f64; 3], [Vector3<Complex64>; 3]) {
    let eig = SymmetricEigen::new(hamiltonian(xi));
    let mut idx = [0usize, 1, 2];
    idx.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    (
        idx.map(|k| eig.eigenvalues[k]),
        idx.map(|k| eig.eigenvectors.column(k).into()),
    )
}

/// `1/4 Im sum_b [<a|l_r|b><b|l_s|a> - (r <-> s)] / (E_a - E_b)^2`
/// from dense eigenvectors.
pub fn curvature_oracle(xi: &OctetVector, level: usize) -> Mat8 {
    let (e, v) = dense_eigen(xi);
    let g = gell_mann();
    let mut out = Mat8::zeros();
    for b in (0..3).filter(|&b| b != level) {
        let gap2 = (e[level] - e[b]).powi(2);
        let m: Vec<Complex64> = g.iter().map(|l| v[level].dotc(&(l * v[b]))).collect();
        let n: Vec<Complex64> = g.iter().map(|l| v[b].dotc(&(l * v[level]))).collect();
        for r in 0..8 {
            for s in 0..8 {
                out[(r, s)] += 0.25 * (m[r] * n[s] - m[s] * n[r]).im / gap2;
            }
        }
    }
    out
}

/// Haar-like special-unitary matrix from the QR factorisation of a complex
/// Gaussian matrix.
pub fn random_su3<R: Rng>(rng: &mut R) -> CMat3 {
    let z = CMat3::from_fn(|_, _| c(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    let q = z.qr().q();
    let det = q.determinant();
    let phase = c(1.0, 0.0) / det.powf(1.0 / 3.0);
    q * phase
}

/// `D(A)` by conjugating each basis matrix and reading coordinates back.
pub fn adjoint_oracle(a: &CMat3) -> Mat8 {
    let g = gell_mann();
    let mut d = Mat8::zeros();
    for s in 0..8 {
        let col = coordinates(&(a * g[s] * a.adjoint() * c(0.5, 0.0)));
        for r in 0..8 {
            d[(r, s)] = col[r];
        }
    }
    d
}

pub fn random_octet<R: Rng>(rng: &mut R) -> OctetVector {
    OctetVector::new(std::array::from_fn(|_| rng.sample(StandardNormal)))
}

/// Diagonal point with prescribed gaps.
pub fn rest_point(e12: f64, e23: f64) -> OctetVector {
    OctetVector::diagonal(e12, (e12 + 2.0 * e23) / 3f64.sqrt())
}

/// Closed-form rest-frame curvature table for all three levels.
pub fn rest_table(e12: f64, e23: f64) -> [Mat8; 3] {
    let e13 = e12 + e23;
    let (a, b, cc) = (0.5 / (e12 * e12), 0.5 / (e13 * e13), 0.5 / (e23 * e23));
    let rows = [(a, b, 0.0), (-a, 0.0, cc), (0.0, -b, -cc)];
    rows.map(|(v12, v45, v67)| {
        let mut m = Mat8::zeros();
        for ((r, s), x) in [((0, 1), v12), ((3, 4), v45), ((5, 6), v67)] {
            m[(r, s)] = x;
            m[(s, r)] = -x;
        }
        m
    })
}

pub fn wrap(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * std::f64::consts::PI);
    if y > std::f64::consts::PI {
        y - 2.0 * std::f64::consts::PI
    } else {
        y
    }
}
