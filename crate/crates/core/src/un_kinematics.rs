//! Generic n-level machinery: the Hermitian basis, the Jordan and Lie
//! products, the trace scalar product, characteristic polynomials and the
//! classification of unitary conjugation orbits.

use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

const HERMITIAN_TOL: f64 = 1e-12;

/// An n×n Hermitian matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix {
    entries: DMatrix<Complex64>,
}

impl HermitianMatrix {
    /// Validates Hermiticity (relative to the largest entry) and stores the
    /// exact Hermitian part.
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::DimensionMismatch {
                expected: entries.nrows(),
                found: entries.ncols(),
            });
        }
        if entries.nrows() == 0 {
            return Err(Error::InvalidInput("empty matrix".into()));
        }
        let adj = entries.adjoint();
        let scale = entries.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let deviation = (&entries - &adj).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if deviation > HERMITIAN_TOL * scale {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self {
            entries: (entries + adj) * Complex64::new(0.5, 0.0),
        })
    }

    pub(crate) fn from_raw(entries: DMatrix<Complex64>) -> Self {
        Self { entries }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_raw(DMatrix::identity(n, n))
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_raw(DMatrix::zeros(n, n))
    }

    /// `diag(values)`.
    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = DMatrix::zeros(n, n);
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(*v, 0.0);
        }
        Self::from_raw(m)
    }

    /// The rank-one projector `|psi><psi|` for a (not necessarily normalized) vector.
    pub fn projector(psi: &[Complex64]) -> Self {
        let n = psi.len();
        let norm2: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        let m = DMatrix::from_fn(n, n, |i, j| psi[i] * psi[j].conj() / norm2);
        Self::from_raw(m)
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<Complex64> {
        self.entries
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::from_raw(&self.entries * Complex64::new(c, 0.0))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dims(self, other)?;
        Ok(Self::from_raw(&self.entries + &other.entries))
    }

    pub fn shifted(&self, c: f64) -> Self {
        let n = self.dim();
        Self::from_raw(&self.entries + DMatrix::<Complex64>::identity(n, n) * Complex64::new(c, 0.0))
    }

    /// `U† H U`.
    pub fn conjugate_by(&self, u: &DMatrix<Complex64>) -> Result<Self> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: u.nrows(),
            });
        }
        let m = u.adjoint() * &self.entries * u;
        Ok(Self::from_raw(
            (&m + m.adjoint()) * Complex64::new(0.5, 0.0),
        ))
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace().re
    }

    /// Eigenvalues in non-increasing order from a dense Hermitian eigensolver.
    pub fn eigenvalues_desc(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.entries.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        ev
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (&self.entries - &other.entries)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

fn check_dims(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(())
}

/// The n² matrices `E_aa`, then `E_ab` (a<b, lexicographic), then `E'_ab`.
pub fn hermitian_basis(n: usize) -> Result<Vec<HermitianMatrix>> {
    if n == 0 {
        return Err(Error::InvalidInput("basis dimension must be positive".into()));
    }
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let mut out = Vec::with_capacity(n * n);
    for a in 0..n {
        let mut m = DMatrix::zeros(n, n);
        m[(a, a)] = one;
        out.push(HermitianMatrix::from_raw(m));
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    for &(a, b) in &pairs {
        let mut m = DMatrix::zeros(n, n);
        m[(a, b)] = one;
        m[(b, a)] = one;
        out.push(HermitianMatrix::from_raw(m));
    }
    for &(a, b) in &pairs {
        let mut m = DMatrix::zeros(n, n);
        m[(a, b)] = i;
        m[(b, a)] = -i;
        out.push(HermitianMatrix::from_raw(m));
    }
    Ok(out)
}

/// `(H1 H2 + H2 H1) / 2`.
pub fn jordan_product(h1: &HermitianMatrix, h2: &HermitianMatrix) -> Result<HermitianMatrix> {
    check_dims(h1, h2)?;
    let p = &h1.entries * &h2.entries;
    let q = &h2.entries * &h1.entries;
    Ok(HermitianMatrix::from_raw((p + q) * Complex64::new(0.5, 0.0)))
}

/// `i (H1 H2 - H2 H1)`.
pub fn lie_wedge(h1: &HermitianMatrix, h2: &HermitianMatrix) -> Result<HermitianMatrix> {
    check_dims(h1, h2)?;
    let p = &h1.entries * &h2.entries;
    let q = &h2.entries * &h1.entries;
    Ok(HermitianMatrix::from_raw((p - q) * Complex64::new(0.0, 1.0)))
}

/// `Tr(H1 H2)`.
pub fn trace_inner(h1: &HermitianMatrix, h2: &HermitianMatrix) -> Result<f64> {
    check_dims(h1, h2)?;
    // Tr(AB) = sum_jk A_jk B_kj
    let n = h1.dim();
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..n {
        for k in 0..n {
            acc += h1.entries[(j, k)] * h2.entries[(k, j)];
        }
    }
    Ok(acc.re)
}

/// Coefficients `c_1..c_n` of `P(x) = x^n + c_1 x^(n-1) + ... + c_n` from
/// the power-trace (Newton) recursion.
pub fn char_poly_coeffs(h: &HermitianMatrix) -> Vec<f64> {
    let n = h.dim();
    let mut traces = Vec::with_capacity(n);
    let mut power = h.entries.clone();
    for k in 0..n {
        if k > 0 {
            power = &power * &h.entries;
        }
        traces.push(power.trace().re);
    }
    let mut c: Vec<f64> = Vec::with_capacity(n);
    for k in 1..=n {
        // k c_k = -(p_k + c_1 p_{k-1} + ... + c_{k-1} p_1)
        let mut s = traces[k - 1];
        for j in 1..k {
            s += c[j - 1] * traces[k - j - 1];
        }
        c.push(-s / k as f64);
    }
    c
}

/// Multiplicity structure of a unitary conjugation orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitDescriptor {
    /// Eigenvalue multiplicities, sorted in non-increasing order.
    pub signature: Vec<usize>,
    /// Orbit dimension `n^2 - sum m_i^2`.
    pub dimension: usize,
    /// Sizes of the unitary factors of the stabilizer, `[2, 1]` for U(2)×U(1).
    pub stabilizer: Vec<usize>,
}

impl OrbitDescriptor {
    pub fn from_signature(mut signature: Vec<usize>) -> Self {
        signature.sort_unstable_by(|a, b| b.cmp(a));
        let n: usize = signature.iter().sum();
        let dimension = n * n - signature.iter().map(|m| m * m).sum::<usize>();
        Self {
            stabilizer: signature.clone(),
            signature,
            dimension,
        }
    }
}

impl fmt::Display for OrbitDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let factors: Vec<String> = self.stabilizer.iter().map(|m| format!("U({m})")).collect();
        write!(f, "{} (dim {})", factors.join("×"), self.dimension)
    }
}

/// Clusters eigenvalues whose successive gap is at most
/// `tol * max(1, spectral radius)`.
pub fn orbit_type(h: &HermitianMatrix, tol: f64) -> Result<OrbitDescriptor> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput("orbit_type tolerance must be positive".into()));
    }
    let ev = h.eigenvalues_desc();
    let radius = ev.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let threshold = tol * radius.max(1.0);
    let mut signature = vec![1usize];
    for w in ev.windows(2) {
        if w[0] - w[1] <= threshold {
            *signature.last_mut().unwrap() += 1;
        } else {
            signature.push(1);
        }
    }
    Ok(OrbitDescriptor::from_signature(signature))
}

/// True iff the characteristic polynomials agree coefficientwise within
/// `tol * max(1, |c|)`.
pub fn same_orbit(h1: &HermitianMatrix, h2: &HermitianMatrix, tol: f64) -> Result<bool> {
    check_dims(h1, h2)?;
    if !(tol > 0.0) {
        return Err(Error::InvalidInput("same_orbit tolerance must be positive".into()));
    }
    let c1 = char_poly_coeffs(h1);
    let c2 = char_poly_coeffs(h2);
    Ok(c1
        .iter()
        .zip(&c2)
        .all(|(a, b)| (a - b).abs() <= tol * 1f64.max(a.abs()).max(b.abs())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn basis_sizes_and_order() {
        assert!(hermitian_basis(0).is_err());
        let b1 = hermitian_basis(1).unwrap();
        assert_eq!(b1.len(), 1);
        assert_eq!(b1[0], HermitianMatrix::identity(1));
        let b2 = hermitian_basis(2).unwrap();
        assert_eq!(b2.len(), 4);
        let ep = b2[3].entries();
        assert_eq!(ep[(0, 1)], c(0.0, 1.0));
        assert_eq!(ep[(1, 0)], c(0.0, -1.0));
        assert_eq!(hermitian_basis(4).unwrap().len(), 16);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(HermitianMatrix::new(m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn dimension_mismatch() {
        let a = HermitianMatrix::identity(2);
        let b = HermitianMatrix::identity(3);
        assert!(matches!(jordan_product(&a, &b), Err(Error::DimensionMismatch { .. })));
        assert!(lie_wedge(&a, &b).is_err());
        assert!(trace_inner(&a, &b).is_err());
        assert!(same_orbit(&a, &b, 1e-9).is_err());
    }

    #[test]
    fn char_poly_of_identity_and_zero() {
        let c_id = char_poly_coeffs(&HermitianMatrix::identity(3));
        for (got, want) in c_id.iter().zip([-3.0, 3.0, -1.0]) {
            assert!((got - want).abs() < 1e-14);
        }
        assert_eq!(char_poly_coeffs(&HermitianMatrix::zeros(3)), vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn orbit_types_for_three_levels() {
        let generic = HermitianMatrix::diagonal(&[1.0, 0.3, -2.0]);
        let o = orbit_type(&generic, 1e-9).unwrap();
        assert_eq!(o.signature, vec![1, 1, 1]);
        assert_eq!(o.dimension, 6);

        let psi = [c(0.6, 0.0), c(0.0, 0.8), c(0.0, 0.0)];
        let o = orbit_type(&HermitianMatrix::projector(&psi), 1e-9).unwrap();
        assert_eq!(o.signature, vec![2, 1]);
        assert_eq!(o.dimension, 4);
        assert_eq!(o.to_string(), "U(2)×U(1) (dim 4)");

        let o = orbit_type(&HermitianMatrix::identity(3).scale(2.5), 1e-9).unwrap();
        assert_eq!(o.signature, vec![3]);
        assert_eq!(o.dimension, 0);
        assert!(orbit_type(&generic, 0.0).is_err());
    }
}
