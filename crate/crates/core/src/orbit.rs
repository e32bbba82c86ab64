//! Symplectic form and invariant metric on adjoint orbits, evaluated on
//! pairs of Lie-algebra directions.

use nalgebra::SMatrix;

use crate::error::{Error, Result};
use crate::spectrum::{classify, DegeneracyClass, DEFAULT_TOL};
use crate::su3::{hermitian_to_cmat3, lambda, CMat3, OctetVector};
use crate::un_kinematics::HermitianMatrix;

const TRACELESS_TOL: f64 = 1e-12;

/// Two traceless Hermitian directions `(A, B)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentPair {
    a: CMat3,
    b: CMat3,
}

impl TangentPair {
    pub fn new(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<Self> {
        Self::from_matrices(check_direction(a)?, check_direction(b)?)
    }

    pub(crate) fn from_matrices(a: CMat3, b: CMat3) -> Result<Self> {
        for m in [&a, &b] {
            let t = m.trace().norm();
            if t > TRACELESS_TOL * m.camax().max(1.0) {
                return Err(Error::NotTraceless { trace: t });
            }
        }
        Ok(Self { a, b })
    }

    /// The pair `(lambda_u, lambda_v)`, one-based.
    pub fn gellmann(u: usize, v: usize) -> Self {
        Self {
            a: *lambda(u - 1),
            b: *lambda(v - 1),
        }
    }

    pub fn swapped(&self) -> Self {
        Self { a: self.b, b: self.a }
    }
}

fn check_direction(h: &HermitianMatrix) -> Result<CMat3> {
    if h.dim() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: h.dim() });
    }
    Ok(hermitian_to_cmat3(h))
}

fn check_point(h: &HermitianMatrix) -> Result<CMat3> {
    check_direction(h)
}

/// `Im Tr(H [A, B])`.
pub fn symplectic_eval(h: &HermitianMatrix, pair: &TangentPair) -> Result<f64> {
    let h = check_point(h)?;
    Ok(symplectic_raw(&h, &pair.a, &pair.b))
}

fn symplectic_raw(h: &CMat3, a: &CMat3, b: &CMat3) -> f64 {
    let comm = a * b - b * a;
    (h * comm).trace().im
}

/// `Re Tr([H, A] [H, B]†)`.
pub fn orbit_metric_eval(h: &HermitianMatrix, pair: &TangentPair) -> Result<f64> {
    let h = check_point(h)?;
    Ok(metric_raw(&h, &pair.a, &pair.b))
}

fn metric_raw(h: &CMat3, a: &CMat3, b: &CMat3) -> f64 {
    let ca = h * a - a * h;
    let cb = h * b - b * h;
    (ca * cb.adjoint()).trace().re
}

/// `M_uv = Im Tr(H [lambda_u, lambda_v])`.
pub fn symplectic_matrix(h: &HermitianMatrix) -> Result<SMatrix<f64, 8, 8>> {
    let h = check_point(h)?;
    Ok(SMatrix::from_fn(|u, v| symplectic_raw(&h, lambda(u), lambda(v))))
}

/// `G_uv = Re Tr([H, lambda_u] [H, lambda_v]†)`.
pub fn metric_matrix(h: &HermitianMatrix) -> Result<SMatrix<f64, 8, 8>> {
    let h = check_point(h)?;
    Ok(SMatrix::from_fn(|u, v| metric_raw(&h, lambda(u), lambda(v))))
}

fn nullity(m: SMatrix<f64, 8, 8>, tol: f64) -> usize {
    let sv = m.singular_values();
    let scale = sv.amax().max(1.0);
    sv.iter().filter(|s| **s <= tol * scale).count()
}

/// Kernel dimension of the 8×8 symplectic pairing; `8 - orbit dimension`.
pub fn symplectic_kernel_dim(h: &HermitianMatrix, tol: f64) -> Result<usize> {
    Ok(nullity(symplectic_matrix(h)?, tol))
}

/// Kernel dimension of the orbit metric on the Gell-Mann directions.
pub fn metric_kernel_dim(h: &HermitianMatrix, tol: f64) -> Result<usize> {
    Ok(nullity(metric_matrix(h)?, tol))
}

/// Orbit invariants `(xi·xi, (xi*xi)·xi)` and the orbit dimension.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrbitInvariants {
    pub quadratic: f64,
    pub cubic: f64,
    pub dimension: usize,
}

pub fn orbit_invariants(xi: &OctetVector) -> OrbitInvariants {
    let (quadratic, cubic) = xi.invariants();
    let dimension = match classify(xi, DEFAULT_TOL) {
        DegeneracyClass::Generic => 6,
        DegeneracyClass::UpperDegenerate | DegeneracyClass::LowerDegenerate => 4,
        DegeneracyClass::TripleDegenerate => 0,
    };
    OrbitInvariants { quadratic, cubic, dimension }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::su3::gellmann;

    #[test]
    fn diagonal_point_values() {
        let (e1, e2, e3) = (0.9, 0.2, -1.1);
        let h = HermitianMatrix::diagonal(&[e1, e2, e3]);
        let pair = TangentPair::gellmann(1, 2);
        let w = symplectic_eval(&h, &pair).unwrap();
        assert!((w - 2.0 * (e1 - e2)).abs() < 1e-14);
        assert!((symplectic_eval(&h, &pair.swapped()).unwrap() + w).abs() < 1e-14);
        let g = orbit_metric_eval(&h, &TangentPair::gellmann(1, 1)).unwrap();
        assert!((g - 2.0 * (e1 - e2).powi(2)).abs() < 1e-14);
    }

    #[test]
    fn commutant_directions_vanish() {
        let h = HermitianMatrix::diagonal(&[0.9, 0.2, -1.1]);
        let pair = TangentPair::gellmann(3, 5);
        assert_eq!(symplectic_eval(&h, &pair).unwrap(), 0.0);
        assert_eq!(orbit_metric_eval(&h, &TangentPair::gellmann(8, 4)).unwrap(), 0.0);
    }

    #[test]
    fn kernel_dimensions() {
        let generic = HermitianMatrix::diagonal(&[0.9, 0.2, -1.1]);
        assert_eq!(symplectic_kernel_dim(&generic, 1e-9).unwrap(), 2);
        let double = HermitianMatrix::diagonal(&[0.5, 0.5, -1.0]);
        assert_eq!(symplectic_kernel_dim(&double, 1e-9).unwrap(), 4);
        assert_eq!(symplectic_kernel_dim(&HermitianMatrix::identity(3), 1e-9).unwrap(), 8);
        assert_eq!(metric_kernel_dim(&double, 1e-9).unwrap(), 4);
    }

    #[test]
    fn rejects_traced_direction() {
        let id = HermitianMatrix::identity(3);
        let l1 = gellmann(1).unwrap();
        assert!(matches!(TangentPair::new(&id, &l1), Err(Error::NotTraceless { .. })));
        assert!(TangentPair::new(&HermitianMatrix::identity(2), &l1).is_err());
    }

    #[test]
    fn invariants_of_basis_vectors() {
        let o = orbit_invariants(&OctetVector::unit(3));
        assert!((o.quadratic - 1.0).abs() < 1e-15 && o.cubic.abs() < 1e-15);
        assert_eq!(o.dimension, 6);
        let o = orbit_invariants(&OctetVector::unit(8));
        assert!((o.cubic + 1.0).abs() < 1e-14);
        assert_eq!(o.dimension, 4);
        let o = orbit_invariants(&OctetVector::zeros());
        assert_eq!((o.quadratic, o.cubic, o.dimension), (0.0, 0.0, 0));
    }
}
