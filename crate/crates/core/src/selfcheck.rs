//! Runtime invariant suite behind the `selfcheck` command.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::curvature::{
    curvature_all_levels, curvature_rest_frame, curvature_transported, sum_rule_finite_difference,
    weighted_sum, Level,
};
use crate::degeneracy::monopole_flux;
use crate::spectrum::eigenvalues;
use crate::su3::{cmat3_to_hermitian, structure_constants, Mat8, OctetVector, SQRT3};
use crate::tensor::{curvature_from_parts, octet_prefactor, project_irreducible, reconstitute, to_tensor_components};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Worst observed deviation against the tolerance.
    pub deviation: f64,
    pub tolerance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

fn check(name: &str, deviation: f64, tolerance: f64) -> Check {
    Check {
        name: name.to_string(),
        passed: deviation.is_finite() && deviation <= tolerance,
        deviation,
        tolerance,
    }
}

fn points(seed: u64, n: usize) -> Vec<OctetVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| OctetVector::random(&mut rng)).collect()
}

fn worst<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    it.into_iter().fold(0.0, |a, b| if b.is_nan() { f64::NAN } else { a.max(b) })
}

/// Runs every check with a fixed seed.
pub fn run(seed: u64) -> Report {
    let sample = points(seed, 64);
    let mut checks = Vec::new();

    let f = structure_constants();
    let table = [
        (f.f1(1, 2, 3), 1.0),
        (f.f1(1, 4, 7), 0.5),
        (f.f1(4, 5, 8), SQRT3 / 2.0),
        (f.d1(1, 1, 8), 1.0 / SQRT3),
        (f.d1(8, 8, 8), -1.0 / SQRT3),
        (f.d1(4, 4, 3), 0.5),
    ];
    checks.push(check("structure_constants", worst(table.iter().map(|(a, b)| (a - b).abs())), 1e-14));

    checks.push(check(
        "determinant_equals_cubic_over_12_sqrt3",
        worst(sample.iter().map(|xi| {
            let det = xi.hamiltonian().determinant().re;
            (det - xi.invariants().1 / (12.0 * SQRT3)).abs() / xi.norm().powi(3)
        })),
        1e-13,
    ));

    checks.push(check(
        "rest_frame_xi8_equals_gap_sum_over_sqrt3",
        worst(sample.iter().map(|xi| {
            let s = eigenvalues(xi);
            (s.rest_frame()[7] - (s.e13 + s.e23) / SQRT3).abs() / xi.norm()
        })),
        1e-13,
    ));

    checks.push(check(
        "closed_form_eigenvalues",
        worst(sample.iter().map(|xi| {
            let dense = cmat3_to_hermitian(&xi.hamiltonian()).eigenvalues_desc();
            let closed = eigenvalues(xi).energies;
            worst((0..3).map(|a| (dense[a] - closed[a]).abs() / xi.norm()))
        })),
        1e-10,
    ));

    checks.push(check(
        "prefactor_identity",
        worst(sample.iter().map(|xi| {
            let s = eigenvalues(xi);
            let pref = octet_prefactor(&s.rest_frame()).unwrap_or(f64::NAN);
            let want = -1.0 / (4.0 * s.e12 * s.e13 * s.e23);
            ((pref - want) / want).abs()
        })),
        1e-10,
    ));

    let mut route = 0.0f64;
    let mut level_sum = 0.0f64;
    for xi in &sample {
        match curvature_all_levels(xi) {
            Ok(all) => {
                let scale = all.iter().map(|v| v.max_abs()).fold(0.0, f64::max);
                let total: Mat8 = all.iter().map(|v| v.v).sum();
                level_sum = level_sum.max(total.amax() / scale);
                for v in &all {
                    let t = curvature_transported(xi, v.level).map(|t| t.max_abs_diff(v));
                    let p = curvature_from_parts(xi, v.level).map(|p| p.max_abs_diff(v));
                    match (t, p) {
                        (Ok(t), Ok(p)) => route = route.max(t.max(p) / v.max_abs()),
                        _ => route = f64::NAN,
                    }
                }
            }
            Err(_) => route = f64::NAN,
        }
    }
    checks.push(check("three_route_equivalence", route, 1e-9));
    checks.push(check("level_sum_vanishes", level_sum, 1e-10));

    checks.push(check(
        "rest_frame_table",
        worst(sample.iter().map(|xi| {
            let s = eigenvalues(xi);
            let rest = s.rest_frame();
            match (curvature_all_levels(&rest), curvature_rest_frame(&s, Level::One)) {
                (Ok(all), Ok(_)) => worst(Level::ALL.iter().map(|l| {
                    let table = curvature_rest_frame(&s, *l).unwrap();
                    all[l.index()].max_abs_diff(&table) / table.max_abs()
                })),
                _ => f64::NAN,
            }
        })),
        1e-10,
    ));

    checks.push(check(
        "decomposition_round_trip",
        worst((0..8).flat_map(|r| ((r + 1)..8).map(move |s| (r, s))).map(|(r, s)| {
            let mut t = Mat8::zeros();
            t[(r, s)] = 1.0;
            t[(s, r)] = -1.0;
            let four = to_tensor_components(&t).expect("antisymmetric");
            match reconstitute(&project_irreducible(&four)) {
                Ok(back) => (back.components() - t).amax(),
                Err(_) => f64::NAN,
            }
        })),
        1e-12,
    ));

    checks.push(check(
        "weighted_sum_finite_difference",
        worst(sample.iter().take(8).map(|xi| {
            match (weighted_sum(xi), sum_rule_finite_difference(xi, 1e-5)) {
                (Ok(a), Ok(b)) => (a - b).amax() / a.amax(),
                _ => f64::NAN,
            }
        })),
        1e-5,
    ));

    let e8 = OctetVector::unit(8);
    checks.push(check(
        "monopole_flux",
        worst([
            monopole_flux(&e8, 1e-3, Level::One).map_or(f64::NAN, |f| (f - 2.0 * PI).abs() / (2.0 * PI)),
            monopole_flux(&e8, 1e-3, Level::Two).map_or(f64::NAN, |f| (f + 2.0 * PI).abs() / (2.0 * PI)),
        ]),
        1e-2,
    ));

    let passed = checks.iter().filter(|c| c.passed).count();
    Report {
        passed,
        failed: checks.len() - passed,
        checks,
    }
}

#[cfg(test)]
mod tests {
    #[test]
    fn clean_build_passes() {
        let report = super::run(7);
        for c in &report.checks {
            assert!(c.passed, "{c:?}");
        }
        assert!(report.all_passed());
    }
}
