//! Left- and right-symmetric points, quantified by symmetry defects.
//!
//! A unit vector `x` is left-symmetric when `x ⊥ y` forces `y ⊥ x`, and
//! right-symmetric when `y ⊥ x` forces `x ⊥ y`. The defects below are
//! supremum estimates of how badly the implication fails, with the violating
//! direction attached whenever the estimate is positive.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orthogonality::{complement_params, complement_point, is_bj_orthogonal};
use crate::sampling::{self, SphereSequence};
use crate::search;
use crate::spaces::{NormSpec, SupportSet};
use crate::supsearch::{self, Candidate, Objective};
pub use crate::supsearch::TraceEntry;
use crate::tolerance::Tolerances;
use crate::vector::Vector;

/// A witness pair: `x` is the base point, `y` the violating direction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DefectWitness {
    pub x: Vector,
    pub y: Vector,
    /// The defect value recomputed from scratch at this pair.
    pub value: f64,
}

/// Result of a supremum-type search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DefectReport {
    /// Lower bound for the supremum.
    pub defect: f64,
    pub witness: Option<DefectWitness>,
    /// Number of seeded samples.
    pub grid_resolution: usize,
    pub refined: bool,
    pub trace: Vec<TraceEntry>,
}

impl DefectReport {
    pub(crate) fn zero(grid_resolution: usize) -> Self {
        Self { defect: 0.0, witness: None, grid_resolution, refined: false, trace: Vec::new() }
    }
}

/// How far `y ⊥ x` is from holding: `max(0, d-(y; x), -d+(y; x)) / |x|`.
///
/// Zero exactly when `y ⊥ x`; invariant under scaling of either argument.
pub fn violation(space: &NormSpec, y: &Vector, x: &Vector, tol: &Tolerances) -> Result<f64> {
    let support = space.dual_vertices(y, tol)?;
    space.check_dim(x)?;
    Ok(violation_with(&support, x.as_slice(), space.norm_of(x.as_slice())))
}

pub(crate) fn violation_with(support_of_y: &SupportSet, x: &[f64], norm_x: f64) -> f64 {
    if norm_x == 0.0 {
        return 0.0;
    }
    let (lo, hi) = support_of_y.range_on(x);
    lo.max(0.0).max(-hi) / norm_x
}

fn check_unit(space: &NormSpec, x: &Vector) -> Result<()> {
    space.check_dim(x)?;
    let n = space.norm_of(x.as_slice());
    if (n - 1.0).abs() > 1e-9 {
        return Err(Error::NotUnitVector { norm: n });
    }
    Ok(())
}

struct LeftObjective<'a> {
    space: &'a NormSpec,
    x: &'a Vector,
    support: SupportSet,
    seed: u64,
    tol: &'a Tolerances,
}

impl Objective for LeftObjective<'_> {
    fn initial(&self, k: u64) -> Vec<f64> {
        let mut rng = sampling::stream(self.seed, k);
        complement_params(&mut rng, self.space.dim(), self.support.vertices.len())
    }

    fn evaluate(&self, params: &[f64]) -> Option<Candidate> {
        let y = complement_point(self.space, &self.support, params, self.tol.tol_orth)?;
        let sy = self.space.support_of(y.as_slice(), self.tol.tol_active);
        let value = violation_with(&sy, self.x.as_slice(), 1.0);
        Some(Candidate { params: params.to_vec(), x: self.x.clone(), y, value })
    }

    fn verify(&self, x: &Vector, y: &Vector) -> Option<f64> {
        let premise = is_bj_orthogonal(self.space, x, y, self.tol).ok()?;
        if !premise.bj_orthogonal {
            return None;
        }
        violation(self.space, y, x, self.tol).ok()
    }
}

/// Lower bound for `sup { violation(y, x) : x ⊥ y, |y| = 1 }`.
pub fn left_symmetry_defect(
    space: &NormSpec,
    x: &Vector,
    budget: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<DefectReport> {
    check_unit(space, x)?;
    if space.dim() == 1 {
        return Ok(DefectReport::zero(budget));
    }
    let support = space.dual_vertices(x, tol)?;
    let obj = LeftObjective { space, x, support, seed, tol };
    Ok(supsearch::run(&obj, budget, tol))
}

struct RightObjective<'a> {
    space: &'a NormSpec,
    x: &'a Vector,
    support: SupportSet,
    sequence: SphereSequence,
    tol: &'a Tolerances,
}

impl RightObjective<'_> {
    /// Unit vectors `y` on the line `v + t x` with `y ⊥ x`.
    fn retract(&self, v: &[f64]) -> Vec<Vector> {
        let x = self.x.as_slice();
        let line = search::min_over_line(self.space, v, x, self.tol.tol_lambda);
        let t0 = search::stationary_point(self.space, v, x, self.tol.tol_exact);
        let mut out = Vec::with_capacity(3);
        for t in [t0, line.lo, line.hi] {
            let y: Vec<f64> = v.iter().zip(x).map(|(a, b)| a + t * b).collect();
            let ny = self.space.norm_of(&y);
            let scale = self.space.norm_of(v);
            if ny <= 1e-9 * scale {
                continue;
            }
            let y = Vector::from_raw(y.iter().map(|c| c / ny).collect());
            let sy = self.space.support_of(y.as_slice(), self.tol.tol_active);
            let (lo, hi) = sy.range_on(x);
            if lo <= self.tol.tol_orth && hi >= -self.tol.tol_orth {
                out.push(y);
            }
        }
        out
    }
}

impl Objective for RightObjective<'_> {
    fn initial(&self, k: u64) -> Vec<f64> {
        self.sequence.direction(k)
    }

    fn evaluate(&self, params: &[f64]) -> Option<Candidate> {
        self.retract(params)
            .into_iter()
            .map(|y| {
                let value = violation_with(&self.support, y.as_slice(), 1.0);
                (y, value)
            })
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(y, value)| Candidate { params: params.to_vec(), x: self.x.clone(), y, value })
    }

    fn verify(&self, x: &Vector, y: &Vector) -> Option<f64> {
        let premise = is_bj_orthogonal(self.space, y, x, self.tol).ok()?;
        if !premise.bj_orthogonal {
            return None;
        }
        violation(self.space, x, y, self.tol).ok()
    }
}

/// Lower bound for `sup { violation(x, y) : y ⊥ x, |y| = 1 }`.
pub fn right_symmetry_defect(
    space: &NormSpec,
    x: &Vector,
    budget: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<DefectReport> {
    check_unit(space, x)?;
    if space.dim() == 1 {
        return Ok(DefectReport::zero(budget));
    }
    let support = space.dual_vertices(x, tol)?;
    let sequence = SphereSequence::new(space.dim(), seed);
    let obj = RightObjective { space, x, support, sequence, tol };
    Ok(supsearch::run(&obj, budget, tol))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec()).unwrap()
    }

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn violation_examples() {
        let t = tol();
        let l2 = NormSpec::lp(2.0, 2).unwrap();
        assert_eq!(violation(&l2, &v(&[0.0, 1.0]), &v(&[1.0, 0.0]), &t).unwrap(), 0.0);
        let l1 = NormSpec::lp(1.0, 3).unwrap();
        assert_eq!(violation(&l1, &v(&[1.0, -1.0, 0.0]), &v(&[1.0, 0.0, 0.0]), &t).unwrap(), 1.0);
        let linf = NormSpec::l_inf(2).unwrap();
        assert_eq!(violation(&linf, &v(&[1.0, 1.0]), &v(&[1.0, 0.0]), &t).unwrap(), 0.0);
    }

    #[test]
    fn violation_is_scale_invariant() {
        let t = tol();
        let s = NormSpec::lp(3.0, 3).unwrap();
        let y = v(&[0.2, -1.0, 0.7]);
        let x = v(&[1.0, 0.5, -0.3]);
        let a = violation(&s, &y, &x, &t).unwrap();
        let b = violation(&s, &y.scaled(-4.0), &x.scaled(0.25), &t).unwrap();
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn hilbert_points_are_symmetric() {
        let t = tol();
        let s = NormSpec::lp(2.0, 3).unwrap();
        let x = s.normalize(&v(&[1.0, -2.0, 0.5])).unwrap();
        let l = left_symmetry_defect(&s, &x, 64, 1, &t).unwrap();
        let r = right_symmetry_defect(&s, &x, 64, 1, &t).unwrap();
        assert!(l.defect <= 1e-9 && l.witness.is_none());
        assert!(r.defect <= 1e-9 && r.witness.is_none());
    }

    #[test]
    fn l1_basis_vector_is_not_left_symmetric() {
        let t = tol();
        let s = NormSpec::lp(1.0, 3).unwrap();
        let r = left_symmetry_defect(&s, &Vector::basis(3, 0), 50, 7, &t).unwrap();
        assert!(r.defect >= 0.9);
        let w = r.witness.unwrap();
        assert!(w.y[0].abs() > 0.0);
    }

    #[test]
    fn linf_axis_point_left_defect_vanishes() {
        let t = tol();
        let s = NormSpec::l_inf(2).unwrap();
        let r = left_symmetry_defect(&s, &v(&[1.0, 0.0]), 50, 2, &t).unwrap();
        assert_eq!(r.defect, 0.0);
    }

    #[test]
    fn linf_axis_point_is_not_right_symmetric() {
        // y = (1, 1) satisfies y ⊥ (0, 1) while (0, 1) ⊥ y fails with f(y) = 1.
        let t = tol();
        let s = NormSpec::l_inf(2).unwrap();
        let x = v(&[0.0, 1.0]);
        assert!(is_bj_orthogonal(&s, &v(&[1.0, 1.0]), &x, &t).unwrap().bj_orthogonal);
        assert_eq!(violation(&s, &x, &v(&[1.0, 1.0]), &t).unwrap(), 1.0);
        let r = right_symmetry_defect(&s, &x, 100, 3, &t).unwrap();
        assert!(r.defect > 0.99, "{}", r.defect);
        assert!(r.witness.is_some());
    }

    #[test]
    fn l1_basis_right_defect_matches_grid_oracle() {
        // Oracle: scan unit y on a 1e-3 grid of the l1 sphere, keep y ⊥ e1 by
        // brute-force line minimization, maximize the violation of e1 ⊥ y.
        let t = tol();
        let s = NormSpec::lp(1.0, 3).unwrap();
        let x = Vector::basis(3, 0);
        let steps = 1000;
        let mut oracle = 0.0f64;
        for i in 0..=steps {
            for j in 0..=(steps - i) {
                let a = i as f64 / steps as f64;
                let b = j as f64 / steps as f64;
                let c = 1.0 - a - b;
                for (sb, sc) in [(1.0, 1.0), (1.0, -1.0)] {
                    let y = [a, sb * b, sc * c];
                    let line = (-300..=300)
                        .map(|k| k as f64 / 100.0)
                        .map(|u| (y[0] + u).abs() + y[1].abs() + y[2].abs())
                        .fold(f64::INFINITY, f64::min);
                    if line >= 1.0 - 1e-12 {
                        // e1 ⊥ y fails by dist(0, [d-, d+]) over J(e1) = {(1, ±1, ±1)}.
                        let lo = y[0] - y[1].abs() - y[2].abs();
                        let hi = y[0] + y[1].abs() + y[2].abs();
                        oracle = oracle.max(lo.max(0.0).max(-hi));
                    }
                }
            }
        }
        let r = right_symmetry_defect(&s, &x, 400, 11, &t).unwrap();
        assert!((r.defect - oracle).abs() <= 2e-3, "{} vs {oracle}", r.defect);
    }

    #[test]
    fn defect_is_monotone_in_budget() {
        let t = tol();
        let s = NormSpec::lp(3.0, 3).unwrap();
        let x = s.normalize(&v(&[1.0, 0.3, -0.4])).unwrap();
        let mut last = 0.0;
        for budget in [4, 16, 64] {
            let r = right_symmetry_defect(&s, &x, budget, 5, &t).unwrap();
            assert!(r.defect >= last);
            last = r.defect;
        }
    }

    #[test]
    fn rejects_non_unit_points() {
        let s = NormSpec::lp(2.0, 2).unwrap();
        assert!(matches!(
            left_symmetry_defect(&s, &v(&[2.0, 0.0]), 4, 0, &tol()),
            Err(Error::NotUnitVector { .. })
        ));
    }
}
