//! Supremum search shared by all defect computations.
//!
//! A search evaluates a parametrized objective at seeded starting parameters,
//! then refines every record (a sample that beats all earlier samples) by
//! coordinate ascent with step halving. Since records of a prefix are records
//! of the whole run and refinement is deterministic, the estimate can only
//! grow with the budget.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::symmetry::{DefectReport, DefectWitness};
use crate::tolerance::Tolerances;
use crate::vector::Vector;

/// One evaluated point of a search.
#[derive(Debug, Clone)]
pub(crate) struct Candidate {
    pub params: Vec<f64>,
    pub x: Vector,
    pub y: Vector,
    pub value: f64,
}

pub(crate) trait Objective: Sync {
    /// Starting parameters of sample `k`.
    fn initial(&self, k: u64) -> Vec<f64>;
    /// Evaluates parameters; `None` when the premise of the defect fails.
    fn evaluate(&self, params: &[f64]) -> Option<Candidate>;
    /// Independent recomputation of a witness value, `None` if the premise fails.
    fn verify(&self, x: &Vector, y: &Vector) -> Option<f64>;
    /// Initial coordinate step of the refinement stage.
    fn step(&self) -> f64 {
        0.1
    }
}

/// One refined record of the search trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub sample: usize,
    pub raw: f64,
    pub refined: f64,
}

fn refine<O: Objective>(obj: &O, start: Candidate, iterations: usize) -> Candidate {
    let mut best = start;
    let mut h = obj.step();
    for _ in 0..iterations {
        let mut improved = false;
        for i in 0..best.params.len() {
            for sign in [1.0, -1.0] {
                let mut p = best.params.clone();
                p[i] += sign * h;
                if let Some(c) = obj.evaluate(&p) {
                    if c.value > best.value {
                        best = c;
                        improved = true;
                    }
                }
            }
        }
        if !improved {
            h *= 0.5;
        }
    }
    best
}

/// Runs `budget` samples plus record refinement and assembles the report.
pub(crate) fn run<O: Objective>(obj: &O, budget: usize, tol: &Tolerances) -> DefectReport {
    let raw: Vec<Option<Candidate>> = (0..budget as u64)
        .into_par_iter()
        .map(|k| obj.evaluate(&obj.initial(k)))
        .collect();

    let mut records = Vec::new();
    let mut best = f64::NEG_INFINITY;
    for (k, c) in raw.iter().enumerate() {
        if let Some(c) = c {
            if c.value > best {
                best = c.value;
                records.push(k);
            }
        }
    }
    let refined: Vec<Candidate> = records
        .par_iter()
        .map(|&k| refine(obj, raw[k].clone().expect("records are evaluated"), tol.refine_iterations))
        .collect();
    let trace: Vec<TraceEntry> = records
        .iter()
        .zip(&refined)
        .map(|(&k, c)| TraceEntry {
            sample: k,
            raw: raw[k].as_ref().map_or(0.0, |r| r.value),
            refined: c.value,
        })
        .collect();

    let mut pool: Vec<&Candidate> = raw.iter().flatten().chain(refined.iter()).collect();
    pool.sort_by(|a, b| b.value.total_cmp(&a.value));

    let mut defect = 0.0f64;
    let mut witness = None;
    for c in pool {
        if c.value <= tol.tol_defect {
            defect = defect.max(c.value.max(0.0));
            break;
        }
        if let Some(v) = obj.verify(&c.x, &c.y) {
            if v >= c.value - 1e-9 * (1.0 + c.value) {
                defect = c.value;
                witness = Some(DefectWitness { x: c.x.clone(), y: c.y.clone(), value: v });
                break;
            }
        }
    }
    DefectReport {
        defect,
        witness,
        grid_resolution: budget,
        refined: !trace.is_empty() && tol.refine_iterations > 0,
        trace,
    }
}
