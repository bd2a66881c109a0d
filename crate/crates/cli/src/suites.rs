//! Seeded property suites checking the main results on concrete spaces.
//!
//! Each case draws its inputs from its own random stream, so a failure can be
//! replayed from the seed and case index alone; every failure also carries a
//! command line that reproduces it.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use bjorth::constructions::{kernel_orthogonality_probe, right_symmetry_witness};
use bjorth::operators::{
    attainment_set, bj_orthogonal_operators, daop_epsilon, daor_epsilon, is_smooth_operator, kernel,
    local_reversing_defect, lower_norm,
};
use bjorth::orthogonality::{is_bj_orthogonal, orthogonal_complement_sample};
use bjorth::sampling::{gaussian, stream, uniform};
use bjorth::symmetry::{left_symmetry_defect, right_symmetry_defect, violation};
use bjorth::{Exponent, Matrix, NormSpec, Operator, Tolerances, Vector};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::plot::{parse_sphere_points, plot_ball, BallFigure, SEGMENTS};

/// Registered suites with their default case counts.
pub const SUITES: [(&str, usize); 11] = [
    ("james-equivalence", 1000),
    ("hilbert-symmetry", 200),
    ("l1-no-left-symmetric", 100),
    ("right-additivity", 200),
    ("kernel-lemma", 100),
    ("daop-injectivity", 50),
    ("daop-closed-form", 1),
    ("right-symmetry-witness", 20),
    ("claor-attainment", 20),
    ("hilbert-characterization", 50),
    ("figure-one", 1),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteFailure {
    pub case: usize,
    pub detail: String,
    pub reproduce: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub suite: String,
    pub seed: u64,
    pub cases: usize,
    pub failures: Vec<SuiteFailure>,
    /// Suite-specific aggregate values, such as the largest violation seen.
    pub summary: BTreeMap<String, f64>,
    pub wall_time_secs: f64,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownSuite(pub String);

impl fmt::Display for UnknownSuite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = SUITES.iter().map(|s| s.0).collect();
        write!(f, "unknown suite {:?}; available: {}", self.0, names.join(", "))
    }
}

impl std::error::Error for UnknownSuite {}

// ---------------------------------------------------------------------------
// Input generators

/// Standard Gaussian vector.
pub fn random_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vector {
    Vector::new(gaussian(rng, dim)).expect("finite")
}

pub fn random_unit(space: &NormSpec, rng: &mut ChaCha8Rng) -> Vector {
    bjorth::sampling::random_unit(space, rng)
}

/// One of `l_1, l_1.5, l_2, l_3, l_inf` in dimension 2 to 4.
pub fn random_space(rng: &mut ChaCha8Rng) -> NormSpec {
    let dim = 2 + (uniform(rng, 0.0, 3.0) as usize).min(2);
    let p = [1.0, 1.5, 2.0, 3.0, f64::INFINITY][(uniform(rng, 0.0, 5.0) as usize).min(4)];
    if p.is_infinite() {
        NormSpec::l_inf(dim).expect("valid")
    } else {
        NormSpec::lp(p, dim).expect("valid")
    }
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    let entries: Vec<Vec<f64>> = (0..rows).map(|_| gaussian(rng, cols)).collect();
    Matrix::from_rows(&entries).expect("finite")
}

pub fn random_operator(rng: &mut ChaCha8Rng, space: &NormSpec) -> Operator {
    Operator::on(random_matrix(rng, space.dim(), space.dim()), space.clone()).expect("square")
}

/// Gaussian factors around a coordinate projection of the given rank.
pub fn operator_of_rank(rng: &mut ChaCha8Rng, space: &NormSpec, rank: usize) -> Operator {
    let n = space.dim();
    let p: Vec<f64> = (0..n).map(|i| if i < rank { 1.0 } else { 0.0 }).collect();
    let m = random_matrix(rng, n, n).mul(&Matrix::diag(&p)).mul(&random_matrix(rng, n, n));
    Operator::on(m, space.clone()).expect("square")
}

fn random_orthogonal(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let cols: Vec<Vector> = (0..n).map(|_| random_vector(rng, n)).collect();
    let q = bjorth::linalg::gram_schmidt(&cols);
    let rows: Vec<Vec<f64>> = (0..n).map(|i| q.iter().map(|c| c[i]).collect()).collect();
    Matrix::from_rows(&rows).expect("finite")
}

/// `Q1 diag(s) Q2` with Euclidean-orthogonal factors and `s` uniform in `[1, 2]`.
pub fn well_conditioned_operator(rng: &mut ChaCha8Rng, space: &NormSpec) -> Operator {
    let n = space.dim();
    let q1 = random_orthogonal(rng, n);
    let q2 = random_orthogonal(rng, n);
    let s: Vec<f64> = (0..n).map(|_| uniform(rng, 1.0, 2.0)).collect();
    Operator::on(q1.mul(&Matrix::diag(&s)).mul(&q2), space.clone()).expect("square")
}

// ---------------------------------------------------------------------------
// Reproduction commands

fn shorthand(space: &NormSpec) -> String {
    match space.exponent() {
        Some(Exponent::Infinity) if matches!(space.family(), bjorth::Family::Lp { .. }) => {
            format!("linf:{}", space.dim())
        }
        Some(Exponent::Finite(p)) if matches!(space.family(), bjorth::Family::Lp { .. }) => {
            format!("lp:{p}:{}", space.dim())
        }
        _ => format!("'{}'", serde_json::to_string(space).expect("serializable")),
    }
}

fn coords(v: &Vector) -> String {
    v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

fn op_json(t: &Operator) -> String {
    format!("'{}'", serde_json::to_string(t).expect("serializable"))
}

// ---------------------------------------------------------------------------
// Suites

struct Run {
    failures: Vec<SuiteFailure>,
    summary: BTreeMap<String, f64>,
}

impl Run {
    fn new() -> Self {
        Self { failures: Vec::new(), summary: BTreeMap::new() }
    }

    fn fail(&mut self, case: usize, detail: impl Into<String>, reproduce: impl Into<String>) {
        self.failures.push(SuiteFailure { case, detail: detail.into(), reproduce: reproduce.into() });
    }

    fn max(&mut self, key: &str, v: f64) {
        let e = self.summary.entry(key.into()).or_insert(f64::NEG_INFINITY);
        *e = e.max(v);
    }

    fn min(&mut self, key: &str, v: f64) {
        let e = self.summary.entry(key.into()).or_insert(f64::INFINITY);
        *e = e.min(v);
    }

    fn count(&mut self, key: &str) {
        *self.summary.entry(key.into()).or_insert(0.0) += 1.0;
    }
}

/// Interval test and line test agree on random pairs, half of them orthogonal
/// by construction.
fn james_equivalence(seed: u64, cases: usize, tol: &Tolerances, run: &mut Run) {
    let tol = Tolerances { tol_orth: 1e-7, ..tol.clone() };
    for k in 0..cases {
        let mut rng = stream(seed, k as u64);
        let space = random_space(&mut rng);
        let x = random_vector(&mut rng, space.dim());
        let y = if k % 2 == 0 {
            random_vector(&mut rng, space.dim())
        } else {
            orthogonal_complement_sample(&space, &x, 1, seed ^ k as u64, &tol).expect("nonzero x").remove(0)
        };
        let cmd = format!(
            "bjorth orth check --space {} --x {} --y {} --set tol_orth=1e-7",
            shorthand(&space),
            coords(&x),
            coords(&y)
        );
        match is_bj_orthogonal(&space, &x, &y, &tol) {
            Ok(r) => {
                if r.bj_orthogonal {
                    run.count("orthogonal");
                } else {
                    run.min("min_nonorthogonal_gap", r.chmielinski_eps);
                }
                if r.interval_test != r.line_test {
                    run.fail(
                        k,
                        format!(
                            "interval test {} but line test {} (derivatives [{}, {}], line minimum {})",
                            r.interval_test, r.line_test, r.derivatives.d_minus, r.derivatives.d_plus, r.line_min_value
                        ),
                        cmd,
                    );
                }
            }
            Err(e) => run.fail(k, e.to_string(), cmd),
        }
    }
}

/// Both symmetry defects vanish at random points of the Euclidean space.
fn hilbert_symmetry(seed: u64, cases: usize, tol: &Tolerances, run: &mut Run) {
    let space = NormSpec::lp(2.0, 3).expect("valid");
    for k in 0..cases {
        let x = random_unit(&space, &mut stream(seed, k as u64));
        let cmd = format!("bjorth point symmetry --space lp:2:3 --x {} --budget 32 --seed {k}", coords(&x));
        let left = left_symmetry_defect(&space, &x, 32, k as u64, tol);
        let right = right_symmetry_defect(&space, &x, 32, k as u64, tol);
        match (left, right) {
            (Ok(l), Ok(r)) => {
                run.max("max_defect", l.defect.max(r.defect));
                if l.defect > 1e-6 || r.defect > 1e-6 {
                    run.fail(k, format!("left defect {}, right defect {}", l.defect, r.defect), cmd);
                }
            }
            (Err(e), _) | (_, Err(e)) => run.fail(k, e.to_string(), cmd),
        }
    }
}

/// No point of the l_1 sphere is left-symmetric: every tested point has a
/// verified witness with a sizeable defect.
fn l1_no_left_symmetric(seed: u64, cases: usize, tol: &Tolerances, run: &mut Run) {
    let space = NormSpec::lp(1.0, 3).expect("valid");
    let mut points: Vec<Vector> = (0..3).map(|i| Vector::basis(3, i)).collect();
    points.extend((0..cases).map(|k| random_unit(&space, &mut stream(seed, k as u64))));
    for (k, x) in points.iter().enumerate() {
        let cmd = format!("bjorth point symmetry --space lp:1:3 --x {} --budget 64 --seed {k}", coords(x));
        let report = match left_symmetry_defect(&space, x, 64, k as u64, tol) {
            Ok(r) => r,
            Err(e) => {
                run.fail(k, e.to_string(), cmd);
                continue;
            }
        };
        run.min("min_defect", report.defect);
        let Some(w) = report.witness else {
            run.fail(k, format!("no witness (defect {})", report.defect), cmd);
            continue;
        };
        let premise = is_bj_orthogonal(&space, &w.x, &w.y, tol).map(|r| r.bj_orthogonal).unwrap_or(false);
        let fresh = violation(&space, &w.y, &w.x, tol).unwrap_or(0.0);
        if !premise || (fresh - report.defect).abs() > 1e-9 * (1.0 + fresh) || report.defect < 0.05 {
            run.fail(
                k,
                format!("witness premise {premise}, recomputed violation {fresh}, reported {}", report.defect),
                cmd,
            );
        } else {
            run.count("witnesses");
        }
    }
}

/// At smooth points the orthogonal complement is closed under addition.
fn right_additivity(seed: u64, cases: usize, tol: &Tolerances, run: &mut Run) {
    let space = NormSpec::lp(3.0, 2).expect("valid");
    for k in 0..cases {
        let mut rng = stream(seed, k as u64);
        let x = random_unit(&space, &mut rng);
        let (a, b) = (uniform(&mut rng, -2.0, 2.0), uniform(&mut rng, -2.0, 2.0));
        let ys = orthogonal_complement_sample(&space, &x, 2, seed ^ k as u64, tol).expect("unit x");
        let sum = ys[0].scaled(a).axpy(b, &ys[1]);
        let v = if sum.is_zero() { 0.0 } else { violation(&space, &x, &sum, tol).unwrap_or(f64::INFINITY) };
        run.max("max_violation", v);
        if v > 1e-7 {
            run.fail(
                k,
                format!("violation {v}"),
                format!("bjorth orth check --space lp:3:2 --x {} --y {}", coords(&x), coords(&sum)),
            );
        }
    }
}

/// Every attainment point of an operator is orthogonal to its kernel.
fn kernel_lemma(seed: u64, cases: usize, tol: &Tolerances, run: &mut Run) {
    for k in 0..cases {
        let mut rng = stream(seed, k as u64);
        let space = NormSpec::lp([1.5, 2.0, 3.0][k % 3], 3).expect("valid");
        let rank = [3, 2, 2, 1][k % 4];
        let t = operator_of_rank(&mut rng, &space, rank);
        let cmd = format!("bjorth op attain --T {}", op_json(&t));
        let reps = match attainment_set(&t, tol) {
            Ok(s) => s.representatives,
            Err(e) => {
                run.fail(k, e.to_string(), cmd);
                continue;
            }
        };
        for h in kernel(&t, tol) {
            for x0 in &reps {
                let v = violation(&space, x0, &h, tol).unwrap_or(f64::INFINITY);
                run.max("max_violation", v);
                run.count("pairs");
                if v > 1e-6 {
                    run.fail(k, format!("x0 = {} not orthogonal to kernel vector {} ({v})", coords(x0), coords(&h)), cmd.clone());
                }
            }
        }
    }
}

/// Injective operators have DAOP and DAOR constants below one; singular
/// operators reach one with a witness.
fn daop_injectivity(seed: u64, cases: usize, tol: &Tolerances, run: &mut Run) {
    let space = NormSpec::lp(1.5, 3).expect("valid");
    for k in 0..cases {
        let mut rng = stream(seed, k as u64);
        let t = well_conditioned_operator(&mut rng, &space);
        let z = operator_of_rank(&mut rng, &space, 1 + k % 2);
        for (op, injective) in [(&t, true), (&z, false)] {
            let cmd = |what: &str| format!("bjorth op {what} --T {} --budget 32 --seed {k}", op_json(op));
            for (what, report) in [("daop", daop_epsilon(op, 32, k as u64, tol)), ("daor", daor_epsilon(op, 32, k as u64, tol))] {
                let r = match report {
                    Ok(r) => r,
                    Err(e) => {
                        run.fail(k, e.to_string(), cmd(what));
                        continue;
                    }
                };
                if injective {
                    run.max("max_injective", r.defect);
                    if r.defect > 1.0 - 1e-3 {
                        run.fail(k, format!("injective operator with {what} = {}", r.defect), cmd(what));
                    }
                } else {
                    run.min("min_singular", r.defect);
                    if r.defect < 0.999 || r.witness.is_none() {
                        run.fail(k, format!("singular operator with {what} = {} (witness {})", r.defect, r.witness.is_some()), cmd(what));
                    }
                }
            }
        }
    }
}

/// `|cos|` of the images of `(cos a, sin a)` and `(-sin a, cos a)` under `diag(2, 1)`,
/// maximized over a fine angle grid.
pub fn diagonal_daop_oracle(steps: usize) -> f64 {
    (0..steps)
        .map(|k| std::f64::consts::PI * k as f64 / steps as f64)
        .map(|a| {
            let (s, c) = a.sin_cos();
            let (tx, ty) = ([2.0 * c, s], [-2.0 * s, c]);
            let dot = tx[0] * ty[0] + tx[1] * ty[1];
            dot.abs() / (tx[0].hypot(tx[1]) * ty[0].hypot(ty[1]))
        })
        .fold(0.0, f64::max)
}

fn daop_closed_form(seed: u64, _cases: usize, tol: &Tolerances, run: &mut Run) {
    let t = Operator::on(Matrix::diag(&[2.0, 1.0]), NormSpec::lp(2.0, 2).expect("valid")).expect("square");
    let cmd = format!("bjorth op daop --T '[[2,0],[0,1]]' --space lp:2:2 --budget 256 --seed {seed}");
    let oracle = diagonal_daop_oracle(1_000_000);
    run.summary.insert("oracle".into(), oracle);
    match daop_epsilon(&t, 256, seed, tol) {
        Ok(r) => {
            run.summary.insert("daop".into(), r.defect);
            if (r.defect - 0.6).abs() > 1e-3 || (r.defect - oracle).abs() > 1e-3 {
                run.fail(0, format!("daop {} against 0.6 and oracle {oracle}", r.defect), cmd);
            }
        }
        Err(e) => run.fail(0, e.to_string(), cmd),
    }
}

/// Smooth operators of rank at least two on l_3^2 and l_3^3 get certified
/// non-right-symmetry witnesses.
fn right_symmetry_witnesses(seed: u64, cases: usize, tol: &Tolerances, run: &mut Run) {
    for dim in [2, 3] {
        let space = NormSpec::lp(3.0, dim).expect("valid");
        let mut built = 0;
        let mut draw = 0u64;
        while built < cases {
            let t = random_operator(&mut stream(seed ^ (dim as u64) << 32, draw), &space);
            draw += 1;
            let smooth = is_smooth_operator(&t, tol).map(|d| d.smooth).unwrap_or(false);
            if !smooth || t.rank(tol) < 2 {
                run.count("skipped_draws");
                continue;
            }
            let case = built + (dim - 2) * cases;
            built += 1;
            let cmd = format!("bjorth witness right-symmetry --T {} --budget 64 --seed {draw}", op_json(&t));
            let w = match right_symmetry_witness(&t, 64, draw, tol) {
                Ok(w) => w,
                Err(e) => {
                    run.fail(case, e.to_string(), cmd);
                    continue;
                }
            };
            let a = &w.operator;
            let at = bj_orthogonal_operators(a, &t, tol);
            let ta = bj_orthogonal_operators(&t, a, tol);
            let (Ok(at), Ok(ta)) = (at, ta) else {
                run.fail(case, "operator orthogonality test failed to run", cmd);
                continue;
            };
            let deficit = at.norm_t - at.pencil_min;
            let gap = ta.norm_t - ta.pencil_min;
            run.max("max_deficit", deficit);
            run.min("min_gap", gap);
            run.max("max_attempts", w.trace.attempts as f64);
            if !w.all_passed() || deficit > 1e-6 || gap < 1e-3 || w.trace.attempts > tol.max_retries + 1 {
                run.fail(
                    case,
                    format!("deficit {deficit}, gap {gap}, attempts {}, record passed {}", w.trace.attempts, w.all_passed()),
                    cmd,
                );
            }
        }
    }
}

/// Bounded-below operators are approximately orthogonality reversing at their
/// attainment point with a constant below one.
fn claor_attainment(seed: u64, cases: usize, tol: &Tolerances, run: &mut Run) {
    let space = NormSpec::lp(3.0, 3).expect("valid");
    let mut done = 0;
    let mut draw = 0u64;
    while done < cases {
        let t = random_operator(&mut stream(seed, draw), &space);
        draw += 1;
        let lower = lower_norm(&t, tol).certified_lower;
        if lower < 0.1 {
            run.count("skipped_draws");
            continue;
        }
        let case = done;
        done += 1;
        let x0 = match attainment_set(&t, tol) {
            Ok(s) => s.representatives[0].clone(),
            Err(e) => {
                run.fail(case, e.to_string(), format!("bjorth op attain --T {}", op_json(&t)));
                continue;
            }
        };
        let cmd = format!("bjorth op claor --T {} --x {} --budget 64 --seed {draw}", op_json(&t), coords(&x0));
        match local_reversing_defect(&t, &x0, 64, draw, tol) {
            Ok(r) => {
                run.max("max_defect", r.defect);
                if r.defect > 1.0 - 1e-3 {
                    run.fail(case, format!("local reversing defect {} (lower norm {lower})", r.defect), cmd);
                }
            }
            Err(e) => run.fail(case, e.to_string(), cmd),
        }
    }
}

/// The kernel of the functional projection is orthogonal to the base point
/// everywhere in the Euclidean space, but not everywhere in l_4.
fn hilbert_characterization(seed: u64, cases: usize, tol: &Tolerances, run: &mut Run) {
    let mut l4_max: f64 = 0.0;
    for (p, index) in [(2.0, 0u64), (4.0, 1u64)] {
        let space = NormSpec::lp(p, 3).expect("valid");
        for k in 0..cases {
            let x0 = random_unit(&space, &mut stream(seed ^ index << 40, k as u64));
            let cmd = format!("bjorth probe kernel --space lp:{p}:3 --x {} --budget 64 --seed {k}", coords(&x0));
            match kernel_orthogonality_probe(&space, &x0, 64, k as u64, tol) {
                Ok(r) if p == 2.0 => {
                    run.max("l2_max_violation", r.report.defect);
                    if r.report.defect > 1e-6 {
                        run.fail(k, format!("Euclidean kernel violation {}", r.report.defect), cmd);
                    }
                }
                Ok(r) => l4_max = l4_max.max(r.report.defect),
                Err(e) => run.fail(k, e.to_string(), cmd),
            }
        }
    }
    run.summary.insert("l4_max_violation".into(), l4_max);
    if l4_max < 1e-3 {
        run.fail(cases, format!("largest l_4 kernel violation is only {l4_max}"), "bjorth verify hilbert-characterization");
    }
}

fn figure_one(_seed: u64, _cases: usize, tol: &Tolerances, run: &mut Run) {
    let cmd = "bjorth plot ball --figure-one";
    let fig = BallFigure::figure_one();
    let (a, b) = match (plot_ball(&fig, tol), plot_ball(&fig, tol)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => {
            run.fail(0, e.to_string(), cmd);
            return;
        }
    };
    if a != b {
        run.fail(0, "two renderings differ", cmd);
    }
    let pts = parse_sphere_points(&a).unwrap_or_default();
    let err = pts.iter().map(|p| (p[0].abs().max(p[1].abs()) - 1.0).abs()).fold(0.0, f64::max);
    run.summary.insert("max_vertex_error".into(), err);
    if pts.len() != SEGMENTS || err > 1e-6 {
        run.fail(0, format!("{} vertices, largest norm error {err}", pts.len()), cmd);
    }
    for id in ["ray-x", "ray-y", "ray-z", "line-ker-f_x", "label-x", "label-y", "label-z", "label-ker_f_x"] {
        if !a.contains(&format!(r#"id="{id}""#)) {
            run.fail(0, format!("missing element {id}"), cmd);
        }
    }
}

/// Runs a suite. `cases` overrides the default case count.
pub fn run_suite(name: &str, seed: u64, cases: Option<usize>, tol: &Tolerances) -> Result<SuiteResult, UnknownSuite> {
    let default = SUITES.iter().find(|s| s.0 == name).ok_or_else(|| UnknownSuite(name.into()))?.1;
    let cases = cases.unwrap_or(default);
    let suite: fn(u64, usize, &Tolerances, &mut Run) = match name {
        "james-equivalence" => james_equivalence,
        "hilbert-symmetry" => hilbert_symmetry,
        "l1-no-left-symmetric" => l1_no_left_symmetric,
        "right-additivity" => right_additivity,
        "kernel-lemma" => kernel_lemma,
        "daop-injectivity" => daop_injectivity,
        "daop-closed-form" => daop_closed_form,
        "right-symmetry-witness" => right_symmetry_witnesses,
        "claor-attainment" => claor_attainment,
        "hilbert-characterization" => hilbert_characterization,
        _ => figure_one,
    };
    let start = Instant::now();
    let mut run = Run::new();
    suite(seed, cases, tol, &mut run);
    Ok(SuiteResult {
        suite: name.into(),
        seed,
        cases,
        failures: run.failures,
        summary: run.summary,
        wall_time_secs: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_an_error() {
        assert_eq!(run_suite("nope", 0, None, &Tolerances::default()), Err(UnknownSuite("nope".into())));
    }

    #[test]
    fn oracle_for_the_diagonal() {
        assert!((diagonal_daop_oracle(100_000) - 0.6).abs() < 1e-9);
    }

    #[test]
    fn small_runs_are_deterministic() {
        let tol = Tolerances::default();
        let a = run_suite("james-equivalence", 3, Some(50), &tol).unwrap();
        let b = run_suite("james-equivalence", 3, Some(50), &tol).unwrap();
        assert!(a.passed());
        assert_eq!(a.summary, b.summary);
    }

    #[test]
    fn generators_have_the_requested_rank() {
        let tol = Tolerances::default();
        let s = NormSpec::lp(2.0, 3).unwrap();
        for r in 1..=3 {
            assert_eq!(operator_of_rank(&mut stream(1, r as u64), &s, r).rank(&tol), r);
        }
        let t = well_conditioned_operator(&mut stream(1, 9), &s);
        assert!(lower_norm(&t, &tol).value >= 1.0 - 1e-9);
    }
}
