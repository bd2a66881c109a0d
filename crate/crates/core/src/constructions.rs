//! Explicit counterexample operators and the probes that drive them.
//!
//! Every construction records the ingredients it used and a list of numeric
//! facts that certify the claimed orthogonality relations. The facts can be
//! recomputed from scratch with [`WitnessOperator::recheck`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{distance_to_span, gram_schmidt, Matrix};
use crate::operators::{
    bj_orthogonal_operators, is_smooth_operator, kernel, operator_norm, pencil_min, Operator,
};
use crate::orthogonality::orthogonal_complement_sample;
use crate::sampling;
use crate::search;
use crate::spaces::NormSpec;
use crate::supsearch::{self, Candidate, Objective};
use crate::symmetry::{violation, DefectReport};
use crate::tolerance::Tolerances;
use crate::vector::{Functional, Vector};

/// Direction of the comparison a fact makes against its tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    AtMost,
    AtLeast,
}

/// One numerically re-checked claim.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifiedFact {
    pub claim: String,
    pub value: f64,
    pub tolerance: f64,
    pub bound: Bound,
    pub passed: bool,
}

impl VerifiedFact {
    fn at_most(claim: &str, value: f64, tolerance: f64) -> Self {
        Self { claim: claim.into(), value, tolerance, bound: Bound::AtMost, passed: value <= tolerance }
    }

    fn at_least(claim: &str, value: f64, tolerance: f64) -> Self {
        Self { claim: claim.into(), value, tolerance, bound: Bound::AtLeast, passed: value >= tolerance }
    }
}

/// Ingredients of a rank-one construction `A(v) = f(v) w`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionTrace {
    /// The unit vector the functional supports (`y` or `z`).
    pub anchor: Vector,
    pub functional: Functional,
    pub target: Vector,
    /// The scalar `a` with `a Tz + Tx0 ⊥ Tz`, for right-symmetry witnesses.
    pub scalar: Option<f64>,
    pub base_point: Option<Vector>,
    /// The complement direction `y0` with `x0 ⊥ y0`.
    pub complement_direction: Option<Vector>,
    /// Number of complement directions tried, including the successful one.
    pub attempts: usize,
}

/// A constructed operator with its trace and verification record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessOperator {
    pub operator: Operator,
    pub trace: ConstructionTrace,
    pub verification: Vec<VerifiedFact>,
    /// The operator shown not to be right-symmetric, when there is one.
    pub reference: Option<Operator>,
}

impl WitnessOperator {
    pub fn all_passed(&self) -> bool {
        self.verification.iter().all(|f| f.passed)
    }

    /// Recomputes the verification record under the given tolerances.
    pub fn recheck(&self, tol: &Tolerances) -> Vec<VerifiedFact> {
        let mut facts = rank_one_facts(&self.operator, &self.trace.anchor, &self.trace.target, tol);
        if let Some(t) = &self.reference {
            facts.extend(witness_facts(&self.operator, t, &self.trace.anchor, tol));
        }
        facts
    }
}

fn rank_one_facts(a: &Operator, anchor: &Vector, w: &Vector, tol: &Tolerances) -> Vec<VerifiedFact> {
    let norm_a = operator_norm(a, tol).value;
    let norm_w = a.codomain().norm_of(w.as_slice());
    let image = a.image_norm(anchor).unwrap_or(0.0);
    let basis = kernel(a, tol);
    let leak = basis.iter().map(|h| a.matrix().apply(h).max_abs()).fold(0.0, f64::max);
    let orth = basis
        .iter()
        .map(|h| violation(a.domain(), anchor, h, tol).unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max);
    vec![
        VerifiedFact::at_most("operator norm equals target norm", (norm_a - norm_w).abs(), 1e-8 * (1.0 + norm_w)),
        VerifiedFact::at_most("anchor attains the operator norm", norm_a - image, tol.tol_attain * norm_a),
        VerifiedFact::at_most("kernel basis is annihilated", leak, tol.tol_exact * (1.0 + norm_w)),
        VerifiedFact::at_most("anchor is orthogonal to the kernel", orth, tol.tol_orth),
    ]
}

fn witness_facts(a: &Operator, t: &Operator, z: &Vector, tol: &Tolerances) -> Vec<VerifiedFact> {
    let az = a.matrix().apply(z);
    let tz = t.matrix().apply(z);
    let local = violation(t.codomain(), &az, &tz, tol).unwrap_or(f64::INFINITY);
    let norm_a = operator_norm(a, tol).value;
    let norm_t = operator_norm(t, tol).value;
    let (a_pencil, _) = pencil_min(a, t, tol);
    let (t_pencil, _) = pencil_min(t, a, tol);
    vec![
        VerifiedFact::at_most("Az is orthogonal to Tz", local, tol.tol_orth),
        VerifiedFact::at_most("A is orthogonal to T (pencil deficit)", norm_a - a_pencil, tol.tol_oporth * norm_a),
        VerifiedFact::at_least("T is not orthogonal to A (pencil gap)", norm_t - t_pencil, tol.witness_margin),
    ]
}

fn unit_check(space: &NormSpec, y: &Vector) -> Result<()> {
    space.check_dim(y)?;
    let n = space.norm_of(y.as_slice());
    if (n - 1.0).abs() > 1e-9 {
        return Err(Error::NotUnitVector { norm: n });
    }
    Ok(())
}

/// The supporting functional of `y` used by a rank-one construction.
fn anchor_functional(space: &NormSpec, y: &Vector, vertex: Option<Functional>, tol: &Tolerances) -> Result<Functional> {
    match vertex {
        Some(f) => {
            space.check_dim(&f.coords)?;
            let dual = space.dual_norm_of(f.coords.as_slice());
            if (dual - 1.0).abs() > tol.tol_active || (f.apply(y) - 1.0).abs() > tol.tol_active {
                return Err(Error::NotSupporting);
            }
            Ok(Functional { coords: f.coords, dual_norm_value: dual })
        }
        None => {
            let support = space.dual_vertices(y, tol)?;
            if !support.is_singleton() {
                return Err(Error::NotSmooth);
            }
            Ok(support.vertices[0].clone())
        }
    }
}

/// The rank-one operator `A(v) = f(v) w` for a supporting functional `f` of
/// the unit vector `y`.
///
/// When `y` is not smooth a vertex of `J(y)` must be supplied. The result
/// records that `|A| = |w|`, that `y` attains the norm, and that `y` is
/// orthogonal to the kernel of `A`.
pub fn rank_one_through(
    y: &Vector,
    domain: &NormSpec,
    codomain: &NormSpec,
    w: &Vector,
    vertex: Option<Functional>,
    tol: &Tolerances,
) -> Result<WitnessOperator> {
    unit_check(domain, y)?;
    codomain.check_dim(w)?;
    if w.is_zero() {
        return Err(Error::ZeroTarget);
    }
    let f = anchor_functional(domain, y, vertex, tol)?;
    let operator = Operator::new(Matrix::outer(w, &f.coords), domain.clone(), codomain.clone())?;
    let verification = rank_one_facts(&operator, y, w, tol);
    Ok(WitnessOperator {
        operator,
        trace: ConstructionTrace {
            anchor: y.clone(),
            functional: f,
            target: w.clone(),
            scalar: None,
            base_point: None,
            complement_direction: None,
            attempts: 1,
        },
        verification,
        reference: None,
    })
}

fn sin2(u: &Vector, v: &Vector) -> f64 {
    let uu = u.dot(u);
    let vv = v.dot(v);
    if uu == 0.0 || vv == 0.0 {
        return 0.0;
    }
    (1.0 - u.dot(v).powi(2) / (uu * vv)).max(0.0)
}

/// Complement directions of `x0`, both signs, ordered by decreasing
/// independence of `Ty` from `Tx0`.
fn complement_candidates(t: &Operator, x0: &Vector, budget: usize, seed: u64, tol: &Tolerances) -> Result<Vec<(Vector, f64)>> {
    let count = if t.domain().dim() == 2 { 1 } else { budget.max(1) };
    let tx0 = t.matrix().apply(x0);
    let mut out: Vec<(Vector, f64)> = Vec::new();
    for y in orthogonal_complement_sample(t.domain(), x0, count, seed, tol)? {
        let s = sin2(&tx0, &t.matrix().apply(&y));
        for c in [y.clone(), y.scaled(-1.0)] {
            if s > 1e-12 && !out.iter().any(|(o, _)| o.dist2(&c) < tol.tol_cluster) {
                out.push((c, s));
            }
        }
    }
    out.sort_by(|a, b| b.1.total_cmp(&a.1));
    Ok(out)
}

/// One pass of the construction for a fixed complement direction `y0`.
fn witness_from(t: &Operator, x0: &Vector, y0: &Vector, attempts: usize, tol: &Tolerances) -> Result<WitnessOperator> {
    let dom = t.domain();
    let cod = t.codomain();
    let shifted = x0.axpy(0.5, y0);
    let shift_norm = dom.norm_of(shifted.as_slice());
    let z = shifted.scaled(1.0 / shift_norm);
    let tz = t.matrix().apply(&z);
    let tx0 = t.matrix().apply(x0);
    if tz.is_zero() {
        return Err(Error::DegenerateStep("Tz vanishes".into()));
    }

    let a = search::stationary_point(cod, tx0.as_slice(), tz.as_slice(), tol.tol_active);
    let guard = tol.tol_attain * (1.0 + shift_norm);
    if a.abs() <= guard {
        return Err(Error::DegenerateStep(format!("a = {a:e} is zero within tolerance")));
    }
    if (a + shift_norm).abs() <= guard {
        return Err(Error::DegenerateStep(format!("a = {a} equals -|x0 + y0/2|")));
    }
    let w = tx0.axpy(a, &tz);
    if !cod.is_smooth_point(&w, tol)?.smooth {
        return Err(Error::DegenerateStep("the target a Tz + Tx0 is not a smooth point".into()));
    }
    let base = rank_one_through(&z, dom, cod, &w, None, tol).map_err(|e| match e {
        Error::NotSmooth => Error::DegenerateStep("z is not a smooth point".into()),
        other => other,
    })?;

    let mut verification = base.verification;
    verification.extend(witness_facts(&base.operator, t, &z, tol));
    if let Some(f) = verification.iter().find(|f| !f.passed) {
        return Err(Error::DegenerateStep(format!("verification failed: {}", f.claim)));
    }
    Ok(WitnessOperator {
        operator: base.operator,
        trace: ConstructionTrace {
            scalar: Some(a),
            base_point: Some(x0.clone()),
            complement_direction: Some(y0.clone()),
            attempts,
            ..base.trace
        },
        verification,
        reference: Some(t.clone()),
    })
}

/// Builds a rank-one `A` with `A ⊥ T` and `T ⊥̸ A`, certifying that the smooth
/// operator `T` of rank at least two is not right-symmetric.
///
/// Complement directions are tried in order of decreasing independence of
/// `Ty0` from `Tx0`; a degenerate step moves on to the next direction, up to
/// `max_retries` further attempts.
pub fn right_symmetry_witness(t: &Operator, budget: usize, seed: u64, tol: &Tolerances) -> Result<WitnessOperator> {
    let diag = is_smooth_operator(t, tol)?;
    let x0 = match (diag.smooth, diag.representative) {
        (true, Some(x0)) => x0,
        _ => return Err(Error::NotSmoothOperator(diag.reason)),
    };
    let rank = t.rank(tol);
    if rank < 2 {
        return Err(Error::RankDeficient { rank });
    }
    let candidates = complement_candidates(t, &x0, budget, seed, tol)?;
    let mut last = Error::DegenerateStep("no complement direction with independent image".into());
    for (i, (y0, _)) in candidates.iter().take(tol.max_retries + 1).enumerate() {
        match witness_from(t, &x0, y0, i + 1, tol) {
            Ok(w) => return Ok(w),
            Err(e @ Error::DegenerateStep(_)) => last = e,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

/// Outcome of [`kernel_orthogonality_probe`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelProbeReport {
    /// `T(v) = f(v) x0` with `f` the supporting functional of `x0`.
    pub operator: Operator,
    pub kernel_basis: Vec<Vector>,
    /// Largest violation of `h ⊥ x0` over sampled kernel vectors `h`.
    pub report: DefectReport,
    pub kernel_orthogonal: bool,
}

struct KernelObjective<'a> {
    space: &'a NormSpec,
    x0: &'a Vector,
    basis: &'a [Vector],
    seed: u64,
    tol: &'a Tolerances,
}

impl KernelObjective<'_> {
    fn point(&self, params: &[f64]) -> Option<Vector> {
        let mut h = Vector::zeros(self.space.dim());
        for (c, b) in params.iter().zip(self.basis) {
            h = h.axpy(*c, b);
        }
        self.space.normalize(&h)
    }
}

impl Objective for KernelObjective<'_> {
    fn initial(&self, k: u64) -> Vec<f64> {
        sampling::gaussian(&mut sampling::stream(self.seed, k), self.basis.len())
    }

    fn evaluate(&self, params: &[f64]) -> Option<Candidate> {
        let h = self.point(params)?;
        let value = violation(self.space, &h, self.x0, self.tol).ok()?;
        Some(Candidate { params: params.to_vec(), x: h, y: self.x0.clone(), value })
    }

    fn verify(&self, x: &Vector, y: &Vector) -> Option<f64> {
        violation(self.space, x, y, self.tol).ok()
    }
}

/// Builds the projection-like operator `T(v) = f(v) x0` and measures how far
/// its kernel `H_x0` is from being orthogonal to `x0`.
pub fn kernel_orthogonality_probe(
    space: &NormSpec,
    x0: &Vector,
    budget: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<KernelProbeReport> {
    let base = rank_one_through(x0, space, space, x0, None, tol)?;
    let operator = base.operator;
    let kernel_basis = kernel(&operator, tol);
    let obj = KernelObjective { space, x0, basis: &kernel_basis, seed, tol };
    let report = if kernel_basis.is_empty() {
        DefectReport::zero(budget)
    } else {
        supsearch::run(&obj, budget, tol)
    };
    let kernel_orthogonal = report.defect <= tol.tol_defect;
    Ok(KernelProbeReport { operator, kernel_basis, report, kernel_orthogonal })
}

/// Which argument, if any, predicts that `T` is not right-symmetric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Prediction {
    /// Rank at least two: a rank-one witness `A` is constructed.
    RankOneWitness,
    /// Rank one with `Tx0` outside the kernel: the identity perturbation.
    IdentityPerturbation,
    NoPrediction,
}

/// Outcome of [`eigenvector_symmetry_probe`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenProbeReport {
    pub x0: Vector,
    pub eigenvector: bool,
    pub eigenvalue: Option<f64>,
    pub eigen_residual: Option<f64>,
    pub image_in_kernel: bool,
    pub kernel_distance: Option<f64>,
    pub rank: usize,
    pub prediction: Prediction,
    pub witness: Option<WitnessOperator>,
    pub witness_error: Option<String>,
    /// Links of the identity-perturbation argument, in order.
    pub identity_chain: Vec<VerifiedFact>,
    /// First link of the chain that fails, if any.
    pub failed_link: Option<String>,
}

fn orth_fact(space: &NormSpec, claim: &str, x: &Vector, y: &Vector, tol: &Tolerances) -> VerifiedFact {
    let v = if y.is_zero() { 0.0 } else { violation(space, x, y, tol).unwrap_or(f64::INFINITY) };
    VerifiedFact::at_most(claim, v, tol.tol_orth)
}

fn identity_chain(t: &Operator, x0: &Vector, tol: &Tolerances) -> Result<Vec<VerifiedFact>> {
    let id = Operator::identity(t.domain().clone())?;
    let i_t = bj_orthogonal_operators(&id, t, tol)?;
    let t_i = bj_orthogonal_operators(t, &id, tol)?;
    let space = t.domain();
    let tx0 = t.matrix().apply(x0);
    let ttx0 = t.matrix().apply(&tx0);
    let norm_t = t_i.norm_t;
    Ok(vec![
        VerifiedFact::at_most("I is orthogonal to T", i_t.norm_t - i_t.pencil_min, tol.tol_oporth * i_t.norm_t),
        VerifiedFact::at_most("T is orthogonal to I", norm_t - t_i.pencil_min, tol.tol_oporth * norm_t),
        orth_fact(space, "Tx0 is orthogonal to x0", &tx0, x0, tol),
        orth_fact(space, "x0 is orthogonal to Tx0", x0, &tx0, tol),
        orth_fact(space, "Tx0 is orthogonal to T(Tx0)", &tx0, &ttx0, tol),
    ])
}

/// Checks whether the attainment direction `x0` of a smooth operator is an
/// eigenvector, whether `Tx0` lies in the kernel, and runs the argument that
/// applies: a rank-one witness when the rank is at least two, the identity
/// perturbation chain for rank one with `Tx0` outside the kernel.
pub fn eigenvector_symmetry_probe(t: &Operator, budget: usize, seed: u64, tol: &Tolerances) -> Result<EigenProbeReport> {
    let diag = is_smooth_operator(t, tol)?;
    let x0 = match (diag.smooth, diag.representative) {
        (true, Some(x0)) => x0,
        _ => return Err(Error::NotSmoothOperator(diag.reason)),
    };
    let square = t.domain() == t.codomain();
    let tx0 = t.matrix().apply(&x0);
    let rank = t.rank(tol);

    let (mut eigenvalue, mut eigen_residual, mut kernel_distance) = (None, None, None);
    let mut eigenvector = false;
    let mut image_in_kernel = false;
    if square {
        let mu = tx0.dot(&x0) / x0.dot(&x0);
        let res = t.domain().norm_of(tx0.axpy(-mu, &x0).as_slice());
        eigenvector = res <= tol.tol_eigen * t.codomain().norm_of(tx0.as_slice());
        eigenvalue = Some(mu);
        eigen_residual = Some(res);
        let basis = gram_schmidt(&kernel(t, tol));
        let d = distance_to_span(&tx0, &basis) / tx0.norm2();
        image_in_kernel = d <= tol.tol_eigen;
        kernel_distance = Some(d);
    }

    let prediction = if rank >= 2 && (eigenvector || t.domain().is_smooth_space()) {
        Prediction::RankOneWitness
    } else if rank == 1 && square && t.domain().dim() >= 2 && !image_in_kernel {
        Prediction::IdentityPerturbation
    } else {
        Prediction::NoPrediction
    };

    let mut witness = None;
    let mut witness_error = None;
    let mut chain = Vec::new();
    match prediction {
        Prediction::RankOneWitness => match right_symmetry_witness(t, budget, seed, tol) {
            Ok(w) => witness = Some(w),
            Err(e) => witness_error = Some(e.to_string()),
        },
        Prediction::IdentityPerturbation => chain = identity_chain(t, &x0, tol)?,
        Prediction::NoPrediction => {}
    }
    let failed_link = chain.iter().find(|f| !f.passed).map(|f| f.claim.clone());
    Ok(EigenProbeReport {
        x0,
        eigenvector,
        eigenvalue,
        eigen_residual,
        image_in_kernel,
        kernel_distance,
        rank,
        prediction,
        witness,
        witness_error,
        identity_chain: chain,
        failed_link,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orthogonality::is_bj_orthogonal;

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec()).unwrap()
    }

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn halved() -> Tolerances {
        let t = tol();
        Tolerances {
            tol_active: t.tol_active / 2.0,
            tol_orth: t.tol_orth / 2.0,
            tol_attain: t.tol_attain / 2.0,
            tol_oporth: t.tol_oporth / 2.0,
            ..t
        }
    }

    #[test]
    fn rank_one_euclidean() {
        let s = NormSpec::lp(2.0, 2).unwrap();
        let w = rank_one_through(&v(&[1.0, 0.0]), &s, &s, &v(&[0.0, 1.0]), None, &tol()).unwrap();
        assert!(w.all_passed());
        assert_eq!(w.operator.matrix(), &Matrix::from_rows(&[[0.0, 0.0], [1.0, 0.0]]).unwrap());
        let set = crate::operators::attainment_set(&w.operator, &tol()).unwrap();
        assert_eq!(set.representatives.len(), 1);
        assert!(set.representatives[0].dist2(&v(&[1.0, 0.0])) < 1e-6);
    }

    #[test]
    fn rank_one_reproduces_max_norm_example() {
        let s = NormSpec::l_inf(2).unwrap();
        let y = v(&[1.0, 0.0]);
        let w = rank_one_through(&y, &s, &s, &v(&[1.0, 1.0]), None, &tol()).unwrap();
        assert!(w.all_passed());
        assert_eq!(w.operator.matrix(), &Matrix::from_rows(&[[1.0, 0.0], [1.0, 0.0]]).unwrap());
    }

    #[test]
    fn rank_one_needs_vertex_at_corners() {
        let s = NormSpec::l_inf(2).unwrap();
        let y = v(&[1.0, 1.0]);
        let w = v(&[1.0, 0.0]);
        assert_eq!(rank_one_through(&y, &s, &s, &w, None, &tol()), Err(Error::NotSmooth));
        let f = Functional { coords: v(&[1.0, 0.0]), dual_norm_value: 1.0 };
        let a = rank_one_through(&y, &s, &s, &w, Some(f), &tol()).unwrap();
        assert!(a.all_passed());
        let bad = Functional { coords: v(&[0.5, 0.0]), dual_norm_value: 0.5 };
        assert_eq!(rank_one_through(&y, &s, &s, &w, Some(bad), &tol()), Err(Error::NotSupporting));
        assert_eq!(
            rank_one_through(&y, &s, &s, &v(&[0.0, 0.0]), None, &tol()),
            Err(Error::ZeroTarget)
        );
        assert!(matches!(
            rank_one_through(&v(&[2.0, 0.0]), &s, &s, &w, None, &tol()),
            Err(Error::NotUnitVector { .. })
        ));
    }

    #[test]
    fn rank_one_in_l3_verifies_with_own_tools() {
        let s = NormSpec::lp(3.0, 3).unwrap();
        let y = s.normalize(&v(&[0.4, -1.1, 0.7])).unwrap();
        let w = rank_one_through(&y, &s, &s, &y, None, &tol()).unwrap();
        assert!(w.all_passed());
        assert!(crate::operators::attains_norm(&w.operator, &y, &tol()).unwrap());
        for h in kernel(&w.operator, &tol()) {
            assert!(is_bj_orthogonal(&s, &y, &h, &tol()).unwrap().bj_orthogonal);
        }
    }

    #[test]
    fn witness_for_diagonal_in_l3() {
        let s = NormSpec::lp(3.0, 2).unwrap();
        let t = Operator::on(Matrix::diag(&[2.0, 1.0]), s).unwrap();
        let w = right_symmetry_witness(&t, 64, 1, &tol()).unwrap();
        assert!(w.all_passed());
        let gap = w.verification.iter().find(|f| f.bound == Bound::AtLeast).unwrap();
        assert!(gap.value >= 1e-3);
        assert!(w.recheck(&halved()).iter().all(|f| f.passed));
    }

    #[test]
    fn witness_in_hilbert_space_matches_inner_products() {
        let s = NormSpec::lp(2.0, 3).unwrap();
        let t = Operator::on(Matrix::diag(&[3.0, 2.0, 1.0]), s).unwrap();
        let w = right_symmetry_witness(&t, 64, 1, &tol()).unwrap();
        assert!(w.all_passed());
        let z = &w.trace.anchor;
        let az = w.operator.matrix().apply(z);
        let tz = t.matrix().apply(z);
        assert!(az.dot(&tz).abs() <= 1e-8 * az.norm2() * tz.norm2());
        let x0 = w.trace.base_point.as_ref().unwrap();
        let ax0 = w.operator.matrix().apply(x0);
        let tx0 = t.matrix().apply(x0);
        assert!(ax0.dot(&tx0).abs() > 1e-3);
    }

    #[test]
    fn witness_rejects_rank_one_and_non_smooth() {
        let s = NormSpec::lp(3.0, 2).unwrap();
        let r1 = Operator::on(Matrix::from_rows(&[[1.0, 2.0], [0.5, 1.0]]).unwrap(), s.clone()).unwrap();
        assert_eq!(right_symmetry_witness(&r1, 16, 1, &tol()), Err(Error::RankDeficient { rank: 1 }));
        let id = Operator::identity(NormSpec::lp(2.0, 2).unwrap()).unwrap();
        assert!(matches!(right_symmetry_witness(&id, 16, 1, &tol()), Err(Error::NotSmoothOperator(_))));
    }

    #[test]
    fn kernel_probe_examples() {
        let t = tol();
        let l2 = NormSpec::lp(2.0, 3).unwrap();
        let x0 = l2.normalize(&v(&[1.0, -2.0, 0.5])).unwrap();
        assert!(kernel_orthogonality_probe(&l2, &x0, 64, 1, &t).unwrap().kernel_orthogonal);

        let l4 = NormSpec::lp(4.0, 3).unwrap();
        let e1 = v(&[1.0, 0.0, 0.0]);
        assert!(kernel_orthogonality_probe(&l4, &e1, 64, 1, &t).unwrap().kernel_orthogonal);

        let diag = l4.normalize(&v(&[1.0, 1.0, 1.0])).unwrap();
        let r = kernel_orthogonality_probe(&l4, &diag, 64, 1, &t).unwrap();
        assert!(!r.kernel_orthogonal);
        // Scan of the kernel circle spanned by (1,-1,0) and (1,1,-2).
        let b1 = v(&[1.0, -1.0, 0.0]);
        let b2 = v(&[1.0, 1.0, -2.0]);
        let scan = (0..20_000)
            .map(|k| std::f64::consts::PI * k as f64 / 20_000.0)
            .map(|a| {
                let h = b1.scaled(a.cos()).axpy(a.sin(), &b2);
                violation(&l4, &h, &diag, &t).unwrap()
            })
            .fold(0.0, f64::max);
        assert!(scan > 0.0);
        assert!(r.report.defect <= scan + 1e-9);
        assert!(r.report.defect >= scan - 1e-4, "{} vs {scan}", r.report.defect);
    }

    #[test]
    fn eigen_probe_diagonal() {
        let s = NormSpec::lp(3.0, 2).unwrap();
        let t = Operator::on(Matrix::diag(&[2.0, 1.0]), s).unwrap();
        let r = eigenvector_symmetry_probe(&t, 64, 1, &tol()).unwrap();
        assert!(r.eigenvector);
        assert_eq!(r.prediction, Prediction::RankOneWitness);
        assert!(r.witness.unwrap().all_passed());
    }

    #[test]
    fn eigen_probe_rank_one() {
        let s = NormSpec::lp(3.0, 2).unwrap();
        // Tx0 lies in the kernel: T = e1 e2^T, M_T = {±e2}, T e2 = e1, T e1 = 0.
        let nil = Operator::on(Matrix::from_rows(&[[0.0, 1.0], [0.0, 0.0]]).unwrap(), s.clone()).unwrap();
        let r = eigenvector_symmetry_probe(&nil, 16, 1, &tol()).unwrap();
        assert!(r.image_in_kernel);
        assert_eq!(r.prediction, Prediction::NoPrediction);

        let x0 = s.normalize(&v(&[1.0, 0.6])).unwrap();
        let proj = rank_one_through(&x0, &s, &s, &x0, None, &tol()).unwrap().operator;
        let r = eigenvector_symmetry_probe(&proj, 16, 1, &tol()).unwrap();
        assert!(!r.image_in_kernel);
        assert_eq!(r.prediction, Prediction::IdentityPerturbation);
        assert!(r.identity_chain[0].passed);
        assert_eq!(r.failed_link.as_deref(), Some("T is orthogonal to I"));
    }
}
