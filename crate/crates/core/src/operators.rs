//! Linear operators between finite-dimensional normed spaces: operator norm
//! with certificate, norm-attainment set, lower norm, kernel, Birkhoff–James
//! orthogonality of operators, smoothness, and the local and global
//! approximate orthogonality preserving/reversing constants.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::orthogonality::{complement_params, complement_point, is_bj_orthogonal};
use crate::sampling::{self, SphereSequence};
use crate::search;
use crate::spaces::NormSpec;
use crate::supsearch::{self, Candidate, Objective};
use crate::symmetry::{violation, violation_with, DefectReport, DefectWitness};
use crate::tolerance::Tolerances;
use crate::vector::Vector;

/// Largest domain or codomain dimension accepted for operators.
pub const MAX_OPERATOR_DIM: usize = 4;

/// A matrix with its domain and codomain norms (`rows = dim Y`, `cols = dim X`).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "OperatorJson", into = "OperatorJson")]
pub struct Operator {
    matrix: Matrix,
    domain: NormSpec,
    codomain: NormSpec,
    norm_cache: OnceLock<(usize, NormCertificate)>,
}

impl PartialEq for Operator {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix && self.domain == other.domain && self.codomain == other.codomain
    }
}

/// Wire form of [`Operator`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OperatorJson {
    pub matrix: Matrix,
    pub domain: NormSpec,
    pub codomain: NormSpec,
}

impl TryFrom<OperatorJson> for Operator {
    type Error = Error;
    fn try_from(j: OperatorJson) -> Result<Self> {
        Operator::new(j.matrix, j.domain, j.codomain)
    }
}

impl From<Operator> for OperatorJson {
    fn from(op: Operator) -> Self {
        OperatorJson { matrix: op.matrix, domain: op.domain, codomain: op.codomain }
    }
}

/// How an operator norm was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormMethod {
    ClosedForm,
    GridRefine,
}

/// Operator norm together with a unit vector attaining it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormCertificate {
    pub value: f64,
    pub maximizer: Vector,
    pub method: NormMethod,
    pub grid_resolution: usize,
}

/// Norm-attainment set `M_T`, modulo sign.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttainmentSet {
    pub representatives: Vec<Vector>,
    pub tol_cluster: f64,
    /// More than a tenth of the sphere probes attain the norm.
    pub non_discrete: bool,
    pub norm: f64,
}

/// Lower norm `[T] = inf { |Tx| : |x| = 1 }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerNorm {
    /// Smallest `|Tx|` found; an upper bound for `[T]`, exact when `T` is singular.
    pub value: f64,
    /// Rigorous lower bound from the Euclidean smallest singular value and the
    /// norm-equivalence constants.
    pub certified_lower: f64,
    pub minimizer: Vector,
    pub kernel_dim: usize,
}

/// Both tests for `T ⊥ A` in operator norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorOrthReport {
    /// Verdict of the direct test `min_l |T + l A| >= |T| - tol`.
    pub orthogonal: bool,
    pub norm_t: f64,
    pub pencil_min: f64,
    pub pencil_argmin: f64,
    /// Some attainment representative `x` of `T` has `Tx ⊥ Ax`.
    pub attainment_test: bool,
    /// The representative passing the attainment test.
    pub attainment_point: Option<Vector>,
    pub agree: bool,
}

/// Outcome of the smoothness test for an operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoothnessDiagnosis {
    pub smooth: bool,
    pub representative: Option<Vector>,
    pub representatives: usize,
    pub non_discrete: bool,
    pub image_smooth: Option<bool>,
    pub reason: String,
}

impl Operator {
    pub fn new(matrix: Matrix, domain: NormSpec, codomain: NormSpec) -> Result<Self> {
        if matrix.cols() != domain.dim() {
            return Err(Error::DimensionMismatch { expected: domain.dim(), found: matrix.cols() });
        }
        if matrix.rows() != codomain.dim() {
            return Err(Error::DimensionMismatch { expected: codomain.dim(), found: matrix.rows() });
        }
        if domain.dim() > MAX_OPERATOR_DIM || codomain.dim() > MAX_OPERATOR_DIM {
            return Err(Error::InvalidOperator(format!(
                "operator dimensions are limited to {MAX_OPERATOR_DIM}"
            )));
        }
        Ok(Self { matrix, domain, codomain, norm_cache: OnceLock::new() })
    }

    /// Operator on one space.
    pub fn on(matrix: Matrix, space: NormSpec) -> Result<Self> {
        Self::new(matrix, space.clone(), space)
    }

    pub fn identity(space: NormSpec) -> Result<Self> {
        Self::on(Matrix::identity(space.dim()), space)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn domain(&self) -> &NormSpec {
        &self.domain
    }

    pub fn codomain(&self) -> &NormSpec {
        &self.codomain
    }

    pub fn apply(&self, x: &Vector) -> Result<Vector> {
        self.domain.check_dim(x)?;
        Ok(self.matrix.apply(x))
    }

    /// `|Tx|` in the codomain.
    pub fn image_norm(&self, x: &Vector) -> Result<f64> {
        self.domain.check_dim(x)?;
        Ok(self.codomain.norm_of(&self.matrix.apply_slice(x.as_slice())))
    }

    /// Operator with matrix `self + s * other` on the same spaces.
    pub fn axpy(&self, s: f64, other: &Operator) -> Result<Operator> {
        self.check_same_spaces(other)?;
        Operator::new(self.matrix.axpy(s, &other.matrix), self.domain.clone(), self.codomain.clone())
    }

    pub fn scaled(&self, s: f64) -> Operator {
        Operator {
            matrix: self.matrix.scaled(s),
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            norm_cache: OnceLock::new(),
        }
    }

    fn check_same_spaces(&self, other: &Operator) -> Result<()> {
        if self.matrix.rows() != other.matrix.rows() {
            return Err(Error::DimensionMismatch { expected: self.matrix.rows(), found: other.matrix.rows() });
        }
        if self.matrix.cols() != other.matrix.cols() {
            return Err(Error::DimensionMismatch { expected: self.matrix.cols(), found: other.matrix.cols() });
        }
        if self.domain != other.domain || self.codomain != other.codomain {
            return Err(Error::InvalidOperator("operators act between different spaces".into()));
        }
        Ok(())
    }

    /// Rank of the matrix under the kernel pivot threshold.
    pub fn rank(&self, tol: &Tolerances) -> usize {
        self.matrix.cols() - kernel(self, tol).len()
    }
}

// ---------------------------------------------------------------------------
// Sphere probes and local ascent

fn probe_cache() -> &'static Mutex<HashMap<String, Arc<Vec<Vector>>>> {
    static CACHE: OnceLock<Mutex<HashMap<String, Arc<Vec<Vector>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Unit vectors of `space` covering the sphere up to sign: a uniform angle grid
/// on the half circle in the plane, shifted Halton points plus the coordinate
/// axes otherwise.
pub(crate) fn probes(space: &NormSpec, count: usize) -> Arc<Vec<Vector>> {
    let key = format!("{space:?}|{count}");
    if let Some(p) = probe_cache().lock().expect("probe cache").get(&key) {
        return Arc::clone(p);
    }
    let n = space.dim();
    let pts: Vec<Vector> = match n {
        1 => vec![space.normalize(&Vector::basis(1, 0)).expect("nonzero")],
        2 => (0..count)
            .map(|k| {
                let t = std::f64::consts::PI * k as f64 / count as f64;
                space.normalize(&Vector::from_raw(vec![t.cos(), t.sin()])).expect("nonzero")
            })
            .collect(),
        _ => {
            let seq = SphereSequence::new(n, 0);
            (0..n)
                .map(|i| space.normalize(&Vector::basis(n, i)).expect("nonzero"))
                .chain((0..count as u64).map(|k| seq.unit_point(space, k)))
                .collect()
        }
    };
    let pts = Arc::new(pts);
    probe_cache().lock().expect("probe cache").insert(key, Arc::clone(&pts));
    pts
}

/// Monotone power-type ascent for `|Mx|`: `x <- argmax of M^T g` over the unit
/// ball, with `g` a supporting functional of `Mx`.
fn ascend(m: &Matrix, dom: &NormSpec, cod: &NormSpec, start: &Vector, tol_active: f64) -> (Vector, f64) {
    let mut x = start.clone();
    let mut val = cod.norm_of(&m.apply_slice(x.as_slice()));
    for _ in 0..2000 {
        let tx = m.apply_slice(x.as_slice());
        if tx.iter().all(|v| *v == 0.0) {
            break;
        }
        let support = cod.support_of(&tx, tol_active);
        let g = support.vertices[0].coords.as_slice();
        let h: Vec<f64> = (0..m.cols()).map(|j| (0..m.rows()).map(|i| m.get(i, j) * g[i]).sum()).collect();
        if h.iter().all(|v| *v == 0.0) {
            break;
        }
        let xn = dom.attainer_of(&h);
        let vn = cod.norm_of(&m.apply_slice(xn.as_slice()));
        if vn < val {
            break;
        }
        let moved = xn.dist2(&x).min(xn.dist2(&-&x));
        x = xn;
        val = vn;
        if moved <= 1e-13 {
            break;
        }
    }
    (x, val)
}

fn sign_dist(a: &Vector, b: &Vector) -> f64 {
    a.dist2(b).min(a.dist2(&-b))
}

/// Up to `k` well-separated probes among those with value at least `frac * max`.
fn leaders(points: &[Vector], values: &[f64], frac: f64, sep: f64, k: usize) -> Vec<usize> {
    let best = values.iter().cloned().fold(0.0, f64::max);
    let mut idx: Vec<usize> = (0..values.len()).filter(|&i| values[i] >= frac * best).collect();
    idx.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    let mut out: Vec<usize> = Vec::new();
    for i in idx {
        if out.iter().all(|&j| sign_dist(&points[i], &points[j]) > sep) {
            out.push(i);
            if out.len() == k {
                break;
            }
        }
    }
    out
}

fn grid_norm(m: &Matrix, dom: &NormSpec, cod: &NormSpec, tol: &Tolerances, warm: &[Vector]) -> (f64, Vector, usize) {
    let pts = probes(dom, tol.grid_for_dim(dom.dim()));
    let values: Vec<f64> = pts.iter().map(|p| cod.norm_of(&m.apply_slice(p.as_slice()))).collect();
    let mut best_val = -1.0;
    let mut best = pts[0].clone();
    let starts = leaders(&pts, &values, 0.9, 0.05, 8);
    for s in starts.iter().map(|&i| &pts[i]).chain(warm) {
        let (x, v) = ascend(m, dom, cod, s, tol.tol_active);
        if v > best_val {
            best_val = v;
            best = x;
        }
    }
    (best_val, best, pts.len())
}

/// Closed-form norm when one is available.
fn closed_form_norm(m: &Matrix, dom: &NormSpec, cod: &NormSpec) -> Option<(f64, Vector)> {
    if let Some(ext) = dom.extreme_points() {
        return ext
            .into_iter()
            .map(|e| (cod.norm_of(&m.apply_slice(e.as_slice())), e))
            .max_by(|a, b| a.0.total_cmp(&b.0));
    }
    if let Some(dual) = cod.dual_extreme_points() {
        let (_, g) = dual
            .iter()
            .map(|g| (dom.dual_norm_of(m.apply_transpose(g).as_slice()), g))
            .max_by(|a, b| a.0.total_cmp(&b.0))?;
        let x = dom.attainer_of(m.apply_transpose(g).as_slice());
        return Some((cod.norm_of(&m.apply_slice(x.as_slice())), x));
    }
    if dom.is_euclidean() && cod.is_euclidean() {
        let sx = dom.lp_scale()?;
        let sy = cod.lp_scale()?;
        let inv: Vec<f64> = sx.iter().map(|s| 1.0 / s).collect();
        let b = m.scale_rows(&sy).scale_columns(&inv);
        let svd = b.svd_jacobi();
        let v = &svd.right_vectors[0];
        let x = Vector::from_raw(v.iter().zip(&inv).map(|(a, s)| a * s).collect());
        let x = dom.normalize(&x)?;
        return Some((cod.norm_of(&m.apply_slice(x.as_slice())), x));
    }
    None
}

fn norm_certificate(m: &Matrix, dom: &NormSpec, cod: &NormSpec, tol: &Tolerances, warm: &[Vector]) -> NormCertificate {
    if let Some((value, maximizer)) = closed_form_norm(m, dom, cod) {
        return NormCertificate { value, maximizer, method: NormMethod::ClosedForm, grid_resolution: 0 };
    }
    let (value, maximizer, n) = grid_norm(m, dom, cod, tol, warm);
    NormCertificate { value, maximizer, method: NormMethod::GridRefine, grid_resolution: n }
}

/// `|T|` with a maximizing unit vector.
pub fn operator_norm(t: &Operator, tol: &Tolerances) -> NormCertificate {
    if let Some((grid, cert)) = t.norm_cache.get() {
        if *grid == tol.norm_grid {
            return cert.clone();
        }
    }
    let cert = norm_certificate(&t.matrix, &t.domain, &t.codomain, tol, &[]);
    let _ = t.norm_cache.set((tol.norm_grid, cert.clone()));
    cert
}

/// `|T|` by the sphere scan and ascent even when a closed form exists.
pub fn operator_norm_grid(t: &Operator, tol: &Tolerances) -> NormCertificate {
    let (value, maximizer, n) = grid_norm(&t.matrix, &t.domain, &t.codomain, tol, &[]);
    NormCertificate { value, maximizer, method: NormMethod::GridRefine, grid_resolution: n }
}

/// The attainment set `M_T` up to sign, clustered at `tol_cluster`.
pub fn attainment_set(t: &Operator, tol: &Tolerances) -> Result<AttainmentSet> {
    if t.matrix.is_zero() {
        return Err(Error::ZeroOperator);
    }
    let cert = operator_norm(t, tol);
    let norm = cert.value;
    let cut = norm - tol.tol_attain * norm;
    let pts = probes(&t.domain, tol.grid_for_dim(t.domain.dim()));
    let values: Vec<f64> =
        pts.iter().map(|p| t.codomain.norm_of(&t.matrix.apply_slice(p.as_slice()))).collect();
    let attaining: Vec<usize> = (0..pts.len()).filter(|&i| values[i] >= cut).collect();
    let non_discrete = attaining.len() * 10 > pts.len();

    let mut found: Vec<Vector> = vec![cert.maximizer.sign_reduced()];
    if non_discrete {
        let stride = (attaining.len() / 64).max(1);
        found.extend(attaining.iter().step_by(stride).map(|&i| pts[i].sign_reduced()));
    } else {
        for i in leaders(&pts, &values, 0.98, 0.05, 64) {
            let (x, v) = ascend(&t.matrix, &t.domain, &t.codomain, &pts[i], tol.tol_active);
            if v >= cut {
                found.push(x.sign_reduced());
            }
        }
    }
    let mut reps: Vec<Vector> = Vec::new();
    for x in found {
        if reps.iter().all(|r| sign_dist(r, &x) > tol.tol_cluster) {
            reps.push(x);
        }
        if reps.len() == 64 {
            break;
        }
    }
    Ok(AttainmentSet { representatives: reps, tol_cluster: tol.tol_cluster, non_discrete, norm })
}

/// Orthonormal Euclidean basis of `Ker T`.
pub fn kernel(t: &Operator, tol: &Tolerances) -> Vec<Vector> {
    t.matrix.null_space(tol.tol_pivot)
}

/// Lower norm `[T]`.
pub fn lower_norm(t: &Operator, tol: &Tolerances) -> LowerNorm {
    let ker = kernel(t, tol);
    let (lo_y, _) = t.codomain.equivalence_constants();
    let (_, hi_x) = t.domain.equivalence_constants();
    let svd = t.matrix.svd_jacobi();
    let sigma_min = if t.matrix.rows() < t.matrix.cols() {
        0.0
    } else {
        *svd.singular_values.last().expect("nonempty")
    };
    if let Some(h) = ker.first() {
        let minimizer = t.domain.normalize(h).expect("kernel vectors are nonzero");
        return LowerNorm { value: 0.0, certified_lower: 0.0, minimizer, kernel_dim: ker.len() };
    }
    let certified_lower = lo_y * sigma_min / hi_x;

    let dom = &t.domain;
    let cod = &t.codomain;
    let img = |x: &Vector| cod.norm_of(&t.matrix.apply_slice(x.as_slice()));
    let mut best: (f64, Vector) = if dom.is_euclidean() && cod.is_euclidean() {
        let sx = dom.lp_scale().expect("lp family");
        let sy = cod.lp_scale().expect("lp family");
        let inv: Vec<f64> = sx.iter().map(|s| 1.0 / s).collect();
        let b = t.matrix.scale_rows(&sy).scale_columns(&inv);
        let svd = b.svd_jacobi();
        let v = svd.right_vectors.last().expect("nonempty");
        let x = dom
            .normalize(&Vector::from_raw(v.iter().zip(&inv).map(|(a, s)| a * s).collect()))
            .expect("nonzero");
        (img(&x), x)
    } else {
        let pts = probes(dom, tol.grid_for_dim(dom.dim()));
        let values: Vec<f64> = pts.iter().map(img).collect();
        let mut order: Vec<usize> = (0..pts.len()).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let mut best = (values[order[0]], pts[order[0]].clone());
        for &i in order.iter().take(4) {
            let (x, v) = descend(t, &pts[i]);
            if v < best.0 {
                best = (v, x);
            }
        }
        best
    };
    if t.matrix.rows() == t.matrix.cols() {
        if let Some(inv) = t.matrix.inverse(tol.tol_pivot) {
            if let Ok(op) = Operator::new(inv.clone(), cod.clone(), dom.clone()) {
                let cert = operator_norm(&op, tol);
                let x = dom.normalize(&inv.apply(&cert.maximizer)).expect("inverse is injective");
                let v = img(&x);
                if v < best.0 {
                    best = (v, x);
                }
            }
        }
    }
    LowerNorm { value: best.0, certified_lower, minimizer: best.1, kernel_dim: 0 }
}

/// Pattern descent for `|Tx|` on the unit sphere.
fn descend(t: &Operator, start: &Vector) -> (Vector, f64) {
    let img = |x: &Vector| t.codomain.norm_of(&t.matrix.apply_slice(x.as_slice()));
    let mut x = start.clone();
    let mut val = img(&x);
    let mut h = 0.05;
    for _ in 0..200 {
        let mut improved = false;
        for i in 0..x.dim() {
            for s in [h, -h] {
                let mut y = x.clone();
                y[i] += s;
                if let Some(y) = t.domain.normalize(&y) {
                    let v = img(&y);
                    if v < val {
                        x = y;
                        val = v;
                        improved = true;
                    }
                }
            }
        }
        if !improved {
            h *= 0.5;
            if h < 1e-12 {
                break;
            }
        }
    }
    (x, val)
}

/// Minimum of `l -> |T + l A|` over `[-B, B]`, `B = 2|T|/|A|`, with warm-started
/// inner norm computations.
pub(crate) fn pencil_min(t: &Operator, a: &Operator, tol: &Tolerances) -> (f64, f64) {
    let nt = operator_norm(t, tol).value;
    let na = operator_norm(a, tol).value;
    if na == 0.0 {
        return (nt, 0.0);
    }
    let bound = 2.0 * nt / na;
    let warm = Mutex::new(vec![operator_norm(t, tol).maximizer, operator_norm(a, tol).maximizer]);
    let eval = |l: f64| {
        let m = t.matrix.axpy(l, &a.matrix);
        let w = warm.lock().expect("warm starts").clone();
        let cert = norm_certificate(&m, &t.domain, &t.codomain, tol, &w);
        if cert.method == NormMethod::GridRefine {
            let mut w = warm.lock().expect("warm starts");
            if w.len() >= 6 {
                w.remove(2);
            }
            w.push(cert.maximizer.clone());
        }
        cert.value
    };
    let (mut arg, mut val) = search::golden_section(&eval, -bound, bound, tol.tol_lambda * (1.0 + bound));
    let at_zero = nt;
    if at_zero <= val {
        arg = 0.0;
        val = at_zero;
    }
    (val, arg)
}

/// Decides `T ⊥ A` in operator norm by the direct pencil test and by the
/// attainment characterization, and reports whether they agree.
pub fn bj_orthogonal_operators(t: &Operator, a: &Operator, tol: &Tolerances) -> Result<OperatorOrthReport> {
    t.check_same_spaces(a)?;
    if t.matrix.is_zero() {
        return Err(Error::ZeroOperator);
    }
    let norm_t = operator_norm(t, tol).value;
    if a.matrix.is_zero() {
        return Ok(OperatorOrthReport {
            orthogonal: true,
            norm_t,
            pencil_min: norm_t,
            pencil_argmin: 0.0,
            attainment_test: true,
            attainment_point: None,
            agree: true,
        });
    }
    let (pencil_min, pencil_argmin) = pencil_min(t, a, tol);
    let orthogonal = pencil_min >= norm_t - tol.tol_oporth * norm_t;

    let reps = attainment_set(t, tol)?.representatives;
    let mut attainment_point = None;
    for x in &reps {
        let tx = t.matrix.apply(x);
        let ax = a.matrix.apply(x);
        if let Ok(r) = is_bj_orthogonal(&t.codomain, &tx, &ax, tol) {
            if r.bj_orthogonal {
                attainment_point = Some(x.clone());
                break;
            }
        }
    }
    let attainment_test = attainment_point.is_some();
    Ok(OperatorOrthReport {
        orthogonal,
        norm_t,
        pencil_min,
        pencil_argmin,
        attainment_test,
        attainment_point,
        agree: orthogonal == attainment_test,
    })
}

/// Smooth iff `M_T = {±x0}` and `Tx0` is a smooth point of the codomain.
pub fn is_smooth_operator(t: &Operator, tol: &Tolerances) -> Result<SmoothnessDiagnosis> {
    let set = attainment_set(t, tol)?;
    let count = set.representatives.len();
    if set.non_discrete || count != 1 {
        return Ok(SmoothnessDiagnosis {
            smooth: false,
            representative: None,
            representatives: count,
            non_discrete: set.non_discrete,
            image_smooth: None,
            reason: if set.non_discrete {
                "the attainment set is not discrete".into()
            } else {
                format!("the attainment set has {count} representatives up to sign")
            },
        });
    }
    let x0 = set.representatives[0].clone();
    let tx0 = t.matrix.apply(&x0);
    let smooth_image = t.codomain.is_smooth_point(&tx0, tol)?.smooth;
    Ok(SmoothnessDiagnosis {
        smooth: smooth_image,
        representative: Some(x0),
        representatives: 1,
        non_discrete: false,
        image_smooth: Some(smooth_image),
        reason: if smooth_image {
            "unique attainment direction with smooth image".into()
        } else {
            "the image of the attainment direction is not smooth".into()
        },
    })
}

/// Which local defect to measure at an attainment point.
#[derive(Clone, Copy)]
enum LocalKind {
    Preserving,
    Reversing,
}

struct LocalObjective<'a> {
    t: &'a Operator,
    x0: &'a Vector,
    tx0: Vector,
    support: crate::spaces::SupportSet,
    image_support: crate::spaces::SupportSet,
    kind: LocalKind,
    seed: u64,
    tol: &'a Tolerances,
}

impl LocalObjective<'_> {
    fn value(&self, y: &Vector) -> f64 {
        let ty = self.t.matrix.apply_slice(y.as_slice());
        let nty = self.t.codomain.norm_of(&ty);
        if nty == 0.0 {
            return 0.0;
        }
        match self.kind {
            LocalKind::Preserving => violation_with(&self.image_support, &ty, nty),
            LocalKind::Reversing => {
                let s = self.t.codomain.support_of(&ty, self.tol.tol_active);
                let ntx = self.t.codomain.norm_of(self.tx0.as_slice());
                violation_with(&s, self.tx0.as_slice(), ntx).min(1.0)
            }
        }
    }
}

impl Objective for LocalObjective<'_> {
    fn initial(&self, k: u64) -> Vec<f64> {
        let mut rng = sampling::stream(self.seed, k);
        complement_params(&mut rng, self.t.domain.dim(), self.support.vertices.len())
    }

    fn evaluate(&self, params: &[f64]) -> Option<Candidate> {
        let y = complement_point(&self.t.domain, &self.support, params, self.tol.tol_orth)?;
        let value = self.value(&y);
        Some(Candidate { params: params.to_vec(), x: self.x0.clone(), y, value })
    }

    fn verify(&self, x: &Vector, y: &Vector) -> Option<f64> {
        if !is_bj_orthogonal(&self.t.domain, x, y, self.tol).ok()?.bj_orthogonal {
            return None;
        }
        let tx = self.t.apply(x).ok()?;
        let ty = self.t.apply(y).ok()?;
        if ty.is_zero() {
            return Some(0.0);
        }
        match self.kind {
            LocalKind::Preserving => violation(&self.t.codomain, &tx, &ty, self.tol).ok(),
            LocalKind::Reversing => {
                crate::orthogonality::chmielinski_epsilon(&self.t.codomain, &ty, &tx, self.tol).ok()
            }
        }
    }
}

fn local_defect(
    t: &Operator,
    x0: &Vector,
    budget: usize,
    seed: u64,
    tol: &Tolerances,
    kind: LocalKind,
) -> Result<DefectReport> {
    t.domain.check_dim(x0)?;
    let nx = t.domain.norm_of(x0.as_slice());
    if (nx - 1.0).abs() > 1e-9 {
        return Err(Error::NotUnitVector { norm: nx });
    }
    let norm = operator_norm(t, tol).value;
    let tx0 = t.matrix.apply(x0);
    let image_norm = t.codomain.norm_of(tx0.as_slice());
    if image_norm == 0.0 {
        return Err(Error::ZeroImage);
    }
    if image_norm < norm - tol.tol_attain * norm {
        return Err(Error::NotAttainment { image_norm, norm });
    }
    if t.domain.dim() == 1 {
        return Ok(DefectReport::zero(budget));
    }
    let support = t.domain.dual_vertices(x0, tol)?;
    let image_support = t.codomain.dual_vertices(&tx0, tol)?;
    let obj = LocalObjective { t, x0, tx0, support, image_support, kind, seed, tol };
    Ok(supsearch::run(&obj, budget, tol))
}

/// `sup violation(Tx0 ⊥ Ty)` over sampled `y` with `x0 ⊥ y`; zero when `T`
/// preserves orthogonality at `x0`.
pub fn local_preserving_defect(
    t: &Operator,
    x0: &Vector,
    budget: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<DefectReport> {
    local_defect(t, x0, budget, seed, tol, LocalKind::Preserving)
}

/// `sup` of the Chmieliński constant of `(Ty, Tx0)` over sampled `y` with
/// `x0 ⊥ y`: the least `eps` for which `T` is approximately reversing at `x0`.
pub fn local_reversing_defect(
    t: &Operator,
    x0: &Vector,
    budget: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<DefectReport> {
    local_defect(t, x0, budget, seed, tol, LocalKind::Reversing)
}

/// Order of the pair in the Dragomir constant.
#[derive(Clone, Copy)]
enum PairOrder {
    Preserving,
    Reversing,
}

/// Weights slots for the supporting-functional combination of a moving base point.
const WEIGHT_SLOTS: usize = 8;

struct PairObjective<'a> {
    t: &'a Operator,
    sequence: SphereSequence,
    order: PairOrder,
    seed: u64,
    tol: &'a Tolerances,
}

fn dragomir_images(cod: &NormSpec, a: &[f64], b: &[f64], tol_lambda: f64) -> f64 {
    let na = cod.norm_of(a);
    if na == 0.0 {
        return 0.0;
    }
    if b.iter().all(|v| *v == 0.0) {
        return 0.0;
    }
    let av = Vector::from_raw(a.to_vec());
    let bv = Vector::from_raw(b.to_vec());
    if bv.is_collinear_with(&av, 1e-12) {
        return 1.0;
    }
    let m = search::min_over_line(cod, a, b, tol_lambda).value;
    if m <= 1e-12 * na {
        return 1.0;
    }
    let deficit = 1.0 - m / na;
    if deficit <= 4.0 * f64::EPSILON {
        return 0.0;
    }
    (deficit * (2.0 - deficit)).max(0.0).sqrt().min(1.0)
}

impl PairObjective<'_> {
    fn pair_value(&self, x: &Vector, y: &Vector) -> f64 {
        let tx = self.t.matrix.apply_slice(x.as_slice());
        let ty = self.t.matrix.apply_slice(y.as_slice());
        match self.order {
            PairOrder::Preserving => dragomir_images(&self.t.codomain, &tx, &ty, self.tol.tol_lambda),
            PairOrder::Reversing => dragomir_images(&self.t.codomain, &ty, &tx, self.tol.tol_lambda),
        }
    }
}

impl Objective for PairObjective<'_> {
    fn initial(&self, k: u64) -> Vec<f64> {
        let mut p = self.sequence.direction(k);
        let mut rng = sampling::stream(self.seed, k);
        let n = self.t.domain.dim();
        let mut c = complement_params(&mut rng, n, WEIGHT_SLOTS);
        p.append(&mut c);
        p
    }

    fn evaluate(&self, params: &[f64]) -> Option<Candidate> {
        let n = self.t.domain.dim();
        let x = self.t.domain.normalize(&Vector::from_raw(params[..n].to_vec()))?;
        let support = self.t.domain.support_of(x.as_slice(), self.tol.tol_active);
        let y = complement_point(&self.t.domain, &support, &params[n..], self.tol.tol_orth)?;
        let value = self.pair_value(&x, &y);
        Some(Candidate { params: params.to_vec(), x, y, value })
    }

    fn verify(&self, x: &Vector, y: &Vector) -> Option<f64> {
        if !is_bj_orthogonal(&self.t.domain, x, y, self.tol).ok()?.bj_orthogonal {
            return None;
        }
        let tx = self.t.apply(x).ok()?;
        let ty = self.t.apply(y).ok()?;
        let (a, b) = match self.order {
            PairOrder::Preserving => (tx, ty),
            PairOrder::Reversing => (ty, tx),
        };
        if a.is_zero() {
            return Some(0.0);
        }
        crate::orthogonality::dragomir_epsilon(&self.t.codomain, &a, &b, self.tol).ok()
    }
}

/// An orthogonal pair `x ⊥ y` with `Tx`, `Ty` nonzero and collinear, built from
/// a kernel vector; exists whenever `T` is singular and nonzero.
fn collinear_pair(t: &Operator, tol: &Tolerances) -> Option<(Vector, Vector)> {
    let h = kernel(t, tol).into_iter().next()?;
    let n = t.domain.dim();
    let i = (0..n).max_by(|&a, &b| {
        let ca = t.matrix.column(a).norm2();
        let cb = t.matrix.column(b).norm2();
        ca.total_cmp(&cb)
    })?;
    let x0 = Vector::basis(n, i);
    if t.matrix.apply(&x0).is_zero() {
        return None;
    }
    for s in [1.0, -1.0, 0.5, 2.0, -0.5, -2.0, 0.25, 4.0] {
        let x = t.domain.normalize(&x0.axpy(s, &h))?;
        let support = t.domain.support_of(x.as_slice(), tol.tol_active);
        for f in &support.vertices {
            let fh = f.apply(&h);
            let fx0 = f.apply(&x0);
            if fh.abs() <= 1e-6 * h.max_abs() {
                continue;
            }
            let y = x0.scaled(fh).axpy(-fx0, &h);
            let y = t.domain.normalize(&y)?;
            let (lo, hi) = support.range_on(y.as_slice());
            if lo <= tol.tol_orth && hi >= -tol.tol_orth {
                return Some((x, y));
            }
        }
    }
    None
}

fn pair_defect(t: &Operator, budget: usize, seed: u64, tol: &Tolerances, order: PairOrder) -> Result<DefectReport> {
    if t.matrix.is_zero() {
        return Err(Error::ZeroOperator);
    }
    if t.domain.dim() < 2 {
        return Err(Error::InvalidOperator("the domain must have dimension at least 2".into()));
    }
    let obj = PairObjective { t, sequence: SphereSequence::new(t.domain.dim(), seed), order, seed, tol };
    let mut report = supsearch::run(&obj, budget, tol);
    if let Some((x, y)) = collinear_pair(t, tol) {
        if let Some(value) = obj.verify(&x, &y) {
            if value > report.defect {
                report.defect = value;
                report.witness = Some(DefectWitness { x, y, value });
            }
        }
    }
    Ok(report)
}

/// Least `eps` (on the sampled pairs) with `x ⊥ y => Tx ⊥_D^eps Ty`.
///
/// Pairs with `Tx = 0` contribute `0`; pairs with `Tx`, `Ty` nonzero and
/// collinear contribute `1`. For singular `T` an explicit collinear pair is
/// always tried.
pub fn daop_epsilon(t: &Operator, budget: usize, seed: u64, tol: &Tolerances) -> Result<DefectReport> {
    pair_defect(t, budget, seed, tol, PairOrder::Preserving)
}

/// Least `eps` (on the sampled pairs) with `x ⊥ y => Ty ⊥_D^eps Tx`.
pub fn daor_epsilon(t: &Operator, budget: usize, seed: u64, tol: &Tolerances) -> Result<DefectReport> {
    pair_defect(t, budget, seed, tol, PairOrder::Reversing)
}

/// Largest local reversing defect over the representatives of `M_T`.
pub fn claor_epsilon_on_mt(t: &Operator, budget: usize, seed: u64, tol: &Tolerances) -> Result<DefectReport> {
    let set = attainment_set(t, tol)?;
    let mut best: Option<DefectReport> = None;
    for x in &set.representatives {
        let x = t.domain.normalize(x).expect("representatives are nonzero");
        let r = local_reversing_defect(t, &x, budget, seed, tol)?;
        if best.as_ref().is_none_or(|b| r.defect > b.defect) {
            best = Some(r);
        }
    }
    Ok(best.unwrap_or_else(|| DefectReport::zero(budget)))
}

/// Whether `x` lies in `M_T` within `tol_attain`.
pub fn attains_norm(t: &Operator, x: &Vector, tol: &Tolerances) -> Result<bool> {
    let nx = t.domain.norm(x)?;
    if nx == 0.0 {
        return Ok(false);
    }
    let norm = operator_norm(t, tol).value;
    Ok(t.image_norm(x)? / nx >= norm - tol.tol_attain * norm)
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

    fn op(rows: &[&[f64]], space: NormSpec) -> Operator {
        Operator::on(Matrix::from_rows(rows).unwrap(), space).unwrap()
    }

    /// The rank-one operator `(a, b) -> a (1, 1)` on the plane with the max norm.
    fn max_norm_example() -> Operator {
        op(&[&[1.0, 0.0], &[1.0, 0.0]], NormSpec::l_inf(2).unwrap())
    }

    #[test]
    fn norm_examples() {
        let t = tol();
        let a = operator_norm(&max_norm_example(), &t);
        assert_eq!(a.value, 1.0);
        assert_eq!(a.maximizer[0].abs(), 1.0);
        for s in [
            NormSpec::lp(1.0, 3).unwrap(),
            NormSpec::lp(2.0, 3).unwrap(),
            NormSpec::lp(3.0, 3).unwrap(),
            NormSpec::l_inf(2).unwrap(),
        ] {
            let i = Operator::identity(s).unwrap();
            assert!((operator_norm(&i, &t).value - 1.0).abs() < 1e-12);
        }
        let d = operator_norm(&op(&[&[2.0, 0.0], &[0.0, 1.0]], NormSpec::lp(2.0, 2).unwrap()), &t);
        assert!((d.value - 2.0).abs() < 1e-12);
        assert!((d.maximizer[0].abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn classical_closed_forms() {
        let t = tol();
        let m: &[&[f64]] = &[&[1.0, -2.0, 0.5], &[0.3, 0.0, -1.0], &[2.0, 1.0, 1.0]];
        // Largest absolute column sum and largest absolute row sum.
        let l1 = operator_norm(&op(m, NormSpec::lp(1.0, 3).unwrap()), &t).value;
        let linf = operator_norm(&op(m, NormSpec::l_inf(3).unwrap()), &t).value;
        assert!((l1 - 3.3).abs() < 1e-12);
        assert!((linf - 4.0).abs() < 1e-12);
    }

    #[test]
    fn grid_agrees_with_closed_forms() {
        let t = tol();
        let m: &[&[f64]] = &[&[1.0, -2.0, 0.5], &[0.3, 0.0, -1.0], &[2.0, 1.0, 1.0]];
        for s in [NormSpec::lp(1.0, 3).unwrap(), NormSpec::lp(2.0, 3).unwrap(), NormSpec::l_inf(3).unwrap()] {
            let o = op(m, s);
            let exact = operator_norm(&o, &t);
            let grid = operator_norm_grid(&o, &t);
            assert_eq!(exact.method, NormMethod::ClosedForm);
            assert!((exact.value - grid.value).abs() <= 1e-6, "{} vs {}", exact.value, grid.value);
        }
    }

    #[test]
    fn attainment_examples() {
        let t = tol();
        let d = attainment_set(&op(&[&[2.0, 0.0], &[0.0, 1.0]], NormSpec::lp(2.0, 2).unwrap()), &t).unwrap();
        assert_eq!(d.representatives.len(), 1);
        assert!(d.representatives[0].dist2(&v(&[1.0, 0.0])) < 1e-6);
        assert!(!d.non_discrete);

        let i = attainment_set(&Operator::identity(NormSpec::lp(2.0, 2).unwrap()).unwrap(), &t).unwrap();
        assert!(i.non_discrete);

        let a = max_norm_example();
        let set = attainment_set(&a, &t).unwrap();
        assert!(set.non_discrete);
        assert!(set.representatives.iter().all(|r| (r[0].abs() - 1.0).abs() < 1e-9));
        assert!(attains_norm(&a, &v(&[1.0, 0.0]), &t).unwrap());
        assert_eq!(
            attainment_set(&op(&[&[0.0, 0.0], &[0.0, 0.0]], NormSpec::lp(2.0, 2).unwrap()), &t),
            Err(Error::ZeroOperator)
        );
    }

    #[test]
    fn lower_norm_examples() {
        let t = tol();
        let l = lower_norm(&Operator::identity(NormSpec::lp(2.0, 3).unwrap()).unwrap(), &t);
        assert!((l.value - 1.0).abs() < 1e-12);
        let d = lower_norm(&op(&[&[2.0, 0.0], &[0.0, 1.0]], NormSpec::lp(2.0, 2).unwrap()), &t);
        assert!((d.value - 1.0).abs() < 1e-12);
        assert!(d.certified_lower <= d.value + 1e-12);
        let s = lower_norm(&op(&[&[1.0, 2.0], &[2.0, 4.0]], NormSpec::lp(3.0, 2).unwrap()), &t);
        assert_eq!(s.value, 0.0);
        assert_eq!(s.kernel_dim, 1);
    }

    #[test]
    fn lower_norm_in_lp_matches_scan() {
        let t = tol();
        let o = op(&[&[2.0, 0.5], &[-0.3, 1.0]], NormSpec::lp(3.0, 2).unwrap());
        let l = lower_norm(&o, &t);
        let scan = (0..200_000)
            .map(|k| std::f64::consts::PI * k as f64 / 200_000.0)
            .map(|a| {
                let x = o.domain().normalize(&v(&[a.cos(), a.sin()])).unwrap();
                o.image_norm(&x).unwrap()
            })
            .fold(f64::INFINITY, f64::min);
        assert!((l.value - scan).abs() < 1e-8, "{} vs {scan}", l.value);
        assert!(l.certified_lower <= l.value);
    }

    #[test]
    fn kernel_examples() {
        let t = tol();
        let k = kernel(&op(&[&[1.0, 0.0], &[0.0, 0.0]], NormSpec::lp(2.0, 2).unwrap()), &t);
        assert_eq!(k.len(), 1);
        assert!(k[0].dist2(&v(&[0.0, 1.0])).min(k[0].dist2(&v(&[0.0, -1.0]))) < 1e-15);
        assert!(kernel(&op(&[&[1.0, 2.0], &[3.0, 4.0]], NormSpec::lp(2.0, 2).unwrap()), &t).is_empty());
        // A(v) = f(v) w.
        let f = v(&[1.0, -2.0, 0.5]);
        let w = v(&[0.3, 1.0, 2.0]);
        let a = Operator::on(Matrix::outer(&w, &f), NormSpec::lp(3.0, 3).unwrap()).unwrap();
        let k = kernel(&a, &t);
        assert_eq!(k.len(), 2);
        for h in &k {
            assert!(a.apply(h).unwrap().max_abs() < 1e-14);
        }
    }

    #[test]
    fn operator_orthogonality_examples() {
        let t = tol();
        let s = NormSpec::lp(2.0, 2).unwrap();
        let a = op(&[&[1.0, 0.0], &[0.0, 0.0]], s.clone());
        let b = op(&[&[0.0, 0.0], &[0.0, 1.0]], s.clone());
        let r = bj_orthogonal_operators(&a, &b, &t).unwrap();
        assert!(r.orthogonal && r.attainment_test && r.agree);
        let zero = op(&[&[0.0, 0.0], &[0.0, 0.0]], s.clone());
        assert!(bj_orthogonal_operators(&a, &zero, &t).unwrap().orthogonal);
        assert_eq!(bj_orthogonal_operators(&zero, &a, &t), Err(Error::ZeroOperator));
        let c = op(&[&[1.0, 0.0], &[0.0, 1.0]], s);
        let r = bj_orthogonal_operators(&a, &c, &t).unwrap();
        assert!(!r.orthogonal && !r.attainment_test);
    }

    #[test]
    fn max_norm_example_maps_orthogonal_pair_to_non_orthogonal_pair() {
        // z = (1, 1) ⊥ x = (1, 0), but Az = (1, 1) is not orthogonal to Ax = (1, 1).
        let t = tol();
        let a = max_norm_example();
        let s = a.domain().clone();
        let x = v(&[1.0, 0.0]);
        let z = v(&[1.0, 1.0]);
        assert!(is_bj_orthogonal(&s, &z, &x, &t).unwrap().bj_orthogonal);
        let az = a.apply(&z).unwrap();
        let ax = a.apply(&x).unwrap();
        assert!(!is_bj_orthogonal(&s, &az, &ax, &t).unwrap().bj_orthogonal);
    }

    #[test]
    fn smoothness_examples() {
        let t = tol();
        let d = op(&[&[2.0, 0.0], &[0.0, 1.0]], NormSpec::lp(2.0, 2).unwrap());
        assert!(is_smooth_operator(&d, &t).unwrap().smooth);
        let i = Operator::identity(NormSpec::lp(2.0, 2).unwrap()).unwrap();
        assert!(!is_smooth_operator(&i, &t).unwrap().smooth);
        assert!(!is_smooth_operator(&max_norm_example(), &t).unwrap().smooth);
    }

    #[test]
    fn local_defect_examples() {
        let t = tol();
        let a = max_norm_example();
        assert_eq!(local_preserving_defect(&a, &v(&[1.0, 0.0]), 100, 1, &t).unwrap().defect, 0.0);
        let d = op(&[&[2.0, 0.0], &[0.0, 1.0]], NormSpec::lp(2.0, 2).unwrap());
        assert!(local_preserving_defect(&d, &v(&[1.0, 0.0]), 100, 1, &t).unwrap().defect <= 1e-12);
        assert!(local_reversing_defect(&d, &v(&[1.0, 0.0]), 100, 1, &t).unwrap().defect <= 1e-12);
        let i = Operator::identity(NormSpec::lp(2.0, 3).unwrap()).unwrap();
        let x0 = NormSpec::lp(2.0, 3).unwrap().normalize(&v(&[1.0, 2.0, -2.0])).unwrap();
        assert!(local_reversing_defect(&i, &x0, 100, 1, &t).unwrap().defect <= 1e-12);

        // In l_3 the complement of e1 is the e2 axis; T e2 = e2 and T e1 = 2 e1 are
        // orthogonal both ways, so the oracle value is 0.
        let d3 = op(&[&[2.0, 0.0], &[0.0, 1.0]], NormSpec::lp(3.0, 2).unwrap());
        let r = local_reversing_defect(&d3, &v(&[1.0, 0.0]), 100, 1, &t).unwrap();
        assert!(r.defect <= 1e-12);

        assert!(matches!(
            local_preserving_defect(&d, &v(&[0.0, 1.0]), 10, 1, &t),
            Err(Error::NotAttainment { .. })
        ));
    }

    #[test]
    fn daop_examples() {
        let t = tol();
        let s = NormSpec::lp(2.0, 2).unwrap();
        let i = Operator::identity(s.clone()).unwrap();
        assert!(daop_epsilon(&i, 64, 1, &t).unwrap().defect <= 1e-7);
        assert!(daor_epsilon(&i, 64, 1, &t).unwrap().defect <= 1e-7);
        let singular = op(&[&[1.0, 0.0], &[0.0, 0.0]], s.clone());
        let r = daop_epsilon(&singular, 64, 1, &t).unwrap();
        assert_eq!(r.defect, 1.0);
        assert!(r.witness.is_some());
        assert_eq!(daor_epsilon(&singular, 64, 1, &t).unwrap().defect, 1.0);
        let d = op(&[&[2.0, 0.0], &[0.0, 1.0]], s);
        let e = daop_epsilon(&d, 256, 1, &t).unwrap().defect;
        assert!((e - 0.6).abs() <= 1e-3, "{e}");
        let e = daor_epsilon(&d, 256, 1, &t).unwrap().defect;
        assert!((e - 0.6).abs() <= 1e-3, "{e}");
    }

    #[test]
    fn claor_examples() {
        let t = tol();
        let i = Operator::identity(NormSpec::lp(2.0, 3).unwrap()).unwrap();
        assert!(claor_epsilon_on_mt(&i, 20, 1, &t).unwrap().defect <= 1e-9);
        let d = op(&[&[2.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 0.5]], NormSpec::lp(3.0, 3).unwrap());
        assert!(claor_epsilon_on_mt(&d, 50, 1, &t).unwrap().defect < 1.0);
    }

    #[test]
    fn operator_json_round_trip() {
        let a = max_norm_example();
        let j = serde_json::to_string(&a).unwrap();
        let b: Operator = serde_json::from_str(&j).unwrap();
        assert_eq!(a, b);
        assert!(serde_json::from_str::<Operator>(
            r#"{"matrix":[[1,0,0]],"domain":{"family":"lp","p":2,"dim":2},"codomain":{"family":"lp","p":2,"dim":1}}"#
        )
        .is_err());
    }
}
