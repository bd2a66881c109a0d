//! Finite-dimensional normed spaces: norm evaluation, dual norms, supporting
//! functionals `J(x)` as exact vertex lists, one-sided directional derivatives
//! and smooth-point detection.
//!
//! Three families are supported: `l_p` for `p` in `[1, inf]`, coordinate-weighted
//! `l_p` (`|x| = |w * x|_p`, reduced to `l_p` by rescaling) and polyhedral norms
//! `|x| = max_i |g_i(x)|`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::tolerance::Tolerances;
use crate::vector::{dot, Functional, Vector};

/// Largest supported dimension. Vertex lists of `J(x)` grow like `2^dim`.
pub const MAX_DIM: usize = 8;

/// Exponent of an `l_p` norm. Infinity is its own variant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    /// Conjugate exponent `q` with `1/p + 1/q = 1`.
    pub fn conjugate(self) -> Exponent {
        match self {
            Exponent::Infinity => Exponent::Finite(1.0),
            Exponent::Finite(p) if p == 1.0 => Exponent::Infinity,
            Exponent::Finite(p) => Exponent::Finite(p / (p - 1.0)),
        }
    }

    fn validate(self) -> Result<Self> {
        match self {
            Exponent::Finite(p) if !(p.is_finite() && p >= 1.0) => {
                Err(Error::InvalidSpec(format!("exponent must satisfy p >= 1, got {p}")))
            }
            e => Ok(e),
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(p) => s.serialize_f64(*p),
            Exponent::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(p) => Ok(Exponent::Finite(p)),
            Raw::Text(t) if matches!(t.as_str(), "inf" | "infinity" | "Infinity") => {
                Ok(Exponent::Infinity)
            }
            Raw::Text(t) => t
                .parse::<f64>()
                .map(Exponent::Finite)
                .map_err(|_| serde::de::Error::custom(format!("invalid exponent `{t}`"))),
        }
    }
}

/// The norm family of a [`NormSpec`].
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Lp { p: Exponent },
    WeightedLp { p: Exponent, weights: Vec<f64> },
    Polyhedral { functionals: Vec<Vector> },
}

/// A validated finite-dimensional norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "NormSpecJson", into = "NormSpecJson")]
pub struct NormSpec {
    family: Family,
    dim: usize,
    kind: Kind,
}

/// Reduced representation: weighted l_p becomes l_p on `u = scale * x`.
#[derive(Debug, Clone, PartialEq)]
enum Kind {
    Lp { p: Exponent, scale: Option<Vec<f64>> },
    Poly { functionals: Vec<Vector>, vertices: Vec<Vector> },
}

/// Wire form of [`NormSpec`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NormSpecJson {
    pub family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Exponent>,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub functionals: Option<Vec<Vec<f64>>>,
}

impl TryFrom<NormSpecJson> for NormSpec {
    type Error = Error;
    fn try_from(j: NormSpecJson) -> Result<Self> {
        let spec = match j.family.as_str() {
            "lp" => {
                let p = j.p.ok_or_else(|| Error::InvalidSpec("lp needs `p`".into()))?;
                NormSpec::new(Family::Lp { p }, j.dim)?
            }
            "wlp" => {
                let p = j.p.ok_or_else(|| Error::InvalidSpec("wlp needs `p`".into()))?;
                let weights =
                    j.weights.ok_or_else(|| Error::InvalidSpec("wlp needs `weights`".into()))?;
                NormSpec::new(Family::WeightedLp { p, weights }, j.dim)?
            }
            "poly" => {
                let rows = j
                    .functionals
                    .ok_or_else(|| Error::InvalidSpec("poly needs `functionals`".into()))?;
                let functionals =
                    rows.into_iter().map(Vector::new).collect::<Result<Vec<_>>>()?;
                NormSpec::new(Family::Polyhedral { functionals }, j.dim)?
            }
            other => return Err(Error::InvalidSpec(format!("unknown family `{other}`"))),
        };
        Ok(spec)
    }
}

impl From<NormSpec> for NormSpecJson {
    fn from(s: NormSpec) -> Self {
        match s.family {
            Family::Lp { p } => NormSpecJson {
                family: "lp".into(),
                p: Some(p),
                dim: s.dim,
                weights: None,
                functionals: None,
            },
            Family::WeightedLp { p, weights } => NormSpecJson {
                family: "wlp".into(),
                p: Some(p),
                dim: s.dim,
                weights: Some(weights),
                functionals: None,
            },
            Family::Polyhedral { functionals } => NormSpecJson {
                family: "poly".into(),
                p: None,
                dim: s.dim,
                weights: None,
                functionals: Some(functionals.into_iter().map(Vector::into_inner).collect()),
            },
        }
    }
}

/// The supporting-functional set `J(x)` as the vertex list of a face of the dual ball.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportSet {
    pub vertices: Vec<Functional>,
    /// False when near-ties widened the active set; the hull then contains `J(x)`.
    pub exact: bool,
}

impl SupportSet {
    pub fn is_singleton(&self) -> bool {
        self.vertices.len() == 1
    }

    /// Range `[min f(y), max f(y)]` over the hull of the vertices.
    pub fn range_on(&self, y: &[f64]) -> (f64, f64) {
        self.vertices.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), f| {
            let v = f.apply_slice(y);
            (lo.min(v), hi.max(v))
        })
    }

    /// A member of the hull vanishing on `y`, if one exists within `tol`.
    ///
    /// Combines the two vertices whose values bracket zero.
    pub fn functional_vanishing_on(&self, y: &Vector, tol: f64) -> Option<Functional> {
        let vals: Vec<f64> = self.vertices.iter().map(|f| f.apply(y)).collect();
        if let Some(i) = vals.iter().position(|v| v.abs() <= tol) {
            return Some(self.vertices[i].clone());
        }
        let (lo, lv) = vals.iter().enumerate().fold((0, f64::INFINITY), |b, (i, &v)| {
            if v < b.1 {
                (i, v)
            } else {
                b
            }
        });
        let (hi, hv) = vals.iter().enumerate().fold((0, f64::NEG_INFINITY), |b, (i, &v)| {
            if v > b.1 {
                (i, v)
            } else {
                b
            }
        });
        if lv > 0.0 || hv < 0.0 {
            return None;
        }
        let t = hv / (hv - lv);
        let f = &self.vertices[hi];
        let g = &self.vertices[lo];
        let coords = f.coords.scaled(1.0 - t).axpy(t, &g.coords);
        Some(Functional {
            coords,
            dual_norm_value: (1.0 - t) * f.dual_norm_value + t * g.dual_norm_value,
        })
    }
}

/// One-sided derivatives of `t -> |x + t y|` at `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivativePair {
    pub d_minus: f64,
    pub d_plus: f64,
    pub exact: bool,
}

impl DerivativePair {
    /// Distance from zero to `[d_minus, d_plus]`.
    pub fn gap_from_zero(&self) -> f64 {
        (self.d_minus.max(0.0)).max(-self.d_plus)
    }
}

/// Smoothness verdict with the supporting set as certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoothnessCertificate {
    pub smooth: bool,
    pub support: SupportSet,
}

/// Finite-difference estimate of the one-sided derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiniteDifferencePair {
    pub d_minus: f64,
    pub d_plus: f64,
    /// The two Richardson extrapolants agreed within `1e-6` relative.
    pub consistent: bool,
}

impl NormSpec {
    pub fn new(family: Family, dim: usize) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::InvalidSpec(format!("dimension must be in 1..={MAX_DIM}, got {dim}")));
        }
        let kind = match &family {
            Family::Lp { p } => Kind::Lp { p: p.validate()?, scale: None },
            Family::WeightedLp { p, weights } => {
                if weights.len() != dim {
                    return Err(Error::InvalidSpec(format!(
                        "expected {dim} weights, got {}",
                        weights.len()
                    )));
                }
                if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
                    return Err(Error::InvalidSpec("weights must be positive and finite".into()));
                }
                Kind::Lp { p: p.validate()?, scale: Some(weights.clone()) }
            }
            Family::Polyhedral { functionals } => {
                if functionals.is_empty() || functionals.len() > 24 {
                    return Err(Error::InvalidSpec("polyhedral norm needs 1..=24 functionals".into()));
                }
                for g in functionals {
                    if g.dim() != dim {
                        return Err(Error::InvalidSpec(format!(
                            "functional has dimension {}, expected {dim}",
                            g.dim()
                        )));
                    }
                    if g.is_zero() {
                        return Err(Error::InvalidSpec("functionals must be nonzero".into()));
                    }
                }
                let rows: Vec<&[f64]> = functionals.iter().map(Vector::as_slice).collect();
                let g = Matrix::from_rows(&rows).map_err(|e| Error::InvalidSpec(e.to_string()))?;
                if g.rank(1e-10) != dim {
                    return Err(Error::InvalidSpec(
                        "functionals do not span the dual space".into(),
                    ));
                }
                let vertices = polytope_vertices(functionals, dim);
                Kind::Poly { functionals: functionals.clone(), vertices }
            }
        };
        Ok(Self { family, dim, kind })
    }

    pub fn lp(p: f64, dim: usize) -> Result<Self> {
        Self::new(Family::Lp { p: Exponent::Finite(p) }, dim)
    }

    pub fn l_inf(dim: usize) -> Result<Self> {
        Self::new(Family::Lp { p: Exponent::Infinity }, dim)
    }

    pub fn weighted(p: Exponent, weights: Vec<f64>) -> Result<Self> {
        let dim = weights.len();
        Self::new(Family::WeightedLp { p, weights }, dim)
    }

    pub fn polyhedral(functionals: Vec<Vector>) -> Result<Self> {
        let dim = functionals.first().map(Vector::dim).unwrap_or(0);
        Self::new(Family::Polyhedral { functionals }, dim)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// The `l_p` exponent for (weighted) `l_p` families.
    pub fn exponent(&self) -> Option<Exponent> {
        match &self.kind {
            Kind::Lp { p, .. } => Some(*p),
            Kind::Poly { .. } => None,
        }
    }

    /// True when the norm comes from an inner product.
    pub fn is_euclidean(&self) -> bool {
        matches!(self.exponent(), Some(Exponent::Finite(p)) if p == 2.0)
    }

    /// True when every nonzero point is smooth (`1 < p < inf`).
    pub fn is_smooth_space(&self) -> bool {
        matches!(self.exponent(), Some(Exponent::Finite(p)) if p > 1.0)
    }

    pub fn check_dim(&self, x: &Vector) -> Result<()> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: x.dim() });
        }
        Ok(())
    }

    /// `|x|`.
    pub fn norm(&self, x: &Vector) -> Result<f64> {
        self.check_dim(x)?;
        Ok(self.norm_of(x.as_slice()))
    }

    pub(crate) fn norm_of(&self, x: &[f64]) -> f64 {
        match &self.kind {
            Kind::Lp { p, scale: None } => lp_norm(x, *p),
            Kind::Lp { p, scale: Some(s) } => {
                let u: Vec<f64> = x.iter().zip(s).map(|(a, b)| a * b).collect();
                lp_norm(&u, *p)
            }
            Kind::Poly { functionals, .. } => functionals
                .iter()
                .fold(0.0, |m, g| m.max(dot(g.as_slice(), x).abs())),
        }
    }

    /// `|x + t y|` without allocation for small dimensions.
    pub(crate) fn norm_on_line(&self, x: &[f64], t: f64, y: &[f64]) -> f64 {
        let mut buf = [0.0; MAX_DIM];
        let n = x.len();
        for i in 0..n {
            buf[i] = x[i] + t * y[i];
        }
        self.norm_of(&buf[..n])
    }

    /// Dual norm `|f|_* = sup { f(x) : |x| <= 1 }`.
    pub fn dual_norm(&self, f: &Vector) -> Result<f64> {
        self.check_dim(f)?;
        Ok(self.dual_norm_of(f.as_slice()))
    }

    pub(crate) fn dual_norm_of(&self, f: &[f64]) -> f64 {
        match &self.kind {
            Kind::Lp { p, scale: None } => lp_norm(f, p.conjugate()),
            Kind::Lp { p, scale: Some(s) } => {
                let g: Vec<f64> = f.iter().zip(s).map(|(a, b)| a / b).collect();
                lp_norm(&g, p.conjugate())
            }
            Kind::Poly { vertices, .. } => {
                vertices.iter().fold(0.0, |m, v| m.max(dot(v.as_slice(), f)))
            }
        }
    }

    /// `x / |x|`, or `None` for the zero vector.
    pub fn normalize(&self, x: &Vector) -> Option<Vector> {
        let n = self.norm_of(x.as_slice());
        (n > 0.0 && n.is_finite()).then(|| Vector::from_raw(x.iter().map(|c| c / n).collect()))
    }

    /// Exact vertex list of the face `J(x)` of the dual unit ball.
    pub fn dual_vertices(&self, x: &Vector, tol: &Tolerances) -> Result<SupportSet> {
        self.check_dim(x)?;
        if x.is_zero() {
            return Err(Error::ZeroVector);
        }
        Ok(self.support_of(x.as_slice(), tol.tol_active))
    }

    pub(crate) fn support_of(&self, x: &[f64], tol_active: f64) -> SupportSet {
        let (raw, exact) = match &self.kind {
            Kind::Lp { p, scale } => {
                let u: Vec<f64> = match scale {
                    Some(s) => x.iter().zip(s).map(|(a, b)| a * b).collect(),
                    None => x.to_vec(),
                };
                let (gs, exact) = lp_support(&u, *p, tol_active);
                let fs = match scale {
                    Some(s) => gs
                        .into_iter()
                        .map(|g| g.iter().zip(s).map(|(a, b)| a * b).collect())
                        .collect(),
                    None => gs,
                };
                (fs, exact)
            }
            Kind::Poly { functionals, .. } => {
                let vals: Vec<f64> = functionals.iter().map(|g| dot(g.as_slice(), x)).collect();
                let nx = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                let cut = nx * (1.0 - tol_active);
                let band = nx * (1.0 - 10.0 * tol_active);
                let mut exact = true;
                let mut out = Vec::new();
                for (g, &v) in functionals.iter().zip(&vals) {
                    let a = v.abs();
                    if a >= cut {
                        if a < nx {
                            exact = false;
                        }
                        let dn = self.dual_norm_of(g.as_slice());
                        out.push(g.scaled(v.signum() / dn).into_inner());
                    } else if a >= band {
                        exact = false;
                    }
                }
                (out, exact)
            }
        };
        let mut vertices: Vec<Functional> = Vec::with_capacity(raw.len());
        for coords in raw {
            let coords = Vector::from_raw(coords);
            let scale = coords.max_abs();
            if vertices.iter().any(|f| f.coords.dist2(&coords) <= 1e-13 * scale) {
                continue;
            }
            let dual_norm_value = self.dual_norm_of(coords.as_slice());
            vertices.push(Functional { coords, dual_norm_value });
        }
        SupportSet { vertices, exact }
    }

    /// `(min, max)` of `f(y)` over `J(x)`.
    pub fn directional_derivatives(
        &self,
        x: &Vector,
        y: &Vector,
        tol: &Tolerances,
    ) -> Result<DerivativePair> {
        self.check_dim(y)?;
        let support = self.dual_vertices(x, tol)?;
        let (d_minus, d_plus) = support.range_on(y.as_slice());
        Ok(DerivativePair { d_minus, d_plus, exact: support.exact })
    }

    pub(crate) fn derivatives_of(&self, x: &[f64], y: &[f64], tol_active: f64) -> (f64, f64) {
        self.support_of(x, tol_active).range_on(y)
    }

    /// One-sided difference quotients at steps `{1e-4, 1e-5, 1e-6}` (relative to
    /// `|x| / |y|`) with Richardson extrapolation between consecutive steps.
    pub fn finite_difference_derivatives(
        &self,
        x: &Vector,
        y: &Vector,
    ) -> Result<FiniteDifferencePair> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        if x.is_zero() {
            return Err(Error::ZeroVector);
        }
        let ny = self.norm_of(y.as_slice());
        if ny == 0.0 {
            return Ok(FiniteDifferencePair { d_minus: 0.0, d_plus: 0.0, consistent: true });
        }
        let nx = self.norm_of(x.as_slice());
        let unit = nx / ny;
        let quotient = |h: f64, sign: f64| {
            (self.norm_on_line(x.as_slice(), sign * h, y.as_slice()) - nx) / h
        };
        let steps = [1e-4 * unit, 1e-5 * unit, 1e-6 * unit];
        let extrapolate = |sign: f64| {
            let d: Vec<f64> = steps.iter().map(|&h| quotient(h, sign)).collect();
            let r1 = (10.0 * d[1] - d[0]) / 9.0;
            let r2 = (10.0 * d[2] - d[1]) / 9.0;
            (r2, (r1 - r2).abs() <= 1e-6 * ny.max(r2.abs()))
        };
        let (plus, c1) = extrapolate(1.0);
        let (minus, c2) = extrapolate(-1.0);
        Ok(FiniteDifferencePair { d_minus: -minus, d_plus: plus, consistent: c1 && c2 })
    }

    /// Smooth iff `J(x)` is a single functional.
    pub fn is_smooth_point(&self, x: &Vector, tol: &Tolerances) -> Result<SmoothnessCertificate> {
        let support = self.dual_vertices(x, tol)?;
        Ok(SmoothnessCertificate { smooth: support.is_singleton(), support })
    }

    /// A unit vector `x` with `f(x) = |f|_*`.
    pub fn dual_attainer(&self, f: &Vector) -> Result<Vector> {
        self.check_dim(f)?;
        Ok(self.attainer_of(f.as_slice()))
    }

    pub(crate) fn attainer_of(&self, f: &[f64]) -> Vector {
        let n = f.len();
        let out = match &self.kind {
            Kind::Lp { p, scale } => {
                let g: Vec<f64> = match scale {
                    Some(s) => f.iter().zip(s).map(|(a, b)| a / b).collect(),
                    None => f.to_vec(),
                };
                let u = lp_attainer(&g, *p);
                match scale {
                    Some(s) => u.iter().zip(s).map(|(a, b)| a / b).collect(),
                    None => u,
                }
            }
            Kind::Poly { vertices, .. } => {
                let best = vertices
                    .iter()
                    .max_by(|a, b| dot(a.as_slice(), f).total_cmp(&dot(b.as_slice(), f)))
                    .expect("polyhedral ball has vertices");
                best.as_slice().to_vec()
            }
        };
        let v = Vector::from_raw(out);
        match self.normalize(&v) {
            Some(u) => u,
            None => Vector::basis(n, 0).scaled(1.0 / self.norm_of(Vector::basis(n, 0).as_slice())),
        }
    }

    /// Constants with `lo |x|_2 <= |x| <= hi |x|_2`.
    pub fn equivalence_constants(&self) -> (f64, f64) {
        let n = self.dim as f64;
        match &self.kind {
            Kind::Lp { p, scale } => {
                let e = match p {
                    Exponent::Infinity => -0.5,
                    Exponent::Finite(p) => 1.0 / p - 0.5,
                };
                let (lo, hi) = if e <= 0.0 { (n.powf(e), 1.0) } else { (1.0, n.powf(e)) };
                match scale {
                    Some(s) => {
                        let smin = s.iter().cloned().fold(f64::INFINITY, f64::min);
                        let smax = s.iter().cloned().fold(0.0, f64::max);
                        (lo * smin, hi * smax)
                    }
                    None => (lo, hi),
                }
            }
            Kind::Poly { functionals, vertices } => {
                let hi = functionals.iter().fold(0.0f64, |m, g| m.max(g.norm2()));
                let r = vertices.iter().fold(0.0f64, |m, v| m.max(v.norm2()));
                (1.0 / r, hi)
            }
        }
    }

    /// Extreme points of the unit ball when there are finitely many.
    pub fn extreme_points(&self) -> Option<Vec<Vector>> {
        match &self.kind {
            Kind::Lp { p, scale } => {
                let pts = match p {
                    Exponent::Finite(p) if *p == 1.0 => signed_basis(self.dim),
                    Exponent::Infinity => sign_vectors(self.dim),
                    _ => return None,
                };
                Some(unscale(pts, scale.as_deref()))
            }
            Kind::Poly { vertices, .. } => Some(vertices.clone()),
        }
    }

    /// A finite set whose convex hull is the dual unit ball, when one exists.
    pub fn dual_extreme_points(&self) -> Option<Vec<Vector>> {
        match &self.kind {
            Kind::Lp { p, scale } => {
                let pts = match p {
                    Exponent::Finite(p) if *p == 1.0 => sign_vectors(self.dim),
                    Exponent::Infinity => signed_basis(self.dim),
                    _ => return None,
                };
                Some(match scale {
                    Some(s) => pts
                        .into_iter()
                        .map(|v| {
                            Vector::from_raw(v.iter().zip(s).map(|(a, b)| a * b).collect())
                        })
                        .collect(),
                    None => pts,
                })
            }
            Kind::Poly { functionals, .. } => {
                Some(functionals.iter().flat_map(|g| [g.clone(), -g]).collect())
            }
        }
    }

    /// Coordinate weights `s` with `|x| = |s * x|_p` for (weighted) `l_p`.
    pub(crate) fn lp_scale(&self) -> Option<Vec<f64>> {
        match &self.kind {
            Kind::Lp { scale: Some(s), .. } => Some(s.clone()),
            Kind::Lp { scale: None, .. } => Some(vec![1.0; self.dim]),
            Kind::Poly { .. } => None,
        }
    }

    /// Short human-readable description.
    pub fn describe(&self) -> String {
        match &self.family {
            Family::Lp { p } => format!("l_{p} in dimension {}", self.dim),
            Family::WeightedLp { p, weights } => {
                format!("weighted l_{p} in dimension {} with weights {:?}", self.dim, weights)
            }
            Family::Polyhedral { functionals } => format!(
                "polyhedral norm in dimension {} from {} functionals ({} ball vertices)",
                self.dim,
                functionals.len(),
                self.extreme_points().map_or(0, |v| v.len())
            ),
        }
    }
}

impl fmt::Display for NormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

fn lp_norm(u: &[f64], p: Exponent) -> f64 {
    let m = u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    match p {
        Exponent::Infinity => m,
        Exponent::Finite(p) if p == 1.0 => u.iter().map(|v| v.abs()).sum(),
        Exponent::Finite(p) if p == 2.0 => {
            if m == 0.0 {
                return 0.0;
            }
            m * u.iter().map(|v| (v / m) * (v / m)).sum::<f64>().sqrt()
        }
        Exponent::Finite(p) => {
            if m == 0.0 {
                return 0.0;
            }
            m * u.iter().map(|v| (v.abs() / m).powf(p)).sum::<f64>().powf(1.0 / p)
        }
    }
}

/// Vertices of `J(u)` in unweighted `l_p`, plus the exactness flag.
fn lp_support(u: &[f64], p: Exponent, tol_active: f64) -> (Vec<Vec<f64>>, bool) {
    let n = u.len();
    match p {
        Exponent::Finite(p) if p == 1.0 => {
            let nu = lp_norm(u, Exponent::Finite(1.0));
            let cut = tol_active * nu;
            let mut exact = true;
            let mut base = vec![0.0; n];
            let mut free = Vec::new();
            for (i, &v) in u.iter().enumerate() {
                let a = v.abs();
                if a > 0.0 && a <= 10.0 * cut {
                    exact = false;
                }
                if a <= cut {
                    free.push(i);
                } else {
                    base[i] = v.signum();
                }
            }
            let mut out = Vec::with_capacity(1 << free.len());
            for mask in 0..(1usize << free.len()) {
                let mut f = base.clone();
                for (k, &i) in free.iter().enumerate() {
                    f[i] = if mask >> k & 1 == 1 { -1.0 } else { 1.0 };
                }
                out.push(f);
            }
            (out, exact)
        }
        Exponent::Infinity => {
            let nu = lp_norm(u, Exponent::Infinity);
            let cut = nu * (1.0 - tol_active);
            let band = nu * (1.0 - 10.0 * tol_active);
            let mut exact = true;
            let mut out = Vec::new();
            for (i, &v) in u.iter().enumerate() {
                let a = v.abs();
                if a >= cut {
                    if a < nu {
                        exact = false;
                    }
                    let mut f = vec![0.0; n];
                    f[i] = v.signum();
                    out.push(f);
                } else if a >= band {
                    exact = false;
                }
            }
            (out, exact)
        }
        Exponent::Finite(p) => {
            let nu = lp_norm(u, Exponent::Finite(p));
            let f = if p == 2.0 {
                u.iter().map(|v| v / nu).collect()
            } else {
                u.iter().map(|v| v.signum() * (v.abs() / nu).powf(p - 1.0)).collect()
            };
            (vec![f], true)
        }
    }
}

/// Unit vector `u` in `l_p` with `g(u) = |g|_q`.
fn lp_attainer(g: &[f64], p: Exponent) -> Vec<f64> {
    let n = g.len();
    match p {
        Exponent::Finite(p) if p == 1.0 => {
            let k = (0..n).fold(0, |b, i| if g[i].abs() > g[b].abs() { i } else { b });
            let mut u = vec![0.0; n];
            u[k] = if g[k] < 0.0 { -1.0 } else { 1.0 };
            u
        }
        Exponent::Infinity => g.iter().map(|v| if *v == 0.0 { 0.0 } else { v.signum() }).collect(),
        Exponent::Finite(p) => {
            let q = p / (p - 1.0);
            let m = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if m == 0.0 {
                return vec![0.0; n];
            }
            g.iter().map(|v| v.signum() * (v.abs() / m).powf(q - 1.0)).collect()
        }
    }
}

fn signed_basis(n: usize) -> Vec<Vector> {
    (0..n).flat_map(|i| [Vector::basis(n, i), -&Vector::basis(n, i)]).collect()
}

fn sign_vectors(n: usize) -> Vec<Vector> {
    (0..1usize << n)
        .map(|mask| {
            Vector::from_raw((0..n).map(|i| if mask >> i & 1 == 1 { -1.0 } else { 1.0 }).collect())
        })
        .collect()
}

fn unscale(pts: Vec<Vector>, scale: Option<&[f64]>) -> Vec<Vector> {
    match scale {
        Some(s) => pts
            .into_iter()
            .map(|v| Vector::from_raw(v.iter().zip(s).map(|(a, b)| a / b).collect()))
            .collect(),
        None => pts,
    }
}

/// Vertices of `{x : |g_i(x)| <= 1 for all i}` by enumerating tight subsystems.
fn polytope_vertices(functionals: &[Vector], dim: usize) -> Vec<Vector> {
    let m = functionals.len();
    let mut out: Vec<Vector> = Vec::new();
    let mut subset: Vec<usize> = (0..dim).collect();
    loop {
        let rows: Vec<&[f64]> = subset.iter().map(|&i| functionals[i].as_slice()).collect();
        let a = Matrix::from_rows(&rows).expect("nonempty rows");
        for mask in 0..(1usize << dim) {
            let rhs: Vec<f64> =
                (0..dim).map(|k| if mask >> k & 1 == 1 { -1.0 } else { 1.0 }).collect();
            let Some(v) = a.solve(&rhs, 1e-10) else { break };
            let feasible = functionals.iter().all(|g| dot(g.as_slice(), &v).abs() <= 1.0 + 1e-9);
            if feasible {
                let v = Vector::from_raw(v);
                let scale = v.max_abs().max(1.0);
                if !out.iter().any(|w| w.dist2(&v) <= 1e-9 * scale) {
                    out.push(v);
                }
            }
        }
        // next combination
        let mut i = dim;
        while i > 0 && subset[i - 1] == m - dim + i - 1 {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        subset[i - 1] += 1;
        for j in i..dim {
            subset[j] = subset[j - 1] + 1;
        }
    }
    out
}
