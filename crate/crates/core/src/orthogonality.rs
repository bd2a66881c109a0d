//! Birkhoff–James orthogonality of vector pairs and the approximate
//! orthogonality constants of Dragomir and Chmieliński.
//!
//! `x ⊥ y` means `|x + l y| >= |x|` for every real `l`. It is decided twice:
//! by the interval test `0 in [d-, d+]` on the one-sided derivatives at `x`,
//! and by minimizing the convex map `l -> |x + l y|` directly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampling;
use crate::search;
use crate::spaces::{DerivativePair, NormSpec, SupportSet};
use crate::tolerance::Tolerances;
use crate::vector::{Functional, Vector};

/// Minimum of `l -> |x + l y|` and the interval where it is attained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineMinimum {
    pub value: f64,
    pub minimizer: (f64, f64),
}

/// Full diagnostic of one pair `(x, y)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrthReport {
    pub bj_orthogonal: bool,
    pub line_min_value: f64,
    pub line_minimizer: (f64, f64),
    pub dragomir_eps: f64,
    pub chmielinski_eps: f64,
    /// A supporting functional of `x` vanishing on `y`.
    pub witness: Option<Functional>,
    pub derivatives: DerivativePair,
    pub interval_test: bool,
    pub line_test: bool,
}

/// `min_l |x + l y|`.
pub fn min_norm_over_line(
    space: &NormSpec,
    x: &Vector,
    y: &Vector,
    tol: &Tolerances,
) -> Result<LineMinimum> {
    space.check_dim(x)?;
    space.check_dim(y)?;
    if y.is_zero() {
        return Err(Error::ZeroDirection);
    }
    let m = search::min_over_line(space, x.as_slice(), y.as_slice(), tol.tol_lambda);
    Ok(LineMinimum { value: m.value, minimizer: (m.lo, m.hi) })
}

/// Decides `x ⊥ y` by both tests and reports every related quantity.
///
/// The interval test is authoritative. An error is raised only when it accepts
/// a pair whose line minimum is provably too small for that to be right.
/// `y = 0` is orthogonal to everything, with both constants equal to zero.
pub fn is_bj_orthogonal(
    space: &NormSpec,
    x: &Vector,
    y: &Vector,
    tol: &Tolerances,
) -> Result<OrthReport> {
    let support = space.dual_vertices(x, tol)?;
    space.check_dim(y)?;
    let nx = space.norm_of(x.as_slice());
    if y.is_zero() {
        return Ok(OrthReport {
            bj_orthogonal: true,
            line_min_value: nx,
            line_minimizer: (0.0, 0.0),
            dragomir_eps: 0.0,
            chmielinski_eps: 0.0,
            witness: support.vertices.first().cloned(),
            derivatives: DerivativePair { d_minus: 0.0, d_plus: 0.0, exact: support.exact },
            interval_test: true,
            line_test: true,
        });
    }
    let ny = space.norm_of(y.as_slice());
    let (d_minus, d_plus) = support.range_on(y.as_slice());
    let derivatives = DerivativePair { d_minus, d_plus, exact: support.exact };
    let interval_test = derivatives.gap_from_zero() <= tol.tol_orth * ny;

    let line = search::min_over_line(space, x.as_slice(), y.as_slice(), tol.tol_lambda);
    let line_test = line.value >= nx - tol.tol_orth * nx;
    let floor = nx * (1.0 - 2.0 * tol.tol_orth - 2.0 * tol.tol_active - 1e-12);
    if interval_test && line.value < floor {
        return Err(Error::InternalInconsistency(format!(
            "derivative interval [{d_minus}, {d_plus}] contains 0 but the line minimum is {} < |x| = {nx}",
            line.value
        )));
    }

    let witness = if interval_test && support.exact {
        support.functional_vanishing_on(y, tol.tol_orth * ny)
    } else {
        None
    };
    Ok(OrthReport {
        bj_orthogonal: interval_test,
        line_min_value: line.value,
        line_minimizer: (line.lo, line.hi),
        dragomir_eps: dragomir_from_line(x, y, line.value, nx),
        chmielinski_eps: (derivatives.gap_from_zero() / ny).clamp(0.0, 1.0),
        witness,
        derivatives,
        interval_test,
        line_test,
    })
}

fn dragomir_from_line(x: &Vector, y: &Vector, m: f64, nx: f64) -> f64 {
    if m <= 1e-12 * nx || y.is_collinear_with(x, 1e-12) {
        return 1.0;
    }
    let deficit = 1.0 - m / nx;
    // Line values within a few ulps of |x| carry no information.
    if deficit <= 4.0 * f64::EPSILON {
        return 0.0;
    }
    (deficit * (2.0 - deficit)).max(0.0).sqrt().min(1.0)
}

/// Smallest `eps` with `min_l |x + l y| >= sqrt(1 - eps^2) |x|`.
///
/// Exactly `1.0` when `y` is a nonzero multiple of `x`, and `0` when `y = 0`.
pub fn dragomir_epsilon(space: &NormSpec, x: &Vector, y: &Vector, tol: &Tolerances) -> Result<f64> {
    space.check_dim(x)?;
    space.check_dim(y)?;
    if x.is_zero() {
        return Err(Error::ZeroVector);
    }
    if y.is_zero() {
        return Ok(0.0);
    }
    let nx = space.norm_of(x.as_slice());
    let m = search::min_over_line(space, x.as_slice(), y.as_slice(), tol.tol_lambda);
    Ok(dragomir_from_line(x, y, m.value, nx))
}

/// Smallest `eps` such that some `f` in `J(x)` has `|f(y)| <= eps |y|`.
///
/// Taken to be `0` when `y = 0`.
pub fn chmielinski_epsilon(
    space: &NormSpec,
    x: &Vector,
    y: &Vector,
    tol: &Tolerances,
) -> Result<f64> {
    let support = space.dual_vertices(x, tol)?;
    space.check_dim(y)?;
    let ny = space.norm_of(y.as_slice());
    if ny == 0.0 {
        return Ok(0.0);
    }
    let (lo, hi) = support.range_on(y.as_slice());
    let gap = lo.max(0.0).max(-hi);
    Ok((gap / ny).clamp(0.0, 1.0))
}

/// Seeded unit vectors `y` with `x ⊥ y`.
///
/// Each sample picks a functional `f` in `J(x)` (a vertex or a random convex
/// combination of vertices when `x` is not smooth) and projects a Gaussian
/// vector onto `ker f`. In dimension one the complement is `{0}` and the
/// sample is empty.
pub fn orthogonal_complement_sample(
    space: &NormSpec,
    x: &Vector,
    count: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<Vec<Vector>> {
    let support = space.dual_vertices(x, tol)?;
    if space.dim() == 1 {
        return Ok(Vec::new());
    }
    let mut out = Vec::with_capacity(count);
    for k in 0..count as u64 {
        let mut rng = sampling::stream(seed, k);
        loop {
            let f = pick_functional(&support.vertices, &mut rng);
            if let Some(y) = kernel_point(space, &f, &mut rng) {
                let (lo, hi) = support.range_on(y.as_slice());
                if lo <= tol.tol_orth && hi >= -tol.tol_orth {
                    out.push(y);
                    break;
                }
            }
        }
    }
    Ok(out)
}

/// Parameters of a point of the complement of `x`: a Gaussian draw followed,
/// when `J(x)` has `m > 1` vertices, by `m` nonnegative weights.
pub(crate) fn complement_params(rng: &mut rand_chacha::ChaCha8Rng, n: usize, m: usize) -> Vec<f64> {
    let mut p = sampling::gaussian(rng, n);
    if m > 1 {
        if sampling::uniform(rng, 0.0, 1.0) < 0.5 {
            let i = (sampling::uniform(rng, 0.0, m as f64) as usize).min(m - 1);
            p.extend((0..m).map(|j| if j == i { 1.0 } else { 0.0 }));
        } else {
            p.extend((0..m).map(|_| -sampling::uniform(rng, 1e-300, 1.0).ln()));
        }
    }
    p
}

/// The unit vector of the complement described by `params`, if it passes the
/// orthogonality test against `support`.
pub(crate) fn complement_point(
    space: &NormSpec,
    support: &SupportSet,
    params: &[f64],
    tol_orth: f64,
) -> Option<Vector> {
    let n = space.dim();
    let f = combine(support, &params[n..]);
    let y = kernel_point_from(space, &f, &params[..n])?;
    let (lo, hi) = support.range_on(y.as_slice());
    (lo <= tol_orth && hi >= -tol_orth).then_some(y)
}

/// Convex combination of the vertices with weights `|w_i|` (first vertex if all vanish).
pub(crate) fn combine(support: &SupportSet, w: &[f64]) -> Vec<f64> {
    let first = support.vertices[0].coords.as_slice();
    let total: f64 = w.iter().zip(&support.vertices).map(|(v, _)| v.abs()).sum();
    if total == 0.0 {
        return first.to_vec();
    }
    let mut f = vec![0.0; first.len()];
    for (v, wi) in support.vertices.iter().zip(w) {
        for (fj, vj) in f.iter_mut().zip(v.coords.iter()) {
            *fj += wi.abs() / total * vj;
        }
    }
    f
}

/// Random functional from the convex hull of `vertices`.
pub(crate) fn pick_functional(vertices: &[Functional], rng: &mut rand_chacha::ChaCha8Rng) -> Vec<f64> {
    if vertices.len() == 1 {
        return vertices[0].coords.as_slice().to_vec();
    }
    if sampling::uniform(rng, 0.0, 1.0) < 0.5 {
        let i = (sampling::uniform(rng, 0.0, vertices.len() as f64) as usize).min(vertices.len() - 1);
        return vertices[i].coords.as_slice().to_vec();
    }
    let w: Vec<f64> = vertices.iter().map(|_| -sampling::uniform(rng, 1e-300, 1.0).ln()).collect();
    let total: f64 = w.iter().sum();
    let n = vertices[0].coords.dim();
    let mut f = vec![0.0; n];
    for (v, wi) in vertices.iter().zip(&w) {
        for (fj, vj) in f.iter_mut().zip(v.coords.iter()) {
            *fj += wi / total * vj;
        }
    }
    f
}

/// Unit vector of `ker f` obtained by projecting a Gaussian draw.
pub(crate) fn kernel_point(
    space: &NormSpec,
    f: &[f64],
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Option<Vector> {
    let g = sampling::gaussian(rng, f.len());
    kernel_point_from(space, f, &g)
}

/// Euclidean projection of `g` onto `ker f`, normalized in `space`.
pub(crate) fn kernel_point_from(space: &NormSpec, f: &[f64], g: &[f64]) -> Option<Vector> {
    let ff: f64 = f.iter().map(|v| v * v).sum();
    let fg: f64 = f.iter().zip(g).map(|(a, b)| a * b).sum();
    let y: Vec<f64> = g.iter().zip(f).map(|(gi, fi)| gi - fg / ff * fi).collect();
    let scale = g.iter().map(|v| v * v).sum::<f64>().sqrt();
    if y.iter().map(|v| v * v).sum::<f64>().sqrt() <= 1e-10 * scale {
        return None;
    }
    space.normalize(&Vector::from_raw(y))
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

    fn brute_line_min(space: &NormSpec, x: &[f64], y: &[f64]) -> f64 {
        (-400_000..=400_000)
            .map(|k| k as f64 * 1e-5)
            .map(|t| space.norm_of(&[x[0] + t * y[0], x[1] + t * y[1]]))
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn line_min_examples() {
        let t = tol();
        let linf = NormSpec::l_inf(2).unwrap();
        let m = min_norm_over_line(&linf, &v(&[1.0, 1.0]), &v(&[1.0, 0.0]), &t).unwrap();
        assert_eq!(m.value, 1.0);
        assert!((m.minimizer.0 + 2.0).abs() < 1e-9 && m.minimizer.1.abs() < 1e-9);

        let l2 = NormSpec::lp(2.0, 2).unwrap();
        let m = min_norm_over_line(&l2, &v(&[1.0, 0.0]), &v(&[0.0, 1.0]), &t).unwrap();
        assert_eq!(m.value, 1.0);
        assert!(m.minimizer.0.abs() < 1e-5 && m.minimizer.1.abs() < 1e-5);

        let r = 0.5f64.sqrt();
        let m = min_norm_over_line(&l2, &v(&[1.0, 0.0]), &v(&[r, r]), &t).unwrap();
        assert!((m.value - r).abs() < 1e-9);

        assert_eq!(
            min_norm_over_line(&l2, &v(&[1.0, 0.0]), &Vector::zeros(2), &t),
            Err(Error::ZeroDirection)
        );
    }

    #[test]
    fn orthogonality_examples() {
        let t = tol();
        let linf = NormSpec::l_inf(2).unwrap();
        let r = is_bj_orthogonal(&linf, &v(&[1.0, 0.0]), &v(&[0.0, 1.0]), &t).unwrap();
        assert!(r.bj_orthogonal && r.line_test);
        assert_eq!(r.witness.unwrap().coords, v(&[1.0, 0.0]));

        let l2 = NormSpec::lp(2.0, 3).unwrap();
        let r = is_bj_orthogonal(&l2, &v(&[1.0, 2.0, -1.0]), &v(&[1.0, 0.0, 1.0]), &t).unwrap();
        assert!(r.bj_orthogonal && r.line_test);

        let l1 = NormSpec::lp(1.0, 2).unwrap();
        let r = is_bj_orthogonal(&l1, &v(&[1.0, 0.0]), &v(&[1.0, 1.0]), &t).unwrap();
        assert!((brute_line_min(&l1, &[1.0, 0.0], &[1.0, 1.0]) - 1.0).abs() < 1e-12);
        assert!(r.bj_orthogonal && r.line_test);
        let w = r.witness.unwrap();
        assert!(w.apply(&v(&[1.0, 1.0])).abs() < 1e-15);
        assert!((w.apply(&v(&[1.0, 0.0])) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_base_point_is_rejected() {
        let s = NormSpec::lp(2.0, 2).unwrap();
        assert_eq!(
            is_bj_orthogonal(&s, &Vector::zeros(2), &v(&[1.0, 0.0]), &tol()).map(|r| r.bj_orthogonal),
            Err(Error::ZeroVector)
        );
    }

    #[test]
    fn zero_direction_is_orthogonal_with_zero_constants() {
        let s = NormSpec::lp(3.0, 2).unwrap();
        let r = is_bj_orthogonal(&s, &v(&[1.0, 2.0]), &Vector::zeros(2), &tol()).unwrap();
        assert!(r.bj_orthogonal);
        assert_eq!((r.dragomir_eps, r.chmielinski_eps), (0.0, 0.0));
    }

    #[test]
    fn dragomir_examples() {
        let t = tol();
        let l2 = NormSpec::lp(2.0, 2).unwrap();
        assert_eq!(dragomir_epsilon(&l2, &v(&[1.0, 0.0]), &v(&[0.0, 1.0]), &t).unwrap(), 0.0);
        let r = 0.5f64.sqrt();
        let e = dragomir_epsilon(&l2, &v(&[1.0, 0.0]), &v(&[r, r]), &t).unwrap();
        assert!((e - r).abs() < 1e-7);
        for s in [l2, NormSpec::lp(1.0, 2).unwrap(), NormSpec::l_inf(2).unwrap()] {
            assert_eq!(dragomir_epsilon(&s, &v(&[0.3, -2.0]), &v(&[-0.6, 4.0]), &t).unwrap(), 1.0);
        }
    }

    #[test]
    fn chmielinski_examples() {
        let t = tol();
        let l2 = NormSpec::lp(2.0, 2).unwrap();
        assert_eq!(chmielinski_epsilon(&l2, &v(&[1.0, 0.0]), &v(&[0.0, 1.0]), &t).unwrap(), 0.0);
        let linf = NormSpec::l_inf(2).unwrap();
        assert_eq!(chmielinski_epsilon(&linf, &v(&[1.0, 0.0]), &v(&[1.0, 1.0]), &t).unwrap(), 1.0);
        let l1 = NormSpec::lp(1.0, 2).unwrap();
        assert_eq!(chmielinski_epsilon(&l1, &v(&[1.0, 1.0]), &v(&[1.0, -1.0]), &t).unwrap(), 0.0);
    }

    #[test]
    fn complement_samples() {
        let t = tol();
        let l2 = NormSpec::lp(2.0, 3).unwrap();
        for y in orthogonal_complement_sample(&l2, &Vector::basis(3, 0), 20, 5, &t).unwrap() {
            assert!(y[0].abs() < 1e-15);
            assert!((y.norm2() - 1.0).abs() < 1e-14);
        }
        let linf = NormSpec::l_inf(2).unwrap();
        for y in orthogonal_complement_sample(&linf, &v(&[1.0, 0.0]), 20, 5, &t).unwrap() {
            assert_eq!(y[0], 0.0);
            assert_eq!(y[1].abs(), 1.0);
        }
    }

    #[test]
    fn l1_complement_contains_diagonal_direction() {
        // (1, -1, 0) is annihilated by (1, 1, t) in J(e1).
        let t = tol();
        let l1 = NormSpec::lp(1.0, 3).unwrap();
        let x = Vector::basis(3, 0);
        let y = v(&[1.0, -1.0, 0.0]);
        let brute = (-40_000..=40_000)
            .map(|k| k as f64 * 1e-4)
            .map(|s| l1.norm_of(&[1.0 + s, -s, 0.0]))
            .fold(f64::INFINITY, f64::min);
        assert_eq!(brute, 1.0);
        assert!(is_bj_orthogonal(&l1, &x, &y, &t).unwrap().bj_orthogonal);
        let sample = orthogonal_complement_sample(&l1, &x, 200, 3, &t).unwrap();
        assert!(sample.iter().all(|y| is_bj_orthogonal(&l1, &x, y, &t).unwrap().bj_orthogonal));
        // The sample reaches directions with a nonzero first coordinate.
        assert!(sample.iter().any(|y| y[0].abs() > 0.3));
    }
}
