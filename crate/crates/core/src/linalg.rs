//! Small dense linear algebra: row-major matrices, one-sided Jacobi SVD,
//! null spaces by elimination and square solves.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vector::{dot, Vector};

/// Dense row-major real matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl TryFrom<Vec<Vec<f64>>> for Matrix {
    type Error = Error;
    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        Matrix::from_rows(&rows)
    }
}

impl From<Matrix> for Vec<Vec<f64>> {
    fn from(m: Matrix) -> Self {
        (0..m.rows).map(|i| m.row(i).to_vec()).collect()
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn diag(entries: &[f64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &d) in entries.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let r = rows.len();
        if r == 0 {
            return Err(Error::InvalidOperator("matrix has no rows".into()));
        }
        let c = rows[0].as_ref().len();
        if c == 0 {
            return Err(Error::InvalidOperator("matrix has no columns".into()));
        }
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            let row = row.as_ref();
            if row.len() != c {
                return Err(Error::InvalidOperator("ragged matrix rows".into()));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidOperator("non-finite matrix entry".into()));
            }
            data.extend_from_slice(row);
        }
        Ok(Self { rows: r, cols: c, data })
    }

    /// Outer product `w f^T`.
    pub fn outer(w: &Vector, f: &Vector) -> Self {
        let mut m = Self::zeros(w.dim(), f.dim());
        for i in 0..w.dim() {
            for j in 0..f.dim() {
                m.set(i, j, w[i] * f[j]);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vector {
        Vector::from_raw((0..self.rows).map(|i| self.get(i, j)).collect())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0.0)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn apply(&self, x: &Vector) -> Vector {
        Vector::from_raw(self.apply_slice(x.as_slice()))
    }

    pub(crate) fn apply_slice(&self, x: &[f64]) -> Vec<f64> {
        (0..self.rows).map(|i| dot(self.row(i), x)).collect()
    }

    /// `self^T y`.
    pub fn apply_transpose(&self, y: &Vector) -> Vector {
        let mut out = vec![0.0; self.cols];
        for i in 0..self.rows {
            let yi = y[i];
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += a * yi;
            }
        }
        Vector::from_raw(out)
    }

    pub fn scaled(&self, s: f64) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v * s).collect() }
    }

    /// `self + s * other`.
    pub fn axpy(&self, s: f64, other: &Matrix) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + s * b).collect(),
        }
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        let mut m = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut s = 0.0;
                for k in 0..self.cols {
                    s += self.get(i, k) * other.get(k, j);
                }
                m.set(i, j, s);
            }
        }
        m
    }

    /// Scales column `j` by `s[j]`.
    pub(crate) fn scale_columns(&self, s: &[f64]) -> Matrix {
        let mut m = self.clone();
        for i in 0..m.rows {
            for j in 0..m.cols {
                m.data[i * m.cols + j] *= s[j];
            }
        }
        m
    }

    /// Scales row `i` by `s[i]`.
    pub(crate) fn scale_rows(&self, s: &[f64]) -> Matrix {
        let mut m = self.clone();
        for i in 0..m.rows {
            for j in 0..m.cols {
                m.data[i * m.cols + j] *= s[i];
            }
        }
        m
    }

    /// Orthonormal (Euclidean) basis of the null space.
    ///
    /// Gauss-Jordan elimination with partial pivoting; a pivot is accepted when it
    /// exceeds `rel_pivot * max|a_ij|`.
    pub fn null_space(&self, rel_pivot: f64) -> Vec<Vector> {
        let scale = self.max_abs();
        if scale == 0.0 {
            return (0..self.cols).map(|j| Vector::basis(self.cols, j)).collect();
        }
        let thresh = rel_pivot * scale;
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let (p, pv) = (r..a.rows)
                .map(|i| (i, a.get(i, c).abs()))
                .fold((r, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pv <= thresh {
                continue;
            }
            if p != r {
                for j in 0..a.cols {
                    a.data.swap(p * a.cols + j, r * a.cols + j);
                }
            }
            let inv = 1.0 / a.get(r, c);
            for j in 0..a.cols {
                a.data[r * a.cols + j] *= inv;
            }
            for i in 0..a.rows {
                if i != r {
                    let f = a.get(i, c);
                    if f != 0.0 {
                        for j in 0..a.cols {
                            let v = a.get(i, j) - f * a.get(r, j);
                            a.set(i, j, v);
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        let free: Vec<usize> = (0..a.cols).filter(|c| !pivots.contains(c)).collect();
        let raw: Vec<Vector> = free
            .iter()
            .map(|&fc| {
                let mut v = vec![0.0; a.cols];
                v[fc] = 1.0;
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -a.get(row, fc);
                }
                Vector::from_raw(v)
            })
            .collect();
        gram_schmidt(&raw)
    }

    pub fn rank(&self, rel_pivot: f64) -> usize {
        self.cols - self.null_space(rel_pivot).len()
    }

    /// Solves the square system `self x = b` by partial-pivoting elimination.
    /// Returns `None` when a pivot falls below `rel_pivot * max|a_ij|`.
    pub fn solve(&self, b: &[f64], rel_pivot: f64) -> Option<Vec<f64>> {
        let n = self.rows;
        if n != self.cols || b.len() != n {
            return None;
        }
        let thresh = rel_pivot * self.max_abs();
        let mut a = self.data.clone();
        let mut x = b.to_vec();
        for c in 0..n {
            let p = (c..n).max_by(|&i, &j| a[i * n + c].abs().total_cmp(&a[j * n + c].abs()))?;
            if a[p * n + c].abs() <= thresh || a[p * n + c] == 0.0 {
                return None;
            }
            if p != c {
                for j in 0..n {
                    a.swap(p * n + j, c * n + j);
                }
                x.swap(p, c);
            }
            for i in c + 1..n {
                let f = a[i * n + c] / a[c * n + c];
                if f != 0.0 {
                    for j in c..n {
                        a[i * n + j] -= f * a[c * n + j];
                    }
                    x[i] -= f * x[c];
                }
            }
        }
        for c in (0..n).rev() {
            let mut s = x[c];
            for j in c + 1..n {
                s -= a[c * n + j] * x[j];
            }
            x[c] = s / a[c * n + c];
        }
        Some(x)
    }

    pub fn inverse(&self, rel_pivot: f64) -> Option<Matrix> {
        let n = self.rows;
        if n != self.cols {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for j in 0..n {
            let e = Vector::basis(n, j);
            let col = self.solve(e.as_slice(), rel_pivot)?;
            for i in 0..n {
                inv.set(i, j, col[i]);
            }
        }
        Some(inv)
    }

    /// Singular values (descending) and right singular vectors by cyclic one-sided
    /// Jacobi rotations on the columns.
    pub fn svd_jacobi(&self) -> Svd {
        let (m, n) = (self.rows, self.cols);
        let mut u: Vec<Vec<f64>> = (0..n).map(|j| self.column(j).into_inner()).collect();
        let mut v: Vec<Vec<f64>> = (0..n).map(|j| Vector::basis(n, j).into_inner()).collect();
        for _sweep in 0..60 {
            let mut rotated = false;
            for p in 0..n {
                for q in p + 1..n {
                    let alpha = dot(&u[p], &u[p]);
                    let beta = dot(&u[q], &u[q]);
                    let gamma = dot(&u[p], &u[q]);
                    if gamma == 0.0 || gamma.abs() <= 1e-15 * (alpha * beta).sqrt() {
                        continue;
                    }
                    rotated = true;
                    let zeta = (beta - alpha) / (2.0 * gamma);
                    let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = c * t;
                    for k in 0..m {
                        let (a, b) = (u[p][k], u[q][k]);
                        u[p][k] = c * a - s * b;
                        u[q][k] = s * a + c * b;
                    }
                    for k in 0..n {
                        let (a, b) = (v[p][k], v[q][k]);
                        v[p][k] = c * a - s * b;
                        v[q][k] = s * a + c * b;
                    }
                }
            }
            if !rotated {
                break;
            }
        }
        let mut order: Vec<(f64, usize)> = (0..n).map(|j| (dot(&u[j], &u[j]).sqrt(), j)).collect();
        order.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        Svd {
            singular_values: order.iter().map(|&(s, _)| s).collect(),
            right_vectors: order.iter().map(|&(_, j)| Vector::from_raw(v[j].clone())).collect(),
        }
    }
}

/// Result of [`Matrix::svd_jacobi`].
#[derive(Debug, Clone)]
pub struct Svd {
    pub singular_values: Vec<f64>,
    pub right_vectors: Vec<Vector>,
}

/// Modified Gram-Schmidt; drops vectors that become numerically dependent.
pub fn gram_schmidt(vs: &[Vector]) -> Vec<Vector> {
    let mut out: Vec<Vector> = Vec::new();
    for v in vs {
        let scale = v.norm2();
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &out {
                w = w.axpy(-w.dot(q), q);
            }
        }
        let n = w.norm2();
        if n > 1e-12 * scale.max(f64::MIN_POSITIVE) {
            out.push(w.scaled(1.0 / n));
        }
    }
    out
}

/// Euclidean distance from `v` to the span of an orthonormal basis.
pub fn distance_to_span(v: &Vector, orthonormal: &[Vector]) -> f64 {
    let mut w = v.clone();
    for q in orthonormal {
        w = w.axpy(-w.dot(q), q);
    }
    w.norm2()
}
