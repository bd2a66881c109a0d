#![allow(dead_code)]

use bjorth::sampling::{gaussian, stream, uniform};
use bjorth::{Matrix, NormSpec, Operator, Vector};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64, index: u64) -> ChaCha8Rng {
    stream(seed, index)
}

pub fn vector(rng: &mut ChaCha8Rng, dim: usize) -> Vector {
    Vector::new(gaussian(rng, dim)).unwrap()
}

pub fn unit(space: &NormSpec, rng: &mut ChaCha8Rng) -> Vector {
    space.normalize(&vector(rng, space.dim())).unwrap()
}

/// One of l_1, l_1.5, l_2, l_3, l_inf in dimension 2 to 4.
pub fn space(rng: &mut ChaCha8Rng) -> NormSpec {
    let dim = 2 + (uniform(rng, 0.0, 3.0) as usize).min(2);
    match (uniform(rng, 0.0, 5.0) as usize).min(4) {
        0 => NormSpec::lp(1.0, dim).unwrap(),
        1 => NormSpec::lp(1.5, dim).unwrap(),
        2 => NormSpec::lp(2.0, dim).unwrap(),
        3 => NormSpec::lp(3.0, dim).unwrap(),
        _ => NormSpec::l_inf(dim).unwrap(),
    }
}

pub fn matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    let entries: Vec<Vec<f64>> = (0..rows).map(|_| gaussian(rng, cols)).collect();
    Matrix::from_rows(&entries).unwrap()
}

pub fn operator(rng: &mut ChaCha8Rng, space: &NormSpec) -> Operator {
    Operator::on(matrix(rng, space.dim(), space.dim()), space.clone()).unwrap()
}

/// An operator of rank `dim - 1` built as a product `B P C` with `P` a
/// coordinate projection.
pub fn singular_operator(rng: &mut ChaCha8Rng, space: &NormSpec) -> Operator {
    let n = space.dim();
    let mut p = vec![1.0; n];
    p[n - 1] = 0.0;
    let m = matrix(rng, n, n).mul(&Matrix::diag(&p)).mul(&matrix(rng, n, n));
    Operator::on(m, space.clone()).unwrap()
}

/// `Q1 diag(s) Q2` with Euclidean-orthogonal `Q1, Q2` and singular values in `[1, 2]`.
pub fn well_conditioned_operator(rng: &mut ChaCha8Rng, space: &NormSpec) -> Operator {
    let n = space.dim();
    let mut orthogonal = || {
        let cols: Vec<Vector> = (0..n).map(|_| vector(rng, n)).collect();
        let q = bjorth::linalg::gram_schmidt(&cols);
        let rows: Vec<Vec<f64>> = (0..n).map(|i| q.iter().map(|c| c[i]).collect()).collect();
        Matrix::from_rows(&rows).unwrap()
    };
    let q1 = orthogonal();
    let q2 = orthogonal();
    let s: Vec<f64> = (0..n).map(|_| uniform(rng, 1.0, 2.0)).collect();
    Operator::on(q1.mul(&Matrix::diag(&s)).mul(&q2), space.clone()).unwrap()
}
