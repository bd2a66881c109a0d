mod common;

use bjorth::orthogonality::{
    chmielinski_epsilon, dragomir_epsilon, is_bj_orthogonal, min_norm_over_line, orthogonal_complement_sample,
};
use bjorth::symmetry::violation;
use bjorth::{NormSpec, Tolerances};

#[test]
fn orthogonality_is_homogeneous() {
    let tol = Tolerances::default();
    for k in 0..500 {
        let mut rng = common::rng(21, k);
        let s = common::space(&mut rng);
        let x = common::vector(&mut rng, s.dim());
        // Mix generic pairs with pairs that are orthogonal by construction.
        let y = if k % 2 == 0 {
            common::vector(&mut rng, s.dim())
        } else {
            orthogonal_complement_sample(&s, &x, 1, k, &tol).unwrap().remove(0)
        };
        let base = is_bj_orthogonal(&s, &x, &y, &tol).unwrap().bj_orthogonal;
        for (a, b) in [(-1.0, 1.0), (3.5, -0.25), (0.01, 40.0)] {
            let r = is_bj_orthogonal(&s, &x.scaled(a), &y.scaled(b), &tol).unwrap();
            assert_eq!(r.bj_orthogonal, base, "case {k} scale ({a}, {b})");
        }
    }
}

#[test]
fn dragomir_constant_vanishes_exactly_on_orthogonal_pairs() {
    let tol = Tolerances::default();
    for k in 0..500 {
        let mut rng = common::rng(22, k);
        let s = common::space(&mut rng);
        let x = common::vector(&mut rng, s.dim());
        let y = if k % 2 == 0 {
            common::vector(&mut rng, s.dim())
        } else {
            orthogonal_complement_sample(&s, &x, 1, k, &tol).unwrap().remove(0)
        };
        let orth = is_bj_orthogonal(&s, &x, &y, &tol).unwrap().bj_orthogonal;
        let eps = dragomir_epsilon(&s, &x, &y, &tol).unwrap();
        if orth {
            assert!(eps <= 1e-6, "case {k}: orthogonal pair with eps {eps}");
        } else {
            assert!(eps > 0.0, "case {k}");
        }
    }
}

#[test]
fn chmielinski_constant_matches_orthogonality_at_smooth_points() {
    let tol = Tolerances::default();
    for p in [1.5, 2.0, 3.0] {
        let s = NormSpec::lp(p, 3).unwrap();
        for k in 0..200 {
            let mut rng = common::rng(23, k);
            let x = common::vector(&mut rng, 3);
            let y = if k % 2 == 0 {
                common::vector(&mut rng, 3)
            } else {
                orthogonal_complement_sample(&s, &x, 1, k, &tol).unwrap().remove(0)
            };
            let orth = is_bj_orthogonal(&s, &x, &y, &tol).unwrap().bj_orthogonal;
            let eps = chmielinski_epsilon(&s, &x, &y, &tol).unwrap();
            assert_eq!(eps <= tol.tol_orth, orth, "p = {p}, case {k}, eps {eps}");
        }
    }
}

#[test]
fn orthogonality_is_right_additive_at_smooth_points() {
    let tol = Tolerances::default();
    let s = NormSpec::lp(3.0, 2).unwrap();
    for k in 0..200 {
        let mut rng = common::rng(24, k);
        let x = common::unit(&s, &mut rng);
        let ys = orthogonal_complement_sample(&s, &x, 2, k, &tol).unwrap();
        let sum = ys[0].axpy(1.0, &ys[1].scaled(0.7));
        if sum.is_zero() {
            continue;
        }
        assert!(violation(&s, &x, &sum, &tol).unwrap() <= 1e-7, "case {k}");
    }
}

#[test]
fn euclidean_orthogonality_is_the_inner_product() {
    let tol = Tolerances::default();
    for n in 2..=4 {
        let s = NormSpec::lp(2.0, n).unwrap();
        for k in 0..200 {
            let mut rng = common::rng(25, k);
            let x = common::vector(&mut rng, n);
            let mut y = common::vector(&mut rng, n);
            if k % 2 == 1 {
                y = y.reject_from(&x);
            }
            let orth = is_bj_orthogonal(&s, &x, &y, &tol).unwrap().bj_orthogonal;
            let ip = x.dot(&y).abs();
            let scale = x.norm2() * y.norm2();
            assert_eq!(orth, ip <= 1e-9 * scale, "n = {n}, case {k}");
            let cos = ip / scale;
            assert!((dragomir_epsilon(&s, &x, &y, &tol).unwrap() - cos).abs() <= 1e-7);
        }
    }
}

#[test]
fn line_minimum_never_exceeds_the_norm() {
    let tol = Tolerances::default();
    for k in 0..500 {
        let mut rng = common::rng(26, k);
        let s = common::space(&mut rng);
        let x = common::vector(&mut rng, s.dim());
        let y = common::vector(&mut rng, s.dim());
        let m = min_norm_over_line(&s, &x, &y, &tol).unwrap();
        assert!(m.value <= s.norm(&x).unwrap());
        assert!(m.minimizer.0 <= m.minimizer.1);
    }
}
