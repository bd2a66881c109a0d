mod common;

use bjorth::orthogonality::is_bj_orthogonal;
use bjorth::symmetry::{left_symmetry_defect, right_symmetry_defect, violation};
use bjorth::{NormSpec, Tolerances};

#[test]
fn defects_are_even_in_the_point() {
    let tol = Tolerances::default();
    for (i, s) in [NormSpec::lp(1.0, 3).unwrap(), NormSpec::lp(3.0, 2).unwrap(), NormSpec::l_inf(2).unwrap()]
        .into_iter()
        .enumerate()
    {
        for k in 0..5 {
            let x = common::unit(&s, &mut common::rng(31 + i as u64, k));
            let neg = x.scaled(-1.0);
            let l = left_symmetry_defect(&s, &x, 64, 3, &tol).unwrap().defect;
            let ln = left_symmetry_defect(&s, &neg, 64, 3, &tol).unwrap().defect;
            assert!((l - ln).abs() <= 1e-9, "{} left {l} vs {ln}", s.describe());
            let r = right_symmetry_defect(&s, &x, 64, 3, &tol).unwrap().defect;
            let rn = right_symmetry_defect(&s, &neg, 64, 3, &tol).unwrap().defect;
            assert!((r - rn).abs() <= 1e-9, "{} right {r} vs {rn}", s.describe());
        }
    }
}

#[test]
fn euclidean_defects_vanish() {
    let tol = Tolerances::default();
    for n in [2, 3] {
        let s = NormSpec::lp(2.0, n).unwrap();
        for k in 0..200 {
            let x = common::unit(&s, &mut common::rng(32, k));
            assert!(left_symmetry_defect(&s, &x, 16, k, &tol).unwrap().defect <= 1e-7);
            assert!(right_symmetry_defect(&s, &x, 16, k, &tol).unwrap().defect <= 1e-7);
        }
    }
}

#[test]
fn witnesses_revalidate_at_tighter_tolerances() {
    let tol = Tolerances::default();
    let strict = Tolerances { tol_orth: tol.tol_orth / 2.0, tol_active: tol.tol_active / 2.0, ..tol };
    let s = NormSpec::lp(1.0, 3).unwrap();
    for k in 0..10 {
        let x = common::unit(&s, &mut common::rng(33, k));
        let left = left_symmetry_defect(&s, &x, 64, k, &tol).unwrap();
        let right = right_symmetry_defect(&s, &x, 64, k, &tol).unwrap();
        for (report, is_left) in [(left, true), (right, false)] {
            let Some(w) = report.witness else { continue };
            assert_eq!(w.x, x);
            let (a, b) = if is_left { (&w.x, &w.y) } else { (&w.y, &w.x) };
            let pr = is_bj_orthogonal(&s, a, b, &strict).unwrap(); assert!(pr.bj_orthogonal, "case {k} left {is_left} {:?} {:?} {:?}", a, b, pr.derivatives);
            let fresh = violation(&s, b, a, &strict).unwrap();
            assert!((fresh - w.value).abs() <= 1e-9 * (1.0 + w.value), "case {k}");
            assert!((w.value - report.defect).abs() <= 1e-9 * (1.0 + w.value));
        }
    }
}

#[test]
fn defects_grow_with_budget() {
    let tol = Tolerances::default();
    for s in [NormSpec::lp(1.0, 3).unwrap(), NormSpec::lp(1.5, 3).unwrap(), NormSpec::l_inf(3).unwrap()] {
        let x = common::unit(&s, &mut common::rng(34, 0));
        let mut left = 0.0;
        let mut right = 0.0;
        for budget in [8, 32, 128] {
            let l = left_symmetry_defect(&s, &x, budget, 9, &tol).unwrap().defect;
            let r = right_symmetry_defect(&s, &x, budget, 9, &tol).unwrap().defect;
            assert!(l >= left && r >= right, "{}: budget {budget}", s.describe());
            left = l;
            right = r;
        }
    }
}
