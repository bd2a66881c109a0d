//! One-dimensional convex minimization along lines.

use crate::spaces::NormSpec;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a unimodal `f` on `[a, b]`, stopping at width `width`.
/// Returns the best evaluated point and its value.
pub(crate) fn golden_section<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, width: f64) -> (f64, f64) {
    let (mut a, mut b) = (a, b);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > width {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Result of minimizing `l -> |x + l y|`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LineMin {
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
}

/// Global minimum of `l -> |x + l y|` over `[-B, B]`, `B = 2|x|/|y|`.
///
/// `y` must be nonzero. The reported interval is the set where the value lies
/// within `1e-12 |x|` of the minimum, located by bisection.
pub(crate) fn min_over_line(space: &NormSpec, x: &[f64], y: &[f64], tol_lambda: f64) -> LineMin {
    let nx = space.norm_of(x);
    let ny = space.norm_of(y);
    if nx == 0.0 {
        return LineMin { value: 0.0, lo: 0.0, hi: 0.0 };
    }
    let bound = 2.0 * nx / ny;
    let phi = |t: f64| space.norm_on_line(x, t, y);
    let (mut argmin, mut value) = golden_section(phi, -bound, bound, tol_lambda * (1.0 + bound));
    if nx <= value {
        argmin = 0.0;
        value = nx;
    }
    let level = value + 1e-12 * nx;
    let edge = |inside: f64, outside: f64| {
        if phi(outside) <= level {
            return outside;
        }
        let (mut i, mut o) = (inside, outside);
        for _ in 0..60 {
            let m = 0.5 * (i + o);
            if phi(m) <= level {
                i = m;
            } else {
                o = m;
            }
        }
        i
    };
    LineMin { value, lo: edge(argmin, -bound), hi: edge(argmin, bound) }
}

/// A point `l` where `0` lies in the subdifferential of `l -> |x + l y|`,
/// found by bisection on the one-sided derivatives.
pub(crate) fn stationary_point(space: &NormSpec, x: &[f64], y: &[f64], tol_active: f64) -> f64 {
    let nx = space.norm_of(x);
    let ny = space.norm_of(y);
    if nx == 0.0 || ny == 0.0 {
        return 0.0;
    }
    let bound = 2.0 * nx / ny;
    let (mut lo, mut hi) = (-bound, bound);
    let mut p = vec![0.0; x.len()];
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        for i in 0..x.len() {
            p[i] = x[i] + mid * y[i];
        }
        if p.iter().all(|v| *v == 0.0) {
            return mid;
        }
        let (dm, dp) = space.derivatives_of(&p, y, tol_active);
        if dm > 0.0 {
            hi = mid;
        } else if dp < 0.0 {
            lo = mid;
        } else {
            return mid;
        }
    }
    0.5 * (lo + hi)
}
