//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 on any failure.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use bjorth::Tolerances;
use bjorth_cli::suites::{run_suite, SuiteResult};

const SEED: u64 = 20_240_601;

struct Criterion {
    number: usize,
    title: &'static str,
    suite: &'static str,
    cases: usize,
    limit: Option<Duration>,
}

const CRITERIA: &[Criterion] = &[
    Criterion { number: 1, title: "interval and line-minimum tests agree", suite: "james-equivalence", cases: 1000, limit: Some(Duration::from_secs(30)) },
    Criterion { number: 2, title: "symmetry defects vanish in l_2^3", suite: "hilbert-symmetry", cases: 200, limit: None },
    Criterion { number: 3, title: "no left-symmetric point in l_1^3", suite: "l1-no-left-symmetric", cases: 100, limit: Some(Duration::from_secs(60)) },
    Criterion { number: 4, title: "right additivity at smooth points of l_3^2", suite: "right-additivity", cases: 200, limit: None },
    Criterion { number: 5, title: "attainment points are orthogonal to the kernel", suite: "kernel-lemma", cases: 100, limit: None },
    Criterion { number: 6, title: "DAOP and DAOR constants detect injectivity", suite: "daop-injectivity", cases: 50, limit: Some(Duration::from_secs(300)) },
    Criterion { number: 7, title: "DAOP constant of diag(2,1) on l_2^2", suite: "daop-closed-form", cases: 1, limit: None },
    Criterion { number: 8, title: "certified right-symmetry witnesses", suite: "right-symmetry-witness", cases: 20, limit: None },
    Criterion { number: 9, title: "local CLAOR constant at attainment points", suite: "claor-attainment", cases: 20, limit: None },
    Criterion { number: 10, title: "kernel probe separates l_2^3 from l_4^3", suite: "hilbert-characterization", cases: 50, limit: None },
    Criterion { number: 11, title: "max-norm figure", suite: "figure-one", cases: 1, limit: None },
];

/// Dragomir constant of `diag(2, 1)` on the Euclidean plane from the sine of
/// the angle between the images of orthonormal pairs, on a fine angle grid.
fn diagonal_oracle() -> f64 {
    let steps = 2_000_000;
    let mut best = 0.0f64;
    for k in 0..steps {
        let a = std::f64::consts::PI * k as f64 / steps as f64;
        let (s, c) = a.sin_cos();
        let u = (2.0 * c, s);
        let v = (-2.0 * s, c);
        let cross = (u.0 * v.1 - u.1 * v.0).abs();
        let sin = cross / (u.0.hypot(u.1) * v.0.hypot(v.1));
        best = best.max((1.0 - sin * sin).max(0.0).sqrt());
    }
    best
}

fn extra_checks(number: usize, result: &SuiteResult) -> Vec<String> {
    let mut problems = Vec::new();
    match number {
        7 => {
            let oracle = diagonal_oracle();
            let daop = result.summary.get("daop").copied().unwrap_or(f64::NAN);
            if (oracle - 0.6).abs() > 1e-6 {
                problems.push(format!("oracle gives {oracle}"));
            }
            if !((daop - 0.6).abs() <= 1e-3 && (daop - oracle).abs() <= 1e-3) {
                problems.push(format!("daop {daop} against oracle {oracle}"));
            }
        }
        10 => {
            let l4 = result.summary.get("l4_max_violation").copied().unwrap_or(0.0);
            if l4 < 1e-3 {
                problems.push(format!("largest l_4 violation {l4}"));
            }
        }
        11 => {
            let render = || {
                Command::new(env!("CARGO_BIN_EXE_bjorth"))
                    .args(["plot", "ball", "--figure-one"])
                    .output()
                    .expect("binary runs")
            };
            let (a, b) = (render(), render());
            if !a.status.success() || a.stdout.is_empty() || a.stdout != b.stdout {
                problems.push("command-line rendering is not byte-stable".into());
            }
        }
        _ => {}
    }
    problems
}

fn main() -> ExitCode {
    let tol = Tolerances::default();
    let mut failed = 0;
    for c in CRITERIA {
        let start = Instant::now();
        let result = run_suite(c.suite, SEED, Some(c.cases), &tol).expect("registered suite");
        let elapsed = start.elapsed();
        let mut problems: Vec<String> = result
            .failures
            .iter()
            .take(3)
            .map(|f| format!("case {}: {} [{}]", f.case, f.detail, f.reproduce))
            .collect();
        if result.failures.len() > 3 {
            problems.push(format!("{} more failures", result.failures.len() - 3));
        }
        if let Some(limit) = c.limit {
            if elapsed > limit {
                problems.push(format!("took {:.1} s, limit {} s", elapsed.as_secs_f64(), limit.as_secs()));
            }
        }
        problems.extend(extra_checks(c.number, &result));
        let summary: Vec<String> = result.summary.iter().map(|(k, v)| format!("{k}={v:.3e}")).collect();
        if problems.is_empty() {
            println!(
                "PASS criterion {}: {} ({} cases, {:.2} s; {})",
                c.number,
                c.title,
                result.cases,
                elapsed.as_secs_f64(),
                summary.join(", ")
            );
        } else {
            failed += 1;
            println!("FAIL criterion {}: {} ({})", c.number, c.title, problems.join("; "));
        }
    }
    println!("{} of {} criteria passed", CRITERIA.len() - failed, CRITERIA.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
