//! Subcommand definitions and their execution.

use anyhow::{bail, Context, Result};
use bjorth::constructions::{eigenvector_symmetry_probe, kernel_orthogonality_probe, right_symmetry_witness};
use bjorth::operators::{
    attainment_set, bj_orthogonal_operators, claor_epsilon_on_mt, daop_epsilon, daor_epsilon, is_smooth_operator,
    kernel, local_reversing_defect, lower_norm, operator_norm,
};
use bjorth::orthogonality::{is_bj_orthogonal, orthogonal_complement_sample};
use bjorth::symmetry::{left_symmetry_defect, right_symmetry_defect, DefectReport};
use bjorth::{Operator, Vector};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::Config;
use crate::io::{parse_operator, parse_space, parse_vector};
use crate::plot::{plot_ball, BallFigure, Mark};
use crate::suites::{run_suite, SUITES};

#[derive(Debug, Parser)]
#[command(name = "bjorth", version, about = "Birkhoff-James orthogonality in finite-dimensional normed spaces")]
pub struct Cli {
    /// TOML file with `budget`, `seed` and a `[tolerances]` table.
    #[arg(long, global = true)]
    pub config: Option<String>,
    /// Override a configuration key, e.g. `--set tol_orth=1e-7`.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    /// Print the full report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write the output to a file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Inspect a norm.
    #[command(subcommand)]
    Space(SpaceCmd),
    /// Birkhoff-James orthogonality of vectors.
    #[command(subcommand)]
    Orth(OrthCmd),
    /// Symmetry of a point.
    #[command(subcommand)]
    Point(PointCmd),
    /// Operator quantities.
    #[command(subcommand)]
    Op(OpCmd),
    /// Counterexample operators.
    #[command(subcommand)]
    Witness(WitnessCmd),
    /// Probes built from proof constructions.
    #[command(subcommand)]
    Probe(ProbeCmd),
    /// Figures.
    #[command(subcommand)]
    Plot(PlotCmd),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct SpaceArg {
    /// `lp:P:DIM`, `linf:DIM`, `weighted:P:W1,W2,..`, JSON, or `@file`.
    #[arg(long)]
    pub space: String,
}

#[derive(Debug, Args)]
pub struct Search {
    #[arg(long)]
    pub budget: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum SpaceCmd {
    Describe {
        #[command(flatten)]
        space: SpaceArg,
        /// Also report supporting functionals and smoothness at this point.
        #[arg(long)]
        x: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum OrthCmd {
    Check {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    Complement {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long)]
        x: String,
        #[command(flatten)]
        search: Search,
    },
}

#[derive(Debug, Subcommand)]
pub enum PointCmd {
    Symmetry {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long)]
        x: String,
        #[command(flatten)]
        search: Search,
    },
}

#[derive(Debug, Args)]
pub struct OperatorArg {
    /// Operator JSON (`matrix`, `domain`, `codomain`), a bare matrix with `--space`, or `@file`.
    #[arg(long = "T")]
    pub t: String,
    #[arg(long)]
    pub space: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum OpCmd {
    Norm {
        #[command(flatten)]
        op: OperatorArg,
    },
    Attain {
        #[command(flatten)]
        op: OperatorArg,
    },
    Lower {
        #[command(flatten)]
        op: OperatorArg,
    },
    Kernel {
        #[command(flatten)]
        op: OperatorArg,
    },
    Smooth {
        #[command(flatten)]
        op: OperatorArg,
    },
    Orth {
        #[command(flatten)]
        op: OperatorArg,
        #[arg(long = "A")]
        a: String,
    },
    Daop {
        #[command(flatten)]
        op: OperatorArg,
        #[command(flatten)]
        search: Search,
    },
    Daor {
        #[command(flatten)]
        op: OperatorArg,
        #[command(flatten)]
        search: Search,
    },
    /// Chmielinski reversing constant on the attainment set, or at `--x`.
    Claor {
        #[command(flatten)]
        op: OperatorArg,
        #[arg(long)]
        x: Option<String>,
        #[command(flatten)]
        search: Search,
    },
}

#[derive(Debug, Subcommand)]
pub enum WitnessCmd {
    RightSymmetry {
        #[command(flatten)]
        op: OperatorArg,
        #[command(flatten)]
        search: Search,
    },
}

#[derive(Debug, Subcommand)]
pub enum ProbeCmd {
    Kernel {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long)]
        x: String,
        #[command(flatten)]
        search: Search,
    },
    Eigen {
        #[command(flatten)]
        op: OperatorArg,
        #[command(flatten)]
        search: Search,
    },
}

#[derive(Debug, Subcommand)]
pub enum PlotCmd {
    Ball {
        #[arg(long, required_unless_present = "figure_one")]
        space: Option<String>,
        /// `LABEL=X,Y`: a dashed ray to a labelled point.
        #[arg(long = "mark")]
        marks: Vec<String>,
        /// `LABEL=X,Y`: a labelled point without a ray.
        #[arg(long = "point")]
        points: Vec<String>,
        /// Label of a marked point at which to draw `f` and `ker f`.
        #[arg(long)]
        support: Vec<String>,
        /// The max-norm plane with x, y, -y, z and the functional at x.
        #[arg(long)]
        figure_one: bool,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub suite: String,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of cases instead of the suite default.
    #[arg(long)]
    pub budget: Option<usize>,
    /// Include wall time in the JSON report.
    #[arg(long)]
    pub timing: bool,
}

/// What a command produced.
pub struct Output {
    pub text: String,
    pub json: Value,
    /// Raw document to emit instead of text or JSON.
    pub document: Option<String>,
    /// False when a verification failed.
    pub success: bool,
}

impl Output {
    fn report<T: Serialize>(text: String, value: &T) -> Result<Self> {
        Ok(Self { text, json: serde_json::to_value(value)?, document: None, success: true })
    }

    /// The bytes to write for the chosen format.
    pub fn render(&self, json: bool) -> String {
        if let Some(doc) = &self.document {
            return doc.clone();
        }
        if json {
            let mut s = serde_json::to_string_pretty(&self.json).expect("serializable");
            s.push('\n');
            s
        } else {
            self.text.clone()
        }
    }
}

fn fmt_vec(v: &Vector) -> String {
    let parts: Vec<String> = v.iter().map(|c| format!("{c:.6}")).collect();
    format!("({})", parts.join(", "))
}

fn fmt_matrix(a: &Operator) -> String {
    let m = a.matrix();
    let rows: Vec<String> = (0..m.rows())
        .map(|i| format!("[{}]", m.row(i).iter().map(|c| format!("{c:.9}")).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("[{}]", rows.join(", "))
}

fn defect_line(name: &str, r: &DefectReport) -> String {
    let mut s = format!("{name}: {:.9} (budget {})", r.defect, r.grid_resolution);
    if let Some(w) = &r.witness {
        s.push_str(&format!(", witness x = {} y = {}", fmt_vec(&w.x), fmt_vec(&w.y)));
    }
    s.push('\n');
    s
}

fn operator(arg: &OperatorArg) -> Result<Operator> {
    let space = arg.space.as_deref().map(parse_space).transpose()?;
    parse_operator(&arg.t, space.as_ref())
}

fn search(s: &Search, cfg: &Config) -> (usize, u64) {
    (s.budget.unwrap_or(cfg.budget), s.seed.unwrap_or(cfg.seed))
}

fn parse_mark(raw: &str, ray: bool) -> Result<Mark> {
    let (label, coords) = raw.split_once('=').with_context(|| format!("mark {raw:?} is not LABEL=X,Y"))?;
    Ok(Mark { label: label.to_string(), point: parse_vector(coords)?, ray, support: false })
}

pub fn execute(cli: &Cli) -> Result<Output> {
    let cfg = Config::load(cli.config.as_deref(), &cli.overrides)?;
    let tol = &cfg.tolerances;
    match &cli.command {
        Command::Space(SpaceCmd::Describe { space, x }) => {
            let s = parse_space(&space.space)?;
            let (lo, hi) = s.equivalence_constants();
            let mut text = format!(
                "{}\nsmooth space: {}\nequivalence with l2: {lo:.6} |x|_2 <= |x| <= {hi:.6} |x|_2\n",
                s.describe(),
                s.is_smooth_space()
            );
            let mut value = json!({
                "space": s,
                "description": s.describe(),
                "smooth_space": s.is_smooth_space(),
                "equivalence_constants": [lo, hi],
            });
            if let Some(x) = x {
                let x = parse_vector(x)?;
                let cert = s.is_smooth_point(&x, tol)?;
                text.push_str(&format!("|x| = {}\nsmooth at x: {}\n", s.norm(&x)?, cert.smooth));
                for f in &cert.support.vertices {
                    text.push_str(&format!("supporting functional {}\n", fmt_vec(&f.coords)));
                }
                value["norm"] = json!(s.norm(&x)?);
                value["smooth_point"] = json!(cert.smooth);
                value["support"] = serde_json::to_value(&cert.support)?;
            }
            Ok(Output { text, json: value, document: None, success: true })
        }
        Command::Orth(OrthCmd::Check { space, x, y }) => {
            let s = parse_space(&space.space)?;
            let (x, y) = (parse_vector(x)?, parse_vector(y)?);
            let r = is_bj_orthogonal(&s, &x, &y, tol)?;
            let text = format!(
                "x ⊥ y: {}\nderivatives: [{}, {}]\nline minimum: {} on [{}, {}]\nDragomir constant: {}\nChmielinski constant: {}\n",
                r.bj_orthogonal,
                r.derivatives.d_minus,
                r.derivatives.d_plus,
                r.line_min_value,
                r.line_minimizer.0,
                r.line_minimizer.1,
                r.dragomir_eps,
                r.chmielinski_eps
            );
            Output::report(text, &r)
        }
        Command::Orth(OrthCmd::Complement { space, x, search: sr }) => {
            let s = parse_space(&space.space)?;
            let x = parse_vector(x)?;
            let (budget, seed) = search(sr, &cfg);
            let pts = orthogonal_complement_sample(&s, &x, budget, seed, tol)?;
            let text: String = pts.iter().map(|p| format!("{}\n", fmt_vec(p))).collect();
            Output::report(text, &pts)
        }
        Command::Point(PointCmd::Symmetry { space, x, search: sr }) => {
            let s = parse_space(&space.space)?;
            let x = parse_vector(x)?;
            let (budget, seed) = search(sr, &cfg);
            let left = left_symmetry_defect(&s, &x, budget, seed, tol)?;
            let right = right_symmetry_defect(&s, &x, budget, seed, tol)?;
            let text = defect_line("left symmetry defect", &left) + &defect_line("right symmetry defect", &right);
            Output::report(text, &json!({ "left": left, "right": right }))
        }
        Command::Op(cmd) => op_command(cmd, &cfg),
        Command::Witness(WitnessCmd::RightSymmetry { op, search: sr }) => {
            let t = operator(op)?;
            let (budget, seed) = search(sr, &cfg);
            let w = right_symmetry_witness(&t, budget, seed, tol)?;
            let mut text = format!("witness operator A = {}\n", fmt_matrix(&w.operator));
            for f in &w.verification {
                text.push_str(&format!(
                    "[{}] {}: {:e} (bound {:e})\n",
                    if f.passed { "ok" } else { "FAILED" },
                    f.claim,
                    f.value,
                    f.tolerance
                ));
            }
            let success = w.all_passed();
            Ok(Output { success, ..Output::report(text, &w)? })
        }
        Command::Probe(ProbeCmd::Kernel { space, x, search: sr }) => {
            let s = parse_space(&space.space)?;
            let x = parse_vector(x)?;
            let (budget, seed) = search(sr, &cfg);
            let r = kernel_orthogonality_probe(&s, &x, budget, seed, tol)?;
            let text = format!("kernel orthogonal to x: {}\n", r.kernel_orthogonal)
                + &defect_line("largest violation", &r.report);
            Output::report(text, &r)
        }
        Command::Probe(ProbeCmd::Eigen { op, search: sr }) => {
            let t = operator(op)?;
            let (budget, seed) = search(sr, &cfg);
            let r = eigenvector_symmetry_probe(&t, budget, seed, tol)?;
            let mut text = format!(
                "x0 = {}\neigenvector: {}\nTx0 in kernel: {}\nrank: {}\nprediction: {:?}\n",
                fmt_vec(&r.x0),
                r.eigenvector,
                r.image_in_kernel,
                r.rank,
                r.prediction
            );
            if let Some(w) = &r.witness {
                text.push_str(&format!("witness certified: {}\n", w.all_passed()));
            }
            if let Some(e) = &r.witness_error {
                text.push_str(&format!("witness construction failed: {e}\n"));
            }
            if let Some(l) = &r.failed_link {
                text.push_str(&format!("first failing link: {l}\n"));
            }
            Output::report(text, &r)
        }
        Command::Plot(PlotCmd::Ball { space, marks, points, support, figure_one }) => {
            let mut fig = if *figure_one {
                BallFigure::figure_one()
            } else {
                BallFigure { space: parse_space(space.as_deref().expect("required by clap"))?, marks: Vec::new() }
            };
            for m in marks {
                fig.marks.push(parse_mark(m, true)?);
            }
            for m in points {
                fig.marks.push(parse_mark(m, false)?);
            }
            for label in support {
                let Some(m) = fig.marks.iter_mut().find(|m| &m.label == label) else {
                    bail!("--support {label:?} names no marked point");
                };
                m.support = true;
            }
            let svg = plot_ball(&fig, tol)?;
            Ok(Output { text: String::new(), json: Value::Null, document: Some(svg), success: true })
        }
        Command::Verify(v) => {
            let seed = v.seed.unwrap_or(cfg.seed);
            let r = run_suite(&v.suite, seed, v.budget, tol)?;
            let mut text = format!(
                "{} {}: {} cases, {} failures, {:.2} s\n",
                if r.passed() { "PASS" } else { "FAIL" },
                r.suite,
                r.cases,
                r.failures.len(),
                r.wall_time_secs
            );
            for (k, val) in &r.summary {
                text.push_str(&format!("  {k} = {val}\n"));
            }
            for f in &r.failures {
                text.push_str(&format!("  case {}: {}\n    reproduce: {}\n", f.case, f.detail, f.reproduce));
            }
            let mut value = serde_json::to_value(&r)?;
            if !v.timing {
                value.as_object_mut().expect("object").remove("wall_time_secs");
            }
            Ok(Output { text, json: value, document: None, success: r.passed() })
        }
    }
}

fn op_command(cmd: &OpCmd, cfg: &Config) -> Result<Output> {
    let tol = &cfg.tolerances;
    match cmd {
        OpCmd::Norm { op } => {
            let c = operator_norm(&operator(op)?, tol);
            Output::report(format!("|T| = {} at x = {} ({:?})\n", c.value, fmt_vec(&c.maximizer), c.method), &c)
        }
        OpCmd::Attain { op } => {
            let a = attainment_set(&operator(op)?, tol)?;
            let mut text = format!("|T| = {}\nnon-discrete: {}\n", a.norm, a.non_discrete);
            for r in &a.representatives {
                text.push_str(&format!("±{}\n", fmt_vec(r)));
            }
            Output::report(text, &a)
        }
        OpCmd::Lower { op } => {
            let l = lower_norm(&operator(op)?, tol);
            let text = format!(
                "[T] = {} at x = {}\ncertified lower bound: {}\nkernel dimension: {}\n",
                l.value,
                fmt_vec(&l.minimizer),
                l.certified_lower,
                l.kernel_dim
            );
            Output::report(text, &l)
        }
        OpCmd::Kernel { op } => {
            let k = kernel(&operator(op)?, tol);
            let text = format!("dimension {}\n", k.len()) + &k.iter().map(|v| format!("{}\n", fmt_vec(v))).collect::<String>();
            Output::report(text, &k)
        }
        OpCmd::Smooth { op } => {
            let d = is_smooth_operator(&operator(op)?, tol)?;
            Output::report(format!("smooth: {} ({})\n", d.smooth, d.reason), &d)
        }
        OpCmd::Orth { op, a } => {
            let t = operator(op)?;
            let space = op.space.as_deref().map(parse_space).transpose()?;
            let a = parse_operator(a, space.as_ref().or(Some(t.domain())))?;
            let r = bj_orthogonal_operators(&t, &a, tol)?;
            let text = format!(
                "T ⊥ A: {}\n|T| = {}, min |T + lA| = {} at l = {}\nattainment test: {}\n",
                r.orthogonal, r.norm_t, r.pencil_min, r.pencil_argmin, r.attainment_test
            );
            let success = r.agree;
            Ok(Output { success, ..Output::report(text, &r)? })
        }
        OpCmd::Daop { op, search: sr } => {
            let (budget, seed) = search(sr, cfg);
            let r = daop_epsilon(&operator(op)?, budget, seed, tol)?;
            Output::report(defect_line("DAOP constant", &r), &r)
        }
        OpCmd::Daor { op, search: sr } => {
            let (budget, seed) = search(sr, cfg);
            let r = daor_epsilon(&operator(op)?, budget, seed, tol)?;
            Output::report(defect_line("DAOR constant", &r), &r)
        }
        OpCmd::Claor { op, x, search: sr } => {
            let t = operator(op)?;
            let (budget, seed) = search(sr, cfg);
            let r = match x {
                Some(x) => local_reversing_defect(&t, &parse_vector(x)?, budget, seed, tol)?,
                None => claor_epsilon_on_mt(&t, budget, seed, tol)?,
            };
            Output::report(defect_line("CLAOR constant", &r), &r)
        }
    }
}

/// Names of the registered suites, for help output.
pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.0).collect()
}

/// Parses an already-split command line; used by tests.
pub fn parse<I, T>(args: I) -> Result<Cli>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    Ok(Cli::try_parse_from(args)?)
}
