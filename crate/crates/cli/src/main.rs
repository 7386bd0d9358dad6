mod report;

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use psdparam::definiteness::{decide_with, DEFAULT_SEED};
use psdparam::hessian::{certify_convexity_with, variable_index};
use psdparam::parametric::DEFAULT_VERTEX_BUDGET;
use psdparam::{CubicPolynomial, Goal, Interval, MethodChoice, Options, ParameterBox, ParametricSymMatrix, Tolerance};

use report::{ConvexityDiagnostics, RunReport, Settings};

const EXIT_INPUT: u8 = 64;

#[derive(Parser)]
#[command(
    name = "psdparam",
    version,
    about = "Decide definiteness of linear parametric interval matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a property of the parametric matrix described in a JSON file.
    Check {
        /// Problem file, or `-` for standard input.
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = GoalArg::StrongPsd)]
        goal: GoalArg,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Decide convexity of a cubic polynomial on a box.
    Convex {
        /// Polynomial such as "x1^3 + 2 x1^2 x2 - x1 x2 x3".
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// One `xi=lo:hi` per variable.
        #[arg(long = "box", value_name = "VAR=LO:HI", allow_hyphen_values = true)]
        boxes: Vec<String>,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Args)]
struct CommonArgs {
    /// Fixed absolute definiteness tolerance (default: 1e-10 * (1 + norm bound)).
    #[arg(long, env = "PSDPARAM_TOL")]
    tol: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_VERTEX_BUDGET)]
    vertex_budget: u64,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    method: MethodArg,
    /// Seed for the witness search.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum GoalArg {
    StrongPsd,
    StrongPd,
    WeakPsd,
    WeakPd,
}

impl From<GoalArg> for Goal {
    fn from(g: GoalArg) -> Self {
        match g {
            GoalArg::StrongPsd => Goal::StrongPsd,
            GoalArg::StrongPd => Goal::StrongPd,
            GoalArg::WeakPsd => Goal::WeakPsd,
            GoalArg::WeakPd => Goal::WeakPd,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Split,
    Regularity,
    Vertex,
    Necessary,
}

impl MethodArg {
    fn choice(self) -> MethodChoice {
        match self {
            MethodArg::Auto => MethodChoice::Auto,
            MethodArg::Split => MethodChoice::Split,
            MethodArg::Regularity => MethodChoice::Regularity,
            MethodArg::Vertex => MethodChoice::Vertex,
            MethodArg::Necessary => MethodChoice::Necessary,
        }
    }

    fn name(self) -> &'static str {
        match self {
            MethodArg::Auto => "auto",
            MethodArg::Split => "split",
            MethodArg::Regularity => "regularity",
            MethodArg::Vertex => "vertex",
            MethodArg::Necessary => "necessary",
        }
    }
}

impl CommonArgs {
    fn options(&self) -> Result<Options, String> {
        let tolerance = match self.tol {
            Some(t) if !(t.is_finite() && t >= 0.0) => {
                return Err(format!("tolerance must be finite and nonnegative, got {t}"))
            }
            Some(t) => Tolerance::Fixed(t),
            None => Tolerance::default(),
        };
        Ok(Options {
            tolerance,
            vertex_budget: self.vertex_budget,
            seed: self.seed,
            ..Options::default()
        })
    }

    fn settings(&self, opts: &Options, p: &ParametricSymMatrix) -> Settings {
        Settings {
            tolerance_policy: opts.tolerance.into(),
            tolerance: p.tolerance(opts.tolerance),
            vertex_budget: opts.vertex_budget,
            seed: opts.seed,
            method_choice: self.method.name(),
        }
    }
}

fn read_input(file: &PathBuf) -> Result<String, String> {
    if file.as_os_str() == "-" {
        let mut text = String::new();
        io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| format!("stdin: {e}"))?;
        Ok(text)
    } else {
        fs::read_to_string(file).map_err(|e| format!("{}: {e}", file.display()))
    }
}

fn run_check(file: &PathBuf, goal: Goal, common: &CommonArgs) -> Result<RunReport, String> {
    let start = Instant::now();
    let text = read_input(file)?;
    let p = ParametricSymMatrix::from_json(&text).map_err(|e| format!("{}: {e}", file.display()))?;
    let opts = common.options()?;
    let decision = decide_with(&p, goal, common.method.choice(), &opts).map_err(|e| e.to_string())?;
    let settings = common.settings(&opts, &p);
    Ok(RunReport::new("check", goal, decision, settings, start.elapsed()))
}

/// Parses `xi=lo:hi` into a 0-based variable index and its interval.
fn parse_box(spec: &str) -> Result<(usize, Interval), String> {
    let bad = || format!("--box {spec:?}: expected VAR=LO:HI");
    let (name, range) = spec.split_once('=').ok_or_else(bad)?;
    let (lo, hi) = range.split_once(':').ok_or_else(bad)?;
    let index = variable_index(name.trim()).map_err(|e| format!("--box {spec:?}: {e}"))?;
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    let iv = Interval::new(lo, hi).map_err(|e| format!("--box {spec:?}: {e}"))?;
    Ok((index - 1, iv))
}

fn domain(f: &CubicPolynomial, boxes: &[String]) -> Result<ParameterBox, String> {
    let mut given = BTreeMap::new();
    for spec in boxes {
        let (i, iv) = parse_box(spec)?;
        if given.insert(i, iv).is_some() {
            return Err(format!("x{} has more than one --box", i + 1));
        }
    }
    let n = f.n().max(given.keys().next_back().map_or(0, |&i| i + 1));
    if n == 0 {
        return Err("the polynomial has no variables and no --box was given".into());
    }
    let intervals = (0..n)
        .map(|i| {
            given
                .get(&i)
                .copied()
                .ok_or_else(|| format!("missing --box for x{}", i + 1))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ParameterBox::new(intervals))
}

fn run_convex(expr: &str, boxes: &[String], common: &CommonArgs) -> Result<RunReport, String> {
    let start = Instant::now();
    let f = CubicPolynomial::parse(expr).map_err(|e| format!("{expr:?}: {e}"))?;
    let dom = domain(&f, boxes)?;
    let f = f.with_dimension(dom.len()).map_err(|e| e.to_string())?;
    let opts = common.options()?;
    let r = certify_convexity_with(&f, &dom, common.method.choice(), &opts).map_err(|e| e.to_string())?;
    let settings = common.settings(&opts, &r.hessian);
    let diagnostics = ConvexityDiagnostics::from(&r);
    let mut report = RunReport::new("convex", Goal::StrongPsd, r.decision, settings, start.elapsed());
    report.convexity = Some(diagnostics);
    Ok(report)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_INPUT)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match &cli.command {
        Command::Check { file, goal, common } => run_check(file, (*goal).into(), common),
        Command::Convex { expr, boxes, common } => run_convex(expr, boxes, common),
    };
    match result {
        Ok(report) => {
            let json = serde_json::to_string_pretty(&report).expect("report serializes");
            let mut out = io::stdout().lock();
            if writeln!(out, "{json}").is_err() {
                return ExitCode::from(EXIT_INPUT);
            }
            eprintln!("{}", report.summary());
            ExitCode::from(report.exit_code())
        }
        Err(message) => {
            eprintln!("psdparam: {message}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
