//! Command-line front end: `solve`, `converge`, `cost`, `plan`, `exponents`.
//!
//! Every option may also come from a `key = value` file given with
//! `--config`; flags on the command line win.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use ivpcomp::harness::{
    ExperimentSpec, HarnessError, SAMPLES_PER_PIECE, convergence_study, cost_study, parse_key_values,
    write_convergence_csv, write_cost_csv,
};
use ivpcomp::piecewise::sup_norm_distance;
use ivpcomp::solver::{PlanRequest, Setting, alpha_exponent, beta_exponent, plan_for_epsilon, solve};
use ivpcomp::{MeanMode, Perturbation};

#[derive(Parser)]
#[command(name = "ivpcomp", version, about = "Randomized and quantum Taylor algorithms for ODE initial value problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run A_s once and report the error against the reference solution.
    Solve(Opts),
    /// Error versus n over a grid, with a fitted order.
    Converge(Opts),
    /// Charged queries versus n over a grid, with a fitted exponent.
    Cost(Opts),
    /// Choose k and n for a target accuracy.
    Plan(Opts),
    /// Table of error and cost exponents per level.
    Exponents(Opts),
}

#[derive(Args, Default)]
struct Opts {
    #[arg(long)]
    problem: Option<String>,
    #[arg(long)]
    setting: Option<String>,
    #[arg(long)]
    level: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    /// Comma separated, strictly increasing.
    #[arg(long)]
    n_grid: Option<String>,
    #[arg(long)]
    reps: Option<usize>,
    /// exact | randomized | quantum-sim
    #[arg(long)]
    mean_mode: Option<String>,
    /// none | uniform | adversarial
    #[arg(long)]
    perturbation: Option<String>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    /// Bound K on the error of the top-level algorithm (plan).
    #[arg(long)]
    k_bound: Option<f64>,
    /// Error constant C in error <= C n^(-alpha) (plan).
    #[arg(long)]
    c_bar: Option<f64>,
    #[arg(long)]
    bound_g: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Write wall_ms = 0 so repeated runs give identical CSV files.
    #[arg(long)]
    no_timing: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Command-line values layered over config-file values.
struct Resolved {
    opts: Opts,
    file: BTreeMap<String, String>,
}

impl Resolved {
    fn new(opts: Opts) -> Result<Self, HarnessError> {
        let file = match &opts.config {
            Some(path) => parse_key_values(&std::fs::read_to_string(path)?)?,
            None => BTreeMap::new(),
        };
        Ok(Self { opts, file })
    }

    fn get<T: FromStr>(&self, cli: Option<T>, key: &str) -> Result<Option<T>, HarnessError>
    where
        T::Err: std::fmt::Display,
    {
        if cli.is_some() {
            return Ok(cli);
        }
        self.file
            .get(key)
            .map(|raw| raw.parse::<T>().map_err(|e| HarnessError::InvalidSpec(format!("{key} = {raw}: {e}"))))
            .transpose()
    }

    fn or<T: FromStr>(&self, cli: Option<T>, key: &str, default: T) -> Result<T, HarnessError>
    where
        T::Err: std::fmt::Display,
    {
        Ok(self.get(cli, key)?.unwrap_or(default))
    }

    fn setting(&self) -> Result<Setting, HarnessError> {
        self.or(self.opts.setting.clone(), "setting", "rand".into())?
            .parse()
            .map_err(HarnessError::InvalidSpec)
    }

    fn spec(&self) -> Result<ExperimentSpec, HarnessError> {
        let o = &self.opts;
        let base = ExperimentSpec::default();
        let n_grid = match self.get(o.n_grid.clone(), "n-grid")? {
            Some(text) => parse_grid(&text)?,
            None => base.n_grid.clone(),
        };
        let mean_mode: MeanMode = self
            .or(o.mean_mode.clone(), "mean-mode", "exact".into())?
            .parse()
            .map_err(HarnessError::InvalidSpec)?;
        let perturbation: Perturbation = self
            .or(o.perturbation.clone(), "perturbation", "none".into())?
            .parse()
            .map_err(HarnessError::InvalidSpec)?;
        let no_timing = o.no_timing || self.or(None, "no-timing", false)?;
        Ok(ExperimentSpec {
            problem: self.or(o.problem.clone(), "problem", base.problem)?,
            setting: self.setting()?,
            level: self.or(o.level, "level", base.level)?,
            n_grid,
            repetitions: self.or(o.reps, "reps", base.repetitions)?,
            mean_mode,
            perturbation,
            r: self.or(o.r, "r", base.r)?,
            rho: self.or(o.rho, "rho", base.rho)?,
            delta: self.or(o.delta, "delta", base.delta)?,
            bound_g: self.get(o.bound_g, "bound-g")?,
            seed: self.or(o.seed, "seed", base.seed)?,
            record_timing: !no_timing,
        })
    }

    fn out(&self) -> Result<Option<PathBuf>, HarnessError> {
        self.get(self.opts.out.clone(), "out")
    }
}

fn parse_grid(text: &str) -> Result<Vec<usize>, HarnessError> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|e| HarnessError::InvalidSpec(format!("n-grid entry '{t}': {e}")))
        })
        .collect()
}

fn output(path: Option<PathBuf>) -> Result<Box<dyn Write>, HarnessError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn cmd_solve(res: &Resolved) -> Result<(), HarnessError> {
    let spec = res.spec()?;
    let n = res.or(res.opts.n, "n", 4)?;
    let problem = spec.named_problem()?;
    let cfg = spec.solver_config(&problem, n, spec.seed);
    let sol = solve(&problem.problem, &cfg)?;
    let error = sup_norm_distance(&sol.approx, |t| problem.reference()(t), SAMPLES_PER_PIECE)?;
    let end = sol.approx.eval(problem.problem.b, ivpcomp::piecewise::Side::LeftLimit)?;
    eprintln!(
        "problem={} setting={} level={} n={} pieces={} degree={}",
        problem.name,
        cfg.setting,
        cfg.level,
        n,
        sol.approx.pieces(),
        sol.approx.degree()
    );
    eprintln!("y(b) ~ {end:?}");
    eprintln!("sup-norm error = {error:e}");
    eprintln!(
        "charged_queries = {} actual_evaluations = {} classical_derivative_evals = {}",
        sol.ledger.charged_queries(),
        sol.ledger.actual_evaluations(),
        sol.ledger.classical_derivative_evals()
    );
    if let Some(path) = res.out()? {
        sol.approx.write_csv(BufWriter::new(File::create(path)?))?;
    }
    Ok(())
}

fn cmd_converge(res: &Resolved) -> Result<(), HarnessError> {
    let spec = res.spec()?;
    let report = convergence_study(&spec)?;
    write_convergence_csv(&report.rows, output(res.out()?)?)?;
    eprintln!("{}", report.order_summary());
    Ok(())
}

fn cmd_cost(res: &Resolved) -> Result<(), HarnessError> {
    let spec = res.spec()?;
    let report = cost_study(&spec)?;
    write_cost_csv(&report.rows, output(res.out()?)?)?;
    match report.fitted_exponent {
        Some(e) => eprintln!("fitted cost exponent {e:.3} (beta = {})", report.beta),
        None => eprintln!("cost exponent undefined"),
    }
    eprintln!(
        "ledger check at n = {}: expected {} charged {} ({})",
        report.rows[0].n,
        report.expected_charge_smallest,
        report.rows[0].charged_queries,
        if report.formula_matches { "ok" } else { "MISMATCH" }
    );
    Ok(())
}

fn cmd_plan(res: &Resolved) -> Result<(), HarnessError> {
    let o = &res.opts;
    let r = res.or(o.r, "r", 1)?;
    let rho = res.or(o.rho, "rho", 1.0)?;
    let epsilon = res
        .get(o.epsilon, "epsilon")?
        .ok_or_else(|| HarnessError::InvalidSpec("plan needs --epsilon".into()))?;
    let plan = plan_for_epsilon(&PlanRequest {
        epsilon,
        gamma: res.or(o.gamma, "gamma", 0.5)?,
        k_bound: res.or(o.k_bound, "k-bound", 1.0)?,
        c_bar: res.or(o.c_bar, "c-bar", 1.0)?,
        q: r as f64 + rho,
        setting: res.setting()?,
        delta: res.or(o.delta, "delta", 0.1)?,
    })?;
    println!("k = {}", plan.k);
    println!("n = {}", plan.n);
    println!("delta = {:e}", plan.delta);
    println!("alpha_k = {}", plan.alpha_k);
    println!("beta_k = {}", plan.beta_k);
    Ok(())
}

fn cmd_exponents(res: &Resolved) -> Result<(), HarnessError> {
    let o = &res.opts;
    let q = res.or(o.r, "r", 1)? as f64 + res.or(o.rho, "rho", 1.0)?;
    let top = res.or(o.level, "level", 5)?;
    let settings = match res.get(o.setting.clone(), "setting")? {
        Some(s) => vec![s.parse::<Setting>().map_err(HarnessError::InvalidSpec)?],
        None => vec![Setting::Rand, Setting::Quant],
    };
    let mut out = output(res.out()?)?;
    writeln!(out, "setting,s,alpha,beta,order_per_cost")?;
    for setting in settings {
        for s in 1..=top {
            let alpha = alpha_exponent(s, q, setting);
            let beta = beta_exponent(s, setting);
            writeln!(out, "{setting},{s},{alpha},{beta},{}", alpha / beta as f64)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(o) => Resolved::new(o).and_then(|r| cmd_solve(&r)),
        Command::Converge(o) => Resolved::new(o).and_then(|r| cmd_converge(&r)),
        Command::Cost(o) => Resolved::new(o).and_then(|r| cmd_cost(&r)),
        Command::Plan(o) => Resolved::new(o).and_then(|r| cmd_plan(&r)),
        Command::Exponents(o) => Resolved::new(o).and_then(|r| cmd_exponents(&r)),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
