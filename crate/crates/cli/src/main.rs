use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use qbaf_core::analysis::analyze;
use qbaf_core::generate::{divergence_family, random_qbaf, stock_example, RandomQbafParams, WeightMode};
use qbaf_core::io::{format_float, parse_qbaf, serialize_qbaf, write_trajectory};
use qbaf_core::mlp::{mlp_to_qbaf, parse_mlp, qbaf_to_mlp, serialize_mlp};
use qbaf_core::properties::{check_all, run_suite, CheckConfig, PropertyId, SuiteConfig, VerdictStatus};
use qbaf_core::{IntegrationConfig, IterationConfig, Qbaf, Semantics, SolveReport};

const NON_CONVERGED: u8 = 2;

#[derive(Parser)]
#[command(name = "qbaf", version, about = "Solve and analyse edge-weighted QBAFs under the logistic semantics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a .qbaf file and print the strengths.
    Solve {
        file: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Record the trajectory of a solve as CSV.
    Trace {
        file: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        /// CSV destination (standard output if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report the structural convergence guarantee.
    Analyze {
        file: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        epsilon: f64,
    },
    /// Validate a .qbaf file.
    Check { file: PathBuf },
    /// Check the semantical properties on a file or on random instances.
    Properties(PropertiesArgs),
    /// Translate between .qbaf and .mlp.
    Translate(TranslateArgs),
    /// Generate example QBAFs.
    #[command(subcommand)]
    Gen(GenCommand),
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum SemanticsKind {
    Discrete,
    Continuous,
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long, value_enum, default_value = "discrete")]
    semantics: SemanticsKind,
    /// Convergence tolerance.
    #[arg(long, default_value_t = 1e-6)]
    delta: f64,
    #[arg(long, default_value_t = 10_000)]
    max_iter: usize,
    /// RK4 step size.
    #[arg(long, default_value_t = 0.05)]
    step: f64,
    #[arg(long, default_value_t = 1000.0)]
    max_time: f64,
}

impl SolverArgs {
    fn semantics(&self, record: bool) -> Semantics {
        match self.semantics {
            SemanticsKind::Discrete => Semantics::Discrete(IterationConfig {
                tolerance: self.delta,
                max_iterations: self.max_iter,
                record_trajectory: record,
                ..Default::default()
            }),
            SemanticsKind::Continuous => Semantics::Continuous(IntegrationConfig {
                step: self.step,
                tolerance: self.delta,
                max_time: self.max_time,
                record_trajectory: record,
            }),
        }
    }
}

#[derive(Args)]
struct PropertiesArgs {
    /// QBAF to check (unit weights only).
    file: Option<PathBuf>,
    /// Number of random instances to check instead of a file.
    #[arg(long, conflicts_with = "file")]
    random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Equality tolerance for property conclusions.
    #[arg(long, default_value_t = 1e-4)]
    eq_tolerance: f64,
    /// Solver tolerance for the instance and companion solves.
    #[arg(long, default_value_t = 1e-12)]
    delta: f64,
    /// Write a JSON summary here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Perturb one strength per solve before checking.
    #[arg(long, hide = true)]
    inject_fault: Option<f64>,
}

#[derive(Args)]
struct TranslateArgs {
    /// Read a .qbaf file and write an .mlp file.
    #[arg(long, conflicts_with = "from_mlp", required_unless_present = "from_mlp")]
    to_mlp: bool,
    /// Read an .mlp file and write a .qbaf file.
    #[arg(long)]
    from_mlp: bool,
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the largest strength difference between both sides.
    #[arg(long)]
    verify: bool,
}

#[derive(Subcommand)]
enum GenCommand {
    /// Five-argument stock-trading example.
    Stock {
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        /// Base score override, e.g. `--base sell=0.7`.
        #[arg(long = "base", value_parser = parse_assignment)]
        bases: Vec<(String, f64)>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Two mutually attacking groups that support each other.
    Divergence {
        n_blue: usize,
        n_green: usize,
        beta_blue: f64,
        beta_green: f64,
        weight: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded random QBAF.
    Random {
        #[arg(long, default_value_t = 10)]
        args: usize,
        #[arg(long, default_value_t = 0.2)]
        density: f64,
        #[arg(long)]
        acyclic: bool,
        /// Largest weight magnitude; unit weights if omitted.
        #[arg(long)]
        max_weight: Option<f64>,
        #[arg(long)]
        max_in_degree: Option<usize>,
        /// Number of evenly spaced base-score levels.
        #[arg(long)]
        levels: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_assignment(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or("expected NAME=VALUE")?;
    let v = v.parse::<f64>().map_err(|e| e.to_string())?;
    Ok((k.to_string(), v))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load(path: &Path) -> Result<Qbaf> {
    parse_qbaf(&read(path)?).with_context(|| format!("invalid QBAF in {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => io::stdout().write_all(text.as_bytes()).context("cannot write to standard output"),
    }
}

fn exit_for(report: &SolveReport) -> u8 {
    if report.converged() {
        0
    } else {
        NON_CONVERGED
    }
}

fn cmd_solve(file: &Path, solver: &SolverArgs) -> Result<u8> {
    let q = load(file)?;
    let report = solver.semantics(false).solve(&q)?;
    let mut text = format!(
        "status: {}\nsteps: {}\nresidual: {}\n",
        report.status,
        report.steps,
        format_float(report.residual)
    );
    for (label, value) in q.labels().iter().zip(&report.interpretation.0) {
        match value {
            Some(v) => text.push_str(&format!("{label} {}\n", format_float(*v))),
            None => text.push_str(&format!("{label} ⊥\n")),
        }
    }
    emit(None, &text)?;
    Ok(exit_for(&report))
}

fn cmd_trace(file: &Path, solver: &SolverArgs, out: Option<&Path>) -> Result<u8> {
    let q = load(file)?;
    let report = solver.semantics(true).solve(&q)?;
    match out {
        Some(path) => {
            let f = fs::File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
            let mut sink = io::BufWriter::new(f);
            write_trajectory(&q, &report, &mut sink)?;
            eprintln!("{}: {} after {} steps", path.display(), report.status, report.steps);
        }
        None => write_trajectory(&q, &report, &mut io::stdout().lock())?,
    }
    Ok(exit_for(&report))
}

fn cmd_analyze(file: &Path, epsilon: f64) -> Result<u8> {
    let q = load(file)?;
    let r = analyze(&q);
    let wp = r.weight_times_parents();
    let verdict = if r.acyclic {
        "guaranteed (acyclic), linear-time evaluation".to_string()
    } else if r.guaranteed {
        format!("guaranteed, W·P = {} < 4", format_float(wp))
    } else {
        format!("not guaranteed, W·P = {}", format_float(wp))
    };
    let bound = match r.iteration_bound(epsilon)? {
        Some(n) => n.to_string(),
        None => "not applicable".to_string(),
    };
    let text = format!(
        "acyclic: {}\nmax parents P: {}\nmax weight W: {}\nW·P: {}\ncontraction W·P/4: {}\nverdict: {verdict}\niteration bound (epsilon {}): {bound}\n",
        r.acyclic,
        r.max_parents,
        format_float(r.max_weight),
        format_float(wp),
        format_float(r.contraction),
        format_float(epsilon)
    );
    emit(None, &text)?;
    Ok(0)
}

fn cmd_check(file: &Path) -> Result<u8> {
    let text = read(file)?;
    match parse_qbaf(&text) {
        Ok(q) => {
            println!("valid: {} arguments, {} edges", q.len(), q.edges().len());
            Ok(0)
        }
        Err(qbaf_core::Error::Validation(v)) => {
            for violation in &v.0 {
                println!("{violation}");
            }
            Ok(1)
        }
        Err(e) => Err(e.into()),
    }
}

fn property_table(rows: &[(PropertyId, [usize; 4])]) -> String {
    let mut text = format!("{:<24} {:>7} {:>7} {:>9} {:>10}\n", "property", "holds", "vacuous", "violated", "witnesses");
    for (p, [h, v, x, w]) in rows {
        text.push_str(&format!("{:<24} {h:>7} {v:>7} {x:>9} {w:>10}\n", p.name()));
    }
    text
}

fn cmd_properties(args: &PropertiesArgs) -> Result<u8> {
    let (rows, summary, counterexamples) = if let Some(n) = args.random {
        if n == 0 {
            bail!("--random needs at least one instance");
        }
        let report = run_suite(&SuiteConfig {
            instances: n,
            seed: args.seed,
            eq_tolerance: args.eq_tolerance,
            solve_tolerance: args.delta,
            fault: args.inject_fault,
            ..Default::default()
        })?;
        let rows: Vec<_> = report
            .summaries
            .iter()
            .map(|(p, s)| (*p, [s.holds, s.vacuous, s.violated, s.witnesses]))
            .collect();
        let counterexamples: Vec<_> = report
            .summaries
            .iter()
            .filter_map(|(p, s)| s.counterexample.as_ref().map(|c| (*p, c.clone())))
            .collect();
        let summary = json!({
            "instances": report.instances,
            "seed": args.seed,
            "resampled": report.resampled,
            "unsolved": report.unsolved.iter().map(|(e, n)| json!({"semantics": e, "count": n})).collect::<Vec<_>>(),
            "violations": report.violations(),
        });
        (rows, summary, counterexamples)
    } else {
        let Some(file) = &args.file else {
            bail!("give a file or --random N");
        };
        let q = load(file)?;
        let mut rows: Vec<(PropertyId, [usize; 4])> = PropertyId::ALL.iter().map(|&p| (p, [0; 4])).collect();
        let mut counterexamples = Vec::new();
        let mut unsolved = Vec::new();
        for sem in [Semantics::discrete(), Semantics::continuous()] {
            let sem = sem.with_tolerance(args.delta);
            let report = sem.solve(&q)?;
            let mut sigma = report.interpretation;
            if !sigma.is_fully_defined() {
                unsolved.push(sem.name());
                continue;
            }
            if let (Some(delta), Some(v)) = (args.inject_fault, sigma.0.first().copied().flatten()) {
                sigma.0[0] = Some(if v + delta <= 1.0 { v + delta } else { v - delta });
            }
            let cfg = CheckConfig {
                eq_tolerance: args.eq_tolerance,
                semantics: sem.clone(),
                seed: args.seed,
                ..Default::default()
            };
            for v in check_all(&q, &sigma, &cfg)? {
                let row = &mut rows[v.property as usize].1;
                row[3] += v.witnesses_checked;
                match v.status {
                    VerdictStatus::Holds => row[0] += 1,
                    VerdictStatus::VacuouslyHolds => row[1] += 1,
                    VerdictStatus::Violated => row[2] += 1,
                }
                if let Some(c) = v.counterexample {
                    counterexamples.push((v.property, format!("{}: {c}", sem.name())));
                }
            }
        }
        let violations: usize = rows.iter().map(|(_, r)| r[2]).sum();
        let summary = json!({
            "file": file.display().to_string(),
            "unsolved": unsolved,
            "violations": violations,
        });
        (rows, summary, counterexamples)
    };

    let mut text = property_table(&rows);
    for (p, c) in &counterexamples {
        text.push_str(&format!("counterexample ({p}): {c}\n"));
    }
    let violations: usize = rows.iter().map(|(_, r)| r[2]).sum();
    text.push_str(&format!("violations: {violations}\n"));
    emit(None, &text)?;

    if let Some(path) = &args.out {
        let mut summary = summary;
        summary["eq_tolerance"] = json!(args.eq_tolerance);
        summary["properties"] = rows
            .iter()
            .map(|(p, [h, v, x, w])| {
                json!({"property": p.name(), "holds": h, "vacuous": v, "violated": x, "witnesses": w})
            })
            .collect::<Vec<_>>()
            .into();
        summary["counterexamples"] = counterexamples
            .iter()
            .map(|(p, c)| json!({"property": p.name(), "description": c}))
            .collect::<Vec<_>>()
            .into();
        let text = serde_json::to_string_pretty(&summary)? + "\n";
        emit(Some(path), &text)?;
    }
    Ok(if violations == 0 { 0 } else { 1 })
}

fn compare_strengths(q: &Qbaf, other: &Qbaf) -> Result<f64> {
    let a = qbaf_core::solve_acyclic(q)?.strengths().context("undefined strengths")?;
    let b = qbaf_core::solve_acyclic(other)?.strengths().context("undefined strengths")?;
    let mut worst = 0.0f64;
    for id in q.ids() {
        let there = other.id_of(q.label(id)).context("argument lost in translation")?;
        worst = worst.max((a.get(id) - b.get(there)).abs());
    }
    Ok(worst)
}

fn cmd_translate(args: &TranslateArgs) -> Result<u8> {
    let text = read(&args.input)?;
    let (output, deviation) = if args.to_mlp {
        let q = parse_qbaf(&text).with_context(|| format!("invalid QBAF in {}", args.input.display()))?;
        let (m, x) = qbaf_to_mlp(&q)?;
        let deviation = if args.verify {
            let values = m.forward(&x)?;
            let sigma = qbaf_core::solve_acyclic(&q)?.strengths().context("undefined strengths")?;
            Some(
                q.ids()
                    .map(|a| (values[m.node_id(q.label(a)).unwrap()] - sigma.get(a)).abs())
                    .fold(0.0, f64::max),
            )
        } else {
            None
        };
        (serialize_mlp(&m, &x), deviation)
    } else {
        let (m, x) = parse_mlp(&text).with_context(|| format!("invalid MLP in {}", args.input.display()))?;
        let q = mlp_to_qbaf(&m, &x)?;
        let deviation = if args.verify {
            let values = m.forward(&x)?;
            let sigma = qbaf_core::solve_acyclic(&q)?.strengths().context("undefined strengths")?;
            let mut worst = q
                .ids()
                .map(|a| (values[m.node_id(q.label(a)).unwrap()] - sigma.get(a)).abs())
                .fold(0.0, f64::max);
            if !q.edges().is_empty() {
                let (m2, x2) = qbaf_to_mlp(&q)?;
                worst = worst.max(compare_strengths(&q, &mlp_to_qbaf(&m2, &x2)?)?);
            }
            Some(worst)
        } else {
            None
        };
        (serialize_qbaf(&q), deviation)
    };
    emit(args.out.as_deref(), &output)?;
    if let Some(d) = deviation {
        eprintln!("verify: max strength deviation {}", format_float(d));
    }
    Ok(0)
}

fn cmd_gen(cmd: &GenCommand) -> Result<u8> {
    let (q, out) = match cmd {
        GenCommand::Stock { scale, bases, out } => {
            let pairs: Vec<(&str, f64)> = bases.iter().map(|(k, v)| (k.as_str(), *v)).collect();
            (stock_example(*scale, &pairs)?, out)
        }
        GenCommand::Divergence {
            n_blue,
            n_green,
            beta_blue,
            beta_green,
            weight,
            out,
        } => (divergence_family(*n_blue, *n_green, *beta_blue, *beta_green, *weight)?, out),
        GenCommand::Random {
            args,
            density,
            acyclic,
            max_weight,
            max_in_degree,
            levels,
            seed,
            out,
        } => {
            let params = RandomQbafParams {
                n_args: *args,
                edge_density: *density,
                acyclic: *acyclic,
                weight_mode: max_weight.map_or(WeightMode::UnitSigned, WeightMode::BoundedMagnitude),
                seed: *seed,
                max_in_degree: *max_in_degree,
                base_score_levels: *levels,
                ..Default::default()
            };
            (random_qbaf(&params)?, out)
        }
    };
    emit(out.as_deref(), &serialize_qbaf(&q))?;
    Ok(0)
}

fn run(cli: Cli) -> Result<u8> {
    match &cli.command {
        Command::Solve { file, solver } => cmd_solve(file, solver),
        Command::Trace { file, solver, out } => cmd_trace(file, solver, out.as_deref()),
        Command::Analyze { file, epsilon } => cmd_analyze(file, *epsilon),
        Command::Check { file } => cmd_check(file),
        Command::Properties(args) => cmd_properties(args),
        Command::Translate(args) => cmd_translate(args),
        Command::Gen(cmd) => cmd_gen(cmd),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
