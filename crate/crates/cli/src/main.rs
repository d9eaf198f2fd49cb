//! `liftcoc`: evaluate and verify Lifting cocycles from the command line.
//!
//! Exit codes: 0 when every check passes, 1 on a mismatch or failed check,
//! 2 on usage, parse or evaluation errors.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use liftcoc::ce::{find_cycles, DEFAULT_DIMENSION_CAP};
use liftcoc::lifting::{derivations_for, twisted_generators, CocycleSpec, Formula};
use liftcoc::parse::{parse_expr, parse_symbol, Expr};
use liftcoc::rational::{self, Rational};
use liftcoc::repro::{self, ExperimentReport, STABILITY_SLACK};
use liftcoc::verify::{algebra_suite, verify_cocycle, RandomShape};
use liftcoc::{AugmentedOp, TruncationPolicy};

#[derive(Parser, Debug)]
#[command(name = "liftcoc", version, about = "Exact evaluation of Lifting cocycles")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Truncation depth of every symbol.
    #[arg(long, global = true, env = "LIFTCOC_DEPTH", default_value_t = TruncationPolicy::DEFAULT_DEPTH)]
    depth: u32,
    /// Seed for random inputs.
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    /// Worker threads for the parallel sums (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Number of variables (default: inferred from the input).
    #[arg(long, global = true)]
    vars: Option<usize>,
    /// Print JSON (the default).
    #[arg(long, global = true, conflicts_with = "table")]
    json: bool,
    /// Print a human-readable table instead of JSON.
    #[arg(long, global = true)]
    table: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Noncommutative residue of a symbol expression.
    Residue { expr: String },
    /// Value of a Lifting cocycle on comma-separated operator expressions.
    Eval {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        s: usize,
        #[arg(long, allow_hyphen_values = true)]
        args: String,
        /// Prepend the twisted generators for this λ to the arguments.
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        #[arg(long, value_enum)]
        formula: Option<FormulaArg>,
    },
    /// Randomized verification suites.
    Verify {
        #[command(subcommand)]
        what: VerifyCommand,
    },
    /// Basis of the Lie-homology cycles of gl_M over the given coefficients.
    Cycles {
        #[arg(long)]
        gl: usize,
        #[arg(long)]
        degree: usize,
        /// Comma-separated coefficient symbols.
        #[arg(long, default_value = "1")]
        basis: String,
        #[arg(long, default_value_t = DEFAULT_DIMENSION_CAP)]
        cap: usize,
    },
    /// Reproduce the published computations.
    Reproduce {
        #[command(subcommand)]
        section: Section,
    },
}

#[derive(Subcommand, Debug)]
enum VerifyCommand {
    /// δΨ = 0 on seeded random tuples.
    Cocycle {
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        s: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        /// Matrix window size.
        #[arg(long, default_value_t = 2)]
        gl: usize,
        /// Maximal total degree of the polynomial entries.
        #[arg(long, default_value_t = 2)]
        maxdeg: u32,
        #[arg(long, value_enum)]
        formula: Option<FormulaArg>,
    },
    /// Trace, derivation, curvature and cyclic-condition checks.
    Algebra {
        #[arg(long, default_value_t = 100)]
        instances: usize,
    },
}

#[derive(Subcommand, Debug)]
enum Section {
    #[command(name = "4.3.4")]
    Projective,
    #[command(name = "4.3.5")]
    Twisted {
        #[arg(long, allow_hyphen_values = true, default_value = "-2,-1,0,1,2,3")]
        lambdas: String,
    },
    #[command(name = "4.4")]
    Grouped {
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormulaArg {
    Leading,
    Intervals,
    Paired,
    Even,
    Circles,
}

impl From<FormulaArg> for Formula {
    fn from(f: FormulaArg) -> Self {
        match f {
            FormulaArg::Leading => Formula::Leading,
            FormulaArg::Intervals => Formula::MarkedIntervals,
            FormulaArg::Paired => Formula::PairedDerivations,
            FormulaArg::Even => Formula::EvenSequences,
            FormulaArg::Circles => Formula::MarkedCircles,
        }
    }
}

/// A failure that maps to exit code 2.
struct Usage(String);

impl From<liftcoc::Error> for Usage {
    fn from(e: liftcoc::Error) -> Self {
        Usage(e.to_string())
    }
}

type CmdResult = Result<bool, Usage>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.global.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> CmdResult {
    let g = &cli.global;
    if g.depth == 0 {
        return Err(Usage("--depth must be at least 1".into()));
    }
    match &cli.command {
        Command::Residue { expr } => residue(g, expr),
        Command::Eval {
            k,
            s,
            args,
            lambda,
            formula,
        } => eval(g, *k, *s, args, lambda.as_deref(), *formula),
        Command::Verify { what } => match what {
            VerifyCommand::Cocycle {
                k,
                s,
                trials,
                gl,
                maxdeg,
                formula,
            } => verify_cocycle_cmd(g, *k, *s, *trials, *gl, *maxdeg, *formula),
            VerifyCommand::Algebra { instances } => verify_algebra(g, *instances),
        },
        Command::Cycles { gl, degree, basis, cap } => cycles(g, *gl, *degree, basis, *cap),
        Command::Reproduce { section } => reproduce(g, section),
    }
}

/// Splits on commas outside brackets and parentheses.
fn split_top_level(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut level = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' | '[' => level += 1,
            ')' | ']' => level -= 1,
            ',' if level == 0 => {
                out.push(text[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(text[start..].trim());
    out.retain(|s| !s.is_empty());
    out
}

fn parse_all(texts: &[&str]) -> Result<Vec<Expr>, Usage> {
    texts
        .iter()
        .map(|t| parse_expr(t).map_err(|e| Usage(format!("in `{t}`: {e}"))))
        .collect()
}

fn nvars_for(g: &Global, exprs: &[Expr], minimum: usize) -> usize {
    let inferred = exprs.iter().map(Expr::max_variable).max().unwrap_or(0);
    g.vars.unwrap_or(inferred.max(minimum)).max(1)
}

fn parse_rational(text: &str) -> Result<Rational, Usage> {
    rational::parse(text).ok_or_else(|| Usage(format!("not a rational number: `{text}`")))
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("output serializes"));
}

#[derive(Serialize)]
struct ResidueOut {
    expr: String,
    depth: u32,
    #[serde(with = "rational::serde_str")]
    residue: Rational,
}

fn residue(g: &Global, text: &str) -> CmdResult {
    let expr = parse_all(&[text])?;
    let nvars = nvars_for(g, &expr, 1);
    let sym = parse_symbol(text, nvars, g.depth)?;
    let out = ResidueOut {
        expr: text.to_string(),
        depth: g.depth,
        residue: sym.residue(),
    };
    if g.table {
        println!("{}", rational::to_string(&out.residue));
    } else {
        print_json(&out);
    }
    Ok(true)
}

#[derive(Serialize)]
struct PartOut {
    part: String,
    #[serde(with = "rational::serde_str")]
    value: Rational,
}

#[derive(Serialize)]
struct EvalOut {
    k: usize,
    s: usize,
    arity: usize,
    nvars: usize,
    depth: u32,
    formula: String,
    #[serde(with = "rational::serde_str")]
    value: Rational,
    stable: bool,
    parts: Vec<PartOut>,
}

fn eval(g: &Global, k: usize, s: usize, args: &str, lambda: Option<&str>, formula: Option<FormulaArg>) -> CmdResult {
    let texts = split_top_level(args);
    let exprs = parse_all(&texts)?;
    let lambda = lambda.map(parse_rational).transpose()?;
    let nvars = nvars_for(g, &exprs, k.div_ceil(2));
    if nvars < k.div_ceil(2) {
        return Err(Usage(format!(
            "{k} derivations need at least {} variables",
            k.div_ceil(2)
        )));
    }
    let build = |depth: u32| -> Result<(CocycleSpec, Vec<AugmentedOp>), Usage> {
        let ders = derivations_for(k);
        let spec = match formula {
            Some(f) => CocycleSpec::with_formula(ders, s, f.into(), depth)?,
            None => CocycleSpec::new(ders, s, depth)?,
        };
        let mut ops = match &lambda {
            Some(l) => twisted_generators(nvars, l, depth),
            None => Vec::new(),
        };
        for e in &exprs {
            ops.push(e.lower(nvars, depth)?);
        }
        Ok((spec, ops))
    };
    let (spec, ops) = build(g.depth)?;
    let parts = spec.psi_parts(&ops)?;
    let (deeper_spec, deeper_ops) = build(g.depth + STABILITY_SLACK)?;
    let deeper = deeper_spec.psi(&deeper_ops)?;
    let value = parts.iter().fold(Rational::from_integer(0.into()), |a, (_, v)| a + v);
    let out = EvalOut {
        k,
        s,
        arity: spec.arity(),
        nvars,
        depth: g.depth,
        formula: format!("{:?}", spec.formula()),
        stable: value == deeper,
        value,
        parts: parts
            .into_iter()
            .map(|(p, v)| PartOut {
                part: p.to_string(),
                value: v,
            })
            .collect(),
    };
    if g.table {
        for p in &out.parts {
            println!("{:12} {}", p.part, rational::to_string(&p.value));
        }
        println!("{:12} {}", "total", rational::to_string(&out.value));
        println!("{:12} {}", "stable", out.stable);
    } else {
        print_json(&out);
    }
    Ok(out.stable)
}

fn verify_cocycle_cmd(
    g: &Global,
    k: usize,
    s: usize,
    trials: usize,
    gl: usize,
    maxdeg: u32,
    formula: Option<FormulaArg>,
) -> CmdResult {
    let ders = derivations_for(k);
    let nvars = g.vars.unwrap_or(k.div_ceil(2)).max(k.div_ceil(2));
    let spec = match formula {
        Some(f) => CocycleSpec::with_formula(ders, s, f.into(), g.depth)?,
        None => CocycleSpec::new(ders, s, g.depth)?,
    };
    let shape = RandomShape::new(nvars, gl, maxdeg, g.depth);
    let report = verify_cocycle(&spec, &shape, trials, g.seed, STABILITY_SLACK)?;
    if g.table {
        println!(
            "k={} s={} arity={} depth={}",
            report.k, report.s, report.arity, report.depth
        );
        for t in &report.trials {
            println!(
                "trial {:3}  δΨ = {:>8}  stable {}",
                t.trial,
                rational::to_string(&t.value),
                t.stable
            );
        }
    } else {
        print_json(&report);
    }
    Ok(report.passed())
}

fn verify_algebra(g: &Global, instances: usize) -> CmdResult {
    let checks = algebra_suite(g.seed, instances, g.depth);
    if g.table {
        for c in &checks {
            let status = if c.passed() { "ok" } else { "FAILED" };
            println!(
                "{:48} {:>5} instances  {:>4} failures  {status}",
                c.name, c.instances, c.failures
            );
        }
    } else {
        print_json(&checks);
    }
    Ok(checks.iter().all(|c| c.passed()))
}

#[derive(Serialize)]
struct CyclesOut {
    gl: usize,
    degree: usize,
    basis: Vec<String>,
    cycles: Vec<String>,
}

fn cycles(g: &Global, gl: usize, degree: usize, basis: &str, cap: usize) -> CmdResult {
    let texts = split_top_level(basis);
    let exprs = parse_all(&texts)?;
    let nvars = nvars_for(g, &exprs, 1);
    let coefficients = texts
        .iter()
        .map(|t| parse_symbol(t, nvars, g.depth))
        .collect::<liftcoc::Result<Vec<_>>>()?;
    let found = find_cycles(gl, degree, &coefficients, cap)?;
    let out = CyclesOut {
        gl,
        degree,
        basis: texts.iter().map(|t| t.to_string()).collect(),
        cycles: found.iter().map(|c| c.to_string()).collect(),
    };
    if g.table {
        println!("{} cycles", out.cycles.len());
        for c in &out.cycles {
            println!("{c}");
        }
    } else {
        print_json(&out);
    }
    Ok(true)
}

fn reproduce(g: &Global, section: &Section) -> CmdResult {
    let reports: Vec<ExperimentReport> = match section {
        Section::Projective => repro::run_4_3_4(g.depth)?,
        Section::Twisted { lambdas } => {
            let values = split_top_level(lambdas)
                .into_iter()
                .map(parse_rational)
                .collect::<Result<Vec<_>, _>>()?;
            repro::run_4_3_5(&values, g.depth)?
        }
        Section::Grouped { n } => {
            if *n == 0 {
                return Err(Usage("--n must be at least 1".into()));
            }
            repro::run_4_4(*n, g.depth)?
        }
    };
    if g.table {
        print!("{}", repro::render_table(&reports));
    } else {
        println!("{}", repro::to_json(&reports));
    }
    Ok(reports.iter().all(ExperimentReport::passed))
}
