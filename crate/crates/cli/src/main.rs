//! `slopelab`: certified Dehn-filling verdicts from the command line.

mod report;
mod syntax;

use std::path::Path;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::json;

use slopelab::constructions::{
    bmt_conjugate, nonrigid_alpha, powered_product, separation_combine, separation_commutator, torus_gn,
};
use slopelab::fillings::slope_window;
use slopelab::oracles::{certify, sk_scan, Budget, DEFAULT_MAX_COSETS};
use slopelab::presentations::{parse_presentation, render_presentation};
use slopelab::psl2::{
    evaluate, fig8_holonomy, invariant_nonperipheral, invariant_peripheral, peripheral_test, trace,
    Representation, DEFAULT_TOLERANCE,
};
use slopelab::quasimorphs::{
    bavard_lower_estimate, brooks_count, defect_estimate, homogenize_estimate, BrooksSpec, DEFAULT_POWER,
};
use slopelab::{fill, figure_eight, torus_knot, Error, Presentation, Slope, Word};

use report::{CertifyReport, Meta, ScanReport, ScanRow};

#[derive(Debug)]
enum CliError {
    Usage(String),
    Internal(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidGroup(_) | Error::Certificate(_) => CliError::Internal(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn internal(e: impl std::fmt::Display) -> CliError {
    CliError::Internal(e.to_string())
}

#[derive(Parser, Debug)]
#[command(name = "slopelab", version, about = "Certified Dehn-filling verdicts for knot-group elements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a built-in knot group presentation.
    Present {
        /// `fig8`, or `torus P Q`.
        #[arg(required = true, num_args = 1..=3, allow_hyphen_values = true)]
        knot: Vec<String>,
    },
    /// Print the presentation of a Dehn filling.
    Fill {
        /// Presentation file (or `fig8`, `torus:P,Q`).
        file: String,
        #[arg(allow_hyphen_values = true)]
        slope: String,
    },
    /// Decide whether a word is trivial in a presented group.
    Certify {
        /// Presentation file (or `fig8`, `torus:P,Q`).
        file: String,
        /// Word; `[g,h]` and `g^h` sugar allowed.
        word: String,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Certify a word in every filling over a slope window.
    Scan {
        /// `fig8`, `torus P Q`, or a presentation file, followed by the word.
        #[arg(required = true, num_args = 2..=4)]
        args: Vec<String>,
        /// `p/q,...`, `A..B`, or `A..B denom D`.
        #[arg(long, required = true, allow_hyphen_values = true)]
        slopes: String,
        /// Emit CSV instead of JSON.
        #[arg(long)]
        csv: bool,
        /// Worker threads (defaults to available parallelism).
        #[arg(long)]
        jobs: Option<usize>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Build one of the standard element constructions.
    Build {
        #[command(subcommand)]
        which: BuildCommand,
    },
    /// Figure-eight holonomy queries.
    Holonomy {
        #[command(subcommand)]
        which: HolonomyCommand,
    },
    /// Brooks quasimorphism estimates on free-group words.
    Qm {
        #[command(subcommand)]
        which: QmCommand,
    },
}

#[derive(Args, Debug, Clone)]
struct BudgetArgs {
    /// Coset enumeration cap (default: $SLOPELAB_MAX_COSETS or 200000).
    #[arg(long)]
    max_cosets: Option<usize>,
    /// Largest symmetric group searched for quotients.
    #[arg(long, default_value_t = 6)]
    sym_max: usize,
    /// Primes p for PSL(2,p) quotient targets.
    #[arg(long, value_delimiter = ',', default_values_t = [5u64, 7, 11, 13])]
    psl2: Vec<u64>,
    /// Per-word timeout in seconds.
    #[arg(long)]
    timeout: Option<f64>,
    /// Include wall-clock times in the output.
    #[arg(long)]
    timings: bool,
}

impl BudgetArgs {
    fn budget(&self) -> CliResult<Budget> {
        let max_cosets = match self.max_cosets {
            Some(n) => n,
            None => match std::env::var("SLOPELAB_MAX_COSETS") {
                Ok(v) => v
                    .trim()
                    .parse()
                    .map_err(|_| CliError::Usage(format!("SLOPELAB_MAX_COSETS is not a count: `{v}`")))?,
                Err(_) => DEFAULT_MAX_COSETS,
            },
        };
        let timeout_ms = match self.timeout {
            Some(s) if s.is_finite() && s > 0.0 => Some(Duration::from_secs_f64(s).as_millis() as u64),
            Some(s) => return Err(CliError::Usage(format!("timeout must be positive, got {s}"))),
            None => None,
        };
        Ok(Budget {
            max_cosets,
            sym_max: self.sym_max,
            psl2_primes: self.psl2.clone(),
            timeout_ms,
            ..Budget::default()
        })
    }
}

#[derive(Args, Debug)]
struct KnotArg {
    /// Group the words live in: `fig8`, `torus:P,Q`, or a presentation file.
    #[arg(long, default_value = "fig8")]
    knot: String,
}

#[derive(Subcommand, Debug)]
enum BuildCommand {
    /// `g^{g^α} g⁻²`.
    Bmt {
        g: String,
        alpha: String,
        #[command(flatten)]
        knot: KnotArg,
    },
    /// The torus-knot family `g_n` for T(p,q).
    TorusGn {
        #[arg(allow_hyphen_values = true)]
        p: i64,
        #[arg(allow_hyphen_values = true)]
        q: i64,
        n: u32,
    },
    /// `[a g a⁻¹, σ]`.
    SepComm {
        a: String,
        g: String,
        sigma: String,
        #[command(flatten)]
        knot: KnotArg,
    },
    /// `h^{qstep·n1·n2+1} g^{n1·n2}`.
    SepCombine {
        h: String,
        g: String,
        qstep: u32,
        n1: u32,
        n2: u32,
        #[command(flatten)]
        knot: KnotArg,
    },
    /// `gᵐ hⁿ`.
    Powered {
        g: String,
        h: String,
        #[arg(allow_hyphen_values = true)]
        m: i64,
        #[arg(allow_hyphen_values = true)]
        n: i64,
        #[command(flatten)]
        knot: KnotArg,
    },
    /// `g^{p+pm−1} s g^{1−p} s⁻¹`.
    AlphaM {
        g: String,
        s: String,
        p: u32,
        m: u32,
        #[command(flatten)]
        knot: KnotArg,
    },
}

#[derive(Args, Debug)]
struct RepArg {
    /// Representation file (JSON); validated against --knot before use.
    #[arg(long)]
    rep: Option<String>,
    #[command(flatten)]
    knot: KnotArg,
}

#[derive(Subcommand, Debug)]
enum HolonomyCommand {
    /// Trace (up to sign) and matrix of a word's image.
    Trace {
        word: String,
        #[command(flatten)]
        rep: RepArg,
    },
    /// Whether a word's image is parabolic or trivial.
    Peripheral {
        word: String,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
        #[command(flatten)]
        rep: RepArg,
    },
    /// Closed-form trace invariants; complex numbers as `re,im`.
    Invariant {
        #[command(subcommand)]
        which: InvariantCommand,
    },
}

#[derive(Subcommand, Debug)]
enum InvariantCommand {
    /// Diagonal g: `(α−α⁻¹)²((xu)² − xu) − 1`.
    Nonperipheral {
        #[arg(allow_hyphen_values = true)]
        alpha: String,
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        u: String,
    },
    /// Parabolic g: `2z⁴α⁴ + 2`.
    Peripheral {
        #[arg(allow_hyphen_values = true)]
        alpha: String,
        #[arg(allow_hyphen_values = true)]
        z: String,
    },
}

#[derive(Subcommand, Debug)]
enum QmCommand {
    /// Signed pattern count.
    Count { pattern: String, word: String },
    /// `φ(gᴺ)/N`.
    Homog {
        pattern: String,
        word: String,
        #[arg(short = 'n', long, default_value_t = DEFAULT_POWER)]
        power: u32,
    },
    /// Largest observed homogenized defect over `g:h` pairs.
    Defect {
        pattern: String,
        #[arg(required = true)]
        pairs: Vec<String>,
        #[arg(short = 'n', long, default_value_t = DEFAULT_POWER)]
        power: u32,
    },
    /// `|φ̂(g)| / 2D` for a supplied defect bound D.
    Bavard {
        pattern: String,
        word: String,
        #[arg(long, allow_hyphen_values = true)]
        defect_bound: f64,
        #[arg(short = 'n', long, default_value_t = DEFAULT_POWER)]
        power: u32,
    },
}

fn load_group(spec: &str) -> CliResult<Presentation> {
    if spec == "fig8" {
        return Ok(figure_eight());
    }
    if let Some(rest) = spec.strip_prefix("torus:") {
        let (p, q) = rest
            .split_once(',')
            .ok_or_else(|| CliError::Usage(format!("expected torus:P,Q, got `{spec}`")))?;
        return Ok(torus_knot(parse_int(p)?, parse_int(q)?)?);
    }
    let text = std::fs::read_to_string(Path::new(spec))
        .map_err(|e| CliError::Usage(format!("cannot read `{spec}`: {e}")))?;
    Ok(parse_presentation(&text)?)
}

fn parse_int(s: &str) -> CliResult<i64> {
    s.trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("expected an integer, got `{s}`")))
}

fn knot_from_words(words: &[String]) -> CliResult<Presentation> {
    match words {
        [k] => load_group(k),
        [t, p, q] if t == "torus" => Ok(torus_knot(parse_int(p)?, parse_int(q)?)?),
        _ => Err(CliError::Usage(format!("expected `fig8` or `torus P Q`, got `{}`", words.join(" ")))),
    }
}

fn parse_slopes(text: &str) -> CliResult<Vec<Slope>> {
    let args: Vec<&str> = text.split_whitespace().skip_while(|a| *a == "window").collect();
    let window = |range: &str, denom: i64| -> CliResult<Vec<Slope>> {
        let (lo, hi) = range
            .split_once("..")
            .ok_or_else(|| CliError::Usage(format!("expected A..B, got `{range}`")))?;
        Ok(slope_window(parse_int(lo)?, parse_int(hi)?, denom)?)
    };
    let mut slopes = match args.as_slice() {
        [range] if range.contains("..") => window(range, 1)?,
        [list] => list
            .split(',')
            .map(|s| s.trim().parse::<Slope>().map_err(CliError::from))
            .collect::<CliResult<_>>()?,
        [range, "denom", d] => window(range, parse_int(d)?)?,
        _ => return Err(CliError::Usage(format!("cannot read slopes `{}`", args.join(" ")))),
    };
    slopes.sort();
    slopes.dedup();
    Ok(slopes)
}

fn is_slope_piece(token: &str) -> bool {
    matches!(token, "window" | "denom")
        || token.split(',').all(|part| {
            part == "inf"
                || (!part.is_empty()
                    && part
                        .chars()
                        .all(|c| c.is_ascii_digit() || matches!(c, '-' | '+' | '/' | '.')))
        })
}

/// Joins `--slopes A..B denom D` into one argument so the window form reads
/// naturally on the command line.
fn fold_slopes(args: Vec<String>) -> Vec<String> {
    let mut out = Vec::with_capacity(args.len());
    let mut it = args.into_iter().peekable();
    while let Some(a) = it.next() {
        if a != "--slopes" {
            out.push(a);
            continue;
        }
        let mut pieces = Vec::new();
        while let Some(next) = it.peek() {
            if pieces.len() == 4 || !is_slope_piece(next) {
                break;
            }
            pieces.push(it.next().expect("peeked"));
        }
        out.push(format!("--slopes={}", pieces.join(" ")));
    }
    out
}

fn print_json(value: &impl serde::Serialize) -> CliResult<()> {
    println!("{}", serde_json::to_string_pretty(value).map_err(internal)?);
    Ok(())
}

fn complex_arg(s: &str) -> CliResult<Complex64> {
    let parts: Vec<&str> = s.split(',').collect();
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| CliError::Usage(format!("expected `re,im`, got `{s}`")))
    };
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(CliError::Usage(format!("expected `re,im`, got `{s}`"))),
    }
}

fn complex_json(z: Complex64) -> serde_json::Value {
    json!([z.re, z.im])
}

fn representation(arg: &RepArg) -> CliResult<(Presentation, Representation)> {
    let pres = load_group(&arg.knot.knot)?;
    let rep = match &arg.rep {
        None if pres.name == "fig8" => fig8_holonomy(),
        None => return Err(CliError::Usage("--rep is required for groups other than fig8".into())),
        Some(path) => {
            let text =
                std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read `{path}`: {e}")))?;
            let mut rep = Representation::from_json(&text)?;
            rep.validate(&pres)?;
            rep
        }
    };
    Ok((pres, rep))
}

fn run_build(which: BuildCommand) -> CliResult<Word> {
    let word = |knot: &KnotArg, texts: &[&str]| -> CliResult<Vec<Word>> {
        let pres = load_group(&knot.knot)?;
        texts
            .iter()
            .map(|t| syntax::parse(t, &pres.alphabet).map_err(CliError::from))
            .collect()
    };
    Ok(match which {
        BuildCommand::Bmt { g, alpha, knot } => {
            let w = word(&knot, &[&g, &alpha])?;
            bmt_conjugate(&w[0], &w[1])
        }
        BuildCommand::TorusGn { p, q, n } => torus_gn(p, q, n)?,
        BuildCommand::SepComm { a, g, sigma, knot } => {
            let w = word(&knot, &[&a, &g, &sigma])?;
            separation_commutator(&w[0], &w[1], &w[2])
        }
        BuildCommand::SepCombine {
            h,
            g,
            qstep,
            n1,
            n2,
            knot,
        } => {
            let w = word(&knot, &[&h, &g])?;
            separation_combine(&w[0], &w[1], qstep, n1, n2)?
        }
        BuildCommand::Powered { g, h, m, n, knot } => {
            let w = word(&knot, &[&g, &h])?;
            powered_product(&w[0], &w[1], m, n)?
        }
        BuildCommand::AlphaM { g, s, p, m, knot } => {
            let w = word(&knot, &[&g, &s])?;
            nonrigid_alpha(&w[0], &w[1], p, m)?
        }
    })
}

fn run_holonomy(which: HolonomyCommand) -> CliResult<()> {
    match which {
        HolonomyCommand::Trace { word, rep } => {
            let (pres, rep) = representation(&rep)?;
            let w = syntax::parse(&word, &pres.alphabet)?;
            let m = evaluate(&rep, &w)?;
            print_json(&json!({
                "word": w.to_string(),
                "trace": complex_json(trace(&m)),
                "matrix": [[complex_json(m.a), complex_json(m.b)], [complex_json(m.c), complex_json(m.d)]],
            }))
        }
        HolonomyCommand::Peripheral { word, tol, rep } => {
            let (pres, rep) = representation(&rep)?;
            let w = syntax::parse(&word, &pres.alphabet)?;
            let peripheral = peripheral_test(&rep, &w, tol)?;
            print_json(&json!({
                "word": w.to_string(),
                "peripheral": peripheral,
                "trace": complex_json(trace(&evaluate(&rep, &w)?)),
            }))
        }
        HolonomyCommand::Invariant { which } => {
            let value = match which {
                InvariantCommand::Nonperipheral { alpha, x, u } => {
                    invariant_nonperipheral(complex_arg(&alpha)?, complex_arg(&x)?, complex_arg(&u)?)
                }
                InvariantCommand::Peripheral { alpha, z } => {
                    invariant_peripheral(complex_arg(&alpha)?, complex_arg(&z)?)
                }
            };
            print_json(&json!({ "value": complex_json(value) }))
        }
    }
}

fn run_qm(which: QmCommand) -> CliResult<()> {
    let spec_and = |pattern: &str, words: &[&str]| -> CliResult<(BrooksSpec, Vec<Word>)> {
        let alphabet = syntax::infer_alphabet(std::iter::once(pattern).chain(words.iter().copied()))?;
        let spec = BrooksSpec::new(&alphabet, syntax::parse(pattern, &alphabet)?)?;
        let ws = words
            .iter()
            .map(|t| syntax::parse(t, &alphabet).map_err(CliError::from))
            .collect::<CliResult<_>>()?;
        Ok((spec, ws))
    };
    match which {
        QmCommand::Count { pattern, word } => {
            let (spec, w) = spec_and(&pattern, &[&word])?;
            print_json(&json!({ "count": brooks_count(&spec, &w[0])? }))
        }
        QmCommand::Homog { pattern, word, power } => {
            let (spec, w) = spec_and(&pattern, &[&word])?;
            print_json(&json!({ "estimate": homogenize_estimate(&spec, &w[0], power)?, "power": power }))
        }
        QmCommand::Defect { pattern, pairs, power } => {
            let mut texts = Vec::new();
            for p in &pairs {
                let (g, h) = p
                    .split_once(':')
                    .ok_or_else(|| CliError::Usage(format!("expected g:h, got `{p}`")))?;
                texts.push(g);
                texts.push(h);
            }
            let (spec, w) = spec_and(&pattern, &texts)?;
            let sample: Vec<(Word, Word)> = w.chunks(2).map(|c| (c[0].clone(), c[1].clone())).collect();
            print_json(&json!({
                "defect_lower_estimate": defect_estimate(&spec, &sample, power)?,
                "power": power,
                "samples": sample.len(),
            }))
        }
        QmCommand::Bavard {
            pattern,
            word,
            defect_bound,
            power,
        } => {
            let (spec, w) = spec_and(&pattern, &[&word])?;
            print_json(&bavard_lower_estimate(&spec, &w[0], power, defect_bound)?)
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Present { knot } => {
            print!("{}", render_presentation(&knot_from_words(&knot)?));
            Ok(())
        }
        Command::Fill { file, slope } => {
            let pres = load_group(&file)?;
            let r: Slope = slope.parse()?;
            print!("{}", render_presentation(&fill(&pres, r)?));
            Ok(())
        }
        Command::Certify { file, word, budget } => {
            let pres = load_group(&file)?;
            let w = syntax::parse(&word, &pres.alphabet)?;
            let mut v = certify(&pres, &w, &budget.budget()?)?;
            if !budget.timings {
                v = v.without_timing();
            }
            print_json(&CertifyReport {
                schema: report::SCHEMA,
                presentation: pres.name.clone(),
                element: w.to_string(),
                verdict: v.verdict,
                certificate: v.certificate,
                budgets: v.budgets,
            })
        }
        Command::Scan {
            args,
            slopes,
            csv,
            jobs,
            budget,
        } => {
            let (word, knot) = args.split_last().expect("clap enforces two or more");
            let pres = knot_from_words(knot)?;
            let w = syntax::parse(word, &pres.alphabet)?;
            let slopes = parse_slopes(&slopes)?;
            let b = budget.budget()?;
            let mut pool = rayon::ThreadPoolBuilder::new();
            if let Some(n) = jobs {
                if n == 0 {
                    return Err(CliError::Usage("--jobs must be at least 1".into()));
                }
                pool = pool.num_threads(n);
            }
            let pool = pool.build().map_err(internal)?;
            let verdicts = pool.install(|| sk_scan(&pres, &w, &slopes, &b))?;
            let rows = verdicts
                .into_iter()
                .map(|(slope, v)| {
                    let v = if budget.timings { v } else { v.without_timing() };
                    ScanRow {
                        slope,
                        verdict: v.verdict,
                        certificate: v.certificate,
                        budgets: v.budgets,
                    }
                })
                .collect();
            let report = ScanReport::new(pres.name.clone(), w.to_string(), rows, Meta::new(b));
            if csv {
                print!("{}", report.to_csv().map_err(internal)?);
                Ok(())
            } else {
                print_json(&report)
            }
        }
        Command::Build { which } => {
            println!("{}", run_build(which)?);
            Ok(())
        }
        Command::Holonomy { which } => run_holonomy(which),
        Command::Qm { which } => run_qm(which),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse_from(fold_slopes(std::env::args().collect())) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(2)
        }
    }
}
