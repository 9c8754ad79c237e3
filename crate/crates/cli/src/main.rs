//! `zcousin`: evaluate, verify, scan for zeros, and emit figure data.
//!
//! Exit codes: 0 success, 1 verification failure or I/O error, 2 bad
//! arguments, 3 domain error, 4 quadrature non-convergence.

mod config;
mod literal;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use zeta_cousin::figures::{figure_curves, FigureCurve, DEFAULT_STEP};
use zeta_cousin::phi::{f_fn, g_fn, h_fn, phi, CriticalStripPoint};
use zeta_cousin::plot::format_sig;
use zeta_cousin::polylog::{partial_polylog_continued, polylog_continued, PolylogParams};
use zeta_cousin::verify::{run_suite, Status, Suite};
use zeta_cousin::zeros::{scan, ScanRegion, ScanSettings};
use zeta_cousin::zeta_eta::{eta_formula, evaluate_eta, ZetaValue};
use zeta_cousin::Estimate;

use config::{Format, RunConfig};
use literal::{parse_complex, parse_range};

#[derive(Parser, Debug)]
#[command(name = "zcousin", version, about = "Polylogarithm, eta/zeta and phi evaluation, identity checks and zero scans")]
struct Cli {
    /// JSON file overriding the default run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Relative quadrature tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Worker threads for grid evaluations.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one function at a point.
    Eval {
        #[arg(long, value_enum)]
        function: Function,
        #[arg(long, allow_hyphen_values = true)]
        k: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        m: Option<String>,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long, allow_hyphen_values = true)]
        r: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        t: Option<f64>,
    },
    /// Run an identity suite and report per-case residuals.
    Verify {
        #[arg(long, value_parser = parse_suite)]
        suite: Suite,
        /// Also write the report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scan a rectangle of the critical strip for zeros.
    Zeros {
        /// `a:b` or `a:b:step` (default step 0.05).
        #[arg(long)]
        r: String,
        /// `a:b` or `a:b:step` (default step 0.05).
        #[arg(long)]
        t: String,
        /// Write the candidate table here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the curves of one figure, one file per curve.
    Plot {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
        figure: u8,
        /// Output directory (default: the configured output_dir).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Sampling step in t.
        #[arg(long, default_value_t = DEFAULT_STEP)]
        step: f64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Function {
    Eta,
    Zeta,
    Phi,
    H,
    F,
    G,
    Polylog,
    PartialPolylog,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse::<Suite>().map_err(|_| {
        let names: Vec<_> = Suite::ALL.iter().map(|s| s.as_str()).collect();
        format!("expected one of {}", names.join(", "))
    })
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Parse(#[from] literal::ParseError),
    #[error("verification failed: {0}")]
    Verify(String),
    #[error("{0}")]
    Coverage(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    use zeta_cousin::Error as E;
    if let Some(c) = e.downcast_ref::<CliError>() {
        return match c {
            CliError::Usage(_) | CliError::Parse(_) => {
                eprintln!("usage: zcousin <eval|verify|zeros|plot> --help");
                2
            }
            CliError::Verify(_) => 1,
            CliError::Coverage(_) => 4,
        };
    }
    match e.downcast_ref::<E>() {
        Some(E::Domain(_) | E::Pole(_) | E::Undefined(_)) => 3,
        Some(E::NonConvergence { value, error_estimate, .. }) => {
            eprintln!("partial value: {} ± {error_estimate:.1e}", format_complex(*value));
            4
        }
        Some(E::Integrand { .. }) => 4,
        None => 1,
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(tol) = cli.tol {
        if !(tol > 0.0) {
            return Err(CliError::Usage(format!("--tol must be positive, got {tol}")).into());
        }
        cfg.set_tol(tol);
    }
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()).into());
        }
        cfg.threads = threads;
    }
    if let Some(format) = cli.format {
        cfg.output_format = format;
    }
    cfg.quadrature().validate()?;
    match cli.command {
        Command::Eval { function, k, m, n, r, t } => cmd_eval(function, Args { k, m, n, r, t }, &cfg),
        Command::Verify { suite, out } => cmd_verify(suite, out.as_deref(), &cfg),
        Command::Zeros { r, t, out } => cmd_zeros(&r, &t, out.as_deref(), &cfg),
        Command::Plot { figure, out, step } => cmd_plot(figure, out, step, &cfg),
    }
}

struct Args {
    k: Option<String>,
    m: Option<String>,
    n: Option<u64>,
    r: Option<f64>,
    t: Option<f64>,
}

impl Args {
    fn complex(value: &Option<String>, flag: &str) -> anyhow::Result<Complex64> {
        let s = value
            .as_deref()
            .ok_or_else(|| CliError::Usage(format!("this function needs --{flag}")))?;
        Ok(parse_complex(s).map_err(CliError::from)?)
    }

    fn k(&self) -> anyhow::Result<Complex64> {
        Self::complex(&self.k, "k")
    }

    fn m(&self) -> anyhow::Result<Complex64> {
        Self::complex(&self.m, "m")
    }

    /// `--r/--t`, or `--k r+ti`.
    fn strip_point(&self) -> anyhow::Result<CriticalStripPoint> {
        match (self.r, self.t, &self.k) {
            (Some(r), Some(t), _) => Ok(CriticalStripPoint::new(r, t)),
            (None, None, Some(_)) => {
                let k = self.k()?;
                Ok(CriticalStripPoint::new(k.re, k.im))
            }
            _ => Err(CliError::Usage("f and g need --r and --t (or --k r+ti)".into()).into()),
        }
    }
}

/// Arguments as given, without padding.
fn format_arg(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{}{}{}i", z.re, if z.im < 0.0 { "-" } else { "+" }, z.im.abs())
    }
}

/// Nine decimals; the imaginary part is dropped once it rounds to zero.
fn format_complex(z: Complex64) -> String {
    if z.im.abs() < 5e-10 {
        format!("{:.9}", z.re)
    } else {
        format!("{:.9}{:+.9}i", z.re, z.im)
    }
}

fn cmd_eval(function: Function, args: Args, cfg: &RunConfig) -> anyhow::Result<()> {
    let q = cfg.quadrature();
    let start = Instant::now();
    let (label, estimate): (String, Option<Estimate>) = match function {
        Function::Eta => {
            let k = args.k()?;
            (format!("eta({})", format_arg(k)), Some(eta_formula(k, &q)?))
        }
        Function::Zeta => {
            let k = args.k()?;
            let e = evaluate_eta(k, &q)?;
            let value = match e.zeta {
                ZetaValue::Defined(z) => Some(Estimate {
                    value: z,
                    // zeta = eta / (1 - 2^(1-k))
                    error: e.quadrature_error / (1.0 - Complex64::new(2.0, 0.0).powc(1.0 - k)).norm(),
                }),
                ZetaValue::Undefined => None,
            };
            (format!("zeta({})", format_arg(k)), value)
        }
        Function::Phi => {
            let k = args.k()?;
            (format!("phi({})", format_arg(k)), Some(phi(k, &q)?))
        }
        Function::H => {
            let k = args.k()?;
            (format!("h({})", format_arg(k)), Some(h_fn(k, &q)?))
        }
        Function::F => {
            let p = args.strip_point()?;
            (format!("f({}, {})", p.r, p.t), Some(f_fn(p, &q)?))
        }
        Function::G => {
            let p = args.strip_point()?;
            (format!("g({}, {})", p.r, p.t), Some(g_fn(p, &q)?))
        }
        Function::Polylog => {
            let (m, k) = (args.m()?, args.k()?);
            (
                format!("Li_{}(e^{})", format_arg(k), format_arg(m)),
                Some(polylog_continued(m, k, &q)?),
            )
        }
        Function::PartialPolylog => {
            let (m, k) = (args.m()?, args.k()?);
            let n = args.n.ok_or_else(|| CliError::Usage("partial-polylog needs --n".into()))?;
            (
                format!("E_{}^{}({n})", format_arg(k), format_arg(m)),
                Some(partial_polylog_continued(&PolylogParams::partial(m, k, n), &q)?),
            )
        }
    };
    let elapsed = start.elapsed();
    match cfg.output_format {
        Format::Csv => {
            match &estimate {
                Some(e) => println!("{label} = {} ± {:.1e}", format_complex(e.value), e.error),
                None => println!("{label} = undefined (2^(1-k) = 1)"),
            }
            println!("time: {:.3} ms", elapsed.as_secs_f64() * 1e3);
        }
        Format::Json => {
            let body = json!({
                "function": label,
                "value": estimate.map(|e| json!({"re": e.value.re, "im": e.value.im})),
                "error": estimate.map(|e| e.error),
                "elapsed_ms": elapsed.as_secs_f64() * 1e3,
            });
            println!("{}", serde_json::to_string_pretty(&body)?);
        }
    }
    Ok(())
}

fn write_file(path: &Path, contents: &str) -> anyhow::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn cmd_verify(suite: Suite, out: Option<&Path>, cfg: &RunConfig) -> anyhow::Result<()> {
    let report = run_suite(suite, &cfg.quadrature(), cfg.execution());
    let text = match cfg.output_format {
        Format::Json => serde_json::to_string_pretty(&report)? + "\n",
        Format::Csv => {
            let mut s = String::new();
            for c in &report.cases {
                let tag = match c.status {
                    Status::Pass => "PASS",
                    Status::Fail => "FAIL",
                    Status::Skipped => "SKIP",
                };
                s += &format!("{tag} {:<40} residual {:.3e} tol {:.0e}", c.label, c.residual, c.tolerance);
                if let Some(d) = &c.detail {
                    s += &format!(" ({d})");
                }
                s.push('\n');
            }
            s += &format!(
                "{suite}: {} cases, {} failed, max residual {:.3e}\n",
                report.cases.len(),
                report.failures().count(),
                report.max_residual()
            );
            s
        }
    };
    print!("{text}");
    if let Some(path) = out {
        write_file(path, &text)?;
    }
    if report.passed() {
        Ok(())
    } else {
        let failed: Vec<_> = report.failures().map(|c| c.label.clone()).collect();
        Err(CliError::Verify(failed.join("; ")).into())
    }
}

fn cmd_zeros(r: &str, t: &str, out: Option<&Path>, cfg: &RunConfig) -> anyhow::Result<()> {
    let (r, t) = (parse_range(r).map_err(CliError::from)?, parse_range(t).map_err(CliError::from)?);
    let mut region = ScanRegion::new((r.start, r.end), (t.start, t.end));
    if let Some(h) = r.step {
        region.r_step = h;
    }
    if let Some(h) = t.step {
        region.t_step = h;
    }
    let settings = ScanSettings {
        quadrature: cfg.quadrature(),
        execution: cfg.execution(),
        ..ScanSettings::default()
    };
    let report = scan(&region, &settings)?;
    for f in &report.failures {
        eprintln!("warning: evaluation failed at r = {}, t = {}: {}", f.r, f.t, f.message);
    }
    let header = "r,t,residual_f,residual_g,abs_phi,abs_eta,classification,iterations";
    let mut csv = format!("{header}\n");
    for c in &report.candidates {
        csv += &format!(
            "{},{},{:.3e},{:.3e},{:.3e},{:.3e},{},{}\n",
            format_sig(c.r),
            format_sig(c.t),
            c.residual_f,
            c.residual_g,
            c.abs_phi,
            c.abs_eta,
            c.classification.as_str(),
            c.refinement_iterations
        );
    }
    let text = match cfg.output_format {
        Format::Csv => csv,
        Format::Json => serde_json::to_string_pretty(&json!({"region": region, "candidates": report.candidates}))? + "\n",
    };
    print!("{text}");
    eprintln!(
        "{} crossings of g = 2t, {} distinct roots in region",
        report.crossings.len(),
        report.candidates.len()
    );
    if let Some(path) = out {
        write_file(path, &text)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct CurveFile<'a> {
    figure: u8,
    r: Option<f64>,
    functional: &'a str,
    note: &'a Option<String>,
    rel_tol: f64,
    abs_tol: f64,
    label: &'a str,
    points: &'a [(f64, f64)],
    gaps: &'a [f64],
}

/// Below this share of evaluated points a curve counts as failed.
const MIN_COVERAGE: f64 = 0.95;

fn cmd_plot(figure: u8, out: Option<PathBuf>, step: f64, cfg: &RunConfig) -> anyhow::Result<()> {
    if !(step > 0.0) {
        return Err(CliError::Usage(format!("--step must be positive, got {step}")).into());
    }
    let dir = out.unwrap_or_else(|| cfg.output_dir.clone());
    let curves = figure_curves(figure, step, &cfg.quadrature(), cfg.execution())?;
    let ext = cfg.output_format.extension();
    for c in &curves {
        let path = dir.join(format!("{}.{ext}", c.file_stem()));
        write_file(&path, &render_curve(c, cfg)?)?;
        println!("{}", path.display());
        if let Some(note) = &c.note {
            println!("  note: {note}");
        }
    }
    if curves.iter().any(|c| c.note.is_some()) && cfg.output_format == Format::Csv {
        let notes: Vec<_> = curves
            .iter()
            .filter_map(|c| c.note.as_ref().map(|n| json!({"file": format!("{}.csv", c.file_stem()), "note": n})))
            .collect();
        let path = dir.join(format!("fig{figure}_notes.json"));
        write_file(&path, &(serde_json::to_string_pretty(&notes)? + "\n"))?;
    }
    let thin: Vec<String> = curves
        .iter()
        .filter(|c| c.series.coverage() < MIN_COVERAGE)
        .map(|c| format!("{} ({:.1}% evaluated)", c.file_stem(), 100.0 * c.series.coverage()))
        .collect();
    if thin.is_empty() {
        Ok(())
    } else {
        Err(CliError::Coverage(format!("too many failed points: {}", thin.join(", "))).into())
    }
}

fn render_curve(c: &FigureCurve, cfg: &RunConfig) -> anyhow::Result<String> {
    Ok(match cfg.output_format {
        Format::Csv => c.series.to_csv(),
        Format::Json => {
            let file = CurveFile {
                figure: c.figure,
                r: c.r,
                functional: &c.functional,
                note: &c.note,
                rel_tol: cfg.rel_tol,
                abs_tol: cfg.abs_tol,
                label: &c.series.label,
                points: &c.series.points,
                gaps: &c.series.gaps,
            };
            serde_json::to_string_pretty(&file)? + "\n"
        }
    })
}
