//! `qcurve`: expression evaluation, single computations, and named
//! verification suites over the quantum projective line engine.

use clap::{Args, Parser, Subcommand};
use qcurve_core::bimodule::{
    compat_residual, sigma_bar_from_connection, sigma_from_connection,
};
use qcurve_core::bundles::{holomorphic_sections, nabla01_std, nabla10_canonical, DelbarConnection};
use qcurve_core::calculus::{Calculus, Form};
use qcurve_core::jet::{curvature_line_bundle, splitting_and_defect, JetContext};
use qcurve_core::ncalg::Presentation;
use qcurve_core::parser::parse;
use qcurve_core::report::{SuiteParams, SuiteReport};
use qcurve_core::su2::{Op, Su2Action};
use qcurve_core::suites::{run_all, run_suite, SUITE_NAMES};
use std::io::Write as _;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "qcurve", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: GlobalArgs,
}

#[derive(Args, Clone)]
struct GlobalArgs {
    /// Bundle label n.
    #[arg(long, global = true)]
    n: Option<i64>,
    /// Truncation length for spanning sets and kernels.
    #[arg(long, global = true)]
    maxlen: Option<usize>,
    /// Sample count for randomized identity checks.
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Seed of the deterministic sample generator.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the report to a file instead of standard output.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_parser = ["human", "machine"])]
    format: Option<String>,
    /// Key=value config file; flags override file values.
    #[arg(long, global = true)]
    config: Option<std::path::PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Normalize an algebra expression to its PBW form.
    Normalize { expr: String },
    /// Apply a Hopf operator to an expression.
    Act {
        #[arg(long, value_parser = ["E", "F", "K", "Kinv", "X+", "X-"])]
        op: String,
        expr: String,
    },
    /// Full differential of a function.
    D { expr: String },
    /// (1,0) part of the differential.
    Del { expr: String },
    /// (0,1) part of the differential.
    Delbar { expr: String },
    /// Curvature coefficient of the canonical total connection on L_n.
    Curvature {},
    /// Basis of the truncated space of holomorphic sections of L_n.
    Sections {},
    /// Apply the (possibly perturbed) holomorphic structure on L_n.
    Connection {
        #[arg(long)]
        perturb: Option<String>,
        expr: String,
    },
    /// Jet-level verification.
    Jet {
        #[command(subcommand)]
        sub: JetCommand,
    },
    /// Bimodule-level verification.
    Bimodule {
        #[command(subcommand)]
        sub: BimoduleCommand,
    },
    /// Run a named verification suite, or all of them.
    Verify {
        /// One of the registry names, or "all".
        suite: String,
        /// Inclusive range lo:hi for the curvature table.
        #[arg(long)]
        range: Option<String>,
    },
}

#[derive(Subcommand)]
enum JetCommand {
    /// Jet suite at the given n: lifted-structure Leibniz, sequence,
    /// functor laws, splitting defect.
    Verify {
        #[arg(long)]
        perturb10: Option<String>,
        #[arg(long)]
        perturb01: Option<String>,
    },
}

#[derive(Subcommand)]
enum BimoduleCommand {
    /// Bimodule suite: braiding extraction, compatibility, lift.
    Verify {},
    /// Residuals of the compatibility condition between the braidings.
    Check22 {},
}

struct Config {
    params: SuiteParams,
    format: String,
    out: Option<std::path::PathBuf>,
}

fn load_config(global: &GlobalArgs) -> Result<Config, String> {
    let mut params = SuiteParams::default();
    let mut format = "human".to_string();
    if let Some(path) = &global.config {
        let text = std::fs::read_to_string(path).map_err(|e| format!("config: {e}"))?;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or(format!("config line {}: expected key=value", lineno + 1))?;
            match k.trim() {
                "n" => params.n = v.trim().parse().map_err(|e| format!("config n: {e}"))?,
                "maxlen" => params.maxlen = v.trim().parse().map_err(|e| format!("config maxlen: {e}"))?,
                "samples" => params.samples = v.trim().parse().map_err(|e| format!("config samples: {e}"))?,
                "seed" => params.seed = v.trim().parse().map_err(|e| format!("config seed: {e}"))?,
                "format" => format = v.trim().to_string(),
                other => return Err(format!("config line {}: unknown key '{other}'", lineno + 1)),
            }
        }
    }
    if let Some(n) = global.n {
        params.n = n;
    }
    if let Some(m) = global.maxlen {
        params.maxlen = m;
    }
    if let Some(s) = global.samples {
        params.samples = s;
    }
    if let Some(s) = global.seed {
        params.seed = s;
    }
    if let Some(f) = &global.format {
        format = f.clone();
    }
    Ok(Config { params, format, out: global.out.clone() })
}

fn emit(cfg: &Config, text: &str) -> Result<(), String> {
    match &cfg.out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => {
            let mut f = std::fs::File::create(path).map_err(|e| e.to_string())?;
            f.write_all(text.as_bytes()).map_err(|e| e.to_string())
        }
    }
}

fn render_reports(cfg: &Config, reports: &[SuiteReport]) -> (String, bool) {
    let mut out = String::new();
    let mut ok = true;
    for r in reports {
        ok &= r.all_pass();
        out.push_str(&if cfg.format == "machine" {
            r.render_machine()
        } else {
            r.render_human()
        });
    }
    (out, ok)
}

fn parse_nf(pr: &Presentation, expr: &str) -> Result<qcurve_core::ncalg::Poly, String> {
    parse(expr).map(|p| pr.normal_form(&p)).map_err(|e| e.to_string())
}

fn run() -> Result<bool, String> {
    let cli = Cli::parse();
    let cfg = load_config(&cli.global)?;
    let pr = Presentation::quantum_su2();
    match cli.command {
        Command::Normalize { expr } => {
            let p = parse_nf(&pr, &expr)?;
            emit(&cfg, &format!("{p}\n"))?;
            Ok(true)
        }
        Command::Act { op, expr } => {
            let su2 = Su2Action::new();
            let p = parse_nf(&pr, &expr)?;
            let result = match op.as_str() {
                "E" => su2.act(Op::E, &p),
                "F" => su2.act(Op::F, &p),
                "K" => su2.act(Op::K, &p),
                "Kinv" => su2.act(Op::Kinv, &p),
                "X+" => su2.xplus(&p),
                "X-" => su2.xminus(&p),
                _ => unreachable!("clap validates the operator"),
            };
            emit(&cfg, &format!("{result}\n"))?;
            Ok(true)
        }
        Command::D { expr } => {
            let cal = Calculus::new();
            let f = Form::scalar(parse_nf(&pr, &expr)?);
            emit(&cfg, &format!("{}\n", cal.d(&f)))?;
            Ok(true)
        }
        Command::Del { expr } => {
            let cal = Calculus::new();
            let f = Form::scalar(parse_nf(&pr, &expr)?);
            emit(&cfg, &format!("{}\n", cal.del(&f)))?;
            Ok(true)
        }
        Command::Delbar { expr } => {
            let cal = Calculus::new();
            let f = Form::scalar(parse_nf(&pr, &expr)?);
            emit(&cfg, &format!("{}\n", cal.delbar(&f)))?;
            Ok(true)
        }
        Command::Curvature {} => {
            let ctx = JetContext::new();
            let kappa = curvature_line_bundle(&ctx, cfg.params.n).map_err(|e| e.to_string())?;
            emit(&cfg, &format!("{kappa}\n"))?;
            Ok(true)
        }
        Command::Sections {} => {
            let cal = Calculus::new();
            let basis = holomorphic_sections(&cal, &nabla01_std(cfg.params.n), cfg.params.maxlen);
            let mut out = format!(
                "kernel dimension {} at n={} maxlen={}\n",
                basis.len(),
                cfg.params.n,
                cfg.params.maxlen
            );
            for b in &basis {
                out.push_str(&format!("{b}\n"));
            }
            emit(&cfg, &out)?;
            Ok(true)
        }
        Command::Connection { perturb, expr } => {
            let cal = Calculus::new();
            let n = cfg.params.n;
            let conn = match perturb {
                None => nabla01_std(n),
                Some(g) => DelbarConnection::perturbed(n, parse_nf(&pr, &g)?)
                    .map_err(|e| e.to_string())?,
            };
            let e = parse_nf(&pr, &expr)?;
            let img = conn.apply(&cal, &e);
            emit(&cfg, &format!("{}\n", Form::wminus(img)))?;
            Ok(true)
        }
        Command::Jet { sub } => {
            let JetCommand::Verify { perturb10, perturb01 } = sub;
            let ctx = JetContext::new();
            let n = cfg.params.n;
            let conn10 = match perturb10 {
                None => nabla10_canonical(n),
                Some(p) => qcurve_core::bundles::DelConnection::perturbed(n, parse_nf(&pr, &p)?)
                    .map_err(|e| e.to_string())?,
            };
            let conn01 = match perturb01 {
                None => nabla01_std(n),
                Some(g) => DelbarConnection::perturbed(n, parse_nf(&pr, &g)?)
                    .map_err(|e| e.to_string())?,
            };
            let mut reports = vec![run_suite("jet", &cfg.params).expect("registry")];
            let d = splitting_and_defect(&ctx, &conn10, &conn01, n, cfg.params.maxlen.max(2));
            let mut extra = Vec::new();
            extra.push(qcurve_core::report::Check::pass(format!(
                "splitting-defect-zero-{}",
                d.is_zero
            )));
            reports.push(SuiteReport::new("jet-splitting", cfg.params, extra));
            let (text, ok) = render_reports(&cfg, &reports);
            emit(&cfg, &text)?;
            Ok(ok)
        }
        Command::Bimodule { sub } => match sub {
            BimoduleCommand::Verify {} => {
                let reports = vec![run_suite("bimodule", &cfg.params).expect("registry")];
                let (text, ok) = render_reports(&cfg, &reports);
                emit(&cfg, &text)?;
                Ok(ok)
            }
            BimoduleCommand::Check22 {} => {
                let ctx = JetContext::new();
                let n = cfg.params.n;
                let sb = sigma_bar_from_connection(&ctx, &nabla01_std(n), 2)
                    .map_err(|e| e.to_string())?;
                let se = sigma_from_connection(&ctx, &nabla10_canonical(n), 2)
                    .map_err(|e| e.to_string())?;
                let mut rng = qcurve_core::sample::Lcg::new(cfg.params.seed);
                let mut out = String::new();
                let mut all_zero = true;
                for i in 0..cfg.params.samples.min(10) {
                    let e = qcurve_core::sample::random_weight_poly(&mut rng, n, 2, 2);
                    let a = qcurve_core::sample::random_weight_poly(&mut rng, 0, 2, 2);
                    let b = qcurve_core::sample::random_weight_poly(&mut rng, 0, 2, 2);
                    let r = compat_residual(&ctx, &se, &sb, &e, &a, &b);
                    all_zero &= r.is_zero();
                    out.push_str(&format!("sample {i}: residual = {r}\n"));
                }
                out.push_str(&format!(
                    "compatibility condition for canonical braidings: {}\n",
                    if all_zero { "holds" } else { "fails" }
                ));
                emit(&cfg, &out)?;
                Ok(all_zero)
            }
        },
        Command::Verify { suite, range } => {
            let mut params = cfg.params;
            if let Some(r) = range {
                let (lo, hi) = r
                    .split_once(':')
                    .ok_or("range must be lo:hi".to_string())?;
                let lo: i64 = lo.parse().map_err(|e| format!("range: {e}"))?;
                let hi: i64 = hi.parse().map_err(|e| format!("range: {e}"))?;
                params.n = lo.abs().max(hi.abs());
            }
            let reports = if suite == "all" {
                run_all(&params)
            } else {
                match run_suite(&suite, &params) {
                    Some(r) => vec![r],
                    None => {
                        return Err(format!(
                            "unknown suite '{suite}'; registry: {}",
                            SUITE_NAMES.join(", ")
                        ))
                    }
                }
            };
            let (text, ok) = render_reports(&cfg, &reports);
            emit(&cfg, &text)?;
            Ok(ok)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
