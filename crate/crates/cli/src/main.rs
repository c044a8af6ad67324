//! `nambu`: invariants, bases, normal forms and periods of Nambu forms along `x = 0`.

mod commands;
mod corpus;
mod encode;
mod error;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Map, Value};

use commands::{OutputFormat, SessionConfig};
use error::CliError;

#[derive(Parser, Debug)]
#[command(
    name = "nambu",
    version,
    about = "Exact local classification of Nambu forms near x = 0"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Number of y variables
    #[arg(short = 'n', global = true, default_value_t = 1)]
    n: usize,
    /// Jet order used for all truncated computations (at least 4)
    #[arg(long, global = true, env = "NAMBU_JET_ORDER", default_value_t = 12)]
    jet_order: u32,
    /// Trapezoid samples per loop for periods
    #[arg(long, global = true, default_value_t = 4096)]
    samples: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    output: Format,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args, Debug)]
struct FArg {
    /// Function f(x, y…) as a polynomial expression
    #[arg(short = 'f', allow_hyphen_values = true)]
    f: String,
}

#[derive(Args, Debug)]
struct FwArgs {
    #[arg(short = 'f', allow_hyphen_values = true)]
    f: String,
    /// Numerator g of the form g·dx∧dy…/x
    #[arg(short = 'w', allow_hyphen_values = true)]
    w: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Relative Milnor and Tjurina numbers
    Invariants(FArg),
    /// Quasihomogeneous weights and the q_sigma comparison
    Weights(FArg),
    /// Singularity class of f relative to x = 0
    Classify(FArg),
    /// Monomial basis of the logarithmic Brieskorn module
    Basis(FArg),
    /// Functional moduli of a form
    Reduce(FwArgs),
    /// Normal form with its diffeomorphism jet (classes A0, A1)
    NormalForm(FwArgs),
    /// Hamiltonian vector field of f (n = 1)
    Hamiltonian(FwArgs),
    /// Bracket subordinated to f (n = 2)
    Subordinated(FwArgs),
    /// Period matrix, ranks and numeric moduli at a regular value t
    Periods {
        #[command(flatten)]
        fw: FwArgs,
        /// Regular value as RE,IM (or RE); rationals p/q accepted
        #[arg(short = 't', allow_hyphen_values = true)]
        t: String,
    },
    /// Decide equivalence of two forms and return the map
    Verify {
        #[arg(short = 'f', allow_hyphen_values = true)]
        f: String,
        #[arg(long = "w1", allow_hyphen_values = true)]
        w1: String,
        #[arg(long = "w2", allow_hyphen_values = true)]
        w2: String,
    },
    /// Batch golden checks
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Subcommand, Debug)]
enum CorpusAction {
    /// Run every line of a JSON-lines corpus file
    Run { path: std::path::PathBuf },
}

fn parse_real(s: &str) -> Result<f64, CliError> {
    let bad = || CliError::Input(format!("cannot read `{s}` as a number"));
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().map_err(|_| bad())?;
            let q: f64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0.0 {
                return Err(bad());
            }
            Ok(p / q)
        }
        None => s.parse().map_err(|_| bad()),
    }
}

fn parse_t(s: &str) -> Result<Complex64, CliError> {
    let (re, im) = match s.split_once(',') {
        Some((a, b)) => (parse_real(a)?, parse_real(b)?),
        None => (parse_real(s)?, 0.0),
    };
    Ok(Complex64::new(re, im))
}

/// `-w1`/`-w2` after `verify` are spelled as long options internally.
fn normalize_argv(argv: Vec<String>) -> Vec<String> {
    let verify = argv.iter().any(|a| a == "verify");
    argv.into_iter()
        .map(|a| match a.as_str() {
            "-w1" | "-w2" if verify => format!("-{a}"),
            _ => a,
        })
        .collect()
}

fn dispatch(cfg: &SessionConfig, cmd: Command) -> Result<(Map<String, Value>, bool), CliError> {
    use commands::*;
    let ok = |f| Ok((f, true));
    match cmd {
        Command::Invariants(a) => ok(invariants_cmd(cfg, &a.f)?),
        Command::Weights(a) => ok(weights_cmd(cfg, &a.f)?),
        Command::Classify(a) => ok(classify_cmd(cfg, &a.f)?),
        Command::Basis(a) => ok(basis_cmd(cfg, &a.f)?),
        Command::Reduce(a) => ok(reduce_cmd(cfg, &a.f, &a.w)?),
        Command::NormalForm(a) => ok(normal_form_cmd(cfg, &a.f, &a.w)?),
        Command::Hamiltonian(a) => ok(hamiltonian_cmd(cfg, &a.f, &a.w)?),
        Command::Subordinated(a) => ok(subordinated_cmd(cfg, &a.f, &a.w)?),
        Command::Periods { fw, t } => ok(periods_cmd(cfg, &fw.f, &fw.w, parse_t(&t)?)?),
        Command::Verify { f, w1, w2 } => ok(verify_cmd(cfg, &f, &w1, &w2)?),
        Command::Corpus {
            action: CorpusAction::Run { path },
        } => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            corpus::run_corpus(cfg, &corpus::parse_corpus(&text)?)
        }
    }
}

fn emit(format: OutputFormat, doc: &Value) {
    let body = match format {
        OutputFormat::Json => format!("{doc}\n"),
        OutputFormat::Text => encode::text(doc),
    };
    let _ = std::io::stdout().write_all(body.as_bytes());
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse_from(normalize_argv(std::env::args().collect())) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let g = cli.global;
    let cfg = SessionConfig {
        n: g.n,
        jet_order: g.jet_order,
        samples: g.samples,
        output: match g.output {
            Format::Json => OutputFormat::Json,
            Format::Text => OutputFormat::Text,
        },
    };
    let result = cfg.validate().and_then(|_| dispatch(&cfg, cli.command));
    match result {
        Ok((fields, all_passed)) => {
            emit(cfg.output, &encode::document(fields));
            if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            if cfg.output == OutputFormat::Json {
                let mut m = Map::new();
                m.insert(
                    "error".into(),
                    json!({ "kind": e.kind(), "message": e.to_string() }),
                );
                emit(cfg.output, &encode::document(m));
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t_values() {
        assert_eq!(parse_t("1,0").unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(parse_t("1/4").unwrap(), Complex64::new(0.25, 0.0));
        assert_eq!(parse_t("-1/2, 3").unwrap(), Complex64::new(-0.5, 3.0));
        assert!(parse_t("1,i").is_err());
        assert!(parse_t("1/0").is_err());
    }

    #[test]
    fn verify_flags_rewritten() {
        let a: Vec<String> = ["nambu", "verify", "-f", "x", "-w1", "1", "-w2", "1"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let out = normalize_argv(a);
        assert_eq!(out[4], "--w1");
        let r: Vec<String> = ["nambu", "reduce", "-w1"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(normalize_argv(r)[2], "-w1");
    }
}
