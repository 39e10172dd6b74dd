//! Batch front end: construct modules, run the verification suites, detect
//! polynomial dependence, probe decomposability.
//!
//! Reports are JSON on stdout; a short human summary goes to stderr unless
//! `--quiet`. Exit codes: 0 verified, 1 violations found, 2 usage or input
//! error.

mod commands;
mod files;

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "jetmod",
    version,
    about = "Exact constructions and checks for modules over vector fields on the torus"
)]
struct Cli {
    /// Window radius |s|∞ for exhaustive checks.
    #[arg(long, global = true, default_value_t = 2)]
    window: i64,
    /// Subsampling strides for the polynomiality cross-check.
    #[arg(long = "theta-p", global = true, value_delimiter = ',', default_values_t = vec![2i64, 3])]
    theta_p: Vec<i64>,
    /// Write the primary JSON output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Suppress the human-readable summary on stderr.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a jet module over a gl_n fiber and persist it.
    BuildJet {
        /// Rank of the torus.
        #[arg(long)]
        n: usize,
        /// Jet order N.
        #[arg(long = "jet-order", visible_alias = "order")]
        order: u32,
        /// Fiber: trivial | natural | conatural | tensor:S,K.
        #[arg(long, default_value = "trivial", conflicts_with = "fiber_file")]
        fiber: String,
        /// Explicit gl_n fiber as a representation file.
        #[arg(long)]
        fiber_file: Option<PathBuf>,
        /// Include the coefficient table for the window in the output.
        #[arg(long)]
        emit_table: bool,
    },
    /// Build the module attached to a weight representative and a
    /// representation file of the positive algebra.
    Correspond {
        /// Comma-separated rational weight representative, e.g. "1/2,0".
        #[arg(long)]
        lambda: String,
        /// Representation file.
        rep: PathBuf,
    },
    /// Run verification suites on a module file.
    Verify {
        module: PathBuf,
        /// Comma-separated subset of: rep, leibniz, bracket, lemma1, rel37,
        /// jacobi (+ j4, eq53, loop for modules with a loop part).
        #[arg(long, value_delimiter = ',')]
        suites: Option<Vec<String>>,
    },
    /// Report the s-degrees of the operator polynomials.
    Degrees { module: PathBuf },
    /// Run the rank-one polynomiality detector on a sampled family.
    Polyfit { family: PathBuf },
    /// Commutant dimension and indecomposability probe for a representation.
    Decompose { rep: PathBuf },
    /// Build a module over the semidirect product with a loop algebra.
    LoopBuild {
        #[arg(long)]
        lambda: String,
        /// g⁺ representation file (with g_algebra and loop_generators).
        rep: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.window < 1 {
        eprintln!(
            r#"{{"error":{{"kind":"usage","message":"the window radius must be at least 1"}}}}"#
        );
        return ExitCode::from(2);
    }
    let config = commands::Config {
        window: cli.window,
        theta_p: cli.theta_p.clone(),
        out: cli.out.clone(),
        quiet: cli.quiet,
    };
    let outcome = match &cli.command {
        Command::BuildJet {
            n,
            order,
            fiber,
            fiber_file,
            emit_table,
        } => commands::build_jet(
            &config,
            *n,
            *order,
            fiber,
            fiber_file.as_deref(),
            *emit_table,
        ),
        Command::Correspond { lambda, rep } => commands::correspond(&config, lambda, rep),
        Command::Verify { module, suites } => commands::verify(&config, module, suites.as_deref()),
        Command::Degrees { module } => commands::degrees(&config, module),
        Command::Polyfit { family } => commands::polyfit(&config, family),
        Command::Decompose { rep } => commands::decompose(&config, rep),
        Command::LoopBuild { lambda, rep } => commands::loop_build(&config, lambda, rep),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            let body = serde_json::json!({ "error": { "kind": err.kind, "message": err.message } });
            eprintln!("{body}");
            ExitCode::from(2)
        }
    }
}
