//! `anticonc`: compute and verify anti-concentration of random signed
//! products in finite groups.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input error, 3 resource cap.

mod commands;
mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use anticonc::Error;
use commands::{Body, Outcome, SvdPropsArgs};
use config::{CommonArgs, RunConfig};

#[derive(Parser)]
#[command(name = "anticonc", version, about = "Anti-concentration of random signed products in finite groups")]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Group order and the orders of the sequence elements.
    Order,
    /// Enumerate the group and summarize its conjugacy classes.
    Closure,
    /// rho_V, exactly when the closure fits under --cap, by sampling otherwise.
    Rho,
    /// Monte-Carlo estimate of rho_V.
    Mc,
    /// Character table by the Dixon-Schneider method.
    Chartab,
    /// Unitary irreducible representations from the regular representation.
    Irreps {
        /// Include the representing matrices.
        #[arg(long)]
        matrices: bool,
    },
    /// Compare the trace formula with the exact law at every element.
    FourierCheck,
    /// Eigenvalue multiplicity bounds at every noncentral class.
    MultBounds {
        /// Character ratio bound; defaults to the largest observed ratio.
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Randomized checks of the singular-value inequalities.
    SvdProps {
        #[arg(long)]
        pairs: Option<usize>,
        /// Haar unitaries per size 2..=16.
        #[arg(long)]
        unitaries: Option<usize>,
        /// Grid step for the trigonometric inequalities.
        #[arg(long)]
        step: Option<f64>,
    },
    /// Singular-value diagnostics of the averaged product in one irrep.
    Diag {
        /// Irrep dimension; the largest by default.
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        m: Option<u32>,
    },
    /// Reduce rational matrices mod a prime, preserving element orders.
    Embed {
        /// JSON file with `n`, optional `p_min`, and `matrices`.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        p_min: Option<u64>,
    },
    /// Closed-form bounds for given s, n (and p).
    Bounds {
        #[arg(long)]
        s: Option<u64>,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        p: Option<u64>,
    },
    /// Random integer-shift instances against rho >= 1/(4 K sqrt n).
    Example2 {
        #[arg(long)]
        k: Option<u64>,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        instances: Option<usize>,
    },
    /// rho of every prefix of the sequence.
    Sweep,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Internal(_) => 1,
        Error::PrimeSearchExhausted { .. } => 3,
        e if e.is_resource_cap() => 3,
        _ => 2,
    }
}

fn apply_command_flags(cfg: &mut RunConfig, command: &Command) {
    fn set<T: Clone>(slot: &mut Option<T>, v: &Option<T>) {
        if v.is_some() {
            *slot = v.clone();
        }
    }
    match command {
        Command::MultBounds { alpha } => set(&mut cfg.alpha, alpha),
        Command::SvdProps { pairs, unitaries, step } => {
            set(&mut cfg.pairs, pairs);
            set(&mut cfg.unitaries, unitaries);
            set(&mut cfg.step, step);
        }
        Command::Diag { dim, p, m } => {
            set(&mut cfg.dim, dim);
            set(&mut cfg.p, p);
            set(&mut cfg.m, m);
        }
        Command::Embed { input, n, p_min } => {
            set(&mut cfg.input, input);
            set(&mut cfg.n, n);
            set(&mut cfg.p_min, p_min);
        }
        Command::Bounds { s, n, p } => {
            set(&mut cfg.s, s);
            set(&mut cfg.n, n);
            set(&mut cfg.p, p);
        }
        Command::Example2 { k, n, instances } => {
            set(&mut cfg.k, k);
            set(&mut cfg.n, n);
            set(&mut cfg.instances, instances);
        }
        _ => {}
    }
}

fn run(cli: &Cli) -> anticonc::Result<(RunConfig, Outcome)> {
    let mut cfg = match &cli.common.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    apply_command_flags(&mut cfg, &cli.command);
    let cfg = cfg.merge(&cli.common)?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads())
        .build_global()
        .map_err(|e| Error::Internal(e.to_string()))?;
    let outcome = match &cli.command {
        Command::Order => commands::order(&cfg),
        Command::Closure => commands::closure(&cfg),
        Command::Rho => commands::rho(&cfg),
        Command::Mc => commands::mc(&cfg),
        Command::Chartab => commands::chartab(&cfg),
        Command::Irreps { matrices } => commands::irreps(&cfg, *matrices),
        Command::FourierCheck => commands::fourier_check(&cfg),
        Command::MultBounds { .. } => commands::mult_bounds(&cfg),
        Command::SvdProps { .. } => commands::svd_props(
            &cfg,
            &SvdPropsArgs {
                pairs: cfg.pairs.unwrap_or(1000),
                unitaries: cfg.unitaries.unwrap_or(200),
                step: cfg.step.unwrap_or(1e-4),
            },
        ),
        Command::Diag { .. } => commands::diag(&cfg),
        Command::Embed { .. } => commands::embed(&cfg),
        Command::Bounds { .. } => commands::bounds(&cfg),
        Command::Example2 { .. } => commands::example2(&cfg),
        Command::Sweep => commands::sweep(&cfg),
    }?;
    Ok((cfg, outcome))
}

fn emit(cfg: &RunConfig, body: &Body) -> std::io::Result<()> {
    let text = match body {
        Body::Json(v) => serde_json::to_string_pretty(v).expect("JSON values serialize") + "\n",
        Body::Csv(s) => s.clone(),
    };
    match &cfg.out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((cfg, outcome)) => {
            if let Err(e) = emit(&cfg, &outcome.body) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(if outcome.pass { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
