//! `vilenkin`: transforms, means, kernels, maximal operators, weight predicates and
//! divergence certificates as CSV/JSON tables.

mod commands;
mod config;
mod input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{parse_radix_list, Format, Mode, RunConfig};
use vilenkin::{Error, RadixSequence};

#[derive(Parser, Debug)]
#[command(name = "vilenkin", version, about = "Harmonic analysis on bounded Vilenkin groups")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Default)]
struct GlobalArgs {
    /// Read defaults from a JSON run config; flags given here override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the resolved run config as JSON.
    #[arg(long, global = true)]
    save_config: Option<PathBuf>,
    /// Explicit radices, e.g. `2,3,2`.
    #[arg(long, global = true, conflicts_with = "cycle")]
    radices: Option<String>,
    /// Repeating radix cycle, e.g. `2` (Walsh) or `2,3`.
    #[arg(long, global = true)]
    cycle: Option<String>,
    /// Truncation level `N` (grid of `M_N` points). Defaults to the explicit list length, else 6.
    #[arg(long, global = true)]
    level: Option<usize>,
    #[arg(long, global = true, value_enum)]
    mode: Option<Mode>,
    /// Weight scheme: fejer, cesaro:alpha=<a>, riesz-log, norlund-log, power:beta=<b>,
    /// custom:values=<v,…>, custom:file=<path>.
    #[arg(long, global = true)]
    scheme: Option<String>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for `random` test functions.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fourier coefficients of a test function, with a Parseval check.
    Transform(commands::TransformArgs),
    /// Nörlund means along a list of indices: L1/L∞ errors against the input.
    Means(commands::MeansArgs),
    /// Nörlund kernels, or the kernel domination ratio.
    Kernel(commands::KernelArgs),
    /// Maximal mean `sup_{n ≤ nmax} |t_n f|` pointwise.
    Maximal(commands::MaximalArgs),
    /// Weight-condition predicates and the regularity probe.
    Predicates(commands::PredicatesArgs),
    /// Build and certify a divergence counterexample.
    Counterexample(commands::CounterexampleArgs),
}

fn resolve(g: &GlobalArgs) -> vilenkin::Result<RunConfig> {
    let mut cfg = match &g.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(list) = &g.radices {
        let r = parse_radix_list(list)?;
        if g.level.is_none() {
            cfg.level = r.len();
        }
        cfg.radices = RadixSequence::Explicit(r);
    }
    if let Some(list) = &g.cycle {
        cfg.radices = RadixSequence::Cycle(parse_radix_list(list)?);
    }
    if let Some(level) = g.level {
        cfg.level = level;
    }
    if let Some(mode) = g.mode {
        cfg.mode = mode;
    }
    if let Some(scheme) = &g.scheme {
        cfg.scheme = scheme.clone();
    }
    if let Some(format) = g.format {
        cfg.format = format;
    }
    if let Some(out) = &g.out {
        cfg.out = Some(out.clone());
    }
    if let Some(seed) = g.seed {
        cfg.seed = seed;
    }
    if let Some(path) = &g.save_config {
        cfg.save(path)?;
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> vilenkin::Result<()> {
    let cfg = resolve(&cli.global)?;
    match &cli.command {
        Command::Transform(a) => commands::transform(&cfg, a),
        Command::Means(a) => commands::means(&cfg, a),
        Command::Kernel(a) => commands::kernel(&cfg, a),
        Command::Maximal(a) => commands::maximal(&cfg, a),
        Command::Predicates(a) => commands::predicates(&cfg, a),
        Command::Counterexample(a) => commands::counterexample(&cfg, a),
    }
}

/// 0 success, 2 precondition violation, 3 certification failure, 1 anything else.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Certification(_) => 3,
        _ if e.is_precondition() => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn explicit_radices_set_the_level() {
        let cli = Cli::parse_from(["vilenkin", "--radices", "2,3,2", "transform", "--fn", "constant"]);
        let cfg = resolve(&cli.global).unwrap();
        assert_eq!(cfg.level, 3);
        assert_eq!(cfg.radices, RadixSequence::Explicit(vec![2, 3, 2]));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::Certification("x".into())), 3);
        assert_eq!(exit_code(&Error::Precondition("x".into())), 2);
        assert_eq!(exit_code(&Error::Io(std::io::Error::other("x"))), 1);
    }
}
