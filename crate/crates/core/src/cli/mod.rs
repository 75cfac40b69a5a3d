//! The `isolab` command line: argument parsing, configuration, report files
//! and exit codes (0 expectations met, 1 mismatch, 2 usage error).

mod commands;
mod config;
mod output;
mod selftest;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::Result;
use crate::operator_core::write_dump;

pub use commands::{check_report, CommandOutput, DEFAULT_HANKEL_WINDOW, ROUND_TRIP_TOL};
pub use config::{split_list, Overrides, RunConfig, DEFAULT_K, DEFAULT_L, DEFAULT_N, DEFAULT_SEED, DEFAULT_TOL};
pub use output::{render_table, write_atomic, write_reports};
pub use selftest::{
    run_selftest, Check, BASELINE_B05_B03I_N512, BASELINE_B05_N512, BASELINE_SINGULAR_N768, BASELINE_TOL,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "isolab",
    version,
    about = "Finite-section checks for isometric semigroup representations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Inverse-semigroup test for the shift and multipliers.
    CheckInverse(Common),
    /// Isometry and commutation of multipliers with the shift.
    ValidateExtension(Common),
    /// Symbol recovery from a multiplier section.
    ExtractSymbol(Common),
    /// Hankel rank of a symbol's coefficients.
    BlaschkeRank(Common),
    /// Regular representation of a numerical semigroup.
    RegularRep(Common),
    /// Non-inverse representation from a non-monomial symbol.
    Thm32(Common),
    /// Inverse exactly for monomial extensions.
    Thm51(Common),
    /// Inverse proper extension on H² ⊕ H².
    Thm52(Common),
    /// Every built-in oracle and frozen baseline.
    Selftest(Common),
}

#[derive(Debug, Args)]
struct Common {
    /// Symbol literal such as `z^2 * B(0.5,-0.3i) * S(0:1)`; repeatable.
    #[arg(long = "symbol")]
    symbol: Vec<String>,
    /// Comma-separated generators: `shift` or semigroup integers.
    #[arg(long = "gens")]
    gens: Option<String>,
    #[arg(long = "L")]
    l: Option<usize>,
    #[arg(long = "N")]
    n: Option<usize>,
    #[arg(long = "K")]
    k: Option<usize>,
    #[arg(long = "D")]
    window: Option<usize>,
    #[arg(long = "tol")]
    tol: Option<f64>,
    /// Directory for JSON reports and the manifest.
    #[arg(long = "out")]
    out: Option<PathBuf>,
    #[arg(long = "seed")]
    seed: Option<u64>,
    /// Also count unique inverses over the whole ball.
    #[arg(long = "exhaustive")]
    exhaustive: bool,
    /// Write the operator under test as a binary dump.
    #[arg(long = "dump-operator")]
    dump_operator: Option<PathBuf>,
    /// Expected outcome: inverse, not_inverse, inconclusive, pass or fail.
    #[arg(long = "expect")]
    expect: Option<String>,
    /// TOML file with keys N, K, L, D, tol, symbols, gens, out, seed, exhaustive, expect.
    #[arg(long = "config")]
    config: Option<PathBuf>,
}

impl Common {
    fn overrides(&self) -> Overrides {
        Overrides {
            n: self.n,
            k: self.k,
            l: self.l,
            tol: self.tol,
            symbols: self.symbol.clone(),
            gens: self.gens.as_deref().map(split_list).unwrap_or_default(),
            out: self.out.clone(),
            seed: self.seed,
            window: self.window,
            exhaustive: self.exhaustive,
            dump_operator: self.dump_operator.clone(),
            expect: self.expect.clone(),
        }
    }
}

fn dispatch(name: &str, cfg: &RunConfig) -> Result<CommandOutput> {
    match name {
        "check-inverse" => commands::check_inverse_cmd(cfg),
        "validate-extension" => commands::validate_extension_cmd(cfg),
        "extract-symbol" => commands::extract_symbol_cmd(cfg),
        "blaschke-rank" => commands::blaschke_rank_cmd(cfg),
        "regular-rep" => commands::regular_rep_cmd(cfg),
        "thm32" => commands::thm32_cmd(cfg),
        "thm51" => commands::thm51_cmd(cfg),
        "thm52" => commands::thm52_cmd(cfg),
        _ => selftest::run_selftest(cfg),
    }
}

fn split(cmd: Command) -> (&'static str, Common) {
    match cmd {
        Command::CheckInverse(c) => ("check-inverse", c),
        Command::ValidateExtension(c) => ("validate-extension", c),
        Command::ExtractSymbol(c) => ("extract-symbol", c),
        Command::BlaschkeRank(c) => ("blaschke-rank", c),
        Command::RegularRep(c) => ("regular-rep", c),
        Command::Thm32(c) => ("thm32", c),
        Command::Thm51(c) => ("thm51", c),
        Command::Thm52(c) => ("thm52", c),
        Command::Selftest(c) => ("selftest", c),
    }
}

/// Honors `ISOLAB_THREADS` once per process.
pub fn configure_threads() {
    if let Some(n) = std::env::var("ISOLAB_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

/// Runs one subcommand, printing the table to `stdout` and diagnostics to
/// `stderr`. Returns the exit code.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(stderr, "{text}")
            } else {
                write!(stdout, "{text}")
            };
            return code;
        }
    };
    let (name, common) = split(cli.command);
    let cfg = match RunConfig::resolve(common.overrides(), common.config.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(stderr, "isolab {name}: {e}");
            return EXIT_USAGE;
        }
    };
    let out = match dispatch(name, &cfg) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "isolab {name}: {e}");
            return EXIT_USAGE;
        }
    };
    if let Some(dir) = &cfg.out {
        if let Err(e) = write_reports(dir, name, &out.reports) {
            let _ = writeln!(stderr, "isolab {name}: {e}");
            return EXIT_USAGE;
        }
    }
    if let Some(path) = &cfg.dump_operator {
        let written = match &out.dump {
            Some(op) => write_dump(op, path),
            None => {
                let _ = writeln!(stderr, "isolab {name}: no operator to dump");
                return EXIT_USAGE;
            }
        };
        if let Err(e) = written {
            let _ = writeln!(stderr, "isolab {name}: {e}");
            return EXIT_USAGE;
        }
    }
    let _ = write!(stdout, "{}", render_table(&out.reports));
    if output::all_met(&out.reports) {
        EXIT_OK
    } else {
        let _ = writeln!(stderr, "isolab {name}: outcome differs from the expectation");
        EXIT_MISMATCH
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    configure_threads();
    run_with(args, &mut std::io::stdout(), &mut std::io::stderr())
}
