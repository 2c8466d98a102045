//! The `kottsep` command-line front end.
//!
//! Every certifying subcommand writes a JSON envelope
//! `{kind, manifest, payload, digest}`; `kottsep verify` re-checks one
//! independently of the code that produced it. Exit codes: 0 verified,
//! 2 falsified, 3 budget exceeded, 4 usage or input error.

pub mod acceptance;
pub mod check;
pub mod cli;
pub mod commands;
pub mod config;
pub mod envelope;
pub mod error;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use clap::Parser;
use kottsep_core::freeset::Relation;
use serde::Serialize;

use crate::cli::{Cli, Command, Mutant};
use crate::config::Config;
use crate::envelope::{Envelope, Kind, Manifest};
use crate::error::{CliError, CliResult, EXIT_FALSIFIED, EXIT_USAGE, EXIT_VERIFIED};

/// Parses `args` (program name first) and runs the command, returning the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_VERIFIED };
        }
    };
    let command_line: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    match execute(cli, command_line) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("kottsep: {e}");
            e.exit_code()
        }
    }
}

struct Context {
    config: Config,
    seed: u64,
    command_line: Vec<String>,
    started: Instant,
}

impl Context {
    fn seal(&self, kind: Kind, payload: impl Serialize) -> Envelope {
        let manifest = Manifest {
            command: self.command_line.clone(),
            seed: self.seed,
            threads: self.config.threads,
            config_digest: self.config.digest(),
            budgets: self.config.budgets.clone(),
            versions: Manifest::versions(),
            wall_time_ms: self.started.elapsed().as_millis() as u64,
        };
        let payload = serde_json::to_value(payload).expect("payload serializes");
        Envelope::seal(kind, manifest, payload)
    }
}

fn execute(cli: Cli, command_line: Vec<String>) -> CliResult<i32> {
    let started = Instant::now();
    let mut config = Config::load(cli.global.config.as_deref())?;
    config.apply_overrides(&cli.global.budgets)?;
    if cli.global.threads.is_some() {
        config.threads = cli.global.threads;
    }
    if config.threads == Some(0) {
        return Err(CliError::Usage("--threads must be positive".into()));
    }
    let seed = cli.global.seed.or(config.seed).unwrap_or(0);
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = config.threads {
        pool = pool.num_threads(t);
    }
    let pool = pool.build().map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    let ctx = Context { config, seed, command_line, started };
    let out = cli.global.out.clone();
    pool.install(|| dispatch(cli.command, &ctx, out.as_deref()))
}

fn dispatch(command: Command, ctx: &Context, out: Option<&Path>) -> CliResult<i32> {
    let b = &ctx.config.budgets;
    let envelope = match command {
        Command::Kottman(a) => {
            ctx.seal(Kind::Kottman, commands::value(Relation::RealDifference, a.l, a.strategy, b, ctx.seed)?)
        }
        Command::Sumfree(a) => {
            ctx.seal(Kind::Sumfree, commands::value(Relation::RealSum, a.l, a.strategy, b, ctx.seed)?)
        }
        Command::Gaussian(a) => {
            ctx.seal(Kind::Gaussian, commands::value(Relation::ComplexDifference, a.l, a.strategy, b, ctx.seed)?)
        }
        Command::Witness { mode, l } => ctx.seal(Kind::Witness, commands::witness(mode.into(), l, b)?),
        Command::Free { mode, set } => ctx.seal(Kind::Free, commands::free(mode.into(), &set, b)?),
        Command::Extend { set, base, mode } => ctx.seal(Kind::Extend, commands::extend(&set, &base, mode.into())?),
        Command::Grid { n } => ctx.seal(Kind::Grid, commands::grid(n, b)?),
        Command::Auerbach { norm } => ctx.seal(Kind::Auerbach, commands::auerbach(&norm, b, ctx.seed)?),
        Command::Separate { mode, norm } => ctx.seal(Kind::Separate, commands::separate(mode.into(), &norm, b)?),
        Command::Verify { certificate } => {
            let raw: serde_json::Value = commands::read_json(&certificate)?;
            // valid JSON that is not a well-formed envelope counts as a failed certificate
            let e: Envelope = serde_json::from_value(raw)
                .map_err(|err| CliError::Falsified(format!("malformed certificate: {err}")))?;
            let report = verify::verify_envelope(&e)?;
            emit(out, &serde_json::to_string_pretty(&report).expect("report serializes"))?;
            return Ok(EXIT_VERIFIED);
        }
        Command::Selftest { only, mutant } => return selftest(ctx, &only, mutant, out),
    };
    emit(out, &envelope.to_pretty())?;
    Ok(EXIT_VERIFIED)
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, format!("{text}\n"))
            .map_err(|source| CliError::Io { path: path.display().to_string(), source }),
        None => {
            let mut stdout = std::io::stdout().lock();
            writeln!(stdout, "{text}").map_err(|source| CliError::Io { path: "stdout".into(), source })
        }
    }
}

fn selftest(ctx: &Context, only: &[u8], mutant: Option<Mutant>, out: Option<&Path>) -> CliResult<i32> {
    if let Some(bad) = only.iter().find(|&&id| !(1..=10).contains(&id)) {
        return Err(CliError::Usage(format!("there is no criterion {bad}")));
    }
    let mut suite =
        acceptance::Suite { budgets: ctx.config.budgets.clone(), seed: ctx.seed, ..acceptance::Suite::default() };
    if mutant == Some(Mutant::OffByOne) {
        suite.free_check = check::off_by_one_is_free;
    }
    let ids: Vec<u8> = if only.is_empty() { (1..=10).collect() } else { only.to_vec() };
    let outcomes: Vec<acceptance::Outcome> = ids.iter().map(|&id| suite.run(id)).collect();
    let mut text = String::new();
    for o in &outcomes {
        text += &o.line();
        text.push('\n');
    }
    text.push('\n');
    text += &acceptance::claims_table(&outcomes);
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    text += &format!("\n{} of {} criteria passed", outcomes.len() - failed, outcomes.len());
    emit(out, &text)?;
    Ok(if failed == 0 { EXIT_VERIFIED } else { EXIT_FALSIFIED })
}
