//! Command-line front end: configuration, one subcommand per task, sweeps
//! and CSV/JSON output. [`run_cli`] is the whole program; `main` only binds
//! it to the process streams.

pub mod args;
pub mod emit;
pub mod modes;
pub mod settings;
pub mod sweep;

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;
use gie_core::{verify_no_go_with_threads, PhysicalConstants};

use crate::args::Cli;
use crate::emit::{Cell, Table};
use crate::modes::{decohere_target, Target};
use crate::settings::{DcRange, Mode, Settings};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// A failure with its exit code. `partial` carries the rows produced before
/// a sweep stopped.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
    pub partial: Option<Table>,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
            partial: None,
        }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_NUMERICAL,
            message: message.into(),
            partial: None,
        }
    }

    pub fn with_partial(mut self, table: Table) -> Self {
        self.partial = Some(table);
        self
    }
}

impl From<gie_core::Error> for CliError {
    fn from(e: gie_core::Error) -> Self {
        if e.is_numerical() {
            CliError::numerical(e.to_string())
        } else {
            CliError::usage(e.to_string())
        }
    }
}

/// Parses `args` (program name first), runs the selected mode and writes
/// data to `out` or the configured file and diagnostics to `err`. Returns the
/// process exit code.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            if let Some(table) = &e.partial {
                // Rows already computed are still data; the marker says where it stopped.
                if let Err(w) = write_table(table, &resolve(&cli).unwrap_or_default(), out) {
                    let _ = writeln!(err, "error: {}", w.message);
                }
            }
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

fn resolve(cli: &Cli) -> Result<Settings, CliError> {
    let file = match &cli.shared.config {
        Some(path) => Settings::load(path)?,
        None => Settings::default(),
    };
    let mut flags = Settings::default();
    if let Some(cmd) = &cli.command {
        cmd.apply(&mut flags).map_err(CliError::usage)?;
        if let Some(m) = file.mode {
            if m != cmd.mode() {
                return Err(CliError::usage(format!(
                    "config mode `{m}` conflicts with subcommand `{}`",
                    cmd.mode()
                )));
            }
        }
    }
    cli.shared.apply(&mut flags);
    Ok(file.overlay(&flags))
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let s = resolve(cli)?;
    let mode = s.mode.ok_or_else(|| {
        CliError::usage("no subcommand given and the config has no `mode`; try --help")
    })?;
    let target = match mode {
        Mode::Phase => Target::Phase,
        Mode::Run => Target::Run,
        Mode::Mediator => Target::Mediator,
        Mode::Decohere => decohere_target(&s),
        Mode::Nogo => Target::Nogo,
        Mode::Sweep => sweep::target(&s, sweep::sweep_var(&s)?),
    };
    if cli.shared.schema {
        writeln!(out, "{}", emit::header(target.columns()))
            .map_err(|e| CliError::usage(format!("cannot write output: {e}")))?;
        return Ok(EXIT_OK);
    }
    let threads = s.threads()?;
    let mut code = EXIT_OK;
    let mut table = Table::new(target.columns());
    match mode {
        Mode::Phase => {
            table.rows.push(modes::phase_row(&s)?);
            let ratio = match table.rows[0][6] {
                Cell::Num(r) => r,
                _ => unreachable!(),
            };
            let _ = writeln!(
                err,
                "note: phi = (m / m_P)^2 (c dt / d) with m_P = {:e} kg; (m / m_P)^2 = {ratio:e}. \
                 At m = 1e-12 kg this ratio is 2.11e-9, not the 1e-12 sometimes quoted for it.",
                PhysicalConstants::default().planck_mass
            );
        }
        Mode::Run => table.rows.push(modes::run_row(&s, None)?),
        Mode::Mediator => table.rows.push(modes::mediator_row(&s, None)?),
        Mode::Decohere => match target {
            Target::Threshold => table.rows.push(modes::threshold_row(&s, None)?),
            _ => {
                let gamma = settings::need(s.gamma, "gamma", "gamma")?;
                let cycle = modes::dephased_cycle(&s)?;
                table.rows.push(modes::decohere_row(&cycle, gamma, None)?);
            }
        },
        Mode::Nogo => {
            let trials = s.trials.unwrap_or(1000);
            let depth = s.depth.unwrap_or(12);
            let dc = s.dc.unwrap_or(DcRange::Span([2, 4])).range();
            let seed = s.seed.unwrap_or(0);
            let report = verify_no_go_with_threads(trials, depth, dc, seed, threads)?;
            for r in &report.records {
                table.rows.push(vec![
                    Cell::Int(r.index as u64),
                    Cell::Int(r.seed),
                    Cell::Int(r.depth as u64),
                    Cell::Int(r.d_c as u64),
                    Cell::Num(r.negativity),
                    Cell::Num(r.min_witness),
                    Cell::Bool(r.ppt),
                ]);
            }
            let _ = writeln!(
                err,
                "nogo: {} trials, max negativity {:e}, max witness violation {:e}, {} failures",
                report.trials,
                report.max_negativity,
                report.max_witness_violation,
                report.failures.len()
            );
            for f in &report.failures {
                let _ = writeln!(
                    err,
                    "nogo: trial {} (seed {}) failed: {}",
                    f.index, f.seed, f.reason
                );
            }
            if !report.failures.is_empty() {
                code = EXIT_NUMERICAL;
            }
        }
        Mode::Sweep => {
            let (t, skipped) = sweep::run(&s, threads)?;
            for note in skipped {
                let _ = writeln!(err, "warning: {note}");
            }
            table = t;
        }
    }
    write_table(&table, &s, out)?;
    Ok(code)
}

fn write_table(table: &Table, s: &Settings, out: &mut dyn Write) -> Result<(), CliError> {
    let bytes = match &s.plot_data {
        Some(column) => {
            if s.format() == settings::Format::Json {
                return Err(CliError::usage("--plot-data emits CSV; drop --format json"));
            }
            emit::render_plot(&table.project(column)?)?
        }
        None => emit::render(table, s.format())?,
    };
    match s.output_path() {
        Some(path) => std::fs::write(path, &bytes)
            .map_err(|e| CliError::usage(format!("cannot write output file {path}: {e}"))),
        None => out
            .write_all(&bytes)
            .and_then(|_| out.flush())
            .map_err(|e| CliError::usage(format!("cannot write output: {e}"))),
    }
}
