use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::settings::{Assignment, DcRange, Format, Mode, Scale, Settings, SweepVar};

#[derive(Debug, Parser)]
#[command(
    name = "gie",
    version,
    about = "Gravitationally mediated entanglement between two interferometers",
    long_about = "Gravitationally mediated entanglement between two interferometers.\n\n\
                  Data goes to stdout (or --output) as CSV or JSON; diagnostics go to stderr.\n\
                  Exit codes: 0 success, 2 usage or configuration error, 3 numerical failure.\n\
                  Units are SI (kg, m, s); phases are in radians."
)]
pub struct Cli {
    #[command(flatten)]
    pub shared: SharedFlags,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Args, Default)]
pub struct SharedFlags {
    /// JSON configuration file with flat SI keys; flags override it.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Output file, `-` for stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<String>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Master seed for randomized modes.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Worker threads (results do not depend on this).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Print the column header of the selected mode and exit.
    #[arg(long, global = true)]
    pub schema: bool,

    /// In sweeps, skip failing points instead of stopping.
    #[arg(long, global = true)]
    pub keep_going: bool,

    /// Emit two-column CSV (input and this column) for gnuplot.
    #[arg(long, global = true, value_name = "COLUMN")]
    pub plot_data: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Gravitational phase of one pair of arms.
    #[command(allow_negative_numbers = true)]
    Phase(PhaseFlags),
    /// Two-interferometer run: detector probabilities and entanglement.
    #[command(allow_negative_numbers = true)]
    Run(RunFlags),
    /// Parameter sweep over a grid of one variable.
    #[command(allow_negative_numbers = true)]
    Sweep(SweepFlags),
    /// Random classical-mediator circuits: the probes never entangle.
    Nogo(NogoFlags),
    /// Masses coupled through a quantized field mode.
    #[command(allow_negative_numbers = true)]
    Mediator(MediatorFlags),
    /// Mediator cycle with dephasing of the field.
    #[command(allow_negative_numbers = true)]
    Decohere(DecohereFlags),
}

impl Command {
    pub fn mode(&self) -> Mode {
        match self {
            Command::Phase(_) => Mode::Phase,
            Command::Run(_) => Mode::Run,
            Command::Sweep(_) => Mode::Sweep,
            Command::Nogo(_) => Mode::Nogo,
            Command::Mediator(_) => Mode::Mediator,
            Command::Decohere(_) => Mode::Decohere,
        }
    }

    pub fn apply(&self, s: &mut Settings) -> Result<(), String> {
        s.mode = Some(self.mode());
        match self {
            Command::Phase(f) => f.apply(s),
            Command::Run(f) => f.apply(s),
            Command::Sweep(f) => f.apply(s),
            Command::Nogo(f) => f.apply(s)?,
            Command::Mediator(f) => f.apply(s),
            Command::Decohere(f) => f.apply(s),
        }
        Ok(())
    }
}

macro_rules! set {
    ($s:expr, $f:expr; $($field:ident),* $(,)?) => {
        $( if $f.$field.is_some() { $s.$field = $f.$field; } )*
    };
}

#[derive(Debug, Args)]
pub struct PhaseFlags {
    /// Mass of each particle (kg).
    #[arg(long)]
    pub mass: Option<f64>,
    /// Separation of the interacting arms (m).
    #[arg(long)]
    pub distance: Option<f64>,
    /// Interaction time (s).
    #[arg(long)]
    pub dt: Option<f64>,
    /// Potential exponent n in 1/r^n (default 1).
    #[arg(long)]
    pub exponent: Option<f64>,
}

impl PhaseFlags {
    fn apply(&self, s: &mut Settings) {
        set!(s, self; mass, distance, dt, exponent);
    }
}

#[derive(Debug, Args)]
pub struct GeometryFlags {
    /// Mass of each particle (kg).
    #[arg(long)]
    pub mass: Option<f64>,
    /// Separation of the two near arms (m).
    #[arg(long)]
    pub d1: Option<f64>,
    /// Separation of an inner arm from the other outer arm (m).
    #[arg(long)]
    pub d2: Option<f64>,
    /// Arm length (m), used with --velocity.
    #[arg(long = "L", alias = "arm-length")]
    pub arm_length: Option<f64>,
    /// Interaction time (s).
    #[arg(long)]
    pub dt: Option<f64>,
    /// Particle velocity (m/s); interaction time is L / v.
    #[arg(long)]
    pub velocity: Option<f64>,
    /// Potential exponent n in 1/r^n (default 1).
    #[arg(long)]
    pub exponent: Option<f64>,
}

impl GeometryFlags {
    fn apply(&self, s: &mut Settings) {
        set!(s, self; mass, d1, d2, arm_length, dt, velocity, exponent);
    }
}

#[derive(Debug, Args)]
pub struct RunFlags {
    /// Phase of the near-arm configuration (rad).
    #[arg(long)]
    pub phi1: Option<f64>,
    /// Phase difference phi2 - phi1 (rad).
    #[arg(long)]
    pub dphi: Option<f64>,
    /// How the phases attach to the four path configurations.
    #[arg(long, value_enum)]
    pub assignment: Option<Assignment>,
    #[command(flatten)]
    pub geometry: GeometryFlags,
}

impl RunFlags {
    fn apply(&self, s: &mut Settings) {
        set!(s, self; phi1, dphi, assignment);
        self.geometry.apply(s);
    }
}

#[derive(Debug, Args)]
pub struct MediatorFlags {
    /// Free phase w of the field between interactions (rad).
    #[arg(long)]
    pub w: Option<f64>,
    /// Coupling for masses on paths (0, 0); all omitted means the maximal pattern pi/w on (1, 1).
    #[arg(long)]
    pub xi00: Option<f64>,
    #[arg(long)]
    pub xi01: Option<f64>,
    #[arg(long)]
    pub xi10: Option<f64>,
    #[arg(long)]
    pub xi11: Option<f64>,
    /// Initial coherent amplitude of the field (real).
    #[arg(long)]
    pub alpha0: Option<f64>,
    /// Fock truncation; adaptive when omitted.
    #[arg(long)]
    pub fock: Option<usize>,
}

impl MediatorFlags {
    fn apply(&self, s: &mut Settings) {
        set!(s, self; w, xi00, xi01, xi10, xi11, alpha0, fock);
    }
}

#[derive(Debug, Args)]
pub struct DecohereFlags {
    #[command(flatten)]
    pub mediator: MediatorFlags,
    /// Dephasing strength of the field.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Search for the dephasing strength that removes the entanglement.
    #[arg(long)]
    pub threshold: bool,
    /// Negativity level treated as no entanglement (default 1e-6).
    #[arg(long)]
    pub tol: Option<f64>,
}

impl DecohereFlags {
    fn apply(&self, s: &mut Settings) {
        self.mediator.apply(s);
        set!(s, self; gamma, tol);
        if self.threshold {
            s.threshold = Some(true);
        }
    }
}

#[derive(Debug, Args)]
pub struct NogoFlags {
    /// Number of random circuits (default 1000).
    #[arg(long)]
    pub trials: Option<usize>,
    /// Maximum circuit depth (default 12).
    #[arg(long)]
    pub depth: Option<usize>,
    /// Mediator dimension or inclusive range, e.g. `3` or `2-4` (default 2-4).
    #[arg(long)]
    pub dc: Option<String>,
}

impl NogoFlags {
    fn apply(&self, s: &mut Settings) -> Result<(), String> {
        set!(s, self; trials, depth);
        if let Some(dc) = &self.dc {
            s.dc = Some(DcRange::parse(dc)?);
        }
        Ok(())
    }
}

#[derive(Debug, Args)]
pub struct SweepFlags {
    /// Swept variable. Geometry variables sweep `run`; w and xi_scale sweep
    /// `mediator`, or `decohere` when --gamma or --threshold is given; gamma
    /// sweeps `decohere`.
    #[arg(long, value_enum)]
    pub var: Option<SweepVar>,
    #[arg(long)]
    pub from: Option<f64>,
    #[arg(long)]
    pub to: Option<f64>,
    /// Grid points including both ends (at least 2).
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long, value_enum)]
    pub scale: Option<Scale>,
    #[arg(long, value_enum)]
    pub assignment: Option<Assignment>,
    #[command(flatten)]
    pub geometry: GeometryFlags,
    #[command(flatten)]
    pub decohere: DecohereFlags,
}

impl SweepFlags {
    fn apply(&self, s: &mut Settings) {
        set!(s, self; assignment);
        self.geometry.apply(s);
        self.decohere.apply(s);
        let sw = s.sweep_mut();
        if self.var.is_some() {
            sw.variable = self.var;
        }
        set!(sw, self; from, to, points, scale);
    }
}

impl SharedFlags {
    pub fn apply(&self, s: &mut Settings) {
        set!(s, self; seed, threads);
        if self.keep_going {
            s.keep_going = Some(true);
        }
        if self.plot_data.is_some() {
            s.plot_data = self.plot_data.clone();
        }
        if self.output.is_some() {
            s.output_mut().path = self.output.clone();
        }
        if self.format.is_some() {
            s.output_mut().format = self.format;
        }
    }
}
