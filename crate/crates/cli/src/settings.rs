//! Experiment configuration: JSON file keys and command-line flags share one
//! shape, and flags are laid over the file.

use std::fmt;
use std::ops::RangeInclusive;
use std::path::Path;

use clap::ValueEnum;
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Phase,
    Run,
    Sweep,
    Nogo,
    Mediator,
    Decohere,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(
            self.to_possible_value()
                .expect("no skipped variants")
                .get_name(),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
pub enum SweepVar {
    #[serde(rename = "mass")]
    #[value(name = "mass")]
    Mass,
    #[serde(rename = "d1")]
    #[value(name = "d1")]
    D1,
    #[serde(rename = "d2")]
    #[value(name = "d2")]
    D2,
    #[serde(rename = "L")]
    #[value(name = "L")]
    ArmLength,
    #[serde(rename = "dt")]
    #[value(name = "dt")]
    Dt,
    #[serde(rename = "gamma")]
    #[value(name = "gamma")]
    Gamma,
    #[serde(rename = "w")]
    #[value(name = "w")]
    W,
    #[serde(rename = "xi_scale")]
    #[value(name = "xi_scale")]
    XiScale,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Assignment {
    #[default]
    Standard,
    Geometric,
}

/// Mediator dimensions for `nogo`: one value or an inclusive `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum DcRange {
    One(usize),
    Span([usize; 2]),
}

impl DcRange {
    /// Accepts `3`, `2-4`, `2..4` and `2..=4` (all inclusive).
    pub fn parse(text: &str) -> Result<Self, String> {
        let text = text.trim();
        let split = ["..=", "..", "-"]
            .iter()
            .find_map(|sep| text.split_once(sep));
        let num = |s: &str| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| format!("invalid mediator dimension `{s}`"))
        };
        match split {
            Some((lo, hi)) => Ok(DcRange::Span([num(lo)?, num(hi)?])),
            None => Ok(DcRange::One(num(text)?)),
        }
    }

    pub fn range(self) -> RangeInclusive<usize> {
        match self {
            DcRange::One(d) => d..=d,
            DcRange::Span([lo, hi]) => lo..=hi,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSettings {
    pub variable: Option<SweepVar>,
    pub scale: Option<Scale>,
    pub from: Option<f64>,
    pub to: Option<f64>,
    pub points: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSettings {
    pub format: Option<Format>,
    /// File path, or `-` for stdout.
    pub path: Option<String>,
}

/// Every knob of a run. Physical quantities are SI: kg, m, s; phases in rad.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    pub mode: Option<Mode>,
    pub mass: Option<f64>,
    pub distance: Option<f64>,
    pub d1: Option<f64>,
    pub d2: Option<f64>,
    #[serde(rename = "L")]
    pub arm_length: Option<f64>,
    pub dt: Option<f64>,
    pub velocity: Option<f64>,
    pub exponent: Option<f64>,
    pub phi1: Option<f64>,
    pub dphi: Option<f64>,
    pub assignment: Option<Assignment>,
    pub w: Option<f64>,
    pub xi00: Option<f64>,
    pub xi01: Option<f64>,
    pub xi10: Option<f64>,
    pub xi11: Option<f64>,
    pub xi_scale: Option<f64>,
    pub alpha0: Option<f64>,
    pub fock: Option<usize>,
    pub gamma: Option<f64>,
    pub threshold: Option<bool>,
    pub tol: Option<f64>,
    pub trials: Option<usize>,
    pub depth: Option<usize>,
    pub dc: Option<DcRange>,
    pub sweep: Option<SweepSettings>,
    pub output: Option<OutputSettings>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub keep_going: Option<bool>,
    pub plot_data: Option<String>,
}

macro_rules! overlay {
    ($base:expr, $top:expr; $($f:ident),* $(,)?) => {
        $( if $top.$f.is_some() { $base.$f = $top.$f.clone(); } )*
    };
}

impl Settings {
    pub fn from_json(text: &str, origin: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::usage(format!("config {origin}: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text, &path.display().to_string())
    }

    /// `top` wins wherever it is set.
    pub fn overlay(mut self, top: &Settings) -> Settings {
        overlay!(self, top;
            mode, mass, distance, d1, d2, arm_length, dt, velocity, exponent, phi1, dphi,
            assignment, w, xi00, xi01, xi10, xi11, xi_scale, alpha0, fock, gamma, threshold,
            tol, trials, depth, dc, seed, threads, keep_going, plot_data,
        );
        if let Some(t) = &top.sweep {
            let mut s = self.sweep.take().unwrap_or_default();
            overlay!(s, t; variable, scale, from, to, points);
            self.sweep = Some(s);
        }
        if let Some(t) = &top.output {
            let mut o = self.output.take().unwrap_or_default();
            overlay!(o, t; format, path);
            self.output = Some(o);
        }
        self
    }

    pub fn sweep_mut(&mut self) -> &mut SweepSettings {
        self.sweep.get_or_insert_with(Default::default)
    }

    pub fn output_mut(&mut self) -> &mut OutputSettings {
        self.output.get_or_insert_with(Default::default)
    }

    pub fn format(&self) -> Format {
        self.output
            .as_ref()
            .and_then(|o| o.format)
            .unwrap_or_default()
    }

    pub fn output_path(&self) -> Option<&str> {
        self.output
            .as_ref()
            .and_then(|o| o.path.as_deref())
            .filter(|p| *p != "-")
    }

    pub fn threads(&self) -> Result<usize, CliError> {
        match self.threads {
            Some(0) => Err(CliError::usage("threads must be at least 1")),
            Some(n) => Ok(n),
            None => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
        }
    }

    pub fn keep_going(&self) -> bool {
        self.keep_going.unwrap_or(false)
    }
}

/// A required value, or a usage error naming both the flag and the config key.
pub fn need<T: Copy>(value: Option<T>, flag: &str, key: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::usage(format!("missing --{flag} (config key `{key}`)")))
}
