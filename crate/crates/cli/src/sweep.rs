//! Grid sweeps, evaluated in parallel and assembled in grid order.

use rayon::prelude::*;

use crate::emit::{Cell, Table};
use crate::modes::{self, decohere_target, Target};
use crate::settings::{need, Scale, Settings, SweepVar};
use crate::CliError;

/// `points` values from `from` to `to`; both ends are exact.
pub fn grid(from: f64, to: f64, points: usize, scale: Scale) -> Result<Vec<f64>, CliError> {
    if points < 2 {
        return Err(CliError::usage(format!(
            "sweep needs at least 2 points, got {points}"
        )));
    }
    if !(from.is_finite() && to.is_finite() && from < to) {
        return Err(CliError::usage(format!(
            "sweep range needs from < to, got {from} .. {to}"
        )));
    }
    if scale == Scale::Log && from <= 0.0 {
        return Err(CliError::usage(format!(
            "log sweep needs from > 0, got {from}"
        )));
    }
    let last = (points - 1) as f64;
    Ok((0..points)
        .map(|i| {
            if i == 0 {
                return from;
            }
            if i == points - 1 {
                return to;
            }
            let t = i as f64 / last;
            match scale {
                Scale::Linear => from + (to - from) * t,
                Scale::Log => (from.ln() + (to.ln() - from.ln()) * t).exp(),
            }
        })
        .collect())
}

pub fn target(s: &Settings, var: SweepVar) -> Target {
    match var {
        SweepVar::Mass | SweepVar::D1 | SweepVar::D2 | SweepVar::ArmLength | SweepVar::Dt => {
            Target::Run
        }
        SweepVar::Gamma => Target::Decohere,
        SweepVar::W | SweepVar::XiScale => {
            if s.gamma.is_some() || s.threshold.unwrap_or(false) {
                decohere_target(s)
            } else {
                Target::Mediator
            }
        }
    }
}

fn with_value(s: &Settings, var: SweepVar, x: f64) -> Settings {
    let mut p = s.clone();
    match var {
        SweepVar::Mass => p.mass = Some(x),
        SweepVar::D1 => p.d1 = Some(x),
        SweepVar::D2 => p.d2 = Some(x),
        SweepVar::ArmLength => p.arm_length = Some(x),
        SweepVar::Dt => p.dt = Some(x),
        SweepVar::Gamma => p.gamma = Some(x),
        SweepVar::W => p.w = Some(x),
        SweepVar::XiScale => p.xi_scale = Some(x),
    }
    p
}

pub fn sweep_var(s: &Settings) -> Result<SweepVar, CliError> {
    need(
        s.sweep.as_ref().and_then(|w| w.variable),
        "var",
        "sweep.variable",
    )
}

/// Runs the sweep on a pool of `threads` workers. Returns the table and a
/// note per point skipped under `--keep-going`.
pub fn run(s: &Settings, threads: usize) -> Result<(Table, Vec<String>), CliError> {
    let var = sweep_var(s)?;
    let spec = s.sweep.clone().unwrap_or_default();
    let values = grid(
        need(spec.from, "from", "sweep.from")?,
        need(spec.to, "to", "sweep.to")?,
        need(spec.points, "points", "sweep.points")?,
        spec.scale.unwrap_or_default(),
    )?;
    let target = target(s, var);
    if var == SweepVar::Gamma && s.threshold.unwrap_or(false) {
        return Err(CliError::usage(
            "--threshold searches gamma itself; sweep w or xi_scale instead",
        ));
    }
    if matches!(
        var,
        SweepVar::Mass | SweepVar::D1 | SweepVar::D2 | SweepVar::ArmLength | SweepVar::Dt
    ) && (s.phi1.is_some() || s.dphi.is_some())
    {
        return Err(CliError::usage(
            "geometry sweeps derive the phases; drop phi1/dphi",
        ));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::numerical(format!("cannot start worker pool: {e}")))?;

    // The dephased cycle does not depend on gamma: build it once.
    let shared_cycle = if var == SweepVar::Gamma {
        Some(modes::dephased_cycle(s)?)
    } else {
        None
    };

    let eval = |x: f64| -> Result<Vec<Cell>, CliError> {
        let p = with_value(s, var, x);
        match target {
            Target::Run => modes::run_row(&p, Some(x)),
            Target::Mediator => modes::mediator_row(&p, Some(x)),
            Target::Threshold => modes::threshold_row(&p, Some(x)),
            Target::Decohere => {
                let gamma = need(p.gamma, "gamma", "gamma")?;
                match &shared_cycle {
                    Some(cycle) => modes::decohere_row(cycle, gamma, Some(x)),
                    None => modes::decohere_row(&modes::dephased_cycle(&p)?, gamma, Some(x)),
                }
            }
            Target::Phase | Target::Nogo => unreachable!("not a sweep target"),
        }
    };
    let results: Vec<Result<Vec<Cell>, CliError>> =
        pool.install(|| values.par_iter().map(|&x| eval(x)).collect());

    let mut table = Table::new(target.columns());
    let mut skipped = Vec::new();
    for (i, (x, r)) in values.iter().zip(results).enumerate() {
        match r {
            Ok(row) => table.rows.push(row),
            Err(e) if s.keep_going() => {
                skipped.push((format!("point {i} ({x:?}) skipped: {}", e.message), e))
            }
            Err(e) => {
                table.partial = Some(format!("point {i} ({x:?}) failed: {}", e.message));
                return Err(e.with_partial(table));
            }
        }
    }
    if table.rows.is_empty() {
        let (_, e) = skipped.swap_remove(0);
        return Err(e);
    }
    Ok((table, skipped.into_iter().map(|(m, _)| m).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints_are_exact() {
        let g = grid(1e-7, 1e-6, 7, Scale::Log).unwrap();
        assert_eq!(g.len(), 7);
        assert_eq!(g[0], 1e-7);
        assert_eq!(g[6], 1e-6);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        let g = grid(0.0, 1.0, 5, Scale::Linear).unwrap();
        assert_eq!(g, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn grid_rejects_bad_specs() {
        assert!(grid(0.0, 1.0, 1, Scale::Linear).is_err());
        assert!(grid(1.0, 1.0, 3, Scale::Linear).is_err());
        assert!(grid(0.0, 1.0, 3, Scale::Log).is_err());
    }
}
