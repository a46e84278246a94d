use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::circuit::{apply_classical_circuit, random_classical_circuit};
use crate::entanglement::{bell_states, is_ppt, negativity, witness_expectation, BipartitionSpec};
use crate::error::{Error, Result};
use crate::qcore::linalg::{c, CMatrix};
use crate::qcore::random::{random_density_matrix, random_pure_state};
use crate::qcore::{partial_trace, CompositeSpace, DensityMatrix, Tensor};

const SEPARABILITY_TOLERANCE: f64 = 1e-10;

/// Outcome of one randomized trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub index: usize,
    pub seed: u64,
    pub depth: usize,
    pub d_c: usize,
    /// Whether the mediator started diagonal in its classical basis.
    pub classical_start: bool,
    pub negativity: f64,
    /// Smallest witness value over the four Bell targets.
    pub min_witness: f64,
    pub ppt: bool,
    /// `max |rho - dephased(rho)|` when the mediator started diagonal.
    pub dephasing_defect: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialFailure {
    pub index: usize,
    pub seed: u64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoGoReport {
    pub master_seed: u64,
    pub trials: usize,
    pub max_negativity: f64,
    /// `max(0, -min_witness)` over all trials.
    pub max_witness_violation: f64,
    pub failures: Vec<TrialFailure>,
    /// Per-trial seeds; [`replay_trial`] reproduces any row.
    pub seeds: Vec<u64>,
    pub records: Vec<TrialRecord>,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn trial_seed(master: u64, index: usize) -> u64 {
    splitmix64(master.wrapping_add((index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

fn check_args(max_depth: usize, d_c_range: &RangeInclusive<usize>) -> Result<()> {
    if max_depth == 0 {
        return Err(Error::domain("maximum depth must be at least 1"));
    }
    let (lo, hi) = (*d_c_range.start(), *d_c_range.end());
    if lo < 2 || hi > super::MAX_MEDIATOR_DIM || lo > hi {
        return Err(Error::domain(format!(
            "mediator dimension range {lo}..={hi} outside 2..=4"
        )));
    }
    Ok(())
}

fn dephasing_defect(rho: &DensityMatrix) -> f64 {
    let space = rho.space();
    let d = space.total_dim();
    let mut worst: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            if space.digits(i)[2] != space.digits(j)[2] {
                worst = worst.max(rho.matrix()[(i, j)].norm());
            }
        }
    }
    worst
}

/// Runs trial `seed` alone: draws depth, mediator dimension, circuit and a
/// product input, and evaluates the two-probe marginal.
pub fn replay_trial(
    index: usize,
    seed: u64,
    max_depth: usize,
    d_c_range: RangeInclusive<usize>,
) -> Result<TrialRecord> {
    check_args(max_depth, &d_c_range)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let depth = rng.random_range(1..=max_depth);
    let d_c = rng.random_range(d_c_range);
    let circuit = random_classical_circuit(rng.random(), depth, d_c)?;

    let qubit = CompositeSpace::new(vec![2])?;
    let probe = |rng: &mut ChaCha8Rng| {
        if rng.random_bool(0.5) {
            random_pure_state(&qubit, rng).density_matrix()
        } else {
            random_density_matrix(&qubit, rng)
        }
    };
    let q1 = probe(&mut rng);
    let q2 = probe(&mut rng);
    let classical_start = rng.random_bool(0.5);
    let mediator_space = CompositeSpace::new(vec![d_c])?;
    let mediator = if classical_start {
        let weights: Vec<f64> = (0..d_c).map(|_| rng.random::<f64>()).collect();
        let total: f64 = weights.iter().sum();
        let diag = nalgebra::DVector::from_iterator(d_c, weights.iter().map(|w| c(w / total)));
        DensityMatrix::new(mediator_space, CMatrix::from_diagonal(&diag))?
    } else {
        random_density_matrix(&mediator_space, &mut rng)
    };

    let out = apply_classical_circuit(&circuit, &q1.tensor(&q2).tensor(&mediator))?;
    let probes = partial_trace(&out, &[0, 1])?;
    let split = BipartitionSpec::two_qubits();
    let min_witness = bell_states()
        .iter()
        .map(|t| witness_expectation(&probes, t))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    Ok(TrialRecord {
        index,
        seed,
        depth,
        d_c,
        classical_start,
        negativity: negativity(&probes, &split)?,
        min_witness,
        ppt: is_ppt(&probes, &split)?,
        dephasing_defect: classical_start.then(|| dephasing_defect(&out)),
    })
}

fn failure_reason(r: &TrialRecord) -> Option<String> {
    if r.negativity >= SEPARABILITY_TOLERANCE || !r.ppt {
        return Some(format!("probe negativity {:e}", r.negativity));
    }
    if r.min_witness < -SEPARABILITY_TOLERANCE {
        return Some(format!("Bell witness {:e}", r.min_witness));
    }
    match r.dephasing_defect {
        Some(d) if d > SEPARABILITY_TOLERANCE => Some(format!("mediator coherence {d:e}")),
        _ => None,
    }
}

fn aggregate(master_seed: u64, records: Vec<TrialRecord>) -> NoGoReport {
    let failures = records
        .iter()
        .filter_map(|r| {
            failure_reason(r).map(|reason| TrialFailure {
                index: r.index,
                seed: r.seed,
                reason,
            })
        })
        .collect();
    NoGoReport {
        master_seed,
        trials: records.len(),
        max_negativity: records.iter().map(|r| r.negativity).fold(0.0, f64::max),
        max_witness_violation: records.iter().map(|r| -r.min_witness).fold(0.0, f64::max),
        failures,
        seeds: records.iter().map(|r| r.seed).collect(),
        records,
    }
}

/// `trials` random circuits on the current rayon pool.
pub fn verify_no_go(
    trials: usize,
    max_depth: usize,
    d_c_range: RangeInclusive<usize>,
    seed: u64,
) -> Result<NoGoReport> {
    if trials == 0 {
        return Err(Error::domain("at least one trial is required"));
    }
    check_args(max_depth, &d_c_range)?;
    let records = (0..trials)
        .into_par_iter()
        .map(|i| replay_trial(i, trial_seed(seed, i), max_depth, d_c_range.clone()))
        .collect::<Result<Vec<_>>>()?;
    Ok(aggregate(seed, records))
}

/// As [`verify_no_go`] on a dedicated pool of `threads` workers. Output is
/// identical for every thread count.
pub fn verify_no_go_with_threads(
    trials: usize,
    max_depth: usize,
    d_c_range: RangeInclusive<usize>,
    seed: u64,
    threads: usize,
) -> Result<NoGoReport> {
    if threads == 0 {
        return Err(Error::domain("thread count must be at least 1"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::precondition(format!("cannot start worker pool: {e}")))?;
    pool.install(|| verify_no_go(trials, max_depth, d_c_range, seed))
}
