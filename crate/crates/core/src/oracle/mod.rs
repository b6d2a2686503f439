//! Brute-force check of the analytic spectrum: the internal Hamiltonian
//! discretized by finite differences on a `(q2, q3)` grid and diagonalized
//! iteratively.
//!
//! Matrix-vector products and transforms run on a rayon pool whose size is
//! capped by the `HARMOLEC_THREADS` environment variable. Reductions use a
//! fixed order, so results do not depend on the thread count.

mod dst;
pub mod eigen;
pub mod grid;
pub mod observables;

use serde::{Deserialize, Serialize};

pub use eigen::{lowest_eigenpairs, lowest_eigenpairs_with, GridEigenpair, SolverOptions, MAX_STATES};
pub use grid::{build_hamiltonian, GridHamiltonian, GridSpec};
pub use observables::{expectation_t_v, marginal, measured_parities, Marginal};

use crate::error::{Error, Result};
use crate::exact::{exact_frequencies, lowest_levels};
use crate::homonuclear::{homonuclear_frequencies, parity, HomonuclearParams};
use crate::model::ModelParams;

pub const THREADS_ENV: &str = "HARMOLEC_THREADS";

/// Run `f` on a pool limited to `HARMOLEC_THREADS` threads when that is set.
pub fn with_thread_limit<T: Send>(f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    match std::env::var(THREADS_ENV) {
        Err(_) => f(),
        Ok(raw) => {
            let threads: usize = raw
                .trim()
                .parse()
                .ok()
                .filter(|&t| t > 0)
                .ok_or_else(|| Error::validation(THREADS_ENV, format!("expected a positive integer, got {raw:?}")))?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| Error::validation(THREADS_ENV, e.to_string()))?;
            pool.install(f)
        }
    }
}

/// Lowest eigenpairs of the discretized Hamiltonian on one grid.
#[derive(Debug, Clone)]
pub struct OracleRun {
    pub hamiltonian: GridHamiltonian,
    pub pairs: Vec<GridEigenpair>,
}

impl OracleRun {
    pub fn grid(&self) -> &GridSpec {
        self.hamiltonian.grid()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.eigenvalue).collect()
    }
}

fn finish(p: &ModelParams, grid: GridSpec, count: usize, start: Option<&[Vec<f64>]>) -> Result<OracleRun> {
    with_thread_limit(|| {
        let hamiltonian = build_hamiltonian(p, grid);
        let pairs = lowest_eigenpairs_with(&hamiltonian, count, &SolverOptions::default(), start)?;
        observables::check_domain(&grid, &pairs)?;
        Ok(OracleRun { hamiltonian, pairs })
    })
}

/// The `count` lowest grid eigenpairs.
pub fn solve(p: &ModelParams, grid: GridSpec, count: usize) -> Result<OracleRun> {
    finish(p, grid, count, None)
}

/// As [`solve`] on a finer grid, starting from `coarse` interpolated onto it.
pub fn refine(p: &ModelParams, grid: GridSpec, coarse: &OracleRun) -> Result<OracleRun> {
    let start: Vec<Vec<f64>> = coarse
        .pairs
        .iter()
        .map(|pair| observables::interpolate(coarse.grid(), &pair.eigenvector, &grid))
        .collect();
    finish(p, grid, coarse.pairs.len(), Some(&start))
}

/// Widening factor applied to the automatic box after a domain error.
pub const AUTO_WIDENING: f64 = 1.25;
const AUTO_ATTEMPTS: usize = 3;

/// [`solve`] on the automatic box, widened by [`AUTO_WIDENING`] when excited
/// states reach the edge. Only the last attempt's domain error is reported.
pub fn solve_auto(p: &ModelParams, points: usize, count: usize) -> Result<OracleRun> {
    let mut deviations = grid::AUTO_DEVIATIONS;
    let mut attempt = 1;
    loop {
        match solve(p, GridSpec::with_deviations(p, points, deviations)?, count) {
            Err(Error::Domain(_)) if attempt < AUTO_ATTEMPTS => {
                deviations *= AUTO_WIDENING;
                attempt += 1;
            }
            other => return other,
        }
    }
}

/// Grid eigenvalues against the analytic levels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub grid_n: usize,
    pub half_widths: [f64; 2],
    /// Analytic labels `(n1, n2)`, `n1` counting quanta of the faster mode.
    pub labels: Vec<[u32; 2]>,
    pub analytic: Vec<f64>,
    pub grid: Vec<f64>,
    pub abs_err: Vec<f64>,
    pub residual: Vec<f64>,
    pub kinetic: Vec<f64>,
    pub potential: Vec<f64>,
    /// Measured exchange sign per state; empty unless the nuclei are identical.
    pub parity: Vec<i32>,
    /// Measured exchange eigenvalue per state (cluster-diagonalized).
    pub parity_overlap: Vec<f64>,
    /// Analytic exchange sign, ordered like `parity` within degenerate clusters.
    pub parity_expected: Vec<i32>,
}

/// Analytic exchange sign of each level `(n1, n2)` for identical nuclei.
fn analytic_parities(p: &ModelParams, labels: &[(u32, u32, f64)]) -> Result<Vec<i32>> {
    let h = HomonuclearParams::from_model(p)?;
    let (_, w_anti) = homonuclear_frequencies(&h);
    let (w1, w2) = exact_frequencies(p)?;
    // The antisymmetric mode is whichever exact frequency it matches.
    let anti_is_slow = (w_anti - w2).abs() <= (w_anti - w1).abs();
    Ok(labels
        .iter()
        .map(|&(n1, n2, _)| parity(if anti_is_slow { n2 } else { n1 }))
        .collect())
}

pub fn verify(p: &ModelParams, points: usize, domain: Option<f64>, states: usize) -> Result<VerifyReport> {
    if states == 0 || states > MAX_STATES {
        return Err(Error::validation(
            "states",
            format!("must be between 1 and {MAX_STATES}, got {states}"),
        ));
    }
    let run = match domain {
        Some(l) => solve(p, GridSpec::square(l, points)?, states)?,
        None => solve_auto(p, points, states)?,
    };
    let grid = *run.grid();
    let levels = lowest_levels(p, states)?;
    let analytic: Vec<f64> = levels.iter().map(|l| l.2).collect();
    let values = run.eigenvalues();
    let (kinetic, potential): (Vec<f64>, Vec<f64>) =
        run.pairs.iter().map(|pair| expectation_t_v(&run.hamiltonian, pair)).unzip();
    let (parity, parity_overlap, parity_expected) = if p.is_homonuclear() {
        let measured = with_thread_limit(|| Ok(measured_parities(&grid, &run.pairs)))?;
        let mut expected = analytic_parities(p, &levels)?;
        for range in observables::clusters(&values, observables::CLUSTER_GAP) {
            expected[range].sort_by(|a, b| b.cmp(a));
        }
        let signs = measured.iter().map(|&m| if m >= 0.0 { 1 } else { -1 }).collect();
        (signs, measured, expected)
    } else {
        (Vec::new(), Vec::new(), Vec::new())
    };
    Ok(VerifyReport {
        grid_n: points,
        half_widths: grid.half_widths(),
        labels: levels.iter().map(|l| [l.0, l.1]).collect(),
        abs_err: values.iter().zip(&analytic).map(|(g, a)| (g - a).abs()).collect(),
        analytic,
        grid: values,
        residual: run.pairs.iter().map(|pair| pair.residual).collect(),
        kinetic,
        potential,
        parity,
        parity_overlap,
        parity_expected,
    })
}
