//! Quantities extracted from grid eigenvectors: energies split into kinetic
//! and potential parts, one-dimensional marginals, exchange parity and
//! subspace comparisons against analytic states.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use super::eigen::GridEigenpair;
use super::grid::{GridHamiltonian, GridSpec};
use crate::error::{Error, Result};
use crate::homonuclear::{exchange, SeparationKind};
use crate::normal_modes::{ModeState, NormalModes};

/// Largest probability allowed within [`BOUNDARY_CELLS`] of the box edge.
pub const BOUNDARY_MASS_LIMIT: f64 = 1e-8;
pub const BOUNDARY_CELLS: usize = 3;

/// Bilinear interpolation of a grid function at `(q2, q3)`; zero outside the box.
pub fn sample(grid: &GridSpec, v: &[f64], q2: f64, q3: f64) -> f64 {
    let n = grid.points();
    let [l2, l3] = grid.half_widths();
    let [h2, h3] = grid.spacing();
    let s = (q2 + l2) / h2;
    let t = (q3 + l3) / h3;
    // Nodes one spacing outside the box hold the Dirichlet zero.
    if !(s > -1.0 && t > -1.0 && s < n as f64 && t < n as f64) {
        return 0.0;
    }
    let (i0, j0) = (s.floor(), t.floor());
    let (fs, ft) = (s - i0, t - j0);
    let at = |i: f64, j: f64| -> f64 {
        if i < 0.0 || j < 0.0 || i >= n as f64 || j >= n as f64 {
            0.0
        } else {
            v[grid.index(i as usize, j as usize)]
        }
    };
    (1.0 - fs) * (1.0 - ft) * at(i0, j0)
        + fs * (1.0 - ft) * at(i0 + 1.0, j0)
        + (1.0 - fs) * ft * at(i0, j0 + 1.0)
        + fs * ft * at(i0 + 1.0, j0 + 1.0)
}

/// Resample a grid function onto another grid.
pub fn interpolate(from: &GridSpec, v: &[f64], to: &GridSpec) -> Vec<f64> {
    let q2 = to.axis(0);
    let q3 = to.axis(1);
    q2.iter()
        .flat_map(|&x| q3.iter().map(move |&y| (x, y)))
        .map(|(x, y)| sample(from, v, x, y))
        .collect()
}

/// Grid inner product `sum a b h2 h3`.
pub fn inner(grid: &GridSpec, a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() * grid.cell_area()
}

/// `(<T>, <V>)` in a density-normalized eigenvector, using the operator's stencils.
pub fn expectation_t_v(h: &GridHamiltonian, pair: &GridEigenpair) -> (f64, f64) {
    let g = h.grid();
    let v = &pair.eigenvector;
    let norm = inner(g, v, v);
    let mut buf = vec![0.0; v.len()];
    h.apply_kinetic(v, &mut buf);
    let t = inner(g, v, &buf) / norm;
    h.apply_potential(v, &mut buf);
    let pot = inner(g, v, &buf) / norm;
    (t, pot)
}

/// Probability within `cells` spacings of any edge of the box.
pub fn boundary_mass(grid: &GridSpec, v: &[f64], cells: usize) -> f64 {
    let n = grid.points();
    let near = |k: usize| k < cells || k + cells >= n;
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            if near(i) || near(j) {
                let x = v[grid.index(i, j)];
                total += x * x;
            }
        }
    }
    total * grid.cell_area()
}

/// Domain error if any eigenvector leaks more than [`BOUNDARY_MASS_LIMIT`]
/// into the edge cells.
pub fn check_domain(grid: &GridSpec, pairs: &[GridEigenpair]) -> Result<()> {
    for (k, pair) in pairs.iter().enumerate() {
        let mass = boundary_mass(grid, &pair.eigenvector, BOUNDARY_CELLS);
        if mass > BOUNDARY_MASS_LIMIT {
            return Err(Error::Domain(format!(
                "state {k} has probability {mass:.3e} within {BOUNDARY_CELLS} cells of the box edge; enlarge the domain"
            )));
        }
    }
    Ok(())
}

/// Sampled one-dimensional density.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Marginal {
    pub delta: Vec<f64>,
    pub density: Vec<f64>,
}

impl Marginal {
    /// Trapezoidal integral of the density.
    pub fn total(&self) -> f64 {
        self.delta
            .windows(2)
            .zip(self.density.windows(2))
            .map(|(d, r)| 0.5 * (d[1] - d[0]) * (r[0] + r[1]))
            .sum()
    }
}

/// Density of the particle separation `delta` obtained by integrating
/// `|psi|^2` over the other internal coordinate.
///
/// Nucleus-nucleus: `delta = x1 - x2 = -q2`, integrated over `q3`.
/// Nucleus-electron: `delta = x1 - x3 = -q3`, integrated over `q2`.
pub fn marginal(grid: &GridSpec, v: &[f64], kind: SeparationKind) -> Marginal {
    let n = grid.points();
    let [h2, h3] = grid.spacing();
    let trapezoid = |values: &mut dyn Iterator<Item = f64>, h: f64| -> f64 {
        let vals: Vec<f64> = values.collect();
        let inner: f64 = vals.iter().sum();
        h * (inner - 0.5 * (vals[0] + vals[vals.len() - 1]))
    };
    let (axis, density): (usize, Vec<f64>) = match kind {
        SeparationKind::NucleusNucleus => (
            0,
            (0..n)
                .map(|i| trapezoid(&mut (0..n).map(|j| v[grid.index(i, j)].powi(2)), h3))
                .collect(),
        ),
        SeparationKind::NucleusElectron => (
            1,
            (0..n)
                .map(|j| trapezoid(&mut (0..n).map(|i| v[grid.index(i, j)].powi(2)), h2))
                .collect(),
        ),
    };
    // delta = -q runs the axis backwards.
    let delta: Vec<f64> = grid.axis(axis).iter().rev().map(|q| -q).collect();
    let density = density.into_iter().rev().collect();
    Marginal { delta, density }
}

/// `<a | P b>` where `P` exchanges the nuclei, `(q2, q3) -> (-q2, q3 - q2)`.
pub fn exchange_overlap(grid: &GridSpec, a: &[f64], b: &[f64]) -> f64 {
    let q2 = grid.axis(0);
    let q3 = grid.axis(1);
    let mut total = 0.0;
    for (i, &x) in q2.iter().enumerate() {
        for (j, &y) in q3.iter().enumerate() {
            let av = a[grid.index(i, j)];
            if av != 0.0 {
                let (xs, ys) = exchange(x, y);
                total += av * sample(grid, b, xs, ys);
            }
        }
    }
    total * grid.cell_area()
}

/// Consecutive runs of eigenvalues whose gaps are below `relative_gap * |E|`.
pub fn clusters(values: &[f64], relative_gap: f64) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for k in 1..=values.len() {
        if k == values.len() || (values[k] - values[k - 1]).abs() > relative_gap * values[k].abs() {
            out.push(start..k);
            start = k;
        }
    }
    out
}

/// Relative eigenvalue gap below which grid states are treated as degenerate.
pub const CLUSTER_GAP: f64 = 2e-3;

/// Exchange eigenvalue of each state. Within near-degenerate clusters the
/// exchange operator is diagonalized in the cluster and its eigenvalues are
/// reported in descending order.
pub fn measured_parities(grid: &GridSpec, pairs: &[GridEigenpair]) -> Vec<f64> {
    let values: Vec<f64> = pairs.iter().map(|p| p.eigenvalue).collect();
    let mut out = Vec::with_capacity(pairs.len());
    for range in clusters(&values, CLUSTER_GAP) {
        let members = &pairs[range];
        let k = members.len();
        let mut m = DMatrix::zeros(k, k);
        for a in 0..k {
            for b in 0..k {
                m[(a, b)] = exchange_overlap(grid, &members[a].eigenvector, &members[b].eigenvector);
            }
        }
        let sym = (&m + m.transpose()) * 0.5;
        let mut ev: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        out.extend(ev);
    }
    out
}

/// Analytic eigenfunction sampled at every node.
pub fn sample_analytic(grid: &GridSpec, modes: &NormalModes, state: &ModeState) -> Result<Vec<f64>> {
    let q2 = grid.axis(0);
    let q3 = grid.axis(1);
    let mut out = Vec::with_capacity(grid.dimension());
    for &x in &q2 {
        for &y in &q3 {
            out.push(modes.eval_wavefunction(state, &[x, y])?);
        }
    }
    Ok(out)
}

/// Spectral-norm distance between the projectors onto two sets of
/// grid-orthonormal vectors spanning subspaces of equal dimension.
pub fn projector_distance(grid: &GridSpec, a: &[&[f64]], b: &[&[f64]]) -> f64 {
    let k = a.len();
    assert_eq!(k, b.len(), "subspaces must have equal dimension");
    let o = DMatrix::from_fn(k, k, |r, c| inner(grid, a[r], b[c]));
    let smallest = o.singular_values().iter().copied().fold(f64::INFINITY, f64::min);
    (1.0 - smallest.min(1.0).powi(2)).max(0.0).sqrt()
}
