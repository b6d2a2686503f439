//! Finite-difference discretization of the internal Hamiltonian on a
//! rectangular `(q2, q3)` grid with Dirichlet walls.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{internal_bilinear_form, ModelParams};
use crate::normal_modes::diagonalize;

/// Smallest accepted number of points per axis.
pub const MIN_POINTS: usize = 32;

/// Auto domains extend this many widest-mode standard deviations each way.
pub const AUTO_DEVIATIONS: f64 = 8.0;

/// Box `[-L2, L2] x [-L3, L3]` sampled by `N` points per axis, endpoints included.
///
/// All `N^2` nodes are unknowns; the wavefunction vanishes one spacing
/// outside the box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    half_widths: [f64; 2],
    points: usize,
}

impl GridSpec {
    pub fn new(half_widths: [f64; 2], points: usize) -> Result<Self> {
        if points < MIN_POINTS {
            return Err(Error::validation(
                "grid_n",
                format!("need at least {MIN_POINTS} points per axis, got {points}"),
            ));
        }
        for (axis, l) in ["q2", "q3"].iter().zip(half_widths) {
            if !(l.is_finite() && l > 0.0) {
                return Err(Error::validation(
                    "domain",
                    format!("half width along {axis} must be positive and finite, got {l}"),
                ));
            }
        }
        Ok(Self { half_widths, points })
    }

    /// Square box of half width `half_width`.
    pub fn square(half_width: f64, points: usize) -> Result<Self> {
        Self::new([half_width; 2], points)
    }

    /// Box reaching [`AUTO_DEVIATIONS`] ground-state standard deviations of
    /// the widest normal mode along each axis.
    pub fn auto(p: &ModelParams, points: usize) -> Result<Self> {
        Self::with_deviations(p, points, AUTO_DEVIATIONS)
    }

    /// Box reaching `deviations` ground-state standard deviations of the
    /// widest normal mode along each axis.
    pub fn with_deviations(p: &ModelParams, points: usize, deviations: f64) -> Result<Self> {
        let modes = diagonalize(&internal_bilinear_form(p))?;
        let sd = modes.widest_mode_deviation();
        Self::new([deviations * sd[0], deviations * sd[1]], points)
    }

    pub fn half_widths(&self) -> [f64; 2] {
        self.half_widths
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn spacing(&self) -> [f64; 2] {
        let n = (self.points - 1) as f64;
        [2.0 * self.half_widths[0] / n, 2.0 * self.half_widths[1] / n]
    }

    /// Area element `h2 h3`.
    pub fn cell_area(&self) -> f64 {
        let [h2, h3] = self.spacing();
        h2 * h3
    }

    pub fn dimension(&self) -> usize {
        self.points * self.points
    }

    /// Node coordinates along q2 (`axis = 0`) or q3 (`axis = 1`).
    pub fn axis(&self, axis: usize) -> Vec<f64> {
        let h = self.spacing()[axis];
        let l = self.half_widths[axis];
        (0..self.points).map(|i| -l + i as f64 * h).collect()
    }

    /// Flat index of node `(i, j)`, `i` along q2.
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.points + j
    }
}

/// Sparse symmetric operator `T + V` on a [`GridSpec`].
///
/// `T = -1/2 [A11 d2/dq2^2 + 2 A12 d2/dq2dq3 + A22 d2/dq3^2]` with three-point
/// second differences and the four-point mixed stencil; `V` is diagonal.
#[derive(Debug, Clone)]
pub struct GridHamiltonian {
    grid: GridSpec,
    /// Stencil weights: centre, q2 neighbours, q3 neighbours, diagonal corners.
    centre: f64,
    along2: f64,
    along3: f64,
    corner: f64,
    kinetic_diag: [f64; 2],
    potential: Vec<f64>,
}

pub fn build_hamiltonian(p: &ModelParams, grid: GridSpec) -> GridHamiltonian {
    let form = internal_bilinear_form(p);
    let (a11, a12, a22) = (form.a[(0, 0)], form.a[(0, 1)], form.a[(1, 1)]);
    let [h2, h3] = grid.spacing();
    let q2 = grid.axis(0);
    let q3 = grid.axis(1);
    let mut potential = Vec::with_capacity(grid.dimension());
    for &x in &q2 {
        for &y in &q3 {
            potential.push(p.internal_potential(x, y));
        }
    }
    GridHamiltonian {
        grid,
        centre: a11 / (h2 * h2) + a22 / (h3 * h3),
        along2: -0.5 * a11 / (h2 * h2),
        along3: -0.5 * a22 / (h3 * h3),
        corner: -a12 / (4.0 * h2 * h3),
        kinetic_diag: [a11, a22],
        potential,
    }
}

impl GridHamiltonian {
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn dimension(&self) -> usize {
        self.grid.dimension()
    }

    /// Diagonal of `A` along (q2, q3), for the separable preconditioner.
    pub fn kinetic_diagonal(&self) -> [f64; 2] {
        self.kinetic_diag
    }

    /// Potential energy at every node.
    pub fn potential(&self) -> &[f64] {
        &self.potential
    }

    fn kinetic_row(&self, x: &[f64], i: usize, out: &mut [f64]) {
        let n = self.grid.points;
        let row = &x[i * n..(i + 1) * n];
        let up = (i + 1 < n).then(|| &x[(i + 1) * n..(i + 2) * n]);
        let down = (i > 0).then(|| &x[(i - 1) * n..i * n]);
        for j in 0..n {
            let mut v = self.centre * row[j];
            if j > 0 {
                v += self.along3 * row[j - 1];
            }
            if j + 1 < n {
                v += self.along3 * row[j + 1];
            }
            if let Some(u) = up {
                v += self.along2 * u[j];
                let mut c = 0.0;
                if j + 1 < n {
                    c += u[j + 1];
                }
                if j > 0 {
                    c -= u[j - 1];
                }
                v += self.corner * c;
            }
            if let Some(d) = down {
                v += self.along2 * d[j];
                let mut c = 0.0;
                if j > 0 {
                    c += d[j - 1];
                }
                if j + 1 < n {
                    c -= d[j + 1];
                }
                v += self.corner * c;
            }
            out[j] = v;
        }
    }

    /// `y = T x`.
    pub fn apply_kinetic(&self, x: &[f64], y: &mut [f64]) {
        let n = self.grid.points;
        y.par_chunks_mut(n)
            .enumerate()
            .for_each(|(i, out)| self.kinetic_row(x, i, out));
    }

    /// `y = V x`.
    pub fn apply_potential(&self, x: &[f64], y: &mut [f64]) {
        for ((o, v), xi) in y.iter_mut().zip(&self.potential).zip(x) {
            *o = v * xi;
        }
    }

    /// `y = (T + V) x`.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        let n = self.grid.points;
        y.par_chunks_mut(n).enumerate().for_each(|(i, out)| {
            self.kinetic_row(x, i, out);
            let pot = &self.potential[i * n..(i + 1) * n];
            let xr = &x[i * n..(i + 1) * n];
            for j in 0..n {
                out[j] += pot[j] * xr[j];
            }
        });
    }

    /// Matrix element `H[row, col]`.
    pub fn entry(&self, row: usize, col: usize) -> f64 {
        let n = self.grid.points as isize;
        let (i, j) = ((row as isize) / n, (row as isize) % n);
        let (k, l) = ((col as isize) / n, (col as isize) % n);
        match (k - i, l - j) {
            (0, 0) => self.centre + self.potential[row],
            (1, 0) | (-1, 0) => self.along2,
            (0, 1) | (0, -1) => self.along3,
            (1, 1) | (-1, -1) => self.corner,
            (1, -1) | (-1, 1) => -self.corner,
            _ => 0.0,
        }
    }

    /// Nonzero pattern as `(row, col, value)` triplets in row-major order.
    pub fn triplets(&self) -> Vec<(usize, usize, f64)> {
        let n = self.grid.points as isize;
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let row = (i * n + j) as usize;
                for di in -1..=1 {
                    for dj in -1..=1 {
                        let (k, l) = (i + di, j + dj);
                        if k < 0 || l < 0 || k >= n || l >= n {
                            continue;
                        }
                        let col = (k * n + l) as usize;
                        let v = self.entry(row, col);
                        if v != 0.0 {
                            out.push((row, col, v));
                        }
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    fn small(p: &ModelParams) -> GridHamiltonian {
        build_hamiltonian(p, GridSpec::new([3.0, 2.5], 32).unwrap())
    }

    #[test]
    fn rejects_small_or_empty_grids() {
        assert!(matches!(GridSpec::square(8.0, 31), Err(Error::Validation { .. })));
        assert!(matches!(GridSpec::square(0.0, 64), Err(Error::Validation { .. })));
        assert!(matches!(GridSpec::square(f64::NAN, 64), Err(Error::Validation { .. })));
    }

    #[test]
    fn spacing_includes_endpoints() {
        let g = GridSpec::square(8.0, 257).unwrap();
        assert_eq!(g.spacing(), [1.0 / 16.0, 1.0 / 16.0]);
        let ax = g.axis(1);
        assert_eq!(ax[0], -8.0);
        assert_eq!(ax[256], 8.0);
    }

    #[test]
    fn potential_matches_pointwise_formula() {
        let p = ModelParams::from_values(2.0, 1.0, 0.1, 1.0, 2.0, 3.0).unwrap();
        let h = small(&p);
        let (q2, q3) = (h.grid().axis(0), h.grid().axis(1));
        for (i, j) in [(0, 0), (5, 17), (31, 2), (16, 16)] {
            let (x, y) = (q2[i], q3[j]);
            let v = 0.5 * (1.0 * x * x + 2.0 * y * y + 3.0 * (x - y) * (x - y));
            let got = h.potential()[h.grid().index(i, j)];
            assert!((got - v).abs() <= 1e-14 * v.max(1.0));
        }
    }

    #[test]
    fn operator_is_exactly_symmetric() {
        let p = ModelParams::from_values(2.0, 1.0, 0.1, 1.0, 2.0, 3.0).unwrap();
        let h = small(&p);
        let map: HashMap<(usize, usize), f64> = h.triplets().into_iter().map(|(r, c, v)| ((r, c), v)).collect();
        let mut worst = 0.0f64;
        for (&(r, c), &v) in &map {
            worst = worst.max((v - map.get(&(c, r)).copied().unwrap_or(0.0)).abs());
        }
        assert_eq!(worst, 0.0);
    }

    #[test]
    fn matvec_agrees_with_triplets() {
        let p = ModelParams::from_values(1.3, 0.7, 0.2, 0.5, 1.0, 2.0).unwrap();
        let h = small(&p);
        let x: Vec<f64> = (0..h.dimension()).map(|k| ((k * 31 + 7) % 23) as f64 - 11.0).collect();
        let mut y = vec![0.0; h.dimension()];
        h.apply(&x, &mut y);
        let mut z = vec![0.0; h.dimension()];
        for (r, c, v) in h.triplets() {
            z[r] += v * x[c];
        }
        for (a, b) in y.iter().zip(&z) {
            assert!((a - b).abs() <= 1e-9 * (1.0 + b.abs()));
        }
        let mut t = vec![0.0; h.dimension()];
        let mut v = vec![0.0; h.dimension()];
        h.apply_kinetic(&x, &mut t);
        h.apply_potential(&x, &mut v);
        for k in 0..h.dimension() {
            assert!((t[k] + v[k] - y[k]).abs() <= 1e-9 * (1.0 + y[k].abs()));
        }
    }

    // One-dimensional Dirichlet oscillator operator `-(a/2) D2 + k x^2 / 2`.
    fn chain(a: f64, k: f64, xs: &[f64], h: f64, u: &[f64]) -> Vec<f64> {
        let n = u.len();
        (0..n)
            .map(|i| {
                let l = if i > 0 { u[i - 1] } else { 0.0 };
                let r = if i + 1 < n { u[i + 1] } else { 0.0 };
                -0.5 * a * (l - 2.0 * u[i] + r) / (h * h) + 0.5 * k * xs[i] * xs[i] * u[i]
            })
            .collect()
    }

    #[test]
    fn decouples_without_nucleus_electron_spring() {
        // With k23 = 0 the operator minus the mixed stencil acts on product
        // vectors as a sum of two one-dimensional oscillators.
        let p = ModelParams::from_values(1.5, 0.8, 0.3, 0.7, 1.9, 0.0).unwrap();
        let h = small(&p);
        let g = *h.grid();
        let n = g.points();
        let [h2, h3] = g.spacing();
        let form = internal_bilinear_form(&p);
        let (q2, q3) = (g.axis(0), g.axis(1));
        let u: Vec<f64> = q2.iter().map(|x| (-x * x).exp() * (1.0 + x)).collect();
        let w: Vec<f64> = q3.iter().map(|y| (-0.7 * y * y).exp() * (2.0 - y)).collect();
        let x: Vec<f64> = (0..n * n).map(|k| u[k / n] * w[k % n]).collect();
        let mut y = vec![0.0; n * n];
        h.apply(&x, &mut y);
        let hu = chain(form.a[(0, 0)], p.k12(), &q2, h2, &u);
        let hw = chain(form.a[(1, 1)], p.k13(), &q3, h3, &w);
        let a12 = form.a[(0, 1)];
        let d1 = |v: &[f64], i: usize| {
            let l = if i > 0 { v[i - 1] } else { 0.0 };
            let r = if i + 1 < v.len() { v[i + 1] } else { 0.0 };
            r - l
        };
        for i in 0..n {
            for j in 0..n {
                let mixed = -a12 * d1(&u, i) * d1(&w, j) / (4.0 * h2 * h3);
                let expected = hu[i] * w[j] + u[i] * hw[j] + mixed;
                let got = y[i * n + j];
                assert!((got - expected).abs() <= 1e-11 * (1.0 + expected.abs()), "{i},{j}");
            }
        }
    }
}
