//! Lowest eigenpairs of the grid Hamiltonian by a preconditioned block
//! conjugate-gradient (LOBPCG) iteration with an orthonormal search basis.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::dst::SeparablePreconditioner;
use super::grid::GridHamiltonian;
use crate::error::{Error, Result};

/// Largest number of eigenpairs one call may request.
pub const MAX_STATES: usize = 12;

/// Extra block vectors iterated alongside the requested ones.
const GUARD_VECTORS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Stop once every requested `||H v - E v||` (unit `v`) is below this.
    pub tolerance: f64,
    pub max_iterations: usize,
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-9,
            max_iterations: 1000,
            seed: 0x6861_726d_6f6c_6563,
        }
    }
}

/// One converged eigenpair. `eigenvector` is scaled so that
/// `sum |psi|^2 h2 h3 = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridEigenpair {
    pub eigenvalue: f64,
    pub eigenvector: Vec<f64>,
    pub residual: f64,
}

/// Column-major block of grid vectors, one per column.
type Block = DMatrix<f64>;

fn columns(m: &Block) -> std::slice::Chunks<'_, f64> {
    m.as_slice().chunks(m.nrows().max(1))
}

/// Stack blocks side by side.
fn hstack(parts: &[&Block], rows: usize) -> Block {
    let cols = parts.iter().map(|b| b.ncols()).sum();
    let mut out = DMatrix::zeros(rows, cols);
    let mut offset = 0;
    for b in parts {
        let len = b.len();
        out.as_mut_slice()[offset..offset + len].copy_from_slice(b.as_slice());
        offset += len;
    }
    out
}

/// `a^T b` through a cache-blocked kernel.
fn tr_mul(a: &Block, b: &Block) -> Block {
    let (n, m, k) = (a.nrows(), a.ncols(), b.ncols());
    let mut c = DMatrix::zeros(m, k);
    if n == 0 || m == 0 || k == 0 {
        return c;
    }
    // SAFETY: the strides describe the column-major storage of `a` (read
    // transposed), `b` and `c`, and every index stays inside its buffer.
    unsafe {
        matrixmultiply::dgemm(
            m,
            n,
            k,
            1.0,
            a.as_ptr(),
            n as isize,
            1,
            b.as_ptr(),
            1,
            n as isize,
            0.0,
            c.as_mut_ptr(),
            1,
            m as isize,
        );
    }
    c
}

fn apply_block(h: &GridHamiltonian, x: &Block) -> Block {
    let n = x.nrows();
    let mut y = DMatrix::zeros(n, x.ncols());
    for (src, dst) in columns(x).zip(y.as_mut_slice().chunks_mut(n)) {
        h.apply(src, dst);
    }
    y
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn column_norm(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

/// Orthonormalize the columns of `w` against the orthonormal columns of `q`
/// and among themselves, dropping numerically dependent columns.
fn orthonormalize(q: Option<&Block>, mut w: Block) -> Block {
    let n = w.nrows();
    let start: Vec<f64> = columns(&w).map(column_norm).collect();
    let mut keep = vec![true; w.ncols()];
    for round in 0..2 {
        if let Some(q) = q.filter(|q| q.ncols() > 0) {
            let c = tr_mul(q, &w);
            w.gemm(-1.0, q, &c, 1.0);
        }
        for j in 0..w.ncols() {
            if !keep[j] {
                continue;
            }
            for k in 0..j {
                if keep[k] {
                    let (head, tail) = w.as_mut_slice().split_at_mut(j * n);
                    let prev = &head[k * n..(k + 1) * n];
                    let cur = &mut tail[..n];
                    let c: f64 = prev.iter().zip(cur.iter()).map(|(a, b)| a * b).sum();
                    cur.iter_mut().zip(prev).for_each(|(x, y)| *x -= c * y);
                }
            }
            let col = &mut w.as_mut_slice()[j * n..(j + 1) * n];
            let len = column_norm(col);
            let floor = if round == 0 { 1e-10 * start[j] } else { 1e-3 };
            if !(len > floor) || !len.is_finite() {
                keep[j] = false;
                col.iter_mut().for_each(|x| *x = 0.0);
            } else {
                col.iter_mut().for_each(|x| *x /= len);
            }
        }
    }
    let kept: Vec<usize> = (0..w.ncols()).filter(|&j| keep[j]).collect();
    w.select_columns(&kept)
}

/// Symmetric eigen-decomposition with ascending eigenvalues.
fn sorted_eigen(g: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let m = g.nrows();
    let sym = (&g + g.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(m, m, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

fn fix_sign(v: &mut [f64]) {
    let mut best = 0usize;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v[best] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// The `count` lowest eigenpairs of `h`, ascending.
pub fn lowest_eigenpairs(h: &GridHamiltonian, count: usize) -> Result<Vec<GridEigenpair>> {
    lowest_eigenpairs_with(h, count, &SolverOptions::default(), None)
}

/// As [`lowest_eigenpairs`], optionally starting from approximate
/// eigenvectors (for example interpolated from a coarser grid).
pub fn lowest_eigenpairs_with(
    h: &GridHamiltonian,
    count: usize,
    opts: &SolverOptions,
    start: Option<&[Vec<f64>]>,
) -> Result<Vec<GridEigenpair>> {
    if count == 0 || count > MAX_STATES {
        return Err(Error::validation(
            "states",
            format!("must be between 1 and {MAX_STATES}, got {count}"),
        ));
    }
    let grid = *h.grid();
    let n = grid.dimension();
    let block = (count + GUARD_VECTORS).min(n);
    let pc = SeparablePreconditioner::new(grid.points(), grid.spacing(), h.kinetic_diagonal());

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut x = DMatrix::zeros(n, block);
    let given = start.unwrap_or(&[]);
    for (c, col) in x.as_mut_slice().chunks_mut(n).enumerate() {
        match given.get(c) {
            Some(v) if v.len() == n => col.copy_from_slice(v),
            _ => {
                let noise: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() - 0.5).collect();
                pc.apply(&noise, col, 1.0);
            }
        }
    }
    let x0 = orthonormalize(None, x);
    if x0.ncols() < block {
        return Err(Error::Solver {
            iterations: 0,
            residual: f64::INFINITY,
        });
    }
    let hx0 = apply_block(h, &x0);
    let (_, y) = sorted_eigen(tr_mul(&x0, &hx0));
    let mut x = &x0 * y;
    let mut hx = apply_block(h, &x);
    let mut lambda: Vec<f64> = columns(&x).zip(columns(&hx)).map(|(a, b)| dot(a, b)).collect();

    let mut p: Block = DMatrix::zeros(n, 0);
    let mut hp: Block = DMatrix::zeros(n, 0);
    let mut residuals = vec![f64::INFINITY; block];

    for iteration in 0..=opts.max_iterations {
        let mut r = hx.clone();
        for (i, (col, xc)) in r.as_mut_slice().chunks_mut(n).zip(columns(&x)).enumerate() {
            col.iter_mut().zip(xc).for_each(|(a, b)| *a -= lambda[i] * b);
            residuals[i] = column_norm(col);
        }
        let worst = residuals[..count].iter().copied().fold(0.0, f64::max);
        if worst < opts.tolerance {
            break;
        }
        if iteration == opts.max_iterations {
            return Err(Error::Solver {
                iterations: iteration,
                residual: worst,
            });
        }

        let shift = (lambda.iter().sum::<f64>() / block as f64).max(f64::MIN_POSITIVE);
        let active: Vec<usize> = (0..block).filter(|&i| residuals[i] >= opts.tolerance).collect();
        let mut w = DMatrix::zeros(n, active.len());
        for (col, &i) in w.as_mut_slice().chunks_mut(n).zip(&active) {
            pc.apply(&r.as_slice()[i * n..(i + 1) * n], col, shift);
        }
        let xp = hstack(&[&x, &p], n);
        let w = orthonormalize(Some(&xp), w);
        let hw = apply_block(h, &w);

        let s = hstack(&[&xp, &w], n);
        let hs = hstack(&[&hx, &hp, &hw], n);
        let (_, vecs) = sorted_eigen(tr_mul(&s, &hs));
        let ysel = vecs.columns(0, block).into_owned();

        // Search direction: the non-X part of the new Ritz vectors, made
        // orthonormal to them in coefficient space.
        let mut z = ysel.clone();
        z.rows_mut(0, block).fill(0.0);
        let z = orthonormalize(Some(&ysel), z);

        x = &s * &ysel;
        hx = apply_block(h, &x);
        lambda = columns(&x).zip(columns(&hx)).map(|(a, b)| dot(a, b) / dot(a, a)).collect();
        p = &s * &z;
        hp = apply_block(h, &p);
    }

    let weight = 1.0 / grid.cell_area().sqrt();
    Ok(columns(&x)
        .take(count)
        .enumerate()
        .map(|(i, col)| {
            let mut v = col.to_vec();
            let len = column_norm(&v);
            fix_sign(&mut v);
            v.iter_mut().for_each(|e| *e *= weight / len);
            GridEigenpair {
                eigenvalue: lambda[i],
                eigenvector: v,
                residual: residuals[i],
            }
        })
        .collect())
}
