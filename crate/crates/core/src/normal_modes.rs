//! Simultaneous diagonalization of a quadratic Hamiltonian into uncoupled
//! oscillators.
//!
//! Given `H = -1/2 sum A_ij d_i d_j + 1/2 sum B_ij q_i q_j`, the mode matrix `C`
//! (with `q = C y`) satisfies `C^-1 A C^-T = I` and `C^T B C = diag(omega^2)`.
//! It is built by factoring `A = L L^T` and diagonalizing the symmetric matrix
//! `L^T B L = V D V^T`, giving `C = L V`.

use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::hermite::{hermite_function, MAX_QUANTUM_NUMBER};
use crate::model::BilinearForm;

#[derive(Debug, Clone)]
pub struct NormalModes {
    /// Mode frequencies, sorted descending (index 0 is the fast mode).
    frequencies: Vec<f64>,
    /// Mode transformation `q = C y`.
    c: DMatrix<f64>,
    c_inv: DMatrix<f64>,
    abs_det_c: f64,
}

/// Oscillator quantum numbers, one per mode.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModeState(pub Vec<u32>);

impl ModeState {
    pub fn ground(dimension: usize) -> Self {
        ModeState(vec![0; dimension])
    }
}

impl From<&[u32]> for ModeState {
    fn from(v: &[u32]) -> Self {
        ModeState(v.to_vec())
    }
}

pub fn diagonalize(form: &BilinearForm) -> Result<NormalModes> {
    let n = form.dimension();
    let chol = Cholesky::new(form.a.clone())
        .ok_or_else(|| Error::Spectral("kinetic matrix A is not positive definite".into()))?;
    if Cholesky::new(form.b.clone()).is_none() {
        return Err(Error::Spectral("potential matrix B is not positive definite".into()));
    }
    let l = chol.l();
    let m = l.transpose() * &form.b * &l;
    let m = (&m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::new(m);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));

    let mut frequencies = Vec::with_capacity(n);
    let mut c = DMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        let w = eig.eigenvalues[k];
        if !(w > 0.0) {
            return Err(Error::Spectral(format!("squared frequency {w} is not positive")));
        }
        frequencies.push(w.sqrt());
        let mut v = &l * eig.eigenvectors.column(k);
        let pivot = v.iter().copied().max_by(|a, b| a.abs().total_cmp(&b.abs())).unwrap_or(1.0);
        if pivot < 0.0 {
            v.neg_mut();
        }
        c.set_column(col, &v);
    }
    let c_inv = c
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Spectral("mode matrix is singular".into()))?;
    let abs_det_c = c.determinant().abs();
    Ok(NormalModes {
        frequencies,
        c,
        c_inv,
        abs_det_c,
    })
}

impl NormalModes {
    pub fn dimension(&self) -> usize {
        self.frequencies.len()
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    /// Transformation matrix `C` with `q = C y`.
    pub fn transform(&self) -> &DMatrix<f64> {
        &self.c
    }

    pub fn inverse_transform(&self) -> &DMatrix<f64> {
        &self.c_inv
    }

    /// `diag(omega_i^2)`.
    pub fn squared_frequency_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&DVector::from_iterator(
            self.dimension(),
            self.frequencies.iter().map(|w| w * w),
        ))
    }

    fn check_state(&self, s: &ModeState) -> Result<()> {
        if s.0.len() != self.dimension() {
            return Err(Error::validation(
                "mode state",
                format!("expected {} quantum numbers, got {}", self.dimension(), s.0.len()),
            ));
        }
        Ok(())
    }

    /// `sum_i (n_i + 1/2) omega_i`.
    pub fn mode_energy(&self, s: &ModeState) -> Result<f64> {
        self.check_state(s)?;
        Ok(self
            .frequencies
            .iter()
            .zip(&s.0)
            .map(|(w, &n)| (n as f64 + 0.5) * w)
            .sum())
    }

    /// Kinetic and potential expectation values; equal halves of the energy.
    pub fn virial_split(&self, s: &ModeState) -> Result<(f64, f64)> {
        let e = self.mode_energy(s)?;
        Ok((0.5 * e, 0.5 * e))
    }

    /// Mode coordinates `y = C^-1 q`.
    pub fn mode_coordinates(&self, q: &[f64]) -> Result<Vec<f64>> {
        if q.len() != self.dimension() {
            return Err(Error::validation("coordinates", format!("expected {} values", self.dimension())));
        }
        let y = &self.c_inv * DVector::from_column_slice(q);
        Ok(y.iter().copied().collect())
    }

    /// Eigenfunction `prod_i phi_{n_i}(y_i)`, normalized over `q`.
    ///
    /// Quantum numbers above [`MAX_QUANTUM_NUMBER`] are rejected.
    pub fn eval_wavefunction(&self, s: &ModeState, q: &[f64]) -> Result<f64> {
        self.check_state(s)?;
        let y = self.mode_coordinates(q)?;
        let mut amp = 1.0 / self.abs_det_c.sqrt();
        for ((&w, &n), &yi) in self.frequencies.iter().zip(&s.0).zip(&y) {
            if n > MAX_QUANTUM_NUMBER {
                return Err(Error::Domain(format!("quantum number {n} too large")));
            }
            let scale = w.sqrt();
            amp *= scale.sqrt() * hermite_function(n, scale * yi)?;
        }
        Ok(amp)
    }

    /// Covariance of `q` in the state `s`: `C diag((n_i + 1/2)/omega_i) C^T`.
    pub fn coordinate_covariance(&self, s: &ModeState) -> Result<DMatrix<f64>> {
        self.check_state(s)?;
        let d = DVector::from_iterator(
            self.dimension(),
            self.frequencies.iter().zip(&s.0).map(|(w, &n)| (n as f64 + 0.5) / w),
        );
        Ok(&self.c * DMatrix::from_diagonal(&d) * self.c.transpose())
    }

    /// Per-axis ground-state standard deviation of the widest single mode:
    /// `max_i |C_ai| / sqrt(2 omega_i)` for each coordinate axis `a`.
    pub fn widest_mode_deviation(&self) -> Vec<f64> {
        (0..self.dimension())
            .map(|a| {
                self.frequencies
                    .iter()
                    .enumerate()
                    .map(|(i, w)| self.c[(a, i)].abs() / (2.0 * w).sqrt())
                    .fold(0.0, f64::max)
            })
            .collect()
    }
}
