//! Identical nuclei (`m1 = m2`, `k13 = k23`): closed-form frequencies, mode
//! coordinates, exchange parity and ground-state correlation functions.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ForceConstants, ModelParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomonuclearParams {
    /// Mass of each nucleus.
    pub m1: f64,
    pub m3: f64,
    pub k12: f64,
    /// Nucleus–electron force constant (both nuclei).
    pub k13: f64,
}

impl HomonuclearParams {
    pub fn new(m1: f64, m3: f64, k12: f64, k13: f64) -> Result<Self> {
        let h = Self { m1, m3, k12, k13 };
        h.model()?;
        if !(k13 > 0.0) {
            return Err(Error::validation("force_constants.k13", "must be positive for identical nuclei"));
        }
        Ok(h)
    }

    /// Extract from general parameters; fails unless the nuclei are identical.
    pub fn from_model(p: &ModelParams) -> Result<Self> {
        if !p.is_homonuclear() {
            return Err(Error::validation(
                "params",
                "identical nuclei require m1 == m2 and k13 == k23",
            ));
        }
        Self::new(p.m1(), p.m3(), p.k12(), p.k13())
    }

    pub fn model(&self) -> Result<ModelParams> {
        ModelParams::new([self.m1, self.m1, self.m3], ForceConstants::new(self.k12, self.k13, self.k13))
    }
}

/// `(omega1, omega2)` from `omega1^2 = k13 (2 m1 + m3)/(m1 m3)` and `omega2^2 = (2 k12 + k13)/m1`.
pub fn homonuclear_frequencies(h: &HomonuclearParams) -> (f64, f64) {
    (
        (h.k13 * (2.0 * h.m1 + h.m3) / (h.m1 * h.m3)).sqrt(),
        ((2.0 * h.k12 + h.k13) / h.m1).sqrt(),
    )
}

/// Sign of the state under exchange of the nuclei: `(-1)^n2`.
pub fn parity(n2: u32) -> i32 {
    if n2 % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Mode coordinates `(y2, y3)`; `y2` is symmetric and `y3` antisymmetric under exchange.
pub fn mode_coordinates(h: &HomonuclearParams, q2: f64, q3: f64) -> (f64, f64) {
    let y2 = (2.0 * h.m1 * h.m3).sqrt() * (2.0 * q3 - q2) / (2.0 * (2.0 * h.m1 + h.m3).sqrt());
    let y3 = (2.0 * h.m1).sqrt() * q2 / 2.0;
    (y2, y3)
}

/// Action of the nuclear exchange on internal coordinates: `(q2, q3) -> (-q2, q3 - q2)`.
pub fn exchange(q2: f64, q3: f64) -> (f64, f64) {
    (-q2, q3 - q2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeparationKind {
    NucleusNucleus,
    NucleusElectron,
}

/// Normalized Gaussian density `sqrt(gamma/pi) exp(-gamma delta^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationGaussian {
    pub exponent_coefficient: f64,
    pub variable: SeparationKind,
}

impl CorrelationGaussian {
    pub fn prefactor(&self) -> f64 {
        (self.exponent_coefficient / PI).sqrt()
    }

    pub fn density(&self, delta: f64) -> f64 {
        self.prefactor() * (-self.exponent_coefficient * delta * delta).exp()
    }
}

/// Nucleus–nucleus density of the ground state; identical in the exact and BO solutions.
pub fn rho_nn(h: &HomonuclearParams) -> CorrelationGaussian {
    let (_, w2) = homonuclear_frequencies(h);
    CorrelationGaussian {
        exponent_coefficient: 0.5 * h.m1 * w2,
        variable: SeparationKind::NucleusNucleus,
    }
}

/// Exact nucleus–electron density of the ground state.
pub fn rho_ne(h: &HomonuclearParams) -> CorrelationGaussian {
    let (w1, w2) = homonuclear_frequencies(h);
    let num = 2.0 * h.m1 * h.m3 * w1 * w2;
    CorrelationGaussian {
        exponent_coefficient: num / (2.0 * h.m1 * w2 + h.m3 * (w1 + w2)),
        variable: SeparationKind::NucleusElectron,
    }
}

/// BO nucleus–electron density: `omega1 + omega2` in the denominator becomes `omega1`.
pub fn rho_ne_bo(h: &HomonuclearParams) -> CorrelationGaussian {
    let (w1, w2) = homonuclear_frequencies(h);
    let num = 2.0 * h.m1 * h.m3 * w1 * w2;
    CorrelationGaussian {
        exponent_coefficient: num / (2.0 * h.m1 * w2 + h.m3 * w1),
        variable: SeparationKind::NucleusElectron,
    }
}

/// Uniform samples `a, a + d, ..., b` with `steps` points.
pub fn linspace(a: f64, b: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..steps)
            .map(|i| a + (b - a) * i as f64 / (steps - 1) as f64)
            .collect(),
    }
}
