//! Closed-form exact spectrum from the characteristic polynomial of `A B`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::ModelParams;

/// `w^2 - trace_coefficient w + constant_coefficient`, with `w = omega^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharPoly {
    pub trace_coefficient: f64,
    pub constant_coefficient: f64,
}

impl CharPoly {
    pub fn discriminant(&self) -> f64 {
        self.trace_coefficient * self.trace_coefficient - 4.0 * self.constant_coefficient
    }

    /// Roots `(w1, w2)` with `w1 >= w2`.
    ///
    /// The larger root is formed without cancellation and the smaller one from
    /// the product of the roots. A discriminant that is negative only at the
    /// level of round-off is treated as zero.
    pub fn roots(&self) -> Result<(f64, f64)> {
        let t = self.trace_coefficient;
        let c = self.constant_coefficient;
        let mut disc = self.discriminant();
        if disc < 0.0 {
            if disc >= -8.0 * f64::EPSILON * t * t {
                disc = 0.0;
            } else {
                return Err(Error::Spectral(format!("characteristic polynomial has complex roots (discriminant {disc:e})")));
            }
        }
        let w1 = 0.5 * (t + disc.sqrt());
        let w2 = c / w1;
        if !(w2 > 0.0) {
            return Err(Error::Spectral(format!("squared frequency {w2} is not positive")));
        }
        Ok((w1, w2))
    }
}

pub fn char_poly(p: &ModelParams) -> CharPoly {
    let [m1, m2, m3] = p.masses();
    let (k12, k13, k23) = (p.k12(), p.k13(), p.k23());
    let denom = m1 * m2 * m3;
    CharPoly {
        trace_coefficient: (k12 * m3 * (m1 + m2) + k13 * m2 * (m1 + m3) + k23 * m1 * (m2 + m3)) / denom,
        constant_coefficient: p.total_mass() * p.force_constants().binding() / denom,
    }
}

/// Exact normal-mode frequencies `(omega1, omega2)`, `omega1 >= omega2`.
pub fn exact_frequencies(p: &ModelParams) -> Result<(f64, f64)> {
    let (w1, w2) = char_poly(p).roots()?;
    Ok((w1.sqrt(), w2.sqrt()))
}

/// `omega1 (n1 + 1/2) + omega2 (n2 + 1/2)`.
pub fn internal_energy(p: &ModelParams, n1: u32, n2: u32) -> Result<f64> {
    let (w1, w2) = exact_frequencies(p)?;
    Ok(level_energy(w1, w2, n1, n2))
}

pub(crate) fn level_energy(omega1: f64, omega2: f64, n1: u32, n2: u32) -> f64 {
    omega1 * (n1 as f64 + 0.5) + omega2 * (n2 as f64 + 0.5)
}

/// Center-of-mass kinetic energy plus internal energy.
pub fn total_energy(p: &ModelParams, kappa: f64, n1: u32, n2: u32) -> Result<f64> {
    Ok(kappa * kappa / (2.0 * p.total_mass()) + internal_energy(p, n1, n2)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExactLevel {
    pub n1: u32,
    pub n2: u32,
    pub kappa: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub epsilon: f64,
    #[serde(rename = "E_total")]
    pub e_total: f64,
}

/// Levels with `n1, n2 <= nmax`, sorted by energy.
///
/// Coincident energies (to 1e-12 relative, which happens only when
/// `omega1 == omega2`) are listed once, under the label with the larger `n1`.
pub fn level_table(p: &ModelParams, kappa: f64, nmax: u32) -> Result<Vec<ExactLevel>> {
    let (w1, w2) = exact_frequencies(p)?;
    let cm = kappa * kappa / (2.0 * p.total_mass());
    let mut levels: Vec<ExactLevel> = (0..=nmax)
        .flat_map(|n1| (0..=nmax).map(move |n2| (n1, n2)))
        .map(|(n1, n2)| {
            let epsilon = level_energy(w1, w2, n1, n2);
            ExactLevel {
                n1,
                n2,
                kappa,
                omega1: w1,
                omega2: w2,
                epsilon,
                e_total: cm + epsilon,
            }
        })
        .collect();
    levels.sort_by(|a, b| a.epsilon.total_cmp(&b.epsilon));
    order_ties(&mut levels, |l| (l.epsilon, l.n1));
    levels.dedup_by(|b, a| coincident(a.epsilon, b.epsilon));
    Ok(levels)
}

/// The `count` lowest internal levels `(n1, n2, epsilon)` in ascending order,
/// with degenerate labels kept.
pub fn lowest_levels(p: &ModelParams, count: usize) -> Result<Vec<(u32, u32, f64)>> {
    let (w1, w2) = exact_frequencies(p)?;
    let mut out = Vec::new();
    // Enough labels that the count lowest are all present.
    let span = count as u32 + 1;
    for n1 in 0..span {
        for n2 in 0..span {
            out.push((n1, n2, level_energy(w1, w2, n1, n2)));
        }
    }
    out.sort_by(|a, b| a.2.total_cmp(&b.2));
    order_ties(&mut out, |l| (l.2, l.0));
    out.truncate(count);
    Ok(out)
}

fn coincident(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

/// Within runs of coincident energies, put larger `n1` first.
fn order_ties<T>(levels: &mut [T], key: impl Fn(&T) -> (f64, u32)) {
    let mut start = 0;
    while start < levels.len() {
        let mut end = start + 1;
        while end < levels.len() && coincident(key(&levels[end - 1]).0, key(&levels[end]).0) {
            end += 1;
        }
        levels[start..end].sort_by(|a, b| key(b).1.cmp(&key(a).1));
        start = end;
    }
}
