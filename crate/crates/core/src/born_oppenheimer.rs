//! Clamped-nuclei treatment: electronic surfaces, the nuclear potential and
//! the resulting approximate spectrum and wavefunctions.
//!
//! Particles 1 and 2 are the nuclei, particle 3 the electron.

use crate::error::{Error, Result};
use crate::hermite::{oscillator_function, GaussHermite, OVERLAP_ORDER};
use crate::model::ModelParams;

/// Frequencies and masses of the clamped-nuclei solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoSolution {
    /// Electronic frequency `sqrt((k13 + k23)/m3)`.
    pub omega_e: f64,
    /// Frequency of the relative nuclear motion.
    pub omega_n: f64,
    /// Nuclear center-of-mass mass `m1 + m2`.
    pub nuclear_mass: f64,
    /// Nuclear reduced mass `m1 m2 / (m1 + m2)`.
    pub reduced_mass: f64,
    /// `(k13, k23) / (k13 + k23)`: weights of the nuclear positions in the
    /// center of the electronic oscillator.
    pub electron_center_weights: (f64, f64),
}

fn electronic_stiffness(p: &ModelParams) -> Result<f64> {
    let s = p.k13() + p.k23();
    if !(s > 0.0) {
        return Err(Error::validation("force_constants", "k13 + k23 must be positive for a bound electron"));
    }
    Ok(s)
}

impl BoSolution {
    pub fn new(p: &ModelParams) -> Result<Self> {
        let s = electronic_stiffness(p)?;
        let nuclear_mass = p.m1() + p.m2();
        let reduced_mass = p.m1() * p.m2() / nuclear_mass;
        Ok(Self {
            omega_e: (s / p.m3()).sqrt(),
            omega_n: (p.force_constants().binding() / (s * reduced_mass)).sqrt(),
            nuclear_mass,
            reduced_mass,
            electron_center_weights: (p.k13() / s, p.k23() / s),
        })
    }

    /// `kappa^2/(2 m_N) + omega_e (n1 + 1/2) + omega_N (n2 + 1/2)`.
    pub fn energy(&self, kappa: f64, n1: u32, n2: u32) -> f64 {
        kappa * kappa / (2.0 * self.nuclear_mass)
            + self.omega_e * (n1 as f64 + 0.5)
            + self.omega_n * (n2 as f64 + 0.5)
    }

    /// Electronic coordinate relative to its clamped-nuclei center, in
    /// internal coordinates: `q3 - w2 q2`.
    pub fn electronic_coordinate(&self, q2: f64, q3: f64) -> f64 {
        q3 - self.electron_center_weights.1 * q2
    }
}

/// Electronic energy for nuclei clamped at `x1`, `x2`.
pub fn electronic_energy(p: &ModelParams, n1: u32, x1: f64, x2: f64) -> Result<f64> {
    let s = electronic_stiffness(p)?;
    let (k13, k23) = (p.k13(), p.k23());
    let omega_e = (s / p.m3()).sqrt();
    let weighted = k13 * x1 + k23 * x2;
    Ok(omega_e * (n1 as f64 + 0.5) - weighted * weighted / (2.0 * s) + 0.5 * (k13 * x1 * x1 + k23 * x2 * x2))
}

/// Potential for the relative nuclear motion on surface `n1`, as a function of `q2 = x2 - x1`.
pub fn nuclear_potential(p: &ModelParams, n1: u32, q2: f64) -> Result<f64> {
    let s = electronic_stiffness(p)?;
    let omega_e = (s / p.m3()).sqrt();
    Ok(omega_e * (n1 as f64 + 0.5) + p.force_constants().binding() / (2.0 * s) * q2 * q2)
}

pub fn bo_energy(p: &ModelParams, kappa: f64, n1: u32, n2: u32) -> Result<f64> {
    Ok(BoSolution::new(p)?.energy(kappa, n1, n2))
}

/// Product of the electronic and nuclear oscillator functions, normalized over `(q2, q3)`.
///
/// The map `(q2, q3) -> (q2, q3 - w q2)` has unit Jacobian, so the product of
/// the one-dimensional normalizations is the two-dimensional one.
pub fn bo_internal_wavefunction(p: &ModelParams, n1: u32, n2: u32, q2: f64, q3: f64) -> Result<f64> {
    let bo = BoSolution::new(p)?;
    let e = bo.electronic_coordinate(q2, q3);
    Ok(oscillator_function(n1, p.m3(), bo.omega_e, e)? * oscillator_function(n2, bo.reduced_mass, bo.omega_n, q2)?)
}

/// Overlap of the nuclear factors of BO states on surfaces `n1` and `n1'`.
///
/// Each surface's nuclear factor is the oscillator function of that
/// surface's curvature; the integral is evaluated by Gauss–Hermite quadrature.
pub fn franck_condon_overlap(p: &ModelParams, n1: u32, n1_prime: u32, n2: u32, n2_prime: u32) -> Result<f64> {
    let bo = BoSolution::new(p)?;
    let omega_a = surface_frequency(p, n1, bo.reduced_mass)?;
    let omega_b = surface_frequency(p, n1_prime, bo.reduced_mass)?;
    let gh = GaussHermite::new(OVERLAP_ORDER);
    let width = 1.0 / (bo.reduced_mass * (omega_a + omega_b)).sqrt();
    let mut failure = None;
    let v = gh.integrate_scaled(0.0, width, |x| {
        match (
            oscillator_function(n2, bo.reduced_mass, omega_a, x),
            oscillator_function(n2_prime, bo.reduced_mass, omega_b, x),
        ) {
            (Ok(a), Ok(b)) => a * b,
            (Err(e), _) | (_, Err(e)) => {
                failure.get_or_insert(e);
                0.0
            }
        }
    });
    failure.map_or(Ok(v), Err)
}

/// Nuclear frequency on surface `n1` from the quadratic coefficient of
/// [`nuclear_potential`].
fn surface_frequency(p: &ModelParams, n1: u32, reduced_mass: f64) -> Result<f64> {
    let curvature = 2.0 * (nuclear_potential(p, n1, 1.0)? - nuclear_potential(p, n1, 0.0)?);
    Ok((curvature / reduced_mass).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::exact_frequencies;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn heavy() -> ModelParams {
        ModelParams::from_values(100.0, 100.0, 1.0, 1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn electronic_energy_examples() {
        let p = ModelParams::symmetric();
        let we = 2f64.sqrt();
        assert_relative_eq!(electronic_energy(&p, 0, 0.0, 0.0).unwrap(), we / 2.0, max_relative = 1e-15);
        assert_relative_eq!(electronic_energy(&p, 2, 1.0, -1.0).unwrap(), we * 2.5 + 1.0, max_relative = 1e-15);
    }

    fn golden_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
        let g = (5f64.sqrt() - 1.0) / 2.0;
        for _ in 0..200 {
            let c = b - g * (b - a);
            let d = a + g * (b - a);
            if f(c) < f(d) {
                b = d;
            } else {
                a = c;
            }
        }
        f(0.5 * (a + b))
    }

    #[test]
    fn electronic_energy_is_minimum_of_clamped_potential() {
        let p = ModelParams::from_values(3.0, 2.0, 0.5, 0.7, 1.3, 2.1).unwrap();
        let we = ((p.k13() + p.k23()) / p.m3()).sqrt();
        for &(x1, x2) in &[(0.3, -1.1), (-2.0, 0.4), (1.5, 1.7)] {
            let clamped = |x3: f64| 0.5 * (p.k13() * (x1 - x3).powi(2) + p.k23() * (x2 - x3).powi(2));
            let vmin = golden_min(clamped, -10.0, 10.0);
            for n1 in 0..3 {
                let e = electronic_energy(&p, n1, x1, x2).unwrap();
                assert_relative_eq!(e, we * (n1 as f64 + 0.5) + vmin, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn nuclear_potential_examples() {
        let p = ModelParams::from_values(3.0, 2.0, 0.5, 0.7, 1.3, 2.1).unwrap();
        let we = ((p.k13() + p.k23()) / p.m3()).sqrt();
        assert_relative_eq!(nuclear_potential(&p, 1, 0.0).unwrap(), 1.5 * we, max_relative = 1e-15);
        for &(x1, x2) in &[(0.3, -1.1), (-2.0, 0.4), (1.5, 1.7)] {
            let lhs = electronic_energy(&p, 1, x1, x2).unwrap() + 0.5 * p.k12() * (x1 - x2).powi(2);
            assert_relative_eq!(lhs, nuclear_potential(&p, 1, x2 - x1).unwrap(), max_relative = 1e-13);
        }
        let h = 1e-3;
        let second = (nuclear_potential(&p, 0, h).unwrap() - 2.0 * nuclear_potential(&p, 0, 0.0).unwrap()
            + nuclear_potential(&p, 0, -h).unwrap())
            / (h * h);
        let binding = p.force_constants().binding();
        assert_relative_eq!(second, 2.0 * binding / (2.0 * (p.k13() + p.k23())), max_relative = 1e-6);
    }

    #[test]
    fn bo_energy_examples() {
        let s = ModelParams::symmetric();
        let e = bo_energy(&s, 0.0, 0, 0).unwrap();
        assert_relative_eq!(e, (2f64.sqrt() + 3f64.sqrt()) / 2.0, max_relative = 1e-15);
        assert_relative_eq!(e, 1.5731322, epsilon = 1e-7);
        let e = bo_energy(&heavy(), 0.0, 0, 0).unwrap();
        assert_relative_eq!(e, (2f64.sqrt() + 0.03f64.sqrt()) / 2.0, max_relative = 1e-14);
        assert_relative_eq!(e, 0.7937093, epsilon = 1e-7);
        let d = bo_energy(&heavy(), 2.0, 1, 1).unwrap() - bo_energy(&heavy(), 0.0, 1, 1).unwrap();
        assert_relative_eq!(d, 4.0 / 400.0, max_relative = 1e-12);
    }

    #[test]
    fn solution_fields() {
        let bo = BoSolution::new(&heavy()).unwrap();
        assert_eq!(bo.nuclear_mass, 200.0);
        assert_eq!(bo.reduced_mass, 50.0);
        assert_eq!(bo.electron_center_weights, (0.5, 0.5));
        let (_, w2) = exact_frequencies(&heavy()).unwrap();
        assert_relative_eq!(bo.omega_n, w2, max_relative = 1e-12);
    }

    #[test]
    fn wavefunction_peak_and_normalization() {
        let p = ModelParams::from_values(30.0, 20.0, 1.0, 0.5, 1.0, 2.0).unwrap();
        let bo = BoSolution::new(&p).unwrap();
        let peak = bo_internal_wavefunction(&p, 0, 0, 0.0, 0.0).unwrap();
        assert!(bo_internal_wavefunction(&p, 0, 0, 0.05, 0.0).unwrap() < peak);
        assert!(bo_internal_wavefunction(&p, 0, 0, 0.0, 0.05).unwrap() < peak);

        let gh = GaussHermite::new(OVERLAP_ORDER);
        let wn = 1.0 / (2.0 * bo.reduced_mass * bo.omega_n).sqrt();
        let we = 1.0 / (2.0 * p.m3() * bo.omega_e).sqrt();
        for (n1, n2) in [(0, 0), (1, 2)] {
            // Integrate over q2 and the sheared coordinate q3 - w q2.
            let norm = gh.integrate_scaled(0.0, wn, |q2| {
                gh.integrate_scaled(0.0, we, |e| {
                    let q3 = e + bo.electron_center_weights.1 * q2;
                    bo_internal_wavefunction(&p, n1, n2, q2, q3).unwrap().powi(2)
                })
            });
            assert_relative_eq!(norm, 1.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn franck_condon_examples() {
        let p = ModelParams::from_values(5.0, 3.0, 1.0, 0.4, 1.2, 0.8).unwrap();
        assert!((franck_condon_overlap(&p, 0, 0, 0, 0).unwrap() - 1.0).abs() < 1e-12);
        assert!(franck_condon_overlap(&p, 0, 0, 0, 1).unwrap().abs() < 1e-12);
        assert!((franck_condon_overlap(&p, 0, 3, 2, 2).unwrap() - 1.0).abs() < 1e-12);
    }

    fn params() -> impl Strategy<Value = ModelParams> {
        (0.05f64..50.0, 0.05f64..50.0, 0.05f64..50.0, 0.0f64..5.0, 0.01f64..5.0, 0.01f64..5.0)
            .prop_map(|(m1, m2, m3, k12, k13, k23)| ModelParams::from_values(m1, m2, m3, k12, k13, k23).unwrap())
    }

    proptest! {
        #[test]
        fn nuclear_potential_is_translation_invariant(p in params(), x1 in -3.0f64..3.0, x2 in -3.0f64..3.0, a in -5.0f64..5.0) {
            let u = |x1: f64, x2: f64| electronic_energy(&p, 1, x1, x2).unwrap() + 0.5 * p.k12() * (x1 - x2).powi(2);
            let scale = 1.0 + u(x1, x2).abs() + (p.k13() + p.k23() + p.k12()) * (a * a + x1 * x1 + x2 * x2);
            prop_assert!((u(x1 + a, x2 + a) - u(x1, x2)).abs() < 1e-12 * scale);
        }

        #[test]
        fn electronic_surface_depends_on_nuclear_separation_only(p in params(), x1 in -3.0f64..3.0, x2 in -3.0f64..3.0, a in -5.0f64..5.0) {
            // The two quadratic terms combine to k13 k23 (x1 - x2)^2 / (2 (k13 + k23)).
            let e = electronic_energy(&p, 0, x1, x2).unwrap();
            let s = p.k13() + p.k23();
            let expected = (s / p.m3()).sqrt() * 0.5 + p.k13() * p.k23() * (x1 - x2).powi(2) / (2.0 * s);
            let scale = 1.0 + e.abs() + s * (x1 * x1 + x2 * x2 + a * a);
            prop_assert!((e - expected).abs() < 1e-12 * scale);
            prop_assert!((electronic_energy(&p, 0, x1 + a, x2 + a).unwrap() - e).abs() < 1e-12 * scale);
        }

        #[test]
        fn fast_frequency_is_underestimated(p in params()) {
            let bo = BoSolution::new(&p).unwrap();
            let (w1, _) = exact_frequencies(&p).unwrap();
            prop_assert!(bo.omega_e <= w1 * (1.0 + 1e-14));
        }

        #[test]
        fn homonuclear_nuclear_frequency_is_exact(m1 in 0.1f64..1e4, m3 in 0.01f64..10.0, k12 in 0.0f64..5.0, k13 in 0.01f64..5.0) {
            let p = ModelParams::from_values(m1, m1, m3, k12, k13, k13).unwrap();
            let bo = BoSolution::new(&p).unwrap();
            let (_, w2) = exact_frequencies(&p).unwrap();
            prop_assert!((bo.omega_n - w2).abs() <= 1e-12 * w2);
        }

        #[test]
        fn electronic_coordinate_is_translation_invariant(p in params(), x in prop::array::uniform3(-3.0f64..3.0), a in -5.0f64..5.0) {
            let bo = BoSolution::new(&p).unwrap();
            let e = |x: [f64; 3]| bo.electronic_coordinate(x[1] - x[0], x[2] - x[0]);
            let direct = x[2] - (p.k13() * x[0] + p.k23() * x[1]) / (p.k13() + p.k23());
            prop_assert!((e(x) - direct).abs() < 1e-12 * (1.0 + direct.abs() + x[0].abs()));
            prop_assert!((e([x[0] + a, x[1] + a, x[2] + a]) - e(x)).abs() < 1e-12 * (1.0 + a.abs()) * 4.0);
        }
    }
}
