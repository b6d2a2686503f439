//! Expansion of the exact squared frequencies in the electron/nucleus mass
//! ratio `lambda`, with nuclear masses `m_i = u_i / lambda`.

use crate::born_oppenheimer::BoSolution;
use crate::error::{Error, Result};
use crate::exact::{char_poly, exact_frequencies};
use crate::model::{ForceConstants, ModelParams};

/// One member of the family `m1 = u1/lambda`, `m2 = u2/lambda`, fixed `m3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassRatioFamily {
    pub k: ForceConstants,
    pub u1: f64,
    pub u2: f64,
    pub m3: f64,
}

impl MassRatioFamily {
    pub fn new(k: ForceConstants, u1: f64, u2: f64, m3: f64) -> Result<Self> {
        for (name, v) in [("u1", u1), ("u2", u2), ("m3", m3)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::validation(name, format!("must be positive, got {v}")));
            }
        }
        // Validates force constants and binding.
        ModelParams::new([u1, u2, m3], k)?;
        Ok(Self { k, u1, u2, m3 })
    }

    pub fn params(&self, lambda: f64) -> Result<ModelParams> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::validation("lambda", format!("must be positive, got {lambda}")));
        }
        ModelParams::new([self.u1 / lambda, self.u2 / lambda, self.m3], self.k)
    }

    pub fn coefficients(&self) -> ExpansionCoefficients {
        expansion_coefficients(self.k, self.u1, self.u2, self.m3)
    }
}

/// `w1 = w1_0 + w1_1 lambda + ...`, `w2 = w2_1 lambda + ...`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionCoefficients {
    pub w1_0: f64,
    pub w1_1: f64,
    pub w2_1: f64,
}

impl ExpansionCoefficients {
    /// First-order truncations `(w1, w2)` at `lambda`.
    pub fn series(&self, lambda: f64) -> (f64, f64) {
        (self.w1_0 + self.w1_1 * lambda, self.w2_1 * lambda)
    }
}

pub fn expansion_coefficients(k: ForceConstants, u1: f64, u2: f64, m3: f64) -> ExpansionCoefficients {
    let s = k.k13 + k.k23;
    ExpansionCoefficients {
        w1_0: s / m3,
        w1_1: (k.k13 * k.k13 * u2 + k.k23 * k.k23 * u1) / (u1 * u2 * s),
        w2_1: (u1 + u2) * k.binding() / (u1 * u2 * s),
    }
}

/// `w_i(exact) - w_i(first-order series)` at `lambda`.
///
/// Requires `lambda < 0.1` so that the two roots are unambiguously ordered.
pub fn series_vs_exact(family: &MassRatioFamily, lambda: f64) -> Result<(f64, f64)> {
    if !(lambda > 0.0 && lambda < 0.1) {
        return Err(Error::validation("lambda", format!("must lie in (0, 0.1), got {lambda}")));
    }
    let p = family.params(lambda)?;
    let (w1, w2) = char_poly(&p).roots()?;
    let (s1, s2) = family.coefficients().series(lambda);
    Ok((w1 - s1, w2 - s2))
}

/// One row of a mass-ratio sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub lambda: f64,
    pub w1_exact: f64,
    pub w2_exact: f64,
    pub w1_series: f64,
    pub w2_series: f64,
    pub e_exact: f64,
    pub e_bo: f64,
}

impl SweepPoint {
    pub fn abs_error(&self) -> f64 {
        (self.e_exact - self.e_bo).abs()
    }
}

/// Exact and BO ground internal energies (kappa = 0) with the squared
/// frequencies and their series at each `lambda`.
pub fn sweep(family: &MassRatioFamily, lambdas: &[f64]) -> Result<Vec<SweepPoint>> {
    let c = family.coefficients();
    lambdas
        .iter()
        .map(|&lambda| {
            let p = family.params(lambda)?;
            let (w1, w2) = exact_frequencies(&p)?;
            let bo = BoSolution::new(&p)?;
            let (w1_series, w2_series) = c.series(lambda);
            Ok(SweepPoint {
                lambda,
                w1_exact: w1 * w1,
                w2_exact: w2 * w2,
                w1_series,
                w2_series,
                e_exact: 0.5 * (w1 + w2),
                e_bo: bo.energy(0.0, 0, 0),
            })
        })
        .collect()
}

/// Least-squares slope of `log|E_exact - E_BO|` against `log lambda` for the
/// ground internal state.
///
/// Points whose error is below `100 eps` relative to the energy are dropped;
/// fewer than three surviving points is a precision error.
pub fn bo_error_scaling(family: &MassRatioFamily, lambdas: &[f64]) -> Result<f64> {
    if lambdas.len() < 3 {
        return Err(Error::validation("lambdas", "need at least three values"));
    }
    let (lo, hi) = lambdas
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &l| (lo.min(l), hi.max(l)));
    if !(lo > 0.0) || hi / lo < 100.0 {
        return Err(Error::validation("lambdas", "must be positive and span at least two decades"));
    }
    let points: Vec<(f64, f64)> = sweep(family, lambdas)?
        .into_iter()
        .filter(|p| p.abs_error() > 100.0 * f64::EPSILON * p.e_exact.abs())
        .map(|p| (p.lambda.ln(), p.abs_error().ln()))
        .collect();
    if points.len() < 3 {
        return Err(Error::Precision(format!(
            "only {} points above the round-off floor",
            points.len()
        )));
    }
    Ok(least_squares_slope(&points))
}

fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::char_poly;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn unit_family() -> MassRatioFamily {
        MassRatioFamily::new(ForceConstants::new(1.0, 1.0, 1.0), 1.0, 1.0, 1.0).unwrap()
    }

    fn asymmetric_family() -> MassRatioFamily {
        MassRatioFamily::new(ForceConstants::new(0.6, 1.4, 0.9), 1.7, 0.8, 1.0).unwrap()
    }

    #[test]
    fn unit_coefficients() {
        let c = unit_family().coefficients();
        assert_eq!((c.w1_0, c.w1_1, c.w2_1), (2.0, 1.0, 3.0));
    }

    #[test]
    fn identical_nuclei_series_truncates() {
        // m = (100, 100, 1): u = 1 at lambda = 0.01.
        let f = unit_family();
        let (w1, w2) = char_poly(&f.params(0.01).unwrap()).roots().unwrap();
        let (s1, s2) = f.coefficients().series(0.01);
        assert_relative_eq!(s1, 2.01, max_relative = 1e-15);
        assert_relative_eq!(w1, s1, max_relative = 1e-14);
        assert_relative_eq!(w2, s2, max_relative = 1e-13);
        let (r1, r2) = series_vs_exact(&f, 0.01).unwrap();
        assert!(r1.abs() < 1e-14 && r2.abs() < 1e-15);
    }

    #[test]
    fn lambda_range_is_enforced() {
        assert!(series_vs_exact(&unit_family(), 0.1).is_err());
        assert!(series_vs_exact(&unit_family(), 0.0).is_err());
        assert!(series_vs_exact(&unit_family(), 0.05).is_ok());
    }

    #[test]
    fn deterministic() {
        let f = asymmetric_family();
        assert_eq!(series_vs_exact(&f, 1e-3).unwrap(), series_vs_exact(&f, 1e-3).unwrap());
    }

    #[test]
    fn unit_family_error_slope() {
        let slope = bo_error_scaling(&unit_family(), &[1e-1, 1e-2, 1e-3, 1e-4]).unwrap();
        assert!((slope - 1.0).abs() <= 0.05, "slope {slope}");
    }

    #[test]
    fn fast_frequency_error_halves_with_lambda() {
        let f = unit_family();
        let c = f.coefficients();
        let err = |lambda: f64| {
            let p = f.params(lambda).unwrap();
            let (w1, _) = exact_frequencies(&p).unwrap();
            w1 - BoSolution::new(&p).unwrap().omega_e
        };
        let lambda = 1e-3;
        let ratio = err(lambda) / err(lambda / 2.0);
        assert!((ratio - 2.0).abs() < 0.02, "ratio {ratio}");
        assert_relative_eq!(err(lambda), c.w1_1 * lambda / (2.0 * c.w1_0.sqrt()), max_relative = 1e-3);
        // Slow mode is exact for identical nuclei.
        let p = f.params(lambda).unwrap();
        let (_, w2) = exact_frequencies(&p).unwrap();
        assert_relative_eq!(w2, BoSolution::new(&p).unwrap().omega_n, max_relative = 1e-12);
    }

    #[test]
    fn scaling_input_checks() {
        let f = unit_family();
        assert!(matches!(bo_error_scaling(&f, &[1e-1, 1e-2]), Err(Error::Validation { .. })));
        assert!(matches!(bo_error_scaling(&f, &[1e-1, 5e-2, 2e-2]), Err(Error::Validation { .. })));
    }

    #[test]
    fn round_off_floor_triggers_precision_error() {
        // Identical nuclei: |E_exact - E_BO| ~ lambda / 4, below the floor at tiny lambda.
        let f = unit_family();
        let r = bo_error_scaling(&f, &[1e-15, 1e-16, 1e-17, 1e-18]);
        assert!(matches!(r, Err(Error::Precision(_))), "{r:?}");
    }

    /// Numerical derivative of the exact roots at lambda = 0 by Richardson
    /// extrapolation of forward differences: an independent route to the
    /// first-order coefficients.
    fn richardson_first_order(f: &MassRatioFamily) -> (f64, f64) {
        let roots = |l: f64| char_poly(&f.params(l).unwrap()).roots().unwrap();
        let c0 = f.coefficients().w1_0;
        let h = 1e-3;
        let d = |l: f64| {
            let (w1, w2) = roots(l);
            ((w1 - c0) / l, w2 / l)
        };
        // Each difference quotient has error a l + b l^2 + ...; eliminate two orders.
        let (a1, a2) = d(h);
        let (b1, b2) = d(h / 2.0);
        let (c1, c2) = d(h / 4.0);
        let r = |x: f64, y: f64, z: f64| {
            let y1 = 2.0 * y - x;
            let z1 = 2.0 * z - y;
            (4.0 * z1 - y1) / 3.0
        };
        (r(a1, b1, c1), r(a2, b2, c2))
    }

    #[test]
    fn coefficients_match_richardson_extrapolation() {
        for f in [unit_family(), asymmetric_family()] {
            let (d1, d2) = richardson_first_order(&f);
            let c = f.coefficients();
            assert_relative_eq!(d1, c.w1_1, max_relative = 1e-7);
            assert_relative_eq!(d2, c.w2_1, max_relative = 1e-7);
        }
    }

    #[test]
    fn residuals_are_second_order() {
        let f = asymmetric_family();
        let scaled: Vec<(f64, f64)> = [4e-3, 2e-3, 1e-3, 5e-4]
            .iter()
            .map(|&l| {
                let (r1, r2) = series_vs_exact(&f, l).unwrap();
                (r1 / (l * l), r2 / (l * l))
            })
            .collect();
        // Successive differences shrink geometrically (ratio ~ 2 for a linear
        // correction), so residual / lambda^2 tends to a constant.
        for w in scaled.windows(3) {
            let d1 = (w[1].0 - w[0].0, w[1].1 - w[0].1);
            let d2 = (w[2].0 - w[1].0, w[2].1 - w[1].1);
            assert!((d1.0 / d2.0 - 2.0).abs() < 0.05, "{d1:?} {d2:?}");
            assert!((d1.1 / d2.1 - 2.0).abs() < 0.05, "{d1:?} {d2:?}");
        }
        let (a, b) = (scaled[3].0, scaled[2].0);
        assert!(a.abs() > 1e-3 && ((a - b) / a).abs() < 0.01);
    }

    fn draws() -> impl Strategy<Value = ModelParams> {
        (0.5f64..1e4, 0.5f64..1e4, 0.1f64..5.0, 0.0f64..5.0, 0.01f64..5.0, 0.01f64..5.0)
            .prop_map(|(m1, m2, m3, k12, k13, k23)| ModelParams::from_values(m1, m2, m3, k12, k13, k23).unwrap())
    }

    proptest! {
        #[test]
        fn leading_orders_are_the_bo_frequencies(p in draws(), lambda in 1e-4f64..1.0) {
            let bo = BoSolution::new(&p).unwrap();
            let c = expansion_coefficients(p.force_constants(), lambda * p.m1(), lambda * p.m2(), p.m3());
            prop_assert!((bo.omega_e.powi(2) - c.w1_0).abs() <= 1e-12 * c.w1_0);
            let w2 = c.w2_1 * lambda;
            prop_assert!((bo.omega_n.powi(2) - w2).abs() <= 1e-12 * w2);
        }

        #[test]
        fn center_of_mass_part_of_error(p in draws(), kappa in 0.1f64..10.0) {
            let mn = p.m1() + p.m2();
            let mt = p.total_mass();
            let diff = kappa * kappa * (1.0 / (2.0 * mn) - 1.0 / (2.0 * mt));
            let cm = kappa * kappa / (2.0 * mt);
            prop_assert!(diff > 0.0);
            // Relative size m3 / m_N, i.e. first order in the mass ratio.
            prop_assert!((diff / cm - p.m3() / mn).abs() <= 1e-12 * (1.0 + p.m3() / mn));
        }
    }
}
