//! Relative proper-time rate of the measured clock seen from the frame clock.

use qrf_spacetime::{gamma_factor, metric_g00, ModelParams, Regime};

use crate::Result;

/// Rate Δ₁₂ of clock 2 per unit of frame time, for particle 2 with momentum
/// `k2` at relative position `q2`, source at `qm` with momentum `km`.
/// Arguments a regime does not use are ignored.
pub fn delta12(regime: Regime, k2: f64, q2: f64, qm: f64, km: f64, params: &ModelParams) -> Result<f64> {
    let (m1, m2, c) = (params.mass(1), params.mass(2), params.c);
    let redshift = || -> Result<f64> {
        Ok((metric_g00(q2 - qm, params)? / metric_g00(qm, params)?).sqrt())
    };
    Ok(match regime {
        Regime::Galilean => 1.0,
        Regime::SpecialRelativistic => gamma_factor(k2, m1, c) / gamma_factor(k2, m2, c),
        Regime::Newtonian => redshift()?,
        Regime::Full => redshift()? * gamma_factor(k2 + km, m1, c) / gamma_factor(k2, m2, c),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn galilean_rate_is_one() {
        let p = ModelParams::new(vec![1.0, 3.0], 0.0, 1.0, 1.0).unwrap();
        assert_eq!(delta12(Regime::Galilean, 5.0, 2.0, 0.0, 0.0, &p).unwrap(), 1.0);
    }

    #[test]
    fn equal_masses_cancel_kinematic_dilation() {
        let p = ModelParams::new(vec![2.0, 2.0], 0.0, 1.5, 1.0).unwrap();
        for k in [-3.0, 0.0, 0.7, 10.0] {
            let d = delta12(Regime::SpecialRelativistic, k, 0.0, 0.0, 0.0, &p).unwrap();
            assert!((d - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn equal_radii_cancel_redshift() {
        let p = ModelParams::new(vec![1.0, 1.0], 0.2, 1.0, 1.0).unwrap();
        let d = delta12(Regime::Newtonian, 0.0, -60.0, -30.0, 0.0, &p).unwrap();
        assert!((d - 1.0).abs() < 1e-15);
    }

    #[test]
    fn small_momentum_form() {
        let p = ModelParams::new(vec![1.0, 2.0], 0.0, 1.0, 1.0).unwrap();
        let k: f64 = 0.01;
        let d = delta12(Regime::SpecialRelativistic, k, 0.0, 0.0, 0.0, &p).unwrap();
        let approx = (1.0 + k * k - k * k / 4.0).sqrt();
        assert!((d - approx).abs() < 1e-8);
    }

    #[test]
    fn strong_field_is_an_error() {
        let p = ModelParams::new(vec![1.0, 1.0], 5.0, 1.0, 1.0).unwrap();
        assert!(delta12(Regime::Newtonian, 0.0, 0.0, -10.0, 0.0, &p).is_err());
    }
}
