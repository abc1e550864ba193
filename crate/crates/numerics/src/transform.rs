use std::f64::consts::PI;
use std::sync::Arc;

use ndarray::{ArrayD, Axis as NdAxis};
use rustfft::{Fft, FftPlanner};

use crate::{Basis, Grid1D, Result, WaveFunction, C64};

/// Unitary transform between the position samples of one grid and its
/// conjugate samples:
///   psĩ(k_j) = dx/√(2π) · Σ_n e^{-i k_j x_n} ψ(x_n).
pub(crate) struct AxisTransform {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    // e^{-i k_j x_0}, pulled out of the sum so the FFT sees x_0 = 0.
    origin_phase: Vec<C64>,
    to_momentum_scale: f64,
    to_position_scale: f64,
}

impl AxisTransform {
    pub(crate) fn new(grid: &Grid1D) -> Self {
        let n = grid.n_points();
        let mut planner = FftPlanner::new();
        let x0 = grid.offset();
        Self {
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
            origin_phase: grid
                .wavenumbers()
                .iter()
                .map(|k| C64::from_polar(1.0, -k * x0))
                .collect(),
            to_momentum_scale: grid.spacing() / (2.0 * PI).sqrt(),
            to_position_scale: grid.conjugate_spacing() / (2.0 * PI).sqrt(),
        }
    }

    /// Transforms every lane along `axis` out of basis `from`.
    pub(crate) fn apply(&self, amps: &mut ArrayD<C64>, axis: usize, from: Basis) {
        let n = self.origin_phase.len();
        let mut buf = vec![C64::new(0.0, 0.0); n];
        let mut scratch = vec![
            C64::new(0.0, 0.0);
            self.forward
                .get_inplace_scratch_len()
                .max(self.inverse.get_inplace_scratch_len())
        ];
        for mut lane in amps.lanes_mut(NdAxis(axis)) {
            for (b, a) in buf.iter_mut().zip(lane.iter()) {
                *b = *a;
            }
            match from {
                Basis::Position => {
                    self.forward.process_with_scratch(&mut buf, &mut scratch);
                    for (b, p) in buf.iter_mut().zip(&self.origin_phase) {
                        *b *= p * self.to_momentum_scale;
                    }
                }
                Basis::Momentum => {
                    for (b, p) in buf.iter_mut().zip(&self.origin_phase) {
                        *b *= p.conj();
                    }
                    self.inverse.process_with_scratch(&mut buf, &mut scratch);
                    for b in buf.iter_mut() {
                        *b *= self.to_position_scale;
                    }
                }
            }
            for (a, b) in lane.iter_mut().zip(&buf) {
                *a = *b;
            }
        }
    }
}

/// Switches `axis` to its other representation.
pub fn to_conjugate_basis(psi: &WaveFunction, axis: &str) -> Result<WaveFunction> {
    let target = psi.basis(axis)?.toggled();
    psi.clone().to_basis(axis, target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::packets::gaussian;
    use crate::Axis;

    fn second_moment(samples: &[f64], density: &[f64], w: f64) -> f64 {
        let mean: f64 = samples.iter().zip(density).map(|(x, p)| x * p * w).sum();
        samples
            .iter()
            .zip(density)
            .map(|(x, p)| (x - mean).powi(2) * p * w)
            .sum()
    }

    #[test]
    fn gaussian_width_maps_to_inverse_width() {
        let sigma = 0.7;
        let grid = Grid1D::centered(256, 16.0 * sigma, 0.0).unwrap();
        let ax = Axis::new("x", grid, Basis::Position);
        let psi = WaveFunction::product(vec![(ax, gaussian(&grid, 0.0, sigma, 0.0))]).unwrap();
        let var_x = second_moment(&grid.coordinates(), &psi.marginal("x").unwrap(), grid.spacing());
        let phi = to_conjugate_basis(&psi, "x").unwrap();
        let var_k = second_moment(
            &grid.wavenumbers(),
            &phi.marginal("x").unwrap(),
            grid.conjugate_spacing(),
        );
        // |ψ|² has standard deviation σ, |ψ̃|² has 1/(2σ).
        assert!((var_x.sqrt() / sigma - 1.0).abs() < 1e-6);
        assert!((var_k.sqrt() * 2.0 * sigma - 1.0).abs() < 1e-6);
    }

    #[test]
    fn double_application_is_identity() {
        let grid = Grid1D::new(64, 10.0, -3.3).unwrap();
        let ax = Axis::new("x", grid, Basis::Position);
        let psi = WaveFunction::from_fn(vec![ax], |x| {
            C64::new((x[0] * 1.3).sin(), (x[0] * 0.2).cos() * x[0])
        })
        .unwrap();
        let back = to_conjugate_basis(&to_conjugate_basis(&psi, "x").unwrap(), "x").unwrap();
        assert_eq!(back.basis("x").unwrap(), Basis::Position);
        assert!(back.max_abs_diff(&psi).unwrap() < 1e-12);
    }

    #[test]
    fn spike_has_flat_spectrum() {
        let grid = Grid1D::new(128, 12.0, -6.0).unwrap();
        let ax = Axis::new("x", grid, Basis::Position);
        let mut psi = WaveFunction::zeros(vec![ax]).unwrap();
        psi.amplitudes_mut()[[37].as_slice()] = C64::new(1.0, 0.0);
        let phi = to_conjugate_basis(&psi, "x").unwrap();
        let mods: Vec<f64> = phi.flat().iter().map(|a| a.norm()).collect();
        let mean = mods.iter().sum::<f64>() / mods.len() as f64;
        let var = mods.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / mods.len() as f64;
        assert!(var < 1e-12);
        assert!((phi.norm_sqr() - psi.norm_sqr()).abs() < 1e-12);
    }
}
