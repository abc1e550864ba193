//! Normalized Gaussian packets sampled on grids.

use std::f64::consts::PI;

use crate::{Grid1D, C64};

/// Position-space Gaussian with |ψ|² of standard deviation `sigma`, centred
/// at `center` and boosted by wavenumber `k0`. Normalized on the grid.
pub fn gaussian(grid: &Grid1D, center: f64, sigma: f64, k0: f64) -> Vec<C64> {
    let v: Vec<C64> = grid
        .coordinates()
        .iter()
        .map(|&x| {
            let d = x - center;
            C64::from_polar((-d * d / (4.0 * sigma * sigma)).exp(), k0 * d)
        })
        .collect();
    normalized(v, grid.spacing())
}

/// Momentum-space Gaussian in transform order, |ψ̃|² of standard deviation
/// `sigma_k` around `k0`, with position centre `x0` encoded as a phase.
pub fn momentum_gaussian(grid: &Grid1D, k0: f64, sigma_k: f64, x0: f64) -> Vec<C64> {
    let v: Vec<C64> = grid
        .wavenumbers()
        .iter()
        .map(|&k| {
            let d = k - k0;
            C64::from_polar((-d * d / (4.0 * sigma_k * sigma_k)).exp(), -k * x0)
        })
        .collect();
    normalized(v, grid.conjugate_spacing())
}

/// Unit-normalized single-sample state (sharp on the grid).
pub fn spike(n: usize, index: usize, measure: f64) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); n];
    v[index] = C64::new(1.0 / measure.sqrt(), 0.0);
    v
}

pub fn normalized(mut v: Vec<C64>, measure: f64) -> Vec<C64> {
    let n = (v.iter().map(|a| a.norm_sqr()).sum::<f64>() * measure).sqrt();
    if n > 0.0 {
        for a in v.iter_mut() {
            *a /= n;
        }
    }
    v
}

/// Continuum normalization constant of a Gaussian amplitude, for reference.
pub fn continuum_peak(sigma: f64) -> f64 {
    (2.0 * PI * sigma * sigma).powf(-0.25)
}
