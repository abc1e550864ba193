use std::f64::consts::PI;

use crate::{NumericsError, Result};

/// Uniform periodic grid with `n_points` samples starting at `offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    n_points: usize,
    spacing: f64,
    offset: f64,
    conjugate_spacing: f64,
}

/// Builds a grid of `n` points covering `length`, first point at `offset`.
pub fn make_uniform_grid(n: usize, length: f64, offset: f64) -> Result<Grid1D> {
    Grid1D::new(n, length, offset)
}

impl Grid1D {
    pub fn new(n: usize, length: f64, offset: f64) -> Result<Self> {
        if n == 0 || !n.is_power_of_two() {
            return Err(NumericsError::Config(format!(
                "grid size {n} is not a power of two"
            )));
        }
        if !(length > 0.0) || !length.is_finite() {
            return Err(NumericsError::Config(format!(
                "grid length must be positive, got {length}"
            )));
        }
        if !offset.is_finite() {
            return Err(NumericsError::Config("grid offset is not finite".into()));
        }
        let spacing = length / n as f64;
        Ok(Self {
            n_points: n,
            spacing,
            offset,
            conjugate_spacing: 2.0 * PI / length,
        })
    }

    /// Grid with spacing `spacing` instead of total length.
    pub fn with_spacing(n: usize, spacing: f64, offset: f64) -> Result<Self> {
        Self::new(n, spacing * n as f64, offset)
    }

    /// Grid of `n` points centred on `center`.
    pub fn centered(n: usize, length: f64, center: f64) -> Result<Self> {
        Self::new(n, length, center - 0.5 * length)
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn conjugate_spacing(&self) -> f64 {
        self.conjugate_spacing
    }

    pub fn length(&self) -> f64 {
        self.spacing * self.n_points as f64
    }

    /// Coordinate of the last sample.
    pub fn last(&self) -> f64 {
        self.coordinate(self.n_points - 1)
    }

    pub fn coordinate(&self, i: usize) -> f64 {
        self.offset + i as f64 * self.spacing
    }

    pub fn coordinates(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.coordinate(i)).collect()
    }

    /// Conjugate variable of index `j` in transform order: non-negative
    /// values first, then the negative half.
    pub fn wavenumber(&self, j: usize) -> f64 {
        let n = self.n_points as i64;
        let j = j as i64;
        let signed = if j < n / 2 { j } else { j - n };
        signed as f64 * self.conjugate_spacing
    }

    pub fn wavenumbers(&self) -> Vec<f64> {
        (0..self.n_points).map(|j| self.wavenumber(j)).collect()
    }

    /// Index of the wavenumber sample nearest to `k`.
    pub fn wavenumber_index(&self, k: f64) -> usize {
        let n = self.n_points as i64;
        let s = (k / self.conjugate_spacing).round() as i64;
        s.rem_euclid(n) as usize
    }

    /// Nearest sample index, or `None` if `x` lies outside the sampled range
    /// by more than half a spacing.
    pub fn nearest_index(&self, x: f64) -> Option<usize> {
        let f = (x - self.offset) / self.spacing;
        let i = f.round();
        if i < 0.0 || i > (self.n_points - 1) as f64 {
            None
        } else {
            Some(i as usize)
        }
    }
}
