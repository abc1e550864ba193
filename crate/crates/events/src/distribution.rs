//! Probability, as a function of frame time, that the event has happened.

use std::io::Write;

use qrf_engine::HistoryState;
use qrf_numerics::{Basis, Grid1D, C64};

use crate::spec::{Readout, POINTER};
use crate::{EventError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct EventTimeDistribution {
    pub tau1_grid: Grid1D,
    /// Probability that the event has occurred by each reading.
    pub occurrence: Vec<f64>,
    /// Discrete derivative of `occurrence`.
    pub density: Vec<f64>,
}

/// Fired-pointer probability of each snapshot.
pub fn event_time_distribution(history: &HistoryState, readout: Readout) -> Result<EventTimeDistribution> {
    if readout == Readout::Phase {
        return Err(EventError::NoPointer);
    }
    let mut occurrence = Vec::with_capacity(history.len());
    for s in &history.snapshots {
        if s.axis(POINTER).is_err() {
            return Err(EventError::NoPointer);
        }
        let s = s.clone().to_basis(POINTER, Basis::Position)?;
        let m = s.marginal(POINTER)?;
        occurrence.push(m[1] * s.axis(POINTER)?.grid.spacing());
    }
    Ok(EventTimeDistribution::from_occurrence(history.tau_grid, occurrence))
}

/// Occurrence from the overlap with a kick-free history: for a pure phase
/// e^{-iθ} on the fired part, ⟨ref|ψ⟩ = 1 − p + p·e^{-iθ}.
pub fn interferometric_occurrence(
    history: &HistoryState,
    reference: &HistoryState,
    kick_phase: f64,
) -> Result<EventTimeDistribution> {
    let denom = C64::new(1.0, 0.0) - C64::from_polar(1.0, -kick_phase);
    if denom.norm() < 1e-12 {
        return Err(EventError::Config(format!(
            "kick phase {kick_phase} is a multiple of 2π and cannot be read out"
        )));
    }
    let mut occurrence = Vec::with_capacity(history.len());
    for (a, b) in history.snapshots.iter().zip(&reference.snapshots) {
        let b = b.clone().with_bases_of(a.axes())?;
        let overlap = b.inner(a)?;
        occurrence.push(((C64::new(1.0, 0.0) - overlap) / denom).re);
    }
    Ok(EventTimeDistribution::from_occurrence(history.tau_grid, occurrence))
}

impl EventTimeDistribution {
    pub fn from_occurrence(tau1_grid: Grid1D, occurrence: Vec<f64>) -> Self {
        let n = occurrence.len();
        let h = tau1_grid.spacing();
        let density = (0..n)
            .map(|j| match (j, n) {
                (_, 1) => 0.0,
                (0, _) => (occurrence[1] - occurrence[0]) / h,
                (j, n) if j == n - 1 => (occurrence[j] - occurrence[j - 1]) / h,
                (j, _) => (occurrence[j + 1] - occurrence[j - 1]) / (2.0 * h),
            })
            .collect();
        Self {
            tau1_grid,
            occurrence,
            density,
        }
    }

    pub fn times(&self) -> Vec<f64> {
        self.tau1_grid.coordinates()
    }

    /// Largest drop between consecutive readings (zero when monotone).
    pub fn max_decrease(&self) -> f64 {
        self.occurrence
            .windows(2)
            .map(|w| w[0] - w[1])
            .fold(0.0, f64::max)
    }

    /// Local maxima of the density above `min_fraction` of its maximum,
    /// refined by a parabola through the three neighbouring samples.
    pub fn peaks(&self, min_fraction: f64) -> Vec<f64> {
        let d = &self.density;
        let top = d.iter().cloned().fold(f64::MIN, f64::max);
        let h = self.tau1_grid.spacing();
        let mut out = Vec::new();
        for j in 1..d.len().saturating_sub(1) {
            if d[j] > d[j - 1] && d[j] >= d[j + 1] && d[j] >= min_fraction * top {
                let curv = d[j - 1] - 2.0 * d[j] + d[j + 1];
                let shift = if curv < 0.0 { 0.5 * (d[j - 1] - d[j + 1]) / curv } else { 0.0 };
                out.push(self.tau1_grid.coordinate(j) + shift * h);
            }
        }
        out
    }

    /// Linear interpolation of the occurrence at `tau`, clamped to the grid.
    pub fn value_at(&self, tau: f64) -> f64 {
        let g = &self.tau1_grid;
        let x = ((tau - g.offset()) / g.spacing()).clamp(0.0, (g.n_points() - 1) as f64);
        let j = (x.floor() as usize).min(g.n_points().saturating_sub(2));
        let f = x - j as f64;
        if g.n_points() == 1 {
            return self.occurrence[0];
        }
        self.occurrence[j] * (1.0 - f) + self.occurrence[j + 1] * f
    }

    /// Mean occurrence over readings in [from, to].
    pub fn plateau(&self, from: f64, to: f64) -> Option<f64> {
        let vals: Vec<f64> = self
            .times()
            .iter()
            .zip(&self.occurrence)
            .filter(|(t, _)| **t >= from && **t <= to)
            .map(|(_, o)| *o)
            .collect();
        (!vals.is_empty()).then(|| vals.iter().sum::<f64>() / vals.len() as f64)
    }

    /// First reading at which the occurrence reaches `level`, interpolated.
    pub fn crossing(&self, level: f64) -> Option<f64> {
        let t = self.times();
        let o = &self.occurrence;
        if o.first().is_some_and(|v| *v >= level) {
            return t.first().copied();
        }
        (1..o.len()).find(|&j| o[j] >= level).map(|j| {
            let f = (level - o[j - 1]) / (o[j] - o[j - 1]);
            t[j - 1] + f * (t[j] - t[j - 1])
        })
    }

    /// Two columns: τ₁ and cumulative weight.
    pub fn write_columns(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "# tau1 occurrence")?;
        for (t, o) in self.times().iter().zip(&self.occurrence) {
            writeln!(w, "{t:.12e} {o:.12e}")?;
        }
        Ok(())
    }
}
