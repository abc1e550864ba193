//! History states: the reduced state conditioned on each reading of the
//! frame clock.

use std::io::Write;

use qrf_numerics::{trotter_evolve, DiagonalKernel, Grid1D, TrotterPlan, WaveFunction};

use crate::hamiltonian::HamiltonianSpec;
use crate::{EngineError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct HistoryState {
    /// Readings τ₁ of the frame clock.
    pub tau_grid: Grid1D,
    /// One unit-norm conditioned state per reading.
    pub snapshots: Vec<WaveFunction>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolveOptions {
    /// Split-step size; must divide the history spacing.
    pub step: f64,
    /// Fraction of samples at each end of an axis counted as its edge.
    pub edge_fraction: f64,
    /// Largest probability tolerated in the edge region of any axis.
    pub edge_limit: f64,
    /// Axes excluded from the edge check (pointers, momentum-sharp axes).
    pub unchecked_axes: Vec<String>,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self {
            step: 1e-3,
            edge_fraction: 0.05,
            edge_limit: 1e-4,
            unchecked_axes: Vec::new(),
        }
    }
}

impl EvolveOptions {
    pub fn with_step(step: f64) -> Self {
        Self {
            step,
            ..Self::default()
        }
    }

    pub fn unchecked(mut self, axis: impl Into<String>) -> Self {
        self.unchecked_axes.push(axis.into());
        self
    }
}

/// Whole number of steps covering `span`, or an error.
fn steps_for(span: f64, step: f64) -> Result<usize> {
    let n = (span / step).round();
    if n < 1.0 || (n * step - span).abs() > 1e-9 * span.max(step) {
        return Err(EngineError::StepMismatch { step, spacing: span });
    }
    Ok(n as usize)
}

fn check_edges(psi: &WaveFunction, opts: &EvolveOptions) -> Result<()> {
    for a in psi.axes() {
        if opts.unchecked_axes.contains(&a.label) {
            continue;
        }
        let p = psi.edge_probability(&a.label, opts.edge_fraction)?;
        if p > opts.edge_limit {
            return Err(EngineError::EdgeLeakage {
                axis: a.label.clone(),
                probability: p,
                fraction: opts.edge_fraction,
                limit: opts.edge_limit,
            });
        }
    }
    Ok(())
}

pub fn evolve_history(
    psi0: &WaveFunction,
    h: &HamiltonianSpec,
    tau_grid: &Grid1D,
    opts: &EvolveOptions,
) -> Result<HistoryState> {
    evolve_generator(psi0, &h.kernels(), tau_grid, opts)
}

/// History under an arbitrary time-independent generator given as kernels.
pub fn evolve_generator(
    psi0: &WaveFunction,
    kernels: &[DiagonalKernel],
    tau_grid: &Grid1D,
    opts: &EvolveOptions,
) -> Result<HistoryState> {
    let norm = psi0.norm_sqr();
    if (norm - 1.0).abs() > 1e-8 {
        return Err(EngineError::NotNormalized(norm));
    }
    if tau_grid.offset() < 0.0 {
        return Err(EngineError::OutOfRange {
            tau: tau_grid.offset(),
            first: 0.0,
            last: f64::INFINITY,
        });
    }
    let per_interval = steps_for(tau_grid.spacing(), opts.step)?;
    let plan = TrotterPlan::strang(kernels, opts.step, per_interval)?;
    let mut current = if tau_grid.offset() > 0.0 {
        let n0 = steps_for(tau_grid.offset(), opts.step)?;
        trotter_evolve(&plan.rescheduled(opts.step, n0)?, psi0)?
    } else {
        psi0.clone()
    };
    let mut snapshots = Vec::with_capacity(tau_grid.n_points());
    for j in 0..tau_grid.n_points() {
        if j > 0 {
            current = trotter_evolve(&plan, &current)?;
        }
        check_edges(&current, opts)?;
        snapshots.push(current.clone());
    }
    Ok(HistoryState {
        tau_grid: *tau_grid,
        snapshots,
    })
}

impl HistoryState {
    pub fn times(&self) -> Vec<f64> {
        self.tau_grid.coordinates()
    }

    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    /// Largest |‖ψ(τ)‖² − 1| over the snapshots.
    pub fn norm_defect(&self) -> f64 {
        self.snapshots
            .iter()
            .map(|s| (s.norm_sqr() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Largest L² distance between matching snapshots.
    pub fn max_distance(&self, other: &HistoryState) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for (a, b) in self.snapshots.iter().zip(&other.snapshots) {
            let b = b.clone().with_bases_of(a.axes())?;
            worst = worst.max(a.distance(&b)?);
        }
        Ok(worst)
    }

    /// Writes `tau coord... re im` rows, one per amplitude, with axes in
    /// their stored representation.
    pub fn write_columnar(&self, mut w: impl Write) -> std::io::Result<()> {
        let Some(first) = self.snapshots.first() else {
            return Ok(());
        };
        let labels: Vec<&str> = first.axes().iter().map(|a| a.label.as_str()).collect();
        writeln!(w, "# tau {} re im", labels.join(" "))?;
        for (tau, s) in self.times().iter().zip(&self.snapshots) {
            let samples: Vec<Vec<f64>> = s.axes().iter().map(|a| a.samples()).collect();
            let shape = s.shape();
            for (flat, a) in s.amplitudes().iter().enumerate() {
                write!(w, "{tau:.12e}")?;
                let mut stride = s.len();
                for (d, n) in shape.iter().enumerate() {
                    stride /= n;
                    write!(w, " {:.12e}", samples[d][(flat / stride) % n])?;
                }
                writeln!(w, " {:.12e} {:.12e}", a.re, a.im)?;
            }
        }
        Ok(())
    }

    /// Writes `tau coord density` rows for the marginal along `label`.
    pub fn write_marginal(&self, label: &str, mut w: impl Write) -> Result<()> {
        let io = |e: std::io::Error| EngineError::Layout {
            regime: "output".into(),
            reason: e.to_string(),
        };
        writeln!(w, "# tau {label} density").map_err(io)?;
        for (tau, s) in self.times().iter().zip(&self.snapshots) {
            let m = s.marginal(label)?;
            let x = s.axis(label)?.samples();
            for (x, d) in x.iter().zip(&m) {
                writeln!(w, "{tau:.12e} {x:.12e} {d:.12e}").map_err(io)?;
            }
        }
        Ok(())
    }
}

/// The conditioned state at reading `tau`; off-grid readings snap to the
/// nearest snapshot with a warning.
pub fn condition_on_clock(history: &HistoryState, tau: f64) -> Result<WaveFunction> {
    let g = &history.tau_grid;
    let (first, last) = (g.offset(), g.coordinate(g.n_points() - 1));
    if !(tau >= first - 1e-12 && tau <= last + 1e-12) {
        return Err(EngineError::OutOfRange { tau, first, last });
    }
    let j = (((tau - first) / g.spacing()).round() as usize).min(g.n_points() - 1);
    let snapped = g.coordinate(j);
    if (snapped - tau).abs() > 1e-9 * g.spacing() {
        log::warn!("clock reading {tau} is off the history grid; using {snapped}");
    }
    Ok(history.snapshots[j].clone())
}
