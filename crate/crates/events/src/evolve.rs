//! Histories with the measurement kick: split-step time ordering and the
//! branch-wise closed form.

use qrf_engine::{clock_label, evolve_generator, evolve_history, EvolveOptions, HistoryState};
use qrf_numerics::{apply_diagonal, Basis, DiagonalKernel, Grid1D, WaveFunction};
use qrf_spacetime::Regime;

use crate::model::EventModel;
use crate::spec::{KickProfile, POINTER};
use crate::{EventError, Result};

/// Standard deviation of the measured clock reading in `psi`.
pub fn clock_width(model: &EventModel, psi: &WaveFunction) -> Result<f64> {
    let t = clock_label(model.measured);
    let psi = psi.clone().to_basis(&t, Basis::Position)?;
    let rho = psi.marginal(&t)?;
    let xs = psi.axis(&t)?.samples();
    let w: f64 = rho.iter().sum();
    let mean = rho.iter().zip(&xs).map(|(r, x)| r * x).sum::<f64>() / w;
    let var = rho.iter().zip(&xs).map(|(r, x)| r * (x - mean).powi(2)).sum::<f64>() / w;
    Ok(var.sqrt())
}

fn options_for(model: &EventModel, opts: &EvolveOptions) -> EvolveOptions {
    let mut opts = opts.clone();
    if model.has_pointer() && !opts.unchecked_axes.iter().any(|a| a == POINTER) {
        opts = opts.unchecked(POINTER);
    }
    opts
}

/// Split-step evolution under H plus the kick generator.
pub fn evolve_with_event(
    model: &EventModel,
    psi0: &WaveFunction,
    tau_grid: &Grid1D,
    opts: &EvolveOptions,
) -> Result<HistoryState> {
    let width = clock_width(model, psi0)?;
    if width > 2.0 * model.event.sigma_t {
        log::warn!(
            "clock packet width {width:.4} exceeds 2 sigma_t = {:.4}; running in unsharp-clock mode",
            2.0 * model.event.sigma_t
        );
    }
    let mut kernels = model.hamiltonian.kernels();
    kernels.extend(model.kick_kernels()?);
    Ok(evolve_generator(psi0, &kernels, tau_grid, &options_for(model, opts))?)
}

/// Applies a diagonal kernel in its own representation and returns to the
/// representation of `psi`.
fn apply_in_place(kernel: &DiagonalKernel, psi: &WaveFunction) -> Result<WaveFunction> {
    let mut out = psi.clone();
    for (axis, basis) in kernel.acts_on().iter().zip(kernel.basis_required()) {
        out = out.to_basis(axis, *basis)?;
    }
    Ok(apply_diagonal(kernel, &out)?.with_bases_of(psi.axes())?)
}

/// e^{-iHτ}ψ for a generator whose kernels share one representation.
fn exact_diagonal_evolve(kernels: &[DiagonalKernel], psi: &WaveFunction, tau: f64) -> Result<WaveFunction> {
    let mut need: Vec<(&str, Basis)> = Vec::new();
    for k in kernels {
        for (a, b) in k.acts_on().iter().zip(k.basis_required()) {
            match need.iter().find(|(l, _)| l == a) {
                Some((_, prev)) if prev != b => {
                    return Err(EventError::Config(format!(
                        "generator needs axis {a} in two representations; no exact propagator"
                    )))
                }
                Some(_) => {}
                None => need.push((a.as_str(), *b)),
            }
        }
    }
    let mut out = psi.clone();
    for (a, b) in &need {
        out = out.to_basis(a, *b)?;
    }
    for k in kernels {
        out = apply_diagonal(&k.exponentiated(tau), &out)?;
    }
    Ok(out.with_bases_of(psi.axes())?)
}

/// History built branch by branch: kick-free evolution to each reading,
/// then the phase accumulated along each branch's clock trajectory.
///
/// Exact in the galilean and special-relativistic regimes, where the clock
/// rate commutes with the Hamiltonian. In the newtonian regime the rate is
/// evaluated at the evolved position.
pub fn closed_form_history(
    model: &EventModel,
    psi0: &WaveFunction,
    tau_grid: &Grid1D,
    opts: &EvolveOptions,
    profile: KickProfile,
) -> Result<HistoryState> {
    let free: Vec<WaveFunction> = match model.regime {
        Regime::Full => {
            return Err(EventError::Regime {
                regime: model.regime.name().into(),
                reason: "has no branch-wise closed form; use evolve_with_event".into(),
            })
        }
        Regime::Newtonian => {
            evolve_history(psi0, &model.hamiltonian, tau_grid, &options_for(model, opts))?.snapshots
        }
        _ => {
            let kernels = model.hamiltonian.kernels();
            tau_grid
                .coordinates()
                .iter()
                .map(|&tau| exact_diagonal_evolve(&kernels, psi0, tau))
                .collect::<Result<_>>()?
        }
    };
    let mut snapshots = Vec::with_capacity(free.len());
    for (tau, psi) in tau_grid.coordinates().into_iter().zip(free) {
        let kick = model.accumulated_kick(tau, profile)?.exponentiated(1.0);
        snapshots.push(apply_in_place(&kick, &psi)?);
    }
    Ok(HistoryState {
        tau_grid: *tau_grid,
        snapshots,
    })
}
