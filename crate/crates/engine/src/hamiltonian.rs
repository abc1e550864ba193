//! Relational Hamiltonians as sums of diagonal kernels.

use qrf_numerics::{
    expectation, hamiltonian_matrix, Axis, Basis, DenseMatrix, DiagonalKernel, TrotterPlan,
    WaveFunction,
};
use qrf_spacetime::{check_weak_field, gamma_factor, metric_g00, metric_g00_unchecked, ModelParams};
use qrf_spacetime::{Regime, SpacetimeError};
use serde::{Deserialize, Serialize};

use crate::layout::{clock_label, space_label, ScenarioAxes, SOURCE_SPACE, SOURCE_TIME};
use crate::{EngineError, Result};

/// What a kernel represents physically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TermRole {
    /// Momentum-diagonal motion of the particles and the frame.
    Kinetic,
    /// Position-diagonal metric correction.
    Metric,
    /// Internal clock energies (with their dilation factors).
    Clock,
    /// Generator of the source's time axis.
    Source,
    /// Constant rest energies.
    Rest,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianTerm {
    pub role: TermRole,
    pub kernel: DiagonalKernel,
}

/// Treatment of the kinematic factors γ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kinematics {
    Exact,
    /// γ factors expanded to zeroth order in 1/c² relative to each term
    /// (m c² γ → m c² + k²/2m, γ⁻¹ H → H).
    SlowMotion,
}

/// Ĥ seen from the clock of `frame_particle`, realized on `layout`.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianSpec {
    pub regime: Regime,
    pub frame_particle: u8,
    pub terms: Vec<HamiltonianTerm>,
    pub layout: Vec<Axis>,
    rest_energy: f64,
}

impl HamiltonianSpec {
    pub fn kernels(&self) -> Vec<DiagonalKernel> {
        self.terms.iter().map(|t| t.kernel.clone()).collect()
    }

    pub fn term(&self, label: &str) -> Option<&HamiltonianTerm> {
        self.terms.iter().find(|t| t.kernel.label() == label)
    }

    /// Σ m_I c² over the frame and the particles, contained in the kernels
    /// (zero in the Galilean limit, where it is dropped).
    pub fn rest_energy(&self) -> f64 {
        self.rest_energy
    }

    pub fn dense_matrix(&self) -> Result<DenseMatrix> {
        Ok(hamiltonian_matrix(&self.layout, &self.kernels())?)
    }

    pub fn plan(&self, step: f64, n_steps: usize) -> Result<TrotterPlan> {
        Ok(TrotterPlan::strang(&self.kernels(), step, n_steps)?)
    }

    /// ⟨ψ|Ĥ|ψ⟩, transforming ψ as each kernel requires.
    pub fn energy(&self, psi: &WaveFunction) -> Result<f64> {
        let mut total = 0.0;
        for t in &self.terms {
            let mut s = psi.clone();
            for (a, b) in t.kernel.acts_on().iter().zip(t.kernel.basis_required()) {
                s = s.to_basis(a, *b)?;
            }
            total += expectation(&t.kernel, &s)?.re;
        }
        Ok(total)
    }
}

/// g'₀₀ = g₀₀(q_i − q_M) / g₀₀(q_M): the metric seen from a frame at the
/// origin with the source at `q_m`.
pub fn transformed_metric(q_i: f64, q_m: f64, params: &ModelParams) -> Result<f64> {
    Ok(metric_g00(q_i - q_m, params)? / metric_g00(q_m, params)?)
}

fn sqrt_ratio_unchecked(q_i: f64, q_m: f64, params: &ModelParams) -> f64 {
    (metric_g00_unchecked(q_i - q_m, params) / metric_g00_unchecked(q_m, params)).sqrt()
}

pub fn build_hamiltonian(
    regime: Regime,
    params: &ModelParams,
    axes: &ScenarioAxes,
) -> Result<HamiltonianSpec> {
    build_hamiltonian_with(regime, params, axes, Kinematics::Exact)
}

struct Ctx<'a> {
    params: &'a ModelParams,
    layout: Vec<Axis>,
    others: Vec<u8>,
    /// Labels of all spatial momentum axes entering the total momentum.
    k_axes: Vec<String>,
    m_frame: f64,
    c: f64,
}

impl Ctx<'_> {
    fn mass(&self, i: u8) -> f64 {
        self.params.mass(i as usize)
    }

    fn k_spec(&self) -> Vec<(&str, Basis)> {
        self.k_axes.iter().map(|l| (l.as_str(), Basis::Momentum)).collect()
    }

    fn kernel(
        &self,
        label: &str,
        on: &[(&str, Basis)],
        f: impl Fn(&[f64]) -> f64,
    ) -> Result<DiagonalKernel> {
        Ok(DiagonalKernel::on_axes(label, &self.layout, on, f)?)
    }

    /// γ_Σ from the first `k_axes.len()` entries of a sample point.
    fn gamma_sigma(&self, k: &[f64]) -> f64 {
        gamma_factor(k.iter().sum(), self.m_frame, self.c)
    }
}

fn layout_error(regime: Regime, reason: impl Into<String>) -> EngineError {
    EngineError::Layout {
        regime: regime.name().to_string(),
        reason: reason.into(),
    }
}

fn check_layout(regime: Regime, params: &ModelParams, axes: &ScenarioAxes) -> Result<()> {
    let n = params.particles();
    if axes.frame == 0 || axes.frame as usize > n {
        return Err(layout_error(regime, format!("frame particle {} not in 1..={n}", axes.frame)));
    }
    let others = axes.non_frame();
    if others.is_empty() {
        return Err(layout_error(regime, "no particle besides the frame"));
    }
    for (j, &i) in others.iter().enumerate() {
        if i == axes.frame || i == 0 || i as usize > n || others[..j].contains(&i) {
            return Err(layout_error(regime, format!("invalid particle axis {i}")));
        }
    }
    if others.len() + 1 != n {
        return Err(layout_error(
            regime,
            format!("{} particle axes for {n} particles", others.len()),
        ));
    }
    if !params.clocks && axes.particles.iter().any(|p| p.clock.is_some()) {
        return Err(layout_error(regime, "clock axis configured but clocks are disabled"));
    }
    if !regime.has_gravity() {
        if params.gm != 0.0 {
            return Err(SpacetimeError::Regime {
                regime: regime.name().into(),
                reason: format!("has no source but GM = {}", params.gm),
            }
            .into());
        }
        if axes.dynamical_source().is_some() {
            return Err(layout_error(regime, "source axes need a regime with gravity"));
        }
    }
    Ok(())
}

pub fn build_hamiltonian_with(
    regime: Regime,
    params: &ModelParams,
    axes: &ScenarioAxes,
    kinematics: Kinematics,
) -> Result<HamiltonianSpec> {
    params.validate()?;
    check_layout(regime, params, axes)?;
    let layout = axes.axes();
    let others = axes.non_frame();
    let mut k_axes: Vec<String> = others.iter().map(|&i| space_label(i)).collect();
    let dynamical = axes.dynamical_source();
    if dynamical.is_some() {
        k_axes.push(SOURCE_SPACE.to_string());
    }
    let ctx = Ctx {
        params,
        layout,
        others,
        k_axes,
        m_frame: params.mass(axes.frame as usize),
        c: params.c,
    };
    let gravity = regime.has_gravity() && params.gm != 0.0;
    if gravity {
        validate_field(params, axes)?;
    }
    let mut terms = Vec::new();
    let m_total: f64 = params.masses.iter().sum();
    let c2 = ctx.c * ctx.c;
    let rest_energy = match regime {
        Regime::Galilean => 0.0,
        _ => m_total * c2,
    };

    let slow = kinematics == Kinematics::SlowMotion
        || matches!(regime, Regime::Newtonian | Regime::Galilean);
    if regime == Regime::Galilean || regime == Regime::Newtonian {
        terms.push(HamiltonianTerm {
            role: TermRole::Kinetic,
            kernel: kinetic_newtonian(&ctx)?,
        });
        if regime == Regime::Newtonian {
            terms.push(HamiltonianTerm {
                role: TermRole::Rest,
                kernel: DiagonalKernel::constant("rest", rest_energy),
            });
        }
    } else {
        terms.extend(relativistic_motion(&ctx, slow)?);
    }
    for p in &axes.particles {
        if p.clock.is_some() {
            terms.push(HamiltonianTerm {
                role: TermRole::Clock,
                kernel: clock_kernel(&ctx, p.particle, slow)?,
            });
        }
    }
    if gravity {
        terms.extend(metric_terms(&ctx, axes)?);
    }
    if dynamical.is_some() {
        terms.extend(source_terms(&ctx, gravity, slow)?);
    }
    Ok(HamiltonianSpec {
        regime,
        frame_particle: axes.frame,
        terms,
        layout: ctx.layout,
        rest_energy,
    })
}

fn validate_field(params: &ModelParams, axes: &ScenarioAxes) -> Result<()> {
    let sources: Vec<f64> = match (axes.sharp_source(), axes.dynamical_source()) {
        (Some(q), _) => vec![q],
        (_, Some((space, _))) => space.coordinates(),
        _ => return Ok(()),
    };
    check_weak_field(sources.iter().copied(), params)?;
    for p in &axes.particles {
        let qs = p.space.coordinates();
        check_weak_field(
            sources.iter().flat_map(|m| qs.iter().map(move |q| q - m)),
            params,
        )?;
    }
    Ok(())
}

/// Σ k_i²/2m_i + (Σk)²/2m_frame.
fn kinetic_newtonian(ctx: &Ctx) -> Result<DiagonalKernel> {
    let masses: Vec<f64> = ctx.others.iter().map(|&i| ctx.mass(i)).collect();
    let mf = ctx.m_frame;
    ctx.kernel("kinetic", &ctx.k_spec(), |k| {
        let own: f64 = masses.iter().zip(k).map(|(m, k)| k * k / (2.0 * m)).sum();
        let total: f64 = k.iter().sum();
        own + total * total / (2.0 * mf)
    })
}

/// γ_Σ Σ m_i c² γ_i and m_frame c² γ_Σ², or their slow-motion forms.
fn relativistic_motion(ctx: &Ctx, slow: bool) -> Result<Vec<HamiltonianTerm>> {
    let masses: Vec<f64> = ctx.others.iter().map(|&i| ctx.mass(i)).collect();
    let (mf, c) = (ctx.m_frame, ctx.c);
    let c2 = c * c;
    let motion = if slow {
        let m_sum: f64 = masses.iter().sum();
        ctx.kernel("motion", &ctx.k_spec(), |k| {
            let own: f64 = masses
                .iter()
                .zip(k)
                .map(|(m, k)| m * c2 + k * k / (2.0 * m))
                .sum();
            let total: f64 = k.iter().sum();
            own + m_sum * total * total / (2.0 * mf * mf)
        })?
    } else {
        ctx.kernel("motion", &ctx.k_spec(), |k| {
            let own: f64 = masses
                .iter()
                .zip(k)
                .map(|(m, k)| m * c2 * gamma_factor(*k, *m, c))
                .sum();
            ctx.gamma_sigma(k) * own
        })?
    };
    let frame = if slow {
        ctx.kernel("frame_rest", &ctx.k_spec(), |k| {
            let total: f64 = k.iter().sum();
            mf * c2 + total * total / mf
        })?
    } else {
        ctx.kernel("frame_rest", &ctx.k_spec(), |k| {
            let g = ctx.gamma_sigma(k);
            mf * c2 * g * g
        })?
    };
    Ok(vec![
        HamiltonianTerm {
            role: TermRole::Kinetic,
            kernel: motion,
        },
        HamiltonianTerm {
            role: TermRole::Kinetic,
            kernel: frame,
        },
    ])
}

/// Clock energy of particle `i`, dilated by γ_Σ/γ_i unless `slow`.
fn clock_kernel(ctx: &Ctx, i: u8, slow: bool) -> Result<DiagonalKernel> {
    let label = format!("clock_{i}");
    let t = clock_label(i);
    if slow {
        return ctx.kernel(&label, &[(t.as_str(), Basis::Momentum)], |h| h[0]);
    }
    let mut on = ctx.k_spec();
    on.push((t.as_str(), Basis::Momentum));
    let nk = ctx.k_axes.len();
    let idx = ctx.others.iter().position(|&j| j == i).expect("particle axis");
    let (mi, c) = (ctx.mass(i), ctx.c);
    ctx.kernel(&label, &on, |v| {
        let k = &v[..nk];
        ctx.gamma_sigma(k) / gamma_factor(k[idx], mi, c) * v[nk]
    })
}

/// (√g' − 1)(m_i c² + H_i) per particle, position-diagonal.
fn metric_terms(ctx: &Ctx, axes: &ScenarioAxes) -> Result<Vec<HamiltonianTerm>> {
    let mut out = Vec::new();
    let sharp = axes.sharp_source();
    let c2 = ctx.c * ctx.c;
    for p in &axes.particles {
        let i = p.particle;
        let q = space_label(i);
        let mi = ctx.mass(i);
        let mut on = vec![(q.as_str(), Basis::Position)];
        if sharp.is_none() {
            on.push((SOURCE_SPACE, Basis::Position));
        }
        let ratio = |v: &[f64]| {
            let qm = sharp.unwrap_or_else(|| v[1]);
            sqrt_ratio_unchecked(v[0], qm, ctx.params) - 1.0
        };
        out.push(HamiltonianTerm {
            role: TermRole::Metric,
            kernel: ctx.kernel(&format!("metric_{i}"), &on, |v| ratio(v) * mi * c2)?,
        });
        if p.clock.is_some() {
            let t = clock_label(i);
            let mut on_t = on.clone();
            on_t.push((t.as_str(), Basis::Momentum));
            let last = on_t.len() - 1;
            out.push(HamiltonianTerm {
                role: TermRole::Clock,
                kernel: ctx.kernel(&format!("clock_metric_{i}"), &on_t, |v| ratio(v) * v[last])?,
            });
        }
    }
    Ok(out)
}

/// c γ_Σ √g⁰⁰(q_M) k₀^M split into its kinematic and metric parts.
fn source_terms(ctx: &Ctx, gravity: bool, slow: bool) -> Result<Vec<HamiltonianTerm>> {
    let c = ctx.c;
    let mut out = Vec::new();
    let kinetic = if slow {
        ctx.kernel("source", &[(SOURCE_TIME, Basis::Momentum)], |v| c * v[0])?
    } else {
        let mut on = ctx.k_spec();
        on.push((SOURCE_TIME, Basis::Momentum));
        let nk = ctx.k_axes.len();
        ctx.kernel("source", &on, |v| c * ctx.gamma_sigma(&v[..nk]) * v[nk])?
    };
    out.push(HamiltonianTerm {
        role: TermRole::Source,
        kernel: kinetic,
    });
    if gravity {
        let params = ctx.params;
        out.push(HamiltonianTerm {
            role: TermRole::Source,
            kernel: ctx.kernel(
                "source_metric",
                &[(SOURCE_SPACE, Basis::Position), (SOURCE_TIME, Basis::Momentum)],
                |v| c * (1.0 / metric_g00_unchecked(v[0], params).sqrt() - 1.0) * v[1],
            )?,
        });
    }
    Ok(out)
}

/// The slow-motion expansion of the exact relational Hamiltonian exceeds
/// the Newtonian form by the total rest energy times the frame's dilation,
/// M_tot (Σk)²/(2 m_frame²). Returned as a kernel on the momentum axes.
pub fn frame_dilation_offset(params: &ModelParams, axes: &ScenarioAxes) -> Result<DiagonalKernel> {
    let layout = axes.axes();
    let mut on: Vec<String> = axes.non_frame().iter().map(|&i| space_label(i)).collect();
    if axes.dynamical_source().is_some() {
        on.push(SOURCE_SPACE.to_string());
    }
    let spec: Vec<(&str, Basis)> = on.iter().map(|l| (l.as_str(), Basis::Momentum)).collect();
    let m_total: f64 = params.masses.iter().sum();
    let mf = params.mass(axes.frame as usize);
    Ok(DiagonalKernel::on_axes("frame_dilation_offset", &layout, &spec, |k| {
        let total: f64 = k.iter().sum();
        m_total * total * total / (2.0 * mf * mf)
    })?)
}
