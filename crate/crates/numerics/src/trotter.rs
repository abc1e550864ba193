use std::collections::HashMap;

use ndarray::{ArrayD, Zip};

use crate::transform::AxisTransform;
use crate::{Basis, DiagonalKernel, NumericsError, Result, WaveFunction, C64};

/// One entry of a split-step sequence.
#[derive(Debug, Clone, PartialEq)]
pub enum TrotterOp {
    /// Bring `axis` into `to` (no-op when already there).
    Basis { axis: String, to: Basis },
    /// Multiply by exp(-i·weight·dτ·K) for kernel group `group`.
    Kernel { group: usize, weight: f64 },
}

/// Symmetric (Strang) split-step schedule. Kernels that are diagonal in a
/// common representation are summed into one group; groups are applied as
/// e^{-iA dτ/2} e^{-iB dτ/2} … e^{-iZ dτ} … e^{-iB dτ/2} e^{-iA dτ/2}.
#[derive(Debug, Clone)]
pub struct TrotterPlan {
    step_size: f64,
    n_steps: usize,
    groups: Vec<DiagonalKernel>,
    term_sequence: Vec<TrotterOp>,
}

impl TrotterPlan {
    pub fn strang(kernels: &[DiagonalKernel], step_size: f64, n_steps: usize) -> Result<Self> {
        if !(step_size > 0.0) || !step_size.is_finite() {
            return Err(NumericsError::Config(format!(
                "step size must be positive, got {step_size}"
            )));
        }
        if n_steps == 0 {
            return Err(NumericsError::Config("n_steps must be positive".into()));
        }
        let mut members: Vec<(Vec<(String, Basis)>, Vec<&DiagonalKernel>)> = Vec::new();
        for k in kernels {
            if !k.is_real() {
                return Err(NumericsError::ComplexGenerator(k.label().to_string()));
            }
            let req: Vec<(String, Basis)> = k
                .acts_on()
                .iter()
                .cloned()
                .zip(k.basis_required().iter().copied())
                .collect();
            let slot = members.iter().position(|(g, _)| {
                req.iter()
                    .all(|(a, b)| g.iter().all(|(ga, gb)| ga != a || gb == b))
            });
            match slot {
                Some(i) => {
                    for r in req {
                        if !members[i].0.iter().any(|(a, _)| *a == r.0) {
                            members[i].0.push(r);
                        }
                    }
                    members[i].1.push(k);
                }
                None => members.push((req, vec![k])),
            }
        }
        let groups = members
            .iter()
            .enumerate()
            .map(|(i, (_, ks))| {
                let names: Vec<&str> = ks.iter().map(|k| k.label()).collect();
                DiagonalKernel::sum(format!("group{i}[{}]", names.join("+")), ks)
            })
            .collect::<Result<Vec<_>>>()?;

        let ensure = |g: &DiagonalKernel, ops: &mut Vec<TrotterOp>| {
            for (a, b) in g.acts_on().iter().zip(g.basis_required()) {
                ops.push(TrotterOp::Basis {
                    axis: a.clone(),
                    to: *b,
                });
            }
        };
        let m = groups.len();
        let mut seq = Vec::new();
        if m == 1 {
            ensure(&groups[0], &mut seq);
            seq.push(TrotterOp::Kernel {
                group: 0,
                weight: 1.0,
            });
        } else if m > 1 {
            for (i, g) in groups.iter().enumerate().take(m - 1) {
                ensure(g, &mut seq);
                seq.push(TrotterOp::Kernel {
                    group: i,
                    weight: 0.5,
                });
            }
            ensure(&groups[m - 1], &mut seq);
            seq.push(TrotterOp::Kernel {
                group: m - 1,
                weight: 1.0,
            });
            for (i, g) in groups.iter().enumerate().take(m - 1).rev() {
                ensure(g, &mut seq);
                seq.push(TrotterOp::Kernel {
                    group: i,
                    weight: 0.5,
                });
            }
        }
        Ok(Self {
            step_size,
            n_steps,
            groups,
            term_sequence: seq,
        })
    }

    /// Same grouping with a different schedule.
    pub fn rescheduled(&self, step_size: f64, n_steps: usize) -> Result<Self> {
        if !(step_size > 0.0) || n_steps == 0 {
            return Err(NumericsError::Config("invalid Trotter schedule".into()));
        }
        Ok(Self {
            step_size,
            n_steps,
            ..self.clone()
        })
    }

    pub fn step_size(&self) -> f64 {
        self.step_size
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn total_time(&self) -> f64 {
        self.step_size * self.n_steps as f64
    }

    pub fn groups(&self) -> &[DiagonalKernel] {
        &self.groups
    }

    pub fn term_sequence(&self) -> &[TrotterOp] {
        &self.term_sequence
    }
}

struct Executor<'a> {
    plan: &'a TrotterPlan,
    transforms: Vec<AxisTransform>,
    values: HashMap<usize, ArrayD<f64>>,
    phases: HashMap<(usize, u64), ArrayD<C64>>,
}

impl<'a> Executor<'a> {
    fn run(&mut self, psi: &mut WaveFunction, ops: &[TrotterOp]) -> Result<()> {
        for op in ops {
            match op {
                TrotterOp::Basis { axis, to } => {
                    let d = psi.axis_index(axis)?;
                    if psi.axes()[d].basis != *to {
                        psi.toggle_with(d, &self.transforms[d]);
                    }
                }
                TrotterOp::Kernel { group, weight } => self.phase(psi, *group, *weight)?,
            }
        }
        Ok(())
    }

    fn phase(&mut self, psi: &mut WaveFunction, group: usize, weight: f64) -> Result<()> {
        if !self.values.contains_key(&group) {
            let v = self.plan.groups[group].broadcast_real(psi)?;
            self.values.insert(group, v);
        }
        // The cached array was broadcast under the same basis contract.
        for (a, b) in self.plan.groups[group]
            .acts_on()
            .iter()
            .zip(self.plan.groups[group].basis_required())
        {
            let actual = psi.basis(a)?;
            if actual != *b {
                return Err(NumericsError::BasisMismatch {
                    axis: a.clone(),
                    required: *b,
                    actual,
                });
            }
        }
        let dt = weight * self.plan.step_size;
        let key = (group, dt.to_bits());
        if !self.phases.contains_key(&key) {
            let p = self.values[&group].mapv(|x| C64::from_polar(1.0, -x * dt));
            self.phases.insert(key, p);
        }
        Zip::from(psi.amplitudes_mut())
            .and(&self.phases[&key])
            .for_each(|a, p| *a *= p);
        Ok(())
    }
}

/// Runs `plan` on `psi`; the result is returned in the bases `psi` had.
pub fn trotter_evolve(plan: &TrotterPlan, psi: &WaveFunction) -> Result<WaveFunction> {
    let original = psi.axes().to_vec();
    let mut out = psi.clone();
    if plan.groups.is_empty() {
        return Ok(out);
    }
    let mut ex = Executor {
        plan,
        transforms: psi.axes().iter().map(|a| AxisTransform::new(&a.grid)).collect(),
        values: HashMap::new(),
        phases: HashMap::new(),
    };
    let seq = &plan.term_sequence;
    if plan.groups.len() == 1 {
        let (last, head) = seq.split_last().expect("non-empty sequence");
        ex.run(&mut out, head)?;
        if let TrotterOp::Kernel { group, weight } = last {
            ex.phase(&mut out, *group, weight * plan.n_steps as f64)?;
        }
    } else {
        // Adjacent half steps of the outermost group are fused across steps.
        let first_k = seq
            .iter()
            .position(|op| matches!(op, TrotterOp::Kernel { .. }))
            .expect("kernel op present");
        let last_k = seq.len() - 1;
        ex.run(&mut out, &seq[..=first_k])?;
        for s in 0..plan.n_steps {
            ex.run(&mut out, &seq[first_k + 1..last_k])?;
            let w = if s + 1 < plan.n_steps { 1.0 } else { 0.5 };
            ex.phase(&mut out, 0, w)?;
        }
    }
    for (d, a) in original.iter().enumerate() {
        if out.axes()[d].basis != a.basis {
            out.toggle_with(d, &ex.transforms[d]);
        }
    }
    Ok(out)
}
