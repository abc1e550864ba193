use ndarray::{ArrayD, ArrayViewD, IxDyn, Zip};

use crate::{Axis, Basis, Grid1D, NumericsError, Result, WaveFunction, C64};

#[derive(Debug, Clone, PartialEq)]
pub enum KernelValues {
    Real(ArrayD<f64>),
    Complex(ArrayD<C64>),
}

impl KernelValues {
    fn shape(&self) -> &[usize] {
        match self {
            KernelValues::Real(v) => v.shape(),
            KernelValues::Complex(v) => v.shape(),
        }
    }

    fn to_complex(&self) -> ArrayD<C64> {
        match self {
            KernelValues::Real(v) => v.mapv(|x| C64::new(x, 0.0)),
            KernelValues::Complex(v) => v.clone(),
        }
    }
}

/// Operator diagonal in a fixed per-axis representation. `values` has one
/// dimension per entry of `acts_on`, in that order.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalKernel {
    label: String,
    acts_on: Vec<String>,
    basis_required: Vec<Basis>,
    values: KernelValues,
}

impl DiagonalKernel {
    pub fn new(
        label: impl Into<String>,
        acts_on: Vec<(String, Basis)>,
        values: KernelValues,
    ) -> Result<Self> {
        let label = label.into();
        if values.shape().len() != acts_on.len() {
            return Err(NumericsError::Shape(format!(
                "kernel '{label}' has {} value dimensions for {} axes",
                values.shape().len(),
                acts_on.len()
            )));
        }
        for (i, (a, _)) in acts_on.iter().enumerate() {
            if acts_on[..i].iter().any(|(b, _)| b == a) {
                return Err(NumericsError::Config(format!(
                    "kernel '{label}' lists axis '{a}' twice"
                )));
            }
        }
        let (acts_on, basis_required) = acts_on.into_iter().unzip();
        Ok(Self {
            label,
            acts_on,
            basis_required,
            values,
        })
    }

    /// Real kernel sampled from `f` on the given axes. Each axis contributes
    /// its position coordinates or its wavenumbers according to the basis.
    pub fn from_fn(
        label: impl Into<String>,
        axes: &[(&str, &Grid1D, Basis)],
        f: impl Fn(&[f64]) -> f64,
    ) -> Result<Self> {
        let samples: Vec<Vec<f64>> = axes
            .iter()
            .map(|(_, g, b)| match b {
                Basis::Position => g.coordinates(),
                Basis::Momentum => g.wavenumbers(),
            })
            .collect();
        let shape: Vec<usize> = axes.iter().map(|(_, g, _)| g.n_points()).collect();
        let mut point = vec![0.0; axes.len()];
        let values = ArrayD::from_shape_fn(IxDyn(&shape), |idx| {
            for (d, p) in point.iter_mut().enumerate() {
                *p = samples[d][idx[d]];
            }
            f(&point)
        });
        Self::new(
            label,
            axes.iter().map(|(l, _, b)| (l.to_string(), *b)).collect(),
            KernelValues::Real(values),
        )
    }

    /// Kernel on the axes of `layout` that appear in `on`, sampled in the
    /// requested bases.
    pub fn on_axes(
        label: impl Into<String>,
        layout: &[Axis],
        on: &[(&str, Basis)],
        f: impl Fn(&[f64]) -> f64,
    ) -> Result<Self> {
        let mut spec = Vec::with_capacity(on.len());
        for (l, b) in on {
            let a = layout
                .iter()
                .find(|a| a.label == *l)
                .ok_or_else(|| NumericsError::UnknownAxis(l.to_string()))?;
            spec.push((*l, &a.grid, *b));
        }
        Self::from_fn(label, &spec, f)
    }

    /// Multiple of the identity.
    pub fn constant(label: impl Into<String>, value: f64) -> Self {
        Self {
            label: label.into(),
            acts_on: Vec::new(),
            basis_required: Vec::new(),
            values: KernelValues::Real(ArrayD::from_elem(IxDyn(&[]), value)),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn acts_on(&self) -> &[String] {
        &self.acts_on
    }

    pub fn basis_required(&self) -> &[Basis] {
        &self.basis_required
    }

    pub fn values(&self) -> &KernelValues {
        &self.values
    }

    pub fn is_real(&self) -> bool {
        matches!(self.values, KernelValues::Real(_))
    }

    pub fn real_values(&self) -> Option<&ArrayD<f64>> {
        match &self.values {
            KernelValues::Real(v) => Some(v),
            KernelValues::Complex(_) => None,
        }
    }

    pub fn requirement(&self, axis: &str) -> Option<Basis> {
        self.acts_on
            .iter()
            .position(|a| a == axis)
            .map(|i| self.basis_required[i])
    }

    /// Largest absolute value of the kernel.
    pub fn max_abs(&self) -> f64 {
        match &self.values {
            KernelValues::Real(v) => v.iter().fold(0.0, |m, x| m.max(x.abs())),
            KernelValues::Complex(v) => v.iter().fold(0.0, |m, x| m.max(x.norm())),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn scaled(mut self, s: f64) -> Self {
        match &mut self.values {
            KernelValues::Real(v) => v.mapv_inplace(|x| x * s),
            KernelValues::Complex(v) => v.mapv_inplace(|x| x * s),
        }
        self
    }

    /// exp(-i·values·dt) as a complex kernel on the same axes.
    pub fn exponentiated(&self, dt: f64) -> DiagonalKernel {
        let values = match &self.values {
            KernelValues::Real(v) => v.mapv(|x| C64::from_polar(1.0, -x * dt)),
            KernelValues::Complex(v) => v.mapv(|x| (C64::new(0.0, -dt) * x).exp()),
        };
        DiagonalKernel {
            label: format!("exp({})", self.label),
            acts_on: self.acts_on.clone(),
            basis_required: self.basis_required.clone(),
            values: KernelValues::Complex(values),
        }
    }

    /// Sum of real kernels over the union of their axes. Fails if two kernels
    /// need different bases on a shared axis.
    pub fn sum(label: impl Into<String>, kernels: &[&DiagonalKernel]) -> Result<DiagonalKernel> {
        let mut axes: Vec<(String, Basis, usize)> = Vec::new();
        for k in kernels {
            let shape = k.values.shape();
            for (i, a) in k.acts_on.iter().enumerate() {
                match axes.iter().find(|(l, _, _)| l == a) {
                    Some((_, b, n)) => {
                        if *b != k.basis_required[i] || *n != shape[i] {
                            return Err(NumericsError::Config(format!(
                                "kernels disagree on axis '{a}'"
                            )));
                        }
                    }
                    None => axes.push((a.clone(), k.basis_required[i], shape[i])),
                }
            }
        }
        let shape: Vec<usize> = axes.iter().map(|(_, _, n)| *n).collect();
        let labels: Vec<String> = axes.iter().map(|(l, _, _)| l.clone()).collect();
        let mut total = ArrayD::<f64>::zeros(IxDyn(&shape));
        for k in kernels {
            let v = k.real_values().ok_or_else(|| {
                NumericsError::ComplexGenerator(k.label.clone())
            })?;
            let b = broadcast_to(v.view(), &k.acts_on, &labels, &shape)?;
            Zip::from(&mut total).and(&b).for_each(|t, x| *t += x);
        }
        DiagonalKernel::new(
            label,
            axes.into_iter().map(|(l, b, _)| (l, b)).collect(),
            KernelValues::Real(total),
        )
    }

    fn check_basis(&self, psi: &WaveFunction) -> Result<()> {
        for (a, req) in self.acts_on.iter().zip(&self.basis_required) {
            let actual = psi.basis(a)?;
            if actual != *req {
                return Err(NumericsError::BasisMismatch {
                    axis: a.clone(),
                    required: *req,
                    actual,
                });
            }
            let n = psi.axis(a)?.grid.n_points();
            let i = self.acts_on.iter().position(|x| x == a).unwrap();
            if self.values.shape()[i] != n {
                return Err(NumericsError::Shape(format!(
                    "kernel '{}' has {} samples on axis '{a}', state has {n}",
                    self.label,
                    self.values.shape()[i]
                )));
            }
        }
        Ok(())
    }

    /// Values broadcast to the full shape of `psi`, as a complex array.
    pub(crate) fn broadcast_complex(&self, psi: &WaveFunction) -> Result<ArrayD<C64>> {
        self.check_basis(psi)?;
        let labels: Vec<String> = psi.axes().iter().map(|a| a.label.clone()).collect();
        let c = self.values.to_complex();
        Ok(broadcast_to(c.view(), &self.acts_on, &labels, psi.shape())?)
    }

    /// Real values broadcast to the full shape of `psi`.
    pub(crate) fn broadcast_real(&self, psi: &WaveFunction) -> Result<ArrayD<f64>> {
        self.check_basis(psi)?;
        let v = self
            .real_values()
            .ok_or_else(|| NumericsError::ComplexGenerator(self.label.clone()))?;
        let labels: Vec<String> = psi.axes().iter().map(|a| a.label.clone()).collect();
        Ok(broadcast_to(v.view(), &self.acts_on, &labels, psi.shape())?)
    }
}

/// Reorders `values` (axes `acts_on`) into `target` axis order and broadcasts
/// over the axes it does not act on.
fn broadcast_to<T: Clone>(
    values: ArrayViewD<'_, T>,
    acts_on: &[String],
    target: &[String],
    shape: &[usize],
) -> Result<ArrayD<T>> {
    let mut pos = Vec::with_capacity(acts_on.len());
    for a in acts_on {
        pos.push(
            target
                .iter()
                .position(|t| t == a)
                .ok_or_else(|| NumericsError::UnknownAxis(a.clone()))?,
        );
    }
    let mut order: Vec<usize> = (0..acts_on.len()).collect();
    order.sort_by_key(|&i| pos[i]);
    let mut v = values.permuted_axes(IxDyn(&order));
    for (d, t) in target.iter().enumerate() {
        if !acts_on.contains(t) {
            v = v.insert_axis(ndarray::Axis(d));
        }
    }
    v.broadcast(IxDyn(shape))
        .map(|b| b.to_owned())
        .ok_or_else(|| NumericsError::Shape("kernel does not broadcast over state".into()))
}

/// Pointwise product of `kernel` with `psi`.
pub fn apply_diagonal(kernel: &DiagonalKernel, psi: &WaveFunction) -> Result<WaveFunction> {
    let b = kernel.broadcast_complex(psi)?;
    let mut out = psi.clone();
    Zip::from(out.amplitudes_mut())
        .and(&b)
        .for_each(|a, k| *a *= k);
    Ok(out)
}

/// ⟨ψ|K|ψ⟩ with the grid measure (no renormalization).
pub fn expectation(kernel: &DiagonalKernel, psi: &WaveFunction) -> Result<C64> {
    let b = kernel.broadcast_complex(psi)?;
    let mut s = C64::new(0.0, 0.0);
    Zip::from(psi.amplitudes())
        .and(&b)
        .for_each(|a, k| s += a.norm_sqr() * k);
    Ok(s * psi.measure())
}
