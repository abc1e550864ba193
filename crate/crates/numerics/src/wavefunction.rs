use ndarray::{ArrayD, Axis as NdAxis, IxDyn};

use crate::transform::AxisTransform;
use crate::{Grid1D, NumericsError, Result, C64};

/// Representation an axis is currently held in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Basis {
    Position,
    Momentum,
}

impl Basis {
    pub fn toggled(self) -> Self {
        match self {
            Basis::Position => Basis::Momentum,
            Basis::Momentum => Basis::Position,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub grid: Grid1D,
    pub label: String,
    pub basis: Basis,
}

impl Axis {
    pub fn new(label: impl Into<String>, grid: Grid1D, basis: Basis) -> Self {
        Self {
            grid,
            label: label.into(),
            basis,
        }
    }

    /// Integration weight of one sample in the current basis.
    pub fn measure(&self) -> f64 {
        match self.basis {
            Basis::Position => self.grid.spacing(),
            Basis::Momentum => self.grid.conjugate_spacing(),
        }
    }

    /// Sample values of the variable the axis is currently diagonal in.
    pub fn samples(&self) -> Vec<f64> {
        match self.basis {
            Basis::Position => self.grid.coordinates(),
            Basis::Momentum => self.grid.wavenumbers(),
        }
    }
}

/// Amplitudes over a tensor product of grids, row-major in axis order.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction {
    axes: Vec<Axis>,
    amps: ArrayD<C64>,
}

impl WaveFunction {
    pub fn new(axes: Vec<Axis>, amps: ArrayD<C64>) -> Result<Self> {
        check_labels(&axes)?;
        let shape: Vec<usize> = axes.iter().map(|a| a.grid.n_points()).collect();
        if amps.shape() != shape.as_slice() {
            return Err(NumericsError::Shape(format!(
                "amplitude shape {:?} does not match axes {:?}",
                amps.shape(),
                shape
            )));
        }
        Ok(Self { axes, amps })
    }

    pub fn zeros(axes: Vec<Axis>) -> Result<Self> {
        let shape: Vec<usize> = axes.iter().map(|a| a.grid.n_points()).collect();
        Self::new(axes, ArrayD::zeros(IxDyn(&shape)))
    }

    /// Evaluates `f` on the sample values of every axis in its current basis.
    pub fn from_fn(axes: Vec<Axis>, f: impl Fn(&[f64]) -> C64) -> Result<Self> {
        let samples: Vec<Vec<f64>> = axes.iter().map(Axis::samples).collect();
        let shape: Vec<usize> = axes.iter().map(|a| a.grid.n_points()).collect();
        let mut point = vec![0.0; axes.len()];
        let amps = ArrayD::from_shape_fn(IxDyn(&shape), |idx| {
            for (d, p) in point.iter_mut().enumerate() {
                *p = samples[d][idx[d]];
            }
            f(&point)
        });
        Self::new(axes, amps)
    }

    /// Outer product of one factor per axis.
    pub fn product(factors: Vec<(Axis, Vec<C64>)>) -> Result<Self> {
        for (a, v) in &factors {
            if v.len() != a.grid.n_points() {
                return Err(NumericsError::Shape(format!(
                    "factor for axis '{}' has {} samples, grid has {}",
                    a.label,
                    v.len(),
                    a.grid.n_points()
                )));
            }
        }
        let shape: Vec<usize> = factors.iter().map(|(a, _)| a.grid.n_points()).collect();
        let amps = ArrayD::from_shape_fn(IxDyn(&shape), |idx| {
            factors
                .iter()
                .enumerate()
                .fold(C64::new(1.0, 0.0), |acc, (d, (_, v))| acc * v[idx[d]])
        });
        let axes = factors.into_iter().map(|(a, _)| a).collect();
        Self::new(axes, amps)
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn amplitudes(&self) -> &ArrayD<C64> {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut ArrayD<C64> {
        &mut self.amps
    }

    pub fn into_parts(self) -> (Vec<Axis>, ArrayD<C64>) {
        (self.axes, self.amps)
    }

    pub fn shape(&self) -> &[usize] {
        self.amps.shape()
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn axis_index(&self, label: &str) -> Result<usize> {
        self.axes
            .iter()
            .position(|a| a.label == label)
            .ok_or_else(|| NumericsError::UnknownAxis(label.to_string()))
    }

    pub fn axis(&self, label: &str) -> Result<&Axis> {
        Ok(&self.axes[self.axis_index(label)?])
    }

    pub fn basis(&self, label: &str) -> Result<Basis> {
        Ok(self.axis(label)?.basis)
    }

    /// Product of per-axis sample weights in the current bases.
    pub fn measure(&self) -> f64 {
        self.axes.iter().map(Axis::measure).product()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.measure()
    }

    /// Rescales to unit norm and returns the previous norm.
    pub fn normalize(&mut self) -> f64 {
        let n = self.norm_sqr().sqrt();
        if n > 0.0 {
            self.amps.mapv_inplace(|a| a / n);
        }
        n
    }

    fn check_layout(&self, other: &Self) -> Result<()> {
        if self.axes != other.axes {
            return Err(NumericsError::Shape(
                "wavefunctions have different axis layouts".into(),
            ));
        }
        Ok(())
    }

    /// ⟨self|other⟩ with the grid measure.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        self.check_layout(other)?;
        let s: C64 = self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(s * self.measure())
    }

    /// L² distance with the grid measure.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.check_layout(other)?;
        let s: f64 = self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        Ok((s * self.measure()).sqrt())
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_layout(other)?;
        Ok(self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Moves axis `label` into `basis` (no-op if already there).
    pub fn to_basis(mut self, label: &str, basis: Basis) -> Result<Self> {
        let d = self.axis_index(label)?;
        if self.axes[d].basis != basis {
            let t = AxisTransform::new(&self.axes[d].grid);
            t.apply(&mut self.amps, d, self.axes[d].basis);
            self.axes[d].basis = basis;
        }
        Ok(self)
    }

    /// Toggles axis `d` using a prepared transform.
    pub(crate) fn toggle_with(&mut self, d: usize, t: &AxisTransform) {
        t.apply(&mut self.amps, d, self.axes[d].basis);
        self.axes[d].basis = self.axes[d].basis.toggled();
    }

    /// Puts every axis into the basis given by `layout` (matched by label).
    pub fn with_bases_of(mut self, layout: &[Axis]) -> Result<Self> {
        for a in layout {
            self = self.to_basis(&a.label, a.basis)?;
        }
        Ok(self)
    }

    pub fn to_all_position(mut self) -> Result<Self> {
        let labels: Vec<String> = self.axes.iter().map(|a| a.label.clone()).collect();
        for l in labels {
            self = self.to_basis(&l, Basis::Position)?;
        }
        Ok(self)
    }

    /// Probability density along one axis in its current basis, summed over
    /// the other axes with their measure. Entries follow sample order.
    pub fn marginal(&self, label: &str) -> Result<Vec<f64>> {
        let d = self.axis_index(label)?;
        let other: f64 = self
            .axes
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != d)
            .map(|(_, a)| a.measure())
            .product();
        Ok(self
            .amps
            .axis_iter(NdAxis(d))
            .map(|slab| slab.iter().map(|a| a.norm_sqr()).sum::<f64>() * other)
            .collect())
    }

    /// Probability in the outer `fraction` of samples at each end of `label`.
    pub fn edge_probability(&self, label: &str, fraction: f64) -> Result<f64> {
        let d = self.axis_index(label)?;
        let n = self.axes[d].grid.n_points();
        let w = (fraction * n as f64).floor() as usize;
        if w == 0 {
            return Ok(0.0);
        }
        let m = self.marginal(label)?;
        let dx = self.axes[d].measure();
        let edge_indices: Vec<usize> = match self.axes[d].basis {
            Basis::Position => (0..w).chain(n - w..n).collect(),
            // In transform order the largest |k| sit in the middle.
            Basis::Momentum => (n / 2 - w..n / 2 + w).collect(),
        };
        Ok(edge_indices.into_iter().map(|i| m[i] * dx).sum())
    }

    /// Flattened amplitudes in row-major order.
    pub fn flat(&self) -> Vec<C64> {
        self.amps.iter().copied().collect()
    }

    /// Same layout with new row-major amplitudes.
    pub fn with_flat(&self, data: Vec<C64>) -> Result<Self> {
        let shape = self.amps.shape().to_vec();
        let amps = ArrayD::from_shape_vec(IxDyn(&shape), data)
            .map_err(|e| NumericsError::Shape(e.to_string()))?;
        Self::new(self.axes.clone(), amps)
    }
}

fn check_labels(axes: &[Axis]) -> Result<()> {
    for (i, a) in axes.iter().enumerate() {
        if axes[..i].iter().any(|b| b.label == a.label) {
            return Err(NumericsError::Config(format!(
                "duplicate axis label '{}'",
                a.label
            )));
        }
    }
    Ok(())
}
