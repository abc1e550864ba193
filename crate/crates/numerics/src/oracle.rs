use faer::complex_native::c64;
use faer::{Mat, Side};
use ndarray::{ArrayD, Axis as NdAxis, IxDyn};

use crate::{Axis, Basis, DiagonalKernel, NumericsError, Result, C64};

/// Largest dimension the dense oracle accepts.
pub const ORACLE_MAX_DIM: usize = 4096;

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<C64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![C64::new(0.0, 0.0); n * n],
        }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.data[i * n + j] = f(i, j);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.n + j]
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.n + j] += v;
    }

    /// max |H - H†| over all entries.
    pub fn hermitian_defect(&self) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..self.n {
            for j in i..self.n {
                d = d.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        d
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        (0..self.n)
            .map(|i| {
                self.data[i * self.n..(i + 1) * self.n]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }
}

/// Eigendecomposition of a Hermitian matrix, reusable for several times.
pub struct DenseOracle {
    n: usize,
    eigenvalues: Vec<f64>,
    // Column-major eigenvectors: vectors[k * n + i] = U[i, k].
    vectors: Vec<C64>,
}

impl DenseOracle {
    pub fn new(h: &DenseMatrix) -> Result<Self> {
        let n = h.dim();
        if n > ORACLE_MAX_DIM {
            return Err(NumericsError::TooLarge {
                dim: n,
                limit: ORACLE_MAX_DIM,
            });
        }
        let defect = h.hermitian_defect();
        if defect > 1e-10 {
            return Err(NumericsError::NotHermitian(defect));
        }
        let m = Mat::<c64>::from_fn(n, n, |i, j| {
            let v = h.get(i, j);
            c64::new(v.re, v.im)
        });
        let eig = m.selfadjoint_eigendecomposition(Side::Lower);
        let s = eig.s().column_vector();
        let u = eig.u();
        let eigenvalues = (0..n).map(|k| s.read(k).re).collect();
        let mut vectors = Vec::with_capacity(n * n);
        for k in 0..n {
            for i in 0..n {
                let v = u.read(i, k);
                vectors.push(C64::new(v.re, v.im));
            }
        }
        Ok(Self {
            n,
            eigenvalues,
            vectors,
        })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// exp(-iHt)ψ with ħ = 1.
    pub fn evolve(&self, psi: &[C64], t: f64) -> Result<Vec<C64>> {
        let n = self.n;
        if psi.len() != n {
            return Err(NumericsError::Shape(format!(
                "vector of length {} for a {n}-dimensional oracle",
                psi.len()
            )));
        }
        let mut out = vec![C64::new(0.0, 0.0); n];
        for k in 0..n {
            let col = &self.vectors[k * n..(k + 1) * n];
            let c: C64 = col.iter().zip(psi).map(|(u, p)| u.conj() * p).sum();
            let c = c * C64::from_polar(1.0, -self.eigenvalues[k] * t);
            for (o, u) in out.iter_mut().zip(col) {
                *o += u * c;
            }
        }
        Ok(out)
    }
}

/// exp(-iHt)ψ by eigendecomposition (ħ = 1).
pub fn dense_oracle_evolve(h: &DenseMatrix, psi: &[C64], t: f64) -> Result<Vec<C64>> {
    DenseOracle::new(h)?.evolve(psi, t)
}

/// Dense matrix of Σ kernels in the all-position basis of `axes`, with
/// row-major index order. Momentum-diagonal parts go through explicit DFT
/// matrices F[j][n] = e^{-i k_j x_n}/√N.
pub fn hamiltonian_matrix(axes: &[Axis], kernels: &[DiagonalKernel]) -> Result<DenseMatrix> {
    let shape: Vec<usize> = axes.iter().map(|a| a.grid.n_points()).collect();
    let dim: usize = shape.iter().product();
    if dim > ORACLE_MAX_DIM {
        return Err(NumericsError::TooLarge {
            dim,
            limit: ORACLE_MAX_DIM,
        });
    }
    let mut strides = vec![1usize; shape.len()];
    for d in (0..shape.len().saturating_sub(1)).rev() {
        strides[d] = strides[d + 1] * shape[d + 1];
    }
    let dft: Vec<Vec<Vec<C64>>> = axes
        .iter()
        .map(|a| {
            let n = a.grid.n_points();
            let norm = 1.0 / (n as f64).sqrt();
            (0..n)
                .map(|j| {
                    (0..n)
                        .map(|m| {
                            C64::from_polar(norm, -a.grid.wavenumber(j) * a.grid.coordinate(m))
                        })
                        .collect()
                })
                .collect()
        })
        .collect();

    let mut h = DenseMatrix::zeros(dim);
    for k in kernels {
        let mut acted: Vec<(usize, usize, Basis)> = Vec::new();
        for (i, (label, b)) in k.acts_on().iter().zip(k.basis_required()).enumerate() {
            let d = axes
                .iter()
                .position(|a| &a.label == label)
                .ok_or_else(|| NumericsError::UnknownAxis(label.clone()))?;
            acted.push((d, i, *b));
        }
        acted.sort_by_key(|x| x.0);
        let perm: Vec<usize> = acted.iter().map(|x| x.1).collect();
        let values = match k.values() {
            crate::KernelValues::Real(v) => v.mapv(|x| C64::new(x, 0.0)),
            crate::KernelValues::Complex(v) => v.clone(),
        };
        let values = values.permuted_axes(IxDyn(&perm)).as_standard_layout().to_owned();
        let sub_shape: Vec<usize> = acted.iter().map(|x| shape[x.0]).collect();
        if values.shape() != sub_shape.as_slice() {
            return Err(NumericsError::Shape(format!(
                "kernel '{}' does not match the axis grids",
                k.label()
            )));
        }
        let sub_dim: usize = sub_shape.iter().product();
        let sub_index = |flat: usize| -> Vec<usize> {
            let mut idx = vec![0; sub_shape.len()];
            let mut r = flat;
            for d in (0..sub_shape.len()).rev() {
                idx[d] = r % sub_shape[d];
                r /= sub_shape[d];
            }
            idx
        };

        // Sub-block M = W† D W over the acted axes.
        let mut block = vec![C64::new(0.0, 0.0); sub_dim * sub_dim];
        for c in 0..sub_dim {
            let ci = sub_index(c);
            let mut col = ArrayD::from_shape_fn(IxDyn(&sub_shape), |j| {
                let mut v = values[&j];
                for (s, (d, _, b)) in acted.iter().enumerate() {
                    v *= match b {
                        Basis::Momentum => dft[*d][j[s]][ci[s]],
                        Basis::Position => {
                            if j[s] == ci[s] {
                                C64::new(1.0, 0.0)
                            } else {
                                C64::new(0.0, 0.0)
                            }
                        }
                    };
                }
                v
            });
            for (s, (d, _, b)) in acted.iter().enumerate() {
                if *b == Basis::Momentum {
                    col = adjoint_mode_product(&col, s, &dft[*d]);
                }
            }
            for (r, v) in col.iter().enumerate() {
                block[r * sub_dim + c] = *v;
            }
        }

        let sub_offsets: Vec<usize> = (0..sub_dim)
            .map(|f| {
                sub_index(f)
                    .iter()
                    .zip(&acted)
                    .map(|(i, (d, _, _))| i * strides[*d])
                    .sum()
            })
            .collect();
        let rest: Vec<usize> = (0..shape.len())
            .filter(|d| !acted.iter().any(|x| x.0 == *d))
            .collect();
        let rest_dim: usize = rest.iter().map(|d| shape[*d]).product();
        for rf in 0..rest_dim {
            let mut off = 0;
            let mut r = rf;
            for d in rest.iter().rev() {
                off += (r % shape[*d]) * strides[*d];
                r /= shape[*d];
            }
            for (ri, ro) in sub_offsets.iter().enumerate() {
                for (ci, co) in sub_offsets.iter().enumerate() {
                    h.add_to(off + ro, off + co, block[ri * sub_dim + ci]);
                }
            }
        }
    }
    Ok(h)
}

/// out[.., r, ..] = Σ_j conj(F[j][r]) · a[.., j, ..] along `axis`.
fn adjoint_mode_product(a: &ArrayD<C64>, axis: usize, f: &[Vec<C64>]) -> ArrayD<C64> {
    let mut out = ArrayD::zeros(a.raw_dim());
    let n = f.len();
    for (lane_in, mut lane_out) in a
        .lanes(NdAxis(axis))
        .into_iter()
        .zip(out.lanes_mut(NdAxis(axis)))
    {
        for r in 0..n {
            let mut s = C64::new(0.0, 0.0);
            for j in 0..n {
                s += f[j][r].conj() * lane_in[j];
            }
            lane_out[r] = s;
        }
    }
    out
}
