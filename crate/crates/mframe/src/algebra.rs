//! Finite-dimensional C*-algebras as direct sums of complex matrix blocks.
//!
//! An algebra is described by its block dimensions `(d_1, ..., d_K)` and an
//! element is one `d_k x d_k` complex matrix per block. Products, the
//! involution and the norm are all blockwise; the C*-norm of an element is
//! the largest operator norm over its blocks. Positivity and functional
//! calculus reduce to Hermitian eigenproblems inside each block, which keeps
//! square roots, inverses and spectral projections exact up to dense-eigen
//! accuracy.
//!
//! Tolerances are relative throughout: a check at tolerance `tol` on an
//! element `a` uses the scale `tol * (1 + |a|)`, so decisions do not depend
//! on the overall scale of the data.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

/// Block dimensions `(d_1, ..., d_K)` of a direct sum of matrix algebras.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlgebraDescriptor {
    blocks: Vec<usize>,
}

impl AlgebraDescriptor {
    pub fn new(blocks: Vec<usize>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::ShapeMismatch("algebra needs at least one block".into()));
        }
        if blocks.iter().any(|&d| d == 0) {
            return Err(Error::ShapeMismatch("block dimensions must be positive".into()));
        }
        Ok(Self { blocks })
    }

    /// The complex numbers, a single `1 x 1` block.
    pub fn scalar() -> Self {
        Self { blocks: vec![1] }
    }

    /// The commutative algebra `C^m`, m blocks of size one. This is the
    /// discretized algebra of continuous functions on a grid of m points.
    pub fn diagonal(m: usize) -> Result<Self> {
        Self::new(vec![1; m])
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Total complex dimension `sum d_k^2`.
    pub fn complex_dimension(&self) -> usize {
        self.blocks.iter().map(|d| d * d).sum()
    }
}

/// Which scalar function to apply to the spectrum of a Hermitian element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectralFn {
    /// Positive square root; requires a positive element.
    Sqrt,
    /// Inverse; fails on numerically singular input.
    Inv,
    /// Pseudo-inverse; eigenvalues near zero are dropped.
    Pinv,
    /// Spectral projection onto the numerically nonzero part.
    RangeProj,
}

/// An element of a block matrix algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgElement {
    descriptor: AlgebraDescriptor,
    data: Vec<CMatrix>,
}

impl AlgElement {
    /// Build an element from per-block matrices, validating shapes.
    pub fn from_blocks(descriptor: AlgebraDescriptor, data: Vec<CMatrix>) -> Result<Self> {
        if data.len() != descriptor.block_count() {
            return Err(Error::ShapeMismatch(format!(
                "expected {} blocks, found {}",
                descriptor.block_count(),
                data.len()
            )));
        }
        for (k, (m, &d)) in data.iter().zip(descriptor.blocks()).enumerate() {
            if m.nrows() != d || m.ncols() != d {
                return Err(Error::ShapeMismatch(format!(
                    "block {k} must be {d}x{d}, found {}x{}",
                    m.nrows(),
                    m.ncols()
                )));
            }
        }
        Ok(Self { descriptor, data })
    }

    pub fn zero(descriptor: &AlgebraDescriptor) -> Self {
        let data = descriptor
            .blocks()
            .iter()
            .map(|&d| CMatrix::zeros(d, d))
            .collect();
        Self {
            descriptor: descriptor.clone(),
            data,
        }
    }

    /// The unit, an identity matrix in every block.
    pub fn unit(descriptor: &AlgebraDescriptor) -> Self {
        let data = descriptor.blocks().iter().map(|&d| linalg::identity(d)).collect();
        Self {
            descriptor: descriptor.clone(),
            data,
        }
    }

    /// An element of the diagonal algebra `C^m` from scalar values.
    pub fn from_diagonal_values(values: &[Complex64]) -> Result<Self> {
        let descriptor = AlgebraDescriptor::diagonal(values.len())?;
        let data = values
            .iter()
            .map(|v| CMatrix::from_element(1, 1, *v))
            .collect();
        Ok(Self { descriptor, data })
    }

    pub fn descriptor(&self) -> &AlgebraDescriptor {
        &self.descriptor
    }

    pub fn block(&self, k: usize) -> &CMatrix {
        &self.data[k]
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.data
    }

    fn check_same_descriptor(&self, other: &Self) -> Result<()> {
        if self.descriptor != other.descriptor {
            return Err(Error::AlgebraMismatch {
                expected: self.descriptor.blocks().to_vec(),
                found: other.descriptor.blocks().to_vec(),
            });
        }
        Ok(())
    }

    fn zip_blocks(&self, other: &Self, f: impl Fn(&CMatrix, &CMatrix) -> CMatrix) -> Self {
        let data = self
            .data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| f(a, b))
            .collect();
        Self {
            descriptor: self.descriptor.clone(),
            data,
        }
    }

    fn map_blocks(&self, f: impl Fn(&CMatrix) -> CMatrix) -> Self {
        Self {
            descriptor: self.descriptor.clone(),
            data: self.data.iter().map(f).collect(),
        }
    }

    /// The involution, blockwise conjugate transpose.
    pub fn adjoint(&self) -> Self {
        self.map_blocks(|m| m.adjoint())
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        self.map_blocks(|m| m.map(|z| z * factor))
    }

    pub fn scale_re(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    /// C*-norm: the largest blockwise operator norm.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(linalg::opnorm).fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from `a = a*` over all blocks.
    pub fn hermitian_defect(&self) -> f64 {
        self.data
            .iter()
            .map(linalg::hermitian_defect)
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_defect() <= tol * (1.0 + self.norm())
    }

    /// Positivity test: Hermitian within tolerance and no eigenvalue below
    /// `-tol * (1 + |a|)`. Non-Hermitian input yields `false`.
    pub fn is_positive(&self, tol: f64) -> bool {
        let scale = tol * (1.0 + self.norm());
        if self.hermitian_defect() > scale {
            return false;
        }
        self.data.iter().all(|m| {
            let (values, _) = linalg::hermitian_eigen(m);
            values.iter().all(|&v| v >= -scale)
        })
    }

    /// Smallest eigenvalue across blocks of a Hermitian element.
    pub fn min_eigenvalue(&self) -> f64 {
        self.data
            .iter()
            .filter(|m| m.nrows() > 0)
            .map(|m| linalg::hermitian_eigen(m).0[0])
            .fold(f64::INFINITY, f64::min)
    }

    /// Blockwise spectral calculus for Hermitian elements.
    ///
    /// The element is eigendecomposed per block and the scalar function is
    /// applied to the eigenvalues. Near-zero decisions use the uniform
    /// threshold `tol * |a|`, taken from the global norm so that all blocks
    /// are cut consistently.
    pub fn funcalc(&self, kind: SpectralFn, tol: f64) -> Result<Self> {
        let norm = self.norm();
        let herm_scale = tol * (1.0 + norm);
        let defect = self.hermitian_defect();
        if defect > herm_scale {
            return Err(Error::NotHermitian { deviation: defect });
        }
        let cut = tol * norm;
        let mut out = Vec::with_capacity(self.data.len());
        for (k, m) in self.data.iter().enumerate() {
            let (values, q) = linalg::hermitian_eigen(m);
            if kind == SpectralFn::Sqrt {
                if let Some(&bad) = values.iter().find(|&&v| v < -herm_scale) {
                    return Err(Error::NotPositive {
                        block: k,
                        eigenvalue: bad,
                    });
                }
            }
            if kind == SpectralFn::Inv {
                if let Some(&bad) = values.iter().find(|&&v| v.abs() <= cut) {
                    return Err(Error::Singular {
                        block: k,
                        eigenvalue: bad,
                    });
                }
            }
            let n = m.nrows();
            let mut diag = CMatrix::zeros(n, n);
            for (i, &v) in values.iter().enumerate() {
                let fv = match kind {
                    SpectralFn::Sqrt => v.max(0.0).sqrt(),
                    SpectralFn::Inv => 1.0 / v,
                    SpectralFn::Pinv => {
                        if v.abs() <= cut {
                            0.0
                        } else {
                            1.0 / v
                        }
                    }
                    SpectralFn::RangeProj => {
                        if v.abs() <= cut {
                            0.0
                        } else {
                            1.0
                        }
                    }
                };
                diag[(i, i)] = Complex64::new(fv, 0.0);
            }
            out.push(&q * diag * q.adjoint());
        }
        Ok(Self {
            descriptor: self.descriptor.clone(),
            data: out,
        })
    }

    pub fn sqrt(&self, tol: f64) -> Result<Self> {
        self.funcalc(SpectralFn::Sqrt, tol)
    }

    pub fn inv(&self, tol: f64) -> Result<Self> {
        self.funcalc(SpectralFn::Inv, tol)
    }

    pub fn pinv(&self, tol: f64) -> Result<Self> {
        self.funcalc(SpectralFn::Pinv, tol)
    }

    pub fn range_projection(&self, tol: f64) -> Result<Self> {
        self.funcalc(SpectralFn::RangeProj, tol)
    }

    /// Polar factorization `a = v * r` with `r = (a* a)^{1/2}` positive and
    /// `v` a partial isometry whose initial space is the range of `r`.
    ///
    /// For rank-deficient input `v` is not extended to a unitary; it acts as
    /// zero on the kernel of `r`. Invertible input gives unitary `v`.
    pub fn polar(&self, tol: f64) -> (Self, Self) {
        let cut = tol * self.norm();
        let mut isos = Vec::with_capacity(self.data.len());
        let mut roots = Vec::with_capacity(self.data.len());
        for m in &self.data {
            let (v, r) = linalg::right_polar(m, cut);
            isos.push(v);
            roots.push(r);
        }
        (
            Self {
                descriptor: self.descriptor.clone(),
                data: isos,
            },
            Self {
                descriptor: self.descriptor.clone(),
                data: roots,
            },
        )
    }
}

impl fmt::Display for AlgElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, m) in self.data.iter().enumerate() {
            writeln!(f, "block {k} ({d}x{d}):", d = m.nrows())?;
            write!(f, "{m:.6}")?;
        }
        Ok(())
    }
}

impl Add for &AlgElement {
    type Output = AlgElement;
    fn add(self, rhs: &AlgElement) -> AlgElement {
        self.check_same_descriptor(rhs).expect("algebra mismatch in +");
        self.zip_blocks(rhs, |a, b| a + b)
    }
}

impl Sub for &AlgElement {
    type Output = AlgElement;
    fn sub(self, rhs: &AlgElement) -> AlgElement {
        self.check_same_descriptor(rhs).expect("algebra mismatch in -");
        self.zip_blocks(rhs, |a, b| a - b)
    }
}

impl Mul for &AlgElement {
    type Output = AlgElement;
    fn mul(self, rhs: &AlgElement) -> AlgElement {
        self.check_same_descriptor(rhs).expect("algebra mismatch in *");
        self.zip_blocks(rhs, |a, b| a * b)
    }
}

impl Neg for &AlgElement {
    type Output = AlgElement;
    fn neg(self) -> AlgElement {
        self.scale_re(-1.0)
    }
}
