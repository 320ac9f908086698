//! Matrices over a block C*-algebra and their complex flattening.
//!
//! An `n x m` matrix over the algebra acts on coordinate rows from the right:
//! `(x M)_j = sum_i x_i m_{ij}`. Left multiplication by algebra elements then
//! commutes with every such matrix, which is what makes the maps module
//! operators.
//!
//! `flatten` realizes the isomorphism between `n x m` matrices over
//! `⊕_k M_{d_k}(C)` and tuples of complex `(n d_k) x (m d_k)` matrices, one
//! per block. It is multiplicative in pipeline order
//! (`flatten(A then B) = flatten(A) * flatten(B)`), sends the adjoint to the
//! conjugate transpose exactly, and `unflatten(flatten(M)) == M` bitwise.
//! All spectral work (norms, functional calculus, polar factors, kernels,
//! range projections) happens on the flattened blocks; blocks are invariant
//! subspaces, so nothing ever mixes them.

use num_complex::Complex64;

use crate::algebra::{AlgebraDescriptor, AlgElement, SpectralFn};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

/// A rectangular matrix with entries in a block C*-algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgMatrix {
    descriptor: AlgebraDescriptor,
    rows: usize,
    cols: usize,
    /// Row-major entries, `entries[i * cols + j]`.
    entries: Vec<AlgElement>,
}

impl AlgMatrix {
    pub fn zeros(descriptor: &AlgebraDescriptor, rows: usize, cols: usize) -> Self {
        let entries = (0..rows * cols)
            .map(|_| AlgElement::zero(descriptor))
            .collect();
        Self {
            descriptor: descriptor.clone(),
            rows,
            cols,
            entries,
        }
    }

    pub fn identity(descriptor: &AlgebraDescriptor, n: usize) -> Self {
        let mut m = Self::zeros(descriptor, n, n);
        for i in 0..n {
            m.set(i, i, AlgElement::unit(descriptor));
        }
        m
    }

    pub fn from_entries(
        descriptor: &AlgebraDescriptor,
        rows: usize,
        cols: usize,
        entries: Vec<AlgElement>,
    ) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "expected {} entries, found {}",
                rows * cols,
                entries.len()
            )));
        }
        for e in &entries {
            if e.descriptor() != descriptor {
                return Err(Error::AlgebraMismatch {
                    expected: descriptor.blocks().to_vec(),
                    found: e.descriptor().blocks().to_vec(),
                });
            }
        }
        Ok(Self {
            descriptor: descriptor.clone(),
            rows,
            cols,
            entries,
        })
    }

    pub fn descriptor(&self) -> &AlgebraDescriptor {
        &self.descriptor
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &AlgElement {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: AlgElement) {
        assert_eq!(value.descriptor(), &self.descriptor, "algebra mismatch");
        self.entries[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> Vec<AlgElement> {
        (0..self.cols).map(|j| self.entry(i, j).clone()).collect()
    }

    /// Matrix product in pipeline order: `self` applied first, then `rhs`.
    pub fn then(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "inner dimension mismatch");
        assert_eq!(self.descriptor, rhs.descriptor, "algebra mismatch");
        let mut out = Self::zeros(&self.descriptor, self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = AlgElement::zero(&self.descriptor);
                for k in 0..self.cols {
                    acc = &acc + &(self.entry(i, k) * rhs.entry(k, j));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    /// Conjugate transpose over the algebra: `(M*)_{ij} = (m_{ji})*`.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(&self.descriptor, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.entry(i, j).adjoint());
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a + b)
            .collect();
        Self {
            descriptor: self.descriptor.clone(),
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a - b)
            .collect();
        Self {
            descriptor: self.descriptor.clone(),
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            descriptor: self.descriptor.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e.scale(factor)).collect(),
        }
    }

    pub fn scale_re(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(&self, rhs: &Self) -> Self {
        assert_eq!(self.descriptor, rhs.descriptor, "algebra mismatch");
        let mut out = Self::zeros(
            &self.descriptor,
            self.rows + rhs.rows,
            self.cols + rhs.cols,
        );
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.entry(i, j).clone());
            }
        }
        for i in 0..rhs.rows {
            for j in 0..rhs.cols {
                out.set(self.rows + i, self.cols + j, rhs.entry(i, j).clone());
            }
        }
        out
    }

    /// One complex matrix per algebra block, size `(rows d_k) x (cols d_k)`.
    pub fn flatten(&self) -> Vec<CMatrix> {
        self.descriptor
            .blocks()
            .iter()
            .enumerate()
            .map(|(k, &d)| {
                let mut m = CMatrix::zeros(self.rows * d, self.cols * d);
                for i in 0..self.rows {
                    for j in 0..self.cols {
                        let blk = self.entry(i, j).block(k);
                        for r in 0..d {
                            for c in 0..d {
                                m[(i * d + r, j * d + c)] = blk[(r, c)];
                            }
                        }
                    }
                }
                m
            })
            .collect()
    }

    /// Inverse of [`flatten`]; shapes must match the descriptor exactly.
    pub fn unflatten(
        descriptor: &AlgebraDescriptor,
        rows: usize,
        cols: usize,
        blocks: &[CMatrix],
    ) -> Result<Self> {
        if blocks.len() != descriptor.block_count() {
            return Err(Error::ShapeMismatch(format!(
                "expected {} flattened blocks, found {}",
                descriptor.block_count(),
                blocks.len()
            )));
        }
        for (k, (&d, m)) in descriptor.blocks().iter().zip(blocks).enumerate() {
            if m.nrows() != rows * d || m.ncols() != cols * d {
                return Err(Error::ShapeMismatch(format!(
                    "flattened block {k} must be {}x{}, found {}x{}",
                    rows * d,
                    cols * d,
                    m.nrows(),
                    m.ncols()
                )));
            }
        }
        let mut out = Self::zeros(descriptor, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                let data = descriptor
                    .blocks()
                    .iter()
                    .enumerate()
                    .map(|(k, &d)| {
                        CMatrix::from_fn(d, d, |r, c| blocks[k][(i * d + r, j * d + c)])
                    })
                    .collect();
                out.set(i, j, AlgElement::from_blocks(descriptor.clone(), data)?);
            }
        }
        Ok(out)
    }

    /// Trace of the flattened matrix summed over all blocks.
    pub fn flat_trace(&self) -> Complex64 {
        assert_eq!(self.rows, self.cols, "trace needs a square matrix");
        let mut acc = Complex64::ZERO;
        for i in 0..self.rows {
            for block in self.entry(i, i).blocks() {
                acc += block.trace();
            }
        }
        acc
    }

    /// Total flattened dimension `rows * sum_k d_k` of a square matrix.
    pub fn flat_dimension(&self) -> usize {
        self.rows * self.descriptor.blocks().iter().sum::<usize>()
    }

    /// Operator norm of the flattened matrix, max over blocks.
    pub fn opnorm(&self) -> f64 {
        self.flatten().iter().map(linalg::opnorm).fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from self-adjointness across blocks.
    pub fn hermitian_defect(&self) -> f64 {
        self.flatten()
            .iter()
            .map(linalg::hermitian_defect)
            .fold(0.0, f64::max)
    }

    /// Hermitian spectral calculus on the flattened blocks.
    ///
    /// The near-zero threshold `tol * |M|` uses the global norm so every
    /// block is cut at the same level; the result therefore unflattens to a
    /// well-defined matrix over the algebra.
    pub fn funcalc(&self, kind: SpectralFn, tol: f64) -> Result<Self> {
        assert_eq!(self.rows, self.cols, "functional calculus needs a square matrix");
        let norm = self.opnorm();
        let herm_scale = tol * (1.0 + norm);
        let defect = self.hermitian_defect();
        if defect > herm_scale {
            return Err(Error::NotHermitian { deviation: defect });
        }
        let cut = tol * norm;
        let mut out_blocks = Vec::new();
        for (k, m) in self.flatten().iter().enumerate() {
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
            out_blocks.push(&q * diag * q.adjoint());
        }
        Self::unflatten(&self.descriptor, self.rows, self.cols, &out_blocks)
    }

    /// Polar factorization in operator order: `M = R then V` per block, i.e.
    /// the operator is "apply the positive part, then the partial isometry".
    ///
    /// Returns `(V, R)` with `R = flatten^{-1}((m m^H)^{1/2})` and `V` a
    /// partial isometry supported on the range of `R`.
    pub fn polar(&self, tol: f64) -> Result<(Self, Self)> {
        let cut = tol * self.opnorm();
        let mut iso_blocks = Vec::new();
        let mut root_blocks = Vec::new();
        for m in self.flatten() {
            // m = r * v with r = (m m^H)^{1/2}: right-polar the adjoint.
            let (v_adj, r) = linalg::right_polar(&m.adjoint(), cut);
            iso_blocks.push(v_adj.adjoint());
            root_blocks.push(r);
        }
        let v = Self::unflatten(&self.descriptor, self.rows, self.cols, &iso_blocks)?;
        let r = Self::unflatten(&self.descriptor, self.rows, self.rows, &root_blocks)?;
        Ok((v, r))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flatten_identity() {
        let desc = AlgebraDescriptor::new(vec![2]).unwrap();
        let id = AlgMatrix::identity(&desc, 2);
        let flat = id.flatten();
        assert_eq!(flat.len(), 1);
        assert!(linalg::opnorm(&(&flat[0] - linalg::identity(4))) == 0.0);
    }

    #[test]
    fn flatten_round_trip_bitwise() {
        let desc = AlgebraDescriptor::new(vec![2, 1]).unwrap();
        let mut m = AlgMatrix::zeros(&desc, 2, 3);
        let mut counter = 0.3f64;
        for i in 0..2 {
            for j in 0..3 {
                let blocks = desc
                    .blocks()
                    .iter()
                    .map(|&d| {
                        CMatrix::from_fn(d, d, |r, c| {
                            counter += 1.0;
                            Complex64::new(counter + r as f64, counter - c as f64)
                        })
                    })
                    .collect();
                m.set(i, j, AlgElement::from_blocks(desc.clone(), blocks).unwrap());
            }
        }
        let back = AlgMatrix::unflatten(&desc, 2, 3, &m.flatten()).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn flatten_is_multiplicative_and_respects_adjoint() {
        let desc = AlgebraDescriptor::new(vec![2]).unwrap();
        let a = {
            let mut m = AlgMatrix::zeros(&desc, 2, 2);
            let e = CMatrix::from_row_slice(
                2,
                2,
                &[
                    Complex64::new(1.0, 0.5),
                    Complex64::new(0.0, -1.0),
                    Complex64::new(2.0, 0.0),
                    Complex64::new(0.3, 0.7),
                ],
            );
            m.set(0, 1, AlgElement::from_blocks(desc.clone(), vec![e]).unwrap());
            m.set(1, 0, AlgElement::unit(&desc));
            m
        };
        let b = AlgMatrix::identity(&desc, 2).scale(Complex64::new(0.0, 1.0));
        let prod = a.then(&b);
        let flat_prod = &a.flatten()[0] * &b.flatten()[0];
        assert!(linalg::opnorm(&(&prod.flatten()[0] - flat_prod)) < 1e-13);
        assert!(linalg::opnorm(&(&a.adjoint().flatten()[0] - a.flatten()[0].adjoint())) == 0.0);
    }

    #[test]
    fn pinv_on_flat_diag() {
        let desc = AlgebraDescriptor::scalar();
        let mut m = AlgMatrix::zeros(&desc, 2, 2);
        m.set(0, 0, AlgElement::unit(&desc).scale_re(2.0));
        let p = m.funcalc(SpectralFn::Pinv, 1e-9).unwrap();
        assert!((p.entry(0, 0).block(0)[(0, 0)].re - 0.5).abs() < 1e-12);
        assert!(p.entry(1, 1).norm() < 1e-12);
    }
}
