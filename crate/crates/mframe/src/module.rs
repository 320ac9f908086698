//! Hilbert modules over a block C*-algebra and their vectors.
//!
//! Every module here is an orthogonal summand of a free module: it is stored
//! as an ambient rank `n` together with a self-adjoint idempotent `P` acting
//! on `A^n`, and its vectors are coordinate tuples fixed by `P`. Free modules
//! simply omit the projection. Keeping the ambient coordinates (instead of
//! re-coordinatizing the summand) makes dilation and complement
//! constructions literal block operations.
//!
//! The algebra-valued inner product is `<x,y> = sum_i x_i y_i*`, linear in
//! the first slot over the algebra, and the module norm is
//! `|x| = |<x,x>|^{1/2}`.

use std::ops::{Add, Sub};

use num_complex::Complex64;

use crate::algebra::{AlgElement, AlgebraDescriptor};
use crate::error::{Error, Result};
use crate::matrix::AlgMatrix;
use crate::DEFAULT_TOL;

/// An orthogonal summand `P(A^n)` of a free module.
#[derive(Debug, Clone, PartialEq)]
pub struct HilbertModule {
    algebra: AlgebraDescriptor,
    rank: usize,
    /// `None` means the free module (projection = identity).
    projection: Option<AlgMatrix>,
}

impl HilbertModule {
    /// The free module `A^n`.
    pub fn free(algebra: AlgebraDescriptor, rank: usize) -> Self {
        Self {
            algebra,
            rank,
            projection: None,
        }
    }

    /// The summand cut out by a self-adjoint idempotent.
    pub fn summand(algebra: AlgebraDescriptor, rank: usize, projection: AlgMatrix) -> Result<Self> {
        Self::summand_with_tol(algebra, rank, projection, DEFAULT_TOL)
    }

    pub fn summand_with_tol(
        algebra: AlgebraDescriptor,
        rank: usize,
        projection: AlgMatrix,
        tol: f64,
    ) -> Result<Self> {
        if projection.descriptor() != &algebra {
            return Err(Error::AlgebraMismatch {
                expected: algebra.blocks().to_vec(),
                found: projection.descriptor().blocks().to_vec(),
            });
        }
        if projection.rows() != rank || projection.cols() != rank {
            return Err(Error::ShapeMismatch(format!(
                "projection must be {rank}x{rank}, found {}x{}",
                projection.rows(),
                projection.cols()
            )));
        }
        let scale = tol * (1.0 + projection.opnorm());
        let idem = projection.then(&projection).sub(&projection).opnorm();
        if idem > scale {
            return Err(Error::Precondition(format!(
                "projection is not idempotent: defect {idem:.3e}"
            )));
        }
        let sa = projection.sub(&projection.adjoint()).opnorm();
        if sa > scale {
            return Err(Error::Precondition(format!(
                "projection is not self-adjoint: defect {sa:.3e}"
            )));
        }
        Ok(Self {
            algebra,
            rank,
            projection: Some(projection),
        })
    }

    pub fn algebra(&self) -> &AlgebraDescriptor {
        &self.algebra
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_free(&self) -> bool {
        self.projection.is_none()
    }

    pub fn projection_ref(&self) -> Option<&AlgMatrix> {
        self.projection.as_ref()
    }

    /// The projection as an explicit matrix (identity for free modules).
    pub fn projection_matrix(&self) -> AlgMatrix {
        match &self.projection {
            Some(p) => p.clone(),
            None => AlgMatrix::identity(&self.algebra, self.rank),
        }
    }

    /// Image of the ambient orthonormal basis: `{P e_j, j = 1..n}`.
    ///
    /// For the free module this is the standard orthonormal basis itself.
    pub fn standard_basis(&self) -> Vec<ModuleVector> {
        (0..self.rank)
            .map(|j| {
                let coords = match &self.projection {
                    Some(p) => p.row(j),
                    None => (0..self.rank)
                        .map(|i| {
                            if i == j {
                                AlgElement::unit(&self.algebra)
                            } else {
                                AlgElement::zero(&self.algebra)
                            }
                        })
                        .collect(),
                };
                ModuleVector::new_unchecked(self.clone(), coords)
            })
            .collect()
    }

    pub fn zero_vector(&self) -> ModuleVector {
        let coords = (0..self.rank)
            .map(|_| AlgElement::zero(&self.algebra))
            .collect();
        ModuleVector::new_unchecked(self.clone(), coords)
    }

    /// Orthogonal direct sum: concatenated coordinates, block-diagonal
    /// projection.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.algebra != other.algebra {
            return Err(Error::AlgebraMismatch {
                expected: self.algebra.blocks().to_vec(),
                found: other.algebra.blocks().to_vec(),
            });
        }
        let rank = self.rank + other.rank;
        if self.is_free() && other.is_free() {
            return Ok(Self::free(self.algebra.clone(), rank));
        }
        let p = self
            .projection_matrix()
            .direct_sum(&other.projection_matrix());
        Ok(Self {
            algebra: self.algebra.clone(),
            rank,
            projection: Some(p),
        })
    }

}

/// An element of a Hilbert module: an ambient coordinate tuple fixed by the
/// module projection.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleVector {
    module: HilbertModule,
    coords: Vec<AlgElement>,
}

pub(crate) fn apply_matrix(coords: &[AlgElement], m: &AlgMatrix) -> Vec<AlgElement> {
    assert_eq!(coords.len(), m.rows(), "coordinate count mismatch");
    (0..m.cols())
        .map(|j| {
            let mut acc = AlgElement::zero(m.descriptor());
            for (i, x) in coords.iter().enumerate() {
                acc = &acc + &(x * m.entry(i, j));
            }
            acc
        })
        .collect()
}

impl ModuleVector {
    /// Validating constructor: checks shapes and membership `P x = x`.
    ///
    /// Membership violations are an error, not silently projected away;
    /// the relative tolerance is `DEFAULT_TOL`.
    pub fn new(module: HilbertModule, coords: Vec<AlgElement>) -> Result<Self> {
        Self::with_tol(module, coords, DEFAULT_TOL)
    }

    pub fn with_tol(module: HilbertModule, coords: Vec<AlgElement>, tol: f64) -> Result<Self> {
        if coords.len() != module.rank() {
            return Err(Error::ShapeMismatch(format!(
                "vector has {} coordinates, module rank is {}",
                coords.len(),
                module.rank()
            )));
        }
        for c in &coords {
            if c.descriptor() != module.algebra() {
                return Err(Error::AlgebraMismatch {
                    expected: module.algebra().blocks().to_vec(),
                    found: c.descriptor().blocks().to_vec(),
                });
            }
        }
        let v = Self::new_unchecked(module, coords);
        let defect = v.membership_defect();
        if defect > tol * (1.0 + v.norm()) {
            return Err(Error::OutsideModule { index: 0, defect });
        }
        Ok(v)
    }

    pub(crate) fn new_unchecked(module: HilbertModule, coords: Vec<AlgElement>) -> Self {
        Self { module, coords }
    }

    pub fn module(&self) -> &HilbertModule {
        &self.module
    }

    pub fn coords(&self) -> &[AlgElement] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &AlgElement {
        &self.coords[i]
    }

    /// Norm of `P x - x`; zero (up to tolerance) for actual members.
    pub fn membership_defect(&self) -> f64 {
        match self.module.projection_ref() {
            None => 0.0,
            Some(p) => {
                let projected = apply_matrix(&self.coords, p);
                let diffs: Vec<AlgElement> = projected
                    .iter()
                    .zip(&self.coords)
                    .map(|(a, b)| a - b)
                    .collect();
                let d = Self::new_unchecked(
                    HilbertModule::free(self.module.algebra().clone(), self.coords.len()),
                    diffs,
                );
                d.norm()
            }
        }
    }

    fn check_same_module(&self, other: &Self) -> Result<()> {
        if self.module != other.module {
            return Err(Error::ModuleMismatch(
                "vectors belong to different modules".into(),
            ));
        }
        Ok(())
    }

    /// The algebra-valued inner product `<x,y> = sum_i x_i y_i*`.
    pub fn inner(&self, other: &Self) -> Result<AlgElement> {
        self.check_same_module(other)?;
        let mut acc = AlgElement::zero(self.module.algebra());
        for (a, b) in self.coords.iter().zip(&other.coords) {
            acc = &acc + &(a * &b.adjoint());
        }
        Ok(acc)
    }

    /// Left action of an algebra element, coordinate-wise multiplication.
    pub fn acted_on(&self, a: &AlgElement) -> Result<Self> {
        if a.descriptor() != self.module.algebra() {
            return Err(Error::AlgebraMismatch {
                expected: self.module.algebra().blocks().to_vec(),
                found: a.descriptor().blocks().to_vec(),
            });
        }
        let coords = self.coords.iter().map(|x| a * x).collect();
        Ok(Self::new_unchecked(self.module.clone(), coords))
    }

    /// Module norm `|<x,x>|^{1/2}`.
    pub fn norm(&self) -> f64 {
        let mut acc = AlgElement::zero(self.module.algebra());
        for x in &self.coords {
            acc = &acc + &(x * &x.adjoint());
        }
        acc.norm().sqrt()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::new_unchecked(
            self.module.clone(),
            self.coords.iter().map(|x| x.scale(factor)).collect(),
        )
    }

    pub fn scale_re(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    /// `x ⊕ y` inside the direct sum of the two modules.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        let module = self.module.direct_sum(other.module())?;
        let mut coords = self.coords.clone();
        coords.extend_from_slice(&other.coords);
        Ok(Self::new_unchecked(module, coords))
    }
}

impl Add for &ModuleVector {
    type Output = ModuleVector;
    fn add(self, rhs: &ModuleVector) -> ModuleVector {
        self.check_same_module(rhs).expect("module mismatch in +");
        let coords = self
            .coords
            .iter()
            .zip(&rhs.coords)
            .map(|(a, b)| a + b)
            .collect();
        ModuleVector::new_unchecked(self.module.clone(), coords)
    }
}

impl Sub for &ModuleVector {
    type Output = ModuleVector;
    fn sub(self, rhs: &ModuleVector) -> ModuleVector {
        self.check_same_module(rhs).expect("module mismatch in -");
        let coords = self
            .coords
            .iter()
            .zip(&rhs.coords)
            .map(|(a, b)| a - b)
            .collect();
        ModuleVector::new_unchecked(self.module.clone(), coords)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar_algebra() -> AlgebraDescriptor {
        AlgebraDescriptor::scalar()
    }

    #[test]
    fn orthonormal_basis_of_free_module() {
        let m = HilbertModule::free(scalar_algebra(), 3);
        let basis = m.standard_basis();
        for (i, ei) in basis.iter().enumerate() {
            for (j, ej) in basis.iter().enumerate() {
                let ip = ei.inner(ej).unwrap();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((ip.block(0)[(0, 0)].re - expect).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn action_and_norm() {
        let m = HilbertModule::free(scalar_algebra(), 2);
        let basis = m.standard_basis();
        let one = AlgElement::unit(&scalar_algebra());
        let x = basis[0].acted_on(&one.scale_re(2.0)).unwrap();
        assert!((x.norm() - 2.0).abs() < 1e-15);
        assert_eq!(m.zero_vector().norm(), 0.0);
        assert!((basis[0].norm() - 1.0).abs() < 1e-15);

        // <a e_1, e_1> = a
        let a = one.scale(Complex64::new(0.7, -0.3));
        let ax = basis[0].acted_on(&a).unwrap();
        let ip = ax.inner(&basis[0]).unwrap();
        assert!((&ip - &a).norm() < 1e-15);
    }

    #[test]
    fn projected_module_basis() {
        // P = diag(1, 0) on A^2: basis (e_1, 0)
        let alg = scalar_algebra();
        let mut p = AlgMatrix::zeros(&alg, 2, 2);
        p.set(0, 0, AlgElement::unit(&alg));
        let module = HilbertModule::summand(alg, 2, p).unwrap();
        let basis = module.standard_basis();
        assert!((basis[0].norm() - 1.0).abs() < 1e-15);
        assert_eq!(basis[1].norm(), 0.0);
    }

    #[test]
    fn membership_is_enforced() {
        let alg = scalar_algebra();
        let mut p = AlgMatrix::zeros(&alg, 2, 2);
        p.set(0, 0, AlgElement::unit(&alg));
        let module = HilbertModule::summand(alg.clone(), 2, p).unwrap();
        let outside = vec![AlgElement::zero(&alg), AlgElement::unit(&alg)];
        assert!(matches!(
            ModuleVector::new(module, outside),
            Err(Error::OutsideModule { .. })
        ));
    }

    #[test]
    fn non_idempotent_projection_rejected() {
        let alg = scalar_algebra();
        let half = AlgMatrix::identity(&alg, 2).scale_re(0.5);
        assert!(HilbertModule::summand(alg, 2, half).is_err());
    }
}
