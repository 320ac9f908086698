//! Adjointable operators between Hilbert modules.
//!
//! An operator `T: H -> K` between summands of `A^n` and `A^m` is stored as
//! an `n x m` matrix over the algebra acting on coordinate rows,
//! `T(x)_k = sum_i x_i m_{ik}`; left linearity over the algebra is automatic
//! in this representation. Operators are kept compressed,
//! `P_K T P_H = T`, so the matrix already vanishes on the orthogonal
//! complements.
//!
//! Composition is written in pipeline order: `s.then(t)` applies `s` first.
//! Spectral computations (functional calculus, polar parts, range
//! projections, kernels) run on the flattened complex blocks and are pulled
//! back through `unflatten`; cut-offs always use the global operator norm so
//! all blocks are treated consistently.

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::SpectralFn;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::matrix::AlgMatrix;
use crate::module::{apply_matrix, HilbertModule, ModuleVector};
use crate::DEFAULT_TOL;

/// An adjointable module map, `T(x)_k = sum_i x_i m_{ik}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleOperator {
    source: HilbertModule,
    target: HilbertModule,
    matrix: AlgMatrix,
}

/// Numerical report on the standard operator predicates.
#[derive(Debug, Clone, Serialize)]
pub struct OpPredicates {
    pub is_unitary: bool,
    pub is_partial_isometry: bool,
    pub is_projection: bool,
    pub is_invertible: bool,
    /// `max(|T*T - I_H|, |T T* - I_K|)` with the module identities.
    pub unitary_defect: f64,
    /// `|T T* T - T|`.
    pub partial_isometry_defect: f64,
    /// `|T^2 - T| + |T* - T|`; only defined for square operators.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub projection_defect: Option<f64>,
    /// Smallest restricted singular value across blocks, if any content.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_singular_value: Option<f64>,
    pub norm: f64,
}

impl ModuleOperator {
    pub fn new(source: HilbertModule, target: HilbertModule, matrix: AlgMatrix) -> Result<Self> {
        Self::with_tol(source, target, matrix, DEFAULT_TOL)
    }

    pub fn with_tol(
        source: HilbertModule,
        target: HilbertModule,
        matrix: AlgMatrix,
        tol: f64,
    ) -> Result<Self> {
        if matrix.descriptor() != source.algebra() || source.algebra() != target.algebra() {
            return Err(Error::AlgebraMismatch {
                expected: source.algebra().blocks().to_vec(),
                found: matrix.descriptor().blocks().to_vec(),
            });
        }
        if matrix.rows() != source.rank() || matrix.cols() != target.rank() {
            return Err(Error::ShapeMismatch(format!(
                "operator matrix must be {}x{}, found {}x{}",
                source.rank(),
                target.rank(),
                matrix.rows(),
                matrix.cols()
            )));
        }
        let op = Self {
            source,
            target,
            matrix,
        };
        let defect = op.compression_defect();
        if defect > tol * (1.0 + op.norm()) {
            return Err(Error::Precondition(format!(
                "operator is not compressed to its modules: defect {defect:.3e}"
            )));
        }
        Ok(op)
    }

    pub(crate) fn new_unchecked(
        source: HilbertModule,
        target: HilbertModule,
        matrix: AlgMatrix,
    ) -> Self {
        Self {
            source,
            target,
            matrix,
        }
    }

    /// The identity of a module (the projection matrix of the summand).
    pub fn identity(module: &HilbertModule) -> Self {
        let matrix = module.projection_matrix();
        Self::new_unchecked(module.clone(), module.clone(), matrix)
    }

    pub fn zero(source: &HilbertModule, target: &HilbertModule) -> Self {
        let matrix = AlgMatrix::zeros(source.algebra(), source.rank(), target.rank());
        Self::new_unchecked(source.clone(), target.clone(), matrix)
    }

    /// Rebuild an operator from flattened complex blocks.
    pub fn from_flat_blocks(
        source: &HilbertModule,
        target: &HilbertModule,
        blocks: &[CMatrix],
    ) -> Result<Self> {
        let matrix = AlgMatrix::unflatten(
            source.algebra(),
            source.rank(),
            target.rank(),
            blocks,
        )?;
        Self::new(source.clone(), target.clone(), matrix)
    }

    pub fn source(&self) -> &HilbertModule {
        &self.source
    }

    pub fn target(&self) -> &HilbertModule {
        &self.target
    }

    pub fn matrix(&self) -> &AlgMatrix {
        &self.matrix
    }

    pub fn flatten(&self) -> Vec<CMatrix> {
        self.matrix.flatten()
    }

    pub fn norm(&self) -> f64 {
        self.matrix.opnorm()
    }

    /// `|P_K T P_H - T|`; zero for properly compressed operators.
    pub fn compression_defect(&self) -> f64 {
        let compressed = self
            .source
            .projection_matrix()
            .then(&self.matrix)
            .then(&self.target.projection_matrix());
        compressed.sub(&self.matrix).opnorm()
    }

    pub fn apply(&self, x: &ModuleVector) -> Result<ModuleVector> {
        if x.module() != &self.source {
            return Err(Error::ModuleMismatch(
                "vector is not in the source module of the operator".into(),
            ));
        }
        let coords = apply_matrix(x.coords(), &self.matrix);
        Ok(ModuleVector::new_unchecked(self.target.clone(), coords))
    }

    /// Pipeline composition: apply `self` first, then `next`.
    pub fn then(&self, next: &Self) -> Result<Self> {
        if self.target != next.source {
            return Err(Error::ModuleMismatch(
                "pipeline composition needs matching middle module".into(),
            ));
        }
        Ok(Self::new_unchecked(
            self.source.clone(),
            next.target.clone(),
            self.matrix.then(&next.matrix),
        ))
    }

    /// The adjoint `T*: K -> H`, `<T x, y> = <x, T* y>`.
    pub fn adjoint(&self) -> Self {
        Self::new_unchecked(
            self.target.clone(),
            self.source.clone(),
            self.matrix.adjoint(),
        )
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if self.source != rhs.source || self.target != rhs.target {
            return Err(Error::ModuleMismatch("operator sum needs equal modules".into()));
        }
        Ok(Self::new_unchecked(
            self.source.clone(),
            self.target.clone(),
            self.matrix.add(&rhs.matrix),
        ))
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        if self.source != rhs.source || self.target != rhs.target {
            return Err(Error::ModuleMismatch(
                "operator difference needs equal modules".into(),
            ));
        }
        Ok(Self::new_unchecked(
            self.source.clone(),
            self.target.clone(),
            self.matrix.sub(&rhs.matrix),
        ))
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::new_unchecked(
            self.source.clone(),
            self.target.clone(),
            self.matrix.scale(factor),
        )
    }

    pub fn scale_re(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    fn require_square(&self) -> Result<()> {
        if self.source != self.target {
            return Err(Error::ModuleMismatch(
                "operation needs an operator from a module to itself".into(),
            ));
        }
        Ok(())
    }

    /// Hermitian functional calculus on the flattened blocks.
    pub fn funcalc(&self, kind: SpectralFn, tol: f64) -> Result<Self> {
        self.require_square()?;
        let matrix = self.matrix.funcalc(kind, tol)?;
        Ok(Self::new_unchecked(
            self.source.clone(),
            self.target.clone(),
            matrix,
        ))
    }

    /// Polar factorization `T = V R` (apply `R` first): `R = (T* T)^{1/2}`
    /// positive on the source module, `V` a partial isometry from the range
    /// of `R` onto the range of `T`. Unitary `V` for invertible `T`.
    pub fn polar(&self, tol: f64) -> Result<(Self, Self)> {
        let (v, r) = self.matrix.polar(tol)?;
        Ok((
            Self::new_unchecked(self.source.clone(), self.target.clone(), v),
            Self::new_unchecked(self.source.clone(), self.source.clone(), r),
        ))
    }

    /// The orthogonal projection onto the closure of `ran(T)`, as an
    /// operator on the target module: the spectral projection of `T T*`
    /// onto eigenvalues above `tol * |T|^2`.
    pub fn range_projection(&self, tol: f64) -> Result<Self> {
        let gram = self.matrix.adjoint().then(&self.matrix);
        let proj = gram.funcalc(SpectralFn::RangeProj, tol)?;
        Ok(Self::new_unchecked(
            self.target.clone(),
            self.target.clone(),
            proj,
        ))
    }

    /// Per-block orthonormal range bases of the source and target module
    /// projections (columns, in flattened coordinates).
    fn module_range_bases(module: &HilbertModule) -> Vec<CMatrix> {
        module
            .projection_matrix()
            .flatten()
            .iter()
            .map(linalg::projection_range_basis)
            .collect()
    }

    /// Flattened blocks restricted to the module ranges on both sides.
    ///
    /// Block `k` becomes the `r_source x r_target` matrix `Q_s^H M Q_t`;
    /// its singular values are the singular values of `T` as a map
    /// `H -> K`, without the artificial zeros of the ambient complements.
    pub fn restricted_blocks(&self) -> Vec<CMatrix> {
        let qs = Self::module_range_bases(&self.source);
        let qt = Self::module_range_bases(&self.target);
        self.flatten()
            .iter()
            .zip(qs.iter().zip(qt.iter()))
            .map(|(m, (s, t))| s.adjoint() * m * t)
            .collect()
    }

    /// Eigenvalues of a self-adjoint operator of a module onto itself,
    /// restricted to the range of the module projection. The artificial
    /// zeros contributed by the ambient complement do not appear.
    pub fn restricted_hermitian_eigenvalues(&self) -> Vec<f64> {
        let qs = Self::module_range_bases(&self.source);
        let mut out = Vec::new();
        for (m, q) in self.flatten().iter().zip(qs.iter()) {
            if q.ncols() == 0 {
                continue;
            }
            let restricted = q.adjoint() * m * q;
            let (values, _) = linalg::hermitian_eigen(&restricted);
            out.extend(values);
        }
        out
    }

    /// Orthonormal bases of the numerical kernels of each flattened block,
    /// restricted to the source module. Each entry holds the kernel vectors
    /// as rows of a matrix with `source_rank * d_k` columns.
    pub fn kernel_basis(&self, tol: f64) -> Vec<CMatrix> {
        let threshold = tol * self.norm().max(1.0);
        let qs = Self::module_range_bases(&self.source);
        self.flatten()
            .iter()
            .zip(qs.iter())
            .map(|(m, q)| {
                let reduced = q.adjoint() * m;
                let inner = linalg::left_kernel_rows(&reduced, threshold);
                inner * q.adjoint()
            })
            .collect()
    }

    /// Defect norms and derived predicate flags at an absolute tolerance.
    pub fn predicates(&self, tol: f64) -> OpPredicates {
        let norm = self.norm();
        let adj = self.adjoint();
        let id_source = Self::identity(&self.source);
        let id_target = Self::identity(&self.target);

        let tt = self.then(&adj).expect("shape ok");
        let tt_star = adj.then(self).expect("shape ok");
        let unitary_defect = tt
            .sub(&id_source)
            .expect("shape ok")
            .norm()
            .max(tt_star.sub(&id_target).expect("shape ok").norm());

        let vvv = self.then(&adj).and_then(|m| m.then(self)).expect("shape ok");
        let partial_isometry_defect = vvv.sub(self).expect("shape ok").norm();

        let projection_defect = if self.source == self.target {
            let idem = self.then(self).expect("shape ok").sub(self).expect("shape ok");
            Some(idem.norm() + adj.sub(self).expect("shape ok").norm())
        } else {
            None
        };

        let mut min_sv: Option<f64> = None;
        let mut square_everywhere = true;
        for b in self.restricted_blocks() {
            if b.nrows() != b.ncols() {
                square_everywhere = false;
            }
            if b.nrows().min(b.ncols()) == 0 {
                if b.nrows() != b.ncols() {
                    min_sv = Some(0.0);
                }
                continue;
            }
            let values = linalg::singular_values(&b);
            let smallest = *values.last().expect("non-empty block");
            min_sv = Some(min_sv.map_or(smallest, |m: f64| m.min(smallest)));
        }

        let is_invertible = square_everywhere
            && min_sv.map_or(true, |s| s > tol * norm.max(1.0));

        OpPredicates {
            is_unitary: unitary_defect <= tol,
            is_partial_isometry: partial_isometry_defect <= tol,
            is_projection: projection_defect.map_or(false, |d| d <= tol),
            is_invertible,
            unitary_defect,
            partial_isometry_defect,
            projection_defect,
            min_singular_value: min_sv,
            norm,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgElement, AlgebraDescriptor};

    fn free(rank: usize) -> HilbertModule {
        HilbertModule::free(AlgebraDescriptor::scalar(), rank)
    }

    fn op_from_rows(source: &HilbertModule, target: &HilbertModule, rows: &[&[f64]]) -> ModuleOperator {
        let alg = source.algebra().clone();
        let mut m = AlgMatrix::zeros(&alg, source.rank(), target.rank());
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, AlgElement::unit(&alg).scale_re(v));
            }
        }
        ModuleOperator::new(source.clone(), target.clone(), m).unwrap()
    }

    #[test]
    fn identity_applies() {
        let h = free(3);
        let id = ModuleOperator::identity(&h);
        let basis = h.standard_basis();
        for e in &basis {
            let out = id.apply(e).unwrap();
            assert!((&out - e).norm() < 1e-15);
        }
    }

    #[test]
    fn adjoint_is_involutive_and_compatible_with_inner() {
        let h = free(2);
        let k = free(3);
        let t = op_from_rows(&h, &k, &[&[1.0, 2.0, 0.5], &[0.0, -1.0, 3.0]]);
        assert_eq!(t.adjoint().adjoint(), t);

        let xs = h.standard_basis();
        let ys = k.standard_basis();
        for x in &xs {
            for y in &ys {
                let lhs = t.apply(x).unwrap().inner(y).unwrap();
                let rhs = x.inner(&t.adjoint().apply(y).unwrap()).unwrap();
                assert!((&lhs - &rhs).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn funcalc_and_polar() {
        let h = free(2);
        let four = ModuleOperator::identity(&h).scale_re(4.0);
        let root = four.funcalc(SpectralFn::Sqrt, 1e-9).unwrap();
        assert!(root.sub(&ModuleOperator::identity(&h).scale_re(2.0)).unwrap().norm() < 1e-12);

        // rotation is unitary: polar returns (U, I)
        let alg = AlgebraDescriptor::scalar();
        let mut m = AlgMatrix::zeros(&alg, 2, 2);
        let (c, s) = (0.6, 0.8);
        m.set(0, 0, AlgElement::unit(&alg).scale_re(c));
        m.set(0, 1, AlgElement::unit(&alg).scale_re(s));
        m.set(1, 0, AlgElement::unit(&alg).scale_re(-s));
        m.set(1, 1, AlgElement::unit(&alg).scale_re(c));
        let u = ModuleOperator::new(h.clone(), h.clone(), m).unwrap();
        let (v, r) = u.polar(1e-9).unwrap();
        assert!(v.sub(&u).unwrap().norm() < 1e-10);
        assert!(r.sub(&ModuleOperator::identity(&h)).unwrap().norm() < 1e-10);

        let diag = op_from_rows(&h, &h, &[&[2.0, 0.0], &[0.0, 0.0]]);
        let pinv = diag.funcalc(SpectralFn::Pinv, 1e-9).unwrap();
        let expect = op_from_rows(&h, &h, &[&[0.5, 0.0], &[0.0, 0.0]]);
        assert!(pinv.sub(&expect).unwrap().norm() < 1e-12);
    }

    #[test]
    fn polar_reconstructs_general_maps() {
        let h = free(2);
        let k = free(3);
        let t = op_from_rows(&h, &k, &[&[1.0, 0.2, -0.7], &[0.0, 2.0, 1.0]]);
        let (v, r) = t.polar(1e-9).unwrap();
        let back = r.then(&v).unwrap();
        assert!(back.sub(&t).unwrap().norm() < 1e-10 * (1.0 + t.norm()));
        let p = v.predicates(1e-9);
        assert!(p.is_partial_isometry, "defect {}", p.partial_isometry_defect);
    }

    #[test]
    fn range_projection_cases() {
        let h = free(2);
        let id = ModuleOperator::identity(&h);
        assert!(id.range_projection(1e-9).unwrap().sub(&id).unwrap().norm() < 1e-12);
        let zero = ModuleOperator::zero(&h, &h);
        assert!(zero.range_projection(1e-9).unwrap().norm() < 1e-12);

        // synthesis of the single vector e_1 inside A^2: range is diag(1,0)
        let a1 = free(1);
        let synth = op_from_rows(&a1, &h, &[&[1.0, 0.0]]);
        let p = synth.range_projection(1e-9).unwrap();
        let expect = op_from_rows(&h, &h, &[&[1.0, 0.0], &[0.0, 0.0]]);
        assert!(p.sub(&expect).unwrap().norm() < 1e-12);
    }

    #[test]
    fn kernel_basis_cases() {
        let h = free(2);
        let id = ModuleOperator::identity(&h);
        assert!(id.kernel_basis(1e-9).iter().all(|k| k.nrows() == 0));

        let a1 = free(1);
        let zero = ModuleOperator::zero(&a1, &a1);
        let kb = zero.kernel_basis(1e-9);
        assert_eq!(kb[0].nrows(), 1);

        // synthesis of {e_1, e_2, e_1}: kernel spanned by (1, 0, -1)/sqrt(2)
        let a3 = free(3);
        let synth = op_from_rows(&a3, &h, &[&[1.0, 0.0], &[0.0, 1.0], &[1.0, 0.0]]);
        let kb = synth.kernel_basis(1e-9);
        assert_eq!(kb[0].nrows(), 1);
        let v = &kb[0];
        let ratio = v[(0, 0)] / v[(0, 2)];
        assert!((ratio + Complex64::new(1.0, 0.0)).norm() < 1e-9);
        assert!(v[(0, 1)].norm() < 1e-9);
    }

    #[test]
    fn predicate_examples() {
        let h = free(2);
        let id = ModuleOperator::identity(&h);
        let p = id.predicates(1e-9);
        assert!(p.is_unitary && p.is_partial_isometry && p.is_projection && p.is_invertible);
        assert_eq!(p.unitary_defect, 0.0);

        let two = id.scale_re(2.0);
        let p = two.predicates(1e-9);
        assert!(p.is_invertible && !p.is_unitary);
        assert!((p.unitary_defect - 3.0).abs() < 1e-12);

        let proj = op_from_rows(&h, &h, &[&[1.0, 0.0], &[0.0, 0.0]]);
        let p = proj.predicates(1e-9);
        assert!(p.is_projection && p.is_partial_isometry && !p.is_unitary && !p.is_invertible);
    }
}
