//! Frames of Hilbert modules: transforms, bounds, duals, reconstruction.
//!
//! A frame is a finite family `{x_j}` in a module `H` for which constants
//! `0 < C <= D` exist with
//!
//! ```text
//! C <x,x>  <=  sum_j <x,x_j><x_j,x>  <=  D <x,x>      for all x in H,
//! ```
//!
//! as an inequality of algebra elements. The frame transform
//! `theta: H -> A^J`, `theta(x) = (<x,x_j>)_j`, turns the middle sum into
//! `<theta x, theta x>`; its adjoint is the synthesis operator
//! `theta*(a) = sum_j a_j x_j`, and `F = theta* theta` acting on `H`
//! collects the frame geometry. The optimal bounds are the extreme
//! eigenvalues of the flattened `F` restricted to the range of the module
//! projection, because an adjointable operator `G` satisfies
//! `<G x, x> >= 0` for all module `x` exactly when its restricted blocks
//! are positive semidefinite.
//!
//! Every finite family here is "standard": the sums are finite, so all
//! convergence distinctions of infinite index sets disappear. The index
//! space `A^J` is the free module over the same algebra with one coordinate
//! per frame element.

use serde::Serialize;

use crate::algebra::{AlgElement, SpectralFn};
use crate::error::{Error, Result};
use crate::fixture;
use crate::linalg::{self, CMatrix};
use crate::matrix::AlgMatrix;
use crate::module::{HilbertModule, ModuleVector};
use crate::operator::ModuleOperator;
use crate::DEFAULT_TOL;

/// A finite indexed family of module vectors with cached frame data.
#[derive(Debug, Clone)]
pub struct Frame {
    module: HilbertModule,
    elements: Vec<ModuleVector>,
    /// The frame transform `theta: H -> A^J`.
    transform: ModuleOperator,
    /// `F = theta* theta` on `H`.
    frame_product: ModuleOperator,
    /// Optimal `(C, D)` from the restricted spectrum of `F`.
    bounds: (f64, f64),
}

/// Outcome of checking the two-sided frame inequality at given bounds.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub pass: bool,
    /// `lambda_min(F|_H) - C`; negative beyond tolerance fails.
    pub lower_margin: f64,
    /// `D - lambda_max(F|_H)`; negative beyond tolerance fails.
    pub upper_margin: f64,
    /// Number of random vectors spot-checked through direct summation.
    pub spot_checks: usize,
    /// Most negative eigenvalue seen in the algebra-valued spot checks.
    pub worst_spot_violation: f64,
    /// Set when the family is not a frame at all (`C` below tolerance).
    pub not_a_frame: bool,
}

/// Result of the summand-wise annihilation test for the basis property.
#[derive(Debug, Clone, Serialize)]
pub struct RieszReport {
    pub is_riesz_basis: bool,
    /// Largest summand norm `|a_j x_j|` over all kernel directions.
    pub worst_summand_norm: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<RieszWitness>,
}

/// A kernel coefficient whose summands do not all vanish.
#[derive(Debug, Clone, Serialize)]
pub struct RieszWitness {
    /// Algebra block carrying the violation.
    pub block: usize,
    /// Flattened kernel row, as `[re, im]` pairs of length `J * d_k`.
    pub coefficients: Vec<(f64, f64)>,
    /// Index of a summand with `|a_j x_j|` above tolerance.
    pub violating_index: usize,
    pub summand_norm: f64,
}

/// How two frames sit relative to each other.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SimilarityClass {
    UnitarilyEquivalent,
    Similar,
    None,
}

/// Report of the range comparison between two frames, with the connecting
/// operator when the ranges agree.
#[derive(Debug, Clone)]
pub struct SimilarityReport {
    pub class: SimilarityClass,
    /// `T` with `T(x_j) = y_j`, when similar.
    pub operator: Option<ModuleOperator>,
    /// `|P_x - P_y|` between the transform range projections.
    pub range_gap: f64,
    /// Gap between the synthesis kernel projections (independent check).
    pub kernel_gap: f64,
    /// `max_j |T(x_j) - y_j|`.
    pub map_residual: Option<f64>,
    pub unitary_defect: Option<f64>,
}

impl Frame {
    pub fn new(module: HilbertModule, elements: Vec<ModuleVector>) -> Result<Self> {
        Self::with_tol(module, elements, DEFAULT_TOL)
    }

    pub fn with_tol(
        module: HilbertModule,
        elements: Vec<ModuleVector>,
        tol: f64,
    ) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::EmptyFrame);
        }
        for (idx, e) in elements.iter().enumerate() {
            if e.module() != &module {
                return Err(Error::ModuleMismatch(format!(
                    "frame element {idx} lives in a different module"
                )));
            }
        }
        let transform = Self::build_transform(&module, &elements, tol)?;
        let frame_product = transform.then(&transform.adjoint())?;
        let bounds = Self::restricted_extremes(&frame_product);
        Ok(Self {
            module,
            elements,
            transform,
            frame_product,
            bounds,
        })
    }

    /// `theta` as a matrix: entry `(i, j)` is `((x_j)_i)*`, so that
    /// `theta(x)_j = <x, x_j>`.
    fn build_transform(
        module: &HilbertModule,
        elements: &[ModuleVector],
        tol: f64,
    ) -> Result<ModuleOperator> {
        let alg = module.algebra();
        let j_count = elements.len();
        let mut m = AlgMatrix::zeros(alg, module.rank(), j_count);
        for (j, x) in elements.iter().enumerate() {
            for i in 0..module.rank() {
                m.set(i, j, x.coord(i).adjoint());
            }
        }
        let index_module = HilbertModule::free(alg.clone(), j_count);
        ModuleOperator::with_tol(module.clone(), index_module, m, tol)
    }

    fn restricted_extremes(frame_product: &ModuleOperator) -> (f64, f64) {
        let values = frame_product.restricted_hermitian_eigenvalues();
        if values.is_empty() {
            // frame of the zero module: every pair of bounds works
            (1.0, 1.0)
        } else {
            let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
            let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            (min, max)
        }
    }

    pub fn module(&self) -> &HilbertModule {
        &self.module
    }

    pub fn elements(&self) -> &[ModuleVector] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        // frames are non-empty by construction
        self.elements.is_empty()
    }

    /// The free index module `A^J`.
    pub fn index_module(&self) -> &HilbertModule {
        self.transform.target()
    }

    /// The frame transform `theta: H -> A^J`.
    pub fn transform(&self) -> &ModuleOperator {
        &self.transform
    }

    /// The synthesis operator `theta*: A^J -> H`.
    pub fn synthesis(&self) -> ModuleOperator {
        self.transform.adjoint()
    }

    /// `F = theta* theta` on the module.
    pub fn frame_product(&self) -> &ModuleOperator {
        &self.frame_product
    }

    /// Optimal bounds `(C, D)`; `C` below tolerance means "not a frame".
    pub fn optimal_bounds(&self) -> (f64, f64) {
        self.bounds
    }

    pub fn is_tight(&self, tol: f64) -> bool {
        let (c, d) = self.bounds;
        d - c <= tol * (1.0 + d.abs())
    }

    pub fn is_normalized_tight(&self, tol: f64) -> bool {
        let (c, d) = self.bounds;
        (c - 1.0).abs() <= tol && (d - 1.0).abs() <= tol
    }

    /// Check the two-sided inequality at bounds `(c, d)`.
    ///
    /// The operator inequalities are decided on the restricted spectrum of
    /// `F`; independently, `spot_checks` random module vectors are pushed
    /// through the literal sum `sum_j <x,x_j><x_j,x>` and compared as
    /// algebra-valued inequalities.
    pub fn verify(&self, c: f64, d: f64, tol: f64, seed: u64, spot_checks: usize) -> VerifyReport {
        let values = self.frame_product.restricted_hermitian_eigenvalues();
        let scale = tol * (1.0 + self.frame_product.norm());
        let (lo, hi) = if values.is_empty() {
            (c, d) // zero module: inequalities are vacuous
        } else {
            (
                values.iter().cloned().fold(f64::INFINITY, f64::min),
                values.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
            )
        };
        let lower_margin = lo - c;
        let upper_margin = d - hi;
        let mut worst = 0.0f64;
        let mut rng = fixture::rng(seed);
        for _ in 0..spot_checks {
            let x = fixture::random_module_vector(&self.module, &mut rng);
            let gram = self.coefficient_gram(&x);
            let xx = x.inner(&x).expect("same module");
            let low = &gram - &xx.scale_re(c);
            let high = &xx.scale_re(d) - &gram;
            for side in [low, high] {
                let min = side.min_eigenvalue();
                if min < worst {
                    worst = min;
                }
            }
        }
        let not_a_frame = self.bounds.0 <= tol;
        let spot_scale = tol * (1.0 + self.frame_product.norm());
        let pass = lower_margin >= -scale && upper_margin >= -scale && worst >= -spot_scale;
        VerifyReport {
            pass,
            lower_margin,
            upper_margin,
            spot_checks,
            worst_spot_violation: worst,
            not_a_frame,
        }
    }

    /// `sum_j <x,x_j><x_j,x>` by direct summation.
    pub fn coefficient_gram(&self, x: &ModuleVector) -> AlgElement {
        let mut acc = AlgElement::zero(self.module.algebra());
        for e in &self.elements {
            let c = x.inner(e).expect("same module");
            acc = &acc + &(&c * &c.adjoint());
        }
        acc
    }

    /// The frame operator `S = F^{-1}` on the module (pseudo-inverse
    /// restricted to the range). Fails when the lower bound vanishes.
    pub fn frame_operator(&self, tol: f64) -> Result<ModuleOperator> {
        let (c, _) = self.bounds;
        if c <= tol * self.frame_product.norm().max(1.0) {
            return Err(Error::NotAFrame { lower_bound: c });
        }
        self.frame_product.funcalc(SpectralFn::Pinv, tol)
    }

    /// The canonical dual `{S x_j}`; reconstruction with it is exact and
    /// its bounds are `(1/D, 1/C)`.
    pub fn canonical_dual(&self, tol: f64) -> Result<Frame> {
        let s = self.frame_operator(tol)?;
        let elements = self
            .elements
            .iter()
            .map(|x| s.apply(x))
            .collect::<Result<Vec<_>>>()?;
        Frame::with_tol(self.module.clone(), elements, tol.max(DEFAULT_TOL))
    }

    /// `sum_j <x, y_j> x_j` together with the residual `|x - sum|`.
    pub fn reconstruct(&self, dual: &Frame, x: &ModuleVector) -> Result<(ModuleVector, f64)> {
        if dual.len() != self.len() {
            return Err(Error::ShapeMismatch(format!(
                "dual has {} elements, frame has {}",
                dual.len(),
                self.len()
            )));
        }
        if dual.module() != &self.module {
            return Err(Error::ModuleMismatch(
                "dual frame lives in a different module".into(),
            ));
        }
        let coeffs = dual.transform.apply(x)?;
        let result = self.synthesis().apply(&coeffs)?;
        let residual = (x - &result).norm();
        Ok((result, residual))
    }

    /// An alternate dual `y_j = S(x_j) + R((I - P)(e_j))` where `P`
    /// projects onto the transform range and `R: A^J -> H` is arbitrary.
    pub fn alternate_dual(&self, r: &ModuleOperator, tol: f64) -> Result<Frame> {
        if r.source() != self.index_module() {
            return Err(Error::ModuleMismatch(
                "alternate-dual operator must start on the index module".into(),
            ));
        }
        if r.target() != &self.module {
            return Err(Error::ModuleMismatch(
                "alternate-dual operator must land in the frame module".into(),
            ));
        }
        let s = self.frame_operator(tol)?;
        let p = self.transform.range_projection(tol)?;
        let complement = ModuleOperator::identity(self.index_module()).sub(&p)?;
        let basis = self.index_module().standard_basis();
        let mut elements = Vec::with_capacity(self.len());
        for (j, x) in self.elements.iter().enumerate() {
            let canonical = s.apply(x)?;
            let extra = r.apply(&complement.apply(&basis[j])?)?;
            elements.push(&canonical + &extra);
        }
        Frame::with_tol(self.module.clone(), elements, tol.max(DEFAULT_TOL))
    }

    /// Summand-wise annihilation test: the family is a Riesz basis when
    /// every coefficient tuple annihilated by the synthesis operator has
    /// every single summand `a_j x_j` equal to zero.
    ///
    /// This is weaker than asking the synthesis kernel to be trivial; over
    /// matrix blocks a kernel direction can pair a non-zero coefficient
    /// with an element it annihilates.
    pub fn riesz_report(&self, tol: f64) -> RieszReport {
        let synthesis = self.synthesis();
        let kernels = synthesis.kernel_basis(tol);
        let threshold = tol * synthesis.norm().max(1.0);
        let flat_elements: Vec<Vec<CMatrix>> = self
            .elements
            .iter()
            .map(|x| {
                let row = AlgMatrix::from_entries(
                    self.module.algebra(),
                    1,
                    self.module.rank(),
                    x.coords().to_vec(),
                )
                .expect("coordinates form a row");
                row.flatten()
            })
            .collect();
        let mut worst = 0.0f64;
        let mut witness = None;
        for (k, kernel) in kernels.iter().enumerate() {
            let d = self.module.algebra().blocks()[k];
            for row in 0..kernel.nrows() {
                for (j, flat) in flat_elements.iter().enumerate() {
                    let coeff = CMatrix::from_fn(1, d, |_, c| kernel[(row, j * d + c)]);
                    let summand = &coeff * &flat[k];
                    let norm = linalg::opnorm(&summand);
                    if norm > worst {
                        worst = norm;
                    }
                    if norm > threshold && witness.is_none() {
                        let coefficients = (0..kernel.ncols())
                            .map(|c| {
                                let z = kernel[(row, c)];
                                (z.re, z.im)
                            })
                            .collect();
                        witness = Some(RieszWitness {
                            block: k,
                            coefficients,
                            violating_index: j,
                            summand_norm: norm,
                        });
                    }
                }
            }
        }
        RieszReport {
            is_riesz_basis: witness.is_none(),
            worst_summand_norm: worst,
            witness,
        }
    }

    /// Compare transform ranges and, when they agree, build the connecting
    /// operator `T = S_x then theta_x then theta_y*` with `T(x_j) = y_j`.
    pub fn similarity(frame_x: &Frame, frame_y: &Frame, tol: f64) -> Result<SimilarityReport> {
        if frame_x.len() != frame_y.len() {
            return Err(Error::ShapeMismatch(format!(
                "frames have {} and {} elements",
                frame_x.len(),
                frame_y.len()
            )));
        }
        let p_x = frame_x.transform.range_projection(tol)?;
        let p_y = frame_y.transform.range_projection(tol)?;
        let range_gap = p_x.sub(&p_y)?.norm();

        // cross-check via the synthesis kernels: equal ranges means equal
        // kernels of the synthesis maps
        let kernel_gap = {
            let kx = frame_x.synthesis().kernel_basis(tol);
            let ky = frame_y.synthesis().kernel_basis(tol);
            kx.iter()
                .zip(ky.iter())
                .map(|(a, b)| {
                    let pa = a.adjoint() * a;
                    let pb = b.adjoint() * b;
                    linalg::opnorm(&(pa - pb))
                })
                .fold(0.0, f64::max)
        };

        if range_gap > tol {
            return Ok(SimilarityReport {
                class: SimilarityClass::None,
                operator: None,
                range_gap,
                kernel_gap,
                map_residual: None,
                unitary_defect: None,
            });
        }

        let s_x = frame_x.frame_operator(tol)?;
        let t = s_x
            .then(&frame_x.transform)?
            .then(&frame_y.synthesis())?;
        let map_residual = frame_x
            .elements
            .iter()
            .zip(frame_y.elements.iter())
            .map(|(x, y)| {
                let image = t.apply(x).expect("same module");
                (&image - y).norm()
            })
            .fold(0.0, f64::max);
        let predicates = t.predicates(tol);
        let class = if predicates.unitary_defect <= tol {
            SimilarityClass::UnitarilyEquivalent
        } else {
            SimilarityClass::Similar
        };
        Ok(SimilarityReport {
            class,
            operator: Some(t),
            range_gap,
            kernel_gap,
            map_residual: Some(map_residual),
            unitary_defect: Some(predicates.unitary_defect),
        })
    }

    /// The image of the ambient orthonormal basis under a partial isometry:
    /// a normalized tight frame of the range module.
    pub fn from_partial_isometry(v: &ModuleOperator, tol: f64) -> Result<Frame> {
        if !v.source().is_free() {
            return Err(Error::Precondition(
                "partial-isometry frames start from a free module".into(),
            ));
        }
        let predicates = v.predicates(tol);
        if !predicates.is_partial_isometry {
            return Err(Error::Precondition(format!(
                "operator is not a partial isometry: defect {:.3e}",
                predicates.partial_isometry_defect
            )));
        }
        let range = v.range_projection(tol)?;
        let algebra = v.source().algebra().clone();
        let target_rank = v.target().rank();
        // canonicalize a full range to the free module
        let identity_gap = range
            .matrix()
            .sub(&AlgMatrix::identity(&algebra, target_rank))
            .opnorm();
        let module = if identity_gap <= tol.max(DEFAULT_TOL) {
            HilbertModule::free(algebra, target_rank)
        } else {
            HilbertModule::summand_with_tol(
                algebra,
                target_rank,
                range.matrix().clone(),
                tol.max(DEFAULT_TOL),
            )?
        };
        let elements = v
            .source()
            .standard_basis()
            .iter()
            .map(|e| {
                let img = v.apply(e)?;
                ModuleVector::with_tol(module.clone(), img.coords().to_vec(), tol.max(DEFAULT_TOL))
            })
            .collect::<Result<Vec<_>>>()?;
        Frame::with_tol(module, elements, tol.max(DEFAULT_TOL))
    }

    /// The image frame `{T(x_j)}` on the target module of `T`.
    pub fn transformed(&self, t: &ModuleOperator) -> Result<Frame> {
        if t.source() != &self.module {
            return Err(Error::ModuleMismatch(
                "operator does not start on the frame module".into(),
            ));
        }
        let elements = self
            .elements
            .iter()
            .map(|x| t.apply(x))
            .collect::<Result<Vec<_>>>()?;
        Frame::new(t.target().clone(), elements)
    }
}
