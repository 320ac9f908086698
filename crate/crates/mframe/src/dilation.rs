//! Dilation of frames to bases of the index module.
//!
//! A normalized tight frame `{x_j}` of `H` embeds isometrically into `A^J`
//! through its transform; the complement of the transform range, spanned by
//! `y_j = (I - P)(e_j)`, is again a normalized tight frame, and the inner
//! sum `{x_j ⊕ y_j}` is an orthogonal Hilbert basis of `H ⊕ M` with
//! `<x_j ⊕ y_j, x_k ⊕ y_k> = delta_jk 1_A` when the sum fills all of `A^J`.
//! For a general frame the same complement turns the inner sum into a Riesz
//! basis. Compressing the dilated basis back to the first summand returns
//! the original frame, coordinate for coordinate.
//!
//! Complements are always realized inside `A^J` via `I - P`; no abstract
//! complement module is ever introduced, which keeps uniqueness questions
//! concrete: two complements with matching diagonal inner products are
//! related by a unitary fixing the frame part.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::frame::{Frame, RieszReport, SimilarityClass};
use crate::module::HilbertModule;
use crate::operator::ModuleOperator;

/// Certificates for the orthogonal-Hilbert-basis property.
#[derive(Debug, Clone, Serialize)]
pub struct OrthoBasisReport {
    /// `max_{j != k} |<b_j, b_k>|`.
    pub max_off_diagonal: f64,
    /// `max_j |<b_j,b_j>^2 - <b_j,b_j>|`.
    pub max_idempotency_defect: f64,
    /// `max_j |<b_j,b_j>* - <b_j,b_j>|`.
    pub max_self_adjoint_defect: f64,
    /// `|ran(theta*) - P_module|`: the family generates the module.
    pub generation_defect: f64,
    /// Largest residual of `x = sum_j <x,b_j> b_j` over the generators
    /// `P e_i` of the module.
    pub reconstruction_residual: f64,
    /// Whether every `<b_j,b_j>` equals the unit (the full-module case).
    pub unit_inner_products: bool,
    pub pass: bool,
}

/// Outcome of a complement construction.
#[derive(Debug, Clone)]
pub struct DilationResult {
    /// The complement frame `{(I-P) e_j}` on its module inside `A^J`.
    pub complement_frame: Frame,
    /// The inner sum `{x_j ⊕ y_j}` on `H ⊕ M`.
    pub dilated_basis: Frame,
    pub input_bounds: (f64, f64),
    pub dilated_bounds: (f64, f64),
    /// Basis certificates of the dilated family (tight complements).
    pub ortho_certificate: Option<OrthoBasisReport>,
    /// Riesz certificate of the dilated family (general complements).
    pub riesz_certificate: Option<RieszReport>,
}

impl DilationResult {
    pub fn complement_module(&self) -> &HilbertModule {
        self.complement_frame.module()
    }
}

/// The index-wise direct sum `{x_j ⊕ y_j}` on `H ⊕ K`.
pub fn inner_sum(a: &Frame, b: &Frame) -> Result<Frame> {
    if a.len() != b.len() {
        return Err(Error::ShapeMismatch(format!(
            "inner sum needs equal index counts: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    let module = a.module().direct_sum(b.module())?;
    let elements = a
        .elements()
        .iter()
        .zip(b.elements())
        .map(|(x, y)| x.direct_sum(y))
        .collect::<Result<Vec<_>>>()?;
    Frame::new(module, elements)
}

/// Drop the complement coordinates of a dilated frame, recovering the
/// frame on the first summand exactly.
pub fn compress_to_first(dilated: &Frame, first: &HilbertModule) -> Result<Frame> {
    if dilated.module().rank() < first.rank() {
        return Err(Error::ShapeMismatch(
            "dilated module is smaller than the requested summand".into(),
        ));
    }
    let elements = dilated
        .elements()
        .iter()
        .map(|b| {
            crate::module::ModuleVector::new(first.clone(), b.coords()[..first.rank()].to_vec())
        })
        .collect::<Result<Vec<_>>>()?;
    Frame::new(first.clone(), elements)
}

/// The complement frame `{(I - P)(e_j)}` of a frame transform inside `A^J`.
fn transform_complement(frame: &Frame, tol: f64) -> Result<Frame> {
    let p = frame.transform().range_projection(tol)?;
    let complement = ModuleOperator::identity(frame.index_module()).sub(&p)?;
    Frame::from_partial_isometry(&complement, tol)
}

/// Dilate a normalized tight frame to an orthogonal Hilbert basis of
/// `H ⊕ M` with unit diagonal inner products.
pub fn tight_complement(frame: &Frame, tol: f64) -> Result<DilationResult> {
    if !frame.is_normalized_tight(tol) {
        let (c, d) = frame.optimal_bounds();
        return Err(Error::Precondition(format!(
            "tight complement needs a normalized tight frame, bounds are ({c:.6}, {d:.6})"
        )));
    }
    let complement_frame = transform_complement(frame, tol)?;
    let dilated_basis = inner_sum(frame, &complement_frame)?;
    let ortho = verify_orthogonal_hilbert_basis(&dilated_basis, tol);
    Ok(DilationResult {
        input_bounds: frame.optimal_bounds(),
        dilated_bounds: dilated_basis.optimal_bounds(),
        ortho_certificate: Some(ortho),
        riesz_certificate: None,
        complement_frame,
        dilated_basis,
    })
}

/// Dilate a standard frame to a Riesz basis of `H ⊕ M` using the same
/// complement `{(I - P)(e_j)}`.
///
/// The inner-sum spectrum is the input spectrum together with eigenvalue
/// one on the complement, so the optimal bounds are preserved exactly when
/// `C <= 1 <= D`; for a Riesz basis the complement is zero and nothing
/// changes.
pub fn riesz_complement(frame: &Frame, tol: f64) -> Result<DilationResult> {
    let (c, _) = frame.optimal_bounds();
    if c <= tol {
        return Err(Error::NotAFrame { lower_bound: c });
    }
    let complement_frame = transform_complement(frame, tol)?;
    let dilated_basis = inner_sum(frame, &complement_frame)?;
    let riesz = dilated_basis.riesz_report(tol);
    Ok(DilationResult {
        input_bounds: frame.optimal_bounds(),
        dilated_bounds: dilated_basis.optimal_bounds(),
        ortho_certificate: None,
        riesz_certificate: Some(riesz),
        complement_frame,
        dilated_basis,
    })
}

/// Check the orthogonal-Hilbert-basis certificates of a family: pairwise
/// orthogonality, idempotent self-adjoint diagonal inner products,
/// generation of the module, and self-reconstruction.
pub fn verify_orthogonal_hilbert_basis(frame: &Frame, tol: f64) -> OrthoBasisReport {
    let unit = crate::algebra::AlgElement::unit(frame.module().algebra());
    let mut max_off = 0.0f64;
    let mut max_idem = 0.0f64;
    let mut max_sa = 0.0f64;
    let mut unit_inner = true;
    for (j, bj) in frame.elements().iter().enumerate() {
        for (k, bk) in frame.elements().iter().enumerate() {
            let g = bj.inner(bk).expect("same module");
            if j == k {
                max_idem = max_idem.max((&(&g * &g) - &g).norm());
                max_sa = max_sa.max((&g.adjoint() - &g).norm());
                if (&g - &unit).norm() > tol {
                    unit_inner = false;
                }
            } else {
                max_off = max_off.max(g.norm());
            }
        }
    }

    let generation_defect = frame
        .synthesis()
        .range_projection(tol)
        .map(|p| {
            p.matrix()
                .sub(&frame.module().projection_matrix())
                .opnorm()
        })
        .unwrap_or(f64::INFINITY);

    let mut reconstruction_residual = 0.0f64;
    for x in frame.module().standard_basis() {
        let (_, residual) = frame.reconstruct(frame, &x).expect("same module");
        reconstruction_residual = reconstruction_residual.max(residual);
    }

    let scale = tol * (1.0 + frame.optimal_bounds().1.abs());
    let pass = max_off <= scale
        && max_idem <= scale
        && max_sa <= scale
        && generation_defect <= scale
        && reconstruction_residual <= scale;
    OrthoBasisReport {
        max_off_diagonal: max_off,
        max_idempotency_defect: max_idem,
        max_self_adjoint_defect: max_sa,
        generation_defect,
        reconstruction_residual,
        unit_inner_products: unit_inner,
        pass,
    }
}

/// Unitary relating two complements of the same frame.
#[derive(Debug, Clone)]
pub struct ComplementUniqueness {
    pub unitary: ModuleOperator,
    /// `max_j |U(y_j) - z_j|`.
    pub map_residual: f64,
    pub unitary_defect: f64,
}

/// Given a frame `{x_j}` and two complements `{y_j}`, `{z_j}` that both
/// dilate it to orthogonal Hilbert bases with matching diagonal inner
/// products, produce the unitary `U` with `U(y_j) = z_j`.
pub fn complement_uniqueness_unitary(
    frame_x: &Frame,
    frame_y: &Frame,
    frame_z: &Frame,
    tol: f64,
) -> Result<ComplementUniqueness> {
    for (label, partner) in [("first", frame_y), ("second", frame_z)] {
        let dilated = inner_sum(frame_x, partner)?;
        let report = verify_orthogonal_hilbert_basis(&dilated, tol);
        if !report.pass {
            return Err(Error::Precondition(format!(
                "{label} complement does not dilate to an orthogonal Hilbert basis \
                 (off-diagonal {:.3e}, idempotency {:.3e}, generation {:.3e}, \
                 reconstruction {:.3e})",
                report.max_off_diagonal,
                report.max_idempotency_defect,
                report.generation_defect,
                report.reconstruction_residual
            )));
        }
    }
    for (j, (y, z)) in frame_y
        .elements()
        .iter()
        .zip(frame_z.elements())
        .enumerate()
    {
        let gy = y.inner(y).expect("same module");
        let gz = z.inner(z).expect("same module");
        let gap = (&gy - &gz).norm();
        if gap > tol * (1.0 + gy.norm()) {
            return Err(Error::Precondition(format!(
                "diagonal inner products differ at index {j}: gap {gap:.3e}"
            )));
        }
    }
    let report = Frame::similarity(frame_y, frame_z, tol)?;
    match (report.class, report.operator) {
        (SimilarityClass::UnitarilyEquivalent, Some(unitary)) => {
            let defect = unitary.predicates(tol).unitary_defect;
            Ok(ComplementUniqueness {
                map_residual: report.map_residual.unwrap_or(f64::INFINITY),
                unitary_defect: defect,
                unitary,
            })
        }
        (class, _) => Err(Error::Precondition(format!(
            "complements are not unitarily equivalent (similarity class {class:?}, \
             range gap {:.3e})",
            report.range_gap
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgElement, AlgebraDescriptor};
    use crate::fixture;
    use crate::linalg::CMatrix;
    use crate::module::ModuleVector;
    use num_complex::Complex64;

    fn scalar() -> AlgebraDescriptor {
        AlgebraDescriptor::scalar()
    }

    fn scaled_mercedes() -> Frame {
        let h = HilbertModule::free(scalar(), 2);
        let mk = |a: f64, b: f64| {
            let s = (2.0f64 / 3.0).sqrt();
            ModuleVector::new(
                h.clone(),
                vec![
                    AlgElement::unit(&scalar()).scale_re(a * s),
                    AlgElement::unit(&scalar()).scale_re(b * s),
                ],
            )
            .unwrap()
        };
        let s3 = 3.0f64.sqrt() / 2.0;
        let elements = vec![mk(0.0, 1.0), mk(-s3, -0.5), mk(s3, -0.5)];
        Frame::new(h, elements).unwrap()
    }

    #[test]
    fn orthonormal_basis_needs_no_complement() {
        let h = HilbertModule::free(scalar(), 3);
        let onb = Frame::new(h.clone(), h.standard_basis()).unwrap();
        let result = tight_complement(&onb, 1e-9).unwrap();
        for y in result.complement_frame.elements() {
            assert!(y.norm() < 1e-10);
        }
        let cert = result.ortho_certificate.unwrap();
        assert!(cert.pass);
        assert!(cert.unit_inner_products);
    }

    #[test]
    fn projection_frame_dilates_to_orthonormal_basis() {
        let alg = AlgebraDescriptor::new(vec![2, 1]).unwrap();
        let mut rng = fixture::rng(31);
        let f = fixture::random_snt_frame(&alg, 4, &mut rng);
        let result = tight_complement(&f, 1e-9).unwrap();
        let cert = result.ortho_certificate.unwrap();
        assert!(cert.pass, "certificate failed: {cert:?}");
        assert!(cert.unit_inner_products);
        // <b_j, b_k> = delta_jk 1_A
        let unit = AlgElement::unit(&alg);
        for (j, bj) in result.dilated_basis.elements().iter().enumerate() {
            for (k, bk) in result.dilated_basis.elements().iter().enumerate() {
                let g = bj.inner(bk).unwrap();
                let expect = if j == k {
                    unit.clone()
                } else {
                    AlgElement::zero(&alg)
                };
                assert!((&g - &expect).norm() < 1e-9);
            }
        }
        // round trip: compression recovers the input exactly
        let back = compress_to_first(&result.dilated_basis, f.module()).unwrap();
        for (a, b) in back.elements().iter().zip(f.elements()) {
            assert_eq!(a.coords(), b.coords());
        }
    }

    #[test]
    fn mercedes_complement_is_rank_one() {
        let f = scaled_mercedes();
        assert!(f.is_normalized_tight(1e-9));
        let result = tight_complement(&f, 1e-9).unwrap();
        assert!(result.ortho_certificate.unwrap().pass);
        // complement of a 2-dimensional range in C^3
        let traces: f64 = result
            .complement_frame
            .module()
            .projection_matrix()
            .flatten()
            .iter()
            .map(|m| m.trace().re)
            .sum();
        assert!((traces - 1.0).abs() < 1e-9);
    }

    #[test]
    fn plain_mercedes_is_rejected() {
        let h = HilbertModule::free(scalar(), 2);
        let b = h.standard_basis();
        let f = Frame::new(h, vec![b[0].clone(), b[1].clone(), b[0].clone()]).unwrap();
        assert!(matches!(
            tight_complement(&f, 1e-9),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn riesz_complement_of_overcomplete_pair() {
        let h = HilbertModule::free(scalar(), 2);
        let b = h.standard_basis();
        let f = Frame::new(h, vec![b[0].clone(), b[1].clone(), b[0].clone()]).unwrap();
        let result = riesz_complement(&f, 1e-9).unwrap();
        assert!(result.riesz_certificate.unwrap().is_riesz_basis);
        let (c, d) = result.dilated_bounds;
        assert!((c - 1.0).abs() < 1e-9, "lower {c}");
        assert!((d - 2.0).abs() < 1e-9, "upper {d}");
        assert!((result.input_bounds.0 - c).abs() < 1e-9);
        assert!((result.input_bounds.1 - d).abs() < 1e-9);
    }

    #[test]
    fn riesz_basis_input_gets_zero_complement() {
        let alg = scalar();
        let mut rng = fixture::rng(9);
        let f = fixture::random_riesz_basis(&alg, 3, &mut rng);
        let result = riesz_complement(&f, 1e-9).unwrap();
        for y in result.complement_frame.elements() {
            assert!(y.norm() < 1e-9);
        }
    }

    #[test]
    fn summand_bounds_bracket_the_inner_sum() {
        let alg = AlgebraDescriptor::new(vec![2]).unwrap();
        let mut rng = fixture::rng(17);
        for _ in 0..10 {
            let a = fixture::random_standard_frame(&alg, 4, &mut rng);
            let b = fixture::random_standard_frame(&alg, 4, &mut rng);
            let s = inner_sum(&a, &b).unwrap();
            let (cs, ds) = s.optimal_bounds();
            for f in [&a, &b] {
                let (c, d) = f.optimal_bounds();
                assert!(c >= cs - 1e-10, "summand lower bound may only increase");
                assert!(d <= ds + 1e-10, "summand upper bound may only decrease");
            }
        }
    }

    #[test]
    fn diagonal_inner_sum_of_singletons_is_not_a_frame() {
        let h = HilbertModule::free(scalar(), 1);
        let e = h.standard_basis();
        let fa = Frame::new(h.clone(), vec![e[0].clone()]).unwrap();
        let fb = Frame::new(h, vec![e[0].clone()]).unwrap();
        let s = inner_sum(&fa, &fb).unwrap();
        let (c, d) = s.optimal_bounds();
        assert!(c.abs() < 1e-12);
        assert!((d - 2.0).abs() < 1e-12);
    }

    #[test]
    fn idempotent_non_unit_inner_products_pass() {
        // (p, .) and (1-p, .) in A^1 over M_2: orthogonal Hilbert basis with
        // projection-valued inner products
        let alg = AlgebraDescriptor::new(vec![2]).unwrap();
        let h = HilbertModule::free(alg.clone(), 1);
        let mut p_blk = CMatrix::zeros(2, 2);
        p_blk[(0, 0)] = Complex64::new(1.0, 0.0);
        let p = AlgElement::from_blocks(alg.clone(), vec![p_blk]).unwrap();
        let q = &AlgElement::unit(&alg) - &p;
        let b1 = ModuleVector::new(h.clone(), vec![p]).unwrap();
        let b2 = ModuleVector::new(h.clone(), vec![q]).unwrap();
        let f = Frame::new(h, vec![b1, b2]).unwrap();
        let report = verify_orthogonal_hilbert_basis(&f, 1e-9);
        assert!(report.pass, "report: {report:?}");
        assert!(!report.unit_inner_products);
    }

    #[test]
    fn mercedes_fails_orthogonality() {
        let f = scaled_mercedes();
        let report = verify_orthogonal_hilbert_basis(&f, 1e-9);
        assert!(!report.pass);
        assert!(report.max_off_diagonal > 0.1);
    }

    #[test]
    fn uniqueness_recovers_the_twin_unitary() {
        let alg = AlgebraDescriptor::new(vec![2]).unwrap();
        let mut rng = fixture::rng(23);
        let f = fixture::random_snt_frame(&alg, 4, &mut rng);
        let dilation = tight_complement(&f, 1e-9).unwrap();
        let y = dilation.complement_frame.clone();

        // rotate the complement by an ambient unitary
        let m = y.module().clone();
        let u_matrix = fixture::random_unitary_matrix(&alg, m.rank(), &mut rng);
        let p = m.projection_matrix();
        let rotated = u_matrix.adjoint().then(&p).then(&u_matrix);
        let target = HilbertModule::summand(alg.clone(), m.rank(), rotated).unwrap();
        let u = ModuleOperator::new(
            m.clone(),
            target.clone(),
            p.then(&u_matrix).then(&target.projection_matrix()),
        )
        .unwrap();
        let z = y.transformed(&u).unwrap();

        let result = complement_uniqueness_unitary(&f, &y, &z, 1e-8).unwrap();
        assert!(
            result.unitary_defect <= 1e-8,
            "defect {}",
            result.unitary_defect
        );
        assert!(
            result.map_residual <= 1e-8,
            "residual {}",
            result.map_residual
        );

        // identity complements give the identity
        let same = complement_uniqueness_unitary(&f, &y, &y, 1e-8).unwrap();
        assert!(same.map_residual <= 1e-10);

        // mismatched diagonal inner products are rejected
        let shrunk = Frame::new(
            y.module().clone(),
            y.elements().iter().map(|v| v.scale_re(0.5)).collect(),
        )
        .unwrap();
        assert!(matches!(
            complement_uniqueness_unitary(&f, &y, &shrunk, 1e-8),
            Err(Error::Precondition(_))
        ));
    }
}
