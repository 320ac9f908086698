//! Relative position of two frames via their transform ranges.
//!
//! Two frames with the same index count put two projections `P`, `Q` on the
//! index module `A^J`: the range projections of their transforms. The whole
//! taxonomy reads off these:
//!
//! - strongly complementary: `P = I - Q`;
//! - complementary: trivial range intersection and `P + Q` invertible;
//! - strongly disjoint: `P Q = 0`;
//! - disjoint / weakly disjoint: trivial range intersection (the two
//!   notions coincide here because sums of subspaces are closed in finite
//!   dimensions; both flags are reported).
//!
//! Intersection triviality is decided by the top of the spectrum of
//! `P + Q`: a common fixed vector is exactly an eigenvalue-2 eigenvector.
//! The margin of invertibility of `P - Q`, via
//! `(P - Q)^2 = (P + Q)(2I - P - Q)`, is reported as an extra numeric.
//!
//! Strong disjointness has several equivalent faces (orthogonal dual
//! ranges, additive frame operators on the inner sum, six annihilation
//! identities); they are evaluated side by side so disagreement would
//! surface immediately.

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::SpectralFn;
use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::module::HilbertModule;
use crate::operator::ModuleOperator;

/// Flags and numerics for the disjointness taxonomy of a frame pair.
#[derive(Debug, Clone, Serialize)]
pub struct PairClassification {
    pub strongly_complementary: bool,
    pub complementary: bool,
    pub strongly_disjoint: bool,
    pub disjoint: bool,
    pub weakly_disjoint: bool,
    /// `|P - (I - Q)|`.
    pub complement_defect: f64,
    /// `|P Q|`.
    pub overlap: f64,
    pub sum_min_eigenvalue: f64,
    pub sum_max_eigenvalue: f64,
    /// Smallest eigenvalue of `(P - Q)^2`: invertibility margin of `P - Q`.
    pub difference_margin: f64,
    pub tol: f64,
}

fn range_projections(a: &Frame, b: &Frame, tol: f64) -> Result<(ModuleOperator, ModuleOperator)> {
    if a.len() != b.len() {
        return Err(Error::ShapeMismatch(format!(
            "classification needs equal index counts: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    if a.module().algebra() != b.module().algebra() {
        return Err(Error::AlgebraMismatch {
            expected: a.module().algebra().blocks().to_vec(),
            found: b.module().algebra().blocks().to_vec(),
        });
    }
    for f in [a, b] {
        let (c, _) = f.optimal_bounds();
        if c <= tol {
            return Err(Error::NotAFrame { lower_bound: c });
        }
    }
    Ok((
        a.transform().range_projection(tol)?,
        b.transform().range_projection(tol)?,
    ))
}

/// Classify the relative position of two frames with equal index counts.
pub fn classify_pair(a: &Frame, b: &Frame, tol: f64) -> Result<PairClassification> {
    let (p, q) = range_projections(a, b, tol)?;
    let id = ModuleOperator::identity(p.source());

    let complement_defect = p.sub(&id.sub(&q)?)?.norm();
    let overlap = p.then(&q)?.norm();
    let sum = p.add(&q)?;
    let sum_values = sum.restricted_hermitian_eigenvalues();
    let sum_min = sum_values.iter().cloned().fold(f64::INFINITY, f64::min);
    let sum_max = sum_values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let diff = p.sub(&q)?;
    let diff_sq = diff.then(&diff)?;
    let difference_margin = diff_sq
        .restricted_hermitian_eigenvalues()
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);

    let trivial_intersection = sum_max <= 2.0 - tol;
    let strongly_complementary = complement_defect <= tol;
    let strongly_disjoint = overlap <= tol;
    let complementary = trivial_intersection && sum_min >= tol;
    let disjoint = trivial_intersection;
    let weakly_disjoint = trivial_intersection;

    Ok(PairClassification {
        strongly_complementary,
        complementary,
        strongly_disjoint,
        disjoint,
        weakly_disjoint,
        complement_defect,
        overlap,
        sum_min_eigenvalue: sum_min,
        sum_max_eigenvalue: sum_max,
        difference_margin,
        tol,
    })
}

impl PairClassification {
    /// The implication chain the flags must satisfy.
    pub fn implications_hold(&self) -> bool {
        let imp = |a: bool, b: bool| !a || b;
        imp(self.strongly_complementary, self.complementary)
            && imp(self.strongly_complementary, self.strongly_disjoint)
            && imp(self.complementary, self.disjoint)
            && imp(self.strongly_disjoint, self.disjoint)
            && imp(self.disjoint, self.weakly_disjoint)
    }
}

/// One of the nine equivalent strong-disjointness conditions.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    pub label: &'static str,
    pub residual: f64,
    pub pass: bool,
}

/// The nine conditions evaluated side by side.
#[derive(Debug, Clone, Serialize)]
pub struct NineConditionReport {
    pub conditions: Vec<ConditionReport>,
    /// All nine booleans agree.
    pub agree: bool,
    pub all_pass: bool,
    pub tol: f64,
}

/// Evaluate the nine equivalent characterizations of strong disjointness.
///
/// Residuals are operator norms of the exact composites (the annihilation
/// sums (iv)-(ix) are norms of `theta then synthesis` chains, which bound
/// the sums over every vector at once).
pub fn strong_disjoint_conditions(
    a: &Frame,
    b: &Frame,
    tol: f64,
) -> Result<NineConditionReport> {
    let (p, q) = range_projections(a, b, tol)?;
    let dual_a = a.canonical_dual(tol)?;
    let dual_b = b.canonical_dual(tol)?;
    let (dp, dq) = range_projections(&dual_a, &dual_b, tol)?;

    let mut conditions = Vec::with_capacity(9);
    let mut push = |label: &'static str, residual: f64| {
        conditions.push(ConditionReport {
            label,
            residual,
            pass: residual <= tol,
        });
    };

    push("transform ranges orthogonal", p.then(&q)?.norm());
    push("dual transform ranges orthogonal", dp.then(&dq)?.norm());

    // frame operator of the inner sum vs the direct sum of frame operators
    let sum = crate::dilation::inner_sum(a, b)?;
    let s_sum = sum.frame_product().funcalc(SpectralFn::Pinv, tol)?;
    let s_a = a.frame_operator(tol)?;
    let s_b = b.frame_operator(tol)?;
    let s_direct = ModuleOperator::new_unchecked(
        sum.module().clone(),
        sum.module().clone(),
        s_a.matrix().direct_sum(s_b.matrix()),
    );
    push(
        "inner-sum frame operator is the direct sum",
        s_sum.sub(&s_direct)?.norm(),
    );

    // annihilation sums: x -> sum_j <x, u_j> v_j is `transform(u) then
    // synthesis(v)`
    push(
        "dual-a coefficients annihilate b",
        dual_a.transform().then(&b.synthesis())?.norm(),
    );
    push(
        "dual-b coefficients annihilate a",
        dual_b.transform().then(&a.synthesis())?.norm(),
    );
    push(
        "a coefficients annihilate dual-b",
        a.transform().then(&dual_b.synthesis())?.norm(),
    );
    push(
        "b coefficients annihilate dual-a",
        b.transform().then(&dual_a.synthesis())?.norm(),
    );
    push(
        "a coefficients annihilate b",
        a.transform().then(&b.synthesis())?.norm(),
    );
    push(
        "b coefficients annihilate a",
        b.transform().then(&a.synthesis())?.norm(),
    );

    let first = conditions[0].pass;
    let agree = conditions.iter().all(|c| c.pass == first);
    let all_pass = first && agree;
    Ok(NineConditionReport {
        conditions,
        agree,
        all_pass,
        tol,
    })
}

/// Combine pairwise strongly disjoint normalized tight frames of a common
/// module through operators with `sum_k T_k T_k* = I`.
///
/// The result `{sum_k T_k(x_kj)}` is again a normalized tight frame. The
/// scalar case `alpha x_j + beta y_j` with `|alpha|^2 + |beta|^2 = 1` comes
/// from scalar multiples of the identity.
pub fn combine(frames: &[Frame], ops: &[ModuleOperator], tol: f64) -> Result<Frame> {
    if frames.is_empty() || frames.len() != ops.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} frames with {} operators",
            frames.len(),
            ops.len()
        )));
    }
    let module = frames[0].module().clone();
    let j_count = frames[0].len();
    for (k, f) in frames.iter().enumerate() {
        if f.module() != &module {
            return Err(Error::ModuleMismatch(format!(
                "frame {k} lives on a different module"
            )));
        }
        if f.len() != j_count {
            return Err(Error::ShapeMismatch(format!(
                "frame {k} has {} elements, expected {j_count}",
                f.len()
            )));
        }
        if !f.is_normalized_tight(tol.max(1e-6)) {
            let (c, d) = f.optimal_bounds();
            return Err(Error::Precondition(format!(
                "frame {k} is not normalized tight: bounds ({c:.6}, {d:.6})"
            )));
        }
    }
    for k in 0..frames.len() {
        for l in (k + 1)..frames.len() {
            let overlap = frames[k]
                .transform()
                .range_projection(tol)?
                .then(&frames[l].transform().range_projection(tol)?)?
                .norm();
            if overlap > tol.max(1e-8) {
                return Err(Error::Precondition(format!(
                    "frames {k} and {l} are not strongly disjoint: overlap {overlap:.3e}"
                )));
            }
        }
    }
    let id = ModuleOperator::identity(&module);
    let mut acc = ModuleOperator::zero(&module, &module);
    for (k, t) in ops.iter().enumerate() {
        if t.source() != &module || t.target() != &module {
            return Err(Error::ModuleMismatch(format!(
                "operator {k} does not act on the common module"
            )));
        }
        acc = acc.add(&t.adjoint().then(t)?)?;
    }
    let sum_defect = acc.sub(&id)?.norm();
    if sum_defect > tol.max(1e-8) {
        return Err(Error::Precondition(format!(
            "sum_k T_k T_k* is not the identity: defect {sum_defect:.3e}"
        )));
    }

    let elements = (0..j_count)
        .map(|j| {
            let mut z = module.zero_vector();
            for (f, t) in frames.iter().zip(ops) {
                z = &z + &t.apply(&f.elements()[j])?;
            }
            Ok(z)
        })
        .collect::<Result<Vec<_>>>()?;
    Frame::new(module, elements)
}

/// Scalar combination `{alpha x_j + beta y_j}` of a strongly disjoint pair.
pub fn combine_scalars(
    a: &Frame,
    b: &Frame,
    alpha: Complex64,
    beta: Complex64,
    tol: f64,
) -> Result<Frame> {
    let id = ModuleOperator::identity(a.module());
    combine(
        &[a.clone(), b.clone()],
        &[id.scale(alpha), id.scale(beta)],
        tol,
    )
}

/// Outcome of assembling a tuple of tight frames into an orthonormal basis
/// of the index module.
#[derive(Debug, Clone)]
pub struct TupleToOnb {
    /// The unitary `W(⊕_k x_kj) = e_j` and the assembled orthonormal basis,
    /// present when the ranges partition the index module.
    pub outcome: Option<(ModuleOperator, Frame)>,
    /// `|sum_k P_k - I|`.
    pub sum_defect: f64,
    /// `max_{k != l} |P_k P_l|`.
    pub orthogonality_defect: f64,
    pub unitary_defect: Option<f64>,
    /// `max_j |W(⊕_k x_kj) - e_j|`.
    pub map_residual: Option<f64>,
}

/// Assemble an n-tuple of normalized tight frames with `J` elements each
/// into an orthonormal basis of `A^J`, when their transform ranges are
/// pairwise orthogonal and sum to the identity. Returns the defect norms
/// either way.
pub fn tuple_to_onb(frames: &[Frame], tol: f64) -> Result<TupleToOnb> {
    if frames.is_empty() {
        return Err(Error::ShapeMismatch("empty tuple".into()));
    }
    let j_count = frames[0].len();
    let algebra = frames[0].module().algebra().clone();
    for (k, f) in frames.iter().enumerate() {
        if f.len() != j_count || f.module().algebra() != &algebra {
            return Err(Error::ShapeMismatch(format!(
                "frame {k} does not match the tuple index space"
            )));
        }
        if !f.is_normalized_tight(tol.max(1e-6)) {
            let (c, d) = f.optimal_bounds();
            return Err(Error::Precondition(format!(
                "frame {k} is not normalized tight: bounds ({c:.6}, {d:.6})"
            )));
        }
    }
    let index_module = HilbertModule::free(algebra.clone(), j_count);
    let id = ModuleOperator::identity(&index_module);

    let projections = frames
        .iter()
        .map(|f| f.transform().range_projection(tol))
        .collect::<Result<Vec<_>>>()?;
    let mut orthogonality_defect = 0.0f64;
    for k in 0..projections.len() {
        for l in (k + 1)..projections.len() {
            orthogonality_defect =
                orthogonality_defect.max(projections[k].then(&projections[l])?.norm());
        }
    }
    let mut acc = ModuleOperator::zero(&index_module, &index_module);
    for f in frames {
        acc = acc.add(&f.synthesis().then(f.transform())?)?;
    }
    let sum_defect = acc.sub(&id)?.norm();

    if orthogonality_defect > tol || sum_defect > tol {
        return Ok(TupleToOnb {
            outcome: None,
            sum_defect,
            orthogonality_defect,
            unitary_defect: None,
            map_residual: None,
        });
    }

    // W(⊕_k h_k) = sum_k theta_k(h_k): stack the transform matrices
    let mut domain = frames[0].module().clone();
    for f in &frames[1..] {
        domain = domain.direct_sum(f.module())?;
    }
    let mut w_matrix = crate::matrix::AlgMatrix::zeros(&algebra, domain.rank(), j_count);
    let mut row_offset = 0;
    for f in frames {
        let theta = f.transform().matrix();
        for i in 0..theta.rows() {
            for j in 0..theta.cols() {
                w_matrix.set(row_offset + i, j, theta.entry(i, j).clone());
            }
        }
        row_offset += theta.rows();
    }
    let w = ModuleOperator::new(domain.clone(), index_module.clone(), w_matrix)?;
    let unitary_defect = w.predicates(tol).unitary_defect;

    // basis elements sum_k theta_k(x_kj) and the map residual
    let index_basis = index_module.standard_basis();
    let mut map_residual = 0.0f64;
    let mut basis_elements = Vec::with_capacity(j_count);
    for j in 0..j_count {
        let mut stacked = frames[0].elements()[j].clone();
        for f in &frames[1..] {
            stacked = stacked.direct_sum(&f.elements()[j])?;
        }
        let image = w.apply(&stacked)?;
        map_residual = map_residual.max((&image - &index_basis[j]).norm());
        basis_elements.push(image);
    }
    let basis = Frame::new(index_module, basis_elements)?;

    Ok(TupleToOnb {
        outcome: Some((w, basis)),
        sum_defect,
        orthogonality_defect,
        unitary_defect: Some(unitary_defect),
        map_residual: Some(map_residual),
    })
}
