//! Operator and frame decompositions into unitaries, partial isometries,
//! tight frames and bases.
//!
//! All constructions run through one shifted-polar pipeline. For an
//! operator `T` on a full module and `epsilon > 0`,
//!
//! ```text
//! T' = I/2 + T / (2 (1 + epsilon) |T|)
//! ```
//!
//! is invertible (`|I - T'| < 1`), so its polar factor `V` is unitary, and
//! since `|T'| < 1` the positive part splits into a mean of two unitaries
//! `|T'| = (U + U*)/2` with `U = |T'| + i (I - |T'|^2)^{1/2}`. Unwinding
//! the shift gives `T = lambda (V U + V U* - I)` with
//! `lambda = (1 + epsilon) |T|`: three unitaries. Applying the same
//! splitting to `T/|T|` directly (no shift) writes any surjective operator
//! as `|T|/2` times a sum of two partial isometries, which become unitary
//! exactly when `T` is invertible.
//!
//! Applied to the synthesis operator of a frame these identities turn into
//! frame statements: every frame is a multiple of a sum of two normalized
//! tight frames; a frame with square index is a combination of two
//! orthonormal bases exactly when it is a Riesz basis; every frame with
//! square index is a combination of three orthonormal bases, or of an
//! orthonormal basis and a Riesz basis; and inside the index module every
//! tight frame is the half-sum of two orthonormal bases, every frame the
//! half-sum of two Riesz bases.
//!
//! The rescaling by `|T|` before the two-part split is mandatory: the
//! square root `(I - |T|^2)^{1/2}` only exists for `|T| <= 1`. Every
//! reported scalar carries the norm back out.

use num_complex::Complex64;

use crate::algebra::SpectralFn;
use crate::error::{Error, Result};
use crate::frame::{Frame, RieszReport};
use crate::module::ModuleVector;
use crate::operator::{ModuleOperator, OpPredicates};

/// One named part of an operator decomposition.
#[derive(Debug, Clone)]
pub struct LabeledPart {
    pub label: &'static str,
    pub operator: ModuleOperator,
    pub predicates: OpPredicates,
}

/// `T = scalar * (sum of parts)` with certified parts.
#[derive(Debug, Clone)]
pub struct OperatorDecomposition {
    pub scalar: f64,
    pub parts: Vec<LabeledPart>,
    /// `|T - scalar * sum(parts)|`.
    pub residual: f64,
}

impl OperatorDecomposition {
    pub fn recombined(&self) -> Result<ModuleOperator> {
        let mut acc = self.parts[0].operator.clone();
        for p in &self.parts[1..] {
            acc = acc.add(&p.operator)?;
        }
        Ok(acc.scale_re(self.scalar))
    }
}

/// The two unitary halves `|T| ± i (I - |T|^2)^{1/2}` of a positive
/// contraction on its module.
fn unitary_halves(
    r: &ModuleOperator,
    tol: f64,
) -> Result<(ModuleOperator, ModuleOperator)> {
    let id = ModuleOperator::identity(r.source());
    let gap = id.sub(&r.then(r)?)?;
    let root = gap.funcalc(SpectralFn::Sqrt, tol)?;
    let i_root = root.scale(Complex64::new(0.0, 1.0));
    Ok((r.add(&i_root)?, r.sub(&i_root)?))
}

/// Write an operator on a full module as `lambda (U_1 + U_2 + U_3)` with
/// three unitaries and `lambda = (1 + epsilon) |T| > |T|`.
///
/// The zero operator is decomposed with `lambda = epsilon` and the unitary
/// triple `(U, U*, -I)` for `U = e^{i pi/3} I`, whose sum vanishes.
pub fn three_unitaries(
    t: &ModuleOperator,
    epsilon: f64,
    tol: f64,
) -> Result<OperatorDecomposition> {
    if epsilon <= 0.0 {
        return Err(Error::Precondition("epsilon must be positive".into()));
    }
    if t.source() != t.target() {
        return Err(Error::ModuleMismatch(
            "three-unitary decomposition needs an operator of a module onto itself".into(),
        ));
    }
    if !t.source().is_free() {
        return Err(Error::Precondition(
            "three-unitary decomposition needs the full module".into(),
        ));
    }
    let id = ModuleOperator::identity(t.source());
    let norm = t.norm();
    if norm == 0.0 {
        let u = id.scale(Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_3));
        let parts = vec![
            ("first unitary", u.clone()),
            ("second unitary", u.adjoint()),
            ("negated identity", id.scale_re(-1.0)),
        ];
        return finish_decomposition(t, epsilon, parts, tol);
    }
    let lambda = (1.0 + epsilon) * norm;
    let shifted = id.scale_re(0.5).add(&t.scale_re(1.0 / (2.0 * lambda)))?;
    let (v, r) = shifted.polar(tol)?;
    let (u_plus, u_minus) = unitary_halves(&r, tol)?;
    let parts = vec![
        ("first unitary", u_plus.then(&v)?),
        ("second unitary", u_minus.then(&v)?),
        ("negated identity", id.scale_re(-1.0)),
    ];
    finish_decomposition(t, lambda, parts, tol)
}

fn finish_decomposition(
    t: &ModuleOperator,
    scalar: f64,
    parts: Vec<(&'static str, ModuleOperator)>,
    tol: f64,
) -> Result<OperatorDecomposition> {
    let mut sum = ModuleOperator::zero(parts[0].1.source(), parts[0].1.target());
    for (_, op) in &parts {
        sum = sum.add(op)?;
    }
    let residual = t.sub(&sum.scale_re(scalar))?.norm();
    let parts = parts
        .into_iter()
        .map(|(label, operator)| LabeledPart {
            label,
            predicates: operator.predicates(tol),
            operator,
        })
        .collect();
    Ok(OperatorDecomposition {
        scalar,
        parts,
        residual,
    })
}

/// Write a surjective operator as the arithmetic mean of two partial
/// isometries, rescaled: `T = (|T|/2)(W_1 + W_2)`.
pub fn two_partial_isometries(t: &ModuleOperator, tol: f64) -> Result<OperatorDecomposition> {
    let range_defect = t
        .range_projection(tol)?
        .matrix()
        .sub(&t.target().projection_matrix())
        .opnorm();
    if range_defect > tol.max(1e-8) {
        return Err(Error::Precondition(format!(
            "operator is not surjective onto its target module: range defect {range_defect:.3e}"
        )));
    }
    let norm = t.norm();
    if norm == 0.0 {
        let zero = ModuleOperator::zero(t.source(), t.target());
        let parts = vec![
            ("first partial isometry", zero.clone()),
            ("second partial isometry", zero),
        ];
        return finish_decomposition(t, 0.0, parts, tol);
    }
    let rescaled = t.scale_re(1.0 / norm);
    let (v, r) = rescaled.polar(tol)?;
    let (u_plus, u_minus) = unitary_halves(&r, tol)?;
    let parts = vec![
        ("first partial isometry", u_plus.then(&v)?),
        ("second partial isometry", u_minus.then(&v)?),
    ];
    finish_decomposition(t, norm / 2.0, parts, tol)
}

/// `T = (|T|/2)(U_1 + U_2)` with both parts unitary, exactly when `T` is
/// invertible; `None` otherwise.
pub fn two_unitaries_iff_invertible(
    t: &ModuleOperator,
    tol: f64,
) -> Result<Option<OperatorDecomposition>> {
    if !t.predicates(tol).is_invertible {
        return Ok(None);
    }
    let norm = t.norm();
    let rescaled = t.scale_re(1.0 / norm);
    let (v, r) = rescaled.polar(tol)?;
    let (u_plus, u_minus) = unitary_halves(&r, tol)?;
    let parts = vec![
        ("first unitary", u_plus.then(&v)?),
        ("second unitary", u_minus.then(&v)?),
    ];
    Ok(Some(finish_decomposition(t, norm / 2.0, parts, tol)?))
}

/// Rehost the images `{W(e_j)}` of the index basis as a frame on `module`.
fn image_frame(
    w: &ModuleOperator,
    module: &crate::module::HilbertModule,
    tol: f64,
) -> Result<Frame> {
    let elements = w
        .source()
        .standard_basis()
        .iter()
        .map(|e| {
            let img = w.apply(e)?;
            ModuleVector::with_tol(module.clone(), img.coords().to_vec(), tol.max(1e-7))
        })
        .collect::<Result<Vec<_>>>()?;
    Frame::with_tol(module.clone(), elements, tol.max(1e-7))
}

/// A frame written as `x_j = mu (a_j + b_j)` with two normalized tight
/// frames of the same module.
#[derive(Debug, Clone)]
pub struct FrameTwoTight {
    pub multiplier: f64,
    pub tight_first: Frame,
    pub tight_second: Frame,
    /// `max_j |x_j - mu (a_j + b_j)|`.
    pub max_residual: f64,
}

/// Split a frame into a multiple of a sum of two normalized tight frames
/// by decomposing its synthesis operator into two partial isometries.
pub fn frame_two_tight(frame: &Frame, tol: f64) -> Result<FrameTwoTight> {
    let (c, _) = frame.optimal_bounds();
    if c <= tol {
        return Err(Error::NotAFrame { lower_bound: c });
    }
    let decomposition = two_partial_isometries(&frame.synthesis(), tol)?;
    let mu = decomposition.scalar;
    let w1 = &decomposition.parts[0].operator;
    let w2 = &decomposition.parts[1].operator;
    let tight_first = image_frame(w1, frame.module(), tol)?;
    let tight_second = image_frame(w2, frame.module(), tol)?;
    let max_residual = frame
        .elements()
        .iter()
        .zip(tight_first.elements().iter().zip(tight_second.elements()))
        .map(|(x, (a, b))| (x - &(a + b).scale_re(mu)).norm())
        .fold(0.0, f64::max);
    Ok(FrameTwoTight {
        multiplier: mu,
        tight_first,
        tight_second,
        max_residual,
    })
}

/// A Riesz basis written as `x_j = mu (u_j + v_j)` with two orthonormal
/// bases.
#[derive(Debug, Clone)]
pub struct RieszTwoOnb {
    pub multiplier: f64,
    pub onb_first: Frame,
    pub onb_second: Frame,
    pub max_residual: f64,
}

/// Combination of two orthonormal bases; succeeds exactly on Riesz bases
/// (invertible synthesis), returns `None` otherwise.
pub fn riesz_two_onb(frame: &Frame, tol: f64) -> Result<Option<RieszTwoOnb>> {
    if !frame.riesz_report(tol).is_riesz_basis {
        return Ok(None);
    }
    let synthesis = frame.synthesis();
    let Some(decomposition) = two_unitaries_iff_invertible(&synthesis, tol)? else {
        return Ok(None);
    };
    let mu = decomposition.scalar;
    let u1 = &decomposition.parts[0].operator;
    let u2 = &decomposition.parts[1].operator;
    let onb_first = image_frame(u1, frame.module(), tol)?;
    let onb_second = image_frame(u2, frame.module(), tol)?;
    let max_residual = frame
        .elements()
        .iter()
        .zip(onb_first.elements().iter().zip(onb_second.elements()))
        .map(|(x, (a, b))| (x - &(a + b).scale_re(mu)).norm())
        .fold(0.0, f64::max);
    Ok(Some(RieszTwoOnb {
        multiplier: mu,
        onb_first,
        onb_second,
        max_residual,
    }))
}

/// A frame with square index written as `x_j = c (f_j + g_j + h_j)` with
/// three orthonormal bases.
#[derive(Debug, Clone)]
pub struct FrameThreeOnb {
    pub multiplier: f64,
    pub onbs: Vec<Frame>,
    pub max_residual: f64,
    /// Norm of the synthesis operator (the multiplier divides by it).
    pub synthesis_norm: f64,
    /// Optimal upper frame bound, recorded next to the synthesis norm
    /// (`|theta*|^2 = D`).
    pub upper_bound: f64,
}

/// Decompose a frame on the full module with `|J| = rank` into three
/// orthonormal bases via the three-unitary split of its synthesis.
pub fn frame_three_onb(frame: &Frame, epsilon: f64, tol: f64) -> Result<FrameThreeOnb> {
    if !frame.module().is_free() || frame.len() != frame.module().rank() {
        return Err(Error::Precondition(format!(
            "three-basis decomposition needs a full module with square index \
             (module rank {}, {} elements)",
            frame.module().rank(),
            frame.len()
        )));
    }
    let synthesis = frame.synthesis();
    let decomposition = three_unitaries(&synthesis, epsilon, tol)?;
    let onbs = decomposition
        .parts
        .iter()
        .map(|p| image_frame(&p.operator, frame.module(), tol))
        .collect::<Result<Vec<_>>>()?;
    let c = decomposition.scalar;
    let max_residual = frame
        .elements()
        .iter()
        .enumerate()
        .map(|(j, x)| {
            let mut sum = frame.module().zero_vector();
            for onb in &onbs {
                sum = &sum + &onb.elements()[j];
            }
            (x - &sum.scale_re(c)).norm()
        })
        .fold(0.0, f64::max);
    Ok(FrameThreeOnb {
        multiplier: c,
        onbs,
        max_residual,
        synthesis_norm: synthesis.norm(),
        upper_bound: frame.optimal_bounds().1,
    })
}

/// The transform image of a tight frame as a half-sum of two orthonormal
/// bases of the index module.
#[derive(Debug, Clone)]
pub struct TightHalfSum {
    pub onb_first: Frame,
    pub onb_second: Frame,
    /// `max_j |theta(x_j) - (f_j + g_j)/2|`.
    pub max_residual: f64,
    /// Unitary defect of the reflection `2P - I`.
    pub reflection_defect: f64,
}

/// For a normalized tight frame, `theta(x_j) = (e_j + (2P - I)e_j)/2` with
/// `P` the transform range projection: two orthonormal bases of `A^J`.
pub fn tight_half_sum(frame: &Frame, tol: f64) -> Result<TightHalfSum> {
    if !frame.is_normalized_tight(tol) {
        let (c, d) = frame.optimal_bounds();
        return Err(Error::Precondition(format!(
            "half-sum needs a normalized tight frame, bounds are ({c:.6}, {d:.6})"
        )));
    }
    let index = frame.index_module().clone();
    let p = frame.transform().range_projection(tol)?;
    let id = ModuleOperator::identity(&index);
    let reflection = p.scale_re(2.0).sub(&id)?;
    let reflection_defect = reflection.predicates(tol).unitary_defect;
    let onb_first = Frame::new(index.clone(), index.standard_basis())?;
    let onb_second = image_frame(&reflection, &index, tol)?;
    let max_residual = frame
        .elements()
        .iter()
        .enumerate()
        .map(|(j, x)| {
            let image = frame.transform().apply(x).expect("same module");
            let half = (&onb_first.elements()[j] + &onb_second.elements()[j]).scale_re(0.5);
            (&image - &half).norm()
        })
        .fold(0.0, f64::max);
    Ok(TightHalfSum {
        onb_first,
        onb_second,
        max_residual,
        reflection_defect,
    })
}

/// The transform image of a frame as a half-sum of two Riesz bases of the
/// index module.
#[derive(Debug, Clone)]
pub struct HalfSumRiesz {
    pub riesz_first: Frame,
    pub riesz_second: Frame,
    /// `max_j |theta_h(x_j) - (r_j + s_j)/2|` for the tight companion
    /// transform `theta_h`.
    pub max_residual: f64,
    pub riesz_reports: (RieszReport, RieszReport),
}

/// Write a standard frame, transported to the index module via its tight
/// companion `{S^{1/2} x_j}`, as a half-sum of two Riesz bases.
///
/// The invertible `T = F^{1/2}` with `x_j = T(S^{1/2} x_j)` dilates to
/// `theta_h T theta_h* P + (I - P)` on `A^J`, and the images of the two
/// half-sum orthonormal bases under this dilation are the Riesz bases.
pub fn frame_half_sum_riesz(frame: &Frame, tol: f64) -> Result<HalfSumRiesz> {
    let (c, _) = frame.optimal_bounds();
    if c <= tol {
        return Err(Error::NotAFrame { lower_bound: c });
    }
    let f = frame.frame_product();
    let s = f.funcalc(SpectralFn::Pinv, tol)?;
    let s_half = s.funcalc(SpectralFn::Sqrt, tol)?;
    let companion = frame.transformed(&s_half)?;
    let t = f.funcalc(SpectralFn::Sqrt, tol)?;

    let halves = tight_half_sum(&companion, tol.max(1e-7))?;
    let theta_h = companion.transform();
    let p = theta_h.range_projection(tol)?;
    let id = ModuleOperator::identity(frame.index_module());
    let dilated_t = p
        .then(&companion.synthesis())?
        .then(&t)?
        .then(theta_h)?
        .add(&id.sub(&p)?)?;

    let riesz_first = halves.onb_first.transformed(&dilated_t)?;
    let riesz_second = halves.onb_second.transformed(&dilated_t)?;
    let max_residual = frame
        .elements()
        .iter()
        .enumerate()
        .map(|(j, x)| {
            let image = theta_h.apply(x).expect("same module");
            let half =
                (&riesz_first.elements()[j] + &riesz_second.elements()[j]).scale_re(0.5);
            (&image - &half).norm()
        })
        .fold(0.0, f64::max);
    let reports = (
        riesz_first.riesz_report(tol.max(1e-7)),
        riesz_second.riesz_report(tol.max(1e-7)),
    );
    Ok(HalfSumRiesz {
        riesz_first,
        riesz_second,
        max_residual,
        riesz_reports: reports,
    })
}

/// A frame with square index written as `x_j = mu (u_j + r_j)` with an
/// orthonormal basis `{u_j}` and a Riesz basis `{r_j}`.
#[derive(Debug, Clone)]
pub struct OnbPlusRiesz {
    pub multiplier: f64,
    /// The derived shift `c` in `theta* = mu (W_1 + W_2 - c I)`; the
    /// algebra forces `c = 1/2`.
    pub shift: f64,
    pub onb: Frame,
    pub riesz: Frame,
    pub max_residual: f64,
    pub riesz_certificate: RieszReport,
}

/// Split a frame on a full module with square index into an orthonormal
/// basis plus a Riesz basis.
///
/// With `4T' = I + (1 - epsilon) theta*/|theta*|` the operator `T'` is
/// invertible and a mean of two unitaries `W_1, W_2`; unwinding gives
/// `theta* = mu (W_1 + (W_2 - c I))` with `mu = 2 |theta*| / (1 - epsilon)`
/// and a scalar shift `c` that is fitted numerically and certified by the
/// recombination residual. The spectrum of the unitary `W_2` stays at
/// distance `1/2` from `c = 1/2`, so the shifted part is invertible and
/// its basis image is Riesz.
pub fn frame_onb_plus_riesz(
    frame: &Frame,
    epsilon: f64,
    tol: f64,
) -> Result<OnbPlusRiesz> {
    if !(0.0 < epsilon && epsilon < 1.0) {
        return Err(Error::Precondition(
            "epsilon must lie strictly between 0 and 1".into(),
        ));
    }
    if !frame.module().is_free() || frame.len() != frame.module().rank() {
        return Err(Error::Precondition(format!(
            "basis-plus-Riesz decomposition needs a full module with square index \
             (module rank {}, {} elements)",
            frame.module().rank(),
            frame.len()
        )));
    }
    let (c_bound, _) = frame.optimal_bounds();
    if c_bound <= tol {
        return Err(Error::NotAFrame {
            lower_bound: c_bound,
        });
    }
    let synthesis = frame.synthesis();
    let norm = synthesis.norm();
    let id = ModuleOperator::identity(frame.module());
    let shifted = id
        .add(&synthesis.scale_re((1.0 - epsilon) / norm))?
        .scale_re(0.25);
    let contraction_gap = id.sub(&shifted)?.norm();
    if contraction_gap >= 1.0 {
        return Err(Error::Precondition(format!(
            "shifted operator is not a contraction of the identity: gap {contraction_gap:.6}"
        )));
    }
    let (v, r) = shifted.polar(tol)?;
    let (u_plus, u_minus) = unitary_halves(&r, tol)?;
    let w1 = u_plus.then(&v)?;
    let w2 = u_minus.then(&v)?;
    let mu = 2.0 * norm / (1.0 - epsilon);

    // fit the scalar shift from theta* = mu (W1 + W2 - c I)
    let mismatch = w1.add(&w2)?.sub(&synthesis.scale_re(1.0 / mu))?;
    let dim = mismatch.matrix().flat_dimension();
    let shift = mismatch.matrix().flat_trace().re / dim as f64;
    let shifted_part = w2.sub(&id.scale_re(shift))?;
    let max_residual = {
        let recombined = w1.add(&shifted_part)?.scale_re(mu);
        synthesis.sub(&recombined)?.norm()
    };

    let onb = image_frame(&w1, frame.module(), tol)?;
    let riesz = image_frame(&shifted_part, frame.module(), tol)?;
    let riesz_certificate = riesz.riesz_report(tol.max(1e-7));
    Ok(OnbPlusRiesz {
        multiplier: mu,
        shift,
        onb,
        riesz,
        max_residual,
        riesz_certificate,
    })
}
