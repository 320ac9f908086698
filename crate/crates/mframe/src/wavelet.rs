//! Concrete frames over discretized function algebras.
//!
//! The commutative algebra here is `C^m`, functions on a grid of one
//! period, acting by pointwise multiplication: every statement about
//! frames of modules over it is a statement about families of sampled
//! functions.
//!
//! Three instances are built:
//!
//! - a partition-of-unity frame on the dyadic grid `t_i = i / 2^L`,
//!   `i = 1..2^L`, whose squared elements sum to one at every grid point,
//!   hence a normalized tight frame of the rank-one module;
//! - the single-generator family `{f(t) = t}`, whose optimal lower bound
//!   `min_i t_i^2 = 4^{-L}` collapses to zero under refinement: on the
//!   continuum the set generates but is not a frame;
//! - translate systems `{phi_k}` of compactly supported sampled functions
//!   with the bracket product `<phi, psi>(t) = sum_p (conj(phi) psi)(t - p)`
//!   as algebra-valued inner product. A `k`-generator system becomes a
//!   frame of the free module `B^k` whose Gram over `B` is the bracket
//!   Gram; pairwise orthonormal generators give a normalized tight frame.
//!
//! The grid excludes `t = 0` (functions vanish there in the continuum
//! limit), which keeps the single-generator bound strictly positive at
//! every finite level while exhibiting the collapse.

use num_complex::Complex64;

use crate::algebra::{AlgElement, AlgebraDescriptor};
use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::linalg::{self, CMatrix};
use crate::module::{HilbertModule, ModuleVector};

/// A compactly supported function sampled at `samples_per_unit` points per
/// unit interval, starting at an integer number of periods.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    samples_per_unit: usize,
    support_start: i64,
    samples: Vec<Complex64>,
}

impl SampledFunction {
    pub fn new(
        samples_per_unit: usize,
        support_start: i64,
        samples: Vec<Complex64>,
    ) -> Result<Self> {
        if samples_per_unit == 0 {
            return Err(Error::ShapeMismatch(
                "samples_per_unit must be positive".into(),
            ));
        }
        if samples.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::ShapeMismatch(
                "sampled values must be finite".into(),
            ));
        }
        Ok(Self {
            samples_per_unit,
            support_start,
            samples,
        })
    }

    /// The unit indicator of `[0, periods)`.
    pub fn indicator(samples_per_unit: usize, start: i64, periods: usize) -> Self {
        Self {
            samples_per_unit,
            support_start: start,
            samples: vec![Complex64::new(1.0, 0.0); samples_per_unit * periods],
        }
    }

    /// The indicator of one period starting at zero.
    pub fn haar(samples_per_unit: usize) -> Self {
        Self::indicator(samples_per_unit, 0, 1)
    }

    pub fn samples_per_unit(&self) -> usize {
        self.samples_per_unit
    }

    pub fn support_start(&self) -> i64 {
        self.support_start
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }
}

/// An element of the discretized period algebra: one value per grid point
/// `r / m`, `r = 0..m-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodizedElement {
    values: Vec<Complex64>,
}

impl PeriodizedElement {
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn as_alg_element(&self) -> AlgElement {
        AlgElement::from_diagonal_values(&self.values).expect("diagonal element")
    }

    pub fn max_deviation_from(&self, constant: f64) -> f64 {
        self.values
            .iter()
            .map(|z| (z - Complex64::new(constant, 0.0)).norm())
            .fold(0.0, f64::max)
    }
}

/// The bracket product `<phi, psi>(t) = sum_p (conj(phi) psi)(t - p)`:
/// pointwise conjugate-product folded over integer translates into one
/// period.
pub fn bracket(phi: &SampledFunction, psi: &SampledFunction) -> Result<PeriodizedElement> {
    if phi.samples_per_unit != psi.samples_per_unit {
        return Err(Error::ShapeMismatch(format!(
            "bracket needs a shared grid: {} vs {} samples per unit",
            phi.samples_per_unit, psi.samples_per_unit
        )));
    }
    let m = phi.samples_per_unit;
    let mut values = vec![Complex64::ZERO; m];
    let a_start = phi.support_start * m as i64;
    let b_start = psi.support_start * m as i64;
    let lo = a_start.max(b_start);
    let hi = (a_start + phi.samples.len() as i64).min(b_start + psi.samples.len() as i64);
    for g in lo..hi {
        let a = phi.samples[(g - a_start) as usize];
        let b = psi.samples[(g - b_start) as usize];
        values[g.rem_euclid(m as i64) as usize] += a.conj() * b;
    }
    Ok(PeriodizedElement { values })
}

/// Scaling profile: `2t` on `[0, 1/2]`, `2 sqrt(t - t^2)` on `[1/2, 1]`,
/// zero outside the unit interval.
fn profile(t: f64) -> f64 {
    if !(0.0..=1.0).contains(&t) {
        0.0
    } else if t <= 0.5 {
        2.0 * t
    } else {
        2.0 * (t - t * t).max(0.0).sqrt()
    }
}

/// The `n`-th partition function evaluated at `t` in `(0, 1]`.
///
/// The first function rises on `[1/2, 1]`; the later ones live on the
/// dyadic shells `[2^{-n}, 2^{-(n-2)}]`, rising on the left half of the
/// shell and falling on the right half. Neighbouring squares telescope to
/// one.
fn partition_function(n: usize, t: f64) -> f64 {
    debug_assert!(n >= 1);
    if n == 1 {
        if t >= 0.5 {
            profile(t - 0.5)
        } else {
            0.0
        }
    } else {
        let lo = 0.5f64.powi(n as i32);
        let mid = 0.5f64.powi(n as i32 - 1);
        let hi = 0.5f64.powi(n as i32 - 2);
        if t < lo || t > hi {
            0.0
        } else if t <= mid {
            profile(t / (2.0 * lo) - 0.5)
        } else {
            profile(t / (2.0 * mid))
        }
    }
}

/// Grid values of the `levels + 1` partition functions on the dyadic grid
/// `t_i = i / 2^levels`, `i = 1..2^levels`. Beyond that count every
/// further function vanishes on the grid.
pub fn partition_values(levels: u32) -> Vec<Vec<f64>> {
    let m = 1usize << levels;
    (1..=(levels as usize + 1))
        .map(|n| {
            (1..=m)
                .map(|i| partition_function(n, i as f64 / m as f64))
                .collect()
        })
        .collect()
}

/// The partition-of-unity frame on the dyadic grid of `2^levels` points:
/// `levels + 1` sampled functions in the rank-one module over the
/// diagonal algebra, normalized tight because the squares sum to one at
/// every grid point.
pub fn cantor_frame(levels: u32) -> Result<Frame> {
    if levels == 0 {
        return Err(Error::Precondition("need at least one level".into()));
    }
    let m = 1usize << levels;
    let algebra = AlgebraDescriptor::diagonal(m)?;
    let module = HilbertModule::free(algebra, 1);
    let elements = partition_values(levels)
        .into_iter()
        .map(|values| {
            let complex: Vec<Complex64> =
                values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
            let coord = AlgElement::from_diagonal_values(&complex)?;
            ModuleVector::new(module.clone(), vec![coord])
        })
        .collect::<Result<Vec<_>>>()?;
    Frame::new(module, elements)
}

/// Largest deviation of `sum_n f_n(t_i)^2` from one over the grid.
pub fn partition_defect(levels: u32) -> f64 {
    let values = partition_values(levels);
    let m = 1usize << levels;
    (0..m)
        .map(|i| {
            let total: f64 = values.iter().map(|f| f[i] * f[i]).sum();
            (total - 1.0).abs()
        })
        .fold(0.0, f64::max)
}

/// The single-generator family `{f(t) = t}` on the dyadic grid, as a
/// one-element frame of the rank-one module.
pub fn single_generator_frame(levels: u32) -> Result<Frame> {
    if levels == 0 {
        return Err(Error::Precondition("need at least one level".into()));
    }
    let m = 1usize << levels;
    let algebra = AlgebraDescriptor::diagonal(m)?;
    let module = HilbertModule::free(algebra, 1);
    let values: Vec<Complex64> = (1..=m)
        .map(|i| Complex64::new(i as f64 / m as f64, 0.0))
        .collect();
    let coord = AlgElement::from_diagonal_values(&values)?;
    let x = ModuleVector::new(module.clone(), vec![coord])?;
    Frame::new(module, vec![x])
}

/// Optimal lower frame bound of the single generator `{f(t) = t}` on the
/// grid of `2^levels` points: `min_i t_i^2`, which is exactly `4^{-levels}`
/// and collapses to zero under refinement.
pub fn single_generator_bound(levels: u32) -> f64 {
    let m = 1usize << levels;
    (1..=m)
        .map(|i| {
            let t = i as f64 / m as f64;
            t * t
        })
        .fold(f64::INFINITY, f64::min)
}

/// Embed a translate system of `k` generators as a frame of the free
/// module `B^k` over the discretized period algebra `B`.
///
/// The frame is chosen with bracket-accurate geometry: its Gram over `B`
/// equals the bracket Gram of the generators (the rows of the pointwise
/// positive square root serve as coordinates). Degenerate systems, for
/// example a generator with a zero on the period grid, simply report a
/// vanishing lower bound.
pub fn translates_to_module_frame(generators: &[SampledFunction]) -> Result<Frame> {
    if generators.is_empty() {
        return Err(Error::EmptyFrame);
    }
    let m = generators[0].samples_per_unit();
    let k = generators.len();
    // bracket Gram, one k x k Hermitian matrix per grid point
    let mut gram = vec![CMatrix::zeros(k, k); m];
    for i in 0..k {
        for j in 0..k {
            let b = bracket(&generators[i], &generators[j])?;
            for (r, value) in b.values().iter().enumerate() {
                gram[r][(i, j)] = *value;
            }
        }
    }
    // pointwise positive square root
    let roots: Vec<CMatrix> = gram
        .iter()
        .map(|g| {
            let (values, q) = linalg::hermitian_eigen(g);
            let mut diag = CMatrix::zeros(k, k);
            for (i, &v) in values.iter().enumerate() {
                diag[(i, i)] = Complex64::new(v.max(0.0).sqrt(), 0.0);
            }
            &q * diag * q.adjoint()
        })
        .collect();

    let algebra = AlgebraDescriptor::diagonal(m)?;
    let module = HilbertModule::free(algebra, k);
    let elements = (0..k)
        .map(|j| {
            let coords = (0..k)
                .map(|l| {
                    let values: Vec<Complex64> = roots.iter().map(|r| r[(j, l)]).collect();
                    AlgElement::from_diagonal_values(&values)
                })
                .collect::<Result<Vec<_>>>()?;
            ModuleVector::new(module.clone(), coords)
        })
        .collect::<Result<Vec<_>>>()?;
    Frame::new(module, elements)
}
