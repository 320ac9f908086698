//! Seeded random builders for algebras, modules, operators and frames.
//!
//! Everything is deterministic in the seed: Gaussian draws come from a
//! ChaCha stream and all reduction orders are fixed, so a fixture generated
//! twice from the same seed is identical down to the last bit. Unitaries are
//! built by orthonormalizing complex Gaussian blocks, projections from
//! random spectral splits of those unitaries.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::algebra::{AlgElement, AlgebraDescriptor};
use crate::frame::Frame;
use crate::linalg::{self, CMatrix};
use crate::matrix::AlgMatrix;
use crate::module::{apply_matrix, HilbertModule, ModuleVector};
use crate::operator::ModuleOperator;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn random_cmatrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let mut m = CMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = random_complex(rng);
        }
    }
    m
}

pub fn random_alg_element(descriptor: &AlgebraDescriptor, rng: &mut ChaCha8Rng) -> AlgElement {
    let blocks = descriptor
        .blocks()
        .iter()
        .map(|&d| random_cmatrix(d, d, rng))
        .collect();
    AlgElement::from_blocks(descriptor.clone(), blocks).expect("shapes match by construction")
}

pub fn random_hermitian_element(
    descriptor: &AlgebraDescriptor,
    rng: &mut ChaCha8Rng,
) -> AlgElement {
    let raw = random_alg_element(descriptor, rng);
    (&raw + &raw.adjoint()).scale_re(0.5)
}

pub fn random_alg_matrix(
    descriptor: &AlgebraDescriptor,
    rows: usize,
    cols: usize,
    rng: &mut ChaCha8Rng,
) -> AlgMatrix {
    let mut m = AlgMatrix::zeros(descriptor, rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, random_alg_element(descriptor, rng));
        }
    }
    m
}

/// A unitary `n x n` matrix over the algebra: blockwise QR of Gaussians.
pub fn random_unitary_matrix(
    descriptor: &AlgebraDescriptor,
    n: usize,
    rng: &mut ChaCha8Rng,
) -> AlgMatrix {
    let blocks: Vec<CMatrix> = descriptor
        .blocks()
        .iter()
        .map(|&d| linalg::qr_unitary(&random_cmatrix(n * d, n * d, rng)))
        .collect();
    AlgMatrix::unflatten(descriptor, n, n, &blocks).expect("unitary blocks have matching shape")
}

/// A self-adjoint idempotent from a random spectral split.
///
/// Per algebra block the flattened rank is drawn uniformly from
/// `1..=(n d_k - 1)` when possible, so the projection is proper whenever the
/// block allows it.
pub fn random_projection_matrix(
    descriptor: &AlgebraDescriptor,
    n: usize,
    rng: &mut ChaCha8Rng,
) -> AlgMatrix {
    let blocks: Vec<CMatrix> = descriptor
        .blocks()
        .iter()
        .map(|&d| {
            let dim = n * d;
            let u = linalg::qr_unitary(&random_cmatrix(dim, dim, rng));
            let rank = if dim > 1 { rng.random_range(1..dim) } else { 1 };
            let mut diag = CMatrix::zeros(dim, dim);
            for i in 0..rank {
                diag[(i, i)] = Complex64::new(1.0, 0.0);
            }
            &u * diag * u.adjoint()
        })
        .collect();
    AlgMatrix::unflatten(descriptor, n, n, &blocks).expect("projection blocks match shape")
}

pub fn random_module(
    descriptor: &AlgebraDescriptor,
    rank: usize,
    rng: &mut ChaCha8Rng,
) -> HilbertModule {
    let p = random_projection_matrix(descriptor, rank, rng);
    HilbertModule::summand(descriptor.clone(), rank, p).expect("spectral split is a projection")
}

/// A random vector of the module: Gaussian ambient coordinates projected in.
pub fn random_module_vector(module: &HilbertModule, rng: &mut ChaCha8Rng) -> ModuleVector {
    let raw: Vec<AlgElement> = (0..module.rank())
        .map(|_| random_alg_element(module.algebra(), rng))
        .collect();
    let coords = match module.projection_ref() {
        None => raw,
        Some(p) => apply_matrix(&raw, p),
    };
    ModuleVector::new(module.clone(), coords).expect("projected coordinates are in the module")
}

/// A compressed random operator `P_K raw P_H` between two modules.
pub fn random_operator(
    source: &HilbertModule,
    target: &HilbertModule,
    rng: &mut ChaCha8Rng,
) -> ModuleOperator {
    let raw = random_alg_matrix(source.algebra(), source.rank(), target.rank(), rng);
    let compressed = source
        .projection_matrix()
        .then(&raw)
        .then(&target.projection_matrix());
    ModuleOperator::new(source.clone(), target.clone(), compressed)
        .expect("compressed matrix is a module operator")
}

/// An invertible operator of a module onto itself with restricted singular
/// values drawn from `sv_range`. On the ambient complement it acts as zero.
pub fn random_invertible_on(
    module: &HilbertModule,
    sv_range: (f64, f64),
    rng: &mut ChaCha8Rng,
) -> ModuleOperator {
    let p_blocks = module.projection_matrix().flatten();
    let blocks: Vec<CMatrix> = p_blocks
        .iter()
        .map(|p| {
            let q = linalg::projection_range_basis(p);
            let r = q.ncols();
            if r == 0 {
                return CMatrix::zeros(p.nrows(), p.ncols());
            }
            let u = linalg::qr_unitary(&random_cmatrix(r, r, rng));
            let w = linalg::qr_unitary(&random_cmatrix(r, r, rng));
            let mut diag = CMatrix::zeros(r, r);
            for i in 0..r {
                let s = rng.random_range(sv_range.0..sv_range.1);
                diag[(i, i)] = Complex64::new(s, 0.0);
            }
            &q * u * diag * w.adjoint() * q.adjoint()
        })
        .collect();
    ModuleOperator::from_flat_blocks(module, module, &blocks)
        .expect("blockwise construction is compressed")
}

/// An invertible operator whose restricted singular values straddle one:
/// the smallest is pinned below one and the largest above one whenever the
/// module has at least two flat dimensions in some block.
pub fn random_straddling_invertible_on(
    module: &HilbertModule,
    rng: &mut ChaCha8Rng,
) -> ModuleOperator {
    let p_blocks = module.projection_matrix().flatten();
    let mut first_block_with_room = true;
    let blocks: Vec<CMatrix> = p_blocks
        .iter()
        .map(|p| {
            let q = linalg::projection_range_basis(p);
            let r = q.ncols();
            if r == 0 {
                return CMatrix::zeros(p.nrows(), p.ncols());
            }
            let u = linalg::qr_unitary(&random_cmatrix(r, r, rng));
            let w = linalg::qr_unitary(&random_cmatrix(r, r, rng));
            let mut diag = CMatrix::zeros(r, r);
            for i in 0..r {
                let s = if first_block_with_room && i == 0 {
                    rng.random_range(0.55..0.95)
                } else if first_block_with_room && i == 1 {
                    rng.random_range(1.05..1.8)
                } else {
                    rng.random_range(0.55..1.8)
                };
                diag[(i, i)] = Complex64::new(s, 0.0);
            }
            if r >= 2 {
                first_block_with_room = false;
            }
            &q * u * diag * w.adjoint() * q.adjoint()
        })
        .collect();
    ModuleOperator::from_flat_blocks(module, module, &blocks)
        .expect("blockwise construction is compressed")
}

/// A random partial isometry on the free module `A^j`: a proper projection
/// followed by a unitary.
pub fn random_partial_isometry(
    descriptor: &AlgebraDescriptor,
    j: usize,
    rng: &mut ChaCha8Rng,
) -> ModuleOperator {
    let free = HilbertModule::free(descriptor.clone(), j);
    let p = random_projection_matrix(descriptor, j, rng);
    let u = random_unitary_matrix(descriptor, j, rng);
    ModuleOperator::new_unchecked(free.clone(), free, p.then(&u))
}

/// A standard normalized tight frame with `j` elements, living on a random
/// summand of `A^j`.
pub fn random_snt_frame(
    descriptor: &AlgebraDescriptor,
    j: usize,
    rng: &mut ChaCha8Rng,
) -> Frame {
    let v = random_partial_isometry(descriptor, j, rng);
    Frame::from_partial_isometry(&v, crate::DEFAULT_TOL).expect("image of a partial isometry")
}

/// A standard frame: an invertible image of a tight frame, singular values
/// straddling one so its bounds satisfy `C <= 1 <= D`.
pub fn random_standard_frame(
    descriptor: &AlgebraDescriptor,
    j: usize,
    rng: &mut ChaCha8Rng,
) -> Frame {
    let snt = random_snt_frame(descriptor, j, rng);
    let t = random_straddling_invertible_on(snt.module(), rng);
    snt.transformed(&t).expect("invertible image of a frame")
}

/// A Riesz basis of the full module `A^n`: an invertible image of the
/// standard orthonormal basis.
pub fn random_riesz_basis(
    descriptor: &AlgebraDescriptor,
    n: usize,
    rng: &mut ChaCha8Rng,
) -> Frame {
    let free = HilbertModule::free(descriptor.clone(), n);
    let onb = Frame::new(free.clone(), free.standard_basis()).expect("orthonormal basis frames");
    let t = random_invertible_on(&free, (0.5, 2.0), rng);
    onb.transformed(&t).expect("invertible image of a basis")
}

fn projection_pair_blocks(
    dim: usize,
    rng: &mut ChaCha8Rng,
    overlapping: bool,
) -> (CMatrix, CMatrix) {
    let u = linalg::qr_unitary(&random_cmatrix(dim, dim, rng));
    // split the spectrum into two disjoint (or overlapping) index sets
    let r1 = if dim > 2 { rng.random_range(1..dim - 1) } else { 1 };
    let left = dim - r1;
    let r2 = if overlapping {
        if left > 0 { rng.random_range(1..=left) } else { 1 }
    } else if left > 1 {
        rng.random_range(1..left)
    } else {
        // no room for a proper disjoint complement partner; reuse size 0
        0
    };
    let mut d1 = CMatrix::zeros(dim, dim);
    for i in 0..r1 {
        d1[(i, i)] = Complex64::new(1.0, 0.0);
    }
    let mut d2 = CMatrix::zeros(dim, dim);
    if overlapping {
        // share direction 0, then continue past r1
        d2[(0, 0)] = Complex64::new(1.0, 0.0);
        for i in 0..r2.saturating_sub(1) {
            d2[(r1 + i, r1 + i)] = Complex64::new(1.0, 0.0);
        }
    } else {
        for i in 0..r2 {
            d2[(r1 + i, r1 + i)] = Complex64::new(1.0, 0.0);
        }
    }
    (&u * d1 * u.adjoint(), &u * d2 * u.adjoint())
}

fn frame_of_projection(
    descriptor: &AlgebraDescriptor,
    j: usize,
    blocks: &[CMatrix],
) -> Frame {
    let free = HilbertModule::free(descriptor.clone(), j);
    let p = AlgMatrix::unflatten(descriptor, j, j, blocks).expect("projection blocks");
    let v = ModuleOperator::new_unchecked(free.clone(), free, p);
    Frame::from_partial_isometry(&v, crate::DEFAULT_TOL).expect("projection image frames")
}

/// Two tight frames whose transform ranges are orthogonal proper
/// subprojections (strongly disjoint, not complementary).
pub fn disjoint_pair(
    descriptor: &AlgebraDescriptor,
    j: usize,
    rng: &mut ChaCha8Rng,
) -> (Frame, Frame) {
    let mut p_blocks = Vec::new();
    let mut q_blocks = Vec::new();
    for &d in descriptor.blocks() {
        let (p, q) = projection_pair_blocks(j * d, rng, false);
        p_blocks.push(p);
        q_blocks.push(q);
    }
    (
        frame_of_projection(descriptor, j, &p_blocks),
        frame_of_projection(descriptor, j, &q_blocks),
    )
}

/// The canonical strongly complementary pair: frames of `P` and `I - P`.
pub fn complementary_pair(
    descriptor: &AlgebraDescriptor,
    j: usize,
    rng: &mut ChaCha8Rng,
) -> (Frame, Frame) {
    let p = random_projection_matrix(descriptor, j, rng);
    let q = AlgMatrix::identity(descriptor, j).sub(&p);
    (
        frame_of_projection(descriptor, j, &p.flatten()),
        frame_of_projection(descriptor, j, &q.flatten()),
    )
}

/// Two tight frames whose ranges share at least one common direction.
pub fn overlapping_pair(
    descriptor: &AlgebraDescriptor,
    j: usize,
    rng: &mut ChaCha8Rng,
) -> (Frame, Frame) {
    let mut p_blocks = Vec::new();
    let mut q_blocks = Vec::new();
    for &d in descriptor.blocks() {
        let (p, q) = projection_pair_blocks(j * d, rng, true);
        p_blocks.push(p);
        q_blocks.push(q);
    }
    (
        frame_of_projection(descriptor, j, &p_blocks),
        frame_of_projection(descriptor, j, &q_blocks),
    )
}

/// Two tight frames whose ranges have complementary dimensions but sit in
/// generic position: trivial intersection and invertible sum, yet not
/// orthogonal.
pub fn generic_position_pair(
    descriptor: &AlgebraDescriptor,
    j: usize,
    rng: &mut ChaCha8Rng,
) -> (Frame, Frame) {
    let mut p_blocks = Vec::new();
    let mut q_blocks = Vec::new();
    for &d in descriptor.blocks() {
        let dim = j * d;
        let r = if dim > 1 { rng.random_range(1..dim) } else { 1 };
        let u = linalg::qr_unitary(&random_cmatrix(dim, dim, rng));
        let v = linalg::qr_unitary(&random_cmatrix(dim, dim, rng));
        let mut d1 = CMatrix::zeros(dim, dim);
        for i in 0..r {
            d1[(i, i)] = Complex64::new(1.0, 0.0);
        }
        let mut d2 = CMatrix::zeros(dim, dim);
        for i in 0..(dim - r) {
            d2[(i, i)] = Complex64::new(1.0, 0.0);
        }
        p_blocks.push(&u * d1 * u.adjoint());
        q_blocks.push(&v * d2 * v.adjoint());
    }
    (
        frame_of_projection(descriptor, j, &p_blocks),
        frame_of_projection(descriptor, j, &q_blocks),
    )
}

/// Two strongly disjoint tight frames of the same full module `A^n`, with
/// `2n` elements each. Useful for scalar combinations such as
/// `alpha x_j + beta y_j`.
pub fn common_module_disjoint_pair(
    descriptor: &AlgebraDescriptor,
    n: usize,
    rng: &mut ChaCha8Rng,
) -> (Frame, Frame) {
    let j = 2 * n;
    let free_j = HilbertModule::free(descriptor.clone(), j);
    let free_n = HilbertModule::free(descriptor.clone(), n);
    let w = random_unitary_matrix(descriptor, j, rng);
    let mut top = AlgMatrix::zeros(descriptor, j, n);
    let mut bottom = AlgMatrix::zeros(descriptor, j, n);
    for i in 0..n {
        top.set(i, i, AlgElement::unit(descriptor));
        bottom.set(n + i, i, AlgElement::unit(descriptor));
    }
    let v1 = ModuleOperator::new_unchecked(free_j.clone(), free_n.clone(), w.then(&top));
    let v2 = ModuleOperator::new_unchecked(free_j, free_n, w.then(&bottom));
    (
        Frame::from_partial_isometry(&v1, crate::DEFAULT_TOL).expect("coisometry image"),
        Frame::from_partial_isometry(&v2, crate::DEFAULT_TOL).expect("coisometry image"),
    )
}
