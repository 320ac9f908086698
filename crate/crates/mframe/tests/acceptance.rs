//! Acceptance suite: one test per criterion, each printing a pass line.
//!
//! Every tolerance is pinned in the assertions below. The companion
//! command-line contract (byte-exact serialization, golden reports, exit
//! codes) is criterion 13 and lives in the `mframe-cli` crate's `cli`
//! test, which prints its own line.
//!
//! Run with `cargo test -p mframe --test acceptance -- --nocapture` to see
//! the lines.

use num_complex::Complex64;

use mframe::algebra::{AlgElement, AlgebraDescriptor};
use mframe::fixture;
use mframe::frame::Frame;
use mframe::module::{HilbertModule, ModuleVector};
use mframe::operator::ModuleOperator;
use mframe::{decomp, dilation, disjoint, wavelet};

fn algebras() -> Vec<AlgebraDescriptor> {
    vec![
        AlgebraDescriptor::scalar(),
        AlgebraDescriptor::new(vec![2]).unwrap(),
        AlgebraDescriptor::new(vec![2, 1]).unwrap(),
        AlgebraDescriptor::new(vec![1, 1, 2]).unwrap(),
        AlgebraDescriptor::new(vec![3]).unwrap(),
    ]
}

fn pass(n: usize, what: &str) {
    println!("[PASS] criterion {n}: {what}");
}

#[test]
fn criterion_01_partial_isometry_frames() {
    let algebras = algebras();
    for seed in 0..50u64 {
        let alg = &algebras[(seed % algebras.len() as u64) as usize];
        let j = 3 + (seed % 3) as usize;
        let mut rng = fixture::rng(seed);
        let frame = fixture::random_snt_frame(alg, j, &mut rng);
        let (c, d) = frame.optimal_bounds();
        assert!(
            (c - 1.0).abs() <= 1e-9 && (d - 1.0).abs() <= 1e-9,
            "seed {seed}: bounds ({c}, {d})"
        );
    }
    pass(1, "50 seeded partial-isometry frames have bounds within 1e-9 of (1, 1)");
}

#[test]
fn criterion_02_canonical_reconstruction() {
    let algebras = algebras();
    for seed in 0..50u64 {
        let alg = &algebras[(seed % algebras.len() as u64) as usize];
        let j = 3 + (seed % 3) as usize;
        let mut rng = fixture::rng(1000 + seed);
        let frame = fixture::random_standard_frame(alg, j, &mut rng);
        let dual = frame.canonical_dual(1e-9).unwrap();
        for _ in 0..100 {
            let x = fixture::random_module_vector(frame.module(), &mut rng);
            let (_, residual) = frame.reconstruct(&dual, &x).unwrap();
            assert!(
                residual <= 1e-8 * (1.0 + x.norm()),
                "seed {seed}: residual {residual}"
            );
        }
    }
    pass(2, "canonical-dual reconstruction residual <= 1e-8 (1 + |x|) on 50 frames x 100 vectors");
}

#[test]
fn criterion_03_bound_optimality() {
    let algebras = algebras();
    for seed in 0..50u64 {
        let alg = &algebras[(seed % algebras.len() as u64) as usize];
        let j = 3 + (seed % 3) as usize;
        let mut rng = fixture::rng(2000 + seed);
        let frame = fixture::random_standard_frame(alg, j, &mut rng);
        let (c, d) = frame.optimal_bounds();
        assert!(frame.verify(c, d, 1e-9, seed, 50).pass, "seed {seed}: optimal bounds rejected");
        assert!(
            !frame.verify(c * 1.01, d, 1e-9, seed, 50).pass,
            "seed {seed}: inflated lower bound accepted"
        );
        assert!(
            !frame.verify(c, d * 0.99, 1e-9, seed, 50).pass,
            "seed {seed}: deflated upper bound accepted"
        );
    }
    pass(3, "verify passes at optimal bounds, fails at 1.01 C and 0.99 D on all seeded frames");
}

#[test]
fn criterion_04_dilation() {
    let algebras = algebras();
    for seed in 0..25u64 {
        let alg = &algebras[(seed % algebras.len() as u64) as usize];
        let j = 3 + (seed % 3) as usize;
        let mut rng = fixture::rng(3000 + seed);

        // tight complements: exact orthonormal diagonal inner products
        let snt = fixture::random_snt_frame(alg, j, &mut rng);
        let result = dilation::tight_complement(&snt, 1e-9).unwrap();
        let unit = AlgElement::unit(alg);
        for (a, bj) in result.dilated_basis.elements().iter().enumerate() {
            for (b, bk) in result.dilated_basis.elements().iter().enumerate() {
                let g = bj.inner(bk).unwrap();
                let expect = if a == b { unit.clone() } else { AlgElement::zero(alg) };
                assert!(
                    (&g - &expect).norm() <= 1e-9,
                    "seed {seed}: inner product defect at ({a}, {b})"
                );
            }
        }

        // Riesz complements: bounds preserved, basis property, round trip
        let frame = fixture::random_standard_frame(alg, j, &mut rng);
        let result = dilation::riesz_complement(&frame, 1e-9).unwrap();
        let (c0, d0) = result.input_bounds;
        let (c1, d1) = result.dilated_bounds;
        assert!(
            (c0 - c1).abs() <= 1e-9 && (d0 - d1).abs() <= 1e-9,
            "seed {seed}: bounds moved from ({c0}, {d0}) to ({c1}, {d1})"
        );
        assert!(
            result.riesz_certificate.as_ref().unwrap().is_riesz_basis,
            "seed {seed}: dilated family is not a Riesz basis"
        );
        let back = dilation::compress_to_first(&result.dilated_basis, frame.module()).unwrap();
        for (x, y) in back.elements().iter().zip(frame.elements()) {
            assert_eq!(x.coords(), y.coords(), "seed {seed}: round trip not exact");
        }
    }
    pass(4, "tight complements are exactly orthonormal, Riesz complements preserve bounds and round-trip");
}

#[test]
fn criterion_05_complement_uniqueness() {
    let algebras = algebras();
    for seed in 0..25u64 {
        let alg = &algebras[(seed % algebras.len() as u64) as usize];
        let j = 3 + (seed % 2) as usize;
        let mut rng = fixture::rng(4000 + seed);
        let frame = fixture::random_snt_frame(alg, j, &mut rng);
        let y = dilation::tight_complement(&frame, 1e-9).unwrap().complement_frame;

        // twin complement through a seeded ambient unitary
        let m = y.module().clone();
        let w = fixture::random_unitary_matrix(alg, m.rank(), &mut rng);
        let p = m.projection_matrix();
        let rotated = w.adjoint().then(&p).then(&w);
        let target = HilbertModule::summand(alg.clone(), m.rank(), rotated).unwrap();
        let u = ModuleOperator::new(
            m.clone(),
            target.clone(),
            p.then(&w).then(&target.projection_matrix()),
        )
        .unwrap();
        let z = y.transformed(&u).unwrap();

        let result = dilation::complement_uniqueness_unitary(&frame, &y, &z, 1e-8).unwrap();
        assert!(
            result.map_residual <= 1e-8,
            "seed {seed}: map residual {}",
            result.map_residual
        );
        assert!(
            result.unitary_defect <= 1e-8,
            "seed {seed}: unitary defect {}",
            result.unitary_defect
        );
    }
    pass(5, "twin complements are related by a recovered unitary with max_j |U(y_j) - z_j| <= 1e-8");
}

#[test]
fn criterion_06_disjointness_taxonomy() {
    let alg = AlgebraDescriptor::new(vec![2, 1]).unwrap();
    let mut rng = fixture::rng(5000);

    // ground truth: P vs I - P
    let (a, b) = fixture::complementary_pair(&alg, 3, &mut rng);
    let c = disjoint::classify_pair(&a, &b, 1e-9).unwrap();
    assert!(
        c.strongly_complementary
            && c.complementary
            && c.strongly_disjoint
            && c.disjoint
            && c.weakly_disjoint
    );

    // orthogonal proper subprojections
    let (a, b) = fixture::disjoint_pair(&alg, 3, &mut rng);
    let c = disjoint::classify_pair(&a, &b, 1e-9).unwrap();
    assert!(
        !c.strongly_complementary
            && !c.complementary
            && c.strongly_disjoint
            && c.disjoint
            && c.weakly_disjoint
    );

    // generic position: complementary but not strongly disjoint
    let mut found_generic = false;
    for _ in 0..10 {
        let (a, b) = fixture::generic_position_pair(&alg, 3, &mut rng);
        let c = disjoint::classify_pair(&a, &b, 1e-9).unwrap();
        assert!(c.implications_hold());
        if c.complementary && !c.strongly_disjoint && !c.strongly_complementary {
            found_generic = true;
            break;
        }
    }
    assert!(found_generic, "no generic-position pair observed");

    // identical frames: nothing holds
    let f = fixture::random_snt_frame(&alg, 3, &mut rng);
    let c = disjoint::classify_pair(&f, &f, 1e-9).unwrap();
    assert!(
        !c.strongly_complementary
            && !c.complementary
            && !c.strongly_disjoint
            && !c.disjoint
            && !c.weakly_disjoint
    );

    // flag implications on 200 seeded pairs
    let algebras = algebras();
    for seed in 0..200u64 {
        let alg = &algebras[(seed % algebras.len() as u64) as usize];
        let mut rng = fixture::rng(5100 + seed);
        let (a, b) = match seed % 5 {
            0 => fixture::complementary_pair(alg, 3, &mut rng),
            1 => fixture::disjoint_pair(alg, 3, &mut rng),
            2 => fixture::overlapping_pair(alg, 3, &mut rng),
            3 => fixture::generic_position_pair(alg, 3, &mut rng),
            _ => (
                fixture::random_snt_frame(alg, 3, &mut rng),
                fixture::random_snt_frame(alg, 3, &mut rng),
            ),
        };
        let c = disjoint::classify_pair(&a, &b, 1e-9).unwrap();
        assert!(c.implications_hold(), "seed {seed}: {c:?}");
    }
    pass(6, "ground-truth pairs classify exactly and flag implications hold on 200 seeded pairs");
}

#[test]
fn criterion_07_nine_way_equivalence() {
    let algebras = algebras();
    for seed in 0..20u64 {
        let alg = &algebras[(seed % algebras.len() as u64) as usize];
        let mut rng = fixture::rng(6000 + seed);
        let (a, b) = fixture::disjoint_pair(alg, 3, &mut rng);
        let report = disjoint::strong_disjoint_conditions(&a, &b, 1e-8).unwrap();
        assert!(report.agree && report.all_pass, "seed {seed}: {report:?}");

        let mut rng = fixture::rng(6500 + seed);
        let (a, b) = fixture::overlapping_pair(alg, 3, &mut rng);
        let report = disjoint::strong_disjoint_conditions(&a, &b, 1e-8).unwrap();
        assert!(report.agree && !report.all_pass, "seed {seed}: {report:?}");
    }
    pass(7, "all nine strong-disjointness conditions agree on 20 disjoint and 20 overlapping pairs");
}

#[test]
fn criterion_08_combination() {
    let algebras = algebras();
    let half = std::f64::consts::FRAC_1_SQRT_2;
    for seed in 0..10u64 {
        let alg = &algebras[(seed % algebras.len() as u64) as usize];
        let mut rng = fixture::rng(7000 + seed);
        let (a, b) = fixture::common_module_disjoint_pair(alg, 2, &mut rng);
        let z = disjoint::combine_scalars(
            &a,
            &b,
            Complex64::new(half, 0.0),
            Complex64::new(half, 0.0),
            1e-9,
        )
        .unwrap();
        let (c, d) = z.optimal_bounds();
        assert!(
            (c - 1.0).abs() <= 1e-9 && (d - 1.0).abs() <= 1e-9,
            "seed {seed}: combination bounds ({c}, {d})"
        );

        let (p, q) = fixture::complementary_pair(alg, 3, &mut rng);
        let assembled = disjoint::tuple_to_onb(&[p, q], 1e-9).unwrap();
        assert!(assembled.outcome.is_some(), "seed {seed}: partition did not assemble");
        assert!(
            assembled.unitary_defect.unwrap() <= 1e-9,
            "seed {seed}: unitary defect {}",
            assembled.unitary_defect.unwrap()
        );

        let (p, q) = fixture::overlapping_pair(alg, 3, &mut rng);
        let rejected = disjoint::tuple_to_onb(&[p, q], 1e-9).unwrap();
        assert!(rejected.outcome.is_none(), "seed {seed}: overlap accepted");
        assert!(rejected.sum_defect > 1e-9 || rejected.orthogonality_defect > 1e-9);
    }
    pass(8, "scalar combinations of disjoint tight pairs are tight; partitions assemble to a basis, overlaps do not");
}

#[test]
fn criterion_09_decompositions() {
    let algebras = algebras();

    // operator methods: three unitaries, two partial isometries, two
    // unitaries
    for seed in 0..50u64 {
        let alg = &algebras[(seed % algebras.len() as u64) as usize];
        let mut rng = fixture::rng(8000 + seed);
        let free = HilbertModule::free(alg.clone(), 2 + (seed % 2) as usize);
        let t = fixture::random_invertible_on(&free, (0.3, 2.5), &mut rng);

        let d = decomp::three_unitaries(&t, 0.5, 1e-9).unwrap();
        assert!(d.residual <= 1e-8 * (1.0 + t.norm()), "seed {seed}");
        assert!(d.scalar > t.norm());
        for p in &d.parts {
            assert!(p.predicates.unitary_defect <= 1e-9, "seed {seed} {}", p.label);
        }

        let d = decomp::two_partial_isometries(&t, 1e-9).unwrap();
        assert!(d.residual <= 1e-8 * (1.0 + t.norm()), "seed {seed}");
        for p in &d.parts {
            assert!(
                p.predicates.partial_isometry_defect <= 1e-9,
                "seed {seed} {}",
                p.label
            );
        }

        let d = decomp::two_unitaries_iff_invertible(&t, 1e-9)
            .unwrap()
            .expect("invertible input");
        assert!(d.residual <= 1e-8 * (1.0 + t.norm()), "seed {seed}");
        for p in &d.parts {
            assert!(p.predicates.unitary_defect <= 1e-9, "seed {seed} {}", p.label);
        }
    }

    // frame methods
    for seed in 0..50u64 {
        let alg = &algebras[(seed % algebras.len() as u64) as usize];
        let j = 3 + (seed % 2) as usize;
        let mut rng = fixture::rng(8500 + seed);

        let frame = fixture::random_standard_frame(alg, j, &mut rng);
        let two_tight = decomp::frame_two_tight(&frame, 1e-9).unwrap();
        let scale = 1.0 + frame.synthesis().norm();
        assert!(two_tight.max_residual <= 1e-8 * scale, "seed {seed}");
        for part in [&two_tight.tight_first, &two_tight.tight_second] {
            let (c, d) = part.optimal_bounds();
            assert!(
                (c - 1.0).abs() <= 1e-6 && (d - 1.0).abs() <= 1e-6,
                "seed {seed}: tight part bounds ({c}, {d})"
            );
        }

        let snt = fixture::random_snt_frame(alg, j, &mut rng);
        let halves = decomp::tight_half_sum(&snt, 1e-9).unwrap();
        assert!(halves.max_residual <= 1e-8, "seed {seed}");
        assert!(halves.reflection_defect <= 1e-9, "seed {seed}");

        let general = decomp::frame_half_sum_riesz(&frame, 1e-9).unwrap();
        assert!(general.max_residual <= 1e-8 * scale, "seed {seed}");
        assert!(general.riesz_reports.0.is_riesz_basis && general.riesz_reports.1.is_riesz_basis);

        let riesz = fixture::random_riesz_basis(alg, j, &mut rng);
        let three = decomp::frame_three_onb(&riesz, 0.5, 1e-9).unwrap();
        let scale = 1.0 + riesz.synthesis().norm();
        assert!(three.max_residual <= 1e-8 * scale, "seed {seed}");

        let combo = decomp::frame_onb_plus_riesz(&riesz, 0.5, 1e-9).unwrap();
        assert!(combo.max_residual <= 1e-8 * scale, "seed {seed}");
        assert!(combo.riesz_certificate.is_riesz_basis, "seed {seed}");
    }

    // the two-basis combination succeeds exactly on Riesz bases
    for seed in 0..50u64 {
        let alg = &algebras[(seed % algebras.len() as u64) as usize];
        let mut rng = fixture::rng(9000 + seed);
        let riesz = fixture::random_riesz_basis(alg, 3, &mut rng);
        assert!(riesz.riesz_report(1e-9).is_riesz_basis);
        let d = decomp::riesz_two_onb(&riesz, 1e-9).unwrap().expect("riesz input");
        assert!(
            d.max_residual <= 1e-8 * (1.0 + riesz.synthesis().norm()),
            "seed {seed}"
        );

        // non-Riesz: a proper-summand tight frame never is one here
        let mut non_riesz = None;
        for attempt in 0..20 {
            let candidate = fixture::random_snt_frame(alg, 3, &mut rng);
            let _ = attempt;
            if !candidate.riesz_report(1e-9).is_riesz_basis {
                non_riesz = Some(candidate);
                break;
            }
        }
        let candidate = non_riesz.expect("found a non-Riesz tight frame");
        assert!(
            decomp::riesz_two_onb(&candidate, 1e-9).unwrap().is_none(),
            "seed {seed}: non-Riesz input produced bases"
        );
    }
    pass(9, "all decomposition methods recombine within 1e-8 (1 + |input|) with certified parts, and two-basis combinations exist exactly for Riesz bases");
}

#[test]
fn criterion_10_partition_frame_and_generator_collapse() {
    for levels in 1..=12u32 {
        assert!(
            wavelet::partition_defect(levels) <= 1e-12,
            "level {levels}: defect {}",
            wavelet::partition_defect(levels)
        );
        let frame = wavelet::cantor_frame(levels).unwrap();
        let (c, d) = frame.optimal_bounds();
        assert!(
            (c - 1.0).abs() <= 1e-9 && (d - 1.0).abs() <= 1e-9,
            "level {levels}: bounds ({c}, {d})"
        );
        assert_eq!(
            wavelet::single_generator_bound(levels),
            0.25f64.powi(levels as i32),
            "level {levels}: bound is not exactly 4^-L"
        );
    }
    pass(10, "partition-of-unity defect <= 1e-12 and bounds (1, 1) for L = 1..12; single-generator bound equals 4^-L exactly");
}

#[test]
fn criterion_11_bracket_products() {
    let haar = wavelet::SampledFunction::haar(16);
    let b = wavelet::bracket(&haar, &haar).unwrap();
    assert!(b.max_deviation_from(1.0) <= 1e-12);
    let singleton = wavelet::translates_to_module_frame(&[haar.clone()]).unwrap();
    let (c, d) = singleton.optimal_bounds();
    assert!((c - 1.0).abs() <= 1e-9 && (d - 1.0).abs() <= 1e-9);

    let second = wavelet::SampledFunction::indicator(16, 1, 1);
    let cross = wavelet::bracket(&haar, &second).unwrap();
    assert!(cross.max_deviation_from(0.0) <= 1e-12);
    let pair = wavelet::translates_to_module_frame(&[haar, second]).unwrap();
    assert_eq!(pair.module().rank(), 2);
    assert!(pair.module().is_free());
    let (c, d) = pair.optimal_bounds();
    assert!((c - 1.0).abs() <= 1e-9 && (d - 1.0).abs() <= 1e-9);
    pass(11, "the unit indicator brackets to one and frames tightly; a disjoint-support pair frames the rank-two module tightly");
}

#[test]
fn criterion_12_scalar_special_case() {
    // brute-force oracle: sum_j <x, x_j> x_j over the plane basis
    let alg = AlgebraDescriptor::scalar();
    let h = HilbertModule::free(alg.clone(), 2);
    let mk = |a: f64, b: f64| {
        ModuleVector::new(
            h.clone(),
            vec![
                AlgElement::unit(&alg).scale_re(a),
                AlgElement::unit(&alg).scale_re(b),
            ],
        )
        .unwrap()
    };
    let s3 = 3.0f64.sqrt() / 2.0;
    let elements = vec![mk(0.0, 1.0), mk(-s3, -0.5), mk(s3, -0.5)];
    let frame = Frame::new(h.clone(), elements).unwrap();

    for e in h.standard_basis() {
        let mut acc = h.zero_vector();
        for x in frame.elements() {
            let c = e.inner(x).unwrap();
            acc = &acc + &x.acted_on(&c).unwrap();
        }
        assert!((&acc - &e.scale_re(1.5)).norm() <= 1e-12, "oracle summation");
    }
    let (c, d) = frame.optimal_bounds();
    assert!((c - 1.5).abs() <= 1e-12 && (d - 1.5).abs() <= 1e-12);
    pass(12, "the plane three-vector frame is tight with bound 3/2 within 1e-12, matching brute-force summation");
}
