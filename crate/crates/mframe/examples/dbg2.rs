use mframe::algebra::AlgebraDescriptor;
use mframe::{decomp, fixture};

fn main() {
    let alg = AlgebraDescriptor::scalar();
    let mut rng = fixture::rng(4);
    let f = fixture::random_snt_frame(&alg, 4, &mut rng);
    let v = f.synthesis();
    let d = decomp::two_partial_isometries(&v, 1e-9).unwrap();
    println!("residual {:.3e}", d.residual);
    for p in &d.parts {
        println!("{} pi defect {:.3e} unitary defect {:.3e}", p.label,
                 p.predicates.partial_isometry_defect, p.predicates.unitary_defect);
    }
}
