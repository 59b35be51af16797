//! A two-level atom feeding a cavity: the cascaded QSDE and its checks.

use nalgebra::{DMatrix, RowDVector, RowVector3};
use qsde_cascade::algebra::C64;
use qsde_cascade::model::{
    synthesize_cascade, validate_structure, BilinearSLH, CascadeSLH, LinearSLH,
};
use qsde_cascade::realizability::{
    check_ccr_mixed, check_pr_cascade, corollary_crosscheck, CShape, DEFAULT_TOL,
};

fn main() -> qsde_cascade::Result<()> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let cavity = LinearSLH::new(
        DMatrix::identity(2, 2) * 0.2,
        RowDVector::from_vec(vec![C64::new(h, 0.0), C64::new(0.0, h)]),
    )?;
    let atom = BilinearSLH::new(
        RowVector3::new(0.0, 0.0, 0.1),
        RowVector3::new(C64::new(0.5, 0.0), C64::new(0.0, 0.5), C64::new(0.0, 0.0)),
    );
    let slh = CascadeSLH {
        linear: cavity,
        bilinear: atom,
    };
    let q = synthesize_cascade(&slh)?;
    println!("state x = (q, p, σx, σy, σz), dim {}", q.dim());
    println!("A₀ = {}A = {}C = {}", q.a0, q.a, q.c);

    let structure = validate_structure(&q, DEFAULT_TOL)?;
    println!("structural zero blocks hold: {}", structure.pass);

    let ccr = check_ccr_mixed(&q, DEFAULT_TOL)?;
    println!("commutation relations preserved: {}", ccr.pass());

    for shape in [CShape::SeriesProduct, CShape::Paper] {
        let rep = check_pr_cascade(&q, DEFAULT_TOL, shape)?;
        println!(
            "output shape {:>14}: realizable = {}, failing = {:?}",
            shape.as_str(),
            rep.certified(),
            rep.failing()
        );
    }
    println!(
        "realizable implies commutation preserved: {}",
        corollary_crosscheck(&q, DEFAULT_TOL)?
    );
    Ok(())
}
