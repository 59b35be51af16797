//! Perturbs a realizable cascade and reports which conditions break.

use nalgebra::{DMatrix, RowDVector, RowVector3};
use qsde_cascade::algebra::C64;
use qsde_cascade::cli::check_qsde;
use qsde_cascade::model::{
    synthesize_cascade, BilinearSLH, CascadeQSDE, CascadeSLH, LinearSLH, Qsde,
};

type Site = (&'static str, fn(&mut CascadeQSDE));
use qsde_cascade::realizability::{CShape, DEFAULT_TOL};

fn main() -> qsde_cascade::Result<()> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let slh = CascadeSLH {
        linear: LinearSLH::new(
            DMatrix::zeros(2, 2),
            RowDVector::from_vec(vec![C64::new(h, 0.0), C64::new(0.0, h)]),
        )?,
        bilinear: BilinearSLH::new(
            RowVector3::zeros(),
            RowVector3::new(C64::new(0.5, 0.0), C64::new(0.0, 0.5), C64::new(0.0, 0.0)),
        ),
    };
    let base = synthesize_cascade(&slh)?;

    let sites: [Site; 4] = [
        ("cavity damping", |q| q.a[(0, 0)] += 0.1),
        ("cavity noise gain", |q| q.b[(1, 1)] *= -1.0),
        ("atom drift offset", |q| q.a0[4] += 0.5),
        ("cross coupling", |q| q.a[(0, 2)] += 0.2),
    ];
    for (name, perturb) in sites {
        let mut q = base.clone();
        perturb(&mut q);
        let rep = check_qsde(&Qsde::Cascade(q), DEFAULT_TOL, CShape::SeriesProduct)?;
        println!(
            "{name:>18}: realizable = {:5}, worst = {:.3e}",
            rep.certified(),
            rep.max_residual()
        );
        for id in rep.failing() {
            println!(
                "{:>20} {id} ({:.3e})",
                "",
                rep.residual(id).unwrap_or(f64::NAN)
            );
        }
    }
    Ok(())
}
