//! Checks the symbolic drift against truncated Fock-space operators.

use nalgebra::{DMatrix, RowDVector, RowVector3};
use qsde_cascade::algebra::C64;
use qsde_cascade::model::{synthesize_cascade, BilinearSLH, CascadeSLH, LinearSLH, Qsde, Slh};
use qsde_cascade::oprep::{
    annihilation_op, build_slh_operators, composite_rep, lindblad, oracle_drift_match,
    verify_lemma2, verify_preservation_integrands,
};

fn main() -> qsde_cascade::Result<()> {
    let fock = annihilation_op(8)?;
    println!(
        "[a, a†] - 1 is nonzero only in the last level: {:.1}",
        fock.ccr_defect()[(7, 7)].re
    );

    let slh = CascadeSLH {
        linear: LinearSLH::new(
            DMatrix::from_row_slice(2, 2, &[0.4, 0.1, 0.1, -0.2]),
            RowDVector::from_vec(vec![C64::new(0.6, 0.1), C64::new(-0.2, 0.5)]),
        )?,
        bilinear: BilinearSLH::new(
            RowVector3::new(0.3, -0.1, 0.2),
            RowVector3::new(C64::new(0.2, 0.4), C64::new(0.1, -0.3), C64::new(0.0, 0.2)),
        ),
    };

    let rep = composite_rep(16)?;
    let ops = build_slh_operators(&rep, &Slh::Cascade(slh.clone()))?;
    let gq = lindblad(&rep.x1()[0], &ops)?;
    println!("‖P 𝓛(q) P‖ = {:.4}", rep.projected_norm(&gq));

    let q = synthesize_cascade(&slh)?;
    let tol = 1e-9;
    for report in [
        verify_lemma2(&slh, 16, tol)?,
        verify_preservation_integrands(&q, tol)?,
        oracle_drift_match(
            &Qsde::Cascade(q.clone()),
            &Slh::Cascade(slh.clone()),
            16,
            tol,
        )?,
    ] {
        for c in &report.conditions {
            println!(
                "{:10} {:.2e} {}",
                c.id,
                c.residual,
                if c.pass { "ok" } else { "FAIL" }
            );
        }
    }
    Ok(())
}
