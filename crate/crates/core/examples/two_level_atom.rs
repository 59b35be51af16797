//! A decaying two-level atom as a bilinear QSDE in the Pauli basis.

use nalgebra::RowVector3;
use qsde_cascade::algebra::C64;
use qsde_cascade::model::{synthesize_bilinear, BilinearSLH};
use qsde_cascade::realizability::{
    check_ccr_bilinear, check_pr_bilinear, recover_bilinear, DEFAULT_TOL,
};

fn main() -> qsde_cascade::Result<()> {
    // L = ½(σx + iσy), H = ½ω σz.
    let omega = 0.3;
    let slh = BilinearSLH::new(
        RowVector3::new(0.0, 0.0, 0.5 * omega),
        RowVector3::new(C64::new(0.5, 0.0), C64::new(0.0, 0.5), C64::new(0.0, 0.0)),
    );
    let q = synthesize_bilinear(&slh)?;
    println!(
        "A₀ = {}A = {}B₁ = {}B₂ = {}C = {}",
        q.a0, q.a, q.b1, q.b2, q.c
    );

    let ccr = check_ccr_bilinear(&q, DEFAULT_TOL)?;
    let pr = check_pr_bilinear(&q, DEFAULT_TOL)?;
    println!("commutation preserved: {}", ccr.pass());
    println!("physically realizable: {}", pr.certified());

    let back = recover_bilinear(&q);
    println!("α₂ = {}Γ₂ = {}", back.alpha2, back.gamma2);
    Ok(())
}
