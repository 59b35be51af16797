//! A single damped cavity: synthesize its QSDE, check it, recover the SLH.

use nalgebra::{DMatrix, RowDVector};
use qsde_cascade::algebra::C64;
use qsde_cascade::model::{synthesize_linear, LinearSLH};
use qsde_cascade::realizability::{check_ccr_linear, check_pr_linear, recover_linear, DEFAULT_TOL};

fn main() -> qsde_cascade::Result<()> {
    // L = a with a = (q + ip)/√2, so Γ₁ = (1/√2, i/√2).
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let slh = LinearSLH::new(
        DMatrix::zeros(2, 2),
        RowDVector::from_vec(vec![C64::new(h, 0.0), C64::new(0.0, h)]),
    )?;

    let q = synthesize_linear(&slh)?;
    println!("A = {}B = {}C = {}", q.a, q.b, q.c);

    let ccr = check_ccr_linear(&q, DEFAULT_TOL)?;
    let pr = check_pr_linear(&q, DEFAULT_TOL)?;
    for c in ccr.conditions.iter().chain(&pr.conditions) {
        println!(
            "{:8} {:<28} {:.3e} {}",
            c.id,
            c.label,
            c.residual,
            if c.pass { "ok" } else { "FAIL" }
        );
    }

    let back = recover_linear(&q)?;
    println!("recovered R = {}recovered Γ₁ = {}", back.r(), back.gamma1());
    Ok(())
}
