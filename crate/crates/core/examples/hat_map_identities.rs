//! The hat map, its inverse and the Levi-Civita tensor `F`.

use nalgebra::{Matrix3, Vector3};
use qsde_cascade::algebra::{f_tensor, levi_civita, recover_axis, theta_minus, SkewMat3};

fn main() -> qsde_cascade::Result<()> {
    let beta = Vector3::new(1.0, -2.0, 0.5);
    let w = Vector3::new(0.3, 0.7, -1.1);
    let hat = theta_minus(&beta);
    println!("Θ⁻(β) = {hat}");
    println!("Θ⁻(β) w = {}", hat * w);
    println!("w × β   = {}", w.cross(&beta));

    println!("axis back: {}", recover_axis(&hat, 1e-12)?);
    println!("skew wrapper axis: {}", SkewMat3::from_axis(&beta).axis());

    let f = f_tensor();
    for i in 0..3 {
        println!("F_{i} = {}", f.slice(i));
    }
    println!(
        "ε₀₁₂ = {}, ε₁₀₂ = {}",
        levi_civita(0, 1, 2),
        levi_civita(1, 0, 2)
    );

    let not_skew = Matrix3::<f64>::identity();
    println!(
        "identity rejected: {}",
        recover_axis(&not_skew, 1e-12).is_err()
    );
    Ok(())
}
