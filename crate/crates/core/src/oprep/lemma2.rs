use nalgebra::{DMatrix, Vector3};

use super::{bilinear_parts, commutator, linear_parts, CompositeRep, Op};
use crate::algebra::{theta_minus, SymplecticTheta, C64};
use crate::error::Result;
use crate::model::CascadeSLH;
use crate::realizability::RealizabilityReport;

const I: C64 = C64::new(0.0, 1.0);

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Checks the twelve commutator identities behind the synthesis formulas,
/// with `H₁ = ½ x₁ᵀ R x₁` and `H₂ = α₂ x₂`, on an `N`-level operator model.
pub fn verify_lemma2(slh: &CascadeSLH, fock_dim: usize, tol: f64) -> Result<RealizabilityReport> {
    let n = slh.linear.n();
    let rep = CompositeRep::new(n, fock_dim)?;
    let (l1, h1) = linear_parts(&rep, &slh.linear)?;
    let (l2, h2) = bilinear_parts(&rep, &slh.bilinear);
    let l1d = l1.adjoint();
    let l2d = l2.adjoint();
    let x1 = rep.x1();
    let x2 = rep.x2();

    let theta = SymplecticTheta::new(n)?.complex();
    let g1t = DMatrix::from_column_slice(2 * n, 1, slh.linear.gamma1().as_slice());
    let g1_conj_t = g1t.map(|z| z.conj());
    let g1 = DMatrix::from_row_slice(1, n * 2, slh.linear.gamma1().as_slice());
    let g1_sharp = g1.map(|z| z.conj());
    let r = slh.linear.r().map(c);

    let g2: Vector3<C64> = slh.bilinear.gamma2.transpose();
    let g2_conj: Vector3<C64> = g2.map(|z| z.conj());
    let g2_row = DMatrix::from_row_slice(1, 3, g2.as_slice());
    let g2_sharp_row = g2_row.map(|z| z.conj());
    let alpha: Vector3<C64> = slh.bilinear.alpha2.transpose().map(c);
    let th_g = theta_minus(&g2);
    let th_gc = theta_minus(&g2_conj);
    let dyn_c = |m: nalgebra::Matrix3<C64>| DMatrix::from_column_slice(3, 3, m.as_slice());

    let consts = |v: &DMatrix<C64>| -> Vec<Op> { v.iter().map(|&z| rep.scalar(z)).collect() };
    let add =
        |a: Vec<Op>, b: Vec<Op>| -> Vec<Op> { a.into_iter().zip(b).map(|(x, y)| x + y).collect() };

    let mut out = RealizabilityReport::new(tol);
    let mut record = |id: usize, label: &str, lhs: Vec<Op>, rhs: Vec<Op>| {
        let diff: Vec<Op> = lhs.into_iter().zip(rhs).map(|(l, r)| l - r).collect();
        out.push(format!("lemma2.{id}"), label, rep.projected_norm_all(&diff));
    };

    let two_i = I * c(2.0);

    record(
        1,
        "[x₁, H₁] = 2iΘRx₁",
        x1.iter().map(|x| commutator(x, &h1)).collect(),
        rep.apply(&(&theta * &r * two_i), x1),
    );
    record(
        2,
        "[x₁, L₁] = 2iΘΓ₁ᵀ",
        x1.iter().map(|x| commutator(x, &l1)).collect(),
        consts(&(&theta * &g1t * two_i)),
    );
    record(
        3,
        "[x₁, L₁†] = 2iΘΓ₁†",
        x1.iter().map(|x| commutator(x, &l1d)).collect(),
        consts(&(&theta * &g1_conj_t * two_i)),
    );
    record(
        4,
        "L₁†[x₁, L₁] = 2iΘΓ₁ᵀΓ₁#x₁",
        x1.iter().map(|x| &l1d * commutator(x, &l1)).collect(),
        rep.apply(&(&theta * &g1t * &g1_sharp * two_i), x1),
    );
    record(
        5,
        "[L₁†, x₁]L₁ = −2iΘΓ₁†Γ₁x₁",
        x1.iter().map(|x| commutator(&l1d, x) * &l1).collect(),
        rep.apply(&(&theta * &g1_conj_t * &g1 * (-two_i)), x1),
    );
    record(
        6,
        "[x₂, H₂] = −2iΘ⁻(α₂ᵀ)x₂",
        x2.iter().map(|x| commutator(x, &h2)).collect(),
        rep.apply(&dyn_c(theta_minus(&alpha) * (-two_i)), x2),
    );
    record(
        7,
        "[x₂, L₂] = −2iΘ⁻(Γ₂ᵀ)x₂",
        x2.iter().map(|x| commutator(x, &l2)).collect(),
        rep.apply(&dyn_c(th_g * (-two_i)), x2),
    );
    record(
        8,
        "[x₂, L₂†] = −2iΘ⁻(Γ₂†)x₂",
        x2.iter().map(|x| commutator(x, &l2d)).collect(),
        rep.apply(&dyn_c(th_gc * (-two_i)), x2),
    );
    let const9 = DMatrix::from_column_slice(3, 1, (th_g * g2_conj * (-two_i)).as_slice());
    record(
        9,
        "L₂†[x₂, L₂] = −2iΘ⁻(Γ₂ᵀ)Γ₂† + 2Θ⁻(Γ₂ᵀ)Θ⁻(Γ₂†)x₂",
        x2.iter().map(|x| &l2d * commutator(x, &l2)).collect(),
        add(
            consts(&const9),
            rep.apply(&dyn_c(th_g * th_gc * c(2.0)), x2),
        ),
    );
    record(
        10,
        "[x₂, L₂†]L₂ = 2iΘ⁻(Γ₂ᵀ)Γ₂† − 2Θ⁻(Γ₂†)Θ⁻(Γ₂ᵀ)x₂",
        x2.iter().map(|x| commutator(x, &l2d) * &l2).collect(),
        add(
            consts(&(-const9.clone())),
            rep.apply(&dyn_c(th_gc * th_g * c(-2.0)), x2),
        ),
    );
    record(
        11,
        "L₂†[x₁, L₁] = 2iΘΓ₁ᵀΓ₂#x₂",
        x1.iter().map(|x| &l2d * commutator(x, &l1)).collect(),
        rep.apply(&(&theta * &g1t * &g2_sharp_row * two_i), x2),
    );
    record(
        12,
        "[L₁†, x₁]L₂ = −2iΘΓ₁†Γ₂x₂",
        x1.iter().map(|x| commutator(&l1d, x) * &l2).collect(),
        rep.apply(&(&theta * &g1_conj_t * &g2_row * (-two_i)), x2),
    );
    Ok(out)
}
