use nalgebra::{DMatrix, Vector3};
use std::ops::{Add, Mul, Neg, Sub};

use super::{pauli, Op};
use crate::algebra::{levi_civita, theta_minus, SymplecticTheta, C64};
use crate::error::{Error, Result};
use crate::model::CascadeQSDE;
use crate::realizability::RealizabilityReport;

/// A matrix whose entries are operators on ℂ², stored as a block matrix
/// with 2×2 blocks. Products and sums act entrywise on operators.
#[derive(Debug, Clone, PartialEq)]
pub struct OpMatrix {
    rows: usize,
    cols: usize,
    m: Op,
}

impl OpMatrix {
    /// `s ⊗ I₂`.
    pub fn scalar(s: &DMatrix<f64>) -> Self {
        Self::from_paulis(s.nrows(), s.ncols(), |k| {
            if k == 0 {
                Some(s.clone())
            } else {
                None
            }
        })
    }

    /// `Σ_k M_k ⊗ σ_k` with `σ₀ = I`.
    pub fn from_paulis(
        rows: usize,
        cols: usize,
        coeff: impl Fn(usize) -> Option<DMatrix<f64>>,
    ) -> Self {
        let mut m = Op::zeros(2 * rows, 2 * cols);
        for k in 0..4 {
            if let Some(mk) = coeff(k) {
                assert_eq!(mk.shape(), (rows, cols), "Pauli coefficient shape");
                m += mk.map(|x| C64::new(x, 0.0)).kronecker(&pauli(k));
            }
        }
        OpMatrix { rows, cols, m }
    }

    /// The column `x₂ = (σ₁, σ₂, σ₃)ᵀ`.
    pub fn x2() -> Self {
        Self::from_paulis(3, 1, |k| {
            (k > 0).then(|| DMatrix::from_fn(3, 1, |i, _| if i + 1 == k { 1.0 } else { 0.0 }))
        })
    }

    /// `Θ⁻(v)` for a 3×1 operator column `v`.
    pub fn theta_minus_of(v: &OpMatrix) -> Result<Self> {
        if (v.rows, v.cols) != (3, 1) {
            return Err(Error::shape("Θ⁻ operand", (3, 1), (v.rows, v.cols)));
        }
        let mut m = Op::zeros(6, 6);
        for j in 0..3 {
            for l in 0..3 {
                for k in 0..3 {
                    let e = levi_civita(j, l, k);
                    if e != 0.0 {
                        let blk = v.block(k, 0) * C64::new(e, 0.0);
                        let mut view = m.view_mut((2 * j, 2 * l), (2, 2));
                        view += blk;
                    }
                }
            }
        }
        Ok(OpMatrix {
            rows: 3,
            cols: 3,
            m,
        })
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn block(&self, i: usize, j: usize) -> Op {
        self.m.view((2 * i, 2 * j), (2, 2)).into_owned()
    }

    /// Entrywise transpose: moves blocks, leaves each operator untouched.
    pub fn transpose(&self) -> Self {
        let mut m = Op::zeros(2 * self.cols, 2 * self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.view_mut((2 * j, 2 * i), (2, 2))
                    .copy_from(&self.block(i, j));
            }
        }
        OpMatrix {
            rows: self.cols,
            cols: self.rows,
            m,
        }
    }

    /// `‖M‖_F / √2`, so `c·I` entries count as `|c|`.
    pub fn residual(&self) -> f64 {
        self.m.norm() / std::f64::consts::SQRT_2
    }
}

impl Mul for &OpMatrix {
    type Output = OpMatrix;

    fn mul(self, rhs: &OpMatrix) -> OpMatrix {
        assert_eq!(self.cols, rhs.rows, "operator matrix product shape");
        OpMatrix {
            rows: self.rows,
            cols: rhs.cols,
            m: &self.m * &rhs.m,
        }
    }
}

impl Add for OpMatrix {
    type Output = OpMatrix;

    fn add(self, rhs: OpMatrix) -> OpMatrix {
        assert_eq!(self.shape(), rhs.shape(), "operator matrix sum shape");
        OpMatrix {
            m: self.m + rhs.m,
            ..self
        }
    }
}

impl Sub for OpMatrix {
    type Output = OpMatrix;

    fn sub(self, rhs: OpMatrix) -> OpMatrix {
        self + (-rhs)
    }
}

impl Neg for OpMatrix {
    type Output = OpMatrix;

    fn neg(self) -> OpMatrix {
        OpMatrix { m: -self.m, ..self }
    }
}

fn combined(parts: &[f64]) -> f64 {
    parts.iter().map(|r| r * r).sum::<f64>().sqrt()
}

/// The eight conditions that make `d[x, xᵀ]` vanish for a cascade, with the
/// Pauli representation substituted for `x₂`. Only the two-level factor
/// enters, so the result does not depend on a Fock truncation.
pub fn verify_preservation_integrands(q: &CascadeQSDE, tol: f64) -> Result<RealizabilityReport> {
    q.validate()?;
    let s = OpMatrix::scalar;
    let theta = SymplecticTheta::new(q.n)?;
    let th = theta.matrix();
    let x2 = OpMatrix::x2();
    let x2t = x2.transpose();
    let tm_x2 = OpMatrix::theta_minus_of(&x2)?;

    let b122 = q.b1_22();
    let b222 = q.b2_22();
    let b_22 = [&b122, &b222];
    let dyn3 = |m: nalgebra::Matrix3<f64>| DMatrix::from_column_slice(3, 3, m.as_slice());
    let a02: Vector3<f64> = q.a02();

    let mut rep = RealizabilityReport::new(tol);

    let p0 = &b122 * b222.transpose() - &b222 * b122.transpose() - dyn3(theta_minus(&a02));
    rep.push("pres0", "B₁₂₂B₂₂₂ᵀ − B₂₂₂B₁₂₂ᵀ − Θ⁻(A₀₂) = 0", p0.norm());

    let p1 = [q.b1_21() * th, q.b2_21() * th].map(|m| m.norm());
    rep.push("pres1", "B_i21 Θ = 0", combined(&p1));

    let p2 = [q.b1_12(), q.b2_12()].map(|b| (&s(&b) * &tm_x2).residual());
    rep.push("pres2", "B_i12 Θ⁻(x₂) = 0", combined(&p2));

    let mut p3 = [0.0; 2];
    for (i, b) in b_22.iter().enumerate() {
        let sb = s(b);
        let lhs = &sb * &tm_x2 + &tm_x2 * &s(&b.transpose());
        let bx = &sb * &x2;
        p3[i] = (lhs - OpMatrix::theta_minus_of(&bx)?).residual();
    }
    rep.push(
        "pres3",
        "B_i22 Θ⁻(x₂) + Θ⁻(x₂) B_i22ᵀ − Θ⁻(B_i22 x₂) = 0",
        combined(&p3),
    );

    let a11 = q.a11();
    let bb11 = q.bbar11();
    let bb21 = q.bbar21();
    let p4 = &a11 * th + th * a11.transpose() + &bb11 * bb21.transpose() - &bb21 * bb11.transpose();
    rep.push("pres4", "A₁₁Θ + ΘA₁₁ᵀ + B̄₁₁B̄₂₁ᵀ − B̄₂₁B̄₁₁ᵀ = 0", p4.norm());

    let p5 = &s(&q.a12()) * &tm_x2 + &(&s(&bb11) * &x2t) * &s(&b222.transpose())
        - &(&s(&bb21) * &x2t) * &s(&b122.transpose());
    rep.push(
        "pres5",
        "A₁₂Θ⁻(x₂) + B̄₁₁x₂ᵀB₂₂₂ᵀ − B̄₂₁x₂ᵀB₁₂₂ᵀ = 0",
        p5.residual(),
    );

    rep.push("pres6", "A₂₁Θ = 0", (q.a21() * th).norm());

    let a22 = q.a22();
    let mut p7 = &s(&a22) * &tm_x2 + &tm_x2 * &s(&a22.transpose());
    for b in b_22 {
        p7 = p7 + &(&s(b) * &tm_x2) * &s(&b.transpose());
    }
    let ax = &s(&a22) * &x2;
    let p7 = p7 - OpMatrix::theta_minus_of(&ax)?;
    rep.push(
        "pres7",
        "A₂₂Θ⁻(x₂) + Θ⁻(x₂)A₂₂ᵀ + B₁₂₂Θ⁻(x₂)B₁₂₂ᵀ + B₂₂₂Θ⁻(x₂)B₂₂₂ᵀ − Θ⁻(A₂₂x₂) = 0",
        p7.residual(),
    );
    Ok(rep)
}
