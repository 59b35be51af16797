//! SLH parametrizations, QSDE matrix bundles and the synthesis of the latter
//! from the former.
//!
//! Field conventions: one quadrature field channel `W̄ = (W̄₁, W̄₂)`, scattering
//! fixed to the identity. The cascade feeds the two-level (bilinear) system
//! into the oscillator (linear) system; the state is ordered `x = (x₁; x₂)`
//! with the `2n` oscillator quadratures first and the three Pauli components
//! last.

use nalgebra::{DMatrix, DVector, Matrix2, Matrix2x3, Matrix3, RowDVector, RowVector3, Vector3};

use crate::algebra::{
    dyn3, imag_part, max_abs, real_part_checked, theta_minus, SymplecticTheta, C64, REAL_TOL,
};
use crate::error::{Error, Result};

/// Asymmetry tolerated in a Hamiltonian matrix `R`.
pub const SYMMETRY_TOL: f64 = 1e-12;

const I: C64 = C64::new(0.0, 1.0);

/// Oscillator parameters: `H₁ = ½ x₁ᵀ R x₁`, `L₁ = Γ₁ x₁`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSLH {
    r: DMatrix<f64>,
    gamma1: RowDVector<C64>,
}

impl LinearSLH {
    pub fn new(r: DMatrix<f64>, gamma1: RowDVector<C64>) -> Result<Self> {
        let (rows, cols) = r.shape();
        if rows == 0 || rows % 2 != 0 || rows != cols {
            return Err(Error::Shape {
                what: "R".into(),
                expected: "2n x 2n with n >= 1".into(),
                got: format!("{rows}x{cols}"),
            });
        }
        if gamma1.ncols() != rows {
            return Err(Error::shape("Gamma1", (1, rows), (1, gamma1.ncols())));
        }
        let residual = max_abs(&(&r - r.transpose()));
        if residual > SYMMETRY_TOL {
            return Err(Error::NotSymmetric {
                what: "R".into(),
                residual,
            });
        }
        Ok(LinearSLH { r, gamma1 })
    }

    /// The uncoupled, zero-Hamiltonian oscillator bank of size `n`.
    pub fn zero(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroOscillators);
        }
        Self::new(DMatrix::zeros(2 * n, 2 * n), RowDVector::zeros(2 * n))
    }

    pub fn n(&self) -> usize {
        self.r.nrows() / 2
    }

    pub fn r(&self) -> &DMatrix<f64> {
        &self.r
    }

    pub fn gamma1(&self) -> &RowDVector<C64> {
        &self.gamma1
    }
}

/// Two-level parameters: `H₂ = α₂ x₂`, `L₂ = Γ₂ x₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct BilinearSLH {
    pub alpha2: RowVector3<f64>,
    pub gamma2: RowVector3<C64>,
}

impl BilinearSLH {
    pub fn new(alpha2: RowVector3<f64>, gamma2: RowVector3<C64>) -> Self {
        BilinearSLH { alpha2, gamma2 }
    }

    pub fn zero() -> Self {
        BilinearSLH {
            alpha2: RowVector3::zeros(),
            gamma2: RowVector3::zeros(),
        }
    }
}

/// Two-level source driving an oscillator bank through a shared field.
#[derive(Debug, Clone, PartialEq)]
pub struct CascadeSLH {
    pub linear: LinearSLH,
    pub bilinear: BilinearSLH,
}

/// `dx₁ = A x₁ dt + B dW̄`, `dy = C x₁ dt + dW̄`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearQSDE {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub c: DMatrix<f64>,
}

impl LinearQSDE {
    pub fn new(a: DMatrix<f64>, b: DMatrix<f64>, c: DMatrix<f64>) -> Result<Self> {
        let q = LinearQSDE { a, b, c };
        q.validate()?;
        Ok(q)
    }

    pub fn n(&self) -> usize {
        self.a.nrows() / 2
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.a.nrows();
        if d == 0 || !d.is_multiple_of(2) || self.a.ncols() != d {
            return Err(Error::Shape {
                what: "A".into(),
                expected: "2n x 2n with n >= 1".into(),
                got: format!("{}x{}", d, self.a.ncols()),
            });
        }
        if self.b.shape() != (d, 2) {
            return Err(Error::shape("B", (d, 2), self.b.shape()));
        }
        if self.c.shape() != (2, d) {
            return Err(Error::shape("C", (2, d), self.c.shape()));
        }
        Ok(())
    }
}

/// `dx₂ = A₀ dt + A x₂ dt + B₁ x₂ dW̄₁ + B₂ x₂ dW̄₂`, `dy = C x₂ dt + dW̄`.
#[derive(Debug, Clone, PartialEq)]
pub struct BilinearQSDE {
    pub a0: Vector3<f64>,
    pub a: Matrix3<f64>,
    pub b1: Matrix3<f64>,
    pub b2: Matrix3<f64>,
    pub c: Matrix2x3<f64>,
}

impl BilinearQSDE {
    pub fn zero() -> Self {
        BilinearQSDE {
            a0: Vector3::zeros(),
            a: Matrix3::zeros(),
            b1: Matrix3::zeros(),
            b2: Matrix3::zeros(),
            c: Matrix2x3::zeros(),
        }
    }
}

/// Bilinear QSDE with additive and multiplicative noise over `x = (x₁; x₂)`:
/// `dx = A₀ dt + A x dt + B₁ x dW̄₁ + B₂ x dW̄₂ + B dW̄`, `dy = C x dt + dW̄`.
#[derive(Debug, Clone, PartialEq)]
pub struct CascadeQSDE {
    pub n: usize,
    pub a0: DVector<f64>,
    pub a: DMatrix<f64>,
    pub b1: DMatrix<f64>,
    pub b2: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub c: DMatrix<f64>,
}

macro_rules! block {
    ($(#[$doc:meta])* $name:ident, $field:ident, rows $r:ident, cols $c:ident) => {
        $(#[$doc])*
        pub fn $name(&self) -> DMatrix<f64> {
            let (r0, nr) = self.$r();
            let (c0, nc) = self.$c();
            self.$field.view((r0, c0), (nr, nc)).into_owned()
        }
    };
}

impl CascadeQSDE {
    pub fn new(
        n: usize,
        a0: DVector<f64>,
        a: DMatrix<f64>,
        b1: DMatrix<f64>,
        b2: DMatrix<f64>,
        b: DMatrix<f64>,
        c: DMatrix<f64>,
    ) -> Result<Self> {
        let q = CascadeQSDE {
            n,
            a0,
            a,
            b1,
            b2,
            b,
            c,
        };
        q.validate()?;
        Ok(q)
    }

    pub fn zeros(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroOscillators);
        }
        let d = 2 * n + 3;
        Ok(CascadeQSDE {
            n,
            a0: DVector::zeros(d),
            a: DMatrix::zeros(d, d),
            b1: DMatrix::zeros(d, d),
            b2: DMatrix::zeros(d, d),
            b: DMatrix::zeros(d, 2),
            c: DMatrix::zeros(2, d),
        })
    }

    /// Full state dimension `2n + 3`.
    pub fn dim(&self) -> usize {
        2 * self.n + 3
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::ZeroOscillators);
        }
        let d = self.dim();
        if self.a0.len() != d {
            return Err(Error::shape("A0", (d, 1), (self.a0.len(), 1)));
        }
        for (name, m) in [("A", &self.a), ("B1", &self.b1), ("B2", &self.b2)] {
            if m.shape() != (d, d) {
                return Err(Error::shape(name, (d, d), m.shape()));
            }
        }
        if self.b.shape() != (d, 2) {
            return Err(Error::shape("B", (d, 2), self.b.shape()));
        }
        if self.c.shape() != (2, d) {
            return Err(Error::shape("C", (2, d), self.c.shape()));
        }
        Ok(())
    }

    fn osc(&self) -> (usize, usize) {
        (0, 2 * self.n)
    }

    fn spin(&self) -> (usize, usize) {
        (2 * self.n, 3)
    }

    fn all2(&self) -> (usize, usize) {
        (0, 2)
    }

    fn col0(&self) -> (usize, usize) {
        (0, 1)
    }

    fn col1(&self) -> (usize, usize) {
        (1, 1)
    }

    pub fn a01(&self) -> DVector<f64> {
        self.a0.rows(0, 2 * self.n).into_owned()
    }

    pub fn a02(&self) -> Vector3<f64> {
        Vector3::from_column_slice(self.a0.rows(2 * self.n, 3).as_slice())
    }

    block!(a11, a, rows osc, cols osc);
    block!(a12, a, rows osc, cols spin);
    block!(a21, a, rows spin, cols osc);
    block!(a22, a, rows spin, cols spin);
    block!(b1_11, b1, rows osc, cols osc);
    block!(b1_12, b1, rows osc, cols spin);
    block!(b1_21, b1, rows spin, cols osc);
    block!(b1_22, b1, rows spin, cols spin);
    block!(b2_11, b2, rows osc, cols osc);
    block!(b2_12, b2, rows osc, cols spin);
    block!(b2_21, b2, rows spin, cols osc);
    block!(b2_22, b2, rows spin, cols spin);
    block!(
        /// Additive noise on `x₁` from `dW̄₁` (`B̄₁₁`).
        bbar11, b, rows osc, cols col0
    );
    block!(
        /// Additive noise on `x₁` from `dW̄₂` (`B̄₂₁`).
        bbar21, b, rows osc, cols col1
    );
    block!(
        /// Additive noise on `x₂` from `dW̄₁` (`B̄₁₂`).
        bbar12, b, rows spin, cols col0
    );
    block!(
        /// Additive noise on `x₂` from `dW̄₂` (`B̄₂₂`).
        bbar22, b, rows spin, cols col1
    );
    block!(
        /// The `2n × 2` additive noise block `(B̄₁₁ B̄₂₁)`.
        bbar_osc, b, rows osc, cols all2
    );
    block!(
        /// Output columns acting on `x₁`.
        c_lin, c, rows all2, cols osc
    );
    block!(
        /// Output columns acting on `x₂`.
        c_bil, c, rows all2, cols spin
    );

    pub fn a22_fixed(&self) -> Matrix3<f64> {
        Matrix3::from_column_slice(self.a22().as_slice())
    }

    pub fn b1_22_fixed(&self) -> Matrix3<f64> {
        Matrix3::from_column_slice(self.b1_22().as_slice())
    }

    pub fn b2_22_fixed(&self) -> Matrix3<f64> {
        Matrix3::from_column_slice(self.b2_22().as_slice())
    }

    /// The oscillator subsystem `(A₁₁, (B̄₁₁ B̄₂₁), C_lin)`.
    pub fn linear_part(&self) -> LinearQSDE {
        LinearQSDE {
            a: self.a11(),
            b: self.bbar_osc(),
            c: self.c_lin(),
        }
    }

    /// The two-level subsystem `(A₀₂, A₂₂, B₁₂₂, B₂₂₂)` with output `c`.
    pub fn bilinear_part(&self, c: Matrix2x3<f64>) -> BilinearQSDE {
        BilinearQSDE {
            a0: self.a02(),
            a: self.a22_fixed(),
            b1: self.b1_22_fixed(),
            b2: self.b2_22_fixed(),
            c,
        }
    }
}

/// Quadrature Itô table `dW̄ dW̄ᵀ = T dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ItoTable;

impl ItoTable {
    /// `[[1, i], [-i, 1]]`.
    pub fn quadrature() -> Matrix2<C64> {
        Matrix2::new(C64::new(1.0, 0.0), I, -I, C64::new(1.0, 0.0))
    }

    /// The same table pushed through `W̄ = M (W, W†)ᵀ` from the annihilation /
    /// creation table, where only `dW dW† = dt` survives.
    pub fn from_field_transform() -> Matrix2<C64> {
        let m = quadrature_transform();
        let field = Matrix2::new(
            C64::new(0.0, 0.0),
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
        );
        m * field * m.transpose()
    }
}

/// `M = [[1, 1], [-i, i]]`, mapping `(W, W†)` to the quadratures.
pub fn quadrature_transform() -> Matrix2<C64> {
    Matrix2::new(C64::new(1.0, 0.0), C64::new(1.0, 0.0), -I, I)
}

/// Output rows `C₁ = Γ + Γ#`, `C₂ = i(Γ# − Γ)` of a linear coupling row.
pub fn output_matrices(gamma: &RowDVector<C64>) -> Result<DMatrix<f64>> {
    let conj = gamma.map(|z| z.conj());
    let c1 = gamma + &conj;
    let c2 = (&conj - gamma) * I;
    let mut c = DMatrix::zeros(2, gamma.ncols());
    c.row_mut(0).copy_from(&c1);
    c.row_mut(1).copy_from(&c2);
    real_part_checked(&c, REAL_TOL, "C")
}

fn row3_to_dyn(g: &RowVector3<C64>) -> RowDVector<C64> {
    RowDVector::from_row_slice(g.as_slice())
}

fn output_matrices3(gamma: &RowVector3<C64>) -> Result<Matrix2x3<f64>> {
    let c = output_matrices(&row3_to_dyn(gamma))?;
    Ok(Matrix2x3::from_row_slice(&[
        c[(0, 0)],
        c[(0, 1)],
        c[(0, 2)],
        c[(1, 0)],
        c[(1, 1)],
        c[(1, 2)],
    ]))
}

pub fn synthesize_linear(slh: &LinearSLH) -> Result<LinearQSDE> {
    synthesize_linear_with_gain(slh, 1.0)
}

/// Linear synthesis with the additive-noise matrix scaled by `noise_gain`.
///
/// Only `noise_gain = 1` describes the oscillator; other values exist to
/// exercise the checkers against a mis-scaled noise term.
pub fn synthesize_linear_with_gain(slh: &LinearSLH, noise_gain: f64) -> Result<LinearQSDE> {
    let n = slh.n();
    let theta = SymplecticTheta::new(n)?;
    let th = theta.matrix();
    let thc = theta.complex();
    let g = slh.gamma1();
    let g_t = g.transpose();
    let g_dag = g.adjoint();

    let hermitian = &g_dag * g;
    let a = th * (slh.r() + imag_part(&hermitian)) * 2.0;

    // dW̄₁ column iΘ(Γᵀ − Γ†), dW̄₂ column Θ(Γᵀ + Γ†)
    let col1 = &thc * (&g_t - &g_dag) * I;
    let col2 = &thc * (&g_t + &g_dag);
    let mut b = DMatrix::<C64>::zeros(2 * n, 2);
    b.column_mut(0).copy_from(&col1);
    b.column_mut(1).copy_from(&col2);
    let b = real_part_checked(&b, REAL_TOL, "B")? * noise_gain;

    let c = output_matrices(g)?;
    LinearQSDE::new(a, b, c)
}

pub fn synthesize_bilinear(slh: &BilinearSLH) -> Result<BilinearQSDE> {
    let g_t: Vector3<C64> = slh.gamma2.transpose();
    let g_dag: Vector3<C64> = slh.gamma2.adjoint();
    let alpha: Vector3<C64> = slh.alpha2.transpose().map(|x| C64::new(x, 0.0));

    let th_t = theta_minus(&g_t);
    let th_d = theta_minus(&g_dag);

    let a0 = th_t * g_dag * (-2.0 * I);
    let a = theta_minus(&alpha) * C64::new(-2.0, 0.0) + th_t * th_d + th_d * th_t;
    let b1 = theta_minus(&(g_dag - g_t)) * I;
    let b2 = -theta_minus(&(g_t + g_dag));

    let real3 = |m: Matrix3<C64>, what: &str| -> Result<Matrix3<f64>> {
        let r = real_part_checked(&dyn3(&m), REAL_TOL, what)?;
        Ok(Matrix3::from_column_slice(r.as_slice()))
    };
    let a0 = real_part_checked(
        &DMatrix::from_column_slice(3, 1, a0.as_slice()),
        REAL_TOL,
        "A0",
    )?;

    Ok(BilinearQSDE {
        a0: Vector3::from_column_slice(a0.as_slice()),
        a: real3(a, "A")?,
        b1: real3(b1, "B1")?,
        b2: real3(b2, "B2")?,
        c: output_matrices3(&slh.gamma2)?,
    })
}

/// The cross-coupling drift `A₁₂ = −4Θ Im(Γ₁ᵀ Γ₂#)` of the oscillator on the
/// two-level variables.
pub fn cross_drift(linear: &LinearSLH, bilinear: &BilinearSLH) -> Result<DMatrix<f64>> {
    let theta = SymplecticTheta::new(linear.n())?;
    let outer = linear.gamma1().transpose() * row3_to_dyn(&bilinear.gamma2).map(|z| z.conj());
    Ok(theta.matrix() * imag_part(&outer) * -4.0)
}

pub fn synthesize_cascade(slh: &CascadeSLH) -> Result<CascadeQSDE> {
    let lin = synthesize_linear(&slh.linear)?;
    let bil = synthesize_bilinear(&slh.bilinear)?;
    let n = slh.linear.n();
    let s = 2 * n;
    let mut q = CascadeQSDE::zeros(n)?;

    q.a0.rows_mut(s, 3).copy_from(&bil.a0);
    q.a.view_mut((0, 0), (s, s)).copy_from(&lin.a);
    q.a.view_mut((0, s), (s, 3))
        .copy_from(&cross_drift(&slh.linear, &slh.bilinear)?);
    q.a.view_mut((s, s), (3, 3)).copy_from(&bil.a);
    q.b1.view_mut((s, s), (3, 3)).copy_from(&bil.b1);
    q.b2.view_mut((s, s), (3, 3)).copy_from(&bil.b2);
    q.b.view_mut((0, 0), (s, 2)).copy_from(&lin.b);
    q.c.view_mut((0, 0), (2, s)).copy_from(&lin.c);
    q.c.view_mut((0, s), (2, 3)).copy_from(&bil.c);
    Ok(q)
}

/// Max-abs entries of the cascade blocks that must vanish.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureReport {
    pub blocks: Vec<(String, f64)>,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl StructureReport {
    pub fn residual(&self, block: &str) -> Option<f64> {
        self.blocks
            .iter()
            .find(|(b, _)| b == block)
            .map(|(_, r)| *r)
    }
}

pub fn validate_structure(q: &CascadeQSDE, tol: f64) -> Result<StructureReport> {
    q.validate()?;
    let blocks: Vec<(String, f64)> = [
        (
            "A01",
            DMatrix::from_column_slice(2 * q.n, 1, q.a01().as_slice()),
        ),
        ("A21", q.a21()),
        ("B1_11", q.b1_11()),
        ("B1_12", q.b1_12()),
        ("B1_21", q.b1_21()),
        ("B2_11", q.b2_11()),
        ("B2_12", q.b2_12()),
        ("B2_21", q.b2_21()),
        ("Bbar12", q.bbar12()),
        ("Bbar22", q.bbar22()),
    ]
    .into_iter()
    .map(|(name, m)| (name.to_string(), max_abs(&m)))
    .collect();
    let max_residual = blocks.iter().fold(0.0_f64, |acc, (_, r)| acc.max(*r));
    Ok(StructureReport {
        blocks,
        max_residual,
        tolerance: tol,
        pass: max_residual <= tol,
    })
}

/// Any of the three parametrizations.
#[derive(Debug, Clone, PartialEq)]
pub enum Slh {
    Linear(LinearSLH),
    Bilinear(BilinearSLH),
    Cascade(CascadeSLH),
}

/// Any of the three QSDE bundles.
#[derive(Debug, Clone, PartialEq)]
pub enum Qsde {
    Linear(LinearQSDE),
    Bilinear(BilinearQSDE),
    Cascade(CascadeQSDE),
}

impl Slh {
    pub fn synthesize(&self) -> Result<Qsde> {
        Ok(match self {
            Slh::Linear(s) => Qsde::Linear(synthesize_linear(s)?),
            Slh::Bilinear(s) => Qsde::Bilinear(synthesize_bilinear(s)?),
            Slh::Cascade(s) => Qsde::Cascade(synthesize_cascade(s)?),
        })
    }
}
