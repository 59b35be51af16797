//! Finite-dimensional operator model on `(ℂᴺ)^{⊗n} ⊗ ℂ²`.
//!
//! Oscillator quadratures are built from a truncated ladder matrix, the
//! two-level variables from Pauli matrices. Truncation only corrupts the top
//! Fock levels, so every residual is measured under the projector `P` onto
//! levels `0..=N−3` of every mode, where products of up to five ladder
//! operators are exact.
//!
//! Residuals are Frobenius norms of `P E P` divided by `√rank P`, so a
//! scalar multiple `c·I` reports `|c|` independently of `N`.

mod drift;
mod lemma2;
mod preservation;

pub use drift::{oracle_drift_match, quadrature_noise};
pub use lemma2::verify_lemma2;
pub use preservation::{verify_preservation_integrands, OpMatrix};

use nalgebra::DMatrix;

use crate::algebra::C64;
use crate::error::{Error, Result};
use crate::model::{BilinearSLH, CascadeSLH, LinearSLH, Slh};

/// A dense operator matrix.
pub type Op = DMatrix<C64>;

pub const DEFAULT_FOCK_DIM: usize = 16;
pub const MIN_FOCK_DIM: usize = 4;
/// Largest dense operator dimension the oracle will build.
pub const MAX_OPERATOR_DIM: usize = 1024;
/// Self-adjointness tolerance for assembled Hamiltonians.
pub const HERMITIAN_TOL: f64 = 1e-12;

const I: C64 = C64::new(0.0, 1.0);

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// `N×N` truncated annihilation matrix, `⟨k−1|a|k⟩ = √k`, for any `N`.
pub fn ladder_matrix(n: usize) -> Op {
    let mut a = Op::zeros(n, n);
    for k in 1..n {
        a[(k - 1, k)] = c((k as f64).sqrt());
    }
    a
}

#[derive(Debug, Clone, PartialEq)]
pub struct FockRep {
    n: usize,
    a: Op,
}

/// Annihilation operator truncated to `N ≥ 4` levels.
pub fn annihilation_op(n: usize) -> Result<FockRep> {
    if n < MIN_FOCK_DIM {
        return Err(Error::FockTooSmall(n));
    }
    Ok(FockRep {
        n,
        a: ladder_matrix(n),
    })
}

impl FockRep {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> &Op {
        &self.a
    }

    pub fn adag(&self) -> Op {
        self.a.adjoint()
    }

    /// `[a, a†] − I`.
    pub fn ccr_defect(&self) -> Op {
        commutator(&self.a, &self.adag()) - Op::identity(self.n, self.n)
    }
}

pub fn commutator(x: &Op, y: &Op) -> Op {
    x * y - y * x
}

pub fn pauli(k: usize) -> Op {
    let z = C64::new(0.0, 0.0);
    match k {
        0 => Op::identity(2, 2),
        1 => Op::from_row_slice(2, 2, &[z, c(1.0), c(1.0), z]),
        2 => Op::from_row_slice(2, 2, &[z, -I, I, z]),
        3 => Op::from_row_slice(2, 2, &[c(1.0), z, z, c(-1.0)]),
        _ => panic!("Pauli index {k} out of range"),
    }
}

/// Coefficients `(c₀, c₁, c₂, c₃)` with `m = c₀I + Σ cₖσₖ`.
pub fn pauli_decompose(m: &Op) -> Result<[C64; 4]> {
    if m.shape() != (2, 2) {
        return Err(Error::shape("Pauli operand", (2, 2), m.shape()));
    }
    Ok(std::array::from_fn(|k| (pauli(k) * m).trace() * c(0.5)))
}

fn kron_c(a: &Op, b: &Op) -> Op {
    a.kronecker(b)
}

/// Operators for `n` oscillator modes and one two-level system.
#[derive(Debug, Clone)]
pub struct CompositeRep {
    modes: usize,
    fock_dim: usize,
    x1: Vec<Op>,
    x2: [Op; 3],
    keep: Vec<bool>,
    rank: usize,
}

/// Single-mode representation on `ℂᴺ ⊗ ℂ²`.
pub fn composite_rep(fock_dim: usize) -> Result<CompositeRep> {
    CompositeRep::new(1, fock_dim)
}

impl CompositeRep {
    /// `modes` may be zero, leaving only the two-level factor.
    pub fn new(modes: usize, fock_dim: usize) -> Result<Self> {
        let fock = annihilation_op(fock_dim)?;
        let fock_total = (0..modes).try_fold(1usize, |acc, _| acc.checked_mul(fock_dim));
        let dim = fock_total.and_then(|f| f.checked_mul(2));
        let dim = match dim {
            Some(d) if d <= MAX_OPERATOR_DIM => d,
            _ => {
                return Err(Error::DimensionTooLarge {
                    dim: dim.unwrap_or(usize::MAX),
                    limit: MAX_OPERATOR_DIM,
                })
            }
        };
        let fock_total = dim / 2;

        let a = fock.a();
        let ad = fock.adag();
        let q = a + &ad;
        let p = (a - &ad) * (-I);
        let eye2 = Op::identity(2, 2);

        let mut x1 = Vec::with_capacity(2 * modes);
        for m in 0..modes {
            let left = Op::identity(fock_dim.pow(m as u32), fock_dim.pow(m as u32));
            let right_n = fock_dim.pow((modes - m - 1) as u32);
            let right = Op::identity(right_n, right_n);
            for quad in [&q, &p] {
                x1.push(kron_c(&kron_c(&kron_c(&left, quad), &right), &eye2));
            }
        }
        let id_f = Op::identity(fock_total, fock_total);
        let x2 = [1, 2, 3].map(|k| kron_c(&id_f, &pauli(k)));

        let keep: Vec<bool> = (0..dim)
            .map(|idx| {
                let mut f = idx / 2;
                (0..modes).all(|_| {
                    let digit = f % fock_dim;
                    f /= fock_dim;
                    digit + 3 <= fock_dim
                })
            })
            .collect();
        let rank = keep.iter().filter(|&&k| k).count();

        Ok(CompositeRep {
            modes,
            fock_dim,
            x1,
            x2,
            keep,
            rank,
        })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn fock_dim(&self) -> usize {
        self.fock_dim
    }

    pub fn dim(&self) -> usize {
        self.keep.len()
    }

    pub fn identity(&self) -> Op {
        Op::identity(self.dim(), self.dim())
    }

    pub fn zero(&self) -> Op {
        Op::zeros(self.dim(), self.dim())
    }

    /// Oscillator quadratures `(q₁, p₁, …, qₙ, pₙ)`.
    pub fn x1(&self) -> &[Op] {
        &self.x1
    }

    /// Embedded Pauli matrices `(σ₁, σ₂, σ₃)`.
    pub fn x2(&self) -> &[Op; 3] {
        &self.x2
    }

    /// `x = (x₁; x₂)`.
    pub fn x(&self) -> Vec<Op> {
        self.x1.iter().chain(self.x2.iter()).cloned().collect()
    }

    /// The projector `P` as a matrix.
    pub fn projector(&self) -> Op {
        Op::from_diagonal(&nalgebra::DVector::from_iterator(
            self.dim(),
            self.keep.iter().map(|&k| if k { c(1.0) } else { c(0.0) }),
        ))
    }

    /// `Σ |(PEP)_ij|²`.
    fn projected_sq(&self, e: &Op) -> f64 {
        let mut acc = 0.0;
        for j in 0..e.ncols() {
            if !self.keep[j] {
                continue;
            }
            for i in 0..e.nrows() {
                if self.keep[i] {
                    acc += e[(i, j)].norm_sqr();
                }
            }
        }
        acc
    }

    /// `‖PEP‖_F / √rank P`.
    pub fn projected_norm(&self, e: &Op) -> f64 {
        (self.projected_sq(e) / self.rank as f64).sqrt()
    }

    /// Combined residual of a vector of operators.
    pub fn projected_norm_all(&self, es: &[Op]) -> f64 {
        (es.iter().map(|e| self.projected_sq(e)).sum::<f64>() / self.rank as f64).sqrt()
    }

    /// `Σ_k coeffs[k] · ops[k]`.
    pub fn lin_comb<'a>(
        &self,
        coeffs: impl IntoIterator<Item = C64>,
        ops: impl IntoIterator<Item = &'a Op>,
    ) -> Op {
        let mut out = self.zero();
        for (w, op) in coeffs.into_iter().zip(ops) {
            if w != c(0.0) {
                out += op * w;
            }
        }
        out
    }

    /// `(M x)_j` for a coefficient matrix `M` acting on operators `x`.
    pub fn apply(&self, m: &DMatrix<C64>, x: &[Op]) -> Vec<Op> {
        (0..m.nrows())
            .map(|j| self.lin_comb(m.row(j).iter().cloned(), x.iter()))
            .collect()
    }

    pub fn scalar(&self, z: C64) -> Op {
        self.identity() * z
    }
}

/// Coupling and Hamiltonian operators of an SLH triple with `S = I`.
#[derive(Debug, Clone)]
pub struct SLHOperators {
    pub l: Op,
    pub h: Op,
}

impl SLHOperators {
    pub fn zero(rep: &CompositeRep) -> Self {
        SLHOperators {
            l: rep.zero(),
            h: rep.zero(),
        }
    }
}

/// `(L₁, H₁)` with `H₁ = ½ x₁ᵀ R x₁`.
pub(crate) fn linear_parts(rep: &CompositeRep, slh: &LinearSLH) -> Result<(Op, Op)> {
    if slh.n() != rep.modes() {
        return Err(Error::shape(
            "oscillator count",
            (rep.modes(), 1),
            (slh.n(), 1),
        ));
    }
    let x1 = rep.x1();
    let l = rep.lin_comb(slh.gamma1().iter().cloned(), x1.iter());
    let mut h = rep.zero();
    let r = slh.r();
    for j in 0..x1.len() {
        for k in 0..x1.len() {
            if r[(j, k)] != 0.0 {
                h += &x1[j] * &x1[k] * c(0.5 * r[(j, k)]);
            }
        }
    }
    Ok((l, h))
}

/// `(L₂, H₂)` with `H₂ = α₂ x₂`.
pub(crate) fn bilinear_parts(rep: &CompositeRep, slh: &BilinearSLH) -> (Op, Op) {
    let l = rep.lin_comb(slh.gamma2.iter().cloned(), rep.x2().iter());
    let h = rep.lin_comb(slh.alpha2.iter().map(|&a| c(a)), rep.x2().iter());
    (l, h)
}

/// Assembles `L` and `H` for any parametrization. In a cascade the
/// two-level system drives the oscillator: `L = L₁ + L₂` and
/// `H = H₁ + H₂ + (1/2i)(L₁†L₂ − L₂†L₁)`.
pub fn build_slh_operators(rep: &CompositeRep, slh: &Slh) -> Result<SLHOperators> {
    let (l, h) = match slh {
        Slh::Linear(s) => linear_parts(rep, s)?,
        Slh::Bilinear(s) => bilinear_parts(rep, s),
        Slh::Cascade(CascadeSLH { linear, bilinear }) => {
            let (l1, h1) = linear_parts(rep, linear)?;
            let (l2, h2) = bilinear_parts(rep, bilinear);
            let cross = (l1.adjoint() * &l2 - l2.adjoint() * &l1) * (-I * c(0.5));
            (l1 + l2, h1 + h2 + cross)
        }
    };
    let asym = (&h - h.adjoint())
        .iter()
        .fold(0.0f64, |m, z| m.max(z.norm()));
    if asym > HERMITIAN_TOL {
        return Err(Error::NotSelfAdjoint(asym));
    }
    Ok(SLHOperators { l, h })
}

/// `−i[X, H] + ½(L†[X, L] + [L†, X]L)`.
pub fn lindblad(x: &Op, ops: &SLHOperators) -> Result<Op> {
    check_shape(x, &ops.h)?;
    let ld = ops.l.adjoint();
    let term = &ld * commutator(x, &ops.l) + commutator(&ld, x) * &ops.l;
    Ok(commutator(x, &ops.h) * (-I) + term * c(0.5))
}

fn check_shape(x: &Op, h: &Op) -> Result<()> {
    if x.shape() != h.shape() {
        return Err(Error::shape("operator", h.shape(), x.shape()));
    }
    Ok(())
}

/// Coefficients of `dX = drift dt + dw_dag dW† + dw dW`.
#[derive(Debug, Clone)]
pub struct OperatorCoefficients {
    pub drift: Op,
    pub dw: Op,
    pub dw_dag: Op,
}

impl OperatorCoefficients {
    /// Coefficients of `dW̄₁` and `dW̄₂` under `W = (W̄₁ + iW̄₂)/2`.
    pub fn quadrature(&self) -> (Op, Op) {
        quadrature_noise(&self.dw, &self.dw_dag)
    }
}

pub fn heisenberg_coefficients(x: &Op, ops: &SLHOperators) -> Result<OperatorCoefficients> {
    Ok(OperatorCoefficients {
        drift: lindblad(x, ops)?,
        dw: commutator(&ops.l.adjoint(), x),
        dw_dag: commutator(x, &ops.l),
    })
}
