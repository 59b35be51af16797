use nalgebra::{DMatrix, DVector};

use super::{build_slh_operators, heisenberg_coefficients, CompositeRep, Op};
use crate::algebra::C64;
use crate::error::{Error, Result};
use crate::model::{CascadeSLH, Qsde, Slh};
use crate::realizability::RealizabilityReport;

const I: C64 = C64::new(0.0, 1.0);

/// `dW̄₁` and `dW̄₂` coefficients from the `dW` and `dW†` coefficients.
pub fn quadrature_noise(dw: &Op, dw_dag: &Op) -> (Op, Op) {
    let half = C64::new(0.5, 0.0);
    ((dw + dw_dag) * half, (dw - dw_dag) * (I * half))
}

/// Every QSDE flattened to `dx = (A₀ + Ax)dt + B₁x dW̄₁ + B₂x dW̄₂ + B̄ dW̄`,
/// `dy = Cx dt + dW̄`, with `x = (x₁; x₂)`.
struct Flat {
    modes: usize,
    spin: bool,
    a0: DVector<f64>,
    a: DMatrix<f64>,
    b1: DMatrix<f64>,
    b2: DMatrix<f64>,
    bbar: DMatrix<f64>,
    c: DMatrix<f64>,
}

impl Flat {
    fn from_qsde(q: &Qsde) -> Result<Self> {
        Ok(match q {
            Qsde::Linear(l) => {
                l.validate()?;
                let d = l.a.nrows();
                Flat {
                    modes: l.n(),
                    spin: false,
                    a0: DVector::zeros(d),
                    a: l.a.clone(),
                    b1: DMatrix::zeros(d, d),
                    b2: DMatrix::zeros(d, d),
                    bbar: l.b.clone(),
                    c: l.c.clone(),
                }
            }
            Qsde::Bilinear(b) => Flat {
                modes: 0,
                spin: true,
                a0: DVector::from_column_slice(b.a0.as_slice()),
                a: DMatrix::from_column_slice(3, 3, b.a.as_slice()),
                b1: DMatrix::from_column_slice(3, 3, b.b1.as_slice()),
                b2: DMatrix::from_column_slice(3, 3, b.b2.as_slice()),
                bbar: DMatrix::zeros(3, 2),
                c: DMatrix::from_column_slice(2, 3, b.c.as_slice()),
            },
            Qsde::Cascade(c) => {
                c.validate()?;
                Flat {
                    modes: c.n,
                    spin: true,
                    a0: c.a0.clone(),
                    a: c.a.clone(),
                    b1: c.b1.clone(),
                    b2: c.b2.clone(),
                    bbar: c.b.clone(),
                    c: c.c.clone(),
                }
            }
        })
    }
}

fn slh_shape(slh: &Slh) -> (usize, bool) {
    match slh {
        Slh::Linear(l) => (l.n(), false),
        Slh::Bilinear(_) => (0, true),
        Slh::Cascade(CascadeSLH { linear, .. }) => (linear.n(), true),
    }
}

/// Compares the matrix model `q` with the Heisenberg dynamics of `slh` on
/// an `N`-level operator model: drift, both quadrature noise coefficients
/// and both output quadratures.
pub fn oracle_drift_match(
    q: &Qsde,
    slh: &Slh,
    fock_dim: usize,
    tol: f64,
) -> Result<RealizabilityReport> {
    let flat = Flat::from_qsde(q)?;
    let (modes, spin) = slh_shape(slh);
    if (modes, spin) != (flat.modes, flat.spin) {
        let state = |m: usize, s: bool| 2 * m + if s { 3 } else { 0 };
        return Err(Error::shape(
            "state dimension",
            (state(modes, spin), 1),
            (state(flat.modes, flat.spin), 1),
        ));
    }
    let rep = CompositeRep::new(modes, fock_dim)?;
    let ops = build_slh_operators(&rep, slh)?;

    let x: Vec<Op> = if spin { rep.x() } else { rep.x1().to_vec() };
    let to_c = |m: &DMatrix<f64>| m.map(|v| C64::new(v, 0.0));
    let ax = rep.apply(&to_c(&flat.a), &x);
    let b1x = rep.apply(&to_c(&flat.b1), &x);
    let b2x = rep.apply(&to_c(&flat.b2), &x);
    let real = |v: f64| C64::new(v, 0.0);

    let mut drift = Vec::with_capacity(x.len());
    let mut w1 = Vec::with_capacity(x.len());
    let mut w2 = Vec::with_capacity(x.len());
    for (j, xj) in x.iter().enumerate() {
        let coeffs = heisenberg_coefficients(xj, &ops)?;
        let (n1, n2) = coeffs.quadrature();
        drift.push(coeffs.drift - &ax[j] - rep.scalar(real(flat.a0[j])));
        w1.push(n1 - &b1x[j] - rep.scalar(real(flat.bbar[(j, 0)])));
        w2.push(n2 - &b2x[j] - rep.scalar(real(flat.bbar[(j, 1)])));
    }

    let cx = rep.apply(&to_c(&flat.c), &x);
    let ld = ops.l.adjoint();
    let y1 = &ops.l + &ld;
    let y2 = (&ops.l - &ld) * (-I);
    let output = [y1 - &cx[0], y2 - &cx[1]];

    let mut out = RealizabilityReport::new(tol);
    out.push("drift", "L(x) = A₀ + Ax", rep.projected_norm_all(&drift));
    out.push(
        "noise.w1",
        "dW̄₁ coefficient = B₁x + B̄e₁",
        rep.projected_norm_all(&w1),
    );
    out.push(
        "noise.w2",
        "dW̄₂ coefficient = B₂x + B̄e₂",
        rep.projected_norm_all(&w2),
    );
    out.push(
        "output",
        "(L + L†, −i(L − L†)) = Cx",
        rep.projected_norm_all(&output),
    );
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{BilinearSLH, LinearSLH};
    use nalgebra::{RowDVector, RowVector3};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn cavity() -> LinearSLH {
        let h = std::f64::consts::SQRT_2 / 2.0;
        LinearSLH::new(
            DMatrix::zeros(2, 2),
            RowDVector::from_vec(vec![c(h, 0.0), c(0.0, h)]),
        )
        .unwrap()
    }

    fn two_level() -> BilinearSLH {
        BilinearSLH::new(
            RowVector3::zeros(),
            RowVector3::new(c(0.5, 0.0), c(0.0, 0.5), c(0.0, 0.0)),
        )
    }

    fn matches(slh: Slh, fock_dim: usize, tol: f64) -> RealizabilityReport {
        let q = slh.synthesize().unwrap();
        oracle_drift_match(&q, &slh, fock_dim, tol).unwrap()
    }

    #[test]
    fn cavity_matches() {
        let rep = matches(Slh::Linear(cavity()), 16, 1e-9);
        assert!(rep.pass(), "{rep:?}");
    }

    #[test]
    fn two_level_is_exact() {
        let rep = matches(Slh::Bilinear(two_level()), 4, 1e-14);
        assert!(rep.pass(), "{rep:?}");
    }

    #[test]
    fn cascade_matches() {
        let slh = Slh::Cascade(CascadeSLH {
            linear: cavity(),
            bilinear: two_level(),
        });
        let rep = matches(slh, 16, 1e-9);
        assert!(rep.pass(), "{rep:?}");
    }

    #[test]
    fn zero_matches() {
        let rep = matches(
            Slh::Cascade(CascadeSLH {
                linear: LinearSLH::zero(1).unwrap(),
                bilinear: BilinearSLH::zero(),
            }),
            4,
            0.0,
        );
        assert!(rep.pass());
    }

    #[test]
    fn wrong_model_is_detected() {
        let slh = Slh::Linear(cavity());
        let mut q = slh.synthesize().unwrap();
        if let Qsde::Linear(l) = &mut q {
            l.b *= 2.0;
        }
        let rep = oracle_drift_match(&q, &slh, 8, 1e-9).unwrap();
        assert_eq!(rep.failing(), vec!["noise.w1", "noise.w2"]);
    }

    #[test]
    fn kind_mismatch_is_an_error() {
        let q = Slh::Bilinear(two_level()).synthesize().unwrap();
        assert!(oracle_drift_match(&q, &Slh::Linear(cavity()), 8, 1e-9).is_err());
    }
}
