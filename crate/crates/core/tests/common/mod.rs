#![allow(dead_code)]

use nalgebra::{DMatrix, RowDVector, RowVector3};
use qsde_cascade::algebra::C64;
use qsde_cascade::model::{BilinearSLH, CascadeSLH, LinearSLH};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SQRT2: f64 = std::f64::consts::SQRT_2;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn u(rng: &mut impl Rng) -> f64 {
    rng.random_range(-1.0..1.0)
}

fn cu(rng: &mut impl Rng) -> C64 {
    C64::new(u(rng), u(rng))
}

pub fn random_linear(rng: &mut impl Rng, n: usize) -> LinearSLH {
    let r = DMatrix::from_fn(2 * n, 2 * n, |_, _| u(rng));
    let r = (&r + r.transpose()) * 0.5;
    let g = RowDVector::from_fn(2 * n, |_, _| cu(rng));
    LinearSLH::new(r, g).unwrap()
}

pub fn random_bilinear(rng: &mut impl Rng) -> BilinearSLH {
    BilinearSLH::new(
        RowVector3::new(u(rng), u(rng), u(rng)),
        RowVector3::new(cu(rng), cu(rng), cu(rng)),
    )
}

pub fn random_cascade(rng: &mut impl Rng) -> CascadeSLH {
    CascadeSLH {
        linear: random_linear(rng, 1),
        bilinear: random_bilinear(rng),
    }
}

pub fn cavity() -> LinearSLH {
    let h = SQRT2 / 2.0;
    LinearSLH::new(
        DMatrix::zeros(2, 2),
        RowDVector::from_vec(vec![C64::new(h, 0.0), C64::new(0.0, h)]),
    )
    .unwrap()
}

pub fn two_level() -> BilinearSLH {
    BilinearSLH::new(
        RowVector3::zeros(),
        RowVector3::new(C64::new(0.5, 0.0), C64::new(0.0, 0.5), C64::new(0.0, 0.0)),
    )
}

pub fn cavity_two_level() -> CascadeSLH {
    CascadeSLH {
        linear: cavity(),
        bilinear: two_level(),
    }
}
