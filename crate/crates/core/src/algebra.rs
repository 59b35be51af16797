//! Matrix machinery shared by the QSDE models: the hat map onto 3×3 skew
//! matrices, the Levi-Civita stacking matrix, column-major `vec`, Kronecker
//! products and the oscillator symplectic form `Θ = I_n ⊗ J`.
//!
//! Everything here is a pure function of its inputs.

use nalgebra::{
    ClosedAddAssign, ClosedMulAssign, ComplexField, DMatrix, DVector, Matrix2, Matrix3, Scalar,
    Vector3,
};
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type C64 = nalgebra::Complex<f64>;

/// Largest imaginary residue tolerated when a complex intermediate is
/// narrowed to a real matrix.
pub const REAL_TOL: f64 = 1e-12;

/// A 3-vector of (possibly complex) scalars.
pub type Vec3<T = C64> = Vector3<T>;

/// Levi-Civita symbol on zero-based indices in `{0, 1, 2}`.
pub fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    debug_assert!(i < 3 && j < 3 && k < 3);
    let (i, j, k) = (i as i64, j as i64, k as i64);
    ((j - i) * (k - j) * (k - i) / 2) as f64
}

/// The hat map `Θ⁻(β)`:
///
/// ```text
/// ⎡  0   β3  -β2 ⎤
/// ⎢ -β3   0   β1 ⎥
/// ⎣  β2  -β1   0 ⎦
/// ```
///
/// With this orientation `Θ⁻(β)γ = γ × β` and `x₂x₂ᵀ = I + iΘ⁻(x₂)` for Pauli
/// vectors.
pub fn theta_minus<T: ComplexField>(beta: &Vector3<T>) -> Matrix3<T> {
    let z = T::zero();
    let (b1, b2, b3) = (beta[0].clone(), beta[1].clone(), beta[2].clone());
    Matrix3::new(
        z.clone(),
        b3.clone(),
        -b2.clone(),
        -b3,
        z.clone(),
        b1.clone(),
        b2,
        -b1,
        z,
    )
}

/// `Θ⁻` applied to a 3-vector whose entries are arbitrary ring elements
/// (operator matrices in the oracle). `zero` supplies the additive identity.
pub fn theta_minus_generic<T>(beta: &[T; 3], zero: T) -> [[T; 3]; 3]
where
    T: Clone + std::ops::Neg<Output = T>,
{
    let [b1, b2, b3] = beta.clone();
    [
        [zero.clone(), b3.clone(), -b2.clone()],
        [-b3, zero.clone(), b1.clone()],
        [b2, -b1, zero],
    ]
}

/// A 3×3 matrix known to be skew-symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewMat3<T: Scalar>(Matrix3<T>);

impl<T: ComplexField<RealField = f64>> SkewMat3<T> {
    pub fn from_axis(beta: &Vector3<T>) -> Self {
        SkewMat3(theta_minus(beta))
    }

    /// Accepts `m` if its symmetric part has no entry above `tol`.
    pub fn try_new(m: Matrix3<T>, tol: f64) -> Result<Self> {
        let asym = max_abs_iter((&m + m.transpose()).iter().cloned());
        if asym > tol {
            return Err(Error::NotSkew(asym));
        }
        Ok(SkewMat3(m))
    }

    pub fn matrix(&self) -> &Matrix3<T> {
        &self.0
    }

    pub fn into_inner(self) -> Matrix3<T> {
        self.0
    }

    pub fn axis(&self) -> Vector3<T> {
        axis_of(&self.0)
    }
}

/// The 9×3 Levi-Civita stacking matrix with `vec(Θ⁻(β)) = F β`.
///
/// Column `i` is `vec(F_i)` where `(F_i)_{jk} = ε_{ijk}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FTensor(DMatrix<f64>);

impl FTensor {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    /// The slice `F_i` with `(F_i)_{jk} = ε_{ijk}`.
    pub fn slice(&self, i: usize) -> Matrix3<f64> {
        Matrix3::from_fn(|j, k| levi_civita(i, j, k))
    }
}

pub fn f_tensor() -> FTensor {
    // vec index of (j, k) is j + 3k
    FTensor(DMatrix::from_fn(9, 3, |row, i| {
        levi_civita(i, row % 3, row / 3)
    }))
}

/// Column-major stacking.
pub fn vec<T: Scalar>(m: &DMatrix<T>) -> DVector<T> {
    DVector::from_column_slice(m.as_slice())
}

/// Inverse of [`vec`].
pub fn unvec<T: Scalar>(v: &DVector<T>, rows: usize, cols: usize) -> Result<DMatrix<T>> {
    if v.len() != rows * cols {
        return Err(Error::shape("unvec input", (rows * cols, 1), (v.len(), 1)));
    }
    Ok(DMatrix::from_column_slice(rows, cols, v.as_slice()))
}

pub fn kron<T>(a: &DMatrix<T>, b: &DMatrix<T>) -> DMatrix<T>
where
    T: Scalar + Zero + One + ClosedAddAssign + ClosedMulAssign,
{
    a.kronecker(b)
}

/// `J = [[0, 1], [-1, 0]]`.
pub fn j2() -> Matrix2<f64> {
    Matrix2::new(0.0, 1.0, -1.0, 0.0)
}

/// The oscillator commutation form `Θ = I_n ⊗ J`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticTheta {
    n: usize,
    matrix: DMatrix<f64>,
}

impl SymplecticTheta {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroOscillators);
        }
        let j = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        Ok(SymplecticTheta {
            n,
            matrix: kron(&DMatrix::identity(n, n), &j),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn complex(&self) -> DMatrix<C64> {
        to_complex(&self.matrix)
    }
}

pub fn theta_osc(n: usize) -> Result<SymplecticTheta> {
    SymplecticTheta::new(n)
}

/// Recovers `b` with `Θ⁻(b) = s` via `b_i = -½ Tr(F_i s)`.
///
/// Rejects `s` whose symmetric part exceeds `tol`.
pub fn recover_axis<T: ComplexField<RealField = f64>>(
    s: &Matrix3<T>,
    tol: f64,
) -> Result<Vector3<T>> {
    let asym = max_abs_iter((s + s.transpose()).iter().cloned());
    if asym > tol {
        return Err(Error::NotSkew(asym));
    }
    Ok(axis_of(s))
}

/// `-½ Tr(F_i s)` without a skewness check; for a general `s` this is the
/// axis of its skew part.
pub(crate) fn axis_of<T: ComplexField<RealField = f64>>(s: &Matrix3<T>) -> Vector3<T> {
    Vector3::from_fn(|i, _| {
        let mut tr = T::zero();
        for j in 0..3 {
            for k in 0..3 {
                let e = levi_civita(i, j, k);
                if e != 0.0 {
                    tr += s[(k, j)].clone() * T::from_real(e);
                }
            }
        }
        tr * T::from_real(-0.5)
    })
}

pub fn to_complex(m: &DMatrix<f64>) -> DMatrix<C64> {
    m.map(|x| C64::new(x, 0.0))
}

pub fn imag_part(m: &DMatrix<C64>) -> DMatrix<f64> {
    m.map(|z| z.im)
}

/// Narrows `m` to its real part, failing if any imaginary part exceeds `tol`.
pub fn real_part_checked(m: &DMatrix<C64>, tol: f64, what: &str) -> Result<DMatrix<f64>> {
    let max_imag = m.iter().fold(0.0_f64, |acc, z| acc.max(z.im.abs()));
    if max_imag > tol {
        return Err(Error::NotReal {
            what: what.to_string(),
            max_imag,
            tol,
        });
    }
    Ok(m.map(|z| z.re))
}

/// Largest entry modulus.
pub fn max_abs<T: ComplexField<RealField = f64>>(m: &DMatrix<T>) -> f64 {
    max_abs_iter(m.iter().cloned())
}

fn max_abs_iter<T: ComplexField<RealField = f64>>(it: impl Iterator<Item = T>) -> f64 {
    it.fold(0.0, |acc, z| acc.max(z.modulus()))
}

/// Embeds a fixed 3×3 into a dynamic matrix.
pub fn dyn3<T: Scalar>(m: &Matrix3<T>) -> DMatrix<T> {
    DMatrix::from_column_slice(3, 3, m.as_slice())
}

/// Reads a 3×3 block out of a dynamic matrix.
pub fn fixed3<T: Scalar>(m: &DMatrix<T>) -> Result<Matrix3<T>> {
    if m.shape() != (3, 3) {
        return Err(Error::shape("3x3 block", (3, 3), m.shape()));
    }
    Ok(Matrix3::from_column_slice(m.as_slice()))
}
