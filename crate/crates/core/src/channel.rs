//! Kraus families, their isometries, and the linear maps on operators built
//! from them.
//!
//! A family `{K_1, ..., K_k}` of `D x D` matrices with `sum K_i* K_i = 1`
//! defines the isometry `V|phi> = sum_i K_i|phi> (x) |i>` from the system into
//! system (x) noise, the Heisenberg map `T(X) = sum K_i* X K_i` and its predual
//! `T_*(rho) = sum K_i rho K_i*`. The joint space is ordered system-major: the
//! basis vector `|s> (x) |i>` sits at index `s * k + i`.

use crate::error::{Error, Result};
use crate::family::ParamFamily;
use crate::linalg::{self, ComplexMatrix, ComplexVector};
use crate::tolerance::{Tolerances, MAX_SYSTEM_DIM};
use num_complex::Complex64;

/// A validated Kraus family.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausFamily {
    dim_system: usize,
    dim_noise: usize,
    kraus: Vec<ComplexMatrix>,
    deviation: f64,
}

impl KrausFamily {
    /// Validates with the default structural tolerance.
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        Self::with_tolerance(kraus, Tolerances::default().structural)
    }

    pub fn with_tolerance(kraus: Vec<ComplexMatrix>, tol: f64) -> Result<Self> {
        let family = Self::unchecked(kraus)?;
        if family.deviation > tol {
            return Err(Error::NotIsometry { deviation: family.deviation });
        }
        Ok(family)
    }

    /// Shape checks only. Used for perturbed or truncated families that are
    /// isometric only approximately.
    pub(crate) fn unchecked(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::InvalidInput("empty Kraus family".into()))?;
        let d = first.nrows();
        if d == 0 || first.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "Kraus operator 0 is {}x{}, expected square",
                first.nrows(),
                first.ncols()
            )));
        }
        if d > MAX_SYSTEM_DIM {
            return Err(Error::InvalidInput(format!(
                "system dimension {d} exceeds the supported maximum {MAX_SYSTEM_DIM}"
            )));
        }
        for (i, k) in kraus.iter().enumerate() {
            if k.shape() != (d, d) {
                return Err(Error::DimensionMismatch(format!(
                    "Kraus operator {i} is {}x{}, expected {d}x{d}",
                    k.nrows(),
                    k.ncols()
                )));
            }
            if !linalg::is_finite(k) {
                return Err(Error::InvalidInput(format!("Kraus operator {i} has non-finite entries")));
            }
        }
        let sum = kraus
            .iter()
            .fold(linalg::zeros(d, d), |acc, k| acc + k.adjoint() * k);
        let deviation = linalg::max_norm(&(sum - linalg::identity(d)));
        Ok(KrausFamily { dim_system: d, dim_noise: kraus.len(), kraus, deviation })
    }

    /// Splits a `(D k) x D` isometry into its Kraus blocks.
    pub fn from_isometry(v: &ComplexMatrix, dim_noise: usize) -> Result<Self> {
        let d = v.ncols();
        if dim_noise == 0 || v.nrows() != d * dim_noise {
            return Err(Error::DimensionMismatch(format!(
                "isometry is {}x{}, expected {}x{d}",
                v.nrows(),
                d,
                d * dim_noise
            )));
        }
        let kraus = (0..dim_noise)
            .map(|i| ComplexMatrix::from_fn(d, d, |s, t| v[(s * dim_noise + i, t)]))
            .collect();
        Self::new(kraus)
    }

    pub fn dim_system(&self) -> usize {
        self.dim_system
    }

    pub fn dim_noise(&self) -> usize {
        self.dim_noise
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    /// `max |sum K_i* K_i - 1|` measured at construction.
    pub fn deviation(&self) -> f64 {
        self.deviation
    }

    /// The isometry `V` as a `(D k) x D` matrix.
    pub fn isometry(&self) -> ComplexMatrix {
        stack_isometry(&self.kraus)
    }

    /// `T(X) = sum K_i* X K_i`.
    pub fn heisenberg(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_square(x)?;
        Ok(self.heisenberg_unchecked(x))
    }

    pub(crate) fn heisenberg_unchecked(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let d = self.dim_system;
        self.kraus
            .iter()
            .fold(linalg::zeros(d, d), |acc, k| acc + k.adjoint() * x * k)
    }

    /// `T_*(rho) = sum K_i rho K_i*`.
    pub fn predual(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_square(rho)?;
        Ok(self.predual_unchecked(rho))
    }

    pub(crate) fn predual_unchecked(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let d = self.dim_system;
        self.kraus
            .iter()
            .fold(linalg::zeros(d, d), |acc, k| acc + k * rho * k.adjoint())
    }

    /// Transfer matrix of `T`.
    pub fn transfer(&self) -> SuperOperator {
        SuperOperator::sandwich(&self.kraus, &self.kraus)
    }

    /// Transfer matrix of the predual `T_*`.
    pub fn predual_transfer(&self) -> SuperOperator {
        let adj: Vec<ComplexMatrix> = self.kraus.iter().map(|k| k.adjoint()).collect();
        SuperOperator::sandwich(&adj, &adj)
    }

    /// `E(X) = V* X V` for an operator on system (x) noise.
    pub fn conditional_expectation(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = self.dim_system * self.dim_noise;
        if x.shape() != (n, n) {
            return Err(Error::DimensionMismatch(format!(
                "operator is {}x{}, expected {n}x{n}",
                x.nrows(),
                x.ncols()
            )));
        }
        let v = self.isometry();
        Ok(v.adjoint() * x * v)
    }

    /// The family `{c K_i}` for a scalar `c`.
    pub fn scaled(&self, factor: Complex64) -> Result<Self> {
        Self::new(self.kraus.iter().map(|k| k * factor).collect())
    }

    /// The family `{c U* K_i U}`, i.e. the isometry `c (U* (x) 1) V U`.
    pub fn conjugated(&self, u: &ComplexMatrix, phase: Complex64) -> Result<Self> {
        self.check_square(u)?;
        Self::new(self.kraus.iter().map(|k| u.adjoint() * k * u * phase).collect())
    }

    fn check_square(&self, x: &ComplexMatrix) -> Result<()> {
        let d = self.dim_system;
        if x.shape() != (d, d) {
            return Err(Error::DimensionMismatch(format!(
                "operator is {}x{}, expected {d}x{d}",
                x.nrows(),
                x.ncols()
            )));
        }
        Ok(())
    }
}

pub(crate) fn stack_isometry(kraus: &[ComplexMatrix]) -> ComplexMatrix {
    let k = kraus.len();
    let d = kraus[0].nrows();
    ComplexMatrix::from_fn(d * k, d, |row, t| kraus[row % k][(row / k, t)])
}

/// A linear map between operator spaces, stored as a matrix acting on
/// row-major vectorized operators.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperOperator {
    dim_in: (usize, usize),
    dim_out: (usize, usize),
    matrix: ComplexMatrix,
}

impl SuperOperator {
    pub fn from_matrix(dim_in: (usize, usize), dim_out: (usize, usize), matrix: ComplexMatrix) -> Result<Self> {
        if matrix.shape() != (dim_out.0 * dim_out.1, dim_in.0 * dim_in.1) {
            return Err(Error::DimensionMismatch(format!(
                "superoperator matrix {}x{} inconsistent with shapes {:?} -> {:?}",
                matrix.nrows(),
                matrix.ncols(),
                dim_in,
                dim_out
            )));
        }
        Ok(SuperOperator { dim_in, dim_out, matrix })
    }

    /// The map `X -> sum_i L_i* X R_i`.
    ///
    /// Panics if the lists differ in length or shape.
    pub fn sandwich(left: &[ComplexMatrix], right: &[ComplexMatrix]) -> Self {
        assert_eq!(left.len(), right.len());
        let (r, a) = left[0].shape();
        let (s, b) = right[0].shape();
        let mut matrix = linalg::zeros(a * b, r * s);
        for (l, rr) in left.iter().zip(right) {
            matrix += linalg::kron(&l.adjoint(), &rr.transpose());
        }
        SuperOperator { dim_in: (r, s), dim_out: (a, b), matrix }
    }

    pub fn dim_in(&self) -> (usize, usize) {
        self.dim_in
    }

    pub fn dim_out(&self) -> (usize, usize) {
        self.dim_out
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(x.shape(), self.dim_in, "operator shape");
        let v = &self.matrix * linalg::vectorize(x);
        linalg::unvectorize(&v, self.dim_out.0, self.dim_out.1)
    }

    /// `n`-fold application; requires equal input and output shapes.
    pub fn apply_power(&self, x: &ComplexMatrix, n: usize) -> ComplexMatrix {
        assert_eq!(self.dim_in, self.dim_out);
        let mut v = linalg::vectorize(x);
        for _ in 0..n {
            v = &self.matrix * v;
        }
        linalg::unvectorize(&v, self.dim_out.0, self.dim_out.1)
    }

    /// Spectrum sorted by decreasing modulus.
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        linalg::eigenvalues(&self.matrix)
    }

    /// Choi matrix `sum_rs E_rs (x) Phi(E_rs)`, defined for maps between
    /// square operator spaces.
    pub fn choi(&self) -> ComplexMatrix {
        let (din, _) = self.dim_in;
        let (dout, _) = self.dim_out;
        ComplexMatrix::from_fn(din * dout, din * dout, |row, col| {
            let (r, p) = (row / dout, row % dout);
            let (s, q) = (col / dout, col % dout);
            self.matrix[(p * dout + q, r * din + s)]
        })
    }

    /// Largest entrywise difference of the two transfer matrices.
    pub fn max_distance(&self, other: &SuperOperator) -> f64 {
        linalg::max_norm(&(&self.matrix - &other.matrix))
    }
}

/// A validated density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() == 0 {
            return Err(Error::DimensionMismatch("density matrix must be square".into()));
        }
        let herm = linalg::hermiticity_defect(&matrix);
        if herm > tol {
            return Err(Error::NotHermitian(herm));
        }
        let tr = linalg::trace(&matrix);
        if (tr - linalg::ONE).norm() > tol {
            return Err(Error::InvalidInput(format!("density matrix trace {tr} differs from 1")));
        }
        let min = linalg::eigh(&matrix).0[0];
        if min < -tol {
            return Err(Error::NotPSD(min));
        }
        Ok(DensityMatrix { matrix })
    }

    pub(crate) fn trusted(matrix: ComplexMatrix) -> Self {
        DensityMatrix { matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Eigenvalues ascending with eigenvectors as columns.
    pub fn spectral_decomposition(&self) -> (Vec<f64>, ComplexMatrix) {
        linalg::eigh(&self.matrix)
    }

    pub fn expectation(&self, x: &ComplexMatrix) -> Complex64 {
        linalg::trace(&(&self.matrix * x))
    }
}

/// Validate a list of Kraus matrices (default tolerance).
pub fn validate_kraus(kraus: Vec<ComplexMatrix>) -> Result<KrausFamily> {
    KrausFamily::new(kraus)
}

pub fn apply_heisenberg(v: &KrausFamily, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    v.heisenberg(x)
}

pub fn apply_predual(v: &KrausFamily, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    v.predual(rho)
}

pub fn conditional_expectation(v: &KrausFamily, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    v.conditional_expectation(x)
}

/// The cross map `X -> sum_i K_{1,i}* X K_{2,i}` on `D1 x D2` operators.
pub fn cross_map(v1: &KrausFamily, v2: &KrausFamily) -> Result<SuperOperator> {
    if v1.dim_noise != v2.dim_noise {
        return Err(Error::NoiseDimMismatch(v1.dim_noise, v2.dim_noise));
    }
    Ok(SuperOperator::sandwich(&v1.kraus, &v2.kraus))
}

/// `X -> V*_{theta0 + u/sqrt n} (X (x) 1) V_{theta0 + v/sqrt n}`.
pub fn deformed_map(family: &ParamFamily, u: f64, v: f64, n: usize) -> SuperOperator {
    let scale = 1.0 / (n as f64).sqrt();
    let left = family.kraus_at(u * scale);
    let right = family.kraus_at(v * scale);
    SuperOperator::sandwich(&left, &right)
}

/// Embeds `V` into the joint space: `|phi> -> V|phi>` as a vector.
pub fn apply_isometry(v: &KrausFamily, phi: &ComplexVector) -> ComplexVector {
    v.isometry() * phi
}
