//! Perron-Frobenius analysis of the transfer matrix: stationary state,
//! irreducibility and primitivity verdicts, spectral gap, and the resolvent
//! `R = (Id - T)^{-1}` on the mean-zero subspace.

use crate::channel::{DensityMatrix, KrausFamily};
use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, ComplexVector};
use crate::tolerance::Tolerances;
use num_complex::Complex64;

/// Spectral summary of a Kraus family.
#[derive(Debug, Clone)]
pub struct SpectralReport {
    /// Transfer-matrix spectrum, decreasing modulus.
    pub eigenvalues: Vec<Complex64>,
    /// Unique stationary state, when the fixed space of `T_*` is one-dimensional.
    pub stationary: Option<DensityMatrix>,
    pub stationary_eigen_residual: f64,
    pub is_irreducible: bool,
    pub is_primitive: bool,
    /// `1 - |lambda_2|`.
    pub spectral_gap: f64,
    /// Set when a verdict sits within a factor 10 of its threshold.
    pub borderline: bool,
}

/// Stationary state with default tolerances.
pub fn stationary_state(v: &KrausFamily) -> Result<DensityMatrix> {
    stationary_state_with(v, &Tolerances::default())
}

/// Unique fixed point of `T_*`, normalized to trace one.
pub fn stationary_state_with(v: &KrausFamily, tol: &Tolerances) -> Result<DensityMatrix> {
    let d = v.dim_system();
    let m = v.predual_transfer().matrix() - linalg::identity(d * d);
    let pairs = linalg::smallest_right_singular(&m);
    let kernel_dim = pairs.iter().take_while(|(s, _)| *s < tol.gap).count();
    if kernel_dim != 1 {
        return Err(Error::DegenerateFixedSpace(kernel_dim));
    }
    let raw = linalg::unvectorize(&pairs[0].1, d, d);
    let tr = linalg::trace(&raw);
    let rho = linalg::re_part(&(raw / tr));
    let min = linalg::eigh(&rho).0[0];
    if min < -tol.derived {
        return Err(Error::NotAState(min));
    }
    Ok(DensityMatrix::trusted(rho))
}

/// `max |T_*(rho) - rho|`.
pub fn fixed_point_residual(v: &KrausFamily, rho: &DensityMatrix) -> f64 {
    linalg::max_norm(&(v.predual_unchecked(rho.matrix()) - rho.matrix()))
}

pub fn primitivity_check(v: &KrausFamily) -> SpectralReport {
    primitivity_check_with(v, &Tolerances::default())
}

/// Spectral primitivity verdict.
///
/// Primitive means: eigenvalue 1 simple, no other eigenvalue of modulus above
/// `1 - gap`, and a stationary state with minimum eigenvalue at least `rank`.
/// Irreducible drops the peripheral-spectrum condition.
pub fn primitivity_check_with(v: &KrausFamily, tol: &Tolerances) -> SpectralReport {
    let eigenvalues = v.transfer().eigenvalues();
    let peripheral = eigenvalues.iter().filter(|z| z.norm() >= 1.0 - tol.gap).count();
    let at_one = eigenvalues.iter().filter(|z| (*z - linalg::ONE).norm() <= tol.gap).count();
    let second = eigenvalues.get(1).map(|z| z.norm()).unwrap_or(0.0);
    let spectral_gap = 1.0 - second;

    let stationary = stationary_state_with(v, tol).ok();
    let (residual, min_eig) = match &stationary {
        Some(rho) => (fixed_point_residual(v, rho), rho.spectral_decomposition().0[0]),
        None => (f64::NAN, f64::NAN),
    };
    let full_rank = min_eig >= tol.rank;
    let is_irreducible = at_one == 1 && stationary.is_some() && full_rank;
    let is_primitive = is_irreducible && peripheral == 1;

    let near_gap = eigenvalues
        .iter()
        .skip(1)
        .any(|z| z.norm() >= 1.0 - 10.0 * tol.gap && z.norm() < 1.0 - tol.gap);
    let near_rank = min_eig >= tol.rank && min_eig < 10.0 * tol.rank;

    SpectralReport {
        eigenvalues,
        stationary,
        stationary_eigen_residual: residual,
        is_irreducible,
        is_primitive,
        spectral_gap,
        borderline: near_gap || near_rank,
    }
}

/// Returns the stationary state when `v` is primitive.
pub fn require_primitive(v: &KrausFamily, tol: &Tolerances) -> Result<DensityMatrix> {
    let report = primitivity_check_with(v, tol);
    match (report.is_primitive, report.stationary) {
        (true, Some(rho)) => Ok(rho),
        _ => Err(Error::NotPrimitive),
    }
}

/// Smallest `n <= n_max` such that the Kraus products of length `n` span the
/// full matrix algebra, i.e. `T^n` is strictly positive. `None` if no such
/// `n` is found.
pub fn power_positivity_check(v: &KrausFamily, n_max: usize) -> Option<usize> {
    let d = v.dim_system();
    let full = d * d;
    let mut basis = vec![linalg::vectorize(&linalg::identity(d))];
    for n in 1..=n_max {
        let mut candidates = Vec::with_capacity(basis.len() * v.dim_noise());
        for b in &basis {
            let m = linalg::unvectorize(b, d, d);
            for k in v.kraus() {
                candidates.push(linalg::vectorize(&(k * &m)));
            }
        }
        basis = orthonormal_span(&candidates, 1e-10);
        if basis.len() == full {
            return Some(n);
        }
    }
    None
}

fn orthonormal_span(vectors: &[ComplexVector], tol: f64) -> Vec<ComplexVector> {
    let mut out: Vec<ComplexVector> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &out {
                let proj = b.dotc(&w);
                w -= b * proj;
            }
        }
        let norm = w.norm();
        if norm > tol {
            out.push(w / Complex64::new(norm, 0.0));
        }
    }
    out
}

/// `max |T^n(X) - tr[X rho_ss] 1|`.
pub fn mixing_check(v: &KrausFamily, x: &ComplexMatrix, n: usize) -> Result<f64> {
    let rho = require_primitive(v, &Tolerances::default())?;
    let d = v.dim_system();
    if x.shape() != (d, d) {
        return Err(Error::DimensionMismatch(format!("operator must be {d}x{d}")));
    }
    let mean = rho.expectation(x);
    let mut y = x.clone();
    for _ in 0..n {
        y = v.heisenberg_unchecked(&y);
    }
    Ok(linalg::max_norm(&(y - linalg::identity(d) * mean)))
}

/// Inverse of `Id - T` restricted to `A_0 = {X : tr[rho_ss X] = 0}`.
///
/// Solves the augmented system `[(Id - T); vec(rho_ss)*] vec(Y) = [vec(X); 0]`
/// through a precomputed SVD pseudo-inverse.
#[derive(Debug, Clone)]
pub struct Resolvent {
    dim: usize,
    stationary: DensityMatrix,
    pinv: ComplexMatrix,
    domain_tol: f64,
}

impl Resolvent {
    pub fn new(v: &KrausFamily) -> Result<Self> {
        Self::with_tolerances(v, &Tolerances::default())
    }

    pub fn with_tolerances(v: &KrausFamily, tol: &Tolerances) -> Result<Self> {
        let rho = require_primitive(v, tol)?;
        Ok(Self::from_parts(v, rho, tol.domain))
    }

    pub(crate) fn from_parts(v: &KrausFamily, stationary: DensityMatrix, domain_tol: f64) -> Self {
        let d = v.dim_system();
        let dd = d * d;
        let t = v.transfer();
        let mut a = linalg::zeros(dd + 1, dd);
        a.view_mut((0, 0), (dd, dd))
            .copy_from(&(linalg::identity(dd) - t.matrix()));
        let row = linalg::vectorize(stationary.matrix()).adjoint();
        a.view_mut((dd, 0), (1, dd)).copy_from(&row);
        let svd = a.svd(true, true);
        let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
        let pinv = svd
            .pseudo_inverse(1e-14 * smax)
            .expect("SVD computed with both U and V");
        Resolvent { dim: d, stationary, pinv, domain_tol }
    }

    pub fn stationary(&self) -> &DensityMatrix {
        &self.stationary
    }

    /// `R(X)`; fails with `NotInDomain` when `|tr[rho_ss X]|` exceeds the
    /// domain tolerance.
    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        let d = self.dim;
        if x.shape() != (d, d) {
            return Err(Error::DimensionMismatch(format!("operator must be {d}x{d}")));
        }
        let mean = self.stationary.expectation(x);
        if mean.norm() > self.domain_tol * linalg::max_norm(x).max(1.0) {
            return Err(Error::NotInDomain(mean.norm()));
        }
        Ok(self.apply_unchecked(x))
    }

    pub(crate) fn apply_unchecked(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let d = self.dim;
        let mut b = ComplexVector::zeros(d * d + 1);
        b.rows_mut(0, d * d).copy_from(&linalg::vectorize(x));
        let y = &self.pinv * b;
        linalg::unvectorize(&y, d, d)
    }
}

/// One-shot resolvent application.
#[allow(non_snake_case)]
pub fn resolvent_R(v: &KrausFamily, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    Resolvent::new(v)?.apply(x)
}
