//! Markov covariance of one-step fluctuation observables.
//!
//! For `X, Y` on system (x) one noise unit with stationary mean zero,
//!
//! ```text
//! (X, Y)_V = tr rho_ss E[ X*Y + X*(R E(Y) (x) 1) + (R E(X*) (x) 1) Y ]
//! ```
//!
//! where `E(Z) = V* Z V` and `R` is the resolvent of `Id - T` on mean-zero
//! system operators. [`empirical_covariance`] evaluates the exact finite-`n`
//! second moment `<F_n(X)* F_n(Y)>` with `F_n(X) = n^{-1/2} sum_i X(i)`.

use crate::channel::KrausFamily;
use crate::error::{Error, Result};
use crate::linalg::{self, c, ComplexMatrix};
use crate::output::PureStateVector;
use crate::spectral::{self, Resolvent};
use crate::tolerance::Tolerances;
use num_complex::Complex64;

/// An observable on system (x) noise with zero stationary mean.
#[derive(Debug, Clone, PartialEq)]
pub struct FluctuationObservable {
    matrix: ComplexMatrix,
    mean_checked: bool,
}

impl FluctuationObservable {
    /// Wraps `x`, failing with `NotCentered` if `|tr[rho_ss E(x)]|` exceeds
    /// the domain tolerance.
    pub fn new(v: &KrausFamily, x: ComplexMatrix) -> Result<Self> {
        let rho = spectral::stationary_state(v)?;
        let m = stationary_mean(v, rho.matrix(), &x)?;
        if m.norm() > Tolerances::default().domain * linalg::max_norm(&x).max(1.0) {
            return Err(Error::NotCentered(m.norm()));
        }
        Ok(FluctuationObservable { matrix: x, mean_checked: true })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn mean_checked(&self) -> bool {
        self.mean_checked
    }
}

fn stationary_mean(v: &KrausFamily, rho: &ComplexMatrix, x: &ComplexMatrix) -> Result<Complex64> {
    Ok(linalg::trace(&(rho * v.conditional_expectation(x)?)))
}

/// `X - tr[rho_ss E(X)] 1`.
pub fn center(v: &KrausFamily, x: &ComplexMatrix) -> Result<FluctuationObservable> {
    let rho = spectral::stationary_state(v)?;
    let m = stationary_mean(v, rho.matrix(), x)?;
    let n = x.nrows();
    Ok(FluctuationObservable { matrix: x - linalg::identity(n) * m, mean_checked: true })
}

/// Lifts a system operator to system (x) noise.
fn lift(a: &ComplexMatrix, k: usize) -> ComplexMatrix {
    linalg::kron(a, &linalg::identity(k))
}

fn require_centered(v: &KrausFamily, rho: &ComplexMatrix, x: &FluctuationObservable) -> Result<()> {
    let m = stationary_mean(v, rho, &x.matrix)?;
    if m.norm() > Tolerances::default().domain * linalg::max_norm(&x.matrix).max(1.0) {
        return Err(Error::NotCentered(m.norm()));
    }
    Ok(())
}

/// The limiting covariance `(X, Y)_V`.
pub fn markov_covariance(v: &KrausFamily, x: &FluctuationObservable, y: &FluctuationObservable) -> Result<Complex64> {
    let resolvent = Resolvent::new(v)?;
    markov_covariance_with(v, &resolvent, x.matrix(), y.matrix(), true)
}

pub(crate) fn markov_covariance_with(
    v: &KrausFamily,
    resolvent: &Resolvent,
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    check: bool,
) -> Result<Complex64> {
    let rho = resolvent.stationary().matrix();
    if check {
        for obs in [x, y] {
            require_centered(v, rho, &FluctuationObservable { matrix: obs.clone(), mean_checked: false })?;
        }
    }
    let k = v.dim_noise();
    let xd = x.adjoint();
    let ry = resolvent.apply_unchecked(&v.conditional_expectation(y)?);
    let rxd = resolvent.apply_unchecked(&v.conditional_expectation(&xd)?);
    let inner = &xd * y + &xd * lift(&ry, k) + lift(&rxd, k) * y;
    Ok(linalg::trace(&(rho * v.conditional_expectation(&inner)?)))
}

/// Exact `<phi (x) chi^n| F_n(X)* F_n(Y) |phi (x) chi^n>`, i.e.
/// `(1/n) sum_{i,j} <X(i)* Y(j)>`, via
///
/// ```text
/// sum_i     <phi|T^{i-1} E(X*Y)|phi>
/// + sum_{i<j} <phi|T^{i-1} E[X* (T^{j-i-1} E(Y) (x) 1)]|phi>
/// + sum_{j<i} <phi|T^{j-1} E[(T^{i-j-1} E(X*) (x) 1) Y]|phi>
/// ```
///
/// evaluated with prefix sums of `T_*^m(|phi><phi|)`.
pub fn empirical_covariance(
    v: &KrausFamily,
    phi: &PureStateVector,
    x: &FluctuationObservable,
    y: &FluctuationObservable,
    n: usize,
) -> Result<Complex64> {
    spectral::require_primitive(v, &Tolerances::default())?;
    empirical_covariance_raw(v, phi, x.matrix(), y.matrix(), n)
}

pub(crate) fn empirical_covariance_raw(
    v: &KrausFamily,
    phi: &PureStateVector,
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    n: usize,
) -> Result<Complex64> {
    let d = v.dim_system();
    if phi.dim() != d {
        return Err(Error::DimensionMismatch(format!("initial state must have dimension {d}")));
    }
    if n == 0 {
        return Err(Error::InvalidInput("n must be positive".into()));
    }
    let k = v.dim_noise();
    let xd = x.adjoint();

    // prefix[m] = sum_{t < m} T_*^t(|phi><phi|)
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(linalg::zeros(d, d));
    let mut sigma = linalg::outer(phi.amplitudes(), phi.amplitudes());
    for m in 0..n {
        let next = &prefix[m] + &sigma;
        prefix.push(next);
        sigma = v.predual_unchecked(&sigma);
    }

    let mut total = linalg::trace(&(&prefix[n] * v.conditional_expectation(&(&xd * y))?));
    let mut ay = v.conditional_expectation(y)?;
    let mut axd = v.conditional_expectation(&xd)?;
    for gap in 0..n.saturating_sub(1) {
        let weight = &prefix[n - gap - 1];
        let left = v.conditional_expectation(&(&xd * lift(&ay, k)))?;
        let right = v.conditional_expectation(&(lift(&axd, k) * y))?;
        total += linalg::trace(&(weight * (left + right)));
        ay = v.heisenberg_unchecked(&ay);
        axd = v.heisenberg_unchecked(&axd);
    }
    Ok(total / c(n as f64, 0.0))
}

/// Least-squares fit of `log|delta_n|` against `log n`; returns
/// `(slope, intercept, r_squared)`.
pub fn loglog_fit(ns: &[usize], deltas: &[f64]) -> (f64, f64, f64) {
    let xs: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = deltas.iter().map(|d| d.abs().ln()).collect();
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    (slope, intercept, r2)
}
