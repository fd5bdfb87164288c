//! Quantum Fisher information of a parametrized chain and local asymptotic
//! normality diagnostics.
//!
//! With the rescaled parameter `theta_0 + u / sqrt(n)`, the deformed maps
//! `T_{u,v;n}` satisfy `T^n_{u,v;n}(X) -> tr[rho_ss X] e^{lambda(u,v)} 1` where
//! `lambda(u,v) = -F (u-v)^2 / 8 - i a (u^2 - v^2)`.

use crate::channel::{deformed_map, KrausFamily, SuperOperator};
use crate::covariance::markov_covariance_with;
use crate::error::{Error, Result};
use crate::family::{gauge_fix, ParamFamily};
use crate::linalg::{self, c, ComplexMatrix, ComplexVector};
use crate::output::{check_guard, checked_pow, step, PureStateVector};
use crate::spectral::Resolvent;
use crate::tolerance::Tolerances;
use num_complex::Complex64;
use rayon::prelude::*;

/// Which route produced a [`QfiReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QfiMethod {
    Formula,
    Covariance,
    Both,
}

impl QfiMethod {
    pub fn name(&self) -> &'static str {
        match self {
            QfiMethod::Formula => "formula",
            QfiMethod::Covariance => "covariance",
            QfiMethod::Both => "both",
        }
    }
}

#[derive(Debug, Clone)]
pub struct QfiReport {
    /// Asymptotic Fisher information per step.
    pub f: f64,
    /// Quadratic phase constant.
    pub a: f64,
    pub method: QfiMethod,
    /// Value of `4 (G*, G*)_V` when that route was run.
    pub f_covariance: Option<f64>,
    /// `|F_formula - F_covariance|` when both were computed.
    pub agreement: Option<f64>,
    /// Gauge constant applied before evaluation.
    pub gauge_b: f64,
}

/// Gauge-fixed family together with its resolvent.
struct Prepared {
    family: ParamFamily,
    resolvent: Resolvent,
}

fn prepare(family: &ParamFamily) -> Result<Prepared> {
    let resolvent = Resolvent::new(family.base())?;
    let family = gauge_fix(family)?;
    Ok(Prepared { family, resolvent })
}

fn sum_over<F>(family: &ParamFamily, f: F) -> ComplexMatrix
where
    F: Fn(&ComplexMatrix, &ComplexMatrix, &ComplexMatrix) -> ComplexMatrix,
{
    let d = family.base().dim_system();
    family
        .base()
        .kraus()
        .iter()
        .zip(family.dk())
        .zip(family.ddk())
        .fold(linalg::zeros(d, d), |acc, ((k, dk), ddk)| acc + f(k, dk, ddk))
}

fn formula_terms(p: &Prepared) -> (f64, f64) {
    let fam = &p.family;
    let rho = p.resolvent.stationary().matrix();
    let beta = linalg::trace(&(rho * sum_over(fam, |_, dk, _| dk.adjoint() * dk))).re;
    let alpha = linalg::trace(&(rho * sum_over(fam, |k, _, ddk| ddk.adjoint() * k)));
    let m = sum_over(fam, |k, dk, _| k * rho * dk.adjoint());
    let w = sum_over(fam, |k, dk, _| dk.adjoint() * k);
    let s = p.resolvent.apply_unchecked(&linalg::im_part(&w));
    let f = 4.0 * (beta + 2.0 * linalg::trace(&(linalg::im_part(&m) * &s)).re);
    let a = -(alpha.im / 2.0 + linalg::trace(&(linalg::re_part(&m) * &s)).re);
    (f, a)
}

fn covariance_value(p: &Prepared) -> Result<f64> {
    let base = p.family.base();
    let g = p.family.generator_star();
    let rho = p.resolvent.stationary().matrix();
    let mean = linalg::trace(&(rho * base.conditional_expectation(&g)?));
    let g = g - linalg::identity(base.dim_system() * base.dim_noise()) * mean;
    Ok(4.0 * markov_covariance_with(base, &p.resolvent, &g, &g, false)?.re)
}

/// `F = 4 sum_i [tr(rho K_i'* K_i') + 2 tr(Im(K_i rho K_i'*) S)]`, `S = R(Im sum_j K_j'* K_j)`,
/// together with the phase constant `a`. Gauge-fixes first.
pub fn qfi_formula(family: &ParamFamily) -> Result<QfiReport> {
    let p = prepare(family)?;
    let (f, a) = formula_terms(&p);
    Ok(QfiReport { f, a, method: QfiMethod::Formula, f_covariance: None, agreement: None, gauge_b: p.family.gauge_b() })
}

/// `F = 4 (G*, G*)_V` with `G* = i V' V*` centered.
pub fn qfi_covariance(family: &ParamFamily) -> Result<QfiReport> {
    let p = prepare(family)?;
    let (_, a) = formula_terms(&p);
    let f = covariance_value(&p)?;
    Ok(QfiReport { f, a, method: QfiMethod::Covariance, f_covariance: Some(f), agreement: None, gauge_b: p.family.gauge_b() })
}

/// Both routes; `f` is the formula value.
pub fn qfi_both(family: &ParamFamily) -> Result<QfiReport> {
    let p = prepare(family)?;
    let (f, a) = formula_terms(&p);
    let fc = covariance_value(&p)?;
    Ok(QfiReport {
        f,
        a,
        method: QfiMethod::Both,
        f_covariance: Some(fc),
        agreement: Some((f - fc).abs()),
        gauge_b: p.family.gauge_b(),
    })
}

/// `tr[rho_ss T_{1,u,v}(1)]`, zero once the gauge condition holds.
pub fn first_order_mean(family: &ParamFamily, u: f64, v: f64) -> Result<Complex64> {
    let p = prepare(family)?;
    let t1 = t1_identity(&p.family, u, v);
    Ok(p.resolvent.stationary().expectation(&t1))
}

/// `max |V* G V - (V* G V)*|` with `G = (G*)*`.
pub fn hermitian_certificate(family: &ParamFamily) -> f64 {
    let v = family.base().isometry();
    let g = family.generator_star().adjoint();
    linalg::hermiticity_defect(&(v.adjoint() * g * v))
}

fn t1_apply(family: &ParamFamily, u: f64, v: f64, x: &ComplexMatrix) -> ComplexMatrix {
    let (cu, cv) = (c(u, 0.0), c(v, 0.0));
    sum_over(family, |k, dk, _| dk.adjoint() * x * k * cu + k.adjoint() * x * dk * cv)
}

fn t1_identity(family: &ParamFamily, u: f64, v: f64) -> ComplexMatrix {
    let d = family.base().dim_system();
    t1_apply(family, u, v, &linalg::identity(d))
}

fn t2_identity(family: &ParamFamily, u: f64, v: f64) -> ComplexMatrix {
    let (uu, vv, uv) = (c(u * u / 2.0, 0.0), c(v * v / 2.0, 0.0), c(u * v, 0.0));
    sum_over(family, |k, dk, ddk| {
        ddk.adjoint() * k * uu + k.adjoint() * ddk * vv + dk.adjoint() * dk * uv
    })
}

fn lambda_prepared(p: &Prepared, u: f64, v: f64) -> Complex64 {
    let rho = p.resolvent.stationary();
    let t1 = t1_identity(&p.family, u, v);
    let r = p.resolvent.apply_unchecked(&t1);
    rho.expectation(&t2_identity(&p.family, u, v)) + rho.expectation(&t1_apply(&p.family, u, v, &r))
}

/// `lambda(u,v) = (1, T_2(1)) + (1, T_1 R T_1(1))` on the gauge-fixed family.
pub fn lambda_uv(family: &ParamFamily, u: f64, v: f64) -> Result<Complex64> {
    let p = prepare(family)?;
    Ok(lambda_prepared(&p, u, v))
}

/// Least-squares fit of `lambda` to `-F (u-v)^2/8 - i a (u^2-v^2)`.
#[derive(Debug, Clone)]
pub struct LambdaFit {
    pub f: f64,
    pub a: f64,
    /// Largest deviation between sampled `lambda` and the fitted form.
    pub residual: f64,
}

pub fn fit_lambda(family: &ParamFamily, points: &[f64]) -> Result<LambdaFit> {
    let p = prepare(family)?;
    let samples: Vec<(f64, f64, Complex64)> = points
        .iter()
        .flat_map(|&u| points.iter().map(move |&v| (u, v)))
        .map(|(u, v)| (u, v, lambda_prepared(&p, u, v)))
        .collect();
    let (mut sxx, mut sxl, mut syy, mut syl) = (0.0, 0.0, 0.0, 0.0);
    for &(u, v, l) in &samples {
        let x = (u - v).powi(2);
        let y = u * u - v * v;
        sxx += x * x;
        sxl += x * l.re;
        syy += y * y;
        syl += y * l.im;
    }
    let f = if sxx > 0.0 { -8.0 * sxl / sxx } else { 0.0 };
    let a = if syy > 0.0 { -syl / syy } else { 0.0 };
    let residual = samples
        .iter()
        .map(|&(u, v, l)| (l - c(-f * (u - v).powi(2) / 8.0, -a * (u * u - v * v))).norm())
        .fold(0.0, f64::max);
    Ok(LambdaFit { f, a, residual })
}

/// `exp(-F (u-v)^2 / 8)`, the coherent-state overlap of the limit model.
pub fn gaussian_inner(f_val: f64, u: f64, v: f64) -> Result<f64> {
    if f_val < 0.0 || f_val.is_nan() {
        return Err(Error::NegativeFisher(f_val));
    }
    Ok((-f_val * (u - v).powi(2) / 8.0).exp())
}

/// `n` equally spaced points on `[-c, c]`.
pub fn symmetric_grid(c: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![0.0];
    }
    (0..points)
        .map(|i| -c + 2.0 * c * i as f64 / (points - 1) as f64)
        .collect()
}

fn matrix_power(m: &ComplexMatrix, mut n: usize) -> ComplexMatrix {
    let mut result = linalg::identity(m.nrows());
    let mut base = m.clone();
    while n > 0 {
        if n & 1 == 1 {
            result = &result * &base;
        }
        n >>= 1;
        if n > 0 {
            base = &base * &base;
        }
    }
    result
}

/// `T^n_{u,v;n}` as a transfer matrix.
pub(crate) fn deformed_power(family: &ParamFamily, u: f64, v: f64, n: usize) -> ComplexMatrix {
    let t: SuperOperator = deformed_map(family, u, v, n);
    matrix_power(t.matrix(), n)
}

/// Per-`n` row of a LAN scan.
#[derive(Debug, Clone)]
pub struct LanScanRow {
    pub n: usize,
    /// `sup_{u,v} |T^n_{u,v;n}(1) - e^{lambda} 1|_max`.
    pub sup_error: f64,
    /// `sup_{u,v,i,j} |T^n(|e_j><e_i|) - e^{lambda} Lambda_i delta_ij 1|_max`.
    pub sup_matrix_error: f64,
    /// Grid point attaining `sup_error`.
    pub argmax: (f64, f64),
}

#[derive(Debug, Clone)]
pub struct LanScan {
    pub f: f64,
    pub a: f64,
    pub grid: Vec<f64>,
    pub rows: Vec<LanScanRow>,
}

struct Cell {
    identity_error: f64,
    matrix_error: f64,
}

fn scan_cell(p: &Prepared, basis: &(Vec<f64>, ComplexMatrix), u: f64, v: f64, n: usize) -> Cell {
    let d = p.family.base().dim_system();
    let lambda = lambda_prepared(p, u, v).exp();
    let power = deformed_power(&p.family, u, v, n);
    let apply = |x: &ComplexMatrix| linalg::unvectorize(&(&power * linalg::vectorize(x)), d, d);
    let one = linalg::identity(d);
    let identity_error = linalg::max_norm(&(apply(&one) - &one * lambda));
    let (weights, vecs) = basis;
    let mut matrix_error: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let x = linalg::outer(&vecs.column(j).into_owned(), &vecs.column(i).into_owned());
            let target = if i == j { lambda * weights[i] } else { linalg::ZERO };
            matrix_error = matrix_error.max(linalg::max_norm(&(apply(&x) - &one * target)));
        }
    }
    Cell { identity_error, matrix_error }
}

/// Sup-norm convergence errors of `T^n_{u,v;n}` over the grid of `[-C, C]^2`.
pub fn lan_scan(family: &ParamFamily, c_bound: f64, grid: usize, n_ladder: &[usize]) -> Result<LanScan> {
    if !(c_bound > 0.0) || grid < 1 || n_ladder.contains(&0) {
        return Err(Error::InvalidInput("lan_scan needs C > 0, grid >= 1 and n >= 1".into()));
    }
    let p = prepare(family)?;
    let (f, a) = formula_terms(&p);
    let points = symmetric_grid(c_bound, grid);
    let basis = p.resolvent.stationary().spectral_decomposition();
    let mut cells = Vec::with_capacity(n_ladder.len() * points.len() * points.len());
    for &n in n_ladder {
        for &u in &points {
            for &v in &points {
                cells.push((n, u, v));
            }
        }
    }
    let results: Vec<Cell> = cells
        .par_iter()
        .map(|&(n, u, v)| scan_cell(&p, &basis, u, v, n))
        .collect();
    let per_n = points.len() * points.len();
    let rows = n_ladder
        .iter()
        .enumerate()
        .map(|(idx, &n)| {
            let chunk = &results[idx * per_n..(idx + 1) * per_n];
            let coords = &cells[idx * per_n..(idx + 1) * per_n];
            let mut row = LanScanRow { n, sup_error: 0.0, sup_matrix_error: 0.0, argmax: (coords[0].1, coords[0].2) };
            for (cell, &(_, u, v)) in chunk.iter().zip(coords) {
                if cell.identity_error > row.sup_error {
                    row.sup_error = cell.identity_error;
                    row.argmax = (u, v);
                }
                row.sup_matrix_error = row.sup_matrix_error.max(cell.matrix_error);
            }
            row
        })
        .collect();
    Ok(LanScan { f, a, grid: points, rows })
}

/// `<Psi_u(n)|Psi_v(n)> = <phi|T^n_{u,v;n}(1)|phi>` for the gauge-fixed family.
pub fn output_inner(family: &ParamFamily, phi: &PureStateVector, u: f64, v: f64, n: usize) -> Result<Complex64> {
    let p = prepare(family)?;
    Ok(output_inner_prepared(&p, phi, u, v, n))
}

fn output_inner_prepared(p: &Prepared, phi: &PureStateVector, u: f64, v: f64, n: usize) -> Complex64 {
    let d = p.family.base().dim_system();
    let power = deformed_power(&p.family, u, v, n);
    let t = linalg::unvectorize(&(&power * linalg::vectorize(&linalg::identity(d))), d, d);
    phi.amplitudes().dotc(&(t * phi.amplitudes()))
}

/// Phase-corrected output Gram entries `<Psi_u(n)|Psi_v(n)> e^{i a (u^2 - v^2)}`
/// for all grid pairs, row-major over `(u, v)`, alongside `a` and `F`.
pub(crate) fn corrected_inner_products(
    family: &ParamFamily,
    phi: &PureStateVector,
    grid: &[f64],
    n: usize,
) -> Result<(f64, f64, Vec<Complex64>)> {
    let p = prepare(family)?;
    if phi.dim() != p.family.base().dim_system() {
        return Err(Error::DimensionMismatch("initial state dimension differs from system".into()));
    }
    let (f, a) = formula_terms(&p);
    let pairs: Vec<(f64, f64)> = grid.iter().flat_map(|&u| grid.iter().map(move |&v| (u, v))).collect();
    let entries = pairs
        .par_iter()
        .map(|&(u, v)| output_inner_prepared(&p, phi, u, v, n) * Complex64::from_polar(1.0, a * (u * u - v * v)))
        .collect();
    Ok((f, a, entries))
}

/// Exact `F_n = 4 (<Psi'|Psi'> - |<Psi|Psi'>|^2)` for `|Psi_theta(n)> = V_theta(n)|phi>`,
/// with the derivative propagated slot by slot.
pub fn finite_n_qfi(family: &ParamFamily, phi: &PureStateVector, n: usize) -> Result<f64> {
    finite_n_qfi_with(family, phi, n, &Tolerances::default())
}

pub fn finite_n_qfi_with(family: &ParamFamily, phi: &PureStateVector, n: usize, tol: &Tolerances) -> Result<f64> {
    let base: &KrausFamily = family.base();
    let d = base.dim_system();
    let k = base.dim_noise();
    if phi.dim() != d {
        return Err(Error::DimensionMismatch(format!("initial state must have dimension {d}")));
    }
    check_guard(checked_pow(k, n).saturating_mul(d as u128), tol.amplitude_guard)?;
    let mut psi: ComplexVector = phi.amplitudes().clone();
    let mut dpsi = ComplexVector::zeros(d);
    let mut tail = 1;
    for _ in 0..n {
        let next_d = step(family.dk(), &psi, tail) + step(base.kraus(), &dpsi, tail);
        psi = step(base.kraus(), &psi, tail);
        dpsi = next_d;
        tail *= k;
    }
    let overlap = psi.dotc(&dpsi);
    Ok(4.0 * (dpsi.norm_squared() - overlap.norm_sqr()))
}
