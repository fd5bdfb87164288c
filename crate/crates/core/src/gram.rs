//! Gram matrices of finite pure-state models.
//!
//! Two finite pure models with the same Gram matrix are related by a single
//! unitary. Embedding each model through the positive square root of its Gram
//! matrix aligns them in one space, which gives a computable upper bound on
//! their deficiency distance.

use crate::error::{Error, Result};
use crate::family::ParamFamily;
use crate::lan::{corrected_inner_products, gaussian_inner};
use crate::linalg::{self, c, ComplexMatrix};
use crate::output::PureStateVector;
use num_complex::Complex64;

const HERMITIAN_TOL: f64 = 1e-12;
const DIAGONAL_TOL: f64 = 1e-10;
const PSD_TOL: f64 = 1e-10;

/// Hermitian positive semidefinite matrix with unit diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    entries: ComplexMatrix,
}

impl GramMatrix {
    pub fn new(entries: ComplexMatrix) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::DimensionMismatch("Gram matrix must be square".into()));
        }
        let herm = linalg::hermiticity_defect(&entries);
        if herm > HERMITIAN_TOL {
            return Err(Error::NotHermitian(herm));
        }
        if let Some(z) = entries.diagonal().iter().find(|z| (*z - linalg::ONE).norm() > DIAGONAL_TOL) {
            return Err(Error::NotNormalized(z.norm()));
        }
        let (eigs, _) = linalg::eigh(&entries);
        if let Some(&lowest) = eigs.first() {
            if lowest < -PSD_TOL {
                return Err(Error::NotPSD(lowest));
            }
        }
        Ok(GramMatrix { entries: linalg::re_part(&entries) })
    }

    pub fn size(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &ComplexMatrix {
        &self.entries
    }
}

/// `G_ij = <psi_i|psi_j>`.
pub fn gram_of_model(states: &[PureStateVector]) -> Result<GramMatrix> {
    if let Some(first) = states.first() {
        if states.iter().any(|s| s.dim() != first.dim()) {
            return Err(Error::DimensionMismatch("states must share one dimension".into()));
        }
    }
    if let Some(s) = states.iter().find(|s| (s.norm() - 1.0).abs() > DIAGONAL_TOL) {
        return Err(Error::NotNormalized(s.norm()));
    }
    let m = states.len();
    GramMatrix::new(ComplexMatrix::from_fn(m, m, |i, j| states[i].inner(&states[j])))
}

/// Columns of `sqrt(G)`: vectors in `C^m` whose Gram matrix is `G`.
pub fn canonical_embedding(g: &GramMatrix) -> Vec<PureStateVector> {
    let root = linalg::sqrt_psd(g.entries());
    (0..g.size())
        .map(|i| PureStateVector::unnormalized(root.column(i).into_owned()))
        .collect()
}

/// `|| |psi><psi| - |phi><phi| ||_1 = 2 sqrt(1 - |<psi|phi>|^2)`.
pub fn pure_trace_distance(psi: &PureStateVector, phi: &PureStateVector) -> Result<f64> {
    if psi.dim() != phi.dim() {
        return Err(Error::DimensionMismatch("states must share one dimension".into()));
    }
    let a = psi.amplitudes();
    let b = phi.amplitudes();
    let residual = b - a * (a.dotc(b) / c(a.norm_squared(), 0.0));
    Ok((2.0 * residual.norm() / b.norm()).min(2.0))
}

/// `max_i` trace distance between the `i`-th canonically embedded states.
pub fn finite_model_distance(g1: &GramMatrix, g2: &GramMatrix) -> Result<f64> {
    if g1.size() != g2.size() {
        return Err(Error::SizeMismatch(g1.size(), g2.size()));
    }
    let e1 = canonical_embedding(g1);
    let e2 = canonical_embedding(g2);
    e1.iter()
        .zip(&e2)
        .map(|(a, b)| pure_trace_distance(a, b))
        .try_fold(0.0, |acc: f64, d| d.map(|d| acc.max(d)))
}

/// Gram matrix of the coherent limit model `|sqrt(F/2) u>` on the grid.
pub fn coherent_model_gram(f_val: f64, grid: &[f64]) -> Result<GramMatrix> {
    let m = grid.len();
    let mut g = linalg::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            g[(i, j)] = c(gaussian_inner(f_val, grid[i], grid[j])?, 0.0);
        }
    }
    GramMatrix::new(g)
}

/// Phase-corrected Gram matrix of the rescaled output model at `n`, with
/// entries renormalized by the diagonal (which differs from one only by
/// Taylor truncation for explicit families).
pub fn output_model_gram(family: &ParamFamily, phi: &PureStateVector, grid: &[f64], n: usize) -> Result<GramMatrix> {
    let (_, _, entries) = corrected_inner_products(family, phi, grid, n)?;
    let m = grid.len();
    let raw = ComplexMatrix::from_fn(m, m, |i, j| entries[i * m + j]);
    let g = ComplexMatrix::from_fn(m, m, |i, j| {
        let scale = (raw[(i, i)].re * raw[(j, j)].re).sqrt();
        raw[(i, j)] / c(scale, 0.0)
    });
    GramMatrix::new(linalg::re_part(&g) + linalg::im_part(&g) * linalg::I)
}

/// Per-`n` weak-convergence row.
#[derive(Debug, Clone)]
pub struct WeakConvergenceRow {
    pub n: usize,
    /// `max_{u,v} |<Psi_u(n)|Psi_v(n)> e^{i a (u^2-v^2)} - exp(-F (u-v)^2/8)|`.
    pub max_deviation: f64,
    /// [`finite_model_distance`] between output and coherent Gram matrices.
    pub model_distance: f64,
}

#[derive(Debug, Clone)]
pub struct WeakConvergence {
    pub f: f64,
    pub a: f64,
    pub rows: Vec<WeakConvergenceRow>,
}

/// Compares output-model inner products from `|phi> = |e_0>` against the
/// coherent limit along the ladder.
pub fn weak_convergence_diagnostic(family: &ParamFamily, grid: &[f64], n_ladder: &[usize]) -> Result<WeakConvergence> {
    let d = family.base().dim_system();
    weak_convergence_diagnostic_from(family, &PureStateVector::basis(d, 0), grid, n_ladder)
}

pub fn weak_convergence_diagnostic_from(
    family: &ParamFamily,
    phi: &PureStateVector,
    grid: &[f64],
    n_ladder: &[usize],
) -> Result<WeakConvergence> {
    if grid.is_empty() || n_ladder.contains(&0) {
        return Err(Error::InvalidInput("grid must be non-empty and n >= 1".into()));
    }
    let m = grid.len();
    let mut rows = Vec::with_capacity(n_ladder.len());
    let mut constants = (0.0, 0.0);
    for &n in n_ladder {
        let (f, a, entries) = corrected_inner_products(family, phi, grid, n)?;
        constants = (f, a);
        let f_clamped = f.max(0.0);
        let mut max_deviation: f64 = 0.0;
        for i in 0..m {
            for j in 0..m {
                let target = gaussian_inner(f_clamped, grid[i], grid[j])?;
                max_deviation = max_deviation.max((entries[i * m + j] - c(target, 0.0)).norm());
            }
        }
        let output = output_model_gram(family, phi, grid, n)?;
        let coherent = coherent_model_gram(f_clamped, grid)?;
        rows.push(WeakConvergenceRow { n, max_deviation, model_distance: finite_model_distance(&output, &coherent)? });
    }
    Ok(WeakConvergence { f: constants.0, a: constants.1, rows })
}

/// Inner product `<a|b>` of two embedded vectors, exposed for diagnostics.
pub fn embedded_overlap(a: &PureStateVector, b: &PureStateVector) -> Complex64 {
    a.inner(b)
}
