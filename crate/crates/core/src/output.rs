//! Output states of the chain after `n` steps.
//!
//! The joint space after `n` steps is `H (x) K_n (x) ... (x) K_1`: noise unit 1
//! interacts first and is the rightmost (fastest varying) tensor factor. The
//! amplitude of `|s> (x) |i_n ... i_1>` sits at index
//! `s k^n + i_n k^{n-1} + ... + i_1` and equals `<s|K_{i_n} ... K_{i_1}|phi>`.
//!
//! Overlaps and purities are evaluated through powers of the cross map on
//! `D_1 x D_2` operators and never materialize the `k^n`-dimensional space.

use crate::channel::{cross_map, DensityMatrix, KrausFamily};
use crate::error::{Error, Result};
use crate::linalg::{self, c, ComplexMatrix, ComplexVector};
use crate::spectral;
use crate::tolerance::Tolerances;
use num_complex::Complex64;

/// A pure state, possibly deliberately unnormalized.
#[derive(Debug, Clone, PartialEq)]
pub struct PureStateVector {
    amplitudes: ComplexVector,
    normalized: bool,
}

impl PureStateVector {
    /// A unit vector; fails with `NotNormalized` if the norm is off by more
    /// than 1e-10.
    pub fn new(amplitudes: ComplexVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized(norm));
        }
        Ok(PureStateVector { amplitudes, normalized: true })
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalize(amplitudes: ComplexVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized(norm));
        }
        Ok(PureStateVector { amplitudes: amplitudes / c(norm, 0.0), normalized: true })
    }

    pub fn unnormalized(amplitudes: ComplexVector) -> Self {
        PureStateVector { amplitudes, normalized: false }
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        PureStateVector { amplitudes: linalg::basis_vector(dim, i), normalized: true }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &ComplexVector {
        &self.amplitudes
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureStateVector) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }
}

pub(crate) fn check_guard(required: u128, limit: u128) -> Result<()> {
    if required > limit {
        return Err(Error::SizeGuardExceeded { required, limit });
    }
    Ok(())
}

/// `base^exp` as `u128`, saturating.
pub(crate) fn checked_pow(base: usize, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
    }
    acc
}

/// One interaction step: appends a new leftmost noise leg.
///
/// `psi` holds `D * tail` amplitudes ordered `(s, rest)`; the result holds
/// `D * k * tail` amplitudes ordered `(s', i, rest)` with
/// `out[s', i, rest] = sum_s K_i[s', s] psi[s, rest]`.
pub(crate) fn step(kraus: &[ComplexMatrix], psi: &ComplexVector, tail: usize) -> ComplexVector {
    let k = kraus.len();
    let d = kraus[0].nrows();
    let mut out = ComplexVector::zeros(d * k * tail);
    for (i, ki) in kraus.iter().enumerate() {
        for sp in 0..d {
            let base = (sp * k + i) * tail;
            for s in 0..d {
                let w = ki[(sp, s)];
                if w == linalg::ZERO {
                    continue;
                }
                let src = s * tail;
                for r in 0..tail {
                    out[base + r] += w * psi[src + r];
                }
            }
        }
    }
    out
}

/// `V(n)|phi>` on `H (x) K^{(x) n}`.
pub fn joint_state(v: &KrausFamily, phi: &PureStateVector, n: usize) -> Result<PureStateVector> {
    joint_state_with(v, phi, n, &Tolerances::default())
}

pub fn joint_state_with(v: &KrausFamily, phi: &PureStateVector, n: usize, tol: &Tolerances) -> Result<PureStateVector> {
    let d = v.dim_system();
    if phi.dim() != d {
        return Err(Error::DimensionMismatch(format!("initial state has dimension {}, expected {d}", phi.dim())));
    }
    check_guard((d as u128).saturating_mul(checked_pow(v.dim_noise(), n)), tol.amplitude_guard)?;
    let mut psi = phi.amplitudes.clone();
    let mut tail = 1;
    for _ in 0..n {
        psi = step(v.kraus(), &psi, tail);
        tail *= v.dim_noise();
    }
    Ok(PureStateVector { amplitudes: psi, normalized: phi.normalized })
}

/// Unnormalized output vector `sum_i <eta|K_{i_n} ... K_{i_1}|phi> |i>`.
pub fn conditional_state(
    v: &KrausFamily,
    eta: &PureStateVector,
    phi: &PureStateVector,
    n: usize,
) -> Result<PureStateVector> {
    conditional_state_with(v, eta, phi, n, &Tolerances::default())
}

pub fn conditional_state_with(
    v: &KrausFamily,
    eta: &PureStateVector,
    phi: &PureStateVector,
    n: usize,
    tol: &Tolerances,
) -> Result<PureStateVector> {
    let d = v.dim_system();
    if eta.dim() != d {
        return Err(Error::DimensionMismatch(format!("final state has dimension {}, expected {d}", eta.dim())));
    }
    let joint = joint_state_with(v, phi, n, tol)?;
    let tail = joint.dim() / d;
    let mut out = ComplexVector::zeros(tail);
    for s in 0..d {
        let w = eta.amplitudes[s].conj();
        for r in 0..tail {
            out[r] += w * joint.amplitudes[s * tail + r];
        }
    }
    Ok(PureStateVector::unnormalized(out))
}

/// Stationary output state `rho_V(n) = tr_H[V(n) rho_ss V(n)*]` as a dense
/// `k^n x k^n` matrix.
pub fn stationary_output(v: &KrausFamily, n: usize) -> Result<DensityMatrix> {
    stationary_output_with(v, n, &Tolerances::default())
}

pub fn stationary_output_with(v: &KrausFamily, n: usize, tol: &Tolerances) -> Result<DensityMatrix> {
    let rho = spectral::require_primitive(v, tol)?;
    let side = checked_pow(v.dim_noise(), n);
    check_guard(side, tol.matrix_guard)?;
    Ok(DensityMatrix::trusted(output_from_input(v, rho.matrix(), n)))
}

/// `tr_H[V(n) sigma V(n)*]` for an arbitrary input `sigma`, via the columns
/// of `sqrt(sigma)`.
pub(crate) fn output_from_input(v: &KrausFamily, sigma: &ComplexMatrix, n: usize) -> ComplexMatrix {
    let d = v.dim_system();
    let side = checked_pow(v.dim_noise(), n) as usize;
    let root = linalg::sqrt_psd(sigma);
    let mut out = linalg::zeros(side, side);
    for t in 0..d {
        let mut psi = root.column(t).into_owned();
        let mut tail = 1;
        for _ in 0..n {
            psi = step(v.kraus(), &psi, tail);
            tail *= v.dim_noise();
        }
        for s in 0..d {
            let block = psi.rows(s * side, side);
            out += block * block.adjoint();
        }
    }
    out
}

/// The stationary output rebuilt as the mixture
/// `sum_{i,j} Lambda_i |psi_{j,i}><psi_{j,i}|` over the eigenbasis of `rho_ss`.
pub fn stationary_output_mixture(v: &KrausFamily, n: usize) -> Result<DensityMatrix> {
    let tol = Tolerances::default();
    let rho = spectral::require_primitive(v, &tol)?;
    let side = checked_pow(v.dim_noise(), n);
    check_guard(side, tol.matrix_guard)?;
    let side = side as usize;
    let d = v.dim_system();
    let (lambda, basis) = rho.spectral_decomposition();
    let mut out = linalg::zeros(side, side);
    for (i, &li) in lambda.iter().enumerate() {
        let phi = PureStateVector::unnormalized(basis.column(i).into_owned());
        for j in 0..d {
            let eta = PureStateVector::basis(d, j);
            let psi = conditional_state_with(v, &eta, &phi, n, &tol)?;
            out += linalg::outer(psi.amplitudes(), psi.amplitudes()) * c(li, 0.0);
        }
    }
    Ok(DensityMatrix::trusted(out))
}

/// `<psi_{1,eta1,phi1}(n)|psi_{2,eta2,phi2}(n)> = <phi1| T_12^n(|eta1><eta2|) |phi2>`.
pub fn output_overlap_vectors(
    v1: &KrausFamily,
    v2: &KrausFamily,
    eta1: &ComplexVector,
    phi1: &ComplexVector,
    eta2: &ComplexVector,
    phi2: &ComplexVector,
    n: usize,
) -> Result<Complex64> {
    let t12 = cross_map(v1, v2)?;
    let y = t12.apply_power(&linalg::outer(eta1, eta2), n);
    Ok(phi1.dotc(&(y * phi2)))
}

/// Overlap of the conditional output vectors with computational basis
/// endpoints: `<psi_{1,j,i}(n)|psi_{2,j',i'}(n)>`.
pub fn output_overlap(
    v1: &KrausFamily,
    v2: &KrausFamily,
    j: usize,
    i: usize,
    jp: usize,
    ip: usize,
    n: usize,
) -> Result<Complex64> {
    let (d1, d2) = (v1.dim_system(), v2.dim_system());
    if j >= d1 || i >= d1 || jp >= d2 || ip >= d2 {
        return Err(Error::DimensionMismatch("basis index out of range".into()));
    }
    output_overlap_vectors(
        v1,
        v2,
        &linalg::basis_vector(d1, j),
        &linalg::basis_vector(d1, i),
        &linalg::basis_vector(d2, jp),
        &linalg::basis_vector(d2, ip),
        n,
    )
}

/// Gram data of the pure components `sqrt(Lambda_i) psi_{j,i}(n)` of two
/// stationary outputs: entry `((j,i), (j',i'))`.
fn weighted_component_gram(
    v1: &KrausFamily,
    rho1: &DensityMatrix,
    v2: &KrausFamily,
    rho2: &DensityMatrix,
    n: usize,
) -> Result<ComplexMatrix> {
    let t12 = cross_map(v1, v2)?;
    let (d1, d2) = (v1.dim_system(), v2.dim_system());
    let (l1, e1) = rho1.spectral_decomposition();
    let (l2, e2) = rho2.spectral_decomposition();
    let mut g = linalg::zeros(d1 * d1, d2 * d2);
    for j in 0..d1 {
        for jp in 0..d2 {
            let y = t12.apply_power(&linalg::outer(&e1.column(j).into_owned(), &e2.column(jp).into_owned()), n);
            let m = e1.adjoint() * y * &e2;
            for i in 0..d1 {
                for ip in 0..d2 {
                    let w = (l1[i].max(0.0) * l2[ip].max(0.0)).sqrt();
                    g[(j * d1 + i, jp * d2 + ip)] = m[(i, ip)] * w;
                }
            }
        }
    }
    Ok(g)
}

/// `tr[rho_V(n)^2]` through the overlap formula.
pub fn output_purity(v: &KrausFamily, n: usize) -> Result<f64> {
    let rho = spectral::require_primitive(v, &Tolerances::default())?;
    let g = weighted_component_gram(v, &rho, v, &rho, n)?;
    Ok(g.iter().map(|z| z.norm_sqr()).sum())
}

/// `tr[rho_1(n) rho_2(n)]` for two primitive families with equal noise.
pub fn output_cross_purity(v1: &KrausFamily, v2: &KrausFamily, n: usize) -> Result<f64> {
    let tol = Tolerances::default();
    let rho1 = spectral::require_primitive(v1, &tol)?;
    let rho2 = spectral::require_primitive(v2, &tol)?;
    let g = weighted_component_gram(v1, &rho1, v2, &rho2, n)?;
    Ok(g.iter().map(|z| z.norm_sqr()).sum())
}

/// Largest output side length for which trace distances are computed from
/// the dense output matrices.
pub const DENSE_TRACE_DISTANCE_SIDE: u128 = 512;

/// `||rho_1(n) - rho_2(n)||_1`.
///
/// Dense evaluation up to `k^n <= 512`; beyond that the pure-component Gram
/// route of [`output_trace_distance_gram`] is used, whose accuracy is limited
/// to roughly the square root of machine precision near coincident outputs.
pub fn output_trace_distance(v1: &KrausFamily, v2: &KrausFamily, n: usize) -> Result<f64> {
    if v1.dim_noise() != v2.dim_noise() {
        return Err(Error::NoiseDimMismatch(v1.dim_noise(), v2.dim_noise()));
    }
    if checked_pow(v1.dim_noise(), n) <= DENSE_TRACE_DISTANCE_SIDE {
        let tol = Tolerances::default();
        let rho1 = spectral::require_primitive(v1, &tol)?;
        let rho2 = spectral::require_primitive(v2, &tol)?;
        let diff = output_from_input(v1, rho1.matrix(), n) - output_from_input(v2, rho2.matrix(), n);
        return Ok(linalg::trace_norm_hermitian(&diff));
    }
    output_trace_distance_gram(v1, v2, n)
}

/// `||rho_1(n) - rho_2(n)||_1` on the span of the pure components.
///
/// With `Z` the matrix of weighted components and `W = diag(1, -1)`, the
/// nonzero spectrum of `Z W Z*` equals that of `G^{1/2} W G^{1/2}`, `G = Z* Z`.
pub fn output_trace_distance_gram(v1: &KrausFamily, v2: &KrausFamily, n: usize) -> Result<f64> {
    let tol = Tolerances::default();
    let rho1 = spectral::require_primitive(v1, &tol)?;
    let rho2 = spectral::require_primitive(v2, &tol)?;
    let g11 = weighted_component_gram(v1, &rho1, v1, &rho1, n)?;
    let g22 = weighted_component_gram(v2, &rho2, v2, &rho2, n)?;
    let g12 = weighted_component_gram(v1, &rho1, v2, &rho2, n)?;
    let (a, b) = (g11.nrows(), g22.nrows());
    let mut g = linalg::zeros(a + b, a + b);
    g.view_mut((0, 0), (a, a)).copy_from(&g11);
    g.view_mut((a, a), (b, b)).copy_from(&g22);
    g.view_mut((0, a), (a, b)).copy_from(&g12);
    g.view_mut((a, 0), (b, a)).copy_from(&g12.adjoint());
    let root = linalg::sqrt_psd(&g);
    let mut w = linalg::identity(a + b);
    for i in a..a + b {
        w[(i, i)] = -linalg::ONE;
    }
    Ok(linalg::trace_norm_hermitian(&(&root * w * &root)))
}

/// Limit of the output purity, `(sum Lambda_i^2)^2`.
pub fn purity_limit(rho: &DensityMatrix) -> f64 {
    let s: f64 = rho.spectral_decomposition().0.iter().map(|l| l * l).sum();
    s * s
}
