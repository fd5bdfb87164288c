//! Deciding whether two primitive families produce the same stationary
//! output, and recovering the connecting phase and unitary.
//!
//! `V_2 = c (U* (x) 1) V_1 U` holds exactly when the cross map
//! `T_12(X) = sum K_{1,i}* X K_{2,i}` has an eigenvalue `c` of modulus one; its
//! eigenvector is then proportional to `U`.

use crate::channel::{cross_map, KrausFamily};
use crate::error::{Error, Result};
use crate::linalg::{self, c, ComplexMatrix};
use crate::output::{self, check_guard, checked_pow};
use crate::spectral;
use crate::tolerance::Tolerances;
use num_complex::Complex64;

/// Outcome of [`decide_equivalence`].
#[derive(Debug, Clone)]
pub struct EquivalenceReport {
    pub equivalent: bool,
    /// Phase `c`, `|c| = 1`; present iff equivalent.
    pub c: Option<Complex64>,
    /// Unitary `U: H_2 -> H_1`; present iff equivalent.
    pub u: Option<ComplexMatrix>,
    /// Largest eigenvalue modulus of the cross map.
    pub peripheral_modulus: f64,
    /// Cross-map eigenvalues with modulus within `1e-2` of the leading one.
    pub leading_spectrum: Vec<Complex64>,
    /// `max_i |K_{2,i} - c U* K_{1,i} U|`; present iff equivalent.
    pub reconstruction_residual: Option<f64>,
    /// Relative deviation of `F*F` and `F F*` from multiples of the identity.
    pub proportionality_defect: Option<f64>,
}

/// `false` when the system dimensions differ (certainly inequivalent);
/// `true` means undetermined.
pub fn dimension_witness(v1: &KrausFamily, v2: &KrausFamily) -> bool {
    v1.dim_system() == v2.dim_system()
}

pub fn decide_equivalence(v1: &KrausFamily, v2: &KrausFamily) -> Result<EquivalenceReport> {
    decide_equivalence_with(v1, v2, &Tolerances::default())
}

pub fn decide_equivalence_with(v1: &KrausFamily, v2: &KrausFamily, tol: &Tolerances) -> Result<EquivalenceReport> {
    if v1.dim_noise() != v2.dim_noise() {
        return Err(Error::NoiseDimMismatch(v1.dim_noise(), v2.dim_noise()));
    }
    spectral::require_primitive(v1, tol)?;
    spectral::require_primitive(v2, tol)?;

    let t12 = cross_map(v1, v2)?;
    let spectrum = t12.eigenvalues();
    let top = spectrum[0];
    let peripheral_modulus = top.norm();
    let leading_spectrum: Vec<Complex64> = spectrum
        .iter()
        .copied()
        .filter(|z| z.norm() >= peripheral_modulus - 1e-2)
        .collect();
    let mut report = EquivalenceReport {
        equivalent: false,
        c: None,
        u: None,
        peripheral_modulus,
        leading_spectrum,
        reconstruction_residual: None,
        proportionality_defect: None,
    };
    if !dimension_witness(v1, v2) || peripheral_modulus < 1.0 - tol.eig {
        return Ok(report);
    }

    let (d1, d2) = (v1.dim_system(), v2.dim_system());
    let shifted = t12.matrix() - linalg::identity(d1 * d2) * top;
    let kernel = linalg::smallest_right_singular(&shifted);
    let f = linalg::unvectorize(&kernel[0].1, d1, d2);
    let ff = f.adjoint() * &f;
    let scale = linalg::trace(&ff).re / d2 as f64;
    let defect = linalg::max_norm(&(&ff - linalg::identity(d2) * c(scale, 0.0)))
        .max(linalg::max_norm(&(&f * f.adjoint() - linalg::identity(d1) * c(scale, 0.0))))
        / scale;
    report.proportionality_defect = Some(defect);
    if defect > tol.eig {
        return Err(Error::AmbiguousPeripheral { modulus: peripheral_modulus, deviation: defect });
    }

    let u = fix_global_phase(f / Complex64::new(scale.sqrt(), 0.0));
    // Rayleigh quotient on the recovered eigenvector refines the phase.
    let image = t12.apply(&u);
    let raw_c = linalg::trace(&(u.adjoint() * image)) / Complex64::new(d2 as f64, 0.0);
    let c = raw_c / raw_c.norm();
    let residual = v1
        .kraus()
        .iter()
        .zip(v2.kraus())
        .map(|(k1, k2)| linalg::max_norm(&(k2 - u.adjoint() * k1 * &u * c)))
        .fold(0.0, f64::max);
    report.reconstruction_residual = Some(residual);
    if residual > 1e-8 {
        return Err(Error::AmbiguousPeripheral { modulus: peripheral_modulus, deviation: residual });
    }
    report.equivalent = true;
    report.c = Some(c);
    report.u = Some(u);
    Ok(report)
}

/// Makes the first entry of the first column with modulus above `1e-8`
/// real and positive.
fn fix_global_phase(u: ComplexMatrix) -> ComplexMatrix {
    let pivot = (0..u.ncols())
        .flat_map(|j| (0..u.nrows()).map(move |i| (i, j)))
        .map(|idx| u[idx])
        .find(|z| z.norm() > 1e-8);
    match pivot {
        Some(z) => {
            let phase = z.conj() / z.norm();
            u * phase
        }
        None => u,
    }
}

/// `min_alpha max |A - e^{i alpha} B|`, attained at `alpha = arg tr(B* A)`
/// up to the max-norm versus Frobenius difference.
pub fn distance_up_to_phase(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let overlap = linalg::trace(&(b.adjoint() * a));
    let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { linalg::ONE };
    linalg::max_norm(&(a - b * phase))
}

/// Number of linearly independent Kraus operators.
pub fn independent_kraus_count(v: &KrausFamily) -> usize {
    let d = v.dim_system();
    let m = ComplexMatrix::from_fn(v.dim_noise(), d * d, |i, idx| v.kraus()[i][(idx / d, idx % d)]);
    linalg::rank(&m, 1e-10)
}

/// Sufficient window length `2 (D^2 - d + 1) D^2` after which equal outputs
/// imply equivalence.
pub fn theoretical_window(dim_system: usize, independent_kraus: usize) -> usize {
    let d2 = dim_system * dim_system;
    2 * (d2 + 1).saturating_sub(independent_kraus) * d2
}

/// Result of [`finite_window_check`].
#[derive(Debug, Clone)]
pub struct WindowReport {
    pub n: usize,
    /// `||rho_1(n) - rho_2(n)||_1`.
    pub trace_distance: f64,
    pub independent_kraus: usize,
    pub theoretical_n0: usize,
}

pub fn finite_window_check(v1: &KrausFamily, v2: &KrausFamily, n: usize) -> Result<WindowReport> {
    let tol = Tolerances::default();
    check_guard(checked_pow(v1.dim_noise(), n), tol.amplitude_guard)?;
    let trace_distance = output::output_trace_distance(v1, v2, n)?;
    let independent_kraus = independent_kraus_count(v1);
    Ok(WindowReport {
        n,
        trace_distance,
        independent_kraus,
        theoretical_n0: theoretical_window(v1.dim_system(), independent_kraus),
    })
}
