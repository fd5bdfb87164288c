//! Seeded random instances for property tests and experiments.
//!
//! Nothing in the library draws randomness on its own; callers pass the
//! generator, so runs are reproducible from a recorded seed.

use crate::channel::KrausFamily;
use crate::linalg::{self, c, ComplexMatrix, ComplexVector};
use crate::spectral;
use rand::Rng;
use rand_distr::StandardNormal;

/// Matrix of i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        c(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    })
}

/// Haar-distributed unitary (QR of a Ginibre matrix with phase correction).
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    isometry(rng, n, n)
}

/// Haar-random isometry `rows x cols` with `rows >= cols`.
pub fn isometry<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    assert!(rows >= cols);
    let g = ginibre(rng, rows, cols);
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    let mut out = q.clone();
    for j in 0..cols {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { linalg::ONE };
        for i in 0..rows {
            out[(i, j)] = q[(i, j)] * phase;
        }
    }
    out
}

/// Random Hermitian matrix with Gaussian entries scaled by `scale`.
pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> ComplexMatrix {
    let g = ginibre(rng, n, n);
    linalg::re_part(&g) * c(scale, 0.0)
}

/// Random full-rank density matrix.
pub fn density_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = ginibre(rng, n, n);
    let rho = &g * g.adjoint();
    let tr = linalg::trace(&rho);
    rho / tr
}

/// Random unit vector.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexVector {
    let g = ginibre(rng, n, 1);
    let v = ComplexVector::from_iterator(n, g.iter().copied());
    let norm = v.norm();
    v / c(norm, 0.0)
}

/// Random phase `e^{i t}`.
pub fn phase<R: Rng + ?Sized>(rng: &mut R) -> num_complex::Complex64 {
    num_complex::Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))
}

/// Kraus family of a Haar-random isometry `C^D -> C^D (x) C^k`.
pub fn kraus_family<R: Rng + ?Sized>(rng: &mut R, dim_system: usize, dim_noise: usize) -> KrausFamily {
    let v = isometry(rng, dim_system * dim_noise, dim_system);
    KrausFamily::from_isometry(&v, dim_noise).expect("random isometry is valid")
}

/// Draws random families until one is primitive with spectral gap at least
/// `min_gap`.
pub fn primitive_family<R: Rng + ?Sized>(
    rng: &mut R,
    dim_system: usize,
    dim_noise: usize,
    min_gap: f64,
) -> KrausFamily {
    loop {
        let v = kraus_family(rng, dim_system, dim_noise);
        let report = spectral::primitivity_check(&v);
        if report.is_primitive && report.spectral_gap >= min_gap {
            return v;
        }
    }
}

/// Random row-stochastic matrix with strictly positive entries.
pub fn stochastic_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| {
            let row: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
            let s: f64 = row.iter().sum();
            row.into_iter().map(|x| x / s).collect()
        })
        .collect()
}
