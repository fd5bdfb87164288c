//! Named Kraus families used in examples and tests.

use crate::channel::KrausFamily;
use crate::error::{Error, Result};
use crate::linalg::{self, c, ComplexMatrix};

/// Qubit depolarizing family `{sqrt(1-3p/4) 1, sqrt(p/4) X, sqrt(p/4) Y, sqrt(p/4) Z}`.
pub fn depolarizing(p: f64) -> KrausFamily {
    let a = c((1.0 - 0.75 * p).sqrt(), 0.0);
    let b = c((p / 4.0).sqrt(), 0.0);
    KrausFamily::new(vec![
        linalg::identity(2) * a,
        linalg::pauli_x() * b,
        linalg::pauli_y() * b,
        linalg::pauli_z() * b,
    ])
    .expect("depolarizing family is an isometry")
}

/// Amplitude damping `{[[1,0],[0,sqrt(1-p)]], [[0,sqrt p],[0,0]]}`.
pub fn amplitude_damping(p: f64) -> KrausFamily {
    let k1 = ComplexMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c((1.0 - p).sqrt(), 0.0)]);
    let k2 = ComplexMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(p.sqrt(), 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    KrausFamily::new(vec![k1, k2]).expect("amplitude damping is an isometry")
}

/// Embeds a row-stochastic matrix as `K_(i,j) = sqrt(P_ij) |j><i|`; the
/// noise index of `(i, j)` is `i * D + j`.
pub fn classical_embedding(p: &[Vec<f64>]) -> Result<KrausFamily> {
    let d = p.len();
    let mut kraus = Vec::with_capacity(d * d);
    for (i, row) in p.iter().enumerate() {
        if row.len() != d {
            return Err(Error::DimensionMismatch(format!("row {i} of the stochastic matrix has length {}", row.len())));
        }
        for (j, &pij) in row.iter().enumerate() {
            if !(pij >= 0.0) {
                return Err(Error::InvalidInput(format!("negative transition probability at ({i}, {j})")));
            }
            let mut k = linalg::zeros(d, d);
            k[(j, i)] = c(pij.sqrt(), 0.0);
            kraus.push(k);
        }
    }
    KrausFamily::new(kraus)
}

/// The single-operator family `{U}`.
pub fn unitary(u: ComplexMatrix) -> Result<KrausFamily> {
    KrausFamily::new(vec![u])
}
