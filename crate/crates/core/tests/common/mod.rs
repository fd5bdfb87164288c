#![allow(dead_code)]

use num_complex::Complex64;
use qmarkov::family::make_family_hamiltonian;
use qmarkov::linalg::{self, c, ComplexMatrix, ComplexVector};
use qmarkov::{KrausFamily, ParamFamily};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Qubit exchanging excitations with qubit noise units prepared in `|0>`.
pub fn reference_base() -> KrausFamily {
    let (x, y, z) = (linalg::pauli_x(), linalg::pauli_y(), linalg::pauli_z());
    let i2 = linalg::identity(2);
    let h = linalg::kron(&x, &x) * c(0.9, 0.0) + linalg::kron(&y, &y) * c(0.6, 0.0) + linalg::kron(&z, &i2) * c(0.4, 0.0);
    let u = linalg::expi_hermitian(&h, -1.0);
    let v = ComplexMatrix::from_fn(4, 2, |r, t| u[(r, t * 2)]);
    KrausFamily::from_isometry(&v, 2).unwrap()
}

pub fn reference_generator() -> ComplexMatrix {
    let (x, y, z) = (linalg::pauli_x(), linalg::pauli_y(), linalg::pauli_z());
    linalg::kron(&z, &x) + linalg::kron(&x, &linalg::identity(2)) * c(0.5, 0.0) + linalg::kron(&y, &z) * c(0.3, 0.0)
}

pub fn reference_family() -> ParamFamily {
    make_family_hamiltonian(&reference_base(), &reference_generator()).unwrap()
}

/// All words `(i_1, ..., i_n)` in `{0..k}^n`, `i_1` first.
pub fn words(k: usize, n: usize) -> Vec<Vec<usize>> {
    let total = k.pow(n as u32);
    (0..total)
        .map(|mut idx| {
            let mut w = vec![0; n];
            for slot in w.iter_mut() {
                *slot = idx % k;
                idx /= k;
            }
            w
        })
        .collect()
}

/// `K_{i_n} ... K_{i_1}`.
pub fn word_product(v: &KrausFamily, word: &[usize]) -> ComplexMatrix {
    let d = v.dim_system();
    word.iter().fold(linalg::identity(d), |acc, &i| &v.kraus()[i] * acc)
}

/// `sum_words conj(<j|K1_w|i>) <j'|K2_w|i'>` by exhaustive enumeration.
pub fn exhaustive_overlap(v1: &KrausFamily, v2: &KrausFamily, j: usize, i: usize, jp: usize, ip: usize, n: usize) -> Complex64 {
    words(v1.dim_noise(), n)
        .iter()
        .map(|w| word_product(v1, w)[(j, i)].conj() * word_product(v2, w)[(jp, ip)])
        .sum()
}

/// Output index of a word in the `H (x) K_n (x) ... (x) K_1` layout.
pub fn output_index(word: &[usize], k: usize) -> usize {
    word.iter().enumerate().map(|(m, &i)| i * k.pow(m as u32)).sum()
}

/// Completes the isometry `V` to a unitary `W` on `H (x) K` with
/// `W (e_t (x) e_0) = V e_t`.
pub fn complete_to_unitary(v: &KrausFamily) -> ComplexMatrix {
    let d = v.dim_system();
    let k = v.dim_noise();
    let iso = v.isometry();
    let n = d * k;
    let mut cols: Vec<ComplexVector> = (0..d).map(|t| iso.column(t).into_owned()).collect();
    for e in 0..n {
        let mut w = linalg::basis_vector(n, e);
        for _ in 0..2 {
            for b in &cols {
                let p = b.dotc(&w);
                w -= b * p;
            }
        }
        let norm = w.norm();
        if norm > 1e-8 && cols.len() < n {
            cols.push(w / c(norm, 0.0));
        }
    }
    let mut u = linalg::zeros(n, n);
    let mut extra = cols[d..].iter();
    for t in 0..d {
        for i in 0..k {
            let col = if i == 0 { cols[t].clone() } else { extra.next().unwrap().clone() };
            u.set_column(t * k + i, &col);
        }
    }
    u
}

/// Embeds an operator on `system (x) unit m` (index `s k + i`) into the full
/// space `H (x) K_n (x) ... (x) K_1`, unit `m` counted from 1.
pub fn embed(op: &ComplexMatrix, d: usize, k: usize, n: usize, m: usize) -> ComplexMatrix {
    let tail = k.pow(n as u32);
    let stride = k.pow((m - 1) as u32);
    let full = d * tail;
    ComplexMatrix::from_fn(full, full, |row, col| {
        let (s, r) = (row / tail, row % tail);
        let (sp, rp) = (col / tail, col % tail);
        let (i, ip) = ((r / stride) % k, (rp / stride) % k);
        if r - i * stride != rp - ip * stride {
            return linalg::ZERO;
        }
        op[(s * k + i, sp * k + ip)]
    })
}

/// `(1/n) sum_{i,j} <X(i)* Y(j)>` in the full unitary dilation.
pub fn brute_force_covariance(v: &KrausFamily, phi: &ComplexVector, x: &ComplexMatrix, y: &ComplexMatrix, n: usize) -> Complex64 {
    let d = v.dim_system();
    let k = v.dim_noise();
    let w = complete_to_unitary(v);
    let tail = k.pow(n as u32);
    let mut psi0 = ComplexVector::zeros(d * tail);
    for s in 0..d {
        psi0[s * tail] = phi[s];
    }
    let mut evolution = linalg::identity(d * tail);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for m in 1..=n {
        evolution = embed(&w, d, k, n, m) * evolution;
        xs.push(evolution.adjoint() * embed(x, d, k, n, m) * &evolution);
        ys.push(evolution.adjoint() * embed(y, d, k, n, m) * &evolution);
    }
    let sx = xs.iter().fold(linalg::zeros(d * tail, d * tail), |a, b| a + b);
    let sy = ys.iter().fold(linalg::zeros(d * tail, d * tail), |a, b| a + b);
    psi0.dotc(&(sx.adjoint() * sy * &psi0)) / c(n as f64, 0.0)
}

/// Random Hermitian operator on `system (x) noise` with zero stationary mean.
pub fn centered_observable<R: rand::Rng>(rng: &mut R, v: &KrausFamily) -> ComplexMatrix {
    let n = v.dim_system() * v.dim_noise();
    let h = qmarkov::random::hermitian(rng, n, 1.0);
    qmarkov::covariance::center(v, &h).unwrap().matrix().clone()
}
