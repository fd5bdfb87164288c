//! Dense complex linear algebra helpers on top of `nalgebra`.
//!
//! Operators are stored as `DMatrix<Complex64>`. Vectorization is row-major:
//! the matrix unit `E_ij` of an `r x c` operator maps to index `i * c + j`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Dense complex matrix.
pub type ComplexMatrix = DMatrix<Complex64>;
/// Dense complex column vector.
pub type ComplexVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

pub fn zeros(r: usize, c: usize) -> ComplexMatrix {
    ComplexMatrix::zeros(r, c)
}

/// Entrywise max-modulus norm.
pub fn max_norm(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_norm_vec(v: &ComplexVector) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn is_finite(m: &ComplexMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn trace(m: &ComplexMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

/// `(A + A*) / 2`.
pub fn re_part(a: &ComplexMatrix) -> ComplexMatrix {
    (a + a.adjoint()).scale(0.5)
}

/// `(A - A*) / 2i`, the anti-Hermitian part rotated to a Hermitian operator.
pub fn im_part(a: &ComplexMatrix) -> ComplexMatrix {
    (a - a.adjoint()) * c(0.0, -0.5)
}

/// Deviation `max |A - A*|`.
pub fn hermiticity_defect(a: &ComplexMatrix) -> f64 {
    max_norm(&(a - a.adjoint()))
}

/// Row-major vectorization.
pub fn vectorize(m: &ComplexMatrix) -> ComplexVector {
    let (r, cols) = m.shape();
    ComplexVector::from_fn(r * cols, |idx, _| m[(idx / cols, idx % cols)])
}

/// Inverse of [`vectorize`].
pub fn unvectorize(v: &ComplexVector, rows: usize, cols: usize) -> ComplexMatrix {
    assert_eq!(v.len(), rows * cols);
    ComplexMatrix::from_fn(rows, cols, |i, j| v[i * cols + j])
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
pub fn eigh(a: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let n = a.nrows();
    let h = re_part(a);
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    (values, vectors)
}

/// Apply a real function to the spectrum of a Hermitian matrix.
pub fn hermitian_fn(a: &ComplexMatrix, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
    let (w, v) = eigh(a);
    let d = ComplexMatrix::from_diagonal(&ComplexVector::from_iterator(w.len(), w.iter().map(|&x| f(x))));
    &v * d * v.adjoint()
}

/// Symmetric square root of a PSD matrix; tiny negative eigenvalues are clipped.
pub fn sqrt_psd(a: &ComplexMatrix) -> ComplexMatrix {
    hermitian_fn(a, |x| c(x.max(0.0).sqrt(), 0.0))
}

/// `exp(i t A)` for Hermitian `A`.
pub fn expi_hermitian(a: &ComplexMatrix, t: f64) -> ComplexMatrix {
    hermitian_fn(a, |x| Complex64::from_polar(1.0, t * x))
}

/// Trace norm of a Hermitian matrix.
pub fn trace_norm_hermitian(a: &ComplexMatrix) -> f64 {
    eigh(a).0.iter().map(|x| x.abs()).sum()
}

/// Eigenvalues of a general complex square matrix, sorted by decreasing
/// modulus (ties broken by real then imaginary part).
pub fn eigenvalues(a: &ComplexMatrix) -> Vec<Complex64> {
    let n = a.nrows();
    if n == 0 {
        return Vec::new();
    }
    let (_, t) = a.clone().schur().unpack();
    let mut vals: Vec<Complex64> = (0..n).map(|i| t[(i, i)]).collect();
    sort_by_modulus(&mut vals);
    vals
}

pub fn sort_by_modulus(vals: &mut [Complex64]) {
    vals.sort_by(|x, y| {
        y.norm()
            .total_cmp(&x.norm())
            .then(y.re.total_cmp(&x.re))
            .then(y.im.total_cmp(&x.im))
    });
}

/// Singular values of `a`, descending.
pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = a.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Numerical rank at an absolute singular value threshold.
pub fn rank(a: &ComplexMatrix, tol: f64) -> usize {
    singular_values(a).into_iter().filter(|&s| s > tol).count()
}

/// Right singular vectors of `a` ordered by increasing singular value.
///
/// Returns `(sigma, v)` pairs; the first entry approximates the kernel.
pub fn smallest_right_singular(a: &ComplexMatrix) -> Vec<(f64, ComplexVector)> {
    let n = a.ncols();
    // Pad to at least square so that all n right singular vectors exist.
    let padded = if a.nrows() < n {
        let mut p = zeros(n, n);
        p.view_mut((0, 0), (a.nrows(), n)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    let mut pairs: Vec<(f64, ComplexVector)> = svd
        .singular_values
        .iter()
        .enumerate()
        .map(|(k, &s)| (s, vt.row(k).adjoint()))
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    pairs
}

/// Minimum-norm least-squares solution of `a x = b` via SVD, discarding
/// singular values below `eps * sigma_max`.
pub fn lstsq(a: &ComplexMatrix, b: &ComplexVector, eps: f64) -> ComplexVector {
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    svd.solve(b, eps * smax.max(f64::MIN_POSITIVE))
        .expect("SVD computed with both U and V")
}

/// Kronecker product.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// `|x><y|`.
pub fn outer(x: &ComplexVector, y: &ComplexVector) -> ComplexMatrix {
    x * y.adjoint()
}

pub fn basis_vector(n: usize, i: usize) -> ComplexVector {
    let mut v = ComplexVector::zeros(n);
    v[i] = ONE;
    v
}

/// Matrix unit `|i><j|` of size `r x c`.
pub fn matrix_unit(r: usize, cols: usize, i: usize, j: usize) -> ComplexMatrix {
    let mut m = zeros(r, cols);
    m[(i, j)] = ONE;
    m
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO])
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
}
