//! Smooth one-parameter families `theta -> V_theta` described by their Kraus
//! operators and first and second derivatives at a base point `theta_0`.

use crate::channel::{stack_isometry, KrausFamily};
use crate::error::{Error, Result};
use crate::linalg::{self, c, ComplexMatrix};
use crate::spectral;
use crate::tolerance::Tolerances;
use num_complex::Complex64;

/// Where the derivative data of a family comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilySource {
    Explicit,
    HamiltonianGenerated,
    ConjugationGenerated,
}

impl FamilySource {
    pub fn name(&self) -> &'static str {
        match self {
            FamilySource::Explicit => "explicit",
            FamilySource::HamiltonianGenerated => "hamiltonian_generated",
            FamilySource::ConjugationGenerated => "conjugation_generated",
        }
    }
}

/// Exact generator, kept so that shifted Kraus operators can be evaluated
/// without Taylor truncation.
#[derive(Debug, Clone)]
enum Generator {
    None,
    /// `V_theta = exp(i (theta - theta_0) A) V_0`.
    Hamiltonian { isometry: ComplexMatrix, a: ComplexMatrix, dim_noise: usize },
    /// `K_{i,theta} = U_theta K_i U_theta*`, `U_theta = exp(i (theta - theta_0) H)`.
    Conjugation { h: ComplexMatrix },
}

/// Kraus data of a parametrized family at `theta_0`.
#[derive(Debug, Clone)]
pub struct ParamFamily {
    base: KrausFamily,
    dk: Vec<ComplexMatrix>,
    ddk: Vec<ComplexMatrix>,
    source: FamilySource,
    gauge_b: f64,
    generator: Generator,
}

impl ParamFamily {
    /// Family from explicit `(K, K', K'')` triples. Both differentiated
    /// isometry identities must hold within the family tolerance.
    pub fn explicit(base: KrausFamily, dk: Vec<ComplexMatrix>, ddk: Vec<ComplexMatrix>) -> Result<Self> {
        Self::explicit_with(base, dk, ddk, &Tolerances::default())
    }

    pub fn explicit_with(
        base: KrausFamily,
        dk: Vec<ComplexMatrix>,
        ddk: Vec<ComplexMatrix>,
        tol: &Tolerances,
    ) -> Result<Self> {
        let d = base.dim_system();
        let k = base.dim_noise();
        for (name, list) in [("dkraus", &dk), ("ddkraus", &ddk)] {
            if list.len() != k {
                return Err(Error::DimensionMismatch(format!("{name} has {} entries, expected {k}", list.len())));
            }
            if let Some(bad) = list.iter().position(|m| m.shape() != (d, d)) {
                return Err(Error::DimensionMismatch(format!("{name}[{bad}] must be {d}x{d}")));
            }
        }
        let family = ParamFamily {
            base,
            dk,
            ddk,
            source: FamilySource::Explicit,
            gauge_b: 0.0,
            generator: Generator::None,
        };
        let first = family.first_order_defect();
        let second = family.second_order_defect();
        if first > tol.family || second > tol.family {
            return Err(Error::NotIsometry { deviation: first.max(second) });
        }
        Ok(family)
    }

    pub fn base(&self) -> &KrausFamily {
        &self.base
    }

    pub fn dk(&self) -> &[ComplexMatrix] {
        &self.dk
    }

    pub fn ddk(&self) -> &[ComplexMatrix] {
        &self.ddk
    }

    pub fn source(&self) -> FamilySource {
        self.source
    }

    pub fn gauge_b(&self) -> f64 {
        self.gauge_b
    }

    /// `max |sum (K'* K + K* K')|`.
    pub fn first_order_defect(&self) -> f64 {
        let d = self.base.dim_system();
        let sum = self
            .base
            .kraus()
            .iter()
            .zip(&self.dk)
            .fold(linalg::zeros(d, d), |acc, (k, dk)| acc + dk.adjoint() * k + k.adjoint() * dk);
        linalg::max_norm(&sum)
    }

    /// `max |sum (K''* K + 2 K'* K' + K* K'')|`.
    pub fn second_order_defect(&self) -> f64 {
        let d = self.base.dim_system();
        let sum = self
            .base
            .kraus()
            .iter()
            .zip(&self.dk)
            .zip(&self.ddk)
            .fold(linalg::zeros(d, d), |acc, ((k, dk), ddk)| {
                acc + ddk.adjoint() * k + dk.adjoint() * dk * c(2.0, 0.0) + k.adjoint() * ddk
            });
        linalg::max_norm(&sum)
    }

    /// Kraus operators at `theta_0 + delta`: exact when a generator is
    /// known, second-order Taylor polynomial otherwise.
    pub fn kraus_at(&self, delta: f64) -> Vec<ComplexMatrix> {
        // The Taylor data already carries the gauge; exact generators do not.
        let phase = Complex64::from_polar(1.0, self.gauge_b * delta);
        match &self.generator {
            Generator::None => self
                .base
                .kraus()
                .iter()
                .zip(&self.dk)
                .zip(&self.ddk)
                .map(|((k, dk), ddk)| k + dk * c(delta, 0.0) + ddk * c(0.5 * delta * delta, 0.0))
                .collect(),
            Generator::Hamiltonian { isometry, a, dim_noise } => {
                let v = linalg::expi_hermitian(a, delta) * isometry * phase;
                split_isometry(&v, *dim_noise)
            }
            Generator::Conjugation { h } => {
                let u = linalg::expi_hermitian(h, delta);
                let ud = u.adjoint();
                self.base.kraus().iter().map(|k| &u * k * &ud * phase).collect()
            }
        }
    }

    /// Whether `kraus_at` is exact rather than a Taylor polynomial.
    pub fn has_exact_generator(&self) -> bool {
        !matches!(self.generator, Generator::None)
    }

    /// `V'` as a `(D k) x D` matrix.
    pub fn derivative_isometry(&self) -> ComplexMatrix {
        stack_isometry(&self.dk)
    }

    /// The generator `G* = i V' V*` on system (x) noise.
    pub fn generator_star(&self) -> ComplexMatrix {
        self.derivative_isometry() * self.base.isometry().adjoint() * linalg::I
    }

    /// `Im sum_i tr[rho K_i'* K_i]`.
    pub fn gauge_functional(&self, rho: &ComplexMatrix) -> f64 {
        self.base
            .kraus()
            .iter()
            .zip(&self.dk)
            .map(|(k, dk)| linalg::trace(&(rho * dk.adjoint() * k)))
            .sum::<Complex64>()
            .im
    }

    /// Applies `V_theta -> e^{i b (theta - theta_0)} V_theta`.
    pub(crate) fn with_phase_rate(&self, b: f64) -> ParamFamily {
        let ib = c(0.0, b);
        let dk: Vec<ComplexMatrix> = self
            .base
            .kraus()
            .iter()
            .zip(&self.dk)
            .map(|(k, dk)| dk + k * ib)
            .collect();
        let ddk = self
            .base
            .kraus()
            .iter()
            .zip(&self.dk)
            .zip(&self.ddk)
            .map(|((k, dk), ddk)| ddk + dk * (ib * 2.0) - k * c(b * b, 0.0))
            .collect();
        ParamFamily {
            base: self.base.clone(),
            dk,
            ddk,
            source: self.source,
            gauge_b: self.gauge_b + b,
            generator: self.generator.clone(),
        }
    }
}

fn split_isometry(v: &ComplexMatrix, dim_noise: usize) -> Vec<ComplexMatrix> {
    let d = v.ncols();
    (0..dim_noise)
        .map(|i| ComplexMatrix::from_fn(d, d, |s, t| v[(s * dim_noise + i, t)]))
        .collect()
}

fn check_hermitian(a: &ComplexMatrix, tol: f64) -> Result<()> {
    let defect = linalg::hermiticity_defect(a);
    if defect > tol * linalg::max_norm(a).max(1.0) {
        return Err(Error::NotHermitian(defect));
    }
    Ok(())
}

/// Family `V_theta = exp(i (theta - theta_0) A) V_0` for Hermitian `A` on
/// system (x) noise; derivatives `V' = i A V_0`, `V'' = -A^2 V_0`.
pub fn make_family_hamiltonian(v0: &KrausFamily, a: &ComplexMatrix) -> Result<ParamFamily> {
    let n = v0.dim_system() * v0.dim_noise();
    if a.shape() != (n, n) {
        return Err(Error::DimensionMismatch(format!("generator must be {n}x{n}")));
    }
    check_hermitian(a, Tolerances::default().structural)?;
    let a = linalg::re_part(a);
    let v = v0.isometry();
    let k = v0.dim_noise();
    let dv = &a * &v * linalg::I;
    let ddv = -(&a * &a * &v);
    Ok(ParamFamily {
        base: v0.clone(),
        dk: split_isometry(&dv, k),
        ddk: split_isometry(&ddv, k),
        source: FamilySource::HamiltonianGenerated,
        gauge_b: 0.0,
        generator: Generator::Hamiltonian { isometry: v, a, dim_noise: k },
    })
}

/// Family `K_{i,theta} = U_theta K_i U_theta*` with `U_theta = exp(i (theta - theta_0) H)`;
/// `K' = i[H, K]`, `K'' = -[H, [H, K]]`.
pub fn make_family_conjugation(v0: &KrausFamily, h: &ComplexMatrix) -> Result<ParamFamily> {
    let d = v0.dim_system();
    if h.shape() != (d, d) {
        return Err(Error::DimensionMismatch(format!("H must be {d}x{d}")));
    }
    check_hermitian(h, Tolerances::default().structural)?;
    let h = linalg::re_part(h);
    let h2 = &h * &h;
    let dk = v0
        .kraus()
        .iter()
        .map(|k| (&h * k - k * &h) * linalg::I)
        .collect();
    let ddk = v0
        .kraus()
        .iter()
        .map(|k| -(&h2 * k - &h * k * &h * c(2.0, 0.0) + k * &h2))
        .collect();
    Ok(ParamFamily {
        base: v0.clone(),
        dk,
        ddk,
        source: FamilySource::ConjugationGenerated,
        gauge_b: 0.0,
        generator: Generator::Conjugation { h },
    })
}

/// Rephases the family so that `Im sum tr[rho_ss K'* K] = 0`.
///
/// With `b` the current value of that functional, the family becomes
/// `e^{i b (theta - theta_0)} V_theta`: `K' <- K' + i b K` and
/// `K'' <- K'' + 2 i b K' - b^2 K`.
pub fn gauge_fix(family: &ParamFamily) -> Result<ParamFamily> {
    let rho = spectral::require_primitive(family.base(), &Tolerances::default())?;
    let b = family.gauge_functional(rho.matrix());
    if b == 0.0 {
        return Ok(family.clone());
    }
    Ok(family.with_phase_rate(b))
}
