/// Numerical thresholds shared by all operations.
///
/// Defaults are sized for double precision at desk scale (D <= 8).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Structural checks: isometry, Hermiticity, trace.
    pub structural: f64,
    /// Comparisons between derived quantities.
    pub derived: f64,
    /// Width of the band below modulus 1 classified as peripheral spectrum.
    pub gap: f64,
    /// Smallest eigenvalue of the stationary state counted as full rank.
    pub rank: f64,
    /// Peripheral band used when searching the cross map for a phase.
    pub eig: f64,
    /// Admissible |tr[rho_ss X]| for inputs of the resolvent and for centered observables.
    pub domain: f64,
    /// Differentiated isometry identities of parametrized families.
    pub family: f64,
    /// Maximum number of amplitudes materialized for pure states.
    pub amplitude_guard: u128,
    /// Maximum side length of materialized output density matrices.
    pub matrix_guard: u128,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            structural: 1e-12,
            derived: 1e-10,
            gap: 1e-8,
            rank: 1e-10,
            eig: 1e-8,
            domain: 1e-9,
            family: 1e-9,
            amplitude_guard: 1 << 24,
            matrix_guard: 1 << 12,
        }
    }
}

/// Largest supported system dimension.
pub const MAX_SYSTEM_DIM: usize = 32;
