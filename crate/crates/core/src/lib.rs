//! Numerics for ergodic quantum Markov chains: stationary outputs,
//! identifiability up to phase and local unitaries, Markov covariances,
//! quantum Fisher information and local asymptotic normality of the output.
//!
//! A chain is given by Kraus operators `K_1..K_k` on a `D`-dimensional system
//! with `sum K_i* K_i = 1`. Operators on the system are `D x D` complex
//! matrices; vectorization is row-major throughout.

pub mod channel;
pub mod covariance;
pub mod equivalence;
pub mod error;
pub mod family;
pub mod gram;
pub mod lan;
pub mod linalg;
pub mod output;
pub mod random;
pub mod spectral;
pub mod standard;
pub mod tolerance;

pub use channel::{cross_map, deformed_map, DensityMatrix, KrausFamily, SuperOperator};
pub use error::{Error, Result};
pub use family::{gauge_fix, make_family_conjugation, make_family_hamiltonian, FamilySource, ParamFamily};
pub use linalg::{ComplexMatrix, ComplexVector};
pub use output::PureStateVector;
pub use tolerance::Tolerances;
