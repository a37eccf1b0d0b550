//! Exact ℚ(i) arithmetic, dense polynomials, exact linear algebra and the
//! numeric root finder.

pub mod matrix;
pub mod mpoly;
pub mod poly;
pub mod roots;
pub mod scalar;

pub use matrix::{pfaffian, Matrix, QMatrix};
pub use mpoly::{MPoly, Monomial};
pub use poly::{uv_from_b, w_from_u, CPoly, Poly, QPoly};
pub use roots::{multiset_distance, roots, roots_exact, sort_complex};
pub use scalar::{ComplexF, Field, GaussianRational, Ring};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KernelError {
    #[error("odd-degree coefficient at index {0} is nonzero")]
    OddCoefficient(usize),
    #[error("root iteration did not converge")]
    NonConvergence,
    #[error("polynomial has degree < 1")]
    DegreeTooLow,
    #[error("matrix is not antisymmetric")]
    NotAntisymmetric,
    #[error("matrix has odd dimension")]
    OddDimension,
}
