//! Numerical thresholds shared across the crate.
//!
//! Everything that decides pass/fail lives here so that tests, the validation
//! command and the library agree on the same numbers.

/// Max entry of `M - M†` accepted for a POVM element.
pub const HERMITIAN: f64 = 1e-12;

/// Smallest eigenvalue of the Hermitian part accepted as "positive".
pub const POSITIVE: f64 = 1e-10;

/// Max entry of `Σ M_m - I` accepted for completeness.
pub const COMPLETE: f64 = 1e-10;

/// Entries of a stochastic matrix in `[-STOCHASTIC_NEGATIVE, 0)` are clamped to zero.
pub const STOCHASTIC_NEGATIVE: f64 = 1e-12;

/// Column sums of a stochastic matrix must equal one within this.
pub const STOCHASTIC_COLUMN: f64 = 1e-10;

/// Residual acceptance for non-ideality fits, in Hilbert-Schmidt norm.
pub const FIT: f64 = 1e-8;

/// Relative threshold on Gram eigenvalues for numerical rank.
pub const RANK: f64 = 1e-8;

/// Poisson tail mass tolerated when truncating the Fock space.
pub const FOCK_TAIL: f64 = 1e-12;

/// Slack below zero still counted as satisfying an inequality.
pub const INEQUALITY: f64 = 1e-10;

/// Orthonormality residual for bases handed to the entropic bounds.
pub const ORTHONORMAL: f64 = 1e-10;

/// Closed form vs. simulation, no special functions involved.
pub const CROSS_CHECK_EXACT: f64 = 1e-8;

/// Closed form vs. simulation where `erf` or the half-plane POVM enters.
pub const CROSS_CHECK_SPECIAL: f64 = 1e-6;

/// Largest coherent amplitude treated as the `γ → ∞` limit.
pub const GAMMA_INFINITY: f64 = 6.0;
