//! Centralised numerical tolerances.
//!
//! Exact-rational code paths never consult these; they exist for the
//! floating-point track (representation theory, simulation, CP checks).

/// Hermiticity residual allowed in a density matrix.
pub const HERMITICITY: f64 = 1e-12;

/// |trace - 1| allowed in a density matrix.
pub const TRACE_ONE: f64 = 1e-12;

/// Smallest eigenvalue a positive-semidefinite matrix may exhibit.
pub const PSD_MIN_EIG: f64 = -1e-10;

/// Smallest Choi eigenvalue for a map to count as completely positive.
pub const CP_MIN_EIG: f64 = -1e-10;

/// Max-entry residual of `Tr_1 J - I` for a map to count as trace-preserving.
pub const TP_RESIDUAL: f64 = 1e-10;

/// Agreement required between Choi, Kraus, Stinespring, and circuit paths.
pub const CHANNEL_AGREEMENT: f64 = 1e-10;

/// Max-entry error allowed in Clebsch-Gordan block decompositions.
pub const BLOCK_DECOMP: f64 = 1e-9;

/// Orthonormality residual of the Schur basis.
pub const BASIS_ORTHONORMALITY: f64 = 1e-10;

/// Allowed gap between simulated and exact worst-case fidelity.
pub const SIM_LP_AGREEMENT: f64 = 1e-9;

/// Residual norm below which a Gram-Schmidt candidate is discarded
/// as linearly dependent.
pub const GRAM_SCHMIDT_RESIDUAL: f64 = 1e-8;

/// Eigenvalue magnitude above which it contributes to the numerical rank.
pub const RANK_CUTOFF: f64 = 1e-8;

/// Accuracy of the Bloch-sphere quadrature oracle.
pub const QUADRATURE: f64 = 1e-6;

/// |x - p/q| allowed when reconstructing a rational from a float.
pub const RATIONALIZE: f64 = 1e-9;

/// Largest denominator tried during rational reconstruction.
pub const RATIONALIZE_MAX_DEN: u64 = 1_000_000;

/// Norm slack accepted when a caller passes a "unit" vector.
pub const STATE_NORM: f64 = 1e-12;

/// Off-diagonal mass (relative to the matrix scale) at which the Jacobi
/// eigensolver stops sweeping.
pub const JACOBI_OFFDIAG: f64 = 1e-14;

/// Measurement outcomes with smaller probability are dropped: their
/// post-states are numerically undefined.
pub const PROB_FLOOR: f64 = 1e-12;

/// Determinant floor for the matrices fed to dual Clebsch-Gordan tests;
/// M* = (M^-1)^T amplifies conditioning below this.
pub const DUAL_DET_FLOOR: f64 = 1e-6;
