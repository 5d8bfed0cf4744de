//! Numerical tolerances used throughout the crate, collected in one place
//! so every module validates against the same constants.
//!
//! Two kinds of constants live here. *Validation* tolerances decide whether
//! an input is accepted at all (is this matrix Hermitian? unitary? trace
//! one?); they sit a few orders of magnitude above double-precision rounding
//! so that operators assembled from other double-precision computations pass
//! without ceremony. *Classification* tolerances decide how a quantity is
//! interpreted (is this row zero? are these eigenvalues degenerate? is this
//! singular-value pair physical?); they are documented next to the operation
//! they steer.

/// Smallest supported Hilbert-space dimension.
pub const MIN_DIM: usize = 2;

/// Largest supported Hilbert-space dimension. Everything here is dense
/// linear algebra, so the cap keeps worst-case work around `64^3`.
pub const MAX_DIM: usize = 64;

/// Norms below this are treated as exactly zero when normalizing.
pub const ZERO_NORM_FLOOR: f64 = 1e-14;

/// Maximum entrywise deviation `|A - A'|` for an operator accepted as
/// Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Maximum entrywise deviation of `U'U` from the identity for an operator
/// accepted as unitary.
pub const UNITARY_TOL: f64 = 1e-9;

/// Maximum entrywise deviation of `P^2` from `P` (and of `P` from `P'`)
/// for an operator accepted as a projector.
pub const PROJECTOR_TOL: f64 = 1e-9;

/// Density-operator admission: Hermiticity, unit trace, and eigenvalue
/// positivity are each checked against this bound.
pub const DENSITY_TOL: f64 = 1e-9;

/// Maximum deviation of `tr W` from one for a double state.
pub const TRACE_ONE_TOL: f64 = 1e-10;

/// Transition amplitudes with modulus at or below this floor are treated as
/// orthogonal: the normalized transition operator `|psi><phi| / <phi|psi>`
/// is rejected rather than amplified into garbage.
pub const OVERLAP_FLOOR: f64 = 1e-8;

/// Overlap modulus at or above this means the two states are the same ray,
/// and the pair is routed to the single-state limit `|psi><psi|`.
pub const IDENTICAL_OVERLAP: f64 = 1.0 - 1e-12;

/// Default *relative* gap (scaled by the largest eigenvalue modulus) under
/// which neighboring eigenvalues are merged into one degenerate cluster.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// Default bound on `|W^2 - W|` entries for `is_pure_process`.
pub const PURITY_TOL: f64 = 1e-9;

/// Default per-check tolerance for consistency reports.
pub const REPORT_TOL: f64 = 1e-9;

/// A mixture term whose pair overlap modulus is at or below this bound is
/// rejected as orthogonal.
pub const ORTHOGONAL_TERM_TOL: f64 = 1e-12;

/// A row of a double-state matrix counts as zero when every entry modulus
/// is at or below this bound; such rows get probability zero in the default
/// decomposition plan.
pub const ROW_ZERO_TOL: f64 = 1e-12;

/// Singular values at or below this bound are dropped from the singular
/// expansion (exact-rank deficiency, not approximation).
pub const SVD_RANK_TOL: f64 = 1e-12;

/// A singular pair `(u, v)` is flagged unphysical when `|<u|v>|` is at or
/// below this bound: the corresponding normalized process is undefined.
pub const SVD_PHYSICAL_TOL: f64 = 1e-10;

/// Mixture weights must sum to one within this bound.
pub const WEIGHT_SUM_TOL: f64 = 1e-10;

/// A family of vectors is accepted as an orthonormal basis when its Gram
/// matrix deviates from the identity by at most this much entrywise.
pub const BASIS_TOL: f64 = 1e-10;
