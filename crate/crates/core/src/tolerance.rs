//! Numerical thresholds shared by every module.
//!
//! All values are relative: callers scale them by `1 + ‖x‖` (or the
//! corresponding operator norm) of the quantities being compared.

/// Hermitian symmetry of matrix blocks.
pub const TAU_SYM: f64 = 1e-9;
/// Idempotency of projections.
pub const TAU_IDEM: f64 = 1e-9;
/// Algebraic identities (Jordan axiom, reconstruction of `Σ λᵢ pᵢ`, positivity).
pub const TAU_ALG: f64 = 1e-9;
/// Norm of `[T_a, T_b]` below which two elements operator commute.
pub const TAU_COMMUTE: f64 = 1e-8;
/// Eigenvalues closer than this are merged into one spectral projection.
pub const DELTA_CLUSTER: f64 = 1e-8;
/// Residual allowed in linear extension and Jordan audits of reconstructed maps.
pub const TAU_RECON: f64 = 1e-8;
/// Default number of dyadic digits (`2^-40 ≈ 9.1e-13`).
pub const DYADIC_DIGITS: usize = 40;
/// Rounding allowance on top of the `2^-N` truncation bound; the projections
/// come out of an eigensolver, so the residual carries that solver's error.
pub const DYADIC_FLOAT_SLACK: f64 = 64.0 * f64::EPSILON;

/// A bundle of the thresholds above, overridable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerances {
    pub sym: f64,
    pub idem: f64,
    pub alg: f64,
    pub commute: f64,
    pub cluster: f64,
    pub recon: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            sym: TAU_SYM,
            idem: TAU_IDEM,
            alg: TAU_ALG,
            commute: TAU_COMMUTE,
            cluster: DELTA_CLUSTER,
            recon: TAU_RECON,
        }
    }
}

impl Tolerances {
    /// Uses `tol` for the algebraic thresholds and keeps the relative spread
    /// between them (commutation and reconstruction stay ten times looser).
    pub fn uniform(tol: f64) -> Self {
        Self {
            sym: tol,
            idem: tol,
            alg: tol,
            commute: 10.0 * tol,
            cluster: 10.0 * tol,
            recon: 10.0 * tol,
        }
    }
}
