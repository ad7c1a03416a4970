//! Tolerance constants shared by the numerics and the verifier.
//!
//! Structural identities (unitarity, su(2) membership, trace identities) hold
//! to rounding and are judged against [`ALG_EPS`]. Finite-difference residuals
//! are judged by their convergence ratio under step halving, with an absolute
//! ceiling that scales like `h^2`.

/// Structural checks: anti-Hermitian defect, unitarity, det F = 1.
pub const ALG_EPS: f64 = 1e-10;

/// Distinctness threshold for spectral points.
pub const DISTINCT_EPS: f64 = 1e-12;

/// Relative threshold below which `d0` counts as singular.
pub const SINGULAR_REL: f64 = 1e-14;

/// Slack allowed when clamping an arccos argument back into [-1, 1].
pub const ARCCOS_CLAMP: f64 = 1e-12;

/// Matching tolerance for the sine-Gordon parameter symmetry.
pub const SG_MATCH_EPS: f64 = 1e-10;

/// Largest N for which the brute-force permutation search runs.
pub const SG_MAX_N: usize = 8;

/// Bound on |Im(d_k/d0)| and on the spread of v for sine-Gordon data.
pub const REALITY_EPS: f64 = 1e-9;

/// Bound on |Im(q_ts/q)| before `lax_matrices` flags its input.
pub const LAX_IM_RATIO_WARN: f64 = 1e-6;

/// Absolute residual ceiling at the reference step `FD_REFERENCE_STEP`.
pub const FD_CEILING: f64 = 1e-3;
pub const FD_REFERENCE_STEP: f64 = 1e-3;

/// Residuals below this are rounding noise: the convergence ratio is not
/// meaningful and the check passes on magnitude alone.
pub const FD_ROUNDING_FLOOR: f64 = 1e-9;

/// Accepted band for residual(h) / residual(h/2) with second-order stencils.
pub const RATIO_MIN: f64 = 3.0;
pub const RATIO_MAX: f64 = 5.0;

/// A check with more skipped points than this cannot pass.
pub const MAX_SKIPPED_FRACTION: f64 = 0.5;

/// Guards for the real PLR pair: |cos(u/2)| and |sin u| must exceed this.
pub const PLR_GUARD: f64 = 0.1;

/// |q| below which Im(q_ts/q) is not reported.
pub const Q_RATIO_GUARD: f64 = 0.1;

/// Closed-form vs numeric Sym curve at the reference lambda step.
pub const SYM_TOL: f64 = 1e-6;
pub const SYM_STEP: f64 = 1e-4;

/// |gamma' x gamma''| below this marks a Frenet gap.
pub const FRENET_GAP: f64 = 1e-8;

/// Ceiling for a finite-difference residual evaluated at step `h`.
pub fn fd_ceiling(h: f64) -> f64 {
    let r = h / FD_REFERENCE_STEP;
    FD_CEILING * (r * r).max(1.0)
}

/// Coefficient and compatibility checks skip centres with curvature below this.
pub const KAPPA_GUARD: f64 = 0.1;

/// Step multiplier for the general compatibility check, whose nested
/// stencils reach third order.
pub const COMPAT_STEP_FACTOR: f64 = 4.0;
