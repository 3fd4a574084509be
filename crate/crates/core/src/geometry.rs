//! Closed-form Kähler geometry of the Siegel-Jacobi disk.
//!
//! With `P = 1 − |w|²` and `η = (z + z̄w)/P` the balanced metric is
//!
//! ```text
//! h = [ μ/P      μη/P            ]
//!     [ μη̄/P    2k/P² + μ|η|²/P ]
//! ```
//!
//! with `det h = G = 2kμ/P³`, independent of `z`. The Ricci form, the
//! Bergman form and the scalar curvature all follow from `ln G`.

use crate::domain::{c64, HermitianMatrix2, Mat2, ModelParams, SJPoint, C64};
use crate::error::Result;
use crate::fd::{self, ScalarField};
use crate::kernels::f_exponent_diag;

/// Complex dimension of the Siegel-Jacobi disk.
pub const COMPLEX_DIM: usize = 2;

/// Kähler potential `f = ln K(ς, ς̄) = μF(z, w) − 2k ln(1 − |w|²)`.
pub fn kahler_potential(p: &SJPoint, params: ModelParams) -> f64 {
    params.mu() * f_exponent_diag(p) - 2.0 * params.k() * p.p_factor().ln()
}

/// `η = (z + z̄w)/(1 − |w|²)`; inverts as `z = η − w·conj(η)`.
pub fn eta(p: &SJPoint) -> C64 {
    (p.z + p.z.conj() * p.w()) / p.p_factor()
}

/// Balanced metric `h_{ij̄} = ∂²f/∂ζ_i∂ζ̄_j`.
pub fn balanced_metric(p: &SJPoint, params: ModelParams) -> HermitianMatrix2 {
    let pf = p.p_factor();
    let e = eta(p);
    let mu = params.mu();
    HermitianMatrix2::new(
        mu / pf,
        e * (mu / pf),
        2.0 * params.k() / (pf * pf) + mu * e.norm_sqr() / pf,
    )
}

/// Closed-form inverse of [`balanced_metric`].
pub fn inverse_metric(p: &SJPoint, params: ModelParams) -> HermitianMatrix2 {
    let pf = p.p_factor();
    let e = eta(p);
    let (k, mu) = (params.k(), params.mu());
    let pre = pf.powi(3) / (2.0 * k * mu);
    HermitianMatrix2::new(
        pre * (2.0 * k / (pf * pf) + mu * e.norm_sqr() / pf),
        -e * (pre * mu / pf),
        pre * mu / pf,
    )
}

/// Invariant volume density `G = det h = 2kμ/(1 − |w|²)³`.
pub fn volume_density(p: &SJPoint, params: ModelParams) -> f64 {
    2.0 * params.k() * params.mu() / p.p_factor().powi(3)
}

/// Bergman form with potential `ln G`: `3 dw ⊗ dw̄/(1 − |w|²)²`.
///
/// Rank one in `(z, w)`, so this is a pseudometric on the Siegel-Jacobi
/// disk and is returned without a definiteness check.
pub fn bergman_metric(p: &SJPoint) -> HermitianMatrix2 {
    let pf = p.p_factor();
    HermitianMatrix2::new(0.0, c64(0.0, 0.0), 3.0 / (pf * pf))
}

/// Ricci coefficients `Ric_{ij̄} = −∂²ln G/∂ζ_i∂ζ̄_j`; only the `ww̄` entry,
/// `−3/P²`, is non-zero.
pub fn ricci_form(p: &SJPoint) -> HermitianMatrix2 {
    bergman_metric(p).scale(-1.0)
}

/// Coefficients of `ω̃ = 3[(2k+1) dw∧dw̄/P² + μ 𝒜∧𝒜̄/P]`,
/// `𝒜 = dz + η̄ dw`.
pub fn tilde_form(p: &SJPoint, params: ModelParams) -> HermitianMatrix2 {
    let pf = p.p_factor();
    let e = eta(p);
    let mu = params.mu();
    HermitianMatrix2::new(
        3.0 * mu / pf,
        e * (3.0 * mu / pf),
        3.0 * ((2.0 * params.k() + 1.0) / (pf * pf) + mu * e.norm_sqr() / pf),
    )
}

/// Potential of [`tilde_form`]: `3[μF − (2k + 1) ln P] = ln(K³ G) + const`.
pub fn tilde_potential(p: &SJPoint, params: ModelParams) -> f64 {
    3.0 * (params.mu() * f_exponent_diag(p) - (2.0 * params.k() + 1.0) * p.p_factor().ln())
}

/// `(n + 1) h − Ric` with `n` the complex dimension.
pub fn tilde_form_from_ricci(p: &SJPoint, params: ModelParams) -> HermitianMatrix2 {
    balanced_metric(p, params).scale((COMPLEX_DIM + 1) as f64) - ricci_form(p)
}

/// Constant scalar curvature `−3/(2k)`.
pub fn scalar_curvature(params: ModelParams) -> f64 {
    -3.0 / (2.0 * params.k())
}

/// `Σ_{i,j} (h⁻¹)_{ji} M_{ij} = tr(h⁻¹ M)`, the contraction used by both the
/// scalar curvature and the Laplace-Beltrami operator.
pub fn contract(inverse: &HermitianMatrix2, m: &Mat2) -> C64 {
    (inverse.to_mat2() * *m).trace()
}

/// `ln G`, the Bergman potential.
pub fn ln_volume_density(p: &SJPoint, params: ModelParams) -> f64 {
    volume_density(p, params).ln()
}

/// Apply the closed-form operator
///
/// ```text
/// Δ = (P/μ + P²|η|²/(2k)) ∂z∂z̄ + (P²/(2k)) [∂w∂w̄ − η̄ ∂z∂w̄ − η ∂z̄∂w]
/// ```
///
/// to a given Wirtinger Hessian.
pub fn laplace_beltrami_from_hessian(hess: &Mat2, p: &SJPoint, params: ModelParams) -> f64 {
    let pf = p.p_factor();
    let e = eta(p);
    let (k, mu) = (params.k(), params.mu());
    let czz = pf / mu + pf * pf * e.norm_sqr() / (2.0 * k);
    let cw = pf * pf / (2.0 * k);
    let v = hess.get(0, 0) * czz + (hess.get(1, 1) - e.conj() * hess.get(0, 1) - e * hess.get(1, 0)) * cw;
    v.re
}

/// Laplace-Beltrami operator applied to `field` at `p`, with the default
/// finite-difference step for the field's Hessian.
pub fn laplace_beltrami(field: &dyn ScalarField, p: &SJPoint, params: ModelParams) -> Result<f64> {
    laplace_beltrami_with_step(field, p, params, fd::DEFAULT_STEP)
}

pub fn laplace_beltrami_with_step(
    field: &dyn ScalarField,
    p: &SJPoint,
    params: ModelParams,
    step: f64,
) -> Result<f64> {
    let hess = fd::wirtinger_hessian(field, p, step)?;
    Ok(laplace_beltrami_from_hessian(&hess.entries, p, params))
}
