//! Bergman representative coordinates.
//!
//! For a base point `ζ₀` the representative coordinates are
//!
//! ```text
//! w_i(ς) = Σ_j h^{j̄i}(ζ₀) ∂/∂ζ̄_j ln[K(ς, ζ̄)/K(ζ, ζ̄)] |_{ζ = ζ₀}
//! ```
//!
//! [`rc_numeric_oracle`] evaluates this definition with finite differences;
//! everything else uses the closed forms. On the Siegel-Jacobi disk the map
//! is global and, through the `(x, y)` chart, identifies the disk with
//! itself.

use crate::domain::{c64, DiskPoint, HermitianMatrix2, Mat2, ModelParams, SJPoint, C64};
use crate::error::{Error, Result};
use crate::fd;
use crate::geometry::{eta, inverse_metric};
use crate::kernels::{f_exponent_diag, ln_sj_kernel};

/// Chart of representative coordinates on the Siegel disk, anchored at `w₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskRCFrame {
    w0: DiskPoint,
    k: f64,
    p0: f64,
}

impl DiskRCFrame {
    pub fn new(w0: DiskPoint, k: f64) -> Self {
        Self {
            w0,
            k,
            p0: 1.0 - w0.value().norm_sqr(),
        }
    }

    pub fn base(&self) -> DiskPoint {
        self.w0
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }
}

/// `w₁ = P₀ (w − w₀)/(1 − w̄₀ w)`.
pub fn disk_rc_forward(frame: &DiskRCFrame, w: DiskPoint) -> C64 {
    let (w, w0) = (w.value(), frame.w0.value());
    (w - w0) * frame.p0 / (c64(1.0, 0.0) - w0.conj() * w)
}

/// `dw₁/dw = P₀/P₁²`.
pub fn disk_rc_derivative(frame: &DiskRCFrame, w: DiskPoint) -> C64 {
    let p1 = c64(1.0, 0.0) - frame.w0.value().conj() * w.value();
    frame.p0 / (p1 * p1)
}

/// `w = (w₁′ + w₀)/(1 + w̄₀ w₁′)` with `w₁′ = w₁/P₀`.
pub fn disk_rc_inverse(frame: &DiskRCFrame, w1: C64) -> Result<DiskPoint> {
    let w0 = frame.w0.value();
    let wp = w1 / frame.p0;
    DiskPoint::new((wp + w0) / (c64(1.0, 0.0) + w0.conj() * wp))
}

/// Representative coordinate of the Siegel disk from the defining formula,
/// with `h(w₀) = 2k/P₀²` and a finite-difference `∂/∂ζ̄`.
pub fn disk_rc_numeric_oracle(frame: &DiskRCFrame, w: DiskPoint, step: f64) -> Result<C64> {
    let k = frame.k;
    let wv = w.value();
    let log_ratio = |v: [C64; 2]| -> Result<C64> {
        let zeta = v[1];
        let cross = (c64(1.0, 0.0) - wv * zeta.conj()).ln() * (-2.0 * k);
        let diag = -2.0 * k * (1.0 - zeta.norm_sqr()).ln();
        Ok(cross - diag)
    };
    let d = fd::wirtinger_dbar(&log_ratio, [c64(0.0, 0.0), frame.w0.value()], step)?;
    Ok(d[1] * frame.p0 * frame.p0 / (2.0 * k))
}

/// Representative-coordinate chart on the Siegel-Jacobi disk, anchored at
/// `ς₀ = (z₀, w₀)`, with cached `η₀`, `P₀` and `λ = μ/(4k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RCFrame {
    base: SJPoint,
    params: ModelParams,
    eta0: C64,
    p0: f64,
    lambda: f64,
}

impl RCFrame {
    pub fn new(base: SJPoint, params: ModelParams) -> Self {
        Self {
            base,
            params,
            eta0: eta(&base),
            p0: base.p_factor(),
            lambda: params.lambda(),
        }
    }

    pub fn base(&self) -> &SJPoint {
        &self.base
    }

    pub fn params(&self) -> ModelParams {
        self.params
    }

    pub fn eta0(&self) -> C64 {
        self.eta0
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// `P₁ = 1 − w̄₀ w`.
    fn p1(&self, w: C64) -> C64 {
        c64(1.0, 0.0) - self.base.w().conj() * w
    }
}

/// Representative coordinates `(w₁, w₂)`. The image of the disk is not
/// bounded in these variables, so no domain check applies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RCPoint {
    pub w1: C64,
    pub w2: C64,
}

/// Point of the `(x, y)` chart, `|y| < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XYPoint {
    pub x: C64,
    pub y: DiskPoint,
}

impl XYPoint {
    pub fn new(x: C64, y: C64) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::Domain(format!("x = {x} is not finite")));
        }
        Ok(Self {
            x,
            y: DiskPoint::new(y)?,
        })
    }
}

/// Closed-form representative coordinates:
///
/// ```text
/// w₂ = (P₀/P₁)(w − w₀) + λ[P₀(η₁′ − η₀)]²
/// w₁ = −η̄₀ w₂ + P₀(η₁′ − η₀),     η₁′ = (z + z̄₀ w)/P₁
/// ```
pub fn rc_forward(frame: &RCFrame, p: &SJPoint) -> RCPoint {
    let (z0, w0) = (frame.base.z, frame.base.w());
    let w = p.w();
    let p1 = frame.p1(w);
    let eta1 = (p.z + z0.conj() * w) / p1;
    let lin = (eta1 - frame.eta0) * frame.p0;
    let w2 = (w - w0) * frame.p0 / p1 + lin * lin * frame.lambda;
    let w1 = -frame.eta0.conj() * w2 + lin;
    RCPoint { w1, w2 }
}

/// Step used by [`rc_numeric_oracle`] for first derivatives.
pub const ORACLE_STEP: f64 = 1e-5;

/// Representative coordinates from the defining formula: finite-difference
/// `∂/∂ζ̄` of `ln K(ς, ζ̄) − ln K(ζ, ζ̄)` at the base, contracted with the
/// closed-form inverse metric as `w = (h⁻¹)ᵀ μ`.
pub fn rc_numeric_oracle(frame: &RCFrame, p: &SJPoint) -> Result<RCPoint> {
    rc_numeric_oracle_with_step(frame, p, ORACLE_STEP)
}

pub fn rc_numeric_oracle_with_step(frame: &RCFrame, p: &SJPoint, step: f64) -> Result<RCPoint> {
    let params = frame.params;
    let log_ratio = |v: [C64; 2]| -> Result<C64> {
        let zeta = SJPoint::new(v[0], v[1])?;
        let diag = params.mu() * f_exponent_diag(&zeta) - 2.0 * params.k() * zeta.p_factor().ln();
        Ok(ln_sj_kernel(p, &zeta, params) - diag)
    };
    let base = [frame.base.z, frame.base.w()];
    let mu_vec = fd::wirtinger_dbar(&log_ratio, base, step)?;
    let hinv = inverse_metric(&frame.base, params).to_mat2();
    let w1 = hinv.get(0, 0) * mu_vec[0] + hinv.get(1, 0) * mu_vec[1];
    let w2 = hinv.get(0, 1) * mu_vec[0] + hinv.get(1, 1) * mu_vec[1];
    if !(w1.is_finite() && w2.is_finite()) {
        return Err(Error::Step(format!("non-finite oracle value at {p}")));
    }
    Ok(RCPoint { w1, w2 })
}

/// `x = w₁′ + η̄₀ w₂′`, `y = w₂′ − λ P₀ x²`, with `wᵢ′ = wᵢ/P₀`.
pub fn rc_to_xy(frame: &RCFrame, q: &RCPoint) -> (C64, C64) {
    let w1p = q.w1 / frame.p0;
    let w2p = q.w2 / frame.p0;
    let x = w1p + frame.eta0.conj() * w2p;
    let y = w2p - x * x * (frame.lambda * frame.p0);
    (x, y)
}

/// Inverse of [`rc_to_xy`].
pub fn xy_to_rc(frame: &RCFrame, x: C64, y: C64) -> RCPoint {
    let w2p = y + x * x * (frame.lambda * frame.p0);
    let w1p = x - frame.eta0.conj() * w2p;
    RCPoint {
        w1: w1p * frame.p0,
        w2: w2p * frame.p0,
    }
}

/// `(x, y) ↦ (z, w)`: `w = (y + w₀)/Q`, `z = (z₀ − z̄₀ y + P₀ x)/Q`,
/// `Q = 1 + w̄₀ y`.
pub fn xy_to_sj(frame: &RCFrame, x: C64, y: C64) -> Result<SJPoint> {
    let (z0, w0) = (frame.base.z, frame.base.w());
    let q = c64(1.0, 0.0) + w0.conj() * y;
    SJPoint::new((z0 - z0.conj() * y + x * frame.p0) / q, (y + w0) / q)
}

/// Inverse representative map, through the `(x, y)` chart.
pub fn rc_inverse(frame: &RCFrame, q: &RCPoint) -> Result<SJPoint> {
    let (x, y) = rc_to_xy(frame, q);
    if y.norm_sqr() >= 1.0 {
        return Err(Error::Domain(format!(
            "({}, {}) is not in the representative image: |y| = {} ≥ 1",
            q.w1,
            q.w2,
            y.norm()
        )));
    }
    xy_to_sj(frame, x, y)
}

/// `det ∂(w₁, w₂)/∂(z, w) = (P₀/P₁)³`.
pub fn rc_jacobian_det(frame: &RCFrame, p: &SJPoint) -> C64 {
    let r = c64(frame.p0, 0.0) / frame.p1(p.w());
    r * r * r
}

/// `x = (z − η₀ + η̄₀ w)/P₁`, `y = (w − w₀)/P₁`.
pub fn xy_chart(frame: &RCFrame, p: &SJPoint) -> XYPoint {
    let w = p.w();
    let p1 = frame.p1(w);
    let x = (p.z - frame.eta0 + frame.eta0.conj() * w) / p1;
    let y = (w - frame.base.w()) / p1;
    // |y| < 1 whenever |w| < 1 (y is a disk automorphism of w)
    XYPoint {
        x,
        y: DiskPoint::new(y).unwrap_or_else(|_| DiskPoint::new(y * (1.0 - f64::EPSILON) / y.norm()).unwrap()),
    }
}

/// Balanced metric written in the `(x, y)` chart:
///
/// ```text
/// 2k dy dȳ/(1 − |y|²)² + μP₀ ℬ ℬ̄/(1 − |y|²),   ℬ = dx + η̄(x, y) dy,
/// η(x, y) = (x + x̄ y)/(1 − |y|²)
/// ```
///
/// i.e. the `(z, w)` expression with `μ` replaced by `μP₀`.
pub fn xy_metric(frame: &RCFrame, xy: &XYPoint) -> HermitianMatrix2 {
    let yv = xy.y.value();
    let py = 1.0 - yv.norm_sqr();
    let e = (xy.x + xy.x.conj() * yv) / py;
    let m = frame.params.mu() * frame.p0;
    HermitianMatrix2::new(m / py, e * (m / py), 2.0 * frame.params.k() / (py * py) + m * e.norm_sqr() / py)
}

/// Invariant measure density in the `(x, y)` chart, `μP₀/(1 − |y|²)³`.
pub fn xy_measure_density(frame: &RCFrame, xy: &XYPoint) -> f64 {
    frame.params.mu() * frame.p0 / (1.0 - xy.y.value().norm_sqr()).powi(3)
}

/// Diagonal exponent `F` evaluated at the point with chart coordinates
/// `(x, y)`.
pub fn xy_f_exponent(xy: &XYPoint, frame: &RCFrame) -> Result<f64> {
    let p = xy_to_sj(frame, xy.x, xy.y.value())?;
    Ok(f_exponent_diag(&p))
}

/// Term-by-term expansion of `2(1 − |y|²)|Q|² F(x, y)` as a polynomial in
/// `(x, y)`, divided back to `F`. Kept as a diagnostic against
/// [`xy_f_exponent`]; the two are not expected to agree.
pub fn xy_f_exponent_expanded(xy: &XYPoint, frame: &RCFrame) -> f64 {
    let (x, y) = (xy.x, xy.y.value());
    let (z0, w0) = (frame.base.z, frame.base.w());
    let (eta0, p0) = (frame.eta0, frame.p0);
    let y2 = y.norm_sqr();
    let cc2 = |v: C64| 2.0 * v.re;
    let x1 = z0.conj() * z0.conj() - w0.conj() * eta0 * x.conj() * (2.0 * p0);
    let mut total = 0.0;
    total += y2 * y2 * cc2(w0 * eta0.conj() * z0.conj());
    total += y2 * cc2(y * x1);
    total += p0 * cc2(w0.conj() * x.conj() * x.conj() * y * y);
    let inner = -x1 + x.conj() * p0 * (w0.conj() * x * 2.0 + x.conj() * (1.0 + w0.norm_sqr()));
    total += cc2(y * inner);
    total += y2 * (z0.norm_sqr() - cc2(eta0 * (z0.conj() + x.conj() * p0)));
    total += cc2(eta0 + x * (c64(1.0, 0.0) + w0));
    let q = c64(1.0, 0.0) + w0.conj() * y;
    total / (2.0 * (1.0 - y2) * q.norm_sqr())
}

/// Pullback `Jᵀ h(ψ(v)) J̄` of a hermitian form through a holomorphic map
/// with Jacobian `J[i][j] = ∂ψ_i/∂v_j`.
pub fn pullback(h: &HermitianMatrix2, jac: &Mat2) -> Mat2 {
    jac.transpose() * h.to_mat2() * jac.conj()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::balanced_metric;
    use crate::kernels::f_exponent_diag;
    use crate::sampling::{random_point, seeded};

    fn params(k: f64, mu: f64) -> ModelParams {
        ModelParams::new(k, mu).unwrap()
    }

    fn pt(z: C64, w: C64) -> SJPoint {
        SJPoint::new(z, w).unwrap()
    }

    #[test]
    fn disk_forward_examples() {
        let w0 = DiskPoint::new(c64(0.3, -0.2)).unwrap();
        let f = DiskRCFrame::new(w0, 1.0);
        assert!(disk_rc_forward(&f, w0).norm() < 1e-16);
        let id = DiskRCFrame::new(DiskPoint::ORIGIN, 2.0);
        let w = DiskPoint::new(c64(0.4, 0.1)).unwrap();
        assert_eq!(disk_rc_forward(&id, w), w.value());
        let f = DiskRCFrame::new(DiskPoint::new(c64(0.5, 0.0)).unwrap(), 1.0);
        assert!((disk_rc_forward(&f, DiskPoint::ORIGIN) - (-0.375)).norm() < 1e-15);
        assert!((disk_rc_inverse(&f, c64(-0.375, 0.0)).unwrap().value()).norm() < 1e-15);
        assert_eq!(disk_rc_inverse(&f, c64(0.0, 0.0)).unwrap(), f.base());
    }

    #[test]
    fn disk_round_trip_and_oracle() {
        let mut rng = seeded(21);
        for _ in 0..100 {
            let w0 = random_point(&mut rng, 0.0, 0.9).w;
            let w = random_point(&mut rng, 0.0, 0.9).w;
            let f = DiskRCFrame::new(w0, 1.3);
            let back = disk_rc_inverse(&f, disk_rc_forward(&f, w)).unwrap();
            assert!((back.value() - w.value()).norm() < 1e-12);
            let oracle = disk_rc_numeric_oracle(&f, w, 1e-5).unwrap();
            let closed = disk_rc_forward(&f, w);
            assert!((oracle - closed).norm() < 1e-6 * closed.norm().max(1.0));
            assert!(disk_rc_derivative(&f, w).norm() > 0.0);
        }
    }

    #[test]
    fn forward_examples() {
        let base = pt(c64(0.7, -0.2), c64(-0.1, 0.4));
        let f = RCFrame::new(base, params(1.5, 2.0));
        let o = rc_forward(&f, &base);
        assert!(o.w1.norm() < 1e-15 && o.w2.norm() < 1e-15);
        let f0 = RCFrame::new(SJPoint::ORIGIN, params(1.0, 1.0));
        let q = rc_forward(&f0, &pt(c64(1.0, 0.0), c64(0.0, 0.0)));
        assert!((q.w1 - 1.0).norm() < 1e-15);
        assert!((q.w2 - 0.25).norm() < 1e-15);
        let back = rc_inverse(&f0, &RCPoint { w1: c64(1.0, 0.0), w2: c64(0.25, 0.0) }).unwrap();
        assert!((back.z - 1.0).norm() < 1e-15 && back.w().norm() < 1e-15);
        assert_eq!(rc_inverse(&f, &RCPoint { w1: c64(0.0, 0.0), w2: c64(0.0, 0.0) }).unwrap().w(), base.w());
    }

    #[test]
    fn oracle_at_base_vanishes() {
        let base = pt(c64(-0.4, 0.9), c64(0.3, 0.3));
        let f = RCFrame::new(base, params(1.2, 0.8));
        let o = rc_numeric_oracle(&f, &base).unwrap();
        assert!(o.w1.norm() < 1e-8 && o.w2.norm() < 1e-8);
    }

    #[test]
    fn oracle_at_origin_base_has_quadratic_shape() {
        let pr = params(1.0, 1.0);
        let f = RCFrame::new(SJPoint::ORIGIN, pr);
        for zr in [-1.0, 0.0, 0.5] {
            for wr in [-0.5, 0.0, 0.3] {
                let p = pt(c64(zr, 0.5 * zr), c64(wr, -0.2));
                let o = rc_numeric_oracle(&f, &p).unwrap();
                assert!((o.w1 - p.z).norm() < 1e-6);
                assert!((o.w2 - (p.w() + p.z * p.z * 0.25)).norm() < 1e-6);
            }
        }
    }

    #[test]
    fn jacobian_det_examples() {
        let base = pt(c64(0.0, 0.0), c64(0.5, 0.0));
        let f = RCFrame::new(base, params(1.0, 1.0));
        assert_eq!(rc_jacobian_det(&f, &base), c64(1.0, 0.0));
        let d = rc_jacobian_det(&f, &pt(c64(1.0, 0.0), c64(0.0, 0.0)));
        assert!((d - 0.421875).norm() < 1e-15);
    }

    #[test]
    fn chart_examples() {
        let base = pt(c64(0.3, 0.6), c64(-0.5, 0.2));
        let f = RCFrame::new(base, params(1.0, 1.0));
        let xy = xy_chart(&f, &base);
        assert!(xy.x.norm() < 1e-15 && xy.y.value().norm() < 1e-15);
        let f0 = RCFrame::new(SJPoint::ORIGIN, params(2.0, 3.0));
        let p = pt(c64(1.5, -2.0), c64(0.1, 0.7));
        let xy = xy_chart(&f0, &p);
        assert_eq!((xy.x, xy.y.value()), (p.z, p.w()));
    }

    #[test]
    fn xy_metric_and_measure_examples() {
        let f0 = RCFrame::new(SJPoint::ORIGIN, params(1.0, 2.0));
        let origin = XYPoint::new(c64(0.0, 0.0), c64(0.0, 0.0)).unwrap();
        assert_eq!(xy_metric(&f0, &origin), HermitianMatrix2::new(2.0, c64(0.0, 0.0), 2.0));
        let f1 = RCFrame::new(SJPoint::ORIGIN, params(1.0, 1.0));
        let a = XYPoint::new(c64(2.0, -1.0), c64(0.0, 0.0)).unwrap();
        assert_eq!(xy_measure_density(&f1, &a), 1.0);
        let b = XYPoint::new(c64(0.3, 0.0), c64(0.5, 0.0)).unwrap();
        assert!((xy_measure_density(&f0, &b) - 4.740_740_740_740_74).abs() < 1e-12);
        // at base (0,0) the chart is the identity, so the form matches h itself
        let q = pt(c64(0.4, -0.9), c64(0.2, 0.5));
        let xy = xy_chart(&f0, &q);
        let d = xy_metric(&f0, &xy) - balanced_metric(&q, f0.params());
        assert!(d.max_abs() < 1e-13);
    }

    #[test]
    fn f_exponent_in_chart() {
        let f0 = RCFrame::new(SJPoint::ORIGIN, params(1.0, 1.0));
        let o = XYPoint::new(c64(0.0, 0.0), c64(0.0, 0.0)).unwrap();
        assert_eq!(xy_f_exponent(&o, &f0).unwrap(), 0.0);
        let xy = XYPoint::new(c64(0.6, -0.3), c64(0.2, 0.4)).unwrap();
        let p = pt(xy.x, xy.y.value());
        assert!((xy_f_exponent(&xy, &f0).unwrap() - f_exponent_diag(&p)).abs() < 1e-14);
    }

    #[test]
    fn xy_round_trip_through_rc() {
        let mut rng = seeded(8);
        for _ in 0..100 {
            let base = random_point(&mut rng, 2.0, 0.8);
            let f = RCFrame::new(base, params(1.4, 2.2));
            let p = random_point(&mut rng, 2.0, 0.8);
            let q = rc_forward(&f, &p);
            let (x, y) = rc_to_xy(&f, &q);
            let back = xy_to_rc(&f, x, y);
            assert!((back.w1 - q.w1).norm() < 1e-12 && (back.w2 - q.w2).norm() < 1e-12);
        }
    }

    #[test]
    fn rc_inverse_rejects_outside_image() {
        let f = RCFrame::new(SJPoint::ORIGIN, params(1.0, 1.0));
        let r = rc_inverse(&f, &RCPoint { w1: c64(0.0, 0.0), w2: c64(2.0, 0.0) });
        assert!(matches!(r, Err(Error::Domain(_))));
    }
}
