//! SU(1,1) and Jacobi-group actions on the Siegel disk and the Siegel-Jacobi
//! disk.
//!
//! `g = [[a, b], [b̄, ā]]` with `|a|² − |b|² = 1` acts by
//! `w ↦ (a w + b)/δ`, `δ = b̄ w + ā`; the pair `(g, α)` additionally sends
//! `z ↦ (z + α − ᾱ w)/δ`.

use crate::domain::{c64, DiskPoint, SJPoint, C64};
use crate::error::{Error, Result};
use crate::geometry::eta;

const UNIMODULAR_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SU11Element {
    a: C64,
    b: C64,
}

impl SU11Element {
    pub fn new(a: C64, b: C64) -> Result<Self> {
        let d = a.norm_sqr() - b.norm_sqr();
        if !((d - 1.0).abs() <= UNIMODULAR_TOL) {
            return Err(Error::Domain(format!(
                "|a|² − |b|² = {d} is not 1 for a = {a}, b = {b}"
            )));
        }
        Ok(Self { a, b })
    }

    pub const IDENTITY: SU11Element = SU11Element {
        a: c64(1.0, 0.0),
        b: c64(0.0, 0.0),
    };

    /// `a = cosh(t) e^{iφ}`, `b = sinh(t) e^{iψ}`; every element has this form.
    pub fn from_angles(t: f64, phi: f64, psi: f64) -> Self {
        Self {
            a: C64::from_polar(t.cosh(), phi),
            b: C64::from_polar(t.sinh(), psi),
        }
    }

    #[inline]
    pub fn a(&self) -> C64 {
        self.a
    }

    #[inline]
    pub fn b(&self) -> C64 {
        self.b
    }

    pub fn inverse(&self) -> Self {
        Self {
            a: self.a.conj(),
            b: -self.b,
        }
    }

    /// Matrix product `self · rhs`, so that acting with the product equals
    /// acting with `rhs` first. Rescales when rounding drift exceeds 1e-12.
    pub fn compose(&self, rhs: &SU11Element) -> Self {
        let a = self.a * rhs.a + self.b * rhs.b.conj();
        let b = self.a * rhs.b + self.b * rhs.a.conj();
        let d = a.norm_sqr() - b.norm_sqr();
        if (d - 1.0).abs() > UNIMODULAR_TOL {
            let s = d.sqrt().recip();
            return Self { a: a * s, b: b * s };
        }
        Self { a, b }
    }

    /// `δ = b̄ w + ā`.
    pub fn delta(&self, w: C64) -> C64 {
        self.b.conj() * w + self.a.conj()
    }
}

/// Linear fractional action `w ↦ (a w + b)/(b̄ w + ā)`.
pub fn su11_act(g: &SU11Element, w: DiskPoint) -> Result<DiskPoint> {
    let w = w.value();
    DiskPoint::new((g.a * w + g.b) / g.delta(w))
}

/// Element `(g, α)` of the Jacobi group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiElement {
    pub g: SU11Element,
    pub alpha: C64,
}

impl JacobiElement {
    pub const IDENTITY: JacobiElement = JacobiElement {
        g: SU11Element::IDENTITY,
        alpha: c64(0.0, 0.0),
    };

    pub fn new(g: SU11Element, alpha: C64) -> Self {
        Self { g, alpha }
    }
}

/// `(z, w) ↦ ((z + α − ᾱ w)/δ, (a w + b)/δ)`.
pub fn jacobi_act(e: &JacobiElement, p: &SJPoint) -> Result<SJPoint> {
    let w = p.w();
    let d = e.g.delta(w);
    let z1 = (p.z + e.alpha - e.alpha.conj() * w) / d;
    let w1 = (e.g.a * w + e.g.b) / d;
    SJPoint::new(z1, w1)
}

/// Inverse of [`jacobi_act`]:
/// `w = (ā w₁ − b)/(a − b̄ w₁)`,
/// `z = (z₁ − α a − ᾱ b + w₁(α b̄ + ᾱ ā))/(a − b̄ w₁)`.
pub fn jacobi_act_inverse(e: &JacobiElement, p1: &SJPoint) -> Result<SJPoint> {
    let (a, b, al) = (e.g.a, e.g.b, e.alpha);
    let w1 = p1.w();
    let den = a - b.conj() * w1;
    let w = (a.conj() * w1 - b) / den;
    let z = (p1.z - al * a - al.conj() * b + w1 * (al * b.conj() + al.conj() * a.conj())) / den;
    SJPoint::new(z, w)
}

/// `η` of the transformed point, `a(η + α) + b(η̄ + ᾱ)`.
pub fn eta_transform(e: &JacobiElement, p: &SJPoint) -> C64 {
    let n = eta(p) + e.alpha;
    e.g.a * n + e.g.b * n.conj()
}

/// `P′ = P/|δ|²` of the transformed point.
pub fn p_factor_transform(e: &JacobiElement, p: &SJPoint) -> f64 {
    p.p_factor() / e.g.delta(p.w()).norm_sqr()
}

/// Parameters `(r, s, u)` of the action induced on the `(x, y)` chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InducedRCAction {
    pub r: C64,
    pub s: C64,
    pub u: C64,
}

impl InducedRCAction {
    pub const IDENTITY: InducedRCAction = InducedRCAction {
        r: c64(1.0, 0.0),
        s: c64(0.0, 0.0),
        u: c64(0.0, 0.0),
    };

    /// `|r|² − |s|²`, equal to 1 up to rounding.
    pub fn unimodularity(&self) -> f64 {
        self.r.norm_sqr() - self.s.norm_sqr()
    }
}

/// Induced chart action for the chart anchored at `frame_base`; the same
/// base anchors the chart before and after the group element acts.
pub fn induced_rc_action(e: &JacobiElement, frame_base: &SJPoint) -> InducedRCAction {
    let (a, b, al) = (e.g.a, e.g.b, e.alpha);
    let (z0, w0) = (frame_base.z, frame_base.w());
    let p0 = frame_base.p_factor();
    let eta0 = eta(frame_base);
    let r = (a - b.conj() * w0 + w0.conj() * (b - w0 * a.conj())) / p0;
    let s = (b + w0 * (a - a.conj() - w0 * b.conj())) / p0;
    let u = (z0 + al - w0 * al.conj() - eta0 * (a.conj() + w0 * b.conj()) + eta0.conj() * (b + w0 * a)) / p0;
    InducedRCAction { r, s, u }
}

/// `x′ = (x + u − ū y)/(s̄ y + r̄)`, `y′ = (r y + s)/(s̄ y + r̄)`.
pub fn rc_chart_act(act: &InducedRCAction, x: C64, y: DiskPoint) -> Result<(C64, DiskPoint)> {
    let yv = y.value();
    let d = act.s.conj() * yv + act.r.conj();
    let x1 = (x + act.u - act.u.conj() * yv) / d;
    let y1 = DiskPoint::new((act.r * yv + act.s) / d)?;
    Ok((x1, y1))
}
