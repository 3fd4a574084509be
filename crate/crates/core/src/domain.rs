//! Validated domain types shared by every other module.
//!
//! Points of the Siegel disk and the Siegel-Jacobi disk are checked once at
//! construction; downstream formulas assume `|w| < 1` and never re-validate.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Shorthand for a complex literal.
#[inline]
pub const fn c64(re: f64, im: f64) -> C64 {
    Complex64::new(re, im)
}

/// The pair `(k, μ)` that indexes the kernel family.
///
/// `k > 3/4` keeps the weight normalization `Λ = (4k − 3)/(2π²)` positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    k: f64,
    mu: f64,
}

impl ModelParams {
    pub fn new(k: f64, mu: f64) -> Result<Self> {
        if !k.is_finite() || k <= 0.75 {
            return Err(Error::Domain(format!("k must be > 3/4, got {k}")));
        }
        if !mu.is_finite() || mu <= 0.0 {
            return Err(Error::Domain(format!("mu must be > 0, got {mu}")));
        }
        Ok(Self { k, mu })
    }

    #[inline]
    pub fn k(&self) -> f64 {
        self.k
    }

    #[inline]
    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// `λ = μ/(4k)`, the quadratic coefficient of the representative map.
    #[inline]
    pub fn lambda(&self) -> f64 {
        self.mu / (4.0 * self.k)
    }

    /// `Λ = (4k − 3)/(2π²)`.
    #[inline]
    pub fn weight_normalization(&self) -> f64 {
        (4.0 * self.k - 3.0) / (2.0 * std::f64::consts::PI.powi(2))
    }
}

impl Default for ModelParams {
    fn default() -> Self {
        Self { k: 1.0, mu: 1.0 }
    }
}

/// A point of the open unit disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskPoint(C64);

impl DiskPoint {
    pub fn new(w: C64) -> Result<Self> {
        if !w.re.is_finite() || !w.im.is_finite() {
            return Err(Error::Domain(format!("w = {w} is not finite")));
        }
        if w.norm_sqr() >= 1.0 {
            return Err(Error::Domain(format!(
                "w = {w} is outside the open unit disk (|w| = {})",
                w.norm()
            )));
        }
        Ok(Self(w))
    }

    pub const ORIGIN: DiskPoint = DiskPoint(c64(0.0, 0.0));

    #[inline]
    pub fn value(&self) -> C64 {
        self.0
    }
}

impl fmt::Display for DiskPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A point `ς = (z, w)` of the Siegel-Jacobi disk `ℂ × D₁`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SJPoint {
    pub z: C64,
    pub w: DiskPoint,
}

impl SJPoint {
    pub const ORIGIN: SJPoint = SJPoint {
        z: c64(0.0, 0.0),
        w: DiskPoint::ORIGIN,
    };

    pub fn new(z: C64, w: C64) -> Result<Self> {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::Domain(format!("z = {z} is not finite")));
        }
        Ok(Self {
            z,
            w: DiskPoint::new(w)?,
        })
    }

    #[inline]
    pub fn w(&self) -> C64 {
        self.w.value()
    }

    /// `P = 1 − |w|²`.
    #[inline]
    pub fn p_factor(&self) -> f64 {
        p_factor(self.w)
    }

    /// The point as four real coordinates `(Re z, Im z, Re w, Im w)`.
    pub fn to_real(&self) -> [f64; 4] {
        let w = self.w();
        [self.z.re, self.z.im, w.re, w.im]
    }
}

impl fmt::Display for SJPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {})", self.z, self.w)
    }
}

/// Validating constructor for a Siegel-Jacobi point.
pub fn make_sj_point(z: C64, w: C64) -> Result<SJPoint> {
    SJPoint::new(z, w)
}

/// `P = 1 − |w|²`, in `(0, 1]` for every valid disk point.
#[inline]
pub fn p_factor(w: DiskPoint) -> f64 {
    1.0 - w.value().norm_sqr()
}

/// A 2×2 hermitian matrix in the `(z, w)` basis:
///
/// ```text
/// [ zz        zw ]
/// [ conj(zw)  ww ]
/// ```
///
/// Metrics are positive definite; curvature forms reuse the same layout
/// without that guarantee, so definiteness is a query rather than an
/// invariant of the type.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianMatrix2 {
    pub zz: f64,
    pub zw: C64,
    pub ww: f64,
}

impl HermitianMatrix2 {
    pub const fn new(zz: f64, zw: C64, ww: f64) -> Self {
        Self { zz, zw, ww }
    }

    /// Construct a matrix and require positive definiteness.
    pub fn positive_definite(zz: f64, zw: C64, ww: f64) -> Result<Self> {
        let m = Self::new(zz, zw, ww);
        if m.is_positive_definite() {
            Ok(m)
        } else {
            Err(Error::Domain(format!(
                "matrix [[{zz}, {zw}], [.., {ww}]] is not positive definite"
            )))
        }
    }

    pub fn det(&self) -> f64 {
        self.zz * self.ww - self.zw.norm_sqr()
    }

    pub fn trace(&self) -> f64 {
        self.zz + self.ww
    }

    pub fn is_positive_definite(&self) -> bool {
        self.zz > 0.0 && self.ww > 0.0 && self.det() > 0.0
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.zz * s, self.zw * s, self.ww * s)
    }

    pub fn to_mat2(&self) -> Mat2 {
        Mat2([
            [c64(self.zz, 0.0), self.zw],
            [self.zw.conj(), c64(self.ww, 0.0)],
        ])
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.zz.abs().max(self.zw.norm()).max(self.ww.abs())
    }
}

impl std::ops::Sub for HermitianMatrix2 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.zz - rhs.zz, self.zw - rhs.zw, self.ww - rhs.ww)
    }
}

impl std::ops::Add for HermitianMatrix2 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.zz + rhs.zz, self.zw + rhs.zw, self.ww + rhs.ww)
    }
}

/// A general complex 2×2 matrix, row-major. Used for Jacobians and FD
/// Hessians where hermiticity is not guaranteed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[C64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[c64(1.0, 0.0), c64(0.0, 0.0)], [c64(0.0, 0.0), c64(1.0, 0.0)]]);

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[i][j]
    }

    pub fn det(&self) -> C64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn inverse(&self) -> Option<Mat2> {
        let d = self.det();
        if d.norm() == 0.0 || !d.is_finite() {
            return None;
        }
        let [[a, b], [c, e]] = self.0;
        Some(Mat2([[e / d, -b / d], [-c / d, a / d]]))
    }

    pub fn transpose(&self) -> Mat2 {
        let [[a, b], [c, d]] = self.0;
        Mat2([[a, c], [b, d]])
    }

    pub fn conj(&self) -> Mat2 {
        Mat2(self.0.map(|row| row.map(|x| x.conj())))
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flat_map(|r| r.iter())
            .fold(0.0_f64, |m, x| m.max(x.norm()))
    }

    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        (*self - *other).max_abs()
    }

    /// Project onto the hermitian part `(M + M†)/2`.
    pub fn to_hermitian(&self) -> HermitianMatrix2 {
        let zw = (self.0[0][1] + self.0[1][0].conj()) * 0.5;
        HermitianMatrix2::new(self.0[0][0].re, zw, self.0[1][1].re)
    }
}

impl std::ops::Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let mut out = [[C64::new(0.0, 0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = self.0[i][0] * rhs.0[0][j] + self.0[i][1] * rhs.0[1][j];
            }
        }
        Mat2(out)
    }
}

impl std::ops::Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        let mut out = self.0;
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] -= rhs.0[i][j];
            }
        }
        Mat2(out)
    }
}

/// Absolute and relative tolerance pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Result<Self> {
        if !(abs > 0.0 && rel > 0.0) {
            return Err(Error::Domain(format!(
                "tolerances must be positive, got abs={abs} rel={rel}"
            )));
        }
        Ok(Self { abs, rel })
    }

    /// Algebraic round trips.
    pub const ALGEBRAIC: Tolerance = Tolerance { abs: 1e-10, rel: 1e-12 };
    /// Central differences with step 1e-4.
    pub const FINITE_DIFFERENCE: Tolerance = Tolerance { abs: 1e-10, rel: 1e-6 };

    /// `|a − b| ≤ abs + rel·max(|a|, |b|)`.
    pub fn close(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.abs + self.rel * a.abs().max(b.abs())
    }

    pub fn close_c(&self, a: C64, b: C64) -> bool {
        (a - b).norm() <= self.abs + self.rel * a.norm().max(b.norm())
    }
}

/// Relative difference `|a − b| / |b|`, falling back to the absolute
/// difference when `b` is exactly zero.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    if b == 0.0 {
        d
    } else {
        d / b.abs()
    }
}

pub fn rel_diff_c(a: C64, b: C64) -> f64 {
    let d = (a - b).norm();
    if b.norm() == 0.0 {
        d
    } else {
        d / b.norm()
    }
}

/// Matrix residual scaled by the reference matrix magnitude.
pub fn rel_diff_mat(a: &Mat2, reference: &Mat2) -> f64 {
    let scale = reference.max_abs();
    let d = a.max_abs_diff(reference);
    if scale == 0.0 {
        d
    } else {
        d / scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sj_point_construction() {
        let o = make_sj_point(c64(0.0, 0.0), c64(0.0, 0.0)).unwrap();
        assert_eq!(o, SJPoint::ORIGIN);
        assert!(make_sj_point(c64(1.0, 2.0), c64(0.5, 0.0)).is_ok());
        assert!(matches!(
            make_sj_point(c64(0.0, 0.0), c64(1.0, 0.0)),
            Err(Error::Domain(_))
        ));
        assert!(make_sj_point(c64(f64::NAN, 0.0), c64(0.0, 0.0)).is_err());
        assert!(make_sj_point(c64(0.0, 0.0), c64(0.0, f64::INFINITY)).is_err());
        assert!(make_sj_point(c64(0.0, 0.0), c64(0.8, 0.6000001)).is_err());
    }

    #[test]
    fn p_factor_examples() {
        assert_eq!(p_factor(DiskPoint::ORIGIN), 1.0);
        let p = p_factor(DiskPoint::new(c64(0.5, 0.0)).unwrap());
        assert!((p - 0.75).abs() < 1e-15);
        let p = p_factor(DiskPoint::new(c64(0.6, 0.0)).unwrap());
        assert!((p - 0.64).abs() < 1e-15);
    }

    #[test]
    fn params_validation() {
        assert!(ModelParams::new(0.75, 1.0).is_err());
        assert!(ModelParams::new(0.76, 1.0).is_ok());
        assert!(ModelParams::new(1.0, 0.0).is_err());
        assert!(ModelParams::new(1.0, -2.0).is_err());
        let p = ModelParams::new(1.0, 1.0).unwrap();
        assert!((p.weight_normalization() - 1.0 / (2.0 * std::f64::consts::PI.powi(2))).abs() < 1e-16);
        assert_eq!(p.lambda(), 0.25);
    }

    #[test]
    fn mat2_inverse() {
        let m = Mat2([[c64(2.0, 0.0), c64(0.5, 0.3)], [c64(0.5, -0.3), c64(3.0, 0.0)]]);
        let prod = m * m.inverse().unwrap();
        assert!(prod.max_abs_diff(&Mat2::IDENTITY) < 1e-15);
    }

    proptest::proptest! {
        #[test]
        fn p_factor_in_unit_interval(r in 0.0f64..0.999, t in 0.0f64..6.3) {
            let w = DiskPoint::new(C64::from_polar(r, t)).unwrap();
            let p = p_factor(w);
            proptest::prop_assert!(p > 0.0 && p <= 1.0);
            proptest::prop_assert_eq!(p == 1.0, r == 0.0);
        }
    }
}
