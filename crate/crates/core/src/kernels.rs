//! Reproducing kernels of the Siegel disk and the Siegel-Jacobi disk, their
//! orthonormal bases, and the two-point functions derived from them.
//!
//! Conventions: `K(p, q̄)` is holomorphic in `p` and antiholomorphic in `q`.
//! Complex powers use the principal branch; `1 − w·conj(w′)` has positive
//! real part whenever both points lie in the open disk.

use statrs::function::gamma::ln_gamma;

use crate::domain::{c64, DiskPoint, ModelParams, SJPoint, C64};

/// Index `(n, m)` of the basis function `f̃_{nkm}`: `n` is the degree in `z`
/// through `P_n`, `m` the power of `w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisIndex {
    pub n: u32,
    pub m: u32,
}

impl BasisIndex {
    pub const fn new(n: u32, m: u32) -> Self {
        Self { n, m }
    }
}

/// Principal logarithm of `1 − w·conj(w′)`.
#[inline]
fn ln_one_minus(w: C64, w2: C64) -> C64 {
    (c64(1.0, 0.0) - w * w2.conj()).ln()
}

/// Bergman kernel of the Siegel disk, `(1 − w·conj(w′))^(−2k)`.
pub fn siegel_kernel(w: DiskPoint, w2: DiskPoint, k: f64) -> C64 {
    (ln_one_minus(w.value(), w2.value()) * (-2.0 * k)).exp()
}

/// `Γ(n + a) / (n!·Γ(a))` in log space.
fn ln_pochhammer_ratio(n: u32, a: f64) -> f64 {
    let n = n as f64;
    ln_gamma(n + a) - ln_gamma(n + 1.0) - ln_gamma(a)
}

/// Orthonormal monomial `f_{nk}(w) = sqrt(Γ(n+2k)/(n!Γ(2k)))·wⁿ` of the
/// Siegel disk.
pub fn siegel_basis(n: u32, k: f64, w: DiskPoint) -> C64 {
    let coeff = (0.5 * ln_pochhammer_ratio(n, 2.0 * k)).exp();
    w.value().powu(n) * coeff
}

/// Truncated expansion `Σ_{n ≤ nmax} f_{nk}(w)·conj(f_{nk}(w′))`.
pub fn siegel_kernel_series(w: DiskPoint, w2: DiskPoint, k: f64, nmax: u32) -> C64 {
    (0..=nmax)
        .map(|n| siegel_basis(n, k, w) * siegel_basis(n, k, w2).conj())
        .sum()
}

/// `P_n(z, w) = n!·Σ_{p=0}^{⌊n/2⌋} (w/2)^p z^(n−2p) / (p!(n−2p)!)`,
/// the polynomials generated by `exp(z t + w t²/2)`.
pub fn pn_polynomial(n: u32, z: C64, w: C64) -> C64 {
    let ln_nfact = ln_gamma(n as f64 + 1.0);
    let mut acc = c64(0.0, 0.0);
    for p in 0..=n / 2 {
        let q = n - 2 * p;
        let coeff = (ln_nfact - ln_gamma(p as f64 + 1.0) - ln_gamma(q as f64 + 1.0)).exp();
        acc += (w * 0.5).powu(p) * z.powu(q) * coeff;
    }
    acc
}

/// `P_n(z, w)/sqrt(n!)` for `n = 0..=nmax`, by the three-term recurrence
/// `P_{n+1} = z P_n + n w P_{n−1}` rescaled so that large `n` stays finite.
pub fn scaled_pn_table(nmax: u32, z: C64, w: C64) -> Vec<C64> {
    let mut out = Vec::with_capacity(nmax as usize + 1);
    out.push(c64(1.0, 0.0));
    if nmax == 0 {
        return out;
    }
    out.push(z);
    for n in 1..nmax as usize {
        let nf = n as f64;
        let next = (z * out[n] + w * out[n - 1] * nf.sqrt()) / (nf + 1.0).sqrt();
        out.push(next);
    }
    out
}

/// Coefficient `a_{nkm}` of the Siegel-Jacobi basis,
/// `sqrt(Γ(m + 2k − 1/2) / (m!·Γ(2k − 1/2)·n!))`.
pub fn sj_basis_coefficient(idx: BasisIndex, params: ModelParams) -> f64 {
    let a = 2.0 * params.k() - 0.5;
    (0.5 * (ln_pochhammer_ratio(idx.m, a) - ln_gamma(idx.n as f64 + 1.0))).exp()
}

/// Orthonormal basis function `f̃_{nkm}(z, w) = a_{nkm}·w^m·P_n(√μ z, w)`.
pub fn sj_basis(idx: BasisIndex, params: ModelParams, p: &SJPoint) -> C64 {
    let zs = p.z * params.mu().sqrt();
    let w = p.w();
    let m_part = (0.5 * ln_pochhammer_ratio(idx.m, 2.0 * params.k() - 0.5)).exp();
    let pn = scaled_pn_table(idx.n, zs, w)[idx.n as usize];
    w.powu(idx.m) * pn * m_part
}

/// Evaluate every basis function with `n ≤ nmax`, `m ≤ mmax` at one point,
/// laid out as `values[n][m]`.
pub fn sj_basis_table(params: ModelParams, p: &SJPoint, nmax: u32, mmax: u32) -> Vec<Vec<C64>> {
    let zs = p.z * params.mu().sqrt();
    let w = p.w();
    let pn = scaled_pn_table(nmax, zs, w);
    let a = 2.0 * params.k() - 0.5;
    let mut wm = Vec::with_capacity(mmax as usize + 1);
    let mut pow = c64(1.0, 0.0);
    for m in 0..=mmax {
        wm.push(pow * (0.5 * ln_pochhammer_ratio(m, a)).exp());
        pow *= w;
    }
    pn.iter()
        .map(|&pn_val| wm.iter().map(|&wv| pn_val * wv).collect())
        .collect()
}

/// Exponent `F(ς, ς̄′) = (2 z conj(z′) + z² conj(w′) + conj(z′)² w) / (2(1 − w conj(w′)))`.
///
/// On the diagonal this is real and equals `(2|z|² + z² w̄ + z̄² w)/(2(1 − |w|²))`.
pub fn f_exponent(p: &SJPoint, q: &SJPoint) -> C64 {
    let (z, w) = (p.z, p.w());
    let (zq, wq) = (q.z.conj(), q.w().conj());
    (z * zq * 2.0 + z * z * wq + zq * zq * w) / ((c64(1.0, 0.0) - w * wq) * 2.0)
}

/// Diagonal exponent `F(ς) = F(ς, ς̄)`, returned as a real number.
pub fn f_exponent_diag(p: &SJPoint) -> f64 {
    let z = p.z;
    let w = p.w();
    (2.0 * z.norm_sqr() + 2.0 * (z * z * w.conj()).re) / (2.0 * p.p_factor())
}

/// `ln K(p, q̄) = −2k·Ln(1 − w conj(w′)) + μ F(p, q̄)`.
pub fn ln_sj_kernel(p: &SJPoint, q: &SJPoint, params: ModelParams) -> C64 {
    ln_one_minus(p.w(), q.w()) * (-2.0 * params.k()) + f_exponent(p, q) * params.mu()
}

/// Reproducing kernel of the Siegel-Jacobi disk,
/// `K(p, q̄) = (1 − w conj(w′))^(−2k)·exp(μ F(p, q̄))`.
pub fn sj_kernel(p: &SJPoint, q: &SJPoint, params: ModelParams) -> C64 {
    ln_sj_kernel(p, q, params).exp()
}

/// Diagonal kernel `K(p) > 0`.
pub fn sj_kernel_diag(p: &SJPoint, params: ModelParams) -> f64 {
    (-2.0 * params.k() * p.p_factor().ln() + params.mu() * f_exponent_diag(p)).exp()
}

/// Truncated expansion `Σ_{n ≤ nmax, m ≤ mmax} f̃_{nkm}(p)·conj(f̃_{nkm}(q))`.
pub fn sj_kernel_series(
    p: &SJPoint,
    q: &SJPoint,
    params: ModelParams,
    nmax: u32,
    mmax: u32,
) -> C64 {
    let bp = sj_basis_table(params, p, nmax, mmax);
    let bq = sj_basis_table(params, q, nmax, mmax);
    bp.iter()
        .zip(&bq)
        .flat_map(|(rp, rq)| rp.iter().zip(rq).map(|(a, b)| a * b.conj()))
        .sum()
}

/// Normalized kernel of the Siegel disk,
/// `κ_k(w, w̄′) = [(1 − |w|²)(1 − |w′|²)/(1 − w conj(w′))²]^k`.
pub fn siegel_normalized_kernel(w: DiskPoint, w2: DiskPoint, k: f64) -> C64 {
    let ln_ratio = c64((1.0 - w.value().norm_sqr()).ln() + (1.0 - w2.value().norm_sqr()).ln(), 0.0)
        - ln_one_minus(w.value(), w2.value()) * 2.0;
    (ln_ratio * k).exp()
}

/// Normalized kernel `κ(p, q̄) = K(p, q̄)/sqrt(K(p) K(q))`, evaluated in the
/// factorized form `κ_k(w, w̄′)·exp(μ[F(p, q̄) − (F(p) + F(q))/2])`.
pub fn normalized_kernel(p: &SJPoint, q: &SJPoint, params: ModelParams) -> C64 {
    let disk = siegel_normalized_kernel(p.w, q.w, params.k());
    let expo = f_exponent(p, q) - 0.5 * (f_exponent_diag(p) + f_exponent_diag(q));
    disk * (expo * params.mu()).exp()
}

/// Direct quotient `K(p, q̄)/sqrt(K(p) K(q))`; overflows for far-apart
/// points, which the factorized form avoids.
pub fn normalized_kernel_direct(p: &SJPoint, q: &SJPoint, params: ModelParams) -> C64 {
    sj_kernel(p, q, params) / (sj_kernel_diag(p, params) * sj_kernel_diag(q, params)).sqrt()
}

/// Calabi diastasis `D = −ln|κ|²` in closed form:
/// `2k ln(|1 − w w̄′|²/((1 − |w|²)(1 − |w′|²))) + μ[F(p) + F(q) − 2 Re F(p, q̄)]`.
pub fn diastasis(p: &SJPoint, q: &SJPoint, params: ModelParams) -> f64 {
    let (w, w2) = (p.w(), q.w());
    let num = (c64(1.0, 0.0) - w * w2.conj()).norm_sqr();
    let disk = 2.0 * params.k() * (num.ln() - p.p_factor().ln() - q.p_factor().ln());
    let heis = f_exponent_diag(p) + f_exponent_diag(q) - 2.0 * f_exponent(p, q).re;
    (disk + params.mu() * heis).max(0.0)
}

/// Berezin kernel `b = |κ|² = exp(−D) ∈ (0, 1]`.
pub fn berezin_kernel(p: &SJPoint, q: &SJPoint, params: ModelParams) -> f64 {
    (-diastasis(p, q, params)).exp()
}

/// Kernel angle `θ = arccos|κ| ∈ [0, π/2]`.
pub fn cayley_angle(p: &SJPoint, q: &SJPoint, params: ModelParams) -> f64 {
    let modulus = (-0.5 * diastasis(p, q, params)).exp();
    modulus.clamp(0.0, 1.0).acos()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(z: C64, w: C64) -> SJPoint {
        SJPoint::new(z, w).unwrap()
    }

    fn disk(w: f64) -> DiskPoint {
        DiskPoint::new(c64(w, 0.0)).unwrap()
    }

    fn params(k: f64, mu: f64) -> ModelParams {
        ModelParams::new(k, mu).unwrap()
    }

    fn factorial(n: u32) -> f64 {
        (1..=n).map(|i| i as f64).product()
    }

    #[test]
    fn siegel_kernel_examples() {
        assert!((siegel_kernel(DiskPoint::ORIGIN, DiskPoint::ORIGIN, 1.0) - 1.0).norm() < 1e-15);
        // Σ (n+1) 0.25ⁿ = 16/9
        let series: f64 = (0..200).map(|n| (n as f64 + 1.0) * 0.25f64.powi(n)).sum();
        let closed = siegel_kernel(disk(0.5), disk(0.5), 1.0);
        assert!((closed.re - series).abs() < 1e-12);
        assert!((closed.re - 16.0 / 9.0).abs() < 1e-12);
        let k = siegel_kernel(disk(0.3), disk(-0.3), 1.0);
        assert!((k.re - 1.09f64.powi(-2)).abs() < 1e-12);
        let s = siegel_kernel_series(disk(0.3), disk(-0.3), 1.0, 200);
        assert!((k - s).norm() < 1e-12);
    }

    #[test]
    fn siegel_basis_examples() {
        let w = DiskPoint::new(c64(0.3, -0.7)).unwrap();
        assert!((siegel_basis(0, 1.7, w) - 1.0).norm() < 1e-15);
        assert!((siegel_basis(1, 1.0, disk(0.5)).re - 2f64.sqrt() * 0.5).abs() < 1e-14);
        assert!((siegel_basis(2, 1.0, disk(0.5)).re - 3f64.sqrt() * 0.25).abs() < 1e-14);
        // log-space coefficient survives n = 200
        assert!(siegel_basis(200, 1.0, disk(0.5)).is_finite());
    }

    #[test]
    fn pn_examples() {
        let z = c64(0.7, -1.2);
        let w = c64(0.1, 0.4);
        assert!((pn_polynomial(0, z, w) - 1.0).norm() < 1e-15);
        assert!((pn_polynomial(1, z, w) - z).norm() < 1e-15);
        assert!((pn_polynomial(2, c64(1.0, 0.0), c64(1.0, 0.0)) - 2.0).norm() < 1e-14);
        assert!((pn_polynomial(2, z, w) - (z * z + w)).norm() < 1e-14);
    }

    #[test]
    fn recurrence_matches_explicit_sum() {
        let z = c64(0.9, 0.4);
        let w = c64(-0.3, 0.5);
        let table = scaled_pn_table(25, z, w);
        for n in 0..=25 {
            let explicit = pn_polynomial(n, z, w) / factorial(n).sqrt();
            assert!((table[n as usize] - explicit).norm() < 1e-10 * (1.0 + explicit.norm()));
        }
    }

    #[test]
    fn sj_basis_low_order() {
        let pr = params(1.0, 1.0);
        let p = pt(c64(0.4, 0.2), c64(0.5, 0.0));
        assert!((sj_basis(BasisIndex::new(0, 0), pr, &p) - 1.0).norm() < 1e-15);
        // f̃_{0k1} = sqrt(2k − 1/2)·w
        let v = sj_basis(BasisIndex::new(0, 1), pr, &p);
        assert!((v.re - 1.5f64.sqrt() * 0.5).abs() < 1e-14);
        let pr4 = params(1.0, 4.0);
        let q = pt(c64(1.0, 0.0), c64(0.2, 0.1));
        assert!((sj_basis(BasisIndex::new(1, 0), pr4, &q) - 2.0).norm() < 1e-14);
        let table = sj_basis_table(pr4, &q, 4, 4);
        for n in 0..=4 {
            for m in 0..=4 {
                let direct = sj_basis(BasisIndex::new(n, m), pr4, &q);
                assert!((table[n as usize][m as usize] - direct).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn f_exponent_examples() {
        let o = SJPoint::ORIGIN;
        assert_eq!(f_exponent(&o, &o), c64(0.0, 0.0));
        let p = pt(c64(1.0, 0.0), c64(0.0, 0.0));
        assert!((f_exponent(&p, &p) - 1.0).norm() < 1e-15);
        assert!((f_exponent_diag(&p) - 1.0).abs() < 1e-15);
        assert_eq!(f_exponent(&p, &o), c64(0.0, 0.0));
        let q = pt(c64(0.3, -1.1), c64(0.2, 0.6));
        assert!((f_exponent(&q, &q).re - f_exponent_diag(&q)).abs() < 1e-14);
        assert!(f_exponent(&q, &q).im.abs() < 1e-14);
    }

    #[test]
    fn sj_kernel_examples() {
        let pr = params(1.0, 1.0);
        let o = SJPoint::ORIGIN;
        assert!((sj_kernel(&o, &o, pr) - 1.0).norm() < 1e-15);
        let p = pt(c64(1.0, 0.0), c64(0.0, 0.0));
        assert!((sj_kernel(&p, &p, pr).re - std::f64::consts::E).abs() < 1e-14);
        assert!((sj_kernel(&p, &o, pr) - 1.0).norm() < 1e-15);
        assert!((sj_kernel_diag(&p, pr) - std::f64::consts::E).abs() < 1e-14);
    }

    #[test]
    fn sj_kernel_series_examples() {
        let pr = params(1.0, 1.0);
        let o = SJPoint::ORIGIN;
        for n in [0, 1, 5] {
            assert!((sj_kernel_series(&o, &o, pr, n, n) - 1.0).norm() < 1e-15);
        }
        let p = pt(c64(1.0, 0.0), c64(0.0, 0.0));
        let s = sj_kernel_series(&p, &p, pr, 40, 40);
        assert!((s.re - std::f64::consts::E).abs() < 1e-8);
        let q = pt(c64(0.0, 0.0), c64(0.5, 0.0));
        let s = sj_kernel_series(&q, &q, pr, 60, 60);
        assert!((s.re - 16.0 / 9.0).abs() < 1e-8);
    }

    #[test]
    fn two_point_examples() {
        let pr = params(1.0, 1.0);
        let p = pt(c64(1.0, 0.0), c64(0.0, 0.0));
        let o = SJPoint::ORIGIN;
        assert!((normalized_kernel(&p, &p, pr) - 1.0).norm() < 1e-14);
        let kap = normalized_kernel(&p, &o, pr);
        assert!((kap.re - (-0.5f64).exp()).abs() < 1e-14);
        assert!((berezin_kernel(&p, &o, pr) - (-1.0f64).exp()).abs() < 1e-14);
        assert!((diastasis(&p, &o, pr) - 1.0).abs() < 1e-14);
        assert_eq!(diastasis(&p, &p, pr), 0.0);
        assert!((cayley_angle(&p, &o, pr) - 0.919_106_657).abs() < 1e-9);
        assert!((cayley_angle(&p, &o, pr) - (-0.5f64).exp().acos()).abs() < 1e-14);
        assert_eq!(cayley_angle(&p, &p, pr), 0.0);
    }

    #[test]
    fn diastasis_far_apart_does_not_underflow() {
        let pr = params(2.0, 3.0);
        let p = pt(c64(40.0, 0.0), c64(0.99, 0.0));
        let q = pt(c64(-40.0, 5.0), c64(-0.99, 0.0));
        let d = diastasis(&p, &q, pr);
        assert!(d.is_finite() && d > 700.0);
        assert_eq!(berezin_kernel(&p, &q, pr), 0.0);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn point(max_z: f64, max_w: f64) -> impl Strategy<Value = SJPoint> {
            (-max_z..max_z, -max_z..max_z, 0.0..max_w, 0.0..std::f64::consts::TAU)
                .prop_map(|(x, y, r, t)| SJPoint::new(c64(x, y), C64::from_polar(r, t)).unwrap())
        }

        fn model() -> impl Strategy<Value = ModelParams> {
            (1.0f64..3.0, 0.5f64..4.0).prop_map(|(k, mu)| ModelParams::new(k, mu).unwrap())
        }

        proptest! {
            #[test]
            fn hermitian_symmetry(p in point(3.0, 0.9), q in point(3.0, 0.9), pr in model()) {
                let a = sj_kernel(&p, &q, pr);
                let b = sj_kernel(&q, &p, pr).conj();
                prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(1.0));
            }

            #[test]
            fn diagonal_positive(p in point(3.0, 0.95), pr in model()) {
                let d = sj_kernel(&p, &p, pr);
                prop_assert!(d.re > 0.0);
                prop_assert!(d.im.abs() <= 1e-12 * d.re);
            }

            #[test]
            fn factorized_matches_quotient(p in point(1.5, 0.8), q in point(1.5, 0.8), pr in model()) {
                let a = normalized_kernel(&p, &q, pr);
                let b = normalized_kernel_direct(&p, &q, pr);
                prop_assert!((a - b).norm() <= 1e-12 * b.norm().max(1e-300) + 1e-300);
            }

            #[test]
            fn two_point_ranges(p in point(3.0, 0.9), q in point(3.0, 0.9), pr in model()) {
                let kap = normalized_kernel(&p, &q, pr);
                prop_assert!(kap.norm() <= 1.0 + 1e-12);
                let b = berezin_kernel(&p, &q, pr);
                prop_assert!((0.0..=1.0).contains(&b));
                prop_assert!((b - kap.norm_sqr()).abs() <= 1e-12);
                let d = diastasis(&p, &q, pr);
                prop_assert!(d >= 0.0);
                prop_assert!((d - diastasis(&q, &p, pr)).abs() <= 1e-10 * d.max(1.0));
                prop_assert!((b - berezin_kernel(&q, &p, pr)).abs() <= 1e-12);
                let th = cayley_angle(&p, &q, pr);
                prop_assert!((0.0..=std::f64::consts::FRAC_PI_2).contains(&th));
            }

            #[test]
            fn diastasis_matches_log_berezin(p in point(1.0, 0.7), q in point(1.0, 0.7), pr in model()) {
                let direct = -normalized_kernel_direct(&p, &q, pr).norm_sqr().ln();
                let d = diastasis(&p, &q, pr);
                prop_assert!((d - direct).abs() <= 1e-9 * direct.abs().max(1.0));
            }
        }
    }
}
