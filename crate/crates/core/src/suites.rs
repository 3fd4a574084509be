//! Verification suites: every closed form checked against an independent
//! oracle on seeded random configurations, collected into a report.

use std::time::Instant;

use serde::Serialize;

use crate::domain::{c64, rel_diff, rel_diff_c, rel_diff_mat, DiskPoint, Mat2, ModelParams, SJPoint, C64};
use crate::error::{Error, Result};
use crate::fd::{self, ScalarField, DEFAULT_STEP};
use crate::geometry::{
    balanced_metric, contract, inverse_metric, kahler_potential, laplace_beltrami, ln_volume_density, ricci_form,
    scalar_curvature, tilde_form, tilde_form_from_ricci, tilde_potential, volume_density,
};
use crate::group::{induced_rc_action, jacobi_act, rc_chart_act};
use crate::kernels::{
    diastasis, normalized_kernel, normalized_kernel_direct, siegel_kernel, siegel_kernel_series, sj_basis,
    sj_kernel, sj_kernel_series, BasisIndex,
};
use crate::quad::{estimate, gram_matrix, reproducing_check, McConfig, McEstimate};
use crate::repcoords::{
    disk_rc_forward, disk_rc_inverse, disk_rc_numeric_oracle, pullback, rc_forward, rc_inverse, rc_jacobian_det,
    rc_numeric_oracle, xy_chart, xy_measure_density, xy_metric, xy_to_sj, DiskRCFrame, RCFrame, XYPoint,
};
use crate::sampling::{random_action_pair, random_in_disk, random_point, seeded, SeededRng};

/// Named verification suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    MetricFd,
    Invariance,
    Curvature,
    RcRoundtrip,
    RcOracle,
    ChartGeometry,
    KernelSeries,
    Orthonormality,
    Reproducing,
    All,
}

impl Suite {
    /// Every concrete suite, in the order `all` runs them.
    pub const EACH: [Suite; 9] = [
        Suite::MetricFd,
        Suite::Invariance,
        Suite::Curvature,
        Suite::RcRoundtrip,
        Suite::RcOracle,
        Suite::ChartGeometry,
        Suite::KernelSeries,
        Suite::Orthonormality,
        Suite::Reproducing,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::MetricFd => "metric-fd",
            Suite::Invariance => "invariance",
            Suite::Curvature => "curvature",
            Suite::RcRoundtrip => "rc-roundtrip",
            Suite::RcOracle => "rc-oracle",
            Suite::ChartGeometry => "chart-geometry",
            Suite::KernelSeries => "kernel-series",
            Suite::Orthonormality => "orthonormality",
            Suite::Reproducing => "reproducing",
            Suite::All => "all",
        }
    }

    pub fn parse(s: &str) -> Result<Suite> {
        Suite::EACH
            .iter()
            .chain(std::iter::once(&Suite::All))
            .copied()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown suite '{s}'")))
    }

    /// Seed offset so that suites draw independent configurations.
    fn salt(self) -> u64 {
        (Suite::EACH.iter().position(|&x| x == self).unwrap_or(0) as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
    }
}

/// How a residual is compared against its tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    /// Relative residual at most the tolerance; overridden by `tol_rel`.
    Rel(f64),
    /// Absolute residual at most the tolerance; overridden by `tol_abs`.
    Abs(f64),
    /// Monte Carlo deviation in standard errors.
    Sigma(f64),
    /// Exact count of failures, tolerance 0.
    Count,
    /// Residual must stay strictly above the tolerance.
    Above(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub paper_ref: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReportParams {
    pub k: f64,
    pub mu: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub suite: String,
    pub params: ReportParams,
    pub seed: u64,
    pub samples: u64,
    pub checks: Vec<CheckRecord>,
    pub pass: bool,
    pub wall_time_s: f64,
}

impl CheckReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    pub params: ModelParams,
    pub seed: u64,
    /// Monte Carlo sample count, and the number of round trips in
    /// `rc-roundtrip`.
    pub samples: u64,
    pub workers: usize,
    pub tol_abs: Option<f64>,
    pub tol_rel: Option<f64>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            params: ModelParams::default(),
            seed: 42,
            samples: 100_000,
            workers: 1,
            tol_abs: None,
            tol_rel: None,
        }
    }
}

impl SuiteConfig {
    fn mc(&self) -> Result<McConfig> {
        McConfig::new(self.seed, self.samples, self.workers)
    }

    fn rng(&self, suite: Suite) -> SeededRng {
        seeded(self.seed.wrapping_add(suite.salt()))
    }

    fn record(&self, name: impl Into<String>, paper_ref: &str, residual: f64, bound: Bound) -> CheckRecord {
        let (tolerance, pass) = match bound {
            Bound::Rel(t) => {
                let t = self.tol_rel.unwrap_or(t);
                (t, residual <= t)
            }
            Bound::Abs(t) => {
                let t = self.tol_abs.unwrap_or(t);
                (t, residual <= t)
            }
            Bound::Sigma(t) => (t, residual <= t),
            Bound::Count => (0.0, residual == 0.0),
            Bound::Above(t) => (t, residual > t),
        };
        CheckRecord {
            name: name.into(),
            paper_ref: paper_ref.to_string(),
            residual,
            tolerance,
            pass,
        }
    }
}

/// Largest residual; NaN propagates so that a broken sample fails the check.
fn worst(acc: f64, r: f64) -> f64 {
    if acc.is_nan() || r.is_nan() {
        f64::NAN
    } else {
        acc.max(r)
    }
}

fn err_residual<T>(r: Result<T>, f: impl FnOnce(T) -> f64) -> f64 {
    r.map(f).unwrap_or(f64::NAN)
}

fn hessian(field: &dyn ScalarField, p: &SJPoint) -> Result<Mat2> {
    Ok(fd::wirtinger_hessian(field, p, DEFAULT_STEP)?.entries)
}

fn rel_vec(a: [C64; 2], b: [C64; 2]) -> f64 {
    let d = ((a[0] - b[0]).norm_sqr() + (a[1] - b[1]).norm_sqr()).sqrt();
    let s = (b[0].norm_sqr() + b[1].norm_sqr()).sqrt();
    if s == 0.0 {
        d
    } else {
        d / s
    }
}

fn abs_point(a: &SJPoint, b: &SJPoint) -> f64 {
    (a.z - b.z).norm().max((a.w() - b.w()).norm())
}

/// Run one suite (or all of them) and assemble the report.
pub fn run(suite: Suite, cfg: &SuiteConfig) -> Result<CheckReport> {
    let start = Instant::now();
    let checks = match suite {
        Suite::All => {
            let mut all = Vec::new();
            for s in Suite::EACH {
                for mut c in run_checks(s, cfg)? {
                    c.name = format!("{}/{}", s.name(), c.name);
                    all.push(c);
                }
            }
            all
        }
        s => run_checks(s, cfg)?,
    };
    Ok(CheckReport {
        suite: suite.name().to_string(),
        params: ReportParams {
            k: cfg.params.k(),
            mu: cfg.params.mu(),
        },
        seed: cfg.seed,
        samples: cfg.samples,
        pass: checks.iter().all(|c| c.pass),
        checks,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

/// Checks of a single concrete suite.
pub fn run_checks(suite: Suite, cfg: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    match suite {
        Suite::MetricFd => metric_fd(cfg, 100),
        Suite::Invariance => invariance(cfg, 50),
        Suite::Curvature => curvature(cfg, 50),
        Suite::RcRoundtrip => rc_roundtrip(cfg, cfg.samples),
        Suite::RcOracle => rc_oracle(cfg, 50),
        Suite::ChartGeometry => chart_geometry(cfg, 30, 10_000, 100),
        Suite::KernelSeries => kernel_series(cfg, 50, 10_000),
        Suite::Orthonormality => orthonormality(cfg, 3, 3),
        Suite::Reproducing => reproducing(cfg),
        Suite::All => Err(Error::Usage("'all' is not a single suite".into())),
    }
}

/// Balanced metric, its inverse and determinant against derivatives of the
/// Kähler potential, on `n` points with `|w| ≤ 0.9`, `|z| ≤ 3`.
pub fn metric_fd(cfg: &SuiteConfig, n: usize) -> Result<Vec<CheckRecord>> {
    let params = cfg.params;
    let mut rng = cfg.rng(Suite::MetricFd);
    let potential = move |p: &SJPoint| kahler_potential(p, params);
    let (mut r_metric, mut r_inv, mut r_det, mut r_vol) = (0.0, 0.0, 0.0, 0.0);
    let mut not_pd = 0.0;
    for _ in 0..n {
        let p = random_point(&mut rng, 3.0, 0.9);
        let h = balanced_metric(&p, params);
        r_metric = worst(r_metric, err_residual(hessian(&potential, &p), |hf| rel_diff_mat(&hf, &h.to_mat2())));
        let prod = h.to_mat2() * inverse_metric(&p, params).to_mat2();
        r_inv = worst(r_inv, prod.max_abs_diff(&Mat2::IDENTITY));
        r_det = worst(r_det, rel_diff(h.det(), volume_density(&p, params)));
        r_vol = worst(
            r_vol,
            err_residual(hessian(&potential, &p), |hf| rel_diff(hf.det().re, volume_density(&p, params))),
        );
        if !h.is_positive_definite() {
            not_pd += 1.0;
        }
    }
    Ok(vec![
        cfg.record("metric_from_potential", "h = ∂∂̄ ln K", r_metric, Bound::Rel(1e-5)),
        cfg.record("inverse_metric", "h·h⁻¹ = 1", r_inv, Bound::Rel(1e-10)),
        cfg.record("determinant", "det h = G = 2kμ/P³", r_det, Bound::Rel(1e-10)),
        cfg.record("determinant_from_potential", "det ∂∂̄ ln K = G", r_vol, Bound::Rel(1e-4)),
        cfg.record("positive_definite", "h > 0", not_pd, Bound::Count),
    ])
}

/// Test fields for the Laplace-Beltrami checks; all plurisubharmonic so the
/// Laplacian stays away from zero.
fn lb_fields() -> [(&'static str, fn(&SJPoint) -> f64); 3] {
    [
        ("z2_w2", |p| p.z.norm_sqr() + p.w().norm_sqr()),
        ("z4_w2", |p| p.z.norm_sqr().powi(2) + p.w().norm_sqr()),
        ("exp_z_zw2", |p| p.z.re.exp() + (p.z + p.w()).norm_sqr()),
    ]
}

/// Curvature identities on `n` points with `|w| ≤ 0.9`, `|z| ≤ 3`.
pub fn curvature(cfg: &SuiteConfig, n: usize) -> Result<Vec<CheckRecord>> {
    let params = cfg.params;
    let k = params.k();
    let mut rng = cfg.rng(Suite::Curvature);
    let ln_g = move |p: &SJPoint| ln_volume_density(p, params);
    let tilde = move |p: &SJPoint| tilde_potential(p, params);
    let s_expected = scalar_curvature(params);
    let (mut r_lap, mut r_scal, mut r_berg, mut r_tilde, mut r_tilde_ric) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for _ in 0..n {
        let p = random_point(&mut rng, 3.0, 0.9);
        r_lap = worst(r_lap, err_residual(laplace_beltrami(&ln_g, &p, params), |v| rel_diff(v, 1.5 / k)));
        let ric = ricci_form(&p);
        let s = contract(&inverse_metric(&p, params), &ric.to_mat2());
        r_scal = worst(r_scal, rel_diff_c(s, c64(s_expected, 0.0)));
        r_berg = worst(
            r_berg,
            err_residual(hessian(&ln_g, &p), |hf| rel_diff_mat(&hf, &ric.scale(-1.0).to_mat2())),
        );
        let tf = tilde_form(&p, params);
        r_tilde = worst(r_tilde, err_residual(hessian(&tilde, &p), |h| rel_diff_mat(&h, &tf.to_mat2())));
        r_tilde_ric = worst(
            r_tilde_ric,
            rel_diff_mat(&tf.to_mat2(), &tilde_form_from_ricci(&p, params).to_mat2()),
        );
    }
    Ok(vec![
        cfg.record("laplace_ln_g", "Δ ln G = 3/(2k)", r_lap, Bound::Rel(1e-5)),
        cfg.record("scalar_curvature", "tr(h⁻¹ Ric) = −3/(2k)", r_scal, Bound::Rel(1e-5)),
        cfg.record("bergman_equals_minus_ricci", "∂∂̄ ln G = −Ric", r_berg, Bound::Rel(1e-6)),
        cfg.record("tilde_form_from_potential", "ω̃ = ∂∂̄ 3[μF − (2k+1) ln P]", r_tilde, Bound::Rel(1e-5)),
        cfg.record("tilde_form_from_ricci", "ω̃ = 3h − Ric", r_tilde_ric, Bound::Rel(1e-10)),
    ])
}

/// Invariance under the Jacobi group on `n` (element, point) pairs with
/// both the point and its image inside `|w| ≤ 0.95`.
pub fn invariance(cfg: &SuiteConfig, n: usize) -> Result<Vec<CheckRecord>> {
    let params = cfg.params;
    let mut rng = cfg.rng(Suite::Invariance);
    let (mut r_metric, mut r_lb, mut r_dia, mut r_measure) = (0.0, 0.0, 0.0, 0.0);
    for _ in 0..n {
        let (e, p, gp) = random_action_pair(&mut rng, 2.0, 0.95);
        let act = |v: [C64; 2]| -> Result<[C64; 2]> {
            let q = jacobi_act(&e, &SJPoint::new(v[0], v[1])?)?;
            Ok([q.z, q.w()])
        };
        let at = [p.z, p.w()];

        r_metric = worst(
            r_metric,
            err_residual(fd::holomorphic_jacobian(&act, at, DEFAULT_STEP), |j| {
                let pulled = pullback(&balanced_metric(&gp, params), &j);
                rel_diff_mat(&pulled, &balanced_metric(&p, params).to_mat2())
            }),
        );

        for (_, f) in lb_fields() {
            let composed = move |q: &SJPoint| jacobi_act(&e, q).map(|g| f(&g)).unwrap_or(f64::NAN);
            let lhs = laplace_beltrami(&composed, &p, params);
            let rhs = laplace_beltrami(&f, &gp, params);
            let r = match (lhs, rhs) {
                (Ok(a), Ok(b)) => rel_diff(a, b),
                _ => f64::NAN,
            };
            r_lb = worst(r_lb, r);
        }

        let (_, q, gq) = {
            // second point moved by the same element
            let mut tries = 0;
            loop {
                let q = random_point(&mut rng, 2.0, 0.95);
                if let Ok(gq) = jacobi_act(&e, &q) {
                    if gq.w().norm() <= 0.95 || tries > 1000 {
                        break ((), q, gq);
                    }
                }
                tries += 1;
            }
        };
        r_dia = worst(r_dia, rel_diff(diastasis(&gp, &gq, params), diastasis(&p, &q, params)));

        r_measure = worst(
            r_measure,
            err_residual(fd::real_jacobian_det(&act, at, DEFAULT_STEP), |det| {
                rel_diff(volume_density(&gp, params) * det, volume_density(&p, params))
            }),
        );
    }
    Ok(vec![
        cfg.record("metric_pullback", "g*h = h", r_metric, Bound::Rel(1e-5)),
        cfg.record("laplace_beltrami_commutes", "Δ(f∘g) = (Δf)∘g", r_lb, Bound::Rel(1e-5)),
        cfg.record("diastasis", "D(gp, gq) = D(p, q)", r_dia, Bound::Rel(1e-5)),
        cfg.record("measure", "g*dν = dν", r_measure, Bound::Rel(1e-5)),
    ])
}

/// Round trips through the representative coordinates and the `(x, y)`
/// chart on `n` random (base, point) pairs.
pub fn rc_roundtrip(cfg: &SuiteConfig, n: u64) -> Result<Vec<CheckRecord>> {
    let params = cfg.params;
    let mut rng = cfg.rng(Suite::RcRoundtrip);
    let (mut r_rc, mut r_xy, mut r_disk) = (0.0, 0.0, 0.0);
    // Same domain as rc_oracle. Near |w| = 0.9 with |z| = 3 the inverse loses
    // about 1e-10 to cancellation in y = w₂ − λP₀x², which is conditioning of
    // the map rather than an error in it.
    for _ in 0..n {
        let base = random_point(&mut rng, 2.0, 0.8);
        let p = random_point(&mut rng, 2.0, 0.8);
        let frame = RCFrame::new(base, params);
        r_rc = worst(r_rc, err_residual(rc_inverse(&frame, &rc_forward(&frame, &p)), |b| abs_point(&b, &p)));
        let xy = xy_chart(&frame, &p);
        r_xy = worst(r_xy, err_residual(xy_to_sj(&frame, xy.x, xy.y.value()), |b| abs_point(&b, &p)));
        let df = DiskRCFrame::new(base.w, params.k());
        r_disk = worst(
            r_disk,
            err_residual(disk_rc_inverse(&df, disk_rc_forward(&df, p.w)), |b| (b.value() - p.w()).norm()),
        );
    }
    Ok(vec![
        cfg.record("rc_round_trip", "ψ⁻¹(ψ(ς)) = ς", r_rc, Bound::Abs(1e-10)),
        cfg.record("xy_round_trip", "(x, y) ↦ (z, w) inverts the chart", r_xy, Bound::Abs(1e-10)),
        cfg.record("disk_rc_round_trip", "w ↦ w₁ ↦ w", r_disk, Bound::Abs(1e-10)),
    ])
}

/// Closed-form representative coordinates and Jacobian against the
/// defining formula on `n` random (base, point) pairs.
pub fn rc_oracle(cfg: &SuiteConfig, n: usize) -> Result<Vec<CheckRecord>> {
    let params = cfg.params;
    let mut rng = cfg.rng(Suite::RcOracle);
    let (mut r_oracle, mut r_det, mut r_base, mut r_disk) = (0.0, 0.0, 0.0, 0.0);
    for _ in 0..n {
        let base = random_point(&mut rng, 2.0, 0.8);
        let p = random_point(&mut rng, 2.0, 0.8);
        let frame = RCFrame::new(base, params);
        let closed = rc_forward(&frame, &p);
        r_oracle = worst(
            r_oracle,
            err_residual(rc_numeric_oracle(&frame, &p), |o| rel_vec([o.w1, o.w2], [closed.w1, closed.w2])),
        );
        let map = |v: [C64; 2]| -> Result<[C64; 2]> {
            let q = rc_forward(&frame, &SJPoint::new(v[0], v[1])?);
            Ok([q.w1, q.w2])
        };
        r_det = worst(
            r_det,
            err_residual(fd::holomorphic_jacobian(&map, [p.z, p.w()], DEFAULT_STEP), |j| {
                rel_diff_c(j.det(), rc_jacobian_det(&frame, &p))
            }),
        );
        r_base = worst(r_base, (rc_jacobian_det(&frame, &base) - 1.0).norm());
        let df = DiskRCFrame::new(base.w, params.k());
        let closed = disk_rc_forward(&df, p.w);
        r_disk = worst(
            r_disk,
            err_residual(disk_rc_numeric_oracle(&df, p.w, 1e-5), |o| rel_diff_c(o, closed)),
        );
    }
    Ok(vec![
        cfg.record("rc_numeric_oracle", "w = h⁻¹ ∂̄ ln[K(ς,ζ̄)/K(ζ,ζ̄)]", r_oracle, Bound::Rel(1e-5)),
        cfg.record("rc_jacobian_det", "det ∂w/∂ς = (P₀/P₁)³", r_det, Bound::Rel(1e-5)),
        cfg.record("rc_jacobian_det_at_base", "det ∂w/∂ς (ς₀) = 1", r_base, Bound::Abs(1e-12)),
        cfg.record("disk_rc_numeric_oracle", "w₁ = P₀(w − w₀)/(1 − w̄₀w)", r_disk, Bound::Rel(1e-5)),
    ])
}

/// The `(x, y)` chart: metric and measure by pullback on `n_metric`
/// configurations, domain equivalence on `n_domain` samples, and the induced
/// group action on `n_action` configurations.
pub fn chart_geometry(cfg: &SuiteConfig, n_metric: usize, n_domain: usize, n_action: usize) -> Result<Vec<CheckRecord>> {
    let params = cfg.params;
    let mut rng = cfg.rng(Suite::ChartGeometry);
    let (mut r_metric, mut r_measure) = (0.0, 0.0);
    for _ in 0..n_metric {
        let base = random_point(&mut rng, 2.0, 0.8);
        let frame = RCFrame::new(base, params);
        let xy = XYPoint::new(random_in_disk(&mut rng, 2.0), random_in_disk(&mut rng, 0.8))?;
        let map = |v: [C64; 2]| -> Result<[C64; 2]> {
            let q = xy_to_sj(&frame, v[0], v[1])?;
            Ok([q.z, q.w()])
        };
        let at = [xy.x, xy.y.value()];
        let p = xy_to_sj(&frame, xy.x, xy.y.value())?;
        r_metric = worst(
            r_metric,
            err_residual(fd::holomorphic_jacobian(&map, at, DEFAULT_STEP), |j| {
                rel_diff_mat(&pullback(&balanced_metric(&p, params), &j), &xy_metric(&frame, &xy).to_mat2())
            }),
        );
        r_measure = worst(
            r_measure,
            err_residual(fd::real_jacobian_det(&map, at, DEFAULT_STEP), |det| {
                rel_diff(params.mu() / p.p_factor().powi(3) * det, xy_measure_density(&frame, &xy))
            }),
        );
    }

    let mut mismatches = 0.0;
    for _ in 0..n_domain {
        let w0 = random_in_disk(&mut rng, 0.95);
        let w = random_in_disk(&mut rng, 1.5);
        let y = (w - w0) / (c64(1.0, 0.0) - w0.conj() * w);
        if (y.norm_sqr() < 1.0) != (w.norm_sqr() < 1.0) {
            mismatches += 1.0;
        }
    }

    let (mut r_unimod, mut r_square) = (0.0, 0.0);
    for _ in 0..n_action {
        let base = random_point(&mut rng, 2.0, 0.8);
        let frame = RCFrame::new(base, params);
        let (e, p, gp) = random_action_pair(&mut rng, 2.0, 0.9);
        let act = induced_rc_action(&e, &base);
        r_unimod = worst(r_unimod, (act.unimodularity() - 1.0).abs());
        let before = xy_chart(&frame, &p);
        let after = xy_chart(&frame, &gp);
        r_square = worst(
            r_square,
            err_residual(rc_chart_act(&act, before.x, before.y), |(x1, y1): (C64, DiskPoint)| {
                (x1 - after.x).norm().max((y1.value() - after.y.value()).norm())
            }),
        );
    }

    Ok(vec![
        cfg.record("xy_metric_pullback", "ω(x, y) = ψ*ω(z, w)", r_metric, Bound::Rel(1e-4)),
        cfg.record("xy_measure", "dν(x, y) = μP₀ d²x d²y/(1 − |y|²)³", r_measure, Bound::Rel(1e-4)),
        cfg.record("domain_equivalence", "|y| < 1 ⇔ |w| < 1", mismatches, Bound::Count),
        cfg.record("induced_unimodular", "|r|² − |s|² = 1", r_unimod, Bound::Abs(1e-10)),
        cfg.record("induced_commuting_square", "xy(g·ς) = (r, s, u)·xy(ς)", r_square, Bound::Abs(1e-9)),
    ])
}

/// Series expansions of the kernels on `n_series` pairs with `|w| ≤ 0.5`,
/// `|z| ≤ 1`; symmetry and non-vanishing on `n_pairs` pairs with `|w| ≤ 0.9`,
/// `|z| ≤ 3`.
pub fn kernel_series(cfg: &SuiteConfig, n_series: usize, n_pairs: usize) -> Result<Vec<CheckRecord>> {
    let params = cfg.params;
    let mut rng = cfg.rng(Suite::KernelSeries);
    let (mut r_sj, mut r_disk) = (0.0, 0.0);
    for _ in 0..n_series {
        let p = random_point(&mut rng, 1.0, 0.5);
        let q = random_point(&mut rng, 1.0, 0.5);
        r_sj = worst(r_sj, (sj_kernel_series(&p, &q, params, 60, 60) - sj_kernel(&p, &q, params)).norm());
        r_disk = worst(
            r_disk,
            (siegel_kernel_series(p.w, q.w, params.k(), 60) - siegel_kernel(p.w, q.w, params.k())).norm(),
        );
    }
    let (mut r_herm, mut r_fact) = (0.0, 0.0);
    let mut min_modulus = f64::INFINITY;
    for _ in 0..n_pairs {
        let p = random_point(&mut rng, 3.0, 0.9);
        let q = random_point(&mut rng, 3.0, 0.9);
        let kpq = sj_kernel(&p, &q, params);
        r_herm = worst(r_herm, rel_diff_c(kpq, sj_kernel(&q, &p, params).conj()));
        r_fact = worst(
            r_fact,
            rel_diff_c(normalized_kernel(&p, &q, params), normalized_kernel_direct(&p, &q, params)),
        );
        let m = kpq.norm();
        min_modulus = if m.is_nan() { f64::NAN } else { min_modulus.min(m) };
    }
    Ok(vec![
        cfg.record("sj_kernel_series", "K = Σ f̃ₙₘ(ς) conj(f̃ₙₘ(ς′))", r_sj, Bound::Abs(1e-8)),
        cfg.record("siegel_kernel_series", "(1 − ww̄′)^(−2k) = Σ fₙ(w) conj(fₙ(w′))", r_disk, Bound::Abs(1e-8)),
        cfg.record("hermitian_symmetry", "K(ς, ς̄′) = conj K(ς′, ς̄)", r_herm, Bound::Rel(1e-12)),
        cfg.record("normalized_kernel_factorization", "κ = κ_k · exp(μ(F(ς,ς̄′) − (F(ς)+F(ς′))/2))", r_fact, Bound::Rel(1e-10)),
        cfg.record("lu_qi_keng_min_modulus", "K(ς, ς̄′) ≠ 0", min_modulus, Bound::Above(0.0)),
    ])
}

fn mc_record(cfg: &SuiteConfig, name: String, paper_ref: &str, e: &McEstimate, target: C64) -> CheckRecord {
    cfg.record(name, paper_ref, e.sigmas_from(target), Bound::Sigma(3.0))
}

/// Norm of the constant and the Gram matrix of `f̃ₙₘ`, `n ≤ nmax`, `m ≤ mmax`.
/// Residuals are in standard errors.
pub fn orthonormality(cfg: &SuiteConfig, nmax: u32, mmax: u32) -> Result<Vec<CheckRecord>> {
    let params = cfg.params;
    let mc = cfg.mc()?;
    let mut out = Vec::new();
    let norm = estimate(mc, params, |_| c64(1.0, 0.0))?;
    out.push(mc_record(cfg, "norm_constant".into(), "∫ ρ dν = Λπ²/(2k − 3/2) = 1", &norm, c64(1.0, 0.0)));
    let indices: Vec<BasisIndex> = (0..=nmax)
        .flat_map(|n| (0..=mmax).map(move |m| BasisIndex::new(n, m)))
        .collect();
    let gram = gram_matrix(&indices, params, mc)?;
    for (i, a) in indices.iter().enumerate() {
        for (j, b) in indices.iter().enumerate() {
            let target = if i == j { c64(1.0, 0.0) } else { c64(0.0, 0.0) };
            out.push(mc_record(
                cfg,
                format!("gram[({},{}),({},{})]", a.n, a.m, b.n, b.m),
                "(f̃ₙₘ, f̃ₙ′ₘ′) = δₙₙ′ δₘₘ′",
                &gram[i][j],
                target,
            ));
        }
    }
    Ok(out)
}

/// Reproducing-kernel probes `∫ K(p, ς̄′) f̃(ς′) ρ dν(ς′) = f̃(p)`.
pub fn reproducing(cfg: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    let params = cfg.params;
    let mc = cfg.mc()?;
    let probes = [
        (BasisIndex::new(0, 0), SJPoint::ORIGIN),
        (BasisIndex::new(1, 0), SJPoint::new(c64(0.5, 0.0), c64(0.0, 0.0))?),
        (BasisIndex::new(0, 1), SJPoint::new(c64(0.0, 0.0), c64(0.3, 0.0))?),
    ];
    let mut out = Vec::new();
    for (f, p) in probes {
        let e = reproducing_check(f, &p, params, mc)?;
        out.push(mc_record(
            cfg,
            format!("reproduce[({},{}) at {}]", f.n, f.m, p),
            "∫ K(ς, ς̄′) f(ς′) ρ dν(ς′) = f(ς)",
            &e,
            sj_basis(f, params, &p),
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> SuiteConfig {
        SuiteConfig {
            samples: 20_000,
            workers: 2,
            ..SuiteConfig::default()
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::EACH.iter().chain([Suite::All].iter()) {
            assert_eq!(Suite::parse(s.name()).unwrap(), *s);
        }
        assert!(matches!(Suite::parse("nope"), Err(Error::Usage(_))));
    }

    #[test]
    fn deterministic_suites_pass() {
        let cfg = quick();
        for s in [Suite::MetricFd, Suite::Curvature, Suite::RcOracle, Suite::KernelSeries] {
            let r = run(s, &cfg).unwrap();
            assert!(r.pass, "{}: {:?}", s.name(), r.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn tolerance_override_applies_to_matching_kind() {
        let cfg = SuiteConfig {
            tol_rel: Some(1e-30),
            ..quick()
        };
        let r = run(Suite::MetricFd, &cfg).unwrap();
        assert!(!r.pass);
        assert!(r.checks.iter().all(|c| c.name == "positive_definite" || c.tolerance == 1e-30));
    }

    #[test]
    fn report_json_key_order() {
        let r = run(Suite::RcRoundtrip, &SuiteConfig { samples: 10, ..quick() }).unwrap();
        let s = r.to_json().unwrap();
        let keys = ["\"suite\"", "\"params\"", "\"seed\"", "\"samples\"", "\"checks\"", "\"pass\"", "\"wall_time_s\""];
        let pos: Vec<usize> = keys.iter().map(|k| s.find(k).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
    }
}
