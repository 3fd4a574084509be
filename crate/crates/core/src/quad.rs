//! Seeded Monte Carlo integration over the Siegel-Jacobi disk against
//! `ρ_{kμ} dν`.
//!
//! Sampling: `t = |w|²` is drawn from `Beta(1, β + 1)` with the angle uniform,
//! `z | w` exactly from the Gaussian defined by the exponent of `ρ`, and the
//! remaining factor is carried by the importance weight
//!
//! ```text
//! W = Λπ² P^(s − β)/(β + 1),   s = 2k − 5/2,   β = (s − 1)/2
//! ```
//!
//! so that `∫ f ρ dν = E[W f]` with finite variance for every `k > 3/4`.
//!
//! Samples are grouped in fixed-size chunks; chunk `i` draws from a ChaCha8
//! stream keyed by `(seed, i)`, and chunk statistics are merged in index
//! order. Results therefore depend on `(seed, samples)` only, not on the
//! number of workers.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::domain::{c64, DiskPoint, ModelParams, SJPoint, C64};
use crate::error::{Error, Result};
use crate::kernels::{f_exponent_diag, sj_basis, sj_basis_table, sj_kernel, BasisIndex};

/// Samples per deterministic chunk.
pub const CHUNK_SIZE: u64 = 8192;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub seed: u64,
    pub samples: u64,
    pub workers: usize,
}

impl McConfig {
    pub fn new(seed: u64, samples: u64, workers: usize) -> Result<Self> {
        let c = Self { seed, samples, workers };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples < 2 {
            return Err(Error::Config(format!("need at least 2 samples, got {}", self.samples)));
        }
        if self.workers == 0 {
            return Err(Error::Config("workers must be positive".into()));
        }
        Ok(())
    }

    fn chunks(&self) -> u64 {
        self.samples.div_ceil(CHUNK_SIZE)
    }

    fn chunk_len(&self, i: u64) -> u64 {
        (self.samples - i * CHUNK_SIZE).min(CHUNK_SIZE)
    }
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            samples: 100_000,
            workers: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub value: C64,
    pub std_error: f64,
    pub samples_used: u64,
}

impl McEstimate {
    /// `|value − target|` in units of the standard error.
    pub fn sigmas_from(&self, target: C64) -> f64 {
        let d = (self.value - target).norm();
        if self.std_error > 0.0 {
            d / self.std_error
        } else if d == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }

    pub fn within_sigmas(&self, target: C64, n_sigma: f64) -> bool {
        (self.value - target).norm() <= n_sigma * self.std_error
    }
}

/// `ρ_{kμ} = Λ(1 − |w|²)^{2k}·exp(−μF(ς))`.
pub fn weight_rho(p: &SJPoint, params: ModelParams) -> f64 {
    let pf = p.p_factor();
    params.weight_normalization() * pf.powf(2.0 * params.k()) * (-params.mu() * f_exponent_diag(p)).exp()
}

/// Point drawn by [`Sampler`] together with its importance weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedSample {
    pub point: SJPoint,
    pub weight: f64,
}

/// Per-parameter constants of the proposal.
#[derive(Debug, Clone, Copy)]
pub struct Sampler {
    mu: f64,
    inv_beta1: f64,
    weight_exp: f64,
    weight_scale: f64,
}

impl Sampler {
    pub fn new(params: ModelParams) -> Self {
        let s = 2.0 * params.k() - 2.5;
        let beta1 = 0.5 * (s + 1.0);
        Self {
            mu: params.mu(),
            inv_beta1: 1.0 / beta1,
            weight_exp: s - (beta1 - 1.0),
            weight_scale: params.weight_normalization() * PI * PI / beta1,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> WeightedSample {
        // P = 1 − |w|² = (1 − U)^{1/(β+1)}, 1 − U ∈ (0, 1]
        let pf = (1.0 - rng.random::<f64>()).powf(self.inv_beta1);
        let mut r = (1.0 - pf).sqrt();
        if r >= 1.0 {
            r = 1.0 - f64::EPSILON;
        }
        let w = C64::from_polar(r, TAU * rng.random::<f64>());
        // z | w ~ N(0, Σ), Σ = (1/2μ)[[1 − u, −v], [−v, 1 + u]]
        let (u, v) = (w.re, w.im);
        let s = 0.5 / self.mu;
        let l11 = (s * (1.0 - u)).sqrt();
        let l21 = -s * v / l11;
        let l22 = (s * (1.0 + u) - l21 * l21).max(0.0).sqrt();
        let g1: f64 = rng.sample(StandardNormal);
        let g2: f64 = rng.sample(StandardNormal);
        let z = c64(l11 * g1, l21 * g1 + l22 * g2);
        WeightedSample {
            point: SJPoint { z, w: DiskPoint::new(w).expect("r < 1") },
            weight: self.weight_scale * pf.powf(self.weight_exp),
        }
    }
}

fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Sequential stream of weighted samples in chunk order, identical to the
/// samples consumed by the parallel estimators.
pub struct SampleStream {
    config: McConfig,
    sampler: Sampler,
    chunk: u64,
    left_in_chunk: u64,
    rng: ChaCha8Rng,
}

impl Iterator for SampleStream {
    type Item = WeightedSample;

    fn next(&mut self) -> Option<WeightedSample> {
        if self.left_in_chunk == 0 {
            self.chunk += 1;
            if self.chunk >= self.config.chunks() {
                return None;
            }
            self.left_in_chunk = self.config.chunk_len(self.chunk);
            self.rng = chunk_rng(self.config.seed, self.chunk);
        }
        self.left_in_chunk -= 1;
        Some(self.sampler.sample(&mut self.rng))
    }
}

pub fn sample_sj(config: McConfig, params: ModelParams) -> Result<SampleStream> {
    config.validate()?;
    Ok(SampleStream {
        config,
        sampler: Sampler::new(params),
        chunk: 0,
        left_in_chunk: config.chunk_len(0),
        rng: chunk_rng(config.seed, 0),
    })
}

/// Running mean and sum of squared deviations of complex samples.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: u64,
    mean: C64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: C64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += (d.conj() * (x - self.mean)).re;
    }

    fn merge(self, o: Moments) -> Moments {
        if self.n == 0 {
            return o;
        }
        if o.n == 0 {
            return self;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        let (na, nb, nf) = (self.n as f64, o.n as f64, n as f64);
        Moments {
            n,
            mean: self.mean + d * (nb / nf),
            m2: self.m2 + o.m2 + d.norm_sqr() * na * nb / nf,
        }
    }

    fn estimate(&self) -> McEstimate {
        let n = self.n as f64;
        McEstimate {
            value: self.mean,
            std_error: (self.m2.max(0.0) / (n * (n - 1.0))).sqrt(),
            samples_used: self.n,
        }
    }
}

/// Estimate `∫ f_j ρ dν` for `outputs` integrands at once. `f` writes the
/// integrand values at a point into its buffer; the weight is applied here.
pub fn estimate_many<F>(config: McConfig, params: ModelParams, outputs: usize, f: F) -> Result<Vec<McEstimate>>
where
    F: Fn(&SJPoint, &mut [C64]) + Sync,
{
    config.validate()?;
    let sampler = Sampler::new(params);
    let run_chunk = |i: u64| {
        let mut rng = chunk_rng(config.seed, i);
        let mut acc = vec![Moments::default(); outputs];
        let mut buf = vec![c64(0.0, 0.0); outputs];
        for _ in 0..config.chunk_len(i) {
            let s = sampler.sample(&mut rng);
            f(&s.point, &mut buf);
            for (a, &v) in acc.iter_mut().zip(&buf) {
                a.push(v * s.weight);
            }
        }
        acc
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let per_chunk: Vec<Vec<Moments>> = pool.install(|| (0..config.chunks()).into_par_iter().map(run_chunk).collect());
    let mut total = vec![Moments::default(); outputs];
    for chunk in per_chunk {
        for (t, c) in total.iter_mut().zip(chunk) {
            *t = t.merge(c);
        }
    }
    Ok(total.iter().map(Moments::estimate).collect())
}

/// Estimate `∫ f ρ dν` for a single integrand.
pub fn estimate<F>(config: McConfig, params: ModelParams, f: F) -> Result<McEstimate>
where
    F: Fn(&SJPoint) -> C64 + Sync,
{
    Ok(estimate_many(config, params, 1, |p, out| out[0] = f(p))?[0])
}

/// `(f̃_f, f̃_g) = ∫ conj(f̃_f) f̃_g ρ dν`.
pub fn inner_product(f: BasisIndex, g: BasisIndex, params: ModelParams, config: McConfig) -> Result<McEstimate> {
    estimate(config, params, |p| sj_basis(f, params, p).conj() * sj_basis(g, params, p))
}

/// All inner products among `indices`, from one shared sample set,
/// as `gram[i][j] = (f̃_i, f̃_j)`.
pub fn gram_matrix(indices: &[BasisIndex], params: ModelParams, config: McConfig) -> Result<Vec<Vec<McEstimate>>> {
    let nmax = indices.iter().map(|i| i.n).max().unwrap_or(0);
    let mmax = indices.iter().map(|i| i.m).max().unwrap_or(0);
    let d = indices.len();
    let flat = estimate_many(config, params, d * d, |p, out| {
        let table = sj_basis_table(params, p, nmax, mmax);
        let vals: Vec<C64> = indices.iter().map(|i| table[i.n as usize][i.m as usize]).collect();
        for (i, fi) in vals.iter().enumerate() {
            for (j, fj) in vals.iter().enumerate() {
                out[i * d + j] = fi.conj() * fj;
            }
        }
    })?;
    Ok(flat.chunks(d).map(|r| r.to_vec()).collect())
}

/// Estimate of `∫ K(p, ς̄′) f̃(ς′) ρ(ς′) dν(ς′)`; the reproducing property
/// says this equals `f̃(p)`.
pub fn reproducing_check(f: BasisIndex, p: &SJPoint, params: ModelParams, config: McConfig) -> Result<McEstimate> {
    let p = *p;
    estimate(config, params, move |q| sj_kernel(&p, q, params) * sj_basis(f, params, q))
}
