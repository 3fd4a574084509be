//! Seeded random configurations for property checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domain::{c64, ModelParams, SJPoint, C64};
use crate::group::{jacobi_act, JacobiElement, SU11Element};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point of the closed disk of radius `radius`.
pub fn random_in_disk<R: Rng + ?Sized>(rng: &mut R, radius: f64) -> C64 {
    let r = radius * rng.random::<f64>().sqrt();
    let t = std::f64::consts::TAU * rng.random::<f64>();
    C64::from_polar(r, t)
}

/// Point with `|z| ≤ z_max` and `|w| ≤ w_max < 1`, uniform in each factor.
pub fn random_point<R: Rng + ?Sized>(rng: &mut R, z_max: f64, w_max: f64) -> SJPoint {
    debug_assert!(w_max < 1.0);
    let z = random_in_disk(rng, z_max);
    let w = random_in_disk(rng, w_max);
    SJPoint::new(z, w).expect("w_max < 1 keeps samples inside the disk")
}

/// Jacobi element with `t ∈ [0, t_max]`, uniform phases and `|α| ≤ alpha_max`.
pub fn random_jacobi<R: Rng + ?Sized>(rng: &mut R, t_max: f64, alpha_max: f64) -> JacobiElement {
    let t = t_max * rng.random::<f64>();
    let phi = std::f64::consts::TAU * rng.random::<f64>();
    let psi = std::f64::consts::TAU * rng.random::<f64>();
    let alpha = random_in_disk(rng, alpha_max);
    JacobiElement::new(SU11Element::from_angles(t, phi, psi), alpha)
}

/// Random `(e, p, e·p)` such that both `p` and `e·p` satisfy `|w| ≤ w_max`.
pub fn random_action_pair<R: Rng + ?Sized>(
    rng: &mut R,
    z_max: f64,
    w_max: f64,
) -> (JacobiElement, SJPoint, SJPoint) {
    loop {
        let e = random_jacobi(rng, 1.5, 1.5);
        let p = random_point(rng, z_max, w_max);
        if let Ok(q) = jacobi_act(&e, &p) {
            if q.w().norm() <= w_max {
                return (e, p, q);
            }
        }
    }
}

/// Random admissible parameters with `k ∈ [1, 3]`, `μ ∈ [0.5, 4]`.
pub fn random_params<R: Rng + ?Sized>(rng: &mut R) -> ModelParams {
    let k = 1.0 + 2.0 * rng.random::<f64>();
    let mu = 0.5 + 3.5 * rng.random::<f64>();
    ModelParams::new(k, mu).expect("ranges are admissible")
}

/// Deterministic Cartesian point, convenient in tests.
pub fn point(zr: f64, zi: f64, wr: f64, wi: f64) -> SJPoint {
    SJPoint::new(c64(zr, zi), c64(wr, wi)).expect("inside the disk")
}
