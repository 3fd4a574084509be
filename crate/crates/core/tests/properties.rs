use proptest::prelude::*;

use siegel_jacobi::geometry::{balanced_metric, inverse_metric, volume_density};
use siegel_jacobi::group::{jacobi_act, jacobi_act_inverse, JacobiElement, SU11Element};
use siegel_jacobi::kernels::{berezin_kernel, diastasis, sj_kernel};
use siegel_jacobi::repcoords::{rc_forward, rc_inverse, rc_jacobian_det, RCFrame};
use siegel_jacobi::{c64, C64, ModelParams, SJPoint};

fn point(z_max: f64, w_max: f64) -> impl Strategy<Value = SJPoint> {
    (0.0..z_max, 0.0..std::f64::consts::TAU, 0.0..w_max, 0.0..std::f64::consts::TAU)
        .prop_map(|(zr, za, wr, wa)| SJPoint::new(C64::from_polar(zr, za), C64::from_polar(wr, wa)).unwrap())
}

fn params() -> impl Strategy<Value = ModelParams> {
    (0.8..3.0f64, 0.2..5.0f64).prop_map(|(k, mu)| ModelParams::new(k, mu).unwrap())
}

fn element() -> impl Strategy<Value = JacobiElement> {
    (0.0..1.0f64, 0.0..6.3f64, 0.0..6.3f64, -1.0..1.0f64, -1.0..1.0f64)
        .prop_map(|(t, phi, psi, ar, ai)| JacobiElement::new(SU11Element::from_angles(t, phi, psi), c64(ar, ai)))
}

fn close(a: C64, b: C64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + a.norm().max(b.norm()))
}

proptest! {
    #[test]
    fn kernel_is_hermitian(p in point(2.0, 0.8), q in point(2.0, 0.8), pr in params()) {
        prop_assert!(close(sj_kernel(&q, &p, pr), sj_kernel(&p, &q, pr).conj(), 1e-12));
    }

    #[test]
    fn berezin_is_a_probability(p in point(2.0, 0.8), q in point(2.0, 0.8), pr in params()) {
        let b = berezin_kernel(&p, &q, pr);
        prop_assert!(b > 0.0 && b <= 1.0 + 1e-12);
        prop_assert!((berezin_kernel(&p, &p, pr) - 1.0).abs() < 1e-12);
        prop_assert!(diastasis(&p, &q, pr) >= -1e-12);
        prop_assert!((diastasis(&p, &q, pr) - diastasis(&q, &p, pr)).abs() < 1e-9);
    }

    #[test]
    fn berezin_is_invariant(e in element(), p in point(1.5, 0.6), q in point(1.5, 0.6), pr in params()) {
        let (Ok(ep), Ok(eq)) = (jacobi_act(&e, &p), jacobi_act(&e, &q)) else { return Ok(()); };
        prop_assert!((berezin_kernel(&ep, &eq, pr) - berezin_kernel(&p, &q, pr)).abs() < 1e-9);
    }

    #[test]
    fn action_inverts(e in element(), p in point(2.0, 0.7)) {
        let Ok(ep) = jacobi_act(&e, &p) else { return Ok(()); };
        let back = jacobi_act_inverse(&e, &ep).unwrap();
        prop_assert!(close(back.z, p.z, 1e-11) && close(back.w(), p.w(), 1e-11));
    }

    #[test]
    fn metric_is_positive_with_density_det(p in point(3.0, 0.9), pr in params()) {
        let h = balanced_metric(&p, pr);
        prop_assert!(h.is_positive_definite());
        let g = volume_density(&p, pr);
        prop_assert!((h.det() - g).abs() <= 1e-9 * g);
        let (h, inv) = (h.to_mat2(), inverse_metric(&p, pr).to_mat2());
        for i in 0..2 {
            for j in 0..2 {
                let e: C64 = (0..2).map(|l| h.get(i, l) * inv.get(l, j)).sum();
                let id = if i == j { 1.0 } else { 0.0 };
                prop_assert!((e - id).norm() < 1e-9, "h h⁻¹ entry ({}, {}) = {}", i, j, e);
            }
        }
    }

    #[test]
    fn representative_coordinates_round_trip(base in point(2.0, 0.8), p in point(2.0, 0.8), pr in params()) {
        let frame = RCFrame::new(base, pr);
        let back = rc_inverse(&frame, &rc_forward(&frame, &p)).unwrap();
        prop_assert!((back.z - p.z).norm() < 1e-9 && (back.w() - p.w()).norm() < 1e-9);
        prop_assert_eq!(rc_jacobian_det(&frame, &base), c64(1.0, 0.0));
        let f0 = rc_forward(&frame, &base);
        prop_assert!(f0.w1.norm() < 1e-12 && f0.w2.norm() < 1e-12);
    }
}
