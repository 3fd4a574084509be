//! Finite-difference Wirtinger calculus on `ℂ²`.
//!
//! Everything here is an oracle for the closed forms elsewhere in the crate,
//! with one exception: [`crate::geometry::laplace_beltrami`] applies the
//! closed-form inverse metric to a Hessian of an arbitrary user field, and
//! that Hessian can only come from here.
//!
//! Wirtinger derivatives follow `∂/∂ζ = (∂/∂x − i∂/∂y)/2` and
//! `∂/∂ζ̄ = (∂/∂x + i∂/∂y)/2`.

use crate::domain::{c64, Mat2, SJPoint, C64};
use crate::error::{Error, Result};

/// Default central-difference step.
pub const DEFAULT_STEP: f64 = 1e-4;

/// A real-valued field on the Siegel-Jacobi disk.
pub trait ScalarField: Sync {
    fn eval(&self, p: &SJPoint) -> f64;
}

impl<F> ScalarField for F
where
    F: Fn(&SJPoint) -> f64 + Sync,
{
    fn eval(&self, p: &SJPoint) -> f64 {
        self(p)
    }
}

/// Mixed Wirtinger second derivatives `∂²f/∂ζ_i∂ζ̄_j`, `ζ = (z, w)`,
/// stored as `entries[i][j]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WirtingerHessian {
    pub entries: Mat2,
    pub step: f64,
}

impl WirtingerHessian {
    /// Hermitian part; for a real field the anti-hermitian part is FD noise.
    pub fn to_hermitian(&self) -> crate::domain::HermitianMatrix2 {
        self.entries.to_hermitian()
    }
}

fn check_step(step: f64, coords: &[f64]) -> Result<()> {
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::Step(format!("step must be positive and finite, got {step}")));
    }
    for &x in coords {
        if x + step == x || x - step == x {
            return Err(Error::Step(format!(
                "step {step} is below the resolution of coordinate {x}"
            )));
        }
    }
    Ok(())
}

fn check_stencil(p: &SJPoint, step: f64) -> Result<()> {
    let margin = 1.0 - p.w().norm();
    if margin <= 2.0 * step {
        return Err(Error::Domain(format!(
            "stencil of step {step} at w = {} leaves the unit disk",
            p.w()
        )));
    }
    Ok(())
}

fn shifted(base: [f64; 4], moves: &[(usize, f64)]) -> [f64; 4] {
    let mut x = base;
    for &(i, d) in moves {
        x[i] += d;
    }
    x
}

fn to_point(x: [f64; 4]) -> Result<SJPoint> {
    SJPoint::new(c64(x[0], x[1]), c64(x[2], x[3]))
}

/// Real 4×4 Hessian of `f` in `(Re z, Im z, Re w, Im w)` by central
/// differences.
pub fn real_hessian(field: &dyn ScalarField, p: &SJPoint, step: f64) -> Result<[[f64; 4]; 4]> {
    let x0 = p.to_real();
    check_step(step, &x0)?;
    check_stencil(p, step)?;
    let f = |moves: &[(usize, f64)]| -> Result<f64> { Ok(field.eval(&to_point(shifted(x0, moves))?)) };
    let f0 = field.eval(p);
    let h = step;
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        out[i][i] = (f(&[(i, h)])? - 2.0 * f0 + f(&[(i, -h)])?) / (h * h);
        for j in 0..i {
            let v = (f(&[(i, h), (j, h)])? - f(&[(i, h), (j, -h)])? - f(&[(i, -h), (j, h)])?
                + f(&[(i, -h), (j, -h)])?)
                / (4.0 * h * h);
            out[i][j] = v;
            out[j][i] = v;
        }
    }
    Ok(out)
}

/// Central-difference Wirtinger Hessian of a real field.
pub fn wirtinger_hessian(field: &dyn ScalarField, p: &SJPoint, step: f64) -> Result<WirtingerHessian> {
    let r = real_hessian(field, p, step)?;
    let mut entries = [[C64::new(0.0, 0.0); 2]; 2];
    for (a, row) in entries.iter_mut().enumerate() {
        for (b, cell) in row.iter_mut().enumerate() {
            let (xa, ya, xb, yb) = (2 * a, 2 * a + 1, 2 * b, 2 * b + 1);
            *cell = c64(r[xa][xb] + r[ya][yb], r[xa][yb] - r[ya][xb]) * 0.25;
        }
    }
    let out = WirtingerHessian {
        entries: Mat2(entries),
        step,
    };
    if entries.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::Step(format!("non-finite Hessian at {p}")));
    }
    Ok(out)
}

/// Partial derivatives of a complex function of `(ζ₁, ζ₂) ∈ ℂ²` along the
/// four real directions, by central differences.
fn real_partials<F>(f: &F, at: [C64; 2], step: f64) -> Result<[[C64; 2]; 2]>
where
    F: Fn([C64; 2]) -> Result<C64>,
{
    check_step(step, &[at[0].re, at[0].im, at[1].re, at[1].im])?;
    let mut out = [[C64::new(0.0, 0.0); 2]; 2];
    for (slot, dirs) in out.iter_mut().enumerate() {
        for (d, dir) in [c64(step, 0.0), c64(0.0, step)].into_iter().enumerate() {
            let mut plus = at;
            let mut minus = at;
            plus[slot] += dir;
            minus[slot] -= dir;
            dirs[d] = (f(plus)? - f(minus)?) / (2.0 * step);
        }
    }
    Ok(out)
}

/// `[∂f/∂ζ₁, ∂f/∂ζ₂]` for a complex-valued function on `ℂ²`.
pub fn wirtinger_d<F>(f: &F, at: [C64; 2], step: f64) -> Result<[C64; 2]>
where
    F: Fn([C64; 2]) -> Result<C64>,
{
    let d = real_partials(f, at, step)?;
    Ok(d.map(|[dx, dy]| (dx - C64::i() * dy) * 0.5))
}

/// `[∂f/∂ζ̄₁, ∂f/∂ζ̄₂]` for a complex-valued function on `ℂ²`.
pub fn wirtinger_dbar<F>(f: &F, at: [C64; 2], step: f64) -> Result<[C64; 2]>
where
    F: Fn([C64; 2]) -> Result<C64>,
{
    let d = real_partials(f, at, step)?;
    Ok(d.map(|[dx, dy]| (dx + C64::i() * dy) * 0.5))
}

/// Holomorphic Jacobian `J[i][j] = ∂F_i/∂ζ_j` of a map `ℂ² → ℂ²`.
pub fn holomorphic_jacobian<F>(map: &F, at: [C64; 2], step: f64) -> Result<Mat2>
where
    F: Fn([C64; 2]) -> Result<[C64; 2]>,
{
    let mut j = [[C64::new(0.0, 0.0); 2]; 2];
    for (i, row) in j.iter_mut().enumerate() {
        let comp = |x: [C64; 2]| -> Result<C64> { Ok(map(x)?[i]) };
        *row = wirtinger_d(&comp, at, step)?;
    }
    Ok(Mat2(j))
}

/// Determinant of the real 4×4 Jacobian of a map `ℂ² → ℂ²` in the
/// coordinates `(Re ζ₁, Im ζ₁, Re ζ₂, Im ζ₂)`.
pub fn real_jacobian_det<F>(map: &F, at: [C64; 2], step: f64) -> Result<f64>
where
    F: Fn([C64; 2]) -> Result<[C64; 2]>,
{
    check_step(step, &[at[0].re, at[0].im, at[1].re, at[1].im])?;
    let flat = |v: [C64; 2]| [v[0].re, v[0].im, v[1].re, v[1].im];
    let mut jac = [[0.0; 4]; 4];
    let dirs = [(0usize, c64(1.0, 0.0)), (0, c64(0.0, 1.0)), (1, c64(1.0, 0.0)), (1, c64(0.0, 1.0))];
    for (col, (slot, dir)) in dirs.into_iter().enumerate() {
        let mut plus = at;
        let mut minus = at;
        plus[slot] += dir * step;
        minus[slot] -= dir * step;
        let (fp, fm) = (flat(map(plus)?), flat(map(minus)?));
        for row in 0..4 {
            jac[row][col] = (fp[row] - fm[row]) / (2.0 * step);
        }
    }
    Ok(det4(jac))
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn det4(mut m: [[f64; 4]; 4]) -> f64 {
    let mut det = 1.0;
    for col in 0..4 {
        let pivot = (col..4)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .unwrap();
        if m[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= m[col][col];
        for row in col + 1..4 {
            let factor = m[row][col] / m[col][col];
            for k in col..4 {
                m[row][k] -= factor * m[col][k];
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(z: C64, w: C64) -> SJPoint {
        SJPoint::new(z, w).unwrap()
    }

    #[test]
    fn hessian_of_quadratics_is_exact() {
        let p = pt(c64(0.3, -0.2), c64(0.1, 0.4));
        let hz = wirtinger_hessian(&|q: &SJPoint| q.z.norm_sqr(), &p, 1e-3).unwrap();
        assert!((hz.entries.get(0, 0) - 1.0).norm() < 1e-9);
        assert!(hz.entries.get(0, 1).norm() < 1e-9);
        assert!(hz.entries.get(1, 1).norm() < 1e-9);
        let hw = wirtinger_hessian(&|q: &SJPoint| q.w().norm_sqr(), &p, 1e-3).unwrap();
        assert!((hw.entries.get(1, 1) - 1.0).norm() < 1e-9);
        assert!(hw.entries.get(0, 0).norm() < 1e-9);
        // Re(z w̄) = (z w̄ + z̄ w)/2 has ∂z∂w̄ = 1/2
        let hm = wirtinger_hessian(&|q: &SJPoint| (q.z * q.w().conj()).re, &p, 1e-3).unwrap();
        assert!((hm.entries.get(0, 1) - 0.5).norm() < 1e-9);
        assert!((hm.entries.get(1, 0) - 0.5).norm() < 1e-9);
    }

    #[test]
    fn stencil_and_step_errors() {
        let near_edge = pt(c64(0.0, 0.0), c64(0.9999, 0.0));
        let f = |q: &SJPoint| q.z.norm_sqr();
        assert!(matches!(wirtinger_hessian(&f, &near_edge, 1e-4), Err(Error::Domain(_))));
        let p = pt(c64(1e20, 0.0), c64(0.0, 0.0));
        assert!(matches!(wirtinger_hessian(&f, &p, 1e-4), Err(Error::Step(_))));
        assert!(matches!(wirtinger_hessian(&f, &SJPoint::ORIGIN, 0.0), Err(Error::Step(_))));
    }

    #[test]
    fn jacobians_of_linear_map() {
        let map = |v: [C64; 2]| -> Result<[C64; 2]> { Ok([v[0] * c64(2.0, 1.0) + v[1], v[1] * c64(0.0, 3.0)]) };
        let at = [c64(0.2, 0.1), c64(-0.3, 0.5)];
        let j = holomorphic_jacobian(&map, at, 1e-4).unwrap();
        assert!((j.det() - c64(2.0, 1.0) * c64(0.0, 3.0)).norm() < 1e-9);
        let d = real_jacobian_det(&map, at, 1e-4).unwrap();
        assert!((d - j.det().norm_sqr()).abs() < 1e-8);
    }

    #[test]
    fn dbar_of_antiholomorphic() {
        let f = |v: [C64; 2]| -> Result<C64> { Ok(v[0].conj() * v[0].conj() + v[1].conj()) };
        let d = wirtinger_dbar(&f, [c64(0.5, 0.5), c64(0.1, 0.0)], 1e-5).unwrap();
        assert!((d[0] - c64(1.0, -1.0)).norm() < 1e-9);
        assert!((d[1] - 1.0).norm() < 1e-9);
        let h = wirtinger_d(&f, [c64(0.5, 0.5), c64(0.1, 0.0)], 1e-5).unwrap();
        assert!(h[0].norm() < 1e-9 && h[1].norm() < 1e-9);
    }

    #[test]
    fn det4_matches_known() {
        let m = [[2.0, 0.0, 0.0, 1.0], [0.0, 3.0, 0.0, 0.0], [0.0, 0.0, 4.0, 0.0], [1.0, 0.0, 0.0, 5.0]];
        assert!((det4(m) - 3.0 * 4.0 * (10.0 - 1.0)).abs() < 1e-12);
    }
}
