//! Numerical Weierstrass representation.
//!
//! `X^λ(z) = Re ∫₀ᶻ (1 − h², i(1 + h²), 2h)·λ⁻²η dζ`, integrated with
//! panelwise Gauss–Legendre quadrature along straight segments. The
//! integrand is assembled from the entire combinations `η`, `hη`, `h²η`, so
//! the poles of `h` never enter. This module shares nothing with the closed
//! forms in [`crate::surface`] beyond the special functions, which makes it
//! usable as an oracle for them.

use std::f64::consts::PI;

use nalgebra::Vector3;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernel::ShapeParam;
use crate::surface::{weierstrass_data, SurfacePoint};

/// Maximum number of panel doublings before giving up.
pub const MAX_DOUBLINGS: u32 = 16;

/// Associated-family parameter `λ`, `|λ| = 1`. The deformation scales `η` by
/// `λ⁻²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssociatedParam {
    lambda: Complex64,
    mu: Complex64,
}

impl AssociatedParam {
    pub fn new(lambda: Complex64) -> Result<Self> {
        if lambda.norm().is_nan() || (lambda.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!(
                "associated parameter must have unit modulus, got |{lambda}| = {}",
                lambda.norm()
            )));
        }
        let inv = lambda.conj();
        Ok(Self {
            lambda,
            mu: inv * inv,
        })
    }

    pub fn identity() -> Self {
        Self {
            lambda: Complex64::new(1.0, 0.0),
            mu: Complex64::new(1.0, 0.0),
        }
    }

    /// `λ = e^{−iπ/4}`, i.e. `λ⁻² = i`.
    pub fn conjugate() -> Self {
        Self {
            lambda: Complex64::from_polar(1.0, -PI / 4.0),
            mu: Complex64::i(),
        }
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    /// `λ⁻²`
    pub fn multiplier(&self) -> Complex64 {
        self.mu
    }
}

/// Gauss–Legendre rule applied on equal panels of each path segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub panels: usize,
    pub order: usize,
    pub abs_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            panels: 8,
            order: 16,
            abs_tol: 1e-12,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.panels == 0 {
            return Err(Error::InvalidInput(
                "quadrature needs at least one panel".into(),
            ));
        }
        if !(4..=64).contains(&self.order) {
            return Err(Error::InvalidInput(format!(
                "Gauss-Legendre order {} outside [4, 64]",
                self.order
            )));
        }
        if self.abs_tol.is_nan() || self.abs_tol <= 0.0 {
            return Err(Error::InvalidInput("abs_tol must be positive".into()));
        }
        Ok(())
    }
}

/// Nodes and weights on `[−1, 1]`, by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut rule = Vec::with_capacity(n);
    let nf = n as f64;
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            // p1 = P_n(x), p0 = P_{n-1}(x)
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        rule.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    rule.reverse();
    rule
}

/// `(η − h²η, i(η + h²η), 2hη)` at `z`.
pub fn integrand(p: &ShapeParam, z: Complex64) -> Result<[Complex64; 3]> {
    let w = weierstrass_data(p, z)?;
    Ok([
        w.eta - w.h2_eta,
        Complex64::i() * (w.eta + w.h2_eta),
        w.h_eta * 2.0,
    ])
}

fn segment_sum(
    p: &ShapeParam,
    a: Complex64,
    b: Complex64,
    panels: usize,
    rule: &[(f64, f64)],
) -> Result<[Complex64; 3]> {
    let mut acc = [Complex64::new(0.0, 0.0); 3];
    let width = 1.0 / panels as f64;
    let dz = b - a;
    for j in 0..panels {
        let mid = (j as f64 + 0.5) * width;
        let mut panel = [Complex64::new(0.0, 0.0); 3];
        for &(x, w) in rule {
            let t = mid + 0.5 * width * x;
            let f = integrand(p, a + dz * t)?;
            for c in 0..3 {
                panel[c] += f[c] * w;
            }
        }
        for c in 0..3 {
            acc[c] += panel[c] * (0.5 * width);
        }
    }
    for c in acc.iter_mut() {
        *c *= dz;
    }
    Ok(acc)
}

fn segment_adaptive(
    p: &ShapeParam,
    a: Complex64,
    b: Complex64,
    q: &QuadratureSpec,
    rule: &[(f64, f64)],
) -> Result<[Complex64; 3]> {
    let mut panels = q.panels;
    let mut coarse = segment_sum(p, a, b, panels, rule)?;
    let mut change = f64::INFINITY;
    for _ in 0..MAX_DOUBLINGS {
        panels *= 2;
        let fine = segment_sum(p, a, b, panels, rule)?;
        change = (0..3)
            .map(|c| (fine[c] - coarse[c]).norm())
            .fold(0.0, f64::max);
        if change <= q.abs_tol {
            return Ok(fine);
        }
        coarse = fine;
    }
    Err(Error::Convergence {
        tol: q.abs_tol,
        doublings: MAX_DOUBLINGS,
        last_change: change,
    })
}

/// Complex integral of the Weierstrass integrand along a polyline.
pub fn integrate_path_complex(
    p: &ShapeParam,
    path: &[Complex64],
    q: &QuadratureSpec,
) -> Result<[Complex64; 3]> {
    p.require_interior()?;
    q.validate()?;
    let rule = gauss_legendre(q.order);
    let mut total = [Complex64::new(0.0, 0.0); 3];
    for seg in path.windows(2) {
        if seg[0] == seg[1] {
            continue;
        }
        let part = segment_adaptive(p, seg[0], seg[1], q, &rule)?;
        for c in 0..3 {
            total[c] += part[c];
        }
    }
    Ok(total)
}

fn realize(total: [Complex64; 3], lam: &AssociatedParam) -> SurfacePoint {
    let mu = lam.multiplier();
    Vector3::new((mu * total[0]).re, (mu * total[1]).re, (mu * total[2]).re)
}

/// `X^λ(z_target)` along the straight segment from the origin.
pub fn integrate(
    p: &ShapeParam,
    z_target: Complex64,
    lam: &AssociatedParam,
    q: &QuadratureSpec,
) -> Result<SurfacePoint> {
    let total = integrate_path_complex(p, &[Complex64::new(0.0, 0.0), z_target], q)?;
    Ok(realize(total, lam))
}

/// Same as [`integrate`] but along `0 → Re z → z`.
pub fn integrate_l_path(
    p: &ShapeParam,
    z_target: Complex64,
    lam: &AssociatedParam,
    q: &QuadratureSpec,
) -> Result<SurfacePoint> {
    let corner = Complex64::new(z_target.re, 0.0);
    let total = integrate_path_complex(p, &[Complex64::new(0.0, 0.0), corner, z_target], q)?;
    Ok(realize(total, lam))
}

/// Distance between the straight-segment and L-path integrals.
pub fn path_independence(
    p: &ShapeParam,
    z_target: Complex64,
    lam: &AssociatedParam,
    q: &QuadratureSpec,
) -> Result<f64> {
    let a = integrate(p, z_target, lam, q)?;
    let b = integrate_l_path(p, z_target, lam, q)?;
    Ok((a - b).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{x_conjugate, x_theta};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_4, SQRT_2};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rule_integrates_polynomials_exactly() {
        for n in [4, 7, 16, 33, 64] {
            let rule = gauss_legendre(n);
            let wsum: f64 = rule.iter().map(|r| r.1).sum();
            assert_abs_diff_eq!(wsum, 2.0, epsilon = 1e-13);
            // degree 2n-1 is exact; ∫ x^(2m) = 2/(2m+1)
            let m = n - 1;
            let val: f64 = rule.iter().map(|&(x, w)| w * x.powi(2 * m as i32)).sum();
            assert_abs_diff_eq!(val, 2.0 / (2 * m + 1) as f64, epsilon = 1e-13);
            assert!(rule.windows(2).all(|w| w[0].0 < w[1].0));
        }
    }

    #[test]
    fn integrand_at_origin() {
        for th in [-0.6, 0.3, 2.0] {
            let p = ShapeParam::new(th).unwrap();
            let f = integrand(&p, c(0.0, 0.0)).unwrap();
            assert!((f[0] - 1.0 / p.s()).norm() < 1e-15);
            assert!((f[1] - c(0.0, 1.0 / p.s())).norm() < 1e-15);
            assert_eq!(f[2], c(0.0, 0.0));
        }
        let p = ShapeParam::new(FRAC_PI_4).unwrap();
        let f = integrand(&p, c(0.0, 0.0)).unwrap();
        assert!((f[0] - 1.0 / SQRT_2).norm() < 1e-15);
        // θ = 0, z = 1: η − h²η with η = cosh²(1/2), h²η = (cosh 1 − 1)/2
        let p = ShapeParam::new(0.0).unwrap();
        let f = integrand(&p, c(1.0, 0.0)).unwrap();
        let expect = 0.5f64.cosh().powi(2) - (1f64.cosh() - 1.0) / 2.0;
        assert!((f[0] - expect).norm() < 1e-15);
    }

    #[test]
    fn integrate_examples() {
        let q = QuadratureSpec::default();
        let id = AssociatedParam::identity();
        let p = ShapeParam::new(0.0).unwrap();
        let x = integrate(&p, c(1.0, 0.0), &id, &q).unwrap();
        assert_abs_diff_eq!(
            x,
            Vector3::new(1.0, 0.0, 1f64.cosh() - 1.0),
            epsilon = 1e-13
        );
        assert_eq!(
            integrate(&p, c(0.0, 0.0), &id, &q).unwrap(),
            Vector3::zeros()
        );
        let p = ShapeParam::new(FRAC_PI_4).unwrap();
        let x = integrate(&p, c(1.0, 0.0), &id, &q).unwrap();
        assert_abs_diff_eq!(
            x,
            Vector3::new(5.0 / (6.0 * SQRT_2), 0.0, 0.5),
            epsilon = 1e-13
        );
    }

    #[test]
    fn integrated_conjugate_matches_closed_form() {
        let q = QuadratureSpec::default();
        let conj = AssociatedParam::conjugate();
        for th in [-0.3, 0.0, 0.2, FRAC_PI_4, 1.2, 2.0] {
            let p = ShapeParam::new(th).unwrap();
            let z = c(0.8, -0.6);
            let a = integrate(&p, z, &conj, &q).unwrap();
            let b = x_conjugate(&p, z.re, z.im).unwrap();
            assert!((a - b).norm() < 1e-11, "{th}: {a} vs {b}");
        }
    }

    #[test]
    fn path_independence_examples() {
        let q = QuadratureSpec::default();
        let id = AssociatedParam::identity();
        let p = ShapeParam::new(0.3).unwrap();
        assert!(path_independence(&p, c(1.0, 1.0), &id, &q).unwrap() <= 1e-10);
        assert_eq!(path_independence(&p, c(0.0, 0.0), &id, &q).unwrap(), 0.0);
        let p = ShapeParam::new(2.0).unwrap();
        assert!(path_independence(&p, c(2.0, 2.0), &id, &q).unwrap() <= 1e-10);
        let x = integrate(&p, c(2.0, 2.0), &id, &q).unwrap();
        assert!((x - x_theta(&p, 2.0, 2.0).unwrap()).norm() < 1e-10);
    }

    #[test]
    fn convergence_failure_is_reported() {
        let q = QuadratureSpec {
            panels: 1,
            order: 4,
            abs_tol: 1e-300,
        };
        let p = ShapeParam::new(0.3).unwrap();
        let err = integrate(&p, c(1.0, 1.0), &AssociatedParam::identity(), &q).unwrap_err();
        assert!(matches!(err, Error::Convergence { doublings: 16, .. }));
    }

    #[test]
    fn associated_param_validation() {
        assert!(AssociatedParam::new(c(0.5, 0.5)).is_err());
        let l = AssociatedParam::new(Complex64::from_polar(1.0, -FRAC_PI_4)).unwrap();
        assert!((l.multiplier() - Complex64::i()).norm() < 1e-15);
        assert!(QuadratureSpec {
            order: 3,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(QuadratureSpec {
            panels: 0,
            ..Default::default()
        }
        .validate()
        .is_err());
    }
}
