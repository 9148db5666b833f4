use minsurf_core::surface::x_theta;
use minsurf_core::weierstrass::{integrate, integrate_l_path};
use minsurf_core::{AssociatedParam, Error, QuadratureSpec, ShapeParam};
use num_complex::Complex64;

/// One refinement step only: the adaptive loop accepts the first doubling.
fn coarse(panels: usize, order: usize) -> QuadratureSpec {
    QuadratureSpec {
        panels,
        order,
        abs_tol: 1e300,
    }
}

#[test]
fn empirical_order_matches_gauss_legendre() {
    let p = ShapeParam::new(0.3).unwrap();
    let z = Complex64::new(4.0, 4.0);
    let exact = x_theta(&p, z.re, z.im).unwrap();
    let lam = AssociatedParam::identity();
    let err = |panels| (integrate(&p, z, &lam, &coarse(panels, 4)).unwrap() - exact).norm();
    let (e1, e2, e3) = (err(1), err(2), err(4));
    assert!(e3 > 1e-10, "errors reached roundoff: {e1:e} {e2:e} {e3:e}");
    // n-point rule has order 2n = 8
    for r in [(e1 / e2).log2(), (e2 / e3).log2()] {
        assert!(r >= 7.0, "observed order {r} ({e1:e} {e2:e} {e3:e})");
    }
}

#[test]
fn default_spec_reaches_closed_form_far_out() {
    let q = QuadratureSpec::default();
    let lam = AssociatedParam::identity();
    for th in [-0.6, 0.3, 1.0, 2.0] {
        let p = ShapeParam::new(th).unwrap();
        let z = Complex64::new(2.0, -3.0);
        let exact = x_theta(&p, z.re, z.im).unwrap();
        let a = integrate(&p, z, &lam, &q).unwrap();
        let b = integrate_l_path(&p, z, &lam, &q).unwrap();
        assert!((a - exact).norm() <= 1e-9 * exact.norm().max(1.0), "{th}");
        assert!((a - b).norm() <= 1e-9 * exact.norm().max(1.0), "{th}");
    }
}

#[test]
fn unreachable_tolerance_reports_convergence_error() {
    let p = ShapeParam::new(0.3).unwrap();
    let q = QuadratureSpec {
        panels: 1,
        order: 4,
        abs_tol: 1e-300,
    };
    let r = integrate(
        &p,
        Complex64::new(1.0, 1.0),
        &AssociatedParam::identity(),
        &q,
    );
    assert!(matches!(r, Err(Error::Convergence { .. })), "{r:?}");
}

#[test]
fn invalid_specs_are_rejected() {
    let p = ShapeParam::new(0.3).unwrap();
    let lam = AssociatedParam::identity();
    let z = Complex64::new(1.0, 0.0);
    for q in [
        QuadratureSpec {
            panels: 0,
            order: 16,
            abs_tol: 1e-12,
        },
        QuadratureSpec {
            panels: 8,
            order: 3,
            abs_tol: 1e-12,
        },
        QuadratureSpec {
            panels: 8,
            order: 65,
            abs_tol: 1e-12,
        },
        QuadratureSpec {
            panels: 8,
            order: 16,
            abs_tol: 0.0,
        },
    ] {
        assert!(integrate(&p, z, &lam, &q).is_err(), "{q:?}");
    }
    let plane = ShapeParam::new(-std::f64::consts::FRAC_PI_4).unwrap();
    assert!(integrate(&plane, z, &lam, &QuadratureSpec::default()).is_err());
}
