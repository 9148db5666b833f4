//! k-analytic special functions, the profile functions `f`, `g` and the
//! conformal factor `e^ω` of the isothermic metric.
//!
//! The family is indexed by an angle θ. With `α = cos θ`, `β = sin θ` and
//! `k = cos 2θ = α² − β²`, the profiles are `f(u) = α·sk(k, u)` and
//! `g(v) = β·sk(−k, v)`, where `ck`/`sk` are the entire functions
//!
//! ```text
//! ck(k, x) = Σ kⁿ x²ⁿ / (2n)!      = cosh(√k x)      (cos(√−k x) for k < 0)
//! sk(k, x) = Σ kⁿ x²ⁿ⁺¹ / (2n+1)!  = sinh(√k x)/√k   (sin(√−k x)/√−k for k < 0)
//! ```
//!
//! Evaluating through `ck`/`sk` keeps everything smooth across `k = 0`
//! (θ = π/4), where the closed forms have a removable singularity.

use std::f64::consts::{FRAC_PI_4, PI};
use std::ops::{Add, Div, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Below this value of `|k|·|x|²` the plain `ck`/`sk` use their power series.
pub const SERIES_SWITCH: f64 = 1e-2;

/// Below this value of `|k|·|x|²` the divided helpers `c2`/`s2` use their
/// power series. The closed forms subtract the leading term and divide by
/// `k`, so they are kept away from small `k·x²`.
pub const DIVIDED_SWITCH: f64 = 1.0;

const SERIES_TERM_FLOOR: f64 = 1e-18;
const MAX_SERIES_TERMS: usize = 200;

/// Tolerance used to snap θ onto the ends of the closed parameter interval.
pub const ENDPOINT_SNAP: f64 = 1e-12;

pub const THETA_MIN: f64 = -FRAC_PI_4;
pub const THETA_MAX: f64 = 3.0 * FRAC_PI_4;

/// Real or complex argument accepted by the k-analytic functions.
pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
{
    fn from_f64(x: f64) -> Self;
    fn abs2(self) -> f64;
    fn cosh(self) -> Self;
    fn sinh(self) -> Self;
    fn cos(self) -> Self;
    fn sin(self) -> Self;
}

impl Scalar for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn abs2(self) -> f64 {
        self * self
    }
    fn cosh(self) -> Self {
        f64::cosh(self)
    }
    fn sinh(self) -> Self {
        f64::sinh(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
}

impl Scalar for Complex64 {
    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn abs2(self) -> f64 {
        self.norm_sqr()
    }
    fn cosh(self) -> Self {
        Complex64::cosh(self)
    }
    fn sinh(self) -> Self {
        Complex64::sinh(self)
    }
    fn cos(self) -> Self {
        Complex64::cos(self)
    }
    fn sin(self) -> Self {
        Complex64::sin(self)
    }
}

/// Sums `first + first·r₁ + first·r₁·r₂ + …` where the ratio of term `n+1`
/// to term `n` is `x2k / denom(n)`.
fn sum_series<T: Scalar>(first: T, x2k: T, denom: impl Fn(usize) -> f64) -> T {
    let mut sum = first;
    let mut term = first;
    for n in 1..MAX_SERIES_TERMS {
        term = term * x2k / denom(n);
        sum = sum + term;
        let t2 = term.abs2();
        if t2 < SERIES_TERM_FLOOR * SERIES_TERM_FLOOR * sum.abs2().max(1.0) || t2 == 0.0 {
            break;
        }
    }
    sum
}

/// `Σ kⁿ x²ⁿ/(2n)!`.
pub fn ck<T: Scalar>(k: f64, x: T) -> T {
    if k.abs() * x.abs2() < SERIES_SWITCH {
        let x2k = x * x * k;
        let nf = |n: usize| ((2 * n - 1) * (2 * n)) as f64;
        sum_series(T::from_f64(1.0), x2k, nf)
    } else if k > 0.0 {
        (x * k.sqrt()).cosh()
    } else {
        (x * (-k).sqrt()).cos()
    }
}

/// `Σ kⁿ x²ⁿ⁺¹/(2n+1)!`.
pub fn sk<T: Scalar>(k: f64, x: T) -> T {
    if k.abs() * x.abs2() < SERIES_SWITCH {
        let x2k = x * x * k;
        sum_series(x, x2k, |n| ((2 * n) * (2 * n + 1)) as f64)
    } else if k > 0.0 {
        let r = k.sqrt();
        (x * r).sinh() / r
    } else {
        let r = (-k).sqrt();
        (x * r).sin() / r
    }
}

/// `(ck(k, x) − 1)/k = Σ_{n≥1} kⁿ⁻¹ x²ⁿ/(2n)!`, finite at `k = 0`.
pub fn c2<T: Scalar>(k: f64, x: T) -> T {
    if k.abs() * x.abs2() < DIVIDED_SWITCH {
        let x2 = x * x;
        sum_series(x2 / 2.0, x2 * k, |n| ((2 * n + 1) * (2 * n + 2)) as f64)
    } else {
        (ck(k, x) - T::from_f64(1.0)) / k
    }
}

/// `(sk(k, x) − x)/k = Σ_{n≥1} kⁿ⁻¹ x²ⁿ⁺¹/(2n+1)!`, finite at `k = 0`.
pub fn s2<T: Scalar>(k: f64, x: T) -> T {
    if k.abs() * x.abs2() < DIVIDED_SWITCH {
        let x2 = x * x;
        sum_series(x2 * x / 6.0, x2 * k, |n| ((2 * n + 2) * (2 * n + 3)) as f64)
    } else {
        (sk(k, x) - x) / k
    }
}

/// The family parameter θ together with the quantities derived from it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeParam {
    theta: f64,
    alpha: f64,
    beta: f64,
    k: f64,
    c: f64,
    d: f64,
    s: f64,
    endpoint: bool,
}

impl ShapeParam {
    /// Accepts θ on the closed interval `[−π/4, 3π/4]`. Values within
    /// [`ENDPOINT_SNAP`] of an end are snapped onto it.
    pub fn new(theta: f64) -> Result<Self> {
        if !(THETA_MIN - ENDPOINT_SNAP..=THETA_MAX + ENDPOINT_SNAP).contains(&theta) {
            return Err(Error::ThetaOutOfRange { theta });
        }
        let at_min = (theta - THETA_MIN).abs() <= ENDPOINT_SNAP;
        let at_max = (theta - THETA_MAX).abs() <= ENDPOINT_SNAP;
        if at_min || at_max {
            let theta = if at_min { THETA_MIN } else { THETA_MAX };
            let h = std::f64::consts::FRAC_1_SQRT_2;
            let (alpha, beta) = if at_min { (h, -h) } else { (-h, h) };
            return Ok(Self {
                theta,
                alpha,
                beta,
                k: 0.0,
                c: 0.5,
                d: 0.5,
                s: 0.0,
                endpoint: true,
            });
        }
        // cos(π/2) and friends are ~1e-17 in floating point; catenoid
        // parameters need an exact zero so that f or g vanishes identically.
        let snap = |x: f64| if x.abs() < 1e-15 { 0.0 } else { x };
        let alpha = snap(theta.cos());
        let beta = snap(theta.sin());
        let s = alpha + beta;
        Ok(Self {
            theta,
            alpha,
            beta,
            k: (alpha - beta) * s,
            c: alpha * alpha,
            d: beta * beta,
            s,
            endpoint: false,
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
    /// `cos θ`
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    /// `sin θ`
    pub fn beta(&self) -> f64 {
        self.beta
    }
    /// `cos 2θ = α² − β²`
    pub fn k(&self) -> f64 {
        self.k
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn d(&self) -> f64 {
        self.d
    }
    /// `α + β`; zero exactly at the endpoints.
    pub fn s(&self) -> f64 {
        self.s
    }
    pub fn is_endpoint(&self) -> bool {
        self.endpoint
    }

    pub(crate) fn require_interior(&self) -> Result<()> {
        if self.endpoint {
            Err(Error::Domain("metric undefined at plane endpoints"))
        } else {
            Ok(())
        }
    }
}

/// Snaps a θ given by name (`plane-left`, `catenoid`, `enneper`,
/// `catenoid2`, `plane-right`) to its exact value.
pub fn named_theta(name: &str) -> Option<f64> {
    match name {
        "plane-left" => Some(THETA_MIN),
        "catenoid" => Some(0.0),
        "enneper" => Some(FRAC_PI_4),
        "catenoid2" => Some(PI / 2.0),
        "plane-right" => Some(THETA_MAX),
        _ => None,
    }
}

pub fn f(p: &ShapeParam, u: f64) -> f64 {
    p.alpha * sk(p.k, u)
}

pub fn f_prime(p: &ShapeParam, u: f64) -> f64 {
    p.alpha * ck(p.k, u)
}

pub fn f_second(p: &ShapeParam, u: f64) -> f64 {
    p.k * f(p, u)
}

pub fn g(p: &ShapeParam, v: f64) -> f64 {
    p.beta * sk(-p.k, v)
}

pub fn g_prime(p: &ShapeParam, v: f64) -> f64 {
    p.beta * ck(-p.k, v)
}

pub fn g_second(p: &ShapeParam, v: f64) -> f64 {
    -p.k * g(p, v)
}

/// `e^ω` and the exact partial derivatives of `ω` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricJet {
    pub exp_omega: f64,
    pub omega_u: f64,
    pub omega_v: f64,
    pub omega_uu: f64,
    pub omega_uv: f64,
    pub omega_vv: f64,
}

impl MetricJet {
    pub fn omega(&self) -> f64 {
        self.exp_omega.ln()
    }
}

/// `e^ω = (1 + f² + g²)/(f' + g')` with `ω_u = e^{−ω} f`, `ω_v = e^{−ω} g`.
pub fn exp_omega(p: &ShapeParam, u: f64, v: f64) -> Result<f64> {
    p.require_interior()?;
    let (fu, gv) = (f(p, u), g(p, v));
    Ok((1.0 + fu * fu + gv * gv) / (f_prime(p, u) + g_prime(p, v)))
}

pub fn metric_jet(p: &ShapeParam, u: f64, v: f64) -> Result<MetricJet> {
    p.require_interior()?;
    let (fu, fpu) = (f(p, u), f_prime(p, u));
    let (gv, gpv) = (g(p, v), g_prime(p, v));
    let exp_omega = (1.0 + fu * fu + gv * gv) / (fpu + gpv);
    let e1 = 1.0 / exp_omega;
    let e2 = e1 * e1;
    Ok(MetricJet {
        exp_omega,
        omega_u: e1 * fu,
        omega_v: e1 * gv,
        omega_uu: e1 * fpu - e2 * fu * fu,
        omega_uv: -e2 * fu * gv,
        omega_vv: e1 * gpv - e2 * gv * gv,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, SQRT_2};

    /// Independent oracle: brute-force partial sums of the defining series,
    /// no switchover, 60 terms.
    fn ck_oracle(k: f64, x: f64) -> f64 {
        let mut sum = 0.0;
        let mut term = 1.0;
        for n in 0..60 {
            if n > 0 {
                term *= k * x * x / ((2 * n - 1) * (2 * n)) as f64;
            }
            sum += term;
        }
        sum
    }

    fn sk_oracle(k: f64, x: f64) -> f64 {
        let mut sum = 0.0;
        let mut term = x;
        for n in 0..60 {
            if n > 0 {
                term *= k * x * x / ((2 * n) * (2 * n + 1)) as f64;
            }
            sum += term;
        }
        sum
    }

    // Frozen from the 60-term oracle above (matches cosh 1, sinh 1).
    const COSH_1: f64 = 1.5430806348152437;
    const SINH_1: f64 = 1.1752011936438014;
    // β·sk(−k, 1) at θ = 0.3, from the oracle.
    const G_AT_0_3: f64 = 0.25651457617717466;

    #[test]
    fn oracle_reproduces_frozen_constants() {
        assert_abs_diff_eq!(ck_oracle(1.0, 1.0), COSH_1, epsilon = 1e-15);
        assert_abs_diff_eq!(sk_oracle(1.0, 1.0), SINH_1, epsilon = 1e-15);
        let p = ShapeParam::new(0.3).unwrap();
        assert_abs_diff_eq!(p.beta() * sk_oracle(-p.k(), 1.0), G_AT_0_3, epsilon = 1e-15);
    }

    #[test]
    fn ck_examples() {
        assert_eq!(ck(0.0, 2.5), 1.0);
        assert_abs_diff_eq!(ck(1.0, 1.0), COSH_1, epsilon = 1e-15);
        assert_abs_diff_eq!(ck(-1.0, PI), -1.0, epsilon = 1e-15);
    }

    #[test]
    fn sk_examples() {
        assert_eq!(sk(0.0, 2.5), 2.5);
        assert_abs_diff_eq!(sk(1.0, 1.0), SINH_1, epsilon = 1e-15);
        assert_abs_diff_eq!(sk(-1.0, FRAC_PI_2), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn series_branch_matches_oracle() {
        for &(k, x) in &[(1e-3f64, 0.5f64), (-2e-3, 2.0), (1e-8, 3.0), (-0.5, 0.1)] {
            assert!(k.abs() * x * x < SERIES_SWITCH);
            assert_abs_diff_eq!(ck(k, x), ck_oracle(k, x), epsilon = 1e-16);
            assert_abs_diff_eq!(sk(k, x), sk_oracle(k, x), epsilon = 1e-16);
        }
    }

    #[test]
    fn divided_helpers_limits_and_continuity() {
        assert_eq!(c2(0.0, 2.0), 2.0);
        assert_abs_diff_eq!(s2(0.0, 2.0), 8.0 / 6.0, epsilon = 1e-15);
        // straddle the switchover
        for &x in &[0.9999f64, 1.0001, 2.5] {
            let k = 1.0 / (x * x);
            let closed_c = ((k.sqrt() * x).cosh() - 1.0) / k;
            let closed_s = ((k.sqrt() * x).sinh() / k.sqrt() - x) / k;
            assert_abs_diff_eq!(c2(k, x), closed_c, epsilon = 1e-14);
            assert_abs_diff_eq!(s2(k, x), closed_s, epsilon = 1e-14);
        }
        let z = Complex64::new(0.3, -1.7);
        let k = -0.7;
        let lhs = c2(k, z) * k + Complex64::new(1.0, 0.0);
        assert!((lhs - ck(k, z)).norm() < 1e-14);
        let lhs = s2(k, z) * k + z;
        assert!((lhs - sk(k, z)).norm() < 1e-14);
    }

    #[test]
    fn complex_closed_forms() {
        let z = Complex64::new(0.7, 1.3);
        assert!((ck(1.0, z) - z.cosh()).norm() < 1e-14);
        assert!((sk(-4.0, z) - (z * 2.0).sin() / 2.0).norm() < 1e-14);
    }

    #[test]
    fn shape_param_basics() {
        let p = ShapeParam::new(0.0).unwrap();
        assert_eq!((p.alpha(), p.beta(), p.k(), p.s()), (1.0, 0.0, 1.0, 1.0));
        let p = ShapeParam::new(FRAC_PI_2).unwrap();
        assert_eq!(p.alpha(), 0.0);
        assert_eq!(p.beta(), 1.0);
        let p = ShapeParam::new(FRAC_PI_4).unwrap();
        assert!(p.k().abs() < 1e-15);
        let p = ShapeParam::new(-FRAC_PI_4 + 1e-14).unwrap();
        assert!(p.is_endpoint());
        assert_eq!(p.s(), 0.0);
        assert!(ShapeParam::new(THETA_MAX).unwrap().is_endpoint());
        assert!(matches!(
            ShapeParam::new(5.0),
            Err(Error::ThetaOutOfRange { .. })
        ));
        assert!(ShapeParam::new(f64::NAN).is_err());
    }

    #[test]
    fn f_and_g_examples() {
        let p = ShapeParam::new(FRAC_PI_4).unwrap();
        assert_abs_diff_eq!(f(&p, SQRT_2), 1.0, epsilon = 1e-15);
        for th in [-0.6, 0.0, 0.3, 2.0] {
            let p = ShapeParam::new(th).unwrap();
            assert_eq!(f(&p, 0.0), 0.0);
            assert_eq!(g(&p, 0.0), 0.0);
        }
        let p = ShapeParam::new(0.0).unwrap();
        assert_abs_diff_eq!(f(&p, 1.0), SINH_1, epsilon = 1e-15);
        assert_eq!(g(&p, 0.77), 0.0);
        let p = ShapeParam::new(FRAC_PI_2).unwrap();
        assert_abs_diff_eq!(g(&p, 1.0), SINH_1, epsilon = 1e-15);
        let p = ShapeParam::new(0.3).unwrap();
        assert_abs_diff_eq!(g(&p, 1.0), G_AT_0_3, epsilon = 1e-15);
    }

    #[test]
    fn metric_examples() {
        let p = ShapeParam::new(0.0).unwrap();
        let m = metric_jet(&p, 1.0, 0.0).unwrap();
        assert_abs_diff_eq!(m.exp_omega, COSH_1, epsilon = 1e-15);
        for th in [-0.6, 0.3, FRAC_PI_4, 2.0] {
            let p = ShapeParam::new(th).unwrap();
            let m = metric_jet(&p, 0.0, 0.0).unwrap();
            assert_abs_diff_eq!(m.exp_omega, 1.0 / p.s(), epsilon = 1e-15);
        }
        let p = ShapeParam::new(THETA_MIN).unwrap();
        assert!(matches!(metric_jet(&p, 0.0, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn enneper_metric_is_polynomial() {
        let p = ShapeParam::new(FRAC_PI_4).unwrap();
        let (u, v) = (0.8, -1.3);
        let e = (1.0 + (u * u + v * v) / 2.0) / SQRT_2;
        assert_abs_diff_eq!(exp_omega(&p, u, v).unwrap(), e, epsilon = 1e-14);
        assert_abs_diff_eq!(p.alpha(), FRAC_1_SQRT_2, epsilon = 1e-16);
    }

    fn interior_theta() -> impl Strategy<Value = f64> {
        (THETA_MIN + 1e-3)..(THETA_MAX - 1e-3)
    }

    proptest! {
        #[test]
        fn ode_residuals_vanish(th in interior_theta(), u in -2.0..2.0f64, v in -3.0..3.0f64) {
            let p = ShapeParam::new(th).unwrap();
            let (fu, fp) = (f(&p, u), f_prime(&p, u));
            let (gv, gp) = (g(&p, v), g_prime(&p, v));
            let scale_f = 1.0 + fp * fp;
            let scale_g = 1.0 + gp * gp;
            prop_assert!((fp * fp - ((p.c() - p.d()) * fu * fu + p.c())).abs() <= 1e-10 * scale_f);
            prop_assert!((gp * gp - ((p.d() - p.c()) * gv * gv + p.d())).abs() <= 1e-10 * scale_g);
            prop_assert!((f_second(&p, u) - (p.c() - p.d()) * fu).abs() <= 1e-10);
            prop_assert!((g_second(&p, v) - (p.d() - p.c()) * gv).abs() <= 1e-10);
        }

        #[test]
        fn denominator_bounded_below(th in interior_theta(), u in -3.0..3.0f64, v in -3.0..3.0f64) {
            let p = ShapeParam::new(th).unwrap();
            let bound = (p.alpha().abs() - p.beta().abs()).abs();
            prop_assert!(f_prime(&p, u) + g_prime(&p, v) >= bound - 1e-12);
            prop_assert!(f_prime(&p, u) + g_prime(&p, v) > 0.0);
        }

        #[test]
        fn liouville_and_planarity_with_exact_jets(th in interior_theta(), u in -1.0..1.0f64, v in -1.0..1.0f64) {
            let p = ShapeParam::new(th).unwrap();
            let m = metric_jet(&p, u, v).unwrap();
            let e2 = 1.0 / (m.exp_omega * m.exp_omega);
            prop_assert!((m.omega_uu + m.omega_vv - e2).abs() <= 1e-10);
            prop_assert!((m.omega_uv + m.omega_u * m.omega_v).abs() <= 1e-12);
        }

        #[test]
        fn series_agrees_with_closed_form(k in prop_oneof![-1.0..-1e-3f64, 1e-3..1.0f64], x in -3.0..3.0f64) {
            let (c, s) = if k > 0.0 {
                ((k.sqrt() * x).cosh(), (k.sqrt() * x).sinh() / k.sqrt())
            } else {
                (((-k).sqrt() * x).cos(), ((-k).sqrt() * x).sin() / (-k).sqrt())
            };
            prop_assert!((ck_oracle(k, x) - c).abs() <= 1e-13 * c.abs().max(1.0));
            prop_assert!((sk_oracle(k, x) - s).abs() <= 1e-13 * s.abs().max(1.0));
            prop_assert!((ck(k, x) - c).abs() <= 1e-13 * c.abs().max(1.0));
            prop_assert!((sk(k, x) - s).abs() <= 1e-13 * s.abs().max(1.0));
        }

        #[test]
        fn sk_is_odd(k in -1.0..1.0f64, x in -3.0..3.0f64) {
            prop_assert_eq!(sk(k, -x), -sk(k, x));
        }
    }
}
