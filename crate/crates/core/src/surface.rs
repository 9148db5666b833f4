//! Closed-form immersions of the planar-curvature-line family.
//!
//! Every surface here is the real part of one holomorphic curve
//!
//! ```text
//! Ψ(z) = ( z/s − β·S(z),  i·(z/s + α·S(z)),  C(z) ),   z = u + iv
//! S(z) = (sk(k,z) − z)/k,   C(z) = (ck(k,z) − 1)/k
//! ```
//!
//! `X = Re Ψ` is the Bonnet-family surface, `Re(iΨ)` its conjugate and
//! `Re(μΨ)` with `|μ| = 1` a general member of the associated family.
//! `S` and `C` are entire in `k`, so θ = π/4 (Enneper) is an ordinary value.

use std::f64::consts::{FRAC_PI_4, SQRT_2};

use nalgebra::Vector3;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::{self, c2, ck, metric_jet, s2, sk, ShapeParam, THETA_MAX, THETA_MIN};
use crate::weierstrass::AssociatedParam;

pub type Vec3 = Vector3<f64>;
pub type SurfacePoint = Vector3<f64>;

/// Tolerance for recognising the special angles in [`classify`].
pub const CLASSIFY_TOL: f64 = 1e-9;

const PLANE_SCALE: f64 = 3.0 / SQRT_2;

/// Position, partial derivatives up to third order, and unit normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameJet {
    pub x: SurfacePoint,
    pub xu: Vec3,
    pub xv: Vec3,
    pub xuu: Vec3,
    pub xuv: Vec3,
    pub xvv: Vec3,
    pub xuuu: Vec3,
    pub xvvv: Vec3,
    pub n: Vec3,
}

impl FrameJet {
    /// Hopf differential `¼⟨X_uu − 2iX_uv − X_vv, N⟩`.
    pub fn hopf(&self) -> Complex64 {
        let re = (self.xuu - self.xvv).dot(&self.n);
        let im = -2.0 * self.xuv.dot(&self.n);
        Complex64::new(re, im) / 4.0
    }

    /// Mean curvature from the first and second fundamental forms. Assumes
    /// conformal coordinates.
    pub fn mean_curvature(&self) -> f64 {
        let e2w = 0.5 * (self.xu.norm_squared() + self.xv.norm_squared());
        (self.xuu + self.xvv).dot(&self.n) / (2.0 * e2w)
    }
}

/// `(T1, T2, T3, T4) = (Re S, Im S, Re C, Im C)` at `z = u + iv`.
///
/// Outside the series region these are the real-variable products
/// `T1 = (sk(k,u)·ck(−k,v) − u)/k`, `T2 = (ck(k,u)·sk(−k,v) − v)/k`,
/// `T3 = (ck(k,u)·ck(−k,v) − 1)/k` and `T4 = sk(k,u)·sk(−k,v)`.
pub fn t_helpers(k: f64, u: f64, v: f64) -> [f64; 4] {
    if k.abs() * (u * u + v * v) < kernel::DIVIDED_SWITCH {
        let z = Complex64::new(u, v);
        let s = s2(k, z);
        let c = c2(k, z);
        [s.re, s.im, c.re, c.im]
    } else {
        let (cu, su) = (ck(k, u), sk(k, u));
        let (cv, sv) = (ck(-k, v), sk(-k, v));
        [
            (su * cv - u) / k,
            (cu * sv - v) / k,
            (cu * cv - 1.0) / k,
            su * sv,
        ]
    }
}

/// `X^θ(u, v)`, anchored so that `X(0, 0) = 0`.
pub fn x_theta(p: &ShapeParam, u: f64, v: f64) -> Result<SurfacePoint> {
    p.require_interior()?;
    let [t1, t2, t3, _] = t_helpers(p.k(), u, v);
    Ok(Vector3::new(
        u / p.s() - p.beta() * t1,
        -v / p.s() - p.alpha() * t2,
        t3,
    ))
}

/// `X̂^θ = Re(iΨ)`, the conjugate surface with `X̂(0, 0) = 0`.
pub fn x_conjugate(p: &ShapeParam, u: f64, v: f64) -> Result<SurfacePoint> {
    p.require_interior()?;
    let [t1, t2, _, t4] = t_helpers(p.k(), u, v);
    Ok(Vector3::new(
        -v / p.s() + p.beta() * t2,
        -u / p.s() - p.alpha() * t1,
        -t4,
    ))
}

/// `Re(μΨ) = Re μ·X + Im μ·X̂` with `μ = λ⁻²`.
pub fn x_associated(
    p: &ShapeParam,
    lambda: &AssociatedParam,
    u: f64,
    v: f64,
) -> Result<SurfacePoint> {
    let mu = lambda.multiplier();
    Ok(x_theta(p, u, v)? * mu.re + x_conjugate(p, u, v)? * mu.im)
}

/// Homothety factor that shrinks the family onto the plane at the endpoints.
pub fn r_factor(theta: f64) -> Result<f64> {
    let p = ShapeParam::new(theta)?;
    if p.is_endpoint() {
        return Ok(0.0);
    }
    let sn = (theta + FRAC_PI_4).sin();
    Ok((1.0 - sn) * (2.0 * theta).cos().abs() + sn)
}

fn r_of(p: &ShapeParam) -> f64 {
    r_factor(p.theta()).expect("ShapeParam holds a valid theta")
}

/// `R^θ·X^θ`, extended by the plane `(3/√2)(u, −v, 0)` at both endpoints.
pub fn x_tilde(p: &ShapeParam, u: f64, v: f64) -> SurfacePoint {
    if p.is_endpoint() {
        return Vector3::new(u, -v, 0.0) * PLANE_SCALE;
    }
    x_theta(p, u, v).expect("interior theta") * r_of(p)
}

/// `R^θ·X̂^θ`, extended by the plane `(3/√2)(−v, −u, 0)` at both endpoints.
pub fn x_conjugate_tilde(p: &ShapeParam, u: f64, v: f64) -> SurfacePoint {
    if p.is_endpoint() {
        return Vector3::new(-v, -u, 0.0) * PLANE_SCALE;
    }
    x_conjugate(p, u, v).expect("interior theta") * r_of(p)
}

/// `(Ψ', Ψ'', Ψ''')` at `z`.
fn psi_derivatives(p: &ShapeParam, z: Complex64) -> [[Complex64; 3]; 3] {
    let k = p.k();
    let (a, b, s) = (p.alpha(), p.beta(), p.s());
    let i = Complex64::i();
    let (ckz, skz, c2z) = (ck(k, z), sk(k, z), c2(k, z));
    let d1 = [1.0 / s - c2z * b, i * (c2z * a + 1.0 / s), skz];
    let d2 = [-skz * b, i * skz * a, ckz];
    let d3 = [-ckz * b, i * ckz * a, skz * k];
    [d1, d2, d3]
}

fn re3(w: &[Complex64; 3]) -> Vec3 {
    Vector3::new(w[0].re, w[1].re, w[2].re)
}

fn im3(w: &[Complex64; 3]) -> Vec3 {
    Vector3::new(w[0].im, w[1].im, w[2].im)
}

/// Exact jet of `X^θ`. The normal is `(X_u × X_v)/|X_u × X_v|`.
pub fn x_theta_jet(p: &ShapeParam, u: f64, v: f64) -> Result<FrameJet> {
    let x = x_theta(p, u, v)?;
    let [d1, d2, d3] = psi_derivatives(p, Complex64::new(u, v));
    let xu = re3(&d1);
    let xv = -im3(&d1);
    Ok(FrameJet {
        x,
        xu,
        xv,
        xuu: re3(&d2),
        xuv: -im3(&d2),
        xvv: -re3(&d2),
        xuuu: re3(&d3),
        xvvv: im3(&d3),
        n: xu.cross(&xv).normalize(),
    })
}

/// Unit normal `(X_u × X_v)/|X_u × X_v|`; shared by every member of the
/// associated family.
pub fn frame_normal(p: &ShapeParam, u: f64, v: f64) -> Result<Vec3> {
    p.require_interior()?;
    let [d1, _, _] = psi_derivatives(p, Complex64::new(u, v));
    Ok(re3(&d1).cross(&(-im3(&d1))).normalize())
}

/// `(ω_u/α, ω_v/β, √(1 − ω_u²/α² − ω_v²/β²))`, valid only when `αβ ≠ 0`.
///
/// This picks the upper hemisphere; the frame normal of [`x_theta`] is its
/// mirror image in the `x₃` component on the region around the origin.
pub fn normal_formula(p: &ShapeParam, u: f64, v: f64) -> Result<Vec3> {
    p.require_interior()?;
    if p.alpha() == 0.0 || p.beta() == 0.0 {
        return Err(Error::Domain(
            "normal formula inapplicable when alpha*beta = 0, use frame-jet normal",
        ));
    }
    let m = metric_jet(p, u, v)?;
    let n1 = m.omega_u / p.alpha();
    let n2 = m.omega_v / p.beta();
    let rad = 1.0 - n1 * n1 - n2 * n2;
    Ok(Vector3::new(n1, n2, rad.max(0.0).sqrt()))
}

/// Constant axial directions, unnormalized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxialDirections {
    pub v1: Option<Vec3>,
    pub v2: Option<Vec3>,
}

/// `v₁ = ω_uu X_u − ω_uv X_v + ω_u N` (when `α ≠ 0`) and
/// `v₂ = ω_uv X_u − ω_vv X_v + ω_v N` (when `β ≠ 0`).
pub fn axial_directions(p: &ShapeParam, u: f64, v: f64) -> Result<AxialDirections> {
    let jet = x_theta_jet(p, u, v)?;
    let m = metric_jet(p, u, v)?;
    let v1 =
        (p.alpha() != 0.0).then(|| jet.xu * m.omega_uu - jet.xv * m.omega_uv + jet.n * m.omega_u);
    let v2 =
        (p.beta() != 0.0).then(|| jet.xu * m.omega_uv - jet.xv * m.omega_vv + jet.n * m.omega_v);
    Ok(AxialDirections { v1, v2 })
}

/// Weierstrass data and the pole-free combinations used for integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeierstrassPair {
    h: Option<Complex64>,
    pub eta: Complex64,
    pub h_eta: Complex64,
    pub h2_eta: Complex64,
    z: Complex64,
}

impl WeierstrassPair {
    /// The Gauss map `h`; fails at its poles.
    pub fn h(&self) -> Result<Complex64> {
        self.h.ok_or(Error::PoleOfH {
            re: self.z.re,
            im: self.z.im,
        })
    }
}

/// `h = s·sk(k, z/2)/ck(k, z/2)`, `η = (1 + ck(k, z))/(2s)`,
/// `hη = sk(k, z)/2` and `h²η = s·(ck(k, z) − 1)/(2k)`.
pub fn weierstrass_data(p: &ShapeParam, z: Complex64) -> Result<WeierstrassPair> {
    p.require_interior()?;
    let (k, s) = (p.k(), p.s());
    let half = z / 2.0;
    let (num, den) = (sk(k, half), ck(k, half));
    let h = (den.norm() > 1e-13 * num.norm().max(1.0)).then(|| num / den * s);
    Ok(WeierstrassPair {
        h,
        eta: (ck(k, z) + 1.0) / (2.0 * s),
        h_eta: sk(k, z) / 2.0,
        h2_eta: c2(k, z) * (s / 2.0),
        z,
    })
}

/// Surface type of `X̃^θ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SurfaceClass {
    Plane,
    Catenoid,
    Enneper,
    Bonnet,
}

/// Surface type of the conjugate `X̂^θ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConjugateClass {
    Plane,
    Helicoid,
    Enneper,
    Thomsen,
}

impl SurfaceClass {
    pub fn name(self) -> &'static str {
        match self {
            SurfaceClass::Plane => "plane",
            SurfaceClass::Catenoid => "catenoid",
            SurfaceClass::Enneper => "enneper",
            SurfaceClass::Bonnet => "bonnet",
        }
    }

    pub fn conjugate(self) -> ConjugateClass {
        match self {
            SurfaceClass::Plane => ConjugateClass::Plane,
            SurfaceClass::Catenoid => ConjugateClass::Helicoid,
            SurfaceClass::Enneper => ConjugateClass::Enneper,
            SurfaceClass::Bonnet => ConjugateClass::Thomsen,
        }
    }
}

impl ConjugateClass {
    pub fn name(self) -> &'static str {
        match self {
            ConjugateClass::Plane => "plane",
            ConjugateClass::Helicoid => "helicoid",
            ConjugateClass::Enneper => "enneper",
            ConjugateClass::Thomsen => "thomsen",
        }
    }
}

pub fn classify(theta: f64) -> Result<SurfaceClass> {
    let p = ShapeParam::new(theta)?;
    let near = |a: f64| (theta - a).abs() <= CLASSIFY_TOL;
    Ok(if p.is_endpoint() || near(THETA_MIN) || near(THETA_MAX) {
        SurfaceClass::Plane
    } else if near(0.0) || near(2.0 * FRAC_PI_4) {
        SurfaceClass::Catenoid
    } else if near(FRAC_PI_4) {
        SurfaceClass::Enneper
    } else {
        SurfaceClass::Bonnet
    })
}

pub fn classify_conjugate(theta: f64) -> Result<ConjugateClass> {
    classify(theta).map(SurfaceClass::conjugate)
}
