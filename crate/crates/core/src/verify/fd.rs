//! Central finite differences with one level of Richardson extrapolation.
//! Independent of the exact jets in [`crate::surface`].

use nalgebra::Vector3;

use crate::surface::{FrameJet, Vec3};

/// Step for first and second partials used by the grid checks.
pub const DEFAULT_STEP: f64 = 5e-4;

/// Third partials never use a step below this; roundoff grows like `h⁻³`.
pub const THIRD_ORDER_STEP: f64 = 5e-3;

fn richardson(coarse: Vec3, fine: Vec3) -> Vec3 {
    (fine * 4.0 - coarse) / 3.0
}

fn d1<F: Fn(f64, f64) -> Vec3>(f: &F, u: f64, v: f64, h: f64, along_u: bool) -> Vec3 {
    let (du, dv) = if along_u { (h, 0.0) } else { (0.0, h) };
    (f(u + du, v + dv) - f(u - du, v - dv)) / (2.0 * h)
}

fn d2<F: Fn(f64, f64) -> Vec3>(f: &F, u: f64, v: f64, h: f64, along_u: bool, x0: &Vec3) -> Vec3 {
    let (du, dv) = if along_u { (h, 0.0) } else { (0.0, h) };
    (f(u + du, v + dv) - x0 * 2.0 + f(u - du, v - dv)) / (h * h)
}

fn duv<F: Fn(f64, f64) -> Vec3>(f: &F, u: f64, v: f64, h: f64) -> Vec3 {
    (f(u + h, v + h) - f(u + h, v - h) - f(u - h, v + h) + f(u - h, v - h)) / (4.0 * h * h)
}

fn d3<F: Fn(f64, f64) -> Vec3>(f: &F, u: f64, v: f64, h: f64, along_u: bool) -> Vec3 {
    let (du, dv) = if along_u { (h, 0.0) } else { (0.0, h) };
    (f(u + 2.0 * du, v + 2.0 * dv) - f(u + du, v + dv) * 2.0 + f(u - du, v - dv) * 2.0
        - f(u - 2.0 * du, v - 2.0 * dv))
        / (2.0 * h * h * h)
}

/// Finite-difference jet of an arbitrary surface evaluator. First and
/// second partials use `step`; third partials use `max(step, THIRD_ORDER_STEP)`.
pub fn fd_jet<F: Fn(f64, f64) -> Vec3>(f: &F, u: f64, v: f64, step: f64) -> FrameJet {
    let h = step;
    let x = f(u, v);
    let xu = richardson(d1(f, u, v, h, true), d1(f, u, v, h / 2.0, true));
    let xv = richardson(d1(f, u, v, h, false), d1(f, u, v, h / 2.0, false));
    let xuu = richardson(d2(f, u, v, h, true, &x), d2(f, u, v, h / 2.0, true, &x));
    let xvv = richardson(d2(f, u, v, h, false, &x), d2(f, u, v, h / 2.0, false, &x));
    let xuv = richardson(duv(f, u, v, h), duv(f, u, v, h / 2.0));
    let h3 = step.max(THIRD_ORDER_STEP);
    let xuuu = richardson(d3(f, u, v, h3, true), d3(f, u, v, h3 / 2.0, true));
    let xvvv = richardson(d3(f, u, v, h3, false), d3(f, u, v, h3 / 2.0, false));
    let cross = xu.cross(&xv);
    let norm = cross.norm();
    let n = if norm > 0.0 {
        cross / norm
    } else {
        Vector3::zeros()
    };
    FrameJet {
        x,
        xu,
        xv,
        xuu,
        xuv,
        xvv,
        xuuu,
        xvvv,
        n,
    }
}

/// `f_uu + f_vv` of a scalar field, Richardson-extrapolated.
pub fn fd_laplacian<F: Fn(f64, f64) -> f64>(f: &F, u: f64, v: f64, h: f64) -> f64 {
    let lap =
        |h: f64| (f(u + h, v) + f(u - h, v) + f(u, v + h) + f(u, v - h) - 4.0 * f(u, v)) / (h * h);
    (4.0 * lap(h / 2.0) - lap(h)) / 3.0
}
