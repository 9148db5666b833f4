use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::fd::{fd_jet, fd_laplacian, DEFAULT_STEP};
use super::geometry::{planarity_ratio, procrustes_residual};
use super::{tol, ResidualRecord};
use crate::error::Result;
use crate::exec::{self, max_nonneg};
use crate::grid::{lerp, Domain, Grid};
use crate::kernel::{self, metric_jet, ShapeParam};
use crate::surface::{
    axial_directions, frame_normal, normal_formula, x_associated, x_conjugate, x_theta,
    x_theta_jet, x_tilde, Vec3,
};
use crate::weierstrass::{self, AssociatedParam, QuadratureSpec};

/// How derivatives are obtained for a check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum JetSource {
    Exact,
    FiniteDifference { step: f64 },
}

impl JetSource {
    pub fn fd_default() -> Self {
        JetSource::FiniteDifference { step: DEFAULT_STEP }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    U,
    V,
}

fn ctx(p: &ShapeParam, grid: &Grid) -> String {
    let d = grid.domain;
    format!(
        "theta={} grid={}x{} [{},{}]x[{},{}]",
        p.theta(),
        grid.nu,
        grid.nv,
        d.u_min,
        d.u_max,
        d.v_min,
        d.v_max
    )
}

fn grid_max<F>(grid: &Grid, f: F) -> f64
where
    F: Fn(f64, f64) -> f64 + Sync + Send,
{
    max_nonneg(exec::map(&grid.points(), |&(u, v)| f(u, v)))
}

fn grid_try_max<F>(grid: &Grid, f: F) -> Result<f64>
where
    F: Fn(f64, f64) -> Result<f64> + Sync + Send,
{
    let vals = exec::map(&grid.points(), |&(u, v)| f(u, v));
    Ok(max_nonneg(vals.into_iter().collect::<Result<Vec<_>>>()?))
}

/// `max |f'² − ((c−d)f² + c)|` together with `max |f'' − (c−d)f|`.
pub fn check_ode_f(p: &ShapeParam, grid: &Grid) -> ResidualRecord {
    let val = grid_max(grid, |u, _| {
        let (fu, fp) = (kernel::f(p, u), kernel::f_prime(p, u));
        let first = (fp * fp - ((p.c() - p.d()) * fu * fu + p.c())).abs();
        let second = (kernel::f_second(p, u) - (p.c() - p.d()) * fu).abs();
        first.max(second)
    });
    ResidualRecord::new("ode_f", val, tol::ODE, ctx(p, grid))
}

pub fn check_ode_g(p: &ShapeParam, grid: &Grid) -> ResidualRecord {
    let val = grid_max(grid, |_, v| {
        let (gv, gp) = (kernel::g(p, v), kernel::g_prime(p, v));
        let first = (gp * gp - ((p.d() - p.c()) * gv * gv + p.d())).abs();
        let second = (kernel::g_second(p, v) - (p.d() - p.c()) * gv).abs();
        first.max(second)
    });
    ResidualRecord::new("ode_g", val, tol::ODE, ctx(p, grid))
}

/// `max |Δω − e^{−2ω}|`.
pub fn check_liouville(p: &ShapeParam, grid: &Grid, source: JetSource) -> Result<ResidualRecord> {
    p.require_interior()?;
    let (name, tolerance) = match source {
        JetSource::Exact => ("liouville_exact", tol::LIOUVILLE_EXACT),
        JetSource::FiniteDifference { .. } => ("liouville_fd", tol::LIOUVILLE_FD),
    };
    let val = grid_try_max(grid, |u, v| {
        let m = metric_jet(p, u, v)?;
        let lap = match source {
            JetSource::Exact => m.omega_uu + m.omega_vv,
            JetSource::FiniteDifference { step } => {
                let omega = |a: f64, b: f64| kernel::exp_omega(p, a, b).unwrap().ln();
                fd_laplacian(&omega, u, v, step.max(1e-3))
            }
        };
        Ok((lap - (-2.0 * m.omega()).exp()).abs())
    })?;
    Ok(ResidualRecord::new(name, val, tolerance, ctx(p, grid)))
}

/// `max |ω_uv + ω_u ω_v|` from the exact metric jet.
pub fn check_planarity_pde(p: &ShapeParam, grid: &Grid) -> Result<ResidualRecord> {
    let val = grid_try_max(grid, |u, v| {
        let m = metric_jet(p, u, v)?;
        Ok((m.omega_uv + m.omega_u * m.omega_v).abs())
    })?;
    Ok(ResidualRecord::new(
        "planarity_pde",
        val,
        tol::PLANARITY_PDE,
        ctx(p, grid),
    ))
}

/// `max(| |X_u|² − |X_v|² |, |⟨X_u, X_v⟩|)/e^{2ω}` from exact jets.
pub fn check_conformality(p: &ShapeParam, grid: &Grid) -> Result<ResidualRecord> {
    let val = grid_try_max(grid, |u, v| {
        let j = x_theta_jet(p, u, v)?;
        let e2 = kernel::exp_omega(p, u, v)?.powi(2);
        let a = (j.xu.norm_squared() - j.xv.norm_squared()).abs();
        Ok(a.max(j.xu.dot(&j.xv).abs()) / e2)
    })?;
    Ok(ResidualRecord::new(
        "conformality",
        val,
        tol::CONFORMALITY,
        ctx(p, grid),
    ))
}

/// Relative mismatch between `|X_u|²` of the closed form and `e^{2ω}` of
/// the metric solution.
pub fn check_metric_agreement(p: &ShapeParam, grid: &Grid) -> Result<ResidualRecord> {
    let val = grid_try_max(grid, |u, v| {
        let j = x_theta_jet(p, u, v)?;
        let e2 = kernel::exp_omega(p, u, v)?.powi(2);
        Ok((j.xu.norm_squared() - e2).abs() / e2)
    })?;
    Ok(ResidualRecord::new(
        "metric_agreement",
        val,
        tol::METRIC_AGREEMENT,
        ctx(p, grid),
    ))
}

/// `max |H|`. At the endpoints the plane `X̃` is checked by finite
/// differences.
pub fn check_minimality(p: &ShapeParam, grid: &Grid, source: JetSource) -> Result<ResidualRecord> {
    let (name, tolerance) = match source {
        JetSource::Exact => ("minimality_exact", tol::MINIMALITY_EXACT),
        JetSource::FiniteDifference { .. } => ("minimality_fd", tol::MINIMALITY_FD),
    };
    let val = match source {
        JetSource::Exact => grid_try_max(grid, |u, v| {
            Ok(x_theta_jet(p, u, v)?.mean_curvature().abs())
        })?,
        JetSource::FiniteDifference { step } => {
            if p.is_endpoint() {
                let f = |u, v| x_tilde(p, u, v);
                grid_max(grid, |u, v| fd_jet(&f, u, v, step).mean_curvature().abs())
            } else {
                p.require_interior()?;
                let f = |u, v| x_theta(p, u, v).unwrap();
                grid_max(grid, |u, v| fd_jet(&f, u, v, step).mean_curvature().abs())
            }
        }
    };
    Ok(ResidualRecord::new(name, val, tolerance, ctx(p, grid)))
}

/// `max |Q − λ⁻²·(−½)|` on the associated surface `X^λ`, with `Q` from
/// finite differences.
pub fn check_hopf(
    p: &ShapeParam,
    lam: &AssociatedParam,
    grid: &Grid,
    step: f64,
) -> Result<ResidualRecord> {
    p.require_interior()?;
    let expected = lam.multiplier() * Complex64::new(-0.5, 0.0);
    let f = |u, v| x_associated(p, lam, u, v).unwrap();
    let val = grid_max(grid, |u, v| {
        (fd_jet(&f, u, v, step).hopf() - expected).norm()
    });
    let (name, tolerance) = if lam.multiplier() == Complex64::new(1.0, 0.0) {
        ("hopf_fd", tol::HOPF_FD)
    } else {
        ("hopf_associated", tol::HOPF_SCALING)
    };
    Ok(ResidualRecord::new(name, val, tolerance, ctx(p, grid)))
}

/// Scale-invariant `|det(X_u, X_uu, X_uuu)|` of an arbitrary surface along
/// one coordinate direction, with all partials by finite differences.
///
/// The normalization is `|X_u|·|X_uu|·max(|X_uuu|, |X_uu|)`; the second
/// factor keeps the ratio finite where `X_uuu` vanishes.
pub fn planarity_det<F>(f: &F, grid: &Grid, dir: Direction, step: f64) -> f64
where
    F: Fn(f64, f64) -> Vec3 + Sync + Send,
{
    grid_max(grid, |u, v| {
        let j = fd_jet(f, u, v, step);
        let (a, b, c) = match dir {
            Direction::U => (j.xu, j.xuu, j.xuuu),
            Direction::V => (j.xv, j.xvv, j.xvvv),
        };
        let det = a.dot(&b.cross(&c));
        det.abs() / (a.norm() * b.norm() * c.norm().max(b.norm()))
    })
}

pub fn check_planarity_det(
    p: &ShapeParam,
    grid: &Grid,
    dir: Direction,
    step: f64,
) -> Result<ResidualRecord> {
    p.require_interior()?;
    let f = |u, v| x_theta(p, u, v).unwrap();
    let val = planarity_det(&f, grid, dir, step);
    let name = match dir {
        Direction::U => "planarity_det_u",
        Direction::V => "planarity_det_v",
    };
    Ok(ResidualRecord::new(
        name,
        val,
        tol::PLANARITY_DET,
        ctx(p, grid),
    ))
}

/// A sampled coordinate line: `u`-line (fixed `v`) or `v`-line (fixed `u`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureLine {
    pub dir: Direction,
    pub fixed: f64,
    pub from: f64,
    pub to: f64,
    pub samples: usize,
}

impl CurvatureLine {
    pub fn params(&self) -> Vec<(f64, f64)> {
        (0..self.samples)
            .map(|i| {
                let t = lerp(self.from, self.to, i, self.samples);
                match self.dir {
                    Direction::U => (t, self.fixed),
                    Direction::V => (self.fixed, t),
                }
            })
            .collect()
    }
}

/// `per_family` lines of each family, evenly placed across the domain.
pub fn curvature_lines(domain: &Domain, per_family: usize, samples: usize) -> Vec<CurvatureLine> {
    let mut lines = Vec::with_capacity(2 * per_family);
    for i in 0..per_family {
        lines.push(CurvatureLine {
            dir: Direction::U,
            fixed: lerp(domain.v_min, domain.v_max, i, per_family),
            from: domain.u_min,
            to: domain.u_max,
            samples,
        });
    }
    for i in 0..per_family {
        lines.push(CurvatureLine {
            dir: Direction::V,
            fixed: lerp(domain.u_min, domain.u_max, i, per_family),
            from: domain.v_min,
            to: domain.v_max,
            samples,
        });
    }
    lines
}

/// Plane-fit ratio of sampled positions along one curve.
pub fn check_curvature_line_planarity(samples: &[Vec3]) -> Result<ResidualRecord> {
    if samples.len() < 10 {
        return Err(crate::Error::InvalidInput(format!(
            "line planarity needs at least 10 samples, got {}",
            samples.len()
        )));
    }
    let val = planarity_ratio(samples)?;
    Ok(ResidualRecord::new(
        "line_planarity",
        val,
        tol::LINE_PLANARITY,
        format!("{} samples", samples.len()),
    ))
}

/// Plane-fit ratio of the Gauss image of one curvature line; a planar image
/// on the sphere is a circle.
pub fn check_gauss_circles(p: &ShapeParam, line: &CurvatureLine) -> Result<ResidualRecord> {
    let normals = line
        .params()
        .into_iter()
        .map(|(u, v)| frame_normal(p, u, v))
        .collect::<Result<Vec<_>>>()?;
    let val = planarity_ratio(&normals)?;
    Ok(ResidualRecord::new(
        "gauss_circles",
        val,
        tol::GAUSS_CIRCLE,
        format!("theta={} {:?}-line at {}", p.theta(), line.dir, line.fixed),
    ))
}

/// Period (or constancy, or unbounded growth) of the conformal factor.
///
/// * `k > 0`, `β ≠ 0`: `e^ω` has period `2π/√k` in `v`.
/// * `k < 0`, `α ≠ 0`: period `2π/√−k` in `u`.
/// * `β = 0` (resp. `α = 0`): constant in `v` (resp. `u`).
/// * `k = 0`: no period; records `e^ω(0,0)/e^ω(0,100)`, which must be small.
pub fn check_periodicity(p: &ShapeParam, grid: &Grid) -> Result<ResidualRecord> {
    p.require_interior()?;
    let e = |u: f64, v: f64| kernel::exp_omega(p, u, v).unwrap();
    let k = p.k();
    let context = ctx(p, grid);
    if p.beta() == 0.0 {
        let val = grid_max(grid, |u, v| (e(u, v) - e(u, 0.0)).abs());
        return Ok(ResidualRecord::new(
            "constancy_v",
            val,
            tol::CONSTANCY,
            context,
        ));
    }
    if p.alpha() == 0.0 {
        let val = grid_max(grid, |u, v| (e(u, v) - e(0.0, v)).abs());
        return Ok(ResidualRecord::new(
            "constancy_u",
            val,
            tol::CONSTANCY,
            context,
        ));
    }
    if k.abs() < 1e-12 {
        let val = e(0.0, 0.0) / e(0.0, 100.0).min(e(100.0, 0.0));
        return Ok(ResidualRecord::new(
            "non_periodic_growth",
            val,
            tol::GROWTH,
            context,
        ));
    }
    let period = 2.0 * PI / k.abs().sqrt();
    if k > 0.0 {
        let val = grid_max(grid, |u, v| (e(u, v + period) - e(u, v)).abs());
        Ok(ResidualRecord::new(
            "periodicity_v",
            val,
            tol::PERIODICITY,
            format!("{context} T={period}"),
        ))
    } else {
        let val = grid_max(grid, |u, v| (e(u + period, v) - e(u, v)).abs());
        Ok(ResidualRecord::new(
            "periodicity_u",
            val,
            tol::PERIODICITY,
            format!("{context} T={period}"),
        ))
    }
}

/// Reproducible sample points in a domain.
pub fn random_points(domain: &Domain, n: usize, seed: u64) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            (
                rng.random_range(domain.u_min..domain.u_max),
                rng.random_range(domain.v_min..domain.v_max),
            )
        })
        .collect()
}

fn componentwise_relative_spread(vs: &[Vec3]) -> f64 {
    let n = vs.len() as f64;
    let mean = vs.iter().sum::<Vec3>() / n;
    let var = vs
        .iter()
        .map(|v| (v - mean).component_mul(&(v - mean)))
        .sum::<Vec3>()
        / n;
    var.map(f64::sqrt).max() / mean.norm()
}

/// Constancy of `v₁`, `v₂` and orthogonality of their directions over a
/// set of points. Absent axes produce no record.
pub fn check_axial(p: &ShapeParam, points: &[(f64, f64)]) -> Result<Vec<ResidualRecord>> {
    let axes = exec::map(points, |&(u, v)| axial_directions(p, u, v))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let context = format!("theta={} {} random points", p.theta(), points.len());
    let mut out = Vec::new();
    let v1: Vec<Vec3> = axes.iter().filter_map(|a| a.v1).collect();
    let v2: Vec<Vec3> = axes.iter().filter_map(|a| a.v2).collect();
    if !v1.is_empty() {
        let val = componentwise_relative_spread(&v1);
        out.push(ResidualRecord::new(
            "axial_v1_constancy",
            val,
            tol::AXIAL_CONSTANCY,
            context.clone(),
        ));
    }
    if !v2.is_empty() {
        let val = componentwise_relative_spread(&v2);
        out.push(ResidualRecord::new(
            "axial_v2_constancy",
            val,
            tol::AXIAL_CONSTANCY,
            context.clone(),
        ));
    }
    if !v1.is_empty() && !v2.is_empty() {
        let val = max_nonneg(
            v1.iter()
                .zip(&v2)
                .map(|(a, b)| a.normalize().dot(&b.normalize()).abs()),
        );
        out.push(ResidualRecord::new(
            "axial_orthogonality",
            val,
            tol::AXIAL_ORTHOGONALITY,
            context,
        ));
    }
    Ok(out)
}

/// `max |(F₁, F₂, σF₃) − N|` between the closed normal formula and the frame
/// normal, with `σ` the sign of the frame normal's third component at the
/// origin. `None` when `αβ = 0`.
pub fn check_normal_formula(
    p: &ShapeParam,
    points: &[(f64, f64)],
) -> Result<Option<ResidualRecord>> {
    if p.is_endpoint() || p.alpha() == 0.0 || p.beta() == 0.0 {
        return Ok(None);
    }
    let sigma = frame_normal(p, 0.0, 0.0)?.z.signum();
    let vals = exec::map(points, |&(u, v)| -> Result<f64> {
        let mut f = normal_formula(p, u, v)?;
        f.z *= sigma;
        Ok((f - frame_normal(p, u, v)?).norm())
    });
    let val = max_nonneg(vals.into_iter().collect::<Result<Vec<_>>>()?);
    Ok(Some(ResidualRecord::new(
        "normal_formula",
        val,
        tol::NORMAL_FORMULA,
        format!("theta={} {} random points", p.theta(), points.len()),
    )))
}

/// `max |X^λ_integrated − X^λ_closed|` over a grid.
pub fn check_weierstrass_oracle(
    p: &ShapeParam,
    lam: &AssociatedParam,
    grid: &Grid,
    q: &QuadratureSpec,
) -> Result<ResidualRecord> {
    let val = grid_try_max(grid, |u, v| {
        let a = weierstrass::integrate(p, Complex64::new(u, v), lam, q)?;
        let b = x_associated(p, lam, u, v)?;
        Ok((a - b).norm())
    })?;
    Ok(ResidualRecord::new(
        "weierstrass_oracle",
        val,
        tol::WEIERSTRASS_ORACLE,
        ctx(p, grid),
    ))
}

/// Straight segment vs. L-path to the far corner of the grid.
pub fn check_path_independence(
    p: &ShapeParam,
    grid: &Grid,
    q: &QuadratureSpec,
) -> Result<ResidualRecord> {
    let z = Complex64::new(grid.domain.u_max, grid.domain.v_max);
    let val = weierstrass::path_independence(p, z, &AssociatedParam::identity(), q)?;
    Ok(ResidualRecord::new(
        "path_independence",
        val,
        tol::PATH_INDEPENDENCE,
        format!("theta={} z={z}", p.theta()),
    ))
}

/// Procrustes residual between the closed-form conjugate and the conjugate
/// obtained by integrating `iη`.
pub fn check_conjugate_procrustes(
    p: &ShapeParam,
    grid: &Grid,
    q: &QuadratureSpec,
) -> Result<ResidualRecord> {
    let conj = AssociatedParam::conjugate();
    let pairs = exec::map(&grid.points(), |&(u, v)| -> Result<(Vec3, Vec3)> {
        Ok((
            x_conjugate(p, u, v)?,
            weierstrass::integrate(p, Complex64::new(u, v), &conj, q)?,
        ))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let (a, b): (Vec<Vec3>, Vec<Vec3>) = pairs.into_iter().unzip();
    let val = procrustes_residual(&a, &b)?;
    Ok(ResidualRecord::new(
        "conjugate_procrustes",
        val,
        tol::CONJUGATE_PROCRUSTES,
        ctx(p, grid),
    ))
}

/// First fundamental form of `X^λ` (finite differences) against the exact
/// one of `X`, relative to `e^{2ω}`.
pub fn check_associated_isometry(
    p: &ShapeParam,
    lam: &AssociatedParam,
    grid: &Grid,
    step: f64,
) -> Result<ResidualRecord> {
    p.require_interior()?;
    let f = |u, v| x_associated(p, lam, u, v).unwrap();
    let val = grid_try_max(grid, |u, v| {
        let a = fd_jet(&f, u, v, step);
        let b = x_theta_jet(p, u, v)?;
        let e2 = b.xu.norm_squared();
        let de = (a.xu.norm_squared() - e2).abs();
        let df = (a.xu.dot(&a.xv) - b.xu.dot(&b.xv)).abs();
        let dg = (a.xv.norm_squared() - b.xv.norm_squared()).abs();
        Ok(de.max(df).max(dg) / e2)
    })?;
    Ok(ResidualRecord::new(
        "associated_isometry",
        val,
        tol::ASSOCIATED_ISOMETRY,
        ctx(p, grid),
    ))
}
