//! Numerical verification of the identities satisfied by the family:
//! Liouville equation, planar-curvature-line condition, conformality,
//! minimality, Hopf normalization, axial directions, Gauss-map circles,
//! periodicity of the metric, and agreement with the Weierstrass integral.
//!
//! Every check produces a [`ResidualRecord`]; [`verify`] runs the full
//! suite for one θ and aggregates a [`VerificationReport`].

mod checks;
pub mod fd;
pub mod geometry;

use std::collections::BTreeMap;

use serde::Serialize;

pub use checks::*;
pub use fd::{fd_jet, fd_laplacian};
pub use geometry::{helix, planarity_ratio, procrustes_residual, twisted_sphere};

use crate::error::{Error, Result};
use crate::grid::{Domain, Grid};
use crate::kernel::ShapeParam;
use crate::weierstrass::{AssociatedParam, QuadratureSpec};

/// Default tolerances, one per record name.
pub mod tol {
    pub const ODE: f64 = 1e-10;
    pub const LIOUVILLE_EXACT: f64 = 1e-10;
    pub const LIOUVILLE_FD: f64 = 1e-5;
    pub const PLANARITY_PDE: f64 = 1e-12;
    pub const CONFORMALITY: f64 = 1e-10;
    pub const METRIC_AGREEMENT: f64 = 1e-9;
    pub const MINIMALITY_EXACT: f64 = 1e-10;
    pub const MINIMALITY_FD: f64 = 1e-5;
    pub const HOPF_FD: f64 = 1e-5;
    pub const HOPF_SCALING: f64 = 1e-6;
    pub const PLANARITY_DET: f64 = 1e-5;
    pub const LINE_PLANARITY: f64 = 1e-8;
    pub const GAUSS_CIRCLE: f64 = 1e-8;
    pub const PERIODICITY: f64 = 1e-10;
    pub const CONSTANCY: f64 = 1e-12;
    /// `e^ω(0,0)/e^ω(0,100)` must drop below this for "not periodic".
    pub const GROWTH: f64 = 1e-2;
    pub const AXIAL_CONSTANCY: f64 = 1e-9;
    pub const AXIAL_ORTHOGONALITY: f64 = 1e-8;
    pub const NORMAL_FORMULA: f64 = 1e-10;
    pub const WEIERSTRASS_ORACLE: f64 = 1e-8;
    pub const PATH_INDEPENDENCE: f64 = 1e-10;
    pub const ASSOCIATED_ISOMETRY: f64 = 1e-8;
    pub const CONJUGATE_PROCRUSTES: f64 = 1e-6;
}

/// One named residual. `passed` is `value <= tolerance` (NaN fails).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualRecord {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip)]
    pub context: String,
}

impl ResidualRecord {
    pub fn new(name: impl Into<String>, value: f64, tolerance: f64, context: String) -> Self {
        Self {
            name: name.into(),
            value,
            tolerance,
            passed: value <= tolerance,
            context,
        }
    }

    pub fn set_tolerance(&mut self, tolerance: f64) {
        self.tolerance = tolerance;
        self.passed = self.value <= tolerance;
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub theta: f64,
    pub records: Vec<ResidualRecord>,
    pub overall: bool,
    #[serde(skip)]
    pub shape: ShapeParam,
}

impl VerificationReport {
    pub fn new(shape: ShapeParam, records: Vec<ResidualRecord>) -> Self {
        let overall = records.iter().all(|r| r.passed);
        Self {
            theta: shape.theta(),
            records,
            overall,
            shape,
        }
    }

    pub fn get(&self, name: &str) -> Option<&ResidualRecord> {
        self.records.iter().find(|r| r.name == name)
    }

    /// Replaces the tolerance of every record with a matching name. Unknown
    /// names are an error so that typos do not silently pass.
    pub fn apply_overrides(&mut self, overrides: &BTreeMap<String, f64>) -> Result<()> {
        for (name, &t) in overrides {
            if t.is_nan() || t <= 0.0 {
                return Err(Error::InvalidInput(format!(
                    "tolerance for {name} must be positive"
                )));
            }
            let mut hit = false;
            for r in self.records.iter_mut().filter(|r| &r.name == name) {
                r.set_tolerance(t);
                hit = true;
            }
            if !hit {
                return Err(Error::InvalidInput(format!(
                    "no record named {name:?} in this report"
                )));
            }
        }
        self.overall = self.records.iter().all(|r| r.passed);
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Settings for [`verify`].
#[derive(Debug, Clone)]
pub struct VerifyConfig {
    /// Grid for pointwise identities.
    pub grid: Grid,
    /// Grid for Weierstrass-integral comparisons.
    pub oracle_grid: Grid,
    pub fd_step: f64,
    pub quadrature: QuadratureSpec,
    pub random_points: usize,
    pub seed: u64,
    /// Curvature lines per family for the line and Gauss-circle checks.
    pub lines_per_family: usize,
    pub line_samples: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            grid: Grid::check_default(),
            oracle_grid: Grid {
                domain: Domain::unit_square(),
                nu: 10,
                nv: 10,
            },
            fd_step: fd::DEFAULT_STEP,
            quadrature: QuadratureSpec::default(),
            random_points: 100,
            seed: 0x5eed,
            lines_per_family: 5,
            line_samples: 41,
        }
    }
}

fn max_record(
    name: &str,
    recs: Vec<ResidualRecord>,
    tolerance: f64,
    context: String,
) -> ResidualRecord {
    let val = crate::exec::max_nonneg(recs.iter().map(|r| r.value));
    ResidualRecord::new(name, val, tolerance, context)
}

/// Runs every applicable check for one θ.
pub fn verify(p: &ShapeParam, cfg: &VerifyConfig) -> Result<VerificationReport> {
    let grid = &cfg.grid;
    if p.is_endpoint() {
        let recs = vec![check_minimality(
            p,
            grid,
            JetSource::FiniteDifference { step: cfg.fd_step },
        )?];
        return Ok(VerificationReport::new(*p, recs));
    }
    let fd = JetSource::FiniteDifference { step: cfg.fd_step };
    let mut recs = vec![
        check_ode_f(p, grid),
        check_ode_g(p, grid),
        check_liouville(p, grid, JetSource::Exact)?,
        check_liouville(p, grid, fd)?,
        check_planarity_pde(p, grid)?,
        check_conformality(p, grid)?,
        check_metric_agreement(p, grid)?,
        check_minimality(p, grid, JetSource::Exact)?,
        check_minimality(p, grid, fd)?,
        check_hopf(p, &AssociatedParam::identity(), grid, cfg.fd_step)?,
        check_planarity_det(p, grid, Direction::U, cfg.fd_step)?,
        check_planarity_det(p, grid, Direction::V, cfg.fd_step)?,
    ];

    let lines = curvature_lines(&grid.domain, cfg.lines_per_family, cfg.line_samples);
    let line_ctx = format!(
        "theta={} {} lines x {} samples",
        p.theta(),
        lines.len(),
        cfg.line_samples
    );
    let mut line_recs = Vec::new();
    let mut circle_recs = Vec::new();
    for line in &lines {
        let pts = line
            .params()
            .into_iter()
            .map(|(u, v)| crate::surface::x_theta(p, u, v))
            .collect::<Result<Vec<_>>>()?;
        line_recs.push(check_curvature_line_planarity(&pts)?);
        circle_recs.push(check_gauss_circles(p, line)?);
    }
    recs.push(max_record(
        "line_planarity",
        line_recs,
        tol::LINE_PLANARITY,
        line_ctx.clone(),
    ));
    recs.push(max_record(
        "gauss_circles",
        circle_recs,
        tol::GAUSS_CIRCLE,
        line_ctx,
    ));

    recs.push(check_periodicity(p, grid)?);
    let pts = random_points(&grid.domain, cfg.random_points, cfg.seed);
    recs.extend(check_axial(p, &pts)?);
    recs.extend(check_normal_formula(p, &pts)?);

    let q = &cfg.quadrature;
    recs.push(check_weierstrass_oracle(
        p,
        &AssociatedParam::identity(),
        &cfg.oracle_grid,
        q,
    )?);
    recs.push(check_path_independence(p, &cfg.oracle_grid, q)?);
    recs.push(check_conjugate_procrustes(p, &cfg.oracle_grid, q)?);
    recs.push(check_hopf(
        p,
        &AssociatedParam::conjugate(),
        grid,
        cfg.fd_step,
    )?);
    Ok(VerificationReport::new(*p, recs))
}
