use serde::Serialize;

use crate::error::{Error, Result};

/// Rectangle in the `(u, v)` parameter plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Domain {
    pub u_min: f64,
    pub u_max: f64,
    pub v_min: f64,
    pub v_max: f64,
}

impl Domain {
    pub const fn new(u_min: f64, u_max: f64, v_min: f64, v_max: f64) -> Self {
        Self {
            u_min,
            u_max,
            v_min,
            v_max,
        }
    }

    /// `[−1, 1]²`, the region on which identities are checked.
    pub const fn unit_square() -> Self {
        Self::new(-1.0, 1.0, -1.0, 1.0)
    }

    /// `[−2, 2] × [−π, π]`, the default export region.
    pub const fn mesh_default() -> Self {
        Self::new(-2.0, 2.0, -std::f64::consts::PI, std::f64::consts::PI)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = [self.u_min, self.u_max, self.v_min, self.v_max]
            .iter()
            .all(|x| x.is_finite())
            && self.u_min < self.u_max
            && self.v_min < self.v_max;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "domain must satisfy u_min < u_max and v_min < v_max, got {self:?}"
            )))
        }
    }
}

/// Tensor grid of `nu × nv` samples, row-major with `u` varying slowest.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub domain: Domain,
    pub nu: usize,
    pub nv: usize,
}

impl Grid {
    pub fn new(domain: Domain, nu: usize, nv: usize) -> Result<Self> {
        domain.validate()?;
        if nu < 2 || nv < 2 {
            return Err(Error::InvalidInput(format!(
                "grid needs at least 2 samples per axis, got {nu}x{nv}"
            )));
        }
        Ok(Self { domain, nu, nv })
    }

    /// 21 × 21 on `[−1, 1]²`.
    pub fn check_default() -> Self {
        Self {
            domain: Domain::unit_square(),
            nu: 21,
            nv: 21,
        }
    }

    pub fn u_at(&self, r: usize) -> f64 {
        lerp(self.domain.u_min, self.domain.u_max, r, self.nu)
    }

    pub fn v_at(&self, c: usize) -> f64 {
        lerp(self.domain.v_min, self.domain.v_max, c, self.nv)
    }

    pub fn len(&self) -> usize {
        self.nu * self.nv
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn points(&self) -> Vec<(f64, f64)> {
        let mut pts = Vec::with_capacity(self.len());
        for r in 0..self.nu {
            let u = self.u_at(r);
            for c in 0..self.nv {
                pts.push((u, self.v_at(c)));
            }
        }
        pts
    }
}

/// `n` evenly spaced values from `a` to `b` inclusive; endpoints are exact.
pub fn lerp(a: f64, b: f64, i: usize, n: usize) -> f64 {
    if i + 1 == n {
        b
    } else {
        a + (b - a) * (i as f64) / ((n - 1) as f64)
    }
}
