//! Construction, deformation, export and numerical verification of the
//! minimal surfaces with planar curvature lines: plane, catenoid, Enneper's
//! surface and the Bonnet family, together with their conjugates (helicoid,
//! Enneper, Thomsen family).
//!
//! The whole family is indexed by one angle θ ∈ [−π/4, 3π/4]; see
//! [`kernel::ShapeParam`].

pub mod error;
pub mod exec;
pub mod grid;
pub mod kernel;
pub mod mesh;
pub mod surface;
pub mod verify;
pub mod weierstrass;

pub use error::{Error, Result};
pub use exec::Execution;
pub use grid::{Domain, Grid};
pub use kernel::{MetricJet, ShapeParam};
pub use surface::{FrameJet, SurfaceClass, SurfacePoint, Vec3};
pub use weierstrass::{AssociatedParam, QuadratureSpec};
