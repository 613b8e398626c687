//! (p,q)-Bernstein bases and the Bézier curves and tensor-product surfaces
//! built on them.
//!
//! With `p = 1` the basis reduces to the q-Bernstein basis, and with
//! `p = q = 1` to the classical Bernstein basis. Everything is evaluated in
//! `f64`; degrees are limited to [`MAX_DEGREE`].

pub mod audit;
pub mod basis;
pub mod curve;
pub mod error;
pub mod export;
pub mod fixtures;
pub mod point;
pub mod pq_arith;
pub mod render;
pub mod scene;
pub mod surface;

pub use audit::{identity_audit, AuditReport, AuditStatus, IdentityId};
pub use basis::{basis_row, basis_value, elevation_coeffs, BasisIndex, ElevationCoeffs};
pub use curve::{ControlPolygon, DeCasteljauTableau, ElevationMatrix, PQCurve, Variant};
pub use error::{Error, Result};
pub use point::{Point, Point2, Point3};
pub use pq_arith::{PQParams, MAX_DEGREE};
pub use render::RenderOptions;
pub use scene::{Geometry, SceneDocument, SceneError};
pub use surface::{ControlNet, Mesh, PQSurface};
