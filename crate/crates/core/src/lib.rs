//! Geodesic wave fronts on flat surfaces.
//!
//! A wave front `W_t(P)` is the set of points reached at time `t` by all
//! unit-speed geodesics leaving `P`. This crate evaluates the exponential map
//! on five flat models (torus, Klein bottle, rectangular and circular
//! billiards, cube surface), tracks fronts as adaptively refined polylines
//! over the circle of initial directions, and measures how densely they fill
//! the surface. The [`lattice`] module is an independent number-theoretic
//! oracle for the torus.

pub mod error;
pub mod frontier;
pub mod io;
pub mod lattice;
pub mod metrics;
mod par;
pub mod surfaces;

pub use error::{Error, Result};
pub use frontier::{ArcInterval, Front, FrontComponent, FrontSample, PropagationParams};
pub use surfaces::{CoverPoint, Face, SurfaceModel, SurfacePoint};
