//! Steady, subsonic, axisymmetric compressible Euler flow with swirl and a
//! free contact-discontinuity boundary in a cylinder.
//!
//! The solver follows a constructive existence scheme: the velocity is split
//! as u = grad(phi) + curl(V) with V = h e_r + psi e_theta, entropy S and
//! angular momentum density Lambda are transported along streamlines, and the
//! contact radius f(x) is updated from mass-flux balance. Three nested
//! fixed-point loops (elliptic pair, free boundary, transport) realize the
//! scheme; a diagnostics layer verifies conservation, interface, and far-field
//! properties of converged states.

pub mod error;
pub mod free_boundary;
pub mod gas;
pub mod geometry;
pub mod grid;
pub mod interp;
pub mod banded;
pub mod elliptic;
pub mod profile;
pub mod solver;
pub mod transport;

pub use error::{Result, SolverError};
