//! Error taxonomy for the solver.
//!
//! Every failure mode carries enough context (node location, offending value,
//! iteration history) to be reported in a partial run report instead of a panic.

use thiserror::Error;

/// Which fixed-point level a divergence was detected at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IterationLevel {
    Inner,
    Middle,
    Outer,
}

impl std::fmt::Display for IterationLevel {
    fn fmt(&self, fmt: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            IterationLevel::Inner => write!(fmt, "inner"),
            IterationLevel::Middle => write!(fmt, "middle"),
            IterationLevel::Outer => write!(fmt, "outer"),
        }
    }
}

#[derive(Debug, Clone, Error)]
pub enum SolverError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("background is not subsonic: u0 = {u0} >= c0 = {c0}")]
    NotSubsonic { u0: f64, c0: f64 },

    #[error("cavitation at (x={x}, r={r}): stagnation energy exceeded, B0 - |q|^2/2 = {excess}")]
    Cavitation { x: f64, r: f64, excess: f64 },

    #[error("supersonic state at (x={x}, r={r}): |q|^2 = {q_sq} >= c^2 = {c_sq}")]
    Supersonic { x: f64, r: f64, q_sq: f64, c_sq: f64 },

    #[error("axis compatibility violated: {0}")]
    AxisCompatibility(String),

    #[error("entrance profile violates {condition}: {detail}")]
    ProfileCondition { condition: String, detail: String },

    #[error("free boundary leaves the admissible band at x={x}: f={f} (band [0.375, 0.625])")]
    GeometryBand { x: f64, f: f64 },

    #[error("free-boundary radicand {value} below floor 1/16 at x={x}")]
    BoundaryCollapse { x: f64, value: f64 },

    #[error("interface energy deficit: Robin radicand {value} < 0 at x={x} (entrance data too large)")]
    InterfaceEnergy { x: f64, value: f64 },

    #[error("mass-flux floor violated at (x={x}, r={r}): rho*u_x = {value} < {floor}")]
    FluxFloor { x: f64, r: f64, value: f64, floor: f64 },

    #[error("axial velocity floor violated at (x={x}, r={r}): u_x = {value} < {floor}")]
    AxialVelocityFloor { x: f64, r: f64, value: f64, floor: f64 },

    #[error("footpoint ratio R0/r = {ratio} at (x={x}, r={r}) outside [1/sqrt(3), sqrt(3)]")]
    FootpointRange { x: f64, r: f64, ratio: f64 },

    #[error("flux imbalance beyond tolerance at x={x}: w = {w} outside entrance range by {excess}")]
    FluxImbalance { x: f64, w: f64, excess: f64 },

    #[error("{level} iteration diverged after {iterations} iterations (changes: {history:?})")]
    Divergence {
        level: IterationLevel,
        iterations: usize,
        history: Vec<f64>,
    },

    #[error("linear solve failed: {0}")]
    LinearSolve(String),

    #[error("interpolation error: {0}")]
    Interpolation(String),

    #[error("streamline trace left the domain: {0}")]
    TraceExit(String),

    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),
}

pub type Result<T> = std::result::Result<T, SolverError>;
