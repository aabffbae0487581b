//! Rankine-Hugoniot interface machinery: the Robin data B that encodes
//! pressure continuity across the contact surface, the mass-flux update of
//! the free boundary, and the kinematic residual of the interface.

use crate::error::{Result, SolverError};
use crate::gas::{BackgroundState, GasParameters};
use crate::geometry::{FreeBoundaryCurve, Geometry};
use crate::grid::Field;
use crate::interp::integrate_trapezoid;

/// Lower bound kept under the square root of the boundary update.
pub const F_RADICAND_FLOOR: f64 = 1.0 / 16.0;

/// Robin data samples along the interface.
#[derive(Debug, Clone)]
pub struct RobinData {
    pub b: Vec<f64>,
}

/// Pointwise Robin value
///
///   B = sqrt( 2 (B0- - gamma/(gamma-1) p0^{1-1/gamma} S^{1/gamma}) - (Lambda/f)^2 )
///       - u0 / sqrt(1 + f'^2),
///
/// which vanishes identically at the background state.
pub fn robin_point(
    f: f64,
    fp: f64,
    s: f64,
    lambda: f64,
    gas: &GasParameters,
    background: &BackgroundState,
) -> std::result::Result<f64, f64> {
    let g = gas.gamma;
    let enthalpy = g / (g - 1.0) * gas.p0.powf(1.0 - 1.0 / g) * s.powf(1.0 / g);
    let swirl = lambda / f;
    let radicand = 2.0 * (background.b0_minus - enthalpy) - swirl * swirl;
    if radicand < 0.0 {
        return Err(radicand);
    }
    Ok(radicand.sqrt() - gas.u0 / (1.0 + fp * fp).sqrt())
}

/// Robin data along the whole interface; (S, Lambda) are the values carried
/// by the boundary streamline, constant in x.
pub fn robin_data_b(
    curve: &FreeBoundaryCurve,
    s_interface: f64,
    lambda_interface: f64,
    gas: &GasParameters,
    background: &BackgroundState,
) -> Result<RobinData> {
    let n = curve.n_samples() - 1;
    let mut b = Vec::with_capacity(n + 1);
    for i in 0..=n {
        match robin_point(
            curve.f(i),
            curve.fp(i),
            s_interface,
            lambda_interface,
            gas,
            background,
        ) {
            Ok(v) => b.push(v),
            Err(radicand) => {
                return Err(SolverError::InterfaceEnergy {
                    x: curve.l * i as f64 / n as f64,
                    value: radicand,
                })
            }
        }
    }
    Ok(RobinData { b })
}

/// Result of one free-boundary update.
#[derive(Debug, Clone)]
pub struct BoundaryUpdate {
    pub curve: FreeBoundaryCurve,
    /// Pre-anchoring deviation |f(0) - 1/2| of the raw formula, a quadrature
    /// drift indicator.
    pub anchor_drift: f64,
}

/// Mass-flux update
///
///   f(x)^2 = f*(x)^2 + (2/(rho0 u0)) [ int_0^{1/2} t rho u_x(0,t) dt
///                                      - int_0^{f*(x)} t rho u_x(x,t) dt ],
///
/// with trapezoid quadrature on the fitted columns (second order, matching
/// the update's role inside the middle loop; the conservation diagnostic uses
/// the fourth-order rule instead). The geometry must be the one fitted to f*.
pub fn update_free_boundary(
    f_star: &FreeBoundaryCurve,
    rho_ux: &Field,
    gas: &GasParameters,
    geom: &Geometry,
) -> Result<BoundaryUpdate> {
    let floor = 0.5 * gas.rho0_minus * gas.u0;
    let nx = geom.grid.nx;
    let nr = geom.grid.nr;
    let column_flux = |i: usize| -> Result<f64> {
        let fi = f_star.f(i);
        let integrand: Vec<f64> = (0..=nr)
            .map(|j| geom.grid.eta(j) * rho_ux.at(i, j))
            .collect();
        for j in 0..=nr {
            if rho_ux.at(i, j) < floor {
                return Err(SolverError::FluxFloor {
                    x: geom.grid.x(i),
                    r: geom.r(i, j),
                    value: rho_ux.at(i, j),
                    floor,
                });
            }
        }
        Ok(fi * fi * integrate_trapezoid(&integrand, geom.grid.h_eta))
    };
    let entrance = column_flux(0)?;
    let scale = 2.0 / (gas.rho0_minus * gas.u0);
    let mut samples = Vec::with_capacity(nx + 1);
    for i in 0..=nx {
        let fi = f_star.f(i);
        let radicand = fi * fi + scale * (entrance - column_flux(i)?);
        if radicand < F_RADICAND_FLOOR {
            return Err(SolverError::BoundaryCollapse {
                x: geom.grid.x(i),
                value: radicand,
            });
        }
        samples.push(radicand.sqrt());
    }
    let anchor_drift = (samples[0] - 0.5).abs();
    samples[0] = 0.5;
    // The constructor clamps endpoint slopes and enforces the band.
    let curve = FreeBoundaryCurve::new(f_star.l, samples)?;
    Ok(BoundaryUpdate {
        curve,
        anchor_drift,
    })
}

/// Kinematic residual r(x) = f'(x) - (u_r/u_x)(x, f(x)) along the interface;
/// a verification quantity, not a solve.
pub fn free_boundary_ode_residual(
    curve: &FreeBoundaryCurve,
    u_x: &Field,
    u_r: &Field,
    geom: &Geometry,
) -> Vec<f64> {
    let nr = geom.grid.nr;
    (0..=geom.grid.nx)
        .map(|i| {
            let ux = u_x.at(i, nr);
            debug_assert!(ux > 0.0, "interface axial velocity must stay positive");
            curve.fp(i) - u_r.at(i, nr) / ux
        })
        .collect()
}
