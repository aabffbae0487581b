//! The three nested fixed-point loops.
//!
//! Inner: alternate psi and phi solves at frozen (f, S, Lambda) until the
//! elliptic pair stops moving. Middle: re-solve the pair and update the free
//! boundary from mass-flux balance, remapping the geometry each pass. Outer:
//! rebuild the stream function on the converged middle state, transport
//! (S, Lambda) from the entrance, and extend onto the strip. Divergence at
//! any level is reported with its history, never hidden.

use std::time::Instant;

use crate::elliptic::{
    assemble_flux_f, assemble_linearization_aii, assemble_source_g, t_part, PhiProblem,
    PhiSolver, PsiProblem, PsiSolver, TransversalPart,
};
use crate::error::{IterationLevel, Result, SolverError};
use crate::free_boundary::{robin_data_b, update_free_boundary, RobinData};
use crate::gas::{
    bernoulli_of, density_h, derive_background, pressure, BackgroundState, GasParameters,
    VelocityTriple,
};
use crate::geometry::{metric_coefficients, FreeBoundaryCurve, Geometry};
use crate::grid::{AxisKind, Field, ReferenceGrid};
use crate::interp::integrate_fourth_order;
use crate::profile::EntranceProfile;
use crate::transport::{
    build_entrance_flux_map, compute_footpoint_r0, compute_stream_h, extend_w, strip_cells,
    transport_s_lambda, QuadratureRule, StripField,
};

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub gas: GasParameters,
    pub l: f64,
    pub nx: usize,
    pub nr: usize,
    pub tol_inner: f64,
    pub tol_middle: f64,
    pub tol_outer: f64,
    pub max_iter: usize,
    /// Picard relaxation factor in (0, 1]; 1 is the paper-faithful default.
    pub relaxation: f64,
}

impl SolverConfig {
    pub fn new(gas: GasParameters, l: f64, nx: usize, nr: usize) -> Result<Self> {
        let config = Self {
            gas,
            l,
            nx,
            nr,
            tol_inner: 1e-10,
            tol_middle: 1e-9,
            tol_outer: 1e-8,
            max_iter: 50,
            relaxation: 1.0,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        ReferenceGrid::new(self.l, self.nx, self.nr)?;
        for (name, tol) in [
            ("tol_inner", self.tol_inner),
            ("tol_middle", self.tol_middle),
            ("tol_outer", self.tol_outer),
        ] {
            if !(tol > 0.0) {
                return Err(SolverError::InvalidParameter(format!(
                    "{name} must be positive, got {tol}"
                )));
            }
        }
        if !(self.relaxation > 0.0 && self.relaxation <= 1.0) {
            return Err(SolverError::InvalidParameter(format!(
                "relaxation must lie in (0, 1], got {}",
                self.relaxation
            )));
        }
        if self.max_iter == 0 {
            return Err(SolverError::InvalidParameter(
                "max_iter must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Pointwise derived quantities of an iterate.
#[derive(Debug, Clone)]
pub struct FlowFields {
    pub u_x: Field,
    pub u_r: Field,
    pub u_theta: Field,
    pub rho: Field,
    pub p: Field,
    pub rho_ux: Field,
}

/// Reconstructs (u, rho, p) from the potentials and transported fields.
pub fn flow_fields(
    phi: &Field,
    psi: &Field,
    s: &Field,
    lambda: &Field,
    geom: &Geometry,
    gas: &GasParameters,
    background: &BackgroundState,
) -> Result<FlowFields> {
    let trans = t_part(psi, geom);
    let mut u_x = Field::zeros(&geom.grid, AxisKind::EvenAtAxis);
    let mut u_r = Field::zeros(&geom.grid, AxisKind::VanishesAtAxis);
    let mut u_theta = Field::zeros(&geom.grid, AxisKind::VanishesAtAxis);
    let mut rho = Field::zeros(&geom.grid, AxisKind::EvenAtAxis);
    let mut p = Field::zeros(&geom.grid, AxisKind::EvenAtAxis);
    let mut rho_ux = Field::zeros(&geom.grid, AxisKind::EvenAtAxis);
    for j in 0..=geom.grid.nr {
        for i in 0..=geom.grid.nx {
            let x = geom.grid.x(i);
            let r = geom.r(i, j);
            let ux = gas.u0 + geom.ddx(phi, i, j) + trans.t_x.at(i, j);
            let ur = geom.ddr(phi, i, j) + trans.t_r.at(i, j);
            let ut = if j == 0 {
                // lim Lambda/r by the odd reflection derivative.
                geom.ddr(lambda, i, 0)
            } else {
                lambda.at(i, j) / r
            };
            let q = VelocityTriple::new(ux, ur, ut);
            let h = density_h(s.at(i, j), &q, background.b0_minus, gas.gamma)
                .map_err(|e| e.at(x, r))?;
            u_x.set(i, j, ux);
            u_r.set(i, j, ur);
            u_theta.set(i, j, ut);
            rho.set(i, j, h);
            p.set(i, j, pressure(s.at(i, j), h, gas.gamma));
            rho_ux.set(i, j, h * ux);
        }
    }
    Ok(FlowFields {
        u_x,
        u_r,
        u_theta,
        rho,
        p,
        rho_ux,
    })
}

/// Converged solution with its derived caches.
#[derive(Debug, Clone)]
pub struct SolutionState {
    pub geometry: Geometry,
    /// Potential correction phi - u0 x.
    pub phi: Field,
    pub psi: Field,
    pub s: Field,
    pub lambda: Field,
    pub fields: FlowFields,
    pub gas: GasParameters,
    pub background: BackgroundState,
}

#[derive(Debug, Clone, Default)]
pub struct SolveReport {
    pub converged: bool,
    pub sigma: f64,
    pub outer_iterations: usize,
    pub middle_iterations: usize,
    pub inner_iterations: usize,
    /// Successive-change max-norms of the last loop at each level.
    pub outer_history: Vec<f64>,
    pub middle_history: Vec<f64>,
    pub inner_history: Vec<f64>,
    pub bernoulli_deviation: f64,
    /// Max columnwise mass-flux imbalance, fourth-order quadrature.
    pub flux_imbalance: f64,
    /// Max kinematic residual |f' - u_r/u_x| on the interface.
    pub boundary_residual: f64,
    pub anchor_drift: f64,
    pub min_density: f64,
    /// Min of c^2 - |u|^2 over the grid.
    pub min_subsonic_margin: f64,
    pub f_deviation: f64,
    pub u_deviation: f64,
    pub wall_time_s: f64,
}

/// Outcome of a full solve: the report is always present, the state only on
/// success.
#[derive(Debug)]
pub struct SolveOutcome {
    pub state: Option<SolutionState>,
    pub report: SolveReport,
    pub error: Option<SolverError>,
}

/// Transported data sampled from the strip onto the fitted grid.
struct SampledTransport {
    s: Field,
    lambda: Field,
    dr_s: Field,
    dr_lambda: Field,
}

fn sample_transport(
    strip_s: &StripField,
    strip_lambda: &StripField,
    geom: &Geometry,
) -> SampledTransport {
    let ds = strip_s.radial_derivative();
    let dl = strip_lambda.radial_derivative();
    let s = Field::from_fn(&geom.grid, AxisKind::EvenAtAxis, |i, j| {
        strip_s.sample(i, geom.r(i, j))
    });
    let lambda = Field::from_fn(&geom.grid, AxisKind::VanishesAtAxis, |i, j| {
        if j == 0 {
            0.0
        } else {
            strip_lambda.sample(i, geom.r(i, j))
        }
    });
    let dr_s = Field::from_fn(&geom.grid, AxisKind::VanishesAtAxis, |i, j| {
        ds.sample(i, geom.r(i, j))
    });
    let dr_lambda = Field::from_fn(&geom.grid, AxisKind::EvenAtAxis, |i, j| {
        dl.sample(i, geom.r(i, j))
    });
    SampledTransport {
        s,
        lambda,
        dr_s,
        dr_lambda,
    }
}

/// Checks a successive-change history for sustained growth.
fn diverging(history: &[f64], tol: f64) -> bool {
    if history.len() < 4 {
        return false;
    }
    let k = history.len();
    let tail = &history[k - 4..];
    tail[3] > tol && (1..4).all(|m| tail[m] >= tail[m - 1])
}

struct InnerResult {
    phi: Field,
    psi: Field,
    history: Vec<f64>,
    iterations: usize,
}

/// Alternating psi/phi Picard iteration at frozen (f, S, Lambda).
#[allow(clippy::too_many_arguments)]
fn solve_inner(
    geom: &Geometry,
    transported: &SampledTransport,
    robin: &RobinData,
    dirichlet_entrance: &[f64],
    phi0: Field,
    psi0: Field,
    config: &SolverConfig,
    background: &BackgroundState,
) -> Result<InnerResult> {
    let coeffs = assemble_linearization_aii(&config.gas, background)?;
    let phi_solver = PhiSolver::new(&coeffs, geom)?;
    let psi_solver = PsiSolver::new(geom)?;
    let mut phi = phi0;
    let mut psi = psi0;
    let mut history = Vec::new();
    let omega = config.relaxation;
    for iteration in 1..=config.max_iter {
        let trans: TransversalPart = t_part(&psi, geom);
        let gpx = Field::from_fn(&geom.grid, AxisKind::EvenAtAxis, |i, j| {
            config.gas.u0 + geom.ddx(&phi, i, j)
        });
        let gpr = Field::from_fn(&geom.grid, AxisKind::VanishesAtAxis, |i, j| {
            geom.ddr(&phi, i, j)
        });
        let source = assemble_source_g(
            &transported.s,
            &transported.lambda,
            &transported.dr_s,
            &transported.dr_lambda,
            &trans,
            &gpx,
            &gpr,
            geom,
            &config.gas,
            background,
        )?;
        let psi_new = psi_solver.solve(&PsiProblem::new(source, robin.b.clone(), geom)?, geom)?;
        let (flux_x, flux_r) = assemble_flux_f(
            &transported.s,
            &phi,
            &psi_new,
            &transported.lambda,
            geom,
            &config.gas,
            background,
        )?;
        let phi_new = phi_solver.solve(
            &PhiProblem {
                flux_x,
                flux_r,
                dirichlet_entrance: dirichlet_entrance.to_vec(),
            },
            geom,
        )?;
        let change = psi_new.max_abs_diff(&psi).max(phi_new.max_abs_diff(&phi));
        history.push(change);
        blend(&mut psi, &psi_new, omega);
        blend(&mut phi, &phi_new, omega);
        if change < config.tol_inner {
            return Ok(InnerResult {
                phi,
                psi,
                history,
                iterations: iteration,
            });
        }
        if diverging(&history, config.tol_inner) {
            return Err(SolverError::Divergence {
                level: IterationLevel::Inner,
                iterations: iteration,
                history,
            });
        }
    }
    Err(SolverError::Divergence {
        level: IterationLevel::Inner,
        iterations: config.max_iter,
        history,
    })
}

fn blend(current: &mut Field, new: &Field, omega: f64) {
    for (c, n) in current.data_mut().iter_mut().zip(new.data().iter()) {
        *c += omega * (*n - *c);
    }
}

struct MiddleResult {
    geom: Geometry,
    phi: Field,
    psi: Field,
    transported: SampledTransport,
    fields: FlowFields,
    history: Vec<f64>,
    inner_history: Vec<f64>,
    iterations: usize,
    inner_total: usize,
    anchor_drift: f64,
}

/// Free-boundary loop at frozen strip data (S*, Lambda*).
fn solve_middle(
    strip_s: &StripField,
    strip_lambda: &StripField,
    profile: &EntranceProfile,
    f_init: FreeBoundaryCurve,
    config: &SolverConfig,
    background: &BackgroundState,
) -> Result<MiddleResult> {
    let (s_if, lambda_if) = profile.interface_trace();
    let mut curve = f_init;
    let mut phi: Option<Field> = None;
    let mut psi: Option<Field> = None;
    let mut history = Vec::new();
    let mut inner_total = 0;
    let mut anchor_drift = 0.0f64;
    for iteration in 1..=config.max_iter {
        let grid = ReferenceGrid::new(config.l, config.nx, config.nr)?;
        let geom = metric_coefficients(curve.clone(), grid)?;
        let transported = sample_transport(strip_s, strip_lambda, &geom);
        let robin = robin_data_b(&curve, s_if, lambda_if, &config.gas, background)?;
        let radii: Vec<f64> = (0..=config.nr)
            .map(|j| geom.curve.f(0) * geom.grid.eta(j))
            .collect();
        let dirichlet = profile.entrance_potential(&radii);
        let inner = solve_inner(
            &geom,
            &transported,
            &robin,
            &dirichlet,
            phi.take()
                .unwrap_or_else(|| Field::zeros(&geom.grid, AxisKind::EvenAtAxis)),
            psi.take()
                .unwrap_or_else(|| Field::zeros(&geom.grid, AxisKind::VanishesAtAxis)),
            config,
            background,
        )?;
        inner_total += inner.iterations;
        let fields = flow_fields(
            &inner.phi,
            &inner.psi,
            &transported.s,
            &transported.lambda,
            &geom,
            &config.gas,
            background,
        )?;
        let update = update_free_boundary(&curve, &fields.rho_ux, &config.gas, &geom)?;
        anchor_drift = anchor_drift.max(update.anchor_drift);
        let change = update.curve.max_abs_diff(&curve);
        history.push(change);
        curve = if config.relaxation < 1.0 {
            let blended: Vec<f64> = curve
                .samples()
                .iter()
                .zip(update.curve.samples().iter())
                .map(|(c, n)| c + config.relaxation * (n - c))
                .collect();
            FreeBoundaryCurve::new(config.l, blended)?
        } else {
            update.curve
        };
        if change < config.tol_middle {
            let grid = ReferenceGrid::new(config.l, config.nx, config.nr)?;
            let geom = metric_coefficients(curve, grid)?;
            return Ok(MiddleResult {
                geom,
                phi: inner.phi,
                psi: inner.psi,
                transported,
                fields,
                history,
                inner_history: inner.history,
                iterations: iteration,
                inner_total,
                anchor_drift,
            });
        }
        if diverging(&history, config.tol_middle) {
            return Err(SolverError::Divergence {
                level: IterationLevel::Middle,
                iterations: iteration,
                history,
            });
        }
        phi = Some(inner.phi);
        psi = Some(inner.psi);
    }
    Err(SolverError::Divergence {
        level: IterationLevel::Middle,
        iterations: config.max_iter,
        history,
    })
}

/// Max over columns of the fourth-order mass-flux imbalance against the
/// entrance column.
pub fn flux_imbalance_max(rho_ux: &Field, geom: &Geometry) -> f64 {
    let column = |i: usize| -> f64 {
        let f = geom.curve.f(i);
        let integrand: Vec<f64> = (0..=geom.grid.nr)
            .map(|j| geom.grid.eta(j) * rho_ux.at(i, j))
            .collect();
        f * f * integrate_fourth_order(&integrand, geom.grid.h_eta)
    };
    let entrance = column(0);
    (1..=geom.grid.nx).fold(0.0f64, |m, i| m.max((column(i) - entrance).abs()))
}

/// Outer transport loop; errors carry the partial history through the report
/// assembled by `solve_full`.
pub fn solve_outer_w(
    profile: &EntranceProfile,
    config: &SolverConfig,
) -> Result<(SolutionState, SolveReport)> {
    config.validate()?;
    profile_grid_guard(config)?;
    let background = derive_background(&config.gas)?;
    let n_strip = strip_cells(config.nr);
    // Background initial guess for the transported pair.
    let mut strip_s = StripField::zeros(config.nx, n_strip);
    for i in 0..=config.nx {
        for k in 0..=n_strip {
            strip_s.set(i, k, background.s0_minus);
        }
    }
    let mut strip_lambda = StripField::zeros(config.nx, n_strip);
    let mut curve = FreeBoundaryCurve::constant_half(config.l, config.nx);
    let mut report = SolveReport {
        sigma: profile.sigma,
        ..Default::default()
    };
    let mut last: Option<MiddleResult> = None;
    for iteration in 1..=config.max_iter {
        let middle = solve_middle(
            &strip_s,
            &strip_lambda,
            profile,
            curve,
            config,
            &background,
        )?;
        report.middle_iterations += middle.iterations;
        report.inner_iterations += middle.inner_total;
        report.anchor_drift = report.anchor_drift.max(middle.anchor_drift);
        let w = compute_stream_h(
            &middle.fields.rho_ux,
            &middle.geom,
            &config.gas,
            QuadratureRule::FourthOrder,
        )?;
        let map = build_entrance_flux_map(&w.column(0), middle.geom.curve.f(0))?;
        let r0 = compute_footpoint_r0(&w, &map, &middle.geom)?;
        let (s, lambda) = transport_s_lambda(profile, &r0, &middle.geom);
        let (s_new, lambda_new) = extend_w(&s, &lambda, &middle.geom, n_strip);
        let change = s_new
            .max_abs_diff(&strip_s)
            .max(lambda_new.max_abs_diff(&strip_lambda));
        report.outer_history.push(change);
        strip_s = s_new;
        strip_lambda = lambda_new;
        curve = middle.geom.curve.clone();
        report.outer_iterations = iteration;
        report.middle_history = middle.history.clone();
        report.inner_history = middle.inner_history.clone();
        last = Some(middle);
        if change < config.tol_outer {
            break;
        }
        if diverging(&report.outer_history, config.tol_outer) || iteration == config.max_iter {
            return Err(SolverError::Divergence {
                level: IterationLevel::Outer,
                iterations: iteration,
                history: report.outer_history.clone(),
            });
        }
    }
    let middle = last.expect("at least one outer iteration ran");
    let state = SolutionState {
        phi: middle.phi,
        psi: middle.psi,
        s: middle.transported.s,
        lambda: middle.transported.lambda,
        fields: middle.fields,
        geometry: middle.geom,
        gas: config.gas,
        background,
    };
    finalize_report(&state, &mut report);
    Ok((state, report))
}

fn profile_grid_guard(config: &SolverConfig) -> Result<()> {
    // The entrance potential quadrature and strip sampling assume at least
    // the minimum grid, already enforced by ReferenceGrid::new.
    ReferenceGrid::new(config.l, config.nx, config.nr).map(|_| ())
}

fn finalize_report(state: &SolutionState, report: &mut SolveReport) {
    let geom = &state.geometry;
    let gas = &state.gas;
    let g = gas.gamma;
    let mut bern = 0.0f64;
    let mut min_rho = f64::INFINITY;
    let mut margin = f64::INFINITY;
    let mut u_dev = 0.0f64;
    for j in 0..=geom.grid.nr {
        for i in 0..=geom.grid.nx {
            let u = VelocityTriple::new(
                state.fields.u_x.at(i, j),
                state.fields.u_r.at(i, j),
                state.fields.u_theta.at(i, j),
            );
            let rho = state.fields.rho.at(i, j);
            let p = state.fields.p.at(i, j);
            bern = bern.max((bernoulli_of(&u, rho, p, g) - state.background.b0_minus).abs());
            min_rho = min_rho.min(rho);
            margin = margin.min(g * p / rho - u.norm_sq());
            u_dev = u_dev.max(
                (u.u_x - gas.u0)
                    .abs()
                    .max(u.u_r.abs())
                    .max(u.u_theta.abs()),
            );
        }
    }
    report.bernoulli_deviation = bern;
    report.min_density = min_rho;
    report.min_subsonic_margin = margin;
    report.u_deviation = u_dev;
    report.f_deviation = geom.curve.max_deviation_from_half();
    report.flux_imbalance = flux_imbalance_max(&state.fields.rho_ux, geom);
    let residual = crate::free_boundary::free_boundary_ode_residual(
        &geom.curve,
        &state.fields.u_x,
        &state.fields.u_r,
        geom,
    );
    report.boundary_residual = residual.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    report.converged =
        min_rho >= 0.5 * gas.rho0_minus && margin > 0.0 && report.bernoulli_deviation.is_finite();
}

/// Full driver: outer loop plus residual gates; always returns a report.
pub fn solve_full(profile: &EntranceProfile, config: &SolverConfig) -> SolveOutcome {
    let start = Instant::now();
    match solve_outer_w(profile, config) {
        Ok((state, mut report)) => {
            report.wall_time_s = start.elapsed().as_secs_f64();
            SolveOutcome {
                state: Some(state),
                report,
                error: None,
            }
        }
        Err(err) => {
            let mut report = SolveReport {
                sigma: profile.sigma,
                ..Default::default()
            };
            if let SolverError::Divergence { ref history, .. } = err {
                report.outer_history = history.clone();
            }
            report.converged = false;
            report.wall_time_s = start.elapsed().as_secs_f64();
            SolveOutcome {
                state: None,
                report,
                error: Some(err),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn reference_config(nx: usize, nr: usize) -> SolverConfig {
        let gas = GasParameters::new(1.4, 1.0, 1.0, 1.0, 0.3).unwrap();
        SolverConfig::new(gas, 2.0, nx, nr).unwrap()
    }

    #[test]
    fn config_validation_gates() {
        let gas = GasParameters::new(1.4, 1.0, 1.0, 1.0, 0.3).unwrap();
        assert!(SolverConfig::new(gas, 2.0, 8, 32).is_err());
        let mut config = SolverConfig::new(gas, 2.0, 32, 32).unwrap();
        config.relaxation = 1.5;
        assert!(config.validate().is_err());
        config.relaxation = 1.0;
        config.tol_inner = 0.0;
        assert!(config.validate().is_err());
    }

    #[test]
    fn background_is_an_exact_fixed_point() {
        let config = reference_config(32, 32);
        let profile = EntranceProfile::uniform(1.0);
        let outcome = solve_full(&profile, &config);
        assert!(outcome.error.is_none(), "{:?}", outcome.error);
        let report = &outcome.report;
        assert!(report.converged);
        assert_eq!(report.outer_iterations, 1);
        assert!(report.f_deviation < 1e-12, "f dev {}", report.f_deviation);
        assert!(report.u_deviation < 1e-12, "u dev {}", report.u_deviation);
        assert!(report.bernoulli_deviation < 1e-12);
        assert!(report.flux_imbalance < 1e-12);
        let state = outcome.state.unwrap();
        assert!(state.psi.max_abs() < 1e-12);
        assert!(state.phi.max_abs() < 1e-12);
        for &rho in state.fields.rho.data() {
            assert_abs_diff_eq!(rho, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn small_sigma_converges_with_small_response() {
        let config = reference_config(32, 32);
        let profile = EntranceProfile::scaled_bump(1.0, 0.05, 1e-3).unwrap();
        let outcome = solve_full(&profile, &config);
        assert!(outcome.error.is_none(), "{:?}", outcome.error);
        let report = &outcome.report;
        assert!(report.converged);
        // Response is O(sigma), far below O(1).
        assert!(report.f_deviation < 0.05, "f dev {}", report.f_deviation);
        assert!(report.u_deviation < 0.05, "u dev {}", report.u_deviation);
        assert!(report.f_deviation > 0.0);
        assert!(report.bernoulli_deviation < 1e-10);
        assert!(report.min_subsonic_margin > 0.0);
    }

    #[test]
    fn zero_swirl_keeps_lambda_zero() {
        let config = reference_config(32, 32);
        let profile = EntranceProfile::bump_family(1.0, 0.05, 1e-3, 0.0, 1e-3).unwrap();
        let outcome = solve_full(&profile, &config);
        assert!(outcome.error.is_none(), "{:?}", outcome.error);
        let state = outcome.state.unwrap();
        assert!(state.lambda.max_abs() <= 1e-12);
        assert!(state.fields.u_theta.max_abs() <= 1e-12);
    }

    #[test]
    fn large_sigma_fails_with_structured_error() {
        let config = reference_config(32, 32);
        let profile = EntranceProfile::scaled_bump(1.0, 0.05, 0.5).unwrap();
        let outcome = solve_full(&profile, &config);
        assert!(outcome.error.is_some());
        assert!(!outcome.report.converged);
        assert!(outcome.state.is_none());
    }

    #[test]
    fn deterministic_reports() {
        let config = reference_config(32, 32);
        let profile = EntranceProfile::scaled_bump(1.0, 0.05, 1e-3).unwrap();
        let a = solve_full(&profile, &config);
        let b = solve_full(&profile, &config);
        let sa = a.state.unwrap();
        let sb = b.state.unwrap();
        assert_eq!(sa.fields.rho.data(), sb.fields.rho.data());
        assert_eq!(
            sa.geometry.curve.samples(),
            sb.geometry.curve.samples()
        );
        assert_eq!(a.report.f_deviation, b.report.f_deviation);
    }

    #[test]
    fn inner_divergence_detector() {
        assert!(!diverging(&[1.0, 0.5, 0.25], 1e-10));
        assert!(!diverging(&[1.0, 0.9, 0.8, 0.7], 1e-10));
        assert!(diverging(&[0.1, 0.2, 0.3, 0.4], 1e-10));
        // Growth below tolerance is not divergence.
        assert!(!diverging(&[1e-14, 2e-14, 3e-14, 4e-14], 1e-10));
    }
}
