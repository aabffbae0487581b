//! The two linear elliptic solves of each inner iteration.
//!
//! The potential correction phi = varphi - u0*x solves the frozen-coefficient
//! divergence-form problem
//!
//!   a11 dxx(phi) + a22 (drr + (1/r) dr)(phi) = div F,
//!
//! with all nonlinearity pushed into the flux F. The angular stream component
//! psi solves the axis-singular problem
//!
//!   -(dxx + (1/r) dr(r dr) - 1/r^2) psi = G,
//!
//! with psi = 0 on the axis, reflection (Neumann) closure in x, and the Robin
//! condition (1/r) grad(r psi) . n = B on the contact row. Both operators are
//! pulled back through the boundary-fitted map and solved by banded LU, one
//! factorization per geometry.

use crate::banded::{BandedLu, BandedMatrix};
use crate::error::{Result, SolverError};
use crate::gas::{density_h, BackgroundState, GasParameters, VelocityTriple};
use crate::geometry::Geometry;
use crate::grid::{AxisKind, Field};
use crate::interp::{GAUSS4_NODES, GAUSS4_WEIGHTS};

/// Diagonal ellipticity coefficients of the background linearization.
#[derive(Debug, Clone, Copy)]
pub struct LinearizationCoefficients {
    pub a11: f64,
    pub a22: f64,
    pub a33: f64,
}

/// a11 = rho0 (1 - u0^2/c0^2), a22 = a33 = rho0, per the derivative of the
/// momentum flux A_i = H s_i at the background state.
pub fn assemble_linearization_aii(
    gas: &GasParameters,
    background: &BackgroundState,
) -> Result<LinearizationCoefficients> {
    let mach_sq = gas.u0 * gas.u0 / (background.c0 * background.c0);
    let a11 = gas.rho0_minus * (1.0 - mach_sq);
    let a22 = gas.rho0_minus;
    if a11 <= 1e-6 * a22 {
        return Err(SolverError::InvalidParameter(format!(
            "sonic degeneration: a11 = {a11} (Mach^2 = {mach_sq})"
        )));
    }
    Ok(LinearizationCoefficients { a11, a22, a33: a22 })
}

/// Transversal (curl-part) velocity components reconstructed from psi:
/// t_x = (1/r) d(r psi)/dr, t_r = -dpsi/dx; axis values by the limits.
#[derive(Debug, Clone)]
pub struct TransversalPart {
    pub t_x: Field,
    pub t_r: Field,
}

pub fn t_part(psi: &Field, geom: &Geometry) -> TransversalPart {
    let t_x = Field::from_fn(&geom.grid, AxisKind::EvenAtAxis, |i, j| {
        let dr_psi = geom.ddr(psi, i, j);
        if j == 0 {
            2.0 * dr_psi
        } else {
            dr_psi + psi.at(i, j) / geom.r(i, j)
        }
    });
    let t_r = Field::from_fn(&geom.grid, AxisKind::VanishesAtAxis, |i, j| {
        -geom.ddx(psi, i, j)
    });
    TransversalPart { t_x, t_r }
}

/// Data of the linearized potential problem.
#[derive(Debug, Clone)]
pub struct PhiProblem {
    /// Meridional components of the flux F; flux_r is odd across the axis.
    pub flux_x: Field,
    pub flux_r: Field,
    /// Dirichlet samples phi_en(r_j) on the entrance column; the contact and
    /// exit values are zero.
    pub dirichlet_entrance: Vec<f64>,
}

impl PhiProblem {
    pub fn homogeneous(geom: &Geometry) -> Self {
        Self {
            flux_x: Field::zeros(&geom.grid, AxisKind::EvenAtAxis),
            flux_r: Field::zeros(&geom.grid, AxisKind::VanishesAtAxis),
            dirichlet_entrance: vec![0.0; geom.grid.nr + 1],
        }
    }

    fn validate(&self, geom: &Geometry) -> Result<()> {
        if self.dirichlet_entrance.len() != geom.grid.nr + 1 {
            return Err(SolverError::InvalidParameter(
                "entrance Dirichlet data length does not match the grid".into(),
            ));
        }
        let corner = self.dirichlet_entrance[geom.grid.nr];
        if corner.abs() > 1e-12 {
            return Err(SolverError::InvalidParameter(format!(
                "phi_en(1/2) = {corner} must vanish for continuity with the contact value"
            )));
        }
        for &v in self
            .flux_x
            .data()
            .iter()
            .chain(self.flux_r.data().iter())
        {
            if !v.is_finite() {
                return Err(SolverError::InvalidParameter(
                    "flux field contains non-finite entries".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Factored discrete phi operator for one geometry.
pub struct PhiSolver {
    lu: BandedLu,
}

impl PhiSolver {
    pub fn new(coeffs: &LinearizationCoefficients, geom: &Geometry) -> Result<Self> {
        let nx = geom.grid.nx;
        let nr = geom.grid.nr;
        let nx1 = nx + 1;
        let n = nx1 * (nr + 1);
        let (h_xi, h_eta, l) = (geom.grid.h_xi, geom.grid.h_eta, geom.grid.l);
        let bw = nx + 2;
        let mut mat = BandedMatrix::new(n, bw, bw);
        let idx = |i: usize, j: usize| j * nx1 + i;
        for j in 0..=nr {
            for i in 0..=nx {
                let row = idx(i, j);
                if i == 0 || i == nx || j == nr {
                    mat.set(row, row, 1.0);
                    continue;
                }
                let f = geom.curve.f(i);
                if j == 0 {
                    // Axis row: a11 dxx + 2 a22 drr with the even ghost.
                    let cxx = coeffs.a11 / (l * l * h_xi * h_xi);
                    mat.add(row, idx(i - 1, 0), cxx);
                    mat.add(row, row, -2.0 * cxx);
                    mat.add(row, idx(i + 1, 0), cxx);
                    let cee = 2.0 * coeffs.a22 / (f * f * h_eta * h_eta);
                    mat.add(row, idx(i, 1), 2.0 * cee);
                    mat.add(row, row, -2.0 * cee);
                    continue;
                }
                let c = geom.cx_eta(i, j);
                let e = geom.dxx_eta_coeff(i, j);
                let r = geom.r(i, j);
                let cxx = coeffs.a11 / (l * l);
                let cross = coeffs.a11 * 2.0 * c / l;
                let cee = coeffs.a11 * c * c + coeffs.a22 / (f * f);
                let ce1 = coeffs.a11 * e + coeffs.a22 / (r * f);
                // d_xixi
                let w = cxx / (h_xi * h_xi);
                mat.add(row, idx(i - 1, j), w);
                mat.add(row, row, -2.0 * w);
                mat.add(row, idx(i + 1, j), w);
                // d_etaeta
                let w = cee / (h_eta * h_eta);
                mat.add(row, idx(i, j - 1), w);
                mat.add(row, row, -2.0 * w);
                mat.add(row, idx(i, j + 1), w);
                // d_xieta (central cross)
                if cross != 0.0 {
                    let w = cross / (4.0 * h_xi * h_eta);
                    mat.add(row, idx(i + 1, j + 1), w);
                    mat.add(row, idx(i - 1, j + 1), -w);
                    mat.add(row, idx(i + 1, j - 1), -w);
                    mat.add(row, idx(i - 1, j - 1), w);
                }
                // d_eta
                let w = ce1 / (2.0 * h_eta);
                mat.add(row, idx(i, j + 1), w);
                mat.add(row, idx(i, j - 1), -w);
            }
        }
        Ok(Self { lu: mat.factor()? })
    }

    /// Solves the assembled problem for the given flux and Dirichlet data.
    pub fn solve(&self, problem: &PhiProblem, geom: &Geometry) -> Result<Field> {
        problem.validate(geom)?;
        let nx = geom.grid.nx;
        let nr = geom.grid.nr;
        let nx1 = nx + 1;
        let mut rhs = vec![0.0; nx1 * (nr + 1)];
        for j in 0..=nr {
            for i in 0..=nx {
                let row = j * nx1 + i;
                if i == 0 {
                    rhs[row] = problem.dirichlet_entrance[j];
                } else if i == nx || j == nr {
                    rhs[row] = 0.0;
                } else if j == 0 {
                    // div F at the axis: dx F_x + 2 dr F_r (F_r odd, so ddr
                    // uses the reflection ghost).
                    rhs[row] = geom.ddx(&problem.flux_x, i, 0)
                        + 2.0 * geom.ddr(&problem.flux_r, i, 0);
                } else {
                    let fr = problem.flux_r.at(i, j);
                    rhs[row] = geom.ddx(&problem.flux_x, i, j)
                        + geom.ddr(&problem.flux_r, i, j)
                        + fr / geom.r(i, j);
                }
            }
        }
        self.lu.solve(&mut rhs);
        let mut field = Field::zeros(&geom.grid, AxisKind::EvenAtAxis);
        field.data_mut().copy_from_slice(&rhs);
        Ok(field)
    }
}

/// One-call convenience wrapper: assemble, factor, solve.
pub fn solve_phi(
    problem: &PhiProblem,
    coeffs: &LinearizationCoefficients,
    geom: &Geometry,
) -> Result<Field> {
    PhiSolver::new(coeffs, geom)?.solve(problem, geom)
}

/// Data of the angular stream-component problem.
#[derive(Debug, Clone)]
pub struct PsiProblem {
    /// Source G, vanishing on the axis row.
    pub source: Field,
    /// Robin data samples along the contact row.
    pub robin: Vec<f64>,
    /// Robin coefficient mu(x) = -1/(f sqrt(1+f'^2)) < 0.
    pub mu: Vec<f64>,
}

impl PsiProblem {
    pub fn new(source: Field, robin: Vec<f64>, geom: &Geometry) -> Result<Self> {
        let nx = geom.grid.nx;
        if robin.len() != nx + 1 {
            return Err(SolverError::InvalidParameter(
                "Robin data length does not match the grid".into(),
            ));
        }
        for i in 0..=nx {
            if source.at(i, 0) != 0.0 {
                return Err(SolverError::InvalidParameter(format!(
                    "source G must vanish on the axis, got {} at i = {i}",
                    source.at(i, 0)
                )));
            }
        }
        let mu: Vec<f64> = (0..=nx)
            .map(|i| {
                let fp = geom.curve.fp(i);
                -1.0 / (geom.curve.f(i) * (1.0 + fp * fp).sqrt())
            })
            .collect();
        debug_assert!(mu.iter().all(|&m| m < 0.0));
        Ok(Self { source, robin, mu })
    }

    pub fn homogeneous(geom: &Geometry) -> Self {
        Self::new(
            Field::zeros(&geom.grid, AxisKind::VanishesAtAxis),
            vec![0.0; geom.grid.nx + 1],
            geom,
        )
        .expect("zero data is valid")
    }
}

/// Factored discrete psi operator for one geometry.
pub struct PsiSolver {
    lu: BandedLu,
}

impl PsiSolver {
    pub fn new(geom: &Geometry) -> Result<Self> {
        let nx = geom.grid.nx;
        let nr = geom.grid.nr;
        let nx1 = nx + 1;
        let n = nx1 * (nr + 1);
        let (h_xi, h_eta, l) = (geom.grid.h_xi, geom.grid.h_eta, geom.grid.l);
        // The one-sided Robin row reaches two eta-rows down.
        let mut mat = BandedMatrix::new(n, 2 * nx1 + 1, nx + 2);
        let idx = |i: usize, j: usize| j * nx1 + i;
        // Reflects the xi index for the Neumann ghost at the ends.
        let xi_ghost = |i: isize| -> usize {
            if i < 0 {
                (-i) as usize
            } else if i as usize > nx {
                2 * nx - i as usize
            } else {
                i as usize
            }
        };
        for j in 0..=nr {
            for i in 0..=nx {
                let row = idx(i, j);
                if j == 0 {
                    mat.set(row, row, 1.0);
                    continue;
                }
                let f = geom.curve.f(i);
                let fp = geom.curve.fp(i);
                if j == nr {
                    // Robin row, multiplied through by sqrt(1+f'^2):
                    //   -f' dpsi/dx + dpsi/dr + psi/f = sqrt(1+f'^2) B.
                    // dpsi/dx = (1/L) dxi + c deta with c = -f'/f at eta = 1;
                    // the one-sided deta coefficient collects (1+f'^2)/f.
                    if fp != 0.0 {
                        let w = -fp / (l * 2.0 * h_xi);
                        mat.add(row, idx(xi_ghost(i as isize + 1), nr), w);
                        mat.add(row, idx(xi_ghost(i as isize - 1), nr), -w);
                    }
                    let w = (1.0 + fp * fp) / (f * 2.0 * h_eta);
                    mat.add(row, idx(i, nr), 3.0 * w);
                    mat.add(row, idx(i, nr - 1), -4.0 * w);
                    mat.add(row, idx(i, nr - 2), w);
                    mat.add(row, row, 1.0 / f);
                    continue;
                }
                // Interior row of -(dxx + drr + (1/r) dr - 1/r^2) psi = G.
                let c = geom.cx_eta(i, j);
                let e = geom.dxx_eta_coeff(i, j);
                let r = geom.r(i, j);
                let cxx = -1.0 / (l * l);
                let cross = -2.0 * c / l;
                let cee = -(c * c) - 1.0 / (f * f);
                let ce1 = -e - 1.0 / (r * f);
                // d_xixi with reflection ghosts at i = 0, nx.
                let w = cxx / (h_xi * h_xi);
                mat.add(row, idx(xi_ghost(i as isize - 1), j), w);
                mat.add(row, row, -2.0 * w);
                mat.add(row, idx(xi_ghost(i as isize + 1), j), w);
                // d_etaeta (j >= 1, so j-1 exists; psi row j=0 is Dirichlet).
                let w = cee / (h_eta * h_eta);
                mat.add(row, idx(i, j - 1), w);
                mat.add(row, row, -2.0 * w);
                mat.add(row, idx(i, j + 1), w);
                // Cross term; vanishes at the reflection columns since the
                // endpoint slopes are clamped.
                if cross != 0.0 {
                    debug_assert!(i > 0 && i < nx);
                    let w = cross / (4.0 * h_xi * h_eta);
                    mat.add(row, idx(i + 1, j + 1), w);
                    mat.add(row, idx(i - 1, j + 1), -w);
                    mat.add(row, idx(i + 1, j - 1), -w);
                    mat.add(row, idx(i - 1, j - 1), w);
                }
                // d_eta
                let w = ce1 / (2.0 * h_eta);
                mat.add(row, idx(i, j + 1), w);
                mat.add(row, idx(i, j - 1), -w);
                // +psi/r^2
                mat.add(row, row, 1.0 / (r * r));
            }
        }
        Ok(Self { lu: mat.factor()? })
    }

    pub fn solve(&self, problem: &PsiProblem, geom: &Geometry) -> Result<Field> {
        let nx = geom.grid.nx;
        let nr = geom.grid.nr;
        let nx1 = nx + 1;
        let mut rhs = vec![0.0; nx1 * (nr + 1)];
        for j in 1..=nr {
            for i in 0..=nx {
                let row = j * nx1 + i;
                if j == nr {
                    let fp = geom.curve.fp(i);
                    rhs[row] = (1.0 + fp * fp).sqrt() * problem.robin[i];
                } else {
                    rhs[row] = problem.source.at(i, j);
                }
            }
        }
        self.lu.solve(&mut rhs);
        let mut field = Field::zeros(&geom.grid, AxisKind::VanishesAtAxis);
        field.data_mut().copy_from_slice(&rhs);
        Ok(field)
    }
}

/// One-call convenience wrapper.
pub fn solve_psi(problem: &PsiProblem, geom: &Geometry) -> Result<Field> {
    PsiSolver::new(geom)?.solve(problem, geom)
}

/// Nonlinear flux F of the linearized potential equation, per node.
///
/// With Q = (S - S0, D(phi-phi0), t) and A_i(xi, s, v) = H(xi, s+v) s_i,
///
///   F_i = -H(V0+Q) t_i - int_0^1 D_{xi,v} A_i(V0+tQ) dt . (xi, t)
///         - s . int_0^1 [D_s A_i(V0+tQ) - D_s A_i(V0)] dt,
///
/// evaluated with 4-point Gauss-Legendre in t and the closed-form derivatives
/// of H. Vanishes identically at the background.
pub fn assemble_flux_f(
    s_field: &Field,
    phi_corr: &Field,
    psi: &Field,
    lambda: &Field,
    geom: &Geometry,
    gas: &GasParameters,
    background: &BackgroundState,
) -> Result<(Field, Field)> {
    let coeffs = assemble_linearization_aii(gas, background)?;
    let trans = t_part(psi, geom);
    let gamma = gas.gamma;
    let s0 = background.s0_minus;
    let b0 = background.b0_minus;
    let mut flux_x = Field::zeros(&geom.grid, AxisKind::EvenAtAxis);
    let mut flux_r = Field::zeros(&geom.grid, AxisKind::VanishesAtAxis);
    for j in 0..=geom.grid.nr {
        for i in 0..=geom.grid.nx {
            let x = geom.grid.x(i);
            let r = geom.r(i, j);
            let s_here = s_field.at(i, j);
            let xi_pert = s_here - s0;
            let s_corr = [geom.ddx(phi_corr, i, j), geom.ddr(phi_corr, i, j), 0.0];
            let tvec = [
                trans.t_x.at(i, j),
                trans.t_r.at(i, j),
                if j == 0 { 0.0 } else { lambda.at(i, j) / r },
            ];
            // Endpoint density H(V0 + Q).
            let q1 = VelocityTriple::new(
                gas.u0 + s_corr[0] + tvec[0],
                s_corr[1] + tvec[1],
                tvec[2],
            );
            let h1 = density_h(s_here, &q1, b0, gamma).map_err(|e| e.at(x, r))?;
            let mut fv = [-h1 * tvec[0], -h1 * tvec[1]];
            for (&tk, &wk) in GAUSS4_NODES.iter().zip(GAUSS4_WEIGHTS.iter()) {
                let s_t = s0 + tk * xi_pert;
                let svec = [gas.u0 + tk * s_corr[0], tk * s_corr[1], 0.0];
                let q = VelocityTriple::new(
                    svec[0] + tk * tvec[0],
                    svec[1] + tk * tvec[1],
                    tk * tvec[2],
                );
                let h = density_h(s_t, &q, b0, gamma).map_err(|e| e.at(x, r))?;
                let c_sq = gamma * s_t * h.powf(gamma - 1.0);
                let dh_ds = -h / ((gamma - 1.0) * s_t);
                let qv = [q.u_x, q.u_r, q.u_theta];
                let dh_dq = [-qv[0] * h / c_sq, -qv[1] * h / c_sq, -qv[2] * h / c_sq];
                for d in 0..2 {
                    // D_xi A_d * xi + sum_k D_{v_k} A_d * t_k
                    let mut term = dh_ds * svec[d] * xi_pert;
                    for k in 0..3 {
                        term += dh_dq[k] * svec[d] * tvec[k];
                    }
                    // s . (D_s A_d - D_s A_d(V0))
                    for k in 0..2 {
                        let a0 = if k == d {
                            if d == 0 {
                                coeffs.a11
                            } else {
                                coeffs.a22
                            }
                        } else {
                            0.0
                        };
                        let delta = if k == d { h } else { 0.0 };
                        term += s_corr[k] * (delta + dh_dq[k] * svec[d] - a0);
                    }
                    fv[d] -= wk * term;
                }
            }
            flux_x.set(i, j, fv[0]);
            flux_r.set(i, j, fv[1]);
        }
    }
    Ok((flux_x, flux_r))
}

/// Source of the psi problem:
///
///   G = [ H^{gamma-1}/(gamma-1) dS/dr + (Lambda/r^2) dLambda/dr ] / u_x,
///
/// with the axis row set to zero by the compatibility conditions.
#[allow(clippy::too_many_arguments)]
pub fn assemble_source_g(
    s_field: &Field,
    lambda: &Field,
    dr_s: &Field,
    dr_lambda: &Field,
    trans: &TransversalPart,
    grad_phi_x: &Field,
    grad_phi_r: &Field,
    geom: &Geometry,
    gas: &GasParameters,
    background: &BackgroundState,
) -> Result<Field> {
    let gamma = gas.gamma;
    let b0 = background.b0_minus;
    let floor = 0.5 * gas.u0;
    let mut g = Field::zeros(&geom.grid, AxisKind::VanishesAtAxis);
    for j in 1..=geom.grid.nr {
        for i in 0..=geom.grid.nx {
            let x = geom.grid.x(i);
            let r = geom.r(i, j);
            let u_x = grad_phi_x.at(i, j) + trans.t_x.at(i, j);
            if u_x < floor {
                return Err(SolverError::AxialVelocityFloor {
                    x,
                    r,
                    value: u_x,
                    floor,
                });
            }
            let lam = lambda.at(i, j);
            let q = VelocityTriple::new(
                u_x,
                grad_phi_r.at(i, j) + trans.t_r.at(i, j),
                lam / r,
            );
            let h = density_h(s_field.at(i, j), &q, b0, gamma).map_err(|e| e.at(x, r))?;
            let value = (h.powf(gamma - 1.0) / (gamma - 1.0) * dr_s.at(i, j)
                + lam / (r * r) * dr_lambda.at(i, j))
                / u_x;
            g.set(i, j, value);
        }
    }
    Ok(g)
}
