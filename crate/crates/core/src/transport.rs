//! Streamline transport of entropy and angular momentum.
//!
//! The stream function w(x,r) = int_0^r s (rho u_x)(x,s) ds is built by
//! columnwise quadrature; inverting its entrance column gives the footpoint
//! map R0 = Ginv(w), and (S, Lambda) are transported by composition with the
//! entrance data. Transported fields are then pushed past the free boundary
//! onto the strip r < 3/4 by a triple-reflection (Hestenes) extension. An RK4
//! streamline tracer lives here purely as a test oracle.

use crate::error::{Result, SolverError};
use crate::gas::GasParameters;
use crate::geometry::Geometry;
use crate::grid::{AxisKind, Field};
use crate::interp::{
    cumulative_fourth_order, cumulative_trapezoid, sample_uniform_cubic, CubicInterpolant,
};
use crate::profile::EntranceProfile;

/// Outer radius of the extension strip.
pub const STRIP_RADIUS: f64 = 0.75;

/// Mass-flux ratio band for footpoints, sqrt(3) either way.
const RATIO_HI: f64 = 1.732_050_807_568_877_3;
const RATIO_LO: f64 = 1.0 / RATIO_HI;

/// Triple-reflection coefficients; satisfy sum c_m (-1/m)^k = 1 for
/// k = 0, 1, 2, giving C^2 matching across the boundary.
pub const HESTENES_C: [f64; 3] = [6.0, -32.0, 27.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureRule {
    Trapezoid,
    FourthOrder,
}

/// Cumulative mass flux w, even across the axis with w(x,0) = 0.
pub fn compute_stream_h(
    rho_ux: &Field,
    geom: &Geometry,
    gas: &GasParameters,
    rule: QuadratureRule,
) -> Result<Field> {
    let floor = 0.5 * gas.rho0_minus * gas.u0;
    let mut w = Field::zeros(&geom.grid, AxisKind::EvenAtAxis);
    for i in 0..=geom.grid.nx {
        let f = geom.curve.f(i);
        let integrand: Vec<f64> = (0..=geom.grid.nr)
            .map(|j| {
                let v = rho_ux.at(i, j);
                geom.grid.eta(j) * v
            })
            .collect();
        for j in 0..=geom.grid.nr {
            if rho_ux.at(i, j) < floor {
                return Err(SolverError::FluxFloor {
                    x: geom.grid.x(i),
                    r: geom.r(i, j),
                    value: rho_ux.at(i, j),
                    floor,
                });
            }
        }
        // r dr = f^2 eta deta on the fitted column.
        let cumulative = match rule {
            QuadratureRule::Trapezoid => cumulative_trapezoid(&integrand, geom.grid.h_eta),
            QuadratureRule::FourthOrder => cumulative_fourth_order(&integrand, geom.grid.h_eta),
        };
        for j in 0..=geom.grid.nr {
            w.set(i, j, f * f * cumulative[j]);
        }
    }
    Ok(w)
}

/// Monotone table G: entrance radius -> entrance flux, with its inverse.
#[derive(Debug, Clone)]
pub struct EntranceFluxMap {
    interp: CubicInterpolant,
}

pub fn build_entrance_flux_map(w_entrance: &[f64], f0: f64) -> Result<EntranceFluxMap> {
    for k in 1..w_entrance.len() {
        if w_entrance[k] <= w_entrance[k - 1] {
            return Err(SolverError::InvalidParameter(format!(
                "entrance flux column not strictly increasing at index {k} \
                 (rho u_x changes sign at the entrance)"
            )));
        }
    }
    let n = w_entrance.len() - 1;
    let radii: Vec<f64> = (0..=n).map(|k| f0 * k as f64 / n as f64).collect();
    let interp = CubicInterpolant::monotone(&radii, w_entrance)?;
    Ok(EntranceFluxMap { interp })
}

impl EntranceFluxMap {
    pub fn flux_of(&self, r: f64) -> f64 {
        self.interp.eval(r)
    }

    /// Total entrance flux G(1/2).
    pub fn w_max(&self) -> f64 {
        self.interp.y_last()
    }

    /// Ginv: flux level -> entrance radius.
    pub fn foot_of(&self, w: f64) -> Result<f64> {
        if w == 0.0 {
            return Ok(0.0);
        }
        self.interp.invert(w)
    }
}

/// Footpoint field R0 = Ginv(w), gated by the mass-flux ratio band.
pub fn compute_footpoint_r0(
    w: &Field,
    map: &EntranceFluxMap,
    geom: &Geometry,
) -> Result<Field> {
    let w_max = map.w_max();
    let tol = 1e-8 * w_max;
    let mut r0 = Field::zeros(&geom.grid, AxisKind::VanishesAtAxis);
    for i in 0..=geom.grid.nx {
        for j in 1..=geom.grid.nr {
            let x = geom.grid.x(i);
            let wv = w.at(i, j);
            if wv < -tol || wv > w_max + tol {
                return Err(SolverError::FluxImbalance {
                    x,
                    w: wv,
                    excess: if wv < 0.0 { -wv } else { wv - w_max },
                });
            }
            let foot = map.foot_of(wv.clamp(0.0, w_max))?;
            let r = geom.r(i, j);
            let ratio = foot / r;
            if !(RATIO_LO - 1e-12..=RATIO_HI + 1e-12).contains(&ratio) {
                return Err(SolverError::FootpointRange { x, r, ratio });
            }
            r0.set(i, j, foot);
        }
    }
    Ok(r0)
}

/// S = S_en(R0), Lambda = R0 nu_en(R0): constant along streamlines by
/// construction.
pub fn transport_s_lambda(
    profile: &EntranceProfile,
    r0: &Field,
    geom: &Geometry,
) -> (Field, Field) {
    let s = Field::from_fn(&geom.grid, AxisKind::EvenAtAxis, |i, j| {
        profile.s_en(r0.at(i, j))
    });
    let lambda = Field::from_fn(&geom.grid, AxisKind::VanishesAtAxis, |i, j| {
        let foot = r0.at(i, j);
        foot * profile.nu_en(foot)
    });
    (s, lambda)
}

/// Swirl velocity V = Lambda/r = (R0/r) nu_en(R0), with V(x,0) = 0 exactly.
pub fn swirl_velocity(
    lambda: &Field,
    r0: &Field,
    profile: &EntranceProfile,
    geom: &Geometry,
) -> Result<Field> {
    for i in 0..=geom.grid.nx {
        if lambda.at(i, 0) != 0.0 {
            return Err(SolverError::AxisCompatibility(format!(
                "Lambda = {} on the axis at x = {}",
                lambda.at(i, 0),
                geom.grid.x(i)
            )));
        }
    }
    Ok(Field::from_fn(
        &geom.grid,
        AxisKind::VanishesAtAxis,
        |i, j| {
            if j == 0 {
                0.0
            } else {
                let foot = r0.at(i, j);
                foot / geom.r(i, j) * profile.nu_en(foot)
            }
        },
    ))
}

/// Transported quantity on the uniform radial strip [0, 3/4], sharing the
/// axial columns of the solve grid. Columns are stored contiguously.
#[derive(Debug, Clone)]
pub struct StripField {
    nx1: usize,
    /// Radial cell count; node count is n_r + 1.
    n_r: usize,
    h_r: f64,
    data: Vec<f64>,
}

/// Default strip resolution matching the solve grid's radial spacing.
pub fn strip_cells(nr: usize) -> usize {
    3 * nr / 2
}

impl StripField {
    pub fn zeros(nx: usize, n_r: usize) -> Self {
        Self {
            nx1: nx + 1,
            n_r,
            h_r: STRIP_RADIUS / n_r as f64,
            data: vec![0.0; (nx + 1) * (n_r + 1)],
        }
    }

    #[inline]
    pub fn at(&self, i: usize, k: usize) -> f64 {
        debug_assert!(i < self.nx1 && k <= self.n_r);
        self.data[i * (self.n_r + 1) + k]
    }

    #[inline]
    pub fn set(&mut self, i: usize, k: usize, value: f64) {
        self.data[i * (self.n_r + 1) + k] = value;
    }

    pub fn n_r(&self) -> usize {
        self.n_r
    }

    pub fn h_r(&self) -> f64 {
        self.h_r
    }

    pub fn radius(&self, k: usize) -> f64 {
        k as f64 * self.h_r
    }

    /// Off-node radial sampling by cubic Lagrange, O(h^4).
    pub fn sample(&self, i: usize, r: f64) -> f64 {
        let col = &self.data[i * (self.n_r + 1)..(i + 1) * (self.n_r + 1)];
        sample_uniform_cubic(col, self.h_r, r)
    }

    /// Central-difference radial derivative, one-sided at the strip ends.
    pub fn radial_derivative(&self) -> StripField {
        let mut out = self.clone();
        let inv = 1.0 / (2.0 * self.h_r);
        for i in 0..self.nx1 {
            for k in 0..=self.n_r {
                let d = if k == 0 {
                    (-3.0 * self.at(i, 0) + 4.0 * self.at(i, 1) - self.at(i, 2)) * inv
                } else if k == self.n_r {
                    (3.0 * self.at(i, k) - 4.0 * self.at(i, k - 1) + self.at(i, k - 2)) * inv
                } else {
                    (self.at(i, k + 1) - self.at(i, k - 1)) * inv
                };
                out.set(i, k, d);
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &StripField) -> f64 {
        debug_assert_eq!(self.data.len(), other.data.len());
        self.data
            .iter()
            .zip(other.data.iter())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
    }
}

/// Hestenes extension of the transported pair (S, Lambda) from the inner
/// region r <= f(x) onto the strip: past the boundary the value is
/// sum_m c_m W(x, f - (r - f)/m), whose samples stay inside the inner region
/// whenever f >= 3/8.
pub fn extend_w(
    s_inner: &Field,
    lambda_inner: &Field,
    geom: &Geometry,
    n_r: usize,
) -> (StripField, StripField) {
    let mut s_strip = StripField::zeros(geom.grid.nx, n_r);
    let mut lambda_strip = StripField::zeros(geom.grid.nx, n_r);
    let h_eta = geom.grid.h_eta;
    for i in 0..=geom.grid.nx {
        let f = geom.curve.f(i);
        let s_col = s_inner.column(i);
        let lam_col = lambda_inner.column(i);
        let sample =
            |col: &[f64], r: f64| -> f64 { sample_uniform_cubic(col, h_eta, r / f) };
        for k in 0..=n_r {
            let r = s_strip.radius(k);
            let (sv, lv) = if r <= f {
                (sample(&s_col, r), sample(&lam_col, r))
            } else {
                let d = r - f;
                debug_assert!(d <= f, "reflected sample would leave the inner region");
                let mut sv = 0.0;
                let mut lv = 0.0;
                for (m, &c) in HESTENES_C.iter().enumerate() {
                    let rm = f - d / (m + 1) as f64;
                    sv += c * sample(&s_col, rm);
                    lv += c * sample(&lam_col, rm);
                }
                (sv, lv)
            };
            s_strip.set(i, k, sv);
            lambda_strip.set(i, k, lv);
        }
    }
    (s_strip, lambda_strip)
}

/// RK4 integration of dr/dx = u_r/u_x from the entrance; a test oracle, not
/// part of the solve path. Fields are sampled bicubically on the fitted grid.
pub fn trace_streamline_oracle(
    u_x: &Field,
    u_r: &Field,
    geom: &Geometry,
    start_r: f64,
    steps: usize,
    ux_floor: f64,
) -> Result<Vec<(f64, f64)>> {
    let l = geom.grid.l;
    let h = l / steps as f64;
    let slope = |x: f64, r: f64| -> Result<f64> {
        let ux = sample_field(u_x, geom, x, r)?;
        if ux < ux_floor {
            return Err(SolverError::AxialVelocityFloor {
                x,
                r,
                value: ux,
                floor: ux_floor,
            });
        }
        Ok(sample_field(u_r, geom, x, r)? / ux)
    };
    let mut polyline = Vec::with_capacity(steps + 1);
    let mut r = start_r;
    polyline.push((0.0, r));
    for step in 0..steps {
        let x = step as f64 * h;
        let k1 = slope(x, r)?;
        let k2 = slope(x + 0.5 * h, r + 0.5 * h * k1)?;
        let k3 = slope(x + 0.5 * h, r + 0.5 * h * k2)?;
        let k4 = slope(x + h, r + h * k3)?;
        r += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        polyline.push((x + h, r));
    }
    Ok(polyline)
}

/// Bicubic off-grid sampling of a fitted-grid field: cubic Lagrange radially
/// in each of four neighbor columns (each at its own eta = r/f(x_i)), then
/// cubic Lagrange axially.
pub fn sample_field(field: &Field, geom: &Geometry, x: f64, r: f64) -> Result<f64> {
    let nx = geom.grid.nx;
    let xi = x / geom.grid.l;
    if !(-1e-12..=1.0 + 1e-12).contains(&xi) || r < -1e-12 {
        return Err(SolverError::TraceExit(format!(
            "sample point (x, r) = ({x}, {r}) outside the domain"
        )));
    }
    let t = (xi / geom.grid.h_xi).clamp(0.0, nx as f64);
    let i0 = ((t.floor() as usize).saturating_sub(1)).min(nx - 3);
    let mut col_vals = [0.0f64; 4];
    for (m, val) in col_vals.iter_mut().enumerate() {
        let i = i0 + m;
        let f = geom.curve.f(i);
        let eta = r / f;
        if eta > 1.0 + 1e-9 {
            return Err(SolverError::TraceExit(format!(
                "sample point (x, r) = ({x}, {r}) above the boundary (eta = {eta})"
            )));
        }
        let col = field.column(i);
        *val = sample_uniform_cubic(&col, geom.grid.h_eta, eta.min(1.0));
    }
    let s = t - i0 as f64;
    let l0 = -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0;
    let l1 = s * (s - 2.0) * (s - 3.0) / 2.0;
    let l2 = -s * (s - 1.0) * (s - 3.0) / 2.0;
    let l3 = s * (s - 1.0) * (s - 2.0) / 6.0;
    Ok(l0 * col_vals[0] + l1 * col_vals[1] + l2 * col_vals[2] + l3 * col_vals[3])
}
