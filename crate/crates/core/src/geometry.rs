//! Free-boundary geometry: the contact curve f(x), the boundary-fitted map to
//! the reference rectangle, transformed differential operators, and frames.
//!
//! The map is (x, r) -> (xi, eta) = (x/L, r/f(x)), giving the chain rule
//!
//!   d/dx = (1/L) d/dxi - (eta f'/f) d/deta,      d/dr = (1/f) d/deta,
//!
//! so every solve stays on one fixed rectangle while the boundary moves.

use crate::error::{Result, SolverError};
use crate::grid::{AxisKind, Field, ReferenceGrid};
use crate::interp::{integrate_fourth_order, CubicInterpolant};

/// Admissible band for the contact radius.
pub const F_BAND_LO: f64 = 0.375;
pub const F_BAND_HI: f64 = 0.625;

/// Contact-discontinuity radius as a grid function over [0, L], with discrete
/// slopes clamped to f'(0) = f'(L) = 0.
#[derive(Debug, Clone)]
pub struct FreeBoundaryCurve {
    pub l: f64,
    samples: Vec<f64>,
    slopes: Vec<f64>,
    curvatures: Vec<f64>,
}

impl FreeBoundaryCurve {
    pub fn new(l: f64, samples: Vec<f64>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(SolverError::InvalidParameter(
                "free boundary needs at least 2 samples".into(),
            ));
        }
        let n = samples.len() - 1;
        let h = l / n as f64;
        for (i, &f) in samples.iter().enumerate() {
            if !(F_BAND_LO..=F_BAND_HI).contains(&f) {
                return Err(SolverError::GeometryBand {
                    x: i as f64 * h,
                    f,
                });
            }
        }
        if (samples[0] - 0.5).abs() > 1e-9 {
            return Err(SolverError::InvalidParameter(format!(
                "free boundary must be anchored at f(0) = 1/2, got {}",
                samples[0]
            )));
        }
        let mut samples = samples;
        samples[0] = 0.5;
        let mut slopes = vec![0.0; n + 1];
        for i in 1..n {
            slopes[i] = (samples[i + 1] - samples[i - 1]) / (2.0 * h);
        }
        // Endpoint slopes are hard constraints of the iteration set.
        slopes[0] = 0.0;
        slopes[n] = 0.0;
        let mut curvatures = vec![0.0; n + 1];
        for i in 1..n {
            curvatures[i] = (samples[i + 1] - 2.0 * samples[i] + samples[i - 1]) / (h * h);
        }
        curvatures[0] =
            (2.0 * samples[0] - 5.0 * samples[1] + 4.0 * samples[2] - samples[3]) / (h * h);
        curvatures[n] =
            (2.0 * samples[n] - 5.0 * samples[n - 1] + 4.0 * samples[n - 2] - samples[n - 3])
                / (h * h);
        Ok(Self {
            l,
            samples,
            slopes,
            curvatures,
        })
    }

    /// The background interface f = 1/2.
    pub fn constant_half(l: f64, nx: usize) -> Self {
        Self::new(l, vec![0.5; nx + 1]).expect("constant half curve is admissible")
    }

    pub fn n_samples(&self) -> usize {
        self.samples.len()
    }

    #[inline]
    pub fn f(&self, i: usize) -> f64 {
        self.samples[i]
    }

    /// Discrete df/dx.
    #[inline]
    pub fn fp(&self, i: usize) -> f64 {
        self.slopes[i]
    }

    /// Discrete d2f/dx2.
    #[inline]
    pub fn fpp(&self, i: usize) -> f64 {
        self.curvatures[i]
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn max_abs_diff(&self, other: &FreeBoundaryCurve) -> f64 {
        self.samples
            .iter()
            .zip(other.samples.iter())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn max_deviation_from_half(&self) -> f64 {
        self.samples.iter().fold(0.0f64, |m, v| m.max((v - 0.5).abs()))
    }

    /// Smooth interpolant of f over x, for off-grid evaluation.
    pub fn interpolant(&self) -> CubicInterpolant {
        let n = self.samples.len() - 1;
        let x: Vec<f64> = (0..=n).map(|i| self.l * i as f64 / n as f64).collect();
        CubicInterpolant::smooth(&x, &self.samples).expect("grid abscissa is increasing")
    }
}

/// Unit tangent and outward normal sampled along the contact curve.
#[derive(Debug, Clone)]
pub struct BoundaryFrame {
    pub tangents: Vec<(f64, f64)>,
    pub normals: Vec<(f64, f64)>,
}

/// Frames tau = (1, f')/sqrt(1+f'^2), n = (-f', 1)/sqrt(1+f'^2); the normal
/// points out of the inner region.
pub fn boundary_frames(curve: &FreeBoundaryCurve) -> BoundaryFrame {
    let mut tangents = Vec::with_capacity(curve.n_samples());
    let mut normals = Vec::with_capacity(curve.n_samples());
    for i in 0..curve.n_samples() {
        let fp = curve.fp(i);
        let norm = (1.0 + fp * fp).sqrt();
        tangents.push((1.0 / norm, fp / norm));
        normals.push((-fp / norm, 1.0 / norm));
    }
    BoundaryFrame { tangents, normals }
}

/// Grid plus curve plus the chain-rule metric coefficients.
#[derive(Debug, Clone)]
pub struct Geometry {
    pub grid: ReferenceGrid,
    pub curve: FreeBoundaryCurve,
}

/// Validates curve/grid compatibility and packages the metric coefficients.
pub fn metric_coefficients(curve: FreeBoundaryCurve, grid: ReferenceGrid) -> Result<Geometry> {
    if curve.n_samples() != grid.nx + 1 {
        return Err(SolverError::InvalidParameter(format!(
            "curve has {} samples but grid has {} axial nodes",
            curve.n_samples(),
            grid.nx + 1
        )));
    }
    if (curve.l - grid.l).abs() > 1e-12 * grid.l {
        return Err(SolverError::InvalidParameter(format!(
            "curve length {} does not match grid length {}",
            curve.l, grid.l
        )));
    }
    Ok(Geometry { grid, curve })
}

impl Geometry {
    pub fn background(l: f64, nx: usize, nr: usize) -> Result<Self> {
        let grid = ReferenceGrid::new(l, nx, nr)?;
        let curve = FreeBoundaryCurve::constant_half(l, nx);
        metric_coefficients(curve, grid)
    }

    /// Physical radius of node (i, j).
    #[inline]
    pub fn r(&self, i: usize, j: usize) -> f64 {
        self.grid.eta(j) * self.curve.f(i)
    }

    /// Coefficient of d/deta inside d/dx: -eta f'/f.
    #[inline]
    pub fn cx_eta(&self, i: usize, j: usize) -> f64 {
        -self.grid.eta(j) * self.curve.fp(i) / self.curve.f(i)
    }

    /// Coefficient of d/deta inside d/dxx (from differentiating the map):
    /// -eta f''/f + 2 eta (f'/f)^2.
    #[inline]
    pub fn dxx_eta_coeff(&self, i: usize, j: usize) -> f64 {
        let f = self.curve.f(i);
        let fp = self.curve.fp(i);
        let eta = self.grid.eta(j);
        -eta * self.curve.fpp(i) / f + 2.0 * eta * (fp / f) * (fp / f)
    }

    /// First reference-space derivatives (d/dxi, d/deta) of a field at a node,
    /// central in the interior, second-order one-sided at xi boundaries, with
    /// the parity ghost below the axis and one-sided at eta = 1.
    pub fn grad_ref(&self, field: &Field, i: usize, j: usize) -> (f64, f64) {
        (self.d_xi(field, i, j), self.d_eta(field, i, j))
    }

    pub fn d_xi(&self, field: &Field, i: usize, j: usize) -> f64 {
        let nx = self.grid.nx;
        let inv = 1.0 / self.grid.h_xi;
        if i == 0 {
            0.5 * inv * (-3.0 * field.at(0, j) + 4.0 * field.at(1, j) - field.at(2, j))
        } else if i == nx {
            0.5 * inv * (3.0 * field.at(nx, j) - 4.0 * field.at(nx - 1, j) + field.at(nx - 2, j))
        } else {
            0.5 * inv * (field.at(i + 1, j) - field.at(i - 1, j))
        }
    }

    pub fn d_eta(&self, field: &Field, i: usize, j: usize) -> f64 {
        let nr = self.grid.nr;
        let inv = 1.0 / self.grid.h_eta;
        if j == 0 {
            let ghost = field.at_signed_j(i, -1);
            0.5 * inv * (field.at(i, 1) - ghost)
        } else if j == nr {
            0.5 * inv * (3.0 * field.at(i, nr) - 4.0 * field.at(i, nr - 1) + field.at(i, nr - 2))
        } else {
            0.5 * inv * (field.at(i, j + 1) - field.at(i, j - 1))
        }
    }

    /// Physical d/dx of a field at a node through the pullback.
    pub fn ddx(&self, field: &Field, i: usize, j: usize) -> f64 {
        let (gxi, geta) = self.grad_ref(field, i, j);
        gxi / self.grid.l + self.cx_eta(i, j) * geta
    }

    /// Physical d/dr of a field at a node through the pullback.
    pub fn ddr(&self, field: &Field, i: usize, j: usize) -> f64 {
        self.d_eta(field, i, j) / self.curve.f(i)
    }

    pub fn ddx_field(&self, field: &Field) -> Field {
        Field::from_fn(&self.grid, AxisKind::EvenAtAxis, |i, j| self.ddx(field, i, j))
    }

    pub fn ddr_field(&self, field: &Field) -> Field {
        Field::from_fn(&self.grid, AxisKind::EvenAtAxis, |i, j| self.ddr(field, i, j))
    }

    /// Integral of g over the meridional section with the cylindrical weight r:
    /// int_0^L int_0^{f(x)} g r dr dx, via fourth-order quadrature in both
    /// directions (column integral uses r dr = f^2 eta deta).
    pub fn integral_r_weighted(&self, field: &Field) -> f64 {
        let column_integrals: Vec<f64> = (0..=self.grid.nx)
            .map(|i| {
                let f = self.curve.f(i);
                let weighted: Vec<f64> = (0..=self.grid.nr)
                    .map(|j| field.at(i, j) * self.grid.eta(j))
                    .collect();
                f * f * integrate_fourth_order(&weighted, self.grid.h_eta)
            })
            .collect();
        self.grid.l * integrate_fourth_order(&column_integrals, self.grid.h_xi)
    }
}
