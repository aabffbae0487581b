//! Reference rectangle grid and node-centered meridional fields.
//!
//! All solves live on the fixed rectangle (xi, eta) in [0,1]^2 whose physical
//! image is x = L*xi, r = eta*f(x). Fields carry an axis flag that selects the
//! reflection parity of the ghost row below eta = 0.

use crate::error::{Result, SolverError};

pub const MIN_CELLS: usize = 16;

/// Uniform tensor grid on the reference rectangle, node-centered.
#[derive(Debug, Clone)]
pub struct ReferenceGrid {
    /// Axial length of the physical cylinder section.
    pub l: f64,
    /// Cell counts; node counts are nx+1 and nr+1.
    pub nx: usize,
    pub nr: usize,
    pub h_xi: f64,
    pub h_eta: f64,
}

impl ReferenceGrid {
    pub fn new(l: f64, nx: usize, nr: usize) -> Result<Self> {
        if !(l > 0.0) {
            return Err(SolverError::InvalidParameter(format!(
                "domain length must be positive, got {l}"
            )));
        }
        if nx < MIN_CELLS || nr < MIN_CELLS {
            return Err(SolverError::InvalidParameter(format!(
                "grid must have at least {MIN_CELLS} cells per direction, got {nx}x{nr}"
            )));
        }
        Ok(Self {
            l,
            nx,
            nr,
            h_xi: 1.0 / nx as f64,
            h_eta: 1.0 / nr as f64,
        })
    }

    pub fn xi(&self, i: usize) -> f64 {
        i as f64 * self.h_xi
    }

    pub fn eta(&self, j: usize) -> f64 {
        j as f64 * self.h_eta
    }

    pub fn x(&self, i: usize) -> f64 {
        self.l * self.xi(i)
    }

    /// Axial spacing in physical units.
    pub fn h_x(&self) -> f64 {
        self.l * self.h_xi
    }

    pub fn n_nodes(&self) -> usize {
        (self.nx + 1) * (self.nr + 1)
    }
}

/// Reflection parity across the axis row eta = 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisKind {
    /// Odd field: identically zero on the axis (psi, Lambda, stream function).
    VanishesAtAxis,
    /// Even field: vanishing radial derivative at the axis (phi, S, rho, u_x).
    EvenAtAxis,
}

/// Grid function on the reference node set.
#[derive(Debug, Clone)]
pub struct Field {
    nx1: usize,
    nr1: usize,
    pub axis_kind: AxisKind,
    data: Vec<f64>,
}

impl Field {
    pub fn zeros(grid: &ReferenceGrid, axis_kind: AxisKind) -> Self {
        Self {
            nx1: grid.nx + 1,
            nr1: grid.nr + 1,
            axis_kind,
            data: vec![0.0; (grid.nx + 1) * (grid.nr + 1)],
        }
    }

    pub fn constant(grid: &ReferenceGrid, value: f64, axis_kind: AxisKind) -> Self {
        let mut field = Self::zeros(grid, axis_kind);
        field.data.fill(value);
        field
    }

    /// Builds a field from a function of node indices.
    pub fn from_fn(
        grid: &ReferenceGrid,
        axis_kind: AxisKind,
        mut f: impl FnMut(usize, usize) -> f64,
    ) -> Self {
        let mut field = Self::zeros(grid, axis_kind);
        for j in 0..field.nr1 {
            for i in 0..field.nx1 {
                field.data[j * field.nx1 + i] = f(i, j);
            }
        }
        field
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i < self.nx1 && j < self.nr1);
        self.data[j * self.nx1 + i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        debug_assert!(i < self.nx1 && j < self.nr1);
        self.data[j * self.nx1 + i] = value;
    }

    /// Value at (i, j) where j may be -1, resolved by the axis parity.
    #[inline]
    pub fn at_signed_j(&self, i: usize, j: isize) -> f64 {
        if j >= 0 {
            self.at(i, j as usize)
        } else {
            let mirror = self.at(i, (-j) as usize);
            match self.axis_kind {
                AxisKind::VanishesAtAxis => -mirror,
                AxisKind::EvenAtAxis => mirror,
            }
        }
    }

    pub fn n_xi(&self) -> usize {
        self.nx1
    }

    pub fn n_eta(&self) -> usize {
        self.nr1
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &Field) -> f64 {
        debug_assert_eq!(self.data.len(), other.data.len());
        self.data
            .iter()
            .zip(other.data.iter())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// Extracts column i as a radial profile.
    pub fn column(&self, i: usize) -> Vec<f64> {
        (0..self.nr1).map(|j| self.at(i, j)).collect()
    }
}
