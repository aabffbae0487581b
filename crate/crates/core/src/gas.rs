//! Thermodynamic closure for the polytropic gas.
//!
//! Houses the background state, the density map H that inverts the Bernoulli
//! relation, and the velocity reconstruction from the Helmholtz potentials
//!
//!   u_x = dphi/dx + (1/r) d(r psi)/dr,   u_r = dphi/dr - dpsi/dx,
//!   u_theta = Lambda / r.

use crate::error::{Result, SolverError};

/// Gas constants and the uniform upstream state of the inner layer, plus the
/// (never evolved) outer-layer density.
#[derive(Debug, Clone, Copy)]
pub struct GasParameters {
    /// Adiabatic exponent, > 1.
    pub gamma: f64,
    /// Background pressure, shared by both layers.
    pub p0: f64,
    /// Inner-layer background density.
    pub rho0_minus: f64,
    /// Outer-layer density (fixed input).
    pub rho0_plus: f64,
    /// Inner-layer background axial speed.
    pub u0: f64,
}

impl GasParameters {
    pub fn new(gamma: f64, p0: f64, rho0_minus: f64, rho0_plus: f64, u0: f64) -> Result<Self> {
        if !(gamma > 1.0) {
            return Err(SolverError::InvalidParameter(format!(
                "gamma must exceed 1, got {gamma}"
            )));
        }
        for (name, v) in [
            ("p0", p0),
            ("rho0_minus", rho0_minus),
            ("rho0_plus", rho0_plus),
            ("u0", u0),
        ] {
            if !(v > 0.0) {
                return Err(SolverError::InvalidParameter(format!(
                    "{name} must be strictly positive, got {v}"
                )));
            }
        }
        let c0 = (gamma * p0 / rho0_minus).sqrt();
        if u0 >= c0 {
            return Err(SolverError::NotSubsonic { u0, c0 });
        }
        Ok(Self {
            gamma,
            p0,
            rho0_minus,
            rho0_plus,
            u0,
        })
    }
}

/// Derived invariants of the piecewise-constant background.
#[derive(Debug, Clone, Copy)]
pub struct BackgroundState {
    /// Inner entropy S0- = p0 / rho0-^gamma.
    pub s0_minus: f64,
    /// Outer entropy S0+ = p0 / rho0+^gamma.
    pub s0_plus: f64,
    /// Inner Bernoulli constant B0- = u0^2/2 + gamma p0 / ((gamma-1) rho0-).
    pub b0_minus: f64,
    /// Outer Bernoulli constant (rest state).
    pub b0_plus: f64,
    /// Inner background sound speed.
    pub c0: f64,
    /// Subsonicity margin V0 = c0^2 - u0^2.
    pub v0: f64,
}

pub fn derive_background(gas: &GasParameters) -> Result<BackgroundState> {
    let g = gas.gamma;
    let c0 = (g * gas.p0 / gas.rho0_minus).sqrt();
    if gas.u0 >= c0 {
        return Err(SolverError::NotSubsonic { u0: gas.u0, c0 });
    }
    Ok(BackgroundState {
        s0_minus: gas.p0 / gas.rho0_minus.powf(g),
        s0_plus: gas.p0 / gas.rho0_plus.powf(g),
        b0_minus: 0.5 * gas.u0 * gas.u0 + g * gas.p0 / ((g - 1.0) * gas.rho0_minus),
        b0_plus: g * gas.p0 / ((g - 1.0) * gas.rho0_plus),
        c0,
        v0: c0 * c0 - gas.u0 * gas.u0,
    })
}

/// Velocity components at a meridional point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VelocityTriple {
    pub u_x: f64,
    pub u_r: f64,
    pub u_theta: f64,
}

impl VelocityTriple {
    pub fn new(u_x: f64, u_r: f64, u_theta: f64) -> Self {
        Self { u_x, u_r, u_theta }
    }

    pub fn norm_sq(&self) -> f64 {
        self.u_x * self.u_x + self.u_r * self.u_r + self.u_theta * self.u_theta
    }
}

/// Pointwise failure of the density map, located by the caller.
#[derive(Debug, Clone, Copy)]
pub enum GasStateError {
    /// B0 - |q|^2/2 dropped to `excess` <= 0.
    Cavitation { excess: f64 },
    /// Resulting state is not subsonic.
    Supersonic { q_sq: f64, c_sq: f64 },
}

impl GasStateError {
    /// Attaches a meridional location, producing the solver-level error.
    pub fn at(self, x: f64, r: f64) -> SolverError {
        match self {
            GasStateError::Cavitation { excess } => SolverError::Cavitation { x, r, excess },
            GasStateError::Supersonic { q_sq, c_sq } => {
                SolverError::Supersonic { x, r, q_sq, c_sq }
            }
        }
    }
}

/// Density map H(S, q) = [ (gamma-1)/(gamma S) * (B0- - |q|^2/2) ]^{1/(gamma-1)}.
///
/// The result satisfies the Bernoulli identity
/// |q|^2/2 + gamma/(gamma-1) S H^{gamma-1} = B0- by construction.
pub fn density_h(
    s: f64,
    q: &VelocityTriple,
    b0_minus: f64,
    gamma: f64,
) -> std::result::Result<f64, GasStateError> {
    debug_assert!(s > 0.0, "entropy must be positive, got {s}");
    let q_sq = q.norm_sq();
    let excess = b0_minus - 0.5 * q_sq;
    if excess <= 0.0 {
        return Err(GasStateError::Cavitation { excess });
    }
    let h = ((gamma - 1.0) / (gamma * s) * excess).powf(1.0 / (gamma - 1.0));
    let c_sq = gamma * s * h.powf(gamma - 1.0);
    if q_sq >= c_sq {
        return Err(GasStateError::Supersonic { q_sq, c_sq });
    }
    Ok(h)
}

/// Pressure closure p = S rho^gamma.
pub fn pressure(s: f64, rho: f64, gamma: f64) -> f64 {
    s * rho.powf(gamma)
}

/// Squared sound speed c^2 = gamma S rho^{gamma-1} = gamma p / rho.
pub fn sound_speed_sq(s: f64, rho: f64, gamma: f64) -> f64 {
    gamma * s * rho.powf(gamma - 1.0)
}

/// Bernoulli invariant B = |u|^2/2 + gamma p / ((gamma-1) rho).
pub fn bernoulli_of(u: &VelocityTriple, rho: f64, p: f64, gamma: f64) -> f64 {
    debug_assert!(rho > 0.0);
    0.5 * u.norm_sq() + gamma * p / ((gamma - 1.0) * rho)
}

/// Reconstructs the velocity from the Helmholtz potentials at radius r.
///
/// At the axis the 1/r terms are evaluated by their limits, which requires
/// psi(x,0) = 0 and Lambda(x,0) = 0; `dr_lambda` is the radial derivative of
/// Lambda, consumed only in the r = 0 branch.
pub fn velocity_from_potentials(
    phi_grad: (f64, f64),
    psi: f64,
    psi_grad: (f64, f64),
    lambda: f64,
    dr_lambda: f64,
    r: f64,
) -> Result<VelocityTriple> {
    if r == 0.0 {
        const AXIS_TOL: f64 = 1e-13;
        if psi.abs() > AXIS_TOL || lambda.abs() > AXIS_TOL {
            return Err(SolverError::AxisCompatibility(format!(
                "psi = {psi}, Lambda = {lambda} at r = 0 (both must vanish)"
            )));
        }
        return Ok(VelocityTriple::new(
            phi_grad.0 + 2.0 * psi_grad.1,
            phi_grad.1 - psi_grad.0,
            dr_lambda,
        ));
    }
    Ok(VelocityTriple::new(
        phi_grad.0 + psi_grad.1 + psi / r,
        phi_grad.1 - psi_grad.0,
        lambda / r,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn reference_gas() -> GasParameters {
        GasParameters::new(1.4, 1.0, 1.0, 1.0, 0.3).unwrap()
    }

    #[test]
    fn background_closed_form() {
        let bg = derive_background(&reference_gas()).unwrap();
        assert_abs_diff_eq!(bg.s0_minus, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(bg.b0_minus, 3.545, epsilon = 1e-15);
        // c0 = sqrt(1.4), frozen from high-precision evaluation.
        assert_abs_diff_eq!(bg.c0, 1.183_215_956_619_923_2, epsilon = 1e-15);
        assert_abs_diff_eq!(bg.v0, 1.4 - 0.09, epsilon = 1e-15);
    }

    #[test]
    fn background_rest_state() {
        let gas = GasParameters::new(1.4, 1.0, 1.0, 1.0, 1e-300).unwrap();
        let bg = derive_background(&gas).unwrap();
        assert_abs_diff_eq!(bg.b0_minus, 3.5, epsilon = 1e-12);
        assert_abs_diff_eq!(bg.b0_plus, 3.5, epsilon = 1e-15);
    }

    #[test]
    fn background_rejects_supersonic_inflow() {
        assert!(matches!(
            GasParameters::new(1.4, 1.0, 1.0, 1.0, 1.2),
            Err(SolverError::NotSubsonic { .. })
        ));
    }

    #[test]
    fn background_rejects_nonpositive_inputs() {
        assert!(GasParameters::new(0.9, 1.0, 1.0, 1.0, 0.3).is_err());
        assert!(GasParameters::new(1.4, -1.0, 1.0, 1.0, 0.3).is_err());
        assert!(GasParameters::new(1.4, 1.0, 0.0, 1.0, 0.3).is_err());
        assert!(GasParameters::new(1.4, 1.0, 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn density_round_trips_background() {
        let gas = reference_gas();
        let bg = derive_background(&gas).unwrap();
        let q = VelocityTriple::new(gas.u0, 0.0, 0.0);
        let rho = density_h(bg.s0_minus, &q, bg.b0_minus, gas.gamma).unwrap();
        assert_abs_diff_eq!(rho, gas.rho0_minus, epsilon = 1e-15);
    }

    #[test]
    fn density_frozen_value() {
        // Direct high-precision evaluation of the closed form at
        // S=1, |q|=0.5, B0=3.545, gamma=1.4:
        // ((0.4/1.4) * (3.545 - 0.125))^2.5 = 0.94383299217941105...
        let q = VelocityTriple::new(0.5, 0.0, 0.0);
        let rho = density_h(1.0, &q, 3.545, 1.4).unwrap();
        assert_abs_diff_eq!(rho, 0.943_832_992_179_411, epsilon = 1e-12);
    }

    #[test]
    fn density_cavitation_gate() {
        let q = VelocityTriple::new(3.0, 0.0, 0.0);
        assert!(matches!(
            density_h(1.0, &q, 3.545, 1.4),
            Err(GasStateError::Cavitation { .. })
        ));
    }

    #[test]
    fn density_supersonic_gate() {
        // |q| large but below cavitation: state comes out supersonic.
        let q = VelocityTriple::new(2.4, 0.0, 0.0);
        assert!(matches!(
            density_h(1.0, &q, 3.545, 1.4),
            Err(GasStateError::Supersonic { .. })
        ));
    }

    #[test]
    fn density_monotone_in_speed_and_entropy() {
        let mut last = f64::INFINITY;
        for k in 0..20 {
            let q = VelocityTriple::new(0.05 * k as f64, 0.0, 0.0);
            let rho = density_h(1.0, &q, 3.545, 1.4).unwrap();
            assert!(rho < last);
            last = rho;
        }
        let q = VelocityTriple::new(0.3, 0.0, 0.0);
        last = f64::INFINITY;
        for k in 0..20 {
            let s = 0.5 + 0.1 * k as f64;
            let rho = density_h(s, &q, 3.545, 1.4).unwrap();
            assert!(rho < last);
            last = rho;
        }
    }

    #[test]
    fn bernoulli_frozen_value() {
        let u = VelocityTriple::new(0.3, 0.0, 0.0);
        assert_abs_diff_eq!(bernoulli_of(&u, 1.0, 1.0, 1.4), 3.545, epsilon = 1e-15);
    }

    #[test]
    fn velocity_background() {
        let u = velocity_from_potentials((0.3, 0.0), 0.0, (0.0, 0.0), 0.0, 0.0, 0.25).unwrap();
        assert_eq!(u, VelocityTriple::new(0.3, 0.0, 0.0));
        let u0 = velocity_from_potentials((0.3, 0.0), 0.0, (0.0, 0.0), 0.0, 0.0, 0.0).unwrap();
        assert_eq!(u0, VelocityTriple::new(0.3, 0.0, 0.0));
    }

    #[test]
    fn velocity_curl_part() {
        // psi = r: (1/r) d(r^2)/dr = 2.
        let u = velocity_from_potentials((0.0, 0.0), 0.25, (0.0, 1.0), 0.0, 0.0, 0.25).unwrap();
        assert_abs_diff_eq!(u.u_x, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(u.u_r, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn velocity_swirl() {
        let u = velocity_from_potentials((0.0, 0.0), 0.0, (0.0, 0.0), 0.1, 0.0, 0.5).unwrap();
        assert_abs_diff_eq!(u.u_theta, 0.2, epsilon = 1e-15);
    }

    #[test]
    fn velocity_axis_compatibility_gate() {
        assert!(velocity_from_potentials((0.0, 0.0), 0.1, (0.0, 0.0), 0.0, 0.0, 0.0).is_err());
        assert!(velocity_from_potentials((0.0, 0.0), 0.0, (0.0, 0.0), 0.1, 0.0, 0.0).is_err());
    }

    proptest! {
        #[test]
        fn bernoulli_identity_round_trip(
            s in 0.5f64..2.0,
            ux in 0.0f64..0.8,
            ur in -0.3f64..0.3,
            ut in -0.3f64..0.3,
        ) {
            let gamma = 1.4;
            let b0 = 3.545;
            let q = VelocityTriple::new(ux, ur, ut);
            if let Ok(rho) = density_h(s, &q, b0, gamma) {
                let p = pressure(s, rho, gamma);
                let b = bernoulli_of(&q, rho, p, gamma);
                prop_assert!((b - b0).abs() < 1e-12);
            }
        }
    }
}
