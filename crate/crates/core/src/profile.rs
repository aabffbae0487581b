//! Entrance data on the inner disk r in [0, 1/2]: entropy S_en, swirl speed
//! nu_en, radial speed u_r^en, plus the smallness measure sigma.
//!
//! Profiles come either as a closed-form bump-modulated family honoring the
//! support and axis-compatibility conditions, or as sampled tables with
//! shape-preserving cubic interpolation. sigma is a discrete surrogate of
//! ||S_en - S0||_{2} + ||nu_en||_{2} + ||u_r^en||_{1} built from sampled
//! values and finite-difference quotients.

use crate::error::{Result, SolverError};
use crate::interp::{cumulative_fourth_order, CubicInterpolant};

/// Sample count used for validation and the sigma surrogate.
const SIGMA_SAMPLES: usize = 257;

#[derive(Debug, Clone)]
enum ProfileData {
    /// S_en = s0 + a_s (3 + cos(2 pi r))/4,
    /// nu_en = a_nu sin^2(2 pi r),
    /// u_r^en = a_ur (r/rc)(1 - (r/rc)^2)^3 for r < rc = 1/2 - epsilon, else 0.
    Bump {
        s0: f64,
        a_s: f64,
        a_nu: f64,
        a_ur: f64,
    },
    Table {
        s: CubicInterpolant,
        nu: CubicInterpolant,
        ur: CubicInterpolant,
    },
}

/// Radial entrance data with its cutoff width and smallness measure.
#[derive(Debug, Clone)]
pub struct EntranceProfile {
    data: ProfileData,
    /// Support cutoff width of u_r^en, in (0, 1/10).
    pub epsilon: f64,
    /// Discrete surrogate smallness measure.
    pub sigma: f64,
}

impl EntranceProfile {
    /// The unperturbed profile (sigma = 0).
    pub fn uniform(s0: f64) -> Self {
        Self {
            data: ProfileData::Bump {
                s0,
                a_s: 0.0,
                a_nu: 0.0,
                a_ur: 0.0,
            },
            epsilon: 0.05,
            sigma: 0.0,
        }
    }

    /// Closed-form bump family with independent amplitudes.
    pub fn bump_family(s0: f64, epsilon: f64, a_s: f64, a_nu: f64, a_ur: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 0.1) {
            return Err(SolverError::InvalidParameter(format!(
                "profile cutoff width must lie in (0, 1/10), got {epsilon}"
            )));
        }
        let mut profile = Self {
            data: ProfileData::Bump {
                s0,
                a_s,
                a_nu,
                a_ur,
            },
            epsilon,
            sigma: 0.0,
        };
        profile.sigma = profile.measure_sigma(s0);
        profile.validate()?;
        Ok(profile)
    }

    /// Bump family with all three unit amplitudes multiplied by one scale.
    pub fn scaled_bump(s0: f64, epsilon: f64, scale: f64) -> Result<Self> {
        Self::bump_family(s0, epsilon, scale, scale, scale)
    }

    /// Profiles from sampled tables on a common strictly increasing radius
    /// grid covering [0, 1/2].
    pub fn from_tables(
        s0: f64,
        epsilon: f64,
        r: &[f64],
        s: &[f64],
        nu: &[f64],
        ur: &[f64],
    ) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 0.1) {
            return Err(SolverError::InvalidParameter(format!(
                "profile cutoff width must lie in (0, 1/10), got {epsilon}"
            )));
        }
        if r.first().copied() != Some(0.0) || (r.last().copied().unwrap_or(0.0) - 0.5).abs() > 1e-12
        {
            return Err(SolverError::InvalidParameter(
                "profile tables must cover exactly [0, 1/2]".into(),
            ));
        }
        let mut profile = Self {
            data: ProfileData::Table {
                s: CubicInterpolant::monotone(r, s)?,
                nu: CubicInterpolant::monotone(r, nu)?,
                ur: CubicInterpolant::monotone(r, ur)?,
            },
            epsilon,
            sigma: 0.0,
        };
        profile.sigma = profile.measure_sigma(s0);
        profile.validate()?;
        Ok(profile)
    }

    pub fn s_en(&self, r: f64) -> f64 {
        match &self.data {
            ProfileData::Bump { s0, a_s, .. } => {
                s0 + a_s * (3.0 + (2.0 * std::f64::consts::PI * r).cos()) / 4.0
            }
            ProfileData::Table { s, .. } => s.eval(r),
        }
    }

    pub fn nu_en(&self, r: f64) -> f64 {
        match &self.data {
            ProfileData::Bump { a_nu, .. } => {
                let s = (2.0 * std::f64::consts::PI * r).sin();
                a_nu * s * s
            }
            ProfileData::Table { nu, .. } => nu.eval(r),
        }
    }

    pub fn ur_en(&self, r: f64) -> f64 {
        match &self.data {
            ProfileData::Bump { a_ur, .. } => {
                let rc = 0.5 - self.epsilon;
                if r >= rc {
                    0.0
                } else {
                    let t = r / rc;
                    let w = 1.0 - t * t;
                    a_ur * t * w * w * w
                }
            }
            ProfileData::Table { ur, .. } => ur.eval(r),
        }
    }

    /// Entrance Dirichlet data phi_en(r) = int_{1/2}^r u_r^en dt at the given
    /// increasing radii (expected to span [0, 1/2]); phi_en(1/2) = 0.
    pub fn entrance_potential(&self, radii: &[f64]) -> Vec<f64> {
        // Refine each node interval for quadrature accuracy well below h^2.
        const REFINE: usize = 8;
        let n = radii.len() - 1;
        let mut fine = Vec::with_capacity(n * REFINE + 1);
        for k in 0..n {
            for m in 0..REFINE {
                let t = m as f64 / REFINE as f64;
                fine.push(radii[k] * (1.0 - t) + radii[k + 1] * t);
            }
        }
        fine.push(radii[n]);
        // The fine grid is uniform when the input is; quadrature assumes it.
        let h = (radii[n] - radii[0]) / (n * REFINE) as f64;
        let samples: Vec<f64> = fine.iter().map(|&r| self.ur_en(r)).collect();
        let cumulative = cumulative_fourth_order(&samples, h);
        let at_half = *cumulative.last().unwrap();
        (0..=n)
            .map(|k| cumulative[k * REFINE] - at_half)
            .collect()
    }

    /// Interface trace values carried by the boundary streamline:
    /// (S_en(1/2), Lambda = (1/2) nu_en(1/2)).
    pub fn interface_trace(&self) -> (f64, f64) {
        (self.s_en(0.5), 0.5 * self.nu_en(0.5))
    }

    fn measure_sigma(&self, s0: f64) -> f64 {
        let n = SIGMA_SAMPLES - 1;
        let h = 0.5 / n as f64;
        let s: Vec<f64> = (0..=n).map(|k| self.s_en(k as f64 * h) - s0).collect();
        let nu: Vec<f64> = (0..=n).map(|k| self.nu_en(k as f64 * h)).collect();
        let ur: Vec<f64> = (0..=n).map(|k| self.ur_en(k as f64 * h)).collect();
        surrogate_norm(&s, h, 2) + surrogate_norm(&nu, h, 2) + surrogate_norm(&ur, h, 1)
    }

    fn validate(&self) -> Result<()> {
        let n = SIGMA_SAMPLES - 1;
        let h = 0.5 / n as f64;
        let scale = self.sigma.max(1e-300);
        // Support condition on the radial speed.
        for k in 0..=n {
            let r = k as f64 * h;
            if r >= 0.5 - self.epsilon && self.ur_en(r).abs() > 1e-12 * scale {
                return Err(SolverError::ProfileCondition {
                    condition: "u_r support".into(),
                    detail: format!(
                        "u_r^en({r}) = {} but must vanish for r >= {}",
                        self.ur_en(r),
                        0.5 - self.epsilon
                    ),
                });
            }
        }
        // Axis compatibility: S', nu' vanish at r = 0 and the swirl speed
        // itself vanishes on the axis.
        if self.nu_en(0.0).abs() > 1e-10 * scale {
            return Err(SolverError::ProfileCondition {
                condition: "axis swirl".into(),
                detail: format!("nu_en(0) = {} must vanish", self.nu_en(0.0)),
            });
        }
        for (name, d) in [
            ("S_en", self.fd_slope_at_zero(|r| self.s_en(r), h)),
            ("nu_en", self.fd_slope_at_zero(|r| self.nu_en(r), h)),
        ] {
            // One-sided second-order quotient of a C^2 function with zero
            // slope is O(h^2); allow a generous constant.
            if d.abs() > 1e3 * h * h * scale.max(1.0) {
                return Err(SolverError::ProfileCondition {
                    condition: "axis derivative".into(),
                    detail: format!("{name}'(0) = {d} must vanish"),
                });
            }
        }
        Ok(())
    }

    fn fd_slope_at_zero(&self, g: impl Fn(f64) -> f64, h: f64) -> f64 {
        (-3.0 * g(0.0) + 4.0 * g(h) - g(2.0 * h)) / (2.0 * h)
    }
}

/// Max of sampled values plus max finite-difference quotients up to the given
/// order (1 or 2).
fn surrogate_norm(samples: &[f64], h: f64, order: usize) -> f64 {
    let n = samples.len() - 1;
    let sup = samples.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut d1 = 0.0f64;
    for k in 1..n {
        d1 = d1.max(((samples[k + 1] - samples[k - 1]) / (2.0 * h)).abs());
    }
    let mut total = sup + d1;
    if order >= 2 {
        let mut d2 = 0.0f64;
        for k in 1..n {
            d2 = d2.max(((samples[k + 1] - 2.0 * samples[k] + samples[k - 1]) / (h * h)).abs());
        }
        total += d2;
    }
    total
}
