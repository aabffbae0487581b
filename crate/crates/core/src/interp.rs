//! One-dimensional interpolation and quadrature helpers.
//!
//! Shape-preserving cubic Hermite interpolation (Fritsch–Carlson limited) is
//! used wherever a table must stay monotone so that it can be inverted, most
//! importantly the entrance flux map. Cumulative quadrature rules of second
//! and fourth order back the stream-function construction.

use crate::error::{Result, SolverError};

/// 4-point Gauss–Legendre nodes on [0, 1].
pub const GAUSS4_NODES: [f64; 4] = [
    0.069_431_844_202_973_71,
    0.330_009_478_207_571_87,
    0.669_990_521_792_428_1,
    0.930_568_155_797_026_3,
];

/// 4-point Gauss–Legendre weights on [0, 1].
pub const GAUSS4_WEIGHTS: [f64; 4] = [
    0.173_927_422_568_726_93,
    0.326_072_577_431_273_07,
    0.326_072_577_431_273_07,
    0.173_927_422_568_726_93,
];

/// Piecewise cubic Hermite interpolant on a strictly increasing abscissa.
#[derive(Debug, Clone)]
pub struct CubicInterpolant {
    x: Vec<f64>,
    y: Vec<f64>,
    /// Nodal derivatives dy/dx.
    d: Vec<f64>,
}

impl CubicInterpolant {
    /// Builds a shape-preserving (monotonicity-limited) interpolant.
    pub fn monotone(x: &[f64], y: &[f64]) -> Result<Self> {
        let mut interp = Self::smooth(x, y)?;
        limit_slopes(&interp.x, &interp.y, &mut interp.d);
        Ok(interp)
    }

    /// Builds an unlimited interpolant with finite-difference nodal slopes.
    pub fn smooth(x: &[f64], y: &[f64]) -> Result<Self> {
        if x.len() != y.len() || x.len() < 2 {
            return Err(SolverError::Interpolation(format!(
                "need at least 2 matching samples, got {} x and {} y",
                x.len(),
                y.len()
            )));
        }
        for k in 1..x.len() {
            if x[k] <= x[k - 1] {
                return Err(SolverError::Interpolation(format!(
                    "abscissa not strictly increasing at index {}: {} <= {}",
                    k,
                    x[k],
                    x[k - 1]
                )));
            }
        }
        let d = nodal_slopes(x, y);
        Ok(Self {
            x: x.to_vec(),
            y: y.to_vec(),
            d,
        })
    }

    pub fn x_min(&self) -> f64 {
        self.x[0]
    }

    pub fn x_max(&self) -> f64 {
        *self.x.last().unwrap()
    }

    pub fn y_first(&self) -> f64 {
        self.y[0]
    }

    pub fn y_last(&self) -> f64 {
        *self.y.last().unwrap()
    }

    fn interval(&self, xq: f64) -> usize {
        let n = self.x.len() - 1;
        match self
            .x
            .binary_search_by(|v| v.partial_cmp(&xq).expect("non-finite abscissa"))
        {
            Ok(k) => k.min(n - 1),
            Err(k) => k.saturating_sub(1).min(n - 1),
        }
    }

    /// Evaluates the interpolant; queries outside the table are extrapolated
    /// with the boundary cubic.
    pub fn eval(&self, xq: f64) -> f64 {
        let k = self.interval(xq);
        let h = self.x[k + 1] - self.x[k];
        let t = (xq - self.x[k]) / h;
        let (h00, h10, h01, h11) = hermite_basis(t);
        h00 * self.y[k] + h10 * h * self.d[k] + h01 * self.y[k + 1] + h11 * h * self.d[k + 1]
    }

    /// Evaluates d/dx of the interpolant.
    pub fn eval_deriv(&self, xq: f64) -> f64 {
        let k = self.interval(xq);
        let h = self.x[k + 1] - self.x[k];
        let t = (xq - self.x[k]) / h;
        let (g00, g10, g01, g11) = hermite_basis_deriv(t);
        (g00 * self.y[k] + g01 * self.y[k + 1]) / h + g10 * self.d[k] + g11 * self.d[k + 1]
    }

    /// Solves eval(x) = yq for x on a table with strictly increasing values,
    /// by bracketed Newton iteration with bisection safeguard.
    pub fn invert(&self, yq: f64) -> Result<f64> {
        let n = self.x.len() - 1;
        for k in 1..=n {
            if self.y[k] <= self.y[k - 1] {
                return Err(SolverError::Interpolation(format!(
                    "cannot invert: values not strictly increasing at index {}",
                    k
                )));
            }
        }
        if yq < self.y[0] || yq > self.y[n] {
            return Err(SolverError::Interpolation(format!(
                "inverse query {} outside table range [{}, {}]",
                yq, self.y[0], self.y[n]
            )));
        }
        // Bracket by nodal values, then refine.
        let k = match self
            .y
            .binary_search_by(|v| v.partial_cmp(&yq).expect("non-finite value"))
        {
            Ok(k) => return Ok(self.x[k]),
            Err(k) => k.saturating_sub(1).min(n - 1),
        };
        let (mut lo, mut hi) = (self.x[k], self.x[k + 1]);
        let mut xq = 0.5 * (lo + hi);
        let scale = (self.x[n] - self.x[0]).abs().max(1.0);
        for _ in 0..100 {
            let fy = self.eval(xq) - yq;
            if fy == 0.0 {
                return Ok(xq);
            }
            if fy > 0.0 {
                hi = xq;
            } else {
                lo = xq;
            }
            let dy = self.eval_deriv(xq);
            let mut next = if dy != 0.0 { xq - fy / dy } else { xq };
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - xq).abs() <= 1e-15 * scale {
                return Ok(next);
            }
            xq = next;
        }
        Ok(xq)
    }
}

fn hermite_basis(t: f64) -> (f64, f64, f64, f64) {
    let t2 = t * t;
    let t3 = t2 * t;
    (
        2.0 * t3 - 3.0 * t2 + 1.0,
        t3 - 2.0 * t2 + t,
        -2.0 * t3 + 3.0 * t2,
        t3 - t2,
    )
}

fn hermite_basis_deriv(t: f64) -> (f64, f64, f64, f64) {
    let t2 = t * t;
    (
        6.0 * t2 - 6.0 * t,
        3.0 * t2 - 4.0 * t + 1.0,
        -6.0 * t2 + 6.0 * t,
        3.0 * t2 - 2.0 * t,
    )
}

/// Three-point finite-difference nodal slopes (exact for parabolas).
fn nodal_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len() - 1;
    let mut d = vec![0.0; n + 1];
    if n == 1 {
        let s = (y[1] - y[0]) / (x[1] - x[0]);
        d[0] = s;
        d[1] = s;
        return d;
    }
    for k in 1..n {
        let hl = x[k] - x[k - 1];
        let hr = x[k + 1] - x[k];
        let sl = (y[k] - y[k - 1]) / hl;
        let sr = (y[k + 1] - y[k]) / hr;
        d[k] = (hr * sl + hl * sr) / (hl + hr);
    }
    // One-sided parabolic estimates at the ends.
    let h0 = x[1] - x[0];
    let h1 = x[2] - x[1];
    let s0 = (y[1] - y[0]) / h0;
    let s1 = (y[2] - y[1]) / h1;
    d[0] = s0 + (s0 - s1) * h0 / (h0 + h1);
    let hm = x[n] - x[n - 1];
    let hp = x[n - 1] - x[n - 2];
    let sm = (y[n] - y[n - 1]) / hm;
    let sp = (y[n - 1] - y[n - 2]) / hp;
    d[n] = sm + (sm - sp) * hm / (hm + hp);
    d
}

/// Fritsch–Carlson monotonicity limiter applied in place.
fn limit_slopes(x: &[f64], y: &[f64], d: &mut [f64]) {
    let n = x.len() - 1;
    for k in 0..n {
        let s = (y[k + 1] - y[k]) / (x[k + 1] - x[k]);
        if s == 0.0 {
            d[k] = 0.0;
            d[k + 1] = 0.0;
            continue;
        }
        let mut a = (d[k] / s).max(0.0);
        let mut b = (d[k + 1] / s).max(0.0);
        let norm = (a * a + b * b).sqrt();
        if norm > 3.0 {
            a *= 3.0 / norm;
            b *= 3.0 / norm;
        }
        d[k] = a * s;
        d[k + 1] = b * s;
    }
}

/// Cumulative trapezoid integral of uniformly spaced samples; result[0] = 0.
pub fn cumulative_trapezoid(y: &[f64], h: f64) -> Vec<f64> {
    let mut acc = vec![0.0; y.len()];
    for k in 1..y.len() {
        acc[k] = acc[k - 1] + 0.5 * h * (y[k - 1] + y[k]);
    }
    acc
}

/// Cumulative fourth-order integral of uniformly spaced samples via cubic
/// panel rules; result[0] = 0. Needs at least 4 samples.
pub fn cumulative_fourth_order(y: &[f64], h: f64) -> Vec<f64> {
    let n = y.len();
    assert!(n >= 4, "fourth-order cumulative rule needs >= 4 samples");
    let mut acc = vec![0.0; n];
    let c = h / 24.0;
    acc[1] = c * (9.0 * y[0] + 19.0 * y[1] - 5.0 * y[2] + y[3]);
    for k in 1..n - 2 {
        acc[k + 1] = acc[k] + c * (-y[k - 1] + 13.0 * y[k] + 13.0 * y[k + 1] - y[k + 2]);
    }
    acc[n - 1] =
        acc[n - 2] + c * (9.0 * y[n - 1] + 19.0 * y[n - 2] - 5.0 * y[n - 3] + y[n - 4]);
    acc
}

/// Definite integral of uniformly spaced samples with the fourth-order rule.
pub fn integrate_fourth_order(y: &[f64], h: f64) -> f64 {
    *cumulative_fourth_order(y, h).last().unwrap()
}

/// Definite integral of uniformly spaced samples with the trapezoid rule.
pub fn integrate_trapezoid(y: &[f64], h: f64) -> f64 {
    y.iter().sum::<f64>() * h - 0.5 * h * (y[0] + y[y.len() - 1])
}

/// Cubic Lagrange sampling of uniformly spaced samples y[k] = g(k*h) at an
/// off-grid point, O(h^4) for smooth g. The 4-point stencil is centered where
/// possible and shifted at the ends; queries are clamped to the table.
pub fn sample_uniform_cubic(y: &[f64], h: f64, xq: f64) -> f64 {
    let n = y.len();
    assert!(n >= 4, "cubic sampling needs >= 4 samples");
    let t = (xq / h).clamp(0.0, (n - 1) as f64);
    let k0 = ((t.floor() as usize).saturating_sub(1)).min(n - 4);
    let s = t - k0 as f64;
    // Lagrange basis on stencil offsets 0, 1, 2, 3.
    let l0 = -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0;
    let l1 = s * (s - 2.0) * (s - 3.0) / 2.0;
    let l2 = -s * (s - 1.0) * (s - 3.0) / 2.0;
    let l3 = s * (s - 1.0) * (s - 2.0) / 6.0;
    l0 * y[k0] + l1 * y[k0 + 1] + l2 * y[k0 + 2] + l3 * y[k0 + 3]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn gauss4_integrates_low_degree_polynomials_exactly() {
        // Exact through degree 7 on [0, 1]: integral of t^p is 1/(p+1).
        for p in 0..=7 {
            let quad: f64 = GAUSS4_NODES
                .iter()
                .zip(GAUSS4_WEIGHTS.iter())
                .map(|(t, w)| w * t.powi(p))
                .sum();
            assert_abs_diff_eq!(quad, 1.0 / (p as f64 + 1.0), epsilon = 1e-14);
        }
    }

    #[test]
    fn cubic_reproduces_parabola() {
        let x: Vec<f64> = (0..=20).map(|k| k as f64 / 20.0).collect();
        let y: Vec<f64> = x.iter().map(|&v| 3.0 * v * v - v + 2.0).collect();
        let interp = CubicInterpolant::smooth(&x, &y).unwrap();
        for k in 0..200 {
            let xq = k as f64 / 199.0;
            assert_abs_diff_eq!(interp.eval(xq), 3.0 * xq * xq - xq + 2.0, epsilon = 1e-12);
            assert_abs_diff_eq!(interp.eval_deriv(xq), 6.0 * xq - 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn monotone_interpolant_of_monotone_data_stays_monotone() {
        let x: Vec<f64> = (0..=10).map(|k| k as f64).collect();
        let y = vec![0.0, 0.1, 0.11, 0.112, 2.0, 5.0, 5.01, 5.011, 6.0, 9.0, 9.5];
        let interp = CubicInterpolant::monotone(&x, &y).unwrap();
        let mut last = interp.eval(0.0);
        for k in 1..=1000 {
            let v = interp.eval(k as f64 / 100.0);
            assert!(v >= last - 1e-12, "not monotone at {}", k);
            last = v;
        }
    }

    #[test]
    fn inversion_round_trips() {
        let x: Vec<f64> = (0..=32).map(|k| k as f64 / 64.0).collect();
        let y: Vec<f64> = x.iter().map(|&v| v * v / 2.0 + 0.1 * v).collect();
        let interp = CubicInterpolant::monotone(&x, &y).unwrap();
        for k in 0..=100 {
            let xq = 0.5 * k as f64 / 100.0;
            let back = interp.invert(interp.eval(xq)).unwrap();
            assert_abs_diff_eq!(back, xq, epsilon = 1e-12);
        }
    }

    #[test]
    fn inversion_rejects_out_of_range() {
        let x = vec![0.0, 1.0, 2.0];
        let y = vec![0.0, 1.0, 4.0];
        let interp = CubicInterpolant::monotone(&x, &y).unwrap();
        assert!(interp.invert(5.0).is_err());
        assert!(interp.invert(-0.5).is_err());
    }

    #[test]
    fn cumulative_rules_on_quadratic() {
        let h = 0.01;
        let y: Vec<f64> = (0..=100).map(|k| (k as f64 * h).powi(2)).collect();
        let quartic = cumulative_fourth_order(&y, h);
        // Exact for cubics: int_0^x t^2 dt = x^3/3.
        for (k, acc) in quartic.iter().enumerate() {
            let x = k as f64 * h;
            assert_abs_diff_eq!(*acc, x * x * x / 3.0, epsilon = 1e-14);
        }
        let trap = cumulative_trapezoid(&y, h);
        // Trapezoid error on t^2 is h^2/6 per unit length.
        assert_abs_diff_eq!(trap[100], 1.0 / 3.0 + h * h / 6.0, epsilon = 1e-12);
        assert_abs_diff_eq!(integrate_trapezoid(&y, h), trap[100], epsilon = 1e-14);
        assert_abs_diff_eq!(integrate_fourth_order(&y, h), quartic[100], epsilon = 1e-14);
    }

    #[test]
    fn uniform_cubic_sampling_exact_for_cubics() {
        let h = 0.125;
        let g = |x: f64| 2.0 * x * x * x - x * x + 0.5 * x - 3.0;
        let y: Vec<f64> = (0..=16).map(|k| g(k as f64 * h)).collect();
        for k in 0..=160 {
            let xq = 2.0 * k as f64 / 160.0;
            assert_abs_diff_eq!(sample_uniform_cubic(&y, h, xq), g(xq), epsilon = 1e-12);
        }
        // Nodal queries reproduce the samples, including at the ends.
        assert_abs_diff_eq!(sample_uniform_cubic(&y, h, 0.0), y[0], epsilon = 1e-13);
        assert_abs_diff_eq!(sample_uniform_cubic(&y, h, 2.0), y[16], epsilon = 1e-13);
    }

    #[test]
    fn uniform_cubic_sampling_fourth_order() {
        let run = |n: usize| -> f64 {
            let h = 1.0 / n as f64;
            let y: Vec<f64> = (0..=n).map(|k| (3.0 * k as f64 * h).sin()).collect();
            let mut worst = 0.0f64;
            for k in 0..=977 {
                let xq = k as f64 / 977.0;
                worst = worst.max((sample_uniform_cubic(&y, h, xq) - (3.0 * xq).sin()).abs());
            }
            worst
        };
        let order = (run(32) / run(64)).log2();
        assert!(order > 3.7, "sampling order {order}");
    }

    #[test]
    fn quadrature_convergence_orders() {
        // Smooth non-polynomial integrand: exp(x) on [0,1].
        let run = |n: usize| -> (f64, f64) {
            let h = 1.0 / n as f64;
            let y: Vec<f64> = (0..=n).map(|k| (k as f64 * h).exp()).collect();
            let exact = 1.0f64.exp() - 1.0;
            (
                (integrate_trapezoid(&y, h) - exact).abs(),
                (integrate_fourth_order(&y, h) - exact).abs(),
            )
        };
        let (t1, q1) = run(32);
        let (t2, q2) = run(64);
        let order_trap = (t1 / t2).log2();
        let order_quart = (q1 / q2).log2();
        assert!((order_trap - 2.0).abs() < 0.1, "trapezoid order {}", order_trap);
        assert!(order_quart > 3.7, "fourth-order rule order {}", order_quart);
    }
}
