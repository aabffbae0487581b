//! Banded LU factorization with partial pivoting.
//!
//! Both elliptic problems discretize to banded systems under row-major node
//! ordering, so a band factorization in LAPACK-style storage (kl extra
//! superdiagonals for pivoting fill-in) gives a deterministic direct solve at
//! desk scale.

use crate::error::{Result, SolverError};

/// Band matrix being assembled: entries within kl subdiagonals and ku
/// superdiagonals of the main diagonal.
#[derive(Debug, Clone)]
pub struct BandedMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    stride: usize,
    /// Column-major band storage; entry (i, j) lives at
    /// ab[j*stride + kl + ku + i - j].
    ab: Vec<f64>,
}

impl BandedMatrix {
    pub fn new(n: usize, kl: usize, ku: usize) -> Self {
        let stride = 2 * kl + ku + 1;
        Self {
            n,
            kl,
            ku,
            stride,
            ab: vec![0.0; n * stride],
        }
    }

    #[inline]
    fn index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.n && j < self.n);
        debug_assert!(
            j <= i + self.ku && i <= j + self.kl,
            "entry ({i}, {j}) outside band kl={} ku={}",
            self.kl,
            self.ku
        );
        j * self.stride + self.kl + self.ku + i - j
    }

    #[inline]
    pub fn add(&mut self, i: usize, j: usize, value: f64) {
        let idx = self.index(i, j);
        self.ab[idx] += value;
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        let idx = self.index(i, j);
        self.ab[idx] = value;
    }

    /// LU factorization with partial pivoting, consuming the assembly.
    pub fn factor(mut self) -> Result<BandedLu> {
        let (n, kl, ku, stride) = (self.n, self.kl, self.ku, self.stride);
        let kv = kl + ku; // width of U's band after pivoting
        let mut ipiv = vec![0usize; n];
        for j in 0..n {
            let km = kl.min(n - 1 - j);
            // Pivot search down column j.
            let mut jp = 0usize;
            let mut best = 0.0f64;
            for k in 0..=km {
                let v = self.ab[j * stride + kv + k].abs();
                if v > best {
                    best = v;
                    jp = k;
                }
            }
            if best == 0.0 {
                return Err(SolverError::LinearSolve(format!(
                    "singular band matrix: zero pivot column {j}"
                )));
            }
            ipiv[j] = j + jp;
            let ju = (j + kv).min(n - 1);
            if jp != 0 {
                // Swap rows j and j+jp across columns j..=ju.
                for col in j..=ju {
                    let a = col * stride + kv + j - col;
                    let b = a + jp;
                    self.ab.swap(a, b);
                }
            }
            let pivot = self.ab[j * stride + kv];
            let mcol = j * stride + kv;
            for k in 1..=km {
                self.ab[mcol + k] /= pivot;
            }
            for col in (j + 1)..=ju {
                let u = col * stride + kv + j - col;
                let t = self.ab[u];
                if t != 0.0 {
                    for k in 1..=km {
                        self.ab[u + k] -= self.ab[mcol + k] * t;
                    }
                }
            }
        }
        Ok(BandedLu {
            n,
            kl,
            kv,
            stride,
            ab: self.ab,
            ipiv,
        })
    }
}

/// Factored form ready for repeated right-hand sides.
#[derive(Debug, Clone)]
pub struct BandedLu {
    n: usize,
    kl: usize,
    kv: usize,
    stride: usize,
    ab: Vec<f64>,
    ipiv: Vec<usize>,
}

impl BandedLu {
    /// Solves in place.
    pub fn solve(&self, b: &mut [f64]) {
        assert_eq!(b.len(), self.n);
        let (n, kl, kv, stride) = (self.n, self.kl, self.kv, self.stride);
        // Forward: apply row interchanges and L (unit lower, band kl).
        for j in 0..n {
            let p = self.ipiv[j];
            if p != j {
                b.swap(j, p);
            }
            let km = kl.min(n - 1 - j);
            let bj = b[j];
            if bj != 0.0 {
                for k in 1..=km {
                    b[j + k] -= self.ab[j * stride + kv + k] * bj;
                }
            }
        }
        // Back substitution with U (band kv).
        for j in (0..n).rev() {
            b[j] /= self.ab[j * stride + kv];
            let bj = b[j];
            if bj != 0.0 {
                let lo = j.saturating_sub(kv);
                for i in lo..j {
                    b[i] -= self.ab[j * stride + kv + i - j] * bj;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Dense Gaussian elimination with partial pivoting, as an oracle.
    fn dense_solve(a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
        let n = b.len();
        let mut m: Vec<Vec<f64>> = a.iter().cloned().collect();
        let mut rhs = b.to_vec();
        for j in 0..n {
            let piv = (j..n).max_by(|&p, &q| m[p][j].abs().total_cmp(&m[q][j].abs())).unwrap();
            m.swap(j, piv);
            rhs.swap(j, piv);
            for i in j + 1..n {
                let f = m[i][j] / m[j][j];
                for k in j..n {
                    m[i][k] -= f * m[j][k];
                }
                rhs[i] -= f * rhs[j];
            }
        }
        for j in (0..n).rev() {
            let mut s = rhs[j];
            for k in j + 1..n {
                s -= m[j][k] * rhs[k];
            }
            rhs[j] = s / m[j][j];
        }
        rhs
    }

    /// Deterministic pseudo-random stream.
    fn lcg(seed: &mut u64) -> f64 {
        *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((*seed >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
    }

    #[test]
    fn matches_dense_oracle_on_random_band_systems() {
        let mut seed = 12345u64;
        for &(n, kl, ku) in &[(12usize, 2usize, 3usize), (40, 5, 5), (25, 1, 4)] {
            let mut band = BandedMatrix::new(n, kl, ku);
            let mut dense = vec![vec![0.0; n]; n];
            for i in 0..n {
                for j in 0..n {
                    if j <= i + ku && i <= j + kl {
                        let v = lcg(&mut seed) + if i == j { 4.0 } else { 0.0 };
                        band.set(i, j, v);
                        dense[i][j] = v;
                    }
                }
            }
            let rhs: Vec<f64> = (0..n).map(|_| lcg(&mut seed)).collect();
            let lu = band.factor().unwrap();
            let mut x = rhs.clone();
            lu.solve(&mut x);
            let oracle = dense_solve(&dense, &rhs);
            for k in 0..n {
                assert!(
                    (x[k] - oracle[k]).abs() < 1e-12,
                    "mismatch at {k}: {} vs {}",
                    x[k],
                    oracle[k]
                );
            }
        }
    }

    #[test]
    fn pivoting_handles_zero_diagonal() {
        // [[0, 1], [1, 0]] needs a row swap.
        let mut band = BandedMatrix::new(2, 1, 1);
        band.set(0, 1, 1.0);
        band.set(1, 0, 1.0);
        let lu = band.factor().unwrap();
        let mut b = vec![2.0, 3.0];
        lu.solve(&mut b);
        assert_eq!(b, vec![3.0, 2.0]);
    }

    #[test]
    fn singular_matrix_detected() {
        let mut band = BandedMatrix::new(3, 1, 1);
        band.set(0, 0, 1.0);
        band.set(1, 1, 1.0);
        // Row 2 left zero.
        assert!(matches!(
            band.factor(),
            Err(SolverError::LinearSolve(_))
        ));
    }

    #[test]
    fn repeated_solves_reuse_factorization() {
        let n = 30;
        let mut band = BandedMatrix::new(n, 2, 2);
        for i in 0..n {
            band.set(i, i, 2.5);
            if i > 0 {
                band.set(i, i - 1, -1.0);
            }
            if i + 1 < n {
                band.set(i, i + 1, -1.0);
            }
        }
        let lu = band.factor().unwrap();
        for scale in [1.0, 2.0, -3.5] {
            let mut b = vec![scale; n];
            lu.solve(&mut b);
            // Residual check: A x = b.
            for i in 0..n {
                let mut ax = 2.5 * b[i];
                if i > 0 {
                    ax -= b[i - 1];
                }
                if i + 1 < n {
                    ax -= b[i + 1];
                }
                assert!((ax - scale).abs() < 1e-13);
            }
        }
    }
}
