//! Banded Gaussian elimination with partial pivoting.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct BandedMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    data: Vec<f64>,
}

impl BandedMatrix {
    /// `kl` sub- and `ku` super-diagonals; room is reserved for the `kl`
    /// extra super-diagonals that row exchanges can create.
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let width = 2 * kl + ku + 1;
        BandedMatrix { n, kl, ku, width, data: vec![0.0; n * width] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(j + self.kl >= i && j <= i + self.ku + self.kl);
        i * self.width + (j + self.kl - i)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if j + self.kl < i || j > i + self.ku + self.kl {
            return 0.0;
        }
        self.data[self.idx(i, j)]
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        assert!(j + self.kl >= i && j <= i + self.ku, "({i}, {j}) outside the band");
        let k = self.idx(i, j);
        self.data[k] += v;
    }

    /// Solves A·x = b in place (b becomes x), consuming the factorization.
    pub fn solve(mut self, b: &mut [f64]) -> Result<()> {
        let n = self.n;
        assert_eq!(b.len(), n);
        let w = self.width;
        // last column holding a nonzero, per row; grows only through exchanges
        let mut ext: Vec<usize> = (0..n).map(|i| (i + self.ku).min(n - 1)).collect();
        for k in 0..n {
            let last = (k + self.kl).min(n - 1);
            let mut p = k;
            let mut best = self.get(k, k).abs();
            for i in k + 1..=last {
                let v = self.get(i, k).abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == 0.0 || !best.is_finite() {
                return Err(Error::SingularJacobian { row: k });
            }
            if p != k {
                let jmax = ext[k].max(ext[p]);
                for j in k..=jmax {
                    let (a, c) = (self.idx(k, j), self.idx(p, j));
                    self.data.swap(a, c);
                }
                b.swap(k, p);
                ext.swap(k, p);
                ext[k] = jmax;
            }
            let jmax = ext[k];
            let len = jmax - k;
            let pivot = self.data[self.idx(k, k)];
            let bk = b[k];
            for i in k + 1..=last {
                let ik = self.idx(i, k);
                let m = self.data[ik] / pivot;
                if m == 0.0 {
                    continue;
                }
                self.data[ik] = 0.0;
                // row i (later in memory) minus m · row k over columns k+1..=jmax
                let (head, tail) = self.data.split_at_mut(i * w);
                let src = &head[k * w + self.kl + 1..][..len];
                let dst = &mut tail[k + 1 + self.kl - i..][..len];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d -= m * s;
                }
                ext[i] = ext[i].max(jmax);
                b[i] -= m * bk;
            }
        }
        for k in (0..n).rev() {
            let mut s = b[k];
            for j in k + 1..=ext[k] {
                s -= self.data[self.idx(k, j)] * b[j];
            }
            b[k] = s / self.data[self.idx(k, k)];
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_mul(rows: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
        rows.iter().map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    #[test]
    fn solves_with_pivoting() {
        // zero on the diagonal forces a row exchange
        let n = 7;
        let (kl, ku) = (2, 1);
        let mut dense = vec![vec![0.0; n]; n];
        let mut m = BandedMatrix::zeros(n, kl, ku);
        for i in 0..n {
            for j in i.saturating_sub(kl)..=(i + ku).min(n - 1) {
                let v = if i == j && i % 3 == 0 { 0.0 } else { ((i * 7 + j * 3) % 5) as f64 - 1.7 };
                dense[i][j] = v;
                m.add(i, j, v);
            }
        }
        let x: Vec<f64> = (0..n).map(|i| (i as f64).sin() + 0.5).collect();
        let mut b = dense_mul(&dense, &x);
        m.solve(&mut b).unwrap();
        for (a, e) in b.iter().zip(&x) {
            assert!((a - e).abs() < 1e-12, "{a} vs {e}");
        }
    }

    #[test]
    fn singular_reported() {
        let mut m = BandedMatrix::zeros(3, 1, 1);
        m.add(0, 0, 1.0);
        m.add(2, 2, 1.0);
        let mut b = vec![1.0; 3];
        assert!(matches!(m.solve(&mut b), Err(Error::SingularJacobian { row: 1 })));
    }

    #[test]
    fn many_exchanges_match_dense() {
        // small diagonal and quasi-random off-band entries force repeated row
        // exchanges, so fill spreads out to kl + ku
        let (n, kl, ku) = (40, 3, 2);
        let mut dense = vec![vec![0.0; n]; n];
        let mut m = BandedMatrix::zeros(n, kl, ku);
        for i in 0..n {
            for j in i.saturating_sub(kl)..=(i + ku).min(n - 1) {
                let v = if i == j { 1e-3 } else { crate::numerics::halton((i * n + j + 1) as u64, 3) - 0.5 };
                dense[i][j] = v;
                m.add(i, j, v);
            }
        }
        let x: Vec<f64> = (0..n).map(|i| (0.3 * i as f64).cos()).collect();
        let mut b = dense_mul(&dense, &x);
        m.solve(&mut b).unwrap();
        for (a, e) in b.iter().zip(&x) {
            assert!((a - e).abs() < 1e-9, "{a} vs {e}");
        }
    }
}
