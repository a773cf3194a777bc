//! Banded LU with partial pivoting and symmetric tridiagonal eigenvalue tools.
//!
//! Structured meshes numbered row by row give matrices whose bandwidth is
//! one mesh row, so a dense band factorization is the whole sparse solver.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float as _;

use crate::error::{Error, Result};

/// Square band matrix with `kl` sub- and `ku` super-diagonals, stored with
/// room for the `kl` extra super-diagonals that pivoting fills in.
#[derive(Debug, Clone)]
pub struct BandMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let width = 2 * kl + ku + 1;
        BandMatrix { n, kl, ku, width, data: vec![0.0; n * width] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> usize {
        debug_assert!(j + self.kl >= i && j <= i + self.kl + self.ku);
        i * self.width + (j + self.kl - i)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if j + self.kl < i || j > i + self.ku {
            return 0.0;
        }
        self.data[self.slot(i, j)]
    }

    /// Adds `v` at `(i, j)`. Panics if the entry lies outside the band.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        assert!(j + self.kl >= i && j <= i + self.ku, "entry ({i}, {j}) outside band");
        let s = self.slot(i, j);
        self.data[s] += v;
    }

    /// Replaces row `i` by the identity row.
    pub fn set_identity_row(&mut self, i: usize) {
        let lo = i.saturating_sub(self.kl);
        let hi = (i + self.ku).min(self.n - 1);
        for j in lo..=hi {
            let s = self.slot(i, j);
            self.data[s] = 0.0;
        }
        let s = self.slot(i, i);
        self.data[s] = 1.0;
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for (i, yi) in y.iter_mut().enumerate() {
            let lo = i.saturating_sub(self.kl);
            let hi = (i + self.ku).min(self.n - 1);
            *yi = (lo..=hi).map(|j| self.data[self.slot(i, j)] * x[j]).sum();
        }
        y
    }

    /// LU factorization with row partial pivoting.
    pub fn factor(mut self) -> Result<BandLu> {
        let n = self.n;
        let reach = self.kl + self.ku;
        let mut pivots = vec![0usize; n];
        for c in 0..n {
            let last_row = (c + self.kl).min(n - 1);
            let mut piv = c;
            let mut best = self.data[self.slot(c, c)].abs();
            for r in c + 1..=last_row {
                let v = self.data[self.slot(r, c)].abs();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if best == 0.0 || !best.is_finite() {
                return Err(Error::SingularMatrix);
            }
            pivots[c] = piv;
            let last_col = (c + reach).min(n - 1);
            if piv != c {
                for j in c..=last_col {
                    let a = self.slot(c, j);
                    let b = self.slot(piv, j);
                    self.data.swap(a, b);
                }
            }
            let diag = self.data[self.slot(c, c)];
            for r in c + 1..=last_row {
                let s = self.slot(r, c);
                let l = self.data[s] / diag;
                self.data[s] = l;
                if l == 0.0 {
                    continue;
                }
                for j in c + 1..=last_col {
                    let src = self.data[self.slot(c, j)];
                    let dst = self.slot(r, j);
                    self.data[dst] -= l * src;
                }
            }
        }
        Ok(BandLu { m: self, pivots })
    }
}

#[derive(Debug, Clone)]
pub struct BandLu {
    m: BandMatrix,
    pivots: Vec<usize>,
}

impl BandLu {
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let m = &self.m;
        let n = m.n;
        assert_eq!(b.len(), n);
        for c in 0..n {
            b.swap(c, self.pivots[c]);
            let bc = b[c];
            if bc != 0.0 {
                for r in c + 1..=(c + m.kl).min(n - 1) {
                    b[r] -= m.data[m.slot(r, c)] * bc;
                }
            }
        }
        let reach = m.kl + m.ku;
        for c in (0..n).rev() {
            let mut acc = b[c];
            for j in c + 1..=(c + reach).min(n - 1) {
                acc -= m.data[m.slot(c, j)] * b[j];
            }
            b[c] = acc / m.data[m.slot(c, c)];
        }
    }
}

/// Number of eigenvalues strictly below `x` of the symmetric tridiagonal
/// matrix with diagonal `diag` and off-diagonal `off` (Sturm sequence).
pub fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..diag.len() {
        let e2 = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
        q = diag[i] - x - if i == 0 { 0.0 } else { e2 / q };
        if q == 0.0 {
            q = -f64::EPSILON * (diag[i].abs() + x.abs()).max(f64::MIN_POSITIVE);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Gershgorin interval containing the spectrum.
pub fn gershgorin(diag: &[f64], off: &[f64]) -> (f64, f64) {
    let n = diag.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { off[i - 1].abs() } else { 0.0 } + if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    (lo, hi)
}

/// The `index`-th smallest eigenvalue (0-based) by bisection on the Sturm
/// count, to absolute width `tol`.
pub fn tridiagonal_eigenvalue(diag: &[f64], off: &[f64], index: usize, tol: f64) -> f64 {
    let (mut lo, mut hi) = gershgorin(diag, off);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(diag, off, mid) > index {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Eigenvector for an (approximate) eigenvalue by inverse iteration.
pub fn tridiagonal_eigenvector(diag: &[f64], off: &[f64], eigenvalue: f64) -> Result<Vec<f64>> {
    let n = diag.len();
    let shift = eigenvalue + 1e-10 * eigenvalue.abs().max(1.0);
    let mut m = BandMatrix::zeros(n, 1, 1);
    for i in 0..n {
        m.add(i, i, diag[i] - shift);
        if i + 1 < n {
            m.add(i, i + 1, off[i]);
            m.add(i + 1, i, off[i]);
        }
    }
    let lu = m.factor()?;
    let mut v = vec![1.0; n];
    for _ in 0..4 {
        lu.solve_in_place(&mut v);
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::SingularMatrix);
        }
        v.iter_mut().for_each(|x| *x /= norm);
    }
    Ok(v)
}
