//! Uniform rectangular sample grids.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float as _;

use crate::error::{Error, Result};
use crate::mesh::Point;

/// Axis-aligned sampling window `[x0, x1] × [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Window {
    pub fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        Window { x0, y0, x1, y1 }
    }

    pub fn is_empty(&self) -> bool {
        !(self.x1 > self.x0 && self.y1 > self.y0)
    }

    /// Sample counts along x and y for spacing `hs`; points at
    /// `x0 + i·hs ≤ x1`.
    pub fn counts(&self, hs: f64) -> (usize, usize) {
        if self.is_empty() {
            return (0, 0);
        }
        let n = |a: f64, b: f64| ((b - a) / hs + 1e-9).floor() as usize + 1;
        (n(self.x0, self.x1), n(self.y0, self.y1))
    }
}

/// Row-major samples: `values[j·nx + i]` sits at `(x0 + i·hs, y0 + j·hs)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub nx: usize,
    pub ny: usize,
    pub hs: f64,
    pub x0: f64,
    pub y0: f64,
    pub values: Vec<f64>,
}

impl Grid {
    pub fn new(nx: usize, ny: usize, hs: f64, x0: f64, y0: f64, values: Vec<f64>) -> Result<Self> {
        if values.len() != nx * ny {
            return Err(Error::InvalidGrid(format!("expected {} values, got {}", nx * ny, values.len())));
        }
        if !(hs > 0.0) {
            return Err(Error::InvalidGrid(format!("spacing must be positive, got {hs}")));
        }
        Ok(Grid { nx, ny, hs, x0, y0, values })
    }

    pub fn zeros(nx: usize, ny: usize, hs: f64, x0: f64, y0: f64) -> Self {
        Grid { nx, ny, hs, x0, y0, values: vec![0.0; nx * ny] }
    }

    pub fn from_fn(nx: usize, ny: usize, hs: f64, x0: f64, y0: f64, mut f: impl FnMut(Point) -> f64) -> Self {
        let mut values = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                values.push(f([x0 + i as f64 * hs, y0 + j as f64 * hs]));
            }
        }
        Grid { nx, ny, hs, x0, y0, values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn point(&self, i: usize, j: usize) -> Point {
        [self.x0 + i as f64 * self.hs, self.y0 + j as f64 * self.hs]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.nx + i]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.values[j * self.nx + i] = v;
    }

    pub fn column(&self, i: usize) -> Vec<f64> {
        (0..self.ny).map(|j| self.get(i, j)).collect()
    }

    /// `Σ hs²·|f|^q`.
    pub fn lq_norm_q(&self, q: f64) -> f64 {
        self.hs * self.hs * self.values.iter().map(|v| v.abs().powf(q)).sum::<f64>()
    }

    /// Forward-difference Dirichlet energy `Σ hs²·|∇_h f|²` over cell edges.
    pub fn gradient_energy(&self) -> f64 {
        let mut e = 0.0;
        for j in 0..self.ny {
            for i in 0..self.nx {
                let v = self.get(i, j);
                if i + 1 < self.nx {
                    e += (self.get(i + 1, j) - v).powi(2);
                }
                if j + 1 < self.ny {
                    e += (self.get(i, j + 1) - v).powi(2);
                }
            }
        }
        e
    }

    /// Discrete `p = 2, q = 4` quotient `(‖∇_h f‖² + ‖f‖²)/‖f‖₄²`.
    pub fn quotient(&self) -> Result<f64> {
        let d = self.lq_norm_q(4.0);
        if !(d > 0.0) {
            return Err(Error::ZeroDenominator);
        }
        Ok((self.gradient_energy() + self.lq_norm_q(2.0)) / d.sqrt())
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}
