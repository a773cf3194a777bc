//! The discrete energy quotient
//!
//! ```text
//! J̃[u] = (∫|∇u|^p + ∫|u|^p) / (∫|u|^q)^{p/q}
//! ```
//!
//! with piecewise-constant element gradients and lumped (vertex) quadrature
//! for every power of `u`. For `p = 2, q = 4` this is the quotient whose
//! constrained minimizers, rescaled, solve `−Δu + u = u³` with natural
//! boundary conditions.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float as _;

use crate::error::{Error, Result};
use crate::linalg::BandMatrix;
use crate::mesh::{Field, Mesh};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuotientParams {
    pub p: f64,
    pub q: f64,
    /// Spatial dimension, used only for the critical exponent.
    pub dim: u32,
}

impl QuotientParams {
    pub fn new(p: f64, q: f64, dim: u32) -> Result<Self> {
        let params = QuotientParams { p, q, dim };
        params.validate()?;
        Ok(params)
    }

    /// `p = 2, q = 4` in the plane.
    pub fn cubic() -> Self {
        QuotientParams { p: 2.0, q: 4.0, dim: 2 }
    }

    /// Sobolev critical exponent `p* = pn/(n−p)`, infinite for `p ≥ n`.
    pub fn critical_exponent(&self) -> f64 {
        let n = self.dim as f64;
        if self.p < n {
            self.p * n / (n - self.p)
        } else {
            f64::INFINITY
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p > 1.0 && self.p.is_finite()) {
            return Err(Error::InvalidSpec(format!("p must exceed 1, got {}", self.p)));
        }
        if !(self.q > self.p && self.q.is_finite()) {
            return Err(Error::InvalidSpec(format!("q must exceed p, got q = {}", self.q)));
        }
        if self.dim == 0 {
            return Err(Error::InvalidSpec("dimension must be positive".into()));
        }
        if self.q >= self.critical_exponent() {
            return Err(Error::InvalidSpec(format!(
                "q = {} is not subcritical (p* = {})",
                self.q,
                self.critical_exponent()
            )));
        }
        Ok(())
    }

    pub fn is_cubic(&self) -> bool {
        self.p == 2.0 && self.q == 4.0
    }
}

/// `Σ_v ω_v |u_v|^q`.
pub fn lq_norm_q(mesh: &Mesh, u: &[f64], q: f64) -> f64 {
    mesh.vertex_weights.iter().zip(u).map(|(w, v)| w * pow_abs(*v, q)).sum()
}

/// `Σ_T |T|·|∇u|_T^p + Σ_v ω_v |u_v|^p`.
pub fn wp_energy_p(mesh: &Mesh, u: &[f64], p: f64) -> f64 {
    gradient_energy(mesh, u, p) + lq_norm_q(mesh, u, p)
}

/// The gradient part `Σ_T |T|·|∇u|_T^p` alone.
pub fn gradient_energy(mesh: &Mesh, u: &[f64], p: f64) -> f64 {
    let mut e = 0.0;
    for (t, (area, grads)) in mesh.triangles.iter().zip(mesh.tri_area.iter().zip(&mesh.tri_grad)) {
        let g = element_gradient(t, grads, u);
        e += area * pow_abs((g[0] * g[0] + g[1] * g[1]).sqrt(), p);
    }
    for s in &mesh.segments {
        let len = mesh.vertices[s[1]][0] - mesh.vertices[s[0]][0];
        e += len * pow_abs((u[s[1]] - u[s[0]]) / len, p);
    }
    e
}

pub fn quotient(mesh: &Mesh, u: &[f64], params: &QuotientParams) -> Result<f64> {
    let l = lq_norm_q(mesh, u, params.q);
    if !(l > 0.0) {
        return Err(Error::ZeroDenominator);
    }
    Ok(wp_energy_p(mesh, u, params.p) / l.powf(params.p / params.q))
}

/// Derivative of [`quotient`] with respect to each vertex value (Euclidean
/// pairing). Entries at Dirichlet vertices are zero.
pub fn quotient_gradient(mesh: &Mesh, u: &[f64], params: &QuotientParams) -> Result<Field> {
    let (_, grad) = quotient_and_gradient(mesh, u, params)?;
    Ok(Field::new(grad))
}

pub(crate) fn quotient_and_gradient(mesh: &Mesh, u: &[f64], params: &QuotientParams) -> Result<(f64, Vec<f64>)> {
    let (p, q) = (params.p, params.q);
    let (l, mut dl) = lq_with_gradient(mesh, u, q);
    if !(l > 0.0) {
        return Err(Error::ZeroDenominator);
    }
    let (e, de) = energy_with_gradient(mesh, u, p);
    let scale = l.powf(-p / q);
    let j = e * scale;
    let coeff = (p / q) * j / l;
    for ((g, d), &dir) in dl.iter_mut().zip(&de).zip(&mesh.dirichlet) {
        *g = if dir { 0.0 } else { d * scale - coeff * *g };
    }
    Ok((j, dl))
}

pub(crate) fn lq_with_gradient(mesh: &Mesh, u: &[f64], q: f64) -> (f64, Vec<f64>) {
    let mut total = 0.0;
    let grad = mesh
        .vertex_weights
        .iter()
        .zip(u)
        .map(|(w, &v)| {
            let a = v.abs();
            let pw = pow_abs(a, q - 1.0);
            total += w * pw * a;
            q * w * pw * v.signum() * (a > 0.0) as u8 as f64
        })
        .collect();
    (total, grad)
}

pub(crate) fn energy_with_gradient(mesh: &Mesh, u: &[f64], p: f64) -> (f64, Vec<f64>) {
    let (mut e, mut grad) = lq_with_gradient(mesh, u, p);
    for (t, (area, grads)) in mesh.triangles.iter().zip(mesh.tri_area.iter().zip(&mesh.tri_grad)) {
        let g = element_gradient(t, grads, u);
        let norm = (g[0] * g[0] + g[1] * g[1]).sqrt();
        if norm == 0.0 {
            continue;
        }
        let np = pow_abs(norm, p - 2.0);
        e += area * np * norm * norm;
        let c = p * area * np;
        for a in 0..3 {
            grad[t[a]] += c * (g[0] * grads[a][0] + g[1] * grads[a][1]);
        }
    }
    for s in &mesh.segments {
        let len = mesh.vertices[s[1]][0] - mesh.vertices[s[0]][0];
        let d = (u[s[1]] - u[s[0]]) / len;
        if d == 0.0 {
            continue;
        }
        e += len * pow_abs(d, p);
        let c = p * pow_abs(d, p - 1.0) * d.signum();
        grad[s[1]] += c;
        grad[s[0]] -= c;
    }
    (e, grad)
}

/// `(A u)_v`: the stiffness pairing `Σ_T |T| ∇u·∇φ_v`.
pub fn apply_stiffness(mesh: &Mesh, u: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; u.len()];
    for (t, (area, grads)) in mesh.triangles.iter().zip(mesh.tri_area.iter().zip(&mesh.tri_grad)) {
        let g = element_gradient(t, grads, u);
        for a in 0..3 {
            out[t[a]] += area * (g[0] * grads[a][0] + g[1] * grads[a][1]);
        }
    }
    for s in &mesh.segments {
        let len = mesh.vertices[s[1]][0] - mesh.vertices[s[0]][0];
        let d = (u[s[1]] - u[s[0]]) / len;
        out[s[1]] += d;
        out[s[0]] -= d;
    }
    out
}

/// Stiffness matrix in band form, plus `diag` on the diagonal.
pub(crate) fn stiffness_band(mesh: &Mesh, diag: &[f64]) -> BandMatrix {
    let bw = mesh.bandwidth();
    let mut m = BandMatrix::zeros(mesh.vertex_count(), bw, bw);
    for (t, (area, grads)) in mesh.triangles.iter().zip(mesh.tri_area.iter().zip(&mesh.tri_grad)) {
        for a in 0..3 {
            for b in 0..3 {
                m.add(t[a], t[b], area * (grads[a][0] * grads[b][0] + grads[a][1] * grads[b][1]));
            }
        }
    }
    for s in &mesh.segments {
        let len = mesh.vertices[s[1]][0] - mesh.vertices[s[0]][0];
        let k = 1.0 / len;
        m.add(s[0], s[0], k);
        m.add(s[1], s[1], k);
        m.add(s[0], s[1], -k);
        m.add(s[1], s[0], -k);
    }
    for (i, d) in diag.iter().enumerate() {
        m.add(i, i, *d);
    }
    m
}

/// Nodal residual `(A u + M u − M u³)_v / ω_v` of `−Δu + u − u³ = 0`.
/// Dirichlet vertices are reported as zero.
pub fn pde_residual(mesh: &Mesh, u: &[f64]) -> Field {
    let au = apply_stiffness(mesh, u);
    Field::new(
        au.iter()
            .zip(u)
            .zip(&mesh.vertex_weights)
            .zip(&mesh.dirichlet)
            .map(|(((a, &v), w), &d)| if d { 0.0 } else { a / w + v - v * v * v })
            .collect(),
    )
}

#[inline]
fn element_gradient(t: &[usize; 3], grads: &[[f64; 2]; 3], u: &[f64]) -> [f64; 2] {
    let mut g = [0.0; 2];
    for a in 0..3 {
        g[0] += u[t[a]] * grads[a][0];
        g[1] += u[t[a]] * grads[a][1];
    }
    g
}

#[inline]
pub(crate) fn pow_abs(x: f64, s: f64) -> f64 {
    let a = x.abs();
    if s == 2.0 {
        a * a
    } else if s == 4.0 {
        let a2 = a * a;
        a2 * a2
    } else if s == 1.0 {
        a
    } else if a == 0.0 {
        if s == 0.0 { 1.0 } else { 0.0 }
    } else {
        a.powf(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{build_mesh, DomainSpec};

    fn unit_square(h: f64) -> Mesh {
        build_mesh(&DomainSpec::rectangle(1.0, 1.0, h)).unwrap()
    }

    fn center_hat(m: &Mesh) -> Vec<f64> {
        m.vertices.iter().map(|p| if *p == [0.5, 0.5] { 1.0 } else { 0.0 }).collect()
    }

    #[test]
    fn lq_norm_examples() {
        let m = unit_square(0.5);
        assert!((lq_norm_q(&m, &[1.0; 9], 4.0) - 1.0).abs() < 1e-15);
        assert!((lq_norm_q(&m, &[2.0; 9], 4.0) - 16.0).abs() < 1e-13);
        assert!((lq_norm_q(&m, &center_hat(&m), 2.0) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn energy_examples() {
        let m = unit_square(0.5);
        assert!((wp_energy_p(&m, &[1.0; 9], 2.0) - 1.0).abs() < 1e-15);
        assert_eq!(wp_energy_p(&m, &[0.0; 9], 2.0), 0.0);
        // u = x: gradient 1 everywhere, plus the lumped sum of x²
        let u: Vec<f64> = m.vertices.iter().map(|p| p[0]).collect();
        let oracle = 1.0 + m.vertices.iter().zip(&m.vertex_weights).map(|(p, w)| w * p[0] * p[0]).sum::<f64>();
        assert!((wp_energy_p(&m, &u, 2.0) - oracle).abs() < 1e-14);
    }

    #[test]
    fn center_hat_quotient_by_hand() {
        // hat on the 2×2-cell square: 6 of the 8 triangles (area 1/8) touch
        // the center; four have |∇φ|² = 4 and the two cut by the center's
        // off-diagonal have |∇φ|² = 8, so ∫|∇φ|² = (4·4 + 2·8)/8 = 4.
        // lumped: ∫φ² = ∫φ⁴ = ω_center = 1/4.  J = (4 + 1/4) / (1/4)^{1/2}.
        let m = unit_square(0.5);
        let hat = center_hat(&m);
        let expected = 8.5;
        let j = quotient(&m, &hat, &QuotientParams::cubic()).unwrap();
        assert!((j - expected).abs() < 1e-13, "{j}");
    }

    #[test]
    fn constants_have_unit_quotient() {
        let m = unit_square(0.25);
        for c in [1.0, -3.0, 0.01] {
            let u = vec![c; m.vertex_count()];
            assert!((quotient(&m, &u, &QuotientParams::cubic()).unwrap() - 1.0).abs() < 1e-12);
        }
        assert!(matches!(
            quotient(&m, &vec![0.0; m.vertex_count()], &QuotientParams::cubic()),
            Err(Error::ZeroDenominator)
        ));
        assert!(matches!(
            quotient_gradient(&m, &vec![0.0; m.vertex_count()], &QuotientParams::cubic()),
            Err(Error::ZeroDenominator)
        ));
    }

    #[test]
    fn gradient_is_orthogonal_to_the_field() {
        let m = unit_square(0.25);
        let u: Vec<f64> = m.vertices.iter().map(|p| 1.0 + 0.3 * p[0] * p[1]).collect();
        for params in [QuotientParams::cubic(), QuotientParams::new(3.0, 4.5, 2).unwrap()] {
            let g = quotient_gradient(&m, &u, &params).unwrap();
            let dot: f64 = g.iter().zip(&u).map(|(a, b)| a * b).sum();
            let scale: f64 = g.iter().map(|a| a.abs()).sum::<f64>();
            assert!(dot.abs() < 1e-12 * scale.max(1e-300));
        }
        let ones = vec![1.0; m.vertex_count()];
        let g = quotient_gradient(&m, &ones, &QuotientParams::cubic()).unwrap();
        let dot: f64 = g.iter().sum();
        assert!(dot.abs() < 1e-13);
    }

    #[test]
    fn residual_examples() {
        let m = unit_square(0.25);
        let n = m.vertex_count();
        assert_eq!(pde_residual(&m, &vec![0.0; n]).sup_norm(), 0.0);
        assert!(pde_residual(&m, &vec![1.0; n]).sup_norm() < 1e-13);
        let r = pde_residual(&m, &vec![2.0; n]);
        assert!(r.iter().all(|v| (v + 6.0).abs() < 1e-12));
    }

    #[test]
    fn band_stiffness_matches_matrix_free_apply() {
        for spec in [DomainSpec::rectangle(1.5, 1.0, 0.2), DomainSpec::new(crate::Shape::RightTriangle3060, 1.0, 0.1)] {
            let m = build_mesh(&spec).unwrap();
            let u: Vec<f64> = m.vertices.iter().map(|p| (3.0 * p[0]).sin() + p[1] * p[1]).collect();
            let band = stiffness_band(&m, &vec![0.0; m.vertex_count()]).mul_vec(&u);
            let free = apply_stiffness(&m, &u);
            for (a, b) in band.iter().zip(&free) {
                assert!((a - b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn parameter_ranges() {
        assert!(QuotientParams::new(1.0, 4.0, 2).is_err());
        assert!(QuotientParams::new(2.0, 2.0, 2).is_err());
        assert!(QuotientParams::new(1.5, 6.5, 2).is_err()); // p* = 6
        assert!(QuotientParams::new(1.5, 5.5, 2).is_ok());
        assert!(QuotientParams::new(2.0, 100.0, 2).is_ok());
        assert!(QuotientParams::new(2.0, 7.0, 3).is_err());
    }
}
