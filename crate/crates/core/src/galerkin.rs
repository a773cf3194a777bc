//! Three-mode Fourier reduction of `Δu − u + u³ = 0` for solutions that are
//! `l`-periodic in `y`, and the spectrum of the linearization at the plane
//! wall `√2·sech x`.
//!
//! The anzatz `u = U₀ + 2U₁ cos(2πy/l) − 2V₁ sin(2πy/l)` leads (after the
//! scaling used for the reduced system) to
//!
//! ```text
//! U₀'' = U₀ − 2U₀³ − 6(U₁² + V₁²)U₀
//! U₁'' = λ²U₁ − 6U₀²U₁ − 3(U₁² + V₁²)U₁
//! V₁'' = λ²V₁ − 6U₀²V₁ − 3(U₁² + V₁²)V₁,    λ² = 4π²/l² + 1,
//! ```
//!
//! a Hamiltonian system with the extra integral `K = p₁V₁ − q₁U₁`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float as _;

use crate::error::{Error, Result};
use crate::grid::{Grid, Window};
use crate::linalg::{tridiagonal_eigenvalue, tridiagonal_eigenvector};
use crate::ode::rk4_step;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GalerkinState {
    pub u0: f64,
    pub p0: f64,
    pub u1: f64,
    pub p1: f64,
    pub v1: f64,
    pub q1: f64,
}

impl GalerkinState {
    pub fn to_array(self) -> [f64; 6] {
        [self.u0, self.p0, self.u1, self.p1, self.v1, self.q1]
    }

    pub fn from_array(a: [f64; 6]) -> Self {
        GalerkinState { u0: a[0], p0: a[1], u1: a[2], p1: a[3], v1: a[4], q1: a[5] }
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|x| x.is_finite())
    }

    pub fn norm(&self) -> f64 {
        self.to_array().iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GalerkinParams {
    /// Period in `y`.
    pub l: f64,
}

impl GalerkinParams {
    pub fn new(l: f64) -> Result<Self> {
        if !(l > 0.0 && l.is_finite()) {
            return Err(Error::InvalidSpec(format!("period l must be positive, got {l}")));
        }
        Ok(GalerkinParams { l })
    }

    /// `λ² = 4π²/l² + 1`.
    pub fn lambda_sq(&self) -> f64 {
        4.0 * PI * PI / (self.l * self.l) + 1.0
    }

    pub fn lambda(&self) -> f64 {
        self.lambda_sq().sqrt()
    }

    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.l
    }
}

/// Derivative of the state with respect to `x`.
pub fn vector_field(s: &GalerkinState, params: &GalerkinParams) -> GalerkinState {
    let l2 = params.lambda_sq();
    let w = s.u1 * s.u1 + s.v1 * s.v1;
    let u02 = s.u0 * s.u0;
    GalerkinState {
        u0: s.p0,
        p0: s.u0 - 2.0 * s.u0 * u02 - 6.0 * w * s.u0,
        u1: s.p1,
        p1: l2 * s.u1 - 6.0 * s.u1 * u02 - 3.0 * w * s.u1,
        v1: s.q1,
        q1: l2 * s.v1 - 6.0 * s.v1 * u02 - 3.0 * w * s.v1,
    }
}

pub fn hamiltonian(s: &GalerkinState, params: &GalerkinParams) -> f64 {
    let w = s.u1 * s.u1 + s.v1 * s.v1;
    let u02 = s.u0 * s.u0;
    0.5 * (s.p0 * s.p0 + s.p1 * s.p1 + s.q1 * s.q1) - 0.5 * (u02 + params.lambda_sq() * w)
        + 0.5 * u02 * u02
        + 3.0 * u02 * w
        + 0.75 * w * w
}

#[allow(non_snake_case)]
pub fn integral_K(s: &GalerkinState) -> f64 {
    s.p1 * s.v1 - s.q1 * s.u1
}

/// Rates `(1, λ, λ)` of the saddle at the origin, read off the linear part
/// of the vector field; the eigenvalues are their `±` pairs.
pub fn linear_rates(params: &GalerkinParams) -> [f64; 3] {
    let eps = 1e-7;
    let probe = |i: usize| {
        let mut a = [0.0; 6];
        a[2 * i] = eps;
        let d = vector_field(&GalerkinState::from_array(a), params).to_array();
        (d[2 * i + 1] / eps).sqrt()
    };
    [probe(0), probe(1), probe(2)]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub x: f64,
    pub state: GalerkinState,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
    /// `max |H − H(s₀)|` along the samples.
    pub h_drift: f64,
    /// `max |K − K(s₀)|` along the samples.
    pub k_drift: f64,
}

impl Trajectory {
    /// Linear interpolation between samples; zero outside the span.
    pub fn state_at(&self, x: f64) -> GalerkinState {
        let s = &self.samples;
        if s.is_empty() || x < s[0].x || x > s[s.len() - 1].x {
            return GalerkinState::default();
        }
        let i = s.partition_point(|p| p.x <= x).clamp(1, s.len() - 1);
        let (a, b) = (&s[i - 1], &s[i]);
        let t = if b.x > a.x { (x - a.x) / (b.x - a.x) } else { 0.0 };
        let (ea, eb) = (a.state.to_array(), b.state.to_array());
        GalerkinState::from_array(core::array::from_fn(|k| ea[k] + t * (eb[k] - ea[k])))
    }
}

/// States beyond this norm count as diverged.
const DIVERGENCE_NORM: f64 = 1e100;

/// Fixed-step RK4 from `x_span.0` to `x_span.1`, monitoring `H` and `K`.
pub fn integrate(s0: &GalerkinState, params: &GalerkinParams, x_span: (f64, f64), step: f64) -> Result<Trajectory> {
    if !(step > 0.0) {
        return Err(Error::InvalidSpec(format!("step must be positive, got {step}")));
    }
    let (x0, x1) = x_span;
    let steps = ((x1 - x0).abs() / step).round() as usize;
    let h = if steps == 0 { 0.0 } else { (x1 - x0) / steps as f64 };
    let f = |_x: f64, y: &[f64; 6]| vector_field(&GalerkinState::from_array(*y), params).to_array();
    let (h0, k0) = (hamiltonian(s0, params), integral_K(s0));
    let mut traj = Trajectory { samples: vec![TrajectorySample { x: x0, state: *s0 }], h_drift: 0.0, k_drift: 0.0 };
    let mut y = s0.to_array();
    for i in 1..=steps {
        let x = x0 + (i - 1) as f64 * h;
        y = rk4_step(&f, x, &y, h);
        let state = GalerkinState::from_array(y);
        if !state.is_finite() || state.norm() > DIVERGENCE_NORM {
            return Err(Error::Diverged(alloc::boxed::Box::new(traj)));
        }
        traj.h_drift = traj.h_drift.max((hamiltonian(&state, params) - h0).abs());
        traj.k_drift = traj.k_drift.max((integral_K(&state) - k0).abs());
        traj.samples.push(TrajectorySample { x: x0 + i as f64 * h, state });
    }
    Ok(traj)
}

/// Homoclinic loop `U₀ = sech x` in the plane `U₁ = V₁ = 0`.
pub fn planar_homoclinic(x: f64) -> GalerkinState {
    let s = 1.0 / x.cosh();
    GalerkinState { u0: s, p0: -s * x.tanh(), ..Default::default() }
}

/// `r(x) = −2λ/(e^{λx} + (3/2)e^{−λx})` and its first derivative.
pub fn family_radius(x: f64, params: &GalerkinParams) -> (f64, f64) {
    let l = params.lambda();
    let (ep, em) = ((l * x).exp(), (-l * x).exp());
    let d = ep + 1.5 * em;
    let r = -2.0 * l / d;
    let dr = 2.0 * l * l * (ep - 1.5 * em) / (d * d);
    (r, dr)
}

/// Member `θ` of the homoclinic family in the plane `U₀ = p₀ = 0`.
pub fn family_homoclinic(x: f64, theta: f64, params: &GalerkinParams) -> GalerkinState {
    let (r, dr) = family_radius(x, params);
    let (s, c) = theta.sin_cos();
    GalerkinState { u0: 0.0, p0: 0.0, u1: r * c, p1: dr * c, v1: r * s, q1: dr * s }
}

/// Second derivative of the family radius, for exact residual checks.
fn family_radius_dd(x: f64, params: &GalerkinParams) -> f64 {
    let l = params.lambda();
    let (ep, em) = ((l * x).exp(), (-l * x).exp());
    let d = ep + 1.5 * em;
    let n = ep - 1.5 * em;
    // d/dx [2λ² n / d²] with n' = λd, d' = λn
    2.0 * l * l * (l * d * d * d - 2.0 * n * d * l * n) / (d * d * d * d)
}

/// Sup over `xs` of `|ds/dx − F(s)|` for a closed-form orbit, using the
/// analytic derivatives.
pub fn closed_form_residual(orbit: Orbit, params: &GalerkinParams, xs: impl Iterator<Item = f64>) -> f64 {
    let mut worst = 0.0f64;
    for x in xs {
        let (s, ds) = match orbit {
            Orbit::Planar => {
                let s = planar_homoclinic(x);
                let (sech, tanh) = (1.0 / x.cosh(), x.tanh());
                let dd = sech * (2.0 * tanh * tanh - 1.0);
                (s, GalerkinState { u0: s.p0, p0: dd, ..Default::default() })
            }
            Orbit::Family { theta } => {
                let s = family_homoclinic(x, theta, params);
                let (_, dr) = family_radius(x, params);
                let ddr = family_radius_dd(x, params);
                let (sn, c) = theta.sin_cos();
                (s, GalerkinState { u0: 0.0, p0: 0.0, u1: dr * c, p1: ddr * c, v1: dr * sn, q1: ddr * sn })
            }
        };
        let f = vector_field(&s, params).to_array();
        for (a, b) in f.iter().zip(ds.to_array()) {
            worst = worst.max((a - b).abs());
        }
    }
    worst
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Orbit {
    Planar,
    Family { theta: f64 },
}

/// Where the mode amplitudes of a reconstructed breather come from.
#[derive(Debug, Clone, Copy)]
pub enum BreatherSource<'a> {
    Zero,
    Orbit(Orbit),
    Trajectory(&'a Trajectory),
}

impl BreatherSource<'_> {
    pub fn state_at(&self, x: f64, params: &GalerkinParams) -> GalerkinState {
        match self {
            BreatherSource::Zero => GalerkinState::default(),
            BreatherSource::Orbit(Orbit::Planar) => planar_homoclinic(x),
            BreatherSource::Orbit(Orbit::Family { theta }) => family_homoclinic(x, *theta, params),
            BreatherSource::Trajectory(t) => t.state_at(x),
        }
    }
}

/// `U₀(x) + 2U₁(x)cos(2πy/l) − 2V₁(x)sin(2πy/l)`.
pub fn reconstruct_breather(source: &BreatherSource<'_>, params: &GalerkinParams, x: f64, y: f64) -> f64 {
    let s = source.state_at(x, params);
    let (sn, c) = (params.wavenumber() * y).sin_cos();
    s.u0 + 2.0 * s.u1 * c - 2.0 * s.v1 * sn
}

/// Samples of the reconstructed field on a window.
pub fn sample_breather(source: &BreatherSource<'_>, params: &GalerkinParams, window: &Window, hs: f64) -> Result<Grid> {
    if !(hs > 0.0) {
        return Err(Error::InvalidGrid(format!("sample spacing must be positive, got {hs}")));
    }
    let (nx, ny) = window.counts(hs);
    Ok(Grid::from_fn(nx, ny, hs, window.x0, window.y0, |p| reconstruct_breather(source, params, p[0], p[1])))
}

/// Sup and discrete L² norms of the five-point residual of
/// `Δu − u + u³` on the reconstructed field. Nonzero in general: the
/// anzatz is only an approximation.
pub fn anzatz_residual(source: &BreatherSource<'_>, params: &GalerkinParams, window: &Window, hs: f64) -> Result<(f64, f64)> {
    let g = sample_breather(source, params, window, hs)?;
    crate::tiling::tiled_residual(&g)
}

#[derive(Debug, Clone, PartialEq)]
pub struct WallSpectrum {
    /// Smallest eigenvalue on even functions.
    pub eigenvalue: f64,
    /// The next eigenvalue (bottom of the discretized continuous spectrum).
    pub next: f64,
    /// Grid points `x_i = i·h`, `i = 0 … N−1`, with `x_N = L` excluded.
    pub x: Vec<f64>,
    /// Eigenfunction samples, unit L² norm over the whole line, positive.
    pub phi: Vec<f64>,
}

/// Even eigenfunctions of `−φ'' + (1 − 6 sech²x)φ` on `[0, L]` with
/// `φ'(0) = 0` and `φ(L) = 0`.
pub fn wall_linearization_eigen(half_length: f64, h: f64) -> Result<WallSpectrum> {
    if !(half_length >= 10.0 && h > 0.0 && h <= 0.01) {
        return Err(Error::Precondition(format!("need L ≥ 10 and 0 < h ≤ 0.01, got L={half_length}, h={h}")));
    }
    let n = (half_length / h).round() as usize;
    let h = half_length / n as f64;
    let h2 = h * h;
    let x: Vec<f64> = (0..n).map(|i| i as f64 * h).collect();
    let diag: Vec<f64> = x.iter().map(|&x| 2.0 / h2 + 1.0 - 6.0 / x.cosh().powi(2)).collect();
    // the mirrored row at 0 is (2, −2)/h²; scaling φ₀ by √2 makes it symmetric
    let mut off = vec![-1.0 / h2; n - 1];
    off[0] = -(2f64).sqrt() / h2;
    let eigenvalue = tridiagonal_eigenvalue(&diag, &off, 0, 1e-10);
    let next = tridiagonal_eigenvalue(&diag, &off, 1, 1e-10);
    let mut phi = tridiagonal_eigenvector(&diag, &off, eigenvalue)?;
    phi[0] *= (2f64).sqrt();
    // whole-line L² norm of the even extension
    let norm = (2.0 * h * (0.5 * phi[0] * phi[0] + phi[1..].iter().map(|v| v * v).sum::<f64>())).sqrt();
    let sign = if phi[0] < 0.0 { -1.0 } else { 1.0 };
    phi.iter_mut().for_each(|v| *v *= sign / norm);
    Ok(WallSpectrum { eigenvalue, next, x, phi })
}

impl WallSpectrum {
    /// Normalized L² overlap of the eigenfunction with `sech²x`.
    pub fn overlap_with(&self, f: impl Fn(f64) -> f64) -> f64 {
        let w = |i: usize| if i == 0 { 0.5 } else { 1.0 };
        let (mut fg, mut gg, mut ff) = (0.0, 0.0, 0.0);
        for (i, (&x, &p)) in self.x.iter().zip(&self.phi).enumerate() {
            let g = f(x);
            fg += w(i) * p * g;
            gg += w(i) * g * g;
            ff += w(i) * p * p;
        }
        fg / (gg * ff).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_pi() -> GalerkinParams {
        GalerkinParams::new(2.0 * PI).unwrap()
    }

    #[test]
    fn vector_field_examples() {
        let p = two_pi();
        assert_eq!(vector_field(&GalerkinState::default(), &p), GalerkinState::default());
        let s = GalerkinState { u0: 1.0, ..Default::default() };
        let d = vector_field(&s, &p);
        assert_eq!(d.p0, -1.0);
        assert_eq!((d.u0, d.u1, d.p1, d.v1, d.q1), (0.0, 0.0, 0.0, 0.0, 0.0));
        let r = linear_rates(&p);
        assert!((r[0] - 1.0).abs() < 1e-12);
        assert!((r[1] - 2f64.sqrt()).abs() < 1e-12 && (r[2] - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn integrals_examples() {
        let p = two_pi();
        let z = GalerkinState::default();
        assert_eq!((hamiltonian(&z, &p), integral_K(&z)), (0.0, 0.0));
        assert_eq!(integral_K(&GalerkinState { u1: 1.0, q1: 2.0, ..Default::default() }), -2.0);
        assert_eq!(hamiltonian(&GalerkinState { u0: 1.0, ..Default::default() }, &p), 0.0);
    }

    #[test]
    fn vector_field_is_hamiltonian() {
        let p = GalerkinParams::new(3.7).unwrap();
        let s = GalerkinState { u0: 0.3, p0: -0.2, u1: 0.7, p1: 0.1, v1: -0.4, q1: 0.5 };
        let d = vector_field(&s, &p).to_array();
        let a = s.to_array();
        let eps = 1e-6;
        for k in 0..6 {
            let mut hi = a;
            let mut lo = a;
            hi[k] += eps;
            lo[k] -= eps;
            let dh = (hamiltonian(&GalerkinState::from_array(hi), &p) - hamiltonian(&GalerkinState::from_array(lo), &p)) / (2.0 * eps);
            // (U, p) pairs: U' = ∂H/∂p, p' = −∂H/∂U
            let expected = if k % 2 == 0 { -d[k + 1] } else { d[k - 1] };
            assert!((dh - expected).abs() < 1e-8, "k={k}: {dh} vs {expected}");
        }
    }

    #[test]
    fn homoclinics_solve_the_system() {
        let p = two_pi();
        let xs = || (0..=10_000).map(|i| -10.0 + 20.0 * i as f64 / 10_000.0);
        assert!(closed_form_residual(Orbit::Planar, &p, xs()) <= 1e-10);
        for theta in [0.0, 0.4, PI / 2.0, 2.5] {
            assert!(closed_form_residual(Orbit::Family { theta }, &p, xs()) <= 1e-10);
        }
        let s = planar_homoclinic(0.0);
        assert_eq!((s.u0, s.p0), (1.0, 0.0));
        let f = family_homoclinic(0.0, 0.0, &p);
        assert!((f.u1 + 0.8 * 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(f.v1, 0.0);
        let g = family_homoclinic(0.3, PI / 2.0, &p);
        assert!(g.u1.abs() < 1e-15 && (g.v1 - family_radius(0.3, &p).0).abs() < 1e-15);
    }

    #[test]
    fn integrals_vanish_on_the_homoclinics() {
        let p = GalerkinParams::new(5.0).unwrap();
        for x in [-3.0, -0.5, 0.0, 1.2, 4.0] {
            let s = planar_homoclinic(x);
            assert!(hamiltonian(&s, &p).abs() < 1e-14 && integral_K(&s) == 0.0);
            for theta in [0.0, 1.0, 2.0, 3.0] {
                let f = family_homoclinic(x, theta, &p);
                assert!(hamiltonian(&f, &p).abs() < 1e-13, "{}", hamiltonian(&f, &p));
                assert!(integral_K(&f).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn rk4_conserves_integrals() {
        let p = two_pi();
        for s0 in [
            planar_homoclinic(-10.0),
            family_homoclinic(-10.0, 0.7, &p),
            GalerkinState { u0: 0.5, ..Default::default() },
            GalerkinState { u0: 0.4, p0: 0.1, u1: 0.05, q1: 0.03, ..Default::default() },
        ] {
            let t = integrate(&s0, &p, (-10.0, 10.0), 1e-3).unwrap();
            assert!(t.h_drift <= 1e-8 && t.k_drift <= 1e-8, "{} {}", t.h_drift, t.k_drift);
        }
        let z = integrate(&GalerkinState::default(), &p, (0.0, 1.0), 1e-2).unwrap();
        assert!(z.samples.iter().all(|s| s.state == GalerkinState::default()));
        assert_eq!((z.h_drift, z.k_drift), (0.0, 0.0));
    }

    #[test]
    fn huge_states_diverge() {
        let p = two_pi();
        let s0 = GalerkinState { u0: 1e4, p0: -3e4, u1: 2e4, p1: 1e4, v1: -1e4, q1: 5e3 };
        assert!(matches!(integrate(&s0, &p, (0.0, 10.0), 1e-3), Err(Error::Diverged(_))));
    }

    #[test]
    fn breather_reconstruction() {
        let p = two_pi();
        let planar = BreatherSource::Orbit(Orbit::Planar);
        assert_eq!(reconstruct_breather(&planar, &p, 0.7, 0.0), reconstruct_breather(&planar, &p, 0.7, 1.9));
        let fam = BreatherSource::Orbit(Orbit::Family { theta: 0.0 });
        assert!((reconstruct_breather(&fam, &p, 0.0, 0.0) + 1.6 * 2f64.sqrt()).abs() < 1e-15);
        let fam = BreatherSource::Orbit(Orbit::Family { theta: 0.9 });
        for (x, y) in [(0.3, 0.25), (-1.0, 2.0), (2.0, 5.5)] {
            let a = reconstruct_breather(&fam, &p, x, y);
            let b = reconstruct_breather(&fam, &p, x, y + p.l);
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn anzatz_residual_examples() {
        let p = two_pi();
        let w = Window::new(-5.0, 0.0, 5.0, 2.0 * PI);
        assert_eq!(anzatz_residual(&BreatherSource::Zero, &p, &w, 0.1).unwrap(), (0.0, 0.0));
        let fam = BreatherSource::Orbit(Orbit::Family { theta: 0.0 });
        let (a, _) = anzatz_residual(&fam, &p, &w, 0.02).unwrap();
        let (b, _) = anzatz_residual(&fam, &p, &w, 0.01).unwrap();
        assert!(a > 0.1);
        assert!((a - b).abs() < 0.1 * b, "{a} {b}");
    }

    #[test]
    fn wall_spectrum() {
        let s = wall_linearization_eigen(20.0, 0.005).unwrap();
        assert!((s.eigenvalue + 3.0).abs() < 1e-3, "{}", s.eigenvalue);
        assert!(s.overlap_with(|x| 1.0 / x.cosh().powi(2)) >= 0.9999);
        assert!(s.next >= 0.99, "{}", s.next);
        assert!(wall_linearization_eigen(5.0, 0.005).is_err());
    }
}
