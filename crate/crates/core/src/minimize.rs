//! Minimization of the energy quotient on the sphere `‖u‖_{L_q} = 1`.
//!
//! Stage 1 is a preconditioned projected gradient method: the step direction
//! is the lumped-L² Riesz representative of `∇J̃`, step lengths come from the
//! Barzilai–Borwein formula and are backtracked until `J̃` does not increase.
//! Because `J̃` is homogeneous of degree zero, projecting onto the sphere is a
//! rescaling and never changes the objective. Region caps enter as a
//! quadratic penalty on the mass fraction, escalated ×10 per phase.
//!
//! Stage 2 (only `p = 2, q = 4` with every cap inactive) rescales
//! `v = √λ·u` and runs damped Newton on `−Δv + v − v³ = 0`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float as _;

use crate::energy::{lq_norm_q, lq_with_gradient, pde_residual, quotient, quotient_and_gradient, stiffness_band, QuotientParams};
use crate::error::{Error, Result};
use crate::mesh::{build_mesh, DomainSpec, Field, Mesh, Point, Region, RegionCap};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SeedLocation {
    Corner(usize),
    EdgeMidpoint(usize),
    Centroid,
    Explicit(Point),
}

/// Gaussian starting bump; the local minimizer found depends on where it sits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeedSpec {
    pub location: SeedLocation,
    pub width: f64,
}

impl SeedSpec {
    pub fn new(location: SeedLocation) -> Self {
        SeedSpec { location, width: 1.0 }
    }

    pub fn corner(vertex: usize) -> Self {
        Self::new(SeedLocation::Corner(vertex))
    }

    pub fn edge_midpoint(edge: usize) -> Self {
        Self::new(SeedLocation::EdgeMidpoint(edge))
    }

    pub fn centroid() -> Self {
        Self::new(SeedLocation::Centroid)
    }

    pub fn point(&self, mesh: &Mesh) -> Result<Point> {
        let c = mesh.corners();
        let n = c.len();
        Ok(match self.location {
            SeedLocation::Corner(i) if i < n => c[i],
            SeedLocation::EdgeMidpoint(e) if e < mesh.spec.shape.edge_count() && n > 2 => {
                let (a, b) = (c[e], c[(e + 1) % n]);
                [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])]
            }
            SeedLocation::Centroid => {
                let s = c.iter().fold([0.0, 0.0], |acc, p| [acc[0] + p[0], acc[1] + p[1]]);
                [s[0] / n as f64, s[1] / n as f64]
            }
            SeedLocation::Explicit(p) => p,
            other => return Err(Error::InvalidSpec(format!("seed {other:?} does not exist on this domain"))),
        })
    }
}

/// `exp(−|x − x₀|²/w²)` at the vertices, Dirichlet vertices zeroed,
/// normalized to unit `L_q` norm.
pub fn seed_field(mesh: &Mesh, seed: &SeedSpec, q: f64) -> Result<Field> {
    if !(seed.width > 0.0) {
        return Err(Error::InvalidSpec(format!("seed width must be positive, got {}", seed.width)));
    }
    let x0 = seed.point(mesh)?;
    let w2 = seed.width * seed.width;
    let mut u = Field::from_fn(mesh, |p| (-((p[0] - x0[0]).powi(2) + (p[1] - x0[1]).powi(2)) / w2).exp());
    u.apply_dirichlet(mesh);
    let mass = lq_norm_q(mesh, &u, q);
    if !(mass > 0.0) || !mass.is_normal() {
        return Err(Error::DegenerateSeed);
    }
    Ok(u.scaled(mass.powf(-1.0 / q)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceSet {
    /// Stationarity: `grad_sup ≤ grad·λ`.
    pub grad: f64,
    /// Stage-1 acceptance for `p ≠ 2` or active caps: `grad_sup ≤ loose_grad·λ`.
    pub loose_grad: f64,
    /// Stage 1 hands over to Newton once `grad_sup ≤ handoff·λ`.
    pub handoff: f64,
    /// Newton: `sup|residual| ≤ newton·max|v|`.
    pub newton: f64,
    /// Penalty phases stop once every cap is violated by at most this much.
    pub cap_violation: f64,
    pub max_iterations: usize,
    pub max_newton_steps: usize,
}

impl Default for ToleranceSet {
    fn default() -> Self {
        ToleranceSet {
            grad: 1e-7,
            loose_grad: 1e-5,
            handoff: 1e-4,
            newton: 1e-9,
            cap_violation: 1e-10,
            max_iterations: 100_000,
            max_newton_steps: 50,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintReport {
    pub region: Region,
    /// Fraction of `∫|u|^q` inside the region at the returned iterate.
    pub value: f64,
    pub cap: f64,
    pub active: bool,
}

#[derive(Debug, Clone)]
pub struct MinimizeResult {
    /// Minimizer normalized to `‖u‖_{L_q} = 1`.
    pub u: Field,
    /// Attained minimum of the quotient (the Lagrange multiplier).
    pub lambda: f64,
    /// Stage-1 iterations, summed over penalty phases.
    pub iterations: usize,
    pub newton_steps: usize,
    /// Sup norm of the lumped-L² gradient at `u`: of the quotient, or of
    /// the Lagrangian `J̃ + Σ ν·fraction` when a cap is active.
    pub grad_sup: f64,
    /// Sup residual of the rescaled solution; `None` when Newton did not run.
    pub newton_residual_sup: Option<f64>,
    pub constraints: Vec<ConstraintReport>,
    /// Objective (quotient plus penalty) at every accepted stage-1 iterate.
    pub objective_history: Vec<f64>,
}

impl MinimizeResult {
    pub fn converged(&self, params: &QuotientParams, tol: &ToleranceSet) -> bool {
        let any_active = self.constraints.iter().any(|c| c.active);
        let bound = if params.is_cubic() && !any_active { tol.grad } else { tol.loose_grad };
        self.grad_sup <= bound * self.lambda
    }
}

/// Lumped-L² representative of a Euclidean gradient, zero on Dirichlet vertices.
fn riesz(mesh: &Mesh, g: &[f64]) -> Vec<f64> {
    g.iter()
        .zip(&mesh.vertex_weights)
        .zip(&mesh.dirichlet)
        .map(|((g, w), &d)| if d { 0.0 } else { g / w })
        .collect()
}

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn normalize(mesh: &Mesh, u: &mut [f64], q: f64) -> Result<()> {
    let l = lq_norm_q(mesh, u, q);
    if !(l > 0.0) || !l.is_finite() {
        return Err(Error::ZeroDenominator);
    }
    let s = l.powf(-1.0 / q);
    u.iter_mut().for_each(|x| *x *= s);
    Ok(())
}

struct CapSet {
    members: Vec<Vec<usize>>,
    caps: Vec<f64>,
}

impl CapSet {
    fn new(mesh: &Mesh, caps: &[RegionCap]) -> Self {
        let corners = mesh.corners();
        let members = caps
            .iter()
            .map(|c| mesh.vertices_within(corners[c.region.vertex()], c.region.radius(mesh.spec.scale)).collect())
            .collect();
        CapSet { members, caps: caps.iter().map(|c| c.cap).collect() }
    }

    fn fractions(&self, mesh: &Mesh, u: &[f64], q: f64) -> Vec<f64> {
        let total = lq_norm_q(mesh, u, q);
        self.members
            .iter()
            .map(|m| m.iter().map(|&v| mesh.vertex_weights[v] * crate::energy::pow_abs(u[v], q)).sum::<f64>() / total)
            .collect()
    }

    /// Augmented Lagrangian term `Σ (max(0, ν + μ(f − cap))² − ν²)/(2μ)`
    /// on mass fractions `f`; adds its gradient into `grad`. With `mu = 0`
    /// only the linear multiplier term `Σ ν f` is used.
    fn penalty(&self, mesh: &Mesh, u: &[f64], q: f64, mu: f64, nu: &[f64], grad: Option<&mut [f64]>) -> f64 {
        if self.caps.is_empty() {
            return 0.0;
        }
        let (total, dtotal) = lq_with_gradient(mesh, u, q);
        let mut value = 0.0;
        let mut grad = grad;
        for ((m, &cap), &nu) in self.members.iter().zip(&self.caps).zip(nu) {
            let inside: f64 = m.iter().map(|&v| mesh.vertex_weights[v] * crate::energy::pow_abs(u[v], q)).sum();
            let f = inside / total;
            let force = if mu > 0.0 {
                let t = (nu + mu * (f - cap)).max(0.0);
                value += (t * t - nu * nu) / (2.0 * mu);
                t
            } else {
                value += nu * (f - cap);
                nu
            };
            if force == 0.0 {
                continue;
            }
            if let Some(g) = grad.as_deref_mut() {
                // d f = (d inside − f d total) / total
                let c = force / total;
                for (gi, dt) in g.iter_mut().zip(&dtotal) {
                    *gi -= c * f * dt;
                }
                for &v in m {
                    if !mesh.dirichlet[v] {
                        g[v] += c * dtotal[v];
                    }
                }
            }
        }
        value
    }
}

struct Descent {
    u: Vec<f64>,
    iterations: usize,
}

/// Projected BB gradient on the penalized quotient until
/// `grad_sup ≤ target` or `budget` iterations.
fn descend(
    mesh: &Mesh,
    params: &QuotientParams,
    caps: &CapSet,
    mu: f64,
    nu: &[f64],
    mut u: Vec<f64>,
    target_rel: f64,
    budget: usize,
    history: &mut Vec<f64>,
) -> Result<Descent> {
    let q = params.q;
    let eval = |u: &[f64]| -> Result<(f64, Vec<f64>)> {
        let (j, mut g) = quotient_and_gradient(mesh, u, params)?;
        let pen = caps.penalty(mesh, u, q, mu, nu, Some(&mut g));
        Ok((j + pen, g))
    };
    normalize(mesh, &mut u, q)?;
    let (mut phi, mut g) = eval(&u)?;
    let mut r = riesz(mesh, &g);
    let mut gs = sup(&r);
    history.push(phi);
    let umax = sup(&u);
    let mut alpha = if gs > 0.0 { 0.1 * umax / gs } else { 1.0 };
    let mut iterations = 0;
    let mut trial = vec![0.0; u.len()];
    while iterations < budget {
        if gs <= target_rel * phi {
            break;
        }
        iterations += 1;
        let slope: f64 = g.iter().zip(&r).map(|(a, b)| a * b).sum();
        let mut accepted = None;
        let mut step = alpha;
        for _ in 0..60 {
            for ((t, x), d) in trial.iter_mut().zip(&u).zip(&r) {
                *t = x - step * d;
            }
            if normalize(mesh, &mut trial, q).is_err() {
                step *= 0.5;
                continue;
            }
            let (phi_t, g_t) = eval(&trial)?;
            let predicted = step * slope;
            let armijo = phi_t <= phi - 1e-4 * predicted;
            let flat = phi_t <= phi && predicted <= 1e-13 * phi.abs();
            if armijo || flat {
                accepted = Some((phi_t, g_t, step));
                break;
            }
            step *= 0.5;
        }
        let Some((phi_t, g_t, step)) = accepted else {
            // no decrease representable: stationary to working precision
            break;
        };
        let r_t = riesz(mesh, &g_t);
        // BB1 in the lumped inner product; s = u_t − u, y = g_t − g
        let mut ss = 0.0;
        let mut sy = 0.0;
        for i in 0..u.len() {
            let s = trial[i] - u[i];
            ss += mesh.vertex_weights[i] * s * s;
            sy += s * (g_t[i] - g[i]);
        }
        alpha = if sy > 0.0 && ss > 0.0 { (ss / sy).clamp(1e-3 * step, 1e6 * step.max(1e-12)) } else { 2.0 * step };
        core::mem::swap(&mut u, &mut trial);
        phi = phi_t;
        g = g_t;
        r = r_t;
        gs = sup(&r);
        history.push(phi);
    }
    Ok(Descent { u, iterations })
}

/// Damped Newton on `A v + M v − M v³ = 0`. Returns the iterate, the number
/// of steps, and the final sup residual.
fn newton_polish(mesh: &Mesh, mut v: Vec<f64>, tol: &ToleranceSet) -> Result<(Vec<f64>, usize, f64, bool)> {
    let res_sup = |v: &[f64]| pde_residual(mesh, v).sup_norm();
    let mut res = res_sup(&v);
    let mut steps = 0;
    while steps < tol.max_newton_steps {
        if res <= tol.newton * sup(&v) {
            return Ok((v, steps, res, true));
        }
        steps += 1;
        let diag: Vec<f64> =
            v.iter().zip(&mesh.vertex_weights).map(|(x, w)| w * (1.0 - 3.0 * x * x)).collect();
        let mut jac = stiffness_band(mesh, &diag);
        let mut rhs: Vec<f64> = pde_residual(mesh, &v)
            .iter()
            .zip(&mesh.vertex_weights)
            .map(|(r, w)| -r * w)
            .collect();
        for (i, &d) in mesh.dirichlet.iter().enumerate() {
            if d {
                jac.set_identity_row(i);
                rhs[i] = 0.0;
            }
        }
        let lu = jac.factor()?;
        lu.solve_in_place(&mut rhs);
        let mut t = 1.0;
        let mut improved = false;
        for _ in 0..30 {
            let cand: Vec<f64> = v.iter().zip(&rhs).map(|(x, d)| x + t * d).collect();
            let r = res_sup(&cand);
            if r.is_finite() && r < (1.0 - 1e-4 * t) * res {
                v = cand;
                res = r;
                improved = true;
                break;
            }
            t *= 0.5;
        }
        if !improved {
            break;
        }
    }
    let ok = res <= tol.newton * sup(&v);
    Ok((v, steps, res, ok))
}

/// Constrained minimization of the quotient from a seeded start.
pub fn minimize_quotient(
    mesh: &Mesh,
    params: &QuotientParams,
    seed: &SeedSpec,
    caps: &[RegionCap],
    tol: &ToleranceSet,
) -> Result<MinimizeResult> {
    params.validate()?;
    let u0 = seed_field(mesh, seed, params.q)?.into_values();
    minimize_from(mesh, params, u0, caps, tol)
}

/// [`minimize_quotient`] from an explicit starting field.
pub fn minimize_from(
    mesh: &Mesh,
    params: &QuotientParams,
    mut u: Vec<f64>,
    caps: &[RegionCap],
    tol: &ToleranceSet,
) -> Result<MinimizeResult> {
    params.validate()?;
    if u.len() != mesh.vertex_count() {
        return Err(Error::InvalidSpec(format!(
            "start field has {} values, mesh has {} vertices",
            u.len(),
            mesh.vertex_count()
        )));
    }
    for (x, &d) in u.iter_mut().zip(&mesh.dirichlet) {
        if d {
            *x = 0.0;
        }
    }
    let q = params.q;
    let capset = CapSet::new(mesh, caps);
    let cubic = params.is_cubic();
    let stage1_target = if cubic && caps.is_empty() { tol.handoff.max(tol.grad) } else { tol.loose_grad };

    let mut history = Vec::new();
    let mut iterations = 0usize;
    let mut nu = vec![0.0; caps.len()];
    let mut mu = 0.0;
    if !caps.is_empty() {
        mu = 10.0 * quotient(mesh, &u, params)?;
    }
    let mut measure = f64::INFINITY;
    for _ in 0..40 {
        let budget = tol.max_iterations.saturating_sub(iterations);
        let d = descend(mesh, params, &capset, mu, &nu, u, stage1_target, budget, &mut history)?;
        iterations += d.iterations;
        u = d.u;
        if caps.is_empty() || iterations >= tol.max_iterations {
            break;
        }
        let fr = capset.fractions(mesh, &u, q);
        // complementarity measure of the inequality constraints
        let next = fr
            .iter()
            .zip(&capset.caps)
            .zip(&nu)
            .map(|((f, c), n)| (f - c).max(-n / mu).abs())
            .fold(0.0, f64::max);
        for ((n, f), c) in nu.iter_mut().zip(&fr).zip(&capset.caps) {
            *n = (*n + mu * (f - c)).max(0.0);
        }
        if next <= tol.cap_violation {
            break;
        }
        if next > 0.25 * measure {
            mu *= 10.0;
        }
        measure = next;
    }

    let fractions = capset.fractions(mesh, &u, q);
    let constraints: Vec<ConstraintReport> = caps
        .iter()
        .zip(&fractions)
        .zip(&nu)
        .map(|((c, &f), &n)| ConstraintReport {
            region: c.region,
            value: f,
            cap: c.cap,
            active: n > 0.0 || f >= c.cap * (1.0 - 1e-9),
        })
        .collect();
    let any_active = constraints.iter().any(|c| c.active);

    let mut newton_steps = 0;
    let mut newton_residual_sup = None;
    let mut newton_ok = true;
    if cubic && !any_active {
        let lambda1 = quotient(mesh, &u, params)?;
        let v: Vec<f64> = u.iter().map(|x| x * lambda1.sqrt()).collect();
        let (v, steps, res, ok) = newton_polish(mesh, v, tol)?;
        newton_steps = steps;
        newton_ok = ok;
        newton_residual_sup = Some(res);
        u = v;
        normalize(mesh, &mut u, q)?;
    }

    let (lambda, mut g) = quotient_and_gradient(mesh, &u, params)?;
    if any_active {
        // stationarity of the Lagrangian J + Σ ν f
        capset.penalty(mesh, &u, q, 0.0, &nu, Some(&mut g));
    }
    let grad_sup = sup(&riesz(mesh, &g));
    let fractions = capset.fractions(mesh, &u, q);
    let constraints = constraints
        .into_iter()
        .zip(fractions)
        .map(|(c, f)| ConstraintReport { value: f, ..c })
        .collect();
    let result = MinimizeResult {
        u: Field::new(u),
        lambda,
        iterations,
        newton_steps,
        grad_sup,
        newton_residual_sup,
        constraints,
        objective_history: history,
    };
    if !newton_ok || !result.converged(params, tol) {
        return Err(Error::BudgetExceeded(alloc::boxed::Box::new(result)));
    }
    Ok(result)
}

/// `λ^{1/(q−p)}·u`, a discrete solution of
/// `Δ_p u − |u|^{p−2}u + |u|^{q−2}u = 0`.
pub fn scale_to_solution(res: &MinimizeResult, params: &QuotientParams) -> Field {
    res.u.scaled(res.lambda.powf(1.0 / (params.q - params.p)))
}

/// `λ(R)` for each scale in `scales`, keeping the physical spacing of
/// `template`.
pub fn lambda_sweep(
    template: &DomainSpec,
    scales: &[f64],
    seed: &SeedSpec,
    params: &QuotientParams,
    tol: &ToleranceSet,
) -> Result<Vec<(f64, f64)>> {
    scales
        .iter()
        .map(|&r| {
            let mut spec = template.clone();
            spec.scale = r;
            if let crate::mesh::Shape::Strip { .. } = spec.shape {
                spec.shape = crate::mesh::Shape::Strip { half_height: 4.0 * r };
            }
            let mesh = build_mesh(&spec)?;
            let res = minimize_quotient(&mesh, params, seed, &spec.caps, tol)?;
            Ok((r, res.lambda))
        })
        .collect()
}

/// Smallest and largest `λ` of a sweep.
pub fn sweep_bounds(sweep: &[(f64, f64)]) -> Option<(f64, f64)> {
    if sweep.is_empty() {
        return None;
    }
    Some(sweep.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, l)| (lo.min(l), hi.max(l))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{EdgeCondition, Shape};

    #[test]
    fn centroid_seed_peaks_at_center() {
        let m = build_mesh(&DomainSpec::rectangle(1.0, 4.0, 0.25)).unwrap();
        let u = seed_field(&m, &SeedSpec::centroid(), 4.0).unwrap();
        let imax = (0..u.len()).max_by(|&a, &b| u[a].total_cmp(&u[b])).unwrap();
        assert_eq!(m.vertices[imax], [2.0, 2.0]);
        assert!(u.iter().all(|&x| x > 0.0));
        assert!((lq_norm_q(&m, &u, 4.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn corner_seed_decreases_with_distance() {
        let m = build_mesh(&DomainSpec::rectangle(1.0, 3.0, 0.25)).unwrap();
        let u = seed_field(&m, &SeedSpec::corner(0), 4.0).unwrap();
        let mut pairs: Vec<(f64, f64)> = m.vertices.iter().map(|p| (p[0].hypot(p[1]), 0.0)).collect();
        for (pair, &v) in pairs.iter_mut().zip(u.iter()) {
            pair.1 = v;
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        for w in pairs.windows(2) {
            if w[1].0 > w[0].0 {
                assert!(w[1].1 < w[0].1);
            }
        }
    }

    #[test]
    fn far_seed_with_dirichlet_boundary_is_degenerate() {
        let spec = DomainSpec::rectangle(1.0, 2.0, 0.25).dirichlet_everywhere();
        let m = build_mesh(&spec).unwrap();
        let seed = SeedSpec::new(SeedLocation::Explicit([20.0, 20.0]));
        assert!(matches!(seed_field(&m, &seed, 4.0), Err(Error::DegenerateSeed)));
    }

    #[test]
    fn scale_to_solution_factors() {
        let m = build_mesh(&DomainSpec::rectangle(1.0, 1.0, 0.5)).unwrap();
        let mut u = vec![0.0; 9];
        u[4] = 1.0;
        let res = MinimizeResult {
            u: Field::new(u),
            lambda: 4.0,
            iterations: 0,
            newton_steps: 0,
            grad_sup: 0.0,
            newton_residual_sup: None,
            constraints: Vec::new(),
            objective_history: Vec::new(),
        };
        assert_eq!(scale_to_solution(&res, &QuotientParams::cubic()).max(), 2.0);
        let res16 = MinimizeResult { lambda: 16.0, ..res.clone() };
        let p3 = QuotientParams::new(3.0, 4.0, 2).unwrap();
        assert_eq!(scale_to_solution(&res16, &p3).max(), 16.0);
        let one = MinimizeResult { u: Field::constant(&m, 1.0), lambda: 1.0, ..res };
        let s = scale_to_solution(&one, &QuotientParams::cubic());
        assert_eq!(s, Field::constant(&m, 1.0));
        assert!(pde_residual(&m, &s).sup_norm() < 1e-13);
    }

    #[test]
    fn small_square_corner_solve_converges() {
        let m = build_mesh(&DomainSpec::rectangle(1.0, 8.0, 0.25)).unwrap();
        let params = QuotientParams::cubic();
        let tol = ToleranceSet::default();
        let res = minimize_quotient(&m, &params, &SeedSpec::corner(0), &[], &tol).unwrap();
        assert!(res.lambda > 0.0);
        assert!((res.lambda - quotient(&m, &res.u, &params).unwrap()).abs() < 1e-10 * res.lambda);
        assert!(res.grad_sup <= 1e-7 * res.lambda);
        let sol = scale_to_solution(&res, &params);
        assert!(pde_residual(&m, &sol).free_sup_norm(&m) <= 1e-9 * sol.sup_norm());
        assert!(res.objective_history.windows(2).all(|w| w[1] <= w[0]));
        // positive minimizer
        assert!(res.u.min() > 0.0);
    }

    #[test]
    fn dirichlet_vertices_stay_zero() {
        let spec = DomainSpec::rectangle(1.0, 8.0, 0.25).with_edge(3, EdgeCondition::DirichletZero);
        let m = build_mesh(&spec).unwrap();
        let res = minimize_quotient(&m, &QuotientParams::cubic(), &SeedSpec::centroid(), &[], &ToleranceSet::default())
            .unwrap();
        assert!(res.u.is_boundary_conforming(&m));
        assert!(res.u.iter().zip(&m.dirichlet).filter(|(_, &d)| !d).all(|(v, _)| *v > 0.0));
    }

    #[test]
    fn general_p_stops_after_stage_one() {
        let m = build_mesh(&DomainSpec::rectangle(1.0, 6.0, 0.25)).unwrap();
        let params = QuotientParams::new(3.0, 4.0, 2).unwrap();
        let res = minimize_quotient(&m, &params, &SeedSpec::corner(0), &[], &ToleranceSet::default()).unwrap();
        assert!(res.newton_residual_sup.is_none());
        assert_eq!(res.newton_steps, 0);
        assert!(res.grad_sup <= 1e-5 * res.lambda);
    }

    #[test]
    fn active_cap_is_reported() {
        // on a small square the minimizer is constant, which puts about 5% of
        // the mass in the corner ball; a 2% cap must bind
        let spec = DomainSpec::rectangle(1.0, 2.0, 0.25);
        let m = build_mesh(&spec).unwrap();
        let caps = [RegionCap { region: Region::Ball { vertex: 0 }, cap: 0.02 }];
        let free = minimize_quotient(&m, &QuotientParams::cubic(), &SeedSpec::centroid(), &[], &ToleranceSet::default())
            .unwrap();
        let res = minimize_quotient(&m, &QuotientParams::cubic(), &SeedSpec::centroid(), &caps, &ToleranceSet::default())
            .unwrap();
        let c = res.constraints[0];
        assert!(c.active);
        assert!(c.value <= 0.02 + 1e-10, "{}", c.value);
        assert!(res.lambda >= free.lambda);
        assert!(res.newton_residual_sup.is_none());
    }

    #[test]
    fn degenerate_seed_propagates() {
        let spec = DomainSpec::new(Shape::EquilateralTriangle, 4.0, 0.25).dirichlet_everywhere();
        let m = build_mesh(&spec).unwrap();
        let seed = SeedSpec::new(SeedLocation::Explicit([100.0, 100.0]));
        let r = minimize_quotient(&m, &QuotientParams::cubic(), &seed, &[], &ToleranceSet::default());
        assert!(matches!(r, Err(Error::DegenerateSeed)));
    }

    #[test]
    fn empty_sweep_is_empty() {
        let spec = DomainSpec::rectangle(1.0, 10.0, 0.25);
        let out = lambda_sweep(&spec, &[], &SeedSpec::corner(0), &QuotientParams::cubic(), &ToleranceSet::default())
            .unwrap();
        assert!(out.is_empty());
        assert!(sweep_bounds(&out).is_none());
    }
}
