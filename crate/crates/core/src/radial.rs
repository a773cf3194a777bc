//! Radial solutions of `u'' + (n−1)/r·u' − u + u³ = 0`, `u'(0) = 0`, by
//! shooting on the amplitude `α = u(0)`.
//!
//! Solutions are indexed by their number of interior zeros. For a target
//! count `k`, amplitudes just below `α_k` pick up `k` zeros and then turn
//! back before reaching zero again; amplitudes above pick up a `k+1`-th zero.
//! Bisection on that predicate converges to the decaying solution.

use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float as _;

use crate::error::{Error, Result};
use crate::ode::rk4_step;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    /// Reached `|u|, |u'| < decay_tol` while approaching zero.
    Decay,
    /// Crossed zero more often than the target count.
    Overshoot,
    /// Turned back before reaching zero again, or ran out of `r`.
    Undershoot,
    /// `|u|` exceeded `max(2α, 2)`.
    Blowup,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootOptions {
    pub r_max: f64,
    pub step: f64,
    pub decay_tol: f64,
    /// Zero count beyond which a trajectory is an overshoot.
    pub target_nodes: usize,
}

impl Default for ShootOptions {
    fn default() -> Self {
        ShootOptions { r_max: 40.0, step: 1e-3, decay_tol: 1e-6, target_nodes: 0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShootResult {
    pub classification: Classification,
    /// Sign changes of `u` along the trajectory.
    pub node_count: usize,
    /// `(r, u, u')` samples from `r₀` on, one per step.
    pub profile: Vec<[f64; 3]>,
}

impl ShootResult {
    pub fn is_overshoot(&self) -> bool {
        self.classification == Classification::Overshoot || self.classification == Classification::Blowup
    }
}

/// `(u, u')` at `r` from the Taylor expansion at the origin through `r⁶`.
pub fn series_start(alpha: f64, n: u32, r: f64) -> [f64; 2] {
    let nf = n as f64;
    let g = alpha - alpha.powi(3);
    let dg = 1.0 - 3.0 * alpha * alpha;
    let a = g / (2.0 * nf);
    let b = dg * a / (4.0 * (nf + 2.0));
    let c = (dg * b - 3.0 * alpha * a * a) / (6.0 * (nf + 4.0));
    let r2 = r * r;
    [alpha + r2 * (a + r2 * (b + r2 * c)), r * (2.0 * a + r2 * (4.0 * b + 6.0 * c * r2))]
}

fn rhs(n: u32) -> impl Fn(f64, &[f64; 2]) -> [f64; 2] {
    let k = n as f64 - 1.0;
    move |r, y| [y[1], -k / r * y[1] + y[0] - y[0].powi(3)]
}

pub fn shoot(alpha: f64, n: u32, opts: &ShootOptions) -> Result<ShootResult> {
    if !(alpha > 0.0 && opts.r_max > 0.0 && opts.step > 0.0 && n >= 1) {
        return Err(Error::Precondition(format!(
            "shoot needs alpha > 0, r_max > 0, step > 0 and n ≥ 1 (alpha={alpha}, r_max={}, step={}, n={n})",
            opts.r_max, opts.step
        )));
    }
    let r0 = 10.0 * opts.step;
    if r0 >= opts.r_max {
        return Err(Error::Precondition(format!("r_max {} must exceed the start radius {r0}", opts.r_max)));
    }
    let f = rhs(n);
    let blowup = (2.0 * alpha).max(2.0);
    let mut y = series_start(alpha, n, r0);
    let mut r = r0;
    let mut profile = Vec::with_capacity(((opts.r_max - r0) / opts.step) as usize + 2);
    profile.push([r, y[0], y[1]]);
    let mut nodes = 0;
    let mut approaching = y[0] * y[1] < 0.0;
    let steps = ((opts.r_max - r0) / opts.step).ceil() as usize;
    let mut classification = Classification::Undershoot;
    for i in 1..=steps {
        let next = rk4_step(&f, r, &y, opts.step);
        r = r0 + i as f64 * opts.step;
        if !(next[0].is_finite() && next[1].is_finite()) {
            return Err(Error::NumericalFailure { at: r });
        }
        let crossed = next[0] == 0.0 || (next[0] > 0.0) != (y[0] > 0.0);
        y = next;
        profile.push([r, y[0], y[1]]);
        if y[0].abs() > blowup {
            classification = Classification::Blowup;
            break;
        }
        if crossed {
            nodes += 1;
            approaching = false;
            if nodes > opts.target_nodes {
                classification = Classification::Overshoot;
                break;
            }
            continue;
        }
        let toward = y[0] * y[1] < 0.0;
        if approaching {
            if y[0].abs() < opts.decay_tol && y[1].abs() < opts.decay_tol {
                classification = Classification::Decay;
                break;
            }
            if !toward {
                classification = Classification::Undershoot;
                break;
            }
        } else if toward {
            approaching = true;
        }
    }
    Ok(ShootResult { classification, node_count: nodes, profile })
}

#[derive(Debug, Clone, PartialEq)]
pub struct KNodeSolution {
    pub alpha: f64,
    pub nodes: usize,
    /// `(r, u)` from `r₀` up to the smallest `|u|` in the tail.
    pub profile: Vec<[f64; 2]>,
    /// Sup of the ODE residual along `profile`.
    pub residual_sup: f64,
}

/// Bisection for the amplitude with exactly `k` interior zeros in
/// `bracket = (lo, hi)`: `lo` must not overshoot `k`, `hi` must.
pub fn find_k_node_solution(k: usize, n: u32, bracket: (f64, f64), opts: &ShootOptions) -> Result<KNodeSolution> {
    let opts = ShootOptions { target_nodes: k, ..*opts };
    let (mut lo, mut hi) = bracket;
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::Bracket(format!("bracket ({lo}, {hi}) must satisfy 0 < lo < hi")));
    }
    let lo_shot = shoot(lo, n, &opts)?;
    let hi_shot = shoot(hi, n, &opts)?;
    if lo_shot.is_overshoot() || !hi_shot.is_overshoot() {
        return Err(Error::Bracket(format!(
            "bracket ({lo}, {hi}) does not straddle the {k}-node solution: lo is {:?} with {} zeros, hi is {:?} with {} zeros",
            lo_shot.classification, lo_shot.node_count, hi_shot.classification, hi_shot.node_count
        )));
    }
    let mut best = lo_shot;
    while hi - lo > 1e-12 * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let s = shoot(mid, n, &opts)?;
        if s.is_overshoot() {
            hi = mid;
        } else {
            lo = mid;
            best = s;
        }
    }
    if best.node_count != k {
        return Err(Error::Bracket(format!(
            "no {k}-node solution in the bracket: the limit amplitude {lo} has {} zeros",
            best.node_count
        )));
    }
    // stop at the smallest |u| after the last zero, before the growing mode
    let last_zero = best
        .profile
        .windows(2)
        .rposition(|w| (w[0][1] > 0.0) != (w[1][1] > 0.0))
        .map_or(0, |i| i + 1);
    let tail_min = (last_zero..best.profile.len())
        .min_by(|&a, &b| best.profile[a][1].abs().total_cmp(&best.profile[b][1].abs()))
        .unwrap_or(best.profile.len() - 1);
    let kept = &best.profile[..=tail_min];
    let residual_sup = ode_residual(kept, n, opts.step);
    Ok(KNodeSolution { alpha: lo, nodes: k, profile: kept.iter().map(|s| [s[0], s[1]]).collect(), residual_sup })
}

/// Sup over interior samples of `u'' + (n−1)/r·u' − u + u³`, with `u''`
/// from the fourth-order five-point stencil and `u'` from the integrator.
pub fn ode_residual(profile: &[[f64; 3]], n: u32, step: f64) -> f64 {
    let k = n as f64 - 1.0;
    let h2 = step * step;
    (2..profile.len().saturating_sub(2))
        .map(|i| {
            let u = |j: usize| profile[j][1];
            let upp = (-u(i + 2) + 16.0 * u(i + 1) - 30.0 * u(i) + 16.0 * u(i - 1) - u(i - 2)) / (12.0 * h2);
            let [r, ui, up] = profile[i];
            (upp + k / r * up - ui + ui.powi(3)).abs()
        })
        .fold(0.0, f64::max)
}

/// Consecutive amplitudes on a uniform scan of `[lo, hi]` between which
/// the `k`-node overshoot predicate switches on.
pub fn bracket_scan(k: usize, n: u32, lo: f64, hi: f64, samples: usize, opts: &ShootOptions) -> Result<Option<(f64, f64)>> {
    let opts = ShootOptions { target_nodes: k, ..*opts };
    let samples = samples.max(2);
    let mut prev = None;
    for i in 0..samples {
        let a = lo + (hi - lo) * i as f64 / (samples - 1) as f64;
        let over = shoot(a, n, &opts)?.is_overshoot();
        if let Some(p) = prev {
            if over {
                return Ok(Some((p, a)));
            }
        }
        if !over {
            prev = Some(a);
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_start_satisfies_the_equation() {
        for n in [1u32, 2, 3] {
            let alpha = 2.3;
            let r = 0.01;
            let h = 1e-4;
            let u = |r: f64| series_start(alpha, n, r)[0];
            let upp = (u(r + h) - 2.0 * u(r) + u(r - h)) / (h * h);
            let [u0, up] = series_start(alpha, n, r);
            let res = upp + (n as f64 - 1.0) / r * up - u0 + u0.powi(3);
            assert!(res.abs() < 1e-6, "n={n}: {res}");
        }
    }

    #[test]
    fn one_dimensional_classification() {
        let o = ShootOptions::default();
        let wall = shoot(2f64.sqrt(), 1, &o).unwrap();
        assert_eq!(wall.classification, Classification::Decay);
        assert_eq!(wall.node_count, 0);
        assert_eq!(shoot(1.0, 1, &o).unwrap().classification, Classification::Undershoot);
        assert_eq!(shoot(2.0, 1, &o).unwrap().classification, Classification::Overshoot);
        assert!(shoot(0.0, 1, &o).is_err());
    }

    #[test]
    fn wall_amplitude_by_bisection() {
        let s = find_k_node_solution(0, 1, (1.0, 2.0), &ShootOptions::default()).unwrap();
        assert!((s.alpha - 2f64.sqrt()).abs() < 1e-10, "{}", s.alpha);
        for &[r, u] in s.profile.iter().filter(|p| p[0] <= 10.0) {
            assert!((u - 2f64.sqrt() / r.cosh()).abs() < 1e-6);
        }
        assert!(s.residual_sup <= 1e-6);
    }

    #[test]
    fn planar_ground_state_bracket() {
        let o = ShootOptions::default();
        let s = find_k_node_solution(0, 2, (2.0, 2.5), &o).unwrap();
        assert!((2.0..2.5).contains(&s.alpha));
        assert!((s.alpha - 2.206_200_864).abs() < 1e-6, "{}", s.alpha);
        assert!(s.residual_sup <= 1e-6, "{}", s.residual_sup);
        assert!(matches!(find_k_node_solution(0, 2, (0.1, 0.2), &o), Err(Error::Bracket(_))));
    }

    #[test]
    fn scan_finds_excited_states() {
        let o = ShootOptions::default();
        let mut prev = 0.0;
        for k in 0..4 {
            let (lo, hi) = bracket_scan(k, 2, 1.5, 8.0, 66, &o).unwrap().unwrap();
            let s = find_k_node_solution(k, 2, (lo, hi), &o).unwrap();
            assert!(s.alpha > prev);
            assert!(s.residual_sup <= 1e-6, "k={k}: {}", s.residual_sup);
            let zeros = s.profile.windows(2).filter(|w| (w[0][1] > 0.0) != (w[1][1] > 0.0)).count();
            assert_eq!(zeros, k);
            prev = s.alpha;
        }
    }
}
