//! Entire solutions from fundamental-domain solutions by reflection.
//!
//! A tiling is the group generated by reflections across (some of) the edges
//! of the fundamental domain. Even generators copy values, odd generators
//! negate them. Points of the plane are folded back into the domain by
//! reflecting across violated edges, and the solution is interpolated there.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use core::str::FromStr;

#[allow(unused_imports)]
use num_traits::Float as _;

use crate::error::{Error, Result};
use crate::grid::{Grid, Window};
use crate::mesh::{DomainSpec, EdgeCondition, Mesh, Point, Shape};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TilingPattern {
    /// Rectangle, even across every side.
    RectEven,
    /// Strip, even across both vertical sides; no extension in `y`.
    RectBreather,
    /// Rectangle, odd across the vertical sides and even across the others.
    RectSignVertical,
    /// Rectangle, odd across every side.
    RectSignChecker,
    /// Any triangle, even across every side.
    TriEvenHex,
    /// Equilateral triangle, odd across every side.
    TriOdd,
    /// 30-60-90 triangle, odd across every side.
    Tri3060Odd,
    /// 45-45-90 triangle, odd across every side.
    Tri4545Odd,
    /// Strip, odd across both vertical sides.
    StripBreatherSign,
    /// No extension: the solution on its own domain.
    RadialNone,
    /// Equilateral triangle, odd across one side and even across the others.
    TriOddOneSide,
}

impl TilingPattern {
    pub const ALL: [TilingPattern; 11] = [
        TilingPattern::RectEven,
        TilingPattern::RectBreather,
        TilingPattern::RectSignVertical,
        TilingPattern::RectSignChecker,
        TilingPattern::TriEvenHex,
        TilingPattern::TriOdd,
        TilingPattern::Tri3060Odd,
        TilingPattern::Tri4545Odd,
        TilingPattern::StripBreatherSign,
        TilingPattern::RadialNone,
        TilingPattern::TriOddOneSide,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            TilingPattern::RectEven => "rect_even",
            TilingPattern::RectBreather => "rect_breather",
            TilingPattern::RectSignVertical => "rect_sign_vertical",
            TilingPattern::RectSignChecker => "rect_sign_checker",
            TilingPattern::TriEvenHex => "tri_even_hex",
            TilingPattern::TriOdd => "tri_odd",
            TilingPattern::Tri3060Odd => "tri_30_60_odd",
            TilingPattern::Tri4545Odd => "tri_45_45_odd",
            TilingPattern::StripBreatherSign => "strip_breather_sign",
            TilingPattern::RadialNone => "radial_none",
            TilingPattern::TriOddOneSide => "tri_odd_one_side",
        }
    }

    fn shape_ok(&self, shape: &Shape) -> bool {
        use TilingPattern::*;
        match self {
            RectEven | RectSignVertical | RectSignChecker => matches!(shape, Shape::Rectangle { .. }),
            RectBreather | StripBreatherSign => matches!(shape, Shape::Strip { .. }),
            TriEvenHex => shape.is_triangle(),
            TriOdd | TriOddOneSide => matches!(shape, Shape::EquilateralTriangle),
            Tri3060Odd => matches!(shape, Shape::RightTriangle3060),
            Tri4545Odd => matches!(shape, Shape::RightTriangle4545),
            RadialNone => true,
        }
    }
}

impl fmt::Display for TilingPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TilingPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TilingPattern::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::InvalidTiling(format!("unknown pattern `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }
}

/// Reflection generators of a tiling: `parities[e]` is `Some` when edge `e`
/// of the fundamental domain is a mirror.
#[derive(Debug, Clone, PartialEq)]
pub struct TilingSpec {
    pub pattern: TilingPattern,
    pub domain: DomainSpec,
    pub parities: Vec<Option<Parity>>,
}

fn pattern_parities(pattern: TilingPattern, domain: &DomainSpec) -> Vec<Option<Parity>> {
    use Parity::*;
    use TilingPattern::*;
    let n = domain.shape.edge_count();
    match pattern {
        RectEven => vec![Some(Even); 4],
        RectSignChecker => vec![Some(Odd); 4],
        RectSignVertical => vec![Some(Even), Some(Odd), Some(Even), Some(Odd)],
        RectBreather => vec![None, Some(Even), None, Some(Even)],
        StripBreatherSign => vec![None, Some(Odd), None, Some(Odd)],
        TriEvenHex => vec![Some(Even); 3],
        TriOdd | Tri3060Odd | Tri4545Odd => vec![Some(Odd); 3],
        TriOddOneSide => {
            let dirichlet: Vec<usize> = (0..domain.edges.len())
                .filter(|&e| domain.edges[e] == EdgeCondition::DirichletZero)
                .collect();
            let odd = if dirichlet.len() == 1 { dirichlet[0] } else { 0 };
            (0..3).map(|e| Some(if e == odd { Odd } else { Even })).collect()
        }
        RadialNone => vec![None; n],
    }
}

/// Build the reflection group of `pattern` on `domain`. Checks, in order,
/// that the pattern fits the shape, that its signs are consistent, and that
/// odd mirrors sit on Dirichlet edges and even mirrors on natural ones.
pub fn make_tiling(domain: &DomainSpec, pattern: TilingPattern) -> Result<TilingSpec> {
    if !pattern.shape_ok(&domain.shape) {
        return Err(Error::InvalidTiling(format!(
            "pattern {} does not apply to shape {}",
            pattern,
            domain.shape.name()
        )));
    }
    let spec = TilingSpec { pattern, domain: domain.clone(), parities: pattern_parities(pattern, domain) };
    if let Some(corner) = sign_conflict(&spec) {
        return Err(Error::Obstruction(format!(
            "pattern {pattern}: reflections around corner {corner} cannot close with consistent signs"
        )));
    }
    for (e, parity) in spec.parities.iter().enumerate() {
        let condition = domain.edges.get(e).copied().unwrap_or(EdgeCondition::Natural);
        match (parity, condition) {
            (Some(Parity::Odd), EdgeCondition::Natural) => {
                return Err(Error::InvalidTiling(format!(
                    "pattern {pattern} reflects oddly across edge {e}, which has a natural condition"
                )))
            }
            (Some(Parity::Even), EdgeCondition::DirichletZero) => {
                return Err(Error::InvalidTiling(format!(
                    "pattern {pattern} reflects evenly across edge {e}, which has a Dirichlet condition"
                )))
            }
            _ => {}
        }
    }
    Ok(spec)
}

/// First corner whose two mirrors violate the sign relation: around a
/// corner of angle `π/m` the two reflections generate a rotation of order
/// `m`, so for odd `m` their parities must agree.
fn sign_conflict(spec: &TilingSpec) -> Option<usize> {
    let c = spec.domain.corners();
    let n = c.len();
    if n < 3 {
        return None;
    }
    for i in 0..n {
        let prev = (i + n - 1) % n;
        let (Some(a), Some(b)) = (spec.parities[prev], spec.parities[i]) else {
            continue;
        };
        let u = [c[prev][0] - c[i][0], c[prev][1] - c[i][1]];
        let v = [c[(i + 1) % n][0] - c[i][0], c[(i + 1) % n][1] - c[i][1]];
        let cos = (u[0] * v[0] + u[1] * v[1]) / (u[0].hypot(u[1]) * v[0].hypot(v[1]));
        let m = (PI / cos.clamp(-1.0, 1.0).acos()).round() as i64;
        if m % 2 == 1 && a != b {
            return Some(i);
        }
    }
    None
}

/// Whether every closed loop of reflections composes to sign `+1`.
pub fn check_sign_consistency(spec: &TilingSpec) -> bool {
    sign_conflict(spec).is_none()
}

impl TilingSpec {
    /// Generators of the translation lattice under which the extended
    /// function is invariant (one vector for strips, none for `radial_none`).
    pub fn periods(&self) -> Vec<Point> {
        let r = self.domain.scale;
        let s3 = 3f64.sqrt();
        let span = |a: Option<Parity>, b: Option<Parity>, len: f64| if a == b { 2.0 * len } else { 4.0 * len };
        let p = &self.parities;
        match self.domain.shape {
            _ if self.pattern == TilingPattern::RadialNone => Vec::new(),
            Shape::Rectangle { aspect } => {
                vec![[span(p[1], p[3], r), 0.0], [0.0, span(p[0], p[2], aspect * r)]]
            }
            Shape::Strip { .. } => vec![[span(p[1], p[3], r), 0.0]],
            Shape::EquilateralTriangle | Shape::RightTriangle3060 => vec![[0.0, s3 * r], [1.5 * r, 0.5 * s3 * r]],
            Shape::RightTriangle4545 => vec![[2.0 * r, 0.0], [0.0, 2.0 * r]],
            Shape::Interval => Vec::new(),
        }
    }

    fn fold_cap(&self, p: Point) -> usize {
        (64.0 * (1.0 + p[0].hypot(p[1]) / self.domain.scale)).ceil() as usize
    }

    /// Image of `p` in the fundamental domain and the accumulated sign, or
    /// `None` when `p` lies outside a non-extended direction.
    pub fn fold(&self, p: Point) -> Result<Option<(Point, f64)>> {
        if !(p[0].is_finite() && p[1].is_finite()) {
            return Err(Error::InvalidSpec(format!("non-finite point {p:?}")));
        }
        let r = self.domain.scale;
        match self.domain.shape {
            _ if self.pattern == TilingPattern::RadialNone => Ok(Some((p, 1.0))),
            Shape::Rectangle { aspect } => {
                let (x, sx) = fold_axis(p[0], r, self.parities[3], self.parities[1]);
                let (y, sy) = fold_axis(p[1], aspect * r, self.parities[0], self.parities[2]);
                Ok(Some(([x, y], sx * sy)))
            }
            Shape::Strip { half_height } => {
                if p[1].abs() > half_height {
                    return Ok(None);
                }
                let (x, sx) = fold_axis(p[0], r, self.parities[3], self.parities[1]);
                Ok(Some(([x, p[1]], sx)))
            }
            _ => self.fold_polygon(p).map(Some),
        }
    }

    fn fold_polygon(&self, mut p: Point) -> Result<(Point, f64)> {
        let c = self.domain.corners();
        let n = c.len();
        let walls: Vec<(Point, Point)> = (0..n)
            .map(|i| {
                let (a, b) = (c[i], c[(i + 1) % n]);
                let len = (b[0] - a[0]).hypot(b[1] - a[1]);
                (a, [-(b[1] - a[1]) / len, (b[0] - a[0]) / len])
            })
            .collect();
        let tol = 1e-12 * self.domain.scale;
        let mut sign = 1.0;
        for _ in 0..=self.fold_cap(p) {
            let mut worst = None;
            let mut worst_d = -tol;
            for (e, (a, nrm)) in walls.iter().enumerate() {
                if self.parities[e].is_none() {
                    continue;
                }
                let d = nrm[0] * (p[0] - a[0]) + nrm[1] * (p[1] - a[1]);
                if d < worst_d {
                    worst_d = d;
                    worst = Some(e);
                }
            }
            let Some(e) = worst else {
                return Ok((p, sign));
            };
            let nrm = walls[e].1;
            p = [p[0] - 2.0 * worst_d * nrm[0], p[1] - 2.0 * worst_d * nrm[1]];
            sign *= self.parities[e].map_or(1.0, Parity::sign);
        }
        Err(Error::FoldCapExceeded)
    }

    /// Distance from `p` to the nearest mirror line of the tiling.
    pub fn seam_distance(&self, p: Point) -> Result<f64> {
        let Some((q, _)) = self.fold(p)? else {
            return Ok(f64::INFINITY);
        };
        let c = self.domain.corners();
        let n = c.len();
        let mut d = f64::INFINITY;
        for e in 0..n {
            if self.parities.get(e).copied().flatten().is_none() {
                continue;
            }
            let (a, b) = (c[e], c[(e + 1) % n]);
            let len = (b[0] - a[0]).hypot(b[1] - a[1]);
            let de = ((b[0] - a[0]) * (q[1] - a[1]) - (b[1] - a[1]) * (q[0] - a[0])).abs() / len;
            d = d.min(de);
        }
        Ok(d)
    }
}

/// Fold a coordinate into `[0, len]` for mirrors at `0` (parity `lo`) and
/// `len` (parity `hi`): tile `k` is `[k·len, (k+1)·len]`, and the sign is
/// the product of the parities of the walls crossed from tile 0.
fn fold_axis(x: f64, len: f64, lo: Option<Parity>, hi: Option<Parity>) -> (f64, f64) {
    let k = (x / len).floor();
    let t = x - k * len;
    let ki = k as i64;
    let folded = if ki.rem_euclid(2) == 0 { t } else { len - t };
    let s_lo = lo.map_or(1.0, Parity::sign);
    let s_hi = hi.map_or(1.0, Parity::sign);
    let walls = ki.unsigned_abs();
    let (n_hi, n_lo) = if ki >= 0 { (walls.div_ceil(2), walls / 2) } else { (walls / 2, walls.div_ceil(2)) };
    let sign = if n_hi % 2 == 1 { s_hi } else { 1.0 } * if n_lo % 2 == 1 { s_lo } else { 1.0 };
    (folded, sign)
}

/// Value at `p` of the entire extension of the nodal field `u`.
pub fn evaluate_entire(mesh: &Mesh, u: &[f64], spec: &TilingSpec, p: Point) -> Result<f64> {
    let Some((q, sign)) = spec.fold(p)? else {
        return Ok(0.0);
    };
    match mesh.interpolate(u, q) {
        Some(v) => Ok(sign * v),
        None if spec.pattern == TilingPattern::RadialNone => {
            Err(Error::Precondition(format!("point {p:?} lies outside the domain and pattern radial_none does not extend")))
        }
        None => Err(Error::Precondition(format!("folded point {q:?} is not covered by the mesh"))),
    }
}

/// Samples of [`evaluate_entire`] on the window at spacing `hs`.
pub fn sample_entire(mesh: &Mesh, u: &[f64], spec: &TilingSpec, window: &Window, hs: f64) -> Result<Grid> {
    if !(hs > 0.0) {
        return Err(Error::InvalidGrid(format!("sample spacing must be positive, got {hs}")));
    }
    let (nx, ny) = window.counts(hs);
    let mut values = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let p = [window.x0 + i as f64 * hs, window.y0 + j as f64 * hs];
            values.push(evaluate_entire(mesh, u, spec, p)?);
        }
    }
    Grid::new(nx, ny, hs, window.x0, window.y0, values)
}

/// Five-point residual `−Δ_h f + f − f³` at interior samples; zero on the
/// grid border.
pub fn residual_grid(grid: &Grid) -> Result<Grid> {
    if grid.nx < 5 || grid.ny < 5 {
        return Err(Error::InvalidGrid(format!("residual needs at least 5×5 samples, got {}×{}", grid.nx, grid.ny)));
    }
    let h2 = grid.hs * grid.hs;
    let mut out = Grid::zeros(grid.nx, grid.ny, grid.hs, grid.x0, grid.y0);
    for j in 1..grid.ny - 1 {
        for i in 1..grid.nx - 1 {
            let f = grid.get(i, j);
            let lap = (grid.get(i + 1, j) + grid.get(i - 1, j) + grid.get(i, j + 1) + grid.get(i, j - 1) - 4.0 * f) / h2;
            out.set(i, j, -lap + f - f * f * f);
        }
    }
    Ok(out)
}

/// Sup and discrete L² norms of [`residual_grid`].
pub fn tiled_residual(grid: &Grid) -> Result<(f64, f64)> {
    let r = residual_grid(grid)?;
    let l2 = (grid.hs * grid.hs * r.values.iter().map(|v| v * v).sum::<f64>()).sqrt();
    Ok((r.sup_norm(), l2))
}

/// Residual sup norms split by whether a sample's stencil touches a mirror.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeamResidual {
    pub seam_sup: f64,
    pub interior_sup: f64,
    pub seam_points: usize,
    pub interior_points: usize,
}

pub fn seam_split_residual(grid: &Grid, spec: &TilingSpec) -> Result<SeamResidual> {
    let r = residual_grid(grid)?;
    let mut out = SeamResidual { seam_sup: 0.0, interior_sup: 0.0, seam_points: 0, interior_points: 0 };
    for j in 1..grid.ny - 1 {
        for i in 1..grid.nx - 1 {
            let v = r.get(i, j).abs();
            if spec.seam_distance(grid.point(i, j))? <= grid.hs * (1.0 + 1e-9) {
                out.seam_sup = out.seam_sup.max(v);
                out.seam_points += 1;
            } else {
                out.interior_sup = out.interior_sup.max(v);
                out.interior_points += 1;
            }
        }
    }
    Ok(out)
}

/// Names of every built-in pattern, space separated.
pub fn pattern_names() -> String {
    let mut s = String::new();
    for (i, p) in TilingPattern::ALL.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        s.push_str(p.name());
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::build_mesh;
    use proptest::prelude::*;

    fn rect(r: f64) -> DomainSpec {
        DomainSpec::rectangle(1.0, r, r / 8.0)
    }

    fn smooth(p: Point) -> f64 {
        1.0 + 0.3 * p[0] - 0.2 * p[1] + 0.05 * p[0] * p[1]
    }

    #[test]
    fn rect_even_folds() {
        let d = rect(4.0);
        let m = build_mesh(&d).unwrap();
        let u: Vec<f64> = m.vertices.iter().map(|&p| smooth(p)).collect();
        let t = make_tiling(&d, TilingPattern::RectEven).unwrap();
        let at = |p| evaluate_entire(&m, &u, &t, p).unwrap();
        assert_eq!(at([8.0 + 0.375, 1.5]), at([0.375, 1.5]));
        assert!((at([8.0 + 0.3, 1.5]) - smooth([0.3, 1.5])).abs() < 1e-12);
        assert_eq!(at([-2.5, 1.5]), at([2.5, 1.5]));
        assert_eq!(t.periods(), vec![[8.0, 0.0], [0.0, 8.0]]);
    }

    #[test]
    fn checker_negates_across_right_side() {
        let d = rect(4.0).dirichlet_everywhere();
        let m = build_mesh(&d).unwrap();
        let u: Vec<f64> = m.vertices.iter().map(|&p| p[0] * (4.0 - p[0]) * p[1] * (4.0 - p[1])).collect();
        let t = make_tiling(&d, TilingPattern::RectSignChecker).unwrap();
        for x in [0.25, 1.0, 3.5] {
            let a = evaluate_entire(&m, &u, &t, [4.0 + x, 1.25]).unwrap();
            let b = evaluate_entire(&m, &u, &t, [4.0 - x, 1.25]).unwrap();
            assert_eq!(a, -b);
        }
        assert!(check_sign_consistency(&t));
    }

    #[test]
    fn obstruction_only_for_single_odd_side() {
        for pat in TilingPattern::ALL {
            let base = match pat {
                TilingPattern::RectEven | TilingPattern::RectSignVertical | TilingPattern::RectSignChecker => rect(4.0),
                TilingPattern::RectBreather | TilingPattern::StripBreatherSign => DomainSpec::strip(4.0, 0.5),
                TilingPattern::Tri3060Odd => DomainSpec::new(Shape::RightTriangle3060, 4.0, 0.5),
                TilingPattern::Tri4545Odd => DomainSpec::new(Shape::RightTriangle4545, 4.0, 0.5),
                _ => DomainSpec::new(Shape::EquilateralTriangle, 4.0, 0.5),
            };
            let spec = TilingSpec { pattern: pat, parities: pattern_parities(pat, &base), domain: base };
            assert_eq!(check_sign_consistency(&spec), pat != TilingPattern::TriOddOneSide, "{pat}");
        }
    }

    #[test]
    fn make_tiling_checks() {
        let tri = DomainSpec::new(Shape::EquilateralTriangle, 4.0, 0.5);
        let one = tri.clone().with_edge(1, EdgeCondition::DirichletZero);
        assert!(matches!(make_tiling(&one, TilingPattern::TriOddOneSide), Err(Error::Obstruction(_))));
        assert!(matches!(make_tiling(&tri, TilingPattern::TriOddOneSide), Err(Error::Obstruction(_))));
        assert!(matches!(make_tiling(&tri, TilingPattern::RectEven), Err(Error::InvalidTiling(_))));
        assert!(matches!(make_tiling(&tri, TilingPattern::TriOdd), Err(Error::InvalidTiling(_))));
        assert!(make_tiling(&tri, TilingPattern::TriEvenHex).is_ok());
        assert!(make_tiling(&tri.dirichlet_everywhere(), TilingPattern::TriOdd).is_ok());
        let vertical = rect(4.0)
            .with_edge(1, EdgeCondition::DirichletZero)
            .with_edge(3, EdgeCondition::DirichletZero);
        assert!(make_tiling(&vertical, TilingPattern::RectSignVertical).is_ok());
        assert!(make_tiling(&vertical, TilingPattern::RectEven).is_err());
        assert_eq!("tri_odd".parse::<TilingPattern>().unwrap(), TilingPattern::TriOdd);
        assert!("hexagon".parse::<TilingPattern>().is_err());
    }

    #[test]
    fn radial_none_is_the_domain_itself() {
        let d = rect(4.0);
        let m = build_mesh(&d).unwrap();
        let u: Vec<f64> = m.vertices.iter().map(|&p| smooth(p)).collect();
        let t = make_tiling(&d, TilingPattern::RadialNone).unwrap();
        assert!((evaluate_entire(&m, &u, &t, [1.0, 2.0]).unwrap() - smooth([1.0, 2.0])).abs() < 1e-12);
        assert!(evaluate_entire(&m, &u, &t, [5.0, 2.0]).is_err());
        assert!(t.periods().is_empty());
    }

    #[test]
    fn strip_is_zero_beyond_truncation() {
        let d = DomainSpec::strip(2.0, 0.25);
        let m = build_mesh(&d).unwrap();
        let u = vec![1.0; m.vertex_count()];
        let t = make_tiling(&d, TilingPattern::RectBreather).unwrap();
        assert_eq!(evaluate_entire(&m, &u, &t, [7.3, 9.0]).unwrap(), 0.0);
        assert_eq!(evaluate_entire(&m, &u, &t, [7.3, 7.0]).unwrap(), 1.0);
    }

    #[test]
    fn sampling_periods_and_empty_window() {
        let d = rect(2.0);
        let m = build_mesh(&d).unwrap();
        let u: Vec<f64> = m.vertices.iter().map(|&p| smooth(p)).collect();
        let t = make_tiling(&d, TilingPattern::RectEven).unwrap();
        let g = sample_entire(&m, &u, &t, &Window::new(-6.0, -6.0, 6.0, 6.0), 0.125).unwrap();
        // 4 periods of 32 samples
        for j in 0..g.ny {
            for i in 0..g.nx - 32 {
                assert_eq!(g.get(i, j), g.get(i + 32, j));
            }
        }
        let e = sample_entire(&m, &u, &t, &Window::new(0.0, 0.0, 0.0, 0.0), 0.125).unwrap();
        assert!(e.is_empty());
    }

    #[test]
    fn residual_of_constants() {
        let z = Grid::from_fn(6, 6, 0.1, 0.0, 0.0, |_| 0.0);
        assert_eq!(tiled_residual(&z).unwrap(), (0.0, 0.0));
        let one = Grid::from_fn(6, 6, 0.1, 0.0, 0.0, |_| 1.0);
        assert_eq!(tiled_residual(&one).unwrap(), (0.0, 0.0));
        let small = Grid::from_fn(4, 6, 0.1, 0.0, 0.0, |_| 1.0);
        assert!(tiled_residual(&small).is_err());
    }

    #[test]
    fn seam_distance_on_rectangle() {
        let t = make_tiling(&rect(4.0), TilingPattern::RectEven).unwrap();
        assert!((t.seam_distance([9.0, 2.0]).unwrap() - 1.0).abs() < 1e-12);
        assert!((t.seam_distance([-5.5, 1.75]).unwrap() - 1.5).abs() < 1e-12);
    }

    fn triangle_specs() -> Vec<TilingSpec> {
        let mut v = Vec::new();
        for (shape, pat) in [
            (Shape::EquilateralTriangle, TilingPattern::TriEvenHex),
            (Shape::EquilateralTriangle, TilingPattern::TriOdd),
            (Shape::RightTriangle3060, TilingPattern::TriEvenHex),
            (Shape::RightTriangle3060, TilingPattern::Tri3060Odd),
            (Shape::RightTriangle4545, TilingPattern::TriEvenHex),
            (Shape::RightTriangle4545, TilingPattern::Tri4545Odd),
        ] {
            let mut d = DomainSpec::new(shape, 3.0, 0.25);
            if pat != TilingPattern::TriEvenHex {
                d = d.dirichlet_everywhere();
            }
            v.push(make_tiling(&d, pat).unwrap());
        }
        v
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn triangle_folds_land_inside_and_respect_periods(x in -40.0f64..40.0, y in -40.0f64..40.0) {
            for t in triangle_specs() {
                let (q, s) = t.fold([x, y]).unwrap().unwrap();
                let c = t.domain.corners();
                for e in 0..3 {
                    let (a, b) = (c[e], c[(e + 1) % 3]);
                    let cross = (b[0] - a[0]) * (q[1] - a[1]) - (b[1] - a[1]) * (q[0] - a[0]);
                    prop_assert!(cross >= -1e-9);
                }
                for per in t.periods() {
                    let (q2, s2) = t.fold([x + per[0], y + per[1]]).unwrap().unwrap();
                    prop_assert!((q2[0] - q[0]).abs() < 1e-9 && (q2[1] - q[1]).abs() < 1e-9, "{:?} {:?} {:?}", t.pattern, q, q2);
                    prop_assert_eq!(s, s2);
                }
            }
        }

        #[test]
        fn odd_mirror_images_negate(x in 0.0f64..4.0, y in 0.0f64..4.0, kx in -3i32..3, ky in -3i32..3) {
            let d = rect(4.0).dirichlet_everywhere();
            let t = make_tiling(&d, TilingPattern::RectSignChecker).unwrap();
            let (px, py) = (x + 4.0 * kx as f64, y + 4.0 * ky as f64);
            let (q1, s1) = t.fold([px, py]).unwrap().unwrap();
            // mirror across the wall x = 4·kx
            let (q2, s2) = t.fold([8.0 * kx as f64 - px, py]).unwrap().unwrap();
            prop_assert!((q1[0] - q2[0]).abs() < 1e-12 && (q1[1] - q2[1]).abs() < 1e-12);
            prop_assert_eq!(s1, -s2);
        }
    }
}
