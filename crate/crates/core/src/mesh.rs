//! Structured P1 triangulations of the fundamental domains.
//!
//! Rectangles and strips are uniform grids whose cells are split along the
//! lower-left to upper-right diagonal. Triangles are cut into `k²` congruent
//! copies of themselves, so slanted edges are exact. The interval is a 1D
//! mesh of segments (used for the plane-wall profile).
//!
//! Vertices are numbered row by row; the bandwidth of every assembled
//! operator is therefore about one row of vertices.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Deref, DerefMut};

#[allow(unused_imports)]
use num_traits::Float as _;

use crate::error::{Error, Result};

pub type Point = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    /// `(0, R) × (0, aR)`, `a ≥ 1`.
    Rectangle { aspect: f64 },
    /// Side `R`, corners `(0,0)`, `(R,0)`, `(R/2, √3R/2)`.
    EquilateralTriangle,
    /// Angles π/2, π/3, π/6 with hypotenuse `R`. Corners in order
    /// `Z = (0,0)` (right angle), `X = (R/2, 0)` (π/3), `Y = (0, √3R/2)` (π/6).
    RightTriangle3060,
    /// Legs `R`, corners `(0,0)`, `(R,0)`, `(0,R)`.
    RightTriangle4545,
    /// `(0, R) × (−T, T)`: the strip `(0, R) × ℝ` truncated at half-height `T`.
    Strip { half_height: f64 },
    /// `(−R, R)`.
    Interval,
}

/// Corner indices of [`Shape::RightTriangle3060`].
pub mod hex_vertex {
    pub const Z: usize = 0;
    pub const X: usize = 1;
    pub const Y: usize = 2;
}

impl Shape {
    pub fn name(&self) -> &'static str {
        match self {
            Shape::Rectangle { .. } => "rect",
            Shape::EquilateralTriangle => "tri",
            Shape::RightTriangle3060 => "tri3060",
            Shape::RightTriangle4545 => "tri4545",
            Shape::Strip { .. } => "strip",
            Shape::Interval => "interval",
        }
    }

    pub fn edge_count(&self) -> usize {
        match self {
            Shape::Rectangle { .. } | Shape::Strip { .. } => 4,
            Shape::Interval => 2,
            _ => 3,
        }
    }

    pub fn is_triangle(&self) -> bool {
        matches!(
            self,
            Shape::EquilateralTriangle | Shape::RightTriangle3060 | Shape::RightTriangle4545
        )
    }

    /// Polygon corners in counter-clockwise order; edge `i` joins corner `i`
    /// to corner `i + 1`. For the interval these are the two end points.
    pub fn corners(&self, scale: f64) -> Vec<Point> {
        let r = scale;
        let s3 = 3f64.sqrt();
        match *self {
            Shape::Rectangle { aspect } => vec![[0.0, 0.0], [r, 0.0], [r, aspect * r], [0.0, aspect * r]],
            Shape::Strip { half_height: t } => vec![[0.0, -t], [r, -t], [r, t], [0.0, t]],
            Shape::EquilateralTriangle => vec![[0.0, 0.0], [r, 0.0], [0.5 * r, 0.5 * s3 * r]],
            Shape::RightTriangle3060 => vec![[0.0, 0.0], [0.5 * r, 0.0], [0.0, 0.5 * s3 * r]],
            Shape::RightTriangle4545 => vec![[0.0, 0.0], [r, 0.0], [0.0, r]],
            Shape::Interval => vec![[-r, 0.0], [r, 0.0]],
        }
    }

    /// Area (length for the interval).
    pub fn area(&self, scale: f64) -> f64 {
        let r = scale;
        match *self {
            Shape::Rectangle { aspect } => aspect * r * r,
            Shape::Strip { half_height } => 2.0 * half_height * r,
            Shape::EquilateralTriangle => 3f64.sqrt() / 4.0 * r * r,
            Shape::RightTriangle3060 => 3f64.sqrt() / 8.0 * r * r,
            Shape::RightTriangle4545 => 0.5 * r * r,
            Shape::Interval => 2.0 * r,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeCondition {
    Natural,
    DirichletZero,
}

/// Cap regions attached to a corner of the domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// `B(corner, R/2) ∩ Ω_R`.
    Sector { vertex: usize },
    /// `B(corner, R/4) ∩ Ω_R`.
    Ball { vertex: usize },
}

impl Region {
    pub fn vertex(&self) -> usize {
        match *self {
            Region::Sector { vertex } | Region::Ball { vertex } => vertex,
        }
    }

    pub fn radius(&self, scale: f64) -> f64 {
        match self {
            Region::Sector { .. } => 0.5 * scale,
            Region::Ball { .. } => 0.25 * scale,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionCap {
    pub region: Region,
    /// Upper bound on the fraction of `∫|u|^q` inside the region.
    pub cap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DomainSpec {
    pub shape: Shape,
    /// `R`.
    pub scale: f64,
    /// Target mesh spacing `h`.
    pub spacing: f64,
    /// One condition per polygon edge, in corner order.
    pub edges: Vec<EdgeCondition>,
    pub caps: Vec<RegionCap>,
}

impl DomainSpec {
    /// All edges natural, no caps.
    pub fn new(shape: Shape, scale: f64, spacing: f64) -> Self {
        DomainSpec {
            shape,
            scale,
            spacing,
            edges: vec![EdgeCondition::Natural; shape.edge_count()],
            caps: Vec::new(),
        }
    }

    pub fn rectangle(aspect: f64, scale: f64, spacing: f64) -> Self {
        Self::new(Shape::Rectangle { aspect }, scale, spacing)
    }

    /// Strip with the default truncation `T = 4R`.
    pub fn strip(scale: f64, spacing: f64) -> Self {
        Self::new(Shape::Strip { half_height: 4.0 * scale }, scale, spacing)
    }

    pub fn with_edges(mut self, edges: &[EdgeCondition]) -> Self {
        self.edges = edges.to_vec();
        self
    }

    pub fn with_edge(mut self, edge: usize, condition: EdgeCondition) -> Self {
        self.edges[edge] = condition;
        self
    }

    pub fn dirichlet_everywhere(mut self) -> Self {
        self.edges.iter_mut().for_each(|e| *e = EdgeCondition::DirichletZero);
        self
    }

    pub fn with_cap(mut self, region: Region, cap: f64) -> Self {
        self.caps.push(RegionCap { region, cap });
        self
    }

    pub fn corners(&self) -> Vec<Point> {
        self.shape.corners(self.scale)
    }

    pub fn area(&self) -> f64 {
        self.shape.area(self.scale)
    }

    /// Checks ranges. Meshes need at least two cells along every side.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: alloc::string::String| Err(Error::InvalidSpec(msg));
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return bad(format!("scale R must be positive, got {}", self.scale));
        }
        if !(self.spacing > 0.0 && self.spacing.is_finite()) {
            return bad(format!("spacing h must be positive, got {}", self.spacing));
        }
        if self.spacing > 0.5 * self.scale {
            return bad(format!(
                "spacing h = {} too coarse for R = {} (need h <= R/2)",
                self.spacing, self.scale
            ));
        }
        match self.shape {
            Shape::Rectangle { aspect } if !(aspect >= 1.0 && aspect.is_finite()) => {
                return bad(format!("rectangle aspect must be >= 1, got {aspect}"));
            }
            Shape::Strip { half_height } if !(half_height > 0.0 && half_height.is_finite()) => {
                return bad(format!("strip half-height must be positive, got {half_height}"));
            }
            _ => {}
        }
        if self.edges.len() != self.shape.edge_count() {
            return bad(format!(
                "{} edge conditions given, shape {} has {} edges",
                self.edges.len(),
                self.shape.name(),
                self.shape.edge_count()
            ));
        }
        let ncorners = self.corners().len();
        for c in &self.caps {
            if c.region.vertex() >= ncorners {
                return bad(format!("cap region refers to corner {} of {}", c.region.vertex(), ncorners));
            }
            if !(c.cap > 0.0 && c.cap.is_finite()) {
                return bad(format!("cap value must be positive, got {}", c.cap));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundaryEdge {
    /// End points; equal for the end points of the interval.
    pub a: usize,
    pub b: usize,
    /// Polygon edge this piece lies on.
    pub edge: usize,
    pub condition: EdgeCondition,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Layout {
    Grid { nx: usize, ny: usize, x0: f64, y0: f64, hx: f64, hy: f64 },
    Subdivided { corners: [Point; 3], k: usize },
    Line { n: usize, x0: f64, hx: f64 },
}

/// Vertices and barycentric weights of the element containing a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Location {
    pub vertices: [usize; 3],
    pub weights: [f64; 3],
}

#[derive(Debug, Clone)]
pub struct Mesh {
    pub spec: DomainSpec,
    pub vertices: Vec<Point>,
    pub triangles: Vec<[usize; 3]>,
    /// 1D elements; only the interval uses them.
    pub segments: Vec<[usize; 2]>,
    pub boundary_edges: Vec<BoundaryEdge>,
    /// Lumped quadrature weights.
    pub vertex_weights: Vec<f64>,
    /// Vertices on a Dirichlet edge.
    pub dirichlet: Vec<bool>,
    pub(crate) tri_area: Vec<f64>,
    pub(crate) tri_grad: Vec<[[f64; 2]; 3]>,
    pub(crate) layout: Layout,
    bandwidth: usize,
}

/// Builds the structured triangulation of `spec`.
pub fn build_mesh(spec: &DomainSpec) -> Result<Mesh> {
    spec.validate()?;
    let h = spec.spacing;
    let mut vertices = Vec::new();
    let mut triangles = Vec::new();
    let mut segments = Vec::new();
    let mut boundary = Vec::new();
    let layout = match spec.shape {
        Shape::Rectangle { .. } | Shape::Strip { .. } => {
            let c = spec.corners();
            let (x0, y0) = (c[0][0], c[0][1]);
            let (w, ht) = (c[2][0] - x0, c[2][1] - y0);
            let nx = ceil_cells(w, h);
            let ny = ceil_cells(ht, h);
            let (hx, hy) = (w / nx as f64, ht / ny as f64);
            let id = |i: usize, j: usize| j * (nx + 1) + i;
            for j in 0..=ny {
                let y = if j == ny { c[2][1] } else { y0 + j as f64 * hy };
                for i in 0..=nx {
                    let x = if i == nx { c[2][0] } else { x0 + i as f64 * hx };
                    vertices.push([x, y]);
                }
            }
            for j in 0..ny {
                for i in 0..nx {
                    triangles.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
                    triangles.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
                }
            }
            let sides: [Vec<usize>; 4] = [
                (0..=nx).map(|i| id(i, 0)).collect(),
                (0..=ny).map(|j| id(nx, j)).collect(),
                (0..=nx).rev().map(|i| id(i, ny)).collect(),
                (0..=ny).rev().map(|j| id(0, j)).collect(),
            ];
            for (e, side) in sides.iter().enumerate() {
                push_chain(&mut boundary, side, e, spec.edges[e]);
            }
            Layout::Grid { nx, ny, x0, y0, hx, hy }
        }
        Shape::Interval => {
            let c = spec.corners();
            let n = ceil_cells(c[1][0] - c[0][0], h);
            let hx = (c[1][0] - c[0][0]) / n as f64;
            for i in 0..=n {
                let x = if i == n { c[1][0] } else { c[0][0] + i as f64 * hx };
                vertices.push([x, 0.0]);
            }
            segments.extend((0..n).map(|i| [i, i + 1]));
            boundary.push(BoundaryEdge { a: 0, b: 0, edge: 0, condition: spec.edges[0] });
            boundary.push(BoundaryEdge { a: n, b: n, edge: 1, condition: spec.edges[1] });
            Layout::Line { n, x0: c[0][0], hx }
        }
        _ => {
            let c = spec.corners();
            let corners = [c[0], c[1], c[2]];
            let longest = (0..3).map(|e| dist(c[e], c[(e + 1) % 3])).fold(0.0, f64::max);
            let k = ceil_cells(longest, h);
            for j in 0..=k {
                for i in 0..=(k - j) {
                    vertices.push(subdivision_point(&corners, k, i, j));
                }
            }
            for j in 0..k {
                for i in 0..(k - j) {
                    triangles.push([sub_id(k, i, j), sub_id(k, i + 1, j), sub_id(k, i, j + 1)]);
                    if i + j + 2 <= k {
                        triangles.push([sub_id(k, i + 1, j), sub_id(k, i + 1, j + 1), sub_id(k, i, j + 1)]);
                    }
                }
            }
            let sides: [Vec<usize>; 3] = [
                (0..=k).map(|i| sub_id(k, i, 0)).collect(),
                (0..=k).map(|j| sub_id(k, k - j, j)).collect(),
                (0..=k).rev().map(|j| sub_id(k, 0, j)).collect(),
            ];
            for (e, side) in sides.iter().enumerate() {
                push_chain(&mut boundary, side, e, spec.edges[e]);
            }
            Layout::Subdivided { corners, k }
        }
    };

    let nv = vertices.len();
    let mut weights = vec![0.0; nv];
    let mut tri_area = Vec::with_capacity(triangles.len());
    let mut tri_grad = Vec::with_capacity(triangles.len());
    for t in &triangles {
        let [p0, p1, p2] = [vertices[t[0]], vertices[t[1]], vertices[t[2]]];
        let twice = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
        if twice <= 0.0 {
            return Err(Error::InvalidSpec(format!("degenerate triangle {t:?}")));
        }
        let area = 0.5 * twice;
        tri_area.push(area);
        tri_grad.push([
            [(p1[1] - p2[1]) / twice, (p2[0] - p1[0]) / twice],
            [(p2[1] - p0[1]) / twice, (p0[0] - p2[0]) / twice],
            [(p0[1] - p1[1]) / twice, (p1[0] - p0[0]) / twice],
        ]);
        for &v in t {
            weights[v] += area / 3.0;
        }
    }
    // Trapezoid weights on grids: the barycentric split depends on the cell
    // diagonal at the corners and breaks mirror symmetry there.
    if let Layout::Grid { nx, ny, hx, hy, .. } = layout.clone() {
        weights.iter_mut().for_each(|w| *w = 0.0);
        let quarter = 0.25 * hx * hy;
        for j in 0..ny {
            for i in 0..nx {
                for (di, dj) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
                    weights[(j + dj) * (nx + 1) + i + di] += quarter;
                }
            }
        }
    }
    for s in &segments {
        let len = vertices[s[1]][0] - vertices[s[0]][0];
        weights[s[0]] += 0.5 * len;
        weights[s[1]] += 0.5 * len;
    }
    let mut dirichlet = vec![false; nv];
    for e in &boundary {
        if e.condition == EdgeCondition::DirichletZero {
            dirichlet[e.a] = true;
            dirichlet[e.b] = true;
        }
    }
    let bandwidth = triangles
        .iter()
        .map(|t| t.iter().max().unwrap() - t.iter().min().unwrap())
        .chain(segments.iter().map(|s| s[1] - s[0]))
        .max()
        .unwrap_or(0);
    Ok(Mesh {
        spec: spec.clone(),
        vertices,
        triangles,
        segments,
        boundary_edges: boundary,
        vertex_weights: weights,
        dirichlet,
        tri_area,
        tri_grad,
        layout,
        bandwidth,
    })
}

fn ceil_cells(length: f64, h: f64) -> usize {
    // absorb round-off so that length/h = 2.0000000001 gives 2 cells
    let n = length / h;
    let r = n.round();
    let n = if (n - r).abs() < 1e-9 * r.max(1.0) { r } else { n.ceil() };
    (n as usize).max(1)
}

fn dist(a: Point, b: Point) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

fn sub_id(k: usize, i: usize, j: usize) -> usize {
    j * (k + 1) - j * j.saturating_sub(1) / 2 + i
}

fn lerp(a: Point, b: Point, t: f64) -> Point {
    [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
}

fn subdivision_point(c: &[Point; 3], k: usize, i: usize, j: usize) -> Point {
    let kf = k as f64;
    // points on the sides are interpolated along that side only
    if j == 0 {
        return if i == k { c[1] } else { lerp(c[0], c[1], i as f64 / kf) };
    }
    if i == 0 {
        return if j == k { c[2] } else { lerp(c[0], c[2], j as f64 / kf) };
    }
    if i + j == k {
        return lerp(c[1], c[2], j as f64 / kf);
    }
    let (s, t) = (i as f64 / kf, j as f64 / kf);
    [
        c[0][0] + s * (c[1][0] - c[0][0]) + t * (c[2][0] - c[0][0]),
        c[0][1] + s * (c[1][1] - c[0][1]) + t * (c[2][1] - c[0][1]),
    ]
}

fn push_chain(out: &mut Vec<BoundaryEdge>, chain: &[usize], edge: usize, condition: EdgeCondition) {
    out.extend(chain.windows(2).map(|w| BoundaryEdge { a: w[0], b: w[1], edge, condition }));
}

impl Mesh {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    /// Largest index distance between two vertices of one element.
    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    pub fn corners(&self) -> Vec<Point> {
        self.spec.corners()
    }

    pub fn total_weight(&self) -> f64 {
        self.vertex_weights.iter().sum()
    }

    pub fn is_one_dimensional(&self) -> bool {
        matches!(self.layout, Layout::Line { .. })
    }

    /// Diameter of the domain.
    pub fn diameter(&self) -> f64 {
        let c = self.corners();
        let mut d: f64 = 0.0;
        for a in &c {
            for b in &c {
                d = d.max(dist(*a, *b));
            }
        }
        d
    }

    /// Vertices whose distance to `center` is at most `radius`.
    pub fn vertices_within(&self, center: Point, radius: f64) -> impl Iterator<Item = usize> + '_ {
        let r2 = radius * radius;
        self.vertices.iter().enumerate().filter_map(move |(i, p)| {
            let d2 = (p[0] - center[0]).powi(2) + (p[1] - center[1]).powi(2);
            (d2 <= r2).then_some(i)
        })
    }

    /// Element containing `p`, or `None` when `p` is outside the domain by
    /// more than a relative `1e-9`.
    pub fn locate(&self, p: Point) -> Option<Location> {
        let tol = 1e-9;
        match self.layout {
            Layout::Grid { nx, ny, x0, y0, hx, hy } => {
                let sx = (p[0] - x0) / hx;
                let sy = (p[1] - y0) / hy;
                let (fnx, fny) = (nx as f64, ny as f64);
                if sx < -tol * fnx || sy < -tol * fny || sx > fnx * (1.0 + tol) || sy > fny * (1.0 + tol) {
                    return None;
                }
                let sx = sx.clamp(0.0, fnx);
                let sy = sy.clamp(0.0, fny);
                let i = (sx.floor() as usize).min(nx - 1);
                let j = (sy.floor() as usize).min(ny - 1);
                let (fx, fy) = (sx - i as f64, sy - j as f64);
                let id = |i: usize, j: usize| j * (nx + 1) + i;
                Some(if fx >= fy {
                    Location {
                        vertices: [id(i, j), id(i + 1, j), id(i + 1, j + 1)],
                        weights: [1.0 - fx, fx - fy, fy],
                    }
                } else {
                    Location {
                        vertices: [id(i, j), id(i + 1, j + 1), id(i, j + 1)],
                        weights: [1.0 - fy, fx, fy - fx],
                    }
                })
            }
            Layout::Subdivided { corners: c, k } => {
                let (ax, ay) = (c[1][0] - c[0][0], c[1][1] - c[0][1]);
                let (bx, by) = (c[2][0] - c[0][0], c[2][1] - c[0][1]);
                let det = ax * by - ay * bx;
                let (px, py) = (p[0] - c[0][0], p[1] - c[0][1]);
                let s = (px * by - py * bx) / det;
                let t = (ax * py - ay * px) / det;
                if s < -tol || t < -tol || s + t > 1.0 + tol {
                    return None;
                }
                let kf = k as f64;
                let mut s = s.max(0.0) * kf;
                let mut t = t.max(0.0) * kf;
                if s + t > kf {
                    let excess = (s + t - kf) / 2.0;
                    s -= excess;
                    t -= excess;
                    s = s.max(0.0);
                    t = t.max(0.0);
                }
                let mut i = (s.floor() as usize).min(k - 1);
                let mut j = (t.floor() as usize).min(k - 1);
                while i + j > k - 1 {
                    if i > 0 {
                        i -= 1;
                    } else {
                        j -= 1;
                    }
                }
                let (fs, ft) = (s - i as f64, t - j as f64);
                Some(if fs + ft <= 1.0 || i + j == k - 1 {
                    let w0 = (1.0 - fs - ft).max(0.0);
                    let norm = w0 + fs + ft;
                    Location {
                        vertices: [sub_id(k, i, j), sub_id(k, i + 1, j), sub_id(k, i, j + 1)],
                        weights: [w0 / norm, fs / norm, ft / norm],
                    }
                } else {
                    Location {
                        vertices: [sub_id(k, i + 1, j), sub_id(k, i + 1, j + 1), sub_id(k, i, j + 1)],
                        weights: [1.0 - ft, fs + ft - 1.0, 1.0 - fs],
                    }
                })
            }
            Layout::Line { n, x0, hx } => {
                let s = (p[0] - x0) / hx;
                let fnn = n as f64;
                if s < -tol * fnn || s > fnn * (1.0 + tol) {
                    return None;
                }
                let s = s.clamp(0.0, fnn);
                let i = (s.floor() as usize).min(n - 1);
                let f = s - i as f64;
                Some(Location { vertices: [i, i + 1, i + 1], weights: [1.0 - f, f, 0.0] })
            }
        }
    }

    /// Piecewise-linear interpolation of nodal `values` at `p`.
    pub fn interpolate(&self, values: &[f64], p: Point) -> Option<f64> {
        self.locate(p).map(|loc| {
            loc.vertices.iter().zip(loc.weights).map(|(&v, w)| w * values[v]).sum()
        })
    }
}

/// Nodal values of a scalar function on a [`Mesh`].
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    values: Vec<f64>,
}

impl Field {
    pub fn new(values: Vec<f64>) -> Self {
        Field { values }
    }

    pub fn zeros(mesh: &Mesh) -> Self {
        Field { values: vec![0.0; mesh.vertex_count()] }
    }

    pub fn constant(mesh: &Mesh, c: f64) -> Self {
        Field { values: vec![c; mesh.vertex_count()] }
    }

    pub fn from_fn(mesh: &Mesh, f: impl Fn(Point) -> f64) -> Self {
        Field { values: mesh.vertices.iter().map(|&p| f(p)).collect() }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn scaled(&self, c: f64) -> Field {
        Field { values: self.values.iter().map(|v| c * v).collect() }
    }

    /// Zeroes every Dirichlet vertex.
    pub fn apply_dirichlet(&mut self, mesh: &Mesh) {
        for (v, &d) in self.values.iter_mut().zip(&mesh.dirichlet) {
            if d {
                *v = 0.0;
            }
        }
    }

    pub fn is_boundary_conforming(&self, mesh: &Mesh) -> bool {
        self.values.iter().zip(&mesh.dirichlet).all(|(v, &d)| !d || *v == 0.0)
    }

    /// Sup norm over vertices not on a Dirichlet edge.
    pub fn free_sup_norm(&self, mesh: &Mesh) -> f64 {
        self.values
            .iter()
            .zip(&mesh.dirichlet)
            .filter(|(_, &d)| !d)
            .fold(0.0, |m, (v, _)| m.max(v.abs()))
    }
}

impl Deref for Field {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.values
    }
}

impl DerefMut for Field {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }
}
