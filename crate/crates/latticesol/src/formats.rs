//! Plain-text artifacts: `FIELDv1` nodal fields, `GRIDv1` sampled grids and
//! whitespace-separated column files.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use latticesol_core::grid::Grid;
use latticesol_core::mesh::Point;
use latticesol_core::{DomainSpec, EdgeCondition, Mesh, Shape};

use crate::error::{CliError, Result};

/// Contents of a `FIELDv1` file.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldFile {
    pub shape: String,
    pub scale: f64,
    /// Aspect ratio for rectangles, `T/R` for strips, 1 otherwise.
    pub aspect: f64,
    pub spacing: f64,
    pub vertices: Vec<Point>,
    pub values: Vec<f64>,
    pub triangles: Vec<[usize; 3]>,
}

fn shape_aspect(shape: &Shape, scale: f64) -> f64 {
    match *shape {
        Shape::Rectangle { aspect } => aspect,
        Shape::Strip { half_height } => half_height / scale,
        _ => 1.0,
    }
}

pub fn shape_from_name(name: &str, aspect: f64, scale: f64) -> Option<Shape> {
    Some(match name {
        "rect" => Shape::Rectangle { aspect },
        "tri" => Shape::EquilateralTriangle,
        "tri3060" => Shape::RightTriangle3060,
        "tri4545" => Shape::RightTriangle4545,
        "strip" => Shape::Strip { half_height: aspect * scale },
        "interval" => Shape::Interval,
        _ => return None,
    })
}

impl FieldFile {
    pub fn from_mesh(mesh: &Mesh, values: &[f64]) -> Self {
        let spec = &mesh.spec;
        FieldFile {
            shape: spec.shape.name().to_owned(),
            scale: spec.scale,
            aspect: shape_aspect(&spec.shape, spec.scale),
            spacing: spec.spacing,
            vertices: mesh.vertices.clone(),
            values: values.to_vec(),
            triangles: mesh.triangles.clone(),
        }
    }

    /// Domain the file was written from, with the given edge conditions
    /// (all natural when `edges` is `None`).
    pub fn domain(&self, edges: Option<&[EdgeCondition]>) -> Option<DomainSpec> {
        let shape = shape_from_name(&self.shape, self.aspect, self.scale)?;
        let spec = DomainSpec::new(shape, self.scale, self.spacing);
        Some(match edges {
            Some(e) => spec.with_edges(e),
            None => spec,
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str("FIELDv1\n");
        let _ = writeln!(s, "shape={} R={} a={} h={}", self.shape, self.scale, self.aspect, self.spacing);
        let _ = writeln!(s, "nv={} nt={}", self.vertices.len(), self.triangles.len());
        for (p, v) in self.vertices.iter().zip(&self.values) {
            let _ = writeln!(s, "{} {} {}", p[0], p[1], v);
        }
        for t in &self.triangles {
            let _ = writeln!(s, "{} {} {}", t[0], t[1], t[2]);
        }
        s
    }

    pub fn parse(text: &str) -> std::result::Result<Self, (usize, String)> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let mut next = |what: &str| lines.next().ok_or((0, format!("unexpected end of file, expected {what}")));
        let (n, magic) = next("header")?;
        if magic.trim() != "FIELDv1" {
            return Err((n, format!("expected `FIELDv1`, found `{}`", magic.trim())));
        }
        let (n, meta) = next("shape line")?;
        let meta = key_values(meta, &["shape", "R", "a", "h"]).map_err(|m| (n, m))?;
        let num = |i: usize, key: &str| meta[i].parse::<f64>().map_err(|_| (n, format!("`{key}` is not a number")));
        let (scale, aspect, spacing) = (num(1, "R")?, num(2, "a")?, num(3, "h")?);
        let (n, counts) = next("count line")?;
        let counts = key_values(counts, &["nv", "nt"]).map_err(|m| (n, m))?;
        let count = |i: usize, key: &str| counts[i].parse::<usize>().map_err(|_| (n, format!("`{key}` is not a count")));
        let (nv, nt) = (count(0, "nv")?, count(1, "nt")?);
        let mut vertices = Vec::with_capacity(nv);
        let mut values = Vec::with_capacity(nv);
        for _ in 0..nv {
            let (n, line) = next("vertex line")?;
            let v: [f64; 3] = numbers(line).ok_or((n, "expected `x y value`".to_owned()))?;
            vertices.push([v[0], v[1]]);
            values.push(v[2]);
        }
        let mut triangles = Vec::with_capacity(nt);
        for _ in 0..nt {
            let (n, line) = next("triangle line")?;
            let t: [usize; 3] = numbers(line).ok_or((n, "expected `i j k`".to_owned()))?;
            if t.iter().any(|&i| i >= nv) {
                return Err((n, format!("vertex index out of range (nv={nv})")));
            }
            triangles.push(t);
        }
        Ok(FieldFile { shape: meta[0].clone(), scale, aspect, spacing, vertices, values, triangles })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_text(path, &self.to_text())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = read_text(path)?;
        Self::parse(&text).map_err(|(line, message)| CliError::Format { path: path.to_owned(), line, message })
    }
}

/// `key=value` pairs in the given order.
fn key_values(line: &str, keys: &[&str]) -> std::result::Result<Vec<String>, String> {
    let items: Vec<&str> = line.split_whitespace().collect();
    if items.len() != keys.len() {
        return Err(format!("expected {} fields `{}`", keys.len(), keys.join("= ") + "="));
    }
    items
        .iter()
        .zip(keys)
        .map(|(item, key)| match item.split_once('=') {
            Some((k, v)) if k == *key => Ok(v.to_owned()),
            _ => Err(format!("expected `{key}=`, found `{item}`")),
        })
        .collect()
}

fn numbers<T: std::str::FromStr + Default + Copy, const N: usize>(line: &str) -> Option<[T; N]> {
    let mut out = [T::default(); N];
    let mut it = line.split_whitespace();
    for slot in &mut out {
        *slot = it.next()?.parse().ok()?;
    }
    it.next().is_none().then_some(out)
}

pub fn grid_to_text(grid: &Grid) -> String {
    let mut s = String::new();
    s.push_str("GRIDv1\n");
    let _ = writeln!(s, "nx={} ny={} hs={} x0={} y0={}", grid.nx, grid.ny, grid.hs, grid.x0, grid.y0);
    for row in grid.values.chunks(grid.nx) {
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            let _ = write!(s, "{v}");
        }
        s.push('\n');
    }
    s
}

pub fn parse_grid(text: &str) -> std::result::Result<Grid, (usize, String)> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (n, magic) = lines.next().ok_or((0, "empty file".to_owned()))?;
    if magic.trim() != "GRIDv1" {
        return Err((n, format!("expected `GRIDv1`, found `{}`", magic.trim())));
    }
    let (n, meta) = lines.next().ok_or((0, "missing size line".to_owned()))?;
    let meta = key_values(meta, &["nx", "ny", "hs", "x0", "y0"]).map_err(|m| (n, m))?;
    let bad = |key: &str| (n, format!("`{key}` is malformed"));
    let nx: usize = meta[0].parse().map_err(|_| bad("nx"))?;
    let ny: usize = meta[1].parse().map_err(|_| bad("ny"))?;
    let hs: f64 = meta[2].parse().map_err(|_| bad("hs"))?;
    let x0: f64 = meta[3].parse().map_err(|_| bad("x0"))?;
    let y0: f64 = meta[4].parse().map_err(|_| bad("y0"))?;
    let mut values = Vec::with_capacity(nx * ny);
    for _ in 0..ny {
        let (n, line) = lines.next().ok_or((0, "too few rows".to_owned()))?;
        let row: Vec<f64> = line
            .split_whitespace()
            .map(|t| t.parse())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| (n, "non-numeric value".to_owned()))?;
        if row.len() != nx {
            return Err((n, format!("expected {nx} values, found {}", row.len())));
        }
        values.extend(row);
    }
    Grid::new(nx, ny, hs, x0, y0, values).map_err(|e| (2, e.to_string()))
}

pub fn write_grid(path: &Path, grid: &Grid) -> Result<()> {
    write_text(path, &grid_to_text(grid))
}

pub fn read_grid(path: &Path) -> Result<Grid> {
    let text = read_text(path)?;
    parse_grid(&text).map_err(|(line, message)| CliError::Format { path: path.to_owned(), line, message })
}

/// Rows of numbers under a `#`-prefixed header line.
pub fn columns_to_text<const N: usize>(header: [&str; N], rows: impl IntoIterator<Item = [f64; N]>) -> String {
    let mut s = format!("# {}\n", header.join(" "));
    for row in rows {
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            let _ = write!(s, "{v}");
        }
        s.push('\n');
    }
    s
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })
}
