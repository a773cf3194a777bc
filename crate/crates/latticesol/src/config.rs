//! Command-line flags. Every flag can also come from a JSON config file
//! whose keys are the long flag names; flags given on the command line win.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{CliError, Result};
use crate::formats::read_text;

#[derive(Debug, Parser)]
#[command(name = "latticesol", version, about = "Entire solutions of Δu − u + u³ = 0 from fundamental domains")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Minimize the energy quotient on a fundamental domain.
    Solve(SolveArgs),
    /// Extend a solved field by reflections and check the residual.
    Tile(TileArgs),
    /// Radial solutions with a given number of nodes by shooting.
    Radial(RadialArgs),
    /// The three-mode reduction for y-periodic solutions.
    Galerkin(GalerkinArgs),
    /// λ(R) over a list of domain scales.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct CommonArgs {
    /// JSON file supplying defaults for any flag of the command
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Leave wall-clock timings out of reports so reruns are byte-identical
    #[arg(long)]
    pub deterministic: bool,
    /// Also write a gnuplot script for the main data artifact
    #[arg(long)]
    pub gnuplot_script: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct DomainArgs {
    /// rect, tri, tri3060, tri4545, strip or interval
    #[arg(long)]
    pub domain: Option<String>,
    /// Domain scale R
    #[arg(long = "R")]
    #[serde(rename = "R")]
    pub scale: Option<f64>,
    /// Rectangle aspect ratio a ≥ 1
    #[arg(long)]
    pub aspect: Option<f64>,
    /// Strip half-height T (default 4R)
    #[arg(long = "T")]
    #[serde(rename = "T")]
    pub half_height: Option<f64>,
    /// Mesh spacing
    #[arg(long)]
    pub h: Option<f64>,
    /// Per-edge conditions in corner order, `n` natural or `d` Dirichlet, e.g. `n,d,n`
    #[arg(long)]
    pub edges: Option<String>,
    /// Exponents of the quotient
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
    /// corner[:i], edge[:i], centroid or `x,y`
    #[arg(long)]
    pub seed: Option<String>,
    /// Width of the seed bump
    #[arg(long)]
    pub width: Option<f64>,
    /// Stationarity target relative to λ
    #[arg(long)]
    pub grad_tol: Option<f64>,
    #[arg(long)]
    pub max_iterations: Option<usize>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct SolveArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub domain: DomainArgs,
    /// Cap on a corner region, `sector<V>:<cap>` or `ball<V>:<cap>`; V is a
    /// corner index, or Z, X, Y on tri3060. Repeatable
    #[arg(long)]
    pub constraint: Option<Vec<String>>,
    /// FIELDv1 output for the rescaled solution
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct TileArgs {
    /// FIELDv1 input
    #[arg(long)]
    pub field: Option<PathBuf>,
    /// Tiling pattern name
    #[arg(long)]
    pub pattern: Option<String>,
    /// Edge conditions of the solve that produced the field
    #[arg(long)]
    pub edges: Option<String>,
    /// Number of periods along each lattice vector, `n1,n2`
    #[arg(long)]
    pub copies: Option<String>,
    /// Sample spacing (default: the mesh spacing)
    #[arg(long)]
    pub hs: Option<f64>,
    /// GRIDv1 output
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct RadialArgs {
    /// Space dimension
    #[arg(long)]
    pub n: Option<u32>,
    /// Number of interior zeros
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Amplitude bracket `lo,hi`; scanned for when absent
    #[arg(long)]
    pub bracket: Option<String>,
    #[arg(long)]
    pub r_max: Option<f64>,
    #[arg(long)]
    pub step: Option<f64>,
    /// Two-column profile output
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct GalerkinArgs {
    /// Period in y
    #[arg(long)]
    pub l: Option<f64>,
    /// integrate, family, reconstruct or eigen
    #[arg(long)]
    pub mode: Option<String>,
    /// Rotation angle of the family orbit
    #[arg(long)]
    pub theta: Option<f64>,
    /// `x0,x1`
    #[arg(long)]
    pub x_span: Option<String>,
    #[arg(long)]
    pub step: Option<f64>,
    /// Initial state `U0,p0,U1,p1,V1,q1` (default: planar homoclinic at x0)
    #[arg(long)]
    pub state: Option<String>,
    /// Orbit to reconstruct: planar or family
    #[arg(long)]
    pub source: Option<String>,
    /// `x0,y0,x1,y1` (default: [−5,5] × [0,l])
    #[arg(long)]
    pub window: Option<String>,
    #[arg(long)]
    pub hs: Option<f64>,
    /// Half-length of the eigenvalue interval
    #[arg(long = "L")]
    #[serde(rename = "L")]
    pub half_length: Option<f64>,
    /// Spacing of the eigenvalue grid
    #[arg(long)]
    pub eigen_h: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct SweepArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub domain: DomainArgs,
    /// Comma-separated scales
    #[arg(long)]
    pub scales: Option<String>,
    /// Two-column `R lambda` output
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,
}

/// Overlays the flags given on the command line onto the config file named
/// by `--config`, if any.
pub fn merge_with_file<T: Serialize + DeserializeOwned + Default + Clone>(flags: &T, config: Option<&Path>) -> Result<T> {
    let Some(path) = config else {
        return Ok(flags.clone());
    };
    let text = read_text(path)?;
    let file: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::config("<file>", format!("{}: {e}", path.display())))?;
    let Value::Object(mut merged) = file else {
        return Err(CliError::config("<file>", format!("{}: expected a JSON object", path.display())));
    };
    let allowed = object(&T::default());
    if let Some(key) = merged.keys().find(|k| !allowed.contains_key(*k)) {
        return Err(CliError::config(key, "unknown key"));
    }
    for (k, v) in object(flags) {
        if !(v.is_null() || v == Value::Bool(false)) {
            merged.insert(k, v);
        }
    }
    match serde_json::from_value(Value::Object(merged.clone())) {
        Ok(v) => Ok(v),
        Err(e) => {
            // flattened structs lose the error path; find the key by elimination
            let key = merged
                .iter()
                .find(|(k, v)| {
                    let single = Map::from_iter([((*k).clone(), (*v).clone())]);
                    serde_json::from_value::<T>(Value::Object(single)).is_err()
                })
                .map_or("<file>".to_owned(), |(k, _)| k.clone());
            Err(CliError::config(&key, e.to_string()))
        }
    }
}

fn object<T: Serialize>(value: &T) -> Map<String, Value> {
    match serde_json::to_value(value) {
        Ok(Value::Object(m)) => m,
        _ => Map::new(),
    }
}
