//! One function per subcommand. Each writes its data artifact and a JSON
//! report embedding the resolved configuration.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::time::Instant;

use latticesol_core::analysis::concentration_report;
use latticesol_core::galerkin::{
    self, anzatz_residual, closed_form_residual, family_homoclinic, hamiltonian, integral_K, planar_homoclinic,
    sample_breather, wall_linearization_eigen, BreatherSource, GalerkinParams, GalerkinState, Orbit, Trajectory,
};
use latticesol_core::grid::Window;
use latticesol_core::mesh::{build_mesh, hex_vertex};
use latticesol_core::minimize::{
    lambda_sweep, minimize_quotient, scale_to_solution, sweep_bounds, MinimizeResult, SeedLocation, SeedSpec,
    ToleranceSet,
};
use latticesol_core::radial::{bracket_scan, find_k_node_solution, ShootOptions};
use latticesol_core::tiling::{
    check_sign_consistency, make_tiling, sample_entire, seam_split_residual, tiled_residual, TilingPattern,
};
use latticesol_core::{DomainSpec, EdgeCondition, Error, Mesh, QuotientParams, Region, Shape};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{
    merge_with_file, Command, CommonArgs, DomainArgs, GalerkinArgs, RadialArgs, SolveArgs, SweepArgs, TileArgs,
};
use crate::error::{CliError, Result};
use crate::formats::{columns_to_text, write_grid, write_text, FieldFile};

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Solve(a) => solve(a),
        Command::Tile(a) => tile(a),
        Command::Radial(a) => radial(a),
        Command::Galerkin(a) => galerkin_cmd(a),
        Command::Sweep(a) => sweep(a),
    }
}

fn required<T: Clone>(value: &Option<T>, key: &str) -> Result<T> {
    value.clone().ok_or_else(|| CliError::config(key, "missing"))
}

fn numbers(text: &str, key: &str, count: Option<usize>) -> Result<Vec<f64>> {
    let v: Vec<f64> = text
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| CliError::config(key, format!("`{text}` is not a comma-separated list of numbers")))?;
    match count {
        Some(n) if v.len() != n => Err(CliError::config(key, format!("expected {n} numbers, got {}", v.len()))),
        _ => Ok(v),
    }
}

fn parse_edges(text: &str) -> Result<Vec<EdgeCondition>> {
    text.split(',')
        .map(|t| match t.trim() {
            "n" | "natural" => Ok(EdgeCondition::Natural),
            "d" | "dirichlet" => Ok(EdgeCondition::DirichletZero),
            other => Err(CliError::config("edges", format!("unknown edge condition `{other}` (use n or d)"))),
        })
        .collect()
}

fn corner_index(text: &str, shape: &Shape, key: &str) -> Result<usize> {
    match (text, shape) {
        ("Z", Shape::RightTriangle3060) => Ok(hex_vertex::Z),
        ("X", Shape::RightTriangle3060) => Ok(hex_vertex::X),
        ("Y", Shape::RightTriangle3060) => Ok(hex_vertex::Y),
        _ => text.parse().map_err(|_| CliError::config(key, format!("`{text}` is not a corner of {}", shape.name()))),
    }
}

fn parse_constraint(text: &str, shape: &Shape) -> Result<(Region, f64)> {
    let bad = || CliError::config("constraint", format!("`{text}` is not of the form sector<V>:<cap> or ball<V>:<cap>"));
    let (region, cap) = text.split_once(':').ok_or_else(bad)?;
    let cap: f64 = cap.parse().map_err(|_| bad())?;
    let region = if let Some(v) = region.strip_prefix("sector") {
        Region::Sector { vertex: corner_index(v, shape, "constraint")? }
    } else if let Some(v) = region.strip_prefix("ball") {
        Region::Ball { vertex: corner_index(v, shape, "constraint")? }
    } else {
        return Err(bad());
    };
    Ok((region, cap))
}

fn parse_seed(text: &str, width: f64) -> Result<SeedSpec> {
    let index = |s: Option<&str>| -> Result<usize> {
        s.map_or(Ok(0), |i| i.parse().map_err(|_| CliError::config("seed", format!("bad index in `{text}`"))))
    };
    let (kind, arg) = match text.split_once(':') {
        Some((k, a)) => (k, Some(a)),
        None => (text, None),
    };
    let location = match kind {
        "corner" => SeedLocation::Corner(index(arg)?),
        "edge" => SeedLocation::EdgeMidpoint(index(arg)?),
        "centroid" => SeedLocation::Centroid,
        _ => {
            let v = numbers(text, "seed", Some(2))?;
            SeedLocation::Explicit([v[0], v[1]])
        }
    };
    Ok(SeedSpec { location, width })
}

fn region_name(region: &Region) -> String {
    match region {
        Region::Sector { vertex } => format!("sector:{vertex}"),
        Region::Ball { vertex } => format!("ball:{vertex}"),
    }
}

/// Flag values after merging with the config file and filling defaults.
fn resolve_domain(d: &mut DomainArgs) {
    d.domain.get_or_insert_with(|| "rect".into());
    let r = *d.scale.get_or_insert(10.0);
    d.aspect.get_or_insert(1.0);
    if d.domain.as_deref() == Some("strip") {
        d.half_height.get_or_insert(4.0 * r);
    }
    d.h.get_or_insert(0.25);
    d.p.get_or_insert(2.0);
    d.q.get_or_insert(4.0);
    d.seed.get_or_insert_with(|| "corner:0".into());
    d.width.get_or_insert(1.0);
    let tol = ToleranceSet::default();
    d.grad_tol.get_or_insert(tol.grad);
    d.max_iterations.get_or_insert(tol.max_iterations);
}

struct Problem {
    spec: DomainSpec,
    params: QuotientParams,
    seed: SeedSpec,
    tol: ToleranceSet,
}

fn problem(d: &DomainArgs) -> Result<Problem> {
    let r = required(&d.scale, "R")?;
    let name = required(&d.domain, "domain")?;
    let shape = match name.as_str() {
        "rect" => Shape::Rectangle { aspect: required(&d.aspect, "aspect")? },
        "tri" => Shape::EquilateralTriangle,
        "tri3060" => Shape::RightTriangle3060,
        "tri4545" => Shape::RightTriangle4545,
        "strip" => Shape::Strip { half_height: d.half_height.unwrap_or(4.0 * r) },
        "interval" => Shape::Interval,
        other => {
            return Err(CliError::config(
                "domain",
                format!("unknown domain `{other}` (rect, tri, tri3060, tri4545, strip, interval)"),
            ))
        }
    };
    let mut spec = DomainSpec::new(shape, r, required(&d.h, "h")?);
    if let Some(e) = &d.edges {
        let edges = parse_edges(e)?;
        if edges.len() != shape.edge_count() {
            return Err(CliError::config(
                "edges",
                format!("{} conditions given, {} has {} edges", edges.len(), name, shape.edge_count()),
            ));
        }
        spec = spec.with_edges(&edges);
    }
    let dim = if shape == Shape::Interval { 1 } else { 2 };
    let params = QuotientParams::new(required(&d.p, "p")?, required(&d.q, "q")?, dim)?;
    let seed = parse_seed(&required(&d.seed, "seed")?, required(&d.width, "width")?)?;
    let tol = ToleranceSet {
        grad: required(&d.grad_tol, "grad-tol")?,
        max_iterations: required(&d.max_iterations, "max-iterations")?,
        ..ToleranceSet::default()
    };
    Ok(Problem { spec, params, seed, tol })
}

fn write_report(path: &Path, report: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(report).expect("reports serialize");
    text.push('\n');
    write_text(path, &text)
}

fn finish_report(mut report: Value, config: &impl Serialize, common: &CommonArgs, started: Instant) -> Value {
    report["config"] = serde_json::to_value(config).expect("configs serialize");
    if !common.deterministic {
        report["elapsed_seconds"] = json!(started.elapsed().as_secs_f64());
    }
    report
}

enum Plot<'a> {
    Field { nv: usize },
    Grid(&'a latticesol_core::grid::Grid),
    Columns { x: &'a str, y: &'a [&'a str] },
}

fn gnuplot(common: &CommonArgs, data: &Path, plot: Plot<'_>) -> Result<()> {
    let Some(script) = &common.gnuplot_script else {
        return Ok(());
    };
    let data = data.display();
    let body = match plot {
        Plot::Field { nv } => format!(
            "set datafile commentschars \"#Fsn\"\nset view map\nset size ratio -1\n\
             splot '{data}' every ::0::{} using 1:2:3 with points pointtype 5 pointsize 0.4 palette notitle\n",
            nv.saturating_sub(1)
        ),
        Plot::Grid(g) => format!(
            "set datafile commentschars \"#Gn\"\nset size ratio -1\n\
             plot '{data}' matrix using ({x0}+$1*{hs}):({y0}+$2*{hs}):3 with image notitle\n",
            x0 = g.x0,
            y0 = g.y0,
            hs = g.hs
        ),
        Plot::Columns { x, y } => {
            let curves: Vec<String> =
                y.iter().enumerate().map(|(i, name)| format!("'{data}' using 1:{} with lines title '{name}'", i + 2)).collect();
            format!("set xlabel '{x}'\nplot {}\n", curves.join(", \\\n     "))
        }
    };
    write_text(script, &body)
}

fn out_path(p: &Option<PathBuf>, default: &str) -> PathBuf {
    p.clone().unwrap_or_else(|| PathBuf::from(default))
}

fn minimize_report(res: &MinimizeResult, mesh: &Mesh, params: &QuotientParams) -> Value {
    let constraints: Vec<Value> = res
        .constraints
        .iter()
        .map(|c| json!({"region": region_name(&c.region), "value": c.value, "cap": c.cap, "active": c.active}))
        .collect();
    let concentration = match concentration_report(mesh, &res.u, params.q) {
        Ok(c) => json!({
            "center": c.center, "rho99": c.rho99, "weight": c.weight_hat, "dominant": c.dominant, "tie": c.tie,
        }),
        Err(e) => json!({"error": e.to_string()}),
    };
    json!({
        "lambda": res.lambda,
        "iterations": res.iterations,
        "newton_steps": res.newton_steps,
        "grad_sup": res.grad_sup,
        "newton_residual_sup": res.newton_residual_sup,
        "constraints": constraints,
        "concentration": concentration,
        "solution_scale": res.lambda.powf(1.0 / (params.q - params.p)),
    })
}

fn solve(flags: SolveArgs) -> Result<()> {
    let started = Instant::now();
    let mut a = merge_with_file(&flags, flags.common.config.as_deref())?;
    resolve_domain(&mut a.domain);
    a.out.get_or_insert_with(|| "solution.field".into());
    a.report.get_or_insert_with(|| "report.json".into());
    let Problem { mut spec, params, seed, tol } = problem(&a.domain)?;
    for c in a.constraint.iter().flatten() {
        let (region, cap) = parse_constraint(c, &spec.shape)?;
        spec = spec.with_cap(region, cap);
    }
    let mesh = build_mesh(&spec)?;
    let (out, report_path) = (out_path(&a.out, ""), out_path(&a.report, ""));
    let (res, status) = match minimize_quotient(&mesh, &params, &seed, &spec.caps, &tol) {
        Ok(res) => (res, Ok(())),
        Err(Error::BudgetExceeded(best)) => {
            let msg = format!("solve did not converge within {} iterations; best iterate written", tol.max_iterations);
            (*best, Err(CliError::Convergence(msg)))
        }
        Err(e) => return Err(e.into()),
    };
    FieldFile::from_mesh(&mesh, &scale_to_solution(&res, &params)).write(&out)?;
    let mut report = minimize_report(&res, &mesh, &params);
    report["command"] = json!("solve");
    report["status"] = json!(if status.is_ok() { "converged" } else { "budget_exceeded" });
    report["field"] = json!(out);
    write_report(&report_path, &finish_report(report, &a, &a.common, started))?;
    gnuplot(&a.common, &out, Plot::Field { nv: mesh.vertex_count() })?;
    status
}

fn lattice_window(periods: &[[f64; 2]], copies: [f64; 2], spec: &DomainSpec) -> Window {
    let corners = spec.corners();
    let lo = |k: usize| corners.iter().map(|c| c[k]).fold(f64::INFINITY, f64::min);
    let hi = |k: usize| corners.iter().map(|c| c[k]).fold(f64::NEG_INFINITY, f64::max);
    match periods {
        [] => Window::new(lo(0), lo(1), hi(0), hi(1)),
        [p] => Window::new(0.0, lo(1), copies[0] * p[0], hi(1)),
        [p1, p2, ..] => {
            let pts = [[0.0, 0.0], [copies[0] * p1[0], copies[0] * p1[1]], [copies[1] * p2[0], copies[1] * p2[1]], [
                copies[0] * p1[0] + copies[1] * p2[0],
                copies[0] * p1[1] + copies[1] * p2[1],
            ]];
            let ext = |k: usize, f: fn(f64, f64) -> f64, init: f64| pts.iter().map(|p| p[k]).fold(init, f);
            Window::new(
                ext(0, f64::min, f64::INFINITY),
                ext(1, f64::min, f64::INFINITY),
                ext(0, f64::max, f64::NEG_INFINITY),
                ext(1, f64::max, f64::NEG_INFINITY),
            )
        }
    }
}

fn tile(flags: TileArgs) -> Result<()> {
    let started = Instant::now();
    let mut a = merge_with_file(&flags, flags.common.config.as_deref())?;
    a.copies.get_or_insert_with(|| "2,2".into());
    a.out.get_or_insert_with(|| "tiled.grid".into());
    a.report.get_or_insert_with(|| "tile.json".into());
    let field_path = required(&a.field, "field")?;
    let pattern: TilingPattern = required(&a.pattern, "pattern")?.parse().map_err(|e: Error| CliError::config("pattern", e.to_string()))?;
    let field = FieldFile::read(&field_path)?;
    let edges = a.edges.as_deref().map(parse_edges).transpose()?;
    let domain = field.domain(edges.as_deref()).ok_or_else(|| CliError::Format {
        path: field_path.clone(),
        line: 2,
        message: format!("unknown shape `{}`", field.shape),
    })?;
    if domain.edges.len() != domain.shape.edge_count() {
        return Err(CliError::config("edges", format!("{} has {} edges", field.shape, domain.shape.edge_count())));
    }
    let tiling = make_tiling(&domain, pattern)?;
    let mesh = build_mesh(&domain)?;
    let matches = mesh.vertex_count() == field.vertices.len()
        && mesh.vertices.iter().zip(&field.vertices).all(|(p, q)| (p[0] - q[0]).abs().max((p[1] - q[1]).abs()) <= 1e-9 * domain.scale);
    if !matches {
        return Err(CliError::Format { path: field_path, line: 3, message: "vertices do not match the mesh of the header".into() });
    }
    let hs = *a.hs.get_or_insert(domain.spacing);
    let copies = numbers(&required(&a.copies, "copies")?, "copies", Some(2))?;
    let periods = tiling.periods();
    let window = lattice_window(&periods, [copies[0], copies[1]], &domain);
    let grid = sample_entire(&mesh, &field.values, &tiling, &window, hs)?;
    let out = out_path(&a.out, "");
    write_grid(&out, &grid)?;
    let (sup, l2) = tiled_residual(&grid)?;
    let seam = seam_split_residual(&grid, &tiling)?;
    let report = json!({
        "command": "tile",
        "status": "ok",
        "pattern": pattern.name(),
        "sign_consistent": check_sign_consistency(&tiling),
        "periods": periods,
        "window": [window.x0, window.y0, window.x1, window.y1],
        "grid": {"nx": grid.nx, "ny": grid.ny, "hs": grid.hs, "path": out},
        "residual": {"sup": sup, "l2": l2},
        "seam": {
            "seam_sup": seam.seam_sup, "interior_sup": seam.interior_sup,
            "seam_points": seam.seam_points, "interior_points": seam.interior_points,
        },
    });
    write_report(&out_path(&a.report, ""), &finish_report(report, &a, &a.common, started))?;
    gnuplot(&a.common, &out, Plot::Grid(&grid))
}

fn radial(flags: RadialArgs) -> Result<()> {
    let started = Instant::now();
    let mut a = merge_with_file(&flags, flags.common.config.as_deref())?;
    let defaults = ShootOptions::default();
    let n = *a.n.get_or_insert(2);
    let k = *a.nodes.get_or_insert(0);
    let opts = ShootOptions {
        r_max: *a.r_max.get_or_insert(defaults.r_max),
        step: *a.step.get_or_insert(defaults.step),
        ..defaults
    };
    a.out.get_or_insert_with(|| "profile.txt".into());
    a.report.get_or_insert_with(|| "radial.json".into());
    let bracket = match &a.bracket {
        Some(b) => {
            let v = numbers(b, "bracket", Some(2))?;
            (v[0], v[1])
        }
        None => bracket_scan(k, n, 1.0, 12.0, 111, &opts)?
            .ok_or_else(|| CliError::Core(Error::Bracket(format!("no amplitude in [1, 12] brackets {k} nodes"))))?,
    };
    let sol = find_k_node_solution(k, n, bracket, &opts)?;
    let out = out_path(&a.out, "");
    write_text(&out, &columns_to_text(["r", "u"], sol.profile.iter().copied()))?;
    let report = json!({
        "command": "radial",
        "status": "ok",
        "alpha": sol.alpha,
        "nodes": sol.nodes,
        "residual_sup": sol.residual_sup,
        "bracket": [bracket.0, bracket.1],
        "profile": out,
    });
    write_report(&out_path(&a.report, ""), &finish_report(report, &a, &a.common, started))?;
    gnuplot(&a.common, &out, Plot::Columns { x: "r", y: &["u"] })
}

const STATE_COLUMNS: [&str; 9] = ["x", "U0", "p0", "U1", "p1", "V1", "q1", "H", "K"];

fn state_rows<'a>(
    samples: impl Iterator<Item = (f64, GalerkinState)> + 'a,
    params: &'a GalerkinParams,
) -> impl Iterator<Item = [f64; 9]> + 'a {
    samples.map(move |(x, s)| {
        let v = s.to_array();
        [x, v[0], v[1], v[2], v[3], v[4], v[5], hamiltonian(&s, params), integral_K(&s)]
    })
}

fn trajectory_text(t: &Trajectory, params: &GalerkinParams) -> String {
    columns_to_text(STATE_COLUMNS, state_rows(t.samples.iter().map(|s| (s.x, s.state)), params))
}

fn galerkin_cmd(flags: GalerkinArgs) -> Result<()> {
    let started = Instant::now();
    let mut a = merge_with_file(&flags, flags.common.config.as_deref())?;
    let l = *a.l.get_or_insert(2.0 * PI);
    let params = GalerkinParams::new(l)?;
    let mode = a.mode.get_or_insert_with(|| "integrate".into()).clone();
    a.report.get_or_insert_with(|| "galerkin.json".into());
    let mut report = json!({"command": "galerkin", "mode": mode, "lambda": params.lambda()});
    let columns_plot = Some(Plot::Columns { x: "x", y: &STATE_COLUMNS[1..] });
    let (out, plot, status) = match mode.as_str() {
        "integrate" | "family" => {
            let span = numbers(a.x_span.get_or_insert_with(|| "-10,10".into()), "x-span", Some(2))?;
            let step = *a.step.get_or_insert(1e-3);
            if !(step > 0.0) {
                return Err(CliError::config("step", "must be positive"));
            }
            let out = a.out.get_or_insert_with(|| "trajectory.txt".into()).clone();
            if mode == "integrate" {
                let s0 = match &a.state {
                    Some(s) => {
                        let v = numbers(s, "state", Some(6))?;
                        GalerkinState::from_array([v[0], v[1], v[2], v[3], v[4], v[5]])
                    }
                    None => planar_homoclinic(span[0]),
                };
                let (traj, status) = match galerkin::integrate(&s0, &params, (span[0], span[1]), step) {
                    Ok(t) => (t, Ok(())),
                    Err(Error::Diverged(partial)) => {
                        let at = partial.samples.last().map_or(span[0], |s| s.x);
                        (*partial, Err(CliError::Convergence(format!("trajectory diverged after x = {at}; partial trajectory written"))))
                    }
                    Err(e) => return Err(e.into()),
                };
                write_text(&out, &trajectory_text(&traj, &params))?;
                report["h_drift"] = json!(traj.h_drift);
                report["k_drift"] = json!(traj.k_drift);
                report["samples"] = json!(traj.samples.len());
                (out, columns_plot, status)
            } else {
                let theta = *a.theta.get_or_insert(0.0);
                let n = ((span[1] - span[0]).abs() / step).round() as usize;
                let (x0, x1) = (span[0], span[1]);
                let xs = move || (0..=n).map(move |i| x0 + (x1 - x0) * i as f64 / n.max(1) as f64);
                let samples = xs().map(|x| (x, family_homoclinic(x, theta, &params)));
                write_text(&out, &columns_to_text(STATE_COLUMNS, state_rows(samples, &params)))?;
                report["residual_sup"] = json!(closed_form_residual(Orbit::Family { theta }, &params, xs()));
                report["U1_at_0"] = json!(family_homoclinic(0.0, theta, &params).u1);
                (out, columns_plot, Ok(()))
            }
        }
        "reconstruct" => {
            let source = a.source.get_or_insert_with(|| "family".into()).clone();
            let theta = *a.theta.get_or_insert(0.0);
            let orbit = match source.as_str() {
                "planar" => Orbit::Planar,
                "family" => Orbit::Family { theta },
                other => return Err(CliError::config("source", format!("unknown source `{other}` (planar, family)"))),
            };
            let w = numbers(a.window.get_or_insert_with(|| format!("-5,0,5,{l}")), "window", Some(4))?;
            let window = Window::new(w[0], w[1], w[2], w[3]);
            let hs = *a.hs.get_or_insert(0.02);
            let src = BreatherSource::Orbit(orbit);
            let grid = sample_breather(&src, &params, &window, hs)?;
            let (sup, l2) = anzatz_residual(&src, &params, &window, hs)?;
            let out = a.out.get_or_insert_with(|| "breather.grid".into()).clone();
            write_grid(&out, &grid)?;
            report["residual"] = json!({"sup": sup, "l2": l2});
            report["grid"] = json!({"nx": grid.nx, "ny": grid.ny, "hs": grid.hs});
            gnuplot(&a.common, &out, Plot::Grid(&grid))?;
            (out, None, Ok(()))
        }
        "eigen" => {
            let half_length = *a.half_length.get_or_insert(20.0);
            let h = *a.eigen_h.get_or_insert(0.005);
            let spec = wall_linearization_eigen(half_length, h)?;
            let out = a.out.get_or_insert_with(|| "eigenfunction.txt".into()).clone();
            write_text(&out, &columns_to_text(["x", "phi"], spec.x.iter().zip(&spec.phi).map(|(&x, &p)| [x, p])))?;
            report["eigenvalue"] = json!(spec.eigenvalue);
            report["next"] = json!(spec.next);
            report["overlap_sech2"] = json!(spec.overlap_with(|x| 1.0 / x.cosh().powi(2)));
            (out, Some(Plot::Columns { x: "x", y: &["phi"] }), Ok(()))
        }
        other => return Err(CliError::config("mode", format!("unknown mode `{other}` (integrate, family, reconstruct, eigen)"))),
    };
    report["status"] = json!(if status.is_ok() { "ok" } else { "failed" });
    report["output"] = json!(out);
    write_report(&out_path(&a.report, ""), &finish_report(report, &a, &a.common, started))?;
    if let Some(plot) = plot {
        gnuplot(&a.common, &out, plot)?;
    }
    status
}

fn sweep(flags: SweepArgs) -> Result<()> {
    let started = Instant::now();
    let mut a = merge_with_file(&flags, flags.common.config.as_deref())?;
    resolve_domain(&mut a.domain);
    let scales = numbers(a.scales.get_or_insert_with(|| "10,20,40".into()), "scales", None)?;
    a.out.get_or_insert_with(|| "sweep.txt".into());
    a.report.get_or_insert_with(|| "sweep.json".into());
    let Problem { spec, params, seed, tol } = problem(&a.domain)?;
    let sweep = lambda_sweep(&spec, &scales, &seed, &params, &tol)?;
    let out = out_path(&a.out, "");
    write_text(&out, &columns_to_text(["R", "lambda"], sweep.iter().map(|&(r, l)| [r, l])))?;
    let (lo, hi) = sweep_bounds(&sweep).unwrap_or((f64::NAN, f64::NAN));
    let report = json!({
        "command": "sweep",
        "status": "ok",
        "sweep": sweep.iter().map(|&(r, l)| json!({"R": r, "lambda": l})).collect::<Vec<_>>(),
        "min": lo,
        "max": hi,
        "ratio": hi / lo,
    });
    write_report(&out_path(&a.report, ""), &finish_report(report, &a, &a.common, started))?;
    gnuplot(&a.common, &out, Plot::Columns { x: "R", y: &["lambda"] })
}
