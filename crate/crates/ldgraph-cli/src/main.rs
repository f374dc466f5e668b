//! Command-line front end for the large-distance-graph toolkit.
//!
//! Structured results are printed as single-line JSON on stdout
//! (tabular plot data as CSV); every failure is a single-line JSON
//! diagnostic on stderr with a stable exit code: 1 for domain or
//! resource errors, 2 for format or I/O errors, 3 for verification
//! failures.

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use ldgraph::bounds::{ledger, BoundLedger, Z_MAX, Z_MIN};
use ldgraph::geom::SetRegion;
use ldgraph::graph::{
    clique_witness_region, edge_measure_mc, graphon_density, graphon_of_region, motif_measure_mc,
    MotifGraph, StepGraphon,
};
use ldgraph::raster::{CartesianRaster, PolarRaster};
use ldgraph::search::{
    anneal_annulus_traced, optimal_annulus_set, parametric_clique_iso, AnnealParams, BestRegion,
    ConfigFamily, SearchResult,
};
use ldgraph::symmetry::{
    circular_symmetrize, d_maximal_check, grid_slack, rings_changed, steiner_symmetrize,
    SymmetrizationReport,
};
use ldgraph::verify::{all_passed, run_suite};
use ldgraph::{Error, Result};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "ldgraph",
    version,
    about = "Measures, bounds, and extremal searches for large-distance graphs of planar sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Lebesgue measure of a scene (exact or quadrature).
    Measure {
        /// Scene JSON path.
        #[arg(long)]
        scene: PathBuf,
        /// Write the result here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Diameter of a scene.
    Diameter {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo edge measure of the distance-greater-than-2 graph.
    EdgeMeasure {
        #[arg(long)]
        scene: PathBuf,
        /// Sample count.
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        /// RNG seed; fixed seed means bit-identical output.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search a scene for k points pairwise more than 2 apart.
    Clique {
        #[arg(long)]
        scene: PathBuf,
        /// Clique size.
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Search lattice pitch.
        #[arg(long, default_value_t = 0.01)]
        resolution: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo measure of a labeled motif configuration space.
    Motif {
        #[arg(long)]
        scene: PathBuf,
        /// Motif JSON path, e.g. {"k":3,"edges":[[1,2],[2,3],[1,3]]}.
        #[arg(long)]
        motif: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Homomorphism density of a motif in a step graphon.
    GraphonDensity {
        /// Scene JSON path; the graphon is sampled from the scene.
        #[arg(long, conflicts_with = "graphon")]
        scene: Option<PathBuf>,
        /// Step graphon JSON path: {"weights":[...],"values":[[...]]}.
        #[arg(long)]
        graphon: Option<PathBuf>,
        /// Motif JSON path.
        #[arg(long)]
        motif: PathBuf,
        /// Block count when sampling a graphon from a scene.
        #[arg(long, default_value_t = 8)]
        blocks: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One evaluated row of the closed-form bound ledger.
    Bound {
        /// Evaluation point in [2*sqrt(2), 4].
        #[arg(long)]
        z: f64,
        /// csv (default) prints header and row; json prints the row object.
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Circular (polar raster) or Steiner (Cartesian raster) symmetrization.
    Symmetrize {
        /// Raster text path; PRASTER headers get circular
        /// symmetrization, RASTER headers get Steiner.
        #[arg(long)]
        raster: PathBuf,
        /// Steiner axis x = const (Cartesian input only).
        #[arg(long = "axis-x", default_value_t = 0.0)]
        axis_x: f64,
        /// Outer annulus radius; when given, polar inputs are checked
        /// against the Annulus(2,R) window preconditions.
        #[arg(long = "R")]
        r_outer: Option<f64>,
        /// Write the transformed raster text here; the report JSON
        /// always goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulated annealing for diameter-2 sets of maximal measure in Annulus(2,R).
    SearchAnnulus {
        #[arg(long = "R")]
        r_outer: f64,
        /// Radial cell pitch.
        #[arg(long, default_value_t = 0.01)]
        dr: f64,
        /// Angular cell pitch.
        #[arg(long, default_value_t = 0.004)]
        dth: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Annealing iterations per restart.
        #[arg(long)]
        iterations: Option<u64>,
        /// Independent restarts (best result wins).
        #[arg(long)]
        restarts: Option<u32>,
        /// Initial temperature.
        #[arg(long)]
        t0: Option<f64>,
        /// Geometric cooling factor per epoch.
        #[arg(long)]
        cooling: Option<f64>,
        /// Write the best raster as PRASTER text here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parametric search over clique-free ball configurations.
    SearchCliqueIso {
        /// Ambient dimension.
        #[arg(long, default_value_t = 2)]
        d: u32,
        /// Forbidden clique size.
        #[arg(long, default_value_t = 3)]
        k: u32,
        /// single-ball, multi-ball, or both.
        #[arg(long, default_value = "both")]
        family: String,
        /// Objective evaluation budget.
        #[arg(long, default_value_t = 200)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a named self-verification suite; exit 0 if every criterion passes.
    Verify {
        #[arg(long, default_value = "core")]
        suite: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Deterministic CSV data for external plotting.
    PlotData {
        /// bound-ledger, annulus-extremal-outline, or search-trace.
        #[arg(long)]
        kind: String,
        /// Outer annulus radius (outline and trace kinds).
        #[arg(long = "R")]
        r_outer: Option<f64>,
        /// Sample count (ledger rows or outline points).
        #[arg(long, default_value_t = 100)]
        points: usize,
        #[arg(long, default_value_t = 0.01)]
        dr: f64,
        #[arg(long, default_value_t = 0.004)]
        dth: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        iterations: Option<u64>,
        #[arg(long)]
        restarts: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e)
            if matches!(
                e.kind(),
                ErrorKind::DisplayHelp
                    | ErrorKind::DisplayVersion
                    | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand
            ) =>
        {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let message = e.to_string().lines().next().unwrap_or("bad arguments").to_string();
            diagnose("format", &message);
            return ExitCode::from(2);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let kind = error_kind(&e);
            let text = e.to_string();
            let message = text.strip_prefix(&format!("{kind}: ")).unwrap_or(&text);
            diagnose(kind, message);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

/// Single-line JSON diagnostic on stderr.
fn diagnose(kind: &str, message: &str) {
    eprintln!(
        "{}",
        serde_json::json!({ "error": kind, "message": message })
    );
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Domain(_) => "domain",
        Error::Resource(_) => "resource",
        Error::Format(_) => "format",
        Error::Io(_) => "io",
        Error::Verification(_) => "verification",
    }
}

/// Prints one line to stdout; a closed pipe (e.g. `| head`) ends the
/// process quietly instead of panicking.
fn print_line(text: &str) -> Result<()> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{text}") {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => std::process::exit(0),
        Err(e) => Err(Error::from(e)),
    }
}

/// Writes the payload to `out` when given, otherwise to stdout.
fn emit(out: &Option<PathBuf>, payload: &str) -> Result<()> {
    match out {
        Some(path) => Ok(fs::write(path, payload)?),
        None => print_line(payload.trim_end_matches('\n')),
    }
}

fn load_scene(path: &Path) -> Result<SetRegion> {
    let text = fs::read_to_string(path)?;
    let scene: SetRegion = serde_json::from_str(&text)?;
    scene.validate()?;
    Ok(scene)
}

fn load_motif(path: &Path) -> Result<MotifGraph> {
    let text = fs::read_to_string(path)?;
    let motif: MotifGraph = serde_json::from_str(&text)?;
    motif.validate()?;
    Ok(motif)
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Measure { scene, out } => {
            let s = load_scene(&scene)?;
            let measure = s.measure()?;
            emit(&out, &serde_json::json!({ "measure": measure }).to_string())
        }
        Command::Diameter { scene, out } => {
            let s = load_scene(&scene)?;
            let diameter = s.diameter()?;
            emit(&out, &serde_json::json!({ "diameter": diameter }).to_string())
        }
        Command::EdgeMeasure {
            scene,
            samples,
            seed,
            out,
        } => {
            let s = load_scene(&scene)?;
            let est = edge_measure_mc(&s, 2.0, samples, seed)?;
            emit(&out, &serde_json::to_string(&est)?)
        }
        Command::Clique {
            scene,
            k,
            resolution,
            out,
        } => {
            let s = load_scene(&scene)?;
            let outcome = clique_witness_region(&s, k, resolution)?;
            emit(&out, &serde_json::to_string(&outcome)?)
        }
        Command::Motif {
            scene,
            motif,
            samples,
            seed,
            out,
        } => {
            let s = load_scene(&scene)?;
            let m = load_motif(&motif)?;
            let est = motif_measure_mc(&s, &m, samples, seed)?;
            emit(&out, &serde_json::to_string(&est)?)
        }
        Command::GraphonDensity {
            scene,
            graphon,
            motif,
            blocks,
            seed,
            out,
        } => {
            let g = match (&scene, &graphon) {
                (Some(path), None) => graphon_of_region(&load_scene(path)?, blocks, seed)?,
                (None, Some(path)) => {
                    let text = fs::read_to_string(path)?;
                    let raw: StepGraphon = serde_json::from_str(&text)?;
                    StepGraphon::new(raw.weights, raw.values)?
                }
                _ => {
                    return Err(Error::Domain(
                        "pass exactly one of --scene or --graphon".into(),
                    ))
                }
            };
            let m = load_motif(&motif)?;
            let density = graphon_density(&g, &m)?;
            emit(
                &out,
                &serde_json::json!({ "density": density, "blocks": g.weights.len() }).to_string(),
            )
        }
        Command::Bound { z, format, out } => {
            let row = BoundLedger::evaluate(z)?;
            let payload = match format {
                Format::Csv => format!("{}\n{}\n", BoundLedger::csv_header(), row.csv_row()),
                Format::Json => serde_json::to_string(&row)?,
            };
            emit(&out, &payload)
        }
        Command::Symmetrize {
            raster,
            axis_x,
            r_outer,
            out,
        } => symmetrize_cmd(&raster, axis_x, r_outer, &out),
        Command::SearchAnnulus {
            r_outer,
            dr,
            dth,
            seed,
            iterations,
            restarts,
            t0,
            cooling,
            out,
        } => {
            let params = override_params(iterations, restarts, t0, cooling);
            let (result, _trace) = anneal_annulus_traced(r_outer, dr, dth, &params, seed)?;
            if let Some(path) = &out {
                if let BestRegion::Polar(p) = &result.best_region {
                    fs::write(path, p.to_text())?;
                }
            }
            print_line(&serde_json::to_string(&result)?)
        }
        Command::SearchCliqueIso {
            d,
            k,
            family,
            budget,
            seed,
            out,
        } => search_clique_iso_cmd(d, k, &family, budget, seed, &out),
        Command::Verify { suite, seed } => verify_cmd(&suite, seed),
        Command::PlotData {
            kind,
            r_outer,
            points,
            dr,
            dth,
            seed,
            iterations,
            restarts,
            out,
        } => {
            let csv = match kind.as_str() {
                "bound-ledger" => bound_ledger_csv(points)?,
                "annulus-extremal-outline" => {
                    let r = r_outer.ok_or_else(|| {
                        Error::Domain("annulus-extremal-outline needs --R".into())
                    })?;
                    outline_csv(r, points)?
                }
                "search-trace" => {
                    let r = r_outer
                        .ok_or_else(|| Error::Domain("search-trace needs --R".into()))?;
                    let params = override_params(iterations, restarts, None, None);
                    search_trace_csv(r, dr, dth, &params, seed)?
                }
                other => {
                    return Err(Error::Domain(format!(
                        "unknown plot kind {other:?}; available: bound-ledger, \
                         annulus-extremal-outline, search-trace"
                    )))
                }
            };
            emit(&out, &csv)
        }
    }
}

fn override_params(
    iterations: Option<u64>,
    restarts: Option<u32>,
    t0: Option<f64>,
    cooling: Option<f64>,
) -> AnnealParams {
    let mut params = AnnealParams::default();
    if let Some(v) = iterations {
        params.iterations = v;
    }
    if let Some(v) = restarts {
        params.restarts = v;
    }
    if let Some(v) = t0 {
        params.t0 = v;
    }
    if let Some(v) = cooling {
        params.cooling = v;
    }
    params
}

fn symmetrize_cmd(
    raster: &Path,
    axis_x: f64,
    r_outer: Option<f64>,
    out: &Option<PathBuf>,
) -> Result<()> {
    let text = fs::read_to_string(raster)?;
    let header = text.split_whitespace().next().unwrap_or("");
    let (report, transformed_text) = match header {
        "PRASTER" => {
            let p = PolarRaster::from_text(&text)?;
            let transformed = circular_symmetrize(&p);
            let report = match r_outer {
                Some(r) => d_maximal_check(&p, r)?,
                None => SymmetrizationReport {
                    input_measure: p.measure(),
                    output_measure: transformed.measure(),
                    input_diameter: p.diameter(),
                    output_diameter: transformed.diameter(),
                    rings_touched: rings_changed(&p, &transformed),
                    violation: transformed.diameter() > p.diameter() + grid_slack(&p),
                },
            };
            (report, transformed.to_text())
        }
        "RASTER" => {
            let r = CartesianRaster::from_text(&text)?;
            let transformed = steiner_symmetrize(&r, axis_x);
            let rows_touched = (0..r.height)
                .filter(|&iy| {
                    (0..r.width.max(transformed.width)).any(|ix| {
                        let a = ix < r.width && r.get(ix, iy);
                        let b = row_cell(&transformed, &r, ix, iy);
                        a != b
                    })
                })
                .count();
            let input_diameter = r.diameter()?;
            let output_diameter = transformed.diameter()?;
            let slack = 2.0 * r.cell * std::f64::consts::SQRT_2;
            let report = SymmetrizationReport {
                input_measure: r.measure(),
                output_measure: transformed.measure(),
                input_diameter,
                output_diameter,
                rings_touched: rows_touched,
                violation: output_diameter > input_diameter + slack,
            };
            (report, transformed.to_text())
        }
        other => {
            return Err(Error::Format(format!(
                "unrecognized raster header {other:?}; expected RASTER or PRASTER"
            )))
        }
    };
    if let Some(path) = out {
        fs::write(path, transformed_text)?;
    }
    print_line(&serde_json::to_string(&report)?)
}

/// Occupancy of the transformed raster at the input raster's cell
/// (ix, iy), looked up through world coordinates so rasters with
/// different origins compare correctly.
fn row_cell(t: &CartesianRaster, reference: &CartesianRaster, ix: usize, iy: usize) -> bool {
    let [x, y] = reference.cell_center(ix, iy);
    t.contains_xy(x, y)
}

fn search_clique_iso_cmd(
    d: u32,
    k: u32,
    family: &str,
    budget: u64,
    seed: u64,
    out: &Option<PathBuf>,
) -> Result<()> {
    let runs: Vec<ConfigFamily> = match family {
        "both" => vec![ConfigFamily::SingleBall, ConfigFamily::MultiBall],
        other => vec![other.parse()?],
    };
    let mut results: Vec<(ConfigFamily, SearchResult)> = Vec::new();
    for fam in runs {
        results.push((fam, parametric_clique_iso(d, k, fam, budget, seed)?));
    }
    let (winner_family, winner) = results
        .iter()
        .max_by(|a, b| a.1.best_value.total_cmp(&b.1.best_value))
        .expect("at least one family ran");
    let candidates: Vec<serde_json::Value> = results
        .iter()
        .map(|(fam, r)| {
            serde_json::json!({ "family": fam.to_string(), "best_value": r.best_value })
        })
        .collect();
    let payload = serde_json::json!({
        "family": winner_family.to_string(),
        "result": winner,
        "candidates": candidates,
    });
    emit(out, &payload.to_string())
}

fn verify_cmd(suite: &str, seed: u64) -> Result<()> {
    let results = run_suite(suite, seed)?;
    for r in &results {
        print_line(&format!(
            "{} {} ({:.3} s): {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            r.seconds,
            r.details
        ))?;
    }
    let failed: Vec<&str> = results
        .iter()
        .filter(|r| !r.passed)
        .map(|r| r.name.as_str())
        .collect();
    if failed.is_empty() {
        print_line(&format!("all {} criteria passed", results.len()))?;
        debug_assert!(all_passed(&results));
        Ok(())
    } else {
        Err(Error::Verification(format!(
            "{} of {} criteria failed: {}",
            failed.len(),
            results.len(),
            failed.join(", ")
        )))
    }
}

fn bound_ledger_csv(points: usize) -> Result<String> {
    let rows = ledger(Z_MIN, Z_MAX, points.max(2))?;
    let mut csv = String::from(BoundLedger::csv_header());
    csv.push('\n');
    for row in rows {
        csv.push_str(&row.csv_row());
        csv.push('\n');
    }
    Ok(csv)
}

/// Boundary polyline of the extremal annulus set: four arcs (outer
/// circle, unit circle top, inner circle, unit circle bottom) walked
/// in order and closed; at R=4 the corners collapse and the boundary
/// is the full unit circle around (3, 0).
fn outline_csv(r_outer: f64, points: usize) -> Result<String> {
    let ex = optimal_annulus_set(r_outer)?;
    let mut csv = String::from("x,y\n");
    let mut push = |x: f64, y: f64| {
        writeln!(csv, "{x:.12},{y:.12}").expect("string write cannot fail");
    };
    let per_arc = (points / 4).max(8);
    if ex.a < 1e-9 {
        for i in 0..=(4 * per_arc) {
            let t = i as f64 / (4 * per_arc) as f64 * std::f64::consts::TAU;
            push(ex.s + t.cos(), t.sin());
        }
        return Ok(csv);
    }
    let (x1, a) = (ex.x1.0[0], ex.a);
    let y1 = ex.y1.0[0];
    let r = ex.r_outer;
    // Corner angles on the three circles.
    let phi_outer = a.atan2(x1);
    let phi_inner = a.atan2(y1);
    let psi_x = a.atan2(x1 - ex.s);
    let psi_y = a.atan2(y1 - ex.s);
    let mut arc = |cx: f64, r: f64, from: f64, to: f64| {
        for i in 0..per_arc {
            let t = from + (to - from) * i as f64 / per_arc as f64;
            push(cx + r * t.cos(), r * t.sin());
        }
    };
    // Outer circle from X2 up to X1, unit circle over the top to Y1,
    // inner circle down to Y2, unit circle under the bottom back to X2.
    arc(0.0, r, -phi_outer, phi_outer);
    arc(ex.s, 1.0, psi_x, psi_y);
    arc(0.0, 2.0, phi_inner, -phi_inner);
    arc(ex.s, 1.0, -psi_y, -psi_x);
    push(x1, -a);
    Ok(csv)
}

fn search_trace_csv(
    r_outer: f64,
    dr: f64,
    dth: f64,
    params: &AnnealParams,
    seed: u64,
) -> Result<String> {
    let (_result, trace) = anneal_annulus_traced(r_outer, dr, dth, params, seed)?;
    let mut csv = String::from("iteration,value,best_value,temperature\n");
    for t in trace {
        writeln!(
            csv,
            "{},{:.12},{:.12},{:.6e}",
            t.iteration, t.value, t.best_value, t.temperature
        )
        .expect("string write cannot fail");
    }
    Ok(csv)
}
