//! Batch front-end: analyze point sets, generate involutive graphs, realize
//! them numerically, compute Borsuk data and critical partitions, and export
//! meshes. Exit codes: 0 ok, 1 property failure, 2 input error.

use anyhow::Context;
use clap::{Parser, Subcommand};
use reuleaux::borsuk::{borsuk_number, critical_partition};
use reuleaux::generator::enumerate;
use reuleaux::geometry::{ball_complex, classify, diameter, one_skeleton, PointSet};
use reuleaux::io::{
    complex_to_off, read_json, to_json_string, GraphJson, PointSetJson, RealizationJson,
};
use reuleaux::realize::{realize, verify_realization, RealizeOptions};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "reuleaux",
    version,
    about = "Borsuk/Vazsonyi classification and Reuleaux polyhedra toolkit"
)]
struct Cli {
    /// Seed for all randomized steps (solver restarts, sampling).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write a run manifest (command, input hashes, seed, version, wall
    /// time) to this path.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify a point set and compute its Borsuk report.
    Analyze {
        #[arg(long)]
        points: PathBuf,
        /// Override the tolerance stored in the file.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also export the ball complex (facets/edges/vertices/incidences).
        #[arg(long)]
        complex: Option<PathBuf>,
    },
    /// Enumerate involutive polyhedral graphs up to --max-n vertices.
    Generate {
        #[arg(long = "max-n")]
        max_n: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Numerically realize an involutive graph as a Reuleaux vertex set.
    Realize {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        /// Convergence threshold on the diagonal residual.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Also export the realized body as an OFF mesh.
        #[arg(long)]
        off: Option<PathBuf>,
    },
    /// Borsuk number, optimal partition and strongly critical subset.
    Borsuk {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Critical partition of a Reuleaux body evaluated on query points.
    /// eps and queries are interpreted in normalized (unit-diameter) units.
    Partition {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        vertex: String,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        queries: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate, realize, verify and check the main-theorem equivalences.
    Pipeline {
        #[arg(long = "max-n")]
        max_n: usize,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        /// Corrupt one involution before checking (negative-path testing).
        #[arg(long, hide = true, default_value_t = false)]
        inject_fault: bool,
    },
    /// Export the ball polyhedron of a point set as an OFF mesh.
    ExportOff {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Arc sampling step in degrees.
        #[arg(long, default_value_t = 2.0)]
        step: f64,
        #[arg(long)]
        tol: Option<f64>,
    },
}

#[derive(Serialize)]
struct SkeletonSummary {
    connectivity: Option<u8>,
    witness: Option<Vec<String>>,
}

#[derive(Serialize)]
struct AnalyzeReport {
    diameter: f64,
    diameter_pairs: Vec<[String; 2]>,
    classification: reuleaux::geometry::ClassificationReport,
    skeleton: SkeletonSummary,
    borsuk: reuleaux::borsuk::BorsukReport,
}

#[derive(Serialize)]
struct RunManifest {
    command: String,
    version: String,
    seed: u64,
    /// sha256 per input path.
    inputs: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tol: Option<f64>,
    wall_ms: u128,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    counts: BTreeMap<usize, usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    outputs: Vec<ManifestEntry>,
}

#[derive(Serialize)]
struct ManifestEntry {
    path: String,
    n: usize,
    provenance: Vec<String>,
}

#[derive(serde::Deserialize)]
struct QueriesJson {
    points: Vec<[f64; 3]>,
}

fn sha256_file(path: &Path) -> anyhow::Result<String> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(format!("{:x}", Sha256::digest(bytes)))
}

impl Cmd {
    fn input_paths(&self) -> Vec<&Path> {
        match self {
            Cmd::Analyze { points, .. }
            | Cmd::Borsuk { points, .. }
            | Cmd::ExportOff { points, .. } => vec![points.as_path()],
            Cmd::Partition { points, queries, .. } => vec![points.as_path(), queries.as_path()],
            Cmd::Realize { graph, .. } => vec![graph.as_path()],
            Cmd::Generate { .. } | Cmd::Pipeline { .. } => vec![],
        }
    }

    fn tol_setting(&self) -> Option<f64> {
        match self {
            Cmd::Analyze { tol, .. }
            | Cmd::Borsuk { tol, .. }
            | Cmd::Partition { tol, .. }
            | Cmd::ExportOff { tol, .. } => *tol,
            Cmd::Realize { tol, .. } => Some(*tol),
            Cmd::Generate { .. } | Cmd::Pipeline { .. } => None,
        }
    }
}

fn load_points(path: &Path, tol: Option<f64>) -> reuleaux::Result<PointSet> {
    let json: PointSetJson = read_json(path)?;
    json.into_point_set_with_tol(tol)
}

fn emit(text: String, out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text + "\n")?,
        None => println!("{text}"),
    }
    Ok(())
}

/// Property failure: the toolkit ran, the claim did not hold.
#[derive(Debug)]
struct PropertyFailure(String);

impl std::fmt::Display for PropertyFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for PropertyFailure {}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.cmd {
        Cmd::Analyze { points, tol, out, complex } => {
            let ps = load_points(&points, tol)?;
            let (diam, pairs) = diameter(&ps);
            let diameter_pairs = pairs
                .iter()
                .map(|&(i, j)| [ps.label(i).to_string(), ps.label(j).to_string()])
                .collect();
            let classification = classify(&ps)?;
            let skeleton = skeleton_summary(&ps);
            let report = AnalyzeReport {
                diameter: diam,
                diameter_pairs,
                classification,
                skeleton,
                borsuk: borsuk_number(&ps)?,
            };
            emit(to_json_string(&report)?, out.as_deref())?;
            if let Some(path) = complex {
                let bc = ball_complex(&ps)?;
                let json = reuleaux::io::ComplexJson::from_complex(&bc, ps.labels());
                std::fs::write(path, to_json_string(&json)? + "\n")?;
            }
        }
        Cmd::Generate { max_n, out } => {
            let start = Instant::now();
            let graphs = enumerate(max_n)?;
            std::fs::create_dir_all(&out)?;
            let mut outputs = Vec::new();
            for ig in &graphs {
                let seq = outputs.iter().filter(|e: &&ManifestEntry| e.n == ig.n()).count();
                let name = format!("graph_n{}_{}.json", ig.n(), seq);
                let path = out.join(&name);
                std::fs::write(&path, to_json_string(&GraphJson::from_involutive(ig))? + "\n")?;
                outputs.push(ManifestEntry {
                    path: name,
                    n: ig.n(),
                    provenance: ig.provenance.clone(),
                });
            }
            let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
            for e in &outputs {
                *counts.entry(e.n).or_insert(0) += 1;
            }
            let manifest = RunManifest {
                command: format!("generate --max-n {max_n}"),
                version: env!("CARGO_PKG_VERSION").to_string(),
                seed: cli.seed,
                inputs: BTreeMap::new(),
                tol: None,
                wall_ms: start.elapsed().as_millis(),
                counts,
                outputs,
            };
            std::fs::write(out.join("manifest.json"), to_json_string(&manifest)? + "\n")?;
            println!("wrote {} graphs to {}", graphs.len(), out.display());
        }
        Cmd::Realize { graph, out, restarts, tol, off } => {
            let json: GraphJson = read_json(&graph)?;
            let ig = json.into_involutive()?;
            let opts = RealizeOptions { restarts, tol, seed: cli.seed, ..Default::default() };
            let res = realize(&ig, &opts)?;
            let text = to_json_string(&RealizationJson::from_result(&res))?;
            emit(text, out.as_deref())?;
            if res.converged {
                if let Some(off_path) = off {
                    let raw: Vec<[f64; 3]> =
                        res.coordinates.iter().map(|p| [p.x, p.y, p.z]).collect();
                    let ps = PointSet::from_coords(raw, 1e-6)?;
                    let bc = ball_complex(&ps)?;
                    std::fs::write(off_path, complex_to_off(&bc, 2.0)?)?;
                }
            } else {
                return Err(PropertyFailure(format!(
                    "realization did not converge (best diagonal residual {:.3e}); \
                     a failure is a solver outcome, not a refutation",
                    res.max_diagonal_residual
                ))
                .into());
            }
        }
        Cmd::Borsuk { points, tol, out } => {
            let ps = load_points(&points, tol)?;
            emit(to_json_string(&borsuk_number(&ps)?)?, out.as_deref())?;
        }
        Cmd::Partition { points, vertex, eps, queries, tol, out } => {
            let ps = load_points(&points, tol)?;
            let qj: QueriesJson = read_json(&queries)?;
            let qs: Vec<nalgebra::Point3<f64>> =
                qj.points.iter().map(|c| nalgebra::Point3::new(c[0], c[1], c[2])).collect();
            let pa = critical_partition(&ps, &vertex, eps, &qs)?;
            emit(to_json_string(&pa)?, out.as_deref())?;
        }
        Cmd::Pipeline { max_n, restarts, inject_fault } => {
            pipeline(max_n, restarts, cli.seed, inject_fault)?;
        }
        Cmd::ExportOff { points, out, step, tol } => {
            let ps = load_points(&points, tol)?;
            let bc = ball_complex(&ps)?;
            std::fs::write(&out, complex_to_off(&bc, step)?)?;
            println!("wrote {}", out.display());
        }
    }
    Ok(())
}

fn skeleton_summary(ps: &PointSet) -> SkeletonSummary {
    let none = SkeletonSummary { connectivity: None, witness: None };
    let Ok(bc) = ball_complex(ps) else { return none };
    let Ok(sk) = one_skeleton(&bc) else { return none };
    let Some(g) = sk.graph else { return none };
    let Ok(sg) = g.to_simple_graph() else { return none };
    let rep = sg.connectivity();
    let witness = rep.witness.map(|cut| {
        cut.iter()
            .map(|&vid| match bc.vertices[vid].point_index {
                Some(p) => ps.label(p).to_string(),
                None => format!("v{vid}"),
            })
            .collect()
    });
    SkeletonSummary { connectivity: Some(rep.kappa), witness }
}

fn pipeline(max_n: usize, restarts: usize, seed: u64, inject_fault: bool) -> anyhow::Result<()> {
    let mut graphs = enumerate(max_n)?;
    if inject_fault {
        if let Some(first) = graphs.first_mut() {
            // swap two involution entries; verification must catch it
            first.tau.map.swap(0, 1);
        }
    }
    let mut failures = 0;
    println!(
        "{:<4} {:<10} {:<9} {:<9} {:<7} {:<6} provenance",
        "n", "converged", "verified", "reuleaux", "borsuk", "equiv"
    );
    for ig in &graphs {
        if let Err(err) = ig.verify() {
            failures += 1;
            eprintln!("FAIL involution verification: {err} (provenance {:?})", ig.provenance);
            println!(
                "{:<4} {:<10} {:<9} {:<9} {:<7} {:<6} {}",
                ig.n(),
                "-",
                "FAIL",
                "-",
                "-",
                "-",
                ig.provenance.join(" ; ")
            );
            continue;
        }
        let opts = RealizeOptions { restarts, seed, ..Default::default() };
        let res = realize(ig, &opts)?;
        let mut verified = false;
        let mut is_reuleaux = false;
        let mut a4 = false;
        let mut equiv = false;
        if res.converged {
            let rep = verify_realization(&res.coordinates, ig, 1e-6)?;
            verified = rep.all_passed();
            let raw: Vec<[f64; 3]> = res.coordinates.iter().map(|p| [p.x, p.y, p.z]).collect();
            let ps = PointSet::from_coords(raw, 1e-6)?;
            is_reuleaux = classify(&ps)?.reuleaux;
            let report = borsuk_number(&ps)?;
            a4 = report.a == 4;
            let subset_exists = report.critical_subset.is_some();
            // Main-theorem equivalence for a realized Reuleaux vertex set:
            // Borsuk number 4, a strongly critical subset exists, and its
            // ball polyhedron is Reuleaux must all hold together.
            equiv = a4 && subset_exists && is_reuleaux && verified;
        }
        if !equiv {
            failures += 1;
            let case = serde_json::json!({
                "provenance": ig.provenance,
                "converged": res.converged,
                "residual": res.max_diagonal_residual,
            });
            eprintln!("FAIL equivalence: {case}");
        }
        println!(
            "{:<4} {:<10} {:<9} {:<9} {:<7} {:<6} {}",
            ig.n(),
            res.converged,
            verified,
            is_reuleaux,
            if a4 { "4" } else { "!4" },
            if equiv { "ok" } else { "FAIL" },
            ig.provenance.join(" ; ")
        );
    }
    println!("{} graphs, {} failures", graphs.len(), failures);
    if failures > 0 {
        return Err(PropertyFailure(format!("{failures} pipeline case(s) failed")).into());
    }
    Ok(())
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("REULEAUX_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = Cli::parse();
    let manifest_path = cli.manifest.clone();
    let manifest_stub = manifest_path.as_ref().map(|_| {
        let inputs: BTreeMap<String, String> = cli
            .cmd
            .input_paths()
            .iter()
            .filter_map(|p| {
                sha256_file(p).ok().map(|h| (p.display().to_string(), h))
            })
            .collect();
        RunManifest {
            command: std::env::args().skip(1).collect::<Vec<_>>().join(" "),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed: cli.seed,
            inputs,
            tol: cli.cmd.tol_setting(),
            wall_ms: 0,
            counts: BTreeMap::new(),
            outputs: Vec::new(),
        }
    });
    let start = Instant::now();
    let result = run(cli);
    if let (Some(path), Some(mut manifest)) = (manifest_path, manifest_stub) {
        manifest.wall_ms = start.elapsed().as_millis();
        match to_json_string(&manifest) {
            Ok(text) => {
                if let Err(err) = std::fs::write(&path, text + "\n") {
                    eprintln!("warning: could not write manifest: {err}");
                }
            }
            Err(err) => eprintln!("warning: could not serialize manifest: {err}"),
        }
    }
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.downcast_ref::<PropertyFailure>().is_some() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
