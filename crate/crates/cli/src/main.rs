//! Command-line frontend: walk ingestion, validation, index computation,
//! phase-diagram sweeps, boundary analysis, and CSV/JSON emission.

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use walkind::boundary::{self, Decoupler, Side};
use walkind::error::Error as CoreError;
use walkind::invariants;
use walkind::json::{SymmetryJson, WalkJson};
use walkind::models::{self, SplitStepParams};
use walkind::spectral;
use walkind::symmetry::{self, SymmetryRep, SymmetryType};
use walkind::walk::LaurentMatrix;

const PI: f64 = std::f64::consts::PI;
/// Sweep points with a smaller chordal gap are classified as gapless rather
/// than assigned an index.
const GAPLESS_THRESHOLD: f64 = 1e-3;

#[derive(Parser)]
#[command(name = "walkind", version, about = "Topological indices of 1D quantum walks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Momentum samples for gap estimates, band export, and flattening.
    #[arg(long, global = true, default_value_t = 513)]
    samples: usize,
    /// Numerical tolerance for admissibility and eigenvalue clustering.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    /// Write the main output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Emit JSON (default for reports).
    #[arg(long, global = true)]
    json: bool,
    /// Emit CSV (default for tables).
    #[arg(long, global = true, conflicts_with = "json")]
    csv: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a walk document and report unitarity, admissibility, and gap.
    Validate { file: PathBuf },
    /// Compute the symmetry index six(W) and the unsymmetrized winding ind.
    Index { file: PathBuf },
    /// Export quasi-energy bands (eigenvalue phases of the symbol) as CSV.
    Bands { file: PathBuf },
    /// Sweep the split-step parameter plane and tabulate the index.
    PhaseDiagram {
        /// Grid resolution per axis (n×n sweep over (-π,π)²).
        #[arg(long, default_value_t = 16)]
        grid: usize,
        /// Cross-check each gapped point with a finite lattice of N cells.
        #[arg(long)]
        oracle: Option<usize>,
    },
    /// Diagonalize a decoupled finite lattice and report boundary modes.
    Boundary {
        file: PathBuf,
        #[arg(long, default_value_t = 64)]
        cells: usize,
        #[arg(long, value_enum, default_value_t = DecouplerArg::Polar)]
        decoupler: DecouplerArg,
    },
    /// Double the cell (pair neighboring cells) and re-emit the document.
    Regroup { file: PathBuf },
    /// Spectrally flatten the walk onto a momentum grid.
    Flatten { file: PathBuf },
}

#[derive(Copy, Clone, ValueEnum)]
enum DecouplerArg {
    /// No decoupling; plain periodic closure.
    Ring,
    /// Zero the cut-crossing blocks and re-unitarize by polar projection.
    Polar,
    /// Replace the coin at the cut cell by the gentle splitting coin -iσ₂
    /// (split-step documents only).
    Coin,
}

enum Failure {
    Parse(String),
    Inadmissible(String),
    Gapless(f64),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Parse(_) | Failure::Internal(_) => 1,
            Failure::Inadmissible(_) => 2,
            Failure::Gapless(_) => 3,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Parse(m) => format!("parse error: {m}"),
            Failure::Inadmissible(m) => format!("inadmissible: {m}"),
            Failure::Gapless(g) => format!("gapless: minimal gap {g:.3e} below {GAPLESS_THRESHOLD:.0e}"),
            Failure::Internal(m) => format!("error: {m}"),
        }
    }
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Failure {
        Failure::Internal(e.to_string())
    }
}

/// A parsed input document: the walk, an optional symmetry representation,
/// and the split-step parameters when the walk came from that named model.
struct Document {
    walk: LaurentMatrix,
    rep: Option<SymmetryRep>,
    split_step: Option<SplitStepParams>,
}

fn parse_walk_value(v: &Value) -> Result<(LaurentMatrix, Option<SymmetryRep>, Option<SplitStepParams>), Failure> {
    if let Some(model) = v.get("model").and_then(Value::as_str) {
        match model {
            "split_step" => {
                let get = |key: &str| {
                    v.get(key)
                        .and_then(Value::as_f64)
                        .ok_or_else(|| Failure::Parse(format!("split_step model needs numeric \"{key}\"")))
                };
                let p = SplitStepParams { theta1: get("theta1")?, theta2: get("theta2")? };
                let (w, rep) = models::split_step(p);
                Ok((w, Some(rep), Some(p)))
            }
            "shift" => {
                let dim = v
                    .get("dim")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| Failure::Parse("shift model needs \"dim\"".into()))?;
                let steps = v.get("steps").and_then(Value::as_i64).unwrap_or(1);
                Ok((models::shift_walk(dim as usize, steps), None, None))
            }
            other => Err(Failure::Parse(format!("unknown model \"{other}\""))),
        }
    } else {
        let parsed: WalkJson = serde_json::from_value(v.clone())
            .map_err(|e| Failure::Parse(e.to_string()))?;
        let w = parsed.to_walk().map_err(|e| Failure::Parse(e.to_string()))?;
        Ok((w, None, None))
    }
}

fn load_document(path: &PathBuf) -> Result<Document, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| Failure::Parse(e.to_string()))?;
    let (walk_value, symmetry_value) = if let Some(wv) = value.get("walk") {
        if let Some(sv) = value.get("schema_version") {
            if sv.as_u64() != Some(1) {
                return Err(Failure::Parse(format!("unsupported schema_version {sv}")));
            }
        }
        (wv.clone(), value.get("symmetry").cloned())
    } else {
        (value.clone(), None)
    };
    let (walk, model_rep, split_step) = parse_walk_value(&walk_value)?;
    let rep = match symmetry_value {
        Some(sv) => {
            let parsed: SymmetryJson =
                serde_json::from_value(sv).map_err(|e| Failure::Parse(e.to_string()))?;
            Some(parsed.to_rep().map_err(|e| Failure::Parse(e.to_string()))?)
        }
        None => model_rep,
    };
    if let Some(rep) = &rep {
        let d = rep
            .gamma
            .as_ref()
            .or(rep.eta.as_ref())
            .or(rep.tau.as_ref())
            .map(|op| op.matrix.nrows());
        if d.is_some_and(|d| d != walk.dim()) {
            return Err(Failure::Parse(format!(
                "symmetry acts on dimension {}, walk has dimension {}",
                d.unwrap(),
                walk.dim()
            )));
        }
    }
    Ok(Document { walk, rep, split_step })
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| Failure::Internal(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .and_then(|_| if content.ends_with('\n') { Ok(()) } else { stdout.write_all(b"\n") })
                .map_err(|e| Failure::Internal(e.to_string()))
        }
    }
}

fn index_value_json(ix: &symmetry::IndexValue) -> Value {
    serde_json::to_value(ix).expect("index value serializes")
}

fn cmd_validate(doc: &Document, samples: usize, tol: f64, out: &Option<PathBuf>) -> Result<(), Failure> {
    let w = &doc.walk;
    let unitary = w.is_unitary(tol.max(1e-12));
    if !unitary {
        emit(out, &serde_json::to_string_pretty(&json!({"unitary": false})).unwrap())?;
        return Err(Failure::Parse("walk coefficients are not unitary".into()));
    }
    let gap = symmetry::gap_min(w, samples.max(16))?;
    let mut report = serde_json::Map::new();
    report.insert("unitary".into(), json!(true));
    report.insert("dim".into(), json!(w.dim()));
    report.insert("offsets".into(), json!([w.lo(), w.hi()]));
    report.insert("gap".into(), json!(gap));
    if let Some(rep) = &doc.rep {
        let admissible = symmetry::is_admissible(w, rep, tol)?;
        report.insert("type".into(), json!(rep.stype.to_string()));
        report.insert("admissible".into(), json!(admissible));
        if !admissible {
            emit(out, &serde_json::to_string_pretty(&Value::Object(report)).unwrap())?;
            return Err(Failure::Inadmissible("walk violates the declared symmetry".into()));
        }
    }
    emit(out, &serde_json::to_string_pretty(&Value::Object(report)).unwrap())
}

fn cmd_index(doc: &Document, samples: usize, tol: f64, out: &Option<PathBuf>) -> Result<(), Failure> {
    let w = &doc.walk;
    if !w.is_unitary(tol.max(1e-12)) {
        return Err(Failure::Parse("walk coefficients are not unitary".into()));
    }
    if let Some(rep) = &doc.rep {
        if !symmetry::is_admissible(w, rep, tol)? {
            return Err(Failure::Inadmissible(format!(
                "walk violates the declared {} symmetry",
                rep.stype
            )));
        }
    }
    let gap = symmetry::gap_min(w, samples.max(16))?;
    // The unsymmetrized winding only needs det Ŵ(k) ≠ 0, which any unitary
    // satisfies; a gap at ±1 is required only for the symmetry index.
    if doc.rep.is_some() && gap < GAPLESS_THRESHOLD {
        return Err(Failure::Gapless(gap));
    }
    let mut report = serde_json::Map::new();
    report.insert("gap".into(), json!(gap));
    report.insert("ind".into(), json!(invariants::index_ind(w)?));
    if let Some(rep) = &doc.rep {
        report.insert("admissible".into(), json!(true));
        report.insert("six_r".into(), index_value_json(&invariants::index(w, rep)?));
        let mut extras = serde_json::Map::new();
        match rep.stype {
            SymmetryType::BDI => {
                extras.insert("sign_c0".into(), json!(invariants::sign_c0(w, rep)?));
            }
            SymmetryType::D => {
                let details = invariants::index_d_details(w, rep)?;
                extras.insert("flip".into(), json!(details.flip));
                extras.insert("flip_s0".into(), json!(details.pf_0.signum()));
                extras.insert("flip_s_pi".into(), json!(details.pf_pi.signum()));
            }
            _ => {}
        }
        report.insert("extras".into(), Value::Object(extras));
    }
    emit(out, &serde_json::to_string_pretty(&Value::Object(report)).unwrap())
}

fn cmd_bands(doc: &Document, samples: usize, out: &Option<PathBuf>) -> Result<(), Failure> {
    let w = &doc.walk;
    let d = w.dim();
    let mut csv = String::from("k");
    for b in 1..=d {
        csv.push_str(&format!(",phase_{b}"));
    }
    csv.push('\n');
    for k in spectral::momentum_grid(samples.max(2)) {
        let mut phases: Vec<f64> = walkind::mat::eig_values(&w.evaluate(k))?
            .iter()
            .map(|z| z.arg())
            .collect();
        phases.sort_by(f64::total_cmp);
        csv.push_str(&format!("{k:.16e}"));
        for p in phases {
            csv.push_str(&format!(",{p:.16e}"));
        }
        csv.push('\n');
    }
    emit(out, &csv)
}

fn cmd_phase_diagram(
    grid: usize,
    oracle: Option<usize>,
    samples: usize,
    tol: f64,
    out: &Option<PathBuf>,
) -> Result<(), Failure> {
    if grid < 8 {
        return Err(Failure::Parse(format!("grid must be at least 8×8, got {grid}×{grid}")));
    }
    let thetas: Vec<f64> = (0..grid)
        .map(|i| -PI + (i as f64 + 0.5) * 2.0 * PI / grid as f64)
        .collect();
    let mut points = Vec::with_capacity(grid * grid);
    for &t1 in &thetas {
        for &t2 in &thetas {
            points.push((t1, t2));
        }
    }
    let rows: Vec<Result<String, Failure>> = points
        .par_iter()
        .map(|&(t1, t2)| {
            let p = SplitStepParams { theta1: t1, theta2: t2 };
            let (w, rep) = models::split_step(p);
            let gap = symmetry::gap_min(&w, samples.max(64))?;
            let oracle_col = |six: &str| -> Result<String, Failure> {
                match oracle {
                    None => Ok(String::new()),
                    Some(_) if six == "gapless" => Ok(",gapless".into()),
                    Some(n) => {
                        let fw = models::split_step_decoupled(p, &models::minus_i_sigma2(), n)?;
                        let ix = boundary::six_oracle(&fw, &rep, tol.max(1e-8))?;
                        Ok(format!(",{}", ix.value))
                    }
                }
            };
            // The adaptive winding is a more sensitive gap detector than the
            // uniform sampler: a determinant pinned to the origin means the
            // gap closes at a momentum the grid missed.
            let six = if gap < GAPLESS_THRESHOLD {
                None
            } else {
                match invariants::index_chiral(&w, &rep) {
                    Ok(ix) => Some(ix),
                    Err(CoreError::CurveNearZero(_)) => None,
                    Err(e) => return Err(e.into()),
                }
            };
            match six {
                Some(ix) => Ok(format!(
                    "{t1:.16e},{t2:.16e},{gap:.16e},{}{}",
                    ix.value,
                    oracle_col("")?
                )),
                None => Ok(format!(
                    "{t1:.16e},{t2:.16e},{gap:.16e},gapless{}",
                    oracle_col("gapless")?
                )),
            }
        })
        .collect();
    let mut csv = String::from("theta1,theta2,gap,six_r");
    if oracle.is_some() {
        csv.push_str(",oracle_six_r");
    }
    csv.push('\n');
    for row in rows {
        csv.push_str(&row?);
        csv.push('\n');
    }
    emit(out, &csv)
}

fn side_label(side: Side) -> &'static str {
    match side {
        Side::Left => "left",
        Side::Right => "right",
    }
}

fn cmd_boundary(
    doc: &Document,
    cells: usize,
    decoupler: DecouplerArg,
    tol: f64,
    out: &Option<PathBuf>,
) -> Result<(), Failure> {
    let w = &doc.walk;
    let fw = match decoupler {
        DecouplerArg::Ring => boundary::build_finite(w, cells, Decoupler::Ring)?,
        DecouplerArg::Polar => boundary::build_finite(w, cells, Decoupler::Polar)?,
        DecouplerArg::Coin => {
            let p = doc.split_step.ok_or_else(|| {
                Failure::Parse("the coin decoupler needs a split_step model document".into())
            })?;
            models::split_step_decoupled(p, &models::minus_i_sigma2(), cells)?
        }
    };
    let (modes, warning) = match boundary::boundary_modes(&fw, doc.rep.as_ref(), tol.max(1e-8)) {
        Ok(m) => (m, None),
        Err(CoreError::AmbiguousLocalization(weight)) => {
            let msg = format!(
                "localization ambiguity: a mode has cut-side weight {weight:.3}; \
                 increase --cells to separate the boundaries"
            );
            eprintln!("warning: {msg}");
            (Vec::new(), Some(msg))
        }
        Err(e) => return Err(e.into()),
    };
    let mut csv = String::from("s,chirality,side,fitted_lambda,predicted_lambda,residual\n");
    let mut mode_reports = Vec::new();
    for m in &modes {
        let predicted = boundary::predict_decay(w, m.s).ok();
        let (pred_col, resid_col) = match predicted {
            Some(p) => (format!("{p:.16e}"), format!("{:.16e}", (m.fitted_lambda - p).abs())),
            None => ("".into(), "".into()),
        };
        csv.push_str(&format!(
            "{:.16e},{:.16e},{},{:.16e},{pred_col},{resid_col}\n",
            m.s,
            m.chirality,
            side_label(m.side),
            m.fitted_lambda
        ));
        mode_reports.push(json!({
            "s": m.s,
            "chirality": m.chirality,
            "side": side_label(m.side),
            "fitted_lambda": m.fitted_lambda,
            "predicted_lambda": predicted,
        }));
    }
    let six_oracle = match (&doc.rep, warning.is_none()) {
        (Some(rep), true) => Some(boundary::six_oracle(&fw, rep, tol.max(1e-8))?),
        _ => None,
    };
    let summary = json!({
        "n_cells": fw.n_cells,
        "n_modes": modes.len(),
        "six_oracle": six_oracle.as_ref().map(index_value_json),
        "warning": warning,
        "modes": mode_reports,
    });
    println!("{}", serde_json::to_string_pretty(&summary).unwrap());
    // The per-mode table goes to a file; stdout carries the JSON summary.
    match out {
        Some(_) => emit(out, &csv),
        None => Ok(()),
    }
}

fn document_json(w: &LaurentMatrix, rep: Option<&SymmetryRep>) -> Value {
    let mut doc = serde_json::Map::new();
    doc.insert("schema_version".into(), json!(1));
    doc.insert("walk".into(), serde_json::to_value(WalkJson::from_walk(w)).unwrap());
    if let Some(rep) = rep {
        doc.insert("symmetry".into(), serde_json::to_value(SymmetryJson::from_rep(rep)).unwrap());
    }
    Value::Object(doc)
}

fn cmd_regroup(doc: &Document, out: &Option<PathBuf>) -> Result<(), Failure> {
    let w = doc.walk.regroup();
    let rep = doc.rep.as_ref().map(|r| r.regroup());
    emit(out, &serde_json::to_string_pretty(&document_json(&w, rep.as_ref())).unwrap())
}

fn cmd_flatten(doc: &Document, samples: usize, csv: bool, out: &Option<PathBuf>) -> Result<(), Failure> {
    // An odd sample count keeps k = 0 on the grid, which the sampled index
    // formulas need.
    let n = samples.max(3) | 1;
    let su = spectral::flatten(&doc.walk, n)?;
    if csv {
        let d = su.d;
        let mut table = String::from("k");
        for i in 0..d {
            for j in 0..d {
                table.push_str(&format!(",re_{i}{j},im_{i}{j}"));
            }
        }
        table.push('\n');
        for (k, u) in su.ks.iter().zip(&su.values) {
            table.push_str(&format!("{k:.16e}"));
            for i in 0..d {
                for j in 0..d {
                    table.push_str(&format!(",{:.16e},{:.16e}", u[(i, j)].re, u[(i, j)].im));
                }
            }
            table.push('\n');
        }
        emit(out, &table)
    } else {
        let values: Vec<Value> = su
            .values
            .iter()
            .map(|u| serde_json::to_value(walkind::json::MatrixJson::from_mat(u)).unwrap())
            .collect();
        let report = json!({"dim": su.d, "ks": su.ks, "values": values});
        emit(out, &serde_json::to_string_pretty(&report).unwrap())
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Validate { file } => {
            cmd_validate(&load_document(file)?, cli.samples, cli.tol, &cli.out)
        }
        Command::Index { file } => cmd_index(&load_document(file)?, cli.samples, cli.tol, &cli.out),
        Command::Bands { file } => cmd_bands(&load_document(file)?, cli.samples, &cli.out),
        Command::PhaseDiagram { grid, oracle } => {
            cmd_phase_diagram(*grid, *oracle, cli.samples, cli.tol, &cli.out)
        }
        Command::Boundary { file, cells, decoupler } => {
            cmd_boundary(&load_document(file)?, *cells, *decoupler, cli.tol, &cli.out)
        }
        Command::Regroup { file } => cmd_regroup(&load_document(file)?, &cli.out),
        Command::Flatten { file } => {
            cmd_flatten(&load_document(file)?, cli.samples, cli.csv, &cli.out)
        }
    }
}

fn main() -> ExitCode {
    if let Ok(v) = std::env::var("WALKINDEX_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .ok();
        }
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not errors.
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.message());
            ExitCode::from(f.code())
        }
    }
}
