//! Scenario execution: symbolic checks, numeric runs and their output files.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use qrf_algebra::{
    verify_first_class, verify_table, FirstClassReport, PairStatus, SymbolicSystem, Table,
    TableReport,
};
use qrf_engine::{
    build_hamiltonian, clock_label, evolve_history, qrf_swap_check, schrodinger_limit_check,
    space_label, HistoryState, ParticleAxes, QrfSwapReport, ScenarioAxes, SchrodingerReport,
    SwapSetup, SOURCE_SPACE, SOURCE_TIME,
};
use qrf_events::{
    delta12, event_time_distribution, evolve_with_event, interferometric_occurrence, plane_wave,
    pointer_ready, BranchPrediction, EventModel, EventTimeDistribution, Readout, POINTER,
};
use qrf_numerics::{packets, Axis, Grid1D, WaveFunction, C64};
use qrf_spacetime::{regime_diagnostics, DiagnosticAxes, RegimeReport};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::{PacketSpec, ScenarioConfig, ScenarioKind, Shape, SourceSpec};
use crate::error::CliError;

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Norm tolerance of every evolved snapshot.
pub const NORM_TOLERANCE: f64 = 1e-10;
/// Relative energy drift tolerated over a kick-free history.
pub const ENERGY_TOLERANCE: f64 = 1e-8;
/// Largest decrease tolerated in an occurrence curve.
pub const MONOTONE_TOLERANCE: f64 = 1e-10;
/// Schrödinger-limit discrepancy bound.
pub const SCHRODINGER_TOLERANCE: f64 = 1e-6;

/// Command-line overrides applied on top of a document.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub out: Option<PathBuf>,
    pub max_mem_mb: Option<f64>,
    pub sigma_t: Option<f64>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }

    fn bound(name: &str, value: f64, limit: f64) -> Self {
        Self::new(name, value < limit, format!("{value:.3e} < {limit:.1e}"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub name: String,
    pub kind: ScenarioKind,
    pub regime: String,
    /// SHA-256 of the effective document (after overrides), as TOML.
    pub config_hash: String,
    pub artifact_version: String,
    pub seed: u64,
    pub diagnostics: Option<RegimeReport>,
    pub wall_clock_seconds: f64,
    pub checks: Vec<Check>,
    pub pass: bool,
    pub files: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraReport {
    pub regime: String,
    pub particles: u8,
    pub first_class: FirstClassReport,
    pub tables: Vec<TableReport>,
    pub checks: Vec<Check>,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub manifest: RunManifest,
    pub files: Vec<PathBuf>,
    pub history: Option<HistoryState>,
    pub distribution: Option<EventTimeDistribution>,
    pub predictions: Vec<BranchPrediction>,
    pub schrodinger: Option<SchrodingerReport>,
    pub swap: Option<QrfSwapReport>,
    pub algebra: Option<AlgebraReport>,
}

impl RunOutcome {
    pub fn pass(&self) -> bool {
        self.manifest.pass
    }
}

/// Document with the physics overrides applied. Output directory and
/// memory cap only affect where and whether a run happens, so they stay
/// out of the hashed document.
pub fn effective_config(cfg: &ScenarioConfig, opts: &RunOptions) -> Result<ScenarioConfig, CliError> {
    let mut c = cfg.clone();
    if let Some(s) = opts.sigma_t {
        match c.event.as_mut() {
            Some(e) => e.sigma_t = s,
            None => return Err(CliError::Config("--sigma-t needs an [event] table".into())),
        }
    }
    if let Some(seed) = opts.seed {
        c.seed = seed;
    }
    c.validate()?;
    Ok(c)
}

pub fn config_hash(cfg: &ScenarioConfig) -> String {
    hex::encode(Sha256::digest(cfg.to_toml().as_bytes()))
}

// ---------------------------------------------------------------- algebra

fn is_energy(name: &str) -> bool {
    name.starts_with("f0")
}

fn is_dynamical(name: &str) -> bool {
    name.starts_with("C_")
}

pub fn cmd_verify_algebra(cfg: &ScenarioConfig) -> Result<AlgebraReport, CliError> {
    let rule = cfg.algebra.grading_rule();
    let sys = SymbolicSystem::new(cfg.algebra.particles, cfg.regime);
    let first_class = verify_first_class(&sys.constraints(&rule).all(), &rule);

    let mut checks = vec![Check::new(
        "first_class",
        first_class.all_first_class,
        format!("{} pairs", first_class.pairs.len()),
    )];
    let momentum: Vec<_> = first_class
        .pairs
        .iter()
        .filter(|p| p.left == "f1" || p.right == "f1")
        .collect();
    let inexact: Vec<String> = momentum
        .iter()
        .filter(|p| p.status != PairStatus::ExactZero)
        .map(|p| format!("[{}, {}]", p.left, p.right))
        .collect();
    checks.push(Check::new(
        "momentum_pairs_exact",
        inexact.is_empty(),
        if inexact.is_empty() {
            format!("{} pairs exactly zero", momentum.len())
        } else {
            format!("not exactly zero: {}", inexact.join(", "))
        },
    ));
    // [C_I, f0]: whatever the truncation removes must be at least ε_g·ε_p².
    let mut bad = Vec::new();
    for p in first_class
        .pairs
        .iter()
        .filter(|p| (is_dynamical(&p.left) && is_energy(&p.right)) || (is_energy(&p.left) && is_dynamical(&p.right)))
    {
        if p.status == PairStatus::Nonzero {
            bad.push(format!("[{}, {}] nonzero after truncation", p.left, p.right));
        }
        for t in &p.dropped_terms {
            if t.grading.metric < 1 || t.grading.momentum < 2 {
                bad.push(format!("[{}, {}] drops {} ({})", p.left, p.right, t.term, t.grading));
            }
        }
    }
    checks.push(Check::new(
        "energy_residual_grading",
        bad.is_empty(),
        if bad.is_empty() {
            "residuals of grading >= eps_g eps_p^2 only".to_string()
        } else {
            bad.join("; ")
        },
    ));

    let mut tables = Vec::new();
    for name in &cfg.algebra.tables {
        let table: Table = name.parse().map_err(|e| CliError::Config(format!("algebra.tables: {e}")))?;
        let report = verify_table(table, &rule)?;
        checks.push(Check::new(
            format!("table_{name}"),
            report.failures == 0,
            format!("{} of {} lines fail", report.failures, report.lines.len()),
        ));
        tables.push(report);
    }
    let pass = checks.iter().all(|c| c.pass);
    Ok(AlgebraReport {
        regime: cfg.regime.name().to_string(),
        particles: cfg.algebra.particles,
        first_class,
        tables,
        checks,
        pass,
    })
}

// ---------------------------------------------------------------- states

fn packet_amplitudes(grid: &Grid1D, p: &PacketSpec, what: &str) -> Result<Vec<C64>, CliError> {
    match p.shape {
        Shape::Gaussian => {
            if !(p.width > 0.0) {
                return Err(CliError::Config(format!("{what}: width must be positive")));
            }
            Ok(packets::gaussian(grid, p.center, p.width, p.boost))
        }
        Shape::PlaneWave => {
            let j = grid.wavenumber_index(p.boost);
            let k = grid.wavenumber(j);
            if (k - p.boost).abs() > 1e-9 * p.boost.abs().max(1.0) {
                return Err(CliError::Config(format!(
                    "{what}: plane-wave boost {} is not a grid wavenumber (nearest {k}, spacing {})",
                    p.boost,
                    grid.conjugate_spacing()
                )));
            }
            Ok(plane_wave(grid, p.boost))
        }
    }
}

fn scenario_axes(cfg: &ScenarioConfig) -> Result<ScenarioAxes, CliError> {
    if cfg.params.particles() != 2 {
        return Err(CliError::Config(format!(
            "kind {:?} needs two masses (frame and particle), got {}",
            cfg.kind,
            cfg.params.particles()
        )));
    }
    let axes = cfg.axes.as_ref().expect("validated");
    let clock = match axes.clock {
        Some(g) => Some(g.grid("axes.clock")?),
        None => None,
    };
    Ok(ScenarioAxes::new(
        1,
        vec![ParticleAxes {
            particle: 2,
            space: axes.space.grid("axes.space")?,
            clock,
        }],
        cfg.source.layout()?,
    ))
}

/// Σ αᵢ |branchᵢ⟩ ⊗ |clock⟩ ⊗ |source⟩ ⊗ |ready⟩ over `layout`, normalized.
fn initial_state(cfg: &ScenarioConfig, layout: &[Axis]) -> Result<WaveFunction, CliError> {
    let init = cfg.initial.as_ref().expect("validated");
    if init.branches.is_empty() {
        return Err(CliError::Config("initial.branches is empty".into()));
    }
    let space = space_label(2);
    let mut fixed: BTreeMap<String, Vec<C64>> = BTreeMap::new();
    for a in layout {
        let packet = |p: Option<PacketSpec>, what: &str| -> Result<Vec<C64>, CliError> {
            let p = p.ok_or_else(|| CliError::Config(format!("axis {} needs initial.{what}", a.label)))?;
            packet_amplitudes(&a.grid, &p, &format!("initial.{what}"))
        };
        let amps = if a.label == space {
            continue;
        } else if a.label == clock_label(2) {
            packet(init.clock, "clock")?
        } else if a.label == SOURCE_SPACE {
            packet(init.source_space, "source_space")?
        } else if a.label == SOURCE_TIME {
            packet(init.source_time, "source_time")?
        } else if a.label == POINTER {
            pointer_ready()
        } else {
            return Err(CliError::Config(format!("no initial packet for axis {}", a.label)));
        };
        fixed.insert(a.label.clone(), packets::normalized(amps, a.measure()));
    }
    let mut total: Option<WaveFunction> = None;
    for (i, b) in init.branches.iter().enumerate() {
        let factors = layout
            .iter()
            .map(|a| {
                let amps = if a.label == space {
                    let amps = packet_amplitudes(&a.grid, &b.packet(), &format!("initial.branches[{i}]"))?;
                    packets::normalized(amps, a.measure())
                } else {
                    fixed[&a.label].clone()
                };
                Ok((a.clone(), amps))
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let mut psi = WaveFunction::product(factors)?;
        let alpha = b.amplitude();
        psi.amplitudes_mut().mapv_inplace(|x| x * alpha);
        total = Some(match total {
            None => psi,
            Some(mut acc) => {
                *acc.amplitudes_mut() += psi.amplitudes();
                acc
            }
        });
    }
    let mut psi = total.expect("non-empty");
    if psi.normalize() == 0.0 {
        return Err(CliError::Config("initial branches cancel".into()));
    }
    Ok(psi)
}

fn source_position(cfg: &ScenarioConfig) -> Option<f64> {
    match cfg.source {
        SourceSpec::Absent => None,
        SourceSpec::Sharp { position } => Some(position),
        SourceSpec::Dynamical { .. } => Some(cfg.initial.as_ref()?.source_space?.center),
    }
}

fn diagnostics(cfg: &ScenarioConfig, psi: &WaveFunction) -> Result<RegimeReport, CliError> {
    let mut axes = DiagnosticAxes {
        momenta: vec![(space_label(2), cfg.params.mass(2))],
        positions: Vec::new(),
    };
    if let (true, Some(qm)) = (cfg.params.gm > 0.0, source_position(cfg)) {
        axes.positions.push((space_label(2), qm));
    }
    Ok(regime_diagnostics(psi, &axes, &cfg.params)?)
}

fn check_memory(cfg: &ScenarioConfig, layout: &[Axis], histories: usize, cap_mb: f64) -> Result<(), CliError> {
    let amplitudes: usize = layout.iter().map(|a| a.grid.n_points()).product();
    let snapshots = cfg.tau.map(|t| t.n).unwrap_or(1);
    // Stored snapshots plus split-step and transform workspaces.
    let bytes = amplitudes as f64 * 16.0 * (snapshots + 6) as f64 * histories as f64;
    let estimated_mb = bytes / (1024.0 * 1024.0);
    if estimated_mb > cap_mb {
        let axes = layout
            .iter()
            .map(|a| format!("{}({})", a.label, a.grid.n_points()))
            .collect::<Vec<_>>()
            .join(" x ");
        return Err(CliError::MemoryCap {
            axes,
            amplitudes,
            estimated_mb,
            cap_mb,
        });
    }
    Ok(())
}

// ---------------------------------------------------------------- kinds

#[derive(Default)]
struct Computed {
    checks: Vec<Check>,
    diagnostics: Option<RegimeReport>,
    history: Option<HistoryState>,
    distribution: Option<EventTimeDistribution>,
    predictions: Vec<BranchPrediction>,
    peaks: Vec<f64>,
    schrodinger: Option<SchrodingerReport>,
    swap: Option<QrfSwapReport>,
    algebra: Option<AlgebraReport>,
}

fn run_history(cfg: &ScenarioConfig, cap_mb: f64) -> Result<Computed, CliError> {
    let axes = scenario_axes(cfg)?;
    let layout = axes.axes();
    check_memory(cfg, &layout, 1, cap_mb)?;
    let h = build_hamiltonian(cfg.regime, &cfg.params, &axes)?;
    let psi0 = initial_state(cfg, &layout)?;
    let tau = cfg.tau.expect("validated").grid("tau")?;
    let hist = evolve_history(&psi0, &h, &tau, &cfg.evolve.options())?;
    let e0 = h.energy(&psi0)?;
    let mut drift: f64 = 0.0;
    for s in &hist.snapshots {
        drift = drift.max(((h.energy(s)? - e0) / e0).abs());
    }
    Ok(Computed {
        checks: vec![
            Check::bound("norm", hist.norm_defect(), NORM_TOLERANCE),
            Check::bound("energy_drift", drift, ENERGY_TOLERANCE),
        ],
        diagnostics: Some(diagnostics(cfg, &psi0)?),
        history: Some(hist),
        ..Default::default()
    })
}

fn predictions(cfg: &ScenarioConfig) -> Result<Vec<BranchPrediction>, CliError> {
    let init = cfg.initial.as_ref().expect("validated");
    let event = cfg.event.expect("validated");
    let clock_start = init.clock.map(|c| c.center).unwrap_or(0.0);
    let qm = source_position(cfg).unwrap_or(0.0);
    let total: f64 = init.branches.iter().map(|b| b.amplitude().norm_sqr()).sum();
    init.branches
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let q = if b.shape == Shape::PlaneWave { 0.0 } else { b.center };
            let delta = delta12(cfg.regime, b.boost, q, qm, 0.0, &cfg.params)?;
            Ok(BranchPrediction {
                label: format!("branch{i}"),
                weight: b.amplitude().norm_sqr() / total,
                delta,
                predicted_peak: clock_start + (event.tau_star - clock_start) / delta,
            })
        })
        .collect()
}

fn run_event(cfg: &ScenarioConfig, cap_mb: f64) -> Result<Computed, CliError> {
    let event = cfg.event.expect("validated").spec();
    let axes = scenario_axes(cfg)?;
    let model = EventModel::new(cfg.regime, cfg.params.clone(), axes, event)?;
    let layout = model.layout();
    let histories = if event.readout == Readout::Phase { 2 } else { 1 };
    check_memory(cfg, &layout, histories, cap_mb)?;
    let psi0 = initial_state(cfg, &layout)?;
    let tau = cfg.tau.expect("validated").grid("tau")?;
    let opts = cfg.evolve.options();
    let hist = evolve_with_event(&model, &psi0, &tau, &opts)?;
    let dist = match event.readout {
        Readout::Pointer => event_time_distribution(&hist, Readout::Pointer)?,
        Readout::Phase => {
            let mut quiet = event;
            quiet.kick_phase = 0.0;
            let reference_model = EventModel::new(cfg.regime, cfg.params.clone(), model.axes.clone(), quiet)?;
            let reference = evolve_with_event(&reference_model, &psi0, &tau, &opts)?;
            interferometric_occurrence(&hist, &reference, event.kick_phase)?
        }
    };
    let preds = predictions(cfg)?;
    let peaks = dist.peaks(0.05);

    let mut checks = vec![
        Check::bound("norm", hist.norm_defect(), NORM_TOLERANCE),
        Check::bound("monotone_occurrence", dist.max_decrease(), MONOTONE_TOLERANCE),
    ];
    let tol = event.sigma_t.max(tau.spacing());
    let (first, last) = (tau.offset(), tau.last());
    let mut distinct: Vec<f64> = Vec::new();
    for p in &preds {
        if p.weight > 0.0 && !distinct.iter().any(|d| (d - p.predicted_peak).abs() < tol) {
            distinct.push(p.predicted_peak);
        }
    }
    for (i, want) in distinct.iter().enumerate() {
        if *want < first || *want > last {
            log::warn!("predicted peak {want} lies outside the tau grid [{first}, {last}]");
            continue;
        }
        let nearest = peaks
            .iter()
            .copied()
            .min_by(|a, b| (a - want).abs().total_cmp(&(b - want).abs()));
        checks.push(match nearest {
            Some(got) => Check::new(
                format!("peak_{i}"),
                (got - want).abs() < tol,
                format!("found {got:.6} vs predicted {want:.6} (tolerance {tol})"),
            ),
            None => Check::new(format!("peak_{i}"), false, format!("no peak near {want:.6}")),
        });
    }
    Ok(Computed {
        checks,
        diagnostics: Some(diagnostics(cfg, &psi0)?),
        history: Some(hist),
        distribution: Some(dist),
        predictions: preds,
        peaks,
        ..Default::default()
    })
}

fn run_schrodinger(cfg: &ScenarioConfig) -> Result<Computed, CliError> {
    let grid = cfg.axes.as_ref().expect("validated").space.grid("axes.space")?;
    let r = schrodinger_limit_check(&cfg.params, &grid)?;
    Ok(Computed {
        checks: vec![
            Check::bound("schrodinger_discrepancy", r.max_discrepancy, SCHRODINGER_TOLERANCE),
            Check::new(
                "packet_traversal",
                r.center_shift >= 9.5,
                format!("{:.3} grid spacings", r.center_shift),
            ),
        ],
        schrodinger: Some(r),
        ..Default::default()
    })
}

fn run_swap(cfg: &ScenarioConfig, cap_mb: f64) -> Result<Computed, CliError> {
    let axes = scenario_axes(cfg)?;
    check_memory(cfg, &axes.axes(), 2, cap_mb)?;
    let init = cfg.initial.as_ref().expect("validated");
    if init.branches.len() != 1 || init.branches[0].shape != Shape::Gaussian {
        return Err(CliError::Config("qrf_swap needs exactly one gaussian branch".into()));
    }
    if cfg.source != SourceSpec::Absent {
        return Err(CliError::Config("qrf_swap runs without a source".into()));
    }
    let b = init.branches[0];
    let clock = init.clock.unwrap_or(PacketSpec {
        shape: Shape::Gaussian,
        center: 0.0,
        width: 1.0,
        boost: 0.0,
    });
    let p = &axes.particles[0];
    let setup = SwapSetup {
        regime: cfg.regime,
        params: cfg.params.clone(),
        grid: p.space,
        clock: p.clock,
        center: b.center,
        sigma: b.width,
        k0: b.boost,
        clock_center: clock.center,
        clock_sigma: clock.width,
        tau_grid: cfg.tau.expect("validated").grid("tau")?,
        options: cfg.evolve.options(),
        rule: cfg.algebra.grading_rule(),
    };
    let r = qrf_swap_check(&setup)?;
    let round_trip: Vec<_> = r.symbolic.checks.iter().filter(|c| c.name.contains("T21")).collect();
    Ok(Computed {
        checks: vec![
            Check::new(
                "symbolic_form_invariance",
                r.symbolic.all_pass,
                format!(
                    "{} of {} identities hold ({} round trips)",
                    r.symbolic.checks.iter().filter(|c| c.pass).count(),
                    r.symbolic.checks.len(),
                    round_trip.len()
                ),
            ),
            Check::bound("mirror_position", r.position_deviation, r.tolerance),
            Check::bound("mirror_momentum", r.momentum_deviation, r.tolerance),
            Check::bound("mirror_clock", r.clock_deviation, r.tolerance),
        ],
        swap: Some(r),
        ..Default::default()
    })
}

fn run_algebra(cfg: &ScenarioConfig) -> Result<Computed, CliError> {
    let r = cmd_verify_algebra(cfg)?;
    Ok(Computed {
        checks: r.checks.clone(),
        algebra: Some(r),
        ..Default::default()
    })
}

// ---------------------------------------------------------------- output

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn write_file(path: &Path, f: impl FnOnce(&mut BufWriter<fs::File>) -> Result<(), CliError>) -> Result<(), CliError> {
    let file = fs::File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    f(&mut w)?;
    w.flush().map_err(io_err(path))
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("report serializes");
    fs::write(path, text + "\n").map_err(io_err(path))
}

/// Deterministic metadata written next to the data files.
#[derive(Serialize)]
struct Sidecar<'a> {
    name: &'a str,
    description: &'a str,
    kind: ScenarioKind,
    regime: &'a str,
    artifact_version: &'a str,
    config_hash: &'a str,
    seed: u64,
    units: &'a crate::config::Units,
    params: &'a qrf_spacetime::ModelParams,
    columns: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "<[_]>::is_empty")]
    predictions: &'a [BranchPrediction],
    #[serde(skip_serializing_if = "<[_]>::is_empty")]
    peaks: &'a [f64],
    diagnostics: &'a Option<RegimeReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    schrodinger: &'a Option<SchrodingerReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    swap: &'a Option<QrfSwapReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    algebra: &'a Option<AlgebraReport>,
    checks: &'a [Check],
}

fn write_outputs(
    cfg: &ScenarioConfig,
    hash: &str,
    c: &Computed,
    dir: &Path,
) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let stem = cfg.stem();
    let mut files = Vec::new();
    let mut columns = BTreeMap::new();
    if let Some(h) = &c.history {
        let positional = HistoryState {
            tau_grid: h.tau_grid,
            snapshots: h
                .snapshots
                .iter()
                .map(|s| s.clone().to_all_position())
                .collect::<Result<_, _>>()?,
        };
        if let Some(first) = positional.snapshots.first() {
            for a in first.axes() {
                let path = dir.join(format!("{stem}.{}.dat", a.label));
                write_file(&path, |w| Ok(positional.write_marginal(&a.label, w)?))?;
                columns.insert(
                    path.file_name().unwrap().to_string_lossy().into_owned(),
                    format!("tau {} density", a.label),
                );
                files.push(path);
            }
        }
    }
    if let Some(d) = &c.distribution {
        let path = dir.join(format!("{stem}.events.dat"));
        write_file(&path, |w| d.write_columns(w).map_err(io_err(&path)))?;
        columns.insert(
            path.file_name().unwrap().to_string_lossy().into_owned(),
            "tau1 occurrence".into(),
        );
        files.push(path);
    }
    if let Some(r) = &c.schrodinger {
        let path = dir.join(format!("{stem}.schrodinger.dat"));
        write_file(&path, |w| {
            let mut body = String::from("# time discrepancy\n");
            for (t, d) in r.times.iter().zip(&r.discrepancies) {
                body.push_str(&format!("{t:.12e} {d:.12e}\n"));
            }
            w.write_all(body.as_bytes()).map_err(io_err(&path))
        })?;
        columns.insert(
            path.file_name().unwrap().to_string_lossy().into_owned(),
            "time discrepancy".into(),
        );
        files.push(path);
    }
    let sidecar = Sidecar {
        name: &cfg.name,
        description: &cfg.description,
        kind: cfg.kind,
        regime: cfg.regime.name(),
        artifact_version: ARTIFACT_VERSION,
        config_hash: hash,
        seed: cfg.seed,
        units: &cfg.units,
        params: &cfg.params,
        columns,
        predictions: &c.predictions,
        peaks: &c.peaks,
        diagnostics: &c.diagnostics,
        schrodinger: &c.schrodinger,
        swap: &c.swap,
        algebra: &c.algebra,
        checks: &c.checks,
    };
    let path = dir.join(format!("{stem}.json"));
    write_json(&path, &sidecar)?;
    files.push(path);
    Ok(files)
}

/// Runs one scenario and writes its data files, sidecar and manifest.
pub fn cmd_run(cfg: &ScenarioConfig, opts: &RunOptions) -> Result<RunOutcome, CliError> {
    let start = Instant::now();
    let cfg = effective_config(cfg, opts)?;
    let hash = config_hash(&cfg);
    let cap = opts.max_mem_mb.unwrap_or(cfg.resources.max_mem_mb);
    log::info!("running {} ({:?}, {})", cfg.name, cfg.kind, cfg.regime.name());
    let computed = match cfg.kind {
        ScenarioKind::Algebra => run_algebra(&cfg)?,
        ScenarioKind::History => run_history(&cfg, cap)?,
        ScenarioKind::Event => run_event(&cfg, cap)?,
        ScenarioKind::SchrodingerLimit => run_schrodinger(&cfg)?,
        ScenarioKind::QrfSwap => run_swap(&cfg, cap)?,
    };
    let dir = opts
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(&cfg.output.directory));
    let mut files = write_outputs(&cfg, &hash, &computed, &dir)?;
    let manifest_path = dir.join(format!("{}.manifest.json", cfg.stem()));
    files.push(manifest_path.clone());
    let manifest = RunManifest {
        name: cfg.name.clone(),
        kind: cfg.kind,
        regime: cfg.regime.name().to_string(),
        config_hash: hash,
        artifact_version: ARTIFACT_VERSION.to_string(),
        seed: cfg.seed,
        diagnostics: computed.diagnostics.clone(),
        wall_clock_seconds: start.elapsed().as_secs_f64(),
        pass: computed.checks.iter().all(|c| c.pass),
        checks: computed.checks.clone(),
        files: files
            .iter()
            .map(|f| f.file_name().unwrap().to_string_lossy().into_owned())
            .collect(),
    };
    write_json(&manifest_path, &manifest)?;
    for c in manifest.checks.iter().filter(|c| !c.pass) {
        log::warn!("check {} failed: {}", c.name, c.detail);
    }
    Ok(RunOutcome {
        manifest,
        files,
        history: computed.history,
        distribution: computed.distribution,
        predictions: computed.predictions,
        schrodinger: computed.schrodinger,
        swap: computed.swap,
        algebra: computed.algebra,
    })
}
