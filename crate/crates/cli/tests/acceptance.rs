//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config as ProptestConfig, TestRunner};
use qrf_cli::invariants::{check_case, clock_grid, InvariantCase};
use qrf_cli::{cmd_run, cmd_verify_algebra, preset, RunOptions, RunOutcome, ScenarioConfig};
use qrf_engine::{EvolveOptions, ParticleAxes, ScenarioAxes, SourceLayout};
use qrf_events::{
    closed_form_history, delta12, evolve_with_event, EventModel, EventSpec, KickProfile,
};
use qrf_numerics::{hamiltonian_matrix, packets, trotter_evolve, DenseOracle, Grid1D, TrotterPlan, C64};
use qrf_spacetime::{ModelParams, Regime};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn run_preset(name: &str) -> RunOutcome {
    let dir = tempfile::tempdir().unwrap();
    let opts = RunOptions {
        out: Some(dir.path().to_path_buf()),
        ..Default::default()
    };
    cmd_run(&preset(name).unwrap(), &opts).unwrap()
}

fn algebra_config(tables: &str) -> ScenarioConfig {
    ScenarioConfig::parse(&format!(
        r#"
schema_version = 1
name = "algebra-full"
kind = "algebra"
regime = "full"
[units]
system = "natural"
hbar = 1.0
length = "L"
time = "L/c"
mass = "hbar/(L c)"
[params]
masses = [1.0, 2.0, 3.0]
gm = 0.1
c = 1.0
[algebra]
tables = {tables}
"#
    ))
    .unwrap()
}

fn constraint_algebra() -> Outcome {
    let r = cmd_verify_algebra(&algebra_config("[]")).unwrap();
    let exact = r
        .first_class
        .pairs
        .iter()
        .filter(|p| p.left == "f1" || p.right == "f1")
        .all(|p| p.status == qrf_algebra::PairStatus::ExactZero);
    let lines: Vec<String> = r.checks.iter().map(|c| format!("{}={}", c.name, c.pass)).collect();
    ensure(r.pass && exact, format!("{} pairs; {}", r.first_class.pairs.len(), lines.join(", ")))
}

fn conjugation_tables() -> Outcome {
    let r = cmd_verify_algebra(&algebra_config(r#"["T1", "T2", "T12"]"#)).unwrap();
    let total: usize = r.tables.iter().map(|t| t.lines.len()).sum();
    let failed: Vec<String> = r
        .tables
        .iter()
        .flat_map(|t| {
            t.lines
                .iter()
                .filter(|l| !l.pass)
                .map(move |l| format!("{:?}: {}", t.table, l.lhs))
        })
        .collect();
    ensure(
        failed.is_empty(),
        format!("{} of {total} identities reproduce; failing: [{}]", total - failed.len(), failed.join("; ")),
    )
}

fn schrodinger_limit() -> Outcome {
    let out = run_preset("schrodinger-limit");
    let r = out.schrodinger.as_ref().unwrap();
    let grid = preset("schrodinger-limit").unwrap().axes.unwrap().space;
    ensure(
        grid.n == 256 && r.max_discrepancy < 1e-6 && (r.center_shift - 10.0).abs() < 0.5,
        format!(
            "{}-point grid, max L2 discrepancy {:.3e}, packet moved {:.3} spacings",
            grid.n, r.max_discrepancy, r.center_shift
        ),
    )
}

/// Trotter deviation from the dense propagator for H plus the kick, on the
/// unit-norm amplitude vector, at steps `dt` and `2 dt`.
fn oracle_instance(regime: Regime) -> (usize, f64, f64) {
    let gm = if regime.has_gravity() { 0.5 } else { 0.0 };
    let source = if regime.has_gravity() {
        SourceLayout::Sharp { position: -30.0 }
    } else {
        SourceLayout::Absent
    };
    let p = ModelParams::new(vec![1.0, 2.0], gm, 1.0, 1.0).unwrap();
    let space = Grid1D::centered(16, 8.0, 0.0).unwrap();
    let clock = Grid1D::new(32, 8.0, -2.0).unwrap();
    let axes = ScenarioAxes::new(
        1,
        vec![ParticleAxes {
            particle: 2,
            space,
            clock: Some(clock),
        }],
        source,
    );
    let m = EventModel::new(regime, p, axes, EventSpec::pointer_flip(0.5, 0.3)).unwrap();
    let psi = m
        .initial_state(
            &[(C64::new(1.0, 0.0), packets::gaussian(&space, 0.0, 1.0, 0.5))],
            packets::gaussian(&clock, 0.0, 0.5, 0.0),
            None,
        )
        .unwrap();
    let mut kernels = m.hamiltonian.kernels();
    kernels.extend(m.kick_kernels().unwrap());
    let h = hamiltonian_matrix(&m.layout(), &kernels).unwrap();
    let t = 1.0;
    let exact = DenseOracle::new(&h).unwrap().evolve(&psi.flat(), t).unwrap();
    let scale = psi.measure().sqrt();
    let dev = |dt: f64| {
        let plan = TrotterPlan::strang(&kernels, dt, (t / dt).round() as usize).unwrap();
        let out = trotter_evolve(&plan, &psi).unwrap().with_bases_of(psi.axes()).unwrap();
        out.flat()
            .iter()
            .zip(&exact)
            .map(|(a, b)| (a - b).norm() * scale)
            .fold(0.0, f64::max)
    };
    (h.dim(), dev(1e-3), dev(2e-3))
}

fn oracle_equivalence() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for regime in [Regime::Galilean, Regime::SpecialRelativistic, Regime::Newtonian, Regime::Full] {
        let (dim, d1, d2) = oracle_instance(regime);
        let ratio = d2 / d1;
        ok &= dim <= 4096 && d1 < 1e-6 && (3.5..=4.5).contains(&ratio);
        parts.push(format!("{}: dim {dim}, dev {d1:.2e}, ratio {ratio:.3}", regime.name()));
    }
    ensure(ok, parts.join("; "))
}

fn galilean_event() -> Outcome {
    let out = run_preset("galilean-event");
    let e = preset("galilean-event").unwrap().event.unwrap();
    let d = out.distribution.as_ref().unwrap();
    let width = d.crossing(0.9).unwrap() - d.crossing(0.1).unwrap();
    let pre: f64 = d
        .times()
        .iter()
        .zip(&d.occurrence)
        .filter(|(t, _)| **t <= e.tau_star - 4.0 * e.sigma_t)
        .map(|(_, p)| *p)
        .fold(0.0, f64::max);
    let peaks = d.peaks(0.5);
    let step_at = peaks.first().copied().unwrap_or(f64::NAN);
    ensure(
        width <= 2.0 * e.sigma_t && pre < 1e-6 && peaks.len() == 1 && (step_at - e.tau_star).abs() < d.tau1_grid.spacing(),
        format!(
            "step at {step_at:.4} (tau* {}), 10-90% width {width:.4} <= {}, pre-step mass {pre:.2e}",
            e.tau_star,
            2.0 * e.sigma_t
        ),
    )
}

// Peaks τ*/Δ₁₂ at k = 0.8 and 0.4 (m₁ = 1, m₂ = 2, c = 1, τ* = 10), with
// Δ₁₂ = √(1 + k²/m₁²c²)/√(1 + k²/m₂²c²) evaluated independently.
const SR_PEAKS: [f64; 2] = [8.410214463203253, 9.468641529479987];

fn special_relativistic_superposition() -> Outcome {
    let cfg = preset("sr-two-momenta").unwrap();
    let e = cfg.event.unwrap();
    let out = run_preset("sr-two-momenta");
    let d = out.distribution.as_ref().unwrap();
    let tol = e.sigma_t.max(d.tau1_grid.spacing());
    let peaks = d.peaks(0.2);
    let m = &cfg.params.masses;
    let eps: Vec<f64> = cfg.initial.as_ref().unwrap().branches.iter().map(|b| b.boost / (m[1] * cfg.params.c)).collect();
    let weights: Vec<f64> = cfg.initial.as_ref().unwrap().branches.iter().map(|b| b.amplitude().norm_sqr()).collect();
    let mid = 0.5 * (SR_PEAKS[0] + SR_PEAKS[1]);
    let first = d.plateau(mid - 0.05, mid + 0.05).unwrap();
    let last = d.plateau(SR_PEAKS[1] + 1.0, SR_PEAKS[1] + 2.0).unwrap();
    // The faster clock (k = 0.8, second branch) fires first.
    let ok = peaks.len() == 2
        && (peaks[0] - SR_PEAKS[0]).abs() < tol
        && (peaks[1] - SR_PEAKS[1]).abs() < tol
        && (first - weights[1]).abs() < 1e-3
        && (last - first - weights[0]).abs() < 1e-3
        && m[1] == 2.0 * m[0];
    ensure(
        ok,
        format!(
            "eps_p {eps:?}; peaks {peaks:.4?} vs {SR_PEAKS:.4?} (tol {tol}); plateaus {first:.5}, +{:.5} vs {weights:?}",
            last - first
        ),
    )
}

// τ*·√(g₀₀(q_M)/g₀₀(q_b − q_M)) for q_M = −100, GM = 0.1, c = 1, τ* = 50,
// q_b = 0 and −80, evaluated independently.
const REDSHIFT_PEAKS: [f64; 2] = [50.0, 50.201613721094866];

fn gravitational_superposition() -> Outcome {
    let cfg = preset("newtonian-two-positions").unwrap();
    let e = cfg.event.unwrap();
    let qm = -100.0;
    let phi: Vec<f64> = cfg
        .initial
        .as_ref()
        .unwrap()
        .branches
        .iter()
        .map(|b| cfg.params.gm / (b.center - qm).abs() / cfg.params.c.powi(2))
        .collect();
    let out = run_preset("newtonian-two-positions");
    let d = out.distribution.as_ref().unwrap();
    let tol = e.sigma_t.max(d.tau1_grid.spacing());
    let peaks = d.peaks(0.2);
    // SR factor at k₂ = 0 with m₁ = m₂: full versus redshift-only rate.
    let mut sr_shift: f64 = 0.0;
    for b in &cfg.initial.as_ref().unwrap().branches {
        let full = delta12(Regime::Full, 0.0, b.center, qm, 0.0, &cfg.params).unwrap();
        let newt = delta12(Regime::Newtonian, 0.0, b.center, qm, 0.0, &cfg.params).unwrap();
        sr_shift = sr_shift.max((e.tau_star / full - e.tau_star / newt).abs());
    }
    let ok = peaks.len() == 2
        && (peaks[0] - REDSHIFT_PEAKS[0]).abs() < tol
        && (peaks[1] - REDSHIFT_PEAKS[1]).abs() < tol
        && (phi[0] - 1e-3).abs() < 1e-12
        && (phi[1] - 5e-3).abs() < 1e-12
        && sr_shift < 1e-6
        && cfg.params.masses[0] == cfg.params.masses[1];
    ensure(
        ok,
        format!("|Phi|/c^2 {phi:?}; peaks {peaks:.4?} vs {REDSHIFT_PEAKS:.4?} (tol {tol}); SR-factor shift {sr_shift:.1e}"),
    )
}

fn frame_swap() -> Outcome {
    let out = run_preset("qrf-swap-mirror");
    let r = out.swap.as_ref().unwrap();
    let hamiltonian = r.symbolic.checks.iter().any(|c| c.name.starts_with("H2") && c.pass);
    let trips: Vec<_> = r.symbolic.checks.iter().filter(|c| c.name.starts_with("T21 T12")).collect();
    let ok = out.pass() && hamiltonian && !trips.is_empty() && trips.iter().all(|c| c.pass);
    ensure(
        ok,
        format!(
            "H2 = swap(H1) {hamiltonian}; {} round trips identity; mirror deviations {:.1e}/{:.1e}/{:.1e}",
            trips.iter().filter(|c| c.pass).count(),
            r.position_deviation,
            r.momentum_deviation,
            r.clock_deviation
        ),
    )
}

fn closed_form_cross_validation() -> Outcome {
    let tau = Grid1D::with_spacing(32, 0.25, 0.0).unwrap();
    let opts = EvolveOptions::with_step(0.25 / 16.0);
    let mut parts = Vec::new();
    let mut ok = true;
    for regime in [Regime::Galilean, Regime::SpecialRelativistic, Regime::Newtonian] {
        let (gm, source) = if regime == Regime::Newtonian {
            (0.5, SourceLayout::Sharp { position: -100.0 })
        } else {
            (0.0, SourceLayout::Absent)
        };
        let p = ModelParams::new(vec![4.0, 2.0], gm, 1.0, 1.0).unwrap();
        let space = Grid1D::centered(64, 64.0, 0.0).unwrap();
        let clock = Grid1D::new(64, 16.0, -4.0).unwrap();
        let axes = ScenarioAxes::new(
            1,
            vec![ParticleAxes {
                particle: 2,
                space,
                clock: Some(clock),
            }],
            source,
        );
        let sigma_t = 2.0 * clock.spacing();
        let m = EventModel::new(regime, p, axes, EventSpec::pointer_flip(6.0, sigma_t)).unwrap();
        let half = C64::new(0.5f64.sqrt(), 0.0);
        let psi = m
            .initial_state(
                &[
                    (half, packets::gaussian(&space, -8.0, 3.0, 0.5)),
                    (half, packets::gaussian(&space, 10.0, 3.0, -0.3)),
                ],
                packets::gaussian(&clock, 0.0, sigma_t, 0.0),
                None,
            )
            .unwrap();
        let ordered = evolve_with_event(&m, &psi, &tau, &opts).unwrap();
        let closed = closed_form_history(&m, &psi, &tau, &opts, KickProfile::Regularized).unwrap();
        let dist = ordered.max_distance(&closed).unwrap();
        ok &= dist < 1e-4;
        parts.push(format!("{}: {dist:.2e}", regime.name()));
    }
    ensure(ok, format!("64-point axes, sigma_t = 2 spacings; L2 distance {}", parts.join(", ")))
}

fn case_strategy() -> impl Strategy<Value = InvariantCase> {
    let spacing = clock_grid().spacing();
    (
        prop::sample::select(vec![Regime::Galilean, Regime::SpecialRelativistic, Regime::Newtonian, Regime::Full]),
        (0.5f64..3.0, 0.5f64..3.0, 1.0f64..4.0, 0.0f64..0.5, -120.0f64..-40.0),
        (-4.0f64..4.0, 1.0f64..3.0, -1.0f64..1.0, 0.5f64..1.0),
        prop::option::of((0.5f64..1.5, spacing..1.6 * spacing)),
    )
        .prop_map(|(regime, (m1, m2, c, gm, source), (center, width, boost, clock_width), event)| InvariantCase {
            regime,
            masses: [m1, m2],
            c,
            gm: if regime.has_gravity() { gm } else { 0.0 },
            source,
            center,
            width,
            boost,
            clock_width,
            event,
        })
}

fn invariant_suite() -> Outcome {
    let cases = 128;
    let mut runner = TestRunner::new(ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    });
    let worst = std::cell::Cell::new((0.0f64, 0.0f64));
    let count = std::cell::Cell::new(0u32);
    let result = runner.run(&case_strategy(), |case| {
        let r = check_case(&case).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let (n, e) = worst.get();
        worst.set((n.max(r.norm_defect), e.max(r.energy_drift)));
        count.set(count.get() + 1);
        prop_assert!(r.pass(), "{:?}: {:?}", case, r.failures);
        Ok(())
    });
    match result {
        Ok(()) => Ok(format!(
            "{} randomized configurations; worst norm defect {:.1e}, energy drift {:.1e}; origin metric exact, occurrence monotone, limits coherent",
            count.get(),
            worst.get().0,
            worst.get().1
        )),
        Err(e) => Err(e.to_string()),
    }
}

struct Criterion {
    number: u32,
    name: &'static str,
    budget: Duration,
    check: fn() -> Outcome,
}

fn main() {
    let criteria = [
        Criterion { number: 1, name: "constraint algebra closure", budget: Duration::from_secs(30), check: constraint_algebra },
        Criterion { number: 2, name: "conjugation tables", budget: Duration::from_secs(120), check: conjugation_tables },
        Criterion { number: 3, name: "schrodinger-limit recovery", budget: Duration::from_secs(60), check: schrodinger_limit },
        Criterion { number: 4, name: "dense oracle equivalence", budget: Duration::from_secs(300), check: oracle_equivalence },
        Criterion { number: 5, name: "galilean event localization", budget: Duration::from_secs(60), check: galilean_event },
        Criterion { number: 6, name: "superposed special-relativistic dilation", budget: Duration::from_secs(300), check: special_relativistic_superposition },
        Criterion { number: 7, name: "superposed gravitational redshift", budget: Duration::from_secs(300), check: gravitational_superposition },
        Criterion { number: 8, name: "frame-swap form invariance", budget: Duration::from_secs(120), check: frame_swap },
        Criterion { number: 9, name: "closed form vs time ordering", budget: Duration::from_secs(300), check: closed_form_cross_validation },
        Criterion { number: 10, name: "invariant suite", budget: Duration::from_secs(600), check: invariant_suite },
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for c in &criteria {
        let label = format!("criterion {:>2} {}", c.number, c.name);
        if !filter.is_empty() && !filter.iter().any(|f| label.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(c.check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let over = elapsed > c.budget;
        let (pass, detail) = match result {
            Ok(d) if !over => (true, d),
            Ok(d) => (false, format!("{d}; over the {:?} budget", c.budget)),
            Err(d) => (false, d),
        };
        println!(
            "{} {label} ({:.1} s): {detail}",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
        failed += usize::from(!pass);
    }
    println!("acceptance: {} failed", failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
