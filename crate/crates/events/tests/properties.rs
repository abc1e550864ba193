use proptest::prelude::*;
use qrf_engine::{EvolveOptions, ParticleAxes, ScenarioAxes, SourceLayout};
use qrf_events::{delta12, event_time_distribution, evolve_with_event, plane_wave, EventModel, EventSpec, Readout};
use qrf_numerics::{packets, Grid1D, C64};
use qrf_spacetime::{ModelParams, Regime};

fn axes(space: Grid1D, clock: Grid1D) -> ScenarioAxes {
    ScenarioAxes::new(
        1,
        vec![ParticleAxes {
            particle: 2,
            space,
            clock: Some(clock),
        }],
        SourceLayout::Absent,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn occurrence_never_decreases(
        relativistic in any::<bool>(),
        theta in 0.0f64..std::f64::consts::FRAC_PI_2,
        tau_star in 2.0f64..4.0,
        sigma_t in 0.25f64..0.5,
        center in -3.0f64..3.0,
        k0 in -0.5f64..0.5,
        m2 in 1.0f64..3.0,
    ) {
        let regime = if relativistic { Regime::SpecialRelativistic } else { Regime::Galilean };
        let p = ModelParams::new(vec![2.0, m2], 0.0, 1.0, 1.0).unwrap();
        let space = Grid1D::centered(64, 96.0, 0.0).unwrap();
        let clock = Grid1D::new(64, 16.0, -2.0).unwrap();
        let event = EventSpec { kick_phase: theta, ..EventSpec::pointer_flip(tau_star, sigma_t) };
        let m = EventModel::new(regime, p, axes(space, clock), event).unwrap();
        let psi = m.initial_state(
            &[(C64::new(1.0, 0.0), packets::gaussian(&space, center, 3.0, k0))],
            packets::gaussian(&clock, 0.0, 0.25, 0.0),
            None,
        ).unwrap();
        let tau = Grid1D::with_spacing(32, 0.25, 0.0).unwrap();
        let h = evolve_with_event(&m, &psi, &tau, &EvolveOptions::with_step(0.25 / 8.0)).unwrap();
        let d = event_time_distribution(&h, Readout::Pointer).unwrap();
        prop_assert!(d.max_decrease() < 1e-9, "{}", d.max_decrease());
        prop_assert!(d.occurrence.iter().all(|p| *p >= -1e-12 && *p <= 1.0 + 1e-12));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn peak_follows_the_relative_clock_rate(
        index in 1usize..5,
        m2 in 1.5f64..3.0,
        tau_star in 6.0f64..9.0,
    ) {
        let p = ModelParams::new(vec![1.0, m2], 0.0, 1.0, 1.0).unwrap();
        let space = Grid1D::centered(16, 2.0 * std::f64::consts::PI / 0.2, 0.0).unwrap();
        let clock = Grid1D::new(512, 16.0, -2.0).unwrap();
        let sigma_t = 0.125;
        let m = EventModel::new(Regime::SpecialRelativistic, p.clone(), axes(space, clock), EventSpec::pointer_flip(tau_star, sigma_t)).unwrap();
        let k = space.wavenumber(index);
        let psi = m.initial_state(
            &[(C64::new(1.0, 0.0), plane_wave(&space, k))],
            packets::gaussian(&clock, 0.0, clock.spacing(), 0.0),
            None,
        ).unwrap();
        let rate = delta12(Regime::SpecialRelativistic, k, 0.0, 0.0, 0.0, &p).unwrap();
        let expected = tau_star / rate;
        let spacing = 0.03125;
        let start = ((expected - 1.0) / spacing).floor() * spacing;
        let tau = Grid1D::with_spacing(64, spacing, start).unwrap();
        let opts = EvolveOptions::with_step(spacing / 4.0).unchecked("q_2");
        let h = evolve_with_event(&m, &psi, &tau, &opts).unwrap();
        let d = event_time_distribution(&h, Readout::Pointer).unwrap();
        let peaks = d.peaks(0.5);
        prop_assert_eq!(peaks.len(), 1);
        prop_assert!((peaks[0] - expected).abs() < sigma_t.max(spacing), "{:?} vs {}", peaks, expected);
        // Classical relation between the two proper times.
        prop_assert!((peaks[0] / tau_star - 1.0 / rate).abs() < sigma_t.max(spacing) / tau_star);
    }
}
