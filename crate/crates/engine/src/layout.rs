//! Axis layout of a reduced scenario seen from one frame particle.

use qrf_numerics::{Axis, Basis, Grid1D};

/// Label of the spatial axis of particle `i` (relative to the frame).
pub fn space_label(i: u8) -> String {
    format!("q_{i}")
}

/// Label of the internal clock axis of particle `i`.
pub fn clock_label(i: u8) -> String {
    format!("t_{i}")
}

pub const SOURCE_SPACE: &str = "q_M";
pub const SOURCE_TIME: &str = "t_M";

#[derive(Debug, Clone, PartialEq)]
pub struct ParticleAxes {
    pub particle: u8,
    pub space: Grid1D,
    /// Grid of the internal clock time, when the particle carries a clock.
    pub clock: Option<Grid1D>,
}

/// How the source mass enters the reduced description.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SourceLayout {
    /// No source (flat regimes).
    Absent,
    /// Classical source at a fixed position relative to the frame.
    Sharp { position: f64 },
    /// Quantum source with a spatial axis and a time axis whose conjugate
    /// generates the source term.
    Dynamical { space: Grid1D, time: Grid1D },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioAxes {
    /// Particle whose clock defines the evolution parameter.
    pub frame: u8,
    pub particles: Vec<ParticleAxes>,
    pub source: SourceLayout,
    /// Additional axes (e.g. a measurement pointer) carried along untouched.
    pub extra: Vec<Axis>,
}

impl ScenarioAxes {
    pub fn new(frame: u8, particles: Vec<ParticleAxes>, source: SourceLayout) -> Self {
        Self {
            frame,
            particles,
            source,
            extra: Vec::new(),
        }
    }

    pub fn with_extra(mut self, axis: Axis) -> Self {
        self.extra.push(axis);
        self
    }

    /// Every axis in position representation, particles first.
    pub fn axes(&self) -> Vec<Axis> {
        let mut out = Vec::new();
        for p in &self.particles {
            out.push(Axis::new(space_label(p.particle), p.space, Basis::Position));
            if let Some(g) = p.clock {
                out.push(Axis::new(clock_label(p.particle), g, Basis::Position));
            }
        }
        if let SourceLayout::Dynamical { space, time } = self.source {
            out.push(Axis::new(SOURCE_SPACE, space, Basis::Position));
            out.push(Axis::new(SOURCE_TIME, time, Basis::Position));
        }
        out.extend(self.extra.iter().cloned());
        out
    }

    pub fn non_frame(&self) -> Vec<u8> {
        self.particles.iter().map(|p| p.particle).collect()
    }

    pub fn sharp_source(&self) -> Option<f64> {
        match self.source {
            SourceLayout::Sharp { position } => Some(position),
            _ => None,
        }
    }

    pub fn dynamical_source(&self) -> Option<(Grid1D, Grid1D)> {
        match self.source {
            SourceLayout::Dynamical { space, time } => Some((space, time)),
            _ => None,
        }
    }

    pub fn dimension(&self) -> usize {
        self.axes().iter().map(|a| a.grid.n_points()).product()
    }
}
