use std::fmt;

/// Particle label: numbered particles or the source mass `M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Party {
    P(u8),
    M,
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Party::P(i) => write!(f, "{i}"),
            Party::M => write!(f, "M"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Component {
    Time,
    Space,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Position,
    Momentum,
    InternalTime,
    InternalEnergy,
}

/// A basic canonical operator. Internal clock symbols carry
/// `Component::Time` by convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalSymbol {
    pub particle: Party,
    pub component: Component,
    pub kind: Kind,
}

impl CanonicalSymbol {
    pub fn x0(p: Party) -> Self {
        Self::new(p, Component::Time, Kind::Position)
    }
    pub fn x(p: Party) -> Self {
        Self::new(p, Component::Space, Kind::Position)
    }
    pub fn p0(p: Party) -> Self {
        Self::new(p, Component::Time, Kind::Momentum)
    }
    pub fn p(p: Party) -> Self {
        Self::new(p, Component::Space, Kind::Momentum)
    }
    pub fn clock_time(i: u8) -> Self {
        Self::new(Party::P(i), Component::Time, Kind::InternalTime)
    }
    pub fn clock_energy(i: u8) -> Self {
        Self::new(Party::P(i), Component::Time, Kind::InternalEnergy)
    }

    pub fn new(particle: Party, component: Component, kind: Kind) -> Self {
        Self {
            particle,
            component,
            kind,
        }
    }

    /// Positions and internal times sit to the left in normal order.
    pub fn is_position_like(&self) -> bool {
        matches!(self.kind, Kind::Position | Kind::InternalTime)
    }

    /// The partner with which this symbol has a nonzero commutator.
    pub fn conjugate(&self) -> Self {
        let kind = match self.kind {
            Kind::Position => Kind::Momentum,
            Kind::Momentum => Kind::Position,
            Kind::InternalTime => Kind::InternalEnergy,
            Kind::InternalEnergy => Kind::InternalTime,
        };
        Self { kind, ..*self }
    }

    /// Spatial momenta count towards the momentum grading.
    pub fn is_spatial_momentum(&self) -> bool {
        self.kind == Kind::Momentum && self.component == Component::Space
    }

    pub fn with_particle(&self, particle: Party) -> Self {
        Self { particle, ..*self }
    }
}

impl fmt::Display for CanonicalSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let stem = match (self.kind, self.component) {
            (Kind::Position, Component::Time) => "x0",
            (Kind::Position, Component::Space) => "x",
            (Kind::Momentum, Component::Time) => "p0",
            (Kind::Momentum, Component::Space) => "p",
            (Kind::InternalTime, _) => "T",
            (Kind::InternalEnergy, _) => "H",
        };
        write!(f, "{stem}_{}", self.particle)
    }
}

/// Central elements: physical parameters and observables that commute with
/// every canonical symbol.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Param {
    Mass(Party),
    C,
    Hbar,
    /// Kick observable attached to the clock of particle `i`.
    Observable(u8),
    Named(String),
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::Mass(p) => write!(f, "m_{p}"),
            Param::C => write!(f, "c"),
            Param::Hbar => write!(f, "hbar"),
            Param::Observable(i) => write!(f, "Q_{i}"),
            Param::Named(s) => write!(f, "{s}"),
        }
    }
}
