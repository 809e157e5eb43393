//! Non-autonomous discrete dynamical systems generated by a sequence of maps
//! `f_1, f_2, ...` converging uniformly to a limit map `f`.
//!
//! The crate is split along the pipeline a study goes through:
//!
//! * [`space`] phase spaces (circle, unit interval, binary sequences), metrics,
//!   supremum and Hausdorff estimates, deterministic samplers.
//! * [`family`] map descriptors, indexed families with their limit, the builtin
//!   scenario catalog and hypothesis profiling.
//! * [`orbit`] orbits `ω_n`, composition windows `ω^n_{n+k}` and limit iterates.
//! * [`bounds`] orbit-deviation bounds and collective-convergence profiles.
//! * [`checkers`] finite-horizon semi-decision procedures for dynamical properties.
//! * [`report`] scenario specs, comparison reports, reproduction and emission.

pub mod bounds;
pub mod checkers;
pub mod error;
pub mod family;
pub mod orbit;
pub mod report;
pub mod space;

pub use bounds::{BoundLedger, CollectiveProfile, DeviationRecord};
pub use checkers::{Basis, CheckConfig, Mode, Outcome, Property, SystemView, Verdict, Witness};
pub use error::{Error, Result};
pub use family::{
    BuiltinFamily, Generator, HypothesisProfile, MapDescriptor, MapFamily, Summability,
    SummabilityEstimate,
};
pub use orbit::{CompositionWindow, Trajectory};
pub use report::{ComparisonReport, ComparisonRow, ScenarioSpec};
pub use space::{BinaryWord, PhaseSpace, Point, PointCloud, SpaceKind, SupEstimate};

/// Default additive tolerance for floating-point comparisons.
pub const DEFAULT_TOL: f64 = 1e-9;
