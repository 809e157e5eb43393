use serde::{Deserialize, Serialize};

use crate::space::Point;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Holds,
    Refuted,
    Inconclusive,
}

/// What a verdict rests on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Basis {
    /// A concrete finite witness that replays.
    Witness,
    /// A structural rule on the descriptors (isometric steps, plateau collapse, closed forms).
    Symbolic,
    /// Evidence gathered up to the horizon, or its exhaustion.
    Horizon,
}

/// Reproducible inputs behind a verdict.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<Point>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub indices: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub values: Vec<f64>,
}

impl Witness {
    pub fn new(points: Vec<Point>, indices: Vec<usize>, values: Vec<f64>) -> Self {
        Witness { points, indices, values }
    }

    pub fn horizon(n: usize) -> Self {
        Witness { indices: vec![n], ..Default::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub basis: Basis,
    pub witness: Witness,
    pub narrative: String,
}

impl Verdict {
    pub fn holds(basis: Basis, witness: Witness, narrative: impl Into<String>) -> Self {
        Verdict { outcome: Outcome::Holds, basis, witness, narrative: narrative.into() }
    }

    pub fn refuted(basis: Basis, witness: Witness, narrative: impl Into<String>) -> Self {
        Verdict { outcome: Outcome::Refuted, basis, witness, narrative: narrative.into() }
    }

    /// No decision; the witness records the exhausted horizon.
    pub fn inconclusive(horizon: usize, narrative: impl Into<String>) -> Self {
        Verdict {
            outcome: Outcome::Inconclusive,
            basis: Basis::Horizon,
            witness: Witness::horizon(horizon),
            narrative: narrative.into(),
        }
    }

    pub fn is_holds(&self) -> bool {
        self.outcome == Outcome::Holds
    }

    pub fn is_refuted(&self) -> bool {
        self.outcome == Outcome::Refuted
    }
}
