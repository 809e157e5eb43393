//! Non-autonomous orbits `ω_n`, windows `ω^n_{n+k}` and limit iterates `f^k`.
//!
//! Every function applies the maps in the same order with the same
//! arithmetic, so `ω_{n+k}(x) = ω^n_{n+k}(ω_n(x))` holds bit for bit.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::family::MapFamily;
use crate::space::Point;

/// `ω_n(x) = f_n ∘ … ∘ f_1 (x)`, with `ω_0` the identity.
pub fn omega(fam: &MapFamily, x: &Point, n: usize) -> Result<Point> {
    omega_window(fam, x, 0, n)
}

/// `ω^n_{n+k}(x) = f_{n+k} ∘ … ∘ f_{n+1} (x)`.
pub fn omega_window(fam: &MapFamily, x: &Point, n: usize, k: usize) -> Result<Point> {
    let mut p = x.clone();
    for i in n + 1..=n + k {
        p = fam.apply_step(i, &p)?;
    }
    Ok(p)
}

/// `f^k(x)`.
pub fn limit_iterate(fam: &MapFamily, x: &Point, k: usize) -> Result<Point> {
    let mut p = x.clone();
    for _ in 0..k {
        p = fam.limit.apply(&p)?;
    }
    Ok(p)
}

/// The states `ω_0(x), …, ω_N(x)` of one orbit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub start: Point,
    pub states: Vec<Point>,
    pub horizon: usize,
}

impl Trajectory {
    pub fn state(&self, n: usize) -> &Point {
        &self.states[n]
    }
}

pub fn trajectory(fam: &MapFamily, x: &Point, horizon: usize) -> Result<Trajectory> {
    let mut states = Vec::with_capacity(horizon + 1);
    states.push(x.clone());
    for n in 1..=horizon {
        let next = fam.apply_step(n, &states[n - 1])?;
        states.push(next);
    }
    Ok(Trajectory { start: x.clone(), states, horizon })
}

/// Images of a set of points under `ω^n_{n+k}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompositionWindow {
    pub base: usize,
    pub length: usize,
    pub inputs: Vec<Point>,
    pub outputs: Vec<Point>,
}

impl CompositionWindow {
    pub fn evaluate(fam: &MapFamily, base: usize, length: usize, inputs: Vec<Point>) -> Result<Self> {
        let outputs = inputs.iter().map(|x| omega_window(fam, x, base, length)).collect::<Result<_>>()?;
        Ok(CompositionWindow { base, length, inputs, outputs })
    }
}
