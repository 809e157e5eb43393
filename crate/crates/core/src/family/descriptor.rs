//! The map descriptor algebra.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{circle_distance, wrap_angle, BinaryWord, Point, SpaceKind};

/// How a [`MapDescriptor::Lookup`] table is read between grid nodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Interp {
    Linear,
    Nearest,
}

/// An evaluable self-map of one of the phase spaces.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "map", rename_all = "kebab-case")]
pub enum MapDescriptor {
    /// `θ ↦ θ + amount (mod 2π)`.
    Rotation { amount: f64 },
    /// `θ ↦ slope·θ + offset (mod 2π)`, `slope ≥ 1`.
    AffineCircle { slope: i64, offset: f64 },
    /// Continuous piecewise-linear self-map of `[0,1]` through the given nodes.
    PiecewiseLinear { breakpoints: Vec<(f64, f64)> },
    /// Binary add-with-carry of `100…`, the first coordinate least significant.
    OdometerAdd,
    /// Remove the `index`-th coordinate (1-based).
    Delete { index: usize },
    /// `outer ∘ inner`.
    Compose { outer: Box<MapDescriptor>, inner: Box<MapDescriptor> },
    /// Values sampled on the uniform grid of `domain` (circle or interval).
    Lookup { domain: SpaceKind, values: Vec<f64>, interp: Interp },
}

impl MapDescriptor {
    pub fn rotation(amount: f64) -> Self {
        MapDescriptor::Rotation { amount }
    }

    pub fn affine(slope: i64, offset: f64) -> Result<Self> {
        let m = MapDescriptor::AffineCircle { slope, offset };
        m.validate()?;
        Ok(m)
    }

    pub fn piecewise_linear(breakpoints: Vec<(f64, f64)>) -> Result<Self> {
        let m = MapDescriptor::PiecewiseLinear { breakpoints };
        m.validate()?;
        Ok(m)
    }

    pub fn compose(outer: MapDescriptor, inner: MapDescriptor) -> Result<Self> {
        let m = MapDescriptor::Compose { outer: Box::new(outer), inner: Box::new(inner) };
        m.validate()?;
        Ok(m)
    }

    /// The tent map `2x` on `[0,1/2]`, `2-2x` on `[1/2,1]`.
    pub fn tent() -> Self {
        MapDescriptor::PiecewiseLinear { breakpoints: vec![(0.0, 0.0), (0.5, 1.0), (1.0, 0.0)] }
    }

    /// The plateau map: `1` on `[0,1/2]`, `2-2x` on `[1/2,1]`.
    pub fn plateau_tent() -> Self {
        MapDescriptor::PiecewiseLinear { breakpoints: vec![(0.0, 1.0), (0.5, 1.0), (1.0, 0.0)] }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidMap(msg));
        match self {
            MapDescriptor::Rotation { amount } if !amount.is_finite() => {
                bad("rotation amount must be finite".into())
            }
            MapDescriptor::AffineCircle { slope, offset } => {
                if *slope < 1 {
                    bad(format!("affine circle slope must be ≥ 1, got {slope}"))
                } else if !offset.is_finite() {
                    bad("affine offset must be finite".into())
                } else {
                    Ok(())
                }
            }
            MapDescriptor::PiecewiseLinear { breakpoints } => validate_pl(breakpoints),
            MapDescriptor::Delete { index } if *index == 0 => {
                bad("deletion index is 1-based".into())
            }
            MapDescriptor::Compose { outer, inner } => {
                outer.validate()?;
                inner.validate()?;
                if outer.space_kind() != inner.space_kind() {
                    return bad("composed maps act on different spaces".into());
                }
                Ok(())
            }
            MapDescriptor::Lookup { domain, values, .. } => {
                if *domain == SpaceKind::BinarySeq {
                    return bad("lookup tables are defined on the circle or the interval".into());
                }
                if values.len() < 2 || values.iter().any(|v| !v.is_finite()) {
                    return bad("lookup table needs ≥ 2 finite values".into());
                }
                if *domain == SpaceKind::UnitInterval
                    && values.iter().any(|v| !(0.0..=1.0).contains(v))
                {
                    return bad("interval lookup values must lie in [0,1]".into());
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn space_kind(&self) -> SpaceKind {
        match self {
            MapDescriptor::Rotation { .. } | MapDescriptor::AffineCircle { .. } => SpaceKind::Circle,
            MapDescriptor::PiecewiseLinear { .. } => SpaceKind::UnitInterval,
            MapDescriptor::OdometerAdd | MapDescriptor::Delete { .. } => SpaceKind::BinarySeq,
            MapDescriptor::Compose { inner, .. } => inner.space_kind(),
            MapDescriptor::Lookup { domain, .. } => *domain,
        }
    }

    /// Evaluate the map at `x`.
    pub fn apply(&self, x: &Point) -> Result<Point> {
        let kind = self.space_kind();
        if x.kind() != kind {
            return Err(Error::SpaceMismatch { expected: kind, found: x.kind() });
        }
        match (self, x) {
            (MapDescriptor::Rotation { amount }, Point::Circle(t)) => Ok(rotate(*t, *amount)),
            (MapDescriptor::AffineCircle { slope, offset }, Point::Circle(t)) => {
                Ok(Point::Circle(wrap_angle(*slope as f64 * t + offset)))
            }
            (MapDescriptor::PiecewiseLinear { breakpoints }, Point::Interval(v)) => {
                Ok(Point::Interval(eval_pl(breakpoints, *v).clamp(0.0, 1.0)))
            }
            (MapDescriptor::OdometerAdd, Point::Word(w)) => Ok(Point::Word(odometer_add(w))),
            (MapDescriptor::Delete { index }, Point::Word(w)) => delete_coordinate(w, *index).map(Point::Word),
            (MapDescriptor::Compose { outer, inner }, _) => outer.apply(&inner.apply(x)?),
            (MapDescriptor::Lookup { values, interp, .. }, Point::Interval(v)) => {
                Ok(Point::Interval(lookup_interval(values, *interp, *v).clamp(0.0, 1.0)))
            }
            (MapDescriptor::Lookup { values, interp, .. }, Point::Circle(t)) => {
                Ok(Point::Circle(wrap_angle(lookup_circle(values, *interp, *t))))
            }
            _ => unreachable!("space kinds checked above"),
        }
    }

    /// `(slope, offset)` when the map is `θ ↦ slope·θ + offset` on the circle.
    pub fn as_affine_circle(&self) -> Option<(i64, f64)> {
        match self {
            MapDescriptor::Rotation { amount } => Some((1, *amount)),
            MapDescriptor::AffineCircle { slope, offset } => Some((*slope, *offset)),
            MapDescriptor::Compose { outer, inner } => {
                let (so, oo) = outer.as_affine_circle()?;
                let (si, oi) = inner.as_affine_circle()?;
                Some((so.checked_mul(si)?, so as f64 * oi + oo))
            }
            _ => None,
        }
    }

    /// Breakpoints of an equivalent piecewise-linear interval map, if one exists.
    pub fn as_piecewise_linear(&self) -> Option<Vec<(f64, f64)>> {
        match self {
            MapDescriptor::PiecewiseLinear { breakpoints } => Some(breakpoints.clone()),
            MapDescriptor::Lookup { domain: SpaceKind::UnitInterval, values, interp: Interp::Linear } => {
                let m = values.len() - 1;
                Some(values.iter().enumerate().map(|(i, &v)| (i as f64 / m as f64, v)).collect())
            }
            MapDescriptor::Compose { outer, inner } => {
                Some(compose_pl(&outer.as_piecewise_linear()?, &inner.as_piecewise_linear()?))
            }
            _ => None,
        }
    }

    /// Whether the map is an isometry, when decidable from its form.
    pub fn is_isometry_symbolic(&self) -> Option<bool> {
        match self {
            MapDescriptor::Rotation { .. } | MapDescriptor::OdometerAdd => Some(true),
            MapDescriptor::AffineCircle { slope, .. } => Some(*slope == 1),
            MapDescriptor::PiecewiseLinear { breakpoints } => {
                let slopes = pl_slopes(breakpoints);
                Some(slopes.iter().all(|s| *s == 1.0) || slopes.iter().all(|s| *s == -1.0))
            }
            MapDescriptor::Delete { .. } => Some(false),
            MapDescriptor::Compose { outer, inner } => {
                match (outer.is_isometry_symbolic()?, inner.is_isometry_symbolic()?) {
                    (true, true) => Some(true),
                    _ => None,
                }
            }
            MapDescriptor::Lookup { .. } => None,
        }
    }

    /// Whether the map never increases distances, when decidable from its form.
    pub fn is_shrinking_symbolic(&self) -> Option<bool> {
        match self {
            MapDescriptor::PiecewiseLinear { breakpoints } => {
                Some(pl_slopes(breakpoints).iter().all(|s| s.abs() <= 1.0))
            }
            MapDescriptor::Compose { outer, inner } => {
                match (outer.is_shrinking_symbolic()?, inner.is_shrinking_symbolic()?) {
                    (true, true) => Some(true),
                    _ => None,
                }
            }
            other => other.is_isometry_symbolic(),
        }
    }

    pub(crate) fn contains_lookup(&self) -> bool {
        match self {
            MapDescriptor::Lookup { .. } => true,
            MapDescriptor::Compose { outer, inner } => outer.contains_lookup() || inner.contains_lookup(),
            _ => false,
        }
    }
}

#[inline]
pub(crate) fn rotate(theta: f64, amount: f64) -> Point {
    Point::Circle(wrap_angle(theta + amount))
}

fn validate_pl(bps: &[(f64, f64)]) -> Result<()> {
    let bad = |msg: &str| Err(Error::InvalidMap(format!("piecewise-linear map: {msg}")));
    if bps.len() < 2 {
        return bad("needs at least two breakpoints");
    }
    if bps.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return bad("breakpoints must be finite");
    }
    if bps[0].0 != 0.0 || bps[bps.len() - 1].0 != 1.0 {
        return bad("breakpoints must span [0,1]");
    }
    if bps.windows(2).any(|w| w[1].0 <= w[0].0) {
        return bad("breakpoint abscissae must be strictly increasing");
    }
    if bps.iter().any(|(_, y)| !(0.0..=1.0).contains(y)) {
        return bad("values must lie in [0,1]");
    }
    Ok(())
}

/// Evaluate a piecewise-linear map given by sorted breakpoints.
pub fn eval_pl(bps: &[(f64, f64)], x: f64) -> f64 {
    let idx = bps.partition_point(|p| p.0 <= x);
    if idx == 0 {
        return bps[0].1;
    }
    if idx == bps.len() {
        return bps[bps.len() - 1].1;
    }
    let (x0, y0) = bps[idx - 1];
    let (x1, y1) = bps[idx];
    if x == x0 {
        return y0;
    }
    y0 + (x - x0) / (x1 - x0) * (y1 - y0)
}

pub(crate) fn pl_slopes(bps: &[(f64, f64)]) -> Vec<f64> {
    bps.windows(2).map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0)).collect()
}

/// Breakpoints of `outer ∘ inner` for two piecewise-linear interval maps.
pub fn compose_pl(outer: &[(f64, f64)], inner: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut xs: Vec<f64> = inner.iter().map(|p| p.0).collect();
    for w in inner.windows(2) {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        if y0 == y1 {
            continue;
        }
        let (lo, hi) = if y0 < y1 { (y0, y1) } else { (y1, y0) };
        for &(bx, _) in outer {
            if bx > lo && bx < hi {
                xs.push(x0 + (bx - y0) / (y1 - y0) * (x1 - x0));
            }
        }
    }
    xs.sort_by(f64::total_cmp);
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(xs.len());
    for x in xs {
        if out.last().is_some_and(|&(px, _)| x - px <= 1e-15) {
            continue;
        }
        out.push((x, eval_pl(outer, eval_pl(inner, x)).clamp(0.0, 1.0)));
    }
    // keep the endpoints exact
    if let Some(last) = out.last_mut() {
        if last.0 != 1.0 {
            out.push((1.0, eval_pl(outer, eval_pl(inner, 1.0))));
        }
    }
    out
}

/// Exact image `[min, max]` of the interval `[lo, hi]` under a piecewise-linear map.
pub(crate) fn pl_image(bps: &[(f64, f64)], lo: f64, hi: f64) -> (f64, f64) {
    let mut min = eval_pl(bps, lo).min(eval_pl(bps, hi));
    let mut max = eval_pl(bps, lo).max(eval_pl(bps, hi));
    for &(x, y) in bps {
        if x > lo && x < hi {
            min = min.min(y);
            max = max.max(y);
        }
    }
    (min.clamp(0.0, 1.0), max.clamp(0.0, 1.0))
}

fn odometer_add(w: &BinaryWord) -> BinaryWord {
    let mut out = w.clone();
    for bit in out.bits_mut().iter_mut() {
        if *bit == 0 {
            *bit = 1;
            return out;
        }
        *bit = 0;
    }
    // carry leaves the trusted prefix; the prefix itself is exact
    out
}

fn delete_coordinate(w: &BinaryWord, index: usize) -> Result<BinaryWord> {
    let len = w.effective_len();
    if index > len {
        // coordinates 1..len are untouched by deleting a later one
        return Ok(w.clone());
    }
    if len == 1 {
        return Err(Error::Resolution(format!(
            "deleting coordinate {index} would leave no trusted coordinates"
        )));
    }
    let mut out = w.clone();
    out.bits_mut().remove(index - 1);
    Ok(out)
}

fn lookup_interval(values: &[f64], interp: Interp, x: f64) -> f64 {
    let m = values.len() - 1;
    let t = x * m as f64;
    match interp {
        Interp::Nearest => values[(t.round() as usize).min(m)],
        Interp::Linear => {
            let i = (t.floor() as usize).min(m - 1);
            let frac = t - i as f64;
            values[i] + frac * (values[i + 1] - values[i])
        }
    }
}

fn lookup_circle(values: &[f64], interp: Interp, theta: f64) -> f64 {
    let m = values.len();
    let t = theta / TAU * m as f64;
    match interp {
        Interp::Nearest => values[(t.round() as usize) % m],
        Interp::Linear => {
            let i = (t.floor() as usize) % m;
            let j = (i + 1) % m;
            let frac = t - t.floor();
            // interpolate along the shorter arc
            let mut diff = (values[j] - values[i]).rem_euclid(TAU);
            if diff > PI {
                diff -= TAU;
            }
            debug_assert!(diff.abs() <= circle_distance(values[j], values[i]) + 1e-12);
            values[i] + frac * diff
        }
    }
}
