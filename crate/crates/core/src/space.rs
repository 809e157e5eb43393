//! Phase spaces, metrics and deterministic samplers.
//!
//! Three compact metric spaces are supported:
//!
//! * the circle `ℝ/2πℤ` with the geodesic (arc-length) metric, diameter `π`;
//! * the unit interval `[0,1]` with `|x - y|`, diameter `1`;
//! * one-sided binary sequences with `d(x,y) = 1/k`, `k` the first index
//!   where the sequences differ, diameter `1`.
//!
//! Binary sequences are held as finite prefixes. A prefix of length `L` is
//! exact: every map in the descriptor algebra determines the first `L'`
//! coordinates of its image from the first `L` of its argument, so the word
//! length is also the number of trusted coordinates.

use std::f64::consts::{PI, TAU};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::MapDescriptor;

/// Words enumerated by [`sample_grid`] never exceed this many free coordinates.
pub const MAX_GRID_WORD_BITS: usize = 12;

/// Reduce an angle into `[0, 2π)`.
#[inline]
pub fn wrap_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    // rem_euclid rounds tiny negative inputs up to exactly TAU
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Geodesic distance between two angles (any representatives).
#[inline]
pub fn circle_distance(a: f64, b: f64) -> f64 {
    // reducing |a - b| keeps the result exactly symmetric
    let d = (a - b).abs().rem_euclid(TAU);
    d.min(TAU - d).max(0.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpaceKind {
    Circle,
    UnitInterval,
    BinarySeq,
}

/// A finite binary prefix; every stored coordinate is trusted.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryWord {
    bits: Vec<u8>,
}

impl BinaryWord {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::Domain("binary word must have at least one coordinate".into()));
        }
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::Domain("binary word coordinates must be 0 or 1".into()));
        }
        Ok(Self { bits })
    }

    pub fn parse(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::Domain(format!("invalid binary digit `{other}`"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::new(bits)
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    /// Number of trusted coordinates.
    pub fn effective_len(&self) -> usize {
        self.bits.len()
    }

    pub(crate) fn bits_mut(&mut self) -> &mut Vec<u8> {
        &mut self.bits
    }
}

impl fmt::Display for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            f.write_str(if *b == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryWord({self})")
    }
}

impl Serialize for BinaryWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BinaryWord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        BinaryWord::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// A point of one of the three phase spaces.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum Point {
    /// Angle in radians, always reduced into `[0, 2π)`.
    Circle(f64),
    Interval(f64),
    Word(BinaryWord),
}

impl Point {
    pub fn circle(theta: f64) -> Self {
        Point::Circle(wrap_angle(theta))
    }

    pub fn interval(x: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::Domain(format!("{x} is outside [0,1]")));
        }
        Ok(Point::Interval(x))
    }

    pub fn word(s: &str) -> Result<Self> {
        BinaryWord::parse(s).map(Point::Word)
    }

    pub fn kind(&self) -> SpaceKind {
        match self {
            Point::Circle(_) => SpaceKind::Circle,
            Point::Interval(_) => SpaceKind::UnitInterval,
            Point::Word(_) => SpaceKind::BinarySeq,
        }
    }

    /// Real coordinate for circle and interval points.
    pub fn coord(&self) -> Option<f64> {
        match self {
            Point::Circle(t) | Point::Interval(t) => Some(*t),
            Point::Word(_) => None,
        }
    }

    pub fn as_word(&self) -> Option<&BinaryWord> {
        match self {
            Point::Word(w) => Some(w),
            _ => None,
        }
    }

    /// Bit-exact identity key, usable for cycle detection.
    pub fn key(&self) -> PointKey {
        match self {
            Point::Circle(t) => PointKey::Real(0, t.to_bits()),
            Point::Interval(t) => PointKey::Real(1, t.to_bits()),
            Point::Word(w) => PointKey::Word(w.bits.clone()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PointKey {
    Real(u8, u64),
    Word(Vec<u8>),
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Circle(t) => write!(f, "θ={t}"),
            Point::Interval(x) => write!(f, "x={x}"),
            Point::Word(w) => write!(f, "{w}"),
        }
    }
}

/// A compact metric space from the supported catalog.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseSpace {
    pub kind: SpaceKind,
    /// Length of the binary prefixes generated for this space (binary sequences only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word_len: Option<usize>,
}

impl PhaseSpace {
    pub fn circle() -> Self {
        Self { kind: SpaceKind::Circle, word_len: None }
    }

    pub fn unit_interval() -> Self {
        Self { kind: SpaceKind::UnitInterval, word_len: None }
    }

    pub fn binary_seq(word_len: usize) -> Result<Self> {
        if word_len == 0 {
            return Err(Error::Domain("binary sequence space needs word length ≥ 1".into()));
        }
        Ok(Self { kind: SpaceKind::BinarySeq, word_len: Some(word_len) })
    }

    pub fn validate(&self) -> Result<()> {
        match (self.kind, self.word_len) {
            (SpaceKind::BinarySeq, Some(l)) if l >= 1 => Ok(()),
            (SpaceKind::BinarySeq, _) => {
                Err(Error::Config("binary sequence space needs `word_len` ≥ 1".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn diameter(&self) -> f64 {
        match self.kind {
            SpaceKind::Circle => PI,
            SpaceKind::UnitInterval | SpaceKind::BinarySeq => 1.0,
        }
    }

    /// Finest distance the representation can certify.
    pub fn resolution_floor(&self) -> f64 {
        match self.kind {
            SpaceKind::Circle | SpaceKind::UnitInterval => f64::EPSILON,
            SpaceKind::BinarySeq => 1.0 / self.word_len() as f64,
        }
    }

    pub fn word_len(&self) -> usize {
        self.word_len.unwrap_or(1)
    }

    pub fn contains(&self, p: &Point) -> bool {
        match (self.kind, p) {
            (SpaceKind::Circle, Point::Circle(t)) => (0.0..TAU).contains(t),
            (SpaceKind::UnitInterval, Point::Interval(x)) => (0.0..=1.0).contains(x),
            (SpaceKind::BinarySeq, Point::Word(_)) => true,
            _ => false,
        }
    }

    fn check(&self, p: &Point) -> Result<()> {
        if p.kind() != self.kind {
            return Err(Error::SpaceMismatch { expected: self.kind, found: p.kind() });
        }
        Ok(())
    }
}

/// Distance between two points of `space`.
///
/// Binary words that agree on all `m = min(len)` trusted coordinates are at
/// distance `0` when they are the same word, and otherwise at the
/// resolution-floor upper bound `1/m`.
pub fn distance(space: &PhaseSpace, x: &Point, y: &Point) -> Result<f64> {
    space.check(x)?;
    space.check(y)?;
    Ok(raw_distance(x, y))
}

/// Distance without the space check; callers guarantee matching kinds.
#[inline]
pub(crate) fn raw_distance(x: &Point, y: &Point) -> f64 {
    match (x, y) {
        (Point::Circle(a), Point::Circle(b)) => circle_distance(*a, *b),
        (Point::Interval(a), Point::Interval(b)) => (a - b).abs(),
        (Point::Word(a), Point::Word(b)) => word_distance(a, b).0,
        _ => f64::NAN,
    }
}

/// `(distance, floor_flag)` for two binary words.
pub fn word_distance(a: &BinaryWord, b: &BinaryWord) -> (f64, bool) {
    let m = a.bits.len().min(b.bits.len());
    match a.bits[..m].iter().zip(&b.bits[..m]).position(|(p, q)| p != q) {
        Some(i) => (1.0 / (i + 1) as f64, false),
        None if a.bits.len() == b.bits.len() => (0.0, false),
        None => (1.0 / m as f64, true),
    }
}

/// A nonempty finite set of points from one space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointCloud {
    points: Vec<Point>,
    kind: SpaceKind,
}

impl PointCloud {
    pub fn new(kind: SpaceKind, points: Vec<Point>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Domain("point cloud must be nonempty".into()));
        }
        if let Some(p) = points.iter().find(|p| p.kind() != kind) {
            return Err(Error::SpaceMismatch { expected: kind, found: p.kind() });
        }
        Ok(Self { points, kind })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn into_points(self) -> Vec<Point> {
        self.points
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Hausdorff distance between two clouds of the same space.
pub fn hausdorff_distance(a: &PointCloud, b: &PointCloud) -> Result<f64> {
    if a.kind != b.kind {
        return Err(Error::SpaceMismatch { expected: a.kind, found: b.kind });
    }
    Ok(directed_hausdorff(&a.points, &b.points).max(directed_hausdorff(&b.points, &a.points)))
}

/// `sup_{x∈a} inf_{y∈b} d(x,y)`.
pub(crate) fn directed_hausdorff(a: &[Point], b: &[Point]) -> f64 {
    a.iter()
        .map(|x| b.iter().map(|y| raw_distance(x, y)).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max)
}

/// Deterministic uniform grid.
///
/// Circle: `{2πi/r}`; interval: `{i/(r-1)}`; binary: all `2^p` prefixes of
/// length `p = min(r, 12, word_len)` in lexicographic order, padded with zeros
/// to the space's word length.
pub fn sample_grid(space: &PhaseSpace, resolution: usize) -> Result<PointCloud> {
    if resolution < 2 {
        return Err(Error::Domain("grid resolution must be ≥ 2".into()));
    }
    let points = match space.kind {
        SpaceKind::Circle => (0..resolution)
            .map(|i| Point::circle(TAU * i as f64 / resolution as f64))
            .collect(),
        SpaceKind::UnitInterval => (0..resolution)
            .map(|i| Point::Interval(i as f64 / (resolution - 1) as f64))
            .collect(),
        SpaceKind::BinarySeq => {
            let len = space.word_len();
            let p = resolution.min(MAX_GRID_WORD_BITS).min(len);
            (0..1usize << p)
                .map(|code| {
                    let mut bits = vec![0u8; len];
                    for (j, bit) in bits.iter_mut().take(p).enumerate() {
                        *bit = ((code >> (p - 1 - j)) & 1) as u8;
                    }
                    Point::Word(BinaryWord { bits })
                })
                .collect()
        }
    };
    PointCloud::new(space.kind, points)
}

/// Number of leading coordinates two words must share to be closer than `radius`.
pub(crate) fn shared_prefix_for_radius(radius: f64) -> usize {
    // smallest k with 1/k < radius, evaluated in floating point exactly as
    // `word_distance` produces its values
    let mut k = ((1.0 / radius).floor() as usize).max(1);
    while 1.0 / k as f64 >= radius {
        k += 1;
    }
    while k > 1 && 1.0 / ((k - 1) as f64) < radius {
        k -= 1;
    }
    k - 1
}

/// Deterministic points inside the open ball `S(center, radius)`, center first.
///
/// For the continuum spaces the samples are `center ∓ j·radius/(m+1)` for
/// `j = 1..m`, alternating sides; interval samples leaving `[0,1]` are dropped.
/// Binary samples agree with the center on every coordinate the radius
/// constrains and flip one later coordinate each.
pub fn ball_sample(space: &PhaseSpace, center: &Point, radius: f64, count: usize) -> Result<PointCloud> {
    space.check(center)?;
    if !(radius > 0.0) || radius > space.diameter() {
        return Err(Error::Domain(format!(
            "ball radius {radius} must lie in (0, {}]",
            space.diameter()
        )));
    }
    if count == 0 {
        return Err(Error::Domain("ball sample count must be ≥ 1".into()));
    }
    let mut points = vec![center.clone()];
    match center {
        Point::Circle(c) | Point::Interval(c) => {
            let pairs = count / 2;
            let step = radius / (pairs + 1) as f64;
            'outer: for j in 1..=pairs {
                for sign in [-1.0, 1.0] {
                    if points.len() == count {
                        break 'outer;
                    }
                    let v = c + sign * step * j as f64;
                    match center {
                        Point::Circle(_) => points.push(Point::circle(v)),
                        _ if (0.0..=1.0).contains(&v) => points.push(Point::Interval(v)),
                        _ => {}
                    }
                }
            }
        }
        Point::Word(w) => {
            let len = w.effective_len();
            if radius <= 1.0 / len as f64 {
                return Err(Error::Domain(format!(
                    "ball radius {radius} is below the resolution floor 1/{len}"
                )));
            }
            let shared = shared_prefix_for_radius(radius);
            for flip in shared..len {
                if points.len() == count {
                    break;
                }
                let mut bits = w.bits.clone();
                bits[flip] ^= 1;
                points.push(Point::Word(BinaryWord { bits }));
            }
        }
    }
    PointCloud::new(space.kind, points)
}

/// Estimate of `D(g,h) = sup_x d(g(x), h(x))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupEstimate {
    pub value: f64,
    /// `true` when the value comes from a closed form rather than a grid maximum.
    pub exact: bool,
    /// A grid point attaining the maximum, when one was evaluated.
    #[serde(skip)]
    pub argmax: Option<usize>,
}

/// Supremum distance between two maps on `space`.
///
/// Closed forms are used for affine circle maps, piecewise-linear interval
/// maps, and the odometer/deletion pair; everything else falls back to a
/// grid maximum over the nested grids `r, r/2, r/4, …`, which makes the
/// estimate monotone under refinement `r → 2r`.
pub fn sup_metric(
    space: &PhaseSpace,
    g: &MapDescriptor,
    h: &MapDescriptor,
    resolution: usize,
) -> Result<SupEstimate> {
    if resolution < 2 {
        return Err(Error::Domain("grid resolution must be ≥ 2".into()));
    }
    for m in [g, h] {
        if m.space_kind() != space.kind {
            return Err(Error::SpaceMismatch { expected: space.kind, found: m.space_kind() });
        }
    }
    if let Some(value) = closed_form_sup(g, h) {
        return Ok(SupEstimate { value, exact: true, argmax: None });
    }
    let mut best = 0.0f64;
    let mut argmax = None;
    let mut r = resolution;
    let mut seen_binary_width = None;
    while r >= 2 {
        let skip = space.kind == SpaceKind::BinarySeq && {
            let width = r.min(MAX_GRID_WORD_BITS).min(space.word_len());
            let dup = seen_binary_width == Some(width);
            seen_binary_width = Some(width);
            dup
        };
        if !skip {
            let grid = sample_grid(space, r)?;
            for (i, x) in grid.points().iter().enumerate() {
                let d = raw_distance(&g.apply(x)?, &h.apply(x)?);
                if d > best || argmax.is_none() {
                    best = best.max(d);
                    argmax = Some(i);
                }
            }
        }
        r /= 2;
    }
    Ok(SupEstimate { value: best, exact: false, argmax })
}

fn closed_form_sup(g: &MapDescriptor, h: &MapDescriptor) -> Option<f64> {
    if let (Some((sg, og)), Some((sh, oh))) = (g.as_affine_circle(), h.as_affine_circle()) {
        // equal slopes differ by a constant rotation; unequal slopes sweep every offset
        return Some(if sg == sh { circle_distance(og, oh) } else { PI });
    }
    if let (Some(pg), Some(ph)) = (g.as_piecewise_linear(), h.as_piecewise_linear()) {
        // |g - h| is piecewise linear on the union of breakpoints
        let mut xs: Vec<f64> = pg.iter().chain(ph.iter()).map(|p| p.0).collect();
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        return Some(
            xs.iter()
                .map(|&x| (crate::family::eval_pl(&pg, x) - crate::family::eval_pl(&ph, x)).abs())
                .fold(0.0, f64::max),
        );
    }
    odometer_deletion_sup(g, h).or_else(|| odometer_deletion_sup(h, g))
}

/// `D(OdometerAdd ∘ Delete{n}, OdometerAdd) = 1/n`: the odometer is an isometry
/// and deleting the n-th coordinate leaves the first `n-1` untouched.
fn odometer_deletion_sup(g: &MapDescriptor, h: &MapDescriptor) -> Option<f64> {
    match (g, h) {
        (MapDescriptor::Compose { outer, inner }, MapDescriptor::OdometerAdd)
            if **outer == MapDescriptor::OdometerAdd =>
        {
            match **inner {
                MapDescriptor::Delete { index } => Some(1.0 / index as f64),
                _ => None,
            }
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_distance_wraps() {
        let s = PhaseSpace::circle();
        let d = distance(&s, &Point::circle(0.1), &Point::circle(TAU - 0.1)).unwrap();
        assert!((d - 0.2).abs() < 1e-12);
    }

    #[test]
    fn binary_distance_first_difference() {
        let s = PhaseSpace::binary_seq(4).unwrap();
        let d = distance(&s, &Point::word("0101").unwrap(), &Point::word("0001").unwrap()).unwrap();
        assert_eq!(d, 0.5);
    }

    #[test]
    fn binary_distance_resolution_floor() {
        let a = BinaryWord::parse("0101").unwrap();
        let b = BinaryWord::parse("010111").unwrap();
        assert_eq!(word_distance(&a, &b), (0.25, true));
        assert_eq!(word_distance(&a, &a), (0.0, false));
    }

    #[test]
    fn interval_identity() {
        let s = PhaseSpace::unit_interval();
        let p = Point::interval(0.37).unwrap();
        assert_eq!(distance(&s, &p, &p).unwrap(), 0.0);
    }

    #[test]
    fn mismatched_kinds_rejected() {
        let s = PhaseSpace::circle();
        let err = distance(&s, &Point::circle(0.0), &Point::Interval(0.0)).unwrap_err();
        assert!(matches!(err, Error::SpaceMismatch { .. }));
        assert!(BinaryWord::parse("").is_err());
    }

    #[test]
    fn grids() {
        let c = sample_grid(&PhaseSpace::circle(), 4).unwrap();
        let want = [0.0, PI / 2.0, PI, 3.0 * PI / 2.0];
        for (p, w) in c.points().iter().zip(want) {
            assert!((p.coord().unwrap() - w).abs() < 1e-15);
        }
        let i = sample_grid(&PhaseSpace::unit_interval(), 3).unwrap();
        assert_eq!(
            i.points(),
            &[Point::Interval(0.0), Point::Interval(0.5), Point::Interval(1.0)]
        );
        let b = sample_grid(&PhaseSpace::binary_seq(2).unwrap(), 2).unwrap();
        let words: Vec<String> = b.points().iter().map(|p| p.to_string()).collect();
        assert_eq!(words, ["00", "01", "10", "11"]);
        assert!(sample_grid(&PhaseSpace::circle(), 1).is_err());
    }

    #[test]
    fn ball_samples() {
        let s = PhaseSpace::unit_interval();
        let b = ball_sample(&s, &Point::Interval(0.5), 0.1, 3).unwrap();
        let xs: Vec<f64> = b.points().iter().map(|p| p.coord().unwrap()).collect();
        assert_eq!(xs.len(), 3);
        assert_eq!(xs[0], 0.5);
        assert!((xs[1] - 0.45).abs() < 1e-15 && (xs[2] - 0.55).abs() < 1e-15);

        let c = ball_sample(&PhaseSpace::circle(), &Point::circle(0.0), 0.1, 1).unwrap();
        assert_eq!(c.points(), &[Point::Circle(0.0)]);
    }

    #[test]
    fn binary_ball_respects_radius() {
        let s = PhaseSpace::binary_seq(8).unwrap();
        let center = Point::word("01010101").unwrap();
        let r = 1.0 / 3.0;
        let b = ball_sample(&s, &center, r, 16).unwrap();
        assert_eq!(b.len(), 6); // center + flips at coordinates 4..8
        for p in b.points() {
            let w = p.as_word().unwrap();
            assert_eq!(&w.bits()[..3], &[0, 1, 0]);
            assert!(distance(&s, p, &center).unwrap() < r);
        }
        // too fine for an 8-coordinate word
        assert!(ball_sample(&s, &center, 0.1, 4).is_err());
    }

    #[test]
    fn hausdorff_examples() {
        let a = PointCloud::new(SpaceKind::UnitInterval, vec![Point::Interval(0.0)]).unwrap();
        let b = PointCloud::new(
            SpaceKind::UnitInterval,
            vec![Point::Interval(0.0), Point::Interval(0.5)],
        )
        .unwrap();
        assert_eq!(hausdorff_distance(&a, &a).unwrap(), 0.0);
        assert_eq!(hausdorff_distance(&a, &b).unwrap(), 0.5);
        assert!(PointCloud::new(SpaceKind::Circle, vec![]).is_err());
    }

    #[test]
    fn hausdorff_half_cell_shift() {
        let n = 100;
        let a = sample_grid(&PhaseSpace::circle(), n).unwrap();
        let half = PI / n as f64;
        let shifted: Vec<Point> = a
            .points()
            .iter()
            .map(|p| Point::circle(p.coord().unwrap() + half))
            .collect();
        let b = PointCloud::new(SpaceKind::Circle, shifted).unwrap();
        // brute force: every point of either grid sits exactly half a cell from the other
        let brute = a
            .points()
            .iter()
            .map(|x| {
                b.points()
                    .iter()
                    .map(|y| circle_distance(x.coord().unwrap(), y.coord().unwrap()))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max);
        let h = hausdorff_distance(&a, &b).unwrap();
        assert!((h - 0.031_415_926_535_897_93).abs() < 1e-12);
        assert!((h - brute).abs() < 1e-15);
    }

    #[test]
    fn sup_metric_rotations_exact() {
        let s = PhaseSpace::circle();
        let g = MapDescriptor::Rotation { amount: 0.7 };
        let h = MapDescriptor::Rotation { amount: 0.71 };
        let e = sup_metric(&s, &g, &h, 16).unwrap();
        assert!(e.exact && (e.value - 0.01).abs() < 1e-12);
        assert_eq!(sup_metric(&s, &g, &g, 16).unwrap().value, 0.0);
    }

    #[test]
    fn sup_metric_doubling_offset_matches_grid() {
        let s = PhaseSpace::circle();
        let g = MapDescriptor::AffineCircle { slope: 2, offset: 0.0 };
        let h = MapDescriptor::AffineCircle { slope: 2, offset: 0.2 };
        let exact = sup_metric(&s, &g, &h, 64).unwrap();
        assert!(exact.exact && (exact.value - 0.2).abs() < 1e-12);
        let brute = sample_grid(&s, 64)
            .unwrap()
            .points()
            .iter()
            .map(|x| raw_distance(&g.apply(x).unwrap(), &h.apply(x).unwrap()))
            .fold(0.0, f64::max);
        assert!((brute - 0.2).abs() < 1e-12);
    }
}
