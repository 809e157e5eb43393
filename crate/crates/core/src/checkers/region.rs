//! Forward images of balls, tracked exactly where the descriptors allow.

use std::collections::HashMap;
use std::f64::consts::PI;

use super::SystemView;
use crate::error::Result;
use crate::family::{pl_image, MapDescriptor};
use crate::space::{
    ball_sample, circle_distance, directed_hausdorff, raw_distance, wrap_angle, PhaseSpace, Point, PointKey,
};

/// A forward image `ω_n(U)`.
#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Region {
    /// Open arc; `half ≥ π` is the whole circle.
    Arc { center: f64, half: f64 },
    /// Interval `[lo, hi]` with `lo < hi`.
    Interval { lo: f64, hi: f64 },
    /// A single point.
    Point(Point),
    /// A finite sample standing in for the set.
    Cloud(Vec<Point>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum RegionKey {
    Arc(u64, u64),
    Interval(u64, u64),
    Point(PointKey),
}

impl Region {
    /// The ball of `radius` around `center`.
    pub(crate) fn ball(space: &PhaseSpace, center: &Point, radius: f64, count: usize) -> Result<Region> {
        Ok(match center {
            Point::Circle(c) => Region::arc(*c, radius),
            Point::Interval(x) => Region::interval((x - radius).max(0.0), (x + radius).min(1.0)),
            Point::Word(_) => Region::Cloud(ball_sample(space, center, radius, count)?.into_points()),
        })
    }

    fn arc(center: f64, half: f64) -> Region {
        if half >= PI {
            Region::Arc { center: 0.0, half: PI }
        } else {
            Region::Arc { center, half }
        }
    }

    fn interval(lo: f64, hi: f64) -> Region {
        if lo >= hi {
            Region::Point(Point::Interval(lo))
        } else {
            Region::Interval { lo, hi }
        }
    }

    pub(crate) fn is_exact(&self) -> bool {
        !matches!(self, Region::Cloud(_))
    }

    pub(crate) fn is_point(&self) -> bool {
        matches!(self, Region::Point(_))
    }

    fn key(&self) -> Option<RegionKey> {
        match self {
            Region::Arc { center, half } => Some(RegionKey::Arc(center.to_bits(), half.to_bits())),
            Region::Interval { lo, hi } => Some(RegionKey::Interval(lo.to_bits(), hi.to_bits())),
            Region::Point(p) => Some(RegionKey::Point(p.key())),
            Region::Cloud(_) => None,
        }
    }

    /// Image under `f_n`.
    fn advance(&self, sys: &SystemView, n: usize, count: usize) -> Result<Region> {
        let fam = sys.family();
        Ok(match self {
            Region::Point(p) => Region::Point(fam.apply_step(n, p)?),
            Region::Cloud(pts) => Region::Cloud(pts.iter().map(|p| fam.apply_step(n, p)).collect::<Result<_>>()?),
            Region::Arc { center, half } => {
                let m = fam.step(n);
                match m.as_affine_circle() {
                    Some((s, o)) => Region::arc(wrap_angle(s as f64 * center + o), s as f64 * half),
                    None => Region::Cloud(sample_arc(*center, *half, count, &m)?),
                }
            }
            Region::Interval { lo, hi } => {
                let m = fam.step(n);
                match m.as_piecewise_linear() {
                    Some(bps) => {
                        let (a, b) = pl_image(&bps, *lo, *hi);
                        Region::interval(a, b)
                    }
                    None => Region::Cloud(sample_interval(*lo, *hi, count, &m)?),
                }
            }
        })
    }

    pub(crate) fn diameter(&self) -> f64 {
        match self {
            Region::Arc { half, .. } => (2.0 * half).min(PI),
            Region::Interval { lo, hi } => hi - lo,
            Region::Point(_) => 0.0,
            Region::Cloud(pts) => {
                let mut d = 0.0f64;
                for i in 0..pts.len() {
                    for j in i + 1..pts.len() {
                        d = d.max(raw_distance(&pts[i], &pts[j]));
                    }
                }
                d
            }
        }
    }

    /// Does the region meet the open ball `B(center, eps)`?
    pub(crate) fn hits(&self, center: &Point, eps: f64) -> bool {
        match (self, center) {
            (Region::Arc { center: c, half }, Point::Circle(v)) => circle_distance(*c, *v) < half + eps,
            (Region::Interval { lo, hi }, Point::Interval(v)) => {
                let gap = if v < lo { lo - v } else if v > hi { v - hi } else { 0.0 };
                gap < eps
            }
            (Region::Point(p), _) => raw_distance(p, center) < eps,
            (Region::Cloud(pts), _) => pts.iter().any(|p| raw_distance(p, center) < eps),
            _ => false,
        }
    }

    /// Hausdorff distance from the region to the whole space, the grid standing in for
    /// the space when the region is sampled.
    pub(crate) fn hausdorff_to_space(&self, grid: &[Point]) -> f64 {
        match self {
            Region::Arc { half, .. } => (PI - half).max(0.0),
            Region::Interval { lo, hi } => lo.max(1.0 - hi),
            Region::Point(Point::Circle(_)) => PI,
            Region::Point(Point::Interval(p)) => p.max(1.0 - p),
            Region::Point(p) => directed_hausdorff(grid, std::slice::from_ref(p)),
            Region::Cloud(pts) => directed_hausdorff(grid, pts).max(directed_hausdorff(pts, grid)),
        }
    }
}

fn sample_arc(center: f64, half: f64, count: usize, m: &MapDescriptor) -> Result<Vec<Point>> {
    let count = count.max(2);
    (0..count)
        .map(|i| {
            let t = -half + 2.0 * half * i as f64 / (count - 1) as f64;
            m.apply(&Point::circle(center + t))
        })
        .collect()
}

fn sample_interval(lo: f64, hi: f64, count: usize, m: &MapDescriptor) -> Result<Vec<Point>> {
    let count = count.max(2);
    (0..count).map(|i| m.apply(&Point::Interval(lo + (hi - lo) * i as f64 / (count - 1) as f64))).collect()
}

/// The images `ω_0(U), ω_1(U), …` up to a horizon. Once the family is
/// autonomous and an exact image repeats, the whole future is known.
#[derive(Clone, Debug)]
pub(crate) struct RegionOrbit {
    regions: Vec<Region>,
    /// `(start, period)`: `ω_n(U) = ω_{start + (n - start) mod period}(U)` for `n ≥ start`.
    cycle: Option<(usize, usize)>,
    horizon: usize,
}

impl RegionOrbit {
    pub(crate) fn compute(sys: &SystemView, initial: Region, horizon: usize, count: usize) -> Result<Self> {
        let from = sys.family().autonomous_from();
        let mut seen: HashMap<RegionKey, usize> = HashMap::new();
        let mut regions = Vec::with_capacity(horizon + 1);
        regions.push(initial);
        let mut cycle = None;
        for n in 0..=horizon {
            if let Some(a) = from {
                if n + 1 >= a {
                    if let Some(k) = regions[n].key() {
                        if let Some(&i) = seen.get(&k) {
                            regions.pop();
                            cycle = Some((i, n - i));
                            break;
                        }
                        seen.insert(k, n);
                    }
                }
            }
            if n == horizon {
                break;
            }
            let next = regions[n].advance(sys, n + 1, count)?;
            regions.push(next);
        }
        Ok(RegionOrbit { regions, cycle, horizon })
    }

    pub(crate) fn at(&self, n: usize) -> &Region {
        match self.cycle {
            Some((start, period)) if n >= self.regions.len() => &self.regions[start + (n - start) % period],
            _ => &self.regions[n],
        }
    }

    /// Whether every future image is determined.
    pub(crate) fn forecast(&self) -> bool {
        self.cycle.is_some()
    }

    /// Indices `n ≥ 1` to scan: the horizon, or one pass through the cycle when forecast.
    pub(crate) fn distinct_range(&self) -> std::ops::RangeInclusive<usize> {
        match self.cycle {
            Some((_, period)) => 1..=self.regions.len() + period - 1,
            None => 1..=self.horizon,
        }
    }

    /// Indices of one turn of the cycle, when forecast.
    pub(crate) fn cycle_turn(&self) -> Option<std::ops::Range<usize>> {
        self.cycle.map(|(start, period)| start..start + period)
    }

    pub(crate) fn collapse_time(&self) -> Option<usize> {
        (0..self.regions.len()).find(|&n| self.regions[n].is_point())
    }

    pub(crate) fn all_exact(&self) -> bool {
        self.regions.iter().all(Region::is_exact)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checkers::Mode;
    use crate::family::{make_builtin_family, BuiltinParams};

    fn view(name: &str, mode: Mode) -> SystemView {
        SystemView::new(make_builtin_family(name, &BuiltinParams::default()).unwrap(), mode)
    }

    #[test]
    fn plateau_collapses_and_forecasts() {
        let sys = view("plateau-tent", Mode::NonAutonomous);
        let u = Region::ball(&sys.family().space, &Point::Interval(0.2), 0.1, 5).unwrap();
        let o = RegionOrbit::compute(&sys, u, 500, 5).unwrap();
        assert_eq!(o.collapse_time(), Some(1));
        assert!(o.forecast());
        assert_eq!(o.at(1), &Region::Point(Point::Interval(1.0)));
        assert_eq!(o.at(400), &Region::Point(Point::Interval(0.0)));
    }

    #[test]
    fn tent_spreads_to_everything() {
        let sys = view("plateau-tent", Mode::AutonomousLimit);
        let u = Region::ball(&sys.family().space, &Point::Interval(0.2), 0.0125, 5).unwrap();
        let o = RegionOrbit::compute(&sys, u, 500, 5).unwrap();
        assert!(o.forecast());
        assert_eq!(o.at(499), &Region::Interval { lo: 0.0, hi: 1.0 });
    }

    #[test]
    fn arcs_double() {
        let sys = view("perturbed-doubling", Mode::AutonomousLimit);
        let u = Region::ball(&sys.family().space, &Point::circle(1.0), 0.1, 5).unwrap();
        let o = RegionOrbit::compute(&sys, u, 10, 5).unwrap();
        assert_eq!(o.at(1).diameter(), 0.4);
        assert_eq!(o.at(10).diameter(), PI);
        assert!(o.at(10).hits(&Point::circle(3.0), 1e-3));
    }
}
