//! Hypothesis checks: commutativity, summability, feeble openness,
//! surjectivity, isometry and shrinking.

use serde::{Deserialize, Serialize};

use super::{BuiltinFamily, Generator, MapDescriptor, MapFamily};
use crate::checkers::{Basis, Verdict, Witness};
use crate::error::{Error, Result};
use crate::space::{directed_hausdorff, raw_distance, sample_grid, sup_metric, PhaseSpace, Point};

/// Knobs for [`profile_hypotheses`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileConfig {
    pub horizon: usize,
    pub grid: usize,
    pub tol: f64,
    pub eps: f64,
}

impl Default for ProfileConfig {
    fn default() -> Self {
        ProfileConfig { horizon: 200, grid: 64, tol: crate::DEFAULT_TOL, eps: 0.1 }
    }
}

/// Heuristic reading of `Σ D(f_n, f)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "flag", rename_all = "kebab-case")]
pub enum Summability {
    /// The series is known in closed form.
    Exact { sum: f64 },
    /// Tail terms fit `C/n^p` with `p` clearly above 1.
    SummableLikely { exponent: f64 },
    /// Tail terms fit `C/n^p` with `p ≤ 1` up to the fitting margin.
    DivergentLikely { exponent: f64 },
}

impl Summability {
    pub fn is_summable(&self) -> bool {
        !matches!(self, Summability::DivergentLikely { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            Summability::Exact { .. } => "exact",
            Summability::SummableLikely { .. } => "summable-likely",
            Summability::DivergentLikely { .. } => "divergent-likely",
        }
    }
}

/// Fitted exponents must exceed 1 by this margin to count as summable.
pub const SUMMABLE_EXPONENT_MARGIN: f64 = 0.05;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummabilityEstimate {
    /// `D(f_n, f)` for `n = 1..=N`.
    pub terms: Vec<f64>,
    /// Whether every term came from a closed form.
    pub terms_exact: bool,
    /// `S_n` for `n = 1..=N`.
    pub partial_sums: Vec<f64>,
    pub flag: Summability,
    pub rationale: String,
}

/// Partial sums of `D(f_n, f)` with a summability heuristic.
pub fn summability_estimate(fam: &MapFamily, horizon: usize, grid: usize) -> Result<SummabilityEstimate> {
    if horizon < 2 {
        return Err(Error::Config("summability needs a horizon ≥ 2".into()));
    }
    let mut terms = Vec::with_capacity(horizon);
    let mut terms_exact = true;
    for n in 1..=horizon {
        let est = sup_metric(&fam.space, &fam.step(n), &fam.limit, grid)?;
        terms_exact &= est.exact;
        terms.push(est.value);
    }
    let partial_sums: Vec<f64> = terms
        .iter()
        .scan(0.0, |s, t| {
            *s += t;
            Some(*s)
        })
        .collect();
    let s_n = partial_sums[horizon - 1];
    if let Some(sum) = fam.series_limit() {
        let rationale = format!("closed form: Σ D(f_n,f) = {sum:.6}; S_{horizon} = {s_n:.6}");
        return Ok(SummabilityEstimate { terms, terms_exact, partial_sums, flag: Summability::Exact { sum }, rationale });
    }
    let start = horizon / 2;
    let tail: Vec<(f64, f64)> = (start..horizon)
        .filter(|&i| terms[i] > 0.0)
        .map(|i| (((i + 1) as f64).ln(), terms[i].ln()))
        .collect();
    if tail.len() < 2 {
        let rationale = format!("terms vanish beyond n = {start}; S_{horizon} = {s_n:.6}");
        return Ok(SummabilityEstimate {
            terms,
            terms_exact,
            partial_sums,
            flag: Summability::Exact { sum: s_n },
            rationale,
        });
    }
    let exponent = -least_squares_slope(&tail);
    let flag = if exponent > 1.0 + SUMMABLE_EXPONENT_MARGIN {
        Summability::SummableLikely { exponent }
    } else {
        Summability::DivergentLikely { exponent }
    };
    let rationale = format!(
        "tail terms n ∈ [{}, {horizon}] fit C/n^p with p = {exponent:.4}; S_{horizon} = {s_n:.6}",
        start + 1
    );
    Ok(SummabilityEstimate { terms, terms_exact, partial_sums, flag, rationale })
}

fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// Does `f_n ∘ f = f ∘ f_n` for `n ≤ max_index`?
pub fn commutes_with_limit(fam: &MapFamily, grid: usize, tol: f64, max_index: usize) -> Result<Verdict> {
    if max_index == 0 {
        return Err(Error::Config("commutativity needs max-index ≥ 1".into()));
    }
    // f_n = f beyond this index commutes trivially
    let covers_all = fam.autonomous_from().is_some_and(|a| a <= max_index + 1);
    let last = fam.autonomous_from().map_or(max_index, |a| max_index.min(a.saturating_sub(1)));
    let grid_points = sample_grid(&fam.space, grid)?;
    let mut max_gap = 0.0f64;
    let mut all_exact = true;
    for n in 1..=last {
        let fnm = fam.step(n);
        let a = MapDescriptor::Compose { outer: Box::new(fnm.clone()), inner: Box::new(fam.limit.clone()) };
        let b = MapDescriptor::Compose { outer: Box::new(fam.limit.clone()), inner: Box::new(fnm) };
        let est = sup_metric(&fam.space, &a, &b, grid)?;
        all_exact &= est.exact;
        if est.value > tol {
            let x = grid_points.points()[est.argmax.unwrap_or(0)].clone();
            return Ok(Verdict::refuted(
                Basis::Witness,
                Witness::new(vec![x], vec![n], vec![est.value]),
                format!("f_{n}∘f and f∘f_{n} differ by {:.6} in the supremum metric", est.value),
            ));
        }
        max_gap = max_gap.max(est.value);
    }
    let rotations = matches!(
        fam.generator,
        Generator::Builtin {
            family: BuiltinFamily::AlternatingRotation | BuiltinFamily::InverseSquareRotation,
            ..
        }
    );
    let basis = if all_exact && (covers_all || rotations) { Basis::Symbolic } else { Basis::Horizon };
    Ok(Verdict::holds(
        basis,
        Witness::new(Vec::new(), vec![max_index], vec![max_gap]),
        format!("largest commutator gap for n ≤ {max_index} is {max_gap:.3e}"),
    ))
}

/// Symbolic feeble-openness decision for affine and piecewise-linear maps.
pub fn feeble_open_check(m: &MapDescriptor) -> Verdict {
    if m.contains_lookup() {
        return Verdict::inconclusive(0, "no symbolic rule for lookup tables");
    }
    if let Some((slope, _)) = m.as_affine_circle() {
        return Verdict::holds(
            Basis::Symbolic,
            Witness::new(Vec::new(), Vec::new(), vec![slope as f64]),
            format!("affine circle map of slope {slope} is open"),
        );
    }
    if let Some(bps) = m.as_piecewise_linear() {
        let slopes = super::pl_slopes(&bps);
        if let Some(i) = slopes.iter().position(|s| *s == 0.0) {
            let j = (i..slopes.len()).take_while(|&k| slopes[k] == 0.0).last().unwrap_or(i);
            let (a, y) = bps[i];
            let b = bps[j + 1].0;
            return Verdict::refuted(
                Basis::Symbolic,
                Witness::new(vec![Point::Interval(a), Point::Interval(b)], Vec::new(), vec![0.0, y]),
                format!("piece [{a}, {b}] has slope 0 and collapses to the point {y}"),
            );
        }
        let min = slopes.iter().fold(f64::INFINITY, |m, s| m.min(s.abs()));
        return Verdict::holds(
            Basis::Symbolic,
            Witness::new(Vec::new(), Vec::new(), vec![min]),
            format!("every piece has nonzero slope; smallest |slope| is {min}"),
        );
    }
    Verdict::inconclusive(0, "no symbolic rule for shift-space maps")
}

/// Is `m` an isometry, and is it shrinking? Symbolic when possible, else sampled pairs.
pub fn isometry_shrinking_check(space: &PhaseSpace, m: &MapDescriptor, grid: usize, tol: f64) -> Result<(bool, bool)> {
    match (m.is_isometry_symbolic(), m.is_shrinking_symbolic()) {
        (Some(true), _) => return Ok((true, true)),
        (Some(false), Some(s)) => return Ok((false, s)),
        _ => {}
    }
    let grid = sample_grid(space, grid)?;
    let stride = grid.len().div_ceil(MAX_PAIR_POINTS).max(1);
    let pts: Vec<&Point> = grid.points().iter().step_by(stride).collect();
    let images: Vec<Point> = pts.iter().map(|p| m.apply(p)).collect::<Result<_>>()?;
    let mut iso = true;
    let mut shrink = true;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let d = raw_distance(pts[i], pts[j]);
            let e = raw_distance(&images[i], &images[j]);
            iso &= (e - d).abs() <= tol;
            shrink &= e <= d + tol;
        }
    }
    Ok((iso, shrink))
}

/// Pairwise isometry sampling uses at most this many grid points.
const MAX_PAIR_POINTS: usize = 256;

/// Is the grid image of `m` ε-dense in the grid?
pub fn surjectivity_check(space: &PhaseSpace, m: &MapDescriptor, grid: usize, eps: f64) -> Result<Verdict> {
    let cloud = sample_grid(space, grid)?;
    let image: Vec<Point> = cloud.points().iter().map(|p| m.apply(p)).collect::<Result<_>>()?;
    for (i, g) in cloud.points().iter().enumerate() {
        let gap = image.iter().map(|y| raw_distance(g, y)).fold(f64::INFINITY, f64::min);
        if gap > eps {
            return Ok(Verdict::refuted(
                Basis::Witness,
                Witness::new(vec![g.clone()], vec![i], vec![gap]),
                format!("grid point {g} is {gap:.4} away from the image"),
            ));
        }
    }
    let h = directed_hausdorff(cloud.points(), &image).max(directed_hausdorff(&image, cloud.points()));
    if h > eps {
        return Ok(Verdict::refuted(
            Basis::Witness,
            Witness::new(Vec::new(), Vec::new(), vec![h]),
            format!("image and grid are {h:.4} apart in the Hausdorff metric"),
        ));
    }
    Ok(Verdict::holds(
        Basis::Horizon,
        Witness::new(Vec::new(), vec![cloud.len()], vec![h]),
        format!("image of the {}-point grid is {h:.4}-dense", cloud.len()),
    ))
}

/// Hypotheses of the comparison theorems, measured on one family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypothesisProfile {
    pub commutes: Verdict,
    pub summability: SummabilityEstimate,
    pub uniform_convergence: Verdict,
    pub feeble_open: Verdict,
    pub surjective: Verdict,
    /// Whether the limit map is an isometry.
    pub isometry: bool,
    /// Whether the limit map is shrinking.
    pub shrinking: bool,
}

impl HypothesisProfile {
    pub fn partial_sums(&self) -> &[f64] {
        &self.summability.partial_sums
    }
}

/// Maps checked individually for feeble openness and surjectivity.
const FEEBLE_STEPS: usize = 64;
const SURJECTIVE_STEPS: usize = 16;

pub fn profile_hypotheses(fam: &MapFamily, cfg: &ProfileConfig) -> Result<HypothesisProfile> {
    let commutes = commutes_with_limit(fam, cfg.grid, cfg.tol, cfg.horizon)?;
    let summability = summability_estimate(fam, cfg.horizon, cfg.grid)?;
    let uniform_convergence = uniform_convergence(&summability.terms, cfg);
    let feeble_open = family_feeble_open(fam, cfg.horizon.min(FEEBLE_STEPS));
    let surjective = family_surjective(fam, cfg)?;
    let (isometry, shrinking) = isometry_shrinking_check(&fam.space, &fam.limit, cfg.grid, cfg.tol)?;
    Ok(HypothesisProfile { commutes, summability, uniform_convergence, feeble_open, surjective, isometry, shrinking })
}

fn uniform_convergence(terms: &[f64], cfg: &ProfileConfig) -> Verdict {
    let n = terms.len();
    let quarter = &terms[n - n.div_ceil(4)..];
    let half = n / 2;
    let max_first = terms[..half].iter().fold(0.0f64, |a, b| a.max(*b));
    let max_second = terms[half..].iter().fold(0.0f64, |a, b| a.max(*b));
    let min_quarter = quarter.iter().fold(f64::INFINITY, |a, b| a.min(*b));
    if min_quarter < cfg.eps && max_second <= max_first + cfg.tol {
        let first = terms.iter().position(|t| *t < cfg.eps).map_or(n, |i| i + 1);
        Verdict::holds(
            Basis::Horizon,
            Witness::new(Vec::new(), vec![first], vec![terms[first - 1]]),
            format!("D(f_n,f) < {} from n = {first}; tail terms do not grow", cfg.eps),
        )
    } else {
        Verdict::inconclusive(n, format!("D(f_n,f) does not settle below {} by the horizon", cfg.eps))
    }
}

fn family_feeble_open(fam: &MapFamily, steps: usize) -> Verdict {
    let limit = feeble_open_check(&fam.limit);
    if !limit.is_holds() {
        let mut v = limit;
        v.witness.indices.insert(0, 0);
        v.narrative = format!("limit map: {}", v.narrative);
        return v;
    }
    for n in 1..=steps {
        let v = feeble_open_check(&fam.step(n));
        if !v.is_holds() {
            let mut v = v;
            v.witness.indices.insert(0, n);
            v.narrative = format!("f_{n}: {}", v.narrative);
            return v;
        }
    }
    let uniform_form = fam.autonomous_from().is_some_and(|a| a <= steps + 1)
        || matches!(fam.generator, Generator::Builtin { .. });
    let basis = if uniform_form { Basis::Symbolic } else { Basis::Horizon };
    Verdict::holds(
        basis,
        Witness::horizon(steps),
        format!("the limit and f_1..f_{steps} have no zero-slope piece"),
    )
}

fn family_surjective(fam: &MapFamily, cfg: &ProfileConfig) -> Result<Verdict> {
    let limit = surjectivity_check(&fam.space, &fam.limit, cfg.grid, cfg.eps)?;
    if limit.is_refuted() {
        let mut v = limit;
        v.witness.indices.insert(0, 0);
        v.narrative = format!("limit map: {}", v.narrative);
        return Ok(v);
    }
    let steps = cfg.horizon.min(SURJECTIVE_STEPS);
    for n in 1..=steps {
        let v = surjectivity_check(&fam.space, &fam.step(n), cfg.grid, cfg.eps)?;
        if v.is_refuted() {
            let mut v = v;
            v.witness.indices.insert(0, n);
            v.narrative = format!("f_{n}: {}", v.narrative);
            return Ok(v);
        }
    }
    Ok(Verdict::holds(
        Basis::Horizon,
        Witness::horizon(steps),
        format!("the limit and f_1..f_{steps} have {}-dense grid images", cfg.eps),
    ))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::checkers::Outcome;
    use crate::family::{make_builtin_family, BuiltinParams};

    fn fam(name: &str) -> MapFamily {
        make_builtin_family(name, &BuiltinParams::default()).unwrap()
    }

    #[test]
    fn commutativity() {
        let v = commutes_with_limit(&fam("alternating-rotation"), 64, 1e-9, 200).unwrap();
        assert_eq!(v.outcome, Outcome::Holds);
        assert_eq!(v.witness.values, vec![0.0]);
        let v = commutes_with_limit(&fam("perturbed-doubling"), 64, 1e-9, 200).unwrap();
        assert_eq!(v.outcome, Outcome::Refuted);
        assert_eq!(v.witness.indices, vec![1]);
        assert!((v.witness.values[0] - 1.0f64.min(2.0 * PI - 1.0)).abs() < 1e-12);
        let t = fam("plateau-tent").limit_system();
        assert!(commutes_with_limit(&t, 64, 1e-9, 10).unwrap().is_holds());
    }

    #[test]
    fn feeble_openness() {
        assert!(feeble_open_check(&MapDescriptor::tent()).is_holds());
        let v = feeble_open_check(&MapDescriptor::plateau_tent());
        assert_eq!(v.outcome, Outcome::Refuted);
        assert_eq!(v.witness.points, vec![Point::Interval(0.0), Point::Interval(0.5)]);
        assert!(feeble_open_check(&MapDescriptor::rotation(1.0)).is_holds());
        assert_eq!(feeble_open_check(&MapDescriptor::OdometerAdd).outcome, Outcome::Inconclusive);
    }

    #[test]
    fn summability_flags() {
        let s = summability_estimate(&fam("inverse-square-rotation"), 200, 16).unwrap();
        assert_eq!(s.flag, Summability::Exact { sum: PI * PI / 6.0 });
        assert!(s.partial_sums.windows(2).all(|w| w[1] >= w[0]));
        let s = summability_estimate(&fam("alternating-rotation"), 200, 16).unwrap();
        assert!(matches!(s.flag, Summability::DivergentLikely { .. }));
        let s = summability_estimate(&fam("perturbed-doubling"), 200, 16).unwrap();
        assert!(matches!(s.flag, Summability::DivergentLikely { .. }));
        assert!((s.terms[4] - 0.2).abs() < 1e-12);
        let t = MapFamily::autonomous(PhaseSpace::unit_interval(), MapDescriptor::tent(), "tent").unwrap();
        let s = summability_estimate(&t, 50, 16).unwrap();
        assert!(s.partial_sums.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn isometry_and_shrinking() {
        let c = PhaseSpace::circle();
        let i = PhaseSpace::unit_interval();
        assert_eq!(isometry_shrinking_check(&c, &MapDescriptor::rotation(0.3), 64, 1e-9).unwrap(), (true, true));
        let dbl = MapDescriptor::AffineCircle { slope: 2, offset: 0.0 };
        assert_eq!(isometry_shrinking_check(&c, &dbl, 64, 1e-9).unwrap(), (false, false));
        assert_eq!(isometry_shrinking_check(&i, &MapDescriptor::tent(), 64, 1e-9).unwrap(), (false, false));
        let half = MapDescriptor::Lookup {
            domain: crate::space::SpaceKind::UnitInterval,
            values: vec![0.0, 0.5],
            interp: crate::family::Interp::Linear,
        };
        assert_eq!(isometry_shrinking_check(&i, &half, 32, 1e-9).unwrap(), (false, true));
    }

    #[test]
    fn surjectivity() {
        let i = PhaseSpace::unit_interval();
        assert!(surjectivity_check(&i, &MapDescriptor::tent(), 11, 0.1).unwrap().is_holds());
        let half = MapDescriptor::piecewise_linear(vec![(0.0, 0.0), (1.0, 0.5)]).unwrap();
        let v = surjectivity_check(&i, &half, 11, 0.1).unwrap();
        assert_eq!(v.outcome, Outcome::Refuted);
        let x = v.witness.points[0].coord().unwrap();
        assert!(x > 0.6 && x <= 1.0);
        let c = PhaseSpace::circle();
        assert!(surjectivity_check(&c, &MapDescriptor::rotation(0.7), 64, 0.1).unwrap().is_holds());
    }

    #[test]
    fn profile_invariants() {
        for b in BuiltinFamily::ALL {
            let f = fam(b.name());
            let p = profile_hypotheses(&f, &ProfileConfig { horizon: 40, grid: 8, ..Default::default() }).unwrap();
            assert!(!p.isometry || p.shrinking);
            assert!(p.partial_sums().windows(2).all(|w| w[1] >= w[0]));
        }
        let p = profile_hypotheses(&fam("plateau-tent"), &ProfileConfig::default()).unwrap();
        assert_eq!(p.feeble_open.outcome, Outcome::Refuted);
        assert_eq!(p.feeble_open.witness.indices, vec![1]);
        assert!(p.surjective.is_holds());
        assert!(p.uniform_convergence.is_holds());
    }
}
