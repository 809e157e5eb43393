//! Pointwise checkers: periodicity, proximality and Li–Yorke pairs, and the
//! density properties built from them.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sets::grid_points;
use super::{Basis, CheckConfig, SystemView, Verdict, Witness};
use crate::error::Result;
use crate::family::{compose_pl, MapFamily};
use crate::orbit::trajectory;
use crate::space::{ball_sample, circle_distance, raw_distance, wrap_angle, Point, PointKey};

/// Pair relation tested by the cell-density checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairPredicate {
    Proximal,
    LiYorke,
}

/// Is `x` periodic: some `n ≤ P` with `ω_{nk}(x) = x` for `k = 1..R`
/// (just `f^n(x) = x` for an autonomous system), within `tol`.
pub fn check_periodic(sys: &SystemView, x: &Point, cfg: &CheckConfig) -> Result<Verdict> {
    let fam = sys.family();
    let reps = if fam.is_autonomous() { 1 } else { cfg.repetitions };
    let t = trajectory(fam, x, cfg.max_period * reps)?;
    let mut best = f64::INFINITY;
    for n in 1..=cfg.max_period {
        let gap = (1..=reps).map(|k| raw_distance(t.state(n * k), x)).fold(0.0, f64::max);
        if gap <= cfg.tol {
            return Ok(Verdict::holds(
                Basis::Witness,
                Witness::new(vec![x.clone()], vec![n], vec![gap]),
                format!("returns within tolerance after {n} steps, {reps} times over"),
            ));
        }
        best = best.min(gap);
    }
    Ok(Verdict::refuted(
        Basis::Horizon,
        Witness::new(vec![x.clone()], Vec::new(), vec![best]),
        format!("no period up to {}; closest return {best:.3e}", cfg.max_period),
    ))
}

pub fn check_periodic_points(sys: &SystemView, cfg: &CheckConfig) -> Result<Verdict> {
    let grid = grid_points(sys, cfg)?;
    let verdicts = grid.par_iter().map(|x| check_periodic(sys, x, cfg)).collect::<Result<Vec<_>>>()?;
    let mut w = Witness::default();
    for (i, v) in verdicts.iter().enumerate() {
        if v.is_holds() {
            w.points.push(grid[i].clone());
            w.indices.push(i);
            w.values.push(v.witness.indices[0] as f64);
        }
    }
    Ok(if w.points.is_empty() {
        Verdict::refuted(Basis::Horizon, Witness::horizon(cfg.horizon), format!("no grid point has period ≤ {}", cfg.max_period))
    } else {
        let count = w.points.len();
        Verdict::holds(Basis::Witness, w, format!("{count} of {} grid points are periodic", grid.len()))
    })
}

/// Exact periodic-point candidates of `ω_n` near `x` for affine circle and
/// piecewise-linear interval families.
fn analytic_candidates(fam: &MapFamily, x: &Point, eps: f64, max_period: usize) -> Vec<Point> {
    let mut out = Vec::new();
    match x {
        Point::Circle(c) => {
            let (mut s, mut o) = (1i64, 0.0);
            for n in 1..=max_period {
                let Some((a, b)) = fam.step(n).as_affine_circle() else { break };
                let Some(ns) = a.checked_mul(s) else { break };
                s = ns;
                o = wrap_angle(a as f64 * o + b);
                if s == 1 {
                    if circle_distance(o, 0.0) == 0.0 {
                        out.push(x.clone());
                    }
                    continue;
                }
                // (s - 1) θ ≡ -o (mod 2π)
                let m = (s - 1) as f64;
                let j0 = ((m * c + o) / std::f64::consts::TAU).round();
                for dj in [-1.0, 0.0, 1.0] {
                    let th = wrap_angle((std::f64::consts::TAU * (j0 + dj) - o) / m);
                    if circle_distance(th, *c) < eps {
                        out.push(Point::circle(th));
                    }
                }
            }
        }
        Point::Interval(c) => {
            let mut acc: Option<Vec<(f64, f64)>> = None;
            for n in 1..=max_period {
                let Some(step) = fam.step(n).as_piecewise_linear() else { break };
                let next = match &acc {
                    None => step,
                    Some(inner) => compose_pl(&step, inner),
                };
                for w in next.windows(2) {
                    let ((a, ya), (b, yb)) = (w[0], w[1]);
                    let (ha, hb) = (ya - a, yb - b);
                    let root = if ha == 0.0 && hb == 0.0 {
                        Some(c.clamp(a, b))
                    } else if ha == 0.0 {
                        Some(a)
                    } else if ha.signum() != hb.signum() {
                        Some(a + (b - a) * ha / (ha - hb))
                    } else {
                        None
                    };
                    if let Some(r) = root.filter(|r| (r - c).abs() < eps) {
                        out.push(Point::Interval(r.clamp(0.0, 1.0)));
                    }
                }
                acc = Some(next);
            }
        }
        Point::Word(_) => {}
    }
    out
}

pub fn check_dense_periodicity(sys: &SystemView, cfg: &CheckConfig) -> Result<Verdict> {
    let fam = sys.family();
    let grid = grid_points(sys, cfg)?;
    let found = grid
        .par_iter()
        .map(|x| -> Result<Option<(Point, usize)>> {
            let mut cands = ball_sample(sys.space(), x, cfg.eps, cfg.ball_count)?.into_points();
            cands.extend(analytic_candidates(fam, x, cfg.eps, cfg.max_period));
            for c in &cands {
                let v = check_periodic(sys, c, cfg)?;
                if v.is_holds() {
                    return Ok(Some((c.clone(), v.witness.indices[0])));
                }
            }
            Ok(None)
        })
        .collect::<Result<Vec<_>>>()?;
    if let Some(i) = found.iter().position(Option::is_none) {
        return Ok(Verdict::refuted(
            Basis::Horizon,
            Witness::new(vec![grid[i].clone()], vec![i], Vec::new()),
            format!("no periodic point of period ≤ {} found in one ε-ball", cfg.max_period),
        ));
    }
    let mut w = Witness::default();
    for (p, n) in found.into_iter().flatten() {
        w.points.push(p);
        w.values.push(n as f64);
    }
    Ok(Verdict::holds(Basis::Horizon, w, "every ε-ball around the grid contains a periodic point"))
}

/// `(start, period)` of the joint orbit of a pair once the family is autonomous
/// and the pair state repeats.
fn pair_cycle(fam: &MapFamily, tx: &[Point], ty: &[Point]) -> Option<(usize, usize)> {
    let a = fam.autonomous_from()?;
    let mut seen: HashMap<(PointKey, PointKey), usize> = HashMap::new();
    for n in a.saturating_sub(1)..tx.len() {
        let k = (tx[n].key(), ty[n].key());
        if let Some(&i) = seen.get(&k) {
            return Some((i, n - i));
        }
        seen.insert(k, n);
    }
    None
}

/// Decide `pred` for a pair from precomputed orbits `ω_0..ω_N`.
fn classify(sys: &SystemView, cfg: &CheckConfig, tx: &[Point], ty: &[Point], pred: PairPredicate) -> Verdict {
    let fam = sys.family();
    let (x, y) = (&tx[0], &ty[0]);
    let d0 = raw_distance(x, y);
    let pts = vec![x.clone(), y.clone()];
    if d0 == 0.0 {
        return match pred {
            PairPredicate::Proximal => Verdict::holds(Basis::Symbolic, Witness::new(pts, vec![0], vec![0.0]), "a point is proximal to itself"),
            PairPredicate::LiYorke => Verdict::refuted(Basis::Symbolic, Witness::new(pts, Vec::new(), vec![0.0]), "a point never separates from itself"),
        };
    }
    if fam.steps_isometric() {
        return Verdict::refuted(
            Basis::Symbolic,
            Witness::new(pts, Vec::new(), vec![d0]),
            format!("isometric steps hold the pair at distance {d0:.4} forever"),
        );
    }
    if let Some((start, period)) = pair_cycle(fam, tx, ty) {
        let ds: Vec<(usize, f64)> = (start..start + period).map(|n| (n, raw_distance(&tx[n], &ty[n]))).collect();
        let (nmin, dmin) = ds.iter().copied().fold((start, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
        let (nmax, dmax) = ds.iter().copied().fold((start, -1.0), |a, b| if b.1 > a.1 { b } else { a });
        let holds = match pred {
            PairPredicate::Proximal => dmin == 0.0,
            PairPredicate::LiYorke => dmin == 0.0 && dmax > 0.0,
        };
        let w = Witness::new(pts, vec![nmin, nmax], vec![dmin, dmax]);
        let text = format!("the pair cycles with period {period} from n = {start}; distances span [{dmin:.4}, {dmax:.4}]");
        return if holds { Verdict::holds(Basis::Witness, w, text) } else { Verdict::refuted(Basis::Witness, w, text) };
    }
    let n_total = tx.len() - 1;
    let from = n_total + 1 - cfg.tail_window.min(n_total);
    let (mut nmin, mut dmin, mut nmax, mut dmax) = (from, f64::INFINITY, from, -1.0f64);
    for n in from..=n_total {
        let d = raw_distance(&tx[n], &ty[n]);
        if d < dmin {
            (nmin, dmin) = (n, d);
        }
        if d > dmax {
            (nmax, dmax) = (n, d);
        }
    }
    let near = dmin < cfg.eps;
    let far = dmax > cfg.delta;
    let w = Witness::new(pts, vec![nmin, nmax], vec![dmin, dmax]);
    match pred {
        PairPredicate::Proximal if near => {
            Verdict::holds(Basis::Witness, w, format!("the pair comes within {dmin:.4} < ε at n = {nmin}"))
        }
        PairPredicate::LiYorke if near && far => Verdict::holds(
            Basis::Witness,
            w,
            format!("the pair comes within {dmin:.4} at n = {nmin} and separates to {dmax:.4} at n = {nmax}"),
        ),
        _ => {
            let mut v = Verdict::inconclusive(n_total, format!("tail distances span [{dmin:.4}, {dmax:.4}]"));
            v.witness = Witness { points: v.witness.points, indices: vec![n_total], values: vec![dmin, dmax] };
            v
        }
    }
}

fn pair_check(sys: &SystemView, x: &Point, y: &Point, cfg: &CheckConfig, pred: PairPredicate) -> Result<Verdict> {
    let fam = sys.family();
    let tx = trajectory(fam, x, cfg.horizon)?;
    let ty = trajectory(fam, y, cfg.horizon)?;
    Ok(classify(sys, cfg, &tx.states, &ty.states, pred))
}

pub fn proximal_check(sys: &SystemView, x: &Point, y: &Point, cfg: &CheckConfig) -> Result<Verdict> {
    pair_check(sys, x, y, cfg, PairPredicate::Proximal)
}

pub fn li_yorke_check(sys: &SystemView, x: &Point, y: &Point, cfg: &CheckConfig) -> Result<Verdict> {
    pair_check(sys, x, y, cfg, PairPredicate::LiYorke)
}

/// Grid points, the samples of the ε-ball around each, and their orbits.
struct Cells {
    grid: Vec<Point>,
    grid_orbits: Vec<Vec<Point>>,
    sample_orbits: Vec<Vec<Vec<Point>>>,
}

fn cells(sys: &SystemView, cfg: &CheckConfig) -> Result<Cells> {
    let fam = sys.family();
    let grid = grid_points(sys, cfg)?;
    let samples = grid
        .iter()
        .map(|x| Ok(ball_sample(sys.space(), x, cfg.eps, cfg.ball_count)?.into_points()))
        .collect::<Result<Vec<_>>>()?;
    let orbit = |p: &Point| trajectory(fam, p, cfg.horizon).map(|t| t.states);
    let grid_orbits = grid.par_iter().map(orbit).collect::<Result<Vec<_>>>()?;
    let sample_orbits = samples
        .par_iter()
        .map(|s| s.iter().map(orbit).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(Cells { grid, grid_orbits, sample_orbits })
}

/// Outcome of a cell-density check for one base point.
enum CellResult {
    Full,
    Refuted(Verdict),
    Gap(usize),
}

fn cell_result(sys: &SystemView, cfg: &CheckConfig, cells: &Cells, x: &Point, tx: &[Point], pred: PairPredicate) -> CellResult {
    if sys.family().steps_isometric() {
        let far = cells.grid.iter().position(|c| raw_distance(c, x) >= cfg.eps);
        let cell = match pred {
            PairPredicate::Proximal => far,
            PairPredicate::LiYorke => Some(0),
        };
        if let Some(j) = cell {
            return CellResult::Refuted(Verdict::refuted(
                Basis::Symbolic,
                Witness::new(vec![x.clone(), cells.grid[j].clone()], vec![j], vec![cfg.eps]),
                "isometric steps fix every pair distance, so the ε-ball has no partner for the point",
            ));
        }
    }
    for (j, orbits) in cells.sample_orbits.iter().enumerate() {
        if !orbits.iter().any(|ty| classify(sys, cfg, tx, ty, pred).is_holds()) {
            return CellResult::Gap(j);
        }
    }
    CellResult::Full
}

/// Does every ε-ball of the grid contain a partner of `x` under `pred`?
pub fn cell_density(sys: &SystemView, x: &Point, cfg: &CheckConfig, pred: PairPredicate) -> Result<Verdict> {
    let c = cells(sys, cfg)?;
    let tx = trajectory(sys.family(), x, cfg.horizon)?;
    Ok(match cell_result(sys, cfg, &c, x, &tx.states, pred) {
        CellResult::Full => Verdict::holds(Basis::Horizon, Witness::new(vec![x.clone()], Vec::new(), Vec::new()), "every ε-ball holds a partner"),
        CellResult::Refuted(v) => v,
        CellResult::Gap(j) => gap_verdict(cfg, x, j),
    })
}

fn gap_verdict(cfg: &CheckConfig, x: &Point, j: usize) -> Verdict {
    let mut v = Verdict::inconclusive(cfg.horizon, format!("no sampled partner found in ε-ball {j}"));
    v.witness.points.push(x.clone());
    v.witness.indices.push(j);
    v
}

pub(crate) fn cell_density_over_grid(sys: &SystemView, cfg: &CheckConfig, pred: PairPredicate) -> Result<Verdict> {
    let c = cells(sys, cfg)?;
    let results: Vec<CellResult> = c
        .grid
        .par_iter()
        .zip(c.grid_orbits.par_iter())
        .map(|(x, tx)| cell_result(sys, cfg, &c, x, tx, pred))
        .collect();
    let mut gap = None;
    for (i, r) in results.into_iter().enumerate() {
        match r {
            CellResult::Refuted(v) => return Ok(v),
            CellResult::Gap(j) => {
                gap.get_or_insert((i, j));
            }
            CellResult::Full => {}
        }
    }
    Ok(match gap {
        None => Verdict::holds(
            Basis::Horizon,
            Witness::new(Vec::new(), Vec::new(), Vec::new()),
            "for every grid point, every ε-ball holds a partner",
        ),
        Some((i, j)) => gap_verdict(cfg, &c.grid[i], j),
    })
}

pub fn proximal_cell_density(sys: &SystemView, cfg: &CheckConfig) -> Result<Verdict> {
    cell_density_over_grid(sys, cfg, PairPredicate::Proximal)
}

/// Does every pair of grid ε-balls contain a proximal pair?
pub fn dense_proximal_pairs(sys: &SystemView, cfg: &CheckConfig) -> Result<Verdict> {
    let c = cells(sys, cfg)?;
    let r = c.grid.len();
    if sys.family().steps_isometric() {
        if let Some(j) = (1..r).find(|&j| raw_distance(&c.grid[0], &c.grid[j]) >= 2.0 * cfg.eps) {
            return Ok(Verdict::refuted(
                Basis::Symbolic,
                Witness::new(vec![c.grid[0].clone(), c.grid[j].clone()], vec![0, j], Vec::new()),
                "isometric steps make proximal pairs diagonal, so two disjoint ε-balls hold none",
            ));
        }
    }
    let missing = (0..r * r).into_par_iter().find_first(|&p| {
        let (a, b) = (&c.sample_orbits[p / r], &c.sample_orbits[p % r]);
        !a.iter().any(|tx| b.iter().any(|ty| classify(sys, cfg, tx, ty, PairPredicate::Proximal).is_holds()))
    });
    Ok(match missing {
        None => Verdict::holds(Basis::Horizon, Witness::default(), "every pair of ε-balls holds a proximal pair"),
        Some(p) => {
            let mut v = Verdict::inconclusive(cfg.horizon, "no sampled proximal pair in one pair of ε-balls");
            v.witness.indices.extend([p / r, p % r]);
            v
        }
    })
}

/// Does every grid point have a Li–Yorke partner in its ε-ball?
pub fn li_yorke_sensitivity(sys: &SystemView, cfg: &CheckConfig) -> Result<Verdict> {
    let c = cells(sys, cfg)?;
    if sys.family().steps_isometric() {
        return Ok(Verdict::refuted(
            Basis::Symbolic,
            Witness::new(vec![c.grid[0].clone()], vec![0], vec![cfg.eps]),
            "isometric steps admit no Li–Yorke pairs",
        ));
    }
    let missing = (0..c.grid.len()).into_par_iter().find_first(|&i| {
        !c.sample_orbits[i]
            .iter()
            .skip(1)
            .any(|ty| classify(sys, cfg, &c.grid_orbits[i], ty, PairPredicate::LiYorke).is_holds())
    });
    Ok(match missing {
        None => Verdict::holds(Basis::Horizon, Witness::default(), "every grid point has a Li–Yorke partner within ε"),
        Some(i) => gap_verdict(cfg, &c.grid[i], i),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checkers::{Mode, Outcome};
    use crate::family::{make_builtin_family, BuiltinParams};

    fn view(name: &str, mode: Mode) -> SystemView {
        SystemView::new(make_builtin_family(name, &BuiltinParams::default()).unwrap(), mode)
    }

    fn cfg(horizon: usize, grid: usize, eps: f64, delta: f64, p: usize, r: usize) -> CheckConfig {
        CheckConfig { horizon, grid, eps, delta, tail_window: horizon * 2 / 5, max_period: p, repetitions: r, ..Default::default() }
    }

    #[test]
    fn plateau_periodicity() {
        let c = cfg(500, 11, 0.1, 0.25, 8, 3);
        let f = view("plateau-tent", Mode::NonAutonomous);
        let v = check_periodic(&f, &Point::Interval(0.0), &c).unwrap();
        assert_eq!(v.witness.indices, vec![2]);
        let v = check_periodic_points(&f, &c).unwrap();
        assert_eq!(v.witness.indices, vec![0, 8]);
        assert_eq!(check_dense_periodicity(&f, &c).unwrap().outcome, Outcome::Refuted);
        let l = view("plateau-tent", Mode::AutonomousLimit);
        assert_eq!(check_periodic(&l, &Point::Interval(0.0), &c).unwrap().witness.indices, vec![1]);
        assert_eq!(check_dense_periodicity(&l, &c).unwrap().outcome, Outcome::Holds);
    }

    #[test]
    fn rotation_periodicity() {
        let c = cfg(2000, 12, 0.1, 0.5, 100, 5);
        let f = view("inverse-square-rotation", Mode::NonAutonomous);
        let l = view("inverse-square-rotation", Mode::AutonomousLimit);
        assert_eq!(check_periodic_points(&f, &c).unwrap().outcome, Outcome::Refuted);
        assert_eq!(check_periodic_points(&l, &c).unwrap().outcome, Outcome::Holds);
        assert_eq!(check_dense_periodicity(&l, &c).unwrap().outcome, Outcome::Holds);
    }

    #[test]
    fn doubling_periodic_candidates() {
        let c = cfg(300, 12, 0.2, 0.5, 10, 3);
        let l = view("perturbed-doubling", Mode::AutonomousLimit);
        assert_eq!(check_dense_periodicity(&l, &c).unwrap().outcome, Outcome::Holds);
        assert!(check_periodic(&l, &Point::circle(0.0), &c).unwrap().is_holds());
    }

    #[test]
    fn pairs() {
        let c = cfg(300, 12, 0.2, 0.5, 10, 3);
        let a = view("alternating-rotation", Mode::NonAutonomous);
        let (x, y) = (Point::circle(0.0), Point::circle(1.0));
        assert_eq!(proximal_check(&a, &x, &y, &c).unwrap().outcome, Outcome::Refuted);
        assert_eq!(proximal_check(&a, &x, &x, &c).unwrap().outcome, Outcome::Holds);
        assert_eq!(li_yorke_check(&a, &x, &x, &c).unwrap().outcome, Outcome::Refuted);
        let t = view("plateau-tent", Mode::NonAutonomous);
        let v = proximal_check(&t, &Point::Interval(0.1), &Point::Interval(0.3), &c).unwrap();
        assert_eq!(v.outcome, Outcome::Holds);
        let v = li_yorke_check(&t, &Point::Interval(0.1), &Point::Interval(0.3), &c).unwrap();
        assert_eq!(v.outcome, Outcome::Refuted);
        assert_eq!(li_yorke_sensitivity(&a, &c).unwrap().outcome, Outcome::Refuted);
        assert_eq!(dense_proximal_pairs(&a, &c).unwrap().outcome, Outcome::Refuted);
        assert_eq!(cell_density(&a, &x, &c, PairPredicate::Proximal).unwrap().outcome, Outcome::Refuted);
    }
}
