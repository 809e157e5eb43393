//! Checkers quantifying over open sets: equicontinuity, sensitivity,
//! transitivity, mixing and minimality.

use rayon::prelude::*;

use super::region::{Region, RegionOrbit};
use super::{confinement, Basis, CheckConfig, SystemView, Verdict, Witness};
use crate::error::Result;
use crate::orbit::trajectory;
use crate::space::{ball_sample, raw_distance, sample_grid, shared_prefix_for_radius, BinaryWord, Point, SpaceKind, MAX_GRID_WORD_BITS};

/// Rungs of the `δ'` ladder for equicontinuity.
const EQUI_RUNGS: u32 = 10;

pub(crate) fn grid_points(sys: &SystemView, cfg: &CheckConfig) -> Result<Vec<Point>> {
    Ok(sample_grid(sys.space(), cfg.grid)?.into_points())
}

/// Radii a ball can take without dropping below the space's resolution.
fn resolvable(sys: &SystemView, radii: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let floor = sys.space().resolution_floor();
    radii.into_iter().filter(|r| *r > floor).collect()
}

pub fn check_equicontinuity(sys: &SystemView, cfg: &CheckConfig) -> Result<Verdict> {
    if sys.family().steps_isometric() {
        return Ok(Verdict::holds(
            Basis::Symbolic,
            Witness::new(Vec::new(), Vec::new(), vec![cfg.eps]),
            format!("isometric steps preserve every pair distance, so δ = ε = {} works", cfg.eps),
        ));
    }
    let fam = sys.family();
    let grid = grid_points(sys, cfg)?;
    let trajs = grid
        .par_iter()
        .map(|x| trajectory(fam, x, cfg.horizon))
        .collect::<Result<Vec<_>>>()?;
    let rungs = resolvable(sys, (0..=EQUI_RUNGS).map(|j| cfg.eps / 2f64.powi(j as i32)));
    let mut violation = None;
    for (j, &r) in rungs.iter().enumerate() {
        let found = grid
            .par_iter()
            .zip(trajs.par_iter())
            .map(|(x, tx)| -> Result<Option<(Point, Point, usize, f64)>> {
                let ys = ball_sample(sys.space(), x, r, cfg.ball_count)?;
                for y0 in ys.points().iter().skip(1) {
                    let mut y = y0.clone();
                    for n in 1..=cfg.horizon {
                        y = fam.apply_step(n, &y)?;
                        let d = raw_distance(tx.state(n), &y);
                        if d > cfg.eps {
                            return Ok(Some((x.clone(), y0.clone(), n, d)));
                        }
                    }
                }
                Ok(None)
            })
            .collect::<Result<Vec<_>>>()?;
        match found.into_iter().flatten().next() {
            None => {
                return Ok(Verdict::holds(
                    Basis::Horizon,
                    Witness::new(Vec::new(), vec![j], vec![r]),
                    format!("pairs closer than {r} stay within ε = {} up to n = {}", cfg.eps, cfg.horizon),
                ))
            }
            Some(v) => violation = Some((r, v)),
        }
    }
    Ok(match violation {
        Some((r, (x, y, n, d))) => Verdict::refuted(
            Basis::Witness,
            Witness::new(vec![x, y], vec![n], vec![r, d]),
            format!("on every rung down to {r}, a pair within the rung separates past ε; last: {d:.4} at n = {n}"),
        ),
        None => Verdict::inconclusive(cfg.horizon, "no ball radius resolvable at this word length"),
    })
}

fn sensitivity_radii(sys: &SystemView, cfg: &CheckConfig) -> Vec<f64> {
    resolvable(sys, [cfg.eps, cfg.eps / 4.0, cfg.eps / 16.0])
}

/// Refutation shared by both sensitivity checks: under isometric steps a ball of
/// diameter at most `δ` never grows.
fn isometric_insensitivity(sys: &SystemView, cfg: &CheckConfig, radii: &[f64]) -> Result<Option<Verdict>> {
    if !sys.family().steps_isometric() {
        return Ok(None);
    }
    let Some(&r) = radii.iter().find(|r| 2.0 * *r <= cfg.delta) else { return Ok(None) };
    let x = grid_points(sys, cfg)?.swap_remove(0);
    Ok(Some(Verdict::refuted(
        Basis::Symbolic,
        Witness::new(vec![x], Vec::new(), vec![r]),
        format!("isometric steps keep the diameter of a ball of radius {r} at most {} ≤ δ", 2.0 * r),
    )))
}

fn ball_orbits(sys: &SystemView, cfg: &CheckConfig, grid: &[Point], radius: f64) -> Result<Vec<RegionOrbit>> {
    grid.par_iter()
        .map(|x| {
            let u = Region::ball(sys.space(), x, radius, cfg.ball_count)?;
            RegionOrbit::compute(sys, u, cfg.horizon, cfg.ball_count)
        })
        .collect()
}

/// Per ball: first time its image has diameter above `δ`, the last time it does
/// not, and whether the entire future stays at or below `δ` (resp. returns there).
struct Spread {
    first_above: Option<usize>,
    last_below: Option<usize>,
    never_above: bool,
    returns_below: bool,
    collapse: Option<usize>,
}

fn spread(o: &RegionOrbit, delta: f64) -> Spread {
    let mut first_above = None;
    let mut last_below = None;
    for n in o.distinct_range() {
        if o.at(n).diameter() > delta {
            first_above.get_or_insert(n);
        } else {
            last_below = Some(n);
        }
    }
    let exact_future = o.forecast() && o.all_exact();
    Spread {
        first_above,
        last_below,
        never_above: exact_future && first_above.is_none(),
        returns_below: exact_future && o.cycle_turn().is_some_and(|mut t| t.any(|n| o.at(n).diameter() <= delta)),
        collapse: o.collapse_time(),
    }
}

pub fn check_sensitivity(sys: &SystemView, cfg: &CheckConfig) -> Result<Verdict> {
    let radii = sensitivity_radii(sys, cfg);
    if radii.is_empty() {
        return Ok(Verdict::inconclusive(cfg.horizon, "no ball radius resolvable at this word length"));
    }
    if let Some(v) = isometric_insensitivity(sys, cfg, &radii)? {
        return Ok(v);
    }
    let grid = grid_points(sys, cfg)?;
    let mut times = vec![0usize; grid.len()];
    let mut open = None;
    for &r in &radii {
        let orbits = ball_orbits(sys, cfg, &grid, r)?;
        for (i, o) in orbits.iter().enumerate() {
            let s = spread(o, cfg.delta);
            if s.never_above {
                return Ok(Verdict::refuted(
                    Basis::Symbolic,
                    Witness::new(vec![grid[i].clone()], vec![s.collapse.unwrap_or(0)], vec![r]),
                    collapse_text(r, s.collapse, cfg.delta),
                ));
            }
            match s.first_above {
                Some(n) => times[i] = times[i].max(n),
                None => {
                    open.get_or_insert((i, r));
                }
            }
        }
    }
    Ok(match open {
        None => Verdict::holds(
            Basis::Horizon,
            Witness::new(Vec::new(), times.clone(), Vec::new()),
            format!(
                "every sampled ball exceeds diameter δ = {} by n = {}",
                cfg.delta,
                times.iter().max().copied().unwrap_or(0)
            ),
        ),
        Some((i, r)) => {
            let mut v = Verdict::inconclusive(
                cfg.horizon,
                format!("the ball of radius {r} around grid point {i} stays within δ up to the horizon"),
            );
            v.witness.points.push(grid[i].clone());
            v
        }
    })
}

fn collapse_text(r: f64, collapse: Option<usize>, delta: f64) -> String {
    match collapse {
        Some(n) => format!("a ball of radius {r} collapses to a point at n = {n} and stays a point"),
        None => format!("the exact images of a ball of radius {r} repeat without exceeding diameter {delta}"),
    }
}

pub fn check_cofinite_sensitivity(sys: &SystemView, cfg: &CheckConfig) -> Result<Verdict> {
    let radii = sensitivity_radii(sys, cfg);
    if radii.is_empty() {
        return Ok(Verdict::inconclusive(cfg.horizon, "no ball radius resolvable at this word length"));
    }
    if let Some(v) = isometric_insensitivity(sys, cfg, &radii)? {
        return Ok(v);
    }
    let grid = grid_points(sys, cfg)?;
    let half = cfg.horizon / 2;
    let mut ks = vec![1usize; grid.len()];
    let mut open = None;
    for &r in &radii {
        let orbits = ball_orbits(sys, cfg, &grid, r)?;
        for (i, o) in orbits.iter().enumerate() {
            let s = spread(o, cfg.delta);
            if s.never_above || s.returns_below {
                return Ok(Verdict::refuted(
                    Basis::Symbolic,
                    Witness::new(vec![grid[i].clone()], vec![s.collapse.unwrap_or(0)], vec![r]),
                    if s.never_above {
                        collapse_text(r, s.collapse, cfg.delta)
                    } else {
                        format!("the exact images of a ball of radius {r} return to diameter ≤ δ forever")
                    },
                ));
            }
            let k = s.last_below.map_or(1, |n| n + 1);
            if k <= half || (o.forecast() && o.all_exact()) {
                ks[i] = ks[i].max(k);
            } else {
                open.get_or_insert((i, r));
            }
        }
    }
    Ok(match open {
        None => Verdict::holds(
            Basis::Horizon,
            Witness::new(Vec::new(), ks.clone(), Vec::new()),
            format!(
                "every sampled ball keeps diameter above δ = {} from n = {} to the horizon",
                cfg.delta,
                ks.iter().max().copied().unwrap_or(1)
            ),
        ),
        Some((i, r)) => {
            let mut v = Verdict::inconclusive(
                cfg.horizon,
                format!("the ball of radius {r} around grid point {i} drops to diameter ≤ δ in the second half"),
            );
            v.witness.points.push(grid[i].clone());
            v
        }
    })
}

/// First hit time of each `(U_i, V_j)` pair, plus a refutation when one is provable.
struct HitTable {
    first: Vec<Vec<Option<usize>>>,
    refutation: Option<Verdict>,
}

fn hit_table(sys: &SystemView, cfg: &CheckConfig, grid: &[Point], orbits: &[RegionOrbit]) -> HitTable {
    let rho = confinement(sys);
    let mut refutation = None;
    let first: Vec<Vec<Option<usize>>> = orbits
        .par_iter()
        .map(|o| {
            grid.iter()
                .map(|c| o.distinct_range().find(|&n| o.at(n).hits(c, cfg.eps)))
                .collect()
        })
        .collect();
    'outer: for (i, o) in orbits.iter().enumerate() {
        for (j, c) in grid.iter().enumerate() {
            if let Some(rho) = rho {
                let d = raw_distance(&grid[i], c);
                if d >= 2.0 * cfg.eps + rho {
                    refutation = Some(Verdict::refuted(
                        Basis::Symbolic,
                        Witness::new(vec![grid[i].clone(), c.clone()], vec![i, j], vec![rho]),
                        format!("orbits move at most {rho:.6} in total, too little to carry U into V"),
                    ));
                    break 'outer;
                }
            }
            if first[i][j].is_none() && o.forecast() && o.all_exact() {
                refutation = Some(Verdict::refuted(
                    Basis::Symbolic,
                    Witness::new(vec![grid[i].clone(), c.clone()], vec![i, j], Vec::new()),
                    collapse_miss_text(o),
                ));
                break 'outer;
            }
        }
    }
    HitTable { first, refutation }
}

fn collapse_miss_text(o: &RegionOrbit) -> String {
    match o.collapse_time() {
        Some(n) => format!("U collapses to a point at n = {n} whose eventually periodic orbit never meets V"),
        None => "the exact images of U repeat without ever meeting V".to_string(),
    }
}

fn transitivity_orbits(sys: &SystemView, cfg: &CheckConfig, grid: &[Point]) -> Result<Vec<RegionOrbit>> {
    ball_orbits(sys, cfg, grid, cfg.eps)
}

pub fn check_transitivity(sys: &SystemView, cfg: &CheckConfig) -> Result<Verdict> {
    let grid = grid_points(sys, cfg)?;
    let orbits = transitivity_orbits(sys, cfg, &grid)?;
    let table = hit_table(sys, cfg, &grid, &orbits);
    if let Some(v) = table.refutation {
        return Ok(v);
    }
    let missed: Vec<(usize, usize)> = table
        .first
        .iter()
        .enumerate()
        .flat_map(|(i, row)| row.iter().enumerate().filter(|(_, h)| h.is_none()).map(move |(j, _)| (i, j)))
        .collect();
    if missed.is_empty() {
        let worst = table.first.iter().flatten().flatten().max().copied().unwrap_or(0);
        return Ok(Verdict::holds(
            Basis::Horizon,
            Witness::new(Vec::new(), vec![worst], Vec::new()),
            format!("every pair of ε-balls on the grid meets by n = {worst}"),
        ));
    }
    let (i, j) = missed[0];
    let mut v = Verdict::inconclusive(cfg.horizon, format!("{} ordered ball pairs never meet up to the horizon", missed.len()));
    v.witness.indices.extend([i, j]);
    Ok(v)
}

/// Bitset of hit times `1..=N` for one `(U, V)` pair.
fn hit_bits(o: &RegionOrbit, c: &Point, eps: f64, horizon: usize) -> Vec<u64> {
    let mut bits = vec![0u64; horizon / 64 + 1];
    for n in 1..=horizon {
        if o.at(n).hits(c, eps) {
            bits[n / 64] |= 1 << (n % 64);
        }
    }
    bits
}

fn first_common(a: &[u64], b: &[u64]) -> Option<usize> {
    a.iter().zip(b).enumerate().find_map(|(w, (x, y))| {
        let z = x & y;
        (z != 0).then(|| w * 64 + z.trailing_zeros() as usize)
    })
}

pub fn check_weak_mixing(sys: &SystemView, cfg: &CheckConfig) -> Result<Verdict> {
    let grid = grid_points(sys, cfg)?;
    if sys.family().steps_isometric() {
        // an image of U has diameter at most 2ε, so it cannot meet two ε-balls 4ε apart
        for (j1, c1) in grid.iter().enumerate() {
            for (j2, c2) in grid.iter().enumerate().skip(j1 + 1) {
                if raw_distance(c1, c2) >= 4.0 * cfg.eps {
                    return Ok(Verdict::refuted(
                        Basis::Symbolic,
                        Witness::new(vec![grid[0].clone(), c1.clone(), c2.clone()], vec![0, j1, j2], Vec::new()),
                        format!(
                            "isometric images of an ε-ball cannot meet two ε-balls {:.4} apart at once",
                            raw_distance(c1, c2)
                        ),
                    ));
                }
            }
        }
    }
    let orbits = transitivity_orbits(sys, cfg, &grid)?;
    let table = hit_table(sys, cfg, &grid, &orbits);
    if let Some(v) = table.refutation {
        return Ok(v);
    }
    let r = grid.len();
    let bits: Vec<Vec<u64>> = (0..r * r)
        .into_par_iter()
        .map(|p| hit_bits(&orbits[p / r], &grid[p % r], cfg.eps, cfg.horizon))
        .collect();
    let results: Vec<(usize, Option<usize>)> = (0..r * r)
        .into_par_iter()
        .map(|p| {
            let mut worst = 0;
            for q in 0..r * r {
                match first_common(&bits[p], &bits[q]) {
                    Some(n) => worst = worst.max(n),
                    None => return (p, Some(q)),
                }
            }
            (worst, None)
        })
        .collect();
    if let Some((p, Some(q))) = results.iter().find(|(_, miss)| miss.is_some()) {
        let mut v = Verdict::inconclusive(cfg.horizon, "some two ball pairs are never met at a common time");
        v.witness.indices.extend([p / r, p % r, q / r, q % r]);
        return Ok(v);
    }
    let worst = results.iter().map(|(w, _)| *w).max().unwrap_or(0);
    Ok(Verdict::holds(
        Basis::Horizon,
        Witness::new(Vec::new(), vec![worst], Vec::new()),
        format!("every two pairs of ε-balls meet at a common time by n = {worst}"),
    ))
}

pub fn check_topological_mixing(sys: &SystemView, cfg: &CheckConfig) -> Result<Verdict> {
    let grid = grid_points(sys, cfg)?;
    let orbits = transitivity_orbits(sys, cfg, &grid)?;
    if sys.family().steps_isometric() {
        let gap = orbits[0].at(0).hausdorff_to_space(&grid);
        if gap > cfg.eps {
            return Ok(Verdict::refuted(
                Basis::Symbolic,
                Witness::new(vec![grid[0].clone()], Vec::new(), vec![gap]),
                format!("isometric images of an ε-ball stay {gap:.4} from the space in the Hausdorff metric"),
            ));
        }
    }
    let table = hit_table(sys, cfg, &grid, &orbits);
    if let Some(v) = table.refutation {
        return Ok(v);
    }
    for (i, o) in orbits.iter().enumerate() {
        if o.forecast() && o.all_exact() {
            let stuck = o.cycle_turn().is_some_and(|mut t| t.any(|n| o.at(n).hausdorff_to_space(&grid) >= cfg.eps));
            if stuck {
                return Ok(Verdict::refuted(
                    Basis::Symbolic,
                    Witness::new(vec![grid[i].clone()], vec![i], Vec::new()),
                    "the exact images of U cycle without approaching the space",
                ));
            }
        }
    }
    let half = cfg.horizon / 2;
    let mut k_hits = 1;
    let mut k_cloud = 1;
    let mut open = None;
    for (i, o) in orbits.iter().enumerate() {
        let last_far = (1..=cfg.horizon).rev().find(|&n| o.at(n).hausdorff_to_space(&grid) >= cfg.eps);
        let kc = last_far.map_or(1, |n| n + 1);
        k_cloud = k_cloud.max(kc);
        if kc > half {
            open.get_or_insert((i, None));
        }
        for (j, c) in grid.iter().enumerate() {
            let last_miss = (1..=cfg.horizon).rev().find(|&n| !o.at(n).hits(c, cfg.eps));
            let kh = last_miss.map_or(1, |n| n + 1);
            k_hits = k_hits.max(kh);
            if kh > half {
                open.get_or_insert((i, Some(j)));
            }
        }
    }
    Ok(match open {
        None => Verdict::holds(
            Basis::Horizon,
            Witness::new(Vec::new(), vec![k_hits, k_cloud], Vec::new()),
            format!("all ball pairs meet at every n ≥ {k_hits} and images are ε-dense from n = {k_cloud}"),
        ),
        Some((i, j)) => {
            let mut v = Verdict::inconclusive(cfg.horizon, match j {
                Some(_) => "some ball pair keeps missing in the second half of the horizon",
                None => "some ball image is not ε-dense throughout the second half of the horizon",
            });
            v.witness.indices.push(i);
            v.witness.indices.extend(j);
            v
        }
    })
}

/// Centres of the ε-cells an orbit must visit to count as ε-dense.
fn cover_centers(sys: &SystemView, eps: f64) -> Vec<Point> {
    let space = sys.space();
    match space.kind {
        SpaceKind::Circle => {
            let m = (std::f64::consts::TAU / eps).ceil() as usize;
            (0..m).map(|i| Point::circle(std::f64::consts::TAU * i as f64 / m as f64)).collect()
        }
        SpaceKind::UnitInterval => {
            let m = (1.0 / eps).ceil() as usize + 1;
            (0..m).map(|i| Point::Interval(i as f64 / (m - 1) as f64)).collect()
        }
        SpaceKind::BinarySeq => {
            let len = space.word_len();
            let p = shared_prefix_for_radius(eps).min(len).min(MAX_GRID_WORD_BITS);
            (0..1usize << p)
                .map(|code| {
                    let bits = (0..len).map(|j| if j < p { ((code >> (p - 1 - j)) & 1) as u8 } else { 0 }).collect();
                    Point::Word(BinaryWord::new(bits).expect("nonempty binary word"))
                })
                .collect()
        }
    }
}

pub fn check_minimality(sys: &SystemView, cfg: &CheckConfig) -> Result<Verdict> {
    let grid = grid_points(sys, cfg)?;
    let centers = cover_centers(sys, cfg.eps);
    if let Some(rho) = confinement(sys) {
        for (i, x) in grid.iter().enumerate() {
            if let Some(c) = centers.iter().find(|c| raw_distance(x, c) >= rho + cfg.eps) {
                return Ok(Verdict::refuted(
                    Basis::Symbolic,
                    Witness::new(vec![x.clone(), c.clone()], vec![i], vec![rho]),
                    format!("the orbit stays within {rho:.6} of its start and never nears the far cell"),
                ));
            }
        }
    }
    enum Cover {
        Done(usize),
        Missed,
        Never(usize, usize),
    }
    let results = grid
        .par_iter()
        .map(|x| -> Result<Cover> {
            let o = RegionOrbit::compute(sys, Region::Point(x.clone()), cfg.horizon, cfg.ball_count)?;
            let mut first = vec![None; centers.len()];
            let mut left = centers.len();
            for n in std::iter::once(0).chain(o.distinct_range()) {
                let Region::Point(p) = o.at(n) else { unreachable!("point orbits stay points") };
                for (c, slot) in centers.iter().zip(first.iter_mut()) {
                    if slot.is_none() && raw_distance(p, c) < cfg.eps {
                        *slot = Some(n);
                        left -= 1;
                    }
                }
                if left == 0 {
                    return Ok(Cover::Done(n));
                }
            }
            Ok(if o.forecast() { Cover::Never(left, centers.len()) } else { Cover::Missed })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut worst = 0;
    let mut missing = Vec::new();
    for (i, r) in results.iter().enumerate() {
        match r {
            Cover::Never(left, total) => {
                return Ok(Verdict::refuted(
                    Basis::Witness,
                    Witness::new(vec![grid[i].clone()], vec![i], vec![*left as f64]),
                    format!("the orbit is eventually periodic and misses {left} of {total} ε-cells forever"),
                ))
            }
            Cover::Done(n) => worst = worst.max(*n),
            Cover::Missed => missing.push(i),
        }
    }
    if missing.is_empty() {
        return Ok(Verdict::holds(
            Basis::Horizon,
            Witness::new(Vec::new(), vec![worst], Vec::new()),
            format!("every sampled orbit visits all {} ε-cells by n = {worst}", centers.len()),
        ));
    }
    let mut v = Verdict::inconclusive(cfg.horizon, format!("{} sampled orbits are not ε-dense by the horizon", missing.len()));
    v.witness.indices.extend(missing);
    Ok(v)
}
