//! Deviation bounds between `ω` and `f^k`, and the collective-convergence profile.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{isometry_shrinking_check, MapFamily};
use crate::orbit::{limit_iterate, omega, omega_window};
use crate::space::{raw_distance, sample_grid, sup_metric, Point};

/// Grid used for `D(f_i, f)` when no closed form exists.
pub const LEDGER_GRID: usize = 64;

/// `D(f_i, f)` for `i = 1..=N` with running sums.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundLedger {
    pub label: String,
    /// `terms[i-1] = D(f_i, f)`.
    pub terms: Vec<f64>,
    pub exact: Vec<bool>,
    /// `prefix[k] = Σ_{i≤k} D(f_i, f)`, `prefix[0] = 0`.
    pub prefix: Vec<f64>,
}

impl BoundLedger {
    pub fn build(fam: &MapFamily, len: usize, grid: usize) -> Result<Self> {
        let ests = (1..=len)
            .into_par_iter()
            .map(|n| sup_metric(&fam.space, &fam.step(n), &fam.limit, grid))
            .collect::<Result<Vec<_>>>()?;
        let terms: Vec<f64> = ests.iter().map(|e| e.value).collect();
        let exact = ests.iter().map(|e| e.exact).collect();
        let mut prefix = Vec::with_capacity(len + 1);
        prefix.push(0.0);
        for t in &terms {
            prefix.push(prefix[prefix.len() - 1] + t);
        }
        Ok(BoundLedger { label: fam.label.clone(), terms, exact, prefix })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Σ_{i=n+1}^{n+k} D(f_i, f)`.
    pub fn window_sum(&self, n: usize, k: usize) -> f64 {
        self.terms[n..n + k].iter().sum()
    }

    fn window_exact(&self, n: usize, k: usize) -> bool {
        self.exact[n..n + k].iter().all(|e| *e)
    }

    fn require(&self, upto: usize) -> Result<()> {
        if upto > self.len() {
            return Err(Error::Config(format!("ledger holds {} terms, {upto} needed", self.len())));
        }
        Ok(())
    }

    /// `d(ω_{n+k}(x), f^k(ω_n(x)))` against `Σ_{i=1}^k D(f_{n+i}, f)`.
    pub fn shifted_deviation(&self, fam: &MapFamily, x: &Point, n: usize, k: usize, tol: f64) -> Result<DeviationRecord> {
        if k == 0 {
            return Err(Error::Config("deviation window length must be ≥ 1".into()));
        }
        self.require(n + k)?;
        let base = omega(fam, x, n)?;
        let lhs = omega_window(fam, &base, n, k)?;
        let rhs = limit_iterate(fam, &base, k)?;
        let measured = raw_distance(&lhs, &rhs);
        let bound = self.window_sum(n, k);
        Ok(DeviationRecord {
            x: x.clone(),
            n,
            k,
            measured,
            bound,
            holds: measured <= bound + tol,
            approximate_bound: !self.window_exact(n, k),
        })
    }

    pub fn deviation(&self, fam: &MapFamily, x: &Point, k: usize, tol: f64) -> Result<DeviationRecord> {
        self.shifted_deviation(fam, x, 0, k, tol)
    }
}

/// One comparison of a measured deviation with its bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeviationRecord {
    pub x: Point,
    pub n: usize,
    pub k: usize,
    pub measured: f64,
    pub bound: f64,
    pub holds: bool,
    /// Set when some term of the bound is a grid estimate, hence a lower bound.
    pub approximate_bound: bool,
}

/// `d(ω_k(x), f^k(x))` against `Σ_{i=1}^k D(f_i, f)`.
pub fn deviation_check(fam: &MapFamily, x: &Point, k: usize, tol: f64) -> Result<DeviationRecord> {
    BoundLedger::build(fam, k, LEDGER_GRID)?.deviation(fam, x, k, tol)
}

/// `d(ω_{n+k}(x), f^k(ω_n(x)))` against `Σ_{i=1}^k D(f_{n+i}, f)`.
pub fn shifted_deviation_check(fam: &MapFamily, x: &Point, n: usize, k: usize, tol: f64) -> Result<DeviationRecord> {
    BoundLedger::build(fam, n + k, LEDGER_GRID)?.shifted_deviation(fam, x, n, k, tol)
}

/// `E(n,k)`, the grid estimate of `D(ω^n_{n+k}, f^k)`, for `0 ≤ n ≤ n_max`, `1 ≤ k ≤ k_max`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CollectiveProfile {
    pub n_max: usize,
    pub k_max: usize,
    /// `e[n][k-1] = E(n,k)`.
    pub e: Vec<Vec<f64>>,
    /// `bound[n][k-1] = Σ_{i=1}^k D(f_{n+i}, f)`.
    pub bound: Vec<Vec<f64>>,
    /// `T(n) = max_k E(n,k)`.
    pub tail_sup: Vec<f64>,
    pub collective_likely: bool,
    pub tol: f64,
}

pub fn collective_convergence_profile(
    fam: &MapFamily,
    n_max: usize,
    k_max: usize,
    grid: usize,
    eps: f64,
    tol: f64,
) -> Result<CollectiveProfile> {
    if n_max == 0 || k_max == 0 {
        return Err(Error::Config("profile needs n-max ≥ 1 and k-max ≥ 1".into()));
    }
    let ledger = BoundLedger::build(fam, n_max + k_max, grid)?;
    let cloud = sample_grid(&fam.space, grid)?;
    let per_point: Vec<Vec<f64>> = cloud
        .points()
        .par_iter()
        .map(|x| {
            let limit: Vec<Point> = {
                let mut v = Vec::with_capacity(k_max);
                let mut p = x.clone();
                for _ in 0..k_max {
                    p = fam.limit.apply(&p)?;
                    v.push(p.clone());
                }
                v
            };
            let mut row = Vec::with_capacity((n_max + 1) * k_max);
            for n in 0..=n_max {
                let mut p = x.clone();
                for k in 1..=k_max {
                    p = fam.apply_step(n + k, &p)?;
                    row.push(raw_distance(&p, &limit[k - 1]));
                }
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    let mut e = vec![vec![0.0f64; k_max]; n_max + 1];
    for row in &per_point {
        for (idx, d) in row.iter().enumerate() {
            let cell = &mut e[idx / k_max][idx % k_max];
            *cell = cell.max(*d);
        }
    }
    let bound: Vec<Vec<f64>> = (0..=n_max)
        .map(|n| {
            let mut s = 0.0;
            (0..k_max)
                .map(|j| {
                    s += ledger.terms[n + j];
                    s
                })
                .collect()
        })
        .collect();
    let tail_sup: Vec<f64> = e.iter().map(|row| row.iter().fold(0.0f64, |a, b| a.max(*b))).collect();
    let half = n_max / 2;
    let non_increasing = tail_sup[half..].windows(2).all(|w| w[1] <= w[0] + tol);
    let collective_likely = tail_sup[n_max] < eps && non_increasing;
    Ok(CollectiveProfile { n_max, k_max, e, bound, tail_sup, collective_likely, tol })
}

impl CollectiveProfile {
    pub fn cell(&self, n: usize, k: usize) -> f64 {
        self.e[n][k - 1]
    }

    /// Rows `n,k,E,bound,holds`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,k,E,bound,holds\n");
        for n in 0..=self.n_max {
            for k in 1..=self.k_max {
                let (e, b) = (self.e[n][k - 1], self.bound[n][k - 1]);
                let _ = writeln!(out, "{n},{k},{e:.12e},{b:.12e},{}", e <= b + self.tol);
            }
        }
        out
    }
}

/// Grid estimate of `D(ω^n_{n+k}, f^k)` against `Σ_{i=1}^k D(f_{n+i}, f)`,
/// valid when the limit is an isometry or shrinking.
pub fn isometry_bound_check(fam: &MapFamily, grid: usize, n: usize, k: usize, tol: f64) -> Result<DeviationRecord> {
    let (iso, shrink) = isometry_shrinking_check(&fam.space, &fam.limit, grid, tol)?;
    if !iso && !shrink {
        return Err(Error::HypothesisNotMet("the limit map is neither an isometry nor shrinking".into()));
    }
    if k == 0 {
        return Err(Error::Config("deviation window length must be ≥ 1".into()));
    }
    let ledger = BoundLedger::build(fam, n + k, grid)?;
    let cloud = sample_grid(&fam.space, grid)?;
    let gaps = cloud
        .points()
        .par_iter()
        .map(|x| Ok(raw_distance(&omega_window(fam, x, n, k)?, &limit_iterate(fam, x, k)?)))
        .collect::<Result<Vec<f64>>>()?;
    let (arg, measured) = gaps
        .iter()
        .enumerate()
        .fold((0, 0.0f64), |(ai, av), (i, g)| if *g > av { (i, *g) } else { (ai, av) });
    let bound = ledger.window_sum(n, k);
    Ok(DeviationRecord {
        x: cloud.points()[arg].clone(),
        n,
        k,
        measured,
        bound,
        holds: measured <= bound + tol,
        approximate_bound: !ledger.window_exact(n, k),
    })
}
