//! Which transfer theorem judges each property, when it applies, and what
//! counts as a contradiction.

use serde::{Deserialize, Serialize};

use super::ComparisonRow;
use crate::checkers::{Outcome, Property, Verdict};
use crate::family::HypothesisProfile;

/// Descriptive key of the theorem a row is judged against.
pub fn theorem_key(p: Property) -> &'static str {
    match p {
        Property::Equicontinuity => "equicontinuity-transfer",
        Property::Sensitivity => "sensitivity-transfer",
        Property::CofiniteSensitivity => "cofinite-sensitivity-transfer",
        Property::Transitivity => "transitivity-transfer",
        Property::WeakMixing => "weak-mixing-transfer",
        Property::TopologicalMixing => "topological-mixing-transfer",
        Property::Minimality => "minimality-transfer",
        Property::PeriodicPoints | Property::DensePeriodicity => "periodic-point-transfer",
        Property::ProximalCellDensity => "proximal-cell-transfer",
        Property::DenseProximalPairs => "proximal-pairs-transfer",
        Property::LiYorkeSensitivity => "li-yorke-sensitivity-transfer",
        Property::LiYorkeCellDensity => "sensitive-proximal-li-yorke",
    }
}

/// Hypotheses read off the profile.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Applicability {
    pub commutes: bool,
    pub summable: bool,
    pub feeble_open: bool,
    pub isometry_or_shrinking: bool,
    pub uniform: bool,
}

impl Applicability {
    pub fn from_profile(p: &HypothesisProfile) -> Self {
        Applicability {
            commutes: p.commutes.is_holds(),
            summable: p.summability.flag.is_summable(),
            feeble_open: p.feeble_open.is_holds(),
            isometry_or_shrinking: p.isometry || p.shrinking,
            uniform: p.uniform_convergence.is_holds(),
        }
    }

    /// Whether every hypothesis of the theorem for `p` holds. Li–Yorke
    /// sensitivity additionally needs proximal cell density, checked by the caller.
    pub fn for_property(&self, p: Property) -> bool {
        let pinned = (self.commutes || self.isometry_or_shrinking) && self.summable;
        let commuting = self.commutes && self.summable;
        match p {
            Property::Equicontinuity | Property::Minimality => pinned,
            Property::Transitivity => pinned && self.feeble_open,
            Property::WeakMixing | Property::Sensitivity | Property::CofiniteSensitivity => commuting && self.feeble_open,
            Property::TopologicalMixing => self.feeble_open && self.uniform,
            Property::ProximalCellDensity | Property::DenseProximalPairs | Property::LiYorkeSensitivity => commuting,
            Property::PeriodicPoints | Property::DensePeriodicity => self.uniform,
            Property::LiYorkeCellDensity => true,
        }
    }

    fn missing(&self, p: Property) -> String {
        let mut out = Vec::new();
        let needs_commute = !matches!(
            p,
            Property::TopologicalMixing | Property::PeriodicPoints | Property::DensePeriodicity
        );
        if needs_commute && !self.commutes {
            out.push(if matches!(p, Property::Equicontinuity | Property::Minimality | Property::Transitivity) {
                "neither commuting steps nor an isometric or shrinking limit"
            } else {
                "steps do not commute with the limit"
            });
        }
        if needs_commute && !self.summable {
            out.push("Σ D(f_n, f) not summable");
        }
        let needs_open = matches!(
            p,
            Property::Transitivity
                | Property::WeakMixing
                | Property::Sensitivity
                | Property::CofiniteSensitivity
                | Property::TopologicalMixing
        );
        if needs_open && !self.feeble_open {
            out.push("feeble openness not established");
        }
        if !needs_commute && !self.uniform {
            out.push("uniform convergence not established");
        }
        out.join("; ")
    }
}

/// Which implications between the two verdicts the theorem asserts.
enum Direction {
    Both,
    LimitToFamily,
    FamilyToLimit,
}

fn direction(p: Property) -> Direction {
    match p {
        Property::Equicontinuity | Property::DenseProximalPairs => Direction::LimitToFamily,
        Property::PeriodicPoints | Property::DensePeriodicity => Direction::FamilyToLimit,
        _ => Direction::Both,
    }
}

fn contradicts(dir: &Direction, fam: Outcome, lim: Outcome) -> bool {
    use Outcome::{Holds, Refuted};
    match dir {
        Direction::Both => matches!((fam, lim), (Holds, Refuted) | (Refuted, Holds)),
        Direction::LimitToFamily => matches!((fam, lim), (Refuted, Holds)),
        Direction::FamilyToLimit => matches!((fam, lim), (Holds, Refuted)),
    }
}

/// Every periodic grid point of the family must be periodic for the limit,
/// with a limit period dividing the family period.
fn periodic_points_transfer(fam: &Verdict, lim: &Verdict) -> Option<String> {
    if !fam.is_holds() {
        return None;
    }
    if !lim.is_holds() {
        return Some("a point periodic for the family is not periodic for the limit".into());
    }
    for (i, pf) in fam.witness.indices.iter().zip(&fam.witness.values) {
        match lim.witness.indices.iter().position(|j| j == i) {
            None => return Some(format!("grid point {i} is periodic for the family only")),
            Some(pos) => {
                let pl = lim.witness.values[pos];
                if (*pf as u64) % (pl as u64) != 0 {
                    return Some(format!("grid point {i}: limit period {pl} does not divide family period {pf}"));
                }
            }
        }
    }
    None
}

fn outcome_of<'a>(pairs: &'a [(Property, Verdict, Verdict)], p: Property) -> Option<&'a (Property, Verdict, Verdict)> {
    pairs.iter().find(|(q, _, _)| *q == p)
}

/// Assemble the rows from the verdict pairs.
pub(crate) fn judge(profile: &HypothesisProfile, pairs: &[(Property, Verdict, Verdict)]) -> Vec<ComparisonRow> {
    let app = Applicability::from_profile(profile);
    pairs
        .iter()
        .map(|(p, vf, vl)| {
            let p = *p;
            let mut applicable = app.for_property(p);
            let mut note = String::new();
            if p == Property::LiYorkeSensitivity {
                let proximal = outcome_of(pairs, Property::ProximalCellDensity);
                if !proximal.is_some_and(|(_, a, b)| a.is_holds() && b.is_holds()) {
                    if applicable {
                        note = "proximal cells not shown dense in both modes".into();
                    }
                    applicable = false;
                }
            }
            let mut consistent = true;
            if p == Property::LiYorkeCellDensity {
                let sensitive = outcome_of(pairs, Property::Sensitivity);
                let proximal = outcome_of(pairs, Property::ProximalCellDensity);
                applicable = sensitive.is_some() && proximal.is_some();
                if let (Some(s), Some(x)) = (sensitive, proximal) {
                    let bad = |s: &Verdict, x: &Verdict, l: &Verdict| s.is_holds() && x.is_holds() && l.is_refuted();
                    if bad(&s.1, &x.1, vf) || bad(&s.2, &x.2, vl) {
                        consistent = false;
                        note = "sensitive with dense proximal cells, yet Li–Yorke cells refuted".into();
                    } else {
                        note = "judged within each mode against sensitivity and proximal cells".into();
                    }
                } else {
                    note = "needs the sensitivity and proximal-cell rows".into();
                }
            } else if !applicable {
                if note.is_empty() {
                    note = format!("not applicable: {}", app.missing(p));
                }
            } else if p == Property::PeriodicPoints {
                if let Some(why) = periodic_points_transfer(vf, vl) {
                    consistent = false;
                    note = why;
                } else {
                    note = "family-periodic points are limit-periodic; the converse is not asserted".into();
                }
            } else {
                let dir = direction(p);
                if contradicts(&dir, vf.outcome, vl.outcome) {
                    consistent = false;
                    note = "verdicts contradict the theorem".into();
                } else if vf.outcome == Outcome::Inconclusive || vl.outcome == Outcome::Inconclusive {
                    note = "an inconclusive verdict is compatible with either outcome".into();
                } else if vf.outcome != vl.outcome {
                    note = "the theorem is one-directional; no inconsistency".into();
                } else {
                    note = "verdicts agree".into();
                }
            }
            ComparisonRow {
                property: p,
                theorem: theorem_key(p).to_string(),
                verdict_family: vf.clone(),
                verdict_limit: vl.clone(),
                applicable,
                consistent,
                note,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checkers::{Basis, Witness};

    fn v(o: Outcome, idx: Vec<usize>, vals: Vec<f64>) -> Verdict {
        Verdict { outcome: o, basis: Basis::Witness, witness: Witness::new(Vec::new(), idx, vals), narrative: String::new() }
    }

    #[test]
    fn directions() {
        use Outcome::*;
        assert!(contradicts(&Direction::Both, Holds, Refuted));
        assert!(!contradicts(&Direction::Both, Holds, Inconclusive));
        assert!(contradicts(&Direction::LimitToFamily, Refuted, Holds));
        assert!(!contradicts(&Direction::LimitToFamily, Holds, Refuted));
        assert!(!contradicts(&Direction::FamilyToLimit, Refuted, Holds));
    }

    #[test]
    fn periodic_transfer_rules() {
        let f = v(Outcome::Holds, vec![0, 3], vec![2.0, 4.0]);
        let l = v(Outcome::Holds, vec![0, 1, 3], vec![1.0, 1.0, 2.0]);
        assert!(periodic_points_transfer(&f, &l).is_none());
        let l2 = v(Outcome::Holds, vec![0, 3], vec![1.0, 3.0]);
        assert!(periodic_points_transfer(&f, &l2).is_some());
        let l3 = v(Outcome::Holds, vec![0], vec![1.0]);
        assert!(periodic_points_transfer(&f, &l3).is_some());
        assert!(periodic_points_transfer(&v(Outcome::Refuted, vec![], vec![]), &l3).is_none());
    }

    #[test]
    fn keys_are_descriptive() {
        for p in Property::ALL {
            let k = theorem_key(p);
            assert!(k.chars().all(|c| c.is_ascii_lowercase() || c == '-'), "{k}");
        }
    }
}
