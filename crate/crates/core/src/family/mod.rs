//! Map descriptors, indexed families `𝔽 = (f_n)` with their uniform limit,
//! the builtin catalog, and hypothesis profiling.

mod descriptor;
mod hypotheses;

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{wrap_angle, PhaseSpace, Point, SpaceKind};

pub(crate) use descriptor::{pl_image, pl_slopes, rotate};
pub use descriptor::{compose_pl, eval_pl, Interp, MapDescriptor};
pub use hypotheses::{
    commutes_with_limit, feeble_open_check, isometry_shrinking_check, profile_hypotheses,
    summability_estimate, surjectivity_check, HypothesisProfile, ProfileConfig, Summability,
    SummabilityEstimate,
};

/// Word length used by the odometer family when none is given.
pub const DEFAULT_WORD_LEN: usize = 24;

/// `α = 2π·(√5−1)/2`, the irrational rotation used for the alternating family.
pub fn golden_alpha() -> f64 {
    TAU * (5f64.sqrt() - 1.0) / 2.0
}

/// The five example families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BuiltinFamily {
    AlternatingRotation,
    InverseSquareRotation,
    PerturbedDoubling,
    PlateauTent,
    OdometerDeletion,
}

impl BuiltinFamily {
    pub const ALL: [BuiltinFamily; 5] = [
        BuiltinFamily::AlternatingRotation,
        BuiltinFamily::InverseSquareRotation,
        BuiltinFamily::PerturbedDoubling,
        BuiltinFamily::PlateauTent,
        BuiltinFamily::OdometerDeletion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BuiltinFamily::AlternatingRotation => "alternating-rotation",
            BuiltinFamily::InverseSquareRotation => "inverse-square-rotation",
            BuiltinFamily::PerturbedDoubling => "perturbed-doubling",
            BuiltinFamily::PlateauTent => "plateau-tent",
            BuiltinFamily::OdometerDeletion => "odometer-deletion",
        }
    }

    pub fn space_kind(self) -> SpaceKind {
        match self {
            BuiltinFamily::PlateauTent => SpaceKind::UnitInterval,
            BuiltinFamily::OdometerDeletion => SpaceKind::BinarySeq,
            _ => SpaceKind::Circle,
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            BuiltinFamily::AlternatingRotation => {
                "θ+α+2/(n+1) for odd n, θ+α−2/n for even n; limit θ+α"
            }
            BuiltinFamily::InverseSquareRotation => "θ+1/n²; limit the identity",
            BuiltinFamily::PerturbedDoubling => "2θ+1/n; limit 2θ",
            BuiltinFamily::PlateauTent => "g, f, f, … with g the plateau map and f the tent map",
            BuiltinFamily::OdometerDeletion => "odometer after deleting the n-th coordinate; limit the odometer",
        }
    }
}

impl fmt::Display for BuiltinFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BuiltinFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BuiltinFamily::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| Error::UnknownScenario(s.to_string()))
    }
}

/// Optional parameters of a builtin family.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuiltinParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word_len: Option<usize>,
}

/// How `n ↦ f_n` is produced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Generator {
    Builtin { family: BuiltinFamily, alpha: f64 },
    /// `f_n = maps[n-1]`, and `f_n = limit` once the table runs out.
    Table { maps: Vec<MapDescriptor> },
}

/// A non-autonomous system `(X, 𝔽)` together with its limit map.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapFamily {
    pub label: String,
    pub space: PhaseSpace,
    pub generator: Generator,
    pub limit: MapDescriptor,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

fn alternating_amount(alpha: f64, n: usize) -> f64 {
    if n % 2 == 1 {
        alpha + 2.0 / (n as f64 + 1.0)
    } else {
        alpha - 2.0 / n as f64
    }
}

fn inverse_square_amount(n: usize) -> f64 {
    let n = n as f64;
    1.0 / (n * n)
}

impl MapFamily {
    /// The autonomous system `f_n = limit` for every `n`.
    pub fn autonomous(space: PhaseSpace, limit: MapDescriptor, label: impl Into<String>) -> Result<Self> {
        let fam = MapFamily {
            label: label.into(),
            space,
            generator: Generator::Table { maps: Vec::new() },
            limit,
            notes: Vec::new(),
        };
        fam.validate()?;
        Ok(fam)
    }

    /// A family given by a finite table followed by the limit map.
    pub fn from_table(
        space: PhaseSpace,
        maps: Vec<MapDescriptor>,
        limit: MapDescriptor,
        label: impl Into<String>,
    ) -> Result<Self> {
        let fam = MapFamily { label: label.into(), space, generator: Generator::Table { maps }, limit, notes: Vec::new() };
        fam.validate()?;
        Ok(fam)
    }

    pub fn validate(&self) -> Result<()> {
        self.space.validate()?;
        let check = |m: &MapDescriptor| -> Result<()> {
            m.validate()?;
            if m.space_kind() != self.space.kind {
                return Err(Error::SpaceMismatch { expected: self.space.kind, found: m.space_kind() });
            }
            Ok(())
        };
        check(&self.limit)?;
        match &self.generator {
            Generator::Table { maps } => maps.iter().try_for_each(check),
            Generator::Builtin { family, alpha } => {
                if family.space_kind() != self.space.kind {
                    return Err(Error::SpaceMismatch { expected: family.space_kind(), found: self.space.kind });
                }
                if !alpha.is_finite() {
                    return Err(Error::Config("alpha must be finite".into()));
                }
                Ok(())
            }
        }
    }

    /// The descriptor of `f_n`, `n ≥ 1`.
    pub fn step(&self, n: usize) -> MapDescriptor {
        debug_assert!(n >= 1, "steps are indexed from 1");
        match &self.generator {
            Generator::Table { maps } => maps.get(n.wrapping_sub(1)).unwrap_or(&self.limit).clone(),
            Generator::Builtin { family, alpha } => match family {
                BuiltinFamily::AlternatingRotation => MapDescriptor::rotation(alternating_amount(*alpha, n)),
                BuiltinFamily::InverseSquareRotation => MapDescriptor::rotation(inverse_square_amount(n)),
                BuiltinFamily::PerturbedDoubling => {
                    MapDescriptor::AffineCircle { slope: 2, offset: 1.0 / n as f64 }
                }
                BuiltinFamily::PlateauTent if n == 1 => MapDescriptor::plateau_tent(),
                BuiltinFamily::PlateauTent => MapDescriptor::tent(),
                BuiltinFamily::OdometerDeletion => MapDescriptor::Compose {
                    outer: Box::new(MapDescriptor::OdometerAdd),
                    inner: Box::new(MapDescriptor::Delete { index: n }),
                },
            },
        }
    }

    /// `f_n(x)`; bit-identical to `self.step(n).apply(x)`.
    pub fn apply_step(&self, n: usize, x: &Point) -> Result<Point> {
        match (&self.generator, x) {
            (Generator::Builtin { family: BuiltinFamily::AlternatingRotation, alpha }, Point::Circle(t)) => {
                Ok(rotate(*t, alternating_amount(*alpha, n)))
            }
            (Generator::Builtin { family: BuiltinFamily::InverseSquareRotation, .. }, Point::Circle(t)) => {
                Ok(rotate(*t, inverse_square_amount(n)))
            }
            (Generator::Builtin { family: BuiltinFamily::PerturbedDoubling, .. }, Point::Circle(t)) => {
                Ok(Point::Circle(wrap_angle(2.0 * t + 1.0 / n as f64)))
            }
            (Generator::Table { maps }, _) => maps.get(n.wrapping_sub(1)).unwrap_or(&self.limit).apply(x),
            _ => self.step(n).apply(x),
        }
    }

    /// Least `a` with `f_n = f` for every `n ≥ a`, when known from the generator.
    pub fn autonomous_from(&self) -> Option<usize> {
        match &self.generator {
            Generator::Table { maps } => {
                // trailing entries equal to the limit change nothing
                let effective = maps.iter().rposition(|m| *m != self.limit).map_or(0, |i| i + 1);
                Some(effective + 1)
            }
            Generator::Builtin { family: BuiltinFamily::PlateauTent, .. } => Some(2),
            Generator::Builtin { .. } => None,
        }
    }

    pub fn is_autonomous(&self) -> bool {
        self.autonomous_from() == Some(1)
    }

    /// Whether every `f_n` and the limit are isometries, decided from the descriptors.
    pub fn steps_isometric(&self) -> bool {
        if self.limit.is_isometry_symbolic() != Some(true) {
            return false;
        }
        match &self.generator {
            Generator::Builtin { family, .. } => matches!(
                family,
                BuiltinFamily::AlternatingRotation | BuiltinFamily::InverseSquareRotation
            ),
            Generator::Table { maps } => maps.iter().all(|m| m.is_isometry_symbolic() == Some(true)),
        }
    }

    /// `D(f_n, f)` when a closed form exists.
    pub fn exact_term(&self, n: usize) -> Option<f64> {
        let est = crate::space::sup_metric(&self.space, &self.step(n), &self.limit, 2).ok()?;
        est.exact.then_some(est.value)
    }

    /// `Σ_{n≥1} D(f_n, f)` when known in closed form.
    pub fn series_limit(&self) -> Option<f64> {
        match &self.generator {
            Generator::Builtin { family: BuiltinFamily::InverseSquareRotation, .. } => Some(PI * PI / 6.0),
            _ => {
                let a = self.autonomous_from()?;
                (1..a).map(|n| self.exact_term(n)).sum()
            }
        }
    }

    /// `Σ_{i>n} D(f_i, f)` when known in closed form.
    pub fn tail_sum(&self, n: usize) -> Option<f64> {
        if let Some(a) = self.autonomous_from() {
            return (n + 1..a).map(|i| self.exact_term(i)).sum();
        }
        let total = self.series_limit()?;
        let head: Option<f64> = (1..=n).map(|i| self.exact_term(i)).sum();
        Some((total - head?).max(0.0))
    }

    /// The autonomous limit system `(X, f)`.
    pub fn limit_system(&self) -> MapFamily {
        MapFamily {
            label: format!("{} (limit)", self.label),
            space: self.space.clone(),
            generator: Generator::Table { maps: Vec::new() },
            limit: self.limit.clone(),
            notes: Vec::new(),
        }
    }
}

/// Denominator bound for the rationality warning on `α/2π`.
const RATIONAL_Q_MAX: u32 = 1000;

fn near_rational(t: f64) -> Option<(i64, u32)> {
    (1..=RATIONAL_Q_MAX).find_map(|q| {
        let p = (t * q as f64).round();
        ((t * q as f64 - p).abs() < 1e-12 * q as f64).then_some((p as i64, q))
    })
}

/// Build one of the five example families.
pub fn make_builtin_family(name: &str, params: &BuiltinParams) -> Result<MapFamily> {
    let family: BuiltinFamily = name.parse()?;
    let mut notes = Vec::new();
    let alpha = match family {
        BuiltinFamily::AlternatingRotation => {
            let alpha = params.alpha.unwrap_or_else(golden_alpha);
            if let Some((p, q)) = near_rational(alpha / TAU) {
                notes.push(format!("warning: α/2π ≈ {p}/{q} is rational; the limit rotation is periodic"));
            }
            alpha
        }
        _ => 0.0,
    };
    let space = match family.space_kind() {
        SpaceKind::Circle => PhaseSpace::circle(),
        SpaceKind::UnitInterval => PhaseSpace::unit_interval(),
        SpaceKind::BinarySeq => PhaseSpace::binary_seq(params.word_len.unwrap_or(DEFAULT_WORD_LEN))?,
    };
    let limit = match family {
        BuiltinFamily::AlternatingRotation => MapDescriptor::rotation(alpha),
        BuiltinFamily::InverseSquareRotation => MapDescriptor::rotation(0.0),
        BuiltinFamily::PerturbedDoubling => MapDescriptor::AffineCircle { slope: 2, offset: 0.0 },
        BuiltinFamily::PlateauTent => MapDescriptor::tent(),
        BuiltinFamily::OdometerDeletion => MapDescriptor::OdometerAdd,
    };
    let fam = MapFamily {
        label: family.name().to_string(),
        space,
        generator: Generator::Builtin { family, alpha },
        limit,
        notes,
    };
    fam.validate()?;
    Ok(fam)
}

/// Family section of a scenario document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FamilyConfig {
    Builtin {
        builtin: String,
        #[serde(default)]
        params: BuiltinParams,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    Table {
        table: Vec<MapDescriptor>,
        limit: MapDescriptor,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
}

impl FamilyConfig {
    /// Build the family on `space`; a builtin must live on a space of the same kind.
    pub fn build(&self, space: &PhaseSpace) -> Result<MapFamily> {
        match self {
            FamilyConfig::Builtin { builtin, params, label } => {
                let mut params = params.clone();
                if space.kind == SpaceKind::BinarySeq && params.word_len.is_none() {
                    params.word_len = space.word_len;
                }
                let mut fam = make_builtin_family(builtin, &params)?;
                if fam.space.kind != space.kind {
                    return Err(Error::SpaceMismatch { expected: fam.space.kind, found: space.kind });
                }
                if let Some(l) = label {
                    fam.label = l.clone();
                }
                Ok(fam)
            }
            FamilyConfig::Table { table, limit, label } => MapFamily::from_table(
                space.clone(),
                table.clone(),
                limit.clone(),
                label.clone().unwrap_or_else(|| "custom".to_string()),
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(name: &str) -> MapFamily {
        make_builtin_family(name, &BuiltinParams::default()).unwrap()
    }

    #[test]
    fn catalog_steps() {
        let a = fam("alternating-rotation");
        let alpha = golden_alpha();
        assert_eq!(a.step(1), MapDescriptor::rotation(alpha + 1.0));
        assert_eq!(a.step(2), MapDescriptor::rotation(alpha - 1.0));
        assert_eq!(fam("inverse-square-rotation").step(2), MapDescriptor::rotation(0.25));
        assert_eq!(fam("plateau-tent").step(5), MapDescriptor::tent());
        assert_eq!(fam("plateau-tent").step(1), MapDescriptor::plateau_tent());
        assert!(make_builtin_family("logistic", &BuiltinParams::default()).is_err());
    }

    #[test]
    fn fast_path_matches_descriptor() {
        for f in BuiltinFamily::ALL {
            let f = fam(f.name());
            let x = match f.space.kind {
                SpaceKind::Circle => Point::circle(1.2345),
                SpaceKind::UnitInterval => Point::Interval(0.3),
                SpaceKind::BinarySeq => Point::word("011010011010011010011010").unwrap(),
            };
            for n in 1..30 {
                assert_eq!(f.apply_step(n, &x).unwrap(), f.step(n).apply(&x).unwrap(), "{} n={n}", f.label);
            }
        }
    }

    #[test]
    fn rational_alpha_is_flagged() {
        let f = make_builtin_family("alternating-rotation", &BuiltinParams { alpha: Some(0.0), word_len: None }).unwrap();
        assert!(f.notes.iter().any(|n| n.contains("rational")));
        assert!(fam("alternating-rotation").notes.is_empty());
    }

    #[test]
    fn closed_form_series() {
        assert_eq!(fam("plateau-tent").series_limit(), Some(1.0));
        assert_eq!(fam("plateau-tent").tail_sum(1), Some(0.0));
        let s = fam("inverse-square-rotation");
        let tail = s.tail_sum(50).unwrap();
        assert!((tail - 0.019801).abs() < 1e-5);
        assert_eq!(fam("perturbed-doubling").series_limit(), None);
    }

    #[test]
    fn autonomy() {
        let t = MapFamily::autonomous(PhaseSpace::unit_interval(), MapDescriptor::tent(), "tent").unwrap();
        assert!(t.is_autonomous());
        assert_eq!(t.limit_system().step(7), MapDescriptor::tent());
        assert_eq!(fam("plateau-tent").autonomous_from(), Some(2));
        assert!(fam("alternating-rotation").steps_isometric());
        assert!(!fam("odometer-deletion").steps_isometric());
    }

    #[test]
    fn config_documents() {
        let c: FamilyConfig = serde_json::from_str(r#"{"builtin":"odometer-deletion"}"#).unwrap();
        let f = c.build(&PhaseSpace::binary_seq(16).unwrap()).unwrap();
        assert_eq!(f.space.word_len, Some(16));
        assert!(c.build(&PhaseSpace::circle()).is_err());
        let c: FamilyConfig = serde_json::from_str(
            r#"{"table":[{"map":"piecewise-linear","breakpoints":[[0,0],[1,0.5]]}],
                "limit":{"map":"piecewise-linear","breakpoints":[[0,0],[0.5,1],[1,0]]}}"#,
        )
        .unwrap();
        let f = c.build(&PhaseSpace::unit_interval()).unwrap();
        assert_eq!(f.autonomous_from(), Some(2));
    }
}
