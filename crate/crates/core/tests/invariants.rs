use std::f64::consts::{PI, TAU};

use proptest::prelude::*;
use uniconv::bounds::BoundLedger;
use uniconv::family::{compose_pl, eval_pl, make_builtin_family, BuiltinParams};
use uniconv::orbit::{omega, omega_window, trajectory};
use uniconv::space::{circle_distance, distance, word_distance, wrap_angle};
use uniconv::{BinaryWord, MapDescriptor, PhaseSpace, Point};

fn word(bits: &[bool]) -> BinaryWord {
    BinaryWord::new(bits.iter().map(|&b| b as u8).collect()).unwrap()
}

proptest! {
    #[test]
    fn wrapped_angles_stay_in_range(t in -1e6f64..1e6) {
        let w = wrap_angle(t);
        prop_assert!((0.0..TAU).contains(&w));
    }

    #[test]
    fn circle_metric(a in 0.0..TAU, b in 0.0..TAU, c in 0.0..TAU) {
        let d = circle_distance(a, b);
        prop_assert!((0.0..=PI).contains(&d));
        prop_assert_eq!(d, circle_distance(b, a));
        prop_assert!(circle_distance(a, c) <= d + circle_distance(b, c) + 1e-12);
    }

    #[test]
    fn word_metric_is_an_ultrametric(
        a in prop::collection::vec(any::<bool>(), 16),
        b in prop::collection::vec(any::<bool>(), 16),
        c in prop::collection::vec(any::<bool>(), 16),
    ) {
        let (a, b, c) = (word(&a), word(&b), word(&c));
        let d = |x: &BinaryWord, y: &BinaryWord| word_distance(x, y).0;
        prop_assert_eq!(d(&a, &b), d(&b, &a));
        prop_assert!(d(&a, &c) <= d(&a, &b).max(d(&b, &c)));
        prop_assert_eq!(d(&a, &a), 0.0);
    }

    #[test]
    fn orbits_split_at_any_index(theta in 0.0..TAU, n in 0usize..80, k in 0usize..80, which in 0usize..3) {
        let name = ["alternating-rotation", "inverse-square-rotation", "perturbed-doubling"][which];
        let f = make_builtin_family(name, &BuiltinParams::default()).unwrap();
        let x = Point::circle(theta);
        let t = trajectory(&f, &x, n + k).unwrap();
        prop_assert_eq!(t.state(n + k), &omega(&f, &x, n + k).unwrap());
        prop_assert_eq!(t.state(n + k), &omega_window(&f, t.state(n), n, k).unwrap());
    }

    #[test]
    fn window_sums_add(n in 0usize..40, k in 0usize..40, j in 0usize..40) {
        let f = make_builtin_family("inverse-square-rotation", &BuiltinParams::default()).unwrap();
        let l = BoundLedger::build(&f, 130, 16).unwrap();
        let whole = l.window_sum(n, k + j);
        prop_assert!((whole - l.window_sum(n, k) - l.window_sum(n + k, j)).abs() < 1e-12);
    }

    #[test]
    fn composed_pl_matches_pointwise(x in 0.0f64..=1.0) {
        let tent = MapDescriptor::tent().as_piecewise_linear().unwrap();
        let plateau = MapDescriptor::plateau_tent().as_piecewise_linear().unwrap();
        let both = compose_pl(&tent, &plateau);
        prop_assert!((eval_pl(&both, x) - eval_pl(&tent, eval_pl(&plateau, x))).abs() < 1e-12);
    }

    #[test]
    fn interval_distance_is_absolute_difference(a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
        let s = PhaseSpace::unit_interval();
        prop_assert_eq!(distance(&s, &Point::Interval(a), &Point::Interval(b)).unwrap(), (a - b).abs());
    }
}
