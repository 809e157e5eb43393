use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use uniconv::bounds::BoundLedger;
use uniconv::checkers::run_property;
use uniconv::family::{make_builtin_family, BuiltinParams};
use uniconv::orbit::trajectory;
use uniconv::report;
use uniconv::{Mode, Point, Property, SystemView};

fn orbits(c: &mut Criterion) {
    let fam = make_builtin_family("perturbed-doubling", &BuiltinParams::default()).unwrap();
    let x = Point::circle(0.3);
    c.bench_function("trajectory/perturbed-doubling/2000", |b| {
        b.iter(|| trajectory(&fam, black_box(&x), 2000).unwrap())
    });
    let fam = make_builtin_family("inverse-square-rotation", &BuiltinParams::default()).unwrap();
    c.bench_function("ledger/inverse-square-rotation/1000", |b| {
        b.iter(|| BoundLedger::build(black_box(&fam), 1000, 16).unwrap())
    });
}

fn checkers(c: &mut Criterion) {
    let spec = report::scenario("plateau-tent").unwrap();
    let fam = spec.validate().unwrap();
    for property in [Property::Sensitivity, Property::Transitivity, Property::DenseProximalPairs] {
        let sys = SystemView::new(fam.clone(), Mode::NonAutonomous);
        c.bench_function(&format!("check/plateau-tent/{}", property.name()), |b| {
            b.iter(|| run_property(&sys, &spec.check, property).unwrap())
        });
    }
}

fn reproduce(c: &mut Criterion) {
    let mut g = c.benchmark_group("reproduce");
    g.sample_size(10);
    g.bench_function("perturbed-doubling", |b| b.iter(|| report::reproduce("perturbed-doubling").unwrap()));
    g.finish();
}

criterion_group!(benches, orbits, checkers, reproduce);
criterion_main!(benches);
