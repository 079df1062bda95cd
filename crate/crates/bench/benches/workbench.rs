use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use minsurf::catalog::{self, catenoid_plateau};
use minsurf::graph::{solve_minimal_graph, SolverOptions};
use minsurf::mesh::{sample_mesh, Patch};
use minsurf::numeric::grid::square_grid;
use minsurf::numeric::quad::QuadOptions;
use minsurf::surface::Domain;
use minsurf::weierstrass::{integrate_primitive, periods, total_curvature_spherical, PrimitiveKind};
use minsurf::{Complex64, ComplexExpr, ComplexExprVec, Loop, Region, SurfaceMap};

fn solver(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_minimal_graph");
    group.sample_size(10);
    for n in [17, 33, 65] {
        let data = square_grid(1.2, 2.0, 1.2, n).with_values(|x, y| x.hypot(y).acosh());
        group.bench_with_input(BenchmarkId::from_parameter(n), &data, |b, data| {
            b.iter(|| solve_minimal_graph(black_box(data), &SolverOptions::default()).unwrap())
        });
    }
    group.finish();
}

fn expressions(c: &mut Criterion) {
    let f = ComplexExprVec::parse(
        &[
            "(i/2)*(1/z^2 - 1/z - 1/(3*z^3)) - i*(z + 1)^3/6",
            "i*(z + 1/z)",
            "exp(i*z)*sin(z)",
        ],
        &[Complex64::new(0.0, 0.0)],
    )
    .unwrap();
    let z = Complex64::new(0.7, -0.4);
    c.bench_function("expr_eval", |b| b.iter(|| f.eval(black_box(z)).unwrap()));
    c.bench_function("expr_differentiate", |b| b.iter(|| black_box(&f).differentiate()));
}

fn weierstrass(c: &mut Criterion) {
    let cat = ComplexExprVec::parse(
        &["(0 - 1/z)*(1/2)*(1/z - z)", "(0 - 1/z)*(i/2)*(1/z + z)", "0 - 1/z"],
        &[Complex64::new(0.0, 0.0)],
    )
    .unwrap();
    let unit = [Loop::circle(Complex64::new(0.0, 0.0), 1.0)];
    c.bench_function("periods_catenoid", |b| {
        b.iter(|| periods(black_box(&cat), &unit, &QuadOptions::default()).unwrap())
    });

    let enn = ComplexExprVec::parse(&["1 - z^2", "i*(1 + z^2)", "2*z"], &[]).unwrap();
    let zero = vec![Complex64::new(0.0, 0.0); 3];
    let s = integrate_primitive(&enn, &Domain::Plane, zero[0], &zero, PrimitiveKind::RealPart)
        .unwrap()
        .into_surface();
    c.bench_function("integrated_enneper_position", |b| {
        b.iter(|| s.position(black_box(1.3), black_box(-0.8)).unwrap())
    });

    let g = ComplexExpr::parse("z").unwrap();
    let mut group = c.benchmark_group("total_curvature_spherical");
    group.sample_size(10);
    group.bench_function("catenoid_annulus", |b| {
        b.iter(|| total_curvature_spherical(&g, &Region::annulus(0.01, 100.0), &QuadOptions::with_tol(1e-10)).unwrap())
    });
    group.finish();
}

fn catalog_and_mesh(c: &mut Criterion) {
    c.bench_function("catenoid_plateau", |b| {
        b.iter(|| catenoid_plateau(black_box(2.0)).unwrap())
    });
    let e = catalog::enneper();
    let patch = Patch::Rectangle {
        u: [-2.0, 2.0],
        v: [-2.0, 2.0],
    };
    c.bench_function("mesh_enneper_64", |b| {
        b.iter(|| sample_mesh(&*e.surface, (64, 64), &patch, None).unwrap())
    });
}

criterion_group!(benches, solver, expressions, weierstrass, catalog_and_mesh);
criterion_main!(benches);
