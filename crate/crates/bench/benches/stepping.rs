use aderkit::odelab::{integrate, problem_c5, Stepper};
use aderkit::rkview::explicit_tableau;
use aderkit::sd1d::{build_mesh, euler_sod, initial_state, semidiscrete_rhs, step_limited, step_unlimited, Euler};
use aderkit::{ader_step, build_ladder, AdaptiveLadder, NodeKind, Variant};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

fn c5_steps(c: &mut Criterion) {
    let problem = problem_c5();
    let mut g = c.benchmark_group("c5_20_steps");
    for p in [5, 7, 9] {
        for v in [Variant::Classical, Variant::Ader, Variant::AderU, Variant::AderDu] {
            let stepper = Stepper::Fixed(build_ladder(NodeKind::GaussLobatto, v, p).unwrap());
            g.bench_with_input(BenchmarkId::new(v.short_name(), p), &stepper, |b, s| {
                b.iter(|| integrate(black_box(&problem), s, 20).unwrap())
            });
        }
    }
    g.finish();
}

fn single_step(c: &mut Criterion) {
    let problem = problem_c5();
    let rhs = problem.rhs.as_ref();
    let mut g = c.benchmark_group("single_step_p8");
    for kind in NodeKind::ALL {
        for v in [Variant::Ader, Variant::AderDu, Variant::AderL2] {
            let ladder = build_ladder(kind, v, 8).unwrap();
            g.bench_function(format!("{kind}/{}", v.short_name()), |b| {
                b.iter(|| ader_step(&ladder, rhs, black_box(&problem.u0), 0.0, 0.05).unwrap())
            });
        }
    }
    let adaptive = AdaptiveLadder::new(NodeKind::GaussLobatto, Variant::AderDu, 15).unwrap();
    g.bench_function("glb/adaptive", |b| {
        b.iter(|| adaptive.step(rhs, black_box(&problem.u0), 0.0, 0.05, 1e-10).unwrap())
    });
    g.finish();
}

fn construction(c: &mut Criterion) {
    let mut g = c.benchmark_group("construction");
    for p in [6, 10, 14] {
        g.bench_with_input(BenchmarkId::new("ladder_glb_aderdu", p), &p, |b, &p| {
            b.iter(|| build_ladder(NodeKind::GaussLobatto, Variant::AderDu, black_box(p)).unwrap())
        });
        let ladder = build_ladder(NodeKind::GaussLobatto, Variant::AderDu, p).unwrap();
        g.bench_with_input(BenchmarkId::new("tableau_glb_aderdu", p), &ladder, |b, l| b.iter(|| explicit_tableau(l)));
    }
    g.finish();
}

fn sd_kernels(c: &mut Criterion) {
    let problem = euler_sod();
    let euler = Euler::default();
    let mesh = build_mesh(64, 3, problem.domain, problem.bc).unwrap();
    let u = initial_state(&problem, &mesh);
    let ladder = build_ladder(NodeKind::GaussLobatto, Variant::AderDu, 4).unwrap();
    let lim = problem.limiter.unwrap();
    let dt = 1e-3;
    let mut g = c.benchmark_group("sd_euler_k64_m3");
    g.bench_function("rhs", |b| {
        let mut out = vec![0.0; u.len()];
        b.iter(|| semidiscrete_rhs(&mesh, &euler, black_box(&u), &mut out).unwrap())
    });
    g.bench_function("step_unlimited", |b| {
        b.iter(|| step_unlimited(&mesh, &euler, black_box(&u), &ladder, dt).unwrap())
    });
    g.bench_function("step_limited", |b| {
        b.iter(|| step_limited(&mesh, &euler, black_box(&u), &ladder, dt, &lim).unwrap())
    });
    g.finish();
}

criterion_group!(benches, c5_steps, single_step, construction, sd_kernels);
criterion_main!(benches);
