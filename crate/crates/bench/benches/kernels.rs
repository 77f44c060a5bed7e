use activeflux_bench::case_state;
use activeflux_core::spectral::{self, Problem, TranslationFactors};
use activeflux_core::{Scheme, Splitting, Stepper};
use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

fn rhs(c: &mut Criterion) {
    for (name, n) in [("gaussian2d", 50), ("gaussian3d", 20)] {
        let (spec, state) = case_state(name, n);
        let scheme = Scheme::new(spec.model(), spec.splitting, &state.grid).unwrap();
        let mut out = vec![0.0; state.as_slice().len()];
        c.bench_function(&format!("apply {name} n={n}"), |b| {
            b.iter(|| scheme.apply(black_box(state.as_slice()), &mut out))
        });
    }
}

fn step(c: &mut Criterion) {
    let (spec, state) = case_state("vortex2d", 50);
    let mut stepper = Stepper::new(Scheme::new(spec.model(), spec.splitting, &state.grid).unwrap());
    let mut s = state.clone();
    c.bench_function("rk3 step vortex2d n=50", |b| b.iter(|| stepper.step(&mut s, 1e-3).unwrap()));
}

fn spectral_kernels(c: &mut Criterion) {
    let h = [1.0, 0.8, 1.2];
    let t = TranslationFactors::from_phases([0.7, -1.3, 2.1]);
    for (problem, splitting) in [
        (Problem::Acoustics2d, Splitting::Upwind),
        (Problem::Acoustics2d, Splitting::Central),
        (Problem::Acoustics3d, Splitting::Upwind),
    ] {
        let label = format!("{} {}", problem.name(), splitting.name());
        let sym = spectral::symbol(problem, splitting, 1.0, h).unwrap();
        c.bench_function(&format!("symbol {label}"), |b| {
            b.iter(|| spectral::symbol(problem, splitting, 1.0, black_box(h)).unwrap())
        });
        c.bench_function(&format!("assemble_e {label}"), |b| b.iter(|| sym.eval(black_box(&t))));
        let e = sym.eval(&t);
        let a = spectral::amplification(&e, 0.2);
        c.bench_function(&format!("eigenvalues {label}"), |b| {
            b.iter(|| spectral::eigen_moduli(black_box(&a)).unwrap())
        });
        c.bench_function(&format!("kernel_dim {label}"), |b| {
            b.iter(|| spectral::kernel_dim(black_box(&e), spectral::RANK_TOL))
        });
    }
}

criterion_group!(benches, rhs, step, spectral_kernels);
criterion_main!(benches);
