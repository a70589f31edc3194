use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use shishkin_mg::benchmarks::Case;
use shishkin_mg::multigrid::discretize_hierarchy;
use shishkin_mg::MgSolver;
use shishkin_mg_bench::Fixture;

const EPS: f64 = 1e-8;

fn fgmres_solve(c: &mut Criterion) {
    let mut g = c.benchmark_group("solve");
    g.sample_size(20);
    for (case, eps, ns) in [
        (Case::SquareExp, EPS, &[64, 128, 256][..]),
        (Case::SquareParab, EPS, &[64, 128][..]),
        (Case::Hemker, 1e-2, &[32, 64][..]),
    ] {
        for &n in ns {
            let f = Fixture::new(case, n, eps).unwrap();
            let tol = f.tolerance(n, eps);
            g.bench_with_input(BenchmarkId::new(case.id(), n), &n, |b, _| {
                b.iter(|| f.solver.solve(f.rhs(), tol, 200).unwrap())
            });
        }
    }
    g.finish();
}

fn single_cycle(c: &mut Criterion) {
    let mut g = c.benchmark_group("v-cycle");
    for n in [128, 256] {
        let f = Fixture::new(Case::SquareExp, n, EPS).unwrap();
        let mut z = vec![0.0; f.rhs().len()];
        g.bench_with_input(BenchmarkId::new("square-exp", n), &n, |b, _| {
            b.iter(|| f.solver.precondition(f.rhs(), &mut z))
        });
    }
    g.finish();
}

fn setup(c: &mut Criterion) {
    let mut g = c.benchmark_group("setup");
    g.sample_size(10);
    for n in [64, 128] {
        let case = Case::SquareExp;
        let h = case.hierarchy(n, EPS, case.max_levels(n)).unwrap();
        let systems = discretize_hierarchy(&h, &case.problem(EPS)).unwrap();
        let cfg = Fixture::new(case, 16, EPS).unwrap().config.mg;
        g.bench_with_input(BenchmarkId::new("square-exp", n), &n, |b, _| {
            b.iter(|| MgSolver::from_hierarchy(&h, &systems, case.line_scheme(), cfg.clone()).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, fgmres_solve, single_cycle, setup);
criterion_main!(benches);
