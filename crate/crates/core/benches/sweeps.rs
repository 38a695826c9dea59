//! Parallel versus sequential throughput of the data-parallel workloads.
//!
//! With default features each workload runs twice: on the global rayon pool
//! and on a one-thread pool. Building with `--no-default-features` benches the
//! plain-loop fallback under the `sequential` label, so
//! `cargo bench` and `cargo bench --no-default-features` can be compared
//! directly in criterion's report.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use plugpalf::catalog::{self, Catalog, PlugParams};
use plugpalf::{par, selftest};

type Workload = Box<dyn Fn() + Send + Sync>;

fn workloads() -> Vec<(&'static str, Workload)> {
    let constraints = Catalog::embedded().constraints_file("constraints/A.constraints").expect("shipped");
    vec![
        ("kirby_invariance_100", Box::new(|| assert!(selftest::kirby_invariance(0, 100).pass()))),
        ("palf_oracle_100", Box::new(|| assert!(selftest::palf_oracle(0, 100).pass()))),
        ("search_A", Box::new(move || assert!(!catalog::search_curve_family(&constraints).is_empty()))),
        (
            "w_grid",
            Box::new(|| {
                let params: Vec<PlugParams> = catalog::GRID_M
                    .flat_map(|m| catalog::GRID_N.map(move |n| PlugParams::new(m, n).expect("grid")))
                    .collect();
                let ok = par::map(&params, |&p| catalog::plug_palf(p).map(|w| w.invariants().b2 == 1).unwrap_or(false));
                assert!(ok.into_iter().all(|b| b));
            }),
        ),
    ]
}

fn sweeps(c: &mut Criterion) {
    let mut group = c.benchmark_group("sweeps");
    group.sample_size(10);
    let backend = if par::is_parallel() { "parallel" } else { "sequential" };
    #[cfg(feature = "parallel")]
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().expect("thread pool");
    for (name, work) in workloads() {
        group.bench_function(BenchmarkId::new(name, backend), |b| b.iter(&work));
        #[cfg(feature = "parallel")]
        group.bench_function(BenchmarkId::new(name, "one-thread"), |b| b.iter(|| single.install(&work)));
    }
    group.finish();
}

criterion_group!(benches, sweeps);
criterion_main!(benches);
