use collapse_core::gh::natural_coupling;
use collapse_core::surfaces::{gen_flat_torus, gen_sphere_tube};
use collapse_core::Exec;
use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

fn bench_exec(c: &mut Criterion) {
    let mut group = c.benchmark_group("exec");
    group.sample_size(10);
    for exec in [Exec::Sequential, Exec::Parallel] {
        let name = format!("{exec:?}").to_lowercase();
        group.bench_function(format!("sphere_tube_generate/{name}"), |b| {
            b.iter(|| gen_sphere_tube(1.0, 0.05, 0.0125, exec).unwrap())
        });
        let torus = gen_flat_torus(1.0, 0.02, 0.005).unwrap();
        group.bench_function(format!("torus_diameter/{name}"), |b| {
            b.iter(|| black_box(torus.diameter(exec)))
        });
        group.bench_function(format!("torus_hausdorff/{name}"), |b| {
            b.iter(|| black_box(natural_coupling(&torus, exec).unwrap().hausdorff()))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_exec);
criterion_main!(benches);
