//! Sequential against Rayon execution on the two enumeration-heavy kernels.
//! Build with `--no-default-features` to see the fallback (both arms then run sequentially).

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use nodal_fano::curve::search;
use nodal_fano::exec::Exec;
use nodal_fano::threefold::{build, fano_census};

fn point_counts(c: &mut Criterion) {
    let curve = search(7, 1, 1, 100, 3, Exec::Sequential).unwrap().curve;
    let mut g = c.benchmark_group("count_points_F7_m4");
    for (name, exec) in [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)] {
        g.bench_function(name, |b| b.iter(|| black_box(curve.count_points(4, exec))));
    }
    g.finish();
}

fn census(c: &mut Criterion) {
    let curve = search(3, 2, 1, 100, 3, Exec::Sequential).unwrap().curve;
    let x = build(&curve).unwrap();
    let mut g = c.benchmark_group("fano_census_F9");
    g.sample_size(10);
    for (name, exec) in [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)] {
        g.bench_function(name, |b| b.iter(|| black_box(fano_census(&x, exec).total)));
    }
    g.finish();
}

criterion_group!(benches, point_counts, census);
criterion_main!(benches);
