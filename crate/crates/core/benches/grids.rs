//! Sequential vs rayon fan-out on the two grid workloads: a strip of `phi`
//! values and a zero scan. Build with `--no-default-features` to see the
//! parallel arm fall back to sequential.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use zeta_cousin::phi::phi;
use zeta_cousin::zeros::{grid, scan, ScanRegion, ScanSettings};
use zeta_cousin::{c64, Execution, QuadratureConfig};

fn modes() -> [(&'static str, Execution); 2] {
    [("sequential", Execution::Sequential), ("parallel", Execution::Parallel(0))]
}

fn phi_grid(c: &mut Criterion) {
    let cfg = QuadratureConfig::default();
    let points: Vec<_> = grid(0.0, 30.0, 0.05).into_iter().map(|t| c64(0.5, t)).collect();
    let mut group = c.benchmark_group("phi_grid_601");
    for (name, exec) in modes() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| exec.map(&points, |&k| phi(k, &cfg).map(|e| e.value)))
        });
    }
    group.finish();
}

fn zero_scan(c: &mut Criterion) {
    let region = ScanRegion::new((0.4, 0.6), (0.0, 30.0));
    let mut group = c.benchmark_group("zero_scan");
    group.sample_size(10);
    for (name, exec) in modes() {
        let settings = ScanSettings {
            execution: exec,
            ..ScanSettings::default()
        };
        group.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| scan(&region, &settings)));
    }
    group.finish();
}

criterion_group!(benches, phi_grid, zero_scan);
criterion_main!(benches);
