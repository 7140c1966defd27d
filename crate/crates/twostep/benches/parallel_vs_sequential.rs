//! Sequential against data-parallel execution for the three parallel entry
//! points: lattice search, potential-area enumeration and batch sampling.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use twostep::exactla::Fp;
use twostep::ideals::{sample_batch, SamplerConfig};
use twostep::landscape::potential_tnt_area;
use twostep::profiles::TwoStepProfile;
use twostep::search::{find_certificates, Strategy};
use twostep::Exec;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn search(c: &mut Criterion) {
    let mut g = c.benchmark_group("search_exhaustive_2_5_9");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| find_certificates(2, 5, 9, Strategy::Exhaustive, black_box(exec)).unwrap())
        });
    }
    g.finish();
}

fn area(c: &mut Criterion) {
    let mut g = c.benchmark_group("potential_area_6_3");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| potential_tnt_area(6, 3, black_box(exec))));
    }
    g.finish();
}

fn sampling(c: &mut Criterion) {
    let p = TwoStepProfile::from_quotient(4, &[1, 4, 9, 6]).unwrap();
    let cfg = SamplerConfig::default();
    let mut g = c.benchmark_group("sample_batch_1_4_9_6");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| sample_batch::<Fp>(&p, 7, 32, &cfg, black_box(exec)))
        });
    }
    g.finish();
}

criterion_group!(benches, search, area, sampling);
criterion_main!(benches);
