use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use drinfeld_census::census::{run_census, CensusOptions};
use drinfeld_census::drinfeld::GammaCtx;
use drinfeld_census::field::FieldCtx;

fn sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("census");
    group.sample_size(10);
    for (q, n, d) in [(5u64, 3u32, 1u32), (7, 2, 2), (9, 2, 1)] {
        let gamma = GammaCtx::new(FieldCtx::for_q(q, n, 4096).unwrap(), d).unwrap();
        let label = format!("q{q}_n{n}_d{d}");
        for (name, jobs) in [("sequential", Some(1)), ("parallel", None)] {
            let opts = CensusOptions { jobs };
            group.bench_with_input(BenchmarkId::new(name, &label), &gamma, |b, g| {
                b.iter(|| run_census(g, &opts).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, sweep);
criterion_main!(benches);
