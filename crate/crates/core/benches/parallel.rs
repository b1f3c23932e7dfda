use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qmoment::nevanlinna::{build_measure, MeasureParam};
use qmoment::qfunctions::EntireFunctionId;
use qmoment::rootfinder::find_zeros;
use qmoment::{Execution, QContext};
use rug::Float;

fn modes() -> [(&'static str, Execution); 2] {
    [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)]
}

fn zeros(c: &mut Criterion) {
    let base = QContext::builder("0.5").precision_bits(256).build().unwrap();
    let mut group = c.benchmark_group("find_zeros_Sq_40");
    group.sample_size(10);
    for (name, exec) in modes() {
        let ctx = base.with_execution(exec);
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| find_zeros(&EntireFunctionId::Sq, 40, &ctx).unwrap())
        });
    }
    group.finish();
}

fn measure(c: &mut Criterion) {
    let base = QContext::builder("0.5").precision_bits(256).build().unwrap();
    let param = MeasureParam::U(Float::with_val(256, 0.7));
    let mut group = c.benchmark_group("build_measure_u_40");
    group.sample_size(10);
    for (name, exec) in modes() {
        let ctx = base.with_execution(exec);
        group
            .bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| build_measure(&param, 40, &ctx).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, zeros, measure);
criterion_main!(benches);
