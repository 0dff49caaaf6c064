use criterion::{black_box, criterion_group, criterion_main, BatchSize, Criterion};
use zeckauto::inference::{guess_dfa, GuessOptions, SampleSet};
use zeckauto::interspersion::{first_column, generate, ArraySpec};
use zeckauto::logic::{compile_str, eval_str};
use zeckauto::{decode, encode, BaseRelations, CertBounds, Registry};

fn base() -> Registry {
    BaseRelations::shared().expect("base relations certify").registry()
}

fn zeckendorf(c: &mut Criterion) {
    c.bench_function("encode_decode_10k", |b| {
        b.iter(|| {
            for n in 0..10_000u64 {
                black_box(decode(&encode(black_box(n))));
            }
        })
    });
}

fn kernel(c: &mut Criterion) {
    let reg = base();
    let phin = reg.get("phin").unwrap().clone();
    let lt = reg.get("lt").unwrap().clone();
    c.bench_function("minimize_phin", |b| b.iter(|| black_box(&phin).minimize()));
    c.bench_function("product_phin_lt", |b| b.iter(|| phin.intersect(black_box(&lt)).unwrap()));
}

fn decision(c: &mut Criterion) {
    let reg = base();
    c.bench_function("compile_wythoff_col1", |b| {
        b.iter(|| compile_str(black_box("?msd_fib Ex $phin(n,x) & z=x+1"), &reg).unwrap())
    });
    c.bench_function("eval_shift_sum", |b| {
        b.iter(|| eval_str(black_box(zeckauto::base_relations::SHIFT_SUM_LEMMA), &reg).unwrap())
    });
}

fn pipeline(c: &mut Criterion) {
    let spec = ArraySpec::builtin("wythoff").unwrap();
    let samples = SampleSet::from_pairs(first_column(&spec, 500).into_iter().enumerate().map(|(i, v)| (i as u64, v)))
        .unwrap();
    c.bench_function("guess_wythoff_col1", |b| b.iter(|| guess_dfa(black_box(&samples), &GuessOptions::default())));
    c.bench_function("generate_stolarsky_100x10", |b| {
        let s = ArraySpec::builtin("stolarsky").unwrap();
        b.iter(|| generate(black_box(&s), 100, 10))
    });
    let mut g = c.benchmark_group("certify");
    g.sample_size(10);
    g.bench_function("base_relations_capped_2000", |b| {
        b.iter_batched(|| CertBounds::capped(2000), |bounds| BaseRelations::build(&bounds).unwrap(), BatchSize::SmallInput)
    });
    g.finish();
}

criterion_group!(benches, zeckendorf, kernel, decision, pipeline);
criterion_main!(benches);
