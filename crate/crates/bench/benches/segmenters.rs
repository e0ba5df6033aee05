use criterion::{black_box, criterion_group, criterion_main, Criterion};
use segbias_bench::synthetic_corpus;
use segbias_core::metrics::mattr;
use segbias_core::segmenters::{
    segment_corpus, train_bpe, train_char, train_lmvr, train_morfessor, train_unigram, MorfessorParams, UnigramParams,
};

fn training(c: &mut Criterion) {
    let corpus = synthetic_corpus();
    let mut g = c.benchmark_group("train");
    g.sample_size(10);
    g.bench_function("bpe_500", |b| b.iter(|| train_bpe(black_box(&corpus), 500).unwrap()));
    g.bench_function("unigram_300", |b| b.iter(|| train_unigram(black_box(&corpus), &UnigramParams::new(300)).unwrap()));
    g.bench_function("morfessor", |b| {
        b.iter(|| train_morfessor(black_box(&corpus), &MorfessorParams::default()).unwrap())
    });
    g.bench_function("lmvr_200", |b| {
        b.iter(|| train_lmvr(black_box(&corpus), Some(200), &MorfessorParams::default()).unwrap())
    });
    g.finish();
}

fn application(c: &mut Criterion) {
    let corpus = synthetic_corpus();
    let models = [
        ("char", train_char(&corpus).unwrap()),
        ("bpe", train_bpe(&corpus, 500).unwrap()),
        ("unigram", train_unigram(&corpus, &UnigramParams::new(300)).unwrap()),
        ("morfessor", train_morfessor(&corpus, &MorfessorParams::default()).unwrap()),
    ];
    let mut g = c.benchmark_group("apply");
    for (name, model) in &models {
        g.bench_function(*name, |b| b.iter(|| segment_corpus(model, black_box(&corpus), 1).unwrap()));
    }
    g.finish();
}

fn diversity(c: &mut Criterion) {
    let corpus = synthetic_corpus();
    let tokens: Vec<&str> = corpus.words().collect();
    c.bench_function("mattr_1000", |b| b.iter(|| mattr(black_box(&tokens), 1000).unwrap()));
}

criterion_group!(benches, training, application, diversity);
criterion_main!(benches);
