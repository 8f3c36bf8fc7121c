use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use std::hint::black_box;
use subst_bench::workloads;
use subst_core::engine::{step_constant_number, step_number, step_string};
use subst_core::render::{render_spacetime, Palette};
use subst_core::{run, RunOptions};

fn trajectories(c: &mut Criterion) {
    let mut group = c.benchmark_group("trajectory");
    group.sample_size(10);
    for w in workloads() {
        let last = run(&w.rule, &w.seed, w.steps, RunOptions::default()).unwrap();
        group.throughput(Throughput::Elements(last.last().len() as u64));

        group.bench_function(BenchmarkId::new("array", w.name), |b| {
            b.iter(|| {
                let mut word = w.seed.clone();
                for _ in 0..w.steps {
                    word = step_string(&w.rule, &word).unwrap();
                }
                black_box(word)
            })
        });

        if !w.rule.is_valid() || w.seed.leading_symbol() == 0 {
            continue;
        }
        group.bench_function(BenchmarkId::new("numeral", w.name), |b| {
            b.iter(|| {
                let mut a = (w.seed.numeral().clone(), w.seed.len());
                for _ in 0..w.steps {
                    a = step_number(&w.rule, &a.0, a.1).unwrap();
                }
                black_box(a)
            })
        });

        if let Ok(code) = w.rule.wolfram_code() {
            group.bench_function(BenchmarkId::new("constant-numeral", w.name), |b| {
                b.iter(|| {
                    let mut a = (w.seed.numeral().clone(), w.seed.len());
                    for _ in 0..w.steps {
                        a = step_constant_number(&code, &a.0, a.1).unwrap();
                    }
                    black_box(a)
                })
            });
        }
    }
    group.finish();
}

fn rendering(c: &mut Criterion) {
    let mut group = c.benchmark_group("render");
    group.sample_size(10);
    for w in workloads() {
        let traj = run(&w.rule, &w.seed, w.steps.min(8), RunOptions::default()).unwrap();
        let palette = Palette::hexcone(w.rule.alphabet_size());
        group.bench_function(w.name, |b| {
            b.iter(|| black_box(render_spacetime(&traj, &palette, 1024, 4).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, trajectories, rendering);
criterion_main!(benches);
