//! Microbenchmarks for the operations with interesting growth behaviour.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use uafa_bench::{chrobak_family, ufa_family};
use uafa_core::chrobak::chrobak_to_nfa;
use uafa_core::{complement_ufa, nfa_subset, star, ufa_universal, UniversalityMode};

fn bench_complement(c: &mut Criterion) {
    let mut group = c.benchmark_group("complement_ufa");
    for n in [8usize, 16, 32, 64] {
        let inputs = ufa_family(0xc0_fe + n as u64, n, 8);
        group.bench_with_input(BenchmarkId::from_parameter(n), &inputs, |b, inputs| {
            b.iter(|| {
                for c in inputs {
                    let _ = complement_ufa(c).unwrap();
                }
            })
        });
    }
    group.finish();
}

fn bench_subset(c: &mut Criterion) {
    let mut group = c.benchmark_group("nfa_subset");
    for n in [8usize, 16, 24] {
        let xs = chrobak_family(0xbeef + n as u64, n, 8);
        let ys = chrobak_family(0xfeed + n as u64, n, 8);
        group.bench_with_input(BenchmarkId::from_parameter(n), &(xs, ys), |b, (xs, ys)| {
            b.iter(|| {
                for (x, y) in xs.iter().zip(ys) {
                    let _ = nfa_subset(x, y).unwrap();
                }
            })
        });
    }
    group.finish();
}

fn bench_star(c: &mut Criterion) {
    let mut group = c.benchmark_group("star");
    for n in [8usize, 16, 32] {
        let inputs: Vec<_> = chrobak_family(0x57a7 + n as u64, n, 4)
            .iter()
            .map(chrobak_to_nfa)
            .collect();
        group.bench_with_input(BenchmarkId::from_parameter(n), &inputs, |b, inputs| {
            b.iter(|| {
                for a in inputs {
                    let _ = star(a);
                }
            })
        });
    }
    group.finish();
}

fn bench_universal(c: &mut Criterion) {
    let mut group = c.benchmark_group("ufa_universal");
    let inputs = ufa_family(0xdead, 32, 16);
    for mode in [UniversalityMode::Exact, UniversalityMode::Modular] {
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("{mode:?}")),
            &inputs,
            |b, inputs| {
                b.iter(|| {
                    for c in inputs {
                        let _ = ufa_universal(c, mode).unwrap();
                    }
                })
            },
        );
    }
    group.finish();
}

criterion_group!(benches, bench_complement, bench_subset, bench_star, bench_universal);
criterion_main!(benches);
