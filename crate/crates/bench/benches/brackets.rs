use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use szego_bench::{fixture_curve, fixture_tensor};
use szego_core::bracket::{build_family, build_tensor};
use szego_core::curve::{verify_szego_residues, Parity};
use szego_core::verify::{check_jacobi, compatibility_check, random_point, rank_at_point};

const CASES: [(Parity, u32); 4] = [
    (Parity::Even, 2),
    (Parity::Even, 3),
    (Parity::Odd, 2),
    (Parity::Odd, 3),
];

fn construction(c: &mut Criterion) {
    let mut g = c.benchmark_group("build_tensor");
    for (parity, k) in CASES {
        let m = fixture_curve(parity, k);
        g.bench_with_input(BenchmarkId::new(parity.to_string(), k), &m, |b, m| {
            b.iter(|| build_tensor(black_box(m)).unwrap())
        });
    }
    g.finish();
    c.bench_function("szego_residues/even", |b| {
        let m = fixture_curve(Parity::Even, 1);
        b.iter(|| verify_szego_residues(black_box(&m)).unwrap())
    });
}

fn jacobi(c: &mut Criterion) {
    let mut g = c.benchmark_group("check_jacobi");
    for (parity, k) in CASES {
        let t = fixture_tensor(parity, k);
        g.bench_with_input(BenchmarkId::new(parity.to_string(), k), &t, |b, t| {
            b.iter(|| assert!(check_jacobi(black_box(t)).is_none()))
        });
    }
    g.finish();
}

fn compatibility(c: &mut Criterion) {
    let mut g = c.benchmark_group("compatibility");
    g.sample_size(10);
    for (parity, k) in [(Parity::Even, 3), (Parity::Odd, 3)] {
        let fam = build_family(parity, k).unwrap();
        g.bench_function(BenchmarkId::new("pair", format!("{parity}/{k}")), |b| {
            b.iter(|| compatibility_check(black_box(&fam.tensors[1]), black_box(&fam.tensors[5])))
        });
        g.bench_function(
            BenchmarkId::new("all_pairs", format!("{parity}/{k}")),
            |b| {
                b.iter(|| {
                    for i in 0..9 {
                        for j in i + 1..9 {
                            assert!(
                                compatibility_check(&fam.tensors[i], &fam.tensors[j]).compatible
                            );
                        }
                    }
                })
            },
        );
    }
    g.finish();
}

fn rank(c: &mut Criterion) {
    let mut g = c.benchmark_group("rank_at_point");
    for (parity, k) in CASES {
        let t = fixture_tensor(parity, k);
        let phi = random_point(&mut ChaCha8Rng::seed_from_u64(1), t.n);
        g.bench_with_input(
            BenchmarkId::new(parity.to_string(), k),
            &(t, phi),
            |b, (t, phi)| b.iter(|| rank_at_point(black_box(t), black_box(phi)).unwrap()),
        );
    }
    g.finish();
}

criterion_group!(benches, construction, jacobi, compatibility, rank);
criterion_main!(benches);
