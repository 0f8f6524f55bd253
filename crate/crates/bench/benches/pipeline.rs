use criterion::{black_box, criterion_group, criterion_main, Criterion};
use vankampen_core::exactgeo::{det_route_sign, inductive_sign, sample_generic_map, unraveled_sign};
use vankampen_core::obstruction::{run_obstruction, ObstructionConfig, DEFAULT_BOX};
use vankampen_core::oracle::{enumerate_tverberg, DEFAULT_TUPLE_CAP};
use vankampen_core::prismatic::{prismatic_obstruction, DEFAULT_MAX_ORBITS};
use vankampen_core::snf::{smith_normal_form, solve_echelon};
use vankampen_core::{ColorScheme, Frame, IntMatrix, QMatrix, SimplicialComplex};

fn obstruction(c: &mut Criterion) {
    let k5 = SimplicialComplex::complete_graph(5);
    c.bench_function("obstruction K5 r=2 d=2", |b| {
        b.iter(|| run_obstruction(black_box(&k5), &ObstructionConfig::new(2, 2, 1), None).unwrap())
    });
    let skeleton = SimplicialComplex::simplex_skeleton(6, 2);
    let mut group = c.benchmark_group("slow");
    group.sample_size(10);
    group.bench_function("obstruction 2-skeleton of sigma6 r=2 d=4", |b| {
        b.iter(|| run_obstruction(black_box(&skeleton), &ObstructionConfig::new(2, 4, 1), None).unwrap())
    });
    let scheme = ColorScheme::new(3, 1).unwrap();
    group.bench_function("prismatic obstruction (3,1)", |b| {
        b.iter(|| prismatic_obstruction(black_box(&scheme), 1, DEFAULT_MAX_ORBITS).unwrap())
    });
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let sigma = SimplicialComplex::full_simplex(4);
    let f = sample_generic_map(&sigma, 1, 3, DEFAULT_BOX).unwrap();
    c.bench_function("tverberg scan sigma4 r=3 d=1", |b| {
        b.iter(|| enumerate_tverberg(black_box(&sigma), 3, &f, DEFAULT_TUPLE_CAP).unwrap())
    });
}

fn pseudo_random(rows: usize, cols: usize, mut state: u64) -> Vec<Vec<i64>> {
    (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| {
                    state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    ((state >> 33) % 19) as i64 - 9
                })
                .collect()
        })
        .collect()
}

fn snf(c: &mut Criterion) {
    let a = IntMatrix::from_i64(&pseudo_random(30, 30, 7));
    c.bench_function("smith normal form 30x30", |b| b.iter(|| smith_normal_form(black_box(&a))));
    let v: Vec<_> = (0..30).map(|i| (i as i64 - 15).into()).collect();
    c.bench_function("column echelon solve 30x30", |b| b.iter(|| solve_echelon(black_box(&a), &v).unwrap()));
}

fn signs(c: &mut Criterion) {
    // three planes in Q^3
    let frames = [
        Frame::new(QMatrix::from_i64(&[vec![1, 0], vec![0, 1], vec![0, 0]]), 1),
        Frame::new(QMatrix::from_i64(&[vec![1, 0], vec![0, 0], vec![0, 1]]), 1),
        Frame::new(QMatrix::from_i64(&[vec![0, 1], vec![1, 2], vec![1, 3]]), 1),
    ];
    c.bench_function("sign: product-diagonal determinant", |b| b.iter(|| det_route_sign(black_box(&frames), 1)));
    c.bench_function("sign: unraveled", |b| b.iter(|| unraveled_sign(black_box(&frames), 1)));
    c.bench_function("sign: inductive", |b| b.iter(|| inductive_sign(black_box(&frames), 1)));
}

criterion_group!(benches, obstruction, oracle, snf, signs);
criterion_main!(benches);
