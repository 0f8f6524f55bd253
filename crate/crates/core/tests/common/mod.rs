//! Random instance generators shared by the property and acceptance suites.
#![allow(dead_code)]

use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vankampen_core::exactgeo::{det_route_sign, rat, AffineChain, Point};
use vankampen_core::{AffineSimplex, Frame, IntMatrix, Permutation, QMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Codimensions `c_i >= 0` summing to `d`, so that `Σ m_i = d(r-1)`.
pub fn random_dims<R: Rng>(rng: &mut R, r: usize, d: usize) -> Vec<usize> {
    let mut codim = vec![0usize; r];
    for _ in 0..d {
        codim[rng.gen_range(0..r)] += 1;
    }
    codim.iter().map(|c| d - c).collect()
}

pub fn random_frame<R: Rng>(rng: &mut R, d: usize, m: usize) -> Frame {
    let cols: Vec<Vec<_>> = (0..m).map(|_| (0..d).map(|_| rat(rng.gen_range(-9..=9))).collect()).collect();
    let weight = if rng.gen_bool(0.5) { 1 } else { -1 };
    Frame::new(QMatrix::from_columns(d, &cols), weight)
}

/// A transverse tuple of oriented subspaces with `2 <= r <= max_r`, `1 <= d <= max_d`.
pub fn random_frames<R: Rng>(rng: &mut R, max_r: usize, max_d: usize) -> (usize, Vec<Frame>) {
    loop {
        let r = rng.gen_range(2..=max_r);
        let d = rng.gen_range(1..=max_d);
        let dims = random_dims(rng, r, d);
        let frames: Vec<Frame> = dims.iter().map(|&m| random_frame(rng, d, m)).collect();
        if frames.iter().all(|f| f.basis.rank() == f.dim()) && det_route_sign(&frames, 1).is_ok() {
            return (d, frames);
        }
    }
}

/// `(-1)^{Σ_{i<j, π(i)>π(j)} (d-m_{π(i)})(d-m_{π(j)})}`: the sign picked up by
/// listing the factors in the order `σ_{π(0)}, …, σ_{π(r-1)}`.
pub fn skew_sign(d: usize, dims: &[usize], pi: &Permutation) -> i64 {
    let mut t = 0;
    for (i, j) in pi.inversions() {
        t += (d - dims[pi.apply(i)]) * (d - dims[pi.apply(j)]);
    }
    if t % 2 == 0 {
        1
    } else {
        -1
    }
}

fn random_point<R: Rng>(rng: &mut R, d: usize, spread: i64) -> Point {
    (0..d).map(|_| rat(rng.gen_range(-spread..=spread))).collect()
}

pub fn random_simplex<R: Rng>(rng: &mut R, d: usize, m: usize, spread: i64) -> AffineSimplex {
    loop {
        let pts: Vec<Point> = (0..=m).map(|_| random_point(rng, d, spread)).collect();
        if let Ok(s) = AffineSimplex::new(pts, 1) {
            return s;
        }
    }
}

/// Two single-simplex chains with `m_1 + m_2 = d + 1`.
pub fn boundary_pair<R: Rng>(rng: &mut R, max_d: usize) -> (usize, AffineChain, AffineChain) {
    let d = rng.gen_range(1..=max_d);
    let m1 = rng.gen_range(1..=d);
    let m2 = d + 1 - m1;
    let a = AffineChain::single(random_simplex(rng, d, m1, 6));
    let b = AffineChain::single(random_simplex(rng, d, m2, 6));
    (m1, a, b)
}

pub fn random_int_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    let dense: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect()).collect();
    IntMatrix::from_i64(&dense)
}

/// Some `x` in `[-b, b]^n` with `A x = v`, by exhaustive search.
pub fn boxed_solution(a: &IntMatrix, v: &[BigInt], b: i64) -> Option<Vec<BigInt>> {
    let n = a.cols();
    let mut x = vec![-b; n];
    loop {
        let xb: Vec<BigInt> = x.iter().map(|&t| BigInt::from(t)).collect();
        if a.mul_vec(&xb).ok()?.as_slice() == v {
            return Some(xb);
        }
        let mut pos = 0;
        loop {
            if pos == n {
                return None;
            }
            x[pos] += 1;
            if x[pos] <= b {
                break;
            }
            x[pos] = -b;
            pos += 1;
        }
    }
}
