mod common;

use common::{boxed_solution, random_int_matrix, rng};
use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::sample::subsequence;
use rand::seq::SliceRandom;
use rand::Rng;
use vankampen_core::complex::{boundary_of_sum, combinatorial_boundary, k_subsets};
use vankampen_core::snf::{smith_normal_form, solve_integer, verify};
use vankampen_core::{OrientedSimplex, Simplex, SimplicialComplex, SolveResult};

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn complexes_are_downward_closed(
        faces in prop::collection::vec(subsequence((0..8usize).collect::<Vec<_>>(), 1..5), 1..6)
    ) {
        let k = SimplicialComplex::from_maximal(8, &faces).unwrap();
        for f in k.faces() {
            for sub in 1..=f.vertices().len() {
                for idx in k_subsets(f.vertices().len(), sub) {
                    let s = Simplex::new(idx.iter().map(|&i| f.vertices()[i]).collect()).unwrap();
                    prop_assert!(k.contains(&s));
                }
            }
        }
    }

    #[test]
    fn boundary_squared_vanishes(verts in subsequence((0..12usize).collect::<Vec<_>>(), 3..8), sign in prop::sample::select(vec![1i64, -1])) {
        let s = OrientedSimplex::new(Simplex::new(verts).unwrap(), sign);
        let once = combinatorial_boundary(&s).unwrap();
        prop_assert!(boundary_of_sum(&once).unwrap().is_zero());
    }

    #[test]
    fn full_simplex_face_counts(n in 0usize..8) {
        let k = SimplicialComplex::full_simplex(n);
        for q in 0..=n {
            prop_assert_eq!(k.faces_of_dim(q).len(), binomial(n + 1, q + 1));
        }
    }

    #[test]
    fn snf_certificate_invariants(seed: u64) {
        let mut g = rng(seed);
        let (rows, cols) = (g.gen_range(1..=12), g.gen_range(1..=12));
        let a = random_int_matrix(&mut g, rows, cols, 9);
        prop_assert_eq!(smith_normal_form(&a).verify(&a, true), Ok(()));
    }

    #[test]
    fn invariant_factors_ignore_row_and_column_order(seed: u64) {
        let mut g = rng(seed);
        let (rows, cols) = (g.gen_range(1..=8), g.gen_range(1..=8));
        let a = random_int_matrix(&mut g, rows, cols, 6);
        let mut rp: Vec<usize> = (0..rows).collect();
        let mut cp: Vec<usize> = (0..cols).collect();
        rp.shuffle(&mut g);
        cp.shuffle(&mut g);
        prop_assert_eq!(smith_normal_form(&a).diagonal, smith_normal_form(&a.permuted(&rp, &cp)).diagonal);
    }

    #[test]
    fn solve_agrees_with_box_search(seed: u64) {
        let mut g = rng(seed);
        let (rows, cols) = (g.gen_range(1..=4), g.gen_range(1..=3));
        let a = random_int_matrix(&mut g, rows, cols, 3);
        let v: Vec<BigInt> = (0..rows).map(|_| BigInt::from(g.gen_range(-5..=5))).collect();
        let brute = boxed_solution(&a, &v, 3);
        match solve_integer(&a, &v).unwrap() {
            SolveResult::Solution(x) => prop_assert!(verify(&a, &x, &v).unwrap()),
            SolveResult::Obstructed(o) => {
                prop_assert!(brute.is_none());
                prop_assert!(o.witness.check(&a, &v));
            }
        }
    }
}
