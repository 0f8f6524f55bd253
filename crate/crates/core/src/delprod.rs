//! Cells of the r-fold deleted product and the free symmetric-group action on them.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cocycle::EquivariantComplex;
use crate::complex::{SignedSum, Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// An ordered tuple of pairwise disjoint simplices, oriented as the product of
/// the reference orientations of its factors in factor order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DeletedProductCell {
    factors: Vec<Simplex>,
}

impl DeletedProductCell {
    pub fn new(factors: Vec<Simplex>) -> Result<Self> {
        if factors.len() < 2 {
            return Err(Error::Input("a deleted-product cell needs r >= 2 factors".into()));
        }
        for (i, a) in factors.iter().enumerate() {
            for b in &factors[i + 1..] {
                if !a.is_disjoint(b) {
                    return Err(Error::Input(format!("factors {a} and {b} are not disjoint")));
                }
            }
        }
        Ok(DeletedProductCell { factors })
    }

    fn from_factors_unchecked(factors: Vec<Simplex>) -> Self {
        DeletedProductCell { factors }
    }

    pub fn factors(&self) -> &[Simplex] {
        &self.factors
    }

    pub fn r(&self) -> usize {
        self.factors.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(Simplex::dim).collect()
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(Simplex::dim).sum()
    }

    /// True when this is the lexicographically minimal element of its orbit.
    pub fn is_orbit_rep(&self) -> bool {
        self.factors.windows(2).all(|w| w[0] < w[1])
    }
}

impl fmt::Display for DeletedProductCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "x")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Orientation change of a product of oriented pieces of dimensions `dims`
/// when reordered so that position `a` receives piece `π(a)`.
pub fn reorder_sign(dims: &[usize], pi: &Permutation) -> i64 {
    let exponent: usize = pi.inversions().map(|(a, b)| dims[pi.apply(a)] * dims[pi.apply(b)]).sum();
    if exponent % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Reorder the factors to `(σ_{π(1)}, …, σ_{π(r)})`; returns the new cell and
/// the orientation change.
pub fn permute(cell: &DeletedProductCell, pi: &Permutation) -> (DeletedProductCell, i64) {
    assert_eq!(pi.len(), cell.r(), "permutation size must equal r");
    let sign = reorder_sign(&cell.dims(), pi);
    (DeletedProductCell::from_factors_unchecked(pi.reorder(&cell.factors)), sign)
}

/// `(sign π)^d`, the action on the coefficients of the target sphere.
pub fn coefficient_action(pi: &Permutation, d: usize) -> i64 {
    pi.sign_pow(d)
}

/// Orbit representative (factors sorted ascending) and the twist with
/// `value(cell) = twist · value(rep)` for every equivariant cochain.
pub fn canonicalize(cell: &DeletedProductCell, d: usize) -> (DeletedProductCell, i64) {
    let pi = Permutation::sorting(&cell.factors);
    let (rep, sign) = permute(cell, &pi);
    (rep, sign * coefficient_action(&pi, d))
}

/// Leibniz boundary: `Σ_i (-1)^{m_1+…+m_{i-1}} σ_1 × … × ∂σ_i × … × σ_r`.
pub fn cell_boundary(cell: &DeletedProductCell) -> SignedSum<DeletedProductCell> {
    let mut out = SignedSum::new();
    let mut prefix = 0usize;
    for (i, s) in cell.factors.iter().enumerate() {
        let m = s.dim();
        if m > 0 {
            let outer = if prefix % 2 == 0 { 1 } else { -1 };
            for j in 0..=m {
                let inner = if j % 2 == 0 { 1 } else { -1 };
                let mut factors = cell.factors.clone();
                factors[i] = s.facet(j);
                out.add(DeletedProductCell::from_factors_unchecked(factors), outer * inner);
            }
        }
        prefix += m;
    }
    out
}

/// Every ordered r-tuple of pairwise disjoint faces with dimension sum `dim`.
pub fn enumerate_cells(k: &SimplicialComplex, r: usize, dim: usize) -> Vec<DeletedProductCell> {
    let faces: Vec<&Simplex> = k.faces().filter(|f| f.dim() <= dim).collect();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(r);
    walk(&faces, r, dim, false, &mut cur, &mut |t| {
        out.push(DeletedProductCell::from_factors_unchecked(t.iter().map(|s| (*s).clone()).collect()));
        true
    });
    out
}

/// Orbit representatives of dimension `dim`, in lexicographic order. Fails
/// with a resource error once more than `cap` representatives are found.
pub fn enumerate_reps(
    k: &SimplicialComplex,
    r: usize,
    dim: usize,
    cap: Option<usize>,
) -> Result<Vec<DeletedProductCell>> {
    let mut faces: Vec<&Simplex> = k.faces().filter(|f| f.dim() <= dim).collect();
    faces.sort();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(r);
    let mut over = false;
    walk(&faces, r, dim, true, &mut cur, &mut |t| {
        if cap.is_some_and(|c| out.len() >= c) {
            over = true;
            return false;
        }
        out.push(DeletedProductCell::from_factors_unchecked(t.iter().map(|s| (*s).clone()).collect()));
        true
    });
    if over {
        return Err(Error::ResourceCap(format!(
            "more than {} orbit representatives in dimension {dim}",
            cap.unwrap_or(0)
        )));
    }
    Ok(out)
}

/// Whether the deleted product has at least one cell of dimension `dim`.
pub fn has_cells(k: &SimplicialComplex, r: usize, dim: usize) -> bool {
    let mut faces: Vec<&Simplex> = k.faces().filter(|f| f.dim() <= dim).collect();
    faces.sort();
    let mut found = false;
    walk(&faces, r, dim, true, &mut Vec::with_capacity(r), &mut |_| {
        found = true;
        false
    });
    found
}

/// Dimension of the r-fold deleted product, `None` if it has no cells.
pub fn deleted_product_dim(k: &SimplicialComplex, r: usize) -> Option<usize> {
    if k.vertex_count() < r {
        return None;
    }
    let upper = (r * k.dim()).min(k.vertex_count() - r);
    (0..=upper).rev().find(|&n| has_cells(k, r, n))
}

/// Depth-first search over tuples of pairwise disjoint faces. With `sorted`,
/// factors are strictly increasing in the order of `faces`. The visitor
/// returns `false` to stop the search; `walk` returns `false` if stopped.
fn walk<'a>(
    faces: &[&'a Simplex],
    r: usize,
    budget: usize,
    sorted: bool,
    cur: &mut Vec<&'a Simplex>,
    visit: &mut dyn FnMut(&[&'a Simplex]) -> bool,
) -> bool {
    let used: usize = cur.iter().map(|s| s.dim()).sum();
    let remaining = budget - used;
    if cur.len() == r {
        return if remaining == 0 { visit(cur) } else { true };
    }
    let last_slot = cur.len() + 1 == r;
    let start = if sorted {
        match cur.last() {
            Some(prev) => faces.partition_point(|f| *f <= *prev),
            None => 0,
        }
    } else {
        0
    };
    for &f in &faces[start..] {
        let m = f.dim();
        if m > remaining || (last_slot && m != remaining) {
            continue;
        }
        if cur.iter().any(|s| !s.is_disjoint(f)) {
            continue;
        }
        cur.push(f);
        let go_on = walk(faces, r, budget, sorted, cur, visit);
        cur.pop();
        if !go_on {
            return false;
        }
    }
    true
}

/// The deleted product of `complex` with the coefficient action `(sign π)^d`.
#[derive(Clone, Copy, Debug)]
pub struct DeletedProduct<'a> {
    pub complex: &'a SimplicialComplex,
    pub r: usize,
    pub d: usize,
}

impl<'a> DeletedProduct<'a> {
    pub fn new(complex: &'a SimplicialComplex, r: usize, d: usize) -> Self {
        DeletedProduct { complex, r, d }
    }

    /// The critical dimension `d(r-1)`.
    pub fn top_dim(&self) -> usize {
        self.d * (self.r - 1)
    }
}

impl EquivariantComplex for DeletedProduct<'_> {
    type Cell = DeletedProductCell;

    fn cell_dim(&self, cell: &DeletedProductCell) -> usize {
        cell.dim()
    }

    fn boundary(&self, cell: &DeletedProductCell) -> SignedSum<DeletedProductCell> {
        cell_boundary(cell)
    }

    fn canonicalize(&self, cell: &DeletedProductCell) -> (DeletedProductCell, i64) {
        canonicalize(cell, self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn s(v: &[usize]) -> Simplex {
        Simplex::new(v.to_vec()).unwrap()
    }

    fn cell(f: &[&[usize]]) -> DeletedProductCell {
        DeletedProductCell::new(f.iter().map(|v| s(v)).collect()).unwrap()
    }

    #[test]
    fn enumeration_counts() {
        let tri = SimplicialComplex::full_simplex(2);
        assert_eq!(enumerate_cells(&tri, 2, 1).len(), 6);
        let k5 = SimplicialComplex::complete_graph(5);
        assert_eq!(enumerate_cells(&k5, 2, 2).len(), 30);
        // 90 cells of type (edge, edge, vertex) plus 60 of type (triangle, vertex, vertex)
        let s4 = SimplicialComplex::full_simplex(4);
        let cells = enumerate_cells(&s4, 3, 2);
        assert_eq!(cells.len(), 150);
        assert_eq!(cells.iter().filter(|c| c.dims().iter().all(|&m| m <= 1)).count(), 90);
    }

    #[test]
    fn orbit_counts_match_cells() {
        let cases = [
            (SimplicialComplex::complete_graph(5), 2, 2, 15, 30),
            (SimplicialComplex::full_simplex(4), 3, 1, 25, 30),
            (SimplicialComplex::simplex_skeleton(6, 2), 2, 4, 70, 210),
        ];
        for (k, r, d, top, codim) in cases {
            let n = d * (r - 1);
            let fact: usize = (1..=r).product();
            assert_eq!(enumerate_reps(&k, r, n, None).unwrap().len(), top);
            assert_eq!(enumerate_reps(&k, r, n - 1, None).unwrap().len(), codim);
            assert_eq!(enumerate_cells(&k, r, n).len(), top * fact);
        }
    }

    #[test]
    fn rep_cap_is_enforced() {
        let k = SimplicialComplex::simplex_skeleton(6, 2);
        assert!(matches!(enumerate_reps(&k, 2, 4, Some(10)), Err(Error::ResourceCap(_))));
    }

    #[test]
    fn deleted_product_dimensions() {
        assert_eq!(deleted_product_dim(&SimplicialComplex::complete_graph(5), 2), Some(2));
        assert_eq!(deleted_product_dim(&SimplicialComplex::complete_graph(4), 2), Some(2));
        assert_eq!(deleted_product_dim(&SimplicialComplex::full_simplex(4), 3), Some(2));
        assert_eq!(deleted_product_dim(&SimplicialComplex::cycle(3), 2), Some(1));
        assert_eq!(deleted_product_dim(&SimplicialComplex::full_simplex(0), 2), None);
    }

    #[test]
    fn permute_examples() {
        let ee = cell(&[&[0, 1], &[2, 3]]);
        let swap = Permutation::transposition(2, 0, 1);
        let (p, sign) = permute(&ee, &swap);
        assert_eq!(p, cell(&[&[2, 3], &[0, 1]]));
        assert_eq!(sign, -1);
        assert_eq!(permute(&ee, &Permutation::identity(2)), (ee.clone(), 1));
        let ve = cell(&[&[0], &[1, 2]]);
        assert_eq!(permute(&ve, &swap).1, 1);
    }

    #[test]
    fn coefficient_action_examples() {
        let t = Permutation::transposition(2, 0, 1);
        assert_eq!(coefficient_action(&t, 2), 1);
        assert_eq!(coefficient_action(&t, 3), -1);
        assert_eq!(coefficient_action(&Permutation::identity(3), 5), 1);
    }

    #[test]
    fn canonicalize_examples() {
        let rep = cell(&[&[0, 1], &[2, 3]]);
        assert_eq!(canonicalize(&rep, 2), (rep.clone(), 1));
        let swapped = cell(&[&[2, 3], &[0, 1]]);
        assert_eq!(canonicalize(&swapped, 2), (rep.clone(), -1));
        assert_eq!(canonicalize(&swapped, 3), (rep, 1));
    }

    #[test]
    fn boundary_examples() {
        let ee = cell(&[&[0, 1], &[2, 3]]);
        let b = cell_boundary(&ee);
        assert_eq!(b.len(), 4);
        assert_eq!(b.coefficient(&cell(&[&[1], &[2, 3]])), 1);
        assert_eq!(b.coefficient(&cell(&[&[0], &[2, 3]])), -1);
        assert_eq!(b.coefficient(&cell(&[&[0, 1], &[3]])), -1);
        assert_eq!(b.coefficient(&cell(&[&[0, 1], &[2]])), 1);

        let ve = cell(&[&[0], &[1, 2]]);
        let b = cell_boundary(&ve);
        assert_eq!(b.len(), 2);
        assert_eq!(b.coefficient(&cell(&[&[0], &[2]])), 1);
        assert_eq!(b.coefficient(&cell(&[&[0], &[1]])), -1);
    }

    fn boundary_twice(c: &DeletedProductCell) -> SignedSum<DeletedProductCell> {
        let mut out = SignedSum::new();
        for (t, coeff) in cell_boundary(c).iter() {
            for (u, c2) in cell_boundary(t).iter() {
                out.add(u.clone(), coeff * c2);
            }
        }
        out
    }

    #[test]
    fn boundary_squared_vanishes() {
        assert!(boundary_twice(&cell(&[&[0, 1, 2], &[3, 4]])).is_zero());
        let k = SimplicialComplex::full_simplex(6);
        for c in enumerate_reps(&k, 3, 4, None).unwrap() {
            assert!(boundary_twice(&c).is_zero(), "d^2 != 0 on {c}");
        }
    }

    #[test]
    fn action_is_free_and_orbits_have_size_r_factorial() {
        let k = SimplicialComplex::full_simplex(4);
        for c in enumerate_reps(&k, 3, 2, None).unwrap() {
            let orbit: std::collections::BTreeSet<_> = Permutation::all(3).iter().map(|p| permute(&c, p).0).collect();
            assert_eq!(orbit.len(), 6);
            for p in Permutation::all(3).iter().filter(|p| !p.is_identity()) {
                assert_ne!(permute(&c, p).0, c);
            }
        }
    }

    fn random_cell(rng: &mut ChaCha8Rng, r: usize) -> DeletedProductCell {
        use rand::Rng;
        let n = 9;
        let mut verts: Vec<usize> = (0..n).collect();
        rand::seq::SliceRandom::shuffle(verts.as_mut_slice(), rng);
        let mut factors = Vec::new();
        let mut pos = 0;
        for i in 0..r {
            let left = n - pos - (r - i - 1);
            let size = rng.gen_range(1..=left.min(3));
            factors.push(Simplex::new(verts[pos..pos + size].to_vec()).unwrap());
            pos += size;
        }
        DeletedProductCell::new(factors).unwrap()
    }

    proptest! {
        #[test]
        fn canonicalize_is_idempotent_and_consistent(seed in any::<u64>(), d in 1usize..5, r in 2usize..5) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c = random_cell(&mut rng, r);
            let (rep, twist) = canonicalize(&c, d);
            prop_assert!(rep.is_orbit_rep());
            prop_assert_eq!(canonicalize(&rep, d), (rep.clone(), 1));
            // A twisted value assignment is consistent along any path through the orbit.
            let pi = Permutation::random(r, &mut rng);
            let rho = Permutation::random(r, &mut rng);
            let (c1, s1) = permute(&c, &pi);
            let (c2, s2) = permute(&c1, &rho);
            let (c12, s12) = permute(&c, &pi.compose(&rho));
            prop_assert_eq!(&c2, &c12);
            prop_assert_eq!(s1 * s2, s12);
            let (rep2, twist2) = canonicalize(&c2, d);
            prop_assert_eq!(&rep2, &rep);
            let chi = coefficient_action(&pi.compose(&rho), d);
            // value(c2) = twist2·value(rep), value(c) = twist·value(rep), value(c2) = s12·chi·value(c)
            prop_assert_eq!(twist2, s12 * chi * twist);
        }
    }
}
