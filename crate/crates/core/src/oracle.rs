//! Brute-force r-Tverberg points of an affine map, independent of the
//! cocycle pipeline: every unordered tuple of pairwise disjoint faces is
//! enumerated from vertex assignments and tested through its barycentric
//! system, falling back to an exact linear program when that system is singular.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cocycle::EquivariantCochain;
use crate::complex::{Simplex, SimplicialComplex};
use crate::delprod::{enumerate_reps, DeletedProductCell};
use crate::error::{Error, Result};
use crate::exactgeo::{
    epsilon, format_rat, unraveled_sign, AffineSimplex, ExactAffineMap, Frame, Point, QMatrix, Rat, MAX_RETRIES,
};
use crate::prismatic::{epsilon_pris, phi_to_simplices, simplices_to_phi, PrismCell, PrismaticHeights};

/// Default cap on candidate tuples.
pub const DEFAULT_TUPLE_CAP: usize = 1_000_000;

/// A common point of the images of r pairwise disjoint faces, interior to each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TverbergHit {
    /// The faces in lexicographic order.
    pub faces: Vec<Simplex>,
    pub point: Point,
    /// Sorted face dimensions.
    pub kind: Vec<usize>,
    /// r-fold intersection sign of the faces in the order above.
    pub sign: i64,
}

/// JSON form of a hit.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct HitRecord {
    pub faces: Vec<Simplex>,
    pub point: Vec<String>,
    #[serde(rename = "type")]
    pub kind: Vec<usize>,
    pub sign: i64,
}

impl TverbergHit {
    pub fn record(&self) -> HitRecord {
        HitRecord {
            faces: self.faces.clone(),
            point: self.point.iter().map(format_rat).collect(),
            kind: self.kind.clone(),
            sign: self.sign,
        }
    }
}

/// Unordered tuples of `r` pairwise disjoint faces of `k` with dimension sum
/// `target`, each listed once with faces ordered by their smallest vertex.
pub fn candidate_tuples(k: &SimplicialComplex, r: usize, target: usize, cap: usize) -> Result<Vec<Vec<Simplex>>> {
    let want = target + r;
    let mut out = Vec::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    assign(k, r, want, 0, 0, &mut blocks, &mut out, cap)?;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn assign(
    k: &SimplicialComplex,
    r: usize,
    want: usize,
    v: usize,
    used: usize,
    blocks: &mut Vec<Vec<usize>>,
    out: &mut Vec<Vec<Simplex>>,
    cap: usize,
) -> Result<()> {
    if used == want {
        if blocks.len() == r {
            if out.len() >= cap {
                return Err(Error::ResourceCap(format!("more than {cap} candidate tuples")));
            }
            out.push(blocks.iter().map(|b| Simplex::new(b.clone()).expect("distinct vertices")).collect());
        }
        return Ok(());
    }
    if v == k.vertex_count() || used + (k.vertex_count() - v) < want {
        return Ok(());
    }
    // v unused
    assign(k, r, want, v + 1, used, blocks, out, cap)?;
    // v joins an open block
    for b in 0..blocks.len() {
        blocks[b].push(v);
        if k.contains(&Simplex::new(blocks[b].clone()).expect("distinct vertices")) {
            assign(k, r, want, v + 1, used + 1, blocks, out, cap)?;
        }
        blocks[b].pop();
    }
    // v opens a new block
    if blocks.len() < r {
        blocks.push(vec![v]);
        assign(k, r, want, v + 1, used + 1, blocks, out, cap)?;
        blocks.pop();
    }
    Ok(())
}

/// Rows: one `Σ λ = 1` per face, then `Σ_{face 1} λ f(v) - Σ_{face i} λ f(v) = 0`.
fn barycentric_system(faces: &[Simplex], f: &ExactAffineMap) -> (QMatrix, Vec<Rat>) {
    let d = f.d();
    let r = faces.len();
    let vars: usize = faces.iter().map(|s| s.vertices().len()).sum();
    let mut m = QMatrix::zeros(r + d * (r - 1), vars);
    let mut rhs = vec![Rat::zero(); r + d * (r - 1)];
    let mut col = 0;
    for (i, s) in faces.iter().enumerate() {
        rhs[i] = Rat::one();
        for &v in s.vertices() {
            m[(i, col)] = Rat::one();
            let p = f.image(v);
            for a in 0..d {
                if i == 0 {
                    for t in 1..r {
                        m[(r + (t - 1) * d + a, col)] = p[a].clone();
                    }
                } else {
                    m[(r + (i - 1) * d + a, col)] = -p[a].clone();
                }
            }
            col += 1;
        }
    }
    (m, rhs)
}

struct Tableau {
    a: Vec<Vec<Rat>>,
    b: Vec<Rat>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.a[row][col].clone();
        for x in self.a[row].iter_mut() {
            *x /= &p;
        }
        self.b[row] /= &p;
        for i in 0..self.a.len() {
            if i == row || self.a[i][col].is_zero() {
                continue;
            }
            let factor = self.a[i][col].clone();
            for j in 0..self.a[i].len() {
                if !self.a[row][j].is_zero() {
                    let delta = &factor * &self.a[row][j];
                    self.a[i][j] -= delta;
                }
            }
            let delta = &factor * &self.b[row];
            self.b[i] -= delta;
        }
        self.basis[row] = col;
    }

    /// Minimize `cost · x` over columns `< ncols` with Bland's rule.
    /// Returns `false` if unbounded.
    fn minimize(&mut self, cost: &[Rat], ncols: usize) -> bool {
        loop {
            let entering = (0..ncols).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let reduced: Rat =
                    &cost[j] - self.basis.iter().enumerate().map(|(i, &bj)| &cost[bj] * &self.a[i][j]).sum::<Rat>();
                reduced.is_negative()
            });
            let Some(j) = entering else {
                return true;
            };
            let mut leave: Option<(usize, Rat)> = None;
            for i in 0..self.a.len() {
                if !self.a[i][j].is_positive() {
                    continue;
                }
                let ratio = &self.b[i] / &self.a[i][j];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((i, _)) => self.pivot(i, j),
                None => return false,
            }
        }
    }
}

/// `max t` subject to `M(μ + t·1) = rhs`, `μ, t >= 0`; `None` if infeasible.
pub(crate) fn max_interior_margin(m: &QMatrix, rhs: &[Rat]) -> Option<Rat> {
    let (rows, n) = (m.rows(), m.cols());
    // columns: μ_0..μ_{n-1}, t, artificials
    let cols = n + 1 + rows;
    let mut a = vec![vec![Rat::zero(); cols]; rows];
    let mut b = rhs.to_vec();
    for i in 0..rows {
        let flip = b[i].is_negative();
        let s = if flip { -Rat::one() } else { Rat::one() };
        let mut row_sum = Rat::zero();
        for j in 0..n {
            a[i][j] = &s * &m[(i, j)];
            row_sum += &m[(i, j)];
        }
        a[i][n] = &s * row_sum;
        a[i][n + 1 + i] = Rat::one();
        if flip {
            b[i] = -b[i].clone();
        }
    }
    let mut t = Tableau { a, b, basis: (n + 1..cols).collect() };
    let phase1: Vec<Rat> = (0..cols).map(|j| if j > n { Rat::one() } else { Rat::zero() }).collect();
    t.minimize(&phase1, cols);
    let infeasibility: Rat = t.basis.iter().zip(&t.b).map(|(&j, x)| &phase1[j] * x).sum();
    if infeasibility.is_positive() {
        return None;
    }
    // drive artificials out of the basis; rows where that fails are redundant
    let mut i = 0;
    while i < t.a.len() {
        if t.basis[i] > n {
            match (0..=n).find(|&j| !t.a[i][j].is_zero()) {
                Some(j) => t.pivot(i, j),
                None => {
                    t.a.remove(i);
                    t.b.remove(i);
                    t.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }
    let phase2: Vec<Rat> = (0..cols).map(|j| if j == n { -Rat::one() } else { Rat::zero() }).collect();
    if !t.minimize(&phase2, n + 1) {
        // t <= 1 on the feasible set, so this cannot happen
        return None;
    }
    Some(t.basis.iter().zip(&t.b).filter(|(&j, _)| j == n).map(|(_, x)| x.clone()).sum())
}

/// Test one tuple. A boundary contact or a positive-dimensional intersection
/// violates general position and is reported as [`Error::Degenerate`].
pub fn examine_tuple(faces: &[Simplex], f: &ExactAffineMap) -> Result<Option<TverbergHit>> {
    let (m, rhs) = barycentric_system(faces, f);
    let Some(lambda) = m.solve(&rhs) else {
        return match max_interior_margin(&m, &rhs) {
            None => Ok(None),
            Some(_) => Err(Error::Degenerate(format!("tuple {faces:?} meets without a transverse intersection"))),
        };
    };
    if lambda.iter().any(Signed::is_negative) {
        return Ok(None);
    }
    if lambda.iter().any(Zero::is_zero) {
        return Err(Error::Degenerate(format!("tuple {faces:?} meets on a face boundary")));
    }
    let d = f.d();
    let mut point = vec![Rat::zero(); d];
    for (l, &v) in lambda.iter().zip(faces[0].vertices()) {
        for (a, x) in point.iter_mut().zip(f.image(v)) {
            *a += l * x;
        }
    }
    let frames: Vec<Frame> =
        faces.iter().map(|s| AffineSimplex::new(f.image_points(s), 1).map(|a| a.frame())).collect::<Result<_>>()?;
    let sign = unraveled_sign(&frames, 1)?;
    let mut kind: Vec<usize> = faces.iter().map(Simplex::dim).collect();
    kind.sort_unstable();
    Ok(Some(TverbergHit { faces: faces.to_vec(), point, kind, sign }))
}

/// Every r-Tverberg point of the affine map `f` on `k`.
pub fn enumerate_tverberg(k: &SimplicialComplex, r: usize, f: &ExactAffineMap, cap: usize) -> Result<Vec<TverbergHit>> {
    f.check_domain(k)?;
    if r < 2 {
        return Err(Error::Input("need r >= 2".into()));
    }
    let tuples = candidate_tuples(k, r, f.d() * (r - 1), cap)?;
    let found: Vec<Option<TverbergHit>> = tuples.par_iter().map(|t| examine_tuple(t, f)).collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().collect())
}

/// Histogram of hit types.
pub fn type_census(hits: &[TverbergHit]) -> BTreeMap<Vec<usize>, usize> {
    let mut out = BTreeMap::new();
    for h in hits {
        *out.entry(h.kind.clone()).or_insert(0) += 1;
    }
    out
}

/// Agreement between the oracle and a cocycle on top representatives.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CrossValidation {
    pub checked: usize,
    pub hits: usize,
    pub mismatches: Vec<String>,
}

impl CrossValidation {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Check `ε · (signed hit count) = φ(rep)` on every top representative.
pub fn cross_validate(
    k: &SimplicialComplex,
    r: usize,
    f: &ExactAffineMap,
    phi: &EquivariantCochain<DeletedProductCell>,
    cap: usize,
) -> Result<CrossValidation> {
    let d = f.d();
    let hits = enumerate_tverberg(k, r, f, cap)?;
    let mut signed: BTreeMap<DeletedProductCell, i64> = BTreeMap::new();
    for h in &hits {
        let cell = DeletedProductCell::new(h.faces.clone())?;
        *signed.entry(cell).or_insert(0) += h.sign;
    }
    let top = enumerate_reps(k, r, d * (r - 1), Some(cap))?;
    let mut out = CrossValidation { checked: top.len(), hits: hits.len(), mismatches: Vec::new() };
    for cell in &top {
        let count = signed.remove(cell).unwrap_or(0);
        let dims = cell.dims();
        let expected = if count == 0 { 0 } else { epsilon(d, &dims)? * count };
        if expected != phi.get(cell) {
            out.mismatches.push(format!("{cell}: oracle {expected}, cocycle {}", phi.get(cell)));
        }
    }
    for (cell, _) in signed {
        out.mismatches.push(format!("{cell}: hit outside the top representatives"));
    }
    Ok(out)
}

/// Cross-check a prismatic cocycle against the hits of the affine prismatic
/// map on `σ^N`; every hit must lie on colorful top simplices.
pub fn cross_validate_prismatic(
    heights: &PrismaticHeights,
    phi: &EquivariantCochain<PrismCell>,
    top_reps: &[PrismCell],
    hits: &[TverbergHit],
) -> Result<CrossValidation> {
    let scheme = heights.scheme();
    let eps = epsilon_pris(scheme.r(), scheme.k());
    let mut signed: BTreeMap<PrismCell, i64> = BTreeMap::new();
    let mut out = CrossValidation { checked: top_reps.len(), hits: hits.len(), mismatches: Vec::new() };
    for h in hits {
        match simplices_to_phi(&h.faces, scheme) {
            Ok(cell) if cell.dim() == scheme.m() && cell.is_orbit_rep() => {
                debug_assert_eq!(phi_to_simplices(&cell, scheme), h.faces);
                *signed.entry(cell).or_insert(0) += h.sign;
            }
            _ => out.mismatches.push(format!("hit on {:?} is not a colorful top tuple", h.faces)),
        }
    }
    for cell in top_reps {
        let expected = eps * signed.remove(cell).unwrap_or(0);
        if expected != phi.get(cell) {
            out.mismatches.push(format!("{cell}: oracle {expected}, cocycle {}", phi.get(cell)));
        }
    }
    Ok(out)
}

/// Vertex images on `σ^N`, `N = (d+1)(r-1)`: `d+1` clusters of `r-1` points
/// around the vertices of a d-simplex, plus its barycenter (last vertex).
/// All Tverberg points of such a map have type `{0} ∪ {d}^{r-1}`.
pub fn cluster_configuration(r: usize, d: usize, seed: u64) -> Result<(SimplicialComplex, ExactAffineMap)> {
    if r < 2 || d < 1 {
        return Err(Error::Input("need r >= 2 and d >= 1".into()));
    }
    let n = (d + 1) * (r - 1);
    let k = SimplicialComplex::full_simplex(n);
    let scale = 10_000 * (d as i64 + 1);
    let spread = 50;
    let mut last = String::new();
    for nonce in 0..=MAX_RETRIES {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(nonce);
        let mut coords: Vec<Vec<i64>> = Vec::with_capacity(n + 1);
        for corner in 0..=d {
            for _ in 0..r - 1 {
                coords.push(
                    (0..d)
                        .map(|a| {
                            let base = if corner > 0 && a == corner - 1 { scale } else { 0 };
                            base + rng.gen_range(-spread..=spread)
                        })
                        .collect(),
                );
            }
        }
        coords.push(vec![scale / (d as i64 + 1); d]);
        let f = match ExactAffineMap::from_ints(d, &coords) {
            Ok(f) => f,
            Err(e) => {
                last = e.to_string();
                continue;
            }
        };
        let faces_ok = k.faces().filter(|s| s.dim() <= d).all(|s| f.image_simplex(s).is_ok());
        if faces_ok {
            return Ok((k, f));
        }
        last = "degenerate face".into();
    }
    Err(Error::Degenerate(format!("cluster configuration: retry budget exhausted (last: {last})")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::intersection_cocycle;
    use crate::exactgeo::{r_fold_sign, rat, sample_generic_map};

    #[test]
    fn crossing_segments_have_one_hit() {
        let k = SimplicialComplex::from_maximal(4, &[vec![0, 1], vec![2, 3]]).unwrap();
        let f = ExactAffineMap::from_ints(2, &[vec![-1, 0], vec![1, 0], vec![0, -1], vec![0, 1]]).unwrap();
        let hits = enumerate_tverberg(&k, 2, &f, DEFAULT_TUPLE_CAP).unwrap();
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].kind, vec![1, 1]);
        assert_eq!(hits[0].point, vec![rat(0), rat(0)]);
        assert_eq!(hits[0].sign, 1);
        let phi = intersection_cocycle(&k, 2, &f).unwrap();
        assert!(cross_validate(&k, 2, &f, &phi, DEFAULT_TUPLE_CAP).unwrap().passed());
        let mut bad = phi.clone();
        let (cell, v) = phi.support().next().map(|(c, v)| (c.clone(), v)).unwrap();
        bad.set(cell, -v);
        assert!(!cross_validate(&k, 2, &f, &bad, DEFAULT_TUPLE_CAP).unwrap().passed());
    }

    #[test]
    fn endpoint_on_line_outside_other_segment_is_no_hit() {
        let k = SimplicialComplex::from_maximal(4, &[vec![0, 1], vec![2, 3]]).unwrap();
        let f = ExactAffineMap::from_ints(2, &[vec![0, 0], vec![1, 0], vec![1, 1], vec![1, 2]]).unwrap();
        assert!(enumerate_tverberg(&k, 2, &f, DEFAULT_TUPLE_CAP).unwrap().is_empty());
    }

    #[test]
    fn candidate_tuples_match_orbit_representatives() {
        for (k, r, n) in [
            (SimplicialComplex::complete_graph(5), 2, 2),
            (SimplicialComplex::full_simplex(4), 3, 2),
            (SimplicialComplex::simplex_skeleton(6, 2), 2, 4),
        ] {
            let tuples = candidate_tuples(&k, r, n, DEFAULT_TUPLE_CAP).unwrap();
            let mut cells: Vec<DeletedProductCell> =
                tuples.into_iter().map(|t| DeletedProductCell::new(t).unwrap()).collect();
            cells.sort();
            assert_eq!(cells, enumerate_reps(&k, r, n, None).unwrap());
        }
        let k = SimplicialComplex::simplex_skeleton(6, 2);
        assert!(matches!(candidate_tuples(&k, 2, 4, 10), Err(Error::ResourceCap(_))));
    }

    #[test]
    fn tverberg_on_a_line() {
        let k = SimplicialComplex::full_simplex(4);
        for seed in 0..10 {
            let f = sample_generic_map(&k, 1, seed, 1000).unwrap();
            let hits = enumerate_tverberg(&k, 3, &f, DEFAULT_TUPLE_CAP).unwrap();
            assert!(!hits.is_empty(), "seed {seed}");
            let phi = intersection_cocycle(&k, 3, &f).unwrap();
            assert!(cross_validate(&k, 3, &f, &phi, DEFAULT_TUPLE_CAP).unwrap().passed());
        }
    }

    #[test]
    fn hit_signs_match_the_determinant_route() {
        let k = SimplicialComplex::full_simplex(6);
        let f = sample_generic_map(&k, 2, 3, 10_000).unwrap();
        let hits = enumerate_tverberg(&k, 3, &f, DEFAULT_TUPLE_CAP).unwrap();
        assert!(!hits.is_empty());
        for h in &hits {
            let simplices: Vec<AffineSimplex> = h.faces.iter().map(|s| f.image_simplex(s).unwrap()).collect();
            assert_eq!(h.sign, r_fold_sign(&simplices).unwrap());
        }
    }

    #[test]
    fn lp_margin() {
        // λ_0 + λ_1 = 1, λ_0 - λ_1 = 0: the midpoint, margin 1/2
        let m = QMatrix::from_i64(&[vec![1, 1], vec![1, -1]]);
        assert_eq!(max_interior_margin(&m, &[rat(1), rat(0)]), Some(Rat::new(1.into(), 2.into())));
        // λ_0 + λ_1 = 1, λ_0 + λ_1 = 2: infeasible
        let m = QMatrix::from_i64(&[vec![1, 1], vec![1, 1]]);
        assert_eq!(max_interior_margin(&m, &[rat(1), rat(2)]), None);
        // λ_0 + λ_1 + λ_2 = 1 twice, λ_2 = 0 forced by a redundant pair
        let m = QMatrix::from_i64(&[vec![1, 1, 1], vec![1, 1, 1], vec![0, 0, 1]]);
        assert_eq!(max_interior_margin(&m, &[rat(1), rat(1), rat(0)]), Some(rat(0)));
    }

    #[test]
    fn cluster_census() {
        for (r, d) in [(2, 1), (2, 2), (3, 1), (3, 2)] {
            let (k, f) = cluster_configuration(r, d, 1).unwrap();
            let hits = enumerate_tverberg(&k, r, &f, DEFAULT_TUPLE_CAP).unwrap();
            assert!(!hits.is_empty());
            let census = type_census(&hits);
            let mut expected = vec![0];
            expected.extend(std::iter::repeat(d).take(r - 1));
            assert_eq!(census.keys().cloned().collect::<Vec<_>>(), vec![expected], "r = {r}, d = {d}");
        }
        assert!(type_census(&[]).is_empty());
    }

    #[test]
    fn empty_intersections_validate_trivially() {
        let k = SimplicialComplex::complete_graph(4);
        let f = ExactAffineMap::from_ints(2, &[vec![0, 0], vec![10, 0], vec![0, 10], vec![3, 3]]).unwrap();
        let hits = enumerate_tverberg(&k, 2, &f, DEFAULT_TUPLE_CAP).unwrap();
        assert!(hits.is_empty());
        let phi = intersection_cocycle(&k, 2, &f).unwrap();
        assert!(phi.is_zero());
        assert!(cross_validate(&k, 2, &f, &phi, DEFAULT_TUPLE_CAP).unwrap().passed());
    }
}
