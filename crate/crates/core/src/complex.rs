//! Finite abstract simplicial complexes.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = usize;

/// A nonempty simplex, stored as its strictly increasing vertex list.
///
/// The derived ordering is lexicographic on the vertex list, which is the
/// order used for orbit representatives throughout the crate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Simplex(Vec<Vertex>);

impl Simplex {
    pub fn new(mut vertices: Vec<Vertex>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::Input("empty simplex".into()));
        }
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Input(format!("duplicate vertex in simplex {vertices:?}")));
        }
        Ok(Simplex(vertices))
    }

    /// Caller guarantees the list is strictly increasing and nonempty.
    pub(crate) fn from_sorted(vertices: Vec<Vertex>) -> Self {
        debug_assert!(!vertices.is_empty() && vertices.windows(2).all(|w| w[0] < w[1]));
        Simplex(vertices)
    }

    pub fn vertex(v: Vertex) -> Self {
        Simplex(vec![v])
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn is_disjoint(&self, other: &Simplex) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    pub fn contains(&self, other: &Simplex) -> bool {
        other.0.iter().all(|v| self.0.binary_search(v).is_ok())
    }

    /// The facet obtained by deleting the `i`-th vertex. Requires `dim >= 1`.
    pub fn facet(&self, i: usize) -> Simplex {
        let mut v = self.0.clone();
        v.remove(i);
        Simplex(v)
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

/// A simplex with an orientation relative to increasing vertex order.
/// Dimension-0 simplices carry the sign as a point weight.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrientedSimplex {
    pub simplex: Simplex,
    pub sign: i64,
}

impl OrientedSimplex {
    pub fn new(simplex: Simplex, sign: i64) -> Self {
        assert!(sign == 1 || sign == -1, "orientation sign must be +1 or -1");
        OrientedSimplex { simplex, sign }
    }

    pub fn positive(simplex: Simplex) -> Self {
        OrientedSimplex { simplex, sign: 1 }
    }
}

/// Formal integer combination of terms; zero coefficients are dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedSum<T: Ord> {
    terms: BTreeMap<T, i64>,
}

impl<T: Ord> Default for SignedSum<T> {
    fn default() -> Self {
        SignedSum { terms: BTreeMap::new() }
    }
}

impl<T: Ord> SignedSum<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, term: T, coeff: i64) {
        if coeff == 0 {
            return;
        }
        match self.terms.entry(term) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if *e.get() == 0 {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, term: &T) -> i64 {
        self.terms.get(term).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&T, i64)> {
        self.terms.iter().map(|(t, c)| (t, *c))
    }
}

impl<T: Ord> FromIterator<(T, i64)> for SignedSum<T> {
    fn from_iter<I: IntoIterator<Item = (T, i64)>>(iter: I) -> Self {
        let mut s = SignedSum::new();
        for (t, c) in iter {
            s.add(t, c);
        }
        s
    }
}

/// Alternating sum of facets; facet `i` carries `(-1)^i` times the input sign.
pub fn combinatorial_boundary(s: &OrientedSimplex) -> Result<SignedSum<Simplex>> {
    let dim = s.simplex.dim();
    if dim == 0 {
        return Err(Error::Input("boundary of a 0-simplex".into()));
    }
    Ok((0..=dim)
        .map(|i| {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            (s.simplex.facet(i), sign * s.sign)
        })
        .collect())
}

/// Boundary of a formal sum of simplices (all of dimension at least 1).
pub fn boundary_of_sum(c: &SignedSum<Simplex>) -> Result<SignedSum<Simplex>> {
    let mut out = SignedSum::new();
    for (s, coeff) in c.iter() {
        for (f, sign) in combinatorial_boundary(&OrientedSimplex::positive(s.clone()))?.iter() {
            out.add(f.clone(), sign * coeff);
        }
    }
    Ok(out)
}

/// On-disk form: `{"vertex_count": n, "maximal_simplices": [[...], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ComplexFile {
    pub vertex_count: usize,
    pub maximal_simplices: Vec<Vec<Vertex>>,
}

/// A finite simplicial complex on vertices `0..vertex_count`, stored with its
/// full face set grouped by dimension.
#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    vertex_count: usize,
    by_dim: Vec<Vec<Simplex>>,
    face_set: HashSet<Simplex>,
}

impl SimplicialComplex {
    /// Downward closure of the given simplices. Every vertex id below
    /// `vertex_count` is a face, listed or not.
    pub fn from_maximal(vertex_count: usize, maximal: &[Vec<Vertex>]) -> Result<Self> {
        let mut faces: BTreeSet<Simplex> = (0..vertex_count).map(Simplex::vertex).collect();
        for raw in maximal {
            if let Some(&v) = raw.iter().find(|&&v| v >= vertex_count) {
                return Err(Error::Input(format!("vertex {v} out of range (vertex_count = {vertex_count})")));
            }
            let s = Simplex::new(raw.clone())?;
            if s.dim() >= 25 {
                return Err(Error::Input(format!("simplex of dimension {} is too large", s.dim())));
            }
            let verts = s.vertices();
            let n = verts.len();
            for mask in 1u32..(1u32 << n) {
                let sub: Vec<Vertex> = (0..n).filter(|b| mask & (1 << b) != 0).map(|b| verts[b]).collect();
                faces.insert(Simplex::from_sorted(sub));
            }
        }
        let top = faces.iter().map(Simplex::dim).max().unwrap_or(0);
        let mut by_dim = vec![Vec::new(); if faces.is_empty() { 0 } else { top + 1 }];
        for f in &faces {
            by_dim[f.dim()].push(f.clone());
        }
        let face_set = faces.into_iter().collect();
        Ok(SimplicialComplex { vertex_count, by_dim, face_set })
    }

    pub fn from_file(file: &ComplexFile) -> Result<Self> {
        Self::from_maximal(file.vertex_count, &file.maximal_simplices)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ComplexFile = serde_json::from_str(text).map_err(|e| Error::Input(format!("complex file: {e}")))?;
        Self::from_file(&file)
    }

    /// The full simplex on `n + 1` vertices.
    pub fn full_simplex(n: usize) -> Self {
        Self::from_maximal(n + 1, &[(0..=n).collect()]).expect("valid simplex")
    }

    /// The `q`-skeleton of the full simplex on `n + 1` vertices.
    pub fn simplex_skeleton(n: usize, q: usize) -> Self {
        let maximal = k_subsets(n + 1, q + 1);
        Self::from_maximal(n + 1, &maximal).expect("valid skeleton")
    }

    pub fn complete_graph(n: usize) -> Self {
        Self::simplex_skeleton(n - 1, 1)
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let edges: Vec<Vec<Vertex>> = (0..a).flat_map(|i| (0..b).map(move |j| vec![i, a + j])).collect();
        Self::from_maximal(a + b, &edges).expect("valid bipartite graph")
    }

    pub fn cycle(n: usize) -> Self {
        let edges: Vec<Vec<Vertex>> = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
        Self::from_maximal(n, &edges).expect("valid cycle")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Dimension of the complex; 0 for a vertex set, and also for the empty complex.
    pub fn dim(&self) -> usize {
        self.by_dim.len().saturating_sub(1)
    }

    /// All `q`-faces in lexicographic order.
    pub fn faces_of_dim(&self, q: usize) -> &[Simplex] {
        self.by_dim.get(q).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn faces(&self) -> impl Iterator<Item = &Simplex> {
        self.by_dim.iter().flatten()
    }

    pub fn face_count(&self) -> usize {
        self.face_set.len()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.face_set.contains(s)
    }

    /// Inclusion-maximal faces in lexicographic order.
    pub fn maximal_simplices(&self) -> Vec<Simplex> {
        let mut out: Vec<Simplex> =
            self.faces().filter(|f| self.faces_of_dim(f.dim() + 1).iter().all(|g| !g.contains(f))).cloned().collect();
        out.sort();
        out
    }

    pub fn to_file(&self) -> ComplexFile {
        ComplexFile {
            vertex_count: self.vertex_count,
            maximal_simplices: self.maximal_simplices().into_iter().map(|s| s.vertices().to_vec()).collect(),
        }
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            if n - v < k - cur.len() {
                break;
            }
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[usize]) -> Simplex {
        Simplex::new(v.to_vec()).unwrap()
    }

    #[test]
    fn triangle_closure() {
        let k = SimplicialComplex::from_maximal(3, &[vec![0, 1, 2]]).unwrap();
        assert_eq!(k.faces_of_dim(0).len(), 3);
        assert_eq!(k.faces_of_dim(1).len(), 3);
        assert_eq!(k.faces_of_dim(2).len(), 1);
        assert_eq!(k.face_count(), 7);
    }

    #[test]
    fn k5_has_ten_edges_no_triangles() {
        let k = SimplicialComplex::complete_graph(5);
        assert_eq!(k.faces_of_dim(0).len(), 5);
        assert_eq!(k.faces_of_dim(1).len(), 10);
        assert!(k.faces_of_dim(2).is_empty());
    }

    #[test]
    fn full_simplex_counts() {
        let k = SimplicialComplex::full_simplex(4);
        let counts: Vec<usize> = (0..=4).map(|q| k.faces_of_dim(q).len()).collect();
        assert_eq!(counts, vec![5, 10, 10, 5, 1]);
        let skel = SimplicialComplex::simplex_skeleton(6, 2);
        assert_eq!(skel.faces_of_dim(2).len(), 35);
        assert_eq!(skel.dim(), 2);
    }

    #[test]
    fn faces_are_lexicographic() {
        let k = SimplicialComplex::full_simplex(3);
        let edges = k.faces_of_dim(1);
        assert!(edges.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(edges[0], s(&[0, 1]));
    }

    #[test]
    fn ingestion_errors() {
        assert!(SimplicialComplex::from_maximal(3, &[vec![0, 0, 1]]).is_err());
        assert!(SimplicialComplex::from_maximal(3, &[vec![0, 3]]).is_err());
        assert!(SimplicialComplex::from_json("{\"vertex_count\": 2}").is_err());
    }

    #[test]
    fn json_round_trip() {
        let k =
            SimplicialComplex::from_json(r#"{ "vertex_count": 4, "maximal_simplices": [[2,1,0], [2, 3]] }"#).unwrap();
        assert_eq!(k.maximal_simplices(), vec![s(&[0, 1, 2]), s(&[2, 3])]);
        let again = SimplicialComplex::from_file(&k.to_file()).unwrap();
        assert_eq!(again.face_count(), k.face_count());
    }

    #[test]
    fn boundary_examples() {
        let seg = combinatorial_boundary(&OrientedSimplex::positive(s(&[0, 1]))).unwrap();
        assert_eq!(seg.coefficient(&s(&[1])), 1);
        assert_eq!(seg.coefficient(&s(&[0])), -1);
        let tri = combinatorial_boundary(&OrientedSimplex::positive(s(&[0, 1, 2]))).unwrap();
        assert_eq!(tri.coefficient(&s(&[1, 2])), 1);
        assert_eq!(tri.coefficient(&s(&[0, 2])), -1);
        assert_eq!(tri.coefficient(&s(&[0, 1])), 1);
        let neg = combinatorial_boundary(&OrientedSimplex::new(s(&[0, 1]), -1)).unwrap();
        assert_eq!(neg.coefficient(&s(&[1])), -1);
        assert!(combinatorial_boundary(&OrientedSimplex::positive(s(&[3]))).is_err());
    }

    #[test]
    fn boundary_squared_vanishes() {
        let k = SimplicialComplex::full_simplex(5);
        for q in 2..=5 {
            for f in k.faces_of_dim(q) {
                let once: SignedSum<Simplex> = [(f.clone(), 1)].into_iter().collect();
                let twice = boundary_of_sum(&boundary_of_sum(&once).unwrap()).unwrap();
                assert!(twice.is_zero(), "d^2 != 0 on {f}");
            }
        }
    }
}
