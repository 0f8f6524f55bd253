//! Prismatic maps of the colorful complex and their deleted fiber product.
//!
//! Vertex `v_{i,j}` (label `i ∈ 1..=r`, color `j ∈ 0..=m`) has id
//! `j·r + (i-1)`. The prism `σ^m × σ^k` sits in `Q^{m+k} = Q^{rk}` with base
//! coordinates first: `u_0 = 0`, `u_j = e_j`, heights in the last `k`
//! coordinates, and `σ^k` realized the same way.
//!
//! A cell of the configuration space `X` is a pair `(J, π)` of an increasing
//! color set and one permutation per color; its `i`-th simplex is
//! `τ_i = {v_{π_j(i), j} : j ∈ J}`. The symmetric group acts on the right,
//! `π_j ↦ π_j ∘ π`, with coefficient action `(sign π)^k`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cocycle::{EquivariantCochain, EquivariantComplex};
use crate::complex::{k_subsets, SignedSum, Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::exactgeo::{
    affine_hull_intersection_dim, epsilon_rk, format_rat, hulls_meet, intersection_point, parse_rat, r_fold_sign,
    AffineSimplex, ExactAffineMap, Point, QMatrix, Rat, MAX_RETRIES,
};
use crate::obstruction::{solve_system, ObstructionSystem};
use crate::perm::Permutation;

/// Default cap on top-cell orbits of `X`.
pub const DEFAULT_MAX_ORBITS: u128 = 100_000;

/// Color classes `C_0, …, C_m` of `r` vertices each, `m = (r-1)k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorScheme {
    r: usize,
    k: usize,
}

impl ColorScheme {
    pub fn new(r: usize, k: usize) -> Result<Self> {
        if r < 2 || k < 1 {
            return Err(Error::Input(format!("need r >= 2 and k >= 1, got r = {r}, k = {k}")));
        }
        Ok(ColorScheme { r, k })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Dimension of the base simplex, `(r-1)k`.
    pub fn m(&self) -> usize {
        (self.r - 1) * self.k
    }

    /// `N = (rk+1)(r-1)`; the vertices span `σ^N`.
    pub fn big_n(&self) -> usize {
        (self.r * self.k + 1) * (self.r - 1)
    }

    /// Ambient dimension `rk = m + k`.
    pub fn d(&self) -> usize {
        self.r * self.k
    }

    pub fn vertex_count(&self) -> usize {
        self.r * (self.m() + 1)
    }

    /// Id of `v_{i+1, j}` (0-based label `i`).
    pub fn vertex(&self, i: usize, j: usize) -> usize {
        j * self.r + i
    }

    pub fn color(&self, v: usize) -> usize {
        v / self.r
    }

    /// 0-based label within the color class.
    pub fn label(&self, v: usize) -> usize {
        v % self.r
    }

    pub fn class(&self, j: usize) -> Vec<usize> {
        (0..self.r).map(|i| self.vertex(i, j)).collect()
    }

    /// Base vertex `u_j` in `Q^m`.
    pub fn base_vertex(&self, j: usize) -> Point {
        let mut p = vec![Rat::zero(); self.m()];
        if j > 0 {
            p[j - 1] = Rat::one();
        }
        p
    }
}

fn checked_pow(base: u128, exp: usize) -> Option<u128> {
    (0..exp).try_fold(1u128, |acc, _| acc.checked_mul(base))
}

fn factorial(r: usize) -> u128 {
    (1..=r as u128).product()
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// `C = C_0 * ⋯ * C_m`: all simplices with at most one vertex per color.
pub fn build_colorful_complex(scheme: &ColorScheme) -> Result<SimplicialComplex> {
    let (r, m) = (scheme.r, scheme.m());
    let tops = checked_pow(r as u128, m + 1).filter(|&t| t <= 1_000_000);
    if tops.is_none() {
        return Err(Error::ResourceCap(format!("r^(m+1) colorful top simplices for r = {r}, m = {m}")));
    }
    let mut maximal = Vec::new();
    let mut labels = vec![0usize; m + 1];
    loop {
        maximal.push(labels.iter().enumerate().map(|(j, &i)| scheme.vertex(i, j)).collect());
        let Some(pos) = (0..=m).rev().find(|&j| labels[j] + 1 < r) else {
            break;
        };
        labels[pos] += 1;
        labels[pos + 1..].iter_mut().for_each(|x| *x = 0);
    }
    SimplicialComplex::from_maximal(scheme.vertex_count(), &maximal)
}

/// A simplex of `X`: colors `J` (increasing) and one permutation per color.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PrismCell {
    colors: Vec<usize>,
    perms: Vec<Permutation>,
}

impl PrismCell {
    pub fn new(colors: Vec<usize>, perms: Vec<Permutation>) -> Result<Self> {
        if colors.is_empty() || colors.len() != perms.len() {
            return Err(Error::Input("a prism cell needs one permutation per color".into()));
        }
        if colors.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Input(format!("colors {colors:?} must be strictly increasing")));
        }
        let r = perms[0].len();
        if perms.iter().any(|p| p.len() != r) {
            return Err(Error::Input("permutations of different degrees".into()));
        }
        Ok(PrismCell { colors, perms })
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn perms(&self) -> &[Permutation] {
        &self.perms
    }

    pub fn dim(&self) -> usize {
        self.colors.len() - 1
    }

    pub fn is_orbit_rep(&self) -> bool {
        self.perms[0].is_identity()
    }
}

impl fmt::Display for PrismCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.colors.iter().zip(&self.perms).map(|(j, p)| format!("{j}:{p}")).collect();
        write!(f, "{{{}}}", parts.join(" "))
    }
}

/// `Φ`: the r pairwise disjoint colorful simplices of a cell.
pub fn phi_to_simplices(cell: &PrismCell, scheme: &ColorScheme) -> Vec<Simplex> {
    (0..scheme.r)
        .map(|i| {
            let verts = cell.colors.iter().zip(&cell.perms).map(|(&j, p)| scheme.vertex(p.apply(i), j)).collect();
            Simplex::new(verts).expect("one vertex per color")
        })
        .collect()
}

/// `Φ^{-1}`: recover `(J, π)` from r pairwise disjoint colorful simplices over one base face.
pub fn simplices_to_phi(simplices: &[Simplex], scheme: &ColorScheme) -> Result<PrismCell> {
    if simplices.len() != scheme.r {
        return Err(Error::Input(format!("expected {} simplices", scheme.r)));
    }
    let colors_of = |s: &Simplex| -> Vec<usize> { s.vertices().iter().map(|&v| scheme.color(v)).collect() };
    let colors = colors_of(&simplices[0]);
    let mut images = vec![vec![usize::MAX; scheme.r]; colors.len()];
    for (i, s) in simplices.iter().enumerate() {
        if s.vertices().iter().any(|&v| v >= scheme.vertex_count()) {
            return Err(Error::Input(format!("{s} has a vertex outside the scheme")));
        }
        if colors_of(s) != colors || colors.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Input(format!("{s} is not colorful over the colors {colors:?}")));
        }
        for (pos, &v) in s.vertices().iter().enumerate() {
            images[pos][i] = scheme.label(v);
        }
    }
    let perms = images.into_iter().map(Permutation::from_images).collect::<Result<Vec<_>>>()?;
    PrismCell::new(colors, perms)
}

/// Right action `π_j ↦ π_j ∘ π`.
pub fn group_action_x(cell: &PrismCell, pi: &Permutation) -> PrismCell {
    PrismCell { colors: cell.colors.clone(), perms: cell.perms.iter().map(|p| p.compose(pi)).collect() }
}

/// Orbit representative (first permutation the identity) and the twist
/// `(sign π)^k` with `value(cell) = twist · value(rep)`.
pub fn canonicalize_x(cell: &PrismCell, k: usize) -> (PrismCell, i64) {
    let first = &cell.perms[0];
    let rep = group_action_x(cell, &first.inverse());
    (rep, first.sign_pow(k))
}

/// All `q`-cells of `X`.
pub fn cells_of_x(scheme: &ColorScheme, q: usize) -> Result<Vec<PrismCell>> {
    cells_inner(scheme, q, false, None)
}

/// Orbit representatives of the `q`-cells, failing once their number exceeds `cap`.
pub fn reps_of_x(scheme: &ColorScheme, q: usize, cap: Option<u128>) -> Result<Vec<PrismCell>> {
    cells_inner(scheme, q, true, cap)
}

/// Number of `q`-cell orbits, `C(m+1, q+1)·(r!)^q`, if it fits.
pub fn orbit_count(scheme: &ColorScheme, q: usize) -> Option<u128> {
    checked_pow(factorial(scheme.r), q)?.checked_mul(binomial(scheme.m() + 1, q + 1))
}

fn cells_inner(scheme: &ColorScheme, q: usize, reps: bool, cap: Option<u128>) -> Result<Vec<PrismCell>> {
    let m = scheme.m();
    if q > m {
        return Err(Error::Input(format!("cells of X have dimension at most {m}")));
    }
    let count = if reps {
        orbit_count(scheme, q)
    } else {
        orbit_count(scheme, q).and_then(|c| c.checked_mul(factorial(scheme.r)))
    };
    let limit = cap.unwrap_or(u128::MAX).min(10_000_000);
    match count {
        Some(c) if c <= limit => {}
        _ => {
            return Err(Error::ResourceCap(format!(
                "{} {q}-cells of X for r = {}, k = {} exceeds the cap of {limit}",
                count.map_or_else(|| "more than 2^128".to_string(), |c| c.to_string()),
                scheme.r,
                scheme.k
            )))
        }
    }
    let all = Permutation::all(scheme.r);
    let mut out = Vec::new();
    for colors in k_subsets(m + 1, q + 1) {
        let free = if reps { q } else { q + 1 };
        let mut idx = vec![0usize; free];
        loop {
            let mut perms = Vec::with_capacity(q + 1);
            if reps {
                perms.push(Permutation::identity(scheme.r));
            }
            perms.extend(idx.iter().map(|&t| all[t].clone()));
            out.push(PrismCell { colors: colors.clone(), perms });
            let Some(pos) = (0..free).rev().find(|&p| idx[p] + 1 < all.len()) else {
                break;
            };
            idx[pos] += 1;
            idx[pos + 1..].iter_mut().for_each(|x| *x = 0);
        }
    }
    Ok(out)
}

/// `X` as an equivariant complex: simplicial boundary dropping colors.
#[derive(Clone, Copy, Debug)]
pub struct PrismaticSpace {
    pub scheme: ColorScheme,
}

impl EquivariantComplex for PrismaticSpace {
    type Cell = PrismCell;

    fn cell_dim(&self, cell: &PrismCell) -> usize {
        cell.dim()
    }

    fn boundary(&self, cell: &PrismCell) -> SignedSum<PrismCell> {
        let mut out = SignedSum::new();
        if cell.colors.len() < 2 {
            return out;
        }
        for t in 0..cell.colors.len() {
            let mut colors = cell.colors.clone();
            let mut perms = cell.perms.clone();
            colors.remove(t);
            perms.remove(t);
            out.add(PrismCell { colors, perms }, if t % 2 == 0 { 1 } else { -1 });
        }
        out
    }

    fn canonicalize(&self, cell: &PrismCell) -> (PrismCell, i64) {
        canonicalize_x(cell, self.scheme.k)
    }
}

/// Interior points `h(v_{i,j})` of `σ^k`, indexed by vertex id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrismaticHeights {
    scheme: ColorScheme,
    heights: Vec<Point>,
}

/// On-disk form: `{"r": r, "k": k, "heights": {"i,j": ["num/den", ...]}}`
/// with `i` in `1..=r` and `j` in `0..=m`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct HeightsFile {
    pub r: usize,
    pub k: usize,
    pub heights: BTreeMap<String, Vec<String>>,
}

fn in_open_simplex(p: &[Rat]) -> bool {
    p.iter().all(Signed::is_positive) && p.iter().sum::<Rat>() < Rat::one()
}

impl PrismaticHeights {
    pub fn new(scheme: ColorScheme, heights: Vec<Point>) -> Result<Self> {
        if heights.len() != scheme.vertex_count() {
            return Err(Error::Input(format!("expected {} heights, got {}", scheme.vertex_count(), heights.len())));
        }
        for (v, h) in heights.iter().enumerate() {
            if h.len() != scheme.k || !in_open_simplex(h) {
                return Err(Error::Input(format!(
                    "height of v_{{{},{}}} is not interior to σ^{}",
                    scheme.label(v) + 1,
                    scheme.color(v),
                    scheme.k
                )));
            }
        }
        Ok(PrismaticHeights { scheme, heights })
    }

    pub fn scheme(&self) -> &ColorScheme {
        &self.scheme
    }

    pub fn height(&self, v: usize) -> &Point {
        &self.heights[v]
    }

    pub fn heights(&self) -> &[Point] {
        &self.heights
    }

    /// Vertex images `(u_j, h(v))` in `Q^{rk}`.
    pub fn vertex_images(&self) -> Vec<Point> {
        (0..self.scheme.vertex_count())
            .map(|v| {
                let mut p = self.scheme.base_vertex(self.scheme.color(v));
                p.extend(self.heights[v].iter().cloned());
                p
            })
            .collect()
    }

    /// The affine prismatic map on all of `σ^N`.
    pub fn affine_map(&self) -> Result<ExactAffineMap> {
        ExactAffineMap::new(self.scheme.d(), self.vertex_images())
    }

    pub fn from_file(file: &HeightsFile) -> Result<Self> {
        let scheme = ColorScheme::new(file.r, file.k)?;
        let mut heights = vec![None; scheme.vertex_count()];
        for (key, vals) in &file.heights {
            let bad = || Error::Input(format!("bad height key {key:?}; expected \"i,j\""));
            let (i, j) = key.split_once(',').ok_or_else(bad)?;
            let i: usize = i.trim().parse().map_err(|_| bad())?;
            let j: usize = j.trim().parse().map_err(|_| bad())?;
            if i == 0 || i > scheme.r || j > scheme.m() {
                return Err(bad());
            }
            heights[scheme.vertex(i - 1, j)] = Some(vals.iter().map(|s| parse_rat(s)).collect::<Result<Point>>()?);
        }
        let heights = heights
            .into_iter()
            .enumerate()
            .map(|(v, h)| {
                h.ok_or_else(|| Error::Input(format!("missing height for {},{}", scheme.label(v) + 1, scheme.color(v))))
            })
            .collect::<Result<_>>()?;
        Self::new(scheme, heights)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: HeightsFile = serde_json::from_str(text).map_err(|e| Error::Input(format!("heights file: {e}")))?;
        Self::from_file(&file)
    }

    pub fn to_file(&self) -> HeightsFile {
        let heights = self
            .heights
            .iter()
            .enumerate()
            .map(|(v, h)| {
                (format!("{},{}", self.scheme.label(v) + 1, self.scheme.color(v)), h.iter().map(format_rat).collect())
            })
            .collect();
        HeightsFile { r: self.scheme.r, k: self.scheme.k, heights }
    }
}

fn image_sets(cell: &PrismCell, scheme: &ColorScheme, images: &[Point]) -> Vec<Vec<Point>> {
    phi_to_simplices(cell, scheme).iter().map(|s| s.vertices().iter().map(|&v| images[v].clone()).collect()).collect()
}

/// `ε^PRIS_{r,k} = ε_{r,k} · (-1)^{k²(r-1)C(r+1,2) + k(r-1)}`.
pub fn epsilon_pris(r: usize, k: usize) -> i64 {
    let e = k * k * (r - 1) * (r + 1) * r / 2 + k * (r - 1);
    epsilon_rk(r, k) * if e % 2 == 0 { 1 } else { -1 }
}

/// `ε^PRIS · f(τ_1)·…·f(τ_r)` on one top cell, with the simplices oriented by
/// increasing color.
pub fn prismatic_cell_value(heights: &PrismaticHeights, images: &[Point], cell: &PrismCell) -> Result<i64> {
    let scheme = heights.scheme;
    match populated(&image_sets(cell, &scheme, images))? {
        None => Ok(0),
        Some(simplices) => Ok(epsilon_pris(scheme.r, scheme.k) * r_fold_sign(&simplices)?),
    }
}

/// The image simplices of a top cell if they share an interior point. Image
/// hulls may be parallel (the prism forces this), which counts as no
/// intersection; hulls that meet must do so transversely.
fn populated(sets: &[Vec<Point>]) -> Result<Option<Vec<AffineSimplex>>> {
    let refs: Vec<&[Point]> = sets.iter().map(Vec::as_slice).collect();
    if !hulls_meet(&refs) {
        return Ok(None);
    }
    let simplices: Vec<AffineSimplex> = sets.iter().map(|p| AffineSimplex::new(p.clone(), 1)).collect::<Result<_>>()?;
    Ok(intersection_point(&simplices)?.map(|_| simplices))
}

/// Sign of the pairwise intersection of `h̃(τ)` with the thin diagonal of
/// `(R^k)^r`: `sign det B` with block rows `[A_i | I_k]`, where `A_i` is the
/// linear part of the height function on `τ_i` in base coordinates.
pub fn dual_sign(heights: &PrismaticHeights, cell: &PrismCell) -> i64 {
    let scheme = heights.scheme;
    let (r, k, m) = (scheme.r, scheme.k, scheme.m());
    assert_eq!(cell.colors.len(), m + 1, "dual sign is defined on top cells");
    let n = r * k;
    let mut b = QMatrix::zeros(n, n);
    for i in 0..r {
        let h0 = heights.height(scheme.vertex(cell.perms[0].apply(i), 0));
        for j in 1..=m {
            let hj = heights.height(scheme.vertex(cell.perms[j].apply(i), j));
            for a in 0..k {
                b[(i * k + a, j - 1)] = &hj[a] - &h0[a];
            }
        }
        for a in 0..k {
            b[(i * k + a, m + a)] = Rat::one();
        }
    }
    b.det_sign()
}

/// Top cells where both sign routes were compared.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SignCheck {
    pub populated: usize,
    pub agreeing: usize,
    pub mismatches: Vec<String>,
}

impl SignCheck {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compare `dual_sign` with `ε^PRIS · (r-fold sign)` on every populated top cell.
pub fn sign_relation(heights: &PrismaticHeights, top_reps: &[PrismCell]) -> Result<SignCheck> {
    let images = heights.vertex_images();
    let scheme = heights.scheme;
    let eps = epsilon_pris(scheme.r, scheme.k);
    let rows: Vec<Option<(i64, i64)>> = top_reps
        .par_iter()
        .map(|cell| {
            Ok(match populated(&image_sets(cell, &scheme, &images))? {
                None => None,
                Some(simplices) => Some((dual_sign(heights, cell), eps * r_fold_sign(&simplices)?)),
            })
        })
        .collect::<Result<_>>()?;
    let mut out = SignCheck::default();
    for (cell, row) in top_reps.iter().zip(rows) {
        if let Some((dual, direct)) = row {
            out.populated += 1;
            if dual == direct {
                out.agreeing += 1;
            } else {
                out.mismatches.push(format!("{cell}: dual {dual}, direct {direct}"));
            }
        }
    }
    Ok(out)
}

/// The prismatic intersection-number cocycle on the given top representatives.
pub fn prismatic_cocycle_on(
    heights: &PrismaticHeights,
    top_reps: &[PrismCell],
) -> Result<EquivariantCochain<PrismCell>> {
    let images = heights.vertex_images();
    let values: Vec<i64> =
        top_reps.par_iter().map(|c| prismatic_cell_value(heights, &images, c)).collect::<Result<_>>()?;
    Ok(EquivariantCochain::from_values(heights.scheme.m(), top_reps.iter().cloned().zip(values)))
}

pub fn prismatic_cocycle(heights: &PrismaticHeights) -> Result<EquivariantCochain<PrismCell>> {
    let top = reps_of_x(&heights.scheme, heights.scheme.m(), Some(DEFAULT_MAX_ORBITS))?;
    prismatic_cocycle_on(heights, &top)
}

/// Genericity on the consumed cells: codimension-one tuples must have
/// disjoint image hulls, top tuples a transverse intersection off the boundary.
pub fn check_prismatic_generic(
    heights: &PrismaticHeights,
    top_reps: &[PrismCell],
    codim_reps: &[PrismCell],
) -> Result<()> {
    let images = heights.vertex_images();
    let scheme = heights.scheme;
    codim_reps.par_iter().try_for_each(|cell| {
        let sets = image_sets(cell, &scheme, &images);
        let refs: Vec<&[Point]> = sets.iter().map(Vec::as_slice).collect();
        if hulls_meet(&refs) {
            return Err(Error::Degenerate(format!("image hulls of the codimension-one cell {cell} meet")));
        }
        Ok(())
    })?;
    top_reps.par_iter().try_for_each(|cell| prismatic_cell_value(heights, &images, cell).map(|_| ()))
}

const HEIGHT_BOX: u64 = 1 << 16;

fn sample_heights_once(scheme: &ColorScheme, seed: u64, nonce: u64) -> Result<PrismaticHeights> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(nonce);
    let heights = (0..scheme.vertex_count())
        .map(|_| {
            let w: Vec<i64> = (0..=scheme.k).map(|_| rng.gen_range(1..=HEIGHT_BOX) as i64).collect();
            let total: i64 = w.iter().sum();
            w[1..].iter().map(|&x| Rat::new(x.into(), total.into())).collect()
        })
        .collect();
    PrismaticHeights::new(*scheme, heights)
}

/// Seeded interior heights passing `accept`; a [`Error::Degenerate`] from
/// `accept` triggers a resample with the next nonce.
pub fn sample_prismatic_heights_with<F>(
    scheme: &ColorScheme,
    seed: u64,
    mut accept: F,
) -> Result<(PrismaticHeights, u64)>
where
    F: FnMut(&PrismaticHeights) -> Result<()>,
{
    let mut last = String::new();
    for nonce in 0..=MAX_RETRIES {
        let h = sample_heights_once(scheme, seed, nonce)?;
        match accept(&h) {
            Ok(()) => return Ok((h, nonce)),
            Err(Error::Degenerate(why)) => last = why,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Degenerate(format!("retry budget of {MAX_RETRIES} exhausted (last: {last})")))
}

/// Seeded interior heights with pairwise distinct vertex images.
pub fn sample_prismatic_heights(scheme: &ColorScheme, seed: u64) -> Result<PrismaticHeights> {
    sample_prismatic_heights_with(scheme, seed, |h| {
        h.affine_map().map(|_| ()).map_err(|_| Error::Degenerate("repeated vertex image".into()))
    })
    .map(|(h, _)| h)
}

/// A possibly non-regular PL map of `C` into the prism: vertex images, and
/// for some top simplices an apex image; such a simplex is subdivided by
/// coning from its barycenter over its facets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrismaticMap {
    pub scheme: ColorScheme,
    pub vertex_images: Vec<Point>,
    pub apexes: BTreeMap<Simplex, Point>,
}

impl PrismaticMap {
    pub fn from_heights(heights: &PrismaticHeights) -> Self {
        PrismaticMap { scheme: heights.scheme, vertex_images: heights.vertex_images(), apexes: BTreeMap::new() }
    }

    /// Image of the barycenter of `s` under the unbent (affine) extension.
    pub fn affine_barycenter(&self, s: &Simplex) -> Point {
        let n = Rat::from_integer((s.dim() + 1).into());
        let mut p = vec![Rat::zero(); self.scheme.d()];
        for &v in s.vertices() {
            for (a, x) in p.iter_mut().zip(&self.vertex_images[v]) {
                *a += x;
            }
        }
        p.into_iter().map(|x| x / &n).collect()
    }

    fn images(&self, s: &Simplex) -> Vec<Point> {
        s.vertices().iter().map(|&v| self.vertex_images[v].clone()).collect()
    }

    /// Affine pieces of the image of `s`: one piece, or the cone pieces if bent.
    fn pieces(&self, s: &Simplex) -> Vec<Vec<Point>> {
        match self.apexes.get(s) {
            None => vec![self.images(s)],
            Some(apex) => (0..=s.dim())
                .map(|i| {
                    let mut pts = self.images(&s.facet(i));
                    pts.push(apex.clone());
                    pts
                })
                .collect(),
        }
    }
}

/// Outcome of the prismatic-map conditions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrismaticReport {
    pub pr1: bool,
    pub pr2: bool,
    pub pr3: bool,
    pub regular: bool,
    pub failures: Vec<String>,
}

fn split(p: &Point, m: usize) -> (&[Rat], &[Rat]) {
    p.split_at(m)
}

/// Base barycentric coordinates `(λ_0, …, λ_m)` of a point of `Q^m`.
fn base_barycentric(x: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::one() - x.iter().sum::<Rat>()];
    out.extend(x.iter().cloned());
    out
}

/// Check the prismatic-map conditions on every colorful simplex and every
/// tuple of pairwise disjoint colorful simplices over a common base face.
pub fn check_prismatic(map: &PrismaticMap) -> Result<PrismaticReport> {
    let scheme = map.scheme;
    let (m, k) = (scheme.m(), scheme.k);
    let c = build_colorful_complex(&scheme)?;
    if map.vertex_images.len() != scheme.vertex_count() || map.vertex_images.iter().any(|p| p.len() != m + k) {
        return Err(Error::Input("vertex images do not match the scheme".into()));
    }
    let mut report = PrismaticReport { pr1: true, pr2: true, pr3: true, regular: true, failures: Vec::new() };
    let fail = |flag: &mut bool, failures: &mut Vec<String>, msg: String| {
        *flag = false;
        failures.push(msg);
    };

    // PR1 and REG at the vertices: f(v_{i,j}) = (u_j, interior height).
    for (v, p) in map.vertex_images.iter().enumerate() {
        let (base, height) = split(p, m);
        if base != scheme.base_vertex(scheme.color(v)).as_slice() || !in_open_simplex(height) {
            fail(&mut report.pr1, &mut report.failures, format!("PR1: vertex {v} is not over u_{}", scheme.color(v)));
        }
    }
    for (s, apex) in &map.apexes {
        if !c.contains(s) || s.dim() != m {
            return Err(Error::Input(format!("apex given for {s}, which is not a top colorful simplex")));
        }
        let (base, height) = split(apex, m);
        if !base_barycentric(base).iter().all(Signed::is_positive) || !in_open_simplex(height) {
            fail(&mut report.pr1, &mut report.failures, format!("PR1: apex of {s} leaves the open prism"));
        }
        let bary = map.affine_barycenter(s);
        if base != split(&bary, m).0 {
            report.regular = false;
        }
    }
    if !report.pr1 {
        report.regular = false;
    }

    // PR2: injectivity on every colorful simplex.
    for s in c.faces() {
        match map.apexes.get(s) {
            None => {
                if AffineSimplex::new(map.images(s), 1).is_err() {
                    fail(&mut report.pr2, &mut report.failures, format!("PR2: image of {s} is degenerate"));
                }
            }
            Some(apex) => {
                let pieces_ok = map.pieces(s).into_iter().all(|p| AffineSimplex::new(p, 1).is_ok());
                let flat = map.images(s);
                let apex_set = [apex.clone()];
                let off_hull = !hulls_meet(&[&flat, &apex_set]);
                let inside = intersection_point_interior(&flat, apex);
                if !pieces_ok || !(off_hull || inside) {
                    fail(&mut report.pr2, &mut report.failures, format!("PR2: bent image of {s} is not injective"));
                }
            }
        }
    }

    // PR3: expected intersection dimensions over every base face.
    for q in 0..=m {
        for colors in k_subsets(m + 1, q + 1) {
            let simplices: Vec<Simplex> = c
                .faces_of_dim(q)
                .iter()
                .filter(|s| s.vertices().iter().map(|&v| scheme.color(v)).eq(colors.iter().copied()))
                .cloned()
                .collect();
            let mut cur = Vec::new();
            pr3_walk(map, &simplices, 0, &mut cur, q, k, &mut report);
        }
    }
    Ok(report)
}

/// Whether `apex` lies in the relative interior of the simplex spanned by `pts`.
fn intersection_point_interior(pts: &[Point], apex: &Point) -> bool {
    let edges: Vec<Vec<Rat>> = pts[1..].iter().map(|p| p.iter().zip(&pts[0]).map(|(a, b)| a - b).collect()).collect();
    let e = QMatrix::from_columns(apex.len(), &edges);
    let rhs: Vec<Rat> = apex.iter().zip(&pts[0]).map(|(a, b)| a - b).collect();
    match e.solve_any(&rhs) {
        Some(sol) if e.mul_vec(&sol) == rhs => base_barycentric(&sol).iter().all(Signed::is_positive),
        _ => false,
    }
}

fn pr3_walk(
    map: &PrismaticMap,
    simplices: &[Simplex],
    start: usize,
    cur: &mut Vec<Simplex>,
    q: usize,
    k: usize,
    report: &mut PrismaticReport,
) {
    if !cur.is_empty() {
        let s = cur.len();
        let expected = q as i64 - (s as i64 - 1) * k as i64;
        let expected = if expected < 0 { None } else { Some(expected as usize) };
        let piece_lists: Vec<Vec<Vec<Point>>> = cur.iter().map(|t| map.pieces(t)).collect();
        let mut idx = vec![0usize; s];
        'outer: loop {
            let sets: Vec<&[Point]> = idx.iter().zip(&piece_lists).map(|(&i, p)| p[i].as_slice()).collect();
            let got = affine_hull_intersection_dim(&sets);
            if got != expected && report.pr3 {
                report.pr3 = false;
                let names: Vec<String> = cur.iter().map(ToString::to_string).collect();
                report.failures.push(format!(
                    "PR3: hulls of {} meet in dimension {:?}, expected {:?}",
                    names.join(", "),
                    got,
                    expected
                ));
            }
            for pos in (0..s).rev() {
                idx[pos] += 1;
                if idx[pos] < piece_lists[pos].len() {
                    continue 'outer;
                }
                idx[pos] = 0;
            }
            break;
        }
    }
    if cur.len() == map.scheme.r {
        return;
    }
    for (t, cand) in simplices.iter().enumerate().skip(start) {
        if cur.iter().all(|s| s.is_disjoint(cand)) {
            cur.push(cand.clone());
            pr3_walk(map, simplices, t + 1, cur, q, k, report);
            cur.pop();
        }
    }
}

/// A prismatic obstruction run.
#[derive(Clone, Debug)]
pub struct PrismaticRun {
    pub heights: PrismaticHeights,
    pub nonce: u64,
    pub system: ObstructionSystem<PrismCell>,
}

/// Sample generic heights and decide whether the prismatic cocycle is a sum
/// of elementary equivariant coboundaries.
pub fn prismatic_obstruction(scheme: &ColorScheme, seed: u64, max_orbits: u128) -> Result<PrismaticRun> {
    let m = scheme.m();
    let top = reps_of_x(scheme, m, Some(max_orbits))?;
    let codim = if m == 0 { Vec::new() } else { reps_of_x(scheme, m - 1, Some(max_orbits))? };
    let (heights, nonce) = sample_prismatic_heights_with(scheme, seed, |h| {
        h.affine_map().map_err(|_| Error::Degenerate("repeated vertex image".into()))?;
        check_prismatic_generic(h, &top, &codim)
    })?;
    let phi = prismatic_cocycle_on(&heights, &top)?;
    let values: Vec<i64> = top.iter().map(|c| phi.get(c)).collect();
    let system = solve_system(&PrismaticSpace { scheme: *scheme }, top, codim, values)?;
    Ok(PrismaticRun { heights, nonce, system })
}
