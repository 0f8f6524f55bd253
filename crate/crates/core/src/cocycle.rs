//! Equivariant cochains: the intersection-number cocycle of a generic map,
//! elementary equivariant coboundaries, and algebraic finger moves.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::complex::{SignedSum, SimplicialComplex};
use crate::delprod::{enumerate_reps, DeletedProductCell};
use crate::error::{Error, Result};
use crate::exactgeo::{epsilon, hulls_meet, intersection_point, r_fold_sign, AffineSimplex, ExactAffineMap, Point};
use crate::snf::IntMatrix;

/// A cell complex with a free symmetric-group action, as needed to assemble
/// equivariant coboundary matrices.
pub trait EquivariantComplex: Sync {
    type Cell: Clone + Ord + Send + Sync;

    fn cell_dim(&self, cell: &Self::Cell) -> usize;

    fn boundary(&self, cell: &Self::Cell) -> SignedSum<Self::Cell>;

    /// Orbit representative and twist with `value(cell) = twist · value(rep)`.
    fn canonicalize(&self, cell: &Self::Cell) -> (Self::Cell, i64);
}

/// Integer values on orbit representatives; absent representatives are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivariantCochain<C: Ord> {
    degree: usize,
    values: BTreeMap<C, i64>,
}

impl<C: Ord + Clone> EquivariantCochain<C> {
    pub fn zero(degree: usize) -> Self {
        EquivariantCochain { degree, values: BTreeMap::new() }
    }

    pub fn from_values(degree: usize, values: impl IntoIterator<Item = (C, i64)>) -> Self {
        let mut c = Self::zero(degree);
        for (rep, v) in values {
            c.add(rep, v);
        }
        c
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Value at an orbit representative.
    pub fn get(&self, rep: &C) -> i64 {
        self.values.get(rep).copied().unwrap_or(0)
    }

    pub fn add(&mut self, rep: C, value: i64) {
        if value == 0 {
            return;
        }
        let e = self.values.entry(rep.clone()).or_insert(0);
        *e += value;
        if *e == 0 {
            self.values.remove(&rep);
        }
    }

    pub fn set(&mut self, rep: C, value: i64) {
        if value == 0 {
            self.values.remove(&rep);
        } else {
            self.values.insert(rep, value);
        }
    }

    /// Value at an arbitrary cell, through its orbit representative.
    pub fn eval<X: EquivariantComplex<Cell = C>>(&self, space: &X, cell: &C) -> i64 {
        let (rep, twist) = space.canonicalize(cell);
        twist * self.get(&rep)
    }

    /// Nonzero entries in representative order.
    pub fn support(&self) -> impl Iterator<Item = (&C, i64)> {
        self.values.iter().map(|(c, v)| (c, *v))
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn plus(&self, other: &Self, scale: i64) -> Self {
        assert_eq!(self.degree, other.degree, "cochain degrees differ");
        let mut out = self.clone();
        for (c, v) in other.support() {
            out.add(c.clone(), scale * v);
        }
        out
    }
}

/// A cochain as an integer vector aligned with an ordered list of representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleVector<C> {
    pub reps: Vec<C>,
    pub values: Vec<i64>,
}

pub fn to_vector<C: Ord + Clone>(phi: &EquivariantCochain<C>, reps: &[C]) -> CocycleVector<C> {
    CocycleVector { reps: reps.to_vec(), values: reps.iter().map(|c| phi.get(c)).collect() }
}

/// `δψ` for the equivariant indicator `ψ` of `eta`'s orbit, on the given top representatives.
pub fn elementary_coboundary<X: EquivariantComplex>(
    space: &X,
    eta: &X::Cell,
    top_reps: &[X::Cell],
) -> EquivariantCochain<X::Cell> {
    let mut out = EquivariantCochain::zero(space.cell_dim(eta) + 1);
    for sigma in top_reps {
        let mut value = 0;
        for (tau, coeff) in space.boundary(sigma).iter() {
            let (rep, twist) = space.canonicalize(tau);
            if &rep == eta {
                value += coeff * twist;
            }
        }
        out.add(sigma.clone(), value);
    }
    out
}

/// `φ + ε · δψ_η`.
pub fn finger_move<X: EquivariantComplex>(
    space: &X,
    phi: &EquivariantCochain<X::Cell>,
    eta: &X::Cell,
    sign: i64,
    top_reps: &[X::Cell],
) -> EquivariantCochain<X::Cell> {
    let delta = elementary_coboundary(space, eta, top_reps);
    let mut out = phi.clone();
    for (c, v) in delta.support() {
        out.add(c.clone(), sign * v);
    }
    out
}

/// The matrix whose column `j` is the elementary coboundary of `codim_reps[j]`
/// restricted to `top_reps` (rows).
pub fn coboundary_matrix<X: EquivariantComplex>(
    space: &X,
    top_reps: &[X::Cell],
    codim_reps: &[X::Cell],
) -> Result<IntMatrix> {
    let index: BTreeMap<&X::Cell, usize> = codim_reps.iter().enumerate().map(|(j, c)| (c, j)).collect();
    let rows: Vec<Vec<(usize, i64)>> = top_reps
        .par_iter()
        .map(|sigma| {
            let mut row: BTreeMap<usize, i64> = BTreeMap::new();
            for (tau, coeff) in space.boundary(sigma).iter() {
                let (rep, twist) = space.canonicalize(tau);
                let j = *index
                    .get(&rep)
                    .ok_or_else(|| Error::Input("boundary face outside the codimension-one list".into()))?;
                *row.entry(j).or_insert(0) += coeff * twist;
            }
            Ok(row.into_iter().filter(|(_, v)| *v != 0).collect())
        })
        .collect::<Result<_>>()?;
    let mut triplets = Vec::new();
    for (i, row) in rows.into_iter().enumerate() {
        triplets.extend(row.into_iter().map(|(j, v)| (i, j, v.into())));
    }
    IntMatrix::from_triplets(top_reps.len(), codim_reps.len(), triplets)
}

fn image_sets(f: &ExactAffineMap, cell: &DeletedProductCell) -> Vec<Vec<Point>> {
    cell.factors().iter().map(|s| f.image_points(s)).collect()
}

/// Hulls of the factors of dimension at most `d` must not meet; factors of
/// larger dimension span the whole space and impose nothing.
fn require_low_hulls_disjoint(sets: &[Vec<Point>], d: usize) -> Result<()> {
    let low: Vec<&[Point]> = sets.iter().filter(|p| p.len() <= d + 1).map(Vec::as_slice).collect();
    if low.len() >= 2 && hulls_meet(&low) {
        return Err(Error::Degenerate("affine hulls of a non-generic tuple meet".into()));
    }
    Ok(())
}

/// `ε_{d,m} · f(σ_1)·…·f(σ_r)` on one top cell. A factor of dimension above
/// `d` forces the value 0 once the remaining hulls are checked to be disjoint.
pub fn top_cell_value(f: &ExactAffineMap, cell: &DeletedProductCell) -> Result<i64> {
    let d = f.d();
    let dims = cell.dims();
    let sets = image_sets(f, cell);
    if dims.iter().any(|&m| m > d) {
        require_low_hulls_disjoint(&sets, d)?;
        return Ok(0);
    }
    let simplices: Vec<AffineSimplex> = sets.into_iter().map(|p| AffineSimplex::new(p, 1)).collect::<Result<_>>()?;
    match intersection_point(&simplices)? {
        None => Ok(0),
        Some(_) => Ok(epsilon(d, &dims)? * r_fold_sign(&simplices)?),
    }
}

/// General-position check on a codimension-one cell: its image hulls must not meet.
pub fn check_codim_cell(f: &ExactAffineMap, cell: &DeletedProductCell) -> Result<()> {
    require_low_hulls_disjoint(&image_sets(f, cell), f.d())
}

/// The intersection-number cocycle on the given top representatives.
pub fn intersection_cocycle_on(
    f: &ExactAffineMap,
    top_reps: &[DeletedProductCell],
    degree: usize,
) -> Result<EquivariantCochain<DeletedProductCell>> {
    let values: Vec<i64> = top_reps.par_iter().map(|c| top_cell_value(f, c)).collect::<Result<_>>()?;
    Ok(EquivariantCochain::from_values(degree, top_reps.iter().cloned().zip(values)))
}

/// The intersection-number cocycle of `f` on the r-fold deleted product of `k`.
pub fn intersection_cocycle(
    k: &SimplicialComplex,
    r: usize,
    f: &ExactAffineMap,
) -> Result<EquivariantCochain<DeletedProductCell>> {
    f.check_domain(k)?;
    let n = f.d() * (r - 1);
    let reps = enumerate_reps(k, r, n, None)?;
    intersection_cocycle_on(f, &reps, n)
}

/// Run the lazy general-position checks on every consumed cell.
pub fn check_general_position(
    f: &ExactAffineMap,
    top_reps: &[DeletedProductCell],
    codim_reps: &[DeletedProductCell],
) -> Result<()> {
    codim_reps.par_iter().try_for_each(|c| check_codim_cell(f, c))?;
    top_reps.par_iter().try_for_each(|c| top_cell_value(f, c).map(|_| ()))
}
