//! The decision pipeline: cocycle, coboundary matrix, integral solve, and a
//! re-verified certificate.

use num_bigint::BigInt;
use serde::Serialize;

use crate::cocycle::{
    check_general_position, coboundary_matrix, intersection_cocycle_on, to_vector, EquivariantComplex,
};
use crate::complex::SimplicialComplex;
use crate::delprod::{deleted_product_dim, enumerate_reps, DeletedProduct, DeletedProductCell};
use crate::error::{Error, Result};
use crate::exactgeo::{sample_generic_map_with, ExactAffineMap};
use crate::snf::{solve_integer, verify, IntMatrix, SolveResult};

/// Coordinate box for sampled vertex images.
pub const DEFAULT_BOX: u64 = 1 << 20;

/// Default cap on orbit representatives per dimension.
pub const DEFAULT_MAX_ORBITS: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Vanishes,
    NonVanishing,
}

/// `A x = v` with `A` the elementary coboundaries (columns, one per codim-1
/// orbit) on the top orbits (rows) and `v` the cocycle.
#[derive(Clone, Debug)]
pub struct ObstructionSystem<C> {
    pub top_reps: Vec<C>,
    pub codim_reps: Vec<C>,
    pub matrix: IntMatrix,
    pub cocycle: Vec<i64>,
    pub result: SolveResult,
}

impl<C> ObstructionSystem<C> {
    pub fn verdict(&self) -> Verdict {
        match self.result {
            SolveResult::Solution(_) => Verdict::Vanishes,
            SolveResult::Obstructed(_) => Verdict::NonVanishing,
        }
    }

    pub fn rhs(&self) -> Vec<BigInt> {
        self.cocycle.iter().map(|&v| v.into()).collect()
    }

    /// Re-check the certificate against the matrix and the cocycle.
    pub fn certificate_holds(&self) -> bool {
        let v = self.rhs();
        match &self.result {
            SolveResult::Solution(x) => verify(&self.matrix, x, &v).unwrap_or(false),
            SolveResult::Obstructed(o) => o.witness.check(&self.matrix, &v),
        }
    }
}

/// Assemble and solve the system; the certificate is re-verified before returning.
pub fn solve_system<X: EquivariantComplex>(
    space: &X,
    top_reps: Vec<X::Cell>,
    codim_reps: Vec<X::Cell>,
    cocycle: Vec<i64>,
) -> Result<ObstructionSystem<X::Cell>> {
    let matrix = coboundary_matrix(space, &top_reps, &codim_reps)?;
    let v: Vec<BigInt> = cocycle.iter().map(|&x| x.into()).collect();
    let result = solve_integer(&matrix, &v)?;
    let system = ObstructionSystem { top_reps, codim_reps, matrix, cocycle, result };
    if !system.certificate_holds() {
        return Err(Error::Certificate("solver output does not check against A and v".into()));
    }
    Ok(system)
}

/// Which hypotheses of the embeddability/Tverberg-type theorems hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Applicability {
    /// `d - dim K >= 3`.
    pub codimension_at_least_three: bool,
    /// `dim K^r_Δ = d(r-1)`.
    pub dimension_matches: bool,
    /// `(r-1)d = r·dim K`.
    pub equidimensional: bool,
}

impl Applicability {
    /// Whether a verdict may be read as existence or non-existence of a map
    /// without r-Tverberg points.
    pub fn verdict_is_geometric(&self) -> bool {
        self.codimension_at_least_three && self.dimension_matches && self.equidimensional
    }
}

pub fn applicability(k: &SimplicialComplex, r: usize, d: usize) -> Applicability {
    let m = k.dim();
    Applicability {
        codimension_at_least_three: d >= m + 3,
        dimension_matches: deleted_product_dim(k, r) == Some(d * (r - 1)),
        equidimensional: (r - 1) * d == r * m,
    }
}

/// The critical dimension `d(r-1)`, provided the deleted product has exactly that dimension.
pub fn check_dimensions(k: &SimplicialComplex, r: usize, d: usize) -> Result<usize> {
    if r < 2 || d < 1 {
        return Err(Error::Precondition(format!("need r >= 2 and d >= 1, got r = {r}, d = {d}")));
    }
    let n = d * (r - 1);
    match deleted_product_dim(k, r) {
        None => Err(Error::Precondition(format!(
            "the {r}-fold deleted product is empty: no {r} pairwise disjoint faces, so no map has an r-fold point \
             and the obstruction is trivially zero"
        ))),
        Some(dim) if dim < n => Err(Error::Precondition(format!(
            "dim K^r_Δ = {dim} < d(r-1) = {n}: a generic map has no r-Tverberg points and the obstruction is trivially zero"
        ))),
        Some(dim) if dim > n => Err(Error::Precondition(format!(
            "dim K^r_Δ = {dim} > d(r-1) = {n}: the intersection cocycle lives in the top dimension only when they agree"
        ))),
        Some(_) => Ok(n),
    }
}

#[derive(Clone, Debug)]
pub struct ObstructionConfig {
    pub r: usize,
    pub d: usize,
    pub seed: u64,
    pub box_size: u64,
    pub max_orbits: usize,
}

impl ObstructionConfig {
    pub fn new(r: usize, d: usize, seed: u64) -> Self {
        ObstructionConfig { r, d, seed, box_size: DEFAULT_BOX, max_orbits: DEFAULT_MAX_ORBITS }
    }
}

#[derive(Clone, Debug)]
pub struct VanKampenRun {
    pub map: ExactAffineMap,
    /// Resampling nonce of a sampled map; `None` for a supplied map.
    pub nonce: Option<u64>,
    pub applicability: Applicability,
    pub system: ObstructionSystem<DeletedProductCell>,
}

/// Decide whether the r-fold obstruction of `k` in `R^d` vanishes, using the
/// supplied map or a seeded generic one.
pub fn run_obstruction(
    k: &SimplicialComplex,
    cfg: &ObstructionConfig,
    map: Option<ExactAffineMap>,
) -> Result<VanKampenRun> {
    let n = check_dimensions(k, cfg.r, cfg.d)?;
    let top = enumerate_reps(k, cfg.r, n, Some(cfg.max_orbits))?;
    let codim = enumerate_reps(k, cfg.r, n - 1, Some(cfg.max_orbits))?;
    let (map, nonce) = match map {
        Some(f) => {
            f.check_domain(k)?;
            if f.d() != cfg.d {
                return Err(Error::Input(format!("map targets Q^{}, expected Q^{}", f.d(), cfg.d)));
            }
            check_general_position(&f, &top, &codim)?;
            (f, None)
        }
        None => {
            let (f, nonce) =
                sample_generic_map_with(k, cfg.d, cfg.seed, cfg.box_size, |f| check_general_position(f, &top, &codim))?;
            (f, Some(nonce))
        }
    };
    let phi = intersection_cocycle_on(&map, &top, n)?;
    let values = to_vector(&phi, &top).values;
    let space = DeletedProduct::new(k, cfg.r, cfg.d);
    let system = solve_system(&space, top, codim, values)?;
    Ok(VanKampenRun { map, nonce, applicability: applicability(k, cfg.r, cfg.d), system })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_verdicts() {
        let cases = [
            (SimplicialComplex::complete_graph(5), Verdict::NonVanishing),
            (SimplicialComplex::complete_bipartite(3, 3), Verdict::NonVanishing),
            (SimplicialComplex::complete_graph(4), Verdict::Vanishes),
            (SimplicialComplex::cycle(6), Verdict::Vanishes),
        ];
        for (k, expected) in cases {
            let run = run_obstruction(&k, &ObstructionConfig::new(2, 2, 1), None).unwrap();
            assert_eq!(run.system.verdict(), expected);
            assert!(run.system.certificate_holds());
        }
    }

    #[test]
    fn dimension_preconditions() {
        let tri = SimplicialComplex::full_simplex(2);
        assert!(matches!(check_dimensions(&tri, 2, 2), Err(Error::Precondition(_))));
        assert!(matches!(check_dimensions(&tri, 4, 1), Err(Error::Precondition(_))));
        assert_eq!(check_dimensions(&SimplicialComplex::complete_graph(5), 2, 2).unwrap(), 2);
        let k5 = SimplicialComplex::complete_graph(5);
        assert!(matches!(check_dimensions(&k5, 2, 1), Err(Error::Precondition(_))));
    }

    #[test]
    fn applicability_flags() {
        let a = applicability(&SimplicialComplex::complete_graph(5), 2, 2);
        assert!(!a.codimension_at_least_three);
        assert!(a.dimension_matches);
        assert!(a.equidimensional);
        let s = SimplicialComplex::simplex_skeleton(6, 2);
        let a = applicability(&s, 2, 4);
        assert!(a.dimension_matches && a.equidimensional && !a.codimension_at_least_three);
    }

    #[test]
    fn orbit_cap_is_a_resource_error() {
        let s = SimplicialComplex::simplex_skeleton(6, 2);
        let mut cfg = ObstructionConfig::new(2, 4, 1);
        cfg.max_orbits = 50;
        assert!(matches!(run_obstruction(&s, &cfg, None), Err(Error::ResourceCap(_))));
    }
}
