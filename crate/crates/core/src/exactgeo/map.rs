use std::collections::{BTreeMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{format_rat, parse_rat, rat, AffineSimplex, Point};
use crate::complex::{Simplex, SimplicialComplex};
use crate::error::{Error, Result};

/// Resampling budget of [`sample_generic_map_with`].
pub const MAX_RETRIES: u64 = 64;

/// Vertex images in `Q^d`, extended linearly over every simplex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactAffineMap {
    d: usize,
    coords: Vec<Point>,
}

/// On-disk form: `{"d": d, "coords": {"<vertex-id>": ["num/den", ...]}}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MapFile {
    pub d: usize,
    pub coords: BTreeMap<String, Vec<String>>,
}

impl ExactAffineMap {
    pub fn new(d: usize, coords: Vec<Point>) -> Result<Self> {
        if coords.iter().any(|p| p.len() != d) {
            return Err(Error::Input(format!("every image must have {d} coordinates")));
        }
        let distinct: HashSet<&Point> = coords.iter().collect();
        if distinct.len() != coords.len() {
            return Err(Error::Input("two vertices share an image point".into()));
        }
        Ok(ExactAffineMap { d, coords })
    }

    pub fn from_ints(d: usize, coords: &[Vec<i64>]) -> Result<Self> {
        Self::new(d, coords.iter().map(|p| p.iter().map(|&x| rat(x)).collect()).collect())
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn vertex_count(&self) -> usize {
        self.coords.len()
    }

    pub fn image(&self, v: usize) -> &Point {
        &self.coords[v]
    }

    pub fn coords(&self) -> &[Point] {
        &self.coords
    }

    pub fn image_points(&self, s: &Simplex) -> Vec<Point> {
        s.vertices().iter().map(|&v| self.coords[v].clone()).collect()
    }

    /// The image simplex with reference (vertex-order) orientation.
    pub fn image_simplex(&self, s: &Simplex) -> Result<AffineSimplex> {
        AffineSimplex::new(self.image_points(s), 1)
    }

    /// Check that the map covers every vertex of `k`.
    pub fn check_domain(&self, k: &SimplicialComplex) -> Result<()> {
        if self.coords.len() != k.vertex_count() {
            return Err(Error::Input(format!(
                "map has {} vertex images, complex has {} vertices",
                self.coords.len(),
                k.vertex_count()
            )));
        }
        Ok(())
    }

    pub fn from_file(file: &MapFile) -> Result<Self> {
        let n = file.coords.len();
        let mut coords = vec![None; n];
        for (key, vals) in &file.coords {
            let v: usize = key.trim().parse().map_err(|_| Error::Input(format!("bad vertex id {key:?}")))?;
            if v >= n {
                return Err(Error::Input(format!("vertex ids must be dense 0..{n}, found {v}")));
            }
            coords[v] = Some(vals.iter().map(|s| parse_rat(s)).collect::<Result<Point>>()?);
        }
        Self::new(file.d, coords.into_iter().map(|c| c.expect("dense ids")).collect())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: MapFile = serde_json::from_str(text).map_err(|e| Error::Input(format!("map file: {e}")))?;
        Self::from_file(&file)
    }

    pub fn to_file(&self) -> MapFile {
        MapFile {
            d: self.d,
            coords: self
                .coords
                .iter()
                .enumerate()
                .map(|(v, p)| (v.to_string(), p.iter().map(format_rat).collect()))
                .collect(),
        }
    }
}

fn sample_once(k: &SimplicialComplex, d: usize, seed: u64, nonce: u64, box_size: u64) -> Result<ExactAffineMap> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(nonce);
    let coords: Vec<Vec<i64>> =
        (0..k.vertex_count()).map(|_| (0..d).map(|_| rng.gen_range(0..box_size) as i64).collect()).collect();
    let map = ExactAffineMap::from_ints(d, &coords).map_err(|_| Error::Degenerate("repeated vertex image".into()))?;
    for q in 1..=d.min(k.dim()) {
        for s in k.faces_of_dim(q) {
            map.image_simplex(s)?;
        }
    }
    Ok(map)
}

/// A seeded map with integer coordinates in `[0, box)` whose vertex images
/// are distinct and whose faces of dimension at most `d` are nondegenerate.
pub fn sample_generic_map(k: &SimplicialComplex, d: usize, seed: u64, box_size: u64) -> Result<ExactAffineMap> {
    sample_generic_map_with(k, d, seed, box_size, |_| Ok(())).map(|(m, _)| m)
}

/// As [`sample_generic_map`], additionally requiring `accept` to succeed.
/// A [`Error::Degenerate`] from either check triggers a resample with the
/// next nonce; returns the map and the nonce that produced it.
pub fn sample_generic_map_with<F>(
    k: &SimplicialComplex,
    d: usize,
    seed: u64,
    box_size: u64,
    mut accept: F,
) -> Result<(ExactAffineMap, u64)>
where
    F: FnMut(&ExactAffineMap) -> Result<()>,
{
    if d == 0 {
        return Err(Error::Precondition("target dimension must be at least 1".into()));
    }
    let needed = (k.vertex_count() as u64).saturating_mul(d as u64);
    if box_size < needed || box_size > i64::MAX as u64 {
        return Err(Error::Precondition(format!("box {box_size} must be at least |V|·d = {needed}")));
    }
    let mut last = String::new();
    for nonce in 0..=MAX_RETRIES {
        match sample_once(k, d, seed, nonce, box_size).and_then(|m| accept(&m).map(|_| m)) {
            Ok(m) => return Ok((m, nonce)),
            Err(Error::Degenerate(why)) => last = why,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Degenerate(format!("retry budget of {MAX_RETRIES} exhausted (last: {last}); enlarge the box")))
}
