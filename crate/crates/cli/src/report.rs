//! JSON report types. Big integers are emitted as decimal strings; all maps
//! are ordered so identical runs give identical bytes.

use std::collections::BTreeMap;
use std::fmt::Display;

use num_bigint::BigInt;
use serde::Serialize;
use sha2::{Digest, Sha256};
use vankampen_core::complex::ComplexFile;
use vankampen_core::exactgeo::MapFile;
use vankampen_core::obstruction::{Applicability, ObstructionSystem, Verdict};
use vankampen_core::oracle::{CrossValidation, HitRecord};
use vankampen_core::prismatic::{HeightsFile, PrismaticReport, SignCheck};
use vankampen_core::snf::{SolveMethod, SolveResult};
use vankampen_core::SimplicialComplex;

pub fn big(x: &BigInt) -> String {
    x.to_string()
}

/// SHA-256 of the canonical JSON form of the complex (sorted maximal faces).
pub fn complex_hash(k: &SimplicialComplex) -> String {
    let file = k.to_file();
    let text = serde_json::to_string(&file).expect("complex serializes");
    hex::encode(Sha256::digest(text.as_bytes()))
}

#[derive(Debug, Serialize)]
pub struct ComplexEcho {
    pub sha256: String,
    pub vertex_count: usize,
    pub dim: usize,
    pub maximal_simplices: usize,
}

impl ComplexEcho {
    pub fn new(k: &SimplicialComplex) -> Self {
        let file: ComplexFile = k.to_file();
        ComplexEcho {
            sha256: complex_hash(k),
            vertex_count: k.vertex_count(),
            dim: k.dim(),
            maximal_simplices: file.maximal_simplices.len(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Shape {
    pub rows: usize,
    pub cols: usize,
    pub nnz: usize,
}

#[derive(Debug, Serialize)]
pub struct Counts {
    pub top_orbits: usize,
    pub codim_orbits: usize,
}

#[derive(Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// `A x = v`; `x` indexed by codim-1 orbit.
    Solution { x: Vec<String> },
    /// `wᵀA ≡ 0`, `wᵀv ≢ 0 (mod modulus)`; `weights` lists nonzero entries as `[row, value]`.
    Witness {
        method: SolveMethod,
        index: usize,
        residue: String,
        divisor: String,
        modulus: String,
        weights: Vec<(usize, String)>,
    },
}

impl Certificate {
    pub fn new(result: &SolveResult) -> Self {
        match result {
            SolveResult::Solution(x) => Certificate::Solution { x: x.iter().map(big).collect() },
            SolveResult::Obstructed(o) => Certificate::Witness {
                method: o.method,
                index: o.index,
                residue: big(&o.residue),
                divisor: big(&o.divisor),
                modulus: big(&o.witness.modulus),
                weights: o
                    .witness
                    .weights
                    .iter()
                    .enumerate()
                    .filter(|(_, w)| **w != BigInt::from(0))
                    .map(|(i, w)| (i, big(w)))
                    .collect(),
            },
        }
    }
}

/// Decision part shared by the classical and prismatic obstruction reports.
#[derive(Debug, Serialize)]
pub struct Decision {
    pub counts: Counts,
    pub matrix: Shape,
    /// Nonzero cocycle values, keyed by top orbit representative.
    pub cocycle: BTreeMap<String, i64>,
    pub verdict: Verdict,
    pub certificate: Certificate,
    pub certificate_verified: bool,
    /// Smith invariant factors of the coboundary matrix, when it is small enough for the dense route.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariant_factors: Option<Vec<String>>,
}

impl Decision {
    pub fn new<C: Display>(system: &ObstructionSystem<C>, invariant_factors: Option<Vec<String>>) -> Self {
        let cocycle = system
            .top_reps
            .iter()
            .zip(&system.cocycle)
            .filter(|(_, &v)| v != 0)
            .map(|(c, &v)| (c.to_string(), v))
            .collect();
        Decision {
            counts: Counts { top_orbits: system.top_reps.len(), codim_orbits: system.codim_reps.len() },
            matrix: Shape { rows: system.matrix.rows(), cols: system.matrix.cols(), nnz: system.matrix.nnz() },
            cocycle,
            verdict: system.verdict(),
            certificate: Certificate::new(&system.result),
            certificate_verified: system.certificate_holds(),
            invariant_factors,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ApplicabilityFlags {
    pub codimension_at_least_three: bool,
    pub dimension_matches: bool,
    pub equidimensional: bool,
    pub verdict_is_geometric: bool,
}

impl From<Applicability> for ApplicabilityFlags {
    fn from(a: Applicability) -> Self {
        ApplicabilityFlags {
            codimension_at_least_three: a.codimension_at_least_three,
            dimension_matches: a.dimension_matches,
            equidimensional: a.equidimensional,
            verdict_is_geometric: a.verdict_is_geometric(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ObstructionReport {
    pub command: &'static str,
    pub complex: ComplexEcho,
    pub r: usize,
    pub d: usize,
    pub seed: u64,
    pub map_supplied: bool,
    /// Resampling nonce of the generic map, absent for a supplied map.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub map_nonce: Option<u64>,
    pub map: MapFile,
    pub applicability: ApplicabilityFlags,
    #[serde(flatten)]
    pub decision: Decision,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

#[derive(Debug, Serialize)]
pub struct CensusEntry {
    #[serde(rename = "type")]
    pub kind: Vec<usize>,
    pub count: usize,
}

pub fn census_entries(census: BTreeMap<Vec<usize>, usize>) -> Vec<CensusEntry> {
    census.into_iter().map(|(kind, count)| CensusEntry { kind, count }).collect()
}

#[derive(Debug, Serialize)]
pub struct ScanReport {
    pub command: &'static str,
    pub complex: ComplexEcho,
    pub r: usize,
    pub d: usize,
    pub hit_count: usize,
    pub census: Vec<CensusEntry>,
    pub hits: Vec<HitRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

#[derive(Debug, Serialize)]
pub struct PrismaticFlags {
    /// The realization theorem for this scheme is stated for `k >= 3` only.
    pub k_at_least_three: bool,
}

#[derive(Debug, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum PrismaticOutcome {
    Obstruction {
        applicability: PrismaticFlags,
        #[serde(flatten)]
        decision: Decision,
    },
    Scan {
        hit_count: usize,
        census: Vec<CensusEntry>,
        cross_validation: CrossValidation,
        hits: Vec<HitRecord>,
    },
    Signcheck {
        top_orbits: usize,
        sign_relation: SignCheck,
        passed: bool,
        conditions: PrismaticReport,
    },
}

#[derive(Debug, Serialize)]
pub struct PrismaticRunReport {
    pub command: &'static str,
    pub r: usize,
    pub k: usize,
    pub m: usize,
    pub d: usize,
    pub seed: u64,
    pub nonce: u64,
    pub heights: HeightsFile,
    #[serde(flatten)]
    pub outcome: PrismaticOutcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

#[derive(Debug, Serialize)]
pub struct SnfReport {
    pub command: &'static str,
    pub rows: usize,
    pub cols: usize,
    pub nnz: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariant_factors: Option<Vec<String>>,
    /// `D = U A V` with `U`, `V` unimodular, re-checked exactly.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snf_verified: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solvable: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate_verified: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}
