use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_bigint::BigInt;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use vankampen_core::exactgeo::MapFile;
use vankampen_core::obstruction::{applicability, run_obstruction, ObstructionConfig, ObstructionSystem};
use vankampen_core::oracle::{cross_validate_prismatic, enumerate_tverberg, type_census, DEFAULT_TUPLE_CAP};
use vankampen_core::prismatic::{
    check_prismatic, check_prismatic_generic, prismatic_cocycle_on, prismatic_obstruction, reps_of_x,
    sample_prismatic_heights_with, sign_relation, PrismaticMap,
};
use vankampen_core::snf::{smith_normal_form, solve_integer, MatrixFile, DENSE_LIMIT};
use vankampen_core::{ColorScheme, Error, ExactAffineMap, IntMatrix, SimplicialComplex};

use crate::error::{CliError, CliResult};
use crate::report::{
    big, census_entries, Certificate, ComplexEcho, Decision, ObstructionReport, PrismaticFlags, PrismaticOutcome,
    PrismaticRunReport, ScanReport, SnfReport,
};

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_owned(), source })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json { path: path.to_owned(), source })
}

fn read_complex(path: &Path) -> CliResult<SimplicialComplex> {
    Ok(SimplicialComplex::from_file(&read_json(path)?)?)
}

fn read_map(path: &Path) -> CliResult<ExactAffineMap> {
    Ok(ExactAffineMap::from_file(&read_json::<MapFile>(path)?)?)
}

fn elapsed(start: Instant, timing: bool) -> Option<u128> {
    timing.then(|| start.elapsed().as_millis())
}

fn invariant_factors<C>(system: &ObstructionSystem<C>) -> Option<Vec<String>> {
    let a = &system.matrix;
    (a.rows() <= DENSE_LIMIT && a.cols() <= DENSE_LIMIT)
        .then(|| smith_normal_form(a).diagonal.iter().map(big).collect())
}

pub struct ObstructionArgs {
    pub complex: PathBuf,
    pub map: Option<PathBuf>,
    pub r: usize,
    pub d: usize,
    pub seed: u64,
    pub max_orbits: Option<usize>,
    pub timing: bool,
}

pub fn obstruction(args: &ObstructionArgs) -> CliResult<ObstructionReport> {
    let start = Instant::now();
    let k = read_complex(&args.complex)?;
    let map = args.map.as_deref().map(read_map).transpose()?;
    let mut cfg = ObstructionConfig::new(args.r, args.d, args.seed);
    if let Some(cap) = args.max_orbits {
        cfg.max_orbits = cap;
    }
    let map_supplied = map.is_some();
    let run = run_obstruction(&k, &cfg, map)?;
    let decision = Decision::new(&run.system, invariant_factors(&run.system));
    Ok(ObstructionReport {
        command: "obstruction",
        complex: ComplexEcho::new(&k),
        r: args.r,
        d: args.d,
        seed: args.seed,
        map_supplied,
        map_nonce: run.nonce,
        map: run.map.to_file(),
        applicability: applicability(&k, args.r, args.d).into(),
        decision,
        timing_ms: elapsed(start, args.timing),
    })
}

pub struct ScanArgs {
    pub complex: PathBuf,
    pub map: PathBuf,
    pub r: usize,
    pub max_tuples: Option<usize>,
    pub timing: bool,
}

pub fn tverberg_scan(args: &ScanArgs) -> CliResult<ScanReport> {
    let start = Instant::now();
    let k = read_complex(&args.complex)?;
    let f = read_map(&args.map)?;
    f.check_domain(&k)?;
    if args.r < 2 {
        return Err(CliError::Usage("--r must be at least 2".into()));
    }
    let hits = enumerate_tverberg(&k, args.r, &f, args.max_tuples.unwrap_or(DEFAULT_TUPLE_CAP))?;
    Ok(ScanReport {
        command: "tverberg-scan",
        complex: ComplexEcho::new(&k),
        r: args.r,
        d: f.d(),
        hit_count: hits.len(),
        census: census_entries(type_census(&hits)),
        hits: hits.iter().map(|h| h.record()).collect(),
        timing_ms: elapsed(start, args.timing),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum PrismaticMode {
    Obstruction,
    Scan,
    Signcheck,
}

pub struct PrismaticArgs {
    pub r: usize,
    pub k: usize,
    pub seed: u64,
    pub mode: PrismaticMode,
    pub max_orbits: Option<u128>,
    pub timing: bool,
}

pub fn prismatic(args: &PrismaticArgs) -> CliResult<PrismaticRunReport> {
    let start = Instant::now();
    let scheme = ColorScheme::new(args.r, args.k)?;
    let cap = args.max_orbits.unwrap_or(vankampen_core::prismatic::DEFAULT_MAX_ORBITS);
    let (heights, nonce, outcome) = match args.mode {
        PrismaticMode::Obstruction => {
            let run = prismatic_obstruction(&scheme, args.seed, cap)?;
            let decision = Decision::new(&run.system, invariant_factors(&run.system));
            let outcome = PrismaticOutcome::Obstruction {
                applicability: PrismaticFlags { k_at_least_three: args.k >= 3 },
                decision,
            };
            (run.heights, run.nonce, outcome)
        }
        PrismaticMode::Scan => {
            let m = scheme.m();
            let top = reps_of_x(&scheme, m, Some(cap))?;
            let codim = if m == 0 { Vec::new() } else { reps_of_x(&scheme, m - 1, Some(cap))? };
            let sigma = SimplicialComplex::full_simplex(scheme.big_n());
            let mut hits = Vec::new();
            let (heights, nonce) = sample_prismatic_heights_with(&scheme, args.seed, |h| {
                check_prismatic_generic(h, &top, &codim)?;
                let f = h.affine_map().map_err(|_| Error::Degenerate("repeated vertex image".into()))?;
                hits = enumerate_tverberg(&sigma, scheme.r(), &f, DEFAULT_TUPLE_CAP)?;
                Ok(())
            })?;
            let phi = prismatic_cocycle_on(&heights, &top)?;
            let cross_validation = cross_validate_prismatic(&heights, &phi, &top, &hits)?;
            let outcome = PrismaticOutcome::Scan {
                hit_count: hits.len(),
                census: census_entries(type_census(&hits)),
                cross_validation,
                hits: hits.iter().map(|h| h.record()).collect(),
            };
            (heights, nonce, outcome)
        }
        PrismaticMode::Signcheck => {
            let m = scheme.m();
            let top = reps_of_x(&scheme, m, Some(cap))?;
            let codim = if m == 0 { Vec::new() } else { reps_of_x(&scheme, m - 1, Some(cap))? };
            let (heights, nonce) =
                sample_prismatic_heights_with(&scheme, args.seed, |h| check_prismatic_generic(h, &top, &codim))?;
            let sign = sign_relation(&heights, &top)?;
            let conditions = check_prismatic(&PrismaticMap::from_heights(&heights))?;
            let passed = sign.passed();
            let outcome =
                PrismaticOutcome::Signcheck { top_orbits: top.len(), sign_relation: sign, passed, conditions };
            (heights, nonce, outcome)
        }
    };
    Ok(PrismaticRunReport {
        command: "prismatic",
        r: args.r,
        k: args.k,
        m: scheme.m(),
        d: scheme.d(),
        seed: args.seed,
        nonce,
        heights: heights.to_file(),
        outcome,
        timing_ms: elapsed(start, args.timing),
    })
}

/// A right-hand side: integers as JSON numbers or decimal strings.
#[derive(Deserialize)]
#[serde(untagged)]
enum Entry {
    Int(i64),
    Text(String),
}

fn read_vector(path: &Path) -> CliResult<Vec<BigInt>> {
    let entries: Vec<Entry> = read_json(path)?;
    entries
        .into_iter()
        .map(|e| match e {
            Entry::Int(x) => Ok(BigInt::from(x)),
            Entry::Text(s) => {
                s.trim().parse().map_err(|_| CliError::Core(Error::Input(format!("not an integer: {s:?}"))))
            }
        })
        .collect()
}

pub struct SnfArgs {
    pub matrix: PathBuf,
    pub v: Option<PathBuf>,
    pub timing: bool,
}

pub fn snf(args: &SnfArgs) -> CliResult<SnfReport> {
    let start = Instant::now();
    let a = IntMatrix::from_file(&read_json::<MatrixFile>(&args.matrix)?)?;
    let mut report = SnfReport {
        command: "snf",
        rows: a.rows(),
        cols: a.cols(),
        nnz: a.nnz(),
        rank: None,
        invariant_factors: None,
        snf_verified: None,
        solvable: None,
        certificate: None,
        certificate_verified: None,
        timing_ms: None,
    };
    if a.rows() <= DENSE_LIMIT && a.cols() <= DENSE_LIMIT {
        let cert = smith_normal_form(&a);
        if let Err(why) = cert.verify(&a, true) {
            return Err(Error::Certificate(why).into());
        }
        report.rank = Some(cert.rank());
        report.invariant_factors = Some(cert.diagonal.iter().map(big).collect());
        report.snf_verified = Some(true);
    }
    if let Some(path) = &args.v {
        let v = read_vector(path)?;
        let result = solve_integer(&a, &v)?;
        let verified = match &result {
            vankampen_core::SolveResult::Solution(x) => vankampen_core::snf::verify(&a, x, &v)?,
            vankampen_core::SolveResult::Obstructed(o) => o.witness.check(&a, &v),
        };
        if !verified {
            return Err(Error::Certificate("solver output does not check against A and v".into()).into());
        }
        report.solvable = Some(result.is_solution());
        report.certificate = Some(Certificate::new(&result));
        report.certificate_verified = Some(true);
    }
    report.timing_ms = elapsed(start, args.timing);
    Ok(report)
}
