//! Integer matrices, Smith normal form with unimodular certificates, and
//! integral solvability of `A x = v`.
//!
//! Systems up to [`DENSE_LIMIT`] in both dimensions go through a dense Smith
//! normal form. Larger (sparse) systems use column-echelon elimination with
//! a sparse record of the column transform. Either way a failed solve yields
//! a [`DualWitness`]: an integer row vector `w` and modulus `δ` with
//! `wᵀA ≡ 0` and `wᵀv ≢ 0 (mod δ)`, which rules out every integer solution.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest row or column count handled by the dense Smith normal form.
pub const DENSE_LIMIT: usize = 500;

type SparseCol = Vec<(usize, BigInt)>;

/// Integer matrix in compressed sparse column form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<SparseCol>,
}

/// On-disk form: `{"rows": R, "cols": S, "entries": [[i, j, val], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, i64)>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, columns: vec![Vec::new(); cols] }
    }

    /// Duplicate coordinates are summed.
    pub fn from_triplets(rows: usize, cols: usize, triplets: Vec<(usize, usize, BigInt)>) -> Result<Self> {
        let mut acc: Vec<BTreeMap<usize, BigInt>> = vec![BTreeMap::new(); cols];
        for (i, j, v) in triplets {
            if i >= rows || j >= cols {
                return Err(Error::Shape(format!("entry ({i}, {j}) outside a {rows}x{cols} matrix")));
            }
            *acc[j].entry(i).or_insert_with(BigInt::zero) += v;
        }
        let columns = acc.into_iter().map(|c| c.into_iter().filter(|(_, v)| !v.is_zero()).collect()).collect();
        Ok(IntMatrix { rows, cols, columns })
    }

    pub fn from_dense(rows: &[Vec<BigInt>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut triplets = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    triplets.push((i, j, v.clone()));
                }
            }
        }
        Self::from_triplets(r, c, triplets).expect("in range")
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let dense: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        Self::from_dense(&dense)
    }

    pub fn from_file(file: &MatrixFile) -> Result<Self> {
        Self::from_triplets(file.rows, file.cols, file.entries.iter().map(|&(i, j, v)| (i, j, v.into())).collect())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: MatrixFile = serde_json::from_str(text).map_err(|e| Error::Input(format!("matrix file: {e}")))?;
        Self::from_file(&file)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn column(&self, j: usize) -> &[(usize, BigInt)] {
        &self.columns[j]
    }

    pub fn get(&self, i: usize, j: usize) -> BigInt {
        let col = &self.columns[j];
        match col.binary_search_by_key(&i, |(r, _)| *r) {
            Ok(p) => col[p].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    /// Entry as `i64`; panics if it does not fit.
    pub fn get_i64(&self, i: usize, j: usize) -> i64 {
        i64::try_from(self.get(i, j)).expect("entry fits in i64")
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut m = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for (i, v) in col {
                m[*i][j] = v.clone();
            }
        }
        m
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        if x.len() != self.cols {
            return Err(Error::Shape(format!("vector of length {} for {} columns", x.len(), self.cols)));
        }
        let mut out = vec![BigInt::zero(); self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            if x[j].is_zero() {
                continue;
            }
            for (i, v) in col {
                out[*i] += v * &x[j];
            }
        }
        Ok(out)
    }

    /// `wᵀ A` as a row vector.
    pub fn left_mul(&self, w: &[BigInt]) -> Result<Vec<BigInt>> {
        if w.len() != self.rows {
            return Err(Error::Shape(format!("vector of length {} for {} rows", w.len(), self.rows)));
        }
        Ok(self.columns.iter().map(|col| col.iter().map(|(i, v)| v * &w[*i]).sum()).collect())
    }

    /// Rows and columns rearranged: entry `(i, j)` moves to `(row_perm[i], col_perm[j])`.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> IntMatrix {
        let mut triplets = Vec::with_capacity(self.nnz());
        for (j, col) in self.columns.iter().enumerate() {
            for (i, v) in col {
                triplets.push((row_perm[*i], col_perm[j], v.clone()));
            }
        }
        Self::from_triplets(self.rows, self.cols, triplets).expect("permutation in range")
    }
}

/// Integer row vector `w` and modulus `δ > 0` with `wᵀA ≡ 0` and `wᵀv ≢ 0 (mod δ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualWitness {
    pub weights: Vec<BigInt>,
    pub modulus: BigInt,
}

impl DualWitness {
    /// Re-check the witness against `A` and `v`.
    pub fn check(&self, a: &IntMatrix, v: &[BigInt]) -> bool {
        if !self.modulus.is_positive() || v.len() != a.rows() {
            return false;
        }
        let Ok(row) = a.left_mul(&self.weights) else {
            return false;
        };
        let wv: BigInt = self.weights.iter().zip(v).map(|(w, x)| w * x).sum();
        row.iter().all(|x| x.mod_floor(&self.modulus).is_zero()) && !wv.mod_floor(&self.modulus).is_zero()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMethod {
    Smith,
    ColumnEchelon,
}

/// Where the integral solve failed: `residue` is the transformed right-hand
/// side entry at `index`, not divisible by `divisor` (`divisor = 0` means
/// the entry lies beyond the rank and had to vanish).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obstruction {
    pub method: SolveMethod,
    pub index: usize,
    pub residue: BigInt,
    pub divisor: BigInt,
    pub witness: DualWitness,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveResult {
    Solution(Vec<BigInt>),
    Obstructed(Obstruction),
}

impl SolveResult {
    pub fn is_solution(&self) -> bool {
        matches!(self, SolveResult::Solution(_))
    }
}

/// `D = U·A·V` with `U`, `V` unimodular and `D` diagonal with
/// `d_1 | d_2 | … | d_rank`, all positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfCertificate {
    pub u: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
    pub diagonal: Vec<BigInt>,
    rows: usize,
    cols: usize,
}

struct Work {
    m: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
}

impl Work {
    fn row_sub(&mut self, target: usize, src: usize, q: &BigInt, from: usize) {
        let (t, s) = two_rows(&mut self.m, target, src);
        for j in from..t.len() {
            if !s[j].is_zero() {
                t[j] -= q * &s[j];
            }
        }
        let (t, s) = two_rows(&mut self.u, target, src);
        for j in 0..t.len() {
            if !s[j].is_zero() {
                t[j] -= q * &s[j];
            }
        }
    }

    fn col_sub(&mut self, target: usize, src: usize, q: &BigInt, from: usize) {
        for row in self.m.iter_mut().skip(from) {
            if !row[src].is_zero() {
                let x = q * &row[src];
                row[target] -= x;
            }
        }
        for row in self.v.iter_mut() {
            if !row[src].is_zero() {
                let x = q * &row[src];
                row[target] -= x;
            }
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.m.swap(a, b);
        self.u.swap(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for row in self.m.iter_mut() {
            row.swap(a, b);
        }
        for row in self.v.iter_mut() {
            row.swap(a, b);
        }
    }

    /// Smallest nonzero |entry| in the submatrix from `(t, t)`, ties by (row, col).
    fn find_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in self.m.iter().enumerate().skip(t) {
            for (j, x) in row.iter().enumerate().skip(t) {
                if x.is_zero() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bi, bj)) => x.magnitude() < self.m[bi][bj].magnitude(),
                };
                if better {
                    best = Some((i, j));
                }
            }
        }
        best
    }
}

fn two_rows<T>(m: &mut [Vec<T>], a: usize, b: usize) -> (&mut Vec<T>, &Vec<T>) {
    assert_ne!(a, b);
    if a < b {
        let (lo, hi) = m.split_at_mut(b);
        (&mut lo[a], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(a);
        (&mut hi[0], &lo[b])
    }
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

/// Dense Smith normal form with a deterministic pivot policy: the smallest
/// nonzero absolute value in the remaining submatrix, ties by (row, col).
pub fn smith_normal_form(a: &IntMatrix) -> SnfCertificate {
    let (rows, cols) = (a.rows(), a.cols());
    let mut w = Work { m: a.to_dense(), u: identity(rows), v: identity(cols) };
    let mut diagonal = Vec::new();
    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = w.find_pivot(t) else {
            break;
        };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let p = w.m[t][t].clone();
            let mut clean = true;
            for i in t + 1..rows {
                if !w.m[i][t].is_zero() {
                    let q = &w.m[i][t] / &p;
                    w.row_sub(i, t, &q, t);
                    clean &= w.m[i][t].is_zero();
                }
            }
            for j in t + 1..cols {
                if !w.m[t][j].is_zero() {
                    let q = &w.m[t][j] / &p;
                    w.col_sub(j, t, &q, t);
                    clean &= w.m[t][j].is_zero();
                }
            }
            if !clean {
                let (pi, pj) = w.find_pivot(t).expect("nonzero entries remain");
                w.swap_rows(t, pi);
                w.swap_cols(t, pj);
                continue;
            }
            let offender = (t + 1..rows).find(|&i| w.m[i][t + 1..].iter().any(|x| !x.mod_floor(&p).is_zero()));
            match offender {
                Some(i) => {
                    // row_t += row_i brings a non-multiple into the pivot row
                    let minus_one = -BigInt::one();
                    w.row_sub(t, i, &minus_one, t);
                }
                None => break,
            }
        }
        if w.m[t][t].is_negative() {
            for x in w.m[t].iter_mut() {
                *x = -std::mem::take(x);
            }
            for x in w.u[t].iter_mut() {
                *x = -std::mem::take(x);
            }
        }
        diagonal.push(w.m[t][t].clone());
    }
    SnfCertificate { u: w.u, v: w.v, diagonal, rows, cols }
}

fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>], inner: usize, cols: usize) -> Vec<Vec<BigInt>> {
    a.iter()
        .map(|row| {
            let mut out = vec![BigInt::zero(); cols];
            for k in 0..inner {
                if row[k].is_zero() {
                    continue;
                }
                for (j, o) in out.iter_mut().enumerate() {
                    if !b[k][j].is_zero() {
                        *o += &row[k] * &b[k][j];
                    }
                }
            }
            out
        })
        .collect()
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let x = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = x / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

impl SnfCertificate {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// The full `R×S` diagonal matrix `D`.
    pub fn d_matrix(&self) -> Vec<Vec<BigInt>> {
        let mut d = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (i, x) in self.diagonal.iter().enumerate() {
            d[i][i] = x.clone();
        }
        d
    }

    /// Check `D = U·A·V` and the divisibility chain; with `unimodular`, also
    /// `|det U| = |det V| = 1`.
    pub fn verify(&self, a: &IntMatrix, unimodular: bool) -> std::result::Result<(), String> {
        if (a.rows(), a.cols()) != (self.rows, self.cols) {
            return Err("shape mismatch".into());
        }
        let ua = mat_mul(&self.u, &a.to_dense(), self.rows, self.cols);
        let uav = mat_mul(&ua, &self.v, self.cols, self.cols);
        if uav != self.d_matrix() {
            return Err("D != U·A·V".into());
        }
        if self.diagonal.iter().any(|x| !x.is_positive()) {
            return Err("nonpositive invariant factor".into());
        }
        if self.diagonal.windows(2).any(|w| !w[1].is_multiple_of(&w[0])) {
            return Err("divisibility chain broken".into());
        }
        if unimodular {
            for (name, m) in [("U", &self.u), ("V", &self.v)] {
                if determinant(m).magnitude() != &One::one() {
                    return Err(format!("{name} is not unimodular"));
                }
            }
        }
        Ok(())
    }

    /// Solve `A x = v` through the certificate: `y = U v`, `x = V (y_i / d_i)`.
    pub fn solve(&self, v: &[BigInt]) -> Result<SolveResult> {
        if v.len() != self.rows {
            return Err(Error::Shape(format!("right-hand side of length {} for {} rows", v.len(), self.rows)));
        }
        let y: Vec<BigInt> = self.u.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect();
        let mut z = vec![BigInt::zero(); self.cols];
        for (i, yi) in y.iter().enumerate() {
            let (divisor, fails) = match self.diagonal.get(i) {
                Some(d) => (d.clone(), !yi.is_multiple_of(d)),
                None => (BigInt::zero(), !yi.is_zero()),
            };
            if fails {
                let modulus = if divisor.is_zero() { BigInt::from(2) * yi.abs() } else { divisor.clone() };
                let witness = DualWitness { weights: self.u[i].clone(), modulus };
                return Ok(SolveResult::Obstructed(Obstruction {
                    method: SolveMethod::Smith,
                    index: i,
                    residue: yi.clone(),
                    divisor,
                    witness,
                }));
            }
            if i < self.rank() {
                z[i] = yi / &self.diagonal[i];
            }
        }
        let x = self.v.iter().map(|row| row.iter().zip(&z).map(|(a, b)| a * b).sum()).collect();
        Ok(SolveResult::Solution(x))
    }
}

/// Exact check of `A x = v`.
pub fn verify(a: &IntMatrix, x: &[BigInt], v: &[BigInt]) -> Result<bool> {
    if v.len() != a.rows() {
        return Err(Error::Shape(format!("right-hand side of length {} for {} rows", v.len(), a.rows())));
    }
    Ok(a.mul_vec(x)? == v)
}

/// Decide whether `v` lies in the integer column span of `A`.
pub fn solve_integer(a: &IntMatrix, v: &[BigInt]) -> Result<SolveResult> {
    if v.len() != a.rows() {
        return Err(Error::Shape(format!("right-hand side of length {} for {} rows", v.len(), a.rows())));
    }
    if a.rows() <= DENSE_LIMIT && a.cols() <= DENSE_LIMIT {
        smith_normal_form(a).solve(v)
    } else {
        solve_echelon(a, v)
    }
}

fn col_axpy(target: &SparseCol, q: &BigInt, src: &SparseCol) -> SparseCol {
    let mut out = Vec::with_capacity(target.len() + src.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < src.len() {
        let ti = target.get(i).map(|e| e.0);
        let sj = src.get(j).map(|e| e.0);
        match (ti, sj) {
            (Some(a), Some(b)) if a == b => {
                let x = &target[i].1 - q * &src[j].1;
                if !x.is_zero() {
                    out.push((a, x));
                }
                i += 1;
                j += 1;
            }
            (Some(a), Some(b)) if a < b => {
                out.push(target[i].clone());
                i += 1;
            }
            (Some(_), None) => {
                out.push(target[i].clone());
                i += 1;
            }
            (_, Some(b)) => {
                out.push((b, -(q * &src[j].1)));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// Column-echelon elimination `A·W = H` (W unimodular, tracked sparsely)
/// followed by forward substitution `H z = v`, `x = W z`.
pub fn solve_echelon(a: &IntMatrix, v: &[BigInt]) -> Result<SolveResult> {
    if v.len() != a.rows() {
        return Err(Error::Shape(format!("right-hand side of length {} for {} rows", v.len(), a.rows())));
    }
    let s = a.cols();
    let mut h: Vec<SparseCol> = a.columns.clone();
    let mut w: Vec<SparseCol> = (0..s).map(|j| vec![(j, BigInt::one())]).collect();
    let mut active: BTreeSet<(usize, usize)> =
        h.iter().enumerate().filter(|(_, c)| !c.is_empty()).map(|(j, c)| (c[0].0, j)).collect();
    let mut pivots: BTreeMap<usize, usize> = BTreeMap::new();
    while let Some(&(row, _)) = active.first() {
        let mut group: Vec<usize> = Vec::new();
        while let Some(&(r0, c)) = active.first() {
            if r0 != row {
                break;
            }
            active.pop_first();
            group.push(c);
        }
        while group.len() > 1 {
            let (best_pos, &best) = group
                .iter()
                .enumerate()
                .min_by(|(_, &x), (_, &y)| h[x][0].1.magnitude().cmp(h[y][0].1.magnitude()).then(x.cmp(&y)))
                .expect("nonempty group");
            let mut next = vec![best];
            for (pos, &c) in group.iter().enumerate() {
                if pos == best_pos {
                    continue;
                }
                let q = &h[c][0].1 / &h[best][0].1;
                h[c] = col_axpy(&h[c], &q, &h[best]);
                w[c] = col_axpy(&w[c], &q, &w[best]);
                match h[c].first() {
                    Some(&(r, _)) if r == row => next.push(c),
                    Some(&(r, _)) => {
                        active.insert((r, c));
                    }
                    None => {}
                }
            }
            group = next;
        }
        pivots.insert(row, group[0]);
    }

    let mut res: Vec<BigInt> = v.to_vec();
    let mut z = vec![BigInt::zero(); s];
    for i in 0..a.rows() {
        if res[i].is_zero() {
            continue;
        }
        let pivot = pivots.get(&i).copied();
        let divisible = pivot.map(|c| res[i].is_multiple_of(&h[c][0].1));
        if divisible != Some(true) {
            let witness = echelon_witness(a.rows(), &h, &pivots, i, &res[i], pivot);
            return Ok(SolveResult::Obstructed(Obstruction {
                method: SolveMethod::ColumnEchelon,
                index: i,
                residue: res[i].clone(),
                divisor: pivot.map_or_else(BigInt::zero, |c| h[c][0].1.clone()),
                witness,
            }));
        }
        let c = pivot.expect("pivot present");
        let q = &res[i] / &h[c][0].1;
        for (r, x) in &h[c] {
            res[*r] -= &q * x;
        }
        z[c] = q;
    }
    let mut x = vec![BigInt::zero(); s];
    for (c, zc) in z.iter().enumerate() {
        if zc.is_zero() {
            continue;
        }
        for (r, val) in &w[c] {
            x[*r] += zc * val;
        }
    }
    Ok(SolveResult::Solution(x))
}

/// Dual witness for a failure at row `i`: `y = e_i − Σ u_l e_{p_l}` annihilates
/// every pivot column led above `i`; scaled to integers.
fn echelon_witness(
    rows: usize,
    h: &[SparseCol],
    pivots: &BTreeMap<usize, usize>,
    i: usize,
    residue: &BigInt,
    pivot_here: Option<usize>,
) -> DualWitness {
    let earlier: Vec<(usize, usize)> = pivots.range(..i).map(|(&r, &c)| (r, c)).collect();
    let index_of: BTreeMap<usize, usize> = earlier.iter().enumerate().map(|(l, &(r, _))| (r, l)).collect();
    let mut u: Vec<BigRational> = vec![BigRational::zero(); earlier.len()];
    for l in (0..earlier.len()).rev() {
        let (p, c) = earlier[l];
        let mut acc = BigRational::zero();
        for (r, val) in &h[c] {
            if *r == i {
                acc += BigRational::from_integer(val.clone());
            } else if let Some(&l2) = index_of.get(r) {
                if l2 > l {
                    acc -= &u[l2] * BigRational::from_integer(val.clone());
                }
            }
        }
        debug_assert_eq!(h[c][0].0, p);
        u[l] = acc / BigRational::from_integer(h[c][0].1.clone());
    }
    let denom = u.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut weights = vec![BigInt::zero(); rows];
    weights[i] = denom.clone();
    for (l, &(p, _)) in earlier.iter().enumerate() {
        weights[p] = -(&u[l] * BigRational::from_integer(denom.clone())).to_integer();
    }
    let modulus = match pivot_here {
        Some(c) => h[c][0].1.abs(),
        None => BigInt::from(2) * residue.abs(),
    };
    DualWitness { weights, modulus: modulus * denom }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn snf_examples() {
        let c = smith_normal_form(&IntMatrix::from_i64(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(c.diagonal, big(&[1, 6]));
        let a = IntMatrix::from_i64(&[vec![2, 4], vec![6, 8]]);
        let c = smith_normal_form(&a);
        assert_eq!(c.diagonal, big(&[2, 4]));
        c.verify(&a, true).unwrap();
        let z = IntMatrix::zeros(2, 3);
        let c = smith_normal_form(&z);
        assert!(c.diagonal.is_empty());
        assert_eq!(c.u, identity(2));
        assert_eq!(c.v, identity(3));
    }

    #[test]
    fn solve_examples() {
        let a = IntMatrix::from_i64(&[vec![2]]);
        match solve_integer(&a, &big(&[1])).unwrap() {
            SolveResult::Obstructed(o) => {
                assert_eq!(o.divisor, BigInt::from(2));
                assert!(o.witness.check(&a, &big(&[1])));
            }
            other => panic!("expected obstruction, got {other:?}"),
        }
        let a = IntMatrix::from_i64(&[vec![4, 6]]);
        let SolveResult::Solution(x) = solve_integer(&a, &big(&[2])).unwrap() else { panic!() };
        assert!(verify(&a, &x, &big(&[2])).unwrap());

        let diag = IntMatrix::from_i64(&[vec![1, 0, 0], vec![0, 2, 0], vec![0, 0, 0]]);
        for b in -2..=2 {
            for c in -1..=1 {
                let v = big(&[3, b, c]);
                let solvable = b % 2 == 0 && c == 0;
                let res = solve_integer(&diag, &v).unwrap();
                assert_eq!(res.is_solution(), solvable, "b={b} c={c}");
                match res {
                    SolveResult::Solution(x) => assert!(verify(&diag, &x, &v).unwrap()),
                    SolveResult::Obstructed(o) => assert!(o.witness.check(&diag, &v)),
                }
            }
        }
    }

    #[test]
    fn verify_rejects_bad_vectors() {
        let a = IntMatrix::from_i64(&[vec![1, 2], vec![3, 4]]);
        let x = big(&[1, -1]);
        let v = a.mul_vec(&x).unwrap();
        assert!(verify(&a, &x, &v).unwrap());
        let mut w = v.clone();
        w[0] += 1;
        assert!(!verify(&a, &x, &w).unwrap());
        assert!(verify(&a, &x, &big(&[1])).is_err());
    }

    #[test]
    fn determinant_examples() {
        let m = vec![big(&[2, 4]), big(&[6, 8])];
        assert_eq!(determinant(&m), BigInt::from(-8));
        let m = vec![big(&[0, 1, 0]), big(&[1, 0, 0]), big(&[0, 0, 5])];
        assert_eq!(determinant(&m), BigInt::from(-5));
    }

    #[test]
    fn echelon_agrees_with_smith() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let (r, s) = (rng.gen_range(1..7), rng.gen_range(1..7));
            let rows: Vec<Vec<i64>> = (0..r)
                .map(|_| (0..s).map(|_| if rng.gen_bool(0.5) { 0 } else { rng.gen_range(-4..=4) }).collect())
                .collect();
            let a = IntMatrix::from_i64(&rows);
            let v: Vec<BigInt> = (0..r).map(|_| BigInt::from(rng.gen_range(-5..=5))).collect();
            let smith = smith_normal_form(&a).solve(&v).unwrap();
            let ech = solve_echelon(&a, &v).unwrap();
            assert_eq!(smith.is_solution(), ech.is_solution(), "{rows:?} {v:?}");
            for res in [smith, ech] {
                match res {
                    SolveResult::Solution(x) => assert!(verify(&a, &x, &v).unwrap()),
                    SolveResult::Obstructed(o) => assert!(o.witness.check(&a, &v), "{o:?}"),
                }
            }
        }
    }
}
