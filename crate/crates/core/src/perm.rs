//! Permutations of `{0, .., r-1}` in image notation.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `Permutation(p)` maps `i` to `p[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(r: usize) -> Self {
        Permutation((0..r).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::Input(format!("not a permutation: {images:?}")));
            }
        }
        Ok(Permutation(images))
    }

    pub fn transposition(r: usize, a: usize, b: usize) -> Self {
        let mut p = Self::identity(r);
        p.0.swap(a, b);
        p
    }

    pub fn random<R: Rng + ?Sized>(r: usize, rng: &mut R) -> Self {
        let mut p = Self::identity(r);
        p.0.shuffle(rng);
        p
    }

    /// All permutations of `r` letters in lexicographic order of image lists.
    pub fn all(r: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur = Self::identity(r).0;
        loop {
            out.push(Permutation(cur.clone()));
            // next lexicographic permutation
            let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) else {
                break;
            };
            let j = (i..cur.len()).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
        out
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// `self ∘ other`, i.e. `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len());
        Permutation(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &p) in self.0.iter().enumerate() {
            inv[p] = i;
        }
        Permutation(inv)
    }

    /// Pairs `a < b` with `π(a) > π(b)`.
    pub fn inversions(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.len();
        (0..n).flat_map(move |a| ((a + 1)..n).map(move |b| (a, b))).filter(move |&(a, b)| self.0[a] > self.0[b])
    }

    pub fn sign(&self) -> i64 {
        if self.inversions().count() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// `(sign π)^e`.
    pub fn sign_pow(&self, e: usize) -> i64 {
        if e % 2 == 0 {
            1
        } else {
            self.sign()
        }
    }

    /// The permutation sorting `items` ascending: `items[π(0)] <= items[π(1)] <= ...`.
    pub fn sorting<T: Ord>(items: &[T]) -> Permutation {
        let mut idx: Vec<usize> = (0..items.len()).collect();
        idx.sort_by(|&a, &b| items[a].cmp(&items[b]));
        Permutation(idx)
    }

    /// Reorder `items` so that position `a` receives `items[π(a)]`.
    pub fn reorder<T: Clone>(&self, items: &[T]) -> Vec<T> {
        self.0.iter().map(|&i| items[i].clone()).collect()
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", p + 1)?;
        }
        write!(f, ")")
    }
}
