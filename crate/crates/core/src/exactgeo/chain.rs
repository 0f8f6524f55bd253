use super::{intersection_point, r_fold_sign, AffineSimplex};
use crate::error::{Error, Result};

/// Integer combination of equal-dimensional affine simplices. Terms are kept
/// with reference orientation; orientation twists move into the coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AffineChain {
    terms: Vec<(i64, AffineSimplex)>,
}

impl AffineChain {
    pub fn new(terms: Vec<(i64, AffineSimplex)>) -> Result<Self> {
        if let Some((_, first)) = terms.first() {
            let (m, d) = (first.dim(), first.ambient_dim());
            if terms.iter().any(|(_, s)| s.dim() != m || s.ambient_dim() != d) {
                return Err(Error::Input("chain terms of different dimensions".into()));
            }
        }
        let mut chain = AffineChain::default();
        for (c, s) in terms {
            chain.add(c * s.orientation(), s.with_orientation(1));
        }
        Ok(chain)
    }

    pub fn single(s: AffineSimplex) -> Self {
        AffineChain::new(vec![(1, s)]).expect("single term")
    }

    fn add(&mut self, coeff: i64, s: AffineSimplex) {
        if coeff == 0 {
            return;
        }
        if let Some(pos) = self.terms.iter().position(|(_, t)| t.points() == s.points()) {
            self.terms[pos].0 += coeff;
            if self.terms[pos].0 == 0 {
                self.terms.remove(pos);
            }
        } else {
            self.terms.push((coeff, s));
        }
    }

    pub fn terms(&self) -> &[(i64, AffineSimplex)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Dimension of the terms, `None` for the zero chain.
    pub fn dim(&self) -> Option<usize> {
        self.terms.first().map(|(_, s)| s.dim())
    }

    pub fn scaled(&self, k: i64) -> AffineChain {
        AffineChain { terms: self.terms.iter().map(|(c, s)| (c * k, s.clone())).filter(|(c, _)| *c != 0).collect() }
    }
}

/// Alternating sum of facets; dimension-0 facets become weighted points.
pub fn chain_boundary(c: &AffineChain) -> Result<AffineChain> {
    let mut out = AffineChain::default();
    for (coeff, s) in c.terms() {
        if s.dim() == 0 {
            return Err(Error::Input("boundary of a 0-dimensional chain term".into()));
        }
        for i in 0..=s.dim() {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            out.add(coeff * sign, s.facet(i));
        }
    }
    Ok(out)
}

/// Algebraic intersection number `c_1 · … · c_r`: the sum over all common
/// points of cross terms of coefficient products times the r-fold sign.
pub fn intersection_number(chains: &[AffineChain]) -> Result<i64> {
    if chains.len() < 2 {
        return Err(Error::Input("need at least two chains".into()));
    }
    if chains.iter().any(AffineChain::is_zero) {
        return Ok(0);
    }
    let d = chains[0].terms[0].1.ambient_dim();
    let r = chains.len();
    let total: usize = chains.iter().filter_map(AffineChain::dim).sum();
    if total != d * (r - 1) {
        return Err(Error::Input(format!("dimension sum {total} differs from d(r-1) = {}", d * (r - 1))));
    }
    let mut sum = 0i64;
    let mut idx = vec![0usize; r];
    loop {
        let tuple: Vec<AffineSimplex> = idx.iter().zip(chains).map(|(&i, c)| c.terms[i].1.clone()).collect();
        if intersection_point(&tuple)?.is_some() {
            let coeff: i64 = idx.iter().zip(chains).map(|(&i, c)| c.terms[i].0).product();
            sum += coeff * r_fold_sign(&tuple)?;
        }
        // odometer
        let mut pos = r;
        loop {
            if pos == 0 {
                return Ok(sum);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < chains[pos].terms.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}
