//! Exact rational geometry: affine simplices, r-fold intersection points and
//! their orientation signs, and intersection numbers of chains.

mod chain;
mod linalg;
mod map;
mod sign;
mod simplex;

pub use chain::{chain_boundary, intersection_number, AffineChain};
pub use linalg::QMatrix;
pub use map::{sample_generic_map, sample_generic_map_with, ExactAffineMap, MapFile, MAX_RETRIES};
pub use sign::{
    det_route_sign, epsilon, epsilon_rk, inductive_sign, intersect_subspaces, oriented_intersection,
    oriented_intersection_basis, r_fold_sign, reflect_frames, sign_via_restriction, unraveled_sign,
};
pub use simplex::{
    affine_hull_intersection_dim, hulls_meet, intersection_point, AffineSimplex, Frame, Intersection, Point,
};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Exact rational number in canonical form.
pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parse `"num/den"` or `"num"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Input(format!("not a rational number: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => {
            (n.trim().parse::<BigInt>().map_err(|_| bad())?, d.trim().parse::<BigInt>().map_err(|_| bad())?)
        }
        None => (s.parse::<BigInt>().map_err(|_| bad())?, BigInt::from(1)),
    };
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(num, den))
}

/// Always `"num/den"`, with a positive denominator.
pub fn format_rat(x: &Rat) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rat("3/6").unwrap(), rat_frac(1, 2));
        assert_eq!(parse_rat(" -4 ").unwrap(), rat(-4));
        assert_eq!(parse_rat("1/-2").unwrap(), rat_frac(-1, 2));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
        assert_eq!(format_rat(&rat(3)), "3/1");
        assert_eq!(format_rat(&rat_frac(2, -4)), "-1/2");
    }
}
