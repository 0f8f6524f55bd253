//! Exact computation of the r-fold Van Kampen obstruction.
//!
//! The pipeline: enumerate the top and codimension-one cells of the r-fold
//! deleted product of a complex, evaluate the intersection-number cocycle of a
//! generic affine map with exact rational arithmetic, and decide integrally
//! whether that cocycle is a sum of elementary equivariant coboundaries.
//! A brute-force Tverberg point enumerator ([`oracle`]) cross-checks every
//! cocycle value, and [`prismatic`] covers the fiber-product variant over the
//! colorful complex.

pub mod cocycle;
pub mod complex;
pub mod delprod;
pub mod error;
pub mod exactgeo;
pub mod obstruction;
pub mod oracle;
pub mod perm;
pub mod prismatic;
pub mod snf;

pub use cocycle::{CocycleVector, EquivariantCochain, EquivariantComplex};
pub use complex::{OrientedSimplex, SignedSum, Simplex, SimplicialComplex, Vertex};
pub use delprod::{DeletedProduct, DeletedProductCell};
pub use error::{Error, Result};
pub use exactgeo::{AffineChain, AffineSimplex, ExactAffineMap, Frame, QMatrix, Rat};
pub use oracle::TverbergHit;
pub use perm::Permutation;
pub use prismatic::{ColorScheme, PrismCell, PrismaticHeights};
pub use snf::{IntMatrix, SnfCertificate, SolveResult};
