//! Refined Göttsche–Schroeter invariants of h-transverse lattice polygons in
//! any genus, computed by exhaustive enumeration of marked floor diagrams.
//!
//! The pipeline is
//! [`polygon`] (lattice data and boundary profile) →
//! [`diagram`] (floor diagrams up to isomorphism) →
//! [`marking`] (markings, pairings and refined multiplicities) →
//! [`invariant`] (the invariants `G_g(Δ, s)` and the property checkers).
//!
//! All values are exact. Laurent coefficients are generic over [`Coefficient`];
//! [`Laurent`] (checked `i64`) is the default and [`BigLaurent`] never overflows.

pub mod checks;
pub mod diagram;
pub mod error;
pub mod invariant;
pub mod laurent;
pub mod marking;
pub mod polygon;

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, Signed};

pub use diagram::{Element, FloorDiagram};
pub use error::Error;
pub use invariant::{GenusComputation, InvariantTable};
pub use laurent::{LaurentError, SymLaurent};
pub use marking::{Marking, Pairing};
pub use polygon::{HProfile, LatticePolygon, LatticeTransform, PolygonData};

/// Exact signed integer ring usable as a Laurent coefficient.
pub trait Coefficient:
    Clone
    + Debug
    + Display
    + Ord
    + Hash
    + Integer
    + Signed
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + FromPrimitive
    + FromStr
    + Send
    + Sync
    + 'static
{
}

impl<T> Coefficient for T where
    T: Clone
        + Debug
        + Display
        + Ord
        + Hash
        + Integer
        + Signed
        + CheckedAdd
        + CheckedSub
        + CheckedMul
        + FromPrimitive
        + FromStr
        + Send
        + Sync
        + 'static
{
}

/// Laurent polynomial with checked 64-bit coefficients.
pub type Laurent = SymLaurent<i64>;

/// Laurent polynomial with unbounded coefficients.
pub type BigLaurent = SymLaurent<num_bigint::BigInt>;

pub type Result<T, E = Error> = std::result::Result<T, E>;
