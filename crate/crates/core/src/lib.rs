//! Warping degree and maximal independent region number of knot projections.
//!
//! A projection (shadow) is stored as a 4-valent combinatorial map on the
//! sphere. On top of that the crate computes:
//!
//! * the warping degree `d(P)`, minimized over both alternating diagrams,
//!   both orientations and every base point ([`warping`]);
//! * the maximal independent region numbers `IR(P^c)` and `IR(P)`, through
//!   three independent routes: branch-and-bound, 0/1 system enumeration
//!   over the region choice matrix, and a DIMACS CNF export ([`region_opt`]);
//! * splice moves on link shadows and the region transport that goes with
//!   them ([`moves`]);
//! * exhaustive censuses of knot and link shadows up to sphere isomorphism
//!   and reflection ([`census`]).

pub mod census;
pub mod codec;
pub mod corpus;
mod error;
pub mod moves;
pub mod region_opt;
pub mod shadow;
pub mod warping;

pub use codec::{canonical, CanonicalCode, GaussCode};
pub use error::{Error, Result};
pub use region_opt::{ir, ir_base, verify_bounds, BoundsReport, IrReport, RegionChoiceMatrix};
pub use shadow::{Dart, Region, Shadow};
pub use warping::{warping_degree_shadow, WarpReport};
