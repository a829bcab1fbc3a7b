//! Exact integer geometry of integral Apollonian disk packings.
//!
//! Every primitive integral Descartes quadruple can be driven down to the
//! base configuration `(0,0,1,1)` by a chain of self-inversions and Descartes
//! moves. Replaying that chain backwards on a fixed placement of the base
//! configuration yields a placement in the plane where every disk symbol
//! (reduced coordinates, curvature, co-curvature) and every tangency spinor
//! is an integer. This crate implements that construction and the checks
//! around it:
//!
//! - [`exact`]: integer square roots, gcd, sums of two squares, Fibonacci numbers.
//! - [`disk`]: disk symbols as Minkowski vectors, inversion, tangency spinors.
//! - [`triples`]: curvature triples (tricycles) and their descent.
//! - [`quadruples`]: Descartes quadruples, move chains and geometrization.
//! - [`groups`]: generator matrices of the Descartes groups in any dimension.
//! - [`packing`]: Apollonian completion of a placed configuration.
//! - [`threads`]: root quadruples, descent digraph and polynomial threads.
//! - [`render`]: deterministic SVG output.
//!
//! All arithmetic is exact. Scalars are `i128` with checked operations on
//! every path whose magnitude depends on the input; overflow surfaces as
//! [`Error::Overflow`] rather than wrapping.

pub mod disk;
pub mod error;
pub mod exact;
pub mod groups;
pub mod packing;
pub mod quadruples;
pub mod render;
pub mod report;
pub mod threads;
pub mod triples;

pub use disk::{DiskSymbol, EuclideanShape, Rational, Spinor};
pub use error::{Error, Result};
pub use exact::Int;
pub use groups::{Family, GroupSpec, PropertyReport, RationalMatrix};
pub use packing::{Packing, Rect, Tangency};
pub use quadruples::{DescartesQuadruple, GeoQuadruple, MoveChain, MoveKind, QuadMove};
pub use render::RenderOptions;
pub use report::VerificationReport;
pub use threads::{RootQuadruple, ThreadFamily};
pub use triples::{CurvatureTriple, TriMove};
