//! Geometry, certifiers and solvers for the packing-constrained point covering
//! game: one player places points in the plane, the other tries to cover them
//! all with non-overlapping unit disks.
//!
//! The crate is organised by capability:
//!
//! - [`geometry`]: constants, hexagonal lattices, interstitium predicates, enclosing circles.
//! - [`config`]: the 55-point rectangle-and-lattice configuration that cannot be covered.
//! - [`lemmas`]: numerical verification of the hole lemmas behind that configuration.
//! - [`interstitium`]: the area lower bound, the close-packing handicap oracle and
//!   certified coverings of the fundamental domain by interstitium translates.
//! - [`cover`]: a cover-solving engine for the unrestricted game.
//! - [`render`]: SVG output for all of the above.

pub mod config;
pub mod control;
pub mod cover;
pub mod error;
pub mod geometry;
pub mod interstitium;
pub mod lemmas;
pub mod render;

pub use control::CancelToken;
pub use error::{Error, Result};
pub use geometry::{Disk, HexLattice, Point2, Pose, EPS, HOLE_RADIUS};
