//! Exact real sample points of the low-rank loci of linear Hankel matrices.
//!
//! Given `H(x) = H_0 + x_1 H_1 + ... + x_n H_n` with Hankel `H_i` over the
//! rationals and a target rank `r`, [`driver::low_rank_hankel`] computes
//! rational parametrizations of a finite set that meets every connected
//! component of `{ x in R^n : rank H(x) <= r }`, together with isolating
//! boxes for its real points.

pub mod bounds;
pub mod cli;
pub mod driver;
pub mod error;
pub mod exact;
pub mod hankel;
pub mod roots;
pub mod solver;
pub mod systems;
pub mod verify;

pub use driver::{low_rank_hankel, SamplePointsResult, SolveOptions};
pub use error::{Error, Result};
pub use hankel::{build_pencil, LinearHankelPencil};
