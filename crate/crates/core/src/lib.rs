//! Growth-diagram RSK, geometric last passage percolation and exact Schur
//! process measures, with the machinery to check that the two agree.
//!
//! The crate is organised bottom-up:
//!
//! * [`partition`]: partitions, interlacing, boundaries and interiors.
//! * [`shapes`]: down-right paths, Ferrers shapes, fillings and matrices.
//! * [`growth`]: the local rules F¹/B¹ and the RSK bijections built on them.
//! * [`greene`]: brute-force `g_k`/`h_k` and the chain rearrangements used to
//!   show they agree.
//! * [`lpp`]: geometric noise and last passage observables.
//! * [`measure`]: exact probabilities of partition sequences.
//! * [`verify`]: exact and Monte Carlo comparisons plus a property fuzzer.

pub mod error;
pub mod greene;
pub mod growth;
pub mod lpp;
pub mod measure;
pub mod partition;
pub mod rational;
pub mod shapes;
pub mod verify;

pub use error::{Error, Result};
pub use partition::{Cell, Partition};
pub use rational::Rational;
pub use shapes::{DownRightPath, FerrersShape, Filling, Step, WeightMatrix};
