//! Inverting sets by permutations, explicit set packings with unbounded
//! blocks, and the bounds that go with them.
//!
//! * [`setcore`]: subsets, collections, permutations and their text formats.
//! * [`invert`]: invertibility by perfect matching, with certificates.
//! * [`kappa`]: exact counting over simple permutations and a derandomized
//!   search that meets the averaging bound.
//! * [`pack`]: the packing graph, a recursive explicit packing, a pairwise
//!   verifier and collections with no invertible triple.
//! * [`bounds`]: lower and upper bounds on packing sizes.
//! * [`qcube`]: square-blocking edge sets in the hypercube.

pub mod bounds;
pub mod exact;
pub mod invert;
pub mod kappa;
pub mod pack;
pub mod qcube;
pub mod setcore;

pub use setcore::{Collection, Permutation, SetError, Subset};
