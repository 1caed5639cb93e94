//! Seeded, random-access generation of uniformly distributed multi-residue
//! polynomials.
//!
//! A 288-bit seed is expanded limb by limb and segment by segment: every
//! segment of every RNS limb comes from its own XOF block keyed by
//! `seed || q || id_seg`, filtered by rejection sampling. Any engine can
//! therefore regenerate any segment on its own, and a server can regenerate
//! any single limb without touching the others. The client checks up front
//! that a seed expands without a short segment, so the server never stalls.
//!
//! Alongside generation the crate carries the pieces needed to pick
//! parameters: the catalog of supported NTT-friendly primes, the exact
//! success-probability model, and a first-order wiring cost model.

pub mod analytics;
pub mod cost;
mod error;
pub mod mrp_io;
pub mod params_file;
pub mod primes;
pub mod rational;
pub mod sampling;
pub mod table1;
pub mod xof;

pub use error::{Error, GenerationFailure, Result};
pub use sampling::{
    client_generate_with_retry, generate_limb, generate_mrp, generate_segment, GenParams, Limb,
    MultiResiduePolynomial, Permutation, Segment,
};
pub use xof::{Backend, Seed};
