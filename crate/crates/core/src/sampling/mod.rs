//! Segment, limb and MRP generation.

mod distributed;
mod generate;
mod params;
mod permutation;
mod segment;

pub use distributed::{verify_distributed_equivalence, EquivalenceReport, Schedule};
pub use generate::{
    client_generate_with_retry, generate_limb, generate_mrp, reduce_coeffs, Limb,
    MultiResiduePolynomial, ValidatedMrp,
};
pub use params::GenParams;
pub use permutation::{permute, LayoutKind, Permutation};
pub use segment::{compute_threshold, gen_seg, generate_segment, Segment, XofConfig};
