//! Success-probability model of segment, limb and MRP generation, and the
//! checks that tie it to generated output.

mod prob;
mod threshold;
mod validation;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};

pub use prob::{p_limb, p_mrp_lower_bound, p_seg, p_seg_exact, Prob, SuccessModel};
pub use threshold::{fit_limb_count, mrp_failure_bound, solve_p_r_max, LimbCountFit};
pub use validation::{
    chi_square_residues, chi_square_uniformity, empirical_failure_rate, empirical_segment_failure,
    p_mrp_exact, EmpiricalFailure, UniformityReport,
};

/// Effective seed-space size in bits when only a `p_mrp` fraction of seeds
/// is valid.
pub fn seed_space_bits(seed_len: u32, p_mrp: f64) -> Result<f64> {
    if !(p_mrp > 0.0 && p_mrp <= 1.0) {
        return Err(Error::invalid("p_mrp must be in (0, 1]"));
    }
    Ok(seed_len as f64 + p_mrp.log2())
}

/// Rejection probability `(2^(m+x) mod q) / 2^(m+x)` when each sample for an
/// m-bit modulus draws `x` extra bits. Always below `2^-x`.
pub fn rejection_prob_extra_bits(q: u64, m: u32, x: u32) -> Result<BigRational> {
    let n = m + x;
    if m == 0 || n > 127 || q < 2 || (m < 64 && q >= 1u64 << m) {
        return Err(Error::invalid(format!("need 2 <= q < 2^{m} and m + x <= 127")));
    }
    let rem = (1u128 << n) % q as u128;
    let p_r = BigRational::new(BigInt::from(rem), BigInt::from(1u128 << n));
    let bound = BigRational::new(BigInt::from(1), BigInt::from(1u128 << x));
    if p_r >= bound {
        return Err(Error::invalid("rejection bound violated"));
    }
    Ok(p_r)
}
