use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};

use super::prob::{p_limb, p_mrp_lower_bound, p_seg, Prob};

const BISECTION_BITS: u32 = 40;

/// `1 - p_MRP` bound for `limbs` moduli that all reject with `p_r`.
pub fn mrp_failure_bound(p_r: &BigRational, t: u32, len: u32, n_seg: u64, limbs: u64) -> Result<Prob> {
    Ok(p_mrp_lower_bound(p_limb(p_seg(p_r, t, len)?, n_seg), limbs))
}

/// Largest per-word rejection probability whose MRP failure bound stays at
/// or below `max_fail`, to within 2^-40.
pub fn solve_p_r_max(t: u32, len: u32, n_seg: u64, limbs: u64, max_fail: f64) -> Result<f64> {
    if t == 0 || n_seg == 0 || limbs == 0 {
        return Err(Error::invalid("t, n_seg and L must be positive"));
    }
    if max_fail >= 1.0 {
        return Ok(1.0);
    }
    let zero = BigRational::from_integer(0.into());
    if max_fail.is_nan() || max_fail < 0.0 || mrp_failure_bound(&zero, t, len, n_seg, limbs)?.failure() > max_fail {
        return Err(Error::Infeasible(format!(
            "no rejection probability meets failure bound {max_fail} with t = {t}, len = {len}"
        )));
    }
    // Bisection over k / 2^40; failure is monotone in p_r.
    let scale = BigInt::from(1u64 << BISECTION_BITS);
    let (mut lo, mut hi) = (0u64, 1u64 << BISECTION_BITS);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        let p = BigRational::new(BigInt::from(mid), scale.clone());
        if mrp_failure_bound(&p, t, len, n_seg, limbs)?.failure() <= max_fail {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo as f64 / (1u64 << BISECTION_BITS) as f64)
}

/// Best integer limb count for a set of reference `(len, p_r_max)` rows.
#[derive(Clone, Debug, PartialEq)]
pub struct LimbCountFit {
    pub limbs: u64,
    /// Max absolute deviation over the rows.
    pub residual: f64,
    /// `solved - reference`, per row.
    pub deviations: Vec<f64>,
    pub within_tolerance: bool,
}

/// Searches `L` in `1..=max_limbs` for the value that best reproduces the
/// reference thresholds with `n_seg = N / len`.
pub fn fit_limb_count(
    rows: &[(u32, f64)],
    t: u32,
    ring_dim: u64,
    max_fail: f64,
    max_limbs: u64,
    tolerance: f64,
) -> Result<LimbCountFit> {
    if rows.is_empty() || max_limbs == 0 {
        return Err(Error::invalid("need at least one row and one candidate L"));
    }
    let mut best: Option<LimbCountFit> = None;
    for limbs in 1..=max_limbs {
        let mut deviations = Vec::with_capacity(rows.len());
        for &(len, reference) in rows {
            if len == 0 || !ring_dim.is_multiple_of(len as u64) {
                return Err(Error::invalid(format!("len {len} does not divide N = {ring_dim}")));
            }
            let solved = solve_p_r_max(t, len, ring_dim / len as u64, limbs, max_fail)?;
            deviations.push(solved - reference);
        }
        let residual = deviations.iter().fold(0.0f64, |m, d| m.max(d.abs()));
        if best.as_ref().is_none_or(|b| residual < b.residual) {
            best = Some(LimbCountFit {
                limbs,
                residual,
                deviations,
                within_tolerance: residual <= tolerance,
            });
        }
    }
    Ok(best.expect("at least one candidate"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_bounds() {
        assert_eq!(solve_p_r_max(42, 32, 2048, 10, 1.0).unwrap(), 1.0);
        assert!(solve_p_r_max(42, 43, 1, 1, 0.5).is_err());
        assert!(solve_p_r_max(42, 32, 1, 1, -0.1).is_err());
        assert!(solve_p_r_max(42, 32, 1, 1, f64::NAN).is_err());
    }

    #[test]
    fn solution_sits_on_the_boundary() {
        let p = solve_p_r_max(42, 16, 64, 4, 0.1).unwrap();
        let at = |x: f64| {
            mrp_failure_bound(&BigRational::from_float(x).unwrap(), 42, 16, 64, 4)
                .unwrap()
                .failure()
        };
        assert!(at(p) <= 0.1);
        assert!(at(p + 1e-9) > 0.1);
    }

    #[test]
    fn fit_recovers_a_synthetic_limb_count() {
        let n = 1u64 << 12;
        let rows: Vec<(u32, f64)> = [32u32, 16]
            .iter()
            .map(|&len| (len, solve_p_r_max(42, len, n / len as u64, 7, 0.05).unwrap()))
            .collect();
        let fit = fit_limb_count(&rows, 42, n, 0.05, 12, 1e-9).unwrap();
        assert_eq!(fit.limbs, 7);
        assert!(fit.within_tolerance);
        assert!(fit.residual < 1e-12);
    }
}
