//! Statistical checks of generated output against the model.

use rand::RngCore;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::primes::sample_rejection_prob;
use crate::sampling::{gen_seg, generate_mrp, reduce_coeffs, GenParams, Limb, XofConfig};
use crate::xof::{encode_domain_input, Seed};

use super::prob::{p_limb, p_seg, Prob};

#[derive(Clone, Debug, PartialEq)]
pub struct UniformityReport {
    pub q: u32,
    pub sample_count: usize,
    pub statistic: f64,
    pub degrees_of_freedom: usize,
    pub p_value: f64,
}

/// Pearson chi-square of residues in `[0, q)` against the uniform law, with
/// `[0, q)` cut into `bins` classes of (nearly) equal width.
pub fn chi_square_residues(residues: &[u32], q: u32, bins: usize) -> Result<UniformityReport> {
    if bins < 2 || bins as u64 > q as u64 {
        return Err(Error::invalid(format!("bins must be in 2..={q}")));
    }
    if residues.len() < 5 * bins {
        return Err(Error::invalid(format!(
            "{} samples are too few for {bins} bins (need {})",
            residues.len(),
            5 * bins
        )));
    }
    let bin_of = |x: u32| (x as u64 * bins as u64 / q as u64) as usize;
    let mut observed = vec![0u64; bins];
    for &x in residues {
        if x >= q {
            return Err(Error::invalid(format!("residue {x} not below q = {q}")));
        }
        observed[bin_of(x)] += 1;
    }
    // Width of bin b is the number of x in [0, q) with bin_of(x) == b.
    let start = |b: usize| (b as u64 * q as u64).div_ceil(bins as u64);
    let n = residues.len() as f64;
    let statistic: f64 = (0..bins)
        .map(|b| {
            let width = start(b + 1) - start(b);
            let expected = n * width as f64 / q as f64;
            let d = observed[b] as f64 - expected;
            d * d / expected
        })
        .sum();
    let dof = bins - 1;
    let p_value = ChiSquared::new(dof as f64)
        .map(|c| c.sf(statistic))
        .map_err(|e| Error::invalid(e.to_string()))?;
    Ok(UniformityReport {
        q,
        sample_count: residues.len(),
        statistic,
        degrees_of_freedom: dof,
        p_value: p_value.clamp(0.0, 1.0),
    })
}

/// Chi-square uniformity of a limb's reduced coefficients.
pub fn chi_square_uniformity(limb: &Limb, bins: usize) -> Result<UniformityReport> {
    chi_square_residues(&reduce_coeffs(limb), limb.q, bins)
}

/// Observed failures over a number of independent trials, next to the
/// model's failure probability.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EmpiricalFailure {
    pub failures: u64,
    pub trials: u64,
    pub analytic: Prob,
}

impl EmpiricalFailure {
    pub fn rate(&self) -> f64 {
        self.failures as f64 / self.trials as f64
    }

    /// Binomial standard deviation of the rate under the model.
    pub fn sigma(&self) -> f64 {
        let p = self.analytic.failure();
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }

    /// Distance between observed and modelled rate in standard deviations.
    pub fn z_score(&self) -> f64 {
        let diff = self.rate() - self.analytic.failure();
        if diff == 0.0 {
            0.0
        } else {
            diff.abs() / self.sigma()
        }
    }

    pub fn agrees_within(&self, sigmas: f64) -> bool {
        self.z_score() <= sigmas
    }
}

/// Exact `p_MRP` of a base: the product of the per-limb success probabilities.
pub fn p_mrp_exact(params: &GenParams) -> Result<Prob> {
    let t = params.words_per_block() as u32;
    let limbs = params
        .base
        .iter()
        .map(|&q| {
            let p_r = sample_rejection_prob(q as u64, params.w)?.to_ratio();
            Ok(p_limb(p_seg(&p_r, t, params.len as u32)?, params.n_seg as u64))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Prob::all(limbs))
}

/// Runs [`generate_mrp`] on `trials` fresh seeds and counts failures.
pub fn empirical_failure_rate<R: RngCore + ?Sized>(
    params: &GenParams,
    trials: u64,
    rng: &mut R,
) -> Result<EmpiricalFailure> {
    if trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    params.validate()?;
    let mut failures = 0;
    for _ in 0..trials {
        match generate_mrp(&Seed::random(rng), params) {
            Ok(_) => {}
            Err(Error::Generation(_)) => failures += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(EmpiricalFailure {
        failures,
        trials,
        analytic: p_mrp_exact(params)?,
    })
}

/// Short-segment frequency for a single modulus over random seeds.
pub fn empirical_segment_failure<R: RngCore + ?Sized>(
    q: u32,
    len: usize,
    w: u32,
    xof: XofConfig,
    trials: u64,
    rng: &mut R,
) -> Result<EmpiricalFailure> {
    if trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    let mut failures = 0;
    for _ in 0..trials {
        let input = encode_domain_input(&Seed::random(rng), q, 0);
        if !gen_seg(&input, q, len, w, xof)?.is_complete() {
            failures += 1;
        }
    }
    let p_r = sample_rejection_prob(q as u64, w)?.to_ratio();
    Ok(EmpiricalFailure {
        failures,
        trials,
        analytic: p_seg(&p_r, xof.r / w, len as u32)?,
    })
}
