use rand::RngCore;

use crate::error::{Error, GenerationFailure, Result};
use crate::xof::Seed;

use super::{compute_threshold, generate_segment, GenParams, Segment};

/// One RNS limb: N accepted words for modulus `q`, in layout order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Limb {
    pub q: u32,
    pub coeffs: Vec<u32>,
}

impl Limb {
    /// Every coefficient lies below the acceptance threshold for `w`.
    pub fn is_well_formed(&self, w: u32) -> bool {
        compute_threshold(self.q as u64, w)
            .map(|t| self.coeffs.iter().all(|&c| (c as u64) < t))
            .unwrap_or(false)
    }
}

/// Residues in `[0, q)`. For statistics and export only; generated limbs
/// stay unreduced.
pub fn reduce_coeffs(limb: &Limb) -> Vec<u32> {
    limb.coeffs.iter().map(|&c| c % limb.q).collect()
}

/// A polynomial as one limb per modulus of its RNS base, in base order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiResiduePolynomial {
    limbs: Vec<Limb>,
}

impl MultiResiduePolynomial {
    pub fn from_limbs(limbs: Vec<Limb>) -> Result<Self> {
        for (i, l) in limbs.iter().enumerate() {
            if limbs[..i].iter().any(|o| o.q == l.q) {
                return Err(Error::invalid(format!("modulus {} appears twice", l.q)));
            }
            if l.coeffs.len() != limbs[0].coeffs.len() {
                return Err(Error::invalid("limbs of different lengths"));
            }
        }
        Ok(MultiResiduePolynomial { limbs })
    }

    pub fn base(&self) -> Vec<u32> {
        self.limbs.iter().map(|l| l.q).collect()
    }

    pub fn limbs(&self) -> &[Limb] {
        &self.limbs
    }

    pub fn limb(&self, q: u32) -> Option<&Limb> {
        self.limbs.iter().find(|l| l.q == q)
    }

    pub fn ring_dim(&self) -> usize {
        self.limbs.first().map_or(0, |l| l.coeffs.len())
    }
}

/// Concatenates the segments of one limb (in segment order) and applies the
/// layout permutation. Fails on the first short segment.
pub(crate) fn assemble_limb(q: u32, segments: Vec<Segment>, params: &GenParams) -> Result<Limb> {
    let mut coeffs = Vec::with_capacity(params.ring_dim);
    for (id_seg, seg) in segments.into_iter().enumerate() {
        if !seg.is_complete() {
            return Err(Error::Generation(GenerationFailure {
                q,
                id_seg: id_seg as u16,
                accepted: seg.len(),
                required: seg.required,
            }));
        }
        coeffs.extend_from_slice(&seg.values);
    }
    Ok(Limb {
        q,
        coeffs: params.layout.apply(&coeffs)?,
    })
}

fn limb_unchecked(seed: &Seed, q: u32, params: &GenParams) -> Result<Limb> {
    let mut segments = Vec::with_capacity(params.n_seg);
    for id_seg in 0..params.n_seg {
        let seg = generate_segment(seed, q, id_seg as u16, params)?;
        let short = !seg.is_complete();
        segments.push(seg);
        if short {
            break;
        }
    }
    assemble_limb(q, segments, params)
}

/// Generates the limb for `q` directly, without touching any other modulus.
pub fn generate_limb(seed: &Seed, q: u32, params: &GenParams) -> Result<Limb> {
    params.validate()?;
    if !params.base.contains(&q) {
        return Err(Error::invalid(format!("modulus {q} is not in the RNS base")));
    }
    limb_unchecked(seed, q, params)
}

/// Generates every limb of the base in order; the first short segment aborts.
pub fn generate_mrp(seed: &Seed, params: &GenParams) -> Result<MultiResiduePolynomial> {
    params.validate()?;
    let limbs = params
        .base
        .iter()
        .map(|&q| limb_unchecked(seed, q, params))
        .collect::<Result<Vec<_>>>()?;
    MultiResiduePolynomial::from_limbs(limbs)
}

/// A seed the client has checked to expand without failure.
#[derive(Clone, Debug)]
pub struct ValidatedMrp {
    pub seed: Seed,
    pub mrp: MultiResiduePolynomial,
    pub attempts: usize,
}

/// Draws fresh seeds from `rng` until one yields a complete MRP.
pub fn client_generate_with_retry<R: RngCore + ?Sized>(
    rng: &mut R,
    params: &GenParams,
    max_attempts: usize,
) -> Result<ValidatedMrp> {
    if max_attempts == 0 {
        return Err(Error::invalid("max_attempts must be at least 1"));
    }
    params.validate()?;
    for attempt in 1..=max_attempts {
        let seed = Seed::random(rng);
        match generate_mrp(&seed, params) {
            Ok(mrp) => {
                return Ok(ValidatedMrp {
                    seed,
                    mrp,
                    attempts: attempt,
                })
            }
            Err(Error::Generation(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::RetriesExhausted {
        attempts: max_attempts,
    })
}
