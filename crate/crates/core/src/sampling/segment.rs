use crate::error::{Error, Result};
use crate::xof::{encode_domain_input, split_words, xof_expand, Backend, Seed, RATE_BITS};

use super::GenParams;

/// Acceptance bound `floor(2^w / q) * q`. Words below it are kept, and each
/// residue class mod q is hit by exactly `floor(2^w / q)` of them.
pub fn compute_threshold(q: u64, w: u32) -> Result<u64> {
    if !(1..=63).contains(&w) || q <= 1 || q >= 1u64 << w {
        return Err(Error::invalid(format!("modulus {q} must satisfy 1 < q < 2^{w}")));
    }
    let span = 1u64 << w;
    Ok(span / q * q)
}

/// XOF backend and block size shared by client and server.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct XofConfig {
    pub backend: Backend,
    pub r: u32,
}

impl Default for XofConfig {
    fn default() -> Self {
        XofConfig {
            backend: Backend::Shake128,
            r: RATE_BITS,
        }
    }
}

/// Accepted, unreduced words for one modulus. Shorter than `required` when
/// the block ran out of acceptable words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub q: u32,
    pub values: Vec<u32>,
    pub required: usize,
}

impl Segment {
    pub fn is_complete(&self) -> bool {
        self.values.len() == self.required
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Expands one XOF block from `input` and keeps the first `len` words that
/// fall below the acceptance threshold, scanning words in index order.
/// No reduction mod q is applied.
pub fn gen_seg(input: &[u8], q: u32, len: usize, w: u32, xof: XofConfig) -> Result<Segment> {
    let thresh = compute_threshold(q as u64, w)?;
    let t = (xof.r / w) as usize;
    if len > t {
        return Err(Error::invalid(format!("len {len} exceeds the {t} words of one block")));
    }
    let mut values = Vec::with_capacity(len);
    if len > 0 {
        let block = xof_expand(xof.backend, input, xof.r)?;
        for word in split_words(&block, w) {
            if (word as u64) < thresh {
                values.push(word);
                if values.len() == len {
                    break;
                }
            }
        }
    }
    Ok(Segment {
        q,
        values,
        required: len,
    })
}

/// The unit of work of one generation engine: segment `id_seg` of the limb
/// for `q`, computed from `(seed, q, id_seg)` alone.
pub fn generate_segment(seed: &Seed, q: u32, id_seg: u16, params: &GenParams) -> Result<Segment> {
    if id_seg as usize >= params.n_seg {
        return Err(Error::invalid(format!(
            "segment index {id_seg} out of range 0..{}",
            params.n_seg
        )));
    }
    let input = encode_domain_input(seed, q, id_seg);
    gen_seg(
        &input,
        q,
        params.len,
        params.w,
        XofConfig {
            backend: params.backend,
            r: params.r,
        },
    )
}
