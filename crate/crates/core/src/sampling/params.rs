use crate::error::{Error, Result};
use crate::primes::is_ntt_friendly;
use crate::xof::{check_block_bits, Backend, RATE_BITS};

use super::Permutation;

/// A generation profile: ring dimension, word size, XOF block size,
/// segmentation, RNS base and coefficient layout.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenParams {
    pub ring_dim: usize,
    pub w: u32,
    pub r: u32,
    pub len: usize,
    pub n_seg: usize,
    pub base: Vec<u32>,
    pub layout: Permutation,
    pub backend: Backend,
}

impl GenParams {
    /// N = 2^16, w = 32, r = 1344, len = 32 with the identity layout.
    pub fn default_profile(base: Vec<u32>) -> Self {
        Self::desk(1 << 16, 32, base)
    }

    /// A profile with the default word and block sizes and identity layout.
    pub fn desk(ring_dim: usize, len: usize, base: Vec<u32>) -> Self {
        GenParams {
            ring_dim,
            w: 32,
            r: RATE_BITS,
            len,
            n_seg: ring_dim / len.max(1),
            base,
            layout: Permutation::identity(ring_dim),
            backend: Backend::Shake128,
        }
    }

    pub fn with_layout(mut self, layout: Permutation) -> Self {
        self.layout = layout;
        self
    }

    pub fn with_backend(mut self, backend: Backend) -> Self {
        self.backend = backend;
        self
    }

    /// Words per XOF block, `floor(r / w)`.
    pub fn words_per_block(&self) -> usize {
        (self.r / self.w) as usize
    }

    pub fn validate(&self) -> Result<()> {
        if !self.ring_dim.is_power_of_two() || self.ring_dim < 2 {
            return Err(Error::validation("n", format!("{} is not a power of two >= 2", self.ring_dim)));
        }
        if !matches!(self.w, 8 | 16 | 32) {
            return Err(Error::validation("w", format!("{} is not one of 8, 16, 32", self.w)));
        }
        check_block_bits(self.r).map_err(|e| Error::validation("r", e.to_string()))?;
        if !self.r.is_multiple_of(self.w) {
            return Err(Error::validation("r", format!("{} is not a multiple of w = {}", self.r, self.w)));
        }
        if self.len == 0 || self.len > self.words_per_block() {
            return Err(Error::validation(
                "len",
                format!("{} must be in 1..={}", self.len, self.words_per_block()),
            ));
        }
        if self.len * self.n_seg != self.ring_dim {
            return Err(Error::validation(
                "n_seg",
                format!("len * n_seg = {} * {} != N = {}", self.len, self.n_seg, self.ring_dim),
            ));
        }
        if self.n_seg > 1 << 16 {
            return Err(Error::validation("n_seg", format!("{} exceeds 2^16", self.n_seg)));
        }
        if self.layout.len() != self.ring_dim {
            return Err(Error::validation(
                "layout",
                format!("length {} != N = {}", self.layout.len(), self.ring_dim),
            ));
        }
        for (i, &q) in self.base.iter().enumerate() {
            if self.base[..i].contains(&q) {
                return Err(Error::validation("base", format!("modulus {q} repeated")));
            }
            if (q as u64) >= 1u64 << self.w || !is_ntt_friendly(q as u64, self.ring_dim as u64) {
                return Err(Error::validation(
                    "base",
                    format!("modulus {q} is not an NTT-friendly prime below 2^{} for N = {}", self.w, self.ring_dim),
                ));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_profile_is_valid() {
        let p = GenParams::default_profile(vec![786433]);
        p.validate().unwrap();
        assert_eq!((p.ring_dim, p.w, p.r, p.n_seg), (65536, 32, 1344, 2048));
        assert_eq!(p.words_per_block(), 42);
    }

    #[test]
    fn validation_errors_name_the_field() {
        let mut p = GenParams::desk(256, 32, vec![7681]);
        p.n_seg = 7;
        assert!(matches!(p.validate(), Err(Error::Validation { field: "n_seg", .. })));

        let p = GenParams::desk(256, 32, vec![7681, 7681]);
        assert!(matches!(p.validate(), Err(Error::Validation { field: "base", .. })));

        let p = GenParams::desk(256, 32, vec![7683]);
        let err = p.validate().unwrap_err().to_string();
        assert!(err.contains("7683"), "{err}");

        let p = GenParams::desk(256, 64, vec![7681]);
        assert!(matches!(p.validate(), Err(Error::Validation { field: "len", .. })));

        let mut p = GenParams::desk(256, 32, vec![7681]);
        p.layout = Permutation::identity(128);
        assert!(matches!(p.validate(), Err(Error::Validation { field: "layout", .. })));

        let mut p = GenParams::desk(256, 32, vec![7681]);
        p.w = 24;
        assert!(matches!(p.validate(), Err(Error::Validation { field: "w", .. })));
    }
}
