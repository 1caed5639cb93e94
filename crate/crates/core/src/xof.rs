//! Domain-separated XOF expansion.
//!
//! Every segment of every limb is produced from exactly one XOF block of
//! `r` bits. The hash input is `seed (36 bytes) || q (u32 LE) || id_seg (u16 LE)`,
//! 42 bytes in total, and the block is read from a single squeeze of the
//! sponge. Client and server code both go through [`xof_expand`], so there
//! is a single definition of the byte layout.

use std::fmt;
use std::str::FromStr;

use rand::RngCore;
use serde::{Deserialize, Serialize};
use sha3::digest::{ExtendableOutput, Update, XofReader};

use crate::error::{Error, Result};

pub const SEED_BYTES: usize = 36;
pub const COMMON_SEED_BYTES: usize = 32;
pub const INPUT_BYTES: usize = SEED_BYTES + 4 + 2;
/// Sponge rate of SHAKE128 and KangarooTwelve. One block of this size is
/// all a single squeeze can deliver.
pub const RATE_BITS: u32 = 1344;
pub const MAX_INPUT_BYTES: usize = 64;

/// A 288-bit generation seed.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Seed([u8; SEED_BYTES]);

impl Seed {
    pub const ZERO: Seed = Seed([0; SEED_BYTES]);

    pub fn from_bytes(bytes: [u8; SEED_BYTES]) -> Self {
        Seed(bytes)
    }

    pub fn as_bytes(&self) -> &[u8; SEED_BYTES] {
        &self.0
    }

    /// Draws a fresh seed from `rng`.
    pub fn random<R: RngCore + ?Sized>(rng: &mut R) -> Self {
        let mut bytes = [0u8; SEED_BYTES];
        rng.fill_bytes(&mut bytes);
        Seed(bytes)
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        if s.len() != 2 * SEED_BYTES {
            return Err(Error::invalid(format!(
                "seed must be {} hex characters, got {}",
                2 * SEED_BYTES,
                s.len()
            )));
        }
        let mut bytes = [0u8; SEED_BYTES];
        hex::decode_to_slice(s, &mut bytes)
            .map_err(|e| Error::invalid(format!("seed hex: {e}")))?;
        Ok(Seed(bytes))
    }
}

impl fmt::Display for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl fmt::Debug for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Seed({})", self.to_hex())
    }
}

impl FromStr for Seed {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Seed::from_hex(s)
    }
}

/// Builds a per-polynomial seed from a shared 256-bit part and a 32-bit
/// polynomial index, e.g. the β polynomials of one key-switching key.
pub fn derive_polynomial_seed(common: &[u8; COMMON_SEED_BYTES], poly_id: u32) -> Seed {
    let mut bytes = [0u8; SEED_BYTES];
    bytes[..COMMON_SEED_BYTES].copy_from_slice(common);
    bytes[COMMON_SEED_BYTES..].copy_from_slice(&poly_id.to_le_bytes());
    Seed(bytes)
}

/// Encodes `seed || q || id_seg` as 42 bytes (little-endian integers).
pub fn encode_domain_input(seed: &Seed, q: u32, id_seg: u16) -> [u8; INPUT_BYTES] {
    let mut out = [0u8; INPUT_BYTES];
    out[..SEED_BYTES].copy_from_slice(&seed.0);
    out[SEED_BYTES..SEED_BYTES + 4].copy_from_slice(&q.to_le_bytes());
    out[SEED_BYTES + 4..].copy_from_slice(&id_seg.to_le_bytes());
    out
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    #[default]
    Shake128,
    #[serde(rename = "k12")]
    KangarooTwelve,
}

impl Backend {
    pub fn id(self) -> u8 {
        match self {
            Backend::Shake128 => 0,
            Backend::KangarooTwelve => 1,
        }
    }

    pub fn from_id(id: u8) -> Option<Self> {
        match id {
            0 => Some(Backend::Shake128),
            1 => Some(Backend::KangarooTwelve),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Backend::Shake128 => "shake128",
            Backend::KangarooTwelve => "k12",
        }
    }
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "shake128" => Ok(Backend::Shake128),
            "k12" | "kangarootwelve" => Ok(Backend::KangarooTwelve),
            other => Err(Error::invalid(format!("unknown XOF backend `{other}`"))),
        }
    }
}

/// One squeezed block of `r` bits.
#[derive(Clone, PartialEq, Eq)]
pub struct XofBlock(Vec<u8>);

impl XofBlock {
    pub fn from_bytes(bytes: Vec<u8>) -> Self {
        XofBlock(bytes)
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn bit_len(&self) -> u32 {
        self.0.len() as u32 * 8
    }
}

impl fmt::Debug for XofBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "XofBlock({})", hex::encode(&self.0))
    }
}

pub(crate) fn check_block_bits(r: u32) -> Result<()> {
    if r == 0 || !r.is_multiple_of(8) || r > RATE_BITS {
        return Err(Error::Config(format!(
            "XOF output of {r} bits is not a positive byte multiple within one {RATE_BITS}-bit squeeze"
        )));
    }
    Ok(())
}

/// Expands `input` to the first `r` bits of the backend's XOF output.
pub fn xof_expand(backend: Backend, input: &[u8], r: u32) -> Result<XofBlock> {
    check_block_bits(r)?;
    if input.len() > MAX_INPUT_BYTES {
        return Err(Error::invalid(format!(
            "XOF input of {} bytes exceeds {MAX_INPUT_BYTES}",
            input.len()
        )));
    }
    let mut out = vec![0u8; (r / 8) as usize];
    squeeze_into(backend, input, &mut out);
    Ok(XofBlock(out))
}

fn squeeze_into(backend: Backend, input: &[u8], out: &mut [u8]) {
    match backend {
        Backend::Shake128 => {
            let mut h = sha3::Shake128::default();
            h.update(input);
            h.finalize_xof().read(out);
        }
        Backend::KangarooTwelve => {
            let mut h = k12::KangarooTwelve::default();
            h.update(input);
            h.finalize_xof().read(out);
        }
    }
}

/// Splits a block into `floor(r / w)` little-endian words.
///
/// `w` must be 8, 16 or 32.
pub fn split_words(block: &XofBlock, w: u32) -> Vec<u32> {
    assert!(matches!(w, 8 | 16 | 32), "unsupported word size {w}");
    let width = (w / 8) as usize;
    block
        .0
        .chunks_exact(width)
        .map(|c| {
            let mut buf = [0u8; 4];
            buf[..width].copy_from_slice(c);
            u32::from_le_bytes(buf)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encodes_q_and_id_little_endian() {
        let enc = encode_domain_input(&Seed::ZERO, 1, 0);
        assert_eq!(&enc[..36], &[0u8; 36]);
        assert_eq!(&enc[36..], &[1, 0, 0, 0, 0, 0]);

        let enc = encode_domain_input(&Seed::ZERO, 786433, 5);
        assert_eq!(&enc[36..], &[0x01, 0x00, 0x0C, 0x00, 0x05, 0x00]);
        assert_eq!(enc.len() * 8, 336);
    }

    #[test]
    fn encoding_is_injective_over_a_grid() {
        let seed = Seed::from_bytes([7; SEED_BYTES]);
        let mut seen = std::collections::HashSet::new();
        for q in [3u32, 17, 786433, 4293918721, u32::MAX] {
            for id in [0u16, 1, 255, 256, 2047, u16::MAX] {
                assert!(seen.insert(encode_domain_input(&seed, q, id)));
            }
        }
    }

    #[test]
    fn seed_hex_round_trip_and_errors() {
        let hex72 = "000102030405060708090a0b0c0d0e0f101112131415161718191a1b1c1d1e1f20212223";
        let s: Seed = hex72.parse().unwrap();
        assert_eq!(s.to_hex(), hex72);
        assert_eq!(s.as_bytes()[35], 0x23);
        assert!(Seed::from_hex("00").is_err());
        assert!(Seed::from_hex(&"zz".repeat(36)).is_err());
    }

    #[test]
    fn polynomial_seeds() {
        let common = [0u8; 32];
        assert_eq!(derive_polynomial_seed(&common, 0), Seed::ZERO);
        let s1 = derive_polynomial_seed(&common, 1);
        assert_ne!(s1, derive_polynomial_seed(&common, 2));
        assert_eq!(&s1.as_bytes()[32..], &[1, 0, 0, 0]);

        let common = [0xabu8; 32];
        let seeds: std::collections::HashSet<_> =
            (0..5).map(|i| derive_polynomial_seed(&common, i)).collect();
        assert_eq!(seeds.len(), 5);
    }

    #[test]
    fn split_words_is_little_endian() {
        let mut bytes = vec![0u8; 168];
        bytes[0] = 1;
        bytes[4] = 2;
        let words = split_words(&XofBlock::from_bytes(bytes), 32);
        assert_eq!(words.len(), 42);
        assert_eq!(&words[..3], &[1, 2, 0]);

        let words = split_words(&XofBlock::from_bytes(vec![0; 168]), 32);
        assert!(words.iter().all(|&w| w == 0));

        let words = split_words(&XofBlock::from_bytes(vec![0x34, 0x12, 0xff]), 16);
        assert_eq!(words, vec![0x1234]);
    }

    #[test]
    fn expand_rejects_bad_lengths() {
        assert!(xof_expand(Backend::Shake128, b"", 0).is_err());
        assert!(xof_expand(Backend::Shake128, b"", 1345).is_err());
        assert!(xof_expand(Backend::Shake128, b"", 1352).is_err());
        assert!(xof_expand(Backend::Shake128, &[0u8; 65], RATE_BITS).is_err());
        assert_eq!(
            xof_expand(Backend::Shake128, b"", RATE_BITS).unwrap().bit_len(),
            1344
        );
    }

    #[test]
    fn one_bit_changes_the_block() {
        let a = encode_domain_input(&Seed::ZERO, 786433, 0);
        let mut b = a;
        b[0] ^= 1;
        for backend in [Backend::Shake128, Backend::KangarooTwelve] {
            let x = xof_expand(backend, &a, RATE_BITS).unwrap();
            let y = xof_expand(backend, &b, RATE_BITS).unwrap();
            assert_ne!(x, y);
            assert_eq!(x, xof_expand(backend, &a, RATE_BITS).unwrap());
        }
    }

    #[test]
    fn shorter_block_is_a_prefix() {
        let full = xof_expand(Backend::Shake128, b"abc", RATE_BITS).unwrap();
        let short = xof_expand(Backend::Shake128, b"abc", 256).unwrap();
        assert_eq!(short.as_bytes(), &full.as_bytes()[..32]);
    }
}
