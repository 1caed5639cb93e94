//! Binary interchange format for generated polynomials.
//!
//! All integers are little-endian:
//!
//! ```text
//! "MRPG" | version u16 | w u8 | backend u8 | N u32 | r u32 | len u32 | L u32
//! | base: L x u32 | layout u8 (0 identity, 1 reverse, 2 inline) [| N x u32]
//! | limbs: L x N x u32, in base order
//! ```

use crate::error::{Error, Result};
use crate::sampling::{GenParams, LayoutKind, Limb, MultiResiduePolynomial, Permutation};
use crate::xof::Backend;

pub const MAGIC: &[u8; 4] = b"MRPG";
pub const VERSION: u16 = 1;

pub fn encode_mrp(mrp: &MultiResiduePolynomial, params: &GenParams) -> Result<Vec<u8>> {
    if mrp.base() != params.base || mrp.ring_dim() != params.ring_dim {
        return Err(Error::invalid("polynomial does not match its parameters"));
    }
    let n = params.ring_dim;
    let mut out = Vec::with_capacity(32 + 4 * (params.base.len() * (n + 1) + n));
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.push(params.w as u8);
    out.push(params.backend.id());
    for v in [n as u32, params.r, params.len as u32, params.base.len() as u32] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    for &q in &params.base {
        out.extend_from_slice(&q.to_le_bytes());
    }
    match params.layout.kind() {
        LayoutKind::Identity => out.push(0),
        LayoutKind::Reverse => out.push(1),
        LayoutKind::Custom => {
            out.push(2);
            for &m in params.layout.mapping() {
                out.extend_from_slice(&m.to_le_bytes());
            }
        }
    }
    for limb in mrp.limbs() {
        for &c in &limb.coeffs {
            out.extend_from_slice(&c.to_le_bytes());
        }
    }
    Ok(out)
}

struct Reader<'a> {
    buf: &'a [u8],
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.buf.len() < n {
            return Err(Error::Format("truncated MRP file".into()));
        }
        let (head, tail) = self.buf.split_at(n);
        self.buf = tail;
        Ok(head)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u32s(&mut self, n: usize) -> Result<Vec<u32>> {
        let bytes = self.take(n.checked_mul(4).ok_or_else(|| Error::Format("length overflow".into()))?)?;
        Ok(bytes
            .chunks_exact(4)
            .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
            .collect())
    }
}

/// Decodes a file into the polynomial and the profile it was generated with.
pub fn decode_mrp(bytes: &[u8]) -> Result<(GenParams, MultiResiduePolynomial)> {
    let mut r = Reader { buf: bytes };
    if r.take(4)? != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let version = r.u16()?;
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let w = r.u8()? as u32;
    let backend = Backend::from_id(r.u8()?).ok_or_else(|| Error::Format("unknown backend".into()))?;
    let n = r.u32()? as usize;
    let xof_bits = r.u32()?;
    let len = r.u32()? as usize;
    let limbs = r.u32()? as usize;
    if n == 0 || len == 0 || !n.is_multiple_of(len) {
        return Err(Error::Format(format!("inconsistent N = {n}, len = {len}")));
    }
    let base = r.u32s(limbs)?;
    let layout = match r.u8()? {
        0 => Permutation::identity(n),
        1 => Permutation::reverse(n),
        2 => Permutation::from_mapping(r.u32s(n)?)?,
        k => return Err(Error::Format(format!("unknown layout kind {k}"))),
    };
    let params = GenParams {
        ring_dim: n,
        w,
        r: xof_bits,
        len,
        n_seg: n / len,
        base: base.clone(),
        layout,
        backend,
    };
    params
        .validate()
        .map_err(|e| Error::Format(format!("header: {e}")))?;
    let limbs = base
        .iter()
        .map(|&q| Ok(Limb { q, coeffs: r.u32s(n)? }))
        .collect::<Result<Vec<_>>>()?;
    if !r.buf.is_empty() {
        return Err(Error::Format(format!("{} trailing bytes", r.buf.len())));
    }
    if let Some(bad) = limbs.iter().find(|l| !l.is_well_formed(w)) {
        return Err(Error::Format(format!(
            "limb for q = {} has a coefficient at or above the acceptance threshold",
            bad.q
        )));
    }
    Ok((params, MultiResiduePolynomial::from_limbs(limbs)?))
}
