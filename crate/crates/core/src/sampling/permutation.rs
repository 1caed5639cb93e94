use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LayoutKind {
    Identity,
    Reverse,
    Custom,
}

/// Coefficient layout of a limb: `out[i] = coeffs[mapping[i]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation {
    mapping: Vec<u32>,
    kind: LayoutKind,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            mapping: (0..n as u32).collect(),
            kind: LayoutKind::Identity,
        }
    }

    pub fn reverse(n: usize) -> Self {
        Permutation {
            mapping: (0..n as u32).rev().collect(),
            kind: LayoutKind::Reverse,
        }
    }

    /// Checks that `mapping` is a bijection on `0..mapping.len()`.
    pub fn from_mapping(mapping: Vec<u32>) -> Result<Self> {
        let n = mapping.len();
        let mut seen = vec![false; n];
        for &m in &mapping {
            let slot = seen
                .get_mut(m as usize)
                .ok_or_else(|| Error::invalid(format!("permutation index {m} out of range 0..{n}")))?;
            if std::mem::replace(slot, true) {
                return Err(Error::invalid(format!("permutation repeats index {m}")));
            }
        }
        let kind = if mapping.iter().enumerate().all(|(i, &m)| i as u32 == m) {
            LayoutKind::Identity
        } else if mapping.iter().enumerate().all(|(i, &m)| (n - 1 - i) as u32 == m) {
            LayoutKind::Reverse
        } else {
            LayoutKind::Custom
        };
        Ok(Permutation { mapping, kind })
    }

    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }

    pub fn kind(&self) -> LayoutKind {
        self.kind
    }

    pub fn mapping(&self) -> &[u32] {
        &self.mapping
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.mapping.len()];
        for (i, &m) in self.mapping.iter().enumerate() {
            inv[m as usize] = i as u32;
        }
        Permutation::from_mapping(inv).expect("inverse of a bijection")
    }

    pub fn apply<T: Copy>(&self, coeffs: &[T]) -> Result<Vec<T>> {
        if coeffs.len() != self.mapping.len() {
            return Err(Error::invalid(format!(
                "permutation of length {} applied to {} coefficients",
                self.mapping.len(),
                coeffs.len()
            )));
        }
        Ok(match self.kind {
            LayoutKind::Identity => coeffs.to_vec(),
            _ => self.mapping.iter().map(|&m| coeffs[m as usize]).collect(),
        })
    }
}

/// `out[i] = coeffs[p.mapping[i]]`.
pub fn permute<T: Copy>(coeffs: &[T], p: &Permutation) -> Result<Vec<T>> {
    p.apply(coeffs)
}
