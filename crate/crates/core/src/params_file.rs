//! Text parameter files (TOML key-value form).
//!
//! ```toml
//! n = 256
//! len = 32
//! n_seg = 8          # optional, defaults to n / len
//! base = [7681, 12289]
//! layout = "identity" # or "reverse", or a path to an index-vector file
//! backend = "shake128"
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cost::CostParams;
use crate::error::{Error, Result};
use crate::primes::{BucketConvention, CatalogFilter};
use crate::rational::parse_decimal;
use crate::sampling::{GenParams, Permutation};
use crate::xof::{Backend, RATE_BITS};

fn default_w() -> u32 {
    32
}

fn default_r() -> u32 {
    RATE_BITS
}

fn default_layout() -> String {
    "identity".into()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsFile {
    pub n: usize,
    #[serde(default = "default_w")]
    pub w: u32,
    #[serde(default = "default_r")]
    pub r: u32,
    pub len: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_seg: Option<usize>,
    pub base: Vec<u32>,
    #[serde(default = "default_layout")]
    pub layout: String,
    #[serde(default)]
    pub backend: Backend,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub catalog: Option<CatalogSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost: Option<CostParams>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogSection {
    pub hw_naf_max: u32,
    /// Decimal string, compared exactly.
    pub p_r_max: String,
    pub q_min_exclusive: u64,
    #[serde(default)]
    pub bucket: BucketConvention,
}

impl ParamsFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))
    }

    pub fn to_text(&self) -> String {
        toml::to_string(self).expect("params serialize")
    }

    pub fn from_params(params: &GenParams) -> Result<Self> {
        let layout = match params.layout.kind() {
            crate::sampling::LayoutKind::Identity => "identity",
            crate::sampling::LayoutKind::Reverse => "reverse",
            crate::sampling::LayoutKind::Custom => {
                return Err(Error::invalid("custom layouts must be written to their own file"))
            }
        };
        Ok(ParamsFile {
            n: params.ring_dim,
            w: params.w,
            r: params.r,
            len: params.len,
            n_seg: Some(params.n_seg),
            base: params.base.clone(),
            layout: layout.into(),
            backend: params.backend,
            catalog: None,
            cost: None,
        })
    }

    /// Builds validated generation parameters. Layout file paths are
    /// resolved against `dir`.
    pub fn to_gen_params(&self, dir: &Path) -> Result<GenParams> {
        let layout = match self.layout.as_str() {
            "identity" => Permutation::identity(self.n),
            "reverse" => Permutation::reverse(self.n),
            path => load_permutation(&dir.join(path))?,
        };
        let n_seg = match self.n_seg {
            Some(n_seg) => n_seg,
            None if self.len > 0 => self.n / self.len,
            None => return Err(Error::validation("len", "must be positive")),
        };
        let params = GenParams {
            ring_dim: self.n,
            w: self.w,
            r: self.r,
            len: self.len,
            n_seg,
            base: self.base.clone(),
            layout,
            backend: self.backend,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn catalog_filter(&self) -> Result<Option<CatalogFilter>> {
        self.catalog
            .as_ref()
            .map(|c| {
                Ok(CatalogFilter {
                    ring_dim: self.n as u64,
                    w: self.w,
                    hw_naf_max: c.hw_naf_max,
                    p_r_max: parse_decimal(&c.p_r_max)?,
                    q_min_exclusive: c.q_min_exclusive,
                    bucket: c.bucket,
                })
            })
            .transpose()
    }
}

/// Whitespace-separated indices forming a permutation.
pub fn load_permutation(path: &Path) -> Result<Permutation> {
    let text = std::fs::read_to_string(path)?;
    let mapping = text
        .split_whitespace()
        .map(|tok| {
            tok.parse::<u32>()
                .map_err(|_| Error::Config(format!("{}: bad index `{tok}`", path.display())))
        })
        .collect::<Result<Vec<_>>>()?;
    Permutation::from_mapping(mapping)
}

/// Reads, parses and validates a parameters file.
pub fn load_params(path: &Path) -> Result<(ParamsFile, GenParams)> {
    let text = std::fs::read_to_string(path)?;
    let file = ParamsFile::parse(&text)?;
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let params = file.to_gen_params(dir)?;
    Ok((file, params))
}

#[cfg(test)]
mod tests {
    use super::*;

    const DESK: &str = r#"
n = 256
len = 32
base = [7681, 12289]
"#;

    #[test]
    fn defaults_fill_in() {
        let f = ParamsFile::parse(DESK).unwrap();
        let p = f.to_gen_params(Path::new(".")).unwrap();
        assert_eq!((p.w, p.r, p.n_seg), (32, 1344, 8));
        assert_eq!(p.backend, Backend::Shake128);
    }

    #[test]
    fn round_trip() {
        let text = r#"
n = 65536
w = 32
r = 1344
len = 32
n_seg = 2048
base = [786433]
layout = "reverse"
backend = "k12"

[catalog]
hw_naf_max = 5
p_r_max = "0.03655"
q_min_exclusive = 524288
bucket = "round"

[cost]
lanes = 16384.0
word_bits = 32.0
freq_hz = 1e9
gamma = 0.125
die_side_mm = 15.0
wire_energy = 4e-14
"#;
        let f = ParamsFile::parse(text).unwrap();
        let again = ParamsFile::parse(&f.to_text()).unwrap();
        assert_eq!(f, again);
        let filter = f.catalog_filter().unwrap().unwrap();
        assert_eq!(filter.ring_dim, 65536);
        let p = f.to_gen_params(Path::new(".")).unwrap();
        assert_eq!(p.backend, Backend::KangarooTwelve);
    }

    #[test]
    fn unknown_keys_are_named() {
        let err = ParamsFile::parse("n = 256\nlen = 32\nbase = []\nseeed = 1\n").unwrap_err();
        assert!(err.to_string().contains("seeed"), "{err}");
    }

    #[test]
    fn validation_at_load() {
        let f = ParamsFile::parse("n = 256\nlen = 32\nn_seg = 4\nbase = [7681]\n").unwrap();
        assert!(matches!(
            f.to_gen_params(Path::new(".")),
            Err(Error::Validation { field: "n_seg", .. })
        ));
        let f = ParamsFile::parse("n = 256\nlen = 32\nbase = [7683]\n").unwrap();
        let err = f.to_gen_params(Path::new(".")).unwrap_err().to_string();
        assert!(err.contains("7683"));
    }
}
