use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{json, Value};
use sha3::{Digest, Sha3_256};

use crate::Format;

/// Bumped whenever a field of any report payload is renamed or removed.
pub const REPORT_SCHEMA: u32 = 1;

/// Accumulates every input that determines a report's content.
#[derive(Default)]
pub(crate) struct InputDigest(Sha3_256);

impl InputDigest {
    pub fn new(command: &str) -> Self {
        let mut d = InputDigest(Sha3_256::new());
        d.field("command", command);
        d
    }

    pub fn field(&mut self, name: &str, value: impl std::fmt::Display) -> &mut Self {
        self.bytes(name, value.to_string().as_bytes())
    }

    pub fn bytes(&mut self, name: &str, data: &[u8]) -> &mut Self {
        for part in [name.as_bytes(), data] {
            self.0.update((part.len() as u64).to_le_bytes());
            self.0.update(part);
        }
        self
    }

    pub fn finish(self) -> String {
        hex::encode(self.0.finalize())
    }
}

pub struct Envelope {
    pub command: &'static str,
    pub input_digest: String,
    pub payload: Value,
    /// Human-oriented rendering of `payload`.
    pub text: String,
}

impl Envelope {
    pub fn render(&self, format: Format, canonical: bool) -> String {
        let stamp = (!canonical).then(|| {
            SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0)
        });
        match format {
            Format::Json => {
                let mut v = json!({
                    "schema": REPORT_SCHEMA,
                    "command": self.command,
                    "tool_version": env!("CARGO_PKG_VERSION"),
                    "input_digest": format!("sha3-256:{}", self.input_digest),
                });
                if let Some(t) = stamp {
                    v["generated_at_unix"] = json!(t);
                }
                v["result"] = self.payload.clone();
                let mut s = serde_json::to_string_pretty(&v).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Text => {
                let mut s = format!(
                    "# mrpgen report schema {REPORT_SCHEMA}\n# command: {}\n# version: {}\n# input-digest: sha3-256:{}\n",
                    self.command,
                    env!("CARGO_PKG_VERSION"),
                    self.input_digest
                );
                if let Some(t) = stamp {
                    s.push_str(&format!("# generated-at-unix: {t}\n"));
                }
                s.push_str(&self.text);
                if !s.ends_with('\n') {
                    s.push('\n');
                }
                s
            }
        }
    }
}

/// SHA3-256 of coefficients serialized as little-endian words.
pub(crate) fn coeff_digest(coeffs: &[u32]) -> String {
    let mut h = Sha3_256::new();
    for c in coeffs {
        h.update(c.to_le_bytes());
    }
    hex::encode(h.finalize())
}

pub(crate) fn bytes_digest(data: &[u8]) -> String {
    hex::encode(Sha3_256::digest(data))
}
