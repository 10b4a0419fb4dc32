//! Machine-readable verification reports.
//!
//! A report is a list of named checks with a digest of the inputs that
//! produced it.  Serialization is byte-stable: field order is fixed, maps
//! are ordered, and the only volatile field (a timestamp) is opt-in and
//! excluded from the digest.

use serde::Serialize;
use sha2::{Digest, Sha256};

/// One verified statement.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "snake_case")]
pub struct Check {
    /// Stable machine id, dot-separated (e.g. `"relations.sq1_a1"`).
    pub id: String,
    /// Human-readable statement of what was checked, in equation form.
    pub anchor: String,
    pub pass: bool,
    pub detail: String,
    /// For checks whose value could a priori move with the correction
    /// parameters: whether it was confirmed not to.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parameter_independent: Option<bool>,
}

impl Check {
    pub fn new(
        id: impl Into<String>,
        anchor: impl Into<String>,
        pass: bool,
        detail: impl Into<String>,
    ) -> Self {
        Check {
            id: id.into(),
            anchor: anchor.into(),
            pass,
            detail: detail.into(),
            parameter_independent: None,
        }
    }

    pub fn with_parameter_independent(mut self, independent: bool) -> Self {
        self.parameter_independent = Some(independent);
        self
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "snake_case")]
pub struct Report {
    pub tool_version: String,
    pub input_digest: String,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

impl Report {
    pub fn new(inputs: &[&[u8]], checks: Vec<Check>) -> Self {
        Report {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            input_digest: digest_hex(inputs),
            checks,
            timestamp: None,
        }
    }

    /// Attach the current unix time; never part of the digest.
    pub fn with_timestamp(mut self) -> Self {
        let secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        self.timestamp = Some(secs.to_string());
        self
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

/// SHA-256 over the concatenation of the input byte slices, each prefixed
/// with its length so distinct splits cannot collide.
pub fn digest_hex(inputs: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for part in inputs {
        h.update((part.len() as u64).to_le_bytes());
        h.update(part);
    }
    let out = h.finalize();
    let mut s = String::with_capacity(64);
    for b in out {
        s.push_str(&format!("{b:02x}"));
    }
    s
}
