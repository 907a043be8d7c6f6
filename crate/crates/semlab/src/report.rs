//! Deterministic experiment reports: a versioned envelope serialized as
//! canonical JSON — sorted keys, LF line endings, exact values only.
//! Timing never enters the payload; byte-identical configs must yield
//! byte-identical reports.

use num_bigint::BigUint;
use serde::{Serialize, Serializer};
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub config: Value,
    pub payload: Value,
}

impl Report {
    pub fn new(
        command: impl Into<String>,
        config: impl Serialize,
        payload: impl Serialize,
    ) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.into(),
            config: serde_json::to_value(config).expect("config serializes"),
            payload: serde_json::to_value(payload).expect("payload serializes"),
        }
    }

    /// Canonical rendering: keys sorted (the default `serde_json` map is
    /// ordered), two-space indentation, trailing LF.
    pub fn to_canonical_json(&self) -> String {
        // Struct serialization keeps declaration order; going through a
        // Value object first sorts every key.
        let value = serde_json::to_value(self).expect("report serializes");
        let mut out = serde_json::to_string_pretty(&value).expect("value serializes");
        out.push('\n');
        out
    }
}

/// Serializes arbitrary-precision naturals as decimal strings so payloads
/// never depend on a JSON number precision limit.
pub fn biguint_as_string<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Serializes u64 the same way for uniformity with unbounded counters.
pub fn u64_as_string<S: Serializer>(v: &u64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}
