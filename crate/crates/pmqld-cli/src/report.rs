//! The structured report document wrapping every command's output.

use pmqld::{Error, Result};
use serde::Serialize;
use std::time::{SystemTime, UNIX_EPOCH};

pub const SCHEMA_VERSION: &str = "1.0";

#[derive(Serialize)]
pub struct Report<I: Serialize, R: Serialize> {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub inputs: I,
    pub results: R,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamps: Option<TimestampPair>,
}

#[derive(Serialize)]
pub struct TimestampPair {
    pub started_unix_ms: u128,
    pub finished_unix_ms: u128,
}

/// Start-of-run marker; materializes into a pair only when requested, so
/// default reports stay byte-identical across reruns.
pub struct Timestamps {
    started_ms: u128,
}

impl Timestamps {
    pub fn now() -> Self {
        Self {
            started_ms: unix_ms(),
        }
    }

    pub fn stamp(&self, enabled: bool) -> Option<TimestampPair> {
        enabled.then(|| TimestampPair {
            started_unix_ms: self.started_ms,
            finished_unix_ms: unix_ms(),
        })
    }
}

fn unix_ms() -> u128 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis())
        .unwrap_or(0)
}

impl<I: Serialize, R: Serialize> Report<I, R> {
    pub fn new(
        command: &'static str,
        inputs: I,
        results: R,
        timestamps: Option<TimestampPair>,
    ) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command,
            inputs,
            results,
            timestamps,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self)
            .map_err(|e| Error::Data(format!("report serialization failed: {e}")))
    }
}
