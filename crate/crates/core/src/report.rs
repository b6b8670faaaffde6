//! Structured verification outcomes shared by the CLI, the self test, and
//! the browser demo.

use crate::monoid::SearchBudget;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Verified,
    Falsified,
    Unknown,
}

impl Status {
    /// Merge with another status, keeping the worst of the two
    /// (FALSIFIED beats UNKNOWN beats VERIFIED).
    pub fn and(self, other: Status) -> Status {
        use Status::*;
        match (self, other) {
            (Falsified, _) | (_, Falsified) => Falsified,
            (Unknown, _) | (_, Unknown) => Unknown,
            _ => Verified,
        }
    }

    /// Conventional process exit code: 0 verified, 1 falsified, 2 unknown.
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Verified => 0,
            Status::Falsified => 1,
            Status::Unknown => 2,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Verified => write!(f, "VERIFIED"),
            Status::Falsified => write!(f, "FALSIFIED"),
            Status::Unknown => write!(f, "UNKNOWN"),
        }
    }
}

/// A verification report: the claim checked, the verdict, and the
/// witnesses backing it. Serialization is deterministic (fixed key order,
/// sorted maps, no timestamps).
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub claim: String,
    pub status: Status,
    /// Stable machine-readable identifier of the claim family.
    pub anchor: String,
    pub witnesses: serde_json::Value,
    pub budget: SearchBudget,
    pub version: String,
}

impl Report {
    pub fn new(
        anchor: impl Into<String>,
        claim: impl Into<String>,
        status: Status,
        witnesses: serde_json::Value,
        budget: SearchBudget,
    ) -> Self {
        Report {
            claim: claim.into(),
            status,
            anchor: anchor.into(),
            witnesses,
            budget,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}
