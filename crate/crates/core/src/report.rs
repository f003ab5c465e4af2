//! Identity-check reports: one record per (identity, graph) pair, with a
//! witness when the check fails.

use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Not attempted, e.g. a guarded computation that would be too large.
    Skipped,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckStatus::Pass => write!(f, "pass"),
            CheckStatus::Fail => write!(f, "fail"),
            CheckStatus::Skipped => write!(f, "skipped"),
        }
    }
}

/// Outcome of one identity check on one graph. `witness` carries a
/// counterexample monomial or evaluation point on failure, or the reason a
/// check was skipped.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity: String,
    pub graph: String,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl IdentityReport {
    pub fn pass(identity: impl Into<String>, graph: impl Into<String>) -> Self {
        IdentityReport {
            identity: identity.into(),
            graph: graph.into(),
            status: CheckStatus::Pass,
            witness: None,
        }
    }

    pub fn fail(
        identity: impl Into<String>,
        graph: impl Into<String>,
        witness: impl Into<String>,
    ) -> Self {
        IdentityReport {
            identity: identity.into(),
            graph: graph.into(),
            status: CheckStatus::Fail,
            witness: Some(witness.into()),
        }
    }

    pub fn skipped(
        identity: impl Into<String>,
        graph: impl Into<String>,
        reason: impl Into<String>,
    ) -> Self {
        IdentityReport {
            identity: identity.into(),
            graph: graph.into(),
            status: CheckStatus::Skipped,
            witness: Some(reason.into()),
        }
    }

    pub fn passed(&self) -> bool {
        self.status != CheckStatus::Fail
    }
}

impl fmt::Display for IdentityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}  {}  {}", self.identity, self.graph, self.status)?;
        if let Some(witness) = &self.witness {
            write!(f, "  witness: {witness}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serializes_with_lowercase_status_and_optional_witness() {
        let pass = IdentityReport::pass("crossmethod", "theta");
        assert_eq!(
            serde_json::to_string(&pass).unwrap(),
            r#"{"identity":"crossmethod","graph":"theta","status":"pass"}"#
        );
        let fail = IdentityReport::fail("tilde", "k4", "+1*a0*a3*r");
        assert_eq!(
            serde_json::to_string(&fail).unwrap(),
            r#"{"identity":"tilde","graph":"k4","status":"fail","witness":"+1*a0*a3*r"}"#
        );
    }

    #[test]
    fn round_trips_through_json() {
        let report = IdentityReport::skipped("potts", "prism", "coloring guard");
        let text = serde_json::to_string(&report).unwrap();
        let back: IdentityReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, report);
        assert!(back.passed());
    }

    #[test]
    fn display_gives_one_line() {
        let fail = IdentityReport::fail("tilde", "k4", "+1*a0*a3*r");
        assert_eq!(fail.to_string(), "tilde  k4  fail  witness: +1*a0*a3*r");
        let pass = IdentityReport::pass("crossmethod", "theta");
        assert_eq!(pass.to_string(), "crossmethod  theta  pass");
    }
}
