//! Verification outcomes.

use std::fmt;

/// Outcome of a certificate check. A refutation always carries a
/// machine-parsable locus naming the first thing that failed; warnings on a
/// verified outcome flag hypotheses the underlying theorems assume but the
/// check itself does not need.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Verdict {
    Verified { warnings: Vec<String> },
    Refuted { locus: String },
}

impl Verdict {
    pub fn verified() -> Self {
        Verdict::Verified {
            warnings: Vec::new(),
        }
    }

    pub fn verified_with(warnings: Vec<String>) -> Self {
        Verdict::Verified { warnings }
    }

    pub fn refuted(locus: impl Into<String>) -> Self {
        Verdict::Refuted {
            locus: locus.into(),
        }
    }

    pub fn is_verified(&self) -> bool {
        matches!(self, Verdict::Verified { .. })
    }

    pub fn warnings(&self) -> &[String] {
        match self {
            Verdict::Verified { warnings } => warnings,
            Verdict::Refuted { .. } => &[],
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Verified { .. } => write!(f, "VERIFIED"),
            Verdict::Refuted { locus } => write!(f, "REFUTED {locus}"),
        }
    }
}
