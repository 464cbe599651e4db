//! Instance-level checks of proportionality criteria and method properties.
//!
//! Every failing report carries witnesses with the elections involved, so a
//! violation can be reproduced by rerunning the method on them.

mod representation;
mod scan;
pub mod random;

pub use representation::{check_representation, RepresentationCriterion};
pub use scan::{monotonicity_random, perturbations, representation_random, reverse_perturbations, scan_property, Perturbation, Property};

use serde::Serialize;

use crate::numeric::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// Evidence for a violation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub description: String,
    /// The violated bound and the value found, when the check is numeric.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<Rational>,
    /// Elections (in the text format) needed to reproduce the violation.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub elections: Vec<String>,
}

impl Witness {
    pub fn new(description: impl Into<String>) -> Witness {
        Witness {
            description: description.into(),
            bound: None,
            value: None,
            elections: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub check: String,
    pub verdict: Verdict,
    /// Instances examined (groups, seat counts, perturbations or trials).
    pub examined: usize,
    /// Violations found; at most [`MAX_WITNESSES`] are kept.
    pub violations: usize,
    pub witnesses: Vec<Witness>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

pub const MAX_WITNESSES: usize = 20;

impl AuditReport {
    pub(crate) fn new(check: impl Into<String>) -> AuditReport {
        AuditReport {
            check: check.into(),
            verdict: Verdict::Pass,
            examined: 0,
            violations: 0,
            witnesses: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub(crate) fn fail(&mut self, w: Witness) {
        self.verdict = Verdict::Fail;
        self.violations += 1;
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(w);
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}
