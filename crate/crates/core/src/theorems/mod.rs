//! Executable checks of the fixed-point and evasiveness theorems on concrete
//! instances. Each check returns a [`TheoremReport`] listing every assertion
//! made, whether it held, and the values observed.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

mod evasive;
mod fixed_point;
mod suite;

pub use evasive::{
    kss_evasiveness_check, lower_bound_certificate, lower_bound_check, yao_check, LowerBoundCertificate, ReductionCase,
    ReductionStep,
};
pub use fixed_point::{
    euler_fixed_check, lefschetz_invariant_simplex, oliver_check, smith_acyclicity_check, InvariantSimplex,
};
pub use suite::{suite_cases, SuiteCase};

/// Stable identifiers of the checked statements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremId {
    /// An automorphism of an acyclic complex leaves some simplex invariant.
    LefschetzFixedSimplex,
    /// The invariant simplices of such an automorphism have Euler characteristic 1.
    EulerFixed,
    /// An order-`p` automorphism of an `F_p`-acyclic complex has an
    /// `F_p`-acyclic fixed subcomplex.
    SmithAcyclicity,
    /// Suitable group actions on collapsible complexes have orbit complexes of
    /// Euler characteristic 1 and a common invariant simplex.
    OliverFixedPoint,
    /// Nontrivial monotone graph properties on a prime-power number of vertices
    /// are evasive.
    KssEvasiveness,
    /// Nontrivial monotone bipartite properties are evasive.
    YaoBipartite,
    /// Decision-tree lower bound through reduction to a prime vertex count.
    LowerBound,
}

impl TheoremId {
    pub const ALL: [TheoremId; 7] = [
        TheoremId::LefschetzFixedSimplex,
        TheoremId::EulerFixed,
        TheoremId::SmithAcyclicity,
        TheoremId::OliverFixedPoint,
        TheoremId::KssEvasiveness,
        TheoremId::YaoBipartite,
        TheoremId::LowerBound,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::LefschetzFixedSimplex => "lefschetz-fixed-simplex",
            TheoremId::EulerFixed => "euler-fixed",
            TheoremId::SmithAcyclicity => "smith-acyclicity",
            TheoremId::OliverFixedPoint => "oliver-fixed-point",
            TheoremId::KssEvasiveness => "kss-evasiveness",
            TheoremId::YaoBipartite => "yao-bipartite",
            TheoremId::LowerBound => "lower-bound",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Self::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown theorem id `{s}`")))
    }
}

/// One assertion and the values it was decided on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub assertion: String,
    pub passed: bool,
    pub witness: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable { reason: String },
}

/// The outcome of checking one theorem on one input.
///
/// The verdict is `Fail` as soon as any check fails, `NotApplicable` when a
/// hypothesis of the theorem does not hold for the input, and `Pass` otherwise.
#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    pub id: TheoremId,
    pub inputs: String,
    pub checks: Vec<Check>,
    pub verdict: Verdict,
}

impl TheoremReport {
    pub fn new(id: TheoremId, inputs: impl Into<String>) -> Self {
        Self {
            id,
            inputs: inputs.into(),
            checks: Vec::new(),
            verdict: Verdict::Pass,
        }
    }

    /// Records an assertion; returns `passed`.
    pub fn check(&mut self, assertion: impl Into<String>, passed: bool, witness: impl Into<String>) -> bool {
        self.checks.push(Check {
            assertion: assertion.into(),
            passed,
            witness: witness.into(),
        });
        if !passed && self.verdict == Verdict::Pass {
            self.verdict = Verdict::Fail;
        }
        passed
    }

    /// Marks the input as outside the theorem's hypotheses.
    pub fn not_applicable(mut self, reason: impl Into<String>) -> Self {
        self.verdict = Verdict::NotApplicable { reason: reason.into() };
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn failed(&self) -> bool {
        self.verdict == Verdict::Fail
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for id in TheoremId::ALL {
            assert_eq!(id.as_str().parse::<TheoremId>().unwrap(), id);
            assert_eq!(serde_json::to_value(id).unwrap(), id.as_str());
        }
        assert!("thm-9".parse::<TheoremId>().is_err());
    }

    #[test]
    fn verdict_is_the_conjunction_of_checks() {
        let mut r = TheoremReport::new(TheoremId::EulerFixed, "x");
        r.check("a", true, "1");
        assert!(r.passed());
        r.check("b", false, "2");
        r.check("c", true, "3");
        assert!(r.failed());
        assert_eq!(r.failures().count(), 1);
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["verdict"]["status"], "fail");
        let na = TheoremReport::new(TheoremId::EulerFixed, "y").not_applicable("why");
        assert_eq!(serde_json::to_value(&na).unwrap()["verdict"]["reason"], "why");
    }
}
