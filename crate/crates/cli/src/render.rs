use std::fmt::Write;

use evasion_core::collapse::CollapseStep;
use evasion_core::theorems::{TheoremReport, Verdict};
use evasion_core::{Complex, Simplex};

pub fn simplices_text(simplices: &[Simplex]) -> String {
    simplices.iter().map(Simplex::to_string).collect::<Vec<_>>().join(" ")
}

pub fn steps_text(steps: &[CollapseStep]) -> String {
    steps
        .iter()
        .map(|s| format!("  free {} removes {}", s.free_face, simplices_text(&s.removed)))
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn report_text(label: &str, r: &TheoremReport) -> String {
    let status = match &r.verdict {
        Verdict::Pass => "PASS".to_string(),
        Verdict::Fail => "FAIL".to_string(),
        Verdict::NotApplicable { reason } => format!("N/A ({reason})"),
    };
    let mut out = format!("{} [{label}]: {status}", r.id);
    for c in r.failures() {
        let _ = write!(out, "\n  failed: {} ({})", c.assertion, c.witness);
    }
    out
}

/// Hasse diagram of the face poset, one node per simplex, edges from each
/// facet-of relation upwards.
pub fn face_poset_dot(c: &Complex) -> String {
    let mut out = String::from("digraph faces {\n  rankdir=BT;\n  node [shape=plaintext];\n");
    for (i, s) in c.simplices().enumerate() {
        let _ = writeln!(out, "  s{i} [label=\"{s}\"];");
    }
    for (i, s) in c.simplices().enumerate() {
        if s.dim() == 0 {
            continue;
        }
        for (_, face) in s.facets() {
            let j = c.index_of(&face).expect("closed under faces");
            let _ = writeln!(out, "  s{j} -> s{i};");
        }
    }
    out.push_str("}\n");
    out
}
