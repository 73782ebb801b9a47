use num_rational::Ratio;
use serde::Serialize;

use super::fixed_point::prime_power_base;
use super::{TheoremId, TheoremReport};
use crate::action::{fixed_set, is_automorphism, quotient_complex};
use crate::affine::affine_group;
use crate::dtree::{dtc, EXACT_EDGE_LIMIT};
use crate::error::{Error, Result};
use crate::field::is_prime;
use crate::graph::{
    check_invariant, check_monotone, delta_of_property, EdgeUniverse, InvarianceCheck, MonotoneCheck, PropertyOracle,
    UniverseKind, DEFAULT_SEED, EXHAUSTIVE_EDGE_LIMIT,
};
use crate::perm::{PermGroup, Permutation, DEFAULT_GROUP_CAP};
use crate::simplex::VertexId;

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Reasons a property falls outside the hypotheses: not monotone, not
/// invariant, or constant.
fn hypothesis_failure(h: &PropertyOracle) -> Option<String> {
    if let MonotoneCheck::Counterexample { smaller, larger } = check_monotone(h, DEFAULT_SEED) {
        return Some(format!("not monotone: holds on {smaller:#x} but fails on {larger:#x}"));
    }
    match check_invariant(h, DEFAULT_SEED) {
        Ok(InvarianceCheck::Invariant) => {}
        Ok(InvarianceCheck::Counterexample { mask, image }) => {
            return Some(format!("not invariant: differs on {mask:#x} and its image {image:#x}"))
        }
        Err(e) => return Some(e.to_string()),
    }
    let full = h.universe().full_mask();
    if h.eval(0) == h.eval(full) {
        return Some(format!("trivial: constant {}", u8::from(h.eval(0))));
    }
    None
}

fn edge_group(universe: &EdgeUniverse, vertex_gens: &[Permutation]) -> Result<PermGroup> {
    let gens = vertex_gens
        .iter()
        .map(|g| universe.edge_permutation(g))
        .collect::<Result<Vec<_>>>()?;
    PermGroup::from_generators(universe.len(), &gens, DEFAULT_GROUP_CAP)
}

fn direct_check(report: &mut TheoremReport, h: &PropertyOracle) {
    let m = h.edge_count();
    if m > EXACT_EDGE_LIMIT {
        return;
    }
    let d = dtc(h).expect("within the exact limit");
    report.check(
        "decision-tree complexity equals the number of possible edges",
        d == m,
        format!("D = {d}, edges = {m}"),
    );
}

/// Checks evasiveness of a nontrivial monotone invariant property on a
/// prime-power number of vertices, both directly (exact decision-tree
/// complexity, up to [`EXACT_EDGE_LIMIT`] edges) and through the affine-group
/// fixed-point argument.
pub fn kss_evasiveness_check(h: &PropertyOracle) -> TheoremReport {
    let report = TheoremReport::new(
        TheoremId::KssEvasiveness,
        format!("{} on {} vertices", h.name(), h.universe().vertex_count()),
    );
    let UniverseKind::Complete { n } = h.universe().kind() else {
        return report.not_applicable("property is not on a complete-graph universe");
    };
    let Some(Some(p)) = prime_power_base(n as u64) else {
        return report.not_applicable(format!("{n} vertices is not a prime power"));
    };
    if h.edge_count() > EXHAUSTIVE_EDGE_LIMIT {
        return report.not_applicable(format!("{} edges exceed the exhaustive limit", h.edge_count()));
    }
    if let Some(reason) = hypothesis_failure(h) {
        return report.not_applicable(reason);
    }
    let k = (n as f64).log(p as f64).round() as u32;
    let mut report = report;
    let group = match affine_group(p, k) {
        Ok(g) => g,
        Err(e) => return report.not_applicable(e.to_string()),
    };
    let obs = group.observations();
    let q = n as usize;
    report.check(
        "translations form a subgroup of order p^k",
        obs.translation_order == q,
        format!("|G'| = {}, p^k = {q}", obs.translation_order),
    );
    report.check(
        "translations form a normal subgroup",
        obs.translations_normal,
        format!("|G| = {}", obs.group_order),
    );
    report.check(
        "quotient by the translations is cyclic",
        obs.quotient_cyclic,
        format!("|G/G'| = {}", obs.group_order / obs.translation_order.max(1)),
    );
    report.check(
        "G is transitive on ordered pairs of distinct vertices",
        obs.pair_transitive,
        format!("|G| = {} = {q}*{}", obs.group_order, q - 1),
    );
    let universe = h.universe();
    let full = universe.full_mask();
    let delta = delta_of_property(h).expect("monotone and exhaustive");
    if delta.is_empty() {
        let flips = (0..h.edge_count()).filter(|&e| h.eval(1 << e)).count();
        report.check(
            "failure complex is empty and every single edge flips the empty graph",
            flips == h.edge_count(),
            format!("{flips} of {} single edges have the property", h.edge_count()),
        );
    } else {
        let edges = edge_group(universe, group.group.generators()).expect("affine maps act on edges");
        let orbits = edges.orbits(&(0..universe.len() as VertexId).collect::<Vec<_>>());
        report.check(
            "the only nonempty G-invariant edge set is the complete graph",
            orbits.len() == 1,
            format!("{} edge orbit(s)", orbits.len()),
        );
        let preserved = edges
            .generators()
            .iter()
            .all(|g| is_automorphism(&delta, g).unwrap_or(false));
        report.check(
            "G acts on the failure complex",
            preserved,
            format!("{} generators", edges.generators().len()),
        );
        let invariant = fixed_set(&delta, edges.generators()).expect("domain");
        report.check(
            "the complete graph has the property, so no failing graph is G-invariant",
            h.eval(full) && invariant.simplices.is_empty(),
            format!("{} invariant failing edge sets", invariant.simplices.len()),
        );
        let chi = quotient_complex(&delta, &edges)
            .expect("domain")
            .complex
            .euler_characteristic();
        report.check(
            "chi of the orbit complex differs from 1, so the failure complex is not collapsible",
            chi != 1,
            format!("chi = {chi}"),
        );
    }
    direct_check(&mut report, h);
    report
}

/// Checks evasiveness of a nontrivial monotone property of bipartite graphs
/// invariant under relabelling each side, through the Euler characteristic of
/// the orbit complex under a cyclic shift of `Y`.
///
/// The threshold `k` is the largest `|S|` for which the graph joining all of
/// `Y` to `S` fails; the orbit complex then has
/// `chi = 1 + (-1)^(k-1) C(|Z|-1, k)`, which is 0 when `k = 0`.
pub fn yao_check(f: &PropertyOracle) -> TheoremReport {
    let report = TheoremReport::new(TheoremId::YaoBipartite, f.name().to_string());
    let UniverseKind::Bipartite { left, right } = f.universe().kind() else {
        return report.not_applicable("property is not on a bipartite universe");
    };
    if f.edge_count() > EXHAUSTIVE_EDGE_LIMIT {
        return report.not_applicable(format!("{} edges exceed the exhaustive limit", f.edge_count()));
    }
    if let Some(reason) = hypothesis_failure(f) {
        return report.not_applicable(reason);
    }
    let mut report = report;
    report.inputs = format!("{} with |Y| = {left}, |Z| = {right}", f.name());
    let block = (1u64 << left) - 1;
    let star_union = |s: u64| -> u64 {
        (0..right)
            .filter(|z| s >> z & 1 == 1)
            .fold(0, |acc, z| acc | block << (z * left))
    };
    let by_size: Vec<Option<bool>> = (0..=right)
        .map(|size| {
            let values: Vec<bool> = (0u64..1 << right)
                .filter(|s| s.count_ones() == size)
                .map(|s| f.eval(star_union(s)))
                .collect();
            values.iter().all(|&v| v == values[0]).then_some(values[0])
        })
        .collect();
    let consistent = by_size.iter().all(Option::is_some);
    let k = by_size.iter().take_while(|v| **v == Some(false)).count() as i64 - 1;
    report.check(
        "on shift-invariant graphs the property depends only on |S| and switches once",
        consistent && by_size.iter().skip((k + 1) as usize).all(|v| *v == Some(true)),
        format!("threshold k = {k}"),
    );
    let shift = Permutation::from_cycles((left + right) as usize, &[(0..left).collect::<Vec<VertexId>>()])
        .expect("a cycle on Y");
    let universe = f.universe();
    let edges = edge_group(universe, &[shift]).expect("shift acts on edges");
    let delta = delta_of_property(f).expect("monotone and exhaustive");
    let preserved = edges
        .generators()
        .iter()
        .all(|g| is_automorphism(&delta, g).unwrap_or(false));
    report.check(
        "the shift acts on the failure complex",
        preserved,
        format!("|G| = {}", edges.order()),
    );
    let chi = quotient_complex(&delta, &edges)
        .expect("domain")
        .complex
        .euler_characteristic();
    let k_u = k.max(0) as u64;
    let sign = if k_u % 2 == 1 { 1 } else { -1 };
    let expected = 1 + sign * binomial(right as u64 - 1, k_u) as i64;
    report.check(
        "chi of the orbit complex is 1 + (-1)^(k-1) C(|Z|-1, k)",
        chi == expected,
        format!("chi = {chi}, formula = {expected}, k = {k}"),
    );
    report.check(
        "chi of the orbit complex differs from 1, so the failure complex is not collapsible",
        chi != 1,
        format!("chi = {chi}"),
    );
    direct_check(&mut report, f);
    report
}

/// How one reduction step shrinks the vertex count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionCase {
    /// The star at vertex 0 fails; add it to graphs on the other vertices.
    StarFails,
    /// The clique on all but the last vertex holds; restrict to graphs
    /// avoiding vertex 0.
    CliqueHolds,
    /// Neither; add the clique on the first half to bipartite graphs between
    /// the halves.
    Bipartite,
}

/// One step of the reduction: the induced property and the bound it carries
/// when it ends the chain.
#[derive(Clone, Debug, Serialize)]
pub struct ReductionStep {
    pub vertices: u32,
    pub case: ReductionCase,
    pub induced_name: String,
    pub induced_edges: usize,
    pub induced_nontrivial: bool,
    #[serde(skip)]
    pub induced: PropertyOracle,
}

/// A lower bound on decision-tree complexity with the reductions behind it.
#[derive(Clone, Debug, Serialize)]
pub struct LowerBoundCertificate {
    pub vertices: u32,
    /// Largest prime not exceeding the vertex count.
    pub prime: u64,
    pub steps: Vec<ReductionStep>,
    /// `C(p, 2)` when the chain reaches `p` vertices, `m (n' - m)` when it ends
    /// in a bipartite step at `n'` vertices.
    pub chain_bound: u64,
    /// `p^2 / 4`.
    #[serde(serialize_with = "ratio_string")]
    pub closed_form: Ratio<u64>,
    #[serde(serialize_with = "ratio_string")]
    pub bound: Ratio<u64>,
}

fn ratio_string<S: serde::Serializer>(r: &Ratio<u64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// Builds the reduction chain for a nontrivial monotone invariant property on
/// `n` vertices and the bound it certifies.
///
/// Errors when the hypotheses fail or an induced property turns out constant.
pub fn lower_bound_certificate(h: &PropertyOracle) -> Result<LowerBoundCertificate> {
    let UniverseKind::Complete { n } = h.universe().kind() else {
        return Err(Error::Precondition("expected a complete-graph universe".into()));
    };
    if n < 2 {
        return Err(Error::Precondition("needs at least two vertices".into()));
    }
    if let Some(reason) = hypothesis_failure(h) {
        return Err(Error::Precondition(reason));
    }
    let prime = (2..=n as u64).rev().find(|&q| is_prime(q)).expect("2 <= n");
    let mut steps = Vec::new();
    let mut current = h.clone();
    let mut size = n;
    let mut chain_bound = binomial(prime, 2);
    while size as u64 > prime {
        let universe = current.universe().clone();
        let star = (1..size)
            .map(|v| 1u64 << universe.edge_index(0, v).expect("edge"))
            .fold(0, |a, b| a | b);
        let clique_rest = (1..size - 1)
            .flat_map(|b| (0..b).map(move |a| (a, b)))
            .map(|(a, b)| 1u64 << universe.edge_index(a, b).expect("edge"))
            .fold(0, |a, b| a | b);
        let (case, induced) = if !current.eval(star) {
            let smaller = EdgeUniverse::complete(size - 1)?;
            let lift = lift_shifted(&smaller, &universe);
            let base = current.clone();
            let name = format!("{} + star at 0", base.name());
            let oracle = PropertyOracle::new(name, smaller.clone(), true, true, move |m| base.eval(lift(m) | star));
            (ReductionCase::StarFails, oracle)
        } else if current.eval(clique_rest) {
            let smaller = EdgeUniverse::complete(size - 1)?;
            let lift = lift_shifted(&smaller, &universe);
            let base = current.clone();
            let name = format!("{} avoiding 0", base.name());
            let oracle = PropertyOracle::new(name, smaller.clone(), true, true, move |m| base.eval(lift(m)));
            (ReductionCase::CliqueHolds, oracle)
        } else {
            let half = size / 2;
            let bip = EdgeUniverse::bipartite(half, size - half)?;
            let map: Vec<u64> = bip
                .edges()
                .iter()
                .map(|&(a, b)| 1u64 << universe.edge_index(a, b).expect("same labels"))
                .collect();
            let clique = (1..half)
                .flat_map(|b| (0..b).map(move |a| (a, b)))
                .map(|(a, b)| 1u64 << universe.edge_index(a, b).expect("edge"))
                .fold(0, |a, b| a | b);
            let base = current.clone();
            let name = format!("{} + clique on first {half}", base.name());
            let oracle = PropertyOracle::new(name, bip, true, true, move |m| {
                let lifted = map
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| m >> i & 1 == 1)
                    .fold(clique, |acc, (_, &b)| acc | b);
                base.eval(lifted)
            });
            chain_bound = half as u64 * (size - half) as u64;
            (ReductionCase::Bipartite, oracle)
        };
        let nontrivial = induced.eval(0) != induced.eval(induced.universe().full_mask());
        steps.push(ReductionStep {
            vertices: size,
            case,
            induced_name: induced.name().to_string(),
            induced_edges: induced.edge_count(),
            induced_nontrivial: nontrivial,
            induced: induced.clone(),
        });
        if !nontrivial {
            return Err(Error::Precondition(format!(
                "induced property `{}` is constant",
                induced.name()
            )));
        }
        if case == ReductionCase::Bipartite {
            break;
        }
        current = induced;
        size -= 1;
    }
    let closed_form = Ratio::new(prime * prime, 4);
    let bound = closed_form.max(Ratio::from_integer(chain_bound));
    Ok(LowerBoundCertificate {
        vertices: n,
        prime,
        steps,
        chain_bound,
        closed_form,
        bound,
    })
}

/// Maps an edge set on vertices `0..n-1` to the same edges on `1..n`.
fn lift_shifted(smaller: &EdgeUniverse, larger: &EdgeUniverse) -> impl Fn(u64) -> u64 + Send + Sync + 'static {
    let map: Vec<u64> = smaller
        .edges()
        .iter()
        .map(|&(a, b)| 1u64 << larger.edge_index(a + 1, b + 1).expect("shifted edge"))
        .collect();
    move |m| {
        map.iter()
            .enumerate()
            .filter(|(i, _)| m >> i & 1 == 1)
            .fold(0, |acc, (_, &b)| acc | b)
    }
}

/// Report form of [`lower_bound_certificate`]; with `direct` the bound is
/// also compared with the exact complexity (up to [`EXACT_EDGE_LIMIT`] edges).
pub fn lower_bound_check(h: &PropertyOracle, direct: bool) -> TheoremReport {
    let mut report = TheoremReport::new(
        TheoremId::LowerBound,
        format!("{} on {} vertices", h.name(), h.universe().vertex_count()),
    );
    let cert = match lower_bound_certificate(h) {
        Ok(c) => c,
        Err(Error::Precondition(reason)) if reason.contains("constant") => {
            report.check("every induced property is nontrivial", false, reason);
            return report;
        }
        Err(e) => return report.not_applicable(e.to_string()),
    };
    for step in &cert.steps {
        report.check(
            format!("induced property at {} vertices is nontrivial", step.vertices),
            step.induced_nontrivial,
            format!("{:?}: {} on {} edges", step.case, step.induced_name, step.induced_edges),
        );
        if step.case == ReductionCase::Bipartite && step.induced_edges <= EXHAUSTIVE_EDGE_LIMIT {
            let monotone = check_monotone(&step.induced, DEFAULT_SEED) == MonotoneCheck::Monotone;
            report.check(
                "induced bipartite property is monotone",
                monotone,
                step.induced_name.clone(),
            );
        }
    }
    report.check(
        "chain bound is at least p^2/4",
        Ratio::from_integer(cert.chain_bound) >= cert.closed_form,
        format!(
            "chain bound {}, p = {}, p^2/4 = {}",
            cert.chain_bound, cert.prime, cert.closed_form
        ),
    );
    if direct && h.edge_count() <= EXACT_EDGE_LIMIT {
        let d = dtc(h).expect("within the exact limit");
        report.check(
            "exact complexity meets the bound",
            Ratio::from_integer(d as u64) >= cert.bound,
            format!("D = {d}, bound = {}", cert.bound),
        );
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::builtin_property;
    use crate::theorems::Verdict;

    fn complete(n: u32) -> EdgeUniverse {
        EdgeUniverse::complete(n).unwrap()
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(3, 0), 1);
        assert_eq!(binomial(2, 3), 0);
    }

    #[test]
    fn kss_connectivity_on_four() {
        let h = builtin_property("connected", complete(4), None).unwrap();
        let r = kss_evasiveness_check(&h);
        assert!(r.passed(), "{r:#?}");
        assert!(r.checks.iter().any(|c| c.witness == "D = 6, edges = 6"));
    }

    #[test]
    fn kss_not_applicable_off_prime_powers() {
        let h = builtin_property("connected", complete(6), None).unwrap();
        assert!(matches!(
            kss_evasiveness_check(&h).verdict,
            Verdict::NotApplicable { .. }
        ));
        let h = builtin_property("vertex_incident", complete(4), None).unwrap();
        assert!(matches!(
            kss_evasiveness_check(&h).verdict,
            Verdict::NotApplicable { .. }
        ));
    }

    #[test]
    fn kss_empty_failure_complex() {
        // holds on every nonempty graph
        let h = builtin_property("min_edges", complete(3), Some(1)).unwrap();
        let r = kss_evasiveness_check(&h);
        assert!(r.passed(), "{r:#?}");
        assert!(r.checks.iter().any(|c| c.assertion.contains("empty")));
    }

    #[test]
    fn yao_threshold_two_of_four() {
        // k = 2: holds once three of the four Z-vertices see all of Y
        let f = builtin_property("bipartite_threshold", EdgeUniverse::bipartite(2, 4).unwrap(), Some(3)).unwrap();
        let r = yao_check(&f);
        assert!(r.passed(), "{r:#?}");
        assert!(r.checks.iter().any(|c| c.witness.starts_with("chi = -2, formula = -2")));
    }

    #[test]
    fn yao_threshold_zero() {
        let f = builtin_property("bipartite_threshold", EdgeUniverse::bipartite(2, 3).unwrap(), Some(1)).unwrap();
        let r = yao_check(&f);
        assert!(r.passed(), "{r:#?}");
        assert!(r
            .checks
            .iter()
            .any(|c| c.witness.starts_with("chi = 0, formula = 0, k = 0")));
    }

    #[test]
    fn lower_bound_chains_for_connectivity() {
        let expected = [(4, 3, ReductionCase::Bipartite, 4), (6, 5, ReductionCase::Bipartite, 9)];
        for (n, prime, case, bound) in expected {
            let h = builtin_property("connected", complete(n), None).unwrap();
            let cert = lower_bound_certificate(&h).unwrap();
            assert_eq!(cert.prime, prime);
            assert_eq!(cert.steps.len(), 1);
            assert_eq!(cert.steps[0].case, case);
            assert_eq!(cert.chain_bound, bound);
        }
        let h = builtin_property("connected", complete(5), None).unwrap();
        let cert = lower_bound_certificate(&h).unwrap();
        assert!(cert.steps.is_empty());
        assert_eq!(cert.chain_bound, 10);
    }

    #[test]
    fn lower_bound_star_and_clique_cases() {
        // a triangle somewhere: the star fails, so the first step adds it
        let h = builtin_property("contains_clique", complete(6), Some(3)).unwrap();
        let cert = lower_bound_certificate(&h).unwrap();
        assert_eq!(cert.steps[0].case, ReductionCase::StarFails);
        // at least one edge: the clique on five vertices holds
        let h = builtin_property("min_edges", complete(6), Some(1)).unwrap();
        let cert = lower_bound_certificate(&h).unwrap();
        assert_eq!(cert.steps[0].case, ReductionCase::CliqueHolds);
        assert!(cert.steps.iter().all(|s| s.induced_nontrivial));
        let r = lower_bound_check(&h, true);
        assert!(r.passed(), "{r:#?}");
    }
}
