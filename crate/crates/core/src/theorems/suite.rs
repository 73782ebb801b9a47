use super::{
    euler_fixed_check, kss_evasiveness_check, lefschetz_invariant_simplex, lower_bound_check, oliver_check,
    smith_acyclicity_check, yao_check, TheoremId, TheoremReport,
};
use crate::action::bar_action;
use crate::affine::affine_group;
use crate::collapse::DEFAULT_NODE_BUDGET;
use crate::complex::{barycentric_subdivision, cone, standard_complex, Complex, StandardKind};
use crate::field::Prime;
use crate::fixtures::{hollow_triangle, two_triangles};
use crate::graph::{builtin_property, EdgeUniverse};
use crate::perm::{PermGroup, Permutation, DEFAULT_GROUP_CAP};

/// One shipped instance of a theorem check.
pub struct SuiteCase {
    pub id: TheoremId,
    pub label: String,
    run: Box<dyn Fn() -> TheoremReport + Send + Sync>,
}

impl SuiteCase {
    fn new(id: TheoremId, label: impl Into<String>, run: impl Fn() -> TheoremReport + Send + Sync + 'static) -> Self {
        Self {
            id,
            label: label.into(),
            run: Box::new(run),
        }
    }

    pub fn run(&self) -> TheoremReport {
        (self.run)()
    }
}

fn prime(p: u64) -> Prime {
    Prime::new(p).expect("prime")
}

fn cycles(text: &str, n: usize) -> Permutation {
    Permutation::parse_cycles(text, Some(n)).expect("valid cycles")
}

fn solid_triangle() -> Complex {
    standard_complex(StandardKind::Full, 2).expect("small")
}

fn cone_over_hollow() -> Complex {
    cone(3, &hollow_triangle()).expect("fresh apex")
}

fn lefschetz(c: Complex, f: Permutation, p: u64) -> TheoremReport {
    match lefschetz_invariant_simplex(&c, &f, prime(p)) {
        Ok(found) => found.report,
        Err(e) => {
            TheoremReport::new(TheoremId::LefschetzFixedSimplex, format!("f = {f}")).not_applicable(e.to_string())
        }
    }
}

/// The shipped instances, in a fixed order; `None` selects every theorem.
pub fn suite_cases(only: Option<TheoremId>) -> Vec<SuiteCase> {
    use TheoremId::*;
    let mut cases = vec![
        SuiteCase::new(LefschetzFixedSimplex, "solid triangle, rotation", || {
            lefschetz(solid_triangle(), cycles("(0 1 2)", 3), 3)
        }),
        SuiteCase::new(LefschetzFixedSimplex, "cone over hollow triangle, rotation", || {
            lefschetz(cone_over_hollow(), cycles("(0 1 2)", 4), 2)
        }),
        SuiteCase::new(LefschetzFixedSimplex, "two triangles, identity", || {
            lefschetz(two_triangles(), Permutation::identity(4), 5)
        }),
        SuiteCase::new(EulerFixed, "solid triangle, rotation", || {
            euler_fixed_check(&solid_triangle(), &cycles("(0 1 2)", 3), prime(5))
        }),
        SuiteCase::new(EulerFixed, "two triangles, identity", || {
            euler_fixed_check(&two_triangles(), &Permutation::identity(4), prime(2))
        }),
        SuiteCase::new(EulerFixed, "edge, reflection", || {
            let edge = standard_complex(StandardKind::Full, 1).expect("small");
            euler_fixed_check(&edge, &cycles("(0 1)", 2), prime(3))
        }),
        SuiteCase::new(EulerFixed, "hollow triangle, rotation", || {
            euler_fixed_check(&hollow_triangle(), &cycles("(0 1 2)", 3), prime(2))
        }),
        SuiteCase::new(SmithAcyclicity, "subdivided solid triangle, rotation, p = 3", || {
            let base = solid_triangle();
            let (bar, dict) = barycentric_subdivision(&base);
            let g = bar_action(&base, &cycles("(0 1 2)", 3), &dict).expect("automorphism");
            smith_acyclicity_check(&bar, &g, prime(3))
        }),
        SuiteCase::new(SmithAcyclicity, "solid triangle, transposition, p = 2", || {
            smith_acyclicity_check(&solid_triangle(), &cycles("(0 1)", 3), prime(2))
        }),
        SuiteCase::new(SmithAcyclicity, "cone over hollow triangle, rotation, p = 3", || {
            smith_acyclicity_check(&cone_over_hollow(), &cycles("(0 1 2)", 4), prime(3))
        }),
        SuiteCase::new(OliverFixedPoint, "solid triangle, cyclic group of order 3", || {
            oliver_check(
                &solid_triangle(),
                &PermGroup::cyclic(&cycles("(0 1 2)", 3)),
                None,
                DEFAULT_NODE_BUDGET,
            )
        }),
        SuiteCase::new(OliverFixedPoint, "cone over hollow triangle, S_3", || {
            let gens = [cycles("(0 1 2)", 4), cycles("(0 1)", 4)];
            let g = PermGroup::from_generators(4, &gens, DEFAULT_GROUP_CAP).expect("small");
            oliver_check(&cone_over_hollow(), &g, None, DEFAULT_NODE_BUDGET)
        }),
        SuiteCase::new(OliverFixedPoint, "full simplex on the edges of K_4, AGL(1,4)", || {
            let universe = EdgeUniverse::complete(4).expect("small");
            let affine = affine_group(2, 2).expect("GF(4)");
            let gens = affine
                .group
                .generators()
                .iter()
                .map(|g| universe.edge_permutation(g).expect("degree 4"))
                .collect::<Vec<_>>();
            let g = PermGroup::from_generators(6, &gens, DEFAULT_GROUP_CAP).expect("small");
            let simplex = standard_complex(StandardKind::Full, 5).expect("small");
            oliver_check(&simplex, &g, None, DEFAULT_NODE_BUDGET)
        }),
    ];
    for (name, n, param) in [
        ("connected", 4, None),
        ("contains_cycle", 4, None),
        ("contains_clique", 5, Some(3)),
        ("min_edges", 4, Some(3)),
    ] {
        let label = match param {
            Some(k) => format!("{name}({k}), n = {n}"),
            None => format!("{name}, n = {n}"),
        };
        cases.push(SuiteCase::new(KssEvasiveness, label, move || {
            let universe = EdgeUniverse::complete(n).expect("small");
            kss_evasiveness_check(&builtin_property(name, universe, param).expect("builtin"))
        }));
    }
    for (left, right) in [(2, 3), (3, 2), (2, 4)] {
        for k in 1..=right as u64 {
            cases.push(SuiteCase::new(
                YaoBipartite,
                format!("bipartite_threshold({k}), {left} x {right}"),
                move || {
                    let universe = EdgeUniverse::bipartite(left, right).expect("small");
                    yao_check(&builtin_property("bipartite_threshold", universe, Some(k)).expect("builtin"))
                },
            ));
        }
    }
    for n in [4, 5, 6] {
        cases.push(SuiteCase::new(LowerBound, format!("connected, n = {n}"), move || {
            let universe = EdgeUniverse::complete(n).expect("small");
            lower_bound_check(&builtin_property("connected", universe, None).expect("builtin"), n <= 5)
        }));
    }
    cases.retain(|c| only.map_or(true, |id| c.id == id));
    cases
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theorems::Verdict;

    #[test]
    fn every_theorem_has_cases() {
        for id in TheoremId::ALL {
            assert!(!suite_cases(Some(id)).is_empty(), "{id}");
        }
    }

    #[test]
    fn hollow_triangle_is_not_applicable() {
        let reports: Vec<TheoremReport> = suite_cases(Some(TheoremId::EulerFixed))
            .iter()
            .map(SuiteCase::run)
            .collect();
        assert!(reports.iter().all(|r| !r.failed()));
        assert!(matches!(reports.last().unwrap().verdict, Verdict::NotApplicable { .. }));
    }

    #[test]
    fn shipped_suite_has_no_failures() {
        for case in suite_cases(None) {
            let r = case.run();
            assert!(!r.failed(), "{}: {r:#?}", case.label);
        }
    }
}
