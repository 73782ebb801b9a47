use std::collections::BTreeSet;

use super::{TheoremId, TheoremReport};
use crate::action::{bar_action, bar_group, fixed_set, is_automorphism, quotient_complex, verify_bar_quotient_iso};
use crate::chain::{chain_map_matrix, is_acyclic, lefschetz_number, lefschetz_sum, ChainComplex};
use crate::collapse::{search_collapsible, verify_sequence, CollapseOutcome, CollapseSequence};
use crate::complex::{barycentric_subdivision, Complex};
use crate::error::{Error, Result};
use crate::field::{span_rank, FpMatrix, Prime};
use crate::perm::{PermGroup, Permutation};
use crate::simplex::Simplex;

fn describe(c: &Complex) -> String {
    let counts: Vec<String> = (0..=c.dim().unwrap_or(0))
        .map(|d| c.count_of_dim(d).to_string())
        .collect();
    format!("{} simplices, f-vector ({})", c.len(), counts.join(","))
}

fn pointwise_fixed(s: &Simplex, f: &Permutation) -> bool {
    s.vertices().iter().all(|&v| f.apply(v) == v)
}

/// An invariant simplex together with the report that found it.
#[derive(Clone, Debug)]
pub struct InvariantSimplex {
    pub simplex: Option<Simplex>,
    pub report: TheoremReport,
}

/// Finds a simplex with `f(Q) = Q` in an `F_p`-acyclic complex.
///
/// Errors when `f` is not an automorphism or `c` is not `F_p`-acyclic. A scan
/// that finds nothing is reported as a failed check.
pub fn lefschetz_invariant_simplex(c: &Complex, f: &Permutation, p: Prime) -> Result<InvariantSimplex> {
    if !is_automorphism(c, f)? {
        return Err(Error::Precondition(format!("{f} is not an automorphism")));
    }
    if !is_acyclic(c, p) {
        return Err(Error::Precondition(format!("complex is not F_{}-acyclic", p.get())));
    }
    let mut report = TheoremReport::new(
        TheoremId::LefschetzFixedSimplex,
        format!("{}; f = {f}; p = {}", describe(c), p.get()),
    );
    let trace = lefschetz_sum(c, |v| f.apply(v), p)?;
    report.check(
        "alternating trace sum of F on chains is 1 in F_p",
        trace.value() == 1,
        format!("sum = {}", trace.value()),
    );
    let simplex = c.simplices().find(|&s| &f.apply_simplex(s) == s).cloned();
    report.check(
        "some simplex Q has f(Q) = Q",
        simplex.is_some(),
        simplex
            .as_ref()
            .map_or_else(|| "no invariant simplex".to_string(), |s| format!("Q = {s}")),
    );
    Ok(InvariantSimplex { simplex, report })
}

/// Euler characteristic of the invariant simplices of an automorphism of an
/// `F_p`-acyclic complex.
///
/// When every invariant simplex is fixed pointwise, asserts `chi = 1`. When
/// some invariant simplex has its vertices permuted oddly it contributes with
/// the opposite sign to the trace sum, so the check asserts the signed count
/// equals 1 and that `chi` is odd instead.
pub fn euler_fixed_check(c: &Complex, f: &Permutation, p: Prime) -> TheoremReport {
    let report = TheoremReport::new(
        TheoremId::EulerFixed,
        format!("{}; f = {f}; p = {}", describe(c), p.get()),
    );
    match is_automorphism(c, f) {
        Ok(true) => {}
        Ok(false) => return report.not_applicable(format!("{f} is not an automorphism")),
        Err(e) => return report.not_applicable(e.to_string()),
    }
    if !is_acyclic(c, p) {
        return report.not_applicable(format!("complex is not F_{}-acyclic", p.get()));
    }
    let mut report = report;
    let fixed = fixed_set(c, std::slice::from_ref(f)).expect("domain checked");
    let chi = fixed.euler_characteristic();
    let signed = lefschetz_number(c, |v| f.apply(v));
    let trace = lefschetz_sum(c, |v| f.apply(v), p).expect("automorphism");
    report.check(
        "alternating trace sum of F on chains is 1 in F_p",
        trace.value() == 1,
        format!("sum = {}", trace.value()),
    );
    report.check(
        "signed count of invariant simplices is 1",
        signed == 1,
        format!("signed count = {signed}"),
    );
    let reversed: Vec<&Simplex> = fixed.simplices.iter().filter(|s| !pointwise_fixed(s, f)).collect();
    if reversed.is_empty() {
        report.check(
            "chi of the invariant simplices is 1",
            chi == 1,
            format!("chi = {chi} over {} invariant simplices", fixed.simplices.len()),
        );
    } else {
        report.check(
            "chi of the invariant simplices is odd",
            chi.rem_euclid(2) == 1,
            format!(
                "chi = {chi}; {} invariant simplices not fixed pointwise, e.g. {}",
                reversed.len(),
                reversed[0]
            ),
        );
    }
    report
}

/// `F_p`-span helpers on explicit vectors.
struct Span<'a> {
    p: Prime,
    len: usize,
    vectors: &'a [Vec<u32>],
}

impl Span<'_> {
    fn rank(&self) -> usize {
        span_rank(self.p, self.len, self.vectors)
    }

    fn independent(&self) -> bool {
        self.rank() == self.vectors.len()
    }

    fn inside_image_of(&self, m: &FpMatrix) -> bool {
        if self.vectors.is_empty() {
            return true;
        }
        let stacked = m.hstack(&FpMatrix::from_columns(self.p, self.len, self.vectors));
        stacked.rank() == m.rank()
    }

    fn inside_kernel_of(&self, m: &FpMatrix) -> bool {
        self.vectors.iter().all(|v| m.apply(v).iter().all(|&x| x == 0))
    }
}

fn columns(m: &FpMatrix) -> Vec<Vec<u32>> {
    (0..m.cols()).map(|j| m.column(j)).collect()
}

/// Unreduced homology dimensions of the subcomplex of chains spanned, degree
/// by degree, by `spans[n]`.
fn subcomplex_homology(chains: &ChainComplex, spans: &[Vec<Vec<u32>>]) -> Vec<usize> {
    let p = chains.p;
    let top = spans.len();
    let rank_of = |n: usize| span_rank(p, chains.rank_of_group(n), &spans[n]);
    let boundary_rank = |n: usize| -> usize {
        if n == 0 || n >= top || spans[n].is_empty() {
            return 0;
        }
        let b = FpMatrix::from_columns(p, chains.rank_of_group(n), &spans[n]);
        chains.boundary(n).mul(&b).rank()
    };
    (0..top)
        .map(|n| rank_of(n) - boundary_rank(n) - boundary_rank(n + 1))
        .collect()
}

fn per_dim<T: ToString>(values: &[T]) -> String {
    let parts: Vec<String> = values.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(","))
}

/// Checks that an order-`p` automorphism of an `F_p`-acyclic complex has an
/// `F_p`-acyclic fixed subcomplex, together with the rank and basis facts
/// about `sigma = I + F + ... + F^(p-1)` and `delta = I - F` that the argument
/// rests on.
///
/// When the invariant simplices do not form a subcomplex the check runs on the
/// barycentric subdivision with the induced automorphism, whose fixed set
/// always is one.
pub fn smith_acyclicity_check(c: &Complex, f: &Permutation, p: Prime) -> TheoremReport {
    let report = TheoremReport::new(
        TheoremId::SmithAcyclicity,
        format!("{}; f = {f}; p = {}", describe(c), p.get()),
    );
    match is_automorphism(c, f) {
        Ok(true) => {}
        Ok(false) => return report.not_applicable(format!("{f} is not an automorphism")),
        Err(e) => return report.not_applicable(e.to_string()),
    }
    if f.order() != p.get() {
        return report.not_applicable(format!("f has order {}, not {}", f.order(), p.get()));
    }
    if !is_acyclic(c, p) {
        return report.not_applicable(format!("complex is not F_{}-acyclic", p.get()));
    }
    let mut report = report;
    let fixed = fixed_set(c, std::slice::from_ref(f)).expect("domain checked");
    if fixed.is_subcomplex {
        smith_core(c, f, p, &mut report);
        return report;
    }
    let (bar, dict) = barycentric_subdivision(c);
    let g = bar_action(c, f, &dict).expect("automorphism");
    let bar_fixed = fixed_set(&bar, std::slice::from_ref(&g)).expect("domain checked");
    report.check(
        "invariant simplices of the subdivision form a subcomplex",
        bar_fixed.is_subcomplex,
        format!(
            "original fixed set is not closed; subdivision has {} simplices, {} invariant",
            bar.len(),
            bar_fixed.simplices.len()
        ),
    );
    if bar_fixed.is_subcomplex {
        smith_core(&bar, &g, p, &mut report);
    }
    report
}

fn smith_core(c: &Complex, f: &Permutation, p: Prime, report: &mut TheoremReport) {
    let order = p.get() as usize;
    let chains = ChainComplex::of_complex(c, p);
    let top = chains.len();
    let fixed = fixed_set(c, std::slice::from_ref(f)).expect("domain checked");
    let fixed_complex = fixed.as_complex().expect("subcomplex");

    let mut free_orbits = Vec::new();
    let mut fixed_counts = Vec::new();
    let mut ranks_sigma = Vec::new();
    let mut ranks_delta = Vec::new();
    let mut nullity_sigma = Vec::new();
    let mut nullity_delta = Vec::new();
    let mut basis_ok = [true; 4];
    let mut ker_sigma_spans = Vec::new();
    let mut ker_delta_spans = Vec::new();
    let mut im_sigma_spans = Vec::new();
    let mut im_delta_spans = Vec::new();
    let mut fixed_spans = Vec::new();

    for n in 0..top {
        let len = chains.rank_of_group(n);
        let simplices = c.of_dim(n);
        let big_f = chain_map_matrix(c, c, |v| f.apply(v), n, p).expect("automorphism");
        let identity = FpMatrix::identity(p, len);
        let mut sigma = identity.clone();
        let mut power = identity.clone();
        for _ in 1..order {
            power = big_f.mul(&power);
            sigma = sigma.add(&power);
        }
        let delta = identity.sub(&big_f);

        let unit = |i: usize| {
            let mut v = vec![0u32; len];
            v[i] = 1;
            v
        };
        let fixed_units: Vec<Vec<u32>> = simplices
            .iter()
            .enumerate()
            .filter(|(_, s)| &f.apply_simplex(s) == *s)
            .map(|(i, _)| unit(i))
            .collect();
        // one representative per free orbit: its least simplex
        let mut seen = BTreeSet::new();
        let mut orbit_sums = Vec::new();
        let mut differences = Vec::new();
        for (i, s) in simplices.iter().enumerate() {
            if &f.apply_simplex(s) == s || seen.contains(s) {
                continue;
            }
            let mut images = vec![unit(i)];
            let mut t = s.clone();
            for _ in 1..order {
                t = f.apply_simplex(&t);
                seen.insert(t.clone());
                images.push(big_f.apply(images.last().expect("nonempty")));
            }
            seen.insert(s.clone());
            let sum = images.iter().fold(vec![0u32; len], |acc, v| {
                acc.iter()
                    .zip(v)
                    .map(|(a, b)| p.reduce(*a as i64 + *b as i64))
                    .collect()
            });
            orbit_sums.push(sum);
            for w in images.windows(2) {
                differences.push(
                    w[0].iter()
                        .zip(&w[1])
                        .map(|(a, b)| p.reduce(*a as i64 - *b as i64))
                        .collect(),
                );
            }
        }

        let rank_sigma = sigma.rank();
        let rank_delta = delta.rank();
        let ker_sigma = sigma.kernel();
        let ker_delta = delta.kernel();

        let im_sigma_basis = Span {
            p,
            len,
            vectors: &orbit_sums,
        };
        basis_ok[0] &=
            im_sigma_basis.independent() && im_sigma_basis.inside_image_of(&sigma) && orbit_sums.len() == rank_sigma;
        let im_delta_basis = Span {
            p,
            len,
            vectors: &differences,
        };
        basis_ok[1] &=
            im_delta_basis.independent() && im_delta_basis.inside_image_of(&delta) && differences.len() == rank_delta;
        let with_fixed = |mut v: Vec<Vec<u32>>| {
            v.extend(fixed_units.iter().cloned());
            v
        };
        let ker_sigma_claim = with_fixed(differences.clone());
        let span = Span {
            p,
            len,
            vectors: &ker_sigma_claim,
        };
        basis_ok[2] &= span.independent() && span.inside_kernel_of(&sigma) && ker_sigma_claim.len() == ker_sigma.len();
        let ker_delta_claim = with_fixed(orbit_sums.clone());
        let span = Span {
            p,
            len,
            vectors: &ker_delta_claim,
        };
        basis_ok[3] &= span.independent() && span.inside_kernel_of(&delta) && ker_delta_claim.len() == ker_delta.len();

        free_orbits.push(orbit_sums.len());
        fixed_counts.push(fixed_units.len());
        ranks_sigma.push(rank_sigma);
        ranks_delta.push(rank_delta);
        nullity_sigma.push(ker_sigma.len());
        nullity_delta.push(ker_delta.len());
        ker_sigma_spans.push(ker_sigma);
        ker_delta_spans.push(ker_delta);
        im_sigma_spans.push(columns(&sigma));
        im_delta_spans.push(columns(&delta));
        fixed_spans.push(fixed_units);
    }

    let witness = format!(
        "free orbits {}, invariant {}, rank sigma {}, rank delta {}, dim ker sigma {}, dim ker delta {}",
        per_dim(&free_orbits),
        per_dim(&fixed_counts),
        per_dim(&ranks_sigma),
        per_dim(&ranks_delta),
        per_dim(&nullity_sigma),
        per_dim(&nullity_delta)
    );
    let q = order - 1;
    report.check(
        "rank sigma_n is the number of free orbits and rank delta_n is (p-1) times it",
        (0..top).all(|n| ranks_sigma[n] == free_orbits[n] && ranks_delta[n] == q * free_orbits[n]),
        witness.clone(),
    );
    let names = [
        "orbit sums form a basis of im sigma",
        "differences F^i Q - F^(i+1) Q form a basis of im delta",
        "those differences with the invariant simplices form a basis of ker sigma",
        "orbit sums with the invariant simplices form a basis of ker delta",
    ];
    for (name, ok) in names.iter().zip(basis_ok) {
        report.check(*name, ok, witness.clone());
    }
    report.check(
        "dim ker sigma_n = dim im delta_n + #invariant n-simplices",
        (0..top).all(|n| nullity_sigma[n] == ranks_delta[n] + fixed_counts[n]),
        witness.clone(),
    );
    report.check(
        "dim ker delta_n = dim im sigma_n + #invariant n-simplices",
        (0..top).all(|n| nullity_delta[n] == ranks_sigma[n] + fixed_counts[n]),
        witness,
    );

    let h_fixed = subcomplex_homology(&chains, &fixed_spans);
    let h_ker_sigma = subcomplex_homology(&chains, &ker_sigma_spans);
    let h_ker_delta = subcomplex_homology(&chains, &ker_delta_spans);
    let h_im_sigma = subcomplex_homology(&chains, &im_sigma_spans);
    let h_im_delta = subcomplex_homology(&chains, &im_delta_spans);
    report.check(
        "H_n(ker sigma) = H_n(im delta) + H_n(fixed) for every n",
        (0..top).all(|n| h_ker_sigma[n] == h_im_delta[n] + h_fixed[n]),
        format!(
            "H(ker sigma) {}, H(im delta) {}, H(fixed) {}",
            per_dim(&h_ker_sigma),
            per_dim(&h_im_delta),
            per_dim(&h_fixed)
        ),
    );
    report.check(
        "H_n(ker delta) = H_n(im sigma) + H_n(fixed) for every n",
        (0..top).all(|n| h_ker_delta[n] == h_im_sigma[n] + h_fixed[n]),
        format!(
            "H(ker delta) {}, H(im sigma) {}, H(fixed) {}",
            per_dim(&h_ker_delta),
            per_dim(&h_im_sigma),
            per_dim(&h_fixed)
        ),
    );
    report.check(
        "the fixed subcomplex is F_p-acyclic",
        is_acyclic(&fixed_complex, p),
        format!("fixed subcomplex: {}", describe(&fixed_complex)),
    );
}

/// Index and prime of a normal subgroup of prime-power order with cyclic
/// quotient, preferring the smallest.
fn cyclic_extension_witness(g: &PermGroup) -> Option<(usize, Option<u64>)> {
    g.normal_subgroups().into_iter().find_map(|sub| {
        let order = sub.len() as u64;
        let prime = prime_power_base(order)?;
        g.quotient_is_cyclic(&sub).then_some((sub.len(), prime))
    })
}

/// `Some(Some(p))` for `p^k` with `k >= 1`, `Some(None)` for 1, `None`
/// otherwise.
pub(crate) fn prime_power_base(n: u64) -> Option<Option<u64>> {
    if n == 1 {
        return Some(None);
    }
    let p = (2..=n).find(|d| n % d == 0)?;
    let mut m = n;
    while m % p == 0 {
        m /= p;
    }
    (m == 1).then_some(Some(p))
}

/// Checks the fixed-point statements for a group acting on a collapsible
/// complex: the orbit complex has Euler characteristic 1, some simplex is
/// invariant under the whole group, and the invariant part of the
/// subdivision agrees with the subdivided orbit complex.
///
/// Collapsibility comes from `certificate` when given, otherwise from a search
/// limited to `node_budget` states.
pub fn oliver_check(
    c: &Complex,
    g: &PermGroup,
    certificate: Option<&CollapseSequence>,
    node_budget: u64,
) -> TheoremReport {
    let report = TheoremReport::new(
        TheoremId::OliverFixedPoint,
        format!("{}; |G| = {} on {} points", describe(c), g.order(), g.degree()),
    );
    for f in g.generators() {
        match is_automorphism(c, f) {
            Ok(true) => {}
            Ok(false) => return report.not_applicable(format!("generator {f} is not an automorphism")),
            Err(e) => return report.not_applicable(e.to_string()),
        }
    }
    let collapsible = match certificate {
        Some(seq) => verify_sequence(c, seq) && seq.reaches_point(),
        None => match search_collapsible(c, node_budget) {
            CollapseOutcome::Collapsible(seq) => verify_sequence(c, &seq),
            CollapseOutcome::NotCollapsible => {
                return report.not_applicable("complex is not collapsible");
            }
            CollapseOutcome::BudgetExceeded { explored } => {
                return report.not_applicable(format!("collapsibility undecided after {explored} states"));
            }
        },
    };
    if !collapsible {
        return report.not_applicable("supplied collapse certificate does not reach a point");
    }
    let Some((sub_order, prime)) = cyclic_extension_witness(g) else {
        return report.not_applicable("no normal subgroup of prime-power order with cyclic quotient");
    };
    let mut report = report;
    report.check(
        "G has a normal subgroup of prime-power order with cyclic quotient",
        true,
        match prime {
            Some(p) => format!("|G'| = {sub_order} = power of {p}, |G/G'| = {}", g.order() / sub_order),
            None => format!("G' trivial, G cyclic of order {}", g.order()),
        },
    );
    let quotient = quotient_complex(c, g).expect("domain checked");
    let chi = quotient.complex.euler_characteristic();
    report.check(
        "chi of the orbit complex is 1",
        chi == 1,
        format!("chi = {chi}, {} orbits", quotient.orbits.len()),
    );
    let invariant = fixed_set(c, g.generators()).expect("domain checked");
    report.check(
        "some simplex is invariant under all of G",
        !invariant.simplices.is_empty(),
        invariant
            .simplices
            .first()
            .map_or_else(|| "none".to_string(), |s| format!("Q = {s}")),
    );
    let (bar, dict) = barycentric_subdivision(c);
    let bar_g = bar_group(c, g, &dict).expect("automorphisms");
    let bar_fixed = fixed_set(&bar, bar_g.generators()).expect("domain checked");
    let bar_chi = bar_fixed.euler_characteristic();
    report.check(
        "invariant simplices of the subdivision form a subcomplex with chi 1",
        bar_fixed.is_subcomplex && bar_chi == 1,
        format!("subcomplex: {}, chi = {bar_chi}", bar_fixed.is_subcomplex),
    );
    let iso = verify_bar_quotient_iso(c, g).unwrap_or(false);
    report.check(
        "subdivided orbit complex is isomorphic to the invariant part of the subdivision",
        iso,
        format!("orbit complex chi {chi}, invariant subdivision chi {bar_chi}"),
    );
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{cone, standard_complex, StandardKind};
    use crate::fixtures::{hollow_triangle, two_triangles};
    use crate::theorems::Verdict;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn solid() -> Complex {
        standard_complex(StandardKind::Full, 2).unwrap()
    }

    fn perm(text: &str, n: usize) -> Permutation {
        Permutation::parse_cycles(text, Some(n)).unwrap()
    }

    #[test]
    fn rotation_leaves_only_the_triangle_invariant() {
        let found = lefschetz_invariant_simplex(&solid(), &perm("(0 1 2)", 3), p(3)).unwrap();
        assert_eq!(found.simplex, Some(crate::simplex![0, 1, 2]));
        assert!(found.report.passed());
    }

    #[test]
    fn cone_apex_is_invariant() {
        let c = cone(3, &hollow_triangle()).unwrap();
        let found = lefschetz_invariant_simplex(&c, &perm("(0 1 2)", 4), p(2)).unwrap();
        assert_eq!(found.simplex, Some(crate::simplex![3]));
    }

    #[test]
    fn lefschetz_preconditions_are_errors() {
        assert!(lefschetz_invariant_simplex(&hollow_triangle(), &perm("(0 1 2)", 3), p(2)).is_err());
        assert!(lefschetz_invariant_simplex(&two_triangles(), &perm("(0 1)", 4), p(2)).is_err());
    }

    #[test]
    fn euler_examples() {
        let r = euler_fixed_check(&solid(), &perm("(0 1 2)", 3), p(5));
        assert!(r.passed(), "{r:?}");
        let r = euler_fixed_check(&two_triangles(), &Permutation::identity(4), p(2));
        assert!(r.passed());
        let r = euler_fixed_check(&hollow_triangle(), &perm("(0 1 2)", 3), p(2));
        assert!(matches!(r.verdict, Verdict::NotApplicable { .. }));
    }

    #[test]
    fn reflected_edge_has_chi_minus_one() {
        let edge = standard_complex(StandardKind::Full, 1).unwrap();
        let r = euler_fixed_check(&edge, &perm("(0 1)", 2), p(2));
        assert!(r.passed(), "{r:?}");
        assert!(r.checks.iter().any(|c| c.witness.starts_with("chi = -1")));
    }

    #[test]
    fn smith_on_subdivided_rotation() {
        let (bar, dict) = barycentric_subdivision(&solid());
        let g = bar_action(&solid(), &perm("(0 1 2)", 3), &dict).unwrap();
        let r = smith_acyclicity_check(&bar, &g, p(3));
        assert!(r.passed(), "{r:#?}");
        assert_eq!(r.checks.len(), 10);
    }

    #[test]
    fn smith_transposition_goes_through_the_subdivision() {
        let pi2 = solid();
        let r = smith_acyclicity_check(&pi2, &perm("(0 1)", 3), p(2));
        assert!(r.passed(), "{r:#?}");
        assert!(r.checks[0].assertion.contains("subdivision"));
    }

    #[test]
    fn smith_requires_order_p() {
        let r = smith_acyclicity_check(&solid(), &Permutation::identity(3), p(2));
        assert!(matches!(r.verdict, Verdict::NotApplicable { .. }));
    }

    #[test]
    fn oliver_on_rotation_and_cone() {
        let g = PermGroup::cyclic(&perm("(0 1 2)", 3));
        let r = oliver_check(&solid(), &g, None, 10_000);
        assert!(r.passed(), "{r:#?}");
        let c = cone(3, &hollow_triangle()).unwrap();
        let s3 = PermGroup::from_generators(4, &[perm("(0 1 2)", 4), perm("(0 1)", 4)], 100).unwrap();
        let r = oliver_check(&c, &s3, None, 10_000);
        assert!(r.passed(), "{r:#?}");
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power_base(1), Some(None));
        assert_eq!(prime_power_base(8), Some(Some(2)));
        assert_eq!(prime_power_base(9), Some(Some(3)));
        assert_eq!(prime_power_base(6), None);
    }
}
