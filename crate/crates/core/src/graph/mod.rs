//! Graph properties as Boolean functions on edge sets, and the complexes of
//! edge sets on which a monotone property fails.

mod builtin;
mod classes;

pub use builtin::{builtin_property, BUILTIN_NAMES};
pub use classes::GraphClasses;

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::simplex::{Simplex, VertexId};

/// Default seed for randomized checks.
pub const DEFAULT_SEED: u64 = 0xE5A51FE;

/// Largest edge count for which exhaustive scans over all edge sets are run.
pub const EXHAUSTIVE_EDGE_LIMIT: usize = 24;

/// Number of random probes used beyond the exhaustive limit.
pub const RANDOM_PROBES: usize = 1 << 16;

/// Which graphs a property is defined on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UniverseKind {
    /// Graphs on vertices `0..n`.
    Complete { n: u32 },
    /// Bipartite graphs between `Y = 0..left` and `Z = left..left+right`.
    Bipartite { left: u32, right: u32 },
}

/// The list of possible edges, in a fixed order; an edge set is a bitmask over
/// this list.
///
/// Complete universes use colex order `(0,1), (0,2), (1,2), (0,3), ...`.
/// Bipartite universes list the edges at `z = left` first, then `z = left+1`,
/// and so on, with `y` increasing inside each block.
#[derive(Clone, PartialEq, Eq)]
pub struct EdgeUniverse {
    kind: UniverseKind,
    edges: Vec<(VertexId, VertexId)>,
}

impl EdgeUniverse {
    pub fn complete(n: u32) -> Result<Self> {
        let m = (n as usize) * (n as usize).saturating_sub(1) / 2;
        if m > 64 {
            return Err(Error::UniverseTooLarge { edges: m, limit: 64 });
        }
        let edges = (1..n).flat_map(|b| (0..b).map(move |a| (a, b))).collect();
        Ok(Self {
            kind: UniverseKind::Complete { n },
            edges,
        })
    }

    pub fn bipartite(left: u32, right: u32) -> Result<Self> {
        let m = left as usize * right as usize;
        if m > 64 {
            return Err(Error::UniverseTooLarge { edges: m, limit: 64 });
        }
        let edges = (0..right).flat_map(|z| (0..left).map(move |y| (y, left + z))).collect();
        Ok(Self {
            kind: UniverseKind::Bipartite { left, right },
            edges,
        })
    }

    pub fn from_kind(kind: UniverseKind) -> Result<Self> {
        match kind {
            UniverseKind::Complete { n } => Self::complete(n),
            UniverseKind::Bipartite { left, right } => Self::bipartite(left, right),
        }
    }

    pub fn kind(&self) -> UniverseKind {
        self.kind
    }

    pub fn vertex_count(&self) -> u32 {
        match self.kind {
            UniverseKind::Complete { n } => n,
            UniverseKind::Bipartite { left, right } => left + right,
        }
    }

    /// Number of possible edges.
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> (VertexId, VertexId) {
        self.edges[i]
    }

    pub fn edge_index(&self, a: VertexId, b: VertexId) -> Option<usize> {
        let (a, b) = (a.min(b), a.max(b));
        match self.kind {
            UniverseKind::Complete { n } => (a != b && b < n).then(|| (b * (b - 1) / 2 + a) as usize),
            UniverseKind::Bipartite { left, right } => {
                (a < left && b >= left && b < left + right).then(|| ((b - left) * left + a) as usize)
            }
        }
    }

    /// Mask with every edge present.
    pub fn full_mask(&self) -> u64 {
        if self.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.len()) - 1
        }
    }

    pub fn mask_of(&self, edges: &[(VertexId, VertexId)]) -> Result<u64> {
        edges.iter().try_fold(0u64, |acc, &(a, b)| {
            self.edge_index(a, b)
                .map(|i| acc | 1 << i)
                .ok_or_else(|| Error::OutOfRange {
                    what: "edge",
                    detail: format!("({a}, {b}) is not an edge of this universe"),
                })
        })
    }

    pub fn edges_of(&self, mask: u64) -> Vec<(VertexId, VertexId)> {
        (0..self.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| self.edges[i])
            .collect()
    }

    /// The permutation of edge indices induced by a vertex permutation, which
    /// must preserve the universe.
    pub fn edge_permutation(&self, vertices: &Permutation) -> Result<Permutation> {
        let images = self
            .edges
            .iter()
            .map(|&(a, b)| {
                self.edge_index(vertices.apply(a), vertices.apply(b))
                    .map(|i| i as VertexId)
                    .ok_or_else(|| Error::DomainMismatch(format!("{vertices} does not preserve the edge set")))
            })
            .collect::<Result<Vec<_>>>()?;
        Permutation::new(images)
    }

    /// Image of an edge set under an edge permutation.
    pub fn permute_mask(mask: u64, edge_perm: &Permutation) -> u64 {
        let mut out = 0u64;
        let mut rest = mask;
        while rest != 0 {
            let i = rest.trailing_zeros();
            out |= 1 << edge_perm.apply(i);
            rest &= rest - 1;
        }
        out
    }

    /// Vertex permutations generating the symmetry group of the universe:
    /// all of `Sym(n)`, or `Sym(Y) x Sym(Z)` for bipartite universes.
    pub fn symmetry_generators(&self) -> Vec<Permutation> {
        let n = self.vertex_count() as usize;
        let block = |lo: u32, len: u32| -> Vec<Permutation> {
            if len < 2 {
                return Vec::new();
            }
            let swap = Permutation::from_cycles(n, &[vec![lo, lo + 1]]).expect("valid");
            let cycle: Vec<VertexId> = (lo..lo + len).collect();
            let rot = Permutation::from_cycles(n, &[cycle]).expect("valid");
            if len == 2 {
                vec![swap]
            } else {
                vec![swap, rot]
            }
        };
        match self.kind {
            UniverseKind::Complete { n } => block(0, n),
            UniverseKind::Bipartite { left, right } => {
                let mut g = block(0, left);
                g.extend(block(left, right));
                g
            }
        }
    }

    /// Every vertex permutation in the symmetry group.
    pub fn symmetry_elements(&self) -> Vec<Permutation> {
        fn perms(items: &[VertexId]) -> Vec<Vec<VertexId>> {
            if items.len() <= 1 {
                return vec![items.to_vec()];
            }
            let mut out = Vec::new();
            for i in 0..items.len() {
                let mut rest = items.to_vec();
                let x = rest.remove(i);
                for mut tail in perms(&rest) {
                    tail.insert(0, x);
                    out.push(tail);
                }
            }
            out
        }
        match self.kind {
            UniverseKind::Complete { n } => perms(&(0..n).collect::<Vec<_>>())
                .into_iter()
                .map(|v| Permutation::new(v).expect("valid"))
                .collect(),
            UniverseKind::Bipartite { left, right } => {
                let ys = perms(&(0..left).collect::<Vec<_>>());
                let zs = perms(&(left..left + right).collect::<Vec<_>>());
                ys.iter()
                    .flat_map(|y| {
                        zs.iter().map(move |z| {
                            let mut v = y.clone();
                            v.extend(z);
                            Permutation::new(v).expect("valid")
                        })
                    })
                    .collect()
            }
        }
    }
}

impl fmt::Debug for EdgeUniverse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EdgeUniverse({:?}, {} edges)", self.kind, self.len())
    }
}

type Eval = Arc<dyn Fn(u64) -> bool + Send + Sync>;

/// A Boolean function on the edge sets of a universe.
///
/// The claim flags record what the caller asserts; the check functions in this
/// module verify them.
#[derive(Clone)]
pub struct PropertyOracle {
    name: String,
    universe: EdgeUniverse,
    eval: Eval,
    pub claimed_monotone: bool,
    pub claimed_invariant: bool,
}

impl PropertyOracle {
    pub fn new(
        name: impl Into<String>,
        universe: EdgeUniverse,
        claimed_monotone: bool,
        claimed_invariant: bool,
        eval: impl Fn(u64) -> bool + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            universe,
            eval: Arc::new(eval),
            claimed_monotone,
            claimed_invariant,
        }
    }

    /// A property given by the list of edge sets on which it holds.
    pub fn from_truth_table(
        name: impl Into<String>,
        universe: EdgeUniverse,
        ones: &[u64],
        claimed_monotone: bool,
        claimed_invariant: bool,
    ) -> Result<Self> {
        let full = universe.full_mask();
        if let Some(bad) = ones.iter().find(|&&m| m & !full != 0) {
            return Err(Error::OutOfRange {
                what: "edge set",
                detail: format!("{bad:#x} uses edges outside the universe"),
            });
        }
        let set: std::collections::HashSet<u64> = ones.iter().copied().collect();
        Ok(Self::new(
            name,
            universe,
            claimed_monotone,
            claimed_invariant,
            move |m| set.contains(&m),
        ))
    }

    /// A property given by a full table indexed by edge set.
    pub fn from_table(
        name: impl Into<String>,
        universe: EdgeUniverse,
        table: Vec<bool>,
        claimed_monotone: bool,
        claimed_invariant: bool,
    ) -> Self {
        assert_eq!(table.len() as u64, universe.full_mask() + 1, "table size");
        Self::new(name, universe, claimed_monotone, claimed_invariant, move |m| {
            table[m as usize]
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn universe(&self) -> &EdgeUniverse {
        &self.universe
    }

    /// Number of edge variables.
    pub fn edge_count(&self) -> usize {
        self.universe.len()
    }

    pub fn eval(&self, mask: u64) -> bool {
        (self.eval)(mask)
    }

    /// Values on every edge set, indexed by mask.
    pub fn tabulate(&self) -> Result<Vec<bool>> {
        self.require_exhaustive()?;
        Ok((0..=self.universe.full_mask()).map(|m| self.eval(m)).collect())
    }

    fn require_exhaustive(&self) -> Result<()> {
        if self.edge_count() > EXHAUSTIVE_EDGE_LIMIT {
            return Err(Error::UniverseTooLarge {
                edges: self.edge_count(),
                limit: EXHAUSTIVE_EDGE_LIMIT,
            });
        }
        Ok(())
    }
}

impl fmt::Debug for PropertyOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PropertyOracle")
            .field("name", &self.name)
            .field("universe", &self.universe)
            .field("claimed_monotone", &self.claimed_monotone)
            .field("claimed_invariant", &self.claimed_invariant)
            .finish()
    }
}

/// Truth-table input format: `{"n": 4, "ones": [...]}` for graphs on `n`
/// vertices or `{"left": 2, "right": 3, "ones": [...]}` for bipartite graphs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruthTable {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right: Option<u32>,
    pub ones: Vec<u64>,
    #[serde(default)]
    pub monotone: bool,
    #[serde(default)]
    pub invariant: bool,
}

impl TruthTable {
    pub fn into_oracle(self, name: impl Into<String>) -> Result<PropertyOracle> {
        let universe = match (self.n, self.left, self.right) {
            (Some(n), None, None) => EdgeUniverse::complete(n)?,
            (None, Some(l), Some(r)) => EdgeUniverse::bipartite(l, r)?,
            _ => {
                return Err(Error::Parse(
                    "truth table needs either `n` or both `left` and `right`".into(),
                ))
            }
        };
        PropertyOracle::from_truth_table(name, universe, &self.ones, self.monotone, self.invariant)
    }
}

fn masks_to_probe(m: usize, seed: u64) -> Box<dyn Iterator<Item = u64>> {
    if m <= EXHAUSTIVE_EDGE_LIMIT {
        Box::new(0..1u64 << m)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let full = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
        Box::new((0..RANDOM_PROBES).map(move |_| rng.gen::<u64>() & full))
    }
}

/// Outcome of a monotonicity check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MonotoneCheck {
    Monotone,
    Counterexample { smaller: u64, larger: u64 },
}

/// Looks for `G < G + e` with `h(G) = 1` and `h(G + e) = 0`; exhaustive up to
/// [`EXHAUSTIVE_EDGE_LIMIT`] edges, randomized beyond.
pub fn check_monotone(h: &PropertyOracle, seed: u64) -> MonotoneCheck {
    let m = h.edge_count();
    for mask in masks_to_probe(m, seed) {
        if !h.eval(mask) {
            continue;
        }
        for e in 0..m {
            let larger = mask | 1 << e;
            if larger != mask && !h.eval(larger) {
                return MonotoneCheck::Counterexample { smaller: mask, larger };
            }
        }
    }
    MonotoneCheck::Monotone
}

/// Outcome of an invariance check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InvarianceCheck {
    Invariant,
    Counterexample { mask: u64, image: u64 },
}

/// Compares `h` with `h` composed with each generator of the universe's
/// symmetry group; agreement on generators gives agreement on the whole group.
pub fn check_invariant(h: &PropertyOracle, seed: u64) -> Result<InvarianceCheck> {
    let edge_perms = h
        .universe()
        .symmetry_generators()
        .iter()
        .map(|g| h.universe().edge_permutation(g))
        .collect::<Result<Vec<_>>>()?;
    for mask in masks_to_probe(h.edge_count(), seed) {
        let value = h.eval(mask);
        for p in &edge_perms {
            let image = EdgeUniverse::permute_mask(mask, p);
            if h.eval(image) != value {
                return Ok(InvarianceCheck::Counterexample { mask, image });
            }
        }
    }
    Ok(InvarianceCheck::Invariant)
}

/// True when `h` is constant on all edge sets.
pub fn is_trivial(h: &PropertyOracle) -> Result<bool> {
    h.require_exhaustive()?;
    let first = h.eval(0);
    Ok((1..=h.universe().full_mask()).all(|m| h.eval(m) == first))
}

fn simplex_of_mask(mask: u64) -> Simplex {
    Simplex::new((0..64).filter(|i| mask >> i & 1 == 1)).expect("nonempty mask")
}

/// The complex whose simplices are the nonempty edge sets on which `h` fails;
/// vertex `i` stands for edge `i` of the universe.
pub fn delta_of_property(h: &PropertyOracle) -> Result<Complex> {
    h.require_exhaustive()?;
    if let MonotoneCheck::Counterexample { smaller, larger } = check_monotone(h, DEFAULT_SEED) {
        return Err(Error::NotMonotone { smaller, larger });
    }
    let simplices: Vec<Simplex> = (1..=h.universe().full_mask())
        .filter(|&m| !h.eval(m))
        .map(simplex_of_mask)
        .collect();
    Complex::from_simplices(simplices)
}

/// [`delta_of_property`] for a property of bipartite graphs.
pub fn bipartite_delta(f: &PropertyOracle) -> Result<Complex> {
    if !matches!(f.universe().kind(), UniverseKind::Bipartite { .. }) {
        return Err(Error::Precondition("expected a bipartite universe".into()));
    }
    delta_of_property(f)
}

/// Coefficients `c_j` = number of edge sets of size `j` on which `h` holds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightEnumerator(pub Vec<u64>);

pub fn weight_enumerator(h: &PropertyOracle) -> Result<WeightEnumerator> {
    h.require_exhaustive()?;
    let mut coeffs = vec![0u64; h.edge_count() + 1];
    for m in 0..=h.universe().full_mask() {
        if h.eval(m) {
            coeffs[m.count_ones() as usize] += 1;
        }
    }
    Ok(WeightEnumerator(coeffs))
}

impl WeightEnumerator {
    /// Value at `t = -1`.
    pub fn at_minus_one(&self) -> i128 {
        self.0
            .iter()
            .enumerate()
            .map(|(j, &c)| if j % 2 == 0 { c as i128 } else { -(c as i128) })
            .sum()
    }

    /// True when `(1 + t)^k` divides the polynomial over the integers.
    pub fn divisible_by_one_plus_t_pow(&self, k: usize) -> bool {
        let mut poly: Vec<i128> = self.0.iter().map(|&c| c as i128).collect();
        for _ in 0..k {
            if poly.iter().all(|&c| c == 0) {
                return true;
            }
            // synthetic division by (t + 1)
            let mut quotient = vec![0i128; poly.len().saturating_sub(1)];
            let mut carry = 0i128;
            for j in (1..poly.len()).rev() {
                carry = poly[j] - carry;
                quotient[j - 1] = carry;
            }
            if poly[0] - carry != 0 {
                return false;
            }
            poly = quotient;
        }
        true
    }
}

/// Checks `(1 + t)^k | w`, as forced when the decision-tree complexity is at
/// most `m - k`.
pub fn rv_divisibility_check(w: &WeightEnumerator, k: usize) -> bool {
    w.divisible_by_one_plus_t_pow(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn colex_edge_order() {
        let u = EdgeUniverse::complete(4).unwrap();
        assert_eq!(u.edges()[..4], [(0, 1), (0, 2), (1, 2), (0, 3)]);
        assert_eq!(u.edge_index(3, 2), Some(5));
        assert_eq!(u.edge_index(1, 1), None);
        assert!(EdgeUniverse::complete(12).is_err());
    }

    #[test]
    fn bipartite_edge_order() {
        let u = EdgeUniverse::bipartite(2, 3).unwrap();
        assert_eq!(u.edges(), &[(0, 2), (1, 2), (0, 3), (1, 3), (0, 4), (1, 4)]);
        assert_eq!(u.edge_index(1, 3), Some(3));
        assert_eq!(u.edge_index(0, 1), None);
    }

    #[test]
    fn weight_enumerator_division() {
        // t (1 + t)^2 = t + 2t^2 + t^3
        let w = WeightEnumerator(vec![0, 1, 2, 1]);
        assert!(rv_divisibility_check(&w, 2));
        assert!(!rv_divisibility_check(&w, 3));
        assert_eq!(w.at_minus_one(), 0);
        assert!(!WeightEnumerator(vec![1, 1, 1]).divisible_by_one_plus_t_pow(1));
        assert!(WeightEnumerator(vec![0, 0]).divisible_by_one_plus_t_pow(5));
    }

    #[test]
    fn monotone_and_invariance_counterexamples() {
        let u = EdgeUniverse::complete(3).unwrap();
        let exactly_one = PropertyOracle::new("one edge", u.clone(), false, true, |m| m.count_ones() == 1);
        assert!(matches!(
            check_monotone(&exactly_one, DEFAULT_SEED),
            MonotoneCheck::Counterexample { .. }
        ));
        assert!(delta_of_property(&exactly_one).is_err());
        let first_edge = PropertyOracle::new("edge 01", u, true, false, |m| m & 1 == 1);
        assert_eq!(check_monotone(&first_edge, DEFAULT_SEED), MonotoneCheck::Monotone);
        assert!(matches!(
            check_invariant(&first_edge, DEFAULT_SEED).unwrap(),
            InvarianceCheck::Counterexample { .. }
        ));
    }

    #[test]
    fn delta_of_single_edge_indicator() {
        let u = EdgeUniverse::complete(3).unwrap();
        let h = PropertyOracle::new("edge 01", u, true, false, |m| m & 1 == 1);
        let delta = delta_of_property(&h).unwrap();
        assert_eq!(delta.facets(), &[crate::simplex![1, 2]]);
    }

    #[test]
    fn truth_table_roundtrip() {
        let t: TruthTable = serde_json::from_str(r#"{"n":3,"ones":[7]}"#).unwrap();
        let h = t.into_oracle("complete").unwrap();
        assert!(h.eval(7) && !h.eval(3));
        let bad: TruthTable = serde_json::from_str(r#"{"n":3,"ones":[8]}"#).unwrap();
        assert!(bad.into_oracle("x").is_err());
    }

    proptest! {
        #[test]
        fn weight_enumerator_counts_all_ones(table in prop::collection::vec(any::<bool>(), 8)) {
            let u = EdgeUniverse::complete(3).unwrap();
            let ones = table.iter().filter(|&&b| b).count() as u64;
            let h = PropertyOracle::from_table("t", u, table, false, false);
            let w = weight_enumerator(&h).unwrap();
            prop_assert_eq!(w.0.iter().sum::<u64>(), ones);
        }

        #[test]
        fn edge_permutations_preserve_size(mask in 0u64..64, k in 0usize..720) {
            let u = EdgeUniverse::complete(4).unwrap();
            let elems = u.symmetry_elements();
            let p = u.edge_permutation(&elems[k % elems.len()]).unwrap();
            prop_assert_eq!(EdgeUniverse::permute_mask(mask, &p).count_ones(), mask.count_ones());
        }
    }
}
