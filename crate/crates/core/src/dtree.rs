//! Exact decision-tree complexity, optimal trees, padding to uniform depth, and
//! the collapse sequence read off a padded tree.

use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::collapse::{replay, CollapseSequence, CollapseStep};
use crate::error::{Error, Result};
use crate::graph::{delta_of_property, EdgeUniverse, PropertyOracle};
use crate::simplex::Simplex;

/// Largest edge count handled by the exact solver (a table of `3^m` bytes).
pub const EXACT_EDGE_LIMIT: usize = 15;

const MIXED: u8 = 0;
const CONST_FALSE: u8 = 1;
const CONST_TRUE: u8 = 2;

fn pack(kind: u8, depth: u8) -> u8 {
    kind | depth << 2
}

fn kind(entry: u8) -> u8 {
    entry & 3
}

fn depth(entry: u8) -> u8 {
    entry >> 2
}

/// Minimax table over partial assignments of the edge variables.
///
/// State `s = sum_i d_i 3^i` with `d_i = 0` (unknown), `1` (present) or
/// `2` (absent).
pub struct DtcSolver {
    edges: usize,
    pow3: Vec<usize>,
    table: Vec<u8>,
}

impl DtcSolver {
    pub fn new(h: &PropertyOracle) -> Result<Self> {
        let m = h.edge_count();
        if m > EXACT_EDGE_LIMIT {
            return Err(Error::UniverseTooLarge {
                edges: m,
                limit: EXACT_EDGE_LIMIT,
            });
        }
        let pow3: Vec<usize> = (0..=m).map(|i| 3usize.pow(i as u32)).collect();
        let total = pow3[m];
        let mut table = vec![0u8; total];
        let mut digits = vec![0u8; m];
        for s in (0..total).rev() {
            let mut x = s;
            for d in digits.iter_mut() {
                *d = (x % 3) as u8;
                x /= 3;
            }
            let Some(first) = digits.iter().position(|&d| d == 0) else {
                let mask = digits
                    .iter()
                    .enumerate()
                    .filter(|(_, &d)| d == 1)
                    .fold(0u64, |acc, (i, _)| acc | 1 << i);
                table[s] = pack(if h.eval(mask) { CONST_TRUE } else { CONST_FALSE }, 0);
                continue;
            };
            let a = table[s + pow3[first]];
            let b = table[s + 2 * pow3[first]];
            if kind(a) != MIXED && kind(a) == kind(b) {
                table[s] = pack(kind(a), 0);
                continue;
            }
            let best = (0..m)
                .filter(|&j| digits[j] == 0)
                .map(|j| depth(table[s + pow3[j]]).max(depth(table[s + 2 * pow3[j]])))
                .min()
                .expect("an unknown edge exists");
            table[s] = pack(MIXED, best + 1);
        }
        Ok(Self { edges: m, pow3, table })
    }

    /// Decision-tree complexity of the property.
    pub fn complexity(&self) -> usize {
        depth(self.table[0]) as usize
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    /// An optimal tree; ties go to the lowest edge index.
    pub fn extract_tree(&self) -> DecisionTree {
        self.subtree(0)
    }

    fn subtree(&self, s: usize) -> DecisionTree {
        let entry = self.table[s];
        match kind(entry) {
            CONST_FALSE => return DecisionTree::Leaf(false),
            CONST_TRUE => return DecisionTree::Leaf(true),
            _ => {}
        }
        let target = depth(entry) - 1;
        let edge = (0..self.edges)
            .find(|&j| {
                (s / self.pow3[j]) % 3 == 0
                    && depth(self.table[s + self.pow3[j]]).max(depth(self.table[s + 2 * self.pow3[j]])) == target
            })
            .expect("the optimum is attained");
        DecisionTree::Query {
            edge,
            present: Box::new(self.subtree(s + self.pow3[edge])),
            absent: Box::new(self.subtree(s + 2 * self.pow3[edge])),
        }
    }
}

/// Decision-tree complexity of `h`.
pub fn dtc(h: &PropertyOracle) -> Result<usize> {
    Ok(DtcSolver::new(h)?.complexity())
}

/// An optimal decision tree for `h`.
pub fn extract_tree(h: &PropertyOracle) -> Result<DecisionTree> {
    Ok(DtcSolver::new(h)?.extract_tree())
}

/// A binary tree querying edges; the `present` branch is taken when the
/// queried edge is in the graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecisionTree {
    Leaf(bool),
    Query {
        edge: usize,
        present: Box<DecisionTree>,
        absent: Box<DecisionTree>,
    },
}

/// A root-to-leaf path: edges answered present, edges answered absent, and the
/// leaf value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeafPath {
    pub present: u64,
    pub absent: u64,
    pub value: bool,
}

impl DecisionTree {
    pub fn depth(&self) -> usize {
        match self {
            DecisionTree::Leaf(_) => 0,
            DecisionTree::Query { present, absent, .. } => 1 + present.depth().max(absent.depth()),
        }
    }

    pub fn evaluate(&self, mask: u64) -> bool {
        match self {
            DecisionTree::Leaf(v) => *v,
            DecisionTree::Query { edge, present, absent } => {
                if mask >> edge & 1 == 1 {
                    present.evaluate(mask)
                } else {
                    absent.evaluate(mask)
                }
            }
        }
    }

    /// Leaves in order, `present` branches before `absent` ones.
    pub fn leaves(&self) -> Vec<LeafPath> {
        fn walk(t: &DecisionTree, present: u64, absent: u64, out: &mut Vec<LeafPath>) {
            match t {
                DecisionTree::Leaf(v) => out.push(LeafPath {
                    present,
                    absent,
                    value: *v,
                }),
                DecisionTree::Query {
                    edge,
                    present: yes,
                    absent: no,
                } => {
                    walk(yes, present | 1 << edge, absent, out);
                    walk(no, present, absent | 1 << edge, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, 0, 0, &mut out);
        out
    }

    /// True when the tree agrees with `h` on every edge set.
    pub fn computes(&self, h: &PropertyOracle) -> bool {
        (0..=h.universe().full_mask()).all(|m| self.evaluate(m) == h.eval(m))
    }

    /// Graphviz rendering; leaves are boxes, branches are labelled Y and N.
    pub fn to_dot(&self, universe: &EdgeUniverse) -> String {
        let mut out = String::from("digraph decision_tree {\n  node [fontname=\"monospace\"];\n");
        let mut next = 0usize;
        fn emit(t: &DecisionTree, u: &EdgeUniverse, next: &mut usize, out: &mut String) -> usize {
            let id = *next;
            *next += 1;
            match t {
                DecisionTree::Leaf(v) => {
                    let _ = writeln!(out, "  n{id} [shape=box, label=\"{}\"];", u8::from(*v));
                }
                DecisionTree::Query { edge, present, absent } => {
                    let (a, b) = u.edge(*edge);
                    let _ = writeln!(out, "  n{id} [shape=ellipse, label=\"{{{a},{b}}}?\"];");
                    let y = emit(present, u, next, out);
                    let n = emit(absent, u, next, out);
                    let _ = writeln!(out, "  n{id} -> n{y} [label=\"Y\"];");
                    let _ = writeln!(out, "  n{id} -> n{n} [label=\"N\"];");
                }
            }
            id
        }
        emit(self, universe, &mut next, &mut out);
        out.push_str("}\n");
        out
    }

    /// JSON with explicit node ids, numbered in preorder:
    /// `{"root": 0, "nodes": [{"id": 0, "edge": 3, "endpoints": [0, 3], "yes": 1, "no": 4}, {"id": 1, "leaf": true}, ...]}`.
    pub fn to_json(&self, universe: &EdgeUniverse) -> Value {
        let mut nodes = Vec::new();
        fn emit(t: &DecisionTree, u: &EdgeUniverse, nodes: &mut Vec<Value>) -> usize {
            let id = nodes.len();
            nodes.push(Value::Null);
            nodes[id] = match t {
                DecisionTree::Leaf(v) => json!({ "id": id, "leaf": v }),
                DecisionTree::Query { edge, present, absent } => {
                    let y = emit(present, u, nodes);
                    let n = emit(absent, u, nodes);
                    let (a, b) = u.edge(*edge);
                    json!({ "id": id, "edge": edge, "endpoints": [a, b], "yes": y, "no": n })
                }
            };
            id
        }
        emit(self, universe, &mut nodes);
        json!({ "root": 0, "nodes": nodes })
    }
}

/// Pads every root-to-leaf path to exactly `m - 1` queries.
///
/// A leaf reached after `d < m - 1` queries is replaced by a query of the
/// lowest-index edge not yet asked, with the same leaf on both sides,
/// repeatedly. Fails if some path is longer than `m - 1` or repeats an edge.
pub fn normalize_tree(t: &DecisionTree, m: usize) -> Result<DecisionTree> {
    if m == 0 {
        return Err(Error::CannotNormalize("no edges to query".into()));
    }
    fn go(t: &DecisionTree, m: usize, asked: u64, d: usize) -> Result<DecisionTree> {
        match t {
            DecisionTree::Leaf(v) => {
                if d == m - 1 {
                    return Ok(DecisionTree::Leaf(*v));
                }
                let edge = (0..m).find(|e| asked >> e & 1 == 0).expect("fewer than m asked");
                let child = go(t, m, asked | 1 << edge, d + 1)?;
                Ok(DecisionTree::Query {
                    edge,
                    present: Box::new(child.clone()),
                    absent: Box::new(child),
                })
            }
            DecisionTree::Query { edge, present, absent } => {
                if *edge >= m || asked >> edge & 1 == 1 {
                    return Err(Error::CannotNormalize(format!(
                        "edge {edge} queried twice or out of range"
                    )));
                }
                if d >= m - 1 {
                    return Err(Error::CannotNormalize(format!(
                        "a path is longer than {} queries",
                        m - 1
                    )));
                }
                Ok(DecisionTree::Query {
                    edge: *edge,
                    present: Box::new(go(present, m, asked | 1 << edge, d + 1)?),
                    absent: Box::new(go(absent, m, asked | 1 << edge, d + 1)?),
                })
            }
        }
    }
    go(t, m, 0, 0)
}

fn simplex_of_mask(mask: u64) -> Simplex {
    Simplex::new((0..64).filter(|i| mask >> i & 1 == 1)).expect("nonempty mask")
}

/// Reads a collapse of the failure complex of `h` off a padded tree for `h`.
///
/// Each leaf of a padded tree is reached by exactly two edge sets, which differ
/// in the one edge its path leaves unasked. Leaves with value 0 are visited in
/// order (present before absent); each contributes the collapse of the smaller
/// set into the larger, except the leaf holding the empty graph, whose other
/// set is the single vertex that remains.
pub fn collapse_from_tree(h: &PropertyOracle, t: &DecisionTree) -> Result<CollapseSequence> {
    let m = h.edge_count();
    let full = h.universe().full_mask();
    let delta = delta_of_property(h)?;
    let mut steps = Vec::new();
    for leaf in t.leaves() {
        let asked = leaf.present | leaf.absent;
        if asked.count_ones() as usize != m - 1 || leaf.present & leaf.absent != 0 {
            return Err(Error::Precondition("tree is not padded to depth m - 1".into()));
        }
        let free = (full & !asked).trailing_zeros();
        let low = leaf.present;
        let high = low | 1 << free;
        if h.eval(low) != leaf.value || h.eval(high) != leaf.value {
            return Err(Error::Precondition(format!(
                "tree does not compute {} at edge sets {low:#x} and {high:#x}",
                h.name()
            )));
        }
        if leaf.value || low == 0 {
            continue;
        }
        steps.push(CollapseStep::primitive(simplex_of_mask(low), simplex_of_mask(high)));
    }
    let terminal = replay(&delta, &steps)?;
    Ok(CollapseSequence { steps, terminal })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collapse::verify_sequence;
    use crate::graph::builtin_property;

    fn u(n: u32) -> EdgeUniverse {
        EdgeUniverse::complete(n).unwrap()
    }

    /// Brute-force minimax without memoisation.
    fn naive(h: &PropertyOracle, present: u64, absent: u64) -> usize {
        let m = h.edge_count();
        let free: Vec<usize> = (0..m).filter(|e| (present | absent) >> e & 1 == 0).collect();
        let values: Vec<bool> = (0u64..1 << free.len())
            .map(|bits| {
                let extra = free
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| bits >> i & 1 == 1)
                    .fold(0u64, |acc, (_, &e)| acc | 1 << e);
                h.eval(present | extra)
            })
            .collect();
        if values.iter().all(|&v| v == values[0]) {
            return 0;
        }
        1 + free
            .iter()
            .map(|&e| naive(h, present | 1 << e, absent).max(naive(h, present, absent | 1 << e)))
            .min()
            .unwrap()
    }

    #[test]
    fn solver_agrees_with_naive_minimax() {
        let cases = [
            builtin_property("connected", u(4), None).unwrap(),
            builtin_property("vertex_incident", u(4), Some(2)).unwrap(),
            builtin_property("has_edge", u(3), Some(1)).unwrap(),
            PropertyOracle::new("parity-ish", u(4), false, false, |m| {
                m & 0b11 == 0b11 || m >> 5 & 1 == 1
            }),
        ];
        for h in &cases {
            assert_eq!(dtc(h).unwrap(), naive(h, 0, 0), "{}", h.name());
        }
    }

    #[test]
    fn equality_with_a_fixed_graph_is_evasive() {
        // the graph with the single edge {0, 2}
        let h = builtin_property("equals_graph", u(3), Some(0b010)).unwrap();
        assert_eq!(dtc(&h).unwrap(), 3);
    }

    #[test]
    fn extracted_tree_is_optimal_and_correct() {
        let h = builtin_property("vertex_incident", u(4), Some(2)).unwrap();
        let solver = DtcSolver::new(&h).unwrap();
        let t = solver.extract_tree();
        assert_eq!(t.depth(), solver.complexity());
        assert!(t.computes(&h));
        let DecisionTree::Query { edge, .. } = &t else {
            panic!("nonconstant");
        };
        assert_eq!(*edge, 1);
    }

    #[test]
    fn normalization_and_collapse() {
        let h = builtin_property("vertex_incident", u(4), Some(2)).unwrap();
        let t = extract_tree(&h).unwrap();
        let padded = normalize_tree(&t, 6).unwrap();
        assert!(padded.leaves().iter().all(|l| (l.present | l.absent).count_ones() == 5));
        assert!(padded.computes(&h));
        let seq = collapse_from_tree(&h, &padded).unwrap();
        assert!(seq.reaches_point());
        assert!(verify_sequence(&delta_of_property(&h).unwrap(), &seq));
    }

    #[test]
    fn normalization_refuses_full_depth() {
        let h = builtin_property("equals_graph", u(3), Some(0b010)).unwrap();
        let t = extract_tree(&h).unwrap();
        assert!(matches!(normalize_tree(&t, 3), Err(Error::CannotNormalize(_))));
    }

    #[test]
    fn refuses_large_universes() {
        let h = builtin_property("connected", u(7), None).unwrap();
        assert!(matches!(dtc(&h), Err(Error::UniverseTooLarge { .. })));
    }

    #[test]
    fn exports() {
        let h = builtin_property("has_edge", u(3), Some(0)).unwrap();
        let t = extract_tree(&h).unwrap();
        let dot = t.to_dot(h.universe());
        assert!(dot.contains("{0,1}?") && dot.contains("label=\"Y\""));
        let j = t.to_json(h.universe());
        assert_eq!(j["nodes"][0]["yes"], 1);
        assert_eq!(j["nodes"][1]["leaf"], true);
        assert_eq!(j["nodes"][2]["leaf"], false);
    }
}
