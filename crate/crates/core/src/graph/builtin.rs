use super::{EdgeUniverse, PropertyOracle, UniverseKind};
use crate::error::{Error, Result};
use crate::simplex::VertexId;

/// Names accepted by [`builtin_property`].
pub const BUILTIN_NAMES: &[&str] = &[
    "contains_cycle",
    "connected",
    "min_edges",
    "contains_clique",
    "vertex_incident",
    "has_edge",
    "equals_graph",
    "bipartite_threshold",
];

fn components(n: u32, edges: impl Iterator<Item = (VertexId, VertexId)>) -> u32 {
    let mut parent: Vec<u32> = (0..n).collect();
    fn find(parent: &mut [u32], x: u32) -> u32 {
        let mut r = x;
        while parent[r as usize] != r {
            r = parent[r as usize];
        }
        let mut y = x;
        while parent[y as usize] != r {
            let next = parent[y as usize];
            parent[y as usize] = r;
            y = next;
        }
        r
    }
    let mut count = n;
    for (a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra as usize] = rb;
            count -= 1;
        }
    }
    count
}

fn edge_iter(u: &EdgeUniverse, mask: u64) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
    (0..u.len()).filter(move |i| mask >> i & 1 == 1).map(|i| u.edge(i))
}

fn need(param: Option<u64>, name: &str) -> Result<u64> {
    param.ok_or_else(|| Error::Parse(format!("property `{name}` needs a parameter")))
}

/// A named property on the given universe.
///
/// | name | parameter | holds when |
/// |---|---|---|
/// | `contains_cycle` | | some cycle exists |
/// | `connected` | | the graph is connected |
/// | `min_edges` | `k` | at least `k` edges |
/// | `contains_clique` | `r` | some `r` vertices are pairwise adjacent |
/// | `vertex_incident` | `v` (default 2) | vertex `v` has an edge |
/// | `has_edge` | edge index `i` | edge `i` is present |
/// | `equals_graph` | mask | the edge set equals the mask |
/// | `bipartite_threshold` | `k` | at least `k` vertices of `Z` see all of `Y` |
pub fn builtin_property(name: &str, universe: EdgeUniverse, param: Option<u64>) -> Result<PropertyOracle> {
    let n = universe.vertex_count();
    let u = universe.clone();
    let label = match param {
        Some(k) => format!("{name}({k})"),
        None => name.to_string(),
    };
    let oracle = match name {
        "contains_cycle" => PropertyOracle::new(label, universe, true, true, move |m| {
            m.count_ones() + components(n, edge_iter(&u, m)) > n
        }),
        "connected" => PropertyOracle::new(label, universe, true, true, move |m| {
            components(n, edge_iter(&u, m)) <= 1
        }),
        "min_edges" => {
            let k = need(param, name)? as u32;
            PropertyOracle::new(label, universe, true, true, move |m| m.count_ones() >= k)
        }
        "contains_clique" => {
            let r = need(param, name)? as u32;
            if n > 16 {
                return Err(Error::UniverseTooLarge {
                    edges: universe.len(),
                    limit: 120,
                });
            }
            PropertyOracle::new(label, universe, true, true, move |m| {
                (0u32..1 << n).filter(|s| s.count_ones() == r).any(|s| {
                    let vs: Vec<u32> = (0..n).filter(|v| s >> v & 1 == 1).collect();
                    vs.iter().enumerate().all(|(i, &a)| {
                        vs[i + 1..]
                            .iter()
                            .all(|&b| u.edge_index(a, b).is_some_and(|e| m >> e & 1 == 1))
                    })
                })
            })
        }
        "vertex_incident" => {
            let v = param.unwrap_or(2) as u32;
            if v >= n {
                return Err(Error::OutOfRange {
                    what: "vertex",
                    detail: format!("{v} with {n} vertices"),
                });
            }
            let incident: u64 = (0..u.len())
                .filter(|&i| {
                    let (a, b) = u.edge(i);
                    a == v || b == v
                })
                .fold(0, |acc, i| acc | 1 << i);
            PropertyOracle::new(label, universe, true, false, move |m| m & incident != 0)
        }
        "has_edge" => {
            let i = need(param, name)?;
            if i as usize >= universe.len() {
                return Err(Error::OutOfRange {
                    what: "edge index",
                    detail: format!("{i} with {} edges", universe.len()),
                });
            }
            PropertyOracle::new(label, universe, true, false, move |m| m >> i & 1 == 1)
        }
        "equals_graph" => {
            let target = need(param, name)?;
            if target & !universe.full_mask() != 0 {
                return Err(Error::OutOfRange {
                    what: "edge set",
                    detail: format!("{target:#x}"),
                });
            }
            PropertyOracle::new(label, universe, false, false, move |m| m == target)
        }
        "bipartite_threshold" => {
            let UniverseKind::Bipartite { left, right } = universe.kind() else {
                return Err(Error::Precondition(
                    "`bipartite_threshold` needs a bipartite universe".into(),
                ));
            };
            let k = need(param, name)? as u32;
            let block = (1u64 << left) - 1;
            PropertyOracle::new(label, universe, true, true, move |m| {
                (0..right).filter(|z| (m >> (z * left)) & block == block).count() as u32 >= k
            })
        }
        other => return Err(Error::UnknownProperty(other.to_string())),
    };
    Ok(oracle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{check_invariant, check_monotone, is_trivial, InvarianceCheck, MonotoneCheck, DEFAULT_SEED};

    #[test]
    fn claims_hold_for_builtins() {
        let u4 = EdgeUniverse::complete(4).unwrap();
        let bip = EdgeUniverse::bipartite(2, 3).unwrap();
        let cases = [
            builtin_property("contains_cycle", u4.clone(), None).unwrap(),
            builtin_property("connected", u4.clone(), None).unwrap(),
            builtin_property("min_edges", u4.clone(), Some(3)).unwrap(),
            builtin_property("contains_clique", u4.clone(), Some(3)).unwrap(),
            builtin_property("vertex_incident", u4.clone(), None).unwrap(),
            builtin_property("has_edge", u4, Some(4)).unwrap(),
            builtin_property("bipartite_threshold", bip, Some(2)).unwrap(),
        ];
        for h in &cases {
            if h.claimed_monotone {
                assert_eq!(check_monotone(h, DEFAULT_SEED), MonotoneCheck::Monotone, "{}", h.name());
            }
            if h.claimed_invariant {
                assert_eq!(
                    check_invariant(h, DEFAULT_SEED).unwrap(),
                    InvarianceCheck::Invariant,
                    "{}",
                    h.name()
                );
            }
            assert!(!is_trivial(h).unwrap());
        }
    }

    #[test]
    fn values_on_small_graphs() {
        let u = EdgeUniverse::complete(4).unwrap();
        let path = u.mask_of(&[(0, 1), (1, 2), (2, 3)]).unwrap();
        let triangle = u.mask_of(&[(0, 1), (1, 2), (0, 2)]).unwrap();
        let conn = builtin_property("connected", u.clone(), None).unwrap();
        let cyc = builtin_property("contains_cycle", u.clone(), None).unwrap();
        let k3 = builtin_property("contains_clique", u.clone(), Some(3)).unwrap();
        assert!(conn.eval(path) && !cyc.eval(path) && !k3.eval(path));
        assert!(!conn.eval(triangle) && cyc.eval(triangle) && k3.eval(triangle));
        assert!(builtin_property("nope", u.clone(), None).is_err());
        assert!(builtin_property("min_edges", u, None).is_err());
    }
}
