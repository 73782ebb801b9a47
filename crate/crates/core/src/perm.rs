use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simplex::{Simplex, VertexId};

/// Default cap on the number of elements produced by group closure.
pub const DEFAULT_GROUP_CAP: usize = 100_000;

/// A permutation of `{0, ..., n-1}`, stored as its image list. Points at or
/// beyond `n` are treated as fixed by [`Permutation::apply`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<VertexId>", into = "Vec<VertexId>")]
pub struct Permutation(Vec<VertexId>);

impl Permutation {
    pub fn new(images: Vec<VertexId>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x as usize >= n || std::mem::replace(&mut seen[x as usize], true) {
                return Err(Error::NotAPermutation(format!("{images:?}")));
            }
        }
        Ok(Self(images))
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n as VertexId).collect())
    }

    /// Builds a permutation of `{0..n-1}` from disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[Vec<VertexId>]) -> Result<Self> {
        let mut images: Vec<VertexId> = (0..n as VertexId).collect();
        let mut used = vec![false; n];
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                if x as usize >= n {
                    return Err(Error::DomainMismatch(format!("point {x} outside a domain of size {n}")));
                }
                if std::mem::replace(&mut used[x as usize], true) {
                    return Err(Error::NotAPermutation(format!("point {x} repeated in cycles")));
                }
                images[x as usize] = cycle[(i + 1) % cycle.len()];
            }
        }
        Ok(Self(images))
    }

    /// Parses cycle notation such as `(0 2)(1 3)`; `()` is the identity. The
    /// domain is `{0..n-1}` with `n` at least one past the largest point named.
    pub fn parse_cycles(text: &str, n: Option<usize>) -> Result<Self> {
        let text = text.trim();
        let mut cycles = Vec::new();
        let mut rest = text;
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::Parse(format!("expected `(` in `{text}`")))?;
            let close = body
                .find(')')
                .ok_or_else(|| Error::Parse(format!("unclosed cycle in `{text}`")))?;
            let cycle = body[..close]
                .split(|ch: char| ch == ',' || ch.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<VertexId>()
                        .map_err(|_| Error::Parse(format!("bad point `{t}` in `{text}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            if !cycle.is_empty() {
                cycles.push(cycle);
            }
            rest = body[close + 1..].trim_start();
        }
        let needed = cycles.iter().flatten().map(|&x| x as usize + 1).max().unwrap_or(0);
        let n = n.unwrap_or(needed);
        if needed > n {
            return Err(Error::DomainMismatch(format!(
                "`{text}` names points outside a domain of size {n}"
            )));
        }
        Self::from_cycles(n, &cycles)
    }

    /// Parses either cycle notation or a JSON image array.
    pub fn parse(text: &str, n: Option<usize>) -> Result<Self> {
        let t = text.trim();
        let p = if t.starts_with('[') {
            let p: Permutation = serde_json::from_str(t)?;
            match n {
                Some(n) if n > p.degree() => p.extended(n),
                Some(n) if n < p.degree() => {
                    return Err(Error::DomainMismatch(format!(
                        "permutation of degree {} on a domain of size {n}",
                        p.degree()
                    )))
                }
                _ => p,
            }
        } else {
            Self::parse_cycles(t, n)?
        };
        Ok(p)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[VertexId] {
        &self.0
    }

    pub fn apply(&self, v: VertexId) -> VertexId {
        self.0.get(v as usize).copied().unwrap_or(v)
    }

    /// Image of a simplex, re-sorted.
    pub fn apply_simplex(&self, s: &Simplex) -> Simplex {
        Simplex::new(s.vertices().iter().map(|&v| self.apply(v))).expect("injective")
    }

    /// Same permutation on a larger domain.
    pub fn extended(&self, n: usize) -> Self {
        let mut v = self.0.clone();
        v.extend(self.0.len() as VertexId..n as VertexId);
        Self(v)
    }

    /// `self` after `other`: `v -> self(other(v))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        let n = self.degree().max(other.degree());
        Permutation((0..n as VertexId).map(|v| self.apply(other.apply(v))).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.degree()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as VertexId;
        }
        Permutation(inv)
    }

    pub fn pow(&self, k: u64) -> Permutation {
        let mut acc = Permutation::identity(self.degree());
        for _ in 0..k {
            acc = self.compose(&acc);
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as VertexId == x)
    }

    /// Nontrivial cycles, each starting at its least point, ordered by that
    /// point.
    pub fn cycles(&self) -> Vec<Vec<VertexId>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start as VertexId];
            seen[start] = true;
            let mut x = self.0[start];
            while x as usize != start {
                seen[x as usize] = true;
                cycle.push(x);
                x = self.0[x as usize];
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    pub fn order(&self) -> u64 {
        fn gcd(a: u64, b: u64) -> u64 {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        self.cycles()
            .iter()
            .map(|c| c.len() as u64)
            .fold(1, |acc, l| acc / gcd(acc, l) * l)
    }
}

impl TryFrom<Vec<VertexId>> for Permutation {
    type Error = Error;

    fn try_from(v: Vec<VertexId>) -> Result<Self> {
        Permutation::new(v)
    }
}

impl From<Permutation> for Vec<VertexId> {
    fn from(p: Permutation) -> Self {
        p.0
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(ToString::to_string).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A finite permutation group, fully enumerated.
///
/// Elements are listed in breadth-first order from the identity, multiplying by
/// generators in the order given.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, usize>,
}

impl PermGroup {
    pub fn from_generators(degree: usize, generators: &[Permutation], cap: usize) -> Result<Self> {
        let generators: Vec<Permutation> = generators
            .iter()
            .map(|g| {
                if g.degree() > degree {
                    Err(Error::DomainMismatch(format!(
                        "generator {g} has degree {} above {degree}",
                        g.degree()
                    )))
                } else {
                    Ok(g.extended(degree))
                }
            })
            .collect::<Result<_>>()?;
        let id = Permutation::identity(degree);
        let mut elements = vec![id.clone()];
        let mut index = HashMap::from([(id.clone(), 0)]);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in &generators {
                let y = g.compose(&x);
                if !index.contains_key(&y) {
                    if elements.len() >= cap {
                        return Err(Error::GroupTooLarge { cap });
                    }
                    index.insert(y.clone(), elements.len());
                    elements.push(y.clone());
                    queue.push_back(y);
                }
            }
        }
        Ok(Self {
            degree,
            generators,
            elements,
            index,
        })
    }

    /// The cyclic group generated by `g`.
    pub fn cyclic(g: &Permutation) -> Self {
        Self::from_generators(g.degree(), std::slice::from_ref(g), DEFAULT_GROUP_CAP)
            .expect("cyclic groups of small degree are small")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.index.contains_key(&g.extended(self.degree))
    }

    /// Orbits on `points`, each sorted, ordered by least element.
    pub fn orbits(&self, points: &[VertexId]) -> Vec<Vec<VertexId>> {
        let mut seen: BTreeSet<VertexId> = BTreeSet::new();
        let mut out = Vec::new();
        let mut sorted = points.to_vec();
        sorted.sort_unstable();
        for &x in &sorted {
            if seen.contains(&x) {
                continue;
            }
            let orbit: BTreeSet<VertexId> = self.elements.iter().map(|g| g.apply(x)).collect();
            seen.extend(orbit.iter().copied());
            out.push(orbit.into_iter().collect());
        }
        out
    }

    fn subgroup_closure(&self, seed: impl IntoIterator<Item = usize>) -> BTreeSet<usize> {
        let mut set: BTreeSet<usize> = seed.into_iter().collect();
        set.insert(0);
        let gens: Vec<usize> = set.iter().copied().collect();
        let mut queue: VecDeque<usize> = set.iter().copied().collect();
        while let Some(x) = queue.pop_front() {
            for &g in &gens {
                let y = self.index[&self.elements[g].compose(&self.elements[x])];
                if set.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        set
    }

    fn conjugates(&self, x: usize) -> Vec<usize> {
        let g = &self.elements[x];
        self.elements
            .iter()
            .map(|h| self.index[&h.compose(g).compose(&h.inverse())])
            .collect()
    }

    /// All normal subgroups as element-index sets, smallest first.
    pub fn normal_subgroups(&self) -> Vec<BTreeSet<usize>> {
        let closures: BTreeSet<BTreeSet<usize>> = (0..self.order())
            .map(|x| self.subgroup_closure(self.conjugates(x)))
            .collect();
        let mut all: BTreeSet<BTreeSet<usize>> = closures.clone();
        loop {
            let mut added = false;
            let current: Vec<BTreeSet<usize>> = all.iter().cloned().collect();
            for a in &current {
                for b in &closures {
                    let join = self.subgroup_closure(a.union(b).copied());
                    added |= all.insert(join);
                }
            }
            if !added {
                break;
            }
        }
        let mut out: Vec<BTreeSet<usize>> = all.into_iter().collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    /// True when `sub` (element indices) is closed under conjugation.
    pub fn is_normal(&self, sub: &BTreeSet<usize>) -> bool {
        sub.iter().all(|&x| self.conjugates(x).iter().all(|c| sub.contains(c)))
    }

    /// True when `G / sub` is cyclic, for a normal subgroup `sub`.
    pub fn quotient_is_cyclic(&self, sub: &BTreeSet<usize>) -> bool {
        let index = self.order() / sub.len();
        self.elements.iter().any(|g| {
            let mut power = g.clone();
            let mut k = 1;
            while !sub.contains(&self.index[&power]) {
                power = g.compose(&power);
                k += 1;
            }
            k == index
        })
    }

    pub fn element(&self, i: usize) -> &Permutation {
        &self.elements[i]
    }
}
