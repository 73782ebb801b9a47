use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Vertex label.
pub type VertexId = u32;

/// A nonempty set of vertices, stored as a strictly increasing tuple.
///
/// Simplices order first by dimension and then lexicographically, so sorting a
/// list of simplices groups them by dimension.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<VertexId>", into = "Vec<VertexId>")]
pub struct Simplex(Vec<VertexId>);

#[allow(clippy::len_without_is_empty)]
impl Simplex {
    /// Builds a simplex from vertices in any order.
    ///
    /// Fails on an empty input or a repeated vertex.
    pub fn new(vertices: impl IntoIterator<Item = VertexId>) -> Result<Self> {
        let mut v: Vec<VertexId> = vertices.into_iter().collect();
        if v.is_empty() {
            return Err(Error::MalformedSimplex("empty vertex list".into()));
        }
        v.sort_unstable();
        if let Some(w) = v.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::MalformedSimplex(format!("repeated vertex {}", w[0])));
        }
        Ok(Self(v))
    }

    /// Wraps an already strictly increasing, nonempty vector.
    pub(crate) fn from_sorted(v: Vec<VertexId>) -> Self {
        debug_assert!(!v.is_empty() && v.windows(2).all(|w| w[0] < w[1]));
        Self(v)
    }

    /// The 0-simplex `[v]`.
    pub fn vertex(v: VertexId) -> Self {
        Self(vec![v])
    }

    /// The simplex `[0, 1, ..., n]`.
    pub fn standard(n: usize) -> Self {
        Self((0..=n as VertexId).collect())
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    /// Number of vertices minus one.
    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// True when every vertex of `self` is a vertex of `other`.
    pub fn is_face_of(&self, other: &Simplex) -> bool {
        if self.0.len() > other.0.len() {
            return false;
        }
        let mut it = other.0.iter();
        self.0.iter().all(|v| it.by_ref().any(|w| w == v))
    }

    /// Codimension-one faces, paired with the position of the dropped vertex.
    /// Empty for a vertex.
    pub fn facets(&self) -> impl Iterator<Item = (usize, Simplex)> + '_ {
        let n = if self.0.len() > 1 { self.0.len() } else { 0 };
        (0..n).map(move |i| {
            let mut v = self.0.clone();
            v.remove(i);
            (i, Simplex(v))
        })
    }

    /// All nonempty faces, including `self`.
    pub fn faces(&self) -> Vec<Simplex> {
        let n = self.0.len();
        assert!(n < 32, "simplex too large to enumerate faces");
        (1u32..(1 << n))
            .map(|mask| Simplex((0..n).filter(|i| mask >> i & 1 == 1).map(|i| self.0[i]).collect()))
            .collect()
    }

    pub fn union(&self, other: &Simplex) -> Simplex {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            match (self.0.get(i), other.0.get(j)) {
                (Some(a), Some(b)) if a == b => {
                    v.push(*a);
                    i += 1;
                    j += 1;
                }
                (Some(a), Some(b)) if a < b => {
                    v.push(*a);
                    i += 1;
                }
                (Some(_), Some(b)) | (None, Some(b)) => {
                    v.push(*b);
                    j += 1;
                }
                (Some(a), None) => {
                    v.push(*a);
                    i += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Simplex(v)
    }

    /// `self` with `v` added; `None` if `v` is already present.
    pub fn with_vertex(&self, v: VertexId) -> Option<Simplex> {
        match self.0.binary_search(&v) {
            Ok(_) => None,
            Err(pos) => {
                let mut w = self.0.clone();
                w.insert(pos, v);
                Some(Simplex(w))
            }
        }
    }

    /// `self` with `v` removed; `None` if `v` is absent or the result is empty.
    pub fn without_vertex(&self, v: VertexId) -> Option<Simplex> {
        let pos = self.0.binary_search(&v).ok()?;
        if self.0.len() == 1 {
            return None;
        }
        let mut w = self.0.clone();
        w.remove(pos);
        Some(Simplex(w))
    }

    /// Vertices of `self` that are not in `other`.
    pub fn difference(&self, other: &Simplex) -> Vec<VertexId> {
        self.0.iter().copied().filter(|v| !other.contains_vertex(*v)).collect()
    }
}

impl Ord for Simplex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Simplex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl TryFrom<Vec<VertexId>> for Simplex {
    type Error = Error;

    fn try_from(v: Vec<VertexId>) -> Result<Self> {
        Simplex::new(v)
    }
}

impl From<Simplex> for Vec<VertexId> {
    fn from(s: Simplex) -> Self {
        s.0
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Shorthand for building a simplex in tests and fixtures. Panics on bad input.
#[macro_export]
macro_rules! simplex {
    ($($v:expr),+ $(,)?) => {
        $crate::Simplex::new([$($v as $crate::VertexId),+]).expect("valid simplex literal")
    };
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn new_sorts_and_rejects_repeats() {
        assert_eq!(Simplex::new([2, 0, 1]).unwrap().vertices(), &[0, 1, 2]);
        assert!(matches!(Simplex::new([0, 0]), Err(Error::MalformedSimplex(_))));
        assert!(Simplex::new([]).is_err());
    }

    #[test]
    fn order_is_dimension_then_lex() {
        let mut v = vec![simplex![0, 1], simplex![2], simplex![0, 2], simplex![1]];
        v.sort();
        assert_eq!(v, vec![simplex![1], simplex![2], simplex![0, 1], simplex![0, 2]]);
    }

    #[test]
    fn face_relations() {
        let s = simplex![0, 2, 5];
        assert!(simplex![0, 5].is_face_of(&s));
        assert!(!simplex![1].is_face_of(&s));
        assert_eq!(s.faces().len(), 7);
        let f: Vec<_> = s.facets().map(|(_, f)| f).collect();
        assert_eq!(f, vec![simplex![2, 5], simplex![0, 5], simplex![0, 2]]);
        assert_eq!(simplex![3].facets().count(), 0);
    }

    #[test]
    fn union_and_edits() {
        assert_eq!(simplex![0, 3].union(&simplex![1, 3, 4]), simplex![0, 1, 3, 4]);
        assert_eq!(simplex![0, 3].with_vertex(1), Some(simplex![0, 1, 3]));
        assert_eq!(simplex![0, 3].with_vertex(3), None);
        assert_eq!(simplex![0, 3].without_vertex(0), Some(simplex![3]));
        assert_eq!(simplex![3].without_vertex(3), None);
    }

    #[test]
    fn json_roundtrip() {
        let s: Simplex = serde_json::from_str("[2,0,1]").unwrap();
        assert_eq!(serde_json::to_string(&s).unwrap(), "[0,1,2]");
        assert!(serde_json::from_str::<Simplex>("[1,1]").is_err());
    }
}
