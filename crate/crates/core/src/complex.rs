use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simplex::{Simplex, VertexId};

/// Vertex count above which callers should warn; nothing is refused.
pub const VERTEX_SOFT_LIMIT: usize = 64;

/// A finite abstract simplicial complex.
///
/// Simplices are kept in (dimension, lex) order. The empty complex is allowed.
#[derive(Clone, Default)]
pub struct Complex {
    simplices: Vec<Simplex>,
    index: HashMap<Simplex, usize>,
    /// `dim_start[d]` is the position of the first simplex of dimension `d`;
    /// one extra trailing entry holds the total count.
    dim_start: Vec<usize>,
    facets: OnceLock<Vec<Simplex>>,
}

impl Complex {
    pub fn empty() -> Self {
        Self::from_sorted_set(BTreeSet::new())
    }

    /// Downward closure of the given facets.
    pub fn from_facets<I>(facets: I) -> Self
    where
        I: IntoIterator<Item = Simplex>,
    {
        let mut all = BTreeSet::new();
        for f in facets {
            if all.contains(&f) {
                continue;
            }
            all.extend(f.faces());
        }
        Self::from_sorted_set(all)
    }

    /// Like [`Complex::from_facets`] but starting from raw vertex lists.
    pub fn from_vertex_lists<I, V>(facets: I) -> Result<Self>
    where
        I: IntoIterator<Item = V>,
        V: IntoIterator<Item = VertexId>,
    {
        let facets = facets.into_iter().map(Simplex::new).collect::<Result<Vec<_>>>()?;
        Ok(Self::from_facets(facets))
    }

    /// Builds a complex from a full simplex list, rejecting lists that are not
    /// closed under taking faces.
    pub fn from_simplices<I>(simplices: I) -> Result<Self>
    where
        I: IntoIterator<Item = Simplex>,
    {
        let all: BTreeSet<Simplex> = simplices.into_iter().collect();
        for s in &all {
            for (_, f) in s.facets() {
                if !all.contains(&f) {
                    return Err(Error::NotClosed { missing: f });
                }
            }
        }
        Ok(Self::from_sorted_set(all))
    }

    fn from_sorted_set(all: BTreeSet<Simplex>) -> Self {
        Self::from_sorted_iter(all.into_iter())
    }

    /// `iter` must be sorted and closed.
    pub(crate) fn from_sorted_iter(iter: impl Iterator<Item = Simplex>) -> Self {
        let simplices: Vec<Simplex> = iter.collect();
        let index = simplices.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let mut dim_start = vec![0];
        for (i, s) in simplices.iter().enumerate() {
            while dim_start.len() <= s.dim() {
                dim_start.push(i);
            }
        }
        dim_start.push(simplices.len());
        if simplices.is_empty() {
            dim_start = vec![0];
        }
        Self {
            simplices,
            index,
            dim_start,
            facets: OnceLock::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.index.contains_key(s)
    }

    /// Position of `s` in (dimension, lex) order.
    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Position of `s` among the simplices of its own dimension.
    pub fn index_in_dim(&self, s: &Simplex) -> Option<usize> {
        self.index_of(s).map(|i| i - self.dim_start[s.dim()])
    }

    pub fn simplex(&self, index: usize) -> &Simplex {
        &self.simplices[index]
    }

    /// All simplices in (dimension, lex) order.
    pub fn simplices(&self) -> impl ExactSizeIterator<Item = &Simplex> + Clone + '_ {
        self.simplices.iter()
    }

    /// Dimension of the complex; `None` when empty.
    pub fn dim(&self) -> Option<usize> {
        self.simplices.last().map(Simplex::dim)
    }

    /// Simplices of dimension `d`, in lex order.
    pub fn of_dim(&self, d: usize) -> &[Simplex] {
        let (lo, hi) = self.dim_range(d);
        &self.simplices[lo..hi]
    }

    pub fn count_of_dim(&self, d: usize) -> usize {
        let (lo, hi) = self.dim_range(d);
        hi - lo
    }

    fn dim_range(&self, d: usize) -> (usize, usize) {
        if d + 1 >= self.dim_start.len() {
            return (0, 0);
        }
        (self.dim_start[d], self.dim_start[d + 1])
    }

    /// Sorted vertex labels.
    pub fn vertices(&self) -> Vec<VertexId> {
        self.of_dim(0).iter().map(|s| s.vertices()[0]).collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.count_of_dim(0)
    }

    /// Maximal simplices in (dimension, lex) order.
    pub fn facets(&self) -> &[Simplex] {
        self.facets.get_or_init(|| {
            let mut covered = vec![false; self.len()];
            for s in self.simplices.iter() {
                for (_, f) in s.facets() {
                    if let Some(i) = self.index.get(&f).copied() {
                        covered[i] = true;
                    }
                }
            }
            self.simplices
                .iter()
                .zip(covered)
                .filter(|(_, c)| !c)
                .map(|(s, _)| s.clone())
                .collect()
        })
    }

    /// Alternating count of simplices by dimension.
    pub fn euler_characteristic(&self) -> i64 {
        euler_characteristic(self.simplices())
    }

    /// Simplices of `self` that contain `s`, including `s` itself when present.
    pub fn star_of(&self, s: &Simplex) -> Vec<Simplex> {
        self.simplices.iter().filter(|t| s.is_face_of(t)).cloned().collect()
    }

    /// The complex with the listed simplices removed.
    ///
    /// Fails if the remainder is not closed.
    pub fn without(&self, removed: &[Simplex]) -> Result<Complex> {
        let drop: std::collections::HashSet<&Simplex> = removed.iter().collect();
        for r in removed {
            if !self.contains(r) {
                return Err(Error::NotInComplex(r.clone()));
            }
        }
        let kept = self.simplices.iter().filter(|s| !drop.contains(s)).cloned();
        let out = Self::from_sorted_iter(kept);
        for s in out.simplices() {
            for (_, f) in s.facets() {
                if !out.contains(&f) {
                    return Err(Error::NotClosed { missing: f });
                }
            }
        }
        Ok(out)
    }

    /// True when every simplex of `self` lies in `other`.
    pub fn is_subcomplex_of(&self, other: &Complex) -> bool {
        self.simplices().all(|s| other.contains(s))
    }

    /// The full subcomplex whose simplices satisfy `keep`, provided the result
    /// is closed.
    pub fn filtered(&self, keep: impl Fn(&Simplex) -> bool) -> Result<Complex> {
        let kept: Vec<Simplex> = self.simplices().filter(|s| keep(s)).cloned().collect();
        Complex::from_simplices(kept)
    }

    /// True when the simplices form a downward-closed family.
    pub fn is_closed_family<'a>(family: impl IntoIterator<Item = &'a Simplex>) -> bool {
        let set: std::collections::HashSet<&Simplex> = family.into_iter().collect();
        set.iter().all(|s| s.facets().all(|(_, f)| set.contains(&f)))
    }
}

impl PartialEq for Complex {
    fn eq(&self, other: &Self) -> bool {
        self.simplices == other.simplices
    }
}

impl Eq for Complex {}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.facets()).finish()
    }
}

/// Alternating count of simplices by dimension; zero for an empty family.
pub fn euler_characteristic<'a>(simplices: impl IntoIterator<Item = &'a Simplex>) -> i64 {
    simplices
        .into_iter()
        .map(|s| if s.dim() % 2 == 0 { 1 } else { -1 })
        .sum()
}

/// The cone `apex * c`.
pub fn cone(apex: VertexId, c: &Complex) -> Result<Complex> {
    if c.contains(&Simplex::vertex(apex)) {
        return Err(Error::VertexCollision(apex));
    }
    let mut all: BTreeSet<Simplex> = c.simplices().cloned().collect();
    all.insert(Simplex::vertex(apex));
    for s in c.simplices() {
        all.insert(s.with_vertex(apex).expect("apex is new"));
    }
    Ok(Complex::from_sorted_set(all))
}

/// The three standard complexes built from `[0..n]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StandardKind {
    /// All faces of `[0..n]`.
    Full,
    /// All proper faces of `[0..n]`.
    Boundary,
    /// Proper faces of `[0..n]` other than `[0..n-1]`.
    Horn,
}

/// Largest `n` accepted by [`standard_complex`].
pub const MAX_STANDARD_N: usize = 20;

pub fn standard_complex(kind: StandardKind, n: usize) -> Result<Complex> {
    let min = if kind == StandardKind::Full { 0 } else { 1 };
    if n < min || n > MAX_STANDARD_N {
        return Err(Error::OutOfRange {
            what: "standard complex index",
            detail: format!("{kind:?} needs {min} <= n <= {MAX_STANDARD_N}, got {n}"),
        });
    }
    let top = Simplex::standard(n);
    let mut all: BTreeSet<Simplex> = top.faces().into_iter().collect();
    if kind != StandardKind::Full {
        all.remove(&top);
    }
    if kind == StandardKind::Horn {
        all.remove(&Simplex::standard(n - 1));
    }
    Ok(Complex::from_sorted_set(all))
}

/// Labels of the vertices of a barycentric subdivision: vertex `i` of the
/// subdivision stands for `simplices[i]` of the original complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarDictionary {
    simplices: Vec<Simplex>,
    labels: HashMap<Simplex, VertexId>,
}

impl BarDictionary {
    /// Original simplex behind a subdivision vertex.
    pub fn simplex_of(&self, v: VertexId) -> Option<&Simplex> {
        self.simplices.get(v as usize)
    }

    /// Subdivision vertex standing for an original simplex.
    pub fn vertex_of(&self, s: &Simplex) -> Option<VertexId> {
        self.labels.get(s).copied()
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (VertexId, &Simplex)> {
        self.simplices.iter().enumerate().map(|(i, s)| (i as VertexId, s))
    }
}

/// Barycentric subdivision: the complex of chains `Q1 < Q2 < ... < Qr` of
/// simplices of `c` under proper inclusion.
///
/// The simplices of `c`, taken in (dimension, lex) order, are relabelled
/// `0, 1, 2, ...`.
pub fn barycentric_subdivision(c: &Complex) -> (Complex, BarDictionary) {
    let simplices: Vec<Simplex> = c.simplices().cloned().collect();
    let labels: HashMap<Simplex, VertexId> = simplices
        .iter()
        .enumerate()
        .map(|(i, s)| (s.clone(), i as VertexId))
        .collect();

    // proper supersets of each simplex, by label
    let mut up: Vec<Vec<VertexId>> = vec![Vec::new(); simplices.len()];
    for (i, s) in simplices.iter().enumerate() {
        for f in s.faces() {
            if &f != s {
                up[labels[&f] as usize].push(i as VertexId);
            }
        }
    }

    let mut chains: Vec<Simplex> = Vec::new();
    let mut stack: Vec<VertexId> = Vec::new();
    fn extend(up: &[Vec<VertexId>], stack: &mut Vec<VertexId>, out: &mut Vec<Simplex>) {
        out.push(Simplex::from_sorted(stack.clone()));
        let last = *stack.last().expect("nonempty chain") as usize;
        for &next in &up[last] {
            stack.push(next);
            extend(up, stack, out);
            stack.pop();
        }
    }
    for i in 0..simplices.len() {
        stack.push(i as VertexId);
        extend(&up, &mut stack, &mut chains);
        stack.pop();
    }
    // labels increase with dimension, so every chain is already sorted
    chains.sort();
    (
        Complex::from_sorted_iter(chains.into_iter()),
        BarDictionary { simplices, labels },
    )
}

#[derive(Serialize, Deserialize)]
struct ComplexRepr {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    facets: Option<Vec<Simplex>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    simplices: Option<Vec<Simplex>>,
}

impl Serialize for Complex {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ComplexRepr {
            facets: None,
            simplices: Some(self.simplices().cloned().collect()),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Complex {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = ComplexRepr::deserialize(deserializer)?;
        match (repr.facets, repr.simplices) {
            (Some(f), None) => Ok(Complex::from_facets(f)),
            (None, Some(s)) => Complex::from_simplices(s).map_err(D::Error::custom),
            _ => Err(D::Error::custom("expected exactly one of `facets` or `simplices`")),
        }
    }
}

impl Complex {
    /// Facets as a JSON object `{"facets": [...]}`.
    pub fn facets_json(&self) -> serde_json::Value {
        serde_json::json!({ "facets": self.facets() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex;

    fn sigma() -> Complex {
        Complex::from_facets([simplex![0, 1, 2], simplex![0, 2, 3]])
    }

    #[test]
    fn closure_and_counts() {
        let c = sigma();
        assert_eq!(c.len(), 4 + 5 + 2);
        assert_eq!(c.dim(), Some(2));
        assert_eq!(c.vertices(), vec![0, 1, 2, 3]);
        assert_eq!(c.facets(), &[simplex![0, 1, 2], simplex![0, 2, 3]]);
        assert_eq!(c.euler_characteristic(), 1);
        assert_eq!(c.of_dim(1).len(), 5);
        assert_eq!(c.index_in_dim(&simplex![0, 2]), Some(1));
        assert!(c.of_dim(3).is_empty());
    }

    #[test]
    fn empty_complex() {
        let e = Complex::empty();
        assert!(e.is_empty());
        assert_eq!(e.dim(), None);
        assert_eq!(e.euler_characteristic(), 0);
        assert!(e.facets().is_empty());
        assert_eq!(e.of_dim(0).len(), 0);
    }

    #[test]
    fn from_simplices_rejects_unclosed() {
        let err = Complex::from_simplices([simplex![0, 1], simplex![0]]).unwrap_err();
        assert!(matches!(err, Error::NotClosed { missing } if missing == simplex![1]));
    }

    #[test]
    fn facets_of_mixed_dimension() {
        let c = Complex::from_facets([simplex![0, 1, 2], simplex![2, 3], simplex![4]]);
        assert_eq!(c.facets(), &[simplex![4], simplex![2, 3], simplex![0, 1, 2]]);
    }

    #[test]
    fn cone_doubles_plus_apex() {
        let c = sigma();
        let k = cone(9, &c).unwrap();
        assert_eq!(k.len(), 2 * c.len() + 1);
        assert_eq!(k.euler_characteristic(), 1);
        assert!(matches!(cone(0, &c), Err(Error::VertexCollision(0))));
        assert_eq!(cone(5, &Complex::empty()).unwrap().len(), 1);
    }

    #[test]
    fn standard_complexes() {
        let full = standard_complex(StandardKind::Full, 2).unwrap();
        let bd = standard_complex(StandardKind::Boundary, 2).unwrap();
        let horn = standard_complex(StandardKind::Horn, 2).unwrap();
        assert_eq!((full.len(), bd.len(), horn.len()), (7, 6, 5));
        assert!(!horn.contains(&simplex![0, 1]));
        assert!(horn.contains(&simplex![0, 2]));
        assert!(standard_complex(StandardKind::Boundary, 0).is_err());
        assert_eq!(standard_complex(StandardKind::Full, 0).unwrap().len(), 1);
    }

    #[test]
    fn subdivision_of_triangle() {
        let full = standard_complex(StandardKind::Full, 2).unwrap();
        let (bar, dict) = barycentric_subdivision(&full);
        assert_eq!(bar.vertex_count(), 7);
        assert_eq!(bar.count_of_dim(1), 12);
        assert_eq!(bar.count_of_dim(2), 6);
        assert_eq!(dict.simplex_of(6), Some(&simplex![0, 1, 2]));
        assert_eq!(dict.vertex_of(&simplex![0, 1]), Some(3));
        assert_eq!(bar.euler_characteristic(), 1);
    }

    #[test]
    fn without_checks_closure() {
        let c = sigma();
        let d = c.without(&[simplex![0, 1, 2], simplex![1, 2]]).unwrap();
        assert_eq!(d.len(), c.len() - 2);
        assert!(c.without(&[simplex![0, 2]]).is_err());
    }

    #[test]
    fn json_formats() {
        let c: Complex = serde_json::from_str(r#"{"facets":[[2,1,0],[2,3]]}"#).unwrap();
        assert_eq!(c.len(), 9);
        let s = serde_json::to_string(&Complex::from_facets([simplex![0, 1]])).unwrap();
        assert_eq!(s, r#"{"simplices":[[0],[1],[0,1]]}"#);
        let back: Complex = serde_json::from_str(&s).unwrap();
        assert_eq!(back.len(), 3);
        assert!(serde_json::from_str::<Complex>(r#"{"simplices":[[0,1]]}"#).is_err());
    }
}
