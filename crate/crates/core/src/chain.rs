//! Chain groups over `F_p`, boundary maps, reduced homology and the chain maps
//! induced by simplicial maps.
//!
//! Orientation: an `n`-simplex `[v0, ..., vn]` has boundary
//! `sum_i (-1)^(n-i) [v0, ..., ^vi, ..., vn]`, so that
//! `d[0,1] = [0] - [1]` and `d[0,1,2] = [1,2] - [0,2] + [0,1]`.
//! Reduced homology uses the augmentation `[v] -> 1` in degree zero.

use serde::{Deserialize, Serialize};

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::field::{Fp, FpMatrix, Prime};
use crate::simplex::{Simplex, VertexId};

/// Sign attached to the face obtained by dropping position `i` of an
/// `n`-simplex.
pub fn boundary_sign(n: usize, i: usize) -> i64 {
    if (n - i) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// A formal `F_p`-combination of simplices of one dimension, sorted by simplex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    p: Prime,
    terms: Vec<(Simplex, Fp)>,
}

impl Chain {
    pub fn prime(&self) -> Prime {
        self.p
    }

    /// Nonzero terms in simplex order.
    pub fn terms(&self) -> &[(Simplex, Fp)] {
        &self.terms
    }

    pub fn coefficient(&self, s: &Simplex) -> Fp {
        self.terms
            .binary_search_by(|(t, _)| t.cmp(s))
            .map_or(Fp::zero(self.p), |i| self.terms[i].1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Integer boundary coefficients of `q`, faces in simplex order.
pub fn boundary_terms(q: &Simplex) -> Result<Vec<(Simplex, i64)>> {
    if q.dim() == 0 {
        return Err(Error::DegreeUnderflow);
    }
    let n = q.dim();
    let mut terms: Vec<(Simplex, i64)> = q.facets().map(|(i, face)| (face, boundary_sign(n, i))).collect();
    terms.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(terms)
}

/// Boundary of a single simplex as an `F_p`-chain.
pub fn boundary_of(q: &Simplex, p: Prime) -> Result<Chain> {
    let terms = boundary_terms(q)?
        .into_iter()
        .map(|(s, c)| (s, Fp::new(c, p)))
        .filter(|(_, c)| !c.is_zero())
        .collect();
    Ok(Chain { p, terms })
}

/// Matrix of `d_n : C_n -> C_(n-1)` with simplices indexed in lex order.
///
/// For `n = 0` this is the augmentation `C_0 -> F_p`, a single row of ones.
pub fn boundary_matrix(c: &Complex, n: usize, p: Prime) -> FpMatrix {
    let cols = c.of_dim(n);
    if n == 0 {
        let mut m = FpMatrix::zeros(p, 1, cols.len());
        for j in 0..cols.len() {
            m.set(0, j, 1);
        }
        return m;
    }
    let mut m = FpMatrix::zeros(p, c.count_of_dim(n - 1), cols.len());
    for (j, q) in cols.iter().enumerate() {
        for (i, face) in q.facets() {
            let row = c.index_in_dim(&face).expect("complex is closed");
            m.set(row, j, boundary_sign(n, i));
        }
    }
    m
}

/// The chain complex of a simplicial complex (unaugmented), or any other
/// finite chain complex of `F_p`-vector spaces.
///
/// `boundaries[n]` is the matrix of `d_n : C_n -> C_(n-1)`; `boundaries[0]` has
/// zero rows.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    pub p: Prime,
    pub boundaries: Vec<FpMatrix>,
}

impl ChainComplex {
    pub fn of_complex(c: &Complex, p: Prime) -> Self {
        let top = c.dim().map_or(0, |d| d + 1);
        let boundaries = (0..top)
            .map(|n| {
                if n == 0 {
                    FpMatrix::zeros(p, 0, c.count_of_dim(0))
                } else {
                    boundary_matrix(c, n, p)
                }
            })
            .collect();
        Self { p, boundaries }
    }

    /// Number of degrees stored.
    pub fn len(&self) -> usize {
        self.boundaries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boundaries.is_empty()
    }

    /// Dimension of `C_n`; zero outside the stored range.
    pub fn rank_of_group(&self, n: usize) -> usize {
        self.boundaries.get(n).map_or(0, FpMatrix::cols)
    }

    /// `d_n`, or a zero map of the right shape outside the stored range.
    pub fn boundary(&self, n: usize) -> FpMatrix {
        match self.boundaries.get(n) {
            Some(m) => m.clone(),
            None => FpMatrix::zeros(self.p, if n == 0 { 0 } else { self.rank_of_group(n - 1) }, 0),
        }
    }

    /// Unreduced homology dimensions for every stored degree.
    pub fn homology_dims(&self) -> Vec<usize> {
        let ranks: Vec<usize> = self.boundaries.iter().map(FpMatrix::rank).collect();
        (0..self.len())
            .map(|n| {
                let next = ranks.get(n + 1).copied().unwrap_or(0);
                self.rank_of_group(n) - ranks[n] - next
            })
            .collect()
    }

    /// True when every `d_(n-1) d_n` vanishes.
    pub fn squares_to_zero(&self) -> bool {
        (2..self.len()).all(|n| self.boundaries[n - 1].mul(&self.boundaries[n]).is_zero())
    }
}

/// Reduced homology dimensions with trailing zeros removed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyProfile {
    pub p: Prime,
    pub dims: Vec<usize>,
}

impl HomologyProfile {
    pub fn is_acyclic(&self) -> bool {
        self.dims.is_empty()
    }

    /// Dimension in degree `n`.
    pub fn dim(&self, n: usize) -> usize {
        self.dims.get(n).copied().unwrap_or(0)
    }
}

/// Reduced homology of a complex. The empty complex is reported separately
/// because its reduced homology sits in degree `-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReducedHomology {
    EmptyComplex,
    Profile(HomologyProfile),
}

impl ReducedHomology {
    pub fn is_acyclic(&self) -> bool {
        matches!(self, ReducedHomology::Profile(h) if h.is_acyclic())
    }

    pub fn profile(&self) -> Option<&HomologyProfile> {
        match self {
            ReducedHomology::Profile(h) => Some(h),
            ReducedHomology::EmptyComplex => None,
        }
    }
}

pub fn reduced_homology(c: &Complex, p: Prime) -> ReducedHomology {
    let Some(top) = c.dim() else {
        return ReducedHomology::EmptyComplex;
    };
    let ranks: Vec<usize> = (0..=top).map(|n| boundary_matrix(c, n, p).rank()).collect();
    let mut dims: Vec<usize> = (0..=top)
        .map(|n| c.count_of_dim(n) - ranks[n] - ranks.get(n + 1).copied().unwrap_or(0))
        .collect();
    while dims.last() == Some(&0) {
        dims.pop();
    }
    ReducedHomology::Profile(HomologyProfile { p, dims })
}

/// True when the complex is nonempty with vanishing reduced homology.
pub fn is_acyclic(c: &Complex, p: Prime) -> bool {
    reduced_homology(c, p).is_acyclic()
}

/// Serializable homology summary, padded to the dimension of the complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyReport {
    pub p: u64,
    pub reduced_dims: Vec<usize>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub empty_complex: bool,
}

impl HomologyReport {
    pub fn new(c: &Complex, p: Prime) -> Self {
        match reduced_homology(c, p) {
            ReducedHomology::EmptyComplex => Self {
                p: p.get(),
                reduced_dims: Vec::new(),
                empty_complex: true,
            },
            ReducedHomology::Profile(h) => {
                let len = c.dim().map_or(0, |d| d + 1);
                Self {
                    p: p.get(),
                    reduced_dims: (0..len).map(|n| h.dim(n)).collect(),
                    empty_complex: false,
                }
            }
        }
    }
}

/// Image of `q` under a vertex map together with the permutation sign, or
/// `None` when two vertices collide.
pub fn oriented_image(q: &Simplex, f: impl Fn(VertexId) -> VertexId) -> Option<(Simplex, i64)> {
    let images: Vec<VertexId> = q.vertices().iter().map(|&v| f(v)).collect();
    let mut inversions = 0usize;
    for i in 0..images.len() {
        for j in i + 1..images.len() {
            match images[i].cmp(&images[j]) {
                std::cmp::Ordering::Greater => inversions += 1,
                std::cmp::Ordering::Equal => return None,
                std::cmp::Ordering::Less => {}
            }
        }
    }
    let sign = if inversions % 2 == 0 { 1 } else { -1 };
    Some((Simplex::new(images).expect("distinct images"), sign))
}

/// Matrix of the degree-`n` chain map induced by a simplicial map
/// `src -> dst`. Degenerate images map to zero.
pub fn chain_map_matrix(
    src: &Complex,
    dst: &Complex,
    f: impl Fn(VertexId) -> VertexId,
    n: usize,
    p: Prime,
) -> Result<FpMatrix> {
    let cols = src.of_dim(n);
    let mut m = FpMatrix::zeros(p, dst.count_of_dim(n), cols.len());
    for (j, q) in cols.iter().enumerate() {
        if let Some((image, sign)) = oriented_image(q, &f) {
            let row = dst
                .index_in_dim(&image)
                .ok_or_else(|| Error::NotAnIsomorphism(format!("{q} maps to {image}, which is not in the target")))?;
            m.set(row, j, sign);
        }
    }
    Ok(m)
}

/// Checks `d F_n = F_(n-1) d` in every degree for a simplicial map.
pub fn chain_map_commutes(
    src: &Complex,
    dst: &Complex,
    f: impl Fn(VertexId) -> VertexId + Copy,
    p: Prime,
) -> Result<bool> {
    let top = src.dim().unwrap_or(0);
    for n in 1..=top {
        let upper = chain_map_matrix(src, dst, f, n, p)?;
        let lower = chain_map_matrix(src, dst, f, n - 1, p)?;
        let left = boundary_matrix(dst, n, p).mul(&upper);
        let right = lower.mul(&boundary_matrix(src, n, p));
        if left != right {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Signed count of simplices fixed as sets by a self-map of `c`, alternating by
/// dimension. This equals the alternating sum of traces of the induced chain
/// maps.
pub fn lefschetz_number(c: &Complex, f: impl Fn(VertexId) -> VertexId) -> i64 {
    c.simplices()
        .filter_map(|q| {
            let (image, sign) = oriented_image(q, &f)?;
            (&image == q).then_some(if q.dim() % 2 == 0 { sign } else { -sign })
        })
        .sum()
}

/// Alternating sum of the traces of the chain maps `F_n` on `C_n(c; F_p)`.
pub fn lefschetz_sum(c: &Complex, f: impl Fn(VertexId) -> VertexId + Copy, p: Prime) -> Result<Fp> {
    let mut acc = Fp::zero(p);
    for n in 0..c.dim().map_or(0, |d| d + 1) {
        let tr = chain_map_matrix(c, c, f, n, p)?.trace();
        acc = if n % 2 == 0 { acc + tr } else { acc - tr };
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{standard_complex, StandardKind};
    use crate::simplex;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn worked_boundaries() {
        let q = p(7);
        let d2 = boundary_of(&simplex![0, 1, 2], q).unwrap();
        assert_eq!(d2.coefficient(&simplex![1, 2]), Fp::new(1, q));
        assert_eq!(d2.coefficient(&simplex![0, 2]), Fp::new(-1, q));
        assert_eq!(d2.coefficient(&simplex![0, 1]), Fp::new(1, q));
        let d1 = boundary_of(&simplex![0, 1], q).unwrap();
        assert_eq!(d1.coefficient(&simplex![0]), Fp::new(1, q));
        assert_eq!(d1.coefficient(&simplex![1]), Fp::new(-1, q));
        let d1 = boundary_of(&simplex![0, 2], q).unwrap();
        assert_eq!(d1.coefficient(&simplex![0]), Fp::new(1, q));
        assert_eq!(d1.coefficient(&simplex![2]), Fp::new(-1, q));
        assert!(matches!(boundary_of(&simplex![4], q), Err(Error::DegreeUnderflow)));
    }

    #[test]
    fn boundary_in_characteristic_two_drops_nothing() {
        let d = boundary_of(&simplex![0, 1, 2], p(2)).unwrap();
        assert_eq!(d.terms().len(), 3);
    }

    #[test]
    fn simplex_and_sphere() {
        for prime in [2, 3, 5] {
            let q = p(prime);
            let full = standard_complex(StandardKind::Full, 3).unwrap();
            assert!(is_acyclic(&full, q));
            let sphere = standard_complex(StandardKind::Boundary, 3).unwrap();
            assert_eq!(reduced_homology(&sphere, q).profile().unwrap().dims, vec![0, 0, 1]);
            assert!(ChainComplex::of_complex(&sphere, q).squares_to_zero());
        }
    }

    #[test]
    fn two_points_and_empty() {
        let c = Complex::from_facets([simplex![0], simplex![1]]);
        assert_eq!(reduced_homology(&c, p(3)).profile().unwrap().dims, vec![1]);
        assert_eq!(reduced_homology(&Complex::empty(), p(3)), ReducedHomology::EmptyComplex);
        assert!(!is_acyclic(&Complex::empty(), p(3)));
    }

    #[test]
    fn report_pads_to_dimension() {
        let hollow = standard_complex(StandardKind::Boundary, 2).unwrap();
        let r = HomologyReport::new(&hollow, p(5));
        assert_eq!(serde_json::to_string(&r).unwrap(), r#"{"p":5,"reduced_dims":[0,1]}"#);
    }

    #[test]
    fn rotation_chain_map_table() {
        // rotation 0 -> 1 -> 2 -> 0 on the solid triangle
        let c = standard_complex(StandardKind::Full, 2).unwrap();
        let rot = |v: VertexId| (v + 1) % 3;
        assert_eq!(oriented_image(&simplex![0, 1], rot), Some((simplex![1, 2], 1)));
        assert_eq!(oriented_image(&simplex![1, 2], rot), Some((simplex![0, 2], -1)));
        assert_eq!(oriented_image(&simplex![0, 2], rot), Some((simplex![0, 1], -1)));
        assert_eq!(oriented_image(&simplex![0, 1, 2], rot), Some((simplex![0, 1, 2], 1)));
        assert!(chain_map_commutes(&c, &c, rot, p(5)).unwrap());
        assert_eq!(lefschetz_sum(&c, rot, p(5)).unwrap(), Fp::one(p(5)));
        let hollow = standard_complex(StandardKind::Boundary, 2).unwrap();
        assert_eq!(lefschetz_sum(&hollow, rot, p(5)).unwrap(), Fp::zero(p(5)));
        assert_eq!(lefschetz_number(&hollow, rot), 0);
    }

    #[test]
    fn degenerate_images_vanish() {
        let c = standard_complex(StandardKind::Full, 1).unwrap();
        let point = Complex::from_facets([simplex![0]]);
        let m = chain_map_matrix(&c, &point, |_| 0, 1, p(3)).unwrap();
        assert!(m.is_zero());
        assert!(chain_map_commutes(&c, &point, |_| 0, p(3)).unwrap());
    }

    #[test]
    fn reflection_of_an_edge() {
        let c = standard_complex(StandardKind::Full, 1).unwrap();
        let swap = |v: VertexId| 1 - v;
        assert_eq!(lefschetz_number(&c, swap), 1);
    }
}
