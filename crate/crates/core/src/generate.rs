//! Seeded random complexes: arbitrary ones, collapsible ones with a
//! certificate, and symmetric ones with a prescribed automorphism.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::collapse::{CollapseSequence, CollapseStep};
use crate::complex::{cone, Complex};
use crate::perm::{PermGroup, Permutation};
use crate::simplex::{Simplex, VertexId};

/// Largest number of expansions accepted by [`random_collapsible`].
pub const MAX_EXPANSIONS: usize = 200;

fn random_subset<R: Rng>(rng: &mut R, n: u32, size: usize) -> Simplex {
    let pool: Vec<VertexId> = (0..n).collect();
    Simplex::new(pool.choose_multiple(rng, size).copied()).expect("nonempty sample")
}

/// A complex on vertices `0..n` with `1 <= n <= max_vertices`, generated by
/// up to six random facets of dimension at most `max_dim`, plus every vertex.
pub fn random_complex<R: Rng>(rng: &mut R, max_vertices: u32, max_dim: usize) -> Complex {
    let n = rng.gen_range(1..=max_vertices.max(1));
    let top = (max_dim + 1).min(n as usize);
    let count = rng.gen_range(1..=6);
    let mut facets: Vec<Simplex> = (0..count)
        .map(|_| {
            let size = rng.gen_range(1..=top);
            random_subset(rng, n, size)
        })
        .collect();
    facets.extend((0..n).map(Simplex::vertex));
    Complex::from_facets(facets)
}

/// A collapsible complex built from a single vertex by random elementary
/// expansions, with the collapse that undoes them.
///
/// Each expansion adds a pair `(beta, alpha)` where `alpha` has `beta` as its
/// only missing facet. Vertex and dimension caps bound the result; at most
/// [`MAX_EXPANSIONS`] expansions are performed.
pub fn random_collapsible<R: Rng>(
    rng: &mut R,
    expansions: usize,
    max_vertices: u32,
    max_dim: usize,
) -> (Complex, CollapseSequence) {
    let expansions = expansions.min(MAX_EXPANSIONS);
    let mut simplices: BTreeSet<Simplex> = BTreeSet::from([Simplex::vertex(0)]);
    let mut vertex_count: u32 = 1;
    let mut pairs: Vec<(Simplex, Simplex)> = Vec::new();
    let mut attempts = 0;
    while pairs.len() < expansions && attempts < expansions * 200 {
        attempts += 1;
        let base = simplices
            .iter()
            .nth(rng.gen_range(0..simplices.len()))
            .expect("nonempty")
            .clone();
        if base.len() > max_dim {
            continue;
        }
        let fresh = vertex_count < max_vertices && rng.gen_bool(0.25);
        let v = if fresh {
            vertex_count
        } else {
            rng.gen_range(0..vertex_count)
        };
        let Some(alpha) = base.with_vertex(v) else {
            continue;
        };
        if simplices.contains(&alpha) {
            continue;
        }
        let mut missing: Vec<Simplex> = alpha
            .facets()
            .map(|(_, f)| f)
            .filter(|f| !simplices.contains(f))
            .collect();
        if missing.len() != 1 {
            continue;
        }
        let beta = missing.pop().expect("one missing facet");
        if fresh {
            vertex_count += 1;
        }
        simplices.insert(beta.clone());
        simplices.insert(alpha.clone());
        pairs.push((beta, alpha));
    }
    let complex = Complex::from_simplices(simplices).expect("expansions keep the family closed");
    let steps = pairs
        .into_iter()
        .rev()
        .map(|(beta, alpha)| CollapseStep::primitive(beta, alpha))
        .collect();
    let terminal = Complex::from_facets([Simplex::vertex(0)]);
    (complex, CollapseSequence { steps, terminal })
}

/// A uniformly random permutation of `0..n`.
pub fn random_permutation<R: Rng>(rng: &mut R, n: usize) -> Permutation {
    let mut images: Vec<VertexId> = (0..n as VertexId).collect();
    images.shuffle(rng);
    Permutation::new(images).expect("shuffle of the identity")
}

/// A random permutation of `0..n` of order exactly `p`: one or more disjoint
/// `p`-cycles on random points. `None` when `n < p`.
pub fn random_order_p_permutation<R: Rng>(rng: &mut R, n: usize, p: usize) -> Option<Permutation> {
    if p < 2 || n < p {
        return None;
    }
    let mut points: Vec<VertexId> = (0..n as VertexId).collect();
    points.shuffle(rng);
    let cycles = rng.gen_range(1..=n / p);
    let cycles: Vec<Vec<VertexId>> = points.chunks_exact(p).take(cycles).map(<[_]>::to_vec).collect();
    Some(Permutation::from_cycles(n, &cycles).expect("disjoint cycles"))
}

/// The smallest complex containing `c` that `f` maps to itself: the union of
/// the images of `c` under the powers of `f`.
pub fn symmetrize(c: &Complex, f: &Permutation) -> Complex {
    let g = PermGroup::cyclic(f);
    let images: BTreeSet<Simplex> = c
        .facets()
        .iter()
        .flat_map(|s| g.elements().iter().map(move |h| h.apply_simplex(s)))
        .collect();
    Complex::from_facets(images)
}

/// A cone over a random complex made symmetric under a random permutation,
/// together with that permutation extended to fix the apex.
///
/// The base lives on `0..n` with `n <= base_vertices`; the apex is `n`. With
/// `order = Some(p)` the permutation has order `p` (falling back to a
/// uniformly random one when `n < p`).
pub fn symmetric_cone<R: Rng>(
    rng: &mut R,
    base_vertices: u32,
    max_dim: usize,
    order: Option<usize>,
) -> (Complex, Permutation) {
    let base = random_complex(rng, base_vertices, max_dim);
    let n = base.vertex_count();
    let f = order
        .and_then(|p| random_order_p_permutation(rng, n, p))
        .unwrap_or_else(|| random_permutation(rng, n));
    let sym = symmetrize(&base, &f);
    let apex = n as VertexId;
    let complex = cone(apex, &sym).expect("apex is a fresh vertex");
    (complex, f.extended(n + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::is_automorphism;
    use crate::collapse::verify_sequence;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn collapsible_certificates_replay() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let (c, seq) = random_collapsible(&mut rng, 40, 10, 4);
            assert!(verify_sequence(&c, &seq));
            assert!(c.vertex_count() <= 10);
            assert!(c.dim().unwrap() <= 4);
        }
    }

    #[test]
    fn expansions_reach_higher_dimensions() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let top = (0..10)
            .map(|_| random_collapsible(&mut rng, 80, 10, 4).0.dim().unwrap())
            .max()
            .unwrap();
        assert!(top >= 2);
    }

    #[test]
    fn random_complexes_respect_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let c = random_complex(&mut rng, 12, 4);
            assert!(c.vertex_count() <= 12);
            assert!(c.dim().unwrap() <= 4);
        }
    }

    #[test]
    fn symmetric_cones_carry_their_automorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for i in 0..20 {
            let order = if i % 2 == 0 { Some(3) } else { None };
            let (c, f) = symmetric_cone(&mut rng, 6, 2, order);
            assert!(is_automorphism(&c, &f).unwrap());
            let apex = c.vertices().last().copied().unwrap();
            assert_eq!(f.apply(apex), apex);
        }
    }

    #[test]
    fn order_p_permutations() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for p in [2usize, 3, 5] {
            let f = random_order_p_permutation(&mut rng, 7, p).unwrap();
            assert_eq!(f.order(), p as u64);
        }
        assert!(random_order_p_permutation(&mut rng, 2, 3).is_none());
    }
}
