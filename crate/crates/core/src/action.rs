//! Permutation groups acting on complexes: invariant simplices, orbit
//! quotients and the induced action on a barycentric subdivision.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::complex::{barycentric_subdivision, BarDictionary, Complex};
use crate::error::{Error, Result};
use crate::perm::{PermGroup, Permutation, DEFAULT_GROUP_CAP};
use crate::simplex::{Simplex, VertexId};

fn check_domain(c: &Complex, degree: usize) -> Result<()> {
    match c.vertices().last() {
        Some(&v) if v as usize >= degree => Err(Error::DomainMismatch(format!(
            "vertex {v} lies outside a permutation domain of size {degree}"
        ))),
        _ => Ok(()),
    }
}

/// True when `f` maps every simplex of `c` to a simplex of `c`.
pub fn is_automorphism(c: &Complex, f: &Permutation) -> Result<bool> {
    check_domain(c, f.degree())?;
    Ok(c.simplices().all(|s| c.contains(&f.apply_simplex(s))))
}

/// Simplices mapped to themselves (as sets) by every given permutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedSet {
    pub simplices: Vec<Simplex>,
    /// True when the family is closed under taking faces.
    pub is_subcomplex: bool,
}

impl FixedSet {
    /// The fixed family as a complex, when it is one.
    pub fn as_complex(&self) -> Option<Complex> {
        self.is_subcomplex
            .then(|| Complex::from_simplices(self.simplices.clone()).expect("closed"))
    }

    pub fn euler_characteristic(&self) -> i64 {
        crate::complex::euler_characteristic(&self.simplices)
    }
}

/// Invariant simplices of `c` under the group generated by `perms`.
pub fn fixed_set(c: &Complex, perms: &[Permutation]) -> Result<FixedSet> {
    for f in perms {
        check_domain(c, f.degree())?;
    }
    let simplices: Vec<Simplex> = c
        .simplices()
        .filter(|s| perms.iter().all(|f| &f.apply_simplex(s) == *s))
        .cloned()
        .collect();
    let is_subcomplex = Complex::is_closed_family(&simplices);
    Ok(FixedSet {
        simplices,
        is_subcomplex,
    })
}

/// The orbit complex: its vertices are the orbits of the group on the vertices
/// of `c`, and a set of orbits is a simplex when their union is a simplex of
/// `c`.
#[derive(Clone, Debug, Serialize)]
pub struct QuotientComplex {
    /// Orbit `i` is quotient vertex `i`; orbits are sorted and ordered by least
    /// element.
    pub orbits: Vec<Vec<VertexId>>,
    pub complex: Complex,
}

impl QuotientComplex {
    /// Union of the orbits making up a quotient simplex.
    pub fn lift(&self, t: &Simplex) -> Simplex {
        Simplex::new(
            t.vertices()
                .iter()
                .flat_map(|&i| self.orbits[i as usize].iter().copied()),
        )
        .expect("orbits are disjoint")
    }
}

pub fn quotient_complex(c: &Complex, g: &PermGroup) -> Result<QuotientComplex> {
    check_domain(c, g.degree())?;
    let orbits = g.orbits(&c.vertices());
    let orbit_of: HashMap<VertexId, VertexId> = orbits
        .iter()
        .enumerate()
        .flat_map(|(i, o)| o.iter().map(move |&v| (v, i as VertexId)))
        .collect();
    // a union of orbits is exactly an invariant simplex
    let invariant = fixed_set(c, g.generators())?;
    let simplices: BTreeSet<Simplex> = invariant
        .simplices
        .iter()
        .map(|s| Simplex::new(s.vertices().iter().map(|v| orbit_of[v]).collect::<BTreeSet<_>>()).expect("nonempty"))
        .collect();
    Ok(QuotientComplex {
        orbits,
        complex: Complex::from_simplices(simplices)?,
    })
}

/// The permutation of subdivision vertices induced by an automorphism of `c`.
pub fn bar_action(c: &Complex, f: &Permutation, dict: &BarDictionary) -> Result<Permutation> {
    if !is_automorphism(c, f)? {
        return Err(Error::NotAnIsomorphism(format!("{f} is not an automorphism")));
    }
    let images = (0..dict.len() as VertexId)
        .map(|v| {
            let s = dict.simplex_of(v).expect("dictionary entry");
            dict.vertex_of(&f.apply_simplex(s)).expect("automorphism")
        })
        .collect();
    Permutation::new(images)
}

/// The group generated by the induced actions of the generators of `g`.
pub fn bar_group(c: &Complex, g: &PermGroup, dict: &BarDictionary) -> Result<PermGroup> {
    let gens = g
        .generators()
        .iter()
        .map(|f| bar_action(c, f, dict))
        .collect::<Result<Vec<_>>>()?;
    PermGroup::from_generators(dict.len(), &gens, DEFAULT_GROUP_CAP)
}

/// Checks that the subdivision of the orbit complex is isomorphic to the
/// invariant subcomplex of the subdivision, via the map sending a chain of
/// orbit sets to the chain of their unions.
pub fn verify_bar_quotient_iso(c: &Complex, g: &PermGroup) -> Result<bool> {
    let quotient = quotient_complex(c, g)?;
    let (bar_q, dict_q) = barycentric_subdivision(&quotient.complex);
    let (bar_c, dict_c) = barycentric_subdivision(c);
    let h = bar_group(c, g, &dict_c)?;
    let fixed = fixed_set(&bar_c, h.generators())?;
    let Some(fixed) = fixed.as_complex() else {
        return Ok(false);
    };
    let map: HashMap<VertexId, VertexId> = dict_q
        .entries()
        .map(|(v, t)| (v, dict_c.vertex_of(&quotient.lift(t)).expect("lift lies in c")))
        .collect();
    let images: BTreeSet<Simplex> = bar_q
        .simplices()
        .map(|s| Simplex::new(s.vertices().iter().map(|v| map[v])))
        .collect::<Result<_>>()
        .map_err(|_| Error::NotAnIsomorphism("orbit chain map is not injective".into()))?;
    Ok(images.len() == bar_q.len() && images.len() == fixed.len() && images.iter().all(|s| fixed.contains(s)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::two_triangles;
    use crate::simplex;

    fn perm(s: &str, n: usize) -> Permutation {
        Permutation::parse_cycles(s, Some(n)).unwrap()
    }

    #[test]
    fn reflection_through_shared_edge() {
        let c = two_triangles();
        let f = perm("(1 3)", 4);
        assert!(is_automorphism(&c, &f).unwrap());
        let fixed = fixed_set(&c, &[f]).unwrap();
        assert!(fixed.is_subcomplex);
        assert_eq!(fixed.simplices, vec![simplex![0], simplex![2], simplex![0, 2]]);
    }

    #[test]
    fn swap_along_shared_edge_fixes_a_non_subcomplex() {
        let c = two_triangles();
        let f = perm("(0 2)", 4);
        assert!(is_automorphism(&c, &f).unwrap());
        let fixed = fixed_set(&c, std::slice::from_ref(&f)).unwrap();
        assert!(!fixed.is_subcomplex);
        assert!(fixed.simplices.contains(&simplex![0, 2]));
        assert!(!fixed.simplices.contains(&simplex![0]));

        let q = quotient_complex(&c, &PermGroup::cyclic(&f)).unwrap();
        assert_eq!(q.orbits, vec![vec![0, 2], vec![1], vec![3]]);
        assert_eq!(q.complex.vertex_count(), 3);
        assert_eq!(q.complex.count_of_dim(1), 2);
        assert_eq!(q.complex.dim(), Some(1));
    }

    #[test]
    fn domain_and_automorphism_errors() {
        let c = two_triangles();
        assert!(matches!(
            is_automorphism(&c, &perm("(0 1)", 2)),
            Err(Error::DomainMismatch(_))
        ));
        assert!(!is_automorphism(&c, &perm("(0 1)", 4)).unwrap());
        let (_, dict) = barycentric_subdivision(&c);
        assert!(bar_action(&c, &perm("(0 1)", 4), &dict).is_err());
    }

    #[test]
    fn subdivided_fixed_sets_are_subcomplexes() {
        let c = two_triangles();
        let f = perm("(0 2)", 4);
        let (bar, dict) = barycentric_subdivision(&c);
        let g = bar_action(&c, &f, &dict).unwrap();
        assert!(is_automorphism(&bar, &g).unwrap());
        assert!(fixed_set(&bar, &[g]).unwrap().is_subcomplex);
        assert!(verify_bar_quotient_iso(&c, &PermGroup::cyclic(&f)).unwrap());
    }
}
