//! The finite field `GF(p^k)` for `p^k <= 64` and the affine group
//! `x -> a x + b` acting on it.
//!
//! Field elements are the integers `0..p^k`, read as little-endian base-`p`
//! digit vectors, i.e. polynomials in the adjoined root.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::is_prime;
use crate::perm::{PermGroup, Permutation, DEFAULT_GROUP_CAP};
use crate::simplex::VertexId;

/// Largest field order supported.
pub const MAX_FIELD_ORDER: u64 = 64;

/// Monic irreducible polynomials: `(p, k, lower coefficients, constant first)`.
const IRREDUCIBLE: &[(u64, u32, &[u64])] = &[
    (2, 2, &[1, 1]),
    (2, 3, &[1, 1, 0]),
    (2, 4, &[1, 1, 0, 0]),
    (2, 5, &[1, 0, 1, 0, 0]),
    (2, 6, &[1, 1, 0, 0, 0, 0]),
    (3, 2, &[1, 0]),
    (3, 3, &[1, 2, 0]),
    (5, 2, &[2, 0]),
    (7, 2, &[1, 0]),
];

/// `GF(p^k)` with precomputed tables.
#[derive(Clone, Debug)]
pub struct GaloisField {
    p: u64,
    k: u32,
    order: usize,
    add: Vec<u32>,
    mul: Vec<u32>,
}

impl GaloisField {
    pub fn new(p: u64, k: u32) -> Result<Self> {
        if !is_prime(p) || k == 0 {
            return Err(Error::OutOfRange {
                what: "field parameters",
                detail: format!("need a prime p and k >= 1, got p = {p}, k = {k}"),
            });
        }
        let order = p
            .checked_pow(k)
            .filter(|&q| q <= MAX_FIELD_ORDER)
            .ok_or(Error::NoIrreduciblePolynomial { p, k })?;
        let modulus: Vec<u64> = if k == 1 {
            vec![0]
        } else {
            IRREDUCIBLE
                .iter()
                .find(|(pp, kk, _)| *pp == p && *kk == k)
                .map(|(_, _, c)| c.to_vec())
                .ok_or(Error::NoIrreduciblePolynomial { p, k })?
        };
        let q = order as usize;
        let digits = |x: usize| -> Vec<u64> {
            let mut d = Vec::with_capacity(k as usize);
            let mut x = x as u64;
            for _ in 0..k {
                d.push(x % p);
                x /= p;
            }
            d
        };
        let encode = |d: &[u64]| -> u32 { d.iter().rev().fold(0u64, |acc, &x| acc * p + x) as u32 };
        let mut add = vec![0u32; q * q];
        let mut mul = vec![0u32; q * q];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let sum: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = encode(&sum);
                // schoolbook product, then reduce with x^k = -(lower terms)
                let mut prod = vec![0u64; 2 * k as usize];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                for top in (k as usize..prod.len()).rev() {
                    let c = prod[top];
                    if c == 0 {
                        continue;
                    }
                    prod[top] = 0;
                    for (i, &m) in modulus.iter().enumerate() {
                        let shift = top - k as usize + i;
                        prod[shift] = (prod[shift] + p - c * m % p) % p;
                    }
                }
                mul[a * q + b] = encode(&prod[..k as usize]);
            }
        }
        Ok(Self {
            p,
            k,
            order: q,
            add,
            mul,
        })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[a as usize * self.order + b as usize]
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.order + b as usize]
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: u32) -> usize {
        assert!(a != 0);
        let mut x = a;
        let mut n = 1;
        while x != 1 {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    /// Least element generating the multiplicative group.
    pub fn primitive_element(&self) -> u32 {
        (1..self.order as u32)
            .find(|&a| self.multiplicative_order(a) == self.order - 1)
            .expect("multiplicative group of a finite field is cyclic")
    }

    /// The map `x -> a x + b` as a permutation of the field elements.
    pub fn affine_map(&self, a: u32, b: u32) -> Permutation {
        assert!(a != 0, "affine maps need an invertible slope");
        Permutation::new((0..self.order as u32).map(|x| self.add(self.mul(a, x), b)).collect())
            .expect("affine maps with nonzero slope are bijective")
    }
}

/// The affine group of `GF(p^k)` and its translation subgroup.
#[derive(Clone, Debug)]
pub struct AffineGroup {
    pub field: GaloisField,
    pub group: PermGroup,
    pub translations: PermGroup,
}

/// Structural facts about the affine group used by the evasiveness argument.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AffineObservations {
    pub p: u64,
    pub k: u32,
    pub group_order: usize,
    pub translation_order: usize,
    pub translations_normal: bool,
    pub quotient_cyclic: bool,
    pub pair_transitive: bool,
}

impl AffineObservations {
    pub fn all_hold(&self) -> bool {
        let q = self.p.pow(self.k) as usize;
        self.translation_order == q
            && self.group_order == q * (q - 1)
            && self.translations_normal
            && self.quotient_cyclic
            && self.pair_transitive
    }
}

pub fn affine_group(p: u64, k: u32) -> Result<AffineGroup> {
    let field = GaloisField::new(p, k)?;
    let q = field.order();
    let basis: Vec<Permutation> = (0..k).map(|i| field.affine_map(1, p.pow(i) as u32)).collect();
    let translations = PermGroup::from_generators(q, &basis, DEFAULT_GROUP_CAP)?;
    let mut gens = basis;
    if q > 2 {
        gens.push(field.affine_map(field.primitive_element(), 0));
    }
    let group = PermGroup::from_generators(q, &gens, DEFAULT_GROUP_CAP)?;
    Ok(AffineGroup {
        field,
        group,
        translations,
    })
}

impl AffineGroup {
    pub fn observations(&self) -> AffineObservations {
        let q = self.field.order();
        let sub: BTreeSet<usize> = self
            .translations
            .elements()
            .iter()
            .map(|t| {
                self.group
                    .elements()
                    .iter()
                    .position(|g| g == t)
                    .expect("translations lie in the group")
            })
            .collect();
        let pairs: HashSet<(VertexId, VertexId)> =
            self.group.elements().iter().map(|g| (g.apply(0), g.apply(1))).collect();
        AffineObservations {
            p: self.field.characteristic(),
            k: self.field.degree(),
            group_order: self.group.order(),
            translation_order: self.translations.order(),
            translations_normal: self.group.is_normal(&sub),
            quotient_cyclic: self.group.quotient_is_cyclic(&sub),
            pair_transitive: pairs.len() == q * (q - 1),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_shipped_polynomial_gives_a_field() {
        let mut cases: Vec<(u64, u32)> = IRREDUCIBLE.iter().map(|(p, k, _)| (*p, *k)).collect();
        cases.extend([(2, 1), (3, 1), (61, 1)]);
        for (p, k) in cases {
            let f = GaloisField::new(p, k).unwrap();
            let q = f.order() as u32;
            for a in 1..q {
                assert!((1..q).any(|b| f.mul(a, b) == 1), "no inverse for {a} in GF({p}^{k})");
            }
            assert_eq!(f.multiplicative_order(f.primitive_element()), q as usize - 1);
        }
    }

    #[test]
    fn gf4_arithmetic() {
        // x^2 = x + 1, with x encoded as 2
        let f = GaloisField::new(2, 2).unwrap();
        assert_eq!(f.mul(2, 2), 3);
        assert_eq!(f.add(2, 3), 1);
    }

    #[test]
    fn unsupported_fields() {
        assert!(matches!(
            GaloisField::new(2, 7),
            Err(Error::NoIrreduciblePolynomial { .. })
        ));
        assert!(GaloisField::new(4, 1).is_err());
    }

    #[test]
    fn affine_observations() {
        for (p, k) in [(2, 1), (3, 1), (2, 2), (5, 1), (3, 2)] {
            let g = affine_group(p, k).unwrap();
            let obs = g.observations();
            assert!(obs.all_hold(), "{obs:?}");
        }
    }
}
