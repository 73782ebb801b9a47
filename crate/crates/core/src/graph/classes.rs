use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{EdgeUniverse, PropertyOracle};
use crate::error::{Error, Result};

/// Largest universe for which isomorphism classes are enumerated.
pub const CLASS_EDGE_LIMIT: usize = 16;

/// Isomorphism classes of graphs in a universe, under its symmetry group.
///
/// A monotone invariant property is the same thing as an up-closed set of
/// classes, where a class lies below another when adding one edge to a
/// representative of the first can give a member of the second.
#[derive(Clone, Debug)]
pub struct GraphClasses {
    universe: EdgeUniverse,
    class_of: Vec<u32>,
    reps: Vec<u64>,
    covers: Vec<Vec<u32>>,
}

impl GraphClasses {
    pub fn new(universe: EdgeUniverse) -> Result<Self> {
        let m = universe.len();
        if m > CLASS_EDGE_LIMIT {
            return Err(Error::UniverseTooLarge {
                edges: m,
                limit: CLASS_EDGE_LIMIT,
            });
        }
        let perms = universe
            .symmetry_elements()
            .iter()
            .map(|g| universe.edge_permutation(g))
            .collect::<Result<Vec<_>>>()?;
        let total = 1usize << m;
        let mut raw = vec![u32::MAX; total];
        let mut reps: Vec<u64> = Vec::new();
        for mask in 0..total as u64 {
            if raw[mask as usize] != u32::MAX {
                continue;
            }
            let id = reps.len() as u32;
            reps.push(mask);
            for p in &perms {
                raw[EdgeUniverse::permute_mask(mask, p) as usize] = id;
            }
        }
        // renumber by (edge count, least member)
        let mut order: Vec<u32> = (0..reps.len() as u32).collect();
        order.sort_by_key(|&c| (reps[c as usize].count_ones(), reps[c as usize]));
        let mut rename = vec![0u32; reps.len()];
        for (new, &old) in order.iter().enumerate() {
            rename[old as usize] = new as u32;
        }
        let class_of: Vec<u32> = raw.iter().map(|&c| rename[c as usize]).collect();
        let reps: Vec<u64> = order.iter().map(|&c| reps[c as usize]).collect();
        let covers = reps
            .iter()
            .map(|&r| {
                let mut up: Vec<u32> = (0..m)
                    .filter(|e| r >> e & 1 == 0)
                    .map(|e| class_of[(r | 1 << e) as usize])
                    .collect();
                up.sort_unstable();
                up.dedup();
                up
            })
            .collect();
        Ok(Self {
            universe,
            class_of,
            reps,
            covers,
        })
    }

    pub fn universe(&self) -> &EdgeUniverse {
        &self.universe
    }

    /// Number of classes.
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Least edge set in class `c`.
    pub fn representative(&self, c: usize) -> u64 {
        self.reps[c]
    }

    pub fn class_of(&self, mask: u64) -> usize {
        self.class_of[mask as usize] as usize
    }

    /// Smallest up-closed class set containing `seeds`.
    pub fn up_closure(&self, seeds: &[usize]) -> Vec<bool> {
        let mut member = vec![false; self.len()];
        let mut stack: Vec<usize> = seeds.to_vec();
        while let Some(c) = stack.pop() {
            if std::mem::replace(&mut member[c], true) {
                continue;
            }
            stack.extend(self.covers[c].iter().map(|&d| d as usize));
        }
        member
    }

    /// Calls `f` on every up-closed class set, including the empty and full
    /// ones.
    pub fn for_each_up_set(&self, mut f: impl FnMut(&[bool])) {
        // classes are numbered by edge count, so deciding from the top class
        // down settles every cover before the classes below it
        fn down(gc: &GraphClasses, c: usize, member: &mut Vec<bool>, f: &mut dyn FnMut(&[bool])) {
            if c == 0 {
                f(member);
                return;
            }
            let here = c - 1;
            down(gc, here, member, f);
            if gc.covers[here].iter().all(|&d| member[d as usize]) {
                member[here] = true;
                down(gc, here, member, f);
                member[here] = false;
            }
        }
        let mut member = vec![false; self.len()];
        down(self, self.len(), &mut member, &mut f);
    }

    /// Distinct up-closed class sets other than the empty and full ones, drawn
    /// as up-closures of one to four random classes.
    pub fn sample_nontrivial_up_sets(&self, count: usize, seed: u64) -> Vec<Vec<bool>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ids: Vec<usize> = (0..self.len()).collect();
        let mut seen: HashSet<Vec<bool>> = HashSet::new();
        let mut out = Vec::new();
        let mut attempts = 0;
        while out.len() < count && attempts < count * 1000 {
            attempts += 1;
            let k = rng.gen_range(1..=4usize.min(self.len()));
            let seeds: Vec<usize> = ids.choose_multiple(&mut rng, k).copied().collect();
            let set = self.up_closure(&seeds);
            if Self::is_trivial_set(&set) || !seen.insert(set.clone()) {
                continue;
            }
            out.push(set);
        }
        out
    }

    /// True for the empty and the full class set.
    pub fn is_trivial_set(members: &[bool]) -> bool {
        members.iter().all(|&b| b) || members.iter().all(|&b| !b)
    }

    /// The property holding exactly on the listed classes.
    pub fn oracle(&self, members: &[bool], name: impl Into<String>) -> PropertyOracle {
        let table: Vec<bool> = self.class_of.iter().map(|&c| members[c as usize]).collect();
        PropertyOracle::from_table(name, self.universe.clone(), table, true, true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count_up_sets(gc: &GraphClasses) -> usize {
        let mut n = 0;
        gc.for_each_up_set(|_| n += 1);
        n
    }

    #[test]
    fn class_counts() {
        let sizes: Vec<usize> = (1..=5)
            .map(|n| GraphClasses::new(EdgeUniverse::complete(n).unwrap()).unwrap().len())
            .collect();
        assert_eq!(sizes, vec![1, 2, 4, 11, 34]);
    }

    #[test]
    fn up_sets_on_three_vertices_form_a_chain() {
        let gc = GraphClasses::new(EdgeUniverse::complete(3).unwrap()).unwrap();
        assert_eq!(count_up_sets(&gc), 5);
    }

    #[test]
    fn up_sets_match_brute_force() {
        let gc = GraphClasses::new(EdgeUniverse::complete(4).unwrap()).unwrap();
        let brute = (0u32..1 << gc.len())
            .filter(|s| (0..gc.len()).all(|c| s >> c & 1 == 0 || gc.covers[c].iter().all(|&d| s >> d & 1 == 1)))
            .count();
        assert_eq!(count_up_sets(&gc), brute);
    }

    #[test]
    fn sampling_is_deterministic() {
        let gc = GraphClasses::new(EdgeUniverse::complete(5).unwrap()).unwrap();
        let a = gc.sample_nontrivial_up_sets(20, 7);
        let b = gc.sample_nontrivial_up_sets(20, 7);
        assert_eq!(a, b);
        assert_eq!(a.len(), 20);
    }
}
