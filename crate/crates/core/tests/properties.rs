use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use evasion_core::action::{bar_action, fixed_set, is_automorphism, quotient_complex};
use evasion_core::chain::{chain_map_commutes, is_acyclic, lefschetz_number, ChainComplex, HomologyReport};
use evasion_core::collapse::verify_sequence;
use evasion_core::dtree::{extract_tree, DtcSolver};
use evasion_core::generate::{random_collapsible, random_complex, random_permutation, symmetric_cone};
use evasion_core::graph::{EdgeUniverse, PropertyOracle};
use evasion_core::perm::PermGroup;
use evasion_core::{barycentric_subdivision, Prime, Simplex};

fn prime_strategy() -> impl Strategy<Value = Prime> {
    prop_oneof![Just(2u64), Just(3), Just(5), Just(7)].prop_map(|p| Prime::new(p).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn boundary_squares_to_zero(seed: u64, p in prime_strategy()) {
        let c = random_complex(&mut ChaCha8Rng::seed_from_u64(seed), 10, 4);
        prop_assert!(ChainComplex::of_complex(&c, p).squares_to_zero());
    }

    #[test]
    fn euler_poincare(seed: u64, p in prime_strategy()) {
        let c = random_complex(&mut ChaCha8Rng::seed_from_u64(seed), 10, 4);
        let reduced = HomologyReport::new(&c, p).reduced_dims;
        let alternating: i64 = reduced
            .iter()
            .enumerate()
            .map(|(n, &b)| if n % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum();
        prop_assert_eq!(alternating + 1, c.euler_characteristic());
    }

    #[test]
    fn subdivision_preserves_euler_characteristic(seed: u64) {
        let c = random_complex(&mut ChaCha8Rng::seed_from_u64(seed), 8, 3);
        let (bar, dict) = barycentric_subdivision(&c);
        prop_assert_eq!(bar.euler_characteristic(), c.euler_characteristic());
        prop_assert_eq!(dict.len(), c.len());
    }

    #[test]
    fn collapsible_complexes_are_acyclic(seed: u64, expansions in 1usize..80, p in prime_strategy()) {
        let (c, seq) = random_collapsible(&mut ChaCha8Rng::seed_from_u64(seed), expansions, 10, 4);
        prop_assert!(verify_sequence(&c, &seq));
        prop_assert!(is_acyclic(&c, p));
    }

    #[test]
    fn automorphisms_induce_chain_maps(seed: u64, p in prime_strategy()) {
        let (c, f) = symmetric_cone(&mut ChaCha8Rng::seed_from_u64(seed), 5, 2, None);
        prop_assert!(is_automorphism(&c, &f).unwrap());
        prop_assert!(chain_map_commutes(&c, &c, |v| f.apply(v), p).unwrap());
        prop_assert_eq!(lefschetz_number(&c, |v| f.apply(v)), 1);
    }

    #[test]
    fn subdivided_fixed_sets_are_subcomplexes(seed: u64) {
        let (c, f) = symmetric_cone(&mut ChaCha8Rng::seed_from_u64(seed), 5, 2, None);
        let (bar, dict) = barycentric_subdivision(&c);
        let g = bar_action(&c, &f, &dict).unwrap();
        prop_assert!(is_automorphism(&bar, &g).unwrap());
        prop_assert!(fixed_set(&bar, &[g]).unwrap().is_subcomplex);
    }

    #[test]
    fn quotient_simplices_lift_to_simplices(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_complex(&mut rng, 7, 3);
        let f = random_permutation(&mut rng, c.vertex_count());
        let g = PermGroup::cyclic(&f);
        let q = quotient_complex(&c, &g).unwrap();
        let orbit_count = q.orbits.len() as u32;
        // every set of orbits is a quotient simplex exactly when its union is in c
        for bits in 1u32..(1 << orbit_count.min(8)) {
            let t = Simplex::new((0..orbit_count).filter(|i| bits >> i & 1 == 1)).unwrap();
            prop_assert_eq!(q.complex.contains(&t), c.contains(&q.lift(&t)));
        }
    }

    #[test]
    fn permutation_order_returns_to_identity(seed: u64, n in 1usize..9) {
        let f = random_permutation(&mut ChaCha8Rng::seed_from_u64(seed), n);
        let order = f.order();
        prop_assert!(f.pow(order).is_identity());
        prop_assert!((1..order).all(|k| !f.pow(k).is_identity()));
        prop_assert!(f.compose(&f.inverse()).is_identity());
    }

    #[test]
    fn optimal_trees_compute_their_function(table in proptest::collection::vec(any::<bool>(), 64)) {
        let universe = EdgeUniverse::complete(4).unwrap();
        let h = PropertyOracle::from_table("random", universe, table, false, false);
        let solver = DtcSolver::new(&h).unwrap();
        let tree = solver.extract_tree();
        prop_assert_eq!(tree.depth(), solver.complexity());
        prop_assert!(tree.computes(&h));
        for leaf in tree.leaves() {
            prop_assert_eq!(leaf.present & leaf.absent, 0);
        }
        prop_assert_eq!(extract_tree(&h).unwrap(), tree);
    }
}
