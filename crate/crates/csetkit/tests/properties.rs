//! Property tests over seeded random C-sets.

mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use std::sync::Arc;

use csetkit::category::Category;
use csetkit::cset::{random_cset, CSet};
use csetkit::examples;

fn base_for(index: u8) -> Arc<Category> {
    match index % 5 {
        0 => examples::arrow(),
        1 => examples::path(),
        2 => examples::loop_cat(),
        3 => examples::delooping_cyclic(2),
        _ => examples::delooping_klein(),
    }
}

fn seeded(base: &Arc<Category>, seed: u64) -> CSet {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    random_cset(base, 3, &mut rng)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn generated_is_contained_in_orbit(which in 0u8..5, seed in any::<u64>()) {
        let cset = seeded(&base_for(which), seed);
        for e in cset.elements() {
            prop_assert!(cset.generated_subset(e).is_contained_in(&cset.walk_orbit(e)));
        }
    }

    #[test]
    fn orbit_is_the_component_containing_the_element(which in 0u8..5, seed in any::<u64>()) {
        let cset = seeded(&base_for(which), seed);
        let parts = cset.decompose();
        let sets = common::component_element_sets(&cset, &parts);
        for e in cset.elements() {
            let orbit = cset.walk_orbit(e);
            let as_set: std::collections::BTreeSet<(usize, usize)> = cset
                .base()
                .objects()
                .flat_map(|x| {
                    orbit.sets()[x.index()]
                        .iter()
                        .map(move |&i| (x.index(), i))
                        .collect::<Vec<_>>()
                })
                .collect();
            let home = sets
                .iter()
                .find(|set| set.contains(&(e.at.index(), e.index)))
                .expect("every element lies in a component");
            prop_assert_eq!(&as_set, home);
        }
    }

    #[test]
    fn decomposition_components_are_indecomposable_and_reassemble(
        which in 0u8..5,
        seed in any::<u64>(),
    ) {
        let cset = seeded(&base_for(which), seed);
        let parts = cset.decompose();
        for part in &parts {
            prop_assert!(part.is_indecomposable());
        }
        match parts.split_first() {
            None => prop_assert!(cset.is_empty()),
            Some((first, rest)) => {
                let mut rebuilt = first.clone();
                for part in rest {
                    rebuilt = rebuilt.disjoint_union(part).unwrap();
                }
                prop_assert!(rebuilt.isomorphism(&cset).unwrap().is_some());
            }
        }
    }

    #[test]
    fn decomposition_is_permutation_stable(which in 0u8..5, seed in any::<u64>()) {
        // Uniqueness up to order: the multiset of class sizes from two
        // different assembly orders matches, and matching components are
        // isomorphic.
        let a = seeded(&base_for(which), seed);
        let b = seeded(&base_for(which), seed.wrapping_add(1));
        let ab = a.disjoint_union(&b).unwrap();
        let ba = b.disjoint_union(&a).unwrap();
        let mut parts_ab = ab.decompose();
        let mut parts_ba = ba.decompose();
        prop_assert_eq!(parts_ab.len(), parts_ba.len());
        // Greedy matching up to isomorphism.
        while let Some(part) = parts_ab.pop() {
            let hit = parts_ba
                .iter()
                .position(|other| part.isomorphism(other).unwrap().is_some());
            prop_assert!(hit.is_some(), "no isomorphic partner for a component");
            parts_ba.remove(hit.unwrap());
        }
        prop_assert!(parts_ba.is_empty());
    }

    #[test]
    fn simple_implies_indecomposable(which in 0u8..5, seed in any::<u64>()) {
        let cset = seeded(&base_for(which), seed);
        if !cset.is_empty() && cset.is_simple().unwrap() {
            prop_assert!(cset.is_indecomposable());
        }
    }

    #[test]
    fn groupoid_bases_equate_simple_and_indecomposable(which in 3u8..5, seed in any::<u64>()) {
        // Over the delooping bases, simplicity and indecomposability
        // coincide for non-empty C-sets.
        let cset = seeded(&base_for(which), seed);
        if !cset.is_empty() {
            prop_assert_eq!(cset.is_simple().unwrap(), cset.is_indecomposable());
        }
    }

    #[test]
    fn isomorphism_is_an_equivalence_on_relabelings(seed in any::<u64>()) {
        let base = examples::path();
        let a = seeded(&base, seed);
        // Reflexive.
        let id = a.isomorphism(&a).unwrap().expect("identity relabeling");
        prop_assert!(id.is_bijective());
        // Symmetric and transitive through a shuffled relabeling.
        let relabeled = {
            let carriers = base
                .objects()
                .map(|x| {
                    a.carrier(x)
                        .iter()
                        .map(|t| format!("r:{t}"))
                        .collect::<Vec<_>>()
                })
                .collect::<Vec<_>>();
            let actions = base.morphisms().map(|m| a.action(m).to_vec()).collect();
            CSet::new(base.clone(), carriers, actions).unwrap()
        };
        let fwd = a.isomorphism(&relabeled).unwrap().expect("relabeling is an iso");
        let back = fwd.inverted().expect("bijective");
        let round = fwd.then(&back).unwrap();
        prop_assert!(round.is_bijective());
        let identity = csetkit::cset::NatTrans::identity(&a);
        prop_assert_eq!(round.components(), identity.components());
    }

    #[test]
    fn subfunctor_count_for_simple_csets_is_two(seed in any::<u64>()) {
        let base = examples::delooping_cyclic(3);
        let cset = seeded(&base, seed);
        if !cset.is_empty() && cset.total_size() <= 12 {
            let count = cset.subfunctors(12).unwrap().len();
            prop_assert_eq!(cset.is_simple().unwrap(), count == 2);
        }
    }
}

/// The library's exhaustive functorial search agrees with a direct count
/// of all functions over the arrow category.
#[test]
fn enumerator_matches_direct_function_count() {
    let arrow = examples::arrow();
    let direct = common::all_arrow_csets(&arrow, 6).len();
    let searched = common::all_csets_up_to(&arrow, 6).len();
    assert_eq!(direct, searched);
}
