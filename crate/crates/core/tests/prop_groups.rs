use lgkappa::groups::{
    order_boost, separating_hom, FiniteGroup, FreeGroupWord, GroupAssignment, Signed,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn signed(vars: u32) -> impl Strategy<Value = Signed> {
    (0..vars, any::<bool>()).prop_map(|(var, inv)| Signed { var, inv })
}

fn free_word(vars: u32, max: usize) -> impl Strategy<Value = FreeGroupWord> {
    prop::collection::vec(signed(vars), 0..=max).prop_map(FreeGroupWord)
}

/// Cancels adjacent inverse pairs at random positions until none remain.
fn random_reduce(w: &FreeGroupWord, seed: u64) -> FreeGroupWord {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v = w.0.clone();
    loop {
        let spots: Vec<usize> = (0..v.len().saturating_sub(1))
            .filter(|&i| v[i + 1] == v[i].inverse())
            .collect();
        if spots.is_empty() {
            return FreeGroupWord(v);
        }
        let i = spots[rng.gen_range(0..spots.len())];
        v.drain(i..i + 2);
    }
}

fn sym3_assignment(images: &[usize]) -> GroupAssignment {
    let g = FiniteGroup::symmetric(3);
    let els = g.elements().unwrap().to_vec();
    GroupAssignment {
        images: images.iter().map(|&i| els[i % els.len()].clone()).collect(),
        group: g,
    }
}

proptest! {
    #[test]
    fn reduction_is_confluent(w in free_word(3, 10), seed in any::<u64>()) {
        let r = w.reduce();
        prop_assert!(r.is_reduced());
        prop_assert_eq!(r.reduce(), r.clone());
        prop_assert_eq!(random_reduce(&w, seed), r);
    }

    #[test]
    fn assignments_extend_to_homomorphisms(a in free_word(3, 6), b in free_word(3, 6), img in prop::collection::vec(0usize..6, 3)) {
        let eta = sym3_assignment(&img);
        prop_assert_eq!(eta.eval(&a.concat(&b)), eta.eval(&a).then(&eta.eval(&b)));
        prop_assert_eq!(eta.eval(&a.inverse()), eta.eval(&a).inverse());
    }

    #[test]
    fn separating_hom_separates(w in free_word(3, 10), boost in 1usize..7) {
        let r = w.reduce();
        prop_assume!(!r.is_empty());
        let eta = separating_hom(&r, 3).unwrap();
        prop_assert!(!eta.eval(&r).is_identity());
        let boosted = order_boost(&eta, boost).unwrap();
        prop_assert!(!boosted.eval(&r).is_identity());
        for v in 0..3 {
            prop_assert!(boosted.image(v).order() >= boost as u64);
        }
    }
}

#[test]
fn element_orders_divide_group_order() {
    for g in [
        FiniteGroup::cyclic(6),
        FiniteGroup::symmetric(4),
        FiniteGroup::cyclic(12),
    ] {
        let n = g.order().unwrap() as u64;
        for x in g.elements().unwrap() {
            assert_eq!(n % g.element_order(x), 0);
        }
    }
}
