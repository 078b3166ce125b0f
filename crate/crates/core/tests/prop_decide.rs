mod common;

use common::*;
use lgkappa::decide::{
    build_test_semigroup5, build_test_semigroup6, decide, replay_certificate, IdentityProblem,
    Variety,
};
use lgkappa::kappa::{canonicalize_rank1, random_rank1_term, Term};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_term(seed: u64) -> Term {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let blocks = rng.gen_range(0..=2);
    random_rank1_term(&mut rng, &alpha("ab"), blocks, 3, 2, 2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn decide_is_reflexive_symmetric_and_invariant(s1 in any::<u64>(), s2 in any::<u64>()) {
        let ab = alpha("ab");
        let (p, r) = (random_term(s1), random_term(s2));
        let (pr, cert) = decide(&p, &r, &ab, Variety::Lg, false).unwrap();
        let (rp, _) = decide(&r, &p, &ab, Variety::S, false).unwrap();
        prop_assert_eq!(pr, rp);
        prop_assert!(decide(&p, &p, &ab, Variety::Lg, false).unwrap().0);
        let cp = canonicalize_rank1(&p, &ab).unwrap().0;
        prop_assert!(decide(&p, &cp, &ab, Variety::Lg, false).unwrap().0);
        let cr = canonicalize_rank1(&r, &ab).unwrap().0;
        prop_assert_eq!(decide(&cp, &cr, &ab, Variety::Lg, false).unwrap().0, pr);
        prop_assert!(replay_certificate(&cert).is_ok());
        let json = serde_json::to_string(&cert).unwrap();
        prop_assert!(replay_certificate(&serde_json::from_str(&json).unwrap()).is_ok());
    }
}

#[test]
fn both_constructions_agree_on_the_corpus() {
    let ab = alpha("ab");
    let corpus = canonical_corpus(5, 22, &ab);
    for p in &corpus {
        for r in &corpus {
            let prob = IdentityProblem::from_canonical(p, r, &ab).unwrap();
            let s5 = build_test_semigroup5(&prob).unwrap();
            let s6 = build_test_semigroup6(&prob).unwrap();
            assert_eq!(s5.separated(), p != r, "{p} / {r}");
            assert!(s5.properties.all_hold(), "{p} / {r}: {:?}", s5.properties);
            assert!(s5.matches_expected() && s6.matches_expected(), "{p} / {r}");
            assert_eq!(s6.words_differ(), s5.separated(), "{p} / {r}");
            assert_eq!(s6.separated(), s5.separated(), "{p} / {r}");
        }
    }
}
