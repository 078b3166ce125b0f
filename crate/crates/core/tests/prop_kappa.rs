mod common;

use common::*;
use lgkappa::kappa::{
    canonicalize_rank1, evaluate, is_canonical_rank1, random_rank1_term, Rank1Form, Term,
};
use lgkappa::localgroups::TableSemigroup;
use lgkappa::words::{is_lyndon, Alphabet, Word};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_term(seed: u64, alphabet: &Alphabet) -> Term {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let blocks = rng.gen_range(1..=3);
    random_rank1_term(&mut rng, alphabet, blocks, 4, 3, 4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn printing_round_trips(seed in any::<u64>()) {
        let t = random_term(seed, &alpha("abc"));
        prop_assert_eq!(Term::parse(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn canonical_forms_are_fixpoints(seed in any::<u64>(), three in any::<bool>()) {
        let a = if three { alpha("abc") } else { alpha("ab") };
        let t = random_term(seed, &a);
        let (c, trace) = canonicalize_rank1(&t, &a).unwrap();
        prop_assert!(is_canonical_rank1(&c, &a).unwrap());
        for b in Rank1Form::from_term(&c).unwrap().blocks {
            prop_assert!(is_lyndon(b.x.letters(), &a).unwrap());
        }
        let (again, second) = canonicalize_rank1(&c, &a).unwrap();
        prop_assert_eq!(&again, &c);
        prop_assert!(second.steps.is_empty());
        let reparsed = Term::parse(&c.to_string()).unwrap();
        prop_assert_eq!(canonicalize_rank1(&reparsed, &a).unwrap().0, c);
        for s in &trace.steps {
            prop_assert!(s.is_valid_instance(), "{:?}: {} -> {}", s.kind, s.before, s.after);
        }
    }

    #[test]
    fn canonicalization_preserves_values(seed in any::<u64>(), asg in prop::collection::vec(0usize..27, 2)) {
        let a = alpha("ab");
        let t = random_term(seed, &a);
        let (c, _) = canonicalize_rank1(&t, &a).unwrap();
        let t3 = TableSemigroup::full_transformations(3);
        let look = |l: u8| Some(asg[(l - b'a') as usize]);
        prop_assert_eq!(evaluate(&t, &t3, &look).unwrap(), evaluate(&c, &t3, &look).unwrap());
    }
}

/// `x^N u y^N` with `N` large enough that a central window pins down the bi-infinite word.
fn window(x: &Word, u: &Word, y: &Word, n: usize) -> Word {
    x.pow(n).concat(u).concat(&y.pow(n))
}

#[test]
fn distinct_crucial_portions_give_distinct_bi_infinite_words() {
    let ab = alpha("ab");
    let mut triples: Vec<(Word, Word, Word)> = Vec::new();
    for seed in 0..400 {
        let (c, _) = canonicalize_rank1(&random_term(seed, &ab), &ab).unwrap();
        let f = Rank1Form::from_term(&c).unwrap();
        for pair in f.blocks.windows(2) {
            let t = (pair[0].x.clone(), pair[0].u.clone(), pair[1].x.clone());
            if !triples.contains(&t) {
                triples.push(t);
            }
        }
    }
    assert!(triples.len() > 20);
    for (x, u, y) in &triples {
        for (x2, u2, y2) in &triples {
            let m = 2 * (x.len() + y.len() + x2.len() + y2.len() + u.len() + u2.len());
            let core = window(x2, u2, y2, m.div_ceil(x2.len().min(y2.len())));
            let big = window(x, u, y, 3 * core.len());
            let found = big
                .letters()
                .windows(core.len())
                .any(|w| w == core.letters());
            assert_eq!(
                found,
                (x, u, y) == (x2, u2, y2),
                "{x} {u} {y} vs {x2} {u2} {y2}"
            );
        }
    }
}
