mod common;

use common::*;
use lgkappa::langdecomp::{FactorialLanguage, Selection};
use lgkappa::words::{Alphabet, Word};
use proptest::prelude::*;

fn languages() -> Vec<FactorialLanguage> {
    let ab = alpha("ab");
    vec![
        FactorialLanguage::closure(ab.clone(), &[w("aaa"), w("aab"), w("bb")])
            .unwrap()
            .0,
        FactorialLanguage::bounded(ab.clone(), 2).unwrap(),
        FactorialLanguage::closure(ab.clone(), &[w("aab"), w("bab")])
            .unwrap()
            .0,
        FactorialLanguage::closure(alpha("abc"), &[w("abc"), w("ca"), w("bb")])
            .unwrap()
            .0,
    ]
}

fn is_factor(u: &Word, v: &Word) -> bool {
    v.letters().windows(u.len()).any(|x| x == u.letters())
}

#[test]
fn boundary_is_an_antichain_and_characterizes_membership() {
    for l in languages() {
        let b = l.boundary();
        for v1 in &b {
            for v2 in &b {
                assert_eq!(is_factor(v1, v2), v1 == v2, "{v1} {v2}");
            }
        }
        for x in l.alphabet().words_up_to(7) {
            assert_eq!(
                l.contains(x.letters()),
                !b.iter().any(|v| is_factor(v, &x)),
                "{x}"
            );
        }
    }
}

fn word_over(a: &Alphabet, max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(prop::sample::select(a.letters().to_vec()), 1..=max)
        .prop_map(Word::from_letters)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn coordinates_round_trip(i in 0usize..4, x in word_over(&alpha("abc"), 14)) {
        let l = &languages()[i];
        let x = Word::from_letters(x.letters().iter().copied().filter(|c| l.alphabet().contains(*c)).collect::<Vec<u8>>());
        prop_assume!(!x.is_empty());
        let sc = l.coordinates(&x).unwrap();
        prop_assert_eq!(l.reconstruct(&sc).unwrap(), x.clone());
        let again = l.coordinates(&l.reconstruct(&sc).unwrap()).unwrap();
        prop_assert_eq!(again.to_vec(), sc.to_vec());
        let scan: Vec<Word> = oracle_coordinates(l, x.letters()).into_iter().map(Word::from_letters).collect();
        prop_assert_eq!(sc.to_vec(), scan);
        for sel in [Selection::Leftmost, Selection::Rightmost] {
            prop_assert_eq!(l.coordinates_recursive(&x, sel).unwrap().to_vec(), sc.to_vec());
        }
    }

    #[test]
    fn ends_are_longest_members(i in 0usize..3, x in word_over(&alpha("ab"), 12)) {
        let l = &languages()[i];
        let sc = l.coordinates(&x).unwrap().to_vec();
        let n = x.len();
        let longest_prefix = (1..=n).rev().find(|&k| l.contains(&x.letters()[..k])).unwrap();
        let longest_suffix = (1..=n).rev().find(|&k| l.contains(&x.letters()[n - k..])).unwrap();
        prop_assert_eq!(sc[0].len(), longest_prefix);
        prop_assert_eq!(sc.last().unwrap().len(), longest_suffix);
    }
}
