#![allow(dead_code)]

use lgkappa::groups::{FiniteGroup, Perm};
use lgkappa::kappa::{canonicalize_rank1, random_rank1_term, Rank1Form, Term};
use lgkappa::langdecomp::FactorialLanguage;
use lgkappa::localgroups::{random_gfunction, GFunction, LocalGroup, Structure, TableSemigroup};
use lgkappa::words::{Alphabet, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn w(s: &str) -> Word {
    Word::parse(s).unwrap()
}

pub fn alpha(s: &str) -> Alphabet {
    Alphabet::parse(s).unwrap()
}

pub fn t(s: &str) -> Term {
    Term::parse(s).unwrap()
}

/// Coordinates by direct scanning: maximal `L`-factors alternating with the
/// shortest non-member suffixes that end one letter further.
pub fn oracle_coordinates(lang: &FactorialLanguage, w: &[u8]) -> Vec<Vec<u8>> {
    let n = w.len();
    let (mut s, mut e) = (0, 0);
    while e < n && lang.contains(&w[s..=e]) {
        e += 1;
    }
    let mut out = vec![w[s..e].to_vec()];
    while e < n {
        let mut s2 = e;
        while lang.contains(&w[s2..=e]) {
            s2 -= 1;
        }
        out.push(w[s2..=e].to_vec());
        s = s2 + 1;
        e += 1;
        while e < n && lang.contains(&w[s..=e]) {
            e += 1;
        }
        out.push(w[s..e].to_vec());
    }
    out
}

/// Product of `f` over all coordinates.
pub fn oracle_fhat<S: Structure>(s: &LocalGroup<S>, lang: &FactorialLanguage, w: &[u8]) -> Perm {
    let g = s.group();
    if w.is_empty() {
        return g.identity();
    }
    oracle_coordinates(lang, w)
        .iter()
        .fold(g.identity(), |acc, c| {
            g.multiply(&acc, &s.structure().f_value(c).unwrap())
        })
}

pub fn s1() -> LocalGroup<GFunction> {
    let c2 = FiniteGroup::cyclic(2);
    let g = c2.parse_element("g").unwrap();
    let lang = FactorialLanguage::bounded(alpha("a"), 1).unwrap();
    LocalGroup::new(GFunction::from_values(lang, c2, vec![(w("aa"), g)]).unwrap())
}

/// Random `S(G, L, f)` instances with `|L| ≤ max_lang`.
pub fn random_local_groups(
    seed: u64,
    count: usize,
    max_lang: usize,
    groups: &[FiniteGroup],
) -> Vec<LocalGroup<GFunction>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let a = if i % 3 == 2 {
                alpha("abc")
            } else {
                alpha("ab")
            };
            let g = &groups[i % groups.len()];
            LocalGroup::new(random_gfunction(&mut rng, &a, max_lang, 4, g).unwrap())
        })
        .collect()
}

/// The two random members of the evaluation corpus, both over `{a, b}`.
pub fn small_random_pair() -> Vec<LocalGroup<GFunction>> {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    vec![
        LocalGroup::new(
            random_gfunction(&mut rng, &alpha("ab"), 4, 3, &FiniteGroup::cyclic(2)).unwrap(),
        ),
        LocalGroup::new(
            random_gfunction(&mut rng, &alpha("ab"), 3, 2, &FiniteGroup::cyclic(3)).unwrap(),
        ),
    ]
}

/// C₂, C₆, Sym(3), S₁, two random `S(G, L, f)`, and the full transformation monoid on 3 points.
pub fn evaluation_corpus() -> Vec<(String, TableSemigroup)> {
    let mut out = vec![
        (
            "C2".to_string(),
            TableSemigroup::of_group(&FiniteGroup::cyclic(2)).unwrap(),
        ),
        (
            "C6".to_string(),
            TableSemigroup::of_group(&FiniteGroup::cyclic(6)).unwrap(),
        ),
        (
            "Sym3".to_string(),
            TableSemigroup::of_group(&FiniteGroup::symmetric(3)).unwrap(),
        ),
        (
            "S1".to_string(),
            TableSemigroup::from_view(&s1()).unwrap().0,
        ),
    ];
    for (i, s) in small_random_pair().iter().enumerate() {
        out.push((
            format!("S(G,L,f)#{i}"),
            TableSemigroup::from_view(s).unwrap().0,
        ));
    }
    out.push(("T3".to_string(), TableSemigroup::full_transformations(3)));
    out
}

/// Every map from `letters` to `0..size`, or `sample` random ones when there are more than 3 letters
/// or more than `limit` maps.
pub fn letter_assignments<R: Rng>(
    rng: &mut R,
    letters: &[u8],
    size: usize,
    limit: usize,
    sample: usize,
) -> Vec<Vec<(u8, usize)>> {
    let total = (size as u128)
        .checked_pow(letters.len() as u32)
        .unwrap_or(u128::MAX);
    if letters.len() <= 2 || total <= limit as u128 {
        let mut out = vec![Vec::new()];
        for &a in letters {
            out = out
                .into_iter()
                .flat_map(|v: Vec<(u8, usize)>| {
                    (0..size).map(move |x| {
                        let mut v = v.clone();
                        v.push((a, x));
                        v
                    })
                })
                .collect();
        }
        out
    } else {
        (0..sample)
            .map(|_| {
                letters
                    .iter()
                    .map(|&a| (a, rng.gen_range(0..size)))
                    .collect()
            })
            .collect()
    }
}

/// Distinct canonical rank-1 terms with at most two blocks and `|q| ≤ 2`.
pub fn canonical_corpus(seed: u64, count: usize, alphabet: &Alphabet) -> Vec<Term> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut corpus: Vec<Term> = Vec::new();
    while corpus.len() < count {
        let raw = random_rank1_term(&mut rng, alphabet, 1 + corpus.len() % 2, 3, 2, 2);
        let (c, _) = canonicalize_rank1(&raw, alphabet).unwrap();
        let form = Rank1Form::from_term(&c).unwrap();
        if c.rank() == 1
            && form.m() <= 2
            && form.blocks.iter().all(|b| b.q.abs() <= 2)
            && !corpus.contains(&c)
        {
            corpus.push(c);
        }
    }
    corpus
}
