use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, Perm};

pub const ENUMERATION_LIMIT: usize = 1_000_000;

/// A finite semigroup seen through its multiplication.
pub trait SemigroupView {
    type Elem: Clone + Eq + Hash + Debug;

    fn multiply(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// Every element. May refuse when the semigroup is too large.
    fn elements(&self) -> Result<Vec<Self::Elem>>;

    fn show(&self, a: &Self::Elem) -> String;

    /// `s^n` for `n ≥ 1`.
    fn power(&self, s: &Self::Elem, n: u64) -> Self::Elem {
        assert!(n >= 1);
        let mut result: Option<Self::Elem> = None;
        let mut base = s.clone();
        let mut e = n;
        loop {
            if e & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => self.multiply(&r, &base),
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = self.multiply(&base, &base);
        }
        result.expect("n >= 1")
    }

    /// Index and period of the monogenic subsemigroup generated by `s`.
    fn index_period(&self, s: &Self::Elem) -> (u64, u64) {
        let mut seen: HashMap<Self::Elem, u64> = HashMap::new();
        let mut cur = s.clone();
        let mut n = 1u64;
        loop {
            if let Some(&i) = seen.get(&cur) {
                return (i, n - i);
            }
            seen.insert(cur.clone(), n);
            cur = self.multiply(&cur, s);
            n += 1;
        }
    }

    /// `s^{ω+q}`: the power `s^t` with `t ≡ q` modulo the period and `t` in the cyclic part.
    fn omega_plus(&self, s: &Self::Elem, q: i64) -> Self::Elem {
        let (i, p) = self.index_period(s);
        let t = i as i64 + (q - i as i64).rem_euclid(p as i64);
        self.power(s, t as u64)
    }
}

/// A semigroup given by its Cayley table.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TableSemigroup {
    pub names: Vec<String>,
    /// `table[a][b]` is the index of `ab`.
    pub table: Vec<Vec<usize>>,
}

impl TableSemigroup {
    pub fn new(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::Invalid(
                "a semigroup needs at least one element".into(),
            ));
        }
        if table.len() != n
            || table
                .iter()
                .any(|r| r.len() != n || r.iter().any(|&x| x >= n))
        {
            return Err(Error::Invalid(format!(
                "table must be {n}×{n} with entries below {n}"
            )));
        }
        let s = TableSemigroup { names, table };
        if let Some((a, b, c)) = check_associativity(&s, usize::MAX, &mut rand::thread_rng())?.1 {
            return Err(Error::Invalid(format!(
                "not associative at ({}, {}, {})",
                s.names[a], s.names[b], s.names[c]
            )));
        }
        Ok(s)
    }

    /// Tabulates an enumerable semigroup. Also returns the element list in table order.
    pub fn from_view<V: SemigroupView>(view: &V) -> Result<(Self, Vec<V::Elem>)> {
        let elems = view.elements()?;
        let index: HashMap<&V::Elem, usize> =
            elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let mut table = vec![vec![0; elems.len()]; elems.len()];
        for (i, a) in elems.iter().enumerate() {
            for (j, b) in elems.iter().enumerate() {
                let c = view.multiply(a, b);
                table[i][j] = *index.get(&c).ok_or_else(|| {
                    Error::Inconsistent(format!(
                        "product {} is not among the elements",
                        view.show(&c)
                    ))
                })?;
            }
        }
        let names = elems.iter().map(|e| view.show(e)).collect();
        Ok((TableSemigroup { names, table }, elems))
    }

    /// The Cayley table of a finite group, with its element names.
    pub fn of_group(group: &FiniteGroup) -> Result<Self> {
        let elems = group.elements()?;
        let index: HashMap<&Perm, usize> = elems.iter().enumerate().map(|(i, g)| (g, i)).collect();
        let table = elems
            .iter()
            .map(|a| elems.iter().map(|b| index[&group.multiply(a, b)]).collect())
            .collect();
        let names = elems.iter().map(|g| group.name(g)).collect();
        Ok(TableSemigroup { names, table })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// The two-element semilattice `{1, 0}`.
    pub fn semilattice() -> Self {
        TableSemigroup {
            names: vec!["1".into(), "0".into()],
            table: vec![vec![0, 1], vec![1, 1]],
        }
    }

    /// The null semigroup on `n` elements: every product is `0`.
    pub fn null(n: usize) -> Self {
        TableSemigroup {
            names: (0..n)
                .map(|i| if i == 0 { "0".into() } else { format!("x{i}") })
                .collect(),
            table: vec![vec![0; n]; n],
        }
    }

    /// The full transformation monoid on `n` points, maps composed left to right.
    pub fn full_transformations(n: usize) -> Self {
        let total = n.pow(n as u32);
        let decode = |mut code: usize| -> Vec<usize> {
            let mut v = vec![0; n];
            for slot in v.iter_mut() {
                *slot = code % n;
                code /= n;
            }
            v
        };
        let encode = |v: &[usize]| -> usize { v.iter().rev().fold(0, |acc, &x| acc * n + x) };
        let maps: Vec<Vec<usize>> = (0..total).map(decode).collect();
        let table = maps
            .iter()
            .map(|a| {
                maps.iter()
                    .map(|b| encode(&a.iter().map(|&x| b[x]).collect::<Vec<_>>()))
                    .collect()
            })
            .collect();
        let names = maps
            .iter()
            .map(|m| m.iter().map(|x| x.to_string()).collect::<String>())
            .collect();
        TableSemigroup { names, table }
    }
}

impl SemigroupView for TableSemigroup {
    type Elem = usize;

    fn multiply(&self, a: &usize, b: &usize) -> usize {
        self.table[*a][*b]
    }

    fn elements(&self) -> Result<Vec<usize>> {
        Ok((0..self.len()).collect())
    }

    fn show(&self, a: &usize) -> String {
        self.names[*a].clone()
    }
}

/// Exhaustive when `|S|³ ≤ budget`, otherwise `budget` random triples.
/// Returns the number of triples checked and the first failure.
#[allow(clippy::type_complexity)]
pub fn check_associativity<R: Rng>(
    s: &TableSemigroup,
    budget: usize,
    rng: &mut R,
) -> Result<(usize, Option<(usize, usize, usize)>)> {
    let n = s.len();
    let t = &s.table;
    let cube = n.checked_mul(n).and_then(|x| x.checked_mul(n));
    if cube.is_some_and(|c| c <= budget) {
        for a in 0..n {
            for b in 0..n {
                let ab = t[a][b];
                for c in 0..n {
                    if t[ab][c] != t[a][t[b][c]] {
                        return Ok((0, Some((a, b, c))));
                    }
                }
            }
        }
        return Ok((n * n * n, None));
    }
    for _ in 0..budget {
        let (a, b, c) = (
            rng.gen_range(0..n),
            rng.gen_range(0..n),
            rng.gen_range(0..n),
        );
        if t[t[a][b]][c] != t[a][t[b][c]] {
            return Ok((0, Some((a, b, c))));
        }
    }
    Ok((budget, None))
}

pub fn idempotents(s: &TableSemigroup) -> Vec<usize> {
    (0..s.len()).filter(|&x| s.table[x][x] == x).collect()
}

/// `K = S¹zS¹` where `z` is the product of all elements.
pub fn minimal_ideal(s: &TableSemigroup) -> Vec<usize> {
    let t = &s.table;
    let z = (1..s.len()).fold(0, |acc, x| t[acc][x]);
    let mut member = vec![false; s.len()];
    member[z] = true;
    for x in 0..s.len() {
        member[t[x][z]] = true;
        member[t[z][x]] = true;
        for y in 0..s.len() {
            member[t[t[x][z]][y]] = true;
        }
    }
    (0..s.len()).filter(|&x| member[x]).collect()
}

fn is_group(s: &TableSemigroup, part: &[usize], e: usize) -> bool {
    let t = &s.table;
    part.iter().all(|&x| {
        t[e][x] == x && t[x][e] == x && part.iter().any(|&y| t[x][y] == e && t[y][x] == e)
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalGroupReport {
    pub local_group: bool,
    pub idempotents: usize,
    pub minimal_ideal: usize,
    pub completely_simple_ideal: bool,
    pub idempotents_in_ideal: bool,
}

/// Checks both "`eSe` is a group for every idempotent `e`" and "`E(S) = ∅` or
/// `E(S)` lies in a completely simple minimal ideal", failing if they disagree.
pub fn is_local_group(s: &TableSemigroup) -> Result<LocalGroupReport> {
    let t = &s.table;
    let idem = idempotents(s);
    let by_monoids = idem.iter().all(|&e| {
        let mut local: Vec<usize> = (0..s.len()).map(|x| t[t[e][x]][e]).collect();
        local.sort_unstable();
        local.dedup();
        is_group(s, &local, e)
    });
    let k = minimal_ideal(s);
    let mut in_k = vec![false; s.len()];
    for &x in &k {
        in_k[x] = true;
    }
    let k_idem: Vec<usize> = idem.iter().copied().filter(|&e| in_k[e]).collect();
    // e ≤ f iff e = ef = fe
    let completely_simple = !k_idem.is_empty()
        && k_idem.iter().all(|&f| {
            k_idem
                .iter()
                .all(|&e| !(t[e][f] == e && t[f][e] == e) || e == f)
        });
    let contained = k_idem.len() == idem.len();
    let by_ideal = idem.is_empty() || (contained && completely_simple);
    if by_monoids != by_ideal {
        return Err(Error::Inconsistent(format!(
            "local-group characterizations disagree ({by_monoids} vs {by_ideal})"
        )));
    }
    Ok(LocalGroupReport {
        local_group: by_monoids,
        idempotents: idem.len(),
        minimal_ideal: k.len(),
        completely_simple_ideal: completely_simple,
        idempotents_in_ideal: contained,
    })
}

/// `S/K` is nilpotent iff the zero `K` is its only idempotent.
pub fn rees_quotient_is_nilpotent(s: &TableSemigroup) -> bool {
    let k = minimal_ideal(s);
    idempotents(s).iter().all(|e| k.contains(e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::FiniteGroup;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn group_table(g: &FiniteGroup) -> TableSemigroup {
        let els = g.elements().unwrap();
        let table = els
            .iter()
            .map(|a| {
                els.iter()
                    .map(|b| els.iter().position(|x| *x == a.then(b)).unwrap())
                    .collect()
            })
            .collect();
        TableSemigroup::new(els.iter().map(|e| g.name(e)).collect(), table).unwrap()
    }

    #[test]
    fn idempotent_examples() {
        let c6 = group_table(&FiniteGroup::cyclic(6));
        assert_eq!(idempotents(&c6), vec![0]);
        assert_eq!(idempotents(&TableSemigroup::semilattice()), vec![0, 1]);
    }

    #[test]
    fn local_group_examples() {
        assert!(
            !is_local_group(&TableSemigroup::semilattice())
                .unwrap()
                .local_group
        );
        assert!(
            is_local_group(&group_table(&FiniteGroup::symmetric(3)))
                .unwrap()
                .local_group
        );
        assert!(
            is_local_group(&TableSemigroup::null(3))
                .unwrap()
                .local_group
        );
        assert!(
            !is_local_group(&TableSemigroup::full_transformations(3))
                .unwrap()
                .local_group
        );
    }

    #[test]
    fn transformation_monoid_shape() {
        let t3 = TableSemigroup::full_transformations(3);
        assert_eq!(t3.len(), 27);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(
            check_associativity(&t3, usize::MAX, &mut rng).unwrap(),
            (27 * 27 * 27, None)
        );
        // constant maps form the minimal ideal
        assert_eq!(minimal_ideal(&t3).len(), 3);
        assert!(!rees_quotient_is_nilpotent(&t3));
    }

    #[test]
    fn omega_by_cycle_detection() {
        let c6 = group_table(&FiniteGroup::cyclic(6));
        let g = c6.index_of("g").unwrap();
        assert_eq!(c6.show(&c6.omega_plus(&g, 0)), "e");
        assert_eq!(c6.show(&c6.omega_plus(&g, -1)), "g^5");
        assert_eq!(c6.show(&c6.omega_plus(&g, 8)), "g^2");
        let sl = TableSemigroup::semilattice();
        assert_eq!(sl.omega_plus(&0, -3), 0);
    }

    #[test]
    fn rejects_bad_tables() {
        let names = vec!["x".to_string(), "y".to_string()];
        assert!(TableSemigroup::new(names.clone(), vec![vec![1, 0], vec![0, 0]]).is_err());
        assert!(TableSemigroup::new(names, vec![vec![0, 2], vec![0, 0]]).is_err());
    }
}
