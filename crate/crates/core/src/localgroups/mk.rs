//! `k`-superposition maps: the semigroups `S_k(G, f)` over `L_k = A^{≤k}`,
//! `M_k(G, ħ)`, and the quotient `S'_k` that receives `M_k`.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use super::{LocalGroup, Profile, SemigroupView, Structure, ZElement};
use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, Perm};
use crate::words::{truncate, Alphabet, Side, Word};

const MEMBER_LIMIT: u128 = 200_000;

fn product_of_windows(values: &HashMap<Vec<u8>, Perm>, k: usize, w: &[u8], id: &Perm) -> Perm {
    let mut acc = id.clone();
    if w.len() > k {
        for win in w.windows(k + 1) {
            if let Some(g) = values.get(win) {
                acc = acc.then(g);
            }
        }
    }
    acc
}

/// `f` on `L_k ∪ L̈_k = A^{≤k+1}` that is trivial on `L_k`; values on `A^{k+1}`
/// default to the identity. `L_k` is never listed explicitly.
#[derive(Clone, Debug)]
pub struct SuperpositionFunction {
    alphabet: Alphabet,
    k: usize,
    group: FiniteGroup,
    values: HashMap<Vec<u8>, Perm>,
}

impl SuperpositionFunction {
    pub fn new<I>(alphabet: Alphabet, k: usize, group: FiniteGroup, values: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Word, Perm)>,
    {
        Self::build(alphabet, k, group, values, true)
    }

    /// Like [`SuperpositionFunction::new`] for values already known to lie in `group`.
    pub(crate) fn from_group_values<I>(
        alphabet: Alphabet,
        k: usize,
        group: FiniteGroup,
        values: I,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = (Word, Perm)>,
    {
        Self::build(alphabet, k, group, values, false)
    }

    fn build<I>(
        alphabet: Alphabet,
        k: usize,
        group: FiniteGroup,
        values: I,
        check: bool,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = (Word, Perm)>,
    {
        if k == 0 {
            return Err(Error::Invalid("k must be at least 1".into()));
        }
        let mut map = HashMap::new();
        for (w, g) in values {
            alphabet.check_word(w.letters())?;
            if w.len() != k + 1 {
                return Err(Error::NotInDomain(w));
            }
            if g.degree() != group.degree() || (check && !group.contains(&g)) {
                return Err(Error::UnknownElement(group.name(&g)));
            }
            if let Some(prev) = map.insert(w.letters().to_vec(), g.clone()) {
                if prev != g {
                    return Err(Error::ConflictingValue(w));
                }
            }
        }
        Ok(SuperpositionFunction {
            alphabet,
            k,
            group,
            values: map,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Non-identity values, sorted by word.
    pub fn assignments(&self) -> Vec<(Word, Perm)> {
        let mut v: Vec<(Word, Perm)> = self
            .values
            .iter()
            .filter(|(_, g)| !g.is_identity())
            .map(|(w, g)| (Word::from(w.as_slice()), g.clone()))
            .collect();
        v.sort();
        v
    }
}

impl Structure for SuperpositionFunction {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn group(&self) -> &FiniteGroup {
        &self.group
    }

    fn in_language(&self, w: &[u8]) -> bool {
        !w.is_empty() && w.len() <= self.k && w.iter().all(|&a| self.alphabet.contains(a))
    }

    fn max_len(&self) -> usize {
        self.k
    }

    fn profile(&self, w: &[u8]) -> Profile {
        let id = self.group.identity();
        let n = w.len();
        if n <= self.k {
            return Profile {
                m: 0,
                head_len: n,
                tail_start: 0,
                head: id.clone(),
                inner: id.clone(),
                tail: id,
            };
        }
        Profile {
            m: n - self.k,
            head_len: self.k,
            tail_start: n - self.k,
            inner: product_of_windows(&self.values, self.k, w, &id),
            head: id.clone(),
            tail: id,
        }
    }

    fn language_size(&self) -> u128 {
        let a = self.alphabet.len() as u128;
        (1..=self.k as u32).fold(0u128, |acc, i| acc.saturating_add(a.saturating_pow(i)))
    }

    fn members(&self) -> Result<Vec<Word>> {
        if self.language_size() > MEMBER_LIMIT {
            return Err(Error::TooLarge(format!("A^≤{} has too many words", self.k)));
        }
        Ok(self.alphabet.words_up_to(self.k))
    }

    fn boundary_words(&self) -> Result<Vec<Word>> {
        let a = self.alphabet.len() as u128;
        if a.saturating_pow(self.k as u32 + 1) > MEMBER_LIMIT {
            return Err(Error::TooLarge(format!(
                "A^{} has too many words",
                self.k + 1
            )));
        }
        Ok(self.alphabet.words_of_length(self.k + 1))
    }

    fn f_value(&self, w: &[u8]) -> Option<Perm> {
        if !w.iter().all(|&a| self.alphabet.contains(a)) || w.is_empty() || w.len() > self.k + 1 {
            return None;
        }
        if w.len() == self.k + 1 {
            if let Some(g) = self.values.get(w) {
                return Some(g.clone());
            }
        }
        Some(self.group.identity())
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum MkElement {
    /// `(v, 1, v)` with `1 ≤ |v| ≤ k-1`.
    Short(Word),
    Long(Word, Perm, Word),
}

/// `M_k(G, ħ) = {(v, 1, v) : v ∈ L_{k-1}} ∪ A^k × G × A^k`.
#[derive(Clone, Debug)]
pub struct MkSemigroup {
    alphabet: Alphabet,
    k: usize,
    group: FiniteGroup,
    values: HashMap<Vec<u8>, Perm>,
}

/// `ħ` is given on `A^{k+1}` (missing words map to the identity) and extended
/// to the `k`-superposition homomorphism.
pub fn build_mk<I>(alphabet: Alphabet, k: usize, group: FiniteGroup, hbar: I) -> Result<MkSemigroup>
where
    I: IntoIterator<Item = (Word, Perm)>,
{
    let f = SuperpositionFunction::new(alphabet, k, group, hbar)?;
    Ok(MkSemigroup {
        alphabet: f.alphabet,
        k: f.k,
        group: f.group,
        values: f.values,
    })
}

impl MkSemigroup {
    /// `ħ(w)`, the product of `ħ` over the `(k+1)`-windows of `w`.
    pub fn hbar(&self, w: &[u8]) -> Perm {
        product_of_windows(&self.values, self.k, w, &self.group.identity())
    }

    fn parts(&self, x: &MkElement) -> (Word, Perm, Word) {
        match x {
            MkElement::Short(v) => (v.clone(), self.group.identity(), v.clone()),
            MkElement::Long(u, g, v) => (u.clone(), g.clone(), v.clone()),
        }
    }
}

impl SemigroupView for MkSemigroup {
    type Elem = MkElement;

    fn multiply(&self, a: &MkElement, b: &MkElement) -> MkElement {
        let (u, g, v) = self.parts(a);
        let (u2, g2, v2) = self.parts(b);
        let left = truncate(u.concat(&u2).letters(), self.k, Side::Head);
        let right = truncate(v.concat(&v2).letters(), self.k, Side::Tail);
        if left.len() < self.k {
            return MkElement::Short(left);
        }
        let mid = self.hbar(v.concat(&u2).letters());
        MkElement::Long(left, g.then(&mid).then(&g2), right)
    }

    fn elements(&self) -> Result<Vec<MkElement>> {
        let mut out: Vec<MkElement> = self
            .alphabet
            .words_up_to(self.k - 1)
            .into_iter()
            .map(MkElement::Short)
            .collect();
        let top = self.alphabet.words_of_length(self.k);
        for u in &top {
            for g in self.group.elements()? {
                for v in &top {
                    out.push(MkElement::Long(u.clone(), g.clone(), v.clone()));
                }
            }
        }
        Ok(out)
    }

    fn show(&self, a: &MkElement) -> String {
        match a {
            MkElement::Short(v) => {
                format!("({v}, {}, {v})", self.group.name(&self.group.identity()))
            }
            MkElement::Long(u, g, v) => format!("({u}, {}, {v})", self.group.name(g)),
        }
    }
}

/// The quotient of `S_k(G, f)` merging each `u ∈ A^k` with `(u, 1, u)`.
pub struct SkPrime<'a, S> {
    base: &'a LocalGroup<S>,
    k: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SkPrimeReport {
    pub order: usize,
    pub merged_pairs: usize,
    pub congruence: bool,
    pub mk_order: usize,
    pub phi_injective: bool,
    pub phi_homomorphism: bool,
}

impl<S: Structure> SkPrime<'_, S> {
    pub fn canon(&self, z: ZElement) -> ZElement {
        match z {
            ZElement::NonRegular(u) if u.len() == self.k => {
                ZElement::Triple(u.clone(), self.base.group().identity(), u)
            }
            other => other,
        }
    }

    pub fn phi(&self, x: &MkElement) -> ZElement {
        match x {
            MkElement::Short(v) => ZElement::NonRegular(v.clone()),
            MkElement::Long(u, g, v) => ZElement::Triple(u.clone(), g.clone(), v.clone()),
        }
    }
}

impl<S: Structure> SemigroupView for SkPrime<'_, S> {
    type Elem = ZElement;

    fn multiply(&self, a: &ZElement, b: &ZElement) -> ZElement {
        self.canon(self.base.multiply(a, b))
    }

    fn elements(&self) -> Result<Vec<ZElement>> {
        Ok(self
            .base
            .elements()?
            .into_iter()
            .filter(|z| !matches!(z, ZElement::NonRegular(u) if u.len() == self.k))
            .collect())
    }

    fn show(&self, a: &ZElement) -> String {
        self.base.show(a)
    }
}

/// Builds `S'_k` from `S_k(G, f)`, checks that the merge is a congruence and
/// that `φ: M_k(G, ħ) → S'_k` is an injective homomorphism, with `ħ` read off `f` on `A^{k+1}`.
pub fn sk_prime<S: Structure>(s: &LocalGroup<S>) -> Result<(SkPrime<'_, S>, SkPrimeReport)> {
    let st = s.structure();
    let k = st.max_len();
    let members = st.members()?;
    if members != st.alphabet().words_up_to(k) {
        return Err(Error::Invalid("S'_k needs L = A^{≤k}".into()));
    }
    if members
        .iter()
        .any(|u| !st.f_value(u.letters()).is_some_and(|g| g.is_identity()))
    {
        return Err(Error::Invalid("S'_k needs f trivial on A^{≤k}".into()));
    }
    let quotient = SkPrime { base: s, k };
    let all = s.elements()?;
    let id = s.group().identity();
    let top = st.alphabet().words_of_length(k);
    for u in &top {
        let a = ZElement::NonRegular(u.clone());
        let b = ZElement::Triple(u.clone(), id.clone(), u.clone());
        for x in &all {
            let left = quotient.canon(s.multiply(x, &a)) == quotient.canon(s.multiply(x, &b));
            let right = quotient.canon(s.multiply(&a, x)) == quotient.canon(s.multiply(&b, x));
            if !(left && right) {
                return Err(Error::CongruenceViolation(format!(
                    "merging {u} with ({u}, 1, {u}) is not compatible with {}",
                    s.show(x)
                )));
            }
        }
    }
    let hbar = st
        .boundary_words()?
        .into_iter()
        .map(|w| {
            let g = st.f_value(w.letters()).expect("total on the boundary");
            (w, g)
        })
        .collect::<Vec<_>>();
    let mk = build_mk(st.alphabet().clone(), k, s.group().clone(), hbar)?;
    let mk_elems = mk.elements()?;
    let images: Vec<ZElement> = mk_elems.iter().map(|x| quotient.phi(x)).collect();
    let distinct: HashSet<&ZElement> = images.iter().collect();
    let phi_injective = distinct.len() == images.len();
    let mut phi_homomorphism = true;
    'outer: for (x, px) in mk_elems.iter().zip(&images) {
        for (y, py) in mk_elems.iter().zip(&images) {
            if quotient.phi(&mk.multiply(x, y)) != quotient.multiply(px, py) {
                phi_homomorphism = false;
                break 'outer;
            }
        }
    }
    let order = quotient.elements()?.len();
    let report = SkPrimeReport {
        order,
        merged_pairs: top.len(),
        congruence: true,
        mk_order: mk_elems.len(),
        phi_injective,
        phi_homomorphism,
    };
    Ok((quotient, report))
}
