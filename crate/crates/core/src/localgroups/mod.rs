//! The semigroups `S(G, L, f)`, realized on the set `Z = L ∪ L¹GL¹` with
//! product `z₁·z₂ = f̌(z₁z₂)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, Perm};
use crate::langdecomp::FactorialLanguage;
use crate::words::{Alphabet, Word};

mod mk;
mod presentation;
mod rees;
mod view;

pub use mk::{
    build_mk, sk_prime, MkElement, MkSemigroup, SkPrime, SkPrimeReport, SuperpositionFunction,
};
pub use presentation::{MixedWord, Presentation, Token};
pub use rees::{check_rees_isomorphism, ReesMatrix};
pub use view::{
    check_associativity, idempotents, is_local_group, minimal_ideal, rees_quotient_is_nilpotent,
    LocalGroupReport, SemigroupView, TableSemigroup,
};

/// Where the coordinates of a word sit and what they contribute to `f̂`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Profile {
    /// The `L̈`-length.
    pub m: usize,
    /// `|w₀|`.
    pub head_len: usize,
    /// Start of `w_m`.
    pub tail_start: usize,
    /// `f(w₀)`.
    pub head: Perm,
    /// `f(ẅ₁)f(w₁)⋯f(w_{m-1})f(ẅ_m)`, the identity when `m = 0`.
    pub inner: Perm,
    /// `f(w_m)`.
    pub tail: Perm,
}

/// A finite factorial language together with a map `f: L ∪ L̈ → G`.
pub trait Structure {
    fn alphabet(&self) -> &Alphabet;
    fn group(&self) -> &FiniteGroup;
    fn in_language(&self, w: &[u8]) -> bool;
    fn max_len(&self) -> usize;
    /// `w` is non-empty and over the alphabet.
    fn profile(&self, w: &[u8]) -> Profile;
    /// `|L|`.
    fn language_size(&self) -> u128;
    /// Members of `L` in shortlex order.
    fn members(&self) -> Result<Vec<Word>>;
    /// Members of `L̈` in shortlex order.
    fn boundary_words(&self) -> Result<Vec<Word>>;
    /// `f(w)` for `w ∈ L ∪ L̈`.
    fn f_value(&self, w: &[u8]) -> Option<Perm>;
}

/// `f` given by explicit values on a finite factorial language; unlisted words map to `1_G`.
#[derive(Clone, Debug)]
pub struct GFunction {
    language: FactorialLanguage,
    group: FiniteGroup,
    node_values: Vec<Perm>,
    boundary_values: Vec<Perm>,
}

impl GFunction {
    pub fn constant(language: FactorialLanguage, group: FiniteGroup) -> Self {
        let id = group.identity();
        GFunction {
            node_values: vec![id.clone(); language.len() + 1],
            boundary_values: vec![id; language.boundary_len()],
            language,
            group,
        }
    }

    /// Rejects words outside `L ∪ L̈` and words given two different values.
    pub fn from_values<I>(
        language: FactorialLanguage,
        group: FiniteGroup,
        values: I,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = (Word, Perm)>,
    {
        let mut f = GFunction::constant(language, group);
        let mut assigned = std::collections::HashMap::new();
        for (w, g) in values {
            if let Some(prev) = assigned.insert(w.clone(), g.clone()) {
                if prev != g {
                    return Err(Error::ConflictingValue(w));
                }
            }
            f.set(&w, g)?;
        }
        Ok(f)
    }

    pub fn set(&mut self, w: &Word, g: Perm) -> Result<()> {
        if !self.group.contains(&g) {
            return Err(Error::UnknownElement(self.group.name(&g)));
        }
        self.set_unchecked(w, g)
    }

    /// Like [`GFunction::from_values`] for values already known to lie in `group`.
    pub(crate) fn from_group_values<I>(
        language: FactorialLanguage,
        group: FiniteGroup,
        values: I,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = (Word, Perm)>,
    {
        let mut f = GFunction::constant(language, group);
        let mut assigned = std::collections::HashMap::new();
        for (w, g) in values {
            if let Some(prev) = assigned.insert(w.clone(), g.clone()) {
                if prev != g {
                    return Err(Error::ConflictingValue(w));
                }
            }
            f.set_unchecked(&w, g)?;
        }
        Ok(f)
    }

    fn set_unchecked(&mut self, w: &Word, g: Perm) -> Result<()> {
        if g.degree() != self.group.degree() {
            return Err(Error::UnknownElement(self.group.name(&g)));
        }
        if let Some(node) = self.language.node(w.letters()).filter(|_| !w.is_empty()) {
            self.node_values[node as usize] = g;
        } else if let Some(i) = self.language.boundary_index(w.letters()) {
            self.boundary_values[i as usize] = g;
        } else {
            return Err(Error::NotInDomain(w.clone()));
        }
        Ok(())
    }

    pub fn value(&self, w: &[u8]) -> Option<&Perm> {
        if w.is_empty() {
            return None;
        }
        if let Some(node) = self.language.node(w) {
            return Some(&self.node_values[node as usize]);
        }
        self.language
            .boundary_index(w)
            .map(|i| &self.boundary_values[i as usize])
    }

    pub fn language(&self) -> &FactorialLanguage {
        &self.language
    }

    /// Words of `L ∪ L̈` with a non-identity value, members of `L` first.
    pub fn assignments(&self) -> Vec<(Word, Perm)> {
        let mut out = Vec::new();
        for node in self.language.member_nodes() {
            let g = &self.node_values[node as usize];
            if !g.is_identity() {
                out.push((self.language.word_of(node), g.clone()));
            }
        }
        for (i, g) in self.boundary_values.iter().enumerate() {
            if !g.is_identity() {
                out.push((self.language.boundary_word(i as u32), g.clone()));
            }
        }
        out
    }
}

impl Structure for GFunction {
    fn alphabet(&self) -> &Alphabet {
        self.language.alphabet()
    }

    fn group(&self) -> &FiniteGroup {
        &self.group
    }

    fn in_language(&self, w: &[u8]) -> bool {
        self.language.contains(w)
    }

    fn max_len(&self) -> usize {
        self.language.max_len()
    }

    fn profile(&self, w: &[u8]) -> Profile {
        let scan = self.language.scan(w);
        let first = &scan.factors[0];
        let last = scan.factors.last().expect("at least one factor");
        let mut inner = self.group.identity();
        for (i, (_, b)) in scan.boundaries.iter().enumerate() {
            if i > 0 {
                inner = inner.then(&self.node_values[scan.factors[i].1 as usize]);
            }
            inner = inner.then(&self.boundary_values[*b as usize]);
        }
        Profile {
            m: scan.m(),
            head_len: first.0.end,
            tail_start: last.0.start,
            head: self.node_values[first.1 as usize].clone(),
            inner,
            tail: self.node_values[last.1 as usize].clone(),
        }
    }

    fn language_size(&self) -> u128 {
        self.language.len() as u128
    }

    fn members(&self) -> Result<Vec<Word>> {
        Ok(self.language.words())
    }

    fn boundary_words(&self) -> Result<Vec<Word>> {
        Ok(self.language.boundary())
    }

    fn f_value(&self, w: &[u8]) -> Option<Perm> {
        self.value(w).cloned()
    }
}

/// A random factorial language with at most `max_size` members over `alphabet`
/// (closed under factors, content `A`) and random values of `f` in `group`.
pub fn random_gfunction<R: rand::Rng>(
    rng: &mut R,
    alphabet: &Alphabet,
    max_size: usize,
    max_word_len: usize,
    group: &FiniteGroup,
) -> Result<GFunction> {
    let mut words: Vec<Word> = Vec::new();
    let (mut lang, _) = FactorialLanguage::closure(alphabet.clone(), &words)?;
    for _ in 0..8 * max_size {
        let len = rng.gen_range(2..=max_word_len.max(2));
        let w = Word::from_letters(
            (0..len)
                .map(|_| alphabet.letters()[rng.gen_range(0..alphabet.len())])
                .collect::<Vec<u8>>(),
        );
        words.push(w);
        let (candidate, _) = FactorialLanguage::closure(alphabet.clone(), &words)?;
        if candidate.len() > max_size {
            words.pop();
        } else {
            lang = candidate;
        }
    }
    let elems = group.elements()?;
    let mut values = Vec::new();
    for w in lang.words().into_iter().chain(lang.boundary()) {
        if rng.gen_bool(0.5) {
            values.push((w, elems[rng.gen_range(0..elems.len())].clone()));
        }
    }
    GFunction::from_values(lang, group.clone(), values)
}

/// An element of `Z = L ∪ L¹GL¹`; the empty word stands for `1 ∈ L¹`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum ZElement {
    NonRegular(Word),
    Triple(Word, Perm, Word),
}

impl ZElement {
    pub fn is_triple(&self) -> bool {
        matches!(self, ZElement::Triple(..))
    }
}

/// `S(G, L, f)` for a [`Structure`].
#[derive(Clone, Debug)]
pub struct LocalGroup<S> {
    structure: S,
}

impl<S: Structure> LocalGroup<S> {
    pub fn new(structure: S) -> Self {
        LocalGroup { structure }
    }

    pub fn structure(&self) -> &S {
        &self.structure
    }

    pub fn group(&self) -> &FiniteGroup {
        self.structure.group()
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.structure.alphabet()
    }

    /// `|L| + |L¹|²·|G|`.
    pub fn size(&self) -> Result<u128> {
        let l = self.structure.language_size();
        Ok(l + (l + 1) * (l + 1) * self.group().order()? as u128)
    }

    pub fn letter(&self, a: u8) -> Result<ZElement> {
        self.alphabet().check_word(&[a])?;
        Ok(ZElement::NonRegular(Word::from_letters(vec![a])))
    }

    fn profile(&self, w: &[u8]) -> Profile {
        self.structure.profile(w)
    }

    pub fn f_hat(&self, w: &[u8]) -> Perm {
        if w.is_empty() {
            return self.group().identity();
        }
        let p = self.profile(w);
        if p.m == 0 {
            p.head
        } else {
            p.head.then(&p.inner).then(&p.tail)
        }
    }

    /// `f̀(w)` as (prefix, group value); the group value is the identity when `w ∈ L¹`.
    pub fn f_grave(&self, w: &[u8]) -> (Word, Perm) {
        if w.is_empty() {
            return (Word::empty(), self.group().identity());
        }
        let p = self.profile(w);
        if p.m == 0 {
            (Word::from(w), self.group().identity())
        } else {
            (Word::from(&w[..p.head_len]), p.inner.then(&p.tail))
        }
    }

    /// `f́(w)` as (group value, suffix).
    pub fn f_acute(&self, w: &[u8]) -> (Perm, Word) {
        if w.is_empty() {
            return (self.group().identity(), Word::empty());
        }
        let p = self.profile(w);
        if p.m == 0 {
            (self.group().identity(), Word::from(w))
        } else {
            (p.head.then(&p.inner), Word::from(&w[p.tail_start..]))
        }
    }

    /// `f̌` on a non-empty word over `A`.
    pub fn f_check_word(&self, w: &[u8]) -> ZElement {
        let p = self.profile(w);
        if p.m == 0 {
            ZElement::NonRegular(Word::from(w))
        } else {
            ZElement::Triple(
                Word::from(&w[..p.head_len]),
                p.inner,
                Word::from(&w[p.tail_start..]),
            )
        }
    }

    /// `f̌` on a non-empty word over `A ∪ G`.
    pub fn f_check(&self, w: &MixedWord) -> Result<ZElement> {
        let (segments, groups) = w.split(self.group())?;
        for s in &segments {
            self.alphabet().check_word(s)?;
        }
        if groups.is_empty() {
            return Ok(self.f_check_word(&segments[0]));
        }
        let (prefix, mut acc) = self.f_grave(&segments[0]);
        for (i, g) in groups.iter().enumerate() {
            acc = acc.then(g);
            let seg = &segments[i + 1];
            if i + 1 < groups.len() {
                acc = acc.then(&self.f_hat(seg));
            }
        }
        let (last, suffix) = self.f_acute(segments.last().expect("segments"));
        Ok(ZElement::Triple(prefix, acc.then(&last), suffix))
    }

    pub fn to_mixed(&self, z: &ZElement) -> MixedWord {
        match z {
            ZElement::NonRegular(w) => MixedWord::from_word(w),
            ZElement::Triple(u, g, v) => {
                let mut m = MixedWord::from_word(u);
                m.push(Token::Grp(g.clone()));
                m.extend_word(v);
                m
            }
        }
    }

    /// `z ∈ Z` for this semigroup.
    pub fn check(&self, z: &ZElement) -> Result<()> {
        let in_l1 = |w: &Word| w.is_empty() || self.structure.in_language(w.letters());
        let ok = match z {
            ZElement::NonRegular(w) => !w.is_empty() && self.structure.in_language(w.letters()),
            ZElement::Triple(u, g, v) => in_l1(u) && in_l1(v) && self.group().contains(g),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::MismatchedContext)
        }
    }

    pub fn multiply_checked(&self, a: &ZElement, b: &ZElement) -> Result<ZElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }

    fn mul(&self, a: &ZElement, b: &ZElement) -> ZElement {
        use ZElement::*;
        match (a, b) {
            (NonRegular(x), NonRegular(y)) => self.f_check_word(x.concat(y).letters()),
            (NonRegular(x), Triple(u, g, v)) => {
                let (prefix, h) = self.f_grave(x.concat(u).letters());
                Triple(prefix, h.then(g), v.clone())
            }
            (Triple(u, g, v), NonRegular(y)) => {
                let (h, suffix) = self.f_acute(v.concat(y).letters());
                Triple(u.clone(), g.then(&h), suffix)
            }
            (Triple(u1, g1, v1), Triple(u2, g2, v2)) => {
                let h = self.f_hat(v1.concat(u2).letters());
                Triple(u1.clone(), g1.then(&h).then(g2), v2.clone())
            }
        }
    }

    /// `s^{ω+q}` read off the stable part of the powers of `s`.
    fn omega_fast(&self, s: &ZElement, q: i64) -> ZElement {
        match s {
            ZElement::Triple(u, g, v) => {
                let h = self.f_hat(v.concat(u).letters());
                let gh = g.then(&h);
                ZElement::Triple(u.clone(), gh.pow(q).then(&h.inverse()), v.clone())
            }
            ZElement::NonRegular(w) => {
                // From n* on, w^n ∉ L and s^{n+1} = s^n·c with a fixed c.
                let n_star = self.structure.max_len() / w.len() + 1;
                let big = w.pow(n_star);
                let (u, g_star, v) = match self.f_check_word(big.letters()) {
                    ZElement::Triple(u, g, v) => (u, g, v),
                    ZElement::NonRegular(_) => unreachable!("w^{{n*}} is longer than every member"),
                };
                let (c, _) = self.f_acute(v.concat(w).letters());
                let exp = q - n_star as i64;
                ZElement::Triple(u, g_star.then(&c.pow(exp)), v)
            }
        }
    }

    pub fn show_group(&self, g: &Perm) -> String {
        self.group().name(g)
    }

    /// Parses `w` or `(u, g, v)` with `1` for the empty word.
    pub fn parse_element(&self, text: &str) -> Result<ZElement> {
        let t = text.trim();
        let z = if let Some(inner) = t.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            let parts = split_top_level(inner);
            if parts.len() != 3 {
                return Err(Error::Invalid(format!("expected (u, g, v), got {text}")));
            }
            ZElement::Triple(
                Word::parse(parts[0])?,
                self.group().parse_element(parts[1])?,
                Word::parse(parts[2])?,
            )
        } else {
            let w = Word::parse(t)?;
            if w.is_empty() {
                return Err(Error::EmptyWord("element"));
            }
            ZElement::NonRegular(w)
        };
        self.check(&z)
            .map_err(|_| Error::Invalid(format!("{text} is not an element of this semigroup")))?;
        Ok(z)
    }
}

/// Splits on commas that are not nested in parentheses.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(s[start..].trim());
    parts
}

impl<S: Structure> SemigroupView for LocalGroup<S> {
    type Elem = ZElement;

    fn multiply(&self, a: &ZElement, b: &ZElement) -> ZElement {
        self.mul(a, b)
    }

    fn elements(&self) -> Result<Vec<ZElement>> {
        let size = self.size()?;
        if size > view::ENUMERATION_LIMIT as u128 {
            return Err(Error::TooLarge(format!("local group of order {size}")));
        }
        let members = self.structure.members()?;
        let mut l1 = vec![Word::empty()];
        l1.extend(members.iter().cloned());
        let mut out: Vec<ZElement> = members.into_iter().map(ZElement::NonRegular).collect();
        let group = self.group().elements()?;
        for u in &l1 {
            for g in group {
                for v in &l1 {
                    out.push(ZElement::Triple(u.clone(), g.clone(), v.clone()));
                }
            }
        }
        Ok(out)
    }

    fn show(&self, z: &ZElement) -> String {
        match z {
            ZElement::NonRegular(w) => w.to_string(),
            ZElement::Triple(u, g, v) => format!("({u}, {}, {v})", self.group().name(g)),
        }
    }

    fn omega_plus(&self, s: &ZElement, q: i64) -> ZElement {
        self.omega_fast(s, q)
    }
}

impl fmt::Display for ZElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZElement::NonRegular(w) => write!(f, "{w}"),
            ZElement::Triple(u, g, v) => {
                let imgs: Vec<String> = g.images().iter().map(|x| x.to_string()).collect();
                write!(f, "({u}, ({}), {v})", imgs.join(","))
            }
        }
    }
}
