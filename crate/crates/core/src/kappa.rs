//! κ-terms: syntax, evaluation in finite semigroups, and rank-1 canonical forms.
//!
//! Concrete syntax:
//!
//! ```text
//! term     := factor+
//! factor   := atom ('^' exponent)?
//! atom     := LETTER | '(' term ')'
//! exponent := NAT | '(' 'w' (('+'|'-') NAT)? ')' | 'w'
//! ```
//!
//! `x^w` is `x^ω`, `x^(w+2)` is `x^{ω+2}`. Finite powers are expanded while parsing.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::localgroups::SemigroupView;
use crate::words::{is_lyndon, lyndon_split, primitive_root, Alphabet, Word};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Term {
    Letter(u8),
    /// At least two factors, none of them a `Concat`.
    Concat(Vec<Term>),
    /// `base^{ω+q}`
    Power(Box<Term>, i64),
}

impl Term {
    /// Concatenation, flattening nested concatenations.
    pub fn concat(parts: Vec<Term>) -> Term {
        let mut flat = Vec::with_capacity(parts.len());
        for p in parts {
            match p {
                Term::Concat(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        if flat.len() == 1 {
            flat.pop().expect("one factor")
        } else {
            Term::Concat(flat)
        }
    }

    pub fn word(w: &Word) -> Term {
        assert!(!w.is_empty(), "a term cannot be empty");
        Term::concat(w.letters().iter().map(|&a| Term::Letter(a)).collect())
    }

    pub fn power(base: Term, q: i64) -> Term {
        Term::Power(Box::new(base), q)
    }

    pub fn parse(text: &str) -> Result<Term> {
        let mut p = Parser {
            src: text.as_bytes(),
            pos: 0,
        };
        let t = p.term()?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(p.err("unexpected input"));
        }
        Ok(t)
    }

    /// Maximum nesting of ω-powers.
    pub fn rank(&self) -> usize {
        match self {
            Term::Letter(_) => 0,
            Term::Concat(v) => v.iter().map(Term::rank).max().unwrap_or(0),
            Term::Power(b, _) => 1 + b.rank(),
        }
    }

    /// Letters in order of first occurrence.
    pub fn letters(&self) -> Vec<u8> {
        fn walk(t: &Term, out: &mut Vec<u8>) {
            match t {
                Term::Letter(a) => {
                    if !out.contains(a) {
                        out.push(*a);
                    }
                }
                Term::Concat(v) => v.iter().for_each(|x| walk(x, out)),
                Term::Power(b, _) => walk(b, out),
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    /// The word spelled by a rank-0 term.
    pub fn as_word(&self) -> Option<Word> {
        fn walk(t: &Term, out: &mut Vec<u8>) -> bool {
            match t {
                Term::Letter(a) => {
                    out.push(*a);
                    true
                }
                Term::Concat(v) => v.iter().all(|x| walk(x, out)),
                Term::Power(..) => false,
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out).then(|| Word::from_letters(out))
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn term(&mut self) -> Result<Term> {
        let mut factors = Vec::new();
        while let Some(c) = self.peek() {
            if c == b'(' || c.is_ascii_alphabetic() {
                factors.push(self.factor()?);
            } else {
                break;
            }
        }
        if factors.is_empty() {
            return Err(self.err("expected a letter or '('"));
        }
        Ok(Term::concat(factors))
    }

    fn factor(&mut self) -> Result<Term> {
        let atom = match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(b')')?;
                t
            }
            Some(c) if c.is_ascii_alphabetic() => {
                self.pos += 1;
                Term::Letter(c)
            }
            _ => return Err(self.err("expected a letter or '('")),
        };
        if self.peek() != Some(b'^') {
            return Ok(atom);
        }
        self.pos += 1;
        match self.peek() {
            Some(b'w') => {
                self.pos += 1;
                Ok(Term::power(atom, 0))
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                let n = self.nat()?;
                if n == 0 {
                    self.pos = start;
                    return Err(self.err("finite exponents must be positive"));
                }
                Ok(Term::concat(vec![atom; n as usize]))
            }
            Some(b'(') => {
                self.pos += 1;
                if self.peek() != Some(b'w') {
                    return Err(self.err("expected 'w'"));
                }
                self.pos += 1;
                let q = match self.peek() {
                    Some(b'+') => {
                        self.pos += 1;
                        self.skip_ws();
                        self.nat()?
                    }
                    Some(b'-') => {
                        self.pos += 1;
                        self.skip_ws();
                        -self.nat()?
                    }
                    _ => 0,
                };
                self.expect(b')')?;
                Ok(Term::power(atom, q))
            }
            _ => Err(self.err("expected an exponent")),
        }
    }

    fn nat(&mut self) -> Result<i64> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("digits")
            .parse::<i64>()
            .map_err(|_| Error::Syntax {
                pos: start,
                msg: "number too large".into(),
            })
    }
}

fn exponent(q: i64) -> String {
    match q {
        0 => "^w".to_string(),
        q if q > 0 => format!("^(w+{q})"),
        q => format!("^(w-{})", q.unsigned_abs()),
    }
}

fn write_factors(f: &mut fmt::Formatter<'_>, parts: &[Term]) -> fmt::Result {
    let mut i = 0;
    let mut prev_had_exponent = false;
    while i < parts.len() {
        if prev_had_exponent {
            write!(f, " ")?;
        }
        if let Term::Letter(a) = parts[i] {
            let run = parts[i..]
                .iter()
                .take_while(|t| **t == Term::Letter(a))
                .count();
            if run >= 3 {
                write!(f, "{}^{run}", a as char)?;
                prev_had_exponent = true;
                i += run;
                continue;
            }
        }
        write!(f, "{}", parts[i])?;
        prev_had_exponent = matches!(parts[i], Term::Power(..));
        i += 1;
    }
    Ok(())
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Letter(a) => write!(f, "{}", *a as char),
            Term::Concat(parts) => write_factors(f, parts),
            Term::Power(b, q) => {
                match **b {
                    Term::Letter(a) => write!(f, "{}", a as char)?,
                    ref other => write!(f, "({other})")?,
                }
                write!(f, "{}", exponent(*q))
            }
        }
    }
}

/// Evaluates `t` in `s`, sending each letter through `asg`.
pub fn evaluate<V, F>(t: &Term, s: &V, asg: &F) -> Result<V::Elem>
where
    V: SemigroupView,
    F: Fn(u8) -> Option<V::Elem>,
{
    match t {
        Term::Letter(a) => asg(*a).ok_or(Error::Unassigned(*a as char)),
        Term::Concat(parts) => {
            let mut acc = evaluate(&parts[0], s, asg)?;
            for p in &parts[1..] {
                acc = s.multiply(&acc, &evaluate(p, s, asg)?);
            }
            Ok(acc)
        }
        Term::Power(b, q) => Ok(s.omega_plus(&evaluate(b, s, asg)?, *q)),
    }
}

/// A factor of a flattened rank-≤1 term.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Item {
    Letter(u8),
    Pow(Word, i64),
}

pub fn items_of(t: &Term) -> Result<Vec<Item>> {
    let r = t.rank();
    if r > 1 {
        return Err(Error::RankTooHigh(r));
    }
    let mut out = Vec::new();
    fn walk(t: &Term, out: &mut Vec<Item>) {
        match t {
            Term::Letter(a) => out.push(Item::Letter(*a)),
            Term::Concat(v) => v.iter().for_each(|x| walk(x, out)),
            Term::Power(b, q) => out.push(Item::Pow(b.as_word().expect("rank-0 base"), *q)),
        }
    }
    walk(t, &mut out);
    Ok(out)
}

pub fn term_of(items: &[Item]) -> Term {
    Term::concat(
        items
            .iter()
            .map(|it| match it {
                Item::Letter(a) => Term::Letter(*a),
                Item::Pow(x, q) => Term::power(Term::word(x), *q),
            })
            .collect(),
    )
}

/// `u₀ x₁^{ω+q₁} u₁ ⋯ x_m^{ω+q_m} u_m`. With no blocks it is the word `u₀`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct Rank1Form {
    pub u0: Word,
    pub blocks: Vec<Block>,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct Block {
    pub x: Word,
    pub q: i64,
    pub u: Word,
}

impl Rank1Form {
    pub fn from_term(t: &Term) -> Result<Self> {
        Ok(Rank1Form::from_items(&items_of(t)?))
    }

    pub fn from_items(items: &[Item]) -> Self {
        let mut u0 = Vec::new();
        let mut blocks: Vec<Block> = Vec::new();
        for it in items {
            match it {
                Item::Letter(a) => match blocks.last_mut() {
                    Some(b) => {
                        let mut v = std::mem::take(&mut b.u).into_letters();
                        v.push(*a);
                        b.u = Word::from_letters(v);
                    }
                    None => u0.push(*a),
                },
                Item::Pow(x, q) => blocks.push(Block {
                    x: x.clone(),
                    q: *q,
                    u: Word::empty(),
                }),
            }
        }
        Rank1Form {
            u0: Word::from_letters(u0),
            blocks,
        }
    }

    pub fn items(&self) -> Vec<Item> {
        let mut v: Vec<Item> = self.u0.letters().iter().map(|&a| Item::Letter(a)).collect();
        for b in &self.blocks {
            v.push(Item::Pow(b.x.clone(), b.q));
            v.extend(b.u.letters().iter().map(|&a| Item::Letter(a)));
        }
        v
    }

    pub fn to_term(&self) -> Term {
        term_of(&self.items())
    }

    pub fn m(&self) -> usize {
        self.blocks.len()
    }
}

/// The three conditions of the rank-1 canonical form. Words are canonical.
pub fn is_canonical_rank1(t: &Term, alphabet: &Alphabet) -> Result<bool> {
    let form = Rank1Form::from_term(t)?;
    for a in t.letters() {
        alphabet.check_word(&[a])?;
    }
    Ok(form_is_canonical(&form, alphabet))
}

pub fn form_is_canonical(form: &Rank1Form, alphabet: &Alphabet) -> bool {
    let m = form.blocks.len();
    for i in 0..m {
        let x = &form.blocks[i].x;
        if !is_lyndon(x.letters(), alphabet).unwrap_or(false) {
            return false;
        }
        let prev_u = if i == 0 {
            &form.u0
        } else {
            &form.blocks[i - 1].u
        };
        if x.is_suffix_of(prev_u) {
            return false;
        }
        let next = if i + 1 < m {
            form.blocks[i + 1].x.pow(x.len())
        } else {
            Word::empty()
        };
        if x.is_prefix_of(&form.blocks[i].u.concat(&next)) {
            return false;
        }
    }
    true
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum StepKind {
    Contraction1,
    Contraction2,
    Contraction3L,
    Contraction3R,
    Expansion1,
    Expansion2,
    Expansion3L,
    Expansion3R,
    Shift,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RewriteStep {
    pub kind: StepKind,
    pub before: Term,
    pub after: Term,
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct RewriteTrace {
    pub steps: Vec<RewriteStep>,
}

fn spells(items: &[Item], w: &Word) -> bool {
    items.len() == w.len()
        && items
            .iter()
            .zip(w.letters())
            .all(|(it, &a)| *it == Item::Letter(a))
}

fn letters_item(w: &Word) -> Vec<Item> {
    w.letters().iter().map(|&a| Item::Letter(a)).collect()
}

fn splice(items: &[Item], at: usize, len: usize, with: Vec<Item>) -> Vec<Item> {
    let mut v = items[..at].to_vec();
    v.extend(with);
    v.extend_from_slice(&items[at + len..]);
    v
}

/// Every result of one contraction of the given type (1, 2, 3L or 3R).
fn contractions(items: &[Item], kind: StepKind) -> Vec<Vec<Item>> {
    let mut out = Vec::new();
    for (i, it) in items.iter().enumerate() {
        let Item::Pow(x, q) = it else { continue };
        match kind {
            StepKind::Contraction1 => {
                for n in 2..=x.len() {
                    if x.len() % n == 0 {
                        let root = x.slice(0, x.len() / n);
                        if root.pow(n) == *x {
                            out.push(splice(items, i, 1, vec![Item::Pow(root, q * n as i64)]));
                        }
                    }
                }
            }
            StepKind::Contraction2 => {
                if let Some(Item::Pow(y, r)) = items.get(i + 1) {
                    if x == y {
                        out.push(splice(items, i, 2, vec![Item::Pow(x.clone(), q + r)]));
                    }
                }
            }
            StepKind::Contraction3R => {
                let end = i + 1 + x.len();
                if end <= items.len() && spells(&items[i + 1..end], x) {
                    out.push(splice(
                        items,
                        i,
                        1 + x.len(),
                        vec![Item::Pow(x.clone(), q + 1)],
                    ));
                }
            }
            StepKind::Contraction3L => {
                if i >= x.len() && spells(&items[i - x.len()..i], x) {
                    out.push(splice(
                        items,
                        i - x.len(),
                        1 + x.len(),
                        vec![Item::Pow(x.clone(), q + 1)],
                    ));
                }
            }
            _ => unreachable!("not a contraction"),
        }
    }
    out
}

/// Every result of one application of `(xy)^{ω+i}x = x(yx)^{ω+i}`, either direction.
fn shifts(items: &[Item]) -> Vec<Vec<Item>> {
    let mut out = Vec::new();
    for (i, it) in items.iter().enumerate() {
        let Item::Pow(z, q) = it else { continue };
        for cut in 1..=z.len() {
            let (x, y) = (z.slice(0, cut), z.slice(cut, z.len()));
            let yx = y.concat(&x);
            let end = i + 1 + x.len();
            if end <= items.len() && spells(&items[i + 1..end], &x) {
                let mut with = letters_item(&x);
                with.push(Item::Pow(yx.clone(), *q));
                out.push(splice(items, i, 1 + x.len(), with));
            }
        }
        for cut in 0..z.len() {
            // z = yx with x = z[cut..]; x(yx)^{ω+i} ← (xy)^{ω+i}x
            let (y, x) = (z.slice(0, cut), z.slice(cut, z.len()));
            if i >= x.len() && spells(&items[i - x.len()..i], &x) {
                let mut with = vec![Item::Pow(x.concat(&y), *q)];
                with.extend(letters_item(&x));
                out.push(splice(items, i - x.len(), 1 + x.len(), with));
            }
        }
    }
    out
}

impl RewriteStep {
    /// True iff `after` is obtained from `before` by one instance of the named identity.
    pub fn is_valid_instance(&self) -> bool {
        let (Ok(before), Ok(after)) = (items_of(&self.before), items_of(&self.after)) else {
            return false;
        };
        use StepKind::*;
        match self.kind {
            Contraction1 | Contraction2 | Contraction3L | Contraction3R => {
                contractions(&before, self.kind).contains(&after)
            }
            Expansion1 => contractions(&after, Contraction1).contains(&before),
            Expansion2 => contractions(&after, Contraction2).contains(&before),
            Expansion3L => contractions(&after, Contraction3L).contains(&before),
            Expansion3R => contractions(&after, Contraction3R).contains(&before),
            Shift => shifts(&before).contains(&after),
        }
    }
}

struct Rewriter {
    items: Vec<Item>,
    trace: RewriteTrace,
}

impl Rewriter {
    fn apply(&mut self, kind: StepKind, next: Vec<Item>) {
        let before = term_of(&self.items);
        let after = term_of(&next);
        self.trace.steps.push(RewriteStep {
            kind,
            before,
            after,
        });
        self.items = next;
    }

    fn contract1(&mut self) -> Result<()> {
        for i in 0..self.items.len() {
            if let Item::Pow(x, q) = &self.items[i] {
                let (root, n) = primitive_root(x.letters())?;
                if n > 1 {
                    let q2 = q.checked_mul(n as i64).ok_or_else(overflow)?;
                    let next = splice(&self.items, i, 1, vec![Item::Pow(root, q2)]);
                    self.apply(StepKind::Contraction1, next);
                }
            }
        }
        Ok(())
    }

    fn rotate_to_lyndon(&mut self, alphabet: &Alphabet) -> Result<()> {
        let mut i = 0;
        while i < self.items.len() {
            if let Item::Pow(x, q) = self.items[i].clone() {
                let (u, v) = lyndon_split(x.letters(), alphabet)?;
                if !u.is_empty() {
                    let q1 = q.checked_sub(1).ok_or_else(overflow)?;
                    let mut with = vec![Item::Pow(x.clone(), q1)];
                    with.extend(letters_item(&x));
                    let next = splice(&self.items, i, 1, with);
                    self.apply(StepKind::Expansion3R, next);
                    let mut with = letters_item(&u);
                    with.push(Item::Pow(v.concat(&u), q1));
                    let next = splice(&self.items, i, 1 + u.len(), with);
                    self.apply(StepKind::Shift, next);
                    i += u.len();
                }
            }
            i += 1;
        }
        Ok(())
    }

    /// One pass of type-3 contractions, right before left. Returns whether anything changed.
    fn contract3(&mut self) -> Result<bool> {
        let mut changed = false;
        let mut i = 0;
        while i < self.items.len() {
            if let Item::Pow(x, q) = self.items[i].clone() {
                let end = i + 1 + x.len();
                if end <= self.items.len() && spells(&self.items[i + 1..end], &x) {
                    let q1 = q.checked_add(1).ok_or_else(overflow)?;
                    let next = splice(&self.items, i, 1 + x.len(), vec![Item::Pow(x, q1)]);
                    self.apply(StepKind::Contraction3R, next);
                    changed = true;
                    continue;
                }
                if i >= x.len() && spells(&self.items[i - x.len()..i], &x) {
                    let q1 = q.checked_add(1).ok_or_else(overflow)?;
                    let next = splice(
                        &self.items,
                        i - x.len(),
                        1 + x.len(),
                        vec![Item::Pow(x.clone(), q1)],
                    );
                    self.apply(StepKind::Contraction3L, next);
                    i -= x.len();
                    changed = true;
                    continue;
                }
            }
            i += 1;
        }
        Ok(changed)
    }

    fn contract2(&mut self) -> Result<bool> {
        let mut changed = false;
        let mut i = 0;
        while i + 1 < self.items.len() {
            if let (Item::Pow(x, q), Item::Pow(y, r)) = (&self.items[i], &self.items[i + 1]) {
                if x == y {
                    let s = q.checked_add(*r).ok_or_else(overflow)?;
                    let next = splice(&self.items, i, 2, vec![Item::Pow(x.clone(), s)]);
                    self.apply(StepKind::Contraction2, next);
                    changed = true;
                    continue;
                }
            }
            i += 1;
        }
        Ok(changed)
    }

    /// Standardizes the crucial portion starting with the power at item `i`.
    fn standardize(&mut self, i: usize) -> Result<()> {
        let Item::Pow(x, _) = self.items[i].clone() else {
            unreachable!()
        };
        let j = (i + 1..self.items.len())
            .find(|&j| matches!(self.items[j], Item::Pow(..)))
            .expect("a crucial portion has a right power");
        let Item::Pow(y, _) = self.items[j].clone() else {
            unreachable!()
        };
        let u: Vec<u8> = self.items[i + 1..j]
            .iter()
            .map(|it| match it {
                Item::Letter(a) => *a,
                Item::Pow(..) => unreachable!(),
            })
            .collect();
        let mut ell = 0;
        while u.len() + ell * y.len() < x.len() {
            ell += 1;
        }
        let mut uy = u.clone();
        for _ in 0..ell {
            uy.extend_from_slice(y.letters());
        }
        if ell == 0 || !uy.starts_with(x.letters()) {
            return Ok(());
        }
        let mut jpos = j;
        for _ in 0..ell {
            let Item::Pow(_, q) = self.items[jpos].clone() else {
                unreachable!()
            };
            let q1 = q.checked_sub(1).ok_or_else(overflow)?;
            let mut with = letters_item(&y);
            with.push(Item::Pow(y.clone(), q1));
            let next = splice(&self.items, jpos, 1, with);
            self.apply(StepKind::Expansion3L, next);
            jpos += y.len();
        }
        loop {
            let Item::Pow(_, q) = self.items[i].clone() else {
                unreachable!()
            };
            let end = i + 1 + x.len();
            if end <= jpos && spells(&self.items[i + 1..end], &x) {
                let q1 = q.checked_add(1).ok_or_else(overflow)?;
                let next = splice(&self.items, i, 1 + x.len(), vec![Item::Pow(x.clone(), q1)]);
                self.apply(StepKind::Contraction3R, next);
                jpos -= x.len();
            } else {
                break;
            }
        }
        Ok(())
    }
}

fn overflow() -> Error {
    Error::Invalid("exponent overflow".into())
}

/// Rewrites a rank-≤1 term into canonical form, recording every step.
pub fn canonicalize_rank1(t: &Term, alphabet: &Alphabet) -> Result<(Term, RewriteTrace)> {
    let items = items_of(t)?;
    for a in t.letters() {
        alphabet.check_word(&[a])?;
    }
    let mut rw = Rewriter {
        items,
        trace: RewriteTrace::default(),
    };
    rw.contract1()?;
    rw.rotate_to_lyndon(alphabet)?;
    loop {
        let a = rw.contract3()?;
        let b = rw.contract2()?;
        if !a && !b {
            break;
        }
    }
    let mut i = 0;
    while i < rw.items.len() {
        if matches!(rw.items[i], Item::Pow(..))
            && rw.items[i + 1..]
                .iter()
                .any(|it| matches!(it, Item::Pow(..)))
        {
            rw.standardize(i)?;
        }
        i += 1;
    }
    let result = term_of(&rw.items);
    if !form_is_canonical(&Rank1Form::from_items(&rw.items), alphabet) {
        return Err(Error::Inconsistent(format!(
            "canonicalization of {t} stopped at {result}, which is not canonical"
        )));
    }
    Ok((result, rw.trace))
}

/// A random rank-≤1 term: `blocks` powers with bases of length up to
/// `max_base`, separating words of length up to `max_gap`, exponents in `[-max_q, max_q]`.
pub fn random_rank1_term<R: Rng>(
    rng: &mut R,
    alphabet: &Alphabet,
    blocks: usize,
    max_base: usize,
    max_gap: usize,
    max_q: i64,
) -> Term {
    let letters = alphabet.letters();
    let word = |rng: &mut R, min: usize, max: usize| -> Word {
        let n = rng.gen_range(min..=max);
        Word::from_letters(
            (0..n)
                .map(|_| letters[rng.gen_range(0..letters.len())])
                .collect::<Vec<u8>>(),
        )
    };
    let mut items = letters_item(&word(rng, 0, max_gap));
    for _ in 0..blocks {
        let x = word(rng, 1, max_base);
        items.push(Item::Pow(x, rng.gen_range(-max_q..=max_q)));
        items.extend(letters_item(&word(rng, 0, max_gap)));
    }
    if items.is_empty() {
        items.push(Item::Letter(letters[0]));
    }
    term_of(&items)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::parse("ab").unwrap()
    }

    fn t(s: &str) -> Term {
        Term::parse(s).unwrap()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(t("a"), Term::Letter(b'a'));
        assert_eq!(
            t("(ab)^(w-1)"),
            Term::power(
                Term::concat(vec![Term::Letter(b'a'), Term::Letter(b'b')]),
                -1
            )
        );
        let alpha = t("(bababa)^w b^(w-3) b (bb)^(w+1)");
        let Term::Concat(parts) = &alpha else {
            panic!()
        };
        assert_eq!(parts.len(), 4);
        assert_eq!(parts[1], Term::power(Term::Letter(b'b'), -3));
        assert_eq!(t("a^3"), t("aaa"));
        assert_eq!(t("(ab)^2 a"), t("ababa"));
    }

    #[test]
    fn parse_errors_have_positions() {
        for (src, pos) in [
            ("a^", 2),
            ("(ab", 3),
            ("a^(w+)", 5),
            ("a)", 1),
            ("", 0),
            ("a^0", 2),
            ("a^(x)", 3),
        ] {
            match Term::parse(src) {
                Err(Error::Syntax { pos: p, .. }) => assert_eq!(p, pos, "{src}"),
                other => panic!("{src}: {other:?}"),
            }
        }
    }

    #[test]
    fn print_examples() {
        for s in [
            "b(ab)^w b^(w-1)",
            "a^(w+3) b(aab)^w aa(ab)^(w-2)",
            "(ab)^w abab^(w-1) b^3",
            "a",
        ] {
            assert_eq!(t(s).to_string(), s);
        }
        assert_eq!(t("bbbb a").to_string(), "b^4 a");
        assert_eq!(t("((ab)^w)^(w+1)").to_string(), "((ab)^w)^(w+1)");
    }

    #[test]
    fn rank_examples() {
        assert_eq!(t("ab").rank(), 0);
        assert_eq!(t("a^(w-1)").rank(), 1);
        assert_eq!(t("(x^w y x^w)^w").rank(), 2);
        assert!(matches!(
            canonicalize_rank1(&t("(a^w b)^w"), &ab()),
            Err(Error::RankTooHigh(2))
        ));
    }

    #[test]
    fn canonical_predicate_examples() {
        assert!(is_canonical_rank1(&t("b(abb)^(w-1) b^(w+2)"), &ab()).unwrap());
        assert!(is_canonical_rank1(&t("a^(w+3) b(aab)^w aa(ab)^(w-2)"), &ab()).unwrap());
        assert!(!is_canonical_rank1(&t("a(bab)^(w-1) (aa)^w"), &ab()).unwrap());
        assert!(!is_canonical_rank1(&t("(ab)^w abab^(w-1)b^3"), &ab()).unwrap());
        assert!(is_canonical_rank1(&t("abba"), &ab()).unwrap());
    }

    #[test]
    fn worked_example() {
        let (c, trace) = canonicalize_rank1(&t("(bababa)^w b^(w-3) b (bb)^(w+1)"), &ab()).unwrap();
        assert_eq!(c.to_string(), "b(ab)^w b^(w-1)");
        use StepKind::*;
        let kinds: Vec<StepKind> = trace.steps.iter().map(|s| s.kind).collect();
        assert_eq!(
            kinds,
            vec![
                Contraction1,
                Contraction1,
                Expansion3R,
                Shift,
                Contraction3R,
                Contraction2,
                Expansion3L,
                Contraction3R
            ]
        );
        assert!(trace.steps.iter().all(RewriteStep::is_valid_instance));
        assert_eq!(trace.steps[0].before, t("(bababa)^w b^(w-3) b (bb)^(w+1)"));
        assert_eq!(trace.steps.last().unwrap().after, c);
    }

    #[test]
    fn canonicalize_examples() {
        let (c, trace) = canonicalize_rank1(&t("b(abb)^(w-1) b^(w+2)"), &ab()).unwrap();
        assert_eq!(c, t("b(abb)^(w-1) b^(w+2)"));
        assert!(trace.steps.is_empty());
        let (c, _) = canonicalize_rank1(&t("(abab)^w"), &ab()).unwrap();
        assert_eq!(c.to_string(), "(ab)^w");
        let (c, _) = canonicalize_rank1(&t("a(bab)^(w-1) (aa)^w"), &ab()).unwrap();
        assert!(is_canonical_rank1(&c, &ab()).unwrap());
    }

    #[test]
    fn step_validation_rejects_mislabeled_steps() {
        let step = RewriteStep {
            kind: StepKind::Contraction3L,
            before: t("a^w a"),
            after: t("a^(w+1)"),
        };
        assert!(!step.is_valid_instance());
        let step = RewriteStep {
            kind: StepKind::Contraction3R,
            ..step
        };
        assert!(step.is_valid_instance());
        let step = RewriteStep {
            kind: StepKind::Shift,
            before: t("(ba)^(w-1) b a"),
            after: t("b(ab)^(w-1) a"),
        };
        assert!(step.is_valid_instance());
    }

    #[test]
    fn random_terms_reach_canonical_form() {
        use rand::SeedableRng;
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for letters in ["ab", "abc"] {
            let alphabet = Alphabet::parse(letters).unwrap();
            for _ in 0..1500 {
                let term = random_rank1_term(&mut rng, &alphabet, 3, 6, 5, 4);
                let (c, trace) = canonicalize_rank1(&term, &alphabet).unwrap();
                assert!(is_canonical_rank1(&c, &alphabet).unwrap(), "{term} -> {c}");
                assert!(
                    trace.steps.iter().all(RewriteStep::is_valid_instance),
                    "{term}"
                );
                let (again, steps) = canonicalize_rank1(&c, &alphabet).unwrap();
                assert_eq!(again, c);
                assert!(steps.steps.is_empty());
            }
        }
    }
}
