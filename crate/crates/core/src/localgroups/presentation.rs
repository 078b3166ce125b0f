use std::fmt::Write as _;

use super::{LocalGroup, Structure};
use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, Perm};
use crate::words::Word;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Token {
    Letter(u8),
    Grp(Perm),
}

/// A word over `A ∪ G`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct MixedWord(pub Vec<Token>);

impl MixedWord {
    pub fn from_word(w: &Word) -> Self {
        MixedWord(w.letters().iter().map(|&a| Token::Letter(a)).collect())
    }

    pub fn push(&mut self, t: Token) {
        self.0.push(t);
    }

    pub fn extend_word(&mut self, w: &Word) {
        self.0.extend(w.letters().iter().map(|&a| Token::Letter(a)));
    }

    pub fn concat(&self, other: &MixedWord) -> MixedWord {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        MixedWord(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `u₀ g₁ u₁ ⋯ g_n u_n` with runs of group tokens multiplied together.
    pub fn split(&self, _group: &FiniteGroup) -> Result<(Vec<Vec<u8>>, Vec<Perm>)> {
        if self.0.is_empty() {
            return Err(Error::EmptyWord("mixed word"));
        }
        let mut segments = vec![Vec::new()];
        let mut groups: Vec<Perm> = Vec::new();
        let mut last_was_group = false;
        for t in &self.0 {
            match t {
                Token::Letter(a) => {
                    segments.last_mut().expect("non-empty").push(*a);
                    last_was_group = false;
                }
                Token::Grp(g) => {
                    if last_was_group {
                        let prev = groups.last_mut().expect("group run");
                        *prev = prev.then(g);
                    } else {
                        groups.push(g.clone());
                        segments.push(Vec::new());
                    }
                    last_was_group = true;
                }
            }
        }
        Ok((segments, groups))
    }

    pub fn render(&self, group: &FiniteGroup) -> String {
        let mut s = String::new();
        for t in &self.0 {
            match t {
                Token::Letter(a) => s.push(*a as char),
                Token::Grp(g) => {
                    let _ = write!(s, "[{}]", group.name(g));
                }
            }
        }
        s
    }

    /// Letters and bracketed group elements, e.g. `a[g]a`.
    pub fn parse(text: &str, group: &FiniteGroup) -> Result<Self> {
        let mut tokens = Vec::new();
        let mut chars = text.char_indices().peekable();
        while let Some((pos, ch)) = chars.next() {
            match ch {
                c if c.is_whitespace() => {}
                '[' => {
                    let start = pos + 1;
                    let mut end = None;
                    let mut depth = 0;
                    for (p, c) in chars.by_ref() {
                        match c {
                            '[' => depth += 1,
                            ']' if depth == 0 => {
                                end = Some(p);
                                break;
                            }
                            ']' => depth -= 1,
                            _ => {}
                        }
                    }
                    let end = end.ok_or(Error::Syntax {
                        pos,
                        msg: "unclosed '['".into(),
                    })?;
                    let name = &text[start..end];
                    let g = group
                        .parse_element(name)
                        .map_err(|_| Error::UnknownGenerator(name.to_string()))?;
                    tokens.push(Token::Grp(g));
                }
                c if c.is_ascii_alphabetic() => tokens.push(Token::Letter(c as u8)),
                c => {
                    return Err(Error::Syntax {
                        pos,
                        msg: format!("unexpected '{c}'"),
                    })
                }
            }
        }
        if tokens.is_empty() {
            return Err(Error::EmptyWord("relation side"));
        }
        Ok(MixedWord(tokens))
    }
}

/// `⟨A ∪ G | R_G ∪ R_f⟩` with one generator per group element.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub letters: Vec<u8>,
    pub group_generators: Vec<Perm>,
    pub relations: Vec<(MixedWord, MixedWord)>,
}

impl Presentation {
    pub fn render(&self, group: &FiniteGroup) -> Vec<String> {
        self.relations
            .iter()
            .map(|(l, r)| format!("{} = {}", l.render(group), r.render(group)))
            .collect()
    }

    pub fn generator_names(&self, group: &FiniteGroup) -> Vec<String> {
        let mut v: Vec<String> = self
            .letters
            .iter()
            .map(|&a| (a as char).to_string())
            .collect();
        v.extend(
            self.group_generators
                .iter()
                .map(|g| format!("[{}]", group.name(g))),
        );
        v
    }

    pub fn parse_relations(
        lines: &[String],
        group: &FiniteGroup,
    ) -> Result<Vec<(MixedWord, MixedWord)>> {
        lines
            .iter()
            .map(|line| {
                let (l, r) = line.split_once('=').ok_or_else(|| Error::Syntax {
                    pos: 0,
                    msg: format!("missing '=' in {line}"),
                })?;
                Ok((MixedWord::parse(l, group)?, MixedWord::parse(r, group)?))
            })
            .collect()
    }
}

impl<S: Structure> LocalGroup<S> {
    /// `R_G` as the full multiplication table, then `r_u: eue = f(u)` for `u ∈ L`
    /// and `r_v̈: v̈ = v̈_α f(v̈) v̈_ω` for `v̈ ∈ L̈`.
    pub fn emit_presentation(&self) -> Result<Presentation> {
        let g = self.group();
        let elems = g.elements()?.to_vec();
        let e = g.identity();
        let mut relations = Vec::new();
        for a in &elems {
            for b in &elems {
                relations.push((
                    MixedWord(vec![Token::Grp(a.clone()), Token::Grp(b.clone())]),
                    MixedWord(vec![Token::Grp(a.then(b))]),
                ));
            }
        }
        for u in self.structure().members()? {
            let mut lhs = MixedWord(vec![Token::Grp(e.clone())]);
            lhs.extend_word(&u);
            lhs.push(Token::Grp(e.clone()));
            relations.push((lhs, MixedWord(vec![Token::Grp(self.f_hat(u.letters()))])));
        }
        for v in self.structure().boundary_words()? {
            let fv = self
                .structure()
                .f_value(v.letters())
                .expect("f is total on the boundary");
            let mut rhs = MixedWord::from_word(&v.alpha());
            rhs.push(Token::Grp(fv));
            rhs.extend_word(&v.omega());
            relations.push((MixedWord::from_word(&v), rhs));
        }
        Ok(Presentation {
            letters: self.alphabet().letters().to_vec(),
            group_generators: elems,
            relations,
        })
    }

    /// True iff both sides of every relation have the same `f̌`-value.
    pub fn verify_relations(&self, relations: &[(MixedWord, MixedWord)]) -> Result<bool> {
        for (l, r) in relations {
            for side in [l, r] {
                for t in &side.0 {
                    match t {
                        Token::Letter(a) if !self.alphabet().contains(*a) => {
                            return Err(Error::UnknownGenerator((*a as char).to_string()))
                        }
                        Token::Grp(g) if !self.group().contains(g) => {
                            return Err(Error::UnknownGenerator(self.group().name(g)))
                        }
                        _ => {}
                    }
                }
            }
            if self.f_check(l)? != self.f_check(r)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
