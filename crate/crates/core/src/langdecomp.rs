//! Finite factorial languages, their boundary set `L̈`, and coordinate sequences.
//!
//! A finite factorial language is stored as the trie of its members. Because
//! the language is closed under factors, the trie is also closed under
//! dropping the first letter, so every node `v` has a suffix link to the node
//! of `v_ω`. One left-to-right pass over a word with these links finds every
//! maximal factor in `L` and every occurrence of a boundary word.

use std::collections::HashMap;
use std::fmt;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::words::{Alphabet, Word};

pub type NodeId = u32;

const ROOT: NodeId = 0;
const NONE: NodeId = NodeId::MAX;

#[derive(Clone)]
struct Node {
    parent: NodeId,
    letter: u8,
    depth: u32,
    link: NodeId,
}

#[derive(Clone)]
pub struct FactorialLanguage {
    alphabet: Alphabet,
    nodes: Vec<Node>,
    /// `children[node * |A| + rank(letter)]`
    children: Vec<NodeId>,
    /// Boundary words as `(node of v_α, last letter)`, shortlex ordered.
    boundary: Vec<(NodeId, u8)>,
    boundary_index: HashMap<(NodeId, u8), u32>,
    max_len: usize,
}

/// Positions of the coordinates of a word, as produced by [`FactorialLanguage::scan`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scan {
    /// `w₀, …, w_m` as half-open ranges with their trie nodes.
    pub factors: Vec<(Range<usize>, NodeId)>,
    /// `ẅ₁, …, ẅ_m` as half-open ranges with their boundary indices.
    pub boundaries: Vec<(Range<usize>, u32)>,
}

impl Scan {
    /// The `L̈`-length `m`.
    pub fn m(&self) -> usize {
        self.boundaries.len()
    }
}

/// `sc_L[w] = (w₀, ẅ₁, w₁, …, ẅ_m, w_m)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CoordinateSequence {
    pub first: Word,
    pub steps: Vec<(Word, Word)>,
}

impl CoordinateSequence {
    pub fn m(&self) -> usize {
        self.steps.len()
    }

    pub fn last(&self) -> &Word {
        self.steps.last().map(|(_, w)| w).unwrap_or(&self.first)
    }

    pub fn to_vec(&self) -> Vec<Word> {
        let mut v = vec![self.first.clone()];
        for (b, w) in &self.steps {
            v.push(b.clone());
            v.push(w.clone());
        }
        v
    }

    /// Inverse of [`to_vec`](Self::to_vec); the list must have odd length.
    pub fn from_vec(items: Vec<Word>) -> Result<Self> {
        if items.len().is_multiple_of(2) {
            return Err(Error::MalformedCoordinates(format!(
                "expected an odd number of coordinates, got {}",
                items.len()
            )));
        }
        let mut it = items.into_iter();
        let first = it.next().expect("odd length");
        let mut steps = Vec::new();
        while let (Some(b), Some(w)) = (it.next(), it.next()) {
            steps.push((b, w));
        }
        Ok(CoordinateSequence { first, steps })
    }

    fn concat(mut self, boundary: Word, rest: CoordinateSequence) -> Self {
        self.steps.push((boundary, rest.first));
        self.steps.extend(rest.steps);
        self
    }
}

impl fmt::Display for CoordinateSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.to_vec().iter().map(|w| w.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Which occurrence the recursive construction of `sc_L` selects.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selection {
    Leftmost,
    Rightmost,
}

impl FactorialLanguage {
    /// Factorial closure of `words` together with every letter of the alphabet.
    /// Also returns the members that were not listed in `words`.
    pub fn closure<'a, I>(alphabet: Alphabet, words: I) -> Result<(Self, Vec<Word>)>
    where
        I: IntoIterator<Item = &'a Word>,
    {
        let words: Vec<&Word> = words.into_iter().collect();
        let lang = FactorialLanguage::generated_by(alphabet, words.iter().copied())?;
        let listed: std::collections::HashSet<&[u8]> = words.iter().map(|w| w.letters()).collect();
        let added = lang
            .words()
            .into_iter()
            .filter(|w| !listed.contains(w.letters()))
            .collect();
        Ok((lang, added))
    }

    /// The factorial closure alone, without listing the added members.
    pub fn generated_by<'a, I>(alphabet: Alphabet, words: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a Word>,
    {
        let mut lang = FactorialLanguage {
            alphabet: alphabet.clone(),
            nodes: vec![Node {
                parent: NONE,
                letter: 0,
                depth: 0,
                link: ROOT,
            }],
            children: vec![NONE; alphabet.len()],
            boundary: Vec::new(),
            boundary_index: HashMap::new(),
            max_len: 0,
        };
        let letters = alphabet.letters().to_vec();
        for l in &letters {
            lang.absorb(&[*l]);
        }
        for w in words {
            if w.is_empty() {
                return Err(Error::InvalidLanguage(
                    "the empty word cannot be a member".into(),
                ));
            }
            alphabet.check_word(w.letters())?;
            lang.absorb(w.letters());
        }
        lang.finish();
        Ok(lang)
    }

    /// Builds `L` from an explicit member list, which must already be factorial with content `A`.
    pub fn new<'a, I>(alphabet: Alphabet, words: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a Word>,
    {
        let (lang, added) = FactorialLanguage::closure(alphabet, words)?;
        if let Some(w) = added.first() {
            return Err(Error::InvalidLanguage(format!(
                "not factorial with content A: {w} is missing"
            )));
        }
        Ok(lang)
    }

    /// `L_k = A^{≤k}`.
    pub fn bounded(alphabet: Alphabet, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidLanguage("k must be at least 1".into()));
        }
        let top = alphabet.words_of_length(k);
        Ok(FactorialLanguage::closure(alphabet, &top)?.0)
    }

    /// Online generalized suffix-trie insertion: after this call every factor of `w` is a node.
    fn absorb(&mut self, w: &[u8]) {
        let mut cur = ROOT;
        for &c in w {
            let r = self.alphabet.rank(c);
            let mut v = cur;
            let mut last_new = NONE;
            loop {
                let existing = self.children[v as usize * self.alphabet.len() + r];
                if existing != NONE {
                    if last_new != NONE {
                        self.nodes[last_new as usize].link = existing;
                    }
                    break;
                }
                let nn = self.nodes.len() as NodeId;
                self.nodes.push(Node {
                    parent: v,
                    letter: c,
                    depth: self.nodes[v as usize].depth + 1,
                    link: ROOT,
                });
                self.children
                    .extend(std::iter::repeat_n(NONE, self.alphabet.len()));
                self.children[v as usize * self.alphabet.len() + r] = nn;
                if last_new != NONE {
                    self.nodes[last_new as usize].link = nn;
                }
                last_new = nn;
                if v == ROOT {
                    break;
                }
                v = self.nodes[v as usize].link;
            }
            cur = self.children[cur as usize * self.alphabet.len() + r];
        }
    }

    fn finish(&mut self) {
        self.max_len = self
            .nodes
            .iter()
            .map(|n| n.depth as usize)
            .max()
            .unwrap_or(0);
        // L̈ = {va : v ∈ L, va ∉ L, (va)_ω ∈ L}; collect in shortlex order (BFS).
        let mut boundary = Vec::new();
        for node in self.bfs() {
            if node == ROOT {
                continue;
            }
            let link = self.nodes[node as usize].link;
            for &l in self.alphabet.letters() {
                if self.child(node, l).is_none() && self.child(link, l).is_some() {
                    boundary.push((node, l));
                }
            }
        }
        self.boundary_index = boundary
            .iter()
            .enumerate()
            .map(|(i, &key)| (key, i as u32))
            .collect();
        self.boundary = boundary;
    }

    fn bfs(&self) -> Vec<NodeId> {
        let mut order = vec![ROOT];
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            for &l in self.alphabet.letters() {
                if let Some(c) = self.child(v, l) {
                    order.push(c);
                }
            }
            i += 1;
        }
        order
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Number of members.
    pub fn len(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn child(&self, node: NodeId, letter: u8) -> Option<NodeId> {
        if !self.alphabet.contains(letter) {
            return None;
        }
        let c = self.children[node as usize * self.alphabet.len() + self.alphabet.rank(letter)];
        (c != NONE).then_some(c)
    }

    pub fn suffix_link(&self, node: NodeId) -> NodeId {
        self.nodes[node as usize].link
    }

    pub fn node(&self, w: &[u8]) -> Option<NodeId> {
        w.iter().try_fold(ROOT, |v, &l| self.child(v, l))
    }

    pub fn contains(&self, w: &[u8]) -> bool {
        !w.is_empty() && self.node(w).is_some()
    }

    pub fn word_of(&self, node: NodeId) -> Word {
        let mut v = Vec::with_capacity(self.nodes[node as usize].depth as usize);
        let mut cur = node;
        while cur != ROOT {
            v.push(self.nodes[cur as usize].letter);
            cur = self.nodes[cur as usize].parent;
        }
        v.reverse();
        Word::from_letters(v)
    }

    /// Members in shortlex order.
    pub fn words(&self) -> Vec<Word> {
        self.member_nodes()
            .into_iter()
            .map(|n| self.word_of(n))
            .collect()
    }

    /// Nodes of the members in shortlex order.
    pub fn member_nodes(&self) -> Vec<NodeId> {
        let mut order = self.bfs();
        order.remove(0);
        order
    }

    /// `L̈` in shortlex order.
    pub fn boundary(&self) -> Vec<Word> {
        (0..self.boundary.len() as u32)
            .map(|i| self.boundary_word(i))
            .collect()
    }

    pub fn boundary_len(&self) -> usize {
        self.boundary.len()
    }

    pub fn boundary_word(&self, index: u32) -> Word {
        let (node, l) = self.boundary[index as usize];
        let mut w = self.word_of(node).into_letters();
        w.push(l);
        Word::from_letters(w)
    }

    /// Index of `w` in [`boundary`](Self::boundary), if `w ∈ L̈`.
    pub fn boundary_index(&self, w: &[u8]) -> Option<u32> {
        let (&last, init) = w.split_last()?;
        let node = self.node(init)?;
        self.boundary_index.get(&(node, last)).copied()
    }

    pub fn is_boundary(&self, w: &[u8]) -> bool {
        self.boundary_index(w).is_some()
    }

    /// Single pass computing the positions of `sc_L[w]`. `w` must be non-empty
    /// and over the alphabet.
    pub fn scan(&self, w: &[u8]) -> Scan {
        debug_assert!(!w.is_empty());
        let mut factors = Vec::new();
        let mut boundaries = Vec::new();
        let mut node = ROOT;
        let mut start = 0usize;
        // the maximal factor opened by the last boundary occurrence has been recorded
        let mut recorded = false;
        for (q, &c) in w.iter().enumerate() {
            loop {
                if let Some(next) = self.child(node, c) {
                    node = next;
                    break;
                }
                if !recorded {
                    factors.push((start..q, node));
                    recorded = true;
                }
                let link = self.suffix_link(node);
                if self.child(link, c).is_some() {
                    let idx = self.boundary_index[&(node, c)];
                    boundaries.push((start..q + 1, idx));
                    recorded = false;
                }
                node = link;
                start += 1;
            }
        }
        factors.push((start..w.len(), node));
        Scan {
            factors,
            boundaries,
        }
    }

    pub fn coordinates(&self, w: &Word) -> Result<CoordinateSequence> {
        if w.is_empty() {
            return Err(Error::EmptyWord("coordinates"));
        }
        self.alphabet.check_word(w.letters())?;
        let scan = self.scan(w.letters());
        let l = w.letters();
        let first = Word::from(&l[scan.factors[0].0.clone()]);
        let steps = scan
            .boundaries
            .iter()
            .zip(&scan.factors[1..])
            .map(|((b, _), (f, _))| (Word::from(&l[b.clone()]), Word::from(&l[f.clone()])))
            .collect();
        Ok(CoordinateSequence { first, steps })
    }

    /// The recursive construction: pick an occurrence `v̈ = w[p,q]` of a boundary
    /// word and concatenate `sc[w[1,q-1]] (v̈) sc[w[p+1,n]]`.
    pub fn coordinates_recursive(&self, w: &Word, sel: Selection) -> Result<CoordinateSequence> {
        if w.is_empty() {
            return Err(Error::EmptyWord("coordinates"));
        }
        self.alphabet.check_word(w.letters())?;
        Ok(self.recursive(w.letters(), sel))
    }

    fn recursive(&self, w: &[u8], sel: Selection) -> CoordinateSequence {
        if self.contains(w) {
            return CoordinateSequence {
                first: Word::from(w),
                steps: Vec::new(),
            };
        }
        let mut found = None;
        let max = self.max_len + 1;
        'outer: for p in 0..w.len() {
            let p = match sel {
                Selection::Leftmost => p,
                Selection::Rightmost => w.len() - 1 - p,
            };
            for len in 2..=max.min(w.len() - p) {
                if self.is_boundary(&w[p..p + len]) {
                    found = Some((p, p + len));
                    break 'outer;
                }
            }
        }
        let (p, q) = found.expect("a word outside L has a boundary factor");
        let left = self.recursive(&w[..q - 1], sel);
        let right = self.recursive(&w[p + 1..], sel);
        left.concat(Word::from(&w[p..q]), right)
    }

    /// Recovers `w` from `sc_L[w]`.
    pub fn reconstruct(&self, sc: &CoordinateSequence) -> Result<Word> {
        let bad = |msg: String| Error::MalformedCoordinates(msg);
        let check_member = |w: &Word| -> Result<()> {
            if !self.contains(w.letters()) {
                return Err(bad(format!("{w} is not in L")));
            }
            Ok(())
        };
        check_member(&sc.first)?;
        // Peel from the right: the suffix z = (ẅ_i)_ω w'' rebuilt so far.
        let mut tail: Vec<u8> = sc.last().letters().to_vec();
        let mut items: Vec<&Word> = vec![&sc.first];
        for (b, w) in &sc.steps {
            if !self.is_boundary(b.letters()) {
                return Err(bad(format!("{b} is not in L̈")));
            }
            check_member(w)?;
            items.push(b);
            items.push(w);
        }
        // Walk steps right to left: w_{i-1} = w'(ẅ_i)_α and z_i = (ẅ_i)_ω w''.
        for i in (0..sc.steps.len()).rev() {
            let b = &sc.steps[i].0;
            let prev = if i == 0 {
                &sc.first
            } else {
                &sc.steps[i - 1].1
            };
            let b_omega = b.omega();
            if !tail.starts_with(b_omega.letters()) {
                return Err(bad(format!(
                    "({b})_ω is not a prefix of the rebuilt suffix"
                )));
            }
            let b_alpha = b.alpha();
            if !b_alpha.is_suffix_of(prev) {
                return Err(bad(format!("({b})_α is not a suffix of {prev}")));
            }
            let w_prime = &prev.letters()[..prev.len() - b_alpha.len()];
            let mut rebuilt = w_prime.to_vec();
            rebuilt.push(b.letters()[0]);
            rebuilt.extend_from_slice(&tail);
            tail = rebuilt;
        }
        let word = Word::from_letters(tail);
        if &self.coordinates(&word)? != sc {
            return Err(bad(format!("sequence is not sc_L of {word}")));
        }
        Ok(word)
    }
}

impl fmt::Debug for FactorialLanguage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FactorialLanguage")
            .field("alphabet", &self.alphabet)
            .field("size", &self.len())
            .field("boundary", &self.boundary.len())
            .field("max_len", &self.max_len)
            .finish()
    }
}
