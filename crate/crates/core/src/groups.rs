//! Finite groups represented by permutations, free-group words, and the
//! separating homomorphisms used to build test semigroups.
//!
//! Every group element is a [`Perm`]. Products are read left to right: `a·b`
//! applies `a` first and then `b`. Table-backed groups are embedded through
//! their right regular representation, so a table group on `n` elements is a
//! permutation group of degree `n` that keeps its element names.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Enumeration cap for permutation groups given by generators.
pub const ENUMERATION_LIMIT: usize = 200_000;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm((0..degree as u32).collect())
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            let slot = seen
                .get_mut(i as usize)
                .ok_or_else(|| Error::InvalidGroup(format!("image {i} out of range")))?;
            if *slot {
                return Err(Error::InvalidGroup(format!("image {i} repeated")));
            }
            *slot = true;
        }
        Ok(Perm(images))
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, point: u32) -> u32 {
        self.0[point as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm(inv)
    }

    pub fn pow(&self, n: i64) -> Perm {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Perm::identity(self.degree());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&sq);
            }
            sq = sq.then(&sq);
            e >>= 1;
        }
        acc
    }

    /// Least common multiple of the cycle lengths.
    pub fn order(&self) -> u64 {
        let mut seen = vec![false; self.0.len()];
        let mut order = 1u64;
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                p = self.0[p] as usize;
                len += 1;
            }
            order = lcm(order, len);
        }
        order
    }

    fn one_line(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        format!("({})", parts.join(","))
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

#[derive(Clone, Debug)]
enum Backing {
    Table {
        names: Vec<String>,
        index: HashMap<Perm, usize>,
    },
    Generated,
}

/// A finite group of permutations of `{0, …, degree-1}`.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    degree: usize,
    generators: Vec<Perm>,
    backing: Backing,
    elements: OnceLock<std::result::Result<Vec<Perm>, usize>>,
}

/// Serialized form of a group.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum GroupDescription {
    Table {
        elements: Vec<String>,
        identity: String,
        table: Vec<Vec<String>>,
    },
    Permutation {
        degree: usize,
        generators: Vec<Vec<u32>>,
    },
}

impl FiniteGroup {
    pub fn trivial() -> Self {
        FiniteGroup::cyclic(1)
    }

    /// `C_n` as a table group with elements `e, g, g^2, …`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let names: Vec<String> = (0..n)
            .map(|i| match i {
                0 => "e".to_string(),
                1 => "g".to_string(),
                _ => format!("g^{i}"),
            })
            .collect();
        let table: Vec<Vec<usize>> = (0..n)
            .map(|i| (0..n).map(|j| (i + j) % n).collect())
            .collect();
        FiniteGroup::from_index_table(names, &table)
    }

    /// The symmetric group on `n` points, generated by `(0 1)` and the `n`-cycle.
    pub fn symmetric(n: usize) -> Self {
        let mut gens = Vec::new();
        if n >= 2 {
            let mut t: Vec<u32> = (0..n as u32).collect();
            t.swap(0, 1);
            gens.push(Perm(t));
            gens.push(Perm((0..n as u32).map(|i| (i + 1) % n as u32).collect()));
        }
        FiniteGroup::generated(n, gens).expect("valid generators")
    }

    pub fn generated(degree: usize, generators: Vec<Perm>) -> Result<Self> {
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::InvalidGroup(format!(
                    "generator {} has degree {}, expected {degree}",
                    g.one_line(),
                    g.degree()
                )));
            }
        }
        let generators = generators
            .into_iter()
            .filter(|g| !g.is_identity())
            .collect();
        Ok(FiniteGroup {
            degree,
            generators,
            backing: Backing::Generated,
            elements: OnceLock::new(),
        })
    }

    fn from_index_table(names: Vec<String>, table: &[Vec<usize>]) -> Self {
        let n = names.len();
        let perms: Vec<Perm> = (0..n)
            .map(|g| Perm((0..n).map(|x| table[x][g] as u32).collect()))
            .collect();
        let index = perms
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        FiniteGroup {
            degree: n,
            generators: perms.iter().filter(|p| !p.is_identity()).cloned().collect(),
            backing: Backing::Table { names, index },
            elements: OnceLock::from(Ok(perms)),
        }
    }

    /// Builds a table group, checking closure, identity, inverses and associativity.
    pub fn from_table(names: Vec<String>, identity: &str, table: Vec<Vec<String>>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::InvalidGroup("no elements".into()));
        }
        let pos: HashMap<&str, usize> = names
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        if pos.len() != n {
            return Err(Error::InvalidGroup("duplicate element names".into()));
        }
        let e = *pos
            .get(identity)
            .ok_or_else(|| Error::UnknownElement(identity.to_string()))?;
        if table.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidGroup(format!("table must be {n}×{n}")));
        }
        let mut t = vec![vec![0usize; n]; n];
        for (i, row) in table.iter().enumerate() {
            for (j, name) in row.iter().enumerate() {
                t[i][j] = *pos
                    .get(name.as_str())
                    .ok_or_else(|| Error::UnknownElement(name.clone()))?;
            }
        }
        for x in 0..n {
            if t[e][x] != x || t[x][e] != x {
                return Err(Error::InvalidGroup(format!("{identity} is not neutral")));
            }
            if !(0..n).any(|y| t[x][y] == e) {
                return Err(Error::InvalidGroup(format!("{} has no inverse", names[x])));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if t[t[a][b]][c] != t[a][t[b][c]] {
                        return Err(Error::InvalidGroup(format!(
                            "not associative at ({}, {}, {})",
                            names[a], names[b], names[c]
                        )));
                    }
                }
            }
        }
        // Reorder so that the identity comes first.
        let mut order: Vec<usize> = (0..n).collect();
        order.swap(0, e);
        let mut back = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            back[old] = new;
        }
        let names2 = order.iter().map(|&i| names[i].clone()).collect();
        let table2: Vec<Vec<usize>> = order
            .iter()
            .map(|&i| order.iter().map(|&j| back[t[i][j]]).collect())
            .collect();
        Ok(FiniteGroup::from_index_table(names2, &table2))
    }

    pub fn from_description(desc: &GroupDescription) -> Result<Self> {
        match desc {
            GroupDescription::Table {
                elements,
                identity,
                table,
            } => FiniteGroup::from_table(elements.clone(), identity, table.clone()),
            GroupDescription::Permutation { degree, generators } => {
                let gens = generators
                    .iter()
                    .map(|g| Perm::from_images(g.clone()))
                    .collect::<Result<Vec<_>>>()?;
                FiniteGroup::generated(*degree, gens)
            }
        }
    }

    pub fn description(&self) -> GroupDescription {
        match &self.backing {
            Backing::Table { names, .. } => {
                let elems = self.elements().expect("table groups are enumerated");
                GroupDescription::Table {
                    elements: names.clone(),
                    identity: names[0].clone(),
                    table: elems
                        .iter()
                        .map(|a| elems.iter().map(|b| self.name(&a.then(b))).collect())
                        .collect(),
                }
            }
            Backing::Generated => GroupDescription::Permutation {
                degree: self.degree,
                generators: self.generators.iter().map(|g| g.0.clone()).collect(),
            },
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn is_table(&self) -> bool {
        matches!(self.backing, Backing::Table { .. })
    }

    pub fn identity(&self) -> Perm {
        Perm::identity(self.degree)
    }

    pub fn multiply(&self, a: &Perm, b: &Perm) -> Perm {
        a.then(b)
    }

    pub fn inverse(&self, a: &Perm) -> Perm {
        a.inverse()
    }

    pub fn element_order(&self, g: &Perm) -> u64 {
        g.order()
    }

    /// All elements, identity first. Fails for generated groups larger than
    /// [`ENUMERATION_LIMIT`].
    pub fn elements(&self) -> Result<&[Perm]> {
        let res = self.elements.get_or_init(|| {
            let id = self.identity();
            let mut seen: HashSet<Perm> = HashSet::from([id.clone()]);
            let mut list = vec![id.clone()];
            let mut queue = VecDeque::from([id]);
            while let Some(x) = queue.pop_front() {
                for g in &self.generators {
                    let y = x.then(g);
                    if seen.insert(y.clone()) {
                        if list.len() >= ENUMERATION_LIMIT {
                            return Err(ENUMERATION_LIMIT);
                        }
                        list.push(y.clone());
                        queue.push_back(y);
                    }
                }
            }
            Ok(list)
        });
        match res {
            Ok(v) => Ok(v),
            Err(limit) => Err(Error::TooLarge(format!(
                "group has more than {limit} elements"
            ))),
        }
    }

    pub fn order(&self) -> Result<usize> {
        Ok(self.elements()?.len())
    }

    pub fn contains(&self, g: &Perm) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        match &self.backing {
            Backing::Table { index, .. } => index.contains_key(g),
            Backing::Generated => match self.elements() {
                Ok(els) => els.contains(g),
                Err(_) => true,
            },
        }
    }

    pub fn name(&self, g: &Perm) -> String {
        match &self.backing {
            Backing::Table { names, index } => match index.get(g) {
                Some(&i) => names[i].clone(),
                None => g.one_line(),
            },
            Backing::Generated => g.one_line(),
        }
    }

    /// Inverse of [`name`](Self::name). Permutations are written `(i0,i1,…)`.
    pub fn parse_element(&self, text: &str) -> Result<Perm> {
        let text = text.trim();
        if let Backing::Table { names, .. } = &self.backing {
            if let Some(i) = names.iter().position(|n| n == text) {
                return Ok(self.elements()?[i].clone());
            }
        }
        let inner = text
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::UnknownElement(text.to_string()))?;
        let images = inner
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| s.trim().parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::UnknownElement(text.to_string()))?;
        let p = Perm::from_images(images).map_err(|_| Error::UnknownElement(text.to_string()))?;
        if !self.contains(&p) {
            return Err(Error::UnknownElement(text.to_string()));
        }
        Ok(p)
    }
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.order() {
            Ok(n) => write!(f, "group of order {n} on {} points", self.degree),
            Err(_) => write!(f, "group on {} points", self.degree),
        }
    }
}

/// A signed variable `v^{±1}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Signed {
    pub var: u32,
    pub inv: bool,
}

impl Signed {
    pub fn inverse(self) -> Signed {
        Signed {
            var: self.var,
            inv: !self.inv,
        }
    }
}

/// An element of the free group over variables `0, 1, 2, …`, kept as a word.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FreeGroupWord(pub Vec<Signed>);

impl FreeGroupWord {
    pub fn empty() -> Self {
        FreeGroupWord(Vec::new())
    }

    pub fn var(v: u32) -> Self {
        FreeGroupWord(vec![Signed { var: v, inv: false }])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, s: Signed) {
        self.0.push(s);
    }

    pub fn concat(&self, other: &FreeGroupWord) -> FreeGroupWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        FreeGroupWord(v)
    }

    pub fn inverse(&self) -> FreeGroupWord {
        FreeGroupWord(self.0.iter().rev().map(|s| s.inverse()).collect())
    }

    pub fn pow(&self, n: i64) -> FreeGroupWord {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut v = Vec::with_capacity(base.len() * n.unsigned_abs() as usize);
        for _ in 0..n.unsigned_abs() {
            v.extend_from_slice(&base.0);
        }
        FreeGroupWord(v)
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|s| !s.inv)
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|p| p[0] != p[1].inverse())
    }

    pub fn reduce(&self) -> FreeGroupWord {
        let mut stack: Vec<Signed> = Vec::with_capacity(self.0.len());
        for &s in &self.0 {
            if stack.last() == Some(&s.inverse()) {
                stack.pop();
            } else {
                stack.push(s);
            }
        }
        FreeGroupWord(stack)
    }

    /// Largest variable index plus one.
    pub fn var_bound(&self) -> u32 {
        self.0.iter().map(|s| s.var + 1).max().unwrap_or(0)
    }
}

impl fmt::Display for FreeGroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|s| {
                if s.inv {
                    format!("v{}^-1", s.var)
                } else {
                    format!("v{}", s.var)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// A homomorphism from the free group on `images.len()` variables into a group.
#[derive(Clone, Debug)]
pub struct GroupAssignment {
    pub group: FiniteGroup,
    pub images: Vec<Perm>,
}

impl GroupAssignment {
    /// Every variable sent to the identity of the trivial group on no points.
    pub fn trivial(vars: usize) -> Self {
        GroupAssignment {
            group: FiniteGroup::generated(0, Vec::new()).expect("trivial"),
            images: vec![Perm::identity(0); vars],
        }
    }

    pub fn image(&self, var: u32) -> &Perm {
        &self.images[var as usize]
    }

    pub fn eval(&self, w: &FreeGroupWord) -> Perm {
        let mut acc = self.group.identity();
        for s in &w.0 {
            let g = &self.images[s.var as usize];
            acc = if s.inv {
                acc.then(&g.inverse())
            } else {
                acc.then(g)
            };
        }
        acc
    }
}

/// A homomorphism into a permutation group on `{0, …, |u|}` with `η(u) ≠ 1`.
/// Reading `u = s₁⋯s_n`, a positive `s_j` sends `j-1 ↦ j` and a negative one
/// sends `j ↦ j-1`; the resulting partial injections are completed by pairing
/// leftover points in ascending order. Variables not in `u` map to the identity.
pub fn separating_hom(u: &FreeGroupWord, vars: usize) -> Result<GroupAssignment> {
    if u.is_empty() {
        return Err(Error::Invalid(
            "nothing to separate: the word is empty".into(),
        ));
    }
    if !u.is_reduced() {
        return Err(Error::Invalid(format!("{u} is not reduced")));
    }
    if u.var_bound() as usize > vars {
        return Err(Error::Invalid(format!(
            "{u} uses more than {vars} variables"
        )));
    }
    let n = u.len();
    let degree = n + 1;
    let mut fwd: Vec<Vec<Option<u32>>> = vec![vec![None; degree]; vars];
    let mut used: Vec<Vec<bool>> = vec![vec![false; degree]; vars];
    let mut present = vec![false; vars];
    for (j, s) in u.0.iter().enumerate() {
        let (from, to) = if s.inv { (j + 1, j) } else { (j, j + 1) };
        let v = s.var as usize;
        present[v] = true;
        match fwd[v][from] {
            Some(t) if t as usize != to => {
                return Err(Error::Inconsistent(format!("prefix action clash in {u}")))
            }
            _ => {}
        }
        if used[v][to] && fwd[v][from] != Some(to as u32) {
            return Err(Error::Inconsistent(format!("prefix action clash in {u}")));
        }
        fwd[v][from] = Some(to as u32);
        used[v][to] = true;
    }
    let mut images = Vec::with_capacity(vars);
    for v in 0..vars {
        if !present[v] {
            images.push(Perm::identity(degree));
            continue;
        }
        let free_codomain: Vec<u32> = (0..degree as u32)
            .filter(|&p| !used[v][p as usize])
            .collect();
        let mut free = free_codomain.into_iter();
        let img: Vec<u32> = fwd[v]
            .iter()
            .map(|t| t.unwrap_or_else(|| free.next().expect("counts match")))
            .collect();
        images.push(Perm::from_images(img)?);
    }
    let group = FiniteGroup::generated(degree, images.clone())?;
    let asg = GroupAssignment { group, images };
    debug_assert_eq!(asg.eval(u).apply(0), n as u32);
    Ok(asg)
}

/// Replaces `G` by `G × C_n` acting on `degree + n` points and sends every
/// variable `v` to `(η(v), s)` with `s` a generator of `C_n`.
pub fn order_boost(asg: &GroupAssignment, n: usize) -> Result<GroupAssignment> {
    if n == 0 {
        return Err(Error::Invalid("order boost needs n >= 1".into()));
    }
    let d = asg.group.degree();
    let images: Vec<Perm> = asg
        .images
        .iter()
        .map(|g| {
            let mut v = g.images().to_vec();
            v.extend((0..n as u32).map(|i| d as u32 + (i + 1) % n as u32));
            Perm(v)
        })
        .collect();
    let group = FiniteGroup::generated(d + n, images.clone())?;
    Ok(GroupAssignment { group, images })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn s(var: u32, inv: bool) -> Signed {
        Signed { var, inv }
    }

    fn word(spec: &[(u32, bool)]) -> FreeGroupWord {
        FreeGroupWord(spec.iter().map(|&(v, i)| s(v, i)).collect())
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(
            word(&[(1, false), (2, false), (2, true)]).reduce(),
            word(&[(1, false)])
        );
        assert!(word(&[(1, false), (1, true)]).reduce().is_empty());
        assert_eq!(
            word(&[(1, false), (2, true), (2, false), (1, true), (3, false)]).reduce(),
            word(&[(3, false)])
        );
    }

    fn naive_reduce(w: &FreeGroupWord, rng: &mut ChaCha8Rng) -> FreeGroupWord {
        let mut v = w.0.clone();
        loop {
            let spots: Vec<usize> = (0..v.len().saturating_sub(1))
                .filter(|&i| v[i] == v[i + 1].inverse())
                .collect();
            match spots.choose(rng) {
                Some(&i) => {
                    v.drain(i..i + 2);
                }
                None => return FreeGroupWord(v),
            }
        }
    }

    #[test]
    fn reduction_is_confluent() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..2000 {
            let len = rng.gen_range(0..=10);
            let w = FreeGroupWord(
                (0..len)
                    .map(|_| s(rng.gen_range(0..2), rng.gen()))
                    .collect(),
            );
            let r = w.reduce();
            assert!(r.is_reduced());
            assert_eq!(r.reduce(), r);
            assert_eq!(naive_reduce(&w, &mut rng), r);
        }
    }

    #[test]
    fn order_examples() {
        let c2 = FiniteGroup::cyclic(2);
        let g = c2.parse_element("g").unwrap();
        assert_eq!(c2.element_order(&g), 2);
        let s3 = FiniteGroup::symmetric(3);
        assert_eq!(s3.order().unwrap(), 6);
        assert_eq!(s3.element_order(&s3.identity()), 1);
        let t = s3.parse_element("(1,0,2)").unwrap();
        assert_eq!(s3.element_order(&t), 2);
    }

    #[test]
    fn lagrange() {
        for g in [
            FiniteGroup::cyclic(6),
            FiniteGroup::cyclic(5),
            FiniteGroup::symmetric(4),
        ] {
            let n = g.order().unwrap() as u64;
            for x in g.elements().unwrap() {
                assert_eq!(n % g.element_order(x), 0);
            }
        }
    }

    #[test]
    fn table_group_roundtrip() {
        let c3 = FiniteGroup::cyclic(3);
        let desc = c3.description();
        let back = FiniteGroup::from_description(&desc).unwrap();
        assert_eq!(back.description(), desc);
        let g = c3.parse_element("g").unwrap();
        assert_eq!(c3.name(&g.then(&g)), "g^2");
        assert_eq!(c3.name(&g.pow(3)), "e");
        let json = serde_json::to_string(&desc).unwrap();
        let parsed: GroupDescription = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed, desc);
    }

    #[test]
    fn table_validation() {
        let names = vec!["e".to_string(), "g".to_string()];
        let bad = vec![
            vec!["e".to_string(), "g".to_string()],
            vec!["g".to_string(), "g".to_string()],
        ];
        assert!(FiniteGroup::from_table(names.clone(), "e", bad).is_err());
        // identity listed second
        let ok = vec![
            vec!["g".to_string(), "e".to_string()],
            vec!["e".to_string(), "g".to_string()],
        ];
        let g = FiniteGroup::from_table(names, "g", ok).unwrap();
        assert_eq!(g.name(&g.identity()), "g");
    }

    #[test]
    fn separating_examples() {
        let u = word(&[(0, false)]);
        let asg = separating_hom(&u, 1).unwrap();
        assert_eq!(asg.image(0).images(), &[1, 0]);
        let u = word(&[(0, false), (1, true)]);
        let asg = separating_hom(&u, 2).unwrap();
        assert_eq!(asg.image(0).apply(0), 1);
        assert_eq!(asg.image(1).apply(2), 1);
        assert_eq!(asg.eval(&u).apply(0), 2);
        assert!(separating_hom(&FreeGroupWord::empty(), 1).is_err());
    }

    fn reduced_words(vars: u32, max_len: usize) -> Vec<FreeGroupWord> {
        let mut out = vec![FreeGroupWord::empty()];
        let mut layer = vec![FreeGroupWord::empty()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &layer {
                for v in 0..vars {
                    for inv in [false, true] {
                        let x = s(v, inv);
                        if w.0.last() == Some(&x.inverse()) {
                            continue;
                        }
                        let mut w2 = w.clone();
                        w2.push(x);
                        next.push(w2);
                    }
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    #[test]
    fn separating_is_exhaustively_correct() {
        for u in reduced_words(3, 6).into_iter().skip(1) {
            let asg = separating_hom(&u, 3).unwrap();
            assert!(!asg.eval(&u).is_identity(), "{u}");
        }
    }

    #[test]
    fn assignment_is_a_homomorphism() {
        let u = word(&[(0, false), (1, true), (0, false), (1, false)]);
        let asg = separating_hom(&u, 2).unwrap();
        let words = reduced_words(2, 3);
        for a in &words {
            assert_eq!(asg.eval(&a.inverse()), asg.eval(a).inverse());
            for b in &words {
                assert_eq!(asg.eval(&a.concat(b)), asg.eval(a).then(&asg.eval(b)));
            }
        }
    }

    #[test]
    fn boost_examples() {
        let u = word(&[(0, false)]);
        let asg = separating_hom(&u, 2).unwrap();
        let boosted = order_boost(&asg, 6).unwrap();
        for v in 0..2 {
            assert!(boosted.image(v).order() >= 6);
        }
        assert!(!boosted.eval(&u).is_identity());
        let same = order_boost(&asg, 1).unwrap();
        for v in 0..2 {
            assert_eq!(same.image(v).order(), asg.image(v).order());
        }
        let triv = order_boost(&GroupAssignment::trivial(1), 4).unwrap();
        assert_eq!(triv.group.order().unwrap(), 4);
    }
}
