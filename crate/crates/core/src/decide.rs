//! κ-identities of rank at most 1 over `LG` and `S`.
//!
//! Two rank-1 terms agree on every finite semigroup (equivalently on every
//! finite local group) iff their canonical forms coincide. When they differ we
//! build a concrete local group in which they evaluate differently, either
//! `S(G, L, f)` over a language of long powers and synchronized crucial
//! portions, or `S_k(G, f)` driven by a superposition map into a free group.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{
    lcm, order_boost, separating_hom, FiniteGroup, FreeGroupWord, GroupAssignment,
    GroupDescription, Perm,
};
use crate::kappa::{
    canonicalize_rank1, evaluate, form_is_canonical, Rank1Form, RewriteStep, RewriteTrace,
    StepKind, Term,
};
use crate::langdecomp::FactorialLanguage;
use crate::localgroups::{
    GFunction, LocalGroup, SemigroupView, Structure, SuperpositionFunction, ZElement,
};
use crate::words::{occurrences, truncate, Alphabet, Side, Word};

/// Search cap for the `𝕛` and `𝕜` parameter walks.
pub const SEARCH_CAP: usize = 10_000;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variety {
    Lg,
    S,
}

impl fmt::Display for Variety {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variety::Lg => "LG",
            Variety::S => "S",
        })
    }
}

/// Two canonical rank-1 terms read as one list of blocks: `π` owns blocks
/// `1..=m`, `ρ` owns `m+1..=n`. Block indices below are 1-based.
#[derive(Clone, Debug)]
pub struct IdentityProblem {
    pub alphabet: Alphabet,
    pub pi: Rank1Form,
    pub rho: Rank1Form,
}

impl IdentityProblem {
    /// Canonicalizes both sides; each must have rank exactly 1.
    pub fn new(pi: &Term, rho: &Term, alphabet: &Alphabet) -> Result<Self> {
        let (cp, _) = canonicalize_rank1(pi, alphabet)?;
        let (cr, _) = canonicalize_rank1(rho, alphabet)?;
        Self::from_canonical(&cp, &cr, alphabet)
    }

    pub fn from_canonical(pi: &Term, rho: &Term, alphabet: &Alphabet) -> Result<Self> {
        let pi_form = Rank1Form::from_term(pi)?;
        let rho_form = Rank1Form::from_term(rho)?;
        if pi_form.m() == 0 || rho_form.m() == 0 {
            return Err(Error::Invalid("both sides must have rank 1".into()));
        }
        for (t, form) in [(pi, &pi_form), (rho, &rho_form)] {
            if !form_is_canonical(form, alphabet) {
                return Err(Error::Invalid(format!("{t} is not in canonical form")));
            }
        }
        Ok(IdentityProblem {
            alphabet: content_alphabet(alphabet, &[pi, rho]),
            pi: pi_form,
            rho: rho_form,
        })
    }

    pub fn m(&self) -> usize {
        self.pi.m()
    }

    pub fn n(&self) -> usize {
        self.pi.m() + self.rho.m()
    }

    fn block(&self, i: usize) -> &crate::kappa::Block {
        let m = self.m();
        if i <= m {
            &self.pi.blocks[i - 1]
        } else {
            &self.rho.blocks[i - m - 1]
        }
    }

    pub fn x(&self, i: usize) -> &Word {
        &self.block(i).x
    }

    pub fn q(&self, i: usize) -> i64 {
        self.block(i).q
    }

    pub fn u(&self, i: usize) -> &Word {
        &self.block(i).u
    }

    /// `u'₀` for `j = 0` and `u'_m` for `j = m`.
    pub fn u_prime(&self, j: usize) -> &Word {
        if j == 0 {
            &self.pi.u0
        } else {
            &self.rho.u0
        }
    }

    /// Indices `i` of the crucial portions `x_i^{ω+q_i} u_i x_{i+1}^{ω+q_{i+1}}`.
    pub fn crucial(&self) -> Vec<usize> {
        (1..self.n()).filter(|&i| i != self.m()).collect()
    }

    /// Lengths of the two terms with every power replaced by its base.
    fn skeleton_len(&self) -> usize {
        let side = |f: &Rank1Form| {
            f.u0.len()
                + f.blocks
                    .iter()
                    .map(|b| b.x.len() + b.u.len())
                    .sum::<usize>()
        };
        side(&self.pi) + side(&self.rho)
    }
}

fn content_alphabet(alphabet: &Alphabet, terms: &[&Term]) -> Alphabet {
    let used: HashSet<u8> = terms.iter().flat_map(|t| t.letters()).collect();
    Alphabet::new(
        alphabet
            .letters()
            .iter()
            .copied()
            .filter(|a| used.contains(a)),
    )
    .expect("terms are non-empty")
}

/// Conjugate `x_{ij}` of `x`, starting at its `j`-th letter (1-based).
fn conjugate(x: &Word, j: usize) -> Word {
    x.slice(j - 1, x.len()).concat(&x.slice(0, j - 1))
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Variable {
    Base(Word),
    Crucial(Word, Word, Word),
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variable::Base(x) => write!(f, "v[{x}]"),
            Variable::Crucial(x, u, y) => write!(f, "v[{x},{u},{y}]"),
        }
    }
}

/// The positive group words `w_π`, `w_ρ` over one variable per base and per crucial portion.
#[derive(Clone, Debug)]
pub struct Witness5 {
    pub variables: Vec<Variable>,
    pub w_pi: FreeGroupWord,
    pub w_rho: FreeGroupWord,
    /// `1 + max |q_i|`.
    pub qq: i64,
    /// `qq + q_i`, indexed from block 1 at position 0.
    pub qq_i: Vec<i64>,
}

impl Witness5 {
    pub fn index(&self, v: &Variable) -> u32 {
        self.variables
            .iter()
            .position(|w| w == v)
            .expect("known variable") as u32
    }

    pub fn is_trivial(&self) -> bool {
        self.w_pi == self.w_rho
    }

    pub fn render(&self, w: &FreeGroupWord) -> String {
        render_free(w, |v| self.variables[v as usize].to_string())
    }
}

fn render_free(w: &FreeGroupWord, name: impl Fn(u32) -> String) -> String {
    if w.is_empty() {
        return "1".into();
    }
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < w.0.len() {
        let s = w.0[i];
        let run = w.0[i..].iter().take_while(|t| **t == s).count();
        let e = if s.inv { -(run as i64) } else { run as i64 };
        parts.push(if e == 1 {
            name(s.var)
        } else {
            format!("{}^{e}", name(s.var))
        });
        i += run;
    }
    parts.join(" ")
}

pub fn build_witness5(prob: &IdentityProblem) -> Witness5 {
    let n = prob.n();
    let m = prob.m();
    let qq = 1 + (1..=n).map(|i| prob.q(i).abs()).max().unwrap_or(0);
    let qq_i: Vec<i64> = (1..=n).map(|i| qq + prob.q(i)).collect();
    let mut variables: Vec<Variable> = Vec::new();
    let mut index: HashMap<Variable, u32> = HashMap::new();
    let mut var = |v: Variable| -> u32 {
        *index.entry(v.clone()).or_insert_with(|| {
            variables.push(v);
            variables.len() as u32 - 1
        })
    };
    let crucial: HashSet<usize> = prob.crucial().into_iter().collect();
    let mut side = |first: usize, last: usize, u_first: &Word| -> FreeGroupWord {
        let mut w = FreeGroupWord::empty();
        let base = |i: usize| Variable::Base(prob.x(i).clone());
        if !u_first.is_empty() {
            w = w.concat(&FreeGroupWord::var(var(base(first))));
        }
        for i in first..=last {
            w = w.concat(&FreeGroupWord::var(var(base(i))).pow(qq_i[i - 1]));
            if crucial.contains(&i) {
                let c =
                    Variable::Crucial(prob.x(i).clone(), prob.u(i).clone(), prob.x(i + 1).clone());
                w = w.concat(&FreeGroupWord::var(var(c)));
            }
        }
        if !prob.u(last).is_empty() {
            w = w.concat(&FreeGroupWord::var(var(base(last))));
        }
        w
    };
    let w_pi = side(1, m, prob.u_prime(0));
    let w_rho = side(m + 1, n, prob.u_prime(m));
    Witness5 {
        variables,
        w_pi,
        w_rho,
        qq,
        qq_i,
    }
}

/// A homomorphism with `η(w_π) ≠ η(w_ρ)` when the two words differ, or
/// the trivial one otherwise.
fn separating_assignment(
    w_pi: &FreeGroupWord,
    w_rho: &FreeGroupWord,
    vars: usize,
) -> Result<GroupAssignment> {
    let diff = w_pi.concat(&w_rho.inverse()).reduce();
    if diff.is_empty() {
        Ok(GroupAssignment::trivial(vars))
    } else {
        let asg = separating_hom(&diff, vars)?;
        if asg.eval(w_pi) == asg.eval(w_rho) {
            return Err(Error::Inconsistent("separating homomorphism failed".into()));
        }
        Ok(asg)
    }
}

#[derive(Clone, Debug)]
pub struct Params5 {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub kprime: usize,
    pub w_i: Vec<Word>,
    pub w_j: Vec<Word>,
    pub w_k: Vec<Word>,
    /// `(i, t_i)` for each crucial portion.
    pub t: Vec<(usize, usize)>,
    pub eta: GroupAssignment,
}

impl Params5 {
    pub fn t_of(&self, i: usize) -> usize {
        self.t
            .iter()
            .find(|(c, _)| *c == i)
            .expect("crucial index")
            .1
    }
}

fn dedup(words: impl IntoIterator<Item = Word>) -> Vec<Word> {
    let mut seen = HashSet::new();
    words
        .into_iter()
        .filter(|w| seen.insert(w.clone()))
        .collect()
}

/// `x^j u y^j` is synchronized in `⁻∞x' u' y'^{+∞}`: it occurs there exactly once,
/// at the aligned position, if the triples agree, and not at all otherwise.
fn synchronized(
    j: usize,
    (x, u, y): (&Word, &Word, &Word),
    (x2, u2, y2): (&Word, &Word, &Word),
) -> Result<bool> {
    let w = x.pow(j).concat(u).concat(&y.pow(j));
    let reps_left = w.len() / x2.len() + 2;
    let reps_right = w.len() / y2.len() + 2;
    let window = x2.pow(reps_left).concat(u2).concat(&y2.pow(reps_right));
    let occ = occurrences(w.letters(), window.letters())?;
    if (x, u, y) == (x2, u2, y2) {
        let aligned = (reps_left - j) * x.len() + 1;
        Ok(occ == vec![aligned])
    } else {
        Ok(occ.is_empty())
    }
}

pub fn choose_parameters(prob: &IdentityProblem, wit: &Witness5) -> Result<Params5> {
    let n = prob.n();
    let m = prob.m();
    let base = separating_assignment(&wit.w_pi, &wit.w_rho, wit.variables.len())?;
    let eta = order_boost(&base, 2 * wit.qq as usize)?;
    let i_param = prob.skeleton_len() + 1;
    let crucial = prob.crucial();
    let triple = |c: usize| (prob.x(c), prob.u(c), prob.x(c + 1));
    let mut j_param = i_param + 1;
    if !crucial.is_empty() {
        let mut steps = 0;
        'search: loop {
            for &c in &crucial {
                for &c2 in &crucial {
                    if !synchronized(j_param, triple(c), triple(c2))? {
                        j_param += 1;
                        steps += 1;
                        if steps > SEARCH_CAP {
                            return Err(Error::Inconsistent(
                                "no synchronizing exponent found".into(),
                            ));
                        }
                        continue 'search;
                    }
                }
            }
            break;
        }
    }
    let w_j = dedup(crucial.iter().map(|&c| {
        let (x, u, y) = triple(c);
        x.pow(j_param).concat(u).concat(&y.pow(j_param))
    }));
    let modulus = (1..=n)
        .map(|i| {
            eta.image(wit.index(&Variable::Base(prob.x(i).clone())))
                .order()
        })
        .fold(1u64, lcm) as usize;
    let qq = wit.qq as usize;
    let mut k_param = j_param + 1;
    k_param += (modulus - (k_param + 1 + qq) % modulus) % modulus;
    let conjugates: Vec<Word> =
        dedup((1..=n).flat_map(|i| (1..=prob.x(i).len()).map(move |q| conjugate(prob.x(i), q))));
    let mut steps = 0;
    loop {
        let clear = conjugates.iter().all(|c| {
            let p = c.pow(k_param);
            !w_j.iter().any(|w| p.is_factor_of(w))
        });
        if clear {
            break;
        }
        k_param += modulus;
        steps += 1;
        if steps > SEARCH_CAP {
            return Err(Error::Inconsistent("no admissible k found".into()));
        }
    }
    let w_i = dedup([
        prob.u_prime(0).concat(&prob.x(1).pow(i_param)),
        prob.u_prime(m).concat(&prob.x(m + 1).pow(i_param)),
        prob.x(m).pow(i_param).concat(prob.u(m)),
        prob.x(n).pow(i_param).concat(prob.u(n)),
    ]);
    let w_k = dedup(conjugates.iter().map(|c| c.pow(k_param)));
    let t = crucial
        .iter()
        .map(|&c| {
            let (x, u, y) = triple(c);
            let left = x.pow(j_param).concat(u);
            let mut t = 0;
            while y.pow(t + 1).is_suffix_of(&left) {
                t += 1;
            }
            (c, t)
        })
        .collect();
    Ok(Params5 {
        i: i_param,
        j: j_param,
        k: k_param,
        kprime: k_param + 1 + qq,
        w_i,
        w_j,
        w_k,
        t,
        eta,
    })
}

/// Words whose factors make up `L`.
pub fn language_generators(params: &Params5) -> Vec<Word> {
    params
        .w_i
        .iter()
        .chain(&params.w_j)
        .chain(&params.w_k)
        .cloned()
        .collect()
}

/// `f` on `L ∪ L̈`: `g_x` on `x^𝕜`, `g_x⁻¹ g_{x,u,y} g_y^{-t-1}` on `x^𝕛 u y^𝕛`, identity elsewhere.
pub fn f_values(prob: &IdentityProblem, wit: &Witness5, params: &Params5) -> Vec<(Word, Perm)> {
    let g = |v: Variable| params.eta.image(wit.index(&v)).clone();
    let mut values = Vec::new();
    for i in 1..=prob.n() {
        values.push((
            prob.x(i).pow(params.k),
            g(Variable::Base(prob.x(i).clone())),
        ));
    }
    for c in prob.crucial() {
        let (x, u, y) = (prob.x(c), prob.u(c), prob.x(c + 1));
        let gx = g(Variable::Base(x.clone()));
        let gy = g(Variable::Base(y.clone()));
        let gc = g(Variable::Crucial(x.clone(), u.clone(), y.clone()));
        let t = params.t_of(c) as i64;
        let value = gx.inverse().then(&gc).then(&gy.pow(-t - 1));
        values.push((x.pow(params.j).concat(u).concat(&y.pow(params.j)), value));
    }
    dedup_values(values)
}

fn dedup_values(values: Vec<(Word, Perm)>) -> Vec<(Word, Perm)> {
    let mut seen = HashSet::new();
    values
        .into_iter()
        .filter(|(w, _)| seen.insert(w.clone()))
        .collect()
}

/// Checks of the power, kernel and crucial-portion equalities in a built `S_{π,ρ}`.
#[derive(Clone, Debug, Default, Serialize)]
pub struct PropertyReport {
    /// `(x, kernel size of ⟨x⟩, order of g_x)`.
    pub kernels: Vec<(Word, u64, u64)>,
    pub kernel_ok: bool,
    pub power_formula_ok: bool,
    pub omega_ok: bool,
    pub crucial_ok: bool,
    pub ends_ok: bool,
}

impl PropertyReport {
    pub fn all_hold(&self) -> bool {
        self.kernel_ok && self.power_formula_ok && self.omega_ok && self.crucial_ok && self.ends_ok
    }
}

#[derive(Clone, Debug)]
pub struct Separation5 {
    pub witness: Witness5,
    pub params: Params5,
    pub language_words: Vec<Word>,
    pub semigroup: LocalGroup<GFunction>,
    pub phi_pi: ZElement,
    pub phi_rho: ZElement,
    pub expected_pi: ZElement,
    pub expected_rho: ZElement,
    pub properties: PropertyReport,
}

impl Separation5 {
    pub fn separated(&self) -> bool {
        self.phi_pi != self.phi_rho
    }

    pub fn matches_expected(&self) -> bool {
        self.phi_pi == self.expected_pi && self.phi_rho == self.expected_rho
    }
}

fn letters_of<S: Structure>(s: &LocalGroup<S>) -> impl Fn(u8) -> Option<ZElement> + '_ {
    move |a| s.letter(a).ok()
}

pub fn build_test_semigroup5(prob: &IdentityProblem) -> Result<Separation5> {
    let witness = build_witness5(prob);
    let params = choose_parameters(prob, &witness)?;
    let language_words = language_generators(&params);
    let lang = FactorialLanguage::generated_by(prob.alphabet.clone(), &language_words)?;
    let values = f_values(prob, &witness, &params);
    let f = GFunction::from_group_values(lang, params.eta.group.clone(), values)?;
    let s = LocalGroup::new(f);
    let (phi_pi, phi_rho) = {
        let asg = letters_of(&s);
        (
            evaluate(&prob.pi.to_term(), &s, &asg)?,
            evaluate(&prob.rho.to_term(), &s, &asg)?,
        )
    };
    let (m, n, k) = (prob.m(), prob.n(), params.k);
    let expected = |first: usize, last: usize, u_first: &Word, w: &FreeGroupWord| {
        let (z0, _) = s.f_grave(u_first.concat(&prob.x(first).pow(k)).letters());
        let (_, zm) = s.f_acute(prob.x(last).pow(k).concat(prob.u(last)).letters());
        ZElement::Triple(z0, params.eta.eval(w), zm)
    };
    let expected_pi = expected(1, m, prob.u_prime(0), &witness.w_pi);
    let expected_rho = expected(m + 1, n, prob.u_prime(m), &witness.w_rho);
    let properties = check_properties(prob, &witness, &params, &s);
    Ok(Separation5 {
        witness,
        params,
        language_words,
        semigroup: s,
        phi_pi,
        phi_rho,
        expected_pi,
        expected_rho,
        properties,
    })
}

fn check_properties(
    prob: &IdentityProblem,
    wit: &Witness5,
    params: &Params5,
    s: &LocalGroup<GFunction>,
) -> PropertyReport {
    let mut report = PropertyReport {
        kernel_ok: true,
        power_formula_ok: true,
        omega_ok: true,
        crucial_ok: true,
        ends_ok: true,
        ..Default::default()
    };
    let g = |v: Variable| params.eta.image(wit.index(&v)).clone();
    let k = params.k;
    let bases: Vec<Word> = dedup((1..=prob.n()).map(|i| prob.x(i).clone()));
    for x in &bases {
        let gx = g(Variable::Base(x.clone()));
        let order = gx.order();
        let xk = x.pow(k);
        if s.f_check_word(xk.letters()) != ZElement::NonRegular(xk.clone()) {
            report.power_formula_ok = false;
        }
        let step = s.f_check_word(x.letters());
        let first = s.f_check_word(x.pow(k + 1).letters());
        let mut cur = first.clone();
        let mut kernel = None;
        for q in 1..=2 * order {
            let want = ZElement::Triple(xk.clone(), gx.pow(q as i64 - 1), xk.clone());
            if cur != want {
                report.power_formula_ok = false;
            }
            cur = s.multiply(&cur, &step);
            if kernel.is_none() && cur == first {
                kernel = Some(q);
            }
        }
        let kernel = kernel.unwrap_or(0);
        if kernel != order {
            report.kernel_ok = false;
        }
        report.kernels.push((x.clone(), kernel, order));
        let omega = s.omega_plus(&step, 0);
        if omega != s.f_check_word(x.pow(params.kprime).letters())
            || s.multiply(&omega, &omega) != omega
        {
            report.omega_ok = false;
        }
    }
    for c in prob.crucial() {
        let (x, u, y) = (prob.x(c), prob.u(c), prob.x(c + 1));
        let w = x.pow(k).concat(u).concat(&y.pow(k));
        if s.f_hat(w.letters()) != g(Variable::Crucial(x.clone(), u.clone(), y.clone())) {
            report.crucial_ok = false;
        }
    }
    let id = s.group().identity();
    let (m, n) = (prob.m(), prob.n());
    for (j, up) in [(1, prob.u_prime(0)), (m + 1, prob.u_prime(m))] {
        let want = if up.is_empty() {
            id.clone()
        } else {
            g(Variable::Base(prob.x(j).clone()))
        };
        let (w0, h) = s.f_grave(up.concat(&prob.x(j).pow(k)).letters());
        if h != want || !up.is_prefix_of(&w0) {
            report.ends_ok = false;
        }
    }
    for last in [m, n] {
        let u = prob.u(last);
        let want = if u.is_empty() {
            id.clone()
        } else {
            g(Variable::Base(prob.x(last).clone()))
        };
        let (h, wp) = s.f_acute(prob.x(last).pow(k).concat(u).letters());
        if h != want || !u.is_suffix_of(&wp) {
            report.ends_ok = false;
        }
    }
    report
}

/// The group words of the superposition construction over `V = A^{𝕜+1}`.
#[derive(Clone, Debug)]
pub struct Witness6 {
    pub k: usize,
    pub r: usize,
    /// `(𝕜+1)/|x_i|`, indexed from block 1 at position 0.
    pub r_i: Vec<usize>,
    /// Variable `v_u` for each listed `u ∈ A^{𝕜+1}`.
    pub variables: Vec<Word>,
    pub w_pi: FreeGroupWord,
    pub w_rho: FreeGroupWord,
    pub reduced_pi: FreeGroupWord,
    pub reduced_rho: FreeGroupWord,
}

impl Witness6 {
    pub fn render(&self, w: &FreeGroupWord) -> String {
        render_free(w, |v| format!("v[{}]", self.variables[v as usize]))
    }
}

struct Lambda {
    k: usize,
    index: HashMap<Word, u32>,
    variables: Vec<Word>,
}

impl Lambda {
    /// The product of the variables of the successive `(𝕜+1)`-windows of `w`.
    fn apply(&mut self, w: &Word) -> FreeGroupWord {
        let mut out = FreeGroupWord::empty();
        if w.len() > self.k {
            for win in w.letters().windows(self.k + 1) {
                let key = Word::from(win);
                let v = match self.index.get(&key) {
                    Some(&v) => v,
                    None => {
                        self.variables.push(key.clone());
                        self.index.insert(key, self.variables.len() as u32 - 1);
                        self.variables.len() as u32 - 1
                    }
                };
                out = out.concat(&FreeGroupWord::var(v));
            }
        }
        out
    }
}

pub fn build_witness6(prob: &IdentityProblem) -> Result<Witness6> {
    let (m, n) = (prob.m(), prob.n());
    let bound = [prob.u_prime(0).len() as i64, prob.u_prime(m).len() as i64]
        .into_iter()
        .chain((1..=n).flat_map(|j| [prob.u(j).len() as i64, prob.q(j).abs()]))
        .max()
        .unwrap_or(0);
    let r = (bound + 2) as usize;
    let lengths: usize = (1..=n)
        .map(|i| prob.x(i).len())
        .try_fold(1usize, |acc, l| acc.checked_mul(l))
        .ok_or_else(|| Error::TooLarge("product of base lengths".into()))?;
    let kp1 = r * lengths;
    let k = kp1 - 1;
    let r_i: Vec<usize> = (1..=n).map(|i| kp1 / prob.x(i).len()).collect();
    let b = |i: usize| prob.x(i).pow(r_i[i - 1]);
    let b_prime = |i: usize| truncate(b(i).letters(), k, Side::Head);
    let mut lambda = Lambda {
        k,
        index: HashMap::new(),
        variables: Vec::new(),
    };
    let mut side = |first: usize, last: usize, u_first: &Word| -> FreeGroupWord {
        let mut w = lambda.apply(&u_first.concat(&b_prime(first)));
        for i in first..=last {
            let y = lambda.apply(&prob.x(i).concat(&b_prime(i)));
            w = w.concat(&y.pow(prob.q(i) - r_i[i - 1] as i64));
            let tail = if i == last {
                b(i).concat(prob.u(i))
            } else {
                b(i).concat(prob.u(i)).concat(&b_prime(i + 1))
            };
            w = w.concat(&lambda.apply(&tail));
        }
        w
    };
    let w_pi = side(1, m, prob.u_prime(0));
    let w_rho = side(m + 1, n, prob.u_prime(m));
    Ok(Witness6 {
        k,
        r,
        r_i,
        variables: lambda.variables,
        reduced_pi: w_pi.reduce(),
        reduced_rho: w_rho.reduce(),
        w_pi,
        w_rho,
    })
}

#[derive(Clone, Debug)]
pub struct Separation6 {
    pub witness: Witness6,
    pub eta: GroupAssignment,
    pub semigroup: LocalGroup<SuperpositionFunction>,
    pub phi_pi: ZElement,
    pub phi_rho: ZElement,
    pub expected_pi: ZElement,
    pub expected_rho: ZElement,
}

impl Separation6 {
    pub fn separated(&self) -> bool {
        self.phi_pi != self.phi_rho
    }

    pub fn words_differ(&self) -> bool {
        self.witness.reduced_pi != self.witness.reduced_rho
    }

    pub fn matches_expected(&self) -> bool {
        self.phi_pi == self.expected_pi && self.phi_rho == self.expected_rho
    }
}

pub fn build_test_semigroup6(prob: &IdentityProblem) -> Result<Separation6> {
    let witness = build_witness6(prob)?;
    let eta = separating_assignment(
        &witness.reduced_pi,
        &witness.reduced_rho,
        witness.variables.len(),
    )?;
    let values: Vec<(Word, Perm)> = witness
        .variables
        .iter()
        .enumerate()
        .map(|(v, u)| (u.clone(), eta.image(v as u32).clone()))
        .collect();
    let f = SuperpositionFunction::from_group_values(
        prob.alphabet.clone(),
        witness.k,
        eta.group.clone(),
        values,
    )?;
    let s = LocalGroup::new(f);
    let (phi_pi, phi_rho) = {
        let asg = letters_of(&s);
        (
            evaluate(&prob.pi.to_term(), &s, &asg)?,
            evaluate(&prob.rho.to_term(), &s, &asg)?,
        )
    };
    let k = witness.k;
    let (m, n) = (prob.m(), prob.n());
    let b = |i: usize| prob.x(i).pow(witness.r_i[i - 1]);
    let expected = |first: usize, last: usize, u_first: &Word, w: &FreeGroupWord| {
        ZElement::Triple(
            truncate(u_first.concat(&b(first)).letters(), k, Side::Head),
            eta.eval(w),
            truncate(b(last).concat(prob.u(last)).letters(), k, Side::Tail),
        )
    };
    let expected_pi = expected(1, m, prob.u_prime(0), &witness.w_pi);
    let expected_rho = expected(m + 1, n, prob.u_prime(m), &witness.w_rho);
    Ok(Separation6 {
        witness,
        eta,
        semigroup: s,
        phi_pi,
        phi_rho,
        expected_pi,
        expected_rho,
    })
}

/// `S_k` over the trivial group with `k` the longest finite-word side: a word of
/// length at most `k` stays a non-regular element, everything else is a triple.
pub fn word_separator(
    pi: &Term,
    rho: &Term,
    alphabet: &Alphabet,
) -> Result<LocalGroup<SuperpositionFunction>> {
    let k = [pi, rho]
        .iter()
        .filter_map(|t| t.as_word())
        .map(|w| w.len())
        .max()
        .ok_or_else(|| Error::Invalid("neither side is a finite word".into()))?;
    let alphabet = content_alphabet(alphabet, &[pi, rho]);
    let f = SuperpositionFunction::new(alphabet, k, FiniteGroup::trivial(), Vec::new())?;
    Ok(LocalGroup::new(f))
}

/// An element of `S(G, L, f)` as stored in a certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementRecord {
    Word { word: Word },
    Triple { u: Word, g: Perm, v: Word },
}

impl From<&ZElement> for ElementRecord {
    fn from(z: &ZElement) -> Self {
        match z {
            ZElement::NonRegular(w) => ElementRecord::Word { word: w.clone() },
            ZElement::Triple(u, g, v) => ElementRecord::Triple {
                u: u.clone(),
                g: g.clone(),
                v: v.clone(),
            },
        }
    }
}

/// Enough data to rebuild a separating semigroup without any parameter search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SemigroupRecord {
    /// `S(G, L, f)` with `L` the factors of `language` plus the letters.
    LocalGroup {
        alphabet: String,
        language: Vec<Word>,
        group: GroupDescription,
        f: Vec<(Word, Perm)>,
    },
    /// `S_k(G, f)` with `f` given on `A^{k+1}`.
    Superposition {
        alphabet: String,
        k: usize,
        group: GroupDescription,
        f: Vec<(Word, Perm)>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamsRecord {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub kprime: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub kind: StepKind,
    pub before: String,
    pub after: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Separation {
    pub semigroup: SemigroupRecord,
    pub phi_pi: ElementRecord,
    pub phi_rho: ElementRecord,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w_pi: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w_rho: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub pi: String,
    pub rho: String,
    pub alphabet: String,
    pub variety: Variety,
    pub canonical_pi: String,
    pub canonical_rho: String,
    pub equal: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace_pi: Option<Vec<StepRecord>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace_rho: Option<Vec<StepRecord>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<ParamsRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupDescription>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_pi: Option<ElementRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_rho: Option<ElementRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub separation: Option<Separation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alt: Option<Separation>,
}

fn steps_record(trace: &RewriteTrace) -> Vec<StepRecord> {
    trace
        .steps
        .iter()
        .map(|s| StepRecord {
            kind: s.kind,
            before: s.before.to_string(),
            after: s.after.to_string(),
        })
        .collect()
}

fn alphabet_string(a: &Alphabet) -> String {
    String::from_utf8(a.letters().to_vec()).expect("ASCII letters")
}

fn superposition_record(s: &LocalGroup<SuperpositionFunction>) -> SemigroupRecord {
    let st = s.structure();
    SemigroupRecord::Superposition {
        alphabet: alphabet_string(st.alphabet()),
        k: st.k(),
        group: s.group().description(),
        f: st.assignments(),
    }
}

/// Decides `π = ρ` over the given variety. Rank-1 answers coincide for `LG` and `S`.
pub fn decide(
    pi: &Term,
    rho: &Term,
    alphabet: &Alphabet,
    variety: Variety,
    alt: bool,
) -> Result<(bool, Certificate)> {
    let rank = pi.rank().max(rho.rank());
    if rank > 1 {
        return Err(Error::RankTooHigh(rank));
    }
    let (cp, tp) = canonicalize_rank1(pi, alphabet)?;
    let (cr, tr) = canonicalize_rank1(rho, alphabet)?;
    let equal = cp == cr;
    let mut cert = Certificate {
        pi: pi.to_string(),
        rho: rho.to_string(),
        alphabet: alphabet_string(alphabet),
        variety,
        canonical_pi: cp.to_string(),
        canonical_rho: cr.to_string(),
        equal,
        trace_pi: None,
        trace_rho: None,
        params: None,
        group: None,
        phi_pi: None,
        phi_rho: None,
        separation: None,
        alt: None,
    };
    if equal {
        cert.trace_pi = Some(steps_record(&tp));
        cert.trace_rho = Some(steps_record(&tr));
        return Ok((true, cert));
    }
    if pi.rank() == 0 || rho.rank() == 0 {
        let s = word_separator(&cp, &cr, alphabet)?;
        let asg = letters_of(&s);
        let (a, b) = (evaluate(pi, &s, &asg)?, evaluate(rho, &s, &asg)?);
        if a == b {
            return Err(Error::Inconsistent(format!(
                "{pi} and {rho} were not separated"
            )));
        }
        let sep = Separation {
            semigroup: superposition_record(&s),
            phi_pi: (&a).into(),
            phi_rho: (&b).into(),
            w_pi: None,
            w_rho: None,
        };
        cert.group = Some(s.group().description());
        cert.phi_pi = Some(sep.phi_pi.clone());
        cert.phi_rho = Some(sep.phi_rho.clone());
        if alt {
            cert.alt = Some(sep.clone());
        }
        cert.separation = Some(sep);
        return Ok((false, cert));
    }
    let prob = IdentityProblem::from_canonical(&cp, &cr, alphabet)?;
    let sep = build_test_semigroup5(&prob)?;
    if !sep.separated() || !sep.matches_expected() || !sep.properties.all_hold() {
        return Err(Error::Inconsistent(format!(
            "the test semigroup for {cp} = {cr} does not separate"
        )));
    }
    let st = sep.semigroup.structure();
    cert.params = Some(ParamsRecord {
        i: sep.params.i,
        j: sep.params.j,
        k: sep.params.k,
        kprime: sep.params.kprime,
    });
    cert.group = Some(sep.semigroup.group().description());
    cert.phi_pi = Some((&sep.phi_pi).into());
    cert.phi_rho = Some((&sep.phi_rho).into());
    cert.separation = Some(Separation {
        semigroup: SemigroupRecord::LocalGroup {
            alphabet: alphabet_string(&prob.alphabet),
            language: sep.language_words.clone(),
            group: sep.semigroup.group().description(),
            f: st.assignments(),
        },
        phi_pi: (&sep.phi_pi).into(),
        phi_rho: (&sep.phi_rho).into(),
        w_pi: Some(sep.witness.render(&sep.witness.w_pi)),
        w_rho: Some(sep.witness.render(&sep.witness.w_rho)),
    });
    if alt {
        let sep6 = build_test_semigroup6(&prob)?;
        if !sep6.separated() || !sep6.words_differ() || !sep6.matches_expected() {
            return Err(Error::Inconsistent(format!(
                "the superposition test semigroup for {cp} = {cr} does not separate"
            )));
        }
        cert.alt = Some(Separation {
            semigroup: superposition_record(&sep6.semigroup),
            phi_pi: (&sep6.phi_pi).into(),
            phi_rho: (&sep6.phi_rho).into(),
            w_pi: Some(sep6.witness.render(&sep6.witness.reduced_pi)),
            w_rho: Some(sep6.witness.render(&sep6.witness.reduced_rho)),
        });
    }
    Ok((false, cert))
}

fn replay_trace(start: &Term, end: &str, steps: &[StepRecord]) -> Result<()> {
    let mut cur = start.clone();
    for s in steps {
        let step = RewriteStep {
            kind: s.kind,
            before: Term::parse(&s.before)?,
            after: Term::parse(&s.after)?,
        };
        if step.before != cur || !step.is_valid_instance() {
            return Err(Error::Inconsistent(format!(
                "invalid {:?} step {} -> {}",
                s.kind, s.before, s.after
            )));
        }
        cur = step.after;
    }
    if cur != Term::parse(end)? {
        return Err(Error::Inconsistent(format!(
            "trace ends at {cur}, not {end}"
        )));
    }
    Ok(())
}

fn replay_separation(pi: &Term, rho: &Term, sep: &Separation) -> Result<()> {
    fn run<S: Structure>(s: LocalGroup<S>, pi: &Term, rho: &Term, sep: &Separation) -> Result<()> {
        let asg = letters_of(&s);
        let a: ElementRecord = (&evaluate(pi, &s, &asg)?).into();
        let b: ElementRecord = (&evaluate(rho, &s, &asg)?).into();
        if a != sep.phi_pi || b != sep.phi_rho {
            return Err(Error::Inconsistent(
                "recorded values do not match evaluation".into(),
            ));
        }
        if a == b {
            return Err(Error::Inconsistent(
                "the recorded semigroup does not separate".into(),
            ));
        }
        Ok(())
    }
    match &sep.semigroup {
        SemigroupRecord::LocalGroup {
            alphabet,
            language,
            group,
            f,
        } => {
            let lang = FactorialLanguage::generated_by(Alphabet::parse(alphabet)?, language)?;
            let group = FiniteGroup::from_description(group)?;
            run(
                LocalGroup::new(GFunction::from_group_values(lang, group, f.clone())?),
                pi,
                rho,
                sep,
            )
        }
        SemigroupRecord::Superposition {
            alphabet,
            k,
            group,
            f,
        } => {
            let group = FiniteGroup::from_description(group)?;
            let sf = SuperpositionFunction::from_group_values(
                Alphabet::parse(alphabet)?,
                *k,
                group,
                f.clone(),
            )?;
            run(LocalGroup::new(sf), pi, rho, sep)
        }
    }
}

/// Re-checks a certificate: traces step by step when the sides are equal,
/// otherwise evaluation of both sides in the recorded semigroup(s).
pub fn replay_certificate(cert: &Certificate) -> Result<()> {
    let pi = Term::parse(&cert.pi)?;
    let rho = Term::parse(&cert.rho)?;
    let alphabet = Alphabet::parse(&cert.alphabet)?;
    let (cp, _) = canonicalize_rank1(&pi, &alphabet)?;
    let (cr, _) = canonicalize_rank1(&rho, &alphabet)?;
    if cp.to_string() != cert.canonical_pi || cr.to_string() != cert.canonical_rho {
        return Err(Error::Inconsistent(
            "recorded canonical forms are wrong".into(),
        ));
    }
    if cert.equal != (cp == cr) {
        return Err(Error::Inconsistent("recorded verdict is wrong".into()));
    }
    if cert.equal {
        let (Some(tp), Some(tr)) = (&cert.trace_pi, &cert.trace_rho) else {
            return Err(Error::Invalid(
                "an equality certificate needs both traces".into(),
            ));
        };
        replay_trace(&pi, &cert.canonical_pi, tp)?;
        replay_trace(&rho, &cert.canonical_rho, tr)?;
        return Ok(());
    }
    let sep = cert
        .separation
        .as_ref()
        .ok_or_else(|| Error::Invalid("a separation certificate needs a semigroup".into()))?;
    replay_separation(&pi, &rho, sep)?;
    if let Some(alt) = &cert.alt {
        replay_separation(&pi, &rho, alt)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Term {
        Term::parse(s).unwrap()
    }

    fn ab() -> Alphabet {
        Alphabet::parse("ab").unwrap()
    }

    #[test]
    fn single_letter_powers() {
        let a = Alphabet::parse("a").unwrap();
        let prob = IdentityProblem::new(&t("a^(w+1)"), &t("a^(w+2)"), &a).unwrap();
        let wit = build_witness5(&prob);
        assert_eq!(wit.qq, 3);
        assert_eq!(wit.w_pi, FreeGroupWord::var(0).pow(4));
        assert_eq!(wit.w_rho, FreeGroupWord::var(0).pow(5));
        let sep = build_test_semigroup5(&prob).unwrap();
        let p = &sep.params;
        assert_eq!((p.i, p.j, p.k, p.kprime), (3, 4, 8, 12));
        assert_eq!(p.w_i, vec![Word::parse("aaa").unwrap()]);
        assert!(p.w_j.is_empty());
        let g = p.eta.image(0).clone();
        assert_eq!(g.order(), 6);
        let a8 = Word::parse("aaaaaaaa").unwrap();
        assert_eq!(
            sep.phi_pi,
            ZElement::Triple(a8.clone(), g.pow(4), a8.clone())
        );
        assert_eq!(sep.phi_rho, ZElement::Triple(a8.clone(), g.pow(5), a8));
        assert!(sep.separated() && sep.matches_expected());
        assert!(sep.properties.all_hold(), "{:?}", sep.properties);
        assert_eq!(sep.properties.kernels[0].1, 6);
        assert_eq!(sep.semigroup.structure().language().len(), 8);
        assert_eq!(
            sep.semigroup.structure().language().boundary(),
            vec![Word::parse("aaaaaaaaa").unwrap()]
        );
    }

    #[test]
    fn single_letter_superposition() {
        let a = Alphabet::parse("a").unwrap();
        let prob = IdentityProblem::new(&t("a^(w+1)"), &t("a^(w+2)"), &a).unwrap();
        let sep = build_test_semigroup6(&prob).unwrap();
        let w = &sep.witness;
        assert_eq!((w.r, w.k), (4, 3));
        assert_eq!(w.variables, vec![Word::parse("aaaa").unwrap()]);
        assert_eq!(w.reduced_pi, FreeGroupWord::var(0).pow(-2));
        assert_eq!(w.reduced_rho, FreeGroupWord::var(0).pow(-1));
        assert!(sep.separated() && sep.words_differ() && sep.matches_expected());
    }

    #[test]
    fn witness_with_crucial_portion() {
        let prob =
            IdentityProblem::new(&t("b(ab)^w b^(w-1)"), &t("b(ab)^w b^(w-1)"), &ab()).unwrap();
        let wit = build_witness5(&prob);
        assert!(wit.is_trivial());
        let names: Vec<String> = wit.variables.iter().map(|v| v.to_string()).collect();
        assert_eq!(names, vec!["v[ab]", "v[ab,1,b]", "v[b]"]);
        assert_eq!(wit.render(&wit.w_pi), "v[ab]^3 v[ab,1,b] v[b]");
        let params = choose_parameters(&prob, &wit).unwrap();
        assert_eq!(params.t_of(1), 1);
        assert_eq!(params.t_of(3), 1);
        let sep = build_test_semigroup5(&prob).unwrap();
        assert!(!sep.separated());
        assert!(sep.properties.all_hold(), "{:?}", sep.properties);
    }

    #[test]
    fn decide_examples() {
        let (eq, cert) = decide(
            &t("(bababa)^w b^(w-3) b (bb)^(w+1)"),
            &t("b(ab)^w b^(w-1)"),
            &ab(),
            Variety::Lg,
            false,
        )
        .unwrap();
        assert!(eq);
        replay_certificate(&cert).unwrap();
        let (eq, cert) = decide(&t("a^(w+1)"), &t("a^(w+2)"), &ab(), Variety::Lg, true).unwrap();
        assert!(!eq);
        assert_eq!(
            cert.params,
            Some(ParamsRecord {
                i: 3,
                j: 4,
                k: 8,
                kprime: 12
            })
        );
        replay_certificate(&cert).unwrap();
        let json = serde_json::to_string(&cert).unwrap();
        let back: Certificate = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cert);
        assert!(
            decide(&t("ab"), &t("ab"), &ab(), Variety::S, false)
                .unwrap()
                .0
        );
        let (eq, cert) = decide(&t("ab"), &t("a^w b"), &ab(), Variety::S, true).unwrap();
        assert!(!eq);
        replay_certificate(&cert).unwrap();
        assert!(matches!(
            decide(&t("(a^w b a^w)^w"), &t("a^w"), &ab(), Variety::Lg, false),
            Err(Error::RankTooHigh(2))
        ));
    }

    #[test]
    fn tampered_certificates_fail() {
        let (_, mut cert) =
            decide(&t("a^(w+1)b"), &t("a^(w+2)b"), &ab(), Variety::Lg, false).unwrap();
        replay_certificate(&cert).unwrap();
        cert.phi_pi = None;
        let sep = cert.separation.as_mut().unwrap();
        std::mem::swap(&mut sep.phi_pi, &mut sep.phi_rho);
        assert!(replay_certificate(&cert).is_err());
        let (_, mut cert) =
            decide(&t("(ab)^w a"), &t("a(ba)^w"), &ab(), Variety::Lg, false).unwrap();
        assert!(!cert.trace_rho.as_ref().unwrap().is_empty());
        cert.trace_rho.as_mut().unwrap().pop();
        assert!(replay_certificate(&cert).is_err());
    }
}
