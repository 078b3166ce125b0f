use std::collections::HashMap;

use super::{LocalGroup, SemigroupView, Structure, ZElement};
use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, Perm};
use crate::words::Word;

/// `M[G; I, Λ; P]` with `(i, g, λ)(j, h, μ) = (i, g·P(λ, j)·h, μ)`.
#[derive(Clone, Debug)]
pub struct ReesMatrix {
    pub group: FiniteGroup,
    pub left: Vec<Word>,
    pub right: Vec<Word>,
    /// `sandwich[λ][i]`
    pub sandwich: Vec<Vec<Perm>>,
}

impl ReesMatrix {
    /// The matrix `P(u, v) = f̂(uv)` over `L¹ × L¹` of a local group.
    pub fn of_local_group<S: Structure>(s: &LocalGroup<S>) -> Result<Self> {
        let mut l1 = vec![Word::empty()];
        l1.extend(s.structure().members()?);
        let sandwich = l1
            .iter()
            .map(|lam| {
                l1.iter()
                    .map(|i| s.f_hat(lam.concat(i).letters()))
                    .collect()
            })
            .collect();
        Ok(ReesMatrix {
            group: s.group().clone(),
            left: l1.clone(),
            right: l1,
            sandwich,
        })
    }
}

impl SemigroupView for ReesMatrix {
    type Elem = (usize, Perm, usize);

    fn multiply(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        (a.0, a.1.then(&self.sandwich[a.2][b.0]).then(&b.1), b.2)
    }

    fn elements(&self) -> Result<Vec<Self::Elem>> {
        let g = self.group.elements()?;
        let mut out = Vec::new();
        for i in 0..self.left.len() {
            for x in g {
                for l in 0..self.right.len() {
                    out.push((i, x.clone(), l));
                }
            }
        }
        Ok(out)
    }

    fn show(&self, a: &Self::Elem) -> String {
        format!(
            "({}, {}, {})",
            self.left[a.0],
            self.group.name(&a.1),
            self.right[a.2]
        )
    }
}

/// Checks that `(u, g, v) ↦ (u, g, v)` is an isomorphism from the triples of
/// `s` onto its Rees matrix semigroup, exhaustively over all pairs. Returns the
/// number of products compared.
pub fn check_rees_isomorphism<S: Structure>(s: &LocalGroup<S>) -> Result<usize> {
    let rees = ReesMatrix::of_local_group(s)?;
    let pos: HashMap<&Word, usize> = rees.left.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let to_rees = |z: &ZElement| -> Result<(usize, Perm, usize)> {
        match z {
            ZElement::Triple(u, g, v) => Ok((pos[u], g.clone(), pos[v])),
            ZElement::NonRegular(w) => Err(Error::Inconsistent(format!(
                "product of triples left the minimal ideal: {w}"
            ))),
        }
    };
    let triples: Vec<ZElement> = s
        .elements()?
        .into_iter()
        .filter(|z| z.is_triple())
        .collect();
    let images: Vec<(usize, Perm, usize)> = triples.iter().map(&to_rees).collect::<Result<_>>()?;
    let mut distinct = images.clone();
    distinct.sort();
    distinct.dedup();
    if distinct.len() != rees.elements()?.len() || distinct.len() != triples.len() {
        return Err(Error::Inconsistent(
            "triples and Rees elements do not correspond".into(),
        ));
    }
    let mut count = 0;
    for (a, ra) in triples.iter().zip(&images) {
        for (b, rb) in triples.iter().zip(&images) {
            let lhs = to_rees(&s.multiply(a, b))?;
            let rhs = rees.multiply(ra, rb);
            if lhs != rhs {
                return Err(Error::Inconsistent(format!(
                    "Rees map is not multiplicative at {} · {}",
                    s.show(a),
                    s.show(b)
                )));
            }
            count += 1;
        }
    }
    Ok(count)
}
