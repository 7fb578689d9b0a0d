//! The right-angled Coxeter group `W(Σ_k)` generated by the facet
//! reflections `s_{i,l}`. Two distinct letters fail to commute exactly when
//! they lie in the same block and that block is one-dimensional, so
//! `W ≅ ∏_{n_i ≥ 2} Z_2^{n_i+1} × ∏_{n_i = 1} D_∞`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::DimensionVector;

/// The reflection `s_{i,l}` in facet `F^i_l`; `block` is 0-based and
/// `facet` runs over `0..=n_i`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CoxeterLetter {
    pub block: usize,
    pub facet: usize,
}

impl CoxeterLetter {
    pub fn new(block: usize, facet: usize) -> Self {
        Self { block, facet }
    }
}

impl fmt::Debug for CoxeterLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CoxeterLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s({},{})", self.block + 1, self.facet)
    }
}

pub type CoxeterWord = Vec<CoxeterLetter>;

pub fn commute(dims: &DimensionVector, a: CoxeterLetter, b: CoxeterLetter) -> bool {
    a == b || a.block != b.block || dims.block_size(a.block) != 1
}

/// Unordered non-commuting pairs `(a, b)` with `a < b`.
pub fn commutation_graph(dims: &DimensionVector) -> BTreeSet<(CoxeterLetter, CoxeterLetter)> {
    (0..dims.k())
        .filter(|&i| dims.block_size(i) == 1)
        .map(|i| (CoxeterLetter::new(i, 0), CoxeterLetter::new(i, 1)))
        .collect()
}

/// Deletes one pair `s ... s` whose inner letters all commute with `s`.
fn delete_pair(dims: &DimensionVector, w: &mut CoxeterWord) -> bool {
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            if w[j] == w[i] {
                w.remove(j);
                w.remove(i);
                return true;
            }
            if !commute(dims, w[i], w[j]) {
                break;
            }
        }
    }
    false
}

/// Reduced normal form. Pairs are cancelled until the word is reduced; the
/// result is then the lexicographically least word in its commutation
/// class, built by repeatedly taking the smallest letter that can be
/// shuffled to the front.
pub fn racg_reduce(dims: &DimensionVector, word: &[CoxeterLetter]) -> CoxeterWord {
    let mut w = word.to_vec();
    while delete_pair(dims, &mut w) {}
    let mut out = Vec::with_capacity(w.len());
    while !w.is_empty() {
        let pos = (0..w.len())
            .filter(|&i| w[..i].iter().all(|&x| commute(dims, x, w[i])))
            .min_by_key(|&i| w[i])
            .expect("the first letter is always available");
        out.push(w.remove(pos));
    }
    out
}

/// Triviality in `W` decided factor by factor: a `Z_2^{n+1}` block is trivial
/// when every letter occurs an even number of times, a `D_∞` block when free
/// cancellation empties it.
pub fn is_trivial_by_blocks(dims: &DimensionVector, word: &[CoxeterLetter]) -> bool {
    (0..dims.k()).all(|i| {
        let letters = word.iter().filter(|x| x.block == i).map(|x| x.facet);
        if dims.block_size(i) == 1 {
            let mut stack = Vec::new();
            for l in letters {
                if stack.last() == Some(&l) {
                    stack.pop();
                } else {
                    stack.push(l);
                }
            }
            stack.is_empty()
        } else {
            let mut counts = vec![0usize; dims.block_size(i) + 1];
            for l in letters {
                counts[l] += 1;
            }
            counts.iter().all(|c| c % 2 == 0)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dims(d: &[usize]) -> DimensionVector {
        DimensionVector::new(d.to_vec()).unwrap()
    }

    fn s(i: usize, l: usize) -> CoxeterLetter {
        CoxeterLetter::new(i - 1, l)
    }

    #[test]
    fn commutation_graph_examples() {
        let g = commutation_graph(&dims(&[1, 1]));
        assert_eq!(
            g.into_iter().collect::<Vec<_>>(),
            vec![(s(1, 0), s(1, 1)), (s(2, 0), s(2, 1))]
        );
        assert!(commutation_graph(&dims(&[2])).is_empty());
        assert_eq!(
            commutation_graph(&dims(&[2, 1])).into_iter().collect::<Vec<_>>(),
            vec![(s(2, 0), s(2, 1))]
        );
    }

    #[test]
    fn reduce_examples() {
        let d = dims(&[1, 1]);
        assert!(racg_reduce(&d, &[s(1, 0), s(1, 0)]).is_empty());
        assert_eq!(racg_reduce(&d, &[s(1, 0), s(2, 0), s(1, 0)]), vec![s(2, 0)]);
        assert_eq!(
            racg_reduce(&d, &[s(1, 1), s(1, 0), s(1, 1)]),
            vec![s(1, 1), s(1, 0), s(1, 1)]
        );
        assert_eq!(racg_reduce(&d, &[s(2, 0), s(1, 0)]), vec![s(1, 0), s(2, 0)]);
        let d = dims(&[2]);
        assert_eq!(
            racg_reduce(&d, &[s(1, 2), s(1, 0), s(1, 1), s(1, 0)]),
            vec![s(1, 1), s(1, 2)]
        );
    }

    fn word_strategy() -> impl Strategy<Value = (Vec<usize>, Vec<(usize, usize)>)> {
        proptest::collection::vec(1usize..=3, 1..=3).prop_flat_map(|d| {
            let k = d.len();
            let max = *d.iter().max().unwrap();
            (
                Just(d),
                proptest::collection::vec((0..k, 0..=max), 0..14),
            )
        })
    }

    fn to_word(d: &[usize], raw: &[(usize, usize)]) -> CoxeterWord {
        raw.iter()
            .map(|&(i, l)| CoxeterLetter::new(i, l % (d[i] + 1)))
            .collect()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(512))]

        #[test]
        fn reduce_agrees_with_product_oracle((d, raw) in word_strategy()) {
            let dv = dims(&d);
            let w = to_word(&d, &raw);
            let r = racg_reduce(&dv, &w);
            prop_assert_eq!(r.is_empty(), is_trivial_by_blocks(&dv, &w));
            prop_assert_eq!(racg_reduce(&dv, &r), r.clone());
            // w · r⁻¹ is trivial
            let mut check = w.clone();
            check.extend(r.iter().rev());
            prop_assert!(is_trivial_by_blocks(&dv, &check));
        }

        #[test]
        fn normal_form_is_unique((d, raw) in word_strategy(), (pad, at) in (0usize..6, 0usize..20)) {
            let dv = dims(&d);
            let w = to_word(&d, &raw);
            // inserting x x anywhere does not change the element
            let x = CoxeterLetter::new(pad % d.len(), 0);
            let mut v = w.clone();
            let at = at.min(v.len());
            v.insert(at, x);
            v.insert(at, x);
            prop_assert_eq!(racg_reduce(&dv, &w), racg_reduce(&dv, &v));
        }
    }
}
