//! Stiefel–Whitney classes, orientability and spin.
//!
//! The total class is `∏_i (1 + z_i) · ∏_{i,l} (1 + Σ_j a^i_{j,l} z_j)`,
//! one factor per facet. [`total_sw`] expands this product in the ring and
//! is the reference value; the other routes (tower recursion, closed
//! formulas for `w_1` and `w_2`, the spin terms) are checked against it.

use serde::{Deserialize, Serialize};

use crate::cohomology::{CohomologyRing, Monomial, Polynomial, RingElement};
use crate::error::{Error, Result};
use crate::model::VectorMatrix;

/// Graded components `w_0, ..., w_n` of the total class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SWClass {
    components: Vec<RingElement>,
}

impl SWClass {
    fn split(ring: &CohomologyRing, total: &RingElement) -> Self {
        let n = ring.dims().total() as u32;
        Self {
            components: (0..=n).map(|d| ring.homogeneous_part(total, d)).collect(),
        }
    }

    /// `w_degree`; panics above the manifold dimension.
    pub fn component(&self, degree: usize) -> &RingElement {
        &self.components[degree]
    }

    pub fn components(&self) -> &[RingElement] {
        &self.components
    }

    /// True when every positive-degree component vanishes.
    pub fn is_trivial(&self) -> bool {
        self.components[1..].iter().all(RingElement::is_zero)
    }

    pub fn total(&self, ring: &CohomologyRing) -> Result<RingElement> {
        self.components
            .iter()
            .try_fold(ring.zero(), |acc, c| ring.add(&acc, c))
    }
}

/// Column `(i, l)` of the matrix as coefficients over `z_1, ..., z_k`.
fn column(a: &VectorMatrix, block: usize, col: usize) -> Vec<bool> {
    (0..a.k()).map(|j| a.get(j, block, col)).collect()
}

fn unit(k: usize, i: usize) -> Vec<bool> {
    let mut v = vec![false; k];
    v[i] = true;
    v
}

/// The total class by expanding the full product in the ring.
pub fn total_sw(ring: &CohomologyRing) -> Result<SWClass> {
    let a = ring.matrix();
    let k = a.k();
    let mut w = ring.one();
    for i in 0..k {
        w = ring.mul_one_plus_linear(&w, &unit(k, i))?;
        for l in 0..a.dims().block_size(i) {
            w = ring.mul_one_plus_linear(&w, &column(a, i, l))?;
        }
    }
    Ok(SWClass::split(ring, &w))
}

/// The total class stage by stage along the tower:
/// `w(B_j) = w(B_{j-1}) · (1 + z_j) · ∏_l (1 + z_j + w_1(L_l))`.
pub fn total_sw_recursive(ring: &CohomologyRing) -> Result<SWClass> {
    let a = ring.matrix();
    let k = a.k();
    let stages = a.tower_decomposition()?;
    let mut prev: Option<(CohomologyRing, RingElement)> = None;
    for stage in &stages {
        let j = stage.index;
        let sub = CohomologyRing::new(&a.leading_blocks(j + 1)?)?;
        let mut w = match &prev {
            None => sub.one(),
            Some((lower, w)) => {
                let padded = lower.monomials(w).into_iter().map(|m| {
                    let mut e = m.exps().to_vec();
                    e.push(0);
                    Monomial::new(e)
                });
                sub.element(&Polynomial::from_terms(j + 1, padded))?
            }
        };
        w = sub.mul_one_plus_linear(&w, &unit(j + 1, j))?;
        for class in &stage.classes {
            let mut coeffs = class.clone();
            coeffs.push(true);
            w = sub.mul_one_plus_linear(&w, &coeffs)?;
        }
        prev = Some((sub, w));
    }
    let (top, w) = prev.expect("k >= 1");
    debug_assert_eq!(top.nvars(), k);
    // same basis indexing as `ring`, so transfer through monomials
    let w = ring.element(&top.to_polynomial(&w))?;
    Ok(SWClass::split(ring, &w))
}

fn row_parity(a: &VectorMatrix, j: usize) -> bool {
    a.row_sum(j) % 2 == 1
}

/// `w_1 = Σ_j (1 + Σ_{i,l} a^i_{j,l}) z_j`.
pub fn w1_closed(ring: &CohomologyRing) -> Result<RingElement> {
    let a = ring.matrix();
    let coeffs: Vec<bool> = (0..a.k()).map(|j| !row_parity(a, j)).collect();
    ring.element(&Polynomial::linear(&coeffs))
}

/// `T_s`: the second elementary symmetric function of the entries of row `s`.
pub fn t_single(a: &VectorMatrix, s: usize) -> bool {
    let r = a.row_sum(s);
    (r * r.saturating_sub(1) / 2) % 2 == 1
}

/// `T_{rs}`: the inner product of rows `r` and `s`.
pub fn t_pair(a: &VectorMatrix, r: usize, s: usize) -> bool {
    a.row(r)
        .iter()
        .zip(a.row(s))
        .filter(|(&x, &y)| x && y)
        .count()
        % 2
        == 1
}

/// Coefficient of `z_s²` in the unreduced degree-2 class.
pub fn t_prime_single(a: &VectorMatrix, s: usize) -> bool {
    row_parity(a, s) ^ t_single(a, s)
}

/// Coefficient of `z_r z_s` (`r ≠ s`) in the unreduced degree-2 class:
/// `(1 + R_r)(1 + R_s) + T_{rs}` with `R` the row parities.
pub fn t_prime_pair(a: &VectorMatrix, r: usize, s: usize) -> bool {
    (!row_parity(a, r) && !row_parity(a, s)) ^ t_pair(a, r, s)
}

/// `w_2` from the closed formula. For `n_s = 1` the square `z_s²` is
/// rewritten as `Σ_{r<s} a^s_{r,1} z_r z_s`, which moves `T'_s` onto the
/// mixed monomials.
pub fn w2_closed(ring: &CohomologyRing) -> Result<RingElement> {
    ring.element(&w2_polynomial(ring.matrix())?)
}

fn w2_polynomial(a: &VectorMatrix) -> Result<Polynomial> {
    a.require_normalized()?;
    let k = a.k();
    let dims = a.dims();
    let mut terms = Vec::new();
    for s in 0..k {
        let ts = t_prime_single(a, s);
        if dims.block_size(s) >= 2 && ts {
            let mut e = vec![0; k];
            e[s] = 2;
            terms.push(Monomial::new(e));
        }
        for r in 0..s {
            let mut coeff = t_prime_pair(a, r, s);
            if dims.block_size(s) == 1 {
                coeff ^= a.get(r, s, 0) && ts;
            }
            if coeff {
                let mut e = vec![0; k];
                e[r] = 1;
                e[s] = 1;
                terms.push(Monomial::new(e));
            }
        }
    }
    Ok(Polynomial::from_terms(k, terms))
}

/// Degree ≤ 2 part of the total class, expanded without building the ring.
/// Only rules of degree 2 (blocks with `n_s = 1`) can fire at this degree.
pub fn low_degree_sw(a: &VectorMatrix) -> Result<Polynomial> {
    a.require_normalized()?;
    let k = a.k();
    let mut w = Polynomial::one(k);
    let one = Polynomial::one(k);
    for i in 0..k {
        w = w.mul_truncated(&one.add(&Polynomial::var(k, i)), 2);
        for l in 0..a.dims().block_size(i) {
            let factor = one.add(&Polynomial::linear(&column(a, i, l)));
            w = w.mul_truncated(&factor, 2);
        }
    }
    let mut out = Polynomial::zero(k);
    for m in w.terms() {
        match m.exps().iter().position(|&e| e == 2) {
            Some(s) if a.dims().block_size(s) == 1 => {
                for r in (0..s).filter(|&r| a.get(r, s, 0)) {
                    let mut e = vec![0; k];
                    e[r] = 1;
                    e[s] = 1;
                    out.toggle(Monomial::new(e));
                }
            }
            _ => out.toggle(m.clone()),
        }
    }
    Ok(out)
}

/// True iff every row of the matrix has odd weight.
pub fn is_orientable(a: &VectorMatrix) -> bool {
    (0..a.k()).all(|j| row_parity(a, j))
}

/// The three families of spin conditions, evaluated on a normalized matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpinTerms {
    /// `(s, T_s)` for each block with `n_s ≥ 2`; spin needs `T_s = 1`.
    pub singles: Vec<(usize, bool)>,
    /// `(r, s, T_{rs})` for `r < s` with `n_s ≥ 2`; spin needs `0`.
    pub pairs: Vec<(usize, usize, bool)>,
    /// `(r, s, T_{rs} + a^s_{r,1}(1 + T_s))` for `r < s` with `n_s = 1`;
    /// spin needs `0`.
    pub mixed: Vec<(usize, usize, bool)>,
}

impl SpinTerms {
    pub fn compute(a: &VectorMatrix) -> Result<Self> {
        a.require_normalized()?;
        let dims = a.dims();
        let mut terms = SpinTerms {
            singles: Vec::new(),
            pairs: Vec::new(),
            mixed: Vec::new(),
        };
        for s in 0..a.k() {
            let ts = t_single(a, s);
            if dims.block_size(s) >= 2 {
                terms.singles.push((s, ts));
                for r in 0..s {
                    terms.pairs.push((r, s, t_pair(a, r, s)));
                }
            } else {
                for r in 0..s {
                    let v = t_pair(a, r, s) ^ (a.get(r, s, 0) && !ts);
                    terms.mixed.push((r, s, v));
                }
            }
        }
        Ok(terms)
    }

    pub fn holds(&self) -> bool {
        self.singles.iter().all(|&(_, t)| t)
            && self.pairs.iter().all(|&(_, _, t)| !t)
            && self.mixed.iter().all(|&(_, _, t)| !t)
    }
}

/// Spin verdict. Uses the spin terms in a large-blocks-first order when one
/// exists, and otherwise the degree-2 part of the total class.
pub fn is_spin(a: &VectorMatrix) -> Result<bool> {
    a.require_normalized()?;
    if !is_orientable(a) {
        return Err(Error::NotOrientable);
    }
    match a.remark_l_order() {
        Some(order) => SpinTerms::compute(&a.conjugate(&order)).map(|t| t.holds()),
        None => Ok(low_degree_sw(a)?.homogeneous_part(2).is_zero()),
    }
}

/// Spin criterion for real Bott manifolds in terms of `C = A − I`:
/// `Σ_p c_{rp} c_{sp} + c_{rs} Σ_{p<q} c_{sp} c_{sq} ≡ 0` for all `r < s`.
#[allow(non_snake_case)]
pub fn real_bott_spin_C(a: &VectorMatrix) -> Result<bool> {
    if !a.dims().is_real_bott() {
        return Err(Error::NotRealBott);
    }
    a.require_normalized()?;
    if !is_orientable(a) {
        return Err(Error::NotOrientable);
    }
    let k = a.k();
    let c = |i: usize, j: usize| i != j && a.get(i, j, 0);
    let holds = (0..k).all(|s| {
        let e2 = (0..k)
            .flat_map(|p| (p + 1..k).map(move |q| (p, q)))
            .filter(|&(p, q)| c(s, p) && c(s, q))
            .count()
            % 2
            == 1;
        (0..s).all(|r| {
            let dot = (0..k).filter(|&p| c(r, p) && c(s, p)).count() % 2 == 1;
            !(dot ^ (c(r, s) && e2))
        })
    });
    Ok(holds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::DimensionVector;

    fn mat(d: &[usize], rows: &[&[u8]]) -> VectorMatrix {
        let rows: Vec<Vec<u8>> = rows.iter().map(|r| r.to_vec()).collect();
        VectorMatrix::new(DimensionVector::new(d.to_vec()).unwrap(), &rows).unwrap()
    }

    fn mono(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    fn monos(ring: &CohomologyRing, e: &RingElement) -> Vec<Monomial> {
        ring.monomials(e)
    }

    fn ex1(a: u8) -> VectorMatrix {
        mat(&[2, 1], &[&[1, 1, a], &[0, 0, 1]])
    }

    fn ex2(a: u8, b: u8) -> VectorMatrix {
        mat(&[2, 2], &[&[1, 1, a, b], &[0, 0, 1, 1]])
    }

    fn ex3(a: u8, b: u8, c: u8) -> VectorMatrix {
        mat(
            &[2, 1, 1],
            &[&[1, 1, a, b], &[0, 0, 1, c], &[0, 0, 0, 1]],
        )
    }

    fn real_bott(k: usize, upper: &[(usize, usize)]) -> VectorMatrix {
        VectorMatrix::from_fn(DimensionVector::new(vec![1; k]).unwrap(), |r, b, _| {
            r == b || upper.contains(&(r, b))
        })
    }

    #[test]
    fn total_sw_examples() {
        let ring = CohomologyRing::new(&ex1(1)).unwrap();
        assert!(total_sw(&ring).unwrap().is_trivial());

        let ring = CohomologyRing::new(&ex1(0)).unwrap();
        let w = total_sw(&ring).unwrap().total(&ring).unwrap();
        assert_eq!(
            monos(&ring, &w),
            vec![mono(&[0, 0]), mono(&[1, 0]), mono(&[2, 0])]
        );

        let ring = CohomologyRing::new(&mat(&[2], &[&[1, 1]])).unwrap();
        let w = total_sw(&ring).unwrap().total(&ring).unwrap();
        assert_eq!(monos(&ring, &w), vec![mono(&[0]), mono(&[1]), mono(&[2])]);
    }

    #[test]
    fn recursive_route_matches() {
        for a in [ex1(0), ex1(1), ex2(1, 0), ex2(1, 1), ex3(1, 0, 1), ex3(0, 1, 1)] {
            let ring = CohomologyRing::new(&a).unwrap();
            assert_eq!(total_sw(&ring).unwrap(), total_sw_recursive(&ring).unwrap());
        }
        for n in 1..=6 {
            let ring = CohomologyRing::new(&mat(&[n], &[&vec![1u8; n]])).unwrap();
            assert_eq!(total_sw(&ring).unwrap(), total_sw_recursive(&ring).unwrap());
        }
    }

    #[test]
    fn w1_examples() {
        let ring = CohomologyRing::new(&ex1(1)).unwrap();
        assert!(w1_closed(&ring).unwrap().is_zero());
        let ring = CohomologyRing::new(&ex1(0)).unwrap();
        assert_eq!(monos(&ring, &w1_closed(&ring).unwrap()), vec![mono(&[1, 0])]);
        let ring = CohomologyRing::new(&real_bott(2, &[])).unwrap();
        assert!(w1_closed(&ring).unwrap().is_zero());
    }

    #[test]
    fn w2_examples() {
        let ring = CohomologyRing::new(&ex1(1)).unwrap();
        assert!(w2_closed(&ring).unwrap().is_zero());
        // row 2 has even weight here, so the z_2² term survives
        let ring = CohomologyRing::new(&ex2(1, 0)).unwrap();
        assert_eq!(
            monos(&ring, &w2_closed(&ring).unwrap()),
            vec![mono(&[1, 1]), mono(&[0, 2])]
        );
        let ring = CohomologyRing::new(&mat(&[3], &[&[1, 1, 1]])).unwrap();
        assert!(w2_closed(&ring).unwrap().is_zero());
    }

    #[test]
    fn closed_forms_match_expansion() {
        for a in [
            ex1(0),
            ex1(1),
            ex2(0, 0),
            ex2(1, 0),
            ex2(0, 1),
            ex2(1, 1),
            ex3(1, 0, 0),
            ex3(1, 1, 1),
            mat(&[1, 2], &[&[1, 1, 1], &[0, 1, 1]]),
            real_bott(3, &[(0, 1), (0, 2)]),
            real_bott(4, &[(0, 1), (0, 3), (1, 2), (1, 3)]),
        ] {
            let ring = CohomologyRing::new(&a).unwrap();
            let w = total_sw(&ring).unwrap();
            assert_eq!(&w1_closed(&ring).unwrap(), w.component(1), "{a:?}");
            assert_eq!(&w2_closed(&ring).unwrap(), w.component(2), "{a:?}");
            assert_eq!(
                ring.element(&low_degree_sw(&a).unwrap()).unwrap(),
                ring.add(&ring.add(w.component(0), w.component(1)).unwrap(), w.component(2))
                    .unwrap(),
                "{a:?}"
            );
        }
    }

    #[test]
    fn orientability_examples() {
        assert!(is_orientable(&ex1(1)));
        assert!(!is_orientable(&ex1(0)));
        // an RP² fiber at the top stage: row 2 always has weight 2
        for (a, b) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            assert!(!is_orientable(&ex2(a, b)));
            let ring = CohomologyRing::new(&ex2(a, b)).unwrap();
            assert!(!w1_closed(&ring).unwrap().is_zero());
        }
        let oriented: Vec<(u8, u8, u8)> = (0..8u8)
            .map(|m| (m >> 2 & 1, m >> 1 & 1, m & 1))
            .filter(|&(a, b, c)| is_orientable(&ex3(a, b, c)))
            .collect();
        assert_eq!(oriented, vec![(0, 1, 0), (1, 0, 0)]);
        for n in 1..=6 {
            assert_eq!(is_orientable(&mat(&[n], &[&vec![1u8; n]])), n % 2 == 1);
        }
    }

    #[test]
    fn spin_examples() {
        assert_eq!(is_spin(&ex1(1)), Ok(true));
        assert_eq!(is_spin(&ex1(0)), Err(Error::NotOrientable));
        assert_eq!(is_spin(&ex2(1, 0)), Err(Error::NotOrientable));
        // both are the spin manifold ex1(1) times a circle, up to block order
        assert_eq!(is_spin(&ex3(1, 0, 0)), Ok(true));
        assert_eq!(is_spin(&ex3(0, 1, 0)), Ok(true));

        let t = SpinTerms::compute(&ex2(1, 0)).unwrap();
        assert_eq!(t.pairs, vec![(0, 1, true)]);
        assert!(!t.holds());
        // T_1 = e_2(1, 1, a, b) = 1 + ab
        let t = SpinTerms::compute(&ex3(1, 0, 0)).unwrap();
        assert_eq!(t.singles, vec![(0, true)]);
        assert!(t.holds());
    }

    #[test]
    fn spin_without_large_first_order() {
        let a = mat(&[1, 2, 1], &[&[1, 1, 0, 1], &[0, 1, 1, 1], &[0, 0, 0, 1]]);
        assert!(a.remark_l_order().is_none());
        assert!(is_orientable(&a));
        let ring = CohomologyRing::new(&a).unwrap();
        let w2 = total_sw(&ring).unwrap().component(2).clone();
        assert_eq!(is_spin(&a).unwrap(), w2.is_zero());
    }

    #[test]
    fn real_bott_formula_examples() {
        assert_eq!(real_bott_spin_C(&real_bott(4, &[])), Ok(true));
        assert_eq!(real_bott_spin_C(&real_bott(3, &[(0, 1), (0, 2)])), Ok(true));
        assert_eq!(
            real_bott_spin_C(&real_bott(2, &[(0, 1)])),
            Err(Error::NotOrientable)
        );
        assert_eq!(real_bott_spin_C(&ex1(1)), Err(Error::NotRealBott));
    }

    /// The variant `c_{rs} Σ_{p<q} c_{rp} c_{sq}` in the second term is not
    /// equivalent: this orientable spin matrix violates it at `(r, s) = (1, 2)`.
    #[test]
    fn mixed_row_variant_disagrees() {
        let a = real_bott(4, &[(0, 1), (0, 3), (1, 2), (1, 3)]);
        assert!(is_orientable(&a));
        assert_eq!(is_spin(&a), Ok(true));
        assert_eq!(real_bott_spin_C(&a), Ok(true));

        let c = |i: usize, j: usize| i != j && a.get(i, j, 0);
        let (r, s) = (0, 1);
        let dot = (0..4).filter(|&p| c(r, p) && c(s, p)).count();
        let mixed = (0..4)
            .flat_map(|p| (p + 1..4).map(move |q| (p, q)))
            .filter(|&(p, q)| c(r, p) && c(s, q))
            .count();
        assert_eq!((dot + usize::from(c(r, s)) * mixed) % 2, 1);
    }

    #[test]
    fn top_class_is_euler_characteristic() {
        for a in [ex1(0), ex1(1), ex2(1, 1), ex3(1, 1, 0), real_bott(3, &[(0, 2)])] {
            let ring = CohomologyRing::new(&a).unwrap();
            let w = total_sw(&ring).unwrap();
            let top: Vec<u32> = a.dims().as_slice().iter().map(|&n| n as u32).collect();
            let chi: usize = a.dims().as_slice().iter().map(|n| n + 1).product();
            assert_eq!(
                ring.coefficient(w.component(a.n()), &Monomial::new(top)),
                chi % 2 == 1
            );
        }
    }
}
