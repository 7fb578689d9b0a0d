//! The mod-2 cohomology ring `H*(B_k; Z_2)`.
//!
//! After eliminating the degree-one generators of the facets `F^i_l`
//! (`l ≥ 1`), the ring is `Z_2[z_1, ..., z_k] / (R_1, ..., R_k)` with
//!
//! ```text
//! R_i = z_i · ∏_{l=1}^{n_i} (Σ_j a^i_{j,l} z_j)
//! ```
//!
//! For a normalized matrix the lexicographic leading term of `R_i` is
//! `z_i^{n_i+1}` (with `z_k > ... > z_1`), so each relation becomes a
//! rewrite rule `z_i^{n_i+1} → tail_i`. The heads are pairwise coprime, so
//! the rules form a Gröbner basis and the normal forms are exactly the
//! monomials `∏ z_i^{e_i}` with `e_i ≤ n_i`.
//!
//! [`RelationSet::reduce`] is the rewriting normal form on arbitrary
//! polynomials. [`CohomologyRing`] stores elements densely over the normal
//! basis and multiplies with precomputed "multiply by `z_j`" maps.

use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Gf2Vector;
use crate::model::{DimensionVector, VectorMatrix};

/// Exponent vector of a monomial in `z_1, ..., z_k`. Serialized as a plain
/// exponent array, so `z_1 z_2^2` is `[1, 2]`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn one(k: usize) -> Self {
        Monomial(vec![0; k])
    }

    pub fn var(k: usize, i: usize) -> Self {
        let mut e = vec![0; k];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

/// Lexicographic with the last variable most significant.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.iter().rev().cmp(other.0.iter().rev())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let factors: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    format!("z{}", i + 1)
                } else {
                    format!("z{}^{}", i + 1, e)
                }
            })
            .collect();
        if factors.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", factors.join("*"))
        }
    }
}

/// A polynomial over GF(2) in `k` variables, as a set of monomials.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    k: usize,
    terms: BTreeSet<Monomial>,
}

impl Polynomial {
    pub fn zero(k: usize) -> Self {
        Self {
            k,
            terms: BTreeSet::new(),
        }
    }

    pub fn one(k: usize) -> Self {
        Self::monomial(Monomial::one(k))
    }

    pub fn var(k: usize, i: usize) -> Self {
        Self::monomial(Monomial::var(k, i))
    }

    pub fn monomial(m: Monomial) -> Self {
        let k = m.0.len();
        let mut p = Self::zero(k);
        p.toggle(m);
        p
    }

    /// `Σ coeffs[j] z_j`.
    pub fn linear(coeffs: &[bool]) -> Self {
        let k = coeffs.len();
        let mut p = Self::zero(k);
        for (j, _) in coeffs.iter().enumerate().filter(|(_, &c)| c) {
            p.toggle(Monomial::var(k, j));
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = Monomial>>(k: usize, terms: I) -> Self {
        let mut p = Self::zero(k);
        for m in terms {
            debug_assert_eq!(m.0.len(), k);
            p.toggle(m);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.terms.contains(m)
    }

    /// Terms in increasing monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = &Monomial> {
        self.terms.iter()
    }

    pub fn leading(&self) -> Option<&Monomial> {
        self.terms.last()
    }

    /// Adds a single monomial (GF(2): present terms cancel).
    pub fn toggle(&mut self, m: Monomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        Polynomial {
            k: self.k,
            terms: self
                .terms
                .symmetric_difference(&other.terms)
                .cloned()
                .collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.k);
        for a in &self.terms {
            for b in &other.terms {
                out.toggle(a.mul(b));
            }
        }
        out
    }

    /// Product that drops every term of degree above `max_degree`.
    pub fn mul_truncated(&self, other: &Polynomial, max_degree: u32) -> Polynomial {
        let mut out = Polynomial::zero(self.k);
        for a in self.terms.iter().filter(|m| m.degree() <= max_degree) {
            for b in other.terms.iter().filter(|m| m.degree() + a.degree() <= max_degree) {
                out.toggle(a.mul(b));
            }
        }
        out
    }

    pub fn homogeneous_part(&self, degree: u32) -> Polynomial {
        Polynomial {
            k: self.k,
            terms: self
                .terms
                .iter()
                .filter(|m| m.degree() == degree)
                .cloned()
                .collect(),
        }
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.iter().map(Monomial::degree).max()
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().rev().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// One rewrite rule `z_block^{n+1} → tail`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub block: usize,
    pub head: Monomial,
    pub tail: Polynomial,
}

/// The relations of the cohomology ring as a terminating rewrite system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationSet {
    dims: DimensionVector,
    rules: Vec<Rule>,
}

impl RelationSet {
    /// The relation polynomial `z_i · ∏_l (Σ_j a^i_{j,l} z_j)` for block `i`.
    pub fn relation(a: &VectorMatrix, i: usize) -> Polynomial {
        let k = a.k();
        let mut p = Polynomial::var(k, i);
        for l in 0..a.dims().block_size(i) {
            let coeffs: Vec<bool> = (0..k).map(|j| a.get(j, i, l)).collect();
            p = p.mul(&Polynomial::linear(&coeffs));
        }
        p
    }

    pub fn build(a: &VectorMatrix) -> Result<Self> {
        a.require_normalized()?;
        let k = a.k();
        let rules = (0..k)
            .map(|i| {
                let mut head = vec![0; k];
                head[i] = a.dims().block_size(i) as u32 + 1;
                let head = Monomial(head);
                let rel = Self::relation(a, i);
                debug_assert_eq!(rel.leading(), Some(&head));
                let tail = rel.add(&Polynomial::monomial(head.clone()));
                Rule {
                    block: i,
                    head,
                    tail,
                }
            })
            .collect();
        Ok(Self {
            dims: a.dims().clone(),
            rules,
        })
    }

    pub fn dims(&self) -> &DimensionVector {
        &self.dims
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// True when every exponent is within its block bound.
    pub fn is_normal(&self, m: &Monomial) -> bool {
        m.0.iter()
            .zip(self.dims.as_slice())
            .all(|(&e, &n)| e as usize <= n)
    }

    fn reducible_var(&self, m: &Monomial) -> Option<usize> {
        (0..self.dims.k())
            .rev()
            .find(|&i| m.0[i] as usize > self.dims.block_size(i))
    }

    /// Normal form: repeatedly rewrite the largest reducible term.
    pub fn reduce(&self, p: &Polynomial) -> Polynomial {
        let mut work = p.clone();
        let mut done = Polynomial::zero(p.k);
        while let Some(m) = work.terms.pop_last() {
            let Some(i) = self.reducible_var(&m) else {
                done.toggle(m);
                continue;
            };
            let mut rest = m;
            rest.0[i] -= self.dims.block_size(i) as u32 + 1;
            for t in self.rules[i].tail.terms() {
                work.toggle(t.mul(&rest));
            }
        }
        done
    }
}

/// An element of a [`CohomologyRing`], stored over the normal monomial basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RingElement {
    ring: u64,
    bits: Gf2Vector,
}

impl RingElement {
    pub fn is_zero(&self) -> bool {
        self.bits.is_zero()
    }

    /// Number of basis monomials with nonzero coefficient.
    pub fn len(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingElement{:?}", self.bits)
    }
}

/// `H*(B_k; Z_2)` as a finite-dimensional GF(2) algebra.
///
/// Basis monomial `∏ z_i^{e_i}` has index `Σ e_i · stride_i` with
/// `stride_i = ∏_{j<i} (n_j + 1)`, so index order is the monomial order.
#[derive(Clone, Debug)]
pub struct CohomologyRing {
    matrix: VectorMatrix,
    relations: RelationSet,
    strides: Vec<usize>,
    degrees: Vec<u32>,
    mul_var: Vec<Vec<Gf2Vector>>,
    fingerprint: u64,
}

impl CohomologyRing {
    pub fn new(a: &VectorMatrix) -> Result<Self> {
        let relations = RelationSet::build(a)?;
        let dims = a.dims().as_slice().to_vec();
        let strides: Vec<usize> = dims
            .iter()
            .scan(1, |acc, &n| {
                let s = *acc;
                *acc *= n + 1;
                Some(s)
            })
            .collect();
        let size = a.dims().vertex_count();
        let degrees = (0..size)
            .map(|idx| {
                dims.iter()
                    .zip(&strides)
                    .map(|(&n, &s)| ((idx / s) % (n + 1)) as u32)
                    .sum()
            })
            .collect();

        let mut hasher = DefaultHasher::new();
        a.hash(&mut hasher);
        let fingerprint = hasher.finish();

        let mut ring = Self {
            matrix: a.clone(),
            relations,
            strides,
            degrees,
            mul_var: Vec::with_capacity(dims.len()),
            fingerprint,
        };
        ring.build_multiplication();
        Ok(ring)
    }

    /// Multiplication by `z_j`, built for `j = 1, 2, ...` in turn. When the
    /// exponent of `z_j` would overflow, `z_j · m = tail_j · (m / z_j^{n_j})`;
    /// the tail only involves `z_1, ..., z_j` with `z_j`-degree at most
    /// `n_j`, so the maps for lower variables already suffice.
    fn build_multiplication(&mut self) {
        let size = self.dimension();
        let k = self.relations.dims.k();
        for j in 0..k {
            let n_j = self.relations.dims.block_size(j);
            let stride = self.strides[j];
            let tail = self.relations.rules[j].tail.clone();
            let mut images = Vec::with_capacity(size);
            for idx in 0..size {
                let e = (idx / stride) % (n_j + 1);
                if e < n_j {
                    images.push(Gf2Vector::unit(size, idx + stride));
                    continue;
                }
                let base = idx - e * stride;
                let mut acc = Gf2Vector::zeros(size);
                for t in tail.terms() {
                    let mut v = Gf2Vector::unit(size, base + t.0[j] as usize * stride);
                    for i in 0..j {
                        for _ in 0..t.0[i] {
                            v = apply(&self.mul_var[i], &v);
                        }
                    }
                    acc.add_assign(&v);
                }
                images.push(acc);
            }
            self.mul_var.push(images);
        }
    }

    pub fn matrix(&self) -> &VectorMatrix {
        &self.matrix
    }

    pub fn relations(&self) -> &RelationSet {
        &self.relations
    }

    pub fn dims(&self) -> &DimensionVector {
        &self.relations.dims
    }

    pub fn nvars(&self) -> usize {
        self.relations.dims.k()
    }

    /// Total dimension over GF(2).
    pub fn dimension(&self) -> usize {
        self.degrees.len()
    }

    pub fn basis_monomial(&self, idx: usize) -> Monomial {
        Monomial(
            self.relations
                .dims
                .as_slice()
                .iter()
                .zip(&self.strides)
                .map(|(&n, &s)| ((idx / s) % (n + 1)) as u32)
                .collect(),
        )
    }

    pub fn basis_index(&self, m: &Monomial) -> Option<usize> {
        if m.0.len() != self.nvars() || !self.relations.is_normal(m) {
            return None;
        }
        Some(m.0.iter().zip(&self.strides).map(|(&e, &s)| e as usize * s).sum())
    }

    fn wrap(&self, bits: Gf2Vector) -> RingElement {
        RingElement {
            ring: self.fingerprint,
            bits,
        }
    }

    fn check(&self, e: &RingElement) -> Result<()> {
        if e.ring == self.fingerprint && e.bits.len() == self.dimension() {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn zero(&self) -> RingElement {
        self.wrap(Gf2Vector::zeros(self.dimension()))
    }

    pub fn one(&self) -> RingElement {
        self.wrap(Gf2Vector::unit(self.dimension(), 0))
    }

    pub fn var(&self, i: usize) -> RingElement {
        self.mul_var_element(&self.one(), i)
    }

    /// The class of an arbitrary polynomial, via the rewrite system.
    pub fn element(&self, p: &Polynomial) -> Result<RingElement> {
        if p.nvars() != self.nvars() {
            return Err(Error::RingMismatch);
        }
        let reduced = self.relations.reduce(p);
        let mut bits = Gf2Vector::zeros(self.dimension());
        for m in reduced.terms() {
            bits.flip(self.basis_index(m).expect("reduced terms are normal"));
        }
        Ok(self.wrap(bits))
    }

    pub fn to_polynomial(&self, e: &RingElement) -> Polynomial {
        Polynomial::from_terms(self.nvars(), self.monomials(e))
    }

    /// Basis monomials of `e`, increasing.
    pub fn monomials(&self, e: &RingElement) -> Vec<Monomial> {
        e.bits.ones().map(|i| self.basis_monomial(i)).collect()
    }

    pub fn add(&self, a: &RingElement, b: &RingElement) -> Result<RingElement> {
        self.check(a)?;
        self.check(b)?;
        let mut bits = a.bits.clone();
        bits.add_assign(&b.bits);
        Ok(self.wrap(bits))
    }

    fn mul_var_element(&self, a: &RingElement, i: usize) -> RingElement {
        self.wrap(apply(&self.mul_var[i], &a.bits))
    }

    /// `a · z^m` for a basis monomial `m`.
    fn mul_monomial(&self, a: &Gf2Vector, m: &Monomial) -> Gf2Vector {
        let mut v = a.clone();
        for (i, &e) in m.0.iter().enumerate() {
            for _ in 0..e {
                v = apply(&self.mul_var[i], &v);
            }
        }
        v
    }

    pub fn multiply(&self, a: &RingElement, b: &RingElement) -> Result<RingElement> {
        self.check(a)?;
        self.check(b)?;
        let mut acc = Gf2Vector::zeros(self.dimension());
        for idx in b.bits.ones() {
            acc.add_assign(&self.mul_monomial(&a.bits, &self.basis_monomial(idx)));
        }
        Ok(self.wrap(acc))
    }

    /// `a · (1 + Σ c_j z_j)`.
    pub fn mul_one_plus_linear(&self, a: &RingElement, coeffs: &[bool]) -> Result<RingElement> {
        self.check(a)?;
        let mut acc = a.bits.clone();
        for (j, _) in coeffs.iter().enumerate().filter(|(_, &c)| c) {
            acc.add_assign(&apply(&self.mul_var[j], &a.bits));
        }
        Ok(self.wrap(acc))
    }

    pub fn homogeneous_part(&self, e: &RingElement, degree: u32) -> RingElement {
        let mut bits = Gf2Vector::zeros(self.dimension());
        for idx in e.bits.ones().filter(|&i| self.degrees[i] == degree) {
            bits.set(idx, true);
        }
        self.wrap(bits)
    }

    pub fn coefficient(&self, e: &RingElement, m: &Monomial) -> bool {
        self.basis_index(m).is_some_and(|i| e.bits.get(i))
    }

    pub fn degree_of_basis(&self, idx: usize) -> u32 {
        self.degrees[idx]
    }

    /// Mod-2 Betti numbers `(b_0, ..., b_n)`: basis monomials per degree.
    pub fn poincare_polynomial(&self) -> Vec<usize> {
        let mut b = vec![0; self.dims().total() + 1];
        for &d in &self.degrees {
            b[d as usize] += 1;
        }
        b
    }

    /// Rank of the span of the given elements.
    pub fn rank(&self, elements: &[RingElement]) -> usize {
        let mut m = crate::linalg::Gf2Matrix::zeros(elements.len(), self.dimension());
        for (r, e) in elements.iter().enumerate() {
            m.set_row(r, &e.bits);
        }
        m.rank()
    }
}

fn apply(map: &[Gf2Vector], v: &Gf2Vector) -> Gf2Vector {
    let mut out = Gf2Vector::zeros(v.len());
    for idx in v.ones() {
        out.add_assign(&map[idx]);
    }
    out
}

/// Coefficients of `∏ (1 + t + ... + t^{n_i})`.
pub fn expected_poincare(dims: &DimensionVector) -> Vec<usize> {
    let mut coeffs = vec![1usize];
    for &n in dims.as_slice() {
        let mut next = vec![0; coeffs.len() + n];
        for (i, &c) in coeffs.iter().enumerate() {
            for slot in &mut next[i..=i + n] {
                *slot += c;
            }
        }
        coeffs = next;
    }
    coeffs
}
