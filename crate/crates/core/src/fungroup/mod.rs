//! The fundamental group as the kernel of `λ: W(Σ_k) → Z_2^n`.
//!
//! Generators are the words `α_j = s_{j,0} · ∏ s_{i,l}^{a^i_{j,l}}`. Each
//! relator is checked mechanically by expanding it into Coxeter letters and
//! reducing in `W`.

mod coxeter;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

pub use coxeter::{
    commutation_graph, commute, is_trivial_by_blocks, racg_reduce, CoxeterLetter, CoxeterWord,
};

use crate::error::{Error, Result};
use crate::linalg::Gf2Vector;
use crate::model::{DimensionVector, VectorMatrix};
use crate::BigIntMatrix;

/// A word in `α_1, ..., α_k`: entry `±j` is `α_j^{±1}` (1-based).
pub type GroupWord = Vec<i32>;

/// A vector `ε ∈ Z_2^n` indexing a coset of `π_1` in `W`, with its
/// representative `t_ε = ∏ s_{i,l}^{ε_{i,l}}` (`l ≥ 1`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CosetShift {
    dims: DimensionVector,
    eps: Vec<bool>,
}

impl CosetShift {
    pub fn new(dims: DimensionVector, eps: Vec<bool>) -> Result<Self> {
        if eps.len() != dims.total() {
            return Err(Error::Shape(format!(
                "shift has length {}, expected {}",
                eps.len(),
                dims.total()
            )));
        }
        Ok(Self { dims, eps })
    }

    pub fn zero(dims: DimensionVector) -> Self {
        let n = dims.total();
        Self {
            dims,
            eps: vec![false; n],
        }
    }

    pub fn eps(&self) -> &[bool] {
        &self.eps
    }

    /// `ε + a_p`.
    pub fn shift_b(&self, a: &VectorMatrix, p: usize) -> Self {
        Self {
            dims: self.dims.clone(),
            eps: self.eps.iter().zip(a.row(p)).map(|(&e, &x)| e ^ x).collect(),
        }
    }

    /// `ε + a_p + a_q`.
    pub fn shift_c(&self, a: &VectorMatrix, p: usize, q: usize) -> Self {
        self.shift_b(a, p).shift_b(a, q)
    }

    pub fn word(&self) -> CoxeterWord {
        self.eps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e)
            .map(|(flat, _)| {
                let (block, col) = self.dims.locate(flat);
                CoxeterLetter::new(block, col + 1)
            })
            .collect()
    }
}

/// `α_j` for every block `j`.
pub fn alpha_words(a: &VectorMatrix) -> Result<Vec<CoxeterWord>> {
    a.require_normalized()?;
    let dims = a.dims();
    Ok((0..a.k())
        .map(|j| {
            let mut w = vec![CoxeterLetter::new(j, 0)];
            for i in 0..a.k() {
                for l in 0..dims.block_size(i) {
                    if a.get(j, i, l) {
                        w.push(CoxeterLetter::new(i, l + 1));
                    }
                }
            }
            w
        })
        .collect())
}

/// Substitutes the `α` words; `α_j^{-1}` is the reversed word since every
/// letter is an involution.
pub fn expand(word: &[i32], alphas: &[CoxeterWord]) -> Result<CoxeterWord> {
    let mut out = Vec::new();
    for &g in word {
        let idx = g.unsigned_abs() as usize;
        if g == 0 || idx > alphas.len() {
            return Err(Error::IndexOutOfRange(format!("generator {g}")));
        }
        let alpha = &alphas[idx - 1];
        if g > 0 {
            out.extend(alpha.iter().copied());
        } else {
            out.extend(alpha.iter().rev().copied());
        }
    }
    Ok(out)
}

/// `λ` summed over the letters: `s_{i,l} ↦ e_{(i,l)}` for `l ≥ 1` and
/// `s_{i,0} ↦ a_i`.
pub fn lambda_image(word: &[CoxeterLetter], a: &VectorMatrix) -> Result<Gf2Vector> {
    let dims = a.dims();
    let mut v = Gf2Vector::zeros(dims.total());
    for x in word {
        if x.block >= dims.k() || x.facet > dims.block_size(x.block) {
            return Err(Error::IndexOutOfRange(format!("letter {x}")));
        }
        if x.facet == 0 {
            for (c, _) in a.row(x.block).iter().enumerate().filter(|(_, &b)| b) {
                v.flip(c);
            }
        } else {
            v.flip(dims.column(x.block, x.facet - 1));
        }
    }
    Ok(v)
}

/// The relators: `α_p²` for `n_p ≥ 2`, and for each `p < q` the word
/// `α_p α_q^{e_2} α_p^{e_3} α_q^{e_4}` with
/// `e_2 = -1` iff `n_q = 1` and `a^q_{p,1} = 1`, `e_3 = -1` iff `n_p = 1`,
/// `e_4 = -1` iff `n_q = 1`.
pub fn relators(a: &VectorMatrix) -> Result<Vec<GroupWord>> {
    a.require_normalized()?;
    let dims = a.dims();
    let sign = |neg: bool| if neg { -1 } else { 1 };
    let mut out = Vec::new();
    for p in 0..a.k() {
        if dims.block_size(p) >= 2 {
            let g = p as i32 + 1;
            out.push(vec![g, g]);
        }
    }
    for p in 0..a.k() {
        for q in p + 1..a.k() {
            let small_q = dims.block_size(q) == 1;
            let (gp, gq) = (p as i32 + 1, q as i32 + 1);
            out.push(vec![
                gp,
                sign(small_q && a.get(p, q, 0)) * gq,
                sign(dims.block_size(p) == 1) * gp,
                sign(small_q) * gq,
            ]);
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupFlags {
    pub aspherical: bool,
    pub abelian: bool,
    pub nilpotent: bool,
    pub torsion_free: bool,
    pub solvable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub generators: usize,
    pub relators: Vec<GroupWord>,
    pub flags: GroupFlags,
}

pub fn presentation(a: &VectorMatrix) -> Result<Presentation> {
    Ok(Presentation {
        generators: a.k(),
        relators: relators(a)?,
        flags: group_properties(a)?,
    })
}

/// Abelian iff `a^q_{p,1} = 0` whenever `p < q` and `n_q = 1`.
pub fn is_abelian(a: &VectorMatrix) -> Result<bool> {
    a.require_normalized()?;
    let dims = a.dims();
    Ok((0..a.k())
        .filter(|&q| dims.block_size(q) == 1)
        .all(|q| (0..q).all(|p| !a.get(p, q, 0))))
}

pub fn group_properties(a: &VectorMatrix) -> Result<GroupFlags> {
    let abelian = is_abelian(a)?;
    let aspherical = a.dims().is_real_bott();
    Ok(GroupFlags {
        aspherical,
        abelian,
        nilpotent: abelian,
        torsion_free: aspherical,
        solvable: true,
    })
}

/// `Z^free_rank ⊕ ⨁ Z_t` over the entries `t` of `torsion`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z_{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Exponent sums of each relator, one row per relator.
pub fn abelianized_relators(a: &VectorMatrix) -> Result<Vec<Vec<i64>>> {
    Ok(relators(a)?
        .iter()
        .map(|r| {
            let mut row = vec![0i64; a.k()];
            for &g in r {
                row[g.unsigned_abs() as usize - 1] += i64::from(g.signum());
            }
            row
        })
        .collect())
}

/// `Z^{k-l-r} ⊕ Z_2^{l+r}` with `l = #{n_i ≥ 2}` and `r` the number of
/// one-dimensional blocks `q` with some `a^q_{p,1} = 1`, `p < q`.
pub fn h1_closed(a: &VectorMatrix) -> Result<AbelianInvariants> {
    a.require_normalized()?;
    let dims = a.dims();
    let l = dims.large_blocks();
    let r = (0..a.k())
        .filter(|&q| dims.block_size(q) == 1 && (0..q).any(|p| a.get(p, q, 0)))
        .count();
    Ok(AbelianInvariants {
        free_rank: a.k() - l - r,
        torsion: vec![2; l + r],
    })
}

/// First homology from the Smith normal form of the abelianized relators.
pub fn h1_snf(a: &VectorMatrix) -> Result<AbelianInvariants> {
    let rows = abelianized_relators(a)?;
    let snf = if rows.is_empty() {
        Vec::new()
    } else {
        BigIntMatrix::from_i64_rows(&rows)?.smith_normal_form()
    };
    let torsion = snf
        .iter()
        .filter(|d| !d.is_one())
        .map(|d: &BigInt| d.to_u64().expect("invariant factors are small"))
        .collect();
    Ok(AbelianInvariants {
        free_rank: a.k() - snf.len(),
        torsion,
    })
}

/// First homology; both routes are computed and must agree.
pub fn h1(a: &VectorMatrix) -> Result<AbelianInvariants> {
    let closed = h1_closed(a)?;
    let oracle = h1_snf(a)?;
    if closed == oracle {
        Ok(closed)
    } else {
        Err(Error::OracleMismatch(format!(
            "closed form {closed} but Smith normal form gives {oracle}"
        )))
    }
}

/// One factor `π_j(RP^{n_i})` of the higher homotopy group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HomotopyFactor {
    Trivial,
    Integers,
    /// `π_j(S^n)` with `j > n`, left unevaluated.
    Sphere { j: usize, n: usize },
}

impl fmt::Display for HomotopyFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomotopyFactor::Trivial => write!(f, "0"),
            HomotopyFactor::Integers => write!(f, "Z"),
            HomotopyFactor::Sphere { j, n } => write!(f, "π_{j}(S^{n})"),
        }
    }
}

/// `π_j(B_k) = ∏ π_j(RP^{n_i})` for `j ≥ 2`, one factor per block.
pub fn higher_homotopy(dims: &DimensionVector, j: usize) -> Result<Vec<HomotopyFactor>> {
    if j < 2 {
        return Err(Error::HomotopyDegree(j));
    }
    Ok(dims
        .as_slice()
        .iter()
        .map(|&n| match n {
            1 => HomotopyFactor::Trivial,
            n if j < n => HomotopyFactor::Trivial,
            n if j == n => HomotopyFactor::Integers,
            n => HomotopyFactor::Sphere { j, n },
        })
        .collect())
}

/// The nontrivial factors joined by `×`, or `0`.
pub fn format_homotopy(factors: &[HomotopyFactor]) -> String {
    let parts: Vec<String> = factors
        .iter()
        .filter(|f| **f != HomotopyFactor::Trivial)
        .map(ToString::to_string)
        .collect();
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join("×")
    }
}
