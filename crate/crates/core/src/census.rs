//! Exhaustive enumeration over a dimension vector.
//!
//! The free entries of a normalized matrix are the strict upper blocks
//! (row `i`, block `j > i`), so there are `2^{Σ_{i<j} n_j}` matrices. They
//! are listed in lexicographic order of the free bits read row by row, the
//! first free bit being the most significant.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::charclasses::{is_orientable, is_spin};
use crate::error::{Error, Result};
use crate::fungroup::is_abelian;
use crate::model::{BlockPermutation, DimensionVector, MatrixFile, VectorMatrix};
use crate::report::{Report, ReportOptions};

/// Positions `(row, block, col)` of the free bits, most significant first.
pub fn free_positions(dims: &DimensionVector) -> Vec<(usize, usize, usize)> {
    let k = dims.k();
    (0..k)
        .flat_map(|i| {
            (i + 1..k).flat_map(move |j| (0..dims.block_size(j)).map(move |l| (i, j, l)))
        })
        .collect()
}

/// Number of matrices in the census, as a power of two.
pub fn free_bit_count(dims: &DimensionVector) -> usize {
    free_positions(dims).len()
}

fn check_size(dims: &DimensionVector) -> Result<usize> {
    let f = free_bit_count(dims);
    if f >= 63 {
        return Err(Error::Shape(format!("census of 2^{f} matrices is too large")));
    }
    Ok(f)
}

/// The matrix at position `index` of the enumeration.
pub fn matrix_at(dims: &DimensionVector, index: u64) -> VectorMatrix {
    let free = free_positions(dims);
    let f = free.len();
    let mut a = VectorMatrix::from_fn(dims.clone(), |row, block, _| row == block);
    for (p, &(i, j, l)) in free.iter().enumerate() {
        a.set(i, j, l, (index >> (f - 1 - p)) & 1 == 1);
    }
    a
}

pub fn enumerate(dims: &DimensionVector) -> Result<impl Iterator<Item = VectorMatrix> + '_> {
    let f = check_size(dims)?;
    Ok((0..1u64 << f).map(move |i| matrix_at(dims, i)))
}

/// Least conjugate, under block permutations, that is still normalized.
pub fn canonical_form(a: &VectorMatrix) -> Result<VectorMatrix> {
    let (_, b) = a.normalize()?;
    Ok(BlockPermutation::all(b.k())
        .iter()
        .map(|p| b.conjugate(p))
        .filter(VectorMatrix::is_normalized)
        .min()
        .expect("the identity conjugate is normalized"))
}

/// `dims|row,row,...` with rows as bit strings.
pub fn canonical_key(a: &VectorMatrix) -> Result<String> {
    let c = canonical_form(a)?;
    let dims: Vec<String> = c.dims().as_slice().iter().map(ToString::to_string).collect();
    let rows: Vec<String> = c
        .rows_u8()
        .iter()
        .map(|r| r.iter().map(|b| char::from(b'0' + b)).collect())
        .collect();
    Ok(format!("{}|{}", dims.join(","), rows.join(",")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Counting {
    RawMatrices,
    ConjugationOrbits,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub dims: Vec<usize>,
    pub counting: Counting,
    pub total: usize,
    pub orientable: usize,
    pub spin: usize,
    pub abelian: usize,
    pub aspherical: usize,
}

#[derive(Clone, Copy, Default)]
struct Tally {
    total: usize,
    orientable: usize,
    spin: usize,
    abelian: usize,
    aspherical: usize,
}

impl Tally {
    fn of(a: &VectorMatrix) -> Result<Self> {
        let orientable = is_orientable(a);
        let spin = orientable && is_spin(a)?;
        Ok(Tally {
            total: 1,
            orientable: usize::from(orientable),
            spin: usize::from(spin),
            abelian: usize::from(is_abelian(a)?),
            aspherical: usize::from(a.dims().is_real_bott()),
        })
    }

    fn merge(self, o: Tally) -> Tally {
        Tally {
            total: self.total + o.total,
            orientable: self.orientable + o.orientable,
            spin: self.spin + o.spin,
            abelian: self.abelian + o.abelian,
            aspherical: self.aspherical + o.aspherical,
        }
    }

    fn summary(self, dims: &DimensionVector, counting: Counting) -> Summary {
        Summary {
            dims: dims.as_slice().to_vec(),
            counting,
            total: self.total,
            orientable: self.orientable,
            spin: self.spin,
            abelian: self.abelian,
            aspherical: self.aspherical,
        }
    }
}

/// Counts over every matrix of the census.
pub fn classify(dims: &DimensionVector) -> Result<Summary> {
    let f = check_size(dims)?;
    let tally = (0..1u64 << f)
        .into_par_iter()
        .map(|i| Tally::of(&matrix_at(dims, i)))
        .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?;
    Ok(tally.summary(dims, Counting::RawMatrices))
}

/// Counts over one representative per conjugation orbit.
pub fn classify_orbits(dims: &DimensionVector) -> Result<Summary> {
    let tally = orbits(dims)?
        .keys()
        .try_fold(Tally::default(), |acc, a| Ok::<_, Error>(acc.merge(Tally::of(a)?)))?;
    Ok(tally.summary(dims, Counting::ConjugationOrbits))
}

/// First census member of each orbit, with the orbit's size in the census.
pub fn orbits(dims: &DimensionVector) -> Result<BTreeMap<VectorMatrix, usize>> {
    let f = check_size(dims)?;
    let keyed: Vec<(String, VectorMatrix)> = (0..1u64 << f)
        .into_par_iter()
        .map(|i| {
            let a = matrix_at(dims, i);
            canonical_key(&a).map(|k| (k, a))
        })
        .collect::<Result<_>>()?;
    let mut first: BTreeMap<String, (VectorMatrix, usize)> = BTreeMap::new();
    for (key, a) in keyed {
        first.entry(key).or_insert((a, 0)).1 += 1;
    }
    Ok(first.into_values().collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRecord {
    pub matrix: MatrixFile,
    pub canonical_key: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbit_size: Option<usize>,
    pub report: Report,
}

fn summarize(dims: &DimensionVector, records: &[CensusRecord], counting: Counting) -> Summary {
    let tally = records.iter().fold(Tally::default(), |t, r| {
        t.merge(Tally {
            total: 1,
            orientable: usize::from(r.report.orientable),
            spin: usize::from(r.report.spin == Some(true)),
            abelian: usize::from(r.report.pi1.flags.abelian),
            aspherical: usize::from(r.report.pi1.flags.aspherical),
        })
    });
    tally.summary(dims, counting)
}

/// Full records in enumeration order, computed in parallel. With `dedupe`
/// only the first member of each conjugation orbit is kept.
pub fn records(dims: &DimensionVector, dedupe: bool) -> Result<(Vec<CensusRecord>, Summary)> {
    let f = check_size(dims)?;
    let all: Vec<CensusRecord> = (0..1u64 << f)
        .into_par_iter()
        .map(|i| {
            let a = matrix_at(dims, i);
            Ok(CensusRecord {
                matrix: MatrixFile::from(&a),
                canonical_key: canonical_key(&a)?,
                orbit_size: None,
                report: Report::build(&a, &ReportOptions::default())?,
            })
        })
        .collect::<Result<_>>()?;
    if !dedupe {
        let summary = summarize(dims, &all, Counting::RawMatrices);
        return Ok((all, summary));
    }
    let mut sizes: BTreeMap<&str, usize> = BTreeMap::new();
    for r in &all {
        *sizes.entry(r.canonical_key.as_str()).or_default() += 1;
    }
    let sizes: BTreeMap<String, usize> =
        sizes.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
    let mut seen = std::collections::BTreeSet::new();
    let reps: Vec<CensusRecord> = all
        .into_iter()
        .filter(|r| seen.insert(r.canonical_key.clone()))
        .map(|mut r| {
            r.orbit_size = sizes.get(&r.canonical_key).copied();
            r
        })
        .collect();
    let summary = summarize(dims, &reps, Counting::ConjugationOrbits);
    Ok((reps, summary))
}
