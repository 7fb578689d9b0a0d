//! The fan `Σ_k` in `Z^n`: one ray per facet, and one maximal cone for each
//! way of dropping a single ray from every block.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{odometer, VectorMatrix};
use crate::SmallIntMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fan {
    rays: Vec<Vec<i64>>,
    cones: Vec<Vec<usize>>,
    nonface_bound: usize,
}

impl Fan {
    /// A fan from explicit rays and maximal cones (lists of ray indices).
    pub fn new(rays: Vec<Vec<i64>>, cones: Vec<Vec<usize>>) -> Result<Self> {
        let dim = rays.first().map_or(0, Vec::len);
        if rays.iter().any(|r| r.len() != dim) {
            return Err(Error::Shape("rays have different lengths".into()));
        }
        if rays.len() > 128 {
            return Err(Error::Shape(format!("{} rays, at most 128 supported", rays.len())));
        }
        if let Some(bad) = cones.iter().flatten().find(|&&r| r >= rays.len()) {
            return Err(Error::IndexOutOfRange(format!("ray {bad}")));
        }
        let nonface_bound = cones.iter().map(Vec::len).max().unwrap_or(0) + 1;
        Ok(Self {
            rays,
            cones,
            nonface_bound,
        })
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn cones(&self) -> &[Vec<usize>] {
        &self.cones
    }

    pub fn dimension(&self) -> usize {
        self.rays.first().map_or(0, Vec::len)
    }

    fn cone_masks(&self) -> Vec<u128> {
        self.cones
            .iter()
            .map(|c| c.iter().fold(0u128, |m, &r| m | 1 << r))
            .collect()
    }

    /// Every maximal cone is full-dimensional with a unimodular ray matrix.
    pub fn is_smooth(&self) -> bool {
        let n = self.dimension();
        self.cones.iter().all(|cone| {
            if cone.len() != n {
                return false;
            }
            let rows: Vec<Vec<i64>> = cone.iter().map(|&r| self.rays[r].clone()).collect();
            let det = SmallIntMatrix::from_rows(rows)
                .and_then(|m| m.det())
                .expect("square by construction");
            det.abs() == 1
        })
    }

    /// Minimal non-faces of the underlying simplicial complex, as sorted
    /// ray index lists, up to the search bound.
    pub fn minimal_non_faces(&self) -> Vec<Vec<usize>> {
        let masks = self.cone_masks();
        let is_face = |m: u128| masks.iter().any(|c| c & m == m);
        let mut out = Vec::new();
        for size in 1..=self.nonface_bound.min(self.rays.len()) {
            for subset in (0..self.rays.len()).combinations(size) {
                let m = subset.iter().fold(0u128, |m, &r| m | 1 << r);
                if !is_face(m) && subset.iter().all(|&r| is_face(m & !(1 << r))) {
                    out.push(subset);
                }
            }
        }
        out
    }

    /// Flag: every minimal non-face has exactly two rays.
    pub fn is_flag(&self) -> bool {
        self.minimal_non_faces().iter().all(|s| s.len() == 2)
    }
}

/// Rays `e_{(i,l)}` for `l ≥ 1` in column order, followed by
/// `u^i_0 = -a_i` for each block; maximal cones omit exactly one ray per
/// block.
pub fn build_fan(a: &VectorMatrix) -> Result<Fan> {
    a.require_normalized()?;
    let dims = a.dims();
    let n = dims.total();
    let mut rays: Vec<Vec<i64>> = (0..n)
        .map(|c| {
            let mut e = vec![0; n];
            e[c] = 1;
            e
        })
        .collect();
    rays.extend((0..a.k()).map(|i| a.row(i).iter().map(|&b| -i64::from(b)).collect()));
    let ray_of = |i: usize, l: usize| if l == 0 { n + i } else { dims.column(i, l - 1) };
    let sizes: Vec<usize> = dims.as_slice().iter().map(|d| d + 1).collect();
    let cones = odometer(&sizes)
        .map(|dropped| {
            let mut cone: Vec<usize> = (0..a.k())
                .flat_map(|i| {
                    let skip = dropped[i];
                    (0..sizes[i])
                        .filter(move |&l| l != skip)
                        .map(move |l| ray_of(i, l))
                })
                .collect();
            cone.sort_unstable();
            cone
        })
        .collect();
    let mut fan = Fan::new(rays, cones)?;
    fan.nonface_bound = dims.as_slice().iter().max().copied().unwrap_or(0) + 1;
    Ok(fan)
}
