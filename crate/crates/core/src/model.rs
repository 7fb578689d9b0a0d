//! Dimension vectors, vector matrices and their normalization.
//!
//! Indexing convention used across the crate: blocks are numbered `0..k`,
//! and the columns of block `i` are numbered `0..n_i`. Column `l` of block
//! `i` corresponds to the facet `F^i_{l+1}`; the facet `F^i_0` is carried by
//! row `i` of the matrix itself.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{independent_words, Gf2Matrix};

/// Block sizes `(n_1, ..., n_k)` of a product of simplices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct DimensionVector {
    dims: Vec<usize>,
    offsets: Vec<usize>,
}

impl DimensionVector {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::InvalidDims(dims));
        }
        let offsets = dims
            .iter()
            .scan(0, |acc, &d| {
                let o = *acc;
                *acc += d;
                Some(o)
            })
            .collect();
        Ok(Self { dims, offsets })
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.dims
    }

    /// Number of blocks.
    pub fn k(&self) -> usize {
        self.dims.len()
    }

    /// Total dimension `n`.
    pub fn total(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn block_size(&self, block: usize) -> usize {
        self.dims[block]
    }

    /// First flat column of a block.
    pub fn offset(&self, block: usize) -> usize {
        self.offsets[block]
    }

    /// Flat column index of column `col` of block `block`.
    pub fn column(&self, block: usize, col: usize) -> usize {
        debug_assert!(col < self.dims[block]);
        self.offsets[block] + col
    }

    /// Inverse of [`column`](Self::column).
    pub fn locate(&self, flat: usize) -> (usize, usize) {
        let block = self.offsets.partition_point(|&o| o <= flat) - 1;
        (block, flat - self.offsets[block])
    }

    /// True when every block has size 1.
    pub fn is_real_bott(&self) -> bool {
        self.dims.iter().all(|&d| d == 1)
    }

    /// Number of blocks of size at least 2.
    pub fn large_blocks(&self) -> usize {
        self.dims.iter().filter(|&&d| d >= 2).count()
    }

    /// `∏ (n_i + 1)`: the number of vertices of the polytope, and the total
    /// mod-2 Betti number.
    pub fn vertex_count(&self) -> usize {
        self.dims.iter().map(|d| d + 1).product()
    }

    pub fn permuted(&self, perm: &BlockPermutation) -> Self {
        Self::new(perm.order.iter().map(|&o| self.dims[o]).collect())
            .expect("permutation of valid dims is valid")
    }
}

impl TryFrom<Vec<usize>> for DimensionVector {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<DimensionVector> for Vec<usize> {
    fn from(d: DimensionVector) -> Self {
        d.dims
    }
}

impl fmt::Debug for DimensionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.dims)
    }
}

impl fmt::Display for DimensionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.dims.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A relabeling of blocks. `order()[p]` is the original block placed at
/// position `p`; conjugating by it is `E_σ A E_σ⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlockPermutation {
    order: Vec<usize>,
}

impl BlockPermutation {
    pub fn identity(k: usize) -> Self {
        Self {
            order: (0..k).collect(),
        }
    }

    pub fn from_order(order: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; order.len()];
        for &o in &order {
            if o >= order.len() || std::mem::replace(&mut seen[o], true) {
                return Err(Error::IndexOutOfRange(format!(
                    "{order:?} is not a permutation"
                )));
            }
        }
        Ok(Self { order })
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.order.iter().enumerate().all(|(i, &o)| i == o)
    }

    /// The permutation equivalent to conjugating by `self` and then by `next`.
    pub fn then(&self, next: &BlockPermutation) -> BlockPermutation {
        BlockPermutation {
            order: next.order.iter().map(|&p| self.order[p]).collect(),
        }
    }

    pub fn inverse(&self) -> BlockPermutation {
        let mut inv = vec![0; self.order.len()];
        for (p, &o) in self.order.iter().enumerate() {
            inv[o] = p;
        }
        BlockPermutation { order: inv }
    }

    /// All permutations of `k` blocks, in lexicographic order.
    pub fn all(k: usize) -> Vec<BlockPermutation> {
        fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<BlockPermutation>) {
            if prefix.len() == used.len() {
                out.push(BlockPermutation {
                    order: prefix.clone(),
                });
                return;
            }
            for i in 0..used.len() {
                if !used[i] {
                    used[i] = true;
                    prefix.push(i);
                    go(prefix, used, out);
                    prefix.pop();
                    used[i] = false;
                }
            }
        }
        let mut out = Vec::new();
        go(&mut Vec::new(), &mut vec![false; k], &mut out);
        out
    }
}

/// How to decide admissibility.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValidationMethod {
    /// Every principal minor of every `k × k` column-selection submatrix is 1.
    Minors,
    /// At every vertex of the polytope the `n` characteristic vectors of the
    /// facets meeting there form a basis.
    Vertices,
}

/// A principal minor that vanishes, reported by [`VectorMatrix::first_failing_minor`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorFailure {
    /// Column chosen in each block, `0..n_i`.
    pub choice: Vec<usize>,
    /// Blocks spanning the vanishing principal minor.
    pub blocks: Vec<usize>,
}

impl fmt::Display for MinorFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let choice: Vec<String> = self.choice.iter().map(|c| (c + 1).to_string()).collect();
        let blocks: Vec<String> = self.blocks.iter().map(|b| (b + 1).to_string()).collect();
        write!(
            f,
            "principal minor on blocks {{{}}} of submatrix ({}) is 0",
            blocks.join(","),
            choice.join(",")
        )
    }
}

/// One stage `B_j → B_{j-1}` of the projective tower: the fiber is `RP^{n_j}`
/// and the bundle is `1 ⊕ L_1 ⊕ ... ⊕ L_{n_j}`. Each entry of `classes` is
/// `w_1(L_l)` written in the basis `z_1, ..., z_{j-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerStage {
    pub index: usize,
    pub fiber_dim: usize,
    pub classes: Vec<Vec<bool>>,
}

/// The `k × n` characteristic matrix, columns grouped block-major.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VectorMatrix {
    dims: DimensionVector,
    bits: Vec<bool>,
}

impl VectorMatrix {
    /// Builds a matrix from 0/1 rows; exactly `k` rows of length `n`.
    pub fn new(dims: DimensionVector, rows: &[Vec<u8>]) -> Result<Self> {
        let (k, n) = (dims.k(), dims.total());
        if rows.len() != k {
            return Err(Error::Shape(format!("expected {k} rows, got {}", rows.len())));
        }
        let mut bits = Vec::with_capacity(k * n);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Shape(format!(
                    "row {r} has length {}, expected {n}",
                    row.len()
                )));
            }
            for (c, &v) in row.iter().enumerate() {
                match v {
                    0 => bits.push(false),
                    1 => bits.push(true),
                    _ => {
                        return Err(Error::NotABit {
                            row: r,
                            col: c,
                            value: i64::from(v),
                        })
                    }
                }
            }
        }
        Ok(Self { dims, bits })
    }

    /// Builds a matrix whose entry `(row, block, col)` is `f(row, block, col)`.
    pub fn from_fn(dims: DimensionVector, mut f: impl FnMut(usize, usize, usize) -> bool) -> Self {
        let (k, n) = (dims.k(), dims.total());
        let mut bits = Vec::with_capacity(k * n);
        for row in 0..k {
            for flat in 0..n {
                let (block, col) = dims.locate(flat);
                bits.push(f(row, block, col));
            }
        }
        Self { dims, bits }
    }

    pub fn dims(&self) -> &DimensionVector {
        &self.dims
    }

    pub fn k(&self) -> usize {
        self.dims.k()
    }

    pub fn n(&self) -> usize {
        self.dims.total()
    }

    /// Entry `a^{block}_{row, col+1}`.
    pub fn get(&self, row: usize, block: usize, col: usize) -> bool {
        self.bits[row * self.n() + self.dims.column(block, col)]
    }

    pub fn set(&mut self, row: usize, block: usize, col: usize, value: bool) {
        let idx = row * self.n() + self.dims.column(block, col);
        self.bits[idx] = value;
    }

    pub fn row(&self, row: usize) -> &[bool] {
        let n = self.n();
        &self.bits[row * n..(row + 1) * n]
    }

    pub fn block(&self, row: usize, block: usize) -> &[bool] {
        let start = row * self.n() + self.dims.offset(block);
        &self.bits[start..start + self.dims.block_size(block)]
    }

    pub fn rows_u8(&self) -> Vec<Vec<u8>> {
        (0..self.k())
            .map(|r| self.row(r).iter().map(|&b| u8::from(b)).collect())
            .collect()
    }

    /// Number of ones in a row.
    pub fn row_sum(&self, row: usize) -> usize {
        self.row(row).iter().filter(|&&b| b).count()
    }

    /// Block upper triangular with all-ones diagonal blocks.
    pub fn is_normalized(&self) -> bool {
        (0..self.k()).all(|r| {
            (0..self.k()).all(|b| {
                let blk = self.block(r, b);
                match r.cmp(&b) {
                    std::cmp::Ordering::Equal => blk.iter().all(|&x| x),
                    std::cmp::Ordering::Greater => blk.iter().all(|&x| !x),
                    std::cmp::Ordering::Less => true,
                }
            })
        })
    }

    pub fn require_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(Error::NotNormalized)
        }
    }

    /// `E_σ A E_σ⁻¹`: rows and column blocks both reordered by `perm`.
    pub fn conjugate(&self, perm: &BlockPermutation) -> VectorMatrix {
        let dims = self.dims.permuted(perm);
        let order = perm.order();
        VectorMatrix::from_fn(dims, |row, block, col| {
            self.get(order[row], order[block], col)
        })
    }

    /// The `k × k` matrix with `(p, i)` entry `a^i_{p, choice[i]}`.
    pub fn submatrix(&self, choice: &[usize]) -> Result<Gf2Matrix> {
        let k = self.k();
        if choice.len() != k {
            return Err(Error::IndexOutOfRange(format!(
                "need {k} column choices, got {}",
                choice.len()
            )));
        }
        if let Some(i) = (0..k).find(|&i| choice[i] >= self.dims.block_size(i)) {
            return Err(Error::IndexOutOfRange(format!(
                "column {} of block {} (size {})",
                choice[i],
                i,
                self.dims.block_size(i)
            )));
        }
        let mut m = Gf2Matrix::zeros(k, k);
        for p in 0..k {
            for (i, &c) in choice.iter().enumerate() {
                if self.get(p, i, c) {
                    m.set(p, i, true);
                }
            }
        }
        Ok(m)
    }

    /// The `n × n` matrix whose columns are the characteristic vectors of
    /// the facets meeting at vertex `v_{l_1...l_k}`. `vertex[i] = 0` keeps the
    /// unit columns of block `i`; `vertex[i] = l ≥ 1` replaces unit column
    /// `l` of block `i` by row `i` of the matrix.
    pub fn vertex_matrix(&self, vertex: &[usize]) -> Result<Gf2Matrix> {
        let n = self.n();
        if vertex.len() != self.k() {
            return Err(Error::IndexOutOfRange(format!(
                "need {} vertex coordinates, got {}",
                self.k(),
                vertex.len()
            )));
        }
        let mut m = Gf2Matrix::identity(n);
        for (i, &l) in vertex.iter().enumerate() {
            if l > self.dims.block_size(i) {
                return Err(Error::IndexOutOfRange(format!(
                    "vertex coordinate {l} in block {i}"
                )));
            }
            if l == 0 {
                continue;
            }
            let col = self.dims.column(i, l - 1);
            for (r, &bit) in self.row(i).iter().enumerate() {
                m.set(r, col, bit);
            }
        }
        Ok(m)
    }

    /// The first vanishing principal minor in a fixed scan order (column
    /// choices in odometer order, then block subsets by size), or `None`
    /// when the matrix is admissible.
    pub fn first_failing_minor(&self) -> Option<MinorFailure> {
        let k = self.k();
        let mut subsets: Vec<Vec<usize>> = (1u64..(1 << k))
            .map(|mask| (0..k).filter(|i| (mask >> i) & 1 == 1).collect())
            .collect();
        subsets.sort_by(|a: &Vec<usize>, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let masks: Vec<u64> = subsets
            .iter()
            .map(|s| s.iter().fold(0, |m, &i| m | 1 << i))
            .collect();

        let sizes: Vec<usize> = self.dims.as_slice().to_vec();
        let failure = odometer(&sizes).find_map(|choice| {
            let rows: Vec<u64> = (0..k)
                .map(|p| {
                    (0..k).fold(0, |m, i| m | u64::from(self.get(p, i, choice[i])) << i)
                })
                .collect();
            masks.iter().position(|&s| {
                !independent_words((0..k).filter(|p| (s >> p) & 1 == 1).map(|p| rows[p] & s))
            })
            .map(|idx| MinorFailure {
                choice: choice.clone(),
                blocks: subsets[idx].clone(),
            })
        });
        failure
    }

    /// Steps `digits` through the mixed-radix range given by `sizes`, last
    /// digit fastest; false once it wraps around.
    fn advance(digits: &mut [usize], sizes: &[usize]) -> bool {
        for i in (0..digits.len()).rev() {
            digits[i] += 1;
            if digits[i] < sizes[i] {
                return true;
            }
            digits[i] = 0;
        }
        false
    }

    fn minors_are_units(&self) -> bool {
        let k = self.k();
        if k > 63 {
            return self.first_failing_minor().is_none();
        }
        let sizes = self.dims.as_slice();
        let mut choice = vec![0; k];
        let mut rows = vec![0u64; k];
        loop {
            for (p, row) in rows.iter_mut().enumerate() {
                *row = (0..k).fold(0, |m, i| m | u64::from(self.get(p, i, choice[i])) << i);
            }
            let ok = (1u64..1 << k).all(|s| {
                independent_words((0..k).filter(|p| (s >> p) & 1 == 1).map(|p| rows[p] & s))
            });
            if !ok {
                return false;
            }
            if !Self::advance(&mut choice, sizes) {
                return true;
            }
        }
    }

    fn vertices_are_bases(&self) -> bool {
        let n = self.n();
        let sizes: Vec<usize> = self.dims.as_slice().iter().map(|d| d + 1).collect();
        if n > 64 {
            let ok = odometer(&sizes).all(|v| {
                self.vertex_matrix(&v)
                    .and_then(|m| m.det())
                    .expect("vertex in range")
            });
            return ok;
        }
        let rows: Vec<u64> = (0..self.k())
            .map(|i| {
                self.row(i)
                    .iter()
                    .enumerate()
                    .fold(0, |m, (c, &b)| m | u64::from(b) << c)
            })
            .collect();
        let owner: Vec<(usize, usize)> = (0..n).map(|c| self.dims.locate(c)).collect();
        let mut vertex = vec![0; self.k()];
        loop {
            let columns = owner.iter().enumerate().map(|(c, &(i, l))| {
                if vertex[i] == l + 1 {
                    rows[i]
                } else {
                    1 << c
                }
            });
            if !independent_words(columns) {
                return false;
            }
            if !Self::advance(&mut vertex, &sizes) {
                return true;
            }
        }
    }

    /// Admissibility of the characteristic matrix.
    pub fn validate(&self, method: ValidationMethod) -> bool {
        match method {
            ValidationMethod::Minors => self.minors_are_units(),
            ValidationMethod::Vertices => self.vertices_are_bases(),
        }
    }

    /// Edges `j → i` (row `j` has a nonzero entry in block `i ≠ j`): block
    /// `j` must precede block `i` in any triangular ordering.
    fn dependencies(&self) -> Vec<BTreeSet<usize>> {
        let k = self.k();
        (0..k)
            .map(|j| {
                (0..k)
                    .filter(|&i| i != j && self.block(j, i).iter().any(|&b| b))
                    .collect()
            })
            .collect()
    }

    /// Kahn's algorithm; `prefer` picks among the currently available blocks.
    fn topological_order(
        &self,
        mut prefer: impl FnMut(&BTreeSet<usize>) -> usize,
    ) -> std::result::Result<Vec<usize>, Vec<usize>> {
        let k = self.k();
        let deps = self.dependencies();
        let mut indegree = vec![0usize; k];
        for succ in &deps {
            for &i in succ {
                indegree[i] += 1;
            }
        }
        let mut ready: BTreeSet<usize> = (0..k).filter(|&i| indegree[i] == 0).collect();
        let mut order = Vec::with_capacity(k);
        while !ready.is_empty() {
            let next = prefer(&ready);
            ready.remove(&next);
            order.push(next);
            for &i in &deps[next] {
                indegree[i] -= 1;
                if indegree[i] == 0 {
                    ready.insert(i);
                }
            }
        }
        if order.len() == k {
            Ok(order)
        } else {
            Err((0..k).filter(|i| !order.contains(i)).collect())
        }
    }

    /// Conjugates into unipotent upper-triangular block form. Ties between
    /// independent blocks keep their original relative order.
    pub fn normalize(&self) -> Result<(BlockPermutation, VectorMatrix)> {
        let order = self
            .topological_order(|ready| *ready.first().expect("non-empty"))
            .map_err(Error::NotTriangulable)?;
        let perm = BlockPermutation { order };
        let normalized = self.conjugate(&perm);
        if let Some(p) = (0..self.k()).find(|&p| normalized.block(p, p).iter().any(|&b| !b)) {
            return Err(Error::NonUnitDiagonal {
                block: perm.order[p],
            });
        }
        debug_assert!(normalized.is_normalized());
        Ok((perm, normalized))
    }

    /// A reordering that keeps the matrix triangular and puts every block of
    /// size ≥ 2 before every block of size 1.
    ///
    /// Greedy: among the blocks whose predecessors are placed, take a large
    /// block if there is one (lowest index first). This is a heuristic; when
    /// it fails to reach the required shape the result is `None`.
    pub fn remark_l_order(&self) -> Option<BlockPermutation> {
        let dims = self.dims.clone();
        let order = self
            .topological_order(|ready| {
                ready
                    .iter()
                    .copied()
                    .find(|&b| dims.block_size(b) >= 2)
                    .unwrap_or_else(|| *ready.first().expect("non-empty"))
            })
            .ok()?;
        let sizes: Vec<usize> = order.iter().map(|&b| dims.block_size(b)).collect();
        let large = sizes.iter().take_while(|&&d| d >= 2).count();
        sizes[large..]
            .iter()
            .all(|&d| d == 1)
            .then_some(BlockPermutation { order })
    }

    /// The matrix of the first `j` blocks: rows and column blocks `0..j`.
    /// For a normalized matrix this describes the stage `B_j` of the tower.
    pub fn leading_blocks(&self, j: usize) -> Result<VectorMatrix> {
        if j == 0 || j > self.k() {
            return Err(Error::IndexOutOfRange(format!("{j} leading blocks of {}", self.k())));
        }
        let dims = DimensionVector::new(self.dims.as_slice()[..j].to_vec())?;
        Ok(VectorMatrix::from_fn(dims, |row, block, col| self.get(row, block, col)))
    }

    /// The stages of the projective tower `B_k → ... → B_1 → pt`.
    pub fn tower_decomposition(&self) -> Result<Vec<TowerStage>> {
        self.require_normalized()?;
        Ok((0..self.k())
            .map(|j| TowerStage {
                index: j,
                fiber_dim: self.dims.block_size(j),
                classes: (0..self.dims.block_size(j))
                    .map(|l| (0..j).map(|i| self.get(i, j, l)).collect())
                    .collect(),
            })
            .collect())
    }
}

impl fmt::Debug for VectorMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VectorMatrix{:?}", self.dims)?;
        f.debug_list().entries(self.rows_u8()).finish()
    }
}

impl fmt::Display for VectorMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.k() {
            let blocks: Vec<String> = (0..self.k())
                .map(|b| {
                    self.block(r, b)
                        .iter()
                        .map(|&x| if x { '1' } else { '0' })
                        .collect()
                })
                .collect();
            writeln!(f, "{}", blocks.join(" | "))?;
        }
        Ok(())
    }
}

/// The on-disk matrix format: `{"dims": [n1, ..., nk], "rows": [[bits...], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub dims: Vec<usize>,
    pub rows: Vec<Vec<i64>>,
}

impl MatrixFile {
    /// Checks dims against row shapes and bit values.
    pub fn to_matrix(&self) -> Result<VectorMatrix> {
        let dims = DimensionVector::new(self.dims.clone())?;
        let mut rows = Vec::with_capacity(self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            let mut out = Vec::with_capacity(row.len());
            for (c, &v) in row.iter().enumerate() {
                match v {
                    0 | 1 => out.push(v as u8),
                    _ => return Err(Error::NotABit { row: r, col: c, value: v }),
                }
            }
            rows.push(out);
        }
        VectorMatrix::new(dims, &rows)
    }
}

impl From<&VectorMatrix> for MatrixFile {
    fn from(m: &VectorMatrix) -> Self {
        MatrixFile {
            dims: m.dims().as_slice().to_vec(),
            rows: m
                .rows_u8()
                .into_iter()
                .map(|r| r.into_iter().map(i64::from).collect())
                .collect(),
        }
    }
}

/// Every vector `v` with `0 ≤ v[i] < sizes[i]`, last coordinate fastest.
pub(crate) fn odometer(sizes: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let mut current = if sizes.contains(&0) {
        None
    } else {
        Some(vec![0; sizes.len()])
    };
    std::iter::from_fn(move || {
        let out = current.clone()?;
        let cur = current.as_mut().expect("checked above");
        let mut i = sizes.len();
        loop {
            if i == 0 {
                current = None;
                break;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < sizes[i] {
                break;
            }
            cur[i] = 0;
        }
        Some(out)
    })
}
