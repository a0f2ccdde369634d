//! Incidence structures, t-design verification and the classical derived,
//! residual and dual constructions.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::gf::{GfMatrix, GfVector};

/// A finite incidence structure: `v` points, `b` blocks, each block a subset
/// of the points. Labels travel with points and blocks through derived and
/// residual constructions.
#[derive(Clone, PartialEq, Eq)]
pub struct IncidenceStructure {
    v: usize,
    blocks: Vec<BitSet>,
    point_labels: Vec<String>,
    block_labels: Vec<String>,
}

/// What to do with empty blocks produced by [`IncidenceStructure::block_derived`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum EmptyBlocks {
    #[default]
    Retain,
    Strip,
}

impl IncidenceStructure {
    /// Builds a structure from block point-lists with default labels `0..v`, `0..b`.
    pub fn from_blocks(v: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut sets = Vec::with_capacity(blocks.len());
        for (j, block) in blocks.iter().enumerate() {
            let mut set = BitSet::new(v);
            for &x in block {
                if x >= v {
                    return Err(Error::IndexOutOfRange { index: x, limit: v });
                }
                if set.contains(x) {
                    return Err(Error::InvalidStructure(format!(
                        "block {j} repeats point {x}"
                    )));
                }
                set.insert(x);
            }
            sets.push(set);
        }
        Ok(Self::from_sets(v, sets))
    }

    /// Builds a structure from a points-by-blocks 0/1 matrix given as rows.
    pub fn from_incidence_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let v = rows.len();
        let b = rows.first().map_or(0, Vec::len);
        let mut sets = vec![BitSet::new(v); b];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != b {
                return Err(Error::DimensionMismatch {
                    expected: b,
                    found: row.len(),
                });
            }
            for (j, &e) in row.iter().enumerate() {
                match e {
                    0 => {}
                    1 => sets[j].insert(i),
                    other => {
                        return Err(Error::InvalidStructure(format!(
                            "entry ({i},{j}) is {other}, expected 0 or 1"
                        )))
                    }
                }
            }
        }
        Ok(Self::from_sets(v, sets))
    }

    fn from_sets(v: usize, blocks: Vec<BitSet>) -> Self {
        let b = blocks.len();
        IncidenceStructure {
            v,
            blocks,
            point_labels: (0..v).map(|i| i.to_string()).collect(),
            block_labels: (0..b).map(|j| j.to_string()).collect(),
        }
    }

    /// Replaces the labels; both lists must have the right length and be duplicate free.
    pub fn with_labels(mut self, point_labels: Vec<String>, block_labels: Vec<String>) -> Result<Self> {
        check_labels(&point_labels, self.v, "point")?;
        check_labels(&block_labels, self.b(), "block")?;
        self.point_labels = point_labels;
        self.block_labels = block_labels;
        Ok(self)
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn b(&self) -> usize {
        self.blocks.len()
    }

    pub fn point_labels(&self) -> &[String] {
        &self.point_labels
    }

    pub fn block_labels(&self) -> &[String] {
        &self.block_labels
    }

    pub fn block(&self, j: usize) -> &BitSet {
        &self.blocks[j]
    }

    pub fn blocks(&self) -> &[BitSet] {
        &self.blocks
    }

    pub fn block_points(&self, j: usize) -> Vec<usize> {
        self.blocks[j].iter().collect()
    }

    pub fn incident(&self, point: usize, block: usize) -> bool {
        self.blocks[block].contains(point)
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(BitSet::count).collect()
    }

    /// Bitset over blocks for each point.
    fn point_columns(&self) -> Vec<BitSet> {
        let mut cols = vec![BitSet::new(self.b()); self.v];
        for (j, block) in self.blocks.iter().enumerate() {
            for x in block.iter() {
                cols[x].insert(j);
            }
        }
        cols
    }

    /// The points-by-blocks incidence matrix over GF(p).
    pub fn incidence_matrix(&self, p: u32) -> Result<GfMatrix> {
        GfMatrix::from_fn(p, self.v, self.b(), |i, j| self.incident(i, j) as u32)
    }

    pub fn incidence_rows(&self) -> Vec<Vec<u8>> {
        (0..self.v)
            .map(|i| (0..self.b()).map(|j| self.incident(i, j) as u8).collect())
            .collect()
    }

    /// Sum of all point rows of the incidence matrix over GF(p).
    pub fn row_sum(&self, p: u32) -> Result<GfVector> {
        let entries = self
            .blocks
            .iter()
            .map(|block| (block.count() as u32 % p) as u8)
            .collect();
        GfVector::new(p, entries)
    }

    fn check_block(&self, block: usize) -> Result<()> {
        if block >= self.b() {
            return Err(Error::IndexOutOfRange {
                index: block,
                limit: self.b(),
            });
        }
        Ok(())
    }

    fn check_point(&self, point: usize) -> Result<()> {
        if point >= self.v {
            return Err(Error::IndexOutOfRange {
                index: point,
                limit: self.v,
            });
        }
        Ok(())
    }

    /// Checks that `self` is a t-design and returns its signature.
    pub fn verify_t_design(&self, t: usize) -> Result<DesignSignature, DesignFailure> {
        if t > self.v {
            return Err(DesignFailure::StrengthTooLarge { t, v: self.v });
        }
        if self.blocks.is_empty() {
            return Err(DesignFailure::NoBlocks);
        }
        let sizes = self.block_sizes();
        if let Some(block) = sizes.iter().position(|&s| s == 0) {
            return Err(DesignFailure::EmptyBlock { block });
        }
        let k = sizes[0];
        if let Some(block) = sizes.iter().position(|&s| s != k) {
            return Err(DesignFailure::UnequalBlockSizes {
                block,
                size: sizes[block],
                expected: k,
            });
        }
        if t > k {
            return Err(DesignFailure::StrengthTooLarge { t, v: k });
        }
        let cols = self.point_columns();
        let mut expected: Option<usize> = None;
        let mut subset: Vec<usize> = (0..t).collect();
        loop {
            let count = match subset.split_first() {
                None => self.b(),
                Some((&first, rest)) => {
                    let mut acc = cols[first].clone();
                    for &x in rest {
                        acc.intersect_with(&cols[x]);
                    }
                    acc.count()
                }
            };
            match expected {
                None => expected = Some(count),
                Some(e) if e != count => {
                    return Err(DesignFailure::NonConstantLambda {
                        subset,
                        count,
                        expected: e,
                    })
                }
                Some(_) => {}
            }
            if !next_combination(&mut subset, self.v) {
                break;
            }
        }
        let lambda = expected.unwrap_or(0) as u64;
        let sig = DesignSignature::new(t as u64, self.v as u64, k as u64, lambda)
            .map_err(|e| DesignFailure::Inadmissible(e.to_string()))?;
        if sig.b != self.b() as u64 {
            return Err(DesignFailure::Inadmissible(format!(
                "{sig} predicts {} blocks, structure has {}",
                sig.b,
                self.b()
            )));
        }
        Ok(sig)
    }

    /// Transposed structure: blocks become points and vice versa.
    pub fn dual(&self) -> IncidenceStructure {
        IncidenceStructure {
            v: self.b(),
            blocks: self.point_columns(),
            point_labels: self.block_labels.clone(),
            block_labels: self.point_labels.clone(),
        }
    }

    /// Derived structure at block `block`: points of the block, blocks `B ∩ B_j`.
    pub fn block_derived(&self, block: usize, empty: EmptyBlocks) -> Result<IncidenceStructure> {
        self.check_block(block)?;
        let keep: Vec<usize> = self.blocks[block].iter().collect();
        Ok(self.restrict(&keep, block, empty))
    }

    /// Residual structure at block `block`: complement of the block, blocks `B_j \ B`.
    pub fn block_residual(&self, block: usize) -> Result<IncidenceStructure> {
        self.check_block(block)?;
        let keep: Vec<usize> = (0..self.v).filter(|&x| !self.blocks[block].contains(x)).collect();
        Ok(self.restrict(&keep, block, EmptyBlocks::Retain))
    }

    /// Restricts every block except `skip` to the point list `keep`.
    fn restrict(&self, keep: &[usize], skip: usize, empty: EmptyBlocks) -> IncidenceStructure {
        let mut blocks = Vec::new();
        let mut block_labels = Vec::new();
        for (j, blk) in self.blocks.iter().enumerate() {
            if j == skip {
                continue;
            }
            let set = BitSet::from_indices(
                keep.len(),
                keep.iter().enumerate().filter(|(_, &x)| blk.contains(x)).map(|(i, _)| i),
            );
            if empty == EmptyBlocks::Strip && set.is_empty() {
                continue;
            }
            blocks.push(set);
            block_labels.push(self.block_labels[j].clone());
        }
        IncidenceStructure {
            v: keep.len(),
            blocks,
            point_labels: keep.iter().map(|&x| self.point_labels[x].clone()).collect(),
            block_labels,
        }
    }

    /// Blocks through `point`, with the point removed.
    pub fn point_derived(&self, point: usize) -> Result<IncidenceStructure> {
        self.check_point(point)?;
        Ok(self.point_section(point, true))
    }

    /// Blocks avoiding `point`, on the remaining points.
    pub fn point_residual(&self, point: usize) -> Result<IncidenceStructure> {
        self.check_point(point)?;
        Ok(self.point_section(point, false))
    }

    fn point_section(&self, point: usize, through: bool) -> IncidenceStructure {
        let keep: Vec<usize> = (0..self.v).filter(|&x| x != point).collect();
        let mut blocks = Vec::new();
        let mut block_labels = Vec::new();
        for (j, blk) in self.blocks.iter().enumerate() {
            if blk.contains(point) != through {
                continue;
            }
            blocks.push(BitSet::from_indices(
                keep.len(),
                keep.iter().enumerate().filter(|(_, &x)| blk.contains(x)).map(|(i, _)| i),
            ));
            block_labels.push(self.block_labels[j].clone());
        }
        IncidenceStructure {
            v: keep.len(),
            blocks,
            point_labels: keep.iter().map(|&x| self.point_labels[x].clone()).collect(),
            block_labels,
        }
    }

    /// Multiset of `|B_i ∩ B_j|` over unordered pairs of distinct blocks.
    pub fn intersection_profile(&self) -> IntersectionProfile {
        let rows = crate::par::map_indices(self.b(), |i| {
            let mut local = BTreeMap::new();
            for j in i + 1..self.b() {
                *local
                    .entry(self.blocks[i].intersection_count(&self.blocks[j]))
                    .or_insert(0u64) += 1;
            }
            local
        });
        let mut counts = BTreeMap::new();
        for local in rows {
            for (size, c) in local {
                *counts.entry(size).or_insert(0) += c;
            }
        }
        IntersectionProfile { counts }
    }

    /// Intersection numbers if at most two distinct block intersection sizes occur.
    pub fn is_quasi_symmetric(&self) -> Option<IntersectionNumbers> {
        self.intersection_profile().intersection_numbers()
    }

    /// Compares the p-rank of the structure with that of its residual at `block`.
    pub fn linear_embeddability_check(&self, block: usize, p: u32) -> Result<Embeddability> {
        let residual = self.block_residual(block)?;
        let rank_full = self.incidence_matrix(p)?.rank();
        let rank_residual = residual.incidence_matrix(p)?.rank();
        Ok(Embeddability {
            block,
            rank_full,
            rank_residual,
            embeddable: rank_full == rank_residual + 1,
        })
    }
}

fn check_labels(labels: &[String], expected: usize, what: &str) -> Result<()> {
    if labels.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: labels.len(),
        });
    }
    let mut seen = HashSet::new();
    for l in labels {
        if !seen.insert(l) {
            return Err(Error::InvalidStructure(format!("duplicate {what} label {l:?}")));
        }
    }
    Ok(())
}

impl fmt::Debug for IncidenceStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IncidenceStructure")
            .field("v", &self.v)
            .field("b", &self.b())
            .field("blocks", &self.blocks)
            .finish()
    }
}

/// Advances `c` to the next k-subset of `0..n` in lexicographic order.
pub(crate) fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Why a structure failed t-design verification.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DesignFailure {
    #[error("structure has no blocks")]
    NoBlocks,
    #[error("block {block} is empty")]
    EmptyBlock { block: usize },
    #[error("block {block} has size {size}, expected {expected}")]
    UnequalBlockSizes {
        block: usize,
        size: usize,
        expected: usize,
    },
    #[error("subset {subset:?} lies in {count} blocks, expected {expected}")]
    NonConstantLambda {
        subset: Vec<usize>,
        count: usize,
        expected: usize,
    },
    #[error("strength {t} exceeds {v}")]
    StrengthTooLarge { t: usize, v: usize },
    #[error("{0}")]
    Inadmissible(String),
}

impl From<DesignFailure> for Error {
    fn from(f: DesignFailure) -> Self {
        Error::InvalidStructure(f.to_string())
    }
}

/// Parameters t-(v,k,λ) together with the derived block count `b = λ₀`
/// and replication number `r = λ₁`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DesignSignature {
    pub t: u64,
    pub v: u64,
    pub k: u64,
    pub lambda: u64,
    pub b: u64,
    pub r: u64,
}

fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

fn exact_div(num: u128, den: u128, what: impl FnOnce() -> String) -> Result<u64> {
    if den == 0 || !num.is_multiple_of(den) {
        return Err(Error::Inadmissible(what()));
    }
    u64::try_from(num / den).map_err(|_| Error::Inadmissible("value overflows u64".into()))
}

impl DesignSignature {
    /// Signature of a t-(v,k,λ) design; fails when `b` or `r` is not integral.
    pub fn new(t: u64, v: u64, k: u64, lambda: u64) -> Result<Self> {
        if !(v >= k && k >= t) {
            return Err(Error::Inadmissible(format!(
                "{t}-({v},{k},{lambda}) needs v >= k >= t"
            )));
        }
        let mut sig = DesignSignature {
            t,
            v,
            k,
            lambda,
            b: 0,
            r: 0,
        };
        sig.b = sig.lambda_s(0)?;
        sig.r = if t >= 1 {
            sig.lambda_s(1)?
        } else {
            exact_div(sig.b as u128 * k as u128, v as u128, || {
                format!("{sig}: b·k not divisible by v")
            })?
        };
        Ok(sig)
    }

    /// `λ_s = λ·C(v−s, t−s)/C(k−s, t−s)`, failing when not integral.
    pub fn lambda_s(&self, s: u64) -> Result<u64> {
        if s > self.t {
            return Err(Error::Inadmissible(format!("s = {s} exceeds t = {}", self.t)));
        }
        let overflow = || Error::Inadmissible("binomial overflow".into());
        let num = binomial(self.v - s, self.t - s).ok_or_else(overflow)?;
        let den = binomial(self.k - s, self.t - s).ok_or_else(overflow)?;
        let num = num.checked_mul(self.lambda as u128).ok_or_else(overflow)?;
        exact_div(num, den, || format!("λ_{s} of {self} is not integral"))
    }

    pub fn is_symmetric(&self) -> bool {
        self.t >= 2 && self.b == self.v
    }

    /// Fisher's inequality `b ≥ v` for 2-designs with `v > k > 0`.
    pub fn satisfies_fisher(&self) -> bool {
        !(self.t >= 2 && self.v > self.k && self.k > 0) || self.b >= self.v
    }

    /// `(t−1)-(v−1, k, λ_{t−1} − λ)`: blocks avoiding a point.
    pub fn point_residual_signature(&self) -> Result<DesignSignature> {
        if self.t == 0 {
            return Err(Error::Inadmissible("point residual needs t >= 1".into()));
        }
        let upper = self.lambda_s(self.t - 1)?;
        DesignSignature::new(self.t - 1, self.v - 1, self.k, upper - self.lambda)
    }

    /// `(t−1)-(v−1, k−1, λ)`: blocks through a point, point removed.
    pub fn point_derived_signature(&self) -> Result<DesignSignature> {
        if self.t == 0 || self.k == 0 {
            return Err(Error::Inadmissible("point derived needs t, k >= 1".into()));
        }
        DesignSignature::new(self.t - 1, self.v - 1, self.k - 1, self.lambda)
    }

    /// For a symmetric 2-design, the derived design at a block: `2-(k, λ, λ−1)`.
    pub fn block_derived_signature(&self) -> Result<DesignSignature> {
        self.require_symmetric()?;
        if self.lambda < 2 {
            return Err(Error::Inadmissible(format!("{self}: derived design needs λ >= 2")));
        }
        DesignSignature::new(2, self.k, self.lambda, self.lambda - 1)
    }

    /// For a symmetric 2-design, the residual design at a block: `2-(v−k, k−λ, λ)`.
    pub fn block_residual_signature(&self) -> Result<DesignSignature> {
        self.require_symmetric()?;
        DesignSignature::new(2, self.v - self.k, self.k - self.lambda, self.lambda)
    }

    fn require_symmetric(&self) -> Result<()> {
        if self.t != 2 || !self.is_symmetric() {
            return Err(Error::Inadmissible(format!("{self} is not a symmetric 2-design")));
        }
        Ok(())
    }

    /// The same design viewed at strength `s ≤ t`.
    pub fn at_strength(&self, s: u64) -> Result<DesignSignature> {
        DesignSignature::new(s, self.v, self.k, self.lambda_s(s)?)
    }
}

impl fmt::Display for DesignSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-({},{},{})", self.t, self.v, self.k, self.lambda)
    }
}

/// Distinct pairwise block intersection sizes with their multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionProfile {
    pub counts: BTreeMap<usize, u64>,
}

impl IntersectionProfile {
    pub fn sizes(&self) -> Vec<usize> {
        self.counts.keys().copied().collect()
    }

    pub fn intersection_numbers(&self) -> Option<IntersectionNumbers> {
        let sizes = self.sizes();
        match sizes.as_slice() {
            [s] => Some(IntersectionNumbers::Single(*s)),
            [x, y] => Some(IntersectionNumbers::Pair(*x, *y)),
            _ => None,
        }
    }
}

/// Result of the quasi-symmetry test. A single intersection size is the
/// symmetric-design boundary case and is reported separately.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum IntersectionNumbers {
    Single(usize),
    Pair(usize, usize),
}

/// Outcome of comparing `rank_p A` with `rank_p A'' + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embeddability {
    pub block: usize,
    pub rank_full: usize,
    pub rank_residual: usize,
    pub embeddable: bool,
}
