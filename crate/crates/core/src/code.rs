//! Linear codes over GF(p): exhaustive enumeration of fixed-weight {0,1}
//! vectors in the dual code, and certified minimum distances.
//!
//! # Enumeration
//!
//! A {0,1} vector `x` of weight `w` lies in the dual code iff the sum of the
//! generator columns on its support vanishes. The coordinates are split into a
//! left half `[0, ⌈n/2⌉)` and a right half. For every split `a + b = w` of the
//! weight, all `a`-subsets of the left half and all `b`-subsets of the right
//! half are generated with their partial syndromes; a vector is found whenever
//! a left syndrome is the negation of a right syndrome. Only the smaller side of
//! each weight class is materialized as a sorted table, the larger side streams
//! through it, so peak memory is one weight class of one half.
//!
//! Syndromes are packed into machine words: bit-planes for GF(3) (a trit is
//! `(two, one)`), plain XOR words for GF(2), and a byte array otherwise.
//!
//! # Minimum distance
//!
//! [`LinearCodeView::verify_min_distance`] runs an information-set enumeration
//! with explicit lower-bound accounting. The columns are partitioned greedily
//! into pivot sets `P_1, P_2, …` of ranks `r_j`; each is completed to an
//! information set `I_j`. After every message of weight at most `t` on every
//! `I_j` has been encoded, any codeword not yet seen has more than `t` nonzeros
//! on each `I_j`, hence at least `t + 1 − (k − r_j)` on each disjoint `P_j`, and
//! its weight is at least `Σ_j max(0, t + 1 − (k − r_j))`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{GfMatrix, GfVector};
use crate::par;

/// Default memory budget for one enumeration: 4 GiB.
pub const DEFAULT_MEMORY_BUDGET: u64 = 4 << 30;

/// Largest code length handled by the enumerator (supports are `u128` masks).
pub const MAX_ENUMERATION_LENGTH: usize = 128;

/// Sorted coordinates of a {0,1} vector.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SupportSet {
    length: usize,
    coordinates: Vec<usize>,
}

impl SupportSet {
    pub fn new(length: usize, coordinates: Vec<usize>) -> Result<Self> {
        if let Some(w) = coordinates.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidStructure(format!(
                "support coordinates not strictly increasing at {} >= {}",
                w[0], w[1]
            )));
        }
        if let Some(&c) = coordinates.last() {
            if c >= length {
                return Err(Error::IndexOutOfRange { index: c, limit: length });
            }
        }
        Ok(SupportSet { length, coordinates })
    }

    pub(crate) fn from_mask(length: usize, mask: u128) -> Self {
        let mut coordinates = Vec::with_capacity(mask.count_ones() as usize);
        let mut m = mask;
        while m != 0 {
            coordinates.push(m.trailing_zeros() as usize);
            m &= m - 1;
        }
        SupportSet { length, coordinates }
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn weight(&self) -> usize {
        self.coordinates.len()
    }

    pub fn coordinates(&self) -> &[usize] {
        &self.coordinates
    }

    pub fn contains(&self, coordinate: usize) -> bool {
        self.coordinates.binary_search(&coordinate).is_ok()
    }

    pub fn intersection_size(&self, other: &SupportSet) -> usize {
        let (mut i, mut j, mut n) = (0, 0, 0);
        while i < self.coordinates.len() && j < other.coordinates.len() {
            match self.coordinates[i].cmp(&other.coordinates[j]) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    n += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        n
    }

    pub fn to_vector(&self, p: u32) -> Result<GfVector> {
        GfVector::indicator(p, self.length, &self.coordinates)
    }
}

impl Ord for SupportSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coordinates
            .cmp(&other.coordinates)
            .then(self.length.cmp(&other.length))
    }
}

impl PartialOrd for SupportSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for SupportSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}/{}", self.coordinates, self.length)
    }
}

/// Knobs for [`LinearCodeView::enumerate_01_dual_codewords`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationConfig {
    pub memory_budget: u64,
}

impl Default for EnumerationConfig {
    fn default() -> Self {
        EnumerationConfig {
            memory_budget: DEFAULT_MEMORY_BUDGET,
        }
    }
}

/// Knobs for [`LinearCodeView::verify_min_distance`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MinDistanceConfig {
    /// Upper limit on encoded messages before giving up as inconclusive.
    pub max_codewords: u64,
}

impl Default for MinDistanceConfig {
    fn default() -> Self {
        MinDistanceConfig {
            max_codewords: 2_000_000_000,
        }
    }
}

/// The code spanned by the rows of a generator matrix.
#[derive(Clone, Debug)]
pub struct LinearCodeView {
    generator: GfMatrix,
    basis: GfMatrix,
}

impl LinearCodeView {
    pub fn new(generator: GfMatrix) -> Self {
        let basis = generator.row_space_basis();
        LinearCodeView { generator, basis }
    }

    pub fn p(&self) -> u32 {
        self.generator.p()
    }

    pub fn length(&self) -> usize {
        self.generator.cols()
    }

    pub fn dimension(&self) -> usize {
        self.basis.rows()
    }

    pub fn generator(&self) -> &GfMatrix {
        &self.generator
    }

    /// The reduced row echelon basis used for encoding.
    pub fn basis(&self) -> &GfMatrix {
        &self.basis
    }

    /// Encodes `message` against the fixed RREF basis and reports its weight.
    pub fn weight_of(&self, message: &GfVector) -> Result<(GfVector, usize)> {
        if message.p() != self.p() {
            return Err(Error::ModulusMismatch {
                left: self.p(),
                right: message.p(),
            });
        }
        let c = self.basis.combine_rows(message)?;
        let w = c.weight();
        Ok((c, w))
    }

    /// Every support of a {0,1} vector of weight `w` orthogonal to the code,
    /// sorted lexicographically.
    pub fn enumerate_01_dual_codewords(&self, w: usize, config: &EnumerationConfig) -> Result<Vec<SupportSet>> {
        let n = self.length();
        if w > n {
            return Err(Error::Inadmissible(format!("weight {w} exceeds length {n}")));
        }
        if n > MAX_ENUMERATION_LENGTH {
            return Err(Error::Inadmissible(format!(
                "length {n} exceeds enumeration limit {MAX_ENUMERATION_LENGTH}"
            )));
        }
        let r = self.dimension();
        let masks = match self.p() {
            2 => {
                let field = Gf2;
                mitm(&field, &field.columns(&self.basis), n, w, config)?
            }
            3 if r <= 64 => {
                let field = Gf3;
                mitm(&field, &field.columns(&self.basis), n, w, config)?
            }
            p if r <= GENERIC_DIGITS => {
                let field = GenericField { p: p as u8 };
                mitm(&field, &field.columns(&self.basis), n, w, config)?
            }
            p => {
                return Err(Error::Inadmissible(format!(
                    "code dimension {r} too large for packed syndromes over GF({p})"
                )))
            }
        };
        let mut supports: Vec<SupportSet> = masks.into_iter().map(|m| SupportSet::from_mask(n, m)).collect();
        supports.sort_unstable();
        Ok(supports)
    }

    /// Certifies (or refutes) that the minimum distance equals `d`.
    pub fn verify_min_distance(&self, d: usize, config: &MinDistanceConfig) -> Result<MinDistanceVerdict> {
        let k = self.dimension();
        if k == 0 {
            return Err(Error::Inadmissible("the zero code has no minimum distance".into()));
        }
        if d == 0 {
            return Err(Error::Inadmissible("claimed distance must be at least 1".into()));
        }
        let n = self.length();
        let p = self.p();
        let sets = information_sets(&self.basis);

        // Seed the incumbent with the generator and basis rows.
        let mut best: Option<(usize, Vec<u8>)> = None;
        for row in self.generator.row_iter().chain(self.basis.row_iter()) {
            let w = row.iter().filter(|&&e| e != 0).count();
            if w > 0 {
                offer(&mut best, w, normalize(row, p));
            }
        }
        let mut enumerated: u64 = 0;
        let mut t = 0usize;
        let mut lower_bound = 0usize;
        let mut exhaustive = false;
        loop {
            let incumbent = best.as_ref().map(|b| b.0).expect("nonzero code has a nonzero row");
            if incumbent < d || lower_bound >= incumbent || exhaustive {
                break;
            }
            t += 1;
            let level: u64 = sets.len() as u64 * messages_of_weight(k, t, p);
            if enumerated.saturating_add(level) > config.max_codewords {
                return Err(Error::Inconclusive(format!(
                    "minimum distance search needs more than {} codewords (reached t = {}, lower bound {})",
                    config.max_codewords,
                    t - 1,
                    lower_bound
                )));
            }
            let tasks: Vec<(usize, usize)> = (0..sets.len())
                .flat_map(|s| (0..=k.saturating_sub(t)).map(move |first| (s, first)))
                .collect();
            let results = par::map_slice(&tasks, |&(s, first)| {
                let mut local: Option<(usize, Vec<u8>)> = None;
                let mut count = 0u64;
                enumerate_messages(&sets[s].systematic, p, t, first, |cw| {
                    count += 1;
                    let w = cw.iter().filter(|&&e| e != 0).count();
                    if local.as_ref().is_none_or(|b| w <= b.0) {
                        offer(&mut local, w, cw.to_vec());
                    }
                });
                (count, local)
            });
            for (count, local) in results {
                enumerated += count;
                if let Some((w, cw)) = local {
                    offer(&mut best, w, cw);
                }
            }
            lower_bound = sets
                .iter()
                .map(|s| (t + 1).saturating_sub(k - s.rank))
                .sum();
            exhaustive = t >= k;
        }
        let (weight, witness) = best.expect("incumbent present");
        let coverage = CoverageRecord {
            information_sets: sets
                .iter()
                .map(|s| InformationSetRecord {
                    pivot_columns: s.pivots.clone(),
                    columns: s.columns.clone(),
                    rank: s.rank,
                })
                .collect(),
            max_message_weight: t,
            lower_bound: if exhaustive { weight.max(lower_bound) } else { lower_bound },
            exhaustive,
            codewords_enumerated: enumerated,
        };
        let witness = GfVector::new(p, witness)?;
        debug_assert_eq!(witness.len(), n);
        Ok(match weight.cmp(&d) {
            Ordering::Less => MinDistanceVerdict::Smaller {
                weight,
                witness,
                coverage,
            },
            Ordering::Equal => MinDistanceVerdict::Confirmed {
                distance: d,
                witness,
                coverage,
            },
            Ordering::Greater => MinDistanceVerdict::Larger {
                minimum: weight,
                witness,
                coverage,
            },
        })
    }
}

/// Scales a vector so its first nonzero entry is 1.
fn normalize(row: &[u8], p: u32) -> Vec<u8> {
    match row.iter().find(|&&e| e != 0) {
        Some(&lead) if lead != 1 => {
            let inv = crate::gf::inv_mod(lead, p) as u32;
            row.iter().map(|&e| (e as u32 * inv % p) as u8).collect()
        }
        _ => row.to_vec(),
    }
}

/// Keeps the lighter codeword, breaking ties by the lexicographically smaller vector.
fn offer(best: &mut Option<(usize, Vec<u8>)>, w: usize, cw: Vec<u8>) {
    let better = match best {
        None => true,
        Some((bw, bv)) => (w, &cw) < (*bw, bv),
    };
    if better {
        *best = Some((w, cw));
    }
}

fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i as u128 + 1);
    }
    acc.min(u64::MAX as u128) as u64
}

/// Messages of exact weight `t` with leading coefficient 1.
fn messages_of_weight(k: usize, t: usize, p: u32) -> u64 {
    binomial(k, t).saturating_mul((p as u64 - 1).saturating_pow(t.saturating_sub(1) as u32))
}

/// Verdict of a minimum-distance check against a claimed value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum MinDistanceVerdict {
    /// A codeword of weight exactly `distance` exists and none lighter.
    Confirmed {
        distance: usize,
        witness: GfVector,
        coverage: CoverageRecord,
    },
    /// A nonzero codeword lighter than the claim.
    Smaller {
        weight: usize,
        witness: GfVector,
        coverage: CoverageRecord,
    },
    /// Every nonzero codeword is heavier than the claim.
    Larger {
        minimum: usize,
        witness: GfVector,
        coverage: CoverageRecord,
    },
}

impl MinDistanceVerdict {
    pub fn is_confirmed(&self) -> bool {
        matches!(self, MinDistanceVerdict::Confirmed { .. })
    }

    pub fn witness(&self) -> &GfVector {
        match self {
            MinDistanceVerdict::Confirmed { witness, .. }
            | MinDistanceVerdict::Smaller { witness, .. }
            | MinDistanceVerdict::Larger { witness, .. } => witness,
        }
    }

    pub fn coverage(&self) -> &CoverageRecord {
        match self {
            MinDistanceVerdict::Confirmed { coverage, .. }
            | MinDistanceVerdict::Smaller { coverage, .. }
            | MinDistanceVerdict::Larger { coverage, .. } => coverage,
        }
    }
}

/// The bookkeeping behind a minimum-distance verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageRecord {
    pub information_sets: Vec<InformationSetRecord>,
    /// Every message of weight up to this value was encoded on every set.
    pub max_message_weight: usize,
    /// No unseen nonzero codeword is lighter than this.
    pub lower_bound: usize,
    /// All codewords were enumerated.
    pub exhaustive: bool,
    pub codewords_enumerated: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InformationSetRecord {
    /// The disjoint part contributing to the lower bound.
    pub pivot_columns: Vec<usize>,
    /// The full information set (pivot columns first).
    pub columns: Vec<usize>,
    pub rank: usize,
}

struct InformationSet {
    pivots: Vec<usize>,
    columns: Vec<usize>,
    rank: usize,
    /// Generator with the identity on `columns` (row i ↔ columns[i]).
    systematic: GfMatrix,
}

fn information_sets(basis: &GfMatrix) -> Vec<InformationSet> {
    let n = basis.cols();
    let k = basis.rows();
    let mut used = vec![false; n];
    let mut sets = Vec::new();
    loop {
        let remaining: Vec<usize> = (0..n).filter(|&c| !used[c]).collect();
        let (_, pivots) = basis.reduce_on_columns(&remaining);
        if pivots.is_empty() {
            break;
        }
        for &c in &pivots {
            used[c] = true;
        }
        let mut order = pivots.clone();
        order.extend((0..n).filter(|c| !pivots.contains(c)));
        let (reduced, columns) = basis.reduce_on_columns(&order);
        debug_assert_eq!(columns.len(), k);
        let rows: Vec<usize> = (0..k).collect();
        sets.push(InformationSet {
            rank: pivots.len(),
            pivots,
            columns,
            systematic: reduced.select_rows(&rows),
        });
    }
    sets
}

/// Calls `f` on every codeword `Σ m_i row_i` where `m` has exactly `t`
/// nonzeros, the first at row `first` with coefficient 1.
fn enumerate_messages(g: &GfMatrix, p: u32, t: usize, first: usize, mut f: impl FnMut(&[u8])) {
    let n = g.cols();
    let k = g.rows();
    if t == 0 || first + t > k {
        return;
    }
    let mut stack: Vec<Vec<u8>> = vec![vec![0u8; n]; t + 1];
    stack[1].copy_from_slice(g.row(first));
    fn rec(
        g: &GfMatrix,
        p: u32,
        depth: usize,
        t: usize,
        start: usize,
        stack: &mut [Vec<u8>],
        f: &mut dyn FnMut(&[u8]),
    ) {
        if depth == t {
            f(&stack[depth]);
            return;
        }
        let k = g.rows();
        for row in start..=k - (t - depth) {
            for coeff in 1..p {
                let (lo, hi) = stack.split_at_mut(depth + 1);
                let prev = &lo[depth];
                let next = &mut hi[0];
                for ((o, &a), &b) in next.iter_mut().zip(prev.iter()).zip(g.row(row)) {
                    *o = ((a as u32 + coeff * b as u32) % p) as u8;
                }
                rec(g, p, depth + 1, t, row + 1, stack, f);
            }
        }
    }
    rec(g, p, 1, t, first + 1, &mut stack, &mut f);
}

// ---------------------------------------------------------------------------
// Packed syndrome arithmetic

trait PackedField: Sync {
    type Word: Copy + Ord + Send + Sync;
    fn zero(&self) -> Self::Word;
    fn add(&self, a: Self::Word, b: Self::Word) -> Self::Word;
    fn neg(&self, a: Self::Word) -> Self::Word;
    fn pack(&self, digits: &[u8]) -> Self::Word;

    fn columns(&self, basis: &GfMatrix) -> Vec<Self::Word> {
        (0..basis.cols())
            .map(|c| {
                let digits: Vec<u8> = (0..basis.rows()).map(|r| basis.get(r, c)).collect();
                self.pack(&digits)
            })
            .collect()
    }
}

struct Gf2;

impl PackedField for Gf2 {
    type Word = u128;

    fn zero(&self) -> u128 {
        0
    }

    #[inline]
    fn add(&self, a: u128, b: u128) -> u128 {
        a ^ b
    }

    #[inline]
    fn neg(&self, a: u128) -> u128 {
        a
    }

    fn pack(&self, digits: &[u8]) -> u128 {
        digits
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &d)| acc | ((d as u128 & 1) << i))
    }
}

/// Bit-sliced GF(3): the low 64 bits flag digits equal to 1, the high 64 bits
/// digits equal to 2.
struct Gf3;

impl Gf3 {
    #[inline]
    fn split(a: u128) -> (u64, u64) {
        (a as u64, (a >> 64) as u64)
    }

    #[inline]
    fn join(one: u64, two: u64) -> u128 {
        one as u128 | (two as u128) << 64
    }
}

impl PackedField for Gf3 {
    type Word = u128;

    fn zero(&self) -> u128 {
        0
    }

    #[inline]
    fn add(&self, a: u128, b: u128) -> u128 {
        let (a1, a2) = Gf3::split(a);
        let (b1, b2) = Gf3::split(b);
        let a0 = !(a1 | a2);
        let b0 = !(b1 | b2);
        let one = (a0 & b1) | (a1 & b0) | (a2 & b2);
        let two = (a0 & b2) | (a2 & b0) | (a1 & b1);
        Gf3::join(one, two)
    }

    #[inline]
    fn neg(&self, a: u128) -> u128 {
        let (one, two) = Gf3::split(a);
        Gf3::join(two, one)
    }

    fn pack(&self, digits: &[u8]) -> u128 {
        let (mut one, mut two) = (0u64, 0u64);
        for (i, &d) in digits.iter().enumerate() {
            match d {
                1 => one |= 1 << i,
                2 => two |= 1 << i,
                _ => {}
            }
        }
        Gf3::join(one, two)
    }
}

const GENERIC_DIGITS: usize = 32;

struct GenericField {
    p: u8,
}

impl PackedField for GenericField {
    type Word = [u8; GENERIC_DIGITS];

    fn zero(&self) -> Self::Word {
        [0; GENERIC_DIGITS]
    }

    fn add(&self, a: Self::Word, b: Self::Word) -> Self::Word {
        let mut out = a;
        for (o, &y) in out.iter_mut().zip(b.iter()) {
            *o = ((*o as u16 + y as u16) % self.p as u16) as u8;
        }
        out
    }

    fn neg(&self, a: Self::Word) -> Self::Word {
        let mut out = a;
        for o in out.iter_mut() {
            *o = (self.p - *o) % self.p;
        }
        out
    }

    fn pack(&self, digits: &[u8]) -> Self::Word {
        let mut out = [0; GENERIC_DIGITS];
        out[..digits.len()].copy_from_slice(digits);
        out
    }
}

/// Calls `f(mask, syndrome)` for each `k`-subset of `coords` whose smallest
/// element is `coords[first]` (or the empty subset when `k == 0`).
fn subsets_from<F: PackedField>(
    field: &F,
    cols: &[F::Word],
    coords: &[usize],
    k: usize,
    first: usize,
    f: &mut impl FnMut(u128, F::Word),
) {
    fn rec<F: PackedField>(
        field: &F,
        cols: &[F::Word],
        coords: &[usize],
        k: usize,
        start: usize,
        (mask, acc): (u128, F::Word),
        f: &mut impl FnMut(u128, F::Word),
    ) {
        if k == 0 {
            f(mask, acc);
            return;
        }
        for i in start..=coords.len() - k {
            let c = coords[i];
            rec(field, cols, coords, k - 1, i + 1, (mask | 1u128 << c, field.add(acc, cols[c])), f);
        }
    }
    if k == 0 {
        f(0, field.zero());
        return;
    }
    if first + k > coords.len() {
        return;
    }
    let c = coords[first];
    rec(field, cols, coords, k - 1, first + 1, (1u128 << c, cols[c]), f);
}

fn mitm<F: PackedField>(
    field: &F,
    cols: &[F::Word],
    n: usize,
    w: usize,
    config: &EnumerationConfig,
) -> Result<Vec<u128>> {
    let half = n.div_ceil(2);
    let left: Vec<usize> = (0..half).collect();
    let right: Vec<usize> = (half..n).collect();
    let entry = std::mem::size_of::<(F::Word, u128)>() as u64;
    let mut found: Vec<u128> = Vec::new();
    for a in 0..=w {
        let b = w - a;
        if a > left.len() || b > right.len() {
            continue;
        }
        let (table_side, table_k, probe_side, probe_k) = if binomial(left.len(), a) <= binomial(right.len(), b) {
            (&left, a, &right, b)
        } else {
            (&right, b, &left, a)
        };
        let table_len = binomial(table_side.len(), table_k);
        let needed = table_len.saturating_mul(entry);
        if needed > config.memory_budget {
            return Err(Error::BudgetExceeded {
                needed,
                budget: config.memory_budget,
            });
        }
        let mut table: Vec<(F::Word, u128)> = Vec::with_capacity(table_len as usize);
        let firsts = if table_k == 0 { 1 } else { table_side.len() };
        for first in 0..firsts {
            subsets_from(field, cols, table_side, table_k, first, &mut |m, s| table.push((s, m)));
        }
        table.sort_unstable();

        let probe_firsts = if probe_k == 0 { 1 } else { probe_side.len() };
        let chunks = par::map_indices(probe_firsts, |first| {
            let mut out = Vec::new();
            subsets_from(field, cols, probe_side, probe_k, first, &mut |m, s| {
                let target = field.neg(s);
                let start = table.partition_point(|e| e.0 < target);
                for e in table[start..].iter().take_while(|e| e.0 == target) {
                    out.push(m | e.1);
                }
            });
            out
        });
        for chunk in chunks {
            found.extend(chunk);
        }
        let out_bytes = (found.len() as u64).saturating_mul(16 + 8 * w as u64);
        if out_bytes > config.memory_budget {
            return Err(Error::BudgetExceeded {
                needed: out_bytes,
                budget: config.memory_budget,
            });
        }
    }
    Ok(found)
}
