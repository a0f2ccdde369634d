//! Dense linear algebra over prime fields GF(p).
//!
//! Entries are stored reduced modulo `p` as bytes. Row reduction always picks
//! the leftmost available pivot column and the first nonzero row below the
//! current one, so [`GfMatrix::rref`] and its pivot list are deterministic.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest modulus accepted. Entries are stored in a `u8`.
pub const MAX_MODULUS: u32 = 251;

/// Validates that `p` is a prime small enough for byte storage.
pub fn check_prime(p: u32) -> Result<u32> {
    let is_prime = p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d));
    if is_prime && p <= MAX_MODULUS {
        Ok(p)
    } else {
        Err(Error::InvalidModulus(p))
    }
}

#[inline]
pub(crate) fn inv_mod(a: u8, p: u32) -> u8 {
    debug_assert!(a != 0);
    // Fermat: a^(p-2)
    let (mut base, mut exp, mut acc) = (a as u32 % p, p - 2, 1u32);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc as u8
}

/// A vector over GF(p).
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GfVector {
    p: u32,
    entries: Vec<u8>,
}

impl GfVector {
    pub fn new(p: u32, entries: Vec<u8>) -> Result<Self> {
        check_prime(p)?;
        if let Some((index, &value)) = entries.iter().enumerate().find(|(_, &e)| e as u32 >= p) {
            return Err(Error::EntryOutOfRange {
                index,
                value: value as u32,
                p,
            });
        }
        Ok(GfVector { p, entries })
    }

    pub fn zeros(p: u32, len: usize) -> Result<Self> {
        GfVector::new(p, vec![0; len])
    }

    /// Indicator vector of `support`, with entries 1.
    pub fn indicator(p: u32, len: usize, support: &[usize]) -> Result<Self> {
        let mut entries = vec![0u8; len];
        for &i in support {
            if i >= len {
                return Err(Error::IndexOutOfRange { index: i, limit: len });
            }
            entries[i] = 1;
        }
        GfVector::new(p, entries)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.entries.iter().filter(|&&e| e != 0).count()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.entries[i] != 0).collect()
    }
}

impl fmt::Debug for GfVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})[", self.p)?;
        for e in &self.entries {
            write!(f, "{e}")?;
        }
        write!(f, "]")
    }
}

/// A dense row-major matrix over GF(p).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GfMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl GfMatrix {
    pub fn new(p: u32, rows: usize, cols: usize, data: Vec<u8>) -> Result<Self> {
        check_prime(p)?;
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        if let Some((index, &value)) = data.iter().enumerate().find(|(_, &e)| e as u32 >= p) {
            return Err(Error::EntryOutOfRange {
                index,
                value: value as u32,
                p,
            });
        }
        Ok(GfMatrix { p, rows, cols, data })
    }

    pub fn zeros(p: u32, rows: usize, cols: usize) -> Result<Self> {
        GfMatrix::new(p, rows, cols, vec![0; rows * cols])
    }

    pub fn identity(p: u32, n: usize) -> Result<Self> {
        GfMatrix::from_fn(p, n, n, |i, j| (i == j) as u32)
    }

    /// Builds a matrix from integer values, reducing each modulo `p`.
    pub fn from_fn(p: u32, rows: usize, cols: usize, f: impl Fn(usize, usize) -> u32) -> Result<Self> {
        check_prime(p)?;
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push((f(i, j) % p) as u8);
            }
        }
        Ok(GfMatrix { p, rows, cols, data })
    }

    /// Builds a matrix from explicit rows; all rows must share a length.
    /// An empty row list yields a 0×`cols` matrix only via [`GfMatrix::zeros`].
    pub fn from_rows(p: u32, rows: &[Vec<u8>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        GfMatrix::new(p, rows.len(), cols, data)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vector(&self, r: usize) -> GfVector {
        GfVector {
            p: self.p,
            entries: self.row(r).to_vec(),
        }
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[u8]> {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn transpose(&self) -> GfMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c));
            }
        }
        GfMatrix {
            p: self.p,
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn select_rows(&self, rows: &[usize]) -> GfMatrix {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            data.extend_from_slice(self.row(r));
        }
        GfMatrix {
            p: self.p,
            rows: rows.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn select_columns(&self, cols: &[usize]) -> GfMatrix {
        let mut data = Vec::with_capacity(self.rows * cols.len());
        for r in 0..self.rows {
            for &c in cols {
                data.push(self.get(r, c));
            }
        }
        GfMatrix {
            p: self.p,
            rows: self.rows,
            cols: cols.len(),
            data,
        }
    }

    /// Appends a row, returning the enlarged matrix.
    pub fn with_row(&self, row: &GfVector) -> Result<GfMatrix> {
        self.check_vector(row)?;
        let mut data = self.data.clone();
        data.extend_from_slice(row.entries());
        Ok(GfMatrix {
            p: self.p,
            rows: self.rows + 1,
            cols: self.cols,
            data,
        })
    }

    fn check_vector(&self, v: &GfVector) -> Result<()> {
        if v.p != self.p {
            return Err(Error::ModulusMismatch {
                left: self.p,
                right: v.p,
            });
        }
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok(())
    }

    /// Gauss-Jordan elimination that only pivots on `order`, in that order.
    ///
    /// Returns the reduced matrix (pivot rows first, in pivot order) and the
    /// pivot columns used. Columns outside `order` are carried along unpivoted.
    pub(crate) fn reduce_on_columns(&self, order: &[usize]) -> (GfMatrix, Vec<usize>) {
        let p = self.p;
        let cols = self.cols;
        let mut m = self.data.clone();
        let mut pivots = Vec::new();
        let mut top = 0;
        for &c in order {
            if top == self.rows {
                break;
            }
            let Some(pr) = (top..self.rows).find(|&r| m[r * cols + c] != 0) else {
                continue;
            };
            if pr != top {
                for j in 0..cols {
                    m.swap(pr * cols + j, top * cols + j);
                }
            }
            let inv = inv_mod(m[top * cols + c], p) as u32;
            if inv != 1 {
                for j in 0..cols {
                    m[top * cols + j] = (m[top * cols + j] as u32 * inv % p) as u8;
                }
            }
            let pivot_row: Vec<u8> = m[top * cols..(top + 1) * cols].to_vec();
            for r in 0..self.rows {
                if r == top {
                    continue;
                }
                let f = m[r * cols + c] as u32;
                if f == 0 {
                    continue;
                }
                let neg = p - f;
                for (j, &pv) in pivot_row.iter().enumerate() {
                    if pv != 0 {
                        let e = &mut m[r * cols + j];
                        *e = ((*e as u32 + neg * pv as u32) % p) as u8;
                    }
                }
            }
            pivots.push(c);
            top += 1;
        }
        (
            GfMatrix {
                p,
                rows: self.rows,
                cols,
                data: m,
            },
            pivots,
        )
    }

    /// Reduced row echelon form and the strictly increasing pivot columns.
    pub fn rref(&self) -> (GfMatrix, Vec<usize>) {
        let order: Vec<usize> = (0..self.cols).collect();
        self.reduce_on_columns(&order)
    }

    /// Rank over GF(p).
    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// The nonzero rows of the RREF: a canonical basis of the row space.
    pub fn row_space_basis(&self) -> GfMatrix {
        let (r, pivots) = self.rref();
        let keep: Vec<usize> = (0..pivots.len()).collect();
        r.select_rows(&keep)
    }

    /// Basis of `{x : M xᵀ = 0}`, one vector per free column.
    pub fn nullspace_basis(&self) -> GfMatrix {
        let p = self.p;
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut data = Vec::new();
        let mut count = 0;
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut x = vec![0u8; self.cols];
            x[free] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                let e = r.get(i, free) as u32;
                x[pc] = ((p - e) % p) as u8;
            }
            data.extend_from_slice(&x);
            count += 1;
        }
        GfMatrix {
            p,
            rows: count,
            cols: self.cols,
            data,
        }
    }

    /// `M xᵀ` over GF(p).
    pub fn syndrome(&self, x: &GfVector) -> Result<GfVector> {
        self.check_vector(x)?;
        let p = self.p;
        let entries = self
            .row_iter()
            .map(|row| {
                let s: u32 = row
                    .iter()
                    .zip(x.entries())
                    .map(|(&a, &b)| a as u32 * b as u32)
                    .sum();
                (s % p) as u8
            })
            .collect();
        Ok(GfVector { p, entries })
    }

    /// Whether `v` lies in the row space.
    pub fn row_space_contains(&self, v: &GfVector) -> Result<bool> {
        self.check_vector(v)?;
        let p = self.p;
        let (r, pivots) = self.rref();
        let mut rem: Vec<u32> = v.entries().iter().map(|&e| e as u32).collect();
        for (i, &c) in pivots.iter().enumerate() {
            let f = rem[c] % p;
            if f == 0 {
                continue;
            }
            for (j, &e) in r.row(i).iter().enumerate() {
                rem[j] = (rem[j] + (p - f) * e as u32) % p;
            }
        }
        Ok(rem.iter().all(|&e| e % p == 0))
    }

    /// Linear combination `Σ coeffs[i] · row_i`.
    pub fn combine_rows(&self, coeffs: &GfVector) -> Result<GfVector> {
        if coeffs.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: coeffs.len(),
            });
        }
        let p = self.p;
        let mut acc = vec![0u32; self.cols];
        for (i, &c) in coeffs.entries().iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (a, &e) in acc.iter_mut().zip(self.row(i)) {
                *a += c as u32 * e as u32;
            }
        }
        Ok(GfVector {
            p,
            entries: acc.into_iter().map(|a| (a % p) as u8).collect(),
        })
    }
}

impl fmt::Debug for GfMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "GF({}) {}x{}", self.p, self.rows, self.cols)?;
        for row in self.row_iter() {
            for e in row {
                write!(f, "{e}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fano(p: u32) -> GfMatrix {
        GfMatrix::from_fn(p, 7, 7, |i, j| [1, 2, 4].contains(&((i + 7 - j) % 7)) as u32).unwrap()
    }

    #[test]
    fn rejects_composite_and_large_moduli() {
        assert!(check_prime(4).is_err());
        assert!(check_prime(1).is_err());
        assert!(check_prime(257).is_err());
        for p in [2, 3, 5, 7, 11, 13] {
            assert_eq!(check_prime(p), Ok(p));
        }
    }

    #[test]
    fn entries_must_be_reduced() {
        let err = GfMatrix::new(3, 1, 2, vec![1, 3]).unwrap_err();
        assert!(matches!(err, Error::EntryOutOfRange { index: 1, .. }));
    }

    #[test]
    fn identity_has_full_rank_and_trivial_kernel() {
        for p in [2, 3, 5] {
            let id = GfMatrix::identity(p, 6).unwrap();
            assert_eq!(id.rank(), 6);
            assert_eq!(id.nullspace_basis().rows(), 0);
            let (r, piv) = id.rref();
            assert_eq!(r, id);
            assert_eq!(piv, (0..6).collect::<Vec<_>>());
        }
    }

    #[test]
    fn zero_matrix_rref() {
        let z = GfMatrix::zeros(3, 3, 4).unwrap();
        let (r, piv) = z.rref();
        assert_eq!(r, z);
        assert!(piv.is_empty());
        assert_eq!(z.rank(), 0);
        assert_eq!(z.nullspace_basis().rows(), 4);
    }

    #[test]
    fn dependent_rows_over_gf3() {
        let m = GfMatrix::from_rows(3, &[vec![1, 1], vec![2, 2]]).unwrap();
        let (r, piv) = m.rref();
        assert_eq!(r, GfMatrix::from_rows(3, &[vec![1, 1], vec![0, 0]]).unwrap());
        assert_eq!(piv, vec![0]);
    }

    #[test]
    fn fano_binary_rank() {
        // Rows of the cyclic (7,4) Hamming-type incidence code.
        assert_eq!(fano(2).rank(), 4);
        // det = k·(k-λ)^3 = 24 ≡ 0 mod 3, so the ternary rank is deficient.
        let m = fano(3);
        assert!(m.rank() < 7);
        assert_eq!(m.rank() + m.nullspace_basis().rows(), 7);
    }

    #[test]
    fn all_ones_row_kernel() {
        let m = GfMatrix::from_rows(3, &[vec![1, 1, 1]]).unwrap();
        let k = m.nullspace_basis();
        assert_eq!(k.rows(), 2);
        for r in 0..k.rows() {
            assert!(m.syndrome(&k.row_vector(r)).unwrap().is_zero());
        }
        let ones = GfVector::new(3, vec![1, 1, 1]).unwrap();
        assert!(m.syndrome(&ones).unwrap().is_zero());
    }

    #[test]
    fn syndrome_checks_dimensions() {
        let m = GfMatrix::identity(3, 3).unwrap();
        let x = GfVector::zeros(3, 2).unwrap();
        assert!(matches!(m.syndrome(&x), Err(Error::DimensionMismatch { .. })));
        let y = GfVector::zeros(5, 3).unwrap();
        assert!(matches!(m.syndrome(&y), Err(Error::ModulusMismatch { .. })));
        assert!(m.syndrome(&GfVector::zeros(3, 3).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn row_space_membership() {
        let m = GfMatrix::from_rows(3, &[vec![1, 0]]).unwrap();
        assert!(!m.row_space_contains(&GfVector::new(3, vec![0, 1]).unwrap()).unwrap());
        assert!(m.row_space_contains(&GfVector::new(3, vec![2, 0]).unwrap()).unwrap());
        let f = fano(3);
        for r in 0..7 {
            assert!(f.row_space_contains(&f.row_vector(r)).unwrap());
        }
    }

    #[test]
    fn inverse_table() {
        for p in [2u32, 3, 5, 7, 11, 13] {
            for a in 1..p {
                assert_eq!(a * inv_mod(a as u8, p) as u32 % p, 1);
            }
        }
    }
}
