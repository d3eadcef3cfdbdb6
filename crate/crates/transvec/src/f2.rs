//! Bit-packed linear algebra over GF(2).
//!
//! Vectors are stored as little-endian `u64` words: bit `i` lives in word
//! `i / 64` at position `i % 64`, and bits past `len` are kept zero so that
//! word-level operations (XOR, AND, popcount) need no per-bit masking.
//!
//! Length-2n vectors are read as `[a|b]` halves and carry the binary
//! symplectic form `<x, y> = x_a·y_b + x_b·y_a (mod 2)`: 0 means the
//! corresponding Pauli operators commute, 1 means they anticommute. A
//! transvection `Z_h(x) = x + <x, h>·h` is the row-vector action of the
//! matrix `F_h = I + Ω hᵀ h` where `Ω` swaps the two halves.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

const WORD_BITS: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// Packed GF(2) vector of fixed length.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    /// All-zero vector of length `len`.
    pub fn zeros(len: usize) -> Self {
        BitVec { words: vec![0; words_for(len)], len }
    }

    /// Vector with ones exactly at `indices`.
    ///
    /// # Panics
    /// Panics if any index is out of range.
    pub fn from_indices(len: usize, indices: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in indices {
            assert!(i < len, "bit index {i} out of range for length {len}");
            v.set(i, true);
        }
        v
    }

    /// Vector from a 0/1 slice, index 0 first.
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b != 0 {
                v.set(i, true);
            }
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        self.words[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    /// In-place XOR with another vector of the same length.
    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "length mismatch in xor_assign");
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w ^= o;
        }
    }

    pub fn xor(&self, other: &BitVec) -> BitVec {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn or(&self, other: &BitVec) -> BitVec {
        assert_eq!(self.len, other.len, "length mismatch in or");
        let mut out = self.clone();
        for (w, o) in out.words.iter_mut().zip(&other.words) {
            *w |= o;
        }
        out
    }

    /// Parity of the AND with `other` (the GF(2) dot product).
    pub fn dot(&self, other: &BitVec) -> u8 {
        assert_eq!(self.len, other.len, "length mismatch in dot");
        let mut acc = 0u32;
        for (w, o) in self.words.iter().zip(&other.words) {
            acc ^= (w & o).count_ones();
        }
        (acc & 1) as u8
    }

    /// Number of ones.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Indices of the set bits, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * WORD_BITS + b)
                }
            })
        })
    }

    /// Copy of bits `[start, start + count)`.
    pub fn slice(&self, start: usize, count: usize) -> BitVec {
        assert!(start + count <= self.len, "slice out of range");
        let mut out = BitVec::zeros(count);
        let word_off = start / WORD_BITS;
        let bit_off = start % WORD_BITS;
        for w in 0..out.words.len() {
            let lo = self.words.get(word_off + w).copied().unwrap_or(0) >> bit_off;
            let hi = if bit_off == 0 {
                0
            } else {
                self.words.get(word_off + w + 1).copied().unwrap_or(0) << (WORD_BITS - bit_off)
            };
            out.words[w] = lo | hi;
        }
        out.mask_tail();
        out
    }

    /// Concatenation `[self | other]`.
    pub fn concat(&self, other: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.len + other.len);
        out.words[..self.words.len()].copy_from_slice(&self.words);
        for (i, _) in other.words.iter().enumerate() {
            // shifted copy of `other` starting at bit self.len
            let start = self.len + i * WORD_BITS;
            let word = start / WORD_BITS;
            let off = start % WORD_BITS;
            out.words[word] |= other.words[i] << off;
            if off != 0 && word + 1 < out.words.len() {
                out.words[word + 1] |= other.words[i] >> (WORD_BITS - off);
            }
        }
        out.mask_tail();
        out
    }

    /// Low 64 bits as an integer (requires `len <= 64`).
    pub fn as_u64(&self) -> u64 {
        assert!(self.len <= WORD_BITS, "as_u64 requires len <= 64");
        self.words.first().copied().unwrap_or(0)
    }

    /// Lexicographic comparison reading bit 0 first, with 0 < 1.
    pub fn lex_cmp(&self, other: &BitVec) -> Ordering {
        assert_eq!(self.len, other.len, "length mismatch in lex_cmp");
        for (w, o) in self.words.iter().zip(&other.words) {
            let diff = w ^ o;
            if diff != 0 {
                let bit = diff.trailing_zeros();
                return if w >> bit & 1 == 0 { Ordering::Less } else { Ordering::Greater };
            }
        }
        Ordering::Equal
    }

    // Trailing bits past `len` must stay zero.
    fn mask_tail(&mut self) {
        let rem = self.len % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// Binary symplectic inner product of two `[a|b]` vectors of even length.
///
/// Returns 1 when the Pauli operators encoded by `x` and `y` anticommute.
pub fn symplectic_inner(x: &BitVec, y: &BitVec) -> u8 {
    assert_eq!(x.len(), y.len(), "length mismatch in symplectic_inner");
    assert_eq!(x.len() % 2, 0, "symplectic vectors have even length");
    let n = x.len() / 2;
    let (xa, xb) = (x.slice(0, n), x.slice(n, n));
    let (ya, yb) = (y.slice(0, n), y.slice(n, n));
    xa.dot(&yb) ^ xb.dot(&ya)
}

/// Transvection action `Z_h(x) = x + <x, h>·h`.
pub fn transvection_apply(h: &BitVec, x: &BitVec) -> BitVec {
    let mut out = x.clone();
    if symplectic_inner(x, h) == 1 {
        out.xor_assign(h);
    }
    out
}

/// Row-major GF(2) matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BitMatrix {
    rows: Vec<BitVec>,
    cols: usize,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix { rows: vec![BitVec::zeros(cols); rows], cols }
    }

    /// # Panics
    /// Panics if the rows do not all share one length.
    pub fn from_rows(rows: Vec<BitVec>) -> Self {
        let cols = rows.first().map_or(0, BitVec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows in BitMatrix");
        BitMatrix { rows, cols }
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &BitVec {
        &self.rows[r]
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value);
    }

    /// Matrix-vector product `M·v` (each row dotted with `v`).
    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.rows.len());
        for (i, row) in self.rows.iter().enumerate() {
            if row.dot(v) == 1 {
                out.set(i, true);
            }
        }
        out
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.cols, self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.ones() {
                out.set(c, r, true);
            }
        }
        out
    }

    /// Reduced row echelon form with deterministic leftmost-pivot selection.
    pub fn echelon(&self) -> Echelon {
        let n = self.rows.len();
        let mut rows = self.rows.clone();
        // combos[i] tracks which original rows XOR to the current rows[i]
        let mut combos: Vec<BitVec> = (0..n).map(|i| BitVec::from_indices(n, &[i])).collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(src) = (r..n).find(|&i| rows[i].get(c)) else { continue };
            rows.swap(r, src);
            combos.swap(r, src);
            for i in 0..n {
                if i != r && rows[i].get(c) {
                    let (pivot_row, pivot_combo) = (rows[r].clone(), combos[r].clone());
                    rows[i].xor_assign(&pivot_row);
                    combos[i].xor_assign(&pivot_combo);
                }
            }
            pivots.push(c);
            r += 1;
            if r == n {
                break;
            }
        }
        rows.truncate(r);
        combos.truncate(r);
        Echelon { rows, pivots, combos, n_original: n }
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    /// Basis of the right kernel `{v : M·v = 0}`.
    pub fn kernel_basis(&self) -> Vec<BitVec> {
        let ech = self.echelon();
        let pivot_set: Vec<usize> = ech.pivots.clone();
        let mut basis = Vec::new();
        for c in 0..self.cols {
            if pivot_set.contains(&c) {
                continue;
            }
            let mut v = BitVec::zeros(self.cols);
            v.set(c, true);
            for (row, &p) in ech.rows.iter().zip(&pivot_set) {
                if row.get(c) {
                    v.set(p, true);
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Inverse of a square full-rank matrix.
    pub fn inverse(&self) -> Option<BitMatrix> {
        let n = self.rows.len();
        if n != self.cols {
            return None;
        }
        let ech = self.echelon();
        if ech.rank() != n {
            return None;
        }
        // RREF of a full-rank square matrix is I, so combos give the inverse rows.
        Some(BitMatrix::from_rows(ech.combos))
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            writeln!(f, "{row:?}")?;
        }
        Ok(())
    }
}

/// Result of row reduction: RREF rows, their pivot columns, and for each RREF
/// row the combination of original rows that produces it.
pub struct Echelon {
    rows: Vec<BitVec>,
    pivots: Vec<usize>,
    combos: Vec<BitVec>,
    n_original: usize,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Whether `v` lies in the row space.
    pub fn contains(&self, v: &BitVec) -> bool {
        self.solve(v).is_some()
    }

    /// Combination `c` over the *original* rows with `c·M = v`, if one exists.
    ///
    /// The combination is unique when the original rows are independent.
    pub fn solve(&self, v: &BitVec) -> Option<BitVec> {
        let mut residual = v.clone();
        let mut combo = BitVec::zeros(self.n_original);
        for ((row, &pivot), rc) in self.rows.iter().zip(&self.pivots).zip(&self.combos) {
            if residual.get(pivot) {
                residual.xor_assign(row);
                combo.xor_assign(rc);
            }
        }
        residual.is_zero().then_some(combo)
    }
}

/// Membership solve against the row space of `m`.
///
/// Convenience wrapper that reduces `m` on every call; callers with many
/// queries against one matrix should hold an [`Echelon`] instead.
pub fn solve_membership(m: &BitMatrix, v: &BitVec) -> Option<BitVec> {
    m.echelon().solve(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_vec(rng: &mut StdRng, len: usize) -> BitVec {
        let mut v = BitVec::zeros(len);
        for i in 0..len {
            if rng.gen_bool(0.5) {
                v.set(i, true);
            }
        }
        v
    }

    #[test]
    fn bit_ops_across_word_boundaries() {
        let mut v = BitVec::zeros(130);
        v.set(0, true);
        v.set(63, true);
        v.set(64, true);
        v.set(129, true);
        assert_eq!(v.weight(), 4);
        assert_eq!(v.ones().collect::<Vec<_>>(), vec![0, 63, 64, 129]);
        v.flip(64);
        assert!(!v.get(64));
        assert_eq!(v.weight(), 3);
    }

    #[test]
    fn slice_and_concat_invert() {
        let mut rng = StdRng::seed_from_u64(11);
        for len in [1, 2, 63, 64, 65, 100, 128, 200] {
            let v = random_vec(&mut rng, 2 * len);
            let a = v.slice(0, len);
            let b = v.slice(len, len);
            assert_eq!(a.concat(&b), v, "len {len}");
        }
    }

    #[test]
    fn symplectic_inner_halves() {
        // [101|010] against [010|101]: 101·101 + 010·010 = 0 + 1 = 1
        let x = BitVec::from_bits(&[1, 0, 1, 0, 1, 0]);
        let y = BitVec::from_bits(&[0, 1, 0, 1, 0, 1]);
        assert_eq!(symplectic_inner(&x, &y), 1);
        assert_eq!(symplectic_inner(&x, &x), 0);
    }

    #[test]
    fn transvection_worked_example() {
        // h = [110|000], x = [000|100]: <x,h> = 1 so the image is x + h
        let h = BitVec::from_bits(&[1, 1, 0, 0, 0, 0]);
        let x = BitVec::from_bits(&[0, 0, 0, 1, 0, 0]);
        assert_eq!(transvection_apply(&h, &x), BitVec::from_bits(&[1, 1, 0, 1, 0, 0]));
    }

    #[test]
    fn transvection_fixes_commuting_vectors() {
        let h = BitVec::from_bits(&[1, 1, 0, 0, 0, 0]);
        let x = BitVec::from_bits(&[1, 0, 0, 0, 0, 0]);
        assert_eq!(symplectic_inner(&x, &h), 0);
        assert_eq!(transvection_apply(&h, &x), x);
    }

    #[test]
    fn transvection_preserves_form_and_is_involutive() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..10_000 {
            let n = rng.gen_range(1..=128);
            let h = random_vec(&mut rng, 2 * n);
            let x = random_vec(&mut rng, 2 * n);
            let y = random_vec(&mut rng, 2 * n);
            let tx = transvection_apply(&h, &x);
            let ty = transvection_apply(&h, &y);
            assert_eq!(symplectic_inner(&tx, &ty), symplectic_inner(&x, &y));
            assert_eq!(transvection_apply(&h, &tx), x);
        }
    }

    #[test]
    fn symplectic_form_is_bilinear() {
        let mut rng = StdRng::seed_from_u64(13);
        for _ in 0..1000 {
            let n = rng.gen_range(1..=64);
            let x = random_vec(&mut rng, 2 * n);
            let y = random_vec(&mut rng, 2 * n);
            let z = random_vec(&mut rng, 2 * n);
            let lhs = symplectic_inner(&x.xor(&y), &z);
            assert_eq!(lhs, symplectic_inner(&x, &z) ^ symplectic_inner(&y, &z));
        }
    }

    // F_h = I + Ω hᵀ h acting on row vectors: (x F_h)_j = x_j + <x,h>·h_j.
    fn transvection_matrix(h: &BitVec) -> BitMatrix {
        let d = h.len();
        let n = d / 2;
        let mut m = BitMatrix::zeros(d, d);
        for i in 0..d {
            m.set(i, i, true);
        }
        for i in 0..d {
            // (Ω hᵀ)_i = h at the half-swapped index
            let hi = if i < n { h.get(i + n) } else { h.get(i - n) };
            if hi {
                for j in h.ones() {
                    let cur = m.get(i, j);
                    m.set(i, j, !cur);
                }
            }
        }
        m
    }

    #[test]
    fn transvection_agrees_with_matrix_form() {
        let mut rng = StdRng::seed_from_u64(17);
        for _ in 0..1000 {
            let n = rng.gen_range(1..=32);
            let h = random_vec(&mut rng, 2 * n);
            let x = random_vec(&mut rng, 2 * n);
            let f = transvection_matrix(&h);
            // row-vector action: result_j = sum_i x_i F_ij = (Fᵀ x)_j
            let expect = f.transpose().mul_vec(&x);
            assert_eq!(transvection_apply(&h, &x), expect);
        }
    }

    #[test]
    fn echelon_solves_membership_exhaustively() {
        let mut rng = StdRng::seed_from_u64(23);
        for _ in 0..50 {
            let cols = rng.gen_range(1..=10);
            let n_rows = rng.gen_range(1..=5);
            let rows: Vec<BitVec> = (0..n_rows).map(|_| random_vec(&mut rng, cols)).collect();
            let m = BitMatrix::from_rows(rows.clone());
            let ech = m.echelon();
            // enumerate the span directly
            let mut span = std::collections::HashSet::new();
            for mask in 0u32..1 << n_rows {
                let mut v = BitVec::zeros(cols);
                for (i, row) in rows.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        v.xor_assign(row);
                    }
                }
                span.insert(format!("{v:?}"));
            }
            for value in 0u32..1 << cols {
                let mut v = BitVec::zeros(cols);
                for c in 0..cols {
                    if value >> c & 1 == 1 {
                        v.set(c, true);
                    }
                }
                let solved = ech.solve(&v);
                assert_eq!(solved.is_some(), span.contains(&format!("{v:?}")));
                if let Some(combo) = solved {
                    let mut check = BitVec::zeros(cols);
                    for i in combo.ones() {
                        check.xor_assign(&rows[i]);
                    }
                    assert_eq!(check, v);
                }
            }
        }
    }

    #[test]
    fn kernel_basis_annihilates() {
        let mut rng = StdRng::seed_from_u64(31);
        for _ in 0..100 {
            let cols = rng.gen_range(1..=40);
            let n_rows = rng.gen_range(1..=20);
            let rows: Vec<BitVec> = (0..n_rows).map(|_| random_vec(&mut rng, cols)).collect();
            let m = BitMatrix::from_rows(rows);
            let kernel = m.kernel_basis();
            assert_eq!(kernel.len(), cols - m.rank());
            for v in &kernel {
                assert!(m.mul_vec(v).is_zero());
            }
            // kernel vectors are independent by construction (unit free coordinates)
            let km = BitMatrix::from_rows(kernel);
            assert_eq!(km.rank(), km.n_rows());
        }
    }

    #[test]
    fn inverse_round_trips() {
        let mut rng = StdRng::seed_from_u64(37);
        let mut found = 0;
        while found < 20 {
            let n = rng.gen_range(1..=12);
            let rows: Vec<BitVec> = (0..n).map(|_| random_vec(&mut rng, n)).collect();
            let m = BitMatrix::from_rows(rows);
            let Some(inv) = m.inverse() else { continue };
            found += 1;
            for i in 0..n {
                // (inv · M) row i should be e_i
                let mut acc = BitVec::zeros(n);
                for j in inv.row(i).ones() {
                    acc.xor_assign(m.row(j));
                }
                let mut e = BitVec::zeros(n);
                e.set(i, true);
                assert_eq!(acc, e);
            }
        }
    }

    #[test]
    fn lex_order_reads_low_bits_first() {
        let a = BitVec::from_bits(&[0, 1, 1]);
        let b = BitVec::from_bits(&[1, 0, 0]);
        assert_eq!(a.lex_cmp(&b), Ordering::Less);
        assert_eq!(b.lex_cmp(&a), Ordering::Greater);
        assert_eq!(a.lex_cmp(&a), Ordering::Equal);
    }
}
