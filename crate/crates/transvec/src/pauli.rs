//! Phased Hermitian Pauli operators in binary symplectic form.
//!
//! An n-qubit Pauli is stored as two length-n bit vectors `x`, `z` plus a
//! phase exponent `kappa` (mod 4). The operator represented is
//! `i^kappa · E(x, z)` where `E(x, z) = i^(x·z) X^x Z^z`; the intrinsic
//! `i^(x·z)` factor makes `E(x, z)` exactly the tensor product of the
//! single-qubit letters I, X, Y = iXZ, Z. `E` is Hermitian and involutive,
//! so `i^kappa E` is Hermitian iff `kappa` is even.
//!
//! The multiplication phase rule is validated against the dense matrix
//! oracle (all 16 ordered single-qubit pairs plus random multi-qubit pairs)
//! rather than asserted by hand; see the tests in [`crate::oracle`].

use crate::error::{Error, Result};
use crate::f2::BitVec;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Pauli operator with an explicit `i^kappa` phase.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PhasedPauli {
    n: usize,
    x: BitVec,
    z: BitVec,
    kappa: u8,
}

fn and_count(a: &BitVec, b: &BitVec) -> usize {
    a.words().iter().zip(b.words()).map(|(x, y)| (x & y).count_ones() as usize).sum()
}

impl PhasedPauli {
    /// Identity on `n` qubits with phase +1.
    pub fn identity(n: usize) -> Self {
        PhasedPauli { n, x: BitVec::zeros(n), z: BitVec::zeros(n), kappa: 0 }
    }

    /// Build from binary parts and a phase exponent.
    ///
    /// # Panics
    /// Panics if `x` and `z` differ in length.
    pub fn from_xz(x: BitVec, z: BitVec, kappa: u8) -> Self {
        assert_eq!(x.len(), z.len(), "x and z parts must share one length");
        PhasedPauli { n: x.len(), x, z, kappa: kappa % 4 }
    }

    /// Single-qubit letter placed at `qubit` (0-based).
    ///
    /// # Panics
    /// Panics on a letter outside {I, X, Y, Z} or an out-of-range qubit.
    pub fn single(n: usize, qubit: usize, letter: char) -> Self {
        assert!(qubit < n, "qubit {qubit} out of range for n={n}");
        let mut p = Self::identity(n);
        let (xb, zb) = letter_bits(letter).expect("letter must be one of I, X, Y, Z");
        if xb {
            p.x.set(qubit, true);
        }
        if zb {
            p.z.set(qubit, true);
        }
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x(&self) -> &BitVec {
        &self.x
    }

    pub fn z(&self) -> &BitVec {
        &self.z
    }

    pub fn x_mut_set(&mut self, qubit: usize, value: bool) {
        self.x.set(qubit, value);
    }

    pub fn z_mut_set(&mut self, qubit: usize, value: bool) {
        self.z.set(qubit, value);
    }

    pub fn x_mut_flip(&mut self, qubit: usize) {
        self.x.flip(qubit);
    }

    pub fn z_mut_flip(&mut self, qubit: usize) {
        self.z.flip(qubit);
    }

    /// Phase exponent `kappa` in `i^kappa`.
    pub fn kappa(&self) -> u8 {
        self.kappa
    }

    pub fn with_kappa(&self, kappa: u8) -> Self {
        PhasedPauli { kappa: kappa % 4, ..self.clone() }
    }

    /// Multiply the phase by `i^delta`.
    pub fn mul_phase(&self, delta: u8) -> Self {
        self.with_kappa((self.kappa + delta % 4) % 4)
    }

    /// Letter at `qubit`: one of 'I', 'X', 'Y', 'Z'.
    pub fn letter_at(&self, qubit: usize) -> char {
        match (self.x.get(qubit), self.z.get(qubit)) {
            (false, false) => 'I',
            (true, false) => 'X',
            (true, true) => 'Y',
            (false, true) => 'Z',
        }
    }

    /// Number of qubits acted on non-trivially.
    pub fn weight(&self) -> usize {
        self.x.or(&self.z).weight()
    }

    /// Qubits acted on non-trivially, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.x.or(&self.z).ones().collect()
    }

    /// True when both binary parts are zero (the operator is a phase times I).
    pub fn is_trivial(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    /// Product `self · other` with the exact `i^kappa` phase.
    ///
    /// # Panics
    /// Panics on a qubit-count mismatch.
    pub fn mul(&self, other: &PhasedPauli) -> PhasedPauli {
        assert_eq!(self.n, other.n, "qubit count mismatch in pauli mul");
        let x = self.x.xor(&other.x);
        let z = self.z.xor(&other.z);
        // E(a,b)E(c,d) = i^(a·b + c·d + 2·b·c − (a⊕c)·(b⊕d)) E(a⊕c, b⊕d),
        // dot products taken over the integers mod 4.
        let mut kappa = self.kappa as i64 + other.kappa as i64;
        kappa += and_count(&self.x, &self.z) as i64;
        kappa += and_count(&other.x, &other.z) as i64;
        kappa += 2 * and_count(&self.z, &other.x) as i64;
        kappa -= and_count(&x, &z) as i64;
        PhasedPauli { n: self.n, x, z, kappa: kappa.rem_euclid(4) as u8 }
    }

    /// Group inverse: same binary parts, conjugate phase.
    pub fn inverse(&self) -> PhasedPauli {
        PhasedPauli { kappa: (4 - self.kappa) % 4, ..self.clone() }
    }

    /// The Hermitian `±E(x, z)` part: kappa reduced to {0, 2}, dropping a
    /// leftover global-phase factor of i when kappa is odd.
    pub fn hermitian_part(&self) -> PhasedPauli {
        PhasedPauli { kappa: self.kappa / 2 * 2, ..self.clone() }
    }

    /// Sign of the Hermitian part: +1 for kappa in {0, 1}, −1 for {2, 3}.
    pub fn hermitian_sign(&self) -> i8 {
        if self.kappa >= 2 {
            -1
        } else {
            1
        }
    }

    pub fn commutes_with(&self, other: &PhasedPauli) -> bool {
        self.symplectic_pairing(other) == 0
    }

    /// Symplectic pairing: 0 when commuting, 1 when anticommuting.
    pub fn symplectic_pairing(&self, other: &PhasedPauli) -> u8 {
        assert_eq!(self.n, other.n, "qubit count mismatch in pairing");
        self.x.dot(&other.z) ^ self.z.dot(&other.x)
    }

    /// Binary `[x|z]` form of length 2n.
    pub fn to_symplectic(&self) -> BitVec {
        self.x.concat(&self.z)
    }

    /// Binary form ordered per qubit: bits (2q, 2q+1) are (x_q, z_q).
    /// Comparing these forms lexicographically orders Paulis letter by
    /// letter with I < Z < X < Y; this is the canonical tie-break order.
    pub fn interleaved_bits(&self) -> BitVec {
        let mut v = BitVec::zeros(2 * self.n);
        for q in 0..self.n {
            v.set(2 * q, self.x.get(q));
            v.set(2 * q + 1, self.z.get(q));
        }
        v
    }

    /// Rebuild from a `[x|z]` vector.
    pub fn from_symplectic(v: &BitVec, kappa: u8) -> Self {
        assert_eq!(v.len() % 2, 0, "symplectic vector length must be even");
        let n = v.len() / 2;
        PhasedPauli { n, x: v.slice(0, n), z: v.slice(n, n), kappa: kappa % 4 }
    }
}

impl fmt::Debug for PhasedPauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PhasedPauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_pauli(self))
    }
}

fn letter_bits(letter: char) -> Option<(bool, bool)> {
    match letter {
        'I' => Some((false, false)),
        'X' => Some((true, false)),
        'Y' => Some((true, true)),
        'Z' => Some((false, true)),
        _ => None,
    }
}

const PHASE_TOKENS: [&str; 4] = ["", "+i", "-", "-i"];

/// Render a Pauli in the string grammar accepted by [`parse_pauli`].
///
/// Dense letters for n ≤ 32 (e.g. `-XZX`), sparse 1-based tokens above that
/// (e.g. `-i Z2 X4`); a bare `I` denotes the identity in sparse form.
pub fn format_pauli(p: &PhasedPauli) -> String {
    let mut out = String::from(PHASE_TOKENS[p.kappa() as usize]);
    if p.n() <= 32 {
        for q in 0..p.n() {
            out.push(p.letter_at(q));
        }
    } else if p.is_trivial() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push('I');
    } else {
        for q in p.support() {
            if !out.is_empty() {
                out.push(' ');
            }
            out.push(p.letter_at(q));
            out.push_str(&(q + 1).to_string());
        }
    }
    out
}

/// Parse a Pauli string for `n` qubits.
///
/// Grammar: an optional phase token (`+`, `-`, `+i`, `-i`), then either a
/// dense run over {I, X, Y, Z} of length exactly `n`, a whitespace-separated
/// sparse list of `<letter><index>` tokens with 1-based indices (e.g.
/// `Z2 X4 Y5`), or a bare `I` for the identity.
pub fn parse_pauli(input: &str, n: usize) -> Result<PhasedPauli> {
    let s = input.trim();
    let (kappa, rest) = if let Some(r) = s.strip_prefix("+i") {
        (1u8, r)
    } else if let Some(r) = s.strip_prefix("-i") {
        (3u8, r)
    } else if let Some(r) = s.strip_prefix('+') {
        (0u8, r)
    } else if let Some(r) = s.strip_prefix('-') {
        (2u8, r)
    } else {
        (0u8, s)
    };
    let body = rest.trim();
    if body.is_empty() {
        return Err(Error::parse(format!("empty Pauli body in {input:?}")));
    }
    let mut p = PhasedPauli::identity(n).with_kappa(kappa);
    if body == "I" {
        return Ok(p);
    }
    if body.chars().any(|c| c.is_ascii_digit()) {
        // sparse form
        for token in body.split_whitespace() {
            let mut chars = token.chars();
            let letter = chars.next().unwrap();
            let (xb, zb) = letter_bits(letter).filter(|_| letter != 'I').ok_or_else(|| {
                Error::parse(format!("bad sparse token {token:?}: letter must be X, Y, or Z"))
            })?;
            let idx: usize = chars
                .as_str()
                .parse()
                .map_err(|_| Error::parse(format!("bad index in sparse token {token:?}")))?;
            if idx == 0 || idx > n {
                return Err(Error::parse(format!(
                    "index {idx} out of range 1..={n} in token {token:?}"
                )));
            }
            let q = idx - 1;
            if p.x.get(q) || p.z.get(q) {
                return Err(Error::parse(format!("duplicate qubit index {idx} in {input:?}")));
            }
            if xb {
                p.x.set(q, true);
            }
            if zb {
                p.z.set(q, true);
            }
        }
        Ok(p)
    } else {
        // dense form
        let letters: Vec<char> = body.chars().filter(|c| !c.is_whitespace()).collect();
        if letters.len() != n {
            return Err(Error::parse(format!(
                "dense Pauli {body:?} has {} letters, expected {n}",
                letters.len()
            )));
        }
        for (q, &letter) in letters.iter().enumerate() {
            let (xb, zb) = letter_bits(letter).ok_or_else(|| {
                Error::parse(format!("bad letter {letter:?} at position {} in {input:?}", q + 1))
            })?;
            if xb {
                p.x.set(q, true);
            }
            if zb {
                p.z.set(q, true);
            }
        }
        Ok(p)
    }
}

/// Uniformly random Pauli for bulk property tests (shared across modules).
#[cfg(test)]
pub(crate) fn random_pauli(rng: &mut rand::rngs::StdRng, n: usize) -> PhasedPauli {
    use rand::Rng;
    let mut x = BitVec::zeros(n);
    let mut z = BitVec::zeros(n);
    for q in 0..n {
        if rng.gen_bool(0.5) {
            x.set(q, true);
        }
        if rng.gen_bool(0.5) {
            z.set(q, true);
        }
    }
    PhasedPauli::from_xz(x, z, rng.gen_range(0..4))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn single_qubit_products() {
        let n = 1;
        let x = PhasedPauli::single(n, 0, 'X');
        let y = PhasedPauli::single(n, 0, 'Y');
        let z = PhasedPauli::single(n, 0, 'Z');
        // X·Z = -iY = i^3 E([1|1])
        let xz = x.mul(&z);
        assert_eq!(xz.kappa(), 3);
        assert_eq!((xz.x().get(0), xz.z().get(0)), (true, true));
        // Z·X = +iY
        assert_eq!(z.mul(&x).kappa(), 1);
        // X·Y = iZ, Y·X = -iZ
        assert_eq!(x.mul(&y).kappa(), 1);
        assert_eq!(x.mul(&y).letter_at(0), 'Z');
        assert_eq!(y.mul(&x).kappa(), 3);
        // squares are +I
        for p in [&x, &y, &z] {
            let sq = p.mul(p);
            assert!(sq.is_trivial());
            assert_eq!(sq.kappa(), 0);
        }
    }

    #[test]
    fn commutation_cases() {
        let x1 = parse_pauli("XI", 2).unwrap();
        let x1x2 = parse_pauli("XX", 2).unwrap();
        let z1 = parse_pauli("ZI", 2).unwrap();
        assert!(x1.commutes_with(&x1x2));
        assert!(!x1.commutes_with(&z1));
        assert_eq!(x1.symplectic_pairing(&z1), 1);
    }

    #[test]
    fn weight_counts_union_of_supports() {
        let p = parse_pauli("Z2 X4 Y5 Y6 Z7 X8", 8).unwrap();
        assert_eq!(p.weight(), 6);
        assert_eq!(p.support(), vec![1, 3, 4, 5, 6, 7]);
    }

    #[test]
    fn mul_is_associative() {
        let mut rng = StdRng::seed_from_u64(41);
        for _ in 0..1000 {
            let n = rng.gen_range(1..=12);
            let p = random_pauli(&mut rng, n);
            let q = random_pauli(&mut rng, n);
            let r = random_pauli(&mut rng, n);
            assert_eq!(p.mul(&q).mul(&r), p.mul(&q.mul(&r)));
        }
    }

    #[test]
    fn commutator_phase_offset() {
        // pq and qp differ in kappa by exactly twice the symplectic pairing
        let mut rng = StdRng::seed_from_u64(43);
        for _ in 0..1000 {
            let n = rng.gen_range(1..=12);
            let p = random_pauli(&mut rng, n);
            let q = random_pauli(&mut rng, n);
            let pq = p.mul(&q);
            let qp = q.mul(&p);
            let offset = (pq.kappa() + 4 - qp.kappa()) % 4;
            assert_eq!(offset, 2 * p.symplectic_pairing(&q));
        }
    }

    #[test]
    fn inverse_cancels() {
        let mut rng = StdRng::seed_from_u64(47);
        for _ in 0..200 {
            let n = rng.gen_range(1..=12);
            let p = random_pauli(&mut rng, n);
            let prod = p.mul(&p.inverse());
            assert!(prod.is_trivial());
            assert_eq!(prod.kappa(), 0);
        }
    }

    #[test]
    fn parse_dense_and_sparse_agree() {
        let a = parse_pauli("IZIXYYZX", 8).unwrap();
        let b = parse_pauli("Z2 X4 Y5 Y6 Z7 X8", 8).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.kappa(), 0);
    }

    #[test]
    fn parse_phase_tokens() {
        assert_eq!(parse_pauli("-Z2 X3 Z5 X8", 8).unwrap().kappa(), 2);
        assert_eq!(parse_pauli("+i XZX", 3).unwrap().kappa(), 1);
        assert_eq!(parse_pauli("-i Y1", 4).unwrap().kappa(), 3);
        assert_eq!(parse_pauli("+XZX", 3).unwrap().kappa(), 0);
    }

    #[test]
    fn parse_identity_forms() {
        assert!(parse_pauli("I", 40).unwrap().is_trivial());
        assert!(parse_pauli("IIII", 4).unwrap().is_trivial());
        assert_eq!(parse_pauli("- I", 40).unwrap().kappa(), 2);
    }

    #[test]
    fn parse_rejects_malformed_input() {
        assert!(parse_pauli("XQZ", 3).is_err());
        assert!(parse_pauli("XZ", 3).is_err());
        assert!(parse_pauli("X8", 8).unwrap().x().get(8 - 1));
        assert!(parse_pauli("X9", 4).is_err());
        assert!(parse_pauli("X0", 4).is_err());
        assert!(parse_pauli("X2 Z2", 4).is_err());
        assert!(parse_pauli("I2", 4).is_err());
        assert!(parse_pauli("", 4).is_err());
    }

    #[test]
    fn format_round_trips() {
        let mut rng = StdRng::seed_from_u64(53);
        for _ in 0..500 {
            let n = if rng.gen_bool(0.5) { rng.gen_range(1..=32) } else { rng.gen_range(33..=80) };
            let p = random_pauli(&mut rng, n);
            let s = format_pauli(&p);
            let back = parse_pauli(&s, n).unwrap();
            assert_eq!(back, p, "round trip failed for {s:?}");
        }
    }

    #[test]
    fn symplectic_round_trip() {
        let mut rng = StdRng::seed_from_u64(59);
        for _ in 0..200 {
            let n = rng.gen_range(1..=40);
            let p = random_pauli(&mut rng, n);
            let v = p.to_symplectic();
            assert_eq!(PhasedPauli::from_symplectic(&v, p.kappa()), p);
        }
    }
}
