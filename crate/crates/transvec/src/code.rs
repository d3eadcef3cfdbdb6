//! Stabilizer codes: validation, logical operator lifting, syndromes, and
//! constructions (CSS from check matrices, lifted products of circulant
//! polynomial matrices).
//!
//! A code is n−k stabilizer generators plus k anticommuting logical pairs,
//! all Hermitian phased Paulis on n qubits. `lift` embeds a k-qubit logical
//! Pauli as its physical representative through the logical generators and
//! is an exact group homomorphism: `lift(p·q) = lift(p)·lift(q)` including
//! the i^kappa phase. That identity is what lets the conjugation engine
//! compare physical circuit action against logical expectations term by
//! term without any phase bookkeeping at the call sites.

use crate::error::{Error, Result};
use crate::f2::{BitMatrix, BitVec, Echelon};
use crate::pauli::{format_pauli, parse_pauli, PhasedPauli};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::Path;

/// One failed code invariant, machine-checkable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    /// Generator counts or qubit counts disagree with the header.
    LengthMismatch { what: String },
    /// A generator carries an odd phase exponent and is not Hermitian.
    NonHermitian { which: String },
    /// Two stabilizer generators anticommute.
    StabilizersAnticommute { i: usize, j: usize },
    /// The stabilizer generators are linearly dependent.
    RankDeficient { rank: usize, expected: usize },
    /// A logical generator anticommutes with a stabilizer.
    LogicalHitsStabilizer { logical: String, stabilizer: usize },
    /// Wrong symplectic pairing between logical X_i and Z_j.
    BadLogicalPairing { i: usize, j: usize, expected: u8, got: u8 },
    /// Two logicals of the same type anticommute.
    LogicalsAnticommute { a: String, b: String },
    /// A logical generator lies in the stabilizer span and acts trivially.
    LogicalInStabilizerSpan { logical: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::LengthMismatch { what } => write!(f, "length mismatch: {what}"),
            Violation::NonHermitian { which } => {
                write!(f, "{which} has an odd phase exponent and is not Hermitian")
            }
            Violation::StabilizersAnticommute { i, j } => {
                write!(f, "stabilizers S{} and S{} anticommute", i + 1, j + 1)
            }
            Violation::RankDeficient { rank, expected } => {
                write!(f, "stabilizer generators have rank {rank}, expected {expected}")
            }
            Violation::LogicalHitsStabilizer { logical, stabilizer } => {
                write!(f, "logical {logical} anticommutes with stabilizer S{}", stabilizer + 1)
            }
            Violation::BadLogicalPairing { i, j, expected, got } => write!(
                f,
                "pairing of logical X{} with Z{} is {got}, expected {expected}",
                i + 1,
                j + 1
            ),
            Violation::LogicalsAnticommute { a, b } => {
                write!(f, "logicals {a} and {b} anticommute")
            }
            Violation::LogicalInStabilizerSpan { logical } => {
                write!(f, "logical {logical} lies in the stabilizer span")
            }
        }
    }
}

/// An [[n, k]] stabilizer code with a fixed choice of logical generators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilizerCode {
    n: usize,
    k: usize,
    stabilizers: Vec<PhasedPauli>,
    logical_x: Vec<PhasedPauli>,
    logical_z: Vec<PhasedPauli>,
    pub name: Option<String>,
    pub distance: Option<usize>,
}

impl StabilizerCode {
    /// Build and validate; all invariant violations are reported at once.
    pub fn from_parts(
        stabilizers: Vec<PhasedPauli>,
        logical_x: Vec<PhasedPauli>,
        logical_z: Vec<PhasedPauli>,
    ) -> Result<Self> {
        let code = Self::from_parts_unvalidated(stabilizers, logical_x, logical_z)?;
        let violations = code.validate();
        if violations.is_empty() {
            Ok(code)
        } else {
            Err(Error::Validation(violations.iter().map(Violation::to_string).collect()))
        }
    }

    /// Build without running the invariant checks (so that [`Self::validate`]
    /// can report on a broken code instead of refusing to construct it).
    /// Requires only structural consistency: at least one stabilizer, equal
    /// logical counts, one common qubit count, n = k + #stabilizers.
    pub fn from_parts_unvalidated(
        stabilizers: Vec<PhasedPauli>,
        logical_x: Vec<PhasedPauli>,
        logical_z: Vec<PhasedPauli>,
    ) -> Result<Self> {
        let first = stabilizers
            .first()
            .or(logical_x.first())
            .ok_or_else(|| Error::invalid("a code needs at least one generator"))?;
        let n = first.n();
        if logical_x.len() != logical_z.len() {
            return Err(Error::invalid(format!(
                "{} logical X generators but {} logical Z",
                logical_x.len(),
                logical_z.len()
            )));
        }
        let k = logical_x.len();
        if stabilizers.len() + k != n {
            return Err(Error::invalid(format!(
                "{} stabilizers with {k} logical pairs cannot define an [[{n}, {k}]] code",
                stabilizers.len()
            )));
        }
        for p in stabilizers.iter().chain(&logical_x).chain(&logical_z) {
            if p.n() != n {
                return Err(Error::invalid(format!(
                    "generator {p} acts on {} qubits, expected {n}",
                    p.n()
                )));
            }
        }
        Ok(StabilizerCode { n, k, stabilizers, logical_x, logical_z, name: None, distance: None })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn with_distance(mut self, d: usize) -> Self {
        self.distance = Some(d);
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn stabilizers(&self) -> &[PhasedPauli] {
        &self.stabilizers
    }

    pub fn logical_x(&self) -> &[PhasedPauli] {
        &self.logical_x
    }

    pub fn logical_z(&self) -> &[PhasedPauli] {
        &self.logical_z
    }

    /// All violated invariants, empty for a well-formed code.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let m = self.stabilizers.len();
        for (label, p) in self.named_generators() {
            if p.kappa() % 2 == 1 {
                out.push(Violation::NonHermitian { which: label });
            }
        }
        for i in 0..m {
            for j in i + 1..m {
                if !self.stabilizers[i].commutes_with(&self.stabilizers[j]) {
                    out.push(Violation::StabilizersAnticommute { i, j });
                }
            }
        }
        let ech = self.stab_echelon();
        if ech.rank() != m {
            out.push(Violation::RankDeficient { rank: ech.rank(), expected: m });
        }
        let logicals =
            || {
                self.logical_x.iter().enumerate().map(|(i, p)| (format!("X{}", i + 1), p)).chain(
                    self.logical_z.iter().enumerate().map(|(i, p)| (format!("Z{}", i + 1), p)),
                )
            };
        for (label, p) in logicals() {
            for (si, s) in self.stabilizers.iter().enumerate() {
                if !p.commutes_with(s) {
                    out.push(Violation::LogicalHitsStabilizer {
                        logical: label.clone(),
                        stabilizer: si,
                    });
                }
            }
            if ech.contains(&p.to_symplectic()) {
                out.push(Violation::LogicalInStabilizerSpan { logical: label.clone() });
            }
        }
        for i in 0..self.k {
            for j in 0..self.k {
                let expected = u8::from(i == j);
                let got = self.logical_x[i].symplectic_pairing(&self.logical_z[j]);
                if got != expected {
                    out.push(Violation::BadLogicalPairing { i, j, expected, got });
                }
            }
        }
        for gens in [&self.logical_x, &self.logical_z] {
            for i in 0..self.k {
                for j in i + 1..self.k {
                    if !gens[i].commutes_with(&gens[j]) {
                        let t = if std::ptr::eq(gens, &self.logical_x) { "X" } else { "Z" };
                        out.push(Violation::LogicalsAnticommute {
                            a: format!("{t}{}", i + 1),
                            b: format!("{t}{}", j + 1),
                        });
                    }
                }
            }
        }
        out
    }

    fn named_generators(&self) -> impl Iterator<Item = (String, &PhasedPauli)> {
        self.stabilizers
            .iter()
            .enumerate()
            .map(|(i, p)| (format!("S{}", i + 1), p))
            .chain(self.logical_x.iter().enumerate().map(|(i, p)| (format!("X{}", i + 1), p)))
            .chain(self.logical_z.iter().enumerate().map(|(i, p)| (format!("Z{}", i + 1), p)))
    }

    /// Stabilizer generators as `[x|z]` rows.
    pub fn stab_matrix(&self) -> BitMatrix {
        BitMatrix::from_rows(self.stabilizers.iter().map(PhasedPauli::to_symplectic).collect())
    }

    /// Row reduction of [`Self::stab_matrix`], for repeated membership solves.
    pub fn stab_echelon(&self) -> Echelon {
        self.stab_matrix().echelon()
    }

    /// Physical representative of a k-qubit logical Pauli.
    ///
    /// `i^kappa E(x, z)` maps to `i^(kappa + x·z) · ∏ X̄_i^(x_i) · ∏ Z̄_i^(z_i)`
    /// (both products in ascending order); the `x·z` term cancels the
    /// intrinsic Y factors so the map is an exact homomorphism.
    pub fn lift(&self, logical: &PhasedPauli) -> Result<PhasedPauli> {
        if logical.n() != self.k {
            return Err(Error::invalid(format!(
                "logical operator acts on {} qubits but the code encodes {}",
                logical.n(),
                self.k
            )));
        }
        let overlap: usize = logical
            .x()
            .words()
            .iter()
            .zip(logical.z().words())
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum();
        let kappa = (logical.kappa() as usize + overlap) % 4;
        let mut acc = PhasedPauli::identity(self.n).with_kappa(kappa as u8);
        for i in logical.x().ones() {
            acc = acc.mul(&self.logical_x[i]);
        }
        for i in logical.z().ones() {
            acc = acc.mul(&self.logical_z[i]);
        }
        Ok(acc)
    }

    /// Syndrome of a physical error: bit i is 1 iff `e` anticommutes with
    /// stabilizer i.
    pub fn syndrome(&self, e: &PhasedPauli) -> BitVec {
        let mut s = BitVec::zeros(self.stabilizers.len());
        for (i, g) in self.stabilizers.iter().enumerate() {
            if e.symplectic_pairing(g) == 1 {
                s.set(i, true);
            }
        }
        s
    }

    /// Classify a physical error by its action on the code space.
    ///
    /// The logical class is read off from symplectic pairings: the X̄_j
    /// component of `e` is its pairing with Z̄_j, the Z̄_j component its
    /// pairing with X̄_j.
    pub fn logical_effect(&self, e: &PhasedPauli) -> LogicalEffect {
        if !self.syndrome(e).is_zero() {
            return LogicalEffect::Detectable;
        }
        let mut x = BitVec::zeros(self.k);
        let mut z = BitVec::zeros(self.k);
        for j in 0..self.k {
            if e.symplectic_pairing(&self.logical_z[j]) == 1 {
                x.set(j, true);
            }
            if e.symplectic_pairing(&self.logical_x[j]) == 1 {
                z.set(j, true);
            }
        }
        if x.is_zero() && z.is_zero() {
            LogicalEffect::Trivial
        } else {
            LogicalEffect::Logical(PhasedPauli::from_xz(x, z, 0))
        }
    }

    /// Text form; inverse of [`parse_code_text`].
    pub fn to_text(&self) -> String {
        let mut out = format!("code n={} k={}", self.n, self.k);
        if let Some(d) = self.distance {
            out.push_str(&format!(" d={d}"));
        }
        if let Some(name) = &self.name {
            out.push_str(&format!(" name={name}"));
        }
        out.push('\n');
        for s in &self.stabilizers {
            out.push_str(&format!("S {}\n", format_pauli(s)));
        }
        for x in &self.logical_x {
            out.push_str(&format!("X {}\n", format_pauli(x)));
        }
        for z in &self.logical_z {
            out.push_str(&format!("Z {}\n", format_pauli(z)));
        }
        out
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

/// Unencoded classification of an error acting on a code.
#[derive(Clone, Debug, PartialEq)]
pub enum LogicalEffect {
    /// Anticommutes with some stabilizer: visible in the syndrome.
    Detectable,
    /// In the stabilizer group (up to phase): acts as identity on the code space.
    Trivial,
    /// Undetectable and acting as this k-qubit logical Pauli class.
    Logical(PhasedPauli),
}

/// Parse the code text format without validating the code invariants.
///
/// Format: a `code n=<n> k=<k> [d=<d>] [name=<token>]` header, then `S`,
/// `X`, `Z` lines each carrying one Pauli string; `#` starts a comment.
/// Generator counts must match the header (n−k stabilizers, k of each
/// logical type).
pub fn parse_code_text(text: &str) -> Result<StabilizerCode> {
    let mut header: Option<(usize, usize, Option<usize>, Option<String>)> = None;
    let mut stabilizers = Vec::new();
    let mut logical_x = Vec::new();
    let mut logical_z = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::parse(format!("line {}: {msg}", lineno + 1));
        if header.is_none() {
            let mut tokens = line.split_whitespace();
            if tokens.next() != Some("code") {
                return Err(err(format!("expected 'code n=<n> k=<k>' header, found {line:?}")));
            }
            let (mut n, mut k, mut d, mut name) = (None, None, None, None);
            for tok in tokens {
                let (key, value) =
                    tok.split_once('=').ok_or_else(|| err(format!("bad header token {tok:?}")))?;
                match key {
                    "n" => n = Some(value.parse().map_err(|_| err(format!("bad n {value:?}")))?),
                    "k" => k = Some(value.parse().map_err(|_| err(format!("bad k {value:?}")))?),
                    "d" => d = Some(value.parse().map_err(|_| err(format!("bad d {value:?}")))?),
                    "name" => name = Some(value.to_string()),
                    _ => return Err(err(format!("unknown header key {key:?}"))),
                }
            }
            let n = n.ok_or_else(|| err("header missing n=<n>".into()))?;
            let k = k.ok_or_else(|| err("header missing k=<k>".into()))?;
            if k > n {
                return Err(err(format!("k={k} exceeds n={n}")));
            }
            header = Some((n, k, d, name));
            continue;
        }
        let (n, _, _, _) = *header.as_ref().unwrap();
        let (tag, body) = line
            .split_once(char::is_whitespace)
            .ok_or_else(|| err(format!("expected '<tag> <pauli>', found {line:?}")))?;
        let p = parse_pauli(body, n).map_err(|e| err(e.to_string()))?;
        match tag {
            "S" => stabilizers.push(p),
            "X" => logical_x.push(p),
            "Z" => logical_z.push(p),
            _ => return Err(err(format!("unknown generator tag {tag:?}"))),
        }
    }
    let (n, k, d, name) = header.ok_or_else(|| Error::parse("missing code header"))?;
    if stabilizers.len() != n - k {
        return Err(Error::parse(format!(
            "expected {} stabilizer lines for an [[{n}, {k}]] code, found {}",
            n - k,
            stabilizers.len()
        )));
    }
    if logical_x.len() != k || logical_z.len() != k {
        return Err(Error::parse(format!(
            "expected {k} X lines and {k} Z lines, found {} and {}",
            logical_x.len(),
            logical_z.len()
        )));
    }
    let mut code = StabilizerCode::from_parts_unvalidated(stabilizers, logical_x, logical_z)?;
    code.distance = d;
    code.name = name;
    Ok(code)
}

/// Load and validate a code file.
pub fn load_code(path: impl AsRef<Path>) -> Result<StabilizerCode> {
    let code = load_code_unvalidated(&path)?;
    let violations = code.validate();
    if violations.is_empty() {
        Ok(code)
    } else {
        Err(Error::Validation(violations.iter().map(Violation::to_string).collect()))
    }
}

/// Load a code file without the invariant checks, for inspection tooling.
pub fn load_code_unvalidated(path: impl AsRef<Path>) -> Result<StabilizerCode> {
    let text = std::fs::read_to_string(&path)?;
    parse_code_text(&text)
}

/// The non-CSS [[8,3,3]] code used throughout the tests and examples.
pub fn builtin_833() -> StabilizerCode {
    let parse = |s: &str| parse_pauli(s, 8).unwrap();
    let stabilizers = vec![
        parse("XXXXXXXX"),
        parse("ZZZZZZZZ"),
        parse("Z3 Y4 X5 Z6 Y7 X8"),
        parse("Z2 X3 X5 Y6 Z7 Y8"),
        parse("X2 Z4 Z5 X6 Y7 Y8"),
    ];
    let logical_x = vec![parse("X4 X5 X7 X8"), parse("X3 Z4 Z5 X6"), parse("Z1 Z2 X6 X7")];
    let logical_z = vec![parse("Z2 X3 Z5 X8"), parse("Z1 Z5 Z6 Z7"), parse("Z1 Z2 Z4 Z7")];
    StabilizerCode::from_parts(stabilizers, logical_x, logical_z)
        .expect("the built-in [[8,3,3]] table is valid")
        .with_name("833")
        .with_distance(3)
}

/// Look up a built-in code by name.
pub fn builtin(name: &str) -> Option<StabilizerCode> {
    match name {
        "833" | "[[8,3,3]]" => Some(builtin_833()),
        _ => None,
    }
}

// Incremental GF(2) elimination basis: insert returns false when the vector
// is already in the span.
struct IncrementalBasis {
    rows: Vec<(usize, BitVec)>,
}

impl IncrementalBasis {
    fn new() -> Self {
        IncrementalBasis { rows: Vec::new() }
    }

    fn reduce(&self, v: &BitVec) -> BitVec {
        let mut r = v.clone();
        for (pivot, row) in &self.rows {
            if r.get(*pivot) {
                r.xor_assign(row);
            }
        }
        r
    }

    fn insert(&mut self, v: &BitVec) -> bool {
        let r = self.reduce(v);
        let pivot = r.ones().next();
        match pivot {
            Some(pivot) => {
                self.rows.push((pivot, r));
                true
            }
            None => false,
        }
    }
}

/// Build a CSS code from X- and Z-type parity check matrices.
///
/// Rows of `hx` become X-type stabilizers, rows of `hz` Z-type; every X row
/// must be orthogonal to every Z row. Dependent rows are dropped (keeping
/// the earliest independent subset), k = n − rank(hx) − rank(hz), and the
/// logical pairs are read from the kernel quotients and biorthogonalized so
/// that the pairing matrix is exactly the identity.
pub fn from_css_checks(
    hx: &BitMatrix,
    hz: &BitMatrix,
    name: Option<String>,
) -> Result<StabilizerCode> {
    let n = hx.n_cols();
    if hz.n_cols() != n {
        return Err(Error::invalid(format!(
            "check matrices disagree on qubit count: {} vs {}",
            n,
            hz.n_cols()
        )));
    }
    if n == 0 {
        return Err(Error::invalid("check matrices have no columns"));
    }
    for (i, xr) in hx.rows().iter().enumerate() {
        for (j, zr) in hz.rows().iter().enumerate() {
            if xr.dot(zr) == 1 {
                return Err(Error::invalid(format!(
                    "hx row {i} and hz row {j} are not orthogonal"
                )));
            }
        }
    }
    let keep_independent = |m: &BitMatrix| -> Vec<BitVec> {
        let mut basis = IncrementalBasis::new();
        m.rows().iter().filter(|r| basis.insert(r)).cloned().collect()
    };
    let x_rows = keep_independent(hx);
    let z_rows = keep_independent(hz);
    let (rx, rz) = (x_rows.len(), z_rows.len());
    if rx + rz > n {
        return Err(Error::invalid(format!("check ranks {rx} + {rz} exceed {n} qubits")));
    }
    let k = n - rx - rz;

    // Logical X candidates: kernel of hz modulo the row space of hx.
    let quotient = |kernel_of: &[BitVec], modulo: &[BitVec]| -> Vec<BitVec> {
        let kernel = BitMatrix::from_rows(kernel_of.to_vec()).kernel_basis();
        let mut basis = IncrementalBasis::new();
        for r in modulo {
            basis.insert(r);
        }
        kernel.into_iter().filter(|v| basis.insert(v)).collect()
    };
    let ux = quotient(&z_rows, &x_rows);
    let wz = quotient(&x_rows, &z_rows);
    if ux.len() != k || wz.len() != k {
        return Err(Error::internal(format!(
            "logical quotient dimensions {} and {} disagree with k={k}",
            ux.len(),
            wz.len()
        )));
    }

    // Biorthogonalize: with G[i][j] = ux_i · wz_j, replace wz_j by
    // Σ_m G⁻¹[m][j] wz_m so the pairing becomes the identity.
    let mut g = BitMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            if ux[i].dot(&wz[j]) == 1 {
                g.set(i, j, true);
            }
        }
    }
    let ginv = g
        .inverse()
        .ok_or_else(|| Error::internal("degenerate logical pairing in CSS construction"))?;
    let wz_fixed: Vec<BitVec> = (0..k)
        .map(|j| {
            let mut acc = BitVec::zeros(n);
            for m in 0..k {
                if ginv.get(m, j) {
                    acc.xor_assign(&wz[m]);
                }
            }
            acc
        })
        .collect();

    let x_pauli = |v: &BitVec| PhasedPauli::from_xz(v.clone(), BitVec::zeros(n), 0);
    let z_pauli = |v: &BitVec| PhasedPauli::from_xz(BitVec::zeros(n), v.clone(), 0);
    let stabilizers: Vec<PhasedPauli> =
        x_rows.iter().map(x_pauli).chain(z_rows.iter().map(z_pauli)).collect();
    let logical_x: Vec<PhasedPauli> = ux.iter().map(x_pauli).collect();
    let logical_z: Vec<PhasedPauli> = wz_fixed.iter().map(z_pauli).collect();
    let mut code = StabilizerCode::from_parts(stabilizers, logical_x, logical_z)?;
    code.name = name;
    Ok(code)
}

/// Matrix over the circulant ring F2[x]/(x^L − 1), entries as exponent sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    n_rows: usize,
    n_cols: usize,
    lift: usize,
    entries: Vec<Vec<Vec<usize>>>,
}

impl PolyMatrix {
    /// Zero matrix over F2[x]/(x^lift − 1).
    pub fn new(n_rows: usize, n_cols: usize, lift: usize) -> Result<Self> {
        if lift == 0 {
            return Err(Error::invalid("circulant size must be positive"));
        }
        Ok(PolyMatrix { n_rows, n_cols, lift, entries: vec![vec![Vec::new(); n_cols]; n_rows] })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn lift(&self) -> usize {
        self.lift
    }

    /// Set entry (r, c) to `Σ x^e` over the given exponents; pairs of equal
    /// exponents cancel mod 2.
    pub fn set_entry(&mut self, r: usize, c: usize, exponents: &[usize]) -> Result<()> {
        if r >= self.n_rows || c >= self.n_cols {
            return Err(Error::invalid(format!("entry ({r}, {c}) out of range")));
        }
        let mut exps: Vec<usize> = exponents.iter().map(|e| e % self.lift).collect();
        exps.sort_unstable();
        let mut out = Vec::new();
        for e in exps {
            if out.last() == Some(&e) {
                out.pop();
            } else {
                out.push(e);
            }
        }
        self.entries[r][c] = out;
        Ok(())
    }

    pub fn entry(&self, r: usize, c: usize) -> &[usize] {
        &self.entries[r][c]
    }

    /// Transpose with the ring antipode `x^e → x^(L−e)` applied entrywise.
    pub fn transpose_antipode(&self) -> PolyMatrix {
        let mut out = PolyMatrix::new(self.n_cols, self.n_rows, self.lift).unwrap();
        for r in 0..self.n_rows {
            for c in 0..self.n_cols {
                let conj: Vec<usize> =
                    self.entries[r][c].iter().map(|&e| (self.lift - e) % self.lift).collect();
                out.set_entry(c, r, &conj).unwrap();
            }
        }
        out
    }

    /// Expand every entry into an L×L circulant block: `x^e` contributes
    /// bit (i, j) for every j ≡ i + e (mod L).
    pub fn expand(&self) -> BitMatrix {
        let l = self.lift;
        let mut m = BitMatrix::zeros(self.n_rows * l, self.n_cols * l);
        for r in 0..self.n_rows {
            for c in 0..self.n_cols {
                for &e in &self.entries[r][c] {
                    for i in 0..l {
                        m.set(r * l + i, c * l + (i + e) % l, true);
                    }
                }
            }
        }
        m
    }
}

/// Lifted-product CSS code of two polynomial matrices over a shared
/// circulant ring.
///
/// With `a` of shape ma×na and `b` of shape mb×nb, the X checks are
/// `[a ⊗ I | I ⊗ b]` and the Z checks `[I ⊗ bᵀ* | aᵀ* ⊗ I]` (antipode
/// transposes), expanded to binary circulants over n = L·(na·mb + ma·nb)
/// qubits. Orthogonality holds because each product entry appears once
/// plainly and once conjugated-commuted, cancelling mod 2.
pub fn lifted_product(
    a: &PolyMatrix,
    b: &PolyMatrix,
    name: Option<String>,
) -> Result<StabilizerCode> {
    if a.lift() != b.lift() {
        return Err(Error::invalid(format!(
            "circulant sizes differ: {} vs {}",
            a.lift(),
            b.lift()
        )));
    }
    let (ma, na) = (a.n_rows(), a.n_cols());
    let (mb, nb) = (b.n_rows(), b.n_cols());
    let cols = na * mb + ma * nb;
    let mut hx = PolyMatrix::new(ma * mb, cols, a.lift())?;
    for i in 0..ma {
        for r in 0..mb {
            let row = i * mb + r;
            for j in 0..na {
                hx.set_entry(row, j * mb + r, a.entry(i, j))?;
            }
            for s in 0..nb {
                hx.set_entry(row, na * mb + i * nb + s, b.entry(r, s))?;
            }
        }
    }
    let a_conj = a.transpose_antipode();
    let b_conj = b.transpose_antipode();
    let mut hz = PolyMatrix::new(na * nb, cols, a.lift())?;
    for j in 0..na {
        for s in 0..nb {
            let row = j * nb + s;
            for r in 0..mb {
                hz.set_entry(row, j * mb + r, b_conj.entry(s, r))?;
            }
            for i in 0..ma {
                hz.set_entry(row, na * mb + i * nb + s, a_conj.entry(j, i))?;
            }
        }
    }
    from_css_checks(&hx.expand(), &hz.expand(), name)
}
