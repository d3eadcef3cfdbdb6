//! Syndrome decoders: an exact minimum-weight lookup table for small codes
//! and belief propagation with an ordered-statistics fallback for larger
//! ones.
//!
//! Both decoders honor the same hard contract: the returned correction
//! reproduces the input syndrome exactly, or the call fails. Whether the
//! correction also lands in the right logical coset is a separate question
//! answered by [`StabilizerCode::logical_effect`].
//!
//! Error variables are the `2n` bits `[x | z]` of a phaseless Pauli, so a Y
//! error is an X bit and a Z bit on the same qubit. The check matrix row
//! for stabilizer `S_i` is `[z_i | x_i]`; its product with `[x | z]` is the
//! symplectic pairing that [`StabilizerCode::syndrome`] measures.

use crate::code::StabilizerCode;
use crate::error::{Error, Result};
use crate::f2::{BitMatrix, BitVec};
use crate::pauli::PhasedPauli;

/// Tuning knobs shared by decoder constructors.
#[derive(Clone, Copy, Debug)]
pub struct DecoderConfig {
    /// Physical depolarizing rate assumed by the priors.
    pub prior_p: f64,
    /// Belief propagation iteration cap before the fallback runs.
    pub bp_max_iters: usize,
    /// Scaling factor applied to min-sum check messages.
    pub min_sum_scale: f64,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        DecoderConfig { prior_p: 1e-3, bp_max_iters: 30, min_sum_scale: 0.75 }
    }
}

// Syndromes are manipulated as u64 bit masks during table construction.
const MAX_LOOKUP_CHECKS: usize = 22;

/// Exact minimum-weight decoder: a table from every syndrome to a
/// lowest-weight error producing it, ties broken toward the
/// lexicographically smallest binary form in qubit order
/// ([`PhasedPauli::interleaved_bits`]).
#[derive(Clone, Debug)]
pub struct LookupDecoder {
    n: usize,
    n_checks: usize,
    table: Vec<PhasedPauli>,
}

// Syndrome mask of the single-qubit letter (x, z) at `qubit`: bit i set
// when the letter anticommutes with stabilizer i.
fn letter_masks(code: &StabilizerCode) -> Vec<[u64; 3]> {
    let mut masks = vec![[0u64; 3]; code.n()];
    for (i, s) in code.stabilizers().iter().enumerate() {
        for q in 0..code.n() {
            let (sx, sz) = (s.x().get(q), s.z().get(q));
            // order: X, Y, Z error letters
            let hits = [sz, sx ^ sz, sx];
            for (l, hit) in hits.into_iter().enumerate() {
                if hit {
                    masks[q][l] |= 1 << i;
                }
            }
        }
    }
    masks
}

fn pauli_from_letters(n: usize, letters: &[(usize, usize)]) -> PhasedPauli {
    let mut p = PhasedPauli::identity(n);
    for &(q, l) in letters {
        if l != 2 {
            p.x_mut_set(q, true);
        }
        if l != 0 {
            p.z_mut_set(q, true);
        }
    }
    p
}

impl LookupDecoder {
    pub fn new(code: &StabilizerCode) -> Result<Self> {
        let n = code.n();
        let n_checks = code.stabilizers().len();
        if n_checks > MAX_LOOKUP_CHECKS {
            return Err(Error::capacity(format!(
                "lookup decoding supports at most {MAX_LOOKUP_CHECKS} stabilizer \
                 generators, this code has {n_checks}"
            )));
        }
        let size = 1usize << n_checks;
        let masks = letter_masks(code);
        let mut table: Vec<Option<PhasedPauli>> = vec![None; size];
        table[0] = Some(PhasedPauli::identity(n));
        let mut filled = 1usize;
        // grow errors one weight level at a time; within a level keep the
        // lexicographically smallest representative per new syndrome
        let mut letters: Vec<(usize, usize)> = Vec::new();
        for weight in 1..=n {
            let mut pending: Vec<Option<PhasedPauli>> = vec![None; size];
            enumerate_level(&masks, n, weight, 0, 0, &mut letters, &mut |syn, letters| {
                let s = syn as usize;
                if table[s].is_some() {
                    return;
                }
                let cand = pauli_from_letters(n, letters);
                let better = match &pending[s] {
                    None => true,
                    Some(old) => {
                        cand.interleaved_bits().lex_cmp(&old.interleaved_bits())
                            == std::cmp::Ordering::Less
                    }
                };
                if better {
                    pending[s] = Some(cand);
                }
            });
            for (s, entry) in pending.into_iter().enumerate() {
                if let Some(e) = entry {
                    debug_assert!(table[s].is_none());
                    table[s] = Some(e);
                    filled += 1;
                }
            }
            if filled == size {
                break;
            }
        }
        let table: Option<Vec<PhasedPauli>> = table.into_iter().collect();
        // independent generators make every syndrome reachable
        let table =
            table.ok_or_else(|| Error::internal("lookup table has unreachable syndromes"))?;
        Ok(LookupDecoder { n, n_checks, table })
    }

    pub fn decode(&self, syndrome: &BitVec) -> Result<PhasedPauli> {
        if syndrome.len() != self.n_checks {
            return Err(Error::invalid(format!(
                "syndrome has {} bits, decoder expects {}",
                syndrome.len(),
                self.n_checks
            )));
        }
        Ok(self.table[syndrome.as_u64() as usize].clone())
    }

    /// Table entry by raw syndrome bits, lowest stabilizer index first.
    pub fn entry(&self, syndrome: usize) -> &PhasedPauli {
        &self.table[syndrome]
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn n_checks(&self) -> usize {
        self.n_checks
    }
}

// Visit every error of exactly `weight` letters on qubits >= `start`,
// carrying the incremental syndrome mask.
fn enumerate_level(
    masks: &[[u64; 3]],
    n: usize,
    weight: usize,
    start: usize,
    syndrome: u64,
    letters: &mut Vec<(usize, usize)>,
    visit: &mut impl FnMut(u64, &[(usize, usize)]),
) {
    if weight == 0 {
        visit(syndrome, letters);
        return;
    }
    // not enough qubits left to place the remaining letters
    if start + weight > n {
        return;
    }
    for q in start..=(n - weight) {
        for l in 0..3 {
            letters.push((q, l));
            enumerate_level(masks, n, weight - 1, q + 1, syndrome ^ masks[q][l], letters, visit);
            letters.pop();
        }
    }
}

/// Min-sum belief propagation over the symplectic Tanner graph, falling back
/// to an ordered-statistics (order 0) solve when it does not converge.
#[derive(Clone, Debug)]
pub struct BpOsdDecoder {
    n: usize,
    rows: Vec<BitVec>,
    check_vars: Vec<Vec<usize>>,
    var_checks: Vec<Vec<(usize, usize)>>,
    prior_llr: f64,
    max_iters: usize,
    scale: f64,
}

impl BpOsdDecoder {
    pub fn new(code: &StabilizerCode, config: DecoderConfig) -> Result<Self> {
        if !(config.prior_p > 0.0 && config.prior_p < 0.75) {
            return Err(Error::invalid(format!(
                "prior error rate must lie in (0, 0.75), got {}",
                config.prior_p
            )));
        }
        if !(config.min_sum_scale > 0.0 && config.min_sum_scale <= 1.0) {
            return Err(Error::invalid(format!(
                "min-sum scale must lie in (0, 1], got {}",
                config.min_sum_scale
            )));
        }
        let n = code.n();
        let rows: Vec<BitVec> = code.stabilizers().iter().map(|s| s.z().concat(s.x())).collect();
        let check_vars: Vec<Vec<usize>> = rows.iter().map(|r| r.ones().collect()).collect();
        let mut var_checks = vec![Vec::new(); 2 * n];
        for (c, vars) in check_vars.iter().enumerate() {
            for (slot, &v) in vars.iter().enumerate() {
                var_checks[v].push((c, slot));
            }
        }
        // depolarizing channel: each of the 2n bits flips with rate 2p/3
        let q = 2.0 * config.prior_p / 3.0;
        Ok(BpOsdDecoder {
            n,
            rows,
            check_vars,
            var_checks,
            prior_llr: ((1.0 - q) / q).ln(),
            max_iters: config.bp_max_iters,
            scale: config.min_sum_scale,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn n_checks(&self) -> usize {
        self.rows.len()
    }

    fn reproduces(&self, e: &BitVec, syndrome: &BitVec) -> bool {
        self.rows.iter().enumerate().all(|(c, row)| (row.dot(e) == 1) == syndrome.get(c))
    }

    pub fn decode(&self, syndrome: &BitVec) -> Result<PhasedPauli> {
        if syndrome.len() != self.rows.len() {
            return Err(Error::invalid(format!(
                "syndrome has {} bits, decoder expects {}",
                syndrome.len(),
                self.rows.len()
            )));
        }
        let nv = 2 * self.n;
        let mut msg_vc: Vec<Vec<f64>> =
            self.check_vars.iter().map(|vars| vec![self.prior_llr; vars.len()]).collect();
        let mut msg_cv: Vec<Vec<f64>> =
            self.check_vars.iter().map(|vars| vec![0.0; vars.len()]).collect();
        let mut posterior = vec![self.prior_llr; nv];
        for iter in 0..=self.max_iters {
            let mut e = BitVec::zeros(nv);
            for v in 0..nv {
                if posterior[v] < 0.0 {
                    e.set(v, true);
                }
            }
            if self.reproduces(&e, syndrome) {
                return self.finish(e, syndrome);
            }
            if iter == self.max_iters {
                break;
            }
            // check update: scaled min-sum with the syndrome sign folded in
            for (c, vars) in self.check_vars.iter().enumerate() {
                let sign0 = if syndrome.get(c) { -1.0 } else { 1.0 };
                let mut total_sign = sign0;
                let (mut min1, mut min2, mut argmin) = (f64::INFINITY, f64::INFINITY, 0);
                for (slot, _) in vars.iter().enumerate() {
                    let m = msg_vc[c][slot];
                    if m < 0.0 {
                        total_sign = -total_sign;
                    }
                    let a = m.abs();
                    if a < min1 {
                        min2 = min1;
                        min1 = a;
                        argmin = slot;
                    } else if a < min2 {
                        min2 = a;
                    }
                }
                for (slot, _) in vars.iter().enumerate() {
                    let m = msg_vc[c][slot];
                    let sign = if m < 0.0 { -total_sign } else { total_sign };
                    let mag = if slot == argmin { min2 } else { min1 };
                    let mag = if mag.is_finite() { mag } else { 1e12 };
                    msg_cv[c][slot] = sign * self.scale * mag;
                }
            }
            // variable update and fresh posteriors
            for v in 0..nv {
                let total: f64 = self.prior_llr
                    + self.var_checks[v].iter().map(|&(c, slot)| msg_cv[c][slot]).sum::<f64>();
                posterior[v] = total;
                for &(c, slot) in &self.var_checks[v] {
                    msg_vc[c][slot] = total - msg_cv[c][slot];
                }
            }
        }
        let e = self.osd0(syndrome, &posterior)?;
        self.finish(e, syndrome)
    }

    // Order-0 ordered statistics: solve the syndrome on the most suspect
    // linearly independent columns, everything else zero.
    fn osd0(&self, syndrome: &BitVec, posterior: &[f64]) -> Result<BitVec> {
        let nv = 2 * self.n;
        let mut order: Vec<usize> = (0..nv).collect();
        order.sort_by(|&a, &b| posterior[a].partial_cmp(&posterior[b]).unwrap().then(a.cmp(&b)));
        let mut rows: Vec<(BitVec, bool)> =
            self.rows.iter().enumerate().map(|(c, r)| (r.clone(), syndrome.get(c))).collect();
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut r = 0;
        for &col in &order {
            if r == rows.len() {
                break;
            }
            let Some(p) = (r..rows.len()).find(|&i| rows[i].0.get(col)) else { continue };
            rows.swap(r, p);
            let (pivot_row, pivot_syn) = rows[r].clone();
            for (i, (row, syn)) in rows.iter_mut().enumerate() {
                if i != r && row.get(col) {
                    row.xor_assign(&pivot_row);
                    *syn ^= pivot_syn;
                }
            }
            pivots.push((r, col));
            r += 1;
        }
        if r < rows.len() {
            // full-rank generator sets never reach this
            return Err(Error::internal("check matrix lost rank during elimination"));
        }
        let mut e = BitVec::zeros(nv);
        for &(row, col) in &pivots {
            if rows[row].1 {
                e.set(col, true);
            }
        }
        Ok(e)
    }

    fn finish(&self, e: BitVec, syndrome: &BitVec) -> Result<PhasedPauli> {
        if !self.reproduces(&e, syndrome) {
            return Err(Error::internal("decoded correction does not reproduce the syndrome"));
        }
        let x = e.slice(0, self.n);
        let z = e.slice(self.n, self.n);
        Ok(PhasedPauli::from_xz(x, z, 0))
    }
}

/// Either decoder behind one `decode` call.
#[derive(Clone, Debug)]
pub enum Decoder {
    Lookup(LookupDecoder),
    BpOsd(BpOsdDecoder),
}

impl Decoder {
    pub fn lookup(code: &StabilizerCode) -> Result<Decoder> {
        Ok(Decoder::Lookup(LookupDecoder::new(code)?))
    }

    pub fn bp_osd(code: &StabilizerCode, config: DecoderConfig) -> Result<Decoder> {
        Ok(Decoder::BpOsd(BpOsdDecoder::new(code, config)?))
    }

    pub fn decode(&self, syndrome: &BitVec) -> Result<PhasedPauli> {
        match self {
            Decoder::Lookup(d) => d.decode(syndrome),
            Decoder::BpOsd(d) => d.decode(syndrome),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Decoder::Lookup(_) => "lookup",
            Decoder::BpOsd(_) => "bp-osd",
        }
    }
}

/// Parse a sparse binary matrix given as one row per line, each row a
/// whitespace-separated list of 0-based column indices. `#` starts a
/// comment, blank lines are skipped, and an optional leading `cols=<n>`
/// line fixes the column count (otherwise it is one past the largest
/// index seen).
pub fn parse_check_matrix(input: &str) -> Result<BitMatrix> {
    let mut declared_cols: Option<usize> = None;
    let mut rows: Vec<Vec<usize>> = Vec::new();
    let mut max_index: Option<usize> = None;
    for (ln, raw) in input.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("cols=") {
            if declared_cols.is_some() || !rows.is_empty() {
                return Err(Error::parse(format!(
                    "line {}: cols= must appear once, before any row",
                    ln + 1
                )));
            }
            declared_cols = Some(
                rest.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::parse(format!("line {}: bad column count", ln + 1)))?,
            );
            continue;
        }
        let mut row = Vec::new();
        for tok in line.split_whitespace() {
            let idx: usize = tok
                .parse()
                .map_err(|_| Error::parse(format!("line {}: bad column index {tok:?}", ln + 1)))?;
            if let Some(c) = declared_cols {
                if idx >= c {
                    return Err(Error::parse(format!(
                        "line {}: column {idx} out of range for cols={c}",
                        ln + 1
                    )));
                }
            }
            max_index = Some(max_index.map_or(idx, |m: usize| m.max(idx)));
            row.push(idx);
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::parse("check matrix has no rows"));
    }
    let n_cols = match (declared_cols, max_index) {
        (Some(c), _) => c,
        (None, Some(m)) => m + 1,
        (None, None) => return Err(Error::parse("check matrix has no column indices")),
    };
    let mut m = BitMatrix::zeros(rows.len(), n_cols);
    for (r, row) in rows.iter().enumerate() {
        for &c in row {
            m.set(r, c, true);
        }
    }
    Ok(m)
}
