//! Gate-level circuit IR and the one-rotation synthesis routine.
//!
//! A Trotter circuit for `exp(-i θ/2 P)` has the fixed shape: basis changes
//! taking every X component to Z (H) and every Y component to Z (Hy), a CNOT
//! fan-in from the support into its highest-index qubit, one Z rotation
//! there, then the mirror image. The rotation gate is the Phase gate exactly
//! when the effective angle is π/2, which keeps Clifford instances
//! recognizable downstream.
//!
//! Angles are plain radians; an `Rz` whose angle is an exact integer
//! multiple of π/2 is still a Clifford gate and every consumer in this crate
//! detects that case via [`quarter_turns`].

use crate::code::StabilizerCode;
use crate::error::{Error, Result};
use crate::f2::BitVec;
use crate::pauli::PhasedPauli;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;
use std::fmt;

/// One gate. Qubit indices are 0-based.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Gate {
    H(usize),
    Hy(usize),
    Cnot { control: usize, target: usize },
    Phase(usize),
    Rz { qubit: usize, theta: f64 },
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q) | Gate::Hy(q) | Gate::Phase(q) | Gate::Rz { qubit: q, .. } => vec![q],
            Gate::Cnot { control, target } => vec![control, target],
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::Cnot { .. })
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::H(q) => write!(f, "H {q}"),
            Gate::Hy(q) => write!(f, "HY {q}"),
            Gate::Cnot { control, target } => write!(f, "CNOT {control} {target}"),
            Gate::Phase(q) => write!(f, "P {q}"),
            // shortest round-trippable float form
            Gate::Rz { qubit, theta } => write!(f, "RZ {qubit} {theta}"),
        }
    }
}

/// Gate list over a fixed qubit register.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub n: usize,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n: usize) -> Self {
        Circuit { n, gates: Vec::new() }
    }

    /// # Panics
    /// Panics if the gate touches a qubit outside the register or a CNOT
    /// with equal control and target.
    pub fn push(&mut self, gate: Gate) {
        for q in gate.qubits() {
            assert!(q < self.n, "gate {gate} outside register of {} qubits", self.n);
        }
        if let Gate::Cnot { control, target } = gate {
            assert_ne!(control, target, "CNOT control equals target");
        }
        self.gates.push(gate);
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Qubits touched by at least one gate.
    pub fn support(&self) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        for g in &self.gates {
            for q in g.qubits() {
                seen[q] = true;
            }
        }
        (0..self.n).filter(|&q| seen[q]).collect()
    }

    /// As-soon-as-possible layering: each gate lands in the earliest layer
    /// after every earlier gate sharing one of its qubits. Returns gate
    /// indices per layer.
    pub fn layers(&self) -> Vec<Vec<usize>> {
        let mut next_free = vec![0usize; self.n];
        let mut layers: Vec<Vec<usize>> = Vec::new();
        for (gi, g) in self.gates.iter().enumerate() {
            let qubits = g.qubits();
            let level = qubits.iter().map(|&q| next_free[q]).max().unwrap_or(0);
            if level == layers.len() {
                layers.push(Vec::new());
            }
            layers[level].push(gi);
            for &q in &qubits {
                next_free[q] = level + 1;
            }
        }
        layers
    }

    pub fn depth(&self) -> usize {
        self.layers().len()
    }

    /// Number of CNOT gates.
    pub fn cnot_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_two_qubit()).count()
    }

    /// Text form; inverse of [`parse_circuit_text`].
    pub fn to_text(&self) -> String {
        let mut out = format!("circuit n={}\n", self.n);
        for g in &self.gates {
            out.push_str(&g.to_string());
            out.push('\n');
        }
        out
    }
}

/// The integer `m` with `theta = m·π/2` when the division is exact.
///
/// Gates at such angles are Clifford; everything else is the generic
/// non-Clifford rotation case.
pub fn quarter_turns(theta: f64) -> Option<i64> {
    let r = theta / FRAC_PI_2;
    if r.fract() == 0.0 && r.abs() <= i64::MAX as f64 {
        Some(r as i64)
    } else {
        None
    }
}

/// Parse the circuit text format.
///
/// First significant line is `circuit n=<n>`, then one gate per line
/// (`H 3`, `HY 5`, `CNOT 2 8`, `P 8`, `RZ 8 1.5707963`), 0-based qubit
/// indices, `#` starts a comment.
pub fn parse_circuit_text(text: &str) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let head = tokens.next().unwrap();
        let err = |msg: String| Error::parse(format!("line {}: {msg}", lineno + 1));
        if circuit.is_none() {
            if head != "circuit" {
                return Err(err(format!("expected 'circuit n=<n>' header, found {line:?}")));
            }
            let n_tok = tokens.next().ok_or_else(|| err("missing n=<n>".into()))?;
            let n: usize = n_tok
                .strip_prefix("n=")
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| err(format!("bad qubit count token {n_tok:?}")))?;
            circuit = Some(Circuit::new(n));
            continue;
        }
        let c = circuit.as_mut().unwrap();
        let qubit = |tok: Option<&str>| -> Result<usize> {
            let t =
                tok.ok_or_else(|| Error::parse(format!("line {}: missing qubit", lineno + 1)))?;
            let q: usize = t
                .parse()
                .map_err(|_| Error::parse(format!("line {}: bad qubit index {t:?}", lineno + 1)))?;
            if q >= c.n {
                return Err(Error::parse(format!(
                    "line {}: qubit {q} outside register of {} qubits",
                    lineno + 1,
                    c.n
                )));
            }
            Ok(q)
        };
        let gate = match head {
            "H" => Gate::H(qubit(tokens.next())?),
            "HY" => Gate::Hy(qubit(tokens.next())?),
            "P" => Gate::Phase(qubit(tokens.next())?),
            "CNOT" => {
                let control = qubit(tokens.next())?;
                let target = qubit(tokens.next())?;
                if control == target {
                    return Err(err("CNOT control equals target".into()));
                }
                Gate::Cnot { control, target }
            }
            "RZ" => {
                let q = qubit(tokens.next())?;
                let t = tokens.next().ok_or_else(|| err("missing RZ angle".into()))?;
                let theta: f64 = t.parse().map_err(|_| err(format!("bad RZ angle {t:?}")))?;
                Gate::Rz { qubit: q, theta }
            }
            other => return Err(err(format!("unknown gate {other:?}"))),
        };
        if tokens.next().is_some() {
            return Err(err("trailing tokens after gate".into()));
        }
        circuit.as_mut().unwrap().gates.push(gate);
    }
    circuit.ok_or_else(|| Error::parse("empty circuit text: missing header"))
}

/// Synthesize the one-rotation circuit for `exp(-i θ/2 · herm(p))`.
///
/// The rotation is generated by the Hermitian part of `p`: a −E input
/// (kappa 2 or 3) negates the effective angle, and a leftover factor of i is
/// global phase and dropped. Shape: H/Hy basis changes over the support in
/// ascending order, CNOTs from each support qubit into the highest-index
/// one, the central rotation (Phase when the effective angle is exactly
/// π/2), then both layers mirrored.
pub fn synthesize_trotter(p: &PhasedPauli, theta: f64) -> Result<Circuit> {
    if p.is_trivial() {
        return Err(Error::invalid("cannot synthesize a rotation for the identity operator"));
    }
    let theta_eff = if p.hermitian_sign() < 0 { -theta } else { theta };
    let support = p.support();
    let target = *support.last().unwrap();
    let mut c = Circuit::new(p.n());
    for &q in &support {
        match p.letter_at(q) {
            'X' => c.push(Gate::H(q)),
            'Y' => c.push(Gate::Hy(q)),
            _ => {}
        }
    }
    for &q in &support {
        if q != target {
            c.push(Gate::Cnot { control: q, target });
        }
    }
    if theta_eff == FRAC_PI_2 {
        c.push(Gate::Phase(target));
    } else {
        c.push(Gate::Rz { qubit: target, theta: theta_eff });
    }
    for &q in support.iter().rev() {
        if q != target {
            c.push(Gate::Cnot { control: q, target });
        }
    }
    for &q in support.iter().rev() {
        match p.letter_at(q) {
            'X' => c.push(Gate::H(q)),
            'Y' => c.push(Gate::Hy(q)),
            _ => {}
        }
    }
    Ok(c)
}

/// The transvection Pauli `i · (∏ X over i_h) (∏ Y over i_hy) (∏ Z over i_e)`
/// on `k` qubits (0-based disjoint index sets).
pub fn transvection_from_sets(
    k: usize,
    i_h: &[usize],
    i_hy: &[usize],
    i_e: &[usize],
) -> Result<PhasedPauli> {
    let mut x = BitVec::zeros(k);
    let mut z = BitVec::zeros(k);
    let mut seen = vec![false; k];
    let mut place = |idx: usize, xs: bool, zs: bool| -> Result<()> {
        if idx >= k {
            return Err(Error::invalid(format!("index {idx} out of range for k={k}")));
        }
        if seen[idx] {
            return Err(Error::invalid(format!("index {idx} appears in more than one set")));
        }
        seen[idx] = true;
        if xs {
            x.set(idx, true);
        }
        if zs {
            z.set(idx, true);
        }
        Ok(())
    };
    for &i in i_h {
        place(i, true, false)?;
    }
    for &i in i_hy {
        place(i, true, true)?;
    }
    for &i in i_e {
        place(i, false, true)?;
    }
    if x.is_zero() && z.is_zero() {
        return Err(Error::invalid("transvection sets are all empty"));
    }
    Ok(PhasedPauli::from_xz(x, z, 1))
}

/// Weight-reduction strategy over the stabilizer coset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReduceStrategy {
    /// Global minimum over all 2^(n−k) coset elements (requires n−k ≤ 24).
    Exhaustive,
    /// Steepest descent: per round, multiply by the single generator giving
    /// the largest weight decrease; stops at a local minimum.
    Greedy,
}

/// Minimum-weight representative of `p` within its stabilizer coset.
///
/// Returns the exact phased product `p · S` for the chosen stabilizer
/// element `S`. Exhaustive search breaks weight ties by the
/// lexicographically smallest binary form in qubit order
/// ([`PhasedPauli::interleaved_bits`]).
pub fn reduce_weight(
    p: &PhasedPauli,
    code: &StabilizerCode,
    strategy: ReduceStrategy,
) -> Result<PhasedPauli> {
    if p.n() != code.n() {
        return Err(Error::invalid(format!(
            "operator acts on {} qubits but the code has {}",
            p.n(),
            code.n()
        )));
    }
    let gens = code.stabilizers();
    let m = gens.len();
    match strategy {
        ReduceStrategy::Exhaustive => {
            if m > 24 {
                return Err(Error::capacity(format!(
                    "exhaustive reduction over 2^{m} coset elements (limit n−k ≤ 24)"
                )));
            }
            let mut best = p.clone();
            let mut best_key = (best.weight(), best.interleaved_bits());
            let mut cur = p.clone();
            // Gray-code walk: one generator multiply per visited coset element.
            for i in 1u64..1 << m {
                let flip = i.trailing_zeros() as usize;
                cur = cur.mul(&gens[flip]);
                let key = (cur.weight(), cur.interleaved_bits());
                if key.0 < best_key.0 || (key.0 == best_key.0 && key.1.lex_cmp(&best_key.1).is_lt())
                {
                    best = cur.clone();
                    best_key = key;
                }
            }
            Ok(best)
        }
        ReduceStrategy::Greedy => {
            // steepest descent: per round, the single generator with the
            // largest weight decrease, earliest index on ties
            let mut cur = p.clone();
            loop {
                let mut best: Option<PhasedPauli> = None;
                for g in gens {
                    let trial = cur.mul(g);
                    if trial.weight() < best.as_ref().unwrap_or(&cur).weight() {
                        best = Some(trial);
                    }
                }
                match best {
                    Some(next) => cur = next,
                    None => return Ok(cur),
                }
            }
        }
    }
}

/// Expand Hamiltonian terms `Σ α_j P_j` into the first-order Trotter-Suzuki
/// rotation schedule over `steps` repetitions of duration `t / steps`: each
/// step applies a rotation by `θ_j = 2 α_j t / steps` for every term.
pub fn trotterize(
    terms: &[(PhasedPauli, f64)],
    t: f64,
    steps: usize,
) -> Result<Vec<(PhasedPauli, f64)>> {
    if steps == 0 {
        return Err(Error::invalid("trotterize needs at least one step"));
    }
    if terms.is_empty() {
        return Err(Error::invalid("trotterize needs at least one Hamiltonian term"));
    }
    let n = terms[0].0.n();
    for (p, _) in terms {
        if p.is_trivial() {
            return Err(Error::invalid("identity Hamiltonian term has no rotation"));
        }
        if p.n() != n {
            return Err(Error::invalid("Hamiltonian terms act on different register sizes"));
        }
    }
    let mut schedule = Vec::with_capacity(terms.len() * steps);
    for _ in 0..steps {
        for (p, alpha) in terms {
            schedule.push((p.clone(), 2.0 * alpha * t / steps as f64));
        }
    }
    Ok(schedule)
}
