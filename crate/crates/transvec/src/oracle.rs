//! Dense-matrix oracle: a brute-force 2^n × 2^n reference implementation
//! used to certify the symbolic algebra.
//!
//! Everything clever in this crate (the Pauli multiplication phase rule, the
//! gate conjugation tables, circuit synthesis, the two-term rotation images)
//! is cross-checked against these matrices, which are built from nothing but
//! the textbook definitions. Qubit 0 is the most significant bit of the
//! basis-state index. Capped at [`MAX_ORACLE_QUBITS`] qubits; comparisons
//! use [`ORACLE_TOLERANCE`].

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::pauli::PhasedPauli;
use crate::propagate::PauliSum;
use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;

/// Dense comparisons are exponential; refuse anything past this size.
pub const MAX_ORACLE_QUBITS: usize = 10;

/// Absolute entrywise tolerance for oracle equality checks.
pub const ORACLE_TOLERANCE: f64 = 1e-10;

const I4: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.0, -1.0),
];

fn check_capacity(n: usize) -> Result<()> {
    if n > MAX_ORACLE_QUBITS {
        return Err(Error::capacity(format!(
            "dense oracle limited to {MAX_ORACLE_QUBITS} qubits, got {n}"
        )));
    }
    Ok(())
}

/// Row-major complex matrix on the n-qubit state space.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    n: usize,
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseOperator {
    pub fn identity(n: usize) -> Result<Self> {
        check_capacity(n)?;
        let dim = 1 << n;
        let mut data = vec![Complex64::ZERO; dim * dim];
        for r in 0..dim {
            data[r * dim + r] = Complex64::ONE;
        }
        Ok(DenseOperator { n, dim, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.dim + c] = v;
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &DenseOperator) -> DenseOperator {
        assert_eq!(self.dim, other.dim, "dimension mismatch in dense mul");
        let dim = self.dim;
        let mut data = vec![Complex64::ZERO; dim * dim];
        for r in 0..dim {
            for m in 0..dim {
                let a = self.data[r * dim + m];
                if a == Complex64::ZERO {
                    continue;
                }
                for c in 0..dim {
                    data[r * dim + c] += a * other.data[m * dim + c];
                }
            }
        }
        DenseOperator { n: self.n, dim, data }
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> DenseOperator {
        let dim = self.dim;
        let mut data = vec![Complex64::ZERO; dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                data[c * dim + r] = self.data[r * dim + c].conj();
            }
        }
        DenseOperator { n: self.n, dim, data }
    }

    /// `self · p · self†`.
    pub fn conjugate(&self, p: &DenseOperator) -> DenseOperator {
        self.mul(p).mul(&self.dagger())
    }

    pub fn scale(&self, c: Complex64) -> DenseOperator {
        let mut out = self.clone();
        for v in &mut out.data {
            *v *= c;
        }
        out
    }

    pub fn add(&self, other: &DenseOperator) -> DenseOperator {
        assert_eq!(self.dim, other.dim, "dimension mismatch in dense add");
        let mut out = self.clone();
        for (v, o) in out.data.iter_mut().zip(&other.data) {
            *v += o;
        }
        out
    }

    /// Largest entrywise absolute difference.
    pub fn max_diff(&self, other: &DenseOperator) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch in max_diff");
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &DenseOperator, tol: f64) -> bool {
        self.dim == other.dim && self.max_diff(other) <= tol
    }

    /// Equality up to one global phase, aligned on this matrix's
    /// largest-magnitude entry.
    pub fn approx_eq_up_to_phase(&self, other: &DenseOperator, tol: f64) -> bool {
        if self.dim != other.dim {
            return false;
        }
        let (idx, largest) =
            self.data.iter().enumerate().max_by(|a, b| a.1.norm().total_cmp(&b.1.norm())).unwrap();
        if largest.norm() <= tol {
            return other.data.iter().all(|v| v.norm() <= tol);
        }
        let phase = other.data[idx] / largest;
        if (phase.norm() - 1.0).abs() > tol {
            return false;
        }
        self.scale(phase).max_diff(other) <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let id = DenseOperator::identity(self.n).unwrap();
        self.mul(&self.dagger()).approx_eq(&id, tol)
    }

    /// Left-multiply by a single-qubit gate on `q`.
    pub fn apply_single_left(&mut self, q: usize, g: [[Complex64; 2]; 2]) {
        assert!(q < self.n, "qubit {q} out of range");
        let mask = 1usize << (self.n - 1 - q);
        for r0 in 0..self.dim {
            if r0 & mask != 0 {
                continue;
            }
            let r1 = r0 | mask;
            for c in 0..self.dim {
                let a = self.data[r0 * self.dim + c];
                let b = self.data[r1 * self.dim + c];
                self.data[r0 * self.dim + c] = g[0][0] * a + g[0][1] * b;
                self.data[r1 * self.dim + c] = g[1][0] * a + g[1][1] * b;
            }
        }
    }

    /// Left-multiply by CNOT (a row permutation).
    pub fn apply_cnot_left(&mut self, control: usize, target: usize) {
        assert!(control < self.n && target < self.n && control != target);
        let cmask = 1usize << (self.n - 1 - control);
        let tmask = 1usize << (self.n - 1 - target);
        for r in 0..self.dim {
            if r & cmask != 0 && r & tmask == 0 {
                let r2 = r | tmask;
                for c in 0..self.dim {
                    self.data.swap(r * self.dim + c, r2 * self.dim + c);
                }
            }
        }
    }
}

fn h_matrix() -> [[Complex64; 2]; 2] {
    let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
    [[s, s], [s, -s]]
}

fn hy_matrix() -> [[Complex64; 2]; 2] {
    let s = FRAC_1_SQRT_2;
    [
        [Complex64::new(s, 0.0), Complex64::new(0.0, -s)],
        [Complex64::new(0.0, s), Complex64::new(-s, 0.0)],
    ]
}

fn phase_matrix() -> [[Complex64; 2]; 2] {
    [[Complex64::ONE, Complex64::ZERO], [Complex64::ZERO, Complex64::new(0.0, 1.0)]]
}

fn rz_matrix(theta: f64) -> [[Complex64; 2]; 2] {
    [
        [Complex64::from_polar(1.0, -theta / 2.0), Complex64::ZERO],
        [Complex64::ZERO, Complex64::from_polar(1.0, theta / 2.0)],
    ]
}

/// Dense matrix of a phased Pauli.
pub fn dense_pauli(p: &PhasedPauli) -> Result<DenseOperator> {
    check_capacity(p.n())?;
    let n = p.n();
    let dim = 1usize << n;
    let mut xmask = 0usize;
    let mut zmask = 0usize;
    let mut overlap = 0usize;
    for q in 0..n {
        let bit = 1usize << (n - 1 - q);
        if p.x().get(q) {
            xmask |= bit;
        }
        if p.z().get(q) {
            zmask |= bit;
        }
        if p.x().get(q) && p.z().get(q) {
            overlap += 1;
        }
    }
    let lead = I4[(p.kappa() as usize + overlap) % 4];
    let mut out = DenseOperator { n, dim, data: vec![Complex64::ZERO; dim * dim] };
    for c in 0..dim {
        let sign = if (zmask & c).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
        out.data[(c ^ xmask) * dim + c] = lead * sign;
    }
    Ok(out)
}

/// Dense unitary of a circuit (gates applied in time order).
pub fn dense_circuit(c: &Circuit) -> Result<DenseOperator> {
    check_capacity(c.n)?;
    let mut u = DenseOperator::identity(c.n)?;
    for gate in &c.gates {
        match *gate {
            Gate::H(q) => u.apply_single_left(q, h_matrix()),
            Gate::Hy(q) => u.apply_single_left(q, hy_matrix()),
            Gate::Phase(q) => u.apply_single_left(q, phase_matrix()),
            Gate::Rz { qubit, theta } => u.apply_single_left(qubit, rz_matrix(theta)),
            Gate::Cnot { control, target } => u.apply_cnot_left(control, target),
        }
    }
    Ok(u)
}

/// Dense matrix of `exp(-i θ/2 · herm(p))`, the rotation generated by the
/// Hermitian part of `p`: `cos(θ/2)·I − i sin(θ/2)·herm(p)`.
pub fn dense_trotter(p: &PhasedPauli, theta: f64) -> Result<DenseOperator> {
    let h = dense_pauli(&p.hermitian_part())?;
    let id = DenseOperator::identity(p.n())?;
    let half = theta / 2.0;
    Ok(id.scale(Complex64::new(half.cos(), 0.0)).add(&h.scale(Complex64::new(0.0, -half.sin()))))
}

/// Evaluate a symbolic Pauli sum at a concrete angle as a dense matrix.
pub fn dense_sum(sum: &PauliSum, theta: f64) -> Result<DenseOperator> {
    let mut acc: Option<DenseOperator> = None;
    for (coeff, pauli) in sum.terms() {
        let term = dense_pauli(pauli)?.scale(coeff.eval(theta));
        acc = Some(match acc {
            Some(a) => a.add(&term),
            None => term,
        });
    }
    acc.map_or_else(|| DenseOperator::identity(sum.n()).map(|i| i.scale(Complex64::ZERO)), Ok)
}
