//! Dense-matrix oracles for checking passes against each other.
//!
//! Bit order: qubit `q` is bit `q` of the basis-state index, so qubit 0 is
//! the least significant bit.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64 as C;

use crate::ir::{Circuit, Gate, GateKind};
use crate::pauli::{Pauli, PauliFrame};

pub const MAX_QUBITS: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("dense simulation is limited to {MAX_QUBITS} qubits, circuit has {0}")]
    TooManyQubits(usize),
    #[error("circuit contains measurements")]
    Measurement,
    #[error("dimension mismatch: {0} vs {1} qubits")]
    Dimension(usize, usize),
}

/// A `2^n × 2^n` complex matrix, row-major.
#[derive(Clone, Debug)]
pub struct DenseUnitary {
    n: usize,
    data: Vec<C>,
}

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

fn expi(phi: f64) -> C {
    C::from_polar(1.0, phi)
}

/// Local matrix of a gate in the basis where bit `i` of the row/column index
/// is the state of `gate.qubits[i]`.
pub fn gate_matrix(g: &Gate) -> Vec<C> {
    let o = C::new(0.0, 0.0);
    let l = C::new(1.0, 0.0);
    let i = C::new(0.0, 1.0);
    let h = FRAC_1_SQRT_2;
    let p = |k: usize| g.params[k].to_radians();
    let rx = |t: f64| {
        let (s, co) = (t / 2.0).sin_cos();
        vec![c(co, 0.0), c(0.0, -s), c(0.0, -s), c(co, 0.0)]
    };
    match g.kind {
        GateKind::X => vec![o, l, l, o],
        GateKind::Y => vec![o, -i, i, o],
        GateKind::Z => vec![l, o, o, -l],
        GateKind::H => vec![c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0)],
        GateKind::S => vec![l, o, o, i],
        GateKind::Sdg => vec![l, o, o, -i],
        GateKind::T => vec![l, o, o, c(h, h)],
        GateKind::Tdg => vec![l, o, o, c(h, -h)],
        GateKind::RZ => {
            let t = p(0);
            vec![expi(-t / 2.0), o, o, expi(t / 2.0)]
        }
        GateKind::RX => rx(p(0)),
        GateKind::RxPi4 => rx(std::f64::consts::FRAC_PI_4),
        GateKind::RxPi4Dg => rx(-std::f64::consts::FRAC_PI_4),
        GateKind::RY => {
            let (s, co) = (p(0) / 2.0).sin_cos();
            vec![c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0)]
        }
        GateKind::U3 => {
            let (theta, phi, lam) = (p(0), p(1), p(2));
            let (s, co) = (theta / 2.0).sin_cos();
            vec![
                c(co, 0.0),
                -expi(lam) * s,
                expi(phi) * s,
                expi(phi + lam) * co,
            ]
        }
        GateKind::CX | GateKind::CZ | GateKind::Swap | GateKind::CP | GateKind::CCX => {
            let k = g.kind.num_qubits();
            let dim = 1 << k;
            let mut m = vec![o; dim * dim];
            for col in 0..dim {
                let (row, amp) = match g.kind {
                    GateKind::CX => (if col & 1 == 1 { col ^ 2 } else { col }, l),
                    GateKind::CCX => (if col & 3 == 3 { col ^ 4 } else { col }, l),
                    GateKind::CZ => (col, if col == 3 { -l } else { l }),
                    GateKind::CP => (col, if col == 3 { expi(p(0)) } else { l }),
                    _ => (((col & 1) << 1) | (col >> 1), l),
                };
                m[row * dim + col] = amp;
            }
            m
        }
        GateKind::MeasureZ => panic!("measurement has no unitary"),
    }
}

impl DenseUnitary {
    pub fn identity(n: usize) -> DenseUnitary {
        let dim = 1 << n;
        let mut data = vec![C::new(0.0, 0.0); dim * dim];
        for k in 0..dim {
            data[k * dim + k] = C::new(1.0, 0.0);
        }
        DenseUnitary { n, data }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn get(&self, row: usize, col: usize) -> C {
        self.data[row * self.dim() + col]
    }

    /// Left-multiplies by the embedding of `local` acting on `qubits`.
    pub fn apply(&mut self, local: &[C], qubits: &[usize]) {
        let dim = self.dim();
        let k = qubits.len();
        let ldim = 1 << k;
        let mask: usize = qubits.iter().map(|q| 1 << q).sum();
        let mut idx = vec![0usize; ldim];
        let mut amps = vec![C::new(0.0, 0.0); ldim];
        for base in 0..dim {
            if base & mask != 0 {
                continue;
            }
            for (j, slot) in idx.iter_mut().enumerate() {
                let mut r = base;
                for (b, &q) in qubits.iter().enumerate() {
                    if j >> b & 1 == 1 {
                        r |= 1 << q;
                    }
                }
                *slot = r;
            }
            for col in 0..dim {
                for j in 0..ldim {
                    amps[j] = self.data[idx[j] * dim + col];
                }
                for r in 0..ldim {
                    let mut acc = C::new(0.0, 0.0);
                    for j in 0..ldim {
                        acc += local[r * ldim + j] * amps[j];
                    }
                    self.data[idx[r] * dim + col] = acc;
                }
            }
        }
    }

    pub fn apply_gate(&mut self, g: &Gate) {
        self.apply(&gate_matrix(g), &g.qubits);
    }

    /// Left-multiplies by the tensor product of the frame's Paulis.
    pub fn apply_frame(&mut self, frame: &PauliFrame) {
        for (q, p) in frame.paulis.iter().enumerate() {
            let kind = match p {
                Pauli::I => continue,
                Pauli::X => GateKind::X,
                Pauli::Y => GateKind::Y,
                Pauli::Z => GateKind::Z,
            };
            self.apply_gate(&Gate::single(kind, q));
        }
    }

    /// `A† B`.
    pub fn adjoint_mul(&self, other: &DenseUnitary) -> DenseUnitary {
        let dim = self.dim();
        let mut data = vec![C::new(0.0, 0.0); dim * dim];
        for r in 0..dim {
            for k in 0..dim {
                let a = self.data[k * dim + r].conj();
                if a == C::new(0.0, 0.0) {
                    continue;
                }
                for col in 0..dim {
                    data[r * dim + col] += a * other.data[k * dim + col];
                }
            }
        }
        DenseUnitary { n: self.n, data }
    }

    /// `A B`.
    pub fn mul(&self, other: &DenseUnitary) -> DenseUnitary {
        let dim = self.dim();
        let mut data = vec![C::new(0.0, 0.0); dim * dim];
        for r in 0..dim {
            for k in 0..dim {
                let a = self.data[r * dim + k];
                if a == C::new(0.0, 0.0) {
                    continue;
                }
                for col in 0..dim {
                    data[r * dim + col] += a * other.data[k * dim + col];
                }
            }
        }
        DenseUnitary { n: self.n, data }
    }

    /// Matrix with entries `f(row, col)`. Unitarity is the caller's concern.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> C) -> DenseUnitary {
        let dim = 1 << n;
        let data = (0..dim * dim).map(|k| f(k / dim, k % dim)).collect();
        DenseUnitary { n, data }
    }

    /// `tr(A† B)` without forming the product.
    pub fn inner(&self, other: &DenseUnitary) -> C {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Largest entry of `|U†U − I|`.
    pub fn unitarity_error(&self) -> f64 {
        let p = self.adjoint_mul(self);
        let dim = self.dim();
        let mut worst: f64 = 0.0;
        for r in 0..dim {
            for col in 0..dim {
                let expect = if r == col { 1.0 } else { 0.0 };
                worst = worst.max((p.data[r * dim + col] - expect).norm());
            }
        }
        worst
    }
}

pub fn unitary_of(c: &Circuit) -> Result<DenseUnitary, VerifyError> {
    if c.num_qubits() > MAX_QUBITS {
        return Err(VerifyError::TooManyQubits(c.num_qubits()));
    }
    let mut u = DenseUnitary::identity(c.num_qubits());
    for g in c.gates() {
        if g.kind == GateKind::MeasureZ {
            return Err(VerifyError::Measurement);
        }
        u.apply_gate(g);
    }
    Ok(u)
}

/// Unitary of the circuit with its terminal measurements removed.
pub fn unitary_of_unmeasured(c: &Circuit) -> Result<DenseUnitary, VerifyError> {
    let mut stripped = c.empty_like();
    for g in c.gates().iter().filter(|g| g.kind != GateKind::MeasureZ) {
        stripped.push(g.clone()).expect("subset of a valid circuit");
    }
    unitary_of(&stripped)
}

/// `1 − |tr(A†B)| / 2^n`, zero iff the matrices agree up to global phase.
pub fn phase_distance(a: &DenseUnitary, b: &DenseUnitary) -> f64 {
    assert_eq!(a.n, b.n, "dimension mismatch");
    (1.0 - a.inner(b).norm() / a.dim() as f64).max(0.0)
}

pub fn equiv_up_to_phase(a: &DenseUnitary, b: &DenseUnitary, tol: f64) -> bool {
    phase_distance(a, b) <= tol
}

/// Checks `A ≅ F·B` where `F` is the frame operator.
pub fn equiv_mod_frame(a: &DenseUnitary, b: &DenseUnitary, frame: &PauliFrame, tol: f64) -> bool {
    let mut fb = b.clone();
    fb.apply_frame(frame);
    equiv_up_to_phase(a, &fb, tol)
}
