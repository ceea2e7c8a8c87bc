use std::fmt;

use serde::{Deserialize, Serialize};

use super::angle::Angle;
use super::IrError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateKind {
    X,
    Y,
    Z,
    H,
    S,
    Sdg,
    T,
    Tdg,
    CX,
    CZ,
    Swap,
    CCX,
    CP,
    RZ,
    RX,
    RY,
    U3,
    RxPi4,
    RxPi4Dg,
    MeasureZ,
}

impl GateKind {
    pub const ALL: [GateKind; 20] = [
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::H,
        GateKind::S,
        GateKind::Sdg,
        GateKind::T,
        GateKind::Tdg,
        GateKind::CX,
        GateKind::CZ,
        GateKind::Swap,
        GateKind::CCX,
        GateKind::CP,
        GateKind::RZ,
        GateKind::RX,
        GateKind::RY,
        GateKind::U3,
        GateKind::RxPi4,
        GateKind::RxPi4Dg,
        GateKind::MeasureZ,
    ];

    pub fn num_qubits(self) -> usize {
        match self {
            GateKind::CX | GateKind::CZ | GateKind::Swap | GateKind::CP => 2,
            GateKind::CCX => 3,
            _ => 1,
        }
    }

    pub fn num_params(self) -> usize {
        match self {
            GateKind::CP | GateKind::RZ | GateKind::RX | GateKind::RY => 1,
            GateKind::U3 => 3,
            _ => 0,
        }
    }

    pub fn is_pauli(self) -> bool {
        matches!(self, GateKind::X | GateKind::Y | GateKind::Z)
    }

    /// T-type gates: the π/4 rotations about Z or X and their inverses.
    pub fn is_pi4_rotation(self) -> bool {
        matches!(
            self,
            GateKind::T | GateKind::Tdg | GateKind::RxPi4 | GateKind::RxPi4Dg
        )
    }

    /// Single-qubit members of the Clifford+T alphabet.
    pub fn is_clifford_t_1q(self) -> bool {
        matches!(
            self,
            GateKind::X
                | GateKind::Y
                | GateKind::Z
                | GateKind::H
                | GateKind::S
                | GateKind::Sdg
                | GateKind::T
                | GateKind::Tdg
                | GateKind::RxPi4
                | GateKind::RxPi4Dg
        )
    }

    pub fn is_rotation(self) -> bool {
        matches!(
            self,
            GateKind::RZ | GateKind::RX | GateKind::RY | GateKind::U3
        )
    }

    /// Lower-case QASM-style name, also used as the JSON key in gate-count
    /// reports.
    pub fn name(self) -> &'static str {
        match self {
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::H => "h",
            GateKind::S => "s",
            GateKind::Sdg => "sdg",
            GateKind::T => "t",
            GateKind::Tdg => "tdg",
            GateKind::CX => "cx",
            GateKind::CZ => "cz",
            GateKind::Swap => "swap",
            GateKind::CCX => "ccx",
            GateKind::CP => "cp",
            GateKind::RZ => "rz",
            GateKind::RX => "rx",
            GateKind::RY => "ry",
            GateKind::U3 => "u3",
            GateKind::RxPi4 => "rx_pi4",
            GateKind::RxPi4Dg => "rx_pi4_dg",
            GateKind::MeasureZ => "measure",
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One gate application. `qubits` are in operand order (control first for
/// controlled gates).
#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
    pub params: Vec<Angle>,
    /// Classical target of a measurement.
    pub clbit: Option<usize>,
}

impl Gate {
    pub fn new(kind: GateKind, qubits: Vec<usize>, params: Vec<Angle>) -> Result<Gate, IrError> {
        if qubits.len() != kind.num_qubits() {
            return Err(IrError::Arity {
                kind,
                expected: kind.num_qubits(),
                found: qubits.len(),
            });
        }
        if params.len() != kind.num_params() {
            return Err(IrError::ParamArity {
                kind,
                expected: kind.num_params(),
                found: params.len(),
            });
        }
        for (i, q) in qubits.iter().enumerate() {
            if qubits[..i].contains(q) {
                return Err(IrError::DuplicateOperand { kind, qubit: *q });
            }
        }
        Ok(Gate {
            kind,
            qubits,
            params,
            clbit: None,
        })
    }

    fn fixed(kind: GateKind, qubits: Vec<usize>) -> Gate {
        Gate::new(kind, qubits, Vec::new()).expect("fixed gate arity")
    }

    /// Single-qubit fixed gate (`X`, `H`, `T`, ...).
    pub fn single(kind: GateKind, q: usize) -> Gate {
        Gate::fixed(kind, vec![q])
    }

    pub fn x(q: usize) -> Gate {
        Gate::single(GateKind::X, q)
    }
    pub fn y(q: usize) -> Gate {
        Gate::single(GateKind::Y, q)
    }
    pub fn z(q: usize) -> Gate {
        Gate::single(GateKind::Z, q)
    }
    pub fn h(q: usize) -> Gate {
        Gate::single(GateKind::H, q)
    }
    pub fn s(q: usize) -> Gate {
        Gate::single(GateKind::S, q)
    }
    pub fn sdg(q: usize) -> Gate {
        Gate::single(GateKind::Sdg, q)
    }
    pub fn t(q: usize) -> Gate {
        Gate::single(GateKind::T, q)
    }
    pub fn tdg(q: usize) -> Gate {
        Gate::single(GateKind::Tdg, q)
    }

    pub fn cx(control: usize, target: usize) -> Gate {
        Gate::fixed(GateKind::CX, vec![control, target])
    }
    pub fn cz(a: usize, b: usize) -> Gate {
        Gate::fixed(GateKind::CZ, vec![a, b])
    }
    pub fn swap(a: usize, b: usize) -> Gate {
        Gate::fixed(GateKind::Swap, vec![a, b])
    }
    pub fn ccx(a: usize, b: usize, target: usize) -> Gate {
        Gate::fixed(GateKind::CCX, vec![a, b, target])
    }
    pub fn cp(control: usize, target: usize, theta: Angle) -> Gate {
        Gate::new(GateKind::CP, vec![control, target], vec![theta]).expect("cp arity")
    }

    pub fn rz(q: usize, theta: Angle) -> Gate {
        Gate::new(GateKind::RZ, vec![q], vec![theta]).expect("rz arity")
    }

    /// `RX(θ)`; the exact angles ±π/4 become the dedicated `RxPi4` kinds so
    /// that the IR has a single spelling for them.
    pub fn rx(q: usize, theta: Angle) -> Gate {
        match theta {
            Angle::Dyadic { num: 1, exp: 2 } => Gate::single(GateKind::RxPi4, q),
            Angle::Dyadic { num: 7, exp: 2 } => Gate::single(GateKind::RxPi4Dg, q),
            _ => Gate::new(GateKind::RX, vec![q], vec![theta]).expect("rx arity"),
        }
    }

    pub fn ry(q: usize, theta: Angle) -> Gate {
        Gate::new(GateKind::RY, vec![q], vec![theta]).expect("ry arity")
    }

    /// `U3(θ, φ, λ) ≅ RZ(φ)·RY(θ)·RZ(λ)`.
    pub fn u3(q: usize, theta: Angle, phi: Angle, lambda: Angle) -> Gate {
        Gate::new(GateKind::U3, vec![q], vec![theta, phi, lambda]).expect("u3 arity")
    }

    pub fn measure(q: usize, clbit: usize) -> Gate {
        let mut g = Gate::single(GateKind::MeasureZ, q);
        g.clbit = Some(clbit);
        g
    }

    pub fn qubit(&self) -> usize {
        self.qubits[0]
    }

    pub fn is_single_qubit_unitary(&self) -> bool {
        self.kind.num_qubits() == 1 && self.kind != GateKind::MeasureZ
    }

    /// Number of Z rotations in this gate whose angle is not a multiple of
    /// π/4; RX/RY count once, U3 counts each of its three Euler angles.
    pub fn nontrivial_rotations(&self, tol: f64) -> usize {
        match self.kind {
            GateKind::RZ | GateKind::RX | GateKind::RY => {
                usize::from(!self.params[0].is_trivial(tol))
            }
            GateKind::U3 => self.params.iter().filter(|a| !a.is_trivial(tol)).count(),
            _ => 0,
        }
    }
}
