//! Circuit intermediate representation shared by every pass.

mod angle;
mod circuit;
mod counts;
mod gate;
pub mod generators;
pub mod qasm;

pub use angle::{Angle, DEFAULT_ANGLE_TOL, MAX_SNAP_EXPONENT};
pub use circuit::Circuit;
pub use counts::{gate_counts, gate_counts_with_tol, GateCounts};
pub use gate::{Gate, GateKind};
pub use qasm::{emit_qasm, parse_angle_expr, parse_qasm, parse_qasm_with_tol, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IrError {
    #[error("{kind} takes {expected} qubit operand(s), got {found}")]
    Arity {
        kind: GateKind,
        expected: usize,
        found: usize,
    },
    #[error("{kind} takes {expected} parameter(s), got {found}")]
    ParamArity {
        kind: GateKind,
        expected: usize,
        found: usize,
    },
    #[error("{kind} uses qubit {qubit} more than once")]
    DuplicateOperand { kind: GateKind, qubit: usize },
    #[error("qubit {qubit} out of range for a {num_qubits}-qubit circuit")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },
    #[error("gate on qubit {qubit} after it was measured")]
    GateAfterMeasurement { qubit: usize },
}
