//! Fault-tolerant transpilation toolkit: Clifford+T synthesis, Clifford
//! reduction into π/4-rotation programs, and execution cost estimation on a
//! memory/compute-block surface-code layout.

pub mod clifford;
pub mod ir;
pub mod pauli;
pub mod synth;
pub mod transform;
pub mod verify;
pub mod decompose;
pub mod reduce;
pub mod pbc;
pub mod arch;
pub mod pipeline;
