use std::collections::BTreeMap;

use super::gate::{Gate, GateKind};
use super::IrError;

/// An ordered gate program over `num_qubits` indexed qubits.
///
/// Gates are stored in application order: `gates[0]` is applied first, so the
/// matrix of `[g0, …, gk]` is `M(gk)·…·M(g0)`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Circuit {
    num_qubits: usize,
    num_clbits: usize,
    gates: Vec<Gate>,
    pub name: Option<String>,
    pub metadata: BTreeMap<String, String>,
    measured: Vec<bool>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Circuit {
        Circuit {
            num_qubits,
            num_clbits: 0,
            gates: Vec::new(),
            name: None,
            metadata: BTreeMap::new(),
            measured: vec![false; num_qubits],
        }
    }

    pub fn with_clbits(num_qubits: usize, num_clbits: usize) -> Circuit {
        let mut c = Circuit::new(num_qubits);
        c.num_clbits = num_clbits;
        c
    }

    pub fn from_gates(num_qubits: usize, gates: impl IntoIterator<Item = Gate>) -> Result<Circuit, IrError> {
        let mut c = Circuit::new(num_qubits);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    /// Copy of this circuit's header (size, name, metadata) with no gates.
    pub fn empty_like(&self) -> Circuit {
        let mut c = Circuit::with_clbits(self.num_qubits, self.num_clbits);
        c.name = self.name.clone();
        c.metadata = self.metadata.clone();
        c
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_clbits(&self) -> usize {
        self.num_clbits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn has_measurements(&self) -> bool {
        self.measured.iter().any(|m| *m)
    }

    pub fn push(&mut self, gate: Gate) -> Result<(), IrError> {
        for &q in &gate.qubits {
            if q >= self.num_qubits {
                return Err(IrError::QubitOutOfRange {
                    qubit: q,
                    num_qubits: self.num_qubits,
                });
            }
            if self.measured[q] {
                return Err(IrError::GateAfterMeasurement { qubit: q });
            }
        }
        if gate.kind == GateKind::MeasureZ {
            let clbit = gate.clbit.unwrap_or(gate.qubits[0]);
            if clbit >= self.num_clbits {
                self.num_clbits = clbit + 1;
            }
            self.measured[gate.qubits[0]] = true;
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Appends every gate of `gates`, panicking on invalid operands. For
    /// internal passes whose output is valid by construction.
    pub(crate) fn extend_trusted(&mut self, gates: impl IntoIterator<Item = Gate>) {
        for g in gates {
            self.push(g).expect("pass produced an invalid gate");
        }
    }

    /// Positions of the gates acting on each qubit, in program order.
    pub fn wires(&self) -> Vec<Vec<usize>> {
        let mut wires = vec![Vec::new(); self.num_qubits];
        for (i, g) in self.gates.iter().enumerate() {
            for &q in &g.qubits {
                wires[q].push(i);
            }
        }
        wires
    }
}
