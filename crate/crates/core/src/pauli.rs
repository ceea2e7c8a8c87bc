//! Single-qubit Pauli letters and per-qubit Pauli frames.

use std::fmt;

use serde::Serialize;

/// A Pauli letter modulo phase, stored as its (x, z) bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
pub enum Pauli {
    #[default]
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn from_xz(x: bool, z: bool) -> Pauli {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn x(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }

    pub fn z(self) -> bool {
        matches!(self, Pauli::Z | Pauli::Y)
    }

    /// Product modulo phase.
    pub fn mul(self, other: Pauli) -> Pauli {
        Pauli::from_xz(self.x() ^ other.x(), self.z() ^ other.z())
    }

    pub fn is_identity(self) -> bool {
        self == Pauli::I
    }

    pub fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Deferred Pauli corrections, one letter per qubit. The operator is the
/// tensor product of the letters applied after the circuit; its global phase
/// is not tracked.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize)]
pub struct PauliFrame {
    pub paulis: Vec<Pauli>,
}

impl PauliFrame {
    pub fn identity(n: usize) -> PauliFrame {
        PauliFrame {
            paulis: vec![Pauli::I; n],
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.paulis.len()
    }

    pub fn get(&self, q: usize) -> Pauli {
        self.paulis[q]
    }

    pub fn set(&mut self, q: usize, p: Pauli) {
        self.paulis[q] = p;
    }

    /// Multiplies `p` into qubit `q` of the frame.
    pub fn apply(&mut self, q: usize, p: Pauli) {
        self.paulis[q] = self.paulis[q].mul(p);
    }

    pub fn is_identity(&self) -> bool {
        self.paulis.iter().all(|p| p.is_identity())
    }

    /// Moves the frame from before a `CX(control, target)` to after it:
    /// `X_c → X_c X_t`, `Z_t → Z_c Z_t`.
    pub fn propagate_cx(&mut self, control: usize, target: usize) {
        let (c, t) = (self.paulis[control], self.paulis[target]);
        self.paulis[control] = Pauli::from_xz(c.x(), c.z() ^ t.z());
        self.paulis[target] = Pauli::from_xz(t.x() ^ c.x(), t.z());
    }
}

impl fmt::Display for PauliFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.paulis {
            write!(f, "{p}")?;
        }
        Ok(())
    }
}
