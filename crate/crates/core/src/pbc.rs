//! Pauli-based computation: every Clifford is moved to the end of the
//! circuit, which turns each π/4 rotation into a multi-qubit Pauli rotation
//! and each Z measurement into a Pauli measurement. Also the layering used to
//! compare gate parallelism.

use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::clifford::{product_phase, CliffordClass};
use crate::ir::{Circuit, GateKind};
use crate::pauli::Pauli;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PbcError {
    #[error("gate {index} ({kind}) is not in the Clifford+T gate set")]
    NotCliffordT { index: usize, kind: GateKind },
}

/// `i^phase · P_0 ⊗ P_1 ⊗ …`; letter `j` acts on qubit `j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    pub letters: Vec<Pauli>,
    pub phase: u8,
}

impl PauliString {
    pub fn identity(n: usize) -> PauliString {
        PauliString { letters: vec![Pauli::I; n], phase: 0 }
    }

    pub fn single(n: usize, q: usize, p: Pauli) -> PauliString {
        let mut s = PauliString::identity(n);
        s.letters[q] = p;
        s
    }

    pub fn mul(&self, other: &PauliString) -> PauliString {
        let mut phase = self.phase + other.phase;
        let letters = self
            .letters
            .iter()
            .zip(&other.letters)
            .map(|(&a, &b)| {
                phase += product_phase(a, b);
                a.mul(b)
            })
            .collect();
        PauliString { letters, phase: phase % 4 }
    }

    pub fn scale(&self, phase: u8) -> PauliString {
        PauliString { letters: self.letters.clone(), phase: (self.phase + phase) % 4 }
    }

    /// Hermitian strings are `±P`; true for the minus sign.
    pub fn is_negative(&self) -> bool {
        debug_assert!(self.phase.is_multiple_of(2), "non-Hermitian Pauli string");
        self.phase == 2
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.letters.len()).filter(|&q| !self.letters[q].is_identity()).collect()
    }

    pub fn weight(&self) -> usize {
        self.letters.iter().filter(|p| !p.is_identity()).count()
    }

    pub fn letters_string(&self) -> String {
        self.letters.iter().map(|p| p.letter()).collect()
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = ["+", "+i", "-", "-i"][self.phase as usize];
        write!(f, "{sign}{}", self.letters_string())
    }
}

impl Serialize for PauliString {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("PauliString", 2)?;
        st.serialize_field("pauli", &self.letters_string())?;
        st.serialize_field("sign", if self.is_negative() { "-" } else { "+" })?;
        st.end()
    }
}

/// Images `U† X_q U` and `U† Z_q U` of the generators under a Clifford `U`.
/// Appending a gate `G` (so `U ← G·U`) maps `P ↦ U† G† P G U`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordTableau {
    x: Vec<PauliString>,
    z: Vec<PauliString>,
}

impl CliffordTableau {
    pub fn identity(n: usize) -> CliffordTableau {
        CliffordTableau {
            x: (0..n).map(|q| PauliString::single(n, q, Pauli::X)).collect(),
            z: (0..n).map(|q| PauliString::single(n, q, Pauli::Z)).collect(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.x.len()
    }

    /// Image of a single-qubit letter on qubit `q`.
    pub fn image(&self, q: usize, p: Pauli) -> PauliString {
        match p {
            Pauli::I => PauliString::identity(self.num_qubits()),
            Pauli::X => self.x[q].clone(),
            Pauli::Z => self.z[q].clone(),
            // Y = iXZ
            Pauli::Y => self.x[q].mul(&self.z[q]).scale(1),
        }
    }

    pub fn apply_1q(&mut self, q: usize, g: CliffordClass) {
        let inv = g.inverse();
        let img = |p: Pauli| {
            let sp = inv.conjugate(p);
            self.image(q, sp.pauli).scale(if sp.neg { 2 } else { 0 })
        };
        let (nx, nz) = (img(Pauli::X), img(Pauli::Z));
        self.x[q] = nx;
        self.z[q] = nz;
    }

    pub fn apply_cx(&mut self, control: usize, target: usize) {
        self.x[control] = self.x[control].mul(&self.x[target]);
        self.z[target] = self.z[control].mul(&self.z[target]);
    }

    /// Checks that the images pairwise commute or anticommute like the
    /// generators they replace.
    pub fn is_symplectic(&self) -> bool {
        let n = self.num_qubits();
        let anticommute = |a: &PauliString, b: &PauliString| {
            a.letters
                .iter()
                .zip(&b.letters)
                .filter(|(p, q)| !p.is_identity() && !q.is_identity() && p != q)
                .count()
                % 2
                == 1
        };
        for i in 0..n {
            for j in 0..n {
                if anticommute(&self.x[i], &self.z[j]) != (i == j)
                    || anticommute(&self.x[i], &self.x[j])
                    || anticommute(&self.z[i], &self.z[j])
                {
                    return false;
                }
            }
        }
        true
    }
}

/// `exp(∓iπ/8 · P)`: a π/4 rotation about a Pauli string, negative for the
/// inverse rotation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PauliRotation {
    #[serde(flatten)]
    pub pauli: PauliString,
}

impl PauliRotation {
    pub fn support(&self) -> Vec<usize> {
        self.pauli.support()
    }

    pub fn is_inverse(&self) -> bool {
        self.pauli.is_negative()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PbcMeasurement {
    #[serde(flatten)]
    pub pauli: PauliString,
    pub clbit: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PbcProgram {
    pub num_qubits: usize,
    /// Application order.
    pub rotations: Vec<PauliRotation>,
    pub measurements: Vec<PbcMeasurement>,
}

/// Sweeps the circuit once, keeping the tableau of the Cliffords seen so
/// far. `unitary(c) ≅ U · R_k ⋯ R_1` where `U` is the product of the
/// circuit's Cliffords.
pub fn to_pbc(c: &Circuit) -> Result<PbcProgram, PbcError> {
    let n = c.num_qubits();
    let mut tab = CliffordTableau::identity(n);
    let mut rotations = Vec::new();
    let mut measurements = Vec::new();
    for (index, g) in c.gates().iter().enumerate() {
        match g.kind {
            GateKind::T | GateKind::Tdg | GateKind::RxPi4 | GateKind::RxPi4Dg => {
                let axis = if matches!(g.kind, GateKind::T | GateKind::Tdg) { Pauli::Z } else { Pauli::X };
                let mut p = tab.image(g.qubit(), axis);
                if matches!(g.kind, GateKind::Tdg | GateKind::RxPi4Dg) {
                    p = p.scale(2);
                }
                rotations.push(PauliRotation { pauli: p });
            }
            GateKind::CX => tab.apply_cx(g.qubits[0], g.qubits[1]),
            GateKind::MeasureZ => measurements.push(PbcMeasurement {
                pauli: tab.image(g.qubit(), Pauli::Z),
                clbit: g.clbit.unwrap_or(g.qubit()),
            }),
            k => match CliffordClass::from_gate(k) {
                Some(cl) => tab.apply_1q(g.qubit(), cl),
                None => return Err(PbcError::NotCliffordT { index, kind: k }),
            },
        }
    }
    Ok(PbcProgram { num_qubits: n, rotations, measurements })
}

/// Greedy in-order layering: each item goes into the layer right after the
/// latest layer holding an earlier item that shares a qubit with it. Layers
/// list item indices.
pub fn parallelism_layers<S: AsRef<[usize]>>(supports: &[S]) -> Vec<Vec<usize>> {
    let mut last: Vec<usize> = Vec::new();
    let mut layers: Vec<Vec<usize>> = Vec::new();
    for (i, s) in supports.iter().enumerate() {
        let s = s.as_ref();
        if let Some(&m) = s.iter().max() {
            if m >= last.len() {
                last.resize(m + 1, 0);
            }
        }
        let layer = s.iter().map(|&q| last[q]).max().unwrap_or(0);
        if layer == layers.len() {
            layers.push(Vec::new());
        }
        layers[layer].push(i);
        for &q in s {
            last[q] = layer + 1;
        }
    }
    layers
}

/// Box-plot summary of layer sizes. Quartiles use linear interpolation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParallelismStats {
    pub layers: usize,
    pub items: usize,
    pub min: usize,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: usize,
    pub mean: f64,
    pub sizes: Vec<usize>,
}

fn quantile(sorted: &[usize], q: f64) -> f64 {
    if sorted.is_empty() {
        return 0.0;
    }
    let pos = q * (sorted.len() - 1) as f64;
    let (lo, hi) = (pos.floor() as usize, pos.ceil() as usize);
    let frac = pos - lo as f64;
    sorted[lo] as f64 * (1.0 - frac) + sorted[hi] as f64 * frac
}

pub fn parallelism_stats(layers: &[Vec<usize>]) -> ParallelismStats {
    let sizes: Vec<usize> = layers.iter().map(|l| l.len()).collect();
    let mut sorted = sizes.clone();
    sorted.sort_unstable();
    let items: usize = sizes.iter().sum();
    ParallelismStats {
        layers: sizes.len(),
        items,
        min: sorted.first().copied().unwrap_or(0),
        q1: quantile(&sorted, 0.25),
        median: quantile(&sorted, 0.5),
        q3: quantile(&sorted, 0.75),
        max: sorted.last().copied().unwrap_or(0),
        mean: if sizes.is_empty() { 0.0 } else { items as f64 / sizes.len() as f64 },
        sizes,
    }
}

/// Layering of a PBC program's rotations.
pub fn pbc_parallelism(p: &PbcProgram) -> ParallelismStats {
    let supports: Vec<Vec<usize>> = p.rotations.iter().map(|r| r.support()).collect();
    parallelism_stats(&parallelism_layers(&supports))
}

/// Layering of a circuit's gates; Paulis and measurements are not counted.
pub fn circuit_parallelism(c: &Circuit) -> ParallelismStats {
    let supports: Vec<&[usize]> = c
        .gates()
        .iter()
        .filter(|g| !g.kind.is_pauli() && g.kind != GateKind::MeasureZ)
        .map(|g| g.qubits.as_slice())
        .collect();
    parallelism_stats(&parallelism_layers(&supports))
}
