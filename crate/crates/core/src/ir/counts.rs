use std::collections::BTreeMap;

use serde::Serialize;

use super::angle::DEFAULT_ANGLE_TOL;
use super::circuit::Circuit;
use super::gate::GateKind;

/// Per-kind gate counts and the derived totals used throughout the reports.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GateCounts {
    pub counts: BTreeMap<String, usize>,
    pub total: usize,
    /// T + Tdg + RX(π/4) + RX(-π/4).
    pub t_count: usize,
    /// H + S + Sdg + CX + Paulis.
    pub clifford_count: usize,
    pub nontrivial_rz: usize,
}

impl GateCounts {
    pub fn get(&self, kind: GateKind) -> usize {
        self.counts.get(kind.name()).copied().unwrap_or(0)
    }

    pub fn h(&self) -> usize {
        self.get(GateKind::H)
    }

    /// S + Sdg.
    pub fn s(&self) -> usize {
        self.get(GateKind::S) + self.get(GateKind::Sdg)
    }

    pub fn cx(&self) -> usize {
        self.get(GateKind::CX)
    }

    pub fn paulis(&self) -> usize {
        self.get(GateKind::X) + self.get(GateKind::Y) + self.get(GateKind::Z)
    }
}

pub fn gate_counts(c: &Circuit) -> GateCounts {
    gate_counts_with_tol(c, DEFAULT_ANGLE_TOL)
}

pub fn gate_counts_with_tol(c: &Circuit, tol: f64) -> GateCounts {
    let mut per_kind: BTreeMap<GateKind, usize> = BTreeMap::new();
    let mut nontrivial_rz = 0;
    for g in c.gates() {
        *per_kind.entry(g.kind).or_default() += 1;
        nontrivial_rz += g.nontrivial_rotations(tol);
    }
    let get = |k: GateKind| per_kind.get(&k).copied().unwrap_or(0);
    let t_count = get(GateKind::T) + get(GateKind::Tdg) + get(GateKind::RxPi4) + get(GateKind::RxPi4Dg);
    let clifford_count = get(GateKind::H)
        + get(GateKind::S)
        + get(GateKind::Sdg)
        + get(GateKind::CX)
        + get(GateKind::X)
        + get(GateKind::Y)
        + get(GateKind::Z);
    GateCounts {
        counts: per_kind
            .into_iter()
            .map(|(k, n)| (k.name().to_string(), n))
            .collect(),
        total: c.len(),
        t_count,
        clifford_count,
        nontrivial_rz,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::Gate;

    #[test]
    fn empty_circuit_is_all_zero() {
        let gc = gate_counts(&Circuit::new(3));
        assert_eq!(gc, GateCounts::default());
    }

    #[test]
    fn derived_totals() {
        let c = Circuit::from_gates(2, [Gate::t(0), Gate::tdg(0), Gate::h(1), Gate::cx(0, 1)]).unwrap();
        let gc = gate_counts(&c);
        assert_eq!(gc.t_count, 2);
        assert_eq!(gc.clifford_count, 2);
        assert_eq!(gc.total, 4);
        assert_eq!(gc.counts.values().sum::<usize>(), gc.total);
    }
}
