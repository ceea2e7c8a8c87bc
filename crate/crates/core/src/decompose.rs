//! Rewrites multi-qubit gates into CX plus single-qubit gates.

use crate::ir::{Circuit, Gate, GateKind};

/// Fixed replacement for one gate, in application order.
pub fn decompose_gate(g: &Gate) -> Vec<Gate> {
    let q = &g.qubits;
    match g.kind {
        GateKind::CZ => vec![Gate::h(q[1]), Gate::cx(q[0], q[1]), Gate::h(q[1])],
        GateKind::Swap => vec![
            Gate::cx(q[0], q[1]),
            Gate::cx(q[1], q[0]),
            Gate::cx(q[0], q[1]),
        ],
        GateKind::CP => {
            let (c, t) = (q[0], q[1]);
            let half = g.params[0].half();
            vec![
                Gate::rz(c, half),
                Gate::cx(c, t),
                Gate::rz(t, half.neg()),
                Gate::cx(c, t),
                Gate::rz(t, half),
            ]
        }
        GateKind::CCX => {
            let (a, b, t) = (q[0], q[1], q[2]);
            vec![
                Gate::h(t),
                Gate::cx(b, t),
                Gate::tdg(t),
                Gate::cx(a, t),
                Gate::t(t),
                Gate::cx(b, t),
                Gate::tdg(t),
                Gate::cx(a, t),
                Gate::t(b),
                Gate::t(t),
                Gate::h(t),
                Gate::cx(a, b),
                Gate::t(a),
                Gate::tdg(b),
                Gate::cx(a, b),
            ]
        }
        _ => vec![g.clone()],
    }
}

/// Output contains only CX, single-qubit gates and measurements.
pub fn decompose_to_cx_1q(c: &Circuit) -> Circuit {
    let mut out = c.empty_like();
    for g in c.gates() {
        out.extend_trusted(decompose_gate(g));
    }
    out
}

/// True when every gate is CX, a single-qubit unitary, or a measurement.
pub fn is_decomposed(c: &Circuit) -> bool {
    c.gates()
        .iter()
        .all(|g| g.kind == GateKind::CX || g.kind.num_qubits() == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::{gate_counts, Angle};
    use crate::verify::{equiv_up_to_phase, phase_distance, unitary_of};

    fn check(n: usize, g: Gate) -> Circuit {
        let c = Circuit::from_gates(n, [g]).unwrap();
        let d = decompose_to_cx_1q(&c);
        let (a, b) = (unitary_of(&c).unwrap(), unitary_of(&d).unwrap());
        assert!(phase_distance(&a, &b) < 1e-12, "{:?}", c.gates()[0].kind);
        d
    }

    #[test]
    fn cp_pi_is_cz() {
        let d = check(2, Gate::cp(0, 1, Angle::dyadic(1, 0)));
        let gc = gate_counts(&d);
        assert_eq!((gc.cx(), gc.get(GateKind::RZ)), (2, 3));
        let cz = unitary_of(&Circuit::from_gates(2, [Gate::cz(0, 1)]).unwrap()).unwrap();
        assert!(equiv_up_to_phase(&cz, &unitary_of(&d).unwrap(), 1e-12));
    }

    #[test]
    fn fixed_decompositions_are_equivalent() {
        assert_eq!(gate_counts(&check(2, Gate::swap(0, 1))).cx(), 3);
        check(2, Gate::swap(1, 0));
        check(2, Gate::cz(1, 0));
        check(3, Gate::cp(2, 0, Angle::radians(0.37)));
        let ccx = check(3, Gate::ccx(0, 1, 2));
        let gc = gate_counts(&ccx);
        assert_eq!((gc.t_count, gc.cx(), gc.h()), (7, 6, 2));
        check(3, Gate::ccx(2, 0, 1));
    }

    #[test]
    fn idempotent_and_complete() {
        let c = crate::ir::generators::qft(5);
        let d = decompose_to_cx_1q(&c);
        assert!(is_decomposed(&d));
        assert!(!is_decomposed(&c));
        assert_eq!(decompose_to_cx_1q(&d), d);
    }
}
