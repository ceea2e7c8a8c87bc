use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use taco_core::ir::{Circuit, Gate, GateKind};
use taco_core::pauli::Pauli;
use taco_core::pbc::{to_pbc, CliffordTableau, PauliString};
use taco_core::clifford::CliffordClass;
use taco_core::verify::{phase_distance, unitary_of, DenseUnitary};

const CLIFFORDS: [GateKind; 6] = [GateKind::H, GateKind::S, GateKind::Sdg, GateKind::X, GateKind::Y, GateKind::Z];

fn random_circuit(rng: &mut ChaCha8Rng, n: usize, len: usize, t_prob: f64) -> Circuit {
    let mut c = Circuit::new(n);
    for _ in 0..len {
        let q = rng.gen_range(0..n);
        if n > 1 && rng.gen_bool(0.25) {
            let t = (q + rng.gen_range(1..n)) % n;
            c.push(Gate::cx(q, t)).unwrap();
        } else if rng.gen_bool(t_prob) {
            let k = [GateKind::T, GateKind::Tdg, GateKind::RxPi4, GateKind::RxPi4Dg][rng.gen_range(0..4)];
            c.push(Gate::single(k, q)).unwrap();
        } else {
            c.push(Gate::single(CLIFFORDS[rng.gen_range(0..6)], q)).unwrap();
        }
    }
    c
}

fn letter_matrix(p: Pauli) -> [C; 4] {
    let (o, l, i) = (C::new(0.0, 0.0), C::new(1.0, 0.0), C::new(0.0, 1.0));
    match p {
        Pauli::I => [l, o, o, l],
        Pauli::X => [o, l, l, o],
        Pauli::Y => [o, -i, i, o],
        Pauli::Z => [l, o, o, -l],
    }
}

/// Dense matrix of a Pauli string, built one letter at a time.
fn pauli_dense(p: &PauliString) -> DenseUnitary {
    let mut u = DenseUnitary::identity(p.letters.len());
    for (q, &l) in p.letters.iter().enumerate() {
        u.apply(&letter_matrix(l), &[q]);
    }
    u
}

fn dense_entries(u: &DenseUnitary) -> Vec<C> {
    let d = u.dim();
    (0..d * d).map(|k| u.get(k / d, k % d)).collect()
}

#[test]
fn tableau_matches_dense_conjugation() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for case in 0..200 {
        let n = 1 + case % 6;
        let c = random_circuit(&mut rng, n, 30, 0.0);
        let mut tab = CliffordTableau::identity(n);
        for g in c.gates() {
            if g.kind == GateKind::CX {
                tab.apply_cx(g.qubits[0], g.qubits[1]);
            } else {
                tab.apply_1q(g.qubit(), CliffordClass::from_gate(g.kind).unwrap());
            }
        }
        assert!(tab.is_symplectic());
        let u = unitary_of(&c).unwrap();
        for q in 0..n {
            for p in [Pauli::X, Pauli::Z] {
                // U† P U
                let mut conj = pauli_dense(&PauliString::single(n, q, p));
                let mut left = u.adjoint_mul(&conj);
                left = left.mul(&u);
                conj = pauli_dense(&tab.image(q, p));
                let sign = if tab.image(q, p).is_negative() { -1.0 } else { 1.0 };
                for (a, b) in dense_entries(&left).iter().zip(dense_entries(&conj)) {
                    assert!((a - b * sign).norm() < 1e-9, "case {case}");
                }
            }
        }
    }
}

#[test]
fn rotations_reproduce_circuit() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (a, b) = ((std::f64::consts::PI / 8.0).cos(), (std::f64::consts::PI / 8.0).sin());
    for _ in 0..50 {
        let n = 3;
        let c = random_circuit(&mut rng, n, 40, 0.3);
        let p = to_pbc(&c).unwrap();
        let t_count = c.gates().iter().filter(|g| g.kind.is_pi4_rotation()).count();
        assert_eq!(p.rotations.len(), t_count);
        let cliff: Vec<Gate> = c.gates().iter().filter(|g| !g.kind.is_pi4_rotation()).cloned().collect();
        let u = unitary_of(&Circuit::from_gates(n, cliff).unwrap()).unwrap();
        // rebuild: R_1 … R_k then U
        let mut acc = DenseUnitary::identity(n);
        for r in &p.rotations {
            let pm = pauli_dense(&r.pauli);
            // exp(-iπ/8 P) = cos·I − i sin·P, with the sign already in `pauli`
            let sign = if r.is_inverse() { -1.0 } else { 1.0 };
            let rot = DenseUnitary::from_fn(n, |i, j| {
                let id = if i == j { C::new(a, 0.0) } else { C::new(0.0, 0.0) };
                id - C::new(0.0, b * sign) * pm.get(i, j)
            });
            acc = rot.mul(&acc);
        }
        acc = u.mul(&acc);
        assert!(phase_distance(&acc, &unitary_of(&c).unwrap()) < 1e-9);
    }
}
