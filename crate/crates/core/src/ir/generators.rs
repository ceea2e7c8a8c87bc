//! Built-in benchmark circuit generators.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Angle, Circuit, Gate};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("bad generator spec `{0}` (expected qft:N, qpe:N:seed, ising:N:steps or wstate:N)")]
pub struct GeneratorSpecError(pub String);

/// A parsed `--gen` specification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorSpec {
    Qft(usize),
    Qpe { n: usize, seed: u64 },
    Ising { n: usize, steps: usize },
    WState(usize),
}

impl GeneratorSpec {
    pub fn parse(text: &str) -> Result<GeneratorSpec, GeneratorSpecError> {
        let bad = || GeneratorSpecError(text.to_string());
        let parts: Vec<&str> = text.split(':').collect();
        let num = |i: usize| -> Result<u64, GeneratorSpecError> {
            parts.get(i).ok_or_else(bad)?.trim().parse().map_err(|_| bad())
        };
        let spec = match (parts[0], parts.len()) {
            ("qft", 2) => GeneratorSpec::Qft(num(1)? as usize),
            ("qpe", 2) => GeneratorSpec::Qpe { n: num(1)? as usize, seed: 0 },
            ("qpe", 3) => GeneratorSpec::Qpe { n: num(1)? as usize, seed: num(2)? },
            ("ising", 3) => GeneratorSpec::Ising { n: num(1)? as usize, steps: num(2)? as usize },
            ("wstate", 2) => GeneratorSpec::WState(num(1)? as usize),
            _ => return Err(bad()),
        };
        let min = match spec {
            GeneratorSpec::Qpe { .. } | GeneratorSpec::Ising { .. } | GeneratorSpec::WState(_) => 2,
            GeneratorSpec::Qft(_) => 1,
        };
        let n = match spec {
            GeneratorSpec::Qft(n) | GeneratorSpec::WState(n) => n,
            GeneratorSpec::Qpe { n, .. } | GeneratorSpec::Ising { n, .. } => n,
        };
        if n < min || n > 4096 {
            return Err(bad());
        }
        Ok(spec)
    }

    pub fn build(self) -> Circuit {
        match self {
            GeneratorSpec::Qft(n) => qft(n),
            GeneratorSpec::Qpe { n, seed } => qpe(n, seed),
            GeneratorSpec::Ising { n, steps } => ising(n, steps),
            GeneratorSpec::WState(n) => wstate(n),
        }
    }
}

fn named(mut c: Circuit, name: String) -> Circuit {
    c.name = Some(name);
    c
}

fn qft_gates(qubits: &[usize], inverse: bool) -> Vec<Gate> {
    let n = qubits.len();
    let mut gates = Vec::new();
    for j in 0..n {
        gates.push(Gate::h(qubits[j]));
        for k in j + 1..n {
            let theta = Angle::dyadic(1, (k - j) as u32);
            gates.push(Gate::cp(qubits[k], qubits[j], theta));
        }
    }
    if inverse {
        gates.reverse();
        for g in &mut gates {
            if let Some(p) = g.params.first_mut() {
                *p = p.neg();
            }
        }
    }
    gates
}

/// Textbook QFT without the final qubit reversal: `n` H gates and
/// `n(n-1)/2` controlled phases `CP(π/2^(k-j))`.
pub fn qft(n: usize) -> Circuit {
    let qubits: Vec<usize> = (0..n).collect();
    let c = Circuit::from_gates(n, qft_gates(&qubits, false)).expect("valid qft");
    named(c, format!("qft_{n}"))
}

/// Phase estimation of a single-qubit phase gate `P(φ)` with `n - 1`
/// counting qubits and the target on the last qubit prepared in `|1⟩`.
/// `φ` is drawn uniformly from `(0, 2π)` with the given seed; the controlled
/// powers are `CP(2^k φ)`.
pub fn qpe(n: usize, seed: u64) -> Circuit {
    assert!(n >= 2, "qpe needs at least one counting qubit");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let phi: f64 = rng.gen_range(0.0..2.0 * PI);
    let counting: Vec<usize> = (0..n - 1).collect();
    let target = n - 1;
    let mut gates = vec![Gate::x(target)];
    gates.extend(counting.iter().map(|&q| Gate::h(q)));
    for (k, &q) in counting.iter().enumerate() {
        let power = phi * (1u64 << k.min(62)) as f64;
        gates.push(Gate::cp(q, target, Angle::radians(power)));
    }
    gates.extend(qft_gates(&counting, true));
    let mut c = Circuit::from_gates(n, gates).expect("valid qpe");
    c.metadata.insert("phase".into(), format!("{phi:?}"));
    named(c, format!("qpe_{n}_{seed}"))
}

/// First-order Trotterization of the transverse-field Ising chain
/// `H = Σ Z_i Z_{i+1} + Σ X_i` with step `dt = 0.1`.
pub fn ising(n: usize, steps: usize) -> Circuit {
    let dt = 0.1;
    let mut gates = Vec::new();
    for _ in 0..steps {
        for i in 0..n.saturating_sub(1) {
            gates.push(Gate::cx(i, i + 1));
            gates.push(Gate::rz(i + 1, Angle::radians(2.0 * dt)));
            gates.push(Gate::cx(i, i + 1));
        }
        for i in 0..n {
            gates.push(Gate::rx(i, Angle::radians(2.0 * dt)));
        }
    }
    let c = Circuit::from_gates(n, gates).expect("valid ising");
    named(c, format!("ising_{n}_{steps}"))
}

/// Linear-depth W-state preparation from `|0…0⟩`: excite qubit 0, then move
/// amplitude down the chain with controlled-RY gates followed by a CX back.
pub fn wstate(n: usize) -> Circuit {
    let mut gates = vec![Gate::x(0)];
    for k in 0..n.saturating_sub(1) {
        let (c, t) = (k, k + 1);
        let beta = (1.0 / (n - k) as f64).sqrt().acos();
        gates.push(Gate::ry(t, Angle::radians(beta)));
        gates.push(Gate::cx(c, t));
        gates.push(Gate::ry(t, Angle::radians(-beta)));
        gates.push(Gate::cx(c, t));
        gates.push(Gate::cx(t, c));
    }
    let c = Circuit::from_gates(n, gates).expect("valid wstate");
    named(c, format!("wstate_{n}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::{gate_counts, GateKind};

    #[test]
    fn qft_counts_follow_structure() {
        for n in [1, 2, 5, 18] {
            let gc = gate_counts(&qft(n));
            assert_eq!(gc.get(GateKind::H), n);
            assert_eq!(gc.get(GateKind::CP), n * (n - 1) / 2);
        }
    }

    #[test]
    fn qpe_is_seeded() {
        assert_eq!(qpe(5, 3), qpe(5, 3));
        assert_ne!(qpe(5, 3), qpe(5, 4));
        let gc = gate_counts(&qpe(9, 1));
        assert_eq!(gc.get(GateKind::CP), 8 + 8 * 7 / 2);
    }

    #[test]
    fn parses_specs() {
        assert_eq!(GeneratorSpec::parse("qft:18").unwrap(), GeneratorSpec::Qft(18));
        assert_eq!(
            GeneratorSpec::parse("qpe:9:7").unwrap(),
            GeneratorSpec::Qpe { n: 9, seed: 7 }
        );
        assert_eq!(
            GeneratorSpec::parse("ising:4:2").unwrap(),
            GeneratorSpec::Ising { n: 4, steps: 2 }
        );
        assert!(GeneratorSpec::parse("qft").is_err());
        assert!(GeneratorSpec::parse("qft:x").is_err());
        assert!(GeneratorSpec::parse("bell:2").is_err());
        assert!(GeneratorSpec::parse("wstate:1").is_err());
    }
}
