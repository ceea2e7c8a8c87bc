//! Circuit-level synthesis: every non-trivial rotation becomes a Clifford+T
//! word.

use std::collections::HashMap;

use rayon::prelude::*;

use super::{SynthError, Synthesized, Synthesizer};
use crate::ir::{Angle, Circuit, Gate, GateKind};

/// Rewrites RX, RY and U3 into RZ plus Clifford gates and replaces every RZ
/// whose angle is a multiple of π/4 by exact gates. Other gates pass through.
pub fn lower_rotations(c: &Circuit, tol: f64) -> Circuit {
    let mut out = c.empty_like();
    for g in c.gates() {
        let mut gates = Vec::new();
        lower_gate(g, tol, &mut gates);
        out.extend_trusted(gates);
    }
    out
}

fn lower_rz(q: usize, theta: Angle, tol: f64, out: &mut Vec<Gate>) {
    match theta.eighth_turns(tol) {
        Some(k) => out.extend(
            crate::transform::eighth_turn_word(k)
                .iter()
                .map(|&kind| Gate::single(kind, q)),
        ),
        None => out.push(Gate::rz(q, theta)),
    }
}

fn lower_gate(g: &Gate, tol: f64, out: &mut Vec<Gate>) {
    let q = g.qubits[0];
    match g.kind {
        GateKind::RZ => lower_rz(q, g.params[0], tol, out),
        GateKind::RX => {
            out.push(Gate::h(q));
            lower_rz(q, g.params[0], tol, out);
            out.push(Gate::h(q));
        }
        GateKind::RY => {
            out.extend([Gate::sdg(q), Gate::h(q)]);
            lower_rz(q, g.params[0], tol, out);
            out.extend([Gate::h(q), Gate::s(q)]);
        }
        GateKind::U3 => {
            let (theta, phi, lambda) = (g.params[0], g.params[1], g.params[2]);
            lower_rz(q, lambda, tol, out);
            lower_gate(&Gate::ry(q, theta), tol, out);
            lower_rz(q, phi, tol, out);
        }
        _ => out.push(g.clone()),
    }
}

#[derive(Clone, Debug)]
pub struct SynthesizedCircuit {
    /// Clifford+T circuit.
    pub circuit: Circuit,
    /// Number of RZ gates replaced by approximate words.
    pub rotations: usize,
    pub distinct_angles: usize,
    pub max_distance: f64,
    /// Sum of per-rotation distances: a bound on the total error.
    pub total_distance: f64,
    pub from_search: usize,
    pub from_external: usize,
}

fn angle_key(a: Angle) -> (i64, u64) {
    match a {
        Angle::Dyadic { num, exp } => (num, exp as u64),
        Angle::Radians(x) => (-1, x.to_bits()),
    }
}

/// Lowers every rotation and synthesizes each distinct non-trivial angle
/// once.
pub fn synthesize_circuit(c: &Circuit, synth: &Synthesizer) -> Result<SynthesizedCircuit, SynthError> {
    let lowered = lower_rotations(c, synth.angle_tol);
    let mut angles: Vec<Angle> = Vec::new();
    let mut index: HashMap<(i64, u64), usize> = HashMap::new();
    for g in lowered.gates() {
        if g.kind == GateKind::RZ {
            index.entry(angle_key(g.params[0])).or_insert_with(|| {
                angles.push(g.params[0]);
                angles.len() - 1
            });
        }
    }
    let words: Vec<Synthesized> = angles
        .par_iter()
        .map(|&a| synth.synthesize_rz(a))
        .collect::<Result<_, _>>()?;
    let app_words: Vec<Vec<GateKind>> = words.iter().map(|s| s.word.application_order()).collect();

    let mut out = c.empty_like();
    let mut rotations = 0;
    let (mut max_distance, mut total_distance) = (0.0f64, 0.0);
    let (mut from_search, mut from_external) = (0, 0);
    for g in lowered.gates() {
        if g.kind != GateKind::RZ {
            out.extend_trusted([g.clone()]);
            continue;
        }
        let i = index[&angle_key(g.params[0])];
        let q = g.qubits[0];
        out.extend_trusted(app_words[i].iter().map(|&k| Gate::single(k, q)));
        rotations += 1;
        max_distance = max_distance.max(words[i].distance);
        total_distance += words[i].distance;
        match words[i].source {
            super::Source::Search => from_search += 1,
            super::Source::External => from_external += 1,
            super::Source::Exact => {}
        }
    }
    Ok(SynthesizedCircuit {
        circuit: out,
        rotations,
        distinct_angles: angles.len(),
        max_distance,
        total_distance,
        from_search,
        from_external,
    })
}
