//! Clifford reduction: rewrites normal-form words into π/4-rotation words
//! with a single terminal Clifford, and lifts this to circuits by deferring
//! Paulis into a frame.
//!
//! The three word passes work in matrix order (leftmost factor applied last),
//! like [`MAWord`]. [`RotationWord`] stores its body in application order.

use std::fmt;

use serde::Serialize;

use crate::clifford::{CliffordClass, ROTATION_REPS};
use crate::ir::{gate_counts, Circuit, Gate, GateKind};
use crate::pauli::{Pauli, PauliFrame};
use crate::synth::{exact_unitary_of, ma_normalize, ExactUnitary, MAWord, Syllable, SynthError};
use crate::transform::segment_runs;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ReduceError {
    #[error("gate {index} ({kind}) is not in the Clifford+T gate set")]
    NotCliffordT { index: usize, kind: GateKind },
    #[error(transparent)]
    Synth(#[from] SynthError),
}

/// Matrix-order word between the reduction passes: `[S] · body · C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionWord {
    /// A leading S kept outside the body (the word began with an `SHT`
    /// syllable and no leading T).
    pub boundary_s: bool,
    pub body: Vec<GateKind>,
    pub clifford: CliffordClass,
}

impl ReductionWord {
    pub fn from_ma(w: &MAWord) -> ReductionWord {
        let mut body = Vec::new();
        if w.leading_t {
            body.push(GateKind::T);
        }
        for s in &w.syllables {
            body.extend_from_slice(s.symbols());
        }
        ReductionWord {
            boundary_s: false,
            body,
            clifford: w.clifford,
        }
    }

    pub fn application_order(&self) -> Vec<GateKind> {
        let mut w = self.clifford.canonical_word();
        w.extend(self.body.iter().rev());
        if self.boundary_s {
            w.push(GateKind::S);
        }
        w
    }

    pub fn exact(&self) -> ExactUnitary {
        exact_unitary_of(&self.application_order()).expect("reduction words are Clifford+T")
    }
}

/// A run of π/4 rotations followed by a terminal Clifford: applied as `C`,
/// then `body` in order, then the boundary S if set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RotationWord {
    /// Application order, over `{T, Tdg, RxPi4, RxPi4Dg}`.
    pub body: Vec<GateKind>,
    pub boundary_s: bool,
    #[serde(skip)]
    pub clifford: CliffordClass,
}

impl RotationWord {
    pub fn application_order(&self) -> Vec<GateKind> {
        let mut w = self.clifford.canonical_word();
        w.extend_from_slice(&self.body);
        if self.boundary_s {
            w.push(GateKind::S);
        }
        w
    }

    pub fn exact(&self) -> ExactUnitary {
        exact_unitary_of(&self.application_order()).expect("rotation words are Clifford+T")
    }

    pub fn t_count(&self) -> usize {
        self.body.len()
    }
}

impl fmt::Display for RotationWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.body.iter().map(|k| k.name()).collect();
        write!(f, "[{}] C={}", names.join(" "), self.clifford)?;
        if self.boundary_s {
            write!(f, " +S")?;
        }
        Ok(())
    }
}

/// Rewrites every interior `T·S` (matrix order) to `T†·Z` and `T†·S` to
/// `T·Z`. An S that starts the word is kept as the boundary flag.
pub fn eliminate_s(w: &MAWord) -> ReductionWord {
    let mut out = ReductionWord::from_ma(w);
    if !w.leading_t && w.syllables.first() == Some(&Syllable::SHT) {
        out.boundary_s = true;
        out.body.remove(0);
    }
    for i in 1..out.body.len() {
        if out.body[i] == GateKind::S {
            out.body[i - 1] = match out.body[i - 1] {
                GateKind::T => GateKind::Tdg,
                GateKind::Tdg => GateKind::T,
                other => unreachable!("S after {other} in normal form"),
            };
            out.body[i] = GateKind::Z;
        }
    }
    out
}

fn flip_t(k: GateKind) -> GateKind {
    match k {
        GateKind::T => GateKind::Tdg,
        GateKind::Tdg => GateKind::T,
        GateKind::RxPi4 => GateKind::RxPi4Dg,
        GateKind::RxPi4Dg => GateKind::RxPi4,
        other => other,
    }
}

/// Moves every Pauli in the body to the right (towards the terminal Clifford)
/// using `ZH = HX`, `XH = HZ`, `XT = T†X`, `ZT = TZ`, and merges the result
/// into `C`.
pub fn commute_paulis(w: &ReductionWord) -> ReductionWord {
    let mut carried = Pauli::I;
    let mut body = Vec::with_capacity(w.body.len());
    for &k in &w.body {
        match k {
            GateKind::X => carried = carried.mul(Pauli::X),
            GateKind::Y => carried = carried.mul(Pauli::Y),
            GateKind::Z => carried = carried.mul(Pauli::Z),
            GateKind::H => {
                body.push(k);
                carried = Pauli::from_xz(carried.z(), carried.x());
            }
            GateKind::T | GateKind::Tdg => {
                body.push(if carried.x() { flip_t(k) } else { k });
            }
            other => unreachable!("{other} in reduction body"),
        }
    }
    ReductionWord {
        boundary_s: w.boundary_s,
        body,
        clifford: w.clifford.then(CliffordClass::from_pauli(carried)),
    }
}

/// Moves every H to the right with `HT = RX(π/4)H`, `HT† = RX(π/4)†H` and
/// `HH = I`; an odd H count leaves one H, merged into `C`.
pub fn eliminate_h(w: &ReductionWord) -> RotationWord {
    let mut pending = false;
    let mut matrix_body = Vec::with_capacity(w.body.len());
    for &k in &w.body {
        match (k, pending) {
            (GateKind::H, _) => pending = !pending,
            (GateKind::T, true) => matrix_body.push(GateKind::RxPi4),
            (GateKind::Tdg, true) => matrix_body.push(GateKind::RxPi4Dg),
            (GateKind::T | GateKind::Tdg, false) => matrix_body.push(k),
            (other, _) => unreachable!("{other} in reduction body"),
        }
    }
    let mut clifford = w.clifford;
    if pending {
        clifford = clifford.then(CliffordClass::from_gate(GateKind::H).expect("H is Clifford"));
    }
    matrix_body.reverse();
    RotationWord {
        body: matrix_body,
        boundary_s: w.boundary_s,
        clifford,
    }
}

pub fn reduce_run(w: &MAWord) -> RotationWord {
    eliminate_h(&commute_paulis(&eliminate_s(w)))
}

/// Gates re-emitted after runs to realize the non-Pauli part of their
/// terminal Cliffords.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Reemitted {
    pub h: usize,
    pub s: usize,
}

#[derive(Clone, Debug)]
pub struct Reduced {
    pub circuit: Circuit,
    /// Paulis still pending on unmeasured qubits, applied after `circuit`.
    pub frame: PauliFrame,
    /// Classical bits whose recorded outcome must be inverted.
    pub flipped_clbits: Vec<usize>,
    pub runs: usize,
    pub boundary_s: usize,
    pub reemitted: Reemitted,
}

fn check_clifford_t(c: &Circuit) -> Result<(), ReduceError> {
    for (index, g) in c.gates().iter().enumerate() {
        let ok = g.kind.is_clifford_t_1q() || matches!(g.kind, GateKind::CX | GateKind::MeasureZ);
        if !ok {
            return Err(ReduceError::NotCliffordT { index, kind: g.kind });
        }
    }
    Ok(())
}

/// Normalizes and reduces one run `U` (with any pending Pauli applied first).
/// Returns the application-order gates to emit and the terminal Clifford.
///
/// The normal form of `Uᵀ` is taken, so that after transposing back the
/// terminal Clifford is applied last and its Pauli part can move forward.
fn reduce_unitary(u: &ExactUnitary) -> Result<(Vec<GateKind>, bool, CliffordClass), SynthError> {
    let rw = reduce_run(&ma_normalize(&u.transpose())?);
    let mut gates = Vec::with_capacity(rw.body.len() + 1);
    if rw.boundary_s {
        gates.push(GateKind::S);
    }
    gates.extend(rw.body.iter().rev());
    Ok((gates, rw.boundary_s, rw.clifford.transpose()))
}

/// Reduces every single-qubit run of a Clifford+T circuit. Pauli parts of
/// terminal Cliffords are pushed forward through CX into the next run or the
/// frame; the remaining ≤3 H/S gates are emitted right after the run.
///
/// `unitary(c) ≅ frame · unitary(result.circuit)` for unmeasured circuits.
pub fn reduce_circuit(c: &Circuit) -> Result<Reduced, ReduceError> {
    check_clifford_t(c)?;
    let runs = segment_runs(c).expect("Clifford+T circuits are decomposed");
    let mut run_at = vec![None; c.len()];
    let mut in_run = vec![false; c.len()];
    for (i, r) in runs.iter().enumerate() {
        run_at[r.start()] = Some(i);
        for &p in &r.positions {
            in_run[p] = true;
        }
    }

    let mut out = c.empty_like();
    let mut pending = PauliFrame::identity(c.num_qubits());
    let mut flipped = Vec::new();
    let mut boundary_s = 0;
    let mut reemitted = Reemitted::default();
    for (i, g) in c.gates().iter().enumerate() {
        if let Some(r) = run_at[i] {
            let run = &runs[r];
            let q = run.qubit;
            let mut word = vec![];
            let p = pending.get(q);
            if !p.is_identity() {
                word.push(pauli_gate(p));
            }
            word.extend(run.gates(c).map(|g| g.kind));
            let (gates, has_s, cliff) = reduce_unitary(&exact_unitary_of(&word)?)?;
            boundary_s += usize::from(has_s);
            out.extend_trusted(gates.into_iter().map(|k| Gate::single(k, q)));
            let rot = ROTATION_REPS[cliff.rotation_index()];
            for &k in rot {
                match k {
                    GateKind::H => reemitted.h += 1,
                    _ => reemitted.s += 1,
                }
            }
            out.extend_trusted(rot.iter().map(|&k| Gate::single(k, q)));
            pending.set(q, cliff.pauli_part());
            continue;
        }
        if in_run[i] {
            continue;
        }
        match g.kind {
            GateKind::CX => pending.propagate_cx(g.qubits[0], g.qubits[1]),
            GateKind::MeasureZ => {
                let q = g.qubits[0];
                if pending.get(q).x() {
                    flipped.push(g.clbit.unwrap_or(q));
                }
                pending.set(q, Pauli::I);
            }
            _ => unreachable!("single-qubit gates belong to runs"),
        }
        out.extend_trusted([g.clone()]);
    }
    Ok(Reduced {
        circuit: out,
        frame: pending,
        flipped_clbits: flipped,
        runs: runs.len(),
        boundary_s,
        reemitted,
    })
}

fn pauli_gate(p: Pauli) -> GateKind {
    match p {
        Pauli::X => GateKind::X,
        Pauli::Y => GateKind::Y,
        Pauli::Z => GateKind::Z,
        Pauli::I => unreachable!("identity has no gate"),
    }
}

/// Before/after counts of one gate category and the fractional reduction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KindReduction {
    pub before: usize,
    pub after: usize,
    /// `1 − after/before`, or 0 when `before` is 0.
    pub reduction: f64,
    /// `after` minus the gates re-emitted for terminal Cliffords.
    pub after_excluding_reemitted: usize,
    pub reduction_excluding_reemitted: f64,
}

impl KindReduction {
    fn new(before: usize, after: usize, reemitted: usize) -> KindReduction {
        let ratio = |a: usize| if before == 0 { 0.0 } else { 1.0 - a as f64 / before as f64 };
        let excl = after.saturating_sub(reemitted);
        KindReduction {
            before,
            after,
            reduction: ratio(after),
            after_excluding_reemitted: excl,
            reduction_excluding_reemitted: ratio(excl),
        }
    }
}

/// H, S (S + Sdg) and total Clifford (H + S + Sdg + CX) reductions. Paulis are
/// executed virtually and are left out of every count; CX is never removed but
/// stays in the total.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ReductionStats {
    pub h: KindReduction,
    pub s: KindReduction,
    pub clifford: KindReduction,
    pub cx: usize,
}

pub fn clifford_reduction_stats(before: &Circuit, after: &Circuit) -> ReductionStats {
    reduction_stats_with(before, after, Reemitted::default())
}

pub fn reduction_stats_with(before: &Circuit, after: &Circuit, reemitted: Reemitted) -> ReductionStats {
    let (b, a) = (gate_counts(before), gate_counts(after));
    let total = |g: &crate::ir::GateCounts| g.h() + g.s() + g.cx();
    ReductionStats {
        h: KindReduction::new(b.h(), a.h(), reemitted.h),
        s: KindReduction::new(b.s(), a.s(), reemitted.s),
        clifford: KindReduction::new(total(&b), total(&a), reemitted.h + reemitted.s),
        cx: a.cx(),
    }
}

impl Reduced {
    pub fn stats(&self, before: &Circuit) -> ReductionStats {
        reduction_stats_with(before, &self.circuit, self.reemitted)
    }
}

/// Fraction of π/4 rotations lying in single-qubit runs that contain at least
/// `min_len` rotations. Zero for a circuit with no rotations.
pub fn rotation_locality(c: &Circuit, min_len: usize) -> f64 {
    let Ok(runs) = segment_runs(c) else {
        return 0.0;
    };
    let (mut total, mut local) = (0usize, 0usize);
    for r in &runs {
        let n = r.gates(c).filter(|g| g.kind.is_pi4_rotation()).count();
        total += n;
        if n >= min_len {
            local += n;
        }
    }
    if total == 0 {
        0.0
    } else {
        local as f64 / total as f64
    }
}
