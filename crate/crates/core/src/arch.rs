//! Surface-code architecture model: a memory block holding idle qubits, one
//! or more compute blocks running π/4-rotation sequences, a serial cost
//! baseline, and a list scheduler over both.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::ir::{Circuit, GateKind};
use crate::pbc::{circuit_parallelism, ParallelismStats};
use crate::reduce::{clifford_reduction_stats, ReductionStats};

/// Cycles for one π/4 rotation inside a compute block.
pub const COMPUTE_ROTATION_CYCLES: f64 = 1.0;
/// Cycles to move a qubit between the memory block and a compute block.
pub const TRANSFER_CYCLES: f64 = 1.0;
/// Cycles to expose the other edge of a memory patch.
pub const PATCH_ROTATION_CYCLES: f64 = 3.0;
/// Rotations an S gate costs when executed as two T gates.
pub const S_AS_ROTATIONS: usize = 2;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ArchError {
    #[error("gate {index} ({kind}) cannot be executed; decompose and synthesize first")]
    Unsupported { index: usize, kind: GateKind },
    #[error("invalid cost model: {0}")]
    CostModel(String),
    #[error("compute block count must be at least 1")]
    NoComputeBlocks,
}

/// Code cycles per logical gate. Paulis and measurements are free.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CostModel {
    pub r_pi4: f64,
    pub s: f64,
    pub cx: f64,
    pub h: f64,
    pub h_range: (f64, f64),
}

impl Default for CostModel {
    fn default() -> Self {
        CostModel { r_pi4: 2.0, s: 2.0, cx: 2.0, h: 2.5, h_range: (1.0, 4.0) }
    }
}

impl CostModel {
    /// Default costs with a one-cycle H, as used for the 100-qubit QFT mix.
    pub fn unit_h() -> CostModel {
        CostModel { h: 1.0, ..CostModel::default() }
    }

    pub fn with_h(self, h: f64) -> CostModel {
        CostModel { h, ..self }
    }

    /// Parses a TOML table such as `h = 1.0`; missing keys keep defaults.
    pub fn from_toml(text: &str) -> Result<CostModel, ArchError> {
        let cm: CostModel = toml::from_str(text).map_err(|e| ArchError::CostModel(e.to_string()))?;
        cm.validate()?;
        Ok(cm)
    }

    pub fn validate(&self) -> Result<(), ArchError> {
        let fields = [("r_pi4", self.r_pi4), ("s", self.s), ("cx", self.cx), ("h", self.h)];
        for (name, v) in fields {
            if !(v.is_finite() && v > 0.0) {
                return Err(ArchError::CostModel(format!("{name} must be positive, got {v}")));
            }
        }
        let (lo, hi) = self.h_range;
        if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
            return Err(ArchError::CostModel(format!("bad h_range ({lo}, {hi})")));
        }
        Ok(())
    }

    /// Cycles of one gate in the serial model, or `None` for gates outside
    /// the Clifford+T set.
    pub fn gate_cost(&self, kind: GateKind) -> Option<f64> {
        Some(match kind {
            GateKind::T | GateKind::Tdg | GateKind::RxPi4 | GateKind::RxPi4Dg => self.r_pi4,
            GateKind::S | GateKind::Sdg => self.s,
            GateKind::CX => self.cx,
            GateKind::H => self.h,
            GateKind::X | GateKind::Y | GateKind::Z | GateKind::MeasureZ => 0.0,
            _ => return None,
        })
    }
}

/// Sum of per-gate cycles, one gate at a time.
pub fn serial_time_cost(c: &Circuit, cm: &CostModel) -> Result<f64, ArchError> {
    c.gates().iter().enumerate().try_fold(0.0, |acc, (index, g)| {
        cm.gate_cost(g.kind)
            .map(|x| acc + x)
            .ok_or(ArchError::Unsupported { index, kind: g.kind })
    })
}

/// Gate totals without a circuit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GateMix {
    pub t: f64,
    pub s: f64,
    pub h: f64,
    pub cx: f64,
}

impl GateMix {
    /// The Clifford+T gate mix of a 100-qubit QFT.
    pub const QFT100: GateMix = GateMix { t: 155e3, s: 85e3, h: 155e3, cx: 3e3 };
    /// The same circuit after Clifford reduction.
    pub const QFT100_REDUCED: GateMix = GateMix { t: 155e3, s: 3e3, h: 1e3, cx: 3e3 };

    pub fn serial_cost(&self, cm: &CostModel) -> f64 {
        self.t * cm.r_pi4 + self.s * cm.s + self.h * cm.h + self.cx * cm.cx
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Edge {
    X,
    Z,
}

/// Memory-block site of one logical qubit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MemorySlot {
    pub qubit: usize,
    /// 1 or 3; row 2 is the ancilla row.
    pub row: usize,
    pub column: usize,
    pub exposed: Edge,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LayoutPlan {
    pub n: usize,
    pub compute_blocks: usize,
    pub memory_tiles: usize,
    pub compute_tiles: usize,
    pub total_tiles: usize,
    pub slots: Vec<MemorySlot>,
}

pub const TILES_PER_COMPUTE_BLOCK: usize = 4;

/// Qubits fill rows 1 and 3 column by column around a shared ancilla row:
/// `ceil(1.5n)` memory tiles plus four per compute block.
pub fn plan_layout(n: usize, m: usize) -> Result<LayoutPlan, ArchError> {
    if m == 0 {
        return Err(ArchError::NoComputeBlocks);
    }
    let memory_tiles = (3 * n).div_ceil(2);
    let slots = (0..n)
        .map(|q| MemorySlot { qubit: q, row: if q % 2 == 0 { 1 } else { 3 }, column: q / 2, exposed: Edge::Z })
        .collect();
    Ok(LayoutPlan {
        n,
        compute_blocks: m,
        memory_tiles,
        compute_tiles: TILES_PER_COMPUTE_BLOCK * m,
        total_tiles: memory_tiles + TILES_PER_COMPUTE_BLOCK * m,
        slots,
    })
}

/// Tile count of the compact-block layout this design is compared against:
/// `2n + √(8n) + 1`.
pub fn baseline_tiles(n: usize) -> f64 {
    let n = n as f64;
    2.0 * n + (8.0 * n).sqrt() + 1.0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Resource {
    Memory(usize),
    Bus,
    Compute(usize),
}

impl fmt::Display for Resource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Resource::Memory(q) => write!(f, "memory{q}"),
            Resource::Bus => write!(f, "bus"),
            Resource::Compute(j) => write!(f, "compute{j}"),
        }
    }
}

impl Serialize for Resource {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScheduleEvent {
    pub start: f64,
    pub duration: f64,
    pub resource: Resource,
    pub op: &'static str,
    pub qubits: Vec<usize>,
    /// For rotation events: the number of rotations executed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rotations: Option<usize>,
}

impl ScheduleEvent {
    pub fn end(&self) -> f64 {
        self.start + self.duration
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Schedule {
    pub total_cycles: f64,
    pub events: Vec<ScheduleEvent>,
}

impl Schedule {
    /// One line per event, grouped by resource.
    pub fn gantt(&self) -> String {
        let mut by_res: BTreeMap<Resource, Vec<&ScheduleEvent>> = BTreeMap::new();
        for e in &self.events {
            by_res.entry(e.resource).or_default().push(e);
        }
        let mut out = String::new();
        writeln!(out, "total {} cycles", self.total_cycles).unwrap();
        for (res, events) in by_res {
            writeln!(out, "{res}:").unwrap();
            for e in events {
                let qs: Vec<String> = e.qubits.iter().map(|q| format!("q{q}")).collect();
                write!(out, "  {:>10.1} {:>10.1}  {} {}", e.start, e.end(), e.op, qs.join(",")).unwrap();
                if let Some(r) = e.rotations {
                    write!(out, " x{r}").unwrap();
                }
                out.push('\n');
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
enum OpKind {
    /// π/4 rotations (S counted as two) run in a compute block.
    Session { rotations: usize },
    H,
    Cx,
}

#[derive(Clone, Debug)]
struct Op {
    kind: OpKind,
    qubits: Vec<usize>,
}

/// Groups the circuit into scheduler operations: maximal same-qubit
/// sequences of π/4 rotations and S gates become one session; Paulis and
/// measurements take no time and are dropped.
fn build_ops(c: &Circuit) -> Result<Vec<Op>, ArchError> {
    let mut ops: Vec<Op> = Vec::new();
    let mut open: Vec<Option<usize>> = vec![None; c.num_qubits()];
    for (index, g) in c.gates().iter().enumerate() {
        let weight = match g.kind {
            GateKind::T | GateKind::Tdg | GateKind::RxPi4 | GateKind::RxPi4Dg => Some(1),
            GateKind::S | GateKind::Sdg => Some(S_AS_ROTATIONS),
            _ => None,
        };
        if let Some(w) = weight {
            let q = g.qubit();
            match open[q] {
                Some(i) => {
                    if let OpKind::Session { rotations } = &mut ops[i].kind {
                        *rotations += w;
                    }
                }
                None => {
                    open[q] = Some(ops.len());
                    ops.push(Op { kind: OpKind::Session { rotations: w }, qubits: vec![q] });
                }
            }
            continue;
        }
        match g.kind {
            GateKind::X | GateKind::Y | GateKind::Z => {}
            GateKind::MeasureZ => open[g.qubit()] = None,
            GateKind::H => {
                open[g.qubit()] = None;
                ops.push(Op { kind: OpKind::H, qubits: vec![g.qubit()] });
            }
            GateKind::CX => {
                for &q in &g.qubits {
                    open[q] = None;
                }
                ops.push(Op { kind: OpKind::Cx, qubits: g.qubits.clone() });
            }
            kind => return Err(ArchError::Unsupported { index, kind }),
        }
    }
    Ok(ops)
}

/// Greedy list scheduler. At each step the ready operation (head of all of
/// its qubits' queues) with the earliest feasible start is placed; ties go to
/// the lowest qubit index, then program order.
///
/// Sessions take a compute block for `1 + L + 1` cycles. CX holds the single
/// ancilla bus for `cx` cycles, preceded by a patch rotation on any operand
/// whose exposed edge was flipped by an odd number of H gates. H runs in
/// place for `h` cycles.
pub fn schedule(c: &Circuit, plan: &LayoutPlan, cm: &CostModel) -> Result<Schedule, ArchError> {
    if plan.compute_blocks == 0 {
        return Err(ArchError::NoComputeBlocks);
    }
    let ops = build_ops(c)?;
    let n = c.num_qubits();
    let mut queues: Vec<std::collections::VecDeque<usize>> = vec![Default::default(); n];
    for (i, op) in ops.iter().enumerate() {
        for &q in &op.qubits {
            queues[q].push_back(i);
        }
    }
    let mut exposed: Vec<Edge> = (0..n).map(|q| plan.slots.get(q).map_or(Edge::Z, |s| s.exposed)).collect();
    let home = exposed.clone();
    let mut qready = vec![0.0f64; n];
    let mut compute_free = vec![0.0f64; plan.compute_blocks];
    let mut bus_free = 0.0f64;
    let mut events = Vec::new();
    let mut done = 0;

    let is_ready = |i: usize, queues: &[std::collections::VecDeque<usize>]| {
        ops[i].qubits.iter().all(|&q| queues[q].front() == Some(&i))
    };

    while done < ops.len() {
        let mut best: Option<(f64, usize, usize)> = None;
        for q in 0..n {
            let Some(&i) = queues[q].front() else { continue };
            // Evaluate each op once, from its lowest qubit.
            if ops[i].qubits.iter().any(|&p| p < q) || !is_ready(i, &queues) {
                continue;
            }
            let op = &ops[i];
            let start = match op.kind {
                OpKind::Session { .. } => {
                    let free = compute_free.iter().cloned().fold(f64::INFINITY, f64::min);
                    qready[q].max(free)
                }
                OpKind::H => qready[q],
                OpKind::Cx => {
                    let mut s = bus_free;
                    for &p in &op.qubits {
                        let rot = if exposed[p] != home[p] { PATCH_ROTATION_CYCLES } else { 0.0 };
                        s = s.max(qready[p] + rot);
                    }
                    s
                }
            };
            let better = match best {
                None => true,
                Some((bs, bq, bi)) => start < bs || (start == bs && (q, i) < (bq, bi)),
            };
            if better {
                best = Some((start, q, i));
            }
        }
        let (start, _, i) = best.expect("the dependency graph is acyclic");
        let op = &ops[i];
        match op.kind {
            OpKind::Session { rotations } => {
                let q = op.qubits[0];
                let j = (0..compute_free.len())
                    .find(|&j| compute_free[j] <= start)
                    .expect("a block is free at the chosen start");
                let res = Resource::Compute(j);
                let body = rotations as f64 * COMPUTE_ROTATION_CYCLES;
                let mut t = start;
                for (tag, dur, rot) in [
                    ("transfer_in", TRANSFER_CYCLES, None),
                    ("rotations", body, Some(rotations)),
                    ("transfer_out", TRANSFER_CYCLES, None),
                ] {
                    events.push(ScheduleEvent { start: t, duration: dur, resource: res, op: tag, qubits: vec![q], rotations: rot });
                    t += dur;
                }
                compute_free[j] = t;
                qready[q] = t;
            }
            OpKind::H => {
                let q = op.qubits[0];
                events.push(ScheduleEvent { start, duration: cm.h, resource: Resource::Memory(q), op: "h", qubits: vec![q], rotations: None });
                qready[q] = start + cm.h;
                exposed[q] = if exposed[q] == Edge::Z { Edge::X } else { Edge::Z };
            }
            OpKind::Cx => {
                for &p in &op.qubits {
                    if exposed[p] != home[p] {
                        events.push(ScheduleEvent {
                            start: qready[p],
                            duration: PATCH_ROTATION_CYCLES,
                            resource: Resource::Memory(p),
                            op: "patch_rotation",
                            qubits: vec![p],
                            rotations: None,
                        });
                        exposed[p] = home[p];
                    }
                }
                events.push(ScheduleEvent { start, duration: cm.cx, resource: Resource::Bus, op: "cx", qubits: op.qubits.clone(), rotations: None });
                bus_free = start + cm.cx;
                for &p in &op.qubits {
                    qready[p] = start + cm.cx;
                }
            }
        }
        for &q in &op.qubits {
            queues[q].pop_front();
        }
        done += 1;
    }
    let total_cycles = events.iter().map(|e| e.end()).fold(0.0, f64::max);
    Ok(Schedule { total_cycles, events })
}

fn ratio(base: f64, new: f64) -> f64 {
    if new == 0.0 {
        if base == 0.0 { 1.0 } else { f64::INFINITY }
    } else {
        base / new
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CostReport {
    pub baseline_serial_cycles: f64,
    pub reduced_serial_cycles: f64,
    pub serial_speedup: f64,
    /// Serial speedup with H priced at each end of `h_range`.
    pub serial_speedup_h_range: (f64, f64),
    pub baseline_scheduled_cycles: f64,
    pub reduced_scheduled_cycles: f64,
    pub scheduled_speedup: f64,
    pub tiles: usize,
    pub baseline_tiles: f64,
    pub compute_blocks: usize,
    pub reduction: ReductionStats,
    pub parallelism: ParallelismStats,
}

/// Compares a Clifford+T circuit with its reduced form under both the serial
/// model and the scheduler.
pub fn speedup_report(original: &Circuit, reduced: &Circuit, plan: &LayoutPlan, cm: &CostModel) -> Result<CostReport, ArchError> {
    let serial = |cm: &CostModel| -> Result<(f64, f64), ArchError> {
        Ok((serial_time_cost(original, cm)?, serial_time_cost(reduced, cm)?))
    };
    let (bs, rs) = serial(cm)?;
    let (lo_b, lo_r) = serial(&cm.with_h(cm.h_range.0))?;
    let (hi_b, hi_r) = serial(&cm.with_h(cm.h_range.1))?;
    let bsched = schedule(original, plan, cm)?.total_cycles;
    let rsched = schedule(reduced, plan, cm)?.total_cycles;
    Ok(CostReport {
        baseline_serial_cycles: bs,
        reduced_serial_cycles: rs,
        serial_speedup: ratio(bs, rs),
        serial_speedup_h_range: (ratio(lo_b, lo_r), ratio(hi_b, hi_r)),
        baseline_scheduled_cycles: bsched,
        reduced_scheduled_cycles: rsched,
        scheduled_speedup: ratio(bsched, rsched),
        tiles: plan.total_tiles,
        baseline_tiles: baseline_tiles(plan.n),
        compute_blocks: plan.compute_blocks,
        reduction: clifford_reduction_stats(original, reduced),
        parallelism: circuit_parallelism(reduced),
    })
}
