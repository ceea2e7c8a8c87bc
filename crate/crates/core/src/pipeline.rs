//! End-to-end flow: decompose, transform, synthesize, reduce, then cost the
//! result and compare its parallelism with the Pauli-based baseline.

use serde::Serialize;
use serde_json::Value;

use crate::arch::{plan_layout, schedule, speedup_report, ArchError, CostModel, CostReport, Schedule};
use crate::decompose::decompose_to_cx_1q;
use crate::ir::{gate_counts, Circuit, GateCounts};
use crate::pbc::{circuit_parallelism, pbc_parallelism, to_pbc, ParallelismStats, PbcError, PbcProgram};
use crate::reduce::{reduce_circuit, rotation_locality, ReduceError, Reemitted, ReductionStats};
use crate::synth::{synthesize_circuit, Backend, SearchConfig, Sidecar, SynthError, Synthesizer};
use crate::transform::{rz_count_with_tol, transform_with_tol, TransformError};
use crate::verify::{phase_distance, unitary_of, VerifyError, MAX_QUBITS};

pub const REPORT_SCHEMA: u32 = 1;
/// Rotations in a run needed for the run to count as local.
pub const LOCALITY_MIN_RUN: usize = 10;

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Synth(#[from] SynthError),
    #[error(transparent)]
    Reduce(#[from] ReduceError),
    #[error(transparent)]
    Arch(#[from] ArchError),
    #[error(transparent)]
    Pbc(#[from] PbcError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error("verification failed: distance {distance:e} exceeds tolerance {tolerance:e}")]
    VerificationFailed { distance: f64, tolerance: f64 },
}

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub epsilon: f64,
    pub backend: Backend,
    pub angle_tol: f64,
    pub search: SearchConfig,
    pub sidecar: Option<Sidecar>,
    pub cost_model: CostModel,
    pub compute_blocks: usize,
    /// Check the result against the input by dense simulation (at most
    /// [`MAX_QUBITS`] qubits, no measurements).
    pub verify: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            epsilon: 1e-3,
            backend: Backend::Search,
            angle_tol: crate::ir::DEFAULT_ANGLE_TOL,
            search: SearchConfig::default(),
            sidecar: None,
            cost_model: CostModel::default(),
            compute_blocks: 1,
            verify: false,
        }
    }
}

impl PipelineConfig {
    pub fn synthesizer(&self) -> Synthesizer {
        let mut s = Synthesizer::new(self.backend, self.epsilon).with_search(self.search);
        s.angle_tol = self.angle_tol;
        if let Some(sc) = &self.sidecar {
            s = s.with_sidecar(sc.clone());
        }
        s
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StageCounts {
    pub input: GateCounts,
    pub decomposed: GateCounts,
    pub transformed: GateCounts,
    pub synthesized: GateCounts,
    pub reduced: GateCounts,
}

#[derive(Clone, Debug, Serialize)]
pub struct RzCounts {
    pub decomposed: usize,
    pub transformed: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SynthesisSummary {
    pub backend: Backend,
    pub epsilon: f64,
    pub rotations: usize,
    pub distinct_angles: usize,
    pub max_distance: f64,
    pub total_distance: f64,
    pub from_search: usize,
    pub from_external: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReductionSummary {
    pub stats: ReductionStats,
    pub runs: usize,
    pub boundary_s: usize,
    pub reemitted: Reemitted,
    /// Pending Paulis on unmeasured qubits, qubit 0 first.
    pub frame: String,
    pub flipped_clbits: Vec<usize>,
    pub locality_min_run: usize,
    pub locality: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ParallelismComparison {
    pub taco: ParallelismStats,
    pub pbc: ParallelismStats,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verification {
    pub distance: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub circuit: String,
    pub qubits: usize,
    pub counts: StageCounts,
    pub rz: RzCounts,
    pub synthesis: SynthesisSummary,
    pub reduction: ReductionSummary,
    pub cost: CostReport,
    pub parallelism: ParallelismComparison,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<Verification>,
}

impl Report {
    /// Pretty JSON with every float rounded to six decimals, so equal runs
    /// give identical bytes.
    pub fn to_json(&self) -> String {
        to_stable_json(self)
    }
}

fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64 number");
            let r = (x * 1e6).round() / 1e6;
            *v = serde_json::Number::from_f64(if r == 0.0 { 0.0 } else { r }).map_or(Value::Null, Value::Number);
        }
        Value::Array(a) => a.iter_mut().for_each(round_floats),
        Value::Object(o) => o.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// Serializes with floats rounded to six decimals.
pub fn to_stable_json<T: Serialize>(value: &T) -> String {
    let mut v = serde_json::to_value(value).expect("report types serialize");
    round_floats(&mut v);
    serde_json::to_string_pretty(&v).expect("json value serializes") + "\n"
}

#[derive(Clone, Debug)]
pub struct PipelineOutput {
    pub report: Report,
    pub synthesized: Circuit,
    pub reduced: Circuit,
    pub pbc: PbcProgram,
    pub schedule: Schedule,
}

pub fn run_pipeline(input: &Circuit, cfg: &PipelineConfig) -> Result<PipelineOutput, PipelineError> {
    let decomposed = decompose_to_cx_1q(input);
    let transformed = transform_with_tol(&decomposed, cfg.angle_tol)?;
    let synth = synthesize_circuit(&transformed, &cfg.synthesizer())?;
    let reduced = reduce_circuit(&synth.circuit)?;
    let plan = plan_layout(input.num_qubits(), cfg.compute_blocks)?;
    let cost = speedup_report(&synth.circuit, &reduced.circuit, &plan, &cfg.cost_model)?;
    let sched = schedule(&reduced.circuit, &plan, &cfg.cost_model)?;
    let pbc = to_pbc(&synth.circuit)?;

    let verification = if cfg.verify && input.num_qubits() <= MAX_QUBITS && !input.has_measurements() {
        let before = unitary_of(input)?;
        let mut after = unitary_of(&reduced.circuit)?;
        after.apply_frame(&reduced.frame);
        let distance = phase_distance(&before, &after);
        let tolerance = synth.rotations as f64 * cfg.epsilon + 1e-9;
        if distance > tolerance {
            return Err(PipelineError::VerificationFailed { distance, tolerance });
        }
        Some(Verification { distance, tolerance, passed: true })
    } else {
        None
    };

    let report = Report {
        schema: REPORT_SCHEMA,
        circuit: input.name.clone().unwrap_or_else(|| "circuit".to_string()),
        qubits: input.num_qubits(),
        counts: StageCounts {
            input: gate_counts(input),
            decomposed: gate_counts(&decomposed),
            transformed: gate_counts(&transformed),
            synthesized: gate_counts(&synth.circuit),
            reduced: gate_counts(&reduced.circuit),
        },
        rz: RzCounts {
            decomposed: rz_count_with_tol(&decomposed, cfg.angle_tol),
            transformed: rz_count_with_tol(&transformed, cfg.angle_tol),
        },
        synthesis: SynthesisSummary {
            backend: cfg.backend,
            epsilon: cfg.epsilon,
            rotations: synth.rotations,
            distinct_angles: synth.distinct_angles,
            max_distance: synth.max_distance,
            total_distance: synth.total_distance,
            from_search: synth.from_search,
            from_external: synth.from_external,
        },
        reduction: ReductionSummary {
            stats: reduced.stats(&synth.circuit),
            runs: reduced.runs,
            boundary_s: reduced.boundary_s,
            reemitted: reduced.reemitted,
            frame: reduced.frame.to_string(),
            flipped_clbits: reduced.flipped_clbits.clone(),
            locality_min_run: LOCALITY_MIN_RUN,
            locality: rotation_locality(&reduced.circuit, LOCALITY_MIN_RUN),
        },
        cost,
        parallelism: ParallelismComparison {
            taco: circuit_parallelism(&reduced.circuit),
            pbc: pbc_parallelism(&pbc),
        },
        verification,
    };
    Ok(PipelineOutput { report, synthesized: synth.circuit, reduced: reduced.circuit, pbc, schedule: sched })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::generators::qft;

    #[test]
    fn qft4_verifies() {
        let cfg = PipelineConfig { epsilon: 1e-2, verify: true, ..PipelineConfig::default() };
        let out = run_pipeline(&qft(4), &cfg).unwrap();
        let v = out.report.verification.as_ref().unwrap();
        assert!(v.passed);
        assert_eq!(out.report.schema, 1);
        assert!(out.report.reduction.stats.h.reduction > 0.5);
        assert_eq!(out.report.to_json(), run_pipeline(&qft(4), &cfg).unwrap().report.to_json());
    }
}
