//! Exact single-qubit Clifford+T algebra, normal forms, and Z-rotation
//! synthesis with pluggable backends.

pub mod bfs;
mod circuit;
pub mod exact;
pub mod normal;
pub mod ring;
pub mod search;
mod sidecar;

use std::fmt;
use std::str::FromStr;

pub use bfs::{bfs_min_tcount, TCountOracle};
pub use circuit::{lower_rotations, synthesize_circuit, SynthesizedCircuit};
pub use exact::{exact_unitary_of, ExactUnitary};
pub use normal::{clifford_of, is_ma_form, ma_normalize, MAWord, Syllable};
pub use ring::{RingElt, ZOmega};
pub use search::{search, word_distance, SearchConfig};
pub use sidecar::Sidecar;

use crate::ir::{Angle, Gate, GateKind};
use crate::transform::Unitary2;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SynthError {
    #[error("{0} is not a Clifford+T gate")]
    NotCliffordT(GateKind),
    #[error("operator is not exactly representable over Clifford+T")]
    NotExact,
    #[error("angle {0} is not a multiple of pi/4; the exact backend cannot synthesize it")]
    NotExactAngle(Angle),
    #[error("no word with T-count <= {bound} meets the requested precision")]
    BoundExceeded { bound: usize },
    #[error("epsilon {0} out of range")]
    InvalidEpsilon(f64),
    #[error("unknown symbol `{symbol}` at position {position} in synthesis string")]
    UnknownSymbol { symbol: char, position: usize },
    #[error("synthesis file line {line}: {msg}")]
    Sidecar { line: usize, msg: String },
    #[error("exact word exceeds the supported denominator size")]
    TooLarge,
    #[error("synthesis file entry for angle {theta} is {distance:e} away, above epsilon {eps:e}")]
    SidecarMismatch { theta: f64, distance: f64, eps: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    /// Multiples of π/4 only, exact.
    Exact,
    /// Bounded minimal-T-count search.
    Search,
    /// Pre-synthesized strings from a file, falling back to search.
    External,
}

impl FromStr for Backend {
    type Err = String;
    fn from_str(s: &str) -> Result<Backend, String> {
        match s.to_ascii_lowercase().as_str() {
            "exact" => Ok(Backend::Exact),
            "search" => Ok(Backend::Search),
            "external" => Ok(Backend::External),
            other => Err(format!("unknown backend `{other}` (expected exact, search or external)")),
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Exact => "exact",
            Backend::Search => "search",
            Backend::External => "external",
        })
    }
}

/// Where a synthesized word came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Exact,
    Search,
    External,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Synthesized {
    pub word: MAWord,
    /// Projective distance to the target rotation, recomputed in floats.
    pub distance: f64,
    pub source: Source,
}

/// Parses a matrix-order synthesis string over `{H, T, S, X, W, I}` into an
/// application-order gate list. `W` (a global phase of `ω`) and `I` are
/// dropped.
pub fn parse_synth_string(s: &str) -> Result<Vec<GateKind>, SynthError> {
    let mut out = Vec::with_capacity(s.len());
    for (position, ch) in s.chars().enumerate() {
        match ch {
            'H' => out.push(GateKind::H),
            'T' => out.push(GateKind::T),
            'S' => out.push(GateKind::S),
            'X' => out.push(GateKind::X),
            'W' | 'I' => {}
            symbol => return Err(SynthError::UnknownSymbol { symbol, position }),
        }
    }
    out.reverse();
    Ok(out)
}

/// Matrix of `RZ(θ)`.
pub fn rz_matrix(theta: Angle) -> Unitary2 {
    Unitary2::of_gate(&Gate::rz(0, theta))
}

/// Exact normal form of `RZ(kπ/4)`, or `None` for other angles.
pub fn exact_rz_word(theta: Angle, tol: f64) -> Option<MAWord> {
    let k = theta.eighth_turns(tol)?;
    let word = crate::transform::eighth_turn_word(k);
    let u = exact_unitary_of(word).expect("Clifford+T word");
    Some(ma_normalize(&u).expect("exact input"))
}

/// Z-rotation synthesizer: a backend, a precision, and the backend's
/// resources.
#[derive(Clone, Debug)]
pub struct Synthesizer {
    pub backend: Backend,
    pub eps: f64,
    pub angle_tol: f64,
    pub search: SearchConfig,
    pub sidecar: Option<Sidecar>,
}

impl Synthesizer {
    pub fn new(backend: Backend, eps: f64) -> Synthesizer {
        Synthesizer {
            backend,
            eps,
            angle_tol: crate::ir::DEFAULT_ANGLE_TOL,
            search: SearchConfig::default(),
            sidecar: None,
        }
    }

    pub fn with_sidecar(mut self, sidecar: Sidecar) -> Synthesizer {
        self.sidecar = Some(sidecar);
        self
    }

    pub fn with_search(mut self, cfg: SearchConfig) -> Synthesizer {
        self.search = cfg;
        self
    }

    /// Word `W` with `d(W, RZ(θ)) ≤ ε`.
    pub fn synthesize_rz(&self, theta: Angle) -> Result<Synthesized, SynthError> {
        if !(self.eps > 0.0) {
            return Err(SynthError::InvalidEpsilon(self.eps));
        }
        let target = rz_matrix(theta);
        if let Some(word) = exact_rz_word(theta, self.angle_tol) {
            let distance = word_distance(&word, &target);
            return Ok(Synthesized { word, distance, source: Source::Exact });
        }
        match self.backend {
            Backend::Exact => Err(SynthError::NotExactAngle(theta)),
            Backend::Search => self.run_search(&target),
            Backend::External => {
                if let Some(sc) = &self.sidecar {
                    if let Some(word) = sc.lookup(theta, self.eps, self.angle_tol) {
                        let distance = word_distance(&word, &target);
                        if distance > self.eps {
                            return Err(SynthError::SidecarMismatch {
                                theta: theta.to_radians(),
                                distance,
                                eps: self.eps,
                            });
                        }
                        return Ok(Synthesized { word, distance, source: Source::External });
                    }
                }
                self.run_search(&target)
            }
        }
    }

    fn run_search(&self, target: &Unitary2) -> Result<Synthesized, SynthError> {
        let word = search(target, self.eps, &self.search)?;
        let distance = word_distance(&word, target);
        Ok(Synthesized { word, distance, source: Source::Search })
    }
}
