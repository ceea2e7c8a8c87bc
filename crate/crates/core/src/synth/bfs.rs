//! Breadth-first T-count oracle over exact unitaries.

use std::collections::{HashMap, HashSet};

use super::exact::{exact_unitary_of, ExactUnitary};
use super::normal::exact_of_clifford;
use super::SynthError;
use crate::clifford::CliffordClass;
use crate::ir::GateKind;

/// All projective Clifford+T operators with T-count up to `bound`, grouped by
/// minimal T-count. Layer 0 is the Clifford group; layer `t + 1` collects the
/// unseen operators `C·T·g` for `g` in layer `t` and every Clifford `C`.
pub struct TCountOracle {
    bound: usize,
    tcount: HashMap<ExactUnitary, usize>,
}

impl TCountOracle {
    pub fn new(bound: usize) -> TCountOracle {
        let cliffords: Vec<ExactUnitary> = CliffordClass::all().map(exact_of_clifford).collect();
        let t = exact_unitary_of(&[GateKind::T]).expect("T");
        let mut tcount = HashMap::new();
        let mut layer: Vec<ExactUnitary> = Vec::new();
        for c in &cliffords {
            let key = c.canonical();
            if tcount.insert(key, 0).is_none() {
                layer.push(key);
            }
        }
        for level in 1..=bound {
            let mut next = Vec::new();
            let mut seen_here = HashSet::new();
            for g in &layer {
                let tg = t.mul(g);
                for c in &cliffords {
                    let key = c.mul(&tg).canonical();
                    if !tcount.contains_key(&key) && seen_here.insert(key) {
                        next.push(key);
                    }
                }
            }
            for key in &next {
                tcount.insert(*key, level);
            }
            layer = next;
        }
        TCountOracle { bound, tcount }
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    /// Number of distinct operators with exactly `t` T gates.
    pub fn layer_size(&self, t: usize) -> usize {
        self.tcount.values().filter(|&&v| v == t).count()
    }

    pub fn min_tcount(&self, u: &ExactUnitary) -> Option<usize> {
        self.tcount.get(&u.canonical()).copied()
    }
}

/// Exact minimal T-count of `u`, or an error if it exceeds `bound`.
pub fn bfs_min_tcount(u: &ExactUnitary, bound: usize) -> Result<usize, SynthError> {
    TCountOracle::new(bound)
        .min_tcount(u)
        .ok_or(SynthError::BoundExceeded { bound })
}
