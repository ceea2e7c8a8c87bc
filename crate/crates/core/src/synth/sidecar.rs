//! Pre-synthesized rotation words read from a text file.
//!
//! One entry per line: `<theta> <epsilon> <string>`, where `theta` is radians
//! or a `pi` expression, and `string` is a matrix-order word over
//! `{H, T, S, X, W, I}`. Blank lines and lines starting with `#` are ignored.

use std::f64::consts::PI;

use super::exact::exact_unitary_of;
use super::normal::{ma_normalize, MAWord};
use super::{parse_synth_string, SynthError};
use crate::ir::{parse_angle_expr, Angle};

#[derive(Clone, Debug, PartialEq)]
pub struct SidecarEntry {
    pub theta: f64,
    pub eps: f64,
    pub word: MAWord,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Sidecar {
    pub entries: Vec<SidecarEntry>,
}

impl Sidecar {
    pub fn parse(text: &str) -> Result<Sidecar, SynthError> {
        let mut entries = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: String| SynthError::Sidecar { line: i + 1, msg };
            let mut fields = line.split_whitespace();
            let theta = fields.next().ok_or_else(|| err("missing angle".into()))?;
            let theta = parse_angle_expr(theta).map_err(|e| err(e.to_string()))?;
            let eps: f64 = fields
                .next()
                .ok_or_else(|| err("missing epsilon".into()))?
                .parse()
                .map_err(|_| err("bad epsilon".into()))?;
            if !(eps > 0.0) {
                return Err(err("epsilon must be positive".into()));
            }
            let word = fields.next().unwrap_or("");
            if fields.next().is_some() {
                return Err(err("trailing fields".into()));
            }
            let gates = parse_synth_string(word).map_err(|e| err(e.to_string()))?;
            let exact = exact_unitary_of(&gates).map_err(|e| err(e.to_string()))?;
            let word = ma_normalize(&exact).map_err(|e| err(e.to_string()))?;
            entries.push(SidecarEntry {
                theta: theta.to_radians(),
                eps,
                word,
            });
        }
        Ok(Sidecar { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Cheapest entry for `theta` whose stated precision is at least as good
    /// as `eps`; ties go to the lexicographically least string.
    pub fn lookup(&self, theta: Angle, eps: f64, tol: f64) -> Option<MAWord> {
        let x = theta.to_radians();
        self.entries
            .iter()
            .filter(|e| {
                let d = (e.theta - x).rem_euclid(2.0 * PI);
                d.min(2.0 * PI - d) < tol.max(1e-12) && e.eps <= eps
            })
            .min_by_key(|e| (e.word.t_count(), e.word.to_ma_string()))
            .map(|e| e.word.clone())
    }
}
