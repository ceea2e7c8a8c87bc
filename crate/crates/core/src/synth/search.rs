//! Minimal-T-count approximation of single-qubit unitaries by bounded
//! search over normal-form words.
//!
//! A word of T-count `t` is split as `A · P · C`: an outer prefix `A` with
//! `t − depth` T gates, a tabulated prefix `P` with up to `depth` T gates and
//! a Clifford `C`. Tabulated prefixes are stored as SU(2) quaternions in a
//! grid of cell size `2√2·ε`, so every prefix within distance `ε` of a query
//! lies in one of 16 cells. Levels are searched in increasing T-count, so the
//! first level with a hit is the minimum.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64 as C;
use rayon::prelude::*;

use super::exact::exact_unitary_of;
use super::normal::{clifford_matrix_symbols, ma_normalize, MAWord, Syllable};
use super::SynthError;
use crate::clifford::CliffordClass;
use crate::ir::{Gate, GateKind};
use crate::transform::Unitary2;

pub const DEFAULT_MAX_TCOUNT: usize = 36;
pub const DEFAULT_TABLE_DEPTH: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchConfig {
    /// Give up when no word with at most this many T gates is within ε.
    pub max_tcount: usize,
    /// T-count of the tabulated prefixes; memory grows as `3·2^depth`.
    pub table_depth: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_tcount: DEFAULT_MAX_TCOUNT,
            table_depth: DEFAULT_TABLE_DEPTH,
        }
    }
}

type Quat = [f64; 4];

/// Unit quaternion of `U / sqrt(det U)`; `|tr(A†B)|/2 = |⟨q_A, q_B⟩|`.
fn quaternion(u: &Unitary2) -> Quat {
    let m = u.m;
    let phase = C::from_polar(1.0, -u.det_phase / 2.0);
    let (a, c) = (m[0] * phase, m[2] * phase);
    [a.re, -c.im, c.re, -a.im]
}

fn dot(p: &Quat, q: &Quat) -> f64 {
    p.iter().zip(q).map(|(x, y)| x * y).sum()
}

/// A normal-form prefix `(T|ε)(HT|SHT)*` packed as bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Prefix {
    leading_t: bool,
    len: u8,
    /// Bit `i` set means syllable `i` (from the left) is `SHT`.
    bits: u64,
}

impl Prefix {
    fn t_count(&self) -> usize {
        usize::from(self.leading_t) + self.len as usize
    }

    fn syllables(&self) -> impl Iterator<Item = Syllable> + '_ {
        (0..self.len).map(|i| {
            if self.bits >> i & 1 == 1 {
                Syllable::SHT
            } else {
                Syllable::HT
            }
        })
    }

    fn symbols(&self) -> Vec<GateKind> {
        let mut out = Vec::new();
        if self.leading_t {
            out.push(GateKind::T);
        }
        for s in self.syllables() {
            out.extend_from_slice(s.symbols());
        }
        out
    }
}

fn matrix_of_symbols(symbols: &[GateKind]) -> Unitary2 {
    symbols.iter().fold(Unitary2::identity(), |acc, &k| acc.mul(&Unitary2::of_gate(&Gate::single(k, 0))))
}

/// All prefixes with exactly `t` T gates.
fn prefixes_with_tcount(t: usize) -> Vec<Prefix> {
    let mut out = Vec::new();
    if t == 0 {
        out.push(Prefix { leading_t: false, len: 0, bits: 0 });
        return out;
    }
    for leading_t in [false, true] {
        let len = t - usize::from(leading_t);
        for bits in 0..(1u64 << len) {
            out.push(Prefix { leading_t, len: len as u8, bits });
        }
    }
    out
}

struct Table {
    cell: f64,
    prefixes: Vec<Prefix>,
    quats: Vec<Quat>,
    grid: HashMap<[i32; 4], Vec<u32>>,
}

impl Table {
    fn build(eps: f64, depth: usize) -> Table {
        let cell = 2.0 * std::f64::consts::SQRT_2 * eps;
        let mut prefixes = Vec::new();
        let mut quats = Vec::new();
        // Depth-first over syllables, sharing partial products.
        fn extend(
            p: Prefix,
            m: Unitary2,
            depth: usize,
            syl: &[Unitary2; 2],
            out_p: &mut Vec<Prefix>,
            out_q: &mut Vec<Quat>,
        ) {
            out_p.push(p);
            out_q.push(quaternion(&m));
            if p.t_count() >= depth {
                return;
            }
            for (i, s) in syl.iter().enumerate() {
                let next = Prefix {
                    leading_t: p.leading_t,
                    len: p.len + 1,
                    bits: p.bits | ((i as u64) << p.len),
                };
                extend(next, m.mul(s), depth, syl, out_p, out_q);
            }
        }
        let syl = [
            matrix_of_symbols(Syllable::HT.symbols()),
            matrix_of_symbols(Syllable::SHT.symbols()),
        ];
        let empty = Prefix { leading_t: false, len: 0, bits: 0 };
        extend(empty, Unitary2::identity(), depth, &syl, &mut prefixes, &mut quats);
        if depth > 0 {
            let t = Prefix { leading_t: true, len: 0, bits: 0 };
            extend(t, matrix_of_symbols(&[GateKind::T]), depth, &syl, &mut prefixes, &mut quats);
        }
        let mut grid: HashMap<[i32; 4], Vec<u32>> = HashMap::new();
        for (i, q) in quats.iter().enumerate() {
            grid.entry(q.map(|x| (x / cell).floor() as i32)).or_default().push(i as u32);
        }
        Table { cell, prefixes, quats, grid }
    }

    /// Indices of tabulated prefixes whose distance to `q` may be ≤ ε
    /// (caller re-checks); both signs of `q` are searched.
    fn query(&self, q: &Quat, min_overlap: f64, out: &mut Vec<u32>) {
        for sign in [1.0, -1.0] {
            let q = q.map(|x| x * sign);
            let base = q.map(|x| (x / self.cell).floor() as i32);
            let step = std::array::from_fn::<i32, 4, _>(|i| {
                let f = q[i] / self.cell - base[i] as f64;
                if f < 0.5 {
                    -1
                } else {
                    1
                }
            });
            for mask in 0..16u32 {
                let key = std::array::from_fn(|i| base[i] + if mask >> i & 1 == 1 { step[i] } else { 0 });
                if let Some(ids) = self.grid.get(&key) {
                    out.extend(ids.iter().copied().filter(|&id| dot(&self.quats[id as usize], &q) >= min_overlap));
                }
            }
        }
    }
}

fn table(eps: f64, depth: usize) -> Arc<Table> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, usize), Arc<Table>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (eps.to_bits(), depth);
    if let Some(t) = cache.lock().expect("search cache").get(&key) {
        return t.clone();
    }
    let built = Arc::new(Table::build(eps, depth));
    cache.lock().expect("search cache").entry(key).or_insert(built).clone()
}

/// Float distance `sqrt(max(0, 1 − |tr(A†B)|/2))` between a word and a
/// target.
pub fn word_distance(word: &MAWord, target: &Unitary2) -> f64 {
    let gates: Vec<Gate> = word.application_order().iter().map(|&k| Gate::single(k, 0)).collect();
    crate::transform::fuse(&gates).distance(target)
}

/// Minimal-T-count normal-form word within `eps` of `target`. Among words of
/// minimal T-count the one with the lexicographically least MA string wins.
pub fn search(target: &Unitary2, eps: f64, cfg: &SearchConfig) -> Result<MAWord, SynthError> {
    if !(eps > 1e-9 && eps < 1.0) {
        return Err(SynthError::InvalidEpsilon(eps));
    }
    let depth = cfg.table_depth.min(cfg.max_tcount).min(40);
    let tab = table(eps, depth);
    let min_overlap = 1.0 - eps * eps;
    let cliffords: Vec<(CliffordClass, Unitary2)> = CliffordClass::all()
        .map(|c| (c, matrix_of_symbols(&clifford_matrix_symbols(c))))
        .collect();

    let outer_levels = std::iter::once(None).chain((depth + 1..=cfg.max_tcount).map(Some));
    for level in outer_levels {
        let outer = match level {
            None => vec![Prefix { leading_t: false, len: 0, bits: 0 }],
            Some(t) => prefixes_with_tcount(t - depth),
        };
        let hits: Vec<(Prefix, u32, CliffordClass)> = outer
            .par_iter()
            .flat_map_iter(|a| {
                let a_inv = matrix_of_symbols(&a.symbols()).adjoint();
                let lhs = a_inv.mul(target);
                let mut found = Vec::new();
                let mut ids = Vec::new();
                for (c, cm) in &cliffords {
                    ids.clear();
                    let q = quaternion(&lhs.mul(&cm.adjoint()));
                    tab.query(&q, min_overlap, &mut ids);
                    found.extend(ids.iter().map(|&id| (*a, id, *c)));
                }
                found
            })
            .collect();
        if hits.is_empty() {
            continue;
        }
        let mut best: Option<(usize, String, MAWord)> = None;
        for (a, id, c) in hits {
            let mut symbols = a.symbols();
            // The tabulated part must start a syllable when the outer prefix
            // is non-empty; other concatenations are still exact products.
            symbols.extend(tab.prefixes[id as usize].symbols());
            symbols.extend(clifford_matrix_symbols(c));
            symbols.reverse();
            let exact = exact_unitary_of(&symbols).expect("Clifford+T symbols");
            let word = ma_normalize(&exact)?;
            if word_distance(&word, target) > eps {
                continue;
            }
            let key = (word.t_count(), word.to_ma_string());
            if best.as_ref().is_none_or(|(t, s, _)| (key.0, &key.1) < (*t, s)) {
                best = Some((key.0, key.1, word));
            }
        }
        if let Some((_, _, word)) = best {
            return Ok(word);
        }
    }
    Err(SynthError::BoundExceeded { bound: cfg.max_tcount })
}
