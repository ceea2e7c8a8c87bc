//! Matsumoto-Amano normal form `(T|ε)(HT|SHT)*C` for single-qubit
//! Clifford+T operators.
//!
//! Words here are in matrix order: the leftmost factor is applied last. The
//! terminal Clifford `C` is therefore applied first.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use super::exact::{exact_unitary_of, ExactUnitary};
use super::SynthError;
use crate::clifford::CliffordClass;
use crate::ir::GateKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Syllable {
    HT,
    SHT,
}

impl Syllable {
    /// Matrix-order symbols.
    pub fn symbols(self) -> &'static [GateKind] {
        match self {
            Syllable::HT => &[GateKind::H, GateKind::T],
            Syllable::SHT => &[GateKind::S, GateKind::H, GateKind::T],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MAWord {
    pub leading_t: bool,
    pub syllables: Vec<Syllable>,
    pub clifford: CliffordClass,
}

/// Matrix-order symbols of a Clifford class: its canonical application-order
/// word reversed.
pub fn clifford_matrix_symbols(c: CliffordClass) -> Vec<GateKind> {
    let mut w = c.canonical_word();
    w.reverse();
    w
}

impl MAWord {
    pub fn identity() -> MAWord {
        MAWord {
            leading_t: false,
            syllables: Vec::new(),
            clifford: CliffordClass::IDENTITY,
        }
    }

    pub fn t_count(&self) -> usize {
        usize::from(self.leading_t) + self.syllables.len()
    }

    /// Number of H symbols in the word, including the Clifford's.
    pub fn h_count(&self) -> usize {
        self.matrix_symbols().iter().filter(|k| **k == GateKind::H).count()
    }

    pub fn matrix_symbols(&self) -> Vec<GateKind> {
        let mut out = Vec::new();
        if self.leading_t {
            out.push(GateKind::T);
        }
        for s in &self.syllables {
            out.extend_from_slice(s.symbols());
        }
        out.extend(clifford_matrix_symbols(self.clifford));
        out
    }

    pub fn application_order(&self) -> Vec<GateKind> {
        let mut w = self.matrix_symbols();
        w.reverse();
        w
    }

    pub fn exact(&self) -> ExactUnitary {
        exact_unitary_of(&self.application_order()).expect("Clifford+T symbols")
    }

    /// Matrix-order string over `{H, T, S, X}`; `Z` is spelled `SS` and `Y`
    /// is spelled `XSS`.
    pub fn to_ma_string(&self) -> String {
        let mut s = String::new();
        for k in self.matrix_symbols() {
            s.push_str(match k {
                GateKind::H => "H",
                GateKind::T => "T",
                GateKind::S => "S",
                GateKind::X => "X",
                GateKind::Z => "SS",
                GateKind::Y => "XSS",
                _ => unreachable!("MA words use H, T, S and Paulis only"),
            });
        }
        s
    }
}

impl fmt::Display for MAWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.to_ma_string();
        if s.is_empty() {
            write!(f, "I")
        } else {
            write!(f, "{s}")
        }
    }
}

/// Checks a matrix-order symbol list against `(T|ε)(HT|SHT)*C` with `C` a
/// T-free Clifford word.
pub fn is_ma_form(symbols: &[GateKind]) -> bool {
    use GateKind::*;
    let mut rest = symbols;
    if rest.first() == Some(&T) {
        rest = &rest[1..];
    }
    loop {
        if rest.starts_with(&[H, T]) {
            rest = &rest[2..];
        } else if rest.starts_with(&[S, H, T]) {
            rest = &rest[3..];
        } else {
            break;
        }
    }
    rest.iter().all(|k| CliffordClass::from_gate(*k).is_some())
}

fn clifford_lookup() -> &'static HashMap<ExactUnitary, CliffordClass> {
    static TABLE: OnceLock<HashMap<ExactUnitary, CliffordClass>> = OnceLock::new();
    TABLE.get_or_init(|| {
        CliffordClass::all()
            .map(|c| {
                let u = exact_unitary_of(&c.canonical_word()).expect("Clifford word");
                (u.canonical(), c)
            })
            .collect()
    })
}

/// Class of an exact unitary, or `None` when it is not Clifford.
pub fn clifford_of(u: &ExactUnitary) -> Option<CliffordClass> {
    clifford_lookup().get(&u.canonical()).copied()
}

pub fn exact_of_clifford(c: CliffordClass) -> ExactUnitary {
    exact_unitary_of(&c.canonical_word()).expect("Clifford word")
}

struct Peelers {
    t_inv: ExactUnitary,
    ht_inv: ExactUnitary,
    sht_inv: ExactUnitary,
}

fn peelers() -> &'static Peelers {
    static P: OnceLock<Peelers> = OnceLock::new();
    P.get_or_init(|| {
        let inv = |syms: &[GateKind]| {
            // matrix-order symbols → application order → inverse
            let mut app = syms.to_vec();
            app.reverse();
            exact_unitary_of(&app).expect("Clifford+T").adjoint()
        };
        Peelers {
            t_inv: inv(&[GateKind::T]),
            ht_inv: inv(Syllable::HT.symbols()),
            sht_inv: inv(Syllable::SHT.symbols()),
        }
    })
}

/// Normal form by descent on the Bloch-sphere denominator exponent: at each
/// step exactly one of the candidate leftmost factors (`T` only at the first
/// step, then `HT` or `SHT`) lowers it by one. The remainder at exponent 0
/// is the terminal Clifford.
pub fn ma_normalize(u: &ExactUnitary) -> Result<MAWord, SynthError> {
    let p = peelers();
    let mut cur = *u;
    let mut lde = cur.bloch_lde();
    let mut word = MAWord::identity();
    let mut first = true;
    while lde > 0 {
        let mut next = None;
        let candidates: [(Option<Syllable>, &ExactUnitary); 3] = [
            (None, &p.t_inv),
            (Some(Syllable::HT), &p.ht_inv),
            (Some(Syllable::SHT), &p.sht_inv),
        ];
        for (syl, inv) in candidates {
            if syl.is_none() && !first {
                continue;
            }
            let v = inv.mul(&cur);
            if v.bloch_lde() + 1 == lde {
                next = Some((syl, v));
                break;
            }
        }
        let (syl, v) = next.ok_or(SynthError::NotExact)?;
        match syl {
            None => word.leading_t = true,
            Some(s) => word.syllables.push(s),
        }
        cur = v;
        lde -= 1;
        first = false;
    }
    word.clifford = clifford_of(&cur).ok_or(SynthError::NotExact)?;
    Ok(word)
}
