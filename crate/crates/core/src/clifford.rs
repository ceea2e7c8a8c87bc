//! The 24-element single-qubit Clifford group modulo global phase.
//!
//! An element is identified by how it conjugates the Paulis, `C X C†` and
//! `C Z C†`, each a signed Pauli. Element `4·r + p` is the class of the
//! product `P_p · R_r` (matrix order): the rotation representative
//! `R_r ∈ {I, H, S, HS, SH, HSH}` (application-order words below) followed by
//! the Pauli `P_p ∈ {I, X, Y, Z}`.

use std::fmt;
use std::sync::OnceLock;

use crate::ir::GateKind;
use crate::pauli::Pauli;

/// Application-order words of the six rotation representatives.
pub const ROTATION_REPS: [&[GateKind]; 6] = [
    &[],
    &[GateKind::H],
    &[GateKind::S],
    &[GateKind::H, GateKind::S],
    &[GateKind::S, GateKind::H],
    &[GateKind::H, GateKind::S, GateKind::H],
];

const PAULI_KINDS: [Option<GateKind>; 4] = [None, Some(GateKind::X), Some(GateKind::Y), Some(GateKind::Z)];

/// A Pauli with a sign: `(-1)^neg · P`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SignedPauli {
    pub pauli: Pauli,
    pub neg: bool,
}

impl SignedPauli {
    pub fn new(pauli: Pauli, neg: bool) -> SignedPauli {
        SignedPauli { pauli, neg }
    }
}

/// Phase exponent `k` (meaning `i^k`) of the product `a·b` of two letters.
pub fn product_phase(a: Pauli, b: Pauli) -> u8 {
    use Pauli::*;
    match (a, b) {
        (X, Y) | (Y, Z) | (Z, X) => 1,
        (Y, X) | (Z, Y) | (X, Z) => 3,
        _ => 0,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Action {
    x: SignedPauli,
    z: SignedPauli,
}

impl Action {
    const IDENTITY: Action = Action {
        x: SignedPauli { pauli: Pauli::X, neg: false },
        z: SignedPauli { pauli: Pauli::Z, neg: false },
    };

    fn of_gate(kind: GateKind) -> Option<Action> {
        let sp = SignedPauli::new;
        let (x, z) = match kind {
            GateKind::H => (sp(Pauli::Z, false), sp(Pauli::X, false)),
            GateKind::S => (sp(Pauli::Y, false), sp(Pauli::Z, false)),
            GateKind::Sdg => (sp(Pauli::Y, true), sp(Pauli::Z, false)),
            GateKind::X => (sp(Pauli::X, false), sp(Pauli::Z, true)),
            GateKind::Y => (sp(Pauli::X, true), sp(Pauli::Z, true)),
            GateKind::Z => (sp(Pauli::X, true), sp(Pauli::Z, false)),
            _ => return None,
        };
        Some(Action { x, z })
    }

    /// `C P C†` for any letter.
    fn conjugate(&self, p: Pauli) -> SignedPauli {
        match p {
            Pauli::I => SignedPauli::new(Pauli::I, false),
            Pauli::X => self.x,
            Pauli::Z => self.z,
            Pauli::Y => {
                // Y = i·X·Z, so C Y C† = i·(C X C†)(C Z C†).
                let k = 1 + product_phase(self.x.pauli, self.z.pauli);
                debug_assert!(k.is_multiple_of(2));
                let neg = self.x.neg ^ self.z.neg ^ (k % 4 == 2);
                SignedPauli::new(self.x.pauli.mul(self.z.pauli), neg)
            }
        }
    }

    /// Action of `next · self` (self applied first).
    fn then(&self, next: &Action) -> Action {
        let img = |sp: SignedPauli| {
            let r = next.conjugate(sp.pauli);
            SignedPauli::new(r.pauli, r.neg ^ sp.neg)
        };
        Action {
            x: img(self.x),
            z: img(self.z),
        }
    }
}

struct Tables {
    actions: [Action; 24],
    mul: [[u8; 24]; 24],
    inverse: [u8; 24],
    shortest: Vec<Vec<GateKind>>,
}

fn tables() -> &'static Tables {
    static TABLES: OnceLock<Tables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let mut actions = [Action::IDENTITY; 24];
        for (r, rep) in ROTATION_REPS.iter().enumerate() {
            for (p, pk) in PAULI_KINDS.iter().enumerate() {
                let mut a = Action::IDENTITY;
                for k in rep.iter().copied().chain(*pk) {
                    a = a.then(&Action::of_gate(k).expect("clifford generator"));
                }
                actions[4 * r + p] = a;
            }
        }
        let index = |a: &Action| actions.iter().position(|b| b == a).expect("closed group") as u8;
        let mut mul = [[0u8; 24]; 24];
        for i in 0..24 {
            for j in 0..24 {
                mul[i][j] = index(&actions[i].then(&actions[j]));
            }
        }
        let mut inverse = [0u8; 24];
        for i in 0..24 {
            inverse[i] = (0..24).find(|&j| mul[i][j] == 0).expect("group inverse") as u8;
        }
        // Breadth-first search; generators ordered so that among words of
        // equal length those with fewer H are found first.
        let gens = [
            GateKind::X,
            GateKind::Y,
            GateKind::Z,
            GateKind::S,
            GateKind::Sdg,
            GateKind::H,
        ];
        let mut best: Vec<Option<Vec<GateKind>>> = vec![None; 24];
        best[0] = Some(Vec::new());
        let mut layer: Vec<u8> = vec![0];
        while !layer.is_empty() {
            let mut next = Vec::new();
            let mut candidates: Vec<(u8, Vec<GateKind>)> = Vec::new();
            for &c in &layer {
                for g in gens {
                    let gi = index(&Action::of_gate(g).unwrap());
                    let d = mul[c as usize][gi as usize];
                    if best[d as usize].is_none() {
                        let mut w = best[c as usize].clone().unwrap();
                        w.push(g);
                        candidates.push((d, w));
                    }
                }
            }
            let h_count = |w: &Vec<GateKind>| w.iter().filter(|k| **k == GateKind::H).count();
            candidates.sort_by_key(|(d, w)| (*d, h_count(w)));
            for (d, w) in candidates {
                if best[d as usize].is_none() {
                    best[d as usize] = Some(w);
                    next.push(d);
                }
            }
            layer = next;
        }
        Tables {
            actions,
            mul,
            inverse,
            shortest: best.into_iter().map(|w| w.expect("all reached")).collect(),
        }
    })
}

/// Element of the single-qubit Clifford group modulo phase.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CliffordClass(u8);

impl CliffordClass {
    pub const IDENTITY: CliffordClass = CliffordClass(0);

    pub fn all() -> impl Iterator<Item = CliffordClass> {
        (0..24).map(CliffordClass)
    }

    pub fn from_index(i: usize) -> CliffordClass {
        assert!(i < 24);
        CliffordClass(i as u8)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn from_pauli(p: Pauli) -> CliffordClass {
        CliffordClass(match p {
            Pauli::I => 0,
            Pauli::X => 1,
            Pauli::Y => 2,
            Pauli::Z => 3,
        })
    }

    pub fn from_gate(kind: GateKind) -> Option<CliffordClass> {
        let a = Action::of_gate(kind)?;
        let t = tables();
        Some(CliffordClass(t.actions.iter().position(|b| *b == a)? as u8))
    }

    /// Class of an application-order word of Clifford gates.
    pub fn from_word(word: &[GateKind]) -> Option<CliffordClass> {
        word.iter().try_fold(CliffordClass::IDENTITY, |acc, &k| {
            Some(acc.then(CliffordClass::from_gate(k)?))
        })
    }

    /// `next · self`: apply `self` first, then `next`.
    pub fn then(self, next: CliffordClass) -> CliffordClass {
        CliffordClass(tables().mul[self.index()][next.index()])
    }

    pub fn inverse(self) -> CliffordClass {
        CliffordClass(tables().inverse[self.index()])
    }

    /// `C P C†`.
    pub fn conjugate(self, p: Pauli) -> SignedPauli {
        tables().actions[self.index()].conjugate(p)
    }

    /// Class of the transposed matrix. Every generator is symmetric up to
    /// phase, so this reverses a word.
    pub fn transpose(self) -> CliffordClass {
        let mut w = self.canonical_word();
        w.reverse();
        CliffordClass::from_word(&w).expect("canonical words are Clifford")
    }

    /// Index of the rotation representative `R_r`.
    pub fn rotation_index(self) -> usize {
        self.index() / 4
    }

    /// Pauli part `P` of `C = P · R`.
    pub fn pauli_part(self) -> Pauli {
        Pauli::ALL[self.index() % 4]
    }

    /// Rotation part `R` of `C = P · R`, as a class.
    pub fn rotation_part(self) -> CliffordClass {
        CliffordClass((self.index() / 4 * 4) as u8)
    }

    pub fn is_pauli(self) -> bool {
        self.rotation_index() == 0
    }

    /// Application-order word `R_r` then `P_p` (at most three H/S plus one
    /// Pauli).
    pub fn canonical_word(self) -> Vec<GateKind> {
        let mut w = ROTATION_REPS[self.rotation_index()].to_vec();
        w.extend(PAULI_KINDS[self.index() % 4]);
        w
    }

    /// A shortest application-order word over `{H, S, Sdg, X, Y, Z}`,
    /// preferring fewer H among equally short words.
    pub fn shortest_word(self) -> &'static [GateKind] {
        &tables().shortest[self.index()]
    }
}

impl fmt::Display for CliffordClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = self.canonical_word();
        if w.is_empty() {
            return write!(f, "I");
        }
        let names: Vec<String> = w.iter().map(|k| k.name().to_uppercase()).collect();
        write!(f, "{}", names.join("·"))
    }
}
