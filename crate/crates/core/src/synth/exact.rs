//! Exact 2×2 Clifford+T unitaries over `D[ω]`.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;

use super::ring::{RingElt, ZOmega};
use super::SynthError;
use crate::ir::GateKind;

/// `m / √2^k` with entries `[u00, u01, u10, u11]`, reduced so that `k = 0`
/// or some entry is not divisible by `√2`. Equality is exact, including the
/// global phase; use [`ExactUnitary::canonical`] for projective comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExactUnitary {
    m: [ZOmega; 4],
    k: u32,
}

impl ExactUnitary {
    pub const IDENTITY: ExactUnitary = ExactUnitary {
        m: [ZOmega::ONE, ZOmega::ZERO, ZOmega::ZERO, ZOmega::ONE],
        k: 0,
    };

    pub fn new(m: [ZOmega; 4], k: u32) -> ExactUnitary {
        let mut u = ExactUnitary { m, k };
        while u.k > 0 && u.m.iter().all(|z| z.divisible_by_sqrt2()) {
            for z in &mut u.m {
                *z = z.div_sqrt2().expect("checked divisibility");
            }
            u.k -= 1;
        }
        u
    }

    fn diag(phase: u32) -> ExactUnitary {
        ExactUnitary::new([ZOmega::ONE, ZOmega::ZERO, ZOmega::ZERO, ZOmega::omega_pow(phase)], 0)
    }

    /// Matrix of one Clifford+T gate; `RX(±π/4)` is represented as `H·T^{±1}·H`.
    pub fn of_gate(kind: GateKind) -> Option<ExactUnitary> {
        let (o, l) = (ZOmega::ZERO, ZOmega::ONE);
        Some(match kind {
            GateKind::X => ExactUnitary::new([o, l, l, o], 0),
            GateKind::Y => ExactUnitary::new([o, -ZOmega::I, ZOmega::I, o], 0),
            GateKind::Z => ExactUnitary::diag(4),
            GateKind::H => ExactUnitary::new([l, l, l, -l], 1),
            GateKind::S => ExactUnitary::diag(2),
            GateKind::Sdg => ExactUnitary::diag(6),
            GateKind::T => ExactUnitary::diag(1),
            GateKind::Tdg => ExactUnitary::diag(7),
            GateKind::RxPi4 | GateKind::RxPi4Dg => {
                let h = ExactUnitary::of_gate(GateKind::H)?;
                let t = ExactUnitary::diag(if kind == GateKind::RxPi4 { 1 } else { 7 });
                h.mul(&t).mul(&h)
            }
            _ => return None,
        })
    }

    pub fn entries(&self) -> [RingElt; 4] {
        self.m.map(|z| RingElt::new(z, self.k))
    }

    pub fn numerators(&self) -> &[ZOmega; 4] {
        &self.m
    }

    pub fn denominator_exp(&self) -> u32 {
        self.k
    }

    /// Smallest denominator exponent: the largest reduced `k` over entries.
    pub fn sde(&self) -> u32 {
        self.entries().iter().map(|e| e.k).max().unwrap_or(0)
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &ExactUnitary) -> ExactUnitary {
        let (a, b) = (&self.m, &other.m);
        ExactUnitary::new(
            [
                a[0] * b[0] + a[1] * b[2],
                a[0] * b[1] + a[1] * b[3],
                a[2] * b[0] + a[3] * b[2],
                a[2] * b[1] + a[3] * b[3],
            ],
            self.k + other.k,
        )
    }

    pub fn adjoint(&self) -> ExactUnitary {
        let m = &self.m;
        ExactUnitary { m: [m[0].conj(), m[2].conj(), m[1].conj(), m[3].conj()], k: self.k }
    }

    pub fn transpose(&self) -> ExactUnitary {
        let m = &self.m;
        ExactUnitary { m: [m[0], m[2], m[1], m[3]], k: self.k }
    }

    pub fn mul_omega_pow(&self, j: u32) -> ExactUnitary {
        let w = ZOmega::omega_pow(j);
        ExactUnitary { m: self.m.map(|z| z * w), k: self.k }
    }

    /// Representative of the projective class: the `ω^j` multiple whose
    /// numerators are lexicographically largest.
    pub fn canonical(&self) -> ExactUnitary {
        (0..8).map(|j| self.mul_omega_pow(j)).max().expect("eight phases")
    }

    pub fn proj_eq(&self, other: &ExactUnitary) -> bool {
        self.canonical() == other.canonical()
    }

    pub fn is_unitary(&self) -> bool {
        self.adjoint().mul(self) == ExactUnitary::IDENTITY
    }

    pub fn to_complex(&self) -> [Complex64; 4] {
        self.entries().map(|e| e.to_complex())
    }

    /// Denominator exponent of the Bloch-sphere (SO(3)) matrix
    /// `R_ij = ½ tr(σ_i U σ_j U†)`. It is invariant under Cliffords on either
    /// side and equals the minimal T-count of `U`.
    pub fn bloch_lde(&self) -> u32 {
        // The products below square the numerators; past this size they no
        // longer fit in i128.
        if self.k <= I128_BLOCH_LIMIT {
            bloch_lde_with(&self.m, self.k)
        } else {
            bloch_lde_with(&self.m.map(BigZOmega::from), self.k)
        }
    }
}

const I128_BLOCH_LIMIT: u32 = 100;

/// Largest denominator exponent accepted when building exact unitaries, well
/// inside the i128 range of the numerators.
pub const MAX_DENOMINATOR_EXP: u32 = 220;

trait BlochRing: Clone + Sized {
    fn zero() -> Self;
    fn one() -> Self;
    fn i() -> Self;
    fn neg(&self) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn conj(&self) -> Self;
    fn div_sqrt2(&self) -> Option<Self>;
}

impl BlochRing for ZOmega {
    fn zero() -> Self {
        ZOmega::ZERO
    }
    fn one() -> Self {
        ZOmega::ONE
    }
    fn i() -> Self {
        ZOmega::I
    }
    fn neg(&self) -> Self {
        -*self
    }
    fn add(&self, o: &Self) -> Self {
        *self + *o
    }
    fn mul(&self, o: &Self) -> Self {
        *self * *o
    }
    fn conj(&self) -> Self {
        ZOmega::conj(*self)
    }
    fn div_sqrt2(&self) -> Option<Self> {
        ZOmega::div_sqrt2(*self)
    }
}

#[derive(Clone)]
struct BigZOmega([BigInt; 4]);

impl From<ZOmega> for BigZOmega {
    fn from(z: ZOmega) -> Self {
        BigZOmega([z.a.into(), z.b.into(), z.c.into(), z.d.into()])
    }
}

impl BlochRing for BigZOmega {
    fn zero() -> Self {
        ZOmega::ZERO.into()
    }
    fn one() -> Self {
        ZOmega::ONE.into()
    }
    fn i() -> Self {
        ZOmega::I.into()
    }
    fn neg(&self) -> Self {
        BigZOmega(self.0.clone().map(|x| -x))
    }
    fn add(&self, o: &Self) -> Self {
        BigZOmega(std::array::from_fn(|i| &self.0[i] + &o.0[i]))
    }
    fn mul(&self, o: &Self) -> Self {
        let mut r: [BigInt; 4] = Default::default();
        for i in 0..4 {
            for j in 0..4 {
                let p = &self.0[i] * &o.0[j];
                if i + j < 4 {
                    r[i + j] += p;
                } else {
                    r[i + j - 4] -= p;
                }
            }
        }
        BigZOmega(r)
    }
    fn conj(&self) -> Self {
        let [a, b, c, d] = &self.0;
        BigZOmega([a.clone(), -d, -c, -b])
    }
    fn div_sqrt2(&self) -> Option<Self> {
        let [a, b, c, d] = &self.0;
        let (x, y, u, v) = (b - d, a + c, b + d, c - a);
        if x.is_odd() || y.is_odd() {
            return None;
        }
        Some(BigZOmega([x / 2, y / 2, u / 2, v / 2]))
    }
}

fn bloch_lde_with<R: BlochRing>(m: &[R; 4], k: u32) -> u32 {
    let (o, l, i) = (R::zero(), R::one(), R::i());
    let paulis = [
        [o.clone(), l.clone(), l.clone(), o.clone()],
        [o.clone(), i.neg(), i.clone(), o.clone()],
        [l.clone(), o.clone(), o.clone(), l.neg()],
    ];
    let mul = |a: &[R; 4], b: &[R; 4]| -> [R; 4] {
        [
            a[0].mul(&b[0]).add(&a[1].mul(&b[2])),
            a[0].mul(&b[1]).add(&a[1].mul(&b[3])),
            a[2].mul(&b[0]).add(&a[3].mul(&b[2])),
            a[2].mul(&b[1]).add(&a[3].mul(&b[3])),
        ]
    };
    let adj = [m[0].conj(), m[2].conj(), m[1].conj(), m[3].conj()];
    let mut entries = Vec::with_capacity(9);
    for si in &paulis {
        let left = mul(si, m);
        for sj in &paulis {
            let p = mul(&mul(&left, sj), &adj);
            entries.push(p[0].add(&p[3]));
        }
    }
    // R = N / √2^(2k+2)
    let mut e = 2 * k + 2;
    while e > 0 {
        let next: Option<Vec<R>> = entries.iter().map(|z| z.div_sqrt2()).collect();
        match next {
            Some(n) => entries = n,
            None => break,
        }
        e -= 1;
    }
    e
}

impl fmt::Display for ExactUnitary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]] / √2^{}",
            self.m[0], self.m[1], self.m[2], self.m[3], self.k
        )
    }
}

/// Exact unitary of an application-order word over the Clifford+T alphabet.
pub fn exact_unitary_of(word: &[GateKind]) -> Result<ExactUnitary, SynthError> {
    word.iter().try_fold(ExactUnitary::IDENTITY, |acc, &k| {
        if acc.k >= MAX_DENOMINATOR_EXP {
            return Err(SynthError::TooLarge);
        }
        Ok(ExactUnitary::of_gate(k).ok_or(SynthError::NotCliffordT(k))?.mul(&acc))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::Gate;
    use crate::transform::{fuse, Unitary2};
    use GateKind::*;

    fn float_of(word: &[GateKind]) -> Unitary2 {
        let gates: Vec<Gate> = word.iter().map(|&k| Gate::single(k, 0)).collect();
        fuse(&gates)
    }

    #[test]
    fn basic_words() {
        let hh = exact_unitary_of(&[H, H]).unwrap();
        assert_eq!(hh, ExactUnitary::IDENTITY);
        assert_eq!(hh.sde(), 0);
        let t = exact_unitary_of(&[T]).unwrap();
        assert_eq!(t.numerators()[3], ZOmega::OMEGA);
        assert_eq!(t.sde(), 0);
        assert!(exact_unitary_of(&[T, T]).unwrap().proj_eq(&exact_unitary_of(&[S]).unwrap()));
    }

    #[test]
    fn matches_float_matrices() {
        let words: [&[GateKind]; 5] = [
            &[H, T, H, T, H],
            &[T, H, S, T, H, Tdg, X, Y],
            &[RxPi4, T, RxPi4Dg, Sdg, Z],
            &[H, S, H, T, T, H, T, H, T, H],
            &[],
        ];
        for w in words {
            let e = exact_unitary_of(w).unwrap();
            assert!(e.is_unitary());
            let m = e.to_complex();
            let u = Unitary2 { m, det_phase: 0.0 };
            assert!(u.distance(&float_of(w)) < 1e-7, "{w:?}");
        }
        // Entry-wise agreement after aligning the global phase.
        let e = exact_unitary_of(&[H, T, H, T, H]).unwrap();
        let f = float_of(&[H, T, H, T, H]);
        let phase = e.to_complex()[0] / f.m[0];
        assert!((phase.norm() - 1.0).abs() < 1e-12);
        for (x, y) in e.to_complex().iter().zip(f.m) {
            assert!((x - y * phase).norm() < 1e-12);
        }
        // Two H factors contribute the only denominators; they do not cancel.
        assert_eq!(e.sde(), e.denominator_exp());
        assert!(e.sde() >= 1);
    }

    #[test]
    fn bloch_lde_is_t_count_on_small_words() {
        assert_eq!(exact_unitary_of(&[H, S, X]).unwrap().bloch_lde(), 0);
        assert_eq!(exact_unitary_of(&[T]).unwrap().bloch_lde(), 1);
        assert_eq!(exact_unitary_of(&[T, H, T]).unwrap().bloch_lde(), 2);
        assert_eq!(exact_unitary_of(&[H, T, H]).unwrap().bloch_lde(), 1);
        assert_eq!(exact_unitary_of(&[T, T]).unwrap().bloch_lde(), 0);
    }

    #[test]
    fn bloch_lde_past_the_i128_path() {
        let mut w = Vec::new();
        for i in 0..250 {
            w.extend([H, T]);
            if i % 3 == 0 {
                w.push(S);
            }
        }
        let u = exact_unitary_of(&w).unwrap();
        assert!(u.denominator_exp() > I128_BLOCH_LIMIT, "{}", u.denominator_exp());
        assert_eq!(u.bloch_lde(), 250);
    }

    #[test]
    fn rejects_rotations() {
        assert!(exact_unitary_of(&[RZ]).is_err());
        assert!(exact_unitary_of(&[CX]).is_err());
    }
}
