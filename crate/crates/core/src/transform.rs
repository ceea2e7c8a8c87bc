//! Run-local resynthesis: fuse each maximal single-qubit run between CX
//! gates into one 2×2 unitary and rewrite it with as few non-trivial Z
//! rotations as possible, keeping the rewrite only when it is cheaper.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64 as C;
use rayon::prelude::*;

use crate::clifford::CliffordClass;
use crate::decompose::is_decomposed;
use crate::ir::{Angle, Circuit, Gate, GateKind, DEFAULT_ANGLE_TOL};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TransformError {
    #[error("circuit is not decomposed: gate {index} is {kind}")]
    NotDecomposed { index: usize, kind: GateKind },
    #[error("matrix is not unitary (error {0:e})")]
    NonUnitary(f64),
}

/// A maximal sequence of single-qubit gates on one wire, uninterrupted by a
/// multi-qubit gate or measurement on that wire.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingleQubitRun {
    pub qubit: usize,
    /// Positions of the run's gates in the host circuit, ascending.
    pub positions: Vec<usize>,
}

impl SingleQubitRun {
    pub fn start(&self) -> usize {
        self.positions[0]
    }

    pub fn end(&self) -> usize {
        *self.positions.last().expect("runs are non-empty")
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn gates<'a>(&'a self, c: &'a Circuit) -> impl Iterator<Item = &'a Gate> + 'a {
        self.positions.iter().map(move |&i| &c.gates()[i])
    }
}

/// Splits every wire into maximal single-qubit runs, ordered by start
/// position.
pub fn segment_runs(c: &Circuit) -> Result<Vec<SingleQubitRun>, TransformError> {
    let mut open: Vec<Option<SingleQubitRun>> = vec![None; c.num_qubits()];
    let mut runs = Vec::new();
    for (i, g) in c.gates().iter().enumerate() {
        if g.is_single_qubit_unitary() {
            let q = g.qubit();
            open[q]
                .get_or_insert_with(|| SingleQubitRun {
                    qubit: q,
                    positions: Vec::new(),
                })
                .positions
                .push(i);
            continue;
        }
        if g.kind != GateKind::CX && g.kind != GateKind::MeasureZ {
            return Err(TransformError::NotDecomposed { index: i, kind: g.kind });
        }
        for &q in &g.qubits {
            runs.extend(open[q].take());
        }
    }
    runs.extend(open.into_iter().flatten());
    runs.sort_by_key(|r| r.start());
    Ok(runs)
}

/// A 2×2 complex matrix `[[a, b], [c, d]]`, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Unitary2 {
    pub m: [C; 4],
    /// `arg(det)`.
    pub det_phase: f64,
}

impl Unitary2 {
    pub fn new(m: [C; 4]) -> Result<Unitary2, TransformError> {
        let u = Unitary2 {
            m,
            det_phase: (m[0] * m[3] - m[1] * m[2]).arg(),
        };
        let err = u.unitarity_error();
        if err > 1e-9 {
            return Err(TransformError::NonUnitary(err));
        }
        Ok(u)
    }

    fn raw(m: [C; 4]) -> Unitary2 {
        Unitary2 {
            m,
            det_phase: (m[0] * m[3] - m[1] * m[2]).arg(),
        }
    }

    pub fn identity() -> Unitary2 {
        let (o, l) = (C::new(0.0, 0.0), C::new(1.0, 0.0));
        Unitary2::raw([l, o, o, l])
    }

    /// Matrix of a single-qubit unitary gate.
    pub fn of_gate(g: &Gate) -> Unitary2 {
        let o = C::new(0.0, 0.0);
        let l = C::new(1.0, 0.0);
        let i = C::new(0.0, 1.0);
        let r = FRAC_1_SQRT_2;
        let diag = |phi: f64| [l, o, o, C::from_polar(1.0, phi)];
        let rz = |t: f64| [C::from_polar(1.0, -t / 2.0), o, o, C::from_polar(1.0, t / 2.0)];
        let rx = |t: f64| {
            let (s, c) = (t / 2.0).sin_cos();
            [C::new(c, 0.0), C::new(0.0, -s), C::new(0.0, -s), C::new(c, 0.0)]
        };
        let ry = |t: f64| {
            let (s, c) = (t / 2.0).sin_cos();
            [C::new(c, 0.0), C::new(-s, 0.0), C::new(s, 0.0), C::new(c, 0.0)]
        };
        let p = |k: usize| g.params[k].to_radians();
        let m = match g.kind {
            GateKind::X => [o, l, l, o],
            GateKind::Y => [o, -i, i, o],
            GateKind::Z => diag(PI),
            GateKind::H => [C::new(r, 0.0), C::new(r, 0.0), C::new(r, 0.0), C::new(-r, 0.0)],
            GateKind::S => diag(PI / 2.0),
            GateKind::Sdg => diag(-PI / 2.0),
            GateKind::T => diag(PI / 4.0),
            GateKind::Tdg => diag(-PI / 4.0),
            GateKind::RZ => rz(p(0)),
            GateKind::RX => rx(p(0)),
            GateKind::RY => ry(p(0)),
            GateKind::RxPi4 => rx(PI / 4.0),
            GateKind::RxPi4Dg => rx(-PI / 4.0),
            GateKind::U3 => {
                let (a, b, c) = (rz(p(2)), ry(p(0)), rz(p(1)));
                let ba = Unitary2::raw(b).mul(&Unitary2::raw(a));
                Unitary2::raw(c).mul(&ba).m
            }
            k => panic!("{k} is not a single-qubit unitary"),
        };
        Unitary2::raw(m)
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &Unitary2) -> Unitary2 {
        let (a, b) = (&self.m, &other.m);
        Unitary2::raw([
            a[0] * b[0] + a[1] * b[2],
            a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3],
        ])
    }

    pub fn adjoint(&self) -> Unitary2 {
        let m = &self.m;
        Unitary2::raw([m[0].conj(), m[2].conj(), m[1].conj(), m[3].conj()])
    }

    pub fn unitarity_error(&self) -> f64 {
        let p = self.adjoint().mul(self);
        let id = Unitary2::identity();
        (0..4).map(|k| (p.m[k] - id.m[k]).norm()).fold(0.0, f64::max)
    }

    /// `sqrt(max(0, 1 − |tr(A†B)|/2))`: zero iff equal up to phase.
    pub fn distance(&self, other: &Unitary2) -> f64 {
        let tr = self.adjoint().mul(other);
        (1.0 - (tr.m[0] + tr.m[3]).norm() / 2.0).max(0.0).sqrt()
    }
}

/// Product of the gates' matrices in application order.
pub fn fuse<'a>(gates: impl IntoIterator<Item = &'a Gate>) -> Unitary2 {
    gates
        .into_iter()
        .fold(Unitary2::identity(), |acc, g| Unitary2::of_gate(g).mul(&acc))
}

/// ZXZ Euler angles `(α, β, γ)` with `U ≅ RZ(α)·RX(β)·RZ(γ)` (γ applied
/// first). At the singular points β is exactly 0 or π and γ is 0.
pub fn euler_zxz(u: &Unitary2) -> (f64, f64, f64) {
    let [a, b, c, d] = u.m;
    let beta = 2.0 * c.norm().atan2(a.norm());
    let sum = (d * a.conj()).arg();
    let diff = (c * b.conj()).arg();
    const SINGULAR: f64 = 1e-12;
    if c.norm() < SINGULAR {
        (sum, 0.0, 0.0)
    } else if a.norm() < SINGULAR {
        (diff, PI, 0.0)
    } else {
        // Halving the two phase sums fixes α and γ only up to a shared π
        // shift, which flips the sign of β; pick the sign that reproduces U.
        let (alpha, gamma) = ((sum + diff) / 2.0, (sum - diff) / 2.0);
        let build = |b: f64| {
            let word = [
                Gate::rz(0, Angle::Radians(gamma.rem_euclid(2.0 * PI))),
                Gate::rx(0, Angle::Radians(b.rem_euclid(2.0 * PI))),
                Gate::rz(0, Angle::Radians(alpha.rem_euclid(2.0 * PI))),
            ];
            fuse(&word).distance(u)
        };
        if build(beta) <= build(-beta) {
            (alpha, beta, gamma)
        } else {
            (alpha, -beta, gamma)
        }
    }
}

/// Exact replacement for `RZ(kπ/4)`.
pub(crate) fn eighth_turn_word(k: u8) -> &'static [GateKind] {
    use GateKind::*;
    match k {
        0 => &[],
        1 => &[T],
        2 => &[S],
        3 => &[S, T],
        4 => &[Z],
        5 => &[Sdg, Tdg],
        6 => &[Sdg],
        7 => &[Tdg],
        _ => unreachable!(),
    }
}

fn push_rz(word: &mut Vec<Gate>, q: usize, theta: f64, tol: f64) {
    let angle = Angle::radians_with_tol(theta, tol);
    match angle.eighth_turns(tol) {
        Some(k) => word.extend(eighth_turn_word(k).iter().map(|&kind| Gate::single(kind, q))),
        None => word.push(Gate::rz(q, angle)),
    }
}

/// Replaces each maximal Clifford segment of a single-qubit word by the
/// shortest equivalent Clifford word.
pub fn collapse_cliffords(word: Vec<Gate>, q: usize) -> Vec<Gate> {
    let mut out = Vec::with_capacity(word.len());
    let mut acc: Option<CliffordClass> = None;
    let flush = |acc: &mut Option<CliffordClass>, out: &mut Vec<Gate>| {
        if let Some(c) = acc.take() {
            out.extend(c.shortest_word().iter().map(|&k| Gate::single(k, q)));
        }
    };
    for g in word {
        match CliffordClass::from_gate(g.kind) {
            Some(c) => acc = Some(acc.unwrap_or(CliffordClass::IDENTITY).then(c)),
            None => {
                flush(&mut acc, &mut out);
                out.push(g);
            }
        }
    }
    flush(&mut acc, &mut out);
    out
}

/// Rewrites `u` as `RZ(γ), H, RZ(β), H, RZ(α)` (application order) with
/// Clifford and T angles replaced by exact gates and Clifford segments
/// collapsed. The result has at most three non-trivial `RZ` gates.
pub fn resynthesize_min_rz(u: &Unitary2, q: usize, tol: f64) -> Result<Vec<Gate>, TransformError> {
    let err = u.unitarity_error();
    if err > 1e-9 {
        return Err(TransformError::NonUnitary(err));
    }
    let (alpha, beta, gamma) = euler_zxz(u);
    let mut word = Vec::new();
    push_rz(&mut word, q, gamma, tol);
    word.push(Gate::h(q));
    push_rz(&mut word, q, beta, tol);
    word.push(Gate::h(q));
    push_rz(&mut word, q, alpha, tol);
    Ok(collapse_cliffords(word, q))
}

fn cost<'a>(gates: impl IntoIterator<Item = &'a Gate>, tol: f64) -> (usize, usize, usize) {
    let (mut rz, mut total, mut h) = (0, 0, 0);
    for g in gates {
        rz += g.nontrivial_rotations(tol);
        total += 1;
        h += usize::from(g.kind == GateKind::H);
    }
    (rz, total, h)
}

/// Number of rotation parameters that are not multiples of π/4.
pub fn rz_count(c: &Circuit) -> usize {
    rz_count_with_tol(c, DEFAULT_ANGLE_TOL)
}

pub fn rz_count_with_tol(c: &Circuit, tol: f64) -> usize {
    c.gates().iter().map(|g| g.nontrivial_rotations(tol)).sum()
}

pub fn transform(c: &Circuit) -> Result<Circuit, TransformError> {
    transform_with_tol(c, DEFAULT_ANGLE_TOL)
}

/// Resynthesizes every run and keeps the new word only when it has fewer
/// non-trivial rotations, or as many with fewer gates, or as many gates with
/// fewer H. The replacement sits at the run's first position, so gates never
/// move across a CX.
pub fn transform_with_tol(c: &Circuit, tol: f64) -> Result<Circuit, TransformError> {
    if let Some((index, g)) = c
        .gates()
        .iter()
        .enumerate()
        .find(|(_, g)| g.kind.num_qubits() > 1 && g.kind != GateKind::CX)
    {
        return Err(TransformError::NotDecomposed { index, kind: g.kind });
    }
    debug_assert!(is_decomposed(c));
    let runs = segment_runs(c)?;
    let rewrites: Vec<Option<Vec<Gate>>> = runs
        .par_iter()
        .map(|run| {
            let old = cost(run.gates(c), tol);
            let word = resynthesize_min_rz(&fuse(run.gates(c)), run.qubit, tol)?;
            Ok((cost(&word, tol) < old).then_some(word))
        })
        .collect::<Result<_, TransformError>>()?;

    let mut replacement: Vec<Option<Vec<Gate>>> = vec![None; c.len()];
    let mut dropped = vec![false; c.len()];
    for (run, word) in runs.iter().zip(rewrites) {
        if let Some(word) = word {
            for &p in &run.positions {
                dropped[p] = true;
            }
            replacement[run.start()] = Some(word);
        }
    }
    let mut out = c.empty_like();
    for (i, g) in c.gates().iter().enumerate() {
        match replacement[i].take() {
            Some(word) => out.extend_trusted(word),
            None if !dropped[i] => out.extend_trusted([g.clone()]),
            None => {}
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::decompose_to_cx_1q;
    use crate::ir::generators::qft;
    use crate::verify::{self, phase_distance, unitary_of};

    fn rz(q: usize, x: f64) -> Gate {
        Gate::rz(q, Angle::radians(x))
    }

    #[test]
    fn runs_are_bounded_by_cx() {
        let c = Circuit::from_gates(2, [Gate::h(0), Gate::cx(0, 1), Gate::t(0)]).unwrap();
        let runs = segment_runs(&c).unwrap();
        assert_eq!(runs.len(), 2);
        assert!(runs.iter().all(|r| r.qubit == 0 && r.len() == 1));
        let c = Circuit::from_gates(2, [rz(0, 0.1), rz(0, 0.2), rz(1, 0.3)]).unwrap();
        let runs = segment_runs(&c).unwrap();
        assert_eq!(runs[0], SingleQubitRun { qubit: 0, positions: vec![0, 1] });
        assert_eq!(runs[1], SingleQubitRun { qubit: 1, positions: vec![2] });
        let c = Circuit::from_gates(2, [Gate::cz(0, 1)]).unwrap();
        assert!(segment_runs(&c).is_err());
    }

    #[test]
    fn fuse_examples() {
        let u = fuse(&[rz(0, 0.3), rz(0, 0.4)]);
        let v = Unitary2::of_gate(&rz(0, 0.7));
        for k in 0..4 {
            assert!((u.m[k] - v.m[k]).norm() < 1e-12);
        }
        assert!(fuse(&[Gate::h(0), Gate::h(0)]).distance(&Unitary2::identity()) < 1e-12);
    }

    #[test]
    fn gate_matrices_match_oracle() {
        let gates = [
            Gate::x(0),
            Gate::y(0),
            Gate::z(0),
            Gate::h(0),
            Gate::s(0),
            Gate::sdg(0),
            Gate::t(0),
            Gate::tdg(0),
            rz(0, 0.3),
            Gate::rx(0, Angle::radians(0.4)),
            Gate::ry(0, Angle::radians(0.5)),
            Gate::single(GateKind::RxPi4, 0),
            Gate::single(GateKind::RxPi4Dg, 0),
            Gate::u3(0, Angle::radians(0.1), Angle::radians(0.2), Angle::radians(0.3)),
        ];
        for g in gates {
            let ours = Unitary2::of_gate(&g);
            let theirs = Unitary2::raw(verify::gate_matrix(&g).try_into().unwrap());
            assert!(ours.distance(&theirs) < 1e-7, "{}", g.kind);
        }
    }

    #[test]
    fn pure_z_rotation_stays_one_rz() {
        let w = resynthesize_min_rz(&Unitary2::of_gate(&rz(0, 0.7)), 0, 1e-9).unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].kind, GateKind::RZ);
        assert!((w[0].params[0].to_radians() - 0.7).abs() < 1e-9);
    }

    #[test]
    fn ry_needs_one_rz_and_two_h() {
        let u = Unitary2::of_gate(&Gate::ry(0, Angle::radians(0.9)));
        let w = resynthesize_min_rz(&u, 0, 1e-9).unwrap();
        assert_eq!(cost(&w, 1e-9).0, 1);
        assert_eq!(w.iter().filter(|g| g.kind == GateKind::H).count(), 2);
        assert!(fuse(&w).distance(&u) < 1e-7);
    }

    #[test]
    fn euler_roundtrip_on_random_unitaries() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..500 {
            let g: Vec<Gate> = (0..6)
                .map(|i| {
                    let x = Angle::radians(rng.gen_range(0.0..std::f64::consts::TAU));
                    if i % 2 == 0 { Gate::rz(0, x) } else { Gate::ry(0, x) }
                })
                .collect();
            let u = fuse(&g);
            let w = resynthesize_min_rz(&u, 0, 1e-9).unwrap();
            assert!(fuse(&w).distance(&u) < 1e-7);
            assert!(cost(&w, 1e-9).0 <= 3);
        }
    }

    #[test]
    fn hadamard_is_clifford_only() {
        let u = Unitary2::of_gate(&Gate::h(0));
        let w = resynthesize_min_rz(&u, 0, 1e-9).unwrap();
        assert_eq!(w, vec![Gate::h(0)]);
    }

    #[test]
    fn transform_merges_rotations() {
        let c = Circuit::from_gates(1, [rz(0, 0.3), rz(0, 0.4)]).unwrap();
        let t = transform(&c).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!((rz_count(&c), rz_count(&t)), (2, 1));
        let c = Circuit::from_gates(1, [Gate::t(0)]).unwrap();
        assert_eq!(transform(&c).unwrap(), c);
    }

    #[test]
    fn rz_count_examples() {
        let c = Circuit::from_gates(1, [Gate::rz(0, Angle::dyadic(1, 1))]).unwrap();
        assert_eq!(rz_count(&c), 0);
        let c = Circuit::from_gates(1, [Gate::rz(0, Angle::quarter_pi())]).unwrap();
        assert_eq!(rz_count(&c), 0);
        let c = Circuit::from_gates(1, [rz(0, 0.3), Gate::ry(0, Angle::radians(0.2))]).unwrap();
        assert_eq!(rz_count(&c), 2);
    }

    #[test]
    fn qft4_transform_is_equivalent_and_not_worse() {
        let d = decompose_to_cx_1q(&qft(4));
        let t = transform(&d).unwrap();
        assert!(rz_count(&t) <= rz_count(&d));
        let (a, b) = (unitary_of(&d).unwrap(), unitary_of(&t).unwrap());
        assert!(phase_distance(&a, &b) < 1e-9);
        let cx = |c: &Circuit| -> Vec<Vec<usize>> {
            c.gates().iter().filter(|g| g.kind == GateKind::CX).map(|g| g.qubits.clone()).collect()
        };
        assert_eq!(cx(&d), cx(&t));
    }

    #[test]
    fn qft18_runs_cover_every_rz() {
        let d = decompose_to_cx_1q(&qft(18));
        let runs = segment_runs(&d).unwrap();
        let mut covered = vec![false; d.len()];
        for r in &runs {
            for &p in &r.positions {
                assert!(!covered[p]);
                covered[p] = true;
            }
        }
        for (i, g) in d.gates().iter().enumerate() {
            assert_eq!(covered[i], g.kind.num_qubits() == 1, "{i}");
        }
    }
}
