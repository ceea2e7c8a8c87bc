//! Acceptance checks, one line per criterion. Run with
//! `cargo test -p taco-core --test acceptance`.
//!
//! Criteria listed in `KNOWN_UNMET` fail for reasons recorded next to them;
//! the process exits non-zero if any other criterion fails or if a known
//! failure starts passing.

use std::time::{Duration, Instant};

use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use taco_core::arch::{baseline_tiles, plan_layout, schedule, CostModel, GateMix};
use taco_core::clifford::CliffordClass;
use taco_core::decompose::decompose_to_cx_1q;
use taco_core::ir::generators::{ising, qft, qpe, wstate};
use taco_core::ir::{Angle, Circuit, Gate, GateKind};
use taco_core::pauli::Pauli;
use taco_core::pbc::{CliffordTableau, PauliString};
use taco_core::pipeline::{run_pipeline, PipelineConfig, PipelineOutput};
use taco_core::reduce::reduce_run;
use taco_core::synth::{
    exact_unitary_of, is_ma_form, ma_normalize, Backend, MAWord, Sidecar, Syllable, TCountOracle,
};
use taco_core::transform::{rz_count, transform};
use taco_core::verify::{unitary_of, DenseUnitary};

/// Criteria expected to fail, with the reason.
const KNOWN_UNMET: &[(usize, &str)] = &[
    (7, "at n = 1 the compact layout needs 6 tiles against 2n+sqrt(8n)+1 = 5.83"),
    (8, "PBC's opening layer of single-qubit rotations spans 17 qubits; no 18-qubit layer can be twice that"),
];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

// ---- criterion 1 ----

type M = [C; 4];

fn mat(k: GateKind) -> M {
    let (z, o, i) = (C::new(0.0, 0.0), C::new(1.0, 0.0), C::new(0.0, 1.0));
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let w = C::from_polar(1.0, std::f64::consts::FRAC_PI_4);
    match k {
        GateKind::H => [o * r, o * r, o * r, -o * r],
        GateKind::T => [o, z, z, w],
        GateKind::Tdg => [o, z, z, w.conj()],
        GateKind::S => [o, z, z, i],
        GateKind::X => [z, o, o, z],
        GateKind::Z => [o, z, z, -o],
        // exp(-iπ/8 X)
        GateKind::RxPi4 => {
            let (c, s) = ((std::f64::consts::PI / 8.0).cos(), (std::f64::consts::PI / 8.0).sin());
            [o * c, -i * s, -i * s, o * c]
        }
        GateKind::RxPi4Dg => {
            let (c, s) = ((std::f64::consts::PI / 8.0).cos(), (std::f64::consts::PI / 8.0).sin());
            [o * c, i * s, i * s, o * c]
        }
        _ => unreachable!("{k:?}"),
    }
}

fn product(matrix_order: &[GateKind]) -> M {
    let id = [C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0), C::new(1.0, 0.0)];
    matrix_order.iter().fold(id, |a, &k| {
        let b = mat(k);
        [a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]]
    })
}

/// Largest entry difference after removing the best global phase.
fn phase_gap(a: &M, b: &M) -> f64 {
    let tr: C = (0..4).map(|k| a[k].conj() * b[k]).sum();
    let ph = if tr.norm() > 0.0 { tr / tr.norm() } else { C::new(1.0, 0.0) };
    (0..4).map(|k| (a[k] * ph - b[k]).norm()).fold(0.0, f64::max)
}

fn criterion_identities() -> Outcome {
    use GateKind::*;
    // matrix-order words
    let identities: [(&[GateKind], &[GateKind]); 10] = [
        (&[T, S], &[Tdg, Z]),
        (&[Z, H], &[H, X]),
        (&[X, H], &[H, Z]),
        (&[Z, T], &[T, Z]),
        (&[Z, Tdg], &[Tdg, Z]),
        (&[X, T], &[Tdg, X]),
        (&[X, Tdg], &[T, X]),
        (&[H, T], &[RxPi4, H]),
        (&[H, Tdg], &[RxPi4Dg, H]),
        (&[H, H], &[]),
    ];
    let mut worst = 0.0f64;
    for (lhs, rhs) in identities {
        let app = |w: &[GateKind]| w.iter().rev().copied().collect::<Vec<_>>();
        let (l, r) = (exact_unitary_of(&app(lhs)).unwrap(), exact_unitary_of(&app(rhs)).unwrap());
        if !l.proj_eq(&r) {
            return outcome(false, format!("{lhs:?} != {rhs:?} exactly"));
        }
        worst = worst.max(phase_gap(&product(lhs), &product(rhs)));
    }
    outcome(worst < 1e-12, format!("10 identities exact; worst float gap {worst:.1e} (< 1e-12)"))
}

// ---- criteria 2 and 3 ----

const LETTERS: [GateKind; 8] = [
    GateKind::H,
    GateKind::S,
    GateKind::Sdg,
    GateKind::T,
    GateKind::Tdg,
    GateKind::X,
    GateKind::Y,
    GateKind::Z,
];

fn criterion_ma_minimality() -> Outcome {
    let oracle = TCountOracle::new(12);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let cases = 600;
    for _ in 0..cases {
        let len = rng.gen_range(0..=12);
        let word: Vec<GateKind> = (0..len).map(|_| LETTERS[rng.gen_range(0..LETTERS.len())]).collect();
        let u = exact_unitary_of(&word).unwrap();
        let w = ma_normalize(&u).unwrap();
        if !is_ma_form(&w.matrix_symbols()) || !w.exact().proj_eq(&u) || oracle.min_tcount(&u) != Some(w.t_count()) {
            return outcome(false, format!("mismatch on {word:?}"));
        }
    }
    outcome(true, format!("{cases} words: normal form, exact, T-count equals BFS minimum"))
}

fn criterion_reduction_structure() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let cases = 1000;
    for _ in 0..cases {
        let n = rng.gen_range(0..=30);
        let w = MAWord {
            leading_t: rng.gen(),
            syllables: (0..n).map(|_| if rng.gen() { Syllable::HT } else { Syllable::SHT }).collect(),
            clifford: CliffordClass::from_index(rng.gen_range(0..24)),
        };
        let r = reduce_run(&w);
        if !r.body.iter().all(|k| k.is_pi4_rotation()) || !r.exact().proj_eq(&w.exact()) {
            return outcome(false, format!("bad reduction of {}", w.to_ma_string()));
        }
    }
    outcome(true, format!("{cases} words: bodies hold no H and no interior S, exact equality"))
}

// ---- pipeline-based criteria ----

struct Runs {
    qft18: PipelineOutput,
    qpe9: PipelineOutput,
    qft18_external: PipelineOutput,
}

fn runs() -> Runs {
    let search = PipelineConfig { epsilon: 1e-3, backend: Backend::Search, ..PipelineConfig::default() };
    let sidecar = Sidecar::parse(include_str!("data/qft18_eps1e-5.sidecar")).unwrap();
    let external =
        PipelineConfig { epsilon: 1e-5, backend: Backend::External, sidecar: Some(sidecar), ..PipelineConfig::default() };
    Runs {
        qft18: run_pipeline(&qft(18), &search).unwrap(),
        qpe9: run_pipeline(&qpe(9, 1), &search).unwrap(),
        qft18_external: run_pipeline(&qft(18), &external).unwrap(),
    }
}

fn criterion_reduction_percentages(r: &Runs) -> Outcome {
    let hs = |o: &PipelineOutput| (o.report.reduction.stats.h.reduction, o.report.reduction.stats.s.reduction);
    let (qh, qs) = hs(&r.qft18);
    let (ph, ps) = hs(&r.qpe9);
    let (xh, xs) = hs(&r.qft18_external);
    let search_ok = qh >= 0.90 && qs >= 0.80 && ph >= 0.90 && ps >= 0.80;
    let external_ok = (xh - 0.986).abs() <= 0.05 && (xs - 0.935).abs() <= 0.05;
    outcome(
        search_ok && external_ok,
        format!(
            "eps 1e-3: QFT-18 H {:.1}% S {:.1}%, QPE-9 H {:.1}% S {:.1}% (>= 90/80); \
             eps 1e-5 external QFT-18 H {:.1}% S {:.1}% (98.6/93.5 +- 5)",
            qh * 100.0,
            qs * 100.0,
            ph * 100.0,
            ps * 100.0,
            xh * 100.0,
            xs * 100.0
        ),
    )
}

fn criterion_equivalence() -> Outcome {
    let cfg = PipelineConfig { epsilon: 1e-3, verify: true, ..PipelineConfig::default() };
    let mut worst = 0.0f64;
    let mut count = 0;
    for n in 2..=6 {
        for c in [qft(n), qpe(n, n as u64), ising(n, 2), wstate(n)] {
            match run_pipeline(&c, &cfg) {
                Ok(out) => {
                    let v = out.report.verification.unwrap();
                    worst = worst.max(v.distance / v.tolerance);
                    count += 1;
                }
                Err(e) => return outcome(false, format!("{}: {e}", c.name.unwrap_or_default())),
            }
        }
    }
    outcome(true, format!("{count} instances within #RZ*eps + 1e-9 (worst at {:.2}% of bound)", worst * 100.0))
}

fn criterion_speedup(r: &Runs) -> Outcome {
    let cm = CostModel::unit_h();
    let (base, red) = (GateMix::QFT100.serial_cost(&cm), GateMix::QFT100_REDUCED.serial_cost(&cm));
    let ratio = base / red;
    let pipeline = r.qft18.report.cost.serial_speedup;
    outcome(
        (ratio - 2.0).abs() <= 0.05 && pipeline >= 2.0,
        format!(
            "QFT-100 mix {:.0}k -> {:.0}k cycles, ratio {ratio:.3} (2.0 +- 0.05); QFT-18 serial ratio {pipeline:.3} (>= 2.0)",
            base / 1e3,
            red / 1e3
        ),
    )
}

fn criterion_architecture() -> Outcome {
    let mut first_bad = None;
    for n in 1..=1_000_000usize {
        let tiles = (3 * n).div_ceil(2) + 4;
        if (tiles as f64) >= baseline_tiles(n) && first_bad.is_none() {
            first_bad = Some(n);
        }
    }
    // the layout itself follows the formula
    let formula_ok = [1usize, 2, 3, 17, 18, 1000, 1_000_000]
        .iter()
        .all(|&n| plan_layout(n, 1).unwrap().total_tiles == (3 * n).div_ceil(2) + 4);
    let mut throughput_ok = true;
    for l in [1usize, 10, 100, 1000] {
        let mut c = Circuit::new(1);
        for _ in 0..l {
            c.push(Gate::single(GateKind::T, 0)).unwrap();
        }
        let s = schedule(&c, &plan_layout(1, 1).unwrap(), &CostModel::default()).unwrap();
        throughput_ok &= s.total_cycles == (l + 2) as f64;
    }
    let detail = match first_bad {
        None => "1.5n+4 < 2n+sqrt(8n)+1 for all n in [1, 1e6]".to_string(),
        Some(n) => format!(
            "1.5n+4 >= 2n+sqrt(8n)+1 at n = {n} ({} vs {:.2}); holds for n >= 2",
            (3 * n).div_ceil(2) + 4,
            baseline_tiles(n)
        ),
    };
    outcome(
        first_bad.is_none() && formula_ok && throughput_ok,
        format!("{detail}; layout formula {formula_ok}; run of L takes L+2 cycles {throughput_ok}"),
    )
}

fn criterion_parallelism(r: &Runs) -> Outcome {
    let p = &r.qft18.report.parallelism;
    let median_ok = p.taco.median > p.pbc.median;
    let max_ok = p.taco.max >= 2 * p.pbc.max;
    outcome(
        median_ok && max_ok,
        format!(
            "QFT-18 median TACO {} vs PBC {} ({}), max TACO {} vs PBC {} (needs >= 2x: {})",
            p.taco.median,
            p.pbc.median,
            if median_ok { "ok" } else { "not greater" },
            p.taco.max,
            p.pbc.max,
            max_ok
        ),
    )
}

fn criterion_locality(r: &Runs) -> Outcome {
    let loc = r.qpe9.report.reduction.locality;
    outcome(loc >= 0.90, format!("QPE-9 at eps 1e-3: {:.1}% of rotations in runs of >= 10 (>= 90%)", loc * 100.0))
}

// ---- criterion 10 ----

fn random_circuit(rng: &mut ChaCha8Rng, n: usize, len: usize) -> Circuit {
    let mut c = Circuit::new(n);
    for _ in 0..len {
        let q = rng.gen_range(0..n);
        let r = (q + rng.gen_range(1..n)) % n;
        let theta = Angle::radians(rng.gen_range(-3.0..3.0));
        let g = match rng.gen_range(0..8) {
            0 => Gate::h(q),
            1 => Gate::s(q),
            2 => Gate::t(q),
            3 => Gate::rz(q, theta),
            4 => Gate::rx(q, theta),
            5 => Gate::ry(q, theta),
            6 => Gate::cx(q, r),
            _ => Gate::cp(q, r, theta),
        };
        c.push(g).unwrap();
    }
    c
}

fn letter_dense(n: usize, q: usize, p: Pauli) -> DenseUnitary {
    let (z, o, i) = (C::new(0.0, 0.0), C::new(1.0, 0.0), C::new(0.0, 1.0));
    let m = match p {
        Pauli::I => [o, z, z, o],
        Pauli::X => [z, o, o, z],
        Pauli::Y => [z, -i, i, z],
        Pauli::Z => [o, z, z, -o],
    };
    let mut u = DenseUnitary::identity(n);
    u.apply(&m, &[q]);
    u
}

fn pauli_dense(p: &PauliString) -> DenseUnitary {
    let n = p.letters.len();
    let mut u = DenseUnitary::identity(n);
    for (q, &l) in p.letters.iter().enumerate() {
        u = letter_dense(n, q, l).mul(&u);
    }
    u
}

fn tableau_sound(rng: &mut ChaCha8Rng, n: usize) -> bool {
    const ONE_Q: [GateKind; 6] = [GateKind::H, GateKind::S, GateKind::Sdg, GateKind::X, GateKind::Y, GateKind::Z];
    let mut c = Circuit::new(n);
    let mut tab = CliffordTableau::identity(n);
    for _ in 0..30 {
        let q = rng.gen_range(0..n);
        if n > 1 && rng.gen_bool(0.3) {
            let t = (q + rng.gen_range(1..n)) % n;
            c.push(Gate::cx(q, t)).unwrap();
            tab.apply_cx(q, t);
        } else {
            let k = ONE_Q[rng.gen_range(0..ONE_Q.len())];
            c.push(Gate::single(k, q)).unwrap();
            tab.apply_1q(q, CliffordClass::from_gate(k).unwrap());
        }
    }
    let u = unitary_of(&c).unwrap();
    (0..n).all(|q| {
        [Pauli::X, Pauli::Z].into_iter().all(|p| {
            // U† P U against the tableau's signed image
            let conj = u.adjoint_mul(&letter_dense(n, q, p)).mul(&u);
            let image = tab.image(q, p);
            let sign = if image.is_negative() { -1.0 } else { 1.0 };
            let want = pauli_dense(&image);
            let d = conj.dim();
            (0..d * d).all(|k| (conj.get(k / d, k % d) - want.get(k / d, k % d) * sign).norm() < 1e-9)
        })
    })
}

fn criterion_monotonicity(r: &Runs) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..200 {
        let n = rng.gen_range(2..=4);
        let d = decompose_to_cx_1q(&random_circuit(&mut rng, n, 30));
        if rz_count(&transform(&d).unwrap()) > rz_count(&d) {
            return outcome(false, "transform increased the RZ count");
        }
    }
    for out in [&r.qft18, &r.qpe9, &r.qft18_external] {
        let s = &out.report.reduction.stats;
        if [&s.h, &s.s, &s.clifford].iter().any(|k| k.reduction < 0.0 || k.after > k.before) {
            return outcome(false, "negative reduction");
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let cases = 200;
    for case in 0..cases {
        if !tableau_sound(&mut rng, 1 + case % 6) {
            return outcome(false, format!("tableau differs from dense conjugation in case {case}"));
        }
    }
    outcome(true, format!("200 transforms never add RZ; reductions >= 0; tableau matches dense on {cases} cases"))
}

fn main() {
    let t0 = Instant::now();
    let mut results: Vec<(usize, &str, Outcome, Duration)> = Vec::new();
    let mut timed = |id: usize, name: &'static str, f: &dyn Fn() -> Outcome| {
        let t = Instant::now();
        let o = f();
        results.push((id, name, o, t.elapsed()));
    };
    timed(1, "identity audit", &criterion_identities);
    timed(2, "MA minimality", &criterion_ma_minimality);
    timed(3, "reduction structure", &criterion_reduction_structure);
    let t = Instant::now();
    let r = runs();
    let pipeline_time = t.elapsed();
    timed(4, "reduction percentages", &|| criterion_reduction_percentages(&r));
    timed(5, "end-to-end equivalence", &criterion_equivalence);
    timed(6, "serial speedup", &|| criterion_speedup(&r));
    timed(7, "architecture formulas", &criterion_architecture);
    timed(8, "parallelism ordering", &|| criterion_parallelism(&r));
    timed(9, "locality", &|| criterion_locality(&r));
    timed(10, "monotonicity suite", &|| criterion_monotonicity(&r));

    let mut unexpected = 0;
    for (id, name, o, dt) in &results {
        let known = KNOWN_UNMET.iter().find(|(k, _)| k == id);
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("{tag} {id:>2}. {name} ({:.2}s): {}", dt.as_secs_f64(), o.detail);
        match (o.pass, known) {
            (false, Some((_, why))) => println!("         known: {why}"),
            (false, None) => unexpected += 1,
            (true, Some(_)) => {
                println!("         listed as unmet but passed; update KNOWN_UNMET");
                unexpected += 1;
            }
            (true, None) => {}
        }
    }
    if results[0].3 >= Duration::from_secs(1) {
        println!("criterion 1 exceeded its 1 s budget");
        unexpected += 1;
    }
    let passed = results.iter().filter(|r| r.2.pass).count();
    println!(
        "{passed}/{} criteria pass; shared pipeline runs {:.1}s; total {:.1}s",
        results.len(),
        pipeline_time.as_secs_f64(),
        t0.elapsed().as_secs_f64()
    );
    if unexpected > 0 {
        std::process::exit(1);
    }
}
