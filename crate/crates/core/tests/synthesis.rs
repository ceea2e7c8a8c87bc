use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use taco_core::ir::{Angle, GateKind};
use taco_core::synth::{
    exact_unitary_of, is_ma_form, ma_normalize, parse_synth_string, rz_matrix, search, word_distance, SearchConfig,
    Sidecar, TCountOracle,
};

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

#[test]
fn normal_form_matches_bfs_oracle() {
    let oracle = TCountOracle::new(12);
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..600 {
        let len = rng.gen_range(0..=12);
        let word: Vec<GateKind> = (0..len).map(|_| LETTERS[rng.gen_range(0..LETTERS.len())]).collect();
        let u = exact_unitary_of(&word).unwrap();
        let w = ma_normalize(&u).unwrap();
        assert!(is_ma_form(&w.matrix_symbols()), "{word:?}");
        assert!(w.exact().proj_eq(&u), "{word:?}");
        assert_eq!(Some(w.t_count()), oracle.min_tcount(&u), "{word:?}");
    }
}

type M = [C; 4];

fn mul(a: &M, b: &M) -> M {
    [
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    ]
}

fn letter(k: GateKind) -> M {
    let (o, z, i) = (C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 1.0));
    let r = C::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    match k {
        GateKind::H => [r, r, r, -r],
        GateKind::S => [o, z, z, i],
        GateKind::T => [o, z, z, C::from_polar(1.0, std::f64::consts::FRAC_PI_4)],
        _ => unreachable!(),
    }
}

fn dist(a: &M, b: &M) -> f64 {
    let tr = a[0].conj() * b[0] + a[2].conj() * b[2] + a[1].conj() * b[1] + a[3].conj() * b[3];
    (1.0 - tr.norm() / 2.0).max(0.0).sqrt()
}

#[test]
fn search_is_minimal_at_its_bound() {
    let (theta, eps) = (0.1, 0.05);
    let w = search(&rz_matrix(Angle::radians(theta)), eps, &SearchConfig::default()).unwrap();
    assert!(word_distance(&w, &rz_matrix(Angle::radians(theta))) <= eps);
    assert_eq!(Some(w.t_count()), minimal_tcount(theta, eps, 12));
}

/// Minimal T-count, counting a leading T and one T per syllable.
fn minimal_tcount(theta: f64, eps: f64, max_t: usize) -> Option<usize> {
    let target = [C::from_polar(1.0, -theta / 2.0), C::new(0.0, 0.0), C::new(0.0, 0.0), C::from_polar(1.0, theta / 2.0)];
    let h = letter(GateKind::H);
    let s = letter(GateKind::S);
    let mut cliffords: Vec<M> = vec![[C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0), C::new(1.0, 0.0)]];
    let mut i = 0;
    while i < cliffords.len() {
        for g in [h, s] {
            let m = mul(&g, &cliffords[i]);
            if cliffords.iter().all(|c| dist(c, &m) > 1e-6) {
                cliffords.push(m);
            }
        }
        i += 1;
    }
    let ht = mul(&h, &letter(GateKind::T));
    let sht = mul(&s, &ht);
    let hits = |m: &M| cliffords.iter().any(|c| dist(&mul(m, c), &target) <= eps);
    // `plain` and `led` hold the prefixes without and with a leading T
    let mut plain = vec![cliffords[0]];
    let mut led = vec![letter(GateKind::T)];
    if plain.iter().any(hits) {
        return Some(0);
    }
    for t in 1..=max_t {
        if led.iter().any(hits) {
            return Some(t);
        }
        plain = plain.iter().flat_map(|m| [mul(m, &ht), mul(m, &sht)]).collect();
        if plain.iter().any(hits) {
            return Some(t);
        }
        led = led.iter().flat_map(|m| [mul(m, &ht), mul(m, &sht)]).collect();
    }
    None
}

#[test]
fn gridsynth_fixture_meets_its_precision() {
    let text = include_str!("data/qft18_eps1e-5.sidecar");
    let sidecar = Sidecar::parse(text).unwrap();
    assert_eq!(sidecar.len(), 32);
    for line in text.lines().filter(|l| !l.starts_with('#')) {
        let mut parts = line.split_whitespace();
        let theta: f64 = parts.next().unwrap().parse().unwrap();
        let eps: f64 = parts.next().unwrap().parse().unwrap();
        let gates = parse_synth_string(parts.next().unwrap()).unwrap();
        let u = exact_unitary_of(&gates).unwrap();
        let w = ma_normalize(&u).unwrap();
        assert!(word_distance(&w, &rz_matrix(Angle::radians(theta))) <= eps, "{theta}");
    }
}
