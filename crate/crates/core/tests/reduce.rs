use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use taco_core::clifford::CliffordClass;
use taco_core::ir::GateKind;
use taco_core::reduce::reduce_run;
use taco_core::synth::{MAWord, Syllable};

fn random_ma(rng: &mut ChaCha8Rng) -> MAWord {
    let n = rng.gen_range(0..=30);
    MAWord {
        leading_t: rng.gen(),
        syllables: (0..n).map(|_| if rng.gen() { Syllable::HT } else { Syllable::SHT }).collect(),
        clifford: CliffordClass::from_index(rng.gen_range(0..24)),
    }
}

#[test]
fn reduced_bodies_hold_only_pi4_rotations() {
    let mut rng = ChaCha8Rng::seed_from_u64(1000);
    for _ in 0..1000 {
        let w = random_ma(&mut rng);
        let r = reduce_run(&w);
        assert!(r.body.iter().all(|k| k.is_pi4_rotation()), "{w:?}");
        assert!(!r.body.contains(&GateKind::H));
        assert!(!r.body.iter().any(|k| matches!(k, GateKind::S | GateKind::Sdg)));
        assert_eq!(r.t_count(), w.t_count());
        assert!(r.exact().proj_eq(&w.exact()), "{w:?}");
        // only a word starting with an SHT syllable keeps a boundary S
        let starts_with_sht = !w.leading_t && w.syllables.first() == Some(&Syllable::SHT);
        assert!(!r.boundary_s || starts_with_sht, "{w:?}");
    }
}
