//! Move sites, deletions, minimization and reduction confluence.

mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{naive_reduce, naive_sites, tokens};
use doodle_core::moves::{
    apply_delete, find_r1_sites, find_r2_sites, find_sites, is_minimal, minimize, minimize_random, MoveSite,
};
use doodle_core::walk::{random_arrow_diagram, random_move_walk, random_quiver, random_realizable};
use doodle_core::{ArrowDiagram, QuiverDiagram};

fn library_sites(d: &ArrowDiagram) -> (BTreeSet<usize>, BTreeSet<(usize, usize)>) {
    let r1 = find_r1_sites(d)
        .into_iter()
        .map(|s| match s {
            MoveSite::R1 { chord } => chord,
            _ => unreachable!(),
        })
        .collect();
    let r2 = find_r2_sites(d)
        .into_iter()
        .map(|s| match s {
            MoveSite::R2 { chords: (a, b), .. } => (a.min(b), a.max(b)),
            _ => unreachable!(),
        })
        .collect();
    (r1, r2)
}

#[test]
fn sites_match_exhaustive_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..3000 {
        let k = rng.gen_range(0..8);
        let d = random_arrow_diagram(&mut rng, k);
        assert_eq!(library_sites(&d), naive_sites(&tokens(&d)), "{d}");
    }
}

#[test]
fn deletions_remove_exactly_the_site_chords() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..2000 {
        let d = random_realizable(&mut rng, 6);
        for s in find_sites(&d) {
            let e = apply_delete(&d, &s).unwrap();
            let removed = match &s {
                MoveSite::R1 { .. } => 1,
                MoveSite::R2 { .. } => 2,
            };
            assert_eq!(e.chords() + removed, d.chords());
        }
    }
}

#[test]
fn minimization_is_order_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..1000 {
        let k = rng.gen_range(0..9);
        let d = random_arrow_diagram(&mut rng, k);
        let (m, trace) = minimize(&d);
        assert!(is_minimal(&m));
        assert_eq!(trace.replay(&d).unwrap(), m);
        let (r, _) = minimize_random(&d, &mut rng);
        assert_eq!(m, r, "{d}");
    }
}

#[test]
fn walks_keep_the_minimal_diagram() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..500 {
        let d = random_arrow_diagram(&mut rng, 5);
        let (e, trace) = random_move_walk(&mut rng, &d, 10, 9);
        assert_eq!(trace.replay(&d).unwrap(), e);
        assert_eq!(minimize(&d).0, minimize(&e).0);
    }
}

#[test]
fn quiver_reduction_matches_naive_merging() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..3000 {
        let k = rng.gen_range(1..8);
        let q = random_quiver(&mut rng, k, 2);
        let chords: Vec<usize> = q.chord_ids().iter().map(|&c| c as usize).collect();
        let naive = naive_reduce(chords, q.labels().to_vec());
        let lib = q.reduce();
        match naive {
            None => assert!(lib.has_isolated_chord(), "{q}"),
            Some((c, l)) => {
                assert!(!lib.has_isolated_chord());
                assert_eq!(QuiverDiagram::new(c, l).unwrap().canonical_form(), lib.canonical_form(), "{q}");
            }
        }
    }
}

proptest! {
    #[test]
    fn reduction_is_confluent(seed in any::<u64>(), k in 1usize..9, max_label in 1u32..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = random_quiver(&mut rng, k, max_label);
        // Diagrams with an isolated chord vanish whatever they reduce to.
        let a = q.reduce().canonical_form();
        let b = q.reduce_random(&mut rng).canonical_form();
        prop_assert_eq!(a.has_isolated_chord(), b.has_isolated_chord());
        if !a.has_isolated_chord() {
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn minimal_diagrams_have_no_sites(seed in any::<u64>(), k in 0usize..9) {
        let d = random_arrow_diagram(&mut ChaCha8Rng::seed_from_u64(seed), k);
        let (m, _) = minimize(&d);
        prop_assert!(find_sites(&m).is_empty());
    }
}
