use anyhow::Result;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use doodle_core::census::{build_census, verify_theorems, CensusOptions};
use doodle_core::invariant::diagram_invariant_with;
use doodle_core::par::Execution;
use doodle_core::surface::is_realizable;
use doodle_core::tangles::{complete_resolution, min_chord_degree, resolution_sum, star_tangle};
use doodle_core::walk::{random_arrow_diagram, random_move_walk, random_realizable};
use doodle_core::Field;

fn report(name: &str, ok: bool) -> bool {
    println!("{} {name}", if ok { "ok  " } else { "FAIL" });
    ok
}

/// Quick versions of the main consistency checks, plus a deliberately
/// corrupted census that the verifier must reject.
pub fn run(seed: u64, exec: Execution) -> Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut all = true;

    let mut same = true;
    for _ in 0..100 {
        let d = random_arrow_diagram(&mut rng, 4);
        let (e, _) = random_move_walk(&mut rng, &d, 6, 8);
        same &= diagram_invariant_with(&d, 4, Field::Rational, exec)?.value()
            == diagram_invariant_with(&e, 4, Field::Rational, exec)?.value();
    }
    all &= report("invariant unchanged along random move walks", same);

    let mut mod2 = true;
    for _ in 0..50 {
        let d = random_arrow_diagram(&mut rng, 5);
        let q = diagram_invariant_with(&d, 4, Field::Rational, exec)?;
        let f = diagram_invariant_with(&d, 4, Field::Gf2, exec)?;
        mod2 &= q.value().to_gf2()? == *f.value();
    }
    all &= report("F2 invariant is the rational one mod 2", mod2);

    all &= report(
        "curves built by geometric insertions are realizable",
        (0..100).all(|_| is_realizable(&random_realizable(&mut rng, 6))),
    );

    let sum = resolution_sum(&complete_resolution(&star_tangle(3)?));
    all &=
        report("three-branch star leaves 8 terms of degree >= 2", sum.len() == 8 && min_chord_degree(&sum) == Some(2));

    let census = build_census(&CensusOptions { exec, ..CensusOptions::new(4) })?;
    all &= report("census up to 4 crossings verifies", verify_theorems(&census, Field::Rational, exec)?.passed);
    let mut broken = census.clone();
    let mut dup = broken.records[0].clone();
    dup.class_id = broken.records.len();
    broken.records.push(dup);
    all &= report("verifier rejects a duplicated class", !verify_theorems(&broken, Field::Rational, exec)?.passed);

    Ok(all)
}
