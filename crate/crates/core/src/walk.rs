//! Seeded random generators: arbitrary diagrams, move walks, and insertions
//! that follow actual curve pictures so realizability is kept.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::diagram::{ArrowDiagram, Endpoint, Role};
use crate::moves::{
    apply_delete, apply_r1_insert, apply_r2_insert, apply_step, find_sites, KinkOrientation, MoveStep, MoveTrace,
    R2Variant,
};
use crate::quiver::QuiverDiagram;
use crate::surface::{rotation_system, Dart};

/// Uniform random chord matching with random directions.
pub fn random_arrow_diagram<R: Rng>(rng: &mut R, chords: usize) -> ArrowDiagram {
    let mut ends: Vec<Endpoint> =
        (0..chords).flat_map(|c| [Endpoint::new(c, Role::Tail), Endpoint::new(c, Role::Head)]).collect();
    ends.shuffle(rng);
    ArrowDiagram::from_endpoints(ends).expect("every chord has one tail and one head")
}

/// One random move: a deletion at an existing site, or an R1 / R2 insertion
/// at random slots, keeping at most `max_chords` chords.
pub fn random_move_step<R: Rng>(rng: &mut R, d: &ArrowDiagram, max_chords: usize) -> MoveStep {
    let sites = find_sites(d);
    let can_grow1 = d.chords() < max_chords;
    let can_grow2 = d.chords() + 2 <= max_chords;
    loop {
        match rng.gen_range(0..3) {
            0 if !sites.is_empty() => return MoveStep::Delete(sites[rng.gen_range(0..sites.len())].clone()),
            1 if can_grow1 => {
                let orientation = if rng.gen() { KinkOrientation::TailFirst } else { KinkOrientation::HeadFirst };
                return MoveStep::InsertR1 { slot: rng.gen_range(0..=d.len()), orientation };
            }
            2 if can_grow2 => {
                let variant = if rng.gen() { R2Variant::Nested } else { R2Variant::Crossing };
                return MoveStep::InsertR2 {
                    slots: (rng.gen_range(0..=d.len()), rng.gen_range(0..=d.len())),
                    variant,
                    flip: rng.gen(),
                };
            }
            _ if sites.is_empty() && !can_grow1 => {
                // Nothing applies; an R1 insertion-deletion pair is the only
                // move left, so report a no-op as a kink at slot 0.
                return MoveStep::InsertR1 { slot: 0, orientation: KinkOrientation::TailFirst };
            }
            _ => {}
        }
    }
}

/// Applies `steps` random moves starting from `d`.
pub fn random_move_walk<R: Rng>(
    rng: &mut R,
    d: &ArrowDiagram,
    steps: usize,
    max_chords: usize,
) -> (ArrowDiagram, MoveTrace) {
    let mut cur = d.clone();
    let mut trace = MoveTrace::default();
    for _ in 0..steps {
        let step = random_move_step(rng, &cur, max_chords.max(cur.chords()));
        cur = apply_step(&cur, &step).expect("generated step is valid");
        trace.steps.push(step);
    }
    (cur, trace)
}

fn slot_after(d: &ArrowDiagram, arc: usize) -> usize {
    if d.is_empty() {
        0
    } else {
        arc + 1
    }
}

/// Pushes a finger from the strand under `d1` across the face on its left
/// and over the strand under `d2`, which bounds the same face.
fn finger_move(d: &ArrowDiagram, d1: Dart, d2: Dart) -> ArrowDiagram {
    let (x, y) = (d.chords(), d.chords() + 1);
    let mut ends = d.raw().clone();
    if d1 == d2 {
        // The finger doubles back over an earlier stretch of its own arc;
        // the pattern does not depend on the direction of travel.
        let slot = slot_after(d, d1.arc);
        let quad = [
            Endpoint::new(x, Role::Tail),
            Endpoint::new(y, Role::Head),
            Endpoint::new(y, Role::Tail),
            Endpoint::new(x, Role::Head),
        ];
        ends.splice(slot..slot, quad);
        return ArrowDiagram::from_valid(ends);
    }
    assert_ne!(d1.arc, d2.arc, "an arc cannot bound the same face on both sides");
    let same = d1.forward == d2.forward;
    let (rx, ry) = if same { (Role::Tail, Role::Head) } else { (Role::Head, Role::Tail) };
    let on1 = if d1.forward {
        [Endpoint::new(x, rx), Endpoint::new(y, ry)]
    } else {
        [Endpoint::new(y, ry), Endpoint::new(x, rx)]
    };
    let on2 = if d2.forward {
        [Endpoint::new(y, rx), Endpoint::new(x, ry)]
    } else {
        [Endpoint::new(x, ry), Endpoint::new(y, rx)]
    };
    let (s1, s2) = (slot_after(d, d1.arc), slot_after(d, d2.arc));
    if s1 > s2 {
        ends.splice(s1..s1, on1);
        ends.splice(s2..s2, on2);
    } else {
        ends.splice(s2..s2, on2);
        ends.splice(s1..s1, on1);
    }
    ArrowDiagram::from_valid(ends)
}

/// One crossing-increasing move that a real curve can perform: a kink on any
/// arc, or a finger pushed across a face.
pub fn geometric_insert<R: Rng>(rng: &mut R, d: &ArrowDiagram) -> ArrowDiagram {
    if rng.gen_bool(0.3) {
        let orientation = if rng.gen() { KinkOrientation::TailFirst } else { KinkOrientation::HeadFirst };
        let slot = if d.is_empty() { 0 } else { rng.gen_range(0..d.len()) + 1 };
        return apply_r1_insert(d, slot, orientation).expect("slot in range");
    }
    let faces = rotation_system(d).faces();
    let face = &faces[rng.gen_range(0..faces.len())];
    let d1 = face[rng.gen_range(0..face.len())];
    let d2 = face[rng.gen_range(0..face.len())];
    finger_move(d, d1, d2)
}

/// Random diagram of a curve built by `insertions` geometric insertions from
/// the circle.
pub fn random_realizable<R: Rng>(rng: &mut R, insertions: usize) -> ArrowDiagram {
    (0..insertions).fold(ArrowDiagram::empty(), |d, _| geometric_insert(rng, &d))
}

/// Walk mixing geometric insertions with deleting moves.
pub fn random_geometric_walk<R: Rng>(rng: &mut R, d: &ArrowDiagram, steps: usize, max_chords: usize) -> ArrowDiagram {
    let mut cur = d.clone();
    for _ in 0..steps {
        let sites = find_sites(&cur);
        let grow = cur.chords() + 2 <= max_chords && (sites.is_empty() || rng.gen_bool(0.5));
        if grow {
            cur = geometric_insert(rng, &cur);
        } else if !sites.is_empty() {
            cur = apply_delete(&cur, &sites[rng.gen_range(0..sites.len())]).expect("fresh site");
        }
    }
    cur
}

/// Random R2 insertion at arbitrary slots, used to exercise the abstract move.
pub fn random_r2_insert<R: Rng>(rng: &mut R, d: &ArrowDiagram) -> ArrowDiagram {
    let variant = if rng.gen() { R2Variant::Nested } else { R2Variant::Crossing };
    apply_r2_insert(d, rng.gen_range(0..=d.len()), rng.gen_range(0..=d.len()), variant, rng.gen())
        .expect("slots in range")
}

/// Random quiver diagram with labels up to `max_label` per endpoint.
pub fn random_quiver<R: Rng>(rng: &mut R, chords: usize, max_label: u32) -> QuiverDiagram {
    let d = random_arrow_diagram(rng, chords);
    let ids: Vec<usize> = d.endpoints().iter().map(|e| e.chord).collect();
    loop {
        let labels: Vec<u32> = ids.iter().map(|_| rng.gen_range(0..=max_label)).collect();
        if let Ok(q) = QuiverDiagram::new(ids.clone(), labels) {
            return q;
        }
    }
}
