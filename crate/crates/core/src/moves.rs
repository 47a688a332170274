//! The diagram moves R1 (isolated chord) and R2 (adjacent pair with one tail
//! and one head at each adjacency site), minimization and equivalence.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::diagram::{ArrowDiagram, Endpoint, Role};
use crate::error::{DiagramError, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MoveSite {
    R1 {
        chord: usize,
    },
    /// `sites[i]` is a pair of cyclically adjacent positions holding one
    /// endpoint of each chord.
    R2 {
        chords: (usize, usize),
        sites: [(usize, usize); 2],
    },
}

impl MoveSite {
    fn first_position(&self, d: &ArrowDiagram) -> usize {
        match self {
            MoveSite::R1 { chord } => {
                let [t, h] = d.chord_positions()[*chord];
                t.min(h)
            }
            MoveSite::R2 { sites, .. } => sites[0].0.min(sites[0].1).min(sites[1].0).min(sites[1].1),
        }
    }

    fn chords(&self) -> Vec<usize> {
        match self {
            MoveSite::R1 { chord } => vec![*chord],
            MoveSite::R2 { chords, .. } => vec![chords.0, chords.1],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KinkOrientation {
    TailFirst,
    HeadFirst,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum R2Variant {
    /// `X Y ... Y X`: the strands run in opposite directions.
    Nested,
    /// `X Y ... X Y`: the strands run in the same direction.
    Crossing,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MoveStep {
    Delete(MoveSite),
    InsertR1 { slot: usize, orientation: KinkOrientation },
    InsertR2 { slots: (usize, usize), variant: R2Variant, flip: bool },
}

/// Moves applied in order; positions refer to the diagram at each step.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveTrace {
    pub steps: Vec<MoveStep>,
}

impl MoveTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn replay(&self, source: &ArrowDiagram) -> Result<ArrowDiagram> {
        self.steps.iter().try_fold(source.clone(), |d, step| apply_step(&d, step))
    }
}

pub fn apply_step(d: &ArrowDiagram, step: &MoveStep) -> Result<ArrowDiagram> {
    match step {
        MoveStep::Delete(site) => apply_delete(d, site),
        MoveStep::InsertR1 { slot, orientation } => apply_r1_insert(d, *slot, *orientation),
        MoveStep::InsertR2 { slots, variant, flip } => apply_r2_insert(d, slots.0, slots.1, *variant, *flip),
    }
}

fn adjacent(a: usize, b: usize, n: usize) -> bool {
    n > 1 && ((a + 1) % n == b || (b + 1) % n == a)
}

pub fn find_r1_sites(d: &ArrowDiagram) -> Vec<MoveSite> {
    let n = d.len();
    d.chord_positions()
        .iter()
        .enumerate()
        .filter(|(_, [t, h])| adjacent(*t, *h, n))
        .map(|(chord, _)| MoveSite::R1 { chord })
        .collect()
}

/// R2 site on chords `a`, `b`, if their endpoints pair up into two adjacent
/// sites each holding one tail and one head.
fn r2_site(d: &ArrowDiagram, pos: &[[usize; 2]], a: usize, b: usize) -> Option<MoveSite> {
    let n = d.len();
    let ok = |x: usize, y: usize| adjacent(x, y, n) && d.endpoint(x).role != d.endpoint(y).role;
    let [at, ah] = pos[a];
    let [bt, bh] = pos[b];
    // A tail of `a` must sit next to a head of `b` and vice versa.
    if ok(at, bh) && ok(ah, bt) {
        let s0 = (at.min(bh), at.max(bh));
        let s1 = (ah.min(bt), ah.max(bt));
        return Some(MoveSite::R2 { chords: (a, b), sites: [s0.min(s1), s0.max(s1)] });
    }
    None
}

pub fn find_r2_sites(d: &ArrowDiagram) -> Vec<MoveSite> {
    let pos = d.chord_positions();
    let k = d.chords();
    let mut out = Vec::new();
    for a in 0..k {
        for b in a + 1..k {
            if let Some(s) = r2_site(d, &pos, a, b) {
                out.push(s);
            }
        }
    }
    out
}

pub fn find_sites(d: &ArrowDiagram) -> Vec<MoveSite> {
    let mut all = find_r1_sites(d);
    all.extend(find_r2_sites(d));
    all
}

fn site_is_valid(d: &ArrowDiagram, s: &MoveSite) -> bool {
    let pos = d.chord_positions();
    match s {
        MoveSite::R1 { chord } => *chord < d.chords() && adjacent(pos[*chord][0], pos[*chord][1], d.len()),
        MoveSite::R2 { chords: (a, b), .. } => {
            *a < d.chords() && *b < d.chords() && a != b && {
                let (x, y) = ((*a).min(*b), (*a).max(*b));
                r2_site(d, &pos, x, y).is_some_and(|found| found_matches(&found, s))
            }
        }
    }
}

fn found_matches(found: &MoveSite, given: &MoveSite) -> bool {
    match (found, given) {
        (MoveSite::R2 { sites: f, .. }, MoveSite::R2 { sites: g, .. }) => f == g,
        _ => false,
    }
}

pub fn apply_delete(d: &ArrowDiagram, site: &MoveSite) -> Result<ArrowDiagram> {
    if !site_is_valid(d, site) {
        return Err(DiagramError::StaleSite);
    }
    Ok(d.without_chords(&site.chords()))
}

pub fn apply_r1_insert(d: &ArrowDiagram, slot: usize, orientation: KinkOrientation) -> Result<ArrowDiagram> {
    if slot > d.len() {
        return Err(DiagramError::OutOfRange { index: slot, len: d.len() });
    }
    let c = d.chords();
    let pair = match orientation {
        KinkOrientation::TailFirst => [Endpoint::new(c, Role::Tail), Endpoint::new(c, Role::Head)],
        KinkOrientation::HeadFirst => [Endpoint::new(c, Role::Head), Endpoint::new(c, Role::Tail)],
    };
    let mut ends = d.raw().clone();
    ends.splice(slot..slot, pair);
    Ok(ArrowDiagram::from_valid(ends))
}

/// Inserts chords X and Y: `(X, Y)` at `slot1` and `(Y, X)` (nested) or
/// `(X, Y)` (crossing) at `slot2`. X has its tail at `slot1` unless `flip`.
/// Equal slots put the `slot1` pair first.
pub fn apply_r2_insert(
    d: &ArrowDiagram,
    slot1: usize,
    slot2: usize,
    variant: R2Variant,
    flip: bool,
) -> Result<ArrowDiagram> {
    for s in [slot1, slot2] {
        if s > d.len() {
            return Err(DiagramError::OutOfRange { index: s, len: d.len() });
        }
    }
    let (x, y) = (d.chords(), d.chords() + 1);
    let (r1, r2) = if flip { (Role::Head, Role::Tail) } else { (Role::Tail, Role::Head) };
    let first = [Endpoint::new(x, r1), Endpoint::new(y, r2)];
    let second = match variant {
        R2Variant::Nested => [Endpoint::new(y, r1), Endpoint::new(x, r2)],
        R2Variant::Crossing => [Endpoint::new(x, r2), Endpoint::new(y, r1)],
    };
    let mut ends = d.raw().clone();
    if slot1 == slot2 {
        ends.splice(slot1..slot1, first.into_iter().chain(second));
    } else if slot1 < slot2 {
        ends.splice(slot2..slot2, second);
        ends.splice(slot1..slot1, first);
    } else {
        ends.splice(slot1..slot1, first);
        ends.splice(slot2..slot2, second);
    }
    Ok(ArrowDiagram::from_valid(ends))
}

/// Applies deleting moves until none is left, always taking the site with the
/// smallest position. Returns the canonical minimal form and the trace
/// relative to `d` as given.
pub fn minimize(d: &ArrowDiagram) -> (ArrowDiagram, MoveTrace) {
    minimize_by(d, |cur, sites| (0..sites.len()).min_by_key(|&i| (sites[i].first_position(cur), i)).unwrap())
}

/// Minimization choosing uniformly among the available deleting moves.
pub fn minimize_random<R: Rng>(d: &ArrowDiagram, rng: &mut R) -> (ArrowDiagram, MoveTrace) {
    minimize_by(d, |_, sites| rng.gen_range(0..sites.len()))
}

pub fn minimize_by<F>(d: &ArrowDiagram, mut choose: F) -> (ArrowDiagram, MoveTrace)
where
    F: FnMut(&ArrowDiagram, &[MoveSite]) -> usize,
{
    let mut cur = d.clone();
    let mut trace = MoveTrace::default();
    loop {
        let sites = find_sites(&cur);
        if sites.is_empty() {
            break;
        }
        let site = sites[choose(&cur, &sites)].clone();
        cur = apply_delete(&cur, &site).expect("freshly found site");
        trace.steps.push(MoveStep::Delete(site));
    }
    (cur.canonical_form(), trace)
}

pub fn is_minimal(d: &ArrowDiagram) -> bool {
    find_sites(d).is_empty()
}

pub fn equivalent(a: &ArrowDiagram, b: &ArrowDiagram) -> bool {
    let (ma, _) = minimize(a);
    let (mb, _) = minimize(b);
    ma.raw() == mb.raw()
}
