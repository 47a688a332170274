//! Normal forms in the truncated quiver algebra.
//!
//! Each reduced chord diagram `C` without isolated chords gets a fixed
//! marking, one endpoint per chord. A quiver diagram over `C` is rewritten
//! chord by chord with `D(p, q) = -D(p+1, q-1) - D(p+1, q)` (unmarked label
//! `p`, marked label `q`) until every marked label is zero.
//!
//! When `C` has rotational symmetry the same quiver diagram can be read in
//! several frames, and the marked-zero labellings are no longer independent:
//! reading a labelling in a rotated frame and rewriting it gives a relation.
//! Those relations are row-reduced once per `(C, n, field)` and applied after
//! rewriting, so that every class has exactly one normal form.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, LazyLock};

use dashmap::DashMap;
use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::{AlgebraElement, BasisKey, Coeff, Field, KeyChord};
use crate::error::{DiagramError, Result};
use crate::quiver::{partners, renumber, rotate, QuiverDiagram};

/// Marking and symmetry data of a canonical reduced chord diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    seq: Vec<u8>,
    partner: Vec<usize>,
    /// Marked position of each chord.
    marked: Vec<usize>,
    /// Least positive rotation mapping the diagram to itself.
    period: usize,
}

impl Frame {
    /// `seq` must be a canonical chord sequence.
    pub fn new(seq: &[u8]) -> Frame {
        let n = seq.len();
        let partner = partners(seq);
        let period = (1..n).find(|&r| n.is_multiple_of(r) && renumber(&rotate(seq, r)) == seq).unwrap_or(n.max(1));
        let chords = n / 2;
        let mut marked: Vec<Option<usize>> = vec![None; chords];
        for x in 0..n {
            if marked[seq[x] as usize].is_some() {
                continue;
            }
            let orbit: Vec<usize> = (0..n / period).map(|j| (x + j * period) % n).collect();
            if orbit.contains(&partner[x]) {
                // A half-turn flips these chords; no invariant choice exists.
                for &y in &orbit {
                    let c = seq[y] as usize;
                    if marked[c].is_none() {
                        marked[c] = Some(y.min(partner[y]));
                    }
                }
            } else {
                for &y in &orbit {
                    marked[seq[y] as usize] = Some(y);
                }
            }
        }
        Frame { seq: seq.to_vec(), partner, marked: marked.into_iter().map(Option::unwrap).collect(), period }
    }

    /// A frame with the given marked position for each chord.
    pub fn with_marks(seq: &[u8], marked: Vec<usize>) -> Frame {
        let base = Frame::new(seq);
        Frame { marked, ..base }
    }

    pub fn chord_sequence(&self) -> &[u8] {
        &self.seq
    }

    pub fn chords(&self) -> usize {
        self.seq.len() / 2
    }

    pub fn marked(&self, chord: usize) -> usize {
        self.marked[chord]
    }

    pub fn unmarked(&self, chord: usize) -> usize {
        self.partner[self.marked[chord]]
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn is_symmetric(&self) -> bool {
        self.period < self.seq.len()
    }

    /// Rotations (multiples of the period) that map the diagram to itself.
    pub fn symmetries(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.seq.len().max(1) / self.period).map(|j| j * self.period)
    }

    pub fn key(&self, unmarked_labels: &[u32]) -> BasisKey {
        BasisKey::new(
            (0..self.chords())
                .map(|c| KeyChord {
                    marked: self.marked(c) as u8,
                    unmarked: self.unmarked(c) as u8,
                    label: unmarked_labels[c],
                })
                .collect(),
        )
    }

    /// Rewrites position labels read in this frame into marked-zero
    /// labellings (unmarked label per chord) of degree at most `n`.
    pub fn rewrite_raw(&self, labels: &[u32], n: u32) -> Vec<(Vec<u32>, BigInt)> {
        let mut acc: Vec<(Vec<u32>, u32, BigInt)> = vec![(Vec::new(), 0, BigInt::one())];
        let total: u32 = labels.iter().sum();
        let mut floor: u32 = total;
        for c in 0..self.chords() {
            let p = labels[self.unmarked(c)];
            let q = labels[self.marked(c)];
            // The other chords keep at least their current degree.
            floor -= p + q;
            let exp = chord_expansion(p, q, n);
            let mut next = Vec::new();
            for (prefix, deg, coef) in &acc {
                for &(j, ref e) in exp.iter() {
                    if deg + j + floor > n {
                        break;
                    }
                    let mut v = prefix.clone();
                    v.push(j);
                    next.push((v, deg + j, coef * e));
                }
            }
            acc = next;
        }
        acc.into_iter().map(|(v, _, c)| (v, c)).collect()
    }

    /// All marked-zero labellings with degree at most `n`.
    pub fn labellings(&self, n: u32) -> Vec<Vec<u32>> {
        let k = self.chords();
        let mut out = Vec::new();
        let mut cur = vec![1u32; k];
        if (k as u32) > n {
            return out;
        }
        fn rec(i: usize, budget: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if i == cur.len() {
                out.push(cur.clone());
                return;
            }
            for extra in 0..=budget {
                cur[i] = 1 + extra;
                rec(i + 1, budget - extra, cur, out);
            }
            cur[i] = 1;
        }
        rec(0, n - k as u32, &mut cur, &mut out);
        out
    }
}

/// Process-wide memo table shared by all workers.
type Memo<K, V> = LazyLock<DashMap<K, Arc<V>>>;

static EXPANSIONS: Memo<(u32, u32, u32), Vec<(u32, BigInt)>> = LazyLock::new(DashMap::new);
static FRAMES: Memo<Vec<u8>, Frame> = LazyLock::new(DashMap::new);
static REDUCERS: Memo<(Vec<u8>, u32, Field), Reducer> = LazyLock::new(DashMap::new);
/// Chord sequence, marked positions, truncation and field.
type AdaptedKey = (Vec<u8>, Vec<usize>, u32, Field);

static ADAPTED: Memo<AdaptedKey, (Frame, Reducer)> = LazyLock::new(DashMap::new);
static NORMAL_FORMS: Memo<(QuiverDiagram, u32, Field), Vec<(BasisKey, Coeff)>> = LazyLock::new(DashMap::new);

/// Expansion of one chord with unmarked label `p` and marked label `q` into
/// marked-zero chords `D(j, 0)`, as `(j, coefficient)` pairs sorted by `j`,
/// keeping `j <= max`.
pub fn chord_expansion(p: u32, q: u32, max: u32) -> Arc<Vec<(u32, BigInt)>> {
    if let Some(e) = EXPANSIONS.get(&(p, q, max)) {
        return e.clone();
    }
    let value = if p + q > max {
        Vec::new()
    } else if q == 0 {
        vec![(p, BigInt::one())]
    } else {
        let mut acc: BTreeMap<u32, BigInt> = BTreeMap::new();
        for part in [chord_expansion(p + 1, q - 1, max), chord_expansion(p + 1, q, max)] {
            for (j, c) in part.iter() {
                *acc.entry(*j).or_insert_with(BigInt::zero) -= c;
            }
        }
        acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    };
    let value = Arc::new(value);
    EXPANSIONS.insert((p, q, max), value.clone());
    value
}

pub fn frame(seq: &[u8]) -> Arc<Frame> {
    if let Some(f) = FRAMES.get(seq) {
        return f.clone();
    }
    FRAMES.entry(seq.to_vec()).or_insert_with(|| Arc::new(Frame::new(seq))).clone()
}

/// Row-reduced symmetry relations for one `(C, n, field)`.
#[derive(Debug)]
struct Reducer {
    /// Pivot labelling and the combination of surviving labellings it equals.
    replace: HashMap<Vec<u32>, Vec<(Vec<u32>, Coeff)>>,
}

impl Reducer {
    fn build(fr: &Frame, n: u32, field: Field) -> Reducer {
        let mut replace = HashMap::new();
        if !fr.is_symmetric() {
            return Reducer { replace };
        }
        let keys = fr.labellings(n);
        // Elimination order: lower degree first, and within a degree the
        // lexicographically larger labelling first, so that low-degree keys
        // and orbit minima survive.
        let mut order: Vec<&Vec<u32>> = keys.iter().collect();
        order.sort_by(|a, b| {
            let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
            da.cmp(&db).then_with(|| b.cmp(a))
        });
        let index: HashMap<&Vec<u32>, usize> = order.iter().enumerate().map(|(i, k)| (*k, i)).collect();
        let n_pos = fr.seq.len();
        let mut pivots: BTreeMap<usize, BTreeMap<usize, Coeff>> = BTreeMap::new();
        for key in &keys {
            let mut labels = vec![0u32; n_pos];
            for (c, &m) in key.iter().enumerate() {
                labels[fr.unmarked(c)] = m;
            }
            let mut row: BTreeMap<usize, Coeff> = BTreeMap::new();
            let rotated = rotate(&labels, n_pos - fr.period);
            for (v, c) in fr.rewrite_raw(&rotated, n) {
                add_entry(&mut row, index[&v], Coeff::from_integer(c), field);
            }
            add_entry(&mut row, index[key], -Coeff::one(), field);
            insert_row(&mut pivots, row, field);
        }
        back_substitute(&mut pivots, field);
        for (p, row) in pivots {
            let value: Vec<(Vec<u32>, Coeff)> = row
                .into_iter()
                .filter(|(i, _)| *i != p)
                .map(|(i, c)| (order[i].clone(), field.reduce(-c)))
                .filter(|(_, c)| !c.is_zero())
                .collect();
            replace.insert(order[p].clone(), value);
        }
        Reducer { replace }
    }
}

fn add_entry(row: &mut BTreeMap<usize, Coeff>, i: usize, c: Coeff, field: Field) {
    let v = field.reduce(row.get(&i).cloned().unwrap_or_else(Coeff::zero) + c);
    if v.is_zero() {
        row.remove(&i);
    } else {
        row.insert(i, v);
    }
}

fn eliminate(row: &mut BTreeMap<usize, Coeff>, pivot: usize, prow: &BTreeMap<usize, Coeff>, field: Field) {
    let Some(f) = row.get(&pivot).cloned() else {
        return;
    };
    for (j, c) in prow {
        add_entry(row, *j, -(&f * c), field);
    }
}

fn insert_row(pivots: &mut BTreeMap<usize, BTreeMap<usize, Coeff>>, mut row: BTreeMap<usize, Coeff>, field: Field) {
    loop {
        let hit = row.keys().find(|i| pivots.contains_key(i)).copied();
        match hit {
            Some(p) => eliminate(&mut row, p, &pivots[&p], field),
            None => break,
        }
    }
    if let Some((&p, lead)) = row.iter().next() {
        let inv = Coeff::one() / lead;
        let row: BTreeMap<usize, Coeff> = row.iter().map(|(i, c)| (*i, field.reduce(c * &inv))).collect();
        pivots.insert(p, row);
    }
}

fn back_substitute(pivots: &mut BTreeMap<usize, BTreeMap<usize, Coeff>>, field: Field) {
    let keys: Vec<usize> = pivots.keys().rev().copied().collect();
    for p in keys {
        let mut row = pivots.remove(&p).unwrap();
        loop {
            let hit = row.keys().find(|i| **i != p && pivots.contains_key(i)).copied();
            match hit {
                Some(q) => eliminate(&mut row, q, &pivots[&q], field),
                None => break,
            }
        }
        pivots.insert(p, row);
    }
}

fn reducer(seq: &[u8], n: u32, field: Field) -> Arc<Reducer> {
    let key = (seq.to_vec(), n, field);
    if let Some(r) = REDUCERS.get(&key) {
        return r.clone();
    }
    let fr = frame(seq);
    REDUCERS.entry(key).or_insert_with(|| Arc::new(Reducer::build(&fr, n, field))).clone()
}

/// Marked-zero labellings that survive as basis elements of the part of the
/// truncated algebra over `seq`.
pub fn basis_keys(seq: &[u8], n: u32, field: Field) -> Vec<BasisKey> {
    let fr = frame(seq);
    let red = reducer(seq, n, field);
    fr.labellings(n).into_iter().filter(|l| !red.replace.contains_key(l)).map(|l| fr.key(&l)).collect()
}

/// Normal form of a canonical, reduced quiver diagram without isolated chords.
fn normal_form(q: &QuiverDiagram, n: u32, field: Field) -> Arc<Vec<(BasisKey, Coeff)>> {
    let cache_key = (q.clone(), n, field);
    if let Some(v) = NORMAL_FORMS.get(&cache_key) {
        return v.clone();
    }
    let seq = q.chord_ids();
    let fr = frame(seq);
    let red = reducer(seq, n, field);
    let mut acc: BTreeMap<Vec<u32>, Coeff> = BTreeMap::new();
    for (v, c) in fr.rewrite_raw(q.labels(), n) {
        let c = Coeff::from_integer(c);
        match red.replace.get(&v) {
            Some(expr) => {
                for (w, d) in expr {
                    *acc.entry(w.clone()).or_insert_with(Coeff::zero) += &c * d;
                }
            }
            None => *acc.entry(v).or_insert_with(Coeff::zero) += c,
        }
    }
    let out: Vec<(BasisKey, Coeff)> =
        acc.into_iter().map(|(v, c)| (fr.key(&v), field.reduce(c))).filter(|(_, c)| !c.is_zero()).collect();
    let out = Arc::new(out);
    NORMAL_FORMS.insert(cache_key, out.clone());
    out
}

/// The class of `q` in the algebra truncated above degree `n`.
pub fn rewrite_to_basis(q: &QuiverDiagram, n: u32, field: Field) -> Result<AlgebraElement> {
    if !q.is_reduced() {
        return Err(DiagramError::NotReduced);
    }
    if q.has_isolated_chord() {
        return Err(DiagramError::IsolatedChord);
    }
    let mut out = AlgebraElement::zero(n, field);
    add_class(&mut out, &q.canonical_form(), &BigInt::one());
    Ok(out)
}

/// Adds `count` times the class of a canonical reduced diagram without
/// isolated chords.
pub(crate) fn add_class(out: &mut AlgebraElement, q: &QuiverDiagram, count: &BigInt) {
    let n = out.truncation();
    if q.degree() > n {
        return;
    }
    if q.is_empty() {
        out.add_term(BasisKey::empty(), Coeff::from_integer(count.clone()));
        return;
    }
    let c = Coeff::from_integer(count.clone());
    for (k, v) in normal_form(q, n, out.field()).iter() {
        out.add_term(k.clone(), v * &c);
    }
}

/// Coordinate of `target` in a basis that contains it, marked at the
/// zero-labelled endpoint of each target chord, evaluated on the canonical
/// reduced diagram `q`.
///
/// Symmetry relations are row-reduced in that frame; if `target` is not a
/// surviving labelling it replaces the leading survivor of its normal form,
/// which keeps the coordinate exact. A target that vanishes in the algebra
/// has no coordinate and yields zero.
pub fn adapted_coordinate(q: &QuiverDiagram, target: &QuiverDiagram, n: u32, field: Field) -> Result<Coeff> {
    let target = target.canonical_form();
    let tseq = target.chord_ids();
    let tpart = partners(tseq);
    let mut marks = vec![0usize; target.chords()];
    for (c, mark) in marks.iter_mut().enumerate() {
        let zeros: Vec<usize> = (0..tseq.len()).filter(|&i| tseq[i] as usize == c && target.label_at(i) == 0).collect();
        if zeros.len() != 1 || target.label_at(tpart[zeros[0]]) == 0 {
            return Err(DiagramError::Parse(format!("target `{target}` needs exactly one zero label per chord")));
        }
        *mark = zeros[0];
    }
    if q.chord_ids() != tseq || target.degree() > n {
        return Ok(Coeff::zero());
    }
    let key = (tseq.to_vec(), marks.clone(), n, field);
    let adapted = match ADAPTED.get(&key) {
        Some(a) => a.clone(),
        None => {
            let fr = Frame::with_marks(tseq, marks);
            let red = Reducer::build(&fr, n, field);
            ADAPTED.entry(key).or_insert_with(|| Arc::new((fr, red))).clone()
        }
    };
    let (fr, red) = (&adapted.0, &adapted.1);
    let reduced = |labels: &[u32]| -> BTreeMap<Vec<u32>, Coeff> {
        let mut acc: BTreeMap<Vec<u32>, Coeff> = BTreeMap::new();
        for (v, c) in fr.rewrite_raw(labels, n) {
            let c = Coeff::from_integer(c);
            match red.replace.get(&v) {
                Some(expr) => {
                    for (w, d) in expr {
                        *acc.entry(w.clone()).or_insert_with(Coeff::zero) += &c * d;
                    }
                }
                None => *acc.entry(v).or_insert_with(Coeff::zero) += c,
            }
        }
        acc.into_iter().map(|(v, c)| (v, field.reduce(c))).filter(|(_, c)| !c.is_zero()).collect()
    };
    let own = reduced(target.labels());
    let lead = own.iter().min_by_key(|(v, _)| (v.iter().sum::<u32>(), (*v).clone()));
    let Some((lead, scale)) = lead else {
        return Ok(Coeff::zero());
    };
    let value = reduced(q.labels()).remove(lead).unwrap_or_else(Coeff::zero);
    Ok(field.reduce(value / scale))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> QuiverDiagram {
        QuiverDiagram::parse(s).unwrap()
    }

    #[test]
    fn expansion_matches_series() {
        // D(1,1) = -D(2,0) + D(3,0) - ...
        let e = chord_expansion(1, 1, 3);
        assert_eq!(*e, vec![(2, BigInt::from(-1)), (3, BigInt::from(1))]);
        assert!(chord_expansion(3, 2, 4).is_empty());
        assert_eq!(*chord_expansion(2, 0, 5), vec![(2, BigInt::one())]);
    }

    #[test]
    fn frame_of_asymmetric_diagram() {
        let c4 = q("1:0 2:1 1:1 3:0 2:0 4:1 3:1 4:0").canonical_form();
        let fr = Frame::new(c4.chord_ids());
        for c in 0..4 {
            assert!(fr.marked(c) < fr.unmarked(c));
        }
    }

    #[test]
    fn basis_form_is_identity() {
        let c4 = q("1:0 2:0 1:1 3:0 2:1 4:0 3:1 4:1").canonical_form();
        let fr = frame(c4.chord_ids());
        if !fr.is_symmetric() {
            let e = rewrite_to_basis(&c4, 4, Field::Rational).unwrap();
            assert!(e.len() <= 1);
        }
    }

    #[test]
    fn preconditions() {
        assert_eq!(rewrite_to_basis(&q("1:1 2:1 1:1 2:1"), 3, Field::Rational), Err(DiagramError::NotReduced));
        assert_eq!(rewrite_to_basis(&q("1:1 1:1"), 3, Field::Rational), Err(DiagramError::IsolatedChord));
        let e = rewrite_to_basis(&QuiverDiagram::empty(), 0, Field::Gf2).unwrap();
        assert_eq!(e, AlgebraElement::one(0, Field::Gf2));
    }
}
