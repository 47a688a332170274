//! Independent reference implementations used by the integration tests.
//!
//! Nothing here calls into the library's canonical forms, realizability test
//! or normal forms; results are compared against the library afterwards.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use doodle_core::{ArrowDiagram, Role};

/// Endpoint tokens: (chord, is_head).
pub type Tokens = Vec<(usize, bool)>;

pub fn tokens(d: &ArrowDiagram) -> Tokens {
    d.endpoints().iter().map(|e| (e.chord, e.role == Role::Head)).collect()
}

fn relabel(t: &[(usize, bool)]) -> Tokens {
    let mut map = BTreeMap::new();
    t.iter()
        .map(|&(c, h)| {
            let next = map.len();
            (*map.entry(c).or_insert(next), h)
        })
        .collect()
}

/// Rotation-class key: the least relabelled rotation, written out.
pub fn class_key(t: &[(usize, bool)]) -> String {
    let n = t.len();
    let best = (0..n.max(1))
        .map(|r| {
            let rot: Vec<(usize, bool)> = t.iter().cycle().skip(r).take(n).copied().collect();
            relabel(&rot)
        })
        .min()
        .unwrap_or_default();
    best.iter().map(|&(c, h)| format!("{}{}", c + 1, if h { 'h' } else { 't' })).collect::<Vec<_>>().join(" ")
}

pub fn diagram_key(d: &ArrowDiagram) -> String {
    class_key(&tokens(d))
}

fn permutations(items: &mut Vec<(usize, bool)>, k: usize, out: &mut BTreeSet<String>) {
    if k == items.len() {
        out.insert(class_key(items));
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, out);
        items.swap(k, i);
    }
}

/// Every ordering of the tokens `1t 1h ... kt kh`, deduplicated by rotation.
pub fn naive_classes(k: usize) -> BTreeSet<String> {
    let mut items: Vec<(usize, bool)> = (0..k).flat_map(|c| [(c, false), (c, true)]).collect();
    let mut out = BTreeSet::new();
    permutations(&mut items, 0, &mut out);
    out
}

/// Perfect matchings on `n` points, as the partner of each point.
fn plain_matchings(n: usize) -> Vec<Vec<usize>> {
    fn rec(p: &mut Vec<Option<usize>>, out: &mut Vec<Vec<usize>>) {
        match p.iter().position(Option::is_none) {
            None => out.push(p.iter().map(|x| x.unwrap()).collect()),
            Some(i) => {
                for j in i + 1..p.len() {
                    if p[j].is_none() {
                        p[i] = Some(j);
                        p[j] = Some(i);
                        rec(p, out);
                        p[i] = None;
                        p[j] = None;
                    }
                }
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut vec![None; n], &mut out);
    out
}

/// Directed matchings on `2k` points as (partner, is_head) per position.
fn directed_matchings(k: usize) -> Vec<Vec<(usize, bool)>> {
    let ms = plain_matchings(2 * k);
    let mut out = Vec::new();
    for m in ms {
        let openers: Vec<usize> = (0..2 * k).filter(|&i| m[i] > i).collect();
        for bits in 0..(1u32 << k) {
            let mut v: Vec<(usize, bool)> = m.iter().map(|&j| (j, false)).collect();
            for (b, &i) in openers.iter().enumerate() {
                let flip = bits >> b & 1 == 1;
                v[i].1 = flip;
                v[m[i]].1 = !flip;
            }
            out.push(v);
        }
    }
    out
}

/// Number of arrow diagrams with `k` chords up to rotation, by Burnside's
/// lemma over the cyclic group acting on directed matchings.
pub fn burnside_count(k: usize) -> usize {
    if k == 0 {
        return 1;
    }
    let n = 2 * k;
    let all = directed_matchings(k);
    let fixed: usize = (0..n)
        .map(|r| all.iter().filter(|m| (0..n).all(|i| m[(i + r) % n] == ((m[i].0 + r) % n, m[i].1))).count())
        .sum();
    assert_eq!(fixed % n, 0);
    fixed / n
}

type Pt = (i64, i64);

fn sub(a: Pt, b: Pt) -> Pt {
    (a.0 - b.0, a.1 - b.1)
}

fn cross(a: Pt, b: Pt) -> i64 {
    a.0 * b.1 - a.1 * b.0
}

/// Arrow diagram of a closed polygon, or `None` if it is not in general
/// position. The chord at a crossing points from the branch whose tangent
/// comes first in a positive basis.
pub fn polygon_diagram(pts: &[Pt]) -> Option<Tokens> {
    let n = pts.len();
    let seg = |i: usize| (pts[i], pts[(i + 1) % n]);
    // Per edge: (parameter as num/den with den > 0, chord, is_head).
    let mut on_edge: Vec<Vec<(i64, i64, usize, bool)>> = vec![Vec::new(); n];
    let mut chord = 0;
    for i in 0..n {
        let (a0, a1) = seg(i);
        if a0 == a1 {
            return None;
        }
        for j in i + 1..n {
            let (b0, b1) = seg(j);
            let (da, db) = (sub(a1, a0), sub(b1, b0));
            let w = sub(b0, a0);
            let den = cross(da, db);
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if den == 0 {
                if cross(w, da) == 0 {
                    return None; // collinear edges
                }
                continue;
            }
            let (mut tn, mut un, mut d) = (cross(w, db), cross(w, da), den);
            if d < 0 {
                tn = -tn;
                un = -un;
                d = -d;
            }
            if adjacent {
                if tn > 0 && tn < d && un > 0 && un < d {
                    return None;
                }
                continue;
            }
            if tn < 0 || tn > d || un < 0 || un > d {
                continue;
            }
            if tn == 0 || tn == d || un == 0 || un == d {
                return None; // through a vertex
            }
            let a_first = den > 0;
            on_edge[i].push((tn, d, chord, !a_first));
            on_edge[j].push((un, d, chord, a_first));
            chord += 1;
        }
    }
    let mut out = Vec::new();
    for mut list in on_edge {
        list.sort_by(|x, y| ((x.0 as i128) * (y.1 as i128)).cmp(&((y.0 as i128) * (x.1 as i128))));
        for w in list.windows(2) {
            if (w[0].0 as i128) * (w[1].1 as i128) == (w[1].0 as i128) * (w[0].1 as i128) {
                return None; // triple point
            }
        }
        out.extend(list.into_iter().map(|(_, _, c, h)| (c, h)));
    }
    Some(out)
}

/// Rotation classes of diagrams of random polygons with at most `max_k`
/// crossings, grouped by crossing count.
pub fn sampled_curve_classes<R: Rng>(rng: &mut R, max_k: usize, samples: usize) -> Vec<BTreeSet<String>> {
    let mut out = vec![BTreeSet::new(); max_k + 1];
    for _ in 0..samples {
        let v = rng.gen_range(3..=10);
        let pts: Vec<Pt> = (0..v).map(|_| (rng.gen_range(0..24), rng.gen_range(0..24))).collect();
        if let Some(t) = polygon_diagram(&pts) {
            let k = t.len() / 2;
            if k <= max_k {
                out[k].insert(class_key(&t));
            }
        }
    }
    out
}

pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < k || n < 0 {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// Coefficient of `D(j, 0)` in `D(p, q)`, in closed form.
pub fn expansion_closed_form(p: u32, q: u32, j: u32) -> BigInt {
    let (p, q, j) = (p as i64, q as i64, j as i64);
    if q == 0 {
        return if j == p { BigInt::one() } else { BigInt::zero() };
    }
    let sign = if (j - p) % 2 == 0 { 1 } else { -1 };
    binomial(j - p - 1, q - 1) * sign
}

/// Sparse row echelon form over Q or F2, for rank and membership tests.
pub struct Echelon {
    gf2: bool,
    pivots: BTreeMap<usize, BTreeMap<usize, BigRational>>,
}

impl Echelon {
    pub fn new(gf2: bool) -> Self {
        Echelon { gf2, pivots: BTreeMap::new() }
    }

    fn norm(&self, v: BigRational) -> BigRational {
        if self.gf2 {
            assert!(v.is_integer(), "F2 rows must be integral");
            let r = v.to_integer() % BigInt::from(2);
            BigRational::from_integer(r.abs())
        } else {
            v
        }
    }

    fn reduce(&self, mut row: BTreeMap<usize, BigRational>) -> BTreeMap<usize, BigRational> {
        row = row.into_iter().map(|(k, v)| (k, self.norm(v))).filter(|(_, v)| !v.is_zero()).collect();
        let mut floor = 0;
        loop {
            let next = row.range(floor..).map(|(k, _)| *k).find(|k| self.pivots.contains_key(k));
            let Some(p) = next else { return row };
            let f = row[&p].clone();
            for (k, v) in &self.pivots[&p] {
                let e = row.entry(*k).or_insert_with(BigRational::zero);
                *e = self.norm(&*e - &f * v);
            }
            row.retain(|_, v| !v.is_zero());
            floor = p + 1;
        }
    }

    /// Adds a row; returns whether it increased the rank.
    pub fn insert(&mut self, row: BTreeMap<usize, BigRational>) -> bool {
        let row = self.reduce(row);
        let Some((&p, lead)) = row.iter().next() else {
            return false;
        };
        let inv = BigRational::one() / lead;
        let row: BTreeMap<usize, BigRational> = row.iter().map(|(k, v)| (*k, self.norm(v * &inv))).collect();
        // Keep the pivot column clear in earlier rows so later reductions
        // only ever move to larger columns.
        for other in self.pivots.values_mut() {
            if let Some(f) = other.get(&p).cloned() {
                for (k, v) in &row {
                    let e = other.entry(*k).or_insert_with(BigRational::zero);
                    *e = if self.gf2 {
                        let t = &*e - &f * v;
                        BigRational::from_integer((t.to_integer() % BigInt::from(2)).abs())
                    } else {
                        &*e - &f * v
                    };
                }
                other.retain(|_, v| !v.is_zero());
            }
        }
        self.pivots.insert(p, row);
        true
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn contains(&self, row: BTreeMap<usize, BigRational>) -> bool {
        self.reduce(row).is_empty()
    }
}

/// The span of all labellings of one chord diagram modulo the chord relation
/// and rotation, truncated above degree `n`.
pub struct RelationOracle {
    pub seq: Vec<u8>,
    pub n: u32,
    pub columns: BTreeMap<Vec<u32>, usize>,
    pub relations: Echelon,
    symmetries: Vec<usize>,
}

fn renumber(seq: &[u8]) -> Vec<u8> {
    let mut map = BTreeMap::new();
    seq.iter()
        .map(|c| {
            let next = map.len() as u8;
            *map.entry(*c).or_insert(next)
        })
        .collect()
}

fn rot<T: Clone>(v: &[T], r: usize) -> Vec<T> {
    v.iter().cycle().skip(r).take(v.len()).cloned().collect()
}

/// Least renumbered rotation of a chord sequence.
pub fn canonical_sequence(seq: &[u8]) -> Vec<u8> {
    (0..seq.len()).map(|r| renumber(&rot(seq, r))).min().unwrap_or_default()
}

/// Chord diagrams with `k` chords, no isolated chord and no pair of chords
/// whose endpoints form two adjacent pairs, in canonical form.
pub fn reduced_chord_diagrams(k: usize) -> Vec<Vec<u8>> {
    let mut out = BTreeSet::new();
    let n = 2 * k;
    for p in plain_matchings(n) {
        let mut seq = vec![0u8; n];
        let mut c = 0;
        for i in 0..n {
            if p[i] > i {
                seq[i] = c;
                seq[p[i]] = c;
                c += 1;
            }
        }
        let isolated = (0..n).any(|i| p[i] == (i + 1) % n);
        let adjacent = (0..n).any(|i| {
            let j = (i + 1) % n;
            seq[i] != seq[j] && ((p[j] + 1) % n == p[i] || (p[i] + 1) % n == p[j])
        });
        if !isolated && !adjacent {
            out.insert(canonical_sequence(&seq));
        }
    }
    out.into_iter().collect()
}

impl RelationOracle {
    pub fn build(seq: &[u8], n: u32, gf2: bool) -> RelationOracle {
        let len = seq.len();
        let k = len / 2;
        let symmetries: Vec<usize> = (0..len).filter(|&r| renumber(&rot(seq, r)) == seq).collect();
        let ends: Vec<(usize, usize)> = (0..k)
            .map(|c| {
                let v: Vec<usize> = (0..len).filter(|&i| seq[i] as usize == c).collect();
                (v[0], v[1])
            })
            .collect();
        // All labellings of degree <= n, with chord sums >= `min_sum[c]`.
        let labellings = |allow_zero: Option<usize>| -> Vec<Vec<u32>> {
            let mut out = Vec::new();
            let mut cur = vec![0u32; len];
            fn rec(
                c: usize,
                budget: u32,
                ends: &[(usize, usize)],
                allow_zero: Option<usize>,
                cur: &mut Vec<u32>,
                out: &mut Vec<Vec<u32>>,
            ) {
                if c == ends.len() {
                    out.push(cur.clone());
                    return;
                }
                let (x, y) = ends[c];
                for a in 0..=budget {
                    for b in 0..=budget - a {
                        if a + b == 0 && allow_zero != Some(c) {
                            continue;
                        }
                        cur[x] = a;
                        cur[y] = b;
                        rec(c + 1, budget - a - b, ends, allow_zero, cur, out);
                    }
                }
                cur[x] = 0;
                cur[y] = 0;
            }
            rec(0, n, &ends, allow_zero, &mut cur, &mut out);
            out
        };
        let mut oracle =
            RelationOracle { seq: seq.to_vec(), n, columns: BTreeMap::new(), relations: Echelon::new(gf2), symmetries };
        for l in labellings(None) {
            let key = oracle.orbit_key(&l);
            let next = oracle.columns.len();
            oracle.columns.entry(key).or_insert(next);
        }
        for (c, &(x, y)) in ends.iter().enumerate() {
            for base in labellings(Some(c)) {
                let deg: u32 = base.iter().sum();
                let mut row = BTreeMap::new();
                for (dx, dy) in [(1, 0), (0, 1), (1, 1)] {
                    if deg + dx + dy > n {
                        continue;
                    }
                    let mut l = base.clone();
                    l[x] += dx;
                    l[y] += dy;
                    let col = oracle.columns[&oracle.orbit_key(&l)];
                    *row.entry(col).or_insert_with(BigRational::zero) += BigRational::one();
                }
                oracle.relations.insert(row);
            }
        }
        oracle
    }

    fn orbit_key(&self, labels: &[u32]) -> Vec<u32> {
        self.symmetries.iter().map(|&r| rot(labels, r)).min().unwrap()
    }

    pub fn dimension(&self) -> usize {
        self.columns.len() - self.relations.rank()
    }

    /// Whether `lhs` and the combination `rhs` agree modulo the relations.
    pub fn equal(&self, lhs: &[u32], rhs: &[(Vec<u32>, BigRational)]) -> bool {
        let mut row: BTreeMap<usize, BigRational> = BTreeMap::new();
        *row.entry(self.columns[&self.orbit_key(lhs)]).or_insert_with(BigRational::zero) += BigRational::one();
        for (l, c) in rhs {
            *row.entry(self.columns[&self.orbit_key(l)]).or_insert_with(BigRational::zero) -= c;
        }
        self.relations.contains(row)
    }

    /// A random valid labelling of degree at most `n`.
    pub fn random_labelling<R: Rng>(&self, rng: &mut R) -> Vec<u32> {
        let keys: Vec<&Vec<u32>> = self.columns.keys().collect();
        keys[rng.gen_range(0..keys.len())].clone()
    }
}

/// Labelled chord sequence of the subdiagram on `mask`: head endpoints carry
/// label one, tails zero.
pub fn labelled_subdiagram(t: &[(usize, bool)], mask: u64) -> (Vec<usize>, Vec<u32>) {
    t.iter().filter(|(c, _)| mask >> c & 1 == 1).map(|&(c, h)| (c, u32::from(h))).unzip()
}

/// Merges chord pairs with two adjacent endpoint pairs until none is left;
/// `None` if an isolated chord remains.
pub fn naive_reduce(mut chords: Vec<usize>, mut labels: Vec<u32>) -> Option<(Vec<usize>, Vec<u32>)> {
    'outer: loop {
        let n = chords.len();
        if n >= 2 && (0..n).any(|i| chords[i] == chords[(i + 1) % n]) {
            return None;
        }
        for i in 0..n {
            for j in 0..n {
                let (i2, j2) = ((i + 1) % n, (j + 1) % n);
                if [i, i2].contains(&j) || [i, i2].contains(&j2) || chords[i] == chords[i2] {
                    continue;
                }
                let (a, b) = (chords[i], chords[i2]);
                let same = chords[j] == a && chords[j2] == b;
                let swapped = chords[j] == b && chords[j2] == a;
                if !(same || swapped) {
                    continue;
                }
                // Fold chord b into chord a at both sites.
                let mut c2 = Vec::new();
                let mut l2 = Vec::new();
                for p in 0..n {
                    if p == i2 || p == j2 {
                        continue;
                    }
                    let extra = if p == i {
                        labels[i2]
                    } else if p == j {
                        labels[j2]
                    } else {
                        0
                    };
                    c2.push(if chords[p] == b { a } else { chords[p] });
                    l2.push(labels[p] + extra);
                }
                chords = c2;
                labels = l2;
                continue 'outer;
            }
        }
        return Some((chords, labels));
    }
}

/// Chords with an R1 site and chord pairs with an R2 site, found by scanning
/// all adjacent position pairs.
pub fn naive_sites(t: &[(usize, bool)]) -> (BTreeSet<usize>, BTreeSet<(usize, usize)>) {
    let n = t.len();
    let mut r1 = BTreeSet::new();
    let mut r2 = BTreeSet::new();
    for i in 0..n {
        let j = (i + 1) % n;
        if n >= 2 && t[i].0 == t[j].0 {
            r1.insert(t[i].0);
        }
    }
    let k = n / 2;
    for x in 0..k {
        for y in x + 1..k {
            // Adjacent position pairs holding one end of each chord, with
            // one tail and one head.
            let good: Vec<usize> = (0..n)
                .filter(|&i| {
                    let j = (i + 1) % n;
                    let (a, b) = (t[i], t[j]);
                    let chords_ok = (a.0 == x && b.0 == y) || (a.0 == y && b.0 == x);
                    chords_ok && a.1 != b.1
                })
                .collect();
            let disjoint = good.iter().any(|&i| {
                good.iter().any(|&j| {
                    let (i2, j2) = ((i + 1) % n, (j + 1) % n);
                    i != j && i != j2 && i2 != j && i2 != j2
                })
            });
            if disjoint {
                r2.insert((x, y));
            }
        }
    }
    (r1, r2)
}

/// Whether the rational and mod-2 truncated algebras over `seq` have the same
/// basis at every truncation up to `n`. Otherwise the integral relations have
/// 2-torsion and rational coordinates have no mod-2 reduction.
pub fn two_regular(seq: &[u8], n: u32) -> bool {
    use doodle_core::basis::basis_keys;
    use doodle_core::Field;
    (0..=n).all(|m| basis_keys(seq, m, Field::Rational) == basis_keys(seq, m, Field::Gf2))
}

/// Compares rational coordinates mod 2 with mod-2 coordinates on every
/// 2-regular chord diagram; returns the skipped chord diagrams, or the first
/// disagreeing key.
pub fn compare_mod2(
    q: &doodle_core::AlgebraElement,
    f: &doodle_core::AlgebraElement,
) -> Result<BTreeSet<Vec<u8>>, String> {
    let n = q.truncation();
    let mut keys: BTreeSet<_> = q.iter().map(|(k, _)| k.clone()).collect();
    keys.extend(f.iter().map(|(k, _)| k.clone()));
    let mut skipped = BTreeSet::new();
    for k in keys {
        let seq = k.chord_sequence();
        if !two_regular(&seq, n) {
            skipped.insert(seq);
            continue;
        }
        let c = q.coefficient(&k);
        if !c.is_integer() {
            return Err(format!("non-integral coefficient {c} at {k:?}"));
        }
        let parity = (c.to_integer() % BigInt::from(2)).abs();
        if BigRational::from_integer(parity) != f.coefficient(&k) {
            return Err(format!("parity differs at {k:?}"));
        }
    }
    Ok(skipped)
}
