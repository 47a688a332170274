//! Flat tangles near a singular point, their resolutions, and closed curves
//! with one planted singular point.
//!
//! Geometry is exact. The branches of a star are straight lines through the
//! origin; resolving moves the last remaining branch off the origin by a
//! symbolic infinitesimal, each step much smaller than the previous one.
//! Positions are therefore series `a0 + a1 e1 + a2 e2 + ...` with
//! `1 >> e1 >> e2 >> ...`, compared lexicographically.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::diagram::{ArrowDiagram, Endpoint, Role};
use crate::error::{DiagramError, Result};
use crate::invariant::subset_masks;

type Q = BigRational;

fn q(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

/// Exact value with infinitesimal corrections.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Series(Vec<Q>);

impl Series {
    fn constant(v: Q, levels: usize) -> Series {
        let mut s = vec![Q::zero(); levels + 1];
        s[0] = v;
        Series(s)
    }

    fn add(&self, o: &Series) -> Series {
        Series(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    fn scale(&self, c: &Q) -> Series {
        Series(self.0.iter().map(|a| a * c).collect())
    }
}

impl PartialOrd for Series {
    fn partial_cmp(&self, o: &Series) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Series {
    fn cmp(&self, o: &Series) -> Ordering {
        self.0.cmp(&o.0)
    }
}

type Vec2 = (i64, i64);

fn cross(a: Vec2, b: Vec2) -> i64 {
    a.0 * b.1 - a.1 * b.0
}

/// One point where `k >= 3` straight branches meet, in branch order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularSite {
    directions: Vec<Vec2>,
}

/// Branch directions with strictly increasing angle in `[0, pi)`.
const DIRECTIONS: [Vec2; 8] = [(1, 0), (1, 1), (0, 1), (-1, 1), (-2, 1), (-3, 1), (-4, 1), (-5, 1)];

/// The star `T_k`: branch `i` runs through the origin along the `i`-th fixed
/// direction.
pub fn star_tangle(k: usize) -> Result<SingularSite> {
    if k < 3 {
        return Err(DiagramError::TooFewBranches(k));
    }
    if k > DIRECTIONS.len() {
        return Err(DiagramError::Parse(format!("star tangles are provided for up to {} branches", DIRECTIONS.len())));
    }
    SingularSite::new(DIRECTIONS[..k].to_vec())
}

impl SingularSite {
    pub fn new(directions: Vec<Vec2>) -> Result<SingularSite> {
        if directions.len() < 3 {
            return Err(DiagramError::TooFewBranches(directions.len()));
        }
        for i in 0..directions.len() {
            for j in i + 1..directions.len() {
                if cross(directions[i], directions[j]) == 0 {
                    return Err(DiagramError::ParallelBranches(i + 1, j + 1));
                }
            }
        }
        Ok(SingularSite { directions })
    }

    pub fn branches(&self) -> usize {
        self.directions.len()
    }

    pub fn directions(&self) -> &[Vec2] {
        &self.directions
    }

    pub fn complexity(&self) -> usize {
        self.branches() - 1
    }

    /// Number of one-step resolutions needed to remove the singular point.
    fn levels(&self) -> usize {
        self.branches() - 2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn sign(self) -> i64 {
        match self {
            Side::Plus => 1,
            Side::Minus => -1,
        }
    }
}

/// A star after some one-step resolutions: `sides[j]` is the side to which
/// branch `k - j` was moved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialResolution {
    site: SingularSite,
    sides: Vec<Side>,
}

pub fn resolve_once(site: &SingularSite, side: Side) -> PartialResolution {
    PartialResolution { site: site.clone(), sides: vec![side] }
}

impl PartialResolution {
    pub fn unresolved(site: &SingularSite) -> PartialResolution {
        PartialResolution { site: site.clone(), sides: Vec::new() }
    }

    pub fn site(&self) -> &SingularSite {
        &self.site
    }

    pub fn sides(&self) -> &[Side] {
        &self.sides
    }

    /// Moves the last branch still through the origin to `side`.
    pub fn resolve(&self, side: Side) -> PartialResolution {
        assert!(!self.is_complete(), "no singular point left to resolve");
        let mut sides = self.sides.clone();
        sides.push(side);
        PartialResolution { site: self.site.clone(), sides }
    }

    /// Branches still meeting at the origin.
    pub fn residual_branches(&self) -> usize {
        self.site.branches() - self.sides.len()
    }

    pub fn is_complete(&self) -> bool {
        self.residual_branches() <= 2
    }

    pub fn sign(&self) -> i64 {
        self.sides.iter().map(|s| s.sign()).product()
    }

    /// Offset of each branch from the origin, one series per coordinate.
    fn shifts(&self) -> Vec<(Series, Series)> {
        let levels = self.site.levels();
        let k = self.site.branches();
        let zero = || Series::constant(Q::zero(), levels);
        let mut out = vec![(zero(), zero()); k];
        for (j, side) in self.sides.iter().enumerate() {
            let b = k - 1 - j;
            let (x, y) = self.site.directions[b];
            let s = side.sign();
            out[b].0 .0[j + 1] = q(-y * s);
            out[b].1 .0[j + 1] = q(x * s);
        }
        out
    }

    /// Crossings between branches moved apart, as `(a, b, ta, tb)` with
    /// `a < b` and parameters along the branch directions. Branches still at
    /// the origin meet at parameter zero.
    fn local_crossings(&self) -> Vec<(usize, usize, Series, Series)> {
        let dirs = &self.site.directions;
        let shifts = self.shifts();
        let mut out = Vec::new();
        for a in 0..dirs.len() {
            for b in a + 1..dirs.len() {
                let w = (shifts[b].0.add(&shifts[a].0.scale(&q(-1))), shifts[b].1.add(&shifts[a].1.scale(&q(-1))));
                let det = q(cross(dirs[a], dirs[b]));
                // ta va - tb vb = w, solved by Cramer's rule.
                let cross_w = |v: Vec2| w.0.scale(&q(v.1)).add(&w.1.scale(&q(-v.0)));
                let ta = cross_w(dirs[b]).scale(&(Q::one() / &det));
                let tb = cross_w(dirs[a]).scale(&(Q::one() / &det));
                out.push((a, b, ta, tb));
            }
        }
        out
    }

    /// Ordinary crossings created so far: pairs not both at the origin.
    pub fn ordinary_crossings(&self) -> usize {
        let r = self.residual_branches();
        let k = self.site.branches();
        k * (k - 1) / 2 - if r >= 3 { r * (r - 1) / 2 } else { 0 }
    }

    /// The resolved tangle; `None` while a singular point remains.
    pub fn tangle(&self) -> Option<TangleDiagram> {
        if !self.is_complete() {
            return None;
        }
        let dirs = &self.site.directions;
        let mut on_strand: Vec<Vec<(Series, usize, Role)>> = vec![Vec::new(); dirs.len()];
        for (c, (a, b, ta, tb)) in self.local_crossings().into_iter().enumerate() {
            let (ra, rb) =
                if cross(dirs[a], dirs[b]) > 0 { (Role::Tail, Role::Head) } else { (Role::Head, Role::Tail) };
            on_strand[a].push((ta, c, ra));
            on_strand[b].push((tb, c, rb));
        }
        Some(TangleDiagram::from_strands(on_strand))
    }
}

/// All `2^(k-2)` fully resolved stars with their signs, in resolution-path
/// order (`Plus` before `Minus` at every step).
pub fn complete_resolution(site: &SingularSite) -> Vec<(i64, PartialResolution)> {
    let mut layer = vec![PartialResolution::unresolved(site)];
    while !layer[0].is_complete() {
        layer = layer.iter().flat_map(|p| [p.resolve(Side::Plus), p.resolve(Side::Minus)]).collect();
    }
    layer.into_iter().map(|p| (p.sign(), p)).collect()
}

/// An endpoint on a tangle strand: strand index and rank along it.
pub type StrandPoint = (usize, usize);

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TangleChord {
    pub tail: StrandPoint,
    pub head: StrandPoint,
}

/// Arrow diagram on a skeleton of several oriented strands, compared by
/// strand index, rank and direction only.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TangleDiagram {
    strands: usize,
    chords: Vec<TangleChord>,
}

impl TangleDiagram {
    fn from_strands<P: Ord>(mut on_strand: Vec<Vec<(P, usize, Role)>>) -> TangleDiagram {
        let count = on_strand.iter().map(Vec::len).sum::<usize>() / 2;
        let mut ends = vec![[(0, 0); 2]; count];
        for (s, list) in on_strand.iter_mut().enumerate() {
            list.sort_by(|x, y| x.0.cmp(&y.0));
            for (rank, (_, c, role)) in list.iter().enumerate() {
                ends[*c][*role as usize] = (s, rank);
            }
        }
        TangleDiagram::new(on_strand.len(), ends.into_iter().map(|[tail, head]| TangleChord { tail, head }).collect())
    }

    pub fn new(strands: usize, mut chords: Vec<TangleChord>) -> TangleDiagram {
        chords.sort();
        TangleDiagram { strands, chords }
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn chords(&self) -> &[TangleChord] {
        &self.chords
    }

    /// The subdiagram on the chords selected by `mask`, with ranks recounted.
    pub fn subdiagram(&self, mask: u64) -> TangleDiagram {
        let mut on_strand: Vec<Vec<(usize, usize, Role)>> = vec![Vec::new(); self.strands];
        let mut kept = 0;
        for (c, ch) in self.chords.iter().enumerate() {
            if mask >> c & 1 == 1 {
                on_strand[ch.tail.0].push((ch.tail.1, kept, Role::Tail));
                on_strand[ch.head.0].push((ch.head.1, kept, Role::Head));
                kept += 1;
            }
        }
        TangleDiagram::from_strands(on_strand)
    }

    /// True if some chord has an endpoint on `strand`.
    pub fn touches(&self, strand: usize) -> bool {
        self.chords.iter().any(|c| c.tail.0 == strand || c.head.0 == strand)
    }

    pub fn parse(text: &str) -> Result<TangleDiagram> {
        let bad = |m: String| DiagramError::Parse(format!("tangle: {m}"));
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let head = lines.next().ok_or_else(|| bad("empty input".into()))?;
        let strands: usize = head
            .strip_prefix("strands=")
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad(format!("expected strands=<k>, got `{head}`")))?;
        let point = |s: &str| -> Result<StrandPoint> {
            let inner = s.trim().strip_prefix('(').and_then(|s| s.strip_suffix(')'));
            let (a, b) = inner.and_then(|s| s.split_once(',')).ok_or_else(|| bad(format!("bad endpoint `{s}`")))?;
            let strand: usize = a.trim().parse().map_err(|_| bad(format!("bad strand in `{s}`")))?;
            let rank: usize = b.trim().parse().map_err(|_| bad(format!("bad rank in `{s}`")))?;
            if strand == 0 || strand > strands {
                return Err(bad(format!("strand {strand} out of range")));
            }
            Ok((strand - 1, rank))
        };
        let mut chords = Vec::new();
        for line in lines {
            let (t, h) = line.split_once("->").ok_or_else(|| bad(format!("expected `->` in `{line}`")))?;
            chords.push(TangleChord { tail: point(t)?, head: point(h)? });
        }
        let mut used: Vec<Vec<usize>> = vec![Vec::new(); strands];
        for c in &chords {
            used[c.tail.0].push(c.tail.1);
            used[c.head.0].push(c.head.1);
        }
        for (s, mut ranks) in used.into_iter().enumerate() {
            ranks.sort_unstable();
            if ranks.iter().enumerate().any(|(i, &r)| i != r) {
                return Err(bad(format!("ranks on strand {} must be 0, 1, 2, ... without repeats", s + 1)));
            }
        }
        Ok(TangleDiagram::new(strands, chords))
    }
}

impl fmt::Display for TangleDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "strands={}", self.strands)?;
        for c in &self.chords {
            write!(f, "\n({},{})->({},{})", c.tail.0 + 1, c.tail.1, c.head.0 + 1, c.head.1)?;
        }
        Ok(())
    }
}

/// Integer combination of tangle diagrams with no zero coefficients.
pub type TangleSum = BTreeMap<TangleDiagram, i64>;

fn accumulate(sum: &mut TangleSum, t: TangleDiagram, c: i64) {
    let v = sum.entry(t.clone()).or_insert(0);
    *v += c;
    if *v == 0 {
        sum.remove(&t);
    }
}

/// Sum of all subdiagrams of `t`.
pub fn tangle_subdiagram_sum(t: &TangleDiagram) -> TangleSum {
    let mut sum = TangleSum::new();
    let k = t.chords.len();
    for m in subset_masks(k, k) {
        accumulate(&mut sum, t.subdiagram(m), 1);
    }
    sum
}

/// Signed subdiagram sums of a list of resolved terms.
pub fn resolution_sum(terms: &[(i64, PartialResolution)]) -> TangleSum {
    let mut sum = TangleSum::new();
    for (sign, p) in terms {
        let t = p.tangle().expect("terms are fully resolved");
        for (d, c) in tangle_subdiagram_sum(&t) {
            accumulate(&mut sum, d, sign * c);
        }
    }
    sum
}

/// Fewest chords among the terms of `sum`; `None` for the zero sum.
pub fn min_chord_degree(sum: &TangleSum) -> Option<usize> {
    sum.keys().map(|t| t.chords.len()).min()
}

/// A closed curve through one singular point: the star branches joined up
/// outside a neighbourhood of the origin by polygonal arcs. Branch `i`
/// continues into branch `next[i]`; together the arcs form one cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Plant {
    site: SingularSite,
    next: Vec<usize>,
    waypoints: Vec<Vec<(i64, i64)>>,
}

struct Segment {
    from: (Q, Q),
    to: (Q, Q),
    branch: Option<usize>,
}

impl Plant {
    /// `next` must be a single cycle on the branches; `waypoints[i]` is the
    /// path from the end of branch `i` to the start of branch `next[i]`.
    pub fn new(site: SingularSite, next: Vec<usize>, waypoints: Vec<Vec<(i64, i64)>>) -> Result<Plant> {
        let k = site.branches();
        let mut seen = 0;
        let mut b = 0;
        for _ in 0..k {
            b = *next.get(b).ok_or_else(|| DiagramError::Parse("successor list is too short".into()))?;
            seen += 1;
            if b == 0 {
                break;
            }
        }
        if next.len() != k || b != 0 || seen != k || waypoints.len() != k {
            return Err(DiagramError::Parse("branches must join into a single closed curve".into()));
        }
        let plant = Plant { site, next, waypoints };
        // Validate general position on every resolved term.
        for (_, p) in complete_resolution(&plant.site) {
            plant.closed_diagram(&p)?;
        }
        Ok(plant)
    }

    /// Random plant with far-away waypoints; retries until the curve is in
    /// general position.
    pub fn random<R: Rng>(rng: &mut R, site: &SingularSite) -> Plant {
        let k = site.branches();
        loop {
            let mut order: Vec<usize> = (1..k).collect();
            order.shuffle(rng);
            order.insert(0, 0);
            let mut next = vec![0; k];
            for i in 0..k {
                next[order[i]] = order[(i + 1) % k];
            }
            let waypoints = (0..k)
                .map(|_| {
                    (0..rng.gen_range(1..=2))
                        .map(|_| loop {
                            let p = (rng.gen_range(-12..=12), rng.gen_range(-12..=12));
                            if p.0.abs().max(p.1.abs()) >= 6 {
                                break p;
                            }
                        })
                        .collect()
                })
                .collect();
            if let Ok(p) = Plant::new(site.clone(), next, waypoints) {
                return p;
            }
        }
    }

    pub fn site(&self) -> &SingularSite {
        &self.site
    }

    fn segments(&self) -> Vec<Segment> {
        let dirs = &self.site.directions;
        let pt = |v: Vec2, s: i64| (q(v.0 * s), q(v.1 * s));
        let mut segs = Vec::new();
        let mut b = 0;
        loop {
            segs.push(Segment { from: pt(dirs[b], -1), to: pt(dirs[b], 1), branch: Some(b) });
            let mut path = vec![pt(dirs[b], 1)];
            path.extend(self.waypoints[b].iter().map(|&(x, y)| (q(x), q(y))));
            let nb = self.next[b];
            path.push(pt(dirs[nb], -1));
            for w in path.windows(2) {
                segs.push(Segment { from: w[0].clone(), to: w[1].clone(), branch: None });
            }
            b = nb;
            if b == 0 {
                return segs;
            }
        }
    }

    /// Arrow diagram of the closed curve with the star replaced by `p`.
    pub fn closed_diagram(&self, p: &PartialResolution) -> Result<ArrowDiagram> {
        assert!(p.is_complete() && p.site == self.site, "resolution must be complete and of this site");
        let levels = self.site.levels();
        let segs = self.segments();
        let degenerate = |m: &str| Err(DiagramError::Degenerate(m.into()));
        let mut on_seg: Vec<Vec<(Series, usize, Role)>> = vec![Vec::new(); segs.len()];
        let mut chord = 0;
        let branch_seg: BTreeMap<usize, usize> =
            segs.iter().enumerate().filter_map(|(i, s)| s.branch.map(|b| (b, i))).collect();
        // Near the origin: branch i is (-1 + 2u) * v_i, so u = 1/2 + t / 2.
        let half = Q::new(BigInt::one(), BigInt::from(2));
        for (a, b, ta, tb) in p.local_crossings() {
            let dirs = &self.site.directions;
            let (ra, rb) =
                if cross(dirs[a], dirs[b]) > 0 { (Role::Tail, Role::Head) } else { (Role::Head, Role::Tail) };
            let ua = Series::constant(half.clone(), levels).add(&ta.scale(&half));
            let ub = Series::constant(half.clone(), levels).add(&tb.scale(&half));
            on_seg[branch_seg[&a]].push((ua, chord, ra));
            on_seg[branch_seg[&b]].push((ub, chord, rb));
            chord += 1;
        }
        let n = segs.len();
        for i in 0..n {
            for j in i + 1..n {
                if segs[i].branch.is_some() && segs[j].branch.is_some() {
                    continue;
                }
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                let (si, sj) = (&segs[i], &segs[j]);
                let di = (&si.to.0 - &si.from.0, &si.to.1 - &si.from.1);
                let dj = (&sj.to.0 - &sj.from.0, &sj.to.1 - &sj.from.1);
                let det = &di.0 * &dj.1 - &di.1 * &dj.0;
                let w = (&sj.from.0 - &si.from.0, &sj.from.1 - &si.from.1);
                if det.is_zero() {
                    let collinear = (&w.0 * &di.1 - &w.1 * &di.0).is_zero();
                    if collinear {
                        return degenerate("collinear segments");
                    }
                    continue;
                }
                let u = (&w.0 * &dj.1 - &w.1 * &dj.0) / &det;
                let v = (&w.0 * &di.1 - &w.1 * &di.0) / &det;
                let inside = |x: &Q| x.is_positive() && *x < Q::one();
                let closed = |x: &Q| !x.is_negative() && *x <= Q::one();
                if adjacent {
                    // Adjacent segments meet at their shared vertex only.
                    if inside(&u) && inside(&v) {
                        return degenerate("adjacent segments cross");
                    }
                    continue;
                }
                if !closed(&u) || !closed(&v) {
                    continue;
                }
                if !inside(&u) || !inside(&v) {
                    return degenerate("crossing at a vertex");
                }
                let x = &si.from.0 + &di.0 * &u;
                let y = &si.from.1 + &di.1 * &u;
                if x.is_zero() && y.is_zero() {
                    return degenerate("arc through the singular point");
                }
                let (ri, rj) = if det.is_positive() { (Role::Tail, Role::Head) } else { (Role::Head, Role::Tail) };
                on_seg[i].push((Series::constant(u, levels), chord, ri));
                on_seg[j].push((Series::constant(v, levels), chord, rj));
                chord += 1;
            }
        }
        let mut ends = Vec::with_capacity(2 * chord);
        for mut list in on_seg {
            list.sort_by(|x, y| x.0.cmp(&y.0));
            if list.windows(2).any(|w| w[0].0 == w[1].0) {
                return degenerate("three branches through one point");
            }
            ends.extend(list.into_iter().map(|(_, c, r)| Endpoint::new(c, r)));
        }
        ArrowDiagram::from_endpoints(ends)
    }

    /// Signed arrow diagrams of the complete resolution.
    pub fn resolved_diagrams(&self) -> Result<Vec<(i64, ArrowDiagram)>> {
        complete_resolution(&self.site).into_iter().map(|(s, p)| Ok((s, self.closed_diagram(&p)?))).collect()
    }
}
