//! Quiver diagrams: chord diagrams whose endpoints carry non-negative labels,
//! every chord having label sum at least one.

use std::fmt;

use rand::Rng;

use crate::diagram::{ArrowDiagram, ChordDiagram, Role};
use crate::error::{DiagramError, Result};

/// Positions carry a chord id (numbered by first appearance) and a label.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuiverDiagram {
    chord: Vec<u8>,
    label: Vec<u32>,
}

impl QuiverDiagram {
    pub fn empty() -> Self {
        QuiverDiagram { chord: Vec::new(), label: Vec::new() }
    }

    pub fn new(chords: Vec<usize>, labels: Vec<u32>) -> Result<Self> {
        if chords.len() != labels.len() {
            return Err(DiagramError::Parse("chord and label sequences differ in length".into()));
        }
        let cd = ChordDiagram::parse(&chords.iter().map(|c| (c + 1).to_string()).collect::<Vec<_>>().join(" "))?;
        let q = QuiverDiagram { chord: cd.sequence().iter().map(|&c| c as u8).collect(), label: labels };
        q.check_sums()?;
        Ok(q)
    }

    /// Parses `1:0 2:1 1:1 2:0`, i.e. `<chord>:<label>` per position.
    pub fn parse(text: &str) -> Result<Self> {
        let mut chords = Vec::new();
        let mut labels = Vec::new();
        for tok in text.split_whitespace() {
            let (c, l) = tok.split_once(':').ok_or_else(|| DiagramError::BadToken(tok.into()))?;
            let c: usize = c.parse().ok().filter(|&c| c >= 1).ok_or_else(|| DiagramError::BadToken(tok.into()))?;
            let l: u32 = l.parse().map_err(|_| DiagramError::BadToken(tok.into()))?;
            chords.push(c - 1);
            labels.push(l);
        }
        QuiverDiagram::new(chords, labels)
    }

    pub(crate) fn from_raw(chord: Vec<u8>, label: Vec<u32>) -> Self {
        QuiverDiagram { chord, label }
    }

    fn check_sums(&self) -> Result<()> {
        let mut sums = vec![0u64; self.chords()];
        for (c, l) in self.chord.iter().zip(&self.label) {
            sums[*c as usize] += *l as u64;
        }
        match sums.iter().position(|&s| s == 0) {
            Some(c) => Err(DiagramError::ZeroChord(c + 1)),
            None => Ok(()),
        }
    }

    pub fn from_arrow(d: &ArrowDiagram) -> Self {
        QuiverDiagram {
            chord: d.endpoints().iter().map(|e| e.chord as u8).collect(),
            label: d.endpoints().iter().map(|e| u32::from(e.role == Role::Head)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.chord.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chord.is_empty()
    }

    pub fn chords(&self) -> usize {
        self.chord.len() / 2
    }

    pub fn chord_at(&self, pos: usize) -> usize {
        self.chord[pos] as usize
    }

    pub fn label_at(&self, pos: usize) -> u32 {
        self.label[pos]
    }

    pub fn chord_ids(&self) -> &[u8] {
        &self.chord
    }

    pub fn labels(&self) -> &[u32] {
        &self.label
    }

    pub fn degree(&self) -> u32 {
        self.label.iter().sum()
    }

    pub fn underlying(&self) -> ChordDiagram {
        ChordDiagram::from_valid(self.chord.iter().map(|&c| c as usize).collect())
    }

    pub(crate) fn partners(&self) -> Vec<usize> {
        partners(&self.chord)
    }

    /// Chord pairs whose endpoints match up into two adjacent position pairs,
    /// as `(adjacency index, other adjacency)`; each unordered pair once.
    fn adjacency_sites(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        if n < 4 {
            return Vec::new();
        }
        let p = self.partners();
        let mut out = Vec::new();
        for i in 0..n {
            let j = (i + 1) % n;
            if self.chord[i] == self.chord[j] {
                continue;
            }
            let (pi, pj) = (p[i], p[j]);
            // The other endpoints must sit next to each other, in either order.
            let other = if (pj + 1) % n == pi {
                pj
            } else if (pi + 1) % n == pj {
                pi
            } else {
                continue;
            };
            // Each pair shows up from both of its adjacencies; keep one.
            if i < other {
                out.push((i, other));
            }
        }
        out
    }

    pub fn adjacent_chord_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs: Vec<(usize, usize)> = self
            .adjacency_sites()
            .into_iter()
            .map(|(i, _)| {
                let (a, b) = (self.chord[i] as usize, self.chord[(i + 1) % self.len()] as usize);
                (a.min(b), a.max(b))
            })
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        pairs
    }

    /// Merges the chords at adjacency `i` (positions `i`, `i+1`) and `other`
    /// (positions `other`, `other+1`), adding the labels pairwise.
    fn merge_at(&self, i: usize, other: usize) -> QuiverDiagram {
        let n = self.len();
        let (i2, o2) = ((i + 1) % n, (other + 1) % n);
        let keep = self.chord[i];
        let mut chord = Vec::with_capacity(n - 2);
        let mut label = Vec::with_capacity(n - 2);
        for pos in 0..n {
            if pos == i2 || pos == o2 {
                continue;
            }
            if pos == i {
                chord.push(keep);
                label.push(self.label[i] + self.label[i2]);
            } else if pos == other {
                chord.push(keep);
                label.push(self.label[other] + self.label[o2]);
            } else {
                chord.push(self.chord[pos]);
                label.push(self.label[pos]);
            }
        }
        QuiverDiagram { chord: renumber(&chord), label }
    }

    pub fn is_reduced(&self) -> bool {
        self.adjacency_sites().is_empty()
    }

    /// Merges adjacent pairs until none is left, always taking the first.
    pub fn reduce(&self) -> QuiverDiagram {
        self.reduce_by(|_| 0)
    }

    pub fn reduce_random<R: Rng>(&self, rng: &mut R) -> QuiverDiagram {
        self.reduce_by(|k| rng.gen_range(0..k))
    }

    pub fn reduce_by<F: FnMut(usize) -> usize>(&self, mut choose: F) -> QuiverDiagram {
        let mut cur = self.clone();
        loop {
            let sites = cur.adjacency_sites();
            if sites.is_empty() {
                return cur;
            }
            let (i, other) = sites[choose(sites.len())];
            cur = cur.merge_at(i, other);
        }
    }

    pub fn has_isolated_chord(&self) -> bool {
        let n = self.len();
        n >= 2 && (0..n).any(|i| self.chord[i] == self.chord[(i + 1) % n])
    }

    pub fn is_zero_by_isolated_chord(&self) -> Result<bool> {
        if !self.is_reduced() {
            return Err(DiagramError::NotReduced);
        }
        Ok(self.has_isolated_chord())
    }

    /// Representative up to rotation: least chord sequence first, then least
    /// label sequence among the rotations that achieve it.
    pub fn canonical_form(&self) -> QuiverDiagram {
        let n = self.len();
        if n == 0 {
            return self.clone();
        }
        let mut best: Option<(Vec<u8>, Vec<u32>)> = None;
        for r in 0..n {
            let chord = renumber(&rotate(&self.chord, r));
            let label = rotate(&self.label, r);
            let better = match &best {
                None => true,
                Some((bc, bl)) => (&chord, &label) < (bc, bl),
            };
            if better {
                best = Some((chord, label));
            }
        }
        let (chord, label) = best.unwrap();
        QuiverDiagram { chord, label }
    }

    /// The same diagram read from position `r`.
    pub fn rotated(&self, r: usize) -> QuiverDiagram {
        if self.is_empty() {
            return self.clone();
        }
        QuiverDiagram { chord: renumber(&rotate(&self.chord, r)), label: rotate(&self.label, r) }
    }
}

impl fmt::Display for QuiverDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.chord.iter().zip(&self.label).map(|(c, l)| format!("{}:{}", c + 1, l)).collect();
        f.write_str(&parts.join(" "))
    }
}

/// r(X_D): reduction of the arrow diagram read as a (0, 1)-labelled quiver.
pub fn cluster_reduce_arrow(d: &ArrowDiagram) -> QuiverDiagram {
    QuiverDiagram::from_arrow(d).reduce()
}

pub(crate) fn rotate<T: Copy>(v: &[T], r: usize) -> Vec<T> {
    let n = v.len();
    (0..n).map(|i| v[(r + i) % n]).collect()
}

pub(crate) fn renumber(seq: &[u8]) -> Vec<u8> {
    let mut map = [u8::MAX; 256];
    let mut next = 0u8;
    seq.iter()
        .map(|&c| {
            if map[c as usize] == u8::MAX {
                map[c as usize] = next;
                next += 1;
            }
            map[c as usize]
        })
        .collect()
}

pub(crate) fn partners(chord: &[u8]) -> Vec<usize> {
    let mut first = [usize::MAX; 256];
    let mut p = vec![0; chord.len()];
    for (i, &c) in chord.iter().enumerate() {
        let f = first[c as usize];
        if f == usize::MAX {
            first[c as usize] = i;
        } else {
            p[i] = f;
            p[f] = i;
        }
    }
    p
}
