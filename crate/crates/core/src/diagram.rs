//! Arrow diagrams: cyclic sequences of directed-chord endpoints.
//!
//! Chords are stored 0-based and numbered by first appearance along the
//! stored rotation; the text encoding is 1-based (`1t 2t 1h 2h`).

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::{DiagramError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Role {
    Tail,
    Head,
}

impl Role {
    pub fn flip(self) -> Role {
        match self {
            Role::Tail => Role::Head,
            Role::Head => Role::Tail,
        }
    }

    fn letter(self) -> char {
        match self {
            Role::Tail => 't',
            Role::Head => 'h',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Endpoint {
    pub chord: usize,
    pub role: Role,
}

impl Endpoint {
    pub fn new(chord: usize, role: Role) -> Self {
        Endpoint { chord, role }
    }
}

/// A chord diagram with directed chords, up to rotation of the skeleton.
///
/// The stored endpoint order is one particular rotation; equality and hashing
/// ignore it and compare canonical forms.
#[derive(Clone, Debug, Default)]
pub struct ArrowDiagram {
    ends: Vec<Endpoint>,
}

impl ArrowDiagram {
    pub fn empty() -> Self {
        ArrowDiagram { ends: Vec::new() }
    }

    /// Builds a diagram from endpoints with arbitrary chord ids, renumbering
    /// by first appearance.
    pub fn from_endpoints(ends: Vec<Endpoint>) -> Result<Self> {
        let max = ends.iter().map(|e| e.chord).max().map_or(0, |m| m + 1);
        let mut seen: Vec<[bool; 2]> = vec![[false; 2]; max];
        for e in &ends {
            let slot = &mut seen[e.chord][e.role as usize];
            if *slot {
                let role = if e.role == Role::Tail { "tail" } else { "head" };
                return Err(DiagramError::DuplicateRole(e.chord + 1, role));
            }
            *slot = true;
        }
        for (c, s) in seen.iter().enumerate() {
            if s[0] != s[1] {
                return Err(DiagramError::Unpaired(c + 1));
            }
        }
        Ok(ArrowDiagram { ends: renumber(&ends) })
    }

    /// Trusted constructor for endpoint lists already known to be valid.
    pub(crate) fn from_valid(ends: Vec<Endpoint>) -> Self {
        debug_assert!(ArrowDiagram::from_endpoints(ends.clone()).is_ok());
        ArrowDiagram { ends: renumber(&ends) }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut ends = Vec::new();
        for tok in text.split_whitespace() {
            let (num, role) = tok.split_at(tok.len().saturating_sub(1));
            let role = match role {
                "t" => Role::Tail,
                "h" => Role::Head,
                _ => return Err(DiagramError::BadToken(tok.to_string())),
            };
            let id: usize = match num.parse() {
                Ok(v) if v >= 1 && num.bytes().all(|b| b.is_ascii_digit()) => v,
                _ => return Err(DiagramError::BadToken(tok.to_string())),
            };
            ends.push(Endpoint::new(id - 1, role));
        }
        // Map sparse ids to a dense range before validation.
        let mut ids: Vec<usize> = ends.iter().map(|e| e.chord).collect();
        ids.sort_unstable();
        ids.dedup();
        let dense: Vec<Endpoint> =
            ends.iter().map(|e| Endpoint::new(ids.binary_search(&e.chord).unwrap(), e.role)).collect();
        match ArrowDiagram::from_endpoints(dense) {
            Ok(d) => Ok(d),
            // Report errors with the user's chord id, not the dense one.
            Err(DiagramError::DuplicateRole(c, r)) => Err(DiagramError::DuplicateRole(ids[c - 1] + 1, r)),
            Err(DiagramError::Unpaired(c)) => Err(DiagramError::Unpaired(ids[c - 1] + 1)),
            Err(e) => Err(e),
        }
    }

    pub fn chords(&self) -> usize {
        self.ends.len() / 2
    }

    pub fn len(&self) -> usize {
        self.ends.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ends.is_empty()
    }

    pub fn endpoints(&self) -> &[Endpoint] {
        &self.ends
    }

    pub fn endpoint(&self, pos: usize) -> Endpoint {
        self.ends[pos]
    }

    /// Positions of the tail and head of every chord.
    pub fn chord_positions(&self) -> Vec<[usize; 2]> {
        let mut out = vec![[0; 2]; self.chords()];
        for (p, e) in self.ends.iter().enumerate() {
            out[e.chord][e.role as usize] = p;
        }
        out
    }

    /// The same diagram read starting at position `offset`.
    pub fn rotated(&self, offset: usize) -> ArrowDiagram {
        if self.ends.is_empty() {
            return self.clone();
        }
        let n = self.ends.len();
        let ends: Vec<Endpoint> = (0..n).map(|i| self.ends[(offset + i) % n]).collect();
        ArrowDiagram { ends: renumber(&ends) }
    }

    /// Rotation offset whose renumbered token sequence is least; ties go to
    /// the smallest offset.
    pub fn canonical_offset(&self) -> usize {
        let n = self.ends.len();
        let mut scratch = Scratch::new(self.chords());
        let mut best = 0;
        for r in 1..n {
            if scratch.compare(&self.ends, r, best) == Ordering::Less {
                best = r;
            }
        }
        best
    }

    pub fn canonical_form(&self) -> ArrowDiagram {
        self.rotated(self.canonical_offset())
    }

    /// True when the stored rotation is already the canonical one.
    pub fn is_canonical(&self) -> bool {
        let mut scratch = Scratch::new(self.chords());
        (1..self.ends.len()).all(|r| scratch.compare(&self.ends, r, 0) != Ordering::Less)
    }

    /// Gauss code of the stored rotation, without canonicalizing.
    pub fn positioned_code(&self) -> String {
        let mut s = String::with_capacity(self.ends.len() * 3);
        for (i, e) in self.ends.iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            s.push_str(&(e.chord + 1).to_string());
            s.push(e.role.letter());
        }
        s
    }

    /// Canonical Gauss code; `parse(serialize(d))` is `canonical_form(d)`.
    pub fn serialize(&self) -> String {
        self.canonical_form().positioned_code()
    }

    pub fn underlying_chord_diagram(&self) -> ChordDiagram {
        ChordDiagram::from_valid(self.ends.iter().map(|e| e.chord).collect())
    }

    /// Cuts the skeleton just before `basepoint`.
    pub fn to_signed_linear(&self, basepoint: usize) -> Result<SignedLinearDiagram> {
        if self.ends.is_empty() {
            return Ok(SignedLinearDiagram { sequence: Vec::new(), signs: Vec::new() });
        }
        if basepoint >= self.ends.len() {
            return Err(DiagramError::OutOfRange { index: basepoint, len: self.ends.len() });
        }
        let based = self.rotated(basepoint);
        let mut signs = vec![0i8; based.chords()];
        for e in &based.ends {
            if signs[e.chord] == 0 {
                signs[e.chord] = if e.role == Role::Tail { 1 } else { -1 };
            }
        }
        Ok(SignedLinearDiagram { sequence: based.ends.iter().map(|e| e.chord).collect(), signs })
    }

    pub fn from_signed_linear(s: &SignedLinearDiagram) -> ArrowDiagram {
        let mut first = vec![true; s.signs.len()];
        let ends = s
            .sequence
            .iter()
            .map(|&c| {
                let tail_first = s.signs[c] > 0;
                let role = if first[c] == tail_first { Role::Tail } else { Role::Head };
                first[c] = false;
                Endpoint::new(c, role)
            })
            .collect();
        ArrowDiagram::from_valid(ends)
    }

    /// Removes a set of chords (given by current ids), keeping the order of
    /// the remaining endpoints.
    pub fn without_chords(&self, drop: &[usize]) -> ArrowDiagram {
        let ends: Vec<Endpoint> = self.ends.iter().copied().filter(|e| !drop.contains(&e.chord)).collect();
        ArrowDiagram { ends: renumber(&ends) }
    }

    /// Keeps only the chords whose bit is set in `mask`.
    pub fn restrict(&self, mask: u64) -> ArrowDiagram {
        let ends: Vec<Endpoint> = self.ends.iter().copied().filter(|e| mask >> e.chord & 1 == 1).collect();
        ArrowDiagram { ends: renumber(&ends) }
    }

    pub(crate) fn raw(&self) -> &Vec<Endpoint> {
        &self.ends
    }
}

impl PartialEq for ArrowDiagram {
    fn eq(&self, other: &Self) -> bool {
        self.ends.len() == other.ends.len() && self.canonical_form().ends == other.canonical_form().ends
    }
}

impl Eq for ArrowDiagram {}

impl Hash for ArrowDiagram {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.canonical_form().ends.hash(state);
    }
}

impl fmt::Display for ArrowDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

impl std::str::FromStr for ArrowDiagram {
    type Err = DiagramError;
    fn from_str(s: &str) -> Result<Self> {
        ArrowDiagram::parse(s)
    }
}

fn renumber(ends: &[Endpoint]) -> Vec<Endpoint> {
    let max = ends.iter().map(|e| e.chord + 1).max().unwrap_or(0);
    let mut map = vec![usize::MAX; max];
    let mut next = 0;
    ends.iter()
        .map(|e| {
            if map[e.chord] == usize::MAX {
                map[e.chord] = next;
                next += 1;
            }
            Endpoint::new(map[e.chord], e.role)
        })
        .collect()
}

/// Reusable renumbering tables for comparing two rotations token by token.
struct Scratch {
    a: Vec<u32>,
    b: Vec<u32>,
}

impl Scratch {
    fn new(chords: usize) -> Self {
        Scratch { a: vec![0; chords], b: vec![0; chords] }
    }

    fn compare(&mut self, ends: &[Endpoint], r: usize, s: usize) -> Ordering {
        let n = ends.len();
        self.a.iter_mut().for_each(|x| *x = u32::MAX);
        self.b.iter_mut().for_each(|x| *x = u32::MAX);
        let (mut na, mut nb) = (0u32, 0u32);
        for i in 0..n {
            let ea = ends[(r + i) % n];
            let eb = ends[(s + i) % n];
            if self.a[ea.chord] == u32::MAX {
                self.a[ea.chord] = na;
                na += 1;
            }
            if self.b[eb.chord] == u32::MAX {
                self.b[eb.chord] = nb;
                nb += 1;
            }
            let ord = (self.a[ea.chord], ea.role).cmp(&(self.b[eb.chord], eb.role));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        Ordering::Equal
    }
}

/// A chord diagram without directions, up to rotation.
#[derive(Clone, Debug)]
pub struct ChordDiagram {
    seq: Vec<usize>,
}

impl ChordDiagram {
    pub(crate) fn from_valid(seq: Vec<usize>) -> Self {
        ChordDiagram { seq: renumber_ids(&seq) }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut seq = Vec::new();
        for tok in text.split_whitespace() {
            match tok.parse::<usize>() {
                Ok(v) if v >= 1 => seq.push(v - 1),
                _ => return Err(DiagramError::BadToken(tok.to_string())),
            }
        }
        let mut counts = std::collections::BTreeMap::new();
        for &c in &seq {
            *counts.entry(c).or_insert(0) += 1;
        }
        for (&c, &k) in &counts {
            if k != 2 {
                return Err(DiagramError::Unpaired(c + 1));
            }
        }
        Ok(ChordDiagram { seq: renumber_ids(&seq) })
    }

    pub fn sequence(&self) -> &[usize] {
        &self.seq
    }

    pub fn chords(&self) -> usize {
        self.seq.len() / 2
    }

    pub fn canonical_form(&self) -> ChordDiagram {
        let n = self.seq.len();
        (0..n.max(1))
            .map(|r| renumber_ids(&(0..n).map(|i| self.seq[(r + i) % n]).collect::<Vec<_>>()))
            .min()
            .map(|seq| ChordDiagram { seq })
            .unwrap_or_else(|| self.clone())
    }
}

impl PartialEq for ChordDiagram {
    fn eq(&self, other: &Self) -> bool {
        self.canonical_form().seq == other.canonical_form().seq
    }
}

impl Eq for ChordDiagram {}

impl fmt::Display for ChordDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.canonical_form();
        let parts: Vec<String> = c.seq.iter().map(|x| (x + 1).to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

pub(crate) fn renumber_ids(seq: &[usize]) -> Vec<usize> {
    let max = seq.iter().map(|c| c + 1).max().unwrap_or(0);
    let mut map = vec![usize::MAX; max];
    let mut next = 0;
    seq.iter()
        .map(|&c| {
            if map[c] == usize::MAX {
                map[c] = next;
                next += 1;
            }
            map[c]
        })
        .collect()
}

/// A based chord diagram of a long doodle: a linear endpoint sequence with a
/// sign per chord (+1 when the tail comes first).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedLinearDiagram {
    pub sequence: Vec<usize>,
    pub signs: Vec<i8>,
}

impl SignedLinearDiagram {
    pub fn sign(&self, chord: usize) -> i8 {
        self.signs[chord]
    }

    pub fn parse(text: &str) -> Result<Self> {
        let bad = || DiagramError::Parse(format!("bad signed linear diagram `{text}`"));
        let (seq_part, sign_part) = text.split_once("signs:").ok_or_else(bad)?;
        let mut raw = Vec::new();
        for tok in seq_part.split_whitespace() {
            match tok.parse::<usize>() {
                Ok(v) if v >= 1 => raw.push(v - 1),
                _ => return Err(DiagramError::BadToken(tok.to_string())),
            }
        }
        let mut given = std::collections::BTreeMap::new();
        for item in sign_part.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (id, s) = item.split_once('=').ok_or_else(bad)?;
            let id: usize = id.trim().parse().map_err(|_| bad())?;
            let s = match s.trim() {
                "+" => 1i8,
                "-" => -1i8,
                _ => return Err(bad()),
            };
            given.insert(id.checked_sub(1).ok_or_else(bad)?, s);
        }
        let mut counts = std::collections::BTreeMap::new();
        for &c in &raw {
            *counts.entry(c).or_insert(0usize) += 1;
        }
        if counts.values().any(|&k| k != 2) || counts.keys().ne(given.keys()) {
            return Err(bad());
        }
        let seq = renumber_ids(&raw);
        let mut signs = vec![0i8; seq.len() / 2];
        for (&orig, &new) in raw.iter().zip(&seq) {
            signs[new] = given[&orig];
        }
        Ok(SignedLinearDiagram { sequence: seq, signs })
    }
}

impl fmt::Display for SignedLinearDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.sequence {
            write!(f, "{} ", c + 1)?;
        }
        f.write_str("signs: ")?;
        let parts: Vec<String> = self
            .signs
            .iter()
            .enumerate()
            .map(|(c, s)| format!("{}={}", c + 1, if *s > 0 { '+' } else { '-' }))
            .collect();
        f.write_str(&parts.join(","))
    }
}
