//! Coefficient fields, basis keys and truncated algebra elements.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{DiagramError, Result};

pub type Coeff = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Field {
    Rational,
    Gf2,
}

impl Field {
    /// Brings an exact value into the field: identity over Q, parity over F2.
    pub fn normalize(self, x: Coeff) -> Result<Coeff> {
        match self {
            Field::Rational => Ok(x),
            Field::Gf2 => mod2(&x).map(|b| if b { Coeff::one() } else { Coeff::zero() }),
        }
    }

    pub(crate) fn reduce(self, x: Coeff) -> Coeff {
        match self {
            Field::Rational => x,
            Field::Gf2 => {
                debug_assert!(x.is_integer());
                if x.numer().is_odd() {
                    Coeff::one()
                } else {
                    Coeff::zero()
                }
            }
        }
    }
}

fn mod2(x: &Coeff) -> Result<bool> {
    // A rational with odd denominator still has a residue mod 2.
    if x.denom().is_even() {
        return Err(DiagramError::NotIntegral(x.to_string()));
    }
    Ok(x.numer().is_odd())
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Field::Rational => "Q",
            Field::Gf2 => "F2",
        })
    }
}

impl FromStr for Field {
    type Err = DiagramError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Q" | "q" => Ok(Field::Rational),
            "F2" | "f2" | "GF2" => Ok(Field::Gf2),
            _ => Err(DiagramError::Parse(format!("unknown field `{s}` (expected Q or F2)"))),
        }
    }
}

/// One chord of a basis key: marked endpoint (label 0), unmarked endpoint and
/// its label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KeyChord {
    pub marked: u8,
    pub unmarked: u8,
    pub label: u32,
}

/// A basis element of the truncated quiver algebra: a reduced chord diagram
/// in canonical rotation with one marked endpoint per chord.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisKey {
    degree: u32,
    chords: Vec<KeyChord>,
}

impl BasisKey {
    pub fn empty() -> Self {
        BasisKey { degree: 0, chords: Vec::new() }
    }

    pub fn new(mut chords: Vec<KeyChord>) -> Self {
        chords.sort_by_key(|c| (c.marked.min(c.unmarked), c.marked.max(c.unmarked)));
        BasisKey { degree: chords.iter().map(|c| c.label).sum(), chords }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn chords(&self) -> &[KeyChord] {
        &self.chords
    }

    pub fn is_empty(&self) -> bool {
        self.chords.is_empty()
    }

    /// Underlying chord sequence, chords numbered by first appearance.
    pub fn chord_sequence(&self) -> Vec<u8> {
        let mut seq = vec![0u8; 2 * self.chords.len()];
        for (i, c) in self.chords.iter().enumerate() {
            seq[c.marked as usize] = i as u8;
            seq[c.unmarked as usize] = i as u8;
        }
        crate::quiver::renumber(&seq)
    }

    /// Endpoint labels in position order.
    pub fn labels(&self) -> Vec<u32> {
        let mut labels = vec![0u32; 2 * self.chords.len()];
        for c in &self.chords {
            labels[c.unmarked as usize] = c.label;
        }
        labels
    }

    pub fn parse(text: &str) -> Result<Self> {
        let bad = || DiagramError::Parse(format!("bad basis key `{text}`"));
        let rest = text.trim().strip_prefix("deg=").ok_or_else(bad)?;
        let (deg, chords) = rest.split_once(';').ok_or_else(bad)?;
        let degree: u32 = deg.parse().map_err(|_| bad())?;
        let mut out = Vec::new();
        for part in chords.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (ends, label) = part.split_once(':').ok_or_else(bad)?;
            let (a, b) = ends.split_once('-').ok_or_else(bad)?;
            out.push(KeyChord {
                marked: a.parse().map_err(|_| bad())?,
                unmarked: b.parse().map_err(|_| bad())?,
                label: label.parse().map_err(|_| bad())?,
            });
        }
        let key = BasisKey::new(out);
        if key.degree != degree {
            return Err(bad());
        }
        Ok(key)
    }
}

impl fmt::Display for BasisKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.chords.iter().map(|c| format!("{}-{}:{}", c.marked, c.unmarked, c.label)).collect();
        write!(f, "deg={}; {}", self.degree, parts.join(","))
    }
}

/// Element of the quiver algebra truncated above `truncation`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement {
    truncation: u32,
    field: Field,
    terms: BTreeMap<BasisKey, Coeff>,
}

impl AlgebraElement {
    pub fn zero(truncation: u32, field: Field) -> Self {
        AlgebraElement { truncation, field, terms: BTreeMap::new() }
    }

    /// The class of the empty diagram.
    pub fn one(truncation: u32, field: Field) -> Self {
        let mut e = Self::zero(truncation, field);
        e.terms.insert(BasisKey::empty(), Coeff::one());
        e
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BasisKey, &Coeff)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, key: &BasisKey) -> Coeff {
        self.terms.get(key).cloned().unwrap_or_else(Coeff::zero)
    }

    /// Adds `c * key`, dropping it if its degree exceeds the truncation.
    pub fn add_term(&mut self, key: BasisKey, c: Coeff) {
        if key.degree() > self.truncation || c.is_zero() {
            return;
        }
        let field = self.field;
        let entry = self.terms.entry(key);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                let c = field.reduce(c);
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let c = field.reduce(o.get() + c);
                if c.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = c;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &AlgebraElement, c: &Coeff) {
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v * c);
        }
    }

    pub fn add_assign(&mut self, other: &AlgebraElement) {
        self.add_scaled(other, &Coeff::one());
    }

    pub fn scaled(&self, c: &Coeff) -> AlgebraElement {
        let mut out = Self::zero(self.truncation, self.field);
        out.add_scaled(self, c);
        out
    }

    /// The part of degree at most `n`, as an element truncated at `n`.
    pub fn project(&self, n: u32) -> AlgebraElement {
        let mut out = Self::zero(n.min(self.truncation), self.field);
        for (k, v) in &self.terms {
            if k.degree() <= n {
                out.terms.insert(k.clone(), v.clone());
            }
        }
        out
    }

    /// Everything except the empty-diagram term.
    pub fn nonempty_part(&self) -> AlgebraElement {
        let mut out = self.clone();
        out.terms.remove(&BasisKey::empty());
        out
    }

    /// Reduces exact coefficients mod 2; fails on an even denominator.
    pub fn to_gf2(&self) -> Result<AlgebraElement> {
        let mut out = Self::zero(self.truncation, Field::Gf2);
        for (k, v) in &self.terms {
            if mod2(v)? {
                out.terms.insert(k.clone(), Coeff::one());
            }
        }
        Ok(out)
    }

    /// One `<coefficient> <key>` line per term, sorted by key text.
    pub fn to_text(&self) -> String {
        let mut lines: Vec<(String, String)> =
            self.terms.iter().map(|(k, v)| (k.to_string(), format_coeff(v))).collect();
        lines.sort();
        lines.into_iter().map(|(k, v)| format!("{v} {k}\n")).collect()
    }

    pub fn parse_text(text: &str, truncation: u32, field: Field) -> Result<Self> {
        let mut out = Self::zero(truncation, field);
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let (c, k) = line.split_once(' ').ok_or_else(|| DiagramError::Parse(format!("bad term line `{line}`")))?;
            let c: Coeff = parse_coeff(c)?;
            out.add_term(BasisKey::parse(k)?, field.normalize(c)?);
        }
        Ok(out)
    }
}

pub fn format_coeff(c: &Coeff) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub fn parse_coeff(s: &str) -> Result<Coeff> {
    let bad = || DiagramError::Parse(format!("bad coefficient `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let d: BigInt = d.parse().map_err(|_| bad())?;
            if d.is_zero() || d.is_negative() {
                return Err(bad());
            }
            Ok(Coeff::new(n.parse().map_err(|_| bad())?, d))
        }
        None => Ok(Coeff::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(i: i64) -> Coeff {
        Coeff::from_integer(i.into())
    }

    #[test]
    fn key_text_round_trip() {
        let k = BasisKey::new(vec![
            KeyChord { marked: 0, unmarked: 2, label: 1 },
            KeyChord { marked: 1, unmarked: 5, label: 2 },
            KeyChord { marked: 3, unmarked: 6, label: 1 },
            KeyChord { marked: 4, unmarked: 7, label: 1 },
        ]);
        assert_eq!(k.to_string(), "deg=5; 0-2:1,1-5:2,3-6:1,4-7:1");
        assert_eq!(BasisKey::parse(&k.to_string()).unwrap(), k);
        assert_eq!(BasisKey::empty().to_string(), "deg=0; ");
        assert_eq!(BasisKey::parse("deg=0;").unwrap(), BasisKey::empty());
        assert!(BasisKey::parse("deg=2; 0-1:1").is_err());
    }

    #[test]
    fn element_arithmetic_and_text() {
        let k = BasisKey::new(vec![KeyChord { marked: 0, unmarked: 1, label: 2 }]);
        let mut e = AlgebraElement::one(3, Field::Rational);
        e.add_term(k.clone(), int(-3));
        e.add_term(k.clone(), int(1));
        assert_eq!(e.coefficient(&k), int(-2));
        assert_eq!(e.to_text(), "1 deg=0; \n-2 deg=2; 0-1:2\n");
        assert_eq!(AlgebraElement::parse_text(&e.to_text(), 3, Field::Rational).unwrap(), e);
        e.add_term(k.clone(), int(2));
        assert_eq!(e.len(), 1);
        assert_eq!(e.project(0), AlgebraElement::one(0, Field::Rational));
    }

    #[test]
    fn gf2_reduction() {
        let k = BasisKey::new(vec![KeyChord { marked: 0, unmarked: 1, label: 1 }]);
        let mut e = AlgebraElement::zero(2, Field::Rational);
        e.add_term(k.clone(), int(3));
        let g = e.to_gf2().unwrap();
        assert_eq!(g.coefficient(&k), int(1));
        let mut f = AlgebraElement::zero(2, Field::Gf2);
        f.add_term(k.clone(), int(1));
        f.add_term(k, int(1));
        assert!(f.is_zero());
        let mut h = AlgebraElement::zero(2, Field::Rational);
        h.add_term(BasisKey::empty(), Coeff::new(1.into(), 2.into()));
        assert!(matches!(h.to_gf2(), Err(DiagramError::NotIntegral(_))));
    }
}
