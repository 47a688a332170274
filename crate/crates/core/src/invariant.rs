//! The subdiagram-sum invariant: the sum of all subdiagrams of an arrow
//! diagram, taken in the truncated quiver algebra.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::{AlgebraElement, Coeff, Field};
use crate::basis::{adapted_coordinate, add_class};
use crate::diagram::{ArrowDiagram, Role};
use crate::error::{DiagramError, Result};
use crate::moves::is_minimal;
use crate::par::{self, Execution};
use crate::quiver::{cluster_reduce_arrow, renumber, QuiverDiagram};

/// Largest diagram accepted; subsets are tracked as 64-bit masks.
pub const MAX_CHORDS: usize = 63;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantValue {
    diagram: ArrowDiagram,
    value: AlgebraElement,
}

impl InvariantValue {
    pub fn diagram(&self) -> &ArrowDiagram {
        &self.diagram
    }

    pub fn value(&self) -> &AlgebraElement {
        &self.value
    }

    pub fn truncation(&self) -> u32 {
        self.value.truncation()
    }

    pub fn field(&self) -> Field {
        self.value.field()
    }

    pub fn header(&self) -> String {
        format!("diagram={} n={} field={}", self.diagram.serialize(), self.truncation(), self.field())
    }

    pub fn parse(text: &str) -> Result<InvariantValue> {
        let bad = |m: &str| DiagramError::Parse(format!("invariant file: {m}"));
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| bad("missing header"))?;
        let rest = header.strip_prefix("diagram=").ok_or_else(|| bad("header must start with diagram="))?;
        let (code, rest) = rest.rsplit_once(" n=").ok_or_else(|| bad("missing n="))?;
        let (n, field) = rest.split_once(" field=").ok_or_else(|| bad("missing field="))?;
        let n: u32 = n.parse().map_err(|_| bad("bad n"))?;
        let field: Field = field.trim().parse()?;
        let body: String = lines.map(|l| format!("{l}\n")).collect();
        Ok(InvariantValue {
            diagram: ArrowDiagram::parse(code)?.canonical_form(),
            value: AlgebraElement::parse_text(&body, n, field)?,
        })
    }
}

impl fmt::Display for InvariantValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.header())?;
        f.write_str(&self.value.to_text())
    }
}

/// Masks of at most `max_size` chords out of `k`, by size and then value.
pub fn subset_masks(k: usize, max_size: usize) -> Vec<u64> {
    let mut out = Vec::new();
    for s in 0..=max_size.min(k) {
        if s == 0 {
            out.push(0);
            continue;
        }
        // Gosper's hack walks the masks of one popcount in increasing order.
        let mut m: u64 = (1u64 << s) - 1;
        let limit = 1u64 << k;
        while m < limit {
            out.push(m);
            let c = m & m.wrapping_neg();
            let r = m + c;
            m = (((r ^ m) >> 2) / c) | r;
        }
    }
    out
}

/// The reduced quiver diagram of the subdiagram on `mask`, or `None` if it
/// has an isolated chord and so vanishes.
pub fn reduced_subdiagram(d: &ArrowDiagram, mask: u64) -> Option<QuiverDiagram> {
    let mut chord = Vec::with_capacity(2 * mask.count_ones() as usize);
    let mut label = Vec::with_capacity(chord.capacity());
    for e in d.endpoints() {
        if mask >> e.chord & 1 == 1 {
            chord.push(e.chord as u8);
            label.push(u32::from(e.role == Role::Head));
        }
    }
    let q = QuiverDiagram::from_raw(renumber(&chord), label).reduce();
    if q.has_isolated_chord() {
        None
    } else {
        Some(q.canonical_form())
    }
}

/// Subdiagrams with at most `max_chords` chords as plain arrow diagrams,
/// keyed by canonical code, with multiplicities.
pub fn arrow_subdiagram_sum(d: &ArrowDiagram, max_chords: usize) -> BTreeMap<String, i64> {
    let mut out = BTreeMap::new();
    for m in subset_masks(d.chords(), max_chords) {
        *out.entry(d.restrict(m).serialize()).or_insert(0) += 1;
    }
    out
}

/// Multiplicity of every nonzero reduced subdiagram of degree at most `n`.
pub fn subdiagram_classes(d: &ArrowDiagram, n: u32, exec: Execution) -> BTreeMap<QuiverDiagram, i64> {
    let masks = subset_masks(d.chords(), n as usize);
    let counts = par::fold_reduce(
        &masks,
        exec,
        HashMap::<QuiverDiagram, i64>::new,
        |mut acc, &m| {
            if let Some(q) = reduced_subdiagram(d, m) {
                *acc.entry(q).or_insert(0) += 1;
            }
            acc
        },
        |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        },
    );
    counts.into_iter().collect()
}

pub fn diagram_invariant(d: &ArrowDiagram, n: u32, field: Field) -> Result<InvariantValue> {
    diagram_invariant_with(d, n, field, Execution::default())
}

pub fn diagram_invariant_with(d: &ArrowDiagram, n: u32, field: Field, exec: Execution) -> Result<InvariantValue> {
    if d.chords() > MAX_CHORDS {
        return Err(DiagramError::TooLarge(d.chords(), MAX_CHORDS));
    }
    let mut value = AlgebraElement::zero(n, field);
    for (q, count) in subdiagram_classes(d, n, exec) {
        add_class(&mut value, &q, &BigInt::from(count));
    }
    Ok(InvariantValue { diagram: d.canonical_form(), value })
}

/// True iff the invariant has a nonzero term besides the empty diagram.
pub fn nontriviality(d: &ArrowDiagram, n: u32) -> Result<bool> {
    Ok(!diagram_invariant(d, n, Field::Rational)?.value.nonempty_part().is_zero())
}

pub fn distinguishes(a: &ArrowDiagram, b: &ArrowDiagram, n: u32) -> Result<bool> {
    Ok(diagram_invariant(a, n, Field::Rational)?.value != diagram_invariant(b, n, Field::Rational)?.value)
}

/// Coefficient of `target` in the invariant of `d`, in a basis containing
/// `target` and marked at the zero-labelled endpoint of each target chord.
pub fn adapted_coefficient(d: &ArrowDiagram, target: &QuiverDiagram, n: u32, field: Field) -> Result<Coeff> {
    if target.is_empty() {
        return Ok(Coeff::one());
    }
    let target = target.canonical_form();
    let mut sum = Coeff::zero();
    for (q, count) in subdiagram_classes(d, n, Execution::default()) {
        if q.chord_ids() == target.chord_ids() {
            sum += adapted_coordinate(&q, &target, n, field)? * Coeff::from_integer(count.into());
        }
    }
    field.normalize(sum)
}

/// Coefficient of the cluster reduction of a minimal diagram in its own
/// invariant; one for every minimal diagram of a doodle.
pub fn leading_coefficient(d: &ArrowDiagram, n: u32, field: Field) -> Result<Coeff> {
    if !is_minimal(d) {
        return Err(DiagramError::NotMinimal);
    }
    if d.chords() > n as usize {
        return Err(DiagramError::TooManyChords { chords: d.chords(), degree: n as usize });
    }
    let r = cluster_reduce_arrow(d);
    if r.has_isolated_chord() {
        return Ok(Coeff::zero());
    }
    adapted_coefficient(d, &r, n, field)
}
