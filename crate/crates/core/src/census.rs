//! Exhaustive enumeration of arrow diagrams and the census of doodles they
//! represent.
//!
//! Growth: there are `(2k-1)!! * 2^(k-1)` labelled candidates with a tail at
//! position 0, about 0.33M for k = 6, 8.6M for k = 7 and 260M for k = 8.
//! The realizable enumeration first discards chord matchings that break the
//! even-interlacing condition; on one core k = 8 takes seconds and k = 9
//! about a minute.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{Coeff, Field};
use crate::basis::frame;
use crate::diagram::{ArrowDiagram, Endpoint, Role};
use crate::error::DiagramError;
use crate::invariant::{adapted_coefficient, diagram_invariant, leading_coefficient, InvariantValue};
use crate::moves::minimize;
use crate::par::{self, Execution};
use crate::quiver::{cluster_reduce_arrow, QuiverDiagram};
use crate::surface::is_realizable;

/// Largest chord count enumerated without an explicit override.
pub const GOVERNOR_KMAX: usize = 6;

#[derive(Debug, Error)]
pub enum CensusError {
    #[error("kmax = {0} exceeds {GOVERNOR_KMAX}; pass the override to enumerate anyway")]
    Governor(usize),
    #[error("budget of {budget} candidate diagrams exhausted while enumerating k = {k}")]
    Budget { budget: u64, k: usize, partial: Box<Census> },
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("census file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Chord matchings on `2k` points in which position 0 opens chord 0 and chords
/// are numbered by first appearance, given as the partner of each position.
pub fn matchings(k: usize) -> Vec<Vec<u8>> {
    fn rec(partner: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        let Some(i) = partner.iter().position(|&p| p == u8::MAX) else {
            out.push(partner.clone());
            return;
        };
        for j in i + 1..partner.len() {
            if partner[j] == u8::MAX {
                partner[i] = j as u8;
                partner[j] = i as u8;
                rec(partner, out);
                partner[i] = u8::MAX;
                partner[j] = u8::MAX;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut vec![u8::MAX; 2 * k], &mut out);
    out
}

/// Every chord crosses an even number of chords: necessary for a curve.
pub fn even_interlacing(partner: &[u8]) -> bool {
    let n = partner.len();
    (0..n).all(|i| {
        let j = partner[i] as usize;
        if j < i {
            return true;
        }
        let crossing = (i + 1..j).filter(|&x| {
            let p = partner[x] as usize;
            p < i || p > j
        });
        crossing.count() % 2 == 0
    })
}

/// Canonical diagrams over one matching: chord 0 has its tail at position 0,
/// all other directions vary.
fn oriented(partner: &[u8]) -> Vec<ArrowDiagram> {
    let n = partner.len();
    let k = n / 2;
    let mut chord_of = vec![0usize; n];
    let mut next = 0;
    for i in 0..n {
        let j = partner[i] as usize;
        if j > i {
            chord_of[i] = next;
            chord_of[j] = next;
            next += 1;
        }
    }
    let mut out = Vec::new();
    for bits in 0..(1u32 << k.saturating_sub(1)) {
        let ends: Vec<Endpoint> = (0..n)
            .map(|i| {
                let c = chord_of[i];
                let opener = (partner[i] as usize) > i;
                let flipped = c > 0 && bits >> (c - 1) & 1 == 1;
                Endpoint::new(c, if opener != flipped { Role::Tail } else { Role::Head })
            })
            .collect();
        let d = ArrowDiagram::from_valid(ends);
        if d.is_canonical() {
            out.push(d);
        }
    }
    out
}

/// All arrow diagrams with exactly `k` chords, one per rotation class, in
/// canonical form and sorted by code.
pub fn enumerate_arrow_diagrams(k: usize, exec: Execution) -> Vec<ArrowDiagram> {
    if k == 0 {
        return vec![ArrowDiagram::empty()];
    }
    sorted(par::map(&matchings(k), exec, |m| oriented(m)).into_iter().flatten().collect())
}

/// The realizable diagrams among [`enumerate_arrow_diagrams`].
pub fn enumerate_realizable(k: usize, exec: Execution) -> Vec<ArrowDiagram> {
    if k == 0 {
        return vec![ArrowDiagram::empty()];
    }
    let ms: Vec<Vec<u8>> = matchings(k).into_iter().filter(|m| even_interlacing(m)).collect();
    let found = par::map(&ms, exec, |m| oriented(m).into_iter().filter(is_realizable).collect::<Vec<_>>());
    sorted(found.into_iter().flatten().collect())
}

fn sorted(mut v: Vec<ArrowDiagram>) -> Vec<ArrowDiagram> {
    v.sort_by_cached_key(|d| d.positioned_code());
    v
}

/// One equivalence class of doodles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusRecord {
    pub class_id: usize,
    pub minimal: ArrowDiagram,
    pub crossings: usize,
    pub reps: u64,
    pub invariant: InvariantValue,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Census {
    pub kmax: usize,
    pub truncation: u32,
    pub records: Vec<CensusRecord>,
}

#[derive(Clone, Debug)]
pub struct CensusOptions {
    pub kmax: usize,
    /// Invariants are stored at truncation `kmax + n_extra`.
    pub n_extra: u32,
    pub field: Field,
    pub allow_large: bool,
    /// Upper bound on candidate diagrams examined, if any.
    pub budget: Option<u64>,
    pub exec: Execution,
}

impl CensusOptions {
    pub fn new(kmax: usize) -> Self {
        CensusOptions {
            kmax,
            n_extra: 1,
            field: Field::Rational,
            allow_large: false,
            budget: None,
            exec: Execution::default(),
        }
    }
}

fn candidates(k: usize) -> u64 {
    (1..=k as u64).map(|i| 2 * i - 1).product::<u64>() << k.saturating_sub(1)
}

pub fn build_census(opts: &CensusOptions) -> Result<Census, CensusError> {
    if opts.kmax > GOVERNOR_KMAX && !opts.allow_large {
        return Err(CensusError::Governor(opts.kmax));
    }
    let truncation = opts.kmax as u32 + opts.n_extra;
    let mut classes: BTreeMap<(usize, String), (ArrowDiagram, u64)> = BTreeMap::new();
    let mut spent = 0u64;
    for k in 0..=opts.kmax {
        spent += candidates(k);
        if let Some(budget) = opts.budget.filter(|&b| spent > b) {
            let partial = finish(classes, opts.kmax.min(k.saturating_sub(1)), truncation, opts)?;
            return Err(CensusError::Budget { budget, k, partial: Box::new(partial) });
        }
        let minimal = par::map(&enumerate_realizable(k, opts.exec), opts.exec, |d| minimize(d).0);
        for m in minimal {
            let key = (m.chords(), m.positioned_code());
            classes.entry(key).or_insert((m, 0)).1 += 1;
        }
    }
    finish(classes, opts.kmax, truncation, opts)
}

fn finish(
    classes: BTreeMap<(usize, String), (ArrowDiagram, u64)>,
    kmax: usize,
    truncation: u32,
    opts: &CensusOptions,
) -> Result<Census, CensusError> {
    let list: Vec<(ArrowDiagram, u64)> = classes.into_values().collect();
    let invariants = par::map(&list, opts.exec, |(m, _)| diagram_invariant(m, truncation, opts.field));
    let mut records = Vec::new();
    for (class_id, ((minimal, reps), inv)) in list.into_iter().zip(invariants).enumerate() {
        records.push(CensusRecord { class_id, crossings: minimal.chords(), minimal, reps, invariant: inv? });
    }
    Ok(Census { kmax, truncation, records })
}

fn sidecar_name(class_id: usize) -> String {
    format!("inv/class_{class_id}.txt")
}

impl Census {
    pub fn to_text(&self) -> String {
        let header = format!("# kmax={} truncation={}\n", self.kmax, self.truncation);
        header
            + &self
                .records
                .iter()
                .map(|r| {
                    format!(
                        "class={} crossings={} code=\"{}\" reps={} invariant={}\n",
                        r.class_id,
                        r.crossings,
                        r.minimal.serialize(),
                        r.reps,
                        sidecar_name(r.class_id)
                    )
                })
                .collect::<String>()
    }

    /// Writes `census.txt` and one invariant file per class under `dir`.
    pub fn write(&self, dir: &Path) -> Result<PathBuf, CensusError> {
        fs::create_dir_all(dir.join("inv"))?;
        for r in &self.records {
            fs::write(dir.join(sidecar_name(r.class_id)), r.invariant.to_string())?;
        }
        let path = dir.join("census.txt");
        fs::write(&path, self.to_text())?;
        Ok(path)
    }

    pub fn read(dir: &Path) -> Result<Census, CensusError> {
        let text = fs::read_to_string(dir.join("census.txt"))?;
        let mut records = Vec::new();
        let mut header_kmax = None;
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            if let Some(comment) = line.trim().strip_prefix('#') {
                header_kmax = comment
                    .split_whitespace()
                    .find_map(|w| w.strip_prefix("kmax="))
                    .and_then(|v| v.parse::<usize>().ok())
                    .or(header_kmax);
                continue;
            }
            let field = |name: &str| -> Result<&str, CensusError> {
                let start = line
                    .find(&format!("{name}="))
                    .ok_or_else(|| CensusError::Format(format!("missing {name} in `{line}`")))?
                    + name.len()
                    + 1;
                let rest = &line[start..];
                Ok(if let Some(stripped) = rest.strip_prefix('"') {
                    &stripped[..stripped.find('"').unwrap_or(stripped.len())]
                } else {
                    rest.split_whitespace().next().unwrap_or("")
                })
            };
            let num = |name: &str| -> Result<u64, CensusError> {
                field(name)?.parse().map_err(|_| CensusError::Format(format!("bad {name} in `{line}`")))
            };
            let invariant = InvariantValue::parse(&fs::read_to_string(dir.join(field("invariant")?))?)?;
            records.push(CensusRecord {
                class_id: num("class")? as usize,
                crossings: num("crossings")? as usize,
                minimal: ArrowDiagram::parse(field("code")?)?.canonical_form(),
                reps: num("reps")?,
                invariant,
            });
        }
        let kmax = header_kmax.unwrap_or_else(|| records.iter().map(|r| r.crossings).max().unwrap_or(0));
        let truncation = records.first().map(|r| r.invariant.truncation()).unwrap_or(kmax as u32 + 1);
        Ok(Census { kmax, truncation, records })
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub tested: usize,
    pub skipped: usize,
    pub counterexamples: Vec<String>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct VerifyReport {
    pub field: String,
    pub classes: usize,
    pub truncation: u32,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn check(name: &str, tested: usize, counterexamples: Vec<String>) -> CheckResult {
    CheckResult { name: name.into(), passed: counterexamples.is_empty(), tested, skipped: 0, counterexamples }
}

/// Checks the completeness statements on a census: nontriviality at the
/// crossing number, pairwise distinctness at the census truncation, leading
/// coefficient one, and the direction-reversal witness for classes sharing a
/// chord diagram.
pub fn verify_theorems(census: &Census, field: Field, exec: Execution) -> Result<VerifyReport, CensusError> {
    let n = census.truncation;
    let recs = &census.records;
    let invariants: Vec<InvariantValue> = if recs.iter().all(|r| r.invariant.field() == field) {
        recs.iter().map(|r| r.invariant.clone()).collect()
    } else {
        par::map(recs, exec, |r| diagram_invariant(&r.minimal, n, field)).into_iter().collect::<Result<_, _>>()?
    };

    let nontrivial: Vec<&CensusRecord> = recs.iter().filter(|r| r.crossings > 0).collect();
    let bad: Vec<Option<String>> =
        par::map(&nontrivial, exec, |r| match diagram_invariant(&r.minimal, r.crossings as u32, field) {
            Ok(v) if !v.value().nonempty_part().is_zero() => None,
            Ok(_) => Some(format!("class {} ({}) vanishes at n={}", r.class_id, r.minimal, r.crossings)),
            Err(e) => Some(format!("class {}: {e}", r.class_id)),
        });
    let nontriv = check("nontriviality", nontrivial.len(), bad.into_iter().flatten().collect());

    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    let mut dups = Vec::new();
    for (r, inv) in recs.iter().zip(&invariants) {
        if let Some(prev) = seen.insert(inv.value().to_text(), r.class_id) {
            dups.push(format!("classes {prev} and {} share an invariant at n={n}", r.class_id));
        }
    }
    let distinct = check("distinctness", recs.len(), dups);

    let bad: Vec<Option<String>> = par::map(recs, exec, |r| match leading_coefficient(&r.minimal, n, field) {
        Ok(c) if c == Coeff::one() => None,
        Ok(c) => Some(format!("class {} ({}): leading coefficient {c}", r.class_id, r.minimal)),
        Err(e) => Some(format!("class {}: {e}", r.class_id)),
    });
    let leading = check("leading_coefficient", recs.len(), bad.into_iter().flatten().collect());

    let minimal: Vec<ArrowDiagram> = recs.iter().map(|r| r.minimal.clone()).collect();
    let w = reversal_witnesses(&minimal, field)?;
    let witness = CheckResult { skipped: w.skipped, ..check("reversal_witness", w.tested, w.failures) };

    let checks = vec![nontriv, distinct, leading, witness];
    Ok(VerifyReport {
        field: field.to_string(),
        classes: recs.len(),
        truncation: n,
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

/// For minimal diagrams `X1`, `X2` without adjacent chords over the same
/// chord diagram that differ in the direction of chord `c`, the diagram `W`
/// obtained from `X1` by raising the head label of `c` has coefficient 0 in
/// the invariant of `X1` and +-1 in that of `X2`, at truncation
/// `crossings + 1`.
///
/// When the chord diagram has rotational symmetry the coefficient of `W`
/// collects one contribution per symmetric frame, so the statement is only
/// checked on asymmetric chord diagrams; symmetric pairs are counted as
/// skipped.
pub fn reversal_witnesses(diagrams: &[ArrowDiagram], field: Field) -> Result<WitnessSummary, DiagramError> {
    let mut out = WitnessSummary::default();
    for (i, a) in diagrams.iter().enumerate() {
        let qa = QuiverDiagram::from_arrow(a);
        if a.is_empty() || cluster_reduce_arrow(a) != qa {
            continue;
        }
        for (j, b) in diagrams.iter().enumerate() {
            if i == j || a.chords() != b.chords() {
                continue;
            }
            let Some((c, _)) = aligned_reversal(a, b) else {
                continue;
            };
            if frame(qa.canonical_form().chord_ids()).is_symmetric() {
                out.skipped += 1;
                continue;
            }
            let mut labels = qa.labels().to_vec();
            labels[a.chord_positions()[c][1]] += 1;
            let w = QuiverDiagram::from_raw(qa.chord_ids().to_vec(), labels);
            let n = a.chords() as u32 + 1;
            let ca = adapted_coefficient(a, &w, n, field)?;
            let cb = adapted_coefficient(b, &w, n, field)?;
            out.tested += 1;
            let unit = cb == Coeff::one() || cb == -Coeff::one();
            if !ca.is_zero() || !unit {
                out.failures.push(format!("W from {a} against {b}: coefficients {ca} and {cb}"));
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WitnessSummary {
    pub tested: usize,
    pub skipped: usize,
    pub failures: Vec<String>,
}

/// A rotation of `b` with the same chord diagram as `a`, returning the first
/// chord of `a` whose direction differs.
fn aligned_reversal(a: &ArrowDiagram, b: &ArrowDiagram) -> Option<(usize, usize)> {
    let ua: Vec<usize> = a.endpoints().iter().map(|e| e.chord).collect();
    for r in 0..b.len() {
        let br = b.rotated(r);
        let ub: Vec<usize> = br.endpoints().iter().map(|e| e.chord).collect();
        if ub != ua {
            continue;
        }
        let pa = a.chord_positions();
        let pb = br.chord_positions();
        if let Some(c) = (0..pa.len()).find(|&c| pa[c] != pb[c]) {
            return Some((c, r));
        }
    }
    None
}
