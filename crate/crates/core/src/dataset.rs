//! HELP-style NLI records → context records, deterministic context splits,
//! and context-disjoint NLI splits.
//!
//! All files are UTF-8 JSON Lines. Field names:
//!
//! * NLI record: `id`, `premise`, `hypothesis`, `gold_label`
//!   (`entailment`|`neutral`), `monotonicity`
//!   (`upward_monotone`|`downward_monotone`|`non_monotone`)
//! * context record: `context`, `monotonicity`
//! * reject record: `id`, `context` (both optional), `reason`

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::labeler::{label, label_pair, Annotations, EntailmentLabel, Monotonicity};
use crate::surface::{
    render_tokens, tokenize, ConceptSymbol, ContextSymbol, ContextTemplate, SurfaceError, Token,
    VARIABLE,
};
use crate::taxonomy::{ConceptRelation, TaxonomyGraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DatasetError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}:{line}: {message}")]
    Record {
        path: String,
        line: usize,
        message: String,
    },
}

/// Monotonicity field of an NLI record.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MonotonicityTag {
    UpwardMonotone,
    DownwardMonotone,
    NonMonotone,
}

impl MonotonicityTag {
    pub fn binary(self) -> Option<Monotonicity> {
        match self {
            Self::UpwardMonotone => Some(Monotonicity::Upward),
            Self::DownwardMonotone => Some(Monotonicity::Downward),
            Self::NonMonotone => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::UpwardMonotone => "upward_monotone",
            Self::DownwardMonotone => "downward_monotone",
            Self::NonMonotone => "non_monotone",
        }
    }
}

impl From<Monotonicity> for MonotonicityTag {
    fn from(m: Monotonicity) -> Self {
        match m {
            Monotonicity::Upward => Self::UpwardMonotone,
            Monotonicity::Downward => Self::DownwardMonotone,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HelpRecord {
    pub id: String,
    pub premise: String,
    pub hypothesis: String,
    pub gold_label: EntailmentLabel,
    pub monotonicity: MonotonicityTag,
}

impl HelpRecord {
    fn validate(&self) -> Result<(), String> {
        if self.premise.trim().is_empty() {
            return Err("empty premise".into());
        }
        if self.hypothesis.trim().is_empty() {
            return Err("empty hypothesis".into());
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextRecord {
    pub context: String,
    pub monotonicity: ContextMonotonicity,
}

/// Binary monotonicity of a context record (non-monotone is filtered out).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContextMonotonicity {
    UpwardMonotone,
    DownwardMonotone,
}

impl From<Monotonicity> for ContextMonotonicity {
    fn from(m: Monotonicity) -> Self {
        match m {
            Monotonicity::Upward => Self::UpwardMonotone,
            Monotonicity::Downward => Self::DownwardMonotone,
        }
    }
}

impl From<ContextMonotonicity> for Monotonicity {
    fn from(m: ContextMonotonicity) -> Self {
        match m {
            ContextMonotonicity::UpwardMonotone => Monotonicity::Upward,
            ContextMonotonicity::DownwardMonotone => Monotonicity::Downward,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RejectRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub context: Option<String>,
    pub reason: String,
}

pub fn read_jsonl<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<Vec<T>, DatasetError> {
    let path = path.as_ref();
    let shown = path.display().to_string();
    let file = File::open(path).map_err(|e| DatasetError::Io {
        path: shown.clone(),
        message: e.to_string(),
    })?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| DatasetError::Io {
            path: shown.clone(),
            message: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let record = serde_json::from_str(&line).map_err(|e| DatasetError::Record {
            path: shown.clone(),
            line: i + 1,
            message: e.to_string(),
        })?;
        out.push(record);
    }
    Ok(out)
}

pub fn write_jsonl<T: Serialize>(
    path: impl AsRef<Path>,
    records: impl IntoIterator<Item = T>,
) -> Result<(), DatasetError> {
    let path = path.as_ref();
    let io = |e: std::io::Error| DatasetError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    };
    let mut w = BufWriter::new(File::create(path).map_err(io)?);
    for r in records {
        serde_json::to_writer(&mut w, &r).map_err(|e| io(e.into()))?;
        w.write_all(b"\n").map_err(io)?;
    }
    w.flush().map_err(io)
}

/// Read NLI records, rejecting empty premises or hypotheses.
pub fn read_help_records(path: impl AsRef<Path>) -> Result<Vec<HelpRecord>, DatasetError> {
    let path = path.as_ref();
    let records: Vec<HelpRecord> = read_jsonl(path)?;
    for (i, r) in records.iter().enumerate() {
        r.validate().map_err(|message| DatasetError::Record {
            path: path.display().to_string(),
            line: i + 1,
            message: format!("record {:?}: {message}", r.id),
        })?;
    }
    Ok(records)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtractError {
    #[error("premise and hypothesis are identical")]
    IdenticalSentences,
    #[error("a differing span is empty")]
    EmptySpan,
    #[error("shared text contains the slot token \"{VARIABLE}\": {0}")]
    Template(SurfaceError),
    #[error("substituted phrase: {0}")]
    Concept(SurfaceError),
}

fn common_prefix(p: &[Token], h: &[Token]) -> usize {
    p.iter().zip(h).take_while(|(x, y)| x.text == y.text).count()
}

fn common_suffix(p: &[Token], h: &[Token]) -> usize {
    p.iter()
        .rev()
        .zip(h.iter().rev())
        .take_while(|(x, y)| x.text == y.text)
        .count()
}

/// Split a substitution pair into `(p, a, b)` with `premise = p(a)` and
/// `hypothesis = p(b)`.
///
/// The shared prefix is the longest common token prefix; the shared suffix
/// is the longest common token suffix, cut short so it does not overlap the
/// prefix. If one sentence's differing span is then empty (one phrase is an
/// affix of the other, as in `dogs with hats` / `dogs`), the prefix gives
/// back one token, or the suffix if there is no prefix. The template keeps
/// the premise's spacing.
pub fn extract_context(
    premise: &str,
    hypothesis: &str,
) -> Result<(ContextTemplate, ConceptSymbol, ConceptSymbol), ExtractError> {
    let p = tokenize(premise);
    let h = tokenize(hypothesis);
    if p.is_empty() || h.is_empty() {
        return Err(ExtractError::EmptySpan);
    }
    if p.len() == h.len() && common_prefix(&p, &h) == p.len() {
        return Err(ExtractError::IdenticalSentences);
    }
    let mut prefix = common_prefix(&p, &h);
    let mut suffix = common_suffix(&p, &h).min(p.len().min(h.len()) - prefix);
    if p.len() == prefix + suffix || h.len() == prefix + suffix {
        if prefix > 0 {
            prefix -= 1;
        } else if suffix > 0 {
            suffix -= 1;
        } else {
            return Err(ExtractError::EmptySpan);
        }
    }
    let a_span = &p[prefix..p.len() - suffix];
    let b_span = &h[prefix..h.len() - suffix];
    if a_span.is_empty() || b_span.is_empty() {
        return Err(ExtractError::EmptySpan);
    }

    let mut tokens: Vec<Token> = p[..prefix].to_vec();
    tokens.push(Token {
        text: VARIABLE.to_string(),
        glued: a_span[0].glued,
    });
    tokens.extend_from_slice(&p[p.len() - suffix..]);
    let template = ContextTemplate::from_tokens(tokens).map_err(ExtractError::Template)?;
    let a = ConceptSymbol::new(&render_tokens(a_span)).map_err(ExtractError::Concept)?;
    let b = ConceptSymbol::new(&render_tokens(b_span)).map_err(ExtractError::Concept)?;
    Ok((template, a, b))
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Conversion {
    pub contexts: Vec<ContextRecord>,
    pub rejects: Vec<RejectRecord>,
}

/// NLI records → deduplicated context records, in first-seen order.
///
/// Non-monotone records and failed extractions go to `rejects`. A context
/// seen again with the other monotonicity keeps its first label and the
/// conflicting record is also rejected.
pub fn convert_help(records: &[HelpRecord]) -> Conversion {
    let mut out = Conversion::default();
    let mut seen: BTreeMap<ContextSymbol, ContextMonotonicity> = BTreeMap::new();
    for r in records {
        let reject = |reason: String, context: Option<String>| RejectRecord {
            id: Some(r.id.clone()),
            context,
            reason,
        };
        let Some(mon) = r.monotonicity.binary() else {
            out.rejects.push(reject("non-monotone".into(), None));
            continue;
        };
        let template = match extract_context(&r.premise, &r.hypothesis) {
            Ok((t, _, _)) => t,
            Err(e) => {
                out.rejects.push(reject(format!("extraction: {e}"), None));
                continue;
            }
        };
        let mon = ContextMonotonicity::from(mon);
        match seen.entry(template.symbol().clone()) {
            Entry::Vacant(slot) => {
                slot.insert(mon);
                out.contexts.push(ContextRecord {
                    context: template.to_string(),
                    monotonicity: mon,
                });
            }
            Entry::Occupied(kept) if *kept.get() != mon => {
                let kept = Monotonicity::from(*kept.get());
                out.rejects.push(reject(
                    format!(
                        "conflicting monotonicity: kept {}",
                        MonotonicityTag::from(kept).as_str()
                    ),
                    Some(template.to_string()),
                ));
            }
            Entry::Occupied(_) => {}
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Partition {
    Train,
    Dev,
    Test,
}

impl Partition {
    pub const ALL: [Partition; 3] = [Partition::Train, Partition::Dev, Partition::Test];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Train => "train",
            Self::Dev => "dev",
            Self::Test => "test",
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Train:dev:test weights, written `50:20:30`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SplitRatio {
    pub train: u32,
    pub dev: u32,
    pub test: u32,
}

impl Default for SplitRatio {
    fn default() -> Self {
        Self {
            train: 50,
            dev: 20,
            test: 30,
        }
    }
}

impl FromStr for SplitRatio {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<u32> = s
            .split(':')
            .map(|p| p.trim().parse::<u32>())
            .collect::<Result<_, _>>()
            .map_err(|e| format!("bad ratio {s:?}: {e}"))?;
        match parts.as_slice() {
            &[train, dev, test] if train + dev + test > 0 => Ok(Self { train, dev, test }),
            _ => Err(format!("bad ratio {s:?}: expected three weights like 50:20:30")),
        }
    }
}

impl fmt::Display for SplitRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.train, self.dev, self.test)
    }
}

impl SplitRatio {
    fn weights(&self) -> [u64; 3] {
        [self.train as u64, self.dev as u64, self.test as u64]
    }

    /// Partition sizes for `n` items by largest remainder. Leftover items go
    /// to the largest fractional remainders, ties to the larger weight, then
    /// to train before test before dev.
    pub fn sizes(&self, n: usize) -> [usize; 3] {
        let w = self.weights();
        let total: u64 = w.iter().sum();
        let n = n as u64;
        let mut sizes = [0usize; 3];
        let mut remainders = [0u64; 3];
        for i in 0..3 {
            sizes[i] = (n * w[i] / total) as usize;
            remainders[i] = n * w[i] % total;
        }
        let mut order = [0usize, 2, 1];
        order.sort_by(|&x, &y| {
            remainders[y]
                .cmp(&remainders[x])
                .then(w[y].cmp(&w[x]))
        });
        let assigned: usize = sizes.iter().sum();
        for &i in order.iter().take(n as usize - assigned) {
            sizes[i] += 1;
        }
        sizes
    }
}

/// Context id → partition.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SplitAssignment {
    map: BTreeMap<ContextSymbol, (Partition, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssignmentRecord {
    pub context: String,
    pub partition: Partition,
}

impl SplitAssignment {
    pub fn partition_of(&self, id: &ContextSymbol) -> Option<Partition> {
        self.map.get(id).map(|(p, _)| *p)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn sizes(&self) -> [usize; 3] {
        let mut sizes = [0; 3];
        for (p, _) in self.map.values() {
            sizes[*p as usize] += 1;
        }
        sizes
    }

    /// Context strings assigned to `part`, sorted by id.
    pub fn members(&self, part: Partition) -> impl Iterator<Item = &str> {
        self.map
            .values()
            .filter(move |(p, _)| *p == part)
            .map(|(_, s)| s.as_str())
    }

    pub fn records(&self) -> impl Iterator<Item = AssignmentRecord> + '_ {
        self.map.values().map(|(p, s)| AssignmentRecord {
            context: s.clone(),
            partition: *p,
        })
    }
}

/// Seeded split of unique contexts.
///
/// Contexts are sorted by id, shuffled with ChaCha8 seeded by
/// `seed_from_u64(seed)`, and cut into contiguous train/dev/test runs.
/// Duplicate ids are collapsed first (the first surface string is kept), so
/// the assignment depends only on the set of contexts and the seed.
pub fn split_contexts(contexts: &[ContextRecord], seed: u64, ratio: SplitRatio) -> SplitAssignment {
    let mut unique: BTreeMap<ContextSymbol, String> = BTreeMap::new();
    for r in contexts {
        // Unparseable strings still get an id, so nothing silently vanishes.
        let id = ContextTemplate::parse(&r.context)
            .map(|t| t.symbol().clone())
            .or_else(|_| ContextSymbol::new(&r.context));
        if let Ok(id) = id {
            unique.entry(id).or_insert_with(|| r.context.clone());
        }
    }
    let mut ids: Vec<(ContextSymbol, String)> = unique.into_iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ids.shuffle(&mut rng);

    let [train, dev, _] = ratio.sizes(ids.len());
    let map = ids
        .into_iter()
        .enumerate()
        .map(|(i, (id, text))| {
            let part = if i < train {
                Partition::Train
            } else if i < train + dev {
                Partition::Dev
            } else {
                Partition::Test
            };
            (id, (part, text))
        })
        .collect();
    SplitAssignment { map }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NliSplit {
    pub train: Vec<HelpRecord>,
    pub dev: Vec<HelpRecord>,
    pub test: Vec<HelpRecord>,
    pub rejects: Vec<RejectRecord>,
}

impl NliSplit {
    pub fn part(&self, p: Partition) -> &[HelpRecord] {
        match p {
            Partition::Train => &self.train,
            Partition::Dev => &self.dev,
            Partition::Test => &self.test,
        }
    }
}

/// Route each NLI record to its context's partition. Non-monotone records,
/// failed extractions and unassigned contexts are rejected.
pub fn split_nli(records: &[HelpRecord], assignment: &SplitAssignment) -> NliSplit {
    let mut out = NliSplit::default();
    for r in records {
        let reject = |reason: String, context: Option<String>| RejectRecord {
            id: Some(r.id.clone()),
            context,
            reason,
        };
        if r.monotonicity == MonotonicityTag::NonMonotone {
            out.rejects.push(reject("non-monotone".into(), None));
            continue;
        }
        let template = match extract_context(&r.premise, &r.hypothesis) {
            Ok((t, _, _)) => t,
            Err(e) => {
                out.rejects.push(reject(format!("extraction: {e}"), None));
                continue;
            }
        };
        match assignment.partition_of(template.symbol()) {
            Some(Partition::Train) => out.train.push(r.clone()),
            Some(Partition::Dev) => out.dev.push(r.clone()),
            Some(Partition::Test) => out.test.push(r.clone()),
            None => out.rejects.push(reject(
                "context not in assignment".into(),
                Some(template.to_string()),
            )),
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleOutcome {
    Labeled {
        label: EntailmentLabel,
        relation: ConceptRelation,
        agreement: bool,
    },
    Skipped(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleRow {
    pub record: HelpRecord,
    pub outcome: OracleOutcome,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OracleSummary {
    pub labeled: usize,
    pub agreed: usize,
    pub unknown_relation: usize,
    pub skipped: usize,
}

/// Label every record symbolically, using its own monotonicity field as the
/// context annotation, and compare with its gold label.
pub fn relabel_with_oracle(
    records: &[HelpRecord],
    g: &TaxonomyGraph,
) -> (Vec<OracleRow>, OracleSummary) {
    let mut summary = OracleSummary::default();
    let rows = records
        .iter()
        .map(|r| {
            let outcome = match r.monotonicity.binary() {
                None => OracleOutcome::Skipped("non-monotone".into()),
                Some(mon) => {
                    let annotations: Annotations = extract_context(&r.premise, &r.hypothesis)
                        .map(|(t, _, _)| (t.symbol().clone(), mon))
                        .into_iter()
                        .collect();
                    match label_pair(&r.premise, &r.hypothesis, g, &annotations) {
                        Ok(out) => OracleOutcome::Labeled {
                            label: out.label,
                            relation: out.relation,
                            agreement: out.label == r.gold_label,
                        },
                        Err(e) => OracleOutcome::Skipped(e.to_string()),
                    }
                }
            };
            match &outcome {
                OracleOutcome::Labeled {
                    relation,
                    agreement,
                    ..
                } => {
                    summary.labeled += 1;
                    summary.agreed += usize::from(*agreement);
                    summary.unknown_relation += usize::from(*relation == ConceptRelation::Unknown);
                }
                OracleOutcome::Skipped(_) => summary.skipped += 1,
            }
            OracleRow {
                record: r.clone(),
                outcome,
            }
        })
        .collect();
    (rows, summary)
}

/// A clean synthetic NLI set: for every template and every taxonomy edge
/// `a ⊑ b`, both orderings `(p(a), p(b))` and `(p(b), p(a))`, gold-labeled
/// by the labeling matrix.
pub fn synthetic_records(
    templates: &[(ContextTemplate, Monotonicity)],
    g: &TaxonomyGraph,
) -> Vec<HelpRecord> {
    let mut out = Vec::new();
    for (t, mon) in templates {
        for (a, b) in g.edges() {
            for (x, y) in [(a, b), (b, a)] {
                out.push(HelpRecord {
                    id: format!("synthetic-{}", out.len()),
                    premise: t.substitute(x),
                    hypothesis: t.substitute(y),
                    gold_label: label(*mon, g.relate(x, y)),
                    monotonicity: (*mon).into(),
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> ConceptSymbol {
        ConceptSymbol::new(s).unwrap()
    }

    fn rec(id: &str, premise: &str, hypothesis: &str, mon: MonotonicityTag) -> HelpRecord {
        HelpRecord {
            id: id.into(),
            premise: premise.into(),
            hypothesis: hypothesis.into(),
            gold_label: EntailmentLabel::Entailment,
            monotonicity: mon,
        }
    }

    #[test]
    fn extracts_single_substitution() {
        let (t, a, b) =
            extract_context("There were no dogs today .", "There were no animals today .").unwrap();
        assert_eq!(t.to_string(), "There were no x today .");
        assert_eq!((a, b), (c("dogs"), c("animals")));
    }

    #[test]
    fn identical_sentences() {
        assert_eq!(
            extract_context("Tom slept .", "Tom slept ."),
            Err(ExtractError::IdenticalSentences)
        );
        assert_eq!(
            extract_context("Tom slept.", "Tom slept ."),
            Err(ExtractError::IdenticalSentences)
        );
    }

    #[test]
    fn affix_phrase_gives_back_a_prefix_token() {
        let (t, a, b) = extract_context("Some dogs with hats ran .", "Some dogs ran .").unwrap();
        assert_eq!(t.to_string(), "Some x ran .");
        assert_eq!((a, b), (c("dogs with hats"), c("dogs")));
        let (t, a, b) = extract_context("dogs ran", "big dogs ran").unwrap();
        assert_eq!(t.to_string(), "x ran");
        assert_eq!((a, b), (c("dogs"), c("big dogs")));
    }

    #[test]
    fn empty_inputs() {
        assert_eq!(extract_context("", "dogs"), Err(ExtractError::EmptySpan));
    }

    #[test]
    fn slot_token_in_shared_text() {
        assert!(matches!(
            extract_context("x saw dogs", "x saw cats"),
            Err(ExtractError::Template(_))
        ));
    }

    #[test]
    fn keeps_premise_spacing() {
        let (t, _, _) =
            extract_context("There were no dogs today.", "There were no animals today.").unwrap();
        assert_eq!(t.to_string(), "There were no x today.");
    }

    #[test]
    fn convert_filters_and_dedups() {
        use MonotonicityTag::*;
        let records = vec![
            rec("1", "There is no time for hesitation .", "There is no time for doubt .", DownwardMonotone),
            rec("2", "Some dogs ran .", "Some cats ran .", NonMonotone),
            rec("3", "There is no time for tea .", "There is no time for drinks .", DownwardMonotone),
            rec("4", "There is no time for tea .", "There is no time for cake .", UpwardMonotone),
            rec("5", "Tom slept .", "Tom slept .", UpwardMonotone),
        ];
        let out = convert_help(&records);
        assert_eq!(
            out.contexts,
            vec![ContextRecord {
                context: "There is no time for x .".into(),
                monotonicity: ContextMonotonicity::DownwardMonotone,
            }]
        );
        let reasons: Vec<(&str, &str)> = out
            .rejects
            .iter()
            .map(|r| (r.id.as_deref().unwrap(), r.reason.as_str()))
            .collect();
        assert_eq!(reasons[0], ("2", "non-monotone"));
        assert_eq!(reasons[1], ("4", "conflicting monotonicity: kept downward_monotone"));
        assert_eq!(reasons[2].0, "5");
        assert!(reasons[2].1.starts_with("extraction"));
    }

    #[test]
    fn ratio_sizes() {
        let r = SplitRatio::default();
        assert_eq!(r.sizes(10), [5, 2, 3]);
        assert_eq!(r.sizes(1), [1, 0, 0]);
        assert_eq!(r.sizes(0), [0, 0, 0]);
        assert_eq!(r.sizes(2), [1, 0, 1]);
        assert_eq!(r.sizes(3), [1, 1, 1]);
        assert_eq!(r.sizes(7), [4, 1, 2]);
        assert_eq!("50:20:30".parse::<SplitRatio>().unwrap(), r);
        assert!("50:50".parse::<SplitRatio>().is_err());
        assert!("0:0:0".parse::<SplitRatio>().is_err());
    }

    fn contexts(n: usize) -> Vec<ContextRecord> {
        (0..n)
            .map(|i| ContextRecord {
                context: format!("Context number {i} has x ."),
                monotonicity: ContextMonotonicity::UpwardMonotone,
            })
            .collect()
    }

    #[test]
    fn split_is_order_invariant() {
        let forward = contexts(100);
        let mut backward = forward.clone();
        backward.reverse();
        let a = split_contexts(&forward, 7, SplitRatio::default());
        let b = split_contexts(&backward, 7, SplitRatio::default());
        assert_eq!(a, b);
        assert_eq!(a.sizes(), [50, 20, 30]);
        assert_ne!(a, split_contexts(&forward, 8, SplitRatio::default()));
    }

    #[test]
    fn single_context_goes_to_train() {
        let a = split_contexts(&contexts(1), 0, SplitRatio::default());
        assert_eq!(a.sizes(), [1, 0, 0]);
    }

    #[test]
    fn nli_split_routes_by_context() {
        use MonotonicityTag::*;
        let records = vec![
            rec("1", "There were no dogs today .", "There were no animals today .", DownwardMonotone),
            rec("2", "There were no cats today .", "There were no pets today .", DownwardMonotone),
            rec("3", "Some dogs ran .", "Some cats ran .", NonMonotone),
        ];
        let conv = convert_help(&records);
        let assignment = split_contexts(&conv.contexts, 3, SplitRatio { train: 0, dev: 1, test: 0 });
        let split = split_nli(&records, &assignment);
        assert_eq!(split.dev.len(), 2);
        assert!(split.train.is_empty() && split.test.is_empty());
        assert_eq!(split.rejects.len(), 1);
        assert_eq!(split.rejects[0].reason, "non-monotone");

        let empty = split_nli(&[], &assignment);
        assert_eq!(empty, NliSplit::default());
    }

    #[test]
    fn oracle_relabeling() {
        use MonotonicityTag::*;
        let g = TaxonomyGraph::parse("apples\tfruit\n").unwrap();
        let mut up = rec("1", "I ate some apples .", "I ate some fruit .", UpwardMonotone);
        up.gold_label = EntailmentLabel::Entailment;
        let mut down = rec("2", "I ate no apples .", "I ate no fruit .", DownwardMonotone);
        down.gold_label = EntailmentLabel::Neutral;
        let unknown = rec("3", "I ate some kiwis .", "I ate some fruit .", UpwardMonotone);
        let (rows, summary) = relabel_with_oracle(&[up, down, unknown], &g);
        assert!(matches!(rows[0].outcome, OracleOutcome::Labeled { agreement: true, .. }));
        assert!(matches!(
            rows[1].outcome,
            OracleOutcome::Labeled { label: EntailmentLabel::Neutral, agreement: true, .. }
        ));
        assert!(matches!(
            rows[2].outcome,
            OracleOutcome::Labeled {
                label: EntailmentLabel::Neutral,
                relation: ConceptRelation::Unknown,
                ..
            }
        ));
        assert_eq!(
            summary,
            OracleSummary { labeled: 3, agreed: 2, unknown_relation: 1, skipped: 0 }
        );
    }

    #[test]
    fn synthetic_set_is_balanced() {
        let g = TaxonomyGraph::parse("apples\tfruit\ndogs\tanimals\n").unwrap();
        let templates = vec![
            (ContextTemplate::parse("I ate some x .").unwrap(), Monotonicity::Upward),
            (ContextTemplate::parse("There were no x today.").unwrap(), Monotonicity::Downward),
        ];
        let set = synthetic_records(&templates, &g);
        assert_eq!(set.len(), 8);
        let entailments = set
            .iter()
            .filter(|r| r.gold_label == EntailmentLabel::Entailment)
            .count();
        assert_eq!(entailments, 4);
        assert_eq!(set[0].premise, "I ate some apples .");
    }
}
