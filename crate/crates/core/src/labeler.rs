//! Entailment labels for substitution pairs `(p(a), p(b))` from the
//! monotonicity of `p` and the relation between `a` and `b`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::{extract_context, ExtractError};
use crate::logic::{entails, Theory};
use crate::surface::{
    read_file, ConceptSymbol, ContextSymbol, ContextTemplate, Sentence, SurfaceError,
};
use crate::taxonomy::{ConceptRelation, TaxonomyGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntailmentLabel {
    Entailment,
    Neutral,
}

impl EntailmentLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Entailment => "entailment",
            Self::Neutral => "neutral",
        }
    }
}

impl fmt::Display for EntailmentLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EntailmentLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "entailment" => Ok(Self::Entailment),
            "neutral" => Ok(Self::Neutral),
            other => Err(format!("unknown label {other:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Monotonicity {
    Upward,
    Downward,
}

impl Monotonicity {
    pub fn flipped(self) -> Self {
        match self {
            Self::Upward => Self::Downward,
            Self::Downward => Self::Upward,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Upward => "up",
            Self::Downward => "down",
        }
    }
}

impl FromStr for Monotonicity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "up" | "upward" | "upward_monotone" => Ok(Self::Upward),
            "down" | "downward" | "downward_monotone" => Ok(Self::Downward),
            other => Err(format!("unknown monotonicity {other:?}")),
        }
    }
}

/// The labeling matrix.
///
/// | mon  | ≡ | ⊑ | ⊒ | ? |
/// |------|---|---|---|---|
/// | up   | E | E | N | N |
/// | down | E | N | E | N |
pub fn label(mon: Monotonicity, rel: ConceptRelation) -> EntailmentLabel {
    use ConceptRelation::*;
    use EntailmentLabel::*;
    match (mon, rel) {
        (_, Equivalent) => Entailment,
        (Monotonicity::Upward, ForwardContainment) => Entailment,
        (Monotonicity::Downward, ReverseContainment) => Entailment,
        (Monotonicity::Upward, ReverseContainment) => Neutral,
        (Monotonicity::Downward, ForwardContainment) => Neutral,
        (_, Unknown) => Neutral,
    }
}

#[derive(Debug, Error)]
pub enum LabelError {
    #[error(transparent)]
    Extraction(#[from] ExtractError),
    #[error("context {0:?} has no monotonicity annotation")]
    UnannotatedContext(String),
}

/// The context and phrases a sentence pair was decomposed into.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Substitution {
    pub template: ContextTemplate,
    pub a: ConceptSymbol,
    pub b: ConceptSymbol,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairLabel {
    pub label: EntailmentLabel,
    pub relation: ConceptRelation,
    /// `None` when premise and hypothesis are token-identical.
    pub substitution: Option<Substitution>,
}

/// Context monotonicity annotations, keyed by context id.
#[derive(Clone, Debug, Default)]
pub struct Annotations(BTreeMap<ContextSymbol, Monotonicity>);

impl Annotations {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, p: ContextSymbol, mon: Monotonicity) {
        self.0.insert(p, mon);
    }

    pub fn get(&self, p: &ContextSymbol) -> Option<Monotonicity> {
        self.0.get(p).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ContextSymbol, Monotonicity)> {
        self.0.iter().map(|(p, m)| (p, *m))
    }

    /// Annotation file: `template<TAB>up|down` per line; `#` comments.
    pub fn parse(text: &str) -> Result<Self, SurfaceError> {
        let mut out = Self::new();
        for (i, raw) in text.lines().enumerate() {
            if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
                continue;
            }
            let line_err = |source: SurfaceError| SurfaceError::Line {
                line: i + 1,
                source: Box::new(source),
            };
            let (template, mon) = raw
                .rsplit_once('\t')
                .ok_or_else(|| line_err(SurfaceError::Syntax(raw.to_string())))?;
            let template = ContextTemplate::parse(template).map_err(line_err)?;
            let mon = mon
                .trim()
                .parse()
                .map_err(|_| line_err(SurfaceError::Syntax(raw.to_string())))?;
            out.insert(template.symbol().clone(), mon);
        }
        Ok(out)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, SurfaceError> {
        Self::parse(&read_file(path.as_ref())?)
    }
}

impl FromIterator<(ContextSymbol, Monotonicity)> for Annotations {
    fn from_iter<I: IntoIterator<Item = (ContextSymbol, Monotonicity)>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

/// Decompose the pair into `p`, `a`, `b` and label it. Identical sentences
/// are labeled entailment without consulting the annotations.
pub fn label_pair(
    premise: &str,
    hypothesis: &str,
    g: &TaxonomyGraph,
    annotations: &Annotations,
) -> Result<PairLabel, LabelError> {
    match extract_context(premise, hypothesis) {
        Err(ExtractError::IdenticalSentences) => Ok(PairLabel {
            label: EntailmentLabel::Entailment,
            relation: ConceptRelation::Equivalent,
            substitution: None,
        }),
        Err(e) => Err(e.into()),
        Ok((template, a, b)) => {
            let mon = annotations
                .get(template.symbol())
                .ok_or_else(|| LabelError::UnannotatedContext(template.symbol().id().into()))?;
            let relation = g.relate(&a, &b);
            Ok(PairLabel {
                label: label(mon, relation),
                relation,
                substitution: Some(Substitution { template, a, b }),
            })
        }
    }
}

/// Whether a label agrees with derivability of `if p(a) then p(b)` from Γ.
pub fn consistency_check(
    gamma: &Theory,
    p: &ContextSymbol,
    a: &ConceptSymbol,
    b: &ConceptSymbol,
    out_label: EntailmentLabel,
) -> bool {
    let derivable = entails(
        gamma,
        &Sentence::ContextEntailment(p.clone(), a.clone(), b.clone()),
    );
    derivable == (out_label == EntailmentLabel::Entailment)
}

/// The theory a taxonomy plus one context annotation stands for.
pub fn annotated_theory(g: &TaxonomyGraph, p: &ContextSymbol, mon: Monotonicity) -> Theory {
    let mut t = g.to_theory();
    t.insert(match mon {
        Monotonicity::Upward => Sentence::UpwardMonotone(p.clone()),
        Monotonicity::Downward => Sentence::DownwardMonotone(p.clone()),
    });
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use ConceptRelation::*;
    use EntailmentLabel::*;
    use Monotonicity::*;

    fn c(s: &str) -> ConceptSymbol {
        ConceptSymbol::new(s).unwrap()
    }

    #[test]
    fn matrix_examples() {
        assert_eq!(label(Upward, ForwardContainment), Entailment);
        assert_eq!(label(Downward, ReverseContainment), Entailment);
        assert_eq!(label(Downward, Equivalent), Entailment);
    }

    #[test]
    fn matrix_is_invariant_under_double_flip() {
        for mon in [Upward, Downward] {
            for rel in ConceptRelation::ALL {
                assert_eq!(label(mon, rel), label(mon.flipped(), rel.reversed()));
            }
        }
    }

    fn annotations(template: &str, mon: Monotonicity) -> Annotations {
        let t = ContextTemplate::parse(template).unwrap();
        [(t.symbol().clone(), mon)].into_iter().collect()
    }

    #[test]
    fn downward_forward_pair_is_neutral() {
        let g = TaxonomyGraph::parse("dogs\tanimals\n").unwrap();
        let out = label_pair(
            "There were no dogs today .",
            "There were no animals today .",
            &g,
            &annotations("There were no x today .", Downward),
        )
        .unwrap();
        assert_eq!(out.relation, ForwardContainment);
        assert_eq!(out.label, Neutral);
        let sub = out.substitution.unwrap();
        assert_eq!((sub.a, sub.b), (c("dogs"), c("animals")));
        // and the reversed pair is an entailment
        let out = label_pair(
            "There were no animals today .",
            "There were no dogs today .",
            &g,
            &annotations("There were no x today .", Downward),
        )
        .unwrap();
        assert_eq!(out.label, Entailment);
    }

    #[test]
    fn identical_pair_is_entailment() {
        let out = label_pair("Tom slept .", "Tom slept .", &TaxonomyGraph::new(), &Annotations::new())
            .unwrap();
        assert_eq!(out.label, Entailment);
        assert!(out.substitution.is_none());
    }

    #[test]
    fn upward_reverse_pair_is_neutral() {
        let g = TaxonomyGraph::parse("apples\tfruit\n").unwrap();
        let out = label_pair(
            "I ate some fruit .",
            "I ate some apples .",
            &g,
            &annotations("I ate some x .", Upward),
        )
        .unwrap();
        assert_eq!(out.relation, ReverseContainment);
        assert_eq!(out.label, Neutral);
    }

    #[test]
    fn unannotated_context() {
        let err = label_pair(
            "I ate some fruit .",
            "I ate some apples .",
            &TaxonomyGraph::new(),
            &Annotations::new(),
        )
        .unwrap_err();
        assert!(matches!(err, LabelError::UnannotatedContext(id) if id == "i ate some x ."));
    }

    #[test]
    fn consistency_examples() {
        let g = TaxonomyGraph::parse("a\tb\n").unwrap();
        let p = ContextSymbol::new("p").unwrap();

        let down = annotated_theory(&g, &p, Downward);
        assert!(consistency_check(&down, &p, &c("b"), &c("a"), Entailment));

        let up = annotated_theory(&g, &p, Upward);
        assert!(consistency_check(&up, &p, &c("a"), &c("b"), Entailment));

        let unrelated = annotated_theory(&TaxonomyGraph::parse("a\tb\nc\td\n").unwrap(), &p, Upward);
        assert!(consistency_check(&unrelated, &p, &c("a"), &c("d"), Neutral));
        assert!(!consistency_check(&unrelated, &p, &c("a"), &c("d"), Entailment));
    }

    #[test]
    fn annotation_file() {
        let a = Annotations::parse("# ctx\tmon\nThere were no x today.\tdown\nSome x are allergic to wheat.\tup\n")
            .unwrap();
        let p = ContextTemplate::parse("There were no x today .").unwrap();
        assert_eq!(a.get(p.symbol()), Some(Downward));
        assert!(Annotations::parse("Every x laughed.\tsideways\n").is_err());
    }
}
