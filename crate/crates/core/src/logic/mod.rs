//! Deduction, finite-model semantics and canonical models for the
//! context-abstracted monotonicity logic.
//!
//! Two decision routes are provided and kept separate:
//!
//! * [`entails`] is proof-theoretic: membership in the deductive closure
//!   under BARBARA, the two monotonicity rules and the two reflexivity axioms.
//! * [`decide_canonical`] is semantic: truth in the canonical model built
//!   from the closure's subsumption order.
//!
//! The two agree on coherent theories (no bare `if p(a) then p(b)` premises,
//! at most one monotonicity declaration per context). Outside that regime
//! they can differ, and neither is silently substituted for the other.

use std::collections::BTreeSet;
use std::path::Path;

use thiserror::Error;

use crate::surface::{
    format_sentence, parse_theory_text, read_file, ConceptSymbol, ContextRegistry, ContextSymbol,
    Sentence, Style, SurfaceError,
};

mod canonical;
mod closure;
mod model;

pub use canonical::{build_canonical_model, canonical_order, decide_canonical, CanonicalOrder};
pub use closure::{
    classify_context, closure, entails, Barbara, Calculus, ContextReflexivity, DownwardRule,
    FactBase, Reflexivity, Rule, UpwardRule,
};
pub use model::{
    model_check, satisfies, theory_of_model, FiniteModel, Relation, Subset, UNIVERSE_CAP,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LogicError {
    #[error("concept {0:?} is not interpreted in the model")]
    UninterpretedConcept(String),
    #[error("context {0:?} is not interpreted in the model")]
    UninterpretedContext(String),
    #[error("universe of {size} elements exceeds the cap of {cap}")]
    UniverseCapExceeded { size: usize, cap: usize },
    #[error("element {0:?} is not in the universe")]
    UnknownElement(String),
    #[error("element {0:?} appears twice in the universe")]
    DuplicateElement(String),
    #[error("relation is over a universe of {found} elements, model has {expected}")]
    RelationSize { expected: usize, found: usize },
    #[error("model format: {0}")]
    Format(String),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

/// A finite set of sentences together with the symbol inventory they are
/// read over. The inventory always covers the symbols occurring in the
/// sentences and may be extended with extra symbols.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Theory {
    sentences: BTreeSet<Sentence>,
    concepts: BTreeSet<ConceptSymbol>,
    contexts: BTreeSet<ContextSymbol>,
}

impl Theory {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, sentence: Sentence) -> bool {
        self.declare_symbols(&sentence);
        self.sentences.insert(sentence)
    }

    pub fn contains(&self, sentence: &Sentence) -> bool {
        self.sentences.contains(sentence)
    }

    /// Add `sentence`'s symbols to the inventory without asserting it.
    pub fn declare_symbols(&mut self, sentence: &Sentence) {
        self.concepts.extend(sentence.concepts().cloned());
        self.contexts.extend(sentence.context().cloned());
    }

    pub fn declare_concept(&mut self, concept: ConceptSymbol) {
        self.concepts.insert(concept);
    }

    pub fn declare_context(&mut self, context: ContextSymbol) {
        self.contexts.insert(context);
    }

    pub fn with_inventory(
        mut self,
        concepts: impl IntoIterator<Item = ConceptSymbol>,
        contexts: impl IntoIterator<Item = ContextSymbol>,
    ) -> Self {
        self.concepts.extend(concepts);
        self.contexts.extend(contexts);
        self
    }

    pub fn sentences(&self) -> impl Iterator<Item = &Sentence> + '_ {
        self.sentences.iter()
    }

    pub fn sentence_set(&self) -> &BTreeSet<Sentence> {
        &self.sentences
    }

    pub fn concepts(&self) -> &BTreeSet<ConceptSymbol> {
        &self.concepts
    }

    pub fn contexts(&self) -> &BTreeSet<ContextSymbol> {
        &self.contexts
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    /// No bare context-entailment premises and at most one monotonicity
    /// declaration per context.
    pub fn is_coherent(&self) -> bool {
        self.contexts.iter().all(|p| {
            !(self.contains(&Sentence::UpwardMonotone(p.clone()))
                && self.contains(&Sentence::DownwardMonotone(p.clone())))
        }) && !self
            .sentences
            .iter()
            .any(|s| matches!(s, Sentence::ContextEntailment(..)))
    }

    pub fn parse(text: &str, registry: &ContextRegistry) -> Result<Self, SurfaceError> {
        Ok(parse_theory_text(text, registry)?.into_iter().collect())
    }

    pub fn load(path: impl AsRef<Path>, registry: &ContextRegistry) -> Result<Self, SurfaceError> {
        Self::parse(&read_file(path.as_ref())?, registry)
    }

    /// Theory-file rendering: one sentence per line in `style`, sorted by
    /// symbolic spelling.
    pub fn to_text(&self, style: Style) -> String {
        let mut lines: Vec<(String, &Sentence)> = self
            .sentences
            .iter()
            .map(|s| (format_sentence(s, Style::Symbolic), s))
            .collect();
        lines.sort();
        let mut out = String::new();
        for (_, s) in lines {
            out.push_str(&format_sentence(s, style));
            out.push('\n');
        }
        out
    }
}

impl FromIterator<Sentence> for Theory {
    fn from_iter<I: IntoIterator<Item = Sentence>>(iter: I) -> Self {
        let mut theory = Theory::new();
        for s in iter {
            theory.insert(s);
        }
        theory
    }
}

impl Extend<Sentence> for Theory {
    fn extend<I: IntoIterator<Item = Sentence>>(&mut self, iter: I) {
        for s in iter {
            self.insert(s);
        }
    }
}

/// Every sentence over the inventory: |A|² subsumptions, |A|²·|P| context
/// entailments and 2·|P| monotonicity declarations.
pub fn sentence_space(
    concepts: &BTreeSet<ConceptSymbol>,
    contexts: &BTreeSet<ContextSymbol>,
) -> Vec<Sentence> {
    let mut out = Vec::with_capacity(
        concepts.len() * concepts.len() * (1 + contexts.len()) + 2 * contexts.len(),
    );
    for a in concepts {
        for b in concepts {
            out.push(Sentence::Subsumption(a.clone(), b.clone()));
            for p in contexts {
                out.push(Sentence::ContextEntailment(p.clone(), a.clone(), b.clone()));
            }
        }
    }
    for p in contexts {
        out.push(Sentence::UpwardMonotone(p.clone()));
        out.push(Sentence::DownwardMonotone(p.clone()));
    }
    out
}

/// What a theory says about the monotonicity of one context.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MonotonicityStatus {
    UpwardOnly,
    DownwardOnly,
    Both,
    /// No declaration either way.
    Neither,
}

impl MonotonicityStatus {
    pub fn from_flags(upward: bool, downward: bool) -> Self {
        match (upward, downward) {
            (true, false) => Self::UpwardOnly,
            (false, true) => Self::DownwardOnly,
            (true, true) => Self::Both,
            (false, false) => Self::Neither,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::UpwardOnly => "upward_only",
            Self::DownwardOnly => "downward_only",
            Self::Both => "both",
            Self::Neither => "none",
        }
    }
}
