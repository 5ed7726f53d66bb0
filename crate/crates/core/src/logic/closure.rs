//! Forward chaining to a fixpoint.
//!
//! Facts are drained from a worklist; each fact that is new to the fact base
//! is offered to every rule, which may emit further facts. Rules look up
//! their other premises in the indexed [`FactBase`], so every premise
//! combination is seen once the later of its premises is inserted. The
//! fixpoint does not depend on rule order or worklist order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use super::{MonotonicityStatus, Theory};
use crate::surface::{ConceptSymbol, ContextSymbol, Sentence};

/// Indexed set of derived facts.
#[derive(Debug, Default)]
pub struct FactBase {
    facts: BTreeSet<Sentence>,
    supersets: BTreeMap<ConceptSymbol, BTreeSet<ConceptSymbol>>,
    subsets: BTreeMap<ConceptSymbol, BTreeSet<ConceptSymbol>>,
    upward: BTreeSet<ContextSymbol>,
    downward: BTreeSet<ContextSymbol>,
}

impl FactBase {
    fn insert(&mut self, fact: Sentence) -> bool {
        if self.facts.contains(&fact) {
            return false;
        }
        match &fact {
            Sentence::Subsumption(a, b) => {
                self.supersets.entry(a.clone()).or_default().insert(b.clone());
                self.subsets.entry(b.clone()).or_default().insert(a.clone());
            }
            Sentence::UpwardMonotone(p) => {
                self.upward.insert(p.clone());
            }
            Sentence::DownwardMonotone(p) => {
                self.downward.insert(p.clone());
            }
            Sentence::ContextEntailment(..) => {}
        }
        self.facts.insert(fact)
    }

    pub fn contains(&self, fact: &Sentence) -> bool {
        self.facts.contains(fact)
    }

    /// All `b` with `all a are b` known.
    pub fn supersets_of<'a>(&'a self, a: &ConceptSymbol) -> impl Iterator<Item = &'a ConceptSymbol> {
        self.supersets.get(a).into_iter().flatten()
    }

    /// All `a` with `all a are b` known.
    pub fn subsets_of<'a>(&'a self, b: &ConceptSymbol) -> impl Iterator<Item = &'a ConceptSymbol> {
        self.subsets.get(b).into_iter().flatten()
    }

    pub fn subsumptions(&self) -> impl Iterator<Item = (&ConceptSymbol, &ConceptSymbol)> {
        self.supersets
            .iter()
            .flat_map(|(a, bs)| bs.iter().map(move |b| (a, b)))
    }

    pub fn upward_contexts(&self) -> impl Iterator<Item = &ContextSymbol> {
        self.upward.iter()
    }

    pub fn downward_contexts(&self) -> impl Iterator<Item = &ContextSymbol> {
        self.downward.iter()
    }
}

/// One deduction rule or axiom schema of the calculus.
pub trait Rule: Send + Sync {
    fn name(&self) -> &str;

    /// Premise-free instances over the inventory.
    fn axioms(
        &self,
        _concepts: &BTreeSet<ConceptSymbol>,
        _contexts: &BTreeSet<ContextSymbol>,
        _emit: &mut dyn FnMut(Sentence),
    ) {
    }

    /// Conclusions that use `trigger` as one premise and facts already in
    /// `facts` (which includes `trigger`) as the others.
    fn fire(&self, _trigger: &Sentence, _facts: &FactBase, _emit: &mut dyn FnMut(Sentence)) {}
}

/// all a are b, all b are c ⊢ all a are c
#[derive(Clone, Copy, Debug, Default)]
pub struct Barbara;

impl Rule for Barbara {
    fn name(&self) -> &str {
        "barbara"
    }

    fn fire(&self, trigger: &Sentence, facts: &FactBase, emit: &mut dyn FnMut(Sentence)) {
        if let Sentence::Subsumption(a, b) = trigger {
            for c in facts.supersets_of(b) {
                emit(Sentence::Subsumption(a.clone(), c.clone()));
            }
            for z in facts.subsets_of(a) {
                emit(Sentence::Subsumption(z.clone(), b.clone()));
            }
        }
    }
}

/// all a are b, p is upward monotone ⊢ if p(a) then p(b)
#[derive(Clone, Copy, Debug, Default)]
pub struct UpwardRule;

impl Rule for UpwardRule {
    fn name(&self) -> &str {
        "upward"
    }

    fn fire(&self, trigger: &Sentence, facts: &FactBase, emit: &mut dyn FnMut(Sentence)) {
        match trigger {
            Sentence::Subsumption(a, b) => {
                for p in facts.upward_contexts() {
                    emit(Sentence::ContextEntailment(p.clone(), a.clone(), b.clone()));
                }
            }
            Sentence::UpwardMonotone(p) => {
                for (a, b) in facts.subsumptions() {
                    emit(Sentence::ContextEntailment(p.clone(), a.clone(), b.clone()));
                }
            }
            _ => {}
        }
    }
}

/// all a are b, p is downward monotone ⊢ if p(b) then p(a)
#[derive(Clone, Copy, Debug, Default)]
pub struct DownwardRule;

impl Rule for DownwardRule {
    fn name(&self) -> &str {
        "downward"
    }

    fn fire(&self, trigger: &Sentence, facts: &FactBase, emit: &mut dyn FnMut(Sentence)) {
        match trigger {
            Sentence::Subsumption(a, b) => {
                for p in facts.downward_contexts() {
                    emit(Sentence::ContextEntailment(p.clone(), b.clone(), a.clone()));
                }
            }
            Sentence::DownwardMonotone(p) => {
                for (a, b) in facts.subsumptions() {
                    emit(Sentence::ContextEntailment(p.clone(), b.clone(), a.clone()));
                }
            }
            _ => {}
        }
    }
}

/// ⊢ all a are a
#[derive(Clone, Copy, Debug, Default)]
pub struct Reflexivity;

impl Rule for Reflexivity {
    fn name(&self) -> &str {
        "axiom-1"
    }

    fn axioms(
        &self,
        concepts: &BTreeSet<ConceptSymbol>,
        _contexts: &BTreeSet<ContextSymbol>,
        emit: &mut dyn FnMut(Sentence),
    ) {
        for a in concepts {
            emit(Sentence::Subsumption(a.clone(), a.clone()));
        }
    }
}

/// ⊢ if p(a) then p(a)
#[derive(Clone, Copy, Debug, Default)]
pub struct ContextReflexivity;

impl Rule for ContextReflexivity {
    fn name(&self) -> &str {
        "axiom-2"
    }

    fn axioms(
        &self,
        concepts: &BTreeSet<ConceptSymbol>,
        contexts: &BTreeSet<ContextSymbol>,
        emit: &mut dyn FnMut(Sentence),
    ) {
        for p in contexts {
            for a in concepts {
                emit(Sentence::ContextEntailment(p.clone(), a.clone(), a.clone()));
            }
        }
    }
}

/// A rule table. [`Calculus::standard`] is the logic's proof calculus; other
/// tables exist for mutation testing the decision procedures.
#[derive(Clone)]
pub struct Calculus {
    rules: Vec<Arc<dyn Rule>>,
}

impl fmt::Debug for Calculus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.rules.iter().map(|r| r.name()))
            .finish()
    }
}

impl Default for Calculus {
    fn default() -> Self {
        Self::standard()
    }
}

impl Calculus {
    pub fn standard() -> Self {
        Self::new(vec![
            Arc::new(Barbara),
            Arc::new(UpwardRule),
            Arc::new(DownwardRule),
            Arc::new(Reflexivity),
            Arc::new(ContextReflexivity),
        ])
    }

    pub fn new(rules: Vec<Arc<dyn Rule>>) -> Self {
        Self { rules }
    }

    pub fn rules(&self) -> impl Iterator<Item = &dyn Rule> {
        self.rules.iter().map(|r| r.as_ref())
    }

    pub fn with_rule(mut self, rule: Arc<dyn Rule>) -> Self {
        self.rules.push(rule);
        self
    }

    pub fn without(mut self, name: &str) -> Self {
        self.rules.retain(|r| r.name() != name);
        self
    }

    pub fn closure(&self, gamma: &Theory) -> Theory {
        let mut worklist: Vec<Sentence> = gamma.sentences().cloned().collect();
        for rule in &self.rules {
            rule.axioms(gamma.concepts(), gamma.contexts(), &mut |s| worklist.push(s));
        }
        let mut facts = FactBase::default();
        while let Some(fact) = worklist.pop() {
            if !facts.insert(fact.clone()) {
                continue;
            }
            for rule in &self.rules {
                rule.fire(&fact, &facts, &mut |s| {
                    if !facts.contains(&s) {
                        worklist.push(s)
                    }
                });
            }
        }
        let mut out = Theory::new().with_inventory(
            gamma.concepts().iter().cloned(),
            gamma.contexts().iter().cloned(),
        );
        out.extend(facts.facts);
        out
    }

    pub fn entails(&self, gamma: &Theory, phi: &Sentence) -> bool {
        let mut gamma = gamma.clone();
        gamma.declare_symbols(phi);
        self.closure(&gamma).contains(phi)
    }
}

/// Deductive closure under the standard calculus, including every axiom
/// instance over `gamma`'s inventory.
pub fn closure(gamma: &Theory) -> Theory {
    Calculus::standard().closure(gamma)
}

/// `Γ ⊢ φ`. Symbols of `phi` missing from `gamma` are added to the
/// inventory first, so `entails(∅, all a are a)` holds.
pub fn entails(gamma: &Theory, phi: &Sentence) -> bool {
    Calculus::standard().entails(gamma, phi)
}

/// No rule derives a monotonicity declaration, so this is membership in
/// `gamma`; computed on the closure all the same.
pub fn classify_context(gamma: &Theory, p: &ContextSymbol) -> MonotonicityStatus {
    let closed = closure(gamma);
    MonotonicityStatus::from_flags(
        closed.contains(&Sentence::UpwardMonotone(p.clone())),
        closed.contains(&Sentence::DownwardMonotone(p.clone())),
    )
}
