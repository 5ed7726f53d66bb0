//! Finite structures and truth of sentences in them.
//!
//! Subsets of the universe are bitmasks, and a context relation is a dense
//! 2ⁿ × 2ⁿ bit matrix, so the monotonicity clauses (relation equal to ⊆ or
//! ⊇ on the whole powerset) are checked extensionally.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{sentence_space, LogicError, Theory};
use crate::surface::{read_file, ConceptSymbol, ContextSymbol, Sentence};

/// Largest universe whose powerset relations are stored extensionally.
pub const UNIVERSE_CAP: usize = 6;

/// A subset of the universe, by element index.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subset(pub u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn singleton(index: usize) -> Self {
        Subset(1 << index)
    }

    pub fn contains(self, index: usize) -> bool {
        self.0 >> index & 1 == 1
    }

    pub fn insert(&mut self, index: usize) {
        self.0 |= 1 << index;
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&i| self.contains(i))
    }
}

/// A binary relation on the powerset of an `n`-element universe.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    universe: usize,
    rows: Vec<u64>,
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set()
            .entries(self.pairs().map(|(s, t)| (s.0, t.0)))
            .finish()
    }
}

impl Relation {
    fn powerset_size(universe: usize) -> usize {
        assert!(universe <= UNIVERSE_CAP, "universe above cap");
        1 << universe
    }

    pub fn empty(universe: usize) -> Self {
        Self {
            universe,
            rows: vec![0; Self::powerset_size(universe)],
        }
    }

    pub fn from_fn(universe: usize, mut f: impl FnMut(Subset, Subset) -> bool) -> Self {
        let mut rel = Self::empty(universe);
        let n = rel.rows.len();
        for s in 0..n {
            for t in 0..n {
                if f(Subset(s as u64), Subset(t as u64)) {
                    rel.rows[s] |= 1 << t;
                }
            }
        }
        rel
    }

    /// ⊆ on the powerset.
    pub fn subset(universe: usize) -> Self {
        Self::from_fn(universe, |s, t| s.is_subset_of(t))
    }

    /// ⊇ on the powerset.
    pub fn superset(universe: usize) -> Self {
        Self::from_fn(universe, |s, t| t.is_subset_of(s))
    }

    pub fn equality(universe: usize) -> Self {
        Self::from_fn(universe, |s, t| s == t)
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn contains(&self, s: Subset, t: Subset) -> bool {
        self.rows
            .get(s.0 as usize)
            .is_some_and(|row| (t.0 as usize) < self.rows.len() && row >> t.0 & 1 == 1)
    }

    pub fn insert(&mut self, s: Subset, t: Subset) {
        let n = self.rows.len();
        assert!((s.0 as usize) < n && (t.0 as usize) < n, "subset outside universe");
        self.rows[s.0 as usize] |= 1 << t.0;
    }

    pub fn remove(&mut self, s: Subset, t: Subset) {
        if let Some(row) = self.rows.get_mut(s.0 as usize) {
            *row &= !(1u64 << t.0);
        }
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.rows.len()).all(|s| self.rows[s] >> s & 1 == 1)
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (Subset, Subset)> + '_ {
        let n = self.rows.len();
        self.rows.iter().enumerate().flat_map(move |(s, &row)| {
            (0..n)
                .filter(move |&t| row >> t & 1 == 1)
                .map(move |t| (Subset(s as u64), Subset(t as u64)))
        })
    }
}

/// A finite structure: a universe of named elements, a subset per concept
/// and a powerset relation per context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteModel {
    universe: Vec<String>,
    concepts: BTreeMap<ConceptSymbol, Subset>,
    contexts: BTreeMap<ContextSymbol, Relation>,
}

impl FiniteModel {
    pub fn new<S: Into<String>>(universe: impl IntoIterator<Item = S>) -> Result<Self, LogicError> {
        let universe: Vec<String> = universe.into_iter().map(Into::into).collect();
        if universe.len() > UNIVERSE_CAP {
            return Err(LogicError::UniverseCapExceeded {
                size: universe.len(),
                cap: UNIVERSE_CAP,
            });
        }
        let mut seen = BTreeSet::new();
        for id in &universe {
            if !seen.insert(id) {
                return Err(LogicError::DuplicateElement(id.clone()));
            }
        }
        Ok(Self {
            universe,
            concepts: BTreeMap::new(),
            contexts: BTreeMap::new(),
        })
    }

    /// A model over elements `0..size`, named by their index.
    pub fn with_size(size: usize) -> Result<Self, LogicError> {
        Self::new((0..size).map(|i| i.to_string()))
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn size(&self) -> usize {
        self.universe.len()
    }

    pub fn full(&self) -> Subset {
        Subset((1u64 << self.universe.len()) - 1)
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.universe.iter().position(|e| e == id)
    }

    pub fn subset_of<S: AsRef<str>>(
        &self,
        ids: impl IntoIterator<Item = S>,
    ) -> Result<Subset, LogicError> {
        let mut s = Subset::EMPTY;
        for id in ids {
            let id = id.as_ref();
            let i = self
                .index_of(id)
                .ok_or_else(|| LogicError::UnknownElement(id.to_string()))?;
            s.insert(i);
        }
        Ok(s)
    }

    pub fn elements_of(&self, s: Subset) -> Vec<&str> {
        s.indices()
            .take_while(|&i| i < self.universe.len())
            .map(|i| self.universe[i].as_str())
            .collect()
    }

    pub fn interpret_concept(&mut self, c: ConceptSymbol, s: Subset) -> Result<(), LogicError> {
        if !s.is_subset_of(self.full()) {
            return Err(LogicError::UnknownElement(format!("#{}", 63 - s.0.leading_zeros())));
        }
        self.concepts.insert(c, s);
        Ok(())
    }

    pub fn interpret_context(&mut self, p: ContextSymbol, r: Relation) -> Result<(), LogicError> {
        if r.universe() != self.universe.len() {
            return Err(LogicError::RelationSize {
                expected: self.universe.len(),
                found: r.universe(),
            });
        }
        self.contexts.insert(p, r);
        Ok(())
    }

    pub fn concept(&self, c: &ConceptSymbol) -> Result<Subset, LogicError> {
        self.concepts
            .get(c)
            .copied()
            .ok_or_else(|| LogicError::UninterpretedConcept(c.name().to_string()))
    }

    pub fn context(&self, p: &ContextSymbol) -> Result<&Relation, LogicError> {
        self.contexts
            .get(p)
            .ok_or_else(|| LogicError::UninterpretedContext(p.id().to_string()))
    }

    pub fn concepts(&self) -> impl Iterator<Item = (&ConceptSymbol, Subset)> {
        self.concepts.iter().map(|(c, s)| (c, *s))
    }

    pub fn contexts(&self) -> impl Iterator<Item = (&ContextSymbol, &Relation)> {
        self.contexts.iter()
    }

    pub fn concept_inventory(&self) -> BTreeSet<ConceptSymbol> {
        self.concepts.keys().cloned().collect()
    }

    pub fn context_inventory(&self) -> BTreeSet<ContextSymbol> {
        self.contexts.keys().cloned().collect()
    }

    /// Parse the JSON model document:
    ///
    /// ```json
    /// { "universe": [1, 2],
    ///   "concepts": { "apples": [1], "fruit": [1, 2] },
    ///   "contexts": { "p": "superset", "q": [[[1], [1, 2]], [[], []]] } }
    /// ```
    ///
    /// Context values are either `"subset"`, `"superset"`, `"equality"` or
    /// an explicit list of `[subset, subset]` pairs.
    pub fn from_json(text: &str) -> Result<Self, LogicError> {
        let doc: ModelDoc =
            serde_json::from_str(text).map_err(|e| LogicError::Format(e.to_string()))?;
        let mut m = Self::new(doc.universe.into_iter().map(|e| e.0))?;
        for (name, ids) in doc.concepts {
            let s = m.subset_of(ids.iter().map(|e| e.0.as_str()))?;
            m.interpret_concept(ConceptSymbol::new(&name)?, s)?;
        }
        let n = m.size();
        for (name, spec) in doc.contexts {
            let rel = match spec {
                ContextDoc::Named(kind) => match kind.as_str() {
                    "subset" => Relation::subset(n),
                    "superset" => Relation::superset(n),
                    "equality" => Relation::equality(n),
                    other => {
                        return Err(LogicError::Format(format!(
                            "unknown relation shorthand {other:?}"
                        )))
                    }
                },
                ContextDoc::Pairs(pairs) => {
                    let mut rel = Relation::empty(n);
                    for (s, t) in pairs {
                        let s = m.subset_of(s.iter().map(|e| e.0.as_str()))?;
                        let t = m.subset_of(t.iter().map(|e| e.0.as_str()))?;
                        rel.insert(s, t);
                    }
                    rel
                }
            };
            m.interpret_context(ContextSymbol::new(&name)?, rel)?;
        }
        Ok(m)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, LogicError> {
        Self::from_json(&read_file(path.as_ref())?)
    }

    /// JSON rendering; relations equal to ⊆, ⊇ or equality use the
    /// shorthand names.
    pub fn to_json(&self) -> String {
        let n = self.size();
        let ids = |s: Subset| -> Vec<ElementId> {
            self.elements_of(s)
                .into_iter()
                .map(|e| ElementId(e.to_string()))
                .collect()
        };
        let doc = ModelDoc {
            universe: self.universe.iter().cloned().map(ElementId).collect(),
            concepts: self
                .concepts
                .iter()
                .map(|(c, s)| (c.name().to_string(), ids(*s)))
                .collect(),
            contexts: self
                .contexts
                .iter()
                .map(|(p, r)| {
                    let spec = if *r == Relation::subset(n) {
                        ContextDoc::Named("subset".into())
                    } else if *r == Relation::superset(n) {
                        ContextDoc::Named("superset".into())
                    } else if *r == Relation::equality(n) {
                        ContextDoc::Named("equality".into())
                    } else {
                        ContextDoc::Pairs(r.pairs().map(|(s, t)| (ids(s), ids(t))).collect())
                    };
                    (p.id().to_string(), spec)
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("model document serializes")
    }
}

#[derive(Serialize, Deserialize)]
struct ModelDoc {
    universe: Vec<ElementId>,
    #[serde(default)]
    concepts: BTreeMap<String, Vec<ElementId>>,
    #[serde(default)]
    contexts: BTreeMap<String, ContextDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ContextDoc {
    Named(String),
    Pairs(Vec<(Vec<ElementId>, Vec<ElementId>)>),
}

/// Element ids may be written as JSON strings or integers.
#[derive(Serialize)]
#[serde(transparent)]
struct ElementId(String);

impl<'de> Deserialize<'de> for ElementId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Str(String),
            Int(i64),
        }
        Ok(match Raw::deserialize(d)? {
            Raw::Str(s) => ElementId(s),
            Raw::Int(i) => ElementId(i.to_string()),
        })
    }
}

/// Truth of `phi` in `m`:
///
/// * `all a are b` iff ⟦a⟧ ⊆ ⟦b⟧
/// * `if p(a) then p(b)` iff (⟦a⟧, ⟦b⟧) ∈ ⟦p⟧
/// * `p is upward monotone` iff ⟦p⟧ is exactly ⊆ on the powerset
/// * `p is downward monotone` iff ⟦p⟧ is exactly ⊇ on the powerset
pub fn model_check(m: &FiniteModel, phi: &Sentence) -> Result<bool, LogicError> {
    Ok(match phi {
        Sentence::Subsumption(a, b) => m.concept(a)?.is_subset_of(m.concept(b)?),
        Sentence::ContextEntailment(p, a, b) => {
            let (a, b) = (m.concept(a)?, m.concept(b)?);
            m.context(p)?.contains(a, b)
        }
        Sentence::UpwardMonotone(p) => *m.context(p)? == Relation::subset(m.size()),
        Sentence::DownwardMonotone(p) => *m.context(p)? == Relation::superset(m.size()),
    })
}

pub fn satisfies(m: &FiniteModel, gamma: &Theory) -> Result<bool, LogicError> {
    for s in gamma.sentences() {
        if !model_check(m, s)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Th(m) restricted to the given inventory.
pub fn theory_of_model(
    m: &FiniteModel,
    concepts: &BTreeSet<ConceptSymbol>,
    contexts: &BTreeSet<ContextSymbol>,
) -> Result<Theory, LogicError> {
    let mut th = Theory::new().with_inventory(concepts.iter().cloned(), contexts.iter().cloned());
    for s in sentence_space(concepts, contexts) {
        if model_check(m, &s)? {
            th.insert(s);
        }
    }
    Ok(th)
}
