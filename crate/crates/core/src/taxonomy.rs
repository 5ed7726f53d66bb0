//! Concept containment facts and `rel(a, b)` queries.
//!
//! Taxonomy files are tab separated, one fact per line:
//!
//! ```text
//! # hyponym <TAB> hypernym
//! apples	fruit
//! dogs with hats	dogs
//! syn	couch	sofa
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use petgraph::algo::has_path_connecting;
use petgraph::graph::{DiGraph, NodeIndex};
use thiserror::Error;

use crate::logic::Theory;
use crate::surface::{read_file, ConceptSymbol, Sentence, SurfaceError};

#[derive(Debug, Error)]
pub enum TaxonomyError {
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

/// How `a` relates to `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConceptRelation {
    /// a ≡ b
    Equivalent,
    /// a ⊑ b
    ForwardContainment,
    /// a ⊒ b
    ReverseContainment,
    /// nothing known
    Unknown,
}

impl ConceptRelation {
    pub const ALL: [ConceptRelation; 4] = [
        Self::Equivalent,
        Self::ForwardContainment,
        Self::ReverseContainment,
        Self::Unknown,
    ];

    pub fn reversed(self) -> Self {
        match self {
            Self::ForwardContainment => Self::ReverseContainment,
            Self::ReverseContainment => Self::ForwardContainment,
            other => other,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Equivalent => "equivalent",
            Self::ForwardContainment => "forward",
            Self::ReverseContainment => "reverse",
            Self::Unknown => "unknown",
        }
    }
}

impl fmt::Display for ConceptRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ConceptRelation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "equivalent" | "=" => Ok(Self::Equivalent),
            "forward" | "[=" => Ok(Self::ForwardContainment),
            "reverse" | "=]" => Ok(Self::ReverseContainment),
            "unknown" => Ok(Self::Unknown),
            other => Err(format!("unknown concept relation {other:?}")),
        }
    }
}

/// Hyponym → hypernym edges plus synonym pairs.
#[derive(Clone, Debug, Default)]
pub struct TaxonomyGraph {
    graph: DiGraph<ConceptSymbol, ()>,
    nodes: BTreeMap<ConceptSymbol, NodeIndex>,
    edges: BTreeSet<(ConceptSymbol, ConceptSymbol)>,
    synonyms: BTreeSet<(ConceptSymbol, ConceptSymbol)>,
}

impl TaxonomyGraph {
    pub fn new() -> Self {
        Self::default()
    }

    fn node(&mut self, c: &ConceptSymbol) -> NodeIndex {
        if let Some(&i) = self.nodes.get(c) {
            return i;
        }
        let i = self.graph.add_node(c.clone());
        self.nodes.insert(c.clone(), i);
        i
    }

    pub fn add_node(&mut self, c: ConceptSymbol) {
        self.node(&c);
    }

    /// Record `child ⊑ parent`. Returns false for a duplicate.
    pub fn add_edge(&mut self, child: ConceptSymbol, parent: ConceptSymbol) -> bool {
        if !self.edges.insert((child.clone(), parent.clone())) {
            return false;
        }
        let (c, p) = (self.node(&child), self.node(&parent));
        self.graph.add_edge(c, p, ());
        true
    }

    /// Record `a ≡ b`. Returns false for a duplicate (in either order).
    pub fn add_synonym(&mut self, a: ConceptSymbol, b: ConceptSymbol) -> bool {
        let key = if a <= b { (a, b) } else { (b, a) };
        if !self.synonyms.insert(key.clone()) {
            return false;
        }
        let (x, y) = (self.node(&key.0), self.node(&key.1));
        self.graph.add_edge(x, y, ());
        self.graph.add_edge(y, x, ());
        true
    }

    pub fn parse(text: &str) -> Result<Self, TaxonomyError> {
        let mut g = Self::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = raw.split('\t').collect();
            let concept = |s: &str| {
                ConceptSymbol::new(s).map_err(|e| TaxonomyError::Format {
                    line,
                    message: e.to_string(),
                })
            };
            match fields.as_slice() {
                ["syn", a, b] => {
                    g.add_synonym(concept(a)?, concept(b)?);
                }
                [child, parent] => {
                    g.add_edge(concept(child)?, concept(parent)?);
                }
                _ => {
                    return Err(TaxonomyError::Format {
                        line,
                        message: format!(
                            "expected \"child<TAB>parent\" or \"syn<TAB>a<TAB>b\", got {raw:?}"
                        ),
                    })
                }
            }
        }
        Ok(g)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, TaxonomyError> {
        Self::parse(&read_file(path.as_ref())?)
    }

    pub fn nodes(&self) -> impl Iterator<Item = &ConceptSymbol> {
        self.nodes.keys()
    }

    pub fn edges(&self) -> impl Iterator<Item = &(ConceptSymbol, ConceptSymbol)> {
        self.edges.iter()
    }

    pub fn synonyms(&self) -> impl Iterator<Item = &(ConceptSymbol, ConceptSymbol)> {
        self.synonyms.iter()
    }

    fn reaches(&self, a: &ConceptSymbol, b: &ConceptSymbol) -> bool {
        match (self.nodes.get(a), self.nodes.get(b)) {
            (Some(&x), Some(&y)) => has_path_connecting(&self.graph, x, y, None),
            _ => false,
        }
    }

    /// `rel(a, b)` by reflexive-transitive reachability over edges, with
    /// synonyms and cycles collapsing to equivalence.
    pub fn relate(&self, a: &ConceptSymbol, b: &ConceptSymbol) -> ConceptRelation {
        if a == b {
            return ConceptRelation::Equivalent;
        }
        match (self.reaches(a, b), self.reaches(b, a)) {
            (true, true) => ConceptRelation::Equivalent,
            (true, false) => ConceptRelation::ForwardContainment,
            (false, true) => ConceptRelation::ReverseContainment,
            (false, false) => ConceptRelation::Unknown,
        }
    }

    /// Edges as `all child are parent`, synonyms as mutual subsumption.
    pub fn to_theory(&self) -> Theory {
        let mut t = Theory::new();
        for (child, parent) in &self.edges {
            t.insert(Sentence::Subsumption(child.clone(), parent.clone()));
        }
        for (a, b) in &self.synonyms {
            t.insert(Sentence::Subsumption(a.clone(), b.clone()));
            t.insert(Sentence::Subsumption(b.clone(), a.clone()));
        }
        for c in self.nodes.keys() {
            t.declare_concept(c.clone());
        }
        t
    }
}

pub fn load_taxonomy(path: impl AsRef<Path>) -> Result<TaxonomyGraph, TaxonomyError> {
    TaxonomyGraph::load(path)
}

pub fn relate(g: &TaxonomyGraph, a: &ConceptSymbol, b: &ConceptSymbol) -> ConceptRelation {
    g.relate(a, b)
}

pub fn to_theory(g: &TaxonomyGraph) -> Theory {
    g.to_theory()
}
