//! Context-abstracted monotonicity logic.
//!
//! Sentences talk about concepts (`all a are b`) and about contexts, sentences
//! with one gap (`if p(a) then p(b)`, `p is upward monotone`). The crate
//! parses and formats them, derives consequences by forward chaining,
//! decides truth in finite and canonical models, labels substitutional NLI
//! pairs from context monotonicity and a concept taxonomy, and provides the
//! dataset and evaluation tooling around that labeler.

pub mod cli;
pub mod dataset;
pub mod evalreport;
pub mod labeler;
pub mod logic;
pub mod selfcheck;
pub mod surface;
pub mod taxonomy;

pub use labeler::{label, label_pair, EntailmentLabel, Monotonicity};
pub use logic::{build_canonical_model, closure, decide_canonical, entails, FiniteModel, Theory};
pub use surface::{parse_sentence, ConceptSymbol, ContextRegistry, ContextSymbol, Sentence, Style};
pub use taxonomy::{ConceptRelation, TaxonomyGraph};
