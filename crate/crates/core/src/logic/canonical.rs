//! The canonical model of a theory.
//!
//! The universe is the theory's concept inventory, each concept denotes its
//! down-set under derivable subsumption, and each context is interpreted by
//! what the theory declares about it: ⊆ for upward only, ⊇ for downward
//! only, set equality otherwise.

use std::collections::{BTreeMap, BTreeSet};

use super::{
    classify_context, closure, model_check, FiniteModel, LogicError, MonotonicityStatus, Relation,
    Subset, Theory, UNIVERSE_CAP,
};
use crate::surface::{ConceptSymbol, Sentence};

/// Name of the single element used when the concept inventory is empty.
const FILLER: &str = "*";

/// The preorder a ≤ b ⟺ Γ ⊢ all a are b, over Γ's concept inventory.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalOrder {
    base: Vec<ConceptSymbol>,
    leq: BTreeSet<(ConceptSymbol, ConceptSymbol)>,
}

impl CanonicalOrder {
    pub fn base(&self) -> &[ConceptSymbol] {
        &self.base
    }

    pub fn leq(&self, a: &ConceptSymbol, b: &ConceptSymbol) -> bool {
        self.leq.contains(&(a.clone(), b.clone()))
    }

    /// ↓a = { b | b ≤ a }
    pub fn down_set(&self, a: &ConceptSymbol) -> BTreeSet<&ConceptSymbol> {
        self.base.iter().filter(|b| self.leq(b, a)).collect()
    }
}

pub fn canonical_order(gamma: &Theory) -> CanonicalOrder {
    order_from_closure(gamma, &closure(gamma))
}

fn order_from_closure(gamma: &Theory, closed: &Theory) -> CanonicalOrder {
    let leq = closed
        .sentences()
        .filter_map(|s| match s {
            Sentence::Subsumption(a, b) => Some((a.clone(), b.clone())),
            _ => None,
        })
        .collect();
    CanonicalOrder {
        base: gamma.concepts().iter().cloned().collect(),
        leq,
    }
}

/// Build M_Γ. When Γ mentions no concepts the universe is a single filler
/// element rather than empty, since on an empty universe ⊆, ⊇ and equality
/// coincide and every monotonicity declaration would hold.
pub fn build_canonical_model(gamma: &Theory) -> Result<FiniteModel, LogicError> {
    let size = gamma.concepts().len();
    if size > UNIVERSE_CAP {
        return Err(LogicError::UniverseCapExceeded {
            size,
            cap: UNIVERSE_CAP,
        });
    }
    let closed = closure(gamma);
    let order = order_from_closure(gamma, &closed);
    let mut m = if order.base.is_empty() {
        FiniteModel::new([FILLER])?
    } else {
        FiniteModel::new(order.base.iter().map(|c| c.name().to_string()))?
    };

    let index: BTreeMap<&ConceptSymbol, usize> =
        order.base.iter().enumerate().map(|(i, c)| (c, i)).collect();
    for a in &order.base {
        let mut down = Subset::EMPTY;
        for b in order.down_set(a) {
            down.insert(index[b]);
        }
        m.interpret_concept(a.clone(), down)?;
    }

    let n = m.size();
    for p in gamma.contexts() {
        let rel = match classify_context(gamma, p) {
            MonotonicityStatus::UpwardOnly => Relation::subset(n),
            MonotonicityStatus::DownwardOnly => Relation::superset(n),
            MonotonicityStatus::Both | MonotonicityStatus::Neither => Relation::equality(n),
        };
        m.interpret_context(p.clone(), rel)?;
    }
    Ok(m)
}

/// Truth of `phi` in the canonical model of Γ (extended by `phi`'s symbols).
pub fn decide_canonical(gamma: &Theory, phi: &Sentence) -> Result<bool, LogicError> {
    let mut gamma = gamma.clone();
    gamma.declare_symbols(phi);
    model_check(&build_canonical_model(&gamma)?, phi)
}
