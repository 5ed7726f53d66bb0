//! Randomized health checks of the deduction engine against the semantics.
//!
//! * Soundness: for random finite models `m`, `closure(Th(m)) = Th(m)`.
//! * Agreement: for random coherent theories Γ, `entails(Γ, φ)` equals
//!   truth in the canonical model of Γ for every φ over Γ's inventory.
//!
//! Failures are shrunk greedily to a small counterexample before reporting.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::logic::{
    build_canonical_model, model_check, sentence_space, theory_of_model, Calculus, FiniteModel,
    Relation, Subset, Theory,
};
use crate::surface::{ConceptSymbol, ContextSymbol, Sentence, Style};

/// Which relations the soundness fuzz may interpret a context by, besides
/// ⊆, ⊇ and equality.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RelationPool {
    /// Arbitrary relations that contain the diagonal.
    #[default]
    Reflexive,
    /// Arbitrary relations with no constraint at all.
    Unrestricted,
}

impl RelationPool {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Reflexive => "reflexive",
            Self::Unrestricted => "unrestricted",
        }
    }
}

impl std::str::FromStr for RelationPool {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "reflexive" => Ok(Self::Reflexive),
            "unrestricted" => Ok(Self::Unrestricted),
            other => Err(format!("unknown relation pool {other:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModelShape {
    pub max_universe: usize,
    pub max_concepts: usize,
    pub max_contexts: usize,
    pub pool: RelationPool,
}

impl Default for ModelShape {
    fn default() -> Self {
        Self {
            max_universe: 4,
            max_concepts: 3,
            max_contexts: 2,
            pool: RelationPool::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TheoryShape {
    pub max_concepts: usize,
    pub max_contexts: usize,
}

impl Default for TheoryShape {
    fn default() -> Self {
        Self {
            max_concepts: 4,
            max_contexts: 2,
        }
    }
}

pub fn concept_name(i: usize) -> ConceptSymbol {
    ConceptSymbol::new(&format!("c{i}")).expect("valid concept name")
}

pub fn context_name(i: usize) -> ContextSymbol {
    ContextSymbol::new(&format!("p{i}")).expect("valid context name")
}

fn random_relation(rng: &mut impl Rng, n: usize, pool: RelationPool) -> Relation {
    match rng.gen_range(0..4) {
        0 => Relation::subset(n),
        1 => Relation::superset(n),
        2 => Relation::equality(n),
        _ => Relation::from_fn(n, |s, t| {
            (pool == RelationPool::Reflexive && s == t) || rng.gen_bool(0.5)
        }),
    }
}

/// A random model together with the inventory it interprets.
pub fn random_model(rng: &mut impl Rng, shape: &ModelShape) -> FiniteModel {
    let n = rng.gen_range(0..=shape.max_universe);
    let mut m = FiniteModel::with_size(n).expect("within universe cap");
    let full = m.full().0;
    for i in 0..rng.gen_range(0..=shape.max_concepts) {
        let s = Subset(rng.gen_range(0..=full));
        m.interpret_concept(concept_name(i), s).expect("subset of universe");
    }
    for i in 0..rng.gen_range(0..=shape.max_contexts) {
        let r = random_relation(rng, n, shape.pool);
        m.interpret_context(context_name(i), r).expect("matching size");
    }
    m
}

/// A random coherent theory: random subsumptions plus at most one
/// monotonicity declaration per context. The inventory is exactly the
/// symbols that occur.
pub fn random_coherent_theory(rng: &mut impl Rng, shape: &TheoryShape) -> Theory {
    let n = rng.gen_range(1..=shape.max_concepts);
    let density = rng.gen_range(0.05..0.5);
    let mut gamma = Theory::new();
    for i in 0..n {
        for j in 0..n {
            if rng.gen_bool(density) {
                gamma.insert(Sentence::Subsumption(concept_name(i), concept_name(j)));
            }
        }
    }
    for i in 0..rng.gen_range(0..=shape.max_contexts) {
        match rng.gen_range(0..3) {
            0 => {
                gamma.insert(Sentence::UpwardMonotone(context_name(i)));
            }
            1 => {
                gamma.insert(Sentence::DownwardMonotone(context_name(i)));
            }
            _ => {}
        }
    }
    gamma
}

/// A model `m` whose theory is not deductively closed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SoundnessCounterexample {
    pub model: FiniteModel,
    /// Derivable from Th(m) but false in `m`.
    pub unsound: Vec<Sentence>,
}

impl fmt::Display for SoundnessCounterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "model: {}", self.model.to_json())?;
        writeln!(f, "derivable but false:")?;
        for s in &self.unsound {
            writeln!(f, "  {}", s.format(Style::Symbolic))?;
        }
        Ok(())
    }
}

/// Sentences derivable from Th(m) under `calc` that are false in `m`.
pub fn unsound_sentences(calc: &Calculus, m: &FiniteModel) -> Vec<Sentence> {
    let th = theory_of_model(m, &m.concept_inventory(), &m.context_inventory())
        .expect("inventory is interpreted");
    calc.closure(&th)
        .sentences()
        .filter(|s| !th.contains(s))
        .cloned()
        .collect()
}

fn drop_concept(m: &FiniteModel, drop: &ConceptSymbol) -> FiniteModel {
    let mut out = FiniteModel::new(m.universe().iter().cloned()).expect("valid universe");
    for (c, s) in m.concepts().filter(|(c, _)| *c != drop) {
        out.interpret_concept(c.clone(), s).expect("same universe");
    }
    for (p, r) in m.contexts() {
        out.interpret_context(p.clone(), r.clone()).expect("same universe");
    }
    out
}

fn drop_context(m: &FiniteModel, drop: &ContextSymbol) -> FiniteModel {
    let mut out = FiniteModel::new(m.universe().iter().cloned()).expect("valid universe");
    for (c, s) in m.concepts() {
        out.interpret_concept(c.clone(), s).expect("same universe");
    }
    for (p, r) in m.contexts().filter(|(p, _)| *p != drop) {
        out.interpret_context(p.clone(), r.clone()).expect("same universe");
    }
    out
}

/// The submodel on every element but `k`: subsets lose element `k`, and a
/// relation keeps the pairs of subsets not containing `k`.
fn drop_element(m: &FiniteModel, k: usize) -> FiniteModel {
    let universe = m
        .universe()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != k)
        .map(|(_, e)| e.clone());
    let mut out = FiniteModel::new(universe).expect("valid universe");
    let low = (1u64 << k) - 1;
    let squeeze = |s: Subset| Subset((s.0 & low) | ((s.0 >> 1) & !low));
    let expand = |s: Subset| Subset((s.0 & low) | ((s.0 & !low) << 1));
    for (c, s) in m.concepts() {
        out.interpret_concept(c.clone(), squeeze(s)).expect("smaller universe");
    }
    let n = out.size();
    for (p, r) in m.contexts() {
        let r = Relation::from_fn(n, |s, t| r.contains(expand(s), expand(t)));
        out.interpret_context(p.clone(), r).expect("smaller universe");
    }
    out
}

/// Greedily remove concepts, contexts and elements while the model stays a
/// counterexample.
pub fn shrink_model(calc: &Calculus, m: FiniteModel) -> SoundnessCounterexample {
    let mut m = m;
    loop {
        let mut candidates: Vec<FiniteModel> = Vec::new();
        candidates.extend(m.concept_inventory().iter().map(|c| drop_concept(&m, c)));
        candidates.extend(m.context_inventory().iter().map(|p| drop_context(&m, p)));
        candidates.extend((0..m.size()).map(|k| drop_element(&m, k)));
        match candidates
            .into_iter()
            .find(|c| !unsound_sentences(calc, c).is_empty())
        {
            Some(smaller) => m = smaller,
            None => break,
        }
    }
    let unsound = unsound_sentences(calc, &m);
    SoundnessCounterexample { model: m, unsound }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SoundnessRun {
    pub trials: usize,
    pub violations: usize,
    pub counterexample: Option<SoundnessCounterexample>,
}

pub fn soundness_fuzz(calc: &Calculus, trials: usize, seed: u64, shape: &ModelShape) -> SoundnessRun {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0;
    let mut first = None;
    for _ in 0..trials {
        let m = random_model(&mut rng, shape);
        if !unsound_sentences(calc, &m).is_empty() {
            violations += 1;
            if first.is_none() {
                first = Some(m);
            }
        }
    }
    SoundnessRun {
        trials,
        violations,
        counterexample: first.map(|m| shrink_model(calc, m)),
    }
}

/// A theory on which proof search and the canonical model disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AgreementCounterexample {
    pub theory: Theory,
    pub phi: Sentence,
    pub derivable: bool,
    pub canonical: bool,
}

impl fmt::Display for AgreementCounterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "theory:")?;
        for line in self.theory.to_text(Style::Symbolic).lines() {
            writeln!(f, "  {line}")?;
        }
        writeln!(
            f,
            "query: {}  (derivable: {}, canonical model: {})",
            self.phi.format(Style::Symbolic),
            self.derivable,
            self.canonical
        )
    }
}

/// Every φ over Γ's inventory on which `calc` and the canonical model of Γ
/// disagree, as `(φ, derivable, canonical)`.
pub fn disagreements(calc: &Calculus, gamma: &Theory) -> Vec<(Sentence, bool, bool)> {
    let closed = calc.closure(gamma);
    let m = build_canonical_model(gamma).expect("theory within universe cap");
    sentence_space(gamma.concepts(), gamma.contexts())
        .into_iter()
        .filter_map(|phi| {
            let derivable = closed.contains(&phi);
            let canonical = model_check(&m, &phi).expect("inventory interpreted");
            (derivable != canonical).then_some((phi, derivable, canonical))
        })
        .collect()
}

fn disagrees_on(calc: &Calculus, gamma: &Theory, phi: &Sentence) -> Option<(bool, bool)> {
    let mut gamma = gamma.clone();
    gamma.declare_symbols(phi);
    let derivable = calc.closure(&gamma).contains(phi);
    let m = build_canonical_model(&gamma).expect("theory within universe cap");
    let canonical = model_check(&m, phi).expect("inventory interpreted");
    (derivable != canonical).then_some((derivable, canonical))
}

/// Greedily drop premises and unused inventory while the disagreement on
/// `phi` persists.
pub fn shrink_theory(calc: &Calculus, gamma: Theory, phi: Sentence) -> AgreementCounterexample {
    let rebuild = |sentences: &[Sentence]| -> Theory {
        let mut t: Theory = sentences.iter().cloned().collect();
        t.declare_symbols(&phi);
        t
    };
    let mut current: Vec<Sentence> = gamma.sentences().cloned().collect();
    let mut gamma = gamma;
    // Start from the bare premises; fall back to the full inventory if the
    // disagreement depends on it.
    if disagrees_on(calc, &rebuild(&current), &phi).is_some() {
        gamma = rebuild(&current);
        let mut i = 0;
        while i < current.len() {
            let mut fewer = current.clone();
            fewer.remove(i);
            let t = rebuild(&fewer);
            if disagrees_on(calc, &t, &phi).is_some() {
                current = fewer;
                gamma = t;
            } else {
                i += 1;
            }
        }
    }
    let (derivable, canonical) =
        disagrees_on(calc, &gamma, &phi).expect("shrinking preserves the disagreement");
    AgreementCounterexample {
        theory: gamma,
        phi,
        derivable,
        canonical,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AgreementRun {
    pub trials: usize,
    /// Theories with at least one disagreement.
    pub violations: usize,
    pub counterexample: Option<AgreementCounterexample>,
}

pub fn agreement_fuzz(calc: &Calculus, trials: usize, seed: u64, shape: &TheoryShape) -> AgreementRun {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0;
    let mut first = None;
    for _ in 0..trials {
        let gamma = random_coherent_theory(&mut rng, shape);
        let bad = disagreements(calc, &gamma);
        if let Some((phi, _, _)) = bad.into_iter().next() {
            violations += 1;
            if first.is_none() {
                first = Some((gamma, phi));
            }
        }
    }
    AgreementRun {
        trials,
        violations,
        counterexample: first.map(|(g, phi)| shrink_theory(calc, g, phi)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelfcheckReport {
    pub pool: RelationPool,
    pub soundness: SoundnessRun,
    pub agreement: AgreementRun,
}

impl SelfcheckReport {
    pub fn violations(&self) -> usize {
        self.soundness.violations + self.agreement.violations
    }
}

impl fmt::Display for SelfcheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "soundness: {} models, {} violations (arbitrary relations: {})",
            self.soundness.trials,
            self.soundness.violations,
            self.pool.as_str()
        )?;
        if let Some(cx) = &self.soundness.counterexample {
            write!(f, "minimal counterexample\n{cx}")?;
        }
        writeln!(
            f,
            "agreement: {} coherent theories, {} with disagreements",
            self.agreement.trials, self.agreement.violations
        )?;
        if let Some(cx) = &self.agreement.counterexample {
            write!(f, "minimal counterexample\n{cx}")?;
        }
        Ok(())
    }
}

/// Both suites with `trials` cases each. The agreement suite uses a seed
/// derived from `seed` so the two streams differ.
pub fn selfcheck(calc: &Calculus, trials: usize, seed: u64, pool: RelationPool) -> SelfcheckReport {
    let shape = ModelShape {
        pool,
        ..ModelShape::default()
    };
    SelfcheckReport {
        pool,
        soundness: soundness_fuzz(calc, trials, seed, &shape),
        agreement: agreement_fuzz(calc, trials, seed ^ 0x9e37_79b9_7f4a_7c15, &TheoryShape::default()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    #[test]
    fn reflexive_pool_is_sound() {
        let run = soundness_fuzz(&Calculus::standard(), 300, 1, &ModelShape::default());
        assert_eq!(run.violations, 0, "{:?}", run.counterexample);
    }

    #[test]
    fn unrestricted_pool_breaks_context_reflexivity_only() {
        let shape = ModelShape {
            pool: RelationPool::Unrestricted,
            ..ModelShape::default()
        };
        let run = soundness_fuzz(&Calculus::standard(), 300, 1, &shape);
        assert!(run.violations > 0);
        let cx = run.counterexample.unwrap();
        assert_eq!(cx.model.concept_inventory().len(), 1);
        assert_eq!(cx.model.context_inventory().len(), 1);
        assert!(cx.model.size() <= 1);
        assert!(matches!(&cx.unsound[..], [Sentence::ContextEntailment(_, a, b)] if a == b));
    }

    #[test]
    fn coherent_agreement() {
        let run = agreement_fuzz(&Calculus::standard(), 300, 2, &TheoryShape::default());
        assert_eq!(run.violations, 0, "{:?}", run.counterexample);
    }

    #[test]
    fn element_removal_projects_relations() {
        let mut m = FiniteModel::with_size(3).unwrap();
        m.interpret_concept(concept_name(0), Subset(0b101)).unwrap();
        m.interpret_context(context_name(0), Relation::subset(3)).unwrap();
        let smaller = drop_element(&m, 1);
        assert_eq!(smaller.universe(), ["0", "2"]);
        assert_eq!(smaller.concept(&concept_name(0)).unwrap(), Subset(0b11));
        assert_eq!(smaller.context(&context_name(0)).unwrap(), &Relation::subset(2));
    }

    /// Converse of BARBARA's conclusion: all a are b ⊢ all b are a.
    struct Symmetry;

    impl crate::logic::Rule for Symmetry {
        fn name(&self) -> &str {
            "symmetry"
        }

        fn fire(
            &self,
            trigger: &Sentence,
            _facts: &crate::logic::FactBase,
            emit: &mut dyn FnMut(Sentence),
        ) {
            if let Sentence::Subsumption(a, b) = trigger {
                emit(Sentence::Subsumption(b.clone(), a.clone()));
            }
        }
    }

    #[test]
    fn corrupted_calculus_is_caught() {
        let calc = Calculus::standard().with_rule(Arc::new(Symmetry));
        let report = selfcheck(&calc, 200, 3, RelationPool::Reflexive);
        assert!(report.soundness.violations > 0);
        assert!(report.agreement.violations > 0);
        let cx = report.agreement.counterexample.unwrap();
        assert_eq!(cx.theory.len(), 1, "{cx}");
    }
}
