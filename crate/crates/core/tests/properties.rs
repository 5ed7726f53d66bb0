use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use proptest::sample::select;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ctxlogic::dataset::{
    convert_help, extract_context, split_contexts, split_nli, ContextMonotonicity, ContextRecord,
    HelpRecord, MonotonicityTag, Partition, SplitRatio,
};
use ctxlogic::evalreport::{score, GoldRecord, PredictionRecord};
use ctxlogic::labeler::{annotated_theory, consistency_check, label, EntailmentLabel, Monotonicity};
use ctxlogic::logic::{
    build_canonical_model, closure, entails, satisfies, Theory,
};
use ctxlogic::selfcheck::{concept_name, context_name, random_coherent_theory, TheoryShape};
use ctxlogic::surface::{
    parse_sentence, substitute, ConceptSymbol, ContextRegistry, ContextSymbol, ContextTemplate,
    Sentence, Style,
};
use ctxlogic::taxonomy::{ConceptRelation, TaxonomyGraph};

// Names chosen to collide with keywords, delimiters and comment syntax.
const CONCEPTS: &[&str] = &[
    "apples",
    "fruit",
    "dogs with hats",
    "all",
    "are",
    "if then",
    "a(b)",
    "say \"hi\"",
    "back\\slash",
    "#tag",
    "[=",
    "<->",
    "forall",
    "x y",
    "is",
    "monotone",
    "a,b",
    "p",
];

const CONTEXTS: &[&str] = &[
    "p",
    "q_2",
    "some x ran",
    "there were no x today.",
    "is",
    "a b",
    "x",
    "up-down",
    "all",
    "f(x)",
];

fn concept() -> impl Strategy<Value = ConceptSymbol> {
    select(CONCEPTS).prop_map(|s| ConceptSymbol::new(s).unwrap())
}

fn context() -> impl Strategy<Value = ContextSymbol> {
    select(CONTEXTS).prop_map(|s| ContextSymbol::new(s).unwrap())
}

fn sentence() -> impl Strategy<Value = Sentence> {
    prop_oneof![
        (concept(), concept()).prop_map(|(a, b)| Sentence::Subsumption(a, b)),
        (context(), concept(), concept()).prop_map(|(p, a, b)| Sentence::ContextEntailment(p, a, b)),
        context().prop_map(Sentence::UpwardMonotone),
        context().prop_map(Sentence::DownwardMonotone),
    ]
}

/// Sentences over c0..c{n-1} and p0, p1.
fn small_sentence(n: usize) -> impl Strategy<Value = Sentence> {
    let c = move || (0..n).prop_map(concept_name);
    let p = || (0..2usize).prop_map(context_name);
    prop_oneof![
        4 => (c(), c()).prop_map(|(a, b)| Sentence::Subsumption(a, b)),
        1 => (p(), c(), c()).prop_map(|(p, a, b)| Sentence::ContextEntailment(p, a, b)),
        1 => p().prop_map(Sentence::UpwardMonotone),
        1 => p().prop_map(Sentence::DownwardMonotone),
    ]
}

fn small_theory() -> impl Strategy<Value = Theory> {
    prop::collection::vec(small_sentence(4), 0..10).prop_map(|v| v.into_iter().collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn format_then_parse_is_identity(s in sentence()) {
        let open = ContextRegistry::open();
        for style in [Style::Natural, Style::Symbolic] {
            let text = s.format(style);
            let back = parse_sentence(&text, &open);
            prop_assert_eq!(back.as_ref(), Ok(&s), "{}", text);
        }
    }

    #[test]
    fn theory_text_round_trips(sentences in prop::collection::vec(sentence(), 0..8)) {
        let t: Theory = sentences.into_iter().collect();
        for style in [Style::Natural, Style::Symbolic] {
            let back = Theory::parse(&t.to_text(style), &ContextRegistry::open()).unwrap();
            prop_assert_eq!(back.sentence_set(), t.sentence_set());
        }
    }

    #[test]
    fn closure_is_an_extensive_idempotent_closure_operator(
        gamma in small_theory(),
        extra in prop::collection::vec(small_sentence(4), 0..4),
    ) {
        let closed = closure(&gamma);
        prop_assert!(gamma.sentence_set().is_subset(closed.sentence_set()));
        let twice = closure(&closed);
        prop_assert_eq!(twice.sentence_set(), closed.sentence_set());

        let mut bigger = gamma.clone();
        bigger.extend(extra);
        prop_assert!(closed.sentence_set().is_subset(closure(&bigger).sentence_set()));
    }

    #[test]
    fn no_rule_creates_monotonicity_sentences(gamma in small_theory()) {
        let declarations = |t: &Theory| -> BTreeSet<Sentence> {
            t.sentences()
                .filter(|s| matches!(s, Sentence::UpwardMonotone(_) | Sentence::DownwardMonotone(_)))
                .cloned()
                .collect()
        };
        prop_assert_eq!(declarations(&closure(&gamma)), declarations(&gamma));
    }

    #[test]
    fn context_entailment_characterization(gamma in small_theory()) {
        let closed = closure(&gamma);
        for p in gamma.contexts() {
            for a in gamma.concepts() {
                for b in gamma.concepts() {
                    let sub = |x: &ConceptSymbol, y: &ConceptSymbol| {
                        closed.contains(&Sentence::Subsumption(x.clone(), y.clone()))
                    };
                    let expected = a == b
                        || (gamma.contains(&Sentence::UpwardMonotone(p.clone())) && sub(a, b))
                        || (gamma.contains(&Sentence::DownwardMonotone(p.clone())) && sub(b, a))
                        || gamma.contains(&Sentence::ContextEntailment(p.clone(), a.clone(), b.clone()));
                    let got = closed.contains(&Sentence::ContextEntailment(p.clone(), a.clone(), b.clone()));
                    prop_assert_eq!(got, expected, "p={} a={} b={}", p.id(), a.name(), b.name());
                }
            }
        }
    }

    #[test]
    fn canonical_model_satisfies_coherent_theories(seed in any::<u64>()) {
        let gamma = random_coherent_theory(&mut ChaCha8Rng::seed_from_u64(seed), &TheoryShape::default());
        prop_assert!(gamma.is_coherent());
        let m = build_canonical_model(&gamma).unwrap();
        prop_assert!(satisfies(&m, &gamma).unwrap(), "{}", gamma.to_text(Style::Symbolic));
    }
}

/// Every theory over concepts {c0, c1} and context p0 built from any set of
/// subsumptions, any monotonicity declarations and any bare entailments.
#[test]
fn context_entailment_characterization_exhaustive() {
    let c = [concept_name(0), concept_name(1)];
    let p = context_name(0);
    let pairs: Vec<(usize, usize)> = (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).collect();
    for subs in 0u32..16 {
        for mons in 0u32..4 {
            for bare in 0u32..16 {
                let mut gamma = Theory::new().with_inventory(c.clone(), [p.clone()]);
                for (k, &(i, j)) in pairs.iter().enumerate() {
                    if subs >> k & 1 == 1 {
                        gamma.insert(Sentence::Subsumption(c[i].clone(), c[j].clone()));
                    }
                    if bare >> k & 1 == 1 {
                        gamma.insert(Sentence::ContextEntailment(p.clone(), c[i].clone(), c[j].clone()));
                    }
                }
                let up = mons & 1 == 1;
                let down = mons & 2 == 2;
                if up {
                    gamma.insert(Sentence::UpwardMonotone(p.clone()));
                }
                if down {
                    gamma.insert(Sentence::DownwardMonotone(p.clone()));
                }
                let closed = closure(&gamma);
                let sub = |i: usize, j: usize| {
                    closed.contains(&Sentence::Subsumption(c[i].clone(), c[j].clone()))
                };
                for &(i, j) in &pairs {
                    let ce = Sentence::ContextEntailment(p.clone(), c[i].clone(), c[j].clone());
                    let expected =
                        i == j || (up && sub(i, j)) || (down && sub(j, i)) || gamma.contains(&ce);
                    assert_eq!(closed.contains(&ce), expected, "{}", gamma.to_text(Style::Symbolic));
                }
            }
        }
    }
}

fn taxonomy() -> impl Strategy<Value = TaxonomyGraph> {
    let edge = (0..6usize, 0..6usize);
    (
        prop::collection::vec(edge.clone(), 0..10),
        prop::collection::vec(edge, 0..2),
    )
        .prop_map(|(edges, syns)| {
            let mut g = TaxonomyGraph::new();
            for i in 0..6 {
                g.add_node(concept_name(i));
            }
            for (a, b) in edges {
                g.add_edge(concept_name(a), concept_name(b));
            }
            for (a, b) in syns {
                g.add_synonym(concept_name(a), concept_name(b));
            }
            g
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn relate_agrees_with_derivability(g in taxonomy()) {
        let t = g.to_theory();
        let closed = closure(&t);
        for a in g.nodes() {
            for b in g.nodes() {
                let fwd = closed.contains(&Sentence::Subsumption(a.clone(), b.clone()));
                let bwd = closed.contains(&Sentence::Subsumption(b.clone(), a.clone()));
                let expected = match (fwd, bwd) {
                    (true, true) => ConceptRelation::Equivalent,
                    (true, false) => ConceptRelation::ForwardContainment,
                    (false, true) => ConceptRelation::ReverseContainment,
                    (false, false) => ConceptRelation::Unknown,
                };
                prop_assert_eq!(g.relate(a, b), expected);
            }
        }
    }

    #[test]
    fn labels_agree_with_the_logic(g in taxonomy(), up in any::<bool>()) {
        let mon = if up { Monotonicity::Upward } else { Monotonicity::Downward };
        let p = ContextSymbol::new("p").unwrap();
        let gamma = annotated_theory(&g, &p, mon);
        for a in g.nodes() {
            for b in g.nodes() {
                let l = label(mon, g.relate(a, b));
                prop_assert!(consistency_check(&gamma, &p, a, b, l));
                let derivable = entails(&gamma, &Sentence::ContextEntailment(p.clone(), a.clone(), b.clone()));
                prop_assert_eq!(derivable, l == EntailmentLabel::Entailment);
            }
        }
    }
}

const WORDS: &[&str] = &[
    "the", "dogs", "cats", "ran", "no", "some", "every", "big", "red", "hats", "with", "today",
    "tom", "saw", "There", "Every", "in", "field",
];

fn phrase() -> impl Strategy<Value = Vec<&'static str>> {
    prop::collection::vec(select(WORDS), 1..4)
}

fn template() -> impl Strategy<Value = ContextTemplate> {
    (
        prop::collection::vec(select(WORDS), 0..4),
        prop::collection::vec(select(WORDS), 0..4),
        select(&["", ".", " .", "!", ","][..]),
    )
        .prop_map(|(pre, post, end)| {
            let mut text: Vec<&str> = pre;
            text.push("x");
            text.extend(post);
            ContextTemplate::parse(&format!("{}{end}", text.join(" "))).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn extraction_inverts_substitution(t in template(), a in phrase(), b in phrase()) {
        // The differing region must start and end on different words.
        let lower = |w: &[&str]| w.iter().map(|s| s.to_lowercase()).collect::<Vec<_>>();
        let (la, lb) = (lower(&a), lower(&b));
        prop_assume!(la.first() != lb.first() && la.last() != lb.last());
        let a = ConceptSymbol::new(&a.join(" ")).unwrap();
        let b = ConceptSymbol::new(&b.join(" ")).unwrap();
        let (t2, a2, b2) = extract_context(&substitute(&t, &a), &substitute(&t, &b)).unwrap();
        prop_assert_eq!(t2.to_string(), t.to_string());
        prop_assert_eq!(t2.symbol(), t.symbol());
        prop_assert_eq!((a2, b2), (a, b));
    }
}

fn contexts(n: usize) -> Vec<ContextRecord> {
    (0..n)
        .map(|i| ContextRecord {
            context: format!("Context {i} holds x ."),
            monotonicity: if i % 3 == 0 {
                ContextMonotonicity::DownwardMonotone
            } else {
                ContextMonotonicity::UpwardMonotone
            },
        })
        .collect()
}

fn ratio() -> impl Strategy<Value = SplitRatio> {
    (0..10u32, 0..10u32, 0..10u32)
        .prop_filter("some weight", |(a, b, c)| a + b + c > 0)
        .prop_map(|(train, dev, test)| SplitRatio { train, dev, test })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn split_sizes_are_within_one_of_exact(n in 1usize..400, seed in any::<u64>(), r in ratio()) {
        let a = split_contexts(&contexts(n), seed, r);
        let sizes = a.sizes();
        let w = [r.train, r.dev, r.test];
        let total: u32 = w.iter().sum();
        prop_assert_eq!(sizes.iter().sum::<usize>(), n);
        for (size, weight) in sizes.iter().zip(w) {
            // |size − n·w/total| < 1
            let scaled = (*size as i64) * total as i64 - (n as i64) * weight as i64;
            prop_assert!(scaled.abs() < total as i64, "{:?} for n={} ratio={}", sizes, n, r);
        }
    }

    #[test]
    fn split_ignores_input_order(n in 1usize..120, seed in any::<u64>(), perm_seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let forward = contexts(n);
        let mut shuffled = forward.clone();
        shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(perm_seed));
        prop_assert_eq!(
            split_contexts(&forward, seed, SplitRatio::default()),
            split_contexts(&shuffled, seed, SplitRatio::default())
        );
    }

    #[test]
    fn nli_split_is_disjoint_and_conserves_records(
        picks in prop::collection::vec((0..8usize, 0..4usize, 0..3u8), 0..60),
        seed in any::<u64>(),
    ) {
        let templates: Vec<String> = (0..8).map(|i| format!("Scene {i} shows no x here .")).collect();
        let nouns = ["dogs", "cats", "birds", "fish", "cows"];
        let records: Vec<HelpRecord> = picks
            .iter()
            .enumerate()
            .map(|(k, &(t, n, m))| {
                let t = ContextTemplate::parse(&templates[t]).unwrap();
                let a = ConceptSymbol::new(nouns[n]).unwrap();
                let b = ConceptSymbol::new(nouns[n + 1]).unwrap();
                HelpRecord {
                    id: k.to_string(),
                    premise: substitute(&t, &a),
                    hypothesis: if m == 2 && n == 0 { substitute(&t, &a) } else { substitute(&t, &b) },
                    gold_label: EntailmentLabel::Neutral,
                    monotonicity: match m {
                        0 => MonotonicityTag::UpwardMonotone,
                        1 => MonotonicityTag::DownwardMonotone,
                        _ => MonotonicityTag::NonMonotone,
                    },
                }
            })
            .collect();
        let conv = convert_help(&records);
        let split = split_nli(&records, &split_contexts(&conv.contexts, seed, SplitRatio::default()));
        prop_assert_eq!(
            records.len(),
            split.train.len() + split.dev.len() + split.test.len() + split.rejects.len()
        );
        let ids = |part: Partition| -> BTreeSet<ContextSymbol> {
            split
                .part(part)
                .iter()
                .map(|r| extract_context(&r.premise, &r.hypothesis).unwrap().0.symbol().clone())
                .collect()
        };
        let (tr, dv, te) = (ids(Partition::Train), ids(Partition::Dev), ids(Partition::Test));
        prop_assert!(tr.is_disjoint(&dv) && tr.is_disjoint(&te) && dv.is_disjoint(&te));
    }
}

fn gold_and_preds() -> impl Strategy<Value = (Vec<GoldRecord>, Vec<PredictionRecord>)> {
    prop::collection::vec((any::<bool>(), any::<bool>(), any::<bool>()), 1..200).prop_map(|rows| {
        let lab = |b: bool| if b { EntailmentLabel::Entailment } else { EntailmentLabel::Neutral };
        let mut gold = Vec::new();
        let mut preds = Vec::new();
        for (i, (g, p, up)) in rows.into_iter().enumerate() {
            gold.push(GoldRecord {
                id: format!("r{i}"),
                gold_label: lab(g),
                monotonicity: if up { Monotonicity::Upward } else { Monotonicity::Downward },
            });
            preds.push(PredictionRecord { id: format!("r{i}"), predicted: lab(p) });
        }
        (gold, preds)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn all_is_the_micro_average((gold, preds) in gold_and_preds()) {
        let r = score(&gold, &preds, None).unwrap();
        prop_assert_eq!(r.all.correct, r.upward.correct + r.downward.correct);
        prop_assert_eq!(r.all.total, gold.len() as u64);
        // Each rounded accuracy is off by at most half a hundredth, so in
        // hundredth·record units the identity holds to within the total count.
        let h = |s: &ctxlogic::evalreport::Stratum| s.accuracy.map_or(0, |p| p.hundredths());
        let lhs = h(&r.all) * r.all.total as i64;
        let rhs = h(&r.upward) * r.upward.total as i64 + h(&r.downward) * r.downward.total as i64;
        prop_assert!((lhs - rhs).abs() <= r.all.total as i64);
        for s in [&r.upward, &r.downward, &r.all] {
            if let Some(p) = s.accuracy {
                prop_assert!((0..=10_000).contains(&p.hundredths()));
            }
        }
    }

    #[test]
    fn score_ignores_input_order((gold, preds) in gold_and_preds(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (mut g2, mut p2) = (gold.clone(), preds.clone());
        g2.shuffle(&mut rng);
        p2.shuffle(&mut rng);
        prop_assert_eq!(score(&gold, &preds, None), score(&g2, &p2, None));
    }
}

/// Independent reachability oracle for the acceptance suite lives there;
/// this one checks the synonyms of a taxonomy collapse like cycles do.
#[test]
fn synonym_edges_make_equivalence_classes() {
    let g = TaxonomyGraph::parse("syn\tcouch\tsofa\nsofa\tfurniture\n").unwrap();
    let c = |s: &str| ConceptSymbol::new(s).unwrap();
    let classes: BTreeMap<_, _> = [("couch", "furniture"), ("sofa", "furniture"), ("couch", "sofa")]
        .into_iter()
        .map(|(a, b)| ((a, b), g.relate(&c(a), &c(b))))
        .collect();
    assert_eq!(classes[&("couch", "furniture")], ConceptRelation::ForwardContainment);
    assert_eq!(classes[&("couch", "sofa")], ConceptRelation::Equivalent);
}
