//! From NLI records to a context dataset and a context-disjoint split.
//!
//! ```text
//! cargo run --example help_contexts_pipeline
//! ```

use std::error::Error;

use ctxlogic::dataset::{
    convert_help, relabel_with_oracle, split_contexts, split_nli, HelpRecord, MonotonicityTag,
    OracleOutcome, Partition, SplitRatio,
};
use ctxlogic::{EntailmentLabel, TaxonomyGraph};

fn record(id: usize, premise: &str, hypothesis: &str, gold: EntailmentLabel, mon: MonotonicityTag) -> HelpRecord {
    HelpRecord {
        id: id.to_string(),
        premise: premise.into(),
        hypothesis: hypothesis.into(),
        gold_label: gold,
        monotonicity: mon,
    }
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    use EntailmentLabel::*;
    use MonotonicityTag::*;
    let records = vec![
        record(1, "There were no dogs today.", "There were no animals today.", Neutral, DownwardMonotone),
        record(2, "There were no animals today.", "There were no dogs today.", Entailment, DownwardMonotone),
        record(3, "There is no time for hesitation.", "There is no time for doubt.", Entailment, DownwardMonotone),
        record(4, "Some children are allergic to wheat.", "Some people are allergic to wheat.", Entailment, UpwardMonotone),
        record(5, "Tom is buying some flowers for Mary.", "Tom is buying some flowers for someone.", Entailment, UpwardMonotone),
        record(6, "You can see some wild rabbits in the field.", "You can see some wild rabbits in the meadow.", Neutral, UpwardMonotone),
        record(7, "Every student laughed.", "Every person laughed.", Neutral, DownwardMonotone),
        record(8, "Exactly two dogs barked.", "Exactly two animals barked.", Neutral, NonMonotone),
        record(9, "Tom slept.", "Tom slept.", Entailment, UpwardMonotone),
    ];

    let conv = convert_help(&records);
    println!("contexts:");
    for c in &conv.contexts {
        println!("  {}", serde_json::to_string(c)?);
    }
    println!("rejects:");
    for r in &conv.rejects {
        println!("  {}", serde_json::to_string(r)?);
    }

    let assignment = split_contexts(&conv.contexts, 2024, SplitRatio::default());
    let split = split_nli(&records, &assignment);
    for part in Partition::ALL {
        let ids: Vec<&str> = split.part(part).iter().map(|r| r.id.as_str()).collect();
        println!("{part}: {} contexts, records {ids:?}", assignment.members(part).count());
    }
    println!("record rejects: {}", split.rejects.len());

    // Relabel the records symbolically and compare with the gold labels.
    let g = TaxonomyGraph::parse("dogs\tanimals\nchildren\tpeople\nstudent\tperson\nmary\tsomeone\n")?;
    let (rows, summary) = relabel_with_oracle(&records, &g);
    for row in &rows {
        match &row.outcome {
            OracleOutcome::Labeled { label, relation, agreement } => {
                println!("  #{} {label} ({relation}) agrees with gold: {agreement}", row.record.id)
            }
            OracleOutcome::Skipped(why) => println!("  #{} skipped: {why}", row.record.id),
        }
    }
    println!("{summary:?}");
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
