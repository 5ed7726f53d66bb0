//! Accuracy by monotonicity stratum, and the upward-assumption failure mode:
//! a predictor that treats every context as upward monotone.
//!
//! ```text
//! cargo run --example stratified_eval
//! ```

use std::error::Error;

use ctxlogic::dataset::synthetic_records;
use ctxlogic::evalreport::{gold_from_help, predict_assuming_upward, score, Percent};
use ctxlogic::surface::ContextTemplate;
use ctxlogic::{Monotonicity, TaxonomyGraph};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let g = TaxonomyGraph::parse("apples\tfruit\ndogs\tanimals\nroses\tflowers\n")?;
    let templates = [
        ("There were no x today.", Monotonicity::Downward),
        ("Every x laughed.", Monotonicity::Downward),
        ("Some x are allergic to wheat.", Monotonicity::Upward),
        ("You can see some wild rabbits in the x.", Monotonicity::Upward),
    ]
    .into_iter()
    .map(|(t, m)| Ok((ContextTemplate::parse(t)?, m)))
    .collect::<Result<Vec<_>, Box<dyn Error>>>()?;

    let records = synthetic_records(&templates, &g);
    let gold = gold_from_help(&records);
    let preds = predict_assuming_upward(&records, &g);
    let baseline: Percent = "93.14".parse()?;
    let report = score(&gold, &preds, Some(baseline))?;

    println!("{} synthetic pairs, predictor assumes upward monotone contexts", records.len());
    print!("{}", report.render_table());
    println!("{}", report.to_json());
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
