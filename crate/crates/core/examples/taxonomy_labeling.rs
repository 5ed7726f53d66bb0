//! Symbolic NLI labels from a concept taxonomy and context annotations,
//! cross-checked against the logic.
//!
//! ```text
//! cargo run --example taxonomy_labeling
//! ```

use std::error::Error;

use ctxlogic::labeler::{annotated_theory, consistency_check, Annotations};
use ctxlogic::{label_pair, ConceptSymbol, TaxonomyGraph};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let g = TaxonomyGraph::parse(
        "# child\tparent\n\
         apples\tfruit\n\
         dogs with hats\tdogs\n\
         dogs\tanimals\n\
         syn\tcouch\tsofa\n",
    )?;
    let ann = Annotations::parse(
        "There were no x today.\tdownward\n\
         I ate some x.\tupward\n\
         Tom sat on the x.\tupward\n",
    )?;

    for (premise, hypothesis) in [
        ("I ate some apples.", "I ate some fruit."),
        ("I ate some fruit.", "I ate some apples."),
        ("There were no dogs today.", "There were no animals today."),
        ("There were no animals today.", "There were no dogs today."),
        ("Tom sat on the couch.", "Tom sat on the sofa."),
        ("I ate some apples.", "I ate some bread."),
    ] {
        let r = label_pair(premise, hypothesis, &g, &ann)?;
        println!("{premise} => {hypothesis}");
        print!("  {} ({})", r.label, r.relation);
        if let Some(sub) = &r.substitution {
            let mon = ann.get(sub.template.symbol()).expect("annotated");
            // The same verdict, derived by the calculus from the taxonomy.
            let gamma = annotated_theory(&g, sub.template.symbol(), mon);
            let agrees = consistency_check(&gamma, sub.template.symbol(), &sub.a, &sub.b, r.label);
            print!("  context {:?}, logic agrees: {agrees}", sub.template.symbol().id());
        }
        println!();
    }
    let hats = ConceptSymbol::new("dogs with hats")?;
    let animals = ConceptSymbol::new("animals")?;
    println!("dogs with hats vs animals: {}", g.relate(&hats, &animals));
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
