//! Forward-chaining closure, entailment, and swapping rules in and out of
//! the calculus.
//!
//! ```text
//! cargo run --example closure_and_entailment
//! ```

use std::error::Error;

use ctxlogic::logic::{classify_context, Calculus};
use ctxlogic::surface::ContextRegistry;
use ctxlogic::{closure, entails, parse_sentence, Style, Theory};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let reg = ContextRegistry::open();
    let gamma = Theory::parse(
        "all apples are fruit\n\
         all fruit are food\n\
         \"There were no x today.\" is downward monotone\n",
        &reg,
    )?;

    println!("closure ({} sentences):", closure(&gamma).len());
    print!("{}", closure(&gamma).to_text(Style::Natural));

    for q in [
        "all apples are food",
        "if \"There were no x today.\"(food) then \"There were no x today.\"(apples)",
        "if \"There were no x today.\"(apples) then \"There were no x today.\"(food)",
    ] {
        println!("{q} ... {}", entails(&gamma, &parse_sentence(q, &reg)?));
    }

    let p = reg.resolve_reference("There were no x today.")?;
    println!("classify: {}", classify_context(&gamma, &p).as_str());

    // Without BARBARA, the chain apples ⊑ fruit ⊑ food no longer composes.
    let weak = Calculus::standard().without("barbara");
    let q = parse_sentence("all apples are food", &reg)?;
    println!("without barbara, {} ... {}", q.format(Style::Natural), weak.entails(&gamma, &q));
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
