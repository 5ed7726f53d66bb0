//! The canonical model of a theory: concepts denote down-sets of the
//! derivability order, and it decides exactly what the calculus proves.
//!
//! ```text
//! cargo run --example canonical_model
//! ```

use std::error::Error;

use ctxlogic::logic::{canonical_order, model_check, satisfies, sentence_space};
use ctxlogic::surface::ContextRegistry;
use ctxlogic::{build_canonical_model, decide_canonical, entails, Style, Theory};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let gamma = Theory::parse(
        "all dogs are animals\nall puppies are dogs\np is upward monotone\n",
        &ContextRegistry::open(),
    )?;

    let order = canonical_order(&gamma);
    for a in order.base() {
        let down: Vec<&str> = order.down_set(a).into_iter().map(|c| c.name()).collect();
        println!("↓{} = {{{}}}", a.name(), down.join(", "));
    }

    let m = build_canonical_model(&gamma)?;
    println!("{}", m.to_json());
    println!("model satisfies Γ: {}", satisfies(&m, &gamma)?);

    // Proof search and the model agree on every sentence over the inventory.
    let space = sentence_space(gamma.concepts(), gamma.contexts());
    let mut proved = 0;
    for phi in &space {
        let derivable = entails(&gamma, phi);
        assert_eq!(derivable, decide_canonical(&gamma, phi)?);
        assert_eq!(derivable, model_check(&m, phi)?);
        if derivable {
            proved += 1;
            println!("  ⊢ {}", phi.format(Style::Symbolic));
        }
    }
    println!("{proved} of {} sentences derivable; model agrees on all", space.len());
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
