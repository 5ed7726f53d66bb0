//! Randomized soundness and completeness checks against finite models.
//!
//! With reflexive context relations no model refutes a derivable sentence.
//! Dropping reflexivity breaks `if p(a) then p(a)`, and the fuzzer shrinks
//! the failure to a one-concept model.
//!
//! ```text
//! cargo run --example soundness_fuzz
//! ```

use std::error::Error;

use ctxlogic::logic::Calculus;
use ctxlogic::selfcheck::{agreement_fuzz, soundness_fuzz, ModelShape, RelationPool, TheoryShape};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let calc = Calculus::standard();
    for pool in [RelationPool::Reflexive, RelationPool::Unrestricted] {
        let shape = ModelShape { pool, ..ModelShape::default() };
        let run = soundness_fuzz(&calc, 2_000, 5, &shape);
        println!("{} relations: {} of {} models refute a derivable sentence", pool.as_str(), run.violations, run.trials);
        if let Some(cx) = run.counterexample {
            println!("{cx}");
        }
    }

    let run = agreement_fuzz(&calc, 500, 5, &TheoryShape::default());
    println!("proof search vs canonical model: {} of {} theories disagree", run.violations, run.trials);
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
