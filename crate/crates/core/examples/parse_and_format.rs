//! Sentences in both spellings, and the context registry.
//!
//! ```text
//! cargo run --example parse_and_format
//! ```

use std::error::Error;

use ctxlogic::surface::{format_sentence, ContextRegistry, ContextTemplate};
use ctxlogic::{parse_sentence, ConceptSymbol, Style};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let open = ContextRegistry::open();
    for text in [
        "all apples are fruit",
        "if \"There were no x today.\"(dogs) then \"There were no x today.\"(animals)",
        "\"Some x are allergic to wheat.\" is upward monotone",
        "p is downward monotone",
    ] {
        let s = parse_sentence(text, &open)?;
        println!("{text}");
        println!("  natural:  {}", format_sentence(&s, Style::Natural));
        println!("  symbolic: {}", format_sentence(&s, Style::Symbolic));
        // Both spellings read back to the same sentence.
        assert_eq!(parse_sentence(&s.format(Style::Symbolic), &open)?, s);
    }

    // Concepts are case- and space-normalized.
    let a = ConceptSymbol::new("  South   African Soccer players")?;
    println!("concept: {:?}", a.name());

    // Filling a template reproduces the surface sentence.
    let t = ContextTemplate::parse("There is no time for x.")?;
    println!("substitute: {}", t.substitute(&ConceptSymbol::new("hesitation")?));

    // A closed registry rejects contexts it does not list.
    let closed = ContextRegistry::parse("Every x laughed.\n")?;
    println!(
        "closed registry, known context: {}",
        parse_sentence("\"Every x laughed.\" is downward monotone", &closed).is_ok()
    );
    match parse_sentence("\"Some x ran.\" is upward monotone", &closed) {
        Ok(_) => println!("closed registry, unknown context: accepted"),
        Err(e) => println!("closed registry, unknown context: {e}"),
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
