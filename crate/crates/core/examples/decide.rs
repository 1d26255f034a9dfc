//! Decide whether one knot group maps onto another, and list every
//! target of a knot.
//!
//! ```bash
//! cargo run --release --example decide -- 1/45
//! ```

use bridgecensus::cli::parse_knot;
use bridgecensus::epimorphism::{epimorphism_witness, targets_with_witnesses};

fn main() -> bridgecensus::Result<()> {
    let pairs = [
        ("5/27", "1/3"),
        ("19/45", "1/3"),
        ("1/9", "2/5"),
        ("1/45", "1/15"),
    ];
    for (s, t) in pairs {
        let (s, t) = (parse_knot(s)?, parse_knot(t)?);
        match epimorphism_witness(&s, &t)? {
            Some(w) => println!("{s} -> {t}: {w}, cf {}", w.cf()),
            None => println!("{s} -> {t}: none"),
        }
    }

    let source = parse_knot(&std::env::args().nth(1).unwrap_or_else(|| "1/45".into()))?;
    let found = targets_with_witnesses(&source)?;
    println!("{source} maps onto {} knot groups", found.len());
    for (t, w) in found {
        println!("  {t}  via eps={} c={:?}", w.eps_string(), w.c());
    }
    Ok(())
}
