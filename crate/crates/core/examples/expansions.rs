//! Build expansions over a target knot and group them by the source knot
//! they describe.
//!
//! ```bash
//! cargo run --example expansions -- 1/3 11
//! ```

use bridgecensus::epimorphism::{enumerate_expansions, sources};
use bridgecensus::knot::canonicalize;

fn main() -> bridgecensus::Result<()> {
    let mut args = std::env::args().skip(1);
    let target = canonicalize(&args.next().unwrap_or_else(|| "1/3".into()).parse()?)?;
    let max: u32 = args
        .next()
        .map_or(10, |s| s.parse().expect("crossing bound"));

    println!("target {target}, standard {}", target.std_cf());
    for e in enumerate_expansions(&target, 3 * target.crossing()) {
        println!(
            "  {e}\n    cf {}  costs {:?}  crossing {}  source {}",
            e.cf(),
            e.reduced_costs(),
            e.crossing(),
            e.source()?
        );
    }

    for (source, witnesses) in sources(&target, max)? {
        println!(
            "{source} (crossing {}): {} witnesses, first {}",
            source.crossing(),
            witnesses.len(),
            witnesses[0]
        );
    }
    Ok(())
}
