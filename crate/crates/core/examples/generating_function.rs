//! Closed-form counts of source knots over a target, compared with brute
//! force enumeration.
//!
//! ```bash
//! cargo run --release --example generating_function -- 3/7 30
//! ```

use std::collections::BTreeMap;

use bridgecensus::counting::genfun;
use bridgecensus::epimorphism::sources;
use bridgecensus::knot::canonicalize;

fn main() -> bridgecensus::Result<()> {
    let mut args = std::env::args().skip(1);
    let target = canonicalize(&args.next().unwrap_or_else(|| "1/3".into()).parse()?)?;
    let max: u32 = args
        .next()
        .map_or(25, |s| s.parse().expect("exponent bound"));

    let series = genfun(&target, max);
    println!("f({}) = {series}", target.fraction());

    let brute_max = max.min(3 * target.crossing() + 9);
    let mut counted: BTreeMap<u32, usize> = BTreeMap::new();
    for k in sources(&target, brute_max)?.keys() {
        *counted.entry(k.crossing()).or_default() += 1;
    }
    for c in 3 * target.crossing()..=brute_max {
        println!(
            "t^{c}: closed form {}, enumerated {}",
            series.coefficient(c),
            counted.get(&c).unwrap_or(&0)
        );
    }
    Ok(())
}
