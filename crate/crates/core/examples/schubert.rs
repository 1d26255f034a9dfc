//! Canonical representatives, crossing numbers and even continued
//! fractions of 2-bridge knots.
//!
//! ```bash
//! cargo run --example schubert -- 22/27 29/81
//! ```

use bridgecensus::knot::{canonicalize, enumerate_knots, equivalent, even_standard_cf};
use bridgecensus::{Fraction, TwoBridgeKnot};

fn main() -> bridgecensus::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let args = if args.is_empty() {
        vec!["22/27".into(), "29/81".into(), "1/4".into()]
    } else {
        args
    };

    for s in &args {
        let f: Fraction = s.parse()?;
        match canonicalize(&f) {
            Ok(k) => println!(
                "{f}: {k}, standard {}, crossing {}, even form {}",
                k.std_cf(),
                k.crossing(),
                even_standard_cf(&k)?
            ),
            Err(e) => println!("{f}: {e}"),
        }
    }

    let (a, b) = ("5/27".parse()?, "11/27".parse()?);
    println!("5/27 ~ 11/27: {}", equivalent(&a, &b)?);

    for name in ["3_1", "4_1", "5_1", "5_2", "6_1", "6_2", "6_3"] {
        let k = TwoBridgeKnot::from_alias(name).expect("built-in name");
        println!("{name} = {k} = K({})", even_standard_cf(&k)?);
    }

    for n in 3..=10 {
        let knots = enumerate_knots(n)?;
        let shown: Vec<String> = knots
            .iter()
            .take(6)
            .map(|k| k.fraction().to_string())
            .collect();
        println!(
            "{n} crossings: {} knots, first {}",
            knots.len(),
            shown.join(" ")
        );
    }
    Ok(())
}
