//! Rewrite continued fractions with negative entries and zeros into
//! standard form.
//!
//! ```bash
//! cargo run --example rewriting -- "[3,-5,4,1,-2]"
//! ```

use bridgecensus::rational_cf::{
    delete_zeros, euclid_cf, remove_negatives_with_stats, standardize,
};
use bridgecensus::{ContinuedFraction, Fraction};

fn main() -> bridgecensus::Result<()> {
    let inputs: Vec<String> = std::env::args().skip(1).collect();
    let inputs = if inputs.is_empty() {
        vec![
            "[3,-5,4,1,-2]".to_string(),
            "[3,0,3,-2,3]".to_string(),
            "[3,-2,3,-2,3]".to_string(),
        ]
    } else {
        inputs
    };

    for s in inputs {
        let cf: ContinuedFraction = s.parse()?;
        let value = cf.value()?;
        println!("{cf} = {value}");
        println!("  zeros deleted   {}", delete_zeros(&cf)?);
        let (positive, stats) = remove_negatives_with_stats(&cf)?;
        println!("  all positive    {positive}");
        println!("  rules applied   {stats:?}");
        match standardize(&cf) {
            Ok(std) => println!("  standard        {std}  (crossing number {})", std.sum()),
            Err(e) => println!("  no standard form: {e}"),
        }
    }

    let f: Fraction = "29/81".parse()?;
    println!("euclid({f}) = {}", euclid_cf(&f)?);
    Ok(())
}
