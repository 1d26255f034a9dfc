//! TK(n), the cumulative table and exact EK(n) by inverse census.
//!
//! ```bash
//! BRIDGECENSUS_BUDGET=200000 cargo run --release --example ek_table -- 30
//! ```

use bridgecensus::counting::{
    configured_budget, cumulative_tk, ek_exact, ek_upper_bound, known_ek, tk,
};

fn main() -> bridgecensus::Result<()> {
    let max: u32 = std::env::args()
        .nth(1)
        .map_or(24, |s| s.parse().expect("n"));
    let budget = configured_budget()?;

    println!(
        "{:>3} {:>8} {:>6} {:>3} {:>5} {:>9}  witness",
        "n", "TK", "cumTK", "EK", "bound", "known"
    );
    for n in 3..=max {
        let row = ek_exact(n, budget)?;
        let witness = row
            .witness
            .map(|(s, ts)| {
                let ts: Vec<String> = ts.iter().map(|t| t.to_string()).collect();
                format!("{s} -> {}", ts.join(", "))
            })
            .unwrap_or_default();
        println!(
            "{n:>3} {:>8} {:>6} {:>3} {:>5} {:>5}  {witness}",
            tk(n)?,
            cumulative_tk(n),
            row.value,
            ek_upper_bound(n),
            known_ek(n).map_or("-".into(), |v| v.to_string())
        );
    }
    Ok(())
}
