//! Closed-form counts: TK(n), the cumulative TK bound, EK bounds and the
//! generating function of source knots over a fixed target.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::epimorphism::{cells, census, census_cost, to_u128};
use crate::error::{Error, Result};
use crate::knot::TwoBridgeKnot;
use crate::rational_cf::ContinuedFraction;

/// Expansion budget used when neither the caller nor `BRIDGECENSUS_BUDGET` sets one.
/// Enough for exact EK(n) through n = 24.
pub const DEFAULT_BUDGET: u128 = 10_000;

/// Name of the environment variable overriding [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "BRIDGECENSUS_BUDGET";

/// The budget from `BRIDGECENSUS_BUDGET`, or [`DEFAULT_BUDGET`].
pub fn configured_budget() -> Result<u128> {
    match std::env::var(BUDGET_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("{BUDGET_ENV}={s:?} is not a nonnegative integer"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

/// `a choose b`.
pub fn binomial(a: u64, b: u64) -> Result<BigUint> {
    if b > a {
        return Err(Error::OutOfRange(format!("binomial({a}, {b})")));
    }
    let b = b.min(a - b);
    let mut acc = BigUint::from(1u32);
    for i in 0..b {
        acc *= a - i;
        acc /= i + 1;
    }
    Ok(acc)
}

/// Number of 2-bridge knots with crossing number `n` (Ernst and Sumners), mirrors identified.
pub fn tk(n: u32) -> Result<BigUint> {
    if n < 3 {
        return Err(Error::OutOfRange(format!("TK({n}) needs n >= 3")));
    }
    let one = BigUint::from(1u32);
    let main = &one << (n - 3);
    let total = match n % 4 {
        0 => main + (&one << ((n - 4) / 2)),
        1 => main + (&one << ((n - 3) / 2)),
        2 => main + (&one << ((n - 4) / 2)) - 1u32,
        _ => main + (&one << ((n - 3) / 2)) + 1u32,
    };
    Ok(total / 3u32)
}

/// `sum_{k=3}^{n/3} TK(k)`, the number of candidate targets for an `n`-crossing source.
pub fn cumulative_tk(n: u32) -> BigUint {
    (3..=n / 3).map(|k| tk(k).expect("k >= 3")).sum()
}

/// `floor((n-3)/6)`.
pub fn ek_upper_bound(n: u32) -> u32 {
    n.saturating_sub(3) / 6
}

pub fn is_palindromic(cf: &ContinuedFraction) -> bool {
    cf.is_palindromic()
}

/// Truncated generating function of source knots over one target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenFunSeries {
    pub target: TwoBridgeKnot,
    /// Coefficient of `t^c`, for every `c <= truncation` (zeros included).
    pub coeffs: BTreeMap<u32, BigUint>,
    pub truncation: u32,
}

impl GenFunSeries {
    pub fn coefficient(&self, c: u32) -> BigUint {
        self.coeffs.get(&c).cloned().unwrap_or_default()
    }

    /// Coefficients for `lo..=hi`.
    pub fn range(&self, lo: u32, hi: u32) -> Vec<BigUint> {
        (lo..=hi).map(|c| self.coefficient(c)).collect()
    }
}

impl fmt::Display for GenFunSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(c, v)| format!("{v}t^{c}"))
            .collect();
        if terms.is_empty() {
            write!(f, "0")?;
        } else {
            write!(f, "{}", terms.join(" + "))?;
        }
        write!(f, " + O(t^{})", self.truncation + 1)
    }
}

/// Number of distinct source knots contributed by cell `(n, k)`.
pub fn cell_knot_count(n: usize, k: u32, palindromic: bool) -> BigUint {
    let n64 = n as u64;
    let k64 = u64::from(k);
    let comps = binomial(2 * n64 + k64 - 1, k64).expect("valid binomial");
    if !palindromic {
        return comps << (2 * n);
    }
    let mut g = comps << (2 * n - 1);
    if k.is_multiple_of(2) {
        let half = k64 / 2;
        g += binomial(n64 + half - 1, half).expect("valid binomial") << (n - 1);
    }
    g
}

/// Coefficients of `f(target)` up to `t^max_exp`.
pub fn genfun(target: &TwoBridgeKnot, max_exp: u32) -> GenFunSeries {
    let palindromic = is_palindromic(target.std_cf());
    let mut coeffs: BTreeMap<u32, BigUint> = (0..=max_exp).map(|c| (c, BigUint::zero())).collect();
    let base = target.crossing();
    for (n, k) in cells(base, 0..=max_exp) {
        let c = (2 * n as u32 + 1) * base + k;
        *coeffs.get_mut(&c).expect("exponent in range") += cell_knot_count(n, k, palindromic);
    }
    GenFunSeries {
        target: target.clone(),
        coeffs,
        truncation: max_exp,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EkMethod {
    Exact,
    Bound,
}

impl FromStr for EkMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(EkMethod::Exact),
            "bound" => Ok(EkMethod::Bound),
            other => Err(Error::Parse(format!("unknown EK method {other:?}"))),
        }
    }
}

/// A source attaining EK(n), with its targets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EkResult {
    pub n: u32,
    pub value: u32,
    /// Least source (by crossing, p, q) attaining the maximum, if the maximum is positive.
    pub witness: Option<(TwoBridgeKnot, Vec<TwoBridgeKnot>)>,
    /// Expansions walked.
    pub expansions: u128,
}

/// Largest number of proper nontrivial targets over `n`-crossing 2-bridge knots.
pub fn ek(n: u32, method: EkMethod, budget: u128) -> Result<u32> {
    match method {
        EkMethod::Bound => {
            if n < 3 {
                return Err(Error::OutOfRange(format!("EK({n}) needs n >= 3")));
            }
            Ok(ek_upper_bound(n))
        }
        EkMethod::Exact => ek_exact(n, budget).map(|r| r.value),
    }
}

/// Exact EK(n) by inverse enumeration, with a witness.
pub fn ek_exact(n: u32, budget: u128) -> Result<EkResult> {
    if n < 3 {
        return Err(Error::OutOfRange(format!("EK({n}) needs n >= 3")));
    }
    let needed = to_u128(&census_cost(n..=n)?);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let pairs = census(n..=n)?;
    let mut best: Option<(TwoBridgeKnot, Vec<TwoBridgeKnot>)> = None;
    for (source, targets) in pairs {
        if best.as_ref().is_none_or(|(_, t)| targets.len() > t.len()) {
            best = Some((source, targets.into_keys().collect()));
        }
    }
    let value = best.as_ref().map_or(0, |(_, t)| t.len() as u32);
    Ok(EkResult {
        n,
        value,
        witness: best,
        expansions: needed,
    })
}

/// Known EK(n) for `3 <= n <= 30`.
pub fn known_ek(n: u32) -> Option<u32> {
    match n {
        3..=8 => Some(0),
        9..=14 | 18..=20 | 24 => Some(1),
        15..=17 | 21..=23 | 25..=30 => Some(2),
        _ => None,
    }
}

/// The `(crossings, value)` columns of the cumulative TK table, for `9 <= n <= 32`.
pub fn table1() -> Vec<([u32; 3], BigUint)> {
    (3..=10)
        .map(|m| {
            let n = 3 * m;
            ([n, n + 1, n + 2], cumulative_tk(n))
        })
        .collect()
}

/// Convenience for tests and tables.
pub fn as_u64(x: &BigUint) -> u64 {
    x.to_u64().expect("fits in u64")
}
