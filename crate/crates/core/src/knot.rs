//! Schubert normal forms of 2-bridge knots.
//!
//! `K(q/p)` and `K(q'/p)` are the same knot up to mirror image iff
//! `q' = ±q` or `q q' = ±1 (mod p)`. A knot is stored as the least `q` of
//! that orbit lying in `(0, p/2)`, together with its standard continued
//! fraction, whose entry sum is the crossing number.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational_cf::{euclid_cf, ContinuedFraction, Fraction};

/// A nontrivial 2-bridge knot, identified with its mirror image.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwoBridgeKnot {
    fraction: Fraction,
    std_cf: ContinuedFraction,
    crossing: u32,
}

/// Result of classifying an arbitrary fraction with odd denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Knot {
    Trivial,
    TwoBridge(TwoBridgeKnot),
}

impl TwoBridgeKnot {
    /// Shorthand for `canonicalize(q/p)`.
    pub fn new(q: impl Into<BigInt>, p: impl Into<BigInt>) -> Result<Self> {
        canonicalize(&Fraction::new(q, p)?)
    }

    /// The knot whose fraction is the value of `cf`.
    pub fn from_cf(cf: &ContinuedFraction) -> Result<Self> {
        canonicalize(&cf.value()?)
    }

    /// Canonical `q/p` with `0 < q < p/2`.
    pub fn fraction(&self) -> &Fraction {
        &self.fraction
    }

    pub fn q(&self) -> &BigInt {
        self.fraction.numer()
    }

    pub fn p(&self) -> &BigInt {
        self.fraction.denom()
    }

    pub fn std_cf(&self) -> &ContinuedFraction {
        &self.std_cf
    }

    pub fn crossing(&self) -> u32 {
        self.crossing
    }

    /// Rolfsen name, for the handful of knots with a built-in alias.
    pub fn alias(&self) -> Option<&'static str> {
        ALIASES
            .iter()
            .find(|(_, q, p)| *self.q() == BigInt::from(*q) && *self.p() == BigInt::from(*p))
            .map(|(name, _, _)| *name)
    }

    pub fn from_alias(name: &str) -> Option<Self> {
        ALIASES
            .iter()
            .find(|(n, _, _)| *n == name)
            .map(|(_, q, p)| TwoBridgeKnot::new(*q, *p).expect("alias table holds knots"))
    }
}

/// Orders by crossing number, then denominator, then numerator.
impl Ord for TwoBridgeKnot {
    fn cmp(&self, other: &Self) -> Ordering {
        self.crossing
            .cmp(&other.crossing)
            .then_with(|| self.p().cmp(other.p()))
            .then_with(|| self.q().cmp(other.q()))
    }
}

impl PartialOrd for TwoBridgeKnot {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for TwoBridgeKnot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K({})", self.fraction)
    }
}

/// Canonical fractions of the knots named in the text, with their Rolfsen names.
const ALIASES: &[(&str, i64, i64)] = &[
    ("3_1", 1, 3),
    ("4_1", 2, 5),
    ("5_1", 1, 5),
    ("5_2", 2, 7),
    ("6_1", 2, 9),
    ("6_2", 3, 11),
    ("6_3", 5, 13),
    ("9_1", 1, 9),
    ("9_6", 5, 27),
    ("9_23", 19, 45),
];

fn mod_inverse(q: &BigInt, p: &BigInt) -> BigInt {
    let e = q.extended_gcd(p);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(p)
}

/// Classifies `f` as the trivial knot or a 2-bridge knot.
pub fn classify(f: &Fraction) -> Result<Knot> {
    match canonicalize(f) {
        Ok(k) => Ok(Knot::TwoBridge(k)),
        Err(Error::Trivial(_)) => Ok(Knot::Trivial),
        Err(e) => Err(e),
    }
}

/// Canonical representative of the Schubert orbit of `f`, mirror images identified.
pub fn canonicalize(f: &Fraction) -> Result<TwoBridgeKnot> {
    let p = f.denom();
    if p.is_even() {
        return Err(Error::IsLink(f.to_string()));
    }
    if p.is_one() {
        return Err(Error::Trivial(f.to_string()));
    }
    let q0 = f.numer().mod_floor(p);
    let inv = mod_inverse(&q0, p);
    let half = p >> 1u32; // q < p/2 iff q <= (p - 1)/2
    let q = [q0.clone(), p - &q0, inv.clone(), p - &inv]
        .into_iter()
        .filter(|q| q.is_positive() && *q <= half)
        .min()
        .expect("orbit meets (0, p/2)");
    let fraction = Fraction::new(q, p.clone())?;
    let std_cf = euclid_cf(&fraction)?;
    let crossing = u32::try_from(std_cf.sum())
        .map_err(|_| Error::OutOfRange(format!("crossing number of {f}")))?;
    Ok(TwoBridgeKnot {
        fraction,
        std_cf,
        crossing,
    })
}

/// Equivalence up to mirror image.
pub fn equivalent(f1: &Fraction, f2: &Fraction) -> Result<bool> {
    Ok(canonicalize(f1)? == canonicalize(f2)?)
}

/// Crossing number: sum of the standard continued fraction.
pub fn crossing_number(k: &TwoBridgeKnot) -> u32 {
    k.crossing
}

/// An even standard continued fraction: entries in {-2, 0, 2}, nonzero
/// ends, every zero flanked by two equal entries. Stored as the
/// lexicographically least of its four sign/reversal variants.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EvenStandardCf(Vec<i64>);

impl EvenStandardCf {
    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_cf(&self) -> ContinuedFraction {
        ContinuedFraction::new(self.0.clone())
    }

    /// Checks the structural constraints; returns a description of the first violation.
    pub fn validate(entries: &[i64]) -> std::result::Result<(), String> {
        if entries.is_empty() || !entries.len().is_multiple_of(2) {
            return Err(format!("length {} is not positive and even", entries.len()));
        }
        if let Some(a) = entries.iter().find(|a| ![-2, 0, 2].contains(*a)) {
            return Err(format!("entry {a} not in {{-2, 0, 2}}"));
        }
        if entries[0] == 0 || entries[entries.len() - 1] == 0 {
            return Err("zero at an end".into());
        }
        for w in entries.windows(3) {
            if w[1] == 0 && (w[0] != w[2] || w[0] == 0) {
                return Err(format!("zero flanked by {} and {}", w[0], w[2]));
            }
        }
        Ok(())
    }

    /// Picks the least of `v`, `-v`, reversed `v` and reversed `-v`.
    pub fn canonical(v: &[i64]) -> Self {
        let neg: Vec<i64> = v.iter().map(|a| -a).collect();
        let rev: Vec<i64> = v.iter().rev().copied().collect();
        let neg_rev: Vec<i64> = neg.iter().rev().copied().collect();
        EvenStandardCf(
            [v.to_vec(), neg, rev, neg_rev]
                .into_iter()
                .min()
                .expect("four variants"),
        )
    }

    /// Same expansion up to sign and reversal.
    pub fn equivalent_to(&self, other: &[i64]) -> bool {
        *self == EvenStandardCf::canonical(other)
    }
}

impl fmt::Display for EvenStandardCf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.as_cf().fmt(f)
    }
}

/// Expansion of `num/den` with even partial quotients, each chosen as the
/// even integer nearest to the reciprocal. Requires `num` even, `den` odd.
fn even_quotients(num: &BigInt, den: &BigInt) -> Result<Vec<i64>> {
    let (mut num, mut den) = (num.clone(), den.clone());
    let mut out = Vec::new();
    while !num.is_zero() {
        // x = 2 * floor((den + num) / (2 num)), the even integer within 1 of den/num
        let (mut top, mut bottom): (BigInt, BigInt) = (&den + &num, &num * 2);
        if bottom.is_negative() {
            top = -top;
            bottom = -bottom;
        }
        let x: BigInt = top.div_floor(&bottom) * 2;
        let rem = &den - &x * &num;
        out.push(
            x.to_i64()
                .ok_or_else(|| Error::OutOfRange("even quotient exceeds 64 bits".into()))?,
        );
        den = std::mem::replace(&mut num, rem);
    }
    Ok(out)
}

/// The even standard continued fraction of `k`.
pub fn even_standard_cf(k: &TwoBridgeKnot) -> Result<EvenStandardCf> {
    let (q, p) = (k.q(), k.p());
    // q and q - p represent the same knot; exactly one of them is even
    let num = if q.is_even() { q.clone() } else { q - p };
    let quotients = even_quotients(&num, p)?;
    let mut entries = Vec::new();
    for x in quotients {
        let sign = x.signum() * 2;
        for i in 0..x.abs() / 2 {
            if i > 0 {
                entries.push(0);
            }
            entries.push(sign);
        }
    }
    EvenStandardCf::validate(&entries)
        .map_err(|why| Error::Internal(format!("even expansion {entries:?} of {k}: {why}")))?;
    Ok(EvenStandardCf::canonical(&entries))
}

/// Length `2n` of the even standard continued fraction.
pub fn escf_length(k: &TwoBridgeKnot) -> Result<usize> {
    even_standard_cf(k).map(|e| e.len())
}

/// Compositions of `total` with every part >= 1 and both end parts >= 2,
/// keeping one of each reversal pair.
fn standard_compositions(total: u32, first: u32) -> Vec<Vec<i64>> {
    fn extend(prefix: &mut Vec<i64>, remaining: i64, out: &mut Vec<Vec<i64>>) {
        if remaining >= 2 {
            let mut done = prefix.clone();
            done.push(remaining);
            if done.iter().le(done.iter().rev()) {
                out.push(done);
            }
        }
        // leave room for a closing part >= 2
        for part in 1..=remaining - 2 {
            prefix.push(part);
            extend(prefix, remaining - part, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    let (total, first) = (total as i64, first as i64);
    if first == total {
        out.push(vec![total]);
    } else if total - first >= 2 {
        let mut prefix = vec![first];
        extend(&mut prefix, total - first, &mut out);
    }
    out
}

/// All 2-bridge knots with crossing number exactly `n`, sorted.
pub fn enumerate_knots(n: u32) -> Result<Vec<TwoBridgeKnot>> {
    if n < 3 {
        return Err(Error::OutOfRange(format!(
            "no 2-bridge knot has {n} crossings"
        )));
    }
    let found: BTreeSet<TwoBridgeKnot> = (2..=n)
        .into_par_iter()
        .flat_map_iter(|first| standard_compositions(n, first))
        .filter_map(|comp| {
            let value = ContinuedFraction::new(comp)
                .value()
                .expect("positive expansions evaluate");
            canonicalize(&value).ok()
        })
        .collect();
    Ok(found.into_iter().collect())
}

/// Knots with crossing number in `lo..=hi`, sorted.
pub fn enumerate_knots_range(lo: u32, hi: u32) -> Result<Vec<TwoBridgeKnot>> {
    let mut out = Vec::new();
    for n in lo.max(3)..=hi {
        out.extend(enumerate_knots(n)?);
    }
    Ok(out)
}
