//! Exact rationals, 2x2 integer matrices and the continued fraction
//! rewriting calculus.
//!
//! A continued fraction `[a1, a2, ..., am]` denotes `1/(a1 + 1/(a2 + ...))`.
//! Its value is read off the product of generator matrices
//! `((ai, 1), (1, 0))`: with `P = G(a1)...G(am)` the value is `P21 / P11`.
//! Every rewriting step in this module is an identity of such products up
//! to a global sign, which leaves the ratio of the first column unchanged.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact rational `q/p` in lowest terms with `p >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fraction {
    q: BigInt,
    p: BigInt,
}

impl Fraction {
    /// Builds `q/p`, reducing to lowest terms and moving the sign to the numerator.
    pub fn new(q: impl Into<BigInt>, p: impl Into<BigInt>) -> Result<Self> {
        let (q, p) = (q.into(), p.into());
        if p.is_zero() {
            return Err(Error::UndefinedValue);
        }
        let g = q.gcd(&p);
        let (mut q, mut p) = (q / &g, p / &g);
        if p.is_negative() {
            q = -q;
            p = -p;
        }
        Ok(Fraction { q, p })
    }

    pub fn zero() -> Self {
        Fraction {
            q: BigInt::zero(),
            p: BigInt::one(),
        }
    }

    pub fn numer(&self) -> &BigInt {
        &self.q
    }

    pub fn denom(&self) -> &BigInt {
        &self.p
    }

    pub fn is_positive(&self) -> bool {
        self.q.is_positive()
    }

    /// True when `0 < self < 1`.
    pub fn in_unit_interval(&self) -> bool {
        self.q.is_positive() && self.q < self.p
    }

    pub fn recip(&self) -> Result<Self> {
        Fraction::new(self.p.clone(), self.q.clone())
    }

    pub fn neg(&self) -> Self {
        Fraction {
            q: -&self.q,
            p: self.p.clone(),
        }
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.q * &other.p).cmp(&(&other.q * &self.p))
    }
}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.q, self.p)
    }
}

impl FromStr for Fraction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse = |t: &str| {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| Error::Parse(format!("not an integer: {t:?}")))
        };
        match s.split_once('/') {
            Some((q, p)) => Fraction::new(parse(q)?, parse(p)?)
                .map_err(|_| Error::Parse(format!("zero denominator in {s:?}"))),
            None => Fraction::new(parse(s)?, 1),
        }
    }
}

impl Serialize for Fraction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Fraction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A 2x2 matrix over the integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix2 {
    pub m11: BigInt,
    pub m12: BigInt,
    pub m21: BigInt,
    pub m22: BigInt,
}

impl Matrix2 {
    pub fn new(
        m11: impl Into<BigInt>,
        m12: impl Into<BigInt>,
        m21: impl Into<BigInt>,
        m22: impl Into<BigInt>,
    ) -> Self {
        Matrix2 {
            m11: m11.into(),
            m12: m12.into(),
            m21: m21.into(),
            m22: m22.into(),
        }
    }

    pub fn identity() -> Self {
        Matrix2::new(1, 0, 0, 1)
    }

    /// The generator `((x, 1), (1, 0))` of a single entry; determinant -1.
    pub fn generator(x: i64) -> Self {
        Matrix2::new(x, 1, 1, 0)
    }

    pub fn det(&self) -> BigInt {
        &self.m11 * &self.m22 - &self.m12 * &self.m21
    }

    /// Right-multiplies by `generator(x)` in place.
    fn push_generator(&mut self, x: i64) {
        // (m11 m12; m21 m22)(x 1; 1 0) = (x*m11 + m12, m11; x*m21 + m22, m21)
        let n11 = &self.m11 * x + &self.m12;
        let n21 = &self.m21 * x + &self.m22;
        self.m12 = std::mem::replace(&mut self.m11, n11);
        self.m22 = std::mem::replace(&mut self.m21, n21);
    }
}

impl Mul for &Matrix2 {
    type Output = Matrix2;

    fn mul(self, rhs: &Matrix2) -> Matrix2 {
        Matrix2 {
            m11: &self.m11 * &rhs.m11 + &self.m12 * &rhs.m21,
            m12: &self.m11 * &rhs.m12 + &self.m12 * &rhs.m22,
            m21: &self.m21 * &rhs.m11 + &self.m22 * &rhs.m21,
            m22: &self.m21 * &rhs.m12 + &self.m22 * &rhs.m22,
        }
    }
}

/// A finite continued fraction `[a1, ..., am]`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ContinuedFraction(Vec<i64>);

impl ContinuedFraction {
    pub fn new(entries: Vec<i64>) -> Self {
        ContinuedFraction(entries)
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<i64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `[am, ..., a1]`.
    pub fn reversed(&self) -> Self {
        ContinuedFraction(self.0.iter().rev().copied().collect())
    }

    /// `[-a1, ..., -am]`, which evaluates to the negated value.
    pub fn negated(&self) -> Self {
        ContinuedFraction(self.0.iter().map(|a| -a).collect())
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn abs_sum(&self) -> i64 {
        self.0.iter().map(|a| a.abs()).sum()
    }

    /// All entries positive, both ends at least 2.
    pub fn is_standard(&self) -> bool {
        match (self.0.first(), self.0.last()) {
            (Some(&first), Some(&last)) => first >= 2 && last >= 2 && self.0.iter().all(|&a| a > 0),
            _ => false,
        }
    }

    pub fn is_palindromic(&self) -> bool {
        self.0.iter().eq(self.0.iter().rev())
    }

    pub fn matrix(&self) -> Matrix2 {
        cf_matrix(self)
    }

    pub fn value(&self) -> Result<Fraction> {
        cf_eval(self)
    }
}

impl From<Vec<i64>> for ContinuedFraction {
    fn from(v: Vec<i64>) -> Self {
        ContinuedFraction(v)
    }
}

impl From<&[i64]> for ContinuedFraction {
    fn from(v: &[i64]) -> Self {
        ContinuedFraction(v.to_vec())
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("]")
    }
}

impl FromStr for ContinuedFraction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("expected [a1,a2,...], got {s:?}")))?;
        if inner.trim().is_empty() {
            return Ok(ContinuedFraction::default());
        }
        inner
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::Parse(format!("bad entry {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(ContinuedFraction)
    }
}

/// Ordered product of the generator matrices of `cf`; the empty product is the identity.
pub fn cf_matrix(cf: &ContinuedFraction) -> Matrix2 {
    let mut m = Matrix2::identity();
    for &x in cf.entries() {
        m.push_generator(x);
    }
    m
}

/// Value `m21/m11` of the matrix product, in lowest terms.
pub fn cf_eval(cf: &ContinuedFraction) -> Result<Fraction> {
    let m = cf_matrix(cf);
    Fraction::new(m.m21, m.m11)
}

/// All-positive expansion of `f` by the Euclidean algorithm (floor quotients).
pub fn euclid_cf(f: &Fraction) -> Result<ContinuedFraction> {
    if !f.in_unit_interval() {
        return Err(Error::OutOfRange(format!("{f} is not in (0,1)")));
    }
    let (mut num, mut den) = (f.numer().clone(), f.denom().clone());
    let mut out = Vec::new();
    while !num.is_zero() {
        let (quot, rem) = den.div_rem(&num);
        let quot = quot
            .to_i64()
            .ok_or_else(|| Error::OutOfRange(format!("partial quotient of {f} exceeds 64 bits")))?;
        out.push(quot);
        den = std::mem::replace(&mut num, rem);
    }
    Ok(ContinuedFraction(out))
}

/// Removes every zero at position >= 1, leftmost first.
///
/// Interior: `[.., x, 0, y, ..] -> [.., x + y, ..]`.
/// Trailing: `[.., x, a, 0] -> [.., x]` (`G(a) G(0)` fixes the first column).
/// A zero in front is left alone; it has no continued fraction rewrite.
fn strip_zeros(v: &mut Vec<i64>) {
    let mut i = 1;
    while i < v.len() {
        if v[i] != 0 {
            i += 1;
            continue;
        }
        if i + 1 < v.len() {
            let merged = v[i - 1] + v[i + 1];
            v.splice(i - 1..=i + 1, [merged]);
        } else {
            v.truncate(i - 1);
        }
        // a merge may expose a new zero one step back
        i = i.saturating_sub(1).max(1);
    }
}

/// `[.., x, 1] = [.., x + 1]`.
fn absorb_trailing_one(v: &mut Vec<i64>) {
    if v.len() >= 2 && v[v.len() - 1] == 1 {
        v.pop();
        *v.last_mut().expect("len >= 1") += 1;
    }
}

/// Value-preserving zero deletion.
pub fn delete_zeros(cf: &ContinuedFraction) -> Result<ContinuedFraction> {
    let mut v = cf.0.clone();
    strip_zeros(&mut v);
    let out = ContinuedFraction(v);
    if out.matrix().m11.is_zero() {
        return Err(Error::UndefinedValue);
    }
    Ok(out)
}

/// Which negative-entry rule fired, for coverage accounting.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RewriteStats {
    /// Interior block of length >= 2.
    pub case1: usize,
    /// Interior single entry `-b`, `b >= 2`.
    pub case2: usize,
    /// Trailing block of length >= 2.
    pub case3: usize,
    /// Trailing single entry `-b`, `b >= 2`.
    pub case4: usize,
    /// Trailing `-1` absorbed into its neighbour.
    pub trailing_unit: usize,
    /// Interior `-1`: `[.., a, -1, c, T] -> [.., a - 1, 1 - c, -T]`.
    pub unit_flip: usize,
    /// Rewriting reached a non-positive leading entry and the value was
    /// re-expanded by the Euclidean algorithm instead.
    pub reexpanded: usize,
}

impl RewriteStats {
    pub fn merge(&mut self, other: &RewriteStats) {
        self.case1 += other.case1;
        self.case2 += other.case2;
        self.case3 += other.case3;
        self.case4 += other.case4;
        self.trailing_unit += other.trailing_unit;
        self.unit_flip += other.unit_flip;
        self.reexpanded += other.reexpanded;
    }
}

/// Rewrites `cf` into an all-positive expansion of the same value, with a
/// trailing 1 absorbed into its neighbour.
pub fn remove_negatives(cf: &ContinuedFraction) -> Result<ContinuedFraction> {
    remove_negatives_with_stats(cf).map(|(out, _)| out)
}

/// As [`remove_negatives`], also reporting which rules were applied.
///
/// Each pass rewrites the leftmost maximal negative block `-b1, ..., -bl`
/// sitting between a positive prefix `.., ak` and a positive tail
/// `c1, c2, ..` (possibly empty):
///
/// ```text
/// (1) [.., ak, -b1..-bl, c1, ..] = [.., ak-1, 1, b1-1, b2..b(l-1), bl-1, 1, c1-1, ..]
/// (2) [.., ak, -b1, c1, ..]      = [.., ak-1, 1, b1-2, 1, c1-1, ..]
/// (3) [.., ak, -b1..-bl]         = [.., ak-1, 1, b1-1, b2..bl]
/// (4) [.., ak, -b1]              = [.., ak-1, 1, b1-1]
/// ```
///
/// plus two rules for a lone `-1`, which (2) and (4) do not cover: a trailing
/// `-1` is absorbed, and an interior one uses
/// `G(a) G(-1) G(c) = -G(a-1) G(1-c) N` with `N = diag(1, -1)`, where `N`
/// commutes past the tail by negating it. Every pass lowers the sum of
/// absolute values, so the loop terminates.
///
/// A prefix `[1, -b, ..]` rewrites to a leading zero, which none of these
/// rules can remove. When that happens the value is re-expanded with
/// [`euclid_cf`] and `reexpanded` is bumped. A non-positive leading entry in
/// the input itself is `MalformedInput`.
pub fn remove_negatives_with_stats(
    cf: &ContinuedFraction,
) -> Result<(ContinuedFraction, RewriteStats)> {
    let value = cf.value()?;
    if !value.in_unit_interval() {
        return Err(Error::OutOfRange(format!("{cf} = {value} is not in (0,1)")));
    }
    if cf.entries()[0] <= 0 {
        return Err(Error::MalformedInput(format!(
            "leading entry of {cf} is not positive"
        )));
    }
    let mut stats = RewriteStats::default();
    let mut v = match positive_form(cf.entries(), &mut stats) {
        Ok(v) => v,
        Err(Error::MalformedInput(_)) => {
            stats.reexpanded += 1;
            euclid_cf(&value)?.into_entries()
        }
        Err(e) => return Err(e),
    };
    absorb_trailing_one(&mut v);
    Ok((ContinuedFraction(v), stats))
}

/// The rewriting loop of [`remove_negatives_with_stats`] without the value
/// check or trailing absorption. Works on any word with a positive leading
/// entry, e.g. a prefix of a longer expansion.
pub(crate) fn positive_form(entries: &[i64], stats: &mut RewriteStats) -> Result<Vec<i64>> {
    let mut v = entries.to_vec();
    strip_zeros(&mut v);
    loop {
        match v.first() {
            Some(&a) if a > 0 => {}
            Some(_) => {
                return Err(Error::MalformedInput(format!(
                    "leading entry of {} is not positive",
                    ContinuedFraction(v)
                )))
            }
            None => return Err(Error::MalformedInput("empty expansion".into())),
        }
        let Some(start) = v.iter().position(|&a| a < 0) else {
            break;
        };
        let end = v[start..]
            .iter()
            .position(|&a| a >= 0)
            .map_or(v.len(), |o| start + o);
        let prefix = &v[..start - 1];
        let ak = v[start - 1];
        let b: Vec<i64> = v[start..end].iter().map(|x| -x).collect();
        let tail = &v[end..];
        let l = b.len();

        let mut next = prefix.to_vec();
        match (l, tail.split_first()) {
            (1, None) if b[0] == 1 => {
                stats.trailing_unit += 1;
                next.push(ak - 1);
            }
            (1, Some((&c1, rest))) if b[0] == 1 => {
                stats.unit_flip += 1;
                next.extend([ak - 1, 1 - c1]);
                next.extend(rest.iter().map(|x| -x));
            }
            (1, Some((&c1, rest))) => {
                stats.case2 += 1;
                next.extend([ak - 1, 1, b[0] - 2, 1, c1 - 1]);
                next.extend_from_slice(rest);
            }
            (1, None) => {
                stats.case4 += 1;
                next.extend([ak - 1, 1, b[0] - 1]);
            }
            (_, Some((&c1, rest))) => {
                stats.case1 += 1;
                next.extend([ak - 1, 1, b[0] - 1]);
                next.extend_from_slice(&b[1..l - 1]);
                next.extend([b[l - 1] - 1, 1, c1 - 1]);
                next.extend_from_slice(rest);
            }
            (_, None) => {
                stats.case3 += 1;
                next.extend([ak - 1, 1, b[0] - 1]);
                next.extend_from_slice(&b[1..]);
            }
        }
        strip_zeros(&mut next);
        v = next;
    }
    Ok(v)
}

/// The standard expansion (positive entries, both ends >= 2) of the value of `cf`.
///
/// Only values in `(0, 1/2)` have one; anything in `[1/2, 1)` ends up with a
/// leading 1 and is rejected with `OutOfRange`.
pub fn standardize(cf: &ContinuedFraction) -> Result<ContinuedFraction> {
    let out = remove_negatives(cf)?;
    if out.entries().first() == Some(&1) {
        return Err(Error::OutOfRange(format!(
            "{cf} has value >= 1/2 and no standard expansion"
        )));
    }
    if !out.is_standard() {
        return Err(Error::Internal(format!("standardize({cf}) produced {out}")));
    }
    Ok(out)
}
