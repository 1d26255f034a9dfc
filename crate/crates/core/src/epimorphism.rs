//! Epimorphisms between 2-bridge knot groups.
//!
//! `G(K(r~))` maps onto `G(K(r))` exactly when `r~` has an expansion of odd
//! type `2n+1` over the standard continued fraction `a` of `r`:
//!
//! ```text
//! r~ = [e1 a, 2c1, e2 a^-1, 2c2, ..., e2n a^-1, 2c2n, e(2n+1) a]
//! ```
//!
//! with signs `ei = ±1`, `e1 = 1`, and integers `ci`. Such an expansion has
//! crossing number `(2n+1)|a| + sum(cbar_i)` where the reduced cost
//! `cbar_i = 2|ci| - psi(i) - psibar(i)` is never negative. Everything in
//! this module is phrased in terms of that cost.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::RangeInclusive;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::counting::binomial;
use crate::error::{Error, Result};
use crate::knot::{canonicalize, enumerate_knots_range, TwoBridgeKnot};
use crate::rational_cf::{positive_form, ContinuedFraction, RewriteStats};

/// An expansion of type `2n+1` over a standard base.
///
/// Indices into `eps` run over `0..=2n` and into `c` over `0..2n`; connector
/// `c[i]` sits between blocks `i` and `i+1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrsExpansion {
    base: ContinuedFraction,
    n: usize,
    eps: Vec<i8>,
    c: Vec<i64>,
}

impl OrsExpansion {
    pub fn new(base: ContinuedFraction, eps: Vec<i8>, c: Vec<i64>) -> Result<Self> {
        if !base.is_standard() {
            return Err(Error::MalformedInput(format!(
                "base {base} is not standard"
            )));
        }
        let n = c.len() / 2;
        if n == 0 || c.len() != 2 * n || eps.len() != 2 * n + 1 {
            return Err(Error::MalformedInput(format!(
                "need 2n >= 2 connectors and 2n+1 signs, got {} and {}",
                c.len(),
                eps.len()
            )));
        }
        if eps.iter().any(|e| e.abs() != 1) || eps[0] != 1 {
            return Err(Error::MalformedInput(format!(
                "signs {eps:?} must be ±1 starting with +1"
            )));
        }
        if let Some(i) = (0..2 * n).find(|&i| c[i] == 0 && eps[i] != eps[i + 1]) {
            return Err(Error::MalformedInput(format!(
                "connector {} is zero across a sign change (reduces to a lower type)",
                i + 1
            )));
        }
        Ok(OrsExpansion { base, n, eps, c })
    }

    /// The all-positive, zero-connector expansion `[a, 0, a^-1, 0, ..., a]`.
    pub fn trivial_connectors(base: ContinuedFraction, n: usize) -> Result<Self> {
        OrsExpansion::new(base, vec![1; 2 * n + 1], vec![0; 2 * n])
    }

    pub fn base(&self) -> &ContinuedFraction {
        &self.base
    }

    /// Half the type minus one: the expansion has `2n+1` copies of the base.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn eps(&self) -> &[i8] {
        &self.eps
    }

    /// Connector halves; the continued fraction holds `2 * c[i]`.
    pub fn c(&self) -> &[i64] {
        &self.c
    }

    /// Signs as a string of `+` and `-`.
    pub fn eps_string(&self) -> String {
        self.eps
            .iter()
            .map(|&e| if e > 0 { '+' } else { '-' })
            .collect()
    }

    /// `[e1 a, 2c1, e2 a^-1, ..., e(2n+1) a]`.
    pub fn cf(&self) -> ContinuedFraction {
        let a = self.base.entries();
        let m = a.len();
        let mut out = Vec::with_capacity((2 * self.n + 1) * m + 2 * self.n);
        for (i, &e) in self.eps.iter().enumerate() {
            let e = i64::from(e);
            if i % 2 == 0 {
                out.extend(a.iter().map(|x| e * x));
            } else {
                out.extend(a.iter().rev().map(|x| e * x));
            }
            if let Some(&ci) = self.c.get(i) {
                out.push(2 * ci);
            }
        }
        ContinuedFraction::new(out)
    }

    /// 1 when `eps[i] * c[i] < 0`.
    pub fn psi(&self, i: usize) -> u32 {
        u32::from(i64::from(self.eps[i]) * self.c[i] < 0)
    }

    /// 1 when `c[i] * eps[i+1] < 0`.
    pub fn psi_bar(&self, i: usize) -> u32 {
        u32::from(self.c[i] * i64::from(self.eps[i + 1]) < 0)
    }

    /// `cbar_i = 2|c_i| - psi(i) - psibar(i)`, one per connector.
    pub fn reduced_costs(&self) -> Vec<u32> {
        (0..2 * self.n)
            .map(|i| {
                let twice =
                    u32::try_from(2 * self.c[i].unsigned_abs()).expect("connector fits in u32");
                twice - self.psi(i) - self.psi_bar(i)
            })
            .collect()
    }

    /// Crossing number of the source knot, from the closed formula.
    pub fn crossing(&self) -> u32 {
        let base = u32::try_from(self.base.sum()).expect("standard base has positive sum");
        (2 * self.n as u32 + 1) * base + self.reduced_costs().iter().sum::<u32>()
    }

    /// The knot `K(r~)` this expansion describes.
    pub fn source(&self) -> Result<TwoBridgeKnot> {
        match canonicalize(&self.cf().value()?) {
            Err(Error::IsLink(f)) => Err(Error::Internal(format!(
                "odd-type expansion {self} gave link {f}"
            ))),
            other => other,
        }
    }
}

impl fmt::Display for OrsExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.c.iter().map(|x| x.to_string()).collect();
        write!(
            f,
            "base={} n={} eps={} c=({})",
            self.base,
            self.n,
            self.eps_string(),
            c.join(",")
        )
    }
}

/// Expansions (over a base of crossing number `a`) whose crossing number
/// is `(2n+1)a + k`: `2^(2n)` sign/connector choices per weak composition
/// of `k` into `2n` reduced costs.
pub fn cell_size(n: usize, k: u32) -> BigUint {
    let compositions = if k == 0 {
        BigUint::from(1u32)
    } else {
        binomial(2 * n as u64 + u64::from(k) - 1, u64::from(k)).expect("valid binomial")
    };
    compositions << (2 * n)
}

/// `(n, k)` pairs with `(2n+1) * base_crossing + k` in `crossings`.
pub fn cells(base_crossing: u32, crossings: RangeInclusive<u32>) -> Vec<(usize, u32)> {
    let mut out = Vec::new();
    if base_crossing == 0 {
        return out;
    }
    let mut n = 1usize;
    loop {
        let floor = (2 * n as u32 + 1) * base_crossing;
        if floor > *crossings.end() {
            break;
        }
        let lo = crossings.start().saturating_sub(floor);
        for k in lo..=crossings.end() - floor {
            out.push((n, k));
        }
        n += 1;
    }
    out
}

/// Number of expansions over `target` with crossing number in `crossings`.
pub fn expansion_total(target: &TwoBridgeKnot, crossings: RangeInclusive<u32>) -> BigUint {
    cells(target.crossing(), crossings)
        .into_iter()
        .map(|(n, k)| cell_size(n, k))
        .sum()
}

/// Weak compositions of `total` into `parts` nonnegative parts, lexicographically descending.
pub fn weak_compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    fn go(total: u32, parts: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in (0..=total).rev() {
            prefix.push(first);
            go(total - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if parts > 0 {
        go(total, parts, &mut Vec::with_capacity(parts), &mut out);
    }
    out
}

/// Connector half and next sign for reduced cost `j` after sign `eps`.
///
/// Even `j` keeps the sign: `2c = eps*j` or `2c = -eps*(j+2)`.
/// Odd `j` flips it: `2c = ±(j+1)`.
fn realize_connector(j: u32, eps: i8, flip_choice: bool) -> (i64, i8) {
    let j = i64::from(j);
    let e = i64::from(eps);
    if j % 2 == 0 {
        let c = if flip_choice {
            -e * (j / 2 + 1)
        } else {
            e * j / 2
        };
        (c, eps)
    } else {
        let c = if flip_choice {
            -(j + 1) / 2
        } else {
            (j + 1) / 2
        };
        (c, -eps)
    }
}

fn realize(base: &ContinuedFraction, costs: &[u32], choices: u64) -> OrsExpansion {
    let mut eps = Vec::with_capacity(costs.len() + 1);
    let mut c = Vec::with_capacity(costs.len());
    eps.push(1i8);
    for (i, &j) in costs.iter().enumerate() {
        let (ci, next) = realize_connector(j, eps[i], choices >> i & 1 == 1);
        c.push(ci);
        eps.push(next);
    }
    OrsExpansion {
        base: base.clone(),
        n: costs.len() / 2,
        eps,
        c,
    }
}

/// Every expansion in cell `(n, k)` over `base`.
pub fn cell_expansions(
    base: &ContinuedFraction,
    n: usize,
    k: u32,
) -> impl Iterator<Item = OrsExpansion> + '_ {
    weak_compositions(k, 2 * n)
        .into_iter()
        .flat_map(move |costs| (0..1u64 << (2 * n)).map(move |bits| realize(base, &costs, bits)))
}

/// All expansions over the standard continued fraction of `target` with
/// crossing number in `crossings`, cell by cell.
pub fn expansions_in_range(
    target: &TwoBridgeKnot,
    crossings: RangeInclusive<u32>,
) -> impl Iterator<Item = OrsExpansion> + '_ {
    cells(target.crossing(), crossings)
        .into_iter()
        .flat_map(move |(n, k)| cell_expansions(target.std_cf(), n, k))
}

/// All expansions over `target` with crossing number at most `max_crossing`.
/// Empty below `3 * c(target)`.
pub fn enumerate_expansions(
    target: &TwoBridgeKnot,
    max_crossing: u32,
) -> impl Iterator<Item = OrsExpansion> + '_ {
    expansions_in_range(target, 0..=max_crossing)
}

/// Source knots mapping onto `target` with crossing in `crossings`, each
/// with the witnesses found for it (sorted).
pub fn sources_in_range(
    target: &TwoBridgeKnot,
    crossings: RangeInclusive<u32>,
) -> Result<BTreeMap<TwoBridgeKnot, Vec<OrsExpansion>>> {
    let base = target.std_cf();
    let work: Vec<(usize, Vec<u32>)> = cells(target.crossing(), crossings)
        .into_iter()
        .flat_map(|(n, k)| {
            weak_compositions(k, 2 * n)
                .into_iter()
                .map(move |costs| (n, costs))
        })
        .collect();
    let merged = work
        .par_iter()
        .map(|(n, costs)| {
            let mut local: HashMap<TwoBridgeKnot, Vec<OrsExpansion>> = HashMap::new();
            for bits in 0..1u64 << (2 * n) {
                let e = realize(base, costs, bits);
                local.entry(e.source()?).or_default().push(e);
            }
            Ok(local)
        })
        .try_reduce(HashMap::new, |mut a, b| {
            for (k, mut v) in b {
                a.entry(k).or_default().append(&mut v);
            }
            Ok(a)
        })?;
    Ok(merged
        .into_iter()
        .map(|(k, mut v)| {
            v.sort();
            (k, v)
        })
        .collect())
}

/// Source knots with crossing at most `max_crossing` whose groups map onto `target`'s.
pub fn sources(
    target: &TwoBridgeKnot,
    max_crossing: u32,
) -> Result<BTreeMap<TwoBridgeKnot, Vec<OrsExpansion>>> {
    sources_in_range(target, 0..=max_crossing)
}

/// One (source, target, witness) triple of the census.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CensusRecord {
    pub source: TwoBridgeKnot,
    pub target: TwoBridgeKnot,
    pub witness: OrsExpansion,
}

/// All epimorphic pairs with source crossing number in `crossings`, found by
/// expanding every possible target. Keys are sources; each value maps a
/// target to its least witness.
pub fn census(
    crossings: RangeInclusive<u32>,
) -> Result<BTreeMap<TwoBridgeKnot, BTreeMap<TwoBridgeKnot, OrsExpansion>>> {
    let targets = enumerate_knots_range(3, crossings.end() / 3)?;
    let per_target: Vec<(TwoBridgeKnot, BTreeMap<TwoBridgeKnot, Vec<OrsExpansion>>)> = targets
        .into_par_iter()
        .map(|t| {
            let found = sources_in_range(&t, crossings.clone())?;
            Ok((t, found))
        })
        .collect::<Result<_>>()?;
    let mut out: BTreeMap<TwoBridgeKnot, BTreeMap<TwoBridgeKnot, OrsExpansion>> = BTreeMap::new();
    for (target, found) in per_target {
        for (source, witnesses) in found {
            let first = witnesses
                .into_iter()
                .next()
                .expect("grouped sources have a witness");
            out.entry(source).or_default().insert(target.clone(), first);
        }
    }
    Ok(out)
}

/// Number of expansions [`census`] walks for source crossings in `crossings`.
pub fn census_cost(crossings: RangeInclusive<u32>) -> Result<BigUint> {
    Ok(enumerate_knots_range(3, crossings.end() / 3)?
        .iter()
        .map(|t| expansion_total(t, crossings.clone()))
        .sum())
}

/// Depth-first search for an expansion over `target` describing `source`.
///
/// Blocks are appended one at a time. After each block the word built so
/// far is rewritten to its positive form; all but its last two entries are
/// already final, so they must agree with the standard continued fraction
/// of `source` read in one of its two directions.
struct WitnessSearch<'a> {
    base: &'a ContinuedFraction,
    base_crossing: u32,
    goal: u32,
    source: &'a TwoBridgeKnot,
    readings: [Vec<i64>; 2],
    eps: Vec<i8>,
    c: Vec<i64>,
    word: Vec<i64>,
}

impl WitnessSearch<'_> {
    const SETTLED_MARGIN: usize = 2;

    fn prefix_viable(&self) -> bool {
        let mut stats = RewriteStats::default();
        // a word the rewriting cannot handle is kept rather than pruned
        let Ok(form) = positive_form(&self.word, &mut stats) else {
            return true;
        };
        let settled = form.len().saturating_sub(Self::SETTLED_MARGIN);
        self.readings
            .iter()
            .any(|s| s.len() >= settled && s[..settled] == form[..settled])
    }

    fn push_block(&mut self, e: i8) {
        let e64 = i64::from(e);
        let a = self.base.entries();
        if self.eps.len().is_multiple_of(2) {
            self.word.extend(a.iter().map(|x| e64 * x));
        } else {
            self.word.extend(a.iter().rev().map(|x| e64 * x));
        }
        self.eps.push(e);
    }

    fn pop_block(&mut self) {
        self.eps.pop();
        let m = self.base.len();
        self.word.truncate(self.word.len() - m);
    }

    fn search(&mut self, spent: u32) -> Result<Option<OrsExpansion>> {
        let blocks = self.eps.len() as u32;
        if blocks % 2 == 1 && blocks >= 3 && blocks * self.base_crossing + spent == self.goal {
            let e = OrsExpansion {
                base: self.base.clone(),
                n: self.c.len() / 2,
                eps: self.eps.clone(),
                c: self.c.clone(),
            };
            if e.source()? == *self.source {
                return Ok(Some(e));
            }
        }
        let floor = (blocks + 1) * self.base_crossing + spent;
        if floor > self.goal {
            return Ok(None);
        }
        let last = *self.eps.last().expect("search starts with one block");
        for j in 0..=self.goal - floor {
            for choice in [false, true] {
                let (ci, next) = realize_connector(j, last, choice);
                self.c.push(ci);
                self.word.push(2 * ci);
                self.push_block(next);
                let found = if self.prefix_viable() {
                    self.search(spent + j)?
                } else {
                    None
                };
                self.pop_block();
                self.word.pop();
                self.c.pop();
                if found.is_some() {
                    return Ok(found);
                }
            }
        }
        Ok(None)
    }
}

/// A witness that `G(source)` maps onto `G(target)`, if one exists.
pub fn epimorphism_witness(
    source: &TwoBridgeKnot,
    target: &TwoBridgeKnot,
) -> Result<Option<OrsExpansion>> {
    let (cs, ct) = (source.crossing(), target.crossing());
    if cs < 3 * ct || source == target {
        return Ok(None);
    }
    let s = source.std_cf().entries().to_vec();
    let mut search = WitnessSearch {
        base: target.std_cf(),
        base_crossing: ct,
        goal: cs,
        source,
        readings: [s.clone(), s.into_iter().rev().collect()],
        eps: Vec::new(),
        c: Vec::new(),
        word: Vec::new(),
    };
    search.push_block(1);
    search.search(0)
}

/// Whether `G(source)` maps onto `G(target)`.
pub fn admits_epimorphism(source: &TwoBridgeKnot, target: &TwoBridgeKnot) -> Result<bool> {
    Ok(epimorphism_witness(source, target)?.is_some())
}

/// Nontrivial knots other than `source` whose groups `G(source)` maps onto.
pub fn targets(source: &TwoBridgeKnot) -> Result<BTreeSet<TwoBridgeKnot>> {
    targets_with_witnesses(source).map(|m| m.into_keys().collect())
}

pub fn targets_with_witnesses(
    source: &TwoBridgeKnot,
) -> Result<BTreeMap<TwoBridgeKnot, OrsExpansion>> {
    let max = source.crossing() / 3;
    if max < 3 {
        return Ok(BTreeMap::new());
    }
    let candidates = enumerate_knots_range(3, max)?;
    let found: Vec<Option<(TwoBridgeKnot, OrsExpansion)>> = candidates
        .into_par_iter()
        .map(|t| Ok(epimorphism_witness(source, &t)?.map(|w| (t, w))))
        .collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().collect())
}

/// Convenience for budgets expressed as `u128`.
pub fn to_u128(x: &BigUint) -> u128 {
    x.to_u128().unwrap_or(u128::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn knot(q: i64, p: i64) -> TwoBridgeKnot {
        TwoBridgeKnot::new(q, p).unwrap()
    }

    fn trefoil_expansion(eps: [i8; 3], c: [i64; 2]) -> OrsExpansion {
        OrsExpansion::new(ContinuedFraction::new(vec![3]), eps.to_vec(), c.to_vec()).unwrap()
    }

    #[test]
    fn expansion_words() {
        assert_eq!(
            trefoil_expansion([1, 1, 1], [0, 0]).cf().entries(),
            &[3, 0, 3, 0, 3]
        );
        assert_eq!(
            trefoil_expansion([1, 1, 1], [-1, -1]).cf().entries(),
            &[3, -2, 3, -2, 3]
        );
        assert_eq!(
            trefoil_expansion([1, 1, 1], [0, -1]).cf().entries(),
            &[3, 0, 3, -2, 3]
        );
        let e = OrsExpansion::new(
            ContinuedFraction::new(vec![2, 3]),
            vec![1, -1, 1],
            vec![1, 1],
        )
        .unwrap();
        assert_eq!(e.cf().entries(), &[2, 3, 2, -3, -2, 2, 2, 3]);
        assert_eq!(e.cf().len(), 3 * 2 + 2);
    }

    #[test]
    fn invariants_are_enforced() {
        let base = ContinuedFraction::new(vec![3]);
        assert!(OrsExpansion::new(base.clone(), vec![-1, 1, 1], vec![0, 0]).is_err());
        assert!(OrsExpansion::new(base.clone(), vec![1, -1, 1], vec![0, 1]).is_err());
        assert!(OrsExpansion::new(base.clone(), vec![1, 1], vec![0]).is_err());
        assert!(OrsExpansion::new(
            ContinuedFraction::new(vec![1, 3]),
            vec![1, 1, 1],
            vec![0, 0]
        )
        .is_err());
    }

    #[test]
    fn indicators_and_reduced_costs() {
        let e = trefoil_expansion([1, 1, 1], [-1, 1]);
        assert_eq!((e.psi(0), e.psi_bar(0)), (1, 1));
        assert_eq!((e.psi(1), e.psi_bar(1)), (0, 0));
        assert_eq!(e.reduced_costs(), vec![0, 2]);
        let z = trefoil_expansion([1, 1, 1], [0, 0]);
        assert_eq!(z.reduced_costs(), vec![0, 0]);
        let flip =
            OrsExpansion::new(ContinuedFraction::new(vec![3]), vec![1, 1, -1], vec![0, 1]).unwrap();
        assert_eq!((flip.psi(1), flip.psi_bar(1)), (0, 1));
    }

    #[test]
    fn crossing_formula_examples() {
        assert_eq!(trefoil_expansion([1, 1, 1], [0, -1]).crossing(), 9);
        assert_eq!(trefoil_expansion([1, 1, 1], [0, 0]).crossing(), 9);
        let e = OrsExpansion::trivial_connectors(ContinuedFraction::new(vec![2, 3]), 1).unwrap();
        assert_eq!(e.crossing(), 15);
        assert_eq!(e.source().unwrap().crossing(), 15);
    }

    #[test]
    fn realizations_hit_their_costs() {
        for j in 0..7 {
            for eps in [1i8, -1] {
                for choice in [false, true] {
                    let (c, next) = realize_connector(j, eps, choice);
                    let psi = u32::from(i64::from(eps) * c < 0);
                    let psi_bar = u32::from(c * i64::from(next) < 0);
                    assert_eq!(2 * c.unsigned_abs() as u32 - psi - psi_bar, j);
                    assert!(!(c == 0 && eps != next));
                }
            }
        }
    }

    #[test]
    fn trefoil_cells() {
        let t = knot(1, 3);
        assert_eq!(enumerate_expansions(&t, 9).count(), 4);
        assert_eq!(enumerate_expansions(&t, 8).count(), 0);
        let found = sources(&t, 9).unwrap();
        let keys: Vec<_> = found.keys().cloned().collect();
        assert_eq!(keys, vec![knot(1, 9), knot(5, 27), knot(19, 45)]);
        let found = sources(&t, 10).unwrap();
        assert_eq!(found.keys().filter(|k| k.crossing() == 10).count(), 4);
        assert!(sources(&knot(1, 5), 14).unwrap().is_empty());
    }

    #[test]
    fn five_two_sources_at_fifteen() {
        let t = knot(3, 7);
        let found = sources(&t, 15).unwrap();
        assert_eq!(found.len(), 4);
    }

    #[test]
    fn cell_sizes_match_enumeration() {
        let base = ContinuedFraction::new(vec![3]);
        for (n, k) in [(1, 0), (1, 3), (2, 2), (3, 1)] {
            assert_eq!(
                cell_expansions(&base, n, k).count() as u64,
                cell_size(n, k).to_u64().unwrap()
            );
        }
        assert_eq!(
            weak_compositions(3, 2),
            vec![vec![3, 0], vec![2, 1], vec![1, 2], vec![0, 3]]
        );
    }

    #[test]
    fn decision_examples() {
        let t = knot(1, 3);
        assert!(admits_epimorphism(&knot(5, 27), &t).unwrap());
        assert!(admits_epimorphism(&knot(1, 45), &knot(1, 15)).unwrap());
        assert!(!admits_epimorphism(&knot(1, 9), &knot(2, 5)).unwrap());
        assert!(!admits_epimorphism(&knot(2, 5), &t).unwrap());
        let w = epimorphism_witness(&knot(19, 45), &t).unwrap().unwrap();
        assert_eq!(w.source().unwrap(), knot(19, 45));
    }

    #[test]
    fn targets_examples() {
        assert_eq!(targets(&knot(1, 9)).unwrap(), BTreeSet::from([knot(1, 3)]));
        assert!(targets(&knot(3, 7)).unwrap().is_empty());
    }
}
