use std::collections::{BTreeMap, BTreeSet};

use bridgecensus::counting::genfun;
use bridgecensus::epimorphism::{
    admits_epimorphism, census, enumerate_expansions, epimorphism_witness, sources, targets,
    targets_with_witnesses,
};
use bridgecensus::knot::enumerate_knots_range;
use bridgecensus::rational_cf::standardize;
use bridgecensus::TwoBridgeKnot;
use num_traits::ToPrimitive;

fn knot(q: i64, p: i64) -> TwoBridgeKnot {
    TwoBridgeKnot::new(q, p).unwrap()
}

/// The pruned search must agree with exhaustive expansion of every target.
#[test]
fn search_agrees_with_inverse_census() {
    let by_census = census(3..=18).unwrap();
    let mut checked = 0;
    for source in enumerate_knots_range(9, 18).unwrap() {
        let searched = targets(&source).unwrap();
        let expanded: BTreeSet<TwoBridgeKnot> = by_census
            .get(&source)
            .map(|m| m.keys().cloned().collect())
            .unwrap_or_default();
        assert_eq!(searched, expanded, "{source}");
        checked += 1;
    }
    assert_eq!(checked, enumerate_knots_range(9, 18).unwrap().len());
}

#[test]
fn witnesses_reproduce_their_sources() {
    for source in enumerate_knots_range(15, 17).unwrap() {
        for (target, w) in targets_with_witnesses(&source).unwrap() {
            assert_eq!(w.source().unwrap(), source);
            assert_eq!(w.base(), target.std_cf());
            assert_eq!(w.crossing(), source.crossing());
        }
    }
}

#[test]
fn closed_form_matches_enumeration() {
    for (t, max) in [
        (knot(1, 3), 27),
        (knot(2, 5), 27),
        (knot(3, 7), 27),
        (knot(5, 27), 27),
    ] {
        let series = genfun(&t, max);
        let mut per_crossing: BTreeMap<u32, u64> = BTreeMap::new();
        for s in sources(&t, max).unwrap().keys() {
            *per_crossing.entry(s.crossing()).or_default() += 1;
        }
        for c in 0..=max {
            assert_eq!(
                per_crossing.get(&c).copied().unwrap_or(0),
                series.coefficient(c).to_u64().unwrap(),
                "{t} at t^{c}"
            );
        }
    }
}

#[test]
fn enumerated_crossings_match_rewriting() {
    for t in enumerate_knots_range(3, 7).unwrap() {
        for e in enumerate_expansions(&t, 21) {
            let std = standardize(&e.cf()).unwrap();
            assert_eq!(std.sum(), i64::from(e.crossing()), "{e}");
        }
    }
}

#[test]
fn epimorphisms_compose() {
    let (a, b, c) = (knot(1, 45), knot(1, 15), knot(1, 3));
    assert!(admits_epimorphism(&a, &b).unwrap());
    assert!(admits_epimorphism(&b, &c).unwrap());
    assert!(admits_epimorphism(&a, &c).unwrap());

    let pairs = census(9..=21).unwrap();
    for (source, ts) in &pairs {
        for mid in ts.keys() {
            if let Some(below) = pairs.get(mid) {
                for t in below.keys() {
                    assert!(ts.contains_key(t), "{source} -> {mid} -> {t}");
                }
            }
        }
    }
}

#[test]
fn forty_five_crossings() {
    let found = targets(&knot(1, 45)).unwrap();
    for p in [3, 5, 9, 15] {
        assert!(found.contains(&knot(1, p)), "1/{p}");
    }
    assert!(found.len() >= 4);
}

#[test]
fn no_witness_below_three_times_the_target() {
    assert!(epimorphism_witness(&knot(1, 9), &knot(1, 5))
        .unwrap()
        .is_none());
    assert!(epimorphism_witness(&knot(1, 3), &knot(1, 3))
        .unwrap()
        .is_none());
    assert_eq!(enumerate_expansions(&knot(1, 5), 14).count(), 0);
}
