//! Randomized invariants on lattices built from intersection-closed set
//! families. Every finite lattice arises this way, and the ground sets here
//! are small enough for brute-force oracles.
//!
//! The seed is fixed; set `TORSLAT_SEED` to explore others.

use std::collections::BTreeSet;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

use torslat::congruence;
use torslat::{BitSet, Lattice, Limits};

fn config(cases: u32) -> Config {
    let seed = std::env::var("TORSLAT_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(0x5eed);
    Config {
        cases,
        rng_seed: RngSeed::Fixed(seed),
        failure_persistence: None,
        ..Config::default()
    }
}

/// The lattice of the intersection closure of `family ∪ {full}`.
fn closure_lattice(ground: u32, family: &[u32]) -> Lattice {
    let full = (1u32 << ground) - 1;
    let mut sets: BTreeSet<u32> = family.iter().map(|s| s & full).collect();
    sets.insert(full);
    loop {
        let snapshot: Vec<u32> = sets.iter().copied().collect();
        let before = sets.len();
        for &a in &snapshot {
            for &b in &snapshot {
                sets.insert(a & b);
            }
        }
        if sets.len() == before {
            break;
        }
    }
    let sets: Vec<u32> = sets.into_iter().collect();
    let names = sets.iter().map(|s| format!("{s:b}")).collect();
    Lattice::from_order(sets.len(), |a, b| sets[a] & !sets[b] == 0, Some(names)).unwrap()
}

fn lattice_strategy() -> impl Strategy<Value = Lattice> {
    (2u32..=4).prop_flat_map(|g| {
        prop::collection::vec(0u32..(1 << g), 0..8).prop_map(move |f| closure_lattice(g, &f))
    })
}

fn brute_join(l: &Lattice, x: usize, y: usize) -> usize {
    let ub: Vec<usize> = (0..l.len())
        .filter(|&z| l.leq(x, z) && l.leq(y, z))
        .collect();
    *ub.iter()
        .find(|&&z| ub.iter().all(|&w| l.leq(z, w)))
        .unwrap()
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn lattice_laws(l in lattice_strategy()) {
        let n = l.len();
        for x in 0..n {
            prop_assert_eq!(l.join(x, x), x);
            prop_assert_eq!(l.meet(l.top(), x), x);
            for y in 0..n {
                prop_assert_eq!(l.join(x, y), l.join(y, x));
                prop_assert_eq!(l.meet(x, l.join(x, y)), x);
                prop_assert_eq!(l.join(x, l.meet(x, y)), x);
                prop_assert_eq!(l.join(x, y), brute_join(&l, x, y));
                for z in 0..n {
                    prop_assert_eq!(l.join(l.join(x, y), z), l.join(x, l.join(y, z)));
                    prop_assert_eq!(l.meet(l.meet(x, y), z), l.meet(x, l.meet(y, z)));
                }
            }
        }
    }

    #[test]
    fn covers_round_trip(l in lattice_strategy()) {
        let again = Lattice::from_order(l.len(), |a, b| l.leq(a, b), None).unwrap();
        prop_assert_eq!(again.covers(), l.covers());
        let covers: Vec<(usize, usize)> = l.covers().iter().map(|a| (a.upper, a.lower)).collect();
        let rebuilt = Lattice::from_covers(l.len(), &covers, None).unwrap();
        for x in 0..l.len() {
            for y in 0..l.len() {
                prop_assert_eq!(rebuilt.leq(x, y), l.leq(x, y));
            }
        }
    }

    #[test]
    fn dual_swaps_irreducibles(l in lattice_strategy()) {
        let d = l.dual();
        prop_assert_eq!(d.join_irreducibles(), l.meet_irreducibles());
        prop_assert_eq!(d.meet_irreducibles(), l.join_irreducibles());
    }

    #[test]
    fn polygons_are_two_chains(l in lattice_strategy()) {
        for p in l.polygons() {
            let interior: BTreeSet<usize> = l
                .interval_members(p.bottom, p.top)
                .into_iter()
                .filter(|&x| x != p.bottom && x != p.top)
                .collect();
            let sides: BTreeSet<usize> = p.left.iter().chain(&p.right).copied().collect();
            prop_assert_eq!(&interior, &sides);
            prop_assert!(p.left.iter().all(|x| !p.right.contains(x)));
            for side in [&p.left, &p.right] {
                for w in side.windows(2) {
                    prop_assert!(l.cover_index(w[0], w[1]).is_some());
                }
                prop_assert!(l.cover_index(p.top, side[0]).is_some());
                prop_assert!(l.cover_index(*side.last().unwrap(), p.bottom).is_some());
            }
            for &a in &p.left {
                for &b in &p.right {
                    prop_assert!(!l.comparable(a, b));
                }
            }
        }
    }

    #[test]
    fn closure_is_idempotent(l in lattice_strategy(), picks in prop::collection::vec(any::<prop::sample::Index>(), 0..4)) {
        let m = l.covers().len();
        prop_assume!(m > 0);
        let seeds = BitSet::from_indices(m, picks.iter().map(|i| i.index(m)));
        let theta = congruence::con_arrows(&l, &seeds);
        prop_assert!(seeds.is_subset(theta.contracted()));
        prop_assert_eq!(&congruence::con_arrows(&l, theta.contracted()), &theta);
        prop_assert!(theta.classes_are_intervals(&l));
        prop_assert!(congruence::is_congruence(&l, theta.class_of()));
        let q = congruence::quotient(&l, &theta).unwrap();
        prop_assert!(congruence::projection_failure(&l, &q).is_none());
        for x in 0..l.len() {
            prop_assert_eq!(q.pi_down(x), theta.pi_down(x));
            prop_assert_eq!(q.pi_up(x), theta.pi_up(x));
        }
    }

    #[test]
    fn enumeration_paths_agree(l in lattice_strategy()) {
        let limits = Limits::default();
        let joins = congruence::enumerate_congruences_by_joins(&l, &limits).unwrap();
        let f = congruence::forcing(&l);
        let ideals = congruence::enumerate_congruences_by_forcing(&l, &f, 1 << 20).unwrap();
        prop_assert_eq!(&joins, &ideals);
        prop_assert_eq!(&congruence::enumerate_congruences(&l, &limits).unwrap(), &joins);
    }

    #[test]
    fn polygon_forcing_matches_where_defined(l in lattice_strategy()) {
        if let Ok(poly) = congruence::polygon_forcing(&l) {
            if l.semidistributivity(&Limits::default()).unwrap().is_none() {
                prop_assert_eq!(poly, congruence::forcing(&l));
            }
        }
    }
}
