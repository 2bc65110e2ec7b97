use std::collections::BTreeSet;

use torslat::bricks::{self, OrientedPath, StringBrick};
use torslat::congruence;
use torslat::weak_order::{self, Permutation, WeakOrder};
use torslat::{BitSet, Limits};

fn build(n: usize) -> WeakOrder {
    WeakOrder::build(n, &Limits::default()).unwrap()
}

fn perm(s: &str) -> Permutation {
    s.parse().unwrap()
}

#[test]
fn join_irreducible_counts() {
    for n in 1..=5 {
        let wo = build(n);
        let want = (1usize << (n + 1)) - (n + 2);
        assert_eq!(wo.lattice().join_irreducibles().len(), want, "n = {n}");
        assert_eq!(wo.lattice().meet_irreducibles().len(), want, "n = {n}");
        let by_descents = wo
            .perms()
            .iter()
            .filter(|p| weak_order::join_irreducible_profile(p).is_some())
            .count();
        assert_eq!(by_descents, want);
    }
}

#[test]
fn irreducibles_biject_onto_strings() {
    for n in 1..=4 {
        let wo = build(n);
        let l = wo.lattice();
        let strings: BTreeSet<StringBrick> = bricks::enumerate_strings(n).into_iter().collect();
        let below: BTreeSet<StringBrick> = l
            .join_irreducibles()
            .into_iter()
            .map(|j| wo.cover_label(wo.ji_arrow(j).unwrap()))
            .collect();
        assert_eq!(below.len(), l.join_irreducibles().len());
        assert_eq!(below, strings, "join-irreducibles, n = {n}");
        let above: BTreeSet<StringBrick> = l
            .meet_irreducibles()
            .into_iter()
            .map(|m| {
                let up = l.upper_covers(m)[0];
                wo.cover_label(l.cover_index(up, m).unwrap())
            })
            .collect();
        assert_eq!(above, strings, "meet-irreducibles, n = {n}");
    }
}

#[test]
fn right_multiplication_by_w0_reverses_the_order() {
    for n in 1..=3 {
        let wo = build(n);
        let l = wo.lattice();
        let image: Vec<usize> = wo
            .perms()
            .iter()
            .map(|p| wo.index_of(&p.times_w0()).unwrap())
            .collect();
        for x in 0..l.len() {
            assert_eq!(wo.perm(image[x]).times_w0(), *wo.perm(x));
            for y in 0..l.len() {
                assert_eq!(l.leq(x, y), l.leq(image[y], image[x]));
            }
        }
    }
}

#[test]
fn small_examples() {
    let wo = build(2);
    let l = wo.lattice();
    let j = l.join(wo.element("213").unwrap(), wo.element("132").unwrap());
    assert_eq!(wo.perm(j).to_string(), "321");

    let wo = build(3);
    let l = wo.lattice();
    assert_eq!(l.hasse_regular_degree(), Some(3));
    let bottom = wo.element("1234").unwrap();
    let hex_top = l.join(wo.element("1324").unwrap(), wo.element("2134").unwrap());
    assert_eq!(l.interval_members(bottom, hex_top).len(), 6);
    let sq_top = l.join(wo.element("1243").unwrap(), wo.element("2134").unwrap());
    assert_eq!(wo.perm(sq_top).to_string(), "2143");
    assert_eq!(l.interval_members(bottom, sq_top).len(), 4);

    let d = weak_order::double_join_irreducibles(&wo).unwrap();
    assert_eq!(d.len(), 9);
    assert_eq!(weak_order::join_irreducible_profile(&perm("2413")), Some(2));
}

#[test]
fn polygon_sides_share_labels_diagonally() {
    for n in 2..=4 {
        let wo = build(n);
        let l = wo.lattice();
        for p in l.polygons() {
            let label = |u: usize, v: usize| wo.cover_label(l.cover_index(u, v).unwrap());
            let top_left = label(p.top, p.left[0]);
            let top_right = label(p.top, p.right[0]);
            let bottom_left = label(*p.left.last().unwrap(), p.bottom);
            let bottom_right = label(*p.right.last().unwrap(), p.bottom);
            assert_eq!(top_left, bottom_right);
            assert_eq!(top_right, bottom_left);
        }
    }
}

#[test]
fn a_single_path_generates_the_congruence_of_its_brick() {
    for n in 1..=3 {
        let wo = build(n);
        let l = wo.lattice();
        let m = l.covers().len();
        for p in bricks::enumerate_paths(n) {
            let theta = bricks::ideal_congruence(&wo, &[p]).unwrap();
            let brick = p.as_string();
            let seeds = BitSet::from_indices(m, (0..m).filter(|&c| wo.cover_label(c) == brick));
            assert_eq!(theta, congruence::con_arrows(l, &seeds), "path {p}");
            for c in 0..m {
                let w = wo.cover_label(c);
                assert_eq!(theta.contracts(c), bricks::path_acts_nonzero(&p, &w));
            }
        }
    }
}

#[test]
fn ideal_congruences_are_generated_by_their_bricks_at_rank_two() {
    let wo = build(2);
    let l = wo.lattice();
    let m = l.covers().len();
    let paths = bricks::enumerate_paths(2);
    for gens in bricks::up_closed_path_sets(&paths) {
        let theta = bricks::ideal_congruence(&wo, &gens).unwrap();
        let bricks: BTreeSet<StringBrick> = gens.iter().map(OrientedPath::as_string).collect();
        let seeds =
            BitSet::from_indices(m, (0..m).filter(|&c| bricks.contains(&wo.cover_label(c))));
        assert_eq!(theta, congruence::con_arrows(l, &seeds));
    }
}

#[test]
fn enumeration_paths_agree_on_small_weak_orders() {
    for n in 2..=3 {
        let wo = build(n);
        let l = wo.lattice();
        let limits = Limits::default();
        let joins = congruence::enumerate_congruences_by_joins(l, &limits).unwrap();
        let f = congruence::forcing(l);
        let ideals = congruence::enumerate_congruences_by_forcing(l, &f, 1 << 20).unwrap();
        assert_eq!(joins, ideals);
        for theta in &joins {
            let q = congruence::quotient(l, theta).unwrap();
            assert!(congruence::projection_failure(l, &q).is_none());
            assert!(q.lattice.semidistributivity(&limits).unwrap().is_none());
        }
    }
}
