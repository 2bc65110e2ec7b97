use torslat::cambrian::{self, Orientation};
use torslat::congruence;
use torslat::poset::find_isomorphism;
use torslat::weak_order::WeakOrder;
use torslat::{BitSet, Limits};

fn build(n: usize) -> WeakOrder {
    WeakOrder::build(n, &Limits::default()).unwrap()
}

#[test]
fn rank_two_generator() {
    let wo = build(2);
    let q = Orientation::new(2, 1).unwrap();
    let gens = cambrian::cambrian_generators(&wo, &q).unwrap();
    let named: Vec<String> = gens.iter().map(|&c| wo.describe_cover(c)).collect();
    assert_eq!(named, ["312->132"]);
}

#[test]
fn quotients_have_catalan_size() {
    for n in 1..=4 {
        let wo = build(n);
        for q in Orientation::all(n) {
            let theta = cambrian::cambrian_congruence(&wo, &q).unwrap();
            assert_eq!(theta.class_count(), cambrian::catalan(n + 1), "{q}");
            let bottoms = cambrian::sortable_bottoms(&wo, &q).unwrap();
            assert_eq!(bottoms.len(), cambrian::catalan(n + 1));
            assert!(cambrian::verify_sublattice(&wo, &q).unwrap().is_none());
        }
    }
    assert_eq!(cambrian::catalan(4), 14);
}

#[test]
fn bicambrian_is_the_intersection() {
    for n in 1..=4 {
        let wo = build(n);
        for q in Orientation::all(n) {
            let a = cambrian::cambrian_congruence(&wo, &q).unwrap();
            let b = cambrian::cambrian_congruence(&wo, &q.reverse()).unwrap();
            let mut both = a.contracted().clone();
            both.intersect_with(b.contracted());
            let bi = cambrian::bicambrian(&wo, &q).unwrap();
            assert_eq!(bi.contracted(), &both, "{q}");
            if q.is_bipartite() {
                let m = wo.lattice().covers().len();
                let rule = BitSet::from_indices(
                    m,
                    (0..m).filter(|&c| wo.cover_label(c).has_directed_length_two()),
                );
                assert_eq!(bi.contracted(), &rule, "{q}");
            }
        }
    }
}

#[test]
fn reversed_orientation_gives_the_dual_quotient() {
    for n in 1..=3 {
        let wo = build(n);
        for q in Orientation::all(n) {
            let a = cambrian::cambrian_congruence(&wo, &q).unwrap();
            let b = cambrian::cambrian_congruence(&wo, &q.reverse()).unwrap();
            let qa = congruence::quotient(wo.lattice(), &a).unwrap();
            let qb = congruence::quotient(wo.lattice(), &b).unwrap();
            assert!(
                find_isomorphism(&qa.lattice.dual(), &qb.lattice).is_some(),
                "{q}"
            );
        }
    }
}
