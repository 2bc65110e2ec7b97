//! The fixture suite: every shipped figure transcription checked against
//! the engine.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::bitset::BitSet;
use crate::bricks;
use crate::cambrian::{self, Orientation};
use crate::congruence::{self, Congruence};
use crate::error::{Error, Result};
use crate::io::fixtures;
use crate::labelled::LabelledHasse;
use crate::limits::Limits;
use crate::poset::{find_isomorphism, find_isomorphism_with, Lattice};
use crate::weak_order::WeakOrder;

#[derive(Debug, Clone, Serialize)]
pub struct FixtureCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, outcome: Result<String>) -> FixtureCheck {
    match outcome {
        Ok(detail) => FixtureCheck {
            name,
            passed: true,
            detail,
        },
        Err(e) => FixtureCheck {
            name,
            passed: false,
            detail: e.to_string(),
        },
    }
}

fn mismatch(what: &str, diff: Vec<String>) -> Error {
    Error::CrossValidation {
        check: what.to_string(),
        diff,
    }
}

/// Arrows of `l` as `(upper name, lower name)` pairs.
pub fn named_arrows(l: &Lattice) -> BTreeSet<(String, String)> {
    l.covers()
        .iter()
        .map(|a| (l.name(a.upper), l.name(a.lower)))
        .collect()
}

fn compare_sets(
    what: &str,
    got: &BTreeSet<(String, String)>,
    want: &BTreeSet<(String, String)>,
) -> Result<()> {
    if got == want {
        return Ok(());
    }
    let mut diff: Vec<String> = got
        .difference(want)
        .map(|(a, b)| format!("extra {a}->{b}"))
        .collect();
    diff.extend(
        want.difference(got)
            .map(|(a, b)| format!("missing {a}->{b}")),
    );
    Err(mismatch(what, diff))
}

/// The surviving labels of the left lattice that give the right one.
pub const EXLAT_SURVIVING: [&str; 5] = ["Sa", "Sb", "Sc", "ab", "bc"];

pub fn label_set(lh: &LabelledHasse, names: &[&str]) -> Result<BTreeSet<usize>> {
    names
        .iter()
        .map(|n| {
            lh.label_id(n)
                .ok_or_else(|| Error::InvalidArgument(format!("no label named {n}")))
        })
        .collect()
}

/// Isomorphism of labelled lattices that matches arrow labels by name.
pub fn labelled_isomorphism(a: &LabelledHasse, b: &LabelledHasse) -> Option<Vec<usize>> {
    find_isomorphism_with(a.lattice(), b.lattice(), |ca, cb| {
        a.label_name(a.label(ca)) == b.label_name(b.label(cb))
    })
}

pub fn weak_s4_matches_figure(limits: &Limits) -> Result<String> {
    let wo = WeakOrder::build(3, limits)?;
    let fig = fixtures::weak_s4();
    compare_sets(
        "weak order S4 arrows",
        &named_arrows(wo.lattice()),
        &named_arrows(&fig),
    )?;
    find_isomorphism(wo.lattice(), &fig)
        .ok_or_else(|| mismatch("weak order S4 isomorphism", vec!["no isomorphism".into()]))?;
    Ok(format!(
        "{} elements, {} arrows",
        fig.len(),
        fig.covers().len()
    ))
}

pub fn exlat_quotient_matches() -> Result<String> {
    let left = fixtures::exlat_left();
    let right = fixtures::exlat_right();
    let surviving = label_set(&left, &EXLAT_SURVIVING)?;
    let aq = congruence::algebraic_quotient(&left, &surviving)?;
    labelled_isomorphism(&aq.labelled, &right).ok_or_else(|| {
        mismatch(
            "exlat quotient",
            vec!["quotient not isomorphic to the right lattice".into()],
        )
    })?;
    let all_but_cb: Vec<&str> = ["Sa", "Sb", "Sc", "ab", "bc", "acb"].to_vec();
    match congruence::algebraic_quotient(&left, &label_set(&left, &all_but_cb)?) {
        Err(Error::NotExactlyRealizable { spilled }) => Ok(format!(
            "quotient has {} elements; dropping only cb also contracts {}",
            aq.quotient.len(),
            spilled.join(", ")
        )),
        Ok(_) => Err(mismatch(
            "exlat cb",
            vec!["dropping cb alone was realizable".into()],
        )),
        Err(e) => Err(e),
    }
}

pub fn exforc_matches(limits: &Limits) -> Result<String> {
    let wo = WeakOrder::build(3, limits)?;
    let poset = bricks::brick_forcing_poset(&wo)?;
    let fig = fixtures::exforc_a3();
    let walk_of = |name: &str| -> String {
        fig.nodes
            .iter()
            .find(|n| n.name == name)
            .and_then(|n| n.walk.clone())
            .unwrap_or_default()
    };
    let want: BTreeSet<(String, String)> = fig
        .arrows
        .iter()
        .map(|(a, b)| (walk_of(a), walk_of(b)))
        .collect();
    let got: BTreeSet<(String, String)> = poset
        .arrows
        .iter()
        .map(|&(a, b)| (poset.strings[a].to_string(), poset.strings[b].to_string()))
        .collect();
    compare_sets("brick forcing quiver", &got, &want)?;
    Ok(format!(
        "{} bricks, {} arrows",
        poset.strings.len(),
        got.len()
    ))
}

pub fn cambrian_figure_matches(limits: &Limits) -> Result<String> {
    let wo = WeakOrder::build(3, limits)?;
    let q = Orientation::parse(3, "10")?;
    let theta = cambrian::cambrian_congruence(&wo, &q)?;
    let quotient = congruence::quotient(wo.lattice(), &theta)?;
    let fig = fixtures::cambrian_s4_quotient();
    compare_sets(
        "Cambrian quotient arrows",
        &named_arrows(&quotient.lattice),
        &named_arrows(&fig),
    )?;
    let contracted: BTreeSet<(String, String)> = theta
        .contracted()
        .iter()
        .map(|c| {
            let a = wo.lattice().covers()[c];
            (wo.perm(a.upper).to_string(), wo.perm(a.lower).to_string())
        })
        .collect();
    let doubled: BTreeSet<(String, String)> = fixtures::cambrian_s4_contracted()
        .arrows
        .into_iter()
        .collect();
    compare_sets("Cambrian contracted arrows", &contracted, &doubled)?;
    Ok(format!(
        "{} classes, {} contracted arrows",
        quotient.len(),
        contracted.len()
    ))
}

/// Quotients by `con(2413 -> 2143)`, `con(3412 -> 3142)` and both; each has
/// a vertex of Hasse degree 4.
pub fn non_regular_quotients(limits: &Limits) -> Result<Vec<(Congruence, usize)>> {
    let wo = WeakOrder::build(3, limits)?;
    let l = wo.lattice();
    let a = wo.cover("2413", "2143")?;
    let b = wo.cover("3412", "3142")?;
    let m = l.covers().len();
    [vec![a], vec![b], vec![a, b]]
        .into_iter()
        .map(|seeds| {
            let theta = congruence::con_arrows(l, &BitSet::from_indices(m, seeds));
            let q = congruence::quotient(l, &theta)?;
            let max = q.lattice.max_hasse_degree();
            Ok((theta, max))
        })
        .collect()
}

pub fn non_regular_matches(limits: &Limits) -> Result<String> {
    let degrees: Vec<usize> = non_regular_quotients(limits)?
        .iter()
        .map(|(_, d)| *d)
        .collect();
    if degrees.iter().all(|&d| d == 4) {
        Ok(format!("maximal degrees {degrees:?}"))
    } else {
        Err(mismatch(
            "non-regular quotients",
            vec![format!("maximal degrees {degrees:?}")],
        ))
    }
}

/// Hasse-regularity degree of the biCambrian quotient, `None` if irregular.
pub fn bicambrian_regularity(wo: &WeakOrder, q: &Orientation) -> Result<Option<usize>> {
    let theta = cambrian::bicambrian(wo, q)?;
    Ok(congruence::quotient(wo.lattice(), &theta)?
        .lattice
        .hasse_regular_degree())
}

pub fn bicambrian_pair(limits: &Limits) -> Result<String> {
    let wo = WeakOrder::build(3, limits)?;
    let bip = bicambrian_regularity(&wo, &Orientation::bipartite(3))?;
    let lin = bicambrian_regularity(&wo, &Orientation::linear(3))?;
    if bip == Some(3) && lin.is_none() {
        Ok("bipartite regular of degree 3, linear irregular".into())
    } else {
        Err(mismatch(
            "biCambrian regularity",
            vec![format!("bipartite {bip:?}, linear {lin:?}")],
        ))
    }
}

/// Runs every fixture check.
pub fn verify_fixtures(limits: &Limits) -> Vec<FixtureCheck> {
    vec![
        check("weak_s4", weak_s4_matches_figure(limits)),
        check("exlat_quotient", exlat_quotient_matches()),
        check("exforc_a3", exforc_matches(limits)),
        check("cambrian_s4", cambrian_figure_matches(limits)),
        check("non_regular_s4", non_regular_matches(limits)),
        check("bicambrian_pair", bicambrian_pair(limits)),
    ]
}
