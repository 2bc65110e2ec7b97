//! The right weak order on the symmetric group `S_{n+1}`.
//!
//! Right multiplication by `s_ℓ` swaps the entries at positions `ℓ` and
//! `ℓ + 1` of the one-line notation, so `e·s2 = 132` and `e·s2·s1 = 312`.
//! Elements are indexed by lexicographic rank of their one-line notation.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::bitset::BitSet;
use crate::bricks::{self, StringBrick};
use crate::congruence::{self, Congruence};
use crate::error::{Error, Result};
use crate::labelled::LabelledHasse;
use crate::limits::Limits;
use crate::poset::Lattice;

/// Largest supported number of letters; inversion sets fit in a `u64`.
pub const MAX_LETTERS: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<u8>);

impl Permutation {
    pub fn new(oneline: Vec<u8>) -> Result<Self> {
        let m = oneline.len();
        let mut seen = 0u32;
        for &v in &oneline {
            if v == 0 || v as usize > m || m > MAX_LETTERS || seen >> v & 1 == 1 {
                return Err(Error::InvalidPermutation(oneline));
            }
            seen |= 1 << v;
        }
        Ok(Permutation(oneline))
    }

    pub fn identity(m: usize) -> Self {
        Permutation((1..=m as u8).collect())
    }

    /// `e · s_{w[0]} · s_{w[1]} ⋯` in `S_m`.
    pub fn from_word(m: usize, word: &[usize]) -> Self {
        let mut p = Permutation::identity(m);
        for &s in word {
            p.0.swap(s - 1, s);
        }
        p
    }

    /// Number of letters `m` (the group is `S_m`).
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn oneline(&self) -> &[u8] {
        &self.0
    }

    /// `σ(pos)`, positions counted from 1.
    pub fn get(&self, pos: usize) -> u8 {
        self.0[pos - 1]
    }

    pub fn has_descent(&self, ell: usize) -> bool {
        ell >= 1 && ell < self.len() && self.get(ell) > self.get(ell + 1)
    }

    /// Positions `ℓ` with `σ(ℓ) > σ(ℓ + 1)`.
    pub fn descents(&self) -> Vec<usize> {
        (1..self.len()).filter(|&l| self.has_descent(l)).collect()
    }

    /// `σ · s_ℓ`.
    pub fn times_s(&self, ell: usize) -> Permutation {
        let mut v = self.0.clone();
        v.swap(ell - 1, ell);
        Permutation(v)
    }

    /// `σ · w_0`: the one-line notation reversed.
    pub fn times_w0(&self) -> Permutation {
        Permutation(self.0.iter().rev().copied().collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut v = vec![0; self.len()];
        for (p, &x) in self.0.iter().enumerate() {
            v[x as usize - 1] = p as u8 + 1;
        }
        Permutation(v)
    }

    /// Inversions as value pairs `a < b` with `b` written before `a`; bit
    /// `(b - 1) * (b - 2) / 2 + (a - 1)`.
    pub fn inversion_set(&self) -> u64 {
        let mut set = 0u64;
        for p in 0..self.len() {
            for q in p + 1..self.len() {
                let (b, a) = (self.0[p] as u32, self.0[q] as u32);
                if b > a {
                    set |= 1 << ((b - 1) * (b - 2) / 2 + (a - 1));
                }
            }
        }
        set
    }

    /// Coxeter length: the number of inversions.
    pub fn length(&self) -> usize {
        self.inversion_set().count_ones() as usize
    }

    /// Position in the lexicographic list of `S_m`.
    pub fn lex_rank(&self) -> usize {
        let m = self.len();
        let mut rank = 0;
        for p in 0..m {
            let smaller = self.0[p + 1..].iter().filter(|&&v| v < self.0[p]).count();
            rank = rank * (m - p) + smaller;
        }
        rank
    }

    /// All of `S_m` in lexicographic order.
    pub fn all(m: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<u8> = (1..=m as u8).collect();
        loop {
            out.push(Permutation(cur.clone()));
            // Next permutation in lexicographic order.
            let Some(i) = (1..m).rev().find(|&i| cur[i - 1] < cur[i]) else {
                break;
            };
            let j = (i..m).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.0 {
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let digits: Option<Vec<u8>> = s
            .trim()
            .chars()
            .map(|c| c.to_digit(10).map(|d| d as u8))
            .collect();
        match digits {
            Some(d) if !d.is_empty() => Permutation::new(d),
            _ => Err(Error::Parse {
                context: "permutation".into(),
                message: format!("{s:?} is not a one-line permutation"),
            }),
        }
    }
}

impl Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// The unique descent of a join-irreducible permutation; `None` for the
/// identity and for permutations with several descents.
pub fn join_irreducible_profile(sigma: &Permutation) -> Option<usize> {
    match sigma.descents().as_slice() {
        [ell] => Some(*ell),
        _ => None,
    }
}

/// The weak order on `S_{rank+1}` with brick labels on its arrows.
#[derive(Debug, Clone)]
pub struct WeakOrder {
    rank: usize,
    perms: Vec<Permutation>,
    hasse: LabelledHasse,
    cover_labels: Vec<StringBrick>,
}

impl WeakOrder {
    /// Builds `S_{n+1}`, labels every arrow and checks that the order is
    /// inversion-set containment.
    pub fn build(n: usize, limits: &Limits) -> Result<WeakOrder> {
        if n == 0 {
            return Err(Error::InvalidArgument("rank must be at least 1".into()));
        }
        Limits::check(
            "weak order rank",
            n,
            limits.weak_order_rank.min(MAX_LETTERS - 1),
        )?;
        let m = n + 1;
        let perms = Permutation::all(m);
        let mut covers = Vec::new();
        for (x, sigma) in perms.iter().enumerate() {
            for ell in sigma.descents() {
                covers.push((x, sigma.times_s(ell).lex_rank()));
            }
        }
        let names = perms.iter().map(|p| p.to_string()).collect();
        let lattice = Lattice::from_covers(perms.len(), &covers, Some(names))?;

        // Covers are stored sorted; recompute labels in that order.
        let cover_labels: Vec<StringBrick> = lattice
            .covers()
            .iter()
            .map(|a| {
                let (sigma, tau) = (&perms[a.upper], &perms[a.lower]);
                let ell = (1..m).find(|&l| sigma.get(l) != tau.get(l)).unwrap();
                bricks::brick_label(sigma, ell)
            })
            .collect::<Result<_>>()?;

        let strings = bricks::enumerate_strings(n);
        let label_names = strings.iter().map(|s| s.to_string()).collect();
        let labels = cover_labels
            .iter()
            .map(|s| bricks::string_index(n, s))
            .collect();
        let mut hasse = LabelledHasse::new(lattice, labels, label_names)?;
        for (k, s) in strings.iter().enumerate() {
            if s.is_simple() {
                hasse = hasse.with_attr(k, "simple");
            }
        }
        let wo = WeakOrder {
            rank: n,
            perms,
            hasse,
            cover_labels,
        };
        wo.check_inversion_order()?;
        Ok(wo)
    }

    fn check_inversion_order(&self) -> Result<()> {
        let inv: Vec<u64> = self.perms.iter().map(Permutation::inversion_set).collect();
        let l = self.lattice();
        for x in 0..l.len() {
            for y in 0..l.len() {
                let contained = inv[x] & !inv[y] == 0;
                if contained != l.leq(x, y) {
                    return Err(Error::CrossValidation {
                        check: "weak order equals inversion containment".into(),
                        diff: vec![format!("{} vs {}", self.perms[x], self.perms[y])],
                    });
                }
            }
        }
        Ok(())
    }

    /// `n`, for the group `S_{n+1}`.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn lattice(&self) -> &Lattice {
        self.hasse.lattice()
    }

    pub fn labelled(&self) -> &LabelledHasse {
        &self.hasse
    }

    pub fn perms(&self) -> &[Permutation] {
        &self.perms
    }

    pub fn perm(&self, x: usize) -> &Permutation {
        &self.perms[x]
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        (p.len() == self.rank + 1).then(|| p.lex_rank())
    }

    /// Element index of a one-line string such as `"2413"`.
    pub fn element(&self, s: &str) -> Result<usize> {
        let p: Permutation = s.parse()?;
        self.index_of(&p)
            .ok_or_else(|| Error::InvalidArgument(format!("{s} is not in S_{}", self.rank + 1)))
    }

    pub fn cover_label(&self, cover: usize) -> StringBrick {
        self.cover_labels[cover]
    }

    /// Cover index of the arrow `upper -> lower`, given as one-line strings.
    pub fn cover(&self, upper: &str, lower: &str) -> Result<usize> {
        let (u, l) = (self.element(upper)?, self.element(lower)?);
        self.lattice()
            .cover_index(u, l)
            .ok_or_else(|| Error::InvalidArgument(format!("{upper} -> {lower} is not an arrow")))
    }

    pub fn describe_cover(&self, cover: usize) -> String {
        let a = self.lattice().covers()[cover];
        format!("{}->{}", self.perms[a.upper], self.perms[a.lower])
    }

    /// The arrow out of a join-irreducible element.
    pub fn ji_arrow(&self, x: usize) -> Option<usize> {
        match self.lattice().lower_covers(x) {
            [y] => self.lattice().cover_index(x, *y),
            _ => None,
        }
    }
}

/// The double join-irreducible `d_{i,j}`: `s_i s_{i+1} ⋯ s_j` for `i <= j`,
/// `s_i s_{i-1} ⋯ s_j` otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DoubleJI {
    pub i: usize,
    pub j: usize,
    pub perm: Permutation,
}

impl DoubleJI {
    pub fn new(rank: usize, i: usize, j: usize) -> Result<DoubleJI> {
        if !(1..=rank).contains(&i) || !(1..=rank).contains(&j) {
            return Err(Error::InvalidArgument(format!(
                "d_({i},{j}) needs indices in 1..={rank}"
            )));
        }
        let word: Vec<usize> = if i <= j {
            (i..=j).collect()
        } else {
            (j..=i).rev().collect()
        };
        Ok(DoubleJI {
            i,
            j,
            perm: Permutation::from_word(rank + 1, &word),
        })
    }
}

/// All `n²` elements `d_{i,j}`, each checked to be double join-irreducible
/// in `wo`.
pub fn double_join_irreducibles(wo: &WeakOrder) -> Result<Vec<DoubleJI>> {
    let n = wo.rank();
    let l = wo.lattice();
    let mut out = Vec::with_capacity(n * n);
    for i in 1..=n {
        for j in 1..=n {
            let d = DoubleJI::new(n, i, j)?;
            let x = wo.index_of(&d.perm).unwrap();
            let ok = match l.lower_covers(x) {
                [y] => *y == l.bottom() || l.lower_covers(*y).len() == 1,
                _ => false,
            };
            if !ok {
                return Err(Error::CrossValidation {
                    check: "double join-irreducible".into(),
                    diff: vec![format!("d_({i},{j}) = {}", d.perm)],
                });
            }
            out.push(d);
        }
    }
    Ok(out)
}

/// Whether descent position `ell` of `σ` is a `d_{i,j}`-pattern, read
/// literally: `[i+1, j] ⊆ σ([1, ℓ-1])` when `i <= j` and
/// `[j+1, i] ⊆ σ([ℓ+2, m])` when `i >= j`.
pub fn is_d_pattern(sigma: &Permutation, ell: usize, i: usize, j: usize) -> bool {
    if !sigma.has_descent(ell) {
        return false;
    }
    let m = sigma.len();
    let values = |from: usize, to: usize| -> u32 {
        (from..=to.min(m)).fold(0, |acc, p| acc | 1 << sigma.get(p))
    };
    let interval = |a: usize, b: usize| -> u32 { (a..=b).fold(0, |acc, v| acc | 1 << v) };
    if i <= j {
        let need = interval(i + 1, j);
        if need & !values(1, ell.saturating_sub(1)) != 0 {
            return false;
        }
    }
    if i >= j {
        let need = interval(j + 1, i);
        if need & !values(ell + 2, m) != 0 {
            return false;
        }
    }
    true
}

/// Some descent of `σ` is a `d_{i,j}`-pattern.
pub fn d_pattern_contains(sigma: &Permutation, i: usize, j: usize) -> bool {
    sigma
        .descents()
        .into_iter()
        .any(|l| is_d_pattern(sigma, l, i, j))
}

/// The pattern rule for a set `D` of double join-irreducibles next to the
/// congruence `con(D)` it is meant to describe.
#[derive(Debug, Clone, Serialize)]
pub struct PatternReport {
    pub generators: Vec<String>,
    /// Permutations avoiding every member of `D`.
    pub avoiders: Vec<Permutation>,
    /// Class minima of `con(D)`.
    pub bottoms: Vec<Permutation>,
    /// Arrows flagged by the pattern rule but not contracted, and the reverse.
    pub flagged_only: Vec<String>,
    pub contracted_only: Vec<String>,
    pub avoiders_only: Vec<Permutation>,
    pub bottoms_only: Vec<Permutation>,
    pub agrees: bool,
}

/// Arrows `σ -> σ s_ℓ` whose descent pair is a pattern for some member of `d`.
pub fn pattern_flags(wo: &WeakOrder, d: &[DoubleJI]) -> BitSet {
    let l = wo.lattice();
    BitSet::from_indices(
        l.covers().len(),
        l.covers().iter().enumerate().filter_map(|(c, a)| {
            let (sigma, tau) = (wo.perm(a.upper), wo.perm(a.lower));
            let ell = (1..sigma.len())
                .find(|&p| sigma.get(p) != tau.get(p))
                .unwrap();
            d.iter()
                .any(|g| is_d_pattern(sigma, ell, g.i, g.j))
                .then_some(c)
        }),
    )
}

/// `con(D)`: the congruence generated by the arrows out of the members of `D`.
pub fn double_ji_congruence(wo: &WeakOrder, d: &[DoubleJI]) -> Congruence {
    let l = wo.lattice();
    let seeds: Vec<(usize, usize)> = d
        .iter()
        .map(|g| {
            let x = wo.index_of(&g.perm).unwrap();
            (x, l.lower_covers(x)[0])
        })
        .collect();
    congruence::congruence_closure(l, &seeds)
}

pub fn pattern_report(wo: &WeakOrder, d: &[DoubleJI]) -> PatternReport {
    let flags = pattern_flags(wo, d);
    let theta = double_ji_congruence(wo, d);
    let avoiders: Vec<Permutation> = wo
        .perms()
        .iter()
        .filter(|p| !d.iter().any(|g| d_pattern_contains(p, g.i, g.j)))
        .cloned()
        .collect();
    let bottoms: Vec<Permutation> = theta
        .bottoms()
        .iter()
        .map(|&x| wo.perm(x).clone())
        .collect();
    let only = |a: &BitSet, b: &BitSet| -> Vec<String> {
        let mut s = a.clone();
        s.difference_with(b);
        s.iter().map(|c| wo.describe_cover(c)).collect()
    };
    let av: BTreeSet<&Permutation> = avoiders.iter().collect();
    let bt: BTreeSet<&Permutation> = bottoms.iter().collect();
    let avoiders_only: Vec<Permutation> = av.difference(&bt).map(|p| (*p).clone()).collect();
    let bottoms_only: Vec<Permutation> = bt.difference(&av).map(|p| (*p).clone()).collect();
    let flagged_only = only(&flags, theta.contracted());
    let contracted_only = only(theta.contracted(), &flags);
    let agrees = flagged_only.is_empty()
        && contracted_only.is_empty()
        && avoiders_only.is_empty()
        && bottoms_only.is_empty();
    PatternReport {
        generators: d.iter().map(|g| format!("d_({},{})", g.i, g.j)).collect(),
        avoiders,
        bottoms,
        flagged_only,
        contracted_only,
        avoiders_only,
        bottoms_only,
        agrees,
    }
}

/// The pattern description of `S_{n+1}/con(D)`: avoiders and flagged
/// arrows. Fails with the full difference if it disagrees with `con(D)`.
pub fn pattern_quotient(wo: &WeakOrder, d: &[DoubleJI]) -> Result<(Vec<Permutation>, BitSet)> {
    let report = pattern_report(wo, d);
    if !report.agrees {
        let mut diff = Vec::new();
        diff.extend(
            report
                .flagged_only
                .iter()
                .map(|a| format!("flagged only: {a}")),
        );
        diff.extend(
            report
                .contracted_only
                .iter()
                .map(|a| format!("contracted only: {a}")),
        );
        diff.extend(
            report
                .avoiders_only
                .iter()
                .map(|p| format!("avoider only: {p}")),
        );
        diff.extend(
            report
                .bottoms_only
                .iter()
                .map(|p| format!("bottom only: {p}")),
        );
        return Err(Error::CrossValidation {
            check: format!("pattern rule for {{{}}}", report.generators.join(", ")),
            diff,
        });
    }
    Ok((report.avoiders, pattern_flags(wo, d)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn permutation_basics() {
        assert!(Permutation::new(vec![1, 1]).is_err());
        assert!(Permutation::new(vec![0, 1]).is_err());
        assert_eq!(Permutation::from_word(3, &[2, 1]), p("312"));
        assert_eq!(p("2413").descents(), vec![2]);
        assert_eq!(p("2413").inverse(), p("3142"));
        assert_eq!(p("321").length(), 3);
        let all = Permutation::all(4);
        assert_eq!(all.len(), 24);
        for (k, q) in all.iter().enumerate() {
            assert_eq!(q.lex_rank(), k);
        }
    }

    #[test]
    fn profiles() {
        assert_eq!(join_irreducible_profile(&p("1234")), None);
        assert_eq!(join_irreducible_profile(&p("231")), Some(2));
        assert_eq!(join_irreducible_profile(&p("2413")), Some(2));
        assert_eq!(join_irreducible_profile(&p("321")), None);
    }

    #[test]
    fn small_weak_orders() {
        let limits = Limits::default();
        let w1 = WeakOrder::build(1, &limits).unwrap();
        assert_eq!(w1.lattice().len(), 2);
        assert_eq!(w1.labelled().label_names(), &["1".to_string()]);
        let w2 = WeakOrder::build(2, &limits).unwrap();
        let l = w2.lattice();
        assert_eq!(
            l.join(w2.element("213").unwrap(), w2.element("132").unwrap()),
            l.top()
        );
        assert_eq!(l.name(l.top()), "321");
    }

    #[test]
    fn guardrail() {
        let limits = Limits {
            weak_order_rank: 3,
            ..Limits::default()
        };
        assert!(matches!(
            WeakOrder::build(4, &limits),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn double_jis_in_s3() {
        let w = WeakOrder::build(2, &Limits::default()).unwrap();
        let d = double_join_irreducibles(&w).unwrap();
        let shown: Vec<(usize, usize, String)> =
            d.iter().map(|g| (g.i, g.j, g.perm.to_string())).collect();
        assert_eq!(
            shown,
            [
                (1, 1, "213".to_string()),
                (1, 2, "231".to_string()),
                (2, 1, "312".to_string()),
                (2, 2, "132".to_string())
            ]
        );
    }

    #[test]
    fn literal_patterns() {
        assert!(d_pattern_contains(&p("231"), 1, 2));
        assert!(!d_pattern_contains(&p("312"), 1, 2));
        for (i, j) in [(1, 1), (1, 2), (2, 1)] {
            assert!(!d_pattern_contains(&p("123"), i, j));
        }
    }

    #[test]
    fn empty_pattern_set() {
        let w = WeakOrder::build(2, &Limits::default()).unwrap();
        let (avoiders, flags) = pattern_quotient(&w, &[]).unwrap();
        assert_eq!(avoiders.len(), 6);
        assert!(flags.is_empty() || flags.count() == 0);
    }

    #[test]
    fn times_w0_reverses_order() {
        let w = WeakOrder::build(3, &Limits::default()).unwrap();
        let l = w.lattice();
        let flip: Vec<usize> = w
            .perms()
            .iter()
            .map(|q| w.index_of(&q.times_w0()).unwrap())
            .collect();
        for x in 0..l.len() {
            for y in 0..l.len() {
                assert_eq!(l.leq(x, y), l.leq(flip[y], flip[x]));
            }
        }
    }
}
