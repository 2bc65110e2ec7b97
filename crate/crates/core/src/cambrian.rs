//! Cambrian and biCambrian congruences of the weak order, indexed by
//! orientations of the path `1 - 2 - ... - n`.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::bitset::BitSet;
use crate::bricks::StringBrick;
use crate::congruence::{self, Congruence};
use crate::error::{Bound, Error, Result};
use crate::poset::Lattice;
use crate::weak_order::{Permutation, WeakOrder};

/// An orientation of the type A diagram. Bit `i - 1` of `bits` is set when
/// the edge between `i` and `i + 1` is the arrow `i <- i + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Orientation {
    n: usize,
    bits: u32,
}

impl Orientation {
    pub fn new(n: usize, bits: u32) -> Result<Self> {
        if n == 0 || n > 32 || (n > 1 && bits >> (n - 1) != 0) || (n == 1 && bits != 0) {
            return Err(Error::InvalidOrientation(format!(
                "{bits:#b} does not orient {} edges",
                n.saturating_sub(1)
            )));
        }
        Ok(Orientation { n, bits })
    }

    /// Reads `n - 1` binary digits, most significant first: the last digit
    /// is edge 1. An empty string orients the single vertex of `n = 1`.
    pub fn parse(n: usize, digits: &str) -> Result<Self> {
        let digits = digits.trim();
        if digits.len() != n.saturating_sub(1) || !digits.chars().all(|c| c == '0' || c == '1') {
            return Err(Error::InvalidOrientation(format!(
                "{digits:?}: expected {} binary digits",
                n.saturating_sub(1)
            )));
        }
        let bits = if digits.is_empty() {
            0
        } else {
            u32::from_str_radix(digits, 2).expect("checked digits")
        };
        Orientation::new(n, bits)
    }

    /// Every orientation of the `n`-vertex path.
    pub fn all(n: usize) -> Vec<Orientation> {
        let edges = n.saturating_sub(1);
        (0..1u32 << edges)
            .map(|b| Orientation { n, bits: b })
            .collect()
    }

    /// `1 <- 2 <- ... <- n`, the orientation of `c = s_1 s_2 ⋯ s_n`.
    pub fn linear(n: usize) -> Self {
        let edges = n.saturating_sub(1);
        Orientation {
            n,
            bits: if edges == 0 { 0 } else { (1 << edges) - 1 },
        }
    }

    /// The alternating orientation in which vertex 1 is a source.
    pub fn bipartite(n: usize) -> Self {
        let bits = (0..n.saturating_sub(1))
            .filter(|i| i % 2 == 1)
            .fold(0, |acc, i| acc | 1 << i);
        Orientation { n, bits }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// True when edge `i` is `i <- i + 1`.
    pub fn points_down(&self, i: usize) -> bool {
        self.bits >> (i - 1) & 1 == 1
    }

    /// The opposite quiver, which belongs to `c⁻¹`.
    pub fn reverse(&self) -> Orientation {
        let edges = self.n - 1;
        let mask = if edges == 0 { 0 } else { (1u32 << edges) - 1 };
        Orientation {
            n: self.n,
            bits: !self.bits & mask,
        }
    }

    /// Every vertex is a sink or a source.
    pub fn is_bipartite(&self) -> bool {
        (1..self.n.saturating_sub(1)).all(|i| self.points_down(i) != self.points_down(i + 1))
    }

    /// A reduced word for the Coxeter element: `s_i` comes before `s_j`
    /// whenever `i <- j`; ties go to the smaller index.
    pub fn coxeter_word(&self) -> Vec<usize> {
        let mut placed = vec![false; self.n + 1];
        let mut word = Vec::with_capacity(self.n);
        while word.len() < self.n {
            let next = (1..=self.n)
                .find(|&s| {
                    !placed[s]
                        && (s == 1 || !self.points_down(s - 1) || placed[s - 1])
                        && (s == self.n || self.points_down(s) || placed[s + 1])
                })
                .expect("a path orientation is acyclic");
            placed[next] = true;
            word.push(next);
        }
        word
    }

    /// The string `s` has an edge pointing the same way as this quiver.
    pub fn shares_arrow_with(&self, s: &StringBrick) -> bool {
        (s.lo()..s.hi()).any(|i| s.edge(i) == Some(!self.points_down(i)))
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in (1..self.n).rev() {
            f.write_str(if self.points_down(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Human-readable word such as `s2 s1 s3`.
pub fn coxeter_word_string(q: &Orientation) -> String {
    q.coxeter_word()
        .iter()
        .map(|s| format!("s{s}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn check_rank(wo: &WeakOrder, q: &Orientation) -> Result<()> {
    if wo.rank() != q.n() {
        return Err(Error::InvalidArgument(format!(
            "orientation of rank {} for a weak order of rank {}",
            q.n(),
            wo.rank()
        )));
    }
    Ok(())
}

/// Covers `s_j s_i -> s_j` for every arrow `i <- j` of the quiver.
pub fn cambrian_generators(wo: &WeakOrder, q: &Orientation) -> Result<Vec<usize>> {
    check_rank(wo, q)?;
    let m = wo.rank() + 1;
    (1..q.n())
        .map(|i| {
            let (j, k) = if q.points_down(i) {
                (i + 1, i)
            } else {
                (i, i + 1)
            };
            let upper = Permutation::from_word(m, &[j, k]);
            let lower = Permutation::from_word(m, &[j]);
            wo.cover(&upper.to_string(), &lower.to_string())
        })
        .collect()
}

/// Arrows whose label shares an arrow with the quiver.
pub fn brick_rule_arrows(wo: &WeakOrder, q: &Orientation) -> BitSet {
    let covers = wo.lattice().covers().len();
    BitSet::from_indices(
        covers,
        (0..covers).filter(|&c| q.shares_arrow_with(&wo.cover_label(c))),
    )
}

fn diff_arrows(wo: &WeakOrder, a: &BitSet, b: &BitSet) -> Vec<String> {
    let mut out = Vec::new();
    for c in 0..a.len() {
        if a.contains(c) != b.contains(c) {
            let side = if a.contains(c) {
                "engine only"
            } else {
                "rule only"
            };
            out.push(format!(
                "{} ({}): {side}",
                wo.describe_cover(c),
                wo.cover_label(c)
            ));
        }
    }
    out
}

/// The Cambrian congruence `con(E_c)`, cross-validated against the brick
/// rule.
pub fn cambrian_congruence(wo: &WeakOrder, q: &Orientation) -> Result<Congruence> {
    let gens = cambrian_generators(wo, q)?;
    let l = wo.lattice();
    let theta = congruence::con_arrows(l, &BitSet::from_indices(l.covers().len(), gens));
    let rule = brick_rule_arrows(wo, q);
    if theta.contracted() != &rule {
        return Err(Error::CrossValidation {
            check: format!("Cambrian congruence for orientation {q}"),
            diff: diff_arrows(wo, theta.contracted(), &rule),
        });
    }
    Ok(theta)
}

/// c-sortable elements by definition: products `c_{K_1} c_{K_2} ⋯` with
/// `K_1 ⊇ K_2 ⊇ ⋯` nonempty, lengths adding up at every step.
pub fn c_sortable(q: &Orientation) -> BTreeSet<Permutation> {
    let word = q.coxeter_word();
    let m = q.n() + 1;
    let full: u32 = (1 << word.len()) - 1;
    let mut found = BTreeSet::new();
    let mut visited: BTreeSet<(Permutation, u32)> = BTreeSet::new();
    let mut stack = vec![(Permutation::identity(m), full)];
    found.insert(Permutation::identity(m));
    while let Some((w, mask)) = stack.pop() {
        if !visited.insert((w.clone(), mask)) {
            continue;
        }
        // Nonempty submasks of `mask`.
        let mut sub = mask;
        while sub != 0 {
            let mut next = w.clone();
            let mut reduced = true;
            for (k, &s) in word.iter().enumerate() {
                if sub >> k & 1 == 1 {
                    if next.get(s) > next.get(s + 1) {
                        reduced = false;
                        break;
                    }
                    next = next.times_s(s);
                }
            }
            if reduced {
                found.insert(next.clone());
                stack.push((next, sub));
            }
            sub = (sub - 1) & mask;
        }
    }
    found
}

/// Class minima of the Cambrian congruence, checked against the
/// c-sortable elements.
pub fn sortable_bottoms(wo: &WeakOrder, q: &Orientation) -> Result<Vec<Permutation>> {
    let theta = cambrian_congruence(wo, q)?;
    let bottoms: BTreeSet<Permutation> = theta
        .bottoms()
        .iter()
        .map(|&x| wo.perm(x).clone())
        .collect();
    let sortable = c_sortable(q);
    if bottoms != sortable {
        let mut diff: Vec<String> = bottoms
            .difference(&sortable)
            .map(|p| format!("bottom, not sortable: {p}"))
            .collect();
        diff.extend(
            sortable
                .difference(&bottoms)
                .map(|p| format!("sortable, not a bottom: {p}")),
        );
        return Err(Error::CrossValidation {
            check: format!("sortable elements for {}", coxeter_word_string(q)),
            diff,
        });
    }
    Ok(bottoms.into_iter().collect())
}

/// A pair of members whose join or meet leaves the set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClosureFailure {
    pub x: usize,
    pub y: usize,
    pub bound: Bound,
    pub result: usize,
}

/// First pair of `members` whose join or meet is not a member.
pub fn closure_failure(l: &Lattice, members: &[usize]) -> Option<ClosureFailure> {
    let set = BitSet::from_indices(l.len(), members.iter().copied());
    for (k, &x) in members.iter().enumerate() {
        for &y in &members[k + 1..] {
            let m = l.meet(x, y);
            if !set.contains(m) {
                return Some(ClosureFailure {
                    x,
                    y,
                    bound: Bound::Meet,
                    result: m,
                });
            }
            let j = l.join(x, y);
            if !set.contains(j) {
                return Some(ClosureFailure {
                    x,
                    y,
                    bound: Bound::Join,
                    result: j,
                });
            }
        }
    }
    None
}

/// The class minima of the Cambrian congruence form a sublattice.
/// Returns the failing pair if they do not.
pub fn verify_sublattice(wo: &WeakOrder, q: &Orientation) -> Result<Option<ClosureFailure>> {
    let theta = cambrian_congruence(wo, q)?;
    Ok(closure_failure(wo.lattice(), &theta.bottoms()))
}

/// `Θ_c ∧ Θ_{c⁻¹}`. For bipartite quivers the contracted arrows are checked
/// to be those labelled by strings with two consecutive edges pointing the
/// same way.
pub fn bicambrian(wo: &WeakOrder, q: &Orientation) -> Result<Congruence> {
    let a = cambrian_congruence(wo, q)?;
    let b = cambrian_congruence(wo, &q.reverse())?;
    let theta = a.meet(&b, wo.lattice())?;
    if q.is_bipartite() {
        let covers = wo.lattice().covers().len();
        let rule = BitSet::from_indices(
            covers,
            (0..covers).filter(|&c| wo.cover_label(c).has_directed_length_two()),
        );
        if theta.contracted() != &rule {
            return Err(Error::CrossValidation {
                check: format!("bipartite biCambrian rule for orientation {q}"),
                diff: diff_arrows(wo, theta.contracted(), &rule),
            });
        }
    }
    Ok(theta)
}

/// `C(k) = binom(2k, k) / (k + 1)`.
pub fn catalan(k: usize) -> usize {
    (0..k).fold(1usize, |c, i| c * 2 * (2 * i + 1) / (i + 2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::Limits;

    #[test]
    fn orientation_parsing() {
        let q = Orientation::parse(3, "10").unwrap();
        assert!(!q.points_down(1));
        assert!(q.points_down(2));
        assert_eq!(q.coxeter_word(), vec![2, 1, 3]);
        assert!(q.is_bipartite());
        assert_eq!(q.to_string(), "10");
        assert_eq!(Orientation::parse(1, "").unwrap().coxeter_word(), vec![1]);
        assert!(Orientation::parse(3, "1").is_err());
        assert!(Orientation::parse(3, "12").is_err());
        assert_eq!(Orientation::linear(3).coxeter_word(), vec![1, 2, 3]);
        assert_eq!(
            Orientation::linear(3).reverse().coxeter_word(),
            vec![3, 2, 1]
        );
        assert_eq!(Orientation::bipartite(3), q);
        assert!(!Orientation::linear(3).is_bipartite());
    }

    #[test]
    fn catalan_numbers() {
        let c: Vec<usize> = (0..8).map(catalan).collect();
        assert_eq!(c, [1, 1, 2, 5, 14, 42, 132, 429]);
    }

    #[test]
    fn generators_small() {
        let limits = Limits::default();
        let w1 = WeakOrder::build(1, &limits).unwrap();
        let q1 = Orientation::parse(1, "").unwrap();
        assert!(cambrian_generators(&w1, &q1).unwrap().is_empty());
        assert_eq!(cambrian_congruence(&w1, &q1).unwrap().class_count(), 2);

        let w2 = WeakOrder::build(2, &limits).unwrap();
        let q = Orientation::parse(2, "1").unwrap();
        let g = cambrian_generators(&w2, &q).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(w2.describe_cover(g[0]), "312->132");
    }

    #[test]
    fn sortable_identity_and_c() {
        for q in Orientation::all(3) {
            let s = c_sortable(&q);
            assert!(s.contains(&Permutation::identity(4)));
            assert!(s.contains(&Permutation::from_word(4, &q.coxeter_word())));
            assert_eq!(s.len(), 14);
        }
    }
}
