//! Bricks of the type A preprojective algebra as strings on the doubled
//! quiver `1 - 2 - ... - n`.
//!
//! A string is a non-revisiting walk; it is fixed by its support `[lo, hi]`
//! and the direction of each edge it uses. Edges carry their arrow identity
//! (`x` points up, `y` points down), so a walk and its reverse give the same
//! data and the representation is canonical.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::bitset::BitSet;
use crate::congruence::{self, Congruence};
use crate::error::{Error, Result};
use crate::weak_order::{Permutation, WeakOrder};

/// A string module: support `lo..=hi`; bit `k` of `dirs` is set when the
/// edge between `lo + k` and `lo + k + 1` is the arrow `x` (low to high),
/// clear when it is `y` (high to low).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StringBrick {
    lo: u8,
    hi: u8,
    dirs: u32,
}

impl StringBrick {
    pub fn new(lo: usize, hi: usize, dirs: u32) -> Result<Self> {
        if lo == 0 || hi < lo || hi - lo > 31 {
            return Err(Error::InvalidArgument(format!(
                "bad string support [{lo}, {hi}]"
            )));
        }
        let edges = hi - lo;
        if edges < 32 && dirs >> edges != 0 {
            return Err(Error::InvalidArgument(format!(
                "direction bits {dirs:#b} exceed {edges} edges"
            )));
        }
        Ok(StringBrick {
            lo: lo as u8,
            hi: hi as u8,
            dirs,
        })
    }

    pub fn simple(i: usize) -> Self {
        StringBrick::new(i, i, 0).expect("vertex index")
    }

    pub fn lo(&self) -> usize {
        self.lo as usize
    }

    pub fn hi(&self) -> usize {
        self.hi as usize
    }

    pub fn dirs(&self) -> u32 {
        self.dirs
    }

    /// Number of vertices in the support.
    pub fn dimension(&self) -> usize {
        self.hi() - self.lo() + 1
    }

    pub fn is_simple(&self) -> bool {
        self.lo == self.hi
    }

    /// Direction of the edge between `i` and `i + 1`, if the string uses it.
    /// `Some(true)` means the arrow `i -> i + 1`.
    pub fn edge(&self, i: usize) -> Option<bool> {
        if i < self.lo() || i >= self.hi() {
            return None;
        }
        Some(self.dirs >> (i - self.lo()) & 1 == 1)
    }

    /// Substring with support `[lo, hi]` (must lie inside this support).
    fn restrict(&self, lo: usize, hi: usize) -> StringBrick {
        let mask = if hi == lo { 0 } else { (1u32 << (hi - lo)) - 1 };
        StringBrick {
            lo: lo as u8,
            hi: hi as u8,
            dirs: (self.dirs >> (lo - self.lo())) & mask,
        }
    }

    /// The string with every edge reversed.
    pub fn opposite(&self) -> StringBrick {
        let edges = self.hi() - self.lo();
        let mask = if edges == 0 { 0 } else { (1u32 << edges) - 1 };
        StringBrick {
            dirs: !self.dirs & mask,
            ..*self
        }
    }

    /// True when some two consecutive edges point the same way.
    pub fn has_directed_length_two(&self) -> bool {
        (self.lo()..self.hi().saturating_sub(1)).any(|i| self.edge(i) == self.edge(i + 1))
    }
}

impl fmt::Display for StringBrick {
    /// `1>2<3`: `>` is the arrow towards the larger vertex, `<` the other.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.lo)?;
        for i in self.lo()..self.hi() {
            let sep = if self.edge(i) == Some(true) { '>' } else { '<' };
            write!(f, "{sep}{}", i + 1)?;
        }
        Ok(())
    }
}

impl FromStr for StringBrick {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse {
            context: "string".into(),
            message: format!("cannot read {s:?} as a walk like 1>2<3"),
        };
        let mut vertices = Vec::new();
        let mut dirs = 0u32;
        let mut rest = s;
        loop {
            let end = rest.find(['<', '>']).unwrap_or(rest.len());
            let v: usize = rest[..end].parse().map_err(|_| bad())?;
            vertices.push(v);
            if end == rest.len() {
                break;
            }
            if rest.as_bytes()[end] == b'>' {
                dirs |= 1 << (vertices.len() - 1);
            }
            rest = &rest[end + 1..];
        }
        let lo = vertices[0];
        if vertices.iter().enumerate().any(|(k, &v)| v != lo + k) {
            return Err(bad());
        }
        StringBrick::new(lo, *vertices.last().unwrap(), dirs)
    }
}

impl Serialize for StringBrick {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A path visiting each vertex at most once: trivial (`lo == hi`), or all
/// arrows pointing the same way.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrientedPath {
    pub lo: usize,
    pub hi: usize,
    /// Arrows point from `lo` to `hi`. Ignored for trivial paths.
    pub forward: bool,
}

impl OrientedPath {
    pub fn trivial(i: usize) -> Self {
        OrientedPath {
            lo: i,
            hi: i,
            forward: true,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.lo == self.hi
    }

    /// The underlying string module (a uniserial brick).
    pub fn as_string(&self) -> StringBrick {
        let edges = self.hi - self.lo;
        let dirs = if self.forward && edges > 0 {
            (1u32 << edges) - 1
        } else {
            0
        };
        StringBrick::new(self.lo, self.hi, dirs).expect("path support")
    }
}

impl fmt::Display for OrientedPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            write!(f, "e{}", self.lo)
        } else {
            write!(f, "{}", self.as_string())
        }
    }
}

impl Serialize for OrientedPath {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// All strings on `n` vertices, ordered by dimension, then `lo`, then
/// direction bits.
pub fn enumerate_strings(n: usize) -> Vec<StringBrick> {
    let mut out = Vec::new();
    for len in 1..=n {
        for lo in 1..=n + 1 - len {
            for dirs in 0..(1u32 << (len - 1)) {
                out.push(StringBrick::new(lo, lo + len - 1, dirs).unwrap());
            }
        }
    }
    out
}

/// Position of `s` in [`enumerate_strings`]`(n)`.
pub fn string_index(n: usize, s: &StringBrick) -> usize {
    let len = s.dimension();
    // Strings of smaller dimension: sum over d < len of (n - d + 1) 2^(d-1).
    let before: usize = (1..len).map(|d| (n + 1 - d) << (d - 1)).sum();
    before + ((s.lo() - 1) << (len - 1)) + s.dirs as usize
}

/// Label of the arrow `σ -> σ s_ℓ` at a descent `ℓ` of `σ`.
///
/// The support is `[σ(ℓ+1), σ(ℓ) - 1]`; the edge between `i - 1` and `i`
/// is traversed upwards iff `i ∈ σ({1, ..., ℓ})`.
pub fn brick_label(sigma: &Permutation, ell: usize) -> Result<StringBrick> {
    if !sigma.has_descent(ell) {
        return Err(Error::NotDescent {
            permutation: sigma.to_string(),
            position: ell,
        });
    }
    let lo = sigma.get(ell + 1) as usize;
    let hi = sigma.get(ell) as usize - 1;
    let mut early = 0u64;
    for p in 1..=ell {
        early |= 1 << sigma.get(p);
    }
    let mut dirs = 0u32;
    for i in lo + 1..=hi {
        if early >> i & 1 == 1 {
            dirs |= 1 << (i - 1 - lo);
        }
    }
    StringBrick::new(lo, hi, dirs)
}

/// `u` is a substring of `w`: support contained, same directions on the
/// shared edges.
pub fn substring_leq(u: &StringBrick, w: &StringBrick) -> bool {
    w.lo <= u.lo && u.hi <= w.hi && w.restrict(u.lo(), u.hi()) == *u
}

/// The forcing order on bricks: strings with their substring Hasse arrows.
#[derive(Debug, Clone, Serialize)]
pub struct BrickPoset {
    pub strings: Vec<StringBrick>,
    /// `(u, w)`: `u` forces `w`, with `w` one vertex longer.
    pub arrows: Vec<(usize, usize)>,
}

impl BrickPoset {
    pub fn leq(&self, u: usize, w: usize) -> bool {
        substring_leq(&self.strings[u], &self.strings[w])
    }
}

/// Substring order on the strings of rank `n`, as a Hasse quiver.
pub fn substring_poset(n: usize) -> BrickPoset {
    let strings = enumerate_strings(n);
    let mut arrows = Vec::new();
    for (a, u) in strings.iter().enumerate() {
        for (b, w) in strings.iter().enumerate() {
            if w.dimension() == u.dimension() + 1 && substring_leq(u, w) {
                arrows.push((a, b));
            }
        }
    }
    BrickPoset { strings, arrows }
}

/// Forcing order pushed from the arrows of a labelled weak order to their
/// labels. Entry `[a]` holds every label forced by label `a`.
pub fn label_forcing_from_weak_order(wo: &WeakOrder) -> Vec<BTreeSet<usize>> {
    let lh = wo.labelled();
    let f = congruence::forcing(lh.lattice());
    congruence::label_forcing(lh, &f)
}

/// [`substring_poset`] cross-validated against forcing in the labelled weak
/// order of the same rank.
pub fn brick_forcing_poset(wo: &WeakOrder) -> Result<BrickPoset> {
    let poset = substring_poset(wo.rank());
    let forced = label_forcing_from_weak_order(wo);
    let lh = wo.labelled();
    let mut diff = Vec::new();
    for (a, u) in poset.strings.iter().enumerate() {
        for (b, w) in poset.strings.iter().enumerate() {
            let la = lh.label_id(&u.to_string());
            let lb = lh.label_id(&w.to_string());
            let forces = match (la, lb) {
                (Some(la), Some(lb)) => forced[la].contains(&lb),
                _ => false,
            };
            if forces != poset.leq(a, b) {
                diff.push(format!(
                    "{u} -> {w}: forcing {forces}, substring {}",
                    !forces
                ));
            }
        }
    }
    if diff.is_empty() {
        Ok(poset)
    } else {
        Err(Error::CrossValidation {
            check: "forcing equals substring order".into(),
            diff,
        })
    }
}

/// The `n²` paths: trivial paths first, then by support and direction.
pub fn enumerate_paths(n: usize) -> Vec<OrientedPath> {
    let mut out: Vec<OrientedPath> = (1..=n).map(OrientedPath::trivial).collect();
    for len in 2..=n {
        for lo in 1..=n + 1 - len {
            for forward in [true, false] {
                out.push(OrientedPath {
                    lo,
                    hi: lo + len - 1,
                    forward,
                });
            }
        }
    }
    out
}

/// `p` acts nonzero on the string module `w`: `p` occurs as a segment of
/// `w` with matching directions (a trivial path needs only its vertex).
pub fn path_acts_nonzero(p: &OrientedPath, w: &StringBrick) -> bool {
    substring_leq(&p.as_string(), w)
}

/// Covers of the weak order whose label is hit by one of `generators`.
pub fn annihilated_arrows(wo: &WeakOrder, generators: &[OrientedPath]) -> BitSet {
    let covers = wo.lattice().covers().len();
    BitSet::from_indices(
        covers,
        (0..covers).filter(|&c| {
            let s = wo.cover_label(c);
            generators.iter().any(|p| path_acts_nonzero(p, &s))
        }),
    )
}

/// The algebraic congruence of the ideal generated by `generators`: it
/// contracts exactly the arrows whose label is hit by some generator.
///
/// The arrow set is closed to a congruence; if closing adds arrows the
/// result is reported as a cross-validation failure.
pub fn ideal_congruence(wo: &WeakOrder, generators: &[OrientedPath]) -> Result<Congruence> {
    let arrows = annihilated_arrows(wo, generators);
    let theta = congruence::con_arrows(wo.lattice(), &arrows);
    if theta.contracted() != &arrows {
        let mut extra = theta.contracted().clone();
        extra.difference_with(&arrows);
        return Err(Error::CrossValidation {
            check: "annihilated arrows form a congruence".into(),
            diff: extra
                .iter()
                .map(|c| format!("{} also contracted", wo.describe_cover(c)))
                .collect(),
        });
    }
    Ok(theta)
}

/// Outcome of enumerating up-closed path sets and their congruences.
#[derive(Debug, Clone, Serialize)]
pub struct AlgebraicCount {
    pub rank: usize,
    pub paths: usize,
    /// Up-closed subsets of the path poset (the ideals).
    pub ideals: usize,
    /// Distinct congruences obtained.
    pub congruences: usize,
    pub injective: bool,
    /// Two generating sets giving the same congruence, if any.
    pub collision: Option<(Vec<OrientedPath>, Vec<OrientedPath>)>,
}

/// Every subset of `paths` closed under taking longer paths containing a
/// member.
pub fn up_closed_path_sets(paths: &[OrientedPath]) -> Vec<Vec<OrientedPath>> {
    let mut order: Vec<usize> = (0..paths.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(paths[i].hi - paths[i].lo));
    let above: Vec<Vec<usize>> = (0..paths.len())
        .map(|p| {
            (0..paths.len())
                .filter(|&q| q != p && substring_leq(&paths[p].as_string(), &paths[q].as_string()))
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut chosen = vec![false; paths.len()];
    fn walk(
        i: usize,
        order: &[usize],
        above: &[Vec<usize>],
        chosen: &mut Vec<bool>,
        paths: &[OrientedPath],
        out: &mut Vec<Vec<OrientedPath>>,
    ) {
        if i == order.len() {
            out.push(
                (0..paths.len())
                    .filter(|&p| chosen[p])
                    .map(|p| paths[p])
                    .collect(),
            );
            return;
        }
        let p = order[i];
        walk(i + 1, order, above, chosen, paths, out);
        if above[p].iter().all(|&q| chosen[q]) {
            chosen[p] = true;
            walk(i + 1, order, above, chosen, paths, out);
            chosen[p] = false;
        }
    }
    walk(0, &order, &above, &mut chosen, paths, &mut out);
    out
}

/// Counts algebraic congruences through ideals of the path poset and
/// certifies that distinct ideals give distinct congruences.
pub fn count_algebraic_congruences(wo: &WeakOrder) -> Result<AlgebraicCount> {
    use rayon::prelude::*;
    let paths = enumerate_paths(wo.rank());
    let sets = up_closed_path_sets(&paths);
    let thetas: Vec<Congruence> = sets
        .par_iter()
        .map(|s| ideal_congruence(wo, s))
        .collect::<Result<_>>()?;
    let mut seen: std::collections::BTreeMap<BitSet, usize> = std::collections::BTreeMap::new();
    let mut collision = None;
    for (k, t) in thetas.iter().enumerate() {
        if let Some(&prev) = seen.get(t.contracted()) {
            if collision.is_none() {
                collision = Some((sets[prev].clone(), sets[k].clone()));
            }
        } else {
            seen.insert(t.contracted().clone(), k);
        }
    }
    Ok(AlgebraicCount {
        rank: wo.rank(),
        paths: paths.len(),
        ideals: sets.len(),
        congruences: seen.len(),
        injective: collision.is_none(),
        collision,
    })
}

/// The uniserial brick labelling the arrow below `d_{i,j}`: the path from
/// `i` to `j`, upwards when `i <= j`.
pub fn uniserial_of_double_ji(i: usize, j: usize) -> OrientedPath {
    OrientedPath {
        lo: i.min(j),
        hi: i.max(j),
        forward: i <= j,
    }
}
