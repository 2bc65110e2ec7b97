//! Lattice congruences of finite lattices.
//!
//! A congruence on a finite lattice is determined by the set of Hasse arrows
//! it contracts, so comparisons and keys use that arrow set.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rayon::prelude::*;
use serde::Serialize;

use crate::bitset::BitSet;
use crate::error::{Bound, Error, Result};
use crate::labelled::LabelledHasse;
use crate::limits::Limits;
use crate::poset::{HasseArrow, Lattice};
use crate::union_find::UnionFind;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Congruence {
    class_min: Vec<usize>,
    class_max: Vec<usize>,
    contracted: BitSet,
}

/// A compatibility failure: `x ≡ y` but `x op z` and `y op z` lie in
/// different classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CompatibilityFailure {
    pub x: usize,
    pub y: usize,
    pub z: usize,
    pub bound: Bound,
}

impl Congruence {
    /// All classes are singletons.
    pub fn trivial(l: &Lattice) -> Congruence {
        Congruence {
            class_min: (0..l.len()).collect(),
            class_max: (0..l.len()).collect(),
            contracted: BitSet::new(l.covers().len()),
        }
    }

    /// One class holding the whole lattice.
    pub fn full(l: &Lattice) -> Congruence {
        Congruence {
            class_min: vec![l.bottom(); l.len()],
            class_max: vec![l.top(); l.len()],
            contracted: BitSet::full(l.covers().len()),
        }
    }

    /// Builds a congruence from class ids per element. The partition is
    /// trusted; callers validate with [`compatibility_failure`] first.
    fn from_roots(l: &Lattice, roots: &[usize]) -> Congruence {
        let n = l.len();
        let mut min = vec![usize::MAX; n];
        let mut max = vec![usize::MAX; n];
        for (x, &r) in roots.iter().enumerate() {
            min[r] = if min[r] == usize::MAX {
                x
            } else {
                l.meet(min[r], x)
            };
            max[r] = if max[r] == usize::MAX {
                x
            } else {
                l.join(max[r], x)
            };
        }
        let class_min: Vec<usize> = (0..n).map(|x| min[roots[x]]).collect();
        let class_max: Vec<usize> = (0..n).map(|x| max[roots[x]]).collect();
        let contracted = BitSet::from_indices(
            l.covers().len(),
            l.covers()
                .iter()
                .enumerate()
                .filter(|(_, a)| roots[a.upper] == roots[a.lower])
                .map(|(c, _)| c),
        );
        Congruence {
            class_min,
            class_max,
            contracted,
        }
    }

    /// Validates an arbitrary partition (class id per element).
    pub fn from_partition(l: &Lattice, class_of: &[usize]) -> Result<Congruence> {
        if class_of.len() != l.len() {
            return Err(Error::InvalidArgument(format!(
                "partition of {} elements for a lattice of {}",
                class_of.len(),
                l.len()
            )));
        }
        if let Some(w) = compatibility_failure(l, class_of) {
            return Err(Error::CrossValidation {
                check: "congruence compatibility".into(),
                diff: vec![format!(
                    "{} ≡ {} but not after {} with {}",
                    w.x,
                    w.y,
                    if w.bound == Bound::Join {
                        "join"
                    } else {
                        "meet"
                    },
                    w.z
                )],
            });
        }
        let roots = canonical_roots(class_of);
        Ok(Congruence::from_roots(l, &roots))
    }

    pub fn len(&self) -> usize {
        self.class_min.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class_min.is_empty()
    }

    /// Cover indices whose endpoints are equivalent.
    pub fn contracted(&self) -> &BitSet {
        &self.contracted
    }

    pub fn contracts(&self, cover: usize) -> bool {
        self.contracted.contains(cover)
    }

    pub fn equivalent(&self, x: usize, y: usize) -> bool {
        self.class_min[x] == self.class_min[y]
    }

    /// Least element of the class of `x`.
    pub fn pi_down(&self, x: usize) -> usize {
        self.class_min[x]
    }

    /// Greatest element of the class of `x`.
    pub fn pi_up(&self, x: usize) -> usize {
        self.class_max[x]
    }

    /// Class minima in increasing index order.
    pub fn bottoms(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self.class_min.iter().copied().collect();
        set.into_iter().collect()
    }

    pub fn class_count(&self) -> usize {
        (0..self.len()).filter(|&x| self.class_min[x] == x).count()
    }

    /// Classes as sorted member lists, ordered by their minimum.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut by_min: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for x in 0..self.len() {
            by_min.entry(self.class_min[x]).or_default().push(x);
        }
        by_min.into_values().collect()
    }

    /// Class id per element: the class minimum.
    pub fn class_of(&self) -> &[usize] {
        &self.class_min
    }

    /// Refinement order: `self ≤ other` when every arrow contracted here is
    /// contracted by `other`.
    pub fn refines(&self, other: &Congruence) -> bool {
        self.contracted.is_subset(&other.contracted)
    }

    /// Common refinement of the two partitions.
    pub fn meet(&self, other: &Congruence, l: &Lattice) -> Result<Congruence> {
        let mut ids: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let class_of: Vec<usize> = (0..l.len())
            .map(|x| {
                let key = (self.class_min[x], other.class_min[x]);
                let next = ids.len();
                *ids.entry(key).or_insert(next)
            })
            .collect();
        Congruence::from_partition(l, &class_of)
    }

    /// Smallest congruence containing both.
    pub fn join(&self, other: &Congruence, l: &Lattice) -> Congruence {
        let mut arrows = self.contracted.clone();
        arrows.union_with(&other.contracted);
        con_arrows(l, &arrows)
    }

    /// Every class is the interval `[pi_down x, pi_up x]`.
    pub fn classes_are_intervals(&self, l: &Lattice) -> bool {
        self.classes().iter().all(|class| {
            let lo = self.class_min[class[0]];
            let hi = self.class_max[class[0]];
            l.interval_members(lo, hi) == *class
        })
    }
}

fn canonical_roots(class_of: &[usize]) -> Vec<usize> {
    let mut first: BTreeMap<usize, usize> = BTreeMap::new();
    class_of
        .iter()
        .enumerate()
        .map(|(x, c)| *first.entry(*c).or_insert(x))
        .collect()
}

/// Checks meet/join compatibility of a partition given as class ids.
/// Returns `None` for a congruence.
pub fn compatibility_failure(l: &Lattice, class_of: &[usize]) -> Option<CompatibilityFailure> {
    let roots = canonical_roots(class_of);
    // Compatibility with all translations of a spanning set of pairs (each
    // element paired with its class root) is equivalent to full compatibility.
    for x in 0..l.len() {
        let r = roots[x];
        if r == x {
            continue;
        }
        for z in 0..l.len() {
            if roots[l.join(r, z)] != roots[l.join(x, z)] {
                return Some(CompatibilityFailure {
                    x: r,
                    y: x,
                    z,
                    bound: Bound::Join,
                });
            }
            if roots[l.meet(r, z)] != roots[l.meet(x, z)] {
                return Some(CompatibilityFailure {
                    x: r,
                    y: x,
                    z,
                    bound: Bound::Meet,
                });
            }
        }
    }
    None
}

pub fn is_congruence(l: &Lattice, class_of: &[usize]) -> bool {
    compatibility_failure(l, class_of).is_none()
}

/// `con(S)`: the smallest congruence identifying every seed pair.
///
/// Each successful merge is queued, and every queued pair `(a, b)` merges
/// `a ∨ z` with `b ∨ z` and `a ∧ z` with `b ∧ z` for all `z`. Classes only
/// coarsen, so the worklist empties after at most `len - 1` merges.
pub fn congruence_closure(l: &Lattice, seeds: &[(usize, usize)]) -> Congruence {
    let n = l.len();
    let mut uf = UnionFind::new(n);
    let mut work: VecDeque<(usize, usize)> = VecDeque::new();
    for &(a, b) in seeds {
        if uf.union(a, b) {
            work.push_back((a, b));
        }
    }
    while let Some((a, b)) = work.pop_front() {
        for z in 0..n {
            let (ja, jb) = (l.join(a, z), l.join(b, z));
            if uf.union(ja, jb) {
                work.push_back((ja, jb));
            }
            let (ma, mb) = (l.meet(a, z), l.meet(b, z));
            if uf.union(ma, mb) {
                work.push_back((ma, mb));
            }
        }
    }
    let roots = uf.roots();
    Congruence::from_roots(l, &roots)
}

/// Seeds that are not Hasse arrows of `l` (allowed, but worth reporting).
pub fn non_cover_seeds(l: &Lattice, seeds: &[(usize, usize)]) -> Vec<(usize, usize)> {
    seeds
        .iter()
        .copied()
        .filter(|&(a, b)| l.cover_index(a, b).is_none() && l.cover_index(b, a).is_none())
        .collect()
}

/// `con` of a set of arrows given by cover index.
pub fn con_arrows(l: &Lattice, arrows: &BitSet) -> Congruence {
    let seeds: Vec<(usize, usize)> = arrows
        .iter()
        .map(|c| {
            let a = l.covers()[c];
            (a.upper, a.lower)
        })
        .collect();
    congruence_closure(l, &seeds)
}

/// Principal congruence of one arrow.
pub fn con_arrow(l: &Lattice, cover: usize) -> Congruence {
    let a = l.covers()[cover];
    congruence_closure(l, &[(a.upper, a.lower)])
}

/// A preorder on the Hasse arrows of a lattice: row `q` lists the arrows
/// forced by `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Forcing {
    rows: Vec<BitSet>,
}

impl Forcing {
    pub fn forces(&self, q: usize, r: usize) -> bool {
        self.rows[q].contains(r)
    }

    pub fn forced_by(&self, q: usize) -> &BitSet {
        &self.rows[q]
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Forcing-equivalence class id per arrow; ids are numbered by the
    /// smallest arrow index in each class.
    pub fn classes(&self) -> Vec<usize> {
        let m = self.rows.len();
        let mut class = vec![usize::MAX; m];
        let mut next = 0;
        for q in 0..m {
            if class[q] != usize::MAX {
                continue;
            }
            for (r, slot) in class.iter_mut().enumerate().skip(q) {
                if *slot == usize::MAX && self.forces(q, r) && self.forces(r, q) {
                    *slot = next;
                }
            }
            next += 1;
        }
        class
    }

    pub fn class_count(&self) -> usize {
        self.classes().iter().max().map_or(0, |m| m + 1)
    }

    /// Sets of arrows closed under forcing, i.e. the contracted sets of all
    /// congruences. Refuses to enumerate more than `cap` sets.
    pub fn ideals(&self, cap: usize) -> Result<Vec<BitSet>> {
        let class = self.classes();
        let k = self.class_count();
        let m = self.rows.len();
        let mut members = vec![BitSet::new(m); k];
        for (q, &c) in class.iter().enumerate() {
            members[c].insert(q);
        }
        // below[c]: classes strictly forced by c.
        let rep: Vec<usize> = (0..k)
            .map(|c| class.iter().position(|&x| x == c).unwrap())
            .collect();
        let below: Vec<Vec<usize>> = (0..k)
            .map(|c| {
                (0..k)
                    .filter(|&d| d != c && self.forces(rep[c], rep[d]))
                    .collect()
            })
            .collect();
        // Order classes so forced classes come first.
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by_key(|&c| below[c].len());
        let mut walk = IdealWalk {
            order: &order,
            below: &below,
            members: &members,
            cap,
            chosen: vec![false; k],
            current: BitSet::new(m),
            out: Vec::new(),
        };
        walk.run(0)?;
        let mut out = walk.out;
        out.sort();
        Ok(out)
    }
}

/// Backtracking over down-closed sets of forcing classes.
struct IdealWalk<'a> {
    order: &'a [usize],
    below: &'a [Vec<usize>],
    members: &'a [BitSet],
    cap: usize,
    chosen: Vec<bool>,
    current: BitSet,
    out: Vec<BitSet>,
}

impl IdealWalk<'_> {
    fn run(&mut self, i: usize) -> Result<()> {
        if i == self.order.len() {
            if self.out.len() >= self.cap {
                return Err(Error::SizeLimit {
                    operation: "forcing ideal enumeration",
                    size: self.out.len() + 1,
                    limit: self.cap,
                });
            }
            self.out.push(self.current.clone());
            return Ok(());
        }
        let c = self.order[i];
        self.run(i + 1)?;
        if self.below[c].iter().all(|&d| self.chosen[d]) {
            self.chosen[c] = true;
            let saved = self.current.clone();
            self.current.union_with(&self.members[c]);
            self.run(i + 1)?;
            self.current = saved;
            self.chosen[c] = false;
        }
        Ok(())
    }
}

/// The forcing preorder computed from principal congruences:
/// `q` forces `r` iff `con(q)` contracts `r`.
pub fn forcing(l: &Lattice) -> Forcing {
    let rows = (0..l.covers().len())
        .into_par_iter()
        .map(|c| con_arrow(l, c).contracted)
        .collect();
    Forcing { rows }
}

/// The polygonal preorder: in every polygon the top arrow of each side is
/// equivalent to the bottom arrow of the other side and forces every side
/// arrow that does not touch the top or the bottom; then transitive closure.
pub fn polygon_forcing(l: &Lattice) -> Result<Forcing> {
    let polygons = l
        .polygonality()
        .map_err(|(bottom, top)| Error::NotPolygonal { bottom, top })?;
    let m = l.covers().len();
    let idx = |a: HasseArrow| l.cover_index(a.upper, a.lower).expect("polygon arrow");
    let mut rows: Vec<BitSet> = (0..m).map(|q| BitSet::from_indices(m, [q])).collect();
    for p in &polygons {
        let left = p.left_arrows();
        let right = p.right_arrows();
        let (lt, lb) = (idx(left[0]), idx(*left.last().unwrap()));
        let (rt, rb) = (idx(right[0]), idx(*right.last().unwrap()));
        rows[lt].insert(rb);
        rows[rb].insert(lt);
        rows[rt].insert(lb);
        rows[lb].insert(rt);
        let sides: Vec<usize> = left[1..left.len() - 1]
            .iter()
            .chain(&right[1..right.len() - 1])
            .map(|&a| idx(a))
            .collect();
        for &s in &sides {
            rows[lt].insert(s);
            rows[rt].insert(s);
        }
    }
    // Transitive closure, Warshall style on bitset rows.
    for k in 0..m {
        let row_k = rows[k].clone();
        for row in rows.iter_mut() {
            if row.contains(k) {
                row.union_with(&row_k);
            }
        }
    }
    Ok(Forcing { rows })
}

/// Arrow pairs on which two preorders disagree, for reporting.
pub fn forcing_diff(l: &Lattice, a: &Forcing, b: &Forcing) -> Vec<String> {
    let mut diff = Vec::new();
    for q in 0..a.len() {
        for r in 0..a.len() {
            if a.forces(q, r) != b.forces(q, r) {
                let (x, y) = (l.covers()[q], l.covers()[r]);
                diff.push(format!(
                    "{}->{} vs {}->{}: {} / {}",
                    l.name(x.upper),
                    l.name(x.lower),
                    l.name(y.upper),
                    l.name(y.lower),
                    a.forces(q, r),
                    b.forces(q, r)
                ));
            }
        }
    }
    diff
}

/// A quotient lattice realized on class minima.
#[derive(Debug, Clone)]
pub struct QuotientLattice {
    pub lattice: Lattice,
    /// Quotient element of each original element.
    pub class_of: Vec<usize>,
    /// Class minimum (the representative) of each quotient element.
    pub bottoms: Vec<usize>,
    /// Class maximum of each quotient element.
    pub tops: Vec<usize>,
}

impl QuotientLattice {
    pub fn pi_down(&self, x: usize) -> usize {
        self.bottoms[self.class_of[x]]
    }

    pub fn pi_up(&self, x: usize) -> usize {
        self.tops[self.class_of[x]]
    }

    pub fn len(&self) -> usize {
        self.lattice.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lattice.is_empty()
    }
}

/// The quotient `L/Θ`, ordered as the induced order on class minima.
pub fn quotient(l: &Lattice, theta: &Congruence) -> Result<QuotientLattice> {
    let bottoms = theta.bottoms();
    let mut index = vec![usize::MAX; l.len()];
    for (i, &b) in bottoms.iter().enumerate() {
        index[b] = i;
    }
    let class_of: Vec<usize> = (0..l.len()).map(|x| index[theta.pi_down(x)]).collect();
    let tops: Vec<usize> = bottoms.iter().map(|&b| theta.pi_up(b)).collect();
    // Every quotient arrow is the image of an uncontracted arrow of `l`.
    let mut candidates: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (c, a) in l.covers().iter().enumerate() {
        if !theta.contracts(c) {
            candidates.insert((class_of[a.upper], class_of[a.lower]));
        }
    }
    let mut by_upper: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(u, v) in &candidates {
        by_upper.entry(u).or_default().push(v);
    }
    let mut covers = Vec::new();
    for (&u, vs) in &by_upper {
        for &v in vs {
            let shortcut = vs.iter().any(|&w| w != v && l.leq(bottoms[v], bottoms[w]));
            if !shortcut {
                covers.push((u, v));
            }
        }
    }
    let names = l
        .names()
        .map(|n| bottoms.iter().map(|&b| n[b].clone()).collect());
    let lattice = Lattice::from_covers(bottoms.len(), &covers, names)?;
    Ok(QuotientLattice {
        lattice,
        class_of,
        bottoms,
        tops,
    })
}

/// First pair on which the projection fails to preserve join or meet.
pub fn projection_failure(l: &Lattice, q: &QuotientLattice) -> Option<(usize, usize, Bound)> {
    let ql = &q.lattice;
    for x in 0..l.len() {
        for y in 0..l.len() {
            let (cx, cy) = (q.class_of[x], q.class_of[y]);
            if q.class_of[l.join(x, y)] != ql.join(cx, cy) {
                return Some((x, y, Bound::Join));
            }
            if q.class_of[l.meet(x, y)] != ql.meet(cx, cy) {
                return Some((x, y, Bound::Meet));
            }
        }
    }
    None
}

/// All congruences, sorted by contracted set.
///
/// Congruence-uniform lattices take the forcing-ideal path; others take
/// the join-closure of principal congruences.
pub fn enumerate_congruences(l: &Lattice, limits: &Limits) -> Result<Vec<Congruence>> {
    Limits::check(
        "congruence enumeration",
        l.len(),
        limits.enumeration_elements,
    )?;
    let f = forcing(l);
    if congruence_uniformity(l, &f, limits)?.uniform {
        enumerate_congruences_by_forcing(l, &f, usize::MAX)
    } else {
        enumerate_congruences_by_joins(l, limits)
    }
}

/// All congruences as the join-closure of the principal congruences of
/// arrows, plus the trivial congruence. Sorted by contracted set.
pub fn enumerate_congruences_by_joins(l: &Lattice, limits: &Limits) -> Result<Vec<Congruence>> {
    Limits::check(
        "congruence enumeration",
        l.len(),
        limits.enumeration_elements,
    )?;
    let principal: Vec<Congruence> = {
        let mut seen = BTreeMap::new();
        for c in 0..l.covers().len() {
            let theta = con_arrow(l, c);
            seen.entry(theta.contracted.clone()).or_insert(theta);
        }
        seen.into_values().collect()
    };
    let mut found: BTreeMap<BitSet, Congruence> = BTreeMap::new();
    let trivial = Congruence::trivial(l);
    found.insert(trivial.contracted.clone(), trivial);
    let mut queue: VecDeque<Congruence> = VecDeque::new();
    for p in principal.iter() {
        if found.insert(p.contracted.clone(), p.clone()).is_none() {
            queue.push_back(p.clone());
        }
    }
    while let Some(theta) = queue.pop_front() {
        for p in &principal {
            if p.refines(&theta) {
                continue;
            }
            let joined = theta.join(p, l);
            if !found.contains_key(&joined.contracted) {
                found.insert(joined.contracted.clone(), joined.clone());
                queue.push_back(joined);
            }
        }
    }
    let all: Vec<Congruence> = found.into_values().collect();
    debug_assert!(all.iter().all(|t| is_congruence(l, t.class_of())));
    Ok(all)
}

/// All congruences via down-sets of the forcing order. Sorted by
/// contracted set.
pub fn enumerate_congruences_by_forcing(
    l: &Lattice,
    forcing: &Forcing,
    cap: usize,
) -> Result<Vec<Congruence>> {
    let ideals = forcing.ideals(cap)?;
    let mut all: Vec<Congruence> = ideals
        .par_iter()
        .map(|arrows| con_arrows(l, arrows))
        .collect();
    all.sort_by(|a, b| a.contracted.cmp(&b.contracted));
    Ok(all)
}

/// Congruence-uniformity evidence.
#[derive(Debug, Clone, Serialize)]
pub struct UniformityReport {
    pub semidistributive: bool,
    /// Pairs of join-irreducibles `j` with equal `con(j -> j_*)`.
    pub join_collisions: Vec<(usize, usize)>,
    /// Pairs of meet-irreducibles `m` with equal `con(m^* -> m)`.
    pub meet_collisions: Vec<(usize, usize)>,
    pub uniform: bool,
}

fn collisions(
    l: &Lattice,
    forcing: &Forcing,
    elements: &[usize],
    arrow: impl Fn(usize) -> usize,
) -> Vec<(usize, usize)> {
    let mut seen: BTreeMap<&BitSet, usize> = BTreeMap::new();
    let mut out = Vec::new();
    for &x in elements {
        let row = forcing.forced_by(arrow(x));
        if let Some(&prev) = seen.get(row) {
            out.push((prev, x));
        } else {
            seen.insert(row, x);
        }
    }
    let _ = l;
    out
}

/// Injectivity of `j ↦ con(j → j_*)` and `m ↦ con(m^* → m)`, combined with
/// semidistributivity.
pub fn congruence_uniformity(
    l: &Lattice,
    forcing: &Forcing,
    limits: &Limits,
) -> Result<UniformityReport> {
    let semidistributive = l.semidistributivity(limits)?.is_none();
    let jis = l.join_irreducibles();
    let mis = l.meet_irreducibles();
    let join_collisions = collisions(l, forcing, &jis, |j| {
        l.cover_index(j, l.j_star(j).unwrap()).unwrap()
    });
    let meet_collisions = collisions(l, forcing, &mis, |m| {
        l.cover_index(l.m_star(m).unwrap(), m).unwrap()
    });
    let uniform = semidistributive && join_collisions.is_empty() && meet_collisions.is_empty();
    Ok(UniformityReport {
        semidistributive,
        join_collisions,
        meet_collisions,
        uniform,
    })
}

/// Result of contracting every arrow whose label does not survive.
#[derive(Debug, Clone)]
pub struct AlgebraicQuotient {
    pub congruence: Congruence,
    pub quotient: QuotientLattice,
    /// The quotient with labels carried over from uncontracted arrows.
    pub labelled: LabelledHasse,
}

/// Contracts exactly the arrows whose label is outside `surviving`.
///
/// Fails with `NotExactlyRealizable` if the generated congruence also
/// contracts an arrow with a surviving label.
pub fn algebraic_quotient(
    lh: &LabelledHasse,
    surviving: &BTreeSet<usize>,
) -> Result<AlgebraicQuotient> {
    let l = lh.lattice();
    let m = l.covers().len();
    let doomed = BitSet::from_indices(m, (0..m).filter(|&c| !surviving.contains(&lh.label(c))));
    let congruence = con_arrows(l, &doomed);
    let spilled: BTreeSet<usize> = congruence
        .contracted()
        .iter()
        .map(|c| lh.label(c))
        .filter(|lab| surviving.contains(lab))
        .collect();
    if !spilled.is_empty() {
        return Err(Error::NotExactlyRealizable {
            spilled: spilled
                .iter()
                .map(|&s| lh.label_name(s).to_string())
                .collect(),
        });
    }
    let quotient = quotient(l, &congruence)?;
    let ql = &quotient.lattice;
    let mut arrow_labels: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); ql.covers().len()];
    for (c, a) in l.covers().iter().enumerate() {
        if congruence.contracts(c) {
            continue;
        }
        let (u, v) = (quotient.class_of[a.upper], quotient.class_of[a.lower]);
        if let Some(qc) = ql.cover_index(u, v) {
            arrow_labels[qc].insert(lh.label(c));
        }
    }
    let mut labels = Vec::with_capacity(arrow_labels.len());
    for (qc, set) in arrow_labels.iter().enumerate() {
        if set.len() != 1 {
            let a = ql.covers()[qc];
            return Err(Error::LabelConflict {
                upper: a.upper,
                lower: a.lower,
                labels: set.iter().map(|&s| lh.label_name(s).to_string()).collect(),
            });
        }
        labels.push(*set.iter().next().unwrap());
    }
    // Keep the original label ids and names, restricted to surviving labels.
    let used: Vec<usize> = surviving.iter().copied().collect();
    let remap: BTreeMap<usize, usize> = used.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let names = used.iter().map(|&s| lh.label_name(s).to_string()).collect();
    let mut labelled =
        LabelledHasse::new(ql.clone(), labels.iter().map(|s| remap[s]).collect(), names)?;
    for (&old, &new) in &remap {
        labelled.set_attrs(new, lh.attrs(old).clone());
    }
    Ok(AlgebraicQuotient {
        congruence,
        quotient,
        labelled,
    })
}

/// Two arrows on which the label partition and forcing equivalence disagree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LabelForcingMismatch {
    pub first: usize,
    pub second: usize,
    pub same_label: bool,
    pub forcing_equivalent: bool,
}

/// Arrows share a label iff they are forcing equivalent. Returns the first
/// disagreement, or `None`.
pub fn label_forcing_mismatch(
    lh: &LabelledHasse,
    forcing: &Forcing,
) -> Option<LabelForcingMismatch> {
    let classes = forcing.classes();
    let m = classes.len();
    // Compare the two partitions through class representatives.
    let mut by_label: BTreeMap<usize, usize> = BTreeMap::new();
    let mut by_class: BTreeMap<usize, usize> = BTreeMap::new();
    for q in 0..m {
        let lab = lh.label(q);
        let cls = classes[q];
        for (first, same_label) in [
            (*by_label.entry(lab).or_insert(q), true),
            (*by_class.entry(cls).or_insert(q), false),
        ] {
            let sl = lh.label(first) == lab;
            let fe = classes[first] == cls;
            if sl != fe {
                let _ = same_label;
                return Some(LabelForcingMismatch {
                    first,
                    second: q,
                    same_label: sl,
                    forcing_equivalent: fe,
                });
            }
        }
    }
    None
}

/// Forcing order pushed to labels: `label_forces[a]` holds the labels `b`
/// such that some arrow labelled `a` forces some arrow labelled `b`.
pub fn label_forcing(lh: &LabelledHasse, forcing: &Forcing) -> Vec<BTreeSet<usize>> {
    let mut out = vec![BTreeSet::new(); lh.label_count()];
    for q in 0..forcing.len() {
        for r in forcing.forced_by(q).iter() {
            out[lh.label(q)].insert(lh.label(r));
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundaryReport {
    /// Labels of arrows into the bottom element, with multiplicity.
    pub bottom_labels: Vec<String>,
    /// Labels of arrows out of the top element, with multiplicity.
    pub top_labels: Vec<String>,
    pub coincide: bool,
    /// Boundary labels forced by some other label.
    pub not_maximal: Vec<String>,
    /// Labels maximal in the forcing order on labels.
    pub maximal: Vec<String>,
}

pub fn boundary_labels(lh: &LabelledHasse, forcing: &Forcing) -> BoundaryReport {
    let l = lh.lattice();
    let mut bottom: Vec<usize> = l
        .upper_covers(l.bottom())
        .iter()
        .map(|&u| lh.label(l.cover_index(u, l.bottom()).unwrap()))
        .collect();
    let mut top: Vec<usize> = l
        .lower_covers(l.top())
        .iter()
        .map(|&d| lh.label(l.cover_index(l.top(), d).unwrap()))
        .collect();
    bottom.sort_unstable();
    top.sort_unstable();
    let lf = label_forcing(lh, forcing);
    let used = lh.used_labels();
    let is_maximal = |b: usize| !used.iter().any(|&a| a != b && lf[a].contains(&b));
    let boundary: BTreeSet<usize> = bottom.iter().chain(&top).copied().collect();
    let name = |v: &[usize]| v.iter().map(|&x| lh.label_name(x).to_string()).collect();
    let bottom_set: BTreeSet<usize> = bottom.iter().copied().collect();
    let top_set: BTreeSet<usize> = top.iter().copied().collect();
    BoundaryReport {
        bottom_labels: name(&bottom),
        top_labels: name(&top),
        coincide: bottom_set == top_set,
        not_maximal: boundary
            .iter()
            .filter(|&&b| !is_maximal(b))
            .map(|&b| lh.label_name(b).to_string())
            .collect(),
        maximal: used
            .iter()
            .filter(|&&b| is_maximal(b))
            .map(|&b| lh.label_name(b).to_string())
            .collect(),
    }
}
