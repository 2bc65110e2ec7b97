//! Finite lattices given by their Hasse quiver.
//!
//! Elements are dense indices `0..len`. The order is stored as one up-set and
//! one down-set bitset per element; bits are indexed by position in a fixed
//! linear extension, so the least element of an up-set intersection is its
//! first set bit and the greatest element of a down-set intersection is its
//! last one.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Bound, Error, Result};
use crate::limits::Limits;

/// Lattices up to this size get precomputed join and meet tables.
const TABLE_LIMIT: usize = 1500;

/// An arrow `upper -> lower` of the Hasse quiver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HasseArrow {
    pub upper: usize,
    pub lower: usize,
}

impl HasseArrow {
    pub fn new(upper: usize, lower: usize) -> Self {
        HasseArrow { upper, lower }
    }
}

#[derive(Debug, Clone)]
pub struct Lattice {
    len: usize,
    covers: Vec<HasseArrow>,
    lower: Vec<Vec<usize>>,
    upper: Vec<Vec<usize>>,
    pos: Vec<usize>,
    at: Vec<usize>,
    up: Vec<BitSet>,
    down: Vec<BitSet>,
    names: Option<Vec<String>>,
    join_table: Option<Vec<u32>>,
    meet_table: Option<Vec<u32>>,
}

/// A failure of one of the two semidistributive laws.
///
/// For `bound == Meet`: `x ∧ y = x ∧ z` but `x ∧ (y ∨ z) != x ∧ y`.
/// For `bound == Join` the dual statement fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SemidistributivityFailure {
    pub x: usize,
    pub y: usize,
    pub z: usize,
    pub bound: Bound,
}

impl Serialize for Bound {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(match self {
            Bound::Join => "join",
            Bound::Meet => "meet",
        })
    }
}

/// An interval `[bottom, top]` whose open interior is two disjoint chains.
///
/// Both chains are listed from the element just below `top` down to the
/// element just above `bottom`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Polygon {
    pub bottom: usize,
    pub top: usize,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl Polygon {
    pub fn size(&self) -> usize {
        self.left.len() + self.right.len() + 2
    }

    fn chain_arrows(&self, chain: &[usize]) -> Vec<HasseArrow> {
        let mut out = Vec::with_capacity(chain.len() + 1);
        out.push(HasseArrow::new(self.top, chain[0]));
        for w in chain.windows(2) {
            out.push(HasseArrow::new(w[0], w[1]));
        }
        out.push(HasseArrow::new(*chain.last().unwrap(), self.bottom));
        out
    }

    /// Arrows of the left side, from the top down.
    pub fn left_arrows(&self) -> Vec<HasseArrow> {
        self.chain_arrows(&self.left)
    }

    pub fn right_arrows(&self) -> Vec<HasseArrow> {
        self.chain_arrows(&self.right)
    }
}

impl Lattice {
    /// Builds and validates a lattice from its cover relation.
    ///
    /// `covers` holds `(upper, lower)` pairs. The order relation is computed
    /// as the reflexive-transitive closure; the cover list must be acyclic,
    /// transitively reduced, and every pair of elements must have a unique
    /// join and meet.
    pub fn from_covers(
        len: usize,
        covers: &[(usize, usize)],
        names: Option<Vec<String>>,
    ) -> Result<Lattice> {
        if len == 0 {
            return Err(Error::Empty);
        }
        if let Some(names) = &names {
            if names.len() != len {
                return Err(Error::InvalidArgument(format!(
                    "{} names given for {len} elements",
                    names.len()
                )));
            }
        }
        let mut arrows = Vec::with_capacity(covers.len());
        for &(u, l) in covers {
            for index in [u, l] {
                if index >= len {
                    return Err(Error::IndexOutOfRange { index, len });
                }
            }
            if u == l {
                return Err(Error::Cycle { element: u });
            }
            arrows.push(HasseArrow::new(u, l));
        }
        arrows.sort_unstable();
        if let Some(w) = arrows.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateCover {
                upper: w[0].upper,
                lower: w[0].lower,
            });
        }

        let mut lower = vec![Vec::new(); len];
        let mut upper = vec![Vec::new(); len];
        for a in &arrows {
            lower[a.upper].push(a.lower);
            upper[a.lower].push(a.upper);
        }

        // Kahn's algorithm from the minimal elements upwards.
        let mut pending: Vec<usize> = lower.iter().map(Vec::len).collect();
        let mut queue: VecDeque<usize> = (0..len).filter(|&x| pending[x] == 0).collect();
        let mut at = Vec::with_capacity(len);
        while let Some(x) = queue.pop_front() {
            at.push(x);
            for &u in &upper[x] {
                pending[u] -= 1;
                if pending[u] == 0 {
                    queue.push_back(u);
                }
            }
        }
        if at.len() < len {
            let element = (0..len).find(|&x| pending[x] > 0).unwrap();
            return Err(Error::Cycle { element });
        }
        let mut pos = vec![0; len];
        for (p, &x) in at.iter().enumerate() {
            pos[x] = p;
        }

        let mut down = vec![BitSet::new(len); len];
        for &x in &at {
            let mut row = BitSet::new(len);
            row.insert(pos[x]);
            for &l in &lower[x] {
                row.union_with(&down[l]);
            }
            down[x] = row;
        }
        let mut up = vec![BitSet::new(len); len];
        for &x in at.iter().rev() {
            let mut row = BitSet::new(len);
            row.insert(pos[x]);
            for &u in &upper[x] {
                row.union_with(&up[u]);
            }
            up[x] = row;
        }

        for a in &arrows {
            for &via in &lower[a.upper] {
                if via != a.lower && down[via].contains(pos[a.lower]) {
                    return Err(Error::NotReduced {
                        upper: a.upper,
                        lower: a.lower,
                        via,
                    });
                }
            }
        }

        let mut lattice = Lattice {
            len,
            covers: arrows,
            lower,
            upper,
            pos,
            at,
            up,
            down,
            names,
            join_table: None,
            meet_table: None,
        };
        lattice.validate_bounds()?;
        Ok(lattice)
    }

    /// Builds a lattice from an arbitrary order relation `leq(a, b)`.
    pub fn from_order(
        len: usize,
        leq: impl Fn(usize, usize) -> bool,
        names: Option<Vec<String>>,
    ) -> Result<Lattice> {
        let mut below: Vec<Vec<usize>> = vec![Vec::new(); len];
        for (b, row) in below.iter_mut().enumerate() {
            for a in 0..len {
                if a != b && leq(a, b) {
                    row.push(a);
                }
            }
        }
        let mut covers = Vec::new();
        for (b, row) in below.iter().enumerate() {
            for &a in row {
                let implied = row.iter().any(|&c| c != a && leq(a, c));
                if !implied {
                    covers.push((b, a));
                }
            }
        }
        Lattice::from_covers(len, &covers, names)
    }

    fn validate_bounds(&mut self) -> Result<()> {
        let n = self.len;
        let tables = n <= TABLE_LIMIT;
        let mut join_table = if tables {
            vec![0u32; n * n]
        } else {
            Vec::new()
        };
        let mut meet_table = if tables {
            vec![0u32; n * n]
        } else {
            Vec::new()
        };
        for x in 0..n {
            for y in x..n {
                let j = self.checked_bound(x, y, Bound::Join)?;
                let m = self.checked_bound(x, y, Bound::Meet)?;
                if tables {
                    join_table[x * n + y] = j as u32;
                    join_table[y * n + x] = j as u32;
                    meet_table[x * n + y] = m as u32;
                    meet_table[y * n + x] = m as u32;
                }
            }
        }
        if tables {
            self.join_table = Some(join_table);
            self.meet_table = Some(meet_table);
        }
        Ok(())
    }

    fn checked_bound(&self, x: usize, y: usize, bound: Bound) -> Result<usize> {
        let (rows, first) = match bound {
            Bound::Join => (&self.up, self.up[x].first_common(&self.up[y])),
            Bound::Meet => (&self.down, self.down[x].last_common(&self.down[y])),
        };
        let Some(p) = first else {
            return Err(Error::NotLattice {
                x,
                y,
                bound,
                found: 0,
            });
        };
        let cand = self.at[p];
        if BitSet::intersection_within(&rows[x], &rows[y], &rows[cand]) {
            return Ok(cand);
        }
        let mut common = rows[x].clone();
        common.intersect_with(&rows[y]);
        let found = common
            .iter()
            .map(|q| self.at[q])
            .filter(|&c| {
                let mut strictly = common.clone();
                strictly.intersect_with(match bound {
                    Bound::Join => &self.down[c],
                    Bound::Meet => &self.up[c],
                });
                strictly.count() == 1
            })
            .count();
        Err(Error::NotLattice { x, y, bound, found })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    /// Display name of `x`, falling back to its index.
    pub fn name(&self, x: usize) -> String {
        match &self.names {
            Some(names) => names[x].clone(),
            None => x.to_string(),
        }
    }

    pub fn find_name(&self, name: &str) -> Option<usize> {
        self.names.as_ref()?.iter().position(|n| n == name)
    }

    /// Cover arrows, sorted by `(upper, lower)`.
    pub fn covers(&self) -> &[HasseArrow] {
        &self.covers
    }

    pub fn cover_index(&self, upper: usize, lower: usize) -> Option<usize> {
        self.covers
            .binary_search(&HasseArrow::new(upper, lower))
            .ok()
    }

    /// Elements covered by `x`.
    pub fn lower_covers(&self, x: usize) -> &[usize] {
        &self.lower[x]
    }

    /// Elements covering `x`.
    pub fn upper_covers(&self, x: usize) -> &[usize] {
        &self.upper[x]
    }

    pub fn bottom(&self) -> usize {
        self.at[0]
    }

    pub fn top(&self) -> usize {
        self.at[self.len - 1]
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(self.pos[y])
    }

    #[inline]
    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.leq(x, y) || self.leq(y, x)
    }

    /// Elements in a linear extension of the order, bottom first.
    pub fn linear_extension(&self) -> &[usize] {
        &self.at
    }

    pub fn up_set(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.up[x].iter().map(|p| self.at[p])
    }

    pub fn down_set(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.down[x].iter().map(|p| self.at[p])
    }

    #[inline]
    pub fn join(&self, x: usize, y: usize) -> usize {
        match &self.join_table {
            Some(t) => t[x * self.len + y] as usize,
            None => self.at[self.up[x].first_common(&self.up[y]).unwrap()],
        }
    }

    #[inline]
    pub fn meet(&self, x: usize, y: usize) -> usize {
        match &self.meet_table {
            Some(t) => t[x * self.len + y] as usize,
            None => self.at[self.down[x].last_common(&self.down[y]).unwrap()],
        }
    }

    /// Join of a set; the empty join is the bottom element.
    pub fn join_set(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter()
            .fold(self.bottom(), |acc, x| self.join(acc, x))
    }

    /// Meet of a set; the empty meet is the top element.
    pub fn meet_set(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.top(), |acc, x| self.meet(acc, x))
    }

    /// Elements covering exactly one element.
    pub fn join_irreducibles(&self) -> Vec<usize> {
        (0..self.len)
            .filter(|&x| self.lower[x].len() == 1)
            .collect()
    }

    /// Elements covered by exactly one element.
    pub fn meet_irreducibles(&self) -> Vec<usize> {
        (0..self.len)
            .filter(|&x| self.upper[x].len() == 1)
            .collect()
    }

    /// The unique element covered by a join-irreducible `j`.
    pub fn j_star(&self, j: usize) -> Option<usize> {
        match self.lower[j].as_slice() {
            [l] => Some(*l),
            _ => None,
        }
    }

    /// The unique element covering a meet-irreducible `m`.
    pub fn m_star(&self, m: usize) -> Option<usize> {
        match self.upper[m].as_slice() {
            [u] => Some(*u),
            _ => None,
        }
    }

    /// The sublattice `[x, y]` together with the map from its indices back
    /// to indices of `self`.
    pub fn interval(&self, x: usize, y: usize) -> Result<(Lattice, Vec<usize>)> {
        for index in [x, y] {
            if index >= self.len {
                return Err(Error::IndexOutOfRange {
                    index,
                    len: self.len,
                });
            }
        }
        if !self.leq(x, y) {
            return Err(Error::NotComparable { x, y });
        }
        let members = self.interval_members(x, y);
        let mut local = vec![usize::MAX; self.len];
        for (i, &m) in members.iter().enumerate() {
            local[m] = i;
        }
        let covers: Vec<(usize, usize)> = self
            .covers
            .iter()
            .filter(|a| local[a.upper] != usize::MAX && local[a.lower] != usize::MAX)
            .map(|a| (local[a.upper], local[a.lower]))
            .collect();
        let names = self
            .names
            .as_ref()
            .map(|n| members.iter().map(|&m| n[m].clone()).collect());
        let sub = Lattice::from_covers(members.len(), &covers, names)?;
        Ok((sub, members))
    }

    /// Elements of `[x, y]` in increasing index order.
    pub fn interval_members(&self, x: usize, y: usize) -> Vec<usize> {
        let mut rows = self.up[x].clone();
        rows.intersect_with(&self.down[y]);
        let mut members: Vec<usize> = rows.iter().map(|p| self.at[p]).collect();
        members.sort_unstable();
        members
    }

    /// The dual lattice: same elements, all covers reversed.
    pub fn dual(&self) -> Lattice {
        let covers: Vec<(usize, usize)> = self.covers.iter().map(|a| (a.lower, a.upper)).collect();
        Lattice::from_covers(self.len, &covers, self.names.clone())
            .expect("the dual of a lattice is a lattice")
    }

    /// Number of arrows in and out of `x` in the Hasse quiver.
    pub fn hasse_degree(&self, x: usize) -> usize {
        self.lower[x].len() + self.upper[x].len()
    }

    /// The common Hasse degree if every vertex has the same one.
    pub fn hasse_regular_degree(&self) -> Option<usize> {
        let d = self.hasse_degree(0);
        (1..self.len)
            .all(|x| self.hasse_degree(x) == d)
            .then_some(d)
    }

    pub fn max_hasse_degree(&self) -> usize {
        (0..self.len)
            .map(|x| self.hasse_degree(x))
            .max()
            .unwrap_or(0)
    }

    /// Length of the longest chain from the bottom to `x`, for every `x`.
    pub fn heights(&self) -> Vec<usize> {
        let mut h = vec![0; self.len];
        for &x in &self.at {
            h[x] = self.lower[x].iter().map(|&l| h[l] + 1).max().unwrap_or(0);
        }
        h
    }

    /// Returns the first failure of semidistributivity, or `None` if the
    /// lattice is semidistributive. Refuses lattices above the cubic limit.
    pub fn semidistributivity(&self, limits: &Limits) -> Result<Option<SemidistributivityFailure>> {
        Limits::check("semidistributivity", self.len, limits.cubic_elements)?;
        let n = self.len;
        for x in 0..n {
            // Group the y's by x ∧ y (resp. x ∨ y); the laws only constrain
            // pairs inside one group.
            for (bound, pairing) in [(Bound::Meet, true), (Bound::Join, false)] {
                let mut groups: Vec<Vec<usize>> = vec![Vec::new(); n];
                for y in 0..n {
                    let key = if pairing {
                        self.meet(x, y)
                    } else {
                        self.join(x, y)
                    };
                    groups[key].push(y);
                }
                for (key, ys) in groups.iter().enumerate() {
                    for (i, &y) in ys.iter().enumerate() {
                        for &z in &ys[i + 1..] {
                            let lhs = if pairing {
                                self.meet(x, self.join(y, z))
                            } else {
                                self.join(x, self.meet(y, z))
                            };
                            if lhs != key {
                                return Ok(Some(SemidistributivityFailure { x, y, z, bound }));
                            }
                        }
                    }
                }
            }
        }
        Ok(None)
    }

    /// Tests whether `[x, y]` is a polygon and returns it if so.
    pub fn polygon_at(&self, x: usize, y: usize) -> Option<Polygon> {
        if !self.lt(x, y) {
            return None;
        }
        let interior: Vec<usize> = self
            .interval_members(x, y)
            .into_iter()
            .filter(|&z| z != x && z != y)
            .collect();
        // Split the interior into comparability components.
        let mut comp = vec![usize::MAX; interior.len()];
        let mut n_comp = 0;
        for start in 0..interior.len() {
            if comp[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            comp[start] = n_comp;
            while let Some(i) = stack.pop() {
                for j in 0..interior.len() {
                    if comp[j] == usize::MAX && self.comparable(interior[i], interior[j]) {
                        comp[j] = n_comp;
                        stack.push(j);
                    }
                }
            }
            n_comp += 1;
        }
        if n_comp != 2 {
            return None;
        }
        let mut chains: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
        for (i, &z) in interior.iter().enumerate() {
            chains[comp[i]].push(z);
        }
        for chain in chains.iter_mut() {
            chain.sort_by_key(|&z| std::cmp::Reverse(self.pos[z]));
            if chain.windows(2).any(|w| !self.lt(w[1], w[0])) {
                return None;
            }
        }
        let [mut left, mut right] = chains;
        // Deterministic sides: the chain with the smaller top element is left.
        if right[0] < left[0] {
            std::mem::swap(&mut left, &mut right);
        }
        Some(Polygon {
            bottom: x,
            top: y,
            left,
            right,
        })
    }

    /// Intervals required to be polygons by the definition of polygonality:
    /// `[x, y1 ∨ y2]` for two upper covers of `x`, and `[x1 ∧ x2, y]` for two
    /// lower covers of `y`. Sorted and deduplicated.
    pub fn polygon_candidates(&self) -> Vec<(usize, usize)> {
        let mut out = BTreeSet::new();
        for x in 0..self.len {
            let ups = &self.upper[x];
            for (i, &a) in ups.iter().enumerate() {
                for &b in &ups[i + 1..] {
                    out.insert((x, self.join(a, b)));
                }
            }
            let downs = &self.lower[x];
            for (i, &a) in downs.iter().enumerate() {
                for &b in &downs[i + 1..] {
                    out.insert((self.meet(a, b), x));
                }
            }
        }
        out.into_iter().collect()
    }

    /// `Ok(polygons)` if the lattice is polygonal, otherwise the first
    /// candidate interval that is not a polygon.
    pub fn polygonality(&self) -> std::result::Result<Vec<Polygon>, (usize, usize)> {
        self.polygon_candidates()
            .into_iter()
            .map(|(x, y)| self.polygon_at(x, y).ok_or((x, y)))
            .collect()
    }

    pub fn is_polygonal(&self) -> bool {
        self.polygonality().is_ok()
    }

    /// All polygons arising from pairs of covers (whether or not the lattice
    /// is polygonal).
    pub fn polygons(&self) -> Vec<Polygon> {
        self.polygon_candidates()
            .into_iter()
            .filter_map(|(x, y)| self.polygon_at(x, y))
            .collect()
    }
}

/// Searches for an isomorphism `a -> b` of Hasse quivers. `arrow_ok` is
/// called with cover indices of `a` and `b` and may reject a pairing (for
/// instance when labels differ).
pub fn find_isomorphism_with(
    a: &Lattice,
    b: &Lattice,
    arrow_ok: impl Fn(usize, usize) -> bool,
) -> Option<Vec<usize>> {
    if a.len() != b.len() || a.covers().len() != b.covers().len() {
        return None;
    }
    let mut search = IsoSearch {
        order: a.linear_extension(),
        a,
        b,
        map: vec![usize::MAX; a.len()],
        used: vec![false; b.len()],
        arrow_ok,
    };
    search.extend(0).then_some(search.map)
}

fn degree_signature(l: &Lattice, x: usize) -> (usize, usize) {
    (l.lower_covers(x).len(), l.upper_covers(x).len())
}

/// Extends a partial map along a linear extension of `a`.
struct IsoSearch<'a, F> {
    order: &'a [usize],
    a: &'a Lattice,
    b: &'a Lattice,
    map: Vec<usize>,
    used: Vec<bool>,
    arrow_ok: F,
}

impl<F: Fn(usize, usize) -> bool> IsoSearch<'_, F> {
    fn extend(&mut self, k: usize) -> bool {
        if k == self.order.len() {
            return true;
        }
        let (a, b) = (self.a, self.b);
        let x = self.order[k];
        for y in 0..b.len() {
            if self.used[y] || degree_signature(a, x) != degree_signature(b, y) {
                continue;
            }
            let fits = a.lower_covers(x).iter().all(|&l| {
                match (a.cover_index(x, l), b.cover_index(y, self.map[l])) {
                    (Some(ca), Some(cb)) => (self.arrow_ok)(ca, cb),
                    _ => false,
                }
            });
            if !fits {
                continue;
            }
            self.map[x] = y;
            self.used[y] = true;
            if self.extend(k + 1) {
                return true;
            }
            self.map[x] = usize::MAX;
            self.used[y] = false;
        }
        false
    }
}

pub fn find_isomorphism(a: &Lattice, b: &Lattice) -> Option<Vec<usize>> {
    find_isomorphism_with(a, b, |_, _| true)
}

/// Small lattices used across the test suites.
pub mod examples {
    use super::Lattice;

    /// The chain `0 < 1 < ... < len-1`.
    pub fn chain(len: usize) -> Lattice {
        let covers: Vec<(usize, usize)> = (1..len).map(|i| (i, i - 1)).collect();
        Lattice::from_covers(len, &covers, None).unwrap()
    }

    /// The Boolean lattice on two atoms: 0 bottom, 1 and 2 atoms, 3 top.
    pub fn boolean_square() -> Lattice {
        Lattice::from_covers(4, &[(1, 0), (2, 0), (3, 1), (3, 2)], None).unwrap()
    }

    /// M3: three pairwise incomparable atoms 1, 2, 3 between 0 and 4.
    pub fn m3() -> Lattice {
        Lattice::from_covers(5, &[(1, 0), (2, 0), (3, 0), (4, 1), (4, 2), (4, 3)], None).unwrap()
    }

    /// N5 (the pentagon): 0 < 1 < 2 < 4 and 0 < 3 < 4.
    pub fn pentagon() -> Lattice {
        Lattice::from_covers(5, &[(1, 0), (2, 1), (4, 2), (3, 0), (4, 3)], None).unwrap()
    }
}
