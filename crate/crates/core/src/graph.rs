//! Simple digraphs on dense vertex labels and their two-way distances.

use std::collections::VecDeque;
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};

/// Fixed-capacity bitset over `0..len`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet {
    words: Vec<u64>,
    len: usize,
}

impl VertexSet {
    pub fn new(len: usize) -> Self {
        VertexSet {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn capacity(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.len && self.words[v / 64] >> (v % 64) & 1 == 1
    }

    /// Returns `true` if `v` was not already present.
    #[inline]
    pub fn insert(&mut self, v: usize) -> bool {
        let had = self.contains(v);
        self.words[v / 64] |= 1 << (v % 64);
        !had
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        self.words[v / 64] &= !(1 << (v % 64));
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * 64 + b)
                }
            })
        })
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A finite simple digraph on vertices `0..n`.
///
/// Strong connectivity is not required to build one; every distance based
/// operation rejects digraphs that are not strongly connected.
pub struct Digraph {
    out: Vec<VertexSet>,
    distances: OnceLock<Option<Arc<TwoWayDistanceMatrix>>>,
}

impl Digraph {
    /// Builds the digraph with exactly the given arcs. Duplicates collapse.
    pub fn new(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::OrderTooSmall { n, min: 1 });
        }
        let mut g = Digraph::empty(n);
        for (u, v) in arcs {
            g.try_add_arc(u, v)?;
        }
        Ok(g)
    }

    /// The null digraph of order `n`.
    pub fn empty(n: usize) -> Self {
        Digraph {
            out: vec![VertexSet::new(n); n],
            distances: OnceLock::new(),
        }
    }

    pub(crate) fn try_add_arc(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.order();
        for x in [u, v] {
            if x >= n {
                return Err(Error::VertexOutOfRange { vertex: x, n });
            }
        }
        if u == v {
            return Err(Error::LoopArc(u));
        }
        self.add_arc(u, v);
        Ok(())
    }

    /// Unchecked apart from debug assertions; invalidates the distance cache.
    pub(crate) fn add_arc(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && u < self.order() && v < self.order());
        self.out[u].insert(v);
        self.distances = OnceLock::new();
    }

    pub(crate) fn remove_arc(&mut self, u: usize, v: usize) {
        self.out[u].remove(v);
        self.distances = OnceLock::new();
    }

    pub fn order(&self) -> usize {
        self.out.len()
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(VertexSet::count).sum()
    }

    #[inline]
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out[u].contains(v)
    }

    pub fn out_neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.out[u].iter()
    }

    pub fn out_degree(&self, u: usize) -> usize {
        self.out[u].count()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.out.iter().filter(|s| s.contains(v)).count()
    }

    /// All arcs in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, s)| s.iter().map(move |v| (u, v)))
    }

    pub fn arc_list(&self) -> Vec<(usize, usize)> {
        self.arcs().collect()
    }

    /// Vertices reachable from `source`, including `source`.
    pub fn reachable_from(&self, source: usize) -> VertexSet {
        let mut seen = VertexSet::new(self.order());
        let mut stack = vec![source];
        seen.insert(source);
        while let Some(u) = stack.pop() {
            for v in self.out_neighbors(u) {
                if seen.insert(v) {
                    stack.push(v);
                }
            }
        }
        seen
    }

    pub fn is_strongly_connected(&self) -> bool {
        let n = self.order();
        if let Some(cached) = self.distances.get() {
            return cached.is_some();
        }
        self.reachable_from(0).count() == n && self.reverse().reachable_from(0).count() == n
    }

    /// The digraph with every arc reversed.
    pub fn reverse(&self) -> Digraph {
        let mut r = Digraph::empty(self.order());
        for (u, v) in self.arcs() {
            r.out[v].insert(u);
        }
        r
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Digraph {
        assert_eq!(perm.len(), self.order());
        let mut r = Digraph::empty(self.order());
        for (u, v) in self.arcs() {
            r.out[perm[u]].insert(perm[v]);
        }
        r
    }

    /// Induced subdigraph on `vertices`, relabelled in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Digraph {
        let mut r = Digraph::empty(vertices.len());
        for (i, &a) in vertices.iter().enumerate() {
            for (j, &b) in vertices.iter().enumerate() {
                if i != j && self.has_arc(a, b) {
                    r.out[i].insert(j);
                }
            }
        }
        r
    }

    /// Two-way distances, computed once and cached.
    pub fn distances(&self) -> Result<Arc<TwoWayDistanceMatrix>> {
        self.distances
            .get_or_init(|| TwoWayDistanceMatrix::compute(self).map(Arc::new))
            .clone()
            .ok_or(Error::NotStronglyConnected)
    }

    /// The type `(1, r)` of an arc, where `r` is the length of the return path.
    pub fn arc_type(&self, u: usize, v: usize) -> Result<(u32, u32)> {
        if u >= self.order() || v >= self.order() || !self.has_arc(u, v) {
            return Err(Error::ArcAbsent(u, v));
        }
        let m = self.distances()?;
        Ok((1, m.dist(v, u)))
    }

    /// True iff every arc has its reverse arc.
    pub fn is_undirected(&self) -> bool {
        self.arcs().all(|(u, v)| self.has_arc(v, u))
    }

    /// True iff every ordered pair of distinct vertices is an arc.
    pub fn is_complete(&self) -> bool {
        let n = self.order();
        self.arc_count() == n * (n - 1)
    }
}

impl Clone for Digraph {
    fn clone(&self) -> Self {
        Digraph {
            out: self.out.clone(),
            distances: self.distances.clone(),
        }
    }
}

impl PartialEq for Digraph {
    fn eq(&self, other: &Self) -> bool {
        self.out == other.out
    }
}

impl Eq for Digraph {}

impl std::hash::Hash for Digraph {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.out.hash(state);
    }
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Digraph")
            .field("n", &self.order())
            .field("arcs", &self.arc_list())
            .finish()
    }
}

/// Ordered pair `(∂(x,y), ∂(y,x))`.
pub type TwoWay = (u32, u32);

/// All-pairs shortest path lengths of a strongly connected digraph.
#[derive(Clone, PartialEq, Eq)]
pub struct TwoWayDistanceMatrix {
    n: usize,
    dist: Vec<u32>,
}

impl TwoWayDistanceMatrix {
    /// Breadth-first search from every source. `None` if some vertex is
    /// unreachable from another.
    fn compute(g: &Digraph) -> Option<Self> {
        let n = g.order();
        let mut dist = vec![u32::MAX; n * n];
        let mut queue = VecDeque::with_capacity(n);
        for s in 0..n {
            let row = &mut dist[s * n..(s + 1) * n];
            row[s] = 0;
            queue.clear();
            queue.push_back(s);
            let mut reached = 1;
            while let Some(u) = queue.pop_front() {
                let du = row[u];
                for v in g.out_neighbors(u) {
                    if row[v] == u32::MAX {
                        row[v] = du + 1;
                        reached += 1;
                        queue.push_back(v);
                    }
                }
            }
            if reached != n {
                return None;
            }
        }
        Some(TwoWayDistanceMatrix { n, dist })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn dist(&self, x: usize, y: usize) -> u32 {
        self.dist[x * self.n + y]
    }

    #[inline]
    pub fn two_way(&self, x: usize, y: usize) -> TwoWay {
        (self.dist(x, y), self.dist(y, x))
    }

    pub fn diameter(&self) -> u32 {
        self.dist.iter().copied().max().unwrap_or(0)
    }

    /// Length of a shortest directed cycle; `None` for the single vertex.
    pub fn girth(&self) -> Option<u32> {
        let n = self.n;
        (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .filter(|&(x, y)| self.dist(x, y) == 1)
            .map(|(x, y)| 1 + self.dist(y, x))
            .min()
    }

    /// The set `∂̃(Γ)` of all two-way distances, sorted.
    pub fn two_way_values(&self) -> Vec<TwoWay> {
        let mut vals: Vec<TwoWay> = (0..self.n)
            .flat_map(|x| (0..self.n).map(move |y| (x, y)))
            .map(|(x, y)| self.two_way(x, y))
            .collect();
        vals.sort_unstable();
        vals.dedup();
        vals
    }

    pub fn row(&self, x: usize) -> &[u32] {
        &self.dist[x * self.n..(x + 1) * self.n]
    }
}

impl fmt::Debug for TwoWayDistanceMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[u32]> = (0..self.n).map(|x| self.row(x)).collect();
        f.debug_struct("TwoWayDistanceMatrix")
            .field("n", &self.n)
            .field("dist", &rows)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Digraph {
        Digraph::new(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn build_rejects_loops_and_out_of_range() {
        assert_eq!(Digraph::new(2, [(0, 0)]).unwrap_err(), Error::LoopArc(0));
        assert!(matches!(
            Digraph::new(2, [(0, 2)]),
            Err(Error::VertexOutOfRange { vertex: 2, n: 2 })
        ));
        assert!(Digraph::new(0, []).is_err());
    }

    #[test]
    fn duplicates_collapse() {
        let g = Digraph::new(3, [(0, 1), (0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(g.arc_count(), 3);
        assert_eq!(g, cycle(3));
    }

    #[test]
    fn strong_connectivity() {
        assert!(cycle(3).is_strongly_connected());
        assert!(!Digraph::new(2, [(0, 1)]).unwrap().is_strongly_connected());
        let g1 = Digraph::new(3, [(0, 1), (1, 2), (2, 1), (2, 0)]).unwrap();
        assert!(g1.is_strongly_connected());
        assert!(Digraph::empty(1).is_strongly_connected());
    }

    #[test]
    fn cycle_distances() {
        let m = cycle(4).distances().unwrap();
        assert_eq!(m.dist(0, 3), 3);
        assert_eq!(m.dist(3, 0), 1);
        assert_eq!(m.diameter(), 3);
        assert_eq!(m.girth(), Some(4));
    }

    #[test]
    fn distance_requires_strong_connectivity() {
        let g = Digraph::new(2, [(0, 1)]).unwrap();
        assert_eq!(g.distances().unwrap_err(), Error::NotStronglyConnected);
    }

    #[test]
    fn arc_types() {
        assert_eq!(cycle(4).arc_type(0, 1).unwrap(), (1, 3));
        let mut g1 = cycle(4);
        g1.add_arc(3, 1);
        assert_eq!(g1.arc_type(3, 1).unwrap(), (1, 2));
        let k2 = Digraph::new(2, [(0, 1), (1, 0)]).unwrap();
        assert_eq!(k2.arc_type(0, 1).unwrap(), (1, 1));
        assert_eq!(k2.arc_type(1, 1).unwrap_err(), Error::ArcAbsent(1, 1));
        assert_eq!(cycle(4).arc_type(1, 0).unwrap_err(), Error::ArcAbsent(1, 0));
    }

    #[test]
    fn cache_is_invalidated_on_mutation() {
        let mut g = cycle(4);
        assert_eq!(g.distances().unwrap().dist(0, 2), 2);
        g.add_arc(0, 2);
        assert_eq!(g.distances().unwrap().dist(0, 2), 1);
        g.remove_arc(0, 2);
        assert_eq!(g.distances().unwrap().dist(0, 2), 2);
        g.remove_arc(0, 1);
        assert!(g.distances().is_err());
    }

    #[test]
    fn undirected_detection() {
        let k3 = Digraph::new(3, [(0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0)]).unwrap();
        assert!(k3.is_undirected());
        assert!(!cycle(3).is_undirected());
    }

    #[test]
    fn reverse_is_involution() {
        let g = Digraph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0), (3, 1)]).unwrap();
        assert_eq!(g.reverse().reverse(), g);
        assert!(g.reverse().has_arc(1, 3));
    }

    #[test]
    fn vertex_set_ops() {
        let mut s = VertexSet::new(130);
        assert!(s.insert(129));
        assert!(!s.insert(129));
        s.insert(3);
        s.insert(64);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![3, 64, 129]);
        s.remove(64);
        assert_eq!(s.count(), 2);
        assert!(!s.contains(200));
    }
}
