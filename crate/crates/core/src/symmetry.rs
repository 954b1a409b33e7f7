//! Isomorphism, automorphisms and the distance-regularity predicates that
//! are phrased in terms of two-way distances.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::constructions::{extremal_arc, ExtremalVertex, TupleVertex};
use crate::dimension::{check_weakly_resolving, ResolveCheck};
use crate::error::{Error, Result};
use crate::graph::{Digraph, TwoWay, TwoWayDistanceMatrix};

/// Cap for the backtracking searches (isomorphism, transitivity).
pub const SEARCH_CAP: usize = 12;
/// Cap for canonical forms and for listing whole automorphism groups.
pub const CANONICAL_CAP: usize = 10;

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        Err(Error::CapExceeded { n, cap })
    } else {
        Ok(())
    }
}

/// A bijection of `0..n`; vertex `v` maps to `image[v]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct VertexPermutation(Vec<usize>);

impl VertexPermutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &x in &image {
            if x >= n || std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidParameters(format!(
                    "{image:?} is not a permutation"
                )));
            }
        }
        Ok(VertexPermutation(image))
    }

    pub fn identity(n: usize) -> Self {
        VertexPermutation((0..n).collect())
    }

    pub fn image(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, v: usize) -> usize {
        self.0[v]
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Self) -> Self {
        VertexPermutation(other.0.iter().map(|&v| self.0[v]).collect())
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (v, &x) in self.0.iter().enumerate() {
            inv[x] = v;
        }
        VertexPermutation(inv)
    }

    /// Whether this maps the arcs of `g` exactly onto the arcs of `h`.
    pub fn is_isomorphism(&self, g: &Digraph, h: &Digraph) -> bool {
        g.order() == h.order()
            && self.0.len() == g.order()
            && g.arc_count() == h.arc_count()
            && g.arcs().all(|(u, v)| h.has_arc(self.0[u], self.0[v]))
    }
}

/// Isomorphism-invariant vertex key: degrees, then the sorted row of
/// two-way distances when the digraph is strongly connected.
fn vertex_keys(g: &Digraph, m: Option<&TwoWayDistanceMatrix>) -> Vec<(usize, usize, Vec<TwoWay>)> {
    (0..g.order())
        .map(|v| {
            let profile = m
                .map(|m| {
                    let mut row: Vec<TwoWay> = (0..g.order()).map(|y| m.two_way(v, y)).collect();
                    row.sort_unstable();
                    row
                })
                .unwrap_or_default();
            (g.out_degree(v), g.in_degree(v), profile)
        })
        .collect()
}

/// Backtracking search for isomorphisms `g → h`, pruned by vertex keys and
/// by preserving arcs and distances between assigned pairs.
struct Matcher<'a> {
    g: &'a Digraph,
    h: &'a Digraph,
    gd: Option<Arc<TwoWayDistanceMatrix>>,
    hd: Option<Arc<TwoWayDistanceMatrix>>,
    order: Vec<usize>,
    candidates: Vec<Vec<usize>>,
    map: Vec<usize>,
    used: Vec<bool>,
}

const UNSET: usize = usize::MAX;

impl<'a> Matcher<'a> {
    /// `None` when the invariants already rule out any isomorphism.
    fn new(g: &'a Digraph, h: &'a Digraph) -> Option<Self> {
        let n = g.order();
        if n != h.order() || g.arc_count() != h.arc_count() {
            return None;
        }
        let gd = g.distances().ok();
        let hd = h.distances().ok();
        if gd.is_some() != hd.is_some() {
            return None;
        }
        let gk = vertex_keys(g, gd.as_deref());
        let hk = vertex_keys(h, hd.as_deref());
        let mut gs = gk.clone();
        let mut hs = hk.clone();
        gs.sort();
        hs.sort();
        if gs != hs {
            return None;
        }
        let candidates: Vec<Vec<usize>> = (0..n)
            .map(|v| (0..n).filter(|&x| hk[x] == gk[v]).collect())
            .collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| (candidates[v].len(), v));
        Some(Matcher {
            g,
            h,
            gd,
            hd,
            order,
            candidates,
            map: vec![UNSET; n],
            used: vec![false; n],
        })
    }

    fn consistent(&self, a: usize, x: usize) -> bool {
        if self.used[x] || !self.candidates[a].contains(&x) {
            return false;
        }
        for b in 0..self.g.order() {
            let y = self.map[b];
            if y == UNSET {
                continue;
            }
            if self.g.has_arc(a, b) != self.h.has_arc(x, y)
                || self.g.has_arc(b, a) != self.h.has_arc(y, x)
            {
                return false;
            }
            if let (Some(gd), Some(hd)) = (&self.gd, &self.hd) {
                if gd.two_way(a, b) != hd.two_way(x, y) {
                    return false;
                }
            }
        }
        true
    }

    fn assign(&mut self, a: usize, x: usize) {
        self.map[a] = x;
        self.used[x] = true;
    }

    fn unassign(&mut self, a: usize) {
        self.used[self.map[a]] = false;
        self.map[a] = UNSET;
    }

    /// Fixes the given pairs, then enumerates completions. `visit` returns
    /// `false` to stop.
    fn run(&mut self, fixed: &[(usize, usize)], visit: &mut dyn FnMut(&[usize]) -> bool) {
        for (i, &(a, x)) in fixed.iter().enumerate() {
            if self.map[a] == x {
                continue;
            }
            if self.map[a] != UNSET || !self.consistent(a, x) {
                for &(b, _) in &fixed[..i] {
                    if self.map[b] != UNSET {
                        self.unassign(b);
                    }
                }
                return;
            }
            self.assign(a, x);
        }
        let order: Vec<usize> = self
            .order
            .iter()
            .copied()
            .filter(|&v| self.map[v] == UNSET)
            .collect();
        self.descend(&order, visit);
    }

    fn descend(&mut self, order: &[usize], visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        let Some((&a, rest)) = order.split_first() else {
            return visit(&self.map);
        };
        for i in 0..self.candidates[a].len() {
            let x = self.candidates[a][i];
            if self.consistent(a, x) {
                self.assign(a, x);
                let go_on = self.descend(rest, visit);
                self.unassign(a);
                if !go_on {
                    return false;
                }
            }
        }
        true
    }
}

fn find_map(g: &Digraph, h: &Digraph, fixed: &[(usize, usize)]) -> Option<VertexPermutation> {
    let mut matcher = Matcher::new(g, h)?;
    let mut found = None;
    matcher.run(fixed, &mut |m| {
        found = Some(VertexPermutation(m.to_vec()));
        false
    });
    found
}

/// A witnessing isomorphism `g → h`, if one exists.
pub fn is_isomorphic(g: &Digraph, h: &Digraph) -> Result<Option<VertexPermutation>> {
    check_cap(g.order().max(h.order()), SEARCH_CAP)?;
    Ok(find_map(g, h, &[]))
}

/// The full automorphism group, sorted by image.
pub fn automorphisms(g: &Digraph) -> Result<Vec<VertexPermutation>> {
    check_cap(g.order(), CANONICAL_CAP)?;
    let mut all = Vec::new();
    if let Some(mut matcher) = Matcher::new(g, g) {
        matcher.run(&[], &mut |m| {
            all.push(VertexPermutation(m.to_vec()));
            true
        });
    }
    all.sort();
    Ok(all)
}

pub fn is_vertex_transitive(g: &Digraph) -> Result<bool> {
    check_cap(g.order(), SEARCH_CAP)?;
    Ok((1..g.order()).all(|v| find_map(g, g, &[(0, v)]).is_some()))
}

/// For every `∂̃`-class of ordered pairs, some automorphism carries the first
/// pair of the class to each other pair.
pub fn is_weakly_distance_transitive(g: &Digraph) -> Result<bool> {
    check_cap(g.order(), SEARCH_CAP)?;
    let m = g.distances()?;
    if !is_vertex_transitive(g)? {
        return Ok(false);
    }
    let n = g.order();
    let mut classes: BTreeMap<TwoWay, Vec<(usize, usize)>> = BTreeMap::new();
    for x in 0..n {
        for y in 0..n {
            if x != y {
                classes.entry(m.two_way(x, y)).or_default().push((x, y));
            }
        }
    }
    for pairs in classes.values() {
        let (x0, y0) = pairs[0];
        for &(x, y) in &pairs[1..] {
            if find_map(g, g, &[(x0, x), (y0, y)]).is_none() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Canonical arc-set fingerprint: equal iff the digraphs are isomorphic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fingerprint {
    n: usize,
    /// Bits in the order `(0,1), (1,0), (0,2), (2,0), (1,2), (2,1), …`,
    /// right-aligned.
    code: u128,
}

impl Fingerprint {
    pub fn order(&self) -> usize {
        self.n
    }

    fn bits(n: usize) -> usize {
        n * (n - 1)
    }

    /// The canonical representative.
    pub fn to_digraph(&self) -> Digraph {
        let n = self.n;
        let len = Self::bits(n);
        let mut g = Digraph::empty(n);
        let mut t = 0;
        for j in 1..n {
            for i in 0..j {
                for (a, b) in [(i, j), (j, i)] {
                    if self.code >> (len - 1 - t) & 1 == 1 {
                        g.add_arc(a, b);
                    }
                    t += 1;
                }
            }
        }
        g
    }
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = Self::bits(self.n).div_ceil(4).max(1);
        write!(f, "{}:{:0width$x}", self.n, self.code, width = width)
    }
}

struct Canonizer<'a> {
    g: &'a Digraph,
    n: usize,
    keys: Vec<(usize, usize, Vec<TwoWay>)>,
    sorted_keys: Vec<(usize, usize, Vec<TwoWay>)>,
    placed: Vec<usize>,
    used: Vec<bool>,
    best: Option<(u128, Vec<usize>)>,
}

impl Canonizer<'_> {
    /// Appends the bits for placing `v` at the next position.
    fn block(&self, v: usize) -> (u128, usize) {
        let mut bits = 0u128;
        for &u in &self.placed {
            bits = bits << 1 | self.g.has_arc(u, v) as u128;
            bits = bits << 1 | self.g.has_arc(v, u) as u128;
        }
        (bits, 2 * self.placed.len())
    }

    fn descend(&mut self, code: u128, less: bool) {
        let p = self.placed.len();
        if p == self.n {
            let better = match &self.best {
                None => true,
                Some((b, _)) => code < *b,
            };
            if better {
                self.best = Some((code, self.placed.clone()));
            }
            return;
        }
        let total = self.n * (self.n - 1);
        for v in 0..self.n {
            if self.used[v] || self.keys[v] != self.sorted_keys[p] {
                continue;
            }
            let (block, width) = self.block(v);
            let next = code << width | block;
            let mut next_less = less;
            if !less {
                if let Some((b, _)) = &self.best {
                    let prefix = p * (p + 1);
                    let best_prefix = b >> (total - prefix);
                    if next > best_prefix {
                        continue;
                    }
                    next_less = next < best_prefix;
                }
            }
            self.used[v] = true;
            self.placed.push(v);
            self.descend(next, next_less);
            self.placed.pop();
            self.used[v] = false;
        }
    }
}

/// Canonical fingerprint plus a relabeling `perm` with
/// `g.relabel(perm) == fingerprint.to_digraph()`.
pub fn canonical_labeling(g: &Digraph) -> Result<(Fingerprint, VertexPermutation)> {
    let n = g.order();
    check_cap(n, CANONICAL_CAP)?;
    let m = g.distances().ok();
    let keys = vertex_keys(g, m.as_deref());
    let mut sorted_keys = keys.clone();
    sorted_keys.sort();
    let mut c = Canonizer {
        g,
        n,
        keys,
        sorted_keys,
        placed: Vec::with_capacity(n),
        used: vec![false; n],
        best: None,
    };
    c.descend(0, false);
    let (code, placed) = c.best.expect("at least one ordering");
    let mut perm = vec![0; n];
    for (pos, &v) in placed.iter().enumerate() {
        perm[v] = pos;
    }
    Ok((Fingerprint { n, code }, VertexPermutation(perm)))
}

pub fn canonical_form(g: &Digraph) -> Result<Fingerprint> {
    canonical_labeling(g).map(|(f, _)| f)
}

/// Classes `Γ_ĩ(x)` for one base vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwoWayProfile {
    pub vertex: usize,
    pub classes: BTreeMap<String, Vec<usize>>,
    /// Every class has at most one vertex, i.e. `{x}` is a basis.
    pub singleton_classes: bool,
}

fn two_way_key(t: TwoWay) -> String {
    format!("({},{})", t.0, t.1)
}

pub fn single_vertex_profiles(g: &Digraph) -> Result<Vec<TwoWayProfile>> {
    let m = g.distances()?;
    let n = g.order();
    Ok((0..n)
        .map(|x| {
            let mut by: BTreeMap<TwoWay, Vec<usize>> = BTreeMap::new();
            for y in 0..n {
                by.entry(m.two_way(x, y)).or_default().push(y);
            }
            let singleton_classes = by.values().all(|c| c.len() <= 1);
            TwoWayProfile {
                vertex: x,
                classes: by.into_iter().map(|(k, v)| (two_way_key(k), v)).collect(),
                singleton_classes,
            }
        })
        .collect())
}

/// Intersection numbers `p^h̃_{ĩ,j̃}` of a weakly distance-regular digraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WdrTable {
    /// `(h̃, ĩ, j̃) ↦ |{z : ∂̃(x,z) = ĩ, ∂̃(z,y) = j̃}|` for any `∂̃(x,y) = h̃`;
    /// zero entries are omitted.
    pub intersection: BTreeMap<(TwoWay, TwoWay, TwoWay), usize>,
    /// `k_ĩ = |Γ_ĩ(x)|`.
    pub valency: BTreeMap<TwoWay, usize>,
    pub thin: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WdrOutcome {
    Regular(WdrTable),
    /// Lexicographically least `(h̃, ĩ, j̃)` whose count varies over the class.
    Violation(TwoWay, TwoWay, TwoWay),
}

impl WdrOutcome {
    pub fn is_regular(&self) -> bool {
        matches!(self, WdrOutcome::Regular(_))
    }

    pub fn is_thin(&self) -> bool {
        matches!(self, WdrOutcome::Regular(t) if t.thin)
    }
}

pub fn is_weakly_distance_regular(g: &Digraph) -> Result<WdrOutcome> {
    let m = g.distances()?;
    let n = g.order();
    type Counts = BTreeMap<(TwoWay, TwoWay), usize>;
    let mut reference: BTreeMap<TwoWay, Counts> = BTreeMap::new();
    let mut violations: BTreeSet<(TwoWay, TwoWay, TwoWay)> = BTreeSet::new();
    for x in 0..n {
        for y in 0..n {
            let mut counts = Counts::new();
            for z in 0..n {
                *counts
                    .entry((m.two_way(x, z), m.two_way(z, y)))
                    .or_default() += 1;
            }
            let h = m.two_way(x, y);
            match reference.get(&h) {
                None => {
                    reference.insert(h, counts);
                }
                Some(r) => {
                    let keys: BTreeSet<_> = r.keys().chain(counts.keys()).copied().collect();
                    for key in keys {
                        if r.get(&key) != counts.get(&key) {
                            violations.insert((h, key.0, key.1));
                        }
                    }
                }
            }
        }
    }
    if let Some(&(h, i, j)) = violations.iter().next() {
        return Ok(WdrOutcome::Violation(h, i, j));
    }
    let intersection = reference
        .into_iter()
        .flat_map(|(h, c)| c.into_iter().map(move |((i, j), v)| ((h, i, j), v)))
        .collect();
    let mut valency = BTreeMap::new();
    for y in 0..n {
        *valency.entry(m.two_way(0, y)).or_default() += 1;
    }
    let thin = valency.values().all(|&k| k == 1);
    Ok(WdrOutcome::Regular(WdrTable {
        intersection,
        valency,
        thin,
    }))
}

/// The map `xᵢ ↦ uᵢ`, `y ↦ (∂(x₁,y), ∂(y,x₁), …, ∂(x_k,y), ∂(y,x_k))` into
/// `Γ̄(d^{2k} + k, d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    pub k: usize,
    pub d: u32,
    pub image: Vec<ExtremalVertex>,
}

impl Embedding {
    /// Labels of the images in `Γ̄`, u-vertices first.
    pub fn labels(&self) -> Vec<usize> {
        self.image.iter().map(|v| v.label(self.k)).collect()
    }
}

/// Builds the embedding and checks it arc by arc. Arcs are grouped as
/// basis→basis (case 1), basis→other (2), other→basis (3), other→other (4).
pub fn embed_into_gamma_bar(g: &Digraph, basis: &[usize]) -> Result<Embedding> {
    let m = g.distances()?;
    if g.order() < 2 {
        return Err(Error::OrderTooSmall {
            n: g.order(),
            min: 2,
        });
    }
    let mut basis = basis.to_vec();
    basis.sort_unstable();
    basis.dedup();
    match check_weakly_resolving(&m, &basis) {
        Ok(ResolveCheck::Resolving(_)) => {}
        Ok(ResolveCheck::Collision(u, v)) => {
            return Err(Error::InvalidBasis(format!(
                "{basis:?} does not resolve {u} and {v}"
            )))
        }
        Err(e) => return Err(e),
    }
    let k = basis.len();
    let d = m.diameter();
    let position = |v: usize| basis.iter().position(|&b| b == v);
    let image: Vec<ExtremalVertex> = (0..g.order())
        .map(|y| match position(y) {
            Some(i) => Ok(ExtremalVertex::U(i)),
            None => {
                let alpha = basis
                    .iter()
                    .flat_map(|&x| [m.dist(x, y), m.dist(y, x)])
                    .collect();
                TupleVertex::new(alpha, d).map(ExtremalVertex::V)
            }
        })
        .collect::<Result<_>>()?;
    let distinct: HashSet<&ExtremalVertex> = image.iter().collect();
    if distinct.len() != image.len() {
        return Err(Error::InvalidBasis("embedding is not injective".into()));
    }
    for (a, b) in g.arcs() {
        let case = match (position(a).is_some(), position(b).is_some()) {
            (true, true) => 1,
            (true, false) => 2,
            (false, true) => 3,
            (false, false) => 4,
        };
        if !extremal_arc(&image[a], &image[b], true) {
            return Err(Error::EmbeddingFailure {
                from: a,
                to: b,
                case,
            });
        }
    }
    Ok(Embedding { k, d, image })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{chord_fixtures, complete, directed_cycle, gamma, small_g};

    #[test]
    fn cycle_automorphisms_are_rotations() {
        for n in 2..=7 {
            let auts = automorphisms(&directed_cycle(n)).unwrap();
            assert_eq!(auts.len(), n);
            assert!(auts.contains(&VertexPermutation::identity(n)));
        }
    }

    #[test]
    fn g1_is_rigid_and_k3_is_symmetric() {
        assert_eq!(
            automorphisms(&small_g(1).unwrap()).unwrap(),
            vec![VertexPermutation::identity(3)]
        );
        assert_eq!(automorphisms(&complete(3)).unwrap().len(), 6);
    }

    #[test]
    fn chord_fixtures_non_isomorphic_pair() {
        let [_, g1, _, g3] = chord_fixtures();
        assert!(is_isomorphic(&g1, &g3).unwrap().is_none());
        assert_ne!(canonical_form(&g1).unwrap(), canonical_form(&g3).unwrap());
    }

    #[test]
    fn h_is_isomorphic_to_g1() {
        let h = Digraph::new(3, [(0, 1), (1, 0), (1, 2), (2, 0)]).unwrap();
        let g1 = small_g(1).unwrap();
        let p = is_isomorphic(&h, &g1).unwrap().unwrap();
        assert!(p.is_isomorphism(&h, &g1));
    }

    #[test]
    fn canonical_labeling_reproduces_representative() {
        let g = gamma(5, 2).unwrap();
        let (f, p) = canonical_labeling(&g).unwrap();
        assert_eq!(g.relabel(p.image()), f.to_digraph());
        let shuffled = g.relabel(&[3, 1, 4, 0, 2]);
        assert_eq!(canonical_form(&shuffled).unwrap(), f);
    }

    #[test]
    fn caps_are_enforced() {
        let big = directed_cycle(13);
        assert!(matches!(
            is_isomorphic(&big, &big),
            Err(Error::CapExceeded { .. })
        ));
        assert!(matches!(
            canonical_form(&directed_cycle(11)),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn vertex_transitivity() {
        assert!(is_vertex_transitive(&directed_cycle(6)).unwrap());
        assert!(!is_vertex_transitive(&small_g(1).unwrap()).unwrap());
        assert!(!is_vertex_transitive(&gamma(5, 2).unwrap()).unwrap());
    }

    #[test]
    fn profiles_flag_basis_vertices() {
        assert!(single_vertex_profiles(&directed_cycle(5))
            .unwrap()
            .iter()
            .all(|p| p.singleton_classes));
        assert!(single_vertex_profiles(&complete(3))
            .unwrap()
            .iter()
            .all(|p| !p.singleton_classes));
        let [_, g1, _, _] = chord_fixtures();
        assert!(single_vertex_profiles(&g1).unwrap()[0].singleton_classes);
    }

    #[test]
    fn cycles_are_thin_wdr_and_wdt() {
        for n in 2..=8 {
            let c = directed_cycle(n);
            assert!(is_weakly_distance_regular(&c).unwrap().is_thin());
            assert!(is_weakly_distance_transitive(&c).unwrap());
        }
    }

    #[test]
    fn gamma_5_2_is_not_thin() {
        let g = gamma(5, 2).unwrap();
        assert!(!is_weakly_distance_regular(&g).unwrap().is_thin());
        assert!(!is_weakly_distance_transitive(&g).unwrap());
    }

    #[test]
    fn embedding_of_gamma_5_2_is_its_own_labeling() {
        let g = gamma(5, 2).unwrap();
        let e = embed_into_gamma_bar(&g, &[0]).unwrap();
        assert_eq!(e.labels(), vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn embedding_rejects_non_resolving_sets() {
        assert!(matches!(
            embed_into_gamma_bar(&complete(3), &[0]),
            Err(Error::InvalidBasis(_))
        ));
    }

    #[test]
    fn permutation_group_ops() {
        let p = VertexPermutation::new(vec![1, 2, 0]).unwrap();
        assert_eq!(p.compose(&p.inverse()), VertexPermutation::identity(3));
        assert!(VertexPermutation::new(vec![0, 0, 1]).is_err());
    }
}
