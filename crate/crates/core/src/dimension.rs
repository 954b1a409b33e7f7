//! Weakly resolving sets and the exact weak metric dimension.
//!
//! A vertex `z` resolves `u` and `v` when the two-way distances `∂̃(z,u)` and
//! `∂̃(z,v)` differ. A set `S` is weakly resolving when the vectors of two-way
//! distances from the members of `S` separate every pair of vertices.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Digraph, TwoWay, TwoWayDistanceMatrix};

/// Whether `z` resolves `u` and `v`.
pub fn resolves(m: &TwoWayDistanceMatrix, z: usize, u: usize, v: usize) -> bool {
    m.two_way(z, u) != m.two_way(z, v)
}

/// Signature vectors of the vertices outside a weakly resolving set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvingCertificate {
    pub set: Vec<usize>,
    /// `(v, [∂̃(w₁,v), …, ∂̃(wₘ,v)])` for each `v ∉ S`, ascending in `v`.
    pub signatures: Vec<(usize, Vec<TwoWay>)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResolveCheck {
    Resolving(ResolvingCertificate),
    /// The lexicographically first pair outside `S` with equal signatures.
    Collision(usize, usize),
}

impl ResolveCheck {
    pub fn is_resolving(&self) -> bool {
        matches!(self, ResolveCheck::Resolving(_))
    }
}

fn normalize_set(m: &TwoWayDistanceMatrix, set: &[usize]) -> Result<Vec<usize>> {
    if set.is_empty() {
        return Err(Error::EmptyVertexSet);
    }
    let n = m.order();
    let mut s = set.to_vec();
    s.sort_unstable();
    s.dedup();
    if let Some(&v) = s.iter().find(|&&v| v >= n) {
        return Err(Error::VertexOutOfRange { vertex: v, n });
    }
    Ok(s)
}

/// Checks that `set` resolves every pair of vertices outside it.
pub fn check_weakly_resolving(m: &TwoWayDistanceMatrix, set: &[usize]) -> Result<ResolveCheck> {
    let s = normalize_set(m, set)?;
    let signatures: Vec<(usize, Vec<TwoWay>)> = (0..m.order())
        .filter(|v| s.binary_search(v).is_err())
        .map(|v| (v, s.iter().map(|&w| m.two_way(w, v)).collect()))
        .collect();
    for (i, (u, su)) in signatures.iter().enumerate() {
        for (v, sv) in &signatures[i + 1..] {
            if su == sv {
                return Ok(ResolveCheck::Collision(*u, *v));
            }
        }
    }
    Ok(ResolveCheck::Resolving(ResolvingCertificate {
        set: s,
        signatures,
    }))
}

/// The displayed definition: distinct vectors over all of `V`, members of
/// `S` included.
pub fn separates_all_vertices(m: &TwoWayDistanceMatrix, set: &[usize]) -> bool {
    let vectors: Vec<Vec<TwoWay>> = (0..m.order())
        .map(|v| set.iter().map(|&w| m.two_way(w, v)).collect())
        .collect();
    let mut sorted = vectors.clone();
    sorted.sort_unstable();
    sorted.windows(2).all(|w| w[0] != w[1])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimensionResult {
    pub dim: usize,
    /// Lexicographically least minimum weakly resolving set.
    pub basis: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub all_bases: Option<Vec<Vec<usize>>>,
}

/// Unordered pairs `{u, v}` (with `u < v`) resolved by no third vertex.
///
/// Every weakly resolving set meets each of these pairs.
pub fn forced_pairs(m: &TwoWayDistanceMatrix) -> Vec<(usize, usize)> {
    let n = m.order();
    if n < 3 {
        return Vec::new();
    }
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if (0..n).all(|z| z == u || z == v || !resolves(m, z, u, v)) {
                pairs.push((u, v));
            }
        }
    }
    pairs
}

/// Exact minimum vertex cover of a small graph given by adjacency lists.
fn min_vertex_cover(adj: &[Vec<usize>]) -> usize {
    fn go(adj: &[Vec<usize>], removed: &mut Vec<bool>, size: usize, best: &mut usize) {
        if size >= *best {
            return;
        }
        let pick = (0..adj.len())
            .filter(|&v| !removed[v])
            .map(|v| (adj[v].iter().filter(|&&w| !removed[w]).count(), v))
            .max();
        let (deg, v) = match pick {
            Some((deg, v)) if deg > 0 => (deg, v),
            _ => {
                *best = size;
                return;
            }
        };
        removed[v] = true;
        go(adj, removed, size + 1, best);
        let nbrs: Vec<usize> = adj[v].iter().copied().filter(|&w| !removed[w]).collect();
        debug_assert_eq!(nbrs.len(), deg);
        for &w in &nbrs {
            removed[w] = true;
        }
        go(adj, removed, size + nbrs.len(), best);
        for &w in &nbrs {
            removed[w] = false;
        }
        removed[v] = false;
    }
    let mut best = adj.len();
    go(adj, &mut vec![false; adj.len()], 0, &mut best);
    best
}

/// Lower bound on the dimension: the minimum vertex cover of the forced pairs.
pub fn forced_pair_bound(m: &TwoWayDistanceMatrix) -> usize {
    forced_pair_bound_from(&forced_pairs(m), m.order())
}

/// Packs `∂̃(z, v)` into a single word per `(z, v)`.
struct Codes {
    n: usize,
    code: Vec<u32>,
}

impl Codes {
    fn new(m: &TwoWayDistanceMatrix) -> Self {
        let n = m.order();
        let mut code = Vec::with_capacity(n * n);
        for z in 0..n {
            for v in 0..n {
                let (a, b) = m.two_way(z, v);
                code.push(a << 16 | b);
            }
        }
        Codes { n, code }
    }

    /// Refines the partition `class` by the codes of `z`. Returns the new
    /// class count.
    fn refine(&self, class: &[u32], z: usize, out: &mut [u32], scratch: &mut Vec<u64>) -> usize {
        scratch.clear();
        let row = &self.code[z * self.n..(z + 1) * self.n];
        for v in 0..self.n {
            let key = (class[v] as u64) << 32 | row[v] as u64;
            let id = match scratch.iter().position(|&k| k == key) {
                Some(i) => i,
                None => {
                    scratch.push(key);
                    scratch.len() - 1
                }
            };
            out[v] = id as u32;
        }
        scratch.len()
    }
}

/// Depth-first search over `size`-subsets in lexicographic order.
struct Search<'a> {
    codes: &'a Codes,
    /// `forced_below[b]` lists every `a < b` with `{a, b}` forced.
    forced_below: Vec<Vec<usize>>,
    size: usize,
    collect_all: bool,
    chosen: Vec<usize>,
    in_set: Vec<bool>,
    levels: Vec<Vec<u32>>,
    scratch: Vec<u64>,
    found: Vec<Vec<usize>>,
}

impl<'a> Search<'a> {
    fn new(codes: &'a Codes, forced: &[(usize, usize)], size: usize, collect_all: bool) -> Self {
        let n = codes.n;
        let mut forced_below = vec![Vec::new(); n];
        for &(a, b) in forced {
            forced_below[b].push(a);
        }
        Search {
            codes,
            forced_below,
            size,
            collect_all,
            chosen: Vec::with_capacity(size),
            in_set: vec![false; n],
            levels: vec![vec![0; n]; size + 1],
            scratch: Vec::with_capacity(n),
            found: Vec::new(),
        }
    }

    /// Skipping `b` is only allowed when every forced partner below it is chosen.
    fn may_skip(&self, b: usize) -> bool {
        self.forced_below[b].iter().all(|&a| self.in_set[a])
    }

    /// Runs the search with `first` as the smallest element. Returns `true`
    /// when the caller may stop (a set was found and not collecting all).
    fn run_from(&mut self, first: usize) -> bool {
        if (0..first).any(|b| !self.may_skip(b)) {
            return false;
        }
        self.push(first, 0);
        let stop = self.descend(first + 1);
        self.pop(first);
        stop
    }

    fn push(&mut self, z: usize, depth: usize) {
        let (prev, next) = self.levels.split_at_mut(depth + 1);
        self.codes
            .refine(&prev[depth], z, &mut next[0], &mut self.scratch);
        self.chosen.push(z);
        self.in_set[z] = true;
    }

    fn pop(&mut self, z: usize) {
        self.chosen.pop();
        self.in_set[z] = false;
    }

    fn descend(&mut self, start: usize) -> bool {
        let n = self.codes.n;
        let depth = self.chosen.len();
        if depth == self.size {
            let classes = &self.levels[depth];
            let discrete = {
                let mut seen = vec![false; n];
                classes
                    .iter()
                    .all(|&c| !std::mem::replace(&mut seen[c as usize], true))
            };
            if discrete && (start..n).all(|b| self.may_skip(b)) {
                self.found.push(self.chosen.clone());
                return !self.collect_all;
            }
            return false;
        }
        let remaining = self.size - depth;
        for c in start..=n - remaining {
            self.push(c, depth);
            let stop = self.descend(c + 1);
            self.pop(c);
            if stop {
                return true;
            }
            if !self.may_skip(c) {
                break;
            }
        }
        false
    }
}

/// Resolving sets of exactly `size` elements, in lexicographic order. When
/// `collect_all` is false at most one (the least) is returned.
fn search_size(
    codes: &Codes,
    forced: &[(usize, usize)],
    size: usize,
    collect_all: bool,
) -> Vec<Vec<usize>> {
    let n = codes.n;
    let firsts: Vec<usize> = (0..=n - size).collect();
    let per_first = |first: usize| {
        let mut s = Search::new(codes, forced, size, collect_all);
        s.run_from(first);
        s.found
    };
    let results: Vec<Vec<Vec<usize>>> = if n >= 14 {
        firsts.par_iter().map(|&f| per_first(f)).collect()
    } else {
        let mut out = Vec::new();
        for &f in &firsts {
            let found = per_first(f);
            let hit = !found.is_empty();
            out.push(found);
            if hit && !collect_all {
                break;
            }
        }
        out
    };
    let mut all: Vec<Vec<usize>> = results.into_iter().flatten().collect();
    if !collect_all {
        all.truncate(1);
    }
    all
}

/// Exact weak metric dimension by increasing-cardinality subset search.
///
/// The search starts at the forced-pair cover bound and prunes every subset
/// missing a forced pair. The reported basis is the lexicographically least
/// minimum set.
pub fn weak_metric_dimension(g: &Digraph, collect_all: bool) -> Result<DimensionResult> {
    let n = g.order();
    if n < 2 {
        return Err(Error::OrderTooSmall { n, min: 2 });
    }
    let m = g.distances()?;
    dimension_of_matrix(&m, collect_all)
}

pub fn dimension_of_matrix(m: &TwoWayDistanceMatrix, collect_all: bool) -> Result<DimensionResult> {
    let n = m.order();
    if n < 2 {
        return Err(Error::OrderTooSmall { n, min: 2 });
    }
    let forced = forced_pairs(m);
    let lower = forced_pair_bound_from(&forced, n).max(1);
    let codes = Codes::new(m);
    for size in lower..n {
        let found = search_size(&codes, &forced, size, collect_all);
        if let Some(basis) = found.first().cloned() {
            return Ok(DimensionResult {
                dim: size,
                basis,
                all_bases: collect_all.then_some(found),
            });
        }
    }
    unreachable!("V minus any vertex is weakly resolving")
}

fn forced_pair_bound_from(forced: &[(usize, usize)], n: usize) -> usize {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in forced {
        adj[u].push(v);
        adj[v].push(u);
    }
    min_vertex_cover(&adj)
}

/// Every subset in increasing size, checked against the definition over all
/// of `V`. No pruning; used to cross-check the search.
pub fn naive_weak_metric_dimension(g: &Digraph) -> Result<DimensionResult> {
    let n = g.order();
    if n < 2 {
        return Err(Error::OrderTooSmall { n, min: 2 });
    }
    let m = g.distances()?;
    for size in 1..n {
        let mut all = Vec::new();
        for_each_combination(n, size, |s| {
            if separates_all_vertices(&m, s) {
                all.push(s.to_vec());
            }
        });
        if let Some(basis) = all.first().cloned() {
            return Ok(DimensionResult {
                dim: size,
                basis,
                all_bases: Some(all),
            });
        }
    }
    unreachable!("V minus any vertex is weakly resolving")
}

/// Calls `f` on every `k`-subset of `0..n` in lexicographic order.
pub fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Least `k ≥ 1` with `k + d^(2k) ≥ n`: the lower bound on the dimension of
/// any digraph of order `n` and diameter `d`.
pub fn dimension_lower_bound(n: u64, d: u64) -> u64 {
    assert!(n >= 2 && d >= 1, "requires n >= 2 and d >= 1");
    (1..)
        .find(|&k: &u64| {
            let p = d.checked_pow(2 * k as u32).unwrap_or(u64::MAX);
            k.saturating_add(p) >= n
        })
        .expect("bound exists")
}

/// `(d² + 3d − 2) / 2`: the per-coordinate out-degree sum of the extremal
/// construction. Always an integer.
pub fn mu(d: u64) -> u64 {
    (d * d + 3 * d - 2) / 2
}

/// Closed-form upper bound on the arc count of a `k`-dimensional digraph of
/// diameter `d`; `None` if it does not fit in an `i128`.
pub fn arc_upper_bound(k: u64, d: u64) -> Option<i128> {
    let two_k = u32::try_from(2 * k).ok()?;
    let mu_pow = (mu(d) as i128).checked_pow(two_k)?;
    let d_pow = (d as i128).checked_pow(two_k - 1)?;
    let mid = (2 * k as i128 - d as i128).checked_mul(d_pow)?;
    let k = k as i128;
    mu_pow.checked_add(mid)?.checked_add(k * k - k)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimBoundsReport {
    pub n: usize,
    pub diameter: u32,
    pub dim: usize,
    pub lower: u64,
    pub upper: i64,
    /// `k + d ≤ n ≤ d^(2k) + k` with `k = dim`.
    pub order_bounds_ok: bool,
    pub ok: bool,
}

impl DimBoundsReport {
    pub fn evaluate(n: usize, diameter: u32, dim: usize) -> Self {
        let (n64, d, k) = (n as u64, diameter as u64, dim as u64);
        let lower = dimension_lower_bound(n64, d);
        let upper = n as i64 - diameter as i64;
        let order_cap = d
            .checked_pow(2 * k as u32)
            .and_then(|p| p.checked_add(k))
            .unwrap_or(u64::MAX);
        let order_bounds_ok = k + d <= n64 && n64 <= order_cap;
        let ok = lower <= k && (dim as i64) <= upper && order_bounds_ok;
        DimBoundsReport {
            n,
            diameter,
            dim,
            lower,
            upper,
            order_bounds_ok,
            ok,
        }
    }
}

pub fn check_dim_bounds(g: &Digraph) -> Result<DimBoundsReport> {
    let m = g.distances()?;
    let dim = weak_metric_dimension(g, false)?.dim;
    Ok(DimBoundsReport::evaluate(g.order(), m.diameter(), dim))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArcBoundsReport {
    pub arcs: usize,
    pub dim: usize,
    pub diameter: u32,
    pub lower: u64,
    /// `None` when the closed form overflows; the bound then holds trivially.
    pub upper: Option<i128>,
    pub lower_equality: bool,
    pub upper_equality: bool,
    pub ok: bool,
}

impl ArcBoundsReport {
    pub fn evaluate(arcs: usize, diameter: u32, dim: usize) -> Self {
        let lower = dim as u64 + diameter as u64;
        let upper = arc_upper_bound(dim as u64, diameter as u64);
        let a = arcs as i128;
        ArcBoundsReport {
            arcs,
            dim,
            diameter,
            lower,
            upper,
            lower_equality: arcs as u64 == lower,
            upper_equality: upper == Some(a),
            ok: arcs as u64 >= lower && upper.is_none_or(|u| a <= u),
        }
    }
}

pub fn check_arc_bounds(g: &Digraph) -> Result<ArcBoundsReport> {
    let m = g.distances()?;
    let dim = weak_metric_dimension(g, false)?.dim;
    Ok(ArcBoundsReport::evaluate(g.arc_count(), m.diameter(), dim))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArcTypeCheck {
    pub arc: (usize, usize),
    pub r: u32,
    /// `dim ≤ n − r`.
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TypeBoundReport {
    pub n: usize,
    pub dim: usize,
    pub arcs: Vec<ArcTypeCheck>,
    /// When `dim = n − 2`, whether every arc has type (1,1) or (1,2).
    pub near_complete_types_ok: bool,
    pub ok: bool,
}

impl TypeBoundReport {
    pub fn evaluate(g: &Digraph, m: &TwoWayDistanceMatrix, dim: usize) -> Self {
        let n = g.order();
        let arcs: Vec<ArcTypeCheck> = g
            .arcs()
            .map(|(x, y)| {
                let r = m.dist(y, x);
                ArcTypeCheck {
                    arc: (x, y),
                    r,
                    ok: dim as i64 <= n as i64 - r as i64,
                }
            })
            .collect();
        let near_complete_types_ok = dim + 2 != n || arcs.iter().all(|a| a.r <= 2);
        let ok = near_complete_types_ok && arcs.iter().all(|a| a.ok);
        TypeBoundReport {
            n,
            dim,
            arcs,
            near_complete_types_ok,
            ok,
        }
    }
}

pub fn check_type_bound(g: &Digraph) -> Result<TypeBoundReport> {
    let m = g.distances()?;
    let dim = weak_metric_dimension(g, false)?.dim;
    Ok(TypeBoundReport::evaluate(g, &m, dim))
}
