//! Named digraph families with fixed vertex labelings.
//!
//! Extremal digraph `Γ(n, d)`: with `k = f(n, d)` and `m = n − k`, the
//! vertices are `u₁, …, u_k` (labels `0..k`) followed by `v₁, …, v_m`
//! (label `k + j − 1` for `v_j`). Each `v_j` carries the tuple
//! `(x₁, …, x_{2k})` over `{1, …, d}` with `j = x₁ + (x₂ − 1)d + … + (x_{2k} − 1)d^{2k−1}`.
//! Arcs:
//!
//! * `u_i → v_j` iff `x_{2i−1} = 1`,
//! * `v_j → u_i` iff `x_{2i} = 1`,
//! * `v_j → v_l` iff `j ≠ l` and, for every `r`, `a_{2r−1} − b_{2r−1} ≥ −1`
//!   and `a_{2r} − b_{2r} ≤ 1`.
//!
//! The "bar" variant on `d^{2k} + k` vertices also joins every two
//! `u`-vertices by a pair of opposite arcs.

use std::str::FromStr;
use std::sync::OnceLock;

use crate::dimension::dimension_lower_bound;
use crate::enumerate::classify_by_dimension;
use crate::error::{Error, Result};
use crate::graph::Digraph;
use crate::symmetry::is_isomorphic;

/// Default limit on the order of constructed extremal digraphs.
pub const DEFAULT_SIZE_CAP: usize = 5000;

/// A tuple `(x₁, …, x_{2k})` with entries in `1..=d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TupleVertex {
    entries: Vec<u32>,
    d: u32,
}

impl TupleVertex {
    pub fn new(entries: Vec<u32>, d: u32) -> Result<Self> {
        if entries.is_empty() || !entries.len().is_multiple_of(2) {
            return Err(Error::InvalidParameters(format!(
                "tuple length {} is not a positive even number",
                entries.len()
            )));
        }
        if d == 0 || entries.iter().any(|&x| x == 0 || x > d) {
            return Err(Error::InvalidParameters(format!(
                "tuple entries must lie in 1..={d}"
            )));
        }
        Ok(TupleVertex { entries, d })
    }

    /// The tuple with index `i ∈ 1..=d^{2k}`.
    pub fn decode(i: u64, k: usize, d: u32) -> Result<Self> {
        let len = tuple_space(k, d).ok_or_else(|| {
            Error::InvalidParameters(format!("d^(2k) overflows for k={k}, d={d}"))
        })?;
        if d == 0 || i == 0 || i > len {
            return Err(Error::InvalidParameters(format!(
                "index {i} outside 1..={len}"
            )));
        }
        let mut rest = i - 1;
        let entries = (0..2 * k)
            .map(|_| {
                let x = (rest % d as u64) as u32 + 1;
                rest /= d as u64;
                x
            })
            .collect();
        Ok(TupleVertex { entries, d })
    }

    /// `x₁ + (x₂ − 1)d + … + (x_{2k} − 1)d^{2k−1}`.
    pub fn encode(&self) -> u64 {
        self.entries
            .iter()
            .rev()
            .fold(0u64, |acc, &x| acc * self.d as u64 + (x as u64 - 1))
            + 1
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn k(&self) -> usize {
        self.entries.len() / 2
    }

    pub fn d(&self) -> u32 {
        self.d
    }
}

/// `d^{2k}`, if it fits.
fn tuple_space(k: usize, d: u32) -> Option<u64> {
    (d as u64).checked_pow(u32::try_from(2 * k).ok()?)
}

/// Vertex of `Γ(n, d)` or its bar variant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtremalVertex {
    /// `u_{i+1}`; zero-based.
    U(usize),
    V(TupleVertex),
}

impl ExtremalVertex {
    /// Label for half-length `k`: u-vertices first, then v-vertices by index.
    pub fn label(&self, k: usize) -> usize {
        match self {
            ExtremalVertex::U(i) => *i,
            ExtremalVertex::V(t) => k + t.encode() as usize - 1,
        }
    }
}

/// Whether `(from, to)` is an arc of the extremal digraph with half-length
/// `k`; `bar` adds the arcs between distinct `u`-vertices.
pub fn extremal_arc(from: &ExtremalVertex, to: &ExtremalVertex, bar: bool) -> bool {
    use ExtremalVertex::{U, V};
    match (from, to) {
        (U(i), U(j)) => bar && i != j,
        (U(i), V(t)) => t.entries[2 * i] == 1,
        (V(t), U(i)) => t.entries[2 * i + 1] == 1,
        (V(a), V(b)) => {
            a != b
                && a.entries
                    .chunks(2)
                    .zip(b.entries.chunks(2))
                    .all(|(x, y)| x[0] as i64 - y[0] as i64 >= -1 && x[1] as i64 - y[1] as i64 <= 1)
        }
    }
}

fn extremal(k: usize, m: u64, d: u32, bar: bool) -> Result<Digraph> {
    let vertices: Vec<ExtremalVertex> = (0..k)
        .map(ExtremalVertex::U)
        .chain(
            (1..=m)
                .map(|i| TupleVertex::decode(i, k, d).map(ExtremalVertex::V))
                .collect::<Result<Vec<_>>>()?,
        )
        .collect();
    let mut g = Digraph::empty(vertices.len());
    for (a, x) in vertices.iter().enumerate() {
        for (b, y) in vertices.iter().enumerate() {
            if extremal_arc(x, y, bar) {
                g.add_arc(a, b);
            }
        }
    }
    Ok(g)
}

/// The lower-bound extremal digraph `Γ(n, d)`.
pub fn gamma(n: usize, d: usize) -> Result<Digraph> {
    gamma_with_cap(n, d, DEFAULT_SIZE_CAP)
}

pub fn gamma_with_cap(n: usize, d: usize, cap: usize) -> Result<Digraph> {
    if d == 0 || n < d + 1 {
        return Err(Error::InvalidParameters(format!(
            "gamma requires d >= 1 and n >= d + 1, got n={n}, d={d}"
        )));
    }
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    let k = dimension_lower_bound(n as u64, d as u64) as usize;
    extremal(k, (n - k) as u64, d as u32, false)
}

/// `Γ̄(d^{2k} + k, d)`.
pub fn gamma_bar(k: usize, d: usize) -> Result<Digraph> {
    gamma_bar_with_cap(k, d, DEFAULT_SIZE_CAP)
}

pub fn gamma_bar_with_cap(k: usize, d: usize, cap: usize) -> Result<Digraph> {
    if k == 0 || d == 0 {
        return Err(Error::InvalidParameters(format!(
            "gamma_bar requires k >= 1 and d >= 1, got k={k}, d={d}"
        )));
    }
    let n = tuple_space(k, d as u32)
        .and_then(|m| m.checked_add(k as u64))
        .filter(|&n| n <= cap as u64)
        .ok_or(Error::CapExceeded { n: usize::MAX, cap })? as usize;
    extremal(k, (n - k) as u64, d as u32, true)
}

/// `((d² + 3d − 2) / 2)^{2k} − d^{2k}`: the number of arcs between
/// `v`-vertices of `Γ(d^{2k} + k, d)`.
pub fn e_count(k: usize, d: usize) -> Option<u128> {
    let e = u32::try_from(2 * k).ok()?;
    let mu = crate::dimension::mu(d as u64) as u128;
    mu.checked_pow(e)?.checked_sub((d as u128).checked_pow(e)?)
}

/// Counts the arcs of `g` with both ends outside the first `k` vertices.
pub fn count_v_arcs(g: &Digraph, k: usize) -> usize {
    g.arcs().filter(|&(a, b)| a >= k && b >= k).count()
}

/// The digraph of order `n` and diameter `d` with dimension `n − d`.
/// Vertex `v_i` has label `i − 1`.
pub fn sharp_upper_example(n: usize, d: usize) -> Result<Digraph> {
    if d < 2 || n < d + 1 {
        return Err(Error::InvalidParameters(format!(
            "requires 3 <= d + 1 <= n, got n={n}, d={d}"
        )));
    }
    let v = |i: usize| i - 1;
    let hub = n - d + 2;
    let mut arcs = Vec::new();
    for i in 1..=n - d + 1 {
        arcs.push((v(n), v(i)));
        arcs.push((v(i), v(hub)));
    }
    for j in hub..n {
        arcs.push((v(j), v(j + 1)));
    }
    Digraph::new(n, arcs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StandardFamily {
    Complete,
    Null,
    DirectedCycle,
    DirectedPath,
    UndirectedPath,
}

impl FromStr for StandardFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "complete" => StandardFamily::Complete,
            "null" => StandardFamily::Null,
            "directed_cycle" | "cycle" => StandardFamily::DirectedCycle,
            "directed_path" => StandardFamily::DirectedPath,
            "undirected_path" => StandardFamily::UndirectedPath,
            other => return Err(Error::UnknownName(other.to_string())),
        })
    }
}

pub fn standard(family: StandardFamily, n: usize) -> Result<Digraph> {
    let min = match family {
        StandardFamily::Complete | StandardFamily::Null => 1,
        _ => 2,
    };
    if n < min {
        return Err(Error::OrderTooSmall { n, min });
    }
    let arcs: Vec<(usize, usize)> = match family {
        StandardFamily::Complete => (0..n)
            .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
            .collect(),
        StandardFamily::Null => Vec::new(),
        StandardFamily::DirectedCycle => (0..n).map(|i| (i, (i + 1) % n)).collect(),
        StandardFamily::DirectedPath => (0..n - 1).map(|i| (i, i + 1)).collect(),
        StandardFamily::UndirectedPath => {
            (0..n - 1).flat_map(|i| [(i, i + 1), (i + 1, i)]).collect()
        }
    };
    Digraph::new(n, arcs)
}

pub fn complete(n: usize) -> Digraph {
    standard(StandardFamily::Complete, n).expect("n >= 1")
}

pub fn null(n: usize) -> Digraph {
    standard(StandardFamily::Null, n).expect("n >= 1")
}

pub fn directed_cycle(n: usize) -> Digraph {
    standard(StandardFamily::DirectedCycle, n).expect("n >= 2")
}

/// The directed 4-cycle and its three modifications on `{0, 1, 2, 3}`:
/// add `(3,1)`, then add `(0,2)`, then delete `(0,1)`.
pub fn chord_fixtures() -> [Digraph; 4] {
    let cycle = directed_cycle(4);
    let mut g1 = cycle.clone();
    g1.add_arc(3, 1);
    let mut g2 = g1.clone();
    g2.add_arc(0, 2);
    let mut g3 = g2.clone();
    g3.remove_arc(0, 1);
    [cycle, g1, g2, g3]
}

/// Cayley digraph of `Z_{f₁} ⊕ … ⊕ Z_{f_r}`. Elements are ordered
/// lexicographically; element `(a₁, …, a_r)` has label
/// `a₁·f₂⋯f_r + … + a_r`.
pub fn cayley(factors: &[usize], generators: &[Vec<usize>]) -> Result<Digraph> {
    if factors.is_empty() || factors.contains(&0) {
        return Err(Error::InvalidParameters("factors must be positive".into()));
    }
    if generators.is_empty() {
        return Err(Error::EmptyVertexSet);
    }
    for s in generators {
        if s.len() != factors.len() || s.iter().zip(factors).any(|(&a, &f)| a >= f) {
            return Err(Error::InvalidParameters(format!(
                "generator {s:?} is not an element of the group"
            )));
        }
        if s.iter().all(|&a| a == 0) {
            return Err(Error::InvalidParameters(
                "generators must exclude the identity".into(),
            ));
        }
    }
    let order: usize = factors.iter().product();
    let decode = |mut x: usize| {
        let mut t = vec![0; factors.len()];
        for (slot, &f) in t.iter_mut().zip(factors).rev() {
            *slot = x % f;
            x /= f;
        }
        t
    };
    let encode = |t: &[usize]| t.iter().zip(factors).fold(0, |acc, (&a, &f)| acc * f + a);
    let mut g = Digraph::empty(order);
    for x in 0..order {
        let tx = decode(x);
        for s in generators {
            let y: Vec<usize> = tx
                .iter()
                .zip(s)
                .zip(factors)
                .map(|((&a, &b), &f)| (a + b) % f)
                .collect();
            g.add_arc(x, encode(&y));
        }
    }
    if !g.is_strongly_connected() {
        return Err(Error::InvalidParameters(
            "generators do not generate the group".into(),
        ));
    }
    Ok(g)
}

/// The four families of 1-dimensional vertex-transitive digraphs:
///
/// 1. `Cay(Z_n, {1})`, `n ≥ 2`
/// 2. `Cay(Z_{2n}, {1, 2})`, `n ≥ 2`
/// 3. `Cay(Z_2 ⊕ Z_n, {(1,0), (0,1)})`, `n ≥ 3`
/// 4. `Cay(Z_2 ⊕ Z_{2n}, {(1,0), (0,1), (0,2)})`, `n ≥ 3`
pub fn vt_family(which: u8, n: usize) -> Result<Digraph> {
    let min = match which {
        1 | 2 => 2,
        3 | 4 => 3,
        _ => return Err(Error::InvalidParameters(format!("no family {which}"))),
    };
    if n < min {
        return Err(Error::InvalidParameters(format!(
            "family {which} requires n >= {min}, got {n}"
        )));
    }
    match which {
        1 => cayley(&[n], &[vec![1]]),
        2 => cayley(&[2 * n], &[vec![1], vec![2]]),
        3 => cayley(&[2, n], &[vec![1, 0], vec![0, 1]]),
        _ => cayley(&[2, 2 * n], &[vec![1, 0], vec![0, 1], vec![0, 2]]),
    }
}

/// Order of `vt_family(which, n)`.
pub fn vt_family_order(which: u8, n: usize) -> usize {
    match which {
        1 => n,
        2 | 3 => 2 * n,
        _ => 4 * n,
    }
}

/// The 1-dimensional digraphs of order 3.
///
/// * `G₁`: arcs `(0,1), (1,2), (2,1), (2,0)`
/// * `G₂`: arcs `(0,1), (1,0), (1,2), (2,1), (2,0)`
/// * `G₃`, `G₄`: the two remaining classes, found by enumeration and ordered
///   by arc count. These come out as the directed triangle
///   `(0,1), (1,2), (2,0)` and the symmetric path on 3 vertices. Which one
///   carries which index is a local convention.
pub fn small_g(which: u8) -> Result<Digraph> {
    match which {
        1 => Digraph::new(3, [(0, 1), (1, 2), (2, 1), (2, 0)]),
        2 => Digraph::new(3, [(0, 1), (1, 0), (1, 2), (2, 1), (2, 0)]),
        3 | 4 => Ok(remaining_small_g()[(which - 3) as usize].clone()),
        _ => Err(Error::InvalidParameters(format!("no digraph G{which}"))),
    }
}

fn remaining_small_g() -> &'static [Digraph; 2] {
    static CACHE: OnceLock<[Digraph; 2]> = OnceLock::new();
    CACHE.get_or_init(|| {
        let g1 = small_g(1).unwrap();
        let g2 = small_g(2).unwrap();
        let classes = classify_by_dimension(3).expect("order 3 is within the cap");
        let mut rest: Vec<Digraph> = classes
            .get(&1)
            .into_iter()
            .flatten()
            .map(|r| r.graph.clone())
            .filter(|g| {
                is_isomorphic(g, &g1).unwrap().is_none() && is_isomorphic(g, &g2).unwrap().is_none()
            })
            .collect();
        rest.sort_by_key(Digraph::arc_count);
        assert_eq!(rest.len(), 2, "expected exactly two further classes");
        [rest[0].clone(), rest[1].clone()]
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimension::weak_metric_dimension;

    #[test]
    fn tuple_codec_examples() {
        assert_eq!(TupleVertex::decode(1, 1, 2).unwrap().entries(), &[1, 1]);
        assert_eq!(TupleVertex::decode(4, 1, 2).unwrap().entries(), &[2, 2]);
        assert_eq!(TupleVertex::decode(2, 1, 2).unwrap().entries(), &[2, 1]);
        for i in 1..=81 {
            assert_eq!(TupleVertex::decode(i, 2, 3).unwrap().encode(), i);
        }
        assert!(TupleVertex::decode(0, 1, 2).is_err());
        assert!(TupleVertex::decode(5, 1, 2).is_err());
        assert!(TupleVertex::new(vec![1, 3], 2).is_err());
    }

    #[test]
    fn gamma_5_2_shape() {
        let g = gamma(5, 2).unwrap();
        assert_eq!(g.order(), 5);
        assert_eq!(g.arc_count(), 16);
        let m = g.distances().unwrap();
        assert_eq!(m.diameter(), 2);
        assert_eq!(count_v_arcs(&g, 1), 12);
        assert_eq!(weak_metric_dimension(&g, false).unwrap().dim, 1);
    }

    #[test]
    fn gamma_rejects_bad_parameters() {
        assert!(gamma(2, 2).is_err());
        assert!(gamma(5, 0).is_err());
        assert!(matches!(
            gamma_with_cap(20, 2, 10),
            Err(Error::CapExceeded { .. })
        ));
        assert!(matches!(
            gamma_bar_with_cap(3, 3, 100),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn gamma_bar_degenerate_cases() {
        for d in 1..=3 {
            assert_eq!(gamma_bar(1, d).unwrap(), gamma(d * d + 1, d).unwrap());
        }
        for k in 1..=4 {
            assert_eq!(gamma_bar(k, 1).unwrap(), complete(k + 1));
        }
    }

    #[test]
    fn gamma_bar_2_2_arc_count() {
        let g = gamma_bar(2, 2).unwrap();
        assert_eq!(g.order(), 18);
        // k(k-1) + 2k d^(2k-1) + e(k, d) = 2 + 32 + 240
        assert_eq!(g.arc_count(), 274);
        assert_eq!(count_v_arcs(&g, 2) as u128, e_count(2, 2).unwrap());
    }

    #[test]
    fn e_count_values() {
        assert_eq!(e_count(1, 1), Some(0));
        assert_eq!(e_count(1, 2), Some(12));
        assert_eq!(e_count(2, 3), Some(4015));
    }

    #[test]
    fn sharp_upper_example_5_3() {
        let g = sharp_upper_example(5, 3).unwrap();
        assert_eq!(g.arc_count(), 7);
        assert_eq!(g.distances().unwrap().diameter(), 3);
        assert_eq!(weak_metric_dimension(&g, false).unwrap().dim, 2);
        assert!(sharp_upper_example(3, 1).is_err());
        assert!(sharp_upper_example(3, 3).is_err());
    }

    #[test]
    fn standard_families() {
        assert_eq!(complete(3).arc_count(), 6);
        assert_eq!(null(2).arc_count(), 0);
        let p2 = standard(StandardFamily::DirectedPath, 2).unwrap();
        assert_eq!(p2.arc_list(), vec![(0, 1)]);
        assert_eq!(
            "nope".parse::<StandardFamily>().unwrap_err(),
            Error::UnknownName("nope".into())
        );
        assert!(standard(StandardFamily::DirectedCycle, 1).is_err());
    }

    #[test]
    fn chord_fixture_arcs() {
        let [c, g1, g2, g3] = chord_fixtures();
        assert_eq!(c.arc_list(), vec![(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert_eq!(g1.arc_count(), 5);
        assert!(g2.has_arc(0, 2) && g2.has_arc(0, 1));
        assert!(!g3.has_arc(0, 1) && g3.has_arc(3, 1));
    }

    #[test]
    fn cayley_basics() {
        assert_eq!(cayley(&[5], &[vec![1]]).unwrap(), directed_cycle(5));
        assert!(cayley(&[4], &[vec![0]]).is_err());
        assert!(cayley(&[4], &[]).is_err());
        assert!(cayley(&[4], &[vec![2]]).is_err());
        let g = vt_family(2, 3).unwrap();
        assert_eq!(g.order(), 6);
        let g = vt_family(4, 3).unwrap();
        assert_eq!(g.order(), 12);
        assert!(vt_family(3, 2).is_err());
        assert_eq!(vt_family(1, 2).unwrap(), complete(2));
    }

    #[test]
    fn small_g_reconstruction() {
        let g1 = small_g(1).unwrap();
        let g2 = small_g(2).unwrap();
        for g in [&g1, &g2] {
            assert!(g.has_arc(1, 2) && g.has_arc(2, 1));
            let r = weak_metric_dimension(g, false).unwrap();
            assert_eq!((r.dim, r.basis.as_slice()), (1, &[0][..]));
        }
        let g3 = small_g(3).unwrap();
        let g4 = small_g(4).unwrap();
        assert!(is_isomorphic(&g3, &directed_cycle(3)).unwrap().is_some());
        assert!(
            is_isomorphic(&g4, &standard(StandardFamily::UndirectedPath, 3).unwrap())
                .unwrap()
                .is_some()
        );
    }
}
