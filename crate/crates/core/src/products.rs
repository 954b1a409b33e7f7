//! Disjoint union, join, generalized lexicographic product, and the families
//! of digraphs of order `n` with dimension `n − 2`.

use crate::constructions::{complete, null, small_g, standard, StandardFamily};
use crate::error::{Error, Result};
use crate::graph::Digraph;

/// `g ∪ h`: the vertices of `h` are shifted by `|g|`.
pub fn disjoint_union(g: &Digraph, h: &Digraph) -> Digraph {
    let shift = g.order();
    let mut r = Digraph::empty(shift + h.order());
    for (u, v) in g.arcs() {
        r.add_arc(u, v);
    }
    for (u, v) in h.arcs() {
        r.add_arc(u + shift, v + shift);
    }
    r
}

/// `g + h`: disjoint union plus arcs both ways between every vertex of `g`
/// and every vertex of `h`.
pub fn join(g: &Digraph, h: &Digraph) -> Digraph {
    let shift = g.order();
    let mut r = disjoint_union(g, h);
    for u in 0..shift {
        for v in shift..r.order() {
            r.add_arc(u, v);
            r.add_arc(v, u);
        }
    }
    r
}

/// `outer[H₀, …, H_{m−1}]`. Block `i` occupies consecutive labels in outer
/// vertex order. An arc joins `x ∈ Hᵢ` to `y ∈ Hⱼ` iff `(x, y)` is an arc of
/// `Hᵢ` when `i = j`, or `(i, j)` is an arc of `outer` when `i ≠ j`.
pub fn lex_product(outer: &Digraph, inner: &[Digraph]) -> Result<Digraph> {
    if inner.len() != outer.order() {
        return Err(Error::InvalidParameters(format!(
            "{} inner digraphs for an outer digraph of order {}",
            inner.len(),
            outer.order()
        )));
    }
    let mut offsets = Vec::with_capacity(inner.len() + 1);
    offsets.push(0);
    for h in inner {
        offsets.push(offsets.last().unwrap() + h.order());
    }
    let mut r = Digraph::empty(*offsets.last().unwrap());
    for (i, h) in inner.iter().enumerate() {
        for (u, v) in h.arcs() {
            r.add_arc(offsets[i] + u, offsets[i] + v);
        }
    }
    for (i, j) in outer.arcs() {
        for x in offsets[i]..offsets[i + 1] {
            for y in offsets[j]..offsets[j + 1] {
                r.add_arc(x, y);
            }
        }
    }
    Ok(r)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedDigraph {
    pub name: String,
    pub graph: Digraph,
}

impl NamedDigraph {
    pub fn new(name: impl Into<String>, graph: Digraph) -> Self {
        NamedDigraph {
            name: name.into(),
            graph,
        }
    }
}

fn blocks(which: u8, parts: [Digraph; 3]) -> Digraph {
    lex_product(&small_g(which).expect("G1/G2 are fixed"), &parts).expect("three blocks")
}

/// `G_i[K₁, K_t, K_s]` for `i ∈ {1, 2}`.
pub fn g_blowup(which: u8, t: usize, s: usize) -> Digraph {
    blocks(which, [complete(1), complete(t), complete(s)])
}

/// The non-undirected digraphs of order `n ≥ 4` with dimension `n − 2`.
///
/// `G₂[K₁, P₂, K₁]` has order 4 and is listed only for `n = 4`. Members
/// are not deduplicated up to isomorphism.
pub fn n2_families(n: usize) -> Result<Vec<NamedDigraph>> {
    if n < 4 {
        return Err(Error::OrderTooSmall { n, min: 4 });
    }
    let mut out = Vec::new();
    if n == 4 {
        let p2 = standard(StandardFamily::DirectedPath, 2)?;
        out.push(NamedDigraph::new(
            "G2[K1,P2,K1]",
            blocks(2, [complete(1), p2, complete(1)]),
        ));
    }
    for t in 1..=n - 2 {
        let s = n - t - 1;
        out.push(NamedDigraph::new(
            format!("G1[K1,K{t},K{s}]"),
            blocks(1, [complete(1), complete(t), complete(s)]),
        ));
        out.push(NamedDigraph::new(
            format!("G2[K1,K{t},K{s}]"),
            blocks(2, [complete(1), complete(t), complete(s)]),
        ));
        out.push(NamedDigraph::new(
            format!("G2[K{t},K{s},K1]"),
            blocks(2, [complete(t), complete(s), complete(1)]),
        ));
    }
    out.push(NamedDigraph::new(
        format!("G2[K1,N{},K1]", n - 2),
        blocks(2, [complete(1), null(n - 2), complete(1)]),
    ));
    Ok(out)
}

/// Connected undirected graphs of order `n ≥ 4` with dimension `n − 2`:
/// `N_t + N_{n−t}`, `K_t + N_{n−t}` and `K_t + (K₁ ∪ K_{n−t−1})` for
/// `1 ≤ t ≤ n − 2`, where `N_t` is the null digraph.
pub fn graph_n2_families(n: usize) -> Result<Vec<NamedDigraph>> {
    if n < 4 {
        return Err(Error::OrderTooSmall { n, min: 4 });
    }
    let mut out = Vec::new();
    for t in 1..=n - 2 {
        out.push(NamedDigraph::new(
            format!("N{t}+N{}", n - t),
            join(&null(t), &null(n - t)),
        ));
        out.push(NamedDigraph::new(
            format!("K{t}+N{}", n - t),
            join(&complete(t), &null(n - t)),
        ));
        out.push(NamedDigraph::new(
            format!("K{t}+(K1uK{})", n - t - 1),
            join(
                &complete(t),
                &disjoint_union(&complete(1), &complete(n - t - 1)),
            ),
        ));
    }
    Ok(out)
}
