//! Exhaustive generation of small digraphs up to isomorphism.
//!
//! A labeled digraph of order `n` is a bitmask over the `n(n−1)` ordered
//! pairs `(u, v)`, `u ≠ v`, taken in lexicographic order; bit `i` is the
//! `i`-th pair.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use rand::Rng;
use rayon::prelude::*;

use crate::dimension::weak_metric_dimension;
use crate::error::{Error, Result};
use crate::graph::Digraph;
use crate::symmetry::{canonical_labeling, Fingerprint};

/// Largest order enumerated by default.
pub const DEFAULT_MAX_ORDER: usize = 5;
/// Largest order enumerated at all; needs [`Limits::allow_order_six`].
pub const HARD_MAX_ORDER: usize = 6;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Limits {
    /// Order 6 means 2³⁰ candidates: hours, and 128 MiB for the orbit table.
    pub allow_order_six: bool,
}

impl Limits {
    pub fn cap(&self) -> usize {
        if self.allow_order_six {
            HARD_MAX_ORDER
        } else {
            DEFAULT_MAX_ORDER
        }
    }

    fn check(&self, n: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::OrderTooSmall { n, min: 1 });
        }
        if n > self.cap() {
            return Err(Error::CapExceeded { n, cap: self.cap() });
        }
        Ok(())
    }
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
        .collect()
}

pub fn mask_to_digraph(n: usize, mask: u64) -> Digraph {
    let mut g = Digraph::empty(n);
    for (i, (u, v)) in pairs(n).into_iter().enumerate() {
        if mask >> i & 1 == 1 {
            g.add_arc(u, v);
        }
    }
    g
}

pub fn digraph_to_mask(g: &Digraph) -> u64 {
    pairs(g.order())
        .into_iter()
        .enumerate()
        .filter(|&(_, (u, v))| g.has_arc(u, v))
        .fold(0, |acc, (i, _)| acc | 1 << i)
}

/// Row bitmasks for `n ≤ 8`.
fn rows(n: usize, mask: u64) -> [u8; 8] {
    let mut out = [0u8; 8];
    let mut i = 0;
    for (u, row) in out.iter_mut().enumerate().take(n) {
        for v in 0..n {
            if v != u {
                if mask >> i & 1 == 1 {
                    *row |= 1 << v;
                }
                i += 1;
            }
        }
    }
    out
}

fn closure(n: usize, adj: &[u8; 8], start: usize) -> u8 {
    let mut seen = 1u8 << start;
    let mut frontier = seen;
    while frontier != 0 {
        let mut next = 0u8;
        for (v, row) in adj.iter().enumerate().take(n) {
            if frontier >> v & 1 == 1 {
                next |= row;
            }
        }
        frontier = next & !seen;
        seen |= next;
    }
    seen
}

/// Strong connectivity of a mask-encoded digraph.
pub fn mask_strongly_connected(n: usize, mask: u64) -> bool {
    let full = ((1u16 << n) - 1) as u8;
    let adj = rows(n, mask);
    if closure(n, &adj, 0) != full {
        return false;
    }
    let mut rev = [0u8; 8];
    for (u, row) in adj.iter().enumerate().take(n) {
        for (v, slot) in rev.iter_mut().enumerate().take(n) {
            if row >> v & 1 == 1 {
                *slot |= 1 << u;
            }
        }
    }
    closure(n, &rev, 0) == full
}

/// Every labeled digraph of order `n` passing `filter`, in mask order.
pub fn labeled_digraphs<'a>(
    n: usize,
    limits: Limits,
    filter: impl Fn(&Digraph) -> bool + 'a,
) -> Result<impl Iterator<Item = Digraph> + 'a> {
    limits.check(n)?;
    let total = 1u64 << (n * (n - 1));
    Ok((0..total)
        .map(move |m| mask_to_digraph(n, m))
        .filter(move |g| filter(g)))
}

/// Masks of all strongly connected labeled digraphs, ascending. The mask
/// range is split into chunks processed in parallel.
pub fn strongly_connected_masks(n: usize, limits: Limits) -> Result<Vec<u64>> {
    limits.check(n)?;
    let total = 1u64 << (n * (n - 1));
    const CHUNK: u64 = 1 << 14;
    let chunks = total.div_ceil(CHUNK);
    Ok((0..chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(total);
            (lo..hi).filter(move |&m| mask_strongly_connected(n, m))
        })
        .collect())
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                go(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representative {
    pub fingerprint: Fingerprint,
    /// The canonical labeling of the class.
    pub graph: Digraph,
}

/// One canonical representative per isomorphism class of strongly
/// connected digraphs of order `n`, fingerprint ascending.
pub fn sc_representatives(n: usize, limits: Limits) -> Result<Vec<Representative>> {
    let masks = strongly_connected_masks(n, limits)?;
    if n == 1 {
        let g = Digraph::empty(1);
        let (fingerprint, _) = canonical_labeling(&g)?;
        return Ok(vec![Representative {
            fingerprint,
            graph: g,
        }]);
    }
    let pair_list = pairs(n);
    let index_of = |u: usize, v: usize| pair_list.iter().position(|&p| p == (u, v)).unwrap();
    let bit_maps: Vec<Vec<usize>> = permutations(n)
        .into_iter()
        .map(|p| {
            pair_list
                .iter()
                .map(|&(u, v)| index_of(p[u], p[v]))
                .collect()
        })
        .collect();
    let mut visited = vec![0u64; (1usize << (n * (n - 1))).div_ceil(64)];
    let mut reps = Vec::new();
    for &mask in &masks {
        if visited[(mask / 64) as usize] >> (mask % 64) & 1 == 1 {
            continue;
        }
        let g = mask_to_digraph(n, mask);
        let (fingerprint, _) = canonical_labeling(&g)?;
        reps.push(Representative {
            fingerprint,
            graph: fingerprint.to_digraph(),
        });
        for map in &bit_maps {
            let image = (0..map.len())
                .filter(|&i| mask >> i & 1 == 1)
                .fold(0u64, |acc, i| acc | 1 << map[i]);
            visited[(image / 64) as usize] |= 1 << (image % 64);
        }
    }
    reps.sort_by_key(|r| r.fingerprint);
    Ok(reps)
}

/// A representative with its exact dimension and least basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classified {
    pub fingerprint: Fingerprint,
    pub graph: Digraph,
    pub dim: usize,
    pub basis: Vec<usize>,
}

/// Classified representatives of order `2..=6`, computed once per order.
pub fn classified_representatives(n: usize, limits: Limits) -> Result<Arc<Vec<Classified>>> {
    static CACHE: [OnceLock<Arc<Vec<Classified>>>; HARD_MAX_ORDER + 1] =
        [const { OnceLock::new() }; HARD_MAX_ORDER + 1];
    limits.check(n)?;
    if n < 2 {
        return Err(Error::OrderTooSmall { n, min: 2 });
    }
    if let Some(c) = CACHE[n].get() {
        return Ok(c.clone());
    }
    let reps = sc_representatives(n, limits)?;
    let classified = reps
        .into_par_iter()
        .map(|r| {
            let d = weak_metric_dimension(&r.graph, false)?;
            Ok(Classified {
                fingerprint: r.fingerprint,
                graph: r.graph,
                dim: d.dim,
                basis: d.basis,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CACHE[n].get_or_init(|| Arc::new(classified)).clone())
}

/// Representatives of order `n` grouped by dimension.
pub fn classify_by_dimension(n: usize) -> Result<BTreeMap<usize, Vec<Representative>>> {
    classify_by_dimension_with(n, Limits::default())
}

pub fn classify_by_dimension_with(
    n: usize,
    limits: Limits,
) -> Result<BTreeMap<usize, Vec<Representative>>> {
    let mut out: BTreeMap<usize, Vec<Representative>> = BTreeMap::new();
    for c in classified_representatives(n, limits)?.iter() {
        out.entry(c.dim).or_default().push(Representative {
            fingerprint: c.fingerprint,
            graph: c.graph.clone(),
        });
    }
    Ok(out)
}

/// Random strongly connected digraph: each arc independently with
/// probability `p`, resampled until strongly connected.
pub fn random_strongly_connected(n: usize, p: f64, rng: &mut impl Rng) -> Digraph {
    assert!(n >= 1 && p > 0.0);
    loop {
        let mut g = Digraph::empty(n);
        for u in 0..n {
            for v in 0..n {
                if u != v && rng.gen_bool(p) {
                    g.add_arc(u, v);
                }
            }
        }
        if g.is_strongly_connected() {
            return g;
        }
    }
}
