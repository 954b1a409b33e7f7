//! Machine checks of the bounds and classification results, one check per
//! [`TheoremId`], each producing a [`VerificationReport`].
//!
//! Universal statements are checked exhaustively over all strongly connected
//! digraphs up to `max_order`, and on constructed family instances up to
//! `family_max_order`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::constructions::{
    chord_fixtures, complete, count_v_arcs, directed_cycle, e_count, gamma, gamma_bar,
    sharp_upper_example, small_g, standard, vt_family, vt_family_order, StandardFamily,
};
use crate::dimension::{
    check_weakly_resolving, dimension_lower_bound, forced_pairs, naive_weak_metric_dimension,
    weak_metric_dimension, ArcBoundsReport, DimBoundsReport, DimensionResult, TypeBoundReport,
};
use crate::enumerate::{classified_representatives, random_strongly_connected, Classified, Limits};
use crate::error::{Error, Result};
use crate::graph::Digraph;
use crate::products::{g_blowup, graph_n2_families, n2_families, NamedDigraph};
use crate::symmetry::{
    canonical_form, embed_into_gamma_bar, is_isomorphic, is_vertex_transitive,
    is_weakly_distance_regular, is_weakly_distance_transitive, single_vertex_profiles, Fingerprint,
    CANONICAL_CAP, SEARCH_CAP,
};

macro_rules! theorem_ids {
    ($($variant:ident => $name:literal,)*) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum TheoremId { $($variant,)* }

        impl TheoremId {
            pub const ALL: &'static [TheoremId] = &[$(TheoremId::$variant,)*];

            pub fn as_str(&self) -> &'static str {
                match self { $(TheoremId::$variant => $name,)* }
            }
        }

        impl FromStr for TheoremId {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($name => Ok(TheoremId::$variant),)*
                    other => Err(Error::UnknownName(other.to_string())),
                }
            }
        }
    };
}

theorem_ids! {
    Nd => "nd",
    Nkd => "nkd",
    Ag => "ag",
    Eg1 => "eg1",
    Eg2 => "eg2",
    Ekd => "ekd",
    Complete => "complete",
    Fig1 => "fig1",
    Vt1dim => "vt1dim",
    Obs1 => "obs1",
    WdtChain => "wdt_chain",
    TypeBound => "type_bound",
    Lem12 => "lem12",
    Gik => "gik",
    N2main => "n2main",
    GraphN2 => "graph_n2",
    Embed => "embed",
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for TheoremId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Solver {
    /// Forced-pair pruned search.
    Pruned,
    /// All subsets, no pruning.
    Naive,
}

/// Family-instance checks never go beyond this order.
pub const FAMILY_ORDER_CAP: usize = 20;

#[derive(Debug, Clone, Serialize)]
pub struct VerifyParams {
    /// Exhaustive checks cover every strongly connected digraph of order
    /// `2..=max_order`.
    pub max_order: usize,
    pub family_max_order: usize,
    /// Largest `d^{2k} + k` for the arc-count identity.
    pub ekd_max_order: usize,
    /// Cayley digraphs of abelian groups of orders `max_order+1..=cayley_max_order`.
    pub cayley_max_order: usize,
    /// Blocks `K_t`, `K_s` with `t, s ≤ gik_max`.
    pub gik_max: usize,
    pub random_instances: usize,
    pub random_max_order: usize,
    pub seed: u64,
    pub solver: Solver,
    #[serde(skip)]
    pub allow_order_six: bool,
}

impl Default for VerifyParams {
    fn default() -> Self {
        VerifyParams {
            max_order: 5,
            family_max_order: 12,
            ekd_max_order: 100,
            cayley_max_order: 6,
            gik_max: 3,
            random_instances: 50,
            random_max_order: 6,
            seed: 0x5eed,
            solver: Solver::Pruned,
            allow_order_six: false,
        }
    }
}

impl VerifyParams {
    fn limits(&self) -> Limits {
        Limits {
            allow_order_six: self.allow_order_six,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let caps = [
            ("max_order", self.max_order, self.limits().cap()),
            ("family_max_order", self.family_max_order, FAMILY_ORDER_CAP),
            (
                "ekd_max_order",
                self.ekd_max_order,
                crate::constructions::DEFAULT_SIZE_CAP,
            ),
            ("cayley_max_order", self.cayley_max_order, SEARCH_CAP),
            ("gik_max", self.gik_max, 6),
            ("random_max_order", self.random_max_order, CANONICAL_CAP),
        ];
        for (name, value, cap) in caps {
            if value > cap {
                return Err(Error::InvalidParameters(format!(
                    "{name}={value} exceeds cap {cap}"
                )));
            }
        }
        if self.max_order < 2 || self.random_max_order < 2 {
            return Err(Error::InvalidParameters("orders must be at least 2".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Verified,
    Counterexample,
    /// No counterexample, but part of the requested range was skipped.
    PartiallyChecked,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Counterexample {
    pub fingerprint: String,
    pub arcs: Vec<[usize; 2]>,
    pub violation: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub instances: u64,
    /// Instance count per sub-check.
    pub by_check: BTreeMap<String, u64>,
    /// Sub-checks skipped because an instance exceeded a cap.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub skipped: BTreeMap<String, u64>,
    /// Verdict of each sub-check on its own.
    pub sub_verdicts: BTreeMap<String, Verdict>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub theorem: TheoremId,
    #[serde(serialize_with = "sorted_params")]
    pub params: serde_json::Value,
    pub verdict: Verdict,
    pub counterexamples: Vec<Counterexample>,
    pub stats: Stats,
    pub wall_time_ms: u64,
}

fn sorted_params<S: Serializer>(
    v: &serde_json::Value,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        serde_json::Value::Object(map) => {
            let sorted: BTreeMap<&String, &serde_json::Value> = map.iter().collect();
            let mut m = s.serialize_map(Some(sorted.len()))?;
            for (k, v) in sorted {
                m.serialize_entry(k, v)?;
            }
            m.end()
        }
        other => other.serialize(s),
    }
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Fingerprint string for reports: canonical when small enough.
pub fn fingerprint_string(g: &Digraph) -> String {
    match canonical_form(g) {
        Ok(f) => f.to_string(),
        Err(_) => {
            let arcs: Vec<String> = g.arcs().map(|(u, v)| format!("{u}-{v}")).collect();
            format!("raw{}:{}", g.order(), arcs.join(","))
        }
    }
}

/// Accumulates instance counts and counterexamples for one report.
struct Tally {
    counterexamples: Vec<Counterexample>,
    stats: Stats,
}

impl Tally {
    fn new() -> Self {
        Tally {
            counterexamples: Vec::new(),
            stats: Stats::default(),
        }
    }

    fn check(&mut self, name: &str, g: &Digraph, ok: bool, violation: impl FnOnce() -> String) {
        self.stats.instances += 1;
        *self.stats.by_check.entry(name.to_string()).or_default() += 1;
        self.stats
            .sub_verdicts
            .entry(name.to_string())
            .or_insert(Verdict::Verified);
        if !ok {
            self.fail(name, g, format!("{name}: {}", violation()));
        }
    }

    fn fail(&mut self, name: &str, g: &Digraph, violation: String) {
        self.stats
            .sub_verdicts
            .insert(name.to_string(), Verdict::Counterexample);
        self.counterexamples.push(Counterexample {
            fingerprint: fingerprint_string(g),
            arcs: g.arcs().map(|(u, v)| [u, v]).collect(),
            violation,
        });
    }

    fn skip(&mut self, name: &str) {
        self.stats
            .sub_verdicts
            .entry(name.to_string())
            .and_modify(|v| {
                if *v == Verdict::Verified {
                    *v = Verdict::PartiallyChecked
                }
            })
            .or_insert(Verdict::PartiallyChecked);
        *self.stats.skipped.entry(name.to_string()).or_default() += 1;
    }

    /// Compares two sets of isomorphism classes; both differences are
    /// counterexamples.
    fn compare_sets(
        &mut self,
        name: &str,
        found: &BTreeMap<Fingerprint, Digraph>,
        expected: &BTreeMap<Fingerprint, Digraph>,
        found_only: &str,
        expected_only: &str,
    ) {
        for (f, g) in found {
            self.check(name, g, expected.contains_key(f), || found_only.to_string());
        }
        for (f, g) in expected {
            if !found.contains_key(f) {
                self.stats.instances += 1;
                self.fail(name, g, format!("{name}: {expected_only}"));
            }
        }
    }
}

/// Runs one theorem check.
pub fn verify(theorem: TheoremId, params: &VerifyParams) -> Result<VerificationReport> {
    params.validate()?;
    let start = Instant::now();
    let checker = Checker { params };
    let mut tally = Tally::new();
    match theorem {
        TheoremId::Nd => checker.nd(&mut tally, false)?,
        TheoremId::Nkd => checker.nd(&mut tally, true)?,
        TheoremId::Ag => checker.ag(&mut tally)?,
        TheoremId::Eg1 => checker.eg1(&mut tally)?,
        TheoremId::Eg2 => checker.eg2(&mut tally)?,
        TheoremId::Ekd => checker.ekd(&mut tally)?,
        TheoremId::Complete => checker.complete(&mut tally)?,
        TheoremId::Fig1 => checker.fig1(&mut tally)?,
        TheoremId::Vt1dim => checker.vt1dim(&mut tally)?,
        TheoremId::Obs1 => checker.obs1(&mut tally)?,
        TheoremId::WdtChain => checker.wdt_chain(&mut tally)?,
        TheoremId::TypeBound => checker.type_bound(&mut tally)?,
        TheoremId::Lem12 => checker.lem12(&mut tally)?,
        TheoremId::Gik => checker.gik(&mut tally)?,
        TheoremId::N2main => checker.n2main(&mut tally)?,
        TheoremId::GraphN2 => checker.graph_n2(&mut tally)?,
        TheoremId::Embed => checker.embed(&mut tally)?,
    }
    let Tally {
        mut counterexamples,
        stats,
    } = tally;
    counterexamples.sort();
    let verdict = if !counterexamples.is_empty() {
        Verdict::Counterexample
    } else if !stats.skipped.is_empty() || stats.instances == 0 {
        Verdict::PartiallyChecked
    } else {
        Verdict::Verified
    };
    Ok(VerificationReport {
        theorem,
        params: serde_json::to_value(params).expect("params serialize"),
        verdict,
        counterexamples,
        stats,
        wall_time_ms: start.elapsed().as_millis() as u64,
    })
}

/// Runs several checks concurrently; reports come back in input order.
pub fn verify_many(
    theorems: &[TheoremId],
    params: &VerifyParams,
) -> Result<Vec<VerificationReport>> {
    theorems.par_iter().map(|&t| verify(t, params)).collect()
}

/// Every constructed digraph of order `2..=max_order`, by name.
pub fn family_instances(max_order: usize) -> Result<Vec<NamedDigraph>> {
    let mut out = Vec::new();
    let mut push = |name: String, g: Digraph| {
        if (2..=max_order).contains(&g.order()) {
            out.push(NamedDigraph::new(name, g));
        }
    };
    for n in 2..=max_order {
        push(format!("K{n}"), complete(n));
        push(format!("C{n}"), directed_cycle(n));
        push(
            format!("P{n}"),
            standard(StandardFamily::UndirectedPath, n)?,
        );
    }
    for d in 1..=4 {
        for n in d + 1..=max_order {
            push(format!("gamma({n},{d})"), gamma(n, d)?);
        }
    }
    for (k, d) in [(2, 2)] {
        if (d as u64).pow(2 * k as u32) as usize + k <= max_order {
            push(format!("gamma_bar({k},{d})"), gamma_bar(k, d)?);
        }
    }
    for d in 2..max_order {
        for n in d + 1..=max_order {
            push(format!("sharp_upper({n},{d})"), sharp_upper_example(n, d)?);
        }
    }
    for (i, g) in chord_fixtures().into_iter().enumerate() {
        push(format!("chord[{i}]"), g);
    }
    for w in 1..=4u8 {
        push(format!("G{w}"), small_g(w)?);
    }
    for w in 1..=4u8 {
        for n in 2..=max_order {
            if vt_family_order(w, n) <= max_order {
                if let Ok(g) = vt_family(w, n) {
                    push(format!("vt{w}({n})"), g);
                }
            }
        }
    }
    for n in 4..=max_order {
        for f in n2_families(n)?.into_iter().chain(graph_n2_families(n)?) {
            push(f.name, f.graph);
        }
    }
    for i in 1..=2u8 {
        for t in 1..=3 {
            for s in 1..=3 {
                push(format!("G{i}[K1,K{t},K{s}]"), g_blowup(i, t, s));
            }
        }
    }
    Ok(out)
}

fn is_directed_cycle(g: &Digraph) -> bool {
    (0..g.order()).all(|v| g.out_degree(v) == 1 && g.in_degree(v) == 1) && g.is_strongly_connected()
}

/// Whether `g` contains a directed cycle through exactly `len` vertices.
fn has_cycle_of_length(g: &Digraph, len: usize) -> bool {
    fn extend(g: &Digraph, path: &mut Vec<usize>, len: usize) -> bool {
        let last = *path.last().unwrap();
        if path.len() == len {
            return g.has_arc(last, path[0]);
        }
        for v in g.out_neighbors(last).collect::<Vec<_>>() {
            if v > path[0] && !path.contains(&v) {
                path.push(v);
                if extend(g, path, len) {
                    return true;
                }
                path.pop();
            }
        }
        false
    }
    (0..g.order()).any(|s| extend(g, &mut vec![s], len))
}

fn canon_set<'a>(
    graphs: impl IntoIterator<Item = &'a Digraph>,
) -> Result<BTreeMap<Fingerprint, Digraph>> {
    graphs
        .into_iter()
        .map(|g| Ok((canonical_form(g)?, g.clone())))
        .collect()
}

/// Enumerates invariant-factor decompositions `[f₁, …, f_r]` of abelian
/// groups of order `n`: `f₁ ≥ 2` and `fᵢ | fᵢ₊₁`.
fn abelian_groups(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, prev: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 1 {
            if !cur.is_empty() {
                out.push(cur.clone());
            }
            return;
        }
        for f in 2..=rest {
            if rest.is_multiple_of(f) && f % prev == 0 {
                let tail_ok = {
                    // every later factor is a multiple of f, so f^k | rest
                    let r = rest / f;
                    r == 1 || r.is_multiple_of(f)
                };
                if tail_ok {
                    cur.push(f);
                    go(rest / f, f, cur, out);
                    cur.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    go(n, 1, &mut Vec::new(), &mut out);
    out
}

struct Checker<'a> {
    params: &'a VerifyParams,
}

impl Checker<'_> {
    fn dim(&self, g: &Digraph) -> Result<DimensionResult> {
        match self.params.solver {
            Solver::Pruned => weak_metric_dimension(g, false),
            Solver::Naive => naive_weak_metric_dimension(g),
        }
    }

    /// Representatives of every strongly connected class of order `n`.
    fn classes(&self, n: usize) -> Result<Vec<Classified>> {
        let reps = classified_representatives(n, self.params.limits())?;
        match self.params.solver {
            Solver::Pruned => Ok(reps.to_vec()),
            Solver::Naive => reps
                .par_iter()
                .map(|c| {
                    let d = naive_weak_metric_dimension(&c.graph)?;
                    Ok(Classified {
                        dim: d.dim,
                        basis: d.basis,
                        ..c.clone()
                    })
                })
                .collect(),
        }
    }

    fn exhaustive(&self, min_order: usize) -> Result<Vec<Classified>> {
        let mut all = Vec::new();
        for n in min_order.max(2)..=self.params.max_order {
            all.extend(self.classes(n)?);
        }
        Ok(all)
    }

    fn families(&self) -> Result<Vec<NamedDigraph>> {
        family_instances(self.params.family_max_order)
    }

    fn nd(&self, t: &mut Tally, order_form: bool) -> Result<()> {
        let mut instances: Vec<(Digraph, usize)> = self
            .exhaustive(2)?
            .into_iter()
            .map(|c| (c.graph, c.dim))
            .collect();
        for f in self.families()? {
            let dim = self.dim(&f.graph)?.dim;
            instances.push((f.graph, dim));
        }
        for (g, dim) in &instances {
            let m = g.distances()?;
            let r = DimBoundsReport::evaluate(g.order(), m.diameter(), *dim);
            if order_form {
                t.check("order_bounds", g, r.order_bounds_ok, || {
                    format!(
                        "n={} outside [k+d, d^(2k)+k] with k={}, d={}",
                        r.n, r.dim, r.diameter
                    )
                });
                if r.dim >= 2 && r.diameter >= 4 {
                    let cap = (r.diameter as u64)
                        .checked_pow(2 * r.dim as u32)
                        .map_or(u64::MAX, |p| p + r.dim as u64);
                    t.check(
                        "strict_order_for_large_diameter",
                        g,
                        (r.n as u64) < cap,
                        || "order reaches d^(2k)+k with k>=2, d>=4".into(),
                    );
                }
            } else {
                t.check(
                    "dimension_bounds",
                    g,
                    r.lower <= *dim as u64 && (*dim as i64) <= r.upper,
                    || {
                        format!(
                            "dim={} outside [f(n,d)={}, n-d={}]",
                            r.dim, r.lower, r.upper
                        )
                    },
                );
            }
        }
        Ok(())
    }

    fn ag(&self, t: &mut Tally) -> Result<()> {
        for n in 2..=self.params.max_order {
            let classes = self.classes(n)?;
            let mut upper_eq = BTreeMap::new();
            for c in &classes {
                let m = c.graph.distances()?;
                let r = ArcBoundsReport::evaluate(c.graph.arc_count(), m.diameter(), c.dim);
                t.check("arc_bounds", &c.graph, r.ok, || {
                    format!("|A|={} outside [{}, {:?}]", r.arcs, r.lower, r.upper)
                });
                t.check(
                    "lower_equality_iff_cycle",
                    &c.graph,
                    r.lower_equality == is_directed_cycle(&c.graph),
                    || {
                        format!(
                            "lower equality {} but directed cycle {}",
                            r.lower_equality, !r.lower_equality
                        )
                    },
                );
                if r.upper_equality {
                    upper_eq.insert(c.fingerprint, c.graph.clone());
                }
            }
            let mut expected = vec![complete(n)];
            for d in 1..n {
                if d * d + 1 == n {
                    expected.push(gamma(n, d)?);
                }
            }
            for k in 1..n {
                if 4usize.pow(k as u32) + k == n {
                    expected.push(gamma_bar(k, 2)?);
                }
            }
            let expected = canon_set(&expected)?;
            t.compare_sets(
                "upper_equality_classes",
                &upper_eq,
                &expected,
                "attains the arc upper bound but is not an extremal digraph",
                "extremal digraph does not attain the arc upper bound",
            );
        }
        let mut witnesses: Vec<(Digraph, usize, u32)> = Vec::new();
        for d in 1..=3 {
            witnesses.push((gamma(d * d + 1, d)?, 1, d as u32));
        }
        for k in 1..=3 {
            witnesses.push((complete(k + 1), k, 1));
        }
        for k in 1..=2 {
            witnesses.push((gamma_bar(k, 2)?, k, 2));
        }
        for (g, k, d) in &witnesses {
            let m = g.distances()?;
            let dim = self.dim(g)?.dim;
            let r = ArcBoundsReport::evaluate(g.arc_count(), m.diameter(), dim);
            t.check("upper_equality_witness", g, dim == *k && m.diameter() == *d && r.upper_equality, || {
                format!("expected k={k}, d={d} with equality; got k={dim}, d={}, |A|={}, bound={:?}", m.diameter(), r.arcs, r.upper)
            });
        }
        Ok(())
    }

    fn eg1(&self, t: &mut Tally) -> Result<()> {
        let max = self.params.family_max_order;
        for d in 2..max {
            for n in d + 1..=max {
                let g = sharp_upper_example(n, d)?;
                let m = g.distances()?;
                let dim = self.dim(&g)?.dim;
                t.check(
                    "dimension_and_diameter",
                    &g,
                    dim == n - d && m.diameter() == d as u32,
                    || format!("(n,d)=({n},{d}): dim={dim}, diameter={}", m.diameter()),
                );
                let low = n - d + 1;
                let forced: BTreeSet<(usize, usize)> = forced_pairs(&m).into_iter().collect();
                let mut ok = true;
                for k in 0..low {
                    for l in k + 1..low {
                        ok &= forced.contains(&(k, l));
                        for mm in (0..n).filter(|&x| x != k && x != l) {
                            let label = mm + 1;
                            let want = if label <= low {
                                (d as u32, d as u32)
                            } else {
                                ((label + d - 1 - n) as u32, (n - label + 1) as u32)
                            };
                            ok &= m.two_way(k, mm) == want && m.two_way(l, mm) == want;
                        }
                    }
                }
                t.check("unresolvable_pairs", &g, ok, || {
                    format!("(n,d)=({n},{d}): displayed two-way distances differ")
                });
            }
        }
        Ok(())
    }

    fn eg2(&self, t: &mut Tally) -> Result<()> {
        let max = self.params.family_max_order;
        for d in 2..=4usize {
            for n in d + 1..=d * d + 1 {
                let g = gamma(n, d)?;
                let m = g.distances()?;
                let dim = self.dim(&g)?.dim;
                t.check(
                    "one_dimensional_range",
                    &g,
                    dim == 1 && m.diameter() == d as u32,
                    || format!("gamma({n},{d}): dim={dim}, diameter={}", m.diameter()),
                );
            }
        }
        for (d, min_n) in [(2usize, 3usize), (3, 4)] {
            for n in min_n..=max {
                let g = gamma(n, d)?;
                let m = g.distances()?;
                let dim = self.dim(&g)?.dim as u64;
                let f = dimension_lower_bound(n as u64, d as u64);
                t.check(
                    "dimension_equals_lower_bound",
                    &g,
                    dim == f && m.diameter() == d as u32,
                    || {
                        format!(
                            "gamma({n},{d}): dim={dim}, f={f}, diameter={}",
                            m.diameter()
                        )
                    },
                );
            }
        }
        Ok(())
    }

    fn ekd(&self, t: &mut Tally) -> Result<()> {
        let max = self.params.ekd_max_order as u64;
        for d in 1..=max as usize {
            for k in 1usize.. {
                let Some(n) = (d as u64).checked_pow(2 * k as u32).map(|p| p + k as u64) else {
                    break;
                };
                if n > max {
                    break;
                }
                let g = gamma(n as usize, d)?;
                let counted = count_v_arcs(&g, k) as u128;
                let closed = e_count(k, d);
                t.check("arc_count_identity", &g, closed == Some(counted), || {
                    format!("(k,d)=({k},{d}): counted {counted}, closed form {closed:?}")
                });
                if d == 1 {
                    break;
                }
            }
        }
        Ok(())
    }

    fn complete(&self, t: &mut Tally) -> Result<()> {
        for n in 2..=self.params.max_order {
            for c in self.classes(n)? {
                t.check(
                    "exhaustive",
                    &c.graph,
                    (c.dim == n - 1) == c.graph.is_complete(),
                    || format!("dim={} with complete={}", c.dim, c.graph.is_complete()),
                );
            }
        }
        for n in 2..=self.params.family_max_order {
            let g = complete(n);
            let dim = self.dim(&g)?.dim;
            t.check("complete_family", &g, dim == n - 1, || {
                format!("dim(K{n})={dim}")
            });
        }
        Ok(())
    }

    fn fig1(&self, t: &mut Tally) -> Result<()> {
        let [cycle, g1, g2, g3] = chord_fixtures();
        let diameter = cycle.distances()?.diameter();
        for g in [&g1, &g2, &g3] {
            let m = g.distances()?;
            let basis_ok =
                check_weakly_resolving(&m, &[0])?.is_resolving() && self.dim(g)?.dim == 1;
            t.check("common_basis", g, basis_ok, || "{0} is not a basis".into());
            t.check("common_diameter", g, m.diameter() == diameter, || {
                format!("diameter {}", m.diameter())
            });
            t.check("girth_three", g, m.girth() == Some(3), || {
                format!("girth {:?}", m.girth())
            });
        }
        t.check(
            "not_isomorphic",
            &g1,
            is_isomorphic(&g1, &g3)?.is_none(),
            || "isomorphic to the third digraph".into(),
        );
        t.check(
            "four_cycle_present",
            &g1,
            has_cycle_of_length(&g1, 4),
            || "no directed 4-cycle".into(),
        );
        t.check(
            "four_cycle_absent",
            &g3,
            !has_cycle_of_length(&g3, 4),
            || "has a directed 4-cycle".into(),
        );
        Ok(())
    }

    fn vt_members(order: usize) -> Result<Vec<Digraph>> {
        let mut out = Vec::new();
        for w in 1..=4u8 {
            for n in 2..=order {
                if vt_family_order(w, n) == order {
                    if let Ok(g) = vt_family(w, n) {
                        out.push(g);
                    }
                }
            }
        }
        Ok(out)
    }

    fn vt1dim(&self, t: &mut Tally) -> Result<()> {
        let p = self.params;
        for order in 2..=p.family_max_order {
            for g in Self::vt_members(order)? {
                if order > SEARCH_CAP {
                    t.skip("family_vertex_transitive");
                } else {
                    t.check(
                        "family_vertex_transitive",
                        &g,
                        is_vertex_transitive(&g)?,
                        || "not vertex-transitive".into(),
                    );
                }
                let dim = self.dim(&g)?.dim;
                t.check("family_one_dimensional", &g, dim == 1, || {
                    format!("dim={dim}")
                });
                t.check(
                    "family_thin_wdr",
                    &g,
                    is_weakly_distance_regular(&g)?.is_thin(),
                    || "not thin weakly distance-regular".into(),
                );
            }
        }
        for n in 2..=p.max_order {
            let mut found = BTreeMap::new();
            for c in self.classes(n)? {
                if c.dim == 1 && is_vertex_transitive(&c.graph)? {
                    found.insert(c.fingerprint, c.graph);
                }
            }
            let expected = canon_set(&Self::vt_members(n)?)?;
            t.compare_sets(
                "exhaustive_classification",
                &found,
                &expected,
                "vertex-transitive and 1-dimensional but not in the listed families",
                "listed family member missing among vertex-transitive 1-dimensional classes",
            );
        }
        for order in p.max_order + 1..=p.cayley_max_order {
            let members = Self::vt_members(order)?;
            for factors in abelian_groups(order) {
                let elements: Vec<Vec<usize>> = (1..order)
                    .map(|mut x| {
                        let mut e = vec![0; factors.len()];
                        for (slot, &f) in e.iter_mut().zip(&factors).rev() {
                            *slot = x % f;
                            x /= f;
                        }
                        e
                    })
                    .collect();
                for subset in 1u64..1 << (order - 1) {
                    let gens: Vec<Vec<usize>> = (0..order - 1)
                        .filter(|&i| subset >> i & 1 == 1)
                        .map(|i| elements[i].clone())
                        .collect();
                    let Ok(g) = crate::constructions::cayley(&factors, &gens) else {
                        continue;
                    };
                    if self.dim(&g)?.dim != 1 {
                        continue;
                    }
                    let mut hit = false;
                    for h in &members {
                        if is_isomorphic(&g, h)?.is_some() {
                            hit = true;
                            break;
                        }
                    }
                    t.check("cayley_converse", &g, hit, || {
                        format!("1-dimensional Cayley digraph of Z{factors:?} not in the listed families")
                    });
                }
            }
        }
        Ok(())
    }

    fn obs1(&self, t: &mut Tally) -> Result<()> {
        let mut graphs: Vec<(Digraph, usize)> = self
            .exhaustive(2)?
            .into_iter()
            .map(|c| (c.graph, c.dim))
            .collect();
        for f in self.families()? {
            let dim = self.dim(&f.graph)?.dim;
            graphs.push((f.graph, dim));
        }
        for (g, dim) in &graphs {
            let m = g.distances()?;
            let profiles = single_vertex_profiles(g)?;
            let per_vertex = profiles.iter().all(|p| {
                p.singleton_classes
                    == check_weakly_resolving(&m, &[p.vertex])
                        .map(|r| r.is_resolving())
                        .unwrap_or(false)
            });
            t.check("singleton_classes_iff_basis", g, per_vertex, || {
                "profile flag disagrees with the resolving check".into()
            });
            let any = profiles.iter().any(|p| p.singleton_classes);
            t.check("some_flag_iff_dimension_one", g, any == (*dim == 1), || {
                format!("flagged={any}, dim={dim}")
            });
        }
        Ok(())
    }

    fn wdt_chain(&self, t: &mut Tally) -> Result<()> {
        for c in self.exhaustive(2)? {
            let vt = is_vertex_transitive(&c.graph)?;
            let wdt = vt && is_weakly_distance_transitive(&c.graph)?;
            if vt && c.dim == 1 {
                t.check("vt_dim1_implies_wdt", &c.graph, wdt, || {
                    "not weakly distance-transitive".into()
                });
            }
            if wdt {
                t.check(
                    "wdt_implies_wdr",
                    &c.graph,
                    is_weakly_distance_regular(&c.graph)?.is_regular(),
                    || "not weakly distance-regular".into(),
                );
            }
        }
        for order in 2..=self.params.family_max_order.min(SEARCH_CAP) {
            for g in Self::vt_members(order)? {
                let wdt = is_weakly_distance_transitive(&g)?;
                t.check("family_wdt", &g, wdt, || {
                    "not weakly distance-transitive".into()
                });
                t.check(
                    "family_wdr",
                    &g,
                    is_weakly_distance_regular(&g)?.is_regular(),
                    || "not weakly distance-regular".into(),
                );
            }
        }
        for order in SEARCH_CAP + 1..=self.params.family_max_order {
            for _ in Self::vt_members(order)? {
                t.skip("family_wdt");
            }
        }
        Ok(())
    }

    fn type_bound(&self, t: &mut Tally) -> Result<()> {
        let mut graphs: Vec<(Digraph, usize)> = self
            .exhaustive(2)?
            .into_iter()
            .map(|c| (c.graph, c.dim))
            .collect();
        for f in self.families()? {
            let dim = self.dim(&f.graph)?.dim;
            graphs.push((f.graph, dim));
        }
        for (g, dim) in &graphs {
            let r = TypeBoundReport::evaluate(g, &*g.distances()?, *dim);
            let bad: Vec<String> = r
                .arcs
                .iter()
                .filter(|a| !a.ok)
                .map(|a| format!("{:?} of type (1,{})", a.arc, a.r))
                .collect();
            t.check("arc_type_bound", g, bad.is_empty(), || {
                format!("dim={dim} exceeds n-r for {}", bad.join(", "))
            });
        }
        Ok(())
    }

    fn lem12(&self, t: &mut Tally) -> Result<()> {
        let mut graphs: Vec<(Digraph, usize)> = self
            .exhaustive(2)?
            .into_iter()
            .filter(|c| c.dim + 2 == c.graph.order())
            .map(|c| (c.graph, c.dim))
            .collect();
        for n in 4..=self.params.family_max_order {
            for f in n2_families(n)?.into_iter().chain(graph_n2_families(n)?) {
                graphs.push((f.graph, n - 2));
            }
        }
        for (g, dim) in &graphs {
            let r = TypeBoundReport::evaluate(g, &*g.distances()?, *dim);
            t.check("types_one_or_two", g, r.near_complete_types_ok, || {
                "an arc of type (1,r) with r >= 3".into()
            });
        }
        Ok(())
    }

    fn gik(&self, t: &mut Tally) -> Result<()> {
        let max = self.params.gik_max;
        for i in 1..=2u8 {
            for tt in 1..=max {
                for s in 1..=max {
                    let g = g_blowup(i, tt, s);
                    let dim = self.dim(&g)?.dim;
                    t.check("dimension_formula", &g, dim == s + tt - 1, || {
                        format!("G{i}[K1,K{tt},K{s}]: dim={dim}, expected {}", s + tt - 1)
                    });
                }
            }
        }
        for tt in 1..=max {
            for s in 1..=max {
                let a = crate::products::lex_product(
                    &small_g(2)?,
                    &[complete(tt), complete(s), complete(1)],
                )?;
                let b = g_blowup(2, s, tt);
                if a.order() > SEARCH_CAP {
                    t.skip("reversal");
                    continue;
                }
                t.check(
                    "reversal",
                    &a,
                    is_isomorphic(&a.reverse(), &b)?.is_some(),
                    || format!("reverse of G2[K{tt},K{s},K1] is not G2[K1,K{s},K{tt}]"),
                );
            }
        }
        Ok(())
    }

    fn n2_classes(&self, n: usize, undirected: bool) -> Result<BTreeMap<Fingerprint, Digraph>> {
        Ok(self
            .classes(n)?
            .into_iter()
            .filter(|c| c.dim + 2 == n && c.graph.is_undirected() == undirected)
            .map(|c| (c.fingerprint, c.graph))
            .collect())
    }

    fn n2main(&self, t: &mut Tally) -> Result<()> {
        for n in 4..=self.params.max_order {
            let found = self.n2_classes(n, false)?;
            let families = n2_families(n)?;
            let expected = canon_set(families.iter().map(|f| &f.graph))?;
            t.compare_sets(
                "classification",
                &found,
                &expected,
                "non-undirected, dimension n-2, not in the listed families",
                "listed family member is not a non-undirected class of dimension n-2",
            );
        }
        for n in 4..=self.params.family_max_order {
            for f in n2_families(n)? {
                let dim = self.dim(&f.graph)?.dim;
                t.check(
                    "family_dimension",
                    &f.graph,
                    dim == n - 2 && !f.graph.is_undirected(),
                    || {
                        format!(
                            "{}: dim={dim}, undirected={}",
                            f.name,
                            f.graph.is_undirected()
                        )
                    },
                );
            }
        }
        Ok(())
    }

    fn graph_n2(&self, t: &mut Tally) -> Result<()> {
        for n in 4..=self.params.max_order {
            let found = self.n2_classes(n, true)?;
            let families = graph_n2_families(n)?;
            let expected = canon_set(families.iter().map(|f| &f.graph))?;
            t.compare_sets(
                "classification",
                &found,
                &expected,
                "connected graph of dimension n-2 not in the listed families",
                "listed family member is not a graph of dimension n-2",
            );
        }
        for n in 4..=self.params.family_max_order {
            for f in graph_n2_families(n)? {
                let dim = self.dim(&f.graph)?.dim;
                t.check(
                    "family_dimension",
                    &f.graph,
                    dim == n - 2 && f.graph.is_undirected(),
                    || format!("{}: dim={dim}", f.name),
                );
            }
        }
        Ok(())
    }

    fn embed(&self, t: &mut Tally) -> Result<()> {
        let [_, g1, _, _] = chord_fixtures();
        let mut cases: Vec<(Digraph, Vec<usize>)> = vec![
            (g1, vec![0]),
            (directed_cycle(5), vec![0]),
            (gamma(5, 2)?, vec![0]),
        ];
        for c in self.exhaustive(2)? {
            cases.push((c.graph, c.basis));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.params.seed);
        for _ in 0..self.params.random_instances {
            let n = rng.gen_range(2..=self.params.random_max_order);
            let p = rng.gen_range(0.2..0.7);
            let g = random_strongly_connected(n, p, &mut rng);
            let basis = self.dim(&g)?.basis;
            cases.push((g, basis));
        }
        for (g, basis) in &cases {
            match embed_into_gamma_bar(g, basis) {
                Ok(e) => {
                    // cross-check against the constructed digraph when it is small
                    let n_bar = (e.d as u64)
                        .checked_pow(2 * e.k as u32)
                        .map(|p| p + e.k as u64);
                    if n_bar.is_some_and(|n| n <= 400) {
                        let bar = gamma_bar(e.k, e.d as usize)?;
                        let labels = e.labels();
                        let ok = g.arcs().all(|(a, b)| bar.has_arc(labels[a], labels[b]));
                        t.check("constructed_arc_preservation", g, ok, || {
                            "image arc missing from the constructed digraph".into()
                        });
                    }
                    t.check("embedding", g, true, String::new);
                }
                Err(Error::EmbeddingFailure { from, to, case }) => {
                    t.check("embedding", g, false, || {
                        format!("arc ({from},{to}) not preserved, case {case}")
                    });
                }
                Err(e) => return Err(e),
            }
        }
        Ok(())
    }
}
