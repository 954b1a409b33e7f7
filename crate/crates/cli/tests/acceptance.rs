//! Acceptance suite: fifteen criteria, one PASS/FAIL line each.
//!
//! Run with `cargo test -p wdim-cli --test acceptance -- --nocapture` to see
//! the per-criterion lines.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wdim::codec::{parse_digraph, write_digraph};
use wdim::constructions::{
    chord_fixtures, complete, count_v_arcs, directed_cycle, extremal_arc, gamma, gamma_bar,
    sharp_upper_example, small_g, vt_family,
};
use wdim::dimension::{check_weakly_resolving, forced_pairs};
use wdim::enumerate::{
    classified_representatives, classify_by_dimension, mask_to_digraph, random_strongly_connected,
    Limits,
};
use wdim::products::{g_blowup, graph_n2_families, n2_families};
use wdim::symmetry::{
    canonical_form, embed_into_gamma_bar, is_isomorphic, is_vertex_transitive,
    is_weakly_distance_regular,
};
use wdim::verify::{verify, TheoremId, Verdict, VerifyParams};
use wdim::{weak_metric_dimension, Digraph};

type Outcome = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

const INF: u32 = u32::MAX / 4;

/// All-pairs distances by Floyd–Warshall on the adjacency matrix.
fn floyd(g: &Digraph) -> Vec<Vec<u32>> {
    let n = g.order();
    let mut d = vec![vec![INF; n]; n];
    for (x, row) in d.iter_mut().enumerate() {
        row[x] = 0;
    }
    for (u, v) in g.arcs() {
        d[u][v] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

fn oracle_diameter(g: &Digraph) -> u32 {
    floyd(g).into_iter().flatten().max().unwrap()
}

/// Least `k` and the lexicographically least `k`-set whose two-way distance
/// vectors are distinct on every vertex, by trying all subsets.
fn oracle_dimension(g: &Digraph) -> (usize, Vec<usize>) {
    let d = floyd(g);
    let n = g.order();
    let mut subsets: Vec<Vec<usize>> = (1u32..1 << n)
        .map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect())
        .collect();
    subsets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    for s in subsets {
        let sigs: BTreeSet<Vec<(u32, u32)>> = (0..n)
            .map(|v| s.iter().map(|&z| (d[z][v], d[v][z])).collect())
            .collect();
        if sigs.len() == n {
            return (s.len(), s);
        }
    }
    unreachable!()
}

fn dim(g: &Digraph) -> usize {
    weak_metric_dimension(g, false).unwrap().dim
}

fn f(n: u64, d: u64) -> u64 {
    (1..).find(|&k| k + d.pow(2 * k as u32) >= n).unwrap()
}

fn mu(d: u64) -> u64 {
    (d * d + 3 * d - 2) / 2
}

fn closed_arc_bound(k: u64, d: u64) -> i128 {
    let (k, d) = (k as i128, d as i128);
    let m = mu(d as u64) as i128;
    m.pow(2 * k as u32) + (2 * k - d) * d.pow(2 * k as u32 - 1) + k * k - k
}

fn expect_verified(t: TheoremId, p: &VerifyParams) -> Outcome {
    let r = verify(t, p).map_err(|e| e.to_string())?;
    ensure!(
        r.verdict == Verdict::Verified,
        "{t}: verdict {:?}, counterexamples {:?}, skipped {:?}",
        r.verdict,
        r.counterexamples.iter().take(3).collect::<Vec<_>>(),
        r.stats.skipped
    );
    ensure!(r.stats.instances > 0, "{t}: no instances");
    Ok(())
}

fn c1_complete() -> Outcome {
    for n in 2..=6 {
        ensure!(dim(&complete(n)) == n - 1, "dim(K{n}) != {}", n - 1);
        ensure!(
            oracle_dimension(&complete(n)).0 == n - 1,
            "oracle dim(K{n})"
        );
    }
    for n in 2..=5 {
        let top: Vec<_> = classified_representatives(n, Limits::default())
            .unwrap()
            .iter()
            .filter(|c| c.dim == n - 1)
            .map(|c| c.graph.clone())
            .collect();
        ensure!(
            top.len() == 1 && top[0].is_complete(),
            "order {n}: {} classes of dim n-1",
            top.len()
        );
    }
    expect_verified(TheoremId::Complete, &VerifyParams::default())
}

fn c2_dimension_bounds() -> Outcome {
    let p = VerifyParams {
        max_order: 5,
        family_max_order: 17,
        ..VerifyParams::default()
    };
    let r = verify(TheoremId::Nd, &p).map_err(|e| e.to_string())?;
    ensure!(
        r.verdict == Verdict::Verified,
        "{} violations",
        r.counterexamples.len()
    );
    ensure!(
        r.stats.instances >= 1 + 5 + 83 + 5048,
        "only {} instances",
        r.stats.instances
    );
    Ok(())
}

fn c3_sharp_upper() -> Outcome {
    for d in 2..=8 {
        for n in d + 1..=9 {
            let g = sharp_upper_example(n, d).map_err(|e| e.to_string())?;
            let (k, _) = oracle_dimension(&g);
            ensure!(
                dim(&g) == n - d && k == n - d,
                "(n,d)=({n},{d}): dim {} oracle {k}",
                dim(&g)
            );
            ensure!(oracle_diameter(&g) == d as u32, "(n,d)=({n},{d}): diameter");
        }
    }
    Ok(())
}

fn c4_gamma_dimensions() -> Outcome {
    for d in 2..=4 {
        for n in d + 1..=d * d + 1 {
            let g = gamma(n, d).unwrap();
            ensure!(dim(&g) == 1, "dim(gamma({n},{d})) = {}", dim(&g));
            ensure!(oracle_diameter(&g) == d as u32, "diameter(gamma({n},{d}))");
        }
    }
    for (d, max_n) in [(2usize, 18usize), (3, 12)] {
        for n in d + 1..=max_n {
            let g = gamma(n, d).unwrap();
            let want = f(n as u64, d as u64) as usize;
            ensure!(
                dim(&g) == want,
                "dim(gamma({n},{d})) = {} != f = {want}",
                dim(&g)
            );
            if n <= 12 {
                ensure!(oracle_dimension(&g).0 == want, "oracle dim(gamma({n},{d}))");
            }
        }
    }
    Ok(())
}

fn c5_arc_count_identity() -> Outcome {
    for (k, d) in [(1u64, 1u64), (1, 2), (1, 3), (1, 4), (2, 2), (2, 3)] {
        let n = d.pow(2 * k as u32) + k;
        let g = gamma(n as usize, d as usize).unwrap();
        let counted = count_v_arcs(&g, k as usize) as u64;
        let closed = mu(d).pow(2 * k as u32) - d.pow(2 * k as u32);
        ensure!(
            counted == closed,
            "(k,d)=({k},{d}): counted {counted}, closed {closed}"
        );
    }
    ensure!(
        count_v_arcs(&gamma(5, 2).unwrap(), 1) == 12,
        "e(1,2) on gamma(5,2)"
    );
    Ok(())
}

fn c6_arc_bounds() -> Outcome {
    expect_verified(TheoremId::Ag, &VerifyParams::default())?;
    for n in 2..=5 {
        for c in classified_representatives(n, Limits::default())
            .unwrap()
            .iter()
        {
            let g = &c.graph;
            let d = oracle_diameter(g) as u64;
            let k = c.dim as u64;
            let arcs = g.arc_count() as i128;
            ensure!(
                arcs >= (k + d) as i128 && arcs <= closed_arc_bound(k, d),
                "bounds fail on {}",
                c.fingerprint
            );
            let cycle = (0..n).all(|v| g.out_degree(v) == 1);
            ensure!(
                (arcs == (k + d) as i128) == cycle,
                "lower equality mismatch on {}",
                c.fingerprint
            );
        }
    }
    ensure!(gamma(5, 2).unwrap().arc_count() == 16, "|A(gamma(5,2))|");
    let mut witnesses = Vec::new();
    for d in 1..=3u64 {
        witnesses.push((gamma((d * d + 1) as usize, d as usize).unwrap(), 1u64, d));
    }
    for k in 1..=3u64 {
        witnesses.push((complete(k as usize + 1), k, 1));
    }
    for k in 1..=2u64 {
        witnesses.push((gamma_bar(k as usize, 2).unwrap(), k, 2));
    }
    for (g, k, d) in witnesses {
        ensure!(
            dim(&g) as u64 == k,
            "witness order {}: dim {} != {k}",
            g.order(),
            dim(&g)
        );
        ensure!(
            oracle_diameter(&g) as u64 == d,
            "witness order {}: diameter",
            g.order()
        );
        ensure!(
            g.arc_count() as i128 == closed_arc_bound(k, d),
            "witness order {}: {} arcs vs bound {}",
            g.order(),
            g.arc_count(),
            closed_arc_bound(k, d)
        );
    }
    Ok(())
}

fn has_four_cycle(g: &Digraph) -> bool {
    let n = g.order();
    (0..n).any(|a| {
        (0..n).any(|b| {
            (0..n).any(|c| {
                (0..n).any(|d| {
                    BTreeSet::from([a, b, c, d]).len() == 4
                        && g.has_arc(a, b)
                        && g.has_arc(b, c)
                        && g.has_arc(c, d)
                        && g.has_arc(d, a)
                })
            })
        })
    })
}

fn c7_chord_fixtures() -> Outcome {
    let [cycle, g1, g2, g3] = chord_fixtures();
    ensure!(
        cycle.arc_list() == vec![(0, 1), (1, 2), (2, 3), (3, 0)],
        "base cycle"
    );
    let diameter = oracle_diameter(&cycle);
    for (i, g) in [&g1, &g2, &g3].into_iter().enumerate() {
        let m = g.distances().unwrap();
        ensure!(
            check_weakly_resolving(&m, &[0]).unwrap().is_resolving(),
            "digraph {}: {{0}} not resolving",
            i + 1
        );
        ensure!(
            oracle_dimension(g) == (1, vec![0]),
            "digraph {}: {{0}} not a basis",
            i + 1
        );
        ensure!(
            oracle_diameter(g) == diameter,
            "digraph {}: diameter",
            i + 1
        );
        ensure!(
            m.girth() == Some(3),
            "digraph {}: girth {:?}",
            i + 1,
            m.girth()
        );
    }
    ensure!(
        is_isomorphic(&g1, &g3).unwrap().is_none(),
        "first and third isomorphic"
    );
    ensure!(
        has_four_cycle(&g1) && !has_four_cycle(&g3),
        "4-cycle pattern"
    );
    expect_verified(TheoremId::Fig1, &VerifyParams::default())
}

fn c8_vertex_transitive() -> Outcome {
    for w in 1..=4u8 {
        for n in 2..=12 {
            let Ok(g) = vt_family(w, n) else { continue };
            if g.order() > 12 {
                continue;
            }
            ensure!(
                is_vertex_transitive(&g).unwrap(),
                "vt{w}({n}) not vertex-transitive"
            );
            ensure!(dim(&g) == 1, "vt{w}({n}) dim {}", dim(&g));
            ensure!(
                is_weakly_distance_regular(&g).unwrap().is_thin(),
                "vt{w}({n}) not thin"
            );
        }
    }
    for n in 2..=5 {
        let found: BTreeSet<_> = classified_representatives(n, Limits::default())
            .unwrap()
            .iter()
            .filter(|c| c.dim == 1 && is_vertex_transitive(&c.graph).unwrap())
            .map(|c| c.fingerprint)
            .collect();
        let mut expected = BTreeSet::new();
        for w in 1..=4u8 {
            for m in 2..=n {
                if let Ok(g) = vt_family(w, m) {
                    if g.order() == n {
                        expected.insert(canonical_form(&g).unwrap());
                    }
                }
            }
        }
        ensure!(
            found == expected,
            "order {n}: {} found vs {} listed",
            found.len(),
            expected.len()
        );
    }
    expect_verified(TheoremId::Vt1dim, &VerifyParams::default())
}

fn c9_order_three() -> Outcome {
    let by = classify_by_dimension(3).unwrap();
    ensure!(by.get(&1).map_or(0, Vec::len) == 4, "dim-1 classes");
    ensure!(by.get(&2).map_or(0, Vec::len) == 1, "dim-2 classes");
    ensure!(
        by.keys().copied().collect::<Vec<_>>() == vec![1, 2],
        "other dimensions present"
    );
    for w in [1, 2] {
        let g = small_g(w).unwrap();
        let hit = by[&1]
            .iter()
            .any(|r| is_isomorphic(&r.graph, &g).unwrap().is_some());
        ensure!(hit, "G{w} missing among dim-1 classes");
    }
    Ok(())
}

fn c10_n2_classification() -> Outcome {
    for n in [4, 5] {
        let found: BTreeSet<_> = classified_representatives(n, Limits::default())
            .unwrap()
            .iter()
            .filter(|c| c.dim == n - 2 && !c.graph.is_undirected())
            .map(|c| c.fingerprint)
            .collect();
        let listed: BTreeSet<_> = n2_families(n)
            .unwrap()
            .iter()
            .map(|f| canonical_form(&f.graph).unwrap())
            .collect();
        ensure!(
            found == listed,
            "n={n}: {} found vs {} listed",
            found.len(),
            listed.len()
        );
    }
    for i in 1..=2 {
        for t in 1..=3 {
            for s in 1..=3 {
                let g = g_blowup(i, t, s);
                ensure!(dim(&g) == s + t - 1, "G{i}[K1,K{t},K{s}]: dim {}", dim(&g));
            }
        }
    }
    expect_verified(TheoremId::N2main, &VerifyParams::default())?;
    expect_verified(TheoremId::Gik, &VerifyParams::default())
}

fn c11_graph_classification() -> Outcome {
    for n in [4, 5] {
        let found: BTreeSet<_> = classified_representatives(n, Limits::default())
            .unwrap()
            .iter()
            .filter(|c| c.dim == n - 2 && c.graph.is_undirected())
            .map(|c| c.fingerprint)
            .collect();
        let listed: BTreeSet<_> = graph_n2_families(n)
            .unwrap()
            .iter()
            .map(|f| canonical_form(&f.graph).unwrap())
            .collect();
        ensure!(
            found == listed,
            "n={n}: {} found vs {} listed",
            found.len(),
            listed.len()
        );
    }
    expect_verified(TheoremId::GraphN2, &VerifyParams::default())
}

fn c12_arc_types() -> Outcome {
    for n in 2..=4 {
        for c in classified_representatives(n, Limits::default())
            .unwrap()
            .iter()
        {
            let d = floyd(&c.graph);
            for (x, y) in c.graph.arcs() {
                let r = d[y][x] as usize;
                ensure!(
                    c.dim + r <= n,
                    "{}: arc ({x},{y}) type (1,{r}) with dim {}",
                    c.fingerprint,
                    c.dim
                );
                if c.dim + 2 == n {
                    ensure!(r <= 2, "{}: dim n-2 with arc type (1,{r})", c.fingerprint);
                }
            }
        }
    }
    let p = VerifyParams {
        max_order: 4,
        ..VerifyParams::default()
    };
    expect_verified(TheoremId::TypeBound, &p)?;
    expect_verified(TheoremId::Lem12, &p)
}

fn check_embedding(g: &Digraph, basis: &[usize]) -> Outcome {
    let e = embed_into_gamma_bar(g, basis).map_err(|e| e.to_string())?;
    let labels = e.labels();
    ensure!(
        labels.iter().collect::<BTreeSet<_>>().len() == g.order(),
        "not injective"
    );
    for (u, v) in g.arcs() {
        ensure!(
            extremal_arc(&e.image[u], &e.image[v], true),
            "arc ({u},{v}) not preserved"
        );
    }
    Ok(())
}

fn c13_embedding() -> Outcome {
    let [_, g1, _, _] = chord_fixtures();
    for (name, g) in [
        ("first", g1),
        ("C5", directed_cycle(5)),
        ("gamma(5,2)", gamma(5, 2).unwrap()),
    ] {
        check_embedding(&g, &[0]).map_err(|e| format!("{name}: {e}"))?;
    }
    let g = gamma(5, 2).unwrap();
    ensure!(
        embed_into_gamma_bar(&g, &[0]).unwrap().labels() == vec![0, 1, 2, 3, 4],
        "gamma(5,2) not fixed"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for i in 0..50 {
        let n = rng.gen_range(2..=6);
        let g = random_strongly_connected(n, rng.gen_range(0.2..0.7), &mut rng);
        let basis = weak_metric_dimension(&g, false).unwrap().basis;
        check_embedding(&g, &basis).map_err(|e| format!("random #{i}: {e}"))?;
    }
    Ok(())
}

fn c14_oracle_equivalence() -> Outcome {
    let mut checked = 0;
    for n in 2..=4usize {
        for mask in 0u64..1 << (n * (n - 1)) {
            let g = mask_to_digraph(n, mask);
            if !g.is_strongly_connected() {
                continue;
            }
            let fast = weak_metric_dimension(&g, false).unwrap();
            let slow = oracle_dimension(&g);
            ensure!(
                (fast.dim, fast.basis.clone()) == slow,
                "order {n} mask {mask}: {:?} vs {slow:?}",
                fast
            );
            checked += 1;
        }
    }
    ensure!(checked == 1 + 18 + 1606, "{checked} labeled digraphs");
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for i in 0..100 {
        let n = rng.gen_range(5..=7);
        let g = random_strongly_connected(n, rng.gen_range(0.15..0.8), &mut rng);
        let fast = weak_metric_dimension(&g, false).unwrap();
        let slow = oracle_dimension(&g);
        ensure!(
            (fast.dim, fast.basis.clone()) == slow,
            "random #{i}: {:?} vs {slow:?}",
            fast
        );
        ensure!(
            forced_pairs(&g.distances().unwrap()).len() <= n * (n - 1) / 2,
            "forced pairs"
        );
    }
    Ok(())
}

fn c15_round_trip() -> Outcome {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let mut count = 0;
    for entry in fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_none_or(|e| e != "dg") {
            continue;
        }
        let text = fs::read_to_string(&path).unwrap();
        let g = parse_digraph(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        let written = write_digraph(&g);
        ensure!(
            parse_digraph(&written).unwrap() == g,
            "{}: labeling changed",
            path.display()
        );
        ensure!(
            write_digraph(&parse_digraph(&written).unwrap()) == written,
            "{}: not idempotent",
            path.display()
        );
        if !path.ends_with("unsorted.dg") {
            ensure!(written == text, "{}: not byte-identical", path.display());
        }
        count += 1;
    }
    ensure!(count >= 10, "only {count} golden files");
    let run = |jobs: &str| {
        Command::new(env!("CARGO_BIN_EXE_wdim"))
            .args([
                "verify",
                "--theorem",
                "all",
                "--format",
                "json",
                "--no-timing",
                "--jobs",
                jobs,
            ])
            .output()
            .unwrap()
    };
    let (one, four) = (run("1"), run("4"));
    ensure!(
        one.status.code() == Some(0),
        "verify all exited {:?}",
        one.status.code()
    );
    ensure!(
        one.stdout == four.stdout,
        "reports differ between --jobs 1 and --jobs 4"
    );
    ensure!(!one.stdout.is_empty(), "empty report");
    Ok(())
}

#[test]
fn acceptance() {
    type Criterion = (&'static str, u64, fn() -> Outcome);
    let criteria: [Criterion; 15] = [
        ("complete digraph characterization", 30, c1_complete),
        (
            "dimension bounds, exhaustive and families to 17",
            120,
            c2_dimension_bounds,
        ),
        ("sharp upper bound examples", 5, c3_sharp_upper),
        ("extremal digraph dimensions", 60, c4_gamma_dimensions),
        ("v-to-v arc count identity", 10, c5_arc_count_identity),
        ("arc bounds and equality cases", 180, c6_arc_bounds),
        ("four-vertex fixtures", 1, c7_chord_fixtures),
        (
            "vertex-transitive 1-dimensional classification",
            120,
            c8_vertex_transitive,
        ),
        ("order-three census", 1, c9_order_three),
        (
            "dimension n-2 digraph classification",
            300,
            c10_n2_classification,
        ),
        (
            "dimension n-2 graph classification",
            60,
            c11_graph_classification,
        ),
        ("arc type bounds", 10, c12_arc_types),
        ("embedding into the extremal digraph", 60, c13_embedding),
        (
            "pruned solver equals naive oracle",
            120,
            c14_oracle_equivalence,
        ),
        (
            "codec round trip and byte-stable reports",
            5,
            c15_round_trip,
        ),
    ];
    let mut failures = Vec::new();
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let timely = elapsed < Duration::from_secs(*limit);
        let pass = outcome.is_ok() && timely;
        let detail = match (&outcome, timely) {
            (Err(e), _) => format!(" :: {e}"),
            (Ok(()), false) => format!(" :: exceeded {limit}s"),
            _ => String::new(),
        };
        println!(
            "criterion {:>2} {}: {} ({:.2}s, limit {limit}s){detail}",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            name,
            elapsed.as_secs_f64()
        );
        if !pass {
            failures.push(i + 1);
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
