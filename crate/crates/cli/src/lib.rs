//! The `wdim` command line.
//!
//! [`run`] parses arguments, dispatches a subcommand and returns the process
//! exit code: 0 on success, 1 when a verification finds a counterexample,
//! 2 on usage or input errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use wdim::codec::{parse_digraph, write_digraph, ParseError};
use wdim::constructions::{
    chord_fixtures, gamma, gamma_bar, sharp_upper_example, small_g, standard, vt_family,
    StandardFamily,
};
use wdim::dimension::naive_weak_metric_dimension;
use wdim::enumerate::{classified_representatives, Limits};
use wdim::products::{disjoint_union, g_blowup, join, lex_product};
use wdim::verify::{verify, Solver, TheoremId, Verdict, VerificationReport, VerifyParams};
use wdim::{weak_metric_dimension, Digraph};

pub const EXIT_OK: i32 = 0;
pub const EXIT_COUNTEREXAMPLE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error(transparent)]
    Core(#[from] wdim::Error),
    #[error("{0}")]
    Usage(String),
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "wdim",
    version,
    about = "Weak metric dimension of strongly connected digraphs"
)]
pub struct Cli {
    /// Worker threads for parallel stages.
    #[arg(long, global = true, env = "WDIM_JOBS")]
    pub jobs: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Report wall_time_ms as 0 so reports are byte-comparable.
    #[arg(long, global = true)]
    pub no_timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Weak metric dimension and least basis of a digraph file.
    Dim(DimArgs),
    /// Write a constructed digraph.
    Construct(ConstructArgs),
    /// Union, join or lexicographic product of digraph files.
    Product(ProductArgs),
    /// Isomorphism classes of strongly connected digraphs of one order.
    Enumerate(EnumerateArgs),
    /// Run theorem checks.
    Verify(VerifyArgs),
    /// Order, size, diameter, girth, arc types and strong connectivity.
    Info(InfoArgs),
}

#[derive(Debug, Args)]
pub struct DimArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// List every basis.
    #[arg(long)]
    pub all_bases: bool,
    /// Use the unpruned all-subsets search.
    #[arg(long)]
    pub naive: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Gamma,
    GammaBar,
    SharpUpper,
    Complete,
    Null,
    Cycle,
    DirectedPath,
    UndirectedPath,
    Vt,
    Small,
    Chord,
    Blowup,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long)]
    pub s: Option<usize>,
    /// Family member index for `vt` (1-4), `small` (1-4), `chord` (0-3) and `blowup` (1-2).
    #[arg(long)]
    pub which: Option<u8>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProductOp {
    Union,
    Join,
    Lex,
}

#[derive(Debug, Args)]
pub struct ProductArgs {
    #[arg(long, value_enum)]
    pub op: ProductOp,
    /// Left operand, or the outer digraph for `lex`.
    #[arg(long)]
    pub left: PathBuf,
    /// Right operands; for `lex`, one per outer vertex in order.
    #[arg(long, num_args = 1..)]
    pub right: Vec<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub order: usize,
    /// Keep only classes of this dimension.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Keep only undirected graphs.
    #[arg(long)]
    pub undirected: bool,
    #[arg(long)]
    pub allow_order_six: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Theorem id, or `all`.
    #[arg(long)]
    pub theorem: String,
    #[arg(long)]
    pub max_order: Option<usize>,
    #[arg(long)]
    pub family_max_order: Option<usize>,
    #[arg(long)]
    pub ekd_max_order: Option<usize>,
    #[arg(long)]
    pub cayley_max_order: Option<usize>,
    #[arg(long)]
    pub gik_max: Option<usize>,
    #[arg(long)]
    pub random_instances: Option<usize>,
    #[arg(long)]
    pub random_max_order: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub naive: bool,
    #[arg(long)]
    pub allow_order_six: bool,
}

#[derive(Debug, Args)]
pub struct InfoArgs {
    #[arg(long)]
    pub input: PathBuf,
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cli.jobs {
        if j == 0 {
            return Err(CliError::Usage("--jobs must be positive".into()));
        }
        builder = builder.num_threads(j);
    }
    let pool = builder.build()?;
    let text = pool.install(|| dispatch(cli))?;
    out.write_all(text.0.as_bytes())
        .map_err(|source| CliError::Io {
            path: PathBuf::from("<stdout>"),
            source,
        })?;
    Ok(text.1)
}

fn read_input(path: &Path) -> Result<Digraph, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_digraph(&text).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

fn emit_digraph(g: &Digraph, dest: &Option<PathBuf>, format: Format) -> Result<String, CliError> {
    let text = write_digraph(g);
    match dest {
        Some(path) => {
            fs::write(path, &text).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            Ok(match format {
                Format::Text => format!(
                    "wrote {} (n={}, m={})\n",
                    path.display(),
                    g.order(),
                    g.arc_count()
                ),
                Format::Json => {
                    json_line(&json!({"path": path, "n": g.order(), "m": g.arc_count()}))
                }
            })
        }
        None => Ok(match format {
            Format::Text => text,
            Format::Json => json_line(&json!({"n": g.order(), "arcs": g.arc_list()})),
        }),
    }
}

fn json_line<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn need<T: Copy>(value: Option<T>, flag: &str, family: Family) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("--{flag} is required for {family:?}")))
}

fn construct(a: &ConstructArgs) -> Result<Digraph, CliError> {
    let f = a.family;
    let std_family =
        |family| -> Result<Digraph, CliError> { Ok(standard(family, need(a.n, "n", f)?)?) };
    Ok(match f {
        Family::Gamma => gamma(need(a.n, "n", f)?, need(a.d, "d", f)?)?,
        Family::GammaBar => gamma_bar(need(a.k, "k", f)?, need(a.d, "d", f)?)?,
        Family::SharpUpper => sharp_upper_example(need(a.n, "n", f)?, need(a.d, "d", f)?)?,
        Family::Complete => std_family(StandardFamily::Complete)?,
        Family::Null => std_family(StandardFamily::Null)?,
        Family::Cycle => std_family(StandardFamily::DirectedCycle)?,
        Family::DirectedPath => std_family(StandardFamily::DirectedPath)?,
        Family::UndirectedPath => std_family(StandardFamily::UndirectedPath)?,
        Family::Vt => vt_family(need(a.which, "which", f)?, need(a.n, "n", f)?)?,
        Family::Small => small_g(need(a.which, "which", f)?)?,
        Family::Chord => {
            let w = need(a.which, "which", f)? as usize;
            chord_fixtures()
                .into_iter()
                .nth(w)
                .ok_or_else(|| CliError::Usage(format!("--which {w} out of range 0..=3")))?
        }
        Family::Blowup => {
            let w = need(a.which, "which", f)?;
            if !(1..=2).contains(&w) {
                return Err(CliError::Usage("--which must be 1 or 2 for blowup".into()));
            }
            let (t, s) = (need(a.t, "t", f)?, need(a.s, "s", f)?);
            if t == 0 || s == 0 {
                return Err(CliError::Usage("--t and --s must be positive".into()));
            }
            g_blowup(w, t, s)
        }
    })
}

fn dispatch(cli: &Cli) -> Result<(String, i32), CliError> {
    let format = cli.format;
    match &cli.command {
        Command::Dim(a) => {
            let g = read_input(&a.input)?;
            let mut r = if a.naive {
                naive_weak_metric_dimension(&g)?
            } else {
                weak_metric_dimension(&g, a.all_bases)?
            };
            if !a.all_bases {
                r.all_bases = None;
            }
            let text = match format {
                Format::Text => {
                    let mut s = format!("dim={} basis={:?}\n", r.dim, r.basis);
                    if let Some(all) = &r.all_bases {
                        for b in all {
                            s.push_str(&format!("basis {b:?}\n"));
                        }
                    }
                    s
                }
                Format::Json => json_line(&r),
            };
            Ok((text, EXIT_OK))
        }
        Command::Construct(a) => {
            let g = construct(a)?;
            Ok((emit_digraph(&g, &a.out, format)?, EXIT_OK))
        }
        Command::Product(a) => {
            let left = read_input(&a.left)?;
            let right = a
                .right
                .iter()
                .map(|p| read_input(p))
                .collect::<Result<Vec<_>, _>>()?;
            let g = match a.op {
                ProductOp::Union | ProductOp::Join => {
                    let [r] = right.as_slice() else {
                        return Err(CliError::Usage(
                            "union and join take exactly one --right".into(),
                        ));
                    };
                    if a.op == ProductOp::Union {
                        disjoint_union(&left, r)
                    } else {
                        join(&left, r)
                    }
                }
                ProductOp::Lex => lex_product(&left, &right)?,
            };
            Ok((emit_digraph(&g, &a.out, format)?, EXIT_OK))
        }
        Command::Enumerate(a) => {
            let limits = Limits {
                allow_order_six: a.allow_order_six,
            };
            let classes = classified_representatives(a.order, limits)?;
            let kept: Vec<_> = classes
                .iter()
                .filter(|c| a.dim.is_none_or(|d| c.dim == d))
                .filter(|c| !a.undirected || c.graph.is_undirected())
                .collect();
            let text = match format {
                Format::Text => {
                    let mut s = String::new();
                    for c in &kept {
                        s.push_str(&format!(
                            "{} m={} dim={} basis={:?}\n",
                            c.fingerprint,
                            c.graph.arc_count(),
                            c.dim,
                            c.basis
                        ));
                    }
                    s.push_str(&format!("classes={}\n", kept.len()));
                    s
                }
                Format::Json => {
                    let items: Vec<_> = kept
                        .iter()
                        .map(|c| {
                            json!({
                                "fingerprint": c.fingerprint.to_string(),
                                "arcs": c.graph.arc_list(),
                                "dim": c.dim,
                                "basis": c.basis,
                            })
                        })
                        .collect();
                    json_line(&json!({"order": a.order, "classes": items}))
                }
            };
            Ok((text, EXIT_OK))
        }
        Command::Verify(a) => {
            let theorems: Vec<TheoremId> = if a.theorem == "all" {
                TheoremId::ALL.to_vec()
            } else {
                vec![a.theorem.parse::<TheoremId>()?]
            };
            let params = verify_params(a);
            let mut reports = Vec::new();
            for t in theorems {
                let mut r = verify(t, &params)?;
                if cli.no_timing {
                    r.wall_time_ms = 0;
                }
                reports.push(r);
            }
            let text = match format {
                Format::Json if reports.len() == 1 => format!("{}\n", reports[0].to_json()),
                Format::Json => json_line(&reports),
                Format::Text => reports.iter().map(report_text).collect(),
            };
            Ok((text, exit_code_for(&reports)))
        }
        Command::Info(a) => {
            let g = read_input(&a.input)?;
            Ok((info(&g, format)?, EXIT_OK))
        }
    }
}

/// 1 when any report carries a counterexample, else 0.
pub fn exit_code_for(reports: &[VerificationReport]) -> i32 {
    if reports.iter().any(|r| r.verdict == Verdict::Counterexample) {
        EXIT_COUNTEREXAMPLE
    } else {
        EXIT_OK
    }
}

fn verify_params(a: &VerifyArgs) -> VerifyParams {
    let d = VerifyParams::default();
    VerifyParams {
        max_order: a.max_order.unwrap_or(d.max_order),
        family_max_order: a.family_max_order.unwrap_or(d.family_max_order),
        ekd_max_order: a.ekd_max_order.unwrap_or(d.ekd_max_order),
        cayley_max_order: a.cayley_max_order.unwrap_or(d.cayley_max_order),
        gik_max: a.gik_max.unwrap_or(d.gik_max),
        random_instances: a.random_instances.unwrap_or(d.random_instances),
        random_max_order: a.random_max_order.unwrap_or(d.random_max_order),
        seed: a.seed.unwrap_or(d.seed),
        solver: if a.naive {
            Solver::Naive
        } else {
            Solver::Pruned
        },
        allow_order_six: a.allow_order_six,
    }
}

fn report_text(r: &VerificationReport) -> String {
    let verdict = serde_json::to_value(r.verdict).expect("verdict serializes");
    let mut s = format!(
        "{}: {} instances={} time_ms={}\n",
        r.theorem,
        verdict.as_str().unwrap_or_default(),
        r.stats.instances,
        r.wall_time_ms
    );
    for (check, count) in &r.stats.by_check {
        s.push_str(&format!("  {check}: {count}\n"));
    }
    for (check, count) in &r.stats.skipped {
        s.push_str(&format!("  {check}: {count} skipped\n"));
    }
    for c in &r.counterexamples {
        s.push_str(&format!(
            "  counterexample {} {}\n",
            c.fingerprint, c.violation
        ));
    }
    s
}

fn info(g: &Digraph, format: Format) -> Result<String, CliError> {
    let sc = g.is_strongly_connected();
    let (diameter, girth, types) = if sc {
        let m = g.distances()?;
        let mut types = std::collections::BTreeMap::<u32, usize>::new();
        for (u, v) in g.arcs() {
            *types.entry(m.dist(v, u)).or_default() += 1;
        }
        (Some(m.diameter()), m.girth(), Some(types))
    } else {
        (None, None, None)
    };
    Ok(match format {
        Format::Text => {
            let mut s = format!(
                "n={}\nm={}\nstrongly_connected={sc}\n",
                g.order(),
                g.arc_count()
            );
            let opt = |v: Option<u32>| v.map_or_else(|| "none".to_string(), |x| x.to_string());
            s.push_str(&format!(
                "diameter={}\ngirth={}\n",
                opt(diameter),
                opt(girth)
            ));
            if let Some(types) = &types {
                let parts: Vec<String> =
                    types.iter().map(|(r, c)| format!("(1,{r}):{c}")).collect();
                s.push_str(&format!("arc_types={}\n", parts.join(" ")));
            }
            s
        }
        Format::Json => {
            let types = types.map(|t| {
                t.into_iter()
                    .map(|(r, c)| (format!("(1,{r})"), c))
                    .collect::<std::collections::BTreeMap<_, _>>()
            });
            json_line(&json!({
                "n": g.order(),
                "m": g.arc_count(),
                "strongly_connected": sc,
                "diameter": diameter,
                "girth": girth,
                "arc_types": types,
            }))
        }
    })
}
