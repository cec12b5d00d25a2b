//! `hsub`: heaviest-subgraph search from the command line.

mod bench;
mod report;

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hsub::chromatic::{self, ColorReduction};
use hsub::dominance::{self, DominanceParams, PointSet};
use hsub::edgemax::{self, ColorTrialPlan};
use hsub::extmat::{format_count_matrix, format_matrix, parse_matrices, CountMatrix, ExtMatrix};
use hsub::market::{self, Preference, PreferenceSpec};
use hsub::oracle::{self, Oracle, Weighting};
use hsub::vertexmax::{self, AllPairsBest, Pattern};
use hsub::witness::plan_parameters;
use hsub::{parse_graph, Error, Graph, SubgraphKind, SubgraphResult};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use report::{join, result_line, trim_float, RunReport};

const EXIT_FOUND: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_ABSENT: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "hsub", version, about = "Maximum-weight subgraph search")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Top,
}

#[derive(Subcommand, Debug, Clone)]
enum Top {
    #[command(flatten)]
    Fast(Command),
    /// Runs a subcommand with its brute-force oracle.
    Oracle {
        #[command(subcommand)]
        cmd: Command,
    },
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Input file; standard input when absent or `-`.
    #[arg(short, long, global = true)]
    input: Option<PathBuf>,
    /// Seed for every randomized routine.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Matrix multiplication exponent used by the planners.
    #[arg(long, global = true, default_value_t = 3.0)]
    omega: f64,
    /// Worker threads for the parallel kernels.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Run the brute-force oracle instead of the fast path.
    #[arg(long, global = true)]
    oracle: bool,
    /// Size cap for oracle enumerations.
    #[arg(long, global = true, default_value_t = oracle::DEFAULT_CAP)]
    oracle_cap: usize,
    /// Search for the minimum weight instead (weights are negated).
    #[arg(long, global = true)]
    minimize: bool,
}

#[derive(Subcommand, Debug, Clone)]
enum Command {
    /// Heaviest triangle by vertex weight.
    Triangle {
        #[arg(long, value_enum, default_value_t = TriangleMode::Det)]
        mode: TriangleMode,
    },
    /// Heaviest K_h.
    Clique {
        #[arg(long)]
        h: usize,
        /// Report the heaviest K_h through every vertex pair.
        #[arg(long)]
        all_pairs: bool,
        /// Weigh vertices or the induced edges.
        #[arg(long, value_enum, default_value_t = By::Vertex)]
        by: By,
    },
    /// Heaviest induced copy of a pattern graph, by vertex weight.
    Pattern {
        #[arg(long)]
        pattern_file: PathBuf,
        #[arg(long)]
        all_pairs: bool,
    },
    /// Heaviest K_{2,2}.
    K22,
    /// Heaviest K_{2,k}.
    K2k {
        #[arg(short, long)]
        k: usize,
    },
    /// K_h edge-covering number.
    Beta {
        #[arg(long)]
        h: usize,
    },
    /// Heaviest simple k-cycle by edge weight.
    Cycle {
        #[arg(short, long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = CycleMode::Sparse)]
        mode: CycleMode,
        /// Number of random colorings; derived from --delta when absent.
        #[arg(long)]
        trials: Option<usize>,
        /// Failure probability bound.
        #[arg(long, default_value_t = 0.01)]
        delta: f64,
    },
    /// k vertices with the heaviest induced edge weight.
    DenseSub {
        #[arg(short, long)]
        k: usize,
    },
    /// A K_h whose edges have pairwise distinct colors.
    Rainbow {
        #[arg(long)]
        h: usize,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 0.01)]
        delta: f64,
    },
    /// A K_h whose edges share one color.
    Mono {
        #[arg(long)]
        h: usize,
    },
    /// Buyer-seller stable matching.
    Market {
        /// count | surplus | price | expr:<expression>
        #[arg(long, default_value = "count")]
        pref: String,
    },
    /// Dominance matrix of two point sets (a third matrix gives weights).
    Dominance {
        /// Bucket size.
        #[arg(long)]
        bucket: Option<usize>,
    },
    /// Most significant bits of a min-plus product.
    Msb {
        #[arg(long)]
        bits: u32,
    },
    /// Planner exponent and split for K_h.
    Plan {
        #[arg(long)]
        h: usize,
    },
    /// Timings of fast paths against their oracles.
    Bench {
        #[arg(long, value_enum, default_value_t = bench::Suite::All)]
        suite: bench::Suite,
        #[arg(long, value_delimiter = ',', default_values_t = vec![32, 64, 128])]
        sizes: Vec<usize>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum TriangleMode {
    Det,
    Rand,
    Sparse,
    Allpairs,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum CycleMode {
    Sparse,
    Dense,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum By {
    Vertex,
    Edge,
}

/// A failure with its exit code.
#[derive(Debug)]
struct Fail {
    code: u8,
    msg: String,
}

impl Fail {
    fn usage(msg: impl Into<String>) -> Self {
        Fail {
            code: EXIT_USAGE,
            msg: msg.into(),
        }
    }

    fn input(msg: impl Into<String>) -> Self {
        Fail {
            code: EXIT_INPUT,
            msg: msg.into(),
        }
    }
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidArgument(_) | Error::CapExceeded { .. } | Error::BudgetExceeded { .. } => EXIT_USAGE,
            _ => EXIT_INPUT,
        };
        Fail {
            code,
            msg: e.to_string(),
        }
    }
}

type Run<T> = std::result::Result<T, Fail>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_FOUND });
        }
    };
    let mut global = cli.global;
    let cmd = match cli.cmd {
        Top::Fast(c) => c,
        Top::Oracle { cmd } => {
            global.oracle = true;
            cmd
        }
    };
    if global.threads == 0 {
        eprintln!("error: --threads must be at least 1");
        return ExitCode::from(EXIT_USAGE);
    }
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(global.threads)
        .build_global()
    {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_USAGE);
    }
    let start = Instant::now();
    match run(&global, &cmd) {
        Ok(mut rep) => {
            rep.elapsed = start.elapsed();
            print!("{}", rep.render());
            ExitCode::from(if rep.found { EXIT_FOUND } else { EXIT_ABSENT })
        }
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn read_text(path: Option<&Path>) -> Run<String> {
    let mut s = String::new();
    match path {
        Some(p) if p != Path::new("-") => {
            s = std::fs::read_to_string(p).map_err(|e| Fail::input(format!("{}: {e}", p.display())))?;
        }
        _ => {
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Fail::input(format!("stdin: {e}")))?;
        }
    }
    Ok(s)
}

fn read_graph(g: &Global) -> Run<Graph> {
    let text = read_text(g.input.as_deref())?;
    parse_graph(&text).map_err(|e| Fail::input(e.to_string()))
}

fn read_matrices(g: &Global, want: &[usize]) -> Run<Vec<ExtMatrix>> {
    let text = read_text(g.input.as_deref())?;
    let ms = parse_matrices(&text).map_err(|e| Fail::input(e.to_string()))?;
    if !want.contains(&ms.len()) {
        return Err(Fail::input(format!("expected {want:?} matrices, found {}", ms.len())));
    }
    Ok(ms)
}

/// Missing weight maps default to all ones; `--minimize` negates them.
fn prepare(g: Graph, vertex: bool, edge: bool, minimize: bool, rep: &mut RunReport) -> Run<Graph> {
    let mut g = g;
    if vertex {
        let w: Vec<f64> = match g.vertex_weights() {
            Ok(w) => w[1..].to_vec(),
            Err(_) => {
                rep.note("vertex weights absent, using 1");
                vec![1.0; g.n()]
            }
        };
        let w: Vec<f64> = w.iter().map(|&x| if minimize { -x } else { x }).collect();
        g = g.with_vertex_weights(&w)?;
    }
    if edge {
        let w: Vec<f64> = match g.edge_weights() {
            Ok(w) => w.to_vec(),
            Err(_) => {
                rep.note("edge weights absent, using 1");
                vec![1.0; g.m()]
            }
        };
        let w: Vec<f64> = w.iter().map(|&x| if minimize { -x } else { x }).collect();
        g = g.with_edge_weights(&w)?;
    }
    Ok(g)
}

fn mode_name(oracle: bool, fast: &str) -> String {
    if oracle {
        format!("oracle/{fast}")
    } else {
        fast.to_string()
    }
}

fn run(gl: &Global, cmd: &Command) -> Run<RunReport> {
    let orc = Oracle::with_cap(gl.oracle_cap);
    let neg = gl.minimize;
    match cmd {
        Command::Triangle { mode } => {
            let name = format!("triangle/{}", format!("{mode:?}").to_lowercase());
            let mut rep = RunReport::new(mode_name(gl.oracle, &name));
            let g = prepare(read_graph(gl)?, true, false, neg, &mut rep)?;
            let r = if gl.oracle {
                orc.max_clique(&g, 3, Weighting::Vertex)?
            } else {
                match mode {
                    TriangleMode::Det => vertexmax::heaviest_triangle_det(&g)?,
                    TriangleMode::Rand => {
                        rep.seed = Some(gl.seed);
                        vertexmax::heaviest_triangle_rand(&g, &mut ChaCha8Rng::seed_from_u64(gl.seed))?
                    }
                    TriangleMode::Sparse => {
                        rep.param("omega", gl.omega);
                        vertexmax::heaviest_triangle_sparse(&g, gl.omega)?
                    }
                    TriangleMode::Allpairs => {
                        rep.param("omega", gl.omega);
                        vertexmax::heaviest_triangle_allpairs(&g, gl.omega)?
                    }
                }
            };
            rep.subgraph(r.as_ref(), neg);
            Ok(rep)
        }
        Command::Clique { h, all_pairs, by } => {
            let (h, all_pairs, by) = (*h, *all_pairs, *by);
            let mut rep = RunReport::new(mode_name(gl.oracle, "clique"));
            rep.param("h", h).param("by", format!("{by:?}").to_lowercase());
            let g = prepare(read_graph(gl)?, by == By::Vertex, by == By::Edge, neg, &mut rep)?;
            if all_pairs {
                if by == By::Edge {
                    return Err(Fail::usage("--all-pairs weighs vertices only"));
                }
                if gl.oracle {
                    let table = orc.all_pairs(&g, h)?;
                    pair_lines(&mut rep, table.iter().map(|(&p, r)| (p, r)), neg);
                } else {
                    let plan = plan_parameters(gl.omega, h)?;
                    rep.param("omega", gl.omega);
                    let table = vertexmax::all_pairs_max_clique(&g, h, &plan)?;
                    all_pairs_lines(&mut rep, &table, neg);
                }
                return Ok(rep);
            }
            let r = match (gl.oracle, by) {
                (true, By::Vertex) => orc.max_clique(&g, h, Weighting::Vertex)?,
                (true, By::Edge) => orc.max_clique(&g, h, Weighting::Edge)?,
                (false, By::Vertex) => {
                    rep.param("omega", gl.omega);
                    vertexmax::heaviest_clique(&g, h, gl.omega)?
                }
                (false, By::Edge) => {
                    let plan = plan_parameters(gl.omega, h)?;
                    rep.param("split", format!("{},{},{}", plan.a, plan.b, plan.c));
                    edgemax::heaviest_subgraph_distance_product(&g, h, plan.split())?
                }
            };
            rep.subgraph(r.as_ref(), neg);
            Ok(rep)
        }
        Command::Pattern {
            pattern_file,
            all_pairs,
        } => {
            let mut rep = RunReport::new(mode_name(gl.oracle, "pattern"));
            let ptext = read_text(Some(pattern_file))?;
            let pg = parse_graph(&ptext).map_err(|e| Fail::input(format!("pattern: {e}")))?;
            let pat = Pattern::from_graph(&pg);
            rep.param("h", pat.h());
            let g = prepare(read_graph(gl)?, true, false, neg, &mut rep)?;
            if gl.oracle {
                let table = orc.all_pairs_pattern(&g, &pat)?;
                if *all_pairs {
                    pair_lines(&mut rep, table.iter().map(|(&p, r)| (p, r)), neg);
                } else {
                    let mut best: Option<SubgraphResult> = None;
                    for r in table.values() {
                        hsub::graph::keep_best(&mut best, r.clone());
                    }
                    rep.subgraph(best.as_ref(), neg);
                }
            } else {
                let plan = plan_parameters(gl.omega, pat.h())?;
                rep.param("omega", gl.omega);
                let table = vertexmax::all_pairs_max_pattern(&g, &pat, &plan)?;
                if *all_pairs {
                    all_pairs_lines(&mut rep, &table, neg);
                } else {
                    rep.subgraph(table.best(), neg);
                }
            }
            Ok(rep)
        }
        Command::K22 => k2k(gl, &orc, 2, "k22"),
        Command::K2k { k } => k2k(gl, &orc, *k, "k2k"),
        Command::Beta { h } => {
            let mut rep = RunReport::new(mode_name(gl.oracle, "beta"));
            rep.param("h", h);
            let g = read_graph(gl)?;
            let beta = if gl.oracle {
                orc.edge_cover(&g, *h)?
            } else {
                vertexmax::edge_cover_number(&g, *h)?
            };
            rep.lines.push(beta.to_string());
            rep.found = beta > 0;
            Ok(rep)
        }
        Command::Cycle { k, mode, trials, delta } => {
            let name = format!("cycle/{}", format!("{mode:?}").to_lowercase());
            let mut rep = RunReport::new(mode_name(gl.oracle, &name));
            rep.param("k", k);
            let g = prepare(read_graph(gl)?, false, true, neg, &mut rep)?;
            let r = if gl.oracle {
                orc.k_cycle(&g, *k)?
            } else {
                let mut plan = ColorTrialPlan::new(*k, *delta, gl.seed)?;
                if let Some(t) = trials {
                    plan = plan.with_trials(*t);
                }
                rep.param("trials", plan.trials).param("delta", delta);
                rep.seed = Some(gl.seed);
                match mode {
                    CycleMode::Sparse => edgemax::heaviest_k_cycle_sparse(&g, *k, &plan)?,
                    CycleMode::Dense => edgemax::heaviest_k_cycle_dense(&g, *k, &plan)?,
                }
            };
            rep.subgraph(r.as_ref(), neg);
            Ok(rep)
        }
        Command::DenseSub { k } => {
            let mut rep = RunReport::new(mode_name(gl.oracle, "dense-sub"));
            rep.param("k", k);
            let g = prepare(read_graph(gl)?, false, true, neg, &mut rep)?;
            let r = if gl.oracle {
                orc.densest(&g, *k)?
            } else if *k > g.n() {
                None
            } else {
                Some(edgemax::densest_k_subgraph(&g, *k)?)
            };
            rep.subgraph(r.as_ref(), neg);
            Ok(rep)
        }
        Command::Rainbow { h, trials, delta } => {
            let mut rep = RunReport::new(mode_name(gl.oracle, "rainbow"));
            rep.param("h", h);
            let g = read_graph(gl)?;
            let r = if gl.oracle {
                orc.rainbow(&g, *h)?.map(|vs| colored_result(&g, &vs)).transpose()?
            } else {
                let t = h * h.saturating_sub(1) / 2;
                let trials = trials.unwrap_or_else(|| ColorReduction::trials_for(t, *delta));
                rep.param("trials", trials).param("delta", delta);
                rep.seed = Some(gl.seed);
                chromatic::rainbow_clique(&g, *h, trials, gl.seed)?
            };
            rep.subgraph(r.as_ref(), false);
            Ok(rep)
        }
        Command::Mono { h } => {
            let mut rep = RunReport::new(mode_name(gl.oracle, "mono"));
            rep.param("h", h);
            let g = read_graph(gl)?;
            let r = if gl.oracle {
                orc.mono(&g, *h)?.map(|vs| colored_result(&g, &vs)).transpose()?
            } else {
                match h {
                    3 => {
                        rep.param("omega", gl.omega);
                        chromatic::mono_triangle_omega(&g, gl.omega)?
                    }
                    4 => chromatic::mono_k4(&g)?,
                    _ => chromatic::mono_clique(&g, *h)?,
                }
            };
            rep.subgraph(r.as_ref(), false);
            Ok(rep)
        }
        Command::Market { pref } => market_cmd(gl, pref),
        Command::Dominance { bucket } => {
            let mut rep = RunReport::new(mode_name(gl.oracle, "dominance"));
            let ms = read_matrices(gl, &[2, 3])?;
            let (p, q) = (&ms[0], &ms[1]);
            let values = ms.get(2);
            let text = if gl.oracle {
                let rows = |m: &ExtMatrix| (0..m.rows()).map(|i| m.row(i).to_vec()).collect::<Vec<_>>();
                if p.cols() != q.cols() {
                    return Err(Fail::input("point sets differ in dimension"));
                }
                match values {
                    None => format_count_matrix(&CountMatrix::from_rows(&oracle::dominance(&rows(p), &rows(q)))),
                    Some(v) => {
                        if v.rows() != p.rows() || v.cols() != p.cols() {
                            return Err(Fail::input("values must match the first point set's shape"));
                        }
                        format_matrix(&ExtMatrix::from_rows(&oracle::weighted_dominance(
                            &rows(p),
                            &rows(q),
                            &rows(v),
                        ))?)
                    }
                }
            } else {
                let params = match bucket {
                    Some(s) => DominanceParams::with_bucket(*s),
                    None => DominanceParams::with_omega(gl.omega),
                };
                let (ps, qs) = (PointSet::from_matrix(p), PointSet::from_matrix(q));
                rep.param("bucket", params.bucket_size(p.rows() + q.rows())?);
                match values {
                    None => format_count_matrix(&dominance::dominance_matrix(&ps, &qs, &params)?),
                    Some(v) => format_matrix(&dominance::weighted_dominance(&ps, &qs, v, &params)?),
                }
            };
            rep.lines.extend(text.lines().map(String::from));
            rep.found = true;
            Ok(rep)
        }
        Command::Msb { bits } => {
            let mut rep = RunReport::new(mode_name(gl.oracle, "msb"));
            rep.param("bits", bits);
            let ms = read_matrices(gl, &[2])?;
            let (scale, rows, cols, prefix) = if gl.oracle {
                let (scale, prefix) = oracle::msb(&ms[0], &ms[1], *bits)?;
                (scale, ms[0].rows(), ms[1].cols(), prefix)
            } else {
                let r = dominance::msb_distance_product(&ms[0], &ms[1], *bits)?;
                rep.note(format!("threshold matrices {}", r.evaluations));
                (r.scale, r.rows, r.cols, r.prefix)
            };
            rep.note(format!("scale {}", trim_float(scale)));
            rep.lines.push(format!("m {rows} {cols}"));
            for i in 0..rows {
                let row: Vec<String> = prefix[i * cols..(i + 1) * cols]
                    .iter()
                    .map(|x| x.map_or_else(|| "inf".to_string(), |v| v.to_string()))
                    .collect();
                rep.lines.push(row.join(" "));
            }
            rep.found = true;
            Ok(rep)
        }
        Command::Plan { h } => {
            if gl.oracle {
                return Err(Fail::usage("plan has no oracle"));
            }
            let p = plan_parameters(gl.omega, *h)?;
            let mut rep = RunReport::new("plan");
            rep.lines
                .push(format!("t={} a={} b={} c={}", trim_float(p.t), p.a, p.b, p.c));
            rep.note(format!("mu {} b1 {}", trim_float(p.mu), p.b1));
            rep.note(format!("s1 {} s2 {}", trim_float(p.s1), trim_float(p.s2)));
            rep.found = true;
            Ok(rep)
        }
        Command::Bench { suite, sizes } => {
            if gl.oracle {
                return Err(Fail::usage("bench always runs both paths"));
            }
            let mut rep = RunReport::new("bench");
            rep.seed = Some(gl.seed);
            rep.lines.push("suite\tn\tfast_s\toracle_s\tagree".into());
            for row in bench::run(*suite, sizes, gl.seed, gl.omega)? {
                rep.lines.push(row);
            }
            rep.found = true;
            Ok(rep)
        }
    }
}

fn k2k(gl: &Global, orc: &Oracle, k: usize, name: &str) -> Run<RunReport> {
    let mut rep = RunReport::new(mode_name(gl.oracle, name));
    rep.param("k", k);
    let g = prepare(read_graph(gl)?, true, false, gl.minimize, &mut rep)?;
    let r = if gl.oracle {
        orc.k2k(&g, k)?
    } else {
        vertexmax::heaviest_k2k(&g, k)?
    };
    rep.subgraph(r.as_ref(), gl.minimize);
    Ok(rep)
}

/// Colored-clique results weigh their induced edges when edge weights exist.
fn colored_result(g: &Graph, vs: &[usize]) -> hsub::Result<SubgraphResult> {
    if g.has_edge_weights() {
        SubgraphResult::by_induced_edges(g, vs, SubgraphKind::Clique)
    } else {
        let mut vertices = vs.to_vec();
        vertices.sort_unstable();
        Ok(SubgraphResult {
            vertices,
            weight: 0.0,
            kind: SubgraphKind::Clique,
        })
    }
}

/// One line per pair: `weight<TAB>vertices<TAB>u,v`.
fn pair_lines<'a>(rep: &mut RunReport, pairs: impl Iterator<Item = ((usize, usize), &'a SubgraphResult)>, neg: bool) {
    for ((u, v), r) in pairs {
        rep.lines.push(format!("{}\t{u},{v}", result_line(r, neg)));
        rep.found = true;
    }
    if !rep.found {
        rep.note("result none");
    }
}

fn all_pairs_lines(rep: &mut RunReport, table: &AllPairsBest, neg: bool) {
    pair_lines(rep, table.pairs(), neg);
}

fn market_cmd(gl: &Global, pref: &str) -> Run<RunReport> {
    let mut rep = RunReport::new(mode_name(gl.oracle, "market"));
    rep.param("pref", pref);
    let pref = Preference::parse(pref)?;
    let text = read_text(gl.input.as_deref())?;
    let inst = market::parse_market(&text).map_err(|e| Fail::input(e.to_string()))?;
    let n = inst.n();
    let prefs = PreferenceSpec::uniform(n, pref.clone());
    let tm = market::transaction_matrices(&inst)?;
    let sellers: Vec<usize> = if gl.oracle {
        let (c, p, r) = oracle::market(&inst);
        let score = |i: usize, j: usize| pref.eval(p[i * n + j], r[i * n + j], c[i * n + j]);
        let ranked = |mut xs: Vec<usize>, key: &dyn Fn(usize) -> f64| {
            xs.sort_by(|&a, &b| key(b).total_cmp(&key(a)).then(a.cmp(&b)));
            xs
        };
        let lists: Vec<Vec<usize>> = (0..n).map(|i| ranked((0..n).collect(), &|j| score(i, j))).collect();
        let seller_rank: Vec<Vec<usize>> = (0..n)
            .map(|j| {
                let order = ranked((0..n).collect(), &|i| score(i, j));
                let mut rank = vec![0; n];
                for (pos, &i) in order.iter().enumerate() {
                    rank[i] = pos;
                }
                rank
            })
            .collect();
        oracle::deferred_acceptance(&lists, &seller_rank)
    } else {
        let m = market::stable_matching(&tm, &prefs)?;
        m.pairs().map(|(_, j)| j).collect()
    };
    let matching = market::Matching::from_sellers(sellers);
    for (i, j) in matching.pairs() {
        let (p, r, c) = tm.entry(i, j);
        rep.lines.push(format!(
            "{:?}\t{}\t{}\t{}",
            prefs.buyers[i].eval(p, r, c),
            join(&[i + 1, j + 1]),
            c,
            trim_float(p - r)
        ));
    }
    rep.note("columns: buyer score, buyer,seller, items traded, surplus");
    rep.note(format!(
        "blocking pairs {}",
        market::blocking_pairs(&tm, &prefs, &matching).len()
    ));
    rep.found = n > 0;
    Ok(rep)
}
