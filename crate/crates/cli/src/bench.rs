use std::time::Instant;

use clap::ValueEnum;
use hsub::dominance::{dominance_matrix, DominanceParams, PointSet};
use hsub::edgemax::{heaviest_k_cycle_sparse, ColorTrialPlan};
use hsub::extmat::{bool_product, BoolMatrix, CountMatrix};
use hsub::graph::{generate_random_graph, WeightMode};
use hsub::oracle::{self, Oracle, Weighting};
use hsub::vertexmax::{heaviest_clique, heaviest_triangle_det};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::Run;

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Triangle,
    Clique,
    Cycle,
    Dominance,
    Bool,
    All,
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let t = Instant::now();
    let out = f();
    (out, t.elapsed().as_secs_f64())
}

fn row(suite: &str, n: usize, fast: f64, slow: f64, agree: bool) -> String {
    format!("{suite}\t{n}\t{fast:.6}\t{slow:.6}\t{agree}")
}

/// One TSV row per (suite, size). Oracles past their caps are skipped.
pub fn run(suite: Suite, sizes: &[usize], seed: u64, omega: f64) -> Run<Vec<String>> {
    let all = suite == Suite::All;
    let mut out = Vec::new();
    for &n in sizes {
        if all || suite == Suite::Triangle {
            let g = generate_random_graph(n, 0.3, WeightMode::Vertex, None, seed);
            let (fast, tf) = timed(|| heaviest_triangle_det(&g));
            let (slow, ts) = timed(|| Oracle::with_cap(usize::MAX).max_clique(&g, 3, Weighting::Vertex));
            out.push(row("triangle", n, tf, ts, fast? == slow?));
        }
        if all || suite == Suite::Clique {
            let g = generate_random_graph(n, 0.5, WeightMode::Vertex, None, seed);
            let (fast, tf) = timed(|| heaviest_clique(&g, 4, omega));
            let (slow, ts) = timed(|| Oracle::with_cap(usize::MAX).max_clique(&g, 4, Weighting::Vertex));
            out.push(row("clique4", n, tf, ts, fast? == slow?));
        }
        if (all || suite == Suite::Cycle) && n <= 64 {
            let g = generate_random_graph(n, 4.0 / n.max(1) as f64, WeightMode::Edge, None, seed);
            let plan = ColorTrialPlan::new(5, 0.01, seed)?;
            let (fast, tf) = timed(|| heaviest_k_cycle_sparse(&g, 5, &plan));
            let (slow, ts) = timed(|| Oracle::with_cap(usize::MAX).k_cycle(&g, 5));
            let agree = fast?.map(|r| r.weight) == slow?.map(|r| r.weight);
            out.push(row("cycle5", n, tf, ts, agree));
        }
        if all || suite == Suite::Dominance {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut pts = || -> Vec<Vec<f64>> {
                (0..n)
                    .map(|_| (0..n).map(|_| rng.random_range(0..100) as f64).collect())
                    .collect()
            };
            let (p, q) = (pts(), pts());
            let (ps, qs) = (PointSet::from_rows(&p)?, PointSet::from_rows(&q)?);
            let (fast, tf) = timed(|| dominance_matrix(&ps, &qs, &DominanceParams::with_omega(omega)));
            let (slow, ts) = timed(|| oracle::dominance(&p, &q));
            out.push(row("dominance", n, tf, ts, fast? == CountMatrix::from_rows(&slow)));
        }
        if all || suite == Suite::Bool {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = BoolMatrix::from_fn(n, n, |_, _| rng.random_bool(0.1));
            let b = BoolMatrix::from_fn(n, n, |_, _| rng.random_bool(0.1));
            let (fast, tf) = timed(|| bool_product(&a, &b));
            let (slow, ts) = timed(|| BoolMatrix::from_fn(n, n, |i, j| (0..n).any(|k| a.get(i, k) && b.get(k, j))));
            out.push(row("bool", n, tf, ts, fast? == slow));
        }
    }
    Ok(out)
}
