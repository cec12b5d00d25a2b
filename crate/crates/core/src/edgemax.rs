//! Heaviest subgraphs in edge-weighted graphs.
//!
//! Cycles and paths on `k` vertices are found by color coding: under a
//! random coloring with `k` colors a fixed `k`-set is colorful with
//! probability `k!/k^k > e^-k`, and colorful structures are found exactly by
//! dynamic programming over colors. Repeating `ceil(e^k ln(1/delta))`
//! independent colorings misses a fixed optimum with probability at most
//! `delta`. Returned subgraphs are always checked and reweighed, so a miss
//! can only make the answer lighter, never invalid.
//!
//! Cliques and dense subgraphs use one max-plus product over vertex sets.

use std::collections::HashMap;

use itertools::Itertools;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::extmat::{max_plus_product_with_argmax, ExtMatrix};
use crate::graph::{keep_best, Graph, SubgraphKind, SubgraphResult, VertexColoring};
use crate::vertexmax::cliques;

/// Largest color count accepted by the color-coding routines.
pub const MAX_COLORS: usize = 12;

/// How many random colorings to try, and from which seed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ColorTrialPlan {
    pub k: usize,
    pub trials: usize,
    pub failure_bound: f64,
    pub seed: u64,
}

impl ColorTrialPlan {
    /// `ceil(e^k ln(1/delta))` trials.
    pub fn new(k: usize, delta: f64, seed: u64) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidArgument(format!("failure bound {delta} outside (0, 1)")));
        }
        let trials = ((k as f64).exp() * (1.0 / delta).ln()).ceil() as usize;
        Ok(ColorTrialPlan {
            k,
            trials: trials.max(1),
            failure_bound: delta,
            seed,
        })
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    /// Per-trial generator: the master seed with the trial number as stream.
    pub fn rng(&self, trial: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(trial as u64);
        rng
    }

    /// The coloring used by trial `trial` on a graph with `n` vertices.
    pub fn coloring(&self, n: usize, trial: usize) -> VertexColoring {
        VertexColoring::random(n, self.k, &mut self.rng(trial))
    }

    /// Runs `trial` for every trial index in parallel and keeps the best result.
    fn run<F>(&self, trial: F) -> Result<Option<SubgraphResult>>
    where
        F: Fn(usize) -> Result<Option<SubgraphResult>> + Sync,
    {
        let found: Vec<Result<Option<SubgraphResult>>> = (0..self.trials).into_par_iter().map(&trial).collect();
        let mut best = None;
        for r in found {
            if let Some(c) = r? {
                keep_best(&mut best, c);
            }
        }
        Ok(best)
    }
}

fn check_cycle_args(g: &Graph, k: usize) -> Result<()> {
    g.edge_weights()?;
    if k < 3 {
        return Err(Error::InvalidArgument(format!("cycle length {k} is below 3")));
    }
    if k > MAX_COLORS {
        return Err(Error::CapExceeded {
            what: "k",
            value: k,
            cap: MAX_COLORS,
        });
    }
    Ok(())
}

fn vertices_by_color(coloring: &VertexColoring) -> Vec<Vec<usize>> {
    let mut by = vec![Vec::new(); coloring.k() + 1];
    for v in 1..=coloring.n() {
        by[coloring.color(v)].push(v);
    }
    by
}

/// Heaviest colorful cycle on `coloring.k()` vertices through `u`.
///
/// For each order of the colors starting with `u`'s color, a layered pass
/// keeps for every vertex of the `j`-th color the heaviest path from `u`
/// colored by the first `j` colors in order; the cycle closes over an edge
/// back to `u`.
pub fn colorful_cycle_through(g: &Graph, coloring: &VertexColoring, u: usize) -> Result<Option<SubgraphResult>> {
    let w = g.edge_weights()?;
    let k = coloring.k();
    if coloring.n() != g.n() {
        return Err(Error::InvalidArgument("coloring does not match the graph".into()));
    }
    if k < 3 || u == 0 || u > g.n() {
        return Ok(None);
    }
    let by_color = vertices_by_color(coloring);
    let first = coloring.color(u);
    let rest: Vec<usize> = (1..=k).filter(|&c| c != first).collect();
    let n = g.n();
    let mut best = None;
    // layer[j][v]: best weight of a path u .. v colored by order[0..=j]
    let mut layer = vec![vec![f64::NEG_INFINITY; n + 1]; k];
    let mut pred = vec![vec![0usize; n + 1]; k];
    for perm in rest.iter().copied().permutations(k - 1) {
        for v in 1..=n {
            layer[0][v] = f64::NEG_INFINITY;
        }
        layer[0][u] = 0.0;
        let mut prev_color = first;
        let mut alive = true;
        for (j, &c) in perm.iter().enumerate() {
            let j = j + 1;
            for &v in &by_color[c] {
                layer[j][v] = f64::NEG_INFINITY;
            }
            let mut any = false;
            for &x in &by_color[prev_color] {
                let base = layer[j - 1][x];
                if base == f64::NEG_INFINITY {
                    continue;
                }
                for (&v, &eid) in g.neighbors(x).iter().zip(g.incident_edges(x)) {
                    if coloring.color(v) != c {
                        continue;
                    }
                    let cand = base + w[eid];
                    if cand > layer[j][v] {
                        layer[j][v] = cand;
                        pred[j][v] = x;
                        any = true;
                    }
                }
            }
            if !any {
                alive = false;
                break;
            }
            prev_color = c;
        }
        if !alive {
            continue;
        }
        let last = perm[k - 2];
        let mut close: Option<(f64, usize)> = None;
        for &v in &by_color[last] {
            let base = layer[k - 1][v];
            if base == f64::NEG_INFINITY {
                continue;
            }
            if let Some(wv) = g.edge_weight(v, u) {
                if close.map_or(true, |(b, _)| base + wv > b) {
                    close = Some((base + wv, v));
                }
            }
        }
        if let Some((_, mut v)) = close {
            let mut cyc = vec![0; k];
            for j in (0..k).rev() {
                cyc[j] = v;
                v = pred[j][v];
            }
            cyc[0] = u;
            keep_best(&mut best, SubgraphResult::cycle(g, &cyc)?);
        }
    }
    Ok(best)
}

/// Heaviest colorful `k`-cycle for one coloring, splitting vertices at degree
/// `m^(1/ceil(k/2))`.
///
/// Cycles through a high-degree vertex come from [`colorful_cycle_through`].
/// The remaining cycles live in the subgraph of low-degree vertices: with
/// the color-1 vertex first and a color order `pi`, each splits into a path
/// of `ceil(k/2)` edges colored `pi(1..=ceil(k/2)+1)` and a path back of
/// `floor(k/2)` edges, which are enumerated separately and joined on their
/// shared endpoints.
pub fn colorful_cycle_sparse(g: &Graph, coloring: &VertexColoring) -> Result<Option<SubgraphResult>> {
    let w = g.edge_weights()?;
    let k = coloring.k();
    if k < 3 {
        return Ok(None);
    }
    let p = k.div_ceil(2);
    let delta = (g.m() as f64).powf(1.0 / p as f64);
    let low: Vec<bool> = (0..=g.n()).map(|v| v > 0 && (g.degree(v) as f64) < delta).collect();
    let mut best = None;
    for u in g.vertices() {
        if !low[u] {
            if let Some(c) = colorful_cycle_through(g, coloring, u)? {
                keep_best(&mut best, c);
            }
        }
    }

    let by_color = vertices_by_color(coloring);
    for perm in (2..=k).permutations(k - 1) {
        let mut order = vec![1];
        order.extend(perm);
        let out = low_paths(g, w, coloring, &low, &by_color, &order[..=p]);
        let mut back_colors = order[p..].to_vec();
        back_colors.push(order[0]);
        let back = low_paths(g, w, coloring, &low, &by_color, &back_colors);
        for (&(x, y), (_, pa)) in &out {
            let Some((_, pb)) = back.get(&(y, x)) else { continue };
            let mut cyc = pa.clone();
            cyc.extend_from_slice(&pb[1..pb.len() - 1]);
            keep_best(&mut best, SubgraphResult::cycle(g, &cyc)?);
        }
    }
    Ok(best)
}

/// Heaviest path per endpoint pair among low-degree paths colored by `colors` in order.
fn low_paths(
    g: &Graph,
    w: &[f64],
    coloring: &VertexColoring,
    low: &[bool],
    by_color: &[Vec<usize>],
    colors: &[usize],
) -> HashMap<(usize, usize), (f64, Vec<usize>)> {
    fn walk(
        g: &Graph,
        w: &[f64],
        coloring: &VertexColoring,
        low: &[bool],
        colors: &[usize],
        path: &mut Vec<usize>,
        weight: f64,
        out: &mut HashMap<(usize, usize), (f64, Vec<usize>)>,
    ) {
        let x = *path.last().expect("nonempty");
        if path.len() == colors.len() {
            let key = (path[0], x);
            match out.get(&key) {
                Some((b, bp)) if *b > weight || (*b == weight && *bp <= *path) => {}
                _ => {
                    out.insert(key, (weight, path.clone()));
                }
            }
            return;
        }
        let c = colors[path.len()];
        for (&v, &eid) in g.neighbors(x).iter().zip(g.incident_edges(x)) {
            if low[v] && coloring.color(v) == c {
                path.push(v);
                walk(g, w, coloring, low, colors, path, weight + w[eid], out);
                path.pop();
            }
        }
    }
    let mut out = HashMap::new();
    for &s in &by_color[colors[0]] {
        if low[s] {
            walk(g, w, coloring, low, colors, &mut vec![s], 0.0, &mut out);
        }
    }
    out
}

/// Heaviest simple cycle on `k` vertices, sparse strategy, over
/// `plan.trials` random colorings.
pub fn heaviest_k_cycle_sparse(g: &Graph, k: usize, plan: &ColorTrialPlan) -> Result<Option<SubgraphResult>> {
    check_cycle_args(g, k)?;
    let plan = ColorTrialPlan { k, ..*plan };
    plan.run(|t| colorful_cycle_sparse(g, &plan.coloring(g.n(), t)))
}

/// Heaviest colorful paths between all vertex pairs.
///
/// `weight(u, v)` is the heaviest path on `k` vertices from `u` to `v`
/// whose vertices have distinct colors; `-inf` if none.
#[derive(Clone, Debug)]
pub struct PathTable {
    n: usize,
    k: usize,
    weight: Vec<f64>,
    /// Color mask of the table holding the best path for each pair.
    source: Vec<u32>,
    tables: HashMap<u32, ColorTable>,
}

impl PathTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn weight(&self, u: usize, v: usize) -> f64 {
        self.weight[(u - 1) * self.n + (v - 1)]
    }

    /// The vertices of a heaviest path from `u` to `v`, in order.
    pub fn path(&self, u: usize, v: usize) -> Option<Vec<usize>> {
        if self.weight(u, v) == f64::NEG_INFINITY {
            return None;
        }
        let mask = self.source[(u - 1) * self.n + (v - 1)];
        let mut out = Vec::with_capacity(self.k);
        rebuild(&self.tables, mask, u, v, &mut out);
        Some(out)
    }
}

/// Paths whose vertices use exactly the colors of one mask.
#[derive(Clone, Debug)]
struct ColorTable {
    /// Vertices with a color in the mask, ascending.
    verts: Vec<usize>,
    w: ExtMatrix,
    /// For a split entry: first part's mask and the two middle vertices.
    how: Vec<Option<(u32, usize, usize)>>,
}

impl ColorTable {
    fn index(&self, v: usize) -> Option<usize> {
        self.verts.binary_search(&v).ok()
    }
}

fn rebuild(tables: &HashMap<u32, ColorTable>, mask: u32, u: usize, v: usize, out: &mut Vec<usize>) {
    let t = &tables[&mask];
    match mask.count_ones() {
        1 => out.push(u),
        2 => out.extend([u, v]),
        _ => {
            let (i, j) = (t.index(u).expect("u in table"), t.index(v).expect("v in table"));
            let (m1, x, y) = t.how[i * t.verts.len() + j].expect("finite entry has a split");
            rebuild(tables, m1, u, x, out);
            rebuild(tables, mask & !m1, y, v, out);
        }
    }
}

fn color_table(g: &Graph, coloring: &VertexColoring, mask: u32, tables: &mut HashMap<u32, ColorTable>) -> Result<()> {
    if tables.contains_key(&mask) {
        return Ok(());
    }
    let verts: Vec<usize> = g
        .vertices()
        .filter(|&v| mask >> (coloring.color(v) - 1) & 1 == 1)
        .collect();
    let s = mask.count_ones() as usize;
    let nv = verts.len();
    let mut w = ExtMatrix::filled(nv, nv, f64::NEG_INFINITY);
    let mut how = vec![None; nv * nv];
    match s {
        1 => {
            for i in 0..nv {
                w.set(i, i, 0.0);
            }
        }
        2 => {
            for (i, &x) in verts.iter().enumerate() {
                for (j, &y) in verts.iter().enumerate() {
                    if coloring.color(x) != coloring.color(y) {
                        if let Some(e) = g.edge_weight(x, y) {
                            w.set(i, j, e);
                        }
                    }
                }
            }
        }
        _ => {
            let colors: Vec<u32> = (0..32).filter(|b| mask >> b & 1 == 1).collect();
            let mut sizes = vec![s / 2];
            if s % 2 == 1 {
                sizes.push(s / 2 + 1);
            }
            for size in sizes {
                for part in colors.iter().copied().combinations(size) {
                    let m1: u32 = part.iter().map(|b| 1u32 << b).sum();
                    let m2 = mask & !m1;
                    color_table(g, coloring, m1, tables)?;
                    color_table(g, coloring, m2, tables)?;
                    let (t1, t2) = (&tables[&m1], &tables[&m2]);
                    let bridge = ExtMatrix::from_fn(t1.verts.len(), t2.verts.len(), |i, j| {
                        g.edge_weight(t1.verts[i], t2.verts[j]).unwrap_or(f64::NEG_INFINITY)
                    })?;
                    let (left, xs) = max_plus_product_with_argmax(&t1.w, &bridge)?;
                    let (full, ys) = max_plus_product_with_argmax(&left, &t2.w)?;
                    let c2 = t2.verts.len();
                    for (i, &a) in t1.verts.iter().enumerate() {
                        let gi = verts.binary_search(&a).expect("subset vertex");
                        for (j, &b) in t2.verts.iter().enumerate() {
                            let val = full.get(i, j);
                            let gj = verts.binary_search(&b).expect("subset vertex");
                            if val > w.get(gi, gj) {
                                let y = ys[i * c2 + j] as usize - 1;
                                let x = xs[i * c2 + y] as usize - 1;
                                w.set(gi, gj, val);
                                how[gi * nv + gj] = Some((m1, t1.verts[x], t2.verts[y]));
                            }
                        }
                    }
                }
            }
        }
    }
    tables.insert(mask, ColorTable { verts, w, how });
    Ok(())
}

/// Heaviest colorful paths on `k` vertices between all pairs, by splitting
/// the color set in halves and joining the halves with two max-plus products
/// through the edge-weight matrix. Color sets of odd size split into sizes
/// `ceil(s/2)` and `floor(s/2)`, both ways round. With more colors than `k`
/// every `k`-subset of colors is tried.
pub fn all_pairs_heaviest_k_path(g: &Graph, coloring: &VertexColoring, k: usize) -> Result<PathTable> {
    g.edge_weights()?;
    if coloring.n() != g.n() {
        return Err(Error::InvalidArgument("coloring does not match the graph".into()));
    }
    if k == 0 || k > coloring.k() {
        return Err(Error::InvalidArgument(format!(
            "path size {k} must lie in 1..={}",
            coloring.k()
        )));
    }
    if coloring.k() > MAX_COLORS {
        return Err(Error::CapExceeded {
            what: "colors",
            value: coloring.k(),
            cap: MAX_COLORS,
        });
    }
    let n = g.n();
    let mut tables = HashMap::new();
    let mut weight = vec![f64::NEG_INFINITY; n * n];
    let mut source = vec![0u32; n * n];
    for set in (0..coloring.k() as u32).combinations(k) {
        let mask: u32 = set.iter().map(|b| 1u32 << b).sum();
        color_table(g, coloring, mask, &mut tables)?;
        let t = &tables[&mask];
        for (i, &a) in t.verts.iter().enumerate() {
            for (j, &b) in t.verts.iter().enumerate() {
                let val = t.w.get(i, j);
                let slot = (a - 1) * n + (b - 1);
                if val > weight[slot] {
                    weight[slot] = val;
                    source[slot] = mask;
                }
            }
        }
    }
    Ok(PathTable {
        n,
        k,
        weight,
        source,
        tables,
    })
}

/// Heaviest colorful `k`-cycle for one coloring from the all-pairs path
/// table: a path from `u` to `v` on `k` vertices closed by the edge `{v, u}`.
pub fn colorful_cycle_dense(g: &Graph, coloring: &VertexColoring) -> Result<Option<SubgraphResult>> {
    let k = coloring.k();
    if k < 3 {
        return Ok(None);
    }
    let table = all_pairs_heaviest_k_path(g, coloring, k)?;
    let mut top = f64::NEG_INFINITY;
    let mut at = Vec::new();
    for &(u, v) in g.edges() {
        let Some(e) = g.edge_weight(u, v) else { continue };
        let val = table.weight(u, v);
        if val == f64::NEG_INFINITY {
            continue;
        }
        let total = val + e;
        if total > top {
            top = total;
            at.clear();
        }
        if total == top {
            at.push((u, v));
        }
    }
    let mut best = None;
    for (u, v) in at {
        let path = table.path(u, v).expect("finite entry");
        keep_best(&mut best, SubgraphResult::cycle(g, &path)?);
    }
    Ok(best)
}

/// Heaviest simple cycle on `k` vertices, dense strategy, over
/// `plan.trials` random colorings.
pub fn heaviest_k_cycle_dense(g: &Graph, k: usize, plan: &ColorTrialPlan) -> Result<Option<SubgraphResult>> {
    check_cycle_args(g, k)?;
    let plan = ColorTrialPlan { k, ..*plan };
    plan.run(|t| colorful_cycle_dense(g, &plan.coloring(g.n(), t)))
}

/// Edges of `set` with at least one endpoint in `tail`, lexicographic order.
fn weight_touching(g: &Graph, set: &[usize], tail: &[usize]) -> f64 {
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    let mut acc = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        for &y in &sorted[i + 1..] {
            if tail.contains(&x) || tail.contains(&y) {
                if let Some(e) = g.edge_weight(x, y) {
                    acc += e;
                }
            }
        }
    }
    acc
}

fn cross_weight(g: &Graph, u: &[usize], v: &[usize]) -> f64 {
    let mut acc = 0.0;
    for &x in u {
        for &y in v {
            if let Some(e) = g.edge_weight(x, y) {
                acc += e;
            }
        }
    }
    acc
}

fn disjoint(u: &[usize], v: &[usize]) -> bool {
    u.iter().all(|x| !v.contains(x))
}

/// Shared pipeline: `A[U, M]` is the induced edge weight of `U + M`, `B[M, U']`
/// the weight of edges of `M + U'` touching `U'`, and `C = A * B` (max-plus);
/// `C[U, U'] + w(U, U')` is the heaviest completion of `U + U'`.
fn three_part_max(
    g: &Graph,
    s_a: &[Vec<usize>],
    s_b: &[Vec<usize>],
    s_c: &[Vec<usize>],
    fits: impl Fn(&[usize], &[usize]) -> bool,
    kind: SubgraphKind,
) -> Result<Option<SubgraphResult>> {
    let a = ExtMatrix::from_fn(s_a.len(), s_b.len(), |i, j| {
        let (u, m) = (&s_a[i], &s_b[j]);
        if fits(u, m) {
            let mut set = u.clone();
            set.extend_from_slice(m);
            weight_touching(g, &set, &set)
        } else {
            f64::NEG_INFINITY
        }
    })?;
    let b = ExtMatrix::from_fn(s_b.len(), s_c.len(), |i, j| {
        let (m, v) = (&s_b[i], &s_c[j]);
        if fits(m, v) {
            let mut set = m.clone();
            set.extend_from_slice(v);
            weight_touching(g, &set, v)
        } else {
            f64::NEG_INFINITY
        }
    })?;
    let (c, arg) = max_plus_product_with_argmax(&a, &b)?;
    let mut top = f64::NEG_INFINITY;
    let mut at = Vec::new();
    for (i, u) in s_a.iter().enumerate() {
        for (j, v) in s_c.iter().enumerate() {
            let val = c.get(i, j);
            if val == f64::NEG_INFINITY || !fits(u, v) {
                continue;
            }
            let total = val + cross_weight(g, u, v);
            if total > top {
                top = total;
                at.clear();
            }
            if total == top {
                at.push((i, j));
            }
        }
    }
    let mut best = None;
    for (i, j) in at {
        let mid = &s_b[arg[i * s_c.len() + j] as usize - 1];
        let mut set = s_a[i].clone();
        set.extend_from_slice(mid);
        set.extend_from_slice(&s_c[j]);
        keep_best(&mut best, SubgraphResult::by_induced_edges(g, &set, kind)?);
    }
    Ok(best)
}

/// Heaviest `K_h` by total edge weight, with `split = (a, b, c)` sizing the
/// row, inner and column cliques of the max-plus product.
pub fn heaviest_subgraph_distance_product(
    g: &Graph,
    h: usize,
    split: (usize, usize, usize),
) -> Result<Option<SubgraphResult>> {
    g.edge_weights()?;
    let (a, b, c) = split;
    if a == 0 || b == 0 || c == 0 || a + b + c != h {
        return Err(Error::InvalidArgument(format!(
            "split ({a}, {b}, {c}) does not partition h = {h}"
        )));
    }
    let (s_a, s_b, s_c) = (cliques(g, a), cliques(g, b), cliques(g, c));
    let fits = |u: &[usize], v: &[usize]| u.iter().all(|&x| v.iter().all(|&y| x != y && g.has_edge(x, y)));
    three_part_max(g, &s_a, &s_b, &s_c, fits, SubgraphKind::Clique)
}

/// The `k`-set of vertices with the largest total induced edge weight.
pub fn densest_k_subgraph(g: &Graph, k: usize) -> Result<SubgraphResult> {
    g.edge_weights()?;
    let n = g.n();
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("k = {k} must lie in 1..={n}")));
    }
    let kind = SubgraphKind::Pattern;
    if k == 1 {
        return SubgraphResult::by_induced_edges(g, &[1], kind);
    }
    if k == 2 {
        // Non-adjacent pairs weigh 0, which beats any negative edge.
        let mut best = SubgraphResult::by_induced_edges(g, &[1, 2], kind)?;
        for (u, v) in (1..=n).tuple_combinations() {
            let cand = SubgraphResult::by_induced_edges(g, &[u, v], kind)?;
            if cand.beats(&best) {
                best = cand;
            }
        }
        return Ok(best);
    }
    let a = k / 3;
    let b = k - 2 * a;
    let subsets = |s: usize| -> Vec<Vec<usize>> { (1..=n).combinations(s).collect() };
    let (s_a, s_b) = (subsets(a), subsets(b));
    let found = three_part_max(g, &s_a, &s_b, &s_a, disjoint, kind)?;
    Ok(found.expect("k <= n leaves a disjoint completion"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_random_graph, WeightMode};

    fn cycle_graph(n: usize, w: &[f64]) -> Graph {
        let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (v, v + 1)).collect();
        edges.push((1, n));
        let g = Graph::from_edges(n, &edges).unwrap();
        // weights listed along the cycle 1-2, 2-3, ..., n-1
        let mut per_edge = vec![0.0; g.m()];
        for i in 0..n {
            let (u, v) = (i + 1, (i + 1) % n + 1);
            per_edge[g.edge_id(u, v).unwrap()] = w[i];
        }
        g.with_edge_weights(&per_edge).unwrap()
    }

    fn brute_cycle(g: &Graph, k: usize) -> Option<f64> {
        let mut best: Option<f64> = None;
        for set in g.vertices().combinations(k) {
            let first = set[0];
            for perm in set[1..].iter().copied().permutations(k - 1) {
                let mut cyc = vec![first];
                cyc.extend(perm);
                if cyc[1] > cyc[k - 1] {
                    continue;
                }
                if (0..k).all(|i| g.has_edge(cyc[i], cyc[(i + 1) % k])) {
                    let w = SubgraphResult::cycle(g, &cyc).unwrap().weight;
                    best = Some(best.map_or(w, |b| b.max(w)));
                }
            }
        }
        best
    }

    fn valid_cycle(g: &Graph, c: &SubgraphResult, k: usize) -> bool {
        let v = &c.vertices;
        let mut s = v.clone();
        s.sort_unstable();
        s.dedup();
        s.len() == k
            && (0..k).all(|i| g.has_edge(v[i], v[(i + 1) % k]))
            && SubgraphResult::cycle(g, v).unwrap().weight == c.weight
    }

    #[test]
    fn trial_count() {
        let p = ColorTrialPlan::new(3, 0.01, 0).unwrap();
        assert_eq!(p.trials, (3f64.exp() * 100f64.ln()).ceil() as usize);
        assert!(ColorTrialPlan::new(3, 0.0, 0).is_err());
    }

    #[test]
    fn cycle_through_examples() {
        let g = cycle_graph(5, &[1.0; 5]);
        let rainbow = VertexColoring::new(5, &[1, 2, 3, 4, 5]).unwrap();
        for u in 1..=5 {
            assert_eq!(colorful_cycle_through(&g, &rainbow, u).unwrap().unwrap().weight, 5.0);
        }
        let repeated = VertexColoring::new(5, &[1, 2, 3, 4, 4]).unwrap();
        assert!(colorful_cycle_through(&g, &repeated, 1).unwrap().is_none());
    }

    #[test]
    fn sparse_and_dense_small() {
        let g = cycle_graph(4, &[1.0, 2.0, 3.0, 4.0]);
        let plan = ColorTrialPlan::new(4, 0.01, 1).unwrap();
        assert_eq!(heaviest_k_cycle_sparse(&g, 4, &plan).unwrap().unwrap().weight, 10.0);
        assert_eq!(heaviest_k_cycle_dense(&g, 4, &plan).unwrap().unwrap().weight, 10.0);
        let tree = Graph::from_edges(4, &[(1, 2), (2, 3), (2, 4)])
            .unwrap()
            .with_edge_weights(&[1.0; 3])
            .unwrap();
        let plan3 = ColorTrialPlan::new(3, 0.01, 1).unwrap();
        assert!(heaviest_k_cycle_sparse(&tree, 3, &plan3).unwrap().is_none());
        let k33 = Graph::from_edges(
            6,
            &[(1, 4), (1, 5), (1, 6), (2, 4), (2, 5), (2, 6), (3, 4), (3, 5), (3, 6)],
        )
        .unwrap()
        .with_edge_weights(&[1.0; 9])
        .unwrap();
        assert!(heaviest_k_cycle_dense(&k33, 3, &plan3).unwrap().is_none());
        let c5 = cycle_graph(5, &[1.0; 5]);
        let plan5 = ColorTrialPlan::new(5, 0.01, 2).unwrap();
        assert_eq!(heaviest_k_cycle_dense(&c5, 5, &plan5).unwrap().unwrap().weight, 5.0);
    }

    #[test]
    fn colorful_cycles_match_enumeration() {
        for seed in 0..8 {
            let g = generate_random_graph(14, 0.4, WeightMode::Edge, None, seed);
            for k in 3..=5 {
                let plan = ColorTrialPlan::new(k, 0.01, seed).unwrap().with_trials(40);
                for t in 0..plan.trials {
                    let col = plan.coloring(g.n(), t);
                    let s = colorful_cycle_sparse(&g, &col).unwrap();
                    let d = colorful_cycle_dense(&g, &col).unwrap();
                    assert_eq!(s.as_ref().map(|c| c.weight), d.as_ref().map(|c| c.weight));
                    if let Some(c) = &s {
                        assert!(valid_cycle(&g, c, k) && col.is_colorful(&c.vertices));
                    }
                    if let Some(c) = &d {
                        assert!(valid_cycle(&g, c, k) && col.is_colorful(&c.vertices));
                    }
                }
            }
        }
    }

    #[test]
    fn full_runs_match_enumeration() {
        for seed in 0..6 {
            let g = generate_random_graph(12, 0.4, WeightMode::Edge, None, seed);
            for k in 3..=4 {
                let plan = ColorTrialPlan::new(k, 0.01, seed).unwrap();
                let want = brute_cycle(&g, k);
                let s = heaviest_k_cycle_sparse(&g, k, &plan).unwrap().map(|c| c.weight);
                let d = heaviest_k_cycle_dense(&g, k, &plan).unwrap().map(|c| c.weight);
                assert_eq!(s, want, "sparse seed {seed} k {k}");
                assert_eq!(d, want, "dense seed {seed} k {k}");
            }
        }
    }

    #[test]
    fn path_table_examples() {
        let g = Graph::from_edges(2, &[(1, 2)])
            .unwrap()
            .with_edge_weights(&[2.5])
            .unwrap();
        let col = VertexColoring::new(2, &[1, 2]).unwrap();
        let t = all_pairs_heaviest_k_path(&g, &col, 2).unwrap();
        assert_eq!(t.weight(1, 2), 2.5);
        assert_eq!(t.weight(2, 1), 2.5);
        assert_eq!(t.path(1, 2), Some(vec![1, 2]));
        let t = all_pairs_heaviest_k_path(&g, &col, 1).unwrap();
        assert_eq!(t.weight(1, 1), 0.0);
        assert_eq!(t.weight(1, 2), f64::NEG_INFINITY);
    }

    #[test]
    fn path_table_matches_enumeration() {
        for seed in 0..5 {
            let g = generate_random_graph(10, 0.5, WeightMode::Edge, None, seed);
            let plan = ColorTrialPlan::new(4, 0.01, seed).unwrap();
            let col = plan.coloring(10, 0);
            let t = all_pairs_heaviest_k_path(&g, &col, 4).unwrap();
            for u in 1..=10 {
                for v in 1..=10 {
                    let mut want = f64::NEG_INFINITY;
                    for mid in g.vertices().permutations(2) {
                        let p = [u, mid[0], mid[1], v];
                        if col.is_colorful(&p) && (0..3).all(|i| g.has_edge(p[i], p[i + 1])) {
                            let e: Vec<(usize, usize)> = (0..3).map(|i| (p[i], p[i + 1])).collect();
                            want = want.max(g.edge_weight_sum(&e).unwrap());
                        }
                    }
                    let got = t.weight(u, v);
                    assert!((got - want).abs() < 1e-12 || got == want, "({u},{v}) {got} vs {want}");
                    assert_eq!(got, t.weight(v, u));
                    if let Some(p) = t.path(u, v) {
                        assert_eq!(p.len(), 4);
                        assert!(col.is_colorful(&p));
                    }
                }
            }
        }
    }

    #[test]
    fn distance_product_cliques() {
        let tri = Graph::from_edges(3, &[(1, 2), (2, 3), (1, 3)])
            .unwrap()
            .with_edge_weights(&[1.0, 2.0, 3.0])
            .unwrap();
        assert_eq!(
            heaviest_subgraph_distance_product(&tri, 3, (1, 1, 1))
                .unwrap()
                .unwrap()
                .weight,
            6.0
        );
        assert!(heaviest_subgraph_distance_product(&tri, 4, (1, 2, 1))
            .unwrap()
            .is_none());
        assert!(heaviest_subgraph_distance_product(&tri, 3, (1, 1, 2)).is_err());
        for seed in 0..6 {
            let g = generate_random_graph(12, 0.6, WeightMode::Edge, None, seed);
            let want = cliques(&g, 4)
                .iter()
                .map(|c| g.induced_edge_weight(c).unwrap())
                .reduce(f64::max);
            let got = heaviest_subgraph_distance_product(&g, 4, (1, 2, 1))
                .unwrap()
                .map(|r| r.weight);
            assert_eq!(got, want);
        }
    }

    #[test]
    fn densest_examples() {
        let g = Graph::from_edges(4, &[(1, 2), (1, 3), (2, 3), (2, 4), (3, 4)])
            .unwrap()
            .with_edge_weights(&[1.0; 5])
            .unwrap();
        let d = densest_k_subgraph(&g, 3).unwrap();
        assert_eq!(d.weight, 3.0);
        let empty = Graph::from_edges(5, &[]).unwrap();
        assert_eq!(densest_k_subgraph(&empty, 3).unwrap().weight, 0.0);
        assert!(densest_k_subgraph(&empty, 6).is_err());
        for seed in 0..5 {
            let g = generate_random_graph(11, 0.5, WeightMode::Edge, None, seed);
            let want = g
                .vertices()
                .combinations(4)
                .map(|s| g.induced_edge_weight(&s).unwrap())
                .reduce(f64::max)
                .unwrap();
            assert_eq!(densest_k_subgraph(&g, 4).unwrap().weight, want);
        }
    }
}
