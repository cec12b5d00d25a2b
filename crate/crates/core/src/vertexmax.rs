//! Heaviest subgraphs in vertex-weighted graphs.
//!
//! The all-pairs routines build adjacency systems: 0-1 matrices whose rows
//! and columns are small cliques (or pattern pieces) of `G`, with the column
//! side sorted by weight. The maximum witness of a product entry is then the
//! heaviest completion of the row/column pair.
//!
//! The triangle routines work with threshold counts. For vertices `i, j`
//! and a threshold `K`, one dominance computation gives the number of common
//! neighbors `k` with `w(i) + w(j) + w(k) >= K`; differences of such counts
//! give the number of triangles on an edge in any weight window.
//!
//! Reported weights are always the canonical vertex sums (ascending vertex
//! order), recomputed from the graph.

use std::ops::Bound;

use rand::Rng;

use crate::dominance::{dominance_matrix, DominanceParams, PointSet};
use crate::error::{Error, Result};
use crate::extmat::{count_product, BoolMatrix, CountMatrix};
use crate::graph::{keep_best, Graph, SubgraphKind, SubgraphResult};
use crate::witness::{max_witness_product, plan_parameters, top_k_witnesses, Interval, PlanParameters};

/// Largest pattern size accepted by the all-pairs routines unless overridden.
pub const DEFAULT_PATTERN_CAP: usize = 6;

#[cfg(feature = "count-comparisons")]
mod counter {
    use std::sync::atomic::{AtomicU64, Ordering};

    static COMPARISONS: AtomicU64 = AtomicU64::new(0);

    pub fn bump(by: u64) {
        COMPARISONS.fetch_add(by, Ordering::Relaxed);
    }

    pub fn get() -> u64 {
        COMPARISONS.load(Ordering::Relaxed)
    }

    pub fn reset() {
        COMPARISONS.store(0, Ordering::Relaxed);
    }
}

/// Weight comparisons performed so far by the all-pairs routines
/// (sorting the inner index and folding results). Process-wide.
#[cfg(feature = "count-comparisons")]
pub fn comparisons() -> u64 {
    counter::get()
}

#[cfg(feature = "count-comparisons")]
pub fn reset_comparisons() {
    counter::reset()
}

#[inline]
fn count_cmp(_by: u64) {
    #[cfg(feature = "count-comparisons")]
    counter::bump(_by);
}

/// All `size`-cliques as ascending tuples, in lexicographic order.
pub fn cliques(g: &Graph, size: usize) -> Vec<Vec<usize>> {
    fn grow(g: &Graph, size: usize, cur: &mut Vec<usize>, cand: &[usize], out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for (idx, &v) in cand.iter().enumerate() {
            let next: Vec<usize> = cand[idx + 1..].iter().copied().filter(|&x| g.has_edge(v, x)).collect();
            if next.len() + 1 + cur.len() < size {
                continue;
            }
            cur.push(v);
            grow(g, size, cur, &next, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if size == 0 {
        out.push(Vec::new());
        return out;
    }
    let all: Vec<usize> = g.vertices().collect();
    grow(g, size, &mut Vec::new(), &all, &mut out);
    out
}

/// A 0-1 matrix indexed by vertex tuples: `matrix[r, c] = 1` iff
/// `row_index[r]` and `col_index[c]` are disjoint and together induce the
/// required subgraph (a clique for [`AdjacencySystem::clique`]).
#[derive(Clone, Debug)]
pub struct AdjacencySystem {
    pub row_index: Vec<Vec<usize>>,
    pub col_index: Vec<Vec<usize>>,
    pub matrix: BoolMatrix,
}

impl AdjacencySystem {
    fn build(rows: Vec<Vec<usize>>, cols: Vec<Vec<usize>>, ok: impl Fn(&[usize], &[usize]) -> bool) -> Self {
        let matrix = BoolMatrix::from_fn(rows.len(), cols.len(), |r, c| ok(&rows[r], &cols[c]));
        AdjacencySystem {
            row_index: rows,
            col_index: cols,
            matrix,
        }
    }

    /// Rows are the `a`-cliques in lexicographic order, columns the
    /// `b`-cliques sorted by weight (ties lexicographic). Entries mark pairs
    /// whose union is a `K_{a+b}`.
    pub fn clique(g: &Graph, a: usize, b: usize) -> Result<Self> {
        let rows = cliques(g, a);
        let cols = weight_sorted(g, cliques(g, b))?;
        Ok(Self::build(rows, cols, |u, v| joins_clique(g, u, v)))
    }
}

fn disjoint(u: &[usize], v: &[usize]) -> bool {
    u.iter().all(|x| !v.contains(x))
}

fn joins_clique(g: &Graph, u: &[usize], v: &[usize]) -> bool {
    u.iter().all(|&x| v.iter().all(|&y| x != y && g.has_edge(x, y)))
}

fn weight_sorted(g: &Graph, mut sets: Vec<Vec<usize>>) -> Result<Vec<Vec<usize>>> {
    let mut keyed = Vec::with_capacity(sets.len());
    for s in sets.drain(..) {
        keyed.push((g.vertex_weight_sum(&s)?, s));
    }
    let mut cmps = 0u64;
    keyed.sort_by(|x, y| {
        cmps += 1;
        x.0.total_cmp(&y.0).then_with(|| x.1.cmp(&y.1))
    });
    count_cmp(cmps);
    Ok(keyed.into_iter().map(|(_, s)| s).collect())
}

/// For every vertex pair, the heaviest found subgraph containing both.
#[derive(Clone, Debug)]
pub struct AllPairsBest {
    n: usize,
    best: Vec<Option<SubgraphResult>>,
}

impl AllPairsBest {
    fn new(n: usize) -> Self {
        AllPairsBest {
            n,
            best: vec![None; n * n],
        }
    }

    fn slot(&self, u: usize, v: usize) -> usize {
        let (u, v) = (u.min(v), u.max(v));
        (u - 1) * self.n + (v - 1)
    }

    fn offer(&mut self, found: &SubgraphResult) {
        for (x, &u) in found.vertices.iter().enumerate() {
            for &v in &found.vertices[x + 1..] {
                let s = self.slot(u, v);
                count_cmp(1);
                match &self.best[s] {
                    Some(b) if !found.beats(b) => {}
                    _ => self.best[s] = Some(found.clone()),
                }
            }
        }
    }

    /// The heaviest subgraph containing `u` and `v` (`u != v`).
    pub fn get(&self, u: usize, v: usize) -> Option<&SubgraphResult> {
        if u == v || u == 0 || v == 0 || u > self.n || v > self.n {
            return None;
        }
        self.best[self.slot(u, v)].as_ref()
    }

    /// `((u, v), best)` for every pair `u < v` that has one.
    pub fn pairs(&self) -> impl Iterator<Item = ((usize, usize), &SubgraphResult)> + '_ {
        (1..=self.n).flat_map(move |u| (u + 1..=self.n).filter_map(move |v| self.get(u, v).map(|r| ((u, v), r))))
    }

    /// The overall heaviest subgraph (ties to the smaller vertex tuple).
    pub fn best(&self) -> Option<&SubgraphResult> {
        let mut out: Option<&SubgraphResult> = None;
        for (_, r) in self.pairs() {
            if out.map_or(true, |b| r.beats(b)) {
                out = Some(r);
            }
        }
        out
    }
}

/// Limits for the all-pairs routines.
#[derive(Clone, Copy, Debug)]
pub struct AllPairsOptions {
    pub cap: usize,
    /// Bucket width of the witness product; `None` uses the plan's `ceil(n^mu)`.
    pub width: Option<usize>,
}

impl Default for AllPairsOptions {
    fn default() -> Self {
        AllPairsOptions {
            cap: DEFAULT_PATTERN_CAP,
            width: None,
        }
    }
}

fn check_plan(h: usize, plan: &PlanParameters, cap: usize) -> Result<()> {
    if h < 3 {
        return Err(Error::InvalidArgument(format!("pattern size {h} is below 3")));
    }
    if h > cap {
        return Err(Error::CapExceeded {
            what: "h",
            value: h,
            cap,
        });
    }
    if plan.h != h || plan.a + plan.b + plan.c != h || plan.a == 0 || plan.b == 0 || plan.c == 0 {
        return Err(Error::InvalidArgument(format!(
            "plan ({}, {}, {}) does not split h = {h}",
            plan.a, plan.b, plan.c
        )));
    }
    Ok(())
}

/// For every vertex pair, the heaviest `K_h` containing it.
pub fn all_pairs_max_clique(g: &Graph, h: usize, plan: &PlanParameters) -> Result<AllPairsBest> {
    all_pairs_max_clique_with(g, h, plan, &AllPairsOptions::default())
}

pub fn all_pairs_max_clique_with(
    g: &Graph,
    h: usize,
    plan: &PlanParameters,
    opts: &AllPairsOptions,
) -> Result<AllPairsBest> {
    g.vertex_weights()?;
    check_plan(h, plan, opts.cap)?;
    let (a, b, c) = plan.split();
    let left = AdjacencySystem::clique(g, a, b)?;
    let s_c = cliques(g, c);
    let right = AdjacencySystem::build(left.col_index.clone(), s_c, |u, v| joins_clique(g, u, v));
    let width = opts.width.unwrap_or_else(|| plan.bucket_width(g.n()));
    let w = max_witness_product(&left.matrix, &right.matrix, width)?;

    let mut out = AllPairsBest::new(g.n());
    for (r, u) in left.row_index.iter().enumerate() {
        for (cidx, v) in right.col_index.iter().enumerate() {
            let k = w.get(r, cidx);
            if k == 0 || !joins_clique(g, u, v) {
                continue;
            }
            let mut set = u.clone();
            set.extend_from_slice(v);
            set.extend_from_slice(&left.col_index[k - 1]);
            out.offer(&SubgraphResult::by_vertex_weight(g, &set, SubgraphKind::Clique)?);
        }
    }
    Ok(out)
}

/// A pattern graph on labels `1..=h`.
#[derive(Clone, Debug, PartialEq)]
pub struct Pattern {
    h: usize,
    adj: Vec<bool>,
}

impl Pattern {
    pub fn from_edges(h: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![false; h * h];
        for &(x, y) in edges {
            if x == 0 || y == 0 || x > h || y > h || x == y {
                return Err(Error::InvalidArgument(format!(
                    "pattern edge ({x}, {y}) invalid for h = {h}"
                )));
            }
            adj[(x - 1) * h + (y - 1)] = true;
            adj[(y - 1) * h + (x - 1)] = true;
        }
        Ok(Pattern { h, adj })
    }

    pub fn clique(h: usize) -> Self {
        let mut edges = Vec::new();
        for x in 1..=h {
            for y in x + 1..=h {
                edges.push((x, y));
            }
        }
        Self::from_edges(h, &edges).expect("valid labels")
    }

    pub fn path(h: usize) -> Self {
        let edges: Vec<_> = (1..h).map(|x| (x, x + 1)).collect();
        Self::from_edges(h, &edges).expect("valid labels")
    }

    pub fn cycle(h: usize) -> Self {
        let mut edges: Vec<_> = (1..h).map(|x| (x, x + 1)).collect();
        edges.push((h, 1));
        Self::from_edges(h, &edges).expect("valid labels")
    }

    /// Reads a pattern from the graph text format (weights and colors ignored).
    pub fn from_graph(g: &Graph) -> Self {
        Self::from_edges(g.n(), g.edges()).expect("graph edges are valid labels")
    }

    pub fn h(&self) -> usize {
        self.h
    }

    /// Labels are 1-based.
    pub fn has_edge(&self, x: usize, y: usize) -> bool {
        self.adj[(x - 1) * self.h + (y - 1)]
    }

    /// The pattern with label `order[i]` renamed to `i + 1`.
    fn relabel(&self, order: &[usize]) -> Pattern {
        let h = self.h;
        let mut adj = vec![false; h * h];
        for x in 0..h {
            for y in 0..h {
                adj[x * h + y] = self.has_edge(order[x], order[y]);
            }
        }
        Pattern { h, adj }
    }

    /// Distinct relabelings that put each pair of labels first and last.
    fn end_pairs(&self) -> Vec<Pattern> {
        let h = self.h;
        let mut out: Vec<Pattern> = Vec::new();
        for p in 1..=h {
            for q in p + 1..=h {
                let mut order = vec![p];
                order.extend((1..=h).filter(|&x| x != p && x != q));
                order.push(q);
                let r = self.relabel(&order);
                if !out.contains(&r) {
                    out.push(r);
                }
            }
        }
        out
    }
}

/// Ordered tuples `t` with `t[p]` playing label `first + p`, matching the
/// pattern's edges and non-edges among those labels.
fn label_tuples(g: &Graph, pat: &Pattern, first: usize, len: usize) -> Vec<Vec<usize>> {
    fn grow(g: &Graph, pat: &Pattern, first: usize, len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        let label = first + cur.len();
        for v in g.vertices() {
            if cur.contains(&v) {
                continue;
            }
            let fits = cur
                .iter()
                .enumerate()
                .all(|(p, &x)| g.has_edge(x, v) == pat.has_edge(first + p, label));
            if fits {
                cur.push(v);
                grow(g, pat, first, len, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    grow(g, pat, first, len, &mut Vec::new(), &mut out);
    out
}

fn cross_fits(g: &Graph, pat: &Pattern, u: &[usize], ufirst: usize, v: &[usize], vfirst: usize) -> bool {
    disjoint(u, v)
        && u.iter().enumerate().all(|(p, &x)| {
            v.iter()
                .enumerate()
                .all(|(q, &y)| g.has_edge(x, y) == pat.has_edge(ufirst + p, vfirst + q))
        })
}

/// For every vertex pair, the heaviest induced copy of `pat` containing it.
pub fn all_pairs_max_pattern(g: &Graph, pat: &Pattern, plan: &PlanParameters) -> Result<AllPairsBest> {
    all_pairs_max_pattern_with(g, pat, plan, &AllPairsOptions::default())
}

pub fn all_pairs_max_pattern_with(
    g: &Graph,
    pat: &Pattern,
    plan: &PlanParameters,
    opts: &AllPairsOptions,
) -> Result<AllPairsBest> {
    g.vertex_weights()?;
    check_plan(pat.h(), plan, opts.cap)?;
    // A pair is credited only when it sits in the first and last parts, so
    // every pair of labels is moved there once.
    let mut out = AllPairsBest::new(g.n());
    for relabeled in pat.end_pairs() {
        pattern_pass(g, &relabeled, plan, opts, &mut out)?;
    }
    Ok(out)
}

fn pattern_pass(
    g: &Graph,
    pat: &Pattern,
    plan: &PlanParameters,
    opts: &AllPairsOptions,
    out: &mut AllPairsBest,
) -> Result<()> {
    let (a, b, c) = plan.split();
    let (l1, l2, l3) = (1, a + 1, a + b + 1);
    let s_a = label_tuples(g, pat, l1, a);
    let mut s_b: Vec<(f64, Vec<usize>)> = Vec::new();
    for t in label_tuples(g, pat, l2, b) {
        s_b.push((g.vertex_weight_sum(&t)?, t));
    }
    let mut cmps = 0u64;
    s_b.sort_by(|x, y| {
        cmps += 1;
        x.0.total_cmp(&y.0).then_with(|| x.1.cmp(&y.1))
    });
    count_cmp(cmps);
    let s_b: Vec<Vec<usize>> = s_b.into_iter().map(|(_, t)| t).collect();
    let s_c = label_tuples(g, pat, l3, c);
    let left = AdjacencySystem::build(s_a, s_b, |u, v| cross_fits(g, pat, u, l1, v, l2));
    let right = AdjacencySystem::build(left.col_index.clone(), s_c, |u, v| cross_fits(g, pat, u, l2, v, l3));
    let width = opts.width.unwrap_or_else(|| plan.bucket_width(g.n()));
    let w = max_witness_product(&left.matrix, &right.matrix, width)?;

    for (r, u) in left.row_index.iter().enumerate() {
        for (cidx, v) in right.col_index.iter().enumerate() {
            let k = w.get(r, cidx);
            if k == 0 || !cross_fits(g, pat, u, l1, v, l3) {
                continue;
            }
            let mut set = u.clone();
            set.extend_from_slice(v);
            set.extend_from_slice(&left.col_index[k - 1]);
            out.offer(&SubgraphResult::by_vertex_weight(g, &set, SubgraphKind::Pattern)?);
        }
    }
    Ok(())
}

/// Threshold counts over the common neighborhoods of vertex pairs.
///
/// Matrices are indexed by 0-based vertex positions (`v - 1`).
struct TriangleCounts<'g> {
    g: &'g Graph,
    w: &'g [f64],
    common: CountMatrix,
    params: DominanceParams,
}

impl<'g> TriangleCounts<'g> {
    fn new(g: &'g Graph) -> Result<Self> {
        let w = g.vertex_weights()?;
        let adj = g.adjacency_matrix();
        let common = count_product(&adj, &adj)?;
        Ok(TriangleCounts {
            g,
            w,
            common,
            params: DominanceParams::default(),
        })
    }

    /// `[i,j]`: common neighbors `k` with `K <= w(i) + w(j) + w(k)`, tested
    /// as `K - w(i) <= w(j) + w(k)`.
    fn at_least(&self, k: f64) -> Result<CountMatrix> {
        let n = self.g.n();
        if k == f64::NEG_INFINITY {
            return Ok(self.common.clone());
        }
        if k == f64::INFINITY || n == 0 {
            return Ok(CountMatrix::zeros(n, n));
        }
        let w = self.w;
        let g = self.g;
        let f = PointSet::new(
            n,
            n,
            (0..n * n)
                .map(|x| {
                    let (i, t) = (x / n + 1, x % n + 1);
                    if g.has_edge(i, t) {
                        k - w[i]
                    } else {
                        f64::INFINITY
                    }
                })
                .collect(),
        )?;
        let q = PointSet::new(n, n, self.sums(f64::NEG_INFINITY))?;
        dominance_matrix(&f, &q, &self.params)
    }

    /// `[i,j]`: common neighbors `k` with `w(i) + w(j) + w(k) <= K`, tested
    /// as `w(j) + w(k) <= K - w(i)`.
    fn at_most(&self, k: f64) -> Result<CountMatrix> {
        let n = self.g.n();
        if k == f64::INFINITY {
            return Ok(self.common.clone());
        }
        if k == f64::NEG_INFINITY || n == 0 {
            return Ok(CountMatrix::zeros(n, n));
        }
        let w = self.w;
        let g = self.g;
        let q = PointSet::new(n, n, self.sums(f64::INFINITY))?;
        let f = PointSet::new(
            n,
            n,
            (0..n * n)
                .map(|x| {
                    let (i, t) = (x / n + 1, x % n + 1);
                    if g.has_edge(i, t) {
                        k - w[i]
                    } else {
                        f64::NEG_INFINITY
                    }
                })
                .collect(),
        )?;
        Ok(dominance_matrix(&q, &f, &self.params)?.transpose())
    }

    /// Row `j`, column `k`: `w(j) + w(k)` on edges, `missing` elsewhere.
    fn sums(&self, missing: f64) -> Vec<f64> {
        let n = self.g.n();
        (0..n * n)
            .map(|x| {
                let (j, t) = (x / n + 1, x % n + 1);
                if self.g.has_edge(j, t) {
                    self.w[j] + self.w[t]
                } else {
                    missing
                }
            })
            .collect()
    }

    /// Common neighbors with the tested sum strictly below / at-or-below the bound.
    fn below(&self, lo: Bound<f64>) -> Result<CountMatrix> {
        match lo {
            Bound::Unbounded => Ok(CountMatrix::zeros(self.g.n(), self.g.n())),
            Bound::Included(k) => Ok(self.minus(&self.common, &self.at_least(k)?)),
            Bound::Excluded(k) => self.at_most(k),
        }
    }

    fn above(&self, hi: Bound<f64>) -> Result<CountMatrix> {
        match hi {
            Bound::Unbounded => Ok(CountMatrix::zeros(self.g.n(), self.g.n())),
            Bound::Included(k) => Ok(self.minus(&self.common, &self.at_most(k)?)),
            Bound::Excluded(k) => self.at_least(k),
        }
    }

    fn minus(&self, x: &CountMatrix, y: &CountMatrix) -> CountMatrix {
        let mut out = x.clone();
        for i in 0..x.rows() {
            for j in 0..x.cols() {
                out.set(i, j, x.get(i, j).saturating_sub(y.get(i, j)));
            }
        }
        out
    }

    /// `F[i,j]`: common neighbors `k` with the triangle weight in `window`.
    fn window(&self, window: &Interval) -> Result<CountMatrix> {
        let below = self.below(window.lo)?;
        let above = self.above(window.hi)?;
        let mut f = self.minus(&self.common, &below);
        f = self.minus(&f, &above);
        Ok(f)
    }

    /// The same test the counts use, for one completing vertex.
    fn in_window(&self, window: &Interval, i: usize, j: usize, k: usize) -> bool {
        let s = self.w[j] + self.w[k];
        let lo = match window.lo {
            Bound::Unbounded => true,
            Bound::Included(x) => x - self.w[i] <= s,
            Bound::Excluded(x) => !(s <= x - self.w[i]),
        };
        let hi = match window.hi {
            Bound::Unbounded => true,
            Bound::Included(x) => s <= x - self.w[i],
            Bound::Excluded(x) => !(x - self.w[i] <= s),
        };
        lo && hi
    }
}

/// Number of triangles through each ordered vertex pair with weight in
/// `window` (row/column `v - 1`). Entries on non-edges count common
/// neighbors only and are not triangles.
pub fn window_counts(g: &Graph, window: &Interval) -> Result<CountMatrix> {
    TriangleCounts::new(g)?.window(window)
}

/// An edge `(i, j)`, `i < j`, lying on a triangle of weight at least `k`.
pub fn triangle_threshold_edge(g: &Graph, k: f64) -> Result<Option<(usize, usize)>> {
    let counts = TriangleCounts::new(g)?;
    threshold_edge(&counts, k)
}

fn threshold_edge(counts: &TriangleCounts<'_>, k: f64) -> Result<Option<(usize, usize)>> {
    let d = counts.at_least(k)?;
    Ok(counts.g.edges().iter().copied().find(|&(i, j)| d.get(i - 1, j - 1) > 0))
}

fn best_through_edge(g: &Graph, i: usize, j: usize) -> Result<Option<SubgraphResult>> {
    let mut best = None;
    for k in g.vertices() {
        if k != i && k != j && g.has_edge(i, k) && g.has_edge(j, k) {
            keep_best(
                &mut best,
                SubgraphResult::by_vertex_weight(g, &[i, j, k], SubgraphKind::Triangle)?,
            );
        }
    }
    Ok(best)
}

/// Heaviest triangle by threshold search.
///
/// Weights are shifted so the lightest vertex weighs 1. Thresholds `2^i`
/// are tried until one fails, then the bracket is bisected over the ordered
/// set of doubles until its ends are adjacent, so at most 64 further
/// threshold tests are made. The last successful threshold yields an edge of
/// a heaviest triangle and the third vertex is found by trying every vertex.
pub fn heaviest_triangle_det(g: &Graph) -> Result<Option<SubgraphResult>> {
    let w = g.vertex_weights()?;
    if g.n() < 3 {
        return Ok(None);
    }
    let min = w[1..].iter().copied().fold(f64::INFINITY, f64::min);
    let shifted: Vec<f64> = w[1..].iter().map(|&x| x + (1.0 - min)).collect();
    let sg = g.clone().with_vertex_weights(&shifted)?;
    let counts = TriangleCounts::new(&sg)?;

    let Some(mut edge) = threshold_edge(&counts, 1.0)? else {
        return Ok(None);
    };
    let mut lo = 1.0f64;
    let mut hi = 2.0f64;
    while let Some(e) = threshold_edge(&counts, hi)? {
        edge = e;
        lo = hi;
        hi *= 2.0;
        if hi.is_infinite() {
            break;
        }
    }
    // positive doubles are ordered like their bit patterns
    let (mut lo_bits, mut hi_bits) = (lo.to_bits(), hi.to_bits());
    while hi_bits - lo_bits > 1 {
        let mid_bits = lo_bits + (hi_bits - lo_bits) / 2;
        match threshold_edge(&counts, f64::from_bits(mid_bits))? {
            Some(e) => {
                edge = e;
                lo_bits = mid_bits;
            }
            None => hi_bits = mid_bits,
        }
    }
    best_through_edge(g, edge.0, edge.1)
}

/// Draws triangles uniformly from those whose weight lies in a window.
pub struct TriangleSampler<'g> {
    counts: TriangleCounts<'g>,
    window: Interval,
    /// `(i, j, F[i,j])` over ordered edge pairs with `F > 0`.
    pairs: Vec<(usize, usize, u64)>,
    total: u64,
}

/// Bound on redraws when a drawn triangle's canonical weight falls outside
/// the window (possible only through rounding in the counting test).
const REDRAWS: usize = 64;

impl<'g> TriangleSampler<'g> {
    pub fn new(g: &'g Graph, window: Interval) -> Result<Self> {
        let counts = TriangleCounts::new(g)?;
        let f = counts.window(&window)?;
        let mut pairs = Vec::new();
        let mut total = 0u64;
        for &(i, j) in g.edges() {
            for (x, y) in [(i, j), (j, i)] {
                let c = f.get(x - 1, y - 1) as u64;
                if c > 0 {
                    total += c;
                    pairs.push((x, y, c));
                }
            }
        }
        Ok(TriangleSampler {
            counts,
            window,
            pairs,
            total,
        })
    }

    /// Sum of `F` over ordered edge pairs: six times the number of triangles.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Option<SubgraphResult>> {
        if self.total == 0 {
            return Ok(None);
        }
        let g = self.counts.g;
        let mut last = None;
        for _ in 0..REDRAWS {
            let mut r = rng.random_range(0..self.total);
            let &(i, j, _) = self
                .pairs
                .iter()
                .find(|&&(_, _, c)| {
                    if r < c {
                        true
                    } else {
                        r -= c;
                        false
                    }
                })
                .expect("r < total");
            let ks: Vec<usize> = g
                .neighbors(i)
                .iter()
                .copied()
                .filter(|&k| k != j && g.has_edge(j, k) && self.counts.in_window(&self.window, i, j, k))
                .collect();
            let k = ks[rng.random_range(0..ks.len())];
            let t = SubgraphResult::by_vertex_weight(g, &[i, j, k], SubgraphKind::Triangle)?;
            if self.window.contains(t.weight) {
                return Ok(Some(t));
            }
            last = Some(t);
        }
        Ok(last)
    }
}

/// One triangle drawn uniformly from those with weight in `window`.
pub fn sample_triangle<R: Rng + ?Sized>(g: &Graph, window: Interval, rng: &mut R) -> Result<Option<SubgraphResult>> {
    TriangleSampler::new(g, window)?.sample(rng)
}

/// Outcome of [`heaviest_triangle_rand_stats`].
#[derive(Clone, Debug, PartialEq)]
pub struct RandStats {
    pub result: Option<SubgraphResult>,
    /// Number of heavier-window draws that found a heavier triangle.
    pub iterations: usize,
}

pub fn heaviest_triangle_rand<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> Result<Option<SubgraphResult>> {
    Ok(heaviest_triangle_rand_stats(g, rng)?.result)
}

/// Heaviest triangle by repeated uniform sampling: start from a uniform
/// triangle and keep drawing from the triangles strictly heavier than the
/// incumbent until there are none.
pub fn heaviest_triangle_rand_stats<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> Result<RandStats> {
    let Some(mut cur) = sample_triangle(g, Interval::ALL, rng)? else {
        return Ok(RandStats {
            result: None,
            iterations: 0,
        });
    };
    let mut iterations = 0;
    loop {
        let sampler = TriangleSampler::new(g, Interval::above(cur.weight))?;
        if sampler.is_empty() {
            break;
        }
        match sampler.sample(rng)? {
            Some(t) if t.weight > cur.weight => {
                cur = t;
                iterations += 1;
            }
            // the counts disagree with canonical sums only by rounding
            _ => break,
        }
    }
    Ok(RandStats {
        result: Some(cur),
        iterations,
    })
}

/// Heaviest triangle for sparse graphs: vertices of degree at most
/// `m^((5 - w) / (13 - 3w))` are handled by scanning their neighbor pairs,
/// the rest by the all-pairs routine on the subgraph they induce.
pub fn heaviest_triangle_sparse(g: &Graph, omega: f64) -> Result<Option<SubgraphResult>> {
    g.vertex_weights()?;
    let plan = plan_parameters(omega, 3)?;
    let m = g.m() as f64;
    let delta = m.powf((5.0 - omega) / (13.0 - 3.0 * omega));
    let mut best = None;
    let mut high = Vec::new();
    for x in g.vertices() {
        let nb = g.neighbors(x);
        if nb.len() as f64 > delta {
            high.push(x);
            continue;
        }
        for (p, &y) in nb.iter().enumerate() {
            for &z in &nb[p + 1..] {
                if g.has_edge(y, z) {
                    keep_best(
                        &mut best,
                        SubgraphResult::by_vertex_weight(g, &[x, y, z], SubgraphKind::Triangle)?,
                    );
                }
            }
        }
    }
    if high.len() >= 3 {
        let (sub, back) = g.induced(&high);
        if let Some(t) = all_pairs_max_clique(&sub, 3, &plan)?.best() {
            let vs: Vec<usize> = t.vertices.iter().map(|&v| back[v]).collect();
            keep_best(
                &mut best,
                SubgraphResult::by_vertex_weight(g, &vs, SubgraphKind::Triangle)?,
            );
        }
    }
    Ok(best)
}

/// Heaviest triangle from the all-pairs routine.
pub fn heaviest_triangle_allpairs(g: &Graph, omega: f64) -> Result<Option<SubgraphResult>> {
    let plan = plan_parameters(omega, 3)?;
    Ok(all_pairs_max_clique(g, 3, &plan)?.best().map(|t| SubgraphResult {
        kind: SubgraphKind::Triangle,
        ..t.clone()
    }))
}

/// Heaviest clique on `h` vertices.
pub fn heaviest_clique(g: &Graph, h: usize, omega: f64) -> Result<Option<SubgraphResult>> {
    let plan = plan_parameters(omega, h)?;
    Ok(all_pairs_max_clique(g, h, &plan)?.best().cloned())
}

/// Triangle maximizing `f(w(x), w(y), w(z))` for `x < y < z`, where `f` is
/// nondecreasing in each argument. On each edge the heaviest common
/// neighbor is optimal, so one maximum-witness product over the
/// weight-sorted vertex order suffices. The result's weight is the value of `f`.
pub fn heaviest_triangle_by<F>(g: &Graph, f: F) -> Result<Option<SubgraphResult>>
where
    F: Fn(f64, f64, f64) -> f64,
{
    let w = g.vertex_weights()?;
    let n = g.n();
    let order = weight_sorted(g, g.vertices().map(|v| vec![v]).collect())?;
    let order: Vec<usize> = order.into_iter().map(|s| s[0]).collect();
    let a = BoolMatrix::from_fn(n, n, |i, k| g.has_edge(i + 1, order[k]));
    let wit = max_witness_product(&a, &a.transpose(), ((n as f64).sqrt().ceil() as usize).max(1))?;
    let mut best: Option<SubgraphResult> = None;
    for &(i, j) in g.edges() {
        let k = wit.get(i - 1, j - 1);
        if k == 0 {
            continue;
        }
        let mut vs = vec![i, j, order[k - 1]];
        vs.sort_unstable();
        let cand = SubgraphResult {
            weight: f(w[vs[0]], w[vs[1]], w[vs[2]]),
            vertices: vs,
            kind: SubgraphKind::Triangle,
        };
        keep_best(&mut best, cand);
    }
    Ok(best)
}

/// Heaviest (not necessarily induced) `K_{2,k}`: two side vertices and `k`
/// common neighbors. Vertices are reported as `[side, side, centers...]`
/// with sides ascending and centers heaviest first.
pub fn heaviest_k2k(g: &Graph, k: usize) -> Result<Option<SubgraphResult>> {
    g.vertex_weights()?;
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let n = g.n();
    let order = weight_sorted(g, g.vertices().map(|v| vec![v]).collect())?;
    let order: Vec<usize> = order.into_iter().map(|s| s[0]).collect();
    let a = BoolMatrix::from_fn(n, n, |i, x| g.has_edge(i + 1, order[x]));
    let top = top_k_witnesses(&a, &a.transpose(), k)?;
    let mut best: Option<SubgraphResult> = None;
    for i in 1..=n {
        for j in i + 1..=n {
            let list = top.get(i - 1, j - 1);
            if list.len() < k {
                continue;
            }
            let mut vs = vec![i, j];
            vs.extend(list.iter().map(|&x| order[x as usize - 1]));
            let weight = g.vertex_weight_sum(&vs)?;
            keep_best(
                &mut best,
                SubgraphResult {
                    vertices: vs,
                    weight,
                    kind: SubgraphKind::Pattern,
                },
            );
        }
    }
    Ok(best)
}

/// The `K_k` edge-covering number: the largest number of edges incident
/// with a copy of `K_k`, or 0 if there is none.
pub fn edge_cover_number(g: &Graph, k: usize) -> Result<usize> {
    edge_cover_number_with(g, k, &AllPairsOptions::default())
}

pub fn edge_cover_number_with(g: &Graph, k: usize, opts: &AllPairsOptions) -> Result<usize> {
    if k < 3 {
        return Err(Error::InvalidArgument(format!("k = {k} is below 3")));
    }
    let degrees: Vec<f64> = g.vertices().map(|v| g.degree(v) as f64).collect();
    let dg = g.clone().with_vertex_weights(&degrees)?;
    let plan = plan_parameters(3.0, k)?;
    Ok(match all_pairs_max_clique_with(&dg, k, &plan, opts)?.best() {
        Some(t) => t.weight as usize - k * (k - 1) / 2,
        None => 0,
    })
}
