//! Brute-force reference answers.
//!
//! Everything here follows the defining formula directly: subgraphs are
//! found by enumerating vertex subsets or tuples, products by triple loops.
//! Nothing is shared with the fast paths beyond graph and matrix accessors,
//! so an agreement between the two is evidence and not an echo. Enumeration
//! refuses graphs above [`Oracle::cap`] vertices.
//!
//! ```
//! use hsub::graph::parse_graph;
//! use hsub::oracle::{Oracle, Weighting};
//!
//! let g = parse_graph("g 3\nvw 1 1\nvw 2 2\nvw 3 3\ne 1 2\ne 2 3\ne 1 3\n").unwrap();
//! let best = Oracle::default().max_clique(&g, 3, Weighting::Vertex).unwrap().unwrap();
//! assert_eq!(best.weight, 6.0);
//! ```

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::extmat::{BoolMatrix, ExtMatrix};
use crate::graph::{Graph, SubgraphKind, SubgraphResult, VertexColoring};
use crate::market::MarketInstance;
use crate::vertexmax::Pattern;

/// Default vertex cap for subgraph enumeration.
pub const DEFAULT_CAP: usize = 32;

/// Which weights a subgraph is scored by.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Weighting {
    Vertex,
    Edge,
}

#[derive(Clone, Copy, Debug)]
pub struct Oracle {
    pub cap: usize,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle { cap: DEFAULT_CAP }
    }
}

/// Per-pair maxima keyed by `(u, v)` with `u < v`.
pub type PairTable = BTreeMap<(usize, usize), SubgraphResult>;

fn better(best: &mut Option<SubgraphResult>, cand: SubgraphResult) {
    let replace = match best {
        None => true,
        Some(b) => cand.weight > b.weight || (cand.weight == b.weight && cand.vertices < b.vertices),
    };
    if replace {
        *best = Some(cand);
    }
}

fn all_subsets(n: usize, size: usize, mut visit: impl FnMut(&[usize])) {
    fn go(n: usize, size: usize, start: usize, cur: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if cur.len() == size {
            visit(cur);
            return;
        }
        for v in start..=n {
            if n + 1 - v < size - cur.len() {
                break;
            }
            cur.push(v);
            go(n, size, v + 1, cur, visit);
            cur.pop();
        }
    }
    go(n, size, 1, &mut Vec::with_capacity(size), &mut visit);
}

fn pairs_of(vs: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..vs.len() {
        for j in i + 1..vs.len() {
            out.push((vs[i].min(vs[j]), vs[i].max(vs[j])));
        }
    }
    out
}

impl Oracle {
    pub fn with_cap(cap: usize) -> Self {
        Oracle { cap }
    }

    fn guard(&self, g: &Graph) -> Result<()> {
        if g.n() > self.cap {
            return Err(Error::CapExceeded {
                what: "n",
                value: g.n(),
                cap: self.cap,
            });
        }
        Ok(())
    }

    fn score(&self, g: &Graph, vs: &[usize], by: Weighting, kind: SubgraphKind) -> Result<SubgraphResult> {
        let mut sorted = vs.to_vec();
        sorted.sort_unstable();
        let weight = match by {
            Weighting::Vertex => {
                let w = g.vertex_weights()?;
                sorted.iter().fold(0.0, |acc, &v| acc + w[v])
            }
            Weighting::Edge => {
                g.edge_weights()?;
                pairs_of(&sorted)
                    .into_iter()
                    .filter_map(|(x, y)| g.edge_weight(x, y))
                    .fold(0.0, |acc, w| acc + w)
            }
        };
        Ok(SubgraphResult {
            vertices: sorted,
            weight,
            kind,
        })
    }

    /// Every `h`-clique, ascending tuples in lexicographic order.
    pub fn enumerate_cliques(&self, g: &Graph, h: usize) -> Result<Vec<Vec<usize>>> {
        self.guard(g)?;
        let mut out = Vec::new();
        all_subsets(g.n(), h, |s| {
            if pairs_of(s).iter().all(|&(x, y)| g.has_edge(x, y)) {
                out.push(s.to_vec());
            }
        });
        Ok(out)
    }

    pub fn max_clique(&self, g: &Graph, h: usize, by: Weighting) -> Result<Option<SubgraphResult>> {
        let kind = if h == 3 {
            SubgraphKind::Triangle
        } else {
            SubgraphKind::Clique
        };
        let mut best = None;
        for c in self.enumerate_cliques(g, h)? {
            better(&mut best, self.score(g, &c, by, kind)?);
        }
        Ok(best)
    }

    /// For every pair, the heaviest vertex-weighted `K_h` containing it.
    pub fn all_pairs(&self, g: &Graph, h: usize) -> Result<PairTable> {
        let mut table = PairTable::new();
        for c in self.enumerate_cliques(g, h)? {
            let r = self.score(g, &c, Weighting::Vertex, SubgraphKind::Clique)?;
            offer_pairs(&mut table, &r);
        }
        Ok(table)
    }

    /// For every pair, the heaviest vertex-weighted induced copy of `pat`.
    pub fn all_pairs_pattern(&self, g: &Graph, pat: &Pattern) -> Result<PairTable> {
        self.guard(g)?;
        let h = pat.h();
        let mut table = PairTable::new();
        let mut sets: Vec<Vec<usize>> = Vec::new();
        all_subsets(g.n(), h, |s| {
            if hosts_pattern(g, pat, s) {
                sets.push(s.to_vec());
            }
        });
        for s in sets {
            let r = self.score(g, &s, Weighting::Vertex, SubgraphKind::Pattern)?;
            offer_pairs(&mut table, &r);
        }
        Ok(table)
    }

    /// All triangles whose vertex weight passes `keep`, lexicographic.
    pub fn triangles_where(&self, g: &Graph, keep: impl Fn(f64) -> bool) -> Result<Vec<SubgraphResult>> {
        let mut out = Vec::new();
        for c in self.enumerate_cliques(g, 3)? {
            let r = self.score(g, &c, Weighting::Vertex, SubgraphKind::Triangle)?;
            if keep(r.weight) {
                out.push(r);
            }
        }
        Ok(out)
    }

    /// Heaviest `K_{2,k}` as `[side, side, centers heaviest first]`.
    pub fn k2k(&self, g: &Graph, k: usize) -> Result<Option<SubgraphResult>> {
        self.guard(g)?;
        let w = g.vertex_weights()?;
        let mut best = None;
        for i in 1..=g.n() {
            for j in i + 1..=g.n() {
                let mut common: Vec<usize> = g.vertices().filter(|&x| g.has_edge(i, x) && g.has_edge(j, x)).collect();
                if common.len() < k {
                    continue;
                }
                common.sort_by(|&x, &y| w[y].total_cmp(&w[x]).then(y.cmp(&x)));
                let mut vs = vec![i, j];
                vs.extend_from_slice(&common[..k]);
                let weight = vs.iter().fold(0.0, |acc, &v| acc + w[v]);
                better(
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

    /// Largest number of edges touching a `K_k`, 0 if there is none.
    pub fn edge_cover(&self, g: &Graph, k: usize) -> Result<usize> {
        let mut best = 0;
        for c in self.enumerate_cliques(g, k)? {
            let touching = g
                .edges()
                .iter()
                .filter(|&&(x, y)| c.contains(&x) || c.contains(&y))
                .count();
            best = best.max(touching);
        }
        Ok(best)
    }

    /// Heaviest simple `k`-cycle by depth-first search from each smallest vertex.
    pub fn k_cycle(&self, g: &Graph, k: usize) -> Result<Option<SubgraphResult>> {
        self.k_cycle_where(g, k, |_| true)
    }

    /// Heaviest `k`-cycle whose vertices are colorful under `coloring`.
    pub fn colorful_k_cycle(&self, g: &Graph, coloring: &VertexColoring) -> Result<Option<SubgraphResult>> {
        self.k_cycle_where(g, coloring.k(), |vs| {
            let mut cs: Vec<usize> = vs.iter().map(|&v| coloring.color(v)).collect();
            cs.sort_unstable();
            cs.dedup();
            cs.len() == vs.len()
        })
    }

    fn k_cycle_where(&self, g: &Graph, k: usize, keep: impl Fn(&[usize]) -> bool) -> Result<Option<SubgraphResult>> {
        self.guard(g)?;
        g.edge_weights()?;
        if k < 3 {
            return Err(Error::InvalidArgument(format!("cycle length {k} is below 3")));
        }
        let mut found: Vec<Vec<usize>> = Vec::new();
        for s in g.vertices() {
            let mut path = vec![s];
            dfs_cycles(g, k, &mut path, &mut found);
        }
        let mut best = None;
        for c in found {
            if !keep(&c) {
                continue;
            }
            let weight = (0..k).fold(0.0, |acc, i| {
                acc + g.edge_weight(c[i], c[(i + 1) % k]).expect("cycle edge")
            });
            better(
                &mut best,
                SubgraphResult {
                    vertices: c,
                    weight,
                    kind: SubgraphKind::Cycle,
                },
            );
        }
        Ok(best)
    }

    /// Heaviest colorful path on `k` vertices between every ordered pair,
    /// `-inf` where there is none. Row-major over `(u - 1, v - 1)`.
    pub fn colorful_paths(&self, g: &Graph, coloring: &VertexColoring, k: usize) -> Result<Vec<f64>> {
        self.guard(g)?;
        g.edge_weights()?;
        let n = g.n();
        let mut out = vec![f64::NEG_INFINITY; n * n];
        fn go(g: &Graph, col: &VertexColoring, k: usize, path: &mut Vec<usize>, w: f64, out: &mut [f64]) {
            let last = *path.last().expect("nonempty");
            if path.len() == k {
                let slot = (path[0] - 1) * g.n() + last - 1;
                if w > out[slot] {
                    out[slot] = w;
                }
                return;
            }
            for v in g.vertices() {
                if g.has_edge(last, v) && !path.iter().any(|&x| col.color(x) == col.color(v)) {
                    let e = g.edge_weight(last, v).expect("edge");
                    path.push(v);
                    go(g, col, k, path, w + e, out);
                    path.pop();
                }
            }
        }
        for s in g.vertices() {
            go(g, coloring, k, &mut vec![s], 0.0, &mut out);
        }
        Ok(out)
    }

    /// The `k`-set with the largest induced edge weight.
    pub fn densest(&self, g: &Graph, k: usize) -> Result<Option<SubgraphResult>> {
        self.guard(g)?;
        let mut sets = Vec::new();
        all_subsets(g.n(), k, |s| sets.push(s.to_vec()));
        let mut best = None;
        for s in sets {
            better(&mut best, self.score(g, &s, Weighting::Edge, SubgraphKind::Pattern)?);
        }
        Ok(best)
    }

    /// Some `h`-clique with pairwise distinct edge colors.
    pub fn rainbow(&self, g: &Graph, h: usize) -> Result<Option<Vec<usize>>> {
        g.edge_colors()?;
        Ok(self.enumerate_cliques(g, h)?.into_iter().find(|c| {
            let mut cs: Vec<u32> = pairs_of(c)
                .iter()
                .map(|&(x, y)| g.edge_color(x, y).expect("edge"))
                .collect();
            let len = cs.len();
            cs.sort_unstable();
            cs.dedup();
            cs.len() == len
        }))
    }

    /// Some `h`-clique whose edges all share one color.
    pub fn mono(&self, g: &Graph, h: usize) -> Result<Option<Vec<usize>>> {
        g.edge_colors()?;
        Ok(self.enumerate_cliques(g, h)?.into_iter().find(|c| {
            let cs: Vec<u32> = pairs_of(c)
                .iter()
                .map(|&(x, y)| g.edge_color(x, y).expect("edge"))
                .collect();
            cs.iter().all(|&x| x == cs[0])
        }))
    }
}

fn offer_pairs(table: &mut PairTable, r: &SubgraphResult) {
    for key in pairs_of(&r.vertices) {
        let replace = match table.get(&key) {
            None => true,
            Some(b) => r.weight > b.weight || (r.weight == b.weight && r.vertices < b.vertices),
        };
        if replace {
            table.insert(key, r.clone());
        }
    }
}

/// Some bijection from the pattern's labels onto `set` matches edges and non-edges.
fn hosts_pattern(g: &Graph, pat: &Pattern, set: &[usize]) -> bool {
    fn go(g: &Graph, pat: &Pattern, set: &[usize], used: &mut Vec<bool>, img: &mut Vec<usize>) -> bool {
        let label = img.len() + 1;
        if label > set.len() {
            return true;
        }
        for (slot, &v) in set.iter().enumerate() {
            if used[slot] {
                continue;
            }
            if img
                .iter()
                .enumerate()
                .all(|(p, &x)| g.has_edge(x, v) == pat.has_edge(p + 1, label))
            {
                used[slot] = true;
                img.push(v);
                if go(g, pat, set, used, img) {
                    return true;
                }
                img.pop();
                used[slot] = false;
            }
        }
        false
    }
    go(g, pat, set, &mut vec![false; set.len()], &mut Vec::new())
}

/// Cycles whose first vertex is their smallest and whose second vertex is
/// smaller than their last, so each cycle appears once.
fn dfs_cycles(g: &Graph, k: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let last = *path.last().expect("nonempty");
    if path.len() == k {
        if g.has_edge(last, path[0]) && path[1] < last {
            out.push(path.clone());
        }
        return;
    }
    for v in g.vertices() {
        if v > path[0] && g.has_edge(last, v) && !path.contains(&v) {
            path.push(v);
            dfs_cycles(g, k, path, out);
            path.pop();
        }
    }
}

/// `D[i][j] = |{k : p[i][k] <= q[j][k]}|`.
pub fn dominance(p: &[Vec<f64>], q: &[Vec<f64>]) -> Vec<Vec<u32>> {
    p.iter()
        .map(|a| {
            q.iter()
                .map(|b| a.iter().zip(b).filter(|(x, y)| x <= y).count() as u32)
                .collect()
        })
        .collect()
}

/// `S[i][j] = sum of values[i][k] over k with p[i][k] <= q[j][k]`, in coordinate order.
pub fn weighted_dominance(p: &[Vec<f64>], q: &[Vec<f64>], values: &[Vec<f64>]) -> Vec<Vec<f64>> {
    p.iter()
        .zip(values)
        .map(|(a, val)| {
            q.iter()
                .map(|b| {
                    let mut s = 0.0;
                    for k in 0..a.len() {
                        if a[k] <= b[k] {
                            s += val[k];
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

fn tropical(a: &ExtMatrix, b: &ExtMatrix, max: bool) -> Result<ExtMatrix> {
    if a.cols() != b.rows() {
        return Err(Error::InvalidArgument("inner dimensions differ".into()));
    }
    let empty = if max { f64::NEG_INFINITY } else { f64::INFINITY };
    ExtMatrix::from_fn(a.rows(), b.cols(), |i, j| {
        let mut acc = empty;
        for k in 0..a.cols() {
            let (x, y) = (a.get(i, k), b.get(k, j));
            // an infinite term on either side decides the sum
            let s = if x == empty || y == empty { empty } else { x + y };
            if (max && s > acc) || (!max && s < acc) {
                acc = s;
            }
        }
        acc
    })
}

/// `C[i,j] = min_k A[i,k] + B[k,j]`, with `+inf` absorbing.
pub fn min_plus(a: &ExtMatrix, b: &ExtMatrix) -> Result<ExtMatrix> {
    tropical(a, b, false)
}

/// `C[i,j] = max_k A[i,k] + B[k,j]`, with `-inf` absorbing.
pub fn max_plus(a: &ExtMatrix, b: &ExtMatrix) -> Result<ExtMatrix> {
    tropical(a, b, true)
}

/// `C[i,j] = 1` iff `min_k A[i,k] + B[k,j] >= K` (`> K` when `strict`).
pub fn distance_threshold(a: &ExtMatrix, b: &ExtMatrix, k: f64, strict: bool) -> Result<Vec<Vec<bool>>> {
    let c = min_plus(a, b)?;
    Ok((0..c.rows())
        .map(|i| {
            (0..c.cols())
                .map(|j| if strict { c.get(i, j) > k } else { c.get(i, j) >= k })
                .collect()
        })
        .collect())
}

/// Leading `k_bits` bits of each exact min-plus entry relative to the
/// smallest power of two above the sum of the finite maxima; `None` for
/// infinite entries.
pub fn msb(a: &ExtMatrix, b: &ExtMatrix, k_bits: u32) -> Result<(f64, Vec<Option<u64>>)> {
    let fmax = |m: &ExtMatrix| {
        m.as_slice()
            .iter()
            .copied()
            .filter(|x| x.is_finite())
            .fold(0.0, f64::max)
    };
    let top = fmax(a) + fmax(b);
    let mut scale = 1.0;
    while scale <= top {
        scale *= 2.0;
    }
    let c = min_plus(a, b)?;
    let bits = c
        .as_slice()
        .iter()
        .map(|&x| {
            if x.is_finite() && x < scale {
                Some((x / scale * 2f64.powi(k_bits as i32)).floor() as u64)
            } else {
                None
            }
        })
        .collect();
    Ok((scale, bits))
}

/// Largest `k` (1-based) with `A[i,k] = B[k,j] = 1`, 0 if none.
pub fn max_witness(a: &BoolMatrix, b: &BoolMatrix) -> Vec<Vec<usize>> {
    (0..a.rows())
        .map(|i| {
            (0..b.cols())
                .map(|j| {
                    (0..a.cols())
                        .rev()
                        .find(|&k| a.get(i, k) && b.get(k, j))
                        .map_or(0, |k| k + 1)
                })
                .collect()
        })
        .collect()
}

/// The `k` largest witnesses (1-based, descending) of every entry.
pub fn top_witnesses(a: &BoolMatrix, b: &BoolMatrix, k: usize) -> Vec<Vec<Vec<usize>>> {
    (0..a.rows())
        .map(|i| {
            (0..b.cols())
                .map(|j| {
                    (0..a.cols())
                        .rev()
                        .filter(|&x| a.get(i, x) && b.get(x, j))
                        .take(k)
                        .map(|x| x + 1)
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// `out[i][j]` iff some witness `k` of `(i, j)` has `keep(i, j, w[k])`.
pub fn interval_witness(
    a: &BoolMatrix,
    b: &BoolMatrix,
    w: &[f64],
    keep: impl Fn(usize, usize, f64) -> bool,
) -> Vec<Vec<bool>> {
    (0..a.rows())
        .map(|i| {
            (0..b.cols())
                .map(|j| (0..a.cols()).any(|k| a.get(i, k) && b.get(k, j) && keep(i, j, w[k])))
                .collect()
        })
        .collect()
}

/// Transaction matrices `(C, P, R)` straight from the definition, row-major
/// over `(buyer, seller)`; sums follow ascending item order.
pub fn market(inst: &MarketInstance) -> (Vec<u32>, Vec<f64>, Vec<f64>) {
    let n = inst.n();
    let (mut c, mut p, mut r) = (vec![0; n * n], vec![0.0; n * n], vec![0.0; n * n]);
    for i in 0..n {
        for j in 0..n {
            for l in 1..=inst.k() {
                let (Some(&bp), Some(&sr)) = (inst.buyer(i).get(&l), inst.seller(j).get(&l)) else {
                    continue;
                };
                if bp >= sr {
                    c[i * n + j] += 1;
                    p[i * n + j] += bp;
                    r[i * n + j] += sr;
                }
            }
        }
    }
    (c, p, r)
}

/// Buyer-proposing deferred acceptance on explicit preference lists.
/// `buyer_lists[i]` ranks sellers best first; `seller_rank[j][i]` is the
/// position of buyer `i` in seller `j`'s list. Returns each buyer's seller.
pub fn deferred_acceptance(buyer_lists: &[Vec<usize>], seller_rank: &[Vec<usize>]) -> Vec<usize> {
    let n = buyer_lists.len();
    let mut engaged: Vec<Option<usize>> = vec![None; n];
    let mut partner: Vec<Option<usize>> = vec![None; n];
    let mut next = vec![0; n];
    while let Some(i) = (0..n).find(|&i| partner[i].is_none()) {
        let j = buyer_lists[i][next[i]];
        next[i] += 1;
        match engaged[j] {
            None => {
                engaged[j] = Some(i);
                partner[i] = Some(j);
            }
            Some(cur) if seller_rank[j][i] < seller_rank[j][cur] => {
                engaged[j] = Some(i);
                partner[i] = Some(j);
                partner[cur] = None;
            }
            Some(_) => {}
        }
    }
    partner.into_iter().map(|p| p.expect("all matched")).collect()
}
