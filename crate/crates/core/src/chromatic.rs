//! Rainbow and monochromatic cliques in edge-colored graphs.
//!
//! A subgraph is rainbow when its edges have pairwise distinct colors and
//! monochromatic when they all share one color. Results are weighted by
//! their induced edge weights when the graph has them, and weigh 0
//! otherwise; every result is re-inspected against the original coloring
//! before it is returned.

use std::collections::HashMap;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::extmat::{bool_product, BoolMatrix};
use crate::graph::{Graph, SubgraphKind, SubgraphResult};
use crate::vertexmax::cliques;

/// Default cap on `h` for [`rainbow_clique`].
pub const RAINBOW_CAP: usize = 4;
/// Default cap on `h` for [`mono_clique`].
pub const MONO_CAP: usize = 6;

fn binom2(x: usize) -> usize {
    x * x.saturating_sub(1) / 2
}

fn colors_of(g: &Graph) -> Result<&[u32]> {
    g.edge_colors()
}

fn finish(g: &Graph, vertices: &[usize]) -> Result<SubgraphResult> {
    let kind = if vertices.len() == 3 {
        SubgraphKind::Triangle
    } else {
        SubgraphKind::Clique
    };
    if g.has_edge_weights() {
        SubgraphResult::by_induced_edges(g, vertices, kind)
    } else {
        let mut vs = vertices.to_vec();
        vs.sort_unstable();
        Ok(SubgraphResult {
            vertices: vs,
            weight: 0.0,
            kind,
        })
    }
}

/// Edge colors of the clique on `vertices`, or `None` if it is not a clique.
fn clique_colors(g: &Graph, vertices: &[usize]) -> Option<Vec<u32>> {
    let mut out = Vec::new();
    for (i, &x) in vertices.iter().enumerate() {
        for &y in &vertices[i + 1..] {
            out.push(g.edge_color(x, y)?);
        }
    }
    Some(out)
}

/// True if `vertices` span a clique whose edges have pairwise distinct colors.
pub fn is_rainbow_clique(g: &Graph, vertices: &[usize]) -> bool {
    match clique_colors(g, vertices) {
        Some(mut cs) => {
            let len = cs.len();
            cs.sort_unstable();
            cs.dedup();
            cs.len() == len
        }
        None => false,
    }
}

/// True if `vertices` span a clique whose edges all have one color.
pub fn is_mono_clique(g: &Graph, vertices: &[usize]) -> bool {
    match clique_colors(g, vertices) {
        Some(cs) => cs.windows(2).all(|w| w[0] == w[1]),
        None => false,
    }
}

/// A map from the colors present in a graph onto `1..=t`.
#[derive(Clone, Debug, PartialEq)]
pub struct ColorReduction {
    pub t: usize,
    pub map: HashMap<u32, u32>,
    pub trials: usize,
}

impl ColorReduction {
    /// A uniformly random map of `g`'s colors onto `1..=t`.
    pub fn random<R: Rng + ?Sized>(g: &Graph, t: usize, rng: &mut R) -> Result<Self> {
        let mut present: Vec<u32> = colors_of(g)?.to_vec();
        present.sort_unstable();
        present.dedup();
        let map = present
            .into_iter()
            .map(|c| (c, rng.random_range(1..=t as u32)))
            .collect();
        Ok(ColorReduction { t, map, trials: 1 })
    }

    /// Reduced color of the edge `{u, v}`.
    pub fn color(&self, g: &Graph, u: usize, v: usize) -> Option<u32> {
        g.edge_color(u, v).map(|c| self.map[&c])
    }

    /// Random trials needed so that a fixed rainbow copy stays rainbow in at
    /// least one reduction with probability `1 - delta`.
    pub fn trials_for(t: usize, delta: f64) -> usize {
        ((t as f64).exp() * (1.0 / delta).ln()).ceil().max(1.0) as usize
    }
}

/// Six disjoint color classes covering `1..=t` for `h = 3k + j`, with sizes
/// `(C(k,2), C(k,2), C(k+j,2), k^2, k(k+j), k(k+j))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorPartition {
    pub classes: [Vec<u32>; 6],
}

impl ColorPartition {
    pub fn sizes(h: usize) -> [usize; 6] {
        let (k, j) = (h / 3, h % 3);
        [binom2(k), binom2(k), binom2(k + j), k * k, k * (k + j), k * (k + j)]
    }

    /// Every partition of `1..=C(h,2)` with the sizes for `h`.
    pub fn all(h: usize) -> Vec<ColorPartition> {
        let sizes = Self::sizes(h);
        let t = binom2(h) as u32;
        let mut out = Vec::new();
        let mut cur: Vec<Vec<u32>> = Vec::new();
        fn go(sizes: &[usize; 6], left: Vec<u32>, cur: &mut Vec<Vec<u32>>, out: &mut Vec<ColorPartition>) {
            let idx = cur.len();
            if idx == 6 {
                let classes: [Vec<u32>; 6] = std::array::from_fn(|i| cur[i].clone());
                out.push(ColorPartition { classes });
                return;
            }
            for pick in left.iter().copied().combinations(sizes[idx]) {
                let rest = left.iter().copied().filter(|c| !pick.contains(c)).collect();
                cur.push(pick);
                go(sizes, rest, cur, out);
                cur.pop();
            }
        }
        go(&sizes, (1..=t).collect(), &mut cur, &mut out);
        out
    }

    fn class_of(&self, color: u32) -> usize {
        self.classes
            .iter()
            .position(|c| c.contains(&color))
            .expect("partition covers every reduced color")
    }
}

/// Options for [`rainbow_clique_with`].
#[derive(Clone, Copy, Debug)]
pub struct RainbowOptions {
    pub trials: usize,
    pub seed: u64,
    pub cap: usize,
}

/// A rainbow `K_h`, found with `trials` random color reductions.
pub fn rainbow_clique(g: &Graph, h: usize, trials: usize, seed: u64) -> Result<Option<SubgraphResult>> {
    rainbow_clique_with(
        g,
        h,
        RainbowOptions {
            trials,
            seed,
            cap: RAINBOW_CAP,
        },
    )
}

pub fn rainbow_clique_with(g: &Graph, h: usize, opts: RainbowOptions) -> Result<Option<SubgraphResult>> {
    colors_of(g)?;
    if h < 3 {
        return Err(Error::InvalidArgument(format!("h = {h} is below 3")));
    }
    if h > opts.cap {
        return Err(Error::CapExceeded {
            what: "h",
            value: h,
            cap: opts.cap,
        });
    }
    let t = binom2(h);
    let parts = ColorPartition::all(h);
    let found = (0..opts.trials).into_par_iter().map(|trial| {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(trial as u64);
        let red = ColorReduction::random(g, t, &mut rng)?;
        for part in &parts {
            if let Some(vs) = rainbow_under(g, h, &red, part)? {
                if is_rainbow_clique(g, &vs) {
                    return Ok(Some(vs));
                }
            }
        }
        Ok(None)
    });
    let first: Option<Result<Vec<usize>>> = found.filter_map(|r| r.transpose()).find_first(|_| true);
    match first {
        Some(vs) => Ok(Some(finish(g, &vs?)?)),
        None => Ok(None),
    }
}

/// Rainbow `K_s` whose reduced colors all lie in `class`.
fn rainbow_in(g: &Graph, s: usize, red: &ColorReduction, part: &ColorPartition, class: usize) -> Vec<Vec<usize>> {
    cliques(g, s)
        .into_iter()
        .filter(|c| {
            let mut cs: Vec<u32> = Vec::new();
            for (i, &x) in c.iter().enumerate() {
                for &y in &c[i + 1..] {
                    cs.push(red.color(g, x, y).expect("clique edge"));
                }
            }
            let len = cs.len();
            cs.sort_unstable();
            cs.dedup();
            cs.len() == len && cs.iter().all(|&c| part.class_of(c) == class)
        })
        .collect()
}

/// `X` and `Y` disjoint, completely joined, with distinct cross colors from `class`.
fn rainbow_join(
    g: &Graph,
    x: &[usize],
    y: &[usize],
    red: &ColorReduction,
    part: &ColorPartition,
    class: usize,
) -> bool {
    let mut cs = Vec::with_capacity(x.len() * y.len());
    for &a in x {
        for &b in y {
            if a == b {
                return false;
            }
            match red.color(g, a, b) {
                Some(c) if part.class_of(c) == class => cs.push(c),
                _ => return false,
            }
        }
    }
    let len = cs.len();
    cs.sort_unstable();
    cs.dedup();
    cs.len() == len
}

fn rainbow_under(g: &Graph, h: usize, red: &ColorReduction, part: &ColorPartition) -> Result<Option<Vec<usize>>> {
    let (k, j) = (h / 3, h % 3);
    let s1 = rainbow_in(g, k, red, part, 0);
    let s2 = rainbow_in(g, k, red, part, 1);
    let s3 = rainbow_in(g, k + j, red, part, 2);
    let a = BoolMatrix::from_fn(s1.len(), s2.len(), |x, y| rainbow_join(g, &s1[x], &s2[y], red, part, 3));
    let b = BoolMatrix::from_fn(s2.len(), s3.len(), |y, z| rainbow_join(g, &s2[y], &s3[z], red, part, 4));
    let c = bool_product(&a, &b)?;
    for x in 0..s1.len() {
        for z in c.row_ones(x) {
            if rainbow_join(g, &s1[x], &s3[z], red, part, 5) {
                let y = middle(&a, &b, x, z).expect("product entry has a witness");
                let mut vs = s1[x].clone();
                vs.extend_from_slice(&s2[y]);
                vs.extend_from_slice(&s3[z]);
                return Ok(Some(vs));
            }
        }
    }
    Ok(None)
}

/// Smallest `y` with `A[x, y] = B[y, z] = 1`.
fn middle(a: &BoolMatrix, b: &BoolMatrix, x: usize, z: usize) -> Option<usize> {
    a.row_ones(x).find(|&y| b.get(y, z))
}

/// A monochromatic `K_h`. `h = 3` and `h = 4` use [`mono_triangle`] and
/// [`mono_k4`]; larger `h` split the clique into three parts and join them
/// with one Boolean product.
pub fn mono_clique(g: &Graph, h: usize) -> Result<Option<SubgraphResult>> {
    mono_clique_with(g, h, MONO_CAP)
}

pub fn mono_clique_with(g: &Graph, h: usize, cap: usize) -> Result<Option<SubgraphResult>> {
    colors_of(g)?;
    if h > cap {
        return Err(Error::CapExceeded {
            what: "h",
            value: h,
            cap,
        });
    }
    match h {
        0..=2 => Err(Error::InvalidArgument(format!("h = {h} is below 3"))),
        3 => mono_triangle(g),
        4 => mono_k4(g),
        _ => {
            let (k, j) = (h / 3, h % 3);
            let (h1, h2, h3) = match j {
                0 => (k, k, k),
                1 => (k + 1, k, k),
                _ => (k + 1, k + 1, k),
            };
            let mono =
                |s: usize| -> Vec<Vec<usize>> { cliques(g, s).into_iter().filter(|c| is_mono_clique(g, c)).collect() };
            let joined = |x: &[usize], y: &[usize]| {
                let mut u = x.to_vec();
                u.extend_from_slice(y);
                x.iter().all(|a| !y.contains(a)) && is_mono_clique(g, &u)
            };
            let (p1, p2) = (mono(h1), mono(h2));
            let p3 = if h3 == h2 { p2.clone() } else { mono(h3) };
            let a = BoolMatrix::from_fn(p1.len(), p2.len(), |x, y| joined(&p1[x], &p2[y]));
            let b = BoolMatrix::from_fn(p2.len(), p3.len(), |y, z| joined(&p2[y], &p3[z]));
            let c = bool_product(&a, &b)?;
            for x in 0..p1.len() {
                for z in c.row_ones(x) {
                    if !joined(&p1[x], &p3[z]) {
                        continue;
                    }
                    let y = middle(&a, &b, x, z).expect("product entry has a witness");
                    let mut vs = p1[x].clone();
                    vs.extend_from_slice(&p2[y]);
                    vs.extend_from_slice(&p3[z]);
                    debug_assert!(is_mono_clique(g, &vs));
                    if is_mono_clique(g, &vs) {
                        return Ok(Some(finish(g, &vs)?));
                    }
                }
            }
            Ok(None)
        }
    }
}

/// A triangle in the graph given by `adj` (0-based), through the product `adj^2`.
fn dense_triangle(adj: &BoolMatrix) -> Result<Option<[usize; 3]>> {
    let sq = bool_product(adj, adj)?;
    for x in 0..adj.rows() {
        for y in adj.row_ones(x) {
            if y > x && sq.get(x, y) {
                let z = middle(adj, adj, x, y).expect("square entry has a witness");
                return Ok(Some([x, y, z]));
            }
        }
    }
    Ok(None)
}

/// A triangle among `edges` on vertices `1..=n`. Vertices of degree below
/// `m^((omega-1)/(omega+1))` search their neighbor pairs; the rest go
/// through a Boolean product on the subgraph they induce.
fn sparse_triangle(n: usize, edges: &[(usize, usize)], omega: f64) -> Result<Option<[usize; 3]>> {
    let mut nbrs = vec![Vec::new(); n + 1];
    for &(u, v) in edges {
        nbrs[u].push(v);
        nbrs[v].push(u);
    }
    for l in &mut nbrs {
        l.sort_unstable();
    }
    let adjacent = |x: usize, y: usize| nbrs[x].binary_search(&y).is_ok();
    let delta = (edges.len() as f64).powf((omega - 1.0) / (omega + 1.0));
    let low: Vec<bool> = nbrs.iter().map(|l| (l.len() as f64) < delta).collect();
    for v in 1..=n {
        if !low[v] {
            continue;
        }
        for (i, &x) in nbrs[v].iter().enumerate() {
            for &y in &nbrs[v][i + 1..] {
                if adjacent(x, y) {
                    return Ok(Some([v, x, y]));
                }
            }
        }
    }
    let high: Vec<usize> = (1..=n).filter(|&v| !low[v] && !nbrs[v].is_empty()).collect();
    let adj = BoolMatrix::from_fn(high.len(), high.len(), |i, j| adjacent(high[i], high[j]));
    Ok(dense_triangle(&adj)?.map(|t| t.map(|i| high[i])))
}

/// Edges of each color, by ascending color.
fn color_classes(g: &Graph) -> Result<Vec<(u32, Vec<(usize, usize)>)>> {
    let colors = colors_of(g)?;
    let mut by: HashMap<u32, Vec<(usize, usize)>> = HashMap::new();
    for (&e, &c) in g.edges().iter().zip(colors) {
        by.entry(c).or_default().push(e);
    }
    let mut out: Vec<_> = by.into_iter().collect();
    out.sort_unstable_by_key(|(c, _)| *c);
    Ok(out)
}

/// A monochromatic triangle, with heavy-color threshold `n^2`.
pub fn mono_triangle(g: &Graph) -> Result<Option<SubgraphResult>> {
    mono_triangle_omega(g, 3.0)
}

/// A monochromatic triangle. A color with at least `n^((omega+1)/2)` edges
/// is searched with a product over all `n` vertices, a lighter color with
/// the degree-split search on its own edges.
pub fn mono_triangle_omega(g: &Graph, omega: f64) -> Result<Option<SubgraphResult>> {
    let n = g.n();
    let heavy = (n as f64).powf((omega + 1.0) / 2.0);
    for (_, edges) in color_classes(g)? {
        let tri = if edges.len() as f64 >= heavy {
            let mut adj = BoolMatrix::zeros(n, n);
            for &(u, v) in &edges {
                adj.set(u - 1, v - 1, true);
                adj.set(v - 1, u - 1, true);
            }
            dense_triangle(&adj)?.map(|t| t.map(|i| i + 1))
        } else {
            sparse_triangle(n, &edges, omega)?
        };
        if let Some(t) = tri {
            if is_mono_clique(g, &t) {
                return Ok(Some(finish(g, &t)?));
            }
        }
    }
    Ok(None)
}

/// A monochromatic `K_4`: for each `v`, neighbors are grouped by the color
/// of their edge to `v`, and each group is searched for a triangle in that
/// same color.
pub fn mono_k4(g: &Graph) -> Result<Option<SubgraphResult>> {
    colors_of(g)?;
    for v in g.vertices() {
        let mut groups: HashMap<u32, Vec<usize>> = HashMap::new();
        for &x in g.neighbors(v) {
            groups.entry(g.edge_color(v, x).expect("edge")).or_default().push(x);
        }
        let mut groups: Vec<_> = groups.into_iter().collect();
        groups.sort_unstable_by_key(|(c, _)| *c);
        for (c, s) in groups {
            if s.len() < 3 {
                continue;
            }
            let adj = BoolMatrix::from_fn(s.len(), s.len(), |i, j| g.edge_color(s[i], s[j]) == Some(c));
            if let Some(t) = dense_triangle(&adj)? {
                let vs = [v, s[t[0]], s[t[1]], s[t[2]]];
                if is_mono_clique(g, &vs) {
                    return Ok(Some(finish(g, &vs)?));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_random_graph, WeightMode};

    fn colored(n: usize, edges: &[(usize, usize, u32)]) -> Graph {
        let pairs: Vec<(usize, usize)> = edges.iter().map(|&(u, v, _)| (u, v)).collect();
        let g = Graph::from_edges(n, &pairs).unwrap();
        let mut cs = vec![0; g.m()];
        for &(u, v, c) in edges {
            cs[g.edge_id(u, v).unwrap()] = c;
        }
        g.with_edge_colors(&cs).unwrap()
    }

    fn complete(n: usize, color: impl Fn(usize, usize) -> u32) -> Graph {
        let e: Vec<(usize, usize, u32)> = (1..=n).tuple_combinations().map(|(u, v)| (u, v, color(u, v))).collect();
        colored(n, &e)
    }

    fn any_clique(g: &Graph, h: usize, pred: impl Fn(&Graph, &[usize]) -> bool) -> bool {
        g.vertices().combinations(h).any(|c| pred(g, &c))
    }

    #[test]
    fn partition_counts() {
        assert_eq!(ColorPartition::sizes(3), [0, 0, 0, 1, 1, 1]);
        assert_eq!(ColorPartition::sizes(4), [0, 0, 1, 1, 2, 2]);
        assert_eq!(ColorPartition::all(3).len(), 6);
        assert_eq!(ColorPartition::all(4).len(), 180);
        for p in ColorPartition::all(4) {
            let mut all: Vec<u32> = p.classes.concat();
            all.sort_unstable();
            assert_eq!(all, (1..=6).collect::<Vec<u32>>());
        }
    }

    #[test]
    fn rainbow_examples() {
        let tri = colored(3, &[(1, 2, 1), (2, 3, 2), (1, 3, 3)]);
        let r = rainbow_clique(&tri, 3, 93, 0).unwrap().unwrap();
        assert_eq!(r.vertices, vec![1, 2, 3]);
        let dull = colored(3, &[(1, 2, 1), (2, 3, 1), (1, 3, 3)]);
        assert!(rainbow_clique(&dull, 3, 93, 0).unwrap().is_none());
        assert!(rainbow_clique(&tri, 5, 1, 0).is_err());
        let k4 = complete(4, |u, v| (u * 4 + v) as u32);
        let trials = ColorReduction::trials_for(6, 0.01);
        assert!(rainbow_clique(&k4, 4, trials, 3).unwrap().is_some());
    }

    #[test]
    fn rainbow_matches_enumeration() {
        for seed in 0..30 {
            let g = generate_random_graph(10, 0.8, WeightMode::None, Some(12), seed);
            let got = rainbow_clique(&g, 3, ColorReduction::trials_for(3, 0.01), seed).unwrap();
            let want = any_clique(&g, 3, is_rainbow_clique);
            if let Some(r) = &got {
                assert!(is_rainbow_clique(&g, &r.vertices));
            }
            assert_eq!(got.is_some(), want, "seed {seed}");
        }
    }

    #[test]
    fn reduction_never_creates_rainbows() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for seed in 0..10 {
            let g = generate_random_graph(9, 0.7, WeightMode::None, Some(4), seed);
            let red = ColorReduction::random(&g, 3, &mut rng).unwrap();
            for c in cliques(&g, 3) {
                let reduced: Vec<u32> = c
                    .iter()
                    .tuple_combinations()
                    .map(|(&x, &y)| red.color(&g, x, y).unwrap())
                    .collect();
                if !reduced.iter().all_unique() {
                    continue;
                }
                assert!(is_rainbow_clique(&g, &c));
            }
        }
    }

    #[test]
    fn mono_examples() {
        let k5 = complete(5, |_, _| 7);
        assert!(mono_clique(&k5, 5).unwrap().is_some());
        let k6 = complete(6, |u, v| (u * 6 + v) as u32);
        assert!(mono_clique(&k6, 5).unwrap().is_none());
        assert!(mono_clique(&k6, 7).is_err());

        let mut e: Vec<(usize, usize, u32)> = (1..=4).tuple_combinations().map(|(u, v)| (u, v, 1)).collect();
        e.extend([(4, 5, 2), (5, 6, 1), (1, 6, 2)]);
        let k4 = colored(6, &e);
        assert_eq!(mono_k4(&k4).unwrap().unwrap().vertices, vec![1, 2, 3, 4]);
        let proper = colored(4, &[(1, 2, 1), (3, 4, 1), (1, 3, 2), (2, 4, 2), (1, 4, 3), (2, 3, 3)]);
        assert!(mono_k4(&proper).unwrap().is_none());

        let red = colored(5, &[(1, 2, 1), (2, 3, 1), (1, 3, 1), (3, 4, 2), (4, 5, 2), (2, 5, 2)]);
        assert_eq!(mono_triangle(&red).unwrap().unwrap().vertices, vec![1, 2, 3]);
        let rainbow4 = complete(4, |u, v| (u * 4 + v) as u32);
        assert!(mono_triangle(&rainbow4).unwrap().is_none());
    }

    #[test]
    fn mono_matches_enumeration() {
        for seed in 0..20 {
            let g = generate_random_graph(12, 0.8, WeightMode::None, Some(2), seed);
            for h in 3..=5 {
                let got = mono_clique(&g, h).unwrap();
                if let Some(r) = &got {
                    assert!(is_mono_clique(&g, &r.vertices));
                    assert_eq!(r.vertices.len(), h);
                }
                assert_eq!(got.is_some(), any_clique(&g, h, is_mono_clique), "seed {seed} h {h}");
            }
            let sparse = generate_random_graph(20, 0.5, WeightMode::None, Some(3), seed);
            for omega in [2.0, 2.376, 3.0] {
                let got = mono_triangle_omega(&sparse, omega).unwrap();
                assert_eq!(got.is_some(), any_clique(&sparse, 3, is_mono_clique));
            }
        }
    }

    #[test]
    fn weights_follow_edges() {
        let g = colored(3, &[(1, 2, 1), (2, 3, 1), (1, 3, 1)]);
        assert_eq!(mono_triangle(&g).unwrap().unwrap().weight, 0.0);
        let id = |u, v| g.edge_id(u, v).unwrap();
        let mut w = vec![0.0; 3];
        w[id(1, 2)] = 1.0;
        w[id(2, 3)] = 2.0;
        w[id(1, 3)] = 4.0;
        let g = g.with_edge_weights(&w).unwrap();
        assert_eq!(mono_triangle(&g).unwrap().unwrap().weight, 7.0);
        assert!(matches!(
            mono_triangle(&Graph::from_edges(3, &[(1, 2)]).unwrap()),
            Err(Error::MissingEdgeColors)
        ));
    }
}
