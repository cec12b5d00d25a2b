//! Undirected graphs with optional vertex weights, edge weights and edge
//! colors; the line-oriented text format; seeded random instances.
//!
//! Vertices are `1..=n`. A witness or vertex value of `0` always means "none".

use std::collections::HashSet;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, ParseError, ParseErrorKind, Result};
use crate::extmat::BoolMatrix;

/// Graphs with at most this many vertices keep a packed adjacency table.
pub const DEFAULT_BIT_TABLE_THRESHOLD: usize = 4096;

#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    /// `(u, v)` with `u < v`, lexicographic.
    edges: Vec<(usize, usize)>,
    /// Sorted neighbor lists, indexed by vertex (slot 0 unused).
    neighbors: Vec<Vec<usize>>,
    /// Edge ids parallel to `neighbors`.
    incident: Vec<Vec<usize>>,
    bits: Option<BoolMatrix>,
    vertex_weight: Option<Vec<f64>>,
    edge_weight: Option<Vec<f64>>,
    edge_color: Option<Vec<u32>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.edges == other.edges
            && self.vertex_weight == other.vertex_weight
            && self.edge_weight == other.edge_weight
            && self.edge_color == other.edge_color
    }
}

/// Incremental construction with validation of the graph invariants.
#[derive(Clone, Debug)]
pub struct GraphBuilder {
    n: usize,
    edges: Vec<(usize, usize, Option<f64>, Option<u32>)>,
    seen: HashSet<(usize, usize)>,
    vertex_weight: Vec<Option<f64>>,
    bit_threshold: usize,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Self {
        GraphBuilder {
            n,
            edges: Vec::new(),
            seen: HashSet::new(),
            vertex_weight: vec![None; n + 1],
            bit_threshold: DEFAULT_BIT_TABLE_THRESHOLD,
        }
    }

    pub fn bit_table_threshold(mut self, threshold: usize) -> Self {
        self.bit_threshold = threshold;
        self
    }

    fn check_vertex(&self, v: usize) -> Result<(), ParseErrorKind> {
        if v == 0 || v > self.n {
            Err(ParseErrorKind::VertexOutOfRange { vertex: v, n: self.n })
        } else {
            Ok(())
        }
    }

    pub fn add_edge(
        &mut self,
        u: usize,
        v: usize,
        weight: Option<f64>,
        color: Option<u32>,
    ) -> Result<&mut Self, ParseErrorKind> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(ParseErrorKind::SelfLoop(u));
        }
        let key = (u.min(v), u.max(v));
        if !self.seen.insert(key) {
            return Err(ParseErrorKind::DuplicateEdge(key.0, key.1));
        }
        if let Some(w) = weight {
            if !w.is_finite() {
                return Err(ParseErrorKind::MalformedNumber(w.to_string()));
            }
        }
        if color == Some(0) {
            return Err(ParseErrorKind::Invalid("edge colors are positive".into()));
        }
        if let Some(&(_, _, w0, c0)) = self.edges.first() {
            if w0.is_some() != weight.is_some() {
                return Err(ParseErrorKind::PartialEdgeWeights);
            }
            if c0.is_some() != color.is_some() {
                return Err(ParseErrorKind::PartialEdgeColors);
            }
        }
        self.edges.push((key.0, key.1, weight, color));
        Ok(self)
    }

    pub fn set_vertex_weight(&mut self, v: usize, w: f64) -> Result<&mut Self, ParseErrorKind> {
        self.check_vertex(v)?;
        if !w.is_finite() {
            return Err(ParseErrorKind::MalformedNumber(w.to_string()));
        }
        if self.vertex_weight[v].replace(w).is_some() {
            return Err(ParseErrorKind::DuplicateVertexWeight(v));
        }
        Ok(self)
    }

    pub fn build(self) -> Result<Graph, ParseErrorKind> {
        let any_vw = self.vertex_weight.iter().skip(1).any(Option::is_some);
        let vertex_weight = if any_vw {
            if let Some(v) = (1..=self.n).find(|&v| self.vertex_weight[v].is_none()) {
                return Err(ParseErrorKind::PartialVertexWeights(v));
            }
            let mut w = vec![0.0; self.n + 1];
            for v in 1..=self.n {
                w[v] = self.vertex_weight[v].unwrap_or(0.0);
            }
            Some(w)
        } else {
            None
        };
        let mut edges = self.edges;
        edges.sort_by_key(|&(u, v, _, _)| (u, v));
        let has_w = edges.first().is_some_and(|e| e.2.is_some());
        let has_c = edges.first().is_some_and(|e| e.3.is_some());
        let edge_weight = has_w.then(|| edges.iter().map(|e| e.2.unwrap_or(0.0)).collect());
        let edge_color = has_c.then(|| edges.iter().map(|e| e.3.unwrap_or(1)).collect());
        let pairs = edges.iter().map(|&(u, v, _, _)| (u, v)).collect();
        Ok(Graph::assemble(
            self.n,
            pairs,
            vertex_weight,
            edge_weight,
            edge_color,
            self.bit_threshold,
        ))
    }
}

impl Graph {
    fn assemble(
        n: usize,
        edges: Vec<(usize, usize)>,
        vertex_weight: Option<Vec<f64>>,
        edge_weight: Option<Vec<f64>>,
        edge_color: Option<Vec<u32>>,
        bit_threshold: usize,
    ) -> Graph {
        let mut neighbors = vec![Vec::new(); n + 1];
        let mut incident = vec![Vec::new(); n + 1];
        for (id, &(u, v)) in edges.iter().enumerate() {
            neighbors[u].push((v, id));
            neighbors[v].push((u, id));
        }
        let mut nb = vec![Vec::new(); n + 1];
        for v in 0..=n {
            neighbors[v].sort_unstable();
            nb[v] = neighbors[v].iter().map(|p| p.0).collect();
            incident[v] = neighbors[v].iter().map(|p| p.1).collect();
        }
        let bits = (n <= bit_threshold).then(|| {
            let mut m = BoolMatrix::zeros(n, n);
            for &(u, v) in &edges {
                m.set(u - 1, v - 1, true);
                m.set(v - 1, u - 1, true);
            }
            m
        });
        Graph {
            n,
            neighbors: nb,
            incident,
            bits,
            vertex_weight: vertex_weight.filter(|_| n > 0),
            // on an edgeless graph an edge map carries no information
            edge_weight: edge_weight.filter(|w| !w.is_empty()),
            edge_color: edge_color.filter(|c| !c.is_empty()),
            edges,
        }
    }

    /// Unweighted, uncolored graph from an edge list.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut b = GraphBuilder::new(n);
        for &(u, v) in edges {
            b.add_edge(u, v, None, None).map_err(|k| ParseError::new(0, k))?;
        }
        Ok(b.build().map_err(|k| ParseError::new(0, k))?)
    }

    /// Same graph with vertex weights replaced; `weights[v - 1]` is the weight of `v`.
    pub fn with_vertex_weights(mut self, weights: &[f64]) -> Result<Graph> {
        if weights.len() != self.n {
            return Err(Error::InvalidArgument(format!(
                "{} vertex weights for {} vertices",
                weights.len(),
                self.n
            )));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidArgument("vertex weights must be finite".into()));
        }
        let mut w = vec![0.0; self.n + 1];
        w[1..].copy_from_slice(weights);
        self.vertex_weight = (self.n > 0).then_some(w);
        Ok(self)
    }

    /// Same graph with edge weights given per edge, in [`Graph::edges`] order.
    pub fn with_edge_weights(mut self, weights: &[f64]) -> Result<Graph> {
        if weights.len() != self.edges.len() {
            return Err(Error::InvalidArgument(format!(
                "{} edge weights for {} edges",
                weights.len(),
                self.edges.len()
            )));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidArgument("edge weights must be finite".into()));
        }
        self.edge_weight = (!weights.is_empty()).then(|| weights.to_vec());
        Ok(self)
    }

    /// Same graph with edge colors given per edge, in [`Graph::edges`] order.
    pub fn with_edge_colors(mut self, colors: &[u32]) -> Result<Graph> {
        if colors.len() != self.edges.len() || colors.contains(&0) {
            return Err(Error::InvalidArgument("one positive color per edge required".into()));
        }
        self.edge_color = (!colors.is_empty()).then(|| colors.to_vec());
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.n
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    /// Edge ids of `v`'s incident edges, parallel to [`Graph::neighbors`].
    pub fn incident_edges(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    /// Id of edge `{u, v}` into [`Graph::edges`].
    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        if u == 0 || v == 0 || u > self.n || v > self.n {
            return None;
        }
        let (a, b) = if self.neighbors[u].len() <= self.neighbors[v].len() {
            (u, v)
        } else {
            (v, u)
        };
        self.neighbors[a]
            .binary_search(&b)
            .ok()
            .map(|pos| self.incident[a][pos])
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        match &self.bits {
            Some(m) if u >= 1 && v >= 1 && u <= self.n && v <= self.n => m.get(u - 1, v - 1),
            _ => self.edge_id(u, v).is_some(),
        }
    }

    /// 0-based `n x n` adjacency matrix (row `v - 1` is vertex `v`).
    pub fn adjacency_matrix(&self) -> BoolMatrix {
        match &self.bits {
            Some(m) => m.clone(),
            None => {
                let mut m = BoolMatrix::zeros(self.n, self.n);
                for &(u, v) in &self.edges {
                    m.set(u - 1, v - 1, true);
                    m.set(v - 1, u - 1, true);
                }
                m
            }
        }
    }

    /// Vacuously true on the empty graph.
    pub fn has_vertex_weights(&self) -> bool {
        self.vertex_weight.is_some() || self.n == 0
    }

    /// Vacuously true on an edgeless graph.
    pub fn has_edge_weights(&self) -> bool {
        self.edge_weight.is_some() || self.edges.is_empty()
    }

    /// Vacuously true on an edgeless graph.
    pub fn has_edge_colors(&self) -> bool {
        self.edge_color.is_some() || self.edges.is_empty()
    }

    pub fn vertex_weight(&self, v: usize) -> Option<f64> {
        self.vertex_weight.as_ref().map(|w| w[v])
    }

    /// Vertex weights indexed by vertex (slot 0 holds 0.0).
    pub fn vertex_weights(&self) -> Result<&[f64]> {
        match &self.vertex_weight {
            Some(w) => Ok(w),
            None if self.n == 0 => Ok(&[0.0]),
            None => Err(Error::MissingVertexWeights),
        }
    }

    pub fn edge_weight(&self, u: usize, v: usize) -> Option<f64> {
        let w = self.edge_weight.as_ref()?;
        self.edge_id(u, v).map(|id| w[id])
    }

    /// Edge weights in [`Graph::edges`] order.
    pub fn edge_weights(&self) -> Result<&[f64]> {
        match &self.edge_weight {
            Some(w) => Ok(w),
            None if self.edges.is_empty() => Ok(&[]),
            None => Err(Error::MissingEdgeWeights),
        }
    }

    pub fn edge_color(&self, u: usize, v: usize) -> Option<u32> {
        let c = self.edge_color.as_ref()?;
        self.edge_id(u, v).map(|id| c[id])
    }

    /// Edge colors in [`Graph::edges`] order.
    pub fn edge_colors(&self) -> Result<&[u32]> {
        match &self.edge_color {
            Some(c) => Ok(c),
            None if self.edges.is_empty() => Ok(&[]),
            None => Err(Error::MissingEdgeColors),
        }
    }

    /// Sum of vertex weights taken in ascending vertex order. This is the
    /// canonical weight every vertex-weighted routine reports.
    pub fn vertex_weight_sum(&self, vertices: &[usize]) -> Result<f64> {
        let w = self.vertex_weights()?;
        let mut sorted = vertices.to_vec();
        sorted.sort_unstable();
        Ok(sorted.iter().fold(0.0, |acc, &v| acc + w[v]))
    }

    /// Sum of edge weights taken in lexicographic edge order. Errors if an
    /// edge is absent.
    pub fn edge_weight_sum(&self, edges: &[(usize, usize)]) -> Result<f64> {
        let w = self.edge_weights()?;
        let mut sorted: Vec<(usize, usize)> = edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
        sorted.sort_unstable();
        let mut acc = 0.0;
        for (u, v) in sorted {
            let id = self
                .edge_id(u, v)
                .ok_or_else(|| Error::InvalidArgument(format!("{{{u}, {v}}} is not an edge")))?;
            acc += w[id];
        }
        Ok(acc)
    }

    /// Total weight of the edges induced by `vertices`, lexicographic order;
    /// non-edges contribute nothing.
    pub fn induced_edge_weight(&self, vertices: &[usize]) -> Result<f64> {
        let mut sorted = vertices.to_vec();
        sorted.sort_unstable();
        let mut edges = Vec::new();
        for (i, &u) in sorted.iter().enumerate() {
            for &v in &sorted[i + 1..] {
                if self.has_edge(u, v) {
                    edges.push((u, v));
                }
            }
        }
        self.edge_weight_sum(&edges)
    }

    /// True when every pair of `vertices` is adjacent.
    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices
            .iter()
            .enumerate()
            .all(|(i, &u)| vertices[i + 1..].iter().all(|&v| self.has_edge(u, v)))
    }

    /// The subgraph induced by `keep` (any order, no duplicates), relabelled
    /// `1..=keep.len()` in the given order. Returns the subgraph and the map
    /// from new labels to old (slot 0 unused).
    pub fn induced(&self, keep: &[usize]) -> (Graph, Vec<usize>) {
        let mut local = vec![0usize; self.n + 1];
        for (i, &v) in keep.iter().enumerate() {
            local[v] = i + 1;
        }
        let mut edges = Vec::new();
        let mut ew = Vec::new();
        let mut ec = Vec::new();
        for (id, &(u, v)) in self.edges.iter().enumerate() {
            if local[u] != 0 && local[v] != 0 {
                let (a, b) = (local[u].min(local[v]), local[u].max(local[v]));
                edges.push((a, b, id));
            }
        }
        edges.sort_unstable();
        for &(_, _, id) in &edges {
            if let Some(w) = &self.edge_weight {
                ew.push(w[id]);
            }
            if let Some(c) = &self.edge_color {
                ec.push(c[id]);
            }
        }
        let vw = self.vertex_weight.as_ref().map(|w| {
            let mut out = vec![0.0; keep.len() + 1];
            for (i, &v) in keep.iter().enumerate() {
                out[i + 1] = w[v];
            }
            out
        });
        let g = Graph::assemble(
            keep.len(),
            edges.iter().map(|&(a, b, _)| (a, b)).collect(),
            vw,
            self.edge_weight.as_ref().map(|_| ew),
            self.edge_color.as_ref().map(|_| ec),
            if self.bits.is_some() { usize::MAX } else { 0 },
        );
        let mut back = vec![0];
        back.extend_from_slice(keep);
        (g, back)
    }
}

/// Parses the line-oriented graph format:
///
/// ```text
/// g <n>
/// vw <v> <real>
/// e <u> <v> [<real weight>] [c<int color>]
/// ```
///
/// `#` starts a comment. Weight maps that are never mentioned are absent.
pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let mut builder: Option<GraphBuilder> = None;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let ln = idx + 1;
        last_line = ln;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let err = |kind| ParseError::new(ln, kind);
        let int = |s: &str| -> Result<usize, ParseError> {
            s.parse::<usize>()
                .map_err(|_| err(ParseErrorKind::MalformedNumber(s.into())))
        };
        let real = |s: &str| -> Result<f64, ParseError> {
            match s.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(err(ParseErrorKind::MalformedNumber(s.into()))),
            }
        };
        match fields[0] {
            "g" => {
                if builder.is_some() {
                    return Err(err(ParseErrorKind::DuplicateHeader));
                }
                if fields.len() != 2 {
                    return Err(err(ParseErrorKind::FieldCount("g <n>".into())));
                }
                builder = Some(GraphBuilder::new(int(fields[1])?));
            }
            "vw" => {
                let b = builder.as_mut().ok_or_else(|| err(ParseErrorKind::MissingHeader))?;
                if fields.len() != 3 {
                    return Err(err(ParseErrorKind::FieldCount("vw <v> <real>".into())));
                }
                let v = int(fields[1])?;
                let w = real(fields[2])?;
                b.set_vertex_weight(v, w).map_err(err)?;
            }
            "e" => {
                let b = builder.as_mut().ok_or_else(|| err(ParseErrorKind::MissingHeader))?;
                if !(3..=5).contains(&fields.len()) {
                    return Err(err(ParseErrorKind::FieldCount(
                        "e <u> <v> [<weight>] [c<color>]".into(),
                    )));
                }
                let u = int(fields[1])?;
                let v = int(fields[2])?;
                let mut weight = None;
                let mut color = None;
                for (pos, f) in fields[3..].iter().enumerate() {
                    if let Some(c) = f.strip_prefix('c') {
                        if color.is_some() {
                            return Err(err(ParseErrorKind::FieldCount("two colors".into())));
                        }
                        let c: u32 = c
                            .parse()
                            .map_err(|_| err(ParseErrorKind::MalformedNumber((*f).into())))?;
                        color = Some(c);
                    } else {
                        if pos != 0 || weight.is_some() {
                            return Err(err(ParseErrorKind::FieldCount("weight must precede color".into())));
                        }
                        weight = Some(real(f)?);
                    }
                }
                b.add_edge(u, v, weight, color).map_err(err)?;
            }
            other => return Err(err(ParseErrorKind::UnknownDirective(other.into()))),
        }
    }
    let b = builder.ok_or_else(|| ParseError::new(last_line.max(1), ParseErrorKind::MissingHeader))?;
    b.build().map_err(|k| ParseError::new(last_line.max(1), k))
}

/// Canonical text: header, vertex weights ascending, edges lexicographic.
/// `parse_graph(&serialize_graph(g)) == g` for every graph.
pub fn serialize_graph(g: &Graph) -> String {
    let mut s = format!("g {}\n", g.n);
    if let Some(w) = &g.vertex_weight {
        for v in 1..=g.n {
            let _ = writeln!(s, "vw {v} {}", w[v]);
        }
    }
    for (id, &(u, v)) in g.edges.iter().enumerate() {
        let _ = write!(s, "e {u} {v}");
        if let Some(w) = &g.edge_weight {
            let _ = write!(s, " {}", w[id]);
        }
        if let Some(c) = &g.edge_color {
            let _ = write!(s, " c{}", c[id]);
        }
        s.push('\n');
    }
    s
}

/// Which weight maps a random graph carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightMode {
    None,
    Vertex,
    Edge,
    Both,
}

/// G(n, p) with a ChaCha8 stream seeded from `seed`. Pairs are visited in
/// lexicographic order, then vertex weights, edge weights and colors are
/// drawn in that order, so instances are identical across platforms.
/// Weights are uniform on `[-1, 1]`; colors uniform on `1..=color_count`.
pub fn generate_random_graph(n: usize, p: f64, weight_mode: WeightMode, color_count: Option<u32>, seed: u64) -> Graph {
    assert!((0.0..=1.0).contains(&p), "edge probability must lie in [0, 1]");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 1..=n {
        for v in u + 1..=n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    let vertex_weight = matches!(weight_mode, WeightMode::Vertex | WeightMode::Both).then(|| {
        let mut w = vec![0.0; n + 1];
        for x in w.iter_mut().skip(1) {
            *x = rng.random_range(-1.0..=1.0);
        }
        w
    });
    let edge_weight = matches!(weight_mode, WeightMode::Edge | WeightMode::Both)
        .then(|| edges.iter().map(|_| rng.random_range(-1.0..=1.0)).collect());
    let edge_color = color_count.map(|c| {
        assert!(c >= 1, "color count must be positive");
        edges.iter().map(|_| rng.random_range(1..=c)).collect()
    });
    Graph::assemble(
        n,
        edges,
        vertex_weight,
        edge_weight,
        edge_color,
        DEFAULT_BIT_TABLE_THRESHOLD,
    )
}

/// A vertex coloring with colors `1..=k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexColoring {
    k: usize,
    /// Indexed by vertex; slot 0 unused.
    color: Vec<usize>,
}

impl VertexColoring {
    /// `colors[v - 1]` is the color of `v`.
    pub fn new(k: usize, colors: &[usize]) -> Result<Self> {
        if let Some(bad) = colors.iter().position(|&c| c == 0 || c > k) {
            return Err(Error::InvalidArgument(format!(
                "vertex {} has color {} outside 1..={k}",
                bad + 1,
                colors[bad]
            )));
        }
        let mut color = vec![0];
        color.extend_from_slice(colors);
        Ok(VertexColoring { k, color })
    }

    pub fn random<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Self {
        assert!(k >= 1);
        let mut color = vec![0];
        color.extend((0..n).map(|_| rng.random_range(1..=k)));
        VertexColoring { k, color }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.color.len() - 1
    }

    #[inline]
    pub fn color(&self, v: usize) -> usize {
        self.color[v]
    }

    /// True when the given vertices have pairwise distinct colors.
    pub fn is_colorful(&self, vertices: &[usize]) -> bool {
        let mut cs: Vec<usize> = vertices.iter().map(|&v| self.color[v]).collect();
        cs.sort_unstable();
        cs.windows(2).all(|w| w[0] != w[1])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SubgraphKind {
    Triangle,
    Clique,
    Cycle,
    Pattern,
}

/// A found subgraph: its vertices (distinct, in a kind-specific order) and
/// its canonical weight.
#[derive(Clone, Debug, PartialEq)]
pub struct SubgraphResult {
    pub vertices: Vec<usize>,
    pub weight: f64,
    pub kind: SubgraphKind,
}

impl SubgraphResult {
    /// Weighted by vertex weights; vertices are stored ascending.
    pub fn by_vertex_weight(g: &Graph, vertices: &[usize], kind: SubgraphKind) -> Result<Self> {
        let mut vs = vertices.to_vec();
        vs.sort_unstable();
        let weight = g.vertex_weight_sum(&vs)?;
        Ok(SubgraphResult {
            vertices: vs,
            weight,
            kind,
        })
    }

    /// Weighted by the induced edge weights; vertices are stored ascending.
    pub fn by_induced_edges(g: &Graph, vertices: &[usize], kind: SubgraphKind) -> Result<Self> {
        let mut vs = vertices.to_vec();
        vs.sort_unstable();
        let weight = g.induced_edge_weight(&vs)?;
        Ok(SubgraphResult {
            vertices: vs,
            weight,
            kind,
        })
    }

    /// A cycle through `vertices` in the given cyclic order, rotated to start
    /// at its smallest vertex and oriented toward the smaller neighbor.
    pub fn cycle(g: &Graph, vertices: &[usize]) -> Result<Self> {
        let k = vertices.len();
        let edges: Vec<(usize, usize)> = (0..k).map(|i| (vertices[i], vertices[(i + 1) % k])).collect();
        let weight = g.edge_weight_sum(&edges)?;
        Ok(SubgraphResult {
            vertices: canonical_cycle(vertices),
            weight,
            kind: SubgraphKind::Cycle,
        })
    }

    /// True if `self` should replace `other` as the incumbent best: heavier,
    /// or equally heavy with a lexicographically smaller vertex tuple.
    pub fn beats(&self, other: &SubgraphResult) -> bool {
        match self.weight.partial_cmp(&other.weight) {
            Some(std::cmp::Ordering::Greater) => true,
            Some(std::cmp::Ordering::Equal) => self.vertices < other.vertices,
            _ => false,
        }
    }
}

/// Keeps the better of an incumbent and a candidate (see [`SubgraphResult::beats`]).
pub fn keep_best(best: &mut Option<SubgraphResult>, candidate: SubgraphResult) {
    match best {
        Some(b) if !candidate.beats(b) => {}
        _ => *best = Some(candidate),
    }
}

/// Rotation to the minimum vertex, oriented toward its smaller neighbor.
pub fn canonical_cycle(vertices: &[usize]) -> Vec<usize> {
    let k = vertices.len();
    if k == 0 {
        return Vec::new();
    }
    let start = (0..k).min_by_key(|&i| vertices[i]).unwrap_or(0);
    let fwd: Vec<usize> = (0..k).map(|i| vertices[(start + i) % k]).collect();
    let bwd: Vec<usize> = (0..k).map(|i| vertices[(start + k - i) % k]).collect();
    if k > 1 && bwd[1] < fwd[1] {
        bwd
    } else {
        fwd
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_triangle() {
        let g = parse_graph("g 3\ne 1 2\ne 2 3\ne 1 3").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edges(), &[(1, 2), (1, 3), (2, 3)]);
        assert!(g.is_clique(&[1, 2, 3]));
        assert!(g.has_edge(3, 1) && g.has_edge(1, 3));
        assert_eq!(serialize_graph(&g), "g 3\ne 1 2\ne 1 3\ne 2 3\n");
    }

    #[test]
    fn parse_errors_carry_lines() {
        let e = parse_graph("g 2\ne 1 1").unwrap_err();
        assert_eq!((e.line, e.kind), (2, ParseErrorKind::SelfLoop(1)));
        let e = parse_graph("g 3\ne 1 2\n# c\ne 2 1").unwrap_err();
        assert_eq!((e.line, e.kind), (4, ParseErrorKind::DuplicateEdge(1, 2)));
        let e = parse_graph("g 3\ne 1 4").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::VertexOutOfRange { vertex: 4, n: 3 });
        let e = parse_graph("g 3\nvw 1 x").unwrap_err();
        assert_eq!((e.line, e.kind), (2, ParseErrorKind::MalformedNumber("x".into())));
        let e = parse_graph("g 3\nzz 1").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownDirective("zz".into()));
        let e = parse_graph("g 3\ne 1 2 1.0\ne 2 3").unwrap_err();
        assert_eq!((e.line, e.kind), (3, ParseErrorKind::PartialEdgeWeights));
        assert!(parse_graph("e 1 2").is_err());
        assert!(parse_graph("g 2\nvw 1 nan").is_err());
        assert!(matches!(
            parse_graph("g 2\nvw 1 1").unwrap_err().kind,
            ParseErrorKind::PartialVertexWeights(2)
        ));
    }

    #[test]
    fn parse_weights_and_colors() {
        let g = parse_graph("g 4\nvw 1 2.5\nvw 2 0\nvw 3 0\nvw 4 0\ne 1 2 0.5 c3").unwrap();
        assert_eq!(g.vertex_weight(1), Some(2.5));
        assert_eq!(g.edge_weight(2, 1), Some(0.5));
        assert_eq!(g.edge_color(1, 2), Some(3));
        let g = parse_graph("g 2\ne 1 2 c7").unwrap();
        assert_eq!(g.edge_color(1, 2), Some(7));
        assert!(!g.has_edge_weights());
    }

    #[test]
    fn empty_graph() {
        let g = parse_graph("g 0").unwrap();
        assert_eq!(serialize_graph(&g), "g 0\n");
    }

    #[test]
    fn generator_laws() {
        let k5 = generate_random_graph(5, 1.0, WeightMode::None, None, 9);
        assert_eq!(k5.m(), 10);
        let e = generate_random_graph(5, 0.0, WeightMode::None, None, 9);
        assert_eq!(e.m(), 0);
        let a = generate_random_graph(30, 0.3, WeightMode::Both, Some(4), 42);
        let b = generate_random_graph(30, 0.3, WeightMode::Both, Some(4), 42);
        assert_eq!(a, b);
        assert_eq!(serialize_graph(&a), serialize_graph(&b));
        assert!(a.edge_weights().unwrap().iter().all(|w| (-1.0..=1.0).contains(w)));
        assert!(a.edge_colors().unwrap().iter().all(|c| (1..=4).contains(c)));
    }

    #[test]
    fn induced_relabels() {
        let g = generate_random_graph(10, 0.6, WeightMode::Both, Some(3), 1);
        let keep = [7, 2, 9];
        let (h, back) = g.induced(&keep);
        for a in 1..=3 {
            for b in 1..=3 {
                assert_eq!(h.has_edge(a, b), g.has_edge(back[a], back[b]));
                assert_eq!(h.edge_weight(a, b), g.edge_weight(back[a], back[b]));
            }
            assert_eq!(h.vertex_weight(a), g.vertex_weight(back[a]));
        }
    }

    #[test]
    fn cycle_canonical_form() {
        assert_eq!(canonical_cycle(&[3, 1, 4, 2]), vec![1, 3, 2, 4]);
        assert_eq!(canonical_cycle(&[4, 2, 3, 1]), vec![1, 3, 2, 4]);
    }

    proptest! {
        #[test]
        fn serialize_parse_identity(
            n in 0usize..20, p in 0.0f64..=1.0, mode in 0u8..4, colors in proptest::option::of(1u32..6), seed: u64,
        ) {
            let mode = [WeightMode::None, WeightMode::Vertex, WeightMode::Edge, WeightMode::Both][mode as usize];
            let g = generate_random_graph(n, p, mode, colors, seed);
            let text = serialize_graph(&g);
            let back = parse_graph(&text).unwrap();
            prop_assert_eq!(&back, &g);
            prop_assert_eq!(serialize_graph(&back), text);
        }
    }
}
