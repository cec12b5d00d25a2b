//! Dominance matrices by bucketed rank decomposition.
//!
//! For point families `P` and `Q` in `d` dimensions the dominance matrix is
//! `D[i,j] = |{k : P_i[k] <= Q_j[k]}|`. Both families are sorted together on
//! every coordinate; the sorted positions are cut into buckets of `s`
//! consecutive ranks. Pairs that land in different buckets on a coordinate
//! are counted by one 0-1 product per bucket, pairs sharing a bucket by a
//! short walk down the sorted list. Bucket size trades the number of
//! products against the walk length; the result does not depend on it.
//!
//! The same machinery answers threshold questions about distance products
//! (`min_k A[i,k] + B[k,j] >= K`) and so yields the leading bits of a
//! distance product with `2^bits` dominance computations.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{dims, Error, Result};
use crate::extmat::{count_product_nt, masked_sum_product, BoolMatrix, CountMatrix, ExtMatrix};

/// `n` points in `d` dimensions, coordinates in the extended reals.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet {
    n: usize,
    d: usize,
    coords: Vec<f64>,
}

impl PointSet {
    /// `coords` is row-major `n x d`.
    pub fn new(n: usize, d: usize, coords: Vec<f64>) -> Result<Self> {
        if coords.len() != n * d {
            return Err(dims("PointSet::new", n * d, coords.len()));
        }
        if let Some(p) = coords.iter().position(|c| c.is_nan()) {
            return Err(Error::NaN {
                row: p / d.max(1),
                col: p % d.max(1),
            });
        }
        Ok(PointSet { n, d, coords })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let m = ExtMatrix::from_rows(rows)?;
        Ok(Self::from_matrix(&m))
    }

    /// One point per matrix row.
    pub fn from_matrix(m: &ExtMatrix) -> Self {
        PointSet {
            n: m.rows(),
            d: m.cols(),
            coords: m.as_slice().to_vec(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn get(&self, i: usize, k: usize) -> f64 {
        self.coords[i * self.d + k]
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.d..(i + 1) * self.d]
    }
}

/// Bucket-size choice for [`dominance_matrix`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DominanceParams {
    /// Explicit bucket size; `None` derives it from `omega_hint`.
    pub s: Option<usize>,
    /// Exponent used only for the default `s = N^((omega - 1) / 2)`, where
    /// `N` is the total number of points.
    pub omega_hint: f64,
}

impl Default for DominanceParams {
    fn default() -> Self {
        DominanceParams {
            s: None,
            omega_hint: 3.0,
        }
    }
}

impl DominanceParams {
    pub fn with_bucket(s: usize) -> Self {
        DominanceParams {
            s: Some(s),
            ..Self::default()
        }
    }

    pub fn with_omega(omega: f64) -> Self {
        DominanceParams {
            s: None,
            omega_hint: omega,
        }
    }

    /// Effective bucket size for `total` points, clamped to `1..=total`.
    pub fn bucket_size(&self, total: usize) -> Result<usize> {
        let total = total.max(1);
        match self.s {
            Some(0) => Err(Error::InvalidArgument("bucket size must be at least 1".into())),
            Some(s) => Ok(s.min(total)),
            None => {
                let s = (total as f64).powf((self.omega_hint - 1.0) / 2.0).round() as usize;
                Ok(s.clamp(1, total))
            }
        }
    }
}

/// Per-coordinate sorted order of the combined family `P ++ Q` and the rank
/// of every point in it.
///
/// Ties sort `P` points before `Q` points and then by index, so that
/// `P_i[k] <= Q_j[k]` holds exactly when `P_i` precedes `Q_j` on coordinate `k`.
#[derive(Clone, Debug)]
pub struct RankTable {
    n_p: usize,
    n_q: usize,
    d: usize,
    /// `order[k]` lists combined point ids (P first, then Q) by rank.
    order: Vec<Vec<u32>>,
    /// `rank[x * d + k]`, 0-based.
    rank: Vec<u32>,
}

impl RankTable {
    pub fn build(p: &PointSet, q: &PointSet) -> Result<Self> {
        if p.d != q.d {
            return Err(dims(
                "dominance",
                format!("dimension {}", p.d),
                format!("dimension {}", q.d),
            ));
        }
        let (n_p, n_q, d) = (p.n, q.n, p.d);
        let total = n_p + n_q;
        let value = |x: usize, k: usize| if x < n_p { p.get(x, k) } else { q.get(x - n_p, k) };
        let mut order = Vec::with_capacity(d);
        let mut rank = vec![0u32; total * d];
        let mut keys: Vec<(u64, u32)> = Vec::with_capacity(total);
        for k in 0..d {
            // Ids already order P before Q and then by index.
            keys.clear();
            keys.extend((0..total).map(|x| (order_key(value(x, k)), x as u32)));
            keys.sort_unstable();
            let ids: Vec<u32> = keys.iter().map(|&(_, x)| x).collect();
            for (pos, &x) in ids.iter().enumerate() {
                rank[x as usize * d + k] = pos as u32;
            }
            order.push(ids);
        }
        Ok(RankTable {
            n_p,
            n_q,
            d,
            order,
            rank,
        })
    }

    pub fn total(&self) -> usize {
        self.n_p + self.n_q
    }

    /// Rank of `P_i` on coordinate `k`.
    pub fn rank_p(&self, i: usize, k: usize) -> usize {
        self.rank[i * self.d + k] as usize
    }

    /// Rank of `Q_j` on coordinate `k`.
    pub fn rank_q(&self, j: usize, k: usize) -> usize {
        self.rank[(self.n_p + j) * self.d + k] as usize
    }

    /// Combined ids in rank order on coordinate `k` (ids `>= |P|` are `Q` points).
    pub fn order(&self, k: usize) -> &[u32] {
        &self.order[k]
    }
}

/// Monotone map from `f64` (`-0.0` equal to `0.0`) to `u64`.
fn order_key(v: f64) -> u64 {
    let bits = (v + 0.0).to_bits();
    if bits >> 63 == 1 {
        !bits
    } else {
        bits | 1 << 63
    }
}

/// P-only orders per coordinate and, for every `(Q_j, k)`, the range of that
/// order holding the P points below `Q_j` inside its bucket.
struct BucketRuns {
    n_p: usize,
    d: usize,
    p_order: Vec<u32>,
    q_range: Vec<(u32, u32)>,
}

impl BucketRuns {
    fn new(ranks: &RankTable, s: usize) -> Self {
        let (n_p, n_q, d) = (ranks.n_p, ranks.n_q, ranks.d);
        let mut p_order = vec![0u32; n_p * d];
        let mut q_range = vec![(0u32, 0u32); n_q * d];
        for k in 0..d {
            let (mut seen, mut lo) = (0u32, 0u32);
            for (pos, &x) in ranks.order(k).iter().enumerate() {
                if pos % s == 0 {
                    lo = seen;
                }
                let x = x as usize;
                if x < n_p {
                    p_order[k * n_p + seen as usize] = x as u32;
                    seen += 1;
                } else {
                    q_range[(x - n_p) * d + k] = (lo, seen);
                }
            }
        }
        BucketRuns {
            n_p,
            d,
            p_order,
            q_range,
        }
    }

    /// Calls `visit(i, k)` for every `P_i` below `Q_j` in `Q_j`'s bucket on coordinate `k`.
    fn visit(&self, j: usize, mut visit: impl FnMut(usize, usize)) {
        for k in 0..self.d {
            let (lo, hi) = self.q_range[j * self.d + k];
            let base = k * self.n_p;
            for &i in &self.p_order[base + lo as usize..base + hi as usize] {
                visit(i as usize, k);
            }
        }
    }
}

/// Which payload the bucket decomposition accumulates.
enum Payload<'a> {
    Count,
    Weighted(&'a ExtMatrix),
}

enum Accum {
    Count(CountMatrix),
    Sum(ExtMatrix),
}

fn decompose(p: &PointSet, q: &PointSet, params: &DominanceParams, payload: Payload<'_>) -> Result<Accum> {
    let ranks = RankTable::build(p, q)?;
    let (n_p, n_q, d) = (p.n, q.n, p.d);
    let total = ranks.total();
    let s = params.bucket_size(total)?;
    let buckets = total.div_ceil(s).max(1);

    let mut acc = match payload {
        Payload::Count => Accum::Count(CountMatrix::zeros(n_p, n_q)),
        Payload::Weighted(v) => {
            if v.rows() != n_p || v.cols() != d {
                return Err(dims(
                    "weighted_dominance",
                    format!("values {n_p}x{d}"),
                    format!("{}x{}", v.rows(), v.cols()),
                ));
            }
            if v.as_slice().iter().any(|x| x.is_infinite()) {
                return Err(Error::InvalidArgument("dominance values must be finite".into()));
            }
            Accum::Sum(ExtMatrix::filled(n_p, n_q, 0.0))
        }
    };

    // Cross-bucket pairs: A_b[i,k] marks P_i in bucket b on coordinate k,
    // U_b[j,k] marks Q_j strictly above bucket b. Buckets go top down so
    // U_b grows by one bucket per step.
    if buckets > 1 && n_p > 0 && n_q > 0 {
        let slice = |k: usize, b: usize| &ranks.order(k)[(b * s).min(total)..((b + 1) * s).min(total)];
        let mut above = BoolMatrix::zeros(n_q, d);
        for b in (0..buckets - 1).rev() {
            for k in 0..d {
                for &x in slice(k, b + 1) {
                    if x as usize >= n_p {
                        above.set(x as usize - n_p, k, true);
                    }
                }
            }
            match (&mut acc, &payload) {
                (Accum::Count(c), Payload::Count) => {
                    let mut a = BoolMatrix::zeros(n_p, d);
                    for k in 0..d {
                        for &x in slice(k, b) {
                            if (x as usize) < n_p {
                                a.set(x as usize, k, true);
                            }
                        }
                    }
                    if a.count_ones() == 0 {
                        continue;
                    }
                    c.add_assign(&count_product_nt(&a, &above)?);
                }
                (Accum::Sum(c), Payload::Weighted(v)) => {
                    let mut a = ExtMatrix::filled(n_p, d, 0.0);
                    for k in 0..d {
                        for &x in slice(k, b) {
                            if (x as usize) < n_p {
                                a.set(x as usize, k, v.get(x as usize, k));
                            }
                        }
                    }
                    let part = masked_sum_product(&a, &above.transpose())?;
                    for i in 0..n_p {
                        for j in 0..n_q {
                            let x = part.get(i, j);
                            if x != 0.0 {
                                c.set(i, j, c.get(i, j) + x);
                            }
                        }
                    }
                }
                _ => unreachable!(),
            }
        }
    }

    // Same-bucket pairs: for each Q point and coordinate, walk down to the
    // start of its bucket. Rows of the transposed partial are independent.
    let runs = BucketRuns::new(&ranks, s);
    match (&mut acc, &payload) {
        (Accum::Count(c), _) => {
            let mut part = vec![0u32; n_q * n_p];
            part.par_chunks_mut(n_p.max(1)).enumerate().for_each(|(j, row)| {
                runs.visit(j, |i, _| row[i] += 1);
            });
            for j in 0..n_q {
                for (i, &x) in part[j * n_p..(j + 1) * n_p].iter().enumerate() {
                    if x != 0 {
                        c.add_at(i, j, x);
                    }
                }
            }
        }
        (Accum::Sum(c), Payload::Weighted(v)) => {
            let mut part = vec![0.0f64; n_q * n_p];
            let mut hit = vec![false; n_q * n_p];
            part.par_chunks_mut(n_p.max(1))
                .zip(hit.par_chunks_mut(n_p.max(1)))
                .enumerate()
                .for_each(|(j, (row, seen))| {
                    runs.visit(j, |i, k| {
                        row[i] += v.get(i, k);
                        seen[i] = true;
                    });
                });
            for j in 0..n_q {
                for i in 0..n_p {
                    if hit[j * n_p + i] {
                        c.set(i, j, c.get(i, j) + part[j * n_p + i]);
                    }
                }
            }
        }
        _ => unreachable!(),
    }
    Ok(acc)
}

/// `D[i,j] = |{k : P_i[k] <= Q_j[k]}|`.
pub fn dominance_matrix(p: &PointSet, q: &PointSet, params: &DominanceParams) -> Result<CountMatrix> {
    match decompose(p, q, params, Payload::Count)? {
        Accum::Count(c) => Ok(c),
        Accum::Sum(_) => unreachable!(),
    }
}

/// `S[i,j] = sum of values[i,k] over k with P_i[k] <= Q_j[k]`.
///
/// `values` is `|P| x d` and finite. Sums are accumulated bucket by bucket,
/// so they are exact whenever the partial sums are representable (integer
/// payloads, for instance) and otherwise agree with coordinate-order
/// summation up to rounding.
pub fn weighted_dominance(
    p: &PointSet,
    q: &PointSet,
    values: &ExtMatrix,
    params: &DominanceParams,
) -> Result<ExtMatrix> {
    match decompose(p, q, params, Payload::Weighted(values))? {
        Accum::Sum(s) => Ok(s),
        Accum::Count(_) => unreachable!(),
    }
}

/// `A[i,k] - K` with `+inf` kept and `-inf - -inf` read as `-inf`.
#[inline]
fn shifted(a: f64, k: f64) -> f64 {
    if a == f64::INFINITY {
        return f64::INFINITY;
    }
    let v = a - k;
    if v.is_nan() {
        f64::NEG_INFINITY
    } else {
        v
    }
}

/// `C[i,j] = 1` iff `min_k A[i,k] + B[k,j] >= K` (`> K` when `strict`).
///
/// Rows of `A` shifted by `-K` and negated columns of `B` are compared by a
/// single dominance computation.
pub fn distance_threshold(a: &ExtMatrix, b: &ExtMatrix, k: f64, strict: bool) -> Result<BoolMatrix> {
    distance_threshold_with(a, b, k, strict, &DominanceParams::default())
}

pub fn distance_threshold_with(
    a: &ExtMatrix,
    b: &ExtMatrix,
    k: f64,
    strict: bool,
    params: &DominanceParams,
) -> Result<BoolMatrix> {
    if a.cols() != b.rows() {
        return Err(dims(
            "distance_threshold",
            format!("B with {} rows", a.cols()),
            b.rows(),
        ));
    }
    if k.is_nan() {
        return Err(Error::InvalidArgument("threshold is NaN".into()));
    }
    let (rows, inner, cols) = (a.rows(), a.cols(), b.cols());
    if !strict && k == f64::NEG_INFINITY {
        return Ok(BoolMatrix::ones(rows, cols));
    }
    if strict && k == f64::INFINITY {
        return Ok(BoolMatrix::zeros(rows, cols));
    }
    let left = ExtMatrix::from_fn(rows, inner, |i, t| shifted(a.get(i, t), k))?;
    let right = ExtMatrix::from_fn(cols, inner, |j, t| -b.get(t, j))?;
    let u = PointSet::from_matrix(&left);
    let v = PointSet::from_matrix(&right);
    if strict {
        // every k has u_i[k] > v_j[k]: no coordinate with u_i <= v_j
        let d = dominance_matrix(&u, &v, params)?;
        Ok(BoolMatrix::from_fn(rows, cols, |i, j| d.get(i, j) == 0))
    } else {
        // every k has v_j[k] <= u_i[k]
        let d = dominance_matrix(&v, &u, params)?;
        Ok(BoolMatrix::from_fn(rows, cols, |i, j| d.get(j, i) as usize == inner))
    }
}

/// Leading bits of a distance product.
#[derive(Clone, Debug, PartialEq)]
pub struct MsbProduct {
    pub rows: usize,
    pub cols: usize,
    /// The smallest power of two larger than `max A + max B` (finite maxima).
    pub scale: f64,
    pub bits: u32,
    /// Row-major. `Some(p)` means the exact entry `x` lies in `[0, scale)` and
    /// `p = floor(x * 2^bits / scale)`; `None` marks entries `>= scale`
    /// (in practice `+inf`).
    pub prefix: Vec<Option<u64>>,
    /// Distinct threshold matrices computed.
    pub evaluations: usize,
}

impl MsbProduct {
    pub fn get(&self, i: usize, j: usize) -> Option<u64> {
        self.prefix[i * self.cols + j]
    }
}

/// Limits for [`msb_distance_product`].
#[derive(Clone, Copy, Debug)]
pub struct MsbOptions {
    /// Maximum number of threshold matrices the call may compute.
    pub budget: usize,
    pub params: DominanceParams,
}

impl Default for MsbOptions {
    fn default() -> Self {
        MsbOptions {
            budget: 1 << 12,
            params: DominanceParams::default(),
        }
    }
}

/// The `k_bits` most significant bits of every entry of `A * B` (min-plus)
/// relative to the scale `W`.
///
/// Bit `l` is `OR_s [!C(W(1 - s/2^(l-1))) & C(W(1 - s/2^(l-1) - 1/2^l))]`
/// over `s < 2^(l-1)`; the upper thresholds of level `l` are exactly the
/// thresholds of level `l - 1`, so only odd multiples of `W / 2^l` are new
/// and the whole call needs `2^k_bits` threshold matrices. Entries must be
/// integers or infinities and the exact product nonnegative.
pub fn msb_distance_product(a: &ExtMatrix, b: &ExtMatrix, k_bits: u32) -> Result<MsbProduct> {
    msb_distance_product_with(a, b, k_bits, &MsbOptions::default())
}

pub fn msb_distance_product_with(a: &ExtMatrix, b: &ExtMatrix, k_bits: u32, opts: &MsbOptions) -> Result<MsbProduct> {
    if a.cols() != b.rows() {
        return Err(dims(
            "msb_distance_product",
            format!("B with {} rows", a.cols()),
            b.rows(),
        ));
    }
    if k_bits == 0 {
        return Err(Error::InvalidArgument("k_bits must be at least 1".into()));
    }
    let needed = 1usize.checked_shl(k_bits).filter(|&x| x != 0).unwrap_or(usize::MAX);
    if k_bits >= 63 || needed > opts.budget {
        return Err(Error::BudgetExceeded {
            needed,
            budget: opts.budget,
        });
    }
    let top = a.max_finite().unwrap_or(0.0) + b.max_finite().unwrap_or(0.0);
    let mut scale = 1.0f64;
    while scale <= top {
        scale *= 2.0;
    }
    let unit = scale / needed as f64;

    let (rows, cols) = (a.rows(), b.cols());
    let mut cache: HashMap<u64, BoolMatrix> = HashMap::new();
    let mut threshold = |m: u64| -> Result<BoolMatrix> {
        if let Some(c) = cache.get(&m) {
            return Ok(c.clone());
        }
        let c = distance_threshold_with(a, b, m as f64 * unit, false, &opts.params)?;
        cache.insert(m, c.clone());
        Ok(c)
    };

    let full = needed as u64;
    let mut value = vec![0u64; rows * cols];
    for level in 1..=k_bits {
        let half = 1u64 << (level - 1);
        let step_hi = full / half; // W / 2^(l-1) in units
        let step_lo = full >> level; // W / 2^l in units
        let mut bit = BoolMatrix::zeros(rows, cols);
        for s in 0..half {
            let hi = (half - s) * step_hi;
            let lo = hi - step_lo;
            let term = threshold(hi)?.not().and(&threshold(lo)?)?;
            bit = bit.or(&term)?;
        }
        for i in 0..rows {
            for j in 0..cols {
                if bit.get(i, j) {
                    value[i * cols + j] |= 1 << (k_bits - level);
                }
            }
        }
    }
    let above = threshold(full)?;
    let prefix = (0..rows * cols)
        .map(|x| (!above.get(x / cols.max(1), x % cols.max(1))).then_some(value[x]))
        .collect();
    Ok(MsbProduct {
        rows,
        cols,
        scale,
        bits: k_bits,
        prefix,
        evaluations: cache.len(),
    })
}
