//! The `t(omega, h)` planner and maximum-witness products.
//!
//! A maximum witness of a Boolean product entry `(AB)[i,j]` is the largest
//! inner index `k` with `A[i,k] = B[k,j] = 1`. The inner dimension is split
//! into consecutive buckets; one counting product per bucket tells which
//! bucket holds the last witness, and a backward scan inside that bucket
//! finds it.
//!
//! Witness indices are 1-based and 0 means "no witness". Matrix rows and
//! columns are 0-based as everywhere in [`crate::extmat`].

use std::ops::Bound;

use crate::error::{dims, Error, Result};
use crate::extmat::{count_product, BoolMatrix, CountMatrix};

/// Solution of the planner program for one `(omega, h)`.
///
/// `a + b + c = h` splits the pattern into row, inner and column parts and
/// `mu` is the bucket exponent: buckets hold `ceil(n^mu)` inner indices.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlanParameters {
    pub omega: f64,
    pub h: usize,
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub mu: f64,
    pub b1: usize,
    pub s1: f64,
    pub s2: f64,
    pub t: f64,
}

impl PlanParameters {
    /// Bucket width for a graph on `n` vertices: `ceil(n^mu)`, at least 1.
    pub fn bucket_width(&self, n: usize) -> usize {
        ((n.max(1) as f64).powf(self.mu).ceil() as usize).max(1)
    }

    /// `(a, b, c)` as a tuple.
    pub fn split(&self) -> (usize, usize, usize) {
        (self.a, self.b, self.c)
    }
}

/// Evaluates the program
///
/// ```text
/// b1 = max { b >= 1 : b / (4 - w) <= floor((h - b) / 2) }
/// s1 = h - b1 + b1 / (4 - w)
/// s2(b) = max { h - b + floor((h - b) / 2), h - (3 - w) floor((h - b) / 2) }
/// s2 = min { s2(b) : floor((h - b) / 2) <= b <= h - 2 }
/// t = min { s1, s2 }
/// ```
///
/// and returns the minimizing split. When `s1 <= s2` the split is
/// `b = b1`, `a = floor((h - b1) / 2)`, `c = ceil((h - b1) / 2)`,
/// `mu = b1 / (4 - w)`; otherwise `b` is the smallest minimizer of `s2(b)`
/// and `a = mu = floor((h - b) / 2)`.
pub fn plan_parameters(omega: f64, h: usize) -> Result<PlanParameters> {
    if h < 3 {
        return Err(Error::InvalidArgument(format!("pattern size {h} is below 3")));
    }
    if !(2.0..=3.0).contains(&omega) {
        return Err(Error::InvalidArgument(format!("omega {omega} outside [2, 3]")));
    }
    let half = |b: usize| (h - b) / 2;
    let d = 4.0 - omega;
    let b1 = (1..h)
        .filter(|&b| b as f64 / d <= half(b) as f64)
        .max()
        .expect("b = 1 is always feasible for h >= 3");
    let s1 = (h - b1) as f64 + b1 as f64 / d;

    let s2_of = |b: usize| {
        let f = half(b) as f64;
        ((h - b) as f64 + f).max(h as f64 - (3.0 - omega) * f)
    };
    let (b2, s2) = (1..=h - 2)
        .filter(|&b| half(b) <= b)
        .map(|b| (b, s2_of(b)))
        .fold(None, |best: Option<(usize, f64)>, (b, s)| match best {
            Some((_, bs)) if bs <= s => best,
            _ => Some((b, s)),
        })
        .expect("b = h - 2 is always feasible");

    let (a, b, c, mu, t) = if s1 <= s2 {
        let a = half(b1);
        (a, b1, h - b1 - a, b1 as f64 / d, s1)
    } else {
        let a = half(b2);
        (a, b2, h - b2 - a, a as f64, s2)
    };
    Ok(PlanParameters {
        omega,
        h,
        a,
        b,
        c,
        mu,
        b1,
        s1,
        s2,
        t,
    })
}

/// Per-entry maximum witnesses; `get` returns a 1-based inner index or 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessMatrix {
    rows: usize,
    cols: usize,
    w: Vec<u32>,
}

impl WitnessMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> usize {
        self.w[i * self.cols + j] as usize
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.w
    }
}

fn check(op: &'static str, a: &BoolMatrix, b: &BoolMatrix) -> Result<()> {
    if a.cols() != b.rows() {
        return Err(dims(op, format!("B with {} rows", a.cols()), b.rows()));
    }
    Ok(())
}

fn default_width(inner: usize) -> usize {
    ((inner as f64).sqrt().ceil() as usize).max(1)
}

/// Inner indices `k` in `[lo, hi)` with `x[k] & y[k]` set, largest first.
fn common_desc<'a>(x: &'a [u64], y: &'a [u64], lo: usize, hi: usize) -> impl Iterator<Item = usize> + 'a {
    let mut word = if hi == 0 { 0 } else { (hi - 1) / 64 + 1 };
    let mut cur = 0u64;
    let lo_word = lo / 64;
    std::iter::from_fn(move || loop {
        if cur != 0 {
            let bit = 63 - cur.leading_zeros() as usize;
            cur &= !(1u64 << bit);
            let k = word * 64 + bit;
            if k < lo {
                return None;
            }
            return Some(k);
        }
        if word == 0 || word <= lo_word {
            return None;
        }
        word -= 1;
        let mut m = x[word] & y[word];
        if word == (hi - 1) / 64 && hi % 64 != 0 {
            m &= (1u64 << (hi % 64)) - 1;
        }
        cur = m;
    })
}

/// Bucket `r` covers inner indices `[r * width, min((r + 1) * width, inner))`.
fn bucket_counts(a: &BoolMatrix, b: &BoolMatrix, lo: usize, hi: usize) -> Result<CountMatrix> {
    count_product(&a.column_slice(lo, hi), &b.row_slice(lo, hi))
}

/// Maximum witnesses of `AB` with the inner dimension split into buckets of
/// `width` consecutive indices. The result does not depend on `width`.
pub fn max_witness_product(a: &BoolMatrix, b: &BoolMatrix, width: usize) -> Result<WitnessMatrix> {
    check("max_witness_product", a, b)?;
    if width == 0 {
        return Err(Error::InvalidArgument("bucket width must be at least 1".into()));
    }
    let (rows, inner, cols) = (a.rows(), a.cols(), b.cols());
    let width = width.min(inner.max(1));
    let bt = b.transpose();
    let mut w = vec![0u32; rows * cols];
    let mut open = rows * cols;
    let buckets = inner.div_ceil(width);
    for r in (0..buckets).rev() {
        if open == 0 {
            break;
        }
        let (lo, hi) = (r * width, ((r + 1) * width).min(inner));
        let c = bucket_counts(a, b, lo, hi)?;
        for i in 0..rows {
            for j in 0..cols {
                if w[i * cols + j] != 0 || c.get(i, j) == 0 {
                    continue;
                }
                let k = common_desc(a.row_words(i), bt.row_words(j), lo, hi)
                    .next()
                    .expect("bucket count promised a witness");
                w[i * cols + j] = k as u32 + 1;
                open -= 1;
            }
        }
    }
    Ok(WitnessMatrix { rows, cols, w })
}

/// Up to `k` largest witnesses per entry, in descending order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopWitnesses {
    rows: usize,
    cols: usize,
    lists: Vec<Vec<u32>>,
}

impl TopWitnesses {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// 1-based witness indices, largest first.
    pub fn get(&self, i: usize, j: usize) -> &[u32] {
        &self.lists[i * self.cols + j]
    }
}

pub fn top_k_witnesses(a: &BoolMatrix, b: &BoolMatrix, k: usize) -> Result<TopWitnesses> {
    top_k_witnesses_with_width(a, b, k, default_width(a.cols()))
}

/// The `k` largest witnesses of every entry of `AB`. Buckets are visited
/// from last to first and each bucket with a nonzero count is scanned
/// backward until `k` witnesses are known.
pub fn top_k_witnesses_with_width(a: &BoolMatrix, b: &BoolMatrix, k: usize, width: usize) -> Result<TopWitnesses> {
    check("top_k_witnesses", a, b)?;
    if k == 0 || width == 0 {
        return Err(Error::InvalidArgument("k and bucket width must be at least 1".into()));
    }
    let (rows, inner, cols) = (a.rows(), a.cols(), b.cols());
    let width = width.min(inner.max(1));
    let bt = b.transpose();
    let mut lists = vec![Vec::new(); rows * cols];
    for r in (0..inner.div_ceil(width)).rev() {
        let (lo, hi) = (r * width, ((r + 1) * width).min(inner));
        let c = bucket_counts(a, b, lo, hi)?;
        for i in 0..rows {
            for j in 0..cols {
                let list = &mut lists[i * cols + j];
                if list.len() >= k || c.get(i, j) == 0 {
                    continue;
                }
                let need = k - list.len();
                list.extend(
                    common_desc(a.row_words(i), bt.row_words(j), lo, hi)
                        .take(need)
                        .map(|x| x as u32 + 1),
                );
            }
        }
    }
    Ok(TopWitnesses { rows, cols, lists })
}

/// A real interval with arbitrary open, closed or unbounded ends.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: Bound<f64>,
    pub hi: Bound<f64>,
}

impl Interval {
    pub const ALL: Interval = Interval {
        lo: Bound::Unbounded,
        hi: Bound::Unbounded,
    };

    pub fn closed(lo: f64, hi: f64) -> Self {
        Interval {
            lo: Bound::Included(lo),
            hi: Bound::Included(hi),
        }
    }

    pub fn open(lo: f64, hi: f64) -> Self {
        Interval {
            lo: Bound::Excluded(lo),
            hi: Bound::Excluded(hi),
        }
    }

    pub fn at_least(lo: f64) -> Self {
        Interval {
            lo: Bound::Included(lo),
            hi: Bound::Unbounded,
        }
    }

    pub fn above(lo: f64) -> Self {
        Interval {
            lo: Bound::Excluded(lo),
            hi: Bound::Unbounded,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        let lo = match self.lo {
            Bound::Included(l) => x >= l,
            Bound::Excluded(l) => x > l,
            Bound::Unbounded => true,
        };
        let hi = match self.hi {
            Bound::Included(h) => x <= h,
            Bound::Excluded(h) => x < h,
            Bound::Unbounded => true,
        };
        lo && hi
    }

    /// Index range `[start, end)` of a sorted slice whose values lie in the interval.
    fn index_range(&self, w: &[f64]) -> (usize, usize) {
        let start = match self.lo {
            Bound::Included(l) => w.partition_point(|&x| x < l),
            Bound::Excluded(l) => w.partition_point(|&x| x <= l),
            Bound::Unbounded => 0,
        };
        let end = match self.hi {
            Bound::Included(h) => w.partition_point(|&x| x <= h),
            Bound::Excluded(h) => w.partition_point(|&x| x < h),
            Bound::Unbounded => w.len(),
        };
        (start, end.max(start))
    }
}

/// One interval for every entry, or one per entry in row-major order.
#[derive(Clone, Debug, PartialEq)]
pub enum Intervals {
    Global(Interval),
    PerPair(Vec<Interval>),
}

pub fn interval_witness(a: &BoolMatrix, b: &BoolMatrix, w: &[f64], intervals: &Intervals) -> Result<BoolMatrix> {
    interval_witness_with_width(a, b, w, intervals, default_width(a.cols()))
}

/// `out[i,j] = 1` iff some `k` has `A[i,k] = B[k,j] = 1` and `w[k]` in the
/// interval of `(i,j)`. `w` must be ascending; the qualifying indices form a
/// contiguous range found by binary search, whose whole buckets are decided
/// by prefix sums of the bucket counts and whose two partial buckets are
/// scanned directly.
pub fn interval_witness_with_width(
    a: &BoolMatrix,
    b: &BoolMatrix,
    w: &[f64],
    intervals: &Intervals,
    width: usize,
) -> Result<BoolMatrix> {
    check("interval_witness", a, b)?;
    let (rows, inner, cols) = (a.rows(), a.cols(), b.cols());
    if w.len() != inner {
        return Err(dims("interval_witness", format!("{inner} weights"), w.len()));
    }
    if let Some(p) = w.iter().position(|x| x.is_nan()) {
        return Err(Error::NotSorted(p));
    }
    if let Some(p) = w.windows(2).position(|p| p[0] > p[1]) {
        return Err(Error::NotSorted(p + 1));
    }
    if let Intervals::PerPair(v) = intervals {
        if v.len() != rows * cols {
            return Err(dims("interval_witness", format!("{} intervals", rows * cols), v.len()));
        }
    }
    if width == 0 {
        return Err(Error::InvalidArgument("bucket width must be at least 1".into()));
    }
    let width = width.min(inner.max(1));
    let buckets = inner.div_ceil(width);
    // prefix[r] = sum of bucket counts over buckets < r
    let mut prefix = Vec::with_capacity(buckets + 1);
    prefix.push(CountMatrix::zeros(rows, cols));
    for r in 0..buckets {
        let mut next = prefix[r].clone();
        next.add_assign(&bucket_counts(a, b, r * width, ((r + 1) * width).min(inner))?);
        prefix.push(next);
    }
    let bt = b.transpose();
    let global = match intervals {
        Intervals::Global(iv) => Some(iv.index_range(w)),
        Intervals::PerPair(_) => None,
    };
    let mut out = BoolMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            let (lo, hi) = match (global, intervals) {
                (Some(r), _) => r,
                (None, Intervals::PerPair(v)) => v[i * cols + j].index_range(w),
                _ => unreachable!(),
            };
            if lo >= hi {
                continue;
            }
            let first_full = lo.div_ceil(width);
            let last_full = hi / width;
            let hit = if first_full < last_full {
                prefix[last_full].get(i, j) > prefix[first_full].get(i, j)
                    || common_desc(a.row_words(i), bt.row_words(j), lo, first_full * width)
                        .next()
                        .is_some()
                    || common_desc(a.row_words(i), bt.row_words(j), last_full * width, hi)
                        .next()
                        .is_some()
            } else {
                common_desc(a.row_words(i), bt.row_words(j), lo, hi).next().is_some()
            };
            if hit {
                out.set(i, j, true);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extmat::bool_product;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_bool(rng: &mut ChaCha8Rng, r: usize, c: usize, p: f64) -> BoolMatrix {
        BoolMatrix::from_fn(r, c, |_, _| rng.random_bool(p))
    }

    fn all_witnesses(a: &BoolMatrix, b: &BoolMatrix, i: usize, j: usize) -> Vec<u32> {
        (0..a.cols())
            .rev()
            .filter(|&k| a.get(i, k) && b.get(k, j))
            .map(|k| k as u32 + 1)
            .collect()
    }

    #[test]
    fn planner_small_values() {
        let w = 2.376;
        let p = plan_parameters(w, 3).unwrap();
        assert_eq!(p.b1, 1);
        assert!((p.t - (2.0 + 1.0 / (4.0 - w))).abs() < 1e-12);
        let p = plan_parameters(w, 4).unwrap();
        assert_eq!(p.split(), (1, 2, 1));
        assert!((p.t - 3.376).abs() < 1e-12);
        let p = plan_parameters(2.0, 11).unwrap();
        assert!((p.t - 8.5).abs() < 1e-12);
        assert!(plan_parameters(w, 2).is_err());
        assert!(plan_parameters(3.5, 5).is_err());
    }

    #[test]
    fn planner_split_is_valid() {
        for h in 3..=40 {
            for step in 0..=10 {
                let w = 2.0 + step as f64 / 10.0;
                let p = plan_parameters(w, h).unwrap();
                assert_eq!(p.a + p.b + p.c, h);
                assert!(p.a >= 1 && p.b >= 1 && p.c >= 1);
                assert_eq!(p.t, p.s1.min(p.s2));
                assert!(p.mu > 0.0 && p.mu <= p.a.min(p.c) as f64 + 1e-12);
            }
        }
    }

    #[test]
    fn planner_monotone_in_omega() {
        for h in 3..=30 {
            let mut prev = 0.0;
            for step in 0..=20 {
                let t = plan_parameters(2.0 + step as f64 / 20.0, h).unwrap().t;
                assert!(t >= prev - 1e-12, "h = {h}");
                prev = t;
            }
        }
    }

    #[test]
    fn witness_examples() {
        let id = BoolMatrix::identity(3);
        let w = max_witness_product(&id, &id, 1).unwrap();
        assert_eq!(w.as_slice(), &[1, 0, 0, 0, 2, 0, 0, 0, 3]);
        let a = BoolMatrix::from_rows(&[[1u8, 1], [1, 0]]);
        let b = BoolMatrix::from_rows(&[[1u8, 0], [1, 1]]);
        for width in 1..=2 {
            let w = max_witness_product(&a, &b, width).unwrap();
            assert_eq!(w.as_slice(), &[2, 2, 1, 0]);
        }
        let ones = BoolMatrix::ones(4, 4);
        let t = top_k_witnesses(&ones, &ones, 2).unwrap();
        assert_eq!(t.get(2, 3), &[4, 3]);
    }

    #[test]
    fn witness_random_against_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let (r, n, c) = (
                rng.random_range(1..20),
                rng.random_range(1..150),
                rng.random_range(1..20),
            );
            let p = rng.random_range(0.0..0.3);
            let a = random_bool(&mut rng, r, n, p);
            let b = random_bool(&mut rng, n, c, p);
            let widths = [1, 2, 7, 64, n];
            for &width in &widths {
                let w = max_witness_product(&a, &b, width).unwrap();
                let t = top_k_witnesses_with_width(&a, &b, 3, width).unwrap();
                for i in 0..r {
                    for j in 0..c {
                        let all = all_witnesses(&a, &b, i, j);
                        assert_eq!(w.get(i, j), all.first().copied().unwrap_or(0) as usize);
                        assert_eq!(t.get(i, j), &all[..all.len().min(3)]);
                    }
                }
            }
        }
    }

    #[test]
    fn interval_queries() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let (r, n, c) = (
                rng.random_range(1..12),
                rng.random_range(1..100),
                rng.random_range(1..12),
            );
            let a = random_bool(&mut rng, r, n, 0.2);
            let b = random_bool(&mut rng, n, c, 0.2);
            let mut w: Vec<f64> = (0..n).map(|_| rng.random_range(0..20) as f64).collect();
            w.sort_by(f64::total_cmp);
            let full = interval_witness(&a, &b, &w, &Intervals::Global(Interval::ALL)).unwrap();
            assert_eq!(full, bool_product(&a, &b).unwrap());
            let empty = interval_witness(&a, &b, &w, &Intervals::Global(Interval::open(3.0, 3.0))).unwrap();
            assert_eq!(empty.count_ones(), 0);
            let ivs: Vec<Interval> = (0..r * c)
                .map(|_| {
                    let x = rng.random_range(-1..21) as f64;
                    let y = x + rng.random_range(0..8) as f64;
                    if rng.random_bool(0.5) {
                        Interval::closed(x, y)
                    } else {
                        Interval::open(x, y)
                    }
                })
                .collect();
            for width in [1, 3, 10, n] {
                let got = interval_witness_with_width(&a, &b, &w, &Intervals::PerPair(ivs.clone()), width).unwrap();
                for i in 0..r {
                    for j in 0..c {
                        let want = (0..n).any(|k| a.get(i, k) && b.get(k, j) && ivs[i * c + j].contains(w[k]));
                        assert_eq!(got.get(i, j), want);
                    }
                }
            }
        }
    }

    #[test]
    fn interval_rejects_unsorted() {
        let a = BoolMatrix::ones(1, 2);
        assert_eq!(
            interval_witness(&a, &a.transpose(), &[2.0, 1.0], &Intervals::Global(Interval::ALL)),
            Err(Error::NotSorted(1))
        );
    }
}
