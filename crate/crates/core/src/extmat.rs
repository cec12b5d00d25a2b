//! Dense matrix kernels over the Boolean, counting, min-plus and max-plus
//! semirings.
//!
//! All products are classical `O(n1 * n2 * n3)`. Boolean and counting
//! products work on 64-bit packed rows; the tropical products are blocked
//! over the inner dimension. Every kernel visits the inner index in
//! ascending order for each output entry, so results do not depend on the
//! block size or on the number of worker threads.

use std::fmt::{self, Write as _};

use rayon::prelude::*;

use crate::error::{dims, Error, ParseError, ParseErrorKind, Result};

/// Default inner-dimension block for the tropical kernels.
pub const DEFAULT_BLOCK: usize = 64;

/// Products smaller than this many scalar steps run on the calling thread.
const PARALLEL_WORK: usize = 1 << 20;

const WORD: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

/// A row-major, bit-packed 0-1 matrix. Padding bits past `cols` are zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BoolMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    bits: Vec<u64>,
}

impl BoolMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        BoolMatrix {
            rows,
            cols,
            stride,
            bits: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn ones(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| true)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    /// Builds a matrix from rows of 0/1 values; all rows must have equal length.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        assert!(rows.iter().all(|r| r.as_ref().len() == cols), "ragged rows");
        Self::from_fn(rows.len(), cols, |i, j| rows[i].as_ref()[j] != 0)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.rows && j < self.cols);
        self.bits[i * self.stride + j / WORD] >> (j % WORD) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        debug_assert!(i < self.rows && j < self.cols);
        let w = &mut self.bits[i * self.stride + j / WORD];
        let mask = 1u64 << (j % WORD);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    /// The packed words of row `i`.
    #[inline]
    pub fn row_words(&self, i: usize) -> &[u64] {
        &self.bits[i * self.stride..(i + 1) * self.stride]
    }

    /// Column indices of the set bits of row `i`, ascending.
    pub fn row_ones(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.row_words(i)
            .iter()
            .enumerate()
            .flat_map(|(wi, &w)| BitIter(w).map(move |b| wi * WORD + b))
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn transpose(&self) -> BoolMatrix {
        let mut t = BoolMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in self.row_ones(i) {
                t.set(j, i, true);
            }
        }
        t
    }

    /// Columns `lo..hi` as a new matrix.
    pub fn column_slice(&self, lo: usize, hi: usize) -> BoolMatrix {
        assert!(lo <= hi && hi <= self.cols);
        let mut out = BoolMatrix::zeros(self.rows, hi - lo);
        for i in 0..self.rows {
            for j in self.row_ones(i) {
                if j >= hi {
                    break;
                }
                if j >= lo {
                    out.set(i, j - lo, true);
                }
            }
        }
        out
    }

    /// Rows `lo..hi` as a new matrix.
    pub fn row_slice(&self, lo: usize, hi: usize) -> BoolMatrix {
        assert!(lo <= hi && hi <= self.rows);
        BoolMatrix {
            rows: hi - lo,
            cols: self.cols,
            stride: self.stride,
            bits: self.bits[lo * self.stride..hi * self.stride].to_vec(),
        }
    }

    /// Entrywise AND.
    pub fn and(&self, other: &BoolMatrix) -> Result<BoolMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(dims(
                "and",
                format!("{}x{}", self.rows, self.cols),
                format!("{}x{}", other.rows, other.cols),
            ));
        }
        let bits = self.bits.iter().zip(&other.bits).map(|(a, b)| a & b).collect();
        Ok(BoolMatrix { bits, ..*self })
    }

    /// Entrywise NOT (padding stays zero).
    pub fn not(&self) -> BoolMatrix {
        let mut out = BoolMatrix::from_fn(self.rows, self.cols, |_, _| true);
        for (o, w) in out.bits.iter_mut().zip(&self.bits) {
            *o &= !w;
        }
        out
    }

    /// Entrywise OR.
    pub fn or(&self, other: &BoolMatrix) -> Result<BoolMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(dims(
                "or",
                format!("{}x{}", self.rows, self.cols),
                format!("{}x{}", other.rows, other.cols),
            ));
        }
        let bits = self.bits.iter().zip(&other.bits).map(|(a, b)| a | b).collect();
        Ok(BoolMatrix { bits, ..*self })
    }
}

impl fmt::Debug for BoolMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BoolMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            for j in 0..self.cols {
                f.write_char(if self.get(i, j) { '1' } else { '0' })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

struct BitIter(u64);

impl Iterator for BitIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(b)
    }
}

/// A dense matrix of nonnegative integer counts.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CountMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl CountMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CountMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows<R: AsRef<[u32]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.as_ref().len(), cols, "ragged rows");
            data.extend_from_slice(r.as_ref());
        }
        CountMatrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn add_at(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] += v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.data
    }

    /// Entrywise sum. Panics on shape mismatch.
    pub fn add_assign(&mut self, other: &CountMatrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
    }

    pub fn transpose(&self) -> CountMatrix {
        let mut t = CountMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// 0-1 matrix of the nonzero entries.
    pub fn support(&self) -> BoolMatrix {
        BoolMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) != 0)
    }
}

/// A dense matrix over the reals extended with `+inf` and `-inf`.
///
/// `+inf` is the min-plus zero and `-inf` the max-plus zero. NaN entries are
/// rejected at construction.
#[derive(Clone, PartialEq, Debug)]
pub struct ExtMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl ExtMatrix {
    pub fn filled(rows: usize, cols: usize, value: f64) -> Self {
        assert!(!value.is_nan(), "NaN entry");
        ExtMatrix {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    /// 0 on the diagonal, `+inf` elsewhere.
    pub fn min_plus_identity(n: usize) -> Self {
        let mut m = Self::filled(n, n, f64::INFINITY);
        for i in 0..n {
            m.set(i, i, 0.0);
        }
        m
    }

    /// 0 on the diagonal, `-inf` elsewhere.
    pub fn max_plus_identity(n: usize) -> Self {
        let mut m = Self::filled(n, n, f64::NEG_INFINITY);
        for i in 0..n {
            m.set(i, i, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let v = f(i, j);
                if v.is_nan() {
                    return Err(Error::NaN { row: i, col: j });
                }
                data.push(v);
            }
        }
        Ok(ExtMatrix { rows, cols, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        if let Some(bad) = rows.iter().position(|r| r.as_ref().len() != cols) {
            return Err(dims(
                "from_rows",
                format!("{cols} columns"),
                format!("row {bad} ragged"),
            ));
        }
        Self::from_fn(rows.len(), cols, |i, j| rows[i].as_ref()[j])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(!v.is_nan());
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn transpose(&self) -> ExtMatrix {
        let mut t = ExtMatrix::filled(self.cols, self.rows, 0.0);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// Largest finite entry, if any.
    pub fn max_finite(&self) -> Option<f64> {
        self.data
            .iter()
            .copied()
            .filter(|v| v.is_finite())
            .fold(None, |acc, v| Some(acc.map_or(v, |a: f64| a.max(v))))
    }
}

/// Tropical `a + b` for the min-plus semiring: `+inf` absorbs, and the
/// undefined `+inf + -inf` resolves to the min-plus zero.
#[inline]
pub fn add_min(a: f64, b: f64) -> f64 {
    let s = a + b;
    if s.is_nan() {
        debug_assert!(false, "+inf + -inf in a min-plus product");
        f64::INFINITY
    } else {
        s
    }
}

/// Tropical `a + b` for the max-plus semiring; `+inf + -inf` resolves to `-inf`.
#[inline]
pub fn add_max(a: f64, b: f64) -> f64 {
    let s = a + b;
    if s.is_nan() {
        debug_assert!(false, "+inf + -inf in a max-plus product");
        f64::NEG_INFINITY
    } else {
        s
    }
}

fn check_inner(op: &'static str, a_cols: usize, b_rows: usize) -> Result<()> {
    if a_cols != b_rows {
        return Err(dims(op, format!("B with {a_cols} rows"), format!("{b_rows} rows")));
    }
    Ok(())
}

/// `C[i,j] = OR_k A[i,k] AND B[k,j]`.
pub fn bool_product(a: &BoolMatrix, b: &BoolMatrix) -> Result<BoolMatrix> {
    check_inner("bool_product", a.cols, b.rows)?;
    let mut c = BoolMatrix::zeros(a.rows, b.cols);
    let stride = c.stride;
    if stride == 0 {
        return Ok(c);
    }
    let row_kernel = |i: usize, out: &mut [u64]| {
        for k in a.row_ones(i) {
            for (o, w) in out.iter_mut().zip(b.row_words(k)) {
                *o |= w;
            }
        }
    };
    if a.rows * a.cols * stride >= PARALLEL_WORK {
        c.bits
            .par_chunks_mut(stride)
            .enumerate()
            .for_each(|(i, out)| row_kernel(i, out));
    } else {
        for (i, out) in c.bits.chunks_mut(stride).enumerate() {
            row_kernel(i, out);
        }
    }
    Ok(c)
}

/// `C[i,j] = |{k : A[i,k] = B[k,j] = 1}|`, one popcount per 64 inner indices.
pub fn count_product(a: &BoolMatrix, b: &BoolMatrix) -> Result<CountMatrix> {
    check_inner("count_product", a.cols, b.rows)?;
    count_product_nt(a, &b.transpose())
}

/// [`count_product`] with the right factor given transposed:
/// `C[i,j] = |{k : A[i,k] = 1 and Bt[j,k] = 1}|`.
pub fn count_product_nt(a: &BoolMatrix, bt: &BoolMatrix) -> Result<CountMatrix> {
    check_inner("count_product_nt", a.cols, bt.cols)?;
    let mut c = CountMatrix::zeros(a.rows, bt.rows);
    let cols = bt.rows;
    if cols == 0 {
        return Ok(c);
    }
    let row_kernel = |i: usize, out: &mut [u32]| {
        let ar = a.row_words(i);
        if ar.iter().all(|&w| w == 0) {
            return;
        }
        for (j, o) in out.iter_mut().enumerate() {
            *o = ar.iter().zip(bt.row_words(j)).map(|(x, y)| (x & y).count_ones()).sum();
        }
    };
    if a.rows * cols * a.stride.max(1) >= PARALLEL_WORK {
        c.data
            .par_chunks_mut(cols)
            .enumerate()
            .for_each(|(i, out)| row_kernel(i, out));
    } else {
        for (i, out) in c.data.chunks_mut(cols).enumerate() {
            row_kernel(i, out);
        }
    }
    Ok(c)
}

/// `C[i,j] = sum of values[i,k] over k with mask[k,j] = 1`, inner index
/// ascending. Only additions are performed.
pub fn masked_sum_product(values: &ExtMatrix, mask: &BoolMatrix) -> Result<ExtMatrix> {
    check_inner("masked_sum_product", values.cols, mask.rows)?;
    let mut c = ExtMatrix::filled(values.rows, mask.cols, 0.0);
    for i in 0..values.rows {
        let row = values.row(i);
        let out = &mut c.data[i * mask.cols..(i + 1) * mask.cols];
        for (k, &v) in row.iter().enumerate() {
            if v == 0.0 {
                continue;
            }
            for j in mask.row_ones(k) {
                out[j] += v;
            }
        }
    }
    Ok(c)
}

#[derive(Clone, Copy)]
enum Tropical {
    Min,
    Max,
}

impl Tropical {
    #[inline]
    fn zero(self) -> f64 {
        match self {
            Tropical::Min => f64::INFINITY,
            Tropical::Max => f64::NEG_INFINITY,
        }
    }

    #[inline]
    fn add(self, a: f64, b: f64) -> f64 {
        match self {
            Tropical::Min => add_min(a, b),
            Tropical::Max => add_max(a, b),
        }
    }

    #[inline]
    fn improves(self, candidate: f64, current: f64) -> bool {
        match self {
            Tropical::Min => candidate < current,
            Tropical::Max => candidate > current,
        }
    }
}

fn tropical_product(
    op: &'static str,
    semiring: Tropical,
    a: &ExtMatrix,
    b: &ExtMatrix,
    block: usize,
    argmax: Option<&mut Vec<u32>>,
) -> Result<ExtMatrix> {
    check_inner(op, a.cols, b.rows)?;
    if block == 0 {
        return Err(Error::InvalidArgument("block size must be positive".into()));
    }
    let (rows, inner, cols) = (a.rows, a.cols, b.cols);
    let zero = semiring.zero();
    let mut c = ExtMatrix::filled(rows, cols, zero);
    let mut arg = vec![0u32; if argmax.is_some() { rows * cols } else { 0 }];
    let track = argmax.is_some();
    if cols == 0 || rows == 0 {
        if let Some(out) = argmax {
            *out = arg;
        }
        return Ok(c);
    }

    let row_kernel = |i: usize, out: &mut [f64], out_arg: &mut [u32]| {
        let arow = a.row(i);
        for k0 in (0..inner).step_by(block) {
            let k1 = (k0 + block).min(inner);
            for j0 in (0..cols).step_by(block) {
                let j1 = (j0 + block).min(cols);
                for (k, &aik) in arow.iter().enumerate().take(k1).skip(k0) {
                    if aik == zero {
                        continue;
                    }
                    let brow = &b.row(k)[j0..j1];
                    for (jj, &bkj) in brow.iter().enumerate() {
                        let j = j0 + jj;
                        let s = semiring.add(aik, bkj);
                        if semiring.improves(s, out[j]) {
                            out[j] = s;
                            if track {
                                out_arg[j] = k as u32 + 1;
                            }
                        }
                    }
                }
            }
        }
    };

    let parallel = rows * inner * cols >= PARALLEL_WORK;
    if track {
        if parallel {
            c.data
                .par_chunks_mut(cols)
                .zip(arg.par_chunks_mut(cols))
                .enumerate()
                .for_each(|(i, (out, oa))| row_kernel(i, out, oa));
        } else {
            for (i, (out, oa)) in c.data.chunks_mut(cols).zip(arg.chunks_mut(cols)).enumerate() {
                row_kernel(i, out, oa);
            }
        }
    } else if parallel {
        c.data
            .par_chunks_mut(cols)
            .enumerate()
            .for_each(|(i, out)| row_kernel(i, out, &mut []));
    } else {
        for (i, out) in c.data.chunks_mut(cols).enumerate() {
            row_kernel(i, out, &mut []);
        }
    }
    if let Some(out) = argmax {
        *out = arg;
    }
    Ok(c)
}

/// Distance product `C[i,j] = min_k A[i,k] + B[k,j]`.
pub fn min_plus_product(a: &ExtMatrix, b: &ExtMatrix) -> Result<ExtMatrix> {
    min_plus_product_blocked(a, b, DEFAULT_BLOCK)
}

pub fn min_plus_product_blocked(a: &ExtMatrix, b: &ExtMatrix, block: usize) -> Result<ExtMatrix> {
    tropical_product("min_plus_product", Tropical::Min, a, b, block, None)
}

/// `C[i,j] = max_k A[i,k] + B[k,j]`, with `-inf` as the annihilating zero.
pub fn max_plus_product(a: &ExtMatrix, b: &ExtMatrix) -> Result<ExtMatrix> {
    max_plus_product_blocked(a, b, DEFAULT_BLOCK)
}

pub fn max_plus_product_blocked(a: &ExtMatrix, b: &ExtMatrix, block: usize) -> Result<ExtMatrix> {
    tropical_product("max_plus_product", Tropical::Max, a, b, block, None)
}

/// Max-plus product together with, for each entry, the smallest 1-based inner
/// index attaining the maximum (0 where the entry is `-inf`).
pub fn max_plus_product_with_argmax(a: &ExtMatrix, b: &ExtMatrix) -> Result<(ExtMatrix, Vec<u32>)> {
    let mut arg = Vec::new();
    let c = tropical_product("max_plus_product", Tropical::Max, a, b, DEFAULT_BLOCK, Some(&mut arg))?;
    Ok((c, arg))
}

fn fmt_entry(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{v}")
    }
}

/// Renders a matrix in the `m <rows> <cols>` text format.
pub fn format_matrix(m: &ExtMatrix) -> String {
    let mut s = format!("m {} {}\n", m.rows, m.cols);
    for i in 0..m.rows {
        let line: Vec<String> = m.row(i).iter().map(|&v| fmt_entry(v)).collect();
        s.push_str(&line.join(" "));
        s.push('\n');
    }
    s
}

/// Renders a count matrix in the same text format.
pub fn format_count_matrix(m: &CountMatrix) -> String {
    let mut s = format!("m {} {}\n", m.rows, m.cols);
    for i in 0..m.rows {
        let line: Vec<String> = m.row(i).iter().map(|v| v.to_string()).collect();
        s.push_str(&line.join(" "));
        s.push('\n');
    }
    s
}

/// Parses every matrix in `text`. `#` starts a comment; entries are
/// whitespace-separated and may span lines.
pub fn parse_matrices(text: &str) -> Result<Vec<ExtMatrix>, ParseError> {
    let mut tokens = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        for tok in line.split_whitespace() {
            tokens.push((ln + 1, tok));
        }
    }
    let mut out = Vec::new();
    let mut it = tokens.into_iter().peekable();
    while let Some((ln, tok)) = it.next() {
        if tok != "m" {
            return Err(ParseError::new(ln, ParseErrorKind::UnknownDirective(tok.into())));
        }
        let mut dim = || -> Result<usize, ParseError> {
            let (l, t) = it
                .next()
                .ok_or_else(|| ParseError::new(ln, ParseErrorKind::FieldCount("m <rows> <cols>".into())))?;
            t.parse()
                .map_err(|_| ParseError::new(l, ParseErrorKind::MalformedNumber(t.into())))
        };
        let rows = dim()?;
        let cols = dim()?;
        let mut data = Vec::with_capacity(rows * cols);
        for _ in 0..rows * cols {
            let (l, t) = it.next().ok_or_else(|| {
                ParseError::new(
                    ln,
                    ParseErrorKind::FieldCount(format!("expected {} entries", rows * cols)),
                )
            })?;
            let v: f64 = t
                .parse()
                .map_err(|_| ParseError::new(l, ParseErrorKind::MalformedNumber(t.into())))?;
            if v.is_nan() {
                return Err(ParseError::new(l, ParseErrorKind::MalformedNumber(t.into())));
            }
            data.push(v);
        }
        out.push(ExtMatrix { rows, cols, data });
    }
    Ok(out)
}
