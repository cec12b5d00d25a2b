//! Buyer-seller markets: transaction matrices and stable matchings.
//!
//! Buyers and sellers are indexed `0..n` in the API and `1..=n` in the text
//! format. Buyer `i` and seller `j` can trade item `l` when `i` wants it,
//! `j` holds it and `i`'s maximum price is at least `j`'s reserve.
//!
//! ```
//! use hsub::market::{parse_market, stable_matching, transaction_matrices, PreferenceSpec};
//!
//! let inst = parse_market("market 2 2\nb 1 2:1\nb 2 1:1 2:1\ns 1 1:1\ns 2 1:1 2:1\n").unwrap();
//! let tm = transaction_matrices(&inst).unwrap();
//! assert_eq!(tm.count.row(0), &[0, 1]);
//! assert_eq!(tm.count.row(1), &[1, 2]);
//! let m = stable_matching(&tm, &PreferenceSpec::count(2)).unwrap();
//! assert_eq!(m.seller_of(1), 1);
//! assert_eq!(tm.count.get(0, m.seller_of(0)), 0);
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::dominance::{dominance_matrix, weighted_dominance, DominanceParams, PointSet};
use crate::error::{Error, ParseError, ParseErrorKind, Result};
use crate::extmat::{CountMatrix, ExtMatrix};

/// Items a buyer wants with maximum prices, or a seller holds with reserves.
/// Items are `1..=k`.
pub type Offer = BTreeMap<usize, f64>;

#[derive(Clone, Debug, PartialEq)]
pub struct MarketInstance {
    k: usize,
    buyers: Vec<Offer>,
    sellers: Vec<Offer>,
}

impl MarketInstance {
    pub fn new(k: usize, buyers: Vec<Offer>, sellers: Vec<Offer>) -> Result<Self> {
        if buyers.len() != sellers.len() {
            return Err(Error::InvalidArgument(format!(
                "{} buyers but {} sellers",
                buyers.len(),
                sellers.len()
            )));
        }
        for offer in buyers.iter().chain(&sellers) {
            for (&item, &price) in offer {
                if item == 0 || item > k {
                    return Err(Error::InvalidArgument(format!("item {item} outside 1..={k}")));
                }
                if !(price > 0.0 && price.is_finite()) {
                    return Err(Error::InvalidArgument(format!("price {price} is not positive")));
                }
            }
        }
        Ok(MarketInstance { k, buyers, sellers })
    }

    pub fn n(&self) -> usize {
        self.buyers.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn buyer(&self, i: usize) -> &Offer {
        &self.buyers[i]
    }

    pub fn seller(&self, j: usize) -> &Offer {
        &self.sellers[j]
    }

    /// Scales every price and reserve by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        let sc = |o: &Offer| o.iter().map(|(&l, &p)| (l, p * c)).collect();
        MarketInstance::new(
            self.k,
            self.buyers.iter().map(sc).collect(),
            self.sellers.iter().map(sc).collect(),
        )
    }

    /// A random instance: each buyer wants and each seller holds each item
    /// with probability `density`, at integer prices in `1..=max_price`.
    pub fn random<R: rand::Rng + ?Sized>(n: usize, k: usize, density: f64, max_price: u32, rng: &mut R) -> Self {
        let offer = |rng: &mut R| -> Offer {
            let mut o = Offer::new();
            for l in 1..=k {
                if rng.random_bool(density) {
                    o.insert(l, rng.random_range(1..=max_price) as f64);
                }
            }
            o
        };
        let buyers = (0..n).map(|_| offer(rng)).collect();
        let sellers = (0..n).map(|_| offer(rng)).collect();
        MarketInstance::new(k, buyers, sellers).expect("generated instance is valid")
    }
}

/// Parses `market <n> <k>`, then `b <i> <item>:<max price> ...` and
/// `s <j> <item>:<reserve> ...` lines. Buyers or sellers without a line
/// want or hold nothing. `#` starts a comment.
pub fn parse_market(text: &str) -> Result<MarketInstance, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut buyers: Vec<Option<Offer>> = Vec::new();
    let mut sellers: Vec<Option<Offer>> = Vec::new();
    let mut last = 0;
    for (idx, raw) in text.lines().enumerate() {
        let ln = idx + 1;
        last = ln;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |kind| ParseError::new(ln, kind);
        let int = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| err(ParseErrorKind::MalformedNumber(s.into())))
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields[0] {
            "market" => {
                if header.is_some() {
                    return Err(err(ParseErrorKind::DuplicateHeader));
                }
                if fields.len() != 3 {
                    return Err(err(ParseErrorKind::FieldCount("market <n> <k>".into())));
                }
                let (n, k) = (int(fields[1])?, int(fields[2])?);
                header = Some((n, k));
                buyers = vec![None; n];
                sellers = vec![None; n];
            }
            tag @ ("b" | "s") => {
                let (n, k) = header.ok_or_else(|| err(ParseErrorKind::MissingHeader))?;
                if fields.len() < 2 {
                    return Err(err(ParseErrorKind::FieldCount(format!(
                        "{tag} <index> <item>:<price>..."
                    ))));
                }
                let who = int(fields[1])?;
                if who == 0 || who > n {
                    return Err(err(ParseErrorKind::Invalid(format!(
                        "{tag} index {who} outside 1..={n}"
                    ))));
                }
                let mut offer = Offer::new();
                for f in &fields[2..] {
                    let (item, price) = f
                        .split_once(':')
                        .ok_or_else(|| err(ParseErrorKind::Invalid(format!("expected item:price, got `{f}`"))))?;
                    let item = int(item)?;
                    let price: f64 = price
                        .parse()
                        .map_err(|_| err(ParseErrorKind::MalformedNumber(price.into())))?;
                    if item == 0 || item > k {
                        return Err(err(ParseErrorKind::Invalid(format!("item {item} outside 1..={k}"))));
                    }
                    if !(price > 0.0 && price.is_finite()) {
                        return Err(err(ParseErrorKind::Invalid(format!("price {price} is not positive"))));
                    }
                    if offer.insert(item, price).is_some() {
                        return Err(err(ParseErrorKind::Invalid(format!("item {item} listed twice"))));
                    }
                }
                let slot = if tag == "b" {
                    &mut buyers[who - 1]
                } else {
                    &mut sellers[who - 1]
                };
                if slot.is_some() {
                    return Err(err(ParseErrorKind::Invalid(format!("{tag} {who} given twice"))));
                }
                *slot = Some(offer);
            }
            other => return Err(err(ParseErrorKind::UnknownDirective(other.into()))),
        }
    }
    let (_, k) = header.ok_or_else(|| ParseError::new(last.max(1), ParseErrorKind::MissingHeader))?;
    let fill = |v: Vec<Option<Offer>>| v.into_iter().map(Option::unwrap_or_default).collect();
    Ok(MarketInstance::new(k, fill(buyers), fill(sellers)).expect("validated while parsing"))
}

/// Canonical text form accepted by [`parse_market`].
pub fn serialize_market(inst: &MarketInstance) -> String {
    let mut out = format!("market {} {}\n", inst.n(), inst.k());
    for (tag, side) in [("b", &inst.buyers), ("s", &inst.sellers)] {
        for (i, offer) in side.iter().enumerate() {
            let _ = write!(out, "{tag} {}", i + 1);
            for (l, p) in offer {
                let _ = write!(out, " {l}:{p:?}");
            }
            out.push('\n');
        }
    }
    out
}

/// `count[i,j]` items trade between buyer `i` and seller `j`, for a total
/// maximum price `price[i,j]` and total reserve `reserve[i,j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransactionMatrices {
    pub count: CountMatrix,
    pub price: ExtMatrix,
    pub reserve: ExtMatrix,
}

impl TransactionMatrices {
    pub fn n(&self) -> usize {
        self.count.rows()
    }

    /// `(price, reserve, count)` for buyer `i` and seller `j`.
    pub fn entry(&self, i: usize, j: usize) -> (f64, f64, u32) {
        (self.price.get(i, j), self.reserve.get(i, j), self.count.get(i, j))
    }
}

/// Transaction matrices from dominance counts.
///
/// Buyer `i` becomes the point with coordinate `l` equal to its maximum
/// price for `l` (`-inf` if unwanted) and seller `j` the point with its
/// reserve (`+inf` if not held), so seller `j` is dominated by buyer `i`
/// on exactly the tradeable items. Reserve sums come from a weighted count
/// over the seller points, price sums from the same count with both
/// families negated and the buyers in front.
pub fn transaction_matrices(inst: &MarketInstance) -> Result<TransactionMatrices> {
    transaction_matrices_with(inst, &DominanceParams::default())
}

pub fn transaction_matrices_with(inst: &MarketInstance, params: &DominanceParams) -> Result<TransactionMatrices> {
    let (n, k) = (inst.n(), inst.k());
    let table = |side: &[Offer], absent: f64, sign: f64| -> Vec<f64> {
        let mut out = vec![absent; n * k];
        for (i, offer) in side.iter().enumerate() {
            for (&l, &p) in offer {
                out[i * k + l - 1] = sign * p;
            }
        }
        out
    };
    let payload = |side: &[Offer]| ExtMatrix::from_fn(n, k, |i, l| side[i].get(&(l + 1)).copied().unwrap_or(0.0));
    let beta = PointSet::new(n, k, table(&inst.buyers, f64::NEG_INFINITY, 1.0))?;
    let sigma = PointSet::new(n, k, table(&inst.sellers, f64::INFINITY, 1.0))?;
    let count = dominance_matrix(&sigma, &beta, params)?.transpose();
    let reserve = weighted_dominance(&sigma, &beta, &payload(&inst.sellers)?, params)?.transpose();
    let neg_beta = PointSet::new(n, k, table(&inst.buyers, f64::INFINITY, -1.0))?;
    let neg_sigma = PointSet::new(n, k, table(&inst.sellers, f64::NEG_INFINITY, -1.0))?;
    let price = weighted_dominance(&neg_beta, &neg_sigma, &payload(&inst.buyers)?, params)?;
    Ok(TransactionMatrices { count, price, reserve })
}

/// A preference function of `(P, R, |C|)`. Larger is better.
#[derive(Clone, Debug, PartialEq)]
pub enum Preference {
    /// `|C|`
    Count,
    /// `P - R`
    Surplus,
    /// `P`
    Price,
    Expr(Expr),
}

impl Preference {
    pub fn eval(&self, p: f64, r: f64, c: u32) -> f64 {
        match self {
            Preference::Count => c as f64,
            Preference::Surplus => p - r,
            Preference::Price => p,
            Preference::Expr(e) => e.eval(p, r, c),
        }
    }

    /// `count`, `surplus`, `price` or `expr:<expression>`.
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "count" => Ok(Preference::Count),
            "surplus" => Ok(Preference::Surplus),
            "price" => Ok(Preference::Price),
            _ => match s.strip_prefix("expr:") {
                Some(e) => Ok(Preference::Expr(Expr::parse(e)?)),
                None => Err(Error::InvalidArgument(format!("unknown preference `{s}`"))),
            },
        }
    }
}

/// Expressions over `P`, `R` and `C` (also written `|C|`) with numbers,
/// unary minus, `+`, `-`, parentheses and the comparisons `< <= > >= == !=`,
/// which yield 1 or 0. Comparisons bind loosest and do not chain.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    P,
    R,
    C,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Cmp(Box<Expr>, CmpOp, Box<Expr>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmpOp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

impl Expr {
    pub fn eval(&self, p: f64, r: f64, c: u32) -> f64 {
        match self {
            Expr::Num(x) => *x,
            Expr::P => p,
            Expr::R => r,
            Expr::C => c as f64,
            Expr::Neg(a) => -a.eval(p, r, c),
            Expr::Add(a, b) => a.eval(p, r, c) + b.eval(p, r, c),
            Expr::Sub(a, b) => a.eval(p, r, c) - b.eval(p, r, c),
            Expr::Cmp(a, op, b) => {
                let (x, y) = (a.eval(p, r, c), b.eval(p, r, c));
                let hit = match op {
                    CmpOp::Lt => x < y,
                    CmpOp::Le => x <= y,
                    CmpOp::Gt => x > y,
                    CmpOp::Ge => x >= y,
                    CmpOp::Eq => x == y,
                    CmpOp::Ne => x != y,
                };
                if hit {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    pub fn parse(src: &str) -> Result<Expr> {
        let toks = tokenize(src)?;
        let mut p = ExprParser { toks: &toks, pos: 0 };
        let e = p.comparison()?;
        if p.pos != toks.len() {
            return Err(Error::InvalidArgument(format!(
                "unexpected `{:?}` in `{src}`",
                toks[p.pos]
            )));
        }
        Ok(e)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Var(char),
    Plus,
    Minus,
    Open,
    Close,
    Cmp(CmpOp),
}

fn tokenize(src: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let bad = |what: String| Error::InvalidArgument(what);
    while i < chars.len() {
        let ch = chars[i];
        let next = chars.get(i + 1).copied();
        match ch {
            ' ' | '\t' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1;
            }
            '(' => {
                out.push(Tok::Open);
                i += 1;
            }
            ')' => {
                out.push(Tok::Close);
                i += 1;
            }
            'P' | 'R' | 'C' => {
                out.push(Tok::Var(ch));
                i += 1;
            }
            '|' => {
                if chars.get(i + 1) == Some(&'C') && chars.get(i + 2) == Some(&'|') {
                    out.push(Tok::Var('C'));
                    i += 3;
                } else {
                    return Err(bad(format!("expected `|C|` at offset {i} in `{src}`")));
                }
            }
            '<' | '>' | '=' | '!' => {
                let eq = next == Some('=');
                let op = match (ch, eq) {
                    ('<', false) => CmpOp::Lt,
                    ('<', true) => CmpOp::Le,
                    ('>', false) => CmpOp::Gt,
                    ('>', true) => CmpOp::Ge,
                    ('=', true) => CmpOp::Eq,
                    ('!', true) => CmpOp::Ne,
                    _ => return Err(bad(format!("bad operator at offset {i} in `{src}`"))),
                };
                out.push(Tok::Cmp(op));
                i += if eq { 2 } else { 1 };
            }
            c if c.is_ascii_digit() || c == '.' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let v = text.parse().map_err(|_| bad(format!("malformed number `{text}`")))?;
                out.push(Tok::Num(v));
            }
            other => return Err(bad(format!("unexpected `{other}` in `{src}`"))),
        }
    }
    Ok(out)
}

struct ExprParser<'a> {
    toks: &'a [Tok],
    pos: usize,
}

impl ExprParser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn comparison(&mut self) -> Result<Expr> {
        let lhs = self.sum()?;
        if let Some(Tok::Cmp(op)) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.sum()?;
            return Ok(Expr::Cmp(Box::new(lhs), op, Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = Expr::Add(Box::new(acc), Box::new(self.unary()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = Expr::Sub(Box::new(acc), Box::new(self.unary()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        let tok = self.peek().cloned();
        self.pos += 1;
        match tok {
            Some(Tok::Minus) => Ok(Expr::Neg(Box::new(self.unary()?))),
            Some(Tok::Num(v)) => Ok(Expr::Num(v)),
            Some(Tok::Var('P')) => Ok(Expr::P),
            Some(Tok::Var('R')) => Ok(Expr::R),
            Some(Tok::Var(_)) => Ok(Expr::C),
            Some(Tok::Open) => {
                let e = self.comparison()?;
                if self.peek() != Some(&Tok::Close) {
                    return Err(Error::InvalidArgument("missing `)`".into()));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(t) => Err(Error::InvalidArgument(format!("unexpected `{t:?}`"))),
            None => Err(Error::InvalidArgument("expression ends early".into())),
        }
    }
}

/// Preference functions for every buyer and seller.
#[derive(Clone, Debug, PartialEq)]
pub struct PreferenceSpec {
    pub buyers: Vec<Preference>,
    pub sellers: Vec<Preference>,
}

impl PreferenceSpec {
    /// Everyone uses `pref`.
    pub fn uniform(n: usize, pref: Preference) -> Self {
        PreferenceSpec {
            buyers: vec![pref.clone(); n],
            sellers: vec![pref; n],
        }
    }

    pub fn count(n: usize) -> Self {
        Self::uniform(n, Preference::Count)
    }

    pub fn surplus(n: usize) -> Self {
        Self::uniform(n, Preference::Surplus)
    }

    fn buyer_score(&self, tm: &TransactionMatrices, i: usize, j: usize) -> f64 {
        let (p, r, c) = tm.entry(i, j);
        self.buyers[i].eval(p, r, c)
    }

    fn seller_score(&self, tm: &TransactionMatrices, i: usize, j: usize) -> f64 {
        let (p, r, c) = tm.entry(i, j);
        self.sellers[j].eval(p, r, c)
    }

    /// True if buyer `i` ranks seller `a` above seller `b` (ties go to the
    /// smaller index).
    pub fn buyer_prefers(&self, tm: &TransactionMatrices, i: usize, a: usize, b: usize) -> bool {
        let (x, y) = (self.buyer_score(tm, i, a), self.buyer_score(tm, i, b));
        x > y || (x == y && a < b)
    }

    /// True if seller `j` ranks buyer `a` above buyer `b`.
    pub fn seller_prefers(&self, tm: &TransactionMatrices, j: usize, a: usize, b: usize) -> bool {
        let (x, y) = (self.seller_score(tm, a, j), self.seller_score(tm, b, j));
        x > y || (x == y && a < b)
    }
}

/// A perfect matching; `seller_of(i)` is buyer `i`'s partner.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    seller: Vec<usize>,
}

impl Matching {
    pub fn from_sellers(seller: Vec<usize>) -> Self {
        Matching { seller }
    }

    pub fn seller_of(&self, i: usize) -> usize {
        self.seller[i]
    }

    pub fn buyer_of(&self, j: usize) -> usize {
        self.seller.iter().position(|&s| s == j).expect("perfect matching")
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.seller.iter().copied().enumerate()
    }
}

/// Buyer-proposing deferred acceptance over the preferences evaluated on
/// the transaction matrices. Free buyers propose in ascending index order.
pub fn stable_matching(tm: &TransactionMatrices, prefs: &PreferenceSpec) -> Result<Matching> {
    let n = tm.n();
    if prefs.buyers.len() != n || prefs.sellers.len() != n {
        return Err(Error::InvalidArgument(format!("preferences for {n} agents expected")));
    }
    let lists: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            let score: Vec<f64> = (0..n).map(|j| prefs.buyer_score(tm, i, j)).collect();
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| score[b].total_cmp(&score[a]).then(a.cmp(&b)));
            order
        })
        .collect();
    let mut next = vec![0usize; n];
    let mut held: Vec<Option<usize>> = vec![None; n];
    let mut free: Vec<usize> = (0..n).rev().collect();
    while let Some(i) = free.pop() {
        let j = lists[i][next[i]];
        next[i] += 1;
        match held[j] {
            None => held[j] = Some(i),
            Some(cur) if prefs.seller_prefers(tm, j, i, cur) => {
                held[j] = Some(i);
                free.push(cur);
            }
            Some(_) => free.push(i),
        }
    }
    let mut seller = vec![0; n];
    for (j, h) in held.iter().enumerate() {
        seller[h.expect("every seller is held")] = j;
    }
    Ok(Matching { seller })
}

/// Pairs `(i, j)` not matched together where both strictly prefer each
/// other, by raw preference values, to their partners.
pub fn blocking_pairs(tm: &TransactionMatrices, prefs: &PreferenceSpec, m: &Matching) -> Vec<(usize, usize)> {
    let n = tm.n();
    let mut out = Vec::new();
    for i in 0..n {
        let mine = m.seller_of(i);
        for j in 0..n {
            if j == mine {
                continue;
            }
            let theirs = m.buyer_of(j);
            if prefs.buyer_score(tm, i, j) > prefs.buyer_score(tm, i, mine)
                && prefs.seller_score(tm, i, j) > prefs.seller_score(tm, theirs, j)
            {
                out.push((i, j));
            }
        }
    }
    out
}
