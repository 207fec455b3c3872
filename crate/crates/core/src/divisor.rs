//! Divisor classes on the symmetric square of a genus-g curve.
//!
//! The Néron–Severi part is spanned by the fibre class `x` and half the
//! diagonal `δ/2`. Expressions keep a Pic⁰ part as formal combinations of
//! named points and the two trigonal pencils `D1`, `D2 = K - D1`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum DivisorError {
    #[error("genus mismatch: {0} vs {1}")]
    GenusMismatch(i64, i64),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// Algebraic class `a·x + b·(δ/2)` on the symmetric square of a genus-`genus` curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NSClass {
    pub genus: i64,
    pub a: i64,
    pub b: i64,
}

impl NSClass {
    pub fn new(genus: i64, a: i64, b: i64) -> NSClass {
        NSClass { genus, a, b }
    }

    pub fn x(genus: i64) -> NSClass {
        NSClass::new(genus, 1, 0)
    }

    pub fn half_delta(genus: i64) -> NSClass {
        NSClass::new(genus, 0, 1)
    }

    pub fn delta(genus: i64) -> NSClass {
        NSClass::new(genus, 0, 2)
    }

    pub fn zero(genus: i64) -> NSClass {
        NSClass::new(genus, 0, 0)
    }
}

impl Add for NSClass {
    type Output = NSClass;
    fn add(self, o: NSClass) -> NSClass {
        assert_eq!(self.genus, o.genus, "adding classes of different genus");
        NSClass::new(self.genus, self.a + o.a, self.b + o.b)
    }
}

impl Sub for NSClass {
    type Output = NSClass;
    fn sub(self, o: NSClass) -> NSClass {
        self + (-o)
    }
}

impl Neg for NSClass {
    type Output = NSClass;
    fn neg(self) -> NSClass {
        NSClass::new(self.genus, -self.a, -self.b)
    }
}

impl Mul<NSClass> for i64 {
    type Output = NSClass;
    fn mul(self, c: NSClass) -> NSClass {
        NSClass::new(c.genus, self * c.a, self * c.b)
    }
}

impl fmt::Display for NSClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        if self.a != 0 {
            terms.push((self.a, "x"));
        }
        if self.b != 0 {
            terms.push((self.b, "Delta/2"));
        }
        write_terms(f, terms.iter().map(|&(c, s)| (c, s.to_string())))
    }
}

/// The intersection pairing: `x² = 1`, `x·(δ/2) = 1`, `(δ/2)² = 1 - g`.
pub fn pairing(c1: NSClass, c2: NSClass) -> Result<i64, DivisorError> {
    if c1.genus != c2.genus {
        return Err(DivisorError::GenusMismatch(c1.genus, c2.genus));
    }
    let g = c1.genus;
    Ok(c1.a * c2.a + c1.a * c2.b + c1.b * c2.a + c1.b * c2.b * (1 - g))
}

/// Class of the trace curve of a pencil of degree `d`: `d·x - δ/2`.
pub fn trace_class(d: i64, genus: i64) -> NSClass {
    NSClass::new(genus, d, -1)
}

fn write_terms<I: Iterator<Item = (i64, String)>>(f: &mut fmt::Formatter<'_>, terms: I) -> fmt::Result {
    let mut first = true;
    for (c, name) in terms {
        if c == 0 {
            continue;
        }
        let mag = c.unsigned_abs();
        let body = if mag == 1 { name } else { format!("{mag}*{name}") };
        match (first, c < 0) {
            (true, false) => write!(f, "{body}")?,
            (true, true) => write!(f, "-{body}")?,
            (false, false) => write!(f, " + {body}")?,
            (false, true) => write!(f, " - {body}")?,
        }
        first = false;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

/// Integer combination of named points, `D1` and `K` (with `D2` rewritten as `K - D1`).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FormalDivisor {
    d1: i64,
    k: i64,
    points: BTreeMap<String, i64>,
}

impl FormalDivisor {
    pub fn zero() -> FormalDivisor {
        FormalDivisor::default()
    }

    pub fn point(name: &str) -> FormalDivisor {
        let mut d = FormalDivisor::zero();
        d.points.insert(name.to_string(), 1);
        d
    }

    pub fn d1() -> FormalDivisor {
        FormalDivisor { d1: 1, ..Default::default() }
    }

    pub fn d2() -> FormalDivisor {
        FormalDivisor { d1: -1, k: 1, ..Default::default() }
    }

    pub fn canonical() -> FormalDivisor {
        FormalDivisor { k: 1, ..Default::default() }
    }

    /// `D_i` for `i ∈ {1, 2}`.
    pub fn pencil(i: u8) -> FormalDivisor {
        match i {
            1 => FormalDivisor::d1(),
            2 => FormalDivisor::d2(),
            _ => panic!("pencil index must be 1 or 2"),
        }
    }

    pub fn degree(&self) -> i64 {
        3 * self.d1 + 6 * self.k + self.points.values().sum::<i64>()
    }

    pub fn is_zero(&self) -> bool {
        self.d1 == 0 && self.k == 0 && self.points.is_empty()
    }

    pub fn d1_coeff(&self) -> i64 {
        self.d1
    }

    pub fn k_coeff(&self) -> i64 {
        self.k
    }

    pub fn point_coeff(&self, name: &str) -> i64 {
        self.points.get(name).copied().unwrap_or(0)
    }

    pub fn scale(&self, c: i64) -> FormalDivisor {
        let mut r = FormalDivisor { d1: self.d1 * c, k: self.k * c, points: BTreeMap::new() };
        if c != 0 {
            for (n, &v) in &self.points {
                r.points.insert(n.clone(), v * c);
            }
        }
        r
    }
}

impl Add<&FormalDivisor> for &FormalDivisor {
    type Output = FormalDivisor;
    fn add(self, o: &FormalDivisor) -> FormalDivisor {
        let mut r = self.clone();
        r.d1 += o.d1;
        r.k += o.k;
        for (n, &v) in &o.points {
            let e = r.points.entry(n.clone()).or_insert(0);
            *e += v;
            if *e == 0 {
                r.points.remove(n);
            }
        }
        r
    }
}

impl Sub<&FormalDivisor> for &FormalDivisor {
    type Output = FormalDivisor;
    fn sub(self, o: &FormalDivisor) -> FormalDivisor {
        self + &o.scale(-1)
    }
}

impl fmt::Display for FormalDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head = [(self.d1, "D1".to_string()), (self.k, "K".to_string())];
        let pts = self.points.iter().map(|(n, &c)| (c, n.clone()));
        write_terms(f, head.into_iter().chain(pts))
    }
}

/// A divisor expression on the symmetric square, over the generators
/// `S_A` (linear in `A`, with `S_p = X_p`), `Δ/2` and `Trace(A)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sym2Expr {
    s_part: FormalDivisor,
    half_delta: i64,
    traces: BTreeMap<FormalDivisor, i64>,
}

impl Sym2Expr {
    pub fn zero() -> Sym2Expr {
        Sym2Expr::default()
    }

    /// `X_p`, the fibre over a point.
    pub fn x(p: &str) -> Sym2Expr {
        Sym2Expr::s(FormalDivisor::point(p))
    }

    pub fn s(a: FormalDivisor) -> Sym2Expr {
        Sym2Expr { s_part: a, ..Default::default() }
    }

    pub fn half_delta() -> Sym2Expr {
        Sym2Expr { half_delta: 1, ..Default::default() }
    }

    pub fn trace(a: FormalDivisor) -> Sym2Expr {
        let mut e = Sym2Expr::zero();
        e.traces.insert(a, 1);
        e
    }

    pub fn s_part(&self) -> &FormalDivisor {
        &self.s_part
    }

    pub fn half_delta_coeff(&self) -> i64 {
        self.half_delta
    }

    pub fn traces(&self) -> impl Iterator<Item = (&FormalDivisor, i64)> {
        self.traces.iter().map(|(a, &c)| (a, c))
    }

    pub fn scale(&self, c: i64) -> Sym2Expr {
        let mut traces = BTreeMap::new();
        if c != 0 {
            for (a, &v) in &self.traces {
                traces.insert(a.clone(), v * c);
            }
        }
        Sym2Expr { s_part: self.s_part.scale(c), half_delta: self.half_delta * c, traces }
    }

    pub fn is_reduced(&self) -> bool {
        self.traces.is_empty()
    }

    /// Rewrite every `Trace(A)` as `S_A - Δ/2`.
    pub fn reduce(&self) -> Sym2Expr {
        let mut r = Sym2Expr { s_part: self.s_part.clone(), half_delta: self.half_delta, traces: BTreeMap::new() };
        for (a, &n) in &self.traces {
            r.s_part = &r.s_part + &a.scale(n);
            r.half_delta -= n;
        }
        r
    }

    /// Reduce only the trace generator for `a` (used to check confluence).
    pub fn reduce_one(&self, a: &FormalDivisor) -> Sym2Expr {
        let mut r = self.clone();
        if let Some(n) = r.traces.remove(a) {
            r.s_part = &r.s_part + &a.scale(n);
            r.half_delta -= n;
        }
        r
    }

    /// Algebraic class: `S_A -> deg(A)·x`, `Δ/2 -> δ/2`, `Trace(A) -> deg(A)·x - δ/2`.
    pub fn ns_class(&self, genus: i64) -> NSClass {
        let mut c = NSClass::new(genus, self.s_part.degree(), self.half_delta);
        for (a, &n) in &self.traces {
            c = c + n * trace_class(a.degree(), genus);
        }
        c
    }

    pub fn is_zero(&self) -> bool {
        self.s_part.is_zero() && self.half_delta == 0 && self.traces.is_empty()
    }
}

impl Add<&Sym2Expr> for &Sym2Expr {
    type Output = Sym2Expr;
    fn add(self, o: &Sym2Expr) -> Sym2Expr {
        let mut traces = self.traces.clone();
        for (a, &v) in &o.traces {
            let e = traces.entry(a.clone()).or_insert(0);
            *e += v;
            if *e == 0 {
                traces.remove(a);
            }
        }
        Sym2Expr { s_part: &self.s_part + &o.s_part, half_delta: self.half_delta + o.half_delta, traces }
    }
}

impl Sub<&Sym2Expr> for &Sym2Expr {
    type Output = Sym2Expr;
    fn sub(self, o: &Sym2Expr) -> Sym2Expr {
        self + &o.scale(-1)
    }
}

impl fmt::Display for Sym2Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(i64, String)> = Vec::new();
        if !self.s_part.is_zero() {
            terms.push((1, format!("S({})", self.s_part)));
        }
        for (a, &n) in &self.traces {
            terms.push((n, format!("Trace({a})")));
        }
        terms.push((self.half_delta, "Delta/2".to_string()));
        write_terms(f, terms.into_iter())
    }
}

/// Linear equivalence: the reduced difference vanishes formally.
pub fn lin_equiv(e1: &Sym2Expr, e2: &Sym2Expr) -> bool {
    (e1 - e2).reduce().is_zero()
}

/// Pullback along `j_p : C -> Sym²C, q -> p + q`.
pub fn j_pullback(e: &Sym2Expr, p: &str) -> FormalDivisor {
    let pt = FormalDivisor::point(p);
    let mut r = &e.s_part + &pt.scale(e.half_delta);
    for (a, &n) in &e.traces {
        r = &r + &(a - &pt).scale(n);
    }
    r
}

/// Pullback of `Δ/2` along `γ_i`: `3·D_i - D_{3-i}`.
///
/// Not quoted anywhere; it is forced by requiring that `γ_i` misses the other
/// glued curve (`γ_i^*(C_{3-i}) = 0`), and then `γ_i^*(C_i) = D_{3-i} - D_i`.
pub fn gamma_half_delta(i: u8) -> FormalDivisor {
    let di = FormalDivisor::pencil(i);
    let dj = FormalDivisor::pencil(3 - i);
    &di.scale(3) - &dj
}

/// Pullback along `γ_i : C -> Sym²C`, `p -> |D_i - p|`.
pub fn gamma_pullback(e: &Sym2Expr, i: u8) -> FormalDivisor {
    let e = e.reduce();
    let di = FormalDivisor::pencil(i);
    let s = &di.scale(e.s_part.degree()) - &e.s_part;
    &s + &gamma_half_delta(i).scale(e.half_delta)
}

/// A command on the expression grammar.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Query {
    Reduce(Sym2Expr),
    Equiv(Sym2Expr, Sym2Expr),
    JPull(Sym2Expr, String),
    GPull(Sym2Expr, u8),
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

const RESERVED: [&str; 8] = ["X", "S", "Trace", "Delta", "D1", "D2", "K", "jpull"];

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, DivisorError> {
        Err(DivisorError::Parse { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.src[self.pos..].chars().next().unwrap().len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), DivisorError> {
        if self.eat(s) {
            Ok(())
        } else {
            self.err(format!("expected {s:?}"))
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.src.len()
    }

    fn ident(&mut self) -> Result<String, DivisorError> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest
            .char_indices()
            .take_while(|&(i, c)| c == '_' || c.is_ascii_alphabetic() || (i > 0 && c.is_ascii_digit()))
            .count();
        if len == 0 {
            return self.err("expected identifier");
        }
        let id = rest[..len].to_string();
        self.pos += len;
        Ok(id)
    }

    fn point_name(&mut self) -> Result<String, DivisorError> {
        let id = self.ident()?;
        if RESERVED.contains(&id.as_str()) || id == "gpull" {
            return self.err(format!("{id} is not a point name"));
        }
        Ok(id)
    }

    fn integer(&mut self) -> Option<i64> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest.chars().take_while(|c| c.is_ascii_digit()).count();
        if len == 0 {
            return None;
        }
        self.pos += len;
        rest[..len].parse().ok()
    }

    /// Optional sign handling shared by both sum grammars.
    fn sum<T, F>(&mut self, mut term: F, add: fn(&T, &T, i64) -> T, zero: T) -> Result<T, DivisorError>
    where
        F: FnMut(&mut Self) -> Result<T, DivisorError>,
    {
        let mut acc = zero;
        let mut sign = if self.eat("-") {
            -1
        } else {
            self.eat("+");
            1
        };
        loop {
            let coeff = match self.integer() {
                Some(n) => {
                    let starred = self.eat("*");
                    if n == 0 && !starred && !self.peek().is_some_and(|c| c.is_ascii_alphabetic()) {
                        // a bare zero, as printed for the empty combination
                        None
                    } else {
                        Some(n)
                    }
                }
                None => Some(1),
            };
            if let Some(coeff) = coeff {
                let t = term(self)?;
                acc = add(&acc, &t, sign * coeff);
            }
            if self.eat("+") {
                sign = 1;
            } else if self.eat("-") {
                sign = -1;
            } else {
                return Ok(acc);
            }
        }
    }

    fn divisor(&mut self) -> Result<FormalDivisor, DivisorError> {
        self.sum(
            |p| {
                let id = p.ident()?;
                Ok(match id.as_str() {
                    "D1" => FormalDivisor::d1(),
                    "D2" => FormalDivisor::d2(),
                    "K" => FormalDivisor::canonical(),
                    _ if RESERVED.contains(&id.as_str()) || id == "gpull" => {
                        return p.err(format!("{id} is not a point name"))
                    }
                    _ => FormalDivisor::point(&id),
                })
            },
            |a, b, c| a + &b.scale(c),
            FormalDivisor::zero(),
        )
    }

    fn expr(&mut self) -> Result<Sym2Expr, DivisorError> {
        self.sum(Self::atom, |a, b, c| a + &b.scale(c), Sym2Expr::zero())
    }

    fn atom(&mut self) -> Result<Sym2Expr, DivisorError> {
        let id = self.ident()?;
        match id.as_str() {
            "X" => {
                self.expect("[")?;
                let name = self.point_name()?;
                self.expect("]")?;
                Ok(Sym2Expr::x(&name))
            }
            "Delta" => {
                if self.eat("/") {
                    self.expect("2")?;
                    Ok(Sym2Expr::half_delta())
                } else {
                    Ok(Sym2Expr::half_delta().scale(2))
                }
            }
            "Trace" | "S" => {
                self.expect("(")?;
                let a = self.divisor()?;
                self.expect(")")?;
                Ok(if id == "Trace" { Sym2Expr::trace(a) } else { Sym2Expr::s(a) })
            }
            _ => self.err(format!("unknown generator {id}")),
        }
    }

    fn query(&mut self) -> Result<Query, DivisorError> {
        let save = self.pos;
        if let Ok(head) = self.ident() {
            if (head == "jpull" || head == "gpull") && self.eat("(") {
                let e = self.expr()?;
                self.expect(",")?;
                let q = if head == "jpull" {
                    Query::JPull(e, self.point_name()?)
                } else {
                    match self.integer() {
                        Some(i @ 1..=2) => Query::GPull(e, i as u8),
                        _ => return self.err("gpull index must be 1 or 2"),
                    }
                };
                self.expect(")")?;
                return Ok(q);
            }
        }
        self.pos = save;
        let e1 = self.expr()?;
        if self.eat("~") {
            let e2 = self.expr()?;
            Ok(Query::Equiv(e1, e2))
        } else {
            Ok(Query::Reduce(e1))
        }
    }
}

fn finish<T>(mut p: Parser<'_>, v: T) -> Result<T, DivisorError> {
    if p.at_end() {
        Ok(v)
    } else {
        let c = p.peek().unwrap();
        p.err(format!("unexpected {c:?}"))
    }
}

pub fn parse_expr(s: &str) -> Result<Sym2Expr, DivisorError> {
    let mut p = Parser::new(s);
    let e = p.expr()?;
    finish(p, e)
}

pub fn parse_divisor(s: &str) -> Result<FormalDivisor, DivisorError> {
    let mut p = Parser::new(s);
    let d = p.divisor()?;
    finish(p, d)
}

/// Parse `e`, `e1 ~ e2`, `jpull(e, p)` or `gpull(e, i)`.
pub fn parse_query(s: &str) -> Result<Query, DivisorError> {
    let mut p = Parser::new(s);
    let q = p.query()?;
    finish(p, q)
}
