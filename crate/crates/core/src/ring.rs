//! The truncated ring `Q[ξ, η] / (ξ^{g+1}, η²)` modelling the cohomology of a
//! P¹-bundle over a g-dimensional principally polarised base.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum RingError {
    #[error("genus mismatch: {0} vs {1}")]
    GenusMismatch(usize, usize),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn factorial(n: usize) -> BigRational {
    (1..=n as i64).fold(rat(1), |acc, k| acc * rat(k))
}

/// `Σ c[i][j] ξ^i η^j`, `0 ≤ i ≤ g`, `j ∈ {0, 1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedClass {
    genus: usize,
    coeffs: Vec<[BigRational; 2]>,
}

impl GradedClass {
    pub fn zero(genus: usize) -> GradedClass {
        GradedClass { genus, coeffs: vec![[rat(0), rat(0)]; genus + 1] }
    }

    pub fn constant(genus: usize, c: BigRational) -> GradedClass {
        let mut r = GradedClass::zero(genus);
        r.coeffs[0][0] = c;
        r
    }

    pub fn one(genus: usize) -> GradedClass {
        GradedClass::constant(genus, rat(1))
    }

    /// `c · ξ^i η^j` (zero if truncated away).
    pub fn monomial(genus: usize, c: BigRational, i: usize, j: usize) -> GradedClass {
        let mut r = GradedClass::zero(genus);
        if i <= genus && j <= 1 {
            r.coeffs[i][j] = c;
        }
        r
    }

    pub fn xi(genus: usize) -> GradedClass {
        GradedClass::monomial(genus, rat(1), 1, 0)
    }

    pub fn eta(genus: usize) -> GradedClass {
        GradedClass::monomial(genus, rat(1), 0, 1)
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn coeff(&self, i: usize, j: usize) -> BigRational {
        if i <= self.genus && j <= 1 {
            self.coeffs[i][j].clone()
        } else {
            rat(0)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c[0].is_zero() && c[1].is_zero())
    }

    fn check(&self, o: &GradedClass) -> Result<(), RingError> {
        if self.genus != o.genus {
            return Err(RingError::GenusMismatch(self.genus, o.genus));
        }
        Ok(())
    }

    pub fn add(&self, o: &GradedClass) -> Result<GradedClass, RingError> {
        self.check(o)?;
        let mut r = self.clone();
        for (a, b) in r.coeffs.iter_mut().zip(&o.coeffs) {
            a[0] += &b[0];
            a[1] += &b[1];
        }
        Ok(r)
    }

    pub fn sub(&self, o: &GradedClass) -> Result<GradedClass, RingError> {
        self.add(&o.scale(&rat(-1)))
    }

    pub fn scale(&self, c: &BigRational) -> GradedClass {
        let mut r = self.clone();
        for a in r.coeffs.iter_mut() {
            a[0] *= c;
            a[1] *= c;
        }
        r
    }

    /// Truncated product.
    pub fn mul(&self, o: &GradedClass) -> Result<GradedClass, RingError> {
        self.check(o)?;
        let g = self.genus;
        let mut r = GradedClass::zero(g);
        for i in 0..=g {
            for k in 0..=(g - i) {
                for j in 0..2 {
                    for l in 0..(2 - j) {
                        let (a, b) = (&self.coeffs[i][j], &o.coeffs[k][l]);
                        if a.is_zero() || b.is_zero() {
                            continue;
                        }
                        r.coeffs[i + k][j + l] += a * b;
                    }
                }
            }
        }
        Ok(r)
    }

    pub fn pow(&self, n: usize) -> GradedClass {
        let mut acc = GradedClass::one(self.genus);
        for _ in 0..n {
            acc = acc.mul(self).expect("same genus");
        }
        acc
    }
}

impl fmt::Display for GradedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for j in 0..2 {
            for i in 0..=self.genus {
                let c = &self.coeffs[i][j];
                if c.is_zero() {
                    continue;
                }
                let mut mono = Vec::new();
                match i {
                    0 => {}
                    1 => mono.push("xi".to_string()),
                    _ => mono.push(format!("xi^{i}")),
                }
                if j == 1 {
                    mono.push("eta".to_string());
                }
                let mag = c.abs();
                let body = match (mono.is_empty(), mag.is_one()) {
                    (true, _) => mag.to_string(),
                    (false, true) => mono.join("*"),
                    (false, false) => format!("{}*{}", mag, mono.join("*")),
                };
                let neg = c.is_negative();
                match (first, neg) {
                    (true, false) => write!(f, "{body}")?,
                    (true, true) => write!(f, "-{body}")?,
                    (false, false) => write!(f, " + {body}")?,
                    (false, true) => write!(f, " - {body}")?,
                }
                first = false;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Integration along the P¹ fibre: the η-coefficients, as a polynomial in ξ.
pub fn q_push(a: &GradedClass) -> Vec<BigRational> {
    a.coeffs.iter().map(|c| c[1].clone()).collect()
}

/// Pullback of a polynomial in ξ from the base.
pub fn q_pull(genus: usize, poly: &[BigRational]) -> GradedClass {
    let mut r = GradedClass::zero(genus);
    for (i, c) in poly.iter().enumerate().take(genus + 1) {
        r.coeffs[i][0] = c.clone();
    }
    r
}

/// Outcome of a class identity check, with both sides for reporting.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

/// `(ξ+η)^g/g! = ξ^g/g! + ξ^{g-1}/(g-1)!·η`, i.e. the class of the lifted
/// curve is the pulled-back point class plus the pulled-back curve class times η.
///
/// `perturb` is added to the η-coefficient of the right-hand side (negative control).
pub fn curve_bundle_check(g: usize, perturb: Option<BigRational>) -> IdentityCheck {
    assert!(g >= 1);
    let theta = GradedClass::xi(g).add(&GradedClass::eta(g)).unwrap();
    let lhs = theta.pow(g).scale(&(rat(1) / factorial(g)));
    let point = GradedClass::monomial(g, rat(1) / factorial(g), g, 0);
    let curve = GradedClass::monomial(g, rat(1) / factorial(g - 1), g - 1, 0);
    let mut rhs = point.add(&curve.mul(&GradedClass::eta(g)).unwrap()).unwrap();
    if let Some(d) = perturb {
        rhs = rhs.add(&GradedClass::monomial(g, d, g - 1, 1)).unwrap();
    }
    IdentityCheck { holds: lhs == rhs, lhs: lhs.to_string(), rhs: rhs.to_string() }
}

pub fn verify_curve_bundle_class(g: usize) -> bool {
    curve_bundle_check(g, None).holds
}

/// `(ξ+η)³/3! = ξ³/3! + ξ²/2!·η` at genus 4.
pub fn sym2_bundle_check(perturb: Option<BigRational>) -> IdentityCheck {
    let g = 4;
    let theta = GradedClass::xi(g).add(&GradedClass::eta(g)).unwrap();
    let lhs = theta.pow(3).scale(&(rat(1) / factorial(3)));
    let sym2 = GradedClass::monomial(g, rat(1) / factorial(3), 3, 0);
    let half_cc = GradedClass::monomial(g, rat(1) / factorial(2), 2, 0);
    let mut rhs = sym2.add(&half_cc.mul(&GradedClass::eta(g)).unwrap()).unwrap();
    if let Some(d) = perturb {
        rhs = rhs.add(&GradedClass::monomial(g, d, 2, 1)).unwrap();
    }
    IdentityCheck { holds: lhs == rhs, lhs: lhs.to_string(), rhs: rhs.to_string() }
}

pub fn verify_sym2_bundle_class() -> bool {
    sym2_bundle_check(None).holds
}

/// Classes of the two glued sections, modulo algebraic equivalence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlueingClasses {
    pub t1: GradedClass,
    pub t2: GradedClass,
    /// The sections differ by the pullback of an algebraically trivial
    /// bundle, so they are linearly equivalent only when that bundle is trivial.
    pub linearly_equivalent_only_if_trivial: bool,
    /// Degree of each section on a fibre.
    pub fibre_degree: i64,
}

pub fn glueing_divisor_classes(g: usize) -> GlueingClasses {
    let eta = GradedClass::eta(g);
    // T2 = η - q^*(L) with L algebraically trivial, so its class evaluates to zero
    let l_class = GradedClass::zero(g);
    let t2 = eta.sub(&l_class).unwrap();
    // a section meets a fibre once: the η coefficient pushed to the base is 1
    let fibre_degree = if q_push(&eta)[0].is_one() { 1 } else { 0 };
    GlueingClasses { t1: eta, t2, linearly_equivalent_only_if_trivial: true, fibre_degree }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    genus: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, RingError> {
        Err(RingError::Parse { pos: self.pos, msg: msg.into() })
    }

    fn peek(&mut self) -> Option<u8> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Option<BigInt> {
        self.peek();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.src[start..self.pos]).unwrap().parse().unwrap())
    }

    fn expr(&mut self) -> Result<GradedClass, RingError> {
        let mut acc = if self.eat(b'-') {
            self.term()?.scale(&rat(-1))
        } else {
            self.eat(b'+');
            self.term()?
        };
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?)?;
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<GradedClass, RingError> {
        let mut acc = self.power()?;
        loop {
            if self.eat(b'*') {
                acc = acc.mul(&self.power()?)?;
            } else if self.eat(b'/') {
                let d = self.power()?;
                // only division by a nonzero constant is meaningful here
                let c = d.coeff(0, 0);
                let mut rest = d.clone();
                rest.coeffs[0][0] = rat(0);
                if !rest.is_zero() || c.is_zero() {
                    return self.err("division by a non-constant or zero class");
                }
                acc = acc.scale(&(rat(1) / c));
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<GradedClass, RingError> {
        let base = self.atom()?;
        if self.eat(b'^') {
            match self.integer().and_then(|n| usize::try_from(n).ok()) {
                Some(n) => Ok(base.pow(n)),
                None => self.err("expected a non-negative integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<GradedClass, RingError> {
        if self.eat(b'(') {
            let e = self.expr()?;
            if !self.eat(b')') {
                return self.err("expected ')'");
            }
            return Ok(e);
        }
        if let Some(n) = self.integer() {
            return Ok(GradedClass::constant(self.genus, BigRational::from_integer(n)));
        }
        let rest = &self.src[self.pos..];
        if rest.starts_with(b"xi") {
            self.pos += 2;
            return Ok(GradedClass::xi(self.genus));
        }
        if rest.starts_with(b"eta") {
            self.pos += 3;
            return Ok(GradedClass::eta(self.genus));
        }
        self.err("expected xi, eta, an integer or '('")
    }
}

/// Parse an expression such as `(xi+eta)^3 / 6` in the ring of the given genus.
pub fn parse_class(s: &str, genus: usize) -> Result<GradedClass, RingError> {
    let mut p = Parser { src: s.as_bytes(), pos: 0, genus };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(e)
}
