//! Homogeneous polynomials in a fixed number of variables.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::binary::BinaryForm;
use super::field::{Embedding, Fe, Field};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum FormError {
    #[error("exponent string {0:?} is not {1} decimal digits")]
    BadExponent(String, usize),
    #[error("monomial {0:?} has degree {1}, expected {2}")]
    NotHomogeneous(String, usize, usize),
}

/// A homogeneous form of fixed degree; zero coefficients are never stored.
#[derive(Clone)]
pub struct Form {
    field: Arc<Field>,
    nvars: usize,
    degree: usize,
    terms: BTreeMap<Vec<u8>, Fe>,
}

impl PartialEq for Form {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.nvars == other.nvars
            && self.degree == other.degree
            && self.terms == other.terms
    }
}

impl Eq for Form {}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| if k == 1 { format!("x{i}") } else { format!("x{i}^{k}") })
                    .collect();
                format!("{}*{}", c.0, mono.join("*"))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Parse a monomial key such as `"2100"` into exponents.
pub fn parse_exponent(s: &str, nvars: usize) -> Result<Vec<u8>, FormError> {
    if s.len() != nvars || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(FormError::BadExponent(s.to_string(), nvars));
    }
    Ok(s.bytes().map(|b| b - b'0').collect())
}

impl Form {
    pub fn zero(f: &Arc<Field>, nvars: usize, degree: usize) -> Form {
        Form { field: f.clone(), nvars, degree, terms: BTreeMap::new() }
    }

    pub fn constant(f: &Arc<Field>, nvars: usize, c: Fe) -> Form {
        let mut r = Form::zero(f, nvars, 0);
        r.add_term(vec![0; nvars], c);
        r
    }

    pub fn variable(f: &Arc<Field>, nvars: usize, i: usize) -> Form {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut r = Form::zero(f, nvars, 1);
        r.add_term(e, Fe::ONE);
        r
    }

    /// Build from `(exponent, coefficient)` pairs, summing repeated monomials.
    pub fn from_terms<I>(f: &Arc<Field>, nvars: usize, degree: usize, terms: I) -> Result<Form, FormError>
    where
        I: IntoIterator<Item = (Vec<u8>, Fe)>,
    {
        let mut r = Form::zero(f, nvars, degree);
        for (e, c) in terms {
            let d: usize = e.iter().map(|&k| k as usize).sum();
            if e.len() != nvars {
                return Err(FormError::BadExponent(format!("{e:?}"), nvars));
            }
            if d != degree {
                return Err(FormError::NotHomogeneous(format!("{e:?}"), d, degree));
            }
            r.add_term(e, c);
        }
        Ok(r)
    }

    fn add_term(&mut self, e: Vec<u8>, c: Fe) {
        if c.is_zero() {
            return;
        }
        let v = self.field.add(self.coeff(&e), c);
        if v.is_zero() {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, v);
        }
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u8], Fe)> {
        self.terms.iter().map(|(e, &c)| (e.as_slice(), c))
    }

    pub fn coeff(&self, e: &[u8]) -> Fe {
        self.terms.get(e).copied().unwrap_or(Fe::ZERO)
    }

    pub fn eval(&self, x: &[Fe]) -> Fe {
        assert_eq!(x.len(), self.nvars);
        let f = &self.field;
        let d = self.degree;
        // powers[i][k] = x_i^k
        let powers: Vec<Vec<Fe>> = x
            .iter()
            .map(|&xi| {
                let mut v = Vec::with_capacity(d + 1);
                let mut acc = Fe::ONE;
                for _ in 0..=d {
                    v.push(acc);
                    acc = f.mul(acc, xi);
                }
                v
            })
            .collect();
        let mut total = Fe::ZERO;
        for (e, &c) in &self.terms {
            let mut t = c;
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = f.mul(t, powers[i][k as usize]);
                }
            }
            total = f.add(total, t);
        }
        total
    }

    fn check_compatible(&self, other: &Form) {
        assert_eq!(self.field, other.field, "forms over different fields");
        assert_eq!(self.nvars, other.nvars, "forms in different numbers of variables");
    }

    pub fn add(&self, other: &Form) -> Form {
        self.check_compatible(other);
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        assert_eq!(self.degree, other.degree, "adding forms of different degree");
        let mut r = self.clone();
        for (e, &c) in &other.terms {
            r.add_term(e.clone(), c);
        }
        r
    }

    pub fn neg(&self) -> Form {
        let f = &self.field;
        let mut r = self.clone();
        for c in r.terms.values_mut() {
            *c = f.neg(*c);
        }
        r
    }

    pub fn sub(&self, other: &Form) -> Form {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: Fe) -> Form {
        let f = &self.field;
        let mut r = Form::zero(&self.field, self.nvars, self.degree);
        for (e, &a) in &self.terms {
            r.add_term(e.clone(), f.mul(a, c));
        }
        r
    }

    pub fn mul(&self, other: &Form) -> Form {
        self.check_compatible(other);
        let f = &self.field;
        let mut r = Form::zero(&self.field, self.nvars, self.degree + other.degree);
        for (ea, &a) in &self.terms {
            for (eb, &b) in &other.terms {
                let e: Vec<u8> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                r.add_term(e, f.mul(a, b));
            }
        }
        r
    }

    pub fn pow(&self, k: usize) -> Form {
        let mut acc = Form::constant(&self.field, self.nvars, Fe::ONE);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Partial derivative in variable `i`.
    pub fn partial(&self, i: usize) -> Form {
        let f = &self.field;
        let mut r = Form::zero(&self.field, self.nvars, self.degree.saturating_sub(1));
        for (e, &c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            r.add_term(e2, f.mul(c, f.from_int(e[i] as i64)));
        }
        r
    }

    /// Substitute `x_i -> subs[i]`; all substitutes share one degree.
    pub fn compose(&self, subs: &[Form]) -> Form {
        assert_eq!(subs.len(), self.nvars);
        let target_vars = subs[0].nvars;
        let sub_deg = subs[0].degree;
        let mut powers: Vec<Vec<Form>> = Vec::with_capacity(self.nvars);
        for s in subs {
            assert_eq!(s.field, self.field);
            assert_eq!(s.nvars, target_vars);
            let mut v = vec![Form::constant(&self.field, target_vars, Fe::ONE)];
            for k in 1..=self.degree {
                v.push(v[k - 1].mul(s));
            }
            powers.push(v);
        }
        let mut r = Form::zero(&self.field, target_vars, self.degree * sub_deg);
        for (e, &c) in &self.terms {
            let mut t = Form::constant(&self.field, target_vars, c);
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t.mul(&powers[i][k as usize]);
                }
            }
            // a zero product keeps degree 0; add only nonzero terms
            if !t.is_zero() {
                r = r.add(&t);
            }
        }
        r
    }

    /// Substitute binary forms of a common degree for the variables.
    pub fn restrict_to_binary(&self, subs: &[BinaryForm]) -> BinaryForm {
        assert_eq!(subs.len(), self.nvars);
        let f = &self.field;
        let sd = subs[0].degree();
        let powers: Vec<Vec<BinaryForm>> = subs
            .iter()
            .map(|s| {
                let mut v = vec![BinaryForm::constant(Fe::ONE)];
                for k in 1..=self.degree {
                    v.push(v[k - 1].mul(f, s));
                }
                v
            })
            .collect();
        let mut r = BinaryForm::zero(self.degree * sd);
        for (e, &c) in &self.terms {
            let mut t = BinaryForm::constant(c);
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t.mul(f, &powers[i][k as usize]);
                }
            }
            r = r.add(f, &t);
        }
        r
    }

    /// `F(s a + t b)` as a binary form of the same degree.
    pub fn restrict_to_line(&self, a: &[Fe], b: &[Fe]) -> BinaryForm {
        let subs: Vec<BinaryForm> =
            a.iter().zip(b).map(|(&ai, &bi)| BinaryForm::linear(ai, bi)).collect();
        self.restrict_to_binary(&subs)
    }

    /// Coefficients pushed through a field embedding.
    pub fn map(&self, e: &Embedding) -> Form {
        assert_eq!(**e.source(), *self.field, "embedding source mismatch");
        let mut r = Form::zero(e.target(), self.nvars, self.degree);
        for (ex, &c) in &self.terms {
            r.add_term(ex.clone(), e.map(c));
        }
        r
    }

    /// Polar bilinear matrix `B(x, y) = Q(x + y) - Q(x) - Q(y)` of a quadric.
    pub fn polar_matrix(&self) -> Vec<Vec<Fe>> {
        assert_eq!(self.degree, 2, "polar matrix of a non-quadric");
        let f = &self.field;
        let n = self.nvars;
        let mut m = vec![vec![Fe::ZERO; n]; n];
        for (e, &c) in &self.terms {
            let idx: Vec<usize> = (0..n).flat_map(|i| std::iter::repeat_n(i, e[i] as usize)).collect();
            let (i, j) = (idx[0], idx[1]);
            if i == j {
                m[i][i] = f.add(m[i][i], f.add(c, c));
            } else {
                m[i][j] = f.add(m[i][j], c);
                m[j][i] = f.add(m[j][i], c);
            }
        }
        m
    }
}
