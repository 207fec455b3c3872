//! Finite fields `F_{p^n}` with table-driven arithmetic.
//!
//! An element is stored as its *encoding*: the integer `sum c_i p^i` built from
//! its coordinate vector `(c_0, .., c_{n-1})` over `F_p` relative to the field's
//! modulus polynomial. Multiplication goes through discrete-log tables and
//! addition (for odd `p`) through a Zech-logarithm table, so every operation
//! is a handful of table lookups.
//!
//! Fields are interned in a process-wide registry: `field(p, n)` always returns
//! the same `Arc<Field>`. Embeddings between fields are chosen so that all
//! triangles `F_{p^d} -> F_{p^a} -> F_{p^b}` commute.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

use super::poly;

/// Upper bound on the order of a constructible field (table memory).
pub const MAX_FIELD_ORDER: u64 = 1 << 24;

const NONE: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of order {p}^{n} exceeds the table bound {MAX_FIELD_ORDER}")]
    TooLarge { p: u64, n: u32 },
    #[error("F_{p}^{small} does not embed in F_{p}^{large}")]
    NoEmbedding { p: u32, small: u32, large: u32 },
}

/// Field element, as an encoding into its field. Meaningless without the field.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub struct Field {
    p: u32,
    degree: u32,
    order: u32,
    modulus: Vec<u32>,
    log: Vec<u32>,
    exp: Vec<u32>,
    zech: Vec<u32>,
    half_group: u32,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.p, self.degree)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.degree == other.degree
    }
}

impl Eq for Field {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// Dense polynomials over F_p (small p), low degree first. Only used while
// building a field, before any tables exist.
mod fp {
    pub fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let mut r: Vec<u64> = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(&mut r);
        r
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let inv_lead = inv(m[dm], p);
        while r.len() > dm {
            let shift = r.len() - 1 - dm;
            let c = r[r.len() - 1] * inv_lead % p;
            for (i, &mi) in m.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p * p - c * mi % p) % p;
            }
            trim(&mut r);
        }
        r
    }

    pub fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut r = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                r[i + j] = (r[i + j] + x * y) % p;
            }
        }
        rem(&r, m, p)
    }

    pub fn powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut acc = vec![1u64];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(&acc, &b, m, p);
            }
            b = mulmod(&b, &b, m, p);
            e >>= 1;
        }
        acc
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    pub fn inv(x: u64, p: u64) -> u64 {
        let mut r = 1u64;
        let mut b = x % p;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    }

    /// Rabin's test for a monic polynomial of degree `n`.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let n = (f.len() - 1) as u32;
        let x = vec![0, 1];
        let xpn = powmod(&x, p.pow(n), f, p);
        if sub(&xpn, &x, p) != Vec::<u64>::new() {
            return false;
        }
        for l in super::prime_factors(n as u64) {
            let e = p.pow(n / l as u32);
            let h = sub(&powmod(&x, e, f, p), &x, p);
            let g = gcd(f, &h, p);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }
}

fn decode(mut e: u64, p: u64, n: usize) -> Vec<u64> {
    let mut v = vec![0u64; n];
    for c in v.iter_mut() {
        *c = e % p;
        e /= p;
    }
    v
}

fn encode(v: &[u64], p: u64) -> u64 {
    v.iter().rev().fold(0u64, |acc, &c| acc * p + c)
}

/// Lexicographically smallest monic irreducible of degree `n` over `F_p`:
/// candidates are ordered by the integer `sum_{i<n} c_i p^i`, so the
/// coefficient of `x^{n-1}` is the most significant.
pub fn smallest_irreducible(p: u32, n: u32) -> Vec<u32> {
    let p64 = p as u64;
    if n == 1 {
        return vec![0, 1];
    }
    let bound = p64.pow(n);
    for low in 0..bound {
        let mut f = decode(low, p64, n as usize);
        f.push(1);
        if f[0] == 0 {
            continue;
        }
        if fp::is_irreducible(&f, p64) {
            return f.into_iter().map(|c| c as u32).collect();
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl Field {
    fn build(p: u32, n: u32) -> Result<Field, FieldError> {
        if !is_prime(p as u64) {
            return Err(FieldError::NotPrime(p as u64));
        }
        if n == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let order64 = (p as u64).checked_pow(n).unwrap_or(u64::MAX);
        if order64 > MAX_FIELD_ORDER {
            return Err(FieldError::TooLarge { p: p as u64, n });
        }
        let order = order64 as u32;
        let modulus = smallest_irreducible(p, n);
        let p64 = p as u64;
        let m64: Vec<u64> = modulus.iter().map(|&c| c as u64).collect();
        let group = order64 - 1;
        let factors = prime_factors(group);

        // smallest primitive element by encoding
        let mut gen = Vec::new();
        for cand in 2..order64.max(3) {
            if order64 == 2 {
                break;
            }
            let g = decode(cand, p64, n as usize);
            let primitive = factors
                .iter()
                .all(|&l| fp::powmod(&g, group / l, &m64, p64) != vec![1u64]);
            if primitive {
                gen = g;
                break;
            }
        }
        if order64 == 2 || (order64 == 3 && gen.is_empty()) {
            gen = decode(order64 - 1, p64, n as usize);
        }
        let mut gen_terms: Vec<(usize, u64)> =
            gen.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (i, c)).collect();
        if gen_terms.is_empty() {
            gen_terms.push((0, 1));
        }

        let mut log = vec![0u32; order as usize];
        let mut exp = vec![0u32; 2 * group as usize];
        let mut cur = vec![0u64; n as usize];
        cur[0] = 1;
        let nn = n as usize;
        let mut scratch = vec![0u64; 2 * nn];
        for i in 0..group as usize {
            let e = encode(&cur, p64) as u32;
            exp[i] = e;
            exp[i + group as usize] = e;
            log[e as usize] = i as u32;
            // cur *= gen  (mod modulus)
            scratch.iter_mut().for_each(|x| *x = 0);
            for &(shift, c) in &gen_terms {
                for (j, &x) in cur.iter().enumerate() {
                    scratch[j + shift] = (scratch[j + shift] + c * x) % p64;
                }
            }
            for top in (nn..2 * nn).rev() {
                let c = scratch[top];
                if c != 0 {
                    for (i2, &mi) in m64.iter().enumerate().take(nn) {
                        let idx = top - nn + i2;
                        scratch[idx] = (scratch[idx] + p64 * p64 - c * mi % p64) % p64;
                    }
                    scratch[top] = 0;
                }
            }
            cur.copy_from_slice(&scratch[..nn]);
        }

        let zech = if p == 2 {
            Vec::new()
        } else {
            (0..group as usize)
                .map(|k| {
                    let e = exp[k];
                    let d0 = e % p;
                    let e1 = e - d0 + (d0 + 1) % p;
                    if e1 == 0 {
                        NONE
                    } else {
                        log[e1 as usize]
                    }
                })
                .collect()
        };

        Ok(Field {
            p,
            degree: n,
            order,
            modulus,
            log,
            exp,
            zech,
            half_group: (group / 2) as u32,
        })
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Degree over the prime field.
    #[inline]
    pub fn degree(&self) -> u32 {
        self.degree
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    #[inline]
    pub fn zero(&self) -> Fe {
        Fe::ZERO
    }

    #[inline]
    pub fn one(&self) -> Fe {
        Fe::ONE
    }

    /// Image of an integer under `Z -> F_p -> F`.
    pub fn from_int(&self, x: i64) -> Fe {
        Fe(x.rem_euclid(self.p as i64) as u32)
    }

    /// Element with the given encoding. Panics when out of range.
    pub fn elem(&self, enc: u32) -> Fe {
        assert!(enc < self.order, "encoding {enc} out of range for {self:?}");
        Fe(enc)
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.order).map(Fe)
    }

    pub fn digits(&self, a: Fe) -> Vec<u32> {
        decode(a.0 as u64, self.p as u64, self.degree as usize)
            .into_iter()
            .map(|c| c as u32)
            .collect()
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.p == 2 {
            return Fe(a.0 ^ b.0);
        }
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        if self.degree == 1 {
            return Fe((a.0 + b.0) % self.p);
        }
        let la = self.log[a.0 as usize];
        let lb = self.log[b.0 as usize];
        let group = self.order - 1;
        let d = if lb >= la { lb - la } else { lb + group - la };
        let z = self.zech[d as usize];
        if z == NONE {
            Fe::ZERO
        } else {
            Fe(self.exp[(la + z) as usize])
        }
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        if self.p == 2 || a.0 == 0 {
            return a;
        }
        if self.degree == 1 {
            return Fe(self.p - a.0);
        }
        Fe(self.exp[(self.log[a.0 as usize] + self.half_group) as usize])
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        Fe(self.exp[(self.log[a.0 as usize] + self.log[b.0 as usize]) as usize])
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: Fe) -> Option<Fe> {
        if a.0 == 0 {
            return None;
        }
        let group = self.order - 1;
        let l = self.log[a.0 as usize];
        Some(Fe(self.exp[((group - l) % group) as usize]))
    }

    /// `a / b`, panicking on division by zero.
    #[inline]
    pub fn div(&self, a: Fe, b: Fe) -> Fe {
        self.mul(a, self.inv(b).expect("division by zero in finite field"))
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return Fe::ONE;
        }
        if a.0 == 0 {
            return Fe::ZERO;
        }
        let group = (self.order - 1) as u64;
        let l = self.log[a.0 as usize] as u64;
        Fe(self.exp[((l * (e % group)) % group) as usize])
    }

    /// Absolute Frobenius `x -> x^p`.
    pub fn frobenius(&self, a: Fe) -> Fe {
        self.pow(a, self.p as u64)
    }

    pub fn sum<I: IntoIterator<Item = Fe>>(&self, it: I) -> Fe {
        it.into_iter().fold(Fe::ZERO, |acc, x| self.add(acc, x))
    }

    /// Discrete logarithm relative to the table generator (`None` for zero).
    pub fn log(&self, a: Fe) -> Option<u32> {
        (a.0 != 0).then(|| self.log[a.0 as usize])
    }

    /// Whether this field contains a subfield of `p^d` elements.
    pub fn has_subfield(&self, d: u32) -> bool {
        d > 0 && self.degree.is_multiple_of(d)
    }

    /// Membership in the subfield of order `p^d`.
    pub fn in_subfield(&self, a: Fe, d: u32) -> bool {
        self.pow(a, (self.p as u64).pow(d)) == a
    }
}

type FieldKey = (u32, u32);
type EmbedKey = (u32, u32, u32);

fn fields() -> &'static Mutex<HashMap<FieldKey, Arc<Field>>> {
    static CELL: OnceLock<Mutex<HashMap<FieldKey, Arc<Field>>>> = OnceLock::new();
    CELL.get_or_init(|| Mutex::new(HashMap::new()))
}

fn embed_images() -> &'static Mutex<HashMap<EmbedKey, u32>> {
    static CELL: OnceLock<Mutex<HashMap<EmbedKey, u32>>> = OnceLock::new();
    CELL.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The field `F_{p^n}` (interned).
pub fn field(p: u32, n: u32) -> Result<Arc<Field>, FieldError> {
    if let Some(f) = fields().lock().unwrap().get(&(p, n)) {
        return Ok(f.clone());
    }
    let built = Arc::new(Field::build(p, n)?);
    let mut map = fields().lock().unwrap();
    Ok(map.entry((p, n)).or_insert(built).clone())
}

/// Evaluate the coordinate polynomial of `x in F_{p^a}` at `r in F_{p^b}`.
fn eval_digits(small: &Field, large: &Field, x: Fe, r: Fe) -> Fe {
    let digits = small.digits(x);
    digits
        .iter()
        .rev()
        .fold(Fe::ZERO, |acc, &c| large.add(large.mul(acc, r), Fe(c)))
}

/// Image of the class of `t` in `F_{p^a}` under the canonical embedding into
/// `F_{p^b}`: the smallest root of the modulus of `F_{p^a}` that makes the
/// embedding agree with the already-chosen embeddings of every maximal proper
/// subfield.
fn generator_image(p: u32, a: u32, b: u32) -> Result<Fe, FieldError> {
    if !b.is_multiple_of(a) {
        return Err(FieldError::NoEmbedding { p, small: a, large: b });
    }
    if let Some(&r) = embed_images().lock().unwrap().get(&(p, a, b)) {
        return Ok(Fe(r));
    }
    let small = field(p, a)?;
    let large = field(p, b)?;
    let image = if a == b {
        // class of t itself
        if a == 1 {
            Fe::ZERO
        } else {
            Fe(p)
        }
    } else if a == 1 {
        Fe::ZERO
    } else {
        let modulus: Vec<Fe> = small.modulus().iter().map(|&c| Fe(c)).collect();
        let mut roots = poly::roots(&large, &modulus);
        roots.sort();
        let constraints: Vec<(Fe, Fe)> = prime_factors(a as u64)
            .into_iter()
            .map(|l| a / l as u32)
            .filter(|&d| d > 1)
            .map(|d| {
                let in_small = generator_image(p, d, a)?;
                let in_large = generator_image(p, d, b)?;
                Ok((in_small, in_large))
            })
            .collect::<Result<_, FieldError>>()?;
        *roots
            .iter()
            .find(|&&r| {
                constraints
                    .iter()
                    .all(|&(s, l)| eval_digits(&small, &large, s, r) == l)
            })
            .expect("compatible embedding exists")
    };
    embed_images().lock().unwrap().insert((p, a, b), image.0);
    Ok(image)
}

/// A field embedding `F_{p^a} -> F_{p^b}`.
#[derive(Clone)]
pub struct Embedding {
    src: Arc<Field>,
    dst: Arc<Field>,
    table: Arc<Vec<u32>>,
}

impl fmt::Debug for Embedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Embedding({:?} -> {:?})", self.src, self.dst)
    }
}

impl Embedding {
    pub fn new(src: &Arc<Field>, dst: &Arc<Field>) -> Result<Embedding, FieldError> {
        let p = src.characteristic();
        if dst.characteristic() != p {
            return Err(FieldError::NoEmbedding {
                p,
                small: src.degree(),
                large: dst.degree(),
            });
        }
        let r = generator_image(p, src.degree(), dst.degree())?;
        let table: Vec<u32> = if src.degree() == 1 {
            (0..src.order()).collect()
        } else {
            src.elements().map(|x| eval_digits(src, dst, x, r).0).collect()
        };
        Ok(Embedding {
            src: src.clone(),
            dst: dst.clone(),
            table: Arc::new(table),
        })
    }

    pub fn identity(f: &Arc<Field>) -> Embedding {
        Embedding {
            src: f.clone(),
            dst: f.clone(),
            table: Arc::new((0..f.order()).collect()),
        }
    }

    #[inline]
    pub fn map(&self, x: Fe) -> Fe {
        Fe(self.table[x.0 as usize])
    }

    pub fn source(&self) -> &Arc<Field> {
        &self.src
    }

    pub fn target(&self) -> &Arc<Field> {
        &self.dst
    }

    /// Preimage of `y`, if `y` lies in the image.
    pub fn preimage(&self, y: Fe) -> Option<Fe> {
        if self.src.degree() == 1 {
            return (y.0 < self.src.order()).then_some(y);
        }
        self.table.iter().position(|&v| v == y.0).map(|i| Fe(i as u32))
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Embedding) -> Embedding {
        assert_eq!(self.dst, next.src, "embeddings do not compose");
        Embedding {
            src: self.src.clone(),
            dst: next.dst.clone(),
            table: Arc::new(self.table.iter().map(|&x| next.table[x as usize]).collect()),
        }
    }
}

/// Cached `Embedding::new` (tables are shared between callers).
pub fn embedding(src: &Arc<Field>, dst: &Arc<Field>) -> Result<Embedding, FieldError> {
    static CELL: OnceLock<Mutex<HashMap<EmbedKey, Embedding>>> = OnceLock::new();
    let cache = CELL.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (src.characteristic(), src.degree(), dst.degree());
    if let Some(e) = cache.lock().unwrap().get(&key) {
        return Ok(e.clone());
    }
    let e = if src.degree() == dst.degree() && src == dst {
        Embedding::identity(src)
    } else {
        Embedding::new(src, dst)?
    };
    cache.lock().unwrap().insert(key, e.clone());
    Ok(e)
}

/// Reverse lookup for repeated preimage queries.
pub struct Preimage {
    map: HashMap<u32, u32>,
}

impl Preimage {
    pub fn new(e: &Embedding) -> Preimage {
        Preimage {
            map: e.table.iter().enumerate().map(|(i, &v)| (v, i as u32)).collect(),
        }
    }

    pub fn get(&self, y: Fe) -> Option<Fe> {
        self.map.get(&y.0).map(|&x| Fe(x))
    }
}
