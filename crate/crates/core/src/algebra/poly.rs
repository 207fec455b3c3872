//! Univariate polynomials over a table field, stored low degree first.
//!
//! Root finding is distinct-degree (`gcd(f, x^Q - x)`) followed by
//! deterministic equal-degree splitting; `exhaustive_roots` is the brute-force
//! reference used by tests.

use super::field::{Fe, Field};

pub type Poly = Vec<Fe>;

pub fn trim(a: &mut Poly) {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
}

pub fn trimmed(a: &[Fe]) -> Poly {
    let mut v = a.to_vec();
    trim(&mut v);
    v
}

/// Degree, `None` for the zero polynomial.
pub fn degree(a: &[Fe]) -> Option<usize> {
    a.iter().rposition(|c| !c.is_zero())
}

pub fn eval(f: &Field, a: &[Fe], x: Fe) -> Fe {
    a.iter().rev().fold(Fe::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
}

pub fn add(f: &Field, a: &[Fe], b: &[Fe]) -> Poly {
    let n = a.len().max(b.len());
    let mut r: Poly = (0..n)
        .map(|i| {
            f.add(
                a.get(i).copied().unwrap_or(Fe::ZERO),
                b.get(i).copied().unwrap_or(Fe::ZERO),
            )
        })
        .collect();
    trim(&mut r);
    r
}

pub fn sub(f: &Field, a: &[Fe], b: &[Fe]) -> Poly {
    let n = a.len().max(b.len());
    let mut r: Poly = (0..n)
        .map(|i| {
            f.sub(
                a.get(i).copied().unwrap_or(Fe::ZERO),
                b.get(i).copied().unwrap_or(Fe::ZERO),
            )
        })
        .collect();
    trim(&mut r);
    r
}

pub fn mul(f: &Field, a: &[Fe], b: &[Fe]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![Fe::ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = f.add(r[i + j], f.mul(x, y));
        }
    }
    trim(&mut r);
    r
}

pub fn scale(f: &Field, a: &[Fe], c: Fe) -> Poly {
    let mut r: Poly = a.iter().map(|&x| f.mul(x, c)).collect();
    trim(&mut r);
    r
}

/// Quotient and remainder; panics on division by zero.
pub fn divrem(f: &Field, a: &[Fe], b: &[Fe]) -> (Poly, Poly) {
    let db = degree(b).expect("polynomial division by zero");
    let inv_lead = f.inv(b[db]).unwrap();
    let mut r = trimmed(a);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![Fe::ZERO; r.len() - db];
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let c = f.mul(r[r.len() - 1], inv_lead);
        q[shift] = c;
        for i in 0..=db {
            r[shift + i] = f.sub(r[shift + i], f.mul(c, b[i]));
        }
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

pub fn rem(f: &Field, a: &[Fe], b: &[Fe]) -> Poly {
    divrem(f, a, b).1
}

pub fn monic(f: &Field, a: &[Fe]) -> Poly {
    match degree(a) {
        None => Vec::new(),
        Some(d) => scale(f, &a[..=d], f.inv(a[d]).unwrap()),
    }
}

/// Monic gcd (zero if both inputs are zero).
pub fn gcd(f: &Field, a: &[Fe], b: &[Fe]) -> Poly {
    let mut a = trimmed(a);
    let mut b = trimmed(b);
    while !b.is_empty() {
        let r = rem(f, &a, &b);
        a = b;
        b = r;
    }
    monic(f, &a)
}

pub fn mulmod(f: &Field, a: &[Fe], b: &[Fe], m: &[Fe]) -> Poly {
    rem(f, &mul(f, a, b), m)
}

pub fn powmod(f: &Field, base: &[Fe], mut e: u64, m: &[Fe]) -> Poly {
    let mut acc = rem(f, &[Fe::ONE], m);
    let mut b = rem(f, base, m);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(f, &acc, &b, m);
        }
        e >>= 1;
        if e > 0 {
            b = mulmod(f, &b, &b, m);
        }
    }
    acc
}

pub fn derivative(f: &Field, a: &[Fe]) -> Poly {
    let mut r: Poly = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| f.mul(f.from_int(i as i64), c))
        .collect();
    trim(&mut r);
    r
}

/// Split a squarefree monic polynomial whose roots all lie in the field.
fn split_linear_factors(f: &Field, g: &[Fe], out: &mut Vec<Fe>) {
    let d = degree(g).unwrap_or(0);
    if d == 0 {
        return;
    }
    if d == 1 {
        // monic: x + c
        out.push(f.neg(g[0]));
        return;
    }
    let q = f.order() as u64;
    let p = f.characteristic();
    // deterministic sweep of splitting elements
    for c in 1..f.order() {
        let h = if p == 2 {
            // trace of c*x
            let cx = vec![Fe::ZERO, Fe(c)];
            let mut t = rem(f, &cx, g);
            let mut acc = t.clone();
            for _ in 1..f.degree() {
                t = mulmod(f, &t, &t, g);
                acc = add(f, &acc, &t);
            }
            acc
        } else {
            let shifted = vec![Fe(c - 1), Fe::ONE];
            let pw = powmod(f, &shifted, (q - 1) / 2, g);
            sub(f, &pw, &[Fe::ONE])
        };
        let s = gcd(f, g, &h);
        let ds = degree(&s).unwrap_or(0);
        if ds > 0 && ds < d {
            let (other, _) = divrem(f, g, &s);
            split_linear_factors(f, &s, out);
            split_linear_factors(f, &monic(f, &other), out);
            return;
        }
    }
    unreachable!("equal-degree splitting exhausted the field");
}

/// Distinct roots in the field, in ascending encoding order.
pub fn roots(f: &Field, a: &[Fe]) -> Vec<Fe> {
    let a = monic(f, a);
    let d = match degree(&a) {
        None => panic!("roots of the zero polynomial"),
        Some(d) => d,
    };
    if d == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    if d == 1 {
        out.push(f.neg(a[0]));
        return out;
    }
    let x = vec![Fe::ZERO, Fe::ONE];
    let xq = powmod(f, &x, f.order() as u64, &a);
    let g = gcd(f, &a, &sub(f, &xq, &x));
    split_linear_factors(f, &g, &mut out);
    out.sort();
    out
}

/// Roots with multiplicities, ascending by encoding.
pub fn roots_with_multiplicity(f: &Field, a: &[Fe]) -> Vec<(Fe, usize)> {
    roots(f, a)
        .into_iter()
        .map(|r| (r, root_multiplicity(f, a, r)))
        .collect()
}

pub fn root_multiplicity(f: &Field, a: &[Fe], r: Fe) -> usize {
    let lin = [f.neg(r), Fe::ONE];
    let mut cur = trimmed(a);
    let mut m = 0;
    while !cur.is_empty() {
        let (q, rm) = divrem(f, &cur, &lin);
        if !rm.is_empty() {
            break;
        }
        cur = q;
        m += 1;
    }
    m
}

/// Brute-force root search over every field element.
pub fn exhaustive_roots(f: &Field, a: &[Fe]) -> Vec<Fe> {
    f.elements().filter(|&x| eval(f, a, x).is_zero()).collect()
}

/// Whether `a` has an irreducible factor of degree > 1 (i.e. not all of its
/// roots lie in the field, counted with multiplicity).
pub fn splits(f: &Field, a: &[Fe]) -> bool {
    let d = degree(a).unwrap_or(0);
    roots_with_multiplicity(f, a).iter().map(|(_, m)| m).sum::<usize>() == d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::field;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn roots_match_exhaustive_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &(p, n) in &[(2, 1), (2, 4), (3, 1), (3, 3), (7, 1), (7, 2), (5, 2), (2, 6)] {
            let f = field(p, n).unwrap();
            for _ in 0..60 {
                let deg = rng.gen_range(1..7);
                let mut a: Poly = (0..=deg).map(|_| Fe(rng.gen_range(0..f.order()))).collect();
                if a[deg].is_zero() {
                    a[deg] = Fe::ONE;
                }
                assert_eq!(roots(&f, &a), exhaustive_roots(&f, &a), "F_{p}^{n}: {a:?}");
            }
        }
    }

    #[test]
    fn multiplicities_of_constructed_products() {
        let f = field(5, 2).unwrap();
        let r1 = Fe(7);
        let r2 = Fe(13);
        let lin = |r: Fe| vec![f.neg(r), Fe::ONE];
        let mut a = mul(&f, &lin(r1), &lin(r1));
        a = mul(&f, &a, &lin(r1));
        a = mul(&f, &a, &lin(r2));
        let mut expected = vec![(r1, 3), (r2, 1)];
        expected.sort();
        assert_eq!(roots_with_multiplicity(&f, &a), expected);
        assert!(splits(&f, &a));
    }

    #[test]
    fn division_identity() {
        let f = field(7, 1).unwrap();
        let a: Poly = [3, 0, 5, 1, 6].iter().map(|&x| Fe(x)).collect();
        let b: Poly = [1, 2, 1].iter().map(|&x| Fe(x)).collect();
        let (q, r) = divrem(&f, &a, &b);
        assert_eq!(add(&f, &mul(&f, &q, &b), &r), a);
        assert!(degree(&r).is_none_or(|d| d < 2));
    }

    #[test]
    fn irreducible_quadratic_has_no_roots() {
        let f = field(7, 1).unwrap();
        // x^2 + 1 over F_7
        assert!(roots(&f, &[Fe(1), Fe(0), Fe(1)]).is_empty());
        let f49 = field(7, 2).unwrap();
        assert_eq!(roots(&f49, &[Fe(1), Fe(0), Fe(1)]).len(), 2);
    }
}
