//! Truncated power series in one variable, `a[i]` the coefficient of `t^i`.

use std::collections::BTreeMap;

use super::field::{Fe, Field};

pub type Series = Vec<Fe>;

pub fn constant(c: Fe, n: usize) -> Series {
    let mut r = vec![Fe::ZERO; n];
    if n > 0 {
        r[0] = c;
    }
    r
}

pub fn mul(f: &Field, a: &[Fe], b: &[Fe], n: usize) -> Series {
    let mut r = vec![Fe::ZERO; n];
    for (i, &x) in a.iter().enumerate().take(n) {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(n - i) {
            r[i + j] = f.add(r[i + j], f.mul(x, y));
        }
    }
    r
}

pub fn sub(f: &Field, a: &[Fe], b: &[Fe]) -> Series {
    let n = a.len().min(b.len());
    (0..n).map(|i| f.sub(a[i], b[i])).collect()
}

/// Order of vanishing, `None` if zero to the working precision.
pub fn ord(a: &[Fe]) -> Option<usize> {
    a.iter().position(|c| !c.is_zero())
}

/// `1 / a` for a unit `a`.
pub fn inverse(f: &Field, a: &[Fe]) -> Option<Series> {
    let n = a.len();
    let c = f.inv(*a.first()?)?;
    let mut r = vec![Fe::ZERO; n];
    r[0] = c;
    for k in 1..n {
        let s = f.sum((1..=k).map(|i| f.mul(a[i], r[k - i])));
        r[k] = f.neg(f.mul(s, c));
    }
    Some(r)
}

/// `g(h(t))` for `h(0) = 0`, to the precision of `h`.
pub fn compose(f: &Field, g: &[Fe], h: &[Fe]) -> Series {
    let n = h.len();
    assert!(n == 0 || h[0].is_zero(), "inner series must vanish at 0");
    let mut r = constant(Fe::ZERO, n);
    for &c in g.iter().take(n).rev() {
        r = mul(f, &r, h, n);
        if n > 0 {
            r[0] = f.add(r[0], c);
        }
    }
    r
}

/// Compositional inverse of `x = c₁t + c₂t² + …`, `c₁ ≠ 0`.
pub fn revert(f: &Field, x: &[Fe]) -> Option<Series> {
    let n = x.len();
    if n < 2 || !x[0].is_zero() {
        return None;
    }
    let c1 = f.inv(x[1])?;
    // fixed point of t = (s - Σ_{k≥2} c_k t^k) / c₁; each pass fixes one more coefficient
    let mut t = constant(Fe::ZERO, n);
    t[1] = c1;
    let mut higher = x.to_vec();
    higher[1] = Fe::ZERO;
    for _ in 2..n {
        let h = compose(f, &higher, &t);
        let mut next = constant(Fe::ZERO, n);
        next[1] = Fe::ONE;
        t = sub(f, &next, &h).into_iter().map(|c| f.mul(c, c1)).collect();
    }
    Some(t)
}

/// Gaps of the value semigroup `{ord h(x(t), y(t))}` of a branch, i.e. its
/// delta invariant. `None` when the conductor is not reached within the
/// working precision.
pub fn delta(f: &Field, x: &[Fe], y: &[Fe]) -> Option<usize> {
    let n = x.len().min(y.len());
    let (ox, oy) = (ord(&x[..n])?, ord(&y[..n])?);
    if ox == 0 || oy == 0 {
        return None;
    }
    if ox == 1 || oy == 1 {
        return Some(0);
    }
    // echelon form of the monomials x^i y^j below the precision, by lowest term
    let mut pivots: BTreeMap<usize, Series> = BTreeMap::new();
    let mut xi = constant(Fe::ONE, n);
    for i in 0.. {
        if i * ox >= n {
            break;
        }
        let mut m = xi.clone();
        for j in 0.. {
            if i * ox + j * oy >= n {
                break;
            }
            if i + j > 0 {
                let mut v = m.clone();
                while let Some(o) = ord(&v) {
                    match pivots.get(&o) {
                        Some(p) => {
                            let c = v[o];
                            v = v.iter().zip(p).map(|(&a, &b)| f.sub(a, f.mul(c, b))).collect();
                        }
                        None => {
                            let c = f.inv(v[o]).unwrap();
                            pivots.insert(o, v.iter().map(|&a| f.mul(a, c)).collect());
                            break;
                        }
                    }
                }
            }
            m = mul(f, &m, y, n);
        }
        xi = mul(f, &xi, x, n);
    }
    // conductor: a run of min(ox, oy) consecutive values closes everything above
    let run = ox.min(oy);
    let mut c = n;
    while c > 0 && pivots.contains_key(&(c - 1)) {
        c -= 1;
    }
    if n - c < run {
        return None;
    }
    Some((1..c).filter(|g| !pivots.contains_key(g)).count())
}

/// Intersection multiplicity at the origin of two branches `(x_a, y_a)`,
/// `(x_b, y_b)`, at least one of them smooth.
pub fn intersection(f: &Field, a: [&[Fe]; 2], b: [&[Fe]; 2]) -> Option<usize> {
    let smooth = |br: [&[Fe]; 2]| (0..2).find(|&i| ord(br[i]) == Some(1));
    let (a, b, i) = match (smooth(a), smooth(b)) {
        (_, Some(i)) => (a, b, i),
        (Some(i), None) => (b, a, i),
        (None, None) => return None,
    };
    // branch b as the graph of a function of its smooth coordinate
    let g = compose(f, b[1 - i], &revert(f, b[i])?);
    let n = a[0].len().min(a[1].len()).min(g.len());
    let lhs = &a[1 - i][..n];
    let rhs = compose(f, &g[..n], &a[i][..n]);
    ord(&sub(f, lhs, &rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field;

    fn s(f: &Field, v: &[i64], n: usize) -> Series {
        let mut r: Series = v.iter().map(|&c| f.from_int(c)).collect();
        r.resize(n, Fe::ZERO);
        r
    }

    #[test]
    fn inverse_and_reversion() {
        let f = field(7, 1).unwrap();
        let a = s(&f, &[2, 3, 1, 5], 10);
        let prod = mul(&f, &a, &inverse(&f, &a).unwrap(), 10);
        assert_eq!(prod, constant(Fe::ONE, 10));
        let x = s(&f, &[0, 3, 1, 4, 2], 10);
        let t = revert(&f, &x).unwrap();
        assert_eq!(compose(&f, &x, &t), s(&f, &[0, 1], 10));
    }

    #[test]
    fn classical_singularities() {
        let f = field(5, 1).unwrap();
        let n = 30;
        // cusp (t², t³): δ = 1; (t³, t⁴): δ = 3; (t⁴, t⁶ + t⁷): δ = 8
        assert_eq!(delta(&f, &s(&f, &[0, 0, 1], n), &s(&f, &[0, 0, 0, 1], n)), Some(1));
        assert_eq!(delta(&f, &s(&f, &[0, 0, 0, 1], n), &s(&f, &[0, 0, 0, 0, 1], n)), Some(3));
        assert_eq!(delta(&f, &s(&f, &[0, 0, 0, 0, 1], n), &s(&f, &[0, 0, 0, 0, 0, 0, 1, 1], n)), Some(8));
        // the line y = 0 against y = x^k meets with multiplicity k
        let line = [&s(&f, &[0, 1], n)[..], &s(&f, &[], n)[..]];
        for k in 1..5 {
            let mut v = vec![0; k + 1];
            v[k] = 1;
            let curve = [&s(&f, &[0, 1], n)[..], &s(&f, &v, n)[..]];
            assert_eq!(intersection(&f, line, curve), Some(k));
        }
        // the cusp (t², t³) meets y = 0 with multiplicity 3
        let cusp = [&s(&f, &[0, 0, 1], n)[..], &s(&f, &[0, 0, 0, 1], n)[..]];
        assert_eq!(intersection(&f, cusp, line), Some(3));
    }
}
