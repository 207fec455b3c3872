//! Binary forms `sum_j c_j s^{d-j} t^j` and their roots on `P^1`.

use super::field::{Fe, Field};
use super::poly;

/// Coefficients `c_0..c_d`, `c_j` multiplying `s^{d-j} t^j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryForm(pub Vec<Fe>);

/// A point `(s:t)` of `P^1`, normalised so the last nonzero coordinate is 1.
pub type P1 = (Fe, Fe);

pub fn normalize_p1(f: &Field, (s, t): P1) -> P1 {
    if !t.is_zero() {
        (f.div(s, t), Fe::ONE)
    } else {
        assert!(!s.is_zero(), "(0:0) is not a point of P^1");
        (Fe::ONE, Fe::ZERO)
    }
}

impl BinaryForm {
    pub fn zero(d: usize) -> BinaryForm {
        BinaryForm(vec![Fe::ZERO; d + 1])
    }

    /// `a s + b t`
    pub fn linear(a: Fe, b: Fe) -> BinaryForm {
        BinaryForm(vec![a, b])
    }

    pub fn constant(c: Fe) -> BinaryForm {
        BinaryForm(vec![c])
    }

    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.0
    }

    pub fn eval(&self, f: &Field, (s, t): P1) -> Fe {
        let d = self.degree();
        let mut acc = Fe::ZERO;
        for (j, &c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = f.mul(c, f.mul(f.pow(s, (d - j) as u64), f.pow(t, j as u64)));
            acc = f.add(acc, term);
        }
        acc
    }

    pub fn add(&self, f: &Field, other: &BinaryForm) -> BinaryForm {
        assert_eq!(self.degree(), other.degree(), "adding binary forms of different degree");
        BinaryForm(self.0.iter().zip(&other.0).map(|(&a, &b)| f.add(a, b)).collect())
    }

    pub fn sub(&self, f: &Field, other: &BinaryForm) -> BinaryForm {
        assert_eq!(self.degree(), other.degree(), "subtracting binary forms of different degree");
        BinaryForm(self.0.iter().zip(&other.0).map(|(&a, &b)| f.sub(a, b)).collect())
    }

    pub fn scale(&self, f: &Field, c: Fe) -> BinaryForm {
        BinaryForm(self.0.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, f: &Field, other: &BinaryForm) -> BinaryForm {
        let mut r = vec![Fe::ZERO; self.0.len() + other.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.0.iter().enumerate() {
                r[i + j] = f.add(r[i + j], f.mul(a, b));
            }
        }
        BinaryForm(r)
    }

    pub fn pow(&self, f: &Field, e: usize) -> BinaryForm {
        let mut acc = BinaryForm::constant(Fe::ONE);
        for _ in 0..e {
            acc = acc.mul(f, self);
        }
        acc
    }

    /// Exact division by the linear form `a s + b t`; `None` if not divisible.
    pub fn div_linear(&self, f: &Field, a: Fe, b: Fe) -> Option<BinaryForm> {
        let c = &self.0;
        let d = self.degree();
        if d == 0 {
            return self.is_zero().then(|| BinaryForm(Vec::new()));
        }
        let mut q = vec![Fe::ZERO; d];
        if !a.is_zero() {
            let ia = f.inv(a).unwrap();
            q[0] = f.mul(c[0], ia);
            for j in 1..d {
                q[j] = f.mul(f.sub(c[j], f.mul(b, q[j - 1])), ia);
            }
            if f.mul(b, q[d - 1]) != c[d] {
                return None;
            }
        } else {
            assert!(!b.is_zero(), "division by the zero linear form");
            if !c[0].is_zero() {
                return None;
            }
            let ib = f.inv(b).unwrap();
            for j in 0..d {
                q[j] = f.mul(c[j + 1], ib);
            }
        }
        Some(BinaryForm(q))
    }

    /// Linear form vanishing at `(s0:t0)`: `t0 s - s0 t`.
    pub fn vanishing_at(f: &Field, (s0, t0): P1) -> BinaryForm {
        BinaryForm(vec![t0, f.neg(s0)])
    }

    pub fn deflate(&self, f: &Field, root: P1) -> Option<BinaryForm> {
        let l = BinaryForm::vanishing_at(f, root);
        self.div_linear(f, l.0[0], l.0[1])
    }

    pub fn multiplicity(&self, f: &Field, root: P1) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let mut cur = self.clone();
        let mut m = 0;
        while cur.degree() > 0 {
            match cur.deflate(f, root) {
                Some(q) => {
                    cur = q;
                    m += 1;
                }
                None => break,
            }
        }
        m
    }

    /// Dehomogenisation at `t = 1`, as a polynomial in `s` (low degree first).
    fn affine(&self) -> poly::Poly {
        let d = self.degree();
        let mut v: poly::Poly = (0..=d).map(|k| self.0[d - k]).collect();
        poly::trim(&mut v);
        v
    }

    /// Roots on `P^1` over the field, with multiplicities. Panics on the zero form.
    pub fn roots(&self, f: &Field) -> Vec<(P1, usize)> {
        assert!(!self.is_zero(), "roots of the zero binary form");
        let g = self.affine();
        let dg = poly::degree(&g).unwrap_or(0);
        let mut out: Vec<(P1, usize)> = if dg > 0 {
            poly::roots_with_multiplicity(f, &g)
                .into_iter()
                .map(|(r, m)| ((r, Fe::ONE), m))
                .collect()
        } else {
            Vec::new()
        };
        let at_infinity = self.degree() - dg;
        if at_infinity > 0 {
            out.push(((Fe::ONE, Fe::ZERO), at_infinity));
        }
        out
    }

    /// Number of roots over the field counted with multiplicity.
    pub fn rational_root_count(&self, f: &Field) -> usize {
        self.roots(f).iter().map(|(_, m)| m).sum()
    }

    /// Degree of the gcd of two binary forms (field-independent).
    pub fn gcd_degree(&self, f: &Field, other: &BinaryForm) -> usize {
        assert!(!(self.is_zero() && other.is_zero()), "gcd of two zero forms");
        if self.is_zero() {
            return other.degree();
        }
        if other.is_zero() {
            return self.degree();
        }
        let ga = self.affine();
        let gb = other.affine();
        let g = poly::gcd(f, &ga, &gb);
        let finite = poly::degree(&g).unwrap_or(0);
        let inf_a = self.degree() - poly::degree(&ga).unwrap_or(0);
        let inf_b = other.degree() - poly::degree(&gb).unwrap_or(0);
        finite + inf_a.min(inf_b)
    }

    pub fn map(&self, e: &super::field::Embedding) -> BinaryForm {
        BinaryForm(self.0.iter().map(|&c| e.map(c)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::field;

    #[test]
    fn roots_include_infinity() {
        let f = field(7, 1).unwrap();
        // s t^2 (s - 2t): t^2 vanishes twice at (1:0)
        let a = BinaryForm::linear(Fe::ONE, Fe::ZERO); // s
        let b = BinaryForm::linear(Fe::ZERO, Fe::ONE); // t
        let c = BinaryForm::linear(Fe::ONE, f.from_int(-2)); // s - 2t
        let g = a.mul(&f, &b).mul(&f, &b).mul(&f, &c);
        let mut r = g.roots(&f);
        r.sort();
        assert_eq!(
            r,
            vec![((Fe::ZERO, Fe::ONE), 1), ((Fe::ONE, Fe::ZERO), 2), ((Fe(2), Fe::ONE), 1)]
        );
        assert_eq!(g.multiplicity(&f, (Fe::ZERO, Fe::ONE)), 1);
        assert_eq!(g.multiplicity(&f, (Fe::ONE, Fe::ZERO)), 2);
    }

    #[test]
    fn deflation_and_gcd_degree() {
        let f = field(5, 1).unwrap();
        let l1 = BinaryForm::linear(Fe(1), Fe(3));
        let l2 = BinaryForm::linear(Fe(0), Fe(1));
        let l3 = BinaryForm::linear(Fe(1), Fe(1));
        let g = l1.mul(&f, &l2).mul(&f, &l3);
        let h = l1.mul(&f, &l2).mul(&f, &l2);
        assert_eq!(g.gcd_degree(&f, &h), 2);
        let q = g.div_linear(&f, Fe(1), Fe(1)).unwrap();
        assert_eq!(q, l1.mul(&f, &l2));
        assert!(l1.div_linear(&f, Fe(1), Fe(1)).is_none());
    }
}
