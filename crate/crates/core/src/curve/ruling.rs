//! The two rulings of the quadric, the maps `γ_i : C -> Sym²C`, and
//! field-independent keys for unordered point pairs.

use serde::{Deserialize, Serialize};

use super::{CanonicalCurve, CurveError, CurvePoint, CurveView};
use crate::algebra::binary::{BinaryForm, P1};
use crate::algebra::field::{embedding, Embedding, Fe, Field};
use crate::algebra::Line;

/// An unordered pair `{a, b}` of curve points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SymPoint {
    /// Degree over `F_q` of the field holding the coordinates of `a` and `b`.
    pub field_m: u32,
    /// Degree over `F_q` of the smallest field over which the pair is Galois-stable.
    pub stable_m: u32,
    pub a: CurvePoint,
    pub b: CurvePoint,
}

impl SymPoint {
    pub fn new(field_m: u32, stable_m: u32, a: CurvePoint, b: CurvePoint) -> SymPoint {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        SymPoint { field_m, stable_m, a, b }
    }

    /// Both points individually defined over the stability field.
    pub fn is_split(&self) -> bool {
        self.field_m == self.stable_m
    }

    pub fn key(&self, view: &CurveView) -> SymKey {
        assert_eq!(view.m, self.field_m);
        let f = &*view.field;
        sym_key(f, &self.a.coords(f), &self.b.coords(f))
    }

    pub fn lift(&self, e: &Embedding, field_m: u32) -> SymPoint {
        SymPoint::new(field_m, self.stable_m, self.a.map(e), self.b.map(e))
    }
}

/// Projective class of the quadratic form `(a·y)(b·y)`, which determines the
/// unordered pair `{[a], [b]}`. Coordinates in the order
/// `y0², y0y1, y0y2, y0y3, y1², y1y2, y1y3, y2², y2y3, y3²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SymKey(pub [u32; 10]);

fn sym_product(f: &Field, a: &[Fe; 4], b: &[Fe; 4]) -> [Fe; 10] {
    let mut out = [Fe::ZERO; 10];
    let mut k = 0;
    for i in 0..4 {
        for j in i..4 {
            out[k] = if i == j {
                f.mul(a[i], b[i])
            } else {
                f.add(f.mul(a[i], b[j]), f.mul(a[j], b[i]))
            };
            k += 1;
        }
    }
    out
}

fn canonical_key(f: &Field, v: [Fe; 10]) -> SymKey {
    let lead = *v.iter().find(|c| !c.is_zero()).expect("nonzero pair key");
    let inv = f.inv(lead).unwrap();
    SymKey(v.map(|c| f.mul(c, inv).0))
}

pub fn sym_key(f: &Field, a: &[Fe; 4], b: &[Fe; 4]) -> SymKey {
    canonical_key(f, sym_product(f, a, b))
}

impl SymKey {
    pub fn map(&self, e: &Embedding) -> SymKey {
        SymKey(self.0.map(|c| e.map(Fe(c)).0))
    }
}

/// Key of the pair cut on the line `s P + t R` by `c0 s² + c1 st + c2 t²`,
/// computed without splitting the quadratic.
fn residual_key(f: &Field, p: &[Fe; 4], r: &[Fe; 4], quad: &BinaryForm) -> SymKey {
    let [c0, c1, c2] = [quad.0[0], quad.0[1], quad.0[2]];
    let pp = sym_product(f, p, p);
    let pr = sym_product(f, p, r);
    let rr = sym_product(f, r, r);
    let v: [Fe; 10] = std::array::from_fn(|k| {
        f.add(f.sub(f.mul(c2, pp[k]), f.mul(c1, pr[k])), f.mul(c0, rr[k]))
    });
    canonical_key(f, v)
}

/// Basis `(P, R)` of the ruling-`i` line through `pt`, and the parameter of `pt` on it.
fn ruling_basis(i: u8, pt: &CurvePoint) -> ([Fe; 4], [Fe; 4], P1) {
    let z = Fe::ZERO;
    match i {
        1 => {
            let (u, v) = pt.uv;
            ([u, v, z, z], [z, z, u, v], pt.st)
        }
        2 => {
            let (s, t) = pt.st;
            ([s, z, t, z], [z, s, z, t], pt.uv)
        }
        _ => panic!("ruling index must be 1 or 2"),
    }
}

/// Restriction of `F` to the ruling-`i` line through `pt`, in that line's parameter.
fn ruling_cubic(view: &CurveView, i: u8, pt: &CurvePoint) -> BinaryForm {
    match i {
        1 => view.ruling1_form(pt.uv),
        _ => view.fibre_form(pt.st),
    }
}

/// The two lines of `Q` through a point: ruling 1 (constant `(u:v)`), ruling 2 (constant `(s:t)`).
pub fn ruling_lines(view: &CurveView, pt: &CurvePoint) -> Result<(Line<4>, Line<4>), CurveError> {
    let f = &*view.field;
    if !view.q.eval(&pt.coords(f)).is_zero() {
        return Err(CurveError::NotOnCurve);
    }
    let (p1, r1, _) = ruling_basis(1, pt);
    let (p2, r2, _) = ruling_basis(2, pt);
    Ok((Line::through(f, &p1, &r1).unwrap(), Line::through(f, &p2, &r2).unwrap()))
}

fn residual_quadratic(view: &CurveView, i: u8, pt: &CurvePoint) -> Result<BinaryForm, CurveError> {
    let f = &*view.field;
    if !view.contains(&pt.coords(f)) {
        return Err(CurveError::NotOnCurve);
    }
    let cubic = ruling_cubic(view, i, pt);
    let (_, _, param) = ruling_basis(i, pt);
    // a smooth (3,3) curve contains no ruling line, so the cubic is nonzero
    cubic.deflate(f, param).ok_or(CurveError::NotOnCurve)
}

/// Key of `γ_i(pt)`, computed in the field of `pt`.
pub fn gamma_key(view: &CurveView, i: u8, pt: &CurvePoint) -> Result<SymKey, CurveError> {
    let quad = residual_quadratic(view, i, pt)?;
    let (p, r, _) = ruling_basis(i, pt);
    Ok(residual_key(&view.field, &p, &r, &quad))
}

/// `γ_i(pt)`: the residual pair of the ruling-`i` line through `pt`, realised
/// over the field of `pt` or its quadratic extension.
pub fn gamma(curve: &CanonicalCurve, view: &CurveView, i: u8, pt: &CurvePoint) -> Result<SymPoint, CurveError> {
    let quad = residual_quadratic(view, i, pt)?;
    let roots = quad.roots(&view.field);
    let total: usize = roots.iter().map(|r| r.1).sum();
    let (target, e, quad, pt) = if total == 2 {
        (None, None, quad, *pt)
    } else {
        let big = curve.view(2 * view.m);
        let e = embedding(&view.field, &big.field).unwrap();
        let q2 = quad.map(&e);
        let p2 = pt.map(&e);
        (Some(big), Some(e), q2, p2)
    };
    let (field_m, fld) = match &target {
        Some(v) => (v.m, v.field.clone()),
        None => (view.m, view.field.clone()),
    };
    let _ = e;
    let roots = quad.roots(&fld);
    let params: Vec<P1> = roots.iter().flat_map(|&(r, m)| std::iter::repeat_n(r, m)).collect();
    assert_eq!(params.len(), 2, "quadratic splits over the quadratic extension");
    let mk = |param: P1| match i {
        1 => CurvePoint { st: param, uv: pt.uv },
        _ => CurvePoint { st: pt.st, uv: param },
    };
    Ok(SymPoint::new(field_m, view.m, mk(params[0]), mk(params[1])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::search;
    use crate::exec::Exec;
    use std::collections::HashSet;

    #[test]
    fn ruling_line_properties() {
        let hit = search(7, 1, 2, 100, 2, Exec::Sequential).unwrap();
        let v = hit.curve.view(1);
        let f = &*v.field;
        for pt in v.points() {
            let (l1, l2) = ruling_lines(&v, pt).unwrap();
            for l in [l1, l2] {
                let [a, b] = *l.basis();
                assert!(v.q.restrict_to_line(&a, &b).is_zero());
                assert_eq!(v.f.restrict_to_line(&a, &b).degree(), 3);
                assert!(!v.f.restrict_to_line(&a, &b).is_zero());
                assert!(l.contains(f, &pt.coords(f)));
            }
            // the two lines meet only at the point
            let common: Vec<_> = l1.points(f).filter(|x| l2.contains(f, &x.0)).collect();
            assert_eq!(common, vec![pt.proj(f)]);
        }
    }

    #[test]
    fn gamma_completes_the_ruling_divisor() {
        let hit = search(5, 1, 7, 100, 2, Exec::Sequential).unwrap();
        let c = &hit.curve;
        let v = c.view(1);
        for pt in v.points() {
            for i in [1u8, 2] {
                let g = gamma(c, &v, i, pt).unwrap();
                let big = c.view(g.field_m);
                let e = embedding(&v.field, &big.field).unwrap();
                let p = pt.map(&e);
                let bf = &*big.field;
                // p, a, b are the three points of the ruling line on C
                let (l1, l2) = ruling_lines(&big, &p).unwrap();
                let line = if i == 1 { l1 } else { l2 };
                for x in [g.a, g.b] {
                    assert!(big.contains(&x.coords(bf)));
                    assert!(line.contains(bf, &x.coords(bf)));
                }
                // the key computed without splitting agrees
                assert_eq!(g.key(&big), gamma_key(&v, i, pt).unwrap().map(&e));
            }
        }
    }

    #[test]
    fn keys_distinguish_pairs() {
        let hit = search(3, 2, 7, 100, 2, Exec::Sequential).unwrap();
        let v = hit.curve.view(1);
        let f = &*v.field;
        let pts = v.points();
        let mut seen = HashSet::new();
        for (i, a) in pts.iter().enumerate() {
            for b in &pts[i..] {
                assert!(seen.insert(sym_key(f, &a.coords(f), &b.coords(f))));
                assert_eq!(sym_key(f, &a.coords(f), &b.coords(f)), sym_key(f, &b.coords(f), &a.coords(f)));
            }
        }
    }
}
