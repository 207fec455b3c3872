//! Residual intersections of planes with `C`.
//!
//! A plane `h·x = 0` with `h0 h3 - h1 h2 != 0` meets `Q` in a smooth conic,
//! parametrised by `(u:v) -> (s:t) = (-(h2 u + h3 v) : h0 u + h1 v)`. Its
//! intersection with `C` is then the sextic `f(s(u,v), t(u,v); u, v)`.

use super::jets::divisor_rows;
use super::ruling::SymPoint;
use super::{CanonicalCurve, CurveError, CurvePoint, CurveView};
use crate::algebra::binary::{normalize_p1, BinaryForm, P1};
use crate::algebra::field::{embedding, Fe, Field};
use crate::algebra::linalg;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ResidualError {
    #[error("the points do not determine a unique plane")]
    Collinear,
    #[error("the plane is tangent to Q")]
    SingularConic,
    #[error("no plane contains the divisor")]
    NotOnTrace,
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// The three further points cut by the plane through `p + q + a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneResidual {
    /// Degree of the splitting field of the residual cubic over the field of the input.
    pub ext: u32,
    /// Degree over `F_q` of the field holding `points`.
    pub view_m: u32,
    /// With multiplicity.
    pub points: Vec<CurvePoint>,
    /// The plane, over the field of the input.
    pub plane: [Fe; 4],
}

struct Conic {
    s: BinaryForm,
    t: BinaryForm,
}

impl Conic {
    fn new(f: &Field, h: &[Fe; 4]) -> Result<Conic, ResidualError> {
        if f.sub(f.mul(h[0], h[3]), f.mul(h[1], h[2])).is_zero() {
            return Err(ResidualError::SingularConic);
        }
        Ok(Conic { s: BinaryForm::linear(f.neg(h[2]), f.neg(h[3])), t: BinaryForm::linear(h[0], h[1]) })
    }

    fn st(&self, f: &Field, uv: P1) -> P1 {
        normalize_p1(f, (self.s.eval(f, uv), self.t.eval(f, uv)))
    }

    fn sextic(&self, f: &Field, bic: &[[Fe; 4]; 4]) -> BinaryForm {
        let u = BinaryForm::linear(Fe::ONE, Fe::ZERO);
        let v = BinaryForm::linear(Fe::ZERO, Fe::ONE);
        let mut out = BinaryForm::zero(6);
        for (i, row) in bic.iter().enumerate() {
            let st = self.s.pow(f, 3 - i).mul(f, &self.t.pow(f, i));
            for (j, &c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let uv = u.pow(f, 3 - j).mul(f, &v.pow(f, j));
                out = out.add(f, &st.mul(f, &uv).scale(f, c));
            }
        }
        out
    }
}

/// The unique plane containing the divisor `pts`, as a linear form.
fn plane_through(view: &CurveView, pts: &[CurvePoint], missing: ResidualError) -> Result<[Fe; 4], ResidualError> {
    let f = &*view.field;
    for x in pts {
        if !view.contains(&x.coords(f)) {
            return Err(CurveError::NotOnCurve.into());
        }
    }
    let rows: Vec<Vec<Fe>> = divisor_rows(view, pts).iter().map(|r| r.to_vec()).collect();
    let k = linalg::kernel(f, &rows, 4);
    match k.len() {
        0 => Err(missing),
        1 => Ok(std::array::from_fn(|i| k[0][i])),
        _ => Err(ResidualError::Collinear),
    }
}

/// Residual form after removing `pts` from the plane section.
fn deflated(view: &CurveView, conic: &Conic, pts: &[CurvePoint]) -> Result<BinaryForm, ResidualError> {
    let f = &*view.field;
    let mut g = conic.sextic(f, &view.bic);
    for x in pts {
        g = g.deflate(f, x.uv).ok_or(ResidualError::NotOnTrace)?;
    }
    Ok(g)
}

/// Split `g` over the smallest extension `view(m e)`, `e <= max_ext`.
fn split_over(
    curve: &CanonicalCurve,
    view: &CurveView,
    conic: &Conic,
    g: &BinaryForm,
    max_ext: u32,
) -> (u32, u32, Vec<CurvePoint>) {
    let deg = g.degree();
    for e in 1..=max_ext {
        let big = curve.view(view.m * e);
        let emb = embedding(&view.field, &big.field).expect("nested fields");
        let bf = &*big.field;
        let g2 = g.map(&emb);
        let roots = g2.roots(bf);
        if roots.iter().map(|r| r.1).sum::<usize>() < deg {
            continue;
        }
        let c2 = Conic { s: conic.s.map(&emb), t: conic.t.map(&emb) };
        let pts = roots
            .iter()
            .flat_map(|&(uv, mult)| std::iter::repeat_n(CurvePoint { st: c2.st(bf, uv), uv }, mult))
            .collect();
        return (e, big.m, pts);
    }
    unreachable!("a form of degree {deg} splits over an extension of degree {max_ext}")
}

/// Residual divisor of the plane through `p + q + a`.
pub fn plane_residual(
    curve: &CanonicalCurve,
    view: &CurveView,
    p: &CurvePoint,
    q: &CurvePoint,
    a: &CurvePoint,
) -> Result<PlaneResidual, ResidualError> {
    let pts = [*p, *q, *a];
    let h = plane_through(view, &pts, ResidualError::Collinear)?;
    let conic = Conic::new(&view.field, &h)?;
    let g = deflated(view, &conic, &pts)?;
    let (ext, view_m, points) = split_over(curve, view, &conic, &g, 3);
    Ok(PlaneResidual { ext, view_m, points, plane: h })
}

/// The residual pair of `p + q + a + b` in its plane: the involution of
/// `D_{p+q}` exchanging `a + b` with the complementary pair.
pub fn residual_involution(
    curve: &CanonicalCurve,
    view: &CurveView,
    p: &CurvePoint,
    q: &CurvePoint,
    a: &CurvePoint,
    b: &CurvePoint,
) -> Result<SymPoint, ResidualError> {
    let pts = [*p, *q, *a, *b];
    let h = plane_through(view, &pts, ResidualError::NotOnTrace)?;
    let conic = Conic::new(&view.field, &h)?;
    let g = deflated(view, &conic, &pts)?;
    let (_, m, r) = split_over(curve, view, &conic, &g, 2);
    Ok(SymPoint::new(m, view.m, r[0], r[1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{is_on_trace, search};
    use crate::exec::Exec;

    #[test]
    fn residual_points_lie_on_plane_and_curve() {
        let hit = search(11, 1, 11, 100, 3, Exec::Sequential).unwrap();
        let c = &hit.curve;
        let v = c.view(1);
        let pts = v.points().to_vec();
        let mut done = 0;
        for (i, p) in pts.iter().enumerate() {
            for q in &pts[i + 1..] {
                for a in pts.iter().filter(|a| *a != p && *a != q).take(3) {
                    let r = match plane_residual(c, &v, p, q, a) {
                        Ok(r) => r,
                        Err(ResidualError::SingularConic) => continue,
                        Err(ResidualError::Collinear) => {
                            // only three points on a common line of Q
                            let rows = [p.coords(&v.field), q.coords(&v.field), a.coords(&v.field)];
                            assert_eq!(linalg::rank_of(&v.field, &rows), 2);
                            continue;
                        }
                        Err(e) => panic!("{e}"),
                    };
                    let big = c.view(r.view_m);
                    let e = embedding(&v.field, &big.field).unwrap();
                    let bf = &*big.field;
                    let h: [Fe; 4] = r.plane.map(|x| e.map(x));
                    assert_eq!(r.points.len(), 3);
                    for x in &r.points {
                        let xc = x.coords(bf);
                        assert!(big.contains(&xc));
                        assert!(bf.sum((0..4).map(|k| bf.mul(h[k], xc[k]))).is_zero());
                    }
                    // Frobenius permutes a residual defined over F_q
                    let mut conj: Vec<_> = r.points.iter().map(|x| x.frobenius(bf, c.base().degree())).collect();
                    let mut orig = r.points.clone();
                    conj.sort();
                    orig.sort();
                    assert_eq!(conj, orig);
                    done += 1;
                }
            }
        }
        assert!(done > 50);
    }

    #[test]
    fn involution_is_an_involution() {
        let hit = search(7, 1, 12, 100, 3, Exec::Sequential).unwrap();
        let c = &hit.curve;
        let v = c.view(1);
        let pts = v.points().to_vec();
        let (p, q) = (pts[0], pts[1]);
        let mut checked = 0;
        for a in &pts[2..] {
            let Ok(res) = plane_residual(c, &v, &p, &q, a) else { continue };
            if res.ext != 1 {
                continue;
            }
            let b = res.points.iter().find(|x| *x != a).copied().unwrap_or(*a);
            assert!(is_on_trace(&v, &p, &q, a, &b).unwrap());
            let s = residual_involution(c, &v, &p, &q, a, &b).unwrap();
            assert_eq!(s.field_m, 1);
            let back = residual_involution(c, &v, &p, &q, &s.a, &s.b).unwrap();
            assert_eq!(back, SymPoint::new(1, 1, *a, b));
            checked += 1;
        }
        assert!(checked > 0);
        // a generic pair is not on the trace
        let off = pts[2..].iter().flat_map(|a| pts[2..].iter().map(move |b| (*a, *b)))
            .find(|(a, b)| a < b && !is_on_trace(&v, &p, &q, a, b).unwrap())
            .unwrap();
        assert_eq!(residual_involution(c, &v, &p, &q, &off.0, &off.1), Err(ResidualError::NotOnTrace));
    }
}
