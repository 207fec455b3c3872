//! Local power-series branches of `C` and the linear conditions a point
//! divisor imposes on planes.

use std::collections::BTreeMap;

use super::{CurveError, CurvePoint, CurveView};
use crate::algebra::field::{Fe, Field};
use crate::algebra::series::{constant, mul as series_mul, Series};
use crate::algebra::{linalg, Line};

/// `c + ε`
fn shifted(c: Fe, n: usize) -> Series {
    let mut r = constant(c, n);
    if n > 1 {
        r[1] = Fe::ONE;
    }
    r
}

/// One affine chart of `P¹ × P¹` around a point: the bicubic as `h(x, y)`.
struct Chart {
    /// `h[a][b]` multiplies `x^a y^b`.
    h: [[Fe; 4]; 4],
    x0: Fe,
    y0: Fe,
    /// `(s, t)` is `(x, 1)` when true, `(1, x)` otherwise; likewise `(u, v)`.
    x_first: bool,
    y_first: bool,
}

impl Chart {
    fn new(view: &CurveView, pt: &CurvePoint) -> Chart {
        // normalised P¹ points are (x:1) or (1:0)
        let x_first = !pt.st.1.is_zero();
        let y_first = !pt.uv.1.is_zero();
        let x0 = if x_first { pt.st.0 } else { Fe::ZERO };
        let y0 = if y_first { pt.uv.0 } else { Fe::ZERO };
        let mut h = [[Fe::ZERO; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                // s^{3-i} t^i: with s = x, t = 1 the x-degree is 3-i; with s = 1, t = x it is i
                let a = if x_first { 3 - i } else { i };
                let b = if y_first { 3 - j } else { j };
                h[a][b] = view.bic[i][j];
            }
        }
        Chart { h, x0, y0, x_first, y_first }
    }

    fn eval_series(&self, f: &Field, x: &[Fe], y: &[Fe], n: usize) -> Series {
        let mut xp = vec![constant(Fe::ONE, n)];
        let mut yp = vec![constant(Fe::ONE, n)];
        for k in 1..4 {
            xp.push(series_mul(f, &xp[k - 1], x, n));
            yp.push(series_mul(f, &yp[k - 1], y, n));
        }
        let mut r = vec![Fe::ZERO; n];
        for a in 0..4 {
            for b in 0..4 {
                let c = self.h[a][b];
                if c.is_zero() {
                    continue;
                }
                let term = series_mul(f, &xp[a], &yp[b], n);
                for (ri, ti) in r.iter_mut().zip(term) {
                    *ri = f.add(*ri, f.mul(c, ti));
                }
            }
        }
        r
    }

    fn partials(&self, f: &Field) -> (Fe, Fe) {
        let mut hx = Fe::ZERO;
        let mut hy = Fe::ZERO;
        for a in 0..4 {
            for b in 0..4 {
                let c = self.h[a][b];
                if c.is_zero() {
                    continue;
                }
                if a > 0 {
                    let t = f.mul(f.mul(c, f.from_int(a as i64)), f.mul(f.pow(self.x0, a as u64 - 1), f.pow(self.y0, b as u64)));
                    hx = f.add(hx, t);
                }
                if b > 0 {
                    let t = f.mul(f.mul(c, f.from_int(b as i64)), f.mul(f.pow(self.x0, a as u64), f.pow(self.y0, b as u64 - 1)));
                    hy = f.add(hy, t);
                }
            }
        }
        (hx, hy)
    }

    /// Branch `(x(ε), y(ε))` through the point, solved to order `n`.
    fn branch(&self, f: &Field, n: usize) -> Option<(Series, Series)> {
        let (hx, hy) = self.partials(f);
        // solve for the dependent coordinate one coefficient at a time
        let solve = |dep_is_y: bool, d: Fe| {
            let inv = f.inv(d).unwrap();
            let free = shifted(if dep_is_y { self.x0 } else { self.y0 }, n);
            let mut dep = constant(if dep_is_y { self.y0 } else { self.x0 }, n);
            for k in 1..n {
                let val = if dep_is_y {
                    self.eval_series(f, &free, &dep, k + 1)
                } else {
                    self.eval_series(f, &dep, &free, k + 1)
                };
                dep[k] = f.neg(f.mul(val[k], inv));
            }
            if dep_is_y {
                (free, dep)
            } else {
                (dep, free)
            }
        };
        if !hy.is_zero() {
            Some(solve(true, hy))
        } else if !hx.is_zero() {
            Some(solve(false, hx))
        } else {
            None
        }
    }
}

/// The first `n` Taylor coefficient vectors of a local branch of `C` at `pt`,
/// as points of `P³` coordinates. Row `k` spans, with the earlier rows, the
/// `k`-th osculating space. Panics at a singular point.
pub fn jet_rows(view: &CurveView, pt: &CurvePoint, n: usize) -> Vec<[Fe; 4]> {
    let f = &*view.field;
    let chart = Chart::new(view, pt);
    let (x, y) = chart.branch(f, n.max(1)).expect("jets at a singular point");
    let one = constant(Fe::ONE, n.max(1));
    let (s, t) = if chart.x_first { (x, one.clone()) } else { (one.clone(), x) };
    let (u, v) = if chart.y_first { (y, one) } else { (one, y) };
    let comps = [
        series_mul(f, &s, &u, n),
        series_mul(f, &s, &v, n),
        series_mul(f, &t, &u, n),
        series_mul(f, &t, &v, n),
    ];
    (0..n).map(|k| std::array::from_fn(|i| comps[i][k])).collect()
}

/// Conditions on a plane `H` for `H·C >= Σ m_i p_i`: jets of order `m_i` at each point.
pub fn divisor_rows(view: &CurveView, pts: &[CurvePoint]) -> Vec<[Fe; 4]> {
    let mut mult: BTreeMap<CurvePoint, usize> = BTreeMap::new();
    for p in pts {
        *mult.entry(*p).or_default() += 1;
    }
    mult.iter().flat_map(|(p, &m)| jet_rows(view, p, m)).collect()
}

/// `a + b ∈ D_{p+q}`: some plane contains the divisor `p + q + a + b`.
///
/// Coincident points are handled by osculating jets, so `(p, q, p, q)` asks
/// whether the tangent lines at `p` and `q` are coplanar.
pub fn is_on_trace(
    view: &CurveView,
    p: &CurvePoint,
    q: &CurvePoint,
    a: &CurvePoint,
    b: &CurvePoint,
) -> Result<bool, CurveError> {
    let f = &*view.field;
    for x in [p, q, a, b] {
        if !view.contains(&x.coords(f)) {
            return Err(CurveError::NotOnCurve);
        }
    }
    let rows = divisor_rows(view, &[*p, *q, *a, *b]);
    Ok(linalg::rank_of(f, &rows) <= 3)
}

/// Tangent line at a smooth point, as the kernel of the Jacobian of `(Q, F)`.
pub fn tangent_line(view: &CurveView, pt: &CurvePoint) -> Line<4> {
    let f = &*view.field;
    let jac = view.jacobian(&pt.coords(f));
    let rows: Vec<Vec<Fe>> = jac.iter().map(|r| r.to_vec()).collect();
    let k = linalg::kernel(f, &rows, 4);
    assert_eq!(k.len(), 2, "tangent line at a singular point");
    let a: [Fe; 4] = std::array::from_fn(|i| k[0][i]);
    let b: [Fe; 4] = std::array::from_fn(|i| k[1][i]);
    Line::through(f, &a, &b).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::search;
    use crate::exec::Exec;

    #[test]
    fn jets_lie_on_the_tangent_line() {
        let hits = [search(7, 1, 3, 100, 2, Exec::Sequential).unwrap(), search(2, 3, 3, 100, 2, Exec::Sequential).unwrap()];
        for hit in hits {
            let c = &hit.curve;
            for m in 1..=2 {
                let v = c.view(m);
                for pt in v.points() {
                    let rows = jet_rows(&v, pt, 3);
                    assert_eq!(crate::algebra::ProjPoint::new(&v.field, rows[0]), Some(pt.proj(&v.field)));
                    let tl = tangent_line(&v, pt);
                    assert!(tl.contains(&v.field, &rows[0]));
                    // the first-order jet is zero or on the tangent line
                    if rows[1].iter().any(|c| !c.is_zero()) {
                        assert!(tl.contains(&v.field, &rows[1]));
                    }
                    assert_eq!(linalg::rank_of(&v.field, &rows[..2]), 2);
                }
            }
        }
    }

    #[test]
    fn branch_satisfies_curve_equations() {
        let c = search(7, 1, 8, 100, 2, Exec::Sequential).unwrap().curve;
        let v = c.view(2);
        let f = &*v.field;
        for pt in v.points().iter().take(40) {
            let chart = Chart::new(&v, pt);
            let n = 6;
            let (x, y) = chart.branch(f, n).unwrap();
            assert!(chart.eval_series(f, &x, &y, n).iter().all(|c| c.is_zero()));
        }
    }

    #[test]
    fn trace_examples() {
        let hit = search(7, 1, 5, 100, 2, Exec::Sequential).unwrap();
        let v = hit.curve.view(1);
        let pts = v.points();
        // any plane through three points contains a fourth only in special position,
        // but a point repeated with its partners is always coplanar
        let (p, q) = (pts[0], pts[1]);
        assert!(is_on_trace(&v, &p, &q, &p, &q).is_ok());
        assert!(is_on_trace(&v, &p, &q, &q, &p).unwrap() == is_on_trace(&v, &q, &p, &p, &q).unwrap());
        let mut generic = 0;
        for a in pts.iter().skip(2) {
            for b in pts.iter().skip(2) {
                if a < b && !is_on_trace(&v, &p, &q, a, b).unwrap() {
                    generic += 1;
                }
            }
        }
        assert!(generic > 0);
        let off = CurvePoint { st: (Fe(1), Fe(1)), uv: (Fe(2), Fe(1)) };
        if !v.contains(&off.coords(&v.field)) {
            assert_eq!(is_on_trace(&v, &p, &q, &off, &p), Err(CurveError::NotOnCurve));
        }
    }
}
