//! Where the trace curves `D_{p+q}` meet the glued curves `C_i = γ_i(C)`.

use serde::{Deserialize, Serialize};

use super::jets::is_on_trace;
use super::ruling::{gamma, gamma_key};
use super::{CanonicalCurve, CurveError, CurvePoint};
use crate::algebra::field::embedding;
use crate::exec::Exec;

/// Overlap of `γ_1(C)` and `γ_2(C)` among pairs coming from `C(F_{q^m})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisjointnessRow {
    pub m: u32,
    pub points: usize,
    pub overlaps: usize,
}

/// For each `m <= max_m`, count keys shared by `γ_1(C(F_{q^m}))` and `γ_2(C(F_{q^m}))`.
pub fn gamma_overlaps(curve: &CanonicalCurve, max_m: u32, exec: Exec) -> Result<Vec<DisjointnessRow>, CurveError> {
    let mut rows = Vec::new();
    for m in 1..=max_m {
        let v = curve.view(m);
        let pts = v.points_with(exec);
        let keys = |i: u8| -> Result<std::collections::HashSet<_>, CurveError> {
            exec.map_slice(pts, |p| gamma_key(&v, i, p)).into_iter().collect()
        };
        let k1 = keys(1)?;
        let k2 = keys(2)?;
        rows.push(DisjointnessRow { m, points: pts.len(), overlaps: k1.intersection(&k2).count() });
    }
    Ok(rows)
}

/// The points `r ∈ C(F_{q^m})` with `γ_i(r) ∈ D_{p+q}`, for `p, q ∈ C(F_q)`.
pub fn trace_hits(
    curve: &CanonicalCurve,
    m: u32,
    p: &CurvePoint,
    q: &CurvePoint,
    i: u8,
    exec: Exec,
) -> Result<Vec<CurvePoint>, CurveError> {
    let base = curve.view(1);
    let v = curve.view(m);
    let hits = exec.map_slice(v.points_with(exec), |r| -> Result<Option<CurvePoint>, CurveError> {
        let g = gamma(curve, &v, i, r)?;
        let w = curve.view(g.field_m);
        let e = embedding(&base.field, &w.field)?;
        Ok(is_on_trace(&w, &p.map(&e), &q.map(&e), &g.a, &g.b)?.then_some(*r))
    });
    let mut out = Vec::new();
    for h in hits {
        out.extend(h?);
    }
    Ok(out)
}

/// `D_{p+q}` meets `C_1` and `C_2` exactly at the images of `p` and `q`,
/// among points defined over `F_{q^m}`.
pub fn complementary(curve: &CanonicalCurve, m: u32, p: &CurvePoint, q: &CurvePoint, exec: Exec) -> Result<bool, CurveError> {
    let e = embedding(curve.base(), &curve.view(m).field)?;
    let mut expect = vec![p.map(&e), q.map(&e)];
    expect.sort();
    for i in [1, 2] {
        let mut hits = trace_hits(curve, m, p, q, i, exec)?;
        hits.sort();
        if hits != expect {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::search;

    #[test]
    fn images_are_disjoint() {
        let hit = search(5, 1, 21, 100, 3, Exec::Sequential).unwrap();
        for row in gamma_overlaps(&hit.curve, 3, Exec::Parallel).unwrap() {
            assert_eq!(row.overlaps, 0, "{row:?}");
        }
    }

    #[test]
    fn trace_meets_glued_curves_at_complementary_points() {
        let hit = search(7, 1, 22, 100, 3, Exec::Sequential).unwrap();
        let c = &hit.curve;
        let pts = c.view(1).points().to_vec();
        let (p, q) = (pts[0], pts[pts.len() - 1]);
        assert!(complementary(c, 2, &p, &q, Exec::Parallel).unwrap());
    }
}
