//! Exhaustive enumeration of the `F_q`-lines of `X`, compared with the
//! glued symmetric square.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{is_line_on, rational_fano_point, CubicThreefold, FanoPoint, NODE};
use crate::algebra::field::Fe;
use crate::algebra::{proj, Line, ProjPoint};
use crate::curve::{CanonicalCurve, CurvePoint, SymPoint};
use crate::exec::Exec;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    pub q: u64,
    pub n1: u64,
    pub n2: u64,
    /// `#X(F_q)`.
    pub x_points: usize,
    /// Distinct `F_q`-lines found by the exhaustive scan.
    pub total: usize,
    pub through_node: usize,
    pub chord_type: usize,
    /// `(N1² + N2)/2 - N1`.
    pub predicted_total: u64,
    /// `F_q`-points of `Sym²C`.
    pub sym2_points: u64,
    /// Every `F_q`-point of `Sym²C` maps to a scanned line, and every scanned line is hit.
    pub complete: bool,
    /// Off the glued curves, distinct pairs give distinct lines.
    pub injective_off_glueing: bool,
    /// Each node line is the image of exactly two pairs, `γ_1(r)` and `γ_2(r)`.
    pub node_lines_hit_twice: bool,
}

impl CensusReport {
    pub fn passes(&self) -> bool {
        self.total as u64 == self.predicted_total
            && self.through_node as u64 == self.n1
            && self.through_node + self.chord_type == self.total
            && self.complete
            && self.injective_off_glueing
            && self.node_lines_hit_twice
    }
}

/// Every Frobenius-stable pair of points of `C` over `F_q`: rational pairs
/// (with doubled points) and conjugate pairs over `F_{q²}`.
pub fn rational_sym_points(curve: &CanonicalCurve, exec: Exec) -> Vec<SymPoint> {
    let v1 = curve.view(1);
    let v2 = curve.view(2);
    let p1 = v1.points_with(exec);
    let mut out = Vec::new();
    for (i, a) in p1.iter().enumerate() {
        for b in &p1[i..] {
            out.push(SymPoint::new(1, 1, *a, *b));
        }
    }
    let f2 = &*v2.field;
    let k = curve.base().degree();
    for a in v2.points_with(exec) {
        let b = a.frobenius(f2, k);
        if *a < b {
            out.push(SymPoint::new(2, 1, *a, b));
        }
    }
    out
}

/// Lines of `X` defined over `F_q`, found by scanning pairs of `F_q`-points.
///
/// Every `F_q`-line carries `q + 1 >= 3` rational points, so it is spanned
/// by two of them and the scan is exhaustive.
fn scan_lines(x: &CubicThreefold, exec: Exec) -> (usize, BTreeSet<Line<5>>) {
    let f = x.curve().base();
    let g = x.equation();
    let pts: Vec<ProjPoint<5>> = proj::all_points::<5>(f).filter(|p| g.eval(&p.0).is_zero()).collect();
    let n = pts.len();
    let found = exec.flat_map_range(0..n as u64, |i| {
        let a = pts[i as usize].0;
        let mut local: BTreeSet<Line<5>> = BTreeSet::new();
        for b in &pts[i as usize + 1..] {
            let mid: [Fe; 5] = std::array::from_fn(|k| f.add(a[k], b.0[k]));
            if !g.eval(&mid).is_zero() {
                continue;
            }
            let line = Line::through(f, &a, &b.0).expect("distinct points");
            if local.contains(&line) {
                continue;
            }
            if is_line_on(g, &line) {
                local.insert(line);
            }
        }
        local.into_iter().collect::<Vec<_>>()
    });
    (n, found.into_iter().collect())
}

/// Census of lines on `X(F_q)`.
pub fn fano_census(x: &CubicThreefold, exec: Exec) -> CensusReport {
    let curve = x.curve();
    let f = curve.base();
    let n1 = curve.count_points(1, exec);
    let n2 = curve.count_points(2, exec);
    let (x_points, scanned) = scan_lines(x, exec);
    let through_node = scanned.iter().filter(|l| l.contains(f, &NODE)).count();

    let pairs = rational_sym_points(curve, exec);
    let images: Vec<Option<FanoPoint>> = exec.map_slice(&pairs, |s| rational_fano_point(curve, s));
    let mut chord_lines: BTreeMap<Line<5>, usize> = BTreeMap::new();
    let mut node_lines: BTreeMap<Line<5>, Vec<CurvePoint>> = BTreeMap::new();
    let mut descended = true;
    for img in &images {
        match img {
            Some(FanoPoint::Chord { line, .. }) => *chord_lines.entry(*line).or_default() += 1,
            Some(FanoPoint::Node { r, line }) => node_lines.entry(*line).or_default().push(*r),
            None => descended = false,
        }
    }
    let predicted: BTreeSet<Line<5>> = chord_lines.keys().chain(node_lines.keys()).copied().collect();
    let complete = descended && predicted == scanned && predicted.iter().all(|l| is_line_on(x.equation(), l));
    let injective = chord_lines.values().all(|&c| c == 1);
    let hit_twice = node_lines.len() as u64 == n1 && node_lines.values().all(|rs| rs.len() == 2 && rs[0] == rs[1]);

    CensusReport {
        q: curve.q_order(),
        n1,
        n2,
        x_points,
        total: scanned.len(),
        through_node,
        chord_type: scanned.len() - through_node,
        predicted_total: (n1 * n1 + n2) / 2 - n1,
        sym2_points: pairs.len() as u64,
        complete,
        injective_off_glueing: injective,
        node_lines_hit_twice: hit_twice,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::search;
    use crate::threefold::build;

    #[test]
    fn census_small_fields() {
        for (p, k, seed) in [(5, 1, 1), (2, 2, 2), (3, 1, 3), (7, 1, 9)] {
            let hit = search(p, k, seed, 100, 3, Exec::Sequential).unwrap();
            let x = build(&hit.curve).unwrap();
            let r = fano_census(&x, Exec::default());
            assert!(r.passes(), "{r:?}");
            assert_eq!(r.sym2_points, hit.curve.sym2_count(Exec::Sequential));
        }
    }

    #[test]
    fn parallel_and_sequential_census_agree() {
        let hit = search(5, 1, 5, 100, 2, Exec::Sequential).unwrap();
        let x = build(&hit.curve).unwrap();
        assert_eq!(fano_census(&x, Exec::Sequential), fano_census(&x, Exec::Parallel));
    }
}
