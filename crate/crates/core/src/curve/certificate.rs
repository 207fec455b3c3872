//! Certificate that the two trigonal pencils are not linearly equivalent.
//!
//! If `D1 ~ D2` then `2 D1 ~ D1 + D2 = K`, so some plane would cut twice a
//! ruling-1 divisor. For a divisor `D` on a ruling-1 line, the jets of order
//! `2 mult` at its points impose independent conditions on planes exactly
//! when no such plane exists.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::jets::jet_rows;
use super::{p1_points, CanonicalCurve, CurvePoint, CurveView};
use crate::algebra::binary::P1;
use crate::algebra::field::embedding;
use crate::algebra::linalg;

/// One ruling-1 line and the rank of the conditions `2D` imposes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct D1Trial {
    /// `(u:v)` as encodings in `F_q`.
    pub uv: [u32; 2],
    /// Splitting degree of the line section.
    pub ext: u32,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct D1Certificate {
    pub trials: Vec<D1Trial>,
    /// Some trial reached rank 4.
    pub nontrivial: bool,
}

/// Rank of the conditions for a plane to contain `2 Σ pts` (multiplicities doubled).
pub fn tangent_plane_rank(view: &CurveView, pts: &[CurvePoint]) -> usize {
    let mut mult = std::collections::BTreeMap::new();
    for p in pts {
        *mult.entry(*p).or_insert(0usize) += 1;
    }
    let rows: Vec<[_; 4]> = mult.iter().flat_map(|(p, &m)| jet_rows(view, p, 2 * m)).collect();
    linalg::rank_of(&view.field, &rows)
}

/// Rank of `2D` for the ruling-1 divisor over `(u:v)`.
fn trial(curve: &CanonicalCurve, uv: P1) -> D1Trial {
    let base = curve.view(1);
    let form = base.ruling1_form(uv);
    for e in 1..=3u32 {
        let big = curve.view(e);
        let emb = embedding(&base.field, &big.field).expect("nested fields");
        let bf = &*big.field;
        let roots = form.map(&emb).roots(bf);
        if roots.iter().map(|r| r.1).sum::<usize>() < 3 {
            continue;
        }
        let uv2 = (emb.map(uv.0), emb.map(uv.1));
        let pts: Vec<CurvePoint> = roots
            .iter()
            .flat_map(|&(st, m)| std::iter::repeat_n(CurvePoint { st, uv: uv2 }, m))
            .collect();
        return D1Trial { uv: [uv.0 .0, uv.1 .0], ext: e, rank: tangent_plane_rank(&big, &pts) };
    }
    unreachable!("binary cubics split over a cubic extension")
}

/// Run `trials` random ruling-1 lines over `F_q`.
pub fn d1_not_equiv_d2<R: Rng>(curve: &CanonicalCurve, trials: usize, rng: &mut R) -> D1Certificate {
    let lines: Vec<P1> = p1_points(curve.base()).collect();
    let trials: Vec<D1Trial> = (0..trials).map(|_| trial(curve, lines[rng.gen_range(0..lines.len())])).collect();
    let nontrivial = trials.iter().any(|t| t.rank == 4);
    D1Certificate { trials, nontrivial }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::search;
    use crate::exec::Exec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pencils_are_distinct() {
        for (p, k, seed) in [(5, 1, 1), (7, 1, 2), (3, 2, 3)] {
            let hit = search(p, k, seed, 100, 3, Exec::Sequential).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(9);
            let cert = d1_not_equiv_d2(&hit.curve, 6, &mut rng);
            assert!(cert.nontrivial, "{cert:?}");
            assert!(cert.trials.iter().all(|t| t.rank <= 4 && (1..=3).contains(&t.ext)));
        }
    }

    #[test]
    fn hyperplane_divisors_fit_in_a_plane() {
        // oracle: D1 + D2 is a plane section, so those six conditions have rank 3
        let hit = search(7, 1, 4, 100, 3, Exec::Sequential).unwrap();
        let c = &hit.curve;
        let v = c.view(1);
        let pt = v.points()[0];
        let mut found = false;
        for e in 1..=6u32 {
            let big = c.view(e);
            let emb = embedding(&v.field, &big.field).unwrap();
            let bf = &*big.field;
            let p = pt.map(&emb);
            let r1 = big.ruling1_form(p.uv).roots(bf);
            let r2 = big.fibre_form(p.st).roots(bf);
            if r1.iter().map(|r| r.1).sum::<usize>() < 3 || r2.iter().map(|r| r.1).sum::<usize>() < 3 {
                continue;
            }
            let mut rows = Vec::new();
            let mut all: Vec<CurvePoint> = r1.iter().flat_map(|&(st, m)| std::iter::repeat_n(CurvePoint { st, uv: p.uv }, m)).collect();
            all.extend(r2.iter().flat_map(|&(uv, m)| std::iter::repeat_n(CurvePoint { st: p.st, uv }, m)));
            rows.extend(crate::curve::divisor_rows(&big, &all));
            assert_eq!(linalg::rank_of(bf, &rows), 3);
            found = true;
            break;
        }
        assert!(found);
    }
}
