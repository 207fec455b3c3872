//! Chords of `C` meeting two given chords.
//!
//! Projecting from two skew chords gives two pencils of planes, hence a map
//! `Φ: C -> P¹ × P¹`. Through a point `a` off both chords there is exactly one
//! line meeting both, `T_a = φ₁(a) ∩ φ₂(a)`, so `T_a = T_b` iff `Φ(a) = Φ(b)`.
//! Common secants are therefore the singular points of `Φ(C)`, a curve of
//! bidegree `(4, 4)`, and their count with multiplicity is its total delta
//! invariant. Each point of `C` and each colliding pair contributes a local
//! term computed from power-series branches; chord endpoints use the plane
//! spanned by the chord and the tangent line.
//!
//! Contributions are summed over `C(F_{q^m})` for `m <= bound` and sorted by
//! exact field of definition with Möbius inversion.

use rand::Rng;
use serde::{Deserialize, Serialize};

use std::collections::HashMap;

use super::{rational_sym_points, ThreefoldError};
use crate::algebra::field::{Fe, Field};
use crate::algebra::series::{self, Series};
use crate::algebra::{linalg, normalize_p1, Line, P1};
use crate::curve::{jet_rows, CanonicalCurve, CurvePoint, CurveView, SymPoint};
use crate::exec::Exec;

/// Default field `F_3` for the secant count.
pub const SECANT_FIELD: (u32, u32) = (3, 1);
/// Default extension bound.
pub const SECANT_BOUND: u32 = 10;

/// The chord through a Frobenius-stable pair of distinct points: two
/// `F_q`-points, or two conjugate `F_{q²}`-points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chord {
    /// Field of the endpoints (1 or 2).
    pub m: u32,
    pub p: [[u32; 2]; 2],
    pub q: [[u32; 2]; 2],
}

impl Chord {
    pub fn new(pair: &SymPoint) -> Chord {
        let enc = |x: &CurvePoint| [[x.st.0 .0, x.st.1 .0], [x.uv.0 .0, x.uv.1 .0]];
        Chord { m: pair.field_m, p: enc(&pair.a), q: enc(&pair.b) }
    }

    pub fn points(&self) -> [CurvePoint; 2] {
        let dec = |x: &[[u32; 2]; 2]| CurvePoint { st: (Fe(x[0][0]), Fe(x[0][1])), uv: (Fe(x[1][0]), Fe(x[1][1])) };
        [dec(&self.p), dec(&self.q)]
    }

    pub fn pair(&self) -> SymPoint {
        let [p, q] = self.points();
        SymPoint::new(self.m, 1, p, q)
    }

    /// The chord as a line over `F_q`.
    pub fn line(&self, curve: &CanonicalCurve) -> Result<Line<4>, ThreefoldError> {
        let v = curve.view(self.m);
        let f = &*v.field;
        let [p, q] = self.points();
        for x in [p, q] {
            if !v.contains(&x.coords(f)) {
                return Err(crate::curve::CurveError::NotOnCurve.into());
            }
        }
        let line = Line::through(f, &p.coords(f), &q.coords(f)).ok_or(ThreefoldError::Degenerate("doubled chord"))?;
        line.descend(&v.emb).ok_or(ThreefoldError::Degenerate("chord is not defined over F_q"))
    }

    /// Not contained in `Q`: the endpoints share no ruling line.
    pub fn off_quadric(&self) -> bool {
        let [p, q] = self.points();
        p != q && p.st != q.st && p.uv != q.uv
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SecantCount {
    /// Common secants, with multiplicity.
    pub count: u64,
    /// Smallest `m` over which every contribution is defined.
    pub stabilized_at: u32,
    /// Contributions from points and pairs over `F_{q^m}`, `m = 1..=bound`.
    pub weights: Vec<u64>,
    /// Contributions of exact degree `d`, by Möbius inversion.
    pub primitive: Vec<i64>,
    pub bound: u32,
}

fn mobius(n: u32) -> i64 {
    let mut n = n;
    let mut r = 1;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            r = -r;
        }
        d += 1;
    }
    if n > 1 {
        r = -r;
    }
    r
}

/// The two planes containing the line through `a`, `b`, as linear forms.
fn planes_through(f: &Field, a: &[Fe; 4], b: &[Fe; 4]) -> [[Fe; 4]; 2] {
    let k = linalg::kernel(f, &[a.to_vec(), b.to_vec()], 4);
    assert_eq!(k.len(), 2, "chord endpoints are distinct");
    [std::array::from_fn(|i| k[0][i]), std::array::from_fn(|i| k[1][i])]
}

fn dot(f: &Field, h: &[Fe; 4], x: &[Fe; 4]) -> Fe {
    f.sum((0..4).map(|i| f.mul(h[i], x[i])))
}

/// Working precision of the local branches.
const PRECISION: usize = 24;

/// `Φ(a)` with the local branch of `Φ(C)` at it, in the affine chart fixed by `Φ(a)`.
struct Branch {
    key: [P1; 2],
    coords: [Series; 2],
}

fn branch(view: &CurveView, pencils: &[[[Fe; 4]; 2]; 2], pt: &CurvePoint, n: usize) -> Result<Branch, ThreefoldError> {
    let f = &*view.field;
    let jets = jet_rows(view, pt, n);
    let mut key = [(Fe::ZERO, Fe::ZERO); 2];
    let mut coords: [Series; 2] = [Vec::new(), Vec::new()];
    for (i, pencil) in pencils.iter().enumerate() {
        let na: Series = jets.iter().map(|r| dot(f, &pencil[0], r)).collect();
        let nb: Series = jets.iter().map(|r| dot(f, &pencil[1], r)).collect();
        // at a chord endpoint both vanish; the leading jet picks the tangent plane
        let k = match (series::ord(&na), series::ord(&nb)) {
            (Some(x), Some(y)) => x.min(y),
            (Some(x), None) | (None, Some(x)) => x,
            (None, None) => return Err(ThreefoldError::Degenerate("curve osculates a chord beyond working precision")),
        };
        let (na, nb) = (&na[k..], &nb[k..]);
        key[i] = normalize_p1(f, (na[0], nb[0]));
        coords[i] = if nb[0].is_zero() {
            series::mul(f, nb, &series::inverse(f, na).expect("unit"), na.len())
        } else {
            let mut x = series::mul(f, na, &series::inverse(f, nb).expect("unit"), nb.len());
            x[0] = Fe::ZERO;
            x
        };
    }
    Ok(Branch { key, coords })
}

/// A local term of the total delta invariant of `Φ(C)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Contribution {
    /// A singular branch: the tangent line at `point` meets both chords.
    Branch { point: CurvePoint, delta: usize },
    /// Two branches with the same image: the chord `ab` meets both chords.
    Pair { a: CurvePoint, b: CurvePoint, multiplicity: usize },
}

impl Contribution {
    pub fn weight(&self) -> u64 {
        match self {
            Contribution::Branch { delta, .. } => *delta as u64,
            Contribution::Pair { multiplicity, .. } => *multiplicity as u64,
        }
    }
}

/// Delta contributions of the points of `C(F_{q^m})` and of the pairs among them.
pub fn contributions_over(curve: &CanonicalCurve, m: u32, c1: &Chord, c2: &Chord, exec: Exec) -> Result<Vec<Contribution>, ThreefoldError> {
    contributions(curve, m, &checked_lines(curve, c1, c2)?, exec)
}

fn checked_lines(curve: &CanonicalCurve, c1: &Chord, c2: &Chord) -> Result<[Line<4>; 2], ThreefoldError> {
    let f = &**curve.base();
    let chords = [c1.line(curve)?, c2.line(curve)?];
    if !c1.off_quadric() || !c2.off_quadric() {
        return Err(ThreefoldError::Degenerate("chord lies on Q"));
    }
    if chords[0].meets(f, &chords[1]) {
        return Err(ThreefoldError::Degenerate("chords meet"));
    }
    Ok(chords)
}

fn contributions(curve: &CanonicalCurve, m: u32, chords: &[Line<4>; 2], exec: Exec) -> Result<Vec<Contribution>, ThreefoldError> {
    let view = curve.view(m);
    let f = &*view.field;
    let bases: Vec<[[Fe; 4]; 2]> = chords.iter().map(|c| c.basis().map(|r| r.map(|x| view.emb.map(x)))).collect();
    let pencils = [planes_through(f, &bases[0][0], &bases[0][1]), planes_through(f, &bases[1][0], &bases[1][1])];
    let pts = view.points_with(exec);
    // a cheap pass finds the image points and the branches that may be singular
    let coarse = exec.map_slice(pts, |pt| -> Result<([P1; 2], bool), ThreefoldError> {
        let b = branch(&view, &pencils, pt, 3)?;
        Ok((b.key, b.coords.iter().all(|x| series::ord(x) != Some(1))))
    });
    let mut groups: HashMap<[P1; 2], Vec<usize>> = HashMap::new();
    let mut singular = Vec::new();
    for (i, c) in coarse.into_iter().enumerate() {
        let (key, sing) = c?;
        groups.entry(key).or_default().push(i);
        if sing {
            singular.push(i);
        }
    }
    let mut needed: Vec<usize> = groups.values().filter(|g| g.len() > 1).flatten().copied().chain(singular.iter().copied()).collect();
    needed.sort_unstable();
    needed.dedup();
    let fine = exec.map_slice(&needed, |&i| branch(&view, &pencils, &pts[i], PRECISION));
    let mut full: HashMap<usize, Branch> = HashMap::new();
    for (i, b) in needed.iter().zip(fine) {
        full.insert(*i, b?);
    }
    let mut out = Vec::new();
    for i in &singular {
        let c = &full[i].coords;
        let delta = series::delta(f, &c[0], &c[1]).ok_or(ThreefoldError::Degenerate("branch singularity beyond working precision"))?;
        if delta > 0 {
            out.push(Contribution::Branch { point: pts[*i], delta });
        }
    }
    for g in groups.values().filter(|g| g.len() > 1) {
        for (j, a) in g.iter().enumerate() {
            for b in &g[j + 1..] {
                let (ca, cb) = (&full[a].coords, &full[b].coords);
                let meet = series::intersection(f, [&ca[0], &ca[1]], [&cb[0], &cb[1]])
                    .ok_or(ThreefoldError::Degenerate("unresolved branch intersection"))?;
                out.push(Contribution::Pair { a: pts[*a], b: pts[*b], multiplicity: meet });
            }
        }
    }
    Ok(out)
}

/// Common secants of two skew chords, counted with multiplicity over `F̄_q`.
pub fn common_secants(curve: &CanonicalCurve, c1: &Chord, c2: &Chord, bound: u32, exec: Exec) -> Result<SecantCount, ThreefoldError> {
    let chords = checked_lines(curve, c1, c2)?;
    let mut weights = Vec::with_capacity(bound as usize);
    for m in 1..=bound {
        weights.push(contributions(curve, m, &chords, exec)?.iter().map(Contribution::weight).sum());
    }
    curve.evict_views_above(2);
    let primitive: Vec<i64> = (1..=bound)
        .map(|d| (1..=d).filter(|k| d % k == 0).map(|k| mobius(d / k) * weights[k as usize - 1] as i64).sum())
        .collect();
    // a contribution is seen exactly over the extensions containing its points
    if primitive.iter().any(|&w| w < 0) {
        return Err(ThreefoldError::Degenerate("contributions are not Frobenius-stable"));
    }
    let total: i64 = primitive.iter().sum();
    match (1..=bound).find(|&m| weights[m as usize - 1] as i64 == total) {
        Some(m) if total > 0 => Ok(SecantCount { count: total as u64, stabilized_at: m, weights, primitive, bound }),
        _ => Err(ThreefoldError::NotStabilized { bound, weights }),
    }
}

/// Two skew chords off `Q`, drawn from the Frobenius-stable pairs.
pub fn sample_chord_pair<R: Rng>(curve: &CanonicalCurve, rng: &mut R, budget: usize) -> Result<(Chord, Chord, usize), ThreefoldError> {
    let f = &**curve.base();
    let pairs: Vec<Chord> =
        rational_sym_points(curve, Exec::Sequential).iter().filter(|s| s.a != s.b).map(Chord::new).filter(Chord::off_quadric).collect();
    if pairs.len() < 2 {
        return Err(ThreefoldError::ResampleBudget(0));
    }
    for attempt in 0..budget {
        let c1 = pairs[rng.gen_range(0..pairs.len())];
        let c2 = pairs[rng.gen_range(0..pairs.len())];
        if !c1.line(curve)?.meets(f, &c2.line(curve)?) {
            return Ok((c1, c2, attempt));
        }
    }
    Err(ThreefoldError::ResampleBudget(budget))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{search, tangent_line};
    use rand::SeedableRng;
    use std::collections::BTreeSet;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn mobius_values() {
        let mu: Vec<i64> = (1..=12).map(mobius).collect();
        assert_eq!(mu, vec![1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0]);
    }

    #[test]
    fn five_common_secants() {
        let mut stable = 0;
        let seeds = 1..=6u64;
        for seed in seeds.clone() {
            let hit = search(3, 1, seed, 100, 3, Exec::Sequential).unwrap();
            let c = &hit.curve;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (c1, c2, _) = sample_chord_pair(c, &mut rng, 100).unwrap();
            match common_secants(c, &c1, &c2, SECANT_BOUND, Exec::default()) {
                Ok(s) => {
                    assert_eq!(s.count, 5, "{s:?}");
                    assert_eq!(s.primitive.iter().sum::<i64>(), 5);
                    stable += 1;
                }
                Err(ThreefoldError::NotStabilized { .. }) => {}
                Err(e) => panic!("{e}"),
            }
        }
        assert!(5 * stable >= 4 * seeds.count(), "{stable} stabilized");
    }

    #[test]
    fn contributions_match_rank_conditions() {
        for seed in 1..=6u64 {
            let hit = search(3, 1, seed, 100, 3, Exec::Sequential).unwrap();
            let c = &hit.curve;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (c1, c2, _) = sample_chord_pair(c, &mut rng, 100).unwrap();
            let lines = [c1.line(c).unwrap(), c2.line(c).unwrap()];
            for m in [1, 2, 4] {
                let v = c.view(m);
                let f = &*v.field;
                let b: Vec<[[Fe; 4]; 2]> = lines.iter().map(|l| l.basis().map(|r| r.map(|x| v.emb.map(x)))).collect();
                let coplanar = |x: &[Fe; 4], y: &[Fe; 4]| b.iter().all(|bb| linalg::rank_of(f, &[*x, *y, bb[0], bb[1]]) <= 3);
                let endpoint = |p: &CurvePoint| b.iter().any(|bb| linalg::rank_of(f, &[p.coords(f), bb[0], bb[1]]) == 2);
                let pts: Vec<CurvePoint> = v.points().iter().filter(|p| !endpoint(p)).copied().collect();
                let mut pairs = BTreeSet::new();
                for (i, x) in pts.iter().enumerate() {
                    for y in &pts[i + 1..] {
                        if coplanar(&x.coords(f), &y.coords(f)) {
                            pairs.insert((*x.min(y), *x.max(y)));
                        }
                    }
                }
                let cusps: BTreeSet<CurvePoint> = pts
                    .iter()
                    .filter(|p| {
                        let t = tangent_line(&v, p);
                        coplanar(&t.basis()[0], &t.basis()[1])
                    })
                    .copied()
                    .collect();
                let found = contributions_over(c, m, &c1, &c2, Exec::Sequential).unwrap();
                let mut got_pairs = BTreeSet::new();
                let mut got_cusps = BTreeSet::new();
                for k in found {
                    match k {
                        Contribution::Pair { a, b, .. } if !endpoint(&a) && !endpoint(&b) => {
                            got_pairs.insert((a.min(b), a.max(b)));
                        }
                        Contribution::Branch { point, .. } if !endpoint(&point) => {
                            got_cusps.insert(point);
                        }
                        _ => {}
                    }
                }
                assert_eq!(pairs, got_pairs, "seed {seed} m {m}");
                assert_eq!(cusps, got_cusps, "seed {seed} m {m}");
            }
        }
    }

    #[test]
    fn degenerate_chords_rejected() {
        let hit = search(3, 1, 32, 100, 3, Exec::Sequential).unwrap();
        let c = &hit.curve;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (ch, _, _) = sample_chord_pair(c, &mut rng, 100).unwrap();
        let same = common_secants(c, &ch, &ch, 2, Exec::Sequential);
        assert!(matches!(same, Err(ThreefoldError::Degenerate(_))));
    }
}
