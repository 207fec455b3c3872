//! Genus-4 canonical curves `C = Q ∩ F ⊂ P³` on the split quadric.
//!
//! Points are handled through the Segre parametrisation
//! `(s:t; u:v) -> (su : sv : tu : tv)` of `Q = x0 x3 - x1 x2`, under which
//! `F` becomes a bicubic `f(s,t; u,v)`. Ruling 1 is the family of lines with
//! constant `(u:v)`, ruling 2 the lines with constant `(s:t)`.

mod certificate;
mod complement;
mod jets;
mod residual;
mod ruling;

pub use certificate::{d1_not_equiv_d2, tangent_plane_rank, D1Certificate, D1Trial};
pub use complement::{complementary, gamma_overlaps, trace_hits, DisjointnessRow};
pub use jets::{divisor_rows, is_on_trace, jet_rows, tangent_line};
pub use residual::{plane_residual, residual_involution, PlaneResidual, ResidualError};
pub use ruling::{gamma, gamma_key, ruling_lines, sym_key, SymKey, SymPoint};

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::algebra::binary::{BinaryForm, P1};
use crate::algebra::field::{embedding, field, Embedding, Fe, Field, FieldError};
use crate::algebra::form::{parse_exponent, Form, FormError};
use crate::algebra::{linalg, ProjPoint};
use crate::exec::Exec;

/// Largest extension degree used for smoothness certification.
pub const SMOOTHNESS_BOUND: u32 = 6;

/// On-disk curve description.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveSpec {
    pub p: u32,
    pub k: u32,
    #[serde(rename = "Q")]
    pub q: BTreeMap<String, i64>,
    #[serde(rename = "F")]
    pub f: BTreeMap<String, i64>,
}

impl CurveSpec {
    /// The split quadric `x0 x3 - x1 x2` with the given cubic.
    pub fn split(p: u32, k: u32, f: BTreeMap<String, i64>) -> CurveSpec {
        let q = BTreeMap::from([("1001".to_string(), 1), ("0110".to_string(), -1)]);
        CurveSpec { p, k, q, f }
    }

    /// Stable short identifier: SHA-256 of the canonical JSON, first 16 hex digits.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("spec serialises");
        let digest = Sha256::digest(json.as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CurveError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error("coefficient {0} is not an integer in (-p, p^k)")]
    BadCoefficient(i64),
    #[error("Q must be a nonzero multiple of x0*x3 - x1*x2")]
    NonSplitQuadric,
    #[error("Q is singular")]
    SingularQuadric,
    #[error("F vanishes identically on Q")]
    CubicVanishesOnQuadric,
    #[error("singular point over F_q^{m}: {witness:?}")]
    SingularCurve { m: u32, witness: Vec<u32> },
    #[error("Weil bound violated over F_q^{m}: N = {n}")]
    WeilBoundViolation { m: u32, n: u64 },
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("resample budget of {0} exhausted")]
    ResampleBudget(usize),
}

/// Result of validation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmoothnessCertificate {
    /// Smoothness was checked over every `F_{q^m}`, `m <= bound` ("bounded").
    pub bound: u32,
    /// `N_1, ..., N_bound`.
    pub counts: Vec<u64>,
}

/// A point of `C`, by its Segre parameters (each normalised).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CurvePoint {
    pub st: P1,
    pub uv: P1,
}

impl CurvePoint {
    pub fn coords(&self, f: &Field) -> [Fe; 4] {
        let (s, t) = self.st;
        let (u, v) = self.uv;
        [f.mul(s, u), f.mul(s, v), f.mul(t, u), f.mul(t, v)]
    }

    pub fn proj(&self, f: &Field) -> ProjPoint<4> {
        ProjPoint::new(f, self.coords(f)).expect("Segre image is nonzero")
    }

    pub fn map(&self, e: &Embedding) -> CurvePoint {
        CurvePoint { st: (e.map(self.st.0), e.map(self.st.1)), uv: (e.map(self.uv.0), e.map(self.uv.1)) }
    }

    /// Coordinate-wise `x -> x^{p^k}`.
    pub fn frobenius(&self, f: &Field, k: u32) -> CurvePoint {
        let e = (f.characteristic() as u64).pow(k);
        let fr = |x: Fe| f.pow(x, e);
        CurvePoint { st: (fr(self.st.0), fr(self.st.1)), uv: (fr(self.uv.0), fr(self.uv.1)) }
    }

    pub fn descend(&self, e: &Embedding) -> Option<CurvePoint> {
        Some(CurvePoint {
            st: (e.preimage(self.st.0)?, e.preimage(self.st.1)?),
            uv: (e.preimage(self.uv.0)?, e.preimage(self.uv.1)?),
        })
    }
}

/// Segre parameters of a point of the split quadric.
pub fn segre_inverse(f: &Field, x: &[Fe; 4]) -> Option<CurvePoint> {
    use crate::algebra::binary::normalize_p1;
    if !f.sub(f.mul(x[0], x[3]), f.mul(x[1], x[2])).is_zero() {
        return None;
    }
    let uv = if !(x[0].is_zero() && x[1].is_zero()) { (x[0], x[1]) } else { (x[2], x[3]) };
    let st = if !(x[0].is_zero() && x[2].is_zero()) { (x[0], x[2]) } else { (x[1], x[3]) };
    if (uv.0.is_zero() && uv.1.is_zero()) || (st.0.is_zero() && st.1.is_zero()) {
        return None;
    }
    Some(CurvePoint { st: normalize_p1(f, st), uv: normalize_p1(f, uv) })
}

/// Every point of `P¹(F)` in a fixed order: `(x:1)` by encoding, then `(1:0)`.
pub fn p1_points(f: &Field) -> impl Iterator<Item = P1> + '_ {
    f.elements().map(|x| (x, Fe::ONE)).chain(std::iter::once((Fe::ONE, Fe::ZERO)))
}

fn p1_from_index(f: &Field, i: u64) -> P1 {
    if i < f.order() as u64 {
        (Fe(i as u32), Fe::ONE)
    } else {
        (Fe::ONE, Fe::ZERO)
    }
}

/// The curve over `F_{q^m}`.
pub struct CurveView {
    /// Degree over the base field `F_q`.
    pub m: u32,
    pub field: Arc<Field>,
    /// Base field into this one.
    pub emb: Embedding,
    pub q: Form,
    pub f: Form,
    pub dq: [Form; 4],
    pub df: [Form; 4],
    /// `bic[i][j]` multiplies `s^{3-i} t^i u^{3-j} v^j`.
    pub bic: [[Fe; 4]; 4],
    points: OnceLock<Vec<CurvePoint>>,
}

/// Roots of a fibre: finitely many, or the whole line.
pub enum Fibre {
    Roots(Vec<(P1, usize)>),
    Whole,
}

impl CurveView {
    fn new(base: &Arc<Field>, m: u32, q: &Form, f: &Form) -> Result<CurveView, FieldError> {
        let big = field(base.characteristic(), base.degree() * m)?;
        let emb = embedding(base, &big)?;
        let q = q.map(&emb);
        let f = f.map(&emb);
        let dq = std::array::from_fn(|i| q.partial(i));
        let df = std::array::from_fn(|i| f.partial(i));
        let mut bic = [[Fe::ZERO; 4]; 4];
        for (e, c) in f.terms() {
            // x0^a x1^b x2^c x3^d -> s^{a+b} t^{c+d} u^{a+c} v^{b+d}
            let i = (e[2] + e[3]) as usize;
            let j = (e[1] + e[3]) as usize;
            bic[i][j] = big.add(bic[i][j], c);
        }
        Ok(CurveView { m, field: big, emb, q, f, dq, df, bic, points: OnceLock::new() })
    }

    /// `f(s0, t0; u, v)` as a binary cubic in `(u:v)` (ruling-2 line through `(s0:t0)`).
    pub fn fibre_form(&self, (s, t): P1) -> BinaryForm {
        let f = &*self.field;
        let sp = [f.pow(s, 3), f.mul(f.mul(s, s), t), f.mul(s, f.mul(t, t)), f.pow(t, 3)];
        BinaryForm((0..4).map(|j| f.sum((0..4).map(|i| f.mul(self.bic[i][j], sp[i])))).collect())
    }

    /// `f(s, t; u0, v0)` as a binary cubic in `(s:t)` (ruling-1 line through `(u0:v0)`).
    pub fn ruling1_form(&self, (u, v): P1) -> BinaryForm {
        let f = &*self.field;
        let up = [f.pow(u, 3), f.mul(f.mul(u, u), v), f.mul(u, f.mul(v, v)), f.pow(v, 3)];
        BinaryForm((0..4).map(|i| f.sum((0..4).map(|j| f.mul(self.bic[i][j], up[j])))).collect())
    }

    pub fn fibre(&self, st: P1) -> Fibre {
        let g = self.fibre_form(st);
        if g.is_zero() {
            Fibre::Whole
        } else {
            Fibre::Roots(g.roots(&self.field))
        }
    }

    pub fn contains(&self, x: &[Fe; 4]) -> bool {
        self.q.eval(x).is_zero() && self.f.eval(x).is_zero()
    }

    pub fn jacobian(&self, x: &[Fe; 4]) -> [[Fe; 4]; 2] {
        [std::array::from_fn(|i| self.dq[i].eval(x)), std::array::from_fn(|i| self.df[i].eval(x))]
    }

    pub fn jacobian_rank(&self, x: &[Fe; 4]) -> usize {
        linalg::rank_of(&self.field, &self.jacobian(x))
    }

    /// Point of `C` with the given coordinates.
    pub fn point(&self, x: &[Fe; 4]) -> Result<CurvePoint, CurveError> {
        if !self.contains(x) {
            return Err(CurveError::NotOnCurve);
        }
        segre_inverse(&self.field, x).ok_or(CurveError::NotOnCurve)
    }

    /// Points over a block of `(s:t)` fibres, with the first singular point found.
    fn scan_fibre(&self, st: P1, check_smooth: bool) -> (Vec<CurvePoint>, Option<[Fe; 4]>) {
        let f = &*self.field;
        let uvs: Vec<P1> = match self.fibre(st) {
            Fibre::Roots(r) => r.into_iter().map(|(uv, _)| uv).collect(),
            Fibre::Whole => p1_points(f).collect(),
        };
        let mut pts = Vec::with_capacity(uvs.len());
        let mut bad = None;
        for uv in uvs {
            let pt = CurvePoint { st, uv };
            if check_smooth && bad.is_none() {
                let x = pt.coords(f);
                if self.jacobian_rank(&x) < 2 {
                    bad = Some(x);
                }
            }
            pts.push(pt);
        }
        (pts, bad)
    }

    fn fibre_count(&self) -> u64 {
        self.field.order() as u64 + 1
    }

    /// All points of `C(F_{q^m})`, sorted by `(s:t)` then `(u:v)` order of discovery.
    pub fn points(&self) -> &[CurvePoint] {
        self.points_with(Exec::default())
    }

    pub fn points_with(&self, exec: Exec) -> &[CurvePoint] {
        self.points.get_or_init(|| {
            exec.flat_map_range(0..self.fibre_count(), |i| {
                self.scan_fibre(p1_from_index(&self.field, i), false).0
            })
        })
    }

    /// `N_m` without materialising the point list.
    pub fn count(&self, exec: Exec) -> u64 {
        if let Some(p) = self.points.get() {
            return p.len() as u64;
        }
        exec.map_range(0..self.fibre_count(), |i| self.scan_fibre(p1_from_index(&self.field, i), false).0.len() as u64)
            .into_iter()
            .sum()
    }

    /// `N_m` and the first singular point in scan order.
    pub fn count_and_check(&self, exec: Exec) -> (u64, Option<[Fe; 4]>) {
        let parts = exec.map_range(0..self.fibre_count(), |i| {
            let (pts, bad) = self.scan_fibre(p1_from_index(&self.field, i), true);
            (pts.len() as u64, bad)
        });
        let n = parts.iter().map(|p| p.0).sum();
        (n, parts.into_iter().find_map(|p| p.1))
    }

    /// Brute-force `N_m` over all of `P³(F_{q^m})`; reference for tests.
    pub fn count_exhaustive(&self) -> u64 {
        crate::algebra::proj::all_points::<4>(&self.field).filter(|p| self.contains(&p.0)).count() as u64
    }

    pub fn lift_point(&self, other: &CurveView, pt: &CurvePoint) -> CurvePoint {
        let e = embedding(&other.field, &self.field).expect("views are nested");
        pt.map(&e)
    }
}

/// A validated canonical curve over `F_q`.
pub struct CanonicalCurve {
    spec: CurveSpec,
    base: Arc<Field>,
    q: Form,
    f: Form,
    certificate: SmoothnessCertificate,
    views: Mutex<HashMap<u32, Arc<CurveView>>>,
}

impl std::fmt::Debug for CanonicalCurve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CanonicalCurve({} over F_{}^{})", self.spec.hash(), self.spec.p, self.spec.k)
    }
}

fn coefficient(f: &Field, c: i64) -> Result<Fe, CurveError> {
    if c < 0 && c > -(f.characteristic() as i64) {
        Ok(f.from_int(c))
    } else if c >= 0 && c < f.order() as i64 {
        Ok(f.elem(c as u32))
    } else {
        Err(CurveError::BadCoefficient(c))
    }
}

fn parse_form(f: &Arc<Field>, terms: &BTreeMap<String, i64>, degree: usize) -> Result<Form, CurveError> {
    let mut parsed = Vec::new();
    for (k, &c) in terms {
        parsed.push((parse_exponent(k, 4)?, coefficient(f, c)?));
    }
    Ok(Form::from_terms(f, 4, degree, parsed)?)
}

/// The split quadric `x0 x3 - x1 x2` over `f`.
pub fn split_quadric(f: &Arc<Field>) -> Form {
    Form::from_terms(f, 4, 2, vec![(vec![1, 0, 0, 1], Fe::ONE), (vec![0, 1, 1, 0], f.from_int(-1))]).unwrap()
}

/// Parse a spec and check the split-quadric requirement (no smoothness test).
pub fn parse_spec(spec: &CurveSpec) -> Result<(Arc<Field>, Form, Form), CurveError> {
    let base = field(spec.p, spec.k)?;
    let q = parse_form(&base, &spec.q, 2)?;
    let f = parse_form(&base, &spec.f, 3)?;
    let split = split_quadric(&base);
    let lead = q.coeff(&[1, 0, 0, 1]);
    if lead.is_zero() || q != split.scale(lead) {
        return Err(CurveError::NonSplitQuadric);
    }
    // the polar form of the split quadric is nondegenerate in every characteristic
    if linalg::rank(&base, &q.polar_matrix()) < 4 {
        return Err(CurveError::SingularQuadric);
    }
    Ok((base, q, f))
}

/// Whether `(N - q^m - 1)² <= 64 q^m`, i.e. `|N - q^m - 1| <= 2g q^{m/2}` at `g = 4`.
pub fn weil_ok(q: u64, m: u32, n: u64) -> bool {
    let qm = q.pow(m) as i128;
    let d = n as i128 - qm - 1;
    d * d <= 64 * qm
}

impl CanonicalCurve {
    /// Parse, then certify smoothness over `F_{q^m}` for `m <= bound` and the Weil bound.
    pub fn validate(spec: &CurveSpec, bound: u32, exec: Exec) -> Result<CanonicalCurve, CurveError> {
        let (base, q, f) = parse_spec(spec)?;
        let curve = CanonicalCurve {
            spec: spec.clone(),
            base,
            q,
            f,
            certificate: SmoothnessCertificate { bound, counts: Vec::new() },
            views: Mutex::new(HashMap::new()),
        };
        if curve.view(1).bic.iter().flatten().all(|c| c.is_zero()) {
            return Err(CurveError::CubicVanishesOnQuadric);
        }
        let qq = curve.q_order();
        let mut counts = Vec::new();
        for m in 1..=bound {
            let view = curve.view(m);
            let (n, bad) = view.count_and_check(exec);
            if let Some(x) = bad {
                return Err(CurveError::SingularCurve { m, witness: x.iter().map(|c| c.0).collect() });
            }
            if !weil_ok(qq, m, n) {
                return Err(CurveError::WeilBoundViolation { m, n });
            }
            counts.push(n);
            if m > 2 {
                // large views are rebuilt on demand
                curve.views.lock().unwrap().remove(&m);
            }
        }
        Ok(CanonicalCurve { certificate: SmoothnessCertificate { bound, counts }, ..curve })
    }

    /// A curve from trusted parts, without the smoothness scan (tests and benches).
    pub fn unchecked(spec: &CurveSpec) -> Result<CanonicalCurve, CurveError> {
        let (base, q, f) = parse_spec(spec)?;
        Ok(CanonicalCurve {
            spec: spec.clone(),
            base,
            q,
            f,
            certificate: SmoothnessCertificate { bound: 0, counts: Vec::new() },
            views: Mutex::new(HashMap::new()),
        })
    }

    pub fn spec(&self) -> &CurveSpec {
        &self.spec
    }

    pub fn hash(&self) -> String {
        self.spec.hash()
    }

    pub fn base(&self) -> &Arc<Field> {
        &self.base
    }

    /// `q = p^k`.
    pub fn q_order(&self) -> u64 {
        self.base.order() as u64
    }

    pub fn quadric(&self) -> &Form {
        &self.q
    }

    pub fn cubic(&self) -> &Form {
        &self.f
    }

    pub fn certificate(&self) -> &SmoothnessCertificate {
        &self.certificate
    }

    /// The curve over `F_{q^m}` (cached).
    pub fn view(&self, m: u32) -> Arc<CurveView> {
        if let Some(v) = self.views.lock().unwrap().get(&m) {
            return v.clone();
        }
        let v = Arc::new(CurveView::new(&self.base, m, &self.q, &self.f).expect("extension field exists"));
        self.views.lock().unwrap().entry(m).or_insert(v).clone()
    }

    /// Drop cached views of degree above `m` (large extension tables).
    pub fn evict_views_above(&self, m: u32) {
        self.views.lock().unwrap().retain(|&k, _| k <= m);
    }

    /// `N_m`, from the certificate when available.
    pub fn count_points(&self, m: u32, exec: Exec) -> u64 {
        if let Some(&n) = self.certificate.counts.get(m as usize - 1) {
            return n;
        }
        self.view(m).count(exec)
    }

    /// Number of `F_q`-points of `Sym²C`: `(N_1² + N_2) / 2`.
    pub fn sym2_count(&self, exec: Exec) -> u64 {
        let n1 = self.count_points(1, exec);
        let n2 = self.count_points(2, exec);
        (n1 * n1 + n2) / 2
    }
}

/// All 20 cubic monomials in four variables, as exponent strings.
pub fn cubic_monomials() -> Vec<String> {
    let mut out = Vec::new();
    for a in (0..=3u8).rev() {
        for b in (0..=3 - a).rev() {
            for c in (0..=3 - a - b).rev() {
                let d = 3 - a - b - c;
                out.push(format!("{a}{b}{c}{d}"));
            }
        }
    }
    out
}

/// Outcome of a seeded search.
pub struct SearchHit {
    pub spec: CurveSpec,
    pub curve: CanonicalCurve,
    /// Rejected candidates before the hit.
    pub resamples: usize,
}

/// Draw random cubics over the split quadric until one validates.
pub fn search(p: u32, k: u32, seed: u64, budget: usize, bound: u32, exec: Exec) -> Result<SearchHit, CurveError> {
    let order = field(p, k)?.order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..budget {
        let f: BTreeMap<String, i64> = cubic_monomials()
            .into_iter()
            .map(|m| (m, rng.gen_range(0..order) as i64))
            .filter(|&(_, c)| c != 0)
            .collect();
        let spec = CurveSpec::split(p, k, f);
        match CanonicalCurve::validate(&spec, bound, exec) {
            Ok(curve) => return Ok(SearchHit { spec, curve, resamples: attempt }),
            Err(CurveError::SingularCurve { .. } | CurveError::WeilBoundViolation { .. } | CurveError::CubicVanishesOnQuadric) => {}
            Err(e) => return Err(e),
        }
    }
    Err(CurveError::ResampleBudget(budget))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn fermat(p: u32) -> CurveSpec {
        let f = BTreeMap::from([
            ("3000".to_string(), 1),
            ("0300".to_string(), 1),
            ("0030".to_string(), 1),
            ("0003".to_string(), 1),
        ]);
        CurveSpec::split(p, 1, f)
    }

    #[test]
    fn evaluate_examples() {
        let f = field(7, 1).unwrap();
        let q = split_quadric(&f);
        assert!(q.eval(&[Fe(1), Fe(0), Fe(0), Fe(0)]).is_zero());
        assert!(q.eval(&[Fe(1), Fe(1), Fe(1), Fe(1)]).is_zero());
        let (_, _, cubic) = parse_spec(&fermat(7)).unwrap();
        assert_eq!(cubic.eval(&[Fe(1); 4]), Fe(4));
    }

    #[test]
    fn segre_round_trip() {
        let f = field(5, 1).unwrap();
        for st in p1_points(&f) {
            for uv in p1_points(&f) {
                let pt = CurvePoint { st, uv };
                assert_eq!(segre_inverse(&f, &pt.coords(&f)), Some(pt));
            }
        }
    }

    #[test]
    fn fibration_count_matches_exhaustive_scan() {
        for spec in [fermat(7), fermat(5), search(3, 1, 4, 100, 2, Exec::Sequential).unwrap().spec] {
            let c = CanonicalCurve::unchecked(&spec).unwrap();
            for m in 1..=2 {
                let v = c.view(m);
                assert_eq!(v.count(Exec::Sequential), v.count_exhaustive(), "{spec:?} m={m}");
                assert_eq!(v.count(Exec::Parallel), v.count_exhaustive());
            }
        }
        let c = CanonicalCurve::unchecked(&search(2, 2, 1, 100, 2, Exec::Sequential).unwrap().spec).unwrap();
        assert_eq!(c.view(1).count(Exec::Sequential), c.view(1).count_exhaustive());
    }

    #[test]
    fn cubic_times_linear_is_rejected() {
        // F = Q * x0 vanishes on the quadric
        let f = BTreeMap::from([("2001".to_string(), 1), ("1110".to_string(), -1)]);
        let spec = CurveSpec::split(7, 1, f);
        assert_eq!(CanonicalCurve::validate(&spec, 2, Exec::Sequential).unwrap_err(), CurveError::CubicVanishesOnQuadric);
    }

    #[test]
    fn singular_curve_has_witness() {
        // a cone-like cubic singular at (1:0:0:0): no terms of degree >= 2 in x0
        let f = BTreeMap::from([("0300".to_string(), 1), ("0030".to_string(), 1), ("0003".to_string(), 1), ("1011".to_string(), 1)]);
        let spec = CurveSpec::split(7, 1, f);
        match CanonicalCurve::validate(&spec, 2, Exec::Sequential) {
            Err(CurveError::SingularCurve { m, witness }) => {
                let (_, q, cubic) = parse_spec(&spec).unwrap();
                let x: [Fe; 4] = std::array::from_fn(|i| Fe(witness[i]));
                let v = CurveView::new(&field(7, 1).unwrap(), m, &q, &cubic).unwrap();
                assert!(v.contains(&x));
                assert!(v.jacobian_rank(&x) < 2);
            }
            other => panic!("expected a singular curve, got {other:?}"),
        }
    }

    #[test]
    fn non_split_quadric_rejected() {
        let mut spec = fermat(7);
        spec.q = BTreeMap::from([("2000".to_string(), 1), ("0110".to_string(), 1)]);
        assert_eq!(parse_spec(&spec).unwrap_err(), CurveError::NonSplitQuadric);
        spec.q = BTreeMap::from([("1001".to_string(), 3), ("0110".to_string(), -3)]);
        assert!(parse_spec(&spec).is_ok());
    }

    #[test]
    fn quadric_has_no_singular_points() {
        // independent oracle: no point of V(Q) over F_{q^m}, m <= 2, kills every partial
        for (p, n) in [(2, 1), (2, 2), (3, 2), (7, 1)] {
            let f = field(p, n).unwrap();
            let q = split_quadric(&f);
            let dq: Vec<Form> = (0..4).map(|i| q.partial(i)).collect();
            for x in crate::algebra::proj::all_points::<4>(&f) {
                if q.eval(&x.0).is_zero() {
                    assert!(dq.iter().any(|d| !d.eval(&x.0).is_zero()));
                }
            }
        }
    }

    #[test]
    fn search_is_deterministic_and_counts_are_consistent() {
        let a = search(7, 1, 1, 100, 3, Exec::Parallel).unwrap();
        let b = search(7, 1, 1, 100, 3, Exec::Sequential).unwrap();
        assert_eq!(a.spec, b.spec);
        assert_eq!(a.resamples, b.resamples);
        let n = &a.curve.certificate().counts;
        assert!(n[1] >= n[0]);
        assert_eq!((n[0] * n[0] + n[1]) % 2, 0);
        let lo = 8i64 - 22;
        assert!((n[0] as i64) >= lo.max(0) && n[0] <= 8 + 22);
        let json = serde_json::to_string(&a.spec).unwrap();
        assert_eq!(serde_json::from_str::<CurveSpec>(&json).unwrap(), a.spec);
    }

    #[test]
    fn bad_coefficients_rejected() {
        let mut spec = fermat(7);
        spec.f.insert("3000".into(), 7);
        assert_eq!(parse_spec(&spec).unwrap_err(), CurveError::BadCoefficient(7));
        spec.f.insert("3000".into(), 1);
        spec.f.insert("300".into(), 1);
        assert!(matches!(parse_spec(&spec).unwrap_err(), CurveError::Form(_)));
    }
}
