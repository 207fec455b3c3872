//! Verification records and the suites behind the command line.
//!
//! Every suite returns records in a fixed order and draws randomness from
//! one seeded generator, so equal inputs give byte-identical JSON apart from
//! the `runtime_ms` fields.

use std::time::Instant;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::curve::{
    complementary, gamma_overlaps, is_on_trace, plane_residual, residual_involution, search, CanonicalCurve, CurveError,
    CurvePoint, CurveSpec, ResidualError, SymPoint,
};
use crate::divisor::{gamma_pullback, j_pullback, lin_equiv, pairing, parse_query, trace_class, DivisorError, NSClass, Query};
use crate::exec::Exec;
use crate::picard::{cg_map_identity, extension_class_certificate, Verdict};
use crate::ring;
use crate::threefold::{
    build, common_secants, fano_census, remark_check, sample_chord_pair, second_type_check, verify_incidence, ThreefoldError,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Mismatch,
    /// A degenerate draw that was replaced; does not fail the run.
    Resampled,
    /// The resample budget ran out.
    Exhausted,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub curve_hash: Option<String>,
    pub seed: Option<u64>,
}

impl Instance {
    pub fn of(curve: &CanonicalCurve, seed: u64) -> Instance {
        Instance { curve_hash: Some(curve.hash()), seed: Some(seed) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check: String,
    pub instance: Instance,
    pub parameters: Value,
    pub expected: Value,
    pub computed: Value,
    pub status: Status,
    pub resamples: u64,
    pub runtime_ms: u64,
}

/// Aggregate of a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub status: Status,
    /// Checks that mismatched or ran out of budget, in record order.
    pub failing: Vec<String>,
    pub records: Vec<CheckRecord>,
}

impl Report {
    pub fn new(records: Vec<CheckRecord>) -> Report {
        let mut failing: Vec<String> = Vec::new();
        for r in &records {
            if matches!(r.status, Status::Mismatch | Status::Exhausted) && !failing.contains(&r.check) {
                failing.push(r.check.clone());
            }
        }
        let status = if records.iter().any(|r| r.status == Status::Mismatch) {
            Status::Mismatch
        } else if records.iter().any(|r| r.status == Status::Exhausted) {
            Status::Exhausted
        } else {
            Status::Pass
        };
        Report { status, failing, records }
    }

    /// 0 pass, 2 mismatch, 3 budget exhausted.
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Pass | Status::Resampled => 0,
            Status::Mismatch => 2,
            Status::Exhausted => 3,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialise") + "\n"
    }

    /// The report with every runtime zeroed, for reproducibility comparisons.
    pub fn without_runtimes(&self) -> Report {
        let mut r = self.clone();
        for rec in &mut r.records {
            rec.runtime_ms = 0;
        }
        r
    }
}

struct Rec {
    check: String,
    instance: Instance,
    parameters: Value,
    start: Instant,
}

fn rec(check: impl Into<String>, instance: Instance, parameters: Value) -> Rec {
    Rec { check: check.into(), instance, parameters, start: Instant::now() }
}

impl Rec {
    fn finish(self, expected: Value, computed: Value, status: Status, resamples: u64) -> CheckRecord {
        CheckRecord {
            check: self.check,
            instance: self.instance,
            parameters: self.parameters,
            expected,
            computed,
            status,
            resamples,
            runtime_ms: self.start.elapsed().as_millis() as u64,
        }
    }

    fn judge(self, expected: Value, computed: Value, ok: bool, resamples: u64) -> CheckRecord {
        self.finish(expected, computed, if ok { Status::Pass } else { Status::Mismatch }, resamples)
    }

    fn error(self, expected: Value, err: &dyn std::fmt::Display) -> CheckRecord {
        self.finish(expected, json!({ "error": err.to_string() }), Status::Mismatch, 0)
    }

    fn exhausted(self, expected: Value, budget: usize) -> CheckRecord {
        self.finish(expected, json!({ "error": format!("resample budget of {budget} exhausted") }), Status::Exhausted, budget as u64)
    }
}

// ---------------------------------------------------------------- symbolic

/// Intersection numbers on `Sym²C`, against closed forms in the genus.
pub fn lattice_suite(genus: i64) -> Vec<CheckRecord> {
    let x = NSClass::x(genus);
    let delta = NSClass::delta(genus);
    let c = trace_class(3, genus);
    let d = trace_class(4, genus);
    let g = genus;
    let cases = [
        ("lattice.x.x", x, x, 1),
        ("lattice.x.delta", x, delta, 2),
        ("lattice.delta.delta", delta, delta, 4 * (1 - g)),
        ("lattice.ci.cj", c, c, 4 - g),
        ("lattice.xp.ci", x, c, 2),
        ("lattice.dpq.ci", d, c, 6 - g),
        ("lattice.dpq.xa", d, x, 3),
        ("lattice.dpq.dpq", d, d, 9 - g),
    ];
    cases
        .iter()
        .map(|&(name, a, b, want)| {
            let r = rec(name, Instance::default(), json!({ "genus": g, "lhs": a.to_string(), "rhs": b.to_string() }));
            match pairing(a, b) {
                Ok(v) => r.judge(json!(want), json!(v), v == want, 0),
                Err(e) => r.error(json!(want), &e),
            }
        })
        .collect()
}

/// Class identities in `Q[ξ,η]/(ξ^{g+1}, η²)`; `perturb` breaks them on purpose.
pub fn ring_suite(perturb: bool) -> Vec<CheckRecord> {
    let delta = perturb.then(|| BigRational::new(1.into(), 7.into()));
    let mut out = Vec::new();
    for g in 1..=10 {
        let r = rec("ring.curve_bundle", Instance::default(), json!({ "genus": g, "perturbed": perturb }));
        let c = ring::curve_bundle_check(g, delta.clone());
        out.push(r.judge(json!(c.rhs), json!(c.lhs), c.holds, 0));
    }
    let r = rec("ring.sym2_bundle", Instance::default(), json!({ "genus": 4, "perturbed": perturb }));
    let c = ring::sym2_bundle_check(delta.clone());
    out.push(r.judge(json!(c.rhs), json!(c.lhs), c.holds, 0));

    let r = rec("ring.sym2_push", Instance::default(), json!({ "genus": 4, "class": "(xi+eta)^3/6" }));
    let theta = ring::parse_class("(xi+eta)^3/6", 4).expect("literal parses");
    let pushed = ring::q_push(&theta);
    let text: Vec<String> = pushed.iter().map(|c| c.to_string()).collect();
    let want = ["0", "0", "1/2", "0", "0"];
    out.push(r.judge(json!(want), json!(text), text == want, 0));

    let r = rec("ring.glueing", Instance::default(), json!({ "genus": 4 }));
    let gl = ring::glueing_divisor_classes(4);
    let computed = json!({ "t1": gl.t1.to_string(), "t2": gl.t2.to_string(), "fibre_degree": gl.fibre_degree });
    let ok = gl.t1 == ring::GradedClass::eta(4) && gl.t2 == gl.t1 && gl.fibre_degree == 1;
    out.push(r.judge(json!({ "t1": "eta", "t2": "eta", "fibre_degree": 1 }), computed, ok, 0));
    out
}

/// The formal identity `q ∘ u₀ ∘ ν = u` over every ordered choice of four
/// distinct symbols from a six-letter alphabet.
pub fn cg_identity_record() -> CheckRecord {
    let names = ["p", "q", "p0", "q0", "a", "b"];
    let r = rec("picard.cg_identity", Instance::default(), json!({ "alphabet": names }));
    let mut tuples = 0;
    let mut failures = 0;
    for a in names {
        for b in names {
            for c in names {
                for d in names {
                    let t = [a, b, c, d];
                    if (0..4).any(|i| (i + 1..4).any(|j| t[i] == t[j])) {
                        continue;
                    }
                    tuples += 1;
                    failures += (!cg_map_identity(a, b, c, d)) as usize;
                }
            }
        }
    }
    r.judge(json!({ "failures": 0 }), json!({ "tuples": tuples, "failures": failures }), failures == 0, 0)
}

/// Evaluate one query of the divisor grammar.
pub fn divisor_record(query: &str) -> Result<CheckRecord, DivisorError> {
    let q = parse_query(query)?;
    let r = rec("divisor.query", Instance::default(), json!({ "query": query }));
    let computed = match q {
        Query::Reduce(e) => {
            let n = e.reduce();
            json!({ "reduced": n.to_string(), "ns_class": e.ns_class(4).to_string() })
        }
        Query::Equiv(a, b) => json!({ "linearly_equivalent": lin_equiv(&a, &b) }),
        Query::JPull(e, p) => json!({ "pullback": j_pullback(&e, &p).to_string() }),
        Query::GPull(e, i) => json!({ "pullback": gamma_pullback(&e, i).to_string() }),
    };
    Ok(r.judge(Value::Null, computed, true, 0))
}

// ---------------------------------------------------------------- curves

/// Where the curve of a run comes from.
#[derive(Clone, Debug)]
pub struct CurveSource {
    pub spec: Option<CurveSpec>,
    pub prime: u32,
    pub ext: u32,
    pub seed: u64,
    pub budget: usize,
    /// Smoothness is certified over `F_{q^m}`, `m <= bound`.
    pub bound: u32,
}

/// The curve of a run and the number of rejected search candidates.
pub fn load_curve(src: &CurveSource, exec: Exec) -> Result<(CanonicalCurve, usize), CurveError> {
    match &src.spec {
        Some(spec) => Ok((CanonicalCurve::validate(spec, src.bound, exec)?, 0)),
        None => {
            let hit = search(src.prime, src.ext, src.seed, src.budget, src.bound, exec)?;
            Ok((hit.curve, hit.resamples))
        }
    }
}

/// Smoothness and Weil-bound certification of a spec.
pub fn validate_record(spec: &CurveSpec, seed: u64, bound: u32, exec: Exec) -> CheckRecord {
    let r = rec("curve.validate", Instance { curve_hash: Some(spec.hash()), seed: Some(seed) }, json!({ "bound": bound }));
    let expected = json!({ "smooth": true });
    match CanonicalCurve::validate(spec, bound, exec) {
        Ok(c) => r.judge(expected, json!({ "smooth": true, "counts": c.certificate().counts }), true, 0),
        Err(CurveError::SingularCurve { m, witness }) => {
            r.judge(expected, json!({ "smooth": false, "singular_over": m, "witness": witness }), false, 0)
        }
        Err(e) => r.error(expected, &e),
    }
}

/// Point counts by ruling fibres against a scan of `P³` (small fields) or the Weil interval.
pub fn count_records(curve: &CanonicalCurve, seed: u64, bound: u32, exec: Exec) -> Vec<CheckRecord> {
    let q = curve.q_order();
    (1..=bound)
        .map(|m| {
            let r = rec("curve.count", Instance::of(curve, seed), json!({ "m": m }));
            let n = curve.count_points(m, exec);
            let qm = q.pow(m);
            if qm <= 64 {
                let oracle = curve.view(m).count_exhaustive();
                r.judge(json!({ "p3_scan": oracle }), json!(n), n == oracle, 0)
            } else {
                let spread = 8.0 * (qm as f64).sqrt();
                let (lo, hi) = ((qm + 1) as f64 - spread, (qm + 1) as f64 + spread);
                r.judge(json!({ "weil_interval": [lo.ceil(), hi.floor()] }), json!(n), crate::curve::weil_ok(q, m, n), 0)
            }
        })
        .collect()
}

pub fn search_record(src: &CurveSource, exec: Exec) -> CheckRecord {
    let r = rec("curve.search", Instance { curve_hash: None, seed: Some(src.seed) }, json!({ "p": src.prime, "k": src.ext, "bound": src.bound }));
    match search(src.prime, src.ext, src.seed, src.budget, src.bound, exec) {
        Ok(hit) => {
            let counts = hit.curve.certificate().counts.clone();
            let mut rr = r.judge(json!({ "smooth": true }), json!({ "spec": hit.spec, "hash": hit.spec.hash(), "counts": counts }), true, hit.resamples as u64);
            rr.instance.curve_hash = Some(hit.spec.hash());
            rr
        }
        Err(CurveError::ResampleBudget(b)) => r.exhausted(json!({ "smooth": true }), b),
        Err(e) => r.error(json!({ "smooth": true }), &e),
    }
}

// ---------------------------------------------------------------- threefold

pub fn build_record(curve: &CanonicalCurve, seed: u64) -> CheckRecord {
    let r = rec("threefold.build", Instance::of(curve, seed), json!({}));
    let expected = json!({ "identity_holds": true, "singular_at_node": true, "tangent_cone_rank": 4 });
    match build(curve) {
        Ok(x) => {
            let c = x.certificate();
            let ok = c.identity_holds && c.singular_at_node && c.tangent_cone_rank == 4;
            r.judge(expected, serde_json::to_value(c).expect("serialises"), ok, 0)
        }
        Err(e) => r.error(expected, &e),
    }
}

pub fn census_record(curve: &CanonicalCurve, seed: u64, exec: Exec) -> CheckRecord {
    let r = rec("threefold.census", Instance::of(curve, seed), json!({ "q": curve.q_order() }));
    match build(curve) {
        Ok(x) => {
            let c = fano_census(&x, exec);
            let expected = json!({ "total": c.predicted_total, "through_node": c.n1 });
            let ok = c.passes();
            r.judge(expected, serde_json::to_value(&c).expect("serialises"), ok, 0)
        }
        Err(e) => r.error(Value::Null, &e),
    }
}

/// Common secants of `pairs` sampled chord pairs; unstabilised pairs are
/// reported and replaced while the budget lasts.
pub fn secant_records(curve: &CanonicalCurve, seed: u64, pairs: usize, bound: u32, budget: usize, exec: Exec) -> Vec<CheckRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let (mut stable, mut unstable) = (0usize, 0usize);
    while stable < pairs {
        let r = rec("threefold.secants", Instance::of(curve, seed), json!({ "bound": bound }));
        if unstable > budget {
            out.push(r.exhausted(json!({ "count": 5 }), budget));
            break;
        }
        let (c1, c2, tries) = match sample_chord_pair(curve, &mut rng, budget) {
            Ok(t) => t,
            Err(ThreefoldError::ResampleBudget(b)) => {
                out.push(r.exhausted(json!({ "count": 5 }), b));
                break;
            }
            Err(e) => {
                out.push(r.error(json!({ "count": 5 }), &e));
                break;
            }
        };
        let mut r = r;
        r.parameters = json!({ "bound": bound, "chords": [c1, c2] });
        match common_secants(curve, &c1, &c2, bound, exec) {
            Ok(s) => {
                stable += 1;
                out.push(r.judge(json!({ "count": 5 }), serde_json::to_value(&s).expect("serialises"), s.count == 5, tries as u64));
            }
            Err(ThreefoldError::NotStabilized { weights, .. }) => {
                unstable += 1;
                out.push(r.finish(json!({ "count": 5 }), json!({ "not_stabilized": weights }), Status::Resampled, tries as u64));
            }
            Err(e) => {
                out.push(r.error(json!({ "count": 5 }), &e));
                break;
            }
        }
    }
    let r = rec("threefold.secants.stability", Instance::of(curve, seed), json!({ "pairs": stable + unstable }));
    let total = stable + unstable;
    let ok = total > 0 && 5 * stable >= 4 * total;
    out.push(r.judge(json!({ "stabilized_fraction_at_least": 0.8 }), json!({ "stabilized": stable, "sampled": total }), ok, unstable as u64));
    out
}

/// Two `F_q`-points spanning a chord off `Q`, drawn at random.
fn generic_pair<R: Rng>(curve: &CanonicalCurve, rng: &mut R, budget: usize) -> Option<(CurvePoint, CurvePoint, usize)> {
    let pts = curve.view(1).points().to_vec();
    if pts.len() < 2 {
        return None;
    }
    for t in 0..budget {
        let (p, q) = (pts[rng.gen_range(0..pts.len())], pts[rng.gen_range(0..pts.len())]);
        if p.st != q.st && p.uv != q.uv {
            return Some((p, q, t));
        }
    }
    None
}

pub fn incidence_record(curve: &CanonicalCurve, seed: u64, trials: usize, budget: usize) -> CheckRecord {
    let r = rec("threefold.incidence", Instance::of(curve, seed), json!({ "trials": trials }));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let expected = json!({ "discrepancies": 0 });
    let Some((p, q, tries)) = generic_pair(curve, &mut rng, budget) else {
        return r.exhausted(expected, budget);
    };
    match verify_incidence(curve, &p, &q, trials, budget, &mut rng) {
        Ok(rep) => {
            let ok = rep.discrepancies == 0 && rep.trials == trials;
            let res = (rep.resamples + tries) as u64;
            r.judge(expected, serde_json::to_value(&rep).expect("serialises"), ok, res)
        }
        Err(ThreefoldError::ResampleBudget(b)) => r.exhausted(expected, b),
        Err(e) => r.error(expected, &e),
    }
}

pub fn remark_record(curve: &CanonicalCurve, seed: u64, samples: usize) -> CheckRecord {
    let r = rec("threefold.glued_curves", Instance::of(curve, seed), json!({ "samples": samples }));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let expected = json!({ "c1_points_related": samples, "complementary": 0, "disagreements": 0, "self_meet_failures": 0 });
    let mut run = || -> Result<_, ThreefoldError> { Ok((remark_check(curve, samples, &mut rng)?, second_type_check(curve, samples, &mut rng)?)) };
    match run() {
        Ok((a, b)) => {
            let ok = a.c1_points_related == samples && a.complementary == 0 && b.disagreements == 0 && b.self_meet_failures == 0;
            r.judge(expected, json!({ "remark": a, "second_type": b }), ok, 0)
        }
        Err(e) => r.error(expected, &e),
    }
}

// ---------------------------------------------------------------- residuals and glued curves

/// Plane residuals of `p + q + a` for random `F_q`-points.
pub fn residual_record(curve: &CanonicalCurve, seed: u64, samples: usize, budget: usize) -> CheckRecord {
    let r = rec("curve.residual", Instance::of(curve, seed), json!({ "samples": samples }));
    let expected = json!({ "three_points": samples });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = curve.view(1);
    let pts = v.points().to_vec();
    let (mut good, mut bad, mut resamples) = (0usize, 0usize, 0usize);
    // resample count when the last sample completed
    let mut mark = 0usize;
    while good + bad < samples {
        if resamples - mark > budget || pts.len() < 3 {
            return r.exhausted(expected, budget);
        }
        let pick = |rng: &mut ChaCha8Rng| pts[rng.gen_range(0..pts.len())];
        let (p, q, a) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
        if p == q || p == a || q == a {
            resamples += 1;
            continue;
        }
        match plane_residual(curve, &v, &p, &q, &a) {
            Ok(res) => {
                let big = curve.view(res.view_m);
                let bf = &*big.field;
                let e = crate::algebra::field::embedding(&v.field, &big.field).expect("nested fields");
                let h = res.plane.map(|c| e.map(c));
                let on = res.points.iter().all(|x| {
                    let c = x.coords(bf);
                    big.contains(&c) && bf.sum((0..4).map(|k| bf.mul(h[k], c[k]))).is_zero()
                });
                if res.points.len() == 3 && on {
                    good += 1;
                } else {
                    bad += 1;
                }
                mark = resamples;
            }
            Err(ResidualError::Collinear | ResidualError::SingularConic) => resamples += 1,
            Err(e) => return r.error(expected, &e),
        }
    }
    r.judge(expected, json!({ "three_points": good, "failures": bad }), bad == 0, resamples as u64)
}

/// `γ₁(C) ∩ γ₂(C) = ∅` over `F_{q^m}`, `m <= max_m`.
pub fn disjointness_record(curve: &CanonicalCurve, seed: u64, max_m: u32, exec: Exec) -> CheckRecord {
    let r = rec("curve.glued_disjoint", Instance::of(curve, seed), json!({ "max_m": max_m }));
    match gamma_overlaps(curve, max_m, exec) {
        Ok(rows) => {
            let ok = rows.iter().all(|row| row.overlaps == 0);
            r.judge(json!({ "overlaps": 0 }), serde_json::to_value(&rows).expect("serialises"), ok, 0)
        }
        Err(e) => r.error(json!({ "overlaps": 0 }), &e),
    }
}

/// `D_{p+q}` meets `C₁`, `C₂` only at the images of `p`, `q`, over `F_{q²}`.
pub fn complementarity_record(curve: &CanonicalCurve, seed: u64, samples: usize, budget: usize, exec: Exec) -> CheckRecord {
    let r = rec("curve.complementary", Instance::of(curve, seed), json!({ "samples": samples, "m": 2 }));
    let expected = json!({ "complementary": samples });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut good, mut resamples) = (0usize, 0u64);
    for _ in 0..samples {
        let Some((p, q, t)) = generic_pair(curve, &mut rng, budget) else {
            return r.exhausted(expected, budget);
        };
        resamples += t as u64;
        match complementary(curve, 2, &p, &q, exec) {
            Ok(ok) => good += ok as usize,
            Err(e) => return r.error(expected, &e),
        }
    }
    r.judge(expected, json!({ "complementary": good }), good == samples, resamples)
}

/// The residual involution on `D_{p+q}` is an involution and stays on the trace.
pub fn involution_record(curve: &CanonicalCurve, seed: u64, samples: usize, budget: usize) -> CheckRecord {
    let r = rec("curve.involution", Instance::of(curve, seed), json!({ "samples": samples }));
    let expected = json!({ "involutive": samples });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = curve.view(1);
    let pts = v.points().to_vec();
    let (mut good, mut bad, mut resamples) = (0usize, 0usize, 0usize);
    // resample count when the last sample completed
    let mut mark = 0usize;
    while good + bad < samples {
        if resamples - mark > budget {
            return r.exhausted(expected, budget);
        }
        let Some((p, q, t)) = generic_pair(curve, &mut rng, budget) else {
            return r.exhausted(expected, budget);
        };
        resamples += t;
        let a = pts[rng.gen_range(0..pts.len())];
        if a == p || a == q {
            resamples += 1;
            continue;
        }
        // a member a + b of D_{p+q}, b from the plane through p, q, a, in its splitting field
        let (u, b) = match plane_residual(curve, &v, &p, &q, &a) {
            Ok(res) => (curve.view(res.view_m), res.points[rng.gen_range(0..3)]),
            Err(ResidualError::Collinear | ResidualError::SingularConic) => {
                resamples += 1;
                continue;
            }
            Err(e) => return r.error(expected, &e),
        };
        let step = || -> Result<bool, ResidualError> {
            let eu = crate::algebra::field::embedding(&v.field, &u.field).map_err(CurveError::from)?;
            let (pu, qu, au) = (p.map(&eu), q.map(&eu), a.map(&eu));
            let s = residual_involution(curve, &u, &pu, &qu, &au, &b)?;
            let w = curve.view(s.field_m);
            let e = crate::algebra::field::embedding(&u.field, &w.field).map_err(CurveError::from)?;
            let (pw, qw) = (pu.map(&e), qu.map(&e));
            let on = is_on_trace(&w, &pw, &qw, &s.a, &s.b)?;
            let back = residual_involution(curve, &w, &pw, &qw, &s.a, &s.b)?;
            Ok(on && back == SymPoint::new(s.field_m, s.field_m, au.map(&e), b.map(&e)))
        };
        match step() {
            Ok(true) => {
                good += 1;
                mark = resamples;
            }
            Ok(false) => {
                bad += 1;
                mark = resamples;
            }
            Err(ResidualError::Collinear | ResidualError::SingularConic) => resamples += 1,
            Err(e) => return r.error(expected, &e),
        }
    }
    r.judge(expected, json!({ "involutive": good, "failures": bad }), bad == 0, resamples as u64)
}

pub fn extension_record(curve: &CanonicalCurve, seed: u64, trials: usize) -> CheckRecord {
    let r = rec("picard.extension_class", Instance::of(curve, seed), json!({ "trials": trials }));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rep = extension_class_certificate(curve, trials, &mut rng);
    let ok = rep.verdict == Verdict::Nontrivial;
    r.judge(json!({ "verdict": "nontrivial" }), serde_json::to_value(&rep).expect("serialises"), ok, 0)
}

// ---------------------------------------------------------------- everything

/// Parameters of [`report_all`].
#[derive(Clone, Debug)]
pub struct AllConfig {
    pub source: CurveSource,
    pub trials: usize,
    /// Extension bound for the common secant count.
    pub secant_bound: u32,
}

/// Every suite on one curve, plus the secant count on a curve over `F_3`.
pub fn report_all(cfg: &AllConfig, exec: Exec) -> Result<Report, CurveError> {
    let mut records = lattice_suite(4);
    records.extend(ring_suite(false));
    records.push(cg_identity_record());
    for q in ["Trace(D1)", "Trace(D1) ~ Trace(D2)", "jpull(Delta/2, p)"] {
        records.push(divisor_record(q).expect("built-in queries parse"));
    }
    let src = &cfg.source;
    let seed = src.seed;
    let (curve, _) = load_curve(src, exec)?;
    records.push(validate_record(curve.spec(), seed, src.bound, exec));
    records.extend(count_records(&curve, seed, src.bound.min(3), exec));
    records.push(build_record(&curve, seed));
    records.push(census_record(&curve, seed, exec));
    records.push(incidence_record(&curve, seed, cfg.trials, src.budget));
    records.push(remark_record(&curve, seed, 12));
    records.push(residual_record(&curve, seed, 20, src.budget));
    records.push(disjointness_record(&curve, seed, 4, exec));
    records.push(complementarity_record(&curve, seed, 10, src.budget, exec));
    records.push(involution_record(&curve, seed, 50, src.budget));
    records.push(extension_record(&curve, seed, 8));
    let (p, k) = crate::threefold::SECANT_FIELD;
    let small = CurveSource { spec: None, prime: p, ext: k, seed, budget: src.budget, bound: 3 };
    let (sc, _) = load_curve(&small, exec)?;
    records.extend(secant_records(&sc, seed, 5, cfg.secant_bound, src.budget, exec));
    Ok(Report::new(records))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_goldens_and_genus_override() {
        let recs = lattice_suite(4);
        let values: Vec<i64> = recs.iter().map(|r| r.computed.as_i64().unwrap()).collect();
        assert_eq!(values, vec![1, 2, -12, 0, 2, 2, 3, 5]);
        assert!(recs.iter().all(|r| r.status == Status::Pass));
        assert!(lattice_suite(7).iter().all(|r| r.status == Status::Pass));
    }

    #[test]
    fn perturbed_ring_fails_in_a_controlled_way() {
        assert_eq!(Report::new(ring_suite(false)).exit_code(), 0);
        let bad = Report::new(ring_suite(true));
        assert_eq!(bad.exit_code(), 2);
        assert_eq!(bad.failing, vec!["ring.curve_bundle".to_string(), "ring.sym2_bundle".to_string()]);
    }

    #[test]
    fn exit_codes_follow_the_worst_status() {
        let mk = |s| CheckRecord {
            check: "c".into(),
            instance: Instance::default(),
            parameters: Value::Null,
            expected: Value::Null,
            computed: Value::Null,
            status: s,
            resamples: 0,
            runtime_ms: 0,
        };
        assert_eq!(Report::new(vec![mk(Status::Pass), mk(Status::Resampled)]).exit_code(), 0);
        assert_eq!(Report::new(vec![mk(Status::Exhausted), mk(Status::Pass)]).exit_code(), 3);
        assert_eq!(Report::new(vec![mk(Status::Exhausted), mk(Status::Mismatch)]).exit_code(), 2);
    }

    #[test]
    fn divisor_queries() {
        let r = divisor_record("Trace(D1)").unwrap();
        assert_eq!(r.computed["reduced"], "S(D1) - Delta/2");
        let r = divisor_record("Trace(D1) ~ Trace(D2)").unwrap();
        assert_eq!(r.computed["linearly_equivalent"], false);
        let r = divisor_record("jpull(Delta/2, p)").unwrap();
        assert_eq!(r.computed["pullback"], "p");
        assert!(divisor_record("Trace(").is_err());
    }

    #[test]
    fn curve_suites_pass_on_a_small_instance() {
        let src = CurveSource { spec: None, prime: 5, ext: 1, seed: 3, budget: 100, bound: 3 };
        let (c, _) = load_curve(&src, Exec::Sequential).unwrap();
        let mut recs = count_records(&c, 3, 3, Exec::Sequential);
        recs.push(build_record(&c, 3));
        recs.push(census_record(&c, 3, Exec::Sequential));
        recs.push(incidence_record(&c, 3, 40, 1000));
        recs.push(residual_record(&c, 3, 20, 1000));
        recs.push(involution_record(&c, 3, 20, 1000));
        recs.push(complementarity_record(&c, 3, 3, 100, Exec::Sequential));
        let rep = Report::new(recs);
        assert_eq!(rep.exit_code(), 0, "{}", rep.to_json());
    }
}
