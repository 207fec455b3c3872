//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
//!
//! Runs without the libtest harness so the lines reach the terminal uncaptured.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use nodal_fano::curve::{search, CanonicalCurve};
use nodal_fano::divisor::{pairing, trace_class, NSClass};
use nodal_fano::exec::Exec;
use nodal_fano::report::{self, CheckRecord, Status};
use nodal_fano::ring;
use nodal_fano::threefold::{build, fano_census, SECANT_BOUND, SECANT_FIELD};

const SECOND: Duration = Duration::from_secs(1);
const CENSUS_LIMIT: Duration = Duration::from_secs(60);
const BUDGET: usize = 100;

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Result<String, String> + 'a>);

struct Instance {
    label: String,
    seed: u64,
    curve: CanonicalCurve,
}

fn instance(p: u32, k: u32, seed: u64) -> Instance {
    let hit = search(p, k, seed, BUDGET, 3, Exec::default()).unwrap_or_else(|e| panic!("no curve over F_{p}^{k}, seed {seed}: {e}"));
    Instance { label: format!("F_{}#{seed}", p.pow(k)), seed, curve: hit.curve }
}

fn pass(r: &CheckRecord) -> Result<(), String> {
    match r.status {
        Status::Pass => Ok(()),
        s => Err(format!("{} on {:?}: {:?} got {}", r.check, r.instance.curve_hash, s, r.computed)),
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lattice() -> Result<String, String> {
    let t = Instant::now();
    let g = 4;
    let (x, delta) = (NSClass::x(g), NSClass::delta(g));
    let (c, d) = (trace_class(3, g), trace_class(4, g));
    let pairs = [(x, x), (x, delta), (delta, delta), (c, c), (x, c), (d, c), (d, x), (d, d)];
    let got: Vec<i64> = pairs.iter().map(|&(a, b)| pairing(a, b).map_err(|e| e.to_string())).collect::<Result<_, _>>()?;
    ensure(got == [1, 2, -12, 0, 2, 2, 3, 5], || format!("pairings {got:?}"))?;
    for r in report::lattice_suite(g) {
        pass(&r)?;
    }
    let el = t.elapsed();
    ensure(el < SECOND, || format!("took {el:?}"))?;
    Ok(format!("values {got:?} in {el:?}"))
}

fn ring_identities() -> Result<String, String> {
    let t = Instant::now();
    for g in 1..=10 {
        let c = ring::curve_bundle_check(g, None);
        ensure(c.holds, || format!("curve bundle class fails at g={g}: {} vs {}", c.lhs, c.rhs))?;
    }
    let s = ring::sym2_bundle_check(None);
    ensure(s.holds, || format!("sym2 bundle class: {} vs {}", s.lhs, s.rhs))?;
    let el = t.elapsed();
    ensure(el < SECOND, || format!("took {el:?}"))?;
    Ok(format!("g = 1..10 and Sym² identity exact in {el:?}"))
}

fn threefold_identity(all: &[&Instance]) -> Result<String, String> {
    for i in all {
        let t = Instant::now();
        let x = build(&i.curve).map_err(|e| format!("{}: {e}", i.label))?;
        let c = x.certificate();
        let el = t.elapsed();
        ensure(c.identity_holds && c.singular_at_node && c.tangent_cone_rank == 4, || format!("{}: {c:?}", i.label))?;
        ensure(el < SECOND, || format!("{}: took {el:?}", i.label))?;
    }
    Ok(format!("{} instances, tangent cone rank 4", all.len()))
}

fn census(all: &[&Instance]) -> Result<String, String> {
    let mut lines = Vec::new();
    for i in all {
        let t = Instant::now();
        let x = build(&i.curve).map_err(|e| e.to_string())?;
        let c = fano_census(&x, Exec::default());
        let el = t.elapsed();
        ensure(c.passes(), || format!("{}: {c:?}", i.label))?;
        ensure(c.total as u64 == (c.n1 * c.n1 + c.n2) / 2 - c.n1, || format!("{}: closed form", i.label))?;
        ensure(el < CENSUS_LIMIT, || format!("{}: took {el:?}", i.label))?;
        lines.push(format!("{} {} lines ({} via node) {:.1}s", i.label, c.total, c.through_node, el.as_secs_f64()));
    }
    Ok(lines.join("; "))
}

fn residuals(all: &[&Instance]) -> Result<String, String> {
    for i in all {
        let r = report::residual_record(&i.curve, i.seed, 20, BUDGET);
        pass(&r)?;
        ensure(r.computed["three_points"] == 20, || format!("{}: {}", i.label, r.computed))?;
    }
    Ok(format!("20 samples x {} instances, 3 points each", all.len()))
}

fn secants() -> Result<String, String> {
    let (p, k) = SECANT_FIELD;
    let i = instance(p, k, 1);
    ensure(SECANT_BOUND <= 10, || "bound above 10".into())?;
    let recs = report::secant_records(&i.curve, 1, 5, SECANT_BOUND, BUDGET, Exec::default());
    let stable: Vec<&CheckRecord> = recs.iter().filter(|r| r.check == "threefold.secants" && r.status != Status::Resampled).collect();
    for r in &stable {
        pass(r)?;
        ensure(r.computed["count"] == 5, || format!("count {}", r.computed["count"]))?;
    }
    ensure(stable.len() >= 5, || format!("{} stabilized pairs", stable.len()))?;
    let summary = recs.last().unwrap();
    pass(summary)?;
    Ok(format!("over F_{p}, bound {SECANT_BOUND}: {}", summary.computed))
}

fn incidence(f7: &[&Instance]) -> Result<String, String> {
    for i in f7 {
        let r = report::incidence_record(&i.curve, i.seed, 100, BUDGET);
        pass(&r)?;
        ensure(r.computed["discrepancies"] == 0 && r.computed["trials"] == 100, || format!("{}: {}", i.label, r.computed))?;
    }
    Ok(format!("0 discrepancies in 100 pairs on each of {} instances", f7.len()))
}

fn disjoint_complementary(all: &[&Instance]) -> Result<String, String> {
    for i in all {
        pass(&report::disjointness_record(&i.curve, i.seed, 4, Exec::default()))?;
    }
    let i = all[0];
    let r = report::complementarity_record(&i.curve, i.seed, 10, BUDGET, Exec::default());
    pass(&r)?;
    ensure(r.computed["complementary"] == 10, || r.computed.to_string())?;
    Ok(format!("no overlaps to degree 4 on {} instances; 10/10 complementary", all.len()))
}

fn extension_class() -> Result<String, String> {
    for seed in 1..=10 {
        let i = instance(7, 1, 100 + seed);
        let r = report::extension_record(&i.curve, i.seed, 8);
        pass(&r)?;
        ensure(r.computed["d1_divisor"]["rank"] == 4, || format!("{}: {}", i.label, r.computed))?;
    }
    Ok("10 instances nontrivial with a rank-4 witness".into())
}

fn cg_identity() -> Result<String, String> {
    let r = report::cg_identity_record();
    pass(&r)?;
    Ok(format!("{} ordered 4-tuples", r.computed["tuples"]))
}

fn involution(all: &[&Instance]) -> Result<String, String> {
    let mut n = 0;
    for i in all.iter().take(3) {
        let r = report::involution_record(&i.curve, i.seed, 20, BUDGET);
        pass(&r)?;
        n += r.computed["involutive"].as_u64().unwrap_or(0);
    }
    ensure(n >= 50, || format!("{n} samples"))?;
    Ok(format!("{n} members mapped back to themselves"))
}

fn main() {
    let f7: Vec<Instance> = (1..=3).map(|s| instance(7, 1, s)).collect();
    let f8 = instance(2, 3, 1);
    let f9 = instance(3, 2, 1);
    let f7r: Vec<&Instance> = f7.iter().collect();
    let mut all = f7r.clone();
    all.extend([&f8, &f9]);

    let criteria: Vec<Criterion> = vec![
        ("lattice goldens", Box::new(lattice)),
        ("ring identities", Box::new(ring_identities)),
        ("threefold identity and node", Box::new(|| threefold_identity(&all))),
        ("Fano census", Box::new(|| census(&all))),
        ("plane residuals", Box::new(|| residuals(&all))),
        ("five common secants", Box::new(secants)),
        ("incidence equivalence", Box::new(|| incidence(&f7r))),
        ("disjointness and complementarity", Box::new(|| disjoint_complementary(&all))),
        ("extension class", Box::new(extension_class)),
        ("formal map identity", Box::new(cg_identity)),
        ("residual involution", Box::new(|| involution(&all))),
    ];
    let mut failed = 0;
    for (n, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or(e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let el = t.elapsed().as_secs_f64();
        match res {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail} [{el:.2}s]", n + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {why} [{el:.2}s]", n + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
