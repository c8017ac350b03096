//! One line per acceptance criterion on the seed `<t> * <a | a^3>`,
//! `A = <a>`. Exits non-zero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use s2t::certifier::{self, ActionOptions, LevelOptions};
use s2t::cli::{certify_tower, Bounds};
use s2t::extension::Branch;
use s2t::session::{self, SessionFile};
use s2t::{presets, LevelKind, Report, Tower, TowerError, Verdict};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn all_pass(report: &Report, names: &[&str]) -> Result<(), String> {
    for name in names {
        let c = report.check(name).ok_or_else(|| format!("missing check {name}"))?;
        ensure(c.verdict == Verdict::Pass, || format!("{name}: {:?} {:?}", c.verdict, c.witnesses))?;
    }
    ensure(report.passed(), || report.to_text())
}

fn within(elapsed: Duration, limit_s: u64) -> Result<(), String> {
    ensure(elapsed < Duration::from_secs(limit_s), || format!("took {:.1} s, limit {limit_s} s", elapsed.as_secs_f64()))
}

fn level_checks(k: u32, kind: LevelKind) -> Vec<String> {
    let order = match kind {
        LevelKind::Fp => format!("order-of-f2@{k}"),
        LevelKind::Hnn => format!("order-of-f@{k}"),
    };
    ["malnormality", "malnormality-full-product", "intersection-with-parent", "free-structure", "involution-free"]
        .iter()
        .map(|s| s.to_string())
        .chain([order])
        .collect()
}

fn criterion_1() -> Outcome {
    let started = Instant::now();
    let tower = presets::seed_tower();
    let report = certifier::verify_base(tower.algebra().base(), 8);
    all_pass(
        &report,
        &["t-involution", "t-outside-A", "A-involution-free", "malnormality", "centralizer-in-A", "group-axioms"],
    )?;
    let violations = report.check("malnormality").unwrap().counts.get("violations").copied().unwrap_or(0);
    ensure(violations == 0, || "malnormality violations".into())?;
    ensure(report.classification.as_deref() == Some("Frobenius"), || format!("{:?}", report.classification))?;
    within(started.elapsed(), 10)?;
    let pairs = report.check("malnormality").unwrap().counts["pairs"];
    Ok(format!("Frobenius, {pairs} malnormality pairs, 0 violations"))
}

fn criterion_2() -> Outcome {
    let mut tower = presets::seed_tower();
    let alg = tower.algebra().clone();
    let one = alg.identity();
    let r = tower.resolve_f(&one, &alg.t()).map_err(|e| e.to_string())?;
    ensure(r.f == one && r.extended.is_none(), || format!("f(1, t) = {}", alg.format(&r.f)))?;
    let ta = alg.parse("t a").unwrap();
    let r = tower.resolve_f(&one, &ta).map_err(|e| e.to_string())?;
    ensure(r.f == alg.parse("a").unwrap() && r.extended.is_none(), || format!("f(1, t a) = {}", alg.format(&r.f)))?;
    ensure(tower.top() == 0 && tower.generation() == 0, || "the tower grew".into())?;
    let w = alg.double_coset(&alg.t(), &ta).ok_or("t a not found in AtA")?;
    ensure(alg.product([&w.p, &alg.t(), &w.q]) == ta, || "bad witness".into())?;
    Ok("f(1, t) = 1, f(1, t a) = a, no extension".into())
}

fn criterion_3(tower: &mut Tower) -> Outcome {
    let alg = tower.algebra().clone();
    let v = alg.parse("t a t").unwrap();
    let r = tower.resolve_f(&alg.identity(), &v).map_err(|e| e.to_string())?;
    ensure(r.extended == Some(1) && tower.registry()[0].kind == LevelKind::Fp, || format!("{r:?}"))?;
    let started = Instant::now();
    let report = certifier::certify_level(tower.algebra(), 1, LevelOptions::new(6));
    let elapsed = started.elapsed();
    let names = level_checks(1, LevelKind::Fp);
    all_pass(&report, &names.iter().map(String::as_str).collect::<Vec<_>>())?;
    ensure(report.check("order-of-f2@1").unwrap().bound == Some(12), || "order bound".into())?;
    within(elapsed, 60)?;
    Ok(format!("FP level over t a t, 6 checks pass at L = 6 in {:.1} s", elapsed.as_secs_f64()))
}

fn criterion_4(tower: &mut Tower) -> Outcome {
    let alg = tower.algebra().clone();
    let v = alg.parse("t a t a^2 t").unwrap();
    ensure(alg.is_identity(&alg.mul(&v, &v)), || "target is not an involution".into())?;
    ensure(alg.double_coset(&alg.t(), &v).is_none(), || "target lies in AtA".into())?;
    let r = tower.resolve_f(&alg.identity(), &v).map_err(|e| e.to_string())?;
    ensure(r.extended == Some(2) && tower.registry()[1].kind == LevelKind::Hnn, || format!("{r:?}"))?;
    let started = Instant::now();
    let report = certifier::certify_level(tower.algebra(), 2, LevelOptions::new(6));
    let elapsed = started.elapsed();
    let names = level_checks(2, LevelKind::Hnn);
    all_pass(&report, &names.iter().map(String::as_str).collect::<Vec<_>>())?;
    within(elapsed, 60)?;
    Ok(format!("HNN level over t a t a^-1 t, 6 checks pass at L = 6 in {:.1} s", elapsed.as_secs_f64()))
}

fn criterion_5(tower: &Tower) -> Result<(String, Report), String> {
    let started = Instant::now();
    let report = certifier::certify_action(tower, ActionOptions::new(4, 50));
    let elapsed = started.elapsed();
    all_pass(
        &report,
        &[
            "transitive-witness-existence",
            "transitive-witness-uniqueness",
            "characteristic-two",
            "noncommuting-involutions",
        ],
    )?;
    let samples = report.check("transitive-witness-existence").unwrap().counts["samples"];
    ensure(samples == 50, || format!("{samples} samples"))?;
    within(elapsed, 120)?;
    Ok((format!("50 pairs, unique witnesses in the 4-ball, no fixed points, in {:.1} s", elapsed.as_secs_f64()), report))
}

fn criterion_6(tower: &Tower) -> Outcome {
    let mut queries = 0;
    for k in 1..=2 {
        let report = certifier::cross_check_dc(tower.algebra(), k, 5);
        all_pass(&report, &["membership-agreement", "double-coset-agreement"])?;
        let c = report.check("double-coset-agreement").unwrap();
        ensure(!c.counts.contains_key("violations"), || format!("{:?}", c.witnesses))?;
        queries += c.counts["queries"];
    }
    Ok(format!("{queries} double-coset queries agree at levels 1 and 2"))
}

fn criterion_7(action: &Report) -> Outcome {
    let c = action.check("resolution-identities").ok_or("missing suite")?;
    let instances = c.counts.get("instances").copied().unwrap_or(0);
    ensure(c.verdict == Verdict::Pass && instances >= 100, || format!("{:?} {:?}", c.counts, c.witnesses))?;
    Ok(format!("{instances} instances, 0 counterexamples"))
}

fn criterion_8() -> Outcome {
    let mut tower = presets::seed_tower();
    let alg = tower.algebra().clone();
    let p = |s: &str| alg.parse(s).unwrap();
    let mut scratch = alg.clone();
    ensure(matches!(scratch.make_hnn_level(&p("t a t")), Err(TowerError::NotInvolution { .. })), || {
        "non-involution accepted".into()
    })?;
    for v in ["a t a^2", "t a"] {
        ensure(matches!(scratch.make_fp_level(&p(v)), Err(TowerError::InAtA { .. })), || format!("FP over {v}"))?;
    }
    ensure(matches!(scratch.make_hnn_level(&p("a^2 t a")), Err(TowerError::InAtA { .. })), || {
        "HNN over a^2 t a accepted".into()
    })?;
    ensure(matches!(alg.classify_branch(&p("t a")), Err(TowerError::InAtA { .. })), || "classify t a".into())?;
    ensure(matches!(alg.select_branch(&p("t a")), Branch::Hnn { .. }), || "raw branch of t a".into())?;
    ensure(scratch.top() == 0, || "a rejected level was added".into())?;

    let k = tower.push_level_unchecked(LevelKind::Fp, p("t a"));
    let report = certifier::certify_level(tower.algebra(), k, LevelOptions::new(4));
    let c = report.check("malnormality").unwrap();
    ensure(c.verdict == Verdict::Fail && !c.witnesses.is_empty(), || "mis-built level passed".into())?;
    Ok(format!("rejections raised; mis-built level caught: {}", c.witnesses[0]))
}

fn criterion_9(tower: &Tower) -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("session.json");
    session::save(tower, &path).map_err(|e| e.to_string())?;
    let back = session::load(&path).map_err(|e| e.to_string())?;
    ensure(back.registry() == tower.registry(), || "registry differs".into())?;
    ensure(back.queries() == tower.queries(), || "answers differ".into())?;
    ensure(SessionFile::capture(&back).to_json() == std::fs::read_to_string(&path).unwrap(), || {
        "session file differs after replay".into()
    })?;
    let bounds = Bounds { base: 8, level: 3, cross_check: 3, action: 3 };
    let r1 = certify_tower(tower, bounds, 20, certifier::DEFAULT_SEED).without_timing();
    let r2 = certify_tower(&back, bounds, 20, certifier::DEFAULT_SEED).without_timing();
    ensure(r1 == r2, || "reports differ".into())?;
    ensure(r1.passed(), || r1.to_text())?;
    Ok(format!("registry, {} answers and {} verdicts reproduced", back.queries().len(), r1.checks.len()))
}

fn main() {
    let mut failed = 0;
    let mut line = |n: u32, title: &str, started: Instant, outcome: Outcome| {
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  criterion {n}: {title}: {detail} ({secs:.1} s)"),
            Err(why) => {
                failed += 1;
                println!("FAIL  criterion {n}: {title}: {why} ({secs:.1} s)");
            }
        }
    };

    let s = Instant::now();
    line(1, "base verify", s, criterion_1());
    let s = Instant::now();
    line(2, "resolution without extension", s, criterion_2());

    let mut tower = presets::seed_tower();
    let s = Instant::now();
    line(3, "free-product level", s, criterion_3(&mut tower));
    let s = Instant::now();
    line(4, "HNN level", s, criterion_4(&mut tower));

    let s = Instant::now();
    let action = criterion_5(&tower);
    let (c5, c7) = match action {
        Ok((detail, report)) => (Ok(detail), criterion_7(&report)),
        Err(e) => (Err(e.clone()), Err(format!("action certification failed: {e}"))),
    };
    line(5, "action certification", s, c5);
    let s = Instant::now();
    line(6, "double-coset audit", s, criterion_6(&tower));
    line(7, "resolution identities", Instant::now(), c7);
    let s = Instant::now();
    line(8, "negative controls", s, criterion_8());
    let s = Instant::now();
    line(9, "session determinism", s, criterion_9(&tower));

    if failed > 0 {
        println!("{failed} criterion/criteria failed");
        std::process::exit(1);
    }
}
