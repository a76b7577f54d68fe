//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
//!
//! Criterion 9 needs the symbolic n = 4 ground state and runs only when
//! `CROSSLOOP_FULL_N4=1`; otherwise it is reported as SKIP.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use crossloop::brauer;
use crossloop::degrees;
use crossloop::fixtures;
use crossloop::groundstate::{build, GroundState};
use crossloop::points::{generic_points, rng, small_rational};
use crossloop::pointwise;
use crossloop::poly::Rational;
use crossloop::report::CheckReport;
use crossloop::suites::{bidegree_routes, Cache};
use crossloop::sumrules;

type Outcome = Result<String, String>;

fn require(reports: &[CheckReport]) -> Result<(), String> {
    match reports.iter().find(|r| r.is_hard_failure()) {
        Some(r) => Err(r.line()),
        None => Ok(()),
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    if elapsed < limit {
        Ok(())
    } else {
        Err(format!("took {elapsed:.2?}, limit {limit:?}"))
    }
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_crossloop"))
}

fn criterion_1(dir: &Path) -> Outcome {
    let t = Instant::now();
    let status = bin()
        .args(["--out", dir.to_str().unwrap(), "gen", "--n", "2"])
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = t.elapsed();
    if !status.status.success() {
        return Err(format!("gen exited with {}", status.status));
    }
    let text = std::fs::read_to_string(dir.join("psi-2.json")).map_err(|e| e.to_string())?;
    let doc: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let generated: BTreeMap<String, String> = doc["entries"]
        .as_object()
        .ok_or("no entries")?
        .iter()
        .map(|(k, v)| (k.clone(), v.as_str().unwrap_or_default().to_string()))
        .collect();
    require(&[fixtures::check_psi2(&generated)])?;
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!("3 entries byte-identical, {elapsed:.2?}"))
}

fn criterion_2(ground: &mut BTreeMap<usize, GroundState>) -> Outcome {
    let t = Instant::now();
    let gs = build(3).map_err(|e| e.to_string())?;
    let (edges_report, edges) = gs.check_word_independence(1);
    let elapsed = t.elapsed();
    if gs.entries.len() != 15 || gs.words.len() != 15 {
        return Err(format!("{} entries, {} words", gs.entries.len(), gs.words.len()));
    }
    require(&[edges_report, fixtures::check_words3(&gs)])?;
    within(elapsed, Duration::from_secs(10))?;
    ground.insert(3, gs);
    Ok(format!("15 patterns, {edges} edges consistent, listed words replay, {elapsed:.2?}"))
}

fn criterion_3(ground: &BTreeMap<usize, GroundState>) -> Outcome {
    let out = bin().args(["numbers", "--n-max", "6"]).output().map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("numbers exited with {}", out.status));
    }
    let text = String::from_utf8(out.stdout).map_err(|e| e.to_string())?;
    let mut lines = text.lines();
    if lines.next() != Some("n,determinant,pfaffian,lgv,match") {
        return Err("unexpected CSV header".into());
    }
    let expected = fixtures::numbers().values;
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    if rows.len() != expected.len() {
        return Err(format!("{} rows", rows.len()));
    }
    for (k, (row, e)) in rows.iter().zip(&expected).enumerate() {
        let n = k + 1;
        if row[1] != e || row[2] != e {
            return Err(format!("n={n}: determinant {} pfaffian {} expected {e}", row[1], row[2]));
        }
        if n <= 4 && row[3] != e {
            return Err(format!("n={n}: lattice paths {}", row[3]));
        }
        if row[4] != "true" {
            return Err(format!("n={n}: routes disagree"));
        }
    }
    for (n, gs) in ground {
        let h = gs.homogeneous_sum();
        if h.to_string() != expected[n - 1] {
            return Err(format!("n={n}: full build gives {h}"));
        }
    }
    Ok("determinant, Pfaffian and lattice paths (n<=4) agree; full builds n<=3 agree".into())
}

fn criterion_4(ground: &BTreeMap<usize, GroundState>, cache: &mut Cache) -> Outcome {
    let t = Instant::now();
    let mut reports: Vec<CheckReport> = (1..=3).map(|n| sumrules::perm_sum_check(&ground[&n])).collect();
    let deltas = cache.deltas(4).map_err(|e| e.to_string())?;
    reports.extend((1..=4).map(|n| degrees::check_delta_sum(&deltas[&n])));
    let elapsed = t.elapsed();
    require(&reports)?;
    within(elapsed, Duration::from_secs(60))?;
    Ok(format!("permutation sums n<=3, multidegree sums n<=4, {elapsed:.2?}"))
}

fn criterion_5(ground: &BTreeMap<usize, GroundState>) -> Outcome {
    let mut detail = Vec::new();
    for n in 1..=3 {
        let points = sumrules::sum_rule_points(n, 100, 2024);
        let per_sweep = 2 * n * (n - 1) + 1;
        if points.len() < 2 * n * per_sweep + 100 {
            return Err(format!("n={n}: only {} points", points.len()));
        }
        let r = sumrules::full_sum_check(&ground[&n], &points).map_err(|e| e.to_string())?;
        require(&[r])?;
        detail.push(format!("n={n}: {} points", points.len()));
    }
    Ok(detail.join(", "))
}

fn criterion_6(ground: &BTreeMap<usize, GroundState>) -> Outcome {
    let mut reports = Vec::new();
    for n in 2..=3 {
        for i in 1..=2 * n {
            reports.push(sumrules::recursion_check(&ground[&n], &ground[&(n - 1)], i));
        }
    }
    require(&reports)?;
    Ok(format!("{} sites", reports.len()))
}

fn criterion_7(cache: &mut Cache) -> Outcome {
    let t = Instant::now();
    let mut reports = Vec::new();
    for n in [3, 4] {
        let (delta, schubert) = bidegree_routes(n, cache).map_err(|e| e.to_string())?;
        if n == 3 {
            reports.push(fixtures::check_bidegrees3(&delta, "delta"));
            reports.push(fixtures::check_bidegrees3(&schubert, "schubert"));
        } else {
            reports.push(fixtures::check_bidegrees4(&delta, "delta"));
            reports.push(fixtures::check_bidegrees4(&schubert, "schubert"));
        }
        reports.push(degrees::check_bidegrees(n, &delta));
        reports.push(degrees::check_bidegrees(n, &schubert));
    }
    let elapsed = t.elapsed();
    require(&reports)?;
    within(elapsed, Duration::from_secs(60))?;
    Ok(format!("6 + 24 values by both routes, sums (A+B)^(n(n-1)), {elapsed:.2?}"))
}

fn criterion_8(ground: &BTreeMap<usize, GroundState>) -> Outcome {
    let mut reports = Vec::new();
    for n in 1..=3 {
        reports.push(brauer::check_brauer_relations(n));
    }
    let mut g = rng(8);
    for _ in 0..50 {
        let (u, v) = (small_rational(&mut g), small_rational(&mut g));
        for n in 2..=3 {
            reports.push(brauer::check_yang_baxter(n, &u, &v));
        }
    }
    for (n, gs) in ground {
        reports.push(gs.check_theta_involution());
        reports.push(gs.check_delta_idempotence());
        reports.push(gs.check_leading_terms());
        reports.push(gs.check_vanishing());
        let count = if *n <= 2 { 20 } else { 5 };
        reports.push(gs.check_tprime_eigenvector(&generic_points(2 * n, count, 80 + *n as u64)));
    }
    reports.push(ground[&3].check_phi());
    for (n, gs) in ground {
        let p = degrees::refined_poly(gs).map_err(|e| e.to_string())?;
        reports.push(fixtures::check_refined(*n, &p));
    }
    require(&reports)?;
    // P_4 is a stretch target; it comes from the pointwise route, not the symbolic build.
    let stretch = match degrees::refined_poly_pointwise(4) {
        Ok(p) => {
            let r = fixtures::check_refined(4, &p);
            if r.pass {
                "P_4 reproduced pointwise".to_string()
            } else {
                format!("P_4 stretch not reproduced: {}", r.line())
            }
        }
        Err(e) => format!("P_4 stretch not computed: {e}"),
    };
    Ok(format!("{} checks; {stretch}", reports.len()))
}

fn criterion_9() -> Option<Outcome> {
    if std::env::var("CROSSLOOP_FULL_N4").ok().as_deref() != Some("1") {
        return None;
    }
    Some((|| {
        let gs = build(4).map_err(|e| e.to_string())?;
        let h = gs.homogeneous_sum();
        if h.to_string() != "82977" {
            return Err(format!("homogeneous sum {h}"));
        }
        require(&[sumrules::perm_sum_check(&gs)])?;
        Ok("symbolic n=4 build: 82977 and the permutation sum".to_string())
    })())
}

/// Sample-point evidence at n = 4 that needs no symbolic build; informational.
fn pointwise_evidence() -> String {
    let sums = sumrules::pointwise_sum_check(4, &generic_points(8, 10, 4));
    let homogeneous = pointwise::homogeneous_values(4, 1).map(|v| v.values().sum::<Rational>());
    format!(
        "n=4 pointwise: {}; homogeneous value {}",
        sums.map(|r| r.line()).unwrap_or_else(|e| e.to_string()),
        homogeneous.map(|h| h.to_string()).unwrap_or_else(|e| e.to_string())
    )
}

fn main() -> ExitCode {
    let dir = tempfile::tempdir().expect("temporary directory");
    let mut ground: BTreeMap<usize, GroundState> = BTreeMap::new();
    for n in 1..=2 {
        ground.insert(n, build(n).expect("small builds succeed"));
    }
    let mut cache = Cache::default();
    let mut failed = false;
    let mut report = |id: u8, title: &str, outcome: Outcome| {
        match outcome {
            Ok(detail) => println!("PASS criterion {id}: {title} ({detail})"),
            Err(why) => {
                failed = true;
                println!("FAIL criterion {id}: {title} ({why})");
            }
        }
    };
    report(1, "size-2 entries from gen", criterion_1(dir.path()));
    let c2 = criterion_2(&mut ground);
    let have_three = ground.contains_key(&3);
    report(2, "size-3 word table and edge consistency", c2);
    if !have_three {
        ground.insert(3, build(3).expect("size-3 build"));
    }
    report(3, "homogeneous integer sequence", criterion_3(&ground));
    report(4, "permutation-sector sum rules", criterion_4(&ground, &mut cache));
    report(5, "Pfaffian sum rule certified at sample points", criterion_5(&ground));
    report(6, "size recursion at every site", criterion_6(&ground));
    report(7, "bidegree tables for n = 3, 4", criterion_7(&mut cache));
    report(8, "property suites", criterion_8(&ground));
    match criterion_9() {
        Some(outcome) => report(9, "full symbolic n = 4 build", outcome),
        None => println!("SKIP criterion 9: full symbolic n = 4 build (gated; set CROSSLOOP_FULL_N4=1)"),
    }
    println!("INFO {}", pointwise_evidence());
    if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
