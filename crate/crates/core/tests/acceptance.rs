//! Acceptance gate. Runs without the libtest harness so every line below
//! is printed; exits non-zero if any check fails.

use std::time::{Duration, Instant};

use minmatch::canon::is_isomorphic;
use minmatch::cli;
use minmatch::family::{theorem1_bound, FamilyReport};
use minmatch::graph::named;
use minmatch::verify::{
    claims_suite, exchange_suite, lemma1_suite, lemma2_suite, minimal_graphs, oracle_suite, SuiteOptions,
    SuiteReport,
};
use minmatch::Multigraph;
use serde_json::Value;

struct Gate {
    failed: usize,
}

impl Gate {
    fn check(&mut self, id: u32, name: &str, ok: bool, detail: String) {
        let verdict = if ok { "PASS" } else { "FAIL" };
        println!("criterion {id}: {verdict}  {name}  ({detail})");
        if !ok {
            self.failed += 1;
        }
    }
}

/// Runs `search` through the command-line entry point and returns the
/// parsed report and the elapsed time.
fn search(k: u64, max_vertices: usize) -> (Value, Duration) {
    let start = Instant::now();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let args = ["minmatch", "search", "--k", &k.to_string(), "--max-vertices", &max_vertices.to_string()];
    let status = cli::run(args, &mut std::io::empty(), &mut out, &mut err);
    let elapsed = start.elapsed();
    assert_eq!(status, 0, "search failed: {}", String::from_utf8_lossy(&out));
    (serde_json::from_slice(&out).expect("search emits JSON"), elapsed)
}

fn member_graphs(report: &Value) -> Vec<Multigraph> {
    report["members"]
        .as_array()
        .expect("members array")
        .iter()
        .map(|m| m["canonical"].as_str().expect("canonical string").parse().expect("valid mg-v1"))
        .collect()
}

/// Same multiset of graphs up to isomorphism.
fn same_classes(found: &[Multigraph], expected: &[Multigraph]) -> bool {
    found.len() == expected.len()
        && expected
            .iter()
            .all(|e| found.iter().filter(|f| is_isomorphic(f, e).unwrap()).count() == 1)
}

fn suite_detail(r: &SuiteReport) -> String {
    let mut s = format!("k={} checked={} failed={}", r.k, r.checked, r.failed);
    if let Some(f) = r.failures.first() {
        s.push_str(&format!(" first failure: {f}"));
    }
    s
}

fn main() {
    let mut gate = Gate { failed: 0 };

    let (r1, t1) = search(1, 6);
    let n1 = member_graphs(&r1).len();
    gate.check(
        1,
        "search k=1 up to 6 vertices has no members",
        n1 == 0 && t1 < Duration::from_secs(10),
        format!("{n1} members in {t1:.2?}"),
    );

    let (r2, t2) = search(2, 6);
    let m2 = member_graphs(&r2);
    gate.check(
        2,
        "search k=2 up to 6 vertices yields exactly C2",
        same_classes(&m2, &[named::c2()]) && t2 < Duration::from_secs(30),
        format!("{} members in {t2:.2?}", m2.len()),
    );

    let (r3, t3) = search(3, 6);
    let m3 = member_graphs(&r3);
    let expected3 = [named::c2().disjoint_union(&named::c2()), named::theta(), named::k4()];
    gate.check(
        3,
        "search k=3 up to 6 vertices yields two 2-cycles, theta, K4",
        same_classes(&m3, &expected3) && t3 < Duration::from_secs(600),
        format!("{} members in {t3:.2?}", m3.len()),
    );

    let mut lemma1_ok = true;
    let mut lemma1_detail = Vec::new();
    let mut minimal = Vec::new();
    for k in [2, 3, 4] {
        let opts = SuiteOptions::new(k, 8);
        let found = minimal_graphs(&opts).expect("enumeration within guard");
        let r = lemma1_suite(&opts, &found);
        lemma1_ok &= r.ok() && r.checked > 0;
        lemma1_detail.push(format!(
            "{}; {} graphs examined, {} of max degree k+1",
            suite_detail(&r),
            found.examined,
            found.examined_above_k
        ));
        minimal.push((opts, found));
    }
    gate.check(
        4,
        "degree and matching-count bounds on minimal graphs up to 8 vertices",
        lemma1_ok,
        lemma1_detail.join(" | "),
    );

    let start = Instant::now();
    let mut lemma2_ok = true;
    let mut lemma2_detail = Vec::new();
    for k in [1, 2, 3] {
        let r = lemma2_suite(&SuiteOptions::new(k, 6)).expect("start graphs available");
        lemma2_ok &= r.ok() && r.checked >= 1000;
        lemma2_detail.push(suite_detail(&r));
    }
    let t5 = start.elapsed();
    gate.check(
        5,
        "random odd subdivisions and K2 additions keep counts and classification",
        lemma2_ok && t5 < Duration::from_secs(120),
        format!("{} in {t5:.2?}", lemma2_detail.join(" | ")),
    );

    let r6 = oracle_suite(&SuiteOptions::new(1, 5)).expect("valid bound");
    gate.check(
        6,
        "backtracking count equals subset oracle",
        r6.ok() && r6.counters["random"] == 10_000,
        format!("{} ({} exhaustive, {} random)", suite_detail(&r6), r6.counters["exhaustive"], r6.counters["random"]),
    );

    let r7 = exchange_suite(&SuiteOptions::new(1, 14));
    gate.check(
        7,
        "exchange involution and symmetric-difference decomposition",
        r7.ok() && r7.checked == 10_000,
        suite_detail(&r7),
    );

    let mut claims_ok = true;
    let mut claims_detail = Vec::new();
    for (opts, found) in &minimal {
        let r = claims_suite(opts, found).expect("k >= 2");
        claims_ok &= r.ok();
        claims_detail.push(format!("{}, {} new matchings", suite_detail(&r), r.counters.get("new_matchings").unwrap_or(&0)));
    }
    gate.check(
        8,
        "added edges lie in every new perfect matching and form a matching",
        claims_ok,
        claims_detail.join(" | "),
    );

    let report2: FamilyReport = serde_json::from_value(r2.clone()).expect("report schema");
    let bound = theorem1_bound(2, &report2);
    gate.check(9, "size bound for k=2 over {C2}", bound == Ok(Some(30)), format!("{bound:?}"));

    println!("{} of 9 criteria passed", 9 - gate.failed);
    if gate.failed > 0 {
        std::process::exit(1);
    }
}

