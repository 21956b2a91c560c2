//! Acceptance gate. Prints one line per criterion and exits nonzero if any
//! criterion fails. All comparisons are exact; only wall-clock limits carry a
//! tolerance, and those are the limits printed on each line.

mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use modp_fgl::fgl::FormalGroupLaw;
use modp_fgl::lazard::{default_truncation, lazard_hilbert_function, LazardMode, LazardReport};
use modp_fgl::series::{check_rstar_diagnostic, check_v1_homology};
use modp_fgl::Prime;
use proptest::test_runner::{Config, TestRunner};

const PROPERTY_CASES: u32 = 1000;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn p(n: u64) -> Prime {
    Prime::new(n).unwrap()
}

/// Partitions of `n` into positive parts, by recursion on the largest part.
fn partitions(n: u32, max: u32) -> u64 {
    if n == 0 {
        return 1;
    }
    (1..=max.min(n)).map(|k| partitions(n - k, k)).sum()
}

/// Monomials of each degree in the free graded-commutative algebra on
/// `a_p` (degree 2p), `b_r` (2r) and `s_r` (2r+1) for `r >= 1`,
/// `r != p^k - 1`, counted by walking exponent vectors.
fn theorem_oracle(prime: u32, max: u32) -> Vec<u64> {
    let excluded = |r: u32| {
        let mut q = prime;
        while q - 1 < r {
            q *= prime;
        }
        q - 1 == r
    };
    let mut gens = Vec::new();
    if 2 * prime <= max {
        gens.push(2 * prime);
    }
    for r in (1..=max / 2).filter(|&r| !excluded(r)) {
        gens.push(2 * r);
        gens.push(2 * r + 1);
    }
    fn walk(gens: &[u32], degree: u32, max: u32, counts: &mut [u64]) {
        let Some((&d, rest)) = gens.split_first() else {
            counts[degree as usize] += 1;
            return;
        };
        let limit = if d % 2 == 1 { 1 } else { u32::MAX };
        let mut k = 0;
        while k <= limit && degree + k * d <= max {
            walk(rest, degree + k * d, max, counts);
            k += 1;
        }
    }
    let mut counts = vec![0; max as usize + 1];
    walk(&gens, 0, max, &mut counts);
    counts
}

fn dims(report: &LazardReport) -> Vec<u64> {
    report.dimensions()
}

fn criterion_1() -> Verdict {
    let mut failures = Vec::new();
    for (prime, d) in [(3, 10), (5, 12)] {
        let report = FormalGroupLaw::additive(p(prime), d).unwrap().check_all();
        if !report.passed {
            failures.push(format!("p={prime} D={d}"));
        }
    }
    if failures.is_empty() {
        verdict(true, "additive(3, 10) and additive(5, 12) pass unit, associativity, commutativity, p-series, e-independence")
    } else {
        verdict(false, format!("axiom failures for {}", failures.join(", ")))
    }
}

/// Nonzero terms of `(1 + x)^p - 1` reduced mod p, untruncated, written in
/// the output grammar.
fn binomial_oracle(prime: u64) -> String {
    let mut terms = Vec::new();
    let mut c: u128 = 1;
    for k in 1..=prime {
        c = c * (prime - k + 1) as u128 / k as u128;
        let r = c % prime as u128;
        if r != 0 {
            let var = if k == 1 {
                "x".to_string()
            } else {
                format!("x^{k}")
            };
            terms.push(if r == 1 { var } else { format!("{r}*{var}") });
        }
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn criterion_2() -> Verdict {
    const D: u32 = 8;
    let mut parts = Vec::new();
    let mut pass = true;
    for prime in [3, 5] {
        let got = FormalGroupLaw::multiplicative_even(p(prime), D)
            .unwrap()
            .p_series();
        let expected = ("0".to_string(), binomial_oracle(prime));
        let got = (got.odd.to_string(), got.even.to_string());
        let ok = got == expected;
        pass &= ok;
        let mut part = format!(
            "p={prime}: got ({}, {}), expected ({}, {})",
            got.0, got.1, expected.0, expected.1
        );
        if !ok {
            let needed = 2 * prime as u32;
            let wider = FormalGroupLaw::multiplicative_even(p(prime), needed)
                .unwrap()
                .p_series();
            part.push_str(&format!(
                " [x^{prime} has degree {needed} > D={D}; at D={needed}: ({}, {})]",
                wider.odd, wider.even
            ));
        }
        parts.push(part);
    }
    verdict(pass, parts.join("; "))
}

fn criterion_3() -> Verdict {
    let report = LazardReport::compute(p(3), 8, LazardMode::Ordinary, None).unwrap();
    let oracle: Vec<u64> = (0..=8u32)
        .map(|d| {
            if d % 2 == 0 {
                partitions(d / 2, d / 2)
            } else {
                0
            }
        })
        .collect();
    let got = dims(&report);
    let pass = got == oracle && oracle == [1, 0, 1, 0, 2, 0, 3, 0, 5];
    verdict(
        pass,
        format!("computed {got:?}, partition oracle {oracle:?}"),
    )
}

fn criterion_4() -> (Verdict, Vec<u64>) {
    let report = LazardReport::compute(p(3), 7, LazardMode::Modp, None).unwrap();
    let oracle = theorem_oracle(3, 7);
    let got = dims(&report);
    let mismatched: Vec<usize> = (0..got.len()).filter(|&i| got[i] != oracle[i]).collect();
    let pass =
        oracle == [1, 0, 1, 1, 1, 1, 3, 2] && report.expected == oracle && mismatched.is_empty();
    let mut detail = format!("computed {got:?}, theorem {oracle:?}");
    if !mismatched.is_empty() {
        detail.push_str(&format!(", mismatch in degrees {mismatched:?}"));
    }
    (verdict(pass, detail), got)
}

fn criterion_5(reference: &[u64]) -> Verdict {
    let d = default_truncation(7);
    let mut parts = Vec::new();
    let mut pass = true;
    for t in [d + 2, d + 4] {
        let got: Vec<u64> = lazard_hilbert_function(p(3), 7, t)
            .unwrap()
            .iter()
            .map(|x| x.dimension as u64)
            .collect();
        pass &= got == reference;
        parts.push(format!("D={t}: {got:?}"));
    }
    verdict(pass, format!("D={d}: {reference:?}; {}", parts.join("; ")))
}

fn criterion_6() -> Verdict {
    let report = check_v1_homology(p(3), 20).unwrap();
    match report.first_discrepancy {
        None => verdict(
            true,
            format!(
                "equal in degrees 0..=20, degree 20 = {}",
                report.rows[20].lhs
            ),
        ),
        Some(d) => verdict(false, format!("first discrepancy in degree {d}")),
    }
}

fn criterion_7() -> Verdict {
    let config = Config {
        cases: PROPERTY_CASES,
        failure_persistence: None,
        ..Config::default()
    };
    let mut results = Vec::new();
    macro_rules! suite {
        ($name:expr, $strategy:expr, $body:expr) => {{
            let mut runner = TestRunner::new(config.clone());
            let outcome = runner.run(&$strategy, $body);
            results.push(($name, outcome.map_err(|e| e.to_string())));
        }};
    }
    suite!("graded-sign law", common::sign_law_case(), common::sign_law);
    suite!(
        "substitution homomorphism",
        common::substitution_case(),
        common::substitution_homomorphism
    );
    suite!(
        "truncation coherence",
        common::truncation_case(),
        common::truncation_coherence
    );
    suite!(
        "rank invariances",
        common::rank_case(),
        common::rank_invariances
    );
    let pass = results.iter().all(|(_, r)| r.is_ok());
    let detail = results
        .iter()
        .map(|(name, r)| match r {
            Ok(()) => format!("{name}: {PROPERTY_CASES} ok"),
            Err(e) => format!("{name}: {e}"),
        })
        .collect::<Vec<_>>()
        .join("; ");
    verdict(pass, detail)
}

fn criterion_8() -> Verdict {
    let report = check_rstar_diagnostic(p(3), 10).unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_modp-fgl"))
        .args([
            "series",
            "--mode",
            "rstar-diagnostic",
            "--prime",
            "3",
            "--cap",
            "10",
        ])
        .output()
        .unwrap()
        .status;
    let flagged = report.unequal_degrees();
    let pass = status.code() == Some(0) && report.rows.len() == 11 && flagged.contains(&2);
    verdict(
        pass,
        format!(
            "exit {:?}, degree 2 lhs={} rhs={}, flagged degrees {flagged:?}",
            status.code(),
            report.rows[2].lhs,
            report.rows[2].rhs
        ),
    )
}

fn report(
    n: u32,
    name: &str,
    limit: Duration,
    tolerance: &str,
    run: impl FnOnce() -> Verdict,
) -> bool {
    let start = Instant::now();
    let v = run();
    let elapsed = start.elapsed();
    let in_time = elapsed <= limit;
    let pass = v.pass && in_time;
    println!(
        "criterion {n} {} | {name} | {} | tolerance: {tolerance}, time {:.3}s (limit {}s{})",
        if pass { "PASS" } else { "FAIL" },
        v.detail,
        elapsed.as_secs_f64(),
        limit.as_secs(),
        if in_time { "" } else { ", exceeded" },
    );
    pass
}

fn main() {
    let secs = Duration::from_secs;
    let mut all = true;
    all &= report(
        1,
        "additive-law axiom suite",
        secs(5),
        "exact over F_p",
        criterion_1,
    );
    all &= report(2, "p-series oracle", secs(5), "exact over F_p", criterion_2);
    all &= report(
        3,
        "ordinary Lazard calibration",
        secs(120),
        "exact integer dims",
        criterion_3,
    );
    let mut reference = Vec::new();
    all &= report(
        4,
        "mod-p Lazard ring vs F_p[a_p, b_r, s_r]",
        secs(600),
        "exact integer dims",
        || {
            let (v, got) = criterion_4();
            reference = got;
            v
        },
    );
    all &= report(
        5,
        "truncation stability",
        secs(600),
        "exact integer dims",
        || criterion_5(&reference),
    );
    all &= report(
        6,
        "filtration identity",
        secs(1),
        "exact integer coefficients",
        criterion_6,
    );
    all &= report(
        7,
        "property suites",
        secs(600),
        "zero failures in 1000 cases each",
        criterion_7,
    );
    all &= report(
        8,
        "rstar diagnostic",
        secs(60),
        "report only, degree 2 flagged",
        criterion_8,
    );
    if !all {
        println!("acceptance: some criteria FAIL");
        std::process::exit(1);
    }
    println!("acceptance: all criteria PASS");
}
