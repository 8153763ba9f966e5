//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so every line is printed even when an earlier criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use aap_core::exact::{rat, ratio, Poly, Symbol};
use aap_core::operators::build_m_specialized;
use aap_core::simulate::simulate_against_exact;
use aap_core::suite::{run_suite, Suite, SuiteConfig, SuiteReport};
use aap_core::ExactScalar;

const SEED: u64 = 42;
/// Frozen after calibration: TV at this seed is well inside the bound.
const SIM_SEED: u64 = 2024;
const SIM_EVENTS: u64 = 1_000_000;
const SIM_TV_BOUND: f64 = 0.02;

type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    passed: bool,
    detail: String,
}

fn suite(s: Suite, lmin: usize, lmax: usize, symbolic: bool, general: bool, samples: usize) -> SuiteReport {
    let cfg = SuiteConfig {
        lmin,
        lmax,
        symbolic,
        general,
        seed: SEED,
        samples,
    };
    run_suite(s, &cfg).unwrap_or_else(|e| panic!("{s} {lmin}..={lmax}: {e}"))
}

fn summarize(reports: &[SuiteReport]) -> Verdict {
    let mut parts = Vec::new();
    let mut passed = true;
    for r in reports {
        let failed: Vec<usize> = r.cases.iter().filter(|c| !c.passed).map(|c| c.len).collect();
        let mode = r.cases.first().map(|c| c.mode).unwrap_or("-");
        let (lo, hi) = (r.cases.iter().map(|c| c.len).min().unwrap_or(0), r.cases.iter().map(|c| c.len).max().unwrap_or(0));
        if failed.is_empty() {
            parts.push(format!("{} {mode} L={lo}..{hi}: {} ok", r.suite, r.cases.len()));
        } else {
            passed = false;
            let mut f = failed.clone();
            f.dedup();
            parts.push(format!("{} {mode} L={lo}..{hi}: failing L {f:?}", r.suite));
        }
    }
    Verdict {
        passed,
        detail: parts.join("; "),
    }
}

/// Printed generators: `a`, `b`, `1`, `0` off the diagonal, `*` on it.
const M1: [&str; 2] = ["* a+b", "a *"];
const M2: [&str; 4] = ["* b a 1", "0 * 1 a", "a 0 * b", "0 a 0 *"];
const M3: [&str; 8] = [
    "* b 0 1 a 0 1 0",
    "0 * 1 0 0 a 0 1",
    "0 0 * b 1 0 a 0",
    "0 0 0 * 0 1 0 a",
    "a 0 0 0 * b 0 1",
    "0 a 0 0 0 * 1 0",
    "0 0 a 0 0 0 * b",
    "0 0 0 a 0 0 0 *",
];

fn printed_entry(s: &str) -> Poly {
    let (a, b) = (Poly::var(Symbol::Alpha), Poly::var(Symbol::Beta));
    match s {
        "a" => a,
        "b" => b,
        "a+b" => a.add(&b),
        "1" => Poly::one(),
        "0" => Poly::zero(),
        other => panic!("unexpected printed entry {other}"),
    }
}

fn criterion_1() -> Verdict {
    let (a, b) = (Poly::var(Symbol::Alpha), Poly::var(Symbol::Beta));
    let mut bad = Vec::new();
    for (len, printed) in [(1, &M1[..]), (2, &M2[..]), (3, &M3[..])] {
        let m = build_m_specialized(len, &a, &b).unwrap();
        let n = printed.len();
        for (r, row) in printed.iter().enumerate() {
            for (c, tok) in row.split_whitespace().enumerate() {
                let want = if tok == "*" {
                    // diagonal completes the column sum to zero
                    let off = (0..n).filter(|&k| k != c).fold(Poly::zero(), |acc, k| {
                        acc.add(&printed_entry(printed[k].split_whitespace().nth(c).unwrap()))
                    });
                    off.neg()
                } else {
                    printed_entry(tok)
                };
                if *m.get(r, c) != want {
                    bad.push(format!("M{len}({r},{c}) = {} vs {want}", m.get(r, c)));
                }
            }
        }
        let col_sums_zero = (0..n).all(|c| (0..n).fold(Poly::zero(), |acc, r| acc.add(m.get(r, c))).is_zero());
        if !col_sums_zero {
            bad.push(format!("M{len} column sums"));
        }
    }
    Verdict {
        passed: bad.is_empty(),
        detail: if bad.is_empty() {
            "M1, M2, M3 match entry for entry; column sums vanish".into()
        } else {
            bad.join("; ")
        },
    }
}

fn criterion_2() -> Verdict {
    summarize(&[
        suite(Suite::Triangular, 1, 8, false, false, 5),
        suite(Suite::Triangular, 1, 4, true, false, 1),
    ])
}

fn criterion_3() -> Verdict {
    summarize(&[
        suite(Suite::Charpoly, 1, 6, false, false, 3),
        suite(Suite::Ratio, 1, 5, true, false, 1),
    ])
}

fn criterion_4() -> Verdict {
    summarize(&[
        suite(Suite::Btransform, 1, 5, true, false, 1),
        suite(Suite::Btransform, 1, 8, false, false, 3),
    ])
}

fn criterion_5() -> Verdict {
    summarize(&[
        suite(Suite::Blockrec, 2, 4, true, false, 1),
        suite(Suite::Blockrec, 2, 8, false, false, 3),
    ])
}

fn criterion_6() -> Verdict {
    summarize(&[
        suite(Suite::Partition, 1, 5, true, false, 1),
        suite(Suite::Partition, 1, 3, true, true, 1),
        suite(Suite::Steady, 1, 8, false, false, 2),
    ])
}

fn criterion_7() -> Verdict {
    let reports = [
        suite(Suite::Tma, 1, 4, true, false, 1),
        suite(Suite::Tma, 1, 6, false, false, 2),
    ];
    let mut v = summarize(&reports);
    // the first symbolic discrepancy is part of the report
    if let Some(c) = reports[0].cases.iter().find(|c| !c.passed) {
        let t = &c.detail["tma"];
        v.detail.push_str(&format!(
            "; first failure L={} at {}: M T = {}, T M = {}; propagation proportional: {}",
            c.len, t["first_difference"], t["lhs_entry"], t["rhs_entry"], c.detail["propagation"]["proportional"]
        ));
    }
    v
}

fn criterion_8() -> Verdict {
    let r = suite(Suite::Multiplicity, 1, 5, false, false, 2);
    let mut v = summarize(std::slice::from_ref(&r));
    let mut degenerate: Vec<String> = r
        .cases
        .iter()
        .filter(|c| c.detail["all_geometric_one"] == false)
        .map(|c| format!("L={}", c.len))
        .collect();
    degenerate.dedup();
    v.detail.push_str(&format!(
        "; geometric multiplicity below algebraic at {}",
        if degenerate.is_empty() { "none".into() } else { degenerate.join(",") }
    ));
    v
}

fn criterion_9() -> Verdict {
    let start = Instant::now();
    let r = simulate_against_exact(4, &ratio(1, 2), &rat(1), SIM_EVENTS, SIM_SEED, aap_core::simulate::DEFAULT_BURN_IN).unwrap();
    let secs = start.elapsed().as_secs_f64();
    Verdict {
        passed: r.tv_distance < SIM_TV_BOUND && secs < 30.0,
        detail: format!("TV = {:.5} (bound {SIM_TV_BOUND}), seed {SIM_SEED}, {secs:.1}s", r.tv_distance),
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("printed matrices", criterion_1),
        ("triangularization", criterion_2),
        ("characteristic polynomial", criterion_3),
        ("B-transform", criterion_4),
        ("block recursion", criterion_5),
        ("steady state and partition function", criterion_6),
        ("transfer matrices", criterion_7),
        ("degeneracy probe", criterion_8),
        ("simulator cross-check", criterion_9),
    ];
    let mut all = true;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = f();
        all &= v.passed;
        println!(
            "criterion {} ({name}): {} [{:.1}s] {}",
            i + 1,
            if v.passed { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            v.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
