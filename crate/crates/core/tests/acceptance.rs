//! Acceptance report: one line per criterion, then a nonzero exit if any
//! criterion regresses from its recorded state.

use std::time::{Duration, Instant};

use zigzag::report::Check;
use zigzag::suites::{run_suite, Suite, SuiteOptions, SuiteReport};
use zigzag::transfer::{build_contraction, verify_contraction};

struct Outcome {
    passed: bool,
    summary: String,
}

fn first_failure(reports: &[SuiteReport]) -> Option<String> {
    reports.iter().find(|r| !r.passed).map(|r| {
        let c = r.checks.iter().find(|c| !c.passed);
        match c {
            Some(c) => format!("n={}: {}: {}", r.n, c.name, c.witness.clone().unwrap_or_default()),
            None => format!("n={}: no checks ran", r.n),
        }
    })
}

fn count(reports: &[SuiteReport]) -> usize {
    reports.iter().map(|r| r.checks.len()).sum()
}

fn suite_range(suite: Suite, ns: std::ops::RangeInclusive<usize>, opts: &SuiteOptions) -> Vec<SuiteReport> {
    ns.map(|n| run_suite(suite, n, opts)).collect()
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn within(limit: u64, t: Duration) -> bool {
    t <= Duration::from_secs(limit)
}

fn range_criterion(suite: Suite, ns: std::ops::RangeInclusive<usize>, limit: u64, what: &str) -> Outcome {
    let opts = SuiteOptions::default();
    let (reports, t) = timed(|| suite_range(suite, ns.clone(), &opts));
    let fail = first_failure(&reports);
    Outcome {
        passed: fail.is_none() && within(limit, t),
        summary: match fail {
            Some(f) => format!("{what}: {f}"),
            None => format!(
                "{what}: {} checks, n = {}..{}, {:.2}s (limit {limit}s)",
                count(&reports),
                ns.start(),
                ns.end(),
                t.as_secs_f64()
            ),
        },
    }
}

fn criterion_4() -> Outcome {
    let mut side = Vec::new();
    for n in 2..=6 {
        let report = match build_contraction(n) {
            Ok(ct) => verify_contraction(&ct),
            Err(e) => {
                return Outcome {
                    passed: false,
                    summary: format!("n={n}: {e}"),
                }
            }
        };
        if let Some(c) = report.checks.iter().find(|c| !c.passed) {
            return Outcome {
                passed: false,
                summary: format!("n={n}: {}", c.name),
            };
        }
        let ok = report.side_conditions.iter().all(|c| c.passed);
        side.push(format!("{n}:{}", if ok { "hold" } else { "fail" }));
    }
    Outcome {
        passed: true,
        summary: format!(
            "pj = id and dH + Hd = id + jp for n = 2..6; side conditions H² = Hj = pH = 0: {}",
            side.join(" ")
        ),
    }
}

fn criterion_5() -> Outcome {
    let opts = SuiteOptions::default();
    let mut reports = Vec::new();
    let mut t6 = Duration::ZERO;
    for n in 3..=6 {
        let (r, t) = timed(|| run_suite(Suite::Transfer, n, &opts));
        if n == 6 {
            t6 = t;
        }
        reports.push(r);
    }
    let fail = first_failure(&reports);
    let m3: Vec<String> = reports
        .iter()
        .map(|r| format!("{}:{}", r.n, r.details["m3"].as_array().map_or(0, |a| a.len())))
        .collect();
    Outcome {
        passed: fail.is_none() && within(120, t6),
        summary: fail.unwrap_or_else(|| {
            format!(
                "m3 nonzero values by n {}; m4..m6 = 0; A∞ relations through arity 6; n = 6 in {:.2}s (limit 120s)",
                m3.join(" "),
                t6.as_secs_f64()
            )
        }),
    }
}

fn criterion_6() -> Outcome {
    let opts = SuiteOptions::default();
    let (reports, t) = timed(|| suite_range(Suite::Hochschild, 3..=6, &opts));
    let fail = first_failure(&reports);
    let certified = reports
        .iter()
        .filter(|r| r.n >= 4)
        .all(|r| r.details["not_coboundary"] == true && r.details["certificate"].is_array());
    let n3 = reports[0].details["not_coboundary"] == true;
    Outcome {
        passed: fail.is_none() && certified && within(30, t),
        summary: fail.unwrap_or_else(|| {
            format!(
                "δm3 = 0 and m3 not a coboundary with certificate for n = 4..6; n = 3: {}; slice equations reproduced; {:.2}s (limit 30s)",
                if n3 { "not a coboundary" } else { "coboundary" },
                t.as_secs_f64()
            )
        }),
    }
}

/// Criterion 7 has a recorded finding: the map with vanishing linear part
/// fails the morphism identity while the one with `f_{1,1}` = multiplication
/// passes. Returns the outcome and whether the recorded state holds.
fn criterion_7() -> (Outcome, bool) {
    let opts = SuiteOptions::default();
    let reports = suite_range(Suite::Bimodule, 3..=5, &opts);
    let corrected = first_failure(&reports);
    let literal: Vec<&Check> = reports
        .iter()
        .flat_map(|r| r.findings.iter())
        .filter(|c| c.name.contains("f_{1,1} = 0") && !c.passed)
        .collect();
    let literal_witness = literal.first().and_then(|c| c.witness.clone()).unwrap_or_default();
    let literal_fails_everywhere = literal.len() == reports.iter().map(|r| r.n - 1).sum::<usize>();
    let recorded = corrected.is_none() && literal_fails_everywhere;
    let summary = match &corrected {
        Some(f) => format!("B_k / diagonal / corrected f: {f}"),
        None => format!(
            "f with vanishing linear part f_{{1,1}} = 0 violates the morphism identity for every k, n = 3..5, e.g. {literal_witness}; B_k, diagonal C and f with f_{{1,1}} = multiplication pass through total arity 6",
        ),
    };
    (
        Outcome {
            passed: corrected.is_none() && literal.is_empty(),
            summary,
        },
        recorded,
    )
}

fn criterion_9() -> Outcome {
    let opts = SuiteOptions {
        perturb: true,
        samples: 10,
        ..SuiteOptions::default()
    };
    let mut survivors = Vec::new();
    let mut runs = 0;
    for s in Suite::ALL {
        for n in 2..=5 {
            runs += 1;
            let r = run_suite(s, n, &opts);
            let witnessed = r.checks.iter().any(|c| !c.passed && c.witness.is_some());
            if r.passed || !witnessed {
                survivors.push(format!("{s} n={n}"));
            }
        }
    }
    Outcome {
        passed: survivors.is_empty(),
        summary: if survivors.is_empty() {
            format!("all {runs} perturbed suite runs (7 suites, n = 2..5) fail with a witness")
        } else {
            format!("perturbation not detected: {}", survivors.join(", "))
        },
    }
}

fn main() {
    let mut required_ok = true;
    let report = |k: usize, o: Outcome, elapsed: Duration, required: bool| {
        println!(
            "criterion {k}: {} [{:.2}s] {}",
            if o.passed { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            o.summary
        );
        o.passed || !required
    };

    let (o, t) = timed(|| {
        range_criterion(
            Suite::Algebra,
            2..=8,
            10,
            "three algebras, dims, associativity, unit, grading",
        )
    });
    required_ok &= report(1, o, t, true);
    let (o, t) = timed(|| range_criterion(Suite::Dg, 2..=8, 30, "d² = 0, Leibniz, all left and right resolutions"));
    required_ok &= report(2, o, t, true);
    let (o, t) = timed(|| {
        range_criterion(
            Suite::Endo,
            2..=8,
            120,
            "relations, d-images, block bases, homology tables, H(E′) ≅ Aₙ (n ≤ 6), E′ ↪ E (n ≤ 5), S",
        )
    });
    required_ok &= report(3, o, t, true);
    let (o, t) = timed(criterion_4);
    required_ok &= report(4, o, t, true);
    let (o, t) = timed(criterion_5);
    required_ok &= report(5, o, t, true);
    let (o, t) = timed(criterion_6);
    required_ok &= report(6, o, t, true);
    let ((o, recorded), t) = timed(criterion_7);
    report(7, o, t, false);
    if !recorded {
        println!("criterion 7 departs from its recorded state");
        required_ok = false;
    }
    let (o, t) = timed(|| {
        range_criterion(
            Suite::Burau,
            2..=8,
            30,
            "TL relations, braid relations, q = -1 decategorification",
        )
    });
    required_ok &= report(8, o, t, true);
    let (o, t) = timed(criterion_9);
    required_ok &= report(9, o, t, true);

    if !required_ok {
        std::process::exit(1);
    }
}
