//! The twelve acceptance criteria, each at its stated tolerance. Prints one
//! PASS/FAIL line per criterion; exits non-zero if a criterion fails for a
//! reason other than the documented zero-count conflict (criterion 10).

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use meijer::positivity::{find_zeros_thm42, supermajorization, ZeroScan};
use meijer::verify::{run_suite, CaseRow, Suite, SuiteOptions, SuiteReport};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 2026;

struct Verdict {
    pass: bool,
    summary: String,
    /// A failure that is explained and expected; does not fail the run.
    documented: bool,
}

impl Verdict {
    fn from_reports(reports: &[SuiteReport], extra: Result<(), String>) -> Self {
        let rows: Vec<&CaseRow> = reports.iter().flat_map(|r| &r.rows).collect();
        let failed: Vec<&CaseRow> = rows.iter().copied().filter(|r| !r.pass).collect();
        let mut summary = reports
            .iter()
            .map(|r| format!("{}: {} rows, max residual {:.3e}", r.suite, r.rows.len(), r.max_residual()))
            .collect::<Vec<_>>()
            .join("; ");
        for f in failed.iter().take(5) {
            summary += &format!("\n      failed {} case {} [{}] {} residual {:e} > {:e} {}", f.suite, f.case, f.check, f.params, f.residual, f.tol, f.note.as_deref().unwrap_or(""));
        }
        if let Err(e) = &extra {
            summary += &format!("\n      {e}");
        }
        Verdict { pass: failed.is_empty() && !rows.is_empty() && extra.is_ok(), summary, documented: false }
    }
}

fn suite(s: Suite) -> SuiteReport {
    run_suite(s, &SuiteOptions { seed: SEED, ..SuiteOptions::default() })
}

fn require(cond: bool, what: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.to_string())
    }
}

fn has_check(r: &SuiteReport, check: &str) -> bool {
    r.rows.iter().any(|row| row.check == check)
}

/// The `a` vector from a row label `a=(x,y) b=(...) ...`.
fn a_values(params: &str) -> Vec<f64> {
    let start = params.find("a=(").map(|i| i + 3).unwrap_or(0);
    let end = params[start..].find(')').map(|i| i + start).unwrap_or(start);
    params[start..end].split(',').filter_map(|x| x.trim().parse().ok()).collect()
}

fn criterion_1() -> Verdict {
    let r = suite(Suite::Chain);
    let extra = require(r.rows.len() == 7 + 2 * 9, "expected 7 order checks and 9 pairs of moment checks");
    Verdict::from_reports(&[r], extra)
}

fn criterion_2() -> Verdict {
    let r = suite(Suite::G0ClosedForm);
    let extra = require(r.rows.len() == 50, "expected 50 parameter sets");
    Verdict::from_reports(&[r], extra)
}

fn criterion_3() -> Verdict {
    let r = suite(Suite::Connection);
    let extra = require(r.rows.len() == 50, "expected 50 parameter sets")
        .and(require(has_check(&r, "connection-integer-excess"), "no integer-excess set"));
    Verdict::from_reports(&[r], extra)
}

fn criterion_4() -> Verdict {
    let r = suite(Suite::Mellin);
    let extra = require(has_check(&r, "mellin") && has_check(&r, "mellin-integer-excess"), "both branches needed")
        .and(require(has_check(&r, "q-pivot"), "pivot independence not checked"));
    Verdict::from_reports(&[r], extra)
}

fn criterion_5() -> Verdict {
    let m = suite(Suite::Moments);
    let c = suite(Suite::Cor27);
    let extra = require(c.rows.len() == 30, "expected 30 random sets for the moment identity");
    Verdict::from_reports(&[m, c], extra)
}

fn criterion_6() -> Verdict {
    let r = suite(Suite::Transforms);
    let extra = require(has_check(&r, "laplace-closed"), "closed Laplace case missing");
    Verdict::from_reports(&[r], extra)
}

fn criterion_7() -> Verdict {
    let r = suite(Suite::Summation);
    let extra = require(has_check(&r, "log-case"), "log case missing");
    Verdict::from_reports(&[r], extra)
}

fn criterion_8() -> Verdict {
    let r = suite(Suite::Thm32);
    let cases: std::collections::BTreeSet<usize> = r.rows.iter().map(|row| row.case).collect();
    let negative: std::collections::BTreeSet<usize> =
        r.rows.iter().filter(|row| a_values(&row.params).iter().any(|&a| a < 0.0)).map(|row| row.case).collect();
    let extra = require(cases.len() == 30, "expected 30 cases")
        .and(require(negative.len() >= 5, &format!("only {} cases with a_min < 0", negative.len())));
    let mut v = Verdict::from_reports(&[r], extra);
    v.summary += &format!(" ({} cases with a_min < 0)", negative.len());
    v
}

fn criterion_9() -> Verdict {
    Verdict::from_reports(&[suite(Suite::Bessel)], Ok(()))
}

/// Random `(â, b)` with `b ≥ (â, ½)` componentwise after sorting, which
/// implies weak supermajorization.
fn supermajorizing_set(rng: &mut ChaCha8Rng) -> (Vec<f64>, Vec<f64>) {
    loop {
        let p = rng.gen_range(2..=3);
        let a_hat: Vec<f64> = (0..p - 1).map(|_| (rng.gen_range(0.2..3.0) * 1e4_f64).round() / 1e4).collect();
        let mut a = a_hat.clone();
        a.push(0.5);
        a.sort_by(f64::total_cmp);
        let b: Vec<f64> = a.iter().map(|&x| ((x + rng.gen_range(0.0..1.5)) * 1e4_f64).round() / 1e4).collect();
        let mut full = a_hat.clone();
        full.push(0.5);
        if supermajorization(&full, &b) {
            return (a_hat, b);
        }
    }
}

fn zero_claims(scan: &ZeroScan) -> (bool, bool, bool, usize) {
    let one_each = scan.count_in(PI, 2.0 * PI) == 1 && scan.count_in(2.0 * PI, 3.0 * PI) == 1;
    let simple = scan.zeros.iter().all(|z| z.simple);
    (one_each, simple, scan.hypotheses_hold, scan.extra_zeros())
}

/// The structure behind the zero count: one simple zero in every
/// `(kπ, (k+1)π)`, `k ≥ 1`, and none in `(0, π)`.
fn interlacing_holds(scan: &ZeroScan) -> bool {
    let top = (scan.scan_hi / PI).floor() as usize;
    scan.count_in(0.0, PI) == 0
        && (1..top).all(|k| scan.count_in(k as f64 * PI, (k + 1) as f64 * PI) == 1)
        && scan.zeros.iter().all(|z| z.simple)
}

fn criterion_10() -> Verdict {
    let hi = 4.0 * PI;
    let mut lines = Vec::new();
    let mut literal = true;
    let mut structure = true;
    let base = match find_zeros_thm42(&[1.0], &[1.0, 1.5], hi) {
        Ok(s) => s,
        Err(e) => return Verdict { pass: false, summary: format!("scan failed: {e}"), documented: false },
    };
    let near = |lo: f64, hi: f64, want: f64| base.zeros.iter().any(|z| z.root > lo && z.root < hi && (z.root - want).abs() <= 1e-6);
    let located = near(PI, 2.0 * PI, 4.4934095) && near(2.0 * PI, 3.0 * PI, 7.7252518);
    let (one_each, simple, hyp, extra) = zero_claims(&base);
    literal &= located && one_each && simple && hyp && extra == 0;
    structure &= located && one_each && simple && hyp && interlacing_holds(&base);
    let roots: Vec<String> = base.zeros.iter().map(|z| format!("{:.7}", z.root)).collect();
    lines.push(format!("â=(1) b=(1,1.5): roots [{}], zeros outside (π,3π): {extra}", roots.join(", ")));
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..3 {
        let (a_hat, b) = supermajorizing_set(&mut rng);
        match find_zeros_thm42(&a_hat, &b, hi) {
            Ok(scan) => {
                let (one_each, simple, hyp, extra) = zero_claims(&scan);
                literal &= one_each && simple && hyp && extra == 0;
                structure &= one_each && simple && hyp && interlacing_holds(&scan);
                let roots: Vec<String> = scan.zeros.iter().map(|z| format!("{:.7}", z.root)).collect();
                lines.push(format!("â={a_hat:?} b={b:?}: roots [{}], zeros outside (π,3π): {extra}", roots.join(", ")));
            }
            Err(e) => {
                literal = false;
                structure = false;
                lines.push(format!("â={a_hat:?} b={b:?}: scan failed: {e}"));
            }
        }
    }
    let mut summary = lines.join("\n      ");
    if !literal && structure {
        summary += "\n      analysis: the zero count cannot hold as stated. f(z) = sin z/z - cos z vanishes where \
tan z = z, so it has a third simple zero 10.9041217 in (3π, 4π) ⊂ (0.05, 4π), and one in every (kπ, (k+1)π). \
The located roots, their simplicity and one-zero-per-interval all hold; only 'none elsewhere in (0.05, 4π)' fails.";
    }
    Verdict { pass: literal, summary, documented: !literal && structure }
}

fn criterion_11() -> Verdict {
    let r = suite(Suite::Stabilization);
    let sets = r.rows.iter().map(|row| row.case).collect::<std::collections::BTreeSet<_>>().len();
    let extra = require(sets == 20, "expected 20 random sets");
    Verdict::from_reports(&[r], extra)
}

fn criterion_12() -> Verdict {
    let r = suite(Suite::Asymptotics);
    let extra = require(r.rows.len() == 20, "expected 20 random sets");
    Verdict::from_reports(&[r], extra)
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 12] = [
        ("closed-form chain p=1", criterion_1),
        ("p=2 reduced form of G_0", criterion_2),
        ("connection identity", criterion_3),
        ("Mellin transform and q pivots", criterion_4),
        ("moments and the moment identity", criterion_5),
        ("transforms", criterion_6),
        ("summation formula", criterion_7),
        ("regularized functional", criterion_8),
        ("cosine functional / sinc case", criterion_9),
        ("zeros of F - cos z", criterion_10),
        ("sign stabilization", criterion_11),
        ("origin asymptotics", criterion_12),
    ];
    println!("acceptance (seed {SEED})");
    let mut unexpected = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let v = run();
        let status = match (v.pass, v.documented) {
            (true, _) => "PASS",
            (false, true) => "FAIL (documented)",
            (false, false) => "FAIL",
        };
        if !v.pass && !v.documented {
            unexpected += 1;
        }
        println!("criterion {:>2}: {status} — {name} [{:.1?}]\n      {}", i + 1, t.elapsed(), v.summary);
    }
    if unexpected > 0 {
        println!("{unexpected} criterion/criteria failed unexpectedly");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
