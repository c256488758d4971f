//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use twoproj::identities::Verifier;
use twoproj::oracle::{self, TOLERANCE};
use twoproj::triangle;

const IDENTITY_RUNTIME: Duration = Duration::from_secs(60);
const TRIANGLE_RUNTIME: Duration = Duration::from_secs(10);
const ORACLE_RUNTIME: Duration = Duration::from_secs(60);
const HAAR_RUNTIME: Duration = Duration::from_secs(120);
const HAAR_MOMENT_TOLERANCE: f64 = 0.05;
const TRIANGLE_N: usize = 20;
const GENFUN_N: usize = 12;

struct Verdict {
    pass: bool,
    detail: String,
    notes: Vec<String>,
}

impl Verdict {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Verdict { pass, detail: detail.into(), notes: Vec::new() }
    }
}

fn identity_suite() -> Verdict {
    let start = Instant::now();
    let v = Verifier::default();
    let all = v.verify_all(8).expect("order within cap");
    let mut notes: Vec<String> = all
        .iter()
        .filter(|r| !r.passed())
        .map(|r| format!("{} failed at order 8", r.name))
        .collect();
    let mut pass = all.len() == 21 && notes.is_empty();
    for name in [
        "thm_sum",
        "eq_complement",
        "identity_diff",
        "eq_pq_diff",
        "cor_even",
        "cor_odd",
        "ham1_prop41",
        "prop_binom",
    ] {
        let reports = v.verify(name, 12).expect("known identity");
        for r in reports.iter().filter(|r| !r.passed()) {
            pass = false;
            notes.push(format!("{name} failed at order {}", r.order));
        }
    }
    let elapsed = start.elapsed();
    pass &= elapsed <= IDENTITY_RUNTIME;
    let mut out = Verdict::new(
        pass,
        format!("{} entries at order 8, 8 identities at order 12, {:.2?}", all.len(), elapsed),
    );
    out.notes.append(&mut notes);
    out
}

fn triangle_equivalence() -> Verdict {
    let start = Instant::now();
    let rows = triangle::compare_methods(TRIANGLE_N).expect("order large enough");
    let methods_agree = rows.iter().all(|r| r.matches());
    let direct = triangle::fnk_direct(TRIANGLE_N).unwrap();
    let relation_f = triangle::relation_f_check(&direct).unwrap();
    let lemma = triangle::lemma_sys_check(&direct).unwrap();
    let closed = triangle::closed_forms_check(&direct).unwrap();
    let spots = [(2, 2, 3), (3, 3, 4), (4, 4, 7)]
        .iter()
        .all(|&(n, k, v)| direct.f(n, k) == BigInt::from(v));
    let elapsed = start.elapsed();

    let mut notes = Vec::new();
    let mut pass = true;
    let mut part = |label: &str, ok: bool, extra: String| {
        pass &= ok;
        notes.push(format!("{} {label}{extra}", if ok { "ok  " } else { "FAIL" }));
    };
    part("three methods agree on 2<=k<=n<=20", methods_agree, format!(" ({} rows)", rows.len()));
    part("RelationF", relation_f.all_hold(), String::new());
    for rel in ["lemma_diag", "lemma_k2", "lemma_k3", "lemma_interior"] {
        part(rel, lemma.relation(rel).all(|l| l.holds), String::new());
    }
    part("f(2,2)=3, f(3,3)=4, f(4,4)=7", spots, String::new());
    for rel in ["f_n2", "f_n3", "f_n4", "f_n5", "f_nn_lucas"] {
        let failed: Vec<String> = closed
            .exact
            .relation(rel)
            .filter(|l| !l.holds)
            .map(|l| format!("n={} got {} want {}", l.n, l.lhs, l.rhs))
            .collect();
        let extra = if failed.is_empty() { String::new() } else { format!(": {}", failed.join(", ")) };
        part(rel, failed.is_empty(), extra);
    }
    part("Lucas via golden ratio", closed.golden.iter().all(|g| g.holds), String::new());
    part("runtime", elapsed <= TRIANGLE_RUNTIME, format!(" {elapsed:.2?}"));
    Verdict { pass, detail: format!("N={TRIANGLE_N}"), notes }
}

fn genfun_audit() -> Verdict {
    let t = triangle::fnk_direct(GENFUN_N).unwrap();
    let rep = triangle::genfun_compare(&t).unwrap();
    let complete = (0..=GENFUN_N).all(|n| rep.coefficients.iter().any(|c| c.n == n));
    let mut out = Verdict::new(
        complete && rep.self_consistent,
        format!(
            "{} coefficients, series self-consistent: {}, {} findings",
            rep.coefficients.len(),
            rep.self_consistent,
            rep.mismatches
        ),
    );
    out.notes = rep
        .coefficients
        .iter()
        .filter(|c| !c.matches && c.n <= 4)
        .map(|c| format!("finding z^{} w^{}: series {} triangle {}", c.n, c.k, c.series, c.triangle))
        .collect();
    out
}

fn oracle_agreement() -> Verdict {
    let start = Instant::now();
    let grid = oracle::model_grid(20, 42);
    let in_range = grid.iter().all(|s| s.angles.len() <= 4 && s.mult.iter().all(|&m| m <= 2));
    let s = oracle::crosscheck_models(&grid, 14, 200, 42).expect("valid grid");
    let elapsed = start.elapsed();
    Verdict::new(
        s.pass && in_range && s.models >= 20 && elapsed <= ORACLE_RUNTIME,
        format!(
            "{} models, max residual words {:.1e} polys {:.1e} spectra {:.1e}, tol {TOLERANCE:.0e}, {elapsed:.2?}",
            s.models, s.max_word_residual, s.max_poly_residual, s.max_spectrum_residual
        ),
    )
}

fn haar_monte_carlo() -> Verdict {
    let start = Instant::now();
    let rep = oracle::haar_demo(64, 200, 4, 42).expect("valid dimension");
    let elapsed = start.elapsed();
    let worst = rep.moments.iter().map(|m| m.error).fold(0.0, f64::max);
    let pass = worst <= HAAR_MOMENT_TOLERANCE
        && rep.max_thm_sum_residual <= TOLERANCE
        && rep.max_thm_comm_residual <= TOLERANCE
        && elapsed <= HAAR_RUNTIME;
    let mut out = Verdict::new(
        pass,
        format!(
            "d=64, 200 samples, worst moment error {worst:.2e}, identity residuals {:.1e}/{:.1e}, {elapsed:.2?}",
            rep.max_thm_sum_residual, rep.max_thm_comm_residual
        ),
    );
    out.notes = rep
        .moments
        .iter()
        .map(|m| format!("j={} estimate {:.6} target {:.6}", m.j, m.estimate, m.target))
        .collect();
    out
}

fn reproducibility() -> Verdict {
    let dir = tempfile::tempdir().expect("temp dir");
    let model = dir.path().join("model.json");
    std::fs::write(&model, r#"{"angles":[0.4,1.2],"mult":[1,0,1,1]}"#).unwrap();
    let model = model.to_str().unwrap();
    let commands: Vec<Vec<&str>> = vec![
        vec!["verify", "--identity", "thm_comm", "--order", "6"],
        vec!["verify-all", "--order", "8"],
        vec!["trace", "--poly", "P + 2*QPQ - 1/2", "--model", model],
        vec!["expand", "--n", "4"],
        vec!["triangle", "--N", "20", "--checks"],
        vec!["genfun", "--N", "12"],
        vec!["oracle"],
        vec!["spectrum", "--model", model],
        vec!["haar", "--samples", "60"],
    ];
    let mut notes = Vec::new();
    let mut pass = true;
    for cmd in &commands {
        for format in ["json", "csv"] {
            let run = || {
                Command::new(env!("CARGO_BIN_EXE_twoproj"))
                    .args(cmd)
                    .args(["--format", format])
                    .env_remove("TWOPROJ_OUTPUT_DIR")
                    .output()
                    .expect("binary runs")
            };
            let (a, b) = (run(), run());
            let same = a.stdout == b.stdout && !a.stdout.is_empty();
            if !same {
                pass = false;
                notes.push(format!("{} --format {format} differs between runs", cmd.join(" ")));
            }
        }
    }
    let mut out = Verdict::new(pass, format!("{} commands x 2 formats, each run twice", commands.len()));
    out.notes = notes;
    out
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() -> ExitCode {
    let criteria: [Criterion; 6] = [
        ("1 identity suite", identity_suite),
        ("2 triangle equivalence", triangle_equivalence),
        ("3 generating-function audit", genfun_audit),
        ("4 oracle agreement", oracle_agreement),
        ("5 Haar Monte-Carlo", haar_monte_carlo),
        ("6 reproducibility", reproducibility),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let v = check();
        println!("[{}] criterion {name}: {}", if v.pass { "PASS" } else { "FAIL" }, v.detail);
        for n in &v.notes {
            println!("       {n}");
        }
        failed += usize::from(!v.pass);
    }
    println!("{} of 6 criteria pass", 6 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
