//! One pass/fail line per acceptance criterion; exits non-zero on any failure.

use std::process::ExitCode;
use std::time::Instant;

use birelab::verify::{run_suite, SuiteReport};

const SEED: u64 = 42;

struct Line {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn run(suite: &str, count: usize) -> SuiteReport {
    run_suite(suite, SEED, count).unwrap_or_else(|e| panic!("{suite}: {e}"))
}

fn summary(reports: &[&SuiteReport], only: Option<&str>) -> (bool, String) {
    let mut parts = Vec::new();
    let mut ok = true;
    for r in reports {
        for (prop, c) in &r.properties {
            if only.is_some_and(|o| o != prop) {
                continue;
            }
            ok &= c.failed == 0 && c.passed > 0;
            parts.push(format!("{}:{} {}/{}", r.suite, prop, c.passed, c.passed + c.failed));
        }
        if only.is_none() {
            ok &= r.passed;
        }
        if let Some(f) = r.failures.first() {
            parts.push(format!("first failure {}#{} {}: {}", r.suite, f.draw, f.property, f.detail));
        }
    }
    (ok && !parts.is_empty(), parts.join(", "))
}

fn line(name: &'static str, reports: &[&SuiteReport], only: Option<&str>) -> Line {
    let (passed, detail) = summary(reports, only);
    Line { name, passed, detail }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let example = run("example", 1);
    let light_cone = run("light-cone", 100);
    let class_i = run("metaclass-I-roundtrip", 500);
    let class_ii = run("metaclass-II-roundtrip", 500);
    let class_iv = run("metaclass-IV-roundtrip", 500);
    let exclusions: Vec<SuiteReport> = ["exclusion-III", "exclusion-V", "exclusion-VI", "exclusion-VII"].iter().map(|s| run(s, 500)).collect();
    let segre = run("segre-correspondence", 100);
    let covariance = run("covariance", 200);
    let oracle = run("oracle-equivalence", 500);
    let two_plane = run("two-plane", 100);
    let convergence = run("cone-convergence", 1);

    let lines = [
        line("example medium: single xi0xi1xi2xi3 coefficient, no double light cone", &[&example], None),
        line("light cone of Lorentz Hodge media: single cone of the inverse metric", &[&light_cone], None),
        line("class I: double light cone matches closed form, D0 = 0", &[&class_i], None),
        line("classes II and IV: double light cone, Lorentz factors, constant C", &[&class_ii, &class_iv], None),
        line("classes III, V, VI, VII: never a double light cone", &exclusions.iter().collect::<Vec<_>>(), None),
        line("Segre type identifies every metaclass under 10 pullbacks", &[&segre], None),
        line("density covariance of the Fresnel quartic", &[&covariance], None),
        line("adjugate irreducibility criterion agrees with Gaeta covariant", &[&oracle], None),
        line("double light cones contain no 2-plane", &[&class_i, &class_ii, &class_iv, &two_plane], Some("two-plane")),
        line("class II cones approach each other as beta1 grows", &[&convergence], None),
    ];

    let mut failed = 0;
    for l in &lines {
        println!("{} {} [{}]", if l.passed { "PASS" } else { "FAIL" }, l.name, l.detail);
        failed += usize::from(!l.passed);
    }
    println!("{} of {} criteria passed in {:.1?}", lines.len() - failed, lines.len(), start.elapsed());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
