//! Exact end-to-end checks, one line per criterion. Exits nonzero if any
//! criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use derbra::suites::{run_suite, RunConfig, SuiteReport};

struct Criterion {
    label: &'static str,
    suite: &'static str,
    max_degree: u32,
}

const CRITERIA: &[Criterion] = &[
    Criterion { label: "higher Jacobi relations", suite: "jacobi", max_degree: 2 },
    Criterion { label: "V-data perturbation correspondence", suite: "machine", max_degree: 2 },
    Criterion { label: "twisting commutes with the big algebra", suite: "truc", max_degree: 2 },
    Criterion { label: "brackets of 𝔏 match the coordinate model", suite: "oracle", max_degree: 3 },
    Criterion { label: "twisted Poisson Maurer-Cartan elements", suite: "tpois-mc", max_degree: 2 },
    Criterion { label: "coisotropic Maurer-Cartan sections", suite: "coiso", max_degree: 2 },
    Criterion { label: "gauge tangency and generators", suite: "gauge", max_degree: 2 },
    Criterion { label: "gauge flow curves", suite: "flow", max_degree: 2 },
    Criterion { label: "filtration laws and termination", suite: "filtration", max_degree: 2 },
];

fn summary(rep: &SuiteReport) -> String {
    let cases: Vec<String> = rep.cases.iter().map(|c| format!("{}:{}", c.case, c.checks)).collect();
    cases.join(" ")
}

fn main() -> ExitCode {
    let mut all = true;
    for (i, c) in CRITERIA.iter().enumerate() {
        let cfg = RunConfig {
            max_degree: c.max_degree,
            max_arity: 4,
            ..RunConfig::default()
        };
        let start = Instant::now();
        let line = match run_suite(c.suite, &cfg) {
            Ok(rep) => {
                let ok = rep.passed();
                all &= ok;
                let mut line = format!(
                    "criterion {} {} [{}]: {} ({} checks, {:.1}s) {}",
                    i + 1,
                    if ok { "PASS" } else { "FAIL" },
                    c.suite,
                    c.label,
                    rep.checks(),
                    start.elapsed().as_secs_f64(),
                    summary(&rep)
                );
                for f in rep.failures.iter().take(3) {
                    line.push_str(&format!("\n    {} #{}: {}", f.case, f.index, f.witness));
                }
                for n in &rep.notes {
                    line.push_str(&format!("\n    note: {}", n));
                }
                line
            }
            Err(e) => {
                all = false;
                format!("criterion {} FAIL [{}]: {}: {}", i + 1, c.suite, c.label, e)
            }
        };
        println!("{}", line);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
