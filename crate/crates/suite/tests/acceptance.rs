//! Runs the full suite with seed 42, prints one line per acceptance
//! criterion and fails if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use fwlab::verify::{run_all, Suite, SuiteConfig};
use fwlab_suite::{detail, line, wall_time};

fn run() -> Suite {
    let start = Instant::now();
    run_all(&SuiteConfig::new(42), |c, r| {
        eprintln!("  [{:>6.1}s] criterion {c}: {} {}", start.elapsed().as_secs_f64(), if r.pass { "pass" } else { "FAIL" }, r.check);
    })
    .expect("suite runs")
}

fn main() -> ExitCode {
    let first = run();
    let mut verdicts = Vec::new();

    for c in 1..=9 {
        let mut pass = first.criterion_passes(c);
        let mut info = detail(first.criterion(c));
        match c {
            1 | 2 => {
                let t = wall_time(&first, c);
                pass &= t < 1.0;
                info += &format!(", {t:.3}s");
            }
            3 => {
                let t = wall_time(&first, c);
                pass &= t < 300.0;
                let large = first.supplementary(3);
                let large_pass = first.supplementary(3).all(|r| r.pass);
                info += &format!(
                    ", {t:.0}s; N=64 L=40 box: {} ({})",
                    if large_pass { "pass" } else { "FAIL" },
                    detail(large)
                );
            }
            _ => {}
        }
        verdicts.push(pass);
        println!("{}", line(c, pass, &info));
    }

    let second = run();
    let identical = first.items_json() == second.items_json();
    verdicts.push(identical);
    println!("{}", line(10, identical, &format!("{} bytes of items", first.items_json().len())));

    let failed: Vec<usize> = verdicts.iter().enumerate().filter(|(_, p)| !**p).map(|(i, _)| i + 1).collect();
    if failed.is_empty() {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failed:?}");
        ExitCode::FAILURE
    }
}
