//! Acceptance criteria of the harness and the one-line summaries the
//! `acceptance` test prints for them.

use fwlab::verify::{CheckReport, Suite};

pub const CRITERIA: [(u32, &str); 10] = [
    (1, "gamma-matrix suite at 1e-14"),
    (2, "UHU\u{2020} = \u{3b3}\u{2080}E at the sampled momenta"),
    (3, "Dirac solution mapping, N=32 L=20 tol 1e-6, with negative controls"),
    (4, "conjugated boosts equal the direct canonical ones"),
    (5, "structure constants of all families"),
    (6, "nonlocal O(4) spin operators"),
    (7, "Maxwell spectrum, transform and solution mapping"),
    (8, "boost flows mix energy and momentum hyperbolically"),
    (9, "symbolic commutators match grid-composed ones"),
    (10, "two runs with seed 42 give byte-identical items"),
];

/// `criterion N: pass|FAIL <description> (max residual, failures)`.
pub fn line(criterion: u32, pass: bool, detail: &str) -> String {
    let description = CRITERIA.iter().find(|(c, _)| *c == criterion).map_or("", |(_, d)| d);
    let verdict = if pass { "pass" } else { "FAIL" };
    if detail.is_empty() {
        format!("criterion {criterion:>2}: {verdict} {description}")
    } else {
        format!("criterion {criterion:>2}: {verdict} {description} [{detail}]")
    }
}

/// Largest asserted residual and the names of failing checks among `reports`.
pub fn detail<'a>(reports: impl IntoIterator<Item = &'a CheckReport>) -> String {
    let mut worst: f64 = 0.0;
    let mut failing = Vec::new();
    let mut count = 0;
    for r in reports {
        count += 1;
        if r.items.iter().any(|i| i.tolerance.is_some()) {
            worst = worst.max(r.max_residual);
        }
        if !r.pass {
            failing.push(r.check.as_str());
        }
    }
    let mut out = format!("{count} reports, max residual {worst:.2e}");
    if !failing.is_empty() {
        out += &format!(", failing: {}", failing.join(" "));
    }
    out
}

/// Total wall time of the deciding reports of one criterion.
pub fn wall_time(suite: &Suite, criterion: u32) -> f64 {
    suite.criterion(criterion).map(|r| r.wall_time_s).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use fwlab::verify::{Item, Params};

    #[test]
    fn lines_name_the_criterion_and_verdict() {
        assert_eq!(line(3, false, ""), format!("criterion  3: FAIL {}", CRITERIA[2].1));
        assert!(line(10, true, "x").ends_with("[x]"));
        let ok = CheckReport::new("a", Params::default(), vec![Item::asserted("r", 1e-9, 1e-6)], 0.0);
        let bad = CheckReport::new("b", Params::default(), vec![Item::asserted("r", 1e-5, 1e-6)], 0.0);
        assert_eq!(detail([&ok, &bad]), "2 reports, max residual 1.00e-5, failing: b");
    }
}
