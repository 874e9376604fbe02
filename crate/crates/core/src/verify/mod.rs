//! Verification harness: invariance checks, structure-constant extraction,
//! the O(4) suite, boost flows and machine-readable reports.

mod algebra;
mod crossval;
mod flow;
mod identities;
mod invariance;
mod report;
mod suite;
pub mod tolerances;

pub use algebra::{asserted_pairs, check_algebra, check_o4, dirac_spins, expand, BASIS_NAMES};
pub use crossval::check_crossval;
pub use flow::{boost_flow, dirac_boost_check, flow_initial_state, mixing, rapidity, FlowConfig, FlowRecord, FlowSample};
pub use identities::{check_clifford, check_conjugation, check_maxwell_spectrum, check_transform};
pub use invariance::{
    check_invariance, dirac_invariance, dirac_negative_control, maxwell_invariance, maxwell_literal_b_rotations,
    maxwell_negative_control, maxwell_test_fields, set_operators, test_fields, InvarianceConfig, NamedOperators,
};
pub use suite::{check_velocity_map, run_all, Suite, SuiteConfig, SuiteEntry, CROSSVAL_TIME};
pub use report::{emit_report, emit_reports, CheckReport, Item, Params, StructureConstantRow, StructureConstantTable};

/// Order-preserving map over `items` on up to `threads` scoped threads.
/// Results never depend on the thread count.
pub fn par_map<T: Sync, R: Send>(items: &[T], threads: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let threads = threads.max(1).min(items.len().max(1));
    if threads == 1 {
        return items.iter().map(&f).collect();
    }
    let chunk = items.len().div_ceil(threads);
    std::thread::scope(|scope| {
        let handles: Vec<_> = items.chunks(chunk).map(|c| scope.spawn(|| c.iter().map(&f).collect::<Vec<R>>())).collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn par_map_preserves_order() {
        let v: Vec<u64> = (0..103).collect();
        let serial = par_map(&v, 1, |x| x * x);
        for t in [2, 3, 8, 500] {
            assert_eq!(par_map(&v, t, |x| x * x), serial);
        }
        assert!(par_map(&Vec::<u64>::new(), 4, |x| *x).is_empty());
    }
}
