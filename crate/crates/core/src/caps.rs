use serde::{Deserialize, Serialize};

/// Size and search limits shared by every computation.
///
/// Loaded from an optional JSON config; any missing field keeps its default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Caps {
    /// Largest carrier handled by brute-force oracles (partition sweeps).
    pub oracle_max: usize,
    /// Largest carrier produced by direct and non-indexed products.
    pub product_max: usize,
    /// Total table cells allowed when enumerating algebras.
    pub table_budget: usize,
    /// Largest carrier on which all 2^n subsets are swept for filters.
    pub filter_sweep_max: usize,
    /// Default term depth for witness searches.
    pub depth_default: usize,
    /// Default variable budget for logic presentations.
    pub variable_budget: usize,
    /// Depth cap of the canonical-valuation search used for matrix-presented logics.
    pub canonical_depth: usize,
    /// Upper bound on distinct value tuples explored by that search.
    pub canonical_max_states: usize,
    /// Upper bound on the number of maps enumerated when building canonical coordinates.
    pub canonical_max_maps: usize,
    /// Most candidate terms tried by a witness search.
    pub witness_max_candidates: usize,
    /// Most candidate pairs tried by the protoalgebraic witness search.
    pub witness_max_pairs: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            oracle_max: 6,
            product_max: 64,
            table_budget: 1 << 20,
            filter_sweep_max: 6,
            depth_default: 3,
            variable_budget: 8,
            canonical_depth: 3,
            canonical_max_states: 200_000,
            canonical_max_maps: 1 << 16,
            witness_max_candidates: 20_000,
            witness_max_pairs: 100_000,
        }
    }
}

impl Caps {
    pub fn check(what: &'static str, actual: usize, limit: usize) -> crate::Result<()> {
        if actual > limit {
            Err(crate::Error::CapExceeded {
                what,
                limit,
                actual,
            })
        } else {
            Ok(())
        }
    }
}
