//! Bounded membership checks and witness searches for the Leibniz classes.

pub mod admissible;
pub mod classes;
pub mod consequence;
pub mod order;
pub mod witness;

pub use admissible::{check_admissibility_bounded, TheoremDecider};
pub use classes::{
    check_class, check_class_on, leibniz_monotonicity_probe, recheck_class_witness, recheck_probe_witness, CheckOptions,
    Class, InventoryModels,
};
pub use consequence::{Consequence, Tri};
pub use order::verify_order_alg_witness;
pub use witness::{
    congruence_formulas_with_params, find_injective_theorem, find_protoalgebraic_witness, nabla_theorem_oracle,
    WitnessKind, WitnessSet,
};
