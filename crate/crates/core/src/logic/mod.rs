pub mod canonical;
pub mod filters;
pub mod presentation;
pub mod rule;

pub use canonical::{canonical_var, CanonicalEngine, FilterDecision, Violation};
pub use filters::{
    deductive_filters, filter_generated, reduced_filters_on, suszko_congruence, FilterLattice, FilterNotion,
    FilterOracle, FilterSet, ReducedModels, RuleInstances,
};
pub use presentation::{countermodel, entails, Countermodel, LogicKind, LogicPresentation};
pub use rule::{counter_valuation, is_model, CompiledRule, Rule};
