pub mod congruence;
pub mod construct;
pub mod enumerate;
pub mod finite;
pub mod partition;
pub mod signature;
pub mod term;

pub use congruence::{
    coarsest_congruence_below_oracle, congruences_bruteforce, is_congruence, is_congruence_uniform,
    largest_congruence_below,
};
pub use construct::{
    direct_product, nonindexed_product, product_coords, product_index, quotient, subalgebra, subuniverse_generated,
    subuniverses,
};
pub use enumerate::{enumerate_algebras, enumerate_terms, AlgebraSpace};
pub use finite::{CompiledTerm, FiniteAlgebra};
pub use partition::Partition;
pub use signature::{product_symbol, Signature};
pub use term::{Substitution, Term, Valuation};
