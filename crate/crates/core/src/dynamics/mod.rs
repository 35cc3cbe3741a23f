//! Multivalued cubical maps, their transition graphs, filtration pairs and
//! the chain maps they induce.

mod map;
mod pairs;

pub use map::{CellBox, ChainSelector, MultivaluedMap};
pub use pairs::{
    immediate_exit_set, invariant_part, local_stable, local_unstable, pair_homology,
    quotient_chain_map, selector_chain_map, standard_shift_equivalence,
    validate_filtration_pair, FiltrationPair, FiltrationTriple, PairCondition, PairHomology,
    PairReport, StandardShift,
};
