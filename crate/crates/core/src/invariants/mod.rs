//! Words, necklaces and trace invariants of matrix tuples under simultaneous
//! conjugation.

mod generic;
mod sft;
mod trace;
mod tuple;
mod words;

pub use generic::{
    expansion_residual, generic_input_index, generic_trace_circuit, generic_trace_dense, kron_sum,
    roabp_difference_circuit, roabp_trace_circuit, roabp_trace_dense,
};
pub use sft::{fundamental_relation, necklace_vars, sft_relations, Relation, SftRelations};
pub use trace::{cycles, fundamental_identity_residual, sign, trace_cycles, trace_monomial, trace_permutation};
pub use tuple::{random_invertible, MatrixTuple};
pub use words::{necklace_count, necklaces, necklaces_up_to, words, Necklace, Word};
