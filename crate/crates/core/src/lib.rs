//! Numerical laboratory for generalized measurements (POVMs) in Ramsey-type
//! atomic-beam experiments with a dispersive cavity.
//!
//! Layers, bottom to top:
//!
//! * [`operator`]: dense complex operators, kets, truncated Fock spaces and coherent states.
//! * [`povm`]: POVM validation, non-ideality fits, row entropy, joint-measurement bounds.
//! * [`hilbert_schmidt`]: Gram matrices, dual bases, state projection, informational equivalence.
//! * [`experiments`]: closed-form and simulated POVMs of each measurement arrangement.
//! * [`cli`]: sweep configuration, figure data and validation reports.

pub mod cli;
pub mod error;
pub mod experiments;
pub mod hilbert_schmidt;
pub mod operator;
pub mod povm;
pub mod tolerances;

pub use error::{Error, Result};
pub use operator::{
    choose_truncation, coherent_overlap, coherent_state, hs_inner, partial_trace_field,
    phase_rotation, tensor, FockSpace, Ket, Operator, Tensor, C64,
};
pub use povm::{BivariatePovm, Povm, StochasticMatrix};
