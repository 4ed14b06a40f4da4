//! Instance selection policies and the error-matrix bookkeeping behind
//! error-avoidance sampling.

mod error_matrix;
mod policy;

pub use error_matrix::{pick_discarded, ErrorMatrix, ErrorMatrixRow, DEFAULT_DISCARD_AFTER, WINDOW_PAST_INTERVALS};
pub use policy::{
    is_uncertain, sample_error_avoidance, sample_random, sample_uncertainty, select_error_avoidance, select_uncertain,
    SamplerPolicy, UncertaintyBand,
};
