//! Symbolic dynamics on `Q^N`: words, approximate squares, piecewise
//! Bernoulli measures, local dimensions and counting.

pub mod counting;
pub mod measure;
pub mod schedule;
pub mod word;

pub use counting::{
    count_entropy_bounded, count_rowentropy_above, cover_bound, cover_count, types_bound,
};
pub use measure::{
    local_dimension_curve, log_measure_square, mean_local_dimensions, scale_table, scales,
    ScaleRow, ScaleTable,
};
pub use schedule::{
    heuristic_schedule, sample_word, Block, BlockDist, PiecewiseBernoulliSchedule,
};
pub use word::{approx_square, project, word_entropy, ApproxSquare, SymbolicWord};
