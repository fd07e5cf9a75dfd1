//! Hausdorff dimension of shrinking-target sets on Bedford–McMullen carpets.
//!
//! The dimension of the set of points whose orbit hits a sequence of
//! shrinking cylinders or balls infinitely often is the maximum, over four
//! probability vectors on the digit set, of the minimum of six entropy-based
//! dimension functions. This crate evaluates that variational formula and
//! ships an exact symbolic-dynamics engine to check its ingredients:
//!
//! * [`carpet`]: carpet data, entropies, the six dimension functions and the
//!   three distinguished Bernoulli measures.
//! * [`frontier`]: the entropy frontier `psi(z) = max{h(p) : h_r(p) = z}`,
//!   its inverse `phi`, and lifting of row entropies to probability vectors.
//! * [`optimizer`]: maximization over the reduced four-coordinate domain,
//!   a lattice brute-force oracle, and closed forms for special cases.
//! * [`symdyn`]: words, approximate squares, piecewise Bernoulli measures,
//!   local dimensions, type-class counting and covering counts.
//! * [`cli`]: the command-line front end used by the `shrinking-carpet` binary.

pub mod carpet;
pub mod cli;
pub mod error;
pub mod frontier;
pub mod optimizer;
pub mod symdyn;

pub use carpet::{
    bernoulli_dimension, dim_functions, distinguished_measures, entropy, row_entropy,
    validate_carpet, CarpetDescription, CarpetSpec, DimBreakdown, DimParams, Distinguished,
    EntropyProfile, ProbVector, Quad, Symbol, TargetKind,
};
pub use error::{Error, Result};
pub use frontier::{lift, phi, psi, tilted_rows, Frontier, FrontierPoint};
pub use optimizer::{
    brute_force, closed_form_torus, large_alpha_threshold, maximize, objective, MaximizeOptions,
    OptResult, ThetaPoint,
};
