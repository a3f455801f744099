//! Clifford-type bounds for global sections of sheaves on P¹×P¹, together
//! with exact cohomology oracles used to check them.

pub mod bounds;
pub mod error;
pub mod matrix;
pub mod oracles;
pub mod quadric;
pub mod rational;
pub mod sharpness;
pub mod steiner;
pub mod sweep;

pub use bounds::{
    alpha, beta, beta_relaxed, best_representable_slope, bn_locus_decision, deficiency, general_bound,
    mu_double_prime, non_gg_bound, stratified_bound, theta, theta_exception, unbalanced_bound,
    unbalanced_bound_with_mu_max, BnDecision, BnReport, BoundReport, TheoremTag,
};
pub use error::{Error, Result};
pub use matrix::{kernel_dimension, rank, ExactMatrix};
pub use oracles::{CohomologyTable, SheafModel};
pub use quadric::{
    anticanonical_pairing, euler_characteristic, restriction_sections, slope, twist, BiDegree, ChernCharacter,
    CurveClass,
};
pub use rational::Rational;
pub use sharpness::{check_sharpness_conditions, sharpness_search, SearchBox, SharpnessReport, SteinerParams, Witness};
pub use steiner::{maximal_structure_check, steiner_character, twisted_steiner_h0_formula, MaximalStructure};
pub use sweep::{run_sweep, CheckRow, Suite, SweepConfig, SweepSummary, DEFAULT_SEED};
