//! Value and flip-fragility of random alternating-move win-lose games on
//! complete binary trees.
//!
//! Leaves carry i.i.d. Bernoulli(`p`) payoffs (1 = Player 1 wins), Player 2
//! moves at odd heights and Player 1 at even heights. A game is `d`-fragile
//! when the losing player can overturn its value by flipping at most `d`
//! payoffs.
//!
//! - [`game`]: representation, minimax value, seeded sampling.
//! - [`fragility`]: per-instance flip costs, witnesses, brute-force oracle.
//! - [`distribution`]: exact probabilities by a capped cost-distribution DP.
//! - [`theory`]: depth recursions and limits for golden games (`p = φ`).
//! - [`montecarlo`]: reproducible parallel estimates with Wilson intervals.
//! - [`verify`]: cross-checks between the independent routes above.
//!
//! ```
//! use golden_games::{sample_game, witness, SampleSpec, GOLDEN};
//!
//! let game = sample_game(&SampleSpec::new(8, GOLDEN, 42, 0).unwrap()).unwrap();
//! let report = witness(&game);
//! assert_ne!(game.flipped(&report.witness).value(), report.value);
//! ```

pub mod cli;
pub mod distribution;
pub mod error;
pub mod format;
pub mod fragility;
pub mod game;
pub mod montecarlo;
pub mod theory;
pub mod verify;

pub use distribution::{
    combine, exact_table, leaf_distribution, two_level_map, value_prob_iterate,
    CappedCostDistribution, ExactRow, FlipCost,
};
pub use error::{Error, Result};
pub use fragility::{
    brute_force_fragility, cost_pair, fragility, is_fragile, witness, BruteForce, CostPair,
    FragilityReport,
};
pub use game::{
    leaf_payoff, mover_at_height, sample_game, value, value_streamed, GameInstance, Player,
    SampleSpec, MAX_MATERIALIZED_DEPTH,
};
pub use montecarlo::{estimate, EstimationRequest, EstimationResult, Wilson};
pub use theory::{
    asymptotic_limit_check, finite_alpha_beta, finite_table, xi_quadratic_root, xi_sequence,
    FiniteRow, FiniteTable, TheoryRow,
};

/// `(√5 − 1) / 2`, the double nearest the golden section below 1. Satisfies `φ² = 1 − φ`.
pub const GOLDEN: f64 = 0.618_033_988_749_894_9;
