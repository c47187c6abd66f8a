//! Tangent-ball kernel for sets of `d + 1` balls in R^d.
//!
//! Given generator balls `(x_i, r_i)`, finds the balls `(x, r)` with
//! `|x_i - x| = r_i + r` for every `i` (negative `r` allowed). Full-rank sets
//! are solved through the power vertex and power gradient with a single
//! factorization; sets whose centers lie in a hyperplane go through a
//! dedicated mirror-pair solver. Exact predicates decide conflicts for
//! integer input, and an independent Newton oracle backs the tests.

pub mod apollonius;
pub mod error;
pub mod exactpred;
pub mod geometry;
pub mod oracle;
pub mod power;
pub mod smallmat;
pub mod subdim;

pub use apollonius::{
    classify_roots, detect_twin, solve_all_sign_sets, solve_recipe1, solve_recipe2, solve_recipe3,
    solve_signed, ApolloniusSolution, Recipe, RootLabel, RootPattern, SolveOutcome, SpecialCase,
    TangencyClass,
};
pub use error::{Error, Result};
pub use exactpred::{incircle, incircle_signs, ConflictSigns, IntBall};
pub use geometry::{
    normalize_radii, preprocess_translate, validate_ball_set, Ball, BallSet, SignSet, Tolerances,
    Translation,
};
pub use oracle::{brute_force_solutions, random_ball_set, tangency_residual, Conditioning, ResidualReport};
pub use power::{power_distance, power_vertex, PowerSolution};
pub use subdim::{dispatch_solve, solve_subdimensional, SubdimSolution};
