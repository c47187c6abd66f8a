//! Inputs shared by the criterion benches.

use apollo_core::{random_ball_set, BallSet, Conditioning, IntBall};
use num_bigint::BigInt;

/// Random well-separated sets of dimension `d`, one per seed.
pub fn float_sets(d: usize, count: u64) -> Vec<BallSet> {
    (0..count).map(|s| random_ball_set(d, s, Conditioning::WellSeparated)).collect()
}

/// A random set rounded to a 10^-3 grid and scaled to integers, plus a
/// query ball taken from a second random set.
pub fn integer_instance(d: usize, seed: u64) -> (Vec<IntBall>, IntBall) {
    let round = |v: f64| BigInt::from((v * 1000.0).round() as i64);
    let to_int = |set: &BallSet, i: usize| {
        let b = &set.balls()[i];
        IntBall::new(b.center.iter().map(|&c| round(c)).collect(), round(b.radius))
    };
    let set = random_ball_set(d, seed, Conditioning::WellSeparated);
    let other = random_ball_set(d, seed + 1, Conditioning::WellSeparated);
    ((0..=d).map(|i| to_int(&set, i)).collect(), to_int(&other, 0))
}
