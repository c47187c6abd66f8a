//! Core domain types: balls, validated ball sets, tangency sign sets and
//! numerical tolerances, plus the two radius/origin normalizations that the
//! solvers rely on.

use crate::error::{Error, Result};

/// A ball `(center, radius)` in R^d. The radius may be negative on input.
#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: impl Into<Vec<f64>>, radius: f64) -> Self {
        Ball {
            center: center.into(),
            radius,
        }
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    fn is_finite(&self) -> bool {
        self.radius.is_finite() && self.center.iter().all(|c| c.is_finite())
    }
}

/// Exactly `d + 1` balls in R^d with no two concentric.
///
/// Overlapping, hidden and trivial (contained) balls are all accepted.
#[derive(Debug, Clone, PartialEq)]
pub struct BallSet {
    dimension: usize,
    balls: Vec<Ball>,
}

/// Validates `balls` as a vertex problem in dimension `d`.
pub fn validate_ball_set(balls: Vec<Ball>, d: usize) -> Result<BallSet> {
    if d < 1 {
        return Err(Error::DimensionTooSmall { min: 1, got: d });
    }
    if balls.len() != d + 1 {
        return Err(Error::WrongCount {
            dimension: d,
            expected: d + 1,
            got: balls.len(),
        });
    }
    for (index, ball) in balls.iter().enumerate() {
        if ball.dim() != d {
            return Err(Error::DimensionMismatch {
                index,
                expected: d,
                got: ball.dim(),
            });
        }
        if !ball.is_finite() {
            return Err(Error::NonFinite { index });
        }
    }
    // Exact comparison: a tolerance would silently merge distinct problems.
    for i in 0..balls.len() {
        for j in i + 1..balls.len() {
            if balls[i].center == balls[j].center {
                return Err(Error::ConcentricPair {
                    first: i,
                    second: j,
                });
            }
        }
    }
    Ok(BallSet { dimension: d, balls })
}

impl BallSet {
    /// Validates `balls`, inferring `d` from the first center.
    pub fn new(balls: Vec<Ball>) -> Result<Self> {
        let d = balls.first().map(Ball::dim).unwrap_or(0);
        validate_ball_set(balls, d)
    }

    pub fn dim(&self) -> usize {
        self.dimension
    }

    pub fn balls(&self) -> &[Ball] {
        &self.balls
    }

    pub fn ball(&self, i: usize) -> &Ball {
        &self.balls[i]
    }

    pub fn len(&self) -> usize {
        self.balls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.balls.is_empty()
    }

    pub fn into_balls(self) -> Vec<Ball> {
        self.balls
    }

    pub fn radii(&self) -> impl Iterator<Item = f64> + '_ {
        self.balls.iter().map(|b| b.radius)
    }

    /// Input scale `max |coordinate| + max |radius|`; all relative
    /// tolerances are measured against it.
    pub fn scale(&self) -> f64 {
        let coord = self
            .balls
            .iter()
            .flat_map(|b| b.center.iter())
            .fold(0.0_f64, |m, c| m.max(c.abs()));
        let rad = self.radii().fold(0.0_f64, |m, r| m.max(r.abs()));
        let s = coord + rad;
        if s > 0.0 {
            s
        } else {
            1.0
        }
    }

    /// Index of the smallest radius; ties go to the lowest index.
    pub fn smallest_radius_index(&self) -> usize {
        let mut k = 0;
        for (i, b) in self.balls.iter().enumerate() {
            if b.radius < self.balls[k].radius {
                k = i;
            }
        }
        k
    }

    /// Index of the largest radius; ties go to the lowest index.
    pub fn largest_radius_index(&self) -> usize {
        let mut k = 0;
        for (i, b) in self.balls.iter().enumerate() {
            if b.radius > self.balls[k].radius {
                k = i;
            }
        }
        k
    }

    /// The same centers with every radius increased by `eps`.
    pub fn with_radius_increment(&self, eps: f64) -> BallSet {
        self.map_radii(|_, r| r + eps)
    }

    /// The same centers with radii produced by `f(index, radius)`.
    pub fn map_radii(&self, mut f: impl FnMut(usize, f64) -> f64) -> BallSet {
        BallSet {
            dimension: self.dimension,
            balls: self
                .balls
                .iter()
                .enumerate()
                .map(|(i, b)| Ball::new(b.center.clone(), f(i, b.radius)))
                .collect(),
        }
    }

    /// Reorders the balls; `order` must be a permutation of `0..=d`.
    pub fn permuted(&self, order: &[usize]) -> BallSet {
        BallSet {
            dimension: self.dimension,
            balls: order.iter().map(|&i| self.balls[i].clone()).collect(),
        }
    }
}

/// Tangency selectors `s_i = ±1`, one per generator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignSet(Vec<i8>);

impl SignSet {
    pub fn new(signs: Vec<i32>, count: usize) -> Result<Self> {
        if signs.len() != count {
            return Err(Error::SignCount {
                expected: count,
                got: signs.len(),
            });
        }
        signs
            .into_iter()
            .map(|s| match s {
                1 => Ok(1),
                -1 => Ok(-1),
                other => Err(Error::InvalidSign(other)),
            })
            .collect::<Result<Vec<i8>>>()
            .map(SignSet)
    }

    pub fn all_positive(count: usize) -> Self {
        SignSet(vec![1; count])
    }

    /// Sign set number `mask` of `count` entries: bit `i` set means `s_i = -1`.
    pub fn from_mask(mask: u64, count: usize) -> Self {
        SignSet(
            (0..count)
                .map(|i| if mask >> i & 1 == 1 { -1 } else { 1 })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> f64 {
        f64::from(self.0[i])
    }

    pub fn signs(&self) -> &[i8] {
        &self.0
    }

    pub fn is_all_positive(&self) -> bool {
        self.0.iter().all(|&s| s == 1)
    }

    pub fn negated(&self) -> SignSet {
        SignSet(self.0.iter().map(|s| -s).collect())
    }
}

impl std::fmt::Display for SignSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<&str> = self
            .0
            .iter()
            .map(|&s| if s > 0 { "+" } else { "-" })
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Relative thresholds, all measured against [`BallSet::scale`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Pivot threshold below which `V` counts as singular.
    pub singular_rel: f64,
    /// Bound on tangency residuals of accepted solutions.
    pub residual_rel: f64,
    /// Distance under which two solutions are the same.
    pub dedupe_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            singular_rel: 1e-12,
            residual_rel: 1e-9,
            dedupe_rel: 1e-9,
        }
    }
}

impl Tolerances {
    pub fn new(singular_rel: f64, residual_rel: f64, dedupe_rel: f64) -> Result<Self> {
        let ok = |v: f64| v > 0.0 && v < 1.0;
        if !ok(singular_rel) {
            return Err(Error::InvalidTolerance("singular_rel must be in (0, 1)"));
        }
        if !ok(residual_rel) {
            return Err(Error::InvalidTolerance("residual_rel must be in (0, 1)"));
        }
        if !ok(dedupe_rel) {
            return Err(Error::InvalidTolerance("dedupe_rel must be in (0, 1)"));
        }
        Ok(Tolerances {
            singular_rel,
            residual_rel,
            dedupe_rel,
        })
    }
}

/// Raises all radii by `shift = -min(r_i)` when some radius is negative.
///
/// Centers are untouched. A solution `(x, r)` of the shifted set corresponds
/// to `(x, r + shift)` for the original set: growing every generator by
/// `shift` shrinks every tangent ball by the same amount.
pub fn normalize_radii(set: &BallSet) -> (BallSet, f64) {
    let min = set.radii().fold(f64::INFINITY, f64::min);
    if min < 0.0 {
        let shift = -min;
        (set.with_radius_increment(shift), shift)
    } else {
        (set.clone(), 0.0)
    }
}

/// Record of a [`preprocess_translate`] so results can be mapped back.
#[derive(Debug, Clone, PartialEq)]
pub struct Translation {
    /// Index of the ball moved to the origin.
    pub index: usize,
    pub offset: Vec<f64>,
    pub radius: f64,
}

impl Translation {
    /// Maps a point of the translated frame back to the original frame.
    pub fn restore_point(&self, x: &[f64]) -> Vec<f64> {
        x.iter().zip(&self.offset).map(|(a, o)| a + o).collect()
    }

    /// Maps a solution radius of the translated set back to the original set.
    ///
    /// Translated generators were shrunk by `radius`, so their tangent balls
    /// grew by the same amount.
    pub fn restore_solution_radius(&self, r: f64) -> f64 {
        r - self.radius
    }

    /// Inverse of the translation applied to a generator set.
    pub fn undo(&self, set: &BallSet) -> BallSet {
        BallSet {
            dimension: set.dimension,
            balls: set
                .balls
                .iter()
                .map(|b| Ball::new(self.restore_point(&b.center), b.radius + self.radius))
                .collect(),
        }
    }
}

/// Moves the smallest ball to the origin and reduces it to a point.
///
/// Every ball becomes `(x_i - x_k, r_i - r_k)` where `k` is the
/// smallest-radius index (lowest index on ties).
pub fn preprocess_translate(set: &BallSet) -> (BallSet, Translation) {
    let k = set.smallest_radius_index();
    let offset = set.balls[k].center.clone();
    let radius = set.balls[k].radius;
    let balls = set
        .balls
        .iter()
        .map(|b| {
            Ball::new(
                b.center.iter().zip(&offset).map(|(a, o)| a - o).collect::<Vec<_>>(),
                b.radius - radius,
            )
        })
        .collect();
    (
        BallSet {
            dimension: set.dimension,
            balls,
        },
        Translation {
            index: k,
            offset,
            radius,
        },
    )
}
