//! Independent verification: tangency residuals, a multi-start Newton
//! root finder over `(x, r)`, and reproducible random generator sets.
//!
//! Nothing here calls the analytic solvers; the Newton iteration uses its own
//! linear algebra (nalgebra) so that agreement between the two is evidence.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::apollonius::ApolloniusSolution;
use crate::geometry::{Ball, BallSet, SignSet, Tolerances};
use crate::power::difference_matrix;
use crate::smallmat::rank;

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    /// `|x_i - x| - |s_i r_i + r|` per generator.
    pub per_ball: Vec<f64>,
    pub max_abs: f64,
}

/// Signed tangency residual of a candidate ball `(x, r)`.
pub fn residual_of(set: &BallSet, center: &[f64], radius: f64, signs: &SignSet) -> ResidualReport {
    let per_ball: Vec<f64> = set
        .balls()
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let dist = b
                .center
                .iter()
                .zip(center)
                .map(|(a, c)| (a - c) * (a - c))
                .sum::<f64>()
                .sqrt();
            dist - (signs.get(i) * b.radius + radius).abs()
        })
        .collect();
    let max_abs = per_ball.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    ResidualReport { per_ball, max_abs }
}

pub fn tangency_residual(set: &BallSet, sol: &ApolloniusSolution, signs: &SignSet) -> ResidualReport {
    residual_of(set, &sol.center, sol.radius, signs)
}

/// A root of the tangency system found by Newton iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleRoot {
    pub center: Vec<f64>,
    pub radius: f64,
}

const MAX_ITERATIONS: usize = 50;
const CONVERGED_REL: f64 = 1e-12;
const MAX_POLISH: usize = 8;

/// `f_i = |x - x_i|^2 - (r + s_i r_i)^2` and its Jacobian.
fn system(balls: &[(Vec<f64>, f64)], z: &DVector<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let n = z.len();
    let d = n - 1;
    let r = z[d];
    let mut f = DVector::zeros(n);
    let mut jac = DMatrix::zeros(n, n);
    for (i, (c, sr)) in balls.iter().enumerate() {
        let mut dist2 = 0.0;
        for k in 0..d {
            let diff = z[k] - c[k];
            dist2 += diff * diff;
            jac[(i, k)] = 2.0 * diff;
        }
        let reach = r + sr;
        f[i] = dist2 - reach * reach;
        jac[(i, d)] = -2.0 * reach;
    }
    (f, jac)
}

fn max_abs(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// Damped Newton from `z`: the step is halved while the residual does not
/// decrease, and a start that cannot decrease it at all is abandoned.
/// Returns the converged point, polished by full steps until the residual
/// stops decreasing (at most `MAX_POLISH`).
fn newton(
    balls: &[(Vec<f64>, f64)],
    mut z: DVector<f64>,
    target: impl Fn(&DVector<f64>) -> f64,
) -> Option<DVector<f64>> {
    let (mut f, mut jac) = system(balls, &z);
    let mut res = max_abs(&f);
    for _ in 0..MAX_ITERATIONS {
        if res <= target(&z) {
            for _ in 0..MAX_POLISH {
                let step = jac.clone().lu().solve(&f)?;
                let next = &z - step;
                let (nf, nj) = system(balls, &next);
                if max_abs(&nf) > res {
                    break;
                }
                z = next;
                f = nf;
                jac = nj;
                res = max_abs(&f);
            }
            return Some(z);
        }
        let step = jac.clone().lu().solve(&f)?;
        let mut t = 1.0;
        loop {
            let next = &z - &step * t;
            let (nf, nj) = system(balls, &next);
            let nres = max_abs(&nf);
            if nres < res {
                z = next;
                f = nf;
                jac = nj;
                res = nres;
                break;
            }
            t *= 0.5;
            if t < 1e-6 {
                // Stagnated in a local minimum of the residual.
                return None;
            }
        }
        if !z.iter().all(|v| v.is_finite()) {
            return None;
        }
    }
    (res <= target(&z)).then_some(z)
}

/// Default number of Newton starts: `5^{d+1}`.
pub fn default_starts(d: usize) -> usize {
    5usize.pow(d as u32 + 1)
}

/// Magnifications of the start grid; far roots (`|r|` many times the set
/// scale) are only reached from far starts.
const ZOOM_LEVELS: [f64; 4] = [1.0, 16.0, 256.0, 4096.0];

/// Every distinct real solution of the signed tangency system found from
/// about `starts` Newton starts per zoom level.
///
/// Starts form a grid over the bounding box of the centers (padded by the
/// largest radius) crossed with radius seeds in `[-span, span]`; the same
/// grid is repeated magnified about the box center by each of
/// [`ZOOM_LEVELS`]. Convergence and merging are relative to
/// `max(scale, |z|)`, and two roots whose midpoint also converges are
/// merged, so that far roots are neither rejected nor split. The
/// result is sorted by radius, then lexicographically by center, both
/// quantized to the merge distance.
pub fn brute_force_solutions(set: &BallSet, signs: &SignSet, starts: usize) -> Vec<OracleRoot> {
    let d = set.dim();
    let tol = Tolerances::default();
    let scale = set.scale();
    let balls: Vec<(Vec<f64>, f64)> = set
        .balls()
        .iter()
        .enumerate()
        .map(|(i, b)| (b.center.clone(), signs.get(i) * b.radius))
        .collect();

    let r_max = set.radii().fold(0.0_f64, |m, r| m.max(r.abs()));
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for b in set.balls() {
        for k in 0..d {
            lo[k] = lo[k].min(b.center[k] - r_max);
            hi[k] = hi[k].max(b.center[k] + r_max);
        }
    }
    let span = (0..d).map(|k| hi[k] - lo[k]).fold(0.0_f64, f64::max).max(r_max).max(1e-300);

    // Per-axis grid size so that the grid has about `starts` points.
    let per_axis = ((starts.max(1) as f64).powf(1.0 / (d as f64 + 1.0)).round() as usize).max(1);
    let axis = |k: usize, j: usize, zoom: f64| {
        let mid = 0.5 * (lo[k] + hi[k]);
        if per_axis == 1 {
            mid
        } else {
            let u = -1.0 + 2.0 * j as f64 / (per_axis - 1) as f64;
            mid + zoom * 0.5 * (hi[k] - lo[k]) * u
        }
    };
    let radius_seed = |j: usize, zoom: f64| {
        if per_axis == 1 {
            0.5 * span * zoom
        } else {
            // Avoid r = 0 exactly, where the Jacobian column can vanish.
            zoom * (-span + 2.0 * span * (j as f64 + 0.37) / per_axis as f64)
        }
    };

    let magnitude = |z: &DVector<f64>| z.iter().fold(scale, |m, v| m.max(v.abs()));
    let merge = tol.dedupe_rel * scale;
    let mut roots: Vec<OracleRoot> = Vec::new();
    let total = per_axis.pow(d as u32 + 1);
    for zoom in ZOOM_LEVELS {
        for idx in 0..total {
            let mut rest = idx;
            let mut z = DVector::zeros(d + 1);
            for k in 0..=d {
                let j = rest % per_axis;
                rest /= per_axis;
                z[k] = if k < d { axis(k, j, zoom) } else { radius_seed(j, zoom) };
            }
            let target = |z: &DVector<f64>| CONVERGED_REL * magnitude(z).powi(2);
            let Some(z) = newton(&balls, z, target) else {
                continue;
            };
            let near = tol.dedupe_rel * magnitude(&z);
            let center: Vec<f64> = z.iter().take(d).copied().collect();
            let radius = z[d];
            // Ill-conditioned far roots scatter beyond `near`; two points
            // whose midpoint is still converged belong to the same root.
            let same_root = |o: &OracleRoot| {
                let mid = DVector::from_iterator(
                    d + 1,
                    o.center.iter().chain([&o.radius]).zip(z.iter()).map(|(a, b)| 0.5 * (a + b)),
                );
                max_abs(&system(&balls, &mid).0) <= target(&mid)
            };
            let dup = roots.iter().any(|o| {
                let close = (o.radius - radius).abs() <= near
                    && o.center.iter().zip(&center).all(|(a, b)| (a - b).abs() <= near);
                close || same_root(o)
            });
            if !dup {
                roots.push(OracleRoot { center, radius });
            }
        }
    }
    // Quantized so that values equal up to the merge distance tie.
    let key = |r: f64| (r / merge).round();
    roots.sort_by(|a, b| {
        key(a.radius)
            .total_cmp(&key(b.radius))
            .then_with(|| {
                a.center
                    .iter()
                    .zip(&b.center)
                    .map(|(x, y)| key(*x).total_cmp(&key(*y)))
                    .find(|o| o.is_ne())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
    });
    roots
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Conditioning {
    /// Pairwise disjoint balls.
    WellSeparated,
    /// Balls may intersect.
    Overlapping,
    /// Centers within 1e-8 of a random hyperplane.
    NearDegenerate,
}

fn unit_vector(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 0.1 && n <= 1.0 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

/// Smallest complete-pivot ratio of `V` accepted for the full-rank modes.
pub const GENERAL_POSITION_PIVOT: f64 = 1e-3;

/// Reproducible random set of `d + 1` balls.
///
/// The two full-rank modes redraw nearly flat simplices (a pivot of `V`
/// below [`GENERAL_POSITION_PIVOT`] times its largest entry); those belong to
/// [`Conditioning::NearDegenerate`].
pub fn random_ball_set(d: usize, seed: u64, conditioning: Conditioning) -> BallSet {
    assert!(d >= 2, "random_ball_set needs d >= 2");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((d as u64) << 48));
    loop {
        let balls: Vec<Ball> = match conditioning {
            Conditioning::WellSeparated => {
                let mut balls: Vec<Ball> = Vec::with_capacity(d + 1);
                while balls.len() < d + 1 {
                    let c: Vec<f64> = (0..d).map(|_| rng.random_range(-10.0..10.0)).collect();
                    let r = rng.random_range(0.1..2.0);
                    let clear = balls.iter().all(|b| {
                        let dist = b.center.iter().zip(&c).map(|(a, x)| (a - x) * (a - x)).sum::<f64>().sqrt();
                        dist > b.radius + r
                    });
                    if clear {
                        balls.push(Ball::new(c, r));
                    }
                }
                balls
            }
            Conditioning::Overlapping => (0..=d)
                .map(|_| {
                    let c: Vec<f64> = (0..d).map(|_| rng.random_range(-2.0..2.0)).collect();
                    Ball::new(c, rng.random_range(0.5..3.0))
                })
                .collect(),
            Conditioning::NearDegenerate => {
                let normal = unit_vector(&mut rng, d);
                let offset = rng.random_range(-5.0..5.0);
                (0..=d)
                    .map(|_| {
                        let p: Vec<f64> = (0..d).map(|_| rng.random_range(-10.0..10.0)).collect();
                        let along = p.iter().zip(&normal).map(|(a, n)| a * n).sum::<f64>();
                        let lift = offset - along + rng.random_range(-1e-8..1e-8);
                        let c: Vec<f64> = p.iter().zip(&normal).map(|(a, n)| a + lift * n).collect();
                        Ball::new(c, rng.random_range(0.1..2.0))
                    })
                    .collect()
            }
        };
        if let Ok(set) = BallSet::new(balls) {
            let flat_ok = conditioning == Conditioning::NearDegenerate
                || rank(&difference_matrix(&set), GENERAL_POSITION_PIVOT) == d;
            if flat_ok {
                return set;
            }
        }
    }
}
