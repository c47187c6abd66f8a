//! Acceptance suite: one line per criterion, non-zero exit on any failure.

mod common;

use std::time::{Duration, Instant};

use apollo_core::apollonius::RootLabel;
use apollo_core::exactpred::{incircle_signs, IntBall};
use apollo_core::oracle::{default_starts, residual_of};
use apollo_core::power::incremented_power_vertex;
use apollo_core::*;
use common::*;
use rand::Rng;

type Outcome = std::result::Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)*) => {
        if !$cond {
            return Err(format!($($fmt)*));
        }
    };
}

fn within_time(start: Instant, limit: Duration) -> std::result::Result<f64, String> {
    let secs = start.elapsed().as_secs_f64();
    if secs < limit.as_secs_f64() {
        Ok(secs)
    } else {
        Err(format!("took {secs:.1} s, limit {} s", limit.as_secs()))
    }
}

fn mixed_set(d: usize, seed: u64) -> BallSet {
    let mode = if seed % 2 == 0 {
        Conditioning::WellSeparated
    } else {
        Conditioning::Overlapping
    };
    random_ball_set(d, seed, mode)
}

fn tangency_suite() -> Outcome {
    let start = Instant::now();
    let tol = Tolerances::default();
    let mut checked = 0usize;
    let mut worst: f64 = 0.0;
    for d in 2..=5 {
        for seed in 0..10_000 {
            let set = mixed_set(d, seed);
            let scale = set.scale();
            for (k, out) in [
                solve_recipe1(&set, &tol),
                solve_recipe2(&set, &tol),
                solve_recipe3(&set, &tol),
            ]
            .into_iter()
            .enumerate()
            {
                let out = out.map_err(|e| format!("d={d} seed={seed} recipe {}: {e}", k + 1))?;
                let res = max_residual(&set, &out) / scale;
                ensure!(res <= 1e-9, "d={d} seed={seed} recipe {}: residual {res:e} x scale", k + 1);
                worst = worst.max(res);
                checked += out.solutions.len();
            }
        }
    }
    let secs = within_time(start, Duration::from_secs(60))?;
    Ok(format!("{checked} solutions, worst residual {worst:.2e} x scale, {secs:.1} s"))
}

fn same_solutions(a: &SolveOutcome, b: &SolveOutcome, scale: f64, rel: f64) -> std::result::Result<f64, String> {
    if a.solutions.len() != b.solutions.len() {
        return Err(format!("{} vs {} solutions", a.solutions.len(), b.solutions.len()));
    }
    let mut worst: f64 = 0.0;
    for (x, y) in a.solutions.iter().zip(&b.solutions) {
        let size = scale.max(x.radius.abs()).max(x.center.iter().fold(0.0, |m, v| m.max(v.abs())));
        let err = (x.radius - y.radius).abs().max(dist(&x.center, &y.center)) / size;
        if err > rel {
            return Err(format!("relative difference {err:e}"));
        }
        worst = worst.max(err);
    }
    Ok(worst)
}

fn cross_recipe() -> Outcome {
    let start = Instant::now();
    let tol = Tolerances::default();
    let mut worst: f64 = 0.0;
    for d in 2..=3 {
        for seed in 0..10_000 {
            let set = random_ball_set(d, seed, Conditioning::WellSeparated);
            let a = solve_recipe1(&set, &tol).map_err(|e| e.to_string())?;
            let b = solve_recipe2(&set, &tol).map_err(|e| e.to_string())?;
            let c = solve_recipe3(&set, &tol).map_err(|e| e.to_string())?;
            for other in [&b, &c] {
                let w = same_solutions(&a, other, set.scale(), 1e-8)
                    .map_err(|e| format!("d={d} seed={seed}: {e}"))?;
                worst = worst.max(w);
            }
        }
    }
    let secs = within_time(start, Duration::from_secs(60))?;
    Ok(format!("20000 sets, worst relative difference {worst:.2e}, {secs:.1} s"))
}

fn equilateral_fixture() -> Outcome {
    let s3 = 3.0_f64.sqrt();
    let set = BallSet::new(vec![
        Ball::new([0.0, 0.0], 1.0),
        Ball::new([2.0, 0.0], 1.0),
        Ball::new([1.0, s3], 1.0),
    ])
    .unwrap();
    let tol = Tolerances::default();
    let out = classify_roots(solve_recipe1(&set, &tol).unwrap(), &set, &tol).unwrap();
    ensure!(out.solutions.len() == 2, "expected two solutions");
    let (plus, minus) = (&out.solutions[0], &out.solutions[1]);
    let mut err: f64 = 0.0;
    for s in [plus, minus] {
        err = err.max((s.center[0] - 1.0).abs()).max((s.center[1] - 1.0 / s3).abs());
    }
    err = err
        .max((plus.radius - (2.0 / s3 - 1.0)).abs())
        .max((minus.radius - (-2.0 / s3 - 1.0)).abs());
    ensure!(err <= 1e-12, "error {err:e}");
    ensure!(
        minus.class == Some(TangencyClass::LargeNegative),
        "r- classified {:?}",
        minus.class
    );
    Ok(format!("max error {err:.1e}, r- LargeNegative"))
}

fn worked_fixture() -> Outcome {
    let set = BallSet::new(vec![
        Ball::new([0.0, 0.0], 0.0),
        Ball::new([2.0, 0.0], 1.0),
        Ball::new([0.0, 2.0], 0.0),
    ])
    .unwrap();
    let tol = Tolerances::default();
    let pw = power_vertex(&set, &tol).unwrap();
    ensure!(pw.p == vec![0.75, 1.0], "p = {:?}", pw.p);
    ensure!(pw.rp2 == 25.0 / 16.0, "rp2 = {}", pw.rp2);
    ensure!(pw.ptilde == vec![-0.5, 0.0], "ptilde = {:?}", pw.ptilde);

    // (|p~|^2 - 1) r^2 - 2 B r + rp2 = 0 with |p~|^2 = 1/4, B = 3/8.
    let root = (28.0_f64 / 3.0).sqrt();
    let exact = [(-1.0 + root) / 2.0, (-1.0 - root) / 2.0];
    let out = solve_recipe1(&set, &tol).unwrap();
    let mut err: f64 = 0.0;
    for (s, r) in out.solutions.iter().zip(exact) {
        err = err
            .max((s.radius - r).abs())
            .max((s.center[0] - (0.75 - 0.5 * r)).abs())
            .max((s.center[1] - 1.0).abs());
    }
    ensure!(out.solutions.len() == 2 && err <= 1e-5, "error {err:e}");
    let res = max_residual(&set, &out);
    ensure!(res <= 1e-12, "residual {res:e}");
    Ok(format!(
        "p, rp2, p~ exact; r = {:.7}, {:.7} (closed-form error {err:.1e}); residual {res:.1e}",
        out.solutions[0].radius, out.solutions[1].radius
    ))
}

fn perpendicular(point: &[f64], base: &[f64], dir: &[f64]) -> f64 {
    let v: Vec<f64> = point.iter().zip(base).map(|(a, b)| a - b).collect();
    let t: f64 = v.iter().zip(dir).map(|(a, b)| a * b).sum();
    v.iter().zip(dir).map(|(a, b)| (a - t * b).powi(2)).sum::<f64>().sqrt()
}

fn collinearity() -> Outcome {
    let tol = Tolerances::default();
    let mut worst: f64 = 0.0;
    let mut sets = 0;
    for seed in 0..1_000 {
        let d = 2 + (seed % 2) as usize;
        let set = random_ball_set(d, 50_000 + seed, Conditioning::WellSeparated);
        let p = power_vertex(&set, &tol).unwrap().p;
        // p' from an independent factorization of the grown set.
        let p_grown = power_vertex(&set.with_radius_increment(1.0), &tol).unwrap().p;
        let dir: Vec<f64> = p_grown.iter().zip(&p).map(|(a, b)| a - b).collect();
        let len = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
        let dir: Vec<f64> = dir.iter().map(|v| v / len).collect();
        let out = solve_recipe1(&set, &tol).unwrap();
        for s in &out.solutions {
            let e = perpendicular(&s.center, &p, &dir) / set.scale();
            ensure!(e <= 1e-10, "seed {seed}: perpendicular residual {e:e} x scale");
            worst = worst.max(e);
        }
        // Incrementing along the gradient lands on the same line.
        let walked = incremented_power_vertex(&set, 1.0, &tol).unwrap();
        let e = perpendicular(&walked, &p, &dir) / set.scale();
        ensure!(e <= 1e-10, "seed {seed}: incremented vertex off the line by {e:e}");
        sets += 1;
    }
    Ok(format!("{sets} sets, worst perpendicular residual {worst:.2e} x scale"))
}

fn increment_covariance() -> Outcome {
    let tol = Tolerances::default();
    let mut worst: f64 = 0.0;
    for seed in 0..1_000 {
        let d = 2 + (seed % 3) as usize;
        let set = random_ball_set(d, 60_000 + seed, Conditioning::WellSeparated);
        let base = solve_recipe1(&set, &tol).unwrap();
        for eps in [0.1, -0.1, 1.0, 10.0] {
            let grown = set.with_radius_increment(eps);
            let out = solve_recipe1(&grown, &tol).unwrap();
            ensure!(out.solutions.len() == base.solutions.len(), "seed {seed} eps {eps}: count changed");
            let scale = set.scale().max(grown.scale());
            for (a, b) in base.solutions.iter().zip(&out.solutions) {
                let e = ((a.radius - eps) - b.radius).abs().max(dist(&a.center, &b.center))
                    / scale.max(a.radius.abs());
                ensure!(e <= 1e-9, "seed {seed} eps {eps}: relative error {e:e}");
                worst = worst.max(e);
            }
        }
    }
    Ok(format!("1000 sets x 4 increments, worst relative error {worst:.2e}"))
}

fn subdimensional() -> Outcome {
    let tol = Tolerances::default();
    let set = BallSet::new(vec![
        Ball::new([-2.0, 0.0], 1.0),
        Ball::new([2.0, 0.0], 1.0),
        Ball::new([0.0, 0.0], 0.0),
    ])
    .unwrap();
    let out = dispatch_solve(&set, &tol).unwrap();
    ensure!(out.recipe == Recipe::SubDimensional, "routed to {:?}", out.recipe);
    let mut err: f64 = 0.0;
    for (s, y) in out.solutions.iter().zip([1.5, -1.5]) {
        err = err.max(s.center[0].abs()).max((s.center[1] - y).abs()).max((s.radius - 1.5).abs());
    }
    ensure!(out.solutions.len() == 2 && err <= 1e-13, "collinear fixture error {err:e}");

    let mut worst: f64 = 0.0;
    for seed in 0..1_000 {
        let c = coplanar_set(3, 70_000 + seed);
        let out = dispatch_solve(&c.set, &tol).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure!(out.recipe == Recipe::SubDimensional, "seed {seed}: routed to {:?}", out.recipe);
        ensure!(out.solutions.len() == 2, "seed {seed}: {} solutions", out.solutions.len());
        let (a, b) = (&out.solutions[0], &out.solutions[1]);
        ensure!(a.radius.to_bits() == b.radius.to_bits(), "seed {seed}: radii differ");
        let res = max_residual(&c.set, &out) / c.set.scale();
        ensure!(res <= 1e-12, "seed {seed}: residual {res:e} x scale");
        let pair_err = (dist(&a.center, &c.x).min(dist(&a.center, &c.mirror)))
            .max(dist(&b.center, &c.x).min(dist(&b.center, &c.mirror)));
        ensure!(pair_err <= 1e-10, "seed {seed}: mirror pair off by {pair_err:e}");
        worst = worst.max(res);
    }
    Ok(format!("fixture error {err:.1e}; 1000 coplanar 3-d sets, worst residual {worst:.2e} x scale"))
}

/// Coplanar 3-d fixture built around the solution `((0.4, 0.5, +-0.8), 0.3)`,
/// with the last center lifted by `dz`.
fn nudged_fixture(dz: f64) -> BallSet {
    let x = [0.4, 0.5, 0.8];
    let centers = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [1.0, 1.2, 0.0]];
    let balls = centers
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let mut c = *c;
            let r = dist(&c, &x) - 0.3;
            if i == 3 {
                c[2] += dz;
            }
            Ball::new(c, r)
        })
        .collect();
    BallSet::new(balls).unwrap()
}

/// Worst radius error and worst position error against the exact pair.
fn fixture_errors(out: &SolveOutcome) -> (f64, f64) {
    let truth = [[0.4, 0.5, 0.8], [0.4, 0.5, -0.8]];
    let r_err = out.solutions.iter().map(|s| (s.radius - 0.3).abs()).fold(0.0, f64::max);
    let x_err = truth
        .iter()
        .map(|t| out.solutions.iter().map(|s| dist(&s.center, t)).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max);
    (r_err, x_err)
}

fn perturbation_trend() -> Outcome {
    let tol = Tolerances::default();
    let flat = nudged_fixture(0.0);
    let scale = flat.scale();
    let exact = solve_subdimensional(&flat, &tol).map_err(|e| e.to_string())?;
    let (r4, x4) = fixture_errors(&exact);
    ensure!(r4.max(x4) <= 1e-13, "sub-dimensional errors {r4:e} / {x4:e}");

    let mid = solve_recipe1(&nudged_fixture(1e-7), &tol).map_err(|e| e.to_string())?;
    let (r_mid, x_mid) = fixture_errors(&mid);
    let e_mid = r_mid.max(x_mid);
    ensure!((1e-7..=1e-4).contains(&e_mid), "dz = 1e-7 error {e_mid:e} outside [1e-7, 1e-4]");

    let tiny = solve_recipe1(&nudged_fixture(4.4e-10), &tol).map_err(|e| e.to_string())?;
    let (r_tiny, x_tiny) = fixture_errors(&tiny);
    ensure!(x_tiny > 0.1 * scale, "dz = 4.4e-10 position error {x_tiny:e} not above 10% of scale");
    ensure!(r_mid > r_tiny, "radius error does not grow with the nudge");
    Ok(format!(
        "exact path {:.1e}; dz=1e-7: radius {r_mid:.1e}, position {x_mid:.1e}; dz=4.4e-10: radius {r_tiny:.1e}, position {:.0}% of scale",
        r4.max(x4),
        100.0 * x_tiny / scale
    ))
}

fn tenth_problem() -> Outcome {
    let tol = Tolerances::default();
    let set = BallSet::new(vec![
        Ball::new([0.0, 0.0], 1.0),
        Ball::new([6.0, 0.0], 1.5),
        Ball::new([1.0, 5.0], 0.5),
    ])
    .unwrap();
    let scale = set.scale();
    let all = solve_all_sign_sets(&set, &tol).map_err(|e| e.to_string())?;
    let mut analytic = Vec::new();
    for (signs, out) in &all {
        for s in &out.solutions {
            let res = residual_of(&set, &s.center, s.radius, signs).max_abs;
            ensure!(res <= 1e-9 * scale, "sign set {signs}: residual {res:e}");
            analytic.push((s.center.clone(), s.radius.abs()));
        }
    }
    ensure!(analytic.len() == 8, "{} analytic circles", analytic.len());

    let mut oracle: Vec<(Vec<f64>, f64)> = Vec::new();
    for (signs, _) in &all {
        for o in brute_force_solutions(&set, signs, default_starts(2)) {
            let dup = oracle
                .iter()
                .any(|(x, r)| dist(x, &o.center) <= 1e-9 * scale && (r - o.radius.abs()).abs() <= 1e-9 * scale);
            if !dup {
                oracle.push((o.center, o.radius.abs()));
            }
        }
    }
    ensure!(oracle.len() == 8, "oracle found {} circles", oracle.len());
    let mut worst: f64 = 0.0;
    for (x, r) in &analytic {
        let e = oracle
            .iter()
            .map(|(y, q)| dist(x, y).max((r - q).abs()))
            .fold(f64::INFINITY, f64::min);
        ensure!(e <= 1e-9, "analytic circle without oracle match ({e:e})");
        worst = worst.max(e);
    }
    Ok(format!("8 circles, oracle agrees to {worst:.1e}"))
}

fn hull_enclosed(y: f64) -> BallSet {
    BallSet::new(vec![
        Ball::new([-2.1, 0.0, 0.0], 2.0),
        Ball::new([2.1, 0.0, 0.0], 2.0),
        Ball::new([0.0, y, 0.0], 0.2),
        Ball::new([0.0, 0.0, 3.0], 1.0),
    ])
    .unwrap()
}

fn imaginary_detection() -> Outcome {
    let tol = Tolerances::default();
    for seed in 0..1_000 {
        let d = 2 + (seed % 2) as usize;
        let set = trivial_ball_set(d, 80_000 + seed);
        let out = solve_recipe1(&set, &tol).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure!(out.is_imaginary(), "seed {seed}: {} real solutions", out.solutions.len());
        let found = brute_force_solutions(&set, &SignSet::all_positive(d + 1), default_starts(d));
        ensure!(found.is_empty(), "seed {seed}: oracle found {} real solutions", found.len());
    }
    // The small ball sits in the convex hull of the two large ones without
    // being inside either. At y = 1.68 the set has two ordinary positive
    // solutions; moving the small ball by a tenth of its radius leaves none.
    let near = hull_enclosed(1.68);
    ensure!(!has_trivial_ball(&near), "hull fixture has a trivial ball");
    let real = solve_recipe1(&near, &tol).map_err(|e| e.to_string())?;
    ensure!(
        real.solutions.len() == 2 && real.solutions.iter().all(|s| s.radius > 0.0),
        "near fixture should have two positive solutions"
    );
    let moved = hull_enclosed(1.66);
    let out = solve_recipe1(&moved, &tol).map_err(|e| e.to_string())?;
    ensure!(out.is_imaginary(), "hull-enclosed fixture is not imaginary");
    let found = brute_force_solutions(&moved, &SignSet::all_positive(4), default_starts(3));
    ensure!(found.is_empty(), "oracle found {} solutions on the hull fixture", found.len());
    Ok(format!(
        "1000 trivial-ball sets and the hull-enclosed fixture (discriminant {:.3}) imaginary; oracle empty",
        out.discriminant
    ))
}

/// One exact-predicate instance: integer generators, root, query.
struct Instance {
    balls: Vec<(Vec<i64>, i64)>,
    root: RootLabel,
    query: (Vec<i64>, i64),
    center: Vec<f64>,
    radius: f64,
}

fn to_int(b: &(Vec<i64>, i64)) -> IntBall {
    IntBall::from_i64(&b.0, b.1)
}

fn to_set(balls: &[(Vec<i64>, i64)]) -> Option<BallSet> {
    BallSet::new(
        balls
            .iter()
            .map(|(c, r)| Ball::new(c.iter().map(|&v| v as f64).collect::<Vec<_>>(), *r as f64))
            .collect(),
    )
    .ok()
}

/// Picks a root whose partner is well separated, so both evaluations refer to
/// the same ball.
fn pick_root(set: &BallSet, rng: &mut rand_chacha::ChaCha8Rng) -> Option<(RootLabel, Vec<f64>, f64)> {
    let out = dispatch_solve(set, &Tolerances::default()).ok()?;
    if out.solutions.len() != 2 {
        return None;
    }
    let (a, b) = (&out.solutions[0], &out.solutions[1]);
    let gap = (a.radius - b.radius).abs().max(dist(&a.center, &b.center));
    if gap < 1e-6 * set.scale() || a.radius.abs().max(b.radius.abs()) > 1e6 {
        return None;
    }
    let s = if rng.random_bool(0.5) { a } else { b };
    Some((s.root, s.center.clone(), s.radius))
}

fn random_instance(rng: &mut rand_chacha::ChaCha8Rng) -> Instance {
    loop {
        let d = rng.random_range(2..=3usize);
        let flat = rng.random_bool(0.1);
        let coord = |rng: &mut rand_chacha::ChaCha8Rng| rng.random_range(-1024..=1024i64);
        let balls: Vec<(Vec<i64>, i64)> = if flat {
            // Centers on an integer line (d = 2) or plane (d = 3).
            let origin: Vec<i64> = (0..d).map(|_| coord(rng)).collect();
            let dirs: Vec<Vec<i64>> = (0..d - 1).map(|_| (0..d).map(|_| rng.random_range(-4..=4)).collect()).collect();
            (0..=d)
                .map(|_| {
                    let mut c = origin.clone();
                    for dir in &dirs {
                        let k = rng.random_range(-100..=100i64);
                        c.iter_mut().zip(dir).for_each(|(x, v)| *x += k * v);
                    }
                    (c, rng.random_range(0..=512))
                })
                .collect()
        } else {
            (0..=d)
                .map(|_| ((0..d).map(|_| coord(rng)).collect(), rng.random_range(0..=1024)))
                .collect()
        };
        let Some(set) = to_set(&balls) else { continue };
        let Some((root, center, radius)) = pick_root(&set, rng) else { continue };
        let query = ((0..d).map(|_| coord(rng)).collect(), rng.random_range(0..=1024));
        return Instance {
            balls,
            root,
            query,
            center,
            radius,
        };
    }
}

/// Generators and query all exactly tangent to an integer ball, optionally
/// nudged by one unit.
fn adversarial_instance(
    rng: &mut rand_chacha::ChaCha8Rng,
    vectors: &[Vec<(Vec<i64>, i64)>; 2],
) -> Instance {
    loop {
        let d = rng.random_range(2..=3usize);
        let pool = &vectors[d - 2];
        let center: Vec<i64> = (0..d).map(|_| rng.random_range(-500..=500)).collect();
        let picks: Vec<&(Vec<i64>, i64)> = (0..d + 2).map(|_| &pool[rng.random_range(0..pool.len())]).collect();
        let min_norm = picks.iter().map(|p| p.1).min().unwrap();
        if min_norm < 2 {
            continue;
        }
        let radius = rng.random_range(1..min_norm);
        let place = |(v, n): &(Vec<i64>, i64)| -> (Vec<i64>, i64) {
            (center.iter().zip(v).map(|(c, x)| c + x).collect(), n - radius)
        };
        let balls: Vec<(Vec<i64>, i64)> = picks[..=d].iter().map(|p| place(p)).collect();
        let mut query = place(picks[d + 1]);
        match rng.random_range(0..4) {
            0 => {}
            1 => query.1 += 1,
            2 => query.1 -= 1,
            _ => {
                let k = rng.random_range(0..d);
                query.0[k] += if rng.random_bool(0.5) { 1 } else { -1 };
            }
        }
        let Some(set) = to_set(&balls) else { continue };
        let Ok(out) = dispatch_solve(&set, &Tolerances::default()) else { continue };
        if out.solutions.len() != 2 {
            continue;
        }
        let (a, b) = (&out.solutions[0], &out.solutions[1]);
        if (a.radius - b.radius).abs().max(dist(&a.center, &b.center)) < 1e-6 * set.scale() {
            continue;
        }
        // The constructed ball is the root closest to it.
        let target: Vec<f64> = center.iter().map(|&v| v as f64).collect();
        let err = |s: &ApolloniusSolution| dist(&s.center, &target) + (s.radius - radius as f64).abs();
        let s = if err(a) <= err(b) { a } else { b };
        if err(s) > 1e-6 * set.scale() {
            continue;
        }
        return Instance {
            balls,
            root: s.root,
            query,
            center: s.center.clone(),
            radius: s.radius,
        };
    }
}

fn hp_sign(v: &Hp, magnitude: f64) -> i8 {
    let f = hp_f64(v);
    if f.abs() <= magnitude * 1e-60 {
        0
    } else if f > 0.0 {
        1
    } else {
        -1
    }
}

/// (agrees with 256-bit, double precision disagreed with exact)
fn check_instance(inst: &Instance) -> std::result::Result<(bool, bool), String> {
    let balls: Vec<IntBall> = inst.balls.iter().map(to_int).collect();
    let exact = incircle_signs(&balls, inst.root, &to_int(&inst.query)).map_err(|e| e.to_string())?;
    let (x, r) = hp_refine(&inst.balls, &inst.center, inst.radius).ok_or("256-bit refinement failed")?;
    let (qc, qr) = &inst.query;
    let q: Vec<Hp> = qc.iter().map(|&v| hp(v as f64)).collect();
    let reach = &hp(*qr as f64) + &r;
    let mut sep = -(&reach * &reach);
    for (a, b) in q.iter().zip(&x) {
        let diff = a - b;
        sep = &sep + &(&diff * &diff);
    }
    let magnitude = 1.0 + hp_f64(&reach).powi(2);
    let agree = hp_sign(&sep, magnitude) == exact.separation && hp_sign(&reach, magnitude.sqrt()) == exact.reach;

    let q64: Vec<f64> = qc.iter().map(|&v| v as f64).collect();
    let reach64 = *qr as f64 + inst.radius;
    let sep64 = dist(&q64, &inst.center).powi(2) - reach64 * reach64;
    let conflict64 = sep64 < 0.0 && reach64 > 0.0;
    Ok((agree, conflict64 != exact.conflict()))
}

fn exact_incircle() -> Outcome {
    let mut rng = rng(11);
    let mut disagreements = 0;
    let mut random_total = 0;
    for _ in 0..10_000 {
        let inst = random_instance(&mut rng);
        let (agree, _) = check_instance(&inst)?;
        disagreements += usize::from(!agree);
        random_total += 1;
    }
    let vectors = [integer_length_vectors(2, 300), integer_length_vectors(3, 40)];
    let mut double_flips = 0;
    for _ in 0..1_000 {
        let inst = adversarial_instance(&mut rng, &vectors);
        let (agree, flipped) = check_instance(&inst)?;
        disagreements += usize::from(!agree);
        double_flips += usize::from(flipped);
    }
    ensure!(disagreements == 0, "{disagreements} disagreements with 256-bit evaluation");
    Ok(format!(
        "{random_total} random + 1000 near-tangent instances, 0 disagreements (double precision wrong on {double_flips})"
    ))
}

fn enclosure() -> Outcome {
    let tol = Tolerances::default();
    let mut sets = 0;
    let mut seed = 90_000;
    let mut worst: f64 = f64::NEG_INFINITY;
    while sets < 1_000 {
        seed += 1;
        let d = 2 + (seed % 3) as usize;
        let set = mixed_set(d, seed);
        let out = classify_roots(dispatch_solve(&set, &tol).map_err(|e| e.to_string())?, &set, &tol)
            .map_err(|e| e.to_string())?;
        let mut any = false;
        for s in out.solutions.iter().filter(|s| s.class == Some(TangencyClass::LargeNegative)) {
            any = true;
            for b in set.balls() {
                let excess = dist(&s.center, &b.center) + b.radius - s.radius.abs();
                ensure!(excess <= 1e-9 * set.scale(), "seed {seed}: generator sticks out by {excess:e}");
                worst = worst.max(excess / set.scale());
            }
        }
        sets += usize::from(any);
    }
    Ok(format!("{sets} sets with a LargeNegative root, max excess {worst:.1e} x scale"))
}

fn preprocessing() -> Outcome {
    let tol = Tolerances::default();
    let mut sets = 0;
    let mut seed = 100_000;
    let mut negatives = 0;
    while sets < 10_000 {
        seed += 1;
        let d = 2 + (seed % 2) as usize;
        let set = mixed_set(d, seed);
        if has_trivial_ball(&set) {
            continue;
        }
        let (moved, _) = preprocess_translate(&set);
        let out = classify_roots(dispatch_solve(&moved, &tol).map_err(|e| e.to_string())?, &moved, &tol)
            .map_err(|e| e.to_string())?;
        for s in &out.solutions {
            ensure!(
                s.class != Some(TangencyClass::SmallNegative),
                "seed {seed}: SmallNegative radius {}",
                s.radius
            );
            negatives += usize::from(s.radius < 0.0);
        }
        sets += 1;
    }
    Ok(format!("{sets} non-trivial sets, no SmallNegative ({negatives} LargeNegative roots)"))
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

fn fit_exponent(dims: &[usize], times: &[f64]) -> f64 {
    let xs: Vec<f64> = dims.iter().map(|&d| (d as f64).ln()).collect();
    let ys: Vec<f64> = times.iter().map(|t| t.ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    cov / var
}

fn scaling() -> Outcome {
    let tol = Tolerances::default();
    let dims = [4usize, 8, 16, 32, 64];
    let mut t1 = Vec::new();
    let mut t3 = Vec::new();
    for &d in &dims {
        let sets: Vec<BallSet> = (0..15).map(|s| random_ball_set(d, s, Conditioning::Overlapping)).collect();
        let reps = (40_000 / (d * d)).max(3);
        let (mut a, mut b) = (Vec::new(), Vec::new());
        for s in &sets {
            let t = Instant::now();
            for _ in 0..reps {
                std::hint::black_box(solve_recipe1(std::hint::black_box(s), &tol).ok());
            }
            a.push(t.elapsed().as_nanos() as f64 / reps as f64);
            let t = Instant::now();
            for _ in 0..reps {
                std::hint::black_box(solve_recipe3(std::hint::black_box(s), &tol).ok());
            }
            b.push(t.elapsed().as_nanos() as f64 / reps as f64);
        }
        t1.push(median(a));
        t3.push(median(b));
    }
    let (e1, e3) = (fit_exponent(&dims, &t1), fit_exponent(&dims, &t3));
    ensure!(((e3 - e1) - 1.0).abs() <= 0.3, "exponents {e1:.2} and {e3:.2}");
    Ok(format!("exponent recipe 1 = {e1:.2}, recipe 3 = {e3:.2}, difference {:.2}", e3 - e1))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 14] = [
        ("tangency residuals, d = 2..5", tangency_suite),
        ("cross-recipe agreement", cross_recipe),
        ("equilateral closed form", equilateral_fixture),
        ("mixed-radius worked set", worked_fixture),
        ("power line collinearity", collinearity),
        ("radius incrementation covariance", increment_covariance),
        ("sub-dimensional solver", subdimensional),
        ("perturbation vs sub-dimensional solver", perturbation_trend),
        ("eight circles of the classical problem", tenth_problem),
        ("imaginary detection", imaginary_detection),
        ("exact incircle", exact_incircle),
        ("large negative roots enclose the generators", enclosure),
        ("no small negative roots after translation", preprocessing),
        ("cost exponents of recipes 1 and 3", scaling),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
