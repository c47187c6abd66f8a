#![allow(dead_code)]

use apollo_core::oracle::residual_of;
use apollo_core::{Ball, BallSet, SignSet, SolveOutcome};
use dashu_base::SquareRoot;
use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

pub fn max_residual(set: &BallSet, out: &SolveOutcome) -> f64 {
    let plus = SignSet::all_positive(set.len());
    out.solutions
        .iter()
        .map(|s| residual_of(set, &s.center, s.radius, &plus).max_abs)
        .fold(0.0, f64::max)
}

/// True when one ball of the set lies inside another.
pub fn has_trivial_ball(set: &BallSet) -> bool {
    let balls = set.balls();
    balls.iter().enumerate().any(|(i, a)| {
        balls
            .iter()
            .enumerate()
            .any(|(j, b)| i != j && dist(&a.center, &b.center) + b.radius <= a.radius)
    })
}

fn random_unit(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 0.2 && n < 1.0 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

/// Random orthonormal frame of R^d (rows).
pub fn random_frame(rng: &mut ChaCha8Rng, d: usize) -> Vec<Vec<f64>> {
    let mut frame: Vec<Vec<f64>> = Vec::with_capacity(d);
    while frame.len() < d {
        let mut v = random_unit(rng, d);
        for q in &frame {
            let p: f64 = v.iter().zip(q).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(q).for_each(|(a, b)| *a -= p * b);
        }
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 0.1 {
            frame.push(v.into_iter().map(|x| x / n).collect());
        }
    }
    frame
}

/// Order-unity set whose centers span a hyperplane, built around a known
/// solution `(x, r)`; the mirror image of `x` is the second solution.
pub struct Coplanar {
    pub set: BallSet,
    pub x: Vec<f64>,
    pub mirror: Vec<f64>,
    pub r: f64,
}

pub fn coplanar_set(d: usize, seed: u64) -> Coplanar {
    let mut rng = rng(seed);
    loop {
        let frame = random_frame(&mut rng, d);
        let normal = &frame[d - 1];
        let origin: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        let in_plane = |rng: &mut ChaCha8Rng| {
            let mut p = origin.clone();
            for e in &frame[..d - 1] {
                let a = rng.random_range(-1.0..1.0);
                p.iter_mut().zip(e).for_each(|(x, v)| *x += a * v);
            }
            p
        };
        let foot = in_plane(&mut rng);
        let h = rng.random_range(0.3..1.0);
        let r = rng.random_range(0.05..0.25);
        let x: Vec<f64> = foot.iter().zip(normal).map(|(f, n)| f + h * n).collect();
        let mirror: Vec<f64> = foot.iter().zip(normal).map(|(f, n)| f - h * n).collect();
        let balls: Vec<Ball> = (0..=d)
            .map(|_| {
                let c = in_plane(&mut rng);
                let ri = dist(&c, &x) - r;
                Ball::new(c, ri)
            })
            .collect();
        // Order-unity spacing: no two centers closer than 0.2.
        let spread = balls.iter().enumerate().all(|(i, a)| {
            balls[..i].iter().all(|b| dist(&a.center, &b.center) >= 0.2)
        });
        if !spread {
            continue;
        }
        if let Ok(set) = BallSet::new(balls) {
            let v = apollo_core::power::difference_matrix(&set);
            // Keep the in-plane configuration well conditioned.
            if apollo_core::smallmat::rank(&v, 1e-3) == d - 1 {
                return Coplanar { set, x, mirror, r };
            }
        }
    }
}

/// A set with one ball inside a container ball and every other ball
/// outside the container. Such sets have no real tangent ball.
pub fn trivial_ball_set(d: usize, seed: u64) -> BallSet {
    let mut rng = rng(seed);
    loop {
        let c: Vec<f64> = (0..d).map(|_| rng.random_range(-3.0..3.0)).collect();
        let big = rng.random_range(2.0..4.0);
        let dir = random_unit(&mut rng, d);
        let off = rng.random_range(0.0..0.6) * big;
        let small = rng.random_range(0.05..0.9) * (big - off);
        let inner: Vec<f64> = c.iter().zip(&dir).map(|(a, u)| a + off * u).collect();
        let mut balls = vec![Ball::new(c.clone(), big), Ball::new(inner, small)];
        while balls.len() < d + 1 {
            let u = random_unit(&mut rng, d);
            let rj = rng.random_range(0.2..2.0);
            let gap = rng.random_range(0.1..4.0);
            let cj: Vec<f64> = c.iter().zip(&u).map(|(a, v)| a + (big + rj + gap) * v).collect();
            balls.push(Ball::new(cj, rj));
        }
        if let Ok(set) = BallSet::new(balls) {
            let v = apollo_core::power::difference_matrix(&set);
            if apollo_core::smallmat::rank(&v, 1e-6) == d {
                return set;
            }
        }
    }
}

/// Integer vectors of integer length in `1..=max_norm`.
pub fn integer_length_vectors(d: usize, max_norm: i64) -> Vec<(Vec<i64>, i64)> {
    let mut out = Vec::new();
    let isqrt = |n: i64| {
        let s = (n as f64).sqrt().round() as i64;
        (s * s == n).then_some(s)
    };
    let m = max_norm;
    match d {
        2 => {
            for a in -m..=m {
                for b in -m..=m {
                    if let Some(n) = isqrt(a * a + b * b) {
                        if (1..=m).contains(&n) {
                            out.push((vec![a, b], n));
                        }
                    }
                }
            }
        }
        3 => {
            for a in -m..=m {
                for b in -m..=m {
                    for c in -m..=m {
                        if let Some(n) = isqrt(a * a + b * b + c * c) {
                            if (1..=m).contains(&n) {
                                out.push((vec![a, b, c], n));
                            }
                        }
                    }
                }
            }
        }
        _ => panic!("only d = 2, 3"),
    }
    out
}

pub type Hp = FBig<HalfEven, 2>;

pub const HP_BITS: usize = 256;

pub fn hp(v: f64) -> Hp {
    Hp::try_from(v).unwrap().with_precision(HP_BITS).value()
}

pub fn hp_sqrt(v: &Hp) -> Hp {
    v.sqrt()
}

pub fn hp_f64(v: &Hp) -> f64 {
    v.to_f64().value()
}

/// Solves a small dense system in 256-bit arithmetic with partial pivoting.
pub fn hp_solve(mut a: Vec<Vec<Hp>>, mut b: Vec<Hp>) -> Option<Vec<Hp>> {
    let n = b.len();
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| hp_f64(&a[i][k]).abs().total_cmp(&hp_f64(&a[j][k]).abs()))?;
        if hp_f64(&a[p][k]) == 0.0 {
            return None;
        }
        a.swap(k, p);
        b.swap(k, p);
        for i in k + 1..n {
            let f = &a[i][k] / &a[k][k];
            for j in k..n {
                let v = &a[k][j] * &f;
                a[i][j] = &a[i][j] - &v;
            }
            let v = &b[k] * &f;
            b[i] = &b[i] - &v;
        }
    }
    let mut x = vec![hp(0.0); n];
    for k in (0..n).rev() {
        let mut s = b[k].clone();
        for j in k + 1..n {
            s = &s - &(&a[k][j] * &x[j]);
        }
        x[k] = &s / &a[k][k];
    }
    Some(x)
}

/// Refines a tangent ball of integer generators with 256-bit Newton steps on
/// `|x - x_i|^2 - (r + r_i)^2 = 0`.
pub fn hp_refine(balls: &[(Vec<i64>, i64)], center: &[f64], radius: f64) -> Option<(Vec<Hp>, Hp)> {
    let d = center.len();
    let gens: Vec<(Vec<Hp>, Hp)> = balls
        .iter()
        .map(|(c, r)| (c.iter().map(|&v| hp(v as f64)).collect(), hp(*r as f64)))
        .collect();
    let mut z: Vec<Hp> = center.iter().map(|&v| hp(v)).chain([hp(radius)]).collect();
    let two = hp(2.0);
    for _ in 0..8 {
        let mut f = Vec::with_capacity(d + 1);
        let mut jac = Vec::with_capacity(d + 1);
        for (c, r) in &gens {
            let diff: Vec<Hp> = (0..d).map(|k| &z[k] - &c[k]).collect();
            let reach = &z[d] + r;
            let mut val = -(&reach * &reach);
            for v in &diff {
                val = &val + &(v * v);
            }
            f.push(val);
            let mut row: Vec<Hp> = diff.iter().map(|v| &two * v).collect();
            row.push(-(&two * &reach));
            jac.push(row);
        }
        let step = hp_solve(jac, f)?;
        for (zk, sk) in z.iter_mut().zip(&step) {
            *zk = &*zk - sk;
        }
    }
    let r = z.pop()?;
    Some((z, r))
}
