//! Diagram-vertex enumeration over all `(d + 1)`-subsets of a generator
//! file.

use apollo_core::{
    dispatch_solve, incircle, tangency_residual, Ball, BallSet, IntBall, SignSet, TangencyClass,
    Tolerances,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::format::{class_name, fmt17, nums, root_name, Num};
use crate::input::GeneratorFile;
use crate::solve::classify;
use crate::{CliError, CliResult};

pub const DEFAULT_MAX_COMBINATIONS: u64 = 1_000_000;

#[derive(Debug, Clone)]
pub struct VertexOptions {
    /// Only subsets whose members are pairwise within this surface gap.
    pub prune: Option<f64>,
    pub min_radius: Option<f64>,
    pub max_combinations: u64,
    /// Decide conflicts with exact predicates on integerized input.
    pub exact: bool,
    pub scale_exponent: Option<i32>,
    pub tolerances: Tolerances,
    pub threads: Option<usize>,
}

impl Default for VertexOptions {
    fn default() -> Self {
        VertexOptions {
            prune: None,
            min_radius: None,
            max_combinations: DEFAULT_MAX_COMBINATIONS,
            exact: false,
            scale_exponent: None,
            tolerances: Tolerances::default(),
            threads: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VertexRecord {
    pub generator_ids: Vec<String>,
    pub root: &'static str,
    pub center: Vec<Num>,
    pub radius: Num,
    pub klass: &'static str,
    pub twin_id: Option<u64>,
    pub residual: Num,
}

#[derive(Debug, Serialize)]
pub struct VertexList {
    pub dimension: usize,
    pub generators: usize,
    pub subsets: usize,
    /// Subsets without a tangent ball: rank below `d - 1` or singular.
    pub skipped: usize,
    pub vertices: Vec<VertexRecord>,
}

/// `n choose k`, saturating.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return u64::MAX;
        }
    }
    acc as u64
}

fn gap(a: &Ball, b: &Ball) -> f64 {
    let d = a.center.iter().zip(&b.center).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
    d - a.radius - b.radius
}

/// Index subsets of size `k` in lexicographic order, restricted to pairwise
/// neighbors when `within` is set. Fails once more than `limit` are found.
fn subsets(balls: &[Ball], k: usize, within: Option<f64>, limit: u64) -> CliResult<Vec<Vec<usize>>> {
    let n = balls.len();
    if within.is_none() && binomial(n as u64, k as u64) > limit {
        return Err(guard(binomial(n as u64, k as u64), limit));
    }
    let near = |i: usize, j: usize| within.is_none_or(|r| gap(&balls[i], &balls[j]) <= r);
    let mut out = Vec::new();
    let mut stack: Vec<usize> = Vec::with_capacity(k);
    fn walk(
        start: usize,
        n: usize,
        k: usize,
        stack: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        near: &dyn Fn(usize, usize) -> bool,
        limit: u64,
    ) -> bool {
        if stack.len() == k {
            out.push(stack.clone());
            return out.len() as u64 <= limit;
        }
        for i in start..n {
            if n - i < k - stack.len() {
                break;
            }
            if stack.iter().all(|&j| near(j, i)) {
                stack.push(i);
                let ok = walk(i + 1, n, k, stack, out, near, limit);
                stack.pop();
                if !ok {
                    return false;
                }
            }
        }
        true
    }
    if !walk(0, n, k, &mut stack, &mut out, &near, limit) {
        return Err(guard(out.len() as u64, limit));
    }
    Ok(out)
}

fn guard(count: u64, limit: u64) -> CliError {
    CliError::Guard(format!(
        "{count}{} subsets exceed --max-combinations {limit}",
        if count > limit { "+" } else { "" }
    ))
}

/// Integer generators for the exact conflict test.
fn integerize(file: &GeneratorFile, balls: &[Ball], opts: &VertexOptions) -> CliResult<Option<Vec<IntBall>>> {
    if !opts.exact {
        return Ok(None);
    }
    let e = opts.scale_exponent.or(file.scale_exponent).unwrap_or(0);
    balls
        .iter()
        .zip(&file.balls)
        .map(|(b, g)| {
            IntBall::from_scaled(b, e).ok_or_else(|| {
                CliError::Validation(format!("ball '{}' is not integral at scale exponent {e}", g.id))
            })
        })
        .collect::<CliResult<Vec<_>>>()
        .map(Some)
}

struct Found {
    members: Vec<usize>,
    record: VertexRecord,
}

/// Solves one subset; `None` when it has no tangent ball at all.
fn solve_subset(
    ordinal: usize,
    members: &[usize],
    balls: &[Ball],
    ints: Option<&[IntBall]>,
    shift: f64,
    opts: &VertexOptions,
) -> CliResult<Option<Vec<Found>>> {
    let tol = &opts.tolerances;
    let sub: Vec<Ball> = members.iter().map(|&i| balls[i].clone()).collect();
    let Ok(set) = BallSet::new(sub) else {
        return Ok(None);
    };
    let Ok(out) = dispatch_solve(&set, tol) else {
        return Ok(None);
    };
    let out = classify(out, &set, tol, ordinal as u64)?;
    let scale = set.scale();
    let plus = SignSet::all_positive(set.len());
    let mut found = Vec::new();
    for s in &out.solutions {
        let class = s.class.expect("classified");
        if class == TangencyClass::LargeNegative {
            continue;
        }
        let residual = tangency_residual(&set, s, &plus).max_abs;
        if residual > tol.residual_rel * scale {
            continue;
        }
        let mut conflict = false;
        for q in (0..balls.len()).filter(|q| !members.contains(q)) {
            conflict = match ints {
                Some(ints) => {
                    let tuple: Vec<IntBall> = members.iter().map(|&i| ints[i].clone()).collect();
                    match incircle(&tuple, s.root, &ints[q]) {
                        Ok(c) => c,
                        // Not real under exact arithmetic: no vertex.
                        Err(apollo_core::Error::ImaginaryRoot) => true,
                        Err(e) => return Err(e.into()),
                    }
                }
                None => {
                    let b = &balls[q];
                    let dist = b.center.iter().zip(&s.center).map(|(a, c)| (a - c) * (a - c)).sum::<f64>().sqrt();
                    dist - (b.radius + s.radius) < -tol.residual_rel * scale
                }
            };
            if conflict {
                break;
            }
        }
        if conflict {
            continue;
        }
        let radius = s.radius + shift;
        if opts.min_radius.is_some_and(|m| radius < m) {
            continue;
        }
        found.push(Found {
            members: members.to_vec(),
            record: VertexRecord {
                generator_ids: Vec::new(),
                root: root_name(s.root),
                center: nums(&s.center),
                radius: Num(radius),
                klass: class_name(class),
                twin_id: s.twin_id,
                residual: Num(residual),
            },
        });
    }
    Ok(Some(found))
}

fn pool(threads: Option<usize>) -> CliResult<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        b = b.num_threads(n);
    }
    b.build().map_err(|e| CliError::Validation(format!("thread pool: {e}")))
}

/// Thread cap from `APOLLO_THREADS`, if set.
pub fn threads_from_env() -> CliResult<Option<usize>> {
    match std::env::var("APOLLO_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Validation(format!("APOLLO_THREADS must be a positive integer, got '{v}'"))),
        },
    }
}

/// All conflict-free, residual-certified vertices, in subset order then root
/// order. Radii are solved on the set shifted to non-negative radii and
/// reported for the input radii.
pub fn enumerate(file: &GeneratorFile, opts: &VertexOptions) -> CliResult<VertexList> {
    let d = file.dimension;
    let n = file.balls.len();
    if n < d + 1 {
        return Err(CliError::Validation(format!("need at least {} balls, got {n}", d + 1)));
    }
    let original = file.balls();
    let ints = integerize(file, &original, opts)?;
    let shift = original.iter().map(|b| b.radius).fold(0.0_f64, |m, r| m.max(-r));
    let balls: Vec<Ball> = original.iter().map(|b| Ball::new(b.center.clone(), b.radius + shift)).collect();
    let tuples = subsets(&balls, d + 1, opts.prune, opts.max_combinations)?;

    let solved: Vec<CliResult<Option<Vec<Found>>>> = pool(opts.threads)?.install(|| {
        tuples
            .par_iter()
            .enumerate()
            .map(|(k, m)| solve_subset(k, m, &balls, ints.as_deref(), shift, opts))
            .collect()
    });
    let ids = file.ids();
    let mut vertices = Vec::new();
    let mut skipped = 0;
    for r in solved {
        match r? {
            None => skipped += 1,
            Some(found) => vertices.extend(found.into_iter().map(|f| {
                let mut rec = f.record;
                rec.generator_ids = f.members.iter().map(|&i| ids[i].clone()).collect();
                rec
            })),
        }
    }
    Ok(VertexList {
        dimension: d,
        generators: n,
        subsets: tuples.len(),
        skipped,
        vertices,
    })
}

pub fn to_csv(list: &VertexList) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["generator_ids".to_string(), "root".to_string()];
    header.extend((1..=list.dimension).map(|k| format!("x{k}")));
    header.extend(["radius", "klass", "twin_id", "residual"].map(String::from));
    w.write_record(&header).expect("in-memory write");
    for v in &list.vertices {
        let mut row = vec![v.generator_ids.join(";"), v.root.to_string()];
        row.extend(v.center.iter().map(|c| fmt17(c.0)));
        row.push(fmt17(v.radius.0));
        row.push(v.klass.to_string());
        row.push(v.twin_id.map(|t| t.to_string()).unwrap_or_default());
        row.push(fmt17(v.residual.0));
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}
