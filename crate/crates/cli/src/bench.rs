//! Timing table for the three full-rank recipes.

use std::hint::black_box;
use std::time::Instant;

use apollo_core::{
    random_ball_set, solve_recipe1, solve_recipe2, solve_recipe3, tangency_residual, BallSet,
    Conditioning, Result, SignSet, SolveOutcome, Tolerances,
};

use crate::format::fmt17;

pub const HEADER: &str = "d,recipe,ns_per_solve,residual_p50,residual_p99";

type Solver = fn(&BallSet, &Tolerances) -> Result<SolveOutcome>;

const RECIPES: [(u8, Solver); 3] = [(1, solve_recipe1), (2, solve_recipe2), (3, solve_recipe3)];

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub d: usize,
    pub recipe: u8,
    pub ns_per_solve: f64,
    pub residual_p50: f64,
    pub residual_p99: f64,
}

/// Nearest-rank percentile of sorted data.
fn percentile(sorted: &[f64], p: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let rank = ((p / 100.0) * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = points.iter().map(|&(x, y)| (x.ln(), y.ln())).unzip();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Times each recipe over `trials` random well-separated sets per
/// dimension. Residuals are relative to each set's scale.
pub fn measure(dims: &[usize], trials: usize, seed: u64) -> Vec<Row> {
    let tol = Tolerances::default();
    let mut rows = Vec::new();
    if trials == 0 {
        return rows;
    }
    for &d in dims {
        let sets: Vec<BallSet> = (0..trials as u64)
            .map(|t| random_ball_set(d, seed.wrapping_add(t), Conditioning::WellSeparated))
            .collect();
        let plus = SignSet::all_positive(d + 1);
        for (number, solve) in RECIPES {
            let start = Instant::now();
            let outs: Vec<Option<SolveOutcome>> =
                sets.iter().map(|s| black_box(solve(black_box(s), &tol)).ok()).collect();
            let elapsed = start.elapsed().as_nanos() as f64;
            let mut residuals: Vec<f64> = sets
                .iter()
                .zip(&outs)
                .filter_map(|(set, out)| {
                    let out = out.as_ref()?;
                    let worst = out
                        .solutions
                        .iter()
                        .map(|s| tangency_residual(set, s, &plus).max_abs)
                        .fold(0.0, f64::max);
                    Some(worst / set.scale())
                })
                .collect();
            residuals.sort_by(f64::total_cmp);
            rows.push(Row {
                d,
                recipe: number,
                ns_per_solve: elapsed / trials as f64,
                residual_p50: percentile(&residuals, 50.0),
                residual_p99: percentile(&residuals, 99.0),
            });
        }
    }
    rows
}

/// Cost exponent per recipe, fitted over the measured dimensions.
pub fn exponents(rows: &[Row]) -> Vec<(u8, f64)> {
    RECIPES
        .iter()
        .filter_map(|&(number, _)| {
            let pts: Vec<(f64, f64)> = rows
                .iter()
                .filter(|r| r.recipe == number)
                .map(|r| (r.d as f64, r.ns_per_solve))
                .collect();
            log_slope(&pts).map(|s| (number, s))
        })
        .collect()
}

/// CSV table followed by `# exponent,<recipe>,<value>` lines.
pub fn to_csv(rows: &[Row]) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.d,
            r.recipe,
            fmt17(r.ns_per_solve),
            fmt17(r.residual_p50),
            fmt17(r.residual_p99)
        ));
    }
    for (number, e) in exponents(rows) {
        out.push_str(&format!("# exponent,{number},{}\n", fmt17(e)));
    }
    out
}
