//! Solver for generator sets whose centers span only a hyperplane
//! (`rank V = d - 1`), where the power vertex does not exist.
//!
//! With the smallest ball as reference, write `u_i = x_i - x_ref` and
//! `w_i = r_i - r_ref`. A solution is `x = x_ref + c + h n`, where `c` lies in
//! the span of the `u_i` (expanded in an orthonormal basis `q_j` of that
//! span), `n` is the unit normal of the span and `w = r + r_ref`. Tangency to ball `i` minus tangency to the reference is
//! linear in `(c, w)`:
//!
//! ```text
//! u_i . c + w_i w = (|u_i|^2 - w_i^2) / 2
//! ```
//!
//! and tangency to the reference gives `h^2 = w^2 - |c|^2`. Both solutions
//! share one radius and mirror each other through the hyperplane.

use crate::apollonius::{ApolloniusSolution, Recipe, RootLabel, SolveOutcome, SpecialCase};
use crate::error::{Error, Result};
use crate::geometry::{BallSet, Tolerances};
use crate::power::{axpy, difference_matrix, dot, norm, sub};
use crate::smallmat::{cofactor_normal_subspace, rank, Factorization, Matrix};

#[derive(Debug, Clone, PartialEq)]
pub struct SubdimSolution {
    pub x_plus: Vec<f64>,
    pub x_minus: Vec<f64>,
    /// Shared radius of both solutions.
    pub r: f64,
    /// In-subspace offset from the reference center.
    pub c: Vec<f64>,
    /// Radius measured from the reference ball, `r + r_ref`.
    pub w: f64,
    /// Out-of-subspace distance (non-negative).
    pub h: f64,
    pub n_hat: Vec<f64>,
    /// Discriminant `w^2 - |c|^2`.
    pub discriminant: f64,
    /// Index of the reference (smallest) ball in the input set.
    pub reference: usize,
}

impl SubdimSolution {
    pub fn is_double(&self) -> bool {
        self.h == 0.0
    }
}

/// Orthonormal basis of the span of `rows` by pivoted Gram-Schmidt: each
/// step takes the row with the largest component orthogonal to the basis so
/// far. Working in this basis keeps `U` well conditioned when some centers
/// nearly coincide.
fn pivoted_basis(rows: &[Vec<f64>], k: usize) -> Vec<Vec<f64>> {
    let mut ortho = Vec::with_capacity(k);
    let mut chosen = Vec::with_capacity(k);
    let mut residual: Vec<Vec<f64>> = rows.to_vec();
    for _ in 0..k {
        let mut best = None;
        let mut best_norm = -1.0;
        for (i, r) in residual.iter().enumerate() {
            if chosen.contains(&i) {
                continue;
            }
            let n = norm(r);
            if n > best_norm {
                best_norm = n;
                best = Some(i);
            }
        }
        let i = best.expect("enough rows");
        chosen.push(i);
        if best_norm == 0.0 {
            // Fewer than `k` independent rows; the zero vector makes the
            // normal vanish and the caller reports the rank.
            ortho.push(vec![0.0; rows[0].len()]);
            continue;
        }
        let q: Vec<f64> = residual[i].iter().map(|v| v / best_norm).collect();
        for r in residual.iter_mut() {
            let proj = dot(r, &q);
            *r = axpy(r, -proj, &q);
        }
        ortho.push(q);
    }
    ortho
}

/// Orients `n` so its first significant component is positive.
fn orient_first_positive(n: &mut [f64]) {
    let limit = 1e-12 * norm(n);
    if let Some(first) = n.iter().find(|v| v.abs() > limit) {
        if *first < 0.0 {
            n.iter_mut().for_each(|v| *v = -*v);
        }
    }
}

/// Core of the sub-dimensional solve, assuming `rank V >= d - 1`.
/// Returns `None` for an imaginary configuration.
fn solve_core(set: &BallSet, tol: &Tolerances) -> Result<(f64, Option<SubdimSolution>)> {
    let d = set.dim();
    let k = set.smallest_radius_index();
    let reference = set.ball(k);
    let others: Vec<usize> = (0..set.len()).filter(|&i| i != k).collect();
    let u: Vec<Vec<f64>> = others
        .iter()
        .map(|&i| sub(&set.ball(i).center, &reference.center))
        .collect();
    let w: Vec<f64> = others
        .iter()
        .map(|&i| set.ball(i).radius - reference.radius)
        .collect();
    if w.iter().all(|&v| v == 0.0) {
        return Err(Error::USingular);
    }

    let basis: Vec<Vec<f64>> = pivoted_basis(&u, d - 1);
    let mut n_hat = cofactor_normal_subspace(&basis);
    let n_len = norm(&n_hat);
    if n_len == 0.0 {
        return Err(Error::RankTooLow {
            rank: rank(&difference_matrix(set), tol.singular_rel),
            dimension: d,
        });
    }
    n_hat.iter_mut().for_each(|v| *v /= n_len);
    orient_first_positive(&mut n_hat);

    let mut data = Vec::with_capacity(d * d);
    for i in 0..d {
        for b in &basis {
            data.push(dot(&u[i], b));
        }
        data.push(w[i]);
    }
    let big_u = Matrix::new(d, d, data)?;
    let t: Vec<f64> = (0..d).map(|i| 0.5 * (dot(&u[i], &u[i]) - w[i] * w[i])).collect();
    let g = Factorization::new(&big_u, tol.singular_rel)
        .map_err(|_| Error::USingular)?
        .solve_vec(&t)?;

    let mut c = vec![0.0; d];
    for (gj, b) in g.iter().zip(&basis) {
        c = axpy(&c, *gj, b);
    }
    let w_ref = g[d - 1];
    let disc = w_ref * w_ref - dot(&c, &c);
    let scale = set.scale();
    if disc < -tol.singular_rel * scale * scale {
        return Ok((disc, None));
    }
    let h = if disc <= 0.0 { 0.0 } else { disc.sqrt() };
    let base = axpy(&reference.center, 1.0, &c);
    Ok((
        disc,
        Some(SubdimSolution {
            x_plus: axpy(&base, h, &n_hat),
            x_minus: axpy(&base, -h, &n_hat),
            r: w_ref - reference.radius,
            c,
            w: w_ref,
            h,
            n_hat,
            discriminant: disc,
            reference: k,
        }),
    ))
}

fn check_rank(set: &BallSet, tol: &Tolerances) -> Result<()> {
    let d = set.dim();
    let r = rank(&difference_matrix(set), tol.singular_rel);
    if r == d {
        Err(Error::NotSubDimensional)
    } else if r + 1 < d {
        Err(Error::RankTooLow { rank: r, dimension: d })
    } else {
        Ok(())
    }
}

/// Mirror-pair solution of a rank `d - 1` set, or `None` when imaginary.
pub fn subdim_solution(set: &BallSet, tol: &Tolerances) -> Result<Option<SubdimSolution>> {
    check_rank(set, tol)?;
    Ok(solve_core(set, tol)?.1)
}

fn outcome_from(disc: f64, sol: Option<SubdimSolution>) -> SolveOutcome {
    let solutions = match sol {
        None => Vec::new(),
        Some(s) if s.is_double() => vec![mk(s.x_plus, s.r, RootLabel::Single)],
        Some(s) => vec![
            mk(s.x_plus, s.r, RootLabel::Plus),
            mk(s.x_minus, s.r, RootLabel::Minus),
        ],
    };
    SolveOutcome {
        special_case: if solutions.is_empty() {
            SpecialCase::Imaginary
        } else {
            SpecialCase::Generic
        },
        solutions,
        discriminant: disc,
        recipe: Recipe::SubDimensional,
    }
}

fn mk(center: Vec<f64>, radius: f64, root: RootLabel) -> ApolloniusSolution {
    ApolloniusSolution {
        center,
        radius,
        root,
        class: None,
        diagram_relevant: true,
        twin_id: None,
    }
}

/// Solves a rank `d - 1` set. The two solutions carry the same radius; a
/// grazing configuration yields one solution inside the hyperplane.
pub fn solve_subdimensional(set: &BallSet, tol: &Tolerances) -> Result<SolveOutcome> {
    check_rank(set, tol)?;
    let (disc, sol) = solve_core(set, tol)?;
    Ok(outcome_from(disc, sol))
}

/// Gradient route for full-rank sets, sub-dimensional solver for rank
/// `d - 1`, [`Error::RankTooLow`] below that.
pub fn dispatch_solve(set: &BallSet, tol: &Tolerances) -> Result<SolveOutcome> {
    match crate::apollonius::solve_recipe1(set, tol) {
        Err(Error::SubDimensional { rank, dimension }) => {
            if rank + 1 < dimension {
                return Err(Error::RankTooLow { rank, dimension });
            }
            let (disc, sol) = solve_core(set, tol)?;
            Ok(outcome_from(disc, sol))
        }
        other => other,
    }
}
