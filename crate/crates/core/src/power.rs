//! Power-diagram quantities of a ball set: power distance, power vertex,
//! power radius, power gradient and the Voronoi special case.
//!
//! The difference system uses the last ball as reference: row `i` of `V` is
//! `x_i - x_{d+1}`. The right-hand side is assembled relative to
//! `x_{d+1}`, i.e. we solve `V q = t` with
//! `t_i = (|x_i - x_{d+1}|^2 - r_i^2 + r_{d+1}^2) / 2` and take
//! `p = x_{d+1} + q`, which is the same vertex as the absolute form but keeps
//! large coordinate offsets out of the subtraction.

use crate::error::{Error, Result};
use crate::geometry::{Ball, BallSet, Tolerances};
use crate::smallmat::{rank, Factorization, Matrix};

/// Squared tangent length `|x_i - point|^2 - r_i^2`; negative inside the ball.
pub fn power_distance(b: &Ball, point: &[f64]) -> f64 {
    dist2(&b.center, point) - b.radius * b.radius
}

pub(crate) fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `a + s * b`
pub(crate) fn axpy(a: &[f64], s: f64, b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

/// Vertex-level power quantities of a full-rank ball set.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSolution {
    /// Power vertex: equal power distance to every ball.
    pub p: Vec<f64>,
    /// Power radius squared; negative when `p` lies inside every ball.
    pub rp2: f64,
    /// Power gradient: `p` moves to `p + eps * ptilde` when every radius
    /// grows by `eps`.
    pub ptilde: Vec<f64>,
    pub det_v: f64,
    pub rank_v: usize,
    /// Difference matrix with rows `x_i - x_{d+1}`.
    pub v: Matrix,
}

/// Difference matrix `V` with rows `x_i - x_{d+1}`.
pub fn difference_matrix(set: &BallSet) -> Matrix {
    let d = set.dim();
    let reference = &set.ball(d).center;
    let rows: Vec<Vec<f64>> = set.balls()[..d]
        .iter()
        .map(|b| sub(&b.center, reference))
        .collect();
    Matrix::from_rows(&rows).expect("d rows of length d")
}

/// Factored difference system shared by the recipes.
#[derive(Debug, Clone)]
pub(crate) struct PowerSystem<'a> {
    pub set: &'a BallSet,
    pub v: Matrix,
    pub fact: Factorization,
}

impl<'a> PowerSystem<'a> {
    pub fn new(set: &'a BallSet, tol: &Tolerances) -> Result<Self> {
        let v = difference_matrix(set);
        match Factorization::new(&v, tol.singular_rel) {
            Ok(fact) => Ok(PowerSystem { set, v, fact }),
            Err(Error::Singular) => Err(Error::SubDimensional {
                rank: rank(&v, tol.singular_rel),
                dimension: set.dim(),
            }),
            Err(e) => Err(e),
        }
    }

    fn reference(&self) -> &Ball {
        self.set.ball(self.set.dim())
    }

    /// Relative right-hand side for the given radii.
    pub fn rhs_for_radii(&self, radii: &[f64]) -> Vec<f64> {
        let d = self.set.dim();
        let rk = radii[d];
        (0..d)
            .map(|i| {
                let u2 = dist2(&self.set.ball(i).center, &self.reference().center);
                0.5 * (u2 - radii[i] * radii[i] + rk * rk)
            })
            .collect()
    }

    /// Column of radius differences `r_i - r_{d+1}`.
    pub fn radius_column(&self, radii: &[f64]) -> Vec<f64> {
        let d = self.set.dim();
        (0..d).map(|i| radii[i] - radii[d]).collect()
    }

    /// Solves `V X = [columns]` in one call.
    pub fn solve_columns(&self, columns: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        let rhs = Matrix::from_columns(columns)?;
        let x = self.fact.solve(&rhs)?;
        Ok((0..columns.len()).map(|j| x.column(j)).collect())
    }

    /// Maps a relative solution `q` back to `p = x_{d+1} + q`.
    pub fn absolute(&self, q: &[f64]) -> Vec<f64> {
        axpy(&self.reference().center, 1.0, q)
    }

    /// Power vertex and power gradient for the set's own radii.
    pub fn vertex_and_gradient(&self, radii: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        let t = self.rhs_for_radii(radii);
        let minus_r: Vec<f64> = self.radius_column(radii).iter().map(|v| -v).collect();
        let mut sol = self.solve_columns(&[t, minus_r])?;
        let ptilde = sol.pop().expect("two columns");
        let q = sol.pop().expect("two columns");
        Ok((self.absolute(&q), ptilde))
    }

    /// Power radius squared at `p`, measured from the largest ball.
    pub fn power_radius2(&self, p: &[f64]) -> f64 {
        power_distance(self.set.ball(self.set.largest_radius_index()), p)
    }
}

/// Power vertex, power radius and power gradient of `set`.
///
/// `p` and `ptilde` come out of one factorization of `V`. Fails with
/// [`Error::SubDimensional`] when `V` is numerically singular.
pub fn power_vertex(set: &BallSet, tol: &Tolerances) -> Result<PowerSolution> {
    let sys = PowerSystem::new(set, tol)?;
    let radii: Vec<f64> = set.radii().collect();
    let (p, ptilde) = sys.vertex_and_gradient(&radii)?;
    let rp2 = sys.power_radius2(&p);
    Ok(PowerSolution {
        rp2,
        p,
        ptilde,
        det_v: sys.fact.determinant(),
        rank_v: set.dim(),
        v: sys.v,
    })
}

/// Voronoi vertex of the centers (radii ignored) and its squared radius.
pub fn voronoi_vertex(set: &BallSet, tol: &Tolerances) -> Result<(Vec<f64>, f64)> {
    let points = set.map_radii(|_, _| 0.0);
    let sol = power_vertex(&points, tol)?;
    Ok((sol.p, sol.rp2))
}

/// Power vertex of the set with every radius increased by `r_eps`, obtained
/// by walking the power line: `p' = p + r_eps * ptilde`.
pub fn incremented_power_vertex(set: &BallSet, r_eps: f64, tol: &Tolerances) -> Result<Vec<f64>> {
    let sol = power_vertex(set, tol)?;
    Ok(axpy(&sol.p, r_eps, &sol.ptilde))
}
