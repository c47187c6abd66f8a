//! Exact-sign predicates over integer input.
//!
//! The power vertex and the power gradient have rational components
//! (Cramer's rule), so a solution radius is `(B +- sqrt(D)) / A` with rational
//! `A`, `B`, `D`. The conflict value of a query ball therefore reduces to the
//! sign of `a + b sqrt(c)` with rational `a`, `b`, `c`, which is decided by
//! comparing `a^2` with `b^2 c`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, Zero};

use crate::apollonius::RootLabel;
use crate::error::{Error, Result};
use crate::geometry::Ball;

pub type RationalScalar = BigRational;

/// `a + b sqrt(c)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadicalExpr {
    pub a: RationalScalar,
    pub b: RationalScalar,
    pub c: RationalScalar,
}

fn sign_of<T: Signed>(v: &T) -> i8 {
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

fn rat(v: &BigInt) -> BigRational {
    BigRational::from_integer(v.clone())
}

fn check_square(m: &[Vec<BigInt>]) -> Result<usize> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::Shape("integer matrix must be square"));
    }
    Ok(n)
}

/// Fraction-free Gaussian elimination; every intermediate is an exact minor.
fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        return BigInt::one();
    }
    sign * &a[n - 1][n - 1]
}

pub fn determinant(m: &[Vec<BigInt>]) -> Result<BigInt> {
    check_square(m)?;
    Ok(bareiss_det(m.to_vec()))
}

/// Exact sign of the determinant: -1, 0 or +1.
pub fn det_sign(m: &[Vec<BigInt>]) -> Result<i8> {
    Ok(sign_of(&determinant(m)?))
}

/// Component `i` of the solution of `V p = t`: `det(V_i) / det(V)` with
/// column `i` of `V` replaced by `t`.
pub fn cramer_component(v: &[Vec<BigInt>], t: &[BigInt], i: usize) -> Result<RationalScalar> {
    let n = check_square(v)?;
    if t.len() != n || i >= n {
        return Err(Error::Shape("right-hand side does not match the matrix"));
    }
    let det = bareiss_det(v.to_vec());
    if det.is_zero() {
        return Err(Error::SingularExact);
    }
    let mut vi = v.to_vec();
    for (row, ti) in vi.iter_mut().zip(t) {
        row[i] = ti.clone();
    }
    Ok(BigRational::new(bareiss_det(vi), det))
}

fn cramer_all(v: &[Vec<BigInt>], t: &[BigInt]) -> Result<Vec<BigRational>> {
    (0..v.len()).map(|i| cramer_component(v, t, i)).collect()
}

/// Exact sign of `a + b sqrt(c)`.
pub fn radical_sign(e: &RadicalExpr) -> Result<i8> {
    if e.c.is_negative() {
        return Err(Error::NegativeRadicand);
    }
    let sa = sign_of(&e.a);
    let sb = if e.c.is_zero() { 0 } else { sign_of(&e.b) };
    if sb == 0 || sa == sb {
        return Ok(if sa == 0 { sb } else { sa });
    }
    if sa == 0 {
        return Ok(sb);
    }
    Ok(match (&e.a * &e.a).cmp(&(&e.b * &e.b * &e.c)) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => 0,
    })
}

/// Ball with integer center and radius.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntBall {
    pub center: Vec<BigInt>,
    pub radius: BigInt,
}

impl IntBall {
    pub fn new(center: Vec<BigInt>, radius: BigInt) -> Self {
        IntBall { center, radius }
    }

    pub fn from_i64(center: &[i64], radius: i64) -> Self {
        IntBall {
            center: center.iter().map(|&c| BigInt::from(c)).collect(),
            radius: BigInt::from(radius),
        }
    }

    /// Multiplies every value by `10^scale_exponent`; `None` unless every
    /// scaled value is an integer (within 1e-6).
    pub fn from_scaled(ball: &Ball, scale_exponent: i32) -> Option<IntBall> {
        let factor = 10f64.powi(scale_exponent);
        let conv = |v: f64| {
            let s = v * factor;
            let r = s.round();
            if (s - r).abs() <= 1e-6 {
                BigInt::from_f64(r)
            } else {
                None
            }
        };
        Some(IntBall {
            center: ball.center.iter().map(|&c| conv(c)).collect::<Option<_>>()?,
            radius: conv(ball.radius)?,
        })
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }
}

/// Exact signs making up the conflict test of a query ball against one
/// solution ball `(x, r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConflictSigns {
    /// Sign of `|x_q - x|^2 - (r_q + r)^2`.
    pub separation: i8,
    /// Sign of `r_q + r`.
    pub reach: i8,
}

impl ConflictSigns {
    /// The query overlaps the solution ball in additive distance:
    /// `|x_q - x| < r_q + r`.
    pub fn conflict(&self) -> bool {
        self.separation < 0 && self.reach > 0
    }
}

fn dot_rat(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sub_rat(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn rat_vec(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().map(rat).collect()
}

fn check_balls(balls: &[IntBall], query: &IntBall) -> Result<usize> {
    let d = query.dim();
    if balls.len() != d + 1 {
        return Err(Error::WrongCount {
            dimension: d,
            expected: d + 1,
            got: balls.len(),
        });
    }
    for (index, b) in balls.iter().enumerate() {
        if b.dim() != d {
            return Err(Error::DimensionMismatch {
                index,
                expected: d,
                got: b.dim(),
            });
        }
    }
    Ok(d)
}

/// Sign multiplier of the square root for the requested root.
fn root_sign(root: RootLabel) -> i32 {
    match root {
        RootLabel::Minus => -1,
        RootLabel::Plus | RootLabel::Single => 1,
    }
}

/// Exact conflict signs of `query` against the selected solution ball of
/// `balls` (`d + 1` integer balls). Rank-deficient sets use the mirror-pair
/// closed form, where `Plus` is the solution on the positive side of the
/// oriented hyperplane normal.
pub fn incircle_signs(balls: &[IntBall], root: RootLabel, query: &IntBall) -> Result<ConflictSigns> {
    let d = check_balls(balls, query)?;
    let last = &balls[d];
    let v: Vec<Vec<BigInt>> = balls[..d]
        .iter()
        .map(|b| b.center.iter().zip(&last.center).map(|(a, c)| a - c).collect())
        .collect();
    if det_sign(&v)? == 0 {
        subdim_signs(balls, root, query)
    } else {
        full_rank_signs(balls, &v, root, query)
    }
}

/// True when `query` conflicts with the selected solution ball.
pub fn incircle(balls: &[IntBall], root: RootLabel, query: &IntBall) -> Result<bool> {
    Ok(incircle_signs(balls, root, query)?.conflict())
}

fn full_rank_signs(
    balls: &[IntBall],
    v: &[Vec<BigInt>],
    root: RootLabel,
    query: &IntBall,
) -> Result<ConflictSigns> {
    let d = v.len();
    let last = &balls[d];
    let norm2 = |x: &[BigInt]| x.iter().map(|c| c * c).sum::<BigInt>();
    // Doubled right-hand side keeps the system integral.
    let t2: Vec<BigInt> = balls[..d]
        .iter()
        .map(|b| {
            norm2(&b.center) - norm2(&last.center) - &b.radius * &b.radius
                + &last.radius * &last.radius
        })
        .collect();
    let two = BigRational::from_integer(BigInt::from(2));
    let p: Vec<BigRational> = cramer_all(v, &t2)?.into_iter().map(|x| x / &two).collect();
    let grad_rhs: Vec<BigInt> = balls[..d].iter().map(|b| &last.radius - &b.radius).collect();
    let ptilde = cramer_all(v, &grad_rhs)?;

    let x0 = rat_vec(&balls[0].center);
    let r0 = rat(&balls[0].radius);
    let v0 = sub_rat(&x0, &p);
    let rp2 = dot_rat(&v0, &v0) - &r0 * &r0;
    let a = dot_rat(&ptilde, &ptilde) - BigRational::one();
    let b = &r0 + dot_rat(&v0, &ptilde);

    let xq = rat_vec(&query.center);
    let rq = rat(&query.radius);
    let vq = sub_rat(&xq, &p);
    let c0 = dot_rat(&vq, &vq) - &rq * &rq;
    let c1 = -(dot_rat(&vq, &ptilde) + &rq) * &two;
    // On the solution ball `A r^2 = 2 B r - r_p^2`, so the conflict value is
    // linear in r.
    let lin = &c1 + &b * &two;
    let base = &c0 - &rp2;

    if a.is_zero() {
        if b.is_zero() {
            return Err(Error::ImaginaryRoot);
        }
        let r = &rp2 / (&b * &two);
        let f = &base + &lin * &r;
        return Ok(ConflictSigns {
            separation: sign_of(&f),
            reach: sign_of(&(&rq + &r)),
        });
    }
    let disc = &b * &b - &a * &rp2;
    if disc.is_negative() {
        return Err(Error::ImaginaryRoot);
    }
    // The larger root takes the square root with the sign of A.
    let s = BigRational::from_integer(BigInt::from(root_sign(root) * i32::from(sign_of(&a))));
    let separation = radical_sign(&RadicalExpr {
        a: &base + &lin * &b / &a,
        b: &s * &lin / &a,
        c: disc.clone(),
    })?;
    let reach = radical_sign(&RadicalExpr {
        a: &rq + &b / &a,
        b: &s / &a,
        c: disc,
    })?;
    Ok(ConflictSigns { separation, reach })
}

/// Integer normal `(-1)^j M_j` of `d - 1` vectors in Z^d, oriented so the
/// first nonzero component is positive.
fn integer_subspace_normal(rows: &[Vec<BigInt>]) -> Vec<BigInt> {
    let d = rows.len() + 1;
    let mut n: Vec<BigInt> = (0..d)
        .map(|j| {
            let minor: Vec<Vec<BigInt>> = rows
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|&(k, _)| k != j)
                        .map(|(_, v)| v.clone())
                        .collect()
                })
                .collect();
            let m = bareiss_det(minor);
            if j % 2 == 0 {
                m
            } else {
                -m
            }
        })
        .collect();
    if n.iter().find(|v| !v.is_zero()).is_some_and(|v| v.is_negative()) {
        n.iter_mut().for_each(|v| *v = -v.clone());
    }
    n
}

/// All `k`-subsets of `0..n` in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn subdim_signs(balls: &[IntBall], root: RootLabel, query: &IntBall) -> Result<ConflictSigns> {
    let d = query.dim();
    let mut k = 0;
    for (i, b) in balls.iter().enumerate() {
        if b.radius < balls[k].radius {
            k = i;
        }
    }
    let reference = &balls[k];
    let others: Vec<&IntBall> = balls.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, b)| b).collect();
    let u: Vec<Vec<BigInt>> = others
        .iter()
        .map(|b| b.center.iter().zip(&reference.center).map(|(a, c)| a - c).collect())
        .collect();
    let w: Vec<BigInt> = others.iter().map(|b| &b.radius - &reference.radius).collect();
    if w.iter().all(Zero::is_zero) {
        return Err(Error::USingular);
    }

    let (basis, normal) = subsets(d, d - 1)
        .into_iter()
        .find_map(|idx| {
            let rows: Vec<Vec<BigInt>> = idx.iter().map(|&i| u[i].clone()).collect();
            let n = integer_subspace_normal(&rows);
            n.iter().any(|v| !v.is_zero()).then_some((rows, n))
        })
        .ok_or(Error::RankTooLow {
            rank: 0,
            dimension: d,
        })?;

    let dot_int = |a: &[BigInt], b: &[BigInt]| a.iter().zip(b).map(|(x, y)| x * y).sum::<BigInt>();
    let big_u: Vec<Vec<BigInt>> = (0..d)
        .map(|i| {
            let mut row: Vec<BigInt> = basis.iter().map(|b| dot_int(&u[i], b)).collect();
            row.push(w[i].clone());
            row
        })
        .collect();
    let t2: Vec<BigInt> = (0..d).map(|i| dot_int(&u[i], &u[i]) - &w[i] * &w[i]).collect();
    let g: Vec<BigRational> = match cramer_all(&big_u, &t2) {
        Err(Error::SingularExact) => return Err(Error::USingular),
        other => other?,
    };
    let two = BigRational::from_integer(BigInt::from(2));
    let g: Vec<BigRational> = g.into_iter().map(|x| x / &two).collect();

    let mut c = vec![BigRational::zero(); d];
    for (gj, b) in g.iter().zip(&basis) {
        for (ci, bi) in c.iter_mut().zip(b) {
            *ci += gj * rat(bi);
        }
    }
    let w_ref = g[d - 1].clone();
    let n = rat_vec(&normal);
    let h2 = &w_ref * &w_ref - dot_rat(&c, &c);
    if h2.is_negative() {
        return Err(Error::ImaginaryRoot);
    }
    let e = &h2 / dot_rat(&n, &n);
    let r = &w_ref - rat(&reference.radius);

    let m: Vec<BigRational> = query
        .center
        .iter()
        .zip(&reference.center)
        .zip(&c)
        .map(|((q, x), ci)| rat(&(q - x)) - ci)
        .collect();
    let rq = rat(&query.radius);
    let reach = &rq + &r;
    let s = BigRational::from_integer(BigInt::from(-2 * root_sign(root)));
    let separation = radical_sign(&RadicalExpr {
        a: dot_rat(&m, &m) + &h2 - &reach * &reach,
        b: s * dot_rat(&m, &n),
        c: e,
    })?;
    Ok(ConflictSigns {
        separation,
        reach: sign_of(&reach),
    })
}
