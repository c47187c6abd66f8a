//! Full-rank tangent-ball solvers.
//!
//! Three independent routes reach the same pair of solution balls:
//!
//! * gradient route: one factorization of `V` yields the power vertex `p`
//!   and the power gradient `p~`; the solution centers sit on the power line
//!   at `p + r p~` and the radii solve
//!   `(|p~|^2 - 1) r^2 - 2 (r_i + v_i . p~) r + r_p^2 = 0`;
//! * double power vertex: the power vertices of the set and of the set with
//!   every radius grown by one fix the direction of the line, and the ratio
//!   `h = lambda / r` follows from any pair with distinct radii;
//! * lifted normal: in R^{d+1} the lifted solution vector is normal to the
//!   lifted difference vectors, so a cofactor normal gives its direction and
//!   a scalar quadratic its length.
//!
//! All quadratics go through [`stable_quadratic`]. Solutions are returned
//! largest radius first.

use crate::error::{Error, Result};
use crate::geometry::{BallSet, SignSet, Tolerances};
use crate::power::{axpy, dot, norm, sub, PowerSystem};
use crate::smallmat::{cofactor_normal, stable_quadratic, QuadraticKind, QuadraticRoots};

/// Which root of the parent quadratic a solution came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RootLabel {
    /// Larger radius of a real pair.
    Plus,
    /// Smaller radius of a real pair.
    Minus,
    /// Only real root (linear or double).
    Single,
}

/// Tangency class of a solution ball relative to non-negative generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TangencyClass {
    /// Positive radius: touches every generator from outside.
    Positive,
    /// Negative radius no larger than the largest generator.
    SmallNegative,
    /// Negative radius enclosing every generator; never a diagram vertex.
    LargeNegative,
    ZeroRadius,
}

/// Special structure of the radius quadratic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpecialCase {
    Generic,
    /// Every generator passes through the power vertex (`r_p^2 = 0`).
    RpZero,
    /// Common supporting hyperplane (`|p~| = 1`); the quadratic is linear.
    PtildeUnit,
    /// Equal radii (`p~ = 0`); the solutions sit on the power vertex.
    PtildeZero,
    /// Negative discriminant: no real solution.
    Imaginary,
}

/// Solution route.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Recipe {
    /// Power vertex plus power gradient from one factorization.
    Gradient,
    /// Two power vertices related by a unit radius increment.
    DoublePowerVertex,
    /// Cofactor normal of the lifted difference vectors.
    LiftedNormal,
    /// Rank-deficient `V` (centers in a hyperplane).
    SubDimensional,
}

impl Recipe {
    pub fn number(self) -> u8 {
        match self {
            Recipe::Gradient => 1,
            Recipe::DoublePowerVertex => 2,
            Recipe::LiftedNormal => 3,
            Recipe::SubDimensional => 4,
        }
    }
}

/// Pair-level root pattern of a two-root outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RootPattern {
    BothPositive,
    PositiveAndLargeNegative,
    BothLargeNegative,
    PositiveAndSmallNegative,
    LargeAndSmallNegative,
    BothSmallNegative,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApolloniusSolution {
    pub center: Vec<f64>,
    /// Signed radius.
    pub radius: f64,
    pub root: RootLabel,
    /// Filled by [`classify_roots`].
    pub class: Option<TangencyClass>,
    pub diagram_relevant: bool,
    /// Shared by two diagram-relevant roots of one quadratic.
    pub twin_id: Option<u64>,
}

impl ApolloniusSolution {
    fn new(center: Vec<f64>, radius: f64, root: RootLabel) -> Self {
        ApolloniusSolution {
            center,
            radius,
            root,
            class: None,
            diagram_relevant: true,
            twin_id: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOutcome {
    /// Zero, one or two solutions, largest radius first.
    pub solutions: Vec<ApolloniusSolution>,
    pub discriminant: f64,
    pub special_case: SpecialCase,
    pub recipe: Recipe,
}

impl SolveOutcome {
    pub fn is_imaginary(&self) -> bool {
        self.special_case == SpecialCase::Imaginary
    }

    /// Sign pattern of a classified two-root outcome.
    pub fn root_pattern(&self) -> Option<RootPattern> {
        use TangencyClass::*;
        let [a, b] = self.solutions.as_slice() else {
            return None;
        };
        let pattern = match (a.class?, b.class?) {
            (Positive, Positive) => RootPattern::BothPositive,
            (Positive, LargeNegative) | (LargeNegative, Positive) => {
                RootPattern::PositiveAndLargeNegative
            }
            (LargeNegative, LargeNegative) => RootPattern::BothLargeNegative,
            (Positive, SmallNegative) | (SmallNegative, Positive) => {
                RootPattern::PositiveAndSmallNegative
            }
            (LargeNegative, SmallNegative) | (SmallNegative, LargeNegative) => {
                RootPattern::LargeAndSmallNegative
            }
            (SmallNegative, SmallNegative) => RootPattern::BothSmallNegative,
            _ => return None,
        };
        Some(pattern)
    }
}

/// `||p~|^2 - 1| <= UNIT_GRADIENT_REL (1 + |p~|^2)` routes to the linear case.
pub const UNIT_GRADIENT_REL: f64 = 1e-12;

/// Index of the largest `|radius|`; ties go to the lowest index.
fn reference_index(radii: &[f64]) -> usize {
    let mut k = 0;
    for (i, r) in radii.iter().enumerate() {
        if r.abs() > radii[k].abs() {
            k = i;
        }
    }
    k
}

/// Turns the real roots of a radius quadratic into labelled solutions.
fn assemble(
    roots: &QuadraticRoots,
    special: SpecialCase,
    recipe: Recipe,
    center_of: impl Fn(f64) -> Vec<f64>,
) -> SolveOutcome {
    let mut values: Vec<f64> = roots.roots.clone();
    values.sort_by(|a, b| b.total_cmp(a));
    let solutions = match values.as_slice() {
        [r] => vec![ApolloniusSolution::new(center_of(*r), *r, RootLabel::Single)],
        [hi, lo] => vec![
            ApolloniusSolution::new(center_of(*hi), *hi, RootLabel::Plus),
            ApolloniusSolution::new(center_of(*lo), *lo, RootLabel::Minus),
        ],
        _ => Vec::new(),
    };
    let special_case = if roots.kind == QuadraticKind::ComplexPair {
        SpecialCase::Imaginary
    } else {
        special
    };
    SolveOutcome {
        solutions,
        discriminant: roots.discriminant,
        special_case,
        recipe,
    }
}

/// Solves `a r^2 - 2 half_b r + c = 0`, forcing the linear branch when
/// `unit` is set.
fn radius_quadratic(a: f64, half_b: f64, c: f64, unit: bool) -> Result<QuadraticRoots> {
    if unit && half_b != 0.0 {
        return Ok(QuadraticRoots {
            kind: QuadraticKind::Linear,
            roots: vec![0.5 * c / half_b],
            discriminant: 4.0 * half_b * half_b,
        });
    }
    stable_quadratic(a, -2.0 * half_b, c)
}

fn is_unit(h2: f64) -> bool {
    (h2 - 1.0).abs() <= UNIT_GRADIENT_REL * (1.0 + h2)
}

fn label_special(unit: bool, zero_gradient: bool, rp2: f64, set: &BallSet, tol: &Tolerances) -> SpecialCase {
    if unit {
        SpecialCase::PtildeUnit
    } else if zero_gradient {
        SpecialCase::PtildeZero
    } else if rp2.abs() <= tol.singular_rel * set.scale().powi(2) {
        SpecialCase::RpZero
    } else {
        SpecialCase::Generic
    }
}

/// Gradient-route core for arbitrary effective radii `s_i r_i`.
fn gradient_outcome(
    set: &BallSet,
    radii: &[f64],
    p: &[f64],
    rp2: f64,
    ptilde: &[f64],
    tol: &Tolerances,
) -> Result<SolveOutcome> {
    let i = reference_index(radii);
    let v_i = sub(&set.ball(i).center, p);
    let half_b = radii[i] + dot(&v_i, ptilde);
    let g2 = dot(ptilde, ptilde);
    let unit = is_unit(g2);
    let zero_gradient = g2.sqrt() <= tol.singular_rel;
    let roots = radius_quadratic(g2 - 1.0, half_b, rp2, unit)?;
    let special = label_special(unit, zero_gradient, rp2, set, tol);
    Ok(assemble(&roots, special, Recipe::Gradient, |r| axpy(p, r, ptilde)))
}

/// Gradient route: `V p = t` and `V p~ = -r` in one solver call, radii from
/// the power-gradient quadratic, centers `x = p + r p~`.
pub fn solve_recipe1(set: &BallSet, tol: &Tolerances) -> Result<SolveOutcome> {
    solve_signed(set, &SignSet::all_positive(set.len()), tol)
}

/// Double power vertex route.
pub fn solve_recipe2(set: &BallSet, tol: &Tolerances) -> Result<SolveOutcome> {
    let sys = PowerSystem::new(set, tol)?;
    let radii: Vec<f64> = set.radii().collect();
    let t = sys.rhs_for_radii(&radii);
    let grown: Vec<f64> = radii.iter().map(|r| r + 1.0).collect();
    let t_grown = sys.rhs_for_radii(&grown);
    let mut sol = sys.solve_columns(&[t, t_grown])?;
    let p_grown = sys.absolute(&sol.pop().expect("two columns"));
    let p = sys.absolute(&sol.pop().expect("two columns"));
    let rp2 = sys.power_radius2(&p);

    let i = reference_index(&radii);
    let v_i = sub(&set.ball(i).center, &p);
    let shift = sub(&p_grown, &p);
    let shift_len = norm(&shift);

    if shift_len <= tol.singular_rel * set.scale() {
        // Equal radii: the power vertex does not move and the solutions
        // sit on it.
        let roots = stable_quadratic(-1.0, -2.0 * radii[i], rp2)?;
        return Ok(assemble(
            &roots,
            SpecialCase::PtildeZero,
            Recipe::DoublePowerVertex,
            |_| p.clone(),
        ));
    }

    let a_hat: Vec<f64> = shift.iter().map(|v| v / shift_len).collect();
    // Pair with the largest radius difference, then the largest projection.
    let mut best: Option<(f64, f64, f64)> = None;
    for a in 0..set.len() {
        for b in a + 1..set.len() {
            let r_ab = radii[a] - radii[b];
            let proj = dot(&sub(&set.ball(a).center, &set.ball(b).center), &a_hat);
            let better = match best {
                None => true,
                Some((br, bp, _)) => {
                    r_ab.abs() > br.abs() || (r_ab.abs() == br.abs() && proj.abs() > bp.abs())
                }
            };
            if better {
                best = Some((r_ab, proj, -r_ab / proj));
            }
        }
    }
    let h = best.expect("at least two balls").2;
    let h2 = h * h;
    let unit = is_unit(h2);
    // alpha_i . alpha~ with alpha~ = h a^ + e_{d+1}
    let half_b = h * dot(&v_i, &a_hat) + radii[i];
    let roots = radius_quadratic(h2 - 1.0, half_b, rp2, unit)?;
    let special = label_special(unit, false, rp2, set, tol);
    Ok(assemble(&roots, special, Recipe::DoublePowerVertex, |r| {
        axpy(&p, r * h, &a_hat)
    }))
}

/// Lifted-normal route.
pub fn solve_recipe3(set: &BallSet, tol: &Tolerances) -> Result<SolveOutcome> {
    let d = set.dim();
    let sys = PowerSystem::new(set, tol)?;
    let radii: Vec<f64> = set.radii().collect();
    let p = sys.absolute(&sys.solve_columns(&[sys.rhs_for_radii(&radii)])?[0]);
    let rp2 = sys.power_radius2(&p);

    let reference = set.ball(d);
    let lifted_rows: Vec<Vec<f64>> = set.balls()[..d]
        .iter()
        .map(|b| {
            let mut row = sub(&b.center, &reference.center);
            row.push(b.radius - reference.radius);
            row
        })
        .collect();
    let normal = cofactor_normal(&lifted_rows);
    let len = norm(&normal);
    if len == 0.0 {
        return Err(Error::DegenerateNormal);
    }
    // Orient so the lifted component is non-negative; then sign(r) = sign(sigma).
    let orient = if normal[d] < 0.0 { -1.0 } else { 1.0 };
    let alpha_hat: Vec<f64> = normal.iter().map(|v| orient * v / len).collect();

    let i = reference_index(&radii);
    let mut alpha_i = sub(&set.ball(i).center, &p);
    alpha_i.push(radii[i]);
    let lift = alpha_hat[d];
    let lead = 1.0 - 2.0 * lift * lift;
    let unit = lead.abs() <= UNIT_GRADIENT_REL;
    let zero_gradient = norm(&alpha_hat[..d]) <= tol.singular_rel;
    let roots = radius_quadratic(lead, dot(&alpha_hat, &alpha_i), rp2, unit)?;
    let special = label_special(unit, zero_gradient, rp2, set, tol);

    // sigma -> (v, r) = sigma alpha^; radii are sigma * lift.
    let sigmas = roots.roots.clone();
    let mut outcome = assemble(&roots, special, Recipe::LiftedNormal, |_| Vec::new());
    let mut pairs: Vec<(f64, Vec<f64>)> = sigmas
        .iter()
        .map(|&s| (s * lift, axpy(&p, s, &alpha_hat[..d])))
        .collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    for (sol, (r, x)) in outcome.solutions.iter_mut().zip(pairs) {
        sol.radius = r;
        sol.center = x;
    }
    Ok(outcome)
}

/// Gradient route for the signed tangency problem
/// `|x_i - x|^2 = (r + s_i r_i)^2`.
///
/// The power vertex and power radius do not depend on the signs; only the
/// gradient column and the linear term of the quadratic see `s_i r_i`.
pub fn solve_signed(set: &BallSet, signs: &SignSet, tol: &Tolerances) -> Result<SolveOutcome> {
    if signs.len() != set.len() {
        return Err(Error::SignCount {
            expected: set.len(),
            got: signs.len(),
        });
    }
    let sys = PowerSystem::new(set, tol)?;
    let radii: Vec<f64> = set.radii().collect();
    let signed: Vec<f64> = radii.iter().enumerate().map(|(i, r)| signs.get(i) * r).collect();
    let t = sys.rhs_for_radii(&radii);
    let minus_r: Vec<f64> = sys.radius_column(&signed).iter().map(|v| -v).collect();
    let mut sol = sys.solve_columns(&[t, minus_r])?;
    let ptilde = sol.pop().expect("two columns");
    let p = sys.absolute(&sol.pop().expect("two columns"));
    let rp2 = sys.power_radius2(&p);
    gradient_outcome(set, &signed, &p, rp2, &ptilde, tol)
}

/// Largest dimension accepted by [`solve_all_sign_sets`].
pub const MAX_SIGN_SET_DIMENSION: usize = 10;

/// Solves every sign set with one factorization of `V` and all `2^{d+1}`
/// gradient columns in a single multi-right-hand-side call.
///
/// A sign set and its negation describe the same balls with negated radii,
/// so only the set whose last sign is `+` is reported. Remaining solutions
/// are deduplicated on `(x, |r|)` within `dedupe_rel * scale`.
pub fn solve_all_sign_sets(set: &BallSet, tol: &Tolerances) -> Result<Vec<(SignSet, SolveOutcome)>> {
    let d = set.dim();
    if d > MAX_SIGN_SET_DIMENSION {
        return Err(Error::TooManySignSets {
            max: MAX_SIGN_SET_DIMENSION,
            got: d,
        });
    }
    let n = set.len();
    let sys = PowerSystem::new(set, tol)?;
    let radii: Vec<f64> = set.radii().collect();
    let masks: Vec<u64> = (0..1u64 << n).collect();
    let sign_sets: Vec<SignSet> = masks.iter().map(|&m| SignSet::from_mask(m, n)).collect();

    let mut columns = vec![sys.rhs_for_radii(&radii)];
    for signs in &sign_sets {
        let signed: Vec<f64> = radii.iter().enumerate().map(|(i, r)| signs.get(i) * r).collect();
        columns.push(sys.radius_column(&signed).iter().map(|v| -v).collect());
    }
    let solved = sys.solve_columns(&columns)?;
    let p = sys.absolute(&solved[0]);
    let rp2 = sys.power_radius2(&p);

    let limit = tol.dedupe_rel * set.scale();
    let mut seen: Vec<(Vec<f64>, f64)> = Vec::new();
    let mut out = Vec::new();
    for (k, signs) in sign_sets.into_iter().enumerate() {
        let mirror = !masks[k] & ((1u64 << n) - 1);
        if mirror < masks[k] {
            continue;
        }
        let signed: Vec<f64> = radii.iter().enumerate().map(|(i, r)| signs.get(i) * r).collect();
        let mut outcome = gradient_outcome(set, &signed, &p, rp2, &solved[k + 1], tol)?;
        outcome.solutions.retain(|s| {
            let dup = seen.iter().any(|(x, r)| {
                (r - s.radius.abs()).abs() <= limit && norm(&sub(x, &s.center)) <= limit
            });
            if !dup {
                seen.push((s.center.clone(), s.radius.abs()));
            }
            !dup
        });
        out.push((signs, outcome));
    }
    Ok(out)
}

/// Labels each solution by tangency class and diagram relevance.
///
/// Negative radii with `|r|` above the largest generator radius enclose
/// every generator and are not diagram vertices. Generator radii must be
/// non-negative; run [`crate::normalize_radii`] first.
pub fn classify_roots(mut outcome: SolveOutcome, set: &BallSet, tol: &Tolerances) -> Result<SolveOutcome> {
    if set.radii().any(|r| r < 0.0) {
        return Err(Error::RequiresNonNegativeRadii);
    }
    let r_max = set.radii().fold(0.0, f64::max);
    let zero = tol.residual_rel * set.scale();
    for sol in &mut outcome.solutions {
        let class = if sol.radius.abs() <= zero {
            TangencyClass::ZeroRadius
        } else if sol.radius > 0.0 {
            TangencyClass::Positive
        } else if -sol.radius > r_max {
            TangencyClass::LargeNegative
        } else {
            TangencyClass::SmallNegative
        };
        sol.class = Some(class);
        sol.diagram_relevant = class != TangencyClass::LargeNegative;
    }
    Ok(outcome)
}

/// Marks two diagram-relevant roots of one quadratic as twins sharing
/// `pair_id`.
pub fn detect_twin(mut outcome: SolveOutcome, pair_id: u64) -> SolveOutcome {
    let twins = outcome.solutions.len() == 2 && outcome.solutions.iter().all(|s| s.diagram_relevant);
    for sol in &mut outcome.solutions {
        sol.twin_id = twins.then_some(pair_id);
    }
    outcome
}
