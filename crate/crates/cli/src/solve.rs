//! Single-tuple solve report.

use apollo_core::{
    classify_roots, detect_twin, dispatch_solve, normalize_radii, solve_all_sign_sets, solve_recipe1,
    solve_recipe2, solve_recipe3, solve_signed, tangency_residual, BallSet, Recipe, SignSet,
    SolveOutcome, Tolerances,
};
use serde::Serialize;

use crate::format::{class_name, nums, root_name, special_name, Num};
use crate::input::GeneratorFile;
use crate::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecipeChoice {
    Gradient,
    DoublePowerVertex,
    LiftedNormal,
    Auto,
}

impl std::str::FromStr for RecipeChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "1" => Ok(RecipeChoice::Gradient),
            "2" => Ok(RecipeChoice::DoublePowerVertex),
            "3" => Ok(RecipeChoice::LiftedNormal),
            "auto" => Ok(RecipeChoice::Auto),
            _ => Err(format!("unknown recipe '{s}' (expected 1, 2, 3 or auto)")),
        }
    }
}

pub enum SignMode {
    Positive,
    Signed(SignSet),
    All,
}

#[derive(Debug, Serialize)]
pub struct SolutionRecord {
    pub root: &'static str,
    pub center: Vec<Num>,
    pub radius: Num,
    pub class: Option<&'static str>,
    pub diagram_relevant: bool,
    pub twin_id: Option<u64>,
    pub residual: Num,
}

#[derive(Debug, Serialize)]
pub struct SignSetReport {
    pub signs: Vec<i8>,
    pub status: &'static str,
    pub special_case: &'static str,
    pub discriminant: Num,
    pub solutions: Vec<SolutionRecord>,
}

#[derive(Debug, Serialize)]
pub struct SolveReport {
    pub status: &'static str,
    pub dimension: usize,
    pub ids: Vec<String>,
    pub recipe: u8,
    pub subdimensional: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub special_case: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub discriminant: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub signs: Option<Vec<i8>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solutions: Option<Vec<SolutionRecord>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sign_sets: Option<Vec<SignSetReport>>,
}

/// Parses `+,-,+` or `1,-1,1`.
pub fn parse_signs(text: &str, count: usize) -> CliResult<SignSet> {
    let values = text
        .split(',')
        .map(|t| match t.trim() {
            "+" | "+1" | "1" => Ok(1),
            "-" | "-1" => Ok(-1),
            other => Err(CliError::Parse(format!("bad sign '{other}'"))),
        })
        .collect::<CliResult<Vec<i32>>>()?;
    Ok(SignSet::new(values, count)?)
}

pub fn run_recipe(set: &BallSet, choice: RecipeChoice, tol: &Tolerances) -> CliResult<SolveOutcome> {
    let out = match choice {
        RecipeChoice::Gradient => solve_recipe1(set, tol),
        RecipeChoice::DoublePowerVertex => solve_recipe2(set, tol),
        RecipeChoice::LiftedNormal => solve_recipe3(set, tol),
        RecipeChoice::Auto => dispatch_solve(set, tol),
    };
    Ok(out?)
}

/// Classifies an unsigned outcome. Sets with negative radii are classified
/// in their normalized form (all radii shifted to be non-negative); the
/// reported radii stay those of the input set.
pub fn classify(outcome: SolveOutcome, set: &BallSet, tol: &Tolerances, pair_id: u64) -> CliResult<SolveOutcome> {
    let (normal, shift) = normalize_radii(set);
    let mut out = outcome;
    out.solutions.iter_mut().for_each(|s| s.radius -= shift);
    let mut out = classify_roots(out, &normal, tol)?;
    out.solutions.iter_mut().for_each(|s| s.radius += shift);
    Ok(detect_twin(out, pair_id))
}

fn records(set: &BallSet, out: &SolveOutcome, signs: &SignSet) -> Vec<SolutionRecord> {
    out.solutions
        .iter()
        .map(|s| SolutionRecord {
            root: root_name(s.root),
            center: nums(&s.center),
            radius: Num(s.radius),
            class: s.class.map(class_name),
            diagram_relevant: s.diagram_relevant,
            twin_id: s.twin_id,
            residual: Num(tangency_residual(set, s, signs).max_abs),
        })
        .collect()
}

fn status(empty: bool) -> &'static str {
    if empty {
        "imaginary"
    } else {
        "ok"
    }
}

pub fn solve_report(file: &GeneratorFile, choice: RecipeChoice, mode: &SignMode, tol: &Tolerances) -> CliResult<SolveReport> {
    let set = file.ball_set()?;
    let d = set.dim();
    let mut report = SolveReport {
        status: "ok",
        dimension: d,
        ids: file.ids(),
        recipe: Recipe::Gradient.number(),
        subdimensional: false,
        special_case: None,
        discriminant: None,
        signs: None,
        solutions: None,
        sign_sets: None,
    };
    match mode {
        SignMode::All => {
            let all = solve_all_sign_sets(&set, tol)?;
            let sets: Vec<SignSetReport> = all
                .iter()
                .map(|(signs, out)| SignSetReport {
                    signs: signs.signs().to_vec(),
                    status: status(out.solutions.is_empty()),
                    special_case: special_name(out.special_case),
                    discriminant: Num(out.discriminant),
                    solutions: records(&set, out, signs),
                })
                .collect();
            report.status = status(sets.iter().all(|s| s.solutions.is_empty()));
            report.sign_sets = Some(sets);
        }
        SignMode::Signed(signs) => {
            let out = solve_signed(&set, signs, tol)?;
            report.status = status(out.solutions.is_empty());
            report.special_case = Some(special_name(out.special_case));
            report.discriminant = Some(Num(out.discriminant));
            report.solutions = Some(records(&set, &out, signs));
            report.signs = Some(signs.signs().to_vec());
        }
        SignMode::Positive => {
            let out = classify(run_recipe(&set, choice, tol)?, &set, tol, 0)?;
            report.status = status(out.solutions.is_empty());
            report.recipe = out.recipe.number();
            report.subdimensional = out.recipe == Recipe::SubDimensional;
            report.special_case = Some(special_name(out.special_case));
            report.discriminant = Some(Num(out.discriminant));
            report.solutions = Some(records(&set, &out, &SignSet::all_positive(d + 1)));
        }
    }
    Ok(report)
}
