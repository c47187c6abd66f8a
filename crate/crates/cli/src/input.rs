//! Generator files: JSON
//! `{"dimension": d, "scale_exponent": e, "balls": [{"id", "center", "radius"}]}`
//! or CSV with header `id,x1..xd,r`.

use std::collections::HashSet;
use std::io::Read;
use std::path::Path;

use apollo_core::{validate_ball_set, Ball, BallSet};
use serde::Deserialize;

use crate::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct Generator {
    pub id: String,
    pub center: Vec<f64>,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct GeneratorFile {
    pub dimension: usize,
    #[serde(default)]
    pub scale_exponent: Option<i32>,
    pub balls: Vec<Generator>,
}

impl GeneratorFile {
    /// Reads a file (`-` for stdin). `.csv` and `.json` extensions pick the
    /// format; otherwise a leading `{` means JSON.
    pub fn load(path: &Path) -> CliResult<GeneratorFile> {
        let text = read_text(path)?;
        let ext = path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase);
        let file = match ext.as_deref() {
            Some("json") => Self::from_json(&text)?,
            Some("csv") => Self::from_csv(&text)?,
            _ if text.trim_start().starts_with('{') => Self::from_json(&text)?,
            _ => Self::from_csv(&text)?,
        };
        file.validate()?;
        Ok(file)
    }

    pub fn from_json(text: &str) -> CliResult<GeneratorFile> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn from_csv(text: &str) -> CliResult<GeneratorFile> {
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
        let header = reader.headers().map_err(|e| CliError::Parse(e.to_string()))?.clone();
        if header.len() < 3 || !header[0].eq_ignore_ascii_case("id") {
            return Err(CliError::Parse("CSV header must be id,x1..xd,r".into()));
        }
        let dimension = header.len() - 2;
        let mut balls = Vec::new();
        for (line, rec) in reader.records().enumerate() {
            let rec = rec.map_err(|e| CliError::Parse(e.to_string()))?;
            let num = |k: usize| {
                rec[k].parse::<f64>().map_err(|_| {
                    CliError::Parse(format!("row {}: '{}' is not a number", line + 1, &rec[k]))
                })
            };
            let center = (1..=dimension).map(num).collect::<CliResult<Vec<f64>>>()?;
            balls.push(Generator {
                id: rec[0].to_string(),
                center,
                radius: num(dimension + 1)?,
            });
        }
        Ok(GeneratorFile {
            dimension,
            scale_exponent: None,
            balls,
        })
    }

    /// Unique ids, consistent dimension, finite values, no repeated center.
    pub fn validate(&self) -> CliResult<()> {
        if self.dimension == 0 {
            return Err(CliError::Validation("dimension must be positive".into()));
        }
        let mut seen = HashSet::new();
        for b in &self.balls {
            if !seen.insert(b.id.as_str()) {
                return Err(CliError::Validation(format!("duplicate id '{}'", b.id)));
            }
            if b.center.len() != self.dimension {
                return Err(CliError::Validation(format!(
                    "ball '{}' has {} coordinates, dimension is {}",
                    b.id,
                    b.center.len(),
                    self.dimension
                )));
            }
            if !b.radius.is_finite() || b.center.iter().any(|c| !c.is_finite()) {
                return Err(CliError::Validation(format!("ball '{}' is not finite", b.id)));
            }
        }
        for (i, a) in self.balls.iter().enumerate() {
            if let Some(b) = self.balls[..i].iter().find(|b| b.center == a.center) {
                return Err(CliError::Validation(format!("balls '{}' and '{}' are concentric", b.id, a.id)));
            }
        }
        Ok(())
    }

    pub fn balls(&self) -> Vec<Ball> {
        self.balls.iter().map(|g| Ball::new(g.center.clone(), g.radius)).collect()
    }

    pub fn ids(&self) -> Vec<String> {
        self.balls.iter().map(|g| g.id.clone()).collect()
    }

    /// The whole file as one tangency problem; needs exactly `d + 1` balls.
    pub fn ball_set(&self) -> CliResult<BallSet> {
        Ok(validate_ball_set(self.balls(), self.dimension)?)
    }
}

pub fn read_text(path: &Path) -> CliResult<String> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| CliError::Parse(format!("stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    }
    Ok(text)
}
