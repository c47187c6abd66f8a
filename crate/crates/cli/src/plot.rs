//! SVG rendering of 2-d generator sets and their tangent circles.

use std::fmt::Write;

use serde_json::Value;

use crate::format::fmt17;
use crate::input::GeneratorFile;
use crate::solve::{run_recipe, RecipeChoice};
use crate::vertices::{enumerate, VertexOptions};
use crate::{CliError, CliResult};

/// A solution circle to draw: center and signed radius.
#[derive(Debug, Clone, PartialEq)]
pub struct Disk {
    pub center: [f64; 2],
    pub radius: f64,
}

/// Reads `center`/`radius` pairs from a vertex file written by the
/// `vertices` command (an object with a `vertices` array, or a bare array).
/// An empty file holds no vertices.
pub fn parse_vertices(text: &str) -> CliResult<Vec<Disk>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let value: Value = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    let list = match &value {
        Value::Array(a) => a,
        Value::Object(o) => match o.get("vertices") {
            Some(Value::Array(a)) => a,
            _ => return Err(CliError::Parse("vertex file has no 'vertices' array".into())),
        },
        _ => return Err(CliError::Parse("vertex file must be a JSON object or array".into())),
    };
    let num = |v: &Value| v.as_f64().ok_or_else(|| CliError::Parse(format!("expected a number, got {v}")));
    list.iter()
        .map(|v| {
            let center = v
                .get("center")
                .and_then(Value::as_array)
                .filter(|c| c.len() == 2)
                .ok_or_else(|| CliError::Parse("vertex needs a 2-d 'center'".into()))?;
            let radius = v.get("radius").ok_or_else(|| CliError::Parse("vertex needs a 'radius'".into()))?;
            Ok(Disk {
                center: [num(&center[0])?, num(&center[1])?],
                radius: num(radius)?,
            })
        })
        .collect()
}

/// Every tangent circle of a single triple, or the diagram vertices of a
/// larger set.
pub fn computed_disks(file: &GeneratorFile, opts: &VertexOptions) -> CliResult<Vec<Disk>> {
    let disk = |c: &[f64], r: f64| Disk {
        center: [c[0], c[1]],
        radius: r,
    };
    if file.balls.len() == file.dimension + 1 {
        let out = run_recipe(&file.ball_set()?, RecipeChoice::Auto, &opts.tolerances)?;
        return Ok(out.solutions.iter().map(|s| disk(&s.center, s.radius)).collect());
    }
    let list = enumerate(file, opts)?;
    Ok(list
        .vertices
        .iter()
        .map(|v| disk(&[v.center[0].0, v.center[1].0], v.radius.0))
        .collect())
}

/// Generators as translucent blue disks, positive solutions stroked green
/// and negative ones red (drawn with radius `|r|`). The y axis points up.
pub fn render(file: &GeneratorFile, disks: &[Disk]) -> CliResult<String> {
    if file.dimension != 2 {
        return Err(CliError::Unsupported(format!("plot2d needs dimension 2, got {}", file.dimension)));
    }
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    let mut grow = |c: [f64; 2], r: f64| {
        for k in 0..2 {
            lo[k] = lo[k].min(c[k] - r.abs());
            hi[k] = hi[k].max(c[k] + r.abs());
        }
    };
    for g in &file.balls {
        grow([g.center[0], g.center[1]], g.radius);
    }
    for d in disks {
        grow(d.center, d.radius);
    }
    let extent = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-9);
    let pad = 0.05 * extent;
    let (x0, y0) = (lo[0] - pad, -hi[1] - pad);
    let (w, h) = (hi[0] - lo[0] + 2.0 * pad, hi[1] - lo[1] + 2.0 * pad);
    let stroke = fmt17(0.003 * extent);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}">"#,
        fmt17(x0),
        fmt17(y0),
        fmt17(w),
        fmt17(h)
    );
    for g in &file.balls {
        let _ = writeln!(
            svg,
            r#"  <circle id="{}" cx="{}" cy="{}" r="{}" fill="blue" fill-opacity="0.25" stroke="blue" stroke-width="{stroke}"/>"#,
            escape(&g.id),
            fmt17(g.center[0]),
            fmt17(0.0 - g.center[1]),
            fmt17(g.radius.abs())
        );
    }
    for d in disks {
        let color = if d.radius < 0.0 { "red" } else { "green" };
        let _ = writeln!(
            svg,
            r#"  <circle cx="{}" cy="{}" r="{}" fill="none" stroke="{color}" stroke-width="{stroke}"/>"#,
            fmt17(d.center[0]),
            fmt17(0.0 - d.center[1]),
            fmt17(d.radius.abs())
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}
