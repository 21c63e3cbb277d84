use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use pc2_core::config::reference_configuration;
use pc2_core::interstitium::TranslateSet;
use pc2_core::Point2;
use serde::{Deserialize, Serialize};

use crate::{Format, Output, Source};

#[derive(Deserialize)]
struct PointsOnly {
    points: Vec<Point2>,
}

pub fn preset(name: &str) -> Result<Vec<Point2>> {
    match name {
        "fig1-55" => Ok(reference_configuration().points),
        _ => bail!("unknown preset `{name}` (available: fig1-55)"),
    }
}

pub fn read_points(path: &Path) -> Result<Vec<Point2>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: PointsOnly =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(file.points)
}

pub fn load_points(source: &Source) -> Result<Vec<Point2>> {
    match (&source.input, &source.preset) {
        (Some(path), _) => read_points(path),
        (None, Some(name)) => preset(name),
        (None, None) => bail!("a point set file or --preset is required"),
    }
}

/// A translate set file, or search output with the set under `translates`.
pub fn read_translates(path: &Path) -> Result<TranslateSet> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut value: serde_json::Value =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    if value["translates"].is_object() {
        value = value["translates"].take();
    }
    serde_json::from_value(value).with_context(|| format!("parsing {}", path.display()))
}

pub fn parse_point(s: &str) -> std::result::Result<Point2, String> {
    let (x, y) = s.split_once(',').ok_or("expected x,y")?;
    let x: f64 = x.trim().parse().map_err(|e| format!("{e}"))?;
    let y: f64 = y.trim().parse().map_err(|e| format!("{e}"))?;
    Point2::try_new(x, y).map_err(|e| e.to_string())
}

pub fn write_text(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Writes JSON, or the SVG from `svg` when that format was asked for.
pub fn emit<T: Serialize>(
    output: &Output,
    value: &T,
    svg: Option<&dyn Fn() -> String>,
) -> Result<()> {
    let text = match (output.format, svg) {
        (Format::Json, _) => to_json(value)?,
        (Format::Svg, Some(render)) => render(),
        (Format::Svg, None) => bail!("this command has no SVG output"),
    };
    write_text(output.out.as_deref(), &text)
}
