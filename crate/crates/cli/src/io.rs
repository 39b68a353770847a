use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use phtrecon::landscape::Landscape;
use phtrecon::{CriticalPoint, PLFunction, Point2, SampledFunction};

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn write_text(path: Option<&PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

pub fn write_json<T: Serialize>(path: Option<&PathBuf>, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(path, &text)
}

/// Either function file format.
#[derive(Deserialize)]
#[serde(untagged)]
pub enum FunctionInput {
    Pl(PLFunction),
    Sampled(SampledFunction),
}

impl FunctionInput {
    pub fn vertices(&self) -> Vec<Point2> {
        match self {
            FunctionInput::Pl(f) => f.vertices().to_vec(),
            FunctionInput::Sampled(s) => s.points(),
        }
    }

    pub fn into_pl(self) -> Result<PLFunction> {
        match self {
            FunctionInput::Pl(f) => Ok(f),
            FunctionInput::Sampled(s) => Ok(PLFunction::new(s.points())?),
        }
    }

    pub fn into_samples(self, per_unit: f64) -> Result<SampledFunction> {
        match self {
            FunctionInput::Pl(f) => Ok(SampledFunction::from_pl(&f, per_unit)?),
            FunctionInput::Sampled(s) => Ok(s),
        }
    }
}

#[derive(Serialize, Deserialize)]
pub struct LandscapeFile {
    pub landscapes: Vec<Landscape>,
}

#[derive(Serialize, Deserialize)]
pub struct PointsFile {
    pub critical_points: Vec<CriticalPoint>,
}
