//! `--config` file: TOML with optional per-command sections. Any key left out
//! falls back to the built-in default; command-line flags override both.
//!
//! ```toml
//! tau = 0.5          # shared default for every command
//! parallel = 4
//!
//! [surface]
//! family = "slab-bigraph"
//! d = 1.0
//! model = "half"     # or "cyl"
//! sheet = "both"     # plus | minus | both
//! resolution = 64
//! samples = 200
//! tol = 1e-6
//!
//! [annulus]
//! ratio = 1.25
//! rho_bar_range = "0.25:8:32"
//!
//! [boundary]
//! resolution = 8
//!
//! [solve]
//! tol = 1e-10
//! max_iter = 50
//! ```

use std::path::Path;

use serde::Deserialize;
use sltwo::geometry::Model;
use sltwo::{Error, Result};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub tau: Option<f64>,
    pub parallel: Option<usize>,
    #[serde(default)]
    pub surface: SurfaceSection,
    #[serde(default)]
    pub annulus: AnnulusSection,
    #[serde(default)]
    pub boundary: BoundarySection,
    #[serde(default)]
    pub solve: SolveSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceSection {
    pub family: Option<String>,
    pub d: Option<f64>,
    pub l: Option<f64>,
    pub c: Option<f64>,
    pub lambda: Option<f64>,
    pub tau: Option<f64>,
    pub model: Option<String>,
    pub sheet: Option<String>,
    pub resolution: Option<usize>,
    pub samples: Option<usize>,
    pub tol: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnnulusSection {
    pub tau: Option<f64>,
    pub ratio: Option<f64>,
    pub rho_bar_range: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundarySection {
    pub tau: Option<f64>,
    pub resolution: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveSection {
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Config::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Config> {
        toml::from_str(text).map_err(|e| Error::Parse {
            line: e.span().map(|sp| text[..sp.start].matches('\n').count() + 1).unwrap_or(0),
            message: e.message().to_string(),
        })
    }
}

pub fn model(name: Option<&str>) -> Result<Option<Model>> {
    match name {
        None => Ok(None),
        Some("half" | "half-space") => Ok(Some(Model::HalfSpace)),
        Some("cyl" | "cylinder") => Ok(Some(Model::Cylinder)),
        Some(other) => Err(Error::BadParameter(format!("unknown model '{other}' (expected half or cyl)"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sections_are_optional() {
        let c = Config::parse("tau = 1.0\n[annulus]\nratio = 2.0\n").unwrap();
        assert_eq!(c.tau, Some(1.0));
        assert_eq!(c.annulus.ratio, Some(2.0));
        assert!(c.surface.family.is_none());
    }

    #[test]
    fn unknown_keys_are_rejected_with_a_line() {
        match Config::parse("tau = 0.5\nparallel = 2\ncolour = 3\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }
}
