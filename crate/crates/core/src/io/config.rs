//! JSON run configuration.
//!
//! ```json
//! {
//!   "dem": "dem.asc",
//!   "layers": [
//!     {"path": "builtup.geojson", "role": "builtup"},
//!     {"path": "rivers.geojson", "role": "river"},
//!     {"path": "sites.geojson", "role": "sites"}
//!   ],
//!   "grid": {"ncols": 128, "nrows": 128, "x_origin": 0, "y_origin": 0, "cellsize": 25},
//!   "radii": [250, 500, 1000],
//!   "min_area": 50000,
//!   "weights": {"floodplain": 2.5},
//!   "output_dir": "out",
//!   "seed": 42
//! }
//! ```
//!
//! Only `dem` and `layers` are required. Relative paths resolve against the
//! directory holding the configuration file. `grid`, when given, must match
//! the DEM header. `seed` is informational and copied to the manifest.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factors::{validate_radii, DEFAULT_MIN_AREA, DEFAULT_RADII};
use crate::io::{read_ascii_grid, read_vector_file};
use crate::raster::{FeatureSet, GridHeader, Role};
use crate::scoring::WeightConfig;
use crate::terrain::Dem;
use crate::validation::ObservedSite;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayerEntry {
    pub path: PathBuf,
    pub role: Role,
}

/// Expected raster geometry, checked against the DEM.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub ncols: usize,
    pub nrows: usize,
    pub x_origin: f64,
    pub y_origin: f64,
    pub cellsize: f64,
}

fn default_radii() -> Vec<f64> {
    DEFAULT_RADII.to_vec()
}

fn default_min_area() -> f64 {
    DEFAULT_MIN_AREA
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub dem: PathBuf,
    pub layers: Vec<LayerEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default = "default_radii")]
    pub radii: Vec<f64>,
    #[serde(default = "default_min_area")]
    pub min_area: f64,
    #[serde(default)]
    pub weights: WeightConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Everything a run reads from disk.
#[derive(Debug, Clone)]
pub struct Inputs {
    pub dem: Dem,
    pub features: FeatureSet,
    pub sites: Vec<ObservedSite>,
}

impl RunConfig {
    pub fn new(dem: impl Into<PathBuf>, layers: Vec<LayerEntry>) -> Self {
        RunConfig {
            dem: dem.into(),
            layers,
            grid: None,
            radii: default_radii(),
            min_area: DEFAULT_MIN_AREA,
            weights: WeightConfig::default(),
            output_dir: None,
            seed: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let config: RunConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    /// Reads and validates a configuration; returns it with the directory
    /// that relative paths resolve against.
    pub fn load(path: &Path) -> Result<(Self, PathBuf)> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let config = RunConfig::from_json(&text)
            .map_err(|e| Error::Config(format!("{}: {}", path.display(), strip_prefix(&e))))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok((config, base))
    }

    pub fn validate(&self) -> Result<()> {
        if self.dem.as_os_str().is_empty() {
            return Err(Error::Config("`dem` path is empty".into()));
        }
        if let Some(i) = self
            .layers
            .iter()
            .position(|l| l.path.as_os_str().is_empty())
        {
            return Err(Error::Config(format!("layer #{i} has an empty `path`")));
        }
        if !self.layers.iter().any(|l| l.role == Role::Builtup) {
            return Err(Error::Config(
                "`layers` needs at least one builtup layer".into(),
            ));
        }
        validate_radii(&self.radii).map_err(|e| Error::Config(format!("`radii`: {e}")))?;
        if !(self.min_area.is_finite() && self.min_area >= 0.0) {
            return Err(Error::Config(format!(
                "`min_area` must be >= 0, got {}",
                self.min_area
            )));
        }
        self.weights
            .validate()
            .map_err(|e| Error::Config(format!("`weights`: {e}")))?;
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("in-memory JSON");
        text.push('\n');
        text
    }

    fn resolve(base: &Path, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            base.join(p)
        }
    }

    /// Loads the DEM and every layer. Layer order does not affect results.
    pub fn load_inputs(&self, base: &Path) -> Result<Inputs> {
        let grid = read_ascii_grid(&Self::resolve(base, &self.dem))?;
        if let Some(spec) = self.grid {
            let expected = GridHeader {
                ncols: spec.ncols,
                nrows: spec.nrows,
                x_origin: spec.x_origin,
                y_origin: spec.y_origin,
                cellsize: spec.cellsize,
                nodata: grid.nodata(),
            };
            expected
                .ensure_aligned(grid.header(), "`grid` vs DEM")
                .map_err(|e| Error::Config(e.to_string()))?;
        }
        let mut features = FeatureSet::default();
        for layer in &self.layers {
            features.extend(read_vector_file(
                &Self::resolve(base, &layer.path),
                Some(layer.role),
            )?);
        }
        let sites = ObservedSite::from_features(&features)?;
        Ok(Inputs {
            dem: Dem::new(grid),
            features,
            sites,
        })
    }
}

fn strip_prefix(e: &Error) -> String {
    match e {
        Error::Config(msg) => msg.clone(),
        other => other.to_string(),
    }
}
