//! Run manifest: what was computed, from what, with which settings.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::io::RunConfig;
use crate::raster::GridHeader;
use crate::scoring::{score_bounds, VulnClass, VulnerabilityMap, WeightConfig};
use crate::validation::ClassCounts;

pub const MANIFEST_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Formats {
    pub manifest: u32,
    pub grid: String,
    pub image: String,
    pub vector: String,
}

impl Default for Formats {
    fn default() -> Self {
        Formats {
            manifest: MANIFEST_VERSION,
            grid: "esri-ascii-grid".into(),
            image: "ppm-p6".into(),
            vector: "geojson".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreBounds {
    pub min: f64,
    pub max: f64,
    /// Scores below this value are classed very low.
    pub class_floor: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub formats: Formats,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub config: RunConfig,
    pub weights: WeightConfig,
    pub header: GridHeader,
    pub score_bounds: ScoreBounds,
    pub class_cells: ClassCounts,
    /// SHA-256 of each output file, keyed by file name.
    pub outputs: BTreeMap<String, String>,
}

impl Manifest {
    pub fn new(config: &RunConfig, map: &VulnerabilityMap) -> Self {
        let (min, max) = score_bounds(&map.weights);
        let hist = map.class_histogram();
        let mut class_cells = ClassCounts::default();
        for class in VulnClass::ALL {
            class_cells.set(class, hist[class.index()]);
        }
        let mut config = config.clone();
        config.output_dir = None;
        Manifest {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            formats: Formats::default(),
            seed: config.seed,
            weights: map.weights,
            config,
            header: *map.header(),
            score_bounds: ScoreBounds {
                min,
                max,
                class_floor: 5.0,
            },
            class_cells,
            outputs: BTreeMap::new(),
        }
    }

    pub fn record_output(&mut self, name: &str, bytes: &[u8]) {
        self.outputs
            .insert(name.into(), hex::encode(Sha256::digest(bytes)));
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("in-memory JSON");
        text.push('\n');
        text
    }
}
