//! Weighted summation of notes into a score grid and the seven class bins.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factors::{
    build_factor_stack, build_proximity, filter_landcover, rasterize_role, FactorKind, FactorStack,
    ProximityGrid,
};
use crate::raster::{FeatureSet, Grid, GridHeader, Role, DEFAULT_NODATA};
use crate::terrain::{classify_dem, derived_header, Dem, MAX_ALTITUDE_NOTE, MAX_SLOPE_NOTE};

/// Multipliers for the three restrictive notes and the six factor presences.
///
/// Defaults give unit weight to altitude, slope and proximity, double weight
/// to rivers and floodplains, and unit weight to the other four factors, for
/// a score range of 3 to 39.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WeightConfig {
    pub altitude: f64,
    pub slope: f64,
    pub proximity: f64,
    pub rivers_creeks: f64,
    pub floodplain: f64,
    pub pasture: f64,
    pub degraded_land: f64,
    pub loam_site: f64,
    pub local_road: f64,
}

impl Default for WeightConfig {
    fn default() -> Self {
        WeightConfig {
            altitude: 1.0,
            slope: 1.0,
            proximity: 1.0,
            rivers_creeks: 2.0,
            floodplain: 2.0,
            pasture: 1.0,
            degraded_land: 1.0,
            loam_site: 1.0,
            local_road: 1.0,
        }
    }
}

impl WeightConfig {
    /// All nine weights set to zero; handy as a base for overrides.
    pub fn zero() -> Self {
        WeightConfig {
            altitude: 0.0,
            slope: 0.0,
            proximity: 0.0,
            rivers_creeks: 0.0,
            floodplain: 0.0,
            pasture: 0.0,
            degraded_land: 0.0,
            loam_site: 0.0,
            local_road: 0.0,
        }
    }

    pub fn factor(&self, kind: FactorKind) -> f64 {
        match kind {
            FactorKind::RiversCreeks => self.rivers_creeks,
            FactorKind::Floodplain => self.floodplain,
            FactorKind::Pasture => self.pasture,
            FactorKind::DegradedLand => self.degraded_land,
            FactorKind::LoamSite => self.loam_site,
            FactorKind::LocalRoad => self.local_road,
        }
    }

    pub fn factor_mut(&mut self, kind: FactorKind) -> &mut f64 {
        match kind {
            FactorKind::RiversCreeks => &mut self.rivers_creeks,
            FactorKind::Floodplain => &mut self.floodplain,
            FactorKind::Pasture => &mut self.pasture,
            FactorKind::DegradedLand => &mut self.degraded_land,
            FactorKind::LoamSite => &mut self.loam_site,
            FactorKind::LocalRoad => &mut self.local_road,
        }
    }

    fn all(&self) -> [f64; 9] {
        [
            self.altitude,
            self.slope,
            self.proximity,
            self.rivers_creeks,
            self.floodplain,
            self.pasture,
            self.degraded_land,
            self.loam_site,
            self.local_road,
        ]
    }

    pub fn validate(&self) -> Result<()> {
        let all = self.all();
        if let Some(w) = all.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::InvalidWeights(format!(
                "weights must be finite and >= 0, got {w}"
            )));
        }
        if all.iter().all(|&w| w == 0.0) {
            return Err(Error::InvalidWeights(
                "at least one weight must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Weighted sum for one cell. Terms are added in a fixed order.
    #[inline]
    pub fn score(&self, altitude: f64, slope: f64, proximity: f64, present: [bool; 6]) -> f64 {
        let mut s = self.altitude * altitude + self.slope * slope + self.proximity * proximity;
        for kind in FactorKind::ALL {
            if present[kind.index()] {
                s += self.factor(kind);
            }
        }
        s
    }
}

/// Seven ordered vulnerability classes, 5 points wide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VulnClass {
    VeryLow = 1,
    Low = 2,
    Insignificant = 3,
    Moderate = 4,
    Significant = 5,
    High = 6,
    VeryHigh = 7,
}

impl VulnClass {
    pub const ALL: [VulnClass; 7] = [
        VulnClass::VeryLow,
        VulnClass::Low,
        VulnClass::Insignificant,
        VulnClass::Moderate,
        VulnClass::Significant,
        VulnClass::High,
        VulnClass::VeryHigh,
    ];

    /// Cell code used in class grids (1 = very low ... 7 = very high).
    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: u8) -> Option<VulnClass> {
        VulnClass::ALL.get((code as usize).wrapping_sub(1)).copied()
    }

    pub fn index(self) -> usize {
        self as usize - 1
    }

    pub fn label(self) -> &'static str {
        match self {
            VulnClass::VeryLow => "very_low",
            VulnClass::Low => "low",
            VulnClass::Insignificant => "insignificant",
            VulnClass::Moderate => "moderate",
            VulnClass::Significant => "significant",
            VulnClass::High => "high",
            VulnClass::VeryHigh => "very_high",
        }
    }
}

impl fmt::Display for VulnClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for VulnClass {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        VulnClass::ALL
            .into_iter()
            .find(|c| c.label() == s)
            .ok_or_else(|| s.to_string())
    }
}

/// Lower edges of classes `low` through `very_high`.
const CLASS_BREAKS: [f64; 6] = [10.0, 15.0, 20.0, 25.0, 30.0, 35.0];

/// Bins `[5,10) [10,15) ... [30,35) [35,inf)`; scores under 5 count as very low.
pub fn classify_score(score: f64) -> Result<VulnClass> {
    if !score.is_finite() {
        return Err(Error::NonFinite(score));
    }
    let passed = CLASS_BREAKS.iter().take_while(|&&b| score >= b).count();
    Ok(VulnClass::ALL[passed])
}

/// Smallest and largest score reachable inside the buffer.
pub fn score_bounds(weights: &WeightConfig) -> (f64, f64) {
    let min = weights.score(1.0, 1.0, 1.0, [false; 6]);
    let max = weights.score(
        f64::from(MAX_ALTITUDE_NOTE),
        f64::from(MAX_SLOPE_NOTE),
        3.0,
        [true; 6],
    );
    (min, max)
}

pub fn score_map(
    altitude: &Grid,
    slope: &Grid,
    proximity: &ProximityGrid,
    stack: &FactorStack,
    weights: &WeightConfig,
) -> Result<Grid> {
    let h = *altitude.header();
    h.ensure_aligned(slope.header(), "slope notes")?;
    h.ensure_aligned(proximity.header(), "proximity grid")?;
    h.ensure_aligned(stack.header(), "factor stack")?;
    let header = GridHeader {
        nodata: DEFAULT_NODATA,
        ..h
    };
    Grid::from_fn(header, |row, col| {
        let prox = proximity.note(row, col);
        match (altitude.value(row, col), slope.value(row, col)) {
            (Some(alt), Some(slp)) if prox >= 1 => {
                let present = FactorKind::ALL.map(|k| stack.present(k, row, col));
                weights.score(alt, slp, f64::from(prox), present)
            }
            _ => DEFAULT_NODATA,
        }
    })
}

/// Class codes for a score grid; nodata is carried over.
pub fn classify_grid(scores: &Grid) -> Result<Grid> {
    let header = *scores.header();
    let cells = scores
        .cells()
        .iter()
        .map(|&s| {
            if s == header.nodata {
                Ok(header.nodata)
            } else {
                classify_score(s).map(|c| f64::from(c.code()))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Grid::new(header, cells)
}

/// Scores and classes over the analysis extent.
#[derive(Debug, Clone, PartialEq)]
pub struct VulnerabilityMap {
    pub scores: Grid,
    pub classes: Grid,
    pub weights: WeightConfig,
}

impl VulnerabilityMap {
    pub fn header(&self) -> &GridHeader {
        self.scores.header()
    }

    pub fn class_at(&self, row: usize, col: usize) -> Option<VulnClass> {
        self.classes
            .value(row, col)
            .and_then(|code| VulnClass::from_code(code as u8))
    }

    /// Number of cells per class, in class order.
    pub fn class_histogram(&self) -> [usize; 7] {
        let mut counts = [0; 7];
        for &c in self.classes.cells() {
            if let Some(class) = (c != self.classes.nodata())
                .then(|| VulnClass::from_code(c as u8))
                .flatten()
            {
                counts[class.index()] += 1;
            }
        }
        counts
    }
}

/// Runs the whole chain: DEM notes, area filter, proximity, factor
/// presences, weighted score and classes.
pub fn build_vulnerability_map(
    dem: &Dem,
    features: &FeatureSet,
    weights: &WeightConfig,
    radii: &[f64],
    min_area: f64,
) -> Result<VulnerabilityMap> {
    weights.validate()?;
    features.validate()?;
    let header = derived_header(dem.grid().header());
    let (altitude, slope) = classify_dem(dem)?;
    let landcover = filter_landcover(features, min_area)?;
    let builtup = rasterize_role(features, Role::Builtup, &header)?;
    let exclusions = rasterize_role(features, Role::Exclusion, &header)?;
    let proximity = build_proximity(&builtup, Some(&exclusions), radii)?;
    let stack = build_factor_stack(&landcover, &proximity, &header)?;
    let scores = score_map(&altitude, &slope, &proximity, &stack, weights)?;
    let classes = classify_grid(&scores)?;
    Ok(VulnerabilityMap {
        scores,
        classes,
        weights: *weights,
    })
}
