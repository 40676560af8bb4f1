//! Proximity notes around built-up areas and the susceptible-factor layers.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raster::{
    burn_feature, distance_transform, polygon_area, FeatureSet, Geometry, Grid, GridHeader, Mask,
    Role,
};

/// Buffer radii in meters; cells within the i-th radius get note `len - i`.
pub const DEFAULT_RADII: [f64; 3] = [250.0, 500.0, 1000.0];

/// Land-cover polygons must be strictly larger than this to count (5 ha).
pub const DEFAULT_MIN_AREA: f64 = 50_000.0;

/// Land features that attract dumping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorKind {
    RiversCreeks,
    Floodplain,
    Pasture,
    DegradedLand,
    LoamSite,
    LocalRoad,
}

impl FactorKind {
    pub const ALL: [FactorKind; 6] = [
        FactorKind::RiversCreeks,
        FactorKind::Floodplain,
        FactorKind::Pasture,
        FactorKind::DegradedLand,
        FactorKind::LoamSite,
        FactorKind::LocalRoad,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            FactorKind::RiversCreeks => "rivers_creeks",
            FactorKind::Floodplain => "floodplain",
            FactorKind::Pasture => "pasture",
            FactorKind::DegradedLand => "degraded_land",
            FactorKind::LoamSite => "loam_site",
            FactorKind::LocalRoad => "local_road",
        }
    }

    pub fn from_role(role: Role) -> Option<FactorKind> {
        match role {
            Role::River => Some(FactorKind::RiversCreeks),
            Role::Floodplain => Some(FactorKind::Floodplain),
            Role::Pasture => Some(FactorKind::Pasture),
            Role::Degraded => Some(FactorKind::DegradedLand),
            Role::Loam => Some(FactorKind::LoamSite),
            Role::Road => Some(FactorKind::LocalRoad),
            Role::Builtup | Role::Exclusion | Role::Sites => None,
        }
    }

    /// Land-cover kinds subject to the minimum-area filter.
    pub fn is_area(self) -> bool {
        matches!(
            self,
            FactorKind::Floodplain
                | FactorKind::Pasture
                | FactorKind::DegradedLand
                | FactorKind::LoamSite
        )
    }
}

impl fmt::Display for FactorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Proximity notes: 3 within the first radius (built-up cells included),
/// down to 1 within the last, 0 beyond it or in excluded areas.
#[derive(Debug, Clone, PartialEq)]
pub struct ProximityGrid(Grid);

impl ProximityGrid {
    pub fn grid(&self) -> &Grid {
        &self.0
    }

    pub fn header(&self) -> &GridHeader {
        self.0.header()
    }

    #[inline]
    pub fn note(&self, row: usize, col: usize) -> u8 {
        self.0.get(row, col) as u8
    }

    pub fn in_buffer(&self, row: usize, col: usize) -> bool {
        self.note(row, col) >= 1
    }
}

pub fn validate_radii(radii: &[f64]) -> Result<()> {
    if radii.is_empty() {
        return Err(Error::InvalidRadii(
            "at least one radius is required".into(),
        ));
    }
    if radii.len() > u8::MAX as usize {
        return Err(Error::InvalidRadii("too many radii".into()));
    }
    if !radii.iter().all(|r| r.is_finite() && *r >= 0.0) {
        return Err(Error::InvalidRadii(format!(
            "radii must be finite and >= 0: {radii:?}"
        )));
    }
    if radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidRadii(format!(
            "radii must be strictly increasing: {radii:?}"
        )));
    }
    Ok(())
}

/// Note for a distance to built-up under the given radii.
pub fn proximity_note(distance: f64, radii: &[f64]) -> u8 {
    match radii.iter().position(|&r| distance <= r) {
        Some(i) => (radii.len() - i) as u8,
        None => 0,
    }
}

pub fn build_proximity(
    builtup: &Mask,
    exclusions: Option<&Mask>,
    radii: &[f64],
) -> Result<ProximityGrid> {
    validate_radii(radii)?;
    if let Some(ex) = exclusions {
        builtup
            .header()
            .ensure_aligned(ex.header(), "exclusion mask")?;
    }
    let distance = distance_transform(builtup)?;
    let header = *builtup.header();
    let cells = distance
        .cells()
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            let excluded = exclusions.is_some_and(|ex| ex.cells()[i]);
            if excluded {
                0.0
            } else {
                f64::from(proximity_note(d, radii))
            }
        })
        .collect();
    Ok(ProximityGrid(Grid::new(header, cells)?))
}

/// Drops land-cover polygons whose area is not strictly above `min_area`.
/// Lines, points and non-area roles pass through untouched.
pub fn filter_landcover(features: &FeatureSet, min_area: f64) -> Result<FeatureSet> {
    if !(min_area.is_finite() && min_area >= 0.0) {
        return Err(Error::Config(format!(
            "min_area must be >= 0, got {min_area}"
        )));
    }
    let kept = features
        .features
        .iter()
        .filter(|f| {
            let area_kind = FactorKind::from_role(f.role).is_some_and(FactorKind::is_area);
            match &f.geometry {
                Geometry::Polygon(ring) if area_kind => polygon_area(ring) > min_area,
                _ => true,
            }
        })
        .cloned()
        .collect();
    Ok(FeatureSet::new(kept))
}

/// Union of every feature with the given role, rasterized on `header`.
pub fn rasterize_role(features: &FeatureSet, role: Role, header: &GridHeader) -> Result<Mask> {
    let mut mask = Mask::new(*header);
    for (i, f) in features.features.iter().enumerate() {
        if f.role == role {
            f.validate(i)?;
            burn_feature(&mut mask, f);
        }
    }
    Ok(mask)
}

/// One presence layer per factor kind, cleared outside the buffer.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorStack {
    layers: [Mask; 6],
}

impl FactorStack {
    pub fn layer(&self, kind: FactorKind) -> &Mask {
        &self.layers[kind.index()]
    }

    #[inline]
    pub fn present(&self, kind: FactorKind, row: usize, col: usize) -> bool {
        self.layers[kind.index()].get(row, col)
    }

    pub fn header(&self) -> &GridHeader {
        self.layers[0].header()
    }
}

pub fn build_factor_stack(
    features: &FeatureSet,
    proximity: &ProximityGrid,
    header: &GridHeader,
) -> Result<FactorStack> {
    header.ensure_aligned(proximity.header(), "proximity grid")?;
    let mut layers: [Mask; 6] = std::array::from_fn(|_| Mask::new(*header));
    for (i, f) in features.features.iter().enumerate() {
        f.validate(i)?;
        if let Some(kind) = FactorKind::from_role(f.role) {
            burn_feature(&mut layers[kind.index()], f);
        }
    }
    for layer in &mut layers {
        layer.retain(|r, c| proximity.in_buffer(r, c));
    }
    Ok(FactorStack { layers })
}
