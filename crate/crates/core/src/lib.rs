//! Illegal-dumping vulnerability mapping for rural areas.
//!
//! The pipeline rates every cell within 1 km of built-up areas by summing
//! weighted notes for three restrictive factors (altitude, slope, proximity to
//! built-up areas) and six susceptible land features (rivers and creeks,
//! floodplains, pastures, degraded land, old loam pits, local roads). The
//! score is then binned into seven vulnerability classes and can be checked
//! against observed dump sites.
//!
//! - [`raster`]: grids, masks, rasterization, exact Euclidean distance transform
//! - [`terrain`]: Horn slope and the altitude/slope note tables
//! - [`factors`]: proximity notes and susceptible-factor presence layers
//! - [`scoring`]: weighted sum, class bins, end-to-end map builder
//! - [`validation`]: tallies of observed sites per class
//! - [`synth`]: seeded synthetic landscapes
//! - [`io`]: ESRI ASCII grids, GeoJSON, PPM, run configuration, manifests

pub mod cli;
pub mod error;
pub mod factors;
pub mod io;
pub mod raster;
pub mod scoring;
pub mod synth;
pub mod terrain;
pub mod validation;

pub use error::{Error, Result};
pub use factors::{FactorKind, FactorStack, ProximityGrid};
pub use raster::{Feature, FeatureSet, Geometry, Grid, GridHeader, Mask, Point, Role};
pub use scoring::{VulnClass, VulnerabilityMap, WeightConfig};
pub use terrain::Dem;
pub use validation::{ObservedSite, ValidationReport};
