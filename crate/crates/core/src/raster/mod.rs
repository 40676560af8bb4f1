//! Raster containers, vector geometry, rasterization and distance transforms.
//!
//! All grids are north-up: row 0 is the northernmost row and the header's
//! origin is the south-west corner of the extent.

mod edt;
mod geometry;
mod grid;
mod rasterize;

pub use edt::{distance_transform, squared_cell_distances};
pub use geometry::{polygon_area, polygon_perimeter, Feature, FeatureSet, Geometry, Point, Role};
pub use grid::{Grid, GridHeader, Mask, DEFAULT_NODATA};
pub use rasterize::{
    burn_feature, burn_point, burn_polygon, burn_polyline, rasterize_polygon, rasterize_polyline,
    segment_hits_box,
};
