//! Slope from the DEM and the altitude/slope note tables.
//!
//! Both tables use half-open bands `[lower, upper)`. Altitude notes run from
//! 20 (below 200 m) down to 1 (2000 m and above) in 100 m steps. Slope notes
//! run from 8 (flatter than 3 degrees, including slopes under 1 degree) down
//! to 1 (25 degrees and steeper).

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::raster::{Grid, GridHeader, DEFAULT_NODATA};

/// Lower bounds of altitude bands after the first, in meters.
pub const ALTITUDE_BREAKS: [f64; 19] = [
    200.0, 300.0, 400.0, 500.0, 600.0, 700.0, 800.0, 900.0, 1000.0, 1100.0, 1200.0, 1300.0, 1400.0,
    1500.0, 1600.0, 1700.0, 1800.0, 1900.0, 2000.0,
];

/// Lower bounds of slope bands after the first, in degrees.
pub const SLOPE_BREAKS: [f64; 7] = [3.0, 5.0, 7.0, 10.0, 15.0, 20.0, 25.0];

pub const MAX_ALTITUDE_NOTE: u8 = 20;
pub const MAX_SLOPE_NOTE: u8 = 8;

/// Elevation model in meters.
#[derive(Debug, Clone, PartialEq)]
pub struct Dem(Grid);

impl Dem {
    pub fn new(grid: Grid) -> Self {
        Dem(grid)
    }

    pub fn grid(&self) -> &Grid {
        &self.0
    }

    pub fn into_grid(self) -> Grid {
        self.0
    }
}

impl From<Grid> for Dem {
    fn from(grid: Grid) -> Self {
        Dem(grid)
    }
}

pub fn altitude_note(elevation: f64) -> Result<u8> {
    if !elevation.is_finite() {
        return Err(Error::NonFinite(elevation));
    }
    let passed = ALTITUDE_BREAKS
        .iter()
        .take_while(|&&b| elevation >= b)
        .count();
    Ok(MAX_ALTITUDE_NOTE - passed as u8)
}

pub fn slope_note(slope: f64) -> Result<u8> {
    if !slope.is_finite() {
        return Err(Error::NonFinite(slope));
    }
    if slope < 0.0 {
        return Err(Error::NegativeSlope(slope));
    }
    let passed = SLOPE_BREAKS.iter().take_while(|&&b| slope >= b).count();
    Ok(MAX_SLOPE_NOTE - passed as u8)
}

/// Slope in degrees using Horn's 3x3 weighted differences.
///
/// Neighbors outside the grid are replaced by the nearest edge cell and
/// nodata neighbors by the center value, so output nodata matches the DEM.
/// Output nodata is [`DEFAULT_NODATA`].
pub fn slope_degrees(dem: &Dem) -> Result<Grid> {
    let grid = dem.grid();
    let h = *grid.header();
    if h.ncols < 3 || h.nrows < 3 {
        return Err(Error::DemTooSmall {
            ncols: h.ncols,
            nrows: h.nrows,
        });
    }
    let nodata = h.nodata;
    let (ncols, nrows) = (h.ncols as isize, h.nrows as isize);
    let eight_cs = 8.0 * h.cellsize;

    let mut out = vec![DEFAULT_NODATA; h.len()];
    out.par_chunks_mut(h.ncols)
        .enumerate()
        .for_each(|(row, out_row)| {
            let row = row as isize;
            for (col, slot) in out_row.iter_mut().enumerate() {
                let col = col as isize;
                let center = grid.get(row as usize, col as usize);
                if center == nodata {
                    continue;
                }
                let z = |dr: isize, dc: isize| {
                    let r = (row + dr).clamp(0, nrows - 1) as usize;
                    let c = (col + dc).clamp(0, ncols - 1) as usize;
                    let v = grid.get(r, c);
                    if v == nodata {
                        center
                    } else {
                        v
                    }
                };
                let (a, b, c) = (z(-1, -1), z(-1, 0), z(-1, 1));
                let (d, f) = (z(0, -1), z(0, 1));
                let (g, hh, i) = (z(1, -1), z(1, 0), z(1, 1));
                let dzdx = ((c + 2.0 * f + i) - (a + 2.0 * d + g)) / eight_cs;
                let dzdy = ((a + 2.0 * b + c) - (g + 2.0 * hh + i)) / eight_cs;
                *slot = dzdx.hypot(dzdy).atan().to_degrees();
            }
        });
    Grid::new(derived_header(&h), out)
}

/// Header for grids derived from `h`, with the standard nodata sentinel.
pub(crate) fn derived_header(h: &GridHeader) -> GridHeader {
    GridHeader {
        nodata: DEFAULT_NODATA,
        ..*h
    }
}

/// Altitude and slope note grids; nodata wherever the DEM is nodata.
pub fn classify_dem(dem: &Dem) -> Result<(Grid, Grid)> {
    let slope = slope_degrees(dem)?;
    let grid = dem.grid();
    let h = derived_header(grid.header());
    let mut alt = Vec::with_capacity(h.len());
    let mut slp = Vec::with_capacity(h.len());
    for (&z, &s) in grid.cells().iter().zip(slope.cells()) {
        if z == grid.nodata() {
            alt.push(DEFAULT_NODATA);
            slp.push(DEFAULT_NODATA);
        } else {
            alt.push(f64::from(altitude_note(z)?));
            slp.push(f64::from(slope_note(s)?));
        }
    }
    Ok((Grid::new(h, alt)?, Grid::new(h, slp)?))
}
