//! Binary PPM (P6) rendering of class grids, one pixel per cell.

use std::path::Path;

use crate::error::{Error, Result};
use crate::io::write_file_atomic;
use crate::raster::Grid;
use crate::scoring::VulnClass;

/// RGB per class, very low to very high.
pub const CLASS_PALETTE: [[u8; 3]; 7] = [
    [26, 150, 65],
    [166, 217, 106],
    [255, 255, 191],
    [253, 174, 97],
    [244, 109, 67],
    [215, 48, 39],
    [165, 0, 38],
];

pub const NODATA_COLOR: [u8; 3] = [255, 255, 255];

pub fn render_ppm(classes: &Grid) -> Result<Vec<u8>> {
    let h = classes.header();
    let head = format!("P6\n{} {}\n255\n", h.ncols, h.nrows);
    let mut out = Vec::with_capacity(head.len() + 3 * h.len());
    out.extend_from_slice(head.as_bytes());
    for (i, &v) in classes.cells().iter().enumerate() {
        let rgb = if v == h.nodata {
            NODATA_COLOR
        } else {
            let class = (v.fract() == 0.0 && (1.0..=7.0).contains(&v))
                .then(|| VulnClass::from_code(v as u8))
                .flatten()
                .ok_or_else(|| {
                    Error::InvalidGrid(format!(
                        "cell at row {}, col {} is not a class code: {v}",
                        i / h.ncols,
                        i % h.ncols
                    ))
                })?;
            CLASS_PALETTE[class.index()]
        };
        out.extend_from_slice(&rgb);
    }
    Ok(out)
}

pub fn render_map(classes: &Grid, path: &Path) -> Result<()> {
    write_file_atomic(path, &render_ppm(classes)?)
}
