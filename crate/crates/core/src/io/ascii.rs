//! ESRI ASCII grid reader and writer.
//!
//! Header keys are matched case-insensitively. `xllcenter`/`yllcenter` are
//! accepted and shifted to corner coordinates. The writer always emits
//! `ncols, nrows, xllcorner, yllcorner, cellsize, NODATA_value` in that
//! order and prints values with the shortest representation that parses
//! back to the same `f64`.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::io::write_file_atomic;
use crate::raster::{Grid, GridHeader, DEFAULT_NODATA};

pub fn read_ascii_grid(path: &Path) -> Result<Grid> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_ascii_grid(&text).map_err(|msg| Error::format(path, msg))
}

pub fn write_ascii_grid(grid: &Grid, path: &Path) -> Result<()> {
    write_file_atomic(path, format_ascii_grid(grid).as_bytes())
}

pub fn format_ascii_grid(grid: &Grid) -> String {
    let h = grid.header();
    let mut out = String::with_capacity(h.len() * 6 + 128);
    let _ = writeln!(out, "ncols {}", h.ncols);
    let _ = writeln!(out, "nrows {}", h.nrows);
    let _ = writeln!(out, "xllcorner {}", h.x_origin);
    let _ = writeln!(out, "yllcorner {}", h.y_origin);
    let _ = writeln!(out, "cellsize {}", h.cellsize);
    let _ = writeln!(out, "NODATA_value {}", h.nodata);
    for row in grid.cells().chunks(h.ncols) {
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{v}");
        }
        out.push('\n');
    }
    out
}

#[derive(Default)]
struct RawHeader {
    ncols: Option<usize>,
    nrows: Option<usize>,
    x: Option<(f64, bool)>,
    y: Option<(f64, bool)>,
    cellsize: Option<f64>,
    nodata: Option<f64>,
}

fn parse_number(token: &str, what: &str) -> std::result::Result<f64, String> {
    token
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| format!("{what}: invalid number `{token}`"))
}

/// Parses grid text; errors are plain messages with line/row/col context.
pub fn parse_ascii_grid(text: &str) -> std::result::Result<Grid, String> {
    let mut raw = RawHeader::default();
    let mut lines = text.lines().enumerate().peekable();

    while let Some(&(lineno, line)) = lines.peek() {
        let mut tokens = line.split_whitespace();
        let Some(key) = tokens.next() else {
            lines.next();
            continue;
        };
        if key.parse::<f64>().is_ok() {
            break;
        }
        let value = tokens
            .next()
            .ok_or_else(|| format!("line {}: header key `{key}` has no value", lineno + 1))?;
        if tokens.next().is_some() {
            return Err(format!(
                "line {}: trailing tokens after `{key}`",
                lineno + 1
            ));
        }
        let ctx = format!("line {}", lineno + 1);
        let as_count = |v: &str| -> std::result::Result<usize, String> {
            v.parse::<usize>()
                .map_err(|_| format!("{ctx}: `{key}` must be a non-negative integer, got `{v}`"))
        };
        match key.to_ascii_lowercase().as_str() {
            "ncols" => raw.ncols = Some(as_count(value)?),
            "nrows" => raw.nrows = Some(as_count(value)?),
            "xllcorner" => raw.x = Some((parse_number(value, &ctx)?, false)),
            "xllcenter" => raw.x = Some((parse_number(value, &ctx)?, true)),
            "yllcorner" => raw.y = Some((parse_number(value, &ctx)?, false)),
            "yllcenter" => raw.y = Some((parse_number(value, &ctx)?, true)),
            "cellsize" => raw.cellsize = Some(parse_number(value, &ctx)?),
            "nodata_value" => raw.nodata = Some(parse_number(value, &ctx)?),
            other => return Err(format!("{ctx}: unknown header key `{other}`")),
        }
        lines.next();
    }

    let missing = |k: &str| format!("header is missing `{k}`");
    let ncols = raw.ncols.ok_or_else(|| missing("ncols"))?;
    let nrows = raw.nrows.ok_or_else(|| missing("nrows"))?;
    let cellsize = raw.cellsize.ok_or_else(|| missing("cellsize"))?;
    let (x, x_center) = raw.x.ok_or_else(|| missing("xllcorner"))?;
    let (y, y_center) = raw.y.ok_or_else(|| missing("yllcorner"))?;
    let x_origin = if x_center { x - cellsize * 0.5 } else { x };
    let y_origin = if y_center { y - cellsize * 0.5 } else { y };
    let nodata = raw.nodata.unwrap_or(DEFAULT_NODATA);
    let header = GridHeader::new(ncols, nrows, x_origin, y_origin, cellsize, nodata)
        .map_err(|e| e.to_string())?;

    let mut cells = Vec::with_capacity(header.len());
    let mut row = 0;
    for (lineno, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        if row == nrows {
            return Err(format!(
                "line {}: expected {nrows} data rows, found more",
                lineno + 1
            ));
        }
        let before = cells.len();
        for (col, token) in line.split_whitespace().enumerate() {
            if col >= ncols {
                return Err(format!(
                    "row {row}: expected {ncols} values, found more (line {})",
                    lineno + 1
                ));
            }
            let v = parse_number(token, &format!("row {row}, col {col}"))?;
            cells.push(v);
        }
        let got = cells.len() - before;
        if got != ncols {
            return Err(format!(
                "row {row}: expected {ncols} values, got {got} (line {})",
                lineno + 1
            ));
        }
        row += 1;
    }
    if row != nrows {
        return Err(format!("truncated data: expected {nrows} rows, got {row}"));
    }
    Grid::new(header, cells).map_err(|e| e.to_string())
}
