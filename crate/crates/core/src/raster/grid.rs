use crate::error::{Error, Result};
use crate::raster::Point;

/// Sentinel used when no nodata value is given.
pub const DEFAULT_NODATA: f64 = -9999.0;

/// Georeferencing of a north-up raster in planar meters.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GridHeader {
    pub ncols: usize,
    pub nrows: usize,
    /// West edge of the extent.
    pub x_origin: f64,
    /// South edge of the extent.
    pub y_origin: f64,
    pub cellsize: f64,
    #[serde(default = "default_nodata")]
    pub nodata: f64,
}

fn default_nodata() -> f64 {
    DEFAULT_NODATA
}

impl GridHeader {
    pub fn new(
        ncols: usize,
        nrows: usize,
        x_origin: f64,
        y_origin: f64,
        cellsize: f64,
        nodata: f64,
    ) -> Result<Self> {
        let header = GridHeader {
            ncols,
            nrows,
            x_origin,
            y_origin,
            cellsize,
            nodata,
        };
        header.validate()?;
        Ok(header)
    }

    pub fn validate(&self) -> Result<()> {
        if self.ncols == 0 || self.nrows == 0 {
            return Err(Error::InvalidHeader(format!(
                "dimensions must be positive, got {}x{}",
                self.ncols, self.nrows
            )));
        }
        if !(self.cellsize.is_finite() && self.cellsize > 0.0) {
            return Err(Error::InvalidHeader(format!(
                "cellsize must be positive, got {}",
                self.cellsize
            )));
        }
        if !self.x_origin.is_finite() || !self.y_origin.is_finite() {
            return Err(Error::InvalidHeader("origin must be finite".into()));
        }
        if !self.nodata.is_finite() {
            return Err(Error::InvalidHeader("nodata must be finite".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.ncols * self.nrows
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn index(&self, row: usize, col: usize) -> usize {
        debug_assert!(row < self.nrows && col < self.ncols);
        row * self.ncols + col
    }

    pub fn x_max(&self) -> f64 {
        self.x_origin + self.ncols as f64 * self.cellsize
    }

    pub fn y_max(&self) -> f64 {
        self.y_origin + self.nrows as f64 * self.cellsize
    }

    /// X coordinate of the center of column `col`.
    #[inline]
    pub fn col_center(&self, col: usize) -> f64 {
        self.x_origin + (col as f64 + 0.5) * self.cellsize
    }

    /// Y coordinate of the center of row `row` (row 0 is north).
    #[inline]
    pub fn row_center(&self, row: usize) -> f64 {
        self.y_origin + ((self.nrows - 1 - row) as f64 + 0.5) * self.cellsize
    }

    pub fn cell_center(&self, row: usize, col: usize) -> Point {
        Point::new(self.col_center(col), self.row_center(row))
    }

    /// Closed square `(xmin, ymin, xmax, ymax)` covered by a cell.
    pub fn cell_bounds(&self, row: usize, col: usize) -> (f64, f64, f64, f64) {
        let from_south = (self.nrows - 1 - row) as f64;
        let xmin = self.x_origin + col as f64 * self.cellsize;
        let ymin = self.y_origin + from_south * self.cellsize;
        (xmin, ymin, xmin + self.cellsize, ymin + self.cellsize)
    }

    /// Maps a planar point to `(row, col)` by flooring. Points on the west
    /// and south edges are inside, points on the east and north edges are not.
    pub fn point_to_cell(&self, p: Point) -> Option<(usize, usize)> {
        if !p.x.is_finite() || !p.y.is_finite() {
            return None;
        }
        let fx = ((p.x - self.x_origin) / self.cellsize).floor();
        let fy = ((p.y - self.y_origin) / self.cellsize).floor();
        if fx < 0.0 || fy < 0.0 || fx >= self.ncols as f64 || fy >= self.nrows as f64 {
            return None;
        }
        let col = fx as usize;
        let from_south = fy as usize;
        Some((self.nrows - 1 - from_south, col))
    }

    /// Same extent and resolution; the nodata sentinel may differ.
    pub fn aligned_with(&self, other: &GridHeader) -> bool {
        self.ncols == other.ncols
            && self.nrows == other.nrows
            && self.x_origin == other.x_origin
            && self.y_origin == other.y_origin
            && self.cellsize == other.cellsize
    }

    pub fn ensure_aligned(&self, other: &GridHeader, what: &str) -> Result<()> {
        if self.aligned_with(other) {
            Ok(())
        } else {
            Err(Error::Misaligned(format!(
                "{what}: {}x{} @ ({}, {}) cs {} vs {}x{} @ ({}, {}) cs {}",
                self.ncols,
                self.nrows,
                self.x_origin,
                self.y_origin,
                self.cellsize,
                other.ncols,
                other.nrows,
                other.x_origin,
                other.y_origin,
                other.cellsize
            )))
        }
    }
}

/// Row-major numeric raster; cells equal to `header.nodata` carry no value.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    header: GridHeader,
    cells: Vec<f64>,
}

impl Grid {
    pub fn new(header: GridHeader, cells: Vec<f64>) -> Result<Self> {
        header.validate()?;
        if cells.len() != header.len() {
            return Err(Error::InvalidGrid(format!(
                "expected {} cells, got {}",
                header.len(),
                cells.len()
            )));
        }
        if let Some(pos) = cells.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "non-finite value at row {}, col {}",
                pos / header.ncols,
                pos % header.ncols
            )));
        }
        Ok(Grid { header, cells })
    }

    pub fn filled(header: GridHeader, value: f64) -> Self {
        Grid {
            header,
            cells: vec![value; header.len()],
        }
    }

    /// Builds a grid from a per-cell function of `(row, col)`.
    pub fn from_fn(header: GridHeader, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut cells = Vec::with_capacity(header.len());
        for row in 0..header.nrows {
            for col in 0..header.ncols {
                cells.push(f(row, col));
            }
        }
        Grid::new(header, cells)
    }

    pub fn header(&self) -> &GridHeader {
        &self.header
    }

    pub fn cells(&self) -> &[f64] {
        &self.cells
    }

    pub fn into_cells(self) -> Vec<f64> {
        self.cells
    }

    pub fn nodata(&self) -> f64 {
        self.header.nodata
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.cells[self.header.index(row, col)]
    }

    /// Cell value, or `None` on nodata.
    #[inline]
    pub fn value(&self, row: usize, col: usize) -> Option<f64> {
        let v = self.get(row, col);
        (v != self.header.nodata).then_some(v)
    }

    #[inline]
    pub fn is_nodata(&self, row: usize, col: usize) -> bool {
        self.get(row, col) == self.header.nodata
    }

    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        let i = self.header.index(row, col);
        self.cells[i] = value;
    }

    pub fn valid_count(&self) -> usize {
        self.cells
            .iter()
            .filter(|&&v| v != self.header.nodata)
            .count()
    }
}

/// Boolean raster sharing the grid geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct Mask {
    header: GridHeader,
    cells: Vec<bool>,
}

impl Mask {
    pub fn new(header: GridHeader) -> Self {
        Mask {
            header,
            cells: vec![false; header.len()],
        }
    }

    pub fn from_cells(header: GridHeader, cells: Vec<bool>) -> Result<Self> {
        header.validate()?;
        if cells.len() != header.len() {
            return Err(Error::InvalidGrid(format!(
                "expected {} mask cells, got {}",
                header.len(),
                cells.len()
            )));
        }
        Ok(Mask { header, cells })
    }

    pub fn header(&self) -> &GridHeader {
        &self.header
    }

    pub fn cells(&self) -> &[bool] {
        &self.cells
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.cells[self.header.index(row, col)]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        let i = self.header.index(row, col);
        self.cells[i] = value;
    }

    pub fn count(&self) -> usize {
        self.cells.iter().filter(|&&b| b).count()
    }

    pub fn any(&self) -> bool {
        self.cells.iter().any(|&b| b)
    }

    pub fn union_with(&mut self, other: &Mask) -> Result<()> {
        self.header.ensure_aligned(&other.header, "mask union")?;
        for (a, &b) in self.cells.iter_mut().zip(&other.cells) {
            *a |= b;
        }
        Ok(())
    }

    /// Clears every cell for which `keep` is false.
    pub fn retain(&mut self, mut keep: impl FnMut(usize, usize) -> bool) {
        let ncols = self.header.ncols;
        for (i, cell) in self.cells.iter_mut().enumerate() {
            if *cell && !keep(i / ncols, i % ncols) {
                *cell = false;
            }
        }
    }
}
