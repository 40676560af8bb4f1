//! Vector to raster conversion.
//!
//! Polygons mark cells whose center is inside under the even-odd rule.
//! Polylines mark every cell whose closed square touches the line
//! (supercover). Points mark the cell that contains them.

use crate::raster::{Feature, Geometry, GridHeader, Mask, Point};

pub fn rasterize_polygon(ring: &[Point], header: &GridHeader) -> Mask {
    let mut mask = Mask::new(*header);
    burn_polygon(&mut mask, ring);
    mask
}

pub fn rasterize_polyline(line: &[Point], header: &GridHeader) -> Mask {
    let mut mask = Mask::new(*header);
    burn_polyline(&mut mask, line);
    mask
}

/// Rasterizes any geometry into an existing mask (union).
pub fn burn_feature(mask: &mut Mask, feature: &Feature) {
    match &feature.geometry {
        Geometry::Point(p) => burn_point(mask, *p),
        Geometry::Polyline(line) => burn_polyline(mask, line),
        Geometry::Polygon(ring) => burn_polygon(mask, ring),
    }
}

pub fn burn_point(mask: &mut Mask, p: Point) {
    if let Some((row, col)) = mask.header().point_to_cell(p) {
        mask.set(row, col, true);
    }
}

/// Scanline fill at cell-center rows. A center `(cx, cy)` is inside when an
/// odd number of edge crossings at height `cy` lie strictly east of `cx`.
pub fn burn_polygon(mask: &mut Mask, ring: &[Point]) {
    if ring.len() < 3 {
        return;
    }
    let h = *mask.header();
    let mut crossings: Vec<f64> = Vec::new();
    for row in 0..h.nrows {
        let cy = h.row_center(row);
        crossings.clear();
        for edge in ring.windows(2) {
            let (a, b) = (edge[0], edge[1]);
            if (a.y > cy) != (b.y > cy) {
                crossings.push(a.x + (cy - a.y) * (b.x - a.x) / (b.y - a.y));
            }
        }
        // Rings given without the closing vertex still work.
        let (first, last) = (ring[0], ring[ring.len() - 1]);
        if first != last && (last.y > cy) != (first.y > cy) {
            crossings.push(last.x + (cy - last.y) * (first.x - last.x) / (first.y - last.y));
        }
        if crossings.is_empty() {
            continue;
        }
        crossings.sort_by(f64::total_cmp);
        // Cells with x_lo <= cx < x_hi for each sorted pair are inside.
        for pair in crossings.chunks_exact(2) {
            let start = first_col_at_or_after(&h, pair[0]);
            let end = first_col_at_or_after(&h, pair[1]);
            for col in start..end {
                mask.set(row, col, true);
            }
        }
    }
}

/// Smallest column whose center x is `>= x`, or `ncols` if none.
fn first_col_at_or_after(h: &GridHeader, x: f64) -> usize {
    let guess = ((x - h.x_origin) / h.cellsize - 0.5).ceil();
    let mut col = if guess <= 0.0 {
        0
    } else if guess >= h.ncols as f64 {
        h.ncols
    } else {
        guess as usize
    };
    while col > 0 && h.col_center(col - 1) >= x {
        col -= 1;
    }
    while col < h.ncols && h.col_center(col) < x {
        col += 1;
    }
    col
}

pub fn burn_polyline(mask: &mut Mask, line: &[Point]) {
    if line.len() == 1 {
        burn_point(mask, line[0]);
    }
    for seg in line.windows(2) {
        burn_segment(mask, seg[0], seg[1]);
    }
}

/// Walks the rows the segment spans, proposes a column range per row and
/// confirms each candidate with the exact clip test.
fn burn_segment(mask: &mut Mask, p: Point, q: Point) {
    let h = *mask.header();
    let cs = h.cellsize;
    let (ymin, ymax) = (p.y.min(q.y), p.y.max(q.y));
    let south = ((ymin - h.y_origin) / cs).floor() - 1.0;
    let north = ((ymax - h.y_origin) / cs).floor() + 1.0;
    let lo = south.max(0.0);
    let hi = north.min(h.nrows as f64 - 1.0);
    if lo > hi {
        return;
    }
    let (lo, hi) = (lo as usize, hi as usize);
    for from_south in lo..=hi {
        let row = h.nrows - 1 - from_south;
        let band_lo = h.y_origin + from_south as f64 * cs;
        let band_hi = band_lo + cs;
        let Some((xa, xb)) = x_range_in_band(p, q, band_lo, band_hi) else {
            continue;
        };
        let c0 = (((xa - h.x_origin) / cs).floor() - 1.0).max(0.0);
        let c1 = (((xb - h.x_origin) / cs).floor() + 1.0).min(h.ncols as f64 - 1.0);
        if c0 > c1 {
            continue;
        }
        for col in c0 as usize..=c1 as usize {
            let (x0, y0, x1, y1) = h.cell_bounds(row, col);
            if segment_hits_box(p, q, x0, y0, x1, y1) {
                mask.set(row, col, true);
            }
        }
    }
}

/// X extent of the part of segment `pq` with `y` in `[lo, hi]`, padded
/// loosely; candidates are re-checked exactly.
fn x_range_in_band(p: Point, q: Point, lo: f64, hi: f64) -> Option<(f64, f64)> {
    let dy = q.y - p.y;
    let (t0, t1) = if dy == 0.0 {
        (0.0, 1.0)
    } else {
        let ta = (lo - p.y) / dy;
        let tb = (hi - p.y) / dy;
        (ta.min(tb).max(0.0), ta.max(tb).min(1.0))
    };
    if t0 > t1 {
        // Rounding can push a grazing segment just outside; fall back to the
        // endpoints nearest the band.
        if p.y.min(q.y) > hi + 1e-9 * hi.abs().max(1.0)
            || p.y.max(q.y) < lo - 1e-9 * lo.abs().max(1.0)
        {
            return None;
        }
        return Some((p.x.min(q.x), p.x.max(q.x)));
    }
    let xa = p.x + t0 * (q.x - p.x);
    let xb = p.x + t1 * (q.x - p.x);
    Some((xa.min(xb), xa.max(xb)))
}

/// Liang-Barsky test: does the closed segment `pq` touch the closed box?
pub fn segment_hits_box(p: Point, q: Point, xmin: f64, ymin: f64, xmax: f64, ymax: f64) -> bool {
    let dx = q.x - p.x;
    let dy = q.y - p.y;
    let mut t0 = 0.0_f64;
    let mut t1 = 1.0_f64;
    for (pk, qk) in [
        (-dx, p.x - xmin),
        (dx, xmax - p.x),
        (-dy, p.y - ymin),
        (dy, ymax - p.y),
    ] {
        if pk == 0.0 {
            if qk < 0.0 {
                return false;
            }
        } else {
            let r = qk / pk;
            if pk < 0.0 {
                if r > t1 {
                    return false;
                }
                t0 = t0.max(r);
            } else {
                if r < t0 {
                    return false;
                }
                t1 = t1.min(r);
            }
        }
    }
    true
}
