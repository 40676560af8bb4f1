//! Brute-force oracles shared by the integration tests. Nothing here calls
//! the library's algorithms; only plain data types are borrowed.

#![allow(dead_code)]

use vulnmap::raster::{Feature, FeatureSet, Geometry, Grid, GridHeader, Mask, Point, Role};
use vulnmap::synth::SplitMix64;

/// Altitude rows as printed: (lower inclusive, upper exclusive, note).
pub const ALTITUDE_TABLE: [(f64, f64, u8); 20] = [
    (f64::NEG_INFINITY, 200.0, 20),
    (200.0, 300.0, 19),
    (300.0, 400.0, 18),
    (400.0, 500.0, 17),
    (500.0, 600.0, 16),
    (600.0, 700.0, 15),
    (700.0, 800.0, 14),
    (800.0, 900.0, 13),
    (900.0, 1000.0, 12),
    (1000.0, 1100.0, 11),
    (1100.0, 1200.0, 10),
    (1200.0, 1300.0, 9),
    (1300.0, 1400.0, 8),
    (1400.0, 1500.0, 7),
    (1500.0, 1600.0, 6),
    (1600.0, 1700.0, 5),
    (1700.0, 1800.0, 4),
    (1800.0, 1900.0, 3),
    (1900.0, 2000.0, 2),
    (2000.0, f64::INFINITY, 1),
];

/// Slope rows in degrees; the first row is extended down to 0.
pub const SLOPE_TABLE: [(f64, f64, u8); 8] = [
    (0.0, 3.0, 8),
    (3.0, 5.0, 7),
    (5.0, 7.0, 6),
    (7.0, 10.0, 5),
    (10.0, 15.0, 4),
    (15.0, 20.0, 3),
    (20.0, 25.0, 2),
    (25.0, f64::INFINITY, 1),
];

/// Class bins: (lower inclusive, upper exclusive, label).
pub const CLASS_TABLE: [(f64, f64, &str); 7] = [
    (f64::NEG_INFINITY, 10.0, "very_low"),
    (10.0, 15.0, "low"),
    (15.0, 20.0, "insignificant"),
    (20.0, 25.0, "moderate"),
    (25.0, 30.0, "significant"),
    (30.0, 35.0, "high"),
    (35.0, f64::INFINITY, "very_high"),
];

pub fn table_lookup(table: &[(f64, f64, u8)], v: f64) -> u8 {
    table
        .iter()
        .find(|(lo, hi, _)| v >= *lo && v < *hi)
        .map(|r| r.2)
        .expect("table covers the value")
}

pub fn class_code(score: f64) -> u8 {
    let i = CLASS_TABLE
        .iter()
        .position(|(lo, hi, _)| score >= *lo && score < *hi)
        .unwrap();
    i as u8 + 1
}

pub fn center(h: &GridHeader, row: usize, col: usize) -> Point {
    Point::new(
        h.x_origin + (col as f64 + 0.5) * h.cellsize,
        h.y_origin + ((h.nrows - 1 - row) as f64 + 0.5) * h.cellsize,
    )
}

/// Even-odd ray cast (PNPOLY).
pub fn point_in_ring(p: Point, ring: &[Point]) -> bool {
    let mut inside = false;
    let n = ring.len();
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (ring[i], ring[j]);
        if (a.y > p.y) != (b.y > p.y) && p.x < a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y) {
            inside = !inside;
        }
        j = i;
    }
    inside
}

/// Separating-axis test of a closed segment against a closed box.
pub fn segment_touches_box(p: Point, q: Point, xmin: f64, ymin: f64, xmax: f64, ymax: f64) -> bool {
    if p.x.max(q.x) < xmin || p.x.min(q.x) > xmax || p.y.max(q.y) < ymin || p.y.min(q.y) > ymax {
        return false;
    }
    let side = |x: f64, y: f64| (q.x - p.x) * (y - p.y) - (q.y - p.y) * (x - p.x);
    let s = [
        side(xmin, ymin),
        side(xmax, ymin),
        side(xmax, ymax),
        side(xmin, ymax),
    ];
    !(s.iter().all(|&v| v > 0.0) || s.iter().all(|&v| v < 0.0))
}

pub fn cell_box(h: &GridHeader, row: usize, col: usize) -> (f64, f64, f64, f64) {
    let xmin = h.x_origin + col as f64 * h.cellsize;
    let ymin = h.y_origin + (h.nrows - 1 - row) as f64 * h.cellsize;
    (xmin, ymin, xmin + h.cellsize, ymin + h.cellsize)
}

pub fn polyline_touches_cell(line: &[Point], h: &GridHeader, row: usize, col: usize) -> bool {
    let (x0, y0, x1, y1) = cell_box(h, row, col);
    if line.len() == 1 {
        return segment_touches_box(line[0], line[0], x0, y0, x1, y1);
    }
    line.windows(2)
        .any(|w| segment_touches_box(w[0], w[1], x0, y0, x1, y1))
}

/// Cell containing `p` by scanning every cell's half-open square.
pub fn containing_cell(h: &GridHeader, p: Point) -> Option<(usize, usize)> {
    for row in 0..h.nrows {
        for col in 0..h.ncols {
            let (x0, y0, x1, y1) = cell_box(h, row, col);
            if p.x >= x0 && p.x < x1 && p.y >= y0 && p.y < y1 {
                return Some((row, col));
            }
        }
    }
    None
}

/// Sum of triangle areas fanned from the first vertex.
pub fn fan_area(ring: &[Point]) -> f64 {
    let o = ring[0];
    let mut signed = 0.0;
    for w in ring[1..].windows(2) {
        let (a, b) = (w[0], w[1]);
        signed += 0.5 * ((a.x - o.x) * (b.y - o.y) - (b.x - o.x) * (a.y - o.y));
    }
    signed.abs()
}

/// All-pairs squared distances (in cells) to the nearest true cell.
pub fn brute_sq_distance(mask: &Mask) -> Vec<Option<i64>> {
    let h = mask.header();
    let sources: Vec<(i64, i64)> = (0..h.nrows)
        .flat_map(|r| (0..h.ncols).map(move |c| (r, c)))
        .filter(|&(r, c)| mask.get(r, c))
        .map(|(r, c)| (r as i64, c as i64))
        .collect();
    let mut out = Vec::with_capacity(h.len());
    for r in 0..h.nrows as i64 {
        for c in 0..h.ncols as i64 {
            out.push(
                sources
                    .iter()
                    .map(|&(sr, sc)| (r - sr).pow(2) + (c - sc).pow(2))
                    .min(),
            );
        }
    }
    out
}

/// Horn slope at one cell, neighbors clamped to the grid and nodata
/// neighbors replaced by the center.
pub fn horn_slope_at(dem: &Grid, row: usize, col: usize) -> Option<f64> {
    let h = dem.header();
    let z0 = dem.get(row, col);
    if z0 == h.nodata {
        return None;
    }
    let at = |dr: i64, dc: i64| {
        let r = (row as i64 + dr).clamp(0, h.nrows as i64 - 1) as usize;
        let c = (col as i64 + dc).clamp(0, h.ncols as i64 - 1) as usize;
        let v = dem.get(r, c);
        if v == h.nodata {
            z0
        } else {
            v
        }
    };
    let east = at(-1, 1) + 2.0 * at(0, 1) + at(1, 1);
    let west = at(-1, -1) + 2.0 * at(0, -1) + at(1, -1);
    let north = at(-1, -1) + 2.0 * at(-1, 0) + at(-1, 1);
    let south = at(1, -1) + 2.0 * at(1, 0) + at(1, 1);
    let gx = (east - west) / (8.0 * h.cellsize);
    let gy = (north - south) / (8.0 * h.cellsize);
    Some((gx * gx + gy * gy).sqrt().atan().to_degrees())
}

pub struct OracleWeights {
    pub altitude: f64,
    pub slope: f64,
    pub proximity: f64,
    /// rivers_creeks, floodplain, pasture, degraded_land, loam_site, local_road
    pub factors: [f64; 6],
}

pub const DEFAULT_ORACLE_WEIGHTS: OracleWeights = OracleWeights {
    altitude: 1.0,
    slope: 1.0,
    proximity: 1.0,
    factors: [2.0, 2.0, 1.0, 1.0, 1.0, 1.0],
};

fn factor_slot(role: Role) -> Option<usize> {
    match role {
        Role::River => Some(0),
        Role::Floodplain => Some(1),
        Role::Pasture => Some(2),
        Role::Degraded => Some(3),
        Role::Loam => Some(4),
        Role::Road => Some(5),
        _ => None,
    }
}

fn feature_covers(f: &Feature, h: &GridHeader, row: usize, col: usize) -> bool {
    match &f.geometry {
        Geometry::Polygon(ring) => point_in_ring(center(h, row, col), ring),
        Geometry::Polyline(line) => polyline_touches_cell(line, h, row, col),
        Geometry::Point(p) => {
            let (x0, y0, x1, y1) = cell_box(h, row, col);
            p.x >= x0 && p.x < x1 && p.y >= y0 && p.y < y1
        }
    }
}

/// Score and class grids recomputed cell by cell; `None` marks nodata.
pub fn oracle_map(
    dem: &Grid,
    features: &FeatureSet,
    w: &OracleWeights,
    radii: &[f64],
    min_area: f64,
) -> Vec<Option<(f64, u8)>> {
    let h = *dem.header();
    let covered = |role: Role, row: usize, col: usize| {
        features
            .features
            .iter()
            .any(|f| f.role == role && feature_covers(f, &h, row, col))
    };
    let builtup: Vec<(i64, i64)> = (0..h.nrows)
        .flat_map(|r| (0..h.ncols).map(move |c| (r, c)))
        .filter(|&(r, c)| covered(Role::Builtup, r, c))
        .map(|(r, c)| (r as i64, c as i64))
        .collect();
    assert!(!builtup.is_empty(), "oracle scene needs built-up cells");

    let kept: Vec<&Feature> = features
        .features
        .iter()
        .filter(|f| match (&f.geometry, f.role) {
            (
                Geometry::Polygon(ring),
                Role::Floodplain | Role::Pasture | Role::Degraded | Role::Loam,
            ) => fan_area(ring) > min_area,
            _ => true,
        })
        .collect();

    let mut out = Vec::with_capacity(h.len());
    for row in 0..h.nrows {
        for col in 0..h.ncols {
            let z = dem.get(row, col);
            if z == h.nodata || covered(Role::Exclusion, row, col) {
                out.push(None);
                continue;
            }
            let d2 = builtup
                .iter()
                .map(|&(r, c)| (row as i64 - r).pow(2) + (col as i64 - c).pow(2))
                .min()
                .unwrap();
            let dist = (d2 as f64).sqrt() * h.cellsize;
            let prox = match radii.iter().position(|&r| dist <= r) {
                Some(i) => (radii.len() - i) as f64,
                None => {
                    out.push(None);
                    continue;
                }
            };
            let alt = f64::from(table_lookup(&ALTITUDE_TABLE, z));
            let slope = f64::from(table_lookup(
                &SLOPE_TABLE,
                horn_slope_at(dem, row, col).unwrap(),
            ));
            let mut present = [false; 6];
            for f in &kept {
                if let Some(slot) = factor_slot(f.role) {
                    if !present[slot] && feature_covers(f, &h, row, col) {
                        present[slot] = true;
                    }
                }
            }
            let mut score = w.altitude * alt + w.slope * slope + w.proximity * prox;
            for (slot, &p) in present.iter().enumerate() {
                if p {
                    score += w.factors[slot];
                }
            }
            out.push(Some((score, class_code(score))));
        }
    }
    out
}

/// Random mask with at least one true cell.
pub fn random_mask(rng: &mut SplitMix64, max_side: usize) -> Mask {
    let ncols = 1 + rng.below(max_side);
    let nrows = 1 + rng.below(max_side);
    let density = [0.001, 0.01, 0.05, 0.2, 0.5][rng.below(5)];
    let h = GridHeader::new(ncols, nrows, 0.0, 0.0, rng.uniform(0.5, 50.0), -9999.0).unwrap();
    let mut mask = Mask::new(h);
    for r in 0..nrows {
        for c in 0..ncols {
            if rng.chance(density) {
                mask.set(r, c, true);
            }
        }
    }
    if !mask.any() {
        mask.set(rng.below(nrows), rng.below(ncols), true);
    }
    mask
}
