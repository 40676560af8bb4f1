//! Seeded synthetic landscapes for exercising the full pipeline.
//!
//! A scene has sinusoid-sum terrain carved by river valleys, meandering
//! rivers with floodplain bands, rectangular villages beside the rivers,
//! land-cover patches and roads around the villages, and planted dump sites.
//! Every random draw comes from [`SplitMix64`] in a fixed order, so a seed
//! and config fully determine the output.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raster::{Feature, FeatureSet, Geometry, Grid, GridHeader, Point, Role, DEFAULT_NODATA};
use crate::terrain::Dem;
use crate::validation::ObservedSite;

/// SplitMix64 (Steele, Lea & Flood 2014): 64-bit state advanced by the golden
/// gamma, output mixed with two xor-shift-multiply rounds.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)` from the top 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform integer in `[0, n)`; `n` must be positive.
    pub fn below(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        ((self.next_u64() >> 11) % n as u64) as usize
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.next_f64() < p
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthConfig {
    pub ncols: usize,
    pub nrows: usize,
    pub cellsize: f64,
    pub x_origin: f64,
    pub y_origin: f64,
    pub seed: u64,
    pub villages: usize,
    pub rivers: usize,
    pub pastures: usize,
    pub roads: usize,
    pub degraded: usize,
    pub loam: usize,
    pub exclusions: usize,
    /// Elevation of the terrain mid-line, meters.
    pub base_elevation: f64,
    /// Peak deviation of the sinusoid terrain from the base, meters.
    pub relief: f64,
    /// Depth of the valley carved along each river, meters.
    pub valley_depth: f64,
    /// Planted dump sites, including `outside_sites`.
    pub sites: usize,
    /// Sites deliberately placed more than 1 km from every village.
    pub outside_sites: usize,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            ncols: 128,
            nrows: 128,
            cellsize: 25.0,
            x_origin: 600_000.0,
            y_origin: 5_200_000.0,
            seed: 1,
            villages: 2,
            rivers: 1,
            pastures: 3,
            roads: 1,
            degraded: 2,
            loam: 1,
            exclusions: 0,
            base_elevation: 300.0,
            relief: 150.0,
            valley_depth: 40.0,
            sites: 20,
            outside_sites: 3,
        }
    }
}

/// Distance beyond which a site is certainly outside the outermost buffer.
const OUTSIDE_DISTANCE: f64 = 1000.0;

impl SynthConfig {
    pub fn header(&self) -> Result<GridHeader> {
        GridHeader::new(
            self.ncols,
            self.nrows,
            self.x_origin,
            self.y_origin,
            self.cellsize,
            DEFAULT_NODATA,
        )
        .map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.ncols < 16 || self.nrows < 16 {
            return Err(Error::Config(format!(
                "synthetic grid must be at least 16x16, got {}x{}",
                self.ncols, self.nrows
            )));
        }
        self.header()?;
        for (name, v) in [
            ("base_elevation", self.base_elevation),
            ("relief", self.relief),
            ("valley_depth", self.valley_depth),
        ] {
            if !v.is_finite() {
                return Err(Error::Config(format!("{name} must be finite")));
            }
        }
        if self.relief < 0.0 || self.valley_depth < 0.0 {
            return Err(Error::Config("relief and valley_depth must be >= 0".into()));
        }
        if self.outside_sites > self.sites {
            return Err(Error::Config(format!(
                "outside_sites ({}) exceeds sites ({})",
                self.outside_sites, self.sites
            )));
        }
        if self.villages == 0 && self.sites > self.outside_sites {
            return Err(Error::Infeasible(
                "in-buffer sites need at least one village".into(),
            ));
        }
        Ok(())
    }
}

/// Output of [`generate_landscape`].
#[derive(Debug, Clone, PartialEq)]
pub struct Landscape {
    pub dem: Dem,
    pub features: FeatureSet,
    pub sites: Vec<ObservedSite>,
}

#[derive(Debug, Clone, Copy)]
struct Rect {
    x0: f64,
    y0: f64,
    x1: f64,
    y1: f64,
}

impl Rect {
    fn center(&self) -> Point {
        Point::new((self.x0 + self.x1) * 0.5, (self.y0 + self.y1) * 0.5)
    }

    fn overlaps(&self, other: &Rect, margin: f64) -> bool {
        self.x0 - margin < other.x1
            && other.x0 - margin < self.x1
            && self.y0 - margin < other.y1
            && other.y0 - margin < self.y1
    }

    fn distance(&self, p: Point) -> f64 {
        let dx = (self.x0 - p.x).max(0.0).max(p.x - self.x1);
        let dy = (self.y0 - p.y).max(0.0).max(p.y - self.y1);
        dx.hypot(dy)
    }

    fn ring(&self) -> Vec<Point> {
        vec![
            Point::new(self.x0, self.y0),
            Point::new(self.x1, self.y0),
            Point::new(self.x1, self.y1),
            Point::new(self.x0, self.y1),
            Point::new(self.x0, self.y0),
        ]
    }
}

struct Extent {
    x0: f64,
    y0: f64,
    x1: f64,
    y1: f64,
}

impl Extent {
    fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    fn height(&self) -> f64 {
        self.y1 - self.y0
    }

    fn contains_rect(&self, r: &Rect) -> bool {
        r.x0 >= self.x0 && r.x1 <= self.x1 && r.y0 >= self.y0 && r.y1 <= self.y1
    }

    /// Keeps points strictly inside so that floor-based cell lookup succeeds.
    fn clamp(&self, p: Point, inset: f64) -> Point {
        Point::new(
            p.x.clamp(self.x0 + inset, self.x1 - inset),
            p.y.clamp(self.y0 + inset, self.y1 - inset),
        )
    }
}

fn round_cm(v: f64) -> f64 {
    (v * 100.0).round() / 100.0
}

fn round_point(p: Point) -> Point {
    Point::new(round_cm(p.x), round_cm(p.y))
}

fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).clamp(0.0, 1.0)
    };
    p.distance(Point::new(a.x + t * dx, a.y + t * dy))
}

fn polyline_distance(p: Point, line: &[Point]) -> f64 {
    line.windows(2)
        .map(|w| point_segment_distance(p, w[0], w[1]))
        .fold(f64::INFINITY, f64::min)
}

fn point_along(line: &[Point], t: f64) -> Point {
    let pos = t.clamp(0.0, 1.0) * (line.len() - 1) as f64;
    let i = (pos.floor() as usize).min(line.len() - 2);
    let f = pos - i as f64;
    let (a, b) = (line[i], line[i + 1]);
    Point::new(a.x + f * (b.x - a.x), a.y + f * (b.y - a.y))
}

/// Star-shaped patch: `n` vertices at evenly spaced angles with jittered radii.
fn patch(rng: &mut SplitMix64, center: Point, radius: f64, n: usize) -> Vec<Point> {
    let rotation = rng.uniform(0.0, TAU);
    let mut ring: Vec<Point> = (0..n)
        .map(|i| {
            let angle = rotation + TAU * i as f64 / n as f64;
            let r = radius * rng.uniform(0.75, 1.25);
            round_point(Point::new(
                center.x + r * angle.cos(),
                center.y + r * angle.sin(),
            ))
        })
        .collect();
    ring.push(ring[0]);
    ring
}

const RIVER_VERTICES: usize = 33;
const TERRAIN_WAVES: usize = 4;

pub fn generate_landscape(config: &SynthConfig) -> Result<Landscape> {
    config.validate()?;
    let header = config.header()?;
    let cs = config.cellsize;
    let ext = Extent {
        x0: header.x_origin,
        y0: header.y_origin,
        x1: header.x_max(),
        y1: header.y_max(),
    };
    let mut rng = SplitMix64::new(config.seed);
    let mut features = FeatureSet::default();

    // Terrain waves are drawn first so their parameters do not depend on
    // the feature counts.
    let span = ext.width().max(ext.height());
    let waves: Vec<(f64, f64, f64, f64)> = (0..TERRAIN_WAVES)
        .map(|k| {
            let wavelength = span * rng.uniform(0.4, 1.2);
            let direction = rng.uniform(0.0, TAU);
            let phase = rng.uniform(0.0, TAU);
            let amplitude = config.relief / (1 << k) as f64;
            (wavelength, direction, phase, amplitude)
        })
        .collect();
    let amplitude_sum: f64 = waves.iter().map(|w| w.3).sum();

    let floodplain_half = (3.0 * cs).max(60.0);
    let mut rivers: Vec<Vec<Point>> = Vec::with_capacity(config.rivers);
    for i in 0..config.rivers {
        let mid = ext.y0 + ext.height() * rng.uniform(0.25, 0.75);
        let amp = ext.height() * rng.uniform(0.05, 0.15);
        let wavelength = ext.width() * rng.uniform(0.5, 1.0);
        let phase = rng.uniform(0.0, TAU);
        let line: Vec<Point> = (0..RIVER_VERTICES)
            .map(|k| {
                let x = ext.x0 + ext.width() * k as f64 / (RIVER_VERTICES - 1) as f64;
                let y = mid + amp * (TAU * (x - ext.x0) / wavelength + phase).sin();
                round_point(Point::new(x, y))
            })
            .collect();
        let mut band: Vec<Point> = line
            .iter()
            .map(|p| round_point(Point::new(p.x, p.y + floodplain_half)))
            .collect();
        band.extend(
            line.iter()
                .rev()
                .map(|p| round_point(Point::new(p.x, p.y - floodplain_half))),
        );
        band.push(band[0]);
        features.push(
            Feature::new(Geometry::Polyline(line.clone()), Role::River)
                .named(format!("river-{}", i + 1)),
        );
        features.push(
            Feature::new(Geometry::Polygon(band), Role::Floodplain)
                .named(format!("floodplain-{}", i + 1)),
        );
        rivers.push(line);
    }

    let side_lo = (3.0 * cs).max(150.0);
    let side_hi = (6.0 * cs).max(300.0);
    if config.villages as f64 * side_hi * side_hi > 0.5 * ext.width() * ext.height() {
        return Err(Error::Infeasible(format!(
            "{} villages do not fit in a {:.0} m x {:.0} m extent",
            config.villages,
            ext.width(),
            ext.height()
        )));
    }
    let mut villages: Vec<Rect> = Vec::with_capacity(config.villages);
    for i in 0..config.villages {
        let mut placed = None;
        for _ in 0..500 {
            let w = round_cm(rng.uniform(side_lo, side_hi));
            let h = round_cm(rng.uniform(side_lo, side_hi));
            let center = if rivers.is_empty() {
                Point::new(rng.uniform(ext.x0, ext.x1), rng.uniform(ext.y0, ext.y1))
            } else {
                let river = &rivers[rng.below(rivers.len())];
                let anchor = point_along(river, rng.uniform(0.1, 0.9));
                let side = if rng.chance(0.5) { 1.0 } else { -1.0 };
                let offset = floodplain_half + h * 0.5 + rng.uniform(0.0, 300.0);
                Point::new(anchor.x, anchor.y + side * offset)
            };
            let x0 = round_cm(center.x - w * 0.5);
            let y0 = round_cm(center.y - h * 0.5);
            let rect = Rect {
                x0,
                y0,
                x1: x0 + w,
                y1: y0 + h,
            };
            if ext.contains_rect(&rect) && !villages.iter().any(|v| v.overlaps(&rect, cs)) {
                placed = Some(rect);
                break;
            }
        }
        let rect = placed.ok_or_else(|| {
            Error::Infeasible(format!("could not place village {} without overlap", i + 1))
        })?;
        features.push(
            Feature::new(Geometry::Polygon(rect.ring()), Role::Builtup)
                .named(format!("village-{}", i + 1)),
        );
        villages.push(rect);
    }

    for i in 0..config.roads {
        let line = if villages.len() >= 2 {
            let a = villages[i % villages.len()].center();
            let b = villages[(i + 1) % villages.len()].center();
            let bend = Point::new(
                (a.x + b.x) * 0.5 + rng.uniform(-200.0, 200.0),
                (a.y + b.y) * 0.5 + rng.uniform(-200.0, 200.0),
            );
            vec![a, ext.clamp(bend, 0.0), b]
        } else {
            let a = match villages.first() {
                Some(v) => v.center(),
                None => Point::new(rng.uniform(ext.x0, ext.x1), rng.uniform(ext.y0, ext.y1)),
            };
            let b = Point::new(
                rng.uniform(ext.x0, ext.x1),
                if rng.chance(0.5) { ext.y0 } else { ext.y1 },
            );
            vec![a, b]
        };
        let line = line.into_iter().map(round_point).collect();
        features.push(
            Feature::new(Geometry::Polyline(line), Role::Road).named(format!("road-{}", i + 1)),
        );
    }

    for (role, count, radius, name) in [
        (Role::Pasture, config.pastures, 160.0, "pasture"),
        (Role::Degraded, config.degraded, 140.0, "degraded"),
        (Role::Loam, config.loam, 130.0, "loam"),
    ] {
        for i in 0..count {
            let center = match villages.len() {
                0 => Point::new(rng.uniform(ext.x0, ext.x1), rng.uniform(ext.y0, ext.y1)),
                n => {
                    let v = villages[rng.below(n)].center();
                    let angle = rng.uniform(0.0, TAU);
                    let dist = rng.uniform(200.0, 900.0);
                    ext.clamp(
                        Point::new(v.x + dist * angle.cos(), v.y + dist * angle.sin()),
                        0.0,
                    )
                }
            };
            let r = radius * rng.uniform(0.6, 1.3);
            let ring = patch(&mut rng, center, r, 8);
            features.push(
                Feature::new(Geometry::Polygon(ring), role).named(format!("{name}-{}", i + 1)),
            );
        }
    }

    for i in 0..config.exclusions {
        let w = rng.uniform(400.0, 800.0).min(ext.width());
        let h = rng.uniform(400.0, 800.0).min(ext.height());
        let x0 = round_cm(rng.uniform(ext.x0, ext.x1 - w));
        let y0 = round_cm(rng.uniform(ext.y0, ext.y1 - h));
        let rect = Rect {
            x0,
            y0,
            x1: round_cm(x0 + w),
            y1: round_cm(y0 + h),
        };
        features.push(
            Feature::new(Geometry::Polygon(rect.ring()), Role::Exclusion)
                .named(format!("exclusion-{}", i + 1)),
        );
    }

    let valley_width = (4.0 * cs).max(250.0);
    let dem_grid = Grid::from_fn(header, |row, col| {
        let p = header.cell_center(row, col);
        let (rx, ry) = (p.x - ext.x0, p.y - ext.y0);
        let mut z = 0.0;
        for &(wavelength, direction, phase, amplitude) in &waves {
            let along = rx * direction.cos() + ry * direction.sin();
            z += amplitude * (TAU * along / wavelength + phase).sin();
        }
        if amplitude_sum > 0.0 {
            z *= config.relief / amplitude_sum;
        }
        let mut carve: f64 = 0.0;
        for river in &rivers {
            let d = polyline_distance(p, river) / valley_width;
            carve = carve.max((-d * d).exp());
        }
        round_cm(config.base_elevation + z - config.valley_depth * carve)
    })?;

    let in_buffer = config.sites - config.outside_sites;
    let inset = cs * 1e-3;
    let mut sites = Vec::with_capacity(config.sites);
    for _ in 0..in_buffer {
        let mut location = None;
        if !rivers.is_empty() && rng.chance(0.7) {
            for _ in 0..50 {
                let river = &rivers[rng.below(rivers.len())];
                let on = point_along(river, rng.next_f64());
                let p = ext.clamp(
                    Point::new(on.x, on.y + rng.uniform(-floodplain_half, floodplain_half)),
                    inset,
                );
                if villages.iter().any(|v| v.distance(p) <= 800.0) {
                    location = Some(p);
                    break;
                }
            }
        }
        let location = match location {
            Some(p) => p,
            None => {
                let v = villages[rng.below(villages.len())];
                let pad = 500.0;
                ext.clamp(
                    Point::new(
                        rng.uniform(v.x0 - pad, v.x1 + pad),
                        rng.uniform(v.y0 - pad, v.y1 + pad),
                    ),
                    inset,
                )
            }
        };
        sites.push(round_point(location));
    }
    let far = OUTSIDE_DISTANCE + 2.0 * cs * std::f64::consts::SQRT_2;
    for i in 0..config.outside_sites {
        let mut location = None;
        for _ in 0..10_000 {
            let p = Point::new(
                rng.uniform(ext.x0 + inset, ext.x1 - inset),
                rng.uniform(ext.y0 + inset, ext.y1 - inset),
            );
            if villages.iter().all(|v| v.distance(p) > far) {
                location = Some(round_point(p));
                break;
            }
        }
        let p = location.ok_or_else(|| {
            Error::Infeasible(format!(
                "no location more than {far:.0} m from every village for outside site {}",
                i + 1
            ))
        })?;
        sites.push(p);
    }
    let sites = sites
        .into_iter()
        .enumerate()
        .map(|(i, p)| {
            let year = 2009 + rng.below(3) as u32;
            let month = if year == 2009 {
                9 + rng.below(4)
            } else {
                1 + rng.below(12)
            };
            let day = 1 + rng.below(28);
            ObservedSite {
                id: format!("site-{:03}", i + 1),
                location: p,
                date: Some(format!("{year}-{month:02}-{day:02}")),
            }
        })
        .collect();

    Ok(Landscape {
        dem: Dem::new(dem_grid),
        features,
        sites,
    })
}
