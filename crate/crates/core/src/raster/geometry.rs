use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn distance(&self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// What a vector feature stands for in the analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", try_from = "String")]
pub enum Role {
    Builtup,
    River,
    Floodplain,
    Pasture,
    Degraded,
    Loam,
    Road,
    Exclusion,
    Sites,
}

impl Role {
    pub const ALL: [Role; 9] = [
        Role::Builtup,
        Role::River,
        Role::Floodplain,
        Role::Pasture,
        Role::Degraded,
        Role::Loam,
        Role::Road,
        Role::Exclusion,
        Role::Sites,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Role::Builtup => "builtup",
            Role::River => "river",
            Role::Floodplain => "floodplain",
            Role::Pasture => "pasture",
            Role::Degraded => "degraded",
            Role::Loam => "loam",
            Role::Road => "road",
            Role::Exclusion => "exclusion",
            Role::Sites => "sites",
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl TryFrom<String> for Role {
    type Error = String;

    fn try_from(s: String) -> std::result::Result<Self, Self::Error> {
        s.parse().map_err(|bad| format!("unknown role `{bad}`"))
    }
}

impl FromStr for Role {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let role = match s.trim().to_ascii_lowercase().as_str() {
            "builtup" | "built_up" | "built-up" => Role::Builtup,
            "river" | "rivers" | "rivers_creeks" | "creek" => Role::River,
            "floodplain" => Role::Floodplain,
            "pasture" => Role::Pasture,
            "degraded" | "degraded_land" => Role::Degraded,
            "loam" | "loam_site" => Role::Loam,
            "road" | "roads" | "local_road" => Role::Road,
            "exclusion" => Role::Exclusion,
            "sites" | "site" | "observed_site" => Role::Sites,
            _ => return Err(s.to_string()),
        };
        Ok(role)
    }
}

/// Planar geometry in meters. Polygons carry their outer ring only.
#[derive(Debug, Clone, PartialEq)]
pub enum Geometry {
    Point(Point),
    Polyline(Vec<Point>),
    Polygon(Vec<Point>),
}

impl Geometry {
    pub fn kind(&self) -> &'static str {
        match self {
            Geometry::Point(_) => "Point",
            Geometry::Polyline(_) => "LineString",
            Geometry::Polygon(_) => "Polygon",
        }
    }

    pub fn validate(&self) -> std::result::Result<(), String> {
        match self {
            Geometry::Point(p) => {
                if !p.is_finite() {
                    return Err("non-finite coordinate".into());
                }
            }
            Geometry::Polyline(pts) => {
                if pts.len() < 2 {
                    return Err(format!(
                        "polyline needs at least 2 vertices, got {}",
                        pts.len()
                    ));
                }
                if !pts.iter().all(Point::is_finite) {
                    return Err("non-finite coordinate".into());
                }
            }
            Geometry::Polygon(ring) => {
                if ring.len() < 4 {
                    return Err(format!(
                        "polygon ring needs at least 4 vertices, got {}",
                        ring.len()
                    ));
                }
                if !ring.iter().all(Point::is_finite) {
                    return Err("non-finite coordinate".into());
                }
                if ring.first() != ring.last() {
                    return Err("polygon ring is not closed".into());
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Feature {
    pub geometry: Geometry,
    pub role: Role,
    pub name: Option<String>,
    /// Observation date for site features, free-form.
    pub date: Option<String>,
}

impl Feature {
    pub fn new(geometry: Geometry, role: Role) -> Self {
        Feature {
            geometry,
            role,
            name: None,
            date: None,
        }
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// Name used in diagnostics: the feature name or its position.
    pub fn label(&self, index: usize) -> String {
        match &self.name {
            Some(name) => format!("`{name}` (#{index})"),
            None => format!("#{index}"),
        }
    }

    pub fn validate(&self, index: usize) -> Result<()> {
        self.geometry
            .validate()
            .map_err(|reason| Error::InvalidFeature {
                feature: self.label(index),
                reason,
            })
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct FeatureSet {
    pub features: Vec<Feature>,
}

impl FeatureSet {
    pub fn new(features: Vec<Feature>) -> Self {
        FeatureSet { features }
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn push(&mut self, feature: Feature) {
        self.features.push(feature);
    }

    pub fn extend(&mut self, other: FeatureSet) {
        self.features.extend(other.features);
    }

    pub fn with_role(&self, role: Role) -> impl Iterator<Item = &Feature> {
        self.features.iter().filter(move |f| f.role == role)
    }

    pub fn validate(&self) -> Result<()> {
        self.features
            .iter()
            .enumerate()
            .try_for_each(|(i, f)| f.validate(i))
    }
}

/// Absolute shoelace area of a ring, in square meters.
pub fn polygon_area(ring: &[Point]) -> f64 {
    if ring.len() < 3 {
        return 0.0;
    }
    // Offsetting by the first vertex keeps the cross products small for
    // projected coordinates far from the origin.
    let o = ring[0];
    let twice: f64 = ring
        .windows(2)
        .map(|w| (w[0].x - o.x) * (w[1].y - o.y) - (w[1].x - o.x) * (w[0].y - o.y))
        .sum();
    (twice * 0.5).abs()
}

pub fn polygon_perimeter(ring: &[Point]) -> f64 {
    ring.windows(2).map(|w| w[0].distance(w[1])).sum()
}
