//! Checks a vulnerability map against observed dump sites.
//!
//! A site is validated when its containing cell carries a class. Sites off
//! the grid or on nodata cells (outside the 1 km buffer, excluded areas)
//! count as outside the buffer.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raster::{FeatureSet, Geometry, Point, Role};
use crate::scoring::{VulnClass, VulnerabilityMap};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservedSite {
    pub id: String,
    pub location: Point,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub date: Option<String>,
}

impl ObservedSite {
    pub fn new(id: impl Into<String>, x: f64, y: f64) -> Self {
        ObservedSite {
            id: id.into(),
            location: Point::new(x, y),
            date: None,
        }
    }

    /// Collects point features with the `sites` role.
    pub fn from_features(features: &FeatureSet) -> Result<Vec<ObservedSite>> {
        features
            .features
            .iter()
            .enumerate()
            .filter(|(_, f)| f.role == Role::Sites)
            .map(|(i, f)| match &f.geometry {
                Geometry::Point(p) if p.is_finite() => Ok(ObservedSite {
                    id: f.name.clone().unwrap_or_else(|| format!("site-{i}")),
                    location: *p,
                    date: f.date.clone(),
                }),
                other => Err(Error::InvalidFeature {
                    feature: f.label(i),
                    reason: format!("observed sites must be finite points, got {}", other.kind()),
                }),
            })
            .collect()
    }
}

/// Site count per class, serialized with one key per class in class order.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub very_low: usize,
    pub low: usize,
    pub insignificant: usize,
    pub moderate: usize,
    pub significant: usize,
    pub high: usize,
    pub very_high: usize,
}

impl ClassCounts {
    pub fn get(&self, class: VulnClass) -> usize {
        match class {
            VulnClass::VeryLow => self.very_low,
            VulnClass::Low => self.low,
            VulnClass::Insignificant => self.insignificant,
            VulnClass::Moderate => self.moderate,
            VulnClass::Significant => self.significant,
            VulnClass::High => self.high,
            VulnClass::VeryHigh => self.very_high,
        }
    }

    fn bump(&mut self, class: VulnClass) {
        *self.slot(class) += 1;
    }

    pub fn set(&mut self, class: VulnClass, count: usize) {
        *self.slot(class) = count;
    }

    fn slot(&mut self, class: VulnClass) -> &mut usize {
        match class {
            VulnClass::VeryLow => &mut self.very_low,
            VulnClass::Low => &mut self.low,
            VulnClass::Insignificant => &mut self.insignificant,
            VulnClass::Moderate => &mut self.moderate,
            VulnClass::Significant => &mut self.significant,
            VulnClass::High => &mut self.high,
            VulnClass::VeryHigh => &mut self.very_high,
        }
    }

    pub fn sum(&self) -> usize {
        VulnClass::ALL.iter().map(|&c| self.get(c)).sum()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub total: usize,
    pub outside_buffer: usize,
    pub validated: usize,
    pub per_class: ClassCounts,
}

pub fn validate_sites(sites: &[ObservedSite], map: &VulnerabilityMap) -> ValidationReport {
    let header = map.header();
    let mut report = ValidationReport {
        total: sites.len(),
        ..ValidationReport::default()
    };
    for site in sites {
        let class = header
            .point_to_cell(site.location)
            .and_then(|(row, col)| map.class_at(row, col));
        match class {
            Some(c) => report.per_class.bump(c),
            None => report.outside_buffer += 1,
        }
    }
    report.validated = report.total - report.outside_buffer;
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::{Feature, Grid, GridHeader, DEFAULT_NODATA};
    use crate::scoring::WeightConfig;

    fn tiny_map() -> VulnerabilityMap {
        let h = GridHeader::new(3, 1, 0.0, 0.0, 100.0, DEFAULT_NODATA).unwrap();
        let scores = Grid::new(h, vec![31.0, 12.0, DEFAULT_NODATA]).unwrap();
        let classes = Grid::new(h, vec![6.0, 2.0, DEFAULT_NODATA]).unwrap();
        VulnerabilityMap {
            scores,
            classes,
            weights: WeightConfig::default(),
        }
    }

    #[test]
    fn empty_list_is_all_zero() {
        assert_eq!(
            validate_sites(&[], &tiny_map()),
            ValidationReport::default()
        );
    }

    #[test]
    fn tallies_and_outside() {
        let sites = vec![
            ObservedSite::new("a", 50.0, 50.0),
            ObservedSite::new("b", 150.0, 50.0),
            ObservedSite::new("c", 250.0, 50.0),
            ObservedSite::new("d", -2000.0, 50.0),
            ObservedSite::new("e", 10.0, 99.0),
        ];
        let r = validate_sites(&sites, &tiny_map());
        assert_eq!(r.total, 5);
        assert_eq!(r.outside_buffer, 2);
        assert_eq!(r.validated, 3);
        assert_eq!(r.per_class.high, 2);
        assert_eq!(r.per_class.low, 1);
        assert_eq!(r.outside_buffer + r.per_class.sum(), r.total);
    }

    #[test]
    fn report_json_shape() {
        let r = ValidationReport {
            total: 163,
            outside_buffer: 4,
            validated: 159,
            per_class: ClassCounts {
                insignificant: 3,
                moderate: 22,
                significant: 45,
                high: 64,
                very_high: 25,
                ..ClassCounts::default()
            },
        };
        assert_eq!(r.outside_buffer + r.per_class.sum(), r.total);
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(
            json,
            r#"{"total":163,"outside_buffer":4,"validated":159,"per_class":{"very_low":0,"low":0,"insignificant":3,"moderate":22,"significant":45,"high":64,"very_high":25}}"#
        );
        assert_eq!(serde_json::from_str::<ValidationReport>(&json).unwrap(), r);
    }

    #[test]
    fn sites_from_point_features_only() {
        let mut fs = FeatureSet::new(vec![
            Feature::new(Geometry::Point(Point::new(1.0, 2.0)), Role::Sites).named("S1"),
            Feature::new(Geometry::Point(Point::new(3.0, 4.0)), Role::Sites),
            Feature::new(Geometry::Point(Point::new(3.0, 4.0)), Role::Loam),
        ]);
        let sites = ObservedSite::from_features(&fs).unwrap();
        assert_eq!(sites.len(), 2);
        assert_eq!(sites[0].id, "S1");
        assert_eq!(sites[1].id, "site-1");
        fs.push(Feature::new(
            Geometry::Polyline(vec![Point::new(0.0, 0.0), Point::new(1.0, 1.0)]),
            Role::Sites,
        ));
        assert!(ObservedSite::from_features(&fs).is_err());
    }
}
