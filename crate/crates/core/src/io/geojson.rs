//! GeoJSON FeatureCollection reading and writing.
//!
//! Supported geometries are Point, LineString and Polygon (outer ring only).
//! A feature's role comes from its `role` property when present, otherwise
//! from the layer's role in the run configuration.

use std::path::Path;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::io::write_file_atomic;
use crate::raster::{Feature, FeatureSet, Geometry, Point, Role};

pub fn read_vector_file(path: &Path, layer_role: Option<Role>) -> Result<FeatureSet> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_feature_collection(&text, layer_role).map_err(|e| match e {
        ParseError::Format(msg) => Error::format(path, msg),
        ParseError::Role { feature, role } => Error::UnknownRole {
            feature: format!("{feature} in {}", path.display()),
            role,
        },
    })
}

pub fn write_vector_file(features: &FeatureSet, path: &Path) -> Result<()> {
    write_file_atomic(path, to_feature_collection(features).as_bytes())
}

#[derive(Debug)]
pub enum ParseError {
    Format(String),
    Role { feature: String, role: String },
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParseError::Format(msg) => f.write_str(msg),
            ParseError::Role { feature, role } => {
                write!(f, "unknown role `{role}` on feature {feature}")
            }
        }
    }
}

fn fail<T>(msg: impl Into<String>) -> std::result::Result<T, ParseError> {
    Err(ParseError::Format(msg.into()))
}

pub fn parse_feature_collection(
    text: &str,
    layer_role: Option<Role>,
) -> std::result::Result<FeatureSet, ParseError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| {
        ParseError::Format(format!(
            "malformed JSON at line {}, column {}: {e}",
            e.line(),
            e.column()
        ))
    })?;
    let obj = doc
        .as_object()
        .ok_or_else(|| ParseError::Format("top level is not an object".into()))?;
    match obj.get("type").and_then(Value::as_str) {
        Some("FeatureCollection") => {}
        Some(other) => return fail(format!("expected a FeatureCollection, got `{other}`")),
        None => return fail("top-level object has no `type`"),
    }
    let features = obj
        .get("features")
        .and_then(Value::as_array)
        .ok_or_else(|| ParseError::Format("FeatureCollection has no `features` array".into()))?;

    let mut out = FeatureSet::default();
    for (i, raw) in features.iter().enumerate() {
        out.push(parse_feature(raw, i, layer_role)?);
    }
    Ok(out)
}

fn parse_feature(
    raw: &Value,
    index: usize,
    layer_role: Option<Role>,
) -> std::result::Result<Feature, ParseError> {
    let ctx = |msg: String| ParseError::Format(format!("feature #{index}: {msg}"));
    let obj = raw.as_object().ok_or_else(|| ctx("not an object".into()))?;
    if obj.get("type").and_then(Value::as_str) != Some("Feature") {
        return Err(ctx("`type` must be \"Feature\"".into()));
    }
    let props = match obj.get("properties") {
        None | Some(Value::Null) => None,
        Some(Value::Object(m)) => Some(m),
        Some(_) => return Err(ctx("`properties` must be an object or null".into())),
    };
    let prop_str = |key: &str| props.and_then(|p| p.get(key)).and_then(Value::as_str);
    let name = prop_str("name")
        .map(str::to_string)
        .or_else(|| prop_str("id").map(str::to_string))
        .or_else(|| match obj.get("id") {
            Some(Value::String(s)) => Some(s.clone()),
            Some(Value::Number(n)) => Some(n.to_string()),
            _ => None,
        });
    let label = match &name {
        Some(n) => format!("`{n}` (#{index})"),
        None => format!("#{index}"),
    };
    let role = match prop_str("role") {
        Some(r) => r.parse::<Role>().map_err(|bad| ParseError::Role {
            feature: label.clone(),
            role: bad,
        })?,
        None => {
            layer_role.ok_or_else(|| ctx("no `role` property and the layer has no role".into()))?
        }
    };
    let geometry = obj
        .get("geometry")
        .filter(|g| !g.is_null())
        .ok_or_else(|| ctx("missing geometry".into()))?;
    let geometry = parse_geometry(geometry).map_err(ctx)?;
    Ok(Feature {
        geometry,
        role,
        name,
        date: prop_str("date").map(str::to_string),
    })
}

fn parse_position(v: &Value) -> std::result::Result<Point, String> {
    let arr = v.as_array().ok_or("position is not an array")?;
    if arr.len() < 2 {
        return Err(format!(
            "position needs at least 2 numbers, got {}",
            arr.len()
        ));
    }
    let x = arr[0]
        .as_f64()
        .ok_or("position coordinate is not a number")?;
    let y = arr[1]
        .as_f64()
        .ok_or("position coordinate is not a number")?;
    Ok(Point::new(x, y))
}

fn parse_positions(v: &Value) -> std::result::Result<Vec<Point>, String> {
    v.as_array()
        .ok_or("coordinates are not an array")?
        .iter()
        .map(parse_position)
        .collect()
}

fn parse_geometry(g: &Value) -> std::result::Result<Geometry, String> {
    let kind = g
        .get("type")
        .and_then(Value::as_str)
        .ok_or("geometry has no `type`")?;
    let coords = g.get("coordinates").ok_or("geometry has no `coordinates`");
    match kind {
        "Point" => Ok(Geometry::Point(parse_position(coords?)?)),
        "LineString" => Ok(Geometry::Polyline(parse_positions(coords?)?)),
        "Polygon" => {
            let rings = coords?
                .as_array()
                .ok_or("polygon coordinates are not an array")?;
            let outer = rings.first().ok_or("polygon has no rings")?;
            Ok(Geometry::Polygon(parse_positions(outer)?))
        }
        other => Err(format!("unsupported geometry type `{other}`")),
    }
}

fn positions(points: &[Point]) -> Value {
    Value::Array(points.iter().map(|p| json!([p.x, p.y])).collect())
}

fn geometry_json(g: &Geometry) -> Value {
    match g {
        Geometry::Point(p) => json!({"type": "Point", "coordinates": [p.x, p.y]}),
        Geometry::Polyline(line) => json!({"type": "LineString", "coordinates": positions(line)}),
        Geometry::Polygon(ring) => json!({"type": "Polygon", "coordinates": [positions(ring)]}),
    }
}

/// Serializes features with `role`, `name` and `date` properties.
pub fn to_feature_collection(features: &FeatureSet) -> String {
    let items: Vec<Value> = features
        .features
        .iter()
        .map(|f| {
            let mut props = Map::new();
            props.insert("role".into(), Value::String(f.role.as_str().into()));
            if let Some(name) = &f.name {
                props.insert("name".into(), Value::String(name.clone()));
            }
            if let Some(date) = &f.date {
                props.insert("date".into(), Value::String(date.clone()));
            }
            json!({"type": "Feature", "properties": props, "geometry": geometry_json(&f.geometry)})
        })
        .collect();
    let doc = json!({"type": "FeatureCollection", "features": items});
    let mut text = serde_json::to_string_pretty(&doc).expect("in-memory JSON");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_polygon() {
        let text = r#"{"type":"FeatureCollection","features":[
            {"type":"Feature","properties":{"name":"Lunca"},"geometry":{"type":"Polygon",
             "coordinates":[[[0,0],[10,0],[10,10],[0,10],[0,0]],[[2,2],[3,2],[3,3],[2,2]]]}}]}"#;
        let fs = parse_feature_collection(text, Some(Role::Floodplain)).unwrap();
        assert_eq!(fs.len(), 1);
        let f = &fs.features[0];
        assert_eq!(f.role, Role::Floodplain);
        assert_eq!(f.name.as_deref(), Some("Lunca"));
        let Geometry::Polygon(ring) = &f.geometry else {
            panic!()
        };
        assert_eq!(ring.len(), 5);
    }

    #[test]
    fn empty_collection() {
        let fs = parse_feature_collection(r#"{"type":"FeatureCollection","features":[]}"#, None)
            .unwrap();
        assert!(fs.is_empty());
    }

    #[test]
    fn role_property_overrides_layer() {
        let text = r#"{"type":"FeatureCollection","features":[
            {"type":"Feature","properties":{"role":"road"},"geometry":{"type":"LineString","coordinates":[[0,0],[1,1]]}}]}"#;
        let fs = parse_feature_collection(text, Some(Role::River)).unwrap();
        assert_eq!(fs.features[0].role, Role::Road);
    }

    #[test]
    fn unknown_role_names_feature() {
        let text = r#"{"type":"FeatureCollection","features":[
            {"type":"Feature","properties":{"role":"forest","name":"Codru"},"geometry":{"type":"Point","coordinates":[0,0]}}]}"#;
        let err = parse_feature_collection(text, None)
            .unwrap_err()
            .to_string();
        assert!(err.contains("forest") && err.contains("Codru"), "{err}");
    }

    #[test]
    fn unsupported_geometry_is_named() {
        let text = r#"{"type":"FeatureCollection","features":[
            {"type":"Feature","properties":null,"geometry":{"type":"MultiPolygon","coordinates":[]}}]}"#;
        let err = parse_feature_collection(text, Some(Role::Pasture))
            .unwrap_err()
            .to_string();
        assert!(err.contains("MultiPolygon") && err.contains("#0"), "{err}");
    }

    #[test]
    fn malformed_json_reports_line() {
        let err = parse_feature_collection(
            "{\n\"type\": \"FeatureCollection\",\n\"features\": [\n",
            None,
        )
        .unwrap_err()
        .to_string();
        assert!(err.contains("line 4"), "{err}");
    }

    #[test]
    fn missing_role_everywhere_is_an_error() {
        let text = r#"{"type":"FeatureCollection","features":[
            {"type":"Feature","properties":{},"geometry":{"type":"Point","coordinates":[0,0]}}]}"#;
        assert!(parse_feature_collection(text, None).is_err());
    }

    #[test]
    fn writer_output_parses_back() {
        let fs = FeatureSet::new(vec![
            Feature::new(Geometry::Point(Point::new(1.5, -2.25)), Role::Sites).named("s1"),
            Feature::new(
                Geometry::Polyline(vec![Point::new(0.0, 0.0), Point::new(3.0, 4.0)]),
                Role::River,
            ),
        ]);
        let back = parse_feature_collection(&to_feature_collection(&fs), None).unwrap();
        assert_eq!(back, fs);
    }
}
