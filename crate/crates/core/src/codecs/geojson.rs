use indexmap::IndexMap;
use serde_json::{json, Map, Value};

use super::{CodecError, ParseError};
use crate::geometry::{
    Geometry, GeometryError, LineString, MultiLineString, MultiPoint, MultiPolygon, Point2, Polygon,
};

/// Feature properties. Each value is kept as the compact JSON text it was
/// read from, so arbitrary members survive a round trip untouched.
pub type Properties = IndexMap<String, String>;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FeatureWarnings {
    /// Some positions had more than two ordinates; the extras were dropped.
    pub dropped_dimensions: bool,
    /// Some polygon rings lacked the closing position and were closed.
    pub closed_rings: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Feature {
    pub geometry: Geometry,
    pub properties: Properties,
    pub warnings: FeatureWarnings,
}

impl Feature {
    pub fn new(geometry: Geometry) -> Self {
        Feature {
            geometry,
            properties: Properties::new(),
            warnings: FeatureWarnings::default(),
        }
    }

    /// Stores `value` serialized as JSON.
    pub fn set_property(&mut self, key: impl Into<String>, value: impl Into<Value>) {
        self.properties.insert(key.into(), value.into().to_string());
    }

    pub fn property(&self, key: &str) -> Option<Value> {
        self.properties.get(key).and_then(|s| serde_json::from_str(s).ok())
    }

    pub fn property_f64(&self, key: &str) -> Option<f64> {
        self.property(key).and_then(|v| v.as_f64())
    }
}

fn offset_of(text: &str, line: usize, column: usize) -> usize {
    let mut off = 0;
    for (i, l) in text.split_inclusive('\n').enumerate() {
        if i + 1 == line {
            return (off + column.saturating_sub(1)).min(text.len());
        }
        off += l.len();
    }
    text.len()
}

struct Reader {
    feature: Option<usize>,
    warnings: FeatureWarnings,
}

impl Reader {
    fn structure(&self, message: impl Into<String>) -> CodecError {
        CodecError::Structure {
            feature: self.feature,
            message: message.into(),
        }
    }

    fn invalid(&self, source: GeometryError) -> CodecError {
        CodecError::Invalid {
            feature: self.feature,
            source,
        }
    }

    fn position(&mut self, v: &Value) -> Result<Point2, CodecError> {
        let arr = v
            .as_array()
            .ok_or_else(|| self.structure("position is not an array"))?;
        if arr.len() < 2 {
            return Err(self.structure("position needs at least two numbers"));
        }
        if arr.len() > 2 {
            self.warnings.dropped_dimensions = true;
        }
        let num = |x: &Value| x.as_f64().ok_or_else(|| self.structure("coordinate is not a number"));
        Ok(Point2::new(num(&arr[0])?, num(&arr[1])?))
    }

    fn positions(&mut self, v: &Value) -> Result<Vec<Point2>, CodecError> {
        v.as_array()
            .ok_or_else(|| self.structure("expected an array of positions"))?
            .iter()
            .map(|p| self.position(p))
            .collect()
    }

    fn array<'v>(&self, v: &'v Value) -> Result<&'v Vec<Value>, CodecError> {
        v.as_array().ok_or_else(|| self.structure("expected an array"))
    }

    fn ring(&mut self, v: &Value) -> Result<Vec<Point2>, CodecError> {
        let mut ring = self.positions(v)?;
        if ring.len() >= 3 && ring.first() != ring.last() {
            ring.push(ring[0]);
            self.warnings.closed_rings = true;
        }
        Ok(ring)
    }

    fn polygon(&mut self, v: &Value) -> Result<Polygon, CodecError> {
        let rings = self.array(v)?;
        if rings.is_empty() {
            return Err(self.structure("polygon has no rings"));
        }
        let mut parsed = rings
            .iter()
            .map(|r| self.ring(r))
            .collect::<Result<Vec<_>, _>>()?;
        let exterior = parsed.remove(0);
        Polygon::new(exterior, parsed).map_err(|e| self.invalid(e))
    }

    fn geometry(&mut self, v: &Value) -> Result<Geometry, CodecError> {
        let obj = v
            .as_object()
            .ok_or_else(|| self.structure("geometry is not an object"))?;
        let ty = obj
            .get("type")
            .and_then(Value::as_str)
            .ok_or_else(|| self.structure("geometry has no type"))?;
        if ty == "GeometryCollection" {
            return Err(CodecError::Unsupported {
                type_name: ty.to_string(),
            });
        }
        let coords = obj
            .get("coordinates")
            .ok_or_else(|| self.structure("geometry has no coordinates"))?;
        Ok(match ty {
            "Point" => Geometry::Point(self.position(coords)?),
            "LineString" => {
                let pts = self.positions(coords)?;
                Geometry::LineString(LineString::new(pts).map_err(|e| self.invalid(e))?)
            }
            "Polygon" => Geometry::Polygon(self.polygon(coords)?),
            "MultiPoint" => {
                let pts = self.positions(coords)?;
                Geometry::MultiPoint(MultiPoint::new(pts).map_err(|e| self.invalid(e))?)
            }
            "MultiLineString" => {
                let parts = self
                    .array(coords)?
                    .iter()
                    .map(|l| {
                        let pts = self.positions(l)?;
                        LineString::new(pts).map_err(|e| self.invalid(e))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Geometry::MultiLineString(
                    MultiLineString::new(parts).map_err(|e| self.invalid(e))?,
                )
            }
            "MultiPolygon" => {
                let parts = self
                    .array(coords)?
                    .iter()
                    .map(|p| self.polygon(p))
                    .collect::<Result<Vec<_>, _>>()?;
                Geometry::MultiPolygon(MultiPolygon::new(parts).map_err(|e| self.invalid(e))?)
            }
            other => {
                return Err(CodecError::Unsupported {
                    type_name: other.to_string(),
                })
            }
        })
    }

    fn feature(&mut self, v: &Value) -> Result<Feature, CodecError> {
        let obj = v
            .as_object()
            .ok_or_else(|| self.structure("feature is not an object"))?;
        let geom = match obj.get("geometry") {
            Some(Value::Null) | None => return Err(self.structure("feature has no geometry")),
            Some(g) => self.geometry(g)?,
        };
        let mut properties = Properties::new();
        match obj.get("properties") {
            Some(Value::Object(m)) => {
                for (k, val) in m {
                    properties.insert(k.clone(), val.to_string());
                }
            }
            Some(Value::Null) | None => {}
            Some(_) => return Err(self.structure("properties is not an object")),
        }
        Ok(Feature {
            geometry: geom,
            properties,
            warnings: self.warnings,
        })
    }
}

/// Reads a FeatureCollection, a single Feature, or a bare geometry object.
/// Feature order is preserved.
pub fn parse_geojson(text: &str) -> Result<Vec<Feature>, CodecError> {
    let root: Value = serde_json::from_str(text).map_err(|e| {
        CodecError::Parse(ParseError {
            byte_offset: offset_of(text, e.line(), e.column()),
            message: e.to_string(),
            expected: "valid JSON".into(),
        })
    })?;
    let ty = root
        .get("type")
        .and_then(Value::as_str)
        .ok_or_else(|| CodecError::Structure {
            feature: None,
            message: "top-level object has no type".into(),
        })?;
    let fresh = |feature| Reader {
        feature,
        warnings: FeatureWarnings::default(),
    };
    match ty {
        "FeatureCollection" => {
            let feats = root
                .get("features")
                .and_then(Value::as_array)
                .ok_or_else(|| CodecError::Structure {
                    feature: None,
                    message: "FeatureCollection has no features array".into(),
                })?;
            feats
                .iter()
                .enumerate()
                .map(|(i, f)| fresh(Some(i)).feature(f))
                .collect()
        }
        "Feature" => Ok(vec![fresh(Some(0)).feature(&root)?]),
        _ => {
            let mut r = fresh(None);
            let g = r.geometry(&root)?;
            Ok(vec![Feature {
                geometry: g,
                properties: Properties::new(),
                warnings: r.warnings,
            }])
        }
    }
}

fn pos(p: &Point2) -> Value {
    json!([p.x, p.y])
}

fn ring_json(r: &[Point2]) -> Value {
    Value::Array(r.iter().map(pos).collect())
}

fn polygon_json(p: &Polygon) -> Value {
    Value::Array(p.rings().map(ring_json).collect())
}

fn geometry_json(g: &Geometry) -> Value {
    let (ty, coords) = match g {
        Geometry::Point(p) => ("Point", pos(p)),
        Geometry::LineString(l) => ("LineString", ring_json(l.points())),
        Geometry::Polygon(p) => ("Polygon", polygon_json(p)),
        Geometry::MultiPoint(m) => ("MultiPoint", ring_json(m.points())),
        Geometry::MultiLineString(m) => (
            "MultiLineString",
            Value::Array(m.parts().iter().map(|l| ring_json(l.points())).collect()),
        ),
        Geometry::MultiPolygon(m) => (
            "MultiPolygon",
            Value::Array(m.parts().iter().map(polygon_json).collect()),
        ),
    };
    json!({ "type": ty, "coordinates": coords })
}

/// Writes a FeatureCollection, one feature per line.
pub fn write_geojson(features: &[Feature]) -> String {
    let mut out = String::from("{\"type\":\"FeatureCollection\",\"features\":[");
    for (i, f) in features.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push('\n');
        let mut props = Map::new();
        for (k, raw) in &f.properties {
            let v = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.clone()));
            props.insert(k.clone(), v);
        }
        let feat = json!({
            "type": "Feature",
            "geometry": geometry_json(&f.geometry),
            "properties": Value::Object(props),
        });
        out.push_str(&feat.to_string());
    }
    out.push_str("\n]}\n");
    out
}
