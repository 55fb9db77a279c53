use std::fmt::Write as _;

use super::{CodecError, ParseError};
use crate::geometry::{
    Geometry, GeometryError, LineString, MultiLineString, MultiPoint, MultiPolygon, Point2, Polygon,
};

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, message: impl Into<String>, expected: impl Into<String>) -> ParseError {
        ParseError {
            byte_offset: self.pos.min(self.src.len()),
            message: message.into(),
            expected: expected.into(),
        }
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.as_bytes().get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        match self.peek() {
            Some(b) if b == c => {
                self.pos += 1;
                Ok(())
            }
            Some(_) => Err(self.err("unexpected character", format!("'{}'", c as char))),
            None => Err(self.err("unexpected end of input", format!("'{}'", c as char))),
        }
    }

    fn word(&mut self) -> &'a str {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn number(&mut self) -> Result<f64, ParseError> {
        self.skip_ws();
        let bytes = self.src.as_bytes();
        let start = self.pos;
        let mut i = self.pos;
        if i < bytes.len() && (bytes[i] == b'-' || bytes[i] == b'+') {
            i += 1;
        }
        let digits_start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        let mut n_digits = i - digits_start;
        if i < bytes.len() && bytes[i] == b'.' {
            i += 1;
            let frac = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            n_digits += i - frac;
        }
        if n_digits == 0 {
            return Err(self.err("malformed number", "a number"));
        }
        if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
            let mut j = i + 1;
            if j < bytes.len() && (bytes[j] == b'-' || bytes[j] == b'+') {
                j += 1;
            }
            let exp_start = j;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            if j == exp_start {
                self.pos = j;
                return Err(self.err("malformed exponent", "exponent digits"));
            }
            i = j;
        }
        let v: f64 = self.src[start..i]
            .parse()
            .map_err(|_| self.err("malformed number", "a number"))?;
        if !v.is_finite() {
            return Err(self.err("number out of range", "a finite number"));
        }
        self.pos = i;
        Ok(v)
    }

    fn coord(&mut self) -> Result<Point2, ParseError> {
        let x = self.number()?;
        let y = self.number()?;
        if let Some(b) = self.peek() {
            if b == b'-' || b == b'+' || b == b'.' || b.is_ascii_digit() {
                return Err(self.err("only 2-D coordinates are supported", "',' or ')'"));
            }
        }
        Ok(Point2::new(x, y))
    }

    /// `( x y, x y, ... )`
    fn coord_list(&mut self) -> Result<Vec<Point2>, ParseError> {
        self.expect(b'(')?;
        let mut out = vec![self.coord()?];
        while self.peek() == Some(b',') {
            self.pos += 1;
            out.push(self.coord()?);
        }
        self.expect(b')')?;
        Ok(out)
    }

    /// `( item, item, ... )`
    fn list_of<T>(
        &mut self,
        mut item: impl FnMut(&mut Self) -> Result<T, CodecError>,
    ) -> Result<Vec<T>, CodecError> {
        self.expect(b'(')?;
        let mut out = vec![item(self)?];
        while self.peek() == Some(b',') {
            self.pos += 1;
            out.push(item(self)?);
        }
        self.expect(b')')?;
        Ok(out)
    }

    fn polygon_body(&mut self) -> Result<Polygon, CodecError> {
        let mut rings = self.list_of(|c| Ok(c.coord_list()?))?;
        let exterior = rings.remove(0);
        Polygon::new(exterior, rings).map_err(invalid)
    }
}

fn invalid(source: GeometryError) -> CodecError {
    CodecError::Invalid {
        feature: None,
        source,
    }
}

/// Parses a single WKT geometry. Keywords are case-insensitive; `EMPTY`
/// geometries, Z/M coordinates and `GEOMETRYCOLLECTION` are rejected.
pub fn parse_wkt(text: &str) -> Result<Geometry, CodecError> {
    let mut c = Cursor { src: text, pos: 0 };
    let kw_pos = {
        c.skip_ws();
        c.pos
    };
    let kw = c.word().to_ascii_uppercase();
    if kw.is_empty() {
        return Err(c.err("missing geometry keyword", "a geometry type").into());
    }
    let after_kw = c.pos;
    let modifier = c.word().to_ascii_uppercase();
    match modifier.as_str() {
        "" => {}
        "EMPTY" => {
            return Err(c.err("EMPTY geometries are not supported", "'('").into());
        }
        "Z" | "M" | "ZM" => {
            c.pos = after_kw;
            return Err(c.err("only 2-D coordinates are supported", "'('").into());
        }
        _ => {
            c.pos = after_kw;
            return Err(c.err("unexpected word", "'('").into());
        }
    }
    let geom = match kw.as_str() {
        "POINT" => {
            c.expect(b'(')?;
            let p = c.coord()?;
            c.expect(b')')?;
            Geometry::Point(p)
        }
        "LINESTRING" => {
            let pts = c.coord_list()?;
            Geometry::LineString(LineString::new(pts).map_err(invalid)?)
        }
        "POLYGON" => Geometry::Polygon(c.polygon_body()?),
        "MULTIPOINT" => {
            let pts = c.list_of(|c| {
                if c.peek() == Some(b'(') {
                    c.pos += 1;
                    let p = c.coord()?;
                    c.expect(b')')?;
                    Ok(p)
                } else {
                    Ok(c.coord()?)
                }
            })?;
            Geometry::MultiPoint(MultiPoint::new(pts).map_err(invalid)?)
        }
        "MULTILINESTRING" => {
            let parts = c.list_of(|c| {
                LineString::new(c.coord_list()?).map_err(invalid)
            })?;
            Geometry::MultiLineString(
                MultiLineString::new(parts).map_err(invalid)?,
            )
        }
        "MULTIPOLYGON" => {
            let parts = c.list_of(|c| c.polygon_body())?;
            Geometry::MultiPolygon(MultiPolygon::new(parts).map_err(invalid)?)
        }
        "GEOMETRYCOLLECTION" | "CIRCULARSTRING" | "COMPOUNDCURVE" | "CURVEPOLYGON"
        | "MULTICURVE" | "MULTISURFACE" | "TRIANGLE" | "TIN" | "POLYHEDRALSURFACE" => {
            return Err(CodecError::Unsupported { type_name: kw });
        }
        _ => {
            c.pos = kw_pos;
            return Err(c.err(format!("unknown geometry type '{kw}'"), "a geometry type").into());
        }
    };
    c.skip_ws();
    if c.pos != text.len() {
        return Err(c.err("trailing characters", "end of input").into());
    }
    Ok(geom)
}

fn write_coord(out: &mut String, p: &Point2) {
    let _ = write!(out, "{} {}", p.x, p.y);
}

fn write_coords(out: &mut String, pts: &[Point2]) {
    out.push('(');
    for (i, p) in pts.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write_coord(out, p);
    }
    out.push(')');
}

fn write_polygon_body(out: &mut String, poly: &Polygon) {
    out.push('(');
    for (i, ring) in poly.rings().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write_coords(out, ring);
    }
    out.push(')');
}

fn write_joined<T>(out: &mut String, items: &[T], mut f: impl FnMut(&mut String, &T)) {
    out.push('(');
    for (i, it) in items.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        f(out, it);
    }
    out.push(')');
}

pub fn write_wkt(g: &Geometry) -> String {
    let mut out = String::new();
    match g {
        Geometry::Point(p) => {
            out.push_str("POINT (");
            write_coord(&mut out, p);
            out.push(')');
        }
        Geometry::LineString(l) => {
            out.push_str("LINESTRING ");
            write_coords(&mut out, l.points());
        }
        Geometry::Polygon(p) => {
            out.push_str("POLYGON ");
            write_polygon_body(&mut out, p);
        }
        Geometry::MultiPoint(m) => {
            out.push_str("MULTIPOINT ");
            write_joined(&mut out, m.points(), |o, p| {
                o.push('(');
                write_coord(o, p);
                o.push(')');
            });
        }
        Geometry::MultiLineString(m) => {
            out.push_str("MULTILINESTRING ");
            write_joined(&mut out, m.parts(), |o, l| write_coords(o, l.points()));
        }
        Geometry::MultiPolygon(m) => {
            out.push_str("MULTIPOLYGON ");
            write_joined(&mut out, m.parts(), write_polygon_body);
        }
    }
    out
}
