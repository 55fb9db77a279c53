//! CSV and JSON serialization of encodings.
//!
//! CSV: a header `id,e0,e1,...` followed by one row per geometry. Values are
//! written with the shortest representation that parses back to the same
//! `f64`, so files round-trip exactly and are stable across runs.
//!
//! JSON: `{"grid": {...}, "method": ..., "scale": ..., "rows": [...]}` where
//! each row is either `{"id", "values"}` or `{"id", "sparse": {"indices",
//! "values", "length"}}`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{
    densify, make_grids, sparsify, DenseEncoding, EncodingError, GridId, Method, ReferenceGrid,
    SparseEncoding, TileGrid,
};
use crate::geometry::Frame;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}: {message}")]
    Row { line: u64, message: String },
    #[error("malformed CSV: {0}")]
    Csv(String),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Encoding(#[from] EncodingError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct EncodedRow {
    pub id: String,
    pub encoding: DenseEncoding,
}

/// Writes `rows` as CSV with `n` value columns.
pub fn write_csv(rows: &[EncodedRow], n: usize) -> Result<String, IoError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header: Vec<String> = std::iter::once("id".to_string())
        .chain((0..n).map(|i| format!("e{i}")))
        .collect();
    w.write_record(&header).map_err(|e| IoError::Csv(e.to_string()))?;
    for r in rows {
        if r.encoding.len() != n {
            return Err(EncodingError::LengthMismatch {
                expected: n,
                found: r.encoding.len(),
            }
            .into());
        }
        let rec: Vec<String> = std::iter::once(r.id.clone())
            .chain(r.encoding.values().iter().map(|v| format!("{v}")))
            .collect();
        w.write_record(&rec).map_err(|e| IoError::Csv(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| IoError::Csv(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Reads CSV written by [`write_csv`], tagging every row with `grid_id`.
/// Errors name the offending line.
pub fn read_csv(text: &str, grid_id: &GridId) -> Result<Vec<EncodedRow>, IoError> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let header = r.headers().map_err(|e| IoError::Csv(e.to_string()))?.clone();
    if header.get(0) != Some("id") {
        return Err(IoError::Row {
            line: 1,
            message: "first column must be 'id'".into(),
        });
    }
    let n = header.len() - 1;
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| match e.position() {
            Some(p) => IoError::Row {
                line: p.line(),
                message: e.to_string(),
            },
            None => IoError::Csv(e.to_string()),
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != n + 1 {
            return Err(IoError::Row {
                line,
                message: format!("expected {} fields, found {}", n + 1, rec.len()),
            });
        }
        let values = rec
            .iter()
            .skip(1)
            .enumerate()
            .map(|(i, f)| {
                f.trim().parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| IoError::Row {
                    line,
                    message: format!("column e{i}: '{f}' is not a finite number"),
                })
            })
            .collect::<Result<Vec<f64>, _>>()?;
        out.push(EncodedRow {
            id: rec[0].to_string(),
            encoding: DenseEncoding::new(values, grid_id.clone()),
        });
    }
    Ok(out)
}

/// Grid description stored in JSON documents; enough to rebuild the grids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridInfo {
    pub frame: Frame,
    pub resolution: f64,
    pub nx: usize,
    pub ny: usize,
    pub id: GridId,
}

impl GridInfo {
    pub fn of(grid: &ReferenceGrid) -> Self {
        GridInfo {
            frame: *grid.frame(),
            resolution: grid.spacing(),
            nx: grid.nx(),
            ny: grid.ny(),
            id: grid.id().clone(),
        }
    }

    /// Rebuilds the grids and checks they match the stored description.
    pub fn grids(&self) -> Result<(ReferenceGrid, TileGrid), EncodingError> {
        let (r, t) = make_grids(&self.frame, self.resolution)?;
        if r.id() != &self.id || r.nx() != self.nx || r.ny() != self.ny {
            return Err(EncodingError::GridMismatch(self.id.clone(), r.id().clone()));
        }
        Ok((r, t))
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparsePayload {
    pub indices: Vec<usize>,
    pub values: Vec<f64>,
    pub length: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JsonRow {
    Dense { id: String, values: Vec<f64> },
    Sparse { id: String, sparse: SparsePayload },
}

impl JsonRow {
    pub fn id(&self) -> &str {
        match self {
            JsonRow::Dense { id, .. } | JsonRow::Sparse { id, .. } => id,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EncodingDocument {
    pub grid: GridInfo,
    pub method: Method,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
    pub rows: Vec<JsonRow>,
}

impl EncodingDocument {
    /// Builds a document from dense rows, sparsifying each at `threshold`
    /// when one is given.
    pub fn from_rows(
        grid: GridInfo,
        method: Method,
        scale: Option<f64>,
        rows: &[EncodedRow],
        threshold: Option<f64>,
    ) -> Result<Self, EncodingError> {
        let rows = rows
            .iter()
            .map(|r| {
                if r.encoding.grid_id() != &grid.id {
                    return Err(EncodingError::GridMismatch(r.encoding.grid_id().clone(), grid.id.clone()));
                }
                Ok(match threshold {
                    None => JsonRow::Dense {
                        id: r.id.clone(),
                        values: r.encoding.values().to_vec(),
                    },
                    Some(t) => {
                        let s = sparsify(&r.encoding, t)?;
                        JsonRow::Sparse {
                            id: r.id.clone(),
                            sparse: SparsePayload {
                                indices: s.indices().to_vec(),
                                values: s.values().to_vec(),
                                length: s.len(),
                            },
                        }
                    }
                })
            })
            .collect::<Result<_, _>>()?;
        Ok(EncodingDocument {
            grid,
            method,
            scale,
            rows,
        })
    }

    /// Dense rows, validating lengths and sparse structure.
    pub fn dense_rows(&self) -> Result<Vec<EncodedRow>, EncodingError> {
        let n = self.grid.len();
        self.rows
            .iter()
            .map(|r| {
                let encoding = match r {
                    JsonRow::Dense { values, .. } => DenseEncoding::new(values.clone(), self.grid.id.clone()),
                    JsonRow::Sparse { sparse, .. } => densify(&SparseEncoding::new(
                        sparse.indices.clone(),
                        sparse.values.clone(),
                        sparse.length,
                        self.grid.id.clone(),
                    )?),
                };
                if encoding.len() != n {
                    return Err(EncodingError::LengthMismatch {
                        expected: n,
                        found: encoding.len(),
                    });
                }
                Ok(EncodedRow {
                    id: r.id().to_string(),
                    encoding,
                })
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("encoding document serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, IoError> {
        Ok(serde_json::from_str(text)?)
    }
}
