use serde::{Deserialize, Serialize};

use super::{EncodingError, GridId};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseEncoding {
    values: Vec<f64>,
    grid_id: GridId,
}

impl DenseEncoding {
    pub fn new(values: Vec<f64>, grid_id: GridId) -> Self {
        DenseEncoding { values, grid_id }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn grid_id(&self) -> &GridId {
        &self.grid_id
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Euclidean distance; both encodings must come from the same grid.
    pub fn distance(&self, other: &DenseEncoding) -> Result<f64, EncodingError> {
        if self.grid_id != other.grid_id {
            return Err(EncodingError::GridMismatch(self.grid_id.clone(), other.grid_id.clone()));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseEncoding {
    indices: Vec<usize>,
    values: Vec<f64>,
    length: usize,
    grid_id: GridId,
}

impl SparseEncoding {
    /// Validates strictly increasing in-range indices and nonzero values.
    pub fn new(
        indices: Vec<usize>,
        values: Vec<f64>,
        length: usize,
        grid_id: GridId,
    ) -> Result<Self, EncodingError> {
        if indices.len() != values.len() {
            return Err(EncodingError::Config("indices and values differ in length".into()));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) || indices.last().is_some_and(|&i| i >= length) {
            return Err(EncodingError::Config(
                "indices must be strictly increasing and below the length".into(),
            ));
        }
        if values.iter().any(|&v| v == 0.0 || !v.is_finite()) {
            return Err(EncodingError::Config("sparse values must be finite and nonzero".into()));
        }
        Ok(SparseEncoding {
            indices,
            values,
            length,
            grid_id,
        })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn len(&self) -> usize {
        self.length
    }
    pub fn is_empty(&self) -> bool {
        self.length == 0
    }
    pub fn nnz(&self) -> usize {
        self.indices.len()
    }
    pub fn grid_id(&self) -> &GridId {
        &self.grid_id
    }

    /// Sparse dot product (merge over sorted indices).
    pub fn dot(&self, other: &SparseEncoding) -> Result<f64, EncodingError> {
        if self.grid_id != other.grid_id {
            return Err(EncodingError::GridMismatch(self.grid_id.clone(), other.grid_id.clone()));
        }
        let (mut i, mut j, mut acc) = (0, 0, 0.0);
        while i < self.indices.len() && j < other.indices.len() {
            match self.indices[i].cmp(&other.indices[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc += self.values[i] * other.values[j];
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(acc)
    }
}

/// Drops every entry below `threshold` (and every zero).
pub fn sparsify(e: &DenseEncoding, threshold: f64) -> Result<SparseEncoding, EncodingError> {
    if !(0.0..1.0).contains(&threshold) {
        return Err(EncodingError::Config(format!("threshold {threshold} outside [0, 1)")));
    }
    let (indices, values): (Vec<usize>, Vec<f64>) = e
        .values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v != 0.0 && v >= threshold)
        .map(|(i, &v)| (i, v))
        .unzip();
    Ok(SparseEncoding {
        indices,
        values,
        length: e.len(),
        grid_id: e.grid_id.clone(),
    })
}

pub fn densify(s: &SparseEncoding) -> DenseEncoding {
    let mut values = vec![0.0; s.length];
    for (&i, &v) in s.indices.iter().zip(&s.values) {
        values[i] = v;
    }
    DenseEncoding {
        values,
        grid_id: s.grid_id.clone(),
    }
}
