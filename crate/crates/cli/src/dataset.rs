//! On-disk dataset format: a JSON document with interpolation nodes.
//!
//! Complex numbers are two-element arrays `[re, im]`; a matrix is an n x n
//! array of those in row order.

use num_complex::Complex64;
use serde::Deserialize;
use specball::checks::InterpolationDataset;
use specball::matrix::ComplexMatrix;
use specball::matspec::Tolerances;

pub const DATASET_VERSION: u32 = 1;

#[derive(Debug, Deserialize)]
pub struct DatasetFile {
    pub version: u32,
    pub n: usize,
    pub nodes: Vec<NodeEntry>,
}

#[derive(Debug, Deserialize)]
pub struct NodeEntry {
    pub zeta: [f64; 2],
    #[serde(rename = "W")]
    pub matrix: Vec<Vec<[f64; 2]>>,
}

impl DatasetFile {
    pub fn parse(text: &str) -> Result<DatasetFile, String> {
        serde_json::from_str(text).map_err(|e| format!("dataset does not parse: {e}"))
    }

    /// Validates shapes and hands off to the library-level validation.
    pub fn into_dataset(self, tols: &Tolerances) -> Result<InterpolationDataset, String> {
        if self.version != DATASET_VERSION {
            return Err(format!(
                "unsupported dataset version {} (expected {DATASET_VERSION})",
                self.version
            ));
        }
        if self.nodes.is_empty() {
            return Err("dataset has no nodes".to_string());
        }
        let n = self.n;
        let mut nodes = Vec::with_capacity(self.nodes.len());
        for (j, entry) in self.nodes.into_iter().enumerate() {
            if entry.matrix.len() != n || entry.matrix.iter().any(|row| row.len() != n) {
                return Err(format!("node {j}: matrix is not {n} x {n}"));
            }
            let rows = entry
                .matrix
                .into_iter()
                .map(|row| {
                    row.into_iter()
                        .map(|[re, im]| Complex64::new(re, im))
                        .collect()
                })
                .collect();
            let w = ComplexMatrix::from_rows(rows).map_err(|e| format!("node {j}: {e}"))?;
            nodes.push((Complex64::new(entry.zeta[0], entry.zeta[1]), w));
        }
        InterpolationDataset::new(nodes, tols).map_err(|e| e.to_string())
    }
}

/// Parses a coordinate point from a JSON-ish argument: a bare number is a
/// one-coordinate point, an array may hold reals or `[re, im]` pairs.
pub fn parse_point(text: &str) -> Result<Vec<Complex64>, String> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| format!("point does not parse: {e}"))?;
    match value {
        serde_json::Value::Number(x) => {
            let re = x.as_f64().ok_or("point is not a finite number")?;
            Ok(vec![Complex64::new(re, 0.0)])
        }
        serde_json::Value::Array(items) => {
            if items.is_empty() {
                return Err("a point needs at least one coordinate".to_string());
            }
            items
                .into_iter()
                .enumerate()
                .map(|(k, item)| match item {
                    serde_json::Value::Number(x) => x
                        .as_f64()
                        .map(|re| Complex64::new(re, 0.0))
                        .ok_or_else(|| format!("coordinate {k} is not finite")),
                    serde_json::Value::Array(pair) => {
                        let nums: Option<Vec<f64>> =
                            pair.iter().map(serde_json::Value::as_f64).collect();
                        match nums.as_deref() {
                            Some([re, im]) => Ok(Complex64::new(*re, *im)),
                            _ => Err(format!("coordinate {k} is not a [re, im] pair")),
                        }
                    }
                    _ => Err(format!("coordinate {k} is neither a number nor a pair")),
                })
                .collect()
        }
        _ => Err("a point is a number or an array of coordinates".to_string()),
    }
}

/// Parses a complex scalar given as `re` or `re,im`.
pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = text.split(',').collect();
    let parse = |s: &str| -> Result<f64, String> {
        s.trim()
            .parse::<f64>()
            .map_err(|_| format!("`{s}` is not a real number"))
    };
    match parts.as_slice() {
        [re] => Ok(Complex64::new(parse(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(parse(re)?, parse(im)?)),
        _ => Err("complex values are written `re` or `re,im`".to_string()),
    }
}
