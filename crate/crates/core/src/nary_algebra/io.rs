//! JSON algebra files.
//!
//! ```json
//! { "arity": 3, "dim": 4, "basis": ["e1","e2","e3","e4"],
//!   "products": [ { "args": [1,2,3], "value": { "4": "1" } } ] }
//! ```
//!
//! `args` are 1-based and strictly increasing, `value` maps 1-based basis
//! indices to rational strings, unlisted tuples are zero. An optional
//! `"blocks": [[1,3],[4,6]]` (1-based inclusive ranges) records a direct-sum
//! decomposition.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{AlgebraError, NaryAlgebra};
use crate::exact::{format_rational, parse_rational};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub arity: usize,
    pub dim: usize,
    pub basis: Vec<String>,
    pub products: Vec<ProductEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<[usize; 2]>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductEntry {
    pub args: Vec<usize>,
    pub value: BTreeMap<usize, String>,
}

impl NaryAlgebra {
    pub fn to_file(&self) -> AlgebraFile {
        AlgebraFile {
            arity: self.arity,
            dim: self.dim(),
            basis: self.basis.clone(),
            products: self
                .products
                .iter()
                .map(|(args, value)| ProductEntry {
                    args: args.iter().map(|a| a + 1).collect(),
                    value: value
                        .iter()
                        .map(|(k, c)| (k + 1, format_rational(c)))
                        .collect(),
                })
                .collect(),
            blocks: self
                .blocks
                .as_ref()
                .map(|bs| bs.iter().map(|b| [b.start + 1, b.end]).collect()),
        }
    }

    pub fn from_file(file: AlgebraFile) -> Result<Self, AlgebraError> {
        if file.arity < 2 {
            return Err(AlgebraError::InvalidArity(file.arity));
        }
        if file.basis.len() != file.dim {
            return Err(AlgebraError::DimensionMismatch {
                dim: file.dim,
                basis_len: file.basis.len(),
            });
        }
        let dim = file.dim;
        let mut products = Vec::with_capacity(file.products.len());
        for (entry, p) in file.products.into_iter().enumerate() {
            if p.args.len() != file.arity {
                return Err(AlgebraError::ArityMismatch {
                    entry,
                    expected: file.arity,
                    found: p.args.len(),
                });
            }
            let range_check = |i: usize| {
                if i == 0 || i > dim {
                    Err(AlgebraError::IndexOutOfRange {
                        entry,
                        index: i,
                        dim,
                    })
                } else {
                    Ok(i - 1)
                }
            };
            let args = p
                .args
                .iter()
                .map(|&i| range_check(i))
                .collect::<Result<Vec<_>, _>>()?;
            let mut value = Vec::with_capacity(p.value.len());
            for (k, s) in p.value {
                let c = parse_rational(&s).map_err(|e| AlgebraError::BadCoefficient {
                    entry,
                    message: e.to_string(),
                })?;
                value.push((range_check(k)?, c));
            }
            products.push((args, value));
        }
        let alg = NaryAlgebra::new(file.arity, file.basis, products)?;
        match file.blocks {
            None => Ok(alg),
            Some(bs) => {
                let ranges = bs
                    .iter()
                    .map(|&[a, b]| {
                        if a == 0 || b < a {
                            Err(AlgebraError::BadBlocks(format!("bad block [{a}, {b}]")))
                        } else {
                            Ok(a - 1..b)
                        }
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                alg.with_blocks(ranges)
            }
        }
    }

    /// Pretty-printed JSON with fixed key order.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("algebra file serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, AlgebraError> {
        let file: AlgebraFile =
            serde_json::from_str(text).map_err(|e| AlgebraError::Malformed(e.to_string()))?;
        Self::from_file(file)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), AlgebraError> {
        let path = path.as_ref();
        fs::write(path, self.to_json() + "\n").map_err(|e| AlgebraError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, AlgebraError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| AlgebraError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::from_json(&text)
    }

    /// SHA-256 of the canonical JSON serialization, hex encoded.
    pub fn content_hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_json().as_bytes()))
    }
}
