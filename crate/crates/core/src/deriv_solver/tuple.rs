use std::fmt;

use serde::{Deserialize, Serialize};

use super::SolverError;
use crate::exact::{Matrix, Rational};

/// A linear operator on the algebra, as its matrix in the algebra's basis.
/// Column `j` holds the coordinates of the image of `e_{j+1}`.
pub type Endo = Matrix;

/// `(f_0; f_1, ..., f_n)`: a head map and one tail map per argument slot.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DerivationTuple {
    head: Endo,
    tail: Vec<Endo>,
}

impl DerivationTuple {
    pub fn new(head: Endo, tail: Vec<Endo>) -> Result<Self, SolverError> {
        if !head.is_square() {
            return Err(SolverError::Shape(format!(
                "head is {}x{}, not square",
                head.rows(),
                head.cols()
            )));
        }
        if tail.is_empty() {
            return Err(SolverError::Shape("tuple has no tail maps".into()));
        }
        if let Some(k) = tail
            .iter()
            .position(|f| f.rows() != head.rows() || f.cols() != head.cols())
        {
            return Err(SolverError::Shape(format!(
                "tail map f_{} is {}x{}, head is {}x{}",
                k + 1,
                tail[k].rows(),
                tail[k].cols(),
                head.rows(),
                head.cols()
            )));
        }
        Ok(Self { head, tail })
    }

    /// `(head; f, ..., f)` with `n` copies of `f`.
    pub fn uniform(head: Endo, f: Endo, n: usize) -> Result<Self, SolverError> {
        Self::new(head, vec![f; n])
    }

    pub fn zero(dim: usize, n: usize) -> Self {
        Self {
            head: Matrix::zeros(dim, dim),
            tail: vec![Matrix::zeros(dim, dim); n],
        }
    }

    pub fn head(&self) -> &Endo {
        &self.head
    }

    pub fn tail(&self) -> &[Endo] {
        &self.tail
    }

    /// `f_k` for `k` in `0..=n`, with `f_0` the head.
    pub fn component(&self, k: usize) -> &Endo {
        if k == 0 {
            &self.head
        } else {
            &self.tail[k - 1]
        }
    }

    pub fn components(&self) -> impl Iterator<Item = &Endo> {
        std::iter::once(&self.head).chain(self.tail.iter())
    }

    pub fn arity(&self) -> usize {
        self.tail.len()
    }

    pub fn dim(&self) -> usize {
        self.head.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.components().all(Matrix::is_zero)
    }

    /// Unknown ordering used by the solver: head entries row-major, then
    /// `f_1`, ..., `f_n`.
    pub fn flatten(&self) -> Vec<Rational> {
        self.components()
            .flat_map(|m| m.entries().iter().cloned())
            .collect()
    }

    pub fn from_flat(n: usize, d: usize, flat: &[Rational]) -> Self {
        assert_eq!(flat.len(), (n + 1) * d * d, "from_flat: wrong length");
        let mut maps = flat
            .chunks(d * d)
            .map(|c| Matrix::new(d, d, c.to_vec()).expect("chunk is d*d"));
        let head = maps.next().expect("n >= 1");
        Self {
            head,
            tail: maps.collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            head: &self.head + &other.head,
            tail: self
                .tail
                .iter()
                .zip(&other.tail)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            head: &self.head - &other.head,
            tail: self
                .tail
                .iter()
                .zip(&other.tail)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self {
            head: self.head.scale(s),
            tail: self.tail.iter().map(|m| m.scale(s)).collect(),
        }
    }

    /// Restriction of every component to the coordinate block `range`.
    pub fn restrict(&self, range: std::ops::Range<usize>) -> Self {
        Self {
            head: self.head.submatrix(range.clone(), range.clone()),
            tail: self
                .tail
                .iter()
                .map(|m| m.submatrix(range.clone(), range.clone()))
                .collect(),
        }
    }

    /// JSON list of `n+1` matrices of rational strings, row-major.
    pub fn to_json(&self) -> String {
        let file: TupleFile = self.components().map(Matrix::to_strings).collect();
        serde_json::to_string_pretty(&file).expect("tuple serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, SolverError> {
        let file: TupleFile =
            serde_json::from_str(text).map_err(|e| SolverError::Parse(e.to_string()))?;
        let mut maps = file
            .iter()
            .map(|m| Matrix::from_strings(m).map_err(|e| SolverError::Parse(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        if maps.len() < 2 {
            return Err(SolverError::Shape(format!(
                "tuple file lists {} matrices, need at least 2",
                maps.len()
            )));
        }
        let head = maps.remove(0);
        Self::new(head, maps)
    }
}

type TupleFile = Vec<Vec<Vec<String>>>;

impl fmt::Debug for DerivationTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DerivationTuple")
            .field("head", &self.head)
            .field("tail", &self.tail)
            .finish()
    }
}

/// Serialized matrix (rows of rational strings) or tuple of matrices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementJson {
    Endo(Vec<Vec<String>>),
    Tuple(Vec<Vec<Vec<String>>>),
}
