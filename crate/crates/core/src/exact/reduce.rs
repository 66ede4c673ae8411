use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::matrix::nullspace_from_rref;
use super::{Matrix, Rational};

type SparseRow = Vec<(usize, BigInt)>;

/// Incremental row echelon reducer for tall, sparse systems.
///
/// Rows are fed one at a time and reduced fraction-free against the pivot
/// rows seen so far; rows that reduce to zero are dropped. At most `cols`
/// rows are ever retained, so assembling tens of thousands of sparse
/// equations costs little more than the final dense RREF on the survivors.
#[derive(Debug, Clone)]
pub struct RowReducer {
    cols: usize,
    pivots: BTreeMap<usize, SparseRow>,
}

impl RowReducer {
    pub fn new(cols: usize) -> Self {
        Self {
            cols,
            pivots: BTreeMap::new(),
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Adds one equation given as `(column, coefficient)` pairs. Repeated
    /// columns are summed. Returns `true` if the rank grew.
    pub fn push(&mut self, terms: impl IntoIterator<Item = (usize, Rational)>) -> bool {
        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
        for (c, v) in terms {
            assert!(c < self.cols, "column {c} out of range {}", self.cols);
            if v.is_zero() {
                continue;
            }
            *acc.entry(c).or_insert_with(Rational::zero) += v;
        }
        acc.retain(|_, v| !v.is_zero());
        if acc.is_empty() {
            return false;
        }
        let lcm = acc.values().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
        let mut row: SparseRow = acc
            .into_iter()
            .map(|(c, v)| (c, v.numer() * (&lcm / v.denom())))
            .collect();
        normalize(&mut row);

        loop {
            let lead = match row.first() {
                None => return false,
                Some(&(c, _)) => c,
            };
            match self.pivots.get(&lead) {
                None => {
                    self.pivots.insert(lead, row);
                    return true;
                }
                Some(p) => row = combine(&row, p),
            }
        }
    }

    pub fn push_dense(&mut self, row: &[Rational]) -> bool {
        self.push(row.iter().cloned().enumerate())
    }

    /// The retained rows in reduced row echelon form.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = Matrix::zeros(self.pivots.len(), self.cols);
        for (r, row) in self.pivots.values().enumerate() {
            for (c, v) in row {
                m[(r, *c)] = Rational::from_integer(v.clone());
            }
        }
        m.rref()
    }

    /// Kernel basis of everything pushed so far, as plain vectors.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let (r, p) = self.rref();
        nullspace_from_rref(&r, &p)
    }
}

/// Cancels the leading entry of `row` against pivot row `p` (same leading column).
fn combine(row: &SparseRow, p: &SparseRow) -> SparseRow {
    let g = row[0].1.gcd(&p[0].1);
    let a = &p[0].1 / &g; // multiplier for row
    let b = &row[0].1 / &g; // multiplier for p
    let mut out = Vec::with_capacity(row.len() + p.len());
    let (mut i, mut j) = (1, 1);
    while i < row.len() || j < p.len() {
        let ci = row.get(i).map_or(usize::MAX, |t| t.0);
        let cj = p.get(j).map_or(usize::MAX, |t| t.0);
        let (c, v) = if ci < cj {
            i += 1;
            (ci, &a * &row[i - 1].1)
        } else if cj < ci {
            j += 1;
            (cj, -(&b * &p[j - 1].1))
        } else {
            i += 1;
            j += 1;
            (ci, &a * &row[i - 1].1 - &b * &p[j - 1].1)
        };
        if !v.is_zero() {
            out.push((c, v));
        }
    }
    normalize(&mut out);
    out
}

fn normalize(row: &mut SparseRow) {
    let g = row.iter().fold(BigInt::zero(), |g, (_, v)| g.gcd(v));
    if !g.is_zero() && !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v = &*v / &g;
        }
    }
}
