use num_traits::Zero;

use super::{Matrix, Rational, RowReducer};

/// A list of generator vectors prepared for membership and coordinate queries.
///
/// Built from one RREF of `[G | I]` where the rows of `G` are the generators:
/// each reduced row carries the combination of generators that produced it.
#[derive(Debug, Clone)]
pub struct SpanBasis {
    len: usize,
    generators: usize,
    rows: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
    transform: Vec<Vec<Rational>>,
}

impl SpanBasis {
    pub fn new(vectors: &[Vec<Rational>]) -> Self {
        let k = vectors.len();
        let len = vectors.first().map_or(0, Vec::len);
        let mut aug = Matrix::zeros(k, len + k);
        for (i, v) in vectors.iter().enumerate() {
            assert_eq!(v.len(), len, "generator {i} has the wrong length");
            for (j, x) in v.iter().enumerate() {
                if !x.is_zero() {
                    aug[(i, j)] = x.clone();
                }
            }
            aug[(i, len + i)] = super::one();
        }
        let (r, piv) = aug.rref();
        let mut rows = Vec::new();
        let mut pivots = Vec::new();
        let mut transform = Vec::new();
        for (i, &p) in piv.iter().enumerate() {
            if p >= len {
                break;
            }
            rows.push(r.row(i)[..len].to_vec());
            transform.push(r.row(i)[len..].to_vec());
            pivots.push(p);
        }
        Self {
            len,
            generators: k,
            rows,
            pivots,
            transform,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_independent(&self) -> bool {
        self.rank() == self.generators
    }

    /// Reduced-echelon basis of the span.
    pub fn echelon_rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// `v` minus its projection along the echelon rows (zero iff `v` is in the span).
    pub fn remainder(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.len);
        let mut out = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = out[p].clone();
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(row) {
                if !x.is_zero() {
                    *o -= &c * x;
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.remainder(v).iter().all(Zero::is_zero)
    }

    /// Coefficients `c` with `v = sum c_i * generator_i`, or `None` if `v` is
    /// outside the span. Unique when the generators are independent.
    pub fn coordinates(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        if !self.contains(v) {
            return None;
        }
        let mut c = vec![Rational::zero(); self.generators];
        for (t, &p) in self.transform.iter().zip(&self.pivots) {
            let s = &v[p];
            if s.is_zero() {
                continue;
            }
            for (ci, ti) in c.iter_mut().zip(t) {
                if !ti.is_zero() {
                    *ci += s * ti;
                }
            }
        }
        Some(c)
    }
}

/// Rank-comparison containment: `span(items) ⊆ span(container)` iff stacking
/// the items under the container does not raise the rank.
pub fn span_contains(container: &[Vec<Rational>], items: &[Vec<Rational>]) -> bool {
    let Some(len) = container.first().or(items.first()).map(Vec::len) else {
        return true;
    };
    let mut red = RowReducer::new(len);
    for v in container {
        red.push_dense(v);
    }
    let base = red.rank();
    for v in items {
        red.push_dense(v);
    }
    red.rank() == base
}
