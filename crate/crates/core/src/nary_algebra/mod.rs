//! n-ary anticommutative algebras given by structure constants.
//!
//! Only strictly increasing index tuples are stored; every other basis
//! product is recovered from them by sorting (with the permutation sign) or
//! vanishes because an index repeats. Indices are 0-based internally and
//! 1-based in every user-facing format.

mod io;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exact::{format_rational, int, Matrix, Rational};

pub use io::AlgebraFile;

/// Sparse coordinate vector: sorted `(basis index, nonzero coefficient)` pairs.
pub type SparseVec = Vec<(usize, Rational)>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("arity must be at least 2, got {0}")]
    InvalidArity(usize),
    #[error("dimension must be at least 1")]
    EmptyAlgebra,
    #[error("basis has {basis_len} labels but dim is {dim}")]
    DimensionMismatch { dim: usize, basis_len: usize },
    #[error("product entry {entry}: expected {expected} arguments, found {found}")]
    ArityMismatch {
        entry: usize,
        expected: usize,
        found: usize,
    },
    #[error("product entry {entry}: args {args:?} are not strictly increasing")]
    NonIncreasingArgs { entry: usize, args: Vec<usize> },
    #[error("product entry {entry}: basis index {index} outside 1..={dim}")]
    IndexOutOfRange {
        entry: usize,
        index: usize,
        dim: usize,
    },
    #[error("product entry {entry}: args {args:?} listed more than once")]
    DuplicateArgs { entry: usize, args: Vec<usize> },
    #[error("product entry {entry}: bad coefficient: {message}")]
    BadCoefficient { entry: usize, message: String },
    #[error("invalid block metadata: {0}")]
    BadBlocks(String),
    #[error("direct sum parts have mixed arities {0:?}")]
    MixedArity(Vec<usize>),
    #[error("direct sum of zero parts")]
    EmptyDirectSum,
    #[error("product needs {expected} arguments, got {found}")]
    WrongArgumentCount { expected: usize, found: usize },
    #[error("argument has {found} coordinates, algebra dimension is {expected}")]
    WrongElementLength { expected: usize, found: usize },
    #[error("malformed algebra file: {0}")]
    Malformed(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

/// Element of an algebra, as coordinates over its basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraElement(Vec<Rational>);

impl AlgebraElement {
    pub fn new(coords: Vec<Rational>) -> Self {
        Self(coords)
    }

    pub fn zero(dim: usize) -> Self {
        Self(vec![Rational::zero(); dim])
    }

    /// The basis vector `e_{i+1}`.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.0[i] = Rational::one();
        v
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self(self.0.iter().map(|a| a * s).collect())
    }

    pub fn to_sparse(&self) -> SparseVec {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| (i, x.clone()))
            .collect()
    }
}

/// Arguments of the first violated instance of the Filippov identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilippovViolation {
    /// 1-based indices `x_1 < ... < x_n`.
    pub x: Vec<usize>,
    /// 1-based indices `y_2 < ... < y_n`.
    pub y: Vec<usize>,
    pub lhs: Vec<Rational>,
    pub rhs: Vec<Rational>,
}

impl fmt::Display for FilippovViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &[Rational]| v.iter().map(format_rational).collect::<Vec<_>>().join(", ");
        write!(
            f,
            "Filippov identity fails at x = {:?}, y = {:?}: lhs = ({}), rhs = ({})",
            self.x,
            self.y,
            show(&self.lhs),
            show(&self.rhs)
        )
    }
}

/// Basis tuple on which anticommutativity of the evaluated product fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnticommutativityViolation {
    /// 1-based argument indices as passed to `product`.
    pub args: Vec<usize>,
    pub reason: String,
}

#[derive(Clone, PartialEq, Eq)]
pub struct NaryAlgebra {
    arity: usize,
    basis: Vec<String>,
    products: BTreeMap<Vec<usize>, SparseVec>,
    blocks: Option<Vec<Range<usize>>>,
}

impl fmt::Debug for NaryAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NaryAlgebra")
            .field("arity", &self.arity)
            .field("dim", &self.dim())
            .field("products", &self.products.len())
            .field("blocks", &self.blocks)
            .finish()
    }
}

impl NaryAlgebra {
    /// Builds an algebra from 0-based strictly increasing index tuples.
    /// Zero coefficients are dropped; tuples whose value vanishes are not stored.
    pub fn new(
        arity: usize,
        basis: Vec<String>,
        products: impl IntoIterator<Item = (Vec<usize>, Vec<(usize, Rational)>)>,
    ) -> Result<Self, AlgebraError> {
        if arity < 2 {
            return Err(AlgebraError::InvalidArity(arity));
        }
        let dim = basis.len();
        if dim == 0 {
            return Err(AlgebraError::EmptyAlgebra);
        }
        let mut table = BTreeMap::new();
        let mut seen = std::collections::BTreeSet::new();
        for (entry, (args, value)) in products.into_iter().enumerate() {
            let one_based = || args.iter().map(|a| a + 1).collect::<Vec<_>>();
            if args.len() != arity {
                return Err(AlgebraError::ArityMismatch {
                    entry,
                    expected: arity,
                    found: args.len(),
                });
            }
            if let Some(&bad) = args.iter().find(|&&a| a >= dim) {
                return Err(AlgebraError::IndexOutOfRange {
                    entry,
                    index: bad + 1,
                    dim,
                });
            }
            if args.windows(2).any(|w| w[0] >= w[1]) {
                return Err(AlgebraError::NonIncreasingArgs {
                    entry,
                    args: one_based(),
                });
            }
            if !seen.insert(args.clone()) {
                return Err(AlgebraError::DuplicateArgs {
                    entry,
                    args: one_based(),
                });
            }
            let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
            for (k, c) in value {
                if k >= dim {
                    return Err(AlgebraError::IndexOutOfRange {
                        entry,
                        index: k + 1,
                        dim,
                    });
                }
                *acc.entry(k).or_insert_with(Rational::zero) += c;
            }
            let sparse: SparseVec = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            if !sparse.is_empty() {
                table.insert(args, sparse);
            }
        }
        Ok(Self {
            arity,
            basis,
            products: table,
            blocks: None,
        })
    }

    /// Algebra with every product zero.
    pub fn zero(arity: usize, dim: usize) -> Result<Self, AlgebraError> {
        Self::new(arity, default_labels(dim), std::iter::empty())
    }

    /// The simple `(n+1)`-dimensional algebra `A_{n+1}`:
    /// `[e_1, ..., ê_i, ..., e_{n+1}] = (-1)^{n+i+1} e_i` (1-based `i`).
    pub fn make_simple(n: usize) -> Result<Self, AlgebraError> {
        if n < 2 {
            return Err(AlgebraError::InvalidArity(n));
        }
        let d = n + 1;
        let products = (0..d).map(|i| {
            let args: Vec<usize> = (0..d).filter(|&j| j != i).collect();
            // (-1)^{n+i+1} with 1-based i, i.e. (-1)^{n+i} for 0-based i
            let sign = if (n + i).is_multiple_of(2) { 1 } else { -1 };
            (args, vec![(i, int(sign))])
        });
        let mut alg = Self::new(n, default_labels(d), products)?;
        alg.blocks = Some(single_block(d));
        Ok(alg)
    }

    /// Block algebra on the concatenated bases; cross-block products vanish.
    pub fn direct_sum(parts: &[NaryAlgebra]) -> Result<Self, AlgebraError> {
        let first = parts.first().ok_or(AlgebraError::EmptyDirectSum)?;
        if parts.iter().any(|p| p.arity != first.arity) {
            return Err(AlgebraError::MixedArity(
                parts.iter().map(|p| p.arity).collect(),
            ));
        }
        if parts.len() == 1 {
            let mut only = first.clone();
            only.blocks = Some(single_block(only.dim()));
            return Ok(only);
        }
        let mut basis = Vec::new();
        let mut products = Vec::new();
        let mut blocks = Vec::new();
        let mut offset = 0;
        for (b, part) in parts.iter().enumerate() {
            basis.extend(part.basis.iter().map(|l| format!("{l}_{}", b + 1)));
            for (args, value) in &part.products {
                products.push((
                    args.iter().map(|a| a + offset).collect(),
                    value.iter().map(|(k, c)| (k + offset, c.clone())).collect(),
                ));
            }
            blocks.push(offset..offset + part.dim());
            offset += part.dim();
        }
        let mut alg = Self::new(first.arity, basis, products)?;
        alg.blocks = Some(blocks);
        Ok(alg)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_labels(&self) -> &[String] {
        &self.basis
    }

    /// Stored structure constants, keyed by 0-based increasing tuples.
    pub fn structure_constants(&self) -> &BTreeMap<Vec<usize>, SparseVec> {
        &self.products
    }

    pub fn blocks(&self) -> Option<&[Range<usize>]> {
        self.blocks.as_deref()
    }

    pub fn with_blocks(mut self, blocks: Vec<Range<usize>>) -> Result<Self, AlgebraError> {
        let mut next = 0;
        for b in &blocks {
            if b.start != next || b.end <= b.start {
                return Err(AlgebraError::BadBlocks(format!(
                    "blocks must tile 1..={} contiguously, got {:?}",
                    self.dim(),
                    blocks
                )));
            }
            next = b.end;
        }
        if next != self.dim() {
            return Err(AlgebraError::BadBlocks(format!(
                "blocks cover {next} of {} basis vectors",
                self.dim()
            )));
        }
        self.blocks = Some(blocks);
        Ok(self)
    }

    /// The algebra spanned by one block, re-indexed from zero.
    pub fn block_subalgebra(&self, block: usize) -> Option<Self> {
        let range = self.blocks.as_ref()?.get(block)?.clone();
        let inside = |i: &usize| range.contains(i);
        let products = self
            .products
            .iter()
            .filter(|(args, _)| args.iter().all(inside))
            .map(|(args, value)| {
                (
                    args.iter().map(|a| a - range.start).collect(),
                    value
                        .iter()
                        .filter(|(k, _)| inside(k))
                        .map(|(k, c)| (k - range.start, c.clone()))
                        .collect(),
                )
            });
        let mut alg = Self::new(self.arity, self.basis[range.clone()].to_vec(), products).ok()?;
        alg.blocks = Some(single_block(range.len()));
        Some(alg)
    }

    /// `[e_{idx_1}, ..., e_{idx_n}]` for 0-based indices in any order.
    pub fn basis_product(&self, idx: &[usize]) -> SparseVec {
        assert_eq!(idx.len(), self.arity, "basis_product: wrong arity");
        let Some((sorted, negative)) = sort_with_sign(idx) else {
            return Vec::new();
        };
        match self.products.get(&sorted) {
            None => Vec::new(),
            Some(v) if negative => v.iter().map(|(k, c)| (*k, -c)).collect(),
            Some(v) => v.clone(),
        }
    }

    /// Multilinear extension of the table: `sum_I det(X_I) * [e_I]` over the
    /// stored increasing tuples `I`, where `X_I` is the minor of the argument
    /// coordinates on rows `I`.
    pub fn product(&self, args: &[AlgebraElement]) -> Result<AlgebraElement, AlgebraError> {
        if args.len() != self.arity {
            return Err(AlgebraError::WrongArgumentCount {
                expected: self.arity,
                found: args.len(),
            });
        }
        if let Some(a) = args.iter().find(|a| a.dim() != self.dim()) {
            return Err(AlgebraError::WrongElementLength {
                expected: self.dim(),
                found: a.dim(),
            });
        }
        let mut out = AlgebraElement::zero(self.dim());
        for (tuple, value) in &self.products {
            let mut minor = Matrix::zeros(self.arity, self.arity);
            for (r, &row) in tuple.iter().enumerate() {
                for (c, a) in args.iter().enumerate() {
                    minor[(r, c)] = a.0[row].clone();
                }
            }
            let det = determinant(minor);
            if det.is_zero() {
                continue;
            }
            for (k, c) in value {
                out.0[*k] += &det * c;
            }
        }
        Ok(out)
    }

    /// Bracket of sparse arguments by term-by-term expansion over supports.
    pub(crate) fn bracket_sparse(&self, args: &[&SparseVec]) -> SparseVec {
        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
        let mut idx = vec![0usize; self.arity];
        let mut coef = vec![Rational::one(); self.arity + 1];
        fn rec(
            alg: &NaryAlgebra,
            args: &[&SparseVec],
            slot: usize,
            idx: &mut Vec<usize>,
            coef: &mut Vec<Rational>,
            acc: &mut BTreeMap<usize, Rational>,
        ) {
            if slot == args.len() {
                for (k, c) in alg.basis_product(idx) {
                    *acc.entry(k).or_insert_with(Rational::zero) += &coef[slot] * c;
                }
                return;
            }
            for (i, c) in args[slot] {
                if idx[..slot].contains(i) {
                    continue;
                }
                idx[slot] = *i;
                coef[slot + 1] = &coef[slot] * c;
                rec(alg, args, slot + 1, idx, coef, acc);
            }
        }
        if args.iter().any(|a| a.is_empty()) {
            return Vec::new();
        }
        rec(self, args, 0, &mut idx, &mut coef, &mut acc);
        acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }

    /// Checks `[[x_1..x_n], y_2..y_n] = sum_i [x_1..[x_i, y_2..y_n]..x_n]` on
    /// increasing basis tuples `x` and increasing `(n-1)`-tuples `y`, which
    /// suffices by multilinearity and antisymmetry.
    pub fn check_filippov(&self) -> Result<(), FilippovViolation> {
        let n = self.arity;
        let d = self.dim();
        let unit = |i: usize| -> SparseVec { vec![(i, Rational::one())] };
        let ys = increasing_tuples(d, n - 1);
        for x in increasing_tuples(d, n) {
            let xs: Vec<SparseVec> = x.iter().map(|&i| unit(i)).collect();
            for y in &ys {
                let yv: Vec<SparseVec> = y.iter().map(|&i| unit(i)).collect();
                let inner = self.basis_product(&x);
                let mut lhs_args: Vec<&SparseVec> = vec![&inner];
                lhs_args.extend(yv.iter());
                let lhs = self.bracket_sparse(&lhs_args);

                let mut rhs: BTreeMap<usize, Rational> = BTreeMap::new();
                for slot in 0..n {
                    let mut inner_args: Vec<&SparseVec> = vec![&xs[slot]];
                    inner_args.extend(yv.iter());
                    let xy = self.bracket_sparse(&inner_args);
                    let outer: Vec<&SparseVec> = (0..n)
                        .map(|k| if k == slot { &xy } else { &xs[k] })
                        .collect();
                    for (k, c) in self.bracket_sparse(&outer) {
                        *rhs.entry(k).or_insert_with(Rational::zero) += c;
                    }
                }
                let rhs: SparseVec = rhs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
                if lhs != rhs {
                    return Err(FilippovViolation {
                        x: x.iter().map(|i| i + 1).collect(),
                        y: y.iter().map(|i| i + 1).collect(),
                        lhs: densify(&lhs, d),
                        rhs: densify(&rhs, d),
                    });
                }
            }
        }
        Ok(())
    }

    /// Evaluates `product` on basis arguments and checks that swapping two
    /// adjacent arguments negates the result and that a repeated argument
    /// gives zero.
    pub fn check_anticommutativity(&self) -> Result<(), AnticommutativityViolation> {
        let n = self.arity;
        let d = self.dim();
        let e = |i: usize| AlgebraElement::basis(d, i);
        let eval = |idx: &[usize]| {
            let args: Vec<AlgebraElement> = idx.iter().map(|&i| e(i)).collect();
            self.product(&args).expect("arity checked")
        };
        for tuple in self.products.keys() {
            let base = eval(tuple);
            for k in 0..n - 1 {
                let mut swapped = tuple.clone();
                swapped.swap(k, k + 1);
                if eval(&swapped) != base.scale(&int(-1)) {
                    return Err(AnticommutativityViolation {
                        args: swapped.iter().map(|i| i + 1).collect(),
                        reason: format!("swapping slots {} and {} does not negate", k + 1, k + 2),
                    });
                }
                let mut repeated = tuple.clone();
                repeated[k + 1] = repeated[k];
                if !eval(&repeated).is_zero() {
                    return Err(AnticommutativityViolation {
                        args: repeated.iter().map(|i| i + 1).collect(),
                        reason: "repeated argument gives a nonzero product".into(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Linear span of all products, as its dimension.
    pub fn derived_dimension(&self) -> usize {
        let rows: Vec<Vec<Rational>> = self
            .products
            .values()
            .map(|v| densify(v, self.dim()))
            .collect();
        if rows.is_empty() {
            return 0;
        }
        Matrix::from_rows(rows).expect("uniform rows").rank()
    }
}

pub(crate) fn default_labels(dim: usize) -> Vec<String> {
    (1..=dim).map(|i| format!("e{i}")).collect()
}

pub(crate) fn densify(v: &SparseVec, dim: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); dim];
    for (k, c) in v {
        out[*k] = c.clone();
    }
    out
}

/// Sorted copy and whether an odd permutation was needed; `None` on a repeat.
pub(crate) fn sort_with_sign(idx: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut v = idx.to_vec();
    let mut negative = false;
    // insertion sort, counting transpositions
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            negative = !negative;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, negative))
}

/// Block list covering `0..d` in one piece.
fn single_block(d: usize) -> Vec<Range<usize>> {
    vec![Range { start: 0, end: d }]
}

/// All strictly increasing `k`-tuples from `0..d`, lexicographic.
pub fn increasing_tuples(d: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, d: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..d {
            cur.push(i);
            rec(i + 1, d, k, cur, out);
            cur.pop();
        }
    }
    rec(0, d, k, &mut cur, &mut out);
    out
}

fn determinant(mut m: Matrix) -> Rational {
    let n = m.rows();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[(r, col)].is_zero()) else {
            return Rational::zero();
        };
        if p != col {
            for c in 0..n {
                let tmp = m[(p, c)].clone();
                m[(p, c)] = m[(col, c)].clone();
                m[(col, c)] = tmp;
            }
            det = -det;
        }
        let pivot = m[(col, col)].clone();
        det *= &pivot;
        for r in col + 1..n {
            if m[(r, col)].is_zero() {
                continue;
            }
            let f = &m[(r, col)] / &pivot;
            for c in col..n {
                let sub = &f * &m[(col, c)];
                m[(r, c)] -= sub;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests;
