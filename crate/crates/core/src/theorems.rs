//! Constructive side of the structure theory for `(n+1)`-ary derivations of
//! simple Filippov algebras and their direct sums.
//!
//! On `A_{n+1}` every derivation tuple splits as
//! `((sum h_j) id + d_0; h_1 id + d, ..., h_n id + d)` with `d_0 = -d^T`.
//! [`decompose`] recovers `(h, d)` from a tuple; [`check_block_invariance`]
//! checks that on a direct sum each map preserves each summand.

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::deriv_solver::{verify_tuple, DerivationTuple, Endo, SolverError};
use crate::exact::{format_rational, frac, int, Matrix, Rational};
use crate::nary_algebra::NaryAlgebra;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoremError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("diagonal entry {0} is nonzero")]
    NonZeroDiagonal(usize),
    #[error("matrix is not diagonal")]
    NotDiagonal,
    #[error("not a derivation tuple: {0}")]
    NotDerivation(SolverError),
    #[error("diagonal system has no solution")]
    Inconsistent,
    #[error("algebra carries no block metadata")]
    MissingBlocks,
    #[error("f_{component} moves block {block}: entry ({row}, {col}) is nonzero")]
    BlockViolation {
        component: usize,
        block: usize,
        row: usize,
        col: usize,
    },
}

fn check_square(alg: &NaryAlgebra, m: &Endo) -> Result<(), TheoremError> {
    let d = alg.dim();
    if m.rows() != d || m.cols() != d {
        return Err(TheoremError::Shape(format!(
            "matrix is {}x{}, algebra has dimension {d}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

/// `(A; -A^T, ..., -A^T)` for a zero-diagonal `A`.
pub fn lemma1_tuple(alg: &NaryAlgebra, a: &Endo) -> Result<DerivationTuple, TheoremError> {
    check_square(alg, a)?;
    if let Some(k) = a.diagonal_entries().iter().position(|x| !x.is_zero()) {
        return Err(TheoremError::NonZeroDiagonal(k + 1));
    }
    let f = -&a.transpose();
    DerivationTuple::uniform(a.clone(), f, alg.arity()).map_err(TheoremError::NotDerivation)
}

/// Common tail `f` of a quasi-derivation with diagonal head `f_0`:
/// `f^i = (1/n) sum_j f_0^j - f_0^i`.
pub fn qder_tail_from_head(alg: &NaryAlgebra, f0: &Endo) -> Result<Endo, TheoremError> {
    check_square(alg, f0)?;
    if !f0.is_diagonal() {
        return Err(TheoremError::NotDiagonal);
    }
    let diag = f0.diagonal_entries();
    let mean = diag.iter().sum::<Rational>() * frac(1, alg.arity() as i64);
    Ok(Matrix::diagonal(
        &diag.iter().map(|x| &mean - x).collect::<Vec<_>>(),
    ))
}

/// `(h, d)` with `d_0 = -d^T`, plus the gap between the input and the
/// reassembled tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalDecomposition {
    pub h: Vec<Rational>,
    pub d: Endo,
    pub d0: Endo,
    pub residual: DerivationTuple,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionJson {
    pub h: Vec<String>,
    pub d: Vec<Vec<String>>,
    pub d0: Vec<Vec<String>>,
    pub skew_pairing: bool,
    pub residual: &'static str,
}

impl CanonicalDecomposition {
    /// `((sum h) id + d_0; h_1 id + d, ..., h_n id + d)`.
    pub fn reassemble(&self) -> DerivationTuple {
        reassemble(&self.h, &self.d0, &self.d)
    }

    pub fn residual_is_zero(&self) -> bool {
        self.residual.is_zero()
    }

    /// `d_0 + d^T = 0`.
    pub fn skew_pairing(&self) -> bool {
        (&self.d0 + &self.d.transpose()).is_zero()
    }

    pub fn to_json(&self) -> DecompositionJson {
        DecompositionJson {
            h: self.h.iter().map(format_rational).collect(),
            d: self.d.to_strings(),
            d0: self.d0.to_strings(),
            skew_pairing: self.skew_pairing(),
            residual: if self.residual_is_zero() {
                "zero"
            } else {
                "nonzero"
            },
        }
    }
}

fn reassemble(h: &[Rational], d0: &Endo, d: &Endo) -> DerivationTuple {
    let id = Matrix::identity(d.rows());
    let total: Rational = h.iter().sum();
    DerivationTuple::new(
        &id.scale(&total) + d0,
        h.iter().map(|hi| &id.scale(hi) + d).collect(),
    )
    .expect("shapes agree")
}

/// Splits a verified derivation tuple of a simple algebra. Off-diagonal
/// entries of `d` are read from `f_1`; the diagonal of `d` and `h` solve
/// `(f_i)_kk = h_i + d_kk`, `(f_0)_kk = sum h - d_kk`.
pub fn decompose(
    alg: &NaryAlgebra,
    t: &DerivationTuple,
) -> Result<CanonicalDecomposition, TheoremError> {
    verify_tuple(alg, t).map_err(TheoremError::NotDerivation)?;
    let n = alg.arity();
    let dim = alg.dim();
    let f1 = &t.tail()[0];

    let unknowns = n + dim;
    let mut sys = Matrix::zeros((n + 1) * dim, unknowns);
    let mut rhs = Matrix::zeros((n + 1) * dim, 1);
    for i in 0..n {
        for k in 0..dim {
            let r = i * dim + k;
            sys[(r, i)] = int(1);
            sys[(r, n + k)] = int(1);
            rhs[(r, 0)] = t.tail()[i][(k, k)].clone();
        }
    }
    for k in 0..dim {
        let r = n * dim + k;
        for i in 0..n {
            sys[(r, i)] = int(1);
        }
        sys[(r, n + k)] = int(-1);
        rhs[(r, 0)] = t.head()[(k, k)].clone();
    }
    let sol = sys
        .solve(&rhs)
        .expect("system shapes agree")
        .ok_or(TheoremError::Inconsistent)?
        .into_entries();

    let mut d = f1.clone();
    for k in 0..dim {
        d[(k, k)] = sol[n + k].clone();
    }
    let h = sol[..n].to_vec();
    let d0 = -&d.transpose();
    let residual = t.sub(&reassemble(&h, &d0, &d));
    Ok(CanonicalDecomposition { h, d, d0, residual })
}

/// Rank of `(h, d) -> ((sum h) id - d^T; h_1 id + d, ..., h_n id + d)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UniquenessCertificate {
    pub parameters: usize,
    pub rank: usize,
}

impl UniquenessCertificate {
    pub fn injective(&self) -> bool {
        self.rank == self.parameters
    }
}

/// Columns of the parametrization map, one flattened tuple per parameter.
pub fn parametrization_columns(alg: &NaryAlgebra) -> Vec<Vec<Rational>> {
    let n = alg.arity();
    let dim = alg.dim();
    let zero = Matrix::zeros(dim, dim);
    let mut cols = Vec::with_capacity(n + dim * dim);
    for i in 0..n {
        let mut h = vec![Rational::zero(); n];
        h[i] = int(1);
        cols.push(reassemble(&h, &zero, &zero).flatten());
    }
    let h = vec![Rational::zero(); n];
    for a in 0..dim {
        for b in 0..dim {
            let d = Matrix::unit(dim, a, b);
            cols.push(reassemble(&h, &-&d.transpose(), &d).flatten());
        }
    }
    cols
}

pub fn uniqueness_certificate(alg: &NaryAlgebra) -> UniquenessCertificate {
    let cols = parametrization_columns(alg);
    let m = Matrix::from_rows(cols).expect("equal lengths");
    UniquenessCertificate {
        parameters: m.rows(),
        rank: m.rank(),
    }
}

/// Blockwise decompositions of a tuple that preserves every block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockInvarianceReport {
    pub blocks: Vec<CanonicalDecomposition>,
}

impl BlockInvarianceReport {
    pub fn all_exact(&self) -> bool {
        self.blocks
            .iter()
            .all(|b| b.residual_is_zero() && b.skew_pairing())
    }
}

/// Every `f_j` maps each block into itself; then each block is decomposed.
pub fn check_block_invariance(
    alg: &NaryAlgebra,
    t: &DerivationTuple,
) -> Result<BlockInvarianceReport, TheoremError> {
    let blocks = alg.blocks().ok_or(TheoremError::MissingBlocks)?;
    verify_tuple(alg, t).map_err(TheoremError::NotDerivation)?;
    let block_of = |i: usize| {
        blocks
            .iter()
            .position(|b| b.contains(&i))
            .expect("blocks cover")
    };
    for (j, f) in t.components().enumerate() {
        for col in 0..alg.dim() {
            let bc = block_of(col);
            for row in 0..alg.dim() {
                if block_of(row) != bc && !f[(row, col)].is_zero() {
                    return Err(TheoremError::BlockViolation {
                        component: j,
                        block: bc + 1,
                        row: row + 1,
                        col: col + 1,
                    });
                }
            }
        }
    }
    let decomps = blocks
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let sub = alg.block_subalgebra(i).expect("block index in range");
            decompose(&sub, &t.restrict(b.clone()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BlockInvarianceReport { blocks: decomps })
}
