//! Index tuples and the linear systems imposed on them.

use num_traits::Zero;

use super::{DerivationTuple, IdentityViolation, SolverError};
use crate::exact::{Rational, RowReducer};
use crate::nary_algebra::{increasing_tuples, NaryAlgebra, SparseVec};

/// Index multisets on which the defining identity can carry information, in
/// sorted form: every strictly increasing `n`-tuple, then every tuple with
/// exactly one index repeated twice and the other `n-2` indices distinct.
///
/// Tuples with three equal indices or two repeated pairs are left out: after
/// replacing any single slot a repeat survives, so every term vanishes.
pub fn canonical_tuples(alg: &NaryAlgebra) -> Vec<Vec<usize>> {
    let n = alg.arity();
    let d = alg.dim();
    let mut out = increasing_tuples(d, n);
    let mut repeats = Vec::new();
    for i in 0..d {
        let others: Vec<usize> = (0..d).filter(|&j| j != i).collect();
        for rest in increasing_tuples(others.len(), n - 2) {
            let mut t: Vec<usize> = rest.iter().map(|&k| others[k]).collect();
            t.push(i);
            t.push(i);
            t.sort_unstable();
            repeats.push(t);
        }
    }
    repeats.sort();
    out.extend(repeats);
    out
}

/// Every distinct ordering of every canonical multiset.
///
/// With distinct tail maps the identity is not invariant under reordering
/// the arguments (a reordering changes which `f_k` meets which index), so
/// the sorted representatives alone do not determine the solution space.
pub fn constraint_tuples(alg: &NaryAlgebra) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for t in canonical_tuples(alg) {
        let mut p = t.clone();
        loop {
            out.push(p.clone());
            if !next_permutation(&mut p) {
                break;
            }
        }
    }
    out
}

/// Lexicographic successor; `false` once `p` is the last permutation.
fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len())
        .rev()
        .find(|&j| p[j] > p[i - 1])
        .expect("exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Where each slot of `(f_0; f_1..f_n)` lives among the unknowns: the
/// `d x d` block it reads from and a scalar multiplier, or `None` when the
/// slot is identically zero.
pub(crate) type SlotLayout = Vec<Option<(usize, Rational)>>;

/// Precomputed products for one index tuple.
struct TupleProducts {
    idx: Vec<usize>,
    value: SparseVec,
    /// `(slot k, replacement a, [e_{i_1} .. e_a .. e_{i_n}])` for nonzero products.
    replaced: Vec<(usize, usize, SparseVec)>,
}

fn tuple_products(alg: &NaryAlgebra, idx: &[usize]) -> TupleProducts {
    let d = alg.dim();
    let mut replaced = Vec::new();
    let mut scratch = idx.to_vec();
    for k in 0..idx.len() {
        for a in 0..d {
            scratch[k] = a;
            let v = alg.basis_product(&scratch);
            if !v.is_empty() {
                replaced.push((k, a, v));
            }
        }
        scratch[k] = idx[k];
    }
    TupleProducts {
        idx: idx.to_vec(),
        value: alg.basis_product(idx),
        replaced,
    }
}

/// Stacks `f_0[e_I] - sum_k [.., f_k(e_{i_k}), ..] = 0` over every
/// constraint tuple `I`, every output coordinate and every layout, with
/// unknown `(block, a, b)` at column `block*d*d + a*d + b`.
pub(crate) fn assemble(alg: &NaryAlgebra, layouts: &[SlotLayout], blocks: usize) -> RowReducer {
    let d = alg.dim();
    let dd = d * d;
    let mut red = RowReducer::new(blocks * dd);
    for idx in constraint_tuples(alg) {
        let tp = tuple_products(alg, &idx);
        if tp.value.is_empty() && tp.replaced.is_empty() {
            continue;
        }
        for layout in layouts {
            let mut rows: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); d];
            if let Some((blk, s)) = &layout[0] {
                // (f_0 [e_I])_c = sum_m (f_0)_{c m} p_m
                for (m, p) in &tp.value {
                    for (c, row) in rows.iter_mut().enumerate() {
                        row.push((blk * dd + c * d + m, s * p));
                    }
                }
            }
            for (k, a, v) in &tp.replaced {
                let Some((blk, s)) = &layout[k + 1] else {
                    continue;
                };
                // f_k(e_{i_k}) = sum_a (f_k)_{a, i_k} e_a
                let col = blk * dd + a * d + tp.idx[*k];
                for (c, q) in v {
                    rows[*c].push((col, -(s * q)));
                }
            }
            for row in rows {
                red.push(row);
            }
        }
    }
    red
}

fn sparse_add(acc: &mut [Rational], v: &SparseVec, s: &Rational) {
    for (k, c) in v {
        acc[*k] += s * c;
    }
}

/// Checks the defining identity of `t` on every constraint tuple.
pub fn verify_tuple(alg: &NaryAlgebra, t: &DerivationTuple) -> Result<(), SolverError> {
    let d = alg.dim();
    if t.dim() != d || t.arity() != alg.arity() {
        return Err(SolverError::Shape(format!(
            "tuple has {} maps of size {}, algebra needs {} maps of size {d}",
            t.arity() + 1,
            t.dim(),
            alg.arity() + 1
        )));
    }
    for idx in constraint_tuples(alg) {
        let tp = tuple_products(alg, &idx);
        let mut lhs = vec![Rational::zero(); d];
        for (m, p) in &tp.value {
            for (c, l) in lhs.iter_mut().enumerate() {
                let f = &t.head()[(c, *m)];
                if !f.is_zero() {
                    *l += f * p;
                }
            }
        }
        let mut rhs = vec![Rational::zero(); d];
        for (k, a, v) in &tp.replaced {
            let coef = &t.tail()[*k][(*a, idx[*k])];
            if !coef.is_zero() {
                sparse_add(&mut rhs, v, coef);
            }
        }
        if lhs != rhs {
            return Err(SolverError::Identity(IdentityViolation {
                args: idx.iter().map(|i| i + 1).collect(),
                lhs,
                rhs,
            }));
        }
    }
    Ok(())
}
