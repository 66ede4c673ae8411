//! Derivation-type operator spaces as exact kernels.
//!
//! Every space here is the solution set of the same family of linear
//! equations,
//!
//! ```text
//! f_0[x_1, ..., x_n] = sum_i [x_1, ..., f_i(x_i), ..., x_n]
//! ```
//!
//! specialized by tying the maps together: all equal (derivations), tails a
//! fixed multiple of the head (δ-derivations), one tail equal to the head
//! and the rest zero for every slot (centroid), or all tails equal
//! (quasi-derivations). Generalized derivations are the heads of the full
//! `(n+1)`-ary solution space.

mod chain;
mod system;
mod tuple;

use std::fmt;

use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use crate::exact::{format_rational, span_contains, Matrix, Rational, SpanBasis};
use crate::nary_algebra::NaryAlgebra;

pub use chain::{chain_report, default_delta_sweep, ChainLink, ChainReport, DeltaEntry, Relation};
pub use system::{canonical_tuples, constraint_tuples, verify_tuple};
pub use tuple::{DerivationTuple, ElementJson, Endo};

use system::{assemble, SlotLayout};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("{0}")]
    Identity(IdentityViolation),
    #[error("not a permutation of 1..={n}: {sigma:?}")]
    NotAPermutation { n: usize, sigma: Vec<usize> },
    #[error("cannot parse tuple: {0}")]
    Parse(String),
}

/// First index tuple on which `f_0[e_I]` and `sum_k [.., f_k(e_{i_k}), ..]` differ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityViolation {
    /// 1-based argument indices, in slot order.
    pub args: Vec<usize>,
    pub lhs: Vec<Rational>,
    pub rhs: Vec<Rational>,
}

impl fmt::Display for IdentityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &[Rational]| v.iter().map(format_rational).collect::<Vec<_>>().join(", ");
        write!(
            f,
            "identity fails on args {:?}: f_0 side = ({}), sum side = ({})",
            self.args,
            show(&self.lhs),
            show(&self.rhs)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceKind {
    Der,
    DeltaDer,
    Centroid,
    NaryDer,
    Qder,
    Gder,
    Annihilator,
}

impl SpaceKind {
    pub fn name(self) -> &'static str {
        match self {
            SpaceKind::Der => "der",
            SpaceKind::DeltaDer => "delta_der",
            SpaceKind::Centroid => "centroid",
            SpaceKind::NaryDer => "nary_der",
            SpaceKind::Qder => "qder",
            SpaceKind::Gder => "gder",
            SpaceKind::Annihilator => "annihilator",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpaceElement {
    Endo(Endo),
    Tuple(DerivationTuple),
}

impl SpaceElement {
    pub fn head(&self) -> &Endo {
        match self {
            SpaceElement::Endo(m) => m,
            SpaceElement::Tuple(t) => t.head(),
        }
    }

    pub fn flatten(&self) -> Vec<Rational> {
        match self {
            SpaceElement::Endo(m) => m.entries().to_vec(),
            SpaceElement::Tuple(t) => t.flatten(),
        }
    }

    pub fn to_json(&self) -> ElementJson {
        match self {
            SpaceElement::Endo(m) => ElementJson::Endo(m.to_strings()),
            SpaceElement::Tuple(t) => {
                ElementJson::Tuple(t.components().map(Matrix::to_strings).collect())
            }
        }
    }
}

/// Basis of a solved space plus what was solved for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorSpace {
    pub kind: SpaceKind,
    pub delta: Option<Rational>,
    pub basis: Vec<SpaceElement>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OperatorSpaceJson {
    pub kind: SpaceKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<String>,
    pub dimension: usize,
    pub algebra_hash: String,
    pub basis: Vec<ElementJson>,
}

impl OperatorSpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn flattened(&self) -> Vec<Vec<Rational>> {
        self.basis.iter().map(SpaceElement::flatten).collect()
    }

    pub fn heads(&self) -> Vec<Endo> {
        self.basis.iter().map(|b| b.head().clone()).collect()
    }

    /// Echelon basis of the span of the heads.
    pub fn head_span(&self) -> Vec<Endo> {
        echelon_endos(&self.heads())
    }

    /// Rank test: is `x` in the span of the basis?
    pub fn contains(&self, x: &SpaceElement) -> bool {
        span_contains(&self.flattened(), &[x.flatten()])
    }

    pub fn to_json(&self, alg: &NaryAlgebra) -> OperatorSpaceJson {
        OperatorSpaceJson {
            kind: self.kind,
            delta: self.delta.as_ref().map(format_rational),
            dimension: self.dimension(),
            algebra_hash: alg.content_hash(),
            basis: self.basis.iter().map(SpaceElement::to_json).collect(),
        }
    }
}

/// Reduced echelon basis of the span of some square matrices.
pub fn echelon_endos(ms: &[Endo]) -> Vec<Endo> {
    let Some(first) = ms.first() else {
        return Vec::new();
    };
    let (r, c) = (first.rows(), first.cols());
    let flat: Vec<Vec<Rational>> = ms.iter().map(|m| m.entries().to_vec()).collect();
    SpanBasis::new(&flat)
        .echelon_rows()
        .iter()
        .map(|row| Matrix::new(r, c, row.clone()).expect("row has r*c entries"))
        .collect()
}

/// `(f_0; f_{σ(1)}, ..., f_{σ(n)})` for a 0-based permutation `sigma` of `0..n`.
pub fn permute_tail(t: &DerivationTuple, sigma: &[usize]) -> Result<DerivationTuple, SolverError> {
    let n = t.arity();
    let mut seen = vec![false; n];
    let bijective = sigma.len() == n
        && sigma
            .iter()
            .all(|&s| s < n && !std::mem::replace(&mut seen[s], true));
    if !bijective {
        return Err(SolverError::NotAPermutation {
            n,
            sigma: sigma.iter().map(|s| s + 1).collect(),
        });
    }
    DerivationTuple::new(
        t.head().clone(),
        sigma.iter().map(|&s| t.tail()[s].clone()).collect(),
    )
}

fn kernel_tuples(alg: &NaryAlgebra, layouts: &[SlotLayout], blocks: usize) -> Vec<Vec<Rational>> {
    assemble(alg, layouts, blocks).nullspace()
}

fn reshape(d: usize, v: &[Rational], block: usize) -> Endo {
    Matrix::new(d, d, v[block * d * d..(block + 1) * d * d].to_vec()).expect("block is d*d")
}

fn assert_sound(alg: &NaryAlgebra, kind: SpaceKind, t: &DerivationTuple) {
    if let Err(e) = verify_tuple(alg, t) {
        panic!("solver returned a non-solution for {}: {e}", kind.name());
    }
}

/// All `(n+1)`-ary derivations: `(n+1) d^2` unknowns, no ties.
pub fn solve_nary_derivations(alg: &NaryAlgebra) -> OperatorSpace {
    let n = alg.arity();
    let d = alg.dim();
    let layout: SlotLayout = (0..=n).map(|s| Some((s, Rational::one()))).collect();
    let basis: Vec<SpaceElement> = kernel_tuples(alg, &[layout], n + 1)
        .into_iter()
        .map(|v| DerivationTuple::from_flat(n, d, &v))
        .inspect(|t| assert_sound(alg, SpaceKind::NaryDer, t))
        .map(SpaceElement::Tuple)
        .collect();
    OperatorSpace {
        kind: SpaceKind::NaryDer,
        delta: None,
        basis,
    }
}

/// δ-derivations: `φ[x_1..x_n] = δ · sum_i [x_1..φ(x_i)..x_n]`.
pub fn solve_delta_der(alg: &NaryAlgebra, delta: &Rational) -> OperatorSpace {
    let n = alg.arity();
    let d = alg.dim();
    let layout: SlotLayout = (0..=n)
        .map(|s| {
            Some((
                0,
                if s == 0 {
                    Rational::one()
                } else {
                    delta.clone()
                },
            ))
        })
        .collect();
    let basis = kernel_tuples(alg, &[layout], 1)
        .into_iter()
        .map(|v| reshape(d, &v, 0))
        .inspect(|phi| {
            let t = DerivationTuple::uniform(phi.clone(), phi.scale(delta), n).expect("square");
            assert_sound(alg, SpaceKind::DeltaDer, &t);
        })
        .map(SpaceElement::Endo)
        .collect();
    OperatorSpace {
        kind: SpaceKind::DeltaDer,
        delta: Some(delta.clone()),
        basis,
    }
}

/// Ordinary derivations (`δ = 1`).
pub fn solve_der(alg: &NaryAlgebra) -> OperatorSpace {
    OperatorSpace {
        kind: SpaceKind::Der,
        delta: None,
        ..solve_delta_der(alg, &Rational::one())
    }
}

/// Centroid: `ψ[x_1..x_n] = [x_1..ψ(x_i)..x_n]` for every slot `i`.
pub fn solve_centroid(alg: &NaryAlgebra) -> OperatorSpace {
    let n = alg.arity();
    let d = alg.dim();
    let layouts: Vec<SlotLayout> = (1..=n)
        .map(|k| {
            (0..=n)
                .map(|s| (s == 0 || s == k).then(|| (0, Rational::one())))
                .collect()
        })
        .collect();
    let basis = kernel_tuples(alg, &layouts, 1)
        .into_iter()
        .map(|v| reshape(d, &v, 0))
        .inspect(|psi| {
            for k in 0..n {
                let mut tail = vec![Matrix::zeros(d, d); n];
                tail[k] = psi.clone();
                let t = DerivationTuple::new(psi.clone(), tail).expect("square");
                assert_sound(alg, SpaceKind::Centroid, &t);
            }
        })
        .map(SpaceElement::Endo)
        .collect();
    OperatorSpace {
        kind: SpaceKind::Centroid,
        delta: None,
        basis,
    }
}

/// Quasi-derivations `(f_0; f, ..., f)`, stored as full tuples.
pub fn solve_qder(alg: &NaryAlgebra) -> OperatorSpace {
    let n = alg.arity();
    let d = alg.dim();
    let layout: SlotLayout = (0..=n)
        .map(|s| Some((usize::from(s > 0), Rational::one())))
        .collect();
    let basis = kernel_tuples(alg, &[layout], 2)
        .into_iter()
        .map(|v| DerivationTuple::uniform(reshape(d, &v, 0), reshape(d, &v, 1), n).expect("square"))
        .inspect(|t| assert_sound(alg, SpaceKind::Qder, t))
        .map(SpaceElement::Tuple)
        .collect();
    OperatorSpace {
        kind: SpaceKind::Qder,
        delta: None,
        basis,
    }
}

/// Generalized derivations: the span of heads of all `(n+1)`-ary derivations.
pub fn solve_gder(alg: &NaryAlgebra) -> OperatorSpace {
    gder_from(&solve_nary_derivations(alg))
}

pub fn gder_from(nary: &OperatorSpace) -> OperatorSpace {
    OperatorSpace {
        kind: SpaceKind::Gder,
        delta: None,
        basis: nary
            .head_span()
            .into_iter()
            .map(SpaceElement::Endo)
            .collect(),
    }
}
