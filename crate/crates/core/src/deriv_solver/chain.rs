//! The inclusion chain `Der ⊆ Der_δ ⊆ QDer ⊆ GDer ⊆ End`, measured.

use std::fmt;

use serde::Serialize;

use super::{
    echelon_endos, solve_delta_der, solve_der, solve_gder, solve_qder, Endo, OperatorSpace,
};
use crate::exact::{format_rational, frac, int, span_contains, Matrix, Rational};
use crate::nary_algebra::NaryAlgebra;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Equal,
    Strict,
    NotContained,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Equal => "=",
            Relation::Strict => "⊂",
            Relation::NotContained => "⊄",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainLink {
    pub left: String,
    pub right: String,
    pub relation: Relation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaEntry {
    pub delta: String,
    pub dimension: usize,
    /// `Der ⊆ Der_δ`.
    pub contains_der: bool,
    /// `id ∈ Der_δ`.
    pub contains_identity: bool,
}

/// Dimensions along the chain. The `Der_δ` node is taken at `δ = 1/n`, the
/// value for which the identity map is a δ-derivation; every swept δ is
/// listed in `deltas`, and `delta_span` is the span of all of them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    pub algebra_hash: String,
    pub der: usize,
    pub chain_delta: String,
    pub chain_delta_dim: usize,
    pub deltas: Vec<DeltaEntry>,
    pub delta_span: usize,
    pub qder_heads: usize,
    pub gder: usize,
    pub end: usize,
    pub links: Vec<ChainLink>,
}

impl ChainReport {
    pub fn delta(&self, delta: &Rational) -> Option<&DeltaEntry> {
        let key = format_rational(delta);
        self.deltas.iter().find(|e| e.delta == key)
    }

    /// `GDer = End`.
    pub fn gder_is_end(&self) -> bool {
        self.links.last().map(|l| l.relation) == Some(Relation::Equal)
    }

    /// One line, e.g. `Der ⊄ Der_{1/3} ⊂ QDer = GDer = End`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, link) in self.links.iter().enumerate() {
            if i == 0 {
                out.push_str(&link.left);
            }
            out.push(' ');
            out.push_str(link.relation.symbol());
            out.push(' ');
            out.push_str(&link.right);
        }
        out
    }
}

impl fmt::Display for ChainReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// `1, 1/n, -1, 1/2, 2` with repeats dropped.
pub fn default_delta_sweep(n: usize) -> Vec<Rational> {
    let mut out: Vec<Rational> = Vec::new();
    for d in [int(1), frac(1, n as i64), int(-1), frac(1, 2), int(2)] {
        if !out.contains(&d) {
            out.push(d);
        }
    }
    out
}

fn flat(ms: &[Endo]) -> Vec<Vec<Rational>> {
    ms.iter().map(|m| m.entries().to_vec()).collect()
}

fn endos(space: &OperatorSpace) -> Vec<Endo> {
    space.heads()
}

fn relate(left: &str, small: &[Endo], right: &str, big: &[Endo]) -> ChainLink {
    let relation = if !span_contains(&flat(big), &flat(small)) {
        Relation::NotContained
    } else if small.len() == big.len() {
        Relation::Equal
    } else {
        Relation::Strict
    };
    ChainLink {
        left: left.into(),
        right: right.into(),
        relation,
    }
}

pub fn chain_report(alg: &NaryAlgebra, deltas: &[Rational]) -> ChainReport {
    let d = alg.dim();
    let der = endos(&solve_der(alg));
    let id = Matrix::identity(d);

    let chain_delta = frac(1, alg.arity() as i64);
    let chain_node = endos(&solve_delta_der(alg, &chain_delta));
    let node = format!("Der_{{{}}}", format_rational(&chain_delta));

    let mut entries = Vec::new();
    let mut all_delta = der.clone();
    for delta in deltas {
        let sp = if *delta == chain_delta {
            chain_node.clone()
        } else {
            endos(&solve_delta_der(alg, delta))
        };
        entries.push(DeltaEntry {
            delta: format_rational(delta),
            dimension: sp.len(),
            contains_der: span_contains(&flat(&sp), &flat(&der)),
            contains_identity: span_contains(&flat(&sp), &[id.entries().to_vec()]),
        });
        all_delta.extend(sp);
    }
    let delta_span = echelon_endos(&all_delta);
    let qder = solve_qder(alg).head_span();
    let gder = endos(&solve_gder(alg));
    let end: Vec<Endo> = (0..d)
        .flat_map(|i| (0..d).map(move |j| Matrix::unit(d, i, j)))
        .collect();

    let links = vec![
        relate("Der", &der, &node, &chain_node),
        relate(&node, &chain_node, "QDer", &qder),
        relate("QDer", &qder, "GDer", &gder),
        relate("GDer", &gder, "End", &end),
    ];
    ChainReport {
        algebra_hash: alg.content_hash(),
        der: der.len(),
        chain_delta: format_rational(&chain_delta),
        chain_delta_dim: chain_node.len(),
        deltas: entries,
        delta_span: delta_span.len(),
        qder_heads: qder.len(),
        gder: gder.len(),
        end: end.len(),
        links,
    }
}
